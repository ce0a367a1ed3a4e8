#include "tensorange/real_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "tensorange/errors.hpp"

namespace tensorange {

namespace {

void check_finite(const double* data, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i)
    if (!std::isfinite(data[i])) throw InvalidArgument("matrix contains NaN or Inf entries");
}

}  // namespace

RealMatrix::RealMatrix(Dense m) {
  if (m.rows() != m.cols()) throw DimensionError("RealMatrix must be square");
  check_finite(m.data(), m.size());
  storage_ = std::move(m);
}

RealMatrix::RealMatrix(Sparse m) {
  if (m.rows() != m.cols()) throw DimensionError("RealMatrix must be square");
  m.makeCompressed();
  check_finite(m.valuePtr(), m.nonZeros());
  storage_ = std::move(m);
}

RealMatrix RealMatrix::from_triplets(std::size_t dim, const std::vector<Triplet>& triplets) {
  const auto n = static_cast<Eigen::Index>(dim);
  for (const auto& t : triplets) {
    if (t.row() < 0 || t.col() < 0 || t.row() >= n || t.col() >= n)
      throw DimensionError("triplet index out of range");
  }
  Sparse s(n, n);
  s.setFromTriplets(triplets.begin(), triplets.end());
  return RealMatrix(std::move(s));
}

RealMatrix RealMatrix::identity(std::size_t dim, bool sparse) {
  const auto n = static_cast<Eigen::Index>(dim);
  if (!sparse) return RealMatrix(Dense(Dense::Identity(n, n)));
  Sparse s(n, n);
  s.setIdentity();
  return RealMatrix(std::move(s));
}

RealMatrix RealMatrix::zero(std::size_t dim, bool sparse) {
  const auto n = static_cast<Eigen::Index>(dim);
  if (!sparse) return RealMatrix(Dense(Dense::Zero(n, n)));
  return RealMatrix(Sparse(n, n));
}

std::size_t RealMatrix::dim() const {
  return std::visit([](const auto& m) { return static_cast<std::size_t>(m.rows()); }, storage_);
}

std::size_t RealMatrix::nonzeros() const {
  if (const auto* s = std::get_if<Sparse>(&storage_)) return static_cast<std::size_t>(s->nonZeros());
  const auto& d = std::get<Dense>(storage_);
  return static_cast<std::size_t>((d.array() != 0.0).count());
}

double RealMatrix::density() const {
  const double n = static_cast<double>(dim());
  return n == 0 ? 0.0 : static_cast<double>(nonzeros()) / (n * n);
}

RealMatrix::Dense RealMatrix::to_dense() const {
  if (const auto* s = std::get_if<Sparse>(&storage_)) return Dense(*s);
  return std::get<Dense>(storage_);
}

RealMatrix RealMatrix::as_sparse() const {
  if (is_sparse()) return *this;
  Sparse s = std::get<Dense>(storage_).sparseView();
  return RealMatrix(std::move(s));
}

double RealMatrix::coeff(std::size_t row, std::size_t col) const {
  const auto r = static_cast<Eigen::Index>(row);
  const auto c = static_cast<Eigen::Index>(col);
  if (const auto* s = std::get_if<Sparse>(&storage_)) return s->coeff(r, c);
  return std::get<Dense>(storage_)(r, c);
}

Eigen::VectorXd RealMatrix::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(x.size());
  apply(x, y);
  return y;
}

void RealMatrix::apply(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Ref<Eigen::VectorXd> y) const {
  if (static_cast<std::size_t>(x.size()) != dim() || y.size() != x.size())
    throw DimensionError("matrix-vector size mismatch");
  if (const auto* s = std::get_if<Sparse>(&storage_)) {
    y.noalias() = *s * x;
  } else {
    y.noalias() = std::get<Dense>(storage_) * x;
  }
}

double RealMatrix::quadratic_form(const Eigen::VectorXd& x) const { return x.dot(apply(x)); }

double RealMatrix::max_abs() const {
  if (const auto* s = std::get_if<Sparse>(&storage_)) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < s->nonZeros(); ++i) best = std::max(best, std::abs(s->valuePtr()[i]));
    return best;
  }
  const auto& d = std::get<Dense>(storage_);
  return d.size() == 0 ? 0.0 : d.cwiseAbs().maxCoeff();
}

double RealMatrix::trace() const {
  if (const auto* s = std::get_if<Sparse>(&storage_)) {
    double t = 0.0;
    for (Eigen::Index r = 0; r < s->outerSize(); ++r) t += s->coeff(r, r);
    return t;
  }
  return std::get<Dense>(storage_).trace();
}

RealMatrix RealMatrix::transpose() const {
  if (const auto* s = std::get_if<Sparse>(&storage_)) return RealMatrix(Sparse(s->transpose()));
  return RealMatrix(Dense(std::get<Dense>(storage_).transpose()));
}

double RealMatrix::symmetry_defect() const {
  if (const auto* s = std::get_if<Sparse>(&storage_)) {
    Sparse diff = *s - Sparse(s->transpose());
    double best = 0.0;
    for (Eigen::Index i = 0; i < diff.nonZeros(); ++i) best = std::max(best, std::abs(diff.valuePtr()[i]));
    return best;
  }
  const auto& d = std::get<Dense>(storage_);
  return d.size() == 0 ? 0.0 : (d - d.transpose()).cwiseAbs().maxCoeff();
}

bool RealMatrix::is_symmetric() const { return symmetry_defect() <= symmetry_tolerance(*this); }

RealMatrix combine(double a, const RealMatrix& A, double b, const RealMatrix& B) {
  if (A.dim() != B.dim()) throw DimensionError("matrix dimensions differ");
  if (A.is_sparse() && B.is_sparse()) {
    RealMatrix::Sparse s = a * A.sparse() + b * B.sparse();
    s.prune(0.0);
    return RealMatrix(std::move(s));
  }
  RealMatrix::Dense d = A.to_dense() * a;
  if (B.is_sparse()) {
    d += b * RealMatrix::Dense(B.sparse());
  } else {
    d += b * B.dense();
  }
  return RealMatrix(std::move(d));
}

RealMatrix operator*(double s, const RealMatrix& A) {
  if (A.is_sparse()) return RealMatrix(RealMatrix::Sparse(s * A.sparse()));
  return RealMatrix(RealMatrix::Dense(s * A.dense()));
}

double symmetry_tolerance(const RealMatrix& m) { return 1e-10 * std::max(1.0, m.max_abs()); }

}  // namespace tensorange
