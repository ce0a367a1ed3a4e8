#include "tensorange/tensor_ops.hpp"

#include <cmath>

#include "tensorange/errors.hpp"

namespace tensorange {

namespace {

// Contribution of the factors in S to each flat index.
std::vector<std::size_t> subsystem_offsets(const TensorShape& shape, const SubsystemSet& S) {
  const auto members = S.members();
  std::vector<std::size_t> offsets(shape.total_dim(), 0);
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    std::size_t off = 0;
    for (auto m : members) off += shape.digit(i, m - 1) * shape.stride(m - 1);
    offsets[i] = off;
  }
  return offsets;
}

void require_bipartite(const TensorShape& shape, const char* what) {
  if (!shape.is_bipartite()) throw DimensionError(std::string(what) + " requires a bipartite shape");
}

}  // namespace

RealMatrix partial_transpose(const RealMatrix& B, const TensorShape& shape, const SubsystemSet& S) {
  if (B.dim() != shape.total_dim()) {
    throw DimensionError("matrix dimension " + std::to_string(B.dim()) + " does not match shape " +
                         shape.to_string());
  }
  S.validate(shape);
  if (S.empty()) return B;

  const auto off = subsystem_offsets(shape, S);
  if (B.is_sparse()) {
    std::vector<RealMatrix::Triplet> triplets;
    triplets.reserve(B.nonzeros());
    B.for_each_entry([&](std::size_t r, std::size_t c, double v) {
      const auto nr = r - off[r] + off[c];
      const auto nc = c - off[c] + off[r];
      triplets.emplace_back(static_cast<int>(nr), static_cast<int>(nc), v);
    });
    return RealMatrix::from_triplets(B.dim(), triplets);
  }

  const auto& src = B.dense();
  const auto n = static_cast<Eigen::Index>(B.dim());
  RealMatrix::Dense out(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto ru = static_cast<std::size_t>(r);
      out(static_cast<Eigen::Index>(ru - off[ru] + off[cu]), static_cast<Eigen::Index>(cu - off[cu] + off[ru])) =
          src(r, c);
    }
  }
  return RealMatrix(std::move(out));
}

RealMatrix partial_transpose(const RealMatrix& B, const TensorShape& shape) {
  require_bipartite(shape, "partial_transpose");
  return partial_transpose(B, shape, SubsystemSet{2});
}

RealMatrix symmetrize(const RealMatrix& B) { return combine(0.5, B, 0.5, B.transpose()); }

PartialSymmetricParts partial_symmetrize(const RealMatrix& B, const TensorShape& shape) {
  require_bipartite(shape, "partial_symmetrize");
  const double defect = B.symmetry_defect();
  if (defect > symmetry_tolerance(B)) {
    throw SymmetryError("partial_symmetrize needs a symmetric matrix (defect " + std::to_string(defect) + ")");
  }
  const auto Bg = partial_transpose(B, shape);
  return {combine(0.5, B, 0.5, Bg), combine(0.5, B, -0.5, Bg)};
}

RealMatrix full_symmetrize(const RealMatrix& B, const TensorShape& shape) {
  require_bipartite(shape, "full_symmetrize");
  const auto S = symmetrize(B);
  return combine(0.5, S, 0.5, partial_transpose(S, shape));
}

Eigen::VectorXd vec(const Eigen::MatrixXd& Y) {
  return Eigen::Map<const Eigen::VectorXd>(Y.data(), Y.size());
}

Eigen::MatrixXd unvec(const Eigen::VectorXd& v, std::size_t rows, std::size_t cols) {
  if (static_cast<std::size_t>(v.size()) != rows * cols) throw DimensionError("unvec size mismatch");
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), static_cast<Eigen::Index>(rows),
                                           static_cast<Eigen::Index>(cols));
}

SubspaceProjector projector_onto_subspace(const std::vector<Eigen::MatrixXd>& basis) {
  if (basis.empty()) throw InvalidArgument("subspace basis is empty");
  const auto rows = basis.front().rows();
  const auto cols = basis.front().cols();
  for (const auto& Y : basis) {
    if (Y.rows() != rows || Y.cols() != cols) throw DimensionError("basis matrices differ in size");
  }

  const Eigen::Index len = rows * cols;
  Eigen::MatrixXd Q(len, static_cast<Eigen::Index>(basis.size()));
  Eigen::Index rank = 0;
  for (const auto& Y : basis) {
    Eigen::VectorXd v = vec(Y);
    const double original = v.norm();
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < rank; ++j) v -= Q.col(j).dot(v) * Q.col(j);
    }
    const double residual = v.norm();
    if (residual < 1e-10 * original) continue;
    Q.col(rank++) = v / residual;
  }
  if (rank == 0) throw InvalidArgument("subspace basis is all zero");

  Eigen::MatrixXd q = Q.leftCols(rank);
  RealMatrix::Dense P = q * q.transpose();
  RealMatrix::Dense Ps = 0.5 * (P + P.transpose());
  SubspaceProjector out{symmetrize(RealMatrix(std::move(Ps))), static_cast<std::size_t>(rank),
                        static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(q)};
  return out;
}

MapBlocks::MapBlocks(std::size_t m, std::size_t n, std::vector<Eigen::MatrixXd> blocks)
    : m_(m), n_(n), blocks_(std::move(blocks)) {
  if (m_ == 0 || n_ == 0) throw DimensionError("map dimensions must be positive");
  if (blocks_.size() != m_ * m_) throw DimensionError("map needs an m x m grid of blocks");
  for (const auto& b : blocks_) {
    if (static_cast<std::size_t>(b.rows()) != n_ || static_cast<std::size_t>(b.cols()) != n_)
      throw DimensionError("map blocks must be n x n");
    for (Eigen::Index i = 0; i < b.size(); ++i)
      if (!std::isfinite(b.data()[i])) throw InvalidArgument("map block contains NaN or Inf");
  }
}

MapBlocks MapBlocks::from_map(std::size_t m, std::size_t n,
                              const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& map) {
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(m * m);
  const auto mi = static_cast<Eigen::Index>(m);
  for (Eigen::Index i = 0; i < mi; ++i) {
    for (Eigen::Index j = 0; j < mi; ++j) {
      Eigen::MatrixXd E = Eigen::MatrixXd::Zero(mi, mi);
      E(i, j) = 1.0;
      blocks.push_back(map(E));
    }
  }
  return MapBlocks(m, n, std::move(blocks));
}

Eigen::MatrixXd MapBlocks::apply(const Eigen::MatrixXd& X) const {
  if (static_cast<std::size_t>(X.rows()) != m_ || static_cast<std::size_t>(X.cols()) != m_)
    throw DimensionError("map input must be m x m");
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < m_; ++j)
      out += X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * block(i, j);
  return out;
}

RealMatrix choi_from_blocks(const MapBlocks& phi) {
  const auto m = static_cast<Eigen::Index>(phi.m());
  const auto n = static_cast<Eigen::Index>(phi.n());
  RealMatrix::Dense C(m * n, m * n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      C.block(i * n, j * n, n, n) = phi.block(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return RealMatrix(std::move(C));
}

MapBlocks generalized_choi_map(double c) {
  return MapBlocks::from_map(3, 3, [c](const Eigen::MatrixXd& X) {
    Eigen::MatrixXd out = -X;
    out(0, 0) = X(0, 0) + c * X(1, 1) + X(2, 2);
    out(1, 1) = X(0, 0) + X(1, 1) + c * X(2, 2);
    out(2, 2) = c * X(0, 0) + X(1, 1) + X(2, 2);
    return out;
  });
}

TransposePreservation is_transpose_preserving(const RealMatrix& C) {
  const double defect = C.symmetry_defect();
  return {defect <= symmetry_tolerance(C), defect};
}

}  // namespace tensorange
