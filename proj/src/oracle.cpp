#include "tensorange/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>

#include "tensorange/errors.hpp"
#include "tensorange/parallel.hpp"
#include "tensorange/tensor_ops.hpp"

namespace tensorange {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index + 1)));
}

// Restriction of x^T B x to factor j with the other factors held fixed.
Eigen::MatrixXd contract(const RealMatrix& B, const TensorShape& shape, const ProductVector& x, std::size_t j) {
  const auto nj = static_cast<Eigen::Index>(shape.dim(j));
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nj, nj);
  const std::size_t p = shape.factors();
  B.for_each_entry([&](std::size_t r, std::size_t c, double v) {
    if (v == 0.0) return;
    double w = v;
    for (std::size_t k = 0; k < p && w != 0.0; ++k) {
      if (k == j) continue;
      const auto& f = x.factors[k];
      w *= f[static_cast<Eigen::Index>(shape.digit(r, k))] * f[static_cast<Eigen::Index>(shape.digit(c, k))];
    }
    M(static_cast<Eigen::Index>(shape.digit(r, j)), static_cast<Eigen::Index>(shape.digit(c, j))) += w;
  });
  return 0.5 * (M + M.transpose());
}

}  // namespace

ProductVector ProductVector::random(const TensorShape& shape, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ProductVector out;
  for (auto d : shape.dims()) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(d));
    do {
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
    } while (v.norm() == 0.0);
    out.factors.push_back(v / v.norm());
  }
  return out;
}

Eigen::VectorXd ProductVector::full() const {
  Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
  for (const auto& f : factors) {
    Eigen::VectorXd next(x.size() * f.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) next.segment(i * f.size(), f.size()) = x[i] * f;
    x = std::move(next);
  }
  return x;
}

double ProductVector::evaluate(const RealMatrix& B) {
  value = B.quadratic_form(full());
  return value;
}

void ProductVector::check(const TensorShape& shape) const {
  if (factors.size() != shape.factors()) throw DimensionError("product vector has the wrong number of factors");
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (static_cast<std::size_t>(factors[k].size()) != shape.dim(k))
      throw DimensionError("product vector factor " + std::to_string(k + 1) + " has the wrong length");
  }
}

SampleResult sample_mu(const RealMatrix& B, const TensorShape& shape, int samples, std::uint64_t seed,
                       unsigned threads) {
  if (samples < 1) throw InvalidArgument("sample_mu needs at least one sample");
  if (B.dim() != shape.total_dim()) throw DimensionError("sample_mu: matrix does not match shape");
  std::vector<double> values(static_cast<std::size_t>(samples));
  parallel_for(values.size(), threads, [&](std::size_t i) {
    auto rng = stream(seed, i);
    values[i] = ProductVector::random(shape, rng).evaluate(B);
  });
  std::size_t imin = 0;
  std::size_t imax = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[imin]) imin = i;
    if (values[i] > values[imax]) imax = i;
  }
  SampleResult out;
  out.samples = samples;
  auto rmin = stream(seed, imin);
  out.argmin = ProductVector::random(shape, rmin);
  out.best_min = out.argmin.evaluate(B);
  auto rmax = stream(seed, imax);
  out.argmax = ProductVector::random(shape, rmax);
  out.best_max = out.argmax.evaluate(B);
  return out;
}

AscentResult alternating_ascent(const RealMatrix& B, const TensorShape& shape, const ProductVector& start,
                                Extreme direction, int iters, double tol) {
  if (B.dim() != shape.total_dim()) throw DimensionError("alternating_ascent: matrix does not match shape");
  start.check(shape);
  AscentResult out;
  out.vector = start;
  for (auto& f : out.vector.factors) f /= f.norm();
  out.value = out.vector.evaluate(B);
  out.history.push_back(out.value);
  const double sign = direction == Extreme::max ? 1.0 : -1.0;

  for (int sweep = 0; sweep < iters; ++sweep) {
    const double before = out.value;
    for (std::size_t j = 0; j < shape.factors(); ++j) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(contract(B, shape, out.vector, j));
      const Eigen::Index idx = direction == Extreme::max ? es.eigenvalues().size() - 1 : 0;
      const double candidate = es.eigenvalues()[idx];
      // Keep the current factor unless the update is a strict improvement,
      // which keeps the recorded history monotone despite rounding.
      if (sign * candidate > sign * out.value) {
        out.vector.factors[j] = es.eigenvectors().col(idx).normalized();
        out.value = candidate;
      }
      out.history.push_back(out.value);
    }
    out.sweeps = sweep + 1;
    if (sign * (out.value - before) <= tol * std::max(1.0, std::abs(out.value))) break;
  }
  out.vector.value = out.value;
  return out;
}

AscentResult multi_start_ascent(const RealMatrix& B, const TensorShape& shape, Extreme direction, int starts,
                                std::uint64_t seed, unsigned threads) {
  if (starts < 1) throw InvalidArgument("multi_start_ascent needs at least one start");
  std::vector<AscentResult> runs(static_cast<std::size_t>(starts));
  parallel_for(runs.size(), threads, [&](std::size_t i) {
    auto rng = stream(seed, i);
    runs[i] = alternating_ascent(B, shape, ProductVector::random(shape, rng), direction);
  });
  const double sign = direction == Extreme::max ? 1.0 : -1.0;
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (sign * runs[i].value > sign * runs[best].value) best = i;
  return runs[best];
}

GridResult grid_mu_2x2(const RealMatrix& B, int resolution) {
  if (B.dim() != 4) throw DimensionError("grid_mu_2x2 needs a 4 x 4 matrix (shape 2,2)");
  if (resolution < 8) throw InvalidArgument("grid resolution must be at least 8");
  const Eigen::MatrixXd D = symmetrize(B).to_dense();
  const double h = std::numbers::pi / resolution;
  GridResult out;
  out.mu_min = std::numeric_limits<double>::infinity();
  out.mu_max = -std::numeric_limits<double>::infinity();
  Eigen::Vector4d x;
  for (int i = 0; i < resolution; ++i) {
    const double a = i * h;
    const double ca = std::cos(a), sa = std::sin(a);
    for (int k = 0; k < resolution; ++k) {
      const double b = k * h;
      const double cb = std::cos(b), sb = std::sin(b);
      x << ca * cb, ca * sb, sa * cb, sa * sb;
      const double v = x.dot(D * x);
      if (v < out.mu_min) {
        out.mu_min = v;
        out.argmin_alpha = a;
        out.argmin_beta = b;
      }
      if (v > out.mu_max) {
        out.mu_max = v;
        out.argmax_alpha = a;
        out.argmax_beta = b;
      }
    }
  }
  // |d/da f|, |d/db f| <= 2 |D|_2 and every point of [0, pi)^2 is within h/2
  // of the grid in each coordinate (the objective is pi-periodic in both).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D, Eigen::EigenvaluesOnly);
  const double norm2 = es.eigenvalues().cwiseAbs().maxCoeff();
  out.error_bound = 2.0 * norm2 * h;
  return out;
}

}  // namespace tensorange
