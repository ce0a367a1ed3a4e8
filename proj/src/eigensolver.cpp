#include "tensorange/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tensorange/errors.hpp"
#include "tensorange/tensor_ops.hpp"

namespace tensorange {

std::string_view to_string(Extreme e) { return e == Extreme::min ? "min" : "max"; }

std::string_view to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::automatic:
      return "auto";
    case SolverMethod::dense:
      return "dense";
    case SolverMethod::iterative:
      return "iterative";
  }
  return "auto";
}

double residual_scale(const RealMatrix& M) {
  return std::max(1.0, M.max_abs() * static_cast<double>(M.dim()));
}

SolverMethod resolve_method(const RealMatrix& M, SolverMethod requested) {
  if (requested != SolverMethod::automatic) return requested;
  if (M.dim() <= 1024 || M.density() > 0.1) return SolverMethod::dense;
  return SolverMethod::iterative;
}

namespace {

// Orthogonalizes w against the columns of V with two classical Gram-Schmidt
// passes.
void orthogonalize(Eigen::Ref<Eigen::VectorXd> w, const Eigen::Ref<const Eigen::MatrixXd>& V) {
  if (V.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::VectorXd h = V.transpose() * w;
    w.noalias() -= V * h;
  }
}

Eigen::VectorXd random_unit(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v / v.norm();
}

EigenPair dense_extreme(const RealMatrix& M, Extreme which) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.to_dense());
  if (es.info() != Eigen::Success) throw Error("dense symmetric eigendecomposition failed");
  const Eigen::Index idx = which == Extreme::max ? es.eigenvalues().size() - 1 : 0;
  EigenPair out;
  out.vector = es.eigenvectors().col(idx);
  out.vector /= out.vector.norm();
  // The Rayleigh quotient of the computed vector is accurate to second order
  // in the vector error and reproduces exact eigenvalues of simple matrices.
  const Eigen::VectorXd Mx = M.apply(out.vector);
  out.value = out.vector.dot(Mx) / out.vector.squaredNorm();
  out.residual = (Mx - out.value * out.vector).norm();
  out.converged = true;
  out.method_used = SolverMethod::dense;
  out.matvecs = 0;
  return out;
}

// Thick-restart Lanczos for the largest eigenvalue of sign * M. The
// projected matrix is formed explicitly from the stored products A V, so
// kept Ritz vectors and the continuation vector need no special structure.
EigenPair lanczos_extreme(const RealMatrix& M, Extreme which, const SolverConfig& cfg,
                          const Eigen::VectorXd* start) {
  const double sign = which == Extreme::max ? 1.0 : -1.0;
  const auto N = static_cast<Eigen::Index>(M.dim());
  const Eigen::Index m = std::clamp<Eigen::Index>(cfg.krylov_dim, 2, std::max<Eigen::Index>(N, 2));
  const Eigen::Index basis = std::min(m, N);
  const Eigen::Index keep = std::max<Eigen::Index>(1, std::min(basis - 2, basis / 2));
  const double target = cfg.tolerance * residual_scale(M);

  std::mt19937_64 rng(cfg.seed);
  Eigen::MatrixXd V(N, basis);
  Eigen::MatrixXd AV(N, basis);
  int matvecs = 0;

  auto multiply = [&](Eigen::Index col) {
    M.apply(V.col(col), AV.col(col));
    AV.col(col) *= sign;
    ++matvecs;
  };

  // Random vector orthogonal to the first `cols` basis vectors; false if none
  // could be found (the basis already spans the space).
  auto inject_random = [&](Eigen::Index cols) {
    for (int attempt = 0; attempt < 3; ++attempt) {
      Eigen::VectorXd r = random_unit(N, rng);
      orthogonalize(r, V.leftCols(cols));
      const double nr = r.norm();
      if (nr > 1e-8) {
        V.col(cols) = r / nr;
        return true;
      }
    }
    return false;
  };

  if (start && start->size() == N && start->norm() > 0.0) {
    V.col(0) = *start / start->norm();
  } else {
    V.col(0) = random_unit(N, rng);
  }
  multiply(0);
  Eigen::Index j = 1;

  EigenPair best;
  best.method_used = SolverMethod::iterative;
  best.converged = false;
  double best_residual = std::numeric_limits<double>::infinity();

  for (int cycle = 0; cycle <= cfg.max_iterations; ++cycle) {
    bool invariant = false;
    while (j < basis) {
      Eigen::VectorXd w = AV.col(j - 1);
      const double before = w.norm();
      orthogonalize(w, V.leftCols(j));
      const double beta = w.norm();
      if (beta <= 1e-10 * before || before == 0.0) {
        invariant = true;
        break;
      }
      V.col(j) = w / beta;
      multiply(j);
      ++j;
    }

    Eigen::MatrixXd H = V.leftCols(j).transpose() * AV.leftCols(j);
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXd s = es.eigenvectors().col(j - 1);
    Eigen::VectorXd y = V.leftCols(j) * s;
    y /= y.norm();
    Eigen::VectorXd Ay = M.apply(y);
    ++matvecs;
    const double rq = y.dot(Ay);
    const double residual = (Ay - rq * y).norm();
    if (residual < best_residual) {
      best_residual = residual;
      best.value = rq;
      best.vector = y;
      best.residual = residual;
    }
    if (residual <= target || j == N) {
      best.converged = true;
      break;
    }
    if (cycle == cfg.max_iterations) break;

    // Thick restart: keep the top Ritz vectors plus the continuation vector.
    const Eigen::Index k = std::min(keep, j - 1);
    Eigen::VectorXd f = AV.col(j - 1);
    orthogonalize(f, V.leftCols(j));
    const Eigen::MatrixXd Sk = es.eigenvectors().rightCols(k);
    Eigen::MatrixXd Vk = V.leftCols(j) * Sk;
    Eigen::MatrixXd AVk = AV.leftCols(j) * Sk;
    V.leftCols(k) = Vk;
    AV.leftCols(k) = AVk;
    const double fn = f.norm();
    if (!invariant && fn > 1e-10 * std::max(1e-300, std::abs(rq))) {
      V.col(k) = f / fn;
      orthogonalize(V.col(k), V.leftCols(k));
      V.col(k) /= V.col(k).norm();
    } else if (!inject_random(k)) {
      best.converged = true;
      break;
    }
    multiply(k);
    j = k + 1;
  }

  best.matvecs = matvecs;
  return best;
}

EigenPair solve(const RealMatrix& M, Extreme which, const SolverConfig& cfg, const Eigen::VectorXd* start) {
  if (M.dim() == 0) throw DimensionError("eigenproblem on an empty matrix");
  if (cfg.tolerance <= 0.0 || cfg.max_iterations < 1) throw InvalidArgument("invalid solver configuration");
  const double defect = M.symmetry_defect();
  if (defect > symmetry_tolerance(M)) {
    throw SymmetryError("eigensolver needs a symmetric matrix (defect " + std::to_string(defect) + ")");
  }
  RealMatrix symmetrized;
  const RealMatrix* use = &M;
  if (defect > 0.0) {
    symmetrized = symmetrize(M);
    use = &symmetrized;
  }
  if (resolve_method(*use, cfg.method) == SolverMethod::dense) return dense_extreme(*use, which);
  return lanczos_extreme(*use, which, cfg, start);
}

}  // namespace

EigenPair extreme_eigenpair(const RealMatrix& M, Extreme which, const SolverConfig& cfg) {
  return solve(M, which, cfg, nullptr);
}

EigenPair extreme_eigenpair(const RealMatrix& M, Extreme which, const SolverConfig& cfg,
                            const Eigen::VectorXd& start) {
  return solve(M, which, cfg, &start);
}

EigenInterval eigenvalue_interval(const RealMatrix& M, const SolverConfig& cfg) {
  const auto lo = extreme_eigenpair(M, Extreme::min, cfg);
  const auto hi = extreme_eigenpair(M, Extreme::max, cfg);
  return {lo.value, hi.value, lo.converged && hi.converged};
}

}  // namespace tensorange
