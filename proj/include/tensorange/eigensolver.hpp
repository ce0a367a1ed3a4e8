#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string_view>

#include "tensorange/real_matrix.hpp"

namespace tensorange {

enum class Extreme { min, max };

enum class SolverMethod { automatic, dense, iterative };

std::string_view to_string(Extreme e);
std::string_view to_string(SolverMethod m);

struct SolverConfig {
  SolverMethod method = SolverMethod::automatic;
  /// Relative residual target: |Mx - lambda x| <= tolerance * max(1, |M|_max * dim).
  double tolerance = 1e-10;
  /// Restart cycles of the iterative solver.
  int max_iterations = 1000;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  /// Krylov basis size before a thick restart.
  int krylov_dim = 64;
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  bool converged = true;
  SolverMethod method_used = SolverMethod::dense;
  int matvecs = 0;
};

/// Method auto-selection: dense when dim <= 1024 or the stored density
/// exceeds 10%, iterative otherwise.
SolverMethod resolve_method(const RealMatrix& M, SolverMethod requested);

/// Extremal eigenpair of a symmetric matrix.
///
/// The dense path runs a full symmetric eigendecomposition. The iterative
/// path is a thick-restart Lanczos iteration with full re-orthogonalization
/// over a basis of cfg.krylov_dim vectors; the minimum is obtained by
/// negation. A non-converged iterative run returns the best Ritz pair with
/// converged = false.
///
/// Throws SymmetryError if M is not symmetric within tolerance.
EigenPair extreme_eigenpair(const RealMatrix& M, Extreme which, const SolverConfig& cfg = {});

/// As above, starting the iterative path from `start` (ignored by the dense
/// path or when its size does not match).
EigenPair extreme_eigenpair(const RealMatrix& M, Extreme which, const SolverConfig& cfg,
                            const Eigen::VectorXd& start);

struct EigenInterval {
  double min = 0.0;
  double max = 0.0;
  bool converged = true;
};

/// [lambda_min, lambda_max], the trivial bound interval.
EigenInterval eigenvalue_interval(const RealMatrix& M, const SolverConfig& cfg = {});

/// Residual scale used by the convergence contract.
double residual_scale(const RealMatrix& M);

}  // namespace tensorange
