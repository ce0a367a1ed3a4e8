#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "tensorange/eigensolver.hpp"
#include "tensorange/real_matrix.hpp"
#include "tensorange/tensor_shape.hpp"

namespace tensorange {

/// v_1 (x) ... (x) v_p with unit factors.
struct ProductVector {
  std::vector<Eigen::VectorXd> factors;
  /// x^T B x for the matrix last passed to evaluate().
  double value = 0.0;

  /// Draws every factor uniformly from its unit sphere.
  static ProductVector random(const TensorShape& shape, std::mt19937_64& rng);

  /// Kronecker product, last factor fastest (matches TensorShape indexing).
  [[nodiscard]] Eigen::VectorXd full() const;
  double evaluate(const RealMatrix& B);
  /// Throws DimensionError if the factors do not fit the shape.
  void check(const TensorShape& shape) const;
};

struct SampleResult {
  double best_min = 0.0;  ///< >= mu_min
  double best_max = 0.0;  ///< <= mu_max
  ProductVector argmin;
  ProductVector argmax;
  int samples = 0;
};

/// Random product-vector sampling. Sample i draws from its own stream seeded
/// from (seed, i), so results do not depend on the thread count.
SampleResult sample_mu(const RealMatrix& B, const TensorShape& shape, int samples, std::uint64_t seed,
                       unsigned threads = 0);

struct AscentResult {
  ProductVector vector;
  double value = 0.0;
  std::vector<double> history;  ///< objective after every factor update
  int sweeps = 0;
};

/// Block-coordinate ascent over the factors (round robin). Updating factor j
/// replaces it by the extreme eigenvector of the contracted matrix M_j, so
/// the objective is monotone in the chosen direction. Stops once a full
/// sweep improves by less than tol * max(1, |value|) or after `iters` sweeps.
AscentResult alternating_ascent(const RealMatrix& B, const TensorShape& shape, const ProductVector& start,
                                Extreme direction, int iters = 200, double tol = 1e-12);

/// Best of `starts` ascent runs from seeded random product vectors.
AscentResult multi_start_ascent(const RealMatrix& B, const TensorShape& shape, Extreme direction, int starts,
                                std::uint64_t seed, unsigned threads = 0);

struct GridResult {
  double mu_min = 0.0;
  double mu_max = 0.0;
  /// |true mu - grid value| <= error_bound for both ends.
  double error_bound = 0.0;
  double argmin_alpha = 0.0, argmin_beta = 0.0;
  double argmax_alpha = 0.0, argmax_beta = 0.0;
};

/// Exhaustive (alpha, beta) grid over [0, pi)^2 with v = (cos a, sin a),
/// w = (cos b, sin b). B must be 4 x 4 (shape 2,2); resolution >= 8.
GridResult grid_mu_2x2(const RealMatrix& B, int resolution);

}  // namespace tensorange
