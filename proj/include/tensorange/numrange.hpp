#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tensorange/eigensolver.hpp"
#include "tensorange/real_matrix.hpp"
#include "tensorange/tensor_shape.hpp"

namespace tensorange {

struct NumRangeConfig {
  SolverConfig solver;
  /// Binary search stops once the bracketing tangent angles are this close.
  double angle_tol = 1e-12;
  /// Searches stop once outer - inner <= value_tol * max(1, |B|_max).
  double value_tol = 1e-9;
  /// Golden-section search stops at relative bracket width p_tol.
  double p_tol = 1e-12;
  /// Bracket expansion limit for the weight p.
  double p_limit = 1e6;
  /// Hard cap on eigenproblems per endpoint search.
  int max_evaluations = 600;
  /// Quadratic forms must agree within this (times max(1, |B|_max)) for a
  /// joint inner point.
  double agreement_tol = 1e-8;
  /// Subgradient iterations per set in the multipartite search.
  int subgradient_iterations_per_set = 500;
  /// Worker threads for embarrassingly parallel loops; 0 = default.
  unsigned threads = 0;
};

/// One boundary probe of W(B + i Bg): the support value h(theta) of the
/// direction (cos theta, -sin theta) and the witness boundary point.
struct SupportEvaluation {
  double theta = 0.0;
  double support_value = 0.0;
  Eigen::VectorXd witness;
  double re = 0.0;  ///< x^T B x
  double im = 0.0;  ///< x^T Bg x
  bool certified = true;
};

/// Certified endpoint of W^{1+i}(B) or W^{P,1}(B).
struct DiagonalBound {
  Extreme kind = Extreme::max;
  /// Attained by a concrete unit vector; absent when no such point was
  /// recorded (multipartite searches without agreement).
  std::optional<double> inner;
  /// Certified bound from supporting lines / eigenvalues.
  double outer = 0.0;
  /// outer - inner for max, inner - outer for min; absent with inner.
  std::optional<double> gap;
  int evaluations = 0;
  /// false when the search hit a budget or an eigensolve did not converge.
  bool certified = true;
  /// Optimal weights (p for the bipartite ternary search, p_1..p_k for
  /// joint searches) or the final angle, depending on the method.
  std::vector<double> argument;
  std::string method;
  std::vector<std::string> notes;
};

/// Weighted family sum_j p_j M_j with sum_j p_j = 1.
struct AffineFamily {
  std::vector<RealMatrix> matrices;
  std::vector<double> weights;

  /// Throws DimensionError on mismatched sizes, InvalidArgument when the
  /// weights do not sum to one within 1e-14 (relative to their magnitude).
  void validate() const;
  [[nodiscard]] RealMatrix combination() const;
};

/// Returns the matrix itself when exactly symmetric, (B + B^T)/2 otherwise.
/// `changed` reports whether symmetrization altered the input.
RealMatrix prepare_symmetric(const RealMatrix& B, bool* changed = nullptr);

/// Support of W(B + i Bg) in direction theta via lambda_max(cos(theta) B -
/// sin(theta) Bg). B and Bg must be symmetric with equal dimension.
SupportEvaluation support_point(const RealMatrix& B, const RealMatrix& Bg, double theta,
                                const SolverConfig& cfg = {});

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct BoundaryResult {
  std::vector<SupportEvaluation> evaluations;  ///< inner polygon, in angle order
  std::vector<Point2> outer_polygon;          ///< intersections of consecutive tangents
  [[nodiscard]] std::vector<Point2> inner_polygon() const;
};

double polygon_area(const std::vector<Point2>& poly);

/// Evaluates support_point at n_angles evenly spaced angles in [0, 2 pi).
BoundaryResult boundary(const RealMatrix& B, const TensorShape& shape, int n_angles, const NumRangeConfig& cfg = {});

/// CSV with columns theta,support_value,re,im.
std::string boundary_csv(const BoundaryResult& result);

/// Endpoint of W^{1+i}(B) by binary search on the tangent angle.
DiagonalBound w_diag_angle(const RealMatrix& B, const TensorShape& shape, Extreme kind, const NumRangeConfig& cfg = {});

/// Endpoint of W^{1+i}(B) as the optimum of lambda(pB + (1-p)B^Gamma) over p,
/// by bracket expansion and golden-section search.
DiagonalBound w_diag_ternary(const RealMatrix& B, const TensorShape& shape, Extreme kind,
                             const NumRangeConfig& cfg = {});

/// Angle search against the pair (yB, zB^Gamma) along the ray c(y, z).
/// Throws InvalidArgument when y or z is zero.
DiagonalBound w_diag_scaled(const RealMatrix& B, const TensorShape& shape, Extreme kind, double y, double z,
                            const NumRangeConfig& cfg = {});

/// Endpoint of W^{P,1}(B): optimum of lambda(sum_j p_j Gamma_{S_j}(B)) over
/// sum_j p_j = 1. Duplicate sets and complements of earlier sets are removed
/// first since they do not change the result.
DiagonalBound w_joint_diag(const RealMatrix& B, const TensorShape& shape, const std::vector<SubsystemSet>& P,
                           Extreme kind, const NumRangeConfig& cfg = {});

/// Removes duplicates and complements of earlier members.
std::vector<SubsystemSet> reduce_subsystem_family(const std::vector<SubsystemSet>& P, const TensorShape& shape);

struct TrivialBounds {
  EigenInterval full;  ///< [lambda_min(B), lambda_max(B)]
  /// One interval per factor j: eigenvalues of Gamma_{j}(B).
  std::vector<EigenInterval> partial;
  [[nodiscard]] double best_min() const;  ///< max of the lower ends
  [[nodiscard]] double best_max() const;  ///< min of the upper ends
};

TrivialBounds trivial_bounds(const RealMatrix& B, const TensorShape& shape, const SolverConfig& cfg = {});

}  // namespace tensorange
