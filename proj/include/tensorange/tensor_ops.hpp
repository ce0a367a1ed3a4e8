#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "tensorange/real_matrix.hpp"
#include "tensorange/tensor_shape.hpp"

namespace tensorange {

/// Gamma_S(B): transposes the tensor factors listed in S. Implemented as an
/// index permutation; sparse inputs stay sparse.
RealMatrix partial_transpose(const RealMatrix& B, const TensorShape& shape, const SubsystemSet& S);

/// Bipartite shorthand for partial_transpose(B, shape, {2}).
RealMatrix partial_transpose(const RealMatrix& B, const TensorShape& shape);

/// (B + B^T) / 2, exactly symmetric.
RealMatrix symmetrize(const RealMatrix& B);

struct PartialSymmetricParts {
  RealMatrix invariant;     ///< X = (B + B^Gamma) / 2, X^Gamma = X
  RealMatrix anti_invariant;  ///< Y = (B - B^Gamma) / 2, Y^Gamma = -Y
};

/// Unique split B = X + Y of a symmetric bipartite matrix into a partial
/// transpose invariant and anti-invariant part. Throws SymmetryError when B
/// is not symmetric within tolerance, DimensionError when shape is not
/// bipartite.
PartialSymmetricParts partial_symmetrize(const RealMatrix& B, const TensorShape& shape);

/// (B + B^T + B^Gamma + (B^T)^Gamma) / 4 for a bipartite shape. The result
/// is symmetric and equals its own partial transpose.
RealMatrix full_symmetrize(const RealMatrix& B, const TensorShape& shape);

/// Column-by-column vectorization; vec(Y)^T (a (x) b) = b^T Y a.
Eigen::VectorXd vec(const Eigen::MatrixXd& Y);

/// Inverse of vec for an m x n matrix.
Eigen::MatrixXd unvec(const Eigen::VectorXd& v, std::size_t rows, std::size_t cols);

struct SubspaceProjector {
  RealMatrix matrix;   ///< P_S, acting on R^n (x) R^m
  std::size_t rank = 0;
  std::size_t rows = 0;  ///< m
  std::size_t cols = 0;  ///< n
  Eigen::MatrixXd orthonormal_basis;  ///< columns q_i spanning vec(S)

  /// Tensor structure of vec(S): (n, m).
  [[nodiscard]] TensorShape shape() const { return TensorShape::bipartite(cols, rows); }
};

/// Orthogonal projection onto vec(span(basis)). Uses modified Gram-Schmidt
/// with one re-orthogonalization pass; vectors whose residual falls below
/// 1e-10 of their original norm are dropped as dependent.
SubspaceProjector projector_onto_subspace(const std::vector<Eigen::MatrixXd>& basis);

/// Block description of a linear map Phi: M_m -> M_n, block (i, j) = Phi(E_ij).
class MapBlocks {
 public:
  MapBlocks(std::size_t m, std::size_t n, std::vector<Eigen::MatrixXd> blocks);

  /// Evaluates an arbitrary linear map on the matrix units.
  static MapBlocks from_map(std::size_t m, std::size_t n,
                            const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& map);

  [[nodiscard]] std::size_t m() const { return m_; }
  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] const Eigen::MatrixXd& block(std::size_t i, std::size_t j) const {
    return blocks_.at(i * m_ + j);
  }
  /// Phi(X) via linearity.
  [[nodiscard]] Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<Eigen::MatrixXd> blocks_;
};

/// C_Phi = sum_ij E_ij (x) Phi(E_ij), tensor shape (m, n).
RealMatrix choi_from_blocks(const MapBlocks& phi);

/// Phi_c(X) with diagonal x11 + c x22 + x33, x11 + x22 + c x33,
/// c x11 + x22 + x33 and off-diagonal entries -x_kl. c = 0 is the Choi map.
MapBlocks generalized_choi_map(double c);

struct TransposePreservation {
  bool preserving = false;
  double defect = 0.0;  ///< max |C - C^T|
};

/// A map is transpose-preserving iff its Choi matrix is symmetric.
TransposePreservation is_transpose_preserving(const RealMatrix& C);

}  // namespace tensorange
