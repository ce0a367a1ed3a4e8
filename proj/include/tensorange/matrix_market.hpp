#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tensorange/real_matrix.hpp"
#include "tensorange/tensor_shape.hpp"

namespace tensorange::mm {

/// A single Matrix Market object as read from a stream. Coordinate files
/// carry triplets, array files a dense column-major matrix; the object may
/// be rectangular.
struct MarketMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool coordinate = false;
  std::vector<RealMatrix::Triplet> triplets;  ///< coordinate only, symmetry already expanded
  Eigen::MatrixXd values;                     ///< array only
  std::optional<TensorShape> shape_annotation;  ///< from a "% shape: n1,n2" comment

  [[nodiscard]] Eigen::MatrixXd to_dense() const;
  /// Square matrices only; coordinate input becomes sparse storage.
  [[nodiscard]] RealMatrix to_real_matrix() const;
};

/// Reads every Matrix Market object in the stream (files may hold several
/// blocks, each starting with its own %%MatrixMarket banner). Supports
/// `matrix coordinate|array real|integer general|symmetric|skew-symmetric`.
std::vector<MarketMatrix> read_all(std::istream& in);

/// Reads exactly one square matrix.
RealMatrix read_matrix(std::istream& in, std::optional<TensorShape>* annotation = nullptr);
RealMatrix read_matrix_file(const std::string& path, std::optional<TensorShape>* annotation = nullptr);

/// Reads a sequence of rectangular blocks (e.g. a subspace basis).
std::vector<Eigen::MatrixXd> read_blocks_file(const std::string& path);

/// Writes sparse storage as `coordinate real general` and dense storage as
/// `array real general`. Values use the shortest round-trip representation,
/// so reading back reproduces them bit for bit.
void write_matrix(std::ostream& out, const RealMatrix& m, const std::optional<TensorShape>& shape = std::nullopt);
void write_matrix_file(const std::string& path, const RealMatrix& m,
                       const std::optional<TensorShape>& shape = std::nullopt);

/// Appends one rectangular `array real general` block.
void write_block(std::ostream& out, const Eigen::MatrixXd& m);

}  // namespace tensorange::mm
