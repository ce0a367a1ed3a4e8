#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstddef>
#include <variant>
#include <vector>

namespace tensorange {

/// Square real matrix with either dense or compressed sparse storage.
///
/// Values are immutable after construction and always finite. Sparse
/// storage is row-major compressed with sorted, deduplicated entries.
class RealMatrix {
 public:
  using Dense = Eigen::MatrixXd;
  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  using Triplet = Eigen::Triplet<double>;

  RealMatrix() : storage_(Dense(0, 0)) {}
  explicit RealMatrix(Dense m);
  explicit RealMatrix(Sparse m);

  /// Builds a sparse matrix; duplicate (row, col) entries are summed.
  static RealMatrix from_triplets(std::size_t dim, const std::vector<Triplet>& triplets);
  static RealMatrix identity(std::size_t dim, bool sparse = false);
  static RealMatrix zero(std::size_t dim, bool sparse = false);

  [[nodiscard]] bool is_sparse() const { return std::holds_alternative<Sparse>(storage_); }
  [[nodiscard]] std::size_t dim() const;
  [[nodiscard]] std::size_t nonzeros() const;
  /// Stored entries over dim^2.
  [[nodiscard]] double density() const;

  /// Throws std::bad_variant_access when the storage kind differs.
  [[nodiscard]] const Dense& dense() const { return std::get<Dense>(storage_); }
  [[nodiscard]] const Sparse& sparse() const { return std::get<Sparse>(storage_); }

  [[nodiscard]] Dense to_dense() const;
  [[nodiscard]] RealMatrix as_dense() const { return RealMatrix(to_dense()); }
  [[nodiscard]] RealMatrix as_sparse() const;

  [[nodiscard]] double coeff(std::size_t row, std::size_t col) const;

  [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// y = this * x, y must already have the right size.
  void apply(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Ref<Eigen::VectorXd> y) const;
  [[nodiscard]] double quadratic_form(const Eigen::VectorXd& x) const;

  [[nodiscard]] double max_abs() const;
  [[nodiscard]] double trace() const;
  [[nodiscard]] RealMatrix transpose() const;
  /// max |B - B^T| over all entries.
  [[nodiscard]] double symmetry_defect() const;
  /// symmetry_defect() <= 1e-10 * max(1, max_abs()).
  [[nodiscard]] bool is_symmetric() const;

  /// Calls f(row, col, value) for every stored entry (all entries when dense).
  template <class F>
  void for_each_entry(F&& f) const {
    if (const auto* s = std::get_if<Sparse>(&storage_)) {
      for (Eigen::Index r = 0; r < s->outerSize(); ++r)
        for (Sparse::InnerIterator it(*s, r); it; ++it)
          f(static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), it.value());
    } else {
      const auto& d = std::get<Dense>(storage_);
      for (Eigen::Index c = 0; c < d.cols(); ++c)
        for (Eigen::Index r = 0; r < d.rows(); ++r)
          f(static_cast<std::size_t>(r), static_cast<std::size_t>(c), d(r, c));
    }
  }

  /// a * A + b * B. Sparse when both operands are sparse, dense otherwise.
  friend RealMatrix combine(double a, const RealMatrix& A, double b, const RealMatrix& B);
  friend RealMatrix operator*(double s, const RealMatrix& A);
  friend RealMatrix operator+(const RealMatrix& A, const RealMatrix& B) { return combine(1.0, A, 1.0, B); }
  friend RealMatrix operator-(const RealMatrix& A, const RealMatrix& B) { return combine(1.0, A, -1.0, B); }

 private:
  std::variant<Dense, Sparse> storage_;
};

/// Symmetry tolerance used throughout: 1e-10 * max(1, |B|_max).
double symmetry_tolerance(const RealMatrix& m);

}  // namespace tensorange
