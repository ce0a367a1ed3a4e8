#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tensorange {

/// Factor dimensions (n_1, ..., n_p) of a tensor product space.
///
/// Multi-indices are row-major over factors in shape order: the last factor
/// varies fastest. For a bipartite shape (m, n) the flat index of (i, k) is
/// i * n + k, i.e. entry (k, l) of block (i, j).
class TensorShape {
 public:
  explicit TensorShape(std::vector<std::size_t> dims);
  TensorShape(std::initializer_list<std::size_t> dims)
      : TensorShape(std::vector<std::size_t>(dims)) {}

  static TensorShape bipartite(std::size_t m, std::size_t n) { return TensorShape({m, n}); }

  /// Parses "n1,n2,...". Throws ParseError on malformed text.
  static TensorShape parse(std::string_view text);

  [[nodiscard]] std::size_t factors() const { return dims_.size(); }
  [[nodiscard]] std::size_t dim(std::size_t factor) const { return dims_.at(factor); }
  [[nodiscard]] const std::vector<std::size_t>& dims() const { return dims_; }
  [[nodiscard]] std::size_t total_dim() const { return total_; }
  [[nodiscard]] bool is_bipartite() const { return dims_.size() == 2; }

  /// Stride of factor k in the flat index.
  [[nodiscard]] std::size_t stride(std::size_t factor) const { return strides_.at(factor); }

  /// Digit of factor k inside flat index idx.
  [[nodiscard]] std::size_t digit(std::size_t idx, std::size_t factor) const {
    return (idx / strides_[factor]) % dims_[factor];
  }

  [[nodiscard]] std::vector<std::size_t> unravel(std::size_t idx) const;
  [[nodiscard]] std::size_t ravel(std::span<const std::size_t> multi) const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const TensorShape&, const TensorShape&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

/// Subset S of the factors {1, ..., p}, stored as a bitmask (bit k-1 for
/// factor k). Factor numbering is 1-based to match the usual notation.
class SubsystemSet {
 public:
  SubsystemSet() = default;
  SubsystemSet(std::initializer_list<std::size_t> members);

  static SubsystemSet from_mask(std::uint64_t mask) {
    SubsystemSet s;
    s.mask_ = mask;
    return s;
  }

  /// Parses a comma separated member list; the empty string is the empty set.
  static SubsystemSet parse(std::string_view text);

  /// Parses "--p-sets" syntax: semicolon separated comma lists, e.g. ";2;3;2,3".
  static std::vector<SubsystemSet> parse_list(std::string_view text);

  [[nodiscard]] bool contains(std::size_t factor) const {
    return factor >= 1 && factor <= 64 && ((mask_ >> (factor - 1)) & 1U) != 0;
  }
  [[nodiscard]] bool empty() const { return mask_ == 0; }
  [[nodiscard]] std::uint64_t mask() const { return mask_; }
  [[nodiscard]] std::vector<std::size_t> members() const;

  /// Throws DimensionError if any member exceeds shape.factors().
  void validate(const TensorShape& shape) const;

  [[nodiscard]] SubsystemSet symmetric_difference(const SubsystemSet& other) const {
    return from_mask(mask_ ^ other.mask_);
  }
  [[nodiscard]] SubsystemSet complement(const TensorShape& shape) const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const SubsystemSet&, const SubsystemSet&) = default;

 private:
  std::uint64_t mask_ = 0;
};

/// One representative of every complementary pair {S, [p] \ S}: all subsets
/// that do not contain factor 1. For p = 2 this is {{}, {2}}.
std::vector<SubsystemSet> default_subsystem_family(const TensorShape& shape);

}  // namespace tensorange
