#include "tensorange/tensor_shape.hpp"

#include <charconv>
#include <limits>

#include "tensorange/errors.hpp"

namespace tensorange {

namespace {

std::size_t parse_size(std::string_view token, std::string_view context) {
  std::size_t value = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || token.empty()) {
    throw ParseError("cannot parse '" + std::string(token) + "' in " + std::string(context));
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

TensorShape::TensorShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw DimensionError("tensor shape needs at least one factor");
  if (dims_.size() > 64) throw DimensionError("tensor shape supports at most 64 factors");
  strides_.assign(dims_.size(), 1);
  for (std::size_t k = dims_.size(); k-- > 0;) {
    if (dims_[k] == 0) throw DimensionError("tensor factor dimensions must be positive");
    strides_[k] = total_;
    if (total_ > std::numeric_limits<std::size_t>::max() / dims_[k]) {
      throw DimensionError("tensor shape total dimension overflows");
    }
    total_ *= dims_[k];
  }
}

TensorShape TensorShape::parse(std::string_view text) {
  std::vector<std::size_t> dims;
  text = trim(text);
  while (true) {
    auto comma = text.find(',');
    dims.push_back(parse_size(trim(text.substr(0, comma)), "shape"));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return TensorShape(std::move(dims));
}

std::vector<std::size_t> TensorShape::unravel(std::size_t idx) const {
  std::vector<std::size_t> multi(dims_.size());
  for (std::size_t k = 0; k < dims_.size(); ++k) multi[k] = digit(idx, k);
  return multi;
}

std::size_t TensorShape::ravel(std::span<const std::size_t> multi) const {
  if (multi.size() != dims_.size()) throw DimensionError("multi-index length mismatch");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (multi[k] >= dims_[k]) throw DimensionError("multi-index out of range");
    idx += multi[k] * strides_[k];
  }
  return idx;
}

std::string TensorShape::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(dims_[k]);
  }
  return out;
}

SubsystemSet::SubsystemSet(std::initializer_list<std::size_t> members) {
  for (auto m : members) {
    if (m < 1 || m > 64) throw DimensionError("subsystem index out of range");
    mask_ |= std::uint64_t{1} << (m - 1);
  }
}

SubsystemSet SubsystemSet::parse(std::string_view text) {
  text = trim(text);
  SubsystemSet s;
  if (text.empty()) return s;
  while (true) {
    auto comma = text.find(',');
    auto m = parse_size(trim(text.substr(0, comma)), "subsystem set");
    if (m < 1 || m > 64) throw ParseError("subsystem index out of range: " + std::to_string(m));
    s.mask_ |= std::uint64_t{1} << (m - 1);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return s;
}

std::vector<SubsystemSet> SubsystemSet::parse_list(std::string_view text) {
  std::vector<SubsystemSet> sets;
  while (true) {
    auto semi = text.find(';');
    sets.push_back(parse(text.substr(0, semi)));
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  return sets;
}

std::vector<std::size_t> SubsystemSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k <= 64; ++k)
    if (contains(k)) out.push_back(k);
  return out;
}

void SubsystemSet::validate(const TensorShape& shape) const {
  const auto p = shape.factors();
  if (p < 64 && (mask_ >> p) != 0) {
    throw DimensionError("subsystem set " + to_string() + " exceeds " + std::to_string(p) +
                         " factors");
  }
}

SubsystemSet SubsystemSet::complement(const TensorShape& shape) const {
  validate(shape);
  const auto p = shape.factors();
  const std::uint64_t all = p == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << p) - 1);
  return from_mask(all & ~mask_);
}

std::string SubsystemSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (auto m : members()) {
    if (!first) out += ',';
    out += std::to_string(m);
    first = false;
  }
  return out + "}";
}

std::vector<SubsystemSet> default_subsystem_family(const TensorShape& shape) {
  const auto p = shape.factors();
  if (p > 20) throw DimensionError("default subsystem family is limited to 20 factors");
  std::vector<SubsystemSet> family;
  const std::uint64_t count = std::uint64_t{1} << (p - 1);
  for (std::uint64_t rest = 0; rest < count; ++rest) family.push_back(SubsystemSet::from_mask(rest << 1));
  return family;
}

}  // namespace tensorange
