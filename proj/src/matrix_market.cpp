#include "tensorange/matrix_market.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tensorange/errors.hpp"

namespace tensorange::mm {

namespace {

enum class Symmetry { general, symmetric, skew };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("line " + std::to_string(line) + ": bad numeric value '" + std::string(tok) + "'");
  }
  return v;
}

std::size_t parse_index(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("line " + std::to_string(line) + ": bad integer '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

Eigen::MatrixXd MarketMatrix::to_dense() const {
  if (!coordinate) return values;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (const auto& t : triplets) out(t.row(), t.col()) += t.value();
  return out;
}

RealMatrix MarketMatrix::to_real_matrix() const {
  if (rows != cols) {
    throw DimensionError("expected a square matrix, got " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (coordinate) return RealMatrix::from_triplets(rows, triplets);
  return RealMatrix(values);
}

std::vector<MarketMatrix> read_all(std::istream& in) {
  std::vector<MarketMatrix> out;
  std::string raw;
  std::size_t lineno = 0;

  // Parser state for the block currently being read.
  bool in_block = false;
  bool have_size = false;
  Symmetry sym = Symmetry::general;
  std::size_t expected = 0;
  std::size_t seen = 0;
  MarketMatrix cur;
  std::optional<TensorShape> pending_shape;

  auto finish = [&]() {
    if (!in_block) return;
    if (!have_size) throw ParseError("Matrix Market block without size line");
    if (seen != expected) {
      throw ParseError("Matrix Market block expected " + std::to_string(expected) + " entries, got " +
                       std::to_string(seen));
    }
    out.push_back(std::move(cur));
    cur = MarketMatrix{};
    in_block = false;
    have_size = false;
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty()) continue;

    if (line.rfind("%%", 0) == 0) {
      finish();
      auto toks = split(line);
      if (toks.size() < 5 || lower(std::string(toks[0])) != "%%matrixmarket" || lower(std::string(toks[1])) != "matrix") {
        throw ParseError("line " + std::to_string(lineno) + ": unsupported Matrix Market banner");
      }
      const auto format = lower(std::string(toks[2]));
      const auto field = lower(std::string(toks[3]));
      const auto symmetry = lower(std::string(toks[4]));
      if (format != "coordinate" && format != "array") throw ParseError("unsupported format " + format);
      if (field != "real" && field != "integer" && field != "double")
        throw ParseError("unsupported field '" + field + "' (only real matrices)");
      if (symmetry == "general") {
        sym = Symmetry::general;
      } else if (symmetry == "symmetric") {
        sym = Symmetry::symmetric;
      } else if (symmetry == "skew-symmetric") {
        sym = Symmetry::skew;
      } else {
        throw ParseError("unsupported symmetry '" + symmetry + "'");
      }
      cur = MarketMatrix{};
      cur.coordinate = format == "coordinate";
      cur.shape_annotation = pending_shape;
      pending_shape.reset();
      in_block = true;
      seen = 0;
      continue;
    }

    if (line.front() == '%') {
      auto body = trim(line.substr(1));
      if (body.rfind("shape:", 0) == 0) {
        auto shape = TensorShape::parse(trim(body.substr(6)));
        if (in_block) {
          cur.shape_annotation = shape;
        } else {
          pending_shape = shape;
        }
      }
      continue;
    }

    if (!in_block) throw ParseError("line " + std::to_string(lineno) + ": data before %%MatrixMarket banner");
    auto toks = split(line);

    if (!have_size) {
      if (cur.coordinate) {
        if (toks.size() != 3) throw ParseError("line " + std::to_string(lineno) + ": bad coordinate size line");
        cur.rows = parse_index(toks[0], lineno);
        cur.cols = parse_index(toks[1], lineno);
        expected = parse_index(toks[2], lineno);
        cur.triplets.reserve(sym == Symmetry::general ? expected : 2 * expected);
      } else {
        if (toks.size() != 2) throw ParseError("line " + std::to_string(lineno) + ": bad array size line");
        cur.rows = parse_index(toks[0], lineno);
        cur.cols = parse_index(toks[1], lineno);
        if (sym != Symmetry::general && cur.rows != cur.cols) throw ParseError("symmetric array must be square");
        const auto n = cur.rows;
        expected = sym == Symmetry::general ? n * cur.cols
                   : sym == Symmetry::symmetric ? n * (n + 1) / 2
                                                : n * (n - 1) / 2;
        cur.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cur.rows), static_cast<Eigen::Index>(cur.cols));
      }
      if (sym != Symmetry::general && cur.rows != cur.cols) throw ParseError("symmetric matrix must be square");
      have_size = true;
      continue;
    }

    if (seen >= expected) throw ParseError("line " + std::to_string(lineno) + ": more entries than declared");

    if (cur.coordinate) {
      if (toks.size() != 3) throw ParseError("line " + std::to_string(lineno) + ": expected 'row col value'");
      const auto r = parse_index(toks[0], lineno);
      const auto c = parse_index(toks[1], lineno);
      const double v = parse_double(toks[2], lineno);
      if (r < 1 || c < 1 || r > cur.rows || c > cur.cols)
        throw ParseError("line " + std::to_string(lineno) + ": index out of range");
      const int ri = static_cast<int>(r - 1);
      const int ci = static_cast<int>(c - 1);
      cur.triplets.emplace_back(ri, ci, v);
      if (sym != Symmetry::general && r != c) cur.triplets.emplace_back(ci, ri, sym == Symmetry::skew ? -v : v);
      if (sym == Symmetry::skew && r == c) throw ParseError("skew-symmetric matrix with diagonal entry");
    } else {
      for (auto tok : toks) {
        if (seen >= expected) throw ParseError("line " + std::to_string(lineno) + ": more entries than declared");
        const double v = parse_double(tok, lineno);
        const auto n = static_cast<std::size_t>(cur.rows);
        if (sym == Symmetry::general) {
          cur.values(static_cast<Eigen::Index>(seen % n), static_cast<Eigen::Index>(seen / n)) = v;
        } else {
          // Lower triangle, column by column (strictly lower for skew).
          std::size_t k = seen;
          std::size_t col = 0;
          const std::size_t start_off = sym == Symmetry::symmetric ? 0 : 1;
          while (k >= n - col - start_off) {
            k -= n - col - start_off;
            ++col;
          }
          const std::size_t row = col + start_off + k;
          const auto ri = static_cast<Eigen::Index>(row);
          const auto cc = static_cast<Eigen::Index>(col);
          cur.values(ri, cc) = v;
          cur.values(cc, ri) = sym == Symmetry::skew ? -v : v;
        }
        ++seen;
      }
      continue;
    }
    ++seen;
  }
  finish();
  if (out.empty()) throw ParseError("no Matrix Market data found");
  return out;
}

RealMatrix read_matrix(std::istream& in, std::optional<TensorShape>* annotation) {
  auto all = read_all(in);
  if (all.size() != 1) throw ParseError("expected a single matrix, found " + std::to_string(all.size()));
  if (annotation) *annotation = all.front().shape_annotation;
  return all.front().to_real_matrix();
}

RealMatrix read_matrix_file(const std::string& path, std::optional<TensorShape>* annotation) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_matrix(in, annotation);
}

std::vector<Eigen::MatrixXd> read_blocks_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<Eigen::MatrixXd> blocks;
  for (const auto& m : read_all(in)) blocks.push_back(m.to_dense());
  return blocks;
}

void write_matrix(std::ostream& out, const RealMatrix& m, const std::optional<TensorShape>& shape) {
  const auto n = m.dim();
  if (m.is_sparse()) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    if (shape) out << "% shape: " << shape->to_string() << '\n';
    out << n << ' ' << n << ' ' << m.nonzeros() << '\n';
    m.for_each_entry([&](std::size_t r, std::size_t c, double v) {
      out << r + 1 << ' ' << c + 1 << ' ' << format_double(v) << '\n';
    });
  } else {
    out << "%%MatrixMarket matrix array real general\n";
    if (shape) out << "% shape: " << shape->to_string() << '\n';
    out << n << ' ' << n << '\n';
    m.for_each_entry([&](std::size_t, std::size_t, double v) { out << format_double(v) << '\n'; });
  }
}

void write_matrix_file(const std::string& path, const RealMatrix& m, const std::optional<TensorShape>& shape) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  write_matrix(out, m, shape);
}

void write_block(std::ostream& out, const Eigen::MatrixXd& m) {
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) out << format_double(m(r, c)) << '\n';
}

}  // namespace tensorange::mm
