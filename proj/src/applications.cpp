#include "tensorange/applications.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>
#include <iomanip>

#include "tensorange/errors.hpp"
#include "tensorange/parallel.hpp"
#include "tensorange/report_json.hpp"
#include "tensorange/tensor_ops.hpp"

namespace tensorange {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void absorb(CertificateReport& r, const DiagonalBound& b) {
  if (!b.certified) r.converged = false;
  r.notes.insert(r.notes.end(), b.notes.begin(), b.notes.end());
}

}  // namespace

std::string_view to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::angle:
      return "angle";
    case BoundMethod::ternary:
      return "ternary";
    case BoundMethod::automatic:
      return "auto";
  }
  return "auto";
}

BoundMethod parse_bound_method(std::string_view text) {
  if (text == "angle") return BoundMethod::angle;
  if (text == "ternary") return BoundMethod::ternary;
  if (text == "auto") return BoundMethod::automatic;
  throw InvalidArgument("unknown method '" + std::string(text) + "' (expected angle, ternary or auto)");
}

DiagonalBound w_diag(const RealMatrix& B, const TensorShape& shape, Extreme kind, BoundMethod method,
                     const NumRangeConfig& cfg) {
  if (method == BoundMethod::angle) return w_diag_angle(B, shape, kind, cfg);
  return w_diag_ternary(B, shape, kind, cfg);
}

std::string fnv1a_hex(const std::vector<std::size_t>& dims, const std::vector<double>& values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto eat = [&](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (auto d : dims) {
    const auto v = static_cast<std::uint64_t>(d);
    eat(&v, sizeof v);
  }
  for (double v : values) {
    if (v == 0.0) v = 0.0;  // fold -0.0
    eat(&v, sizeof v);
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

InputsDigest digest_matrix(const RealMatrix& M, const std::vector<std::size_t>& dims) {
  // Hash a canonical dense column-major view so storage kind does not matter.
  const Eigen::MatrixXd D = M.to_dense();
  std::vector<double> values(D.data(), D.data() + D.size());
  return {dims, fnv1a_hex(dims, values)};
}

CertificateReport certify_rank_one_avoiding(const std::vector<Eigen::MatrixXd>& basis, const ApplicationConfig& cfg) {
  const auto proj = projector_onto_subspace(basis);
  const auto shape = proj.shape();
  const auto w = w_diag(proj.matrix, shape, Extreme::max, cfg.method, cfg.numrange);
  const auto trivial = trivial_bounds(proj.matrix, shape, cfg.numrange.solver);

  CertificateReport r;
  absorb(r, w);
  r.headline_value = w.outer;
  r.verdict = w.outer < 1.0 - cfg.margin ? "certified-rank-one-avoiding" : "inconclusive";
  r.baselines["lambda_max"] = trivial.full.max;
  r.baselines["lambda_max_partial_transpose"] = trivial.partial.back().max;
  r.details["bound"] = to_json(w);
  r.details["subspace_dimension"] = proj.rank;
  r.details["basis_size"] = basis.size();
  r.details["rank_one_distance_bound"] = std::sqrt(std::max(0.0, w.outer));
  r.details["threshold"] = 1.0 - cfg.margin;
  r.details["margin"] = cfg.margin;

  std::vector<double> values;
  for (const auto& Y : basis) values.insert(values.end(), Y.data(), Y.data() + Y.size());
  r.inputs_digest.dims = {proj.rows, proj.cols, basis.size()};
  r.inputs_digest.hash = fnv1a_hex(r.inputs_digest.dims, values);
  return r;
}

CertificateReport certify_positive_map(const RealMatrix& choi, std::size_t m, std::size_t n,
                                       const ApplicationConfig& cfg) {
  if (choi.dim() != m * n) {
    throw DimensionError("Choi matrix dimension " + std::to_string(choi.dim()) + " does not match m*n = " +
                         std::to_string(m * n));
  }
  const auto tp = is_transpose_preserving(choi);
  if (!tp.preserving) {
    throw SymmetryError("map is not transpose-preserving (Choi matrix asymmetry " + std::to_string(tp.defect) + ")");
  }
  const auto shape = TensorShape::bipartite(m, n);
  const auto w = w_diag(choi, shape, Extreme::min, cfg.method, cfg.numrange);
  const auto trivial = trivial_bounds(choi, shape, cfg.numrange.solver);

  CertificateReport r;
  absorb(r, w);
  r.headline_value = w.outer;
  r.verdict = w.outer >= -cfg.margin ? "certified-positive" : "inconclusive";
  r.baselines["lambda_min"] = trivial.full.min;
  r.baselines["lambda_min_partial_transpose"] = trivial.partial.back().min;
  r.details["bound"] = to_json(w);
  r.details["decomposable"] = r.certified();
  r.details["transpose_defect"] = tp.defect;
  r.details["threshold"] = -cfg.margin;
  r.details["margin"] = cfg.margin;
  r.inputs_digest = digest_matrix(choi, {m, n});
  return r;
}

CertificateReport certify_entanglement_witness(const RealMatrix& B, const TensorShape& shape,
                                               const ApplicationConfig& cfg) {
  if (!shape.is_bipartite()) throw DimensionError("witness certification needs a bipartite shape");
  if (B.dim() != shape.total_dim()) throw DimensionError("matrix does not match shape " + shape.to_string());
  const RealMatrix X = full_symmetrize(B, shape);
  const auto lambda = extreme_eigenpair(X, Extreme::min, cfg.numrange.solver);
  const auto w = w_diag(B, shape, Extreme::min, cfg.method, cfg.numrange);

  CertificateReport r;
  absorb(r, w);
  if (!lambda.converged) r.converged = false;
  r.headline_value = w.outer;
  const bool nonneg = w.outer >= -cfg.margin;
  const bool not_psd = lambda.value < -cfg.margin;
  r.verdict = nonneg && not_psd ? "certified-witness" : "inconclusive";
  r.baselines["lambda_min_X"] = lambda.value;
  r.details["bound"] = to_json(w);
  r.details["c_star"] = -w.outer;
  r.details["eigenvalue_shift"] = -lambda.value;
  r.details["c_star_improves_eigenvalue_shift"] = -w.outer < -lambda.value;
  r.details["bound_nonnegative"] = nonneg;
  r.details["x_not_psd"] = not_psd;
  r.details["margin"] = cfg.margin;
  r.inputs_digest = digest_matrix(B, shape.dims());
  return r;
}

std::vector<Eigen::MatrixXd> random_subspace(std::size_t m, std::size_t n, std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(mix(seed));
  std::normal_distribution<double> normal;
  std::vector<Eigen::MatrixXd> basis;
  basis.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    Eigen::MatrixXd Y(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (Eigen::Index c = 0; c < Y.cols(); ++c)
      for (Eigen::Index r = 0; r < Y.rows(); ++r) Y(r, c) = normal(rng);
    basis.push_back(std::move(Y));
  }
  return basis;
}

StudyResult random_subspace_study(std::size_t m, std::size_t n, std::size_t k, int trials, std::uint64_t seed,
                                  const ApplicationConfig& cfg, unsigned threads) {
  if (m == 0 || n == 0) throw InvalidArgument("study dimensions must be positive");
  if (k < 1 || k > m * n) throw InvalidArgument("subspace dimension k must lie in [1, m*n]");
  if (trials < 1) throw InvalidArgument("study needs at least one trial");

  StudyResult out;
  out.m = m;
  out.n = n;
  out.k = k;
  out.trials = trials;
  out.values.resize(static_cast<std::size_t>(trials));
  std::vector<char> certified(out.values.size(), 0);
  std::vector<char> converged(out.values.size(), 1);
  parallel_for(out.values.size(), threads, [&](std::size_t i) {
    const auto basis = random_subspace(m, n, k, mix(seed) ^ mix(i + 1));
    const auto rep = certify_rank_one_avoiding(basis, cfg);
    out.values[i] = rep.headline_value;
    certified[i] = rep.certified() ? 1 : 0;
    converged[i] = rep.converged ? 1 : 0;
  });
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.certified += certified[i];
    if (!converged[i]) out.converged = false;
  }
  out.probability = static_cast<double>(out.certified) / trials;
  return out;
}

}  // namespace tensorange
