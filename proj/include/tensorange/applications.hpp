#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tensorange/numrange.hpp"
#include "tensorange/real_matrix.hpp"
#include "tensorange/tensor_shape.hpp"

namespace tensorange {

enum class BoundMethod { angle, ternary, automatic };

std::string_view to_string(BoundMethod m);
/// "angle", "ternary" or "auto"; throws InvalidArgument otherwise.
BoundMethod parse_bound_method(std::string_view text);

/// Dispatches to w_diag_angle / w_diag_ternary; auto picks the ternary search.
DiagonalBound w_diag(const RealMatrix& B, const TensorShape& shape, Extreme kind, BoundMethod method,
                     const NumRangeConfig& cfg = {});

struct ApplicationConfig {
  NumRangeConfig numrange;
  BoundMethod method = BoundMethod::automatic;
  /// Absolute margin on every headline comparison.
  double margin = 1e-8;
};

struct InputsDigest {
  std::vector<std::size_t> dims;
  std::string hash;  ///< FNV-1a 64 over dims and values, hex
};

struct CertificateReport {
  /// "certified-rank-one-avoiding", "certified-positive", "certified-witness"
  /// or "inconclusive".
  std::string verdict;
  double headline_value = 0.0;
  std::map<std::string, double> baselines;
  nlohmann::json details = nlohmann::json::object();
  InputsDigest inputs_digest;
  std::vector<std::string> notes;
  /// false if any eigensolve or search did not converge.
  bool converged = true;

  [[nodiscard]] bool certified() const { return verdict != "inconclusive"; }
};

/// Checks whether span(basis) contains no rank-one matrix: certified when
/// the max endpoint w of P_S satisfies w < 1 - margin. d(S) <= sqrt(w).
CertificateReport certify_rank_one_avoiding(const std::vector<Eigen::MatrixXd>& basis,
                                            const ApplicationConfig& cfg = {});

/// Positivity (and decomposability) of the map with Choi matrix `choi` of
/// shape (m, n): certified when the min endpoint w satisfies w >= -margin.
/// Throws SymmetryError when the map is not transpose-preserving.
CertificateReport certify_positive_map(const RealMatrix& choi, std::size_t m, std::size_t n,
                                       const ApplicationConfig& cfg = {});

/// X = full_symmetrize(B) is certified as an entanglement witness when the
/// min endpoint of B is >= -margin while lambda_min(X) < -margin. Reports the
/// shift c* = -w for which X + cI is certified for all c >= c*.
CertificateReport certify_entanglement_witness(const RealMatrix& B, const TensorShape& shape,
                                               const ApplicationConfig& cfg = {});

struct StudyResult {
  std::size_t m = 0, n = 0, k = 0;
  int trials = 0;
  int certified = 0;
  double probability = 0.0;
  std::vector<double> values;  ///< headline value per trial
  bool converged = true;
};

/// Certifies `trials` Haar-random k-dimensional subspaces of M_{m,n}. Trial i
/// uses its own RNG stream derived from (seed, i); results are identical for
/// any thread count.
StudyResult random_subspace_study(std::size_t m, std::size_t n, std::size_t k, int trials, std::uint64_t seed,
                                  const ApplicationConfig& cfg = {}, unsigned threads = 0);

/// Gaussian matrices orthonormalized in the Frobenius inner product: a
/// Haar-random k-dimensional subspace of M_{m,n}.
std::vector<Eigen::MatrixXd> random_subspace(std::size_t m, std::size_t n, std::size_t k, std::uint64_t seed);

std::string fnv1a_hex(const std::vector<std::size_t>& dims, const std::vector<double>& values);
InputsDigest digest_matrix(const RealMatrix& M, const std::vector<std::size_t>& dims);

}  // namespace tensorange
