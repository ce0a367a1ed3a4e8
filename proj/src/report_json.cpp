#include "tensorange/report_json.hpp"

namespace tensorange {

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json interval(const EigenInterval& e) {
  return {{"lambda_min", e.min}, {"lambda_max", e.max}, {"converged", e.converged}};
}

nlohmann::json factors(const ProductVector& v) {
  auto arr = nlohmann::json::array();
  for (const auto& f : v.factors) arr.push_back(std::vector<double>(f.data(), f.data() + f.size()));
  return arr;
}

}  // namespace

nlohmann::json to_json(const DiagonalBound& b) {
  return {{"kind", std::string(to_string(b.kind))},
          {"inner", optional_number(b.inner)},
          {"outer", b.outer},
          {"gap", optional_number(b.gap)},
          {"evaluations", b.evaluations},
          {"certified", b.certified},
          {"argument", b.argument},
          {"method", b.method},
          {"notes", b.notes}};
}

nlohmann::json to_json(const TrivialBounds& t) {
  auto partial = nlohmann::json::array();
  for (const auto& p : t.partial) partial.push_back(interval(p));
  return {{"full", interval(t.full)},
          {"partial_transposes", partial},
          {"best_min", t.best_min()},
          {"best_max", t.best_max()}};
}

nlohmann::json to_json(const CertificateReport& r) {
  return {{"verdict", r.verdict},
          {"headline_value", r.headline_value},
          {"baselines", r.baselines},
          {"details", r.details},
          {"inputs_digest", {{"dims", r.inputs_digest.dims}, {"hash", r.inputs_digest.hash}}},
          {"notes", r.notes},
          {"converged", r.converged}};
}

nlohmann::json to_json(const StudyResult& s) {
  return {{"m", s.m},           {"n", s.n},
          {"k", s.k},           {"trials", s.trials},
          {"certified", s.certified}, {"probability", s.probability},
          {"values", s.values}, {"converged", s.converged}};
}

nlohmann::json to_json(const SampleResult& s) {
  return {{"samples", s.samples},
          {"best_min", s.best_min},
          {"best_max", s.best_max},
          {"argmin", factors(s.argmin)},
          {"argmax", factors(s.argmax)}};
}

nlohmann::json to_json(const AscentResult& a) {
  return {{"value", a.value}, {"sweeps", a.sweeps}, {"vector", factors(a.vector)}, {"history", a.history}};
}

nlohmann::json to_json(const GridResult& g) {
  return {{"mu_min", g.mu_min},
          {"mu_max", g.mu_max},
          {"error_bound", g.error_bound},
          {"argmin", {g.argmin_alpha, g.argmin_beta}},
          {"argmax", {g.argmax_alpha, g.argmax_beta}}};
}

}  // namespace tensorange
