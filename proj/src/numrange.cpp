#include "tensorange/numrange.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "tensorange/errors.hpp"
#include "tensorange/parallel.hpp"
#include "tensorange/tensor_ops.hpp"

namespace tensorange {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dims(const RealMatrix& B, const TensorShape& shape) {
  if (B.dim() != shape.total_dim()) {
    throw DimensionError("matrix dimension " + std::to_string(B.dim()) + " does not match shape " +
                         shape.to_string() + " (total " + std::to_string(shape.total_dim()) + ")");
  }
}

void check_bipartite(const TensorShape& shape) {
  if (!shape.is_bipartite()) throw DimensionError("operation needs a bipartite shape, got " + shape.to_string());
}

double value_scale(const RealMatrix& P, const RealMatrix& Q) { return std::max({1.0, P.max_abs(), Q.max_abs()}); }

// Upper bound on lambda_max: the Rayleigh quotient of an iterative solve can
// sit below the true eigenvalue by up to the residual norm.
double certified_top(const EigenPair& ep) {
  return ep.method_used == SolverMethod::iterative ? ep.value + ep.residual : ep.value;
}

struct Probe {
  double h = 0.0;
  double a = 0.0;  // x^T P x
  double b = 0.0;  // x^T Q x
  double side = 0.0;
  Eigen::VectorXd witness;
};

// Tracks the max endpoint of {c : c u in W(P + iQ)} over a sequence of
// support evaluations. Every supporting line n . pt <= h with n . u > 0
// yields c <= h / (n . u); every chord between boundary points on opposite
// sides of the ray yields an attained value.
class RayTracker {
 public:
  RayTracker(const RealMatrix& P, const RealMatrix& Q, double ux, double uy, const NumRangeConfig& cfg)
      : P_(P), Q_(Q), ux_(ux), uy_(uy), cfg_(cfg), scale_(value_scale(P, Q)) {}

  Probe evaluate(double nx, double ny) {
    const RealMatrix M = combine(nx, P_, ny, Q_);
    EigenPair ep = warm_.size() > 0 ? extreme_eigenpair(M, Extreme::max, cfg_.solver, warm_)
                                    : extreme_eigenpair(M, Extreme::max, cfg_.solver);
    ++evaluations_;
    if (!ep.converged) converged_ = false;
    warm_ = ep.vector;

    Probe pr;
    pr.h = certified_top(ep);
    pr.a = P_.quadratic_form(ep.vector);
    pr.b = Q_.quadratic_form(ep.vector);
    pr.side = ux_ * pr.b - uy_ * pr.a;
    pr.witness = std::move(ep.vector);

    const double nu = nx * ux_ + ny * uy_;
    if (nu > 1e-9 * std::hypot(nx, ny) * std::hypot(ux_, uy_)) {
      const double o = pr.h / nu;
      if (o < outer_) {
        outer_ = o;
        best_normal_ = {nx, ny};
      }
    }
    add_point(pr);
    return pr;
  }

  [[nodiscard]] bool done() const {
    return inner_ && outer_ < kInf && outer_ - *inner_ <= cfg_.value_tol * scale_;
  }
  [[nodiscard]] bool budget_left() const { return evaluations_ < cfg_.max_evaluations; }
  [[nodiscard]] int evaluations() const { return evaluations_; }

  DiagonalBound result(Extreme kind, double sign) const {
    DiagonalBound out;
    out.kind = kind;
    out.evaluations = evaluations_;
    out.certified = converged_;
    double outer = outer_;
    if (inner_ && outer < *inner_) outer = *inner_;
    out.outer = sign * outer;
    if (inner_) {
      out.inner = sign * *inner_;
      out.gap = outer - *inner_;
    }
    if (!converged_) out.notes.emplace_back("an eigensolve did not reach its residual target");
    return out;
  }

  [[nodiscard]] std::pair<double, double> best_normal() const { return best_normal_; }

 private:
  void add_point(const Probe& pr) {
    const double uu = ux_ * ux_ + uy_ * uy_;
    if (pr.side == 0.0) consider((pr.a * ux_ + pr.b * uy_) / uu);
    for (const auto& q : points_) {
      if ((q.side > 0.0 && pr.side < 0.0) || (q.side < 0.0 && pr.side > 0.0)) {
        const double t = q.side / (q.side - pr.side);
        const double a = q.a + t * (pr.a - q.a);
        const double b = q.b + t * (pr.b - q.b);
        consider((a * ux_ + b * uy_) / uu);
      }
    }
    points_.push_back({pr.h, pr.a, pr.b, pr.side, {}});
  }

  void consider(double c) {
    if (!inner_ || c > *inner_) inner_ = c;
  }

  const RealMatrix& P_;
  const RealMatrix& Q_;
  double ux_;
  double uy_;
  const NumRangeConfig& cfg_;
  double scale_;
  Eigen::VectorXd warm_;
  std::vector<Probe> points_;
  double outer_ = kInf;
  std::optional<double> inner_;
  std::pair<double, double> best_normal_{0.0, 0.0};
  int evaluations_ = 0;
  bool converged_ = true;
};

// Max endpoint along the ray c u by bisection on the tangent angle.
DiagonalBound angle_search(const RealMatrix& P, const RealMatrix& Q, double ux, double uy, Extreme kind,
                           double sign, const NumRangeConfig& cfg) {
  RayTracker tr(P, Q, ux, uy, cfg);
  const double alpha = std::atan2(uy, ux);
  double lo = -alpha - std::numbers::pi / 2;
  double hi = -alpha + std::numbers::pi / 2;
  auto probe = [&](double theta) { return tr.evaluate(std::cos(theta), -std::sin(theta)); };

  std::vector<std::string> notes;
  const Probe plo = probe(lo);
  const Probe phi = probe(hi);
  if (plo.side < 0.0 || phi.side > 0.0) notes.emplace_back("the ray does not meet the numerical range");

  while (hi - lo > cfg.angle_tol && !tr.done() && tr.budget_left()) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Probe pm = probe(mid);
    if (pm.side >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  auto out = tr.result(kind, sign);
  out.method = "angle";
  out.argument = {0.5 * (lo + hi)};
  if (!tr.done() && hi - lo > cfg.angle_tol) {
    out.certified = false;
    notes.emplace_back("evaluation budget exhausted before the angle bracket closed");
  }
  out.notes.insert(out.notes.end(), notes.begin(), notes.end());
  return out;
}

// Max endpoint along the diagonal by golden-section search over the weight p
// of the convex function p -> lambda_max(pP + (1-p)Q).
DiagonalBound golden_search(const RealMatrix& P, const RealMatrix& Q, Extreme kind, double sign,
                            const NumRangeConfig& cfg) {
  RayTracker tr(P, Q, 1.0, 1.0, cfg);
  double best_p = 0.0;
  double best_f = kInf;
  auto f = [&](double p) {
    const double v = tr.evaluate(p, 1.0 - p).h;
    if (v < best_f) {
      best_f = v;
      best_p = p;
    }
    return v;
  };

  std::vector<std::string> notes;
  bool limit_hit = false;
  double a = -1.0;
  double m = 0.5;
  double b = 2.0;
  double fa = f(a);
  double fm = f(m);
  double fb = f(b);
  while (fa < fm && tr.budget_left()) {
    b = m;
    fb = fm;
    m = a;
    fm = fa;
    a = m - 2.0 * (b - m);
    if (a < -cfg.p_limit) {
      limit_hit = true;
      break;
    }
    fa = f(a);
  }
  while (!limit_hit && fb < fm && tr.budget_left()) {
    a = m;
    fa = fm;
    m = b;
    fm = fb;
    b = m + 2.0 * (m - a);
    if (b > cfg.p_limit) {
      limit_hit = true;
      break;
    }
    fb = f(b);
  }
  if (limit_hit) {
    notes.emplace_back("weight bracket reached the p limit; the optimum may lie at unbounded p");
  }

  if (!limit_hit) {
    constexpr double r = 0.6180339887498949;
    double x1 = b - r * (b - a);
    double x2 = a + r * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (!tr.done() && tr.budget_left() && b - a > cfg.p_tol * std::max(1.0, std::abs(best_p))) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - r * (b - a);
        f1 = f(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + r * (b - a);
        f2 = f(x2);
      }
    }
  }

  auto out = tr.result(kind, sign);
  out.method = "ternary";
  out.argument = {best_p};
  if (limit_hit || (!tr.done() && !tr.budget_left())) out.certified = false;
  if (!tr.budget_left() && !tr.done()) notes.emplace_back("evaluation budget exhausted");
  out.notes.insert(out.notes.end(), notes.begin(), notes.end());
  return out;
}

struct Prepared {
  RealMatrix B;
  std::vector<std::string> notes;
};

Prepared prepare(const RealMatrix& B, const TensorShape& shape) {
  check_dims(B, shape);
  Prepared p;
  bool changed = false;
  p.B = prepare_symmetric(B, &changed);
  if (changed) p.notes.emplace_back("input was not symmetric; bounded (B + B^T)/2, which has the same product-vector values");
  return p;
}

template <class Search>
DiagonalBound bipartite_endpoint(const RealMatrix& B0, const TensorShape& shape, Extreme kind, Search&& search) {
  check_bipartite(shape);
  auto prep = prepare(B0, shape);
  RealMatrix Bg = partial_transpose(prep.B, shape);
  DiagonalBound out;
  if (kind == Extreme::max) {
    out = search(prep.B, Bg, 1.0);
  } else {
    out = search(-1.0 * prep.B, -1.0 * Bg, -1.0);
  }
  out.notes.insert(out.notes.begin(), prep.notes.begin(), prep.notes.end());
  return out;
}

}  // namespace

void AffineFamily::validate() const {
  if (matrices.empty() || matrices.size() != weights.size()) {
    throw DimensionError("affine family needs one weight per matrix");
  }
  double sum = 0.0;
  double mag = 0.0;
  for (std::size_t j = 0; j < matrices.size(); ++j) {
    if (matrices[j].dim() != matrices.front().dim()) throw DimensionError("affine family matrices differ in size");
    sum += weights[j];
    mag += std::abs(weights[j]);
  }
  if (std::abs(sum - 1.0) > 1e-14 * std::max(1.0, mag)) throw InvalidArgument("affine weights must sum to 1");
}

RealMatrix AffineFamily::combination() const {
  validate();
  RealMatrix acc = weights[0] * matrices[0];
  for (std::size_t j = 1; j < matrices.size(); ++j) acc = combine(1.0, acc, weights[j], matrices[j]);
  return acc;
}

RealMatrix prepare_symmetric(const RealMatrix& B, bool* changed) {
  const bool exact = B.symmetry_defect() == 0.0;
  if (changed) *changed = !exact;
  return exact ? B : symmetrize(B);
}

SupportEvaluation support_point(const RealMatrix& B, const RealMatrix& Bg, double theta, const SolverConfig& cfg) {
  if (B.dim() != Bg.dim()) throw DimensionError("support_point: matrices differ in size");
  const RealMatrix M = combine(std::cos(theta), B, -std::sin(theta), Bg);
  EigenPair ep = extreme_eigenpair(M, Extreme::max, cfg);
  SupportEvaluation ev;
  ev.theta = theta;
  ev.support_value = ep.value;
  ev.re = B.quadratic_form(ep.vector);
  ev.im = Bg.quadratic_form(ep.vector);
  ev.certified = ep.converged;
  ev.witness = std::move(ep.vector);
  return ev;
}

std::vector<Point2> BoundaryResult::inner_polygon() const {
  std::vector<Point2> out;
  out.reserve(evaluations.size());
  for (const auto& e : evaluations) out.push_back({e.re, e.im});
  return out;
}

double polygon_area(const std::vector<Point2>& poly) {
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    twice += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(twice);
}

BoundaryResult boundary(const RealMatrix& B0, const TensorShape& shape, int n_angles, const NumRangeConfig& cfg) {
  if (n_angles < 3) throw InvalidArgument("boundary needs at least 3 angles");
  check_bipartite(shape);
  check_dims(B0, shape);
  const RealMatrix B = prepare_symmetric(B0);
  const RealMatrix Bg = partial_transpose(B, shape);

  BoundaryResult out;
  out.evaluations.resize(static_cast<std::size_t>(n_angles));
  parallel_for(out.evaluations.size(), cfg.threads, [&](std::size_t k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / n_angles;
    out.evaluations[k] = support_point(B, Bg, theta, cfg.solver);
  });

  // Consecutive supporting lines cos(t) x - sin(t) y = h intersect in the
  // vertices of the outer polygon.
  const auto n = out.evaluations.size();
  out.outer_polygon.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& e1 = out.evaluations[k];
    const auto& e2 = out.evaluations[(k + 1) % n];
    const double a1 = std::cos(e1.theta), b1 = -std::sin(e1.theta);
    const double a2 = std::cos(e2.theta), b2 = -std::sin(e2.theta);
    const double det = a1 * b2 - a2 * b1;
    out.outer_polygon.push_back({(e1.support_value * b2 - e2.support_value * b1) / det,
                                 (a1 * e2.support_value - a2 * e1.support_value) / det});
  }
  return out;
}

std::string boundary_csv(const BoundaryResult& result) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "theta,support_value,re,im\n";
  for (const auto& e : result.evaluations) os << e.theta << ',' << e.support_value << ',' << e.re << ',' << e.im << '\n';
  return os.str();
}

DiagonalBound w_diag_angle(const RealMatrix& B, const TensorShape& shape, Extreme kind, const NumRangeConfig& cfg) {
  return bipartite_endpoint(B, shape, kind, [&](const RealMatrix& P, const RealMatrix& Q, double sign) {
    return angle_search(P, Q, 1.0, 1.0, kind, sign, cfg);
  });
}

DiagonalBound w_diag_ternary(const RealMatrix& B, const TensorShape& shape, Extreme kind,
                             const NumRangeConfig& cfg) {
  return bipartite_endpoint(B, shape, kind, [&](const RealMatrix& P, const RealMatrix& Q, double sign) {
    return golden_search(P, Q, kind, sign, cfg);
  });
}

DiagonalBound w_diag_scaled(const RealMatrix& B, const TensorShape& shape, Extreme kind, double y, double z,
                            const NumRangeConfig& cfg) {
  if (y == 0.0 || z == 0.0 || !std::isfinite(y) || !std::isfinite(z)) {
    throw InvalidArgument("w_diag_scaled needs finite nonzero y and z");
  }
  auto out = bipartite_endpoint(B, shape, kind, [&](const RealMatrix& P, const RealMatrix& Q, double sign) {
    return angle_search(y * P, z * Q, y, z, kind, sign, cfg);
  });
  out.method = "angle-scaled";
  return out;
}

std::vector<SubsystemSet> reduce_subsystem_family(const std::vector<SubsystemSet>& P, const TensorShape& shape) {
  std::vector<SubsystemSet> out;
  for (const auto& S : P) {
    S.validate(shape);
    const auto comp = S.complement(shape);
    const bool redundant = std::any_of(out.begin(), out.end(), [&](const SubsystemSet& T) { return T == S || T == comp; });
    if (!redundant) out.push_back(S);
  }
  return out;
}

DiagonalBound w_joint_diag(const RealMatrix& B0, const TensorShape& shape, const std::vector<SubsystemSet>& P,
                           Extreme kind, const NumRangeConfig& cfg) {
  if (P.empty()) throw InvalidArgument("w_joint_diag needs a non-empty subsystem family");
  auto prep = prepare(B0, shape);
  const auto sets = reduce_subsystem_family(P, shape);
  const double sign = kind == Extreme::max ? 1.0 : -1.0;

  std::vector<RealMatrix> mats;
  mats.reserve(sets.size());
  for (const auto& S : sets) mats.push_back(sign * partial_transpose(prep.B, shape, S));
  const std::size_t k = mats.size();
  const double scale = std::max(1.0, prep.B.max_abs());

  DiagonalBound out;
  std::vector<std::string> notes = prep.notes;
  if (k < P.size()) notes.emplace_back("removed " + std::to_string(P.size() - k) + " redundant subsystem set(s)");

  if (k == 1) {
    const auto ep = extreme_eigenpair(mats[0], Extreme::max, cfg.solver);
    out.kind = kind;
    out.outer = sign * certified_top(ep);
    out.inner = sign * ep.value;
    out.gap = certified_top(ep) - ep.value;
    out.evaluations = 1;
    out.certified = ep.converged;
    out.argument = {1.0};
    out.method = "eigenvalue";
  } else {
    out = golden_search(mats[0], mats[1], kind, sign, cfg);
    const double p0 = out.argument.empty() ? 0.5 : out.argument[0];
    out.argument = {p0, 1.0 - p0};
    out.method = "golden-section";
    if (k >= 3) {
      // Projected subgradient descent on sum_j p_j = 1 with Polyak steps
      // toward an adaptively lowered target, warm-started from the pair
      // optimum.
      Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
      p[0] = p0;
      p[1] = 1.0 - p0;
      Eigen::VectorXd best_p = p;
      double best_f = kInf;
      std::optional<double> inner;
      Eigen::VectorXd warm;
      int evaluations = out.evaluations;
      bool converged = out.certified;
      double delta = 0.05 * scale;
      int stall = 0;
      const int cap = cfg.subgradient_iterations_per_set * static_cast<int>(k);
      int it = 0;
      for (; it < cap; ++it) {
        RealMatrix M = p[0] * mats[0];
        for (std::size_t j = 1; j < k; ++j) M = combine(1.0, M, p[static_cast<Eigen::Index>(j)], mats[j]);
        EigenPair ep = warm.size() > 0 ? extreme_eigenpair(M, Extreme::max, cfg.solver, warm)
                                       : extreme_eigenpair(M, Extreme::max, cfg.solver);
        ++evaluations;
        if (!ep.converged) converged = false;
        warm = ep.vector;
        const double f = certified_top(ep);
        Eigen::VectorXd g(static_cast<Eigen::Index>(k));
        for (std::size_t j = 0; j < k; ++j) g[static_cast<Eigen::Index>(j)] = mats[j].quadratic_form(ep.vector);

        const double spread = g.maxCoeff() - g.minCoeff();
        if (spread <= cfg.agreement_tol * scale) {
          const double common = g.mean();
          if (!inner || common > *inner) inner = common;
        }
        if (f < best_f - 1e-15 * scale) {
          if (f <= best_f - 0.5 * delta) {
            delta *= 1.5;
            stall = 0;
          }
          best_f = f;
          best_p = p;
        } else if (++stall > 20) {
          delta *= 0.5;
          stall = 0;
          p = best_p;
          continue;
        }
        if (inner && best_f - *inner <= cfg.value_tol * scale) break;
        if (delta <= 1e-3 * cfg.value_tol * scale) break;

        const Eigen::VectorXd gp = g.array() - g.mean();
        const double gn2 = gp.squaredNorm();
        if (gn2 == 0.0) break;
        const double step = (f - (best_f - delta)) / gn2;
        p -= step * gp;
        if (p.cwiseAbs().maxCoeff() > cfg.p_limit) {
          notes.emplace_back("subgradient iterate exceeded the p limit");
          p = best_p;
          break;
        }
      }
      // The pair optimum is the subgradient starting point; keep whichever
      // certificate is lower.
      const double pair_outer = sign * out.outer;
      out.outer = sign * std::min(best_f, pair_outer);
      if (best_f <= pair_outer) out.argument.assign(best_p.data(), best_p.data() + best_p.size());
      out.method = "subgradient";
      out.evaluations = evaluations;
      out.certified = converged;
      if (inner) {
        const double outer_raw = std::max(std::min(best_f, pair_outer), *inner);
        out.outer = sign * outer_raw;
        out.inner = sign * *inner;
        out.gap = outer_raw - *inner;
      } else {
        out.inner.reset();
        out.gap.reset();
        notes.emplace_back("no witness with agreeing quadratic forms; only the outer bound is certified");
      }
      if (it >= cap) notes.emplace_back("subgradient iteration cap reached");
      notes.emplace_back("endpoint only: no interval claim is made for three or more subsystem sets");
    }
  }
  out.kind = kind;
  out.notes.insert(out.notes.begin(), notes.begin(), notes.end());
  return out;
}

double TrivialBounds::best_min() const {
  double v = full.min;
  for (const auto& p : partial) v = std::max(v, p.min);
  return v;
}

double TrivialBounds::best_max() const {
  double v = full.max;
  for (const auto& p : partial) v = std::min(v, p.max);
  return v;
}

TrivialBounds trivial_bounds(const RealMatrix& B0, const TensorShape& shape, const SolverConfig& cfg) {
  check_dims(B0, shape);
  const RealMatrix B = prepare_symmetric(B0);
  TrivialBounds out;
  out.full = eigenvalue_interval(B, cfg);
  for (std::size_t j = 1; j <= shape.factors(); ++j) {
    out.partial.push_back(eigenvalue_interval(partial_transpose(B, shape, SubsystemSet{j}), cfg));
  }
  return out;
}

}  // namespace tensorange
