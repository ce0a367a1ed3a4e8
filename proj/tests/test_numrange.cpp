#include <catch_amalgamated.hpp>

#include "tensorange/errors.hpp"
#include "tensorange/numrange.hpp"
#include "tensorange/oracle.hpp"
#include "tensorange/tensor_ops.hpp"
#include "test_support.hpp"

using namespace tensorange;
using Catch::Matchers::WithinAbs;

namespace {

const double kChoiMin = 1.0 - 2.0 / std::sqrt(3.0);

RealMatrix choi(double c) { return choi_from_blocks(generalized_choi_map(c)); }

double segment_distance(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len = dx * dx + dy * dy;
  const double u = len == 0.0 ? 0.0 : std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len, 0.0, 1.0);
  return std::hypot(a.x + u * dx - p.x, a.y + u * dy - p.y);
}

double polygon_distance(Point2 p, const std::vector<Point2>& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) best = std::min(best, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return best;
}

void check_consistent(const DiagonalBound& b) {
  REQUIRE(b.inner.has_value());
  if (b.kind == Extreme::max) {
    CHECK(*b.inner <= b.outer);
  } else {
    CHECK(b.outer <= *b.inner);
  }
  CHECK(*b.gap >= 0.0);
}

}  // namespace

TEST_CASE("support points") {
  const auto I = RealMatrix::identity(4);
  const auto e = support_point(I, I, -0.3);
  CHECK_THAT(e.re, WithinAbs(1.0, 1e-14));
  CHECK_THAT(e.im, WithinAbs(1.0, 1e-14));

  const auto B = testing::antidiagonal_example();
  const auto Bg = partial_transpose(B, TensorShape{2, 2});
  const auto z = support_point(B, Bg, 0.0);
  CHECK_THAT(z.support_value, WithinAbs(1.0, 1e-14));
  CHECK_THAT(z.re + z.im, WithinAbs(0.0, 1e-14));
  CHECK_THAT(z.re * std::cos(0.0) - z.im * std::sin(0.0), WithinAbs(z.support_value, 1e-12));
}

TEST_CASE("support points bound sampled values") {
  std::mt19937_64 rng(5);
  const TensorShape shape{3, 3};
  const auto B = testing::random_symmetric(9, rng);
  const auto Bg = partial_transpose(B, shape);
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < 10000; ++i) {
    const auto x = testing::unit(9, rng);
    samples.emplace_back(B.quadratic_form(x), Bg.quadratic_form(x));
  }
  for (int k = 0; k < 24; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / 24;
    const auto e = support_point(B, Bg, theta);
    CHECK_THAT(e.re * std::cos(theta) - e.im * std::sin(theta), WithinAbs(e.support_value, 1e-10 * B.max_abs()));
    for (const auto& [a, b] : samples) REQUIRE(a * std::cos(theta) - b * std::sin(theta) <= e.support_value + 1e-12);
  }
}

TEST_CASE("boundary") {
  const auto I = RealMatrix::identity(4);
  const auto r = boundary(I, TensorShape{2, 2}, 12);
  REQUIRE(r.evaluations.size() == 12);
  for (const auto& e : r.evaluations) {
    CHECK_THAT(e.re, WithinAbs(1.0, 1e-14));
    CHECK_THAT(e.im, WithinAbs(1.0, 1e-14));
  }
  CHECK_THROWS_AS(boundary(I, TensorShape{2, 2}, 2), InvalidArgument);

  const auto C = choi(0.0);
  const auto b = boundary(C, TensorShape{3, 3}, 3600);
  const auto inner = b.inner_polygon();
  CHECK(polygon_area(inner) <= polygon_area(b.outer_polygon));
  const Point2 target{kChoiMin, kChoiMin};
  CHECK(polygon_distance(target, inner) <= 1e-6);

  const auto csv = boundary_csv(b);
  CHECK(csv.rfind("theta,support_value,re,im\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3601);
}

TEST_CASE("rotation projector maximum is one half") {
  const auto P = testing::rotation_projector();
  const TensorShape shape{2, 2};
  for (const auto& b : {w_diag_angle(P, shape, Extreme::max), w_diag_ternary(P, shape, Extreme::max)}) {
    CHECK_THAT(b.outer, WithinAbs(0.5, 1e-8));
    check_consistent(b);
    CHECK(b.certified);
  }
  CHECK_THAT(w_diag_scaled(P, shape, Extreme::max, 2.0, 3.0).outer, WithinAbs(0.5, 1e-6));
}

TEST_CASE("identity endpoints") {
  const auto I = RealMatrix::identity(4);
  const TensorShape shape{2, 2};
  for (auto kind : {Extreme::min, Extreme::max}) {
    CHECK_THAT(w_diag_angle(I, shape, kind).outer, WithinAbs(1.0, 1e-12));
    CHECK_THAT(w_diag_ternary(I, shape, kind).outer, WithinAbs(1.0, 1e-12));
    CHECK_THAT(w_diag_scaled(I, shape, kind, -1.0, -1.0).outer, WithinAbs(1.0, 1e-12));
    CHECK_THAT(w_diag_scaled(I, shape, kind, 1.0, 1.0).outer, WithinAbs(w_diag_angle(I, shape, kind).outer, 1e-15));
  }
  const auto I8 = RealMatrix::identity(8);
  const std::vector<SubsystemSet> fam{SubsystemSet{}, SubsystemSet{2}, SubsystemSet{3}};
  CHECK_THAT(w_joint_diag(I8, TensorShape{2, 2, 2}, fam, Extreme::max).outer, WithinAbs(1.0, 1e-10));
  CHECK_THAT(w_joint_diag(I8, TensorShape{2, 2, 2}, fam, Extreme::min).outer, WithinAbs(1.0, 1e-10));
}

TEST_CASE("antidiagonal example collapses to zero") {
  const auto B = testing::antidiagonal_example();
  const TensorShape shape{2, 2};
  const auto hi = w_diag_angle(B, shape, Extreme::max);
  const auto lo = w_diag_angle(B, shape, Extreme::min);
  CHECK(hi.outer - lo.outer <= 1e-8);
  CHECK(lo.outer <= 1e-12);
  CHECK(hi.outer >= -1e-12);
  const auto t = w_diag_ternary(B, shape, Extreme::max);
  CHECK_THAT(t.outer, WithinAbs(0.0, 1e-8));
  REQUIRE(t.argument.size() == 1);
  CHECK_THAT(t.argument[0], WithinAbs(0.5, 1e-6));
  const auto tb = trivial_bounds(B, shape);
  CHECK(tb.full.min == -1.0);
  CHECK(tb.full.max == 1.0);
  CHECK(tb.partial[1].min == -1.0);
  CHECK(tb.partial[1].max == 1.0);
}

TEST_CASE("generalized Choi family") {
  const TensorShape shape{3, 3};
  const auto at0 = w_diag_ternary(choi(0.0), shape, Extreme::min);
  CHECK_THAT(at0.outer, WithinAbs(kChoiMin, 1e-6));
  check_consistent(at0);
  CHECK_THAT(w_diag_angle(choi(0.0), shape, Extreme::min).outer, WithinAbs(kChoiMin, 1e-6));

  // Values read off the published curve.
  CHECK_THAT(w_diag_ternary(choi(0.1), shape, Extreme::min).outer, WithinAbs(-0.089956, 1e-5));
  CHECK_THAT(w_diag_ternary(choi(0.5), shape, Extreme::min).outer, WithinAbs(0.131482, 1e-5));

  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (w_diag_ternary(choi(mid), shape, Extreme::min).outer < 0.0 ? lo : hi) = mid;
  }
  CHECK_THAT(0.5 * (lo + hi), WithinAbs(0.25, 1e-4));

  const auto tb = trivial_bounds(choi(0.3), shape);
  CHECK_THAT(tb.full.min, WithinAbs(-1.0, 1e-12));
}

TEST_CASE("non-symmetric input is symmetrized with a note") {
  std::mt19937_64 rng(3);
  const RealMatrix B(testing::gaussian(4, 4, rng));
  const auto b = w_diag_ternary(B, TensorShape{2, 2}, Extreme::max);
  REQUIRE_FALSE(b.notes.empty());
  CHECK(b.notes.front().find("not symmetric") != std::string::npos);
  CHECK_THAT(b.outer, WithinAbs(w_diag_ternary(symmetrize(B), TensorShape{2, 2}, Extreme::max).outer, 1e-12));
}

TEST_CASE("argument validation") {
  const auto I = RealMatrix::identity(4);
  CHECK_THROWS_AS(w_diag_angle(I, TensorShape{2, 3}, Extreme::max), DimensionError);
  CHECK_THROWS_AS(w_diag_angle(RealMatrix::identity(8), TensorShape{2, 2, 2}, Extreme::max), DimensionError);
  CHECK_THROWS_AS(w_diag_scaled(I, TensorShape{2, 2}, Extreme::max, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(w_diag_scaled(I, TensorShape{2, 2}, Extreme::max, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(w_joint_diag(I, TensorShape{2, 2}, {}, Extreme::max), InvalidArgument);
  CHECK_THROWS_AS(w_joint_diag(I, TensorShape{2, 2}, {SubsystemSet{3}}, Extreme::max), DimensionError);
}

TEST_CASE("angle, ternary, scaled and joint searches agree", "[property]") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> yz(-3.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = trial % 2 == 0 ? 3 : 4;
    const TensorShape shape = TensorShape::bipartite(n, n);
    const auto B = testing::random_symmetric(n * n, rng);
    const double scale = B.max_abs();
    for (auto kind : {Extreme::min, Extreme::max}) {
      const auto a = w_diag_angle(B, shape, kind);
      const auto t = w_diag_ternary(B, shape, kind);
      const auto j = w_joint_diag(B, shape, {SubsystemSet{}, SubsystemSet{2}}, kind);
      check_consistent(a);
      check_consistent(t);
      CHECK(std::abs(a.outer - t.outer) <= 1e-6 * scale);
      CHECK(std::abs(j.outer - t.outer) <= 1e-6 * scale);
      double y = 0.0, z = 0.0;
      while (std::abs(y) < 0.05) y = yz(rng);
      while (std::abs(z) < 0.05) z = yz(rng);
      const auto s = w_diag_scaled(B, shape, kind, y, z);
      CHECK(std::abs(s.outer - a.outer) <= 1e-6 * scale);
    }
  }
}

TEST_CASE("sandwich, dominance and equivariance", "[property]") {
  std::mt19937_64 rng(43);
  const TensorShape shape{3, 3};
  for (int trial = 0; trial < 10; ++trial) {
    const auto B = testing::random_symmetric(9, rng);
    const auto hi = w_diag_ternary(B, shape, Extreme::max);
    const auto lo = w_diag_ternary(B, shape, Extreme::min);
    const auto tb = trivial_bounds(B, shape);
    CHECK(hi.outer <= tb.best_max() + 1e-8);
    CHECK(lo.outer >= tb.best_min() - 1e-8);
    const auto s = sample_mu(B, shape, 2000, 100 + static_cast<std::uint64_t>(trial), 1);
    CHECK(s.best_max <= hi.outer + 1e-10);
    CHECK(s.best_min >= lo.outer - 1e-10);

    const double alpha = 2.5, beta = -0.75;
    const auto shifted = combine(alpha, B, beta, RealMatrix::identity(9));
    CHECK_THAT(w_diag_ternary(shifted, shape, Extreme::max).outer, WithinAbs(alpha * hi.outer + beta, 1e-7));
    CHECK_THAT(w_diag_ternary(shifted, shape, Extreme::min).outer, WithinAbs(alpha * lo.outer + beta, 1e-7));
  }
}

TEST_CASE("gap shrinks with the tolerance") {
  std::mt19937_64 rng(44);
  const auto B = testing::random_symmetric(9, rng);
  NumRangeConfig loose;
  loose.value_tol = 1e-3;
  NumRangeConfig tight;
  tight.value_tol = 1e-11;
  const auto a = w_diag_angle(B, TensorShape{3, 3}, Extreme::max, loose);
  const auto b = w_diag_angle(B, TensorShape{3, 3}, Extreme::max, tight);
  REQUIRE(a.gap);
  REQUIRE(b.gap);
  CHECK(*b.gap <= *a.gap);
  CHECK(*b.gap <= 1e-9);
  CHECK(b.evaluations > a.evaluations);
}

TEST_CASE("multipartite family reduction and bounds") {
  const TensorShape shape{2, 2, 2};
  const std::vector<SubsystemSet> fam{SubsystemSet{}, SubsystemSet{2}, SubsystemSet{1, 3}, SubsystemSet{2},
                                      SubsystemSet{1, 2, 3}};
  const auto reduced = reduce_subsystem_family(fam, shape);
  REQUIRE(reduced.size() == 2);
  CHECK(reduced[0] == SubsystemSet{});
  CHECK(reduced[1] == SubsystemSet{2});

  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 5; ++trial) {
    const auto B = testing::random_symmetric(8, rng);
    const auto full = w_joint_diag(B, shape, default_subsystem_family(shape), Extreme::max);
    const auto with_comp = w_joint_diag(B, shape, {SubsystemSet{}, SubsystemSet{2}, SubsystemSet{1, 3}}, Extreme::max);
    const auto without = w_joint_diag(B, shape, {SubsystemSet{}, SubsystemSet{2}}, Extreme::max);
    CHECK(with_comp.outer == without.outer);
    // More sets never loosen the bound, and the bound stays above sampled values.
    CHECK(full.outer <= without.outer + 1e-9);
    const auto s = sample_mu(B, shape, 5000, 7, 1);
    CHECK(s.best_max <= full.outer + 1e-9);
    const auto asc = multi_start_ascent(B, shape, Extreme::max, 10, 9, 1);
    CHECK(asc.value <= full.outer + 1e-9);
    const auto lo = w_joint_diag(B, shape, default_subsystem_family(shape), Extreme::min);
    CHECK(s.best_min >= lo.outer - 1e-9);
    CHECK(std::any_of(full.notes.begin(), full.notes.end(),
                      [](const std::string& n) { return n.find("no interval claim") != std::string::npos; }));
    if (full.inner) CHECK(*full.inner <= full.outer);
  }
}

TEST_CASE("affine family") {
  AffineFamily fam{{RealMatrix::identity(3), 2.0 * RealMatrix::identity(3)}, {0.25, 0.75}};
  CHECK_THAT(fam.combination().coeff(1, 1), WithinAbs(1.75, 1e-15));
  fam.weights = {0.5, 0.6};
  CHECK_THROWS_AS(fam.validate(), InvalidArgument);
}
