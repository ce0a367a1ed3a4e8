#include <catch_amalgamated.hpp>

#include "tensorange/errors.hpp"
#include "tensorange/tensor_ops.hpp"
#include "tensorange/eigensolver.hpp"
#include "test_support.hpp"

using namespace tensorange;
using Catch::Matchers::WithinAbs;

namespace {

Eigen::MatrixXd unit_matrix(int n, int i, int j) {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
  E(i, j) = 1.0;
  return E;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

}  // namespace

TEST_CASE("tensor shape bookkeeping") {
  const TensorShape s{2, 3, 4};
  CHECK(s.total_dim() == 24);
  CHECK(s.stride(0) == 12);
  CHECK(s.stride(2) == 1);
  const std::vector<std::size_t> multi{1, 2, 3};
  const auto flat = s.ravel(multi);
  CHECK(flat == 23);
  CHECK(s.unravel(flat) == multi);
  CHECK(TensorShape::parse("3,3") == TensorShape::bipartite(3, 3));
  CHECK_THROWS_AS(TensorShape::parse("3,,3"), ParseError);
  CHECK_THROWS_AS(TensorShape::parse("0,2"), Error);
}

TEST_CASE("subsystem sets") {
  const auto sets = SubsystemSet::parse_list(";2;3;2,3");
  REQUIRE(sets.size() == 4);
  CHECK(sets[0].empty());
  CHECK(sets[3] == (SubsystemSet{2, 3}));
  const TensorShape s{2, 2, 2};
  CHECK(SubsystemSet{2}.complement(s) == (SubsystemSet{1, 3}));
  CHECK_THROWS_AS(SubsystemSet{4}.validate(s), DimensionError);
  const auto fam = default_subsystem_family(s);
  CHECK(fam.size() == 4);
  for (const auto& S : fam) CHECK_FALSE(S.contains(1));
}

TEST_CASE("partial transpose of an elementary tensor") {
  const RealMatrix B(kron(unit_matrix(2, 0, 1), unit_matrix(2, 0, 1)));
  const auto G = partial_transpose(B, TensorShape::bipartite(2, 2));
  CHECK((G.to_dense() - kron(unit_matrix(2, 0, 1), unit_matrix(2, 1, 0))).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("partial transpose of the antidiagonal example is its negative") {
  const auto B = testing::antidiagonal_example();
  const auto G = partial_transpose(B, TensorShape::bipartite(2, 2));
  CHECK(testing::max_abs_diff(G, -1.0 * B) == 0.0);
}

TEST_CASE("partial transpose keeps the storage kind and rejects bad shapes") {
  std::mt19937_64 rng(3);
  const auto S = testing::random_sparse(12, 40, false, rng);
  const TensorShape shape{2, 3, 2};
  const auto G = partial_transpose(S, shape, SubsystemSet{1, 3});
  CHECK(G.is_sparse());
  CHECK(testing::max_abs_diff(G, partial_transpose(S.as_dense(), shape, SubsystemSet{1, 3})) == 0.0);
  CHECK_THROWS_AS(partial_transpose(S, TensorShape{3, 3}, SubsystemSet{2}), DimensionError);
}

TEST_CASE("full partial transpose is the transpose") {
  std::mt19937_64 rng(5);
  const RealMatrix B(testing::gaussian(12, 12, rng));
  const auto G = partial_transpose(B, TensorShape{2, 3, 2}, SubsystemSet{1, 2, 3});
  CHECK(testing::max_abs_diff(G, B.transpose()) == 0.0);
}

TEST_CASE("symmetrize") {
  Eigen::MatrixXd A(2, 2);
  A << 1, 2, 0, 1;
  Eigen::MatrixXd expected(2, 2);
  expected << 1, 1, 1, 1;
  CHECK(symmetrize(RealMatrix(A)).to_dense() == expected);
  Eigen::MatrixXd K(2, 2);
  K << 0, 3, -3, 0;
  CHECK(symmetrize(RealMatrix(K)).max_abs() == 0.0);
  std::mt19937_64 rng(1);
  const auto S = testing::random_symmetric(5, rng);
  CHECK(testing::max_abs_diff(symmetrize(S), S) == 0.0);
}

TEST_CASE("partial symmetrization") {
  const TensorShape shape{2, 2};
  const auto B = testing::antidiagonal_example();
  const auto parts = partial_symmetrize(B, shape);
  CHECK(parts.invariant.max_abs() == 0.0);
  CHECK(testing::max_abs_diff(parts.anti_invariant, B) == 0.0);

  std::mt19937_64 rng(11);
  const TensorShape s33{3, 3};
  const auto R = testing::random_symmetric(9, rng);
  const auto p = partial_symmetrize(R, s33);
  CHECK(testing::max_abs_diff(p.invariant + p.anti_invariant, R) <= 1e-14);
  CHECK(testing::max_abs_diff(partial_transpose(p.invariant, s33), p.invariant) <= 1e-15);
  CHECK(testing::max_abs_diff(partial_transpose(p.anti_invariant, s33), -1.0 * p.anti_invariant) <= 1e-15);

  const RealMatrix asym(testing::gaussian(4, 4, rng));
  CHECK_THROWS_AS(partial_symmetrize(asym, shape), SymmetryError);
  CHECK_THROWS_AS(partial_symmetrize(RealMatrix::identity(8), TensorShape{2, 2, 2}), DimensionError);
}

TEST_CASE("full symmetrization") {
  const TensorShape shape{2, 2};
  CHECK(full_symmetrize(testing::antidiagonal_example(), shape).max_abs() == 0.0);
  const auto I = RealMatrix::identity(4);
  CHECK(testing::max_abs_diff(full_symmetrize(I, shape), I) == 0.0);

  std::mt19937_64 rng(2);
  const RealMatrix B(testing::gaussian(9, 9, rng));
  const auto X = full_symmetrize(B, TensorShape{3, 3});
  CHECK(X.symmetry_defect() == 0.0);
  CHECK(testing::max_abs_diff(partial_transpose(X, TensorShape{3, 3}), X) <= 1e-15);
}

TEST_CASE("Choi map symmetrization matches the printed matrix up to the factor order") {
  const auto C = choi_from_blocks(generalized_choi_map(0.0));
  const auto X = full_symmetrize(C, TensorShape{3, 3});
  const auto S = testing::swap_matrix(3);
  const Eigen::MatrixXd printed = testing::printed_choi_x();
  CHECK((X.to_dense() - S * printed * S).cwiseAbs().maxCoeff() <= 1e-15);
  // The unswapped comparison differs on the diagonal only.
  const Eigen::MatrixXd diff = X.to_dense() - printed;
  CHECK(diff.diagonal().cwiseAbs().maxCoeff() > 0.4);
  CHECK((diff - Eigen::MatrixXd(diff.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("vec") {
  Eigen::MatrixXd Y(2, 2);
  Y << 1, 2, 3, 4;
  const Eigen::VectorXd v = vec(Y);
  CHECK(v == Eigen::Vector4d(1, 3, 2, 4));
  CHECK(unvec(v, 2, 2) == Y);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto M = testing::gaussian(3, 4, rng);  // m = 3, n = 4
    const auto a = testing::unit(4, rng);
    const auto b = testing::unit(3, rng);
    Eigen::VectorXd ab(12);
    for (int i = 0; i < 4; ++i) ab.segment(3 * i, 3) = a[i] * b;
    CHECK_THAT(b.dot(M * a), WithinAbs(vec(M).dot(ab), 1e-14));
    CHECK(vec(b * a.transpose()).isApprox(ab, 1e-15));
    CHECK(vec(M).norm() == M.norm());
  }
}

TEST_CASE("projector onto a rotation subspace") {
  Eigen::MatrixXd Y1 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd Y2(2, 2);
  Y2 << 0, -1, 1, 0;
  const auto proj = projector_onto_subspace({Y1, Y2});
  CHECK(proj.rank == 2);
  CHECK(testing::max_abs_diff(proj.matrix, testing::rotation_projector()) <= 1e-15);

  const auto dup = projector_onto_subspace({Y1, Y2, Y1 + Y2});
  CHECK(dup.rank == 2);
  CHECK(testing::max_abs_diff(dup.matrix, proj.matrix) <= 1e-14);

  Eigen::MatrixXd Y = Y1 / Y1.norm();
  const auto single = projector_onto_subspace({Y});
  const Eigen::VectorXd v = vec(Y);
  CHECK((single.matrix.to_dense() - v * v.transpose()).cwiseAbs().maxCoeff() <= 1e-15);

  CHECK_THROWS_AS(projector_onto_subspace({Eigen::MatrixXd::Zero(2, 2)}), Error);
  CHECK_THROWS_AS(projector_onto_subspace({}), Error);
}

TEST_CASE("Choi matrices") {
  const auto id = MapBlocks::from_map(2, 2, [](const Eigen::MatrixXd& X) { return X; });
  const auto C = choi_from_blocks(id).to_dense();
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 1.0;
  CHECK(C == expected);

  for (double c : {0.0, 0.3, 1.0}) {
    const auto phi = generalized_choi_map(c);
    CHECK((phi.apply(Eigen::MatrixXd::Identity(3, 3)) - (2.0 + c) * Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() <= 1e-15);
    const auto tp = is_transpose_preserving(choi_from_blocks(phi));
    CHECK(tp.preserving);
    CHECK(tp.defect == 0.0);
  }

  // c = 1: Tr(X) I - X + diag(X).
  std::mt19937_64 rng(4);
  const auto X = testing::gaussian(3, 3, rng);
  const Eigen::MatrixXd expected1 = X.trace() * Eigen::MatrixXd::Identity(3, 3) - X +
                                    Eigen::MatrixXd(X.diagonal().asDiagonal());
  CHECK((generalized_choi_map(1.0).apply(X) - expected1).cwiseAbs().maxCoeff() <= 1e-14);

  const auto C1 = choi_from_blocks(generalized_choi_map(1.0));
  const auto C1g = partial_transpose(C1, TensorShape{3, 3});
  CHECK(extreme_eigenpair(C1g, Extreme::min).value >= -1e-12);
  const auto C0 = choi_from_blocks(generalized_choi_map(0.0));
  CHECK(extreme_eigenpair(partial_transpose(C0, TensorShape{3, 3}), Extreme::min).value < -0.1);

  const auto tp = is_transpose_preserving(RealMatrix(unit_matrix(2, 0, 1)));
  CHECK_FALSE(tp.preserving);
  CHECK(tp.defect == 1.0);
}

TEST_CASE("randomized partial transpose laws", "[property]") {
  std::mt19937_64 rng(2024);
  const std::vector<TensorShape> shapes{{2, 3}, {3, 3}, {2, 2, 2}, {2, 3, 2}, {3, 2, 2}};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& shape = shapes[static_cast<std::size_t>(trial) % shapes.size()];
    const auto n = shape.total_dim();
    const auto full = (std::uint64_t{1} << shape.factors()) - 1;
    std::uniform_int_distribution<std::uint64_t> pick(0, full);
    const auto S1 = SubsystemSet::from_mask(pick(rng));
    const auto S2 = SubsystemSet::from_mask(pick(rng));
    const auto B = testing::random_sparse(n, 3 * n, false, rng);

    const auto G1 = partial_transpose(B, shape, S1);
    REQUIRE(testing::max_abs_diff(partial_transpose(G1, shape, S1), B) == 0.0);
    REQUIRE(testing::max_abs_diff(partial_transpose(G1, shape, S2),
                                  partial_transpose(B, shape, S1.symmetric_difference(S2))) == 0.0);
    REQUIRE(std::abs(G1.trace() - B.trace()) <= 1e-12 * std::max(1.0, std::abs(B.trace())));

    Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
    for (auto d : shape.dims()) {
      const auto f = testing::unit(static_cast<Eigen::Index>(d), rng);
      Eigen::VectorXd next(x.size() * f.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) next.segment(i * f.size(), f.size()) = x[i] * f;
      x = next;
    }
    REQUIRE(std::abs(G1.quadratic_form(x) - B.quadratic_form(x)) <= 1e-12 * std::max(1.0, B.max_abs()));
  }
}

TEST_CASE("randomized symmetrization, vec and projector laws", "[property]") {
  std::mt19937_64 rng(77);
  const TensorShape shape{3, 3};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto B = testing::random_symmetric(9, rng);
    const auto parts = partial_symmetrize(B, shape);
    REQUIRE(testing::max_abs_diff(parts.invariant + parts.anti_invariant, B) <= 1e-14);
    const auto v = testing::unit(3, rng);
    const auto w = testing::unit(3, rng);
    Eigen::VectorXd x(9);
    for (int i = 0; i < 3; ++i) x.segment(3 * i, 3) = v[i] * w;
    REQUIRE(std::abs(parts.anti_invariant.quadratic_form(x)) <= 1e-12 * std::max(1.0, parts.anti_invariant.max_abs()));

    const auto Y = testing::gaussian(3, 4, rng);
    REQUIRE(vec(Y).norm() == Y.norm());

    std::uniform_int_distribution<int> kdist(1, 6);
    const int k = kdist(rng);
    std::vector<Eigen::MatrixXd> basis;
    for (int i = 0; i < k; ++i) basis.push_back(testing::gaussian(3, 4, rng));
    if (k >= 2) basis.push_back(basis[0] - 2.0 * basis[1]);  // dependent member
    const auto proj = projector_onto_subspace(basis);
    const auto P = proj.matrix.to_dense();
    REQUIRE(proj.rank == static_cast<std::size_t>(k));
    REQUIRE((P * P - P).cwiseAbs().maxCoeff() <= 1e-10);
    REQUIRE((P - P.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    REQUIRE(std::abs(P.trace() - k) <= 1e-10);
  }
}
