#include <catch_amalgamated.hpp>

#include <sstream>

#include "tensorange/errors.hpp"
#include "tensorange/matrix_market.hpp"
#include "test_support.hpp"

using namespace tensorange;

TEST_CASE("coordinate symmetric input is expanded") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% shape: 2,2\n"
      "4 4 3\n"
      "1 1 2.5\n"
      "4 1 -1\n"
      "3 2 +7e-1\n");
  std::optional<TensorShape> shape;
  const auto M = mm::read_matrix(in, &shape);
  REQUIRE(M.is_sparse());
  CHECK(M.coeff(0, 0) == 2.5);
  CHECK(M.coeff(0, 3) == -1.0);
  CHECK(M.coeff(3, 0) == -1.0);
  CHECK(M.coeff(1, 2) == 0.7);
  REQUIRE(shape.has_value());
  CHECK(*shape == TensorShape::bipartite(2, 2));
}

TEST_CASE("array input is column major") {
  std::istringstream in(
      "%%MatrixMarket matrix array real general\n"
      "2 2\n1\n3\n2\n4\n");
  const auto M = mm::read_matrix(in);
  CHECK_FALSE(M.is_sparse());
  CHECK(M.coeff(0, 1) == 2.0);
  CHECK(M.coeff(1, 0) == 3.0);
}

TEST_CASE("symmetric array stores the lower triangle") {
  std::istringstream in(
      "%%MatrixMarket matrix array real symmetric\n"
      "3 3\n1\n2\n3\n4\n5\n6\n");
  const auto M = mm::read_matrix(in).to_dense();
  Eigen::Matrix3d expected;
  expected << 1, 2, 3, 2, 4, 5, 3, 5, 6;
  CHECK(M == expected);
}

TEST_CASE("malformed files are rejected") {
  auto fails = [](const std::string& text) {
    std::istringstream in(text);
    return mm::read_matrix(in);
  };
  CHECK_THROWS_AS(fails("1 1 1\n"), ParseError);
  CHECK_THROWS_AS(fails("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n"), ParseError);
  CHECK_THROWS_AS(fails("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n"), ParseError);
  CHECK_THROWS_AS(fails("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n"), ParseError);
  CHECK_THROWS_AS(fails("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 abc\n"), ParseError);
  CHECK_THROWS_AS(fails("%%MatrixMarket matrix array real general\n2 3\n1\n2\n3\n4\n5\n6\n"), DimensionError);
  CHECK_THROWS_AS(fails("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 nan\n"), Error);
}

TEST_CASE("round trip is bit exact") {
  std::mt19937_64 rng(12);
  const RealMatrix dense(testing::gaussian(6, 6, rng) * 1e-3);
  const auto sparse = testing::random_sparse(30, 80, false, rng);
  for (const auto* M : {&dense, &sparse}) {
    std::stringstream buf;
    mm::write_matrix(buf, *M, TensorShape{2, 3});
    std::optional<TensorShape> shape;
    const auto back = mm::read_matrix(buf, &shape);
    CHECK(back.is_sparse() == M->is_sparse());
    CHECK((back.to_dense().array() == M->to_dense().array()).all());
  }
}

TEST_CASE("multi-block files") {
  std::stringstream buf;
  Eigen::MatrixXd A(2, 3);
  A << 1, 2, 3, 4, 5, 6;
  mm::write_block(buf, A);
  mm::write_block(buf, 2.0 * A);
  const auto all = mm::read_all(buf);
  REQUIRE(all.size() == 2);
  CHECK(all[0].to_dense() == A);
  CHECK(all[1].to_dense() == 2.0 * A);
}
