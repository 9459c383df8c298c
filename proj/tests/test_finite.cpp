#include "subspaces/finite.hpp"

#include <cmath>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "subspaces/linalg.hpp"
#include "subspaces/matrix.hpp"
#include "testutil.hpp"

using subspaces::FiniteSystem;
using subspaces::Matrix;
using testutil::random_matrix;
using testutil::random_orthogonal;

namespace {

FiniteSystem planar_system(double theta) {
  return subspaces::make_system(2, Matrix::from_rows({{1.0}, {0.0}}),
                                Matrix::from_rows({{std::cos(theta)}, {std::sin(theta)}}));
}

}  // namespace

TEST_CASE("graph_system shapes and special cases") {
  const FiniteSystem zero = subspaces::graph_system(Matrix(2, 2));
  CHECK(zero.ambient == 4);
  // graph(0) = K1 + 0, so both frames span the same subspace
  CHECK(subspaces::principal_angles(zero.e1, zero.e2).back() <= 1e-12);

  const FiniteSystem one = subspaces::graph_system(Matrix::from_rows({{1.0}}));
  REQUIRE(one.e2.cols() == 1);
  CHECK(one.e2(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(one.e2(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  const FiniteSystem halves = subspaces::graph_system(Matrix::diagonal({1.0, 0.5}));
  CHECK(halves.ambient == 4);
  CHECK(halves.e1.cols() == 2);
  CHECK(halves.e2.cols() == 2);
}

TEST_CASE("dim_quadruple on reference systems") {
  const FiniteSystem same = subspaces::make_system(2, Matrix::from_rows({{1.0}, {0.0}}),
                                                   Matrix::from_rows({{1.0}, {0.0}}));
  CHECK(subspaces::dim_quadruple(same) == subspaces::DimQuadruple{1, 0, 0, 1});

  const FiniteSystem orth = subspaces::make_system(2, Matrix::from_rows({{1.0}, {0.0}}),
                                                   Matrix::from_rows({{0.0}, {1.0}}));
  CHECK(subspaces::dim_quadruple(orth) == subspaces::DimQuadruple{0, 1, 1, 0});

  const FiniteSystem halves = subspaces::graph_system(Matrix::diagonal({1.0, 0.5}));
  CHECK(subspaces::dim_quadruple(halves) == subspaces::DimQuadruple{0, 2, 2, 0});
}

TEST_CASE("dim_quadruple invariant under a common orthogonal map") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const FiniteSystem s = subspaces::make_system(7, random_matrix(7, 3, rng),
                                                  random_matrix(7, 2, rng));
    const Matrix q = random_orthogonal(7, rng);
    const FiniteSystem moved = subspaces::make_system(7, q * s.e1, q * s.e2);
    CHECK(subspaces::dim_quadruple(s) == subspaces::dim_quadruple(moved));
  }
}

TEST_CASE("halmos_decompose: orthogonal pair and planar rotation") {
  const FiniteSystem orth = subspaces::make_system(2, Matrix::from_rows({{1.0}, {0.0}}),
                                                   Matrix::from_rows({{0.0}, {1.0}}));
  const auto parts = subspaces::halmos_decompose(orth);
  CHECK(parts.mm.cols() == 0);
  CHECK(parts.mp.cols() == 1);
  CHECK(parts.pm.cols() == 1);
  CHECK(parts.pp.cols() == 0);
  CHECK(parts.generic_angles.empty());

  const double theta = 0.9;
  const auto planar = subspaces::halmos_decompose(planar_system(theta));
  CHECK(planar.mm.cols() == 0);
  CHECK(planar.mp.cols() == 0);
  CHECK(planar.pm.cols() == 0);
  CHECK(planar.pp.cols() == 0);
  REQUIRE(planar.generic_angles.size() == 1);
  CHECK(planar.generic_angles[0] == doctest::Approx(theta).epsilon(1e-10));
}

TEST_CASE("halmos_decompose: build-then-recover with prescribed parts") {
  std::mt19937_64 rng(32);
  // 8-dimensional: parts (1, 1, 0, 1) with generic angles {0.3, 1.1}, then a
  // random orthogonal change of basis.
  Matrix e1(8, 4), e2(8, 4);
  e1(0, 0) = 1.0;
  e2(0, 0) = 1.0;  // mm on axis 0
  e1(1, 1) = 1.0;  // mp on axis 1
  // axis 2 belongs to neither span: pp
  const double th0 = 0.3, th1 = 1.1;
  e1(3, 2) = 1.0;
  e2(3, 1) = std::cos(th0);
  e2(4, 1) = std::sin(th0);
  e1(5, 3) = 1.0;
  e2(5, 2) = std::cos(th1);
  e2(6, 2) = std::sin(th1);
  e2(7, 3) = 1.0;  // pm on axis 7

  const Matrix q = random_orthogonal(8, rng);
  const FiniteSystem sys = subspaces::make_system(8, q * e1, q * e2);
  const auto parts = subspaces::halmos_decompose(sys);
  CHECK(parts.mm.cols() == 1);
  CHECK(parts.mp.cols() == 1);
  CHECK(parts.pm.cols() == 1);
  CHECK(parts.pp.cols() == 1);
  REQUIRE(parts.generic_angles.size() == 2);
  CHECK(parts.generic_angles[0] == doctest::Approx(th0).epsilon(1e-9));
  CHECK(parts.generic_angles[1] == doctest::Approx(th1).epsilon(1e-9));

  // The four part frames are pairwise orthogonal and dims add up.
  const Matrix all = subspaces::hcat(subspaces::hcat(parts.mm, parts.mp),
                                     subspaces::hcat(parts.pm, parts.pp));
  CHECK((all.transposed() * all - Matrix::identity(4)).max_abs() <= 1e-9);
  CHECK(4 + 2 * parts.generic_angles.size() == sys.ambient);
}

TEST_CASE("classifiers on planar systems") {
  const FiniteSystem a = planar_system(M_PI / 6.0);
  const FiniteSystem b = planar_system(M_PI / 3.0);
  CHECK(subspaces::classify_algebraic_fin(a, a));
  CHECK(subspaces::classify_unitary_fin(a, a));
  CHECK(subspaces::classify_algebraic_fin(a, b));  // same quadruple
  CHECK_FALSE(subspaces::classify_unitary_fin(a, b));

  const FiniteSystem same = subspaces::make_system(2, Matrix::from_rows({{1.0}, {0.0}}),
                                                   Matrix::from_rows({{1.0}, {0.0}}));
  const FiniteSystem orth = subspaces::make_system(2, Matrix::from_rows({{1.0}, {0.0}}),
                                                   Matrix::from_rows({{0.0}, {1.0}}));
  CHECK_FALSE(subspaces::classify_algebraic_fin(same, orth));
}

TEST_CASE("the two reference graph systems: boundedly but not unitarily isomorphic") {
  const FiniteSystem a = subspaces::graph_system(Matrix::diagonal({1.0, 0.5}));
  const FiniteSystem b = subspaces::graph_system(Matrix::diagonal({1.0, 1.0 / 3.0}));
  CHECK(subspaces::classify_algebraic_fin(a, b));
  CHECK(subspaces::classify_bounded_fin(a, b));
  CHECK_FALSE(subspaces::classify_unitary_fin(a, b));
  // the generic angles are atan of the diagonal entries
  const auto parts = subspaces::halmos_decompose(a);
  REQUIRE(parts.generic_angles.size() == 2);
  CHECK(parts.generic_angles[0] == doctest::Approx(std::atan(0.5)).epsilon(1e-10));
  CHECK(parts.generic_angles[1] == doctest::Approx(std::atan(1.0)).epsilon(1e-10));
}

TEST_CASE("witness_graph_bounded: identity, reference pair, rank refusal") {
  const Matrix t = Matrix::diagonal({1.0, 0.5});
  const auto self_witness = subspaces::witness_graph_bounded(t, t);
  REQUIRE(self_witness.has_value());
  CHECK((self_witness->map - Matrix::identity(4)).max_abs() <= 1e-12);

  const Matrix t2 = Matrix::diagonal({1.0, 1.0 / 3.0});
  const auto w = subspaces::witness_graph_bounded(t, t2);
  REQUIRE(w.has_value());
  CHECK(w->operator_residual <= 1e-10);
  CHECK(w->frame_residuals[0] <= 1e-10);
  CHECK(w->frame_residuals[1] <= 1e-10);
  CHECK(w->condition < 10.0);

  CHECK_FALSE(subspaces::witness_graph_bounded(Matrix::diagonal({1.0, 0.0}),
                                               Matrix::diagonal({1.0, 1.0}))
                  .has_value());
  CHECK_THROWS_AS((void)subspaces::witness_graph_bounded(Matrix(2, 2), Matrix(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("witness round trip on random well-conditioned factor pairs") {
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t k1 = dim(rng), k2 = dim(rng);
    const Matrix t = random_matrix(k2, k1, rng);
    const Matrix l = testutil::random_invertible(k2, 20.0, rng);
    const Matrix m = testutil::random_invertible(k1, 20.0, rng);
    const Matrix t2 = l * t * m;
    const auto w = subspaces::witness_graph_bounded(t, t2);
    REQUIRE(w.has_value());
    const double scale = 1.0 + subspaces::operator_norm(t) + subspaces::operator_norm(t2);
    CHECK(w->operator_residual <= 1e-8 * scale);
    CHECK(subspaces::quiver_iso_a2(t, t2));
    CHECK(subspaces::classify_bounded_fin(subspaces::graph_system(t),
                                          subspaces::graph_system(t2)));
  }
}

TEST_CASE("quiver_iso_a2 matches rank comparison") {
  std::mt19937_64 rng(34);
  const Matrix t = random_matrix(4, 3, rng);
  const Matrix l = testutil::random_invertible(4, 10.0, rng);
  const Matrix m = testutil::random_invertible(3, 10.0, rng);
  CHECK(subspaces::quiver_iso_a2(t, l * t * m));
  CHECK_FALSE(subspaces::quiver_iso_a2(t, Matrix(4, 3)));
  CHECK(subspaces::quiver_iso_a2(Matrix(4, 3), Matrix(4, 3)));
}

TEST_CASE("oblique_projection: reference cases") {
  // orthogonal complementary pair -> orthogonal projection
  const auto p_orth = subspaces::oblique_projection(Matrix::from_rows({{1.0}, {0.0}}),
                                                    Matrix::from_rows({{0.0}, {1.0}}));
  REQUIRE(p_orth.has_value());
  CHECK(((*p_orth) - Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}})).max_abs() <= 1e-12);

  // span{e1} along span{(1,1)/sqrt 2}
  const double s = 1.0 / std::sqrt(2.0);
  const auto p = subspaces::oblique_projection(Matrix::from_rows({{1.0}, {0.0}}),
                                               Matrix::from_rows({{s}, {s}}));
  REQUIRE(p.has_value());
  CHECK(((*p) - Matrix::from_rows({{1.0, -1.0}, {0.0, 0.0}})).max_abs() <= 1e-10);

  // non-complementary
  CHECK_FALSE(subspaces::oblique_projection(Matrix::from_rows({{1.0}, {0.0}}),
                                            Matrix::from_rows({{1.0}, {0.0}}))
                  .has_value());
}

TEST_CASE("oblique_projection properties on random complementary pairs") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix basis = testutil::random_invertible(6, 5.0, rng);
    const Matrix e1 = subspaces::orth_basis(basis.cols({0, 1, 2}));
    const Matrix e2 = subspaces::orth_basis(basis.cols({3, 4, 5}));
    const auto p = subspaces::oblique_projection(e1, e2);
    REQUIRE(p.has_value());
    CHECK(subspaces::operator_norm((*p) * (*p) - (*p)) <= 1e-9);
    CHECK(subspaces::rank(*p, 1e-8 * subspaces::operator_norm(*p)) == 3);
    // ran P = span e1, ran (1-P) = span e2
    CHECK(subspaces::operator_norm((*p) * e1 - e1) <= 1e-8);
    const Matrix q = Matrix::identity(6) - *p;
    CHECK(subspaces::operator_norm(q * e2 - e2) <= 1e-8);
  }
}

TEST_CASE("derived_system complements e1") {
  const FiniteSystem orth = subspaces::make_system(2, Matrix::from_rows({{1.0}, {0.0}}),
                                                   Matrix::from_rows({{0.0}, {1.0}}));
  const auto derived = subspaces::derived_system(orth);
  CHECK(derived.e1_perp.cols() == 1);
  CHECK(std::fabs(derived.e1_perp(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(36);
  const FiniteSystem s = subspaces::make_system(7, random_matrix(7, 3, rng),
                                                random_matrix(7, 2, rng));
  const auto d = subspaces::derived_system(s);
  CHECK(d.e1.cols() + d.e1_perp.cols() == s.ambient);
}

TEST_CASE("unitary isomorphism refines bounded isomorphism") {
  std::mt19937_64 rng(37);
  std::vector<FiniteSystem> systems;
  for (int i = 0; i < 8; ++i)
    systems.push_back(subspaces::make_system(6, random_matrix(6, 1 + i % 3, rng),
                                             random_matrix(6, 2, rng)));
  for (std::size_t i = 0; i < systems.size(); ++i)
    for (std::size_t j = 0; j < systems.size(); ++j)
      if (subspaces::classify_unitary_fin(systems[i], systems[j]))
        CHECK(subspaces::classify_bounded_fin(systems[i], systems[j]));
}

TEST_CASE("degenerate frames: zero-dimensional and full subspaces") {
  const FiniteSystem degenerate = subspaces::make_system(3, Matrix(3, 0), Matrix::identity(3));
  const auto q = subspaces::dim_quadruple(degenerate);
  CHECK(q == subspaces::DimQuadruple{0, 0, 3, 0});
  const auto parts = subspaces::halmos_decompose(degenerate);
  CHECK(parts.mm.cols() == 0);
  CHECK(parts.pm.cols() == 3);
  CHECK(parts.generic_angles.empty());
}
