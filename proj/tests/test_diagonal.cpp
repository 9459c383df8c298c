#include "subspaces/diagonal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <random>

#include "doctest.h"

using subspaces::CardinalDim;
using subspaces::CountOrInf;
using subspaces::DiagonalSpec;
using subspaces::SymTerm;

namespace {

const SymTerm kInvN{1.0, 0.0, -1.0, 1.0, 0.0};
const SymTerm kInvN2{1.0, 0.0, -2.0, 1.0, 0.0};
const SymTerm kInvN3{1.0, 0.0, -3.0, 1.0, 0.0};
const SymTerm kInvNLogN{1.0, 1.0, -1.0, 1.0, -1.0};  // 1/((n+1) log(n+1))
const SymTerm kConst2{2.0, 0.0, 0.0, 1.0, 0.0};
const SymTerm kSquares{1.0, 0.0, 2.0, 1.0, 0.0};

}  // namespace

TEST_CASE("eval_term reference values") {
  CHECK(subspaces::eval_term(kInvN, 4) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(subspaces::eval_term(kInvNLogN, 1) ==
        doctest::Approx(1.0 / (2.0 * std::log(2.0))).epsilon(1e-15));
  CHECK(subspaces::eval_term(kSquares, 3) == doctest::Approx(9.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)subspaces::eval_term(kInvN, 0), std::invalid_argument);
}

TEST_CASE("term positivity over the head range for assorted shapes") {
  const std::vector<SymTerm> terms = {kInvN, kInvN2, kInvNLogN, kConst2, kSquares,
                                      SymTerm{0.3, 2.0, -1.5, 3.0, 2.0}};
  for (const auto& t : terms)
    for (std::uint64_t n = 1; n <= 10000; n += 97) CHECK(subspaces::eval_term(t, n) > 0.0);
}

TEST_CASE("spec validation rejects malformed input") {
  CHECK_THROWS_AS(DiagonalSpec({SymTerm{-1.0, 0, -1, 1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalSpec({SymTerm{1.0, -0.5, -1, 1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalSpec({SymTerm{1.0, 0, -1, 0.5, 0}}), std::invalid_argument);
  // p = -1, q = 10: the turning point e^{10} is past the head window
  CHECK_THROWS_AS(DiagonalSpec({SymTerm{1.0, 0, -1, 1, 10.0}}), std::invalid_argument);
  // p = -1, q = 2 turns at e^2, inside the window: fine
  CHECK_NOTHROW(DiagonalSpec({SymTerm{1.0, 0, -1, 1, 2.0}}));
  CHECK_THROWS_AS(DiagonalSpec({kInvN}, {{1, 1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalSpec({kInvN}, {{0, 1, -2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalSpec({kInvN}, {{0, 3, 1.0}, {0, 3, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalSpec({}, {}, 0, CardinalDim::finite(0), {{0.0, 1.0}}),
                  std::invalid_argument);
}

TEST_CASE("sh_exponent symbolic values") {
  for (double s : {0.5, 1.0, 2.0, 3.0}) {
    const DiagonalSpec spec({SymTerm{1.0, 0.0, -s, 1.0, 0.0}});
    CHECK(subspaces::sh_exponent(spec) == 1.0 / s);
  }
  CHECK(subspaces::sh_exponent(DiagonalSpec({kInvNLogN})) == 1.0);
  CHECK(std::isinf(subspaces::sh_exponent(DiagonalSpec({kConst2}))));
  CHECK(std::isinf(subspaces::sh_exponent(DiagonalSpec({SymTerm{1, 0, 0, 1, -1}}))));
  CHECK(std::isinf(subspaces::sh_exponent(
      DiagonalSpec({kInvN2}, {}, 0, CardinalDim::finite(0), {{2.0, 3.0}}))));
  // max over branches
  CHECK(subspaces::sh_exponent(DiagonalSpec({kInvN2, kInvN3})) == 0.5);
}

TEST_CASE("schatten_member boundary behaviour") {
  const DiagonalSpec harmonic({kInvN});
  CHECK_FALSE(subspaces::schatten_member(harmonic, 1.0));
  CHECK(subspaces::schatten_member(harmonic, 2.0));
  // the log factor does not rescue the boundary: integral of 1/(x log x) diverges
  CHECK_FALSE(subspaces::schatten_member(DiagonalSpec({kInvNLogN}), 1.0));
  // but a log^2 denominator does converge at the boundary
  CHECK(subspaces::schatten_member(DiagonalSpec({SymTerm{1, 1, -1, 1, -2}}), 1.0));
  CHECK_THROWS_AS((void)subspaces::schatten_member(harmonic, 0.0), std::invalid_argument);
}

TEST_CASE("sh_exponent consistent with schatten_member") {
  const std::vector<DiagonalSpec> specs = {
      DiagonalSpec({kInvN}), DiagonalSpec({kInvN2}), DiagonalSpec({kInvN3}),
      DiagonalSpec({SymTerm{1.0, 0.0, -0.5, 1.0, 0.0}}), DiagonalSpec({kInvNLogN}),
  };
  for (const auto& spec : specs) {
    const double s = subspaces::sh_exponent(spec);
    REQUIRE(std::isfinite(s));
    CHECK(subspaces::schatten_member(spec, s + 0.1));
    CHECK_FALSE(subspaces::schatten_member(spec, std::max(s - 0.1, s / 2.0)));
  }
}

TEST_CASE("mu_sequence: merges, overrides, errors") {
  const auto mu1 = subspaces::mu_sequence(DiagonalSpec({kInvN}), 3);
  CHECK(mu1 == std::vector<double>{1.0, 0.5, 1.0 / 3.0});

  const auto mu2 = subspaces::mu_sequence(DiagonalSpec({kInvN, kInvN}), 4);
  CHECK(mu2 == std::vector<double>{1.0, 1.0, 0.5, 0.5});

  // brute-force merge oracle for (1/n^2) + (1/n^3): first 100 of each
  std::vector<double> oracle;
  for (std::uint64_t n = 1; n <= 100; ++n) {
    oracle.push_back(subspaces::eval_term(kInvN2, n));
    oracle.push_back(subspaces::eval_term(kInvN3, n));
  }
  std::sort(oracle.begin(), oracle.end(), std::greater<>());
  const auto mu3 = subspaces::mu_sequence(DiagonalSpec({kInvN2, kInvN3}), 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(mu3[i] == oracle[i]);
  CHECK(mu3 == std::vector<double>{1.0, 1.0, 0.25, 0.125});

  // an override reorders the rearrangement
  const auto mu4 = subspaces::mu_sequence(DiagonalSpec({kInvN}, {{0, 2, 7.0}}), 3);
  CHECK(mu4 == std::vector<double>{7.0, 1.0, 1.0 / 3.0});

  CHECK_THROWS_AS((void)subspaces::mu_sequence(DiagonalSpec({kConst2}), 3),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)subspaces::mu_sequence(DiagonalSpec({kInvN}), 2000000),
                  std::invalid_argument);
}

TEST_CASE("mu_sequence is non-increasing and merge-consistent") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> pd(-3.0, -0.5);
  std::uniform_real_distribution<double> cd(0.2, 5.0);
  for (int trial = 0; trial < 5; ++trial) {
    const SymTerm t1{cd(rng), 0.0, pd(rng), 1.0, 0.0};
    const SymTerm t2{cd(rng), 1.0, pd(rng), 2.0, -1.0};
    const auto merged = subspaces::mu_sequence(DiagonalSpec({t1, t2}), 1000);
    CHECK(std::is_sorted(merged.rbegin(), merged.rend()));
    auto a = subspaces::mu_sequence(DiagonalSpec({t1}), 1000);
    const auto b = subspaces::mu_sequence(DiagonalSpec({t2}), 1000);
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end(), std::greater<>());
    a.resize(1000);
    CHECK(merged == a);
  }
}

TEST_CASE("counting reference windows") {
  CHECK(subspaces::counting(DiagonalSpec({kInvN}), 0.25, 0.5) == CountOrInf::of(3));
  CHECK(subspaces::counting(DiagonalSpec({kInvN2}, {}, 0, CardinalDim::finite(0), {{2, 3}}),
                            2.5, 2.6) == CountOrInf::inf());
  CHECK(subspaces::counting(DiagonalSpec({kSquares}), 4.0, 16.0) == CountOrInf::of(3));
  CHECK(subspaces::counting(DiagonalSpec({kConst2}), 1.9, 2.1) == CountOrInf::inf());
  CHECK(subspaces::counting(DiagonalSpec({kConst2}), 2.5, 2.6) == CountOrInf::of(0));
  // deep tail window hit by monotone inversion: n in [3703704, 7692307]
  CHECK(subspaces::counting(DiagonalSpec({kInvN}), 1.3e-7, 2.7e-7) ==
        CountOrInf::of(3988604));
  CHECK_THROWS_AS((void)subspaces::counting(DiagonalSpec({kInvN}), 0.5, 0.25),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)subspaces::counting(DiagonalSpec({kInvN}), 0.0, 0.25),
                  std::invalid_argument);
}

TEST_CASE("counting monotone in window enlargement") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> wd(0.001, 2.0);
  const DiagonalSpec spec({kInvN, kInvN3}, {{0, 5, 3.0}});
  for (int trial = 0; trial < 40; ++trial) {
    double alpha = wd(rng), beta = wd(rng);
    if (alpha > beta) std::swap(alpha, beta);
    const auto inner = subspaces::counting(spec, alpha, beta);
    const auto outer = subspaces::counting(spec, alpha / 2.0, beta * 2.0);
    CHECK(inner <= outer);
  }
}

TEST_CASE("counting agrees with mu_sequence windows") {
  const DiagonalSpec spec({kInvN2, kInvN3}, {{0, 1, 0.7}});
  const auto mu = subspaces::mu_sequence(spec, 500);
  // boundaries strictly between adjacent distinct values
  for (std::size_t i = 10; i + 1 < 200; i += 37) {
    std::size_t j = i + 1;
    while (j < 500 && mu[j] == mu[i]) ++j;
    if (j >= 500) continue;
    const double alpha = std::sqrt(mu[j] * mu[i]);
    std::uint64_t expected = 0;
    for (double v : mu)
      if (v >= alpha && v <= mu[2]) ++expected;
    CHECK(subspaces::counting(spec, alpha, mu[2]) == CountOrInf::of(expected));
  }
}

TEST_CASE("a spectral profile answers repeated queries consistently") {
  const DiagonalSpec spec({kInvN, kSquares}, {{0, 3, 5.0}});
  const subspaces::SpectralProfile profile(spec);
  for (int rep = 0; rep < 3; ++rep) {
    CHECK(profile.count(0.25, 0.5) == subspaces::counting(spec, 0.25, 0.5));
    CHECK(profile.count(4.0, 16.0) == subspaces::counting(spec, 4.0, 16.0));
    CHECK(profile.count(4.9, 5.1) == CountOrInf::of(1));  // just the overridden entry
  }
}

TEST_CASE("range_closed and domain_total") {
  CHECK(subspaces::range_closed(DiagonalSpec({kConst2})));
  CHECK(subspaces::range_closed(DiagonalSpec({kSquares})));
  CHECK_FALSE(subspaces::range_closed(DiagonalSpec({kInvN})));
  CHECK_FALSE(subspaces::range_closed(DiagonalSpec({kSquares, kInvN2})));
  CHECK(subspaces::range_closed(
      DiagonalSpec({}, {}, 0, CardinalDim::finite(0), {{2.0, 3.0}})));

  CHECK(subspaces::domain_total(DiagonalSpec({kInvN})));
  CHECK(subspaces::domain_total(DiagonalSpec({kConst2})));
  CHECK_FALSE(subspaces::domain_total(DiagonalSpec({kSquares})));
}

TEST_CASE("cokernel arithmetic") {
  CHECK(subspaces::cokernel_dim(DiagonalSpec({kInvN})) == CardinalDim::finite(0));
  CHECK(subspaces::cokernel_dim(DiagonalSpec({kInvN}, {}, 1)) == CardinalDim::finite(1));
  CHECK(subspaces::cokernel_dim(DiagonalSpec({kInvN}, {}, 3, CardinalDim::finite(2))) ==
        CardinalDim::finite(5));
  CHECK(subspaces::cokernel_dim(DiagonalSpec({kInvN}, {}, 1, CardinalDim::make_continuum())) ==
        CardinalDim::make_continuum());
}

TEST_CASE("compact_type classification") {
  CHECK(subspaces::compact_type(DiagonalSpec({kInvN, kInvNLogN})));
  CHECK(subspaces::compact_type(DiagonalSpec({SymTerm{1, 0, 0, 1, -1}})));  // 1/log(n+1)
  CHECK_FALSE(subspaces::compact_type(DiagonalSpec({kConst2})));
  CHECK_FALSE(subspaces::compact_type(DiagonalSpec({kSquares, kInvN2})));
  CHECK_FALSE(subspaces::compact_type(
      DiagonalSpec({kInvN}, {}, 0, CardinalDim::finite(0), {{1.0, 2.0}})));
}
