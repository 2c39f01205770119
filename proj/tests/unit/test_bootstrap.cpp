#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

#include "sobolab/bootstrap.hpp"
#include "sobolab/errors.hpp"

#include <cmath>

using namespace sobolab;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double rel50(double a, const oracle::Float50& b) {
  return rel(a, static_cast<double>(b));
}

}  // namespace

TEST_SUITE("bootstrap") {
  TEST_CASE("ladder for n = 3 from p0 = 2 matches exact rationals") {
    const auto exact = oracle::ladder_exact(3, 2, 6);
    CHECK(exact[1] == oracle::Rational(18, 7));
    CHECK(exact[2] == oracle::Rational(1134, 387));
    const auto lad = iterate_ladder(3.0, 2.0, 6);
    REQUIRE(lad.values.size() == 7);
    for (int k = 0; k <= 6; ++k) {
      CAPTURE(k);
      CHECK(std::abs(lad.values[k] - static_cast<double>(exact[k])) < 1e-12);
      // the gap as a log stays accurate long after p_k rounds to 3
      const double gap = static_cast<double>(oracle::Float50(3 - exact[k]));
      CHECK(rel(lad.log_gaps[k], std::log(gap)) < 1e-12);
    }
  }

  TEST_CASE("ladder invariants for many (n, p0)") {
    for (int n = 2; n <= 8; ++n) {
      for (double p0 : {1.0, 1.5, 2.0}) {
        if (!(p0 < n)) continue;
        CAPTURE(n);
        CAPTURE(p0);
        const auto lad = iterate_ladder(n, p0, 40);
        CHECK(lad.strictly_increasing());
        for (std::size_t k = 0; k < lad.values.size(); ++k) {
          CHECK(lad.values[k] <= n);
          CHECK(std::isfinite(lad.log_gaps[k]));
          if (k > 0) {
            CHECK(lad.values[k] >= lad.values[k - 1]);
            // quadratic convergence: e_{k+1} <= e_k^2 / n * n^2 / (n^2 - n e + e^2) <= e_k
            CHECK(lad.log_gaps[k] < lad.log_gaps[k - 1]);
          }
        }
        // e_{k+1} = n e_k^2 / (n^2 - n e_k + e_k^2) on the gaps
        for (std::size_t k = 0; k + 1 < 8; ++k) {
          const double e = std::exp(lad.log_gaps[k]);
          CHECK(rel(std::exp(lad.log_gaps[k + 1]), n * e * e / (n * n - n * e + e * e)) < 1e-12);
        }
        // first iterates against exact rationals
        const auto exact = oracle::ladder_exact(n, oracle::Rational(static_cast<int>(2 * p0), 2), 4);
        for (int k = 0; k <= 4; ++k) CHECK(rel(lad.values[k], static_cast<double>(exact[k])) < 1e-13);
      }
    }
  }

  TEST_CASE("ladder converges to n and respects the iteration guard") {
    const auto lad = iterate_ladder(3.0, 2.0, kLadderIterationGuard);
    CHECK(std::abs(lad.values.back() - 3.0) < 1e-6);
    CHECK(lad.strictly_increasing());
    CHECK_THROWS_AS(iterate_ladder(3.0, 2.0, kLadderIterationGuard + 1), GuardError);
    CHECK_THROWS_AS(iterate_ladder(3.0, 3.0, 1), DomainError);
    CHECK_THROWS_AS(iterate_ladder(3.0, 0.5, 1), DomainError);
    CHECK(p_next(3.0, 2.0) == doctest::Approx(18.0 / 7.0).epsilon(1e-15));
    CHECK(static_cast<double>(p_next(3.0L, 2.0L)) == doctest::Approx(18.0 / 7.0).epsilon(1e-15));
  }

  TEST_CASE("k_for locates the ladder interval") {
    const auto lad = build_ladder(3.0, 2.0, 2.9);
    CHECK(lad.k_for(2.5) == 0);
    CHECK(lad.k_for(18.0 / 7.0) == 0);
    CHECK(lad.k_for(2.6) == 1);
    CHECK(lad.k_for(2.9) == 1);
    CHECK_THROWS_AS(static_cast<void>(lad.k_for(2.0)), DomainError);
    CHECK_THROWS_AS(static_cast<void>(lad.k_for(2.995)), DomainError);
    CHECK_THROWS_AS(build_ladder(3.0, 2.0, 3.0), DomainError);
    CHECK_THROWS_AS(build_ladder(3.0, 2.0, 1.5), DomainError);
  }

  TEST_CASE("chains reach ladder points far up the ladder") {
    const auto lad = iterate_ladder(3.0, 2.0, 5);
    REQUIRE(lad.values[5] < 3.0);
    const auto ch = chain_constants(3.0, 2.0, 1.0, 1.0, lad.values[5]);
    CHECK(ch.k == 4);
    CHECK(std::isfinite(ch.c1));
    CHECK(ch.c1 > chain_constants(3.0, 2.0, 1.0, 1.0, lad.values[4]).c1);
  }

  TEST_CASE("single step constants") {
    const auto s = step_constants(4.0, 2.0, 8.0 / 3.0, 1.0, 0.0);
    CHECK(std::abs(s.c1 - 8.0) < 1e-12);
    CHECK(s.c2 == 0.0);
    CHECK(s.r == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(r_p(3.0, 2.0, 2.5) == doctest::Approx(2.5 / (2.0 * 0.5)));
    CHECK_THROWS_AS(step_constants(3.0, 2.0, 2.6, 1.0, 1.0), DomainError);  // beyond 18/7
    CHECK_THROWS_AS(step_constants(3.0, 2.0, 2.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(step_constants(3.0, 2.0, 2.5, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(step_constants(3.0, 2.0, 2.5, 1.0, -1.0), DomainError);
  }

  TEST_CASE("chains reproduce 50-digit golden values") {
    struct Case {
      double n, p0, a, b, p;
      double c1, c2;
      int k, m;
    };
    const Case cases[] = {
        {3, 2, 1, 1, 2.9, 3802.4041105524671132, 1.7078984807485805993, 1, 4},
        {3, 2, 1, 1, 2.5, 14.147509920070239683, 1.1892071150027210667, 0, 2},
        {4, 2, 1, 0, 8.0 / 3.0, 8.0, 0.0, 0, 2},
        {2, 1.2, 0.5, 2, 1.9, 35889.624427329517175, 24661.962709582923553, 2, 8},
        {3, 2, 2, 0.5, 2.99, 13710956.188834291673, 0.00077907380022224962917, 2, 8},
    };
    for (const auto& c : cases) {
      CAPTURE(c.n);
      CAPTURE(c.p);
      const auto ch = chain_constants(c.n, c.p0, c.a, c.b, c.p);
      CHECK(ch.k == c.k);
      CHECK(ch.m_p == c.m);
      CHECK(ch.steps.size() == static_cast<std::size_t>(c.k + 1));
      CHECK(rel(ch.c1, c.c1) < 1e-12);
      if (c.c2 == 0.0) {
        CHECK(ch.c2 == 0.0);
      } else {
        CHECK(rel(ch.c2, c.c2) < 1e-12);
      }
      const auto hp = oracle::chain50(c.n, c.p0, c.a, c.b, c.p);
      CHECK(hp.k == c.k);
      CHECK(rel50(ch.c1, hp.c1) < 1e-12);
      const auto ext = chain_constants_extended(c.n, c.p0, c.a, c.b, c.p);
      CHECK(rel(static_cast<double>(ext.c1), ch.c1) < 1e-12);
      CHECK(ext.m_p == ch.m_p);
    }
  }

  TEST_CASE("chains equal hand-composed steps") {
    // n = 3, p0 = 2, target 2.9: 2 -> 18/7 -> 2.9
    const auto s1 = step_constants(3.0, 2.0, 18.0 / 7.0, 1.5, 0.7);
    const auto s2 = step_constants(3.0, 18.0 / 7.0, 2.9, s1.c1, s1.c2);
    const auto ch = chain_constants(3.0, 2.0, 1.5, 0.7, 2.9);
    CHECK(rel(ch.c1, s2.c1) < 1e-10);
    CHECK(rel(ch.c2, s2.c2) < 1e-10);
    CHECK(rel(ch.steps[0].to_p, 18.0 / 7.0) < 1e-15);
    CHECK(ch.steps[1].from_p == ch.steps[0].to_p);
  }

  TEST_CASE("constants grow with the base constants and are continuous in the target") {
    for (double p : {2.2, 2.5, 2.7, 2.9}) {
      const auto lo = chain_constants(3.0, 2.0, 1.0, 1.0, p);
      const auto hi = chain_constants(3.0, 2.0, 1.1, 1.2, p);
      CHECK(hi.c1 >= lo.c1);
      CHECK(hi.c2 >= lo.c2);
    }
    // A rounded ladder point stays in the interval it closes.
    const double p1 = p_next(3.0, 2.0);
    const auto at = chain_constants(3.0, 2.0, 1.0, 1.0, p1);
    const auto below = chain_constants(3.0, 2.0, 1.0, 1.0, p1 * (1 - 1e-11));
    CHECK(at.k == 0);
    CHECK(rel(below.c1, at.c1) < 1e-9);
    // Past it an extra hop starts; a hop of length zero multiplies C1 by (1 + B).
    const auto above = chain_constants(3.0, 2.0, 1.0, 1.0, p1 * (1 + 1e-9));
    CHECK(above.k == 1);
    CHECK(rel(above.c1, at.c1 * (1.0 + at.c2)) < 1e-6);
  }

  TEST_CASE("alpha scaling bound holds on the acceptance grid") {
    int failures = 0;
    int total = 0;
    for (double n : {3.0, 4.0}) {
      for (double target : {n - 0.5, n - 0.1, n - 0.01}) {
        for (double a1 : {0.5, 1.0, 2.0}) {
          for (double b1 : {0.5, 1.0, 2.0}) {
            for (double alpha : {1.0, 2.0, 10.0}) {
              const auto rec = alpha_scaling_bound(n, 2.0, target, a1, b1, alpha);
              ++total;
              if (!rec.holds) {
                ++failures;
                MESSAGE(rec.describe());
              }
              CHECK(rec.factor == doctest::Approx(std::pow(alpha, rec.m_p * target / 2.0)));
              if (alpha == 1.0) CHECK(rec.c1_scaled == rec.c1_bound);
            }
          }
        }
      }
    }
    CHECK(total == 162);
    CHECK(failures == 0);
    CHECK_THROWS_AS(alpha_scaling_bound(3.0, 2.0, 2.5, 1.0, 1.0, 0.5), DomainError);
  }

  TEST_CASE("describe names the compared constants") {
    const auto rec = alpha_scaling_bound(3.0, 2.0, 2.5, 1.0, 1.0, 2.0);
    const auto text = rec.describe();
    CHECK(text.find("alpha=2") != std::string::npos);
    CHECK(text.find("m=2") != std::string::npos);
  }

  TEST_CASE("rhs factor from the geometric summary") {
    const auto& m = fixtures::model(fixtures::kSphere);
    const auto ch = chain_constants(2.0, 1.2, 1.0, 1.0, 1.5);
    CHECK_THROWS_AS(theorem_a2_rhs_factor(m, 1.5, ch, 1.0), DomainError);
    const auto& t = fixtures::model(fixtures::kTorus3);
    const auto ch3 = chain_constants(3.0, 2.0, 1.0, 1.0, 2.9);
    // flat unit-volume torus: phi = 1
    CHECK(theorem_a2_rhs_factor(t, 2.9, ch3, 3.0) == doctest::Approx(3.0).epsilon(1e-12));
    const auto big = scale_metric(t, 2.0);
    CHECK(theorem_a2_rhs_factor(big, 2.9, ch3) == doctest::Approx(std::pow(4.0, 4 * 2.9 / 2.0)).epsilon(1e-12));
  }
}
