#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

#include "sobolab/constants.hpp"
#include "sobolab/errors.hpp"
#include "sobolab/norms.hpp"
#include "sobolab/semigroup_riesz.hpp"

#include <cmath>

using namespace sobolab;

TEST_SUITE("semigroup_riesz") {
  TEST_CASE("heat semigroup contracts every Lp norm") {
    for (const char* spec : {fixtures::kTorus2, fixtures::kSphere}) {
      for (double psi : {0.0, 1.0}) {
        CAPTURE(spec);
        CAPTURE(psi);
        const auto& m = fixtures::model(spec);
        const auto e = fixtures::ensemble(m, 17, 100);
        const auto r = heat_contraction_check(m, fixtures::spectrum(spec, psi), {0.01, 0.1, 1.0},
                                              {1.0, 2.0, kInfinity}, e);
        CHECK(r.violations == 0);
        CHECK(r.worst_ratio <= 1.0 + kContractionSlack);
        CHECK(r.evaluated == 900);
        if (psi == 0.0) CHECK(r.worst_ratio == doctest::Approx(1.0).epsilon(1e-9));  // the constant
      }
    }
  }

  TEST_CASE("contraction check refuses negative potentials and times") {
    const auto& m = fixtures::model(fixtures::kTorus2);
    const auto d = decompose(m, PotentialField::constant(m, -0.5));
    const auto e = fixtures::ensemble(m, 1, 4);
    CHECK_THROWS_AS(heat_contraction_check(m, d, {0.1}, {2.0}, e), DomainError);
    CHECK_THROWS_AS(heat_contraction_check(m, fixtures::spectrum(fixtures::kTorus2, 0.0), {0.0}, {2.0}, e),
                    DomainError);
  }

  TEST_CASE("ultracontractivity slope on the flat torus follows t^{-n/4}") {
    const auto m = build(parse_model_spec("torus:n=2,res=32,L=1"));
    const auto d = decompose(m, PotentialField::constant(m, 1.0));
    const auto fit = ultracontractivity_fit(d, 1e-3, 1e-2);
    CHECK(fit.times.size() == 16);
    CHECK(fit.t_floor == doctest::Approx(4.0 / d.lambda_max()));
    CHECK(std::abs(fit.slope + 0.5) < 0.1);
    CHECK(fit.mu_hat == doctest::Approx(-4.0 * fit.slope));
    CHECK(fit.c_hat == doctest::Approx(std::exp(fit.intercept)));
    // the continuous torus over the same samples
    std::vector<double> exact;
    for (double t : fit.times) exact.push_back(oracle::torus_heat_2_to_inf(2, 1.0, t, 1.0));
    const double ref = oracle::loglog_slope(fit.times, exact);
    CHECK(ref == doctest::Approx(-0.50366).epsilon(1e-4));
    CHECK(std::abs(fit.slope - ref) < 0.03);
    CHECK(oracle::loglog_slope(fit.times, fit.norms) == doctest::Approx(fit.slope).epsilon(1e-12));
  }

  TEST_CASE("ultracontractivity on the sphere and the spectral floor") {
    const auto& d = fixtures::spectrum(fixtures::kSphere, 1.0);
    const auto fit = ultracontractivity_fit(d, 0.0125, 0.125);
    CHECK(fit.mu_hat == doctest::Approx(2.0).epsilon(0.2));
    CHECK_THROWS_AS(ultracontractivity_fit(d, 1e-3, 1e-2), GuardError);
    CHECK_THROWS_AS(ultracontractivity_fit(d, 0.1, 0.05), DomainError);
    CHECK_THROWS_AS(ultracontractivity_fit(d, 0.02, 0.05, 1), DomainError);
  }

  TEST_CASE("log-Sobolev heat bounds hold member-wise and for the exact operator norms") {
    const auto& m = fixtures::model(fixtures::kTorus3);
    const auto& d = fixtures::spectrum(fixtures::kTorus3, 1.0);
    const auto e = fixtures::ensemble(m, 23, 100);
    const auto est = estimate_sobolev_AB(m, 2.0, e);
    const double a = bessel_form_constant(est.a_est, est.b_est, m.volume(), m.dim);
    auto beta = [a](double s) { return beta_from_sobolev(a, 3.0, s); };
    auto tau = [&](double t) { return tau_quadrature(beta, t); };
    const auto r = check_theorem_31(m, d, tau, {0.05, 0.1, 0.5}, e);
    CHECK(r.violations == 0);
    CHECK(r.operator_violations == 0);
    CHECK(r.inf_psi_minus == 0.0);
    REQUIRE(r.rows.size() == 3);
    for (const auto& row : r.rows) {
      CHECK(row.tau == doctest::Approx(tau_closed_form(a, 3.0, row.t)).epsilon(1e-9));
      CHECK(row.bound_l2 == doctest::Approx(std::exp(row.tau)));
      CHECK(row.exact_l2 <= row.bound_l2);
      CHECK(row.exact_l1 <= row.bound_l1);
      CHECK(row.heat1.worst_ratio <= 1.0);
      CHECK(row.heat1.evaluated == 100);
    }
  }

  TEST_CASE("heat bounds: sigma* horizon and a non-finite tau are rejected") {
    const auto& m = fixtures::model(fixtures::kTorus3);
    const auto& d = fixtures::spectrum(fixtures::kTorus3, 1.0);
    const auto e = fixtures::ensemble(m, 2, 4);
    auto tau = [](double t) { return -0.75 * std::log(t); };
    CHECK_NOTHROW(check_theorem_31(m, d, tau, {0.1}, e, 0.5));
    CHECK_THROWS_AS(check_theorem_31(m, d, tau, {0.2}, e, 0.5), DomainError);
    CHECK_THROWS_AS(check_theorem_31(m, d, [](double) { return kInfinity; }, {0.1}, e), DomainError);
    CHECK_THROWS_AS(check_theorem_31(m, d, tau, {0.0}, e), DomainError);
  }

  TEST_CASE("point masses attain the L1 to Linf heat norm") {
    const auto& m = fixtures::model(fixtures::kSphere);
    const auto& d = fixtures::spectrum(fixtures::kSphere, 1.0);
    Ensemble deltas;
    deltas.members = m.mass.cwiseInverse().asDiagonal();
    for (Eigen::Index i = 0; i < m.num_nodes(); ++i) deltas.ids.push_back("delta:" + std::to_string(i));
    InequalityContext ctx;
    ctx.manifold = &m;
    ctx.operator_h = &d;
    InequalitySpec spec;
    spec.kind = InequalityKind::Heat2;
    spec.t = 0.05;
    const double sup = minimal_constant(ctx, spec, deltas);
    CHECK(sup == doctest::Approx(op_norm_1_to_inf(d, heat_function(0.05))).epsilon(1e-12));
  }

  TEST_CASE("operator labels and advertised exponents") {
    CHECK(parse_operator("H^{-1/2}").power == -0.5);
    CHECK(parse_operator("H^-0.5").power == -0.5);
    CHECK(parse_operator("H^{-1}").power == -1.0);
    const auto r = parse_operator("grad H^{-1/2}");
    CHECK(r.gradient);
    CHECK(r.power == -0.5);
    CHECK(parse_operator("identity").power == 0.0);
    CHECK(parse_operator(parse_operator("grad H^{-1/2}").label()).gradient);
    CHECK_THROWS_AS(parse_operator("H^x"), DomainError);
    CHECK(advertised_output_exponent(3.0, 1.5, 1) == doctest::Approx(3.0));
    CHECK(advertised_output_exponent(3.0, 1.2, 2) == doctest::Approx(6.0));
    CHECK_THROWS_AS(advertised_output_exponent(3.0, 1.5, 2), DomainError);
    CHECK_THROWS_AS(advertised_output_exponent(3.0, 1.5, 3), DomainError);
  }

  TEST_CASE("identity mapping norm is the Lp embedding constant") {
    const auto& m = fixtures::model(fixtures::kTorus3);
    const auto& d = fixtures::spectrum(fixtures::kTorus3, 1.0);
    const auto e = fixtures::ensemble(m, 3, 30);
    const auto same = mapping_norm(m, d, parse_operator("identity"), 2.0, 2.0, e);
    CHECK(same.estimate == doctest::Approx(1.0).epsilon(1e-12));
    // unit volume: ||u||_1 <= ||u||_2 with equality on constants
    const auto down = mapping_norm(m, d, parse_operator("identity"), 2.0, 1.0, e);
    CHECK(down.estimate == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(down.ensemble_sup <= down.estimate * (1 + 1e-12));
  }

  TEST_CASE("mapping norm scans: finite, refined, monotone and scale invariant") {
    const auto& m = fixtures::model(fixtures::kTorus3);
    const auto& d = fixtures::spectrum(fixtures::kTorus3, 1.0);
    const auto small = fixtures::ensemble(m, 3, 20);
    const auto big = fixtures::ensemble(m, 3, 60);
    const auto op = parse_operator("H^{-1/2}");
    const auto a = mapping_norm(m, d, op, 1.5, 3.0, small);
    const auto b = mapping_norm(m, d, op, 1.5, 3.0, big);
    CHECK(std::isfinite(a.estimate));
    CHECK(a.estimate >= a.ensemble_sup);
    CHECK(b.ensemble_sup >= a.ensemble_sup);
    CHECK(a.mesh_nodes == m.num_nodes());
    CHECK(a.ensemble_size == 20);
    CHECK(a.p_out == 3.0);
    Ensemble scaled = small;
    scaled.members *= 1e3;
    const auto s = mapping_norm(m, d, op, 1.5, 3.0, scaled);
    CHECK(s.estimate == doctest::Approx(a.estimate).epsilon(1e-10));
    // the refinement step that wins may differ at rounding level, the member does not
    CHECK(s.witness.substr(0, s.witness.find('+')) == a.witness.substr(0, a.witness.find('+')));
    const auto again = mapping_norm(m, d, op, 1.5, 3.0, small);
    CHECK(again.estimate == a.estimate);
    CHECK_THROWS_AS(mapping_norm(m, fixtures::spectrum(fixtures::kTorus3, 0.0), op, 1.5, 3.0, small),
                    SingularOperatorError);
    CHECK_THROWS_AS(mapping_norm(m, d, op, 0.5, 3.0, small), DomainError);
  }

  TEST_CASE("mapping norms are stable under mesh refinement") {
    std::vector<double> half;
    std::vector<double> inv;
    for (const char* spec : {"torus:n=3,res=6,L=1", fixtures::kTorus3}) {
      const auto& m = fixtures::model(spec);
      const auto& d = fixtures::spectrum(spec, 1.0);
      const auto e = fixtures::ensemble(m, 3, 60, GeneratorKind::BandLimited);
      half.push_back(mapping_norm(m, d, parse_operator("H^{-1/2}"), 1.5, 3.0, e).estimate);
      inv.push_back(mapping_norm(m, d, parse_operator("H^{-1}"), 1.2, 6.0, e).estimate);
    }
    CHECK(std::abs(half[1] / half[0] - 1.0) < 0.25);
    CHECK(std::abs(inv[1] / inv[0] - 1.0) < 0.25);
  }

  TEST_CASE("Riesz ratio at p = 2 obeys the energy identity") {
    for (const char* spec : {fixtures::kTorus2, fixtures::kTorus3, fixtures::kSphere}) {
      CAPTURE(spec);
      const auto& m = fixtures::model(spec);
      const auto e = fixtures::ensemble(m, 41, 60);
      const auto r = riesz_ratio(m, fixtures::spectrum(spec, 1.0), 2.0, e);
      CHECK(r.estimate <= 1.0 + 1e-8);
      CHECK(r.estimate > 0.5);
      CHECK(r.operator_label.find("grad") != std::string::npos);
      const auto r15 = riesz_ratio(m, fixtures::spectrum(spec, 1.0), 1.5, e);
      CHECK(std::isfinite(r15.estimate));
    }
  }

  TEST_CASE("Bakry constant is stable on the sphere") {
    double prev = 0.0;
    for (const char* spec : {"sphere:r=1,subdiv=2", fixtures::kSphere}) {
      const auto& m = fixtures::model(spec);
      const auto e = fixtures::ensemble(m, 8, 100);
      std::string witness;
      const double c = bakry_constant(m, fixtures::spectrum(spec, 1.0), 0.0, 1.5, e, &witness);
      CHECK(std::isfinite(c));
      CHECK_FALSE(witness.empty());
      if (prev > 0.0) CHECK(std::abs(c / prev - 1.0) < 0.05);
      prev = c;
    }
    const auto& m = fixtures::model(fixtures::kSphere);
    const auto e = fixtures::ensemble(m, 8, 20);
    const auto& b = fixtures::spectrum(fixtures::kSphere, 1.0);
    CHECK(bakry_constant(m, b, 1.0, 1.5, e) <= bakry_constant(m, b, 0.0, 1.5, e));
    CHECK_THROWS_AS(bakry_constant(m, b, -1.0, 1.5, e), DomainError);
  }

  TEST_CASE("Bessel equivalence constants at p = 2 lie in [1/sqrt 2, sqrt 2]") {
    for (const char* spec : {fixtures::kTorus2, fixtures::kSphere}) {
      CAPTURE(spec);
      const auto& m = fixtures::model(spec);
      const auto e = fixtures::ensemble(m, 19, 80);
      for (double a : {1.0, 2.0}) {
        const auto eq = bessel_equivalence_constants(m, fixtures::spectrum(spec, 0.0), a, 2.0, e);
        CHECK(eq.c1_hat >= 1.0 / std::sqrt(2.0) - 1e-6);
        CHECK(eq.c2_hat <= std::sqrt(2.0) + 1e-6);
        CHECK(eq.c1_hat <= eq.c2_hat);
        CHECK(eq.used + eq.excluded == 80);
      }
    }
    const auto& m = fixtures::model(fixtures::kTorus2);
    const auto e = fixtures::ensemble(m, 19, 5);
    CHECK_THROWS_AS(bessel_equivalence_constants(m, fixtures::spectrum(fixtures::kTorus2, 1.0), 1.0, 2.0, e),
                    DomainError);
    CHECK_THROWS_AS(bessel_equivalence_constants(m, fixtures::spectrum(fixtures::kTorus2, 0.0), 1.0, 1.0, e),
                    DomainError);
  }

  TEST_CASE("scaling transfer under g -> lambda^2 g") {
    const auto& m = fixtures::model(fixtures::kTorus3);
    const auto e = fixtures::ensemble(m, 29, 40);
    for (double lambda : {1.0, 2.0, 10.0}) {
      CAPTURE(lambda);
      const auto r = scaling_transfer_check(m, lambda, 3.0, 1.5, fixtures::spectrum(fixtures::kTorus3, 1.0), e);
      CHECK(r.max_lp_defect <= 1e-10);
      CHECK(r.max_grad_defect <= 1e-10);
      CHECK(r.transfer.violations == 0);
      CHECK(r.c_bar > 0.0);
    }
    CHECK_THROWS_AS(scaling_transfer_check(m, 0.5, 3.0, 1.5, fixtures::spectrum(fixtures::kTorus3, 1.0), e),
                    DomainError);
  }

  TEST_CASE("integral Ricci regime") {
    const auto& m = fixtures::model(fixtures::kSphere);
    const auto e = fixtures::ensemble(m, 4, 30);
    const auto r = li_regime_check(m, 0.0, 1.0, 1.5, e);
    CHECK(r.gamma == 0.0);  // Ric = 1 > 0
    CHECK(r.c_hat > 0.0);
    // a constant shift that makes (Ric + c)^- = 1 everywhere: gamma = vol^{1/(2 eps)}
    const auto shifted = li_regime_check(m, -2.0, 1.0, 1.5, e);
    CHECK(shifted.gamma == doctest::Approx(std::pow(m.volume(), 0.5)).epsilon(1e-12));
    CHECK(shifted.c_hat <= r.c_hat);
    CHECK_THROWS_AS(li_regime_check(m, 0.0, 1.0, 2.0, e), DomainError);
    CHECK_THROWS_AS(li_regime_check(m, 0.0, 0.0, 1.5, e), DomainError);
  }
}
