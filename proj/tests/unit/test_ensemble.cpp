#include <doctest.h>

#include "fixtures.hpp"

#include "sobolab/ensemble.hpp"
#include "sobolab/errors.hpp"
#include "sobolab/norms.hpp"

#include <cmath>
#include <cstring>

using namespace sobolab;

namespace {

bool bit_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_SUITE("ensemble") {
  TEST_CASE("regeneration with the same spec is bit-identical") {
    for (const char* spec : {fixtures::kTorus2, fixtures::kSphere, "box:n=2,res=7,L=1x2"}) {
      CAPTURE(spec);
      const auto& m = fixtures::model(spec);
      for (auto kind : {GeneratorKind::Mixed, GeneratorKind::BandLimited, GeneratorKind::Bumps}) {
        const auto a = fixtures::ensemble(m, 42, 30, kind);
        const auto b = fixtures::ensemble(m, 42, 30, kind);
        CHECK(bit_equal(a.members, b.members));
        CHECK(a.ids == b.ids);
        CHECK(a.members.allFinite());
      }
    }
  }

  TEST_CASE("different seeds give different members") {
    const auto& m = fixtures::model(fixtures::kTorus2);
    const auto a = fixtures::ensemble(m, 1, 10);
    const auto b = fixtures::ensemble(m, 2, 10);
    CHECK(a.members.col(0) == b.members.col(0));  // both start with the constant
    CHECK((a.members.col(1) - b.members.col(1)).cwiseAbs().maxCoeff() > 1e-3);
  }

  TEST_CASE("a larger ensemble extends a smaller one with the same seed") {
    const auto& m = fixtures::model(fixtures::kSphere);
    const auto small = fixtures::ensemble(m, 7, 25);
    const auto big = fixtures::ensemble(m, 7, 60);
    CHECK(bit_equal(small.members, big.members.leftCols(25)));
    CHECK(std::equal(small.ids.begin(), small.ids.end(), big.ids.begin()));
  }

  TEST_CASE("mixed ensembles start with the constant and alternate generators") {
    const auto& m = fixtures::model(fixtures::kTorus3);
    const auto e = fixtures::ensemble(m, 3, 6);
    CHECK(e.ids == std::vector<std::string>{"const:0", "band:1", "bump:2", "band:3", "bump:4", "band:5"});
    CHECK((e.member(0).array() == 1.0).all());
    CHECK(to_string(GeneratorKind::Bumps) == "bumps");
    for (const char* name : {"band", "bumps", "eigen", "mixed"}) CHECK(to_string(generator_from_string(name)) == name);
    CHECK_THROWS_AS(generator_from_string("gauss"), DomainError);
  }

  TEST_CASE("unit L2 normalization") {
    const auto& m = fixtures::model(fixtures::kSphere);
    EnsembleSpec spec;
    spec.seed = 5;
    spec.size = 20;
    spec.normalization = Normalization::UnitL2;
    const auto e = generate_ensemble(m, spec);
    for (Eigen::Index k = 0; k < e.size(); ++k) CHECK(lp_norm(m, e.member(k), 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    Ensemble zero = fixtures::single(Vector::Zero(m.num_nodes()));
    CHECK_THROWS_AS(normalized(m, zero), DomainError);
  }

  TEST_CASE("eigen mixtures need a Laplace decomposition and lie in its low span") {
    const auto& m = fixtures::model(fixtures::kTorus2);
    EnsembleSpec spec;
    spec.seed = 8;
    spec.size = 12;
    spec.generator = GeneratorKind::EigenMixture;
    spec.eigen_modes = 5;
    CHECK_THROWS_AS(generate_ensemble(m, spec), DomainError);
    const auto& d = fixtures::spectrum(fixtures::kTorus2, 0.0);
    const auto e = generate_ensemble(m, spec, &d);
    CHECK(e.ids.front() == "eigen:0");
    // coefficients beyond mode 5 vanish
    const Matrix coeffs = d.eigenvectors.transpose() * m.mass.asDiagonal() * e.members;
    CHECK(coeffs.bottomRows(coeffs.rows() - 6).cwiseAbs().maxCoeff() < 1e-10);
    const auto& other = fixtures::spectrum(fixtures::kTorus3, 0.0);
    CHECK_THROWS_AS(generate_ensemble(m, spec, &other), DomainError);
  }

  TEST_CASE("size must be positive and concatenation checks the manifold") {
    const auto& m = fixtures::model(fixtures::kTorus2);
    EnsembleSpec spec;
    spec.size = 0;
    CHECK_THROWS_AS(generate_ensemble(m, spec), DomainError);
    const auto a = fixtures::ensemble(m, 1, 3);
    const auto b = fixtures::ensemble(m, 2, 4);
    const auto c = concatenate(a, b);
    CHECK(c.size() == 7);
    CHECK(c.ids.size() == 7);
    CHECK(c.spec.seed == 1);
    CHECK(bit_equal(c.members.rightCols(4), b.members));
    CHECK_THROWS_AS(concatenate(a, fixtures::ensemble(fixtures::model(fixtures::kTorus3), 1, 2)), DomainError);
  }
}
