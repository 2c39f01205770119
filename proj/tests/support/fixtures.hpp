#pragma once

#include "sobolab/ensemble.hpp"
#include "sobolab/manifold.hpp"
#include "sobolab/spectral.hpp"

#include <map>
#include <memory>
#include <string>

namespace fixtures {

/// Built once per test binary; the models are immutable.
inline const sobolab::DiscreteManifold& model(const std::string& spec) {
  static std::map<std::string, std::unique_ptr<sobolab::DiscreteManifold>> cache;
  auto& slot = cache[spec];
  if (!slot) slot = std::make_unique<sobolab::DiscreteManifold>(sobolab::build(sobolab::parse_model_spec(spec)));
  return *slot;
}

inline const sobolab::SpectralDecomposition& spectrum(const std::string& spec, double psi) {
  static std::map<std::pair<std::string, double>, std::unique_ptr<sobolab::SpectralDecomposition>> cache;
  auto& slot = cache[{spec, psi}];
  if (!slot) {
    const auto& m = model(spec);
    slot = std::make_unique<sobolab::SpectralDecomposition>(
        sobolab::decompose(m, sobolab::PotentialField::constant(m, psi)));
  }
  return *slot;
}

inline sobolab::Ensemble ensemble(const sobolab::DiscreteManifold& m, std::uint64_t seed, int size,
                                  sobolab::GeneratorKind kind = sobolab::GeneratorKind::Mixed) {
  sobolab::EnsembleSpec spec;
  spec.seed = seed;
  spec.size = size;
  spec.generator = kind;
  return sobolab::generate_ensemble(m, spec);
}

inline sobolab::Ensemble single(const sobolab::Vector& u, const std::string& id = "probe") {
  sobolab::Ensemble e;
  e.members = u;
  e.ids = {id};
  return e;
}

inline constexpr const char* kTorus2 = "torus:n=2,res=16,L=1";
inline constexpr const char* kTorus3 = "torus:n=3,res=8,L=1";
inline constexpr const char* kSphere = "sphere:r=1,subdiv=3";

}  // namespace fixtures
