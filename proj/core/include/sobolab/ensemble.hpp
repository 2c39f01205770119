#pragma once

#include "sobolab/manifold.hpp"
#include "sobolab/spectral.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sobolab {

enum class GeneratorKind {
  BandLimited,   // random Fourier features with spectral decay
  Bumps,         // superpositions of compact bumps and Gaussians
  EigenMixture,  // random combinations of low Laplace eigenfunctions
  Mixed,         // constant + band-limited + bumps (no decomposition needed)
};

enum class Normalization { None, UnitL2 };

struct EnsembleSpec {
  std::uint64_t seed = 0;
  int size = 200;
  GeneratorKind generator = GeneratorKind::Mixed;
  Normalization normalization = Normalization::None;
  double decay = 2.0;       // amplitude ~ (1 + |k|^2)^{-decay/2}
  int max_frequency = 4;    // lattice frequency bound for band-limited fields
  int eigen_modes = 16;     // modes available to EigenMixture
};

/// Test functions stored column-wise. Regeneration from (spec, manifold) is bit-identical.
struct Ensemble {
  EnsembleSpec spec;
  Matrix members;
  std::vector<std::string> ids;

  [[nodiscard]] Eigen::Index size() const { return members.cols(); }
  [[nodiscard]] Vector member(Eigen::Index k) const { return members.col(k); }
};

/// `laplace` (decomposition of -Delta) is required only for EigenMixture.
Ensemble generate_ensemble(const DiscreteManifold& m, const EnsembleSpec& spec,
                           const SpectralDecomposition* laplace = nullptr);

/// Rescales every member to unit mass L^2 norm (zero members are rejected).
Ensemble normalized(const DiscreteManifold& m, Ensemble e);

/// Appends the members of `extra`, keeping spec of the first.
Ensemble concatenate(Ensemble a, const Ensemble& extra);

std::string to_string(GeneratorKind kind);
GeneratorKind generator_from_string(const std::string& name);

}  // namespace sobolab
