#include "sobolab/ensemble.hpp"

#include "sobolab/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace sobolab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinBumpRadius = 0.2;
constexpr double kMaxBumpRadius = 0.5;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Scale-free coordinates: tori map to [0,1)^n (periodic), boxes to [0,1]^n,
// spheres to unit vectors. Members therefore depend only on the continuous
// model, not on the mesh or a metric scaling.
Matrix reduced_coordinates(const DiscreteManifold& m) {
  Matrix x = m.positions;
  switch (m.topology) {
    case Topology::Torus:
    case Topology::Box:
      for (Eigen::Index d = 0; d < x.cols(); ++d) x.col(d) /= m.extent[static_cast<std::size_t>(d)];
      break;
    case Topology::Sphere:
      x /= m.extent.front();
      break;
    case Topology::Custom:
      break;
  }
  return x;
}

double reduced_distance(Topology topo, const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  double sq = 0.0;
  for (Eigen::Index d = 0; d < a.size(); ++d) {
    double diff = std::abs(a(d) - b(d));
    if (topo == Topology::Torus) {
      diff = std::fmod(diff, 1.0);
      diff = std::min(diff, 1.0 - diff);
    }
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

class MemberGenerator {
 public:
  MemberGenerator(const DiscreteManifold& m, const EnsembleSpec& spec)
      : m_(m), spec_(spec), coords_(reduced_coordinates(m)) {}

  Vector band_limited(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::uniform_int_distribution<int> freq(-spec_.max_frequency, spec_.max_frequency);
    const Eigen::Index dim = coords_.cols();
    const int features = 12;
    Vector u = Vector::Constant(m_.num_nodes(), 0.5 * normal(rng));
    Eigen::VectorXd k(dim);
    for (int j = 0; j < features; ++j) {
      double k2 = 0.0;
      if (m_.topology == Topology::Sphere || m_.topology == Topology::Custom) {
        for (Eigen::Index d = 0; d < dim; ++d) k(d) = normal(rng);
        const double len = 0.5 + (spec_.max_frequency - 0.5) * uniform(rng);
        k *= len / std::max(k.norm(), 1e-12);
        k2 = len * len;
      } else {
        do {
          for (Eigen::Index d = 0; d < dim; ++d) k(d) = freq(rng);
        } while (k.squaredNorm() == 0.0);
        k2 = k.squaredNorm();
        // Tori use 2*pi*k (periodic); boxes use pi*k (cosine modes are Neumann modes).
        k *= (m_.topology == Topology::Torus) ? kTwoPi : std::numbers::pi;
      }
      const double amp = normal(rng) * std::pow(1.0 + k2, -0.5 * spec_.decay);
      const double phase = (m_.topology == Topology::Box) ? 0.0 : kTwoPi * uniform(rng);
      u.array() += amp * ((coords_ * k).array() + phase).cos();
    }
    return u;
  }

  Vector bumps(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const Eigen::Index dim = coords_.cols();
    const int count = 1 + static_cast<int>(uniform(rng) * 3.0);
    Vector u = Vector::Zero(m_.num_nodes());
    if (uniform(rng) < 0.3) u.setConstant(uniform(rng));
    Eigen::RowVectorXd center(dim);
    for (int b = 0; b < count; ++b) {
      if (m_.topology == Topology::Sphere) {
        for (Eigen::Index d = 0; d < dim; ++d) center(d) = normal(rng);
        center.normalize();
      } else {
        for (Eigen::Index d = 0; d < dim; ++d) center(d) = uniform(rng);
      }
      const double radius = kMinBumpRadius + (kMaxBumpRadius - kMinBumpRadius) * uniform(rng);
      const double sign = uniform(rng) < 0.3 ? -1.0 : 1.0;
      const double amp = sign * (0.5 + uniform(rng));
      const bool compact = uniform(rng) < 0.5;
      for (Eigen::Index i = 0; i < m_.num_nodes(); ++i) {
        const double r = reduced_distance(m_.topology, coords_.row(i), center) / radius;
        if (compact) {
          if (r < 1.0) u(i) += amp * std::pow(1.0 - r * r, 2);
        } else {
          u(i) += amp * std::exp(-2.0 * r * r);
        }
      }
    }
    return u;
  }

  Vector eigen_mixture(std::mt19937_64& rng, const SpectralDecomposition& laplace) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    const Eigen::Index modes = std::min<Eigen::Index>(spec_.eigen_modes + 1, laplace.size());
    Vector coeffs(modes);
    for (Eigen::Index k = 0; k < modes; ++k) {
      coeffs(k) = normal(rng) * std::pow(1.0 + laplace.eigenvalues(k), -0.25 * spec_.decay);
    }
    return laplace.eigenvectors.leftCols(modes) * coeffs;
  }

 private:
  const DiscreteManifold& m_;
  const EnsembleSpec& spec_;
  Matrix coords_;
};

}  // namespace

Ensemble generate_ensemble(const DiscreteManifold& m, const EnsembleSpec& spec,
                           const SpectralDecomposition* laplace) {
  if (spec.size <= 0) throw DomainError("ensemble size must be positive");
  if (spec.generator == GeneratorKind::EigenMixture) {
    if (laplace == nullptr) throw DomainError("eigenfunction mixtures need a Laplace decomposition");
    if (laplace->size() != m.num_nodes()) throw DomainError("Laplace decomposition does not match manifold");
  }
  Ensemble e;
  e.spec = spec;
  e.members.resize(m.num_nodes(), spec.size);
  e.ids.reserve(static_cast<std::size_t>(spec.size));
  const MemberGenerator gen(m, spec);

  for (int k = 0; k < spec.size; ++k) {
    std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(static_cast<std::uint64_t>(k) + 1)));
    Vector u;
    std::string id;
    switch (spec.generator) {
      case GeneratorKind::BandLimited:
        u = gen.band_limited(rng);
        id = "band:" + std::to_string(k);
        break;
      case GeneratorKind::Bumps:
        u = gen.bumps(rng);
        id = "bump:" + std::to_string(k);
        break;
      case GeneratorKind::EigenMixture:
        u = gen.eigen_mixture(rng, *laplace);
        id = "eigen:" + std::to_string(k);
        break;
      case GeneratorKind::Mixed:
        if (k == 0) {
          u = Vector::Ones(m.num_nodes());
          id = "const:0";
        } else if (k % 2 == 1) {
          u = gen.band_limited(rng);
          id = "band:" + std::to_string(k);
        } else {
          u = gen.bumps(rng);
          id = "bump:" + std::to_string(k);
        }
        break;
    }
    if (u.cwiseAbs().maxCoeff() == 0.0) u.setOnes();
    e.members.col(k) = u;
    e.ids.push_back(std::move(id));
  }
  if (spec.normalization == Normalization::UnitL2) e = normalized(m, std::move(e));
  return e;
}

Ensemble normalized(const DiscreteManifold& m, Ensemble e) {
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const double norm = std::sqrt(e.members.col(k).cwiseAbs2().dot(m.mass));
    if (!(norm > 0.0)) throw DomainError("cannot normalize a zero ensemble member (" + e.ids[k] + ")");
    e.members.col(k) /= norm;
  }
  e.spec.normalization = Normalization::UnitL2;
  return e;
}

Ensemble concatenate(Ensemble a, const Ensemble& extra) {
  if (a.members.rows() != extra.members.rows()) throw DomainError("ensembles live on different manifolds");
  Matrix joined(a.members.rows(), a.size() + extra.size());
  joined << a.members, extra.members;
  a.members = std::move(joined);
  a.ids.insert(a.ids.end(), extra.ids.begin(), extra.ids.end());
  return a;
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::BandLimited: return "band";
    case GeneratorKind::Bumps: return "bumps";
    case GeneratorKind::EigenMixture: return "eigen";
    case GeneratorKind::Mixed: return "mixed";
  }
  return "mixed";
}

GeneratorKind generator_from_string(const std::string& name) {
  if (name == "band") return GeneratorKind::BandLimited;
  if (name == "bumps") return GeneratorKind::Bumps;
  if (name == "eigen") return GeneratorKind::EigenMixture;
  if (name == "mixed") return GeneratorKind::Mixed;
  throw DomainError("unknown ensemble generator '" + name + "' (band, bumps, eigen, mixed)");
}

}  // namespace sobolab
