#include "sobolab/inequality.hpp"

#include "sobolab/errors.hpp"
#include "sobolab/norms.hpp"

#include <cmath>
#include <map>

namespace sobolab {

namespace {

const std::map<std::string, InequalityKind>& kind_names() {
  static const std::map<std::string, InequalityKind> names{
      {"sobolev", InequalityKind::Sobolev}, {"literal-a2", InequalityKind::LiteralA2},
      {"bessel", InequalityKind::Bessel},   {"nonlocal-h", InequalityKind::NonlocalH},
      {"riesz", InequalityKind::Riesz},     {"w2p", InequalityKind::W2p},
      {"heat1", InequalityKind::Heat1},     {"heat2", InequalityKind::Heat2},
  };
  return names;
}

const SpectralDecomposition& need(const SpectralDecomposition* dec, const char* what,
                                  const DiscreteManifold& m) {
  if (dec == nullptr) throw DomainError(std::string("inequality needs ") + what);
  if (dec->size() != m.num_nodes()) throw DomainError(std::string(what) + " does not match the manifold");
  return *dec;
}

double critical_exponent(double mu, double p, double order) {
  const double denom = mu - order * p;
  if (!(denom > 0.0)) throw DomainError("inequality: exponent relation undefined (mu <= order * p)");
  return mu * p / denom;
}

}  // namespace

std::string to_string(InequalityKind kind) {
  for (const auto& [name, k] : kind_names()) {
    if (k == kind) return name;
  }
  return "sobolev";
}

InequalityKind inequality_from_string(const std::string& name) {
  const auto it = kind_names().find(name);
  if (it == kind_names().end()) throw DomainError("unknown inequality kind '" + name + "'");
  return it->second;
}

MemberValues evaluate_inequality(const InequalityContext& ctx, const InequalitySpec& spec,
                                 const Ensemble& e) {
  if (ctx.manifold == nullptr) throw DomainError("inequality context has no manifold");
  const DiscreteManifold& m = *ctx.manifold;
  if (e.members.rows() != m.num_nodes()) throw DomainError("ensemble does not live on this manifold");
  if (!std::isfinite(spec.c1) || !std::isfinite(spec.c2) || !std::isfinite(spec.factor)) {
    throw DomainError("inequality constants must be finite");
  }
  const double n = m.dim;
  const double mu = spec.mu.value_or(n);
  const double p = spec.p;
  const Eigen::Index count = e.size();
  MemberValues v{Vector(count), Vector(count)};

  switch (spec.kind) {
    case InequalityKind::Sobolev:
    case InequalityKind::LiteralA2: {
      const double q = critical_exponent(n, p, 1.0);
      const double vol_factor = std::pow(m.volume(), -p / n);
      for (Eigen::Index k = 0; k < count; ++k) {
        const Vector u = e.members.col(k);
        v.lhs(k) = std::pow(lp_norm(m, u, q), p);
        const double g = grad_lp_integral(m, u, p);
        const double l = lp_integral(m, u, p);
        v.rhs(k) = spec.kind == InequalityKind::Sobolev
                       ? spec.factor * (spec.c1 * g + spec.c2 * vol_factor * l)
                       : spec.factor * spec.c1 * (g + l);
      }
      break;
    }
    case InequalityKind::Bessel:
    case InequalityKind::NonlocalH: {
      const double q = critical_exponent(mu, p, 1.0);
      const SpectralDecomposition& dec =
          spec.kind == InequalityKind::Bessel ? need(ctx.bessel, "the -Delta + 1 decomposition", m)
                                              : need(ctx.operator_h, "the H decomposition", m);
      if (spec.kind == InequalityKind::Bessel) require_bessel_decomposition(dec);
      const Matrix half = apply_function(dec, power_function(0.5), e.members);
      for (Eigen::Index k = 0; k < count; ++k) {
        v.lhs(k) = lp_norm(m, e.members.col(k), q);
        v.rhs(k) = spec.factor * spec.c1 * lp_norm(m, half.col(k), p);
      }
      break;
    }
    case InequalityKind::Riesz: {
      const double q = critical_exponent(mu, p, 1.0);
      for (Eigen::Index k = 0; k < count; ++k) {
        const Vector u = e.members.col(k);
        v.lhs(k) = lp_norm(m, u, q);
        v.rhs(k) = spec.factor * spec.c1 * (grad_lp_norm(m, u, p) + (1.0 + spec.shift) * lp_norm(m, u, p));
      }
      break;
    }
    case InequalityKind::W2p: {
      const double q = critical_exponent(mu, p, 2.0);
      Matrix hu;
      if (ctx.psi != nullptr) {
        if (ctx.psi->size() != m.num_nodes()) throw DomainError("potential does not match the manifold");
        hu = m.mass.cwiseInverse().asDiagonal() * (m.stiffness * e.members);
        hu += ctx.psi->asDiagonal() * e.members;
      } else {
        hu = apply_function(need(ctx.operator_h, "Psi or the H decomposition", m), power_function(1.0),
                            e.members);
      }
      for (Eigen::Index k = 0; k < count; ++k) {
        v.lhs(k) = lp_norm(m, e.members.col(k), q);
        v.rhs(k) = spec.factor * spec.c1 * lp_norm(m, hu.col(k), p);
      }
      break;
    }
    case InequalityKind::Heat1:
    case InequalityKind::Heat2: {
      if (!(spec.t > 0.0)) throw DomainError("heat inequality needs t > 0");
      const SpectralDecomposition& dec = need(ctx.operator_h, "the H decomposition", m);
      const Matrix heat = apply_function(dec, heat_function(spec.t), e.members);
      const double in_p = spec.kind == InequalityKind::Heat1 ? 2.0 : 1.0;
      for (Eigen::Index k = 0; k < count; ++k) {
        v.lhs(k) = heat.col(k).cwiseAbs().maxCoeff();
        v.rhs(k) = spec.factor * spec.c1 * lp_norm(m, e.members.col(k), in_p);
      }
      break;
    }
  }
  return v;
}

InequalityCheck summarize(const MemberValues& values, const Ensemble& e) {
  InequalityCheck out;
  out.evaluated = values.lhs.size();
  Eigen::Index worst = -1;
  for (Eigen::Index k = 0; k < values.lhs.size(); ++k) {
    const double lhs = values.lhs(k);
    const double rhs = values.rhs(k);
    double ratio = 0.0;
    if (rhs > 0.0) {
      ratio = lhs / rhs;
    } else if (lhs > 0.0) {
      ratio = kInfinity;
    }
    if (lhs > rhs * (1.0 + kViolationSlack)) ++out.violations;
    if (worst < 0 || ratio > out.worst_ratio) {
      out.worst_ratio = ratio;
      worst = k;
    }
  }
  if (worst >= 0) {
    out.witness = e.ids[static_cast<std::size_t>(worst)];
    out.witness_lhs = values.lhs(worst);
    out.witness_rhs = values.rhs(worst);
  }
  return out;
}

InequalityCheck verify_inequality(const InequalityContext& ctx, const InequalitySpec& spec,
                                  const Ensemble& e) {
  return summarize(evaluate_inequality(ctx, spec, e), e);
}

double minimal_constant(const InequalityContext& ctx, InequalitySpec spec, const Ensemble& e,
                        std::string* witness) {
  spec.c1 = 1.0;
  spec.c2 = 0.0;
  spec.factor = 1.0;
  const InequalityCheck check = verify_inequality(ctx, spec, e);
  if (witness != nullptr) *witness = check.witness;
  return check.worst_ratio;
}

}  // namespace sobolab
