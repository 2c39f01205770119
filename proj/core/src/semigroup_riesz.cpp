#include "sobolab/semigroup_riesz.hpp"

#include "sobolab/errors.hpp"
#include "sobolab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

namespace sobolab {

namespace {

double ratio_of(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? kInfinity : 0.0;
}

// Duality map |x|^{q-1} sign(x) scaled to unit dual norm is unnecessary for the
// power iteration; only the direction matters.
Vector duality_scalar(const Vector& y, double q) {
  Vector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double a = std::abs(y(i));
    out(i) = a > 0.0 ? std::copysign(std::pow(a, q - 1.0), y(i)) : 0.0;
  }
  return out;
}

class OperatorAction {
 public:
  OperatorAction(const DiscreteManifold& m, const SpectralDecomposition& dec, const MappingOperator& op)
      : m_(m), dec_(dec), op_(op), multiplier_(evaluate_multiplier(dec, power_function(op.power), op.label())) {}

  // Node function H^s u (before any gradient).
  [[nodiscard]] Matrix smooth(const Matrix& u) const { return apply_multiplier(dec_, multiplier_, u); }

  [[nodiscard]] double output_norm(const Vector& hu, double q) const {
    return op_.gradient ? grad_lp_norm(m_, hu, q) : lp_norm(m_, hu, q);
  }

  // x -> T* J_q(T x), the ascent direction of ||T x||_q.
  [[nodiscard]] Vector dual_step(const Vector& x, double q) const {
    const Vector hx = smooth(Matrix(x)).col(0);
    if (!op_.gradient) return smooth(Matrix(duality_scalar(hx, q))).col(0);
    const int c = m_.gradient.components;
    Vector field = m_.gradient.matrix * hx;
    for (Eigen::Index e = 0; e < m_.gradient.num_elements(); ++e) {
      auto seg = field.segment(e * c, c);
      const double norm = seg.norm();
      const double w = m_.gradient.weights(e) * (norm > 0.0 ? std::pow(norm, q - 2.0) : 0.0);
      seg *= w;
    }
    const Vector div = m_.mass.cwiseInverse().cwiseProduct(m_.gradient.matrix.transpose() * field);
    return smooth(Matrix(div)).col(0);
  }

 private:
  const DiscreteManifold& m_;
  const SpectralDecomposition& dec_;
  MappingOperator op_;
  Vector multiplier_;
};

}  // namespace

ContractionReport heat_contraction_check(const DiscreteManifold& m, const SpectralDecomposition& dec,
                                         const std::vector<double>& t_list,
                                         const std::vector<double>& p_list, const Ensemble& e) {
  if ((dec.potential.array() < 0.0).any()) {
    throw DomainError("heat_contraction_check: Psi must be nonnegative (shift the operator first)");
  }
  ContractionReport rep;
  for (double t : t_list) {
    if (!(t > 0.0)) throw DomainError("heat_contraction_check: times must be positive");
    const Matrix heat = apply_function(dec, heat_function(t), e.members);
    for (double p : p_list) {
      for (Eigen::Index k = 0; k < e.size(); ++k) {
        const double before = lp_norm(m, e.members.col(k), p);
        const double after = lp_norm(m, heat.col(k), p);
        const double ratio = ratio_of(after, before);
        ++rep.evaluated;
        if (after > before * (1.0 + kContractionSlack)) ++rep.violations;
        if (ratio > rep.worst_ratio) {
          rep.worst_ratio = ratio;
          rep.witness = e.ids[static_cast<std::size_t>(k)];
          rep.worst_t = t;
          rep.worst_p = p;
        }
      }
    }
  }
  return rep;
}

UltracontractivityFit ultracontractivity_fit(const SpectralDecomposition& dec, double t_lo, double t_hi,
                                             int samples) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw DomainError("ultracontractivity_fit: need 0 < t_lo < t_hi");
  if (samples < 2) throw DomainError("ultracontractivity_fit: need at least two samples");
  UltracontractivityFit fit;
  fit.t_floor = 4.0 / dec.lambda_max();
  if (t_lo < fit.t_floor) {
    std::ostringstream msg;
    msg << "ultracontractivity_fit: window starts at t=" << t_lo << ", below the spectral floor 4/lambda_max="
        << fit.t_floor << " of " << dec.manifold_label;
    throw GuardError(msg.str());
  }
  Eigen::VectorXd x(samples);
  Eigen::VectorXd y(samples);
  for (int k = 0; k < samples; ++k) {
    const double t = std::exp(std::log(t_lo) + (std::log(t_hi) - std::log(t_lo)) * k / (samples - 1));
    const double norm = op_norm_2_to_inf(dec, heat_function(t));
    fit.times.push_back(t);
    fit.norms.push_back(norm);
    x(k) = std::log(t);
    y(k) = std::log(norm);
  }
  Eigen::MatrixXd design(samples, 2);
  design.col(0) = x;
  design.col(1).setOnes();
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(y);
  fit.slope = coef(0);
  fit.intercept = coef(1);
  fit.mu_hat = -4.0 * fit.slope;
  fit.c_hat = std::exp(fit.intercept);
  return fit;
}

Theorem31Report check_theorem_31(const DiscreteManifold& m, const SpectralDecomposition& dec,
                                 const std::function<double(double)>& tau,
                                 const std::vector<double>& t_list, const Ensemble& e,
                                 std::optional<double> sigma_star) {
  Theorem31Report rep;
  rep.inf_psi_minus = std::min(0.0, dec.potential.minCoeff());
  InequalityContext ctx;
  ctx.manifold = &m;
  ctx.operator_h = &dec;
  for (double t : t_list) {
    if (!(t > 0.0)) throw DomainError("check_theorem_31: times must be positive");
    if (sigma_star && !(t < 0.25 * *sigma_star)) {
      throw DomainError("check_theorem_31: t must stay below sigma*/4");
    }
    Theorem31Row row;
    row.t = t;
    row.tau = tau(t);
    const double tau_half = tau(0.5 * t);
    if (!std::isfinite(row.tau) || !std::isfinite(tau_half)) {
      throw DomainError("check_theorem_31: tau is not finite at t=" + std::to_string(t));
    }
    const double correction = -0.75 * t * rep.inf_psi_minus;
    row.bound_l2 = std::exp(row.tau + correction);
    row.bound_l1 = std::exp(2.0 * tau_half + correction);
    row.exact_l2 = op_norm_2_to_inf(dec, heat_function(t));
    row.exact_l1 = op_norm_1_to_inf(dec, heat_function(t));

    InequalitySpec spec;
    spec.kind = InequalityKind::Heat1;
    spec.t = t;
    spec.c1 = row.bound_l2;
    row.heat1 = verify_inequality(ctx, spec, e);
    spec.kind = InequalityKind::Heat2;
    spec.c1 = row.bound_l1;
    row.heat2 = verify_inequality(ctx, spec, e);

    rep.violations += row.heat1.violations + row.heat2.violations;
    if (row.exact_l2 > row.bound_l2 * (1.0 + kViolationSlack)) ++rep.operator_violations;
    if (row.exact_l1 > row.bound_l1 * (1.0 + kViolationSlack)) ++rep.operator_violations;
    rep.rows.push_back(row);
  }
  return rep;
}

std::string MappingOperator::label() const {
  std::ostringstream s;
  if (gradient) s << "grad ";
  if (power == 0.0 && !gradient) return "identity";
  s << "H^{" << power << "}";
  return s.str();
}

MappingOperator parse_operator(const std::string& label) {
  if (label == "identity" || label == "I") return {0.0, false};
  static const std::regex pattern(R"(^\s*(grad\s+)?H\^\{?\s*([-+]?[0-9.]+)\s*(?:/\s*([0-9]+))?\s*\}?\s*$)");
  std::smatch match;
  if (!std::regex_match(label, match, pattern)) {
    throw DomainError("unknown operator '" + label + "' (expected e.g. H^{-1/2}, H^{-1}, grad H^{-1/2})");
  }
  double power = std::stod(match[2].str());
  if (match[3].matched) power /= std::stod(match[3].str());
  return {power, match[1].matched};
}

double advertised_output_exponent(double mu, double p, int order) {
  if (order != 1 && order != 2) throw DomainError("advertised_output_exponent: order must be 1 or 2");
  if (!(p > 1.0)) throw DomainError("advertised_output_exponent: need p > 1");
  const double denom = mu - order * p;
  if (!(denom > 0.0)) {
    throw DomainError("advertised_output_exponent: mu p/(mu - " + std::to_string(order) +
                      " p) is undefined for these exponents");
  }
  return mu * p / denom;
}

MappingNormScan mapping_norm(const DiscreteManifold& m, const SpectralDecomposition& dec,
                             const MappingOperator& op, double p_in, double p_out, const Ensemble& e,
                             int refine_iterations) {
  if (!(p_in >= 1.0) || !(p_out >= 1.0)) throw DomainError("mapping_norm: exponents must be >= 1");
  if (e.size() == 0) throw DomainError("mapping_norm: empty ensemble");
  const OperatorAction action(m, dec, op);
  const Matrix out = action.smooth(e.members);

  MappingNormScan scan;
  scan.operator_label = op.label();
  scan.p_in = p_in;
  scan.p_out = p_out;
  scan.mesh_nodes = m.num_nodes();
  scan.ensemble_meta = e.spec;
  scan.ensemble_size = e.size();
  Vector ratios(e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    ratios(k) = ratio_of(action.output_norm(out.col(k), p_out), lp_norm(m, e.members.col(k), p_in));
  }
  // Two best members, ties to the lower index. Constants are often fixed
  // points of the iteration, so the runner-up gives it somewhere to go.
  Eigen::Index first = 0;
  for (Eigen::Index k = 1; k < e.size(); ++k) {
    if (ratios(k) > ratios(first)) first = k;
  }
  Eigen::Index second = -1;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    if (k != first && (second < 0 || ratios(k) > ratios(second))) second = k;
  }
  scan.ensemble_sup = ratios(first);
  scan.estimate = scan.ensemble_sup;
  scan.witness = e.ids[static_cast<std::size_t>(first)];

  const bool can_refine = p_in > 1.0 && std::isfinite(p_in) && std::isfinite(p_out);
  if (!can_refine || refine_iterations <= 0) return scan;
  const double p_dual = p_in / (p_in - 1.0);
  for (Eigen::Index start : {first, second}) {
    if (start < 0) continue;
    Vector x = e.members.col(start);
    for (int it = 0; it < refine_iterations; ++it) {
      const Vector z = action.dual_step(x, p_out);
      if (!(z.cwiseAbs().maxCoeff() > 0.0)) break;
      x = duality_scalar(z, p_dual);
      x /= x.cwiseAbs().maxCoeff();
      const Vector hx = action.smooth(Matrix(x)).col(0);
      const double r = ratio_of(action.output_norm(hx, p_out), lp_norm(m, x, p_in));
      if (r > scan.estimate) {
        scan.estimate = r;
        scan.witness = e.ids[static_cast<std::size_t>(start)] + "+refine" + std::to_string(it + 1);
      }
      ++scan.refine_iterations;
    }
  }
  return scan;
}

MappingNormScan riesz_ratio(const DiscreteManifold& m, const SpectralDecomposition& dec, double p,
                            const Ensemble& e, int refine_iterations) {
  return mapping_norm(m, dec, {-0.5, true}, p, p, e, refine_iterations);
}

double bakry_constant(const DiscreteManifold& m, const SpectralDecomposition& bessel, double a, double q,
                      const Ensemble& e, std::string* witness) {
  require_bessel_decomposition(bessel);
  if (!(a >= 0.0)) throw DomainError("bakry_constant: a must be nonnegative");
  const Matrix half = apply_function(bessel, power_function(0.5), e.members);
  double best = 0.0;
  Eigen::Index arg = 0;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const Vector v = e.members.col(k);
    const double r = ratio_of(grad_lp_norm(m, v, q), lp_norm(m, half.col(k), q) + a * lp_norm(m, v, q));
    if (r > best) {
      best = r;
      arg = k;
    }
  }
  if (witness != nullptr) *witness = e.ids[static_cast<std::size_t>(arg)];
  return best;
}

BesselEquivalence bessel_equivalence_constants(const DiscreteManifold& m,
                                               const SpectralDecomposition& laplace, double a, double p,
                                               const Ensemble& e) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("bessel_equivalence_constants: need 1 < p < inf");
  if (!(a >= 0.0)) throw DomainError("bessel_equivalence_constants: a must be nonnegative");
  if ((laplace.potential.array() != 0.0).any()) {
    throw DomainError("bessel_equivalence_constants: needs the decomposition of -Delta (Psi = 0)");
  }
  const double a2 = a * a;
  const Matrix middle = apply_function(laplace, [a2](double x) { return std::sqrt(x + a2); }, e.members);
  const Matrix root = apply_function(laplace, power_function(0.5), e.members);
  BesselEquivalence out;
  out.c1_hat = kInfinity;
  out.c2_hat = 0.0;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const Vector u = e.members.col(k);
    const double scale = lp_norm(m, u, p);
    const double outer = a * scale + lp_norm(m, root.col(k), p);
    if (!(outer > 1e-12 * scale)) {
      ++out.excluded;
      continue;
    }
    const double r = lp_norm(m, middle.col(k), p) / outer;
    out.c1_hat = std::min(out.c1_hat, r);
    out.c2_hat = std::max(out.c2_hat, r);
    ++out.used;
  }
  if (out.used == 0) throw DomainError("bessel_equivalence_constants: every member has a vanishing outer norm");
  return out;
}

ScalingTransferReport scaling_transfer_check(const DiscreteManifold& m, double lambda, double mu, double p,
                                             const SpectralDecomposition& bessel, const Ensemble& e,
                                             const std::vector<double>& q_list) {
  if (!(lambda >= 1.0)) throw DomainError("scaling_transfer_check: lambda must be >= 1");
  require_bessel_decomposition(bessel);
  const DiscreteManifold scaled = scale_metric(m, lambda);
  ScalingTransferReport rep;
  rep.lambda = lambda;
  const double n = m.dim;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const Vector u = e.members.col(k);
    for (double q : q_list) {
      const double base = lp_norm(m, u, q);
      if (base > 0.0) {
        const double expect = std::pow(lambda, n / q) * base;
        rep.max_lp_defect = std::max(rep.max_lp_defect, std::abs(lp_norm(scaled, u, q) / expect - 1.0));
      }
      const double gbase = grad_lp_norm(m, u, q);
      if (gbase > 1e-12 * base) {
        const double expect = std::pow(lambda, n / q - 1.0) * gbase;
        rep.max_grad_defect =
            std::max(rep.max_grad_defect, std::abs(grad_lp_norm(scaled, u, q) / expect - 1.0));
      }
    }
  }

  const SpectralDecomposition bessel_bar = decompose(scaled, PotentialField::constant(scaled, 1.0));
  InequalitySpec spec;
  spec.kind = InequalityKind::Bessel;
  spec.p = p;
  spec.mu = mu;
  InequalityContext bar_ctx;
  bar_ctx.manifold = &scaled;
  bar_ctx.bessel = &bessel_bar;
  rep.c_bar = minimal_constant(bar_ctx, spec, e);

  InequalityContext ctx;
  ctx.manifold = &m;
  ctx.bessel = &bessel;
  spec.c1 = lambda * rep.c_bar;
  rep.transfer = verify_inequality(ctx, spec, e);
  return rep;
}

LiRegimeReport li_regime_check(const DiscreteManifold& m, double c, double eps, double p, const Ensemble& e) {
  if (!(p > 1.0) || !(p < 2.0)) throw DomainError("li_regime_check: need 1 < p < 2");
  if (!(eps > 0.0)) throw DomainError("li_regime_check: eps must be positive");
  LiRegimeReport rep;
  rep.gamma = gamma_integral(m, c, eps);
  InequalityContext ctx;
  ctx.manifold = &m;
  InequalitySpec spec;
  spec.kind = InequalityKind::Riesz;
  spec.p = p;
  spec.shift = rep.gamma;
  rep.c_hat = minimal_constant(ctx, spec, e, &rep.witness);
  return rep;
}

}  // namespace sobolab
