#include "sobolab/flow.hpp"

#include "sobolab/bootstrap.hpp"
#include "sobolab/errors.hpp"
#include "sobolab/inequality.hpp"
#include "sobolab/spectral.hpp"

#include "format.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace sobolab {

namespace {

std::map<std::string, std::string> split_keys(const std::string& body) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw DomainError("flow spec: expected key=value, got '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

double number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw DomainError("flow spec: '" + key + "' expects a number, got '" + value + "'");
  }
  return v;
}

std::vector<double> lengths(const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, 'x')) out.push_back(number("L", item));
  return out;
}

struct Selector {
  char family;
  bool needs_lambda0;
};

Selector describe(TheoremSelector s) {
  switch (s) {
    case TheoremSelector::A2: return {'A', true};
    case TheoremSelector::A3: return {'A', false};
    case TheoremSelector::B2: return {'B', true};
    case TheoremSelector::B3: return {'B', false};
    case TheoremSelector::D2: return {'D', true};
    case TheoremSelector::D3: return {'D', false};
    case TheoremSelector::E2: return {'E', true};
    case TheoremSelector::E3: return {'E', false};
  }
  return {'A', true};
}

// Time-dependent base factor of the bootstrap selectors. "2":
// 1 + max R^+ vol^{2/n}; "3": 1 + (max R^+ + 1) vol^{2/n}.
double alpha_of(const GeometricSummary& g, int n, bool two) {
  const double v = std::pow(g.vol, 2.0 / n);
  return two ? 1.0 + g.r_max_plus * v : 1.0 + (g.r_max_plus + 1.0) * v;
}

}  // namespace

ModelSpec ExactFlow::base_mesh() const {
  ModelSpec spec;
  if (const auto* s = std::get_if<ShrinkingSphere2>(&variant)) {
    spec.variant = RoundSphere2{s->r0, s->subdivision_level};
  } else {
    const auto& t = std::get<StaticTorus>(variant);
    spec.variant = FlatTorus{t.n, t.side_lengths, t.resolution};
  }
  return spec;
}

double ExactFlow::singular_time() const {
  if (const auto* s = std::get_if<ShrinkingSphere2>(&variant)) return 0.5 * s->r0 * s->r0;
  return std::numeric_limits<double>::infinity();
}

double ExactFlow::scale_at(double t) const {
  if (!(t >= 0.0) || t > t_max) {
    std::ostringstream msg;
    msg << "flow time t=" << t << " is outside [0, " << t_max << "]";
    throw DomainError(msg.str());
  }
  if (const auto* s = std::get_if<ShrinkingSphere2>(&variant)) return std::sqrt(1.0 - 2.0 * t / (s->r0 * s->r0));
  return 1.0;
}

std::string ExactFlow::label() const {
  using detail::shortest;
  std::ostringstream s;
  if (const auto* sp = std::get_if<ShrinkingSphere2>(&variant)) {
    s << "sphere:r0=" << shortest(sp->r0) << ",subdiv=" << sp->subdivision_level;
  } else {
    const auto& t = std::get<StaticTorus>(variant);
    s << "torus:n=" << t.n << ",res=" << t.resolution << ",L=";
    for (std::size_t i = 0; i < t.side_lengths.size(); ++i) s << (i ? "x" : "") << shortest(t.side_lengths[i]);
  }
  s << ",tmax=" << shortest(t_max);
  return s.str();
}

ExactFlow parse_flow(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  auto kv = split_keys(colon == std::string::npos ? "" : text.substr(colon + 1));
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  ExactFlow flow;
  std::optional<double> horizon;
  if (auto v = take("tmax")) horizon = number("tmax", *v);
  if (auto v = take("T")) horizon = number("T", *v);
  if (kind == "sphere") {
    ShrinkingSphere2 s;
    if (auto v = take("r0")) s.r0 = number("r0", *v);
    if (auto v = take("subdiv")) s.subdivision_level = static_cast<int>(number("subdiv", *v));
    if (!(s.r0 > 0.0)) throw DomainError("flow spec: r0 must be positive");
    flow.variant = s;
  } else if (kind == "torus") {
    StaticTorus t;
    if (auto v = take("n")) t.n = static_cast<int>(number("n", *v));
    if (auto v = take("res")) t.resolution = static_cast<int>(number("res", *v));
    if (auto v = take("L")) t.side_lengths = lengths(*v);
    flow.variant = t;
  } else {
    throw DomainError("unknown flow '" + kind + "' (expected sphere or torus)");
  }
  if (!kv.empty()) throw DomainError("flow spec: unknown key '" + kv.begin()->first + "'");
  const double singular = flow.singular_time();
  flow.t_max = horizon.value_or(std::isfinite(singular) ? 0.9 * singular : 1.0);
  if (!(flow.t_max > 0.0) || !(flow.t_max < singular)) {
    throw DomainError("flow spec: horizon must lie strictly inside the smooth interval");
  }
  return flow;
}

DiscreteManifold metric_at(const ExactFlow& flow, const DiscreteManifold& base, double t) {
  const double s = flow.scale_at(t);
  DiscreteManifold m = scale_metric(base, s);
  if (s != 1.0) {
    std::ostringstream label;
    label << flow.label() << "@t=" << detail::shortest(t);
    m.label = label.str();
  }
  return m;
}

DiscreteManifold metric_at(const ExactFlow& flow, double t) { return metric_at(flow, build(flow.base_mesh()), t); }

std::string to_string(TheoremSelector s) {
  switch (s) {
    case TheoremSelector::A2: return "a2";
    case TheoremSelector::A3: return "a3";
    case TheoremSelector::B2: return "b2";
    case TheoremSelector::B3: return "b3";
    case TheoremSelector::D2: return "d2";
    case TheoremSelector::D3: return "d3";
    case TheoremSelector::E2: return "e2";
    case TheoremSelector::E3: return "e3";
  }
  return "a2";
}

TheoremSelector selector_from_string(const std::string& name) {
  for (auto s : {TheoremSelector::A2, TheoremSelector::A3, TheoremSelector::B2, TheoremSelector::B3,
                 TheoremSelector::D2, TheoremSelector::D3, TheoremSelector::E2, TheoremSelector::E3}) {
    if (to_string(s) == name) return s;
  }
  throw DomainError("unknown theorem selector '" + name + "' (a2, a3, b2, b3, d2, d3, e2, e3)");
}

bool requires_positive_lambda0(TheoremSelector s) { return describe(s).needs_lambda0; }

FlowTrajectory track(const ExactFlow& flow, const std::vector<double>& times, const TrackOptions& options) {
  if (times.empty()) throw DomainError("track: no sample times");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw DomainError("track: times must be strictly increasing");
  }
  const Selector sel = describe(options.selector);
  const DiscreteManifold base = build(flow.base_mesh());
  const int n = base.dim;
  const double p = options.p;
  if (!(p > 1.0) || !(p < n)) throw DomainError("track: need 1 < p < n");
  if (sel.family == 'A' && (!(options.p0 >= 1.0) || !(options.p0 < p))) {
    throw DomainError("track: bootstrap selectors need 1 <= p0 < p");
  }
  if (sel.family == 'E' && !(p < 2.0)) throw DomainError("track: E selectors need 1 < p < 2");

  const double lambda0_start = lambda0(base);
  if (sel.needs_lambda0 && !(lambda0_start > 1e-12)) {
    std::ostringstream msg;
    msg << "selector " << to_string(options.selector) << " assumes lambda0(g0) > 0, but lambda0 = "
        << lambda0_start << " on " << base.label << "; use the finite-horizon selector instead";
    throw HypothesisError(msg.str());
  }

  FlowTrajectory traj;
  traj.flow_label = flow.label();
  traj.selector = options.selector;
  traj.p = p;
  traj.p0 = options.p0;
  traj.n = n;

  const Ensemble ensemble = generate_ensemble(base, options.ensemble);
  const GeometricSummary g0 = geometric_summary(base);
  const bool two = sel.needs_lambda0;
  const double r_min0 = base.scalar_curvature.minCoeff();
  const double e_shift = -std::min(0.0, r_min0) / n;

  // Constants from g(0) only.
  if (sel.family == 'A') {
    traj.base_estimate = estimate_sobolev_AB(base, options.p0, ensemble, options.b_grid);
    if (!(traj.base_estimate->a_est > 0.0)) throw DomainError("track: base estimate has A = 0");
    const GeometricSummary g_end = geometric_summary(metric_at(flow, base, flow.t_max));
    traj.alpha_ref = std::min(alpha_of(g0, n, two), alpha_of(g_end, n, two));
    const BootstrapChain chain =
        chain_constants(n, options.p0, traj.base_estimate->a_est / traj.alpha_ref,
                        traj.base_estimate->b_est / traj.alpha_ref, p);
    traj.c1 = chain.c1;
    traj.c2 = chain.c2;
    traj.m_p = chain.m_p;
  } else {
    InequalitySpec spec;
    spec.p = p;
    InequalityContext ctx;
    ctx.manifold = &base;
    SpectralDecomposition bessel;
    if (sel.family == 'B') {
      bessel = decompose(base, PotentialField::constant(base, 1.0));
      ctx.bessel = &bessel;
      spec.kind = InequalityKind::Bessel;
    } else {
      spec.kind = InequalityKind::Riesz;
      spec.shift = sel.family == 'D' ? g0.kappa : gamma_integral(base, e_shift, options.eps);
    }
    traj.ratio_at_start = minimal_constant(ctx, spec, ensemble);
    // Along a homothetic shrinking g(t) = s^2 g(0), s <= 1, every ratio grows
    // by at most 1/s while (1 + max R^+)^{1/2} = (1 + R0/s^2)^{1/2}; the
    // constant below covers all s down to the horizon (or to 0 for "2").
    const double s_min = two ? 0.0 : flow.scale_at(flow.t_max);
    const double denom = std::sqrt(s_min * s_min + g0.r_max_plus);
    if (!(denom > 0.0)) throw HypothesisError("track: calibration needs max R^+ > 0 at t = 0");
    traj.c1 = flow.scale_at(flow.t_max) == 1.0 ? traj.ratio_at_start / std::sqrt(1.0 + g0.r_max_plus)
                                               : traj.ratio_at_start / denom;
  }

  for (double t : times) {
    const DiscreteManifold m = metric_at(flow, base, t);
    const GeometricSummary g = geometric_summary(m);
    FlowRecord rec;
    rec.t = t;
    rec.scale = m.scale;
    rec.vol = g.vol;
    rec.r_max_plus = g.r_max_plus;
    rec.kappa = g.kappa;
    rec.lambda0 = lambda0(m);
    rec.phi = (g.r_max_plus + 1.0) * std::pow(g.vol, 2.0 / n);

    InequalityContext ctx;
    ctx.manifold = &m;
    InequalitySpec spec;
    spec.p = p;
    SpectralDecomposition bessel;
    switch (sel.family) {
      case 'A':
        spec.kind = InequalityKind::Sobolev;
        spec.c1 = traj.c1;
        spec.c2 = traj.c2;
        rec.rhs_factor = std::pow(alpha_of(g, n, two), traj.m_p * p / options.p0);
        break;
      case 'B':
        bessel = decompose(m, PotentialField::constant(m, 1.0));
        ctx.bessel = &bessel;
        spec.kind = InequalityKind::Bessel;
        spec.c1 = traj.c1;
        rec.rhs_factor = std::sqrt(1.0 + g.r_max_plus);
        break;
      default:
        spec.kind = InequalityKind::Riesz;
        spec.c1 = traj.c1;
        if (sel.family == 'E') rec.gamma = gamma_integral(m, e_shift, options.eps);
        spec.shift = sel.family == 'D' ? g.kappa : rec.gamma;
        rec.rhs_factor = std::sqrt(1.0 + g.r_max_plus);
        break;
    }
    spec.factor = rec.rhs_factor;
    const InequalityCheck check = verify_inequality(ctx, spec, ensemble);
    rec.worst_ratio = check.worst_ratio;
    rec.violations = check.violations;
    rec.witness = check.witness;
    traj.total_violations += check.violations;
    traj.worst_ratio = std::max(traj.worst_ratio, check.worst_ratio);
    traj.records.push_back(rec);
  }
  return traj;
}

std::vector<double> lambda0_monotonicity_probe(const ExactFlow& flow, const std::vector<double>& times) {
  const DiscreteManifold base = build(flow.base_mesh());
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(lambda0(metric_at(flow, base, t)));
  return out;
}

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj) {
  out << "t,scale,vol,r_max_plus,kappa,lambda0,phi,gamma,rhs_factor,worst_ratio,violations,witness\n";
  out.precision(17);
  for (const FlowRecord& r : traj.records) {
    out << r.t << ',' << r.scale << ',' << r.vol << ',' << r.r_max_plus << ',' << r.kappa << ',' << r.lambda0
        << ',' << r.phi << ',' << r.gamma << ',' << r.rhs_factor << ',' << r.worst_ratio << ',' << r.violations
        << ',' << r.witness << '\n';
  }
}

}  // namespace sobolab
