#include "commands.hpp"

#include "serialize.hpp"
#include "svg.hpp"

#include "sobolab/errors.hpp"
#include "sobolab/manifold.hpp"
#include "sobolab/norms.hpp"
#include "sobolab/spectral.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace sobolab::cli {

namespace {

using PT = ParamType;

constexpr double kScalingDefectTolerance = 1e-10;
constexpr double kEnergyTolerance = 1e-8;

std::vector<Param> ensemble_params() {
  return {
      {"seed", PT::Seed, nullptr, "ensemble seed (mandatory)", true},
      {"size", PT::Integer, 200, "ensemble size"},
      {"generator", PT::Text, "mixed", "band | bumps | eigen | mixed"},
      {"decay", PT::Number, 2.0, "spectral decay of band-limited members"},
      {"max-freq", PT::Integer, 4, "frequency bound of band-limited members"},
      {"eigen-modes", PT::Integer, 16, "modes used by the eigen generator"},
      {"normalize", PT::Flag, nullptr, "rescale members to unit L2 norm"},
  };
}

EnsembleSpec ensemble_spec(const json& cfg) {
  EnsembleSpec s;
  s.seed = cfg.at("seed").get<std::uint64_t>();
  s.size = static_cast<int>(integer(cfg, "size"));
  s.generator = generator_from_string(text(cfg, "generator"));
  s.decay = number(cfg, "decay");
  s.max_frequency = static_cast<int>(integer(cfg, "max-freq"));
  s.eigen_modes = static_cast<int>(integer(cfg, "eigen-modes"));
  s.normalization = flag(cfg, "normalize") ? Normalization::UnitL2 : Normalization::None;
  return s;
}

// Model, decompositions and ensemble of one command, built on demand.
class Workspace {
 public:
  explicit Workspace(const json& cfg) : cfg_(cfg), manifold_(build(parse_model_spec(text(cfg, "model")))) {}

  [[nodiscard]] const DiscreteManifold& manifold() const { return manifold_; }

  const SpectralDecomposition& decomposition(double psi) {
    for (const auto& [value, dec] : cache_) {
      if (value == psi) return *dec;
    }
    cache_.emplace_back(psi, std::make_unique<SpectralDecomposition>(
                                 decompose(manifold_, PotentialField::constant(manifold_, psi))));
    return *cache_.back().second;
  }

  const Ensemble& ensemble() {
    if (!ensemble_) {
      const EnsembleSpec spec = ensemble_spec(cfg_);
      const SpectralDecomposition* laplace =
          spec.generator == GeneratorKind::EigenMixture ? &decomposition(0.0) : nullptr;
      ensemble_ = std::make_unique<Ensemble>(generate_ensemble(manifold_, spec, laplace));
      if (spec.normalization == Normalization::UnitL2) *ensemble_ = normalized(manifold_, *ensemble_);
    }
    return *ensemble_;
  }

  [[nodiscard]] json model_summary() const {
    return {{"label", manifold_.label},
            {"dim", manifold_.dim},
            {"nodes", manifold_.num_nodes()},
            {"volume", json_number(manifold_.volume())}};
  }

 private:
  const json& cfg_;
  DiscreteManifold manifold_;
  std::vector<std::pair<double, std::unique_ptr<SpectralDecomposition>>> cache_;
  std::unique_ptr<Ensemble> ensemble_;
};

std::string csv_number(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- ladder

CommandOutput cmd_ladder(json& cfg, const RunContext&) {
  const double n = number(cfg, "n");
  const double p0 = number(cfg, "p0");
  const double a = number(cfg, "a");
  const double b = number(cfg, "b");
  PLadder ladder;
  std::optional<BootstrapChain> chain;
  if (has(cfg, "target")) {
    const double target = number(cfg, "target");
    ladder = build_ladder(n, p0, target);
    chain = chain_constants(n, p0, a, b, target);
  } else {
    if (!has(cfg, "steps")) cfg["steps"] = 8;
    ladder = iterate_ladder(n, p0, static_cast<int>(integer(cfg, "steps")));
  }

  CommandOutput out;
  json rows = json::array();
  std::ostringstream csv;
  csv << "k,p_k,r,C1,C2,m\n";
  for (std::size_t k = 0; k < ladder.values.size(); ++k) {
    const double pk = ladder.values[k];
    double c1 = a;
    double c2 = b;
    double r = 1.0;
    if (k > 0) {
      // from the log gap, which stays finite after p_k rounds to n
      r = pk * (n - p0) / p0 * std::exp(-ladder.log_gaps[k]);
      if (pk > p0 && pk < n) {
        const BootstrapChain c = chain_constants(n, p0, a, b, pk);
        c1 = c.c1;
        c2 = c.c2;
      } else {
        c1 = c2 = std::nan("");
      }
    }
    const long long m = 1LL << std::min<std::size_t>(k, 62);
    rows.push_back({{"k", k}, {"p_k", json_number(pk)}, {"r", json_number(r)}, {"C1", json_number(c1)},
                    {"C2", json_number(c2)}, {"m", m}});
    csv << k << ',' << csv_number(pk) << ',' << csv_number(r) << ',' << csv_number(c1) << ',' << csv_number(c2)
        << ',' << m << '\n';
  }
  out.result = {{"n", json_number(n)},
                {"p0", json_number(p0)},
                {"strictly_increasing", ladder.strictly_increasing()},
                {"last_gap", json_number(std::exp(ladder.log_gaps.back()))},
                {"table", rows}};
  for (std::size_t k = 1; k < ladder.values.size() && k <= 2; ++k) {
    out.result["p" + std::to_string(k)] = json_number(ladder.values[k]);
  }
  if (chain) {
    out.result["target"] = json_number(chain->target_p);
    out.result["k"] = chain->k;
    out.result["m"] = chain->m_p;
    out.result["C1"] = json_number(chain->c1);
    out.result["C2"] = json_number(chain->c2);
  }
  out.artifacts.push_back({"ladder", "csv", csv.str()});
  return out;
}

// ---------------------------------------------------------------- bootstrap

CommandOutput cmd_bootstrap(json& cfg, const RunContext&) {
  const double n = number(cfg, "n");
  const double p0 = number(cfg, "p0");
  const double target = number(cfg, "target");
  const double a = number(cfg, "a");
  const double b = number(cfg, "b");
  const BootstrapChain chain = chain_constants(n, p0, a, b, target);
  CommandOutput out;
  out.result = to_report(chain);
  const ExtendedChainConstants ext = chain_constants_extended(n, p0, a, b, target);
  out.result["extended"] = {{"C1", json_number(static_cast<double>(ext.c1))},
                            {"C2", json_number(static_cast<double>(ext.c2))}};

  std::ostringstream csv;
  csv << "k,p_k,r,C1,C2,m\n";
  csv << 0 << ',' << csv_number(p0) << ",1," << csv_number(a) << ',' << csv_number(b) << ",1\n";
  for (std::size_t k = 0; k < chain.steps.size(); ++k) {
    const auto& s = chain.steps[k];
    csv << k + 1 << ',' << csv_number(s.to_p) << ',' << csv_number(s.r) << ',' << csv_number(s.c1) << ','
        << csv_number(s.c2) << ',' << (1 << (k + 1)) << '\n';
  }
  out.artifacts.push_back({"chain", "csv", csv.str()});

  if (has(cfg, "alpha")) {
    json records = json::array();
    for (double alpha : numbers(cfg, "alpha")) {
      const AlphaScalingRecord r = alpha_scaling_bound(n, p0, target, a, b, alpha);
      if (!r.holds) ++out.violations;
      records.push_back(to_report(r));
    }
    out.result["alpha_scaling"] = records;
  }
  return out;
}

// ---------------------------------------------------------------- estimate

CommandOutput cmd_estimate(json& cfg, const RunContext&) {
  Workspace ws(cfg);
  const DiscreteManifold& m = ws.manifold();
  const Ensemble& e = ws.ensemble();
  const double p = number(cfg, "p");
  const std::vector<double> grid = has(cfg, "b-grid") ? numbers(cfg, "b-grid") : default_b_grid();
  const SobolevEstimate est = estimate_sobolev_AB(m, p, e, grid);

  CommandOutput out;
  out.result = {{"model", ws.model_summary()}, {"estimate", to_report(est)}};
  const SobolevTerms terms = sobolev_terms(m, p, e);
  std::ostringstream csv;
  csv << "member,lhs,gradient,lower,ratio\n";
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const double rhs = est.a_est * terms.gradient(k) + est.b_est * terms.lower(k);
    csv << e.ids[static_cast<std::size_t>(k)] << ',' << csv_number(terms.lhs(k)) << ','
        << csv_number(terms.gradient(k)) << ',' << csv_number(terms.lower(k)) << ','
        << csv_number(rhs > 0.0 ? terms.lhs(k) / rhs : 0.0) << '\n';
  }
  out.artifacts.push_back({"members", "csv", csv.str()});
  return out;
}

// ---------------------------------------------------------------- verify

CommandOutput cmd_verify(json& cfg, const RunContext&) {
  Workspace ws(cfg);
  const DiscreteManifold& m = ws.manifold();
  const Ensemble& e = ws.ensemble();
  InequalitySpec spec;
  spec.kind = inequality_from_string(text(cfg, "inequality"));
  spec.p = number(cfg, "p");
  spec.mu = maybe_number(cfg, "mu");
  spec.c1 = number(cfg, "c1");
  spec.c2 = number(cfg, "c2");
  spec.factor = number(cfg, "factor");
  spec.shift = number(cfg, "shift");
  if (has(cfg, "t")) spec.t = number(cfg, "t");
  const double psi = number(cfg, "psi");

  CommandOutput out;
  out.result["model"] = ws.model_summary();
  if (has(cfg, "p0")) {
    if (spec.kind != InequalityKind::Sobolev) throw DomainError("--p0 chains base constants of the sobolev kind only");
    const double p0 = number(cfg, "p0");
    const SobolevEstimate base = estimate_sobolev_AB(m, p0, e);
    const BootstrapChain chain = chain_constants(m.dim, p0, base.a_est, base.b_est, spec.p);
    spec.c1 = chain.c1;
    spec.c2 = chain.c2;
    out.result["base_estimate"] = to_report(base);
    out.result["chain"] = to_report(chain);
  }

  InequalityContext ctx;
  ctx.manifold = &m;
  Vector psi_field;
  switch (spec.kind) {
    case InequalityKind::Bessel:
      ctx.bessel = &ws.decomposition(1.0);
      break;
    case InequalityKind::NonlocalH:
    case InequalityKind::Heat1:
    case InequalityKind::Heat2:
      ctx.operator_h = &ws.decomposition(psi);
      break;
    case InequalityKind::W2p:
      psi_field = Vector::Constant(m.num_nodes(), psi);
      ctx.psi = &psi_field;
      break;
    default:
      break;
  }
  const InequalityCheck check = verify_inequality(ctx, spec, e);
  out.violations = check.violations;
  out.result["inequality"] = to_string(spec.kind);
  out.result["constants"] = {{"C1", json_number(spec.c1)},
                             {"C2", json_number(spec.c2)},
                             {"factor", json_number(spec.factor)}};
  out.result["check"] = to_report(check);
  if (spec.kind != InequalityKind::Sobolev) {
    std::string witness;
    const double c = minimal_constant(ctx, spec, e, &witness);
    out.result["minimal_constant"] = {{"value", json_number(c)}, {"witness", witness}};
  }
  return out;
}

// ---------------------------------------------------------------- heat

CommandOutput cmd_heat(json& cfg, const RunContext&) {
  Workspace ws(cfg);
  const DiscreteManifold& m = ws.manifold();
  const double psi = number(cfg, "psi");
  const SpectralDecomposition& dec = ws.decomposition(psi);
  const Ensemble& e = ws.ensemble();
  CommandOutput out;
  out.result["model"] = ws.model_summary();

  const ContractionReport contraction =
      heat_contraction_check(m, dec, numbers(cfg, "times"), numbers(cfg, "p-list"), e);
  out.violations += contraction.violations;
  out.result["contraction"] = to_report(contraction);

  std::vector<double> window = numbers(cfg, "fit-window");
  if (window.empty()) {
    const double lo = std::max(1e-3, 4.0 / dec.lambda_max());
    window = {lo, 10.0 * lo};
  }
  if (window.size() != 2) throw DomainError("--fit-window expects two times lo,hi");
  const UltracontractivityFit fit =
      ultracontractivity_fit(dec, window[0], window[1], static_cast<int>(integer(cfg, "fit-samples")));
  out.result["fit"] = to_report(fit);
  std::ostringstream csv;
  csv << "t,norm,fitted\n";
  std::vector<double> fitted;
  for (std::size_t k = 0; k < fit.times.size(); ++k) {
    fitted.push_back(fit.c_hat * std::pow(fit.times[k], fit.slope));
    csv << csv_number(fit.times[k]) << ',' << csv_number(fit.norms[k]) << ',' << csv_number(fitted.back()) << '\n';
  }
  out.artifacts.push_back({"fit", "csv", csv.str()});
  std::ostringstream title;
  title.precision(4);
  title << "||exp(-tH)||_{2->inf}, slope " << fit.slope;
  out.artifacts.push_back({"fit", "svg",
                           svg_plot(title.str(), "t", "norm",
                                    {{"measured", fit.times, fit.norms, true}, {"fit", fit.times, fitted, false}},
                                    true, true)});

  if (flag(cfg, "heat-bounds")) {
    if (psi != 1.0) throw DomainError("--heat-bounds derives the log-Sobolev profile for Psi = 1 only");
    const double mu = maybe_number(cfg, "mu").value_or(m.dim);
    const SobolevEstimate base = estimate_sobolev_AB(m, 2.0, e);
    const double a = bessel_form_constant(base.a_est, base.b_est, m.volume(), m.dim);
    auto tau = [&](double t) { return tau_closed_form(a, mu, t); };
    auto beta = [&](double s) { return beta_from_sobolev(a, mu, s); };
    const std::vector<double> times = numbers(cfg, "bound-times");
    double quad_gap = 0.0;
    for (double t : times) quad_gap = std::max(quad_gap, std::abs(tau_quadrature(beta, t) - tau(t)));
    const Theorem31Report rep = check_theorem_31(m, dec, tau, times, e);
    out.violations += rep.violations + rep.operator_violations;
    out.result["heat_bounds"] = to_report(rep);
    out.result["heat_bounds"]["sobolev_estimate"] = to_report(base);
    out.result["heat_bounds"]["bessel_form_A"] = json_number(a);
    out.result["heat_bounds"]["mu"] = json_number(mu);
    out.result["heat_bounds"]["tau_quadrature_gap"] = json_number(quad_gap);
  }
  return out;
}

// ---------------------------------------------------------------- riesz

int mapping_order(const MappingOperator& op) {
  if (op.power == -0.5) return 1;
  if (op.power == -1.0) return 2;
  throw DomainError("--p-out is required for operators other than H^{-1/2} and H^{-1}");
}

CommandOutput cmd_riesz(json& cfg, const RunContext&) {
  Workspace ws(cfg);
  const DiscreteManifold& m = ws.manifold();
  const double psi = number(cfg, "psi");
  const SpectralDecomposition& dec = ws.decomposition(psi);
  const Ensemble& e = ws.ensemble();
  const int refine = static_cast<int>(integer(cfg, "refine"));
  CommandOutput out;
  out.result["model"] = ws.model_summary();

  json riesz = json::array();
  for (double p : numbers(cfg, "p")) {
    const MappingNormScan scan = riesz_ratio(m, dec, p, e, refine);
    // Energy identity: ||grad H^{-1/2} u||_2 <= ||u||_2 when Psi >= 0.
    if (p == 2.0 && psi >= 0.0 && scan.estimate > 1.0 + kEnergyTolerance) ++out.violations;
    riesz.push_back(to_report(scan));
  }
  out.result["riesz"] = riesz;

  if (has(cfg, "operator")) {
    const MappingOperator op = parse_operator(text(cfg, "operator"));
    const double p_in = number(cfg, "p-in");
    double p_out = 0.0;
    if (has(cfg, "p-out")) {
      p_out = number(cfg, "p-out");
    } else {
      p_out = advertised_output_exponent(maybe_number(cfg, "mu").value_or(m.dim), p_in, mapping_order(op));
      cfg["p-out"] = json_number(p_out);
    }
    out.result["mapping"] = to_report(mapping_norm(m, dec, op, p_in, p_out, e, refine));
  }

  if (has(cfg, "equivalence-a")) {
    const double a = number(cfg, "equivalence-a");
    json eq = json::array();
    for (double p : numbers(cfg, "p")) {
      json row = to_report(bessel_equivalence_constants(m, ws.decomposition(0.0), a, p, e));
      row["p"] = json_number(p);
      row["a"] = json_number(a);
      eq.push_back(row);
    }
    out.result["bessel_equivalence"] = eq;
  }
  return out;
}

// ---------------------------------------------------------------- w2p

CommandOutput cmd_w2p(json& cfg, const RunContext&) {
  Workspace ws(cfg);
  const DiscreteManifold& m = ws.manifold();
  const Ensemble& e = ws.ensemble();
  const Vector psi = Vector::Constant(m.num_nodes(), number(cfg, "psi"));
  InequalityContext ctx;
  ctx.manifold = &m;
  ctx.psi = &psi;
  InequalitySpec spec;
  spec.kind = InequalityKind::W2p;
  spec.p = number(cfg, "p");
  spec.mu = maybe_number(cfg, "mu");
  CommandOutput out;
  out.result["model"] = ws.model_summary();
  out.result["q"] = json_number(spec.mu.value_or(m.dim) * spec.p / (spec.mu.value_or(m.dim) - 2.0 * spec.p));
  std::string witness;
  const double c = minimal_constant(ctx, spec, e, &witness);
  out.result["minimal_constant"] = {{"value", json_number(c)}, {"witness", witness}};
  if (has(cfg, "c1")) {
    spec.c1 = number(cfg, "c1");
    const InequalityCheck check = verify_inequality(ctx, spec, e);
    out.violations = check.violations;
    out.result["check"] = to_report(check);
  }
  return out;
}

// ---------------------------------------------------------------- scaling

CommandOutput cmd_scaling(json& cfg, const RunContext&) {
  Workspace ws(cfg);
  const DiscreteManifold& m = ws.manifold();
  const SpectralDecomposition& bessel = ws.decomposition(1.0);
  const Ensemble& e = ws.ensemble();
  const double mu = maybe_number(cfg, "mu").value_or(m.dim);
  const double p = number(cfg, "p");
  CommandOutput out;
  out.result["model"] = ws.model_summary();
  json rows = json::array();
  for (double lambda : numbers(cfg, "lambda")) {
    const ScalingTransferReport rep = scaling_transfer_check(m, lambda, mu, p, bessel, e);
    out.violations += rep.transfer.violations;
    if (rep.max_lp_defect > kScalingDefectTolerance || rep.max_grad_defect > kScalingDefectTolerance) {
      ++out.violations;
    }
    rows.push_back(to_report(rep));
  }
  out.result["scaling"] = rows;
  return out;
}

// ---------------------------------------------------------------- flow

CommandOutput cmd_flow(json& cfg, const RunContext&) {
  const ExactFlow flow = parse_flow(text(cfg, "flow"));
  const int n = std::holds_alternative<StaticTorus>(flow.variant) ? std::get<StaticTorus>(flow.variant).n : 2;
  if (!has(cfg, "p0")) cfg["p0"] = n >= 3 ? 2.0 : 1.2;
  TrackOptions opt;
  opt.selector = selector_from_string(text(cfg, "theorem"));
  opt.p = number(cfg, "p");
  opt.p0 = number(cfg, "p0");
  opt.eps = number(cfg, "eps");
  opt.ensemble = ensemble_spec(cfg);
  if (opt.ensemble.generator == GeneratorKind::EigenMixture) {
    throw DomainError("flow: the eigen generator is not available along a flow");
  }
  const std::vector<double> times = numbers(cfg, "times");
  const FlowTrajectory traj = track(flow, times, opt);

  CommandOutput out;
  out.violations = traj.total_violations;
  out.result = to_report(traj);
  out.result["lambda0_series"] = json::array();
  for (const auto& r : traj.records) out.result["lambda0_series"].push_back(json_number(r.lambda0));
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  out.artifacts.push_back({"trajectory", "csv", csv.str()});
  std::vector<double> ts;
  std::vector<double> ratios;
  for (const auto& r : traj.records) {
    ts.push_back(r.t);
    ratios.push_back(r.worst_ratio);
  }
  out.artifacts.push_back({"trajectory", "svg",
                           svg_plot("worst LHS/RHS ratio, " + to_string(traj.selector), "t", "ratio",
                                    {{"worst ratio", ts, ratios, false}, {"", ts, ratios, true}}, false, false)});
  return out;
}

// ---------------------------------------------------------------- report

CommandOutput cmd_report(json&, const RunContext& ctx) {
  CommandOutput out;
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(ctx.out_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(ctx.out_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  json index = json::array();
  std::ostringstream csv;
  csv << "file,command,config_hash,seed,violations\n";
  int total = 0;
  for (const auto& path : files) {
    std::ifstream in(path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("command") || !doc.contains("config_hash")) continue;
    if (doc.at("command") == "report") continue;
    const int v = doc.value("violations", 0);
    total += v;
    const std::string seed = doc.at("seed").is_null() ? "" : doc.at("seed").dump();
    index.push_back({{"file", path.filename().string()},
                     {"command", doc.at("command")},
                     {"config_hash", doc.at("config_hash")},
                     {"seed", doc.at("seed")},
                     {"violations", v}});
    csv << path.filename().string() << ',' << doc.at("command").get<std::string>() << ','
        << doc.at("config_hash").get<std::string>() << ',' << seed << ',' << v << '\n';
  }
  out.result = {{"reports", index}, {"total_violations", total}};
  out.artifacts.push_back({"index", "csv", csv.str()});
  return out;
}

std::vector<Param> with(std::vector<Param> a, const std::vector<Param>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

const std::vector<CommandDef>& commands() {
  static const std::vector<CommandDef> defs = [] {
    const Param model{"model", PT::Text, nullptr, "model spec, e.g. torus:n=2,res=32,L=1", true};
    const Param psi{"psi", PT::Number, 1.0, "constant potential Psi of H = -Delta + Psi"};
    const Param mu{"mu", PT::Number, nullptr, "dimension parameter (default: manifold dimension)"};
    std::vector<CommandDef> d;
    d.push_back({"ladder", "exponent ladder p_k with cumulative constants",
                 {{"n", PT::Number, nullptr, "dimension", true},
                  {"p0", PT::Number, nullptr, "base exponent", true},
                  {"target", PT::Number, nullptr, "stop once the ladder passes this exponent"},
                  {"steps", PT::Integer, nullptr, "iterations when no target is given (default 8)"},
                  {"a", PT::Number, 1.0, "base constant A"},
                  {"b", PT::Number, 1.0, "base constant B"}},
                 false, cmd_ladder});
    d.push_back({"bootstrap", "chain constants from p0 to a target exponent",
                 {{"n", PT::Number, nullptr, "dimension", true},
                  {"p0", PT::Number, nullptr, "base exponent", true},
                  {"target", PT::Number, nullptr, "target exponent", true},
                  {"a", PT::Number, 1.0, "base constant A"},
                  {"b", PT::Number, 1.0, "base constant B"},
                  {"alpha", PT::NumberList, nullptr, "check the alpha-scaling bound for these factors"}},
                 false, cmd_bootstrap});
    d.push_back({"estimate", "estimate Sobolev constants (A, B) on an ensemble",
                 with({model, {"p", PT::Number, nullptr, "exponent", true},
                       {"b-grid", PT::NumberList, nullptr, "candidate B values"}},
                      ensemble_params()),
                 true, cmd_estimate});
    d.push_back({"verify", "check one inequality member-wise",
                 with({model, {"inequality", PT::Text, "sobolev", "sobolev | literal-a2 | bessel | nonlocal-h | riesz | w2p | heat1 | heat2"},
                       {"p", PT::Number, nullptr, "exponent", true}, mu,
                       {"p0", PT::Number, nullptr, "estimate base constants at p0 and chain them to p"},
                       {"c1", PT::Number, 1.0, "constant C1"}, {"c2", PT::Number, 0.0, "constant C2"},
                       {"factor", PT::Number, 1.0, "extra factor on the right side"},
                       {"shift", PT::Number, 0.0, "lower-order shift (riesz kind)"},
                       {"t", PT::Number, nullptr, "time (heat kinds)"}, psi},
                      ensemble_params()),
                 true, cmd_verify});
    d.push_back({"heat", "heat semigroup contraction, ultracontractivity fit and heat bounds",
                 with({model, psi, mu, {"times", PT::NumberList, "0.01,0.1,1", "contraction times"},
                       {"p-list", PT::NumberList, "1,2,inf", "contraction exponents"},
                       {"fit-window", PT::NumberList, nullptr, "fit window lo,hi"},
                       {"fit-samples", PT::Integer, 16, "fit samples"},
                       {"heat-bounds", PT::Flag, nullptr, "check both heat bounds from a measured p=2 constant"},
                       {"bound-times", PT::NumberList, "0.05,0.1,0.5", "times for the heat bounds"}},
                      ensemble_params()),
                 true, cmd_heat});
    d.push_back({"riesz", "Riesz ratios, mapping norms and Bessel equivalence",
                 with({model, psi, mu, {"p", PT::NumberList, "2", "Riesz exponents"},
                       {"operator", PT::Text, nullptr, "mapping operator, e.g. H^{-1/2}"},
                       {"p-in", PT::Number, 1.5, "mapping input exponent"},
                       {"p-out", PT::Number, nullptr, "mapping output exponent (default: advertised)"},
                       {"refine", PT::Integer, 5, "power iterations"},
                       {"equivalence-a", PT::Number, nullptr, "also measure Bessel equivalence with this a"}},
                      ensemble_params()),
                 true, cmd_riesz});
    d.push_back({"w2p", "second-order inequality constant",
                 with({model, psi, mu, {"p", PT::Number, nullptr, "exponent", true},
                       {"c1", PT::Number, nullptr, "verify with this constant"}},
                      ensemble_params()),
                 true, cmd_w2p});
    d.push_back({"scaling", "metric scaling identities and constant transfer",
                 with({model, mu, {"p", PT::Number, 1.5, "exponent"},
                       {"lambda", PT::NumberList, "1,2,10", "scale factors"}},
                      ensemble_params()),
                 true, cmd_scaling});
    d.push_back({"flow", "track an inequality along an exact Ricci flow",
                 with({{"flow", PT::Text, "sphere:r0=1", "flow spec"},
                       {"times", PT::NumberList, "0:0.4:0.05", "sample times"},
                       {"theorem", PT::Text, "a2", "a2 | a3 | b2 | b3 | d2 | d3 | e2 | e3"},
                       {"p", PT::Number, 1.5, "exponent"},
                       {"p0", PT::Number, nullptr, "base exponent (default 1.2 for n=2, 2 otherwise)"},
                       {"eps", PT::Number, 1.0, "integrability margin (e selectors)"}},
                      ensemble_params()),
                 true, cmd_flow});
    d.push_back({"report", "index the reports in the output directory", {}, false, cmd_report});
    return d;
  }();
  return defs;
}

}  // namespace sobolab::cli
