#include "serialize.hpp"

namespace sobolab::cli {

namespace {

json nums(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(json_number(x));
  return out;
}

}  // namespace

json to_report(const EnsembleSpec& s) {
  return {{"seed", s.seed},
          {"size", s.size},
          {"generator", to_string(s.generator)},
          {"normalization", s.normalization == Normalization::UnitL2 ? "unit-l2" : "none"},
          {"decay", json_number(s.decay)},
          {"max_frequency", s.max_frequency},
          {"eigen_modes", s.eigen_modes}};
}

json to_report(const SobolevEstimate& e) {
  return {{"n", e.n},
          {"p", json_number(e.p)},
          {"p_star", json_number(e.p_star)},
          {"A", json_number(e.a_est)},
          {"B", json_number(e.b_est)},
          {"max_ratio", json_number(e.max_ratio)},
          {"witness", e.witness},
          {"a_witness", e.a_witness},
          {"volume", json_number(e.volume)},
          {"ensemble", to_report(e.ensemble_meta)},
          {"ensemble_size", e.ensemble_size}};
}

json to_report(const InequalityCheck& c) {
  return {{"violations", c.violations},
          {"worst_ratio", json_number(c.worst_ratio)},
          {"witness", c.witness},
          {"witness_lhs", json_number(c.witness_lhs)},
          {"witness_rhs", json_number(c.witness_rhs)},
          {"evaluated", c.evaluated}};
}

json to_report(const StepConstants& s) {
  return {{"from_p", json_number(s.from_p)},
          {"to_p", json_number(s.to_p)},
          {"r", json_number(s.r)},
          {"C1", json_number(s.c1)},
          {"C2", json_number(s.c2)}};
}

json to_report(const BootstrapChain& c) {
  json steps = json::array();
  for (std::size_t k = 0; k < c.steps.size(); ++k) {
    json row = to_report(c.steps[k]);
    row["k"] = k + 1;
    row["p_k"] = json_number(c.steps[k].to_p);
    row["m"] = 1 << (k + 1);
    steps.push_back(row);
  }
  return {{"n", json_number(c.n)},
          {"p0", json_number(c.p0)},
          {"target_p", json_number(c.target_p)},
          {"A", json_number(c.a)},
          {"B", json_number(c.b)},
          {"C1", json_number(c.c1)},
          {"C2", json_number(c.c2)},
          {"k", c.k},
          {"m", c.m_p},
          {"steps", steps}};
}

json to_report(const AlphaScalingRecord& r) {
  return {{"n", json_number(r.n)},
          {"p0", json_number(r.p0)},
          {"target_p", json_number(r.target_p)},
          {"A1", json_number(r.a1)},
          {"B1", json_number(r.b1)},
          {"alpha", json_number(r.alpha)},
          {"m", r.m_p},
          {"factor", json_number(r.factor)},
          {"C1_scaled", json_number(r.c1_scaled)},
          {"C2_scaled", json_number(r.c2_scaled)},
          {"C1_bound", json_number(r.c1_bound)},
          {"C2_bound", json_number(r.c2_bound)},
          {"holds", r.holds}};
}

json to_report(const ContractionReport& r) {
  return {{"violations", r.violations},
          {"worst_ratio", json_number(r.worst_ratio)},
          {"witness", r.witness},
          {"worst_t", json_number(r.worst_t)},
          {"worst_p", json_number(r.worst_p)},
          {"evaluated", r.evaluated}};
}

json to_report(const UltracontractivityFit& f) {
  return {{"times", nums(f.times)},
          {"norms", nums(f.norms)},
          {"slope", json_number(f.slope)},
          {"intercept", json_number(f.intercept)},
          {"mu_hat", json_number(f.mu_hat)},
          {"c_hat", json_number(f.c_hat)},
          {"t_floor", json_number(f.t_floor)}};
}

json to_report(const Theorem31Report& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"t", json_number(row.t)},
                    {"tau", json_number(row.tau)},
                    {"bound_l2", json_number(row.bound_l2)},
                    {"bound_l1", json_number(row.bound_l1)},
                    {"exact_l2", json_number(row.exact_l2)},
                    {"exact_l1", json_number(row.exact_l1)},
                    {"heat1", to_report(row.heat1)},
                    {"heat2", to_report(row.heat2)}});
  }
  return {{"inf_psi_minus", json_number(r.inf_psi_minus)},
          {"violations", r.violations},
          {"operator_violations", r.operator_violations},
          {"rows", rows}};
}

json to_report(const MappingNormScan& s) {
  return {{"operator", s.operator_label},
          {"p_in", json_number(s.p_in)},
          {"p_out", json_number(s.p_out)},
          {"estimate", json_number(s.estimate)},
          {"ensemble_sup", json_number(s.ensemble_sup)},
          {"witness", s.witness},
          {"refine_iterations", s.refine_iterations},
          {"mesh_nodes", s.mesh_nodes},
          {"ensemble", to_report(s.ensemble_meta)},
          {"ensemble_size", s.ensemble_size}};
}

json to_report(const BesselEquivalence& b) {
  return {{"c1_hat", json_number(b.c1_hat)},
          {"c2_hat", json_number(b.c2_hat)},
          {"used", b.used},
          {"excluded", b.excluded}};
}

json to_report(const ScalingTransferReport& s) {
  return {{"lambda", json_number(s.lambda)},
          {"max_lp_defect", json_number(s.max_lp_defect)},
          {"max_grad_defect", json_number(s.max_grad_defect)},
          {"c_bar", json_number(s.c_bar)},
          {"transfer", to_report(s.transfer)}};
}

json to_report(const FlowTrajectory& t) {
  json records = json::array();
  for (const auto& r : t.records) {
    records.push_back({{"t", json_number(r.t)},
                       {"scale", json_number(r.scale)},
                       {"vol", json_number(r.vol)},
                       {"r_max_plus", json_number(r.r_max_plus)},
                       {"kappa", json_number(r.kappa)},
                       {"lambda0", json_number(r.lambda0)},
                       {"phi", json_number(r.phi)},
                       {"gamma", json_number(r.gamma)},
                       {"rhs_factor", json_number(r.rhs_factor)},
                       {"worst_ratio", json_number(r.worst_ratio)},
                       {"violations", r.violations},
                       {"witness", r.witness}});
  }
  json out = {{"flow", t.flow_label},
              {"theorem", to_string(t.selector)},
              {"p", json_number(t.p)},
              {"p0", json_number(t.p0)},
              {"n", t.n},
              {"alpha_ref", json_number(t.alpha_ref)},
              {"C1", json_number(t.c1)},
              {"C2", json_number(t.c2)},
              {"m", t.m_p},
              {"ratio_at_start", json_number(t.ratio_at_start)},
              {"total_violations", t.total_violations},
              {"worst_ratio", json_number(t.worst_ratio)},
              {"records", records}};
  if (t.base_estimate) out["base_estimate"] = to_report(*t.base_estimate);
  return out;
}

}  // namespace sobolab::cli
