#include "nilsoliton/report_json.hpp"

#include "nilsoliton/family_json.hpp"
#include "nilsoliton/tensor_json.hpp"

namespace nilsoliton {

using nlohmann::json;

json rect_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const DistinguishedReport& r) {
  return {{"r", r.r},
          {"residual", r.residual},
          {"sl_p_defect", r.sl_p_defect},
          {"sl_q_defect", r.sl_q_defect},
          {"full_min_defect", r.full_min_defect}};
}

json to_json(const MomentImage& m) { return {{"m1", rect_to_json(m.m1)}, {"m2", rect_to_json(m.m2)}, {"norm", m.norm()}}; }

json to_json(const Certificate& c) {
  json j;
  j["verdict"] = to_string(c.verdict);
  j["conditions"] = json::array();
  for (const auto& cond : c.conditions)
    j["conditions"].push_back(
        {{"name", cond.name}, {"value", cond.value}, {"satisfied", cond.satisfied}, {"detail", cond.detail}});
  j["family"] = c.family ? family_to_json(*c.family) : json(nullptr);
  j["notes"] = c.notes;
  return j;
}

json to_json(const ChainCertificate& c) {
  return {{"source", c.source},
          {"valid", c.valid},
          {"equations", c.equations},
          {"multipliers", vector_to_json(c.multipliers)},
          {"form", vector_to_json(c.form)}};
}

json to_json(const HDetectionReport& r) {
  return {{"passed", r.passed},
          {"exact", r.exact},
          {"max_offblock", r.max_offblock},
          {"max_display_error", r.max_display_error},
          {"first_violation", r.first_violation},
          {"m1", rect_to_json(r.m1)},
          {"m2", rect_to_json(r.m2)}};
}

json to_json(const CoefficientValues& v) {
  return {{"labels", v.labels},
          {"displayed", vector_to_json(v.displayed)},
          {"recomputed", vector_to_json(v.recomputed)},
          {"max_discrepancy", v.max_discrepancy},
          {"display_note", v.display_note}};
}

json to_json(const OrbitInvariant& o) {
  json ids = json::array();
  for (const auto& id : o.identifications)
    ids.push_back({{"description", id.description}, {"t_from", id.t_from}, {"t_to", id.t_to}, {"error", id.error}});
  return {{"h_invariant", o.h_invariant}, {"g_canonical", o.g_canonical}, {"identifications", ids}};
}

json to_json(const FlowResult& r, bool with_tensor) {
  json j = {{"status", to_string(r.status)},
            {"residual", r.residual},
            {"r", r.r},
            {"iterations", r.iterations},
            {"min_rank_sigma", r.min_rank_sigma},
            {"orbit_sigma", r.orbit_sigma},
            {"note", r.note}};
  if (!r.objective_trace.empty()) {
    j["objective_trace"] = r.objective_trace;
    j["residual_trace"] = r.residual_trace;
  }
  if (with_tensor) j["final"] = tensor_to_json(r.final);
  return j;
}

json to_json(const ScanSummary& s) {
  json trials = json::array();
  for (const auto& t : s.results)
    trials.push_back({{"seed", t.seed},
                      {"status", to_string(t.status)},
                      {"residual", t.residual},
                      {"iterations", t.iterations},
                      {"orbit_sigma", t.orbit_sigma}});
  return {{"p", s.p},
          {"q", s.q},
          {"trials", s.trials},
          {"seed", s.seed},
          {"fraction_distinguished", s.fraction_distinguished},
          {"distinguished", s.distinguished},
          {"degenerated", s.degenerated},
          {"max_iterations", s.max_iterations},
          {"bin_edges", s.bin_edges},
          {"histogram", s.histogram},
          {"results", trials}};
}

json to_json(const Decomposition& d) {
  return {{"v1", rect_to_json(d.v1)},
          {"v2", rect_to_json(d.v2)},
          {"z", rect_to_json(d.z)},
          {"w", rect_to_json(d.w)},
          {"reconstruction_error", d.reconstruction_error}};
}

json to_json(const ModuliEntry& e) {
  return {{"p", e.p},       {"q", e.q},           {"dim", e.dim}, {"source", to_string(e.source)},
          {"rule", e.rule}, {"clamped", e.clamped}, {"raw", e.raw}};
}

json to_json(const RegionResult& r) {
  return {{"in_region", r.in_region}, {"bound", r.bound}, {"bound_floored", r.bound_floored}};
}

}  // namespace nilsoliton
