#include "gripsim/serialization.hpp"

#include <algorithm>
#include <string>

#include "json.hpp"

#ifndef GRIPSIM_VERSION
#define GRIPSIM_VERSION "0.0.0"
#endif

namespace gripsim {
namespace {

using Json = nlohmann::ordered_json;

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json flags_json(const ProbeFlags& f) {
  return Json{{"saturated", f.saturated},
              {"no_contact", f.no_contact},
              {"out_of_table", f.out_of_table},
              {"degenerate_deformation", f.degenerate_deformation},
              {"damage_risk", f.damage_risk}};
}

Json meta_json(const ReportMeta& m) {
  return Json{{"noise", m.noise ? "on" : "off"},
              {"seed", m.seed},
              {"fixture", m.fixture},
              {"coord", opt(m.coord)},
              {"k_true_n_per_mm", m.k_true_n_per_mm},
              {"version", version()}};
}

Json report_body(const ProbeReport& r) {
  Json trace = Json::array();
  for (const auto& [dc, dp] : r.dp_trace) trace.push_back({dc, dp});
  return Json{{"p0_kpa", r.p0_kpa},
              {"closing_distance_mm", r.closing_distance_mm},
              {"contact_opening", opt(r.contact_opening_mm)},
              {"dp_trace", trace},
              {"est_alpha_deg", opt(r.est_alpha_deg)},
              {"est_force", opt(r.est_force_n)},
              {"k_r", opt(r.k_r)},
              {"k_o_est", opt(r.k_o_est)},
              {"est_delta", opt(r.est_delta_mm)},
              {"flags", flags_json(r.flags)}};
}

const char* unit_for(PlanKind kind) { return kind == PlanKind::kLinear ? "mm" : "deg"; }

std::string status_of(const StiffnessMap& map, double coord) {
  if (coord == map.chosen) return "chosen";
  if (std::find(map.avoided.begin(), map.avoided.end(), coord) != map.avoided.end()) return "avoided";
  return "ok";
}

}  // namespace

const char* version() { return GRIPSIM_VERSION; }

std::string probe_report_json(const ProbeReport& report, const ReportMeta& meta) {
  Json j = report_body(report);
  j["meta"] = meta_json(meta);
  return dump(j);
}

std::string probe_trace_csv(const ProbeReport& report) {
  std::string out = "step,dc_mm,dp_kpa\n";
  for (std::size_t i = 0; i < report.dp_trace.size(); ++i) {
    out += std::to_string(i + 1) + "," + format_double(report.dp_trace[i].first) + "," +
           format_double(report.dp_trace[i].second) + "\n";
  }
  return out;
}

std::string flag_string(const ProbeFlags& f) {
  std::string s;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!s.empty()) s += '|';
    s += name;
  };
  add(f.saturated, "saturated");
  add(f.no_contact, "no_contact");
  add(f.out_of_table, "out_of_table");
  add(f.degenerate_deformation, "degenerate_deformation");
  add(f.damage_risk, "damage_risk");
  return s.empty() ? "none" : s;
}

std::string stiffness_map_json(const StiffnessMap& map, const ReportMeta& meta) {
  Json entries = Json::array();
  for (const auto& e : map.entries) {
    Json body = report_body(e.report);
    entries.push_back(Json{{"coord", e.coord}, {"k_r", opt(e.report.k_r)}, {"flag", flag_string(e.report.flags)},
                           {"report", body}});
  }
  Json j{{"kind", map.kind == PlanKind::kLinear ? "linear" : "angular"},
         {"unit", unit_for(map.kind)},
         {"avoid_fraction", map.avoid_fraction},
         {"chosen", map.chosen},
         {"avoided", map.avoided},
         {"entries", entries}};
  j["meta"] = meta_json(meta);
  return dump(j);
}

std::string stiffness_map_csv(const StiffnessMap& map) {
  std::string out = "coord,k_r_n_per_mm,flag\n";
  for (const auto& e : map.entries) {
    out += format_double(e.coord) + "," + (e.report.k_r ? format_double(*e.report.k_r) : "") + "," +
           flag_string(e.report.flags) + "\n";
  }
  return out;
}

std::string stiffness_map_plot_csv(const StiffnessMap& map) {
  std::string out = "coord,unit,series,value,status\n";
  const std::string unit = unit_for(map.kind);
  for (const auto& e : map.entries) {
    const std::string prefix = format_double(e.coord) + "," + unit + ",";
    const std::string status = status_of(map, e.coord);
    auto row = [&](const char* series, const std::optional<double>& v) {
      if (v) out += prefix + series + "," + format_double(*v) + "," + status + "\n";
    };
    row("k_r_n_per_mm", e.report.k_r);
    row("est_force_n", e.report.est_force_n);
    row("final_dp_kpa", e.report.dp_trace.empty()
                            ? std::nullopt
                            : std::optional<double>(e.report.dp_trace.back().second));
  }
  return out;
}

std::string sensitivity_csv(const std::vector<SensitivityEntry>& entries) {
  std::string out = "rank,p0_kpa,dc_mm,dp_a_kpa,dp_b_kpa,separation_kpa,score,flagged\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    out += std::to_string(i + 1) + "," + format_double(e.p0_kpa) + "," +
           format_double(e.closing_distance_mm) + "," + format_double(e.dp_a_kpa) + "," +
           format_double(e.dp_b_kpa) + "," + format_double(e.separation_kpa) + "," +
           format_double(e.score) + "," + (e.flagged ? "1" : "0") + "\n";
  }
  return out;
}

std::string calibration_summary_json(const CalibrationSummary& s, const CalibrationTable& regulated,
                                     const CalibrationTable& locked) {
  Json fits = Json::array();
  for (const auto& [p0, r2] : s.dp_fit_r2) fits.push_back(Json{{"p0_kpa", p0}, {"r2", r2}});
  Json j{{"regulated_shape", {regulated.num_alpha(), regulated.num_p0()}},
         {"locked_shape", {locked.num_alpha(), locked.num_p0()}},
         {"dead_zone_extent_deg", s.dead_zone_extent_deg},
         {"dp_alpha_fit", fits},
         {"hysteresis",
          {{"p0_kpa", s.hysteresis_p0_kpa},
           {"max_gap_kpa", s.hysteresis_max_gap_kpa},
           {"mean_gap_kpa", s.hysteresis_mean_gap_kpa}}},
         {"plant", locked.meta_value("plant")},
         {"version", version()}};
  return dump(j);
}

std::string hysteresis_csv(const HysteresisTrace& t) {
  std::string out = "alpha_deg,forward_kpa,backward_kpa,forward_torque_nmm,backward_torque_nmm\n";
  for (std::size_t i = 0; i < t.alpha_deg.size(); ++i) {
    out += format_double(t.alpha_deg[i]) + "," + format_double(t.forward_kpa[i]) + "," +
           format_double(t.backward_kpa[i]) + "," + format_double(t.forward_torque_nmm[i]) + "," +
           format_double(t.backward_torque_nmm[i]) + "\n";
  }
  return out;
}

std::string run_meta_json(const RunMeta& m) {
  Json outputs = Json::object();
  for (const auto& [name, hash] : m.outputs) outputs[name] = hash;
  Json j{{"command", m.command},
         {"config_hash", m.config_hash},
         {"seed", m.seed},
         {"noise", m.noise ? "on" : "off"},
         {"version", version()},
         {"outputs", outputs}};
  return dump(j);
}

}  // namespace gripsim
