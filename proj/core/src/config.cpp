#include "gripsim/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include "gripsim/errors.hpp"
#include "json.hpp"

namespace gripsim {
namespace {

using nlohmann::json;

std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

/// Strict view over one JSON object: every key must be read or it is
/// reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) const {
    return node_.contains(key) && !node_.at(key).is_null();
  }

  double number(const std::string& key, double fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number()) throw ConfigError(join_path(path_, key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(join_path(path_, key), "must be finite");
    return d;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) {
      seen_.insert(key);
      return std::nullopt;
    }
    return number(key, 0.0);
  }

  long integer(const std::string& key, long fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_integer()) throw ConfigError(join_path(path_, key), "expected an integer");
    return v.get<long>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_unsigned()) {
      throw ConfigError(join_path(path_, key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_boolean()) throw ConfigError(join_path(path_, key), "expected true or false");
    return v.get<bool>();
  }

  std::optional<std::string> optional_string(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    const json& v = node_.at(key);
    if (!v.is_string()) throw ConfigError(join_path(path_, key), "expected a string");
    return v.get<std::string>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    return optional_string(key).value_or(fallback);
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_array()) throw ConfigError(join_path(path_, key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        throw ConfigError(join_path(path_, key) + "[" + std::to_string(i) + "]", "expected a number");
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::optional<Section> child(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return Section(node_.at(key), join_path(path_, key));
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return node_.at(key);
  }

  std::string key_path(const std::string& key) const { return join_path(path_, key); }
  const std::string& path() const { return path_; }

  /// Throws for the first key (in sorted order) that was never read.
  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(join_path(path_, it.key()), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
void checked(const std::string& key, Fn&& fn) {
  try {
    fn();
  } catch (const DomainError& e) {
    throw ConfigError(key, e.what());
  }
}

void parse_geometry(Section s, FingerGeometry& g) {
  const double a = s.number("a_mm", g.a_mm);
  const double b = s.number("b_mm", g.b_mm);
  const double total = s.number("total_length_mm", g.total_length_mm);
  const double alpha_max = s.number("alpha_max_deg", rad_to_deg(g.alpha_max_rad));
  const double tip_arm = s.number("tip_arm_mm", g.tip_arm_mm);
  const auto beta = s.optional_number("beta_deg");
  s.finish();
  checked(s.path(), [&] { g = FingerGeometry::make(a, b, total, alpha_max, tip_arm); });
  if (beta) {
    g.beta_rad = deg_to_rad(*beta);
    checked(s.key_path("beta_deg"), [&] { g.validate(); });
  }
}

void parse_ring(Section s, RingModel& r) {
  r.v0_mm3 = s.number("v0_mm3", r.v0_mm3);
  r.kappa_per_rad = s.number("kappa_per_rad", r.kappa_per_rad);
  r.alpha_slack_rad = deg_to_rad(s.number("alpha_slack_deg", rad_to_deg(r.alpha_slack_rad)));
  r.c1_nmm_per_rad = s.number("c1_nmm_per_rad", r.c1_nmm_per_rad);
  r.c2_nmm_per_rad_kpa = s.number("c2_nmm_per_rad_kpa", r.c2_nmm_per_rad_kpa);
  r.p_atm_kpa = s.number("p_atm_kpa", r.p_atm_kpa);
  r.leak_rate_per_s = s.number("leak_rate_per_s", r.leak_rate_per_s);
  s.finish();
}

void parse_sensor(Section s, SensorModel& m) {
  m.full_scale_kpa = s.number("full_scale_kpa", m.full_scale_kpa);
  m.noise_frac = s.number("noise_frac", m.noise_frac);
  m.quant_step_kpa = s.number("quant_step_kpa", m.quant_step_kpa);
  s.finish();
  checked(s.path(), [&] { m.validate(); });
}

void parse_plant(Section s, PlantConfig& plant) {
  if (auto g = s.child("geometry")) parse_geometry(*g, plant.geometry);
  if (auto r = s.child("ring")) parse_ring(*r, plant.ring);
  if (auto m = s.child("sensor")) parse_sensor(*m, plant.sensor);
  if (auto grip = s.child("gripper")) {
    plant.max_opening_mm = grip->number("max_opening_mm", plant.max_opening_mm);
    grip->finish();
  }
  s.finish();
  checked(s.path(), [&] { plant.validate(); });
}

void parse_calibration(Section s, CalibrationSection& c) {
  if (auto r = s.child("regulated")) {
    auto& spec = c.regulated;
    spec.alpha_min_deg = r->number("alpha_min_deg", spec.alpha_min_deg);
    spec.alpha_max_deg = r->number("alpha_max_deg", spec.alpha_max_deg);
    spec.alpha_step_deg = r->number("alpha_step_deg", spec.alpha_step_deg);
    spec.p_min_kpa = r->number("p_min_kpa", spec.p_min_kpa);
    spec.p_max_kpa = r->number("p_max_kpa", spec.p_max_kpa);
    spec.p_step_kpa = r->number("p_step_kpa", spec.p_step_kpa);
    r->finish();
    make_grid(spec.alpha_min_deg, spec.alpha_max_deg, spec.alpha_step_deg, r->key_path("alpha_step_deg"));
    make_grid(spec.p_min_kpa, spec.p_max_kpa, spec.p_step_kpa, r->key_path("p_step_kpa"));
  }
  if (auto l = s.child("locked")) {
    auto& spec = c.locked;
    spec.alpha_step_deg = l->number("alpha_step_deg", spec.alpha_step_deg);
    spec.alpha_max_deg = l->number("alpha_max_deg", spec.alpha_max_deg);
    spec.p0_kpa = l->numbers("p0_kpa", spec.p0_kpa);
    spec.dwell_s = l->number("dwell_s", spec.dwell_s);
    spec.hysteresis_p0_kpa = l->number("hysteresis_p0_kpa", spec.hysteresis_p0_kpa);
    l->finish();
    make_grid(0.0, spec.alpha_max_deg, spec.alpha_step_deg, l->key_path("alpha_step_deg"));
    if (spec.p0_kpa.size() < 2) throw ConfigError(l->key_path("p0_kpa"), "needs at least two pressures");
    if (!(spec.dwell_s >= 0.0)) throw ConfigError(l->key_path("dwell_s"), "must be non-negative");
  }
  c.regulated_table = s.string("regulated_table", c.regulated_table);
  c.locked_table = s.string("locked_table", c.locked_table);
  c.table_path = s.optional_string("table_path");
  s.finish();
}

/// Reads probe keys over `probe`. `closing_distance_mm` and `probe_step_mm`
/// are two views of one quantity; when both are given they must agree.
void parse_probe_fields(Section& s, ProbeConfig& probe) {
  probe.p0_kpa = s.number("p0_kpa", probe.p0_kpa);
  probe.approach_step_mm = s.number("approach_step_mm", probe.approach_step_mm);
  const long n = s.integer("n_probe_steps", probe.n_probe_steps);
  if (n < 1 || n > 1000) throw ConfigError(s.key_path("n_probe_steps"), "must lie in [1, 1000]");
  const double old_dc = probe.closing_distance_mm();
  probe.n_probe_steps = static_cast<int>(n);
  const auto dc = s.optional_number("closing_distance_mm");
  const auto step = s.optional_number("probe_step_mm");
  if (dc && step && std::abs(*dc - *step * probe.n_probe_steps) > 1e-9 * std::max(1.0, *dc)) {
    throw ConfigError(s.key_path("probe_step_mm"),
                      "disagrees with closing_distance_mm / n_probe_steps");
  }
  if (step) {
    probe.probe_step_mm = *step;
  } else {
    probe.probe_step_mm = dc.value_or(old_dc) / probe.n_probe_steps;
  }
  if (s.has("contact_threshold_kpa")) {
    probe.contact_threshold_kpa = s.number("contact_threshold_kpa", 0.0);
  } else {
    s.optional_number("contact_threshold_kpa");
  }
  const long reads = s.integer("settle_reads", probe.settle_reads);
  if (reads < 1 || reads > 100000) throw ConfigError(s.key_path("settle_reads"), "must lie in [1, 100000]");
  probe.settle_reads = static_cast<int>(reads);
  probe.step_time_s = s.number("step_time_s", probe.step_time_s);
  checked(s.path(), [&] { probe.validate(); });
}

ObjectModel parse_fixture(Section s, double max_opening_mm) {
  ObjectModel object;
  const std::string kind = s.string("kind", "uniform");
  object.surface_offset_mm = s.number("surface_offset_mm", object.surface_offset_mm);
  object.damage_threshold_n = s.optional_number("damage_threshold_n");
  if (kind == "uniform") {
    if (!s.has("k_n_per_mm")) throw ConfigError(s.key_path("k_n_per_mm"), "required for a uniform fixture");
    const double k = s.number("k_n_per_mm", 0.0);
    checked(s.key_path("k_n_per_mm"), [&] { object.profile = StiffnessProfile::uniform(k); });
  } else if (kind == "linear_positions" || kind == "angular_positions") {
    if (!s.has("samples")) throw ConfigError(s.key_path("samples"), "required for a sampled fixture");
    const json& raw = s.raw("samples");
    if (!raw.is_array()) throw ConfigError(s.key_path("samples"), "expected [[coord, k], ...]");
    std::vector<std::pair<double, double>> samples;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const json& pair = raw[i];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
        throw ConfigError(s.key_path("samples") + "[" + std::to_string(i) + "]",
                          "expected [coord, k]");
      }
      samples.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    checked(s.key_path("samples"), [&] {
      object.profile = kind == "linear_positions" ? StiffnessProfile::linear(std::move(samples))
                                                  : StiffnessProfile::angular(std::move(samples));
    });
  } else {
    throw ConfigError(s.key_path("kind"),
                      "must be uniform, linear_positions or angular_positions");
  }
  s.finish();
  checked(s.path(), [&] { object.validate(max_opening_mm); });
  return object;
}

const char* kind_name(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::kUniform:
      return "uniform";
    case ProfileKind::kLinearPositions:
      return "linear_positions";
    case ProfileKind::kAngularPositions:
      return "angular_positions";
  }
  return "uniform";
}

json probe_to_json(const ProbeConfig& p) {
  json j;
  j["p0_kpa"] = p.p0_kpa;
  j["approach_step_mm"] = p.approach_step_mm;
  j["n_probe_steps"] = p.n_probe_steps;
  j["probe_step_mm"] = p.probe_step_mm;
  j["closing_distance_mm"] = p.closing_distance_mm();
  j["contact_threshold_kpa"] = p.contact_threshold_kpa ? json(*p.contact_threshold_kpa) : json(nullptr);
  j["settle_reads"] = p.settle_reads;
  j["step_time_s"] = p.step_time_s;
  return j;
}

}  // namespace

PlantConfig ScenarioConfig::effective_plant() const {
  PlantConfig out = plant;
  out.sensor.seed = seed;
  if (!noise) out.sensor = out.sensor.noise_free();
  return out;
}

double ScenarioConfig::coord_for(const ObjectModel& fixture) const {
  if (probe_coord) return *probe_coord;
  if (fixture.profile.kind == ProfileKind::kUniform) return 0.0;
  return fixture.profile.samples.front().first;
}

const ObjectModel& ScenarioConfig::fixture(const std::string& name) const {
  const auto it = fixtures.find(name);
  if (it == fixtures.end()) {
    throw ConfigError("fixture", "unknown fixture '" + name + "'; available: " + fixture_names());
  }
  return it->second;
}

std::string ScenarioConfig::fixture_names() const {
  std::string names;
  for (const auto& [name, _] : fixtures) {
    if (!names.empty()) names += ", ";
    names += name;
  }
  return names.empty() ? "(none)" : names;
}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  ScenarioConfig config;
  Section s(root, "");
  config.seed = s.unsigned_integer("seed", config.seed);
  config.noise = s.boolean("noise", config.noise);
  config.output_dir = s.string("output_dir", config.output_dir);
  if (auto plant = s.child("plant")) parse_plant(*plant, config.plant);
  if (auto cal = s.child("calibration")) parse_calibration(*cal, config.calibration);
  if (auto probe = s.child("probe")) {
    parse_probe_fields(*probe, config.probe);
    config.probe_fixture = probe->optional_string("fixture");
    config.probe_coord = probe->optional_number("coord");
    probe->finish();
  }
  if (auto fixtures = s.child("fixtures")) {
    const json& node = root.at("fixtures");
    for (auto it = node.begin(); it != node.end(); ++it) {
      auto fixture = fixtures->child(it.key());
      if (!fixture) throw ConfigError(fixtures->key_path(it.key()), "fixture must be an object");
      config.fixtures.emplace(it.key(), parse_fixture(*fixture, config.plant.max_opening_mm));
    }
    fixtures->finish();
  }
  if (auto plan = s.child("plan")) {
    PlanSection p;
    p.probe = config.probe;
    const auto fixture = plan->optional_string("fixture");
    if (!fixture) throw ConfigError(plan->key_path("fixture"), "required");
    p.fixture = *fixture;
    const std::string shape = plan->string("shape", "elongated");
    if (shape == "elongated") {
      p.shape = ObjectShape::kElongated;
      if (!plan->has("extent_mm")) throw ConfigError(plan->key_path("extent_mm"), "required for an elongated plan");
      p.span = plan->number("extent_mm", 0.0);
      if (plan->has("range_deg") || plan->has("step_deg")) {
        throw ConfigError(plan->key_path("range_deg"), "only valid for a round plan");
      }
      plan->optional_number("range_deg");
      plan->optional_number("step_deg");
      if (!plan->has("n")) throw ConfigError(plan->key_path("n"), "required");
      p.n = static_cast<int>(plan->integer("n", 0));
    } else if (shape == "round") {
      p.shape = ObjectShape::kRound;
      if (!plan->has("range_deg")) throw ConfigError(plan->key_path("range_deg"), "required for a round plan");
      p.span = plan->number("range_deg", 0.0);
      if (plan->has("extent_mm")) throw ConfigError(plan->key_path("extent_mm"), "only valid for an elongated plan");
      plan->optional_number("extent_mm");
      const auto step = plan->optional_number("step_deg");
      if (plan->has("n")) {
        p.n = static_cast<int>(plan->integer("n", 0));
      } else if (step) {
        if (!(*step > 0.0)) throw ConfigError(plan->key_path("step_deg"), "must be positive");
        p.n = static_cast<int>(std::floor(p.span / *step + 1e-9)) + 1;
        plan->integer("n", 0);
      } else {
        throw ConfigError(plan->key_path("n"), "give n or step_deg");
      }
    } else {
      throw ConfigError(plan->key_path("shape"), "must be elongated or round");
    }
    if (p.n < 2) throw ConfigError(plan->key_path("n"), "a plan needs at least two locations");
    p.avoid_fraction = plan->number("avoid_fraction", p.avoid_fraction);
    if (!(p.avoid_fraction >= 0.0 && p.avoid_fraction <= 1.0)) {
      throw ConfigError(plan->key_path("avoid_fraction"), "must lie in [0, 1]");
    }
    if (auto overrides = plan->child("probe")) {
      parse_probe_fields(*overrides, p.probe);
      overrides->finish();
    }
    plan->finish();
    if (!config.fixtures.count(p.fixture)) {
      throw ConfigError(plan->key_path("fixture"),
                        "unknown fixture '" + p.fixture + "'; available: " + config.fixture_names());
    }
    config.plan = p;
  }
  if (auto sens = s.child("sensitivity")) {
    if (sens->has("fixtures")) {
      const json& raw = sens->raw("fixtures");
      if (!raw.is_array() || raw.size() != 2 || !raw[0].is_string() || !raw[1].is_string()) {
        throw ConfigError(sens->key_path("fixtures"), "expected two fixture names");
      }
      config.sensitivity.fixtures = {raw[0].get<std::string>(), raw[1].get<std::string>()};
    } else {
      sens->optional_string("fixtures");
    }
    config.sensitivity.p0_kpa = sens->numbers("p0_kpa", config.sensitivity.p0_kpa);
    config.sensitivity.dc_mm = sens->numbers("dc_mm", config.sensitivity.dc_mm);
    sens->finish();
    for (double v : config.sensitivity.dc_mm) {
      if (!(v > 0.0)) throw ConfigError(sens->key_path("dc_mm"), "closing distances must be positive");
    }
    for (double v : config.sensitivity.p0_kpa) {
      if (!(v >= 0.0)) throw ConfigError(sens->key_path("p0_kpa"), "pressures must be non-negative");
    }
  }
  s.finish();
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const ScenarioConfig& c) {
  json root;
  root["seed"] = c.seed;
  root["noise"] = c.noise;
  root["output_dir"] = c.output_dir;

  const auto& g = c.plant.geometry;
  const auto& r = c.plant.ring;
  const auto& m = c.plant.sensor;
  root["plant"]["geometry"] = {{"a_mm", g.a_mm},
                               {"b_mm", g.b_mm},
                               {"beta_deg", rad_to_deg(g.beta_rad)},
                               {"total_length_mm", g.total_length_mm},
                               {"alpha_max_deg", rad_to_deg(g.alpha_max_rad)},
                               {"tip_arm_mm", g.tip_arm_mm}};
  root["plant"]["ring"] = {{"v0_mm3", r.v0_mm3},
                           {"kappa_per_rad", r.kappa_per_rad},
                           {"alpha_slack_deg", rad_to_deg(r.alpha_slack_rad)},
                           {"c1_nmm_per_rad", r.c1_nmm_per_rad},
                           {"c2_nmm_per_rad_kpa", r.c2_nmm_per_rad_kpa},
                           {"p_atm_kpa", r.p_atm_kpa},
                           {"leak_rate_per_s", r.leak_rate_per_s}};
  root["plant"]["sensor"] = {{"full_scale_kpa", m.full_scale_kpa},
                             {"noise_frac", m.noise_frac},
                             {"quant_step_kpa", m.quant_step_kpa}};
  root["plant"]["gripper"] = {{"max_opening_mm", c.plant.max_opening_mm}};

  const auto& reg = c.calibration.regulated;
  const auto& lck = c.calibration.locked;
  root["calibration"]["regulated"] = {{"alpha_min_deg", reg.alpha_min_deg},
                                      {"alpha_max_deg", reg.alpha_max_deg},
                                      {"alpha_step_deg", reg.alpha_step_deg},
                                      {"p_min_kpa", reg.p_min_kpa},
                                      {"p_max_kpa", reg.p_max_kpa},
                                      {"p_step_kpa", reg.p_step_kpa}};
  root["calibration"]["locked"] = {{"alpha_step_deg", lck.alpha_step_deg},
                                   {"alpha_max_deg", lck.alpha_max_deg},
                                   {"p0_kpa", lck.p0_kpa},
                                   {"dwell_s", lck.dwell_s},
                                   {"hysteresis_p0_kpa", lck.hysteresis_p0_kpa}};
  root["calibration"]["regulated_table"] = c.calibration.regulated_table;
  root["calibration"]["locked_table"] = c.calibration.locked_table;
  root["calibration"]["table_path"] =
      c.calibration.table_path ? json(*c.calibration.table_path) : json(nullptr);

  json probe = probe_to_json(c.probe);
  probe["fixture"] = c.probe_fixture ? json(*c.probe_fixture) : json(nullptr);
  probe["coord"] = c.probe_coord ? json(*c.probe_coord) : json(nullptr);
  root["probe"] = probe;

  json fixtures = json::object();
  for (const auto& [name, obj] : c.fixtures) {
    json f;
    f["kind"] = kind_name(obj.profile.kind);
    f["surface_offset_mm"] = obj.surface_offset_mm;
    f["damage_threshold_n"] = obj.damage_threshold_n ? json(*obj.damage_threshold_n) : json(nullptr);
    if (obj.profile.kind == ProfileKind::kUniform) {
      f["k_n_per_mm"] = obj.profile.base_k_n_per_mm;
    } else {
      json samples = json::array();
      for (const auto& [coord, k] : obj.profile.samples) samples.push_back({coord, k});
      f["samples"] = samples;
    }
    fixtures[name] = f;
  }
  root["fixtures"] = fixtures;

  if (c.plan) {
    const auto& p = *c.plan;
    json plan;
    plan["fixture"] = p.fixture;
    plan["shape"] = p.shape == ObjectShape::kElongated ? "elongated" : "round";
    plan[p.shape == ObjectShape::kElongated ? "extent_mm" : "range_deg"] = p.span;
    plan["n"] = p.n;
    plan["avoid_fraction"] = p.avoid_fraction;
    plan["probe"] = probe_to_json(p.probe);
    root["plan"] = plan;
  }

  json sens;
  sens["fixtures"] = c.sensitivity.fixtures.empty() ? json(nullptr) : json(c.sensitivity.fixtures);
  sens["p0_kpa"] = c.sensitivity.p0_kpa;
  sens["dc_mm"] = c.sensitivity.dc_mm;
  root["sensitivity"] = sens;
  return root.dump(2) + "\n";
}

}  // namespace gripsim
