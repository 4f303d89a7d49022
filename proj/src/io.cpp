#include "swarmsafe/io.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

namespace swarmsafe {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void checkKeys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(fmt::format("{}: expected an object", where));
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) fail(fmt::format("{}: unknown key '{}'", where, key));
  }
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(fmt::format("{}.{}: {}", where, key, e.what()));
  }
}

VecD vecFrom(const json& arr, int dim, const std::string& where) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != dim) {
    fail(fmt::format("{}: expected an array of {} numbers", where, dim));
  }
  VecD v(dim);
  for (int k = 0; k < dim; ++k) {
    if (!arr[k].is_number()) fail(fmt::format("{}: component {} is not a number", where, k));
    v[k] = arr[k].get<double>();
  }
  return v;
}

json vecJson(const VecD& v) { return json(std::vector<double>(v.begin(), v.end())); }

json pairJson(const PairKey& p) { return json::array({p.lo, p.hi}); }

std::vector<double> gridFrom(const json& node, const std::string& where) {
  if (node.is_array()) {
    std::vector<double> out;
    for (const auto& x : node) {
      if (!x.is_number()) fail(fmt::format("{}: grid values must be numbers", where));
      out.push_back(x.get<double>());
    }
    if (out.empty()) fail(fmt::format("{}: grid is empty", where));
    return out;
  }
  checkKeys(node, where, {"min", "max", "count"});
  const double lo = get<double>(node, "min", where, 0.0);
  const double hi = get<double>(node, "max", where, 0.0);
  const int count = get<int>(node, "count", where, 0);
  if (count < 1) fail(fmt::format("{}: count must be at least 1", where));
  if (!(lo > 0.0) || hi < lo) fail(fmt::format("{}: need 0 < min <= max", where));
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    out.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
  }
  return out;
}

NeighborModel modelFrom(const std::string& s, const std::string& where) {
  if (s == "cooperative") return NeighborModel::Cooperative;
  if (s == "non_adversarial") return NeighborModel::NonAdversarial;
  fail(fmt::format("{}: unknown neighbor model '{}'", where, s));
}

}  // namespace

ResolvedConfig parseConfig(const json& input, std::optional<std::uint64_t> seed_override) {
  ResolvedConfig out;
  out.source = input;
  if (seed_override) out.source["seed"] = *seed_override;
  const json& doc = out.source;

  checkKeys(doc, "config",
            {"schema_version", "name", "dim", "dt", "t_end", "seed", "limits", "hocbf",
             "neighborhood", "guidance", "allocation", "agents", "generator", "feasibility"});
  if (!doc.contains("schema_version")) fail("config: missing schema_version");
  const int version = get<int>(doc, "schema_version", "config", 0);
  if (version != kSchemaVersion) {
    fail(fmt::format("config: schema_version {} not supported (expected {})", version,
                     kSchemaVersion));
  }

  ScenarioConfig& sc = out.scenario;
  sc.name = get<std::string>(doc, "name", "config", sc.name);
  sc.dim = get<int>(doc, "dim", "config", sc.dim);
  sc.dt = get<double>(doc, "dt", "config", sc.dt);
  sc.t_end = get<double>(doc, "t_end", "config", sc.t_end);
  sc.seed = get<std::uint64_t>(doc, "seed", "config", sc.seed);

  if (doc.contains("limits")) {
    const json& n = doc["limits"];
    checkKeys(n, "limits", {"a_max", "v_max"});
    sc.a_max = get<double>(n, "a_max", "limits", sc.a_max);
    sc.v_max = get<double>(n, "v_max", "limits", sc.v_max);
  }
  if (doc.contains("hocbf")) {
    const json& n = doc["hocbf"];
    checkKeys(n, "hocbf", {"gamma1", "gamma2", "r_s"});
    sc.hocbf.gamma1 = get<double>(n, "gamma1", "hocbf", sc.hocbf.gamma1);
    sc.hocbf.gamma2 = get<double>(n, "gamma2", "hocbf", sc.hocbf.gamma2);
    sc.hocbf.r_s = get<double>(n, "r_s", "hocbf", sc.hocbf.r_s);
  }
  if (doc.contains("neighborhood")) {
    const json& n = doc["neighborhood"];
    checkKeys(n, "neighborhood", {"r_neigh", "r_crit", "eta", "r_comm"});
    auto& nb = sc.neighborhood;
    nb.r_neigh = get<double>(n, "r_neigh", "neighborhood", nb.r_neigh);
    nb.r_crit = get<double>(n, "r_crit", "neighborhood", nb.r_crit);
    nb.eta = get<double>(n, "eta", "neighborhood", nb.eta);
    nb.r_comm = get<double>(n, "r_comm", "neighborhood", nb.r_comm);
  }
  if (doc.contains("guidance")) {
    const json& n = doc["guidance"];
    checkKeys(n, "guidance", {"nav_constant", "epsilon_range", "capture_radius", "damping"});
    auto& g = sc.guidance;
    g.nav_constant = get<double>(n, "nav_constant", "guidance", g.nav_constant);
    g.epsilon_range = get<double>(n, "epsilon_range", "guidance", g.epsilon_range);
    g.capture_radius = get<double>(n, "capture_radius", "guidance", g.capture_radius);
    g.damping = get<double>(n, "damping", "guidance", g.damping);
  }
  if (doc.contains("allocation")) {
    const json& n = doc["allocation"];
    checkKeys(n, "allocation", {"mode", "capacity", "forced_margin", "single_enforcer", "oracle"});
    const auto mode = get<std::string>(n, "mode", "allocation", "auction");
    if (mode == "auction") {
      sc.mode = AllocationMode::Auction;
    } else if (mode == "baseline") {
      sc.mode = AllocationMode::Baseline;
    } else {
      fail(fmt::format("allocation.mode: unknown mode '{}'", mode));
    }
    const auto model = get<std::string>(n, "single_enforcer", "allocation", "estimated");
    if (model == "estimated") {
      sc.single_enforcer = SingleEnforcerModel::Estimated;
    } else if (model == "cooperative") {
      sc.single_enforcer = SingleEnforcerModel::Cooperative;
    } else {
      fail(fmt::format("allocation.single_enforcer: unknown model '{}'", model));
    }
    sc.capacity = get<int>(n, "capacity", "allocation", sc.capacity);
    sc.forced_margin = get<double>(n, "forced_margin", "allocation", sc.forced_margin);
    sc.compare_with_oracle = get<bool>(n, "oracle", "allocation", sc.compare_with_oracle);
  }

  if (doc.contains("agents") && doc.contains("generator")) {
    fail("config: give either 'agents' or 'generator', not both");
  }
  if (doc.contains("agents")) {
    const json& arr = doc["agents"];
    if (!arr.is_array()) fail("agents: expected an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string where = fmt::format("agents[{}]", k);
      checkKeys(arr[k], where, {"id", "p0", "v0", "target"});
      if (!arr[k].contains("p0") || !arr[k].contains("target")) {
        fail(where + ": p0 and target are required");
      }
      AgentSpec a;
      a.id = get<int>(arr[k], "id", where, static_cast<int>(k));
      a.p0 = vecFrom(arr[k]["p0"], sc.dim, where + ".p0");
      a.v0 = arr[k].contains("v0") ? vecFrom(arr[k]["v0"], sc.dim, where + ".v0") : VecD(sc.dim);
      a.target = vecFrom(arr[k]["target"], sc.dim, where + ".target");
      sc.agents.push_back(a);
    }
  } else if (doc.contains("generator")) {
    const json& g = doc["generator"];
    checkKeys(g, "generator",
              {"kind", "count", "center", "radius", "speed", "angle_jitter", "target_offset"});
    const auto kind = get<std::string>(g, "kind", "generator", "");
    if (kind != "circle_swap") fail(fmt::format("generator.kind: unknown kind '{}'", kind));
    if (sc.dim != 2 && sc.dim != 3) fail("dim must be 2 or 3");
    const VecD center = g.contains("center") ? vecFrom(g["center"], sc.dim, "generator.center")
                                             : VecD(sc.dim);
    sc.agents = circleSwap(get<int>(g, "count", "generator", 0), sc.dim, center,
                           get<double>(g, "radius", "generator", 2.5),
                           get<double>(g, "speed", "generator", 1.0),
                           get<double>(g, "angle_jitter", "generator", 0.0),
                           get<double>(g, "target_offset", "generator", 0.0), sc.seed);
  }

  if (doc.contains("feasibility")) {
    const json& f = doc["feasibility"];
    checkKeys(f, "feasibility", {"gamma1", "gamma2", "samples", "radius", "speed_max", "model"});
    if (!f.contains("gamma1") || !f.contains("gamma2")) fail("feasibility: gamma1 and gamma2 required");
    FeasibilitySpec fs;
    fs.gamma1_values = gridFrom(f["gamma1"], "feasibility.gamma1");
    fs.gamma2_values = gridFrom(f["gamma2"], "feasibility.gamma2");
    fs.samples = get<int>(f, "samples", "feasibility", fs.samples);
    if (fs.samples < 1) fail("feasibility.samples must be at least 1");
    fs.encounter.dim = sc.dim;
    fs.encounter.a_max = sc.a_max;
    fs.encounter.r_s = sc.hocbf.r_s;
    fs.encounter.radius = get<double>(f, "radius", "feasibility", sc.neighborhood.r_crit);
    fs.encounter.speed_max = get<double>(f, "speed_max", "feasibility", 2.0 * sc.v_max);
    fs.encounter.model = modelFrom(get<std::string>(f, "model", "feasibility", "non_adversarial"),
                                   "feasibility.model");
    if (!(fs.encounter.radius > 0.0) || !(fs.encounter.speed_max >= 0.0)) {
      fail("feasibility: radius must be positive and speed_max non-negative");
    }
    out.feasibility = fs;
  } else if (sc.agents.empty()) {
    fail("config: no agents and no feasibility section");
  }

  if (!sc.agents.empty()) {
    sc.validate();
  } else {
    try {
      sc.hocbf.validate();
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  return out;
}

ResolvedConfig loadConfig(const std::filesystem::path& path,
                          std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) fail(fmt::format("cannot open config '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(fmt::format("{}: {}", path.string(), e.what()));
  }
  return parseConfig(doc, seed_override);
}

json toJson(const ScenarioConfig& c) {
  json agents = json::array();
  for (const auto& a : c.agents) {
    agents.push_back({{"id", a.id}, {"p0", vecJson(a.p0)}, {"v0", vecJson(a.v0)},
                      {"target", vecJson(a.target)}});
  }
  return {
      {"schema_version", kSchemaVersion},
      {"name", c.name},
      {"dim", c.dim},
      {"dt", c.dt},
      {"t_end", c.t_end},
      {"seed", c.seed},
      {"limits", {{"a_max", c.a_max}, {"v_max", c.v_max}}},
      {"hocbf", {{"gamma1", c.hocbf.gamma1}, {"gamma2", c.hocbf.gamma2}, {"r_s", c.hocbf.r_s}}},
      {"neighborhood",
       {{"r_neigh", c.neighborhood.r_neigh},
        {"r_crit", c.neighborhood.r_crit},
        {"eta", c.neighborhood.eta},
        {"r_comm", c.neighborhood.r_comm}}},
      {"guidance",
       {{"nav_constant", c.guidance.nav_constant},
        {"epsilon_range", c.guidance.epsilon_range},
        {"capture_radius", c.guidance.capture_radius},
        {"damping", c.guidance.damping}}},
      {"allocation",
       {{"mode", toString(c.mode)},
        {"capacity", c.capacity},
        {"forced_margin", c.forced_margin},
        {"single_enforcer", toString(c.single_enforcer)},
        {"oracle", c.compare_with_oracle}}},
      {"agents", agents},
  };
}

namespace {

json costJson(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json toJson(const StepRecord& r) {
  json agents = json::array();
  for (const auto& a : r.agents) {
    agents.push_back({{"id", a.id},
                      {"p", vecJson(a.p)},
                      {"v", vecJson(a.v)},
                      {"a_nom", vecJson(a.a_nom)},
                      {"a_cmd", vecJson(a.a_cmd)},
                      {"qp_status", toString(a.qp_status)},
                      {"fallback", a.fallback},
                      {"deviation", a.deviation},
                      {"n_constraints", a.n_constraints},
                      {"captured", a.captured}});
  }
  auto pairs = [](const std::vector<PairKey>& v) {
    json out = json::array();
    for (const auto& p : v) out.push_back(pairJson(p));
    return out;
  };
  json bids = json::array();
  for (const auto& b : r.bids) {
    bids.push_back({{"pair", pairJson(b.pair)}, {"bidder", b.bidder}, {"cost", costJson(b.cost)}});
  }
  json edges = json::array();
  for (const auto& e : r.edges) edges.push_back(json::array({e.from, e.to}));
  json decisions = json::array();
  for (const auto& d : r.decisions) {
    decisions.push_back({{"pair", pairJson(d.pair)},
                         {"outcome", toString(d.outcome)},
                         {"enforcer", d.enforcer ? json(*d.enforcer) : json(nullptr)}});
  }
  json out = {{"type", "step"},
              {"t", r.t},
              {"min_dist", r.min_dist},
              {"agents", agents},
              {"active_pairs", pairs(r.active_pairs)},
              {"forced_pairs", pairs(r.forced_pairs)},
              {"bids", bids},
              {"edges", edges},
              {"dual_pairs", pairs(r.dual_pairs)},
              {"decisions", decisions},
              {"total_constraints", r.total_constraints},
              {"both_enforce_count", r.both_enforce_count},
              {"qp_fallbacks", r.qp_fallbacks},
              {"total_deviation", r.total_deviation},
              {"coverage_ok", r.coverage_ok}};
  if (r.greedy_cost) out["greedy_cost"] = costJson(*r.greedy_cost);
  if (r.oracle_cost) out["oracle_cost"] = costJson(*r.oracle_cost);
  return out;
}

json toJson(const RunMetrics& m) {
  json captures = json::array();
  for (const auto& t : m.capture_times) captures.push_back(t ? json(*t) : json(nullptr));
  return {{"ticks", m.ticks},
          {"min_distance", costJson(m.min_distance)},
          {"final_time", m.final_time},
          {"all_captured", m.all_captured},
          {"capture_times", captures},
          {"total_constraints", m.total_constraints},
          {"total_both_enforce", m.total_both_enforce},
          {"mean_constraints_per_tick", m.mean_constraints_per_tick},
          {"mean_both_enforce_per_tick", m.mean_both_enforce_per_tick},
          {"qp_fallbacks", m.qp_fallbacks},
          {"coverage_failures", m.coverage_failures},
          {"dual_pairs", m.dual_pairs},
          {"oracle_ticks", m.oracle_ticks},
          {"greedy_cost_sum", costJson(m.greedy_cost_sum)},
          {"oracle_cost_sum", costJson(m.oracle_cost_sum)},
          {"greedy_oracle_ratio",
           m.oracle_cost_sum > 0.0 && std::isfinite(m.oracle_cost_sum)
               ? costJson(m.greedy_cost_sum / m.oracle_cost_sum)
               : json(nullptr)},
          {"max_greedy_oracle_ratio", costJson(m.max_greedy_oracle_ratio)}};
}

void writeRecordsJsonl(std::ostream& os, const ScenarioConfig& config, const RunResult& result) {
  os << json{{"type", "header"}, {"schema_version", kSchemaVersion}, {"config", toJson(config)}}.dump()
     << '\n';
  for (const auto& r : result.records) os << toJson(r).dump() << '\n';
  json agents = json::array();
  const World& w = result.final_world;
  for (std::size_t k = 0; k < w.agents.size(); ++k) {
    agents.push_back({{"id", w.agents[k].id},
                      {"p", vecJson(w.agents[k].p)},
                      {"v", vecJson(w.agents[k].v)},
                      {"captured", static_cast<bool>(w.captured[k])}});
  }
  os << json{{"type", "final"}, {"t", w.t}, {"agents", agents}}.dump() << '\n';
}

std::string formatNumber(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.10g}", x);
}

void writeSummaryCsv(std::ostream& os, const std::vector<StepRecord>& records) {
  os << "t,min_dist,n_active_pairs,n_edges,n_dual,total_deviation,qp_fallbacks\n";
  for (const auto& r : records) {
    os << formatNumber(r.t) << ',' << formatNumber(r.min_dist) << ',' << r.active_pairs.size()
       << ',' << r.edges.size() << ',' << r.dual_pairs.size() << ','
       << formatNumber(r.total_deviation) << ',' << r.qp_fallbacks << '\n';
  }
}

void writeFeasibilityCsv(std::ostream& os, const FeasibilityMap& map) {
  os << "gamma1,gamma2,feasible_fraction\n";
  for (const auto& c : map.cells) {
    os << formatNumber(c.gamma1) << ',' << formatNumber(c.gamma2) << ','
       << formatNumber(c.feasible_fraction) << '\n';
  }
}

}  // namespace swarmsafe
