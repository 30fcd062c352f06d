#include "neurocactus/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace neurocactus {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  throw Error(Errc::SchemaError, pointer + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& pointer) {
  if (!j.is_object() || !j.contains(key)) schema_error(pointer + "/" + key, "missing field");
  return j.at(key);
}

double need_number(const json& j, const char* key, const std::string& pointer) {
  const json& v = need(j, key, pointer);
  if (!v.is_number()) schema_error(pointer + "/" + key, "expected a number");
  return v.get<double>();
}

int need_int(const json& j, const char* key, const std::string& pointer) {
  const json& v = need(j, key, pointer);
  if (!v.is_number_integer()) schema_error(pointer + "/" + key, "expected an integer");
  return v.get<int>();
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::DanglingReference, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(Errc::SchemaError, path.string() + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

json graph_to_json(const SignedGraph& g) {
  json j;
  j["n"] = g.node_count();
  json edges = json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({{"i", e.i}, {"j", e.j}, {"sign", to_string(e.sign)}, {"w0", e.w0}});
  }
  j["edges"] = std::move(edges);
  json control = json::array();
  for (const auto& c : g.control_nodes())
    control.push_back({{"node", c.node}, {"gain", c.gain}});
  j["control"] = std::move(control);
  const WeightBounds& b = g.bounds();
  j["bounds"] = {{"a_minus_lo", b.a_minus_lo},
                 {"a_minus_hi", b.a_minus_hi},
                 {"a_plus_lo", b.a_plus_lo},
                 {"a_plus_hi", b.a_plus_hi}};
  return j;
}

SignedGraph graph_from_json(const json& j) {
  if (!j.is_object()) schema_error("", "graph document must be an object");
  int n = need_int(j, "n", "");

  WeightBounds bounds{-1.0, -0.05, 0.05, 1.0};
  if (j.contains("bounds")) {
    const json& b = j.at("bounds");
    bounds.a_minus_lo = need_number(b, "a_minus_lo", "/bounds");
    bounds.a_minus_hi = need_number(b, "a_minus_hi", "/bounds");
    bounds.a_plus_lo = need_number(b, "a_plus_lo", "/bounds");
    bounds.a_plus_hi = need_number(b, "a_plus_hi", "/bounds");
  }

  std::vector<EdgeRecord> edges;
  const json& ej = need(j, "edges", "");
  if (!ej.is_array()) schema_error("/edges", "expected an array");
  for (std::size_t k = 0; k < ej.size(); ++k) {
    std::string at = "/edges/" + std::to_string(k);
    const json& e = ej[k];
    EdgeRecord rec;
    rec.i = need_int(e, "i", at);
    rec.j = need_int(e, "j", at);
    const json& s = need(e, "sign", at);
    if (s == "plus")
      rec.sign = EdgeSign::Plus;
    else if (s == "minus")
      rec.sign = EdgeSign::Minus;
    else
      schema_error(at + "/sign", "expected \"plus\" or \"minus\"");
    rec.w0 = need_number(e, "w0", at);
    edges.push_back(rec);
  }

  std::vector<ControlNode> control;
  const json& cj = need(j, "control", "");
  if (!cj.is_array()) schema_error("/control", "expected an array");
  for (std::size_t k = 0; k < cj.size(); ++k) {
    std::string at = "/control/" + std::to_string(k);
    control.push_back({need_int(cj[k], "node", at), need_number(cj[k], "gain", at)});
  }

  try {
    return build_graph(n, std::move(edges), std::move(control), bounds);
  } catch (const Error& e) {
    if (e.code() == Errc::BadArgument) throw Error(Errc::SchemaError, e.what());
    throw;
  }
}

json decomposition_to_json(const GeneralizedDecomposition& gd) {
  json cacti = json::array();
  for (const auto& c : gd.cacti) {
    json comps = json::array();
    for (const auto& comp : c.components) {
      if (comp.kind == Component::Kind::Singleton)
        comps.push_back({{"type", "singleton"}, {"node", comp.nodes.front()}});
      else
        comps.push_back({{"type", "cycle"}, {"nodes", comp.nodes}});
    }
    json atts = json::array();
    for (const auto& a : c.attachments) atts.push_back({a.d1, a.d2});
    cacti.push_back({{"root", c.root}, {"components", std::move(comps)},
                     {"attachments", std::move(atts)}});
  }
  json extras = json::array();
  for (const auto& [a, b] : gd.extra_edges) extras.push_back({a, b});
  return {{"cacti", std::move(cacti)}, {"extra_edges", std::move(extras)}};
}

GeneralizedDecomposition decomposition_from_json(const json& j) {
  GeneralizedDecomposition gd;
  const json& cacti = need(j, "cacti", "");
  if (!cacti.is_array()) schema_error("/cacti", "expected an array");
  for (std::size_t ci = 0; ci < cacti.size(); ++ci) {
    std::string at = "/cacti/" + std::to_string(ci);
    const json& c = cacti[ci];
    CactusDecomposition cd;
    cd.root = need_int(c, "root", at);
    const json& comps = need(c, "components", at);
    if (!comps.is_array() || comps.empty()) schema_error(at + "/components", "expected a nonempty array");
    for (std::size_t k = 0; k < comps.size(); ++k) {
      std::string cat = at + "/components/" + std::to_string(k);
      const json& comp = comps[k];
      const json& type = need(comp, "type", cat);
      if (type == "singleton") {
        cd.components.push_back(Component::singleton(need_int(comp, "node", cat)));
      } else if (type == "cycle") {
        const json& nodes = need(comp, "nodes", cat);
        if (!nodes.is_array()) schema_error(cat + "/nodes", "expected an array");
        std::vector<int> ids;
        for (const auto& v : nodes) {
          if (!v.is_number_integer()) schema_error(cat + "/nodes", "expected integers");
          ids.push_back(v.get<int>());
        }
        cd.components.push_back(Component::cycle(std::move(ids)));
      } else {
        schema_error(cat + "/type", "expected \"singleton\" or \"cycle\"");
      }
    }
    const json& atts = need(c, "attachments", at);
    if (!atts.is_array()) schema_error(at + "/attachments", "expected an array");
    for (std::size_t k = 0; k < atts.size(); ++k) {
      const json& a = atts[k];
      if (!a.is_array() || a.size() != 2)
        schema_error(at + "/attachments/" + std::to_string(k), "expected a pair");
      cd.attachments.push_back({a[0].get<int>(), a[1].get<int>()});
    }
    gd.cacti.push_back(std::move(cd));
  }
  const json& extras = need(j, "extra_edges", "");
  if (!extras.is_array()) schema_error("/extra_edges", "expected an array");
  for (std::size_t k = 0; k < extras.size(); ++k) {
    const json& a = extras[k];
    if (!a.is_array() || a.size() != 2)
      schema_error("/extra_edges/" + std::to_string(k), "expected a pair");
    int u = a[0].get<int>();
    int v = a[1].get<int>();
    gd.extra_edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  return gd;
}

// ---------------------------------------------------------------------------

json report_to_json(const ControllabilityReport& r) {
  json j;
  j["rank"] = r.rank;
  j["n"] = r.n;
  j["singular_values"] = r.singular_values;
  j["tolerance"] = r.tolerance;
  j["controllable"] = r.controllable;
  j["sample_fraction"] =
      r.sample_fraction_full_rank ? json(*r.sample_fraction_full_rank) : json(nullptr);
  return j;
}

json lqr_to_json(const RegulatorDesign& d) {
  json j;
  j["K"] = matrix_to_json(d.lqr.K);
  j["P"] = matrix_to_json(d.lqr.P);
  j["care_residual"] = d.lqr.care_residual;
  json spec = json::array();
  for (const auto& z : d.lqr.closed_loop_spectrum) spec.push_back({z.real(), z.imag()});
  j["closed_loop_spectrum"] = std::move(spec);
  j["feedforward"] = vector_to_json(d.feedforward);
  j["target_residual"] = d.target_residual;
  return j;
}

json monitor_to_json(const MonitorReport& m) {
  json j;
  j["x_max"] = std::isnan(m.x_max) ? json(nullptr) : json(m.x_max);
  json v = json::array();
  for (const auto& viol : m.violations)
    v.push_back({{"t", viol.t}, {"node", viol.node}, {"value", viol.value}, {"kind", viol.kind}});
  j["violations"] = std::move(v);
  j["final_state_norm"] = m.final_state_norm;
  j["final_weight_gap"] = m.final_weight_gap;
  return j;
}

json checks_to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"passed", c.passed},
                   {"measured", c.measured},
                   {"detail", c.detail}});
  }
  return arr;
}

// ---------------------------------------------------------------------------

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  out << "t";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x_" << i;
  out << "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << format_double(traj.times[k]);
    for (Eigen::Index i = 0; i < n; ++i) out << "," << format_double(traj.states[k](i));
    out << "\n";
  }
}

void write_weights_csv(const std::filesystem::path& path, const Trajectory& traj,
                       const SignedGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << "t";
  for (const auto& e : g.edges()) out << ",w_" << e.i << "_" << e.j;
  out << "\n";
  for (std::size_t k = 0; k < traj.snapshot_times.size(); ++k) {
    out << format_double(traj.snapshot_times[k]);
    for (const auto& e : g.edges())
      out << "," << format_double(traj.weight_snapshots[k](e.i - 1, e.j - 1));
    out << "\n";
  }
}

}  // namespace neurocactus
