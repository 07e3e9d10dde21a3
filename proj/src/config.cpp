#include "tceer/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <vector>

namespace tceer {

namespace {

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "not a number: '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(x);
  } catch (const std::exception&) {
    throw ConfigError(key, "not an integer: '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "not an unsigned integer: '" + v + "'");
  }
}

std::vector<int> parse_id_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::istringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_int(key, item));
  }
  return out;
}

using Setter = std::function<void(SimConfig&, const std::string&)>;

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = {
      {"n", [](SimConfig& c, const std::string& v) { c.n = parse_int("n", v); }},
      {"field_width", [](SimConfig& c, const std::string& v) { c.field_width = parse_double("field_width", v); }},
      {"field_height", [](SimConfig& c, const std::string& v) { c.field_height = parse_double("field_height", v); }},
      {"bs_x", [](SimConfig& c, const std::string& v) { c.bs.x = parse_double("bs_x", v); }},
      {"bs_y", [](SimConfig& c, const std::string& v) { c.bs.y = parse_double("bs_y", v); }},
      {"radio_range", [](SimConfig& c, const std::string& v) { c.radio_range = parse_double("radio_range", v); }},
      {"e_initial", [](SimConfig& c, const std::string& v) { c.e_initial = parse_double("e_initial", v); }},
      {"rounds", [](SimConfig& c, const std::string& v) { c.rounds = parse_int("rounds", v); }},
      {"sources_per_round", [](SimConfig& c, const std::string& v) { c.sources_per_round = parse_int("sources_per_round", v); }},
      {"packet_size_bits", [](SimConfig& c, const std::string& v) { c.packet_size_bits = parse_double("packet_size_bits", v); }},
      {"e_elec", [](SimConfig& c, const std::string& v) { c.e_elec = parse_double("e_elec", v); }},
      {"eps_amp", [](SimConfig& c, const std::string& v) { c.eps_amp = parse_double("eps_amp", v); }},
      {"e_idle", [](SimConfig& c, const std::string& v) { c.e_idle = parse_double("e_idle", v); }},
      {"buffer_capacity", [](SimConfig& c, const std::string& v) { c.buffer_capacity = parse_int("buffer_capacity", v); }},
      {"service_rate", [](SimConfig& c, const std::string& v) { c.service_rate = parse_int("service_rate", v); }},
      {"c_th_min", [](SimConfig& c, const std::string& v) { c.congestion.c_th_min = parse_double("c_th_min", v); }},
      {"c_th_max", [](SimConfig& c, const std::string& v) { c.congestion.c_th_max = parse_double("c_th_max", v); }},
      {"epsilon", [](SimConfig& c, const std::string& v) { c.congestion.epsilon = parse_double("epsilon", v); }},
      {"omega", [](SimConfig& c, const std::string& v) { c.metric_weights.omega = parse_double("omega", v); }},
      {"k1", [](SimConfig& c, const std::string& v) { c.metric_weights.k1 = parse_double("k1", v); }},
      {"k2", [](SimConfig& c, const std::string& v) { c.metric_weights.k2 = parse_double("k2", v); }},
      {"alpha", [](SimConfig& c, const std::string& v) { c.np_weights.alpha = parse_double("alpha", v); }},
      {"beta", [](SimConfig& c, const std::string& v) { c.np_weights.beta = parse_double("beta", v); }},
      {"w_d", [](SimConfig& c, const std::string& v) { c.w_d = parse_double("w_d", v); }},
      {"w_i", [](SimConfig& c, const std::string& v) { c.w_i = parse_double("w_i", v); }},
      {"t_th", [](SimConfig& c, const std::string& v) { c.t_th = parse_double("t_th", v); }},
      {"delta_t", [](SimConfig& c, const std::string& v) { c.delta_t = parse_int("delta_t", v); }},
      {"malicious_ids", [](SimConfig& c, const std::string& v) { c.malicious.ids = parse_id_list("malicious_ids", v); }},
      {"malicious_count", [](SimConfig& c, const std::string& v) { c.malicious.count = parse_int("malicious_count", v); }},
      {"malicious_fraction", [](SimConfig& c, const std::string& v) { c.malicious.fraction = parse_double("malicious_fraction", v); }},
      {"malicious_behavior",
       [](SimConfig& c, const std::string& v) {
         if (v == "dropper") c.malicious.behavior = BehaviorKind::Dropper;
         else if (v == "modifier") c.malicious.behavior = BehaviorKind::Modifier;
         else throw ConfigError("malicious_behavior", "expected dropper or modifier, got '" + v + "'");
       }},
      {"p_drop", [](SimConfig& c, const std::string& v) { c.malicious.p_drop = parse_double("p_drop", v); }},
      {"p_modify", [](SimConfig& c, const std::string& v) { c.malicious.p_modify = parse_double("p_modify", v); }},
      {"malicious_placement",
       [](SimConfig& c, const std::string& v) {
         if (v == "relay") c.malicious.placement = MaliciousSpec::Placement::Relay;
         else if (v == "anywhere") c.malicious.placement = MaliciousSpec::Placement::Anywhere;
         else throw ConfigError("malicious_placement", "expected relay or anywhere, got '" + v + "'");
       }},
      {"seed", [](SimConfig& c, const std::string& v) { c.seed = parse_u64("seed", v); }},
  };
  return table;
}

// Grammar of the [flc] section:
//   controller tcm|edm
//   variable input1|input2|output
//   term <Label> <a> <b> <c>
//   rule <T1> <T2> -> <Out>
struct FlcParser {
  std::string controller;
  std::string variable;

  void parse_line(const std::string& line, FlcOverrides& out) {
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "controller") {
      ss >> controller;
      if (controller != "tcm" && controller != "edm")
        throw ConfigError("flc", "unknown controller '" + controller + "'");
      variable.clear();
    } else if (word == "variable") {
      if (controller.empty()) throw ConfigError("flc", "variable before controller");
      ss >> variable;
      if (variable != "input1" && variable != "input2" && variable != "output")
        throw ConfigError("flc", "unknown variable '" + variable + "'");
    } else if (word == "term") {
      if (controller.empty() || variable.empty())
        throw ConfigError("flc", "term line needs controller and variable context");
      FlcOverrides::TermSpec t;
      t.controller = controller;
      t.variable = variable;
      ss >> t.label >> t.a >> t.b >> t.c;
      if (!ss) throw ConfigError("flc", "bad term line: '" + line + "'");
      out.terms.push_back(std::move(t));
    } else if (word == "rule") {
      if (controller.empty()) throw ConfigError("flc", "rule line before controller");
      FlcOverrides::RuleSpec r;
      r.controller = controller;
      std::string arrow;
      ss >> r.t1 >> r.t2 >> arrow >> r.out;
      if (!ss || arrow != "->")
        throw ConfigError("flc", "bad rule line: '" + line + "'");
      out.rules.push_back(std::move(r));
    } else {
      throw ConfigError("flc", "unknown directive '" + word + "'");
    }
  }
};

std::string fmt_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void apply_override(SimConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = key_table();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError(key, "unknown configuration key");
  it->second(cfg, value);
}

SimConfig load_config(std::istream& in, const std::string& source_name) {
  SimConfig cfg;
  FlcParser flc;
  bool in_flc = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[flc]") {
        in_flc = true;
        continue;
      }
      throw ConfigError(source_name + ":" + std::to_string(lineno),
                        "unknown section " + line);
    }
    if (in_flc) {
      flc.parse_line(line, cfg.flc);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source_name + ":" + std::to_string(lineno),
                        "expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    apply_override(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open configuration file");
  return load_config(in, path);
}

std::string resolved_config_text(const SimConfig& c) {
  std::ostringstream out;
  out << "# resolved scenario configuration\n";
  out << "n = " << c.n << '\n';
  out << "field_width = " << fmt_shortest(c.field_width) << '\n';
  out << "field_height = " << fmt_shortest(c.field_height) << '\n';
  out << "bs_x = " << fmt_shortest(c.bs.x) << '\n';
  out << "bs_y = " << fmt_shortest(c.bs.y) << '\n';
  out << "radio_range = " << fmt_shortest(c.radio_range) << '\n';
  out << "e_initial = " << fmt_shortest(c.e_initial) << '\n';
  out << "rounds = " << c.rounds << '\n';
  out << "sources_per_round = " << c.sources_per_round << '\n';
  out << "packet_size_bits = " << fmt_shortest(c.packet_size_bits) << '\n';
  out << "e_elec = " << fmt_shortest(c.e_elec) << '\n';
  out << "eps_amp = " << fmt_shortest(c.eps_amp) << '\n';
  out << "e_idle = " << fmt_shortest(c.e_idle) << '\n';
  out << "buffer_capacity = " << c.buffer_capacity << '\n';
  out << "service_rate = " << c.service_rate << '\n';
  out << "c_th_min = " << fmt_shortest(c.congestion.c_th_min) << '\n';
  out << "c_th_max = " << fmt_shortest(c.congestion.c_th_max) << '\n';
  out << "epsilon = " << fmt_shortest(c.congestion.epsilon) << '\n';
  out << "omega = " << fmt_shortest(c.metric_weights.omega) << '\n';
  out << "k1 = " << fmt_shortest(c.metric_weights.k1) << '\n';
  out << "k2 = " << fmt_shortest(c.metric_weights.k2) << '\n';
  out << "alpha = " << fmt_shortest(c.np_weights.alpha) << '\n';
  out << "beta = " << fmt_shortest(c.np_weights.beta) << '\n';
  out << "w_d = " << fmt_shortest(c.w_d) << '\n';
  out << "w_i = " << fmt_shortest(c.w_i) << '\n';
  out << "t_th = " << fmt_shortest(c.t_th) << '\n';
  out << "delta_t = " << c.delta_t << '\n';
  out << "malicious_ids = ";
  for (std::size_t i = 0; i < c.malicious.ids.size(); ++i) {
    if (i) out << ',';
    out << c.malicious.ids[i];
  }
  out << '\n';
  out << "malicious_count = " << c.malicious.count << '\n';
  out << "malicious_fraction = " << fmt_shortest(c.malicious.fraction) << '\n';
  out << "malicious_behavior = "
      << (c.malicious.behavior == BehaviorKind::Modifier ? "modifier" : "dropper") << '\n';
  out << "p_drop = " << fmt_shortest(c.malicious.p_drop) << '\n';
  out << "p_modify = " << fmt_shortest(c.malicious.p_modify) << '\n';
  out << "malicious_placement = "
      << (c.malicious.placement == MaliciousSpec::Placement::Relay ? "relay" : "anywhere")
      << '\n';
  out << "seed = " << c.seed << '\n';

  if (!c.flc.empty()) {
    out << "[flc]\n";
    std::string controller, variable;
    for (const auto& t : c.flc.terms) {
      if (t.controller != controller) {
        controller = t.controller;
        variable.clear();
        out << "controller " << controller << '\n';
      }
      if (t.variable != variable) {
        variable = t.variable;
        out << "variable " << variable << '\n';
      }
      out << "term " << t.label << ' ' << fmt_shortest(t.a) << ' '
          << fmt_shortest(t.b) << ' ' << fmt_shortest(t.c) << '\n';
    }
    controller.clear();
    for (const auto& r : c.flc.rules) {
      if (r.controller != controller) {
        controller = r.controller;
        out << "controller " << controller << '\n';
      }
      out << "rule " << r.t1 << ' ' << r.t2 << " -> " << r.out << '\n';
    }
  }
  return out.str();
}

}  // namespace tceer
