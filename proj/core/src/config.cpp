#include "crdctl/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "crdctl/errors.hpp"

namespace crdctl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  double value = 0.0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw ConfigError("key '" + key + "': cannot parse number '" + t + "'");
  }
  if (!std::isfinite(value)) throw ConfigError("key '" + key + "': value must be finite");
  return value;
}

int parse_int(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  int value = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw ConfigError("key '" + key + "': cannot parse integer '" + t + "'");
  }
  return value;
}

Convection parse_convection(const std::string& s) {
  static const std::map<std::string, Convection> names = {
      {"none", Convection::None},
      {"flow_positive", Convection::FlowPositive},
      {"flow_negative", Convection::FlowNegative},
      {"counter", Convection::Counter},
      {"buckmaster", Convection::Buckmaster},
      {"counter_negative", Convection::CounterNegative},
      {"buckmaster_negative", Convection::BuckmasterNegative},
  };
  const auto it = names.find(trim(s));
  if (it == names.end()) throw ConfigError("key 'convection': unknown kind '" + trim(s) + "'");
  return it->second;
}

ControllerKind parse_controller_kind(const std::string& s) {
  static const std::map<std::string, ControllerKind> names = {
      {"flow_positive", ControllerKind::FlowPositive},
      {"flow_negative", ControllerKind::FlowNegative},
      {"counter", ControllerKind::Counter},
      {"buckmaster", ControllerKind::Buckmaster},
      {"counter_right", ControllerKind::CounterRight},
      {"buckmaster_right", ControllerKind::BuckmasterRight},
  };
  const auto it = names.find(trim(s));
  if (it == names.end()) throw ConfigError("key 'kind': unknown controller kind '" + trim(s) + "'");
  return it->second;
}

// Reaction grammar: sum of <coeff>*u^<power> terms, e.g. "0.01*u^3 - 2*u".
ReactionSpec parse_reaction(const std::string& text) {
  ReactionSpec spec;
  const std::string t = trim(text);
  if (t.empty() || t == "0") return spec;

  std::size_t pos = 0;
  double sign = 1.0;
  while (pos < t.size()) {
    while (pos < t.size() && t[pos] == ' ') ++pos;
    std::size_t next = std::string::npos;  // next top-level +/-, skipping exponent signs
    for (std::size_t i = pos + 1; i < t.size(); ++i) {
      if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
        next = i;
        break;
      }
    }
    std::string term = trim(t.substr(pos, next == std::string::npos ? next : next - pos));
    if (term.empty()) throw ConfigError("key 'reaction': empty term");

    double coeff = sign;
    std::string upart = term;
    if (const auto star = term.find('*'); star != std::string::npos) {
      coeff = sign * parse_double(term.substr(0, star), "reaction");
      upart = trim(term.substr(star + 1));
    } else if (term[0] != 'u') {
      throw ConfigError("key 'reaction': term '" + term + "' must look like <coeff>*u^<power>");
    }

    int power = 1;
    if (upart == "u") {
      power = 1;
    } else if (upart.rfind("u^", 0) == 0) {
      power = parse_int(upart.substr(2), "reaction");
    } else {
      throw ConfigError("key 'reaction': term '" + term + "' must look like <coeff>*u^<power>");
    }
    if (power < 1) throw ConfigError("key 'reaction': powers must be >= 1 (no constant term)");
    spec.terms.push_back({coeff, power});

    if (next == std::string::npos) break;
    sign = (t[next] == '-') ? -1.0 : 1.0;
    pos = next + 1;
  }
  return spec;
}

std::string render_reaction(const ReactionSpec& spec) {
  if (spec.terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < spec.terms.size(); ++i) {
    double c = spec.terms[i].coeff;
    if (i == 0) {
      out += format_double(c);
    } else {
      out += (c < 0.0) ? " - " : " + ";
      out += format_double(std::abs(c));
    }
    out += "*u^" + std::to_string(spec.terms[i].power);
  }
  return out;
}

// IC grammar: sum of a, a*x^k, a*cos(b*pi*x), a*sin(b*pi*x).
std::vector<IcTerm> parse_ic_expression(const std::string& text) {
  std::vector<IcTerm> terms;
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("key 'expression': empty initial condition");
  if (t == "0") return terms;

  std::size_t pos = 0;
  double sign = 1.0;
  while (pos < t.size()) {
    while (pos < t.size() && t[pos] == ' ') ++pos;
    // Split on the next top-level +/-; signs inside cos(...) do not occur in
    // this grammar, so depth tracking over parentheses suffices.
    std::size_t next = std::string::npos;
    int depth = 0;
    for (std::size_t i = pos + 1; i < t.size(); ++i) {
      if (t[i] == '(') ++depth;
      if (t[i] == ')') --depth;
      if (depth == 0 && (t[i] == '+' || t[i] == '-') &&
          t[i - 1] != 'e' && t[i - 1] != 'E') {
        next = i;
        break;
      }
    }
    std::string term = trim(t.substr(pos, next == std::string::npos ? next : next - pos));
    if (term.empty()) throw ConfigError("key 'expression': empty term");

    double amp = sign;
    std::string body = term;
    if (const auto star = term.find('*'); star != std::string::npos &&
                                          term.find_first_of("cs x", 0) > star) {
      amp = sign * parse_double(term.substr(0, star), "expression");
      body = trim(term.substr(star + 1));
    } else if (term[0] != 'x' && term.rfind("cos", 0) != 0 && term.rfind("sin", 0) != 0) {
      // plain constant
      terms.push_back({IcTerm::Kind::Poly, sign * parse_double(term, "expression"), 0.0});
      if (next == std::string::npos) break;
      sign = (t[next] == '-') ? -1.0 : 1.0;
      pos = next + 1;
      continue;
    }

    IcTerm ic;
    ic.amplitude = amp;
    if (body == "x") {
      ic.kind = IcTerm::Kind::Poly;
      ic.param = 1.0;
    } else if (body.rfind("x^", 0) == 0) {
      ic.kind = IcTerm::Kind::Poly;
      ic.param = parse_int(body.substr(2), "expression");
    } else if (body.rfind("cos(", 0) == 0 || body.rfind("sin(", 0) == 0) {
      ic.kind = body[0] == 'c' ? IcTerm::Kind::Cos : IcTerm::Kind::Sin;
      if (body.back() != ')') throw ConfigError("key 'expression': unbalanced parentheses in '" + term + "'");
      std::string arg = trim(body.substr(4, body.size() - 5));
      // accepted argument forms: pi*x, <b>*pi*x
      double freq = 1.0;
      if (arg != "pi*x") {
        const auto star = arg.find('*');
        if (star == std::string::npos || trim(arg.substr(star + 1)) != "pi*x") {
          throw ConfigError("key 'expression': trig argument must be [b*]pi*x in '" + term + "'");
        }
        freq = parse_double(arg.substr(0, star), "expression");
      }
      ic.param = freq;
    } else {
      throw ConfigError("key 'expression': cannot parse term '" + term + "'");
    }
    terms.push_back(ic);

    if (next == std::string::npos) break;
    sign = (t[next] == '-') ? -1.0 : 1.0;
    pos = next + 1;
  }
  return terms;
}

std::string render_ic_terms(const std::vector<IcTerm>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const IcTerm& term = terms[i];
    double a = term.amplitude;
    if (i == 0) {
      out += format_double(a);
    } else {
      out += (a < 0.0) ? " - " : " + ";
      out += format_double(std::abs(a));
    }
    switch (term.kind) {
      case IcTerm::Kind::Poly:
        if (term.param == 1.0) out += "*x";
        else if (term.param != 0.0) out += "*x^" + format_double(term.param);
        break;
      case IcTerm::Kind::Cos:
        out += "*cos(" + (term.param == 1.0 ? "" : format_double(term.param) + "*") + "pi*x)";
        break;
      case IcTerm::Kind::Sin:
        out += "*sin(" + (term.param == 1.0 ? "" : format_double(term.param) + "*") + "pi*x)";
        break;
    }
  }
  return out;
}

std::vector<IcTerm> ic_preset_terms(const std::string& name) {
  if (name == "zero") return {};
  if (name == "s3") {
    return {{IcTerm::Kind::Poly, 300.0, 0.0}, {IcTerm::Kind::Cos, -300.0, 10.0}};
  }
  if (name == "s3_unit") {
    return {{IcTerm::Kind::Poly, 1.0, 0.0}, {IcTerm::Kind::Cos, -1.0, 10.0}};
  }
  throw ConfigError("key 'preset': unknown initial-condition preset '" + name + "'");
}

struct RawConfig {
  // section -> ordered (key, value) pairs
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections;
};

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string current;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      }
      current = trim(t.substr(1, t.size() - 2));
      if (current.empty()) {
        throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      }
      raw.sections.push_back({current, {}});
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    if (current.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside of any [section]");
    }
    raw.sections.back().second.push_back({trim(t.substr(0, eq)), trim(t.substr(eq + 1))});
  }
  return raw;
}

}  // namespace

ExperimentFile parse_config(const std::string& text) {
  const RawConfig raw = tokenize(text);
  ExperimentFile f;
  bool have_plant = false, have_grid = false, have_time = false;
  bool ic_expression_seen = false, ic_preset_seen = false;

  for (const auto& [section, entries] : raw.sections) {
    if (section == "plant") {
      have_plant = true;
      bool have_eps = false, have_conv = false;
      for (const auto& [key, value] : entries) {
        if (key == "epsilon") { f.epsilon = parse_double(value, key); have_eps = true; }
        else if (key == "convection") { f.convection = parse_convection(value); have_conv = true; }
        else if (key == "reaction") { f.reaction = parse_reaction(value); }
        else throw ConfigError("section [plant]: unknown key '" + key + "'");
      }
      if (!have_eps) throw ConfigError("section [plant]: missing key 'epsilon'");
      if (!have_conv) throw ConfigError("section [plant]: missing key 'convection'");
    } else if (section == "grid") {
      have_grid = true;
      bool have_n = false;
      for (const auto& [key, value] : entries) {
        if (key == "n") { f.grid_n = parse_int(value, key); have_n = true; }
        else if (key == "backend") {
          const std::string b = trim(value);
          if (b == "fd") f.backend = DiffBackend::FiniteDifference;
          else if (b == "rbf") f.backend = DiffBackend::Multiquadric;
          else throw ConfigError("key 'backend': expected fd or rbf, got '" + b + "'");
        }
        else if (key == "shape") { f.shape = parse_double(value, key); }
        else throw ConfigError("section [grid]: unknown key '" + key + "'");
      }
      if (!have_n) throw ConfigError("section [grid]: missing key 'n'");
    } else if (section == "time") {
      have_time = true;
      bool have_dt = false, have_tf = false;
      for (const auto& [key, value] : entries) {
        if (key == "dt") { f.dt = parse_double(value, key); have_dt = true; }
        else if (key == "t_final") { f.t_final = parse_double(value, key); have_tf = true; }
        else throw ConfigError("section [time]: unknown key '" + key + "'");
      }
      if (!have_dt) throw ConfigError("section [time]: missing key 'dt'");
      if (!have_tf) throw ConfigError("section [time]: missing key 't_final'");
    } else if (section == "control") {
      for (const auto& [key, value] : entries) {
        if (key == "mode") {
          const std::string m = trim(value);
          if (m == "open") f.mode = LoopMode::Open;
          else if (m == "closed") f.mode = LoopMode::Closed;
          else throw ConfigError("key 'mode': expected open or closed, got '" + m + "'");
        }
        else if (key == "kind") { f.kind = parse_controller_kind(value); }
        else if (key == "alpha_gain") { f.alpha_gain = parse_double(value, key); }
        else if (key == "alpha_exponent") { f.alpha_exponent = parse_double(value, key); }
        else if (key == "branch") {
          const std::string b = trim(value);
          if (b == "plus") f.branch = RootBranch::Plus;
          else if (b == "minus") f.branch = RootBranch::Minus;
          else throw ConfigError("key 'branch': expected plus or minus, got '" + b + "'");
        }
        else throw ConfigError("section [control]: unknown key '" + key + "'");
      }
    } else if (section == "ic") {
      for (const auto& [key, value] : entries) {
        if (key == "preset") {
          f.ic_preset = trim(value);
          f.ic_terms = ic_preset_terms(f.ic_preset);
          ic_preset_seen = true;
        } else if (key == "expression") {
          f.ic_terms = parse_ic_expression(value);
          ic_expression_seen = true;
        } else throw ConfigError("section [ic]: unknown key '" + key + "'");
      }
      if (ic_preset_seen && ic_expression_seen) {
        throw ConfigError("section [ic]: give either 'preset' or 'expression', not both");
      }
    } else if (section == "output") {
      for (const auto& [key, value] : entries) {
        if (key == "directory") { f.directory = trim(value); }
        else if (key == "snapshots") { f.snapshots = parse_int(value, key); }
        else if (key == "blowup_threshold") { f.blowup_threshold = parse_double(value, key); }
        else throw ConfigError("section [output]: unknown key '" + key + "'");
      }
    } else {
      throw ConfigError("unknown section [" + section + "]");
    }
  }

  if (!have_plant) throw ConfigError("missing required section [plant]");
  if (!have_grid) throw ConfigError("missing required section [grid]");
  if (!have_time) throw ConfigError("missing required section [time]");

  // Range validation; simulator validate() re-checks the plant/controller pairing.
  if (!(f.epsilon > 0.0)) throw ConfigError("key 'epsilon': must be positive");
  if (f.grid_n < 4) throw ConfigError("key 'n': must be at least 4");
  if (!(f.shape > 0.0)) throw ConfigError("key 'shape': must be positive");
  if (!(f.dt > 0.0)) throw ConfigError("key 'dt': must be positive");
  if (!(f.t_final >= f.dt)) throw ConfigError("key 't_final': must be >= dt");
  if (!(f.alpha_gain > 0.0)) throw ConfigError("key 'alpha_gain': must be positive");
  if (!(f.alpha_exponent >= 1.0)) throw ConfigError("key 'alpha_exponent': must be >= 1");
  if (f.snapshots < 2) throw ConfigError("key 'snapshots': must be at least 2");
  if (!(f.blowup_threshold > 0.0)) throw ConfigError("key 'blowup_threshold': must be positive");

  validate(to_sim_config(f));
  return f;
}

std::string render_config(const ExperimentFile& f) {
  std::ostringstream out;
  out << "[plant]\n";
  out << "epsilon = " << format_double(f.epsilon) << "\n";
  out << "convection = " << to_string(f.convection) << "\n";
  out << "reaction = " << render_reaction(f.reaction) << "\n";
  out << "\n[grid]\n";
  out << "n = " << f.grid_n << "\n";
  out << "backend = " << (f.backend == DiffBackend::FiniteDifference ? "fd" : "rbf") << "\n";
  out << "shape = " << format_double(f.shape) << "\n";
  out << "\n[time]\n";
  out << "dt = " << format_double(f.dt) << "\n";
  out << "t_final = " << format_double(f.t_final) << "\n";
  out << "\n[control]\n";
  out << "mode = " << (f.mode == LoopMode::Open ? "open" : "closed") << "\n";
  out << "kind = " << to_string(f.kind) << "\n";
  out << "alpha_gain = " << format_double(f.alpha_gain) << "\n";
  out << "alpha_exponent = " << format_double(f.alpha_exponent) << "\n";
  out << "branch = " << (f.branch == RootBranch::Plus ? "plus" : "minus") << "\n";
  out << "\n[ic]\n";
  if (!f.ic_preset.empty()) out << "preset = " << f.ic_preset << "\n";
  else out << "expression = " << render_ic_terms(f.ic_terms) << "\n";
  out << "\n[output]\n";
  out << "directory = " << f.directory << "\n";
  out << "snapshots = " << f.snapshots << "\n";
  out << "blowup_threshold = " << format_double(f.blowup_threshold) << "\n";
  return out.str();
}

std::function<double(double)> ic_function(const ExperimentFile& file) {
  const std::vector<IcTerm> terms = file.ic_terms;
  return [terms](double x) {
    double value = 0.0;
    for (const auto& term : terms) {
      switch (term.kind) {
        case IcTerm::Kind::Poly:
          value += term.amplitude * std::pow(x, term.param);
          break;
        case IcTerm::Kind::Cos:
          value += term.amplitude * std::cos(term.param * std::numbers::pi * x);
          break;
        case IcTerm::Kind::Sin:
          value += term.amplitude * std::sin(term.param * std::numbers::pi * x);
          break;
      }
    }
    return value;
  };
}

SimConfig to_sim_config(const ExperimentFile& f) {
  SimConfig config;
  config.epsilon = f.epsilon;
  config.reaction = f.reaction;
  config.convection = f.convection;
  config.grid_n = f.grid_n;
  config.dt = f.dt;
  config.t_final = f.t_final;
  config.loop = f.mode;
  config.blowup_threshold = f.blowup_threshold;
  config.snapshot_frames = f.snapshots;
  if (f.mode == LoopMode::Closed) {
    ControllerSpec spec;
    spec.kind = f.kind;
    spec.alpha = {f.alpha_gain, f.alpha_exponent};
    spec.epsilon = f.epsilon;
    spec.branch = f.branch;
    config.controller = spec;
  }
  return config;
}

namespace {

struct Preset {
  const char* name;
  const char* description;
  const char* text;
};

constexpr Preset kPresets[] = {
    {"blowup_s3",
     "superlinear-reaction plant that blows up open loop; closed loop applies the flow controller",
     R"([plant]
epsilon = 0.0002
convection = flow_negative
reaction = 0.01*u^3

[grid]
n = 500
backend = rbf
shape = 1e-09

[time]
dt = 0.0001
t_final = 5

[control]
mode = closed
kind = flow_negative
alpha_gain = 1
alpha_exponent = 1
branch = plus

[ic]
preset = s3

[output]
directory = out/blowup_s3
snapshots = 200
blowup_threshold = 1e+06
)"},
    {"s3_small",
     "unit-amplitude version of the blow-up profile on a stable explicit time step",
     R"([plant]
epsilon = 0.0002
convection = flow_negative
reaction = 0.01*u^3

[grid]
n = 200
backend = fd
shape = 1e-09

[time]
dt = 1e-05
t_final = 1

[control]
mode = closed
kind = flow_negative
alpha_gain = 1
alpha_exponent = 1
branch = plus

[ic]
preset = s3_unit

[output]
directory = out/s3_small
snapshots = 200
blowup_threshold = 1e+06
)"},
    {"zero_ic",
     "all-zero initial state; exercises the equilibrium and the CSV schema",
     R"([plant]
epsilon = 0.0002
convection = flow_negative
reaction = 0.01*u^3

[grid]
n = 8
backend = fd
shape = 1e-09

[time]
dt = 0.25
t_final = 2

[control]
mode = closed
kind = flow_negative
alpha_gain = 1
alpha_exponent = 1
branch = plus

[ic]
preset = zero

[output]
directory = out/zero_ic
snapshots = 8
blowup_threshold = 1e+06
)"},
};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.push_back(p.name);
  return names;
}

bool is_preset(const std::string& name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return true;
  }
  return false;
}

std::string preset_text(const std::string& name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return p.text;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

std::string preset_description(const std::string& name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return p.description;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace crdctl
