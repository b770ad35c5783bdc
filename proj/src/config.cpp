#include "bosegas/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bosegas/errors.hpp"
#include "bosegas/io.hpp"

namespace bosegas::cli {

namespace {

using PT = ParamType;
using C = Constraint;

std::vector<CommandSpec> build_specs() {
  std::vector<CommandSpec> s;
  s.push_back({"scatter",
               "zero-energy scattering solution and scattering length",
               {{"potential", PT::text, "hard_core", C::none, {"hard_core", "soft_sphere", "file"}, "potential family"},
                {"dim", PT::integer, "3", C::positive, {}, "dimension (2 or 3)"},
                {"R0", PT::real, "1", C::positive, {}, "range of the potential"},
                {"v0", PT::real, "1", C::nonnegative, {}, "soft-sphere height"},
                {"mu", PT::real, "1", C::positive, {}, "kinetic prefactor"},
                {"points", PT::integer, "4096", C::at_least_one, {}, "radial grid points"},
                {"extent", PT::real, "8", C::positive, {}, "outer radius in units of R0"},
                {"file", PT::text, "", C::none, {}, "tabulated potential (two columns)"},
                {"profile", PT::text, "", C::none, {}, "CSV path for the radial solution"}}});
  s.push_back({"bounds",
               "homogeneous-gas energy bounds per particle",
               {{"dim", PT::integer, "3", C::positive, {}, "dimension (2 or 3)"},
                {"rho", PT::real, "1e-6", C::positive, {}, "density"},
                {"a", PT::real, "1", C::positive, {}, "scattering length"},
                {"mu", PT::real, "1", C::positive, {}, "kinetic prefactor"},
                {"b", PT::real, "", C::positive, {}, "cell radius of the trial state (optional)"},
                {"R0", PT::real, "", C::positive, {}, "potential range, enables the finite-range form"},
                {"C", PT::real, "8.9", C::nonnegative, {}, "constant of the 3D lower bound"},
                {"sweep", PT::text, "", C::none, {}, "Y=lo:hi:n[:lin|:log]"},
                {"threads", PT::integer, "0", C::nonnegative, {}, "sweep workers (0: hardware)"}}});
  const std::vector<std::string> traps = {"harmonic", "power", "box"};
  s.push_back({"gp",
               "Gross-Pitaevskii minimisation in a radial trap",
               {{"dim", PT::integer, "3", C::positive, {}, "dimension (2 or 3)"},
                {"N", PT::real, "1", C::positive, {}, "particle number"},
                {"a", PT::real, "0", C::nonnegative, {}, "coupling (a in 3D, alpha in 2D)"},
                {"mu", PT::real, "1", C::positive, {}, "kinetic prefactor"},
                {"trap", PT::text, "harmonic", C::none, traps, "trap family"},
                {"s", PT::real, "2", C::positive, {}, "power-trap exponent"},
                {"side", PT::real, "1", C::positive, {}, "box diameter"},
                {"points", PT::integer, "4000", C::at_least_one, {}, "minimum radial cells"},
                {"profile", PT::text, "", C::none, {}, "CSV path for (r, phi, rho)"}}});
  s.push_back({"tf",
               "Thomas-Fermi minimiser in a radial trap",
               {{"dim", PT::integer, "3", C::positive, {}, "dimension (2 or 3)"},
                {"N", PT::real, "1", C::positive, {}, "particle number"},
                {"a", PT::real, "1", C::positive, {}, "coupling"},
                {"mu", PT::real, "1", C::positive, {}, "kinetic prefactor"},
                {"trap", PT::text, "harmonic", C::none, traps, "trap family"},
                {"s", PT::real, "2", C::positive, {}, "power-trap exponent"},
                {"side", PT::real, "1", C::positive, {}, "box diameter"},
                {"points", PT::integer, "2001", C::at_least_one, {}, "profile samples"},
                {"profile", PT::text, "", C::none, {}, "CSV path for (r, phi, rho)"}}});
  s.push_back({"ll",
               "Lieb-Liniger energy density e(t)",
               {{"t", PT::real, "", C::positive, {}, "evaluate e at this t (optional)"},
                {"nodes", PT::integer, "200", C::at_least_one, {}, "curve nodes"},
                {"t_min", PT::real, "1e-4", C::positive, {}, "smallest tabulated t"},
                {"t_max", PT::real, "1e6", C::positive, {}, "largest tabulated t"},
                {"emit-curve", PT::text, "", C::none, {}, "CSV path for the tabulated curve"}}});
  s.push_back({"regimes",
               "1D regime classification of an elongated trap",
               {{"N", PT::real, "100", C::positive, {}, "particle number"},
                {"L", PT::real, "1", C::positive, {}, "longitudinal length"},
                {"r", PT::real, "1e-3", C::positive, {}, "transverse length"},
                {"a", PT::real, "1e-6", C::positive, {}, "scattering length"},
                {"s", PT::real, "2", C::positive, {}, "longitudinal exponent (inf: box)"},
                {"transverse", PT::text, "harmonic", C::none, {"harmonic", "hard_wall"}, "transverse confinement"},
                {"much_less", PT::real, "1e-2", C::positive, {}, "threshold for <<"},
                {"much_more", PT::real, "1e2", C::positive, {}, "threshold for >>"}}});
  s.push_back({"charged",
               "charged Bose gas: Foldy law, Dyson functional, Bogolubov bound, local energy",
               {{"mode", PT::text, "foldy", C::none, {"foldy", "dyson", "bogolubov", "local"}, "computation"},
                {"rho", PT::real, "1", C::positive, {}, "density (foldy)"},
                {"mu", PT::real, "1", C::positive, {}, "kinetic prefactor"},
                {"C_TF", PT::real, "", C::nonnegative, {}, "jellium kinetic constant (foldy)"},
                {"C_D", PT::real, "", C::nonnegative, {}, "jellium exchange constant (foldy)"},
                {"N", PT::real, "1000", C::positive, {}, "particle number (dyson)"},
                {"points", PT::integer, "2048", C::at_least_one, {}, "radial grid points (dyson)"},
                {"A", PT::real, "1", C::nonnegative, {}, "diagonal coefficient (bogolubov)"},
                {"B_plus", PT::real, "0.5", C::nonnegative, {}, "pairing coefficient (bogolubov)"},
                {"B_minus", PT::real, "0", C::nonnegative, {}, "second pairing coefficient (bogolubov)"},
                {"cutoff", PT::integer, "0", C::nonnegative, {}, "truncated-Fock check at this cutoff (bogolubov)"},
                {"nu", PT::real, "1", C::positive, {}, "local density (local)"},
                {"ell", PT::real, "1", C::positive, {}, "local length (local)"},
                {"profile", PT::text, "", C::none, {}, "CSV path for the Dyson profile"}}});
  s.push_back({"verify", "full oracle suite with a JSON scorecard", {}});
  return s;
}

bool parse_real(const std::string& v, double& out) {
  std::istringstream is(v);
  is >> out;
  if (is.fail()) {
    if (v == "inf" || v == "+inf" || v == "infinity") {
      out = INFINITY;
      return true;
    }
    return false;
  }
  is >> std::ws;
  return is.eof() && !std::isnan(out);
}

bool parse_integer(const std::string& v, long long& out) {
  std::istringstream is(v);
  is >> out;
  if (is.fail()) return false;
  is >> std::ws;
  return is.eof();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const std::vector<std::string> run_keys = {"subcommand", "seed", "out", "schema_version"};

}  // namespace

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = build_specs();
  return specs;
}

const CommandSpec& command_spec(const std::string& name) {
  for (const auto& c : command_specs())
    if (c.name == name) return c;
  throw ConfigError("unknown subcommand '" + name + "'");
}

std::vector<double> Sweep::values() const {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out[i] = log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo);
  }
  if (n > 1) {
    out.front() = lo;
    out.back() = hi;
  }
  return out;
}

Sweep parse_sweep(const std::string& text, const std::string& field) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(field + ": expected var=lo:hi:n[:lin|:log]");
  Sweep s;
  s.var = trim(text.substr(0, eq));
  std::vector<std::string> parts;
  std::stringstream ss(text.substr(eq + 1));
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(trim(p));
  if (parts.size() < 3 || parts.size() > 4) throw ConfigError(field + ": expected var=lo:hi:n[:lin|:log]");
  long long n = 0;
  if (!parse_real(parts[0], s.lo) || !std::isfinite(s.lo)) throw ConfigError(field + ": lower end is not a number");
  if (!parse_real(parts[1], s.hi) || !std::isfinite(s.hi)) throw ConfigError(field + ": upper end is not a number");
  if (!parse_integer(parts[2], n) || n < 1) throw ConfigError(field + ": point count must be a positive integer");
  s.n = static_cast<int>(n);
  if (parts.size() == 4) {
    if (parts[3] == "lin") s.log = false;
    else if (parts[3] == "log") s.log = true;
    else throw ConfigError(field + ": spacing must be 'lin' or 'log'");
  }
  if (!(s.lo <= s.hi)) throw ConfigError(field + ": sweep bounds must satisfy lo <= hi");
  if (s.log && !(s.lo > 0)) throw ConfigError(field + ": log spacing needs lo > 0");
  return s;
}

ConfigFile load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  // '#' comments are accepted in addition to the ';' comments of the INI reader.
  std::stringstream filtered;
  for (std::string line; std::getline(in, line);) {
    const std::string t = trim(line);
    filtered << (t.empty() || t[0] == '#' ? std::string() : line) << '\n';
  }
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(filtered, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(path + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  ConfigFile cfg;
  for (const auto& [name, sec] : tree) {
    if (sec.empty() && !sec.data().empty()) throw ConfigError(name + ": key outside of a section");
    auto& out = cfg[name];
    for (const auto& [key, val] : sec) out[key] = trim(val.data());
  }
  return cfg;
}

std::string format_diagnostic(const Diagnostic& d) {
  return std::string(d.error ? "error: " : "warning: ") + d.field + ": " + d.message;
}

void throw_on_errors(const std::vector<Diagnostic>& diags) {
  std::string msg;
  for (const auto& d : diags)
    if (d.error) msg += (msg.empty() ? "" : "\n") + d.field + ": " + d.message;
  if (!msg.empty()) throw ConfigError(msg);
}

Section default_section(const std::string& command) {
  Section s;
  for (const auto& p : command_spec(command).params)
    if (!p.fallback.empty()) s[p.key] = p.fallback;
  return s;
}

std::vector<Diagnostic> validate_section(const std::string& section, const Section& values) {
  std::vector<Diagnostic> d;
  const CommandSpec& spec = command_spec(section);
  auto field = [&](const std::string& k) { return section + "." + k; };
  std::map<std::string, double> num;

  for (const auto& [key, val] : values) {
    auto it = std::find_if(spec.params.begin(), spec.params.end(), [&](const ParamSpec& p) { return p.key == key; });
    if (it == spec.params.end()) {
      d.push_back({field(key), "unknown parameter"});
      continue;
    }
    const ParamSpec& p = *it;
    if (p.type == PT::text) {
      if (!p.choices.empty() && std::find(p.choices.begin(), p.choices.end(), val) == p.choices.end()) {
        std::string allowed;
        for (const auto& c : p.choices) allowed += (allowed.empty() ? "" : ", ") + c;
        d.push_back({field(key), "'" + val + "' is not one of {" + allowed + "}"});
      }
      continue;
    }
    double x = 0;
    if (p.type == PT::integer) {
      long long i = 0;
      if (!parse_integer(val, i)) {
        d.push_back({field(key), "'" + val + "' is not an integer"});
        continue;
      }
      x = static_cast<double>(i);
    } else if (!parse_real(val, x)) {
      d.push_back({field(key), "'" + val + "' is not a number"});
      continue;
    }
    if (std::isinf(x) && !(section == "regimes" && key == "s")) {
      d.push_back({field(key), "must be finite"});
      continue;
    }
    num[key] = x;
    switch (p.constraint) {
      case C::positive:
        if (!(x > 0)) d.push_back({field(key), "must be positive (got " + val + ")"});
        break;
      case C::nonnegative:
        if (!(x >= 0)) d.push_back({field(key), "must be nonnegative (got " + val + ")"});
        break;
      case C::at_least_one:
        if (!(x >= 1)) d.push_back({field(key), "must be at least 1 (got " + val + ")"});
        break;
      case C::none:
        break;
    }
  }

  auto has = [&](const std::string& k) { return num.count(k) > 0; };
  if (has("dim") && section != "regimes" && num["dim"] != 2 && num["dim"] != 3)
    d.push_back({field("dim"), "must be 2 or 3"});

  if (section == "bounds") {
    if (has("b") && has("a") && !(num["b"] > num["a"]))
      d.push_back({field("b"), "the upper bound requires b > a"});
    if (has("b") && has("R0") && !(num["b"] > num["R0"]))
      d.push_back({field("b"), "the finite-range upper bound requires b > R0"});
    if (has("R0") && has("a") && num["R0"] < num["a"])
      d.push_back({field("R0"), "a potential of range R0 has scattering length at most R0"});
    if (values.count("sweep") && !values.at("sweep").empty()) {
      try {
        const Sweep s = parse_sweep(values.at("sweep"), field("sweep"));
        if (s.var != "Y") d.push_back({field("sweep"), "sweep variable must be Y"});
        else if (!(s.lo > 0)) d.push_back({field("sweep"), "Y must be positive"});
      } catch (const ConfigError& e) {
        d.push_back({field("sweep"), std::string(e.what()).substr(field("sweep").size() + 2)});
      }
    }
  }
  if (section == "scatter") {
    const std::string pot = values.count("potential") ? values.at("potential") : "hard_core";
    if (pot == "file" && (!values.count("file") || values.at("file").empty()))
      d.push_back({field("file"), "a tabulated potential needs a file"});
    if (has("extent") && num["extent"] < 4) d.push_back({field("extent"), "must be at least 4"});
  }
  if (section == "gp" || section == "tf") {
    if (section == "gp" && has("dim") && num["dim"] == 2 && has("a") && num["a"] > 0)
      d.push_back({field("a"), "in 2D the coupling is alpha (rho_bar-dependent); interpreted as alpha", false});
  }
  if (section == "ll" && has("t_min") && has("t_max") && !(num["t_min"] < num["t_max"]))
    d.push_back({field("t_max"), "must exceed t_min"});
  if (section == "regimes") {
    if (has("a") && has("r") && !(num["a"] < num["r"]))
      d.push_back({field("a"), "expected a < r for an elongated trap", false});
    if (has("r") && has("L") && !(num["r"] < num["L"]))
      d.push_back({field("r"), "expected r < L for an elongated trap", false});
    if (has("much_less") && has("much_more") && !(num["much_less"] < 1 && 1 < num["much_more"]))
      d.push_back({field("much_less"), "thresholds must satisfy much_less < 1 < much_more"});
  }
  if (section == "charged" && (values.count("C_TF") > 0) != (values.count("C_D") > 0))
    d.push_back({field(values.count("C_TF") ? "C_D" : "C_TF"), "the jellium form needs both C_TF and C_D"});
  return d;
}

std::vector<Diagnostic> validate_config(const ConfigFile& cfg) {
  std::vector<Diagnostic> d;
  for (const auto& [name, sec] : cfg) {
    if (name == "run") {
      for (const auto& [key, val] : sec) {
        if (std::find(run_keys.begin(), run_keys.end(), key) == run_keys.end()) {
          d.push_back({"run." + key, "unknown parameter"});
        } else if (key == "seed") {
          long long s = 0;
          if (!parse_integer(val, s) || s < 0) d.push_back({"run.seed", "must be a nonnegative integer"});
        } else if (key == "schema_version") {
          if (io::parse_major(val) != io::schema_major)
            d.push_back({"run.schema_version", "unsupported schema major in '" + val + "'"});
        } else if (key == "subcommand") {
          const auto& specs = command_specs();
          if (std::none_of(specs.begin(), specs.end(), [&](const CommandSpec& c) { return c.name == val; }))
            d.push_back({"run.subcommand", "unknown subcommand '" + val + "'"});
        }
      }
      continue;
    }
    const auto& specs = command_specs();
    if (std::none_of(specs.begin(), specs.end(), [&](const CommandSpec& c) { return c.name == name; })) {
      d.push_back({name, "unknown section"});
      continue;
    }
    auto sd = validate_section(name, sec);
    d.insert(d.end(), sd.begin(), sd.end());
  }
  return d;
}

bool RunConfig::has(const std::string& key) const {
  auto it = params.find(key);
  return it != params.end() && !it->second.empty();
}

double RunConfig::real(const std::string& key) const {
  double x = 0;
  if (!has(key) || !parse_real(params.at(key), x)) throw ConfigError(subcommand + "." + key + ": missing or not a number");
  return x;
}

long long RunConfig::integer(const std::string& key) const {
  long long x = 0;
  if (!has(key) || !parse_integer(params.at(key), x)) throw ConfigError(subcommand + "." + key + ": missing or not an integer");
  return x;
}

std::string RunConfig::text(const std::string& key) const { return has(key) ? params.at(key) : std::string(); }

std::optional<double> RunConfig::optional_real(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return real(key);
}

}  // namespace bosegas::cli
