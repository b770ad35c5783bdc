#include "bosegas/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include "bosegas/charged.hpp"
#include "bosegas/errors.hpp"
#include "bosegas/homogeneous_bounds.hpp"
#include "bosegas/io.hpp"
#include "bosegas/lieb_liniger.hpp"
#include "bosegas/meanfield.hpp"
#include "bosegas/numerics.hpp"
#include "bosegas/onedim.hpp"
#include "bosegas/oracles.hpp"
#include "bosegas/scattering.hpp"
#include "bosegas/verify.hpp"

namespace bosegas::cli {

namespace {

constexpr const char* library_version = "bosegas 1.0.0";

using json = nlohmann::json;

json record(const RunConfig& cfg, json outputs, json provenance = json::object()) {
  json j;
  j["schema_version"] = io::schema_version;
  j["timestamp"] = io::utc_timestamp();
  j["command"] = cfg.subcommand;
  j["inputs"] = cfg.params;
  j["outputs"] = std::move(outputs);
  provenance["library"] = library_version;
  provenance["seed"] = cfg.seed;
  j["provenance"] = std::move(provenance);
  return j;
}

TrapPotential make_trap(const RunConfig& c) {
  const std::string kind = c.text("trap");
  if (kind == "power") return TrapPotential::power(c.real("s"));
  if (kind == "box") return TrapPotential::box(c.real("side"));
  return TrapPotential::harmonic();
}

json report_json(const EnergyReport& r) {
  return {{"E_total", r.E_total}, {"kinetic", r.kinetic}, {"trap", r.trap}, {"interaction", r.interaction},
          {"mu_chem", r.mu_chem}, {"residual_gp", r.residual_gp}, {"int_rho2", r.int_rho2}};
}

void write_profile(const std::string& path, const DensityProfile& p) {
  io::CsvTable t;
  t.header = {"r", "phi", "rho"};
  for (std::size_t i = 0; i < p.r.size(); ++i) t.rows.push_back({p.r[i], p.phi[i], p.rho[i]});
  io::write_csv(path, t);
}

json run_scatter(const RunConfig& c) {
  const int dim = static_cast<int>(c.integer("dim"));
  const std::string kind = c.text("potential");
  RadialPotential v;
  if (kind == "file") {
    v = load_potential(c.text("file"));
  } else if (kind == "soft_sphere") {
    v = RadialPotential::soft_sphere(c.real("R0"), c.real("v0"), dim);
  } else {
    v = RadialPotential::hard_core(c.real("R0"), dim);
  }
  GridSpec grid;
  grid.points = static_cast<std::size_t>(c.integer("points"));
  grid.extent_factor = c.real("extent");
  const double mu = c.real("mu");
  const auto sol = solve_zero_energy(v, mu, grid);
  json out = {{"a", sol.a}, {"dimension", sol.dimension}, {"R0", sol.R0}, {"richardson_error", sol.richardson_error}};
  if (sol.dimension == 3) {
    out["s"] = sol.s;
    json res = json::object();
    for (double f : {2.0, 4.0, 8.0})
      if (sol.a > 0 && f * sol.R0 <= sol.grid.back())
        res[io::fmt(f * sol.R0)] = energy_identity_residual(sol, v, f * sol.R0);
    out["identity_residual"] = res;
  }
  if (c.has("profile")) save_solution_csv(sol, c.text("profile"));
  return record(c, out, {{"grid_points", sol.grid.size()}, {"r_max", sol.grid.back()}});
}

std::vector<double> bounds_row(const RunConfig& c, double Y) {
  const int dim = static_cast<int>(c.integer("dim"));
  const double a = c.real("a"), mu = c.real("mu");
  const auto b = c.optional_real("b");
  if (dim == 2) {
    GasState2D s{Y / (a * a), a, mu};
    const auto bb = bounds_2d(s, b);
    return {Y, bb.lower, bb.leading, bb.upper};
  }
  GasState3D s{3 * Y / (4 * num::pi * a * a * a), a, mu};
  const auto R0 = c.optional_real("R0");
  const double up = upper_bound_3d(s, b, R0.has_value(), R0.value_or(0.0));
  return {Y, lower_bound_3d(s, c.real("C")).value, lhy_reference(s), up};
}

json run_bounds(const RunConfig& c, std::ostream& out) {
  const int dim = static_cast<int>(c.integer("dim"));
  const double a = c.real("a"), mu = c.real("mu");
  if (!c.sweep) {
    const double rho = c.real("rho");
    const auto b = c.optional_real("b");
    json o;
    const auto ls = length_scales(rho, a, dim);
    o["length_scales"] = {{"a", ls.a}, {"mean_spacing", ls.mean_spacing}, {"healing", ls.healing}, {"dilute", ls.dilute}};
    if (dim == 2) {
      const auto bb = bounds_2d({rho, a, mu}, b);
      o.update({{"rho_a2", rho * a * a}, {"lower", bb.lower}, {"leading", bb.leading}, {"upper", bb.upper},
                {"upper_error", bb.upper_error}, {"lower_error", bb.lower_error}, {"b", bb.b}});
    } else {
      GasState3D s{rho, a, mu};
      const auto lo = lower_bound_3d(s, c.real("C"));
      const auto R0 = c.optional_real("R0");
      o.update({{"Y", s.Y()}, {"lower", lo.value}, {"lower_raw", lo.raw}, {"lower_clamped", lo.clamped},
                {"lhy", lhy_reference(s)}, {"upper", upper_bound_3d(s, b, R0.has_value(), R0.value_or(0.0))},
                {"leading", 4 * num::pi * mu * rho * a}, {"dyson_constant", dyson_lower_constant()}});
    }
    return record(c, o);
  }
  const auto Ys = c.sweep->values();
  std::vector<std::vector<double>> rows(Ys.size());
  long long threads = c.integer("threads");
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<long long>(threads, static_cast<long long>(Ys.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex fail_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < Ys.size();) {
      try {
        rows[i] = bounds_row(c, Ys[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(fail_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (long long t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  io::CsvTable table;
  table.header = {"Y", "lower", dim == 2 ? "leading" : "lhy", "upper"};
  table.rows = std::move(rows);
  if (c.out.empty()) {
    out << io::to_csv(table);
    return nullptr;
  }
  io::write_csv(c.out, table);
  return nullptr;
}

json run_gp(const RunConfig& c) {
  GPProblem p;
  p.dimension = static_cast<int>(c.integer("dim"));
  p.N = c.real("N");
  p.coupling = c.real("a");
  p.mu = c.real("mu");
  p.trap = make_trap(c);
  p.grid_points = static_cast<std::size_t>(c.integer("points"));
  const auto r = gp_minimize(p);
  if (c.has("profile")) write_profile(c.text("profile"), r.profile);
  json o = report_json(r.report);
  o["E_per_particle"] = r.report.E_total / p.N;
  o["iterations"] = r.iterations;
  o["mass"] = r.profile.mass;
  return record(c, o, {{"grid_points", r.grid.size()}, {"r_max", r.grid.r.back()}, {"energy_scale", gp_energy_scale(p)}});
}

json run_tf(const RunConfig& c) {
  const int dim = static_cast<int>(c.integer("dim"));
  const auto r = tf_solve(dim, c.real("N"), c.real("a"), make_trap(c), c.real("mu"),
                          static_cast<std::size_t>(c.integer("points")));
  if (c.has("profile")) write_profile(c.text("profile"), r.profile);
  json o = report_json(r.report);
  o["mu_tf"] = r.mu_tf;
  return record(c, o, {{"profile_points", r.profile.r.size()}});
}

json run_ll(const RunConfig& c) {
  const int nodes = static_cast<int>(c.integer("nodes"));
  const double t_min = c.real("t_min"), t_max = c.real("t_max");
  const bool standard =
      nodes == LLCurve::default_nodes && t_min == LLCurve::default_t_min && t_max == LLCurve::default_t_max;
  LLCurve built;
  if (!standard) built = LLCurve::build(nodes, t_min, t_max);
  const LLCurve& curve = standard ? LLCurve::standard() : built;
  json o = {{"nodes", curve.t_nodes().size()}, {"t_min", curve.t_nodes().front()}, {"t_max", curve.t_nodes().back()}};
  if (c.has("t")) {
    const double t = c.real("t");
    o["t"] = t;
    o["e_curve"] = curve.e(t);
    o["de_curve"] = curve.de(t);
    o["e_direct"] = ll_energy_density(t);
  }
  if (c.has("emit-curve")) {
    curve.write_csv(c.text("emit-curve"));
    o["curve_file"] = c.text("emit-curve");
  }
  return record(c, o);
}

json run_regimes(const RunConfig& c) {
  ElongatedTrap trap;
  trap.N = c.real("N");
  trap.L = c.real("L");
  trap.r = c.real("r");
  trap.a = c.real("a");
  trap.s = c.real("s");
  trap.transverse = c.text("transverse") == "hard_wall" ? TransverseKind::hard_wall : TransverseKind::harmonic;
  RegimeThresholds th{c.real("much_less"), c.real("much_more")};
  const auto rep = regime_classify(trap, th, &LLCurve::standard());
  json o = {{"region", rep.region},       {"ambiguous", rep.ambiguous}, {"g", rep.g},
            {"rho_bar", rep.rho_bar},     {"ratio", rep.ratio},         {"ratio_scaled", rep.ratio_scaled},
            {"validity", rep.validity},   {"valid", rep.valid},         {"passes", rep.passes},
            {"functional", rep.functional}, {"scaling", rep.scaling},   {"warnings", rep.warnings}};
  if (rep.ambiguous) o["alternative"] = rep.alternative;
  return record(c, o);
}

json run_charged(const RunConfig& c) {
  const std::string mode = c.text("mode");
  const double mu = c.real("mu");
  json o = {{"mode", mode}};
  if (mode == "foldy") {
    const auto fc = foldy_constant(mu);
    const auto law = foldy_law(c.real("rho"), mu, c.optional_real("C_TF"), c.optional_real("C_D"));
    o.update({{"I0", fc.I0}, {"x_integral_quadrature", fc.x_integral_quadrature},
              {"x_integral_closed", fc.x_integral_closed}, {"energy_per_particle", law.energy_per_particle},
              {"exponent", law.exponent}, {"infinite_mass_note", law.infinite_mass_note}});
    if (law.jellium) o["jellium"] = *law.jellium;
  } else if (mode == "dyson") {
    const auto& d = dyson_functional_minimize(mu, static_cast<std::size_t>(c.integer("points")));
    const double N = c.real("N");
    const auto two = two_component_energy(N, mu);
    const auto heur = dyson_heuristic(N);
    o.update({{"E_star", d.E_star}, {"kinetic", d.kinetic}, {"potential", d.potential},
              {"virial_residual", d.virial_residual}, {"r_max", d.r_max}, {"boundary_mass", d.boundary_mass},
              {"iterations", d.iterations}, {"two_component_energy", two.energy}, {"exponent", two.exponent},
              {"length_scale", two.L}, {"correlation_length", two.ell_cor},
              {"heuristic_L", heur.L}, {"heuristic_energy", heur.energy}});
    if (c.has("profile")) {
      io::CsvTable t;
      t.header = {"r", "Phi"};
      for (std::size_t i = 0; i < d.r.size(); ++i) t.rows.push_back({d.r[i], d.Phi[i]});
      io::write_csv(c.text("profile"), t);
    }
  } else if (mode == "bogolubov") {
    BogolubovParams p{c.real("A"), c.real("B_plus"), c.real("B_minus")};
    o["bound"] = bogolubov_bound(p);
    if (const auto cut = c.integer("cutoff"); cut > 0) {
      const auto f = fock_quadratic_ground(p.A, p.B_plus, p.B_minus, static_cast<int>(cut));
      o["fock"] = {{"E0", f.E0}, {"modes", f.modes}, {"cutoff", f.cutoff}, {"dimension", f.dimension},
                   {"gap", f.E0 - o["bound"].get<double>()}};
    }
  } else {
    const auto le = local_energy_integral(c.real("nu"), c.real("ell"), mu);
    o.update({{"quadrature", le.quadrature}, {"closed_form", le.closed_form}});
  }
  return record(c, o);
}

json dispatch(const RunConfig& c, std::ostream& out) {
  const auto& s = c.subcommand;
  if (s == "scatter") return run_scatter(c);
  if (s == "bounds") return run_bounds(c, out);
  if (s == "gp") return run_gp(c);
  if (s == "tf") return run_tf(c);
  if (s == "ll") return run_ll(c);
  if (s == "regimes") return run_regimes(c);
  if (s == "charged") return run_charged(c);
  throw ConfigError("unknown subcommand '" + s + "'");
}

struct Options {
  std::map<std::string, std::map<std::string, std::string>> values;  // command -> key -> raw text
};

void add_param_options(CLI::App* app, const CommandSpec& spec, std::map<std::string, std::string>& store,
                       bool skip_mode) {
  for (const auto& p : spec.params) {
    if (skip_mode && p.key == "mode") continue;
    std::string help = p.help;
    if (!p.fallback.empty()) help += " [default " + p.fallback + "]";
    app->add_option("--" + p.key, store[p.key], help);
  }
}

int emit(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) out << io::dump_json(j);
  else io::write_json(path, j);
  return ok;
}

int run_validate(const std::string& path, std::ostream& out) {
  const ConfigFile cfg = load_config_file(path);
  const auto diags = validate_config(cfg);
  json resolved = json::object();
  if (cfg.empty() || (cfg.size() == 1 && cfg.count("run"))) {
    for (const auto& spec : command_specs())
      if (!spec.params.empty()) resolved[spec.name] = default_section(spec.name);
  }
  for (const auto& [name, sec] : cfg) {
    if (name == "run") {
      resolved["run"] = sec;
      continue;
    }
    const auto& specs = command_specs();
    if (std::none_of(specs.begin(), specs.end(), [&](const CommandSpec& c) { return c.name == name; })) continue;
    Section merged = default_section(name);
    for (const auto& [k, v] : sec) merged[k] = v;
    resolved[name] = merged;
  }
  bool errors = false;
  json list = json::array();
  for (const auto& d : diags) {
    errors |= d.error;
    list.push_back({{"field", d.field}, {"message", d.message}, {"severity", d.error ? "error" : "warning"}});
  }
  out << io::dump_json({{"schema_version", io::schema_version}, {"file", path}, {"clean", !errors},
                        {"diagnostics", list}, {"resolved", resolved}});
  return errors ? config_error : ok;
}

}  // namespace

json execute(const RunConfig& cfg, std::ostream& out) {
  throw_on_errors(validate_section(cfg.subcommand, cfg.params));
  return dispatch(cfg, out);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dilute and charged Bose gas calculator"};
  app.set_version_flag("--version", library_version);
  std::string config_path, out_path;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "sectioned key = value configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "seed for random corpora");
  app.add_option("--out", out_path, "output file (JSON, or CSV for sweeps)");
  app.require_subcommand(0, 1);
  app.fallthrough();

  Options opts;
  std::map<std::string, CLI::App*> subs;
  for (const auto& spec : command_specs()) {
    if (spec.name == "charged") {
      auto* charged = app.add_subcommand("charged", spec.help);
      charged->require_subcommand(1);
      subs["charged"] = charged;
      for (const char* mode : {"foldy", "dyson", "bogolubov", "local"}) {
        auto* m = charged->add_subcommand(mode, std::string("charged gas: ") + mode);
        add_param_options(m, spec, opts.values[std::string("charged.") + mode], true);
      }
      continue;
    }
    auto* sub = app.add_subcommand(spec.name, spec.help);
    add_param_options(sub, spec, opts.values[spec.name], false);
    subs[spec.name] = sub;
  }
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a configuration file without running it");
  validate->add_option("file", validate_path, "configuration file")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForVersion&) {
    out << library_version << "\n";
    return ok;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return ok;
    }
    err << "error: " << e.what() << "\n";
    return config_error;
  }

  try {
    if (validate->parsed()) return run_validate(validate_path, out);

    ConfigFile file;
    if (!config_path.empty()) {
      file = load_config_file(config_path);
      throw_on_errors(validate_config(file));
    }
    RunConfig cfg;
    const Section run_sec = file.count("run") ? file.at("run") : Section{};
    if (run_sec.count("schema_version")) cfg.schema_version = run_sec.at("schema_version");
    if (run_sec.count("seed")) cfg.seed = std::stoull(run_sec.at("seed"));
    if (run_sec.count("out")) cfg.out = run_sec.at("out");
    if (seed_opt->count()) cfg.seed = seed;
    if (!out_path.empty()) cfg.out = out_path;

    std::string mode;
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) cfg.subcommand = name;
    if (cfg.subcommand == "charged") {
      for (auto* m : subs["charged"]->get_subcommands())
        if (m->parsed()) mode = m->get_name();
    }
    if (cfg.subcommand.empty()) {
      if (!run_sec.count("subcommand")) {
        out << app.help();
        return config_error;
      }
      cfg.subcommand = run_sec.at("subcommand");
    }

    if (cfg.subcommand == "verify") {
      const Scorecard sc = run_verify(cfg.seed);
      emit(sc.to_json(), cfg.out, out);
      for (const auto& ch : sc.checks)
        if (!ch.pass) err << "FAIL " << ch.id << ": " << io::fmt(ch.value) << "\n";
      return sc.all_pass() ? ok : numeric_failure;
    }

    cfg.params = default_section(cfg.subcommand);
    if (file.count(cfg.subcommand))
      for (const auto& [k, v] : file.at(cfg.subcommand)) cfg.params[k] = v;
    const std::string store_key = cfg.subcommand == "charged" && !mode.empty() ? "charged." + mode : cfg.subcommand;
    if (opts.values.count(store_key)) {
      auto* sub = cfg.subcommand == "charged" && !mode.empty() ? subs["charged"]->get_subcommand(mode)
                                                                : subs[cfg.subcommand];
      for (const auto& [k, v] : opts.values.at(store_key))
        if (sub->count("--" + k)) cfg.params[k] = v;
    }
    if (!mode.empty()) cfg.params["mode"] = mode;
    if (cfg.params.count("sweep") && !cfg.params.at("sweep").empty())
      cfg.sweep = parse_sweep(cfg.params.at("sweep"), cfg.subcommand + ".sweep");
    for (const auto& d : validate_section(cfg.subcommand, cfg.params))
      if (!d.error) err << format_diagnostic(d) << "\n";

    const json result = execute(cfg, out);
    if (!result.is_null()) emit(result, cfg.out, out);
    return ok;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return config_error;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return io_error;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return numeric_failure;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return numeric_failure;
  }
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace bosegas::cli
