#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <random>
#include <sstream>

#include "checks.hpp"
#include "so12/coherent.hpp"
#include "so12/errors.hpp"
#include "so12/interference.hpp"
#include "so12/phase_dist.hpp"

namespace so12::cli {

using nlohmann::ordered_json;

namespace {

const double nan = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double x) {
  if (std::isnan(x)) return "";
  if (x == 0) x = 0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ordered_json jnum(double x) { return std::isnan(x) ? ordered_json(nullptr) : ordered_json(x == 0 ? 0.0 : x); }
ordered_json jcplx(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

void write_csv(std::ostream& os, const Table& t) {
  for (size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << t.columns[j];
  os << "\n";
  for (const auto& r : t.rows) {
    for (size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << fmt17(r[j]);
    os << "\n";
  }
}

ordered_json table_json(const Table& t) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : t.rows) {
    ordered_json row = ordered_json::array();
    for (double x : r) row.push_back(jnum(x));
    rows.push_back(row);
  }
  return {{"columns", t.columns}, {"rows", rows}};
}

ordered_json header(const std::string& command, const RunConfig& cfg) {
  return {{"schema", kSchema}, {"command", command}, {"k", cfg.k}, {"cutoff", cfg.cutoff}, {"seed", cfg.seed}};
}

// writes either the CSV table or meta + table as JSON
void emit(std::ostream& os, const RunConfig& cfg, ordered_json meta, const Table& t) {
  if (cfg.format == "csv") {
    write_csv(os, t);
    return;
  }
  const ordered_json body = table_json(t);
  for (auto& [key, val] : body.items()) meta[key] = val;
  os << meta.dump(2) << "\n";
}

std::vector<double> bg_row(double k, cplx z) {
  auto e = bg_expectations(k, z);
  return {std::abs(z), std::arg(z), e.K0, e.var_K0, e.Nbar, e.var_N, e.R.value_or(nan), e.Q.value_or(nan),
          e.K1, e.K2, e.var_K1, e.var_K2};
}

std::vector<double> perelomov_row(double k, cplx l) {
  auto e = perelomov_expectations(k, l);
  return {std::abs(l), std::arg(l), e.K0, e.var_K0, e.Nbar, e.var_N, e.R, e.Q.value_or(nan),
          e.K1, e.K2, e.var_K1, e.var_K2};
}

std::vector<double> sg_row(double k, cplx a) {
  auto e = sg_expectations(k, a);
  return {std::abs(a), std::arg(a), e.K0, e.var_K0, e.K1, e.K2, e.var_K1, e.var_K2, e.h1, e.h2, e.h};
}

StateVector family_state(const std::string& family, double k, cplx p, int cutoff) {
  if (family == "bg") return bg_amplitudes({k, p}, cutoff);
  if (family == "perelomov") return perelomov_amplitudes(PerelomovState::from_lambda(k, p), cutoff);
  return sg_amplitudes({k, p}, cutoff);
}

int cmd_verify(const RunConfig& cfg, std::ostream& os) {
  ordered_json items = ordered_json::array();
  bool all = true;
  for (const auto& crit : acceptance_suite()) {
    for (const auto& c : crit.checks) {
      const double tol = c.mode == Compare::below ? nan : std::min(c.tol, cfg.tol);
      const bool ok = c.pass(cfg.tol);
      all = all && ok;
      items.push_back({{"criterion", crit.id},
                       {"title", crit.title},
                       {"check", c.name},
                       {"computed", jnum(c.computed)},
                       {"expected", jnum(c.expected)},
                       {"tolerance", jnum(tol)},
                       {"comparison", c.mode == Compare::abs ? "abs" : c.mode == Compare::rel ? "rel" : "below"},
                       {"delta", jnum(c.delta())},
                       {"pass", ok},
                       {"note", c.note}});
    }
  }
  if (cfg.format == "csv") {
    os << "criterion,check,computed,expected,tolerance,delta,status\n";
    for (const auto& it : items)
      os << it["criterion"].get<int>() << ",\"" << it["check"].get<std::string>() << "\","
         << fmt17(it["computed"].is_null() ? nan : it["computed"].get<double>()) << ","
         << fmt17(it["expected"].is_null() ? nan : it["expected"].get<double>()) << ","
         << fmt17(it["tolerance"].is_null() ? nan : it["tolerance"].get<double>()) << ","
         << fmt17(it["delta"].is_null() ? nan : it["delta"].get<double>()) << ","
         << (it["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
  } else {
    ordered_json j = header("verify", cfg);
    j["tol_cap"] = cfg.tol;
    j["checks"] = items;
    j["all_pass"] = all;
    os << j.dump(2) << "\n";
  }
  return all ? 0 : 1;
}

void cmd_table(const RunConfig& cfg, std::ostream& os, const std::string& family, const std::string& sweep,
               double phase) {
  const auto moduli = parse_sweep(sweep);
  ordered_json meta = header("table", cfg);
  meta["family"] = family;
  meta["phase"] = phase;
  emit(os, cfg, meta, family_table(family, cfg.k, moduli, phase));
}

void cmd_states(const RunConfig& cfg, std::ostream& os, const std::string& family, cplx p, bool fixed_cutoff) {
  StateVector v = family_state(family, cfg.k, p, fixed_cutoff ? cfg.cutoff : 0);
  if (cfg.format == "csv") {
    Table t{{"n", "re_c", "im_c"}, {}};
    for (int n = 0; n < v.cutoff(); ++n) t.rows.push_back({double(n), v.coeffs(n).real(), v.coeffs(n).imag()});
    write_csv(os, t);
    return;
  }
  ordered_json j = header("states", cfg);
  j["cutoff"] = v.cutoff();
  j["family"] = family;
  j["parameter"] = jcplx(p);
  j["tail_norm"] = v.tail_norm;
  ordered_json c = ordered_json::array();
  for (int n = 0; n < v.cutoff(); ++n) c.push_back(jcplx(v.coeffs(n)));
  j["coeffs"] = c;
  os << j.dump(2) << "\n";
}

void cmd_dist(const RunConfig& cfg, std::ostream& os, const std::string& kind, const std::string& state, double a,
              cplx p, int grid, double extent) {
  if (grid < 1) throw ConfigError("dist: grid must be >= 1");
  const HusimiKind hk = kind == "S" ? HusimiKind::S : kind == "T" ? HusimiKind::T : HusimiKind::Q;
  if (hk == HusimiKind::T && !(extent * std::sqrt(2.0) < 1))
    throw ConfigError("dist: T lives on the unit disc, need extent < 1/sqrt 2");
  DensityOperator rho = state == "thermal" ? thermal_state(cfg.k, a, cfg.cutoff)
                                           : DensityOperator::pure(family_state(state, cfg.k, p, 0));
  auto pts = husimi_grid(hk, rho, -extent, extent, -extent, extent, grid, grid, Exec::parallel);
  Table t{{"re", "im", kind}, {}};
  for (const auto& g : pts) t.rows.push_back({g.re, g.im, g.value});
  ordered_json meta = header("dist", cfg);
  meta["kind"] = kind;
  meta["state"] = state;
  if (state == "thermal") meta["a"] = a;
  else meta["parameter"] = jcplx(p);
  meta["grid"] = grid;
  meta["extent"] = extent;
  emit(os, cfg, meta, t);
}

void cmd_interfere(const RunConfig& cfg, std::ostream& os, const std::string& scenario, cplx p, int d) {
  TwoModeState s;
  if (scenario == "vacuum") {
    s = TwoModeState::basis(cfg.cutoff, 0, 0);
  } else if (scenario == "bg") {
    s = TwoModeState::from_sector(d, bg_amplitudes({0.5 + std::abs(d) / 2.0, p}), 0);
  } else if (scenario == "perelomov") {
    s = TwoModeState::from_sector(d, perelomov_amplitudes(PerelomovState::from_lambda(0.5 + std::abs(d) / 2.0, p)), 0);
  } else {
    // random state on the truncated two-mode space, reproducible from the seed
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> g;
    s.n_per_mode = cfg.cutoff;
    s.coeffs = Vec(cfg.cutoff * cfg.cutoff);
    for (int i = 0; i < s.coeffs.size(); ++i) {
      const double re = g(rng), im = g(rng);
      s.coeffs(i) = cplx(re, im);
    }
    s.coeffs.normalize();
  }
  HomodyneEstimates h = homodyne_estimators(s);
  Table t{{"d", "k", "weight", "deficit"}, {}};
  for (const auto& sec : h.sectors) t.rows.push_back({double(sec.d), sec.k, sec.weight, sec.deficit});
  const std::vector<std::pair<std::string, double>> est = {
      {"K1", h.K1_est},     {"K2", h.K2_est},   {"K1_sq", h.K1sq_est}, {"K2_sq", h.K2sq_est},
      {"K0_sq", h.K0sq},    {"deficit", h.pythagoras_deficit},        {"J1", h.J1_est},
      {"J2", h.J2_est}};
  if (cfg.format == "csv") {
    os << "estimator,value\n";
    for (const auto& [name, v] : est) os << name << "," << fmt17(v) << "\n";
    os << "\n";
    write_csv(os, t);
    return;
  }
  ordered_json meta = header("interfere", cfg);
  meta["scenario"] = scenario;
  if (scenario == "bg" || scenario == "perelomov") {
    meta["parameter"] = jcplx(p);
    meta["sector"] = d;
  }
  ordered_json e;
  for (const auto& [name, v] : est) e[name] = v;
  meta["estimators"] = e;
  meta["sectors"] = table_json(t);
  os << meta.dump(2) << "\n";
}

}  // namespace

void RunConfig::validate() const {
  if (!(k > 0) || !std::isfinite(k)) throw ConfigError("k must be positive");
  if (cutoff < 4) throw ConfigError("cutoff must be >= 4");
  if (!(tol > 0)) throw ConfigError("tol must be positive");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
}

std::vector<double> parse_sweep(const std::string& spec) {
  std::vector<double> out;
  if (spec.find_first_not_of(" \t") == std::string::npos) return out;
  auto to_d = [](const std::string& s) {
    size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw ConfigError("sweep: cannot parse '" + s + "'");
    }
    if (s.find_first_not_of(" \t", pos) != std::string::npos) throw ConfigError("sweep: cannot parse '" + s + "'");
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("sweep: expected start:stop:step");
    const double a = to_d(parts[0]), b = to_d(parts[1]), h = to_d(parts[2]);
    if (!(h > 0)) throw ConfigError("sweep: step must be positive");
    const long n = long(std::floor((b - a) / h + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(a + i * h);
    return out;
  }
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(to_d(p));
  return out;
}

Table family_table(const std::string& family, double k, const std::vector<double>& moduli, double phase) {
  Table t;
  if (family == "bg")
    t.columns = {"abs_z", "arg_z", "K0", "var_K0", "Nbar", "var_N", "R", "Q", "K1", "K2", "var_K1", "var_K2"};
  else if (family == "perelomov")
    t.columns = {"abs_lambda", "arg_lambda", "K0", "var_K0", "Nbar", "var_N", "R", "Q", "K1", "K2", "var_K1", "var_K2"};
  else if (family == "sg")
    t.columns = {"abs_alpha", "arg_alpha", "K0", "var_K0", "K1", "K2", "var_K1", "var_K2", "h1", "h2", "h"};
  else
    throw ConfigError("unknown family '" + family + "'");
  for (double r : moduli)
    if (r < 0) throw ConfigError("sweep values are moduli and must be >= 0");
  if (family == "perelomov")
    for (double r : moduli)
      if (!(r < 1)) throw ConfigError("Perelomov sweep needs |lambda| < 1");

  t.rows.resize(moduli.size());
  std::vector<std::string> errors(moduli.size());
  const int n = int(moduli.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const cplx p = std::polar(moduli[i], phase);
    try {
      t.rows[i] = family == "bg" ? bg_row(k, p) : family == "perelomov" ? perelomov_row(k, p) : sg_row(k, p);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  return t;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"SU(1,1) coherent states, phase-space distributions and two-mode interference"};
  app.fallthrough();
  app.require_subcommand(1);
  RunConfig cfg;
  std::string out_path;
  app.add_option("--k", cfg.k, "Bargmann index");
  auto* cutoff_opt = app.add_option("--cutoff", cfg.cutoff, "Fock-space cutoff (per mode for interfere)");
  app.add_option("--tol", cfg.tol, "cap on every check tolerance (verify)");
  app.add_option("--format", cfg.format, "csv or json");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--seed", cfg.seed, "seed for random scenarios");

  auto* verify = app.add_subcommand("verify", "run the acceptance checks");

  std::string family = "bg", sweep, state = "thermal", kind = "S", scenario = "vacuum";
  double phase = 0, re = 0, im = 0, a = 0.3, extent = 3.0;
  int grid = 32, sector = 0;

  auto* table = app.add_subcommand("table", "expectation values over a sweep of |parameter|");
  table->add_option("--family", family, "bg, perelomov or sg");
  table->add_option("--sweep", sweep, "start:stop:step, comma list, or empty");
  table->add_option("--phase", phase, "argument of the state parameter");

  auto* states = app.add_subcommand("states", "number-basis amplitudes of a coherent state");
  states->add_option("--family", family, "bg, perelomov or sg");
  states->add_option("--re", re, "Re of z, lambda or alpha");
  states->add_option("--im", im, "Im of z, lambda or alpha");

  auto* dist = app.add_subcommand("dist", "Husimi-type distribution on a square grid");
  dist->add_option("--kind", kind, "S (BG plane), T (Perelomov disc) or Q (SG plane)");
  dist->add_option("--state", state, "thermal, bg, perelomov or sg");
  dist->add_option("--a", a, "thermal parameter, 0 < a < 1");
  dist->add_option("--re", re, "Re of the pure-state parameter");
  dist->add_option("--im", im, "Im of the pure-state parameter");
  dist->add_option("--grid", grid, "points per axis");
  auto* extent_opt = dist->add_option("--extent", extent, "half width of the square");

  auto* interfere = app.add_subcommand("interfere", "homodyne estimators for a two-mode state");
  interfere->add_option("--scenario", scenario, "vacuum, bg, perelomov or random");
  interfere->add_option("--re", re, "Re of the sector state parameter");
  interfere->add_option("--im", im, "Im of the sector state parameter");
  interfere->add_option("--sector", sector, "d = n1 - n2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    cfg.validate();
    if (dist->parsed()) {
      if (kind != "S" && kind != "T" && kind != "Q") throw ConfigError("dist: kind must be S, T or Q");
      if (state != "thermal" && state != "bg" && state != "perelomov" && state != "sg")
        throw ConfigError("dist: unknown state '" + state + "'");
      if (kind == "T" && extent_opt->count() == 0) extent = 0.7;
    }
    if ((states->parsed() || table->parsed()) && family != "bg" && family != "perelomov" && family != "sg")
      throw ConfigError("unknown family '" + family + "'");
    if (interfere->parsed() && scenario != "vacuum" && scenario != "bg" && scenario != "perelomov" &&
        scenario != "random")
      throw ConfigError("interfere: unknown scenario '" + scenario + "'");

    std::ostringstream buf;
    int code = 0;
    if (verify->parsed()) code = cmd_verify(cfg, buf);
    else if (table->parsed()) cmd_table(cfg, buf, family, sweep, phase);
    else if (states->parsed()) cmd_states(cfg, buf, family, {re, im}, cutoff_opt->count() > 0);
    else if (dist->parsed()) cmd_dist(cfg, buf, kind, state, a, {re, im}, grid, extent);
    else cmd_interfere(cfg, buf, scenario, {re, im}, sector);

    if (out_path.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw ConfigError("cannot open " + out_path);
      f << buf.str();
    }
    return code;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace so12::cli
