#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fracbd/errors.hpp"
#include "fracbd/linear.hpp"
#include "fracbd/mlf.hpp"
#include "fracbd/model.hpp"
#include "fracbd/paths.hpp"
#include "fracbd/quasi.hpp"
#include "fracbd/spectral.hpp"
#include "fracbd/stable.hpp"

namespace fracbd::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "fracbd " FRACBD_VERSION;

// Shortest representation that round-trips.
std::string fmt_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_double(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Column-oriented result; rendered as CSV or as a flat JSON object.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void add(std::vector<json> row) { rows.push_back(std::move(row)); }

  std::string csv() const {
    std::string s;
    for (std::size_t c = 0; c < columns.size(); ++c) s += (c ? "," : "") + columns[c];
    s += "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) s += ",";
        const json& v = row[c];
        if (v.is_number_float()) {
          s += fmt_double(v.get<double>());
        } else if (v.is_string()) {
          s += v.get<std::string>();
        } else {
          s += v.dump();
        }
      }
      s += "\n";
    }
    return s;
  }

  json as_json() const {
    json obj = json::object();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      json col = json::array();
      for (const auto& row : rows) col.push_back(row[c]);
      obj[columns[c]] = col;
    }
    return obj;
  }
};

struct Common {
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out;
  bool as_json = false;
  std::string rates_file;
  std::optional<double> lambda;
  std::optional<double> mu;
};

RateSchedule rates_from(const Common& c) {
  if (!c.rates_file.empty()) return load_rates_csv(c.rates_file);
  if (!c.lambda || !c.mu) throw DomainError("give --lambda and --mu, or --rates-file");
  return RateSchedule::linear(*c.lambda, *c.mu);
}

json manifest_for(const CLI::App& sub, const Common& c) {
  json m;
  m["tool"] = "fracbd";
  m["version"] = FRACBD_VERSION;
  m["subcommand"] = sub.get_name();
  json args = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_lnames().empty() ? "" : opt->get_lnames().front();
    if (name.empty() || name == "help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (res.size() == 1) {
        args[name] = res.front();
      } else {
        args[name] = res;
      }
    } else if (!opt->get_default_str().empty()) {
      args[name] = opt->get_default_str();
    }
  }
  m["args"] = args;
  m["seed"] = c.seed;
  m["workers"] = c.workers;
  m["output"] = c.out.empty() ? "-" : c.out;
  m["format"] = c.as_json ? "json" : "csv";
  return m;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

// Primary output plus manifest (and an optional sidecar object).
void emit(const Table& table, const CLI::App& sub, const Common& c, std::ostream& out,
          std::ostream& err, const json& extra = json::object(), const std::string& sidecar_ext = "",
          const json& sidecar = json()) {
  json manifest = manifest_for(sub, c);
  for (auto it = extra.begin(); it != extra.end(); ++it) manifest[it.key()] = it.value();
  const bool to_stdout = c.out.empty() || c.out == "-";
  if (c.as_json) {
    json obj = table.as_json();
    if (!sidecar.is_null()) obj[sidecar_ext] = sidecar;
    obj["manifest"] = manifest;
    write_text(c.out, obj.dump(2) + "\n", out);
    return;
  }
  write_text(c.out, table.csv(), out);
  if (to_stdout) {
    if (!sidecar.is_null()) err << sidecar.dump() << "\n";
    err << manifest.dump() << "\n";
  } else {
    if (!sidecar.is_null()) write_text(c.out + "." + sidecar_ext + ".json", sidecar.dump(2) + "\n", out);
    write_text(c.out + ".manifest.json", manifest.dump(2) + "\n", out);
  }
}

void add_common(CLI::App* sub, Common& c, bool rates, bool seeded) {
  sub->add_option("--out,-o", c.out, "output file (default stdout)");
  sub->add_flag("--json", c.as_json, "emit a JSON object instead of CSV");
  if (rates) {
    sub->add_option("--lambda", c.lambda, "linear birth rate (lambda_i = i lambda)");
    sub->add_option("--mu", c.mu, "linear death rate (mu_i = i mu)");
    sub->add_option("--rates-file", c.rates_file, "CSV rate table with header i,birth,death")
        ->check(CLI::ExistingFile);
  }
  if (seeded) sub->add_option("--seed", c.seed, "master seed");
}

std::vector<double> parse_scan(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string cell;
  while (std::getline(ss, cell, ':')) parts.push_back(std::stod(cell));
  if (parts.size() != 3 || parts[2] < 1) throw DomainError("--theta-scan expects lo:hi:steps");
  const auto steps = static_cast<std::size_t>(parts[2]);
  std::vector<double> out;
  for (std::size_t s = 0; s < steps; ++s) {
    out.push_back(steps == 1 ? parts[0]
                             : parts[0] + (parts[1] - parts[0]) * static_cast<double>(s) /
                                              static_cast<double>(steps - 1));
  }
  return out;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-fractional birth-and-death processes: evaluation, simulation, spectra, "
               "quasi-limiting and quasi-stationary laws"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "key = value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  int workers = 0;
  app.add_option("--workers", workers, "OpenMP threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);

  Common c;

  // ml-eval
  auto* ml = app.add_subcommand("ml-eval", "evaluate E_a(x) or E_a(-theta t^a)");
  double ml_alpha = 1.0;
  std::optional<double> ml_x;
  std::optional<double> ml_theta;
  std::optional<double> ml_t;
  ml->add_option("--alpha", ml_alpha, "order in (0, 1]")->required();
  auto* ml_x_opt = ml->add_option("--x", ml_x, "argument x");
  auto* ml_theta_opt = ml->add_option("--theta", ml_theta, "rate theta");
  ml->add_option("--t", ml_t, "time t")->needs(ml_theta_opt);
  ml_x_opt->excludes(ml_theta_opt);
  add_common(ml, c, false, false);

  // sample-stable
  auto* ss = app.add_subcommand("sample-stable", "draw one-sided stable variates");
  double ss_alpha = 0.5;
  std::size_t ss_n = 10;
  ss->add_option("--alpha", ss_alpha, "order in (0, 1]")->required();
  ss->add_option("--n", ss_n, "number of draws")->capture_default_str();
  add_common(ss, c, false, true);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo pmf of N_a(t)");
  std::string sim_method = "renewal";
  double sim_alpha = 1.0;
  std::size_t sim_i0 = 1;
  std::vector<double> sim_t;
  std::size_t sim_paths = 10000;
  double sim_delta = 1e-3;
  std::size_t sim_max_jumps = kDefaultMaxJumps;
  sim->add_option("--method", sim_method, "renewal | timechange | timechange-grid")
      ->capture_default_str();
  sim->add_option("--alpha", sim_alpha, "order in (0, 1]")->required();
  sim->add_option("--i0", sim_i0, "initial state")->capture_default_str();
  sim->add_option("--t", sim_t, "time (repeatable)")->required();
  sim->add_option("--n-paths", sim_paths, "paths per time")->capture_default_str();
  sim->add_option("--grid-delta", sim_delta, "operational grid step (timechange-grid)")
      ->capture_default_str();
  sim->add_option("--max-jumps", sim_max_jumps, "per-path jump cap")->capture_default_str();
  add_common(sim, c, true, true);

  // transition / survival
  std::size_t sp_m = 200;
  std::string sp_boundary = "reflect";
  double sp_alpha = 1.0;
  std::vector<std::size_t> sp_i;
  std::vector<std::size_t> sp_j;
  std::vector<double> sp_t;
  auto* tr = app.add_subcommand("transition", "spectral p_ij(t)");
  auto* sv = app.add_subcommand("survival", "spectral P_i[T_0 > t]");
  for (auto* sub : {tr, sv}) {
    sub->add_option("--alpha", sp_alpha, "order in (0, 1]")->required();
    sub->add_option("--i", sp_i, "initial state (repeatable)")->required();
    sub->add_option("--t", sp_t, "time (repeatable)")->required();
    sub->add_option("--M", sp_m, "truncation")->capture_default_str();
    sub->add_option("--boundary", sp_boundary, "reflect | absorb")->capture_default_str();
    add_common(sub, c, true, false);
  }
  tr->add_option("--j", sp_j, "target state (repeatable; default all)");

  // qld
  auto* qld = app.add_subcommand("qld", "quasi-limiting coefficients P_{i,n}");
  std::size_t qld_i0 = 1;
  std::size_t qld_nmax = 200;
  double qld_alpha = 0.5;
  std::optional<double> qld_check_t;
  qld->add_option("--i0", qld_i0, "initial state")->capture_default_str();
  qld->add_option("--nmax", qld_nmax, "largest state")->capture_default_str();
  qld->add_option("--alpha", qld_alpha, "order used by --check-t")->capture_default_str();
  qld->add_option("--check-t", qld_check_t, "compare with the spectral conditional law at t");
  qld->add_option("--M", sp_m, "truncation for --check-t")->capture_default_str();
  add_common(qld, c, true, false);

  // qsd
  auto* qsd = app.add_subcommand("qsd", "quasi-stationary distribution for a given theta");
  std::optional<double> qsd_theta;
  std::string qsd_scan;
  std::size_t qsd_nmax = 200;
  auto* qsd_theta_opt = qsd->add_option("--theta", qsd_theta, "decay rate theta");
  auto* qsd_scan_opt = qsd->add_option("--theta-scan", qsd_scan, "lo:hi:steps");
  qsd_theta_opt->excludes(qsd_scan_opt);
  qsd->add_option("--nmax", qsd_nmax, "largest state")->capture_default_str();
  add_common(qsd, c, true, false);

  // linear
  auto* lin = app.add_subcommand("linear", "closed forms for lambda_i = i lambda, mu_i = i mu");
  double lin_alpha = 1.0;
  std::vector<double> lin_t;
  std::string lin_what = "survival";
  std::vector<std::size_t> lin_j{1};
  std::size_t lin_i0 = 1;
  std::size_t lin_nmax = 200;
  lin->add_option("--alpha", lin_alpha, "order in (0, 1]")->capture_default_str();
  lin->add_option("--t", lin_t, "time (repeatable)");
  lin->add_option("--what", lin_what, "survival | p1j | qld | tail")
      ->check(CLI::IsMember({"survival", "p1j", "qld", "tail"}))
      ->capture_default_str();
  lin->add_option("--j", lin_j, "state for p1j (repeatable)");
  lin->add_option("--i0", lin_i0, "initial state for qld")->capture_default_str();
  lin->add_option("--nmax", lin_nmax, "largest state for qld")->capture_default_str();
  add_common(lin, c, true, false);

  auto* self = app.add_subcommand("selfcheck", "run the embedded invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (workers > 0) omp_set_num_threads(workers);
  c.workers = workers;
  if (const char* env = std::getenv("FRACBD_SEED")) {
    const bool explicit_seed = [&] {
      for (auto* sub : app.get_subcommands()) {
        for (const CLI::Option* opt : sub->get_options()) {
          if (!opt->get_lnames().empty() && opt->get_lnames().front() == "seed" && opt->count() > 0)
            return true;
        }
      }
      return false;
    }();
    if (!explicit_seed) c.seed = std::stoull(env);
  }

  try {
    if (ml->parsed()) {
      const FracOrder a(ml_alpha);
      double value = 0.0;
      json extra;
      if (ml_x) {
        value = ml_eval(a, *ml_x);
      } else if (ml_theta && ml_t) {
        value = ml_survival(a, *ml_theta, *ml_t);
      } else {
        err << "ml-eval: give --x, or --theta and --t\n";
        return 2;
      }
      if (c.as_json) {
        Table t{{"value"}, {}};
        t.add({value});
        emit(t, *ml, c, out, err);
      } else {
        write_text(c.out, fmt_double(value, 16) + "\n", out);
        json manifest = manifest_for(*ml, c);
        if (c.out.empty() || c.out == "-") {
          err << manifest.dump() << "\n";
        } else {
          write_text(c.out + ".manifest.json", manifest.dump(2) + "\n", out);
        }
      }
      return 0;
    }

    if (ss->parsed()) {
      const FracOrder a(ss_alpha);
      std::vector<double> draws(ss_n);
      const auto n = static_cast<long long>(ss_n);
#pragma omp parallel for schedule(static)
      for (long long k = 0; k < n; ++k) {
        RngStream rng(c.seed, static_cast<std::uint64_t>(k));
        draws[k] = sample_stable(a, rng);
      }
      Table t{{"index", "value"}, {}};
      for (std::size_t k = 0; k < ss_n; ++k) t.add({k, draws[k]});
      emit(t, *ss, c, out, err);
      return 0;
    }

    if (sim->parsed()) {
      const RateSchedule rates = rates_from(c);
      const FracOrder a(sim_alpha);
      const SimMethod method = parse_sim_method(sim_method);
      EstimateOptions opts;
      opts.grid_delta = sim_delta;
      opts.max_jumps = sim_max_jumps;
      Table t{{"t", "state", "probability", "stderr", "n_paths", "method"}, {}};
      json discarded = json::array();
      for (double time : sim_t) {
        const MarginalPmf pmf = estimate_pmf(method, rates, a, sim_i0, time, sim_paths, c.seed, opts);
        for (std::size_t j = 0; j < pmf.mass.size(); ++j) {
          t.add({time, j, pmf.mass[j], pmf.std_err[j], pmf.n_paths, to_string(method)});
        }
        discarded.push_back(pmf.discarded);
      }
      emit(t, *sim, c, out, err, json{{"discarded_paths", discarded}});
      return 0;
    }

    if (tr->parsed() || sv->parsed()) {
      const RateSchedule rates = rates_from(c);
      const FracOrder a(sp_alpha);
      const SpectralDecomposition dec = decompose(rates, sp_m, parse_boundary(sp_boundary));
      json extra{{"theta1", dec.thetas().front()}};
      if (tr->parsed()) {
        std::vector<std::size_t> js = sp_j;
        if (js.empty()) {
          for (std::size_t j = 1; j <= sp_m; ++j) js.push_back(j);
        }
        Table t{{"i", "j", "t", "p"}, {}};
        for (std::size_t i : sp_i) {
          const auto rows = transition_rows(dec, a, i, sp_t);
          for (std::size_t q = 0; q < sp_t.size(); ++q) {
            for (std::size_t j : js) {
              if (j < 1 || j > sp_m) throw DomainError("--j outside 1..M");
              t.add({i, j, sp_t[q], rows[q][j - 1]});
            }
          }
        }
        emit(t, *tr, c, out, err, extra);
      } else {
        Table t{{"i", "t", "survival"}, {}};
        for (std::size_t i : sp_i) {
          const auto curve = survival_curve(dec, a, i, sp_t);
          for (std::size_t q = 0; q < sp_t.size(); ++q) t.add({i, sp_t[q], curve[q]});
        }
        emit(t, *sv, c, out, err, extra);
      }
      return 0;
    }

    if (qld->parsed()) {
      const RateSchedule rates = rates_from(c);
      const QldResult res = qld_coefficients(rates, qld_i0, qld_nmax);
      if (!res.exists) {
        err << "qld: " << res.diagnostic << "\n";
        return 1;
      }
      Table t{{"n", "coefficient", "pmf"}, {}};
      for (std::size_t n = 1; n <= res.nmax; ++n) {
        t.add({n, res.coefficients[n - 1], res.pmf[n - 1]});
      }
      json extra{{"tail_bound", res.tail_bound}};
      if (qld_check_t) {
        const SpectralDecomposition dec = decompose(rates, sp_m);
        const FracOrder a(qld_alpha);
        const auto row = transition_row(dec, a, qld_i0, *qld_check_t);
        const double surv = survival_prob(dec, a, qld_i0, *qld_check_t);
        double tv = 0.0;
        for (std::size_t n = 1; n <= std::max(sp_m, res.nmax); ++n) {
          const double spec = n <= sp_m ? row[n - 1] / surv : 0.0;
          tv += std::fabs(spec - res.pmf_at(n));
        }
        extra["check"] = {{"t", *qld_check_t}, {"alpha", qld_alpha}, {"M", sp_m}, {"tv", 0.5 * tv}};
      }
      emit(t, *qld, c, out, err, extra);
      return 0;
    }

    if (qsd->parsed()) {
      const RateSchedule rates = rates_from(c);
      if (!qsd_theta && qsd_scan.empty()) {
        err << "qsd: give --theta or --theta-scan\n";
        return 2;
      }
      const std::vector<double> thetas = qsd_theta ? std::vector<double>{*qsd_theta}
                                                   : parse_scan(qsd_scan);
      const QsdClassification cls = qsd_classify(rates);
      json side;
      side["classification"] = to_string(cls.kind);
      side["theta_star"] = cls.theta_star;
      side["theta1_M"] = cls.theta_report.theta1_m;
      side["theta1_half_M"] = cls.theta_report.theta1_half;
      side["d_series"] = to_string(cls.d_status);
      json scan = json::array();
      std::optional<QsdResult> chosen;
      for (double th : thetas) {
        QsdResult r = qsd_solve(rates, th, qsd_nmax);
        scan.push_back({{"theta", th},
                        {"outcome", to_string(r.outcome)},
                        {"residual", r.residual},
                        {"raw_mass", r.raw_mass},
                        {"tail_mass", r.tail_mass}});
        if (r.outcome == QsdOutcome::proper) chosen = std::move(r);
      }
      side["solutions"] = scan;
      Table t{{"j", "nu"}, {}};
      if (chosen) {
        side["reported_theta"] = chosen->theta;
        for (std::size_t j = 1; j <= chosen->nu.size(); ++j) t.add({j, chosen->nu[j - 1]});
      }
      emit(t, *qsd, c, out, err, json::object(), "qsd", side);
      return chosen ? 0 : 1;
    }

    if (lin->parsed()) {
      if (!c.lambda || !c.mu) throw DomainError("linear: --lambda and --mu are required");
      const LinearParams p(*c.lambda, *c.mu);
      const FracOrder a(lin_alpha);
      Table t;
      if (lin_what == "survival") {
        t.columns = {"t", "survival", "tail_bound"};
        for (double time : lin_t) {
          const SurvivalSeries s = survival_fractional(p, a, time);
          t.add({time, s.value, s.tail_bound});
        }
      } else if (lin_what == "p1j") {
        if (!a.is_classical()) throw DomainError("linear --what p1j is the alpha = 1 closed form");
        t.columns = {"j", "t", "p"};
        for (std::size_t j : lin_j) {
          for (double time : lin_t) t.add({j, time, p1j_classical(p, j, time)});
        }
      } else if (lin_what == "qld") {
        const QldResult res = qld_linear(p, lin_i0, lin_nmax);
        if (!res.exists) {
          err << "linear qld: " << res.diagnostic << "\n";
          return 1;
        }
        t.columns = {"n", "coefficient", "pmf"};
        for (std::size_t n = 1; n <= res.nmax; ++n) {
          t.add({n, res.coefficients[n - 1], res.pmf[n - 1]});
        }
      } else {
        t.columns = {"quantity", "value"};
        if (p.regime() == Regime::subcritical) {
          t.add({"tail_constant", tail_constant_subcritical(p, a)});
        } else if (p.regime() == Regime::supercritical) {
          const SupercriticalTail s = supercritical_tail(p, a);
          t.add({"limit", s.limit});
          t.add({"rate", s.rate});
        } else {
          throw DomainError("linear --what tail: no tail constant in the critical regime");
        }
      }
      emit(t, *lin, c, out, err, json{{"regime", to_string(p.regime())}});
      return 0;
    }

    if (self->parsed()) return selfcheck(out) == 0 ? 0 : 1;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace fracbd::cli
