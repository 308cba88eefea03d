#include "levydec/cli.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "levydec/errors.hpp"
#include "levydec/evolution.hpp"
#include "levydec/levy_core.hpp"
#include "levydec/process_models.hpp"
#include "levydec/sampling.hpp"
#include "levydec/table_io.hpp"
#include "output.hpp"
#include "params.hpp"

namespace levydec::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string grid = "-10:10:201";
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  double hbar = 1.0;
  unsigned workers = 1;

  std::string gaussian, stable, mandel, compound, gas, triplet, pd;

  std::string times = "1";
  int truncation = -1;
  std::string rate_history;

  std::string nbar;

  double t = 1.0;
  std::size_t samples = 100000;
  std::string samples_out;

  std::string weights, separations;
};

const std::set<std::string> kShared = {"grid", "out", "format", "seed", "config", "hbar", "workers"};
const std::vector<std::string> kProcessFlags = {"gaussian", "stable", "mandel", "compound", "gas", "triplet"};

const std::map<std::string, std::set<std::string>> kSchema = {
    {"exponent", {"gaussian", "stable", "mandel", "compound", "gas", "triplet", "pd"}},
    {"evolve", {"gaussian", "stable", "mandel", "compound", "gas", "triplet", "pd", "times", "truncation",
                "rate-history"}},
    {"transition", {"pd", "nbar"}},
    {"montecarlo", {"gaussian", "stable", "mandel", "compound", "gas", "pd", "t", "samples", "samples-out"}},
    {"visibility", {"gaussian", "stable", "mandel", "compound", "gas", "triplet", "pd", "times", "weights",
                    "separations"}},
};

// A process ready for evaluation and, where possible, for sampling.
struct Process {
  std::string kind;
  std::optional<CharacteristicExponent> psi;
  std::optional<double> rate;  // compound-Poisson processes
  std::optional<MomentumPD> pd;
  std::optional<SampledProcess> sampled;
};

MomentumPD parse_pd(const std::string& text, double hbar) {
  const auto kv = parse_kv_list(text, "--pd");
  const std::string kind = kv_string(kv, "kind", "--pd");
  if (kind == "mandel") {
    expect_keys(kv, {"kind", "k0"}, "--pd");
    return MomentumPD::mandel(hbar * kv_number(kv, "k0", "--pd", 1.0));
  }
  if (kind == "gaussian") {
    expect_keys(kv, {"kind", "mean", "sigma"}, "--pd");
    return MomentumPD::gaussian(kv_number(kv, "mean", "--pd", 0.0), kv_number(kv, "sigma", "--pd"));
  }
  if (kind == "uniform") {
    expect_keys(kv, {"kind", "lo", "hi"}, "--pd");
    return uniform_pd(kv_number(kv, "lo", "--pd"), kv_number(kv, "hi", "--pd"));
  }
  if (kind == "table") {
    expect_keys(kv, {"kind", "file"}, "--pd");
    Table t = read_table(kv_string(kv, "file", "--pd"));
    return MomentumPD::tabulated(std::move(t.x), std::move(t.y), true);
  }
  fail(ErrorCode::InvalidArgument, "--pd: unknown kind '" + kind + "' (mandel, gaussian, uniform, table)");
}

Process compound_process(double rate, MomentumPD pd, double hbar, std::string kind) {
  Process p;
  p.kind = std::move(kind);
  p.psi.emplace(compound_poisson_exponent(rate, pd, hbar));
  p.rate = rate;
  p.pd = pd;
  p.sampled = CompoundPoissonProcess{rate, pd};
  return p;
}

Process build_process(const Options& o, const CLI::App& app) {
  std::vector<std::string> given;
  for (const auto& f : kProcessFlags) {
    if (app.count("--" + f) > 0) given.push_back(f);
  }
  if (given.size() != 1) {
    throw UsageError("exactly one process flag is required (--gaussian, --stable, --mandel, --compound, "
                     "--gas or --triplet)");
  }
  const std::string& which = given.front();
  if (app.count("--pd") > 0 && which != "compound") {
    throw UsageError("--pd is only used together with --compound");
  }

  if (which == "gaussian") {
    const auto kv = parse_kv_list(o.gaussian, "--gaussian");
    expect_keys(kv, {"a", "D"}, "--gaussian");
    LevyTriplet tr;
    tr.drift_a = kv_number(kv, "a", "--gaussian", 0.0);
    tr.diffusion_D = kv_number(kv, "D", "--gaussian");
    tr.hbar = o.hbar;
    Process p;
    p.kind = "gaussian";
    p.psi.emplace(build_exponent(tr, QuadratureSpec{}));
    p.sampled = GaussianProcess{tr.drift_a, tr.diffusion_D};
    return p;
  }
  if (which == "stable") {
    const auto kv = parse_kv_list(o.stable, "--stable");
    expect_keys(kv, {"alpha", "K", "x0"}, "--stable");
    StableParams sp{kv_number(kv, "alpha", "--stable"), kv_number(kv, "K", "--stable", 1.0),
                    kv_number(kv, "x0", "--stable", 1.0)};
    Process p;
    p.kind = "stable";
    p.psi.emplace(stable_exponent(sp));
    p.sampled = StableProcess{sp};
    return p;
  }
  if (which == "mandel") {
    const auto kv = parse_kv_list(o.mandel, "--mandel");
    expect_keys(kv, {"k0", "rate"}, "--mandel");
    const double k0 = kv_number(kv, "k0", "--mandel", 1.0);
    return compound_process(kv_number(kv, "rate", "--mandel"), MomentumPD::mandel(o.hbar * k0), o.hbar,
                            "mandel");
  }
  if (which == "compound") {
    if (app.count("--pd") == 0) throw UsageError("--compound needs --pd");
    const auto kv = parse_kv_list(o.compound, "--compound");
    expect_keys(kv, {"rate"}, "--compound");
    return compound_process(kv_number(kv, "rate", "--compound"), parse_pd(o.pd, o.hbar), o.hbar,
                            "compound");
  }
  if (which == "gas") {
    const auto kv = parse_kv_list(o.gas, "--gas");
    expect_keys(kv, {"kernel", "n", "M", "p0"}, "--gas");
    const Table t = read_table(kv_string(kv, "kernel", "--gas"));
    const auto norm = normalize_gas_kernel(GasKernel::from_table(
        t, kv_number(kv, "n", "--gas", 1.0), kv_number(kv, "M", "--gas", 1.0), kv_number(kv, "p0", "--gas", 1.0)));
    return compound_process(norm.rate, norm.pd, o.hbar, "gas");
  }

  const auto kv = parse_kv_list(o.triplet, "--triplet");
  expect_keys(kv, {"a", "D", "q0", "lambda2", "omega2"}, "--triplet");
  LevyTriplet tr;
  tr.drift_a = kv_number(kv, "a", "--triplet", 0.0);
  tr.diffusion_D = kv_number(kv, "D", "--triplet", 0.0);
  tr.q0 = kv_number(kv, "q0", "--triplet", 1.0);
  tr.hbar = o.hbar;
  QuadratureSpec quad;
  bool have_range = false;
  auto load = [&](const char* key) -> JumpWeight {
    if (kv.count(key) == 0) return JumpWeight::zero();
    Table t = read_table(kv_string(kv, key, "--triplet"));
    quad.q_min = have_range ? std::min(quad.q_min, t.x.front()) : t.x.front();
    quad.q_max = have_range ? std::max(quad.q_max, t.x.back()) : t.x.back();
    have_range = true;
    return JumpWeight::tabulated_squared(std::move(t.x), std::move(t.y));
  };
  tr.lambda = load("lambda2");
  tr.omega = load("omega2");
  Process p;
  p.kind = "triplet";
  p.psi.emplace(build_exponent(tr, quad));
  return p;
}

void check_schema(const std::string& command, const CLI::App& app) {
  const auto& allowed = kSchema.at(command);
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_lnames().empty() ? "" : opt->get_lnames().front();
    if (name.empty() || name == "help" || opt->count() == 0) continue;
    if (kShared.count(name) == 0 && allowed.count(name) == 0) {
      throw UsageError("option --" + name + " does not apply to '" + command + "'");
    }
  }
}

Metadata base_metadata(const std::string& command, const CLI::App& app, const Options& o) {
  Metadata meta{{"levydec", kVersion}, {"command", command}};
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "out" || name == "config" || opt->count() == 0) continue;
    std::string joined;
    for (const auto& r : opt->results()) joined += (joined.empty() ? "" : " ") + r;
    meta.emplace_back("config." + name, joined);
  }
  std::ostringstream units;
  units << "hbar=" << format_double(o.hbar) << "; s in length units; q in momentum units; t in time units";
  meta.emplace_back("units", units.str());
  return meta;
}

DataTable cmd_exponent(const Options& o, const CLI::App& app, Metadata& meta) {
  const Process p = build_process(o, app);
  const auto grid = parse_grid(o.grid);
  const auto psi = eval_exponent(*p.psi, grid, o.workers);
  meta.emplace_back("process", p.psi->description());
  meta.emplace_back("closed_form", p.psi->closed_form() ? "true" : "false");
  DataTable table{{"s", "re_psi", "im_psi"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) table.rows.push_back({grid[i], psi[i].real(), psi[i].imag()});
  return table;
}

RateHistory load_rate_history(const std::string& path) {
  Table t = read_table(path);
  return RateHistory{std::move(t.x), std::move(t.y)};
}

DataTable cmd_evolve(const Options& o, const CLI::App& app, Metadata& meta) {
  const Process p = build_process(o, app);
  const auto grid = parse_grid(o.grid);
  const auto times = parse_number_list(o.times, "--times");
  if (times.empty()) throw UsageError("--times must list at least one time");
  if (app.count("--truncation") > 0 && o.truncation < 0) {
    fail(ErrorCode::TruncationTooSmall, "--truncation must be >= 0");
  }
  const bool history = app.count("--rate-history") > 0;
  if (history && !p.rate) throw UsageError("--rate-history needs a compound-Poisson process");

  DataTable table;
  table.columns = {"t", "s", "re_phi", "im_phi"};
  if (p.rate) table.columns.insert(table.columns.end(), {"mean_jumps", "re_jump", "im_jump", "abs_diff"});
  meta.emplace_back("process", p.psi->description());

  const auto unit = history ? std::optional<CharacteristicExponent>(compound_poisson_exponent(1.0, *p.pd, o.hbar))
                            : std::nullopt;
  for (double t : times) {
    JumpConfig cfg;
    cfg.horizon = t;
    cfg.truncation = o.truncation;
    if (history) {
      cfg.rate = load_rate_history(o.rate_history);
    } else if (p.rate) {
      cfg.rate = *p.rate;
    }
    // With a rate history the closed form is exp(nbar (Phi_P - 1)), nbar = int Gamma.
    const double nbar = p.rate ? cfg.mean_jumps() : 0.0;
    const DecoherenceFactor closed =
        history ? cf_at_time(*unit, nbar, grid, o.workers) : cf_at_time(*p.psi, t, grid, o.workers);
    std::optional<OffDiagonalState> jump;
    if (p.rate) {
      const MomentumPD pd = *p.pd;
      const double hbar = o.hbar;
      jump = jump_expansion_evolve(OffDiagonalState::uniform(grid),
                                   [pd, hbar](double s) { return pd.cf(s, hbar); }, cfg);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::vector<double> row{t, grid[i], closed.values[i].real(), closed.values[i].imag()};
      if (jump) {
        const cplx v = jump->values[i];
        row.insert(row.end(), {nbar, v.real(), v.imag(), std::abs(v - closed.values[i])});
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

DataTable cmd_transition(const Options& o, const CLI::App& app, Metadata& meta) {
  if (app.count("--pd") == 0) throw UsageError("transition needs --pd");
  if (app.count("--nbar") == 0) throw UsageError("transition needs --nbar");
  const auto nbar = parse_number_list(o.nbar, "--nbar");
  const MomentumPD pd = parse_pd(o.pd, o.hbar);
  const auto grid = parse_grid(o.grid);
  const TransitionReport rep = transition_scan(pd, nbar, grid, o.hbar, o.workers);
  meta.emplace_back("pd", rep.pd_kind);
  DataTable table{{"nbar", "s", "abs_cf_compound", "abs_cf_gaussian", "divergence", "plateau", "plateau_s"}, {}};
  for (const auto& ser : rep.series) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      table.rows.push_back({ser.nbar, grid[i], ser.abs_cf_compound[i], ser.abs_cf_gaussian[i], ser.divergence,
                            ser.plateau, ser.plateau_s});
    }
  }
  return table;
}

DataTable cmd_montecarlo(const Options& o, const CLI::App& app, Metadata& meta) {
  const Process p = build_process(o, app);
  if (!p.sampled) throw UsageError("montecarlo does not support this process");
  if (o.samples < 1) fail(ErrorCode::InvalidArgument, "--samples must be >= 1");
  SamplerConfig cfg;
  cfg.seed = o.seed;
  cfg.sample_count = o.samples;
  cfg.process = *p.sampled;
  cfg.horizon = o.t;
  cfg.hbar = o.hbar;
  cfg.workers = o.workers;
  const auto samples = sample_total_transfer(cfg);
  if (app.count("--samples-out") > 0) {
    std::ostringstream buf;
    write_samples_csv(buf, samples);
    std::ofstream f(o.samples_out, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(f), ErrorCode::InvalidArgument, "cannot open " + o.samples_out);
    f << buf.str();
  }
  const auto grid = parse_grid(o.grid);
  const EmpiricalCF emp = empirical_cf(samples, grid, o.hbar, o.workers);
  const auto analytic = analytic_cf(cfg);
  const CoverageSummary cov = compare_with_analytic(emp, analytic, 3.0);
  meta.emplace_back("process", p.kind);
  meta.emplace_back("pass_rate_3se", format_double(cov.pass_rate));
  DataTable table{{"s", "re_empirical", "im_empirical", "re_analytic", "im_analytic", "abs_error", "std_error",
                   "within_3se", "pass_rate"},
                  {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx a = analytic(grid[i]);
    table.rows.push_back({grid[i], emp.values[i].real(), emp.values[i].imag(), a.real(), a.imag(),
                          cov.abs_error[i], emp.std_error[i], cov.within[i] ? 1.0 : 0.0, cov.pass_rate});
  }
  return table;
}

DataTable cmd_visibility(const Options& o, const CLI::App& app, Metadata& meta) {
  const Process p = build_process(o, app);
  const bool file = app.count("--weights") > 0;
  const bool range = app.count("--separations") > 0;
  if (file == range) throw UsageError("visibility needs exactly one of --weights or --separations");
  PathSeparationWeights w;
  if (file) {
    Table t = read_table(o.weights);
    w = PathSeparationWeights{std::move(t.x), std::move(t.y)};
  } else {
    const auto g = parse_grid(o.separations);
    w = g.size() == 1 ? PathSeparationWeights::point_mass(g[0])
                      : PathSeparationWeights::uniform(g.front(), g.back(), g.size());
  }
  w.validate();
  const auto times = parse_number_list(o.times, "--times");
  if (times.empty()) throw UsageError("--times must list at least one time");
  meta.emplace_back("process", p.psi->description());
  DataTable table{{"t", "visibility"}, {}};
  if (p.rate) table.columns.push_back("exp_minus_rate_t");
  const CharacteristicExponent psi = *p.psi;
  for (double t : times) {
    require(t >= 0.0, ErrorCode::NegativeTime, "times must be >= 0");
    const double v = visibility([&psi, t](double s) { return t == 0.0 ? cplx(1.0) : std::exp(t * psi(s)); }, w);
    std::vector<double> row{t, v};
    if (p.rate) row.push_back(std::exp(-*p.rate * t));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void add_options(CLI::App& app, Options& o) {
  app.add_option("--grid", o.grid, "Separation grid lo:hi:n")->capture_default_str();
  app.add_option("--out", o.out, "Output file (default: standard output)");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--hbar", o.hbar, "Value of hbar")->capture_default_str();
  app.add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  app.add_option("--gaussian", o.gaussian, "Gaussian process a=..,D=..");
  app.add_option("--stable", o.stable, "Stable process alpha=..,K=..,x0=..");
  app.add_option("--mandel", o.mandel, "Photon recoil process k0=..,rate=..");
  app.add_option("--compound", o.compound, "Compound Poisson process rate=.. (with --pd)");
  app.add_option("--gas", o.gas, "Gas collisions kernel=FILE,n=..,M=..,p0=..");
  app.add_option("--triplet", o.triplet, "General triplet a=..,D=..,q0=..,lambda2=FILE,omega2=FILE");
  app.add_option("--pd", o.pd,
                 "Momentum-transfer density kind=mandel,k0=.. | kind=gaussian,mean=..,sigma=.. | "
                 "kind=uniform,lo=..,hi=.. | kind=table,file=FILE");

  app.add_option("--times", o.times, "Comma-separated evaluation times")->capture_default_str();
  app.add_option("--truncation", o.truncation, "Highest jump number kept");
  app.add_option("--rate-history", o.rate_history, "Two-column file t, Gamma(t)");
  app.add_option("--nbar", o.nbar, "Comma-separated mean jump numbers");
  app.add_option("--t", o.t, "Time horizon")->capture_default_str();
  app.add_option("--samples", o.samples, "Number of samples")->capture_default_str();
  app.add_option("--samples-out", o.samples_out, "Write the raw samples to this CSV file");
  app.add_option("--weights", o.weights, "Two-column file s, w of path-separation weights");
  app.add_option("--separations", o.separations, "Uniform path-separation weights on lo:hi:n");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decoherence factors of Levy processes", "levydec"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  // Values like times=0.5,1 are one string, not an array.
  app.get_config_formatter_base()->arrayDelimiter('\x1f');
  app.require_subcommand(1);
  Options o;
  add_options(app, o);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"exponent", "Characteristic exponent Psi(s) on a grid"},
      {"evolve", "Decoherence factor Phi(t, s), closed form and jump expansion"},
      {"transition", "Compound-Poisson to Gaussian transition scan"},
      {"montecarlo", "Empirical CF of sampled momentum transfers vs. the analytic CF"},
      {"visibility", "Fringe visibility over time for weighted path separations"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << app.help() << "error: code=UsageError message=" << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: code=" << e.code_name() << " message=" << e.what() << '\n';
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    check_schema(command, app);
    Metadata meta = base_metadata(command, app, o);
    DataTable table;
    if (command == "exponent") table = cmd_exponent(o, app, meta);
    else if (command == "evolve") table = cmd_evolve(o, app, meta);
    else if (command == "transition") table = cmd_transition(o, app, meta);
    else if (command == "montecarlo") table = cmd_montecarlo(o, app, meta);
    else table = cmd_visibility(o, app, meta);

    std::ostringstream buf;
    if (o.format == "json") write_json(buf, meta, table);
    else write_csv(buf, meta, table);
    if (o.out.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
      require(static_cast<bool>(f), ErrorCode::InvalidArgument, "cannot open output file " + o.out);
      f << buf.str();
      require(static_cast<bool>(f), ErrorCode::InvalidArgument, "failed writing " + o.out);
    }
    return 0;
  } catch (const UsageError& e) {
    err << app.help() << "error: code=UsageError message=" << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: code=" << e.code_name() << " message=" << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: code=Internal message=" << e.what() << '\n';
    return 1;
  }
}

}  // namespace levydec::cli
