#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "gpsl/astro_bounds.hpp"
#include "gpsl/functionals.hpp"
#include "gpsl/io/config.hpp"
#include "gpsl/io/profile_spec.hpp"
#include "gpsl/io/table.hpp"
#include "gpsl/optimal_profiles.hpp"
#include "gpsl/regimes.hpp"
#include "gpsl/verify.hpp"
#include "gpsl/version.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using gpsl::io::Cell;
using gpsl::io::Table;

namespace {

enum Exit { kOk = 0, kPropertyFailure = 1, kUsage = 2, kNumerical = 3 };

/// Raised for bad flag values that CLI11 cannot catch on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 10^start .. 10^stop in `count` log-uniform steps from "start:stop:count".
std::vector<double> parse_log_grid(const std::string& text) {
  const auto parts = gpsl::io::detail::split(text, ':');
  if (parts.size() != 3) throw UsageError("grid '" + text + "': expected start:stop:count (log10)");
  double a = 0.0, b = 0.0;
  long n = 0;
  try {
    std::size_t used = 0;
    a = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("");
    b = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("");
    n = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw UsageError("grid '" + text + "': non-numeric field");
  }
  if (n < 1 || n > 100000) throw UsageError("grid '" + text + "': count must be in [1, 100000]");
  std::vector<double> g;
  for (long i = 0; i < n; ++i) g.push_back(std::pow(10.0, n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1)));
  return g;
}

struct Context {
  std::vector<std::string> argv;  ///< arguments after the program name
  std::string config_path;
  std::string sigma;
  gpsl::PhysicalConstants k;
  nlohmann::json config;
};

/// Writes files into `dir` and the manifest listing their digests.
class OutputSet {
public:
  OutputSet(const Context& ctx, std::string subcommand, fs::path dir, Json parameters,
            std::optional<std::uint64_t> seed = std::nullopt)
      : ctx_(ctx), subcommand_(std::move(subcommand)), dir_(std::move(dir)), params_(std::move(parameters)),
        seed_(seed) {
    fs::create_directories(dir_);
  }

  void add_text(const std::string& file, const std::string& content) {
    std::ofstream out(dir_ / file, std::ios::binary);
    if (!out) throw UsageError("cannot write " + (dir_ / file).string());
    out << content;
    files_.push_back({{"file", file}, {"sha256", gpsl::cli::sha256_hex(content)}});
  }

  void add_table(const Table& t, bool gnuplot, const std::string& plot_hint = {}) {
    std::ostringstream csv;
    gpsl::io::write_csv(t, csv);
    add_text(t.name + ".csv", csv.str());
    add_text(t.name + ".json", gpsl::io::to_json(t).dump(2) + "\n");
    if (gnuplot) add_text(t.name + ".gp", gnuplot_stub(t, plot_hint));
  }

  fs::path finish(const std::string& stem) const {
    Json m;
    m["subcommand"] = subcommand_;
    m["argv"] = ctx_.argv;
    m["parameters"] = params_;
    m["constants"] = gpsl::io::constants_json(ctx_.k);
    m["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
    m["tool_version"] = gpsl::kVersion;
    m["outputs"] = files_;
    const auto path = dir_ / (stem + ".manifest.json");
    std::ofstream out(path, std::ios::binary);
    out << m.dump(2) << "\n";
    return path;
  }

private:
  static std::string gnuplot_stub(const Table& t, const std::string& hint) {
    std::ostringstream g;
    g << "# gnuplot script for " << t.name << ".csv\n"
      << "set datafile separator ','\n"
      << "set key autotitle columnhead\n";
    if (!hint.empty()) g << hint << "\n";
    g << "plot ";
    bool first = true;
    for (std::size_t c = 1; c < t.columns.size(); ++c) {
      if (t.columns[c].unit == "text") continue;
      g << (first ? "" : ", \\\n     ") << "'" << t.name << ".csv' using 1:" << c + 1 << " with lines";
      first = false;
    }
    g << "\n";
    return g.str();
  }

  const Context& ctx_;
  std::string subcommand_;
  fs::path dir_;
  Json params_;
  std::optional<std::uint64_t> seed_;
  Json files_ = Json::array();
};

std::vector<gpsl::NeutronStar> star_catalog(const Context& ctx, const std::string& path) {
  if (!path.empty()) return gpsl::io::load_star_catalog(path);
  if (ctx.config.is_object() && ctx.config.contains("stars")) return gpsl::io::parse_star_catalog(ctx.config["stars"]);
  return gpsl::builtin_stars(ctx.k);
}

// ---------------------------------------------------------------- functional

struct FunctionalArgs {
  std::string kind;
  std::string g, gc, gg;
  double d = 0.0, m1 = 1.0, m2 = 10.0;
  std::string out;
};

int cmd_functional(const Context& ctx, const FunctionalArgs& a) {
  auto need = [](const std::string& spec, const char* flag) {
    if (spec.empty()) throw UsageError(std::string("functional: ") + flag + " is required for this kind");
    return gpsl::io::parse_profile_spec(spec);
  };
  gpsl::FunctionalResult res;
  std::string profiles;
  if (a.kind == "dirichlet") {
    res = gpsl::dirichlet_energy(need(a.g, "--g"));
    profiles = a.g;
  } else if (a.kind == "grad-sq" || a.kind == "irc") {
    res = gpsl::grad_sq_functional(need(a.g, "--g"));
    profiles = a.g;
  } else if (a.kind == "irg") {
    res = gpsl::macro_feedback_functional(need(a.g, "--g"));
    profiles = a.g;
  } else if (a.kind == "i0") {
    res = gpsl::grav_functional_i0(need(a.gc, "--gc"), need(a.gg, "--gg"));
    profiles = a.gc + " " + a.gg;
  } else if (a.kind == "pair") {
    res = gpsl::pair_grav_functional(need(a.gc, "--gc"), need(a.gg, "--gg"), a.d);
    profiles = a.gc + " " + a.gg;
  } else if (a.kind == "two-particle") {
    res = gpsl::two_particle_psl(need(a.g, "--g"), a.m1, a.m2, a.d);
    profiles = a.g;
  } else {
    throw UsageError("functional: unknown kind '" + a.kind + "'");
  }
  std::cout << gpsl::io::format_double(res.value) << "\n";
  if (!a.out.empty()) {
    Table t{"functional-" + a.kind,
            {{"kind", "text"}, {"profiles", "text"}, {"value", "L^" + std::to_string(res.length_power)},
             {"error_estimate", "L^" + std::to_string(res.length_power)}, {"method", "text"}},
            {}};
    t.add_row({a.kind, profiles, res.value, res.error_estimate, gpsl::to_string(res.method)});
    OutputSet out(ctx, "functional", a.out,
                  {{"kind", a.kind}, {"g", a.g}, {"gc", a.gc}, {"gg", a.gg}, {"d", a.d}, {"m1", a.m1}, {"m2", a.m2}});
    out.add_table(t, false);
    out.finish(t.name);
  }
  return kOk;
}

// ------------------------------------------------------------------- figures

struct FigureArgs {
  std::string name;
  std::string grid;
  double fixed = 1e-7;
  double ratio = 1.0;
  int points = 301;
  std::string stars;
  std::string star = "PSR J2144-3933";
  std::string overlay;
  std::string profiles = "optimal";
  std::string density = "uniform";
  bool strict = false;
  bool gnuplot = false;
  std::string out = "out";
};

Table radius_curve(const std::vector<double>& grid) {
  Table t{"radius-curve", {{"r_G/r_C", "1"}, {"R/r_G", "1"}, {"y", "1"}}, {}};
  for (double rho : grid) {
    const auto sr = gpsl::solve_support_radius(rho, 1.0);
    t.add_row({rho, sr.R / rho, sr.y});
  }
  return t;
}

Table ratio_curve_table(const std::vector<double>& grid) {
  Table t{"ratio-curve",
          {{"r_G/r_C", "1"}, {"log10_I0_gaussian", "log10 r_C^-4"}, {"log10_I0_optimal", "log10 r_C^-4"},
           {"log10_ratio", "1"}},
          {}};
  for (const auto& row : gpsl::ratio_curve(grid))
    t.add_row({row.rg_over_rc, row.log10_i0_gauss, row.log10_i0_optimal, row.log10_ratio});
  return t;
}

Table profile_compare(double rho, int points) {
  const auto opt = gpsl::optimal_feedback_gaussian_case(1.0, rho);
  const auto gauss = gpsl::make_gaussian(rho);
  Table t{"profile-compare",
          {{"r/r_G", "1"}, {"g_gaussian", "r_G^-3"}, {"g_optimal", "r_G^-3"}, {"Q_gaussian", "1"}, {"Q_optimal", "1"}},
          {}};
  const double rmax = 1.5 * opt.R;
  const double rg3 = rho * rho * rho;
  for (int i = 0; i < points; ++i) {
    const double r = rmax * i / std::max(points - 1, 1);
    t.add_row({r / rho, gauss.g(r) * rg3, opt.profile.g(r) * rg3, gauss.Q(r), opt.profile.Q(r)});
  }
  return t;
}

Table macro_profile_compare(int points) {
  const auto gauss = gpsl::make_gaussian(1.0);
  const auto quartic = gpsl::make_compact_quartic(1.0);
  const auto ball = gpsl::make_uniform_ball(1.0);
  Table t{"macro-profile-compare",
          {{"r/scale", "1"}, {"g_gaussian", "scale^-3"}, {"g_quartic", "scale^-3"}, {"g_ball", "scale^-3"}},
          {}};
  for (int i = 0; i < points; ++i) {
    const double r = 4.0 * i / std::max(points - 1, 1);
    t.add_row({r, gauss.g(r), quartic.g(r), ball.g(r)});
  }
  return t;
}

gpsl::BoundsOptions bounds_options(const FigureArgs& a) {
  gpsl::BoundsOptions o;
  if (a.profiles == "optimal") o.profiles = gpsl::BoundProfiles::optimal;
  else if (a.profiles == "gaussian") o.profiles = gpsl::BoundProfiles::gaussian;
  else throw UsageError("--profiles must be optimal or gaussian");
  if (a.density == "uniform") o.density = gpsl::DensityKind::uniform;
  else if (a.density == "tolman_vii") o.density = gpsl::DensityKind::tolman_vii;
  else throw UsageError("--density must be uniform or tolman_vii");
  o.strict = a.strict;
  return o;
}

Cell bound_cell(double v, bool excluded) { return excluded ? Cell{std::string("EXCLUDED")} : Cell{v}; }

Table exclusion_stars(const Context& ctx, const FigureArgs& a, const std::vector<double>& grid) {
  const auto opt = bounds_options(a);
  Table t{"exclusion-stars",
          {{"star", "text"}, {"axis", "text"}, {"length", "m"}, {"fixed_length", "m"}, {"lambda_minus", "s^-1"},
           {"lambda_plus", "s^-1"}, {"lambda_minus_approx", "s^-1"}, {"lambda_plus_approx", "s^-1"}},
          {}};
  for (const auto& star : star_catalog(ctx, a.stars))
    for (auto axis : {gpsl::GridAxis::r_C, gpsl::GridAxis::r_G}) {
      const auto eg = gpsl::exclusion_grid(star, axis, grid, a.fixed, opt, ctx.k);
      for (const auto& row : eg.rows) {
        const auto& b = row.bounds;
        t.add_row({star.name, gpsl::to_string(axis), row.length, a.fixed, bound_cell(b.lambda_minus, b.excluded),
                   bound_cell(b.lambda_plus, b.excluded), b.approx_minus, b.approx_plus});
      }
    }
  return t;
}

Table exclusion_merged(const Context& ctx, const FigureArgs& a, const std::vector<double>& grid) {
  if (a.overlay.empty()) throw UsageError("exclusion-merged requires --overlay");
  const auto stars = star_catalog(ctx, a.stars);
  const auto it = std::find_if(stars.begin(), stars.end(), [&](const auto& s) { return s.name == a.star; });
  if (it == stars.end()) throw UsageError("unknown star '" + a.star + "'");
  const auto eg = gpsl::exclusion_grid(*it, gpsl::GridAxis::r_C, grid, a.fixed, bounds_options(a), ctx.k);
  const auto merged = gpsl::merge_external_bounds(eg, gpsl::load_overlay(a.overlay));
  Table t{"exclusion-merged",
          {{"r_C", "m"}, {"lambda_plus_internal", "s^-1"}, {"lambda_plus_merged", "s^-1"}, {"source", "text"},
           {"lambda_minus", "s^-1"}},
          {}};
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const auto& m = merged[i];
    const bool ex = eg.rows[i].bounds.excluded;
    t.add_row({m.r_c, bound_cell(m.internal_upper, ex), bound_cell(m.merged_upper, ex && m.source == "internal"),
               m.source, bound_cell(m.lambda_minus, ex)});
  }
  return t;
}

int cmd_figures(const Context& ctx, const FigureArgs& a) {
  Table t;
  std::string hint = "set logscale x";
  const std::string default_length_grid = "-9:-4:51";
  if (a.name == "radius-curve") {
    t = radius_curve(parse_log_grid(a.grid.empty() ? "-3:3:61" : a.grid));
  } else if (a.name == "ratio-curve") {
    t = ratio_curve_table(parse_log_grid(a.grid.empty() ? "-3:3:61" : a.grid));
  } else if (a.name == "profile-compare") {
    gpsl::detail::require_positive(a.ratio, "--ratio");
    t = profile_compare(a.ratio, a.points);
    hint.clear();
  } else if (a.name == "macro-profile-compare") {
    t = macro_profile_compare(a.points);
    hint.clear();
  } else if (a.name == "exclusion-stars") {
    t = exclusion_stars(ctx, a, parse_log_grid(a.grid.empty() ? default_length_grid : a.grid));
    hint = "set logscale xy";
  } else if (a.name == "exclusion-merged") {
    t = exclusion_merged(ctx, a, parse_log_grid(a.grid.empty() ? default_length_grid : a.grid));
    hint = "set logscale xy";
  } else {
    throw UsageError("figures: unknown figure '" + a.name + "'");
  }
  OutputSet out(ctx, "figures", a.out,
                {{"name", a.name}, {"grid", a.grid}, {"fixed", a.fixed}, {"ratio", a.ratio}, {"points", a.points},
                 {"stars", a.stars}, {"star", a.star}, {"overlay", a.overlay}, {"profiles", a.profiles},
                 {"density", a.density}, {"strict", a.strict}, {"sigma_SB", ctx.k.sigma_SB}});
  out.add_table(t, a.gnuplot, hint);
  std::cout << (fs::path(a.out) / (t.name + ".csv")).string() << " (" << t.rows.size() << " rows)\n";
  out.finish(t.name);
  return kOk;
}

// -------------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = 7;
  std::size_t samples = 200000;
  std::size_t configs = 200;
  std::size_t perturbations = 10;
  unsigned threads = 0;
  std::string g = "gaussian:1";
  std::string out = "out";
};

int cmd_verify(const Context& ctx, const VerifyArgs& a) {
  std::vector<std::string> suites;
  if (a.suite == "all") suites = gpsl::verify::suite_names();
  else suites = {a.suite};
  const auto& names = gpsl::verify::suite_names();
  for (const auto& s : suites)
    if (std::find(names.begin(), names.end(), s) == names.end()) throw UsageError("verify: unknown suite '" + s + "'");
  gpsl::verify::SuiteOptions opt{a.seed, a.samples, a.configs, a.perturbations, a.threads};
  const auto profile = gpsl::io::parse_profile_spec(a.g);
  OutputSet out(ctx, "verify", a.out,
                {{"suite", a.suite}, {"samples", a.samples}, {"configs", a.configs},
                 {"perturbations", a.perturbations}, {"g", a.g}},
                a.seed);
  bool all = true;
  for (const auto& s : suites) {
    const auto report = gpsl::verify::run_suite(s, opt, profile);
    const bool pass = report["pass"].get<bool>();
    all = all && pass;
    out.add_text("verify-" + s + ".json", report.dump(2) + "\n");
    std::cout << (pass ? "PASS " : "FAIL ") << s << "\n";
  }
  out.finish("verify-" + a.suite);
  return all ? kOk : kPropertyFailure;
}

// ----------------------------------------------------------------- constants

int cmd_constants(const Context& ctx, bool dump, const std::string& out_file) {
  Json j;
  j["sigma_mode"] = ctx.k.sigma_SB == gpsl::PhysicalConstants::kSigmaPaper    ? "paper"
                    : ctx.k.sigma_SB == gpsl::PhysicalConstants::kSigmaCodata ? "codata"
                                                                              : "custom";
  j["constants"] = gpsl::io::constants_json(ctx.k);
  const auto text = j.dump(2) + "\n";
  if (dump || out_file.empty()) std::cout << text;
  if (!out_file.empty()) {
    std::ofstream f(out_file, std::ios::binary);
    if (!f) throw UsageError("cannot write " + out_file);
    f << text;
  }
  return kOk;
}

int run(const std::vector<std::string>& args);

// -------------------------------------------------------------------- replay

int cmd_replay(const std::string& manifest_path, std::string out_dir) {
  const auto manifest = gpsl::io::read_json_file(manifest_path);
  if (!manifest.contains("argv") || !manifest.contains("outputs"))
    throw gpsl::ParseError(manifest_path + ": not a run manifest");
  auto argv = manifest["argv"].get<std::vector<std::string>>();
  if (out_dir.empty()) {
    std::string tmpl = (fs::temp_directory_path() / "gpsl-replay-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw UsageError("cannot create a temporary directory");
    out_dir = tmpl;
  }
  bool replaced = false;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (argv[i] == "--out" && i + 1 < argv.size()) {
      argv[i + 1] = out_dir;
      replaced = true;
    } else if (argv[i].rfind("--out=", 0) == 0) {
      argv[i] = "--out=" + out_dir;
      replaced = true;
    }
  }
  if (!replaced) {
    argv.push_back("--out");
    argv.push_back(out_dir);
  }
  std::streambuf* saved = std::cout.rdbuf();
  std::ostringstream sink;
  std::cout.rdbuf(sink.rdbuf());
  int rc = 0;
  try {
    rc = run(argv);
  } catch (...) {
    std::cout.rdbuf(saved);
    throw;
  }
  std::cout.rdbuf(saved);
  bool identical = true;
  for (const auto& f : manifest["outputs"]) {
    const auto name = f["file"].get<std::string>();
    const auto path = fs::path(out_dir) / name;
    const auto digest = fs::exists(path) ? gpsl::cli::sha256_hex(gpsl::cli::read_file(path.string())) : "missing";
    const bool same = digest == f["sha256"].get<std::string>();
    identical = identical && same;
    std::cout << (same ? "identical " : "DIFFERS   ") << name << "\n";
  }
  std::cout << "replayed into " << out_dir << " (exit " << rc << ")\n";
  return identical ? kOk : kPropertyFailure;
}

// ---------------------------------------------------------------------- main

int run(const std::vector<std::string>& args) {
  Context ctx;
  ctx.argv = args;

  CLI::App app{"Heating functionals, optimal smearing profiles and neutron-star bounds for the GPSL model"};
  app.set_version_flag("--version", std::string(gpsl::kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", ctx.config_path, "JSON config (constants, sigma_mode, stars); falls back to $GPSL_CONFIG");
  app.add_option("--sigma", ctx.sigma, "Stefan-Boltzmann constant: paper (5.6e-8) or codata")
      ->check(CLI::IsMember({"paper", "codata"}));

  FunctionalArgs fa;
  auto* fn = app.add_subcommand("functional", "Evaluate one heating functional");
  fn->add_option("--kind", fa.kind, "dirichlet | grad-sq (irc) | i0 | irg | pair | two-particle")->required();
  fn->add_option("--g", fa.g, "profile spec, e.g. gaussian:1.0, subgauss:1.9:1.0, quartic:1, ball:1, optimal:rc=1");
  fn->add_option("--gc", fa.gc, "collapse profile spec");
  fn->add_option("--gg", fa.gg, "feedback profile spec");
  fn->add_option("--d", fa.d, "particle separation");
  fn->add_option("--m1", fa.m1, "first mass (two-particle)");
  fn->add_option("--m2", fa.m2, "second mass (two-particle)");
  fn->add_option("--out", fa.out, "directory for CSV/JSON output and manifest");

  FigureArgs ga;
  auto* fig = app.add_subcommand("figures", "Write the data behind a figure");
  fig->add_option("name", ga.name,
                  "radius-curve | profile-compare | ratio-curve | macro-profile-compare | exclusion-stars | "
                  "exclusion-merged")
      ->required();
  fig->add_option("--grid", ga.grid, "log10 grid start:stop:count (ratios, or lengths in m)");
  fig->add_option("--fixed", ga.fixed, "the other smearing length for exclusion grids [m]");
  fig->add_option("--ratio", ga.ratio, "r_G/r_C for profile-compare");
  fig->add_option("--points", ga.points, "radial samples for profile figures")->check(CLI::Range(2, 100000));
  fig->add_option("--stars", ga.stars, "star catalog JSON");
  fig->add_option("--star", ga.star, "star used by exclusion-merged");
  fig->add_option("--overlay", ga.overlay, "external upper-bound CSV (r_C_m, lambda_upper_hz, label)");
  fig->add_option("--profiles", ga.profiles, "optimal | gaussian smearing for the bound coefficients");
  fig->add_option("--density", ga.density, "uniform | tolman_vii star density");
  fig->add_flag("--strict", ga.strict, "use the rounded published bound coefficients");
  fig->add_flag("--gnuplot-stub", ga.gnuplot, "also write a gnuplot script per CSV");
  fig->add_option("--out", ga.out, "output directory");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Run a property suite and write a JSON report");
  ver->add_option("suite", va.suite,
                  "sandwich | counterexample-psl | counterexample-gpsl | closedforms | scaling | "
                  "optimality-perturbation | all")
      ->required();
  ver->add_option("--seed", va.seed, "master seed");
  ver->add_option("--samples", va.samples, "Monte Carlo samples per configuration")->check(CLI::Range(2ul, 1000000000ul));
  ver->add_option("--configs", va.configs, "random configurations for the sandwich suite");
  ver->add_option("--perturbations", va.perturbations, "perturbations for the optimality suite");
  ver->add_option("--threads", va.threads, "worker threads (0 = all cores)");
  ver->add_option("--g", va.g, "profile spec for the sandwich suite");
  ver->add_option("--out", va.out, "output directory");

  bool dump = false;
  std::string const_out;
  auto* con = app.add_subcommand("constants", "Print the effective physical constants");
  con->add_flag("--dump", dump, "print to stdout");
  con->add_option("--out", const_out, "also write to this file");

  std::string manifest_path, replay_out;
  auto* rep = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  rep->add_option("manifest", manifest_path, "path to a *.manifest.json")->required();
  rep->add_option("--out", replay_out, "directory for the replayed outputs (default: fresh temp dir)");

  std::vector<const char*> cargv{"gpsl"};
  for (const auto& s : args) cargv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (rep->parsed()) return cmd_replay(manifest_path, replay_out);

  if (ctx.config_path.empty())
    if (const char* env = std::getenv("GPSL_CONFIG"); env && *env) ctx.config_path = env;
  if (!ctx.config_path.empty()) {
    ctx.config = gpsl::io::read_json_file(ctx.config_path);
    ctx.k = gpsl::io::apply_constants_overrides(ctx.k, ctx.config);
  }
  if (!ctx.sigma.empty())
    ctx.k.sigma_SB = ctx.sigma == "paper" ? gpsl::PhysicalConstants::kSigmaPaper : gpsl::PhysicalConstants::kSigmaCodata;

  if (fn->parsed()) return cmd_functional(ctx, fa);
  if (fig->parsed()) return cmd_figures(ctx, ga);
  if (ver->parsed()) return cmd_verify(ctx, va);
  if (con->parsed()) return cmd_constants(ctx, dump, const_out);
  return kUsage;
}

} // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const gpsl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const gpsl::MalformedOverlay& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const gpsl::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const gpsl::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}
