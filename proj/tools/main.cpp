#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "csv_io.hpp"
#include "slope/config_json.hpp"
#include "slope/errors.hpp"
#include "slope/estimators.hpp"
#include "slope/pattern.hpp"
#include "slope/simulation.hpp"
#include "slope/sorted_l1.hpp"
#include "slope/theory.hpp"
#include "slope/version.hpp"
#include "tuning_spec.hpp"

using nlohmann::json;

namespace slope::cli {

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

json to_json(const Vector& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

json to_json(const PatternVector& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.size(); ++i) a.push_back(m[i]);
  return a;
}

std::string default_out_dir() {
  const char* env = std::getenv("SLOPE_OUTPUT_DIR");
  return env && *env ? env : "slope_out";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw InputError(std::string(what) + ": bad entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError(std::string(what) + " is empty");
  return out;
}

void emit(const json& report, const std::string& output) {
  const std::string text = report.dump(2) + "\n";
  if (!output.empty()) write_text(output, text);
  std::cout << text;
}

// ---- prox ----

struct ProxArgs {
  std::string input;
  std::string lambda;
  std::string output;
  std::string vector_out;
  double tie_tol = kDefaultTieTolerance;
};

int run_prox(const ProxArgs& a) {
  const Vector y = read_vector(a.input);
  const TuningVector lam = parse_tuning_spec(a.lambda, y.size());
  const MoreauSplit split = moreau_split(y, lam);
  json report = {{"version", kVersion},
                 {"config", {{"input", a.input}, {"lambda_spec", a.lambda}, {"lambda", to_json(lam.values())},
                             {"tie_tol", a.tie_tol}}},
                 {"prox", to_json(split.prox)},
                 {"penalty", sorted_l1_norm(split.prox, lam)},
                 {"dual_norm_input", dual_norm(y, lam)},
                 {"pi", to_json(split.projection.pi)},
                 {"slack", to_json(split.projection.slack)},
                 {"min_slack", split.projection.min_slack()},
                 {"pattern", to_json(pattern_of(split.prox, a.tie_tol))}};
  if (!a.vector_out.empty()) write_vector(a.vector_out, split.prox);
  emit(report, a.output);
  return 0;
}

// ---- fit ----

struct FitArgs {
  std::string x, y;
  std::string method = "slope";
  std::string lambda;
  bool general = false;
  double tol = 1e-8;
  int max_iter = 100000;
  double tie_tol = kDefaultTieTolerance;
  std::string output;
};

Fit fit_penalized(const LinearModel& model, Method kind, const TuningVector& lam, const FitArgs& a) {
  SolverOptions opts;
  opts.tol = a.tol;
  opts.max_iter = a.max_iter;
  if (kind == Method::kLasso) {
    if (!lam.is_constant()) throw InputError("lasso needs a constant tuning vector (e.g. const:L)");
    if (!a.general) return lasso_orthogonal(model, lam[0]);
    Fit fit = slope_general(model, lam, opts);
    fit.method = Method::kLasso;
    return fit;
  }
  return a.general ? slope_general(model, lam, opts) : slope_orthogonal(model, lam);
}

int run_fit(const FitArgs& a) {
  const LinearModel model(read_matrix(a.x), read_vector(a.y));
  const Method method = method_from_string(a.method);
  json config = {{"x", a.x}, {"y", a.y}, {"method", to_string(method)}, {"general", a.general},
                 {"tol", a.tol}, {"max_iter", a.max_iter}, {"tie_tol", a.tie_tol}};

  Fit fit;
  if (method == Method::kOls) {
    fit = ols(model);
  } else {
    if (a.lambda.empty()) throw InputError("--lambda is required for method " + to_string(method));
    const TuningVector lam = parse_tuning_spec(a.lambda, model.p(), model.n());
    config["lambda_spec"] = a.lambda;
    config["lambda"] = to_json(lam.values());
    const bool lasso_family = method == Method::kLasso || method == Method::kLassoLs;
    const Fit penalized = fit_penalized(model, lasso_family ? Method::kLasso : Method::kSlope, lam, a);
    if (method == Method::kSlopeLs) {
      fit = debias(model, pattern_of(penalized.beta, a.tie_tol));
    } else if (method == Method::kLassoLs) {
      fit = debias(model, SignVector::of(penalized.beta));
    } else {
      fit = penalized;
    }
  }

  json report = {{"version", kVersion},
                 {"config", config},
                 {"n", model.n()},
                 {"p", model.p()},
                 {"ortho_scale", model.ortho_scale() ? json(*model.ortho_scale()) : json(nullptr)},
                 {"method", to_string(fit.method)},
                 {"beta", to_json(fit.beta)},
                 {"pattern", to_json(pattern_of(fit.beta, a.tie_tol))},
                 {"objective", fit.objective},
                 {"iterations", fit.iterations},
                 {"converged", fit.converged},
                 {"diagnostics", fit.diagnostics}};
  if (fit.certificate) {
    report["certificate"] = {{"pi", to_json(fit.certificate->pi)}, {"min_slack", fit.certificate->min_slack()}};
  } else {
    report["certificate"] = nullptr;
  }
  emit(report, a.output);
  return 0;
}

// ---- check ----

struct CheckArgs {
  std::string x, y, ols_path;
  double c = 1.0;
  std::string lambda;
  long p0 = -1;
  std::string support;
  std::string output;
};

int run_check(const CheckArgs& a) {
  Vector ols_beta;
  double c = a.c;
  json config = {{"lambda_spec", a.lambda}};
  if (!a.ols_path.empty()) {
    if (!a.x.empty() || !a.y.empty()) throw InputError("give either --ols or --x/--y, not both");
    ols_beta = read_vector(a.ols_path);
    config["ols"] = a.ols_path;
  } else {
    if (a.x.empty() || a.y.empty()) throw InputError("check needs --ols or both --x and --y");
    const LinearModel model(read_matrix(a.x), read_vector(a.y));
    const auto scale = model.ortho_scale();
    if (!scale) throw NumericalError("check requires an orthogonal design (X'X = c I)");
    c = *scale;
    ols_beta = model.xty() / c;
    config["x"] = a.x;
    config["y"] = a.y;
  }
  const Eigen::Index p = ols_beta.size();
  const TuningVector lam = parse_tuning_spec(a.lambda, p);
  config["lambda"] = to_json(lam.values());
  config["c"] = c;

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) perm[static_cast<std::size_t>(i)] = i;
  Eigen::Index p0 = a.p0;
  if (!a.support.empty()) {
    std::vector<Eigen::Index> support;
    for (double v : parse_list(a.support, "--support")) {
      if (v < 0 || v != static_cast<double>(static_cast<Eigen::Index>(v))) {
        throw InputError("--support entries must be non-negative integers");
      }
      support.push_back(static_cast<Eigen::Index>(v));
    }
    if (a.p0 >= 0 && a.p0 != static_cast<long>(support.size())) {
      throw InputError("--p0 disagrees with the size of --support");
    }
    perm = leading_support_permutation(p, support);
    p0 = static_cast<Eigen::Index>(support.size());
    config["support"] = support;
  }
  if (p0 < 0) throw InputError("check needs --p0 or --support");
  config["p0"] = p0;

  const Vector ordered = permute(ols_beta, perm);
  const auto report = support_conditions(ordered, lam, c, p0);
  json pairs = json::array();
  for (const auto& pair : cluster_condition(ols_beta, lam, c)) {
    pairs.push_back({{"rank", pair.rank}, {"first", pair.first}, {"second", pair.second}});
  }
  const Vector prox = prox_sorted_l1(ols_beta, lam.divided(c));
  json out = {{"version", kVersion},
              {"config", config},
              {"ols", to_json(ols_beta)},
              {"permutation", perm},
              {"cluster_pairs", pairs},
              {"support_conditions",
               {{"cond_a", report.cond_a}, {"cond_b", report.cond_b}, {"cond_c", report.cond_c},
                {"all", report.all}, {"margin_a", report.margin_a}, {"margin_b", report.margin_b},
                {"margin_c", report.margin_c}}},
              {"prox", to_json(prox)},
              {"prox_support", support_of(prox)}};
  emit(out, a.output);
  return 0;
}

// ---- simulate ----

struct SimulateArgs {
  std::string config;
  std::string out;
  int jobs = 1;
  bool svg = false;
  json overrides = json::object();
};

int run_simulate(const SimulateArgs& a) {
  SimulationConfig config;
  if (!a.config.empty()) config = simulation_config_from_json(read_json_file(a.config));
  config = simulation_config_from_json(a.overrides, config);
  if (a.jobs < 1) throw InputError("--jobs must be >= 1");
  const std::string dir = a.out.empty() ? default_out_dir() : a.out;

  const MonteCarloSummary summary = monte_carlo(config, a.jobs);
  std::ostringstream csv;
  write_replications_csv(csv, summary);
  write_text(dir + "/replications.csv", csv.str());
  const std::string text = summary_to_json(summary) + "\n";
  write_text(dir + "/summary.json", text);
  if (a.svg && !summary.replications.empty()) {
    const ReplicationResult& first = summary.replications.front();
    for (const auto& o : first.outcomes) {
      if (o.method == Method::kSlopeLs && !o.error) {
        write_text(dir + "/signal.svg",
                   signal_overlay_svg(first.beta_true, o.beta, 0, first.beta_true.size(), "replication 0, SLOPE-LS"));
      }
    }
  }
  std::cout << text;
  return 0;
}

// ---- recovery-curve ----

struct RecoveryArgs {
  std::string config;
  std::string out;
  int jobs = 1;
  bool svg = false;
  std::string beta, n_list, schedule;
  std::optional<double> factor, sigma;
  std::optional<int> replications;
  std::optional<std::uint64_t> seed;
};

TuningSchedule schedule_from_name(const std::string& name, Eigen::Index p, std::optional<double> factor) {
  ScheduleParams params;
  params.factor = factor;
  if (name == "arithmetic_n23" || name == "n23") return make_schedule(ScheduleKind::kArithmeticN23, p, params);
  if (name == "scaled_arithmetic" || name == "scaled") return make_schedule(ScheduleKind::kScaledArithmetic, p, params);
  if (name.rfind("ratio:", 0) == 0) return constant_ratio_schedule(p, parse_list(name.substr(6), "ratio")[0]);
  throw InputError("unknown schedule '" + name + "' (expected arithmetic_n23, scaled_arithmetic or ratio:R)");
}

int run_recovery(const RecoveryArgs& a) {
  std::vector<double> beta = {3, 3, 2, 2, 0, 0};
  std::vector<long long> n_list = {100, 1000, 10000};
  std::string schedule = "arithmetic_n23";
  std::optional<double> factor;
  RecoveryConfig rc;
  if (!a.config.empty()) {
    const json j = read_json_file(a.config);
    if (!j.is_object()) throw InputError("recovery config must be a JSON object");
    try {
      for (const auto& [key, value] : j.items()) {
        if (key == "beta") {
          beta = value.get<std::vector<double>>();
        } else if (key == "n_list") {
          n_list = value.get<std::vector<long long>>();
        } else if (key == "schedule") {
          schedule = value.get<std::string>();
        } else if (key == "factor") {
          factor = value.get<double>();
        } else if (key == "replications") {
          rc.replications = value.get<int>();
        } else if (key == "seed") {
          rc.seed = value.get<std::uint64_t>();
        } else if (key == "sigma") {
          rc.sigma = value.get<double>();
        } else {
          throw InputError("unknown recovery config key '" + key + "'");
        }
      }
    } catch (const json::exception& e) {
      throw InputError(std::string("recovery config: ") + e.what());
    }
  }
  if (!a.beta.empty()) beta = parse_list(a.beta, "--beta");
  if (!a.n_list.empty()) {
    n_list.clear();
    for (double v : parse_list(a.n_list, "--n-list")) n_list.push_back(static_cast<long long>(v));
  }
  if (!a.schedule.empty()) schedule = a.schedule;
  if (a.factor) factor = a.factor;
  if (a.replications) rc.replications = *a.replications;
  if (a.seed) rc.seed = *a.seed;
  if (a.sigma) rc.sigma = *a.sigma;
  if (a.jobs < 1) throw InputError("--jobs must be >= 1");

  rc.beta = Eigen::Map<const Vector>(beta.data(), static_cast<Eigen::Index>(beta.size()));
  rc.p = rc.beta.size();
  rc.n_list = n_list;
  rc.schedule = schedule_from_name(schedule, rc.p, factor);
  const std::string dir = a.out.empty() ? default_out_dir() : a.out;

  const RecoveryCurve curve = recovery_curve(rc, a.jobs);
  std::ostringstream csv;
  write_recovery_csv(csv, curve);
  write_text(dir + "/recovery.csv", csv.str());
  const std::string text = recovery_to_json(rc, curve) + "\n";
  write_text(dir + "/recovery.json", text);
  if (a.svg) write_text(dir + "/recovery.svg", recovery_svg(curve));
  std::cout << text;
  return 0;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (std::string(e.what()).find("not orthogonal") != std::string::npos) {
      std::cerr << "hint: pass --general to use the iterative solver\n";
    }
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sorted-l1 penalized regression toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  std::function<int()> action;

  ProxArgs prox;
  auto* cmd_prox = app.add_subcommand("prox", "Proximal operator of the sorted-l1 norm");
  cmd_prox->add_option("--input,-i", prox.input, "CSV vector")->required();
  cmd_prox->add_option("--lambda,-l", prox.lambda, "tuning spec: const:L, arith:a,b, n23:N, file:PATH")->required();
  cmd_prox->add_option("--output,-o", prox.output, "write the JSON report here too");
  cmd_prox->add_option("--vector-out", prox.vector_out, "write the prox vector as CSV");
  cmd_prox->add_option("--tie-tol", prox.tie_tol, "relative tolerance for pattern ties");
  cmd_prox->callback([&] { action = [&] { return run_prox(prox); }; });

  FitArgs fit;
  auto* cmd_fit = app.add_subcommand("fit", "Fit ols, slope, lasso, slope-ls or lasso-ls");
  cmd_fit->add_option("--x,-x", fit.x, "CSV design matrix")->required();
  cmd_fit->add_option("--y,-y", fit.y, "CSV response vector")->required();
  cmd_fit->add_option("--method,-m", fit.method, "ols | slope | lasso | slope-ls | lasso-ls");
  cmd_fit->add_option("--lambda,-l", fit.lambda, "tuning spec; n23 without N uses the sample size");
  cmd_fit->add_flag("--general", fit.general, "iterative solver for non-orthogonal designs");
  cmd_fit->add_option("--tol", fit.tol, "duality-gap tolerance of the iterative solver");
  cmd_fit->add_option("--max-iter", fit.max_iter, "iteration cap of the iterative solver");
  cmd_fit->add_option("--tie-tol", fit.tie_tol, "relative tolerance for pattern ties");
  cmd_fit->add_option("--output,-o", fit.output, "write the JSON report here too");
  cmd_fit->callback([&] { action = [&] { return run_fit(fit); }; });

  CheckArgs check;
  auto* cmd_check = app.add_subcommand("check", "Cluster and support conditions under an orthogonal design");
  cmd_check->add_option("--ols", check.ols_path, "CSV vector of OLS coefficients");
  cmd_check->add_option("--c", check.c, "scale c with X'X = c I (with --ols)");
  cmd_check->add_option("--x,-x", check.x, "CSV design matrix");
  cmd_check->add_option("--y,-y", check.y, "CSV response vector");
  cmd_check->add_option("--lambda,-l", check.lambda, "tuning spec")->required();
  cmd_check->add_option("--p0", check.p0, "declared support = first p0 coordinates");
  cmd_check->add_option("--support", check.support, "comma-separated 0-based support indices");
  cmd_check->add_option("--output,-o", check.output, "write the JSON report here too");
  cmd_check->callback([&] { action = [&] { return run_check(check); }; });

  SimulateArgs sim;
  std::optional<long long> n, p, reps, folds;
  std::optional<std::uint64_t> seed;
  std::optional<double> sigma, ls_factor, slope_factor;
  std::optional<std::string> schedule, methods;
  bool normalize = false, raw_tuning = false;
  auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo comparison of OLS, LASSO, LASSO-LS, SLOPE, SLOPE-LS");
  cmd_sim->add_option("--config,-c", sim.config, "JSON config file; flags override its values");
  cmd_sim->add_option("--out", sim.out, "output directory (default $SLOPE_OUTPUT_DIR or ./slope_out)");
  cmd_sim->add_option("--jobs,-j", sim.jobs, "worker threads");
  cmd_sim->add_flag("--svg", sim.svg, "also write signal.svg for replication 0");
  cmd_sim->add_option("--n", n);
  cmd_sim->add_option("--p", p);
  cmd_sim->add_option("--sigma", sigma);
  cmd_sim->add_option("--replications,-r", reps);
  cmd_sim->add_option("--seed", seed);
  cmd_sim->add_option("--cv-folds", folds);
  cmd_sim->add_option("--lasso-ls-factor", ls_factor);
  cmd_sim->add_option("--slope-factor", slope_factor);
  cmd_sim->add_option("--schedule", schedule, "scaled_arithmetic | arithmetic_n23");
  cmd_sim->add_option("--methods", methods, "comma-separated subset of ols,lasso,lasso-ls,slope,slope-ls");
  cmd_sim->add_flag("--normalize", normalize, "scale design columns to unit norm");
  cmd_sim->add_flag("--no-noise-scaling", raw_tuning, "use the tuning vector without multiplying by sigma");
  cmd_sim->callback([&] {
    json& o = sim.overrides;
    if (n) o["n"] = *n;
    if (p) o["p"] = *p;
    if (sigma) o["sigma"] = *sigma;
    if (reps) o["replications"] = *reps;
    if (seed) o["master_seed"] = *seed;
    if (folds) o["cv_folds"] = *folds;
    if (ls_factor) o["lasso_ls_factor"] = *ls_factor;
    if (slope_factor) o["slope_factor"] = *slope_factor;
    if (schedule) o["slope_schedule"] = *schedule;
    if (methods) {
      json list = json::array();
      std::stringstream ss(*methods);
      std::string item;
      while (std::getline(ss, item, ',')) list.push_back(item);
      o["methods"] = list;
    }
    if (normalize) o["normalize"] = true;
    if (raw_tuning) o["noise_scaled_tuning"] = false;
    action = [&] { return run_simulate(sim); };
  });

  RecoveryArgs rec;
  auto* cmd_rec = app.add_subcommand("recovery-curve", "Pattern recovery frequency against sample size");
  cmd_rec->add_option("--config,-c", rec.config, "JSON config file; flags override its values");
  cmd_rec->add_option("--out", rec.out, "output directory (default $SLOPE_OUTPUT_DIR or ./slope_out)");
  cmd_rec->add_option("--jobs,-j", rec.jobs, "worker threads");
  cmd_rec->add_flag("--svg", rec.svg, "also write recovery.svg");
  cmd_rec->add_option("--beta", rec.beta, "comma-separated true coefficients");
  cmd_rec->add_option("--n-list", rec.n_list, "comma-separated sample sizes");
  cmd_rec->add_option("--schedule", rec.schedule, "arithmetic_n23 | scaled_arithmetic | ratio:R");
  cmd_rec->add_option("--factor", rec.factor, "schedule factor");
  cmd_rec->add_option("--replications,-r", rec.replications);
  cmd_rec->add_option("--seed", rec.seed);
  cmd_rec->add_option("--sigma", rec.sigma);
  cmd_rec->callback([&] { action = [&] { return run_recovery(rec); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  return guarded(action);
}

}  // namespace slope::cli

int main(int argc, char** argv) { return slope::cli::main(argc, argv); }
