#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "slope/config_json.hpp"
#include "slope/errors.hpp"
#include "slope/simulation.hpp"
#include "slope/version.hpp"

namespace slope {

using nlohmann::json;

namespace {

std::string full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// 4-decimal display value; NaN becomes null.
json display(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::round(v * 1e4) / 1e4;
}

json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ScheduleKind schedule_from_string(const std::string& s) {
  if (s == "arithmetic_n23") return ScheduleKind::kArithmeticN23;
  if (s == "scaled_arithmetic") return ScheduleKind::kScaledArithmetic;
  throw InputError("unknown schedule '" + s + "' (expected arithmetic_n23 or scaled_arithmetic)");
}

template <typename T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const SimulationConfig& c) {
  json clusters = json::array();
  for (const auto& s : c.clusters) clusters.push_back({{"count", s.count}, {"magnitude", s.magnitude}});
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(to_string(m));
  json j = {{"n", c.n},
            {"p", c.p},
            {"clusters", clusters},
            {"sigma", c.sigma},
            {"slope_schedule", to_string(c.slope_schedule)},
            {"slope_factor", c.slope_factor},
            {"slope_exponent", nullptr},
            {"noise_scaled_tuning", c.noise_scaled_tuning},
            {"lasso_ls_factor", c.lasso_ls_factor},
            {"cv_folds", c.cv_folds},
            {"cv_grid_size", c.cv_grid_size},
            {"cv_grid_ratio", c.cv_grid_ratio},
            {"replications", c.replications},
            {"master_seed", c.master_seed},
            {"methods", methods},
            {"normalize", c.normalize},
            {"tie_tol", c.tie_tol}};
  if (c.slope_exponent) j["slope_exponent"] = *c.slope_exponent;
  return j;
}

SimulationConfig simulation_config_from_json(const json& j, SimulationConfig c) {
  if (!j.is_object()) throw InputError("simulation config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "n") {
      c.n = get<Eigen::Index>(j, "n");
    } else if (key == "p") {
      c.p = get<Eigen::Index>(j, "p");
    } else if (key == "clusters") {
      if (!value.is_array()) throw InputError("config key 'clusters' must be an array");
      c.clusters.clear();
      for (const auto& item : value) {
        if (!item.is_object()) throw InputError("each cluster must be an object with count and magnitude");
        c.clusters.push_back({get<int>(item, "count"), get<double>(item, "magnitude")});
      }
    } else if (key == "sigma") {
      c.sigma = get<double>(j, "sigma");
    } else if (key == "slope_schedule") {
      c.slope_schedule = schedule_from_string(get<std::string>(j, "slope_schedule"));
    } else if (key == "slope_factor") {
      c.slope_factor = get<double>(j, "slope_factor");
    } else if (key == "slope_exponent") {
      if (value.is_null()) {
        c.slope_exponent.reset();
      } else {
        c.slope_exponent = get<double>(j, "slope_exponent");
      }
    } else if (key == "noise_scaled_tuning") {
      c.noise_scaled_tuning = get<bool>(j, "noise_scaled_tuning");
    } else if (key == "lasso_ls_factor") {
      c.lasso_ls_factor = get<double>(j, "lasso_ls_factor");
    } else if (key == "cv_folds") {
      c.cv_folds = get<int>(j, "cv_folds");
    } else if (key == "cv_grid_size") {
      c.cv_grid_size = get<int>(j, "cv_grid_size");
    } else if (key == "cv_grid_ratio") {
      c.cv_grid_ratio = get<double>(j, "cv_grid_ratio");
    } else if (key == "replications") {
      c.replications = get<int>(j, "replications");
    } else if (key == "master_seed") {
      c.master_seed = get<std::uint64_t>(j, "master_seed");
    } else if (key == "methods") {
      if (!value.is_array()) throw InputError("config key 'methods' must be an array of names");
      c.methods.clear();
      for (const auto& item : value) {
        if (!item.is_string()) throw InputError("method names must be strings");
        c.methods.push_back(method_from_string(item.get<std::string>()));
      }
    } else if (key == "normalize") {
      c.normalize = get<bool>(j, "normalize");
    } else if (key == "tie_tol") {
      c.tie_tol = get<double>(j, "tie_tol");
    } else {
      throw InputError("unknown config key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

json to_json(const TuningSchedule& s) {
  return {{"kind", to_string(s.kind)}, {"p", s.p}, {"factor", s.factor}, {"exponent", s.exponent}, {"delta", s.delta}};
}

void write_replications_csv(std::ostream& out, const MonteCarloSummary& summary) {
  out << "rep,method,mse,recovered,support_recovered\n";
  for (const auto& rep : summary.replications) {
    for (const auto& o : rep.outcomes) {
      out << rep.rep << ',' << to_string(o.method) << ',' << (o.error ? "nan" : full(o.mse)) << ','
          << int(o.recovered) << ',' << int(o.support_recovered) << '\n';
    }
  }
  if (!out) throw IoError("failed writing replication CSV");
}

std::string summary_to_json(const MonteCarloSummary& summary, int indent) {
  json methods = json::array();
  for (const auto& s : summary.methods) {
    methods.push_back({{"method", to_string(s.method)},
                       {"count", s.count},
                       {"failures", s.failures},
                       {"mean_mse", finite_or_null(s.mean_mse)},
                       {"sd_mse", finite_or_null(s.sd_mse)},
                       {"median_mse", finite_or_null(s.median_mse)},
                       {"p01_mse", finite_or_null(s.p01_mse)},
                       {"p99_mse", finite_or_null(s.p99_mse)},
                       {"pattern_recovery_rate", s.pattern_recovery_rate},
                       {"support_recovery_rate", s.support_recovery_rate},
                       {"mean_mse_given_recovery", finite_or_null(s.mean_mse_given_recovery)},
                       {"display", {{"mean_mse", display(s.mean_mse)}, {"sd_mse", display(s.sd_mse)}}}});
  }
  json errors = json::array();
  for (const auto& rep : summary.replications) {
    for (const auto& o : rep.outcomes) {
      if (o.error) errors.push_back({{"rep", rep.rep}, {"method", to_string(o.method)}, {"error", *o.error}});
    }
  }
  json j = {{"version", kVersion},
            {"config", to_json(summary.config)},
            {"slope_tuning_lambda1", summary.config.slope_tuning()[0]},
            {"methods", methods},
            {"ordering_fraction", finite_or_null(summary.ordering_fraction)},
            {"errors", errors}};
  return j.dump(indent);
}

void write_recovery_csv(std::ostream& out, const RecoveryCurve& curve) {
  out << "n,recovered,support_recovered,all_zero,rate,support_rate\n";
  for (const auto& r : curve.rows) {
    out << r.n << ',' << r.recovered << ',' << r.support_recovered << ',' << r.all_zero << ',' << full(r.rate) << ','
        << full(r.support_rate) << '\n';
  }
  if (!out) throw IoError("failed writing recovery CSV");
}

std::string recovery_to_json(const RecoveryConfig& config, const RecoveryCurve& curve, int indent) {
  json rows = json::array();
  for (const auto& r : curve.rows) {
    rows.push_back({{"n", r.n},
                    {"recovered", r.recovered},
                    {"support_recovered", r.support_recovered},
                    {"all_zero", r.all_zero},
                    {"rate", r.rate},
                    {"support_rate", r.support_rate}});
  }
  json beta = json::array();
  for (double b : config.beta) beta.push_back(b);
  json cfg = {{"p", config.p},
              {"beta", beta},
              {"schedule", to_json(config.schedule)},
              {"n_list", config.n_list},
              {"replications", config.replications},
              {"seed", config.seed},
              {"sigma", config.sigma}};
  json j = {{"version", kVersion},
            {"config", cfg},
            {"rows", rows},
            {"non_decreasing", curve.non_decreasing},
            {"trend", curve.trend}};
  return j.dump(indent);
}

namespace {

constexpr double kWidth = 640, kHeight = 400, kMargin = 50;

std::string polyline(const std::vector<std::pair<double, double>>& pts, const char* color) {
  std::ostringstream s;
  s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : pts) s << x << ',' << y << ' ';
  s << "\"/>\n";
  return s.str();
}

std::string frame(const std::string& title) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"25\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n"
    << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin << "\" height=\""
    << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"#888\"/>\n";
  return s.str();
}

}  // namespace

std::string recovery_svg(const RecoveryCurve& curve) {
  std::vector<std::pair<double, double>> pts;
  if (curve.rows.empty()) return frame("pattern recovery rate") + "</svg>\n";
  const double lo = std::log10(static_cast<double>(curve.rows.front().n));
  const double hi = std::log10(static_cast<double>(curve.rows.back().n));
  const double span = hi > lo ? hi - lo : 1.0;
  std::ostringstream marks;
  for (const auto& r : curve.rows) {
    const double x = kMargin + (std::log10(static_cast<double>(r.n)) - lo) / span * (kWidth - 2 * kMargin);
    const double y = kHeight - kMargin - r.rate * (kHeight - 2 * kMargin);
    pts.emplace_back(x, y);
    marks << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"black\"/>\n"
          << "<text x=\"" << x << "\" y=\"" << kHeight - kMargin + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
          << r.n << "</text>\n";
  }
  return frame("pattern recovery rate vs n") + polyline(pts, "black") + marks.str() + "</svg>\n";
}

std::string signal_overlay_svg(const Vector& truth, const Vector& fitted, Eigen::Index first, Eigen::Index last,
                               const std::string& title) {
  if (truth.size() != fitted.size()) throw InputError("signal overlay: length mismatch");
  if (first < 0 || last > truth.size() || first >= last) throw InputError("signal overlay: bad coordinate range");
  double ymin = 0.0, ymax = 0.0;
  for (Eigen::Index i = first; i < last; ++i) {
    ymin = std::min({ymin, truth[i], fitted[i]});
    ymax = std::max({ymax, truth[i], fitted[i]});
  }
  const double yspan = ymax > ymin ? ymax - ymin : 1.0;
  const double xspan = last - first > 1 ? static_cast<double>(last - first - 1) : 1.0;
  auto project = [&](const Vector& v) {
    std::vector<std::pair<double, double>> pts;
    for (Eigen::Index i = first; i < last; ++i) {
      pts.emplace_back(kMargin + static_cast<double>(i - first) / xspan * (kWidth - 2 * kMargin),
                       kHeight - kMargin - (v[i] - ymin) / yspan * (kHeight - 2 * kMargin));
    }
    return pts;
  };
  return frame(title) + polyline(project(truth), "black") + polyline(project(fitted), "red") + "</svg>\n";
}

}  // namespace slope
