#include "tuning_spec.hpp"

#include <cstdlib>

#include "csv_io.hpp"
#include "slope/errors.hpp"
#include "slope/theory.hpp"

namespace slope::cli {

namespace {

double number(const std::string& s, const std::string& spec) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw InputError("tuning spec '" + spec + "': bad number '" + s + "'");
  return v;
}

}  // namespace

TuningVector parse_tuning_spec(const std::string& spec, Eigen::Index p, std::optional<long long> n) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "const") return TuningVector::constant(p, number(arg, spec));
  if (kind == "arith") {
    const auto comma = arg.find(',');
    const double a = number(arg.substr(0, comma), spec);
    const double b = comma == std::string::npos ? 0.0 : number(arg.substr(comma + 1), spec);
    return TuningVector::arithmetic(p, a, b);
  }
  if (kind == "n23") {
    long long size = 0;
    if (!arg.empty()) {
      const double v = number(arg, spec);
      if (v < 1 || v != static_cast<double>(static_cast<long long>(v))) {
        throw InputError("tuning spec '" + spec + "': sample size must be a positive integer");
      }
      size = static_cast<long long>(v);
    } else if (n) {
      size = *n;
    } else {
      throw InputError("tuning spec 'n23' needs a sample size here (write n23:N)");
    }
    return make_schedule(ScheduleKind::kArithmeticN23, p).at(size);
  }
  if (kind == "file") {
    TuningVector lam(read_vector(arg));
    if (lam.size() != p) {
      throw InputError("tuning file '" + arg + "' has " + std::to_string(lam.size()) + " entries, expected " +
                       std::to_string(p));
    }
    return lam;
  }
  throw InputError("unknown tuning spec '" + spec + "' (expected const:L, arith:a,b, n23[:N] or file:PATH)");
}

}  // namespace slope::cli
