#pragma once

#include <optional>
#include <string>

#include "slope/tuning.hpp"

namespace slope::cli {

/// Tuning vector from a spec string, for dimension p:
///   const:L       lambda_i = L
///   arith:a,b     lambda_i = a (p + 1 - i) + b
///   n23[:N]       lambda_i = (p + 1 - i) N^{2/3}; N defaults to the sample size
///   file:PATH     vector read from a CSV file
TuningVector parse_tuning_spec(const std::string& spec, Eigen::Index p, std::optional<long long> n = std::nullopt);

}  // namespace slope::cli
