#pragma once

#include <string>

#include "slope/tuning.hpp"

namespace slope::cli {

/// Headerless comma-separated rows. Missing files raise IoError, malformed
/// numbers or ragged rows raise InputError.
Matrix read_matrix(const std::string& path);

/// Single-column file (a single row is accepted too).
Vector read_vector(const std::string& path);

void write_vector(const std::string& path, const Vector& v);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::string& path, const std::string& text);

}  // namespace slope::cli
