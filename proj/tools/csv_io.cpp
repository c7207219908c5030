#include "csv_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "slope/errors.hpp"

namespace slope::cli {

namespace {

double parse_number(const std::string& cell, const std::string& where) {
  std::size_t start = cell.find_first_not_of(" \t\r");
  std::size_t stop = cell.find_last_not_of(" \t\r");
  if (start == std::string::npos) throw InputError(where + ": empty field");
  const std::string s = cell.substr(start, stop - start + 1);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) throw InputError(where + ": cannot parse '" + s + "'");
  return v;
}

}  // namespace

Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_number(cell, path + ":" + std::to_string(line_no)));
    if (!line.empty() && line.back() == ',') throw InputError(path + ":" + std::to_string(line_no) + ": trailing comma");
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(rows.front().size()) +
                       " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (in.bad()) throw IoError("error reading '" + path + "'");
  if (rows.empty()) throw InputError("'" + path + "' contains no data");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

Vector read_vector(const std::string& path) {
  const Matrix m = read_matrix(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw InputError("'" + path + "' is a " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                   " matrix, expected a single column");
}

void write_vector(const std::string& path, const Vector& v) {
  std::ostringstream s;
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    s << buf;
  }
  write_text(path, s.str());
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("error writing '" + path + "'");
}

}  // namespace slope::cli
