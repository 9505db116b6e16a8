#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace flsarb {

// %.17g: lossless for doubles and byte-stable across runs.
std::string format_double(double v);

// Splits one CSV line on commas (no quoting), trimming surrounding blanks and
// a trailing '\r'.
std::vector<std::string> split_csv_line(std::string_view line);

// Opens `path` for writing or throws std::runtime_error.
std::ofstream open_output(const std::filesystem::path& path);

// `t,beta_1,...,beta_p[,e,Q]`; t counts from 1. `innovations` and
// `forecast_var` are either both empty or both of length path.rows().
void write_coefficient_csv(const std::filesystem::path& path, const Eigen::MatrixXd& path_rows,
                           const Eigen::VectorXd& innovations = {},
                           const Eigen::VectorXd& forecast_var = {});

}  // namespace flsarb
