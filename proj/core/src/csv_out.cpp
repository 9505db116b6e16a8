#include "flsarb/csv_out.hpp"

#include <cstdio>
#include <stdexcept>

#include "flsarb/error.hpp"

namespace flsarb {

std::string format_double(double v) {
    char buf[40];
    if (v == 0.0) v = 0.0;  // no "-0" in output files
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view cell =
            line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
        out.emplace_back(cell);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

void write_coefficient_csv(const std::filesystem::path& path, const Eigen::MatrixXd& path_rows,
                           const Eigen::VectorXd& innovations, const Eigen::VectorXd& forecast_var) {
    const bool diag = innovations.size() > 0;
    if (diag && (innovations.size() != path_rows.rows() || forecast_var.size() != path_rows.rows())) {
        throw InvalidArgument("write_coefficient_csv: diagnostics length mismatch");
    }
    auto out = open_output(path);
    out << "t";
    for (Eigen::Index j = 0; j < path_rows.cols(); ++j) out << ",beta_" << (j + 1);
    if (diag) out << ",e,Q";
    out << '\n';
    for (Eigen::Index t = 0; t < path_rows.rows(); ++t) {
        out << (t + 1);
        for (Eigen::Index j = 0; j < path_rows.cols(); ++j) out << ',' << format_double(path_rows(t, j));
        if (diag) out << ',' << format_double(innovations(t)) << ',' << format_double(forecast_var(t));
        out << '\n';
    }
}

}  // namespace flsarb
