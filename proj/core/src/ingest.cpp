#include "flsarb/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "flsarb/csv_out.hpp"
#include "flsarb/error.hpp"

namespace flsarb {
namespace {

constexpr double kHole = std::numeric_limits<double>::quiet_NaN();

bool parse_number(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::string where(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line) + ": ";
}

PriceTable select_rows(const PriceTable& t, const std::vector<Eigen::Index>& rows) {
    PriceTable out;
    out.labels = t.labels;
    out.prices.resize(static_cast<Eigen::Index>(rows.size()), t.prices.cols());
    out.dates.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.dates.push_back(t.dates[static_cast<std::size_t>(rows[i])]);
        out.prices.row(static_cast<Eigen::Index>(i)) = t.prices.row(rows[i]);
    }
    return out;
}

}  // namespace

PriceTable load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open price file " + path.string());

    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        header = split_csv_line(line);
        break;
    }
    if (header.empty()) throw DataError(path.string() + ": empty file");
    if (header[0] != "date") throw DataError(where(path, lineno) + "first header column must be 'date'");
    if (header.size() < 2) throw DataError(where(path, lineno) + "no price columns");
    {
        std::set<std::string> seen;
        for (std::size_t c = 1; c < header.size(); ++c) {
            if (header[c].empty()) throw DataError(where(path, lineno) + "empty column name");
            if (!seen.insert(header[c]).second) {
                throw DataError(where(path, lineno) + "duplicate column '" + header[c] + "'");
            }
        }
    }
    const auto target_it = std::find(header.begin() + 1, header.end(), schema.target);
    if (target_it == header.end()) {
        throw DataError(path.string() + ": target column '" + schema.target + "' not found");
    }
    const std::size_t target_col = static_cast<std::size_t>(target_it - header.begin());

    // File column order -> table column order (target first).
    std::vector<std::size_t> order{target_col};
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (c != target_col) order.push_back(c);
    }

    std::vector<Date> dates;
    std::vector<std::vector<double>> rows;
    std::map<Date, std::size_t> first_line;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw DataError(where(path, lineno) + "expected " + std::to_string(header.size()) +
                            " fields, found " + std::to_string(cells.size()));
        }
        const auto date = parse_date(cells[0]);
        if (!date) throw DataError(where(path, lineno) + "invalid date '" + cells[0] + "'");
        if (auto [it, inserted] = first_line.emplace(*date, lineno); !inserted) {
            throw DataError(where(path, lineno) + "duplicate date " + format_date(*date) +
                            " (first seen on line " + std::to_string(it->second) + ")");
        }
        std::vector<double> values;
        values.reserve(order.size());
        for (std::size_t c : order) {
            if (cells[c].empty()) {
                values.push_back(kHole);
                continue;
            }
            double v = 0.0;
            if (!parse_number(cells[c], v)) {
                throw DataError(where(path, lineno) + "invalid number '" + cells[c] + "' in column '" +
                                header[c] + "'");
            }
            values.push_back(v);
        }
        dates.push_back(*date);
        rows.push_back(std::move(values));
    }

    std::vector<std::size_t> idx(dates.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return dates[a] < dates[b]; });

    PriceTable table;
    for (std::size_t c : order) table.labels.push_back(header[c]);
    table.prices.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(order.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        table.dates.push_back(dates[idx[i]]);
        const auto& r = rows[idx[i]];
        for (std::size_t c = 0; c < r.size(); ++c) {
            table.prices(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = r[c];
        }
    }
    return table;
}

void write_price_csv(const std::filesystem::path& path, const PriceTable& table) {
    auto out = open_output(path);
    out << "date";
    for (const auto& l : table.labels) out << ',' << l;
    out << '\n';
    for (Eigen::Index t = 0; t < table.rows(); ++t) {
        out << format_date(table.dates[static_cast<std::size_t>(t)]);
        for (Eigen::Index c = 0; c < table.prices.cols(); ++c) {
            out << ',';
            const double v = table.prices(t, c);
            if (!std::isnan(v)) out << format_double(v);
        }
        out << '\n';
    }
}

PriceTable forward_fill(const PriceTable& table) {
    PriceTable out = table;
    if (out.rows() == 0) return out;
    for (Eigen::Index c = 0; c < out.prices.cols(); ++c) {
        if (std::isnan(out.prices(0, c))) {
            throw DataError("stream '" + out.labels[static_cast<std::size_t>(c)] +
                            "' has no value on the first date " + format_date(out.dates.front()) +
                            "; nothing to fill from");
        }
        for (Eigen::Index t = 1; t < out.rows(); ++t) {
            if (std::isnan(out.prices(t, c))) out.prices(t, c) = out.prices(t - 1, c);
        }
    }
    return out;
}

PriceTable drop_sparse_streams(const PriceTable& table, double max_missing_fraction,
                               std::vector<std::string>* dropped) {
    if (!(max_missing_fraction >= 0.0 && max_missing_fraction <= 1.0)) {
        throw InvalidArgument("max_missing_fraction must lie in [0, 1]");
    }
    const double T = static_cast<double>(std::max<Eigen::Index>(table.rows(), 1));
    auto missing = [&](Eigen::Index c) {
        return static_cast<double>(table.prices.col(c).array().isNaN().count()) / T;
    };
    if (missing(0) > max_missing_fraction) {
        throw DataError("target stream '" + table.labels[0] + "' is missing too many dates");
    }
    std::vector<Eigen::Index> keep{0};
    for (Eigen::Index c = 1; c < table.prices.cols(); ++c) {
        if (missing(c) > max_missing_fraction) {
            if (dropped) dropped->push_back(table.labels[static_cast<std::size_t>(c)]);
        } else {
            keep.push_back(c);
        }
    }
    PriceTable out;
    out.dates = table.dates;
    out.prices.resize(table.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        out.labels.push_back(table.labels[static_cast<std::size_t>(keep[i])]);
        out.prices.col(static_cast<Eigen::Index>(i)) = table.prices.col(keep[i]);
    }
    return out;
}

PriceTable inner_join(const PriceTable& left, const PriceTable& right) {
    std::vector<Eigen::Index> li, ri;
    std::size_t a = 0, b = 0;
    while (a < left.dates.size() && b < right.dates.size()) {
        if (left.dates[a] < right.dates[b]) {
            ++a;
        } else if (right.dates[b] < left.dates[a]) {
            ++b;
        } else {
            li.push_back(static_cast<Eigen::Index>(a++));
            ri.push_back(static_cast<Eigen::Index>(b++));
        }
    }
    const PriceTable l = select_rows(left, li);
    const PriceTable r = select_rows(right, ri);
    PriceTable out;
    out.dates = l.dates;
    out.labels = l.labels;
    out.labels.insert(out.labels.end(), r.labels.begin() + 1, r.labels.end());
    out.prices.resize(l.rows(), l.prices.cols() + r.prices.cols() - 1);
    out.prices << l.prices, r.prices.rightCols(r.prices.cols() - 1);
    return out;
}

std::vector<SplitFactor> load_split_factors(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open split-factor file " + path.string());
    std::vector<SplitFactor> out;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        if (!header_seen) {
            header_seen = true;
            if (cells != std::vector<std::string>{"date", "stream", "factor"}) {
                throw DataError(where(path, lineno) + "expected header 'date,stream,factor'");
            }
            continue;
        }
        if (cells.size() != 3) throw DataError(where(path, lineno) + "expected 3 fields");
        const auto date = parse_date(cells[0]);
        if (!date) throw DataError(where(path, lineno) + "invalid date '" + cells[0] + "'");
        double f = 0.0;
        if (!parse_number(cells[2], f) || !(f > 0.0)) {
            throw DataError(where(path, lineno) + "factor must be a positive number");
        }
        out.push_back({*date, cells[1], f});
    }
    return out;
}

PriceTable apply_split_factors(const PriceTable& table, const std::vector<SplitFactor>& splits) {
    PriceTable out = table;
    for (const auto& s : splits) {
        const auto it = std::find(out.labels.begin(), out.labels.end(), s.stream);
        if (it == out.labels.end()) throw DataError("split factor for unknown stream '" + s.stream + "'");
        const auto c = static_cast<Eigen::Index>(it - out.labels.begin());
        for (Eigen::Index t = 0; t < out.rows() && out.dates[static_cast<std::size_t>(t)] < s.date; ++t) {
            out.prices(t, c) *= s.factor;
        }
    }
    return out;
}

ReturnMatrix to_log_returns(const PriceTable& table) {
    const Eigen::Index T = table.rows();
    if (T < 2) throw DataError("need at least two dates to form returns");
    for (Eigen::Index c = 0; c < table.prices.cols(); ++c) {
        for (Eigen::Index t = 0; t < T; ++t) {
            const double v = table.prices(t, c);
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw DataError("stream '" + table.labels[static_cast<std::size_t>(c)] + "' on " +
                                format_date(table.dates[static_cast<std::size_t>(t)]) +
                                (std::isnan(v) ? " has no price" : " has non-positive price " + format_double(v)));
            }
        }
    }
    const Eigen::MatrixXd logp = table.prices.array().log().matrix();
    const Eigen::MatrixXd diff = logp.bottomRows(T - 1) - logp.topRows(T - 1);

    ReturnMatrix out;
    out.dates.assign(table.dates.begin() + 1, table.dates.end());
    out.labels = table.labels;
    out.target = diff.col(0);
    out.streams = diff.rightCols(diff.cols() - 1);
    return out;
}

}  // namespace flsarb
