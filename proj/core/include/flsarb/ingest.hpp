#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flsarb/date.hpp"

namespace flsarb {

// Aligned price panel. Column 0 is the target stream, columns 1..p the
// explanatory streams. Missing cells are NaN until forward_fill().
struct PriceTable {
    std::vector<Date> dates;
    std::vector<std::string> labels;  // size 1 + p
    Eigen::MatrixXd prices;           // T x (1 + p)

    Eigen::Index rows() const noexcept { return prices.rows(); }
    Eigen::Index streams() const noexcept { return prices.cols() - 1; }
    Eigen::VectorXd target() const { return prices.col(0); }
};

// Log-returns r_it = log p_it - log p_i(t-1); one row fewer than the prices.
struct ReturnMatrix {
    std::vector<Date> dates;
    std::vector<std::string> labels;  // target first, then the streams
    Eigen::VectorXd target;   // a_t
    Eigen::MatrixXd streams;  // (T-1) x p

    Eigen::Index rows() const noexcept { return target.size(); }
    Eigen::Index streams_count() const noexcept { return streams.cols(); }
};

struct CsvSchema {
    std::string target;  // column holding the target stream
};

// Reads `date,<col>,<col>,...` with ISO-8601 dates and decimal prices. Empty
// cells are holes (NaN). The target column is moved to position 0, rows are
// sorted by date. Throws DataError (with the 1-based line number) on
// malformed rows, and on duplicated dates (naming the date).
PriceTable load_csv(const std::filesystem::path& path, const CsvSchema& schema);

// Writes the table in the load_csv format, 17 significant digits.
void write_price_csv(const std::filesystem::path& path, const PriceTable& table);

// Replaces every hole with the latest earlier value of the same stream.
// Throws DataError if the first row has a hole.
PriceTable forward_fill(const PriceTable& table);

// Drops explanatory streams whose fraction of holes exceeds
// max_missing_fraction. Throws DataError if the target itself exceeds it.
PriceTable drop_sparse_streams(const PriceTable& table, double max_missing_fraction,
                               std::vector<std::string>* dropped = nullptr);

// Rows present in both tables; columns of `right` (minus its target) are
// appended after those of `left`.
PriceTable inner_join(const PriceTable& left, const PriceTable& right);

struct SplitFactor {
    Date date;
    std::string stream;
    double factor = 1.0;
};

// Reads `date,stream,factor` rows.
std::vector<SplitFactor> load_split_factors(const std::filesystem::path& path);

// Multiplicative back-adjustment: every price of `stream` dated strictly
// before `date` is multiplied by `factor` (0.5 for a 2-for-1 split).
PriceTable apply_split_factors(const PriceTable& table, const std::vector<SplitFactor>& splits);

// Throws DataError naming stream and date for a missing or non-positive price.
ReturnMatrix to_log_returns(const PriceTable& table);

}  // namespace flsarb
