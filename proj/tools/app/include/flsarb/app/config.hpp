#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flsarb/backtest.hpp"
#include "flsarb/date.hpp"
#include "flsarb/error.hpp"
#include "flsarb/synth.hpp"

namespace flsarb::app {

// A config problem attributable to one key.
class ConfigError : public InvalidArgument {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Ordered key/value pairs from a `key = value` file. Blank lines and lines
// starting with '#' are skipped. Duplicate keys are rejected.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
KeyValues read_key_values(const std::filesystem::path& path);
KeyValues parse_key_values(const std::string& text, const std::string& origin = "config");

// Shortest decimal text that parses back to the same double.
std::string shortest(double v);

// Delta grid used when a config does not name one.
std::vector<double> default_delta_grid();

struct RunConfig {
    // Data source: either a CSV file or the synthetic market generator.
    std::optional<std::filesystem::path> input;
    std::string target;
    std::optional<std::filesystem::path> split_factors;
    double max_missing = 0.1;
    bool synthetic = false;
    MarketConfig market;

    FeatureConfig features;
    std::vector<double> deltas = default_delta_grid();
    double kappa = kDefaultDiffuseScale;
    SizingConfig sizing;

    // At most one of these is set; rows before the split are warm-up only.
    std::optional<Date> warmup_end;
    long warmup_rows = 0;
    double trading_days_per_year = 252.0;

    std::filesystem::path output_dir = "out";
    int threads = 0;  // 0 picks the hardware concurrency

    std::vector<std::string> warnings;
};

// Builds a validated config. Unknown keys, malformed values and inconsistent
// combinations raise ConfigError naming the key.
RunConfig parse_run_config(const KeyValues& kv);
RunConfig load_run_config(const std::filesystem::path& path);

// Re-checks cross-field constraints after command-line overrides, and
// removes duplicate deltas (first occurrence wins, with a warning).
void finalize(RunConfig& cfg);

// Text form that parse_run_config reads back to an equivalent config.
std::string effective_config(const RunConfig& cfg);

enum class Fig2Mode { kOnline, kOffline, kBoth };
Fig2Mode parse_fig2_mode(const std::string& text);
std::string to_string(Fig2Mode mode);

struct Fig2RunConfig {
    Fig2Config sim;
    double delta = 0.98;
    double kappa = kDefaultDiffuseScale;
    Fig2Mode mode = Fig2Mode::kBoth;
    std::filesystem::path output_dir = "out";
};

Fig2RunConfig parse_fig2_config(const KeyValues& kv);
std::string effective_config(const Fig2RunConfig& cfg);

}  // namespace flsarb::app
