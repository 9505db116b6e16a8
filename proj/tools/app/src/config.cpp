#include "flsarb/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "flsarb/smoothing.hpp"

namespace flsarb::app {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        throw ConfigError(key, "expected a finite number, got '" + value + "'");
    }
    return out;
}

double to_positive(const std::string& key, const std::string& value) {
    const double v = to_double(key, value);
    if (!(v > 0.0)) throw ConfigError(key, "must be positive, got '" + value + "'");
    return v;
}

double to_non_negative(const std::string& key, const std::string& value) {
    const double v = to_double(key, value);
    if (v < 0.0) throw ConfigError(key, "must be non-negative, got '" + value + "'");
    return v;
}

long to_long(const std::string& key, const std::string& value, long min) {
    long out = 0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected an integer, got '" + value + "'");
    if (out < min) throw ConfigError(key, "must be at least " + std::to_string(min) + ", got " + value);
    return out;
}

std::uint64_t to_seed(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError(key, "expected a non-negative integer, got '" + value + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(key, "expected true or false, got '" + value + "'");
}

Date to_date(const std::string& key, const std::string& value) {
    const auto d = parse_date(value);
    if (!d) throw ConfigError(key, "expected a YYYY-MM-DD date, got '" + value + "'");
    return *d;
}

double to_delta(const std::string& key, const std::string& value) {
    const double d = to_double(key, value);
    if (!(d > 0.0 && d < 1.0)) throw ConfigError(key, "delta must lie strictly between 0 and 1, got " + value);
    return d;
}

std::vector<double> to_delta_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(to_delta(key, item));
    }
    if (out.empty()) throw ConfigError(key, "delta grid is empty");
    return out;
}

using Handler = std::function<void(const std::string& key, const std::string& value)>;

void apply(const KeyValues& kv, const std::map<std::string, Handler>& handlers) {
    for (const auto& [key, value] : kv) {
        const auto it = handlers.find(key);
        if (it == handlers.end()) throw ConfigError(key, "unknown key");
        it->second(key, value);
    }
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : InvalidArgument("config field '" + field + "': " + message), field_(std::move(field)) {}

KeyValues parse_key_values(const std::string& text, const std::string& origin) {
    KeyValues out;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(body, origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError("", origin + ":" + std::to_string(lineno) + ": empty key");
        if (!seen.insert(key).second) {
            throw ConfigError(key, origin + ":" + std::to_string(lineno) + ": key given twice");
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str(), path.string());
}

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::vector<double> default_delta_grid() {
    return {0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
}

RunConfig parse_run_config(const KeyValues& kv) {
    RunConfig cfg;
    bool have_rows = false;
    std::optional<std::uint64_t> seed;
    const std::map<std::string, Handler> handlers = {
        {"input", [&](auto&, auto& v) { cfg.input = v; }},
        {"target", [&](auto&, auto& v) { cfg.target = v; }},
        {"split_factors", [&](auto&, auto& v) { cfg.split_factors = v; }},
        {"max_missing",
         [&](auto& k, auto& v) {
             cfg.max_missing = to_non_negative(k, v);
             if (cfg.max_missing > 1.0) throw ConfigError(k, "must not exceed 1");
         }},
        {"synthetic", [&](auto& k, auto& v) { cfg.synthetic = to_bool(k, v); }},
        {"seed", [&](auto& k, auto& v) { seed = to_seed(k, v); }},
        {"streams", [&](auto& k, auto& v) { cfg.market.streams = static_cast<int>(to_long(k, v, 1)); }},
        {"factors", [&](auto& k, auto& v) { cfg.market.factors = static_cast<int>(to_long(k, v, 1)); }},
        {"rows", [&](auto& k, auto& v) { cfg.market.T = static_cast<int>(to_long(k, v, 3)); }},
        {"factor_sd", [&](auto& k, auto& v) { cfg.market.factor_sd = to_non_negative(k, v); }},
        {"loading_sd", [&](auto& k, auto& v) { cfg.market.loading_sd = to_non_negative(k, v); }},
        {"idio_sd", [&](auto& k, auto& v) { cfg.market.idio_sd = to_non_negative(k, v); }},
        {"drift", [&](auto& k, auto& v) { cfg.market.drift = to_double(k, v); }},
        {"reversion",
         [&](auto& k, auto& v) {
             cfg.market.reversion = to_double(k, v);
             if (!(cfg.market.reversion > 0.0 && cfg.market.reversion < 1.0)) {
                 throw ConfigError(k, "must lie strictly between 0 and 1");
             }
         }},
        {"spread_sd", [&](auto& k, auto& v) { cfg.market.spread_sd = to_non_negative(k, v); }},
        {"index_start", [&](auto& k, auto& v) { cfg.market.index_start = to_positive(k, v); }},
        {"stream_start", [&](auto& k, auto& v) { cfg.market.stream_start = to_positive(k, v); }},
        {"start_date", [&](auto& k, auto& v) { cfg.market.start_date = to_date(k, v); }},
        {"features",
         [&](auto& k, auto& v) {
             try {
                 const auto tracker = cfg.features.tracker;
                 const bool freeze = cfg.features.freeze_after_warmup;
                 cfg.features = FeatureConfig::parse(v);
                 cfg.features.tracker = tracker;
                 cfg.features.freeze_after_warmup = freeze;
             } catch (const InvalidArgument& e) {
                 throw ConfigError(k, e.what());
             }
         }},
        {"amnesia", [&](auto& k, auto& v) { cfg.features.tracker.amnesia = to_non_negative(k, v); }},
        {"subtract_mean", [&](auto& k, auto& v) { cfg.features.tracker.subtract_mean = to_bool(k, v); }},
        {"freeze_after_warmup", [&](auto& k, auto& v) { cfg.features.freeze_after_warmup = to_bool(k, v); }},
        {"delta", [&](auto& k, auto& v) { cfg.deltas = to_delta_list(k, v); }},
        {"kappa", [&](auto& k, auto& v) { cfg.kappa = to_positive(k, v); }},
        {"endowment", [&](auto& k, auto& v) { cfg.sizing.endowment = to_positive(k, v); }},
        {"multiplier", [&](auto& k, auto& v) { cfg.sizing.multiplier = to_positive(k, v); }},
        {"cost_per_contract", [&](auto& k, auto& v) { cfg.sizing.cost_per_contract = to_non_negative(k, v); }},
        {"warmup_end", [&](auto& k, auto& v) { cfg.warmup_end = to_date(k, v); }},
        {"warmup_rows",
         [&](auto& k, auto& v) {
             cfg.warmup_rows = to_long(k, v, 0);
             have_rows = true;
         }},
        {"trading_days_per_year", [&](auto& k, auto& v) { cfg.trading_days_per_year = to_positive(k, v); }},
        {"output_dir",
         [&](auto& k, auto& v) {
             if (v.empty()) throw ConfigError(k, "must not be empty");
             cfg.output_dir = v;
         }},
        {"threads", [&](auto& k, auto& v) { cfg.threads = static_cast<int>(to_long(k, v, 0)); }},
    };
    apply(kv, handlers);

    if (seed) cfg.market.seed = *seed;
    if (cfg.warmup_end && have_rows) throw ConfigError("warmup_end", "give either warmup_end or warmup_rows, not both");
    finalize(cfg);
    return cfg;
}

void finalize(RunConfig& cfg) {
    if (cfg.synthetic && cfg.input) throw ConfigError("input", "cannot be combined with synthetic = true");
    if (!cfg.synthetic && !cfg.input) throw ConfigError("input", "required unless synthetic = true");
    if (cfg.input && cfg.target.empty()) throw ConfigError("target", "required with input");
    if (cfg.synthetic && cfg.split_factors) {
        throw ConfigError("split_factors", "only applies to file input");
    }
    if (cfg.deltas.empty()) throw ConfigError("delta", "delta grid is empty");
    for (double d : cfg.deltas) {
        if (!(d > 0.0 && d < 1.0)) {
            throw ConfigError("delta", "delta must lie strictly between 0 and 1, got " + shortest(d));
        }
    }
    if (cfg.features.kind == FeatureKind::kEigen && cfg.synthetic &&
        cfg.features.components > cfg.market.streams) {
        throw ConfigError("features", cfg.features.to_string() + " exceeds the " +
                                          std::to_string(cfg.market.streams) + " synthetic streams");
    }
    if (cfg.synthetic && cfg.market.factors > cfg.market.streams) {
        throw ConfigError("factors", "must not exceed streams");
    }

    std::vector<double> unique;
    for (double d : cfg.deltas) {
        if (std::find(unique.begin(), unique.end(), d) != unique.end()) {
            cfg.warnings.push_back("duplicate delta " + shortest(d) + " ignored");
            continue;
        }
        unique.push_back(d);
    }
    cfg.deltas = std::move(unique);
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return parse_run_config(read_key_values(path));
}

std::string effective_config(const RunConfig& cfg) {
    std::ostringstream out;
    if (cfg.synthetic) {
        const auto& m = cfg.market;
        out << "synthetic = true\n";
        out << "seed = " << m.seed << '\n';
        out << "streams = " << m.streams << '\n';
        out << "factors = " << m.factors << '\n';
        out << "rows = " << m.T << '\n';
        out << "factor_sd = " << shortest(m.factor_sd) << '\n';
        out << "loading_sd = " << shortest(m.loading_sd) << '\n';
        out << "idio_sd = " << shortest(m.idio_sd) << '\n';
        out << "drift = " << shortest(m.drift) << '\n';
        out << "reversion = " << shortest(m.reversion) << '\n';
        out << "spread_sd = " << shortest(m.spread_sd) << '\n';
        out << "index_start = " << shortest(m.index_start) << '\n';
        out << "stream_start = " << shortest(m.stream_start) << '\n';
        out << "start_date = " << format_date(m.start_date) << '\n';
    } else {
        out << "input = " << cfg.input->string() << '\n';
        out << "target = " << cfg.target << '\n';
        if (cfg.split_factors) out << "split_factors = " << cfg.split_factors->string() << '\n';
    }
    out << "max_missing = " << shortest(cfg.max_missing) << '\n';
    out << "features = " << cfg.features.to_string() << '\n';
    out << "amnesia = " << shortest(cfg.features.tracker.amnesia) << '\n';
    out << "subtract_mean = " << (cfg.features.tracker.subtract_mean ? "true" : "false") << '\n';
    out << "freeze_after_warmup = " << (cfg.features.freeze_after_warmup ? "true" : "false") << '\n';
    out << "delta = ";
    for (std::size_t i = 0; i < cfg.deltas.size(); ++i) out << (i ? "," : "") << shortest(cfg.deltas[i]);
    out << '\n';
    out << "kappa = " << shortest(cfg.kappa) << '\n';
    out << "endowment = " << shortest(cfg.sizing.endowment) << '\n';
    out << "multiplier = " << shortest(cfg.sizing.multiplier) << '\n';
    out << "cost_per_contract = " << shortest(cfg.sizing.cost_per_contract) << '\n';
    if (cfg.warmup_end) {
        out << "warmup_end = " << format_date(*cfg.warmup_end) << '\n';
    } else {
        out << "warmup_rows = " << cfg.warmup_rows << '\n';
    }
    out << "trading_days_per_year = " << shortest(cfg.trading_days_per_year) << '\n';
    out << "output_dir = " << cfg.output_dir.string() << '\n';
    return out.str();
}

Fig2Mode parse_fig2_mode(const std::string& text) {
    if (text == "online") return Fig2Mode::kOnline;
    if (text == "offline") return Fig2Mode::kOffline;
    if (text == "both") return Fig2Mode::kBoth;
    throw ConfigError("mode", "expected online, offline or both, got '" + text + "'");
}

std::string to_string(Fig2Mode mode) {
    switch (mode) {
        case Fig2Mode::kOnline: return "online";
        case Fig2Mode::kOffline: return "offline";
        case Fig2Mode::kBoth: return "both";
    }
    return "both";
}

Fig2RunConfig parse_fig2_config(const KeyValues& kv) {
    Fig2RunConfig cfg;
    const std::map<std::string, Handler> handlers = {
        {"seed", [&](auto& k, auto& v) { cfg.sim.seed = to_seed(k, v); }},
        {"delta", [&](auto& k, auto& v) { cfg.delta = to_delta(k, v); }},
        {"kappa", [&](auto& k, auto& v) { cfg.kappa = to_positive(k, v); }},
        {"mode", [&](auto&, auto& v) { cfg.mode = parse_fig2_mode(v); }},
        {"output_dir",
         [&](auto& k, auto& v) {
             if (v.empty()) throw ConfigError(k, "must not be empty");
             cfg.output_dir = v;
         }},
    };
    apply(kv, handlers);
    return cfg;
}

std::string effective_config(const Fig2RunConfig& cfg) {
    std::ostringstream out;
    out << "seed = " << cfg.sim.seed << '\n';
    out << "delta = " << shortest(cfg.delta) << '\n';
    out << "kappa = " << shortest(cfg.kappa) << '\n';
    out << "mode = " << to_string(cfg.mode) << '\n';
    out << "output_dir = " << cfg.output_dir.string() << '\n';
    return out.str();
}

}  // namespace flsarb::app
