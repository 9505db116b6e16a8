#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flsarb/app/commands.hpp"
#include "flsarb/app/config.hpp"

namespace {

using flsarb::app::KeyValues;

// Command-line flags win over the config file.
void override_key(KeyValues& kv, const std::string& key, const std::string& value) {
    for (auto& [k, v] : kv) {
        if (k == key) {
            v = value;
            return;
        }
    }
    kv.emplace_back(key, value);
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
    return out;
}

struct GridFlags {
    std::string config;
    std::optional<std::string> seed, out_dir, features, threads;
    std::vector<std::string> deltas;
    CLI::Option* delta_opt = nullptr;
};

void add_grid_flags(CLI::App* cmd, GridFlags& f) {
    cmd->add_option("--config", f.config, "key = value config file")->required();
    cmd->add_option("--seed", f.seed, "synthetic market seed");
    cmd->add_option("--out-dir", f.out_dir, "output directory");
    f.delta_opt = cmd->add_option("--delta", f.deltas, "comma-separated delta grid")->delimiter(',');
    cmd->add_option("--features", f.features, "raw or svd:<k>");
    cmd->add_option("--threads", f.threads, "worker threads, 0 = all cores");
}

flsarb::app::RunConfig grid_config(const GridFlags& f) {
    KeyValues kv = flsarb::app::read_key_values(f.config);
    if (f.seed) override_key(kv, "seed", *f.seed);
    if (f.out_dir) override_key(kv, "output_dir", *f.out_dir);
    if (f.features) override_key(kv, "features", *f.features);
    if (f.threads) override_key(kv, "threads", *f.threads);
    if (f.delta_opt->count() > 0) override_key(kv, "delta", join(f.deltas));
    return flsarb::app::parse_run_config(kv);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flexible least squares statistical arbitrage toolkit"};
    app.require_subcommand(1);

    GridFlags bt_flags, sweep_flags;
    auto* backtest = app.add_subcommand("backtest", "run the trading system over a delta grid");
    add_grid_flags(backtest, bt_flags);
    auto* sweep = app.add_subcommand("sweep-sharpe", "tabulate Sharpe ratio against delta");
    add_grid_flags(sweep, sweep_flags);

    std::string fig2_config;
    std::optional<std::string> fig2_seed, fig2_delta, fig2_mode, fig2_out, fig2_kappa;
    auto* fig2 = app.add_subcommand("sim-fig2", "simulated time-varying coefficient study");
    fig2->add_option("--config", fig2_config, "optional key = value config file");
    fig2->add_option("--seed", fig2_seed, "generator seed (default 1)");
    fig2->add_option("--delta", fig2_delta, "smoothing parameter (default 0.98)");
    fig2->add_option("--mode", fig2_mode, "online, offline or both (default both)");
    fig2->add_option("--out-dir", fig2_out, "output directory");
    fig2->add_option("--kappa", fig2_kappa, "diffuse prior scale");

    flsarb::MarketConfig market;
    std::string market_out;
    auto* gen = app.add_subcommand("gen-market", "write a synthetic market as an input CSV");
    gen->add_option("--seed", market.seed, "generator seed");
    gen->add_option("--streams", market.streams, "explanatory streams")->check(CLI::PositiveNumber);
    gen->add_option("--rows", market.T, "price rows")->check(CLI::Range(3, 100000000));
    gen->add_option("--reversion", market.reversion, "spread mean-reversion rate in (0,1)");
    gen->add_option("--spread-sd", market.spread_sd, "spread innovation sd");
    gen->add_option("--out", market_out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : flsarb::app::kExitConfig;
    }

    return flsarb::app::guarded(
        [&] {
            if (*backtest) {
                flsarb::app::cmd_backtest(grid_config(bt_flags), std::cout, std::cerr);
            } else if (*sweep) {
                flsarb::app::cmd_sweep_sharpe(grid_config(sweep_flags), std::cout, std::cerr);
            } else if (*fig2) {
                KeyValues kv;
                if (!fig2_config.empty()) kv = flsarb::app::read_key_values(fig2_config);
                if (fig2_seed) override_key(kv, "seed", *fig2_seed);
                if (fig2_delta) override_key(kv, "delta", *fig2_delta);
                if (fig2_mode) override_key(kv, "mode", *fig2_mode);
                if (fig2_out) override_key(kv, "output_dir", *fig2_out);
                if (fig2_kappa) override_key(kv, "kappa", *fig2_kappa);
                flsarb::app::cmd_sim_fig2(flsarb::app::parse_fig2_config(kv), std::cout, std::cerr);
            } else if (*gen) {
                flsarb::app::cmd_gen_market(market, market_out, std::cout);
            }
        },
        std::cerr);
}
