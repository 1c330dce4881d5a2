#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stabeq/cli.hpp"

namespace {

struct PendingKv {
    std::vector<std::pair<std::string, std::string>> items;
    void push(const std::string& key, const std::string& val) { items.emplace_back(key, val); }
};

void add_kv_option(CLI::App* sc, PendingKv& pending, const std::string& flag,
                   const std::string& key, const std::string& desc) {
    sc->add_option_function<std::string>(
          flag, [&pending, key](const std::string& v) { pending.push(key, v); }, desc)
        ->trigger_on_parse();
}

void add_kv_flag(CLI::App* sc, PendingKv& pending, const std::string& flag, const std::string& key,
                 const std::string& val, const std::string& desc) {
    sc->add_flag_function(
        flag,
        [&pending, key, val](int64_t count) {
            if (count > 0) pending.push(key, val);
        },
        desc);
}

void add_common(CLI::App* sc, PendingKv& pending, std::string& config_path) {
    sc->add_option("-c,--config", config_path, "key = value config file");
    add_kv_option(sc, pending, "--set", "", "extra key=value override (repeatable)");
    add_kv_option(sc, pending, "-o,--out", "out", "output path");
    add_kv_option(sc, pending, "--seed", "seed", "RNG seed");
    add_kv_option(sc, pending, "--grid-n", "grid_n", "shock grid points per player");
    add_kv_option(sc, pending, "--concept", "concept", "bse | bce | psne");
    add_kv_option(sc, pending, "--info", "info", "null | 1p | private | complete");
    add_kv_flag(sc, pending, "--serial", "parallel", "0", "disable multithreading");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"identified-set toolkit for two-player discrete entry games"};
    app.require_subcommand(1);

    PendingKv pending;
    std::string config_path;
    std::vector<std::string> bin_specs;

    CLI::App* sim = app.add_subcommand("simulate", "generate binned CCP data from a known game");
    add_common(sim, pending, config_path);
    sim->add_option("--bin", bin_specs, "covariate bin 'x1,x2,...:count' (repeatable)");
    add_kv_option(sim, pending, "--selection", "selection", "symmetric | random");
    add_kv_option(sim, pending, "--n-obs", "n_obs", "per-bin sample size (0 = population CCPs)");
    add_kv_option(sim, pending, "--dump-fixtures", "dump_fixtures", "prefix for game/grid JSON dumps");

    CLI::App* scan = app.add_subcommand("scan", "map out the identified set from binned data");
    add_common(scan, pending, config_path);
    add_kv_option(scan, pending, "--data", "data", "bins CSV");
    add_kv_option(scan, pending, "--alpha", "alpha", "confidence level for the CCP region");
    add_kv_flag(scan, pending, "--population", "population", "1",
                "treat the CCPs as exact (no confidence region)");
    add_kv_option(scan, pending, "--threshold", "threshold", "criterion acceptance threshold");
    add_kv_option(scan, pending, "--chains", "chains", "random-walk chains");
    add_kv_option(scan, pending, "--max-points", "max_points", "proposals per chain");
    add_kv_option(scan, pending, "--rho-grid", "rho_grid", "'lo:hi:count' or comma list");
    add_kv_option(scan, pending, "--summary", "summary", "summary JSON path");

    CLI::App* cf = app.add_subcommand("counterfactual", "bound outcomes under a covariate change");
    add_common(cf, pending, config_path);
    add_kv_option(cf, pending, "--data", "data", "pre-change bins CSV");
    add_kv_option(cf, pending, "--points", "points", "scan NDJSON with accepted parameter points");
    add_kv_option(cf, pending, "--post", "post", "post-change bins CSV");
    add_kv_option(cf, pending, "--flip-covariate", "flip_covariate",
                  "covariate index to flip (x -> 1-x) for the post regime");
    add_kv_option(cf, pending, "--objectives", "objectives", "comma list of outcome functionals");
    add_kv_option(cf, pending, "--max-points", "max_points", "thin to at most this many points");

    CLI::App* cov = app.add_subcommand("coverage", "Monte Carlo coverage of the CCP region");
    add_common(cov, pending, config_path);
    add_kv_option(cov, pending, "--alphas", "alphas", "comma list of confidence levels");
    add_kv_option(cov, pending, "--bins-list", "bins_list", "comma list of bin counts");
    add_kv_option(cov, pending, "--n-list", "n_list", "comma list of per-bin sample sizes");
    add_kv_option(cov, pending, "--trials", "trials", "Monte Carlo trials per cell");
    add_kv_option(cov, pending, "--outcomes", "outcomes", "outcome categories per bin");

    CLI11_PARSE(app, argc, argv);

    try {
        stabeq::RunConfig cfg;
        if (!config_path.empty()) cfg = stabeq::RunConfig::from_file(config_path);
        for (const auto& [key, val] : pending.items) {
            if (!key.empty()) {
                cfg.kv[key] = val;
                continue;
            }
            size_t eq = val.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("--set expects key=value, got '" + val + "'");
            cfg.kv[val.substr(0, eq)] = val.substr(eq + 1);
        }
        for (const auto& spec : bin_specs) cfg.bins.push_back(stabeq::parse_bin_spec(spec));

        if (app.got_subcommand(sim)) return stabeq::cmd_simulate(cfg);
        if (app.got_subcommand(scan)) return stabeq::cmd_scan(cfg);
        if (app.got_subcommand(cf)) return stabeq::cmd_counterfactual(cfg);
        return stabeq::cmd_coverage(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "stabeq: error: %s\n", e.what());
        return 1;
    }
}
