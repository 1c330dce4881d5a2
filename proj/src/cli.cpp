#include "stabeq/cli.hpp"

#include <cstdio>
#include <stdexcept>

#include "stabeq/counterfactual.hpp"
#include "stabeq/discretize.hpp"

namespace stabeq {

namespace {

VecI to_int_vec(const VecD& v, const std::string& what) {
    VecI out;
    for (double x : v) {
        int ix = (int)std::llround(x);
        if (std::abs(x - ix) > 1e-9) throw std::runtime_error(what + ": expected integers");
        out.push_back(ix);
    }
    return out;
}

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!isspace((unsigned char)ch)) {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

VecD broadcast_bound(const VecD& v, int dim, const std::string& what) {
    if ((int)v.size() == dim) return v;
    if (v.size() == 1) return VecD(dim, v[0]);
    throw std::runtime_error(what + ": expected 1 or " + std::to_string(dim) + " entries");
}

uint64_t seed_for(uint64_t seed, int idx) {
    uint64_t s = seed + 0x9e3779b97f4a7c15ULL * (uint64_t)(idx + 1);
    return splitmix64(s);
}

}  // namespace

EntryModel model_from_config(const RunConfig& cfg, int cov_dim) {
    EntryModel model;
    model.cov_dim = cov_dim;
    model.grid_n = cfg.get_int("grid_n", 30);
    if (model.grid_n < 2) throw std::runtime_error("grid_n must be at least 2");
    model.concept_kind = concept_from_name(cfg.get("concept", "bse"));
    model.kind = info_kind_from_name(cfg.get("info", "private"));
    model.rho_grid = cfg.get_grid("rho_grid", {0.0});
    for (double r : model.rho_grid)
        if (std::abs(r) >= 1) throw std::runtime_error("rho_grid entries must lie in (-1, 1)");
    std::string w = cfg.get("weights", "count");
    if (w == "uniform")
        model.weights_uniform = true;
    else if (w != "count")
        throw std::runtime_error("weights must be 'count' or 'uniform'");
    int pd = model.payoff_dim();
    model.lb = broadcast_bound(cfg.get_vec("theta_lb", {-5.0}), pd, "theta_lb");
    model.ub = broadcast_bound(cfg.get_vec("theta_ub", {5.0}), pd, "theta_ub");
    for (int k = 0; k < pd; ++k)
        if (model.lb[k] > model.ub[k]) throw std::runtime_error("theta_lb exceeds theta_ub");
    return model;
}

EntryGameTheta theta_from_config(const RunConfig& cfg, int cov_dim) {
    EntryGameTheta theta;
    theta.beta.resize(2);
    theta.beta[0] = cfg.get_vec("beta1", VecD(cov_dim, 0.0));
    theta.beta[1] = cfg.get_vec("beta2", VecD(cov_dim, 0.0));
    for (int i = 0; i < 2; ++i)
        if ((int)theta.beta[i].size() != cov_dim)
            throw std::runtime_error("beta" + std::to_string(i + 1) + ": expected " +
                                     std::to_string(cov_dim) + " entries");
    if (cfg.has("kappa")) {
        theta.kappa = cfg.get_vec("kappa", {});
        if (theta.kappa.size() != 2) throw std::runtime_error("kappa: expected 2 entries");
    } else {
        theta.kappa = {cfg.get_num("kappa1", 0.0), cfg.get_num("kappa2", 0.0)};
    }
    theta.rho = cfg.get_num("rho", 0.0);
    if (std::abs(theta.rho) >= 1) throw std::runtime_error("rho must lie in (-1, 1)");
    return theta;
}

std::vector<std::string> theta_coord_names(int cov_dim, const std::vector<std::string>& cov_names) {
    std::vector<std::string> out;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < cov_dim; ++k) {
            std::string c = k < (int)cov_names.size() ? cov_names[k] : ("x" + std::to_string(k));
            out.push_back("beta" + std::to_string(i + 1) + "_" + c);
        }
    out.push_back("kappa1");
    out.push_back("kappa2");
    out.push_back("rho");
    return out;
}

int cmd_simulate(const RunConfig& cfg) {
    if (cfg.bins.empty())
        throw std::runtime_error("simulate needs at least one bin (bin = x1,x2,... : count)");
    int cov_dim = (int)cfg.bins[0].x.size();
    for (const auto& b : cfg.bins)
        if ((int)b.x.size() != cov_dim) throw std::runtime_error("bins disagree on covariate count");

    EntryGameTheta theta = theta_from_config(cfg, cov_dim);
    int grid_n = cfg.get_int("grid_n", 30);
    DiscreteGrid grid = make_grid(grid_n, theta.rho);
    std::string selection = cfg.get("selection", "symmetric");
    if (selection != "symmetric" && selection != "random")
        throw std::runtime_error("selection must be 'symmetric' or 'random'");
    Concept concept_kind = concept_from_name(cfg.get("concept", "bse"));
    InfoKind kind = info_kind_from_name(cfg.get("info", "private"));
    int n_obs = cfg.get_int("n_obs", 0);
    uint64_t seed = (uint64_t)cfg.get_num("seed", 1);
    std::string dump = cfg.get("dump_fixtures", "");

    BinnedData data;
    data.covariate_names = split_names(cfg.get("covariates", ""));
    while ((int)data.covariate_names.size() < cov_dim)
        data.covariate_names.push_back("x" + std::to_string(data.covariate_names.size()));
    for (size_t b = 0; b < cfg.bins.size(); ++b) {
        BasicGame game = build_entry_game(theta, cfg.bins[b].x, grid);
        if (data.profile_names.empty()) data.profile_names = default_profile_names(game.action_counts);
        DecisionRule rule;
        if (selection == "symmetric") {
            auto r = symmetric_nash_rule(game);
            if (!r)
                throw std::runtime_error("bin " + std::to_string(b) +
                                         ": some state has no pure Nash profile");
            rule = *r;
        } else {
            auto r = find_equilibrium(game, make_spec(game, concept_kind, kind), seed_for(seed, (int)b));
            if (!r) throw std::runtime_error("bin " + std::to_string(b) + ": no stable rule exists");
            rule = *r;
        }
        VecD phi = induced_ccp(game, rule);
        BinnedRow row;
        row.x = cfg.bins[b].x;
        if (n_obs > 0) {
            Rng rng(seed, b);
            VecD counts(phi.size(), 0.0);
            for (int s = 0; s < n_obs; ++s) counts[rng.categorical(phi)] += 1.0;
            for (double& c : counts) c /= n_obs;
            row.phi = counts;
            row.n = n_obs;
        } else {
            row.phi = phi;
            row.n = cfg.bins[b].count;
        }
        data.rows.push_back(std::move(row));
        if (!dump.empty())
            write_text_file(dump + "_game" + std::to_string(b) + ".json", game_to_json(game));
    }
    if (!dump.empty()) write_text_file(dump + "_grid.json", grid_to_json(grid));

    std::string out = cfg.get("out", "bins.csv");
    write_bins_csv(out, data, cfg.header_lines("simulate"));
    std::printf("wrote %zu bins to %s (%s CCPs)\n", data.rows.size(), out.c_str(),
                n_obs > 0 ? "sampled" : "population");
    return 0;
}

int cmd_scan(const RunConfig& cfg) {
    if (!cfg.has("data")) throw std::runtime_error("scan needs data = <bins csv>");
    BinnedData data = read_bins_csv(cfg.get("data", ""));
    EntryModel model = model_from_config(cfg, data.cov_dim());
    bool parallel = cfg.get_flag("parallel", true);
    double threshold = cfg.get_num("threshold", kZeroThreshold);

    CcpRegion region;
    const CcpRegion* rp = nullptr;
    std::map<std::string, std::string> echo = cfg.kv;
    if (!cfg.get_flag("population", false)) {
        region = fs_region(data, cfg.get_num("alpha", 0.05));
        rp = &region;
        echo["fs_beta"] = fmt_short(region.beta);
        echo["fs_z"] = fmt_short(region.z);
        if (!region.within_validity)
            std::fprintf(stderr,
                         "warning: per-bin error budget beta=%.4f exceeds 0.032; the "
                         "finite-sample coverage bound does not apply\n",
                         region.beta);
    }

    std::vector<VecD> starts;
    if (cfg.has("start")) {
        VecD s = cfg.get_vec("start", {});
        if ((int)s.size() != model.payoff_dim())
            throw std::runtime_error("start: expected " + std::to_string(model.payoff_dim()) +
                                     " entries");
        starts.push_back(s);
    } else if (cfg.has("beta1") || cfg.has("beta2") || cfg.has("kappa") || cfg.has("kappa1")) {
        EntryGameTheta t = theta_from_config(cfg, model.cov_dim);
        VecD flat = t.flat();
        flat.pop_back();  // drop rho; the rho grid drives that coordinate
        starts.push_back(flat);
    }
    MinimizeOptions opt;
    opt.max_iter = cfg.get_int("minimize_iters", 200);
    opt.random_starts = cfg.get_int("random_starts", 4);
    opt.seed = (uint64_t)cfg.get_num("seed", 1) + 13;
    opt.stop_value = std::min(1e-7, threshold / 10.0);
    MinimizeResult min = minimize_criterion(model, data, starts, rp, opt);

    std::vector<std::string> names = theta_coord_names(model.cov_dim, data.covariate_names);
    std::string summary_path = cfg.get("summary", "scan_summary.json");
    std::printf("criterion minimum %s after %d evaluations\n", fmt_short(min.value).c_str(),
                min.evaluations);
    if (min.value > threshold) {
        write_text_file(summary_path,
                        empty_set_summary_json(min.value, min.best.flat(), names, echo));
        std::printf("identified set is empty at threshold %s (minimum %s > threshold)\n",
                    fmt_short(threshold).c_str(), fmt_short(min.value).c_str());
        std::printf("wrote %s\n", summary_path.c_str());
        return 2;
    }

    ScanConfig sc;
    sc.chains = cfg.get_int("chains", 4);
    sc.max_points = cfg.get_int("max_points", 500);
    sc.threshold = threshold;
    sc.init_step = cfg.get_num("init_step", 0.1);
    sc.seed = (uint64_t)cfg.get_num("seed", 1);
    sc.parallel = parallel;
    ScanResult res = scan_set(model, data, min.best, sc, rp);

    std::string out = cfg.get("out", "scan.ndjson");
    write_scan_ndjson(out, res);
    write_text_file(summary_path, scan_summary_json(res, names, echo));
    std::printf("accepted %d of %zu evaluated points; projection volume %s\n", res.num_accepted,
                res.records.size(), fmt_short(res.volume).c_str());
    std::printf("wrote %s and %s\n", out.c_str(), summary_path.c_str());
    return 0;
}

int cmd_counterfactual(const RunConfig& cfg) {
    if (!cfg.has("data")) throw std::runtime_error("counterfactual needs data = <bins csv>");
    if (!cfg.has("points")) throw std::runtime_error("counterfactual needs points = <scan ndjson>");
    BinnedData pre = read_bins_csv(cfg.get("data", ""));
    EntryModel model = model_from_config(cfg, pre.cov_dim());

    std::vector<ThetaPoint> points;
    for (const auto& rec : read_scan_ndjson(cfg.get("points", ""))) {
        if (!rec.accepted) continue;
        if ((int)rec.theta.size() != model.payoff_dim() + 1)
            throw std::runtime_error("points file disagrees with the model's parameter count");
        points.push_back(ThetaPoint::from_flat(rec.theta));
    }
    if (points.empty()) {
        std::printf("no accepted parameter points in %s; nothing to bound\n",
                    cfg.get("points", "").c_str());
        return 2;
    }

    std::vector<CovariateBin> post_bins;
    if (cfg.has("post")) {
        BinnedData post = read_bins_csv(cfg.get("post", ""));
        if (post.cov_dim() != pre.cov_dim())
            throw std::runtime_error("post bins disagree on covariate count");
        for (const auto& row : post.rows) post_bins.push_back({row.x, row.n});
    } else if (cfg.has("flip_covariate")) {
        int k = cfg.get_int("flip_covariate", 0);
        if (k < 0 || k >= pre.cov_dim()) throw std::runtime_error("flip_covariate out of range");
        for (const auto& row : pre.rows) {
            CovariateBin b{row.x, row.n};
            b.x[k] = 1.0 - b.x[k];
            post_bins.push_back(std::move(b));
        }
    } else {
        throw std::runtime_error("counterfactual needs post = <bins csv> or flip_covariate = <k>");
    }

    std::vector<Objective> objectives;
    for (const auto& name : split_names(cfg.get("objectives", "entrants,firm1,firm2,no_entry")))
        objectives.push_back(objective_by_name(name));

    auto rows = policy_experiment(model, points, pre, post_bins, objectives,
                                  cfg.get_int("max_points", 0), cfg.get_flag("parallel", true));
    for (const auto& r : rows) {
        if (!r.feasible) {
            std::fprintf(stderr,
                         "error: objective %s: the obedience polytope is empty at an accepted "
                         "parameter point\n",
                         r.objective.c_str());
            return 1;
        }
        std::printf("%s: data=%s pre=[%s, %s] post=[%s, %s]\n", r.objective.c_str(),
                    r.has_data ? fmt_short(r.data).c_str() : "-", fmt_short(r.pre_lo).c_str(),
                    fmt_short(r.pre_hi).c_str(), fmt_short(r.post_lo).c_str(),
                    fmt_short(r.post_hi).c_str());
    }
    std::string out = cfg.get("out", "policy.csv");
    write_policy_csv(out, rows, cfg.header_lines("counterfactual"));
    std::printf("wrote %s (%zu parameter points)\n", out.c_str(), points.size());
    return 0;
}

int cmd_coverage(const RunConfig& cfg) {
    VecD alphas = cfg.get_vec("alphas", {0.05, 0.01});
    VecI bins_list = to_int_vec(cfg.get_vec("bins_list", {4, 10}), "bins_list");
    VecI n_list = to_int_vec(cfg.get_vec("n_list", {100, 1000}), "n_list");
    int trials = cfg.get_int("trials", 20000);
    int outcomes = cfg.get_int("outcomes", 4);
    uint64_t seed = (uint64_t)cfg.get_num("seed", 1);
    bool parallel = cfg.get_flag("parallel", true);

    VecD table;
    for (double alpha : alphas)
        for (int nb : bins_list)
            for (int n : n_list) {
                double cov = coverage_mc(nb, n, alpha, trials, seed, parallel, outcomes);
                table.push_back(cov);
                std::printf("alpha=%s bins=%d n=%d coverage=%s (target %s)\n",
                            fmt_short(alpha).c_str(), nb, n, fmt_short(cov).c_str(),
                            fmt_short(1 - alpha).c_str());
            }
    std::string out = cfg.get("out", "coverage.csv");
    write_coverage_csv(out, alphas, bins_list, n_list, table, cfg.header_lines("coverage"));
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

}  // namespace stabeq
