#pragma once

#include "stabeq/data_io.hpp"

namespace stabeq {

// Shared config keys: concept, info, grid_n, rho_grid, theta_lb, theta_ub,
// weights (count|uniform), seed, parallel, out.
EntryModel model_from_config(const RunConfig& cfg, int cov_dim);

// beta1, beta2 (vectors), kappa or kappa1/kappa2, rho
EntryGameTheta theta_from_config(const RunConfig& cfg, int cov_dim);

// beta1_<cov>, ..., beta2_<cov>, ..., kappa1, kappa2, rho
std::vector<std::string> theta_coord_names(int cov_dim, const std::vector<std::string>& cov_names);

// Each command returns a process exit code: 0 ok, 1 error, 2 empty identified
// set (scan: no parameter point passes; counterfactual: no accepted points).

// keys: bin (repeated), beta1/beta2/kappa/rho, selection (symmetric|random),
// n_obs (0 = population CCPs), covariates, dump_fixtures, out
int cmd_simulate(const RunConfig& cfg);

// keys: data, alpha, population, threshold, chains, max_points, init_step,
// minimize_iters, random_starts, start, summary, out
int cmd_scan(const RunConfig& cfg);

// keys: data, points, post | flip_covariate, objectives, max_points, out
int cmd_counterfactual(const RunConfig& cfg);

// keys: alphas, bins_list, n_list, trials, outcomes, out
int cmd_coverage(const RunConfig& cfg);

}  // namespace stabeq
