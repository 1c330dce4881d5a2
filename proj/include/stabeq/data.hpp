#pragma once

#include "stabeq/common.hpp"

namespace stabeq {

// One covariate bin of grouped data: covariates, empirical outcome
// distribution over action profiles, and the number of observations.
struct BinnedRow {
    VecD x;
    VecD phi;
    double n = 0;
};

struct BinnedData {
    std::vector<std::string> covariate_names;  // one per x entry
    std::vector<std::string> profile_names;    // one per phi entry, e.g. "00","01","10","11"
    std::vector<BinnedRow> rows;

    int num_profiles() const { return rows.empty() ? 0 : int(rows[0].phi.size()); }
    int cov_dim() const { return rows.empty() ? 0 : int(rows[0].x.size()); }
};

// canonical profile names for a 2x2 game (row-major, player 0 first)
std::vector<std::string> default_profile_names(const VecI& action_counts);

}  // namespace stabeq
