#pragma once

#include "stabeq/identify.hpp"

namespace stabeq {

// Outcome functional h(a, e); per_state = false means h depends on the
// profile only (h has num_profiles entries), else num_profiles * num_states.
struct Objective {
    std::string name;
    VecD h;
    bool per_state = false;

    double value(int a, int e, int num_states) const {
        return per_state ? h[size_t(a) * num_states + e] : h[a];
    }
};

// standard 2x2 entry objectives: "entrants", "firm1", "firm2", "no_entry"
Objective objective_by_name(const std::string& name);

struct BoundResult {
    double lo = 0.0, hi = 0.0;
    bool feasible = true;  // false when the obedience polytope is empty
};

// Range of E[h] over all rules obeying the given concept/information pair;
// the outcome distribution is left completely free (no consistency rows).
BoundResult bound_objective(const BasicGame& game, const ConceptSpec& spec, const Objective& obj);

// Count-weighted average of per-bin bounds at one parameter point.
BoundResult bound_objective(const EntryModel& model, const ThetaPoint& theta,
                            const std::vector<CovariateBin>& bins, const Objective& obj);

struct PolicyRow {
    std::string objective;
    double data = 0.0;  // estimate from the pre-regime outcome distributions
    bool has_data = false;
    double pre_lo = 0.0, pre_hi = 0.0;
    double post_lo = 0.0, post_hi = 0.0;
    bool feasible = true;
};

// Union over the parameter points of the pre/post bound intervals, one row per
// objective. `max_points` > 0 thins the points uniformly to at most that many.
std::vector<PolicyRow> policy_experiment(const EntryModel& model, const std::vector<ThetaPoint>& points,
                                         const BinnedData& pre, const std::vector<CovariateBin>& post_bins,
                                         const std::vector<Objective>& objectives, int max_points = 0,
                                         bool parallel = true);

}  // namespace stabeq
