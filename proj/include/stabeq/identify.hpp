#pragma once

#include "stabeq/data.hpp"
#include "stabeq/equilibria.hpp"
#include "stabeq/inference.hpp"

namespace stabeq {

// criterion values at or below this are "in the set"
constexpr double kZeroThreshold = 1e-6;

// Entry-game model binding a dataset's covariate bins to parametrized games.
struct EntryModel {
    int cov_dim = 1;
    int grid_n = 30;
    Concept concept_kind = Concept::bse;
    InfoKind kind = InfoKind::private_info;
    VecD rho_grid = {0.0};        // minimize_criterion iterates this; a single
                                  // point means rho is held fixed
    bool weights_uniform = false; // default: weights proportional to bin counts
    VecD lb, ub;                  // payoff-parameter bounds (empty = unbounded)

    int payoff_dim() const { return 2 * cov_dim + 2; }  // beta_0 | beta_1 | kappa
    EntryGameTheta to_theta(const VecD& payoff, double rho) const;
    VecD bin_weights(const BinnedData& data) const;
};

struct ThetaPoint {
    VecD payoff;
    double rho = 0.0;

    VecD flat() const;
    static ThetaPoint from_flat(const VecD& v);
};

struct CriterionResult {
    double value = 0.0;
    VecD gradient;       // d value / d payoff-params via optimal duals; empty if unavailable
    // true only when every bin's LP basis is nondegenerate, which guarantees a
    // unique dual and hence a valid gradient.  Conservative: these LPs are
    // usually degenerate at the vertex, yet the gradient still agrees with
    // finite differences away from kinks of the value function.
    bool smooth = true;
};

// Weighted sum over bins of the minimal obedience slack subject to matching
// the bin's outcome distribution (exactly, or anywhere inside `region`).
CriterionResult criterion(const EntryModel& model, const BinnedData& data, const ThetaPoint& theta,
                          const CcpRegion* region = nullptr, bool want_gradient = true,
                          bool parallel = false);

bool in_identified_set(const EntryModel& model, const BinnedData& data, const ThetaPoint& theta,
                       const CcpRegion* region = nullptr);

struct MinimizeOptions {
    int max_iter = 200;
    double stop_value = 1e-7;  // stop a descent run once the value is this small
    int random_starts = 4;     // appended to user starts, drawn inside bounds
    uint64_t seed = 7;
};

struct MinimizeResult {
    ThetaPoint best;
    double value = kInf;
    int evaluations = 0;
};

// Grid over rho (ties to the earliest grid point), projected gradient descent
// with Armijo backtracking over the payoff parameters.
MinimizeResult minimize_criterion(const EntryModel& model, const BinnedData& data,
                                  const std::vector<VecD>& starts, const CcpRegion* region = nullptr,
                                  const MinimizeOptions& opt = {});

struct ScanConfig {
    int chains = 4;
    int max_points = 500;         // proposals per chain
    double threshold = kZeroThreshold;
    double init_step = 0.1;       // x parameter scale
    double min_step_frac = 1e-3;  // step floor, x parameter scale
    double max_step_frac = 2.0;   // step cap, x parameter scale
    uint64_t seed = 1;
    bool parallel = true;
};

struct ScanRecord {
    VecD theta;  // flat: payoff | rho
    double crit = 0.0;
    bool accepted = false;
    int chain = 0;  // -1 marks the seed point
    int step = 0;
};

struct ScanResult {
    std::vector<ScanRecord> records;  // seed first, then chains in order
    int num_accepted = 0;
    double min_criterion = kInf;      // over everything evaluated
    VecD proj_lo, proj_hi;            // per flat coordinate, over accepted points
    double volume = 0.0;              // product of projection widths over scanned coords
    std::vector<bool> scanned;        // which flat coordinates were perturbed
};

// Random-walk exploration from a point inside the set: Gaussian proposals with
// per-coordinate steps that grow 1.25x on acceptance and shrink 0.7x on
// rejection. rho is scanned only when the model's rho_grid spans an interval.
// Throws if the seed point itself fails the threshold.
ScanResult scan_set(const EntryModel& model, const BinnedData& data, const ThetaPoint& seed_point,
                    const ScanConfig& cfg, const CcpRegion* region = nullptr);

}  // namespace stabeq
