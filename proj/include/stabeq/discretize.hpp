#pragma once

#include "stabeq/common.hpp"

namespace stabeq {

struct BasicGame;

// Product grid of shock support points with a joint prior over the
// row-major state index (player 0's coordinate outermost).
struct DiscreteGrid {
    std::vector<VecD> points;  // per player, ascending
    VecD prior;                // joint, sums to 1
    double rho = 0.0;

    int num_players() const { return int(points.size()); }
    int num_states() const { return int(prior.size()); }
    VecI dims() const {
        VecI d;
        for (auto& p : points) d.push_back(int(p.size()));
        return d;
    }
};

// n equal-mass representative points of the standard normal,
// x_j = Phi^{-1}((2j-1)/(2n)), exactly symmetric about 0.
VecD kennan_points(int n);

// Joint prior over the product of two point sets proportional to the Gaussian
// copula density with correlation rho at the marginal quantiles; rho = 0 is
// exactly uniform. Accumulated in log space before normalizing.
VecD copula_prior(const VecD& pts1, const VecD& pts2, double rho);

// Two-player grid: kennan_points(n) per player + copula_prior.
DiscreteGrid make_grid(int n, double rho);

// Correlation of the two coordinates under the grid's joint prior.
double grid_correlation(const DiscreteGrid& g);

// Smallest t such that some sigma: E -> Delta(A) satisfies every pure-strategy
// obedience inequality up to t and matches the outcome distribution phi up to
// t in every coordinate. Zero iff phi is exactly rationalizable on this grid.
double approximation_error(const BasicGame& game, const VecD& phi);

}  // namespace stabeq
