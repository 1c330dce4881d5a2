#pragma once

#include "stabeq/data.hpp"

namespace stabeq {

// Simultaneous confidence region for the per-bin outcome distributions:
// equal-width intervals phi_hat +- z(beta/4) / (2 sqrt(n_x)) per bin, with
// beta chosen by a Sidak split of alpha across bins.
struct CcpRegion {
    double alpha = 0.0;
    double beta = 0.0;          // per-bin error budget
    double z = 0.0;             // z(beta/4)
    VecD half_width;            // per bin
    std::vector<VecD> lo, hi;   // per bin, per profile; NOT truncated to [0,1]
    bool within_validity = true;  // beta <= 0.032, where the finite-sample bound holds
};

double sidak_beta(double alpha, int num_bins);

// Finite-sample lower bound on per-bin coverage at error budget beta:
// 1 - beta for beta <= 0.032, and the documented diagnostic branch
// 6*Phi(3*z(beta/4)/sqrt(8)) - 5 for 0.032 < beta <= 0.3.
double fs_bin_coverage_bound(double beta);

CcpRegion fs_region(const BinnedData& bins, double alpha);

// Monte Carlo simultaneous coverage of the region: each trial draws one
// outcome distribution per bin (uniformly from the simplex), a multinomial
// sample of size n_per_bin, and checks whether every coordinate of every bin
// lands inside its interval.
double coverage_mc(int num_bins, int n_per_bin, double alpha, int trials, uint64_t seed,
                   bool parallel = true, int num_outcomes = 4);

}  // namespace stabeq
