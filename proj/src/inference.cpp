#include "stabeq/inference.hpp"

#include <cmath>

namespace stabeq {

double sidak_beta(double alpha, int num_bins) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("sidak_beta: alpha outside (0,1)");
    if (num_bins < 1) throw std::invalid_argument("sidak_beta: need at least one bin");
    return 1.0 - std::pow(1.0 - alpha, 1.0 / num_bins);
}

double fs_bin_coverage_bound(double beta) {
    if (beta <= 0.0 || beta > 0.3)
        throw std::domain_error("fs_bin_coverage_bound: beta outside (0, 0.3]");
    if (beta <= 0.032) return 1.0 - beta;
    double z = normal_upper_quantile(beta / 4.0);
    return 6.0 * normal_cdf(3.0 * z / std::sqrt(8.0)) - 5.0;
}

CcpRegion fs_region(const BinnedData& bins, double alpha) {
    if (bins.rows.empty()) throw std::invalid_argument("fs_region: no bins");
    CcpRegion r;
    r.alpha = alpha;
    r.beta = sidak_beta(alpha, int(bins.rows.size()));
    r.z = normal_upper_quantile(r.beta / 4.0);
    r.within_validity = r.beta <= 0.032;
    for (auto& row : bins.rows) {
        if (row.n < 1.0) throw std::invalid_argument("fs_region: every bin needs at least one observation");
        double hw = r.z / (2.0 * std::sqrt(row.n));
        r.half_width.push_back(hw);
        VecD lo(row.phi.size()), hi(row.phi.size());
        for (size_t a = 0; a < row.phi.size(); ++a) {
            lo[a] = row.phi[a] - hw;
            hi[a] = row.phi[a] + hw;
        }
        r.lo.push_back(std::move(lo));
        r.hi.push_back(std::move(hi));
    }
    return r;
}

double coverage_mc(int num_bins, int n_per_bin, double alpha, int trials, uint64_t seed,
                   bool parallel, int num_outcomes) {
    if (num_bins < 1 || n_per_bin < 1 || trials < 1)
        throw std::invalid_argument("coverage_mc: sizes must be positive");
    const double beta = sidak_beta(alpha, num_bins);
    const double z = normal_upper_quantile(beta / 4.0);
    const double hw = z / (2.0 * std::sqrt(double(n_per_bin)));

    std::vector<uint8_t> covered(trials, 0);
    parallel_for(trials, parallel, [&](int trial) {
        Rng rng(seed, uint64_t(trial));
        bool ok = true;
        VecI counts(num_outcomes);
        for (int x = 0; x < num_bins && ok; ++x) {
            VecD phi = rng.simplex_uniform(num_outcomes);
            std::fill(counts.begin(), counts.end(), 0);
            for (int obs = 0; obs < n_per_bin; ++obs) ++counts[rng.categorical(phi)];
            for (int a = 0; a < num_outcomes; ++a) {
                double phat = double(counts[a]) / n_per_bin;
                if (std::fabs(phat - phi[a]) > hw) {
                    ok = false;
                    break;
                }
            }
        }
        covered[trial] = ok ? 1 : 0;
    });
    long hits = 0;
    for (uint8_t c : covered) hits += c;
    return double(hits) / trials;
}

std::vector<std::string> default_profile_names(const VecI& action_counts) {
    int A = dims_product(action_counts);
    std::vector<std::string> names(A);
    VecI idx(action_counts.size());
    for (int a = 0; a < A; ++a) {
        unflat_index(action_counts, a, idx);
        std::string s;
        for (int v : idx) s += std::to_string(v);
        names[a] = s;
    }
    return names;
}

}  // namespace stabeq
