#pragma once

#include <cstdint>
#include <cstdio>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stabeq {

using VecD = std::vector<double>;
using VecI = std::vector<int>;

constexpr double kInf = 1e300;

// ---- multi-index <-> flat index, row-major with index 0 outermost --------

inline int flat_index(std::span<const int> dims, std::span<const int> idx) {
    int f = 0;
    for (size_t k = 0; k < dims.size(); ++k) f = f * dims[k] + idx[k];
    return f;
}

inline void unflat_index(std::span<const int> dims, int flat, std::span<int> idx) {
    for (size_t k = dims.size(); k-- > 0;) {
        idx[k] = flat % dims[k];
        flat /= dims[k];
    }
}

inline int dims_product(std::span<const int> dims) {
    int p = 1;
    for (int d : dims) p *= d;
    return p;
}

// ---- standard normal ------------------------------------------------------

double normal_cdf(double x);
double normal_pdf(double x);

// Inverse standard normal CDF, |error| < 1e-13 on (0,1).
// Acklam's rational approximation polished by one Halley step on erfc.
double normal_ppf(double p);

// Upper-tail quantile z(tau) = Phi^{-1}(1 - tau).
double normal_upper_quantile(double tau);

// ---- RNG -------------------------------------------------------------------
// All random draws in the project flow through Rng so that results are
// reproducible bit-for-bit regardless of platform or thread count.
// std::uniform_* distributions are implementation-defined, so we avoid them.

uint64_t splitmix64(uint64_t& state);

class Rng {
  public:
    explicit Rng(uint64_t seed);
    // stream `idx` derived from `seed`; streams are independent and stable,
    // used to give each MC trial / scan chain its own generator
    Rng(uint64_t seed, uint64_t idx);

    double uniform();                       // (0,1), never exactly 0 or 1
    double normal();                        // via normal_ppf(uniform())
    int categorical(const VecD& prob);      // prob sums to ~1
    VecD simplex_uniform(int k);            // uniform on the probability simplex

  private:
    std::mt19937_64 eng_;
};

// ---- parallel loop ----------------------------------------------------------
// Runs fn(i) for i in [0, n). `parallel = false` is the serial reference path;
// both orders must produce identical results, which holds because every i owns
// its state (callers pass per-index Rng streams and write disjoint slots).

template <typename F>
void parallel_for(int n, bool parallel, F&& fn) {
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
#else
    (void)parallel;
#endif
    for (int i = 0; i < n; ++i) fn(i);
}

// ---- formatting -------------------------------------------------------------

std::string fmt_full(double x);   // %.17g, round-trips exactly
std::string fmt_short(double x);  // %.10g, for CSV artifacts

}  // namespace stabeq
