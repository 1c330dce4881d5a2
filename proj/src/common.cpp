#include "stabeq/common.hpp"

#include <cmath>

namespace stabeq {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_ppf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_ppf: p outside (0,1)");
    // work in the lower tail, where Phi(x) - p is free of cancellation
    if (p > 0.5) return -normal_ppf(1.0 - p);

    // Acklam's rational approximation (relative error ~1.15e-9)
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= phigh) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley step: e = Phi(x) - p, x <- x - e/(phi(x) + e*x/2) brings the
    // error near machine precision.
    double e = normal_cdf(x) - p;
    double u = e / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double normal_upper_quantile(double tau) { return normal_ppf(1.0 - tau); }

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

static uint64_t mix_seed(uint64_t seed, uint64_t idx) {
    uint64_t s = seed;
    (void)splitmix64(s);
    s ^= 0x632be59bd9b4e019ULL * (idx + 1);
    return splitmix64(s);
}

Rng::Rng(uint64_t seed) : eng_(mix_seed(seed, 0)) {}
Rng::Rng(uint64_t seed, uint64_t idx) : eng_(mix_seed(seed, idx + 1)) {}

double Rng::uniform() {
    // 53 random bits, offset by half an ulp so the result is strictly in (0,1)
    return (double(eng_() >> 11) + 0.5) * 0x1p-53;
}

double Rng::normal() { return normal_ppf(uniform()); }

int Rng::categorical(const VecD& prob) {
    double u = uniform(), cum = 0.0;
    for (size_t k = 0; k + 1 < prob.size(); ++k) {
        cum += prob[k];
        if (u < cum) return int(k);
    }
    return int(prob.size()) - 1;
}

VecD Rng::simplex_uniform(int k) {
    VecD v(k);
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
        v[i] = -std::log(uniform());
        s += v[i];
    }
    for (int i = 0; i < k; ++i) v[i] /= s;
    return v;
}

std::string fmt_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_short(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

}  // namespace stabeq
