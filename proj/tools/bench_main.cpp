#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "stabeq/counterfactual.hpp"
#include "stabeq/discretize.hpp"

using namespace stabeq;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <typename Fn>
double time_ms(Fn&& fn) {
    double t0 = now_ms();
    fn();
    return now_ms() - t0;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

BinnedData synthetic_bins(int num_bins, uint64_t seed) {
    BinnedData data;
    data.covariate_names = {"const", "z"};
    data.profile_names = {"00", "01", "10", "11"};
    for (int b = 0; b < num_bins; ++b) {
        Rng rng(seed, b);
        BinnedRow row;
        row.x = {1.0, num_bins == 1 ? 0.0 : double(b) / (num_bins - 1)};
        row.phi = rng.simplex_uniform(4);
        row.n = 1000;
        data.rows.push_back(std::move(row));
    }
    return data;
}

}  // namespace

int main(int argc, char** argv) {
    int scale = argc > 1 ? std::atoi(argv[1]) : 1;
    if (scale < 1) scale = 1;

    {
        int trials = 4000 * scale;
        volatile double sink = 0;
        double s = time_ms([&] { sink = coverage_mc(10, 500, 0.05, trials, 42, false); });
        double p = time_ms([&] { sink = coverage_mc(10, 500, 0.05, trials, 42, true); });
        (void)sink;
        report("coverage_mc", s, p);
    }

    BinnedData data = synthetic_bins(24, 7);
    EntryModel model;
    model.cov_dim = 2;
    model.grid_n = 20;
    model.lb = VecD(model.payoff_dim(), -3.0);
    model.ub = VecD(model.payoff_dim(), 3.0);

    std::vector<ThetaPoint> points;
    Rng rng(11);
    for (int k = 0; k < 8 * scale; ++k) {
        ThetaPoint p;
        for (int j = 0; j < model.payoff_dim(); ++j) p.payoff.push_back(rng.uniform() * 2 - 1);
        p.rho = 0.0;
        points.push_back(std::move(p));
    }

    {
        auto run = [&](bool parallel) {
            double acc = 0;
            for (const auto& p : points) acc += criterion(model, data, p, nullptr, false, parallel).value;
            return acc;
        };
        volatile double sink = 0;
        double s = time_ms([&] { sink = run(false); });
        double p = time_ms([&] { sink = run(true); });
        (void)sink;
        report("criterion over bins", s, p);
    }

    {
        std::vector<CovariateBin> post;
        for (const auto& row : data.rows) post.push_back({row.x, row.n});
        std::vector<Objective> objs = {objective_by_name("entrants"), objective_by_name("no_entry")};
        volatile double sink = 0;
        double s = time_ms([&] { sink = policy_experiment(model, points, data, post, objs, 0, false)[0].pre_hi; });
        double p = time_ms([&] { sink = policy_experiment(model, points, data, post, objs, 0, true)[0].pre_hi; });
        (void)sink;
        report("counterfactual bounds", s, p);
    }

    return 0;
}
