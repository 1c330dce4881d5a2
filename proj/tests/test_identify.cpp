#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "stabeq/identify.hpp"

using namespace stabeq;

namespace {

// population CCPs from the uniform-over-nash selection at theta0
BinnedData dgp_data(const EntryModel& model, const EntryGameTheta& theta0,
                    const std::vector<CovariateBin>& bins) {
    DiscreteGrid grid = make_grid(model.grid_n, theta0.rho);
    BinnedData data;
    data.profile_names = {"00", "01", "10", "11"};
    for (int k = 0; k < model.cov_dim; ++k) data.covariate_names.push_back("x" + std::to_string(k));
    for (const auto& bin : bins) {
        BasicGame g = build_entry_game(theta0, bin.x, grid);
        auto rule = symmetric_nash_rule(g);
        REQUIRE(rule.has_value());
        data.rows.push_back({bin.x, induced_ccp(g, *rule), bin.count});
    }
    return data;
}

EntryModel small_model(int cov_dim = 1, int grid_n = 6) {
    EntryModel model;
    model.cov_dim = cov_dim;
    model.grid_n = grid_n;
    model.lb = VecD(model.payoff_dim(), -2.5);
    model.ub = VecD(model.payoff_dim(), 2.5);
    return model;
}

EntryGameTheta theta0_fixture(int cov_dim = 1) {
    EntryGameTheta theta;
    theta.beta = {VecD(cov_dim, 0.0), VecD(cov_dim, 0.0)};
    theta.beta[0][0] = 0.4;
    theta.beta[1][0] = 0.2;
    theta.kappa = {-0.6, -0.6};
    theta.rho = 0.0;
    return theta;
}

ThetaPoint point_of(const EntryGameTheta& theta) {
    ThetaPoint p;
    p.payoff = theta.flat();
    p.payoff.pop_back();
    p.rho = theta.rho;
    return p;
}

}  // namespace

TEST_CASE("criterion is zero at the data-generating parameters") {
    EntryModel model = small_model();
    EntryGameTheta theta0 = theta0_fixture();
    BinnedData data = dgp_data(model, theta0, {{{0.0}, 100}, {{1.0}, 100}});
    CriterionResult res = criterion(model, data, point_of(theta0));
    CHECK(res.value < 1e-8);
    CHECK(in_identified_set(model, data, point_of(theta0)));
}

TEST_CASE("criterion is positive under gross misspecification") {
    EntryModel model = small_model();
    EntryGameTheta theta0 = theta0_fixture();
    BinnedData data = dgp_data(model, theta0, {{{0.0}, 100}, {{1.0}, 100}});
    // entry dominant for both players at every shock: phi must pile on (1,1)
    ThetaPoint far;
    far.payoff = {2.4, 2.4, 0.0, 0.0};
    REQUIRE((int)far.payoff.size() == model.payoff_dim());
    CriterionResult res = criterion(model, data, far);
    CHECK(res.value > 0.05);
    CHECK_FALSE(in_identified_set(model, data, far));
}

TEST_CASE("bin weights follow counts unless told otherwise") {
    EntryModel model = small_model();
    EntryGameTheta theta0 = theta0_fixture();
    BinnedData unbalanced = dgp_data(model, theta0, {{{0.0}, 100}, {{1.0}, 900}});
    ThetaPoint far;
    far.payoff = {2.4, 2.4, 0.0, 0.0};

    BinnedData only0 = unbalanced, only1 = unbalanced;
    only0.rows.erase(only0.rows.begin() + 1);
    only1.rows.erase(only1.rows.begin());
    double v0 = criterion(model, only0, far).value;
    double v1 = criterion(model, only1, far).value;

    double count_weighted = criterion(model, unbalanced, far).value;
    CHECK(count_weighted == doctest::Approx(0.1 * v0 + 0.9 * v1).epsilon(1e-9));

    model.weights_uniform = true;
    double uniform_weighted = criterion(model, unbalanced, far).value;
    CHECK(uniform_weighted == doctest::Approx(0.5 * v0 + 0.5 * v1).epsilon(1e-9));
}

TEST_CASE("confidence regions weakly lower the criterion") {
    EntryModel model = small_model();
    EntryGameTheta theta0 = theta0_fixture();
    BinnedData data = dgp_data(model, theta0, {{{0.0}, 400}, {{1.0}, 400}});
    ThetaPoint probe;
    probe.payoff = {1.0, 0.5, -1.5, -0.2};

    double exact = criterion(model, data, probe).value;
    CcpRegion narrow = fs_region(data, 0.05);
    CcpRegion wide = fs_region(data, 0.01);  // smaller alpha -> wider intervals
    REQUIRE(wide.half_width[0] > narrow.half_width[0]);
    double v_narrow = criterion(model, data, probe, &narrow).value;
    double v_wide = criterion(model, data, probe, &wide).value;
    CHECK(v_narrow <= exact + 1e-9);
    CHECK(v_wide <= v_narrow + 1e-9);
}

TEST_CASE("gradient matches central finite differences") {
    EntryModel model = small_model(1, 5);
    EntryGameTheta theta0 = theta0_fixture();
    BinnedData data = dgp_data(model, theta0, {{{0.0}, 300}, {{1.0}, 300}});
    const CcpRegion region = fs_region(data, 0.05);

    Rng rng(17);
    int matched = 0, kinks = 0;
    for (int trial = 0; trial < 12; ++trial) {
        ThetaPoint p;
        for (int k = 0; k < model.payoff_dim(); ++k) p.payoff.push_back(rng.uniform() * 3 - 1.5);
        for (const CcpRegion* reg : {(const CcpRegion*)nullptr, &region}) {
            CriterionResult res = criterion(model, data, p, reg);
            if (res.value < 1e-4) continue;
            double h = 1e-5;
            for (int k = 0; k < model.payoff_dim(); ++k) {
                ThetaPoint up = p, dn = p;
                up.payoff[k] += h;
                dn.payoff[k] -= h;
                double vu = criterion(model, data, up, reg, false).value;
                double vd = criterion(model, data, dn, reg, false).value;
                double fwd = (vu - res.value) / h, bwd = (res.value - vd) / h;
                double scale = std::max({1e-4, std::abs(fwd), std::abs(bwd)});
                if (std::abs(fwd - bwd) / scale > 1e-3) {
                    ++kinks;  // one-sided slopes disagree: not differentiable here
                    continue;
                }
                double fd = 0.5 * (fwd + bwd);
                CHECK(std::abs(res.gradient[k] - fd) / scale < 1e-3);
                ++matched;
            }
        }
    }
    // kinks are a measure-zero event at random points; nearly everything must match
    CHECK(matched >= 40);
    CHECK(kinks <= matched / 10);
}

TEST_CASE("minimizer recovers a point of the identified set") {
    EntryModel model = small_model();
    EntryGameTheta theta0 = theta0_fixture();
    BinnedData data = dgp_data(model, theta0, {{{0.0}, 200}, {{1.0}, 200}});
    MinimizeOptions opt;
    opt.seed = 3;
    MinimizeResult res = minimize_criterion(model, data, {}, nullptr, opt);
    CHECK(res.value < 1e-6);
    CHECK(in_identified_set(model, data, res.best));
    CHECK(res.evaluations > 0);
}

TEST_CASE("rho grid ties break to the earliest point") {
    EntryModel model = small_model();
    model.rho_grid = {0.0, 0.35};
    EntryGameTheta theta0 = theta0_fixture();
    theta0.rho = 0.35;
    BinnedData data = dgp_data(model, theta0, {{{0.0}, 30}, {{1.0}, 30}});
    // tiny samples make the region wide enough to accept both rho values
    CcpRegion region = fs_region(data, 0.05);
    MinimizeOptions opt;
    opt.seed = 5;
    MinimizeResult res = minimize_criterion(model, data, {}, &region, opt);
    REQUIRE(res.value < 1e-7);
    ThetaPoint at_zero = res.best;
    at_zero.rho = 0.0;
    REQUIRE(in_identified_set(model, data, at_zero, &region));
    CHECK(res.best.rho == 0.0);
}

TEST_CASE("scan covers the set and reproduces itself bit for bit") {
    EntryModel model = small_model();
    EntryGameTheta theta0 = theta0_fixture();
    BinnedData data = dgp_data(model, theta0, {{{0.0}, 200}, {{1.0}, 200}});
    CcpRegion region = fs_region(data, 0.05);

    ScanConfig cfg;
    cfg.chains = 3;
    cfg.max_points = 40;
    cfg.seed = 21;
    ScanResult a = scan_set(model, data, point_of(theta0), cfg, &region);
    CHECK(a.num_accepted > 10);
    CHECK(a.records[0].chain == -1);  // the seed point comes first
    CHECK(a.records[0].accepted);
    CHECK(a.min_criterion <= cfg.threshold);
    REQUIRE(a.records.size() <= size_t(1 + 3 * 40));

    // every accepted point re-verifies; every rejected point re-fails
    for (const auto& rec : a.records) {
        ThetaPoint p = ThetaPoint::from_flat(rec.theta);
        double v = criterion(model, data, p, &region, false).value;
        CHECK(rec.accepted == (v <= cfg.threshold));
        CHECK(v == doctest::Approx(rec.crit).epsilon(1e-10));
    }

    // projections bound the accepted cloud and only scanned coords count
    REQUIRE(a.proj_lo.size() == size_t(model.payoff_dim() + 1));
    CHECK_FALSE(a.scanned.back());  // rho fixed: single-point grid
    for (const auto& rec : a.records) {
        if (!rec.accepted) continue;
        for (size_t k = 0; k < rec.theta.size(); ++k) {
            CHECK(rec.theta[k] >= a.proj_lo[k] - 1e-12);
            CHECK(rec.theta[k] <= a.proj_hi[k] + 1e-12);
        }
    }

    ScanResult b = scan_set(model, data, point_of(theta0), cfg, &region);
    REQUIRE(a.records.size() == b.records.size());
    for (size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].theta == b.records[i].theta);
        CHECK(a.records[i].crit == b.records[i].crit);
        CHECK(a.records[i].accepted == b.records[i].accepted);
    }

    ScanConfig serial_cfg = cfg;
    serial_cfg.parallel = false;
    ScanResult c = scan_set(model, data, point_of(theta0), serial_cfg, &region);
    REQUIRE(c.records.size() == a.records.size());
    for (size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].theta == c.records[i].theta);
}

TEST_CASE("scan rejects a seed outside the set") {
    EntryModel model = small_model();
    EntryGameTheta theta0 = theta0_fixture();
    BinnedData data = dgp_data(model, theta0, {{{0.0}, 200}});
    ThetaPoint far;
    far.payoff = {2.4, 2.4, 0.0, 0.0};
    ScanConfig cfg;
    CHECK_THROWS_AS(scan_set(model, data, far, cfg, nullptr), std::invalid_argument);
}

TEST_CASE("scan walks rho only when the grid spans an interval") {
    EntryModel model = small_model(1, 5);
    model.rho_grid = {-0.5, 0.5};
    EntryGameTheta theta0 = theta0_fixture();
    BinnedData data = dgp_data(model, theta0, {{{0.0}, 50}, {{1.0}, 50}});
    CcpRegion region = fs_region(data, 0.05);
    ScanConfig cfg;
    cfg.chains = 2;
    cfg.max_points = 30;
    cfg.seed = 4;
    ScanResult res = scan_set(model, data, point_of(theta0), cfg, &region);
    CHECK(res.scanned.back());
    bool rho_moved = false;
    for (const auto& rec : res.records) rho_moved = rho_moved || rec.theta.back() != 0.0;
    CHECK(rho_moved);
    for (const auto& rec : res.records) {
        CHECK(rec.theta.back() >= -0.5);
        CHECK(rec.theta.back() <= 0.5);
    }
}

TEST_CASE("criterion validates its inputs") {
    EntryModel model = small_model();
    BinnedData empty;
    ThetaPoint p;
    p.payoff.assign(model.payoff_dim(), 0.0);
    CHECK_THROWS(criterion(model, empty, p));

    EntryGameTheta theta0 = theta0_fixture();
    BinnedData data = dgp_data(model, theta0, {{{0.0}, 100}});
    BinnedData other = dgp_data(model, theta0, {{{0.0}, 100}, {{1.0}, 100}});
    CcpRegion mismatched = fs_region(other, 0.05);
    CHECK_THROWS(criterion(model, data, p, &mismatched));
}
