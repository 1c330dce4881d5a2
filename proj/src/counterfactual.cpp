#include "stabeq/counterfactual.hpp"

#include <algorithm>
#include <cmath>

namespace stabeq {

Objective objective_by_name(const std::string& name) {
    // 2x2 profile order: (0,0), (0,1), (1,0), (1,1)
    if (name == "entrants") return {name, {0.0, 1.0, 1.0, 2.0}, false};
    if (name == "firm1") return {name, {0.0, 0.0, 1.0, 1.0}, false};
    if (name == "firm2") return {name, {0.0, 1.0, 0.0, 1.0}, false};
    if (name == "no_entry") return {name, {1.0, 0.0, 0.0, 0.0}, false};
    throw std::invalid_argument("unknown objective: " + name);
}

BoundResult bound_objective(const BasicGame& game, const ConceptSpec& spec, const Objective& obj) {
    auto cells = spec_cells(game, spec);
    const int A = game.num_profiles;
    if (int(obj.h.size()) != (obj.per_state ? A * game.num_states : A))
        throw std::invalid_argument("bound_objective: objective table has wrong size");

    LinearProgram lp;
    for (size_t c = 0; c < cells.size(); ++c)
        for (int a = 0; a < A; ++a) lp.add_var(0.0, 0.0, 1.0);
    for (size_t c = 0; c < cells.size(); ++c) {
        SparseRow r;
        r.sense = '=';
        r.rhs = 1.0;
        for (int a = 0; a < A; ++a) r.a.push_back({int(c) * A + a, 1.0});
        lp.add_row(std::move(r));
    }
    for (auto& ob : obedience_constraints(game, spec, cells)) {
        SparseRow r;
        r.sense = '<';
        r.rhs = 0.0;
        r.a = ob.a;
        lp.add_row(std::move(r));
    }
    for (size_t c = 0; c < cells.size(); ++c) {
        double w = game.prior[cells[c].state] * cells[c].pi;
        for (int a = 0; a < A; ++a) lp.c[c * A + a] = w * obj.value(a, cells[c].state, game.num_states);
    }

    BoundResult out;
    LpSolution mn = lp_solve(lp);
    if (mn.status == LpStatus::infeasible) {
        out.feasible = false;
        return out;
    }
    if (mn.status != LpStatus::optimal)
        throw std::runtime_error(std::string("bound_objective: solver returned ") + lp_status_name(mn.status));
    for (double& v : lp.c) v = -v;
    LpSolution mx = lp_solve(lp);
    if (mx.status != LpStatus::optimal)
        throw std::runtime_error(std::string("bound_objective: solver returned ") + lp_status_name(mx.status));
    out.lo = mn.objective;
    out.hi = -mx.objective;
    return out;
}

BoundResult bound_objective(const EntryModel& model, const ThetaPoint& theta,
                            const std::vector<CovariateBin>& bins, const Objective& obj) {
    if (bins.empty()) throw std::invalid_argument("bound_objective: no bins");
    DiscreteGrid grid = make_grid(model.grid_n, theta.rho);
    EntryGameTheta th = model.to_theta(theta.payoff, theta.rho);

    VecD w(bins.size(), 1.0);
    if (!model.weights_uniform)
        for (size_t x = 0; x < bins.size(); ++x) w[x] = bins[x].count;
    double ws = 0.0;
    for (double v : w) ws += v;
    for (double& v : w) v /= ws;

    BoundResult out;
    out.lo = out.hi = 0.0;
    for (size_t x = 0; x < bins.size(); ++x) {
        BasicGame game = build_entry_game(th, bins[x].x, grid);
        ConceptSpec spec = make_spec(game, model.concept_kind, model.kind);
        BoundResult b = bound_objective(game, spec, obj);
        if (!b.feasible) return {0.0, 0.0, false};
        out.lo += w[x] * b.lo;
        out.hi += w[x] * b.hi;
    }
    return out;
}

std::vector<PolicyRow> policy_experiment(const EntryModel& model, const std::vector<ThetaPoint>& points,
                                         const BinnedData& pre, const std::vector<CovariateBin>& post_bins,
                                         const std::vector<Objective>& objectives, int max_points,
                                         bool parallel) {
    if (points.empty()) throw std::invalid_argument("policy_experiment: no parameter points");
    if (pre.rows.size() != post_bins.size())
        throw std::invalid_argument("policy_experiment: pre/post bins differ in number");

    std::vector<ThetaPoint> use;
    if (max_points > 0 && int(points.size()) > max_points) {
        for (int i = 0; i < max_points; ++i)
            use.push_back(points[size_t(i) * points.size() / max_points]);
    } else {
        use = points;
    }

    std::vector<CovariateBin> pre_bins;
    for (auto& r : pre.rows) pre_bins.push_back({r.x, r.n});
    const VecD w = model.bin_weights(pre);

    const int no = int(objectives.size()), np = int(use.size());
    // per (theta, objective, regime) bounds
    std::vector<BoundResult> res(size_t(np) * no * 2);
    std::vector<std::string> errors(np);
    parallel_for(np, parallel, [&](int p) {
        try {
            for (int o = 0; o < no; ++o) {
                res[(size_t(p) * no + o) * 2 + 0] = bound_objective(model, use[p], pre_bins, objectives[o]);
                res[(size_t(p) * no + o) * 2 + 1] = bound_objective(model, use[p], post_bins, objectives[o]);
            }
        } catch (const std::exception& e) {
            errors[p] = e.what();
        }
    });
    for (auto& e : errors)
        if (!e.empty()) throw std::runtime_error("policy_experiment: " + e);

    std::vector<PolicyRow> rows;
    for (int o = 0; o < no; ++o) {
        PolicyRow row;
        row.objective = objectives[o].name;
        if (!objectives[o].per_state) {
            row.has_data = true;
            for (size_t x = 0; x < pre.rows.size(); ++x)
                for (size_t a = 0; a < pre.rows[x].phi.size(); ++a)
                    row.data += w[x] * pre.rows[x].phi[a] * objectives[o].h[a];
        }
        row.pre_lo = row.post_lo = kInf;
        row.pre_hi = row.post_hi = -kInf;
        for (int p = 0; p < np; ++p) {
            const BoundResult& bpre = res[(size_t(p) * no + o) * 2 + 0];
            const BoundResult& bpost = res[(size_t(p) * no + o) * 2 + 1];
            if (!bpre.feasible || !bpost.feasible) {
                row.feasible = false;
                continue;
            }
            row.pre_lo = std::min(row.pre_lo, bpre.lo);
            row.pre_hi = std::max(row.pre_hi, bpre.hi);
            row.post_lo = std::min(row.post_lo, bpost.lo);
            row.post_hi = std::max(row.post_hi, bpost.hi);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace stabeq
