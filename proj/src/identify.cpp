#include "stabeq/identify.hpp"

#include <algorithm>
#include <cmath>

namespace stabeq {

EntryGameTheta EntryModel::to_theta(const VecD& payoff, double rho) const {
    if (int(payoff.size()) != payoff_dim())
        throw std::invalid_argument("EntryModel: payoff vector has wrong length");
    EntryGameTheta t;
    t.beta = {VecD(payoff.begin(), payoff.begin() + cov_dim),
              VecD(payoff.begin() + cov_dim, payoff.begin() + 2 * cov_dim)};
    t.kappa = {payoff[2 * cov_dim], payoff[2 * cov_dim + 1]};
    t.rho = rho;
    return t;
}

VecD EntryModel::bin_weights(const BinnedData& data) const {
    VecD w(data.rows.size(), 1.0);
    if (!weights_uniform) {
        for (size_t x = 0; x < data.rows.size(); ++x) {
            if (data.rows[x].n <= 0.0)
                throw std::invalid_argument("bin_weights: count-proportional weights need positive counts");
            w[x] = data.rows[x].n;
        }
    }
    double s = 0.0;
    for (double v : w) s += v;
    for (double& v : w) v /= s;
    return w;
}

VecD ThetaPoint::flat() const {
    VecD v = payoff;
    v.push_back(rho);
    return v;
}

ThetaPoint ThetaPoint::from_flat(const VecD& v) {
    ThetaPoint t;
    t.payoff.assign(v.begin(), v.end() - 1);
    t.rho = v.back();
    return t;
}

namespace {

// d(deviation gain)/d(payoff param k) for player i deviating from profile a to
// dev, at covariates x; the entry payoff is linear in (beta, kappa) so this is
// state-free
double ddev_dtheta(const BasicGame& g, const VecD& x, int cov_dim, int i, int a, int dev, int k) {
    double diff = double(dev - g.action_of(a, i));
    if (diff == 0.0) return 0.0;
    if (k >= i * cov_dim && k < (i + 1) * cov_dim) return diff * x[k - i * cov_dim];
    if (k == 2 * cov_dim + i) return diff * g.action_of(a, 1 - i);
    return 0.0;
}

struct BinSolve {
    double value = 0.0;
    VecD grad;
    bool smooth = true;
    LpStatus status = LpStatus::optimal;
};

BinSolve solve_bin(const EntryModel& model, const BinnedRow& row, const EntryGameTheta& th,
                   const DiscreteGrid& grid, const CcpRegion* region, size_t bin_index,
                   bool want_gradient) {
    BinSolve out;
    BasicGame game = build_entry_game(th, row.x, grid);
    ConceptSpec spec = make_spec(game, model.concept_kind, model.kind);
    auto cells = spec_cells(game, spec);
    const int A = game.num_profiles;

    LinearProgram lp;
    for (size_t c = 0; c < cells.size(); ++c)
        for (int a = 0; a < A; ++a) lp.add_var(0.0, 0.0, 1.0);
    const int qvar = lp.add_var(1.0, 0.0, kInf);
    int phi0 = -1;
    if (region) {
        phi0 = lp.num_vars;
        for (int a = 0; a < A; ++a)
            lp.add_var(0.0, std::max(0.0, region->lo[bin_index][a]), std::min(1.0, region->hi[bin_index][a]));
    }

    for (size_t c = 0; c < cells.size(); ++c) {
        SparseRow r;
        r.sense = '=';
        r.rhs = 1.0;
        for (int a = 0; a < A; ++a) r.a.push_back({int(c) * A + a, 1.0});
        lp.add_row(std::move(r));
    }
    const int obed_offset = int(lp.rows.size());
    auto obed = obedience_constraints(game, spec, cells);
    for (auto& ob : obed) {
        SparseRow r;
        r.sense = '<';
        r.rhs = 0.0;
        r.a = ob.a;
        r.a.push_back({qvar, -1.0});
        lp.add_row(std::move(r));
    }
    auto cons = consistency_constraints(game, cells);
    for (int a = 0; a < A; ++a) {
        SparseRow r;
        r.sense = '=';
        r.a = cons[a];
        if (region) {
            r.a.push_back({phi0 + a, -1.0});
            r.rhs = 0.0;
        } else {
            r.rhs = row.phi[a];
        }
        lp.add_row(std::move(r));
    }
    if (region) {
        SparseRow r;
        r.sense = '=';
        r.rhs = 1.0;
        for (int a = 0; a < A; ++a) r.a.push_back({phi0 + a, 1.0});
        lp.add_row(std::move(r));
    }

    LpSolution sol = lp_solve(lp);
    out.status = sol.status;
    if (sol.status != LpStatus::optimal) return out;
    out.value = std::max(0.0, sol.objective);
    out.smooth = sol.strict_complementarity;

    if (want_gradient) {
        out.grad.assign(model.payoff_dim(), 0.0);
        for (size_t r = 0; r < obed.size(); ++r) {
            double y = sol.y[obed_offset + int(r)];
            if (y == 0.0) continue;
            int i = obed[r].meta.player, dev = obed[r].meta.dev;
            for (auto& [var, coef] : obed[r].a) {
                (void)coef;
                int c = var / A, a = var % A;
                double mass = game.prior[cells[c].state] * cells[c].pi * sol.x[var];
                if (mass == 0.0) continue;
                for (int k = 0; k < model.payoff_dim(); ++k) {
                    double d = ddev_dtheta(game, row.x, model.cov_dim, i, a, dev, k);
                    if (d != 0.0) out.grad[k] += y * mass * d;
                }
            }
        }
    }
    return out;
}

}  // namespace

CriterionResult criterion(const EntryModel& model, const BinnedData& data, const ThetaPoint& theta,
                          const CcpRegion* region, bool want_gradient, bool parallel) {
    if (data.rows.empty()) throw std::invalid_argument("criterion: no data bins");
    if (region && region->lo.size() != data.rows.size())
        throw std::invalid_argument("criterion: region does not match the data bins");
    const DiscreteGrid grid = make_grid(model.grid_n, theta.rho);
    const EntryGameTheta th = model.to_theta(theta.payoff, theta.rho);
    const VecD w = model.bin_weights(data);

    const int nx = int(data.rows.size());
    std::vector<BinSolve> bins(nx);
    std::vector<std::string> errors(nx);
    parallel_for(nx, parallel, [&](int x) {
        try {
            bins[x] = solve_bin(model, data.rows[x], th, grid, region, size_t(x), want_gradient);
        } catch (const std::exception& e) {
            errors[x] = e.what();
        }
    });
    for (auto& e : errors)
        if (!e.empty()) throw std::runtime_error("criterion: " + e);

    CriterionResult out;
    if (want_gradient) out.gradient.assign(model.payoff_dim(), 0.0);
    for (int x = 0; x < nx; ++x) {
        if (bins[x].status != LpStatus::optimal)
            throw std::runtime_error(std::string("criterion: bin solver returned ") +
                                     lp_status_name(bins[x].status));
        out.value += w[x] * bins[x].value;
        out.smooth = out.smooth && bins[x].smooth;
        if (want_gradient)
            for (int k = 0; k < model.payoff_dim(); ++k) out.gradient[k] += w[x] * bins[x].grad[k];
    }
    return out;
}

bool in_identified_set(const EntryModel& model, const BinnedData& data, const ThetaPoint& theta,
                       const CcpRegion* region) {
    return criterion(model, data, theta, region, /*want_gradient=*/false).value <= kZeroThreshold;
}

namespace {

VecD project_box(VecD v, const VecD& lb, const VecD& ub) {
    for (size_t k = 0; k < v.size(); ++k) {
        if (!lb.empty()) v[k] = std::max(v[k], lb[k]);
        if (!ub.empty()) v[k] = std::min(v[k], ub[k]);
    }
    return v;
}

double norm2(const VecD& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

}  // namespace

MinimizeResult minimize_criterion(const EntryModel& model, const BinnedData& data,
                                  const std::vector<VecD>& starts, const CcpRegion* region,
                                  const MinimizeOptions& opt) {
    const int d = model.payoff_dim();
    std::vector<VecD> all = starts;
    Rng rng(opt.seed);
    for (int r = 0; r < opt.random_starts; ++r) {
        VecD s(d);
        for (int k = 0; k < d; ++k) {
            double lo = model.lb.empty() ? -3.0 : std::max(model.lb[k], -3.0);
            double hi = model.ub.empty() ? 3.0 : std::min(model.ub[k], 3.0);
            if (lo > hi) lo = hi = std::min(std::max(0.0, lo), hi);
            s[k] = lo + (hi - lo) * rng.uniform();
        }
        all.push_back(std::move(s));
    }
    if (all.empty()) all.push_back(VecD(d, 0.0));

    MinimizeResult best;
    for (double rho : model.rho_grid) {
        for (const VecD& start : all) {
            ThetaPoint th{project_box(start, model.lb, model.ub), rho};
            CriterionResult cur = criterion(model, data, th, region, true);
            ++best.evaluations;
            double step = 1.0;
            for (int it = 0; it < opt.max_iter && cur.value > opt.stop_value; ++it) {
                if (cur.gradient.empty()) break;
                double g2 = norm2(cur.gradient);
                if (g2 < 1e-24) break;
                bool moved = false;
                double s = step;
                for (int bt = 0; bt < 40; ++bt) {
                    VecD cand(d);
                    for (int k = 0; k < d; ++k) cand[k] = th.payoff[k] - s * cur.gradient[k];
                    cand = project_box(std::move(cand), model.lb, model.ub);
                    ThetaPoint cth{cand, rho};
                    CriterionResult cres = criterion(model, data, cth, region, true);
                    ++best.evaluations;
                    if (cres.value <= cur.value - 1e-4 * s * g2) {
                        th = cth;
                        cur = std::move(cres);
                        step = s * 2.0;
                        moved = true;
                        break;
                    }
                    s *= 0.5;
                }
                if (!moved) break;
            }
            if (cur.value < best.value) {
                best.value = cur.value;
                best.best = th;
            }
            if (best.value <= opt.stop_value) return best;
        }
    }
    return best;
}

ScanResult scan_set(const EntryModel& model, const BinnedData& data, const ThetaPoint& seed_point,
                    const ScanConfig& cfg, const CcpRegion* region) {
    const int d = model.payoff_dim();
    const int D = d + 1;
    const bool scan_rho = model.rho_grid.size() > 1;
    const double rho_lo = model.rho_grid.front(), rho_hi = model.rho_grid.back();

    double v0 = criterion(model, data, seed_point, region, false).value;
    if (v0 > cfg.threshold)
        throw std::invalid_argument("scan_set: seed point criterion " + fmt_short(v0) +
                                    " exceeds the threshold");

    ScanResult out;
    out.scanned.assign(D, true);
    out.scanned[d] = scan_rho;
    const VecD seed_flat = seed_point.flat();
    VecD scale(D);
    for (int k = 0; k < D; ++k) scale[k] = std::max(1.0, std::fabs(seed_flat[k]));

    std::vector<std::vector<ScanRecord>> chain_records(cfg.chains);
    std::vector<std::string> errors(cfg.chains);
    parallel_for(cfg.chains, cfg.parallel, [&](int chain) {
        try {
            Rng rng(cfg.seed, uint64_t(chain));
            VecD cur = seed_flat;
            VecD sigma(D);
            for (int k = 0; k < D; ++k) sigma[k] = cfg.init_step * scale[k];
            auto shrink = [&] {
                for (int k = 0; k < D; ++k)
                    sigma[k] = std::max(sigma[k] * 0.7, cfg.min_step_frac * scale[k]);
            };
            for (int step = 0; step < cfg.max_points; ++step) {
                VecD cand = cur;
                for (int k = 0; k < D; ++k)
                    if (out.scanned[k]) cand[k] += sigma[k] * rng.normal();
                bool in_bounds = true;
                for (int k = 0; k < d && in_bounds; ++k) {
                    if (!model.lb.empty() && cand[k] < model.lb[k]) in_bounds = false;
                    if (!model.ub.empty() && cand[k] > model.ub[k]) in_bounds = false;
                }
                if (cand[d] < rho_lo || cand[d] > rho_hi) in_bounds = false;
                if (!in_bounds) {  // counts as a rejection; not an evaluated record
                    shrink();
                    continue;
                }
                double v = criterion(model, data, ThetaPoint::from_flat(cand), region, false).value;
                bool acc = v <= cfg.threshold;
                chain_records[chain].push_back({cand, v, acc, chain, step});
                if (acc) {
                    cur = cand;
                    for (int k = 0; k < D; ++k)
                        sigma[k] = std::min(sigma[k] * 1.25, cfg.max_step_frac * scale[k]);
                } else {
                    shrink();
                }
            }
        } catch (const std::exception& e) {
            errors[chain] = e.what();
        }
    });
    for (auto& e : errors)
        if (!e.empty()) throw std::runtime_error("scan_set: " + e);

    out.records.push_back({seed_flat, v0, true, -1, -1});
    for (auto& cr : chain_records) out.records.insert(out.records.end(), cr.begin(), cr.end());

    out.proj_lo.assign(D, kInf);
    out.proj_hi.assign(D, -kInf);
    for (auto& r : out.records) {
        out.min_criterion = std::min(out.min_criterion, r.crit);
        if (!r.accepted) continue;
        ++out.num_accepted;
        for (int k = 0; k < D; ++k) {
            out.proj_lo[k] = std::min(out.proj_lo[k], r.theta[k]);
            out.proj_hi[k] = std::max(out.proj_hi[k], r.theta[k]);
        }
    }
    out.volume = 1.0;
    for (int k = 0; k < D; ++k)
        if (out.scanned[k]) out.volume *= std::max(0.0, out.proj_hi[k] - out.proj_lo[k]);
    return out;
}

}  // namespace stabeq
