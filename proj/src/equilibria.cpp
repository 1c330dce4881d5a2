#include "stabeq/equilibria.hpp"

#include <algorithm>
#include <cmath>

namespace stabeq {

const char* concept_name(Concept c) {
    switch (c) {
        case Concept::bse: return "bse";
        case Concept::bce: return "bce";
        default: return "psne";
    }
}

Concept concept_from_name(const std::string& s) {
    if (s == "bse") return Concept::bse;
    if (s == "bce") return Concept::bce;
    if (s == "psne") return Concept::psne;
    throw std::invalid_argument("unknown concept: " + s);
}

ConceptSpec make_spec(const BasicGame& g, Concept c, InfoKind kind) {
    ConceptSpec spec;
    spec.concept_kind = c;
    if (c == Concept::psne) {
        if (!audit_private_values(g))
            throw std::invalid_argument("psne requires a private-values game");
        spec.info = standard_info(g, InfoKind::null_info);
    } else {
        spec.info = standard_info(g, kind);
    }
    return spec;
}

std::vector<Cell> spec_cells(const BasicGame& g, const ConceptSpec& spec) {
    return enumerate_cells(g, spec.info);
}

namespace {

// cell indices grouped by player i's conditioning value: own signal for
// bse/bce, own coordinate for psne
std::vector<std::vector<VecI>> condition_buckets(const BasicGame& g, const ConceptSpec& spec,
                                                 const std::vector<Cell>& cells, VecI& group_counts) {
    const int I = g.num_players;
    std::vector<std::vector<VecI>> buckets(I);
    group_counts.assign(I, 0);
    for (int i = 0; i < I; ++i) {
        int n = spec.concept_kind == Concept::psne ? int(g.coord_values[i].size()) : spec.info.signal_counts[i];
        group_counts[i] = n;
        buckets[i].assign(n, {});
    }
    for (int c = 0; c < int(cells.size()); ++c) {
        for (int i = 0; i < I; ++i) {
            int key = spec.concept_kind == Concept::psne ? g.coord_index[i][cells[c].state]
                                                    : spec.info.signal_of(cells[c].t, i);
            buckets[i][key].push_back(c);
        }
    }
    return buckets;
}

}  // namespace

std::vector<ObedienceRow> obedience_constraints(const BasicGame& g, const ConceptSpec& spec,
                                                const std::vector<Cell>& cells, bool include_identity) {
    const int I = g.num_players, A = g.num_profiles;
    VecI group_counts;
    auto buckets = condition_buckets(g, spec, cells, group_counts);

    // profiles grouped by player i's own action, for the bce quantifiers
    std::vector<std::vector<VecI>> own(I);
    for (int i = 0; i < I; ++i) {
        own[i].assign(g.action_counts[i], {});
        for (int a = 0; a < A; ++a) own[i][g.action_of(a, i)].push_back(a);
    }

    std::vector<ObedienceRow> rows;
    for (int i = 0; i < I; ++i) {
        for (int key = 0; key < group_counts[i]; ++key) {
            const VecI& cs = buckets[i][key];
            if (cs.empty()) continue;
            if (spec.concept_kind == Concept::bce) {
                for (int ai = 0; ai < g.action_counts[i]; ++ai) {
                    for (int dev = 0; dev < g.action_counts[i]; ++dev) {
                        if (dev == ai && !include_identity) continue;
                        ObedienceRow row;
                        row.meta = {i, key, ai, dev};
                        for (int c : cs) {
                            const Cell& cell = cells[c];
                            double w = g.prior[cell.state] * cell.pi;
                            for (int a : own[i][ai]) {
                                double coef = w * deviation_gain(g, i, a, dev, cell.state);
                                if (coef != 0.0) row.a.push_back({c * A + a, coef});
                            }
                        }
                        rows.push_back(std::move(row));
                    }
                }
            } else {  // bse and psne condition on the full recommended profile
                for (int a = 0; a < A; ++a) {
                    int ai = g.action_of(a, i);
                    for (int dev = 0; dev < g.action_counts[i]; ++dev) {
                        if (dev == ai && !include_identity) continue;
                        ObedienceRow row;
                        row.meta = {i, key, a, dev};
                        for (int c : cs) {
                            const Cell& cell = cells[c];
                            double coef = g.prior[cell.state] * cell.pi * deviation_gain(g, i, a, dev, cell.state);
                            if (coef != 0.0) row.a.push_back({c * A + a, coef});
                        }
                        rows.push_back(std::move(row));
                    }
                }
            }
        }
    }
    return rows;
}

std::vector<std::vector<std::pair<int, double>>> consistency_constraints(const BasicGame& g,
                                                                         const std::vector<Cell>& cells) {
    const int A = g.num_profiles;
    std::vector<std::vector<std::pair<int, double>>> rows(A);
    for (int a = 0; a < A; ++a) {
        rows[a].reserve(cells.size());
        for (int c = 0; c < int(cells.size()); ++c)
            rows[a].push_back({c * A + a, g.prior[cells[c].state] * cells[c].pi});
    }
    return rows;
}

namespace {

LinearProgram rule_program(const BasicGame& g, const ConceptSpec& spec, const std::vector<Cell>& cells,
                           const VecD* phi) {
    const int A = g.num_profiles;
    LinearProgram lp;
    for (size_t c = 0; c < cells.size(); ++c)
        for (int a = 0; a < A; ++a) lp.add_var(0.0, 0.0, 1.0);
    for (size_t c = 0; c < cells.size(); ++c) {
        SparseRow row;
        row.sense = '=';
        row.rhs = 1.0;
        for (int a = 0; a < A; ++a) row.a.push_back({int(c) * A + a, 1.0});
        lp.add_row(std::move(row));
    }
    for (auto& ob : obedience_constraints(g, spec, cells)) {
        SparseRow row;
        row.sense = '<';
        row.rhs = 0.0;
        row.a = ob.a;
        lp.add_row(std::move(row));
    }
    if (phi) {
        auto cons = consistency_constraints(g, cells);
        for (int a = 0; a < A; ++a) {
            SparseRow row;
            row.sense = '=';
            row.rhs = (*phi)[a];
            row.a = cons[a];
            lp.add_row(std::move(row));
        }
    }
    return lp;
}

DecisionRule rule_from_point(const BasicGame& g, const std::vector<Cell>& cells, const VecD& x) {
    DecisionRule rule;
    rule.cells = cells;
    rule.p.assign(cells.size() * size_t(g.num_profiles), 0.0);
    for (size_t k = 0; k < rule.p.size(); ++k) rule.p[k] = std::min(1.0, std::max(0.0, x[k]));
    // renormalize away solver dust so each cell is an exact distribution
    for (size_t c = 0; c < cells.size(); ++c) {
        double s = 0.0;
        for (int a = 0; a < g.num_profiles; ++a) s += rule.p[c * g.num_profiles + a];
        if (s > 0.0)
            for (int a = 0; a < g.num_profiles; ++a) rule.p[c * g.num_profiles + a] /= s;
    }
    return rule;
}

}  // namespace

bool is_rationalizable(const BasicGame& g, const ConceptSpec& spec, const VecD& phi) {
    auto cells = spec_cells(g, spec);
    LinearProgram lp = rule_program(g, spec, cells, &phi);
    return lp_feasible(lp);
}

std::optional<DecisionRule> find_equilibrium(const BasicGame& g, const ConceptSpec& spec, uint64_t seed) {
    auto cells = spec_cells(g, spec);
    LinearProgram lp = rule_program(g, spec, cells, nullptr);
    Rng rng(seed);
    for (int j = 0; j < lp.num_vars; ++j) lp.c[j] = 2.0 * rng.uniform() - 1.0;
    LpSolution sol = lp_solve(lp);
    if (sol.status != LpStatus::optimal) return std::nullopt;
    // confirm at the optimum: the returned point must satisfy the program
    VecD confirm;
    if (!lp_feasible(lp, &confirm)) return std::nullopt;
    return rule_from_point(g, cells, sol.x);
}

std::vector<int> nash_profiles(const BasicGame& g, int state) {
    std::vector<int> out;
    for (int a = 0; a < g.num_profiles; ++a) {
        bool nash = true;
        for (int i = 0; i < g.num_players && nash; ++i) {
            int ai = g.action_of(a, i);
            for (int dev = 0; dev < g.action_counts[i]; ++dev) {
                if (dev == ai) continue;
                if (deviation_gain(g, i, a, dev, state) > 0.0) {
                    nash = false;
                    break;
                }
            }
        }
        if (nash) out.push_back(a);
    }
    return out;
}

std::optional<DecisionRule> symmetric_nash_rule(const BasicGame& g) {
    InfoStructure null_s = standard_info(g, InfoKind::null_info);
    auto cells = enumerate_cells(g, null_s);
    DecisionRule rule;
    rule.cells = cells;
    rule.p.assign(cells.size() * size_t(g.num_profiles), 0.0);
    for (size_t c = 0; c < cells.size(); ++c) {
        auto nash = nash_profiles(g, cells[c].state);
        if (nash.empty()) return std::nullopt;
        for (int a : nash) rule.p[c * g.num_profiles + a] = 1.0 / double(nash.size());
    }
    return rule;
}

// ---- checkers ---------------------------------------------------------------------

namespace {

bool check_stability(const BasicGame& g, const ConceptSpec& spec, const DecisionRule& rule,
                     double tol, double* worst) {
    auto rows = obedience_constraints(g, spec, rule.cells);
    double w = -kInf;
    for (auto& row : rows) {
        double lhs = 0.0;
        for (auto& [j, v] : row.a) lhs += v * rule.p[j];
        w = std::max(w, lhs);
    }
    if (worst) *worst = w;
    return w <= tol;
}

}  // namespace

bool check_bse(const BasicGame& g, const InfoStructure& s, const DecisionRule& rule, double tol, double* worst) {
    return check_stability(g, {Concept::bse, s}, rule, tol, worst);
}

bool check_bce(const BasicGame& g, const InfoStructure& s, const DecisionRule& rule, double tol, double* worst) {
    return check_stability(g, {Concept::bce, s}, rule, tol, worst);
}

bool check_psne(const BasicGame& g, const DecisionRule& rule, double tol, double* worst) {
    ConceptSpec spec;
    spec.concept_kind = Concept::psne;
    spec.info = standard_info(g, InfoKind::null_info);
    return check_stability(g, spec, rule, tol, worst);
}

bool check_ree(const BasicGame& g, const InfoStructure& s, const DecisionRule& rule, double tol, double* worst) {
    // outcome functions may not vary with the state once the signal is fixed
    const int A = g.num_profiles;
    std::vector<int> first_cell(s.num_t_profiles(), -1);
    for (size_t c = 0; c < rule.cells.size(); ++c) {
        int t = rule.cells[c].t;
        if (first_cell[t] < 0) {
            first_cell[t] = int(c);
            continue;
        }
        for (int a = 0; a < A; ++a)
            if (std::fabs(rule.p[c * A + a] - rule.p[size_t(first_cell[t]) * A + a]) > 1e-12) {
                if (worst) *worst = kInf;
                return false;
            }
    }
    return check_stability(g, {Concept::bse, s}, rule, tol, worst);
}

}  // namespace stabeq
