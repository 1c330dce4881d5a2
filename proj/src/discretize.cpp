#include "stabeq/discretize.hpp"

#include <cmath>

#include "stabeq/equilibria.hpp"

namespace stabeq {

VecD kennan_points(int n) {
    if (n < 1) throw std::invalid_argument("kennan_points: n must be positive");
    VecD x(n);
    // compute the lower half and mirror so the grid is symmetric to the bit
    for (int j = 0; j < n / 2; ++j) {
        x[j] = normal_ppf((2.0 * (j + 1) - 1.0) / (2.0 * n));
        x[n - 1 - j] = -x[j];
    }
    if (n % 2) x[n / 2] = 0.0;
    return x;
}

VecD copula_prior(const VecD& pts1, const VecD& pts2, double rho) {
    if (!(rho > -1.0 && rho < 1.0)) throw std::invalid_argument("copula_prior: |rho| must be < 1");
    const int n1 = int(pts1.size()), n2 = int(pts2.size());
    VecD logw(size_t(n1) * n2);
    // Gaussian copula density at the grid quantiles: since the marginals are
    // standard normal, the copula argument Phi^{-1}(F(x)) is the point itself.
    const double r2 = rho * rho, den = 2.0 * (1.0 - r2);
    double mx = -kInf;
    for (int j = 0; j < n1; ++j)
        for (int k = 0; k < n2; ++k) {
            double z1 = pts1[j], z2 = pts2[k];
            double lw = -(r2 * (z1 * z1 + z2 * z2) - 2.0 * rho * z1 * z2) / den;
            logw[size_t(j) * n2 + k] = lw;
            mx = std::max(mx, lw);
        }
    VecD w(logw.size());
    double sum = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
        w[i] = std::exp(logw[i] - mx);
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

DiscreteGrid make_grid(int n, double rho) {
    DiscreteGrid g;
    g.points = {kennan_points(n), kennan_points(n)};
    g.prior = copula_prior(g.points[0], g.points[1], rho);
    g.rho = rho;
    return g;
}

double grid_correlation(const DiscreteGrid& g) {
    if (g.num_players() != 2) throw std::invalid_argument("grid_correlation: two players required");
    const int n1 = int(g.points[0].size()), n2 = int(g.points[1].size());
    double m1 = 0, m2 = 0, v1 = 0, v2 = 0, cov = 0;
    for (int j = 0; j < n1; ++j)
        for (int k = 0; k < n2; ++k) {
            double w = g.prior[size_t(j) * n2 + k];
            m1 += w * g.points[0][j];
            m2 += w * g.points[1][k];
        }
    for (int j = 0; j < n1; ++j)
        for (int k = 0; k < n2; ++k) {
            double w = g.prior[size_t(j) * n2 + k];
            double d1 = g.points[0][j] - m1, d2 = g.points[1][k] - m2;
            v1 += w * d1 * d1;
            v2 += w * d2 * d2;
            cov += w * d1 * d2;
        }
    return cov / std::sqrt(v1 * v2);
}

double approximation_error(const BasicGame& game, const VecD& phi) {
    if (int(phi.size()) != game.num_profiles)
        throw std::invalid_argument("approximation_error: phi has wrong length");
    ConceptSpec spec;
    spec.concept_kind = Concept::psne;
    spec.info = standard_info(game, InfoKind::null_info);
    if (!audit_private_values(game))
        throw std::invalid_argument("approximation_error: private-values game required");
    auto cells = spec_cells(game, spec);
    const int A = game.num_profiles;

    LinearProgram lp;
    for (size_t c = 0; c < cells.size(); ++c)
        for (int a = 0; a < A; ++a) lp.add_var(0.0, 0.0, 1.0);
    int tvar = lp.add_var(1.0, -kInf, kInf);

    for (size_t c = 0; c < cells.size(); ++c) {
        SparseRow row;
        row.sense = '=';
        row.rhs = 1.0;
        for (int a = 0; a < A; ++a) row.a.push_back({int(c) * A + a, 1.0});
        lp.add_row(std::move(row));
    }
    for (auto& ob : obedience_constraints(game, spec, cells)) {
        SparseRow row;
        row.sense = '<';
        row.rhs = 0.0;
        row.a = ob.a;
        row.a.push_back({tvar, -1.0});
        lp.add_row(std::move(row));
    }
    auto cons = consistency_constraints(game, cells);
    for (int a = 0; a < A; ++a) {
        SparseRow up, dn;
        up.sense = dn.sense = '<';
        up.a = cons[a];
        up.a.push_back({tvar, -1.0});
        up.rhs = phi[a];
        for (auto& [j, v] : cons[a]) dn.a.push_back({j, -v});
        dn.a.push_back({tvar, -1.0});
        dn.rhs = -phi[a];
        lp.add_row(std::move(up));
        lp.add_row(std::move(dn));
    }
    LpSolution sol = lp_solve(lp);
    if (sol.status != LpStatus::optimal)
        throw std::runtime_error(std::string("approximation_error: solver returned ") + lp_status_name(sol.status));
    return std::max(0.0, sol.objective);
}

}  // namespace stabeq
