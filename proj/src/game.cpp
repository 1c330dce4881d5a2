#include "stabeq/game.hpp"

#include <cmath>

#include <json.hpp>

namespace stabeq {

int BasicGame::profile_replace(int a, int i, int ai) const {
    VecI idx(num_players);
    unflat_index(action_counts, a, idx);
    idx[i] = ai;
    return flat_index(action_counts, idx);
}

int BasicGame::action_of(int a, int i) const {
    VecI idx(num_players);
    unflat_index(action_counts, a, idx);
    return idx[i];
}

double deviation_gain(const BasicGame& g, int i, int a, int ai_dev, int e) {
    return g.u(i, g.profile_replace(a, i, ai_dev), e) - g.u(i, a, e);
}

bool audit_private_values(const BasicGame& g, double tol) {
    if (!g.has_coords()) return false;
    // bucket states by player i's coordinate; payoffs of i must match within a bucket
    for (int i = 0; i < g.num_players; ++i) {
        std::vector<int> rep(g.coord_values[i].size(), -1);
        for (int e = 0; e < g.num_states; ++e) {
            int ci = g.coord_index[i][e];
            if (rep[ci] < 0) {
                rep[ci] = e;
                continue;
            }
            for (int a = 0; a < g.num_profiles; ++a)
                if (std::fabs(g.u(i, a, e) - g.u(i, a, rep[ci])) > tol) return false;
        }
    }
    return true;
}

VecD EntryGameTheta::flat() const {
    VecD v;
    for (auto& b : beta) v.insert(v.end(), b.begin(), b.end());
    v.insert(v.end(), kappa.begin(), kappa.end());
    v.push_back(rho);
    return v;
}

EntryGameTheta EntryGameTheta::from_flat(const VecD& v, int cov_dim) {
    if (int(v.size()) != 2 * cov_dim + 3) throw std::invalid_argument("theta vector has wrong length");
    EntryGameTheta t;
    t.beta = {VecD(v.begin(), v.begin() + cov_dim), VecD(v.begin() + cov_dim, v.begin() + 2 * cov_dim)};
    t.kappa = {v[2 * cov_dim], v[2 * cov_dim + 1]};
    t.rho = v[2 * cov_dim + 2];
    return t;
}

BasicGame build_entry_game(const EntryGameTheta& theta, const VecD& x, const DiscreteGrid& grid) {
    if (grid.num_players() != 2 || theta.beta.size() != 2 || theta.kappa.size() != 2)
        throw std::invalid_argument("build_entry_game: two players required");
    for (auto& b : theta.beta)
        if (b.size() != x.size()) throw std::invalid_argument("build_entry_game: beta/x length mismatch");

    BasicGame g;
    g.num_players = 2;
    g.action_counts = {2, 2};
    g.num_profiles = 4;
    g.num_states = grid.num_states();
    g.prior = grid.prior;

    const int n0 = int(grid.points[0].size()), n1 = int(grid.points[1].size());
    g.coord_values = grid.points;
    g.coord_index.assign(2, VecI(g.num_states));
    for (int e = 0; e < g.num_states; ++e) {
        g.coord_index[0][e] = e / n1;
        g.coord_index[1][e] = e % n1;
    }

    double base[2] = {0.0, 0.0};
    for (int i = 0; i < 2; ++i)
        for (size_t k = 0; k < x.size(); ++k) base[i] += theta.beta[i][k] * x[k];

    g.payoff.assign(2, VecD(size_t(4) * g.num_states, 0.0));
    for (int a = 0; a < 4; ++a) {
        const int a0 = a >> 1, a1 = a & 1;
        for (int e = 0; e < g.num_states; ++e) {
            double e0 = grid.points[0][g.coord_index[0][e]];
            double e1 = grid.points[1][g.coord_index[1][e]];
            if (a0) g.u_ref(0, a, e) = base[0] + theta.kappa[0] * a1 + e0;
            if (a1) g.u_ref(1, a, e) = base[1] + theta.kappa[1] * a0 + e1;
        }
    }
    return g;
}

const char* info_kind_name(InfoKind k) {
    switch (k) {
        case InfoKind::null_info: return "null";
        case InfoKind::one_sided: return "1p";
        case InfoKind::private_info: return "private";
        default: return "complete";
    }
}

InfoKind info_kind_from_name(const std::string& s) {
    if (s == "null") return InfoKind::null_info;
    if (s == "1p") return InfoKind::one_sided;
    if (s == "private") return InfoKind::private_info;
    if (s == "complete") return InfoKind::complete_info;
    throw std::invalid_argument("unknown info structure name: " + s);
}

int InfoStructure::signal_of(int t_profile, int i) const {
    VecI idx(signal_counts.size());
    unflat_index(signal_counts, t_profile, idx);
    return idx[i];
}

InfoStructure standard_info(const BasicGame& g, InfoKind kind) {
    InfoStructure s;
    const int I = g.num_players;
    if ((kind == InfoKind::one_sided || kind == InfoKind::private_info) && !g.has_coords())
        throw std::invalid_argument("standard_info: coordinate-based kinds need a grid-built game");

    switch (kind) {
        case InfoKind::null_info:
            s.signal_counts.assign(I, 1);
            break;
        case InfoKind::one_sided:
            s.signal_counts.assign(I, 1);
            s.signal_counts[0] = int(g.coord_values[0].size());
            break;
        case InfoKind::private_info:
            for (int i = 0; i < I; ++i) s.signal_counts.push_back(int(g.coord_values[i].size()));
            break;
        case InfoKind::complete_info:
            s.signal_counts.assign(I, g.num_states);
            break;
    }
    s.support.resize(g.num_states);
    VecI t(I);
    for (int e = 0; e < g.num_states; ++e) {
        for (int i = 0; i < I; ++i) {
            switch (kind) {
                case InfoKind::null_info: t[i] = 0; break;
                case InfoKind::one_sided: t[i] = i == 0 ? g.coord_index[0][e] : 0; break;
                case InfoKind::private_info: t[i] = g.coord_index[i][e]; break;
                case InfoKind::complete_info: t[i] = e; break;
            }
        }
        s.support[e] = {{flat_index(s.signal_counts, t), 1.0}};
    }
    return s;
}

std::vector<Cell> enumerate_cells(const BasicGame& g, const InfoStructure& s) {
    std::vector<Cell> cells;
    for (int e = 0; e < g.num_states; ++e) {
        if (g.prior[e] <= 0.0) continue;
        for (auto& [t, pi] : s.support[e])
            if (pi > 0.0) cells.push_back({e, t, pi});
    }
    return cells;
}

VecD induced_ccp(const BasicGame& g, const DecisionRule& rule) {
    VecD phi(g.num_profiles, 0.0);
    for (size_t c = 0; c < rule.cells.size(); ++c) {
        double w = g.prior[rule.cells[c].state] * rule.cells[c].pi;
        for (int a = 0; a < g.num_profiles; ++a) phi[a] += w * rule.p[c * g.num_profiles + a];
    }
    return phi;
}

Expansion expand_with_public_signal(const BasicGame& g, const InfoStructure& s, const DecisionRule& rule) {
    const int I = g.num_players, A = g.num_profiles;
    Expansion out;
    out.info.signal_counts.resize(I);
    for (int i = 0; i < I; ++i) out.info.signal_counts[i] = s.signal_counts[i] * A;
    out.info.support.resize(g.num_states);

    // expanded signal of player i: (t_i, public a) -> t_i * A + a
    VecI base(I), ext(I);
    std::vector<std::pair<int, VecD>> ext_cells;  // (t-profile, point mass profile dist)
    for (size_t c = 0; c < rule.cells.size(); ++c) {
        const Cell& cell = rule.cells[c];
        unflat_index(s.signal_counts, cell.t, base);
        for (int a = 0; a < A; ++a) {
            double p = rule.p[c * A + a];
            if (p <= 0.0) continue;
            for (int i = 0; i < I; ++i) ext[i] = base[i] * A + a;
            out.info.support[cell.state].push_back({flat_index(out.info.signal_counts, ext), cell.pi * p});
        }
    }
    out.delta.cells = enumerate_cells(g, out.info);
    out.delta.p.assign(out.delta.cells.size() * size_t(A), 0.0);
    for (size_t c = 0; c < out.delta.cells.size(); ++c) {
        // public component is recoverable from any player's expanded signal
        int a_pub = out.info.signal_of(out.delta.cells[c].t, 0) % A;
        out.delta.p[c * A + a_pub] = 1.0;
    }
    return out;
}

// ---- JSON ------------------------------------------------------------------------

using nlohmann::json;

std::string game_to_json(const BasicGame& g) {
    json j;
    j["players"] = g.num_players;
    j["action_counts"] = g.action_counts;
    j["prior"] = g.prior;
    j["payoff"] = json::array();
    for (int i = 0; i < g.num_players; ++i) {
        json pi = json::array();
        for (int a = 0; a < g.num_profiles; ++a) {
            VecD row(g.num_states);
            for (int e = 0; e < g.num_states; ++e) row[e] = g.u(i, a, e);
            pi.push_back(row);
        }
        j["payoff"].push_back(pi);
    }
    if (g.has_coords()) {
        j["coord_values"] = g.coord_values;
        j["coord_index"] = g.coord_index;
    }
    return j.dump(2);
}

BasicGame game_from_json(const std::string& text) {
    json j = json::parse(text);
    BasicGame g;
    g.num_players = j.at("players").get<int>();
    g.action_counts = j.at("action_counts").get<VecI>();
    g.num_profiles = dims_product(g.action_counts);
    g.prior = j.at("prior").get<VecD>();
    g.num_states = int(g.prior.size());
    g.payoff.assign(g.num_players, VecD(size_t(g.num_profiles) * g.num_states));
    for (int i = 0; i < g.num_players; ++i)
        for (int a = 0; a < g.num_profiles; ++a) {
            VecD row = j.at("payoff")[i][a].get<VecD>();
            for (int e = 0; e < g.num_states; ++e) g.u_ref(i, a, e) = row[e];
        }
    if (j.contains("coord_values")) {
        g.coord_values = j["coord_values"].get<std::vector<VecD>>();
        g.coord_index = j["coord_index"].get<std::vector<VecI>>();
    }
    return g;
}

std::string info_to_json(const InfoStructure& s) {
    json j;
    j["signal_counts"] = s.signal_counts;
    json sup = json::array();
    for (auto& st : s.support) {
        json row = json::array();
        for (auto& [t, p] : st) row.push_back({{"t", t}, {"p", p}});
        sup.push_back(row);
    }
    j["support"] = sup;
    return j.dump(2);
}

InfoStructure info_from_json(const std::string& text) {
    json j = json::parse(text);
    InfoStructure s;
    s.signal_counts = j.at("signal_counts").get<VecI>();
    for (auto& row : j.at("support")) {
        std::vector<std::pair<int, double>> st;
        for (auto& it : row) st.push_back({it.at("t").get<int>(), it.at("p").get<double>()});
        s.support.push_back(std::move(st));
    }
    return s;
}

std::string grid_to_json(const DiscreteGrid& g) {
    json j;
    j["points"] = g.points;
    j["prior"] = g.prior;
    j["rho"] = g.rho;
    return j.dump(2);
}

DiscreteGrid grid_from_json(const std::string& text) {
    json j = json::parse(text);
    DiscreteGrid g;
    g.points = j.at("points").get<std::vector<VecD>>();
    g.prior = j.at("prior").get<VecD>();
    g.rho = j.at("rho").get<double>();
    return g;
}

}  // namespace stabeq
