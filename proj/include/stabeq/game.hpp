#pragma once

#include "stabeq/discretize.hpp"

namespace stabeq {

// Finite complete-payoff environment: states E with prior psi, action profiles
// indexed row-major (player 0 outermost), payoff tensor u[i](a, e).
struct BasicGame {
    int num_players = 0;
    VecI action_counts;  // per player
    int num_profiles = 0;
    int num_states = 0;
    VecD prior;  // psi over states

    // payoff[i][a * num_states + e]
    std::vector<VecD> payoff;

    // Per-player shock coordinate of each state, as an index into
    // coord_values[i]. Filled for grid-built games; empty otherwise.
    std::vector<VecI> coord_index;           // [player][state]
    std::vector<VecD> coord_values;          // [player][index]

    double u(int i, int a, int e) const { return payoff[i][size_t(a) * num_states + e]; }
    double& u_ref(int i, int a, int e) { return payoff[i][size_t(a) * num_states + e]; }

    int profile_index(std::span<const int> a) const { return flat_index(action_counts, a); }
    void profile_decode(int a, std::span<int> out) const { unflat_index(action_counts, a, out); }
    // profile with player i's action replaced by ai
    int profile_replace(int a, int i, int ai) const;
    int action_of(int a, int i) const;

    bool has_coords() const { return !coord_index.empty(); }
};

// u_i(ai_dev, a_{-i}, e) - u_i(a, e)
double deviation_gain(const BasicGame& g, int i, int a, int ai_dev, int e);

// True iff each player's payoffs depend on the state only through that
// player's own coordinate (requires coord_index).
bool audit_private_values(const BasicGame& g, double tol = 1e-12);

// ---- entry game -------------------------------------------------------------

// Two-player entry payoffs u_i = a_i * (beta_i'x + kappa_i * a_j + eps_i),
// staying out pays zero.
struct EntryGameTheta {
    std::vector<VecD> beta;  // per player, same length as the covariate vector
    VecD kappa;              // per player
    double rho = 0.0;        // shock grid correlation

    VecD flat() const;                       // beta_0 | beta_1 | kappa | rho
    static EntryGameTheta from_flat(const VecD& v, int cov_dim);
    int payoff_dim() const { return int(beta[0].size() + beta[1].size() + kappa.size()); }
};

struct CovariateBin {
    VecD x;           // covariate values (first entry typically the intercept)
    double count = 0; // observations in this bin
};

BasicGame build_entry_game(const EntryGameTheta& theta, const VecD& x, const DiscreteGrid& grid);

// ---- information structures ---------------------------------------------------

enum class InfoKind { null_info, one_sided, private_info, complete_info };

const char* info_kind_name(InfoKind k);
InfoKind info_kind_from_name(const std::string& s);

struct InfoStructure {
    VecI signal_counts;                                   // per player
    std::vector<std::vector<std::string>> signal_labels;  // optional
    // sparse signal distribution: per state, (t-profile, prob), probs > 0 sum to 1
    std::vector<std::vector<std::pair<int, double>>> support;

    int num_players() const { return int(signal_counts.size()); }
    int num_t_profiles() const { return dims_product(signal_counts); }
    int signal_of(int t_profile, int i) const;
};

// S^null: uninformative singletons. S^1P: player 0 sees own coordinate.
// S^private: every player sees own coordinate. S^complete: every player sees
// the full state. The coordinate-based kinds need grid-built games.
InfoStructure standard_info(const BasicGame& g, InfoKind kind);

// ---- decision rules -----------------------------------------------------------

struct Cell {
    int state;
    int t;  // t-profile index
    double pi;
};

// cells with psi * pi > 0, ordered by (state, t); decision-rule variables and
// obedience constraints live on exactly these cells
std::vector<Cell> enumerate_cells(const BasicGame& g, const InfoStructure& s);

struct DecisionRule {
    std::vector<Cell> cells;
    VecD p;  // cells x profiles, p[c * num_profiles + a]

    double prob(int c, int a, int num_profiles) const { return p[size_t(c) * num_profiles + a]; }
};

// sum over cells of psi * pi * sigma
VecD induced_ccp(const BasicGame& g, const DecisionRule& rule);

// Expanded structure where each player additionally observes a public signal
// drawn as the profile recommended by `rule`, plus the outcome function that
// plays the public signal. Feeding a stable rule through this construction
// yields a self-confirming outcome of the richer structure.
struct Expansion {
    InfoStructure info;
    DecisionRule delta;
};

Expansion expand_with_public_signal(const BasicGame& g, const InfoStructure& s, const DecisionRule& rule);

// ---- JSON fixtures --------------------------------------------------------------

std::string game_to_json(const BasicGame& g);
BasicGame game_from_json(const std::string& text);
std::string info_to_json(const InfoStructure& s);
InfoStructure info_from_json(const std::string& text);
std::string grid_to_json(const DiscreteGrid& g);
DiscreteGrid grid_from_json(const std::string& text);

}  // namespace stabeq
