#pragma once

#include <optional>

#include "stabeq/game.hpp"
#include "stabeq/lp.hpp"

namespace stabeq {

// bse: stability against deviations given (own signal, recommended profile).
// bce: stability given (own signal, own recommended action) only.
// psne: pure-strategy Nash restrictions on sigma: E -> Delta(A), aggregated
//       over opponents' coordinates (private-values games only).
enum class Concept { bse, bce, psne };

const char* concept_name(Concept c);
Concept concept_from_name(const std::string& s);

struct ConceptSpec {
    Concept concept_kind = Concept::bse;
    InfoStructure info;  // baseline structure; psne always uses the null structure
};

ConceptSpec make_spec(const BasicGame& g, Concept c, InfoKind kind);

// cells a decision rule for this spec lives on
std::vector<Cell> spec_cells(const BasicGame& g, const ConceptSpec& spec);

struct ObedienceMeta {
    int player;
    int t_own;    // own signal (bse/bce) or own coordinate (psne)
    int profile;  // recommended profile (bse/psne) or own action (bce)
    int dev;      // deviation action
};

// One inequality lhs <= 0 over sigma variables indexed cell * num_profiles + a.
struct ObedienceRow {
    std::vector<std::pair<int, double>> a;
    ObedienceMeta meta;
};

// include_identity keeps the vacuous rows where dev equals the recommended
// action (they are 0 <= 0 by construction and are dropped from programs)
std::vector<ObedienceRow> obedience_constraints(const BasicGame& g, const ConceptSpec& spec,
                                                const std::vector<Cell>& cells,
                                                bool include_identity = false);

// row a: sum_cells psi * pi * sigma[c, a]  (to be pinned to phi_a)
std::vector<std::vector<std::pair<int, double>>> consistency_constraints(const BasicGame& g,
                                                                         const std::vector<Cell>& cells);

// Is phi the outcome distribution of some rule satisfying the obedience
// constraints of this concept/information pair? (LP feasibility at kLpFeasTol.)
bool is_rationalizable(const BasicGame& g, const ConceptSpec& spec, const VecD& phi);

// One stable rule, selected by a random linear objective drawn from `seed`;
// nullopt when the obedience polytope is empty.
std::optional<DecisionRule> find_equilibrium(const BasicGame& g, const ConceptSpec& spec, uint64_t seed);

// Uniform mixture over per-state pure Nash profiles (the symmetric selection);
// nullopt if some positive-probability state has no pure Nash profile.
std::optional<DecisionRule> symmetric_nash_rule(const BasicGame& g);

// pure Nash profiles of the complete-information game at `state`
std::vector<int> nash_profiles(const BasicGame& g, int state);

// ---- direct-summation checkers (independent of the LP path) -------------------

bool check_bse(const BasicGame& g, const InfoStructure& s, const DecisionRule& rule,
               double tol = 1e-8, double* worst = nullptr);
bool check_bce(const BasicGame& g, const InfoStructure& s, const DecisionRule& rule,
               double tol = 1e-8, double* worst = nullptr);
bool check_psne(const BasicGame& g, const DecisionRule& rule, double tol = 1e-8, double* worst = nullptr);
// measurability in t plus the stability inequalities
bool check_ree(const BasicGame& g, const InfoStructure& s, const DecisionRule& rule,
               double tol = 1e-8, double* worst = nullptr);

}  // namespace stabeq
