#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "cdetect/net.hpp"

namespace cdetect {

/// Generalized mutual exclusion constraint system: { M | W * M <= K }.
/// Coefficients and bounds may be negative.
struct Gmec {
    IntMatrix w;           // r x m
    std::vector<int> k;    // length r

    int num_rows() const { return w.rows; }
    bool satisfied_by(const Marking& m) const;
};

/// The set of crucial markings, either listed explicitly or given as a GMEC system.
struct CrucialSet {
    std::variant<std::vector<Marking>, Gmec> repr;

    static CrucialSet explicit_set(std::vector<Marking> markings);
    static CrucialSet gmec_set(Gmec gmec);
    static CrucialSet empty_set() { return explicit_set({}); }

    bool is_explicit() const { return std::holds_alternative<std::vector<Marking>>(repr); }
    bool is_gmec() const { return std::holds_alternative<Gmec>(repr); }
    const std::vector<Marking>& markings() const { return std::get<std::vector<Marking>>(repr); }
    const Gmec& gmec() const { return std::get<Gmec>(repr); }

    /// Membership test. Throws DimensionError on a length mismatch.
    bool contains(const Marking& m) const;
};

/// Integer feasibility query over firing vectors y of the unobservable subnet:
///   reached = base + Cu*y,  reached >= 0,  y >= 0,
/// optionally  W*reached <= K,
/// optionally  y != 0 on columns that actually move tokens.
struct ConstraintSystem {
    Marking base;
    UnobservableSubnet subnet;
    std::optional<Gmec> reached_constraint;
    bool require_nonzero = false;
};

struct Feasibility {
    bool feasible = false;
    ParikhVector witness;  // over subnet columns; meaningful only when feasible
};

/// Decides a ConstraintSystem by depth-first branch and bound over y, one
/// subnet column at a time in topological order. Complete for acyclic
/// unobservable subnets of bounded nets, where every non-negative solution of
/// the state equation is realizable by an actual firing sequence.
Feasibility integer_feasible(const ConstraintSystem& sys, std::size_t node_budget = 1u << 22);

/// Enumerates every reachable solution marking of the system (ignoring the
/// GMEC and nonzero options). Equals the unobservable reach of `base`.
std::vector<Marking> feasible_markings(const ConstraintSystem& sys, std::size_t node_budget = 1u << 22);

ConstraintSystem crucial_reach_system(const LabeledPetriNet& net, const Gmec& gmec, const Marking& mb);
ConstraintSystem silent_move_system(const LabeledPetriNet& net, const Marking& mb);

/// 1 when the unobservable reach of `mb` contains a crucial marking.
/// Explicit sets are decided by enumerating the reach; GMEC sets by integer
/// feasibility with the constraint applied to the reached marking.
int alpha_flag(const LabeledPetriNet& net, const CrucialSet& crucial, const Marking& mb);

/// 1 when the unobservable reach of `mb` holds more than one marking.
int beta_flag(const LabeledPetriNet& net, const Marking& mb);

// The two decision routes individually, for cross-validation.
int alpha_by_enumeration(const LabeledPetriNet& net, const CrucialSet& crucial, const Marking& mb);
int alpha_by_feasibility(const LabeledPetriNet& net, const CrucialSet& crucial, const Marking& mb);
int beta_by_enumeration(const LabeledPetriNet& net, const Marking& mb);
int beta_by_feasibility(const LabeledPetriNet& net, const Marking& mb);

}  // namespace cdetect
