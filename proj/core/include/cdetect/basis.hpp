#pragma once

#include <span>
#include <string>
#include <vector>

#include "cdetect/crucial.hpp"
#include "cdetect/net.hpp"
#include "cdetect/observer.hpp"

namespace cdetect {

/// One minimal explanation: a Pareto-minimal firing vector of unobservable
/// transitions whose firing enables a given observable transition, plus one
/// witness firing sequence realizing it (original transition indices).
struct MinimalExplanation {
    ParikhVector evector;       // over unobservable-subnet columns
    std::vector<int> witness;   // unobservable firing sequence realizing evector
};

/// All minimal explanations of one (marking, observable transition) pair,
/// sorted by e-vector. Members are pairwise Pareto-incomparable.
struct MinimalExplanationSet {
    std::vector<MinimalExplanation> items;

    bool empty() const { return items.empty(); }
    std::size_t size() const { return items.size(); }
    std::vector<ParikhVector> evectors() const;
};

/// Computes the minimal explanations of observable transition `t` at `m` by
/// best-first search over unobservable firings with Pareto pruning. Requires
/// an acyclic unobservable subnet; `t` must be observable.
MinimalExplanationSet minimal_explanations(const LabeledPetriNet& net, const Marking& m, int t,
                                           std::size_t node_budget = 1u << 22);
MinimalExplanationSet minimal_explanations(const LabeledPetriNet& net, const UnobservableSubnet& sub,
                                           const Marking& m, int t, std::size_t node_budget = 1u << 22);

struct BasisNode {
    Marking marking;
    int alpha = 0;  // 1 when a crucial marking lies in the unobservable reach
    int beta = 0;   // 1 when the unobservable reach holds more than one marking
};

struct BasisEdge {
    int from = 0;
    int to = 0;
    std::string symbol;
    std::vector<int> witness;  // minimal explanation followed by the observable transition
};

/// The basis reachability graph: basis markings with their alpha/beta flags,
/// edges labeled by observable event symbols. Node 0 is the initial marking.
struct BasisGraph {
    std::vector<BasisNode> nodes;
    std::vector<BasisEdge> edges;                // sorted by (from, symbol, to)
    std::vector<std::vector<int>> out_edges;     // per node: indices into edges
    std::vector<std::string> alphabet;           // the net's alphabet
    int initial = 0;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int node_of(const Marking& m) const;  // -1 when not a basis marking
};

/// Builds the basis reachability graph by worklist expansion: from every
/// known basis marking, every minimal explanation of every observable
/// transition yields a successor. The caller is responsible for having
/// verified boundedness; the node budget catches runaway inputs.
BasisGraph build_brg(const LabeledPetriNet& net, const CrucialSet& crucial,
                     std::size_t max_nodes = 1u << 20);

/// Recomputes the alpha flags of an existing graph for a new crucial set
/// without re-deriving nodes or edges (beta does not depend on the set).
void update_crucial_flags(const LabeledPetriNet& net, BasisGraph& brg, const CrucialSet& crucial);

/// Basis markings consistent with a word: runs the basis-side observer from
/// its initial state and returns the markings of the reached state, sorted.
std::vector<Marking> basis_consistent(const BasisGraph& brg, const ObserverDfa& observer,
                                      std::span<const std::string> word);

/// Set of markings consistent with a word via the basis route: the union of
/// unobservable reaches over the consistent basis markings. Must agree with
/// consistent_markings_oracle on every word the net can produce.
std::vector<Marking> consistent_markings_basis(const LabeledPetriNet& net, const BasisGraph& brg,
                                               std::span<const std::string> word);

}  // namespace cdetect
