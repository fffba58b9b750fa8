#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "cdetect/crucial.hpp"
#include "cdetect/net.hpp"
#include "cdetect/observer.hpp"

namespace cdetect {

/// The full reachability graph of a bounded net. Node 0 is the initial marking;
/// nodes are numbered in BFS discovery order with each frontier layer expanded
/// in lexicographic marking order.
struct ReachabilityGraph {
    std::vector<Marking> nodes;
    /// Per node: (transition index, target node), sorted by transition index.
    std::vector<std::vector<std::pair<int, int>>> edges;
    int initial = 0;
    std::unordered_map<Marking, int, MarkingHash> index;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int node_of(const Marking& m) const;  // -1 when not reachable
    /// Largest token count over all reachable markings and places.
    int max_tokens() const;
};

/// Explores the reachability set by BFS. Throws UnboundedError when a new
/// marking strictly dominates an ancestor on its generation path, and
/// StateBudgetError when max_states is exceeded without such a witness.
ReachabilityGraph build_rg(const LabeledPetriNet& net, int max_states = 1 << 20);

/// All markings reachable from `m` by unobservable firings only, sorted
/// lexicographically; always contains `m`. Requires an acyclic unobservable
/// subnet (throws TuSubnetCyclicError otherwise).
std::vector<Marking> unobservable_reach(const LabeledPetriNet& net, const Marking& m,
                                        std::size_t max_markings = 1u << 22);

/// Same closure without re-checking acyclicity; for callers that already did.
std::vector<Marking> unobservable_closure(const UnobservableSubnet& sub, const Marking& m,
                                          std::size_t max_markings = 1u << 22);

struct DeadlockCheck {
    bool deadlock_free = true;
    std::optional<Marking> witness;  // a reachable marking enabling nothing
};

DeadlockCheck check_deadlock_free(const LabeledPetriNet& net, const ReachabilityGraph& rg);

/// Exact set of markings consistent with the observed word, under
/// unknown-initial-marking semantics: the walk starts from the whole
/// reachability set and interleaves unobservable closure with observable
/// steps. Empty when the word cannot be produced at all.
std::vector<Marking> consistent_markings_oracle(const LabeledPetriNet& net, const ReachabilityGraph& rg,
                                                std::span<const std::string> word);

/// Observer of the reachability graph: subset construction with epsilon
/// closure over unobservable edges, starting from the full reachability set.
/// A state is marked iff it contains no crucial marking or is a singleton.
using OracleObserver = ObserverDfa;
OracleObserver rg_observer(const LabeledPetriNet& net, const ReachabilityGraph& rg,
                           const CrucialSet& crucial, std::size_t state_budget = 1u << 20);

}  // namespace cdetect
