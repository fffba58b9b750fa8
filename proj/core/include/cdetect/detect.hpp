#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cdetect/basis.hpp"
#include "cdetect/observer.hpp"
#include "cdetect/reachability.hpp"

namespace cdetect {

/// Alternating observer states and event symbols: states.size() == events.size() + 1.
/// A cycle starts and ends at the same state.
struct ObserverPath {
    std::vector<int> states;
    std::vector<std::string> events;

    bool empty() const { return states.empty(); }
};

/// Evidence attached to one property verdict. For a failed universal property
/// the pair is (a cycle, a path from it to an offending state); for a holding
/// existential property it is the witnessing cycle.
struct PropertyWitness {
    ObserverPath cycle;
    ObserverPath path;
};

struct PropertyVerdict {
    bool holds = false;
    std::optional<PropertyWitness> witness;
};

/// The four C-detectability verdicts. Whenever produced by the checks below,
/// the implication lattice holds: strong implies weak and periodically
/// strong; each of those implies periodically weak.
struct Verdict {
    PropertyVerdict strong;
    PropertyVerdict weak;
    PropertyVerdict periodically_strong;
    PropertyVerdict periodically_weak;

    bool get(std::string_view property) const;  // "strong" | "weak" | "ps" | "pw"
    bool same_outcome(const Verdict& other) const;
};

/// Observer of the basis reachability graph. The initial state is the set of
/// all basis nodes (the marking the observation started from is unknown).
/// A state is marked when it is a singleton whose node has beta = 0, or when
/// every member node has alpha = 0.
using BrgObserver = ObserverDfa;
BrgObserver build_observer(const BasisGraph& brg, std::size_t state_budget = 1u << 20);

enum class CycleKind { Unambiguous, SemiUnambiguous, Ambiguous };

struct CycleClassification {
    ObserverPath cycle;
    CycleKind kind = CycleKind::Ambiguous;
};

struct CycleEnumeration {
    std::vector<CycleClassification> cycles;
    bool complete = true;  // false when the budget cut enumeration short
};

/// Enumerates the simple cycles of the observer (vertex-distinct; self-loops
/// count) with Johnson's algorithm, classifying each by its marked states.
/// Used as a cross-validation oracle for the polynomial checks below.
CycleEnumeration classify_cycles(const ObserverDfa& obs, std::size_t cycle_budget = 10000);

/// Holds iff every state reachable from a nontrivial SCC is marked.
PropertyVerdict check_strong(const ObserverDfa& obs);
/// Holds iff the subgraph induced by marked states contains a cycle.
PropertyVerdict check_weak(const ObserverDfa& obs);
/// Holds iff the subgraph induced by unmarked states is acyclic.
PropertyVerdict check_periodically_strong(const ObserverDfa& obs);
/// Holds iff some marked state lies on a cycle.
PropertyVerdict check_periodically_weak(const ObserverDfa& obs);

/// Applies the four checks to an already-built observer.
Verdict check_all(const ObserverDfa& obs);

struct VerifyOptions {
    int max_states = 1 << 20;            // reachability exploration budget
    std::size_t observer_budget = 1u << 20;
    bool allow_deadlock = false;         // downgrade a deadlock to a warning
    bool with_oracle = false;            // also run the reachability-graph observer route
};

/// Everything produced by one verification run, kept for reporting.
struct VerifyOutcome {
    Verdict verdict;
    ReachabilityGraph rg;
    BasisGraph brg;
    BrgObserver observer;
    bool deadlock_free = true;
    std::optional<Marking> deadlock_witness;
    std::optional<OracleObserver> oracle_observer;
    std::optional<Verdict> oracle_verdict;
    std::vector<std::pair<std::string, double>> stage_ms;
};

/// Full pipeline: structural assumption checks (unobservable-subnet
/// acyclicity, boundedness via the reachability graph, deadlock freedom),
/// basis graph, observer, four property checks. Asserts the implication
/// lattice, and verdict equality with the oracle route when requested.
/// Structural violations propagate as TuSubnetCyclicError, UnboundedError or
/// NotDeadlockFreeError (the latter suppressed by allow_deadlock).
VerifyOutcome verify_all(const LabeledPetriNet& net, const CrucialSet& crucial,
                         const VerifyOptions& options = {});

/// The definition-level route: the same four graph checks applied to the
/// observer of the reachability graph, whose marked states come straight from
/// the consistency-set semantics. Serves as the independent oracle.
Verdict oracle_verify_all(const OracleObserver& observer);

}  // namespace cdetect
