#include "cdetect/crucial.hpp"

#include <algorithm>
#include <set>

#include "cdetect/reachability.hpp"

namespace cdetect {

bool Gmec::satisfied_by(const Marking& m) const {
    if (w.cols != static_cast<int>(m.size()))
        throw DimensionError("GMEC column count does not match the marking length");
    for (int r = 0; r < w.rows; ++r) {
        long long acc = 0;
        for (int p = 0; p < w.cols; ++p)
            acc += static_cast<long long>(w.at(r, p)) * m[static_cast<std::size_t>(p)];
        if (acc > k[static_cast<std::size_t>(r)]) return false;
    }
    return true;
}

CrucialSet CrucialSet::explicit_set(std::vector<Marking> markings) {
    std::sort(markings.begin(), markings.end());
    markings.erase(std::unique(markings.begin(), markings.end()), markings.end());
    return CrucialSet{std::move(markings)};
}

CrucialSet CrucialSet::gmec_set(Gmec gmec) {
    if (gmec.w.rows != static_cast<int>(gmec.k.size()))
        throw DimensionError("GMEC needs one bound per row");
    return CrucialSet{std::move(gmec)};
}

bool CrucialSet::contains(const Marking& m) const {
    if (is_explicit()) {
        const auto& ms = markings();
        if (!ms.empty() && ms.front().size() != m.size())
            throw DimensionError("marking length does not match the crucial set");
        return std::binary_search(ms.begin(), ms.end(), m);
    }
    return gmec().satisfied_by(m);
}

namespace {

// Topological order of subnet columns: producers before consumers. The
// subnet is required to be acyclic, so Kahn's algorithm always drains.
std::vector<int> topological_columns(const UnobservableSubnet& sub) {
    const int k = sub.num_transitions();
    const int m = sub.num_places();
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(k));
    std::vector<int> indegree(static_cast<std::size_t>(k), 0);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            bool edge = false;
            for (int p = 0; p < m && !edge; ++p)
                edge = sub.post.at(p, a) > 0 && sub.pre.at(p, b) > 0;
            if (edge) {
                succ[static_cast<std::size_t>(a)].push_back(b);
                ++indegree[static_cast<std::size_t>(b)];
            }
        }
    }
    std::vector<int> order;
    std::vector<int> ready;
    for (int c = 0; c < k; ++c)
        if (indegree[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
    while (!ready.empty()) {
        const int c = ready.back();
        ready.pop_back();
        order.push_back(c);
        for (int d : succ[static_cast<std::size_t>(c)])
            if (--indegree[static_cast<std::size_t>(d)] == 0) ready.push_back(d);
    }
    if (static_cast<int>(order.size()) != k)
        throw TuSubnetCyclicError("unobservable subnet has a directed cycle", {});
    return order;
}

bool subnet_enabled(const UnobservableSubnet& sub, const std::vector<int>& tokens, int col) {
    for (int p = 0; p < sub.num_places(); ++p)
        if (tokens[static_cast<std::size_t>(p)] < sub.pre.at(p, col)) return false;
    return true;
}

void subnet_apply(const UnobservableSubnet& sub, std::vector<int>& tokens, int col) {
    for (int p = 0; p < sub.num_places(); ++p)
        tokens[static_cast<std::size_t>(p)] += sub.incidence.at(p, col);
}

// Shared branch-and-bound driver. `leaf` is called with (y, reached tokens)
// for every complete assignment and returns true to stop the search.
struct BranchSearch {
    const ConstraintSystem& sys;
    std::vector<int> order;
    std::size_t budget;
    std::size_t visited = 0;
    std::vector<int> y;

    explicit BranchSearch(const ConstraintSystem& sys, std::size_t budget)
        : sys(sys), order(topological_columns(sys.subnet)), budget(budget),
          y(static_cast<std::size_t>(sys.subnet.num_transitions()), 0) {}

    template <typename Leaf>
    bool run(Leaf&& leaf) {
        std::vector<int> tokens = sys.base.tokens;
        return descend(0, tokens, leaf);
    }

    template <typename Leaf>
    bool descend(std::size_t stage, std::vector<int>& tokens, Leaf&& leaf) {
        if (++visited > budget)
            throw StateBudgetError("feasibility search exceeded its node budget");
        if (stage == order.size()) return leaf(y, tokens);
        const int col = order[stage];
        // Isolated columns never move tokens; pinning them to zero keeps the
        // nonzero requirement meaningful.
        if (sys.subnet.is_isolated(col)) return descend(stage + 1, tokens, leaf);
        std::vector<int> saved = tokens;
        int copies = 0;
        for (;;) {
            y[static_cast<std::size_t>(col)] = copies;
            if (descend(stage + 1, tokens, leaf)) return true;
            if (!subnet_enabled(sys.subnet, tokens, col)) break;
            subnet_apply(sys.subnet, tokens, col);
            if (++copies > static_cast<int>(budget))
                throw StateBudgetError("feasibility search exceeded its node budget");
        }
        y[static_cast<std::size_t>(col)] = 0;
        tokens = saved;
        return false;
    }
};

}  // namespace

Feasibility integer_feasible(const ConstraintSystem& sys, std::size_t node_budget) {
    if (static_cast<int>(sys.base.size()) != sys.subnet.num_places())
        throw DimensionError("base marking length does not match the subnet");
    Feasibility out;
    BranchSearch search(sys, node_budget);
    search.run([&](const std::vector<int>& y, const std::vector<int>& tokens) {
        if (sys.require_nonzero &&
            std::all_of(y.begin(), y.end(), [](int c) { return c == 0; }))
            return false;
        if (sys.reached_constraint && !sys.reached_constraint->satisfied_by(Marking(std::vector<int>(tokens))))
            return false;
        out.feasible = true;
        out.witness = ParikhVector(y);
        return true;
    });
    return out;
}

std::vector<Marking> feasible_markings(const ConstraintSystem& sys, std::size_t node_budget) {
    std::set<Marking> reached;
    BranchSearch search(sys, node_budget);
    search.run([&](const std::vector<int>&, const std::vector<int>& tokens) {
        reached.insert(Marking(std::vector<int>(tokens)));
        return false;
    });
    return {reached.begin(), reached.end()};
}

ConstraintSystem crucial_reach_system(const LabeledPetriNet& net, const Gmec& gmec, const Marking& mb) {
    return ConstraintSystem{mb, unobservable_subnet(net), gmec, false};
}

ConstraintSystem silent_move_system(const LabeledPetriNet& net, const Marking& mb) {
    return ConstraintSystem{mb, unobservable_subnet(net), std::nullopt, true};
}

int alpha_flag(const LabeledPetriNet& net, const CrucialSet& crucial, const Marking& mb) {
    if (crucial.is_explicit()) return alpha_by_enumeration(net, crucial, mb);
    return alpha_by_feasibility(net, crucial, mb);
}

int beta_flag(const LabeledPetriNet& net, const Marking& mb) {
    return beta_by_enumeration(net, mb);
}

int alpha_by_enumeration(const LabeledPetriNet& net, const CrucialSet& crucial, const Marking& mb) {
    require_tu_acyclic(net);
    const UnobservableSubnet sub = unobservable_subnet(net);
    for (const Marking& m : unobservable_closure(sub, mb))
        if (crucial.contains(m)) return 1;
    return 0;
}

int alpha_by_feasibility(const LabeledPetriNet& net, const CrucialSet& crucial, const Marking& mb) {
    require_tu_acyclic(net);
    if (crucial.is_gmec())
        return integer_feasible(crucial_reach_system(net, crucial.gmec(), mb)).feasible ? 1 : 0;
    // Explicit set: one equality-constrained system per crucial marking.
    const int m = net.num_places();
    for (const Marking& target : crucial.markings()) {
        if (static_cast<int>(target.size()) != m)
            throw DimensionError("crucial marking length does not match the net");
        Gmec equal;
        equal.w = IntMatrix(2 * m, m);
        equal.k.resize(static_cast<std::size_t>(2 * m));
        for (int p = 0; p < m; ++p) {
            equal.w.at(p, p) = 1;
            equal.k[static_cast<std::size_t>(p)] = target[static_cast<std::size_t>(p)];
            equal.w.at(m + p, p) = -1;
            equal.k[static_cast<std::size_t>(m + p)] = -target[static_cast<std::size_t>(p)];
        }
        if (integer_feasible(crucial_reach_system(net, equal, mb)).feasible) return 1;
    }
    return 0;
}

int beta_by_enumeration(const LabeledPetriNet& net, const Marking& mb) {
    require_tu_acyclic(net);
    const UnobservableSubnet sub = unobservable_subnet(net);
    return unobservable_closure(sub, mb).size() > 1 ? 1 : 0;
}

int beta_by_feasibility(const LabeledPetriNet& net, const Marking& mb) {
    require_tu_acyclic(net);
    return integer_feasible(silent_move_system(net, mb)).feasible ? 1 : 0;
}

}  // namespace cdetect
