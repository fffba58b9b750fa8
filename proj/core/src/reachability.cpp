#include "cdetect/reachability.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace cdetect {

int ReachabilityGraph::node_of(const Marking& m) const {
    auto it = index.find(m);
    return it == index.end() ? -1 : it->second;
}

int ReachabilityGraph::max_tokens() const {
    int best = 0;
    for (const auto& m : nodes)
        for (int v : m.tokens) best = std::max(best, v);
    return best;
}

ReachabilityGraph build_rg(const LabeledPetriNet& net, int max_states) {
    net.validate();
    ReachabilityGraph rg;
    rg.nodes.push_back(net.initial);
    rg.edges.emplace_back();
    rg.index.emplace(net.initial, 0);
    std::vector<int> parent{-1};

    std::vector<int> layer{0};
    while (!layer.empty()) {
        std::sort(layer.begin(), layer.end(),
                  [&](int a, int b) { return rg.nodes[static_cast<std::size_t>(a)] < rg.nodes[static_cast<std::size_t>(b)]; });
        std::vector<int> next_layer;
        for (int u : layer) {
            for (int t = 0; t < net.num_transitions(); ++t) {
                if (!enabled(net, rg.nodes[static_cast<std::size_t>(u)], t)) continue;
                Marking target = fire(net, rg.nodes[static_cast<std::size_t>(u)], t);
                auto it = rg.index.find(target);
                int v;
                if (it != rg.index.end()) {
                    v = it->second;
                } else {
                    // Coverability-style abort: a strictly dominated ancestor
                    // on the generation path witnesses unboundedness.
                    for (int a = u; a != -1; a = parent[static_cast<std::size_t>(a)]) {
                        if (target.strictly_dominates(rg.nodes[static_cast<std::size_t>(a)])) {
                            std::ostringstream os;
                            os << "net is unbounded: a reachable marking strictly dominates an ancestor";
                            throw UnboundedError(os.str(), rg.nodes[static_cast<std::size_t>(a)].tokens,
                                                 target.tokens);
                        }
                    }
                    v = rg.num_nodes();
                    if (v >= max_states)
                        throw StateBudgetError("reachability exploration exceeded the state budget");
                    rg.nodes.push_back(target);
                    rg.edges.emplace_back();
                    rg.index.emplace(std::move(target), v);
                    parent.push_back(u);
                    next_layer.push_back(v);
                }
                rg.edges[static_cast<std::size_t>(u)].emplace_back(t, v);
            }
        }
        layer = std::move(next_layer);
    }
    return rg;
}

std::vector<Marking> unobservable_closure(const UnobservableSubnet& sub, const Marking& m,
                                          std::size_t max_markings) {
    std::set<Marking> seen{m};
    std::queue<Marking> work;
    work.push(m);
    while (!work.empty()) {
        const Marking cur = std::move(work.front());
        work.pop();
        for (int c = 0; c < sub.num_transitions(); ++c) {
            bool ok = true;
            for (int p = 0; p < sub.num_places() && ok; ++p)
                ok = cur[static_cast<std::size_t>(p)] >= sub.pre.at(p, c);
            if (!ok) continue;
            Marking target = cur;
            for (int p = 0; p < sub.num_places(); ++p)
                target.tokens[static_cast<std::size_t>(p)] += sub.incidence.at(p, c);
            if (seen.insert(target).second) {
                if (seen.size() > max_markings)
                    throw StateBudgetError("unobservable closure exceeded its budget");
                work.push(std::move(target));
            }
        }
    }
    return {seen.begin(), seen.end()};
}

std::vector<Marking> unobservable_reach(const LabeledPetriNet& net, const Marking& m,
                                        std::size_t max_markings) {
    require_tu_acyclic(net);
    return unobservable_closure(unobservable_subnet(net), m, max_markings);
}

DeadlockCheck check_deadlock_free(const LabeledPetriNet& net, const ReachabilityGraph& rg) {
    for (int u = 0; u < rg.num_nodes(); ++u) {
        bool any = false;
        for (int t = 0; t < net.num_transitions() && !any; ++t)
            any = enabled(net, rg.nodes[static_cast<std::size_t>(u)], t);
        if (!any) return {false, rg.nodes[static_cast<std::size_t>(u)]};
    }
    return {};
}

namespace {

// Per-node successor lists split by label, for observer walks.
struct LabeledAdjacency {
    std::vector<std::vector<int>> silent;                    // unobservable successors
    std::map<std::string, std::vector<std::vector<int>>> by_symbol;  // symbol -> per-node successors

    LabeledAdjacency(const LabeledPetriNet& net, const ReachabilityGraph& rg) {
        const auto n = static_cast<std::size_t>(rg.num_nodes());
        silent.assign(n, {});
        for (const auto& symbol : net.alphabet()) by_symbol[symbol].assign(n, {});
        for (int u = 0; u < rg.num_nodes(); ++u) {
            for (auto [t, v] : rg.edges[static_cast<std::size_t>(u)]) {
                const auto& label = net.labels[static_cast<std::size_t>(t)];
                if (label.empty())
                    silent[static_cast<std::size_t>(u)].push_back(v);
                else
                    by_symbol[label][static_cast<std::size_t>(u)].push_back(v);
            }
        }
    }

    // Sorted epsilon closure of a sorted node set.
    std::vector<int> closure(std::vector<int> set) const {
        std::vector<bool> in(silent.size(), false);
        std::vector<int> stack = set;
        for (int u : set) in[static_cast<std::size_t>(u)] = true;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : silent[static_cast<std::size_t>(u)]) {
                if (!in[static_cast<std::size_t>(v)]) {
                    in[static_cast<std::size_t>(v)] = true;
                    set.push_back(v);
                    stack.push_back(v);
                }
            }
        }
        std::sort(set.begin(), set.end());
        return set;
    }

    std::vector<int> move(const std::vector<int>& set, const std::string& symbol) const {
        auto it = by_symbol.find(symbol);
        if (it == by_symbol.end()) return {};
        std::set<int> out;
        for (int u : set)
            for (int v : it->second[static_cast<std::size_t>(u)]) out.insert(v);
        return {out.begin(), out.end()};
    }
};

}  // namespace

std::vector<Marking> consistent_markings_oracle(const LabeledPetriNet& net, const ReachabilityGraph& rg,
                                                std::span<const std::string> word) {
    const LabeledAdjacency adj(net, rg);
    std::vector<int> current(static_cast<std::size_t>(rg.num_nodes()));
    for (int u = 0; u < rg.num_nodes(); ++u) current[static_cast<std::size_t>(u)] = u;
    for (const auto& symbol : word) {
        current = adj.closure(adj.move(current, symbol));
        if (current.empty()) return {};
    }
    std::vector<Marking> out;
    out.reserve(current.size());
    for (int u : current) out.push_back(rg.nodes[static_cast<std::size_t>(u)]);
    std::sort(out.begin(), out.end());
    return out;
}

OracleObserver rg_observer(const LabeledPetriNet& net, const ReachabilityGraph& rg,
                           const CrucialSet& crucial, std::size_t state_budget) {
    require_tu_acyclic(net);
    const LabeledAdjacency adj(net, rg);

    std::vector<bool> is_crucial(static_cast<std::size_t>(rg.num_nodes()));
    for (int u = 0; u < rg.num_nodes(); ++u)
        is_crucial[static_cast<std::size_t>(u)] = crucial.contains(rg.nodes[static_cast<std::size_t>(u)]);

    OracleObserver obs;
    obs.alphabet = net.alphabet();

    std::map<std::vector<int>, int> ids;
    auto intern = [&](std::vector<int> members) {
        auto it = ids.find(members);
        if (it != ids.end()) return it->second;
        const int id = obs.num_states();
        if (static_cast<std::size_t>(id) >= state_budget)
            throw StateBudgetError("observer construction exceeded the state budget");
        bool any_crucial = false;
        for (int u : members)
            any_crucial = any_crucial || is_crucial[static_cast<std::size_t>(u)];
        obs.marked.push_back(!any_crucial || members.size() == 1);
        ids.emplace(members, id);
        obs.states.push_back(std::move(members));
        obs.next.emplace_back(obs.alphabet.size(), -1);
        return id;
    };

    std::vector<int> all(static_cast<std::size_t>(rg.num_nodes()));
    for (int u = 0; u < rg.num_nodes(); ++u) all[static_cast<std::size_t>(u)] = u;
    obs.initial = intern(std::move(all));

    for (int s = 0; s < obs.num_states(); ++s) {
        for (std::size_t a = 0; a < obs.alphabet.size(); ++a) {
            std::vector<int> target = adj.closure(adj.move(obs.states[static_cast<std::size_t>(s)],
                                                           obs.alphabet[a]));
            if (target.empty()) continue;
            obs.next[static_cast<std::size_t>(s)][a] = intern(std::move(target));
        }
    }
    return obs;
}

}  // namespace cdetect
