#include "cdetect/basis.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "cdetect/reachability.hpp"

namespace cdetect {

std::vector<ParikhVector> MinimalExplanationSet::evectors() const {
    std::vector<ParikhVector> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(item.evector);
    return out;
}

namespace {

struct SearchNode {
    std::vector<int> y;        // firing counts over subnet columns
    std::vector<int> tokens;   // marking reached
    std::vector<int> witness;  // original transition indices fired
    int total = 0;             // sum of y

    bool operator>(const SearchNode& other) const {
        if (total != other.total) return total > other.total;
        return y > other.y;
    }
};

bool covers(const std::vector<int>& a, const std::vector<int>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] < b[i]) return false;
    return true;
}

}  // namespace

MinimalExplanationSet minimal_explanations(const LabeledPetriNet& net, const Marking& m, int t,
                                           std::size_t node_budget) {
    require_tu_acyclic(net);
    return minimal_explanations(net, unobservable_subnet(net), m, t, node_budget);
}

MinimalExplanationSet minimal_explanations(const LabeledPetriNet& net, const UnobservableSubnet& sub,
                                           const Marking& m, int t, std::size_t node_budget) {
    if (t < 0 || t >= net.num_transitions()) throw DimensionError("transition index out of range");
    if (!net.is_observable(t))
        throw Error("minimal explanations are defined for observable transitions only: " +
                    net.transitions[static_cast<std::size_t>(t)]);
    if (static_cast<int>(m.size()) != net.num_places())
        throw DimensionError("marking length does not match the net");

    const std::vector<int> need = net.pre.column(t);
    const int k = sub.num_transitions();

    // Best-first search over unobservable firings ordered by total firing
    // count. A node whose firing vector already covers a found explanation is
    // dead. A node is also dead when an expanded node has at least its tokens
    // with at most its firing vector: every completion from here is matched
    // by a cheaper completion from there.
    std::priority_queue<SearchNode, std::vector<SearchNode>, std::greater<>> frontier;
    frontier.push(SearchNode{std::vector<int>(static_cast<std::size_t>(k), 0), m.tokens, {}, 0});

    std::set<std::vector<int>> visited;
    std::vector<std::pair<std::vector<int>, std::vector<int>>> expanded;  // (tokens, y)
    std::vector<MinimalExplanation> found;
    // Work units charged per pop and per pruning comparison, so the budget
    // also caps the quadratic pruning cost on degenerate (unbounded) inputs.
    std::size_t work = 0;

    while (!frontier.empty()) {
        SearchNode node = frontier.top();
        frontier.pop();
        work += 1 + found.size() + expanded.size();
        if (work > node_budget)
            throw StateBudgetError("minimal-explanation search exceeded its node budget");
        if (!visited.insert(node.y).second) continue;

        bool dominated = false;
        for (const auto& f : found)
            dominated = dominated || covers(node.y, f.evector.counts);
        if (dominated) continue;

        if (covers(node.tokens, need)) {
            found.push_back(MinimalExplanation{ParikhVector(node.y), node.witness});
            continue;
        }

        bool subsumed = false;
        for (const auto& [etokens, ey] : expanded)
            subsumed = subsumed || (covers(etokens, node.tokens) && covers(node.y, ey));
        if (subsumed) continue;
        expanded.emplace_back(node.tokens, node.y);

        for (int c = 0; c < k; ++c) {
            bool ok = true;
            for (int p = 0; p < sub.num_places() && ok; ++p)
                ok = node.tokens[static_cast<std::size_t>(p)] >= sub.pre.at(p, c);
            if (!ok) continue;
            SearchNode child = node;
            ++child.y[static_cast<std::size_t>(c)];
            for (int p = 0; p < sub.num_places(); ++p)
                child.tokens[static_cast<std::size_t>(p)] += sub.incidence.at(p, c);
            child.witness.push_back(sub.columns[static_cast<std::size_t>(c)]);
            ++child.total;
            frontier.push(std::move(child));
        }
    }

    std::sort(found.begin(), found.end(),
              [](const MinimalExplanation& a, const MinimalExplanation& b) { return a.evector < b.evector; });
    return MinimalExplanationSet{std::move(found)};
}

int BasisGraph::node_of(const Marking& m) const {
    for (int i = 0; i < num_nodes(); ++i)
        if (nodes[static_cast<std::size_t>(i)].marking == m) return i;
    return -1;
}

BasisGraph build_brg(const LabeledPetriNet& net, const CrucialSet& crucial, std::size_t max_nodes) {
    net.validate();
    require_tu_acyclic(net);
    const UnobservableSubnet sub = unobservable_subnet(net);
    const std::vector<int> observable = net.observable_transitions();

    BasisGraph brg;
    brg.alphabet = net.alphabet();

    std::map<Marking, int> ids;
    auto intern = [&](const Marking& m) {
        auto it = ids.find(m);
        if (it != ids.end()) return it->second;
        const int id = brg.num_nodes();
        if (static_cast<std::size_t>(id) >= max_nodes)
            throw StateBudgetError("basis graph construction exceeded the node budget "
                                   "(is the net bounded?)");
        brg.nodes.push_back(BasisNode{m, alpha_flag(net, crucial, m), beta_flag(net, m)});
        ids.emplace(m, id);
        return id;
    };

    std::queue<int> work;
    work.push(intern(net.initial));

    std::set<std::tuple<int, std::string, int>> edge_keys;
    while (!work.empty()) {
        const int u = work.front();
        work.pop();
        const Marking source = brg.nodes[static_cast<std::size_t>(u)].marking;
        for (int t : observable) {
            const MinimalExplanationSet exps = minimal_explanations(net, sub, source, t);
            for (const auto& exp : exps.items) {
                Marking target = source;
                for (int c = 0; c < sub.num_transitions(); ++c)
                    for (int p = 0; p < sub.num_places(); ++p)
                        target.tokens[static_cast<std::size_t>(p)] +=
                            sub.incidence.at(p, c) * exp.evector[static_cast<std::size_t>(c)];
                for (int p = 0; p < net.num_places(); ++p)
                    target.tokens[static_cast<std::size_t>(p)] += net.incidence(p, t);

                const bool known = ids.contains(target);
                const int v = intern(target);
                if (!known) work.push(v);

                const auto& symbol = net.labels[static_cast<std::size_t>(t)];
                if (edge_keys.emplace(u, symbol, v).second) {
                    std::vector<int> witness = exp.witness;
                    witness.push_back(t);
                    brg.edges.push_back(BasisEdge{u, v, symbol, std::move(witness)});
                }
            }
        }
    }

    std::sort(brg.edges.begin(), brg.edges.end(), [](const BasisEdge& a, const BasisEdge& b) {
        return std::tie(a.from, a.symbol, a.to) < std::tie(b.from, b.symbol, b.to);
    });
    brg.out_edges.assign(static_cast<std::size_t>(brg.num_nodes()), {});
    for (std::size_t i = 0; i < brg.edges.size(); ++i)
        brg.out_edges[static_cast<std::size_t>(brg.edges[i].from)].push_back(static_cast<int>(i));
    return brg;
}

void update_crucial_flags(const LabeledPetriNet& net, BasisGraph& brg, const CrucialSet& crucial) {
    for (auto& node : brg.nodes) node.alpha = alpha_flag(net, crucial, node.marking);
}

std::vector<Marking> basis_consistent(const BasisGraph& brg, const ObserverDfa& observer,
                                      std::span<const std::string> word) {
    const int state = observer.run(word);
    if (state < 0) return {};
    std::vector<Marking> out;
    for (int id : observer.states[static_cast<std::size_t>(state)])
        out.push_back(brg.nodes[static_cast<std::size_t>(id)].marking);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Marking> consistent_markings_basis(const LabeledPetriNet& net, const BasisGraph& brg,
                                               std::span<const std::string> word) {
    require_tu_acyclic(net);
    const UnobservableSubnet sub = unobservable_subnet(net);

    // Subset walk over the basis graph, starting from every basis marking.
    std::vector<bool> current(static_cast<std::size_t>(brg.num_nodes()), true);
    for (const auto& symbol : word) {
        std::vector<bool> target(static_cast<std::size_t>(brg.num_nodes()), false);
        bool any = false;
        for (const auto& edge : brg.edges) {
            if (edge.symbol == symbol && current[static_cast<std::size_t>(edge.from)]) {
                target[static_cast<std::size_t>(edge.to)] = true;
                any = true;
            }
        }
        if (!any) return {};
        current = std::move(target);
    }

    std::set<Marking> out;
    for (int i = 0; i < brg.num_nodes(); ++i) {
        if (!current[static_cast<std::size_t>(i)]) continue;
        for (Marking& m : unobservable_closure(sub, brg.nodes[static_cast<std::size_t>(i)].marking))
            out.insert(std::move(m));
    }
    return {out.begin(), out.end()};
}

}  // namespace cdetect
