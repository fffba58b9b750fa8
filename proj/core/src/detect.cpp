#include "cdetect/detect.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace cdetect {

bool Verdict::get(std::string_view property) const {
    if (property == "strong") return strong.holds;
    if (property == "weak") return weak.holds;
    if (property == "ps" || property == "periodically-strong") return periodically_strong.holds;
    if (property == "pw" || property == "periodically-weak") return periodically_weak.holds;
    throw Error("unknown property: " + std::string(property));
}

bool Verdict::same_outcome(const Verdict& other) const {
    return strong.holds == other.strong.holds && weak.holds == other.weak.holds &&
           periodically_strong.holds == other.periodically_strong.holds &&
           periodically_weak.holds == other.periodically_weak.holds;
}

BrgObserver build_observer(const BasisGraph& brg, std::size_t state_budget) {
    if (brg.num_nodes() == 0) throw Error("cannot build the observer of an empty basis graph");

    BrgObserver obs;
    obs.alphabet = brg.alphabet;

    // symbol -> per-node successor lists
    std::vector<std::vector<std::vector<int>>> succ(
        obs.alphabet.size(), std::vector<std::vector<int>>(static_cast<std::size_t>(brg.num_nodes())));
    for (const auto& edge : brg.edges) {
        const auto a = static_cast<std::size_t>(
            std::lower_bound(obs.alphabet.begin(), obs.alphabet.end(), edge.symbol) - obs.alphabet.begin());
        succ[a][static_cast<std::size_t>(edge.from)].push_back(edge.to);
    }

    std::map<std::vector<int>, int> ids;
    auto intern = [&](std::vector<int> members) {
        auto it = ids.find(members);
        if (it != ids.end()) return it->second;
        const int id = obs.num_states();
        if (static_cast<std::size_t>(id) >= state_budget)
            throw StateBudgetError("observer construction exceeded the state budget");
        bool all_alpha_zero = true;
        for (int m : members) all_alpha_zero = all_alpha_zero && brg.nodes[static_cast<std::size_t>(m)].alpha == 0;
        const bool certain_singleton =
            members.size() == 1 && brg.nodes[static_cast<std::size_t>(members.front())].beta == 0;
        obs.marked.push_back(certain_singleton || all_alpha_zero);
        ids.emplace(members, id);
        obs.states.push_back(std::move(members));
        obs.next.emplace_back(obs.alphabet.size(), -1);
        return id;
    };

    std::vector<int> all(static_cast<std::size_t>(brg.num_nodes()));
    for (int i = 0; i < brg.num_nodes(); ++i) all[static_cast<std::size_t>(i)] = i;
    obs.initial = intern(std::move(all));

    for (int s = 0; s < obs.num_states(); ++s) {
        for (std::size_t a = 0; a < obs.alphabet.size(); ++a) {
            std::set<int> target;
            for (int m : obs.states[static_cast<std::size_t>(s)])
                for (int v : succ[a][static_cast<std::size_t>(m)]) target.insert(v);
            if (target.empty()) continue;
            obs.next[static_cast<std::size_t>(s)][a] = intern({target.begin(), target.end()});
        }
    }
    return obs;
}

namespace {

// Deduplicated successor lists; keeps the smallest symbol per (from, to) pair
// so witness paths are labeled deterministically.
struct Graph {
    std::vector<std::vector<int>> succ;
    std::map<std::pair<int, int>, int> symbol_of;  // (from, to) -> symbol index
    const ObserverDfa* obs;

    explicit Graph(const ObserverDfa& o) : obs(&o) {
        succ.assign(static_cast<std::size_t>(o.num_states()), {});
        for (int s = 0; s < o.num_states(); ++s) {
            for (std::size_t a = 0; a < o.alphabet.size(); ++a) {
                const int v = o.next[static_cast<std::size_t>(s)][a];
                if (v < 0) continue;
                if (symbol_of.emplace(std::make_pair(s, v), static_cast<int>(a)).second)
                    succ[static_cast<std::size_t>(s)].push_back(v);
            }
        }
        for (auto& vs : succ) std::sort(vs.begin(), vs.end());
    }

    bool has_self_loop(int v) const { return symbol_of.contains({v, v}); }

    std::string symbol(int from, int to) const {
        return obs->alphabet[static_cast<std::size_t>(symbol_of.at({from, to}))];
    }
};

// Tarjan's algorithm restricted to an allowed vertex set; iterative.
std::vector<std::vector<int>> strongly_connected_components(const Graph& g, const std::vector<bool>& allowed) {
    const int n = static_cast<int>(g.succ.size());
    std::vector<int> number(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), -1);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    std::vector<std::vector<int>> components;
    int counter = 0;

    for (int root = 0; root < n; ++root) {
        if (!allowed[static_cast<std::size_t>(root)] || number[static_cast<std::size_t>(root)] != -1) continue;
        std::vector<std::pair<int, std::size_t>> dfs{{root, 0}};
        number[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = true;
        while (!dfs.empty()) {
            auto& [v, idx] = dfs.back();
            const auto& vs = g.succ[static_cast<std::size_t>(v)];
            bool descended = false;
            while (idx < vs.size()) {
                const int w = vs[idx++];
                if (!allowed[static_cast<std::size_t>(w)]) continue;
                if (number[static_cast<std::size_t>(w)] == -1) {
                    number[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
                    stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = true;
                    dfs.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[static_cast<std::size_t>(w)])
                    low[static_cast<std::size_t>(v)] =
                        std::min(low[static_cast<std::size_t>(v)], number[static_cast<std::size_t>(w)]);
            }
            if (descended) continue;
            if (low[static_cast<std::size_t>(v)] == number[static_cast<std::size_t>(v)]) {
                std::vector<int> component;
                for (;;) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = false;
                    component.push_back(w);
                    if (w == v) break;
                }
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
            const int finished = v;
            dfs.pop_back();
            if (!dfs.empty())
                low[static_cast<std::size_t>(dfs.back().first)] =
                    std::min(low[static_cast<std::size_t>(dfs.back().first)],
                             low[static_cast<std::size_t>(finished)]);
        }
    }
    std::sort(components.begin(), components.end());
    return components;
}

bool component_has_cycle(const Graph& g, const std::vector<int>& component) {
    return component.size() >= 2 || g.has_self_loop(component.front());
}

// Shortest cycle through `v` using only vertices of `allowed` (which contains v).
ObserverPath cycle_through(const Graph& g, int v, const std::vector<bool>& allowed) {
    ObserverPath path;
    if (g.has_self_loop(v)) {
        path.states = {v, v};
        path.events = {g.symbol(v, v)};
        return path;
    }
    std::vector<int> parent(g.succ.size(), -2);
    std::queue<int> work;
    for (int w : g.succ[static_cast<std::size_t>(v)]) {
        if (!allowed[static_cast<std::size_t>(w)] || parent[static_cast<std::size_t>(w)] != -2) continue;
        parent[static_cast<std::size_t>(w)] = v;
        work.push(w);
    }
    while (!work.empty()) {
        const int u = work.front();
        work.pop();
        for (int w : g.succ[static_cast<std::size_t>(u)]) {
            if (w == v) {
                std::vector<int> rev{u};
                for (int x = u; x != v; x = parent[static_cast<std::size_t>(x)])
                    rev.push_back(parent[static_cast<std::size_t>(x)]);
                std::reverse(rev.begin(), rev.end());  // v ... u
                path.states = rev;
                path.states.push_back(v);
                for (std::size_t i = 0; i + 1 < path.states.size(); ++i)
                    path.events.push_back(g.symbol(path.states[i], path.states[i + 1]));
                return path;
            }
            if (!allowed[static_cast<std::size_t>(w)] || parent[static_cast<std::size_t>(w)] != -2) continue;
            parent[static_cast<std::size_t>(w)] = u;
            work.push(w);
        }
    }
    throw std::logic_error("no cycle through a vertex that was reported cyclic");
}

std::vector<bool> allow_all(const ObserverDfa& obs) {
    return std::vector<bool>(static_cast<std::size_t>(obs.num_states()), true);
}

std::vector<bool> to_mask(const ObserverDfa& obs, const std::vector<int>& vertices) {
    std::vector<bool> mask(static_cast<std::size_t>(obs.num_states()), false);
    for (int v : vertices) mask[static_cast<std::size_t>(v)] = true;
    return mask;
}

}  // namespace

PropertyVerdict check_strong(const ObserverDfa& obs) {
    const Graph g(obs);
    std::vector<int> sources;
    for (const auto& component : strongly_connected_components(g, allow_all(obs)))
        if (component_has_cycle(g, component))
            sources.insert(sources.end(), component.begin(), component.end());
    std::sort(sources.begin(), sources.end());

    // Forward reachability from every state on a cycle.
    std::vector<int> parent(static_cast<std::size_t>(obs.num_states()), -2);
    std::queue<int> work;
    for (int s : sources) {
        parent[static_cast<std::size_t>(s)] = -1;
        work.push(s);
    }
    int offender = -1;
    while (!work.empty() && offender < 0) {
        const int u = work.front();
        work.pop();
        if (!obs.marked[static_cast<std::size_t>(u)]) {
            offender = u;
            break;
        }
        for (int w : g.succ[static_cast<std::size_t>(u)]) {
            if (parent[static_cast<std::size_t>(w)] != -2) continue;
            parent[static_cast<std::size_t>(w)] = u;
            work.push(w);
        }
    }
    if (offender < 0) return {true, std::nullopt};

    // Path back to some cycle state, then the cycle at its head.
    std::vector<int> rev{offender};
    for (int x = offender; parent[static_cast<std::size_t>(x)] != -1; x = parent[static_cast<std::size_t>(x)])
        rev.push_back(parent[static_cast<std::size_t>(x)]);
    std::reverse(rev.begin(), rev.end());
    PropertyWitness witness;
    witness.path.states = rev;
    for (std::size_t i = 0; i + 1 < rev.size(); ++i)
        witness.path.events.push_back(g.symbol(rev[i], rev[i + 1]));
    const int head = rev.front();
    for (const auto& component : strongly_connected_components(g, allow_all(obs))) {
        if (std::binary_search(component.begin(), component.end(), head) &&
            component_has_cycle(g, component)) {
            witness.cycle = cycle_through(g, head, to_mask(obs, component));
            break;
        }
    }
    return {false, std::move(witness)};
}

PropertyVerdict check_weak(const ObserverDfa& obs) {
    const Graph g(obs);
    std::vector<bool> marked_only(static_cast<std::size_t>(obs.num_states()));
    for (int s = 0; s < obs.num_states(); ++s) marked_only[static_cast<std::size_t>(s)] = obs.marked[static_cast<std::size_t>(s)];
    for (const auto& component : strongly_connected_components(g, marked_only)) {
        // A self-loop edge inside the induced subgraph needs no allowed check:
        // both endpoints coincide.
        if (component.size() >= 2 || g.has_self_loop(component.front())) {
            PropertyWitness witness;
            witness.cycle = cycle_through(g, component.front(), to_mask(obs, component));
            return {true, std::move(witness)};
        }
    }
    return {false, std::nullopt};
}

PropertyVerdict check_periodically_strong(const ObserverDfa& obs) {
    const Graph g(obs);
    std::vector<bool> unmarked_only(static_cast<std::size_t>(obs.num_states()));
    for (int s = 0; s < obs.num_states(); ++s)
        unmarked_only[static_cast<std::size_t>(s)] = !obs.marked[static_cast<std::size_t>(s)];
    for (const auto& component : strongly_connected_components(g, unmarked_only)) {
        if (component.size() >= 2 || g.has_self_loop(component.front())) {
            PropertyWitness witness;
            witness.cycle = cycle_through(g, component.front(), to_mask(obs, component));
            return {false, std::move(witness)};
        }
    }
    return {true, std::nullopt};
}

PropertyVerdict check_periodically_weak(const ObserverDfa& obs) {
    const Graph g(obs);
    for (const auto& component : strongly_connected_components(g, allow_all(obs))) {
        if (!component_has_cycle(g, component)) continue;
        for (int v : component) {
            if (!obs.marked[static_cast<std::size_t>(v)]) continue;
            PropertyWitness witness;
            witness.cycle = cycle_through(g, v, to_mask(obs, component));
            return {true, std::move(witness)};
        }
    }
    return {false, std::nullopt};
}

Verdict check_all(const ObserverDfa& obs) {
    Verdict verdict;
    verdict.strong = check_strong(obs);
    verdict.weak = check_weak(obs);
    verdict.periodically_strong = check_periodically_strong(obs);
    verdict.periodically_weak = check_periodically_weak(obs);
    return verdict;
}

CycleEnumeration classify_cycles(const ObserverDfa& obs, std::size_t cycle_budget) {
    const Graph g(obs);
    const int n = obs.num_states();
    CycleEnumeration out;

    // Johnson's elementary-circuit enumeration, one start vertex at a time.
    std::vector<bool> blocked(static_cast<std::size_t>(n));
    std::vector<std::set<int>> blocked_by(static_cast<std::size_t>(n));
    std::vector<int> stack;

    auto unblock = [&](auto&& self, int v) -> void {
        blocked[static_cast<std::size_t>(v)] = false;
        auto pending = std::move(blocked_by[static_cast<std::size_t>(v)]);
        blocked_by[static_cast<std::size_t>(v)].clear();
        for (int w : pending)
            if (blocked[static_cast<std::size_t>(w)]) self(self, w);
    };

    auto emit = [&](const std::vector<int>& states) {
        CycleClassification c;
        c.cycle.states = states;
        c.cycle.states.push_back(states.front());
        for (std::size_t i = 0; i + 1 < c.cycle.states.size(); ++i)
            c.cycle.events.push_back(g.symbol(c.cycle.states[i], c.cycle.states[i + 1]));
        bool all = true, any = false;
        for (int v : states) {
            all = all && obs.marked[static_cast<std::size_t>(v)];
            any = any || obs.marked[static_cast<std::size_t>(v)];
        }
        c.kind = all ? CycleKind::Unambiguous
                     : (any ? CycleKind::SemiUnambiguous : CycleKind::Ambiguous);
        out.cycles.push_back(std::move(c));
    };

    for (int start = 0; start < n && out.complete; ++start) {
        // Restrict to the SCC of `start` among vertices >= start.
        std::vector<bool> eligible(static_cast<std::size_t>(n), false);
        for (int v = start; v < n; ++v) eligible[static_cast<std::size_t>(v)] = true;
        std::vector<bool> in_scc(static_cast<std::size_t>(n), false);
        for (const auto& component : strongly_connected_components(g, eligible))
            if (std::binary_search(component.begin(), component.end(), start)) {
                for (int v : component) in_scc[static_cast<std::size_t>(v)] = true;
                break;
            }

        for (int v = 0; v < n; ++v) {
            blocked[static_cast<std::size_t>(v)] = false;
            blocked_by[static_cast<std::size_t>(v)].clear();
        }

        auto circuit = [&](auto&& self, int v) -> bool {
            bool found = false;
            stack.push_back(v);
            blocked[static_cast<std::size_t>(v)] = true;
            for (int w : g.succ[static_cast<std::size_t>(v)]) {
                if (!in_scc[static_cast<std::size_t>(w)]) continue;
                if (w == start) {
                    if (out.cycles.size() >= cycle_budget) {
                        out.complete = false;
                        break;
                    }
                    emit(stack);
                    found = true;
                } else if (!blocked[static_cast<std::size_t>(w)]) {
                    if (self(self, w)) found = true;
                    if (!out.complete) break;
                }
            }
            if (found)
                unblock(unblock, v);
            else
                for (int w : g.succ[static_cast<std::size_t>(v)])
                    if (in_scc[static_cast<std::size_t>(w)]) blocked_by[static_cast<std::size_t>(w)].insert(v);
            stack.pop_back();
            return found;
        };
        if (in_scc[static_cast<std::size_t>(start)]) circuit(circuit, start);
    }
    return out;
}

namespace {

void assert_implication_lattice(const Verdict& v) {
    const bool ok = (!v.strong.holds || v.weak.holds) && (!v.strong.holds || v.periodically_strong.holds) &&
                    (!v.weak.holds || v.periodically_weak.holds) &&
                    (!v.periodically_strong.holds || v.periodically_weak.holds);
    if (!ok) throw std::logic_error("detectability implication lattice violated");
}

std::string render_verdict(const Verdict& v) {
    std::ostringstream os;
    os << "(strong " << (v.strong.holds ? "T" : "F") << ", weak " << (v.weak.holds ? "T" : "F")
       << ", periodically-strong " << (v.periodically_strong.holds ? "T" : "F")
       << ", periodically-weak " << (v.periodically_weak.holds ? "T" : "F") << ")";
    return os.str();
}

}  // namespace

VerifyOutcome verify_all(const LabeledPetriNet& net, const CrucialSet& crucial,
                         const VerifyOptions& options) {
    using clock = std::chrono::steady_clock;
    VerifyOutcome outcome;
    auto timed = [&](const char* stage, auto&& body) {
        const auto before = clock::now();
        body();
        outcome.stage_ms.emplace_back(
            stage, std::chrono::duration<double, std::milli>(clock::now() - before).count());
    };

    timed("assumptions", [&] {
        require_tu_acyclic(net);
        outcome.rg = build_rg(net, options.max_states);
        const DeadlockCheck dl = check_deadlock_free(net, outcome.rg);
        outcome.deadlock_free = dl.deadlock_free;
        outcome.deadlock_witness = dl.witness;
        if (!dl.deadlock_free && !options.allow_deadlock) {
            std::ostringstream os;
            os << "net is not deadlock free; rerun allowing deadlocks to proceed anyway";
            throw NotDeadlockFreeError(os.str(), dl.witness->tokens);
        }
    });
    timed("basis", [&] { outcome.brg = build_brg(net, crucial); });
    timed("observer", [&] { outcome.observer = build_observer(outcome.brg, options.observer_budget); });
    timed("checks", [&] { outcome.verdict = check_all(outcome.observer); });
    // The lattice is a theorem only when every observation can be extended,
    // i.e. every observer state has a successor. Deadlocks (when tolerated)
    // and zero-effect-only silent behavior void that premise.
    bool every_state_extends = true;
    for (const auto& row : outcome.observer.next) {
        bool any = false;
        for (int v : row) any = any || v >= 0;
        every_state_extends = every_state_extends && any;
    }
    if (outcome.deadlock_free && every_state_extends) assert_implication_lattice(outcome.verdict);

    if (options.with_oracle) {
        timed("oracle", [&] {
            outcome.oracle_observer = rg_observer(net, outcome.rg, crucial, options.observer_budget);
            outcome.oracle_verdict = oracle_verify_all(*outcome.oracle_observer);
        });
        if (!outcome.verdict.same_outcome(*outcome.oracle_verdict)) {
            throw std::logic_error("basis and reachability-graph routes disagree: basis " +
                                   render_verdict(outcome.verdict) + " vs oracle " +
                                   render_verdict(*outcome.oracle_verdict));
        }
    }
    return outcome;
}

Verdict oracle_verify_all(const OracleObserver& observer) {
    return check_all(observer);
}

}  // namespace cdetect
