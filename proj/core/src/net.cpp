#include "cdetect/net.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_set>

namespace cdetect {

namespace {

std::string format_vector(const std::vector<int>& v) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ' ';
        os << v[i];
    }
    os << ']';
    return os.str();
}

}  // namespace

bool Marking::covers(const Marking& other) const {
    if (tokens.size() != other.tokens.size()) return false;
    for (std::size_t i = 0; i < tokens.size(); ++i)
        if (tokens[i] < other.tokens[i]) return false;
    return true;
}

bool Marking::strictly_dominates(const Marking& other) const {
    return covers(other) && tokens != other.tokens;
}

bool ParikhVector::is_zero() const {
    return std::all_of(counts.begin(), counts.end(), [](int c) { return c == 0; });
}

bool ParikhVector::dominated_by(const ParikhVector& other) const {
    if (counts.size() != other.counts.size()) return false;
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i] > other.counts[i]) return false;
    return true;
}

bool UnobservableSubnet::is_isolated(int col) const {
    for (int p = 0; p < pre.rows; ++p)
        if (pre.at(p, col) != 0 || post.at(p, col) != 0) return false;
    return true;
}

std::vector<int> LabeledPetriNet::observable_transitions() const {
    std::vector<int> out;
    for (int t = 0; t < num_transitions(); ++t)
        if (is_observable(t)) out.push_back(t);
    return out;
}

std::vector<int> LabeledPetriNet::unobservable_transitions() const {
    std::vector<int> out;
    for (int t = 0; t < num_transitions(); ++t)
        if (!is_observable(t)) out.push_back(t);
    return out;
}

std::vector<std::string> LabeledPetriNet::alphabet() const {
    std::set<std::string> symbols;
    for (const auto& l : labels)
        if (!l.empty()) symbols.insert(l);
    return {symbols.begin(), symbols.end()};
}

int LabeledPetriNet::transition_index(std::string_view name) const {
    for (int t = 0; t < num_transitions(); ++t)
        if (transitions[static_cast<std::size_t>(t)] == name) return t;
    return -1;
}

void LabeledPetriNet::validate() const {
    const int m = num_places();
    const int n = num_transitions();
    if (pre.rows != m || pre.cols != n || post.rows != m || post.cols != n)
        throw DimensionError("pre/post matrices must both be places x transitions");
    if (static_cast<int>(initial.size()) != m)
        throw DimensionError("initial marking length does not match the number of places");
    if (static_cast<int>(labels.size()) != n)
        throw DimensionError("label list length does not match the number of transitions");
    for (int v : pre.data)
        if (v < 0) throw Error("negative entry in pre matrix");
    for (int v : post.data)
        if (v < 0) throw Error("negative entry in post matrix");
    for (int v : initial.tokens)
        if (v < 0) throw Error("negative token count in initial marking");
    std::unordered_set<std::string> seen;
    for (const auto& p : places)
        if (!seen.insert(p).second) throw Error("duplicate place name: " + p);
    seen.clear();
    for (const auto& t : transitions)
        if (!seen.insert(t).second) throw Error("duplicate transition name: " + t);
}

bool enabled(const LabeledPetriNet& net, const Marking& m, int t) {
    if (t < 0 || t >= net.num_transitions()) throw DimensionError("transition index out of range");
    if (static_cast<int>(m.size()) != net.num_places())
        throw DimensionError("marking length does not match the net");
    for (int p = 0; p < net.num_places(); ++p)
        if (m[static_cast<std::size_t>(p)] < net.pre.at(p, t)) return false;
    return true;
}

Marking fire(const LabeledPetriNet& net, const Marking& m, int t) {
    if (!enabled(net, m, t)) {
        std::ostringstream os;
        os << "transition " << net.transitions[static_cast<std::size_t>(t)]
           << " is not enabled at " << format_vector(m.tokens);
        throw NotEnabledError(os.str(), t, m.tokens, 0);
    }
    Marking out = m;
    for (int p = 0; p < net.num_places(); ++p)
        out.tokens[static_cast<std::size_t>(p)] += net.incidence(p, t);
    return out;
}

Marking fire_sequence(const LabeledPetriNet& net, const Marking& m, std::span<const int> seq) {
    Marking cur = m;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const int t = seq[i];
        if (!enabled(net, cur, t)) {
            std::ostringstream os;
            os << "step " << i << ": transition " << net.transitions[static_cast<std::size_t>(t)]
               << " is not enabled at " << format_vector(cur.tokens);
            throw NotEnabledError(os.str(), t, cur.tokens, i);
        }
        cur = fire(net, cur, t);
    }
    return cur;
}

ParikhVector parikh(const LabeledPetriNet& net, std::span<const int> seq) {
    ParikhVector out;
    out.counts.assign(static_cast<std::size_t>(net.num_transitions()), 0);
    for (int t : seq) {
        if (t < 0 || t >= net.num_transitions())
            throw DimensionError("transition index out of range");
        ++out.counts[static_cast<std::size_t>(t)];
    }
    return out;
}

UnobservableSubnet unobservable_subnet(const LabeledPetriNet& net) {
    UnobservableSubnet sub;
    sub.columns = net.unobservable_transitions();
    const int m = net.num_places();
    const int k = static_cast<int>(sub.columns.size());
    sub.pre = IntMatrix(m, k);
    sub.post = IntMatrix(m, k);
    sub.incidence = IntMatrix(m, k);
    for (int c = 0; c < k; ++c) {
        const int t = sub.columns[static_cast<std::size_t>(c)];
        for (int p = 0; p < m; ++p) {
            sub.pre.at(p, c) = net.pre.at(p, t);
            sub.post.at(p, c) = net.post.at(p, t);
            sub.incidence.at(p, c) = net.incidence(p, t);
        }
    }
    return sub;
}

TuAcyclicity check_tu_acyclic(const LabeledPetriNet& net) {
    // Directed bipartite graph over places and unobservable transitions.
    // Vertices 0..m-1 are places, m+c is subnet column c.
    const UnobservableSubnet sub = unobservable_subnet(net);
    const int m = net.num_places();
    const int k = sub.num_transitions();
    const int v = m + k;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(v));
    for (int c = 0; c < k; ++c) {
        for (int p = 0; p < m; ++p) {
            if (sub.pre.at(p, c) > 0) adj[static_cast<std::size_t>(p)].push_back(m + c);
            if (sub.post.at(p, c) > 0) adj[static_cast<std::size_t>(m + c)].push_back(p);
        }
    }

    enum { White, Grey, Black };
    std::vector<int> color(static_cast<std::size_t>(v), White);
    std::vector<int> parent(static_cast<std::size_t>(v), -1);

    // Iterative DFS; a grey-to-grey edge closes a cycle.
    for (int root = 0; root < v; ++root) {
        if (color[static_cast<std::size_t>(root)] != White) continue;
        std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
        color[static_cast<std::size_t>(root)] = Grey;
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            if (next < adj[static_cast<std::size_t>(u)].size()) {
                const int w = adj[static_cast<std::size_t>(u)][next++];
                if (color[static_cast<std::size_t>(w)] == White) {
                    color[static_cast<std::size_t>(w)] = Grey;
                    parent[static_cast<std::size_t>(w)] = u;
                    stack.push_back({w, 0});
                } else if (color[static_cast<std::size_t>(w)] == Grey) {
                    // Walk back from u to w collecting the cycle.
                    std::vector<int> cycle_vertices{u};
                    for (int x = u; x != w; x = parent[static_cast<std::size_t>(x)])
                        cycle_vertices.push_back(parent[static_cast<std::size_t>(x)]);
                    std::reverse(cycle_vertices.begin(), cycle_vertices.end());
                    TuAcyclicity out;
                    out.acyclic = false;
                    for (int x : cycle_vertices) {
                        if (x < m)
                            out.cycle.push_back(net.places[static_cast<std::size_t>(x)]);
                        else
                            out.cycle.push_back(
                                net.transitions[static_cast<std::size_t>(sub.columns[static_cast<std::size_t>(x - m)])]);
                    }
                    return out;
                }
            } else {
                color[static_cast<std::size_t>(u)] = Black;
                stack.pop_back();
            }
        }
    }
    return {};
}

void require_tu_acyclic(const LabeledPetriNet& net) {
    TuAcyclicity res = check_tu_acyclic(net);
    if (!res.acyclic) {
        std::ostringstream os;
        os << "unobservable subnet has a directed cycle:";
        for (const auto& name : res.cycle) os << ' ' << name;
        throw TuSubnetCyclicError(os.str(), res.cycle);
    }
}

}  // namespace cdetect
