#include "cdetect/io.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

namespace cdetect {

namespace {

struct Line {
    int number = 0;
    std::string key;
    std::vector<std::string> values;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    std::ostringstream os;
    os << "line " << line << ": " << msg;
    throw ParseError(os.str(), line);
}

std::vector<Line> tokenize_document(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::string first;
        if (!(ls >> first)) continue;
        Line line;
        line.number = number;
        if (first.back() == ':') {
            line.key = first.substr(0, first.size() - 1);
        } else if (auto colon = first.find(':'); colon != std::string::npos) {
            line.key = first.substr(0, colon);
            line.values.push_back(first.substr(colon + 1));
        } else {
            fail(number, "expected `key: values...`, got '" + first + "'");
        }
        std::string token;
        while (ls >> token) line.values.push_back(token);
        lines.push_back(std::move(line));
    }
    return lines;
}

int parse_count(const Line& line, const std::string& text) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(text, &used);
        if (used != text.size()) fail(line.number, "trailing characters in number '" + text + "'");
        return value;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        fail(line.number, "not a number: '" + text + "'");
    }
}

}  // namespace

LabeledPetriNet parse_net(const std::string& text) {
    LabeledPetriNet net;
    std::map<std::string, int> place_ids;
    bool have_places = false;
    bool have_initial = false;
    std::vector<int> initial_tokens;

    struct PendingTransition {
        std::string name;
        std::string label;
        std::map<int, int> pre, post;
        bool have_label = false, have_pre = false, have_post = false;
        int line = 0;
    };
    std::vector<PendingTransition> pending;

    auto parse_arcs = [&](const Line& line, std::map<int, int>& arcs) {
        for (const auto& entry : line.values) {
            std::string name = entry;
            int count = 1;
            if (auto star = entry.find('*'); star != std::string::npos) {
                name = entry.substr(0, star);
                count = parse_count(line, entry.substr(star + 1));
            }
            if (count < 1) fail(line.number, "arc multiplicity must be at least 1");
            auto it = place_ids.find(name);
            if (it == place_ids.end()) fail(line.number, "undeclared place '" + name + "'");
            arcs[it->second] += count;
        }
    };

    for (const Line& line : tokenize_document(text)) {
        if (line.key == "places") {
            if (have_places) fail(line.number, "places declared twice");
            have_places = true;
            for (const auto& name : line.values) {
                if (!place_ids.emplace(name, static_cast<int>(net.places.size())).second)
                    fail(line.number, "duplicate place name '" + name + "'");
                net.places.push_back(name);
            }
            if (net.places.empty()) fail(line.number, "a net needs at least one place");
            initial_tokens.assign(net.places.size(), 0);
        } else if (line.key == "initial") {
            if (!have_places) fail(line.number, "places must be declared before the initial marking");
            if (have_initial) fail(line.number, "initial marking declared twice");
            have_initial = true;
            for (const auto& entry : line.values) {
                std::string name = entry;
                int count = 1;
                if (auto eq = entry.find('='); eq != std::string::npos) {
                    name = entry.substr(0, eq);
                    count = parse_count(line, entry.substr(eq + 1));
                }
                if (count < 0) fail(line.number, "token counts are non-negative");
                auto it = place_ids.find(name);
                if (it == place_ids.end()) fail(line.number, "undeclared place '" + name + "'");
                initial_tokens[static_cast<std::size_t>(it->second)] = count;
            }
        } else if (line.key == "transition") {
            if (!have_places) fail(line.number, "places must be declared before transitions");
            if (line.values.size() != 1) fail(line.number, "expected exactly one transition name");
            for (const auto& t : pending)
                if (t.name == line.values.front())
                    fail(line.number, "duplicate transition name '" + line.values.front() + "'");
            if (place_ids.contains(line.values.front()))
                fail(line.number, "transition name collides with place '" + line.values.front() + "'");
            PendingTransition t;
            t.name = line.values.front();
            t.line = line.number;
            pending.push_back(std::move(t));
        } else if (line.key == "label" || line.key == "pre" || line.key == "post") {
            if (pending.empty()) fail(line.number, "'" + line.key + "' outside a transition block");
            PendingTransition& t = pending.back();
            if (line.key == "label") {
                if (t.have_label) fail(line.number, "label declared twice for '" + t.name + "'");
                if (line.values.size() != 1 || line.values.front().empty())
                    fail(line.number, "label must be a single nonempty symbol");
                t.have_label = true;
                t.label = line.values.front();
            } else if (line.key == "pre") {
                if (t.have_pre) fail(line.number, "pre declared twice for '" + t.name + "'");
                t.have_pre = true;
                parse_arcs(line, t.pre);
            } else {
                if (t.have_post) fail(line.number, "post declared twice for '" + t.name + "'");
                t.have_post = true;
                parse_arcs(line, t.post);
            }
        } else {
            fail(line.number, "unknown key '" + line.key + "'");
        }
    }

    if (!have_places) throw ParseError("net document declares no places", 0);
    if (!have_initial) throw ParseError("net document declares no initial marking", 0);

    const int m = static_cast<int>(net.places.size());
    const int n = static_cast<int>(pending.size());
    net.pre = IntMatrix(m, n);
    net.post = IntMatrix(m, n);
    for (int t = 0; t < n; ++t) {
        const PendingTransition& pt = pending[static_cast<std::size_t>(t)];
        net.transitions.push_back(pt.name);
        net.labels.push_back(pt.label);
        for (auto [p, count] : pt.pre) net.pre.at(p, t) = count;
        for (auto [p, count] : pt.post) net.post.at(p, t) = count;
    }
    net.initial = Marking(std::move(initial_tokens));
    net.validate();
    return net;
}

std::string serialize_net(const LabeledPetriNet& net) {
    std::ostringstream os;
    os << "places:";
    for (const auto& p : net.places) os << ' ' << p;
    os << "\ninitial:";
    for (int p = 0; p < net.num_places(); ++p)
        if (net.initial[static_cast<std::size_t>(p)] > 0)
            os << ' ' << net.places[static_cast<std::size_t>(p)] << '=' << net.initial[static_cast<std::size_t>(p)];
    os << '\n';
    for (int t = 0; t < net.num_transitions(); ++t) {
        os << "transition: " << net.transitions[static_cast<std::size_t>(t)] << '\n';
        if (net.is_observable(t)) os << "label: " << net.labels[static_cast<std::size_t>(t)] << '\n';
        auto arcs = [&](const IntMatrix& matrix, const char* key) {
            bool any = false;
            for (int p = 0; p < net.num_places(); ++p) any = any || matrix.at(p, t) > 0;
            if (!any) return;
            os << key << ':';
            for (int p = 0; p < net.num_places(); ++p) {
                const int count = matrix.at(p, t);
                if (count == 0) continue;
                os << ' ' << net.places[static_cast<std::size_t>(p)];
                if (count > 1) os << '*' << count;
            }
            os << '\n';
        };
        arcs(net.pre, "pre");
        arcs(net.post, "post");
    }
    return os.str();
}

CrucialSet parse_crucial(const std::string& text, int num_places) {
    std::optional<bool> is_gmec;
    std::vector<Marking> markings;
    Gmec gmec;
    std::vector<std::vector<int>> rows;

    for (const Line& line : tokenize_document(text)) {
        if (line.key == "crucial") {
            if (is_gmec.has_value()) fail(line.number, "crucial kind declared twice");
            if (line.values.size() != 1 || (line.values.front() != "explicit" && line.values.front() != "gmec"))
                fail(line.number, "expected `crucial: explicit` or `crucial: gmec`");
            is_gmec = line.values.front() == "gmec";
        } else if (line.key == "marking") {
            if (!is_gmec.has_value() || *is_gmec) fail(line.number, "'marking' only belongs to explicit sets");
            if (static_cast<int>(line.values.size()) != num_places)
                fail(line.number, "marking needs one entry per place");
            std::vector<int> tokens;
            for (const auto& v : line.values) {
                const int count = parse_count(line, v);
                if (count < 0) fail(line.number, "token counts are non-negative");
                tokens.push_back(count);
            }
            markings.emplace_back(std::move(tokens));
        } else if (line.key == "row") {
            if (!is_gmec.has_value() || !*is_gmec) fail(line.number, "'row' only belongs to GMEC sets");
            if (static_cast<int>(line.values.size()) != num_places + 2 ||
                line.values[static_cast<std::size_t>(num_places)] != "<=")
                fail(line.number, "expected `row: <coefficients> <= <bound>`");
            std::vector<int> row;
            for (int p = 0; p < num_places; ++p)
                row.push_back(parse_count(line, line.values[static_cast<std::size_t>(p)]));
            row.push_back(parse_count(line, line.values.back()));
            rows.push_back(std::move(row));
        } else {
            fail(line.number, "unknown key '" + line.key + "'");
        }
    }
    if (!is_gmec.has_value()) throw ParseError("crucial document declares no kind", 0);
    if (!*is_gmec) return CrucialSet::explicit_set(std::move(markings));

    gmec.w = IntMatrix(static_cast<int>(rows.size()), num_places);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (int p = 0; p < num_places; ++p) gmec.w.at(static_cast<int>(r), p) = rows[r][static_cast<std::size_t>(p)];
        gmec.k.push_back(rows[r].back());
    }
    return CrucialSet::gmec_set(std::move(gmec));
}

std::string serialize_crucial(const CrucialSet& crucial) {
    std::ostringstream os;
    if (crucial.is_explicit()) {
        os << "crucial: explicit\n";
        for (const auto& m : crucial.markings()) {
            os << "marking:";
            for (int v : m.tokens) os << ' ' << v;
            os << '\n';
        }
    } else {
        os << "crucial: gmec\n";
        const Gmec& g = crucial.gmec();
        for (int r = 0; r < g.num_rows(); ++r) {
            os << "row:";
            for (int p = 0; p < g.w.cols; ++p) os << ' ' << g.w.at(r, p);
            os << " <= " << g.k[static_cast<std::size_t>(r)] << '\n';
        }
    }
    return os.str();
}

std::string format_marking_vector(const Marking& m) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) os << ' ';
        os << m.tokens[i];
    }
    os << ']';
    return os.str();
}

std::string format_marking_map(const LabeledPetriNet& net, const Marking& m) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int p = 0; p < net.num_places(); ++p) {
        if (m[static_cast<std::size_t>(p)] == 0) continue;
        if (!first) os << ' ';
        first = false;
        os << net.places[static_cast<std::size_t>(p)] << ':' << m[static_cast<std::size_t>(p)];
    }
    os << '}';
    return os.str();
}

Marking parse_marking_vector(const std::string& text, int num_places) {
    std::string cleaned = text;
    for (char& c : cleaned)
        if (c == ',' || c == '[' || c == ']') c = ' ';
    std::istringstream in(cleaned);
    std::vector<int> tokens;
    int value = 0;
    while (in >> value) {
        if (value < 0) throw ParseError("token counts are non-negative", 0);
        tokens.push_back(value);
    }
    if (!in.eof()) throw ParseError("invalid marking vector '" + text + "'", 0);
    if (static_cast<int>(tokens.size()) != num_places)
        throw ParseError("marking vector needs one entry per place", 0);
    return Marking(std::move(tokens));
}

std::vector<std::string> parse_word(const std::string& text, const std::vector<std::string>& alphabet) {
    auto known = [&](const std::string& s) {
        return std::find(alphabet.begin(), alphabet.end(), s) != alphabet.end();
    };
    std::string cleaned = text;
    for (char& c : cleaned)
        if (c == ',') c = ' ';
    std::istringstream in(cleaned);
    std::vector<std::string> word;
    std::string token;
    while (in >> token) {
        if (known(token)) {
            word.push_back(token);
            continue;
        }
        // Split a compact token like "bab" into known one-character symbols.
        std::vector<std::string> split;
        for (char c : token) split.emplace_back(1, c);
        for (const auto& s : split)
            if (!known(s)) throw ParseError("unknown event symbol '" + token + "'", 0);
        word.insert(word.end(), split.begin(), split.end());
    }
    return word;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string basis_member_label(const BasisGraph& brg, int id) {
    const BasisNode& node = brg.nodes[static_cast<std::size_t>(id)];
    std::ostringstream os;
    os << format_marking_vector(node.marking) << " alpha=" << node.alpha << " beta=" << node.beta;
    return os.str();
}

std::string observer_dot(const std::vector<std::string>& labels, const ObserverDfa& obs) {
    std::ostringstream os;
    os << "digraph observer {\n  rankdir=LR;\n  node [shape=circle];\n";
    if (obs.num_states() > 0) {
        for (int s = 0; s < obs.num_states(); ++s) {
            os << "  s" << s << " [label=\"" << dot_escape(labels[static_cast<std::size_t>(s)]) << '"';
            if (obs.marked[static_cast<std::size_t>(s)]) os << " shape=doublecircle";
            os << "];\n";
        }
        os << "  init [shape=point label=\"\"];\n  init -> s" << obs.initial << ";\n";
        for (int s = 0; s < obs.num_states(); ++s)
            for (std::size_t a = 0; a < obs.alphabet.size(); ++a)
                if (const int v = obs.next[static_cast<std::size_t>(s)][a]; v >= 0)
                    os << "  s" << s << " -> s" << v << " [label=\"" << dot_escape(obs.alphabet[a]) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace

std::string export_dot(const LabeledPetriNet& net, const ReachabilityGraph& rg) {
    std::ostringstream os;
    os << "digraph reachability {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (int u = 0; u < rg.num_nodes(); ++u)
        os << "  s" << u << " [label=\"" << dot_escape(format_marking_vector(rg.nodes[static_cast<std::size_t>(u)]))
           << "\"];\n";
    if (rg.num_nodes() > 0) os << "  init [shape=point label=\"\"];\n  init -> s" << rg.initial << ";\n";
    for (int u = 0; u < rg.num_nodes(); ++u) {
        for (auto [t, v] : rg.edges[static_cast<std::size_t>(u)]) {
            os << "  s" << u << " -> s" << v << " [label=\""
               << dot_escape(net.transitions[static_cast<std::size_t>(t)]);
            if (net.is_observable(t)) os << ':' << dot_escape(net.labels[static_cast<std::size_t>(t)]);
            os << '"';
            if (!net.is_observable(t)) os << " style=dashed";
            os << "];\n";
        }
    }
    os << "}\n";
    return os.str();
}

std::string export_dot(const LabeledPetriNet&, const BasisGraph& brg) {
    std::ostringstream os;
    os << "digraph basis {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (int u = 0; u < brg.num_nodes(); ++u)
        os << "  s" << u << " [label=\"" << dot_escape(basis_member_label(brg, u)) << "\"];\n";
    if (brg.num_nodes() > 0) os << "  init [shape=point label=\"\"];\n  init -> s" << brg.initial << ";\n";
    for (const auto& edge : brg.edges)
        os << "  s" << edge.from << " -> s" << edge.to << " [label=\"" << dot_escape(edge.symbol) << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string export_dot(const LabeledPetriNet&, const BasisGraph& brg, const ObserverDfa& obs) {
    std::vector<std::string> labels;
    for (const auto& state : obs.states) {
        std::ostringstream os;
        for (std::size_t i = 0; i < state.size(); ++i) {
            if (i) os << "\\n";
            os << basis_member_label(brg, state[i]);
        }
        labels.push_back(os.str());
    }
    return observer_dot(labels, obs);
}

std::string export_dot(const LabeledPetriNet&, const ReachabilityGraph& rg, const ObserverDfa& obs) {
    std::vector<std::string> labels;
    for (const auto& state : obs.states) {
        std::ostringstream os;
        for (std::size_t i = 0; i < state.size(); ++i) {
            if (i) os << ' ';
            os << format_marking_vector(rg.nodes[static_cast<std::size_t>(state[i])]);
        }
        labels.push_back(os.str());
    }
    return observer_dot(labels, obs);
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json marking_map_json(const LabeledPetriNet& net, const Marking& m) {
    ordered_json out = ordered_json::object();
    for (int p = 0; p < net.num_places(); ++p)
        if (m[static_cast<std::size_t>(p)] != 0)
            out[net.places[static_cast<std::size_t>(p)]] = m[static_cast<std::size_t>(p)];
    return out;
}

ordered_json observer_state_json(const LabeledPetriNet& net, const BasisGraph& brg,
                                 const ObserverDfa& obs, int state) {
    ordered_json members = ordered_json::array();
    for (int id : obs.states[static_cast<std::size_t>(state)]) {
        const BasisNode& node = brg.nodes[static_cast<std::size_t>(id)];
        members.push_back(ordered_json{{"marking", marking_map_json(net, node.marking)},
                                       {"alpha", node.alpha},
                                       {"beta", node.beta}});
    }
    return members;
}

ordered_json path_json(const LabeledPetriNet& net, const BasisGraph& brg, const ObserverDfa& obs,
                       const ObserverPath& path) {
    ordered_json states = ordered_json::array();
    for (int s : path.states) states.push_back(observer_state_json(net, brg, obs, s));
    return ordered_json{{"states", states}, {"events", path.events}};
}

ordered_json property_json(const LabeledPetriNet& net, const BasisGraph& brg, const ObserverDfa& obs,
                           const PropertyVerdict& verdict) {
    ordered_json out{{"holds", verdict.holds}};
    if (verdict.witness) {
        ordered_json witness = ordered_json::object();
        if (!verdict.witness->cycle.empty()) witness["cycle"] = path_json(net, brg, obs, verdict.witness->cycle);
        if (!verdict.witness->path.empty()) witness["path"] = path_json(net, brg, obs, verdict.witness->path);
        out["witness"] = witness;
    }
    return out;
}

}  // namespace

std::string verdict_report(const LabeledPetriNet& net, const CrucialSet& crucial,
                           const VerifyOutcome& outcome) {
    ordered_json report;
    report["net"] = {{"places", net.num_places()},
                     {"transitions", net.num_transitions()},
                     {"unobservable", static_cast<int>(net.unobservable_transitions().size())},
                     {"alphabet", net.alphabet()}};
    report["crucial"] = {{"kind", crucial.is_explicit() ? "explicit" : "gmec"},
                         {"size", crucial.is_explicit() ? crucial.markings().size()
                                                        : static_cast<std::size_t>(crucial.gmec().num_rows())}};
    report["assumptions"] = {{"tu_acyclic", true},
                             {"bounded", true},
                             {"reachable_markings", outcome.rg.num_nodes()},
                             {"max_tokens", outcome.rg.max_tokens()},
                             {"deadlock_free", outcome.deadlock_free}};
    if (!outcome.deadlock_free && outcome.deadlock_witness)
        report["assumptions"]["deadlock_witness"] = marking_map_json(net, *outcome.deadlock_witness);
    report["basis"] = {{"markings", outcome.brg.num_nodes()},
                       {"edges", outcome.brg.edges.size()}};
    int marked_states = 0;
    for (bool b : outcome.observer.marked) marked_states += b ? 1 : 0;
    report["observer"] = {{"states", outcome.observer.num_states()}, {"marked_states", marked_states}};
    report["properties"] = {
        {"strong", property_json(net, outcome.brg, outcome.observer, outcome.verdict.strong)},
        {"weak", property_json(net, outcome.brg, outcome.observer, outcome.verdict.weak)},
        {"periodically_strong",
         property_json(net, outcome.brg, outcome.observer, outcome.verdict.periodically_strong)},
        {"periodically_weak",
         property_json(net, outcome.brg, outcome.observer, outcome.verdict.periodically_weak)}};
    if (outcome.oracle_verdict) {
        report["oracle"] = {{"observer_states", outcome.oracle_observer->num_states()},
                            {"verdict",
                             {{"strong", outcome.oracle_verdict->strong.holds},
                              {"weak", outcome.oracle_verdict->weak.holds},
                              {"periodically_strong", outcome.oracle_verdict->periodically_strong.holds},
                              {"periodically_weak", outcome.oracle_verdict->periodically_weak.holds}}},
                            {"agrees", outcome.verdict.same_outcome(*outcome.oracle_verdict)}};
    }
    ordered_json timing = ordered_json::object();
    for (const auto& [stage, ms] : outcome.stage_ms) timing[stage] = ms;
    report["timing_ms"] = timing;
    return report.dump(2) + "\n";
}

}  // namespace cdetect
