#pragma once

// Shared fixture nets. loop_net is a three-place loop with one unobservable
// transition, ring_net a four-place cycle with two unobservable hops, fork_join a
// six-place fork-join whose unobservable part collapses six reachable
// markings onto two basis markings.

#include <string>
#include <vector>

#include "cdetect/crucial.hpp"
#include "cdetect/net.hpp"

namespace fixtures {

using cdetect::CrucialSet;
using cdetect::Gmec;
using cdetect::IntMatrix;
using cdetect::LabeledPetriNet;
using cdetect::Marking;

struct Arc {
    std::string place;
    int count = 1;
};

struct TransitionSpec {
    std::string name;
    std::string label;  // empty = unobservable
    std::vector<Arc> pre, post;
};

inline LabeledPetriNet make_net(std::vector<std::string> places, std::vector<int> initial,
                                std::vector<TransitionSpec> transitions) {
    LabeledPetriNet net;
    net.places = std::move(places);
    const int m = net.num_places();
    const int n = static_cast<int>(transitions.size());
    net.pre = IntMatrix(m, n);
    net.post = IntMatrix(m, n);
    net.initial = Marking(std::move(initial));
    auto place_index = [&](const std::string& name) {
        for (int p = 0; p < m; ++p)
            if (net.places[static_cast<std::size_t>(p)] == name) return p;
        throw cdetect::Error("fixture references unknown place " + name);
    };
    for (int t = 0; t < n; ++t) {
        net.transitions.push_back(transitions[static_cast<std::size_t>(t)].name);
        net.labels.push_back(transitions[static_cast<std::size_t>(t)].label);
        for (const Arc& a : transitions[static_cast<std::size_t>(t)].pre)
            net.pre.at(place_index(a.place), t) += a.count;
        for (const Arc& a : transitions[static_cast<std::size_t>(t)].post)
            net.post.at(place_index(a.place), t) += a.count;
    }
    net.validate();
    return net;
}

// Self-loop a on p1, b into a two-place loop closed by an unobservable hop.
inline LabeledPetriNet loop_net() {
    return make_net({"p1", "p2", "p3"}, {1, 0, 0},
                    {
                        {"t1", "a", {{"p1"}}, {{"p1"}}},
                        {"t2", "b", {{"p1"}}, {{"p2"}}},
                        {"t3", "", {{"p2"}}, {{"p3"}}},
                        {"t4", "b", {{"p3"}}, {{"p2"}}},
                    });
}

// Four-place cycle: silent hop, a back, b forward, silent hop, a back.
inline LabeledPetriNet ring_net() {
    return make_net({"p1", "p2", "p3", "p4"}, {1, 0, 0, 0},
                    {
                        {"u1", "", {{"p1"}}, {{"p2"}}},
                        {"t1", "a", {{"p2"}}, {{"p1"}}},
                        {"t2", "b", {{"p2"}}, {{"p3"}}},
                        {"u2", "", {{"p3"}}, {{"p4"}}},
                        {"t3", "a", {{"p4"}}, {{"p1"}}},
                    });
}

// Fork-join: a splits one token into two silent chains that rejoin; the
// joined token returns via b or silently.
inline LabeledPetriNet fork_join() {
    return make_net({"p1", "p2", "p3", "p4", "p5", "p6"}, {1, 0, 0, 0, 0, 0},
                    {
                        {"t1", "a", {{"p1"}}, {{"p2"}, {"p3"}}},
                        {"t2", "", {{"p2"}}, {{"p4"}}},
                        {"t3", "", {{"p3"}}, {{"p5"}}},
                        {"t4", "", {{"p4"}, {"p5"}}, {{"p6"}}},
                        {"t5", "b", {{"p6"}}, {{"p1"}}},
                        {"t6", "", {{"p6"}}, {{"p1"}}},
                    });
}

inline Marking marking(std::vector<int> tokens) { return Marking(std::move(tokens)); }

inline CrucialSet explicit_crucial(std::vector<std::vector<int>> markings) {
    std::vector<Marking> set;
    for (auto& m : markings) set.emplace_back(std::move(m));
    return CrucialSet::explicit_set(std::move(set));
}

/// Single-row GMEC: coefficients * M <= bound.
inline CrucialSet gmec_crucial(std::vector<int> coefficients, int bound) {
    Gmec g;
    g.w = IntMatrix(1, static_cast<int>(coefficients.size()));
    for (int p = 0; p < g.w.cols; ++p) g.w.at(0, p) = coefficients[static_cast<std::size_t>(p)];
    g.k = {bound};
    return CrucialSet::gmec_set(std::move(g));
}

/// M(p1) >= 1 over six places, as in the GMEC run on fork_join.
inline CrucialSet fork_join_gmec() { return gmec_crucial({-1, 0, 0, 0, 0, 0}, -1); }

inline std::string loop_document() {
    return "# three places, self-loop a on p1\n"
           "places: p1 p2 p3\n"
           "initial: p1=1\n"
           "transition: t1\n"
           "label: a\n"
           "pre: p1\n"
           "post: p1\n"
           "transition: t2\n"
           "label: b\n"
           "pre: p1\n"
           "post: p2\n"
           "transition: t3\n"
           "pre: p2\n"
           "post: p3\n"
           "transition: t4\n"
           "label: b\n"
           "pre: p3\n"
           "post: p2\n";
}

inline std::string fork_join_document() {
    return "places: p1 p2 p3 p4 p5 p6\n"
           "initial: p1=1\n"
           "transition: t1\n"
           "label: a\n"
           "pre: p1\n"
           "post: p2 p3\n"
           "transition: t2\n"
           "pre: p2\n"
           "post: p4\n"
           "transition: t3\n"
           "pre: p3\n"
           "post: p5\n"
           "transition: t4\n"
           "pre: p4 p5\n"
           "post: p6\n"
           "transition: t5\n"
           "label: b\n"
           "pre: p6\n"
           "post: p1\n"
           "transition: t6\n"
           "pre: p6\n"
           "post: p1\n";
}

inline std::string fork_join_gmec_document() {
    return "crucial: gmec\n"
           "row: -1 0 0 0 0 0 <= -1\n";
}

inline std::string fork_join_m0_document() {
    return "crucial: explicit\n"
           "marking: 1 0 0 0 0 0\n";
}

}  // namespace fixtures
