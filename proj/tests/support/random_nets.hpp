#pragma once

// Seeded generator of small bounded, deadlock-free labeled Petri nets with an
// acyclic unobservable subnet, plus random explicit crucial sets. Used by the
// property tests and the acceptance suite.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cdetect/crucial.hpp"
#include "cdetect/net.hpp"
#include "cdetect/reachability.hpp"

namespace random_nets {

using cdetect::CrucialSet;
using cdetect::IntMatrix;
using cdetect::LabeledPetriNet;
using cdetect::Marking;
using cdetect::ReachabilityGraph;

struct Limits {
    int max_places = 6;
    int max_transitions = 8;
    int max_tokens = 3;       // per-place bound over the whole reachability set
    int max_rg_nodes = 400;
};

struct Case {
    LabeledPetriNet net;
    ReachabilityGraph rg;
    CrucialSet crucial;
};

inline std::optional<LabeledPetriNet> try_generate(std::mt19937& rng, const Limits& limits) {
    std::uniform_int_distribution<int> place_count(2, limits.max_places);
    const int m = place_count(rng);
    std::uniform_int_distribution<int> transition_count(std::min(m, limits.max_transitions),
                                                        limits.max_transitions);
    const int n = transition_count(rng);

    LabeledPetriNet net;
    for (int p = 0; p < m; ++p) net.places.push_back("p" + std::to_string(p + 1));
    net.pre = IntMatrix(m, n);
    net.post = IntMatrix(m, n);
    std::uniform_int_distribution<int> place_pick(0, m - 1);
    std::uniform_int_distribution<int> arc_count(1, 2);
    std::uniform_int_distribution<int> pattern_pick(0, 99);
    std::uniform_int_distribution<int> label_pick(0, 4);
    for (int t = 0; t < n; ++t) {
        net.transitions.push_back("t" + std::to_string(t + 1));
        if (t < std::min(m, n)) {
            // Cycle skeleton over all places: tokens can always keep moving,
            // which gets many more drafts past the deadlock gate.
            net.pre.at(t, t) = 1;
            net.post.at((t + 1) % m, t) = 1;
        } else {
            // Extra transitions: mostly token-conserving, sometimes draining
            // or forking. Nothing is a pure source, so a fork either stays
            // bounded or is caught by the boundedness gate.
            const int ins = arc_count(rng);
            const int pattern = pattern_pick(rng);
            int outs = ins;
            if (pattern < 25) outs = ins - 1;
            else if (pattern < 45) outs = ins + 1;
            for (int i = 0; i < ins; ++i) net.pre.at(place_pick(rng), t) += 1;
            for (int i = 0; i < outs; ++i) net.post.at(place_pick(rng), t) += 1;
        }
        switch (label_pick(rng)) {
            case 0:
            case 1: net.labels.emplace_back("a"); break;
            case 2:
            case 3: net.labels.emplace_back("b"); break;
            default: net.labels.emplace_back(); break;
        }
    }

    std::vector<int> tokens(static_cast<std::size_t>(m), 0);
    std::uniform_int_distribution<int> token_budget(1, 4);
    const int budget = token_budget(rng);
    for (int i = 0; i < budget; ++i) ++tokens[static_cast<std::size_t>(place_pick(rng))];
    net.initial = Marking(std::move(tokens));

    if (net.unobservable_transitions().empty()) return std::nullopt;
    if (net.observable_transitions().empty()) return std::nullopt;
    if (!cdetect::check_tu_acyclic(net).acyclic) return std::nullopt;
    return net;
}

/// Keeps drawing until a net passes every structural gate.
inline Case generate(std::mt19937& rng, const Limits& limits = {}) {
    for (;;) {
        auto net = try_generate(rng, limits);
        if (!net) continue;
        ReachabilityGraph rg;
        try {
            rg = cdetect::build_rg(*net, limits.max_rg_nodes);
        } catch (const cdetect::Error&) {
            continue;  // unbounded or too large
        }
        if (rg.num_nodes() < 2) continue;
        if (rg.max_tokens() > limits.max_tokens) continue;
        if (!cdetect::check_deadlock_free(*net, rg).deadlock_free) continue;

        // Random explicit crucial set over the reachable markings.
        std::vector<Marking> crucial;
        std::bernoulli_distribution pick(0.3);
        for (const auto& marking : rg.nodes)
            if (pick(rng)) crucial.push_back(marking);
        if (crucial.empty()) crucial.push_back(rg.nodes[rg.nodes.size() / 2]);

        Case out;
        out.net = std::move(*net);
        out.rg = std::move(rg);
        out.crucial = CrucialSet::explicit_set(std::move(crucial));
        return out;
    }
}

inline std::vector<Case> corpus(std::uint32_t seed, std::size_t count, const Limits& limits = {}) {
    std::mt19937 rng(seed);
    std::vector<Case> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(generate(rng, limits));
    return out;
}

}  // namespace random_nets
