#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "cdetect/basis.hpp"
#include "cdetect/detect.hpp"
#include "cdetect/reachability.hpp"
#include "support/brute.hpp"
#include "support/fixtures.hpp"
#include "support/random_nets.hpp"

using namespace cdetect;
using fixtures::explicit_crucial;
using fixtures::loop_net;
using fixtures::ring_net;
using fixtures::fork_join;
using fixtures::marking;

namespace {

std::set<std::vector<int>> evector_set(const MinimalExplanationSet& exps) {
    std::set<std::vector<int>> out;
    for (const auto& e : exps.items) out.insert(e.evector.counts);
    return out;
}

Marking successor(const LabeledPetriNet& net, const Marking& m, const MinimalExplanation& exp, int t) {
    const auto sub = unobservable_subnet(net);
    Marking out = m;
    for (int c = 0; c < sub.num_transitions(); ++c)
        for (int p = 0; p < sub.num_places(); ++p)
            out.tokens[static_cast<std::size_t>(p)] +=
                sub.incidence.at(p, c) * exp.evector[static_cast<std::size_t>(c)];
    for (int p = 0; p < net.num_places(); ++p)
        out.tokens[static_cast<std::size_t>(p)] += net.incidence(p, t);
    return out;
}

std::set<std::tuple<int, std::string, int>> edge_set(const BasisGraph& brg) {
    std::set<std::tuple<int, std::string, int>> out;
    for (const auto& e : brg.edges) out.emplace(e.from, e.symbol, e.to);
    return out;
}

}  // namespace

TEST_CASE("minimal explanations on loop_net") {
    const auto net = loop_net();
    const Marking m0 = net.initial;
    const Marking m1 = marking({0, 1, 0});

    const auto at_m0 = minimal_explanations(net, m0, 1);  // t2
    REQUIRE(at_m0.size() == 1);
    CHECK(at_m0.items[0].evector.is_zero());
    CHECK(at_m0.items[0].witness.empty());
    CHECK(successor(net, m0, at_m0.items[0], 1) == m1);

    const auto at_m1 = minimal_explanations(net, m1, 3);  // t4 needs t3 once
    REQUIRE(at_m1.size() == 1);
    CHECK(at_m1.items[0].evector.counts == std::vector<int>{1});
    CHECK(at_m1.items[0].witness == std::vector<int>{2});
    CHECK(successor(net, m1, at_m1.items[0], 3) == m1);
}

TEST_CASE("minimal explanations on fork_join") {
    const auto net = fork_join();
    const Marking m1 = marking({0, 1, 1, 0, 0, 0});

    // t5 needs the whole silent chain t2 t3 t4, but not t6.
    const auto exps = minimal_explanations(net, m1, 4);
    REQUIRE(exps.size() == 1);
    CHECK(exps.items[0].evector.counts == std::vector<int>{1, 1, 1, 0});

    // No explanation of t5 at the initial marking.
    CHECK(minimal_explanations(net, net.initial, 4).empty());
}

TEST_CASE("the explanation search fails honestly when tokens can pump forever") {
    // Unbounded net, no explanation: the work budget must cut the search off.
    LabeledPetriNet net;
    net.places = {"p", "q"};
    net.transitions = {"src", "t"};
    net.pre = IntMatrix(2, 2);
    net.post = IntMatrix(2, 2);
    net.post.at(0, 0) = 1;  // src: nothing -> p
    net.pre.at(1, 1) = 1;   // t: q -> q, observable
    net.post.at(1, 1) = 1;
    net.labels = {"", "a"};
    net.initial = marking({0, 0});
    net.validate();
    CHECK_THROWS_AS(minimal_explanations(net, net.initial, 1, 50000), StateBudgetError);
}

TEST_CASE("minimal explanations reject misuse") {
    const auto net = loop_net();
    CHECK_THROWS_AS(minimal_explanations(net, net.initial, 2), Error);  // t3 unobservable
    const auto cyclic = fixtures::make_net({"p", "q"}, {1, 0},
                                           {
                                               {"u1", "", {{"p"}}, {{"q"}}},
                                               {"u2", "", {{"q"}}, {{"p"}}},
                                               {"t", "a", {{"q"}}, {{"q"}}},
                                           });
    CHECK_THROWS_AS(minimal_explanations(cyclic, cyclic.initial, 2), TuSubnetCyclicError);
}

TEST_CASE("a backward conflict yields two minimal explanations") {
    // Two unobservable transitions feed the same place; either one alone
    // explains the observable transition.
    const auto net = fixtures::make_net({"r1", "r2", "q", "s"}, {1, 1, 0, 0},
                                        {
                                            {"u1", "", {{"r1"}}, {{"q"}}},
                                            {"u2", "", {{"r2"}}, {{"q"}}},
                                            {"t", "a", {{"q"}}, {{"s"}}},
                                        });
    const auto exps = minimal_explanations(net, net.initial, 2);
    CHECK(evector_set(exps) == std::set<std::vector<int>>{{1, 0}, {0, 1}});
    CHECK(evector_set(exps) == brute::minimal_explanations(net, net.initial, 2, 8));
}

TEST_CASE("search agrees with brute-force enumeration") {
    auto cases = random_nets::corpus(31337, 20, {.max_places = 5, .max_transitions = 6});
    for (const auto& rc : cases) {
        for (const auto& m : rc.rg.nodes) {
            for (int t : rc.net.observable_transitions()) {
                const auto via_search = evector_set(minimal_explanations(rc.net, m, t));
                const auto via_brute = brute::minimal_explanations(rc.net, m, t, 10);
                CHECK(via_search == via_brute);
            }
        }
    }
}

TEST_CASE("minimal explanations are pairwise incomparable and realizable") {
    auto cases = random_nets::corpus(97, 10, {});
    for (const auto& rc : cases) {
        const auto sub = unobservable_subnet(rc.net);
        for (const auto& m : rc.rg.nodes) {
            for (int t : rc.net.observable_transitions()) {
                const auto exps = minimal_explanations(rc.net, m, t);
                for (const auto& a : exps.items)
                    for (const auto& b : exps.items)
                        if (a.evector != b.evector) CHECK_FALSE(a.evector.dominated_by(b.evector));
                for (const auto& e : exps.items) {
                    // The witness realizes the e-vector and enables t.
                    const Marking reached = fire_sequence(rc.net, m, e.witness);
                    CHECK(enabled(rc.net, reached, t));
                    auto counts = parikh(rc.net, e.witness).counts;
                    for (int c = 0; c < sub.num_transitions(); ++c)
                        CHECK(counts[static_cast<std::size_t>(sub.columns[static_cast<std::size_t>(c)])] ==
                              e.evector[static_cast<std::size_t>(c)]);
                }
            }
        }
    }
}

TEST_CASE("build_brg on fork_join") {
    const auto net = fork_join();
    const auto brg = build_brg(net, explicit_crucial({{1, 0, 0, 0, 0, 0}}));

    REQUIRE(brg.num_nodes() == 2);
    CHECK(brg.nodes[0].marking == net.initial);
    CHECK(brg.nodes[0].alpha == 1);
    CHECK(brg.nodes[0].beta == 0);
    CHECK(brg.nodes[1].marking == marking({0, 1, 1, 0, 0, 0}));
    CHECK(brg.nodes[1].alpha == 1);
    CHECK(brg.nodes[1].beta == 1);

    CHECK(edge_set(brg) == std::set<std::tuple<int, std::string, int>>{
                               {0, "a", 1}, {1, "a", 1}, {1, "b", 0}});

    // Edge witnesses replay as real firing sequences.
    for (const auto& edge : brg.edges) {
        const Marking target =
            fire_sequence(net, brg.nodes[static_cast<std::size_t>(edge.from)].marking, edge.witness);
        CHECK(target == brg.nodes[static_cast<std::size_t>(edge.to)].marking);
        CHECK(net.labels[static_cast<std::size_t>(edge.witness.back())] == edge.symbol);
    }
}

TEST_CASE("build_brg on loop_net") {
    const auto net = loop_net();
    const auto brg = build_brg(net, explicit_crucial({{1, 0, 0}}));
    REQUIRE(brg.num_nodes() == 2);
    CHECK(brg.nodes[0].marking == marking({1, 0, 0}));
    CHECK(brg.nodes[0].alpha == 1);
    CHECK(brg.nodes[0].beta == 0);
    CHECK(brg.nodes[1].marking == marking({0, 1, 0}));
    CHECK(brg.nodes[1].alpha == 0);
    CHECK(brg.nodes[1].beta == 1);
    CHECK(edge_set(brg) == std::set<std::tuple<int, std::string, int>>{
                               {0, "a", 0}, {0, "b", 1}, {1, "b", 1}});
}

TEST_CASE("an all-observable net has a basis graph isomorphic to its reachability graph") {
    auto net = loop_net();
    net.labels[2] = "c";
    const auto rg = build_rg(net);
    const auto brg = build_brg(net, CrucialSet::empty_set());

    REQUIRE(brg.num_nodes() == rg.num_nodes());
    std::set<Marking> basis_markings, reachable;
    for (const auto& node : brg.nodes) {
        basis_markings.insert(node.marking);
        CHECK(node.beta == 0);
    }
    for (const auto& m : rg.nodes) reachable.insert(m);
    CHECK(basis_markings == reachable);

    int rg_edges = 0;
    for (const auto& out : rg.edges) rg_edges += static_cast<int>(out.size());
    CHECK(static_cast<int>(brg.edges.size()) == rg_edges);
}

TEST_CASE("basis markings are reachable markings") {
    auto cases = random_nets::corpus(4242, 15, {});
    for (const auto& rc : cases) {
        const auto brg = build_brg(rc.net, rc.crucial);
        CHECK(brg.num_nodes() <= rc.rg.num_nodes());
        for (const auto& node : brg.nodes) CHECK(rc.rg.node_of(node.marking) >= 0);
    }
}

TEST_CASE("node set does not depend on the transition ordering") {
    const auto net = fork_join();
    LabeledPetriNet reversed;
    reversed.places = net.places;
    reversed.initial = net.initial;
    const int n = net.num_transitions();
    reversed.pre = IntMatrix(net.num_places(), n);
    reversed.post = IntMatrix(net.num_places(), n);
    for (int t = 0; t < n; ++t) {
        const int source = n - 1 - t;
        reversed.transitions.push_back(net.transitions[static_cast<std::size_t>(source)]);
        reversed.labels.push_back(net.labels[static_cast<std::size_t>(source)]);
        for (int p = 0; p < net.num_places(); ++p) {
            reversed.pre.at(p, t) = net.pre.at(p, source);
            reversed.post.at(p, t) = net.post.at(p, source);
        }
    }
    reversed.validate();

    const auto crucial = explicit_crucial({{1, 0, 0, 0, 0, 0}});
    const auto a = build_brg(net, crucial);
    const auto b = build_brg(reversed, crucial);
    std::set<Marking> ma, mb;
    for (const auto& node : a.nodes) ma.insert(node.marking);
    for (const auto& node : b.nodes) mb.insert(node.marking);
    CHECK(ma == mb);
    CHECK(a.edges.size() == b.edges.size());
}

TEST_CASE("update_crucial_flags matches a fresh build") {
    const auto net = fork_join();
    auto brg = build_brg(net, CrucialSet::empty_set());
    CHECK(brg.nodes[0].alpha == 0);
    CHECK(brg.nodes[1].alpha == 0);

    update_crucial_flags(net, brg, fixtures::fork_join_gmec());
    const auto fresh = build_brg(net, fixtures::fork_join_gmec());
    REQUIRE(brg.num_nodes() == fresh.num_nodes());
    for (int i = 0; i < brg.num_nodes(); ++i) {
        CHECK(brg.nodes[static_cast<std::size_t>(i)].alpha == fresh.nodes[static_cast<std::size_t>(i)].alpha);
        CHECK(brg.nodes[static_cast<std::size_t>(i)].beta == fresh.nodes[static_cast<std::size_t>(i)].beta);
    }
    CHECK(edge_set(brg) == edge_set(fresh));
}

TEST_CASE("basis_consistent") {
    const auto net4 = fork_join();
    const auto brg4 = build_brg(net4, CrucialSet::empty_set());
    const auto obs4 = build_observer(brg4);

    const std::vector<std::string> word_b{"b"};
    CHECK(basis_consistent(brg4, obs4, word_b) == std::vector<Marking>{marking({1, 0, 0, 0, 0, 0})});

    std::vector<Marking> all_basis;
    for (const auto& node : brg4.nodes) all_basis.push_back(node.marking);
    std::sort(all_basis.begin(), all_basis.end());
    CHECK(basis_consistent(brg4, obs4, std::vector<std::string>{}) == all_basis);

    const auto net1 = loop_net();
    const auto brg1 = build_brg(net1, CrucialSet::empty_set());
    const auto obs1 = build_observer(brg1);
    const std::vector<std::string> word_a{"a"};
    CHECK(basis_consistent(brg1, obs1, word_a) == std::vector<Marking>{marking({1, 0, 0})});
}

TEST_CASE("consistent_markings_basis equals the oracle") {
    const auto net1 = loop_net();
    const auto rg1 = build_rg(net1);
    const auto brg1 = build_brg(net1, CrucialSet::empty_set());

    const std::vector<std::string> word_b{"b"};
    CHECK(consistent_markings_basis(net1, brg1, word_b) ==
          std::vector<Marking>{marking({0, 0, 1}), marking({0, 1, 0})});

    const auto net4 = fork_join();
    const auto rg4 = build_rg(net4);
    const auto brg4 = build_brg(net4, CrucialSet::empty_set());
    const std::vector<std::string> word_a{"a"};
    auto all = rg4.nodes;
    std::sort(all.begin(), all.end());
    CHECK(consistent_markings_basis(net4, brg4, word_a) == all);

    const std::vector<std::string> impossible{"b", "b", "b", "b"};
    CHECK(consistent_markings_basis(net1, brg1, impossible) ==
          consistent_markings_oracle(net1, rg1, impossible));

    for (const auto& net : {loop_net(), ring_net(), fork_join()}) {
        const auto rg = build_rg(net);
        const auto brg = build_brg(net, CrucialSet::empty_set());
        for (const auto& word : brute::words_up_to(net.alphabet(), 4))
            CHECK(consistent_markings_basis(net, brg, word) == consistent_markings_oracle(net, rg, word));
    }
}
