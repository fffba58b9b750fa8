#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <queue>
#include <set>

#include "cdetect/detect.hpp"
#include "support/fixtures.hpp"
#include "support/random_nets.hpp"

// Property tests over a seeded random corpus. The acceptance suite runs the
// same properties over the full 100-net corpus; this keeps a fast slice in
// the regular test run.

using namespace cdetect;

namespace {

const std::vector<random_nets::Case>& corpus() {
    static const auto cases = random_nets::corpus(90210, 30);
    return cases;
}

}  // namespace

TEST_CASE("corpus nets satisfy the structural gates") {
    for (const auto& rc : corpus()) {
        CHECK(check_tu_acyclic(rc.net).acyclic);
        CHECK(check_deadlock_free(rc.net, rc.rg).deadlock_free);
        CHECK(!rc.net.unobservable_transitions().empty());
        CHECK(rc.rg.max_tokens() <= 3);
        CHECK(rc.net.num_places() <= 6);
        CHECK(rc.net.num_transitions() <= 8);
    }
}

TEST_CASE("basis route and oracle route give the same verdicts") {
    for (const auto& rc : corpus()) {
        const auto outcome = verify_all(rc.net, rc.crucial);
        const auto oracle = oracle_verify_all(rg_observer(rc.net, rc.rg, rc.crucial));
        CHECK(outcome.verdict.same_outcome(oracle));

        // Implication lattice on both routes.
        for (const auto& v : {outcome.verdict, oracle}) {
            if (v.strong.holds) {
                CHECK(v.weak.holds);
                CHECK(v.periodically_strong.holds);
            }
            if (v.weak.holds) CHECK(v.periodically_weak.holds);
            if (v.periodically_strong.holds) CHECK(v.periodically_weak.holds);
        }
    }
}

TEST_CASE("consistency sets agree for every producible word") {
    // Walking the two observers in lockstep covers C(w) for every word w:
    // each product state stands for all words reaching it.
    for (const auto& rc : corpus()) {
        const auto brg = build_brg(rc.net, rc.crucial);
        const auto basis_obs = build_observer(brg);
        const auto oracle_obs = rg_observer(rc.net, rc.rg, rc.crucial);
        const auto sub = unobservable_subnet(rc.net);

        std::set<std::pair<int, int>> seen{{oracle_obs.initial, basis_obs.initial}};
        std::queue<std::pair<int, int>> work;
        work.push({oracle_obs.initial, basis_obs.initial});
        while (!work.empty()) {
            const auto [os, bs] = work.front();
            work.pop();

            std::set<Marking> via_oracle;
            for (int id : oracle_obs.states[static_cast<std::size_t>(os)])
                via_oracle.insert(rc.rg.nodes[static_cast<std::size_t>(id)]);
            std::set<Marking> via_basis;
            for (int id : basis_obs.states[static_cast<std::size_t>(bs)])
                for (const auto& m :
                     unobservable_closure(sub, brg.nodes[static_cast<std::size_t>(id)].marking))
                    via_basis.insert(m);
            CHECK(via_oracle == via_basis);

            for (const auto& symbol : oracle_obs.alphabet) {
                const int os2 = oracle_obs.step(os, symbol);
                const int bs2 = basis_obs.step(bs, symbol);
                CHECK((os2 < 0) == (bs2 < 0));  // both defined or both not
                if (os2 < 0 || bs2 < 0) continue;
                if (seen.emplace(os2, bs2).second) work.push({os2, bs2});
            }
        }
    }
}

TEST_CASE("flag deciders agree across the corpus") {
    for (const auto& rc : corpus()) {
        const auto brg = build_brg(rc.net, rc.crucial);
        for (const auto& node : brg.nodes) {
            CHECK(alpha_by_enumeration(rc.net, rc.crucial, node.marking) ==
                  alpha_by_feasibility(rc.net, rc.crucial, node.marking));
            CHECK(beta_by_enumeration(rc.net, node.marking) == beta_by_feasibility(rc.net, node.marking));
        }
    }
}

TEST_CASE("cycle enumeration agrees with the polynomial reductions") {
    for (const auto& rc : corpus()) {
        const auto basis_obs = build_observer(build_brg(rc.net, rc.crucial));
        const auto oracle_obs = rg_observer(rc.net, rc.rg, rc.crucial);
        for (const ObserverDfa* obs : {&basis_obs, &oracle_obs}) {
            const auto enumeration = classify_cycles(*obs, 10000);
            if (!enumeration.complete) continue;
            bool any_unambiguous = false, any_semi = false, any_ambiguous = false;
            for (const auto& c : enumeration.cycles) {
                any_unambiguous = any_unambiguous || c.kind == CycleKind::Unambiguous;
                any_semi = any_semi || c.kind != CycleKind::Ambiguous;
                any_ambiguous = any_ambiguous || c.kind == CycleKind::Ambiguous;
            }
            CHECK(check_weak(*obs).holds == any_unambiguous);
            CHECK(check_periodically_strong(*obs).holds == !any_ambiguous);
            CHECK(check_periodically_weak(*obs).holds == any_semi);
        }
    }
}

TEST_CASE("strong check agrees between cycle and SCC formulations") {
    // Theorem form: every state reachable from a cycle is marked. The check
    // uses the SCC form; compare against a direct cycle-based recomputation.
    for (const auto& rc : corpus()) {
        const auto obs = rg_observer(rc.net, rc.rg, rc.crucial);
        const auto enumeration = classify_cycles(obs, 10000);
        if (!enumeration.complete) continue;

        std::set<int> on_cycles;
        for (const auto& c : enumeration.cycles)
            on_cycles.insert(c.cycle.states.begin(), c.cycle.states.end());
        std::set<int> reachable(on_cycles);
        std::queue<int> work;
        for (int s : on_cycles) work.push(s);
        while (!work.empty()) {
            const int s = work.front();
            work.pop();
            for (const auto& symbol : obs.alphabet) {
                const int v = obs.step(s, symbol);
                if (v >= 0 && reachable.insert(v).second) work.push(v);
            }
        }
        bool all_marked = true;
        for (int s : reachable) all_marked = all_marked && obs.marked[static_cast<std::size_t>(s)];
        CHECK(check_strong(obs).holds == all_marked);
    }
}

TEST_CASE("the basis graph never outgrows the reachability graph") {
    for (const auto& rc : corpus()) {
        const auto brg = build_brg(rc.net, rc.crucial);
        CHECK(brg.num_nodes() <= rc.rg.num_nodes());
        std::set<Marking> markings;
        for (const auto& node : brg.nodes) {
            CHECK(rc.rg.node_of(node.marking) >= 0);
            markings.insert(node.marking);
        }
        CHECK(markings.size() == static_cast<std::size_t>(brg.num_nodes()));
    }
}

TEST_CASE("witnesses replay on the observer") {
    for (const auto& rc : corpus()) {
        const auto outcome = verify_all(rc.net, rc.crucial);
        const auto& obs = outcome.observer;
        auto replay = [&](const ObserverPath& path) {
            for (std::size_t i = 0; i + 1 < path.states.size(); ++i)
                CHECK(obs.step(path.states[i], path.events[i]) == path.states[i + 1]);
        };
        for (const auto& pv : {outcome.verdict.strong, outcome.verdict.weak,
                               outcome.verdict.periodically_strong, outcome.verdict.periodically_weak}) {
            if (!pv.witness) continue;
            replay(pv.witness->cycle);
            replay(pv.witness->path);
            if (!pv.witness->cycle.empty())
                CHECK(pv.witness->cycle.states.front() == pv.witness->cycle.states.back());
        }
    }
}
