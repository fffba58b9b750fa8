#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cdetect {

/// Deterministic automaton produced by subset construction. States are sorted
/// member-id sets: basis-graph node ids for the basis-side observer, or
/// reachability-graph node ids for the oracle observer. `marked` is the
/// marked-state set used by the detectability checks.
struct ObserverDfa {
    std::vector<std::string> alphabet;          // sorted event symbols
    std::vector<std::vector<int>> states;       // per state: sorted member ids
    std::vector<std::vector<int>> next;         // next[state][symbol] = target or -1
    std::vector<bool> marked;
    int initial = 0;

    int num_states() const { return static_cast<int>(states.size()); }
    int symbol_index(std::string_view symbol) const;
    /// One deterministic step; -1 when undefined or the symbol is unknown.
    int step(int state, std::string_view symbol) const;
    /// Runs the automaton on a word from the initial state; -1 when undefined.
    int run(std::span<const std::string> word) const;
};

}  // namespace cdetect
