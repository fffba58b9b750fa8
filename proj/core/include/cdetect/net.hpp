#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cdetect/errors.hpp"

namespace cdetect {

/// Dense row-major integer matrix, sized once at construction.
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> data;

    IntMatrix() = default;
    IntMatrix(int rows, int cols, int fill = 0)
        : rows(rows), cols(cols), data(static_cast<std::size_t>(rows) * cols, fill) {}

    int& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    int at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    std::vector<int> column(int c) const {
        std::vector<int> out(static_cast<std::size_t>(rows));
        for (int r = 0; r < rows; ++r) out[static_cast<std::size_t>(r)] = at(r, c);
        return out;
    }

    bool operator==(const IntMatrix&) const = default;
};

/// Token counts per place. Canonical order is lexicographic over the place ordering.
struct Marking {
    std::vector<int> tokens;

    Marking() = default;
    explicit Marking(std::vector<int> tokens) : tokens(std::move(tokens)) {}

    std::size_t size() const { return tokens.size(); }
    int operator[](std::size_t p) const { return tokens[p]; }

    /// Componentwise >=.
    bool covers(const Marking& other) const;
    /// Componentwise >= with at least one strict coordinate.
    bool strictly_dominates(const Marking& other) const;

    auto operator<=>(const Marking&) const = default;
};

struct MarkingHash {
    std::size_t operator()(const Marking& m) const {
        std::size_t h = 0x9e3779b97f4a7c15ull;
        for (int v : m.tokens) h = h * 1099511628211ull ^ static_cast<std::size_t>(v + 1);
        return h;
    }
};

/// Firing counts per transition (or per unobservable-subnet column).
struct ParikhVector {
    std::vector<int> counts;

    ParikhVector() = default;
    explicit ParikhVector(std::vector<int> counts) : counts(std::move(counts)) {}

    std::size_t size() const { return counts.size(); }
    int operator[](std::size_t t) const { return counts[t]; }
    bool is_zero() const;
    /// Componentwise <=.
    bool dominated_by(const ParikhVector& other) const;

    auto operator<=>(const ParikhVector&) const = default;
};

/// The unobservable transitions of a net, as matrix columns in a stable order.
struct UnobservableSubnet {
    IntMatrix pre;        // m x |Tu|
    IntMatrix post;       // m x |Tu|
    IntMatrix incidence;  // post - pre
    std::vector<int> columns;  // subnet column -> original transition index

    int num_places() const { return pre.rows; }
    int num_transitions() const { return pre.cols; }
    /// True when the column has no arcs at all; such a transition never changes a marking.
    bool is_isolated(int col) const;
};

/// A labeled Petri net with its initial marking.
///
/// Places and transitions are identified by index into the declared ordering;
/// names only matter for I/O. An empty label string means the transition is
/// unobservable. The alphabet is inferred from the labels in use.
struct LabeledPetriNet {
    std::vector<std::string> places;
    std::vector<std::string> transitions;
    IntMatrix pre;   // m x n, entries >= 0
    IntMatrix post;  // m x n, entries >= 0
    Marking initial;
    std::vector<std::string> labels;  // per transition; "" = unobservable

    int num_places() const { return static_cast<int>(places.size()); }
    int num_transitions() const { return static_cast<int>(transitions.size()); }
    int incidence(int p, int t) const { return post.at(p, t) - pre.at(p, t); }
    bool is_observable(int t) const { return !labels[static_cast<std::size_t>(t)].empty(); }

    std::vector<int> observable_transitions() const;
    std::vector<int> unobservable_transitions() const;
    /// Sorted, deduplicated set of event symbols in use.
    std::vector<std::string> alphabet() const;
    int transition_index(std::string_view name) const;  // -1 when unknown

    /// Checks the structural invariants (dimensions, non-negativity, name
    /// uniqueness, initial marking length). Throws DimensionError or Error.
    void validate() const;
};

/// Result of the unobservable-subnet acyclicity check.
struct TuAcyclicity {
    bool acyclic = true;
    /// When cyclic: alternating place/transition names along one directed cycle.
    std::vector<std::string> cycle;
};

bool enabled(const LabeledPetriNet& net, const Marking& m, int t);
Marking fire(const LabeledPetriNet& net, const Marking& m, int t);
Marking fire_sequence(const LabeledPetriNet& net, const Marking& m, std::span<const int> seq);
ParikhVector parikh(const LabeledPetriNet& net, std::span<const int> seq);

UnobservableSubnet unobservable_subnet(const LabeledPetriNet& net);
TuAcyclicity check_tu_acyclic(const LabeledPetriNet& net);

/// Throws TuSubnetCyclicError unless the unobservable subnet is acyclic.
void require_tu_acyclic(const LabeledPetriNet& net);

}  // namespace cdetect
