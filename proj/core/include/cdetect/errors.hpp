#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cdetect {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A place/transition index or a vector dimension did not match the net.
struct DimensionError : Error {
    using Error::Error;
};

/// fire() was asked to fire a transition that is not enabled.
struct NotEnabledError : Error {
    NotEnabledError(std::string msg, int transition, std::vector<int> at, std::size_t step)
        : Error(std::move(msg)), transition(transition), at(std::move(at)), step(step) {}
    int transition;
    std::vector<int> at;  // marking at which enabling failed
    std::size_t step;     // position in the sequence (0 for single fires)
};

/// The unobservable subnet contains a directed cycle (structural assumption violated).
struct TuSubnetCyclicError : Error {
    TuSubnetCyclicError(std::string msg, std::vector<std::string> cycle)
        : Error(std::move(msg)), cycle(std::move(cycle)) {}
    std::vector<std::string> cycle;  // alternating place/transition names
};

/// Reachability exploration found a marking strictly dominating one of its ancestors.
struct UnboundedError : Error {
    UnboundedError(std::string msg, std::vector<int> smaller, std::vector<int> larger)
        : Error(std::move(msg)), smaller(std::move(smaller)), larger(std::move(larger)) {}
    std::vector<int> smaller;
    std::vector<int> larger;
};

/// An exploration exceeded its configured state or node budget.
struct StateBudgetError : Error {
    using Error::Error;
};

/// The net is not deadlock free (some reachable marking enables nothing).
struct NotDeadlockFreeError : Error {
    NotDeadlockFreeError(std::string msg, std::vector<int> marking)
        : Error(std::move(msg)), marking(std::move(marking)) {}
    std::vector<int> marking;
};

/// A document could not be parsed.
struct ParseError : Error {
    ParseError(std::string msg, int line) : Error(std::move(msg)), line(line) {}
    int line;  // 1-based; 0 when not tied to a specific line
};

}  // namespace cdetect
