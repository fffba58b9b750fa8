#include "cdetect/observer.hpp"

#include <algorithm>

namespace cdetect {

int ObserverDfa::symbol_index(std::string_view symbol) const {
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), symbol);
    if (it == alphabet.end() || *it != symbol) return -1;
    return static_cast<int>(it - alphabet.begin());
}

int ObserverDfa::step(int state, std::string_view symbol) const {
    if (state < 0 || state >= num_states()) return -1;
    const int s = symbol_index(symbol);
    if (s < 0) return -1;
    return next[static_cast<std::size_t>(state)][static_cast<std::size_t>(s)];
}

int ObserverDfa::run(std::span<const std::string> word) const {
    int state = initial;
    for (const auto& symbol : word) {
        state = step(state, symbol);
        if (state < 0) return -1;
    }
    return state;
}

}  // namespace cdetect
