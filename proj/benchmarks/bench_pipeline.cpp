// Scaling comparison between the reachability-graph route and the basis
// route on a fork-join family: one observable split into `width` parallel
// silent chains that rejoin before an observable (or silent) return. The
// reachability graph grows with the interleavings, the basis graph stays at
// two nodes.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "cdetect/detect.hpp"

namespace {

using namespace cdetect;

LabeledPetriNet fork_join(int width) {
    LabeledPetriNet net;
    net.places.push_back("start");
    for (int i = 0; i < width; ++i) {
        net.places.push_back("a" + std::to_string(i));
        net.places.push_back("b" + std::to_string(i));
    }
    net.places.push_back("done");
    const int m = net.num_places();
    const int start = 0;
    const int done = m - 1;
    auto branch_front = [&](int i) { return 1 + 2 * i; };
    auto branch_back = [&](int i) { return 2 + 2 * i; };

    // split, per-branch hop, join, observable return, silent return
    const int n = 1 + width + 1 + 2;
    net.pre = IntMatrix(m, n);
    net.post = IntMatrix(m, n);
    int t = 0;
    net.transitions.push_back("split");
    net.labels.push_back("a");
    net.pre.at(start, t) = 1;
    for (int i = 0; i < width; ++i) net.post.at(branch_front(i), t) = 1;
    ++t;
    for (int i = 0; i < width; ++i, ++t) {
        net.transitions.push_back("hop" + std::to_string(i));
        net.labels.push_back("");
        net.pre.at(branch_front(i), t) = 1;
        net.post.at(branch_back(i), t) = 1;
    }
    net.transitions.push_back("join");
    net.labels.push_back("");
    for (int i = 0; i < width; ++i) net.pre.at(branch_back(i), t) = 1;
    net.post.at(done, t) = 1;
    ++t;
    net.transitions.push_back("ret");
    net.labels.push_back("b");
    net.pre.at(done, t) = 1;
    net.post.at(start, t) = 1;
    ++t;
    net.transitions.push_back("silent_ret");
    net.labels.push_back("");
    net.pre.at(done, t) = 1;
    net.post.at(start, t) = 1;

    std::vector<int> initial(static_cast<std::size_t>(m), 0);
    initial[static_cast<std::size_t>(start)] = 1;
    net.initial = Marking(std::move(initial));
    net.validate();
    return net;
}

CrucialSet start_crucial(const LabeledPetriNet& net) {
    Gmec g;
    g.w = IntMatrix(1, net.num_places());
    g.w.at(0, 0) = -1;
    g.k = {-1};
    return CrucialSet::gmec_set(std::move(g));
}

void BM_build_rg(benchmark::State& state) {
    const auto net = fork_join(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_rg(net).num_nodes());
    state.counters["graph_nodes"] = build_rg(net).num_nodes();
}

void BM_build_brg(benchmark::State& state) {
    const auto net = fork_join(static_cast<int>(state.range(0)));
    const auto crucial = start_crucial(net);
    for (auto _ : state) benchmark::DoNotOptimize(build_brg(net, crucial).num_nodes());
    state.counters["graph_nodes"] = build_brg(net, crucial).num_nodes();
}

void BM_verify_basis_route(benchmark::State& state) {
    const auto net = fork_join(static_cast<int>(state.range(0)));
    const auto crucial = start_crucial(net);
    for (auto _ : state) {
        const auto brg = build_brg(net, crucial);
        const auto obs = build_observer(brg);
        benchmark::DoNotOptimize(check_all(obs).periodically_weak.holds);
    }
    state.counters["observer_states"] = build_observer(build_brg(net, crucial)).num_states();
}

void BM_verify_oracle_route(benchmark::State& state) {
    const auto net = fork_join(static_cast<int>(state.range(0)));
    const auto crucial = start_crucial(net);
    for (auto _ : state) {
        const auto rg = build_rg(net);
        const auto obs = rg_observer(net, rg, crucial);
        benchmark::DoNotOptimize(check_all(obs).periodically_weak.holds);
    }
    const auto rg = build_rg(net);
    state.counters["observer_states"] = rg_observer(net, rg, crucial).num_states();
}

}  // namespace

BENCHMARK(BM_build_rg)->Arg(2)->Arg(4)->Arg(6)->Arg(8);
BENCHMARK(BM_build_brg)->Arg(2)->Arg(4)->Arg(6)->Arg(8);
BENCHMARK(BM_verify_basis_route)->Arg(2)->Arg(4)->Arg(6)->Arg(8);
BENCHMARK(BM_verify_oracle_route)->Arg(2)->Arg(4)->Arg(6)->Arg(8);

BENCHMARK_MAIN();
