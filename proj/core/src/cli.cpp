#include "cdetect/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cdetect/detect.hpp"
#include "cdetect/io.hpp"

namespace cdetect {

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitBudget = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path, 0);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

std::string render_marking_set(const std::vector<Marking>& set) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i) os << ", ";
        os << format_marking_vector(set[i]);
    }
    os << '}';
    return os.str();
}

std::string render_path(const ObserverPath& path) {
    std::ostringstream os;
    for (std::size_t i = 0; i < path.states.size(); ++i) {
        if (i) os << " -" << path.events[i - 1] << "-> ";
        os << 'S' << path.states[i];
    }
    return os.str();
}

void print_property(std::ostream& out, const char* name, const PropertyVerdict& verdict) {
    out << "  " << name << ": " << (verdict.holds ? "holds" : "fails");
    if (verdict.witness) {
        if (!verdict.witness->cycle.empty()) out << "  cycle: " << render_path(verdict.witness->cycle);
        if (!verdict.witness->path.empty()) out << "  path: " << render_path(verdict.witness->path);
    }
    out << '\n';
}

CrucialSet load_crucial(const std::string& path, int num_places) {
    if (path.empty()) return CrucialSet::empty_set();
    return parse_crucial(read_file(path), num_places);
}

struct CheckArgs {
    std::string net_path, crucial_path, property = "all", report_path;
    int max_states = 1 << 20;
    bool oracle = false, allow_deadlock = false;
};

int do_check(const CheckArgs& args, std::ostream& out) {
    const LabeledPetriNet net = parse_net(read_file(args.net_path));
    const CrucialSet crucial = load_crucial(args.crucial_path, net.num_places());

    VerifyOptions options;
    options.max_states = args.max_states;
    options.allow_deadlock = args.allow_deadlock;
    options.with_oracle = args.oracle;
    const VerifyOutcome outcome = verify_all(net, crucial, options);

    out << "assumptions: tu-acyclic yes; bounded yes (" << outcome.rg.num_nodes()
        << " reachable markings, max " << outcome.rg.max_tokens() << " tokens); deadlock-free "
        << (outcome.deadlock_free ? "yes" : "NO (continuing by request)") << '\n';
    out << "basis graph: " << outcome.brg.num_nodes() << " markings, " << outcome.brg.edges.size()
        << " edges; observer: " << outcome.observer.num_states() << " states\n";
    out << "properties:\n";
    print_property(out, "strong               ", outcome.verdict.strong);
    print_property(out, "weak                 ", outcome.verdict.weak);
    print_property(out, "periodically-strong  ", outcome.verdict.periodically_strong);
    print_property(out, "periodically-weak    ", outcome.verdict.periodically_weak);
    if (outcome.oracle_verdict)
        out << "oracle: reachability-graph observer (" << outcome.oracle_observer->num_states()
            << " states) agrees\n";

    if (!args.report_path.empty()) write_file(args.report_path, verdict_report(net, crucial, outcome));

    bool holds = true;
    if (args.property == "all")
        holds = outcome.verdict.strong.holds && outcome.verdict.weak.holds &&
                outcome.verdict.periodically_strong.holds && outcome.verdict.periodically_weak.holds;
    else
        holds = outcome.verdict.get(args.property);
    return holds ? kExitHolds : kExitFails;
}

struct ConsistentArgs {
    std::string net_path, crucial_path, word, method = "both";
    int max_states = 1 << 20;
};

int do_consistent(const ConsistentArgs& args, std::ostream& out, std::ostream& err) {
    const LabeledPetriNet net = parse_net(read_file(args.net_path));
    const std::vector<std::string> word = parse_word(args.word, net.alphabet());

    std::optional<std::vector<Marking>> via_basis, via_oracle;
    if (args.method == "basis" || args.method == "both") {
        require_tu_acyclic(net);
        build_rg(net, args.max_states);  // boundedness gate only
        const CrucialSet crucial = load_crucial(args.crucial_path, net.num_places());
        const BasisGraph brg = build_brg(net, crucial);
        via_basis = consistent_markings_basis(net, brg, word);
        out << "basis:  " << render_marking_set(*via_basis) << '\n';
    }
    if (args.method == "oracle" || args.method == "both") {
        const ReachabilityGraph rg = build_rg(net, args.max_states);
        via_oracle = consistent_markings_oracle(net, rg, word);
        out << "oracle: " << render_marking_set(*via_oracle) << '\n';
    }
    if (via_basis && via_oracle) {
        if (*via_basis != *via_oracle) {
            err << "methods disagree\n  basis only:";
            for (const auto& m : *via_basis)
                if (!std::binary_search(via_oracle->begin(), via_oracle->end(), m))
                    err << ' ' << format_marking_vector(m);
            err << "\n  oracle only:";
            for (const auto& m : *via_oracle)
                if (!std::binary_search(via_basis->begin(), via_basis->end(), m))
                    err << ' ' << format_marking_vector(m);
            err << '\n';
            return kExitFails;
        }
        out << "agreement: yes\n";
    }
    return kExitHolds;
}

struct ExplainArgs {
    std::string net_path, marking, transition;
};

int do_explain(const ExplainArgs& args, std::ostream& out) {
    const LabeledPetriNet net = parse_net(read_file(args.net_path));
    const Marking m = parse_marking_vector(args.marking, net.num_places());
    const int t = net.transition_index(args.transition);
    if (t < 0) throw ParseError("unknown transition '" + args.transition + "'", 0);
    const MinimalExplanationSet exps = minimal_explanations(net, m, t);
    const UnobservableSubnet sub = unobservable_subnet(net);

    out << "minimal explanations of " << args.transition << " at " << format_marking_vector(m) << ": "
        << exps.size() << '\n';
    for (const auto& exp : exps.items) {
        out << "  e-vector {";
        bool first = true;
        for (int c = 0; c < sub.num_transitions(); ++c) {
            if (exp.evector[static_cast<std::size_t>(c)] == 0) continue;
            if (!first) out << ' ';
            first = false;
            out << net.transitions[static_cast<std::size_t>(sub.columns[static_cast<std::size_t>(c)])] << ':'
                << exp.evector[static_cast<std::size_t>(c)];
        }
        out << "}  witness:";
        if (exp.witness.empty()) out << " (empty)";
        for (int w : exp.witness) out << ' ' << net.transitions[static_cast<std::size_t>(w)];
        out << '\n';
    }
    return kExitHolds;
}

struct GraphArgs {
    std::string net_path, crucial_path, kind, dot_path;
    int max_states = 1 << 20;
};

int do_graph(const GraphArgs& args, std::ostream& out) {
    const LabeledPetriNet net = parse_net(read_file(args.net_path));
    std::string dot;
    if (args.kind == "rg") {
        dot = export_dot(net, build_rg(net, args.max_states));
    } else {
        require_tu_acyclic(net);
        const ReachabilityGraph rg = build_rg(net, args.max_states);  // boundedness gate
        const CrucialSet crucial = load_crucial(args.crucial_path, net.num_places());
        if (args.kind == "rg-observer") {
            dot = export_dot(net, rg, rg_observer(net, rg, crucial));
        } else {
            const BasisGraph brg = build_brg(net, crucial);
            if (args.kind == "brg")
                dot = export_dot(net, brg);
            else
                dot = export_dot(net, brg, build_observer(brg));
        }
    }
    if (args.dot_path.empty())
        out << dot;
    else
        write_file(args.dot_path, dot);
    return kExitHolds;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"C-detectability analysis of bounded labeled Petri nets"};
    app.require_subcommand(1);

    CheckArgs check_args;
    auto* check = app.add_subcommand("check", "Decide the four C-detectability properties");
    check->add_option("net", check_args.net_path, "net document")->required();
    check->add_option("--crucial", check_args.crucial_path, "crucial-set document")->required();
    check->add_option("--property", check_args.property, "property to gate the exit code on")
        ->check(CLI::IsMember({"strong", "weak", "ps", "pw", "all"}));
    check->add_flag("--oracle", check_args.oracle, "cross-validate against the reachability-graph observer");
    check->add_option("--report", check_args.report_path, "write a JSON report to this path");
    check->add_option("--max-states", check_args.max_states, "reachability exploration budget");
    check->add_flag("--allow-deadlock", check_args.allow_deadlock, "downgrade deadlocks to a warning");

    ConsistentArgs consistent_args;
    auto* consistent = app.add_subcommand("consistent", "Markings consistent with an observed word");
    consistent->add_option("net", consistent_args.net_path, "net document")->required();
    consistent->add_option("--crucial", consistent_args.crucial_path, "crucial-set document (optional)");
    consistent->add_option("--word", consistent_args.word, "observed event symbols")->required();
    consistent->add_option("--method", consistent_args.method, "basis, oracle, or both")
        ->check(CLI::IsMember({"basis", "oracle", "both"}));
    consistent->add_option("--max-states", consistent_args.max_states, "reachability exploration budget");

    ExplainArgs explain_args;
    auto* explain = app.add_subcommand("explain", "Minimal explanations of an observable transition");
    explain->add_option("net", explain_args.net_path, "net document")->required();
    explain->add_option("--marking", explain_args.marking, "marking vector, e.g. \"1 0 0\"")->required();
    explain->add_option("--transition", explain_args.transition, "observable transition name")->required();

    GraphArgs graph_args;
    auto* graph = app.add_subcommand("graph", "Export a graph in DOT format");
    graph->add_option("net", graph_args.net_path, "net document")->required();
    graph->add_option("--kind", graph_args.kind, "rg, brg, observer, or rg-observer")
        ->required()
        ->check(CLI::IsMember({"rg", "brg", "observer", "rg-observer"}));
    graph->add_option("--dot", graph_args.dot_path, "output path (stdout when omitted)");
    graph->add_option("--crucial", graph_args.crucial_path, "crucial-set document (optional)");
    graph->add_option("--max-states", graph_args.max_states, "reachability exploration budget");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitHolds : kExitPrecondition;
    }

    try {
        if (check->parsed()) return do_check(check_args, out);
        if (consistent->parsed()) return do_consistent(consistent_args, out, err);
        if (explain->parsed()) return do_explain(explain_args, out);
        return do_graph(graph_args, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const TuSubnetCyclicError& e) {
        err << "error: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const UnboundedError& e) {
        err << "error: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const NotDeadlockFreeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const StateBudgetError& e) {
        err << "error: " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::logic_error& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitBudget;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitPrecondition;
    }
}

}  // namespace cdetect
