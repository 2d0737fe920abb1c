#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pentaks/pentaks.hpp"

namespace pentaks::cli {

using json_io::json;

#ifdef PENTAKS_VERSION
inline constexpr const char* version = PENTAKS_VERSION;
#else
inline constexpr const char* version = "unknown";
#endif

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Output {
    std::string path;
    bool pretty = false;
};

/// Shared state of one invocation: where results go and what the manifest records.
class Run {
public:
    Run(std::ostream& out, const CLI::App* sub) : out_(out), sub_(sub) {}

    std::optional<std::uint64_t> seed;
    Output output;

    void emit_json(const json& j) { emit(json_io::dump(j, output.pretty)); }

    void emit(const std::string& text) {
        if (output.path.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(output.path, std::ios::binary);
        if (!f) throw ValidationError("cannot write output file '" + output.path + "'");
        f << text;
        f.close();
        write_manifest();
        out_ << output.path << '\n';
    }

private:
    void write_manifest() const {
        json params = json::object();
        for (const CLI::Option* opt : sub_->get_options()) {
            if (opt->get_name() == "--help" || opt->count() == 0) continue;
            const auto& res = opt->results();
            std::string name = opt->get_name();
            if (name.rfind("--", 0) == 0) name = name.substr(2);
            if (res.empty() || (opt->get_expected_min() == 0)) {
                params[name] = true;
            } else {
                params[name] = res.size() == 1 ? json(res.front()) : json(res);
            }
        }
        json m{{"command", sub_->get_name()},
               {"parameters", params},
               {"seed", seed ? json(*seed) : json(nullptr)},
               {"versions", {{"pentaks", version}}},
               {"outputs", json::array({output.path})}};
        std::ofstream f(output.path + ".manifest.json", std::ios::binary);
        if (!f) throw ValidationError("cannot write manifest for '" + output.path + "'");
        f << json_io::dump(m, true);
    }

    std::ostream& out_;
    const CLI::App* sub_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot read '" + path + "'");
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

/// A graph file, or one of the built-in graphs "builtin:cabello18",
/// "builtin:regular-pentagram", "builtin:ks-subgraph".
inline OrthogonalityGraph load_graph(const std::string& source) {
    if (source == "builtin:cabello18") return cabello18();
    if (source == "builtin:regular-pentagram") return pentagram_graph(build_family(regular_params()));
    if (source == "builtin:ks-subgraph") return realize_ks_subgraph(box_game_upper_pentagon()).graph;
    return json_io::graph_from_json(json_io::parse(read_file(source), source));
}

inline json params_json(const PentagramParams& p) { return {{"a", p.a}, {"b", p.b}, {"mu", p.mu}, {"nu", p.nu}}; }

inline json hardy_params_json(const HardyParams& p) {
    return {{"theta_a", p.theta_a}, {"phi_a", p.phi_a}, {"theta_b", p.theta_b}, {"phi_b", p.phi_b}};
}

inline json class4_json(const Pentagram4Class& c) {
    return {{"kind", to_string(c.kind)},
            {"pentagram", json_io::to_json(c.pentagram)},
            {"spectrum", json_io::to_json(c.spectrum)},
            {"seed", c.seed},
            {"restart", c.restart}};
}

inline json report_json(const ConjectureReport& r) {
    return {{"samples", r.samples},
            {"seed", r.seed},
            {"pentagon_count", r.pentagon_count},
            {"violating_fraction", r.violating_fraction},
            {"min_max_expectation", r.min_max_expectation},
            {"argmin_sample", r.argmin_sample},
            {"argmin_state", json_io::to_json(r.argmin_state)},
            {"refined_min", r.refined_min},
            {"refined_state", json_io::to_json(r.refined_state)},
            {"every_sample_violates", r.min_max_expectation > classical_bound},
            {"refined_min_violates", r.refined_min > classical_bound}};
}

/// Runs one command line. Returns 0 on success, 1 on a validation or
/// computation error (one line on `err`), 2 on a usage error.
inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pentagram operators, Kochen-Specker graphs and related paradoxes", "pentaks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));

    Output output;
    const auto add_output = [&](CLI::App* sub) {
        sub->add_option("--out", output.path, "Write the result to this file (plus a manifest)");
        sub->add_flag("--pretty", output.pretty, "Indented JSON with 6 significant digits");
    };
    std::vector<std::function<void(Run&)>> actions;
    std::map<const CLI::App*, std::size_t> action_of;
    const auto command = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_output(sub);
        return sub;
    };
    const auto bind = [&](CLI::App* sub, std::function<void(Run&)> fn) {
        action_of[sub] = actions.size();
        actions.push_back(std::move(fn));
    };

    // spectrum
    PentagramParams sp;
    auto* spectrum_cmd = command("spectrum", "Spectrum of a four-angle family pentagram");
    spectrum_cmd->add_option("--a", sp.a, "Angle a")->required();
    spectrum_cmd->add_option("--b", sp.b, "Angle b")->required();
    spectrum_cmd->add_option("--mu", sp.mu, "Phase mu");
    spectrum_cmd->add_option("--nu", sp.nu, "Phase nu");
    bind(spectrum_cmd, [&](Run& run) {
        const Pentagram p = build_family(sp);
        run.emit_json({{"params", params_json(sp)},
                       {"A", p.overlap_sum()},
                       {"spectrum", json_io::to_json(spectrum(p.op()))},
                       {"pentagram", json_io::to_json(p)}});
    });

    // scan-family
    int scan_grid = 64;
    bool scan_full = false;
    auto* scan_cmd = command("scan-family", "CSV scan of the family: a,b,mu,nu,A,lambda1,lambda2,lambda3");
    scan_cmd->add_option("--grid", scan_grid, "Grid points per angle")->check(CLI::Range(2, 4096));
    scan_cmd->add_flag("--full", scan_full, "Also scan the phases mu and nu");
    bind(scan_cmd, [&](Run& run) {
        std::ostringstream os;
        os.precision(17);
        os << "a,b,mu,nu,A,lambda1,lambda2,lambda3\n";
        for (const auto& r : scan_family(scan_grid, scan_full)) {
            os << r.params.a << ',' << r.params.b << ',' << r.params.mu << ',' << r.params.nu << ',' << r.A;
            for (double v : r.spectrum.values) os << ',' << v;
            os << '\n';
        }
        run.emit(os.str());
    });

    // tailor
    std::string tailor_state;
    double tailor_eps = default_tailor_epsilon;
    bool tailor_regular = false;
    auto* tailor_cmd = command("tailor", "Pentagram tailored to a spin-1 state");
    tailor_cmd->add_option("--state", tailor_state, "State JSON file")->required();
    tailor_cmd->add_option("--epsilon", tailor_eps, "Family angle of the base pentagram");
    tailor_cmd->add_flag("--regular", tailor_regular, "Rotate the regular pentagram instead");
    bind(tailor_cmd, [&](Run& run) {
        const StateVector psi = json_io::state_from_json(json_io::parse(read_file(tailor_state), tailor_state));
        const TailoredPentagram t = tailor_regular ? tailor_regular_pentagram(psi) : tailor_pentagram(psi, tailor_eps);
        run.emit_json({{"sigma", t.decomposition.sigma},
                       {"concurrence", t.concurrence},
                       {"x", t.decomposition.x},
                       {"y", t.decomposition.y},
                       {"family_angle", t.family_angle},
                       {"lambda1", t.lambda1},
                       {"lambda2", t.lambda2},
                       {"pentagram", json_io::to_json(t.pentagram)},
                       {"expectation", t.expectation},
                       {"violates", t.violates}});
    });

    // color
    std::string color_graph;
    std::vector<std::string> color_weights;
    auto* color_cmd = command("color", "Exact 0/1 colouring search and classical maximum");
    color_cmd->add_option("graph", color_graph, "Graph JSON file or builtin:<name>")->required();
    color_cmd->add_option("--weights", color_weights, "Node labels whose 1-count is maximized (default: all)");
    bind(color_cmd, [&](Run& run) {
        const OrthogonalityGraph g = load_graph(color_graph);
        std::vector<int> ws;
        for (const auto& l : color_weights) ws.push_back(g.index_of(l));
        const ClassicalMaxResult r = color_weights.empty() ? classical_max(g) : classical_max(g, ws);
        run.emit_json({{"colorable", r.colorable},
                       {"max_weight", r.max_weight},
                       {"assignment", r.colorable ? json(r.assignment) : json(nullptr)},
                       {"search_nodes", r.search_nodes}});
    });

    // pentagons
    std::string pent_graph;
    auto* pent_cmd = command("pentagons", "Induced pentagons, with spectra when the graph is realized");
    pent_cmd->add_option("graph", pent_graph, "Graph JSON file or builtin:<name>")->required();
    bind(pent_cmd, [&](Run& run) {
        const OrthogonalityGraph g = load_graph(pent_graph);
        json list = json::array();
        for (const auto& p : induced_pentagons(g)) {
            json labels = json::array();
            for (int c : p.cycle) labels.push_back(g.labels()[static_cast<std::size_t>(c)]);
            json e{{"nodes", p.nodes}, {"cycle", p.cycle}, {"labels", labels}};
            if (g.realized()) e["spectrum"] = json_io::to_json(spectrum(pentagram_from_cycle(g, p).op()));
            list.push_back(e);
        }
        run.emit_json({{"count", list.size()}, {"pentagons", list}});
    });

    // ks-max
    bool ks_real = false;
    auto* ks_cmd = command("ks-max", "Maximize p = |<psi_u|psi_d>|^2 over the Kochen-Specker subgraph");
    ks_cmd->add_flag("--real", ks_real, "Restrict to real upper pentagons");
    bind(ks_cmd, [&](Run& run) {
        KsMaximizeOptions opt;
        opt.real_only = ks_real;
        const KsMaximum m = maximize_ks_probability(opt);
        run.emit_json({{"params", params_json(m.params)},
                       {"p", m.p},
                       {"expectation", m.expectation},
                       {"expectation_argmax", params_json(m.expectation_argmax)},
                       {"p_at_expectation_argmax", m.p_at_expectation_argmax}});
    });

    // av-game
    std::uint64_t av_runs = 0, av_seed = 0;
    auto* av_cmd = command("av-game", "Simulate the box game");
    av_cmd->add_option("--runs", av_runs, "Number of runs")->required();
    av_cmd->add_option("--seed", av_seed, "Random seed")->required();
    bind(av_cmd, [&](Run& run) {
        run.seed = av_seed;
        const GameStats s = av_game(av_runs, av_seed);
        run.emit_json({{"runs", s.runs},
                       {"selected", s.selected},
                       {"wins_among_selected", s.wins_among_selected},
                       {"rng_seed", s.rng_seed},
                       {"selected_fraction", static_cast<double>(s.selected) / static_cast<double>(s.runs)},
                       {"win_rate", s.selected ? json(static_cast<double>(s.wins_among_selected) / static_cast<double>(s.selected))
                                               : json(nullptr)}});
    });

    // hardy
    bool hardy_max = false;
    HardyParams hp;
    HardyMaximizeOptions hopt;
    auto* hardy_cmd = command("hardy", "Hardy graph for given local bases, or the maximal paradox probability");
    hardy_cmd->add_flag("--maximize", hardy_max, "Maximize p over the local bases");
    hardy_cmd->add_option("--theta-a", hp.theta_a, "Polar angle of a1 = (cos, e^{i phi} sin)");
    hardy_cmd->add_option("--phi-a", hp.phi_a, "Phase of a1");
    hardy_cmd->add_option("--theta-b", hp.theta_b, "Polar angle of b1");
    hardy_cmd->add_option("--phi-b", hp.phi_b, "Phase of b1");
    hardy_cmd->add_option("--restarts", hopt.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
    hardy_cmd->add_option("--seed", hopt.seed, "Seed of the restart points");
    bind(hardy_cmd, [&](Run& run) {
        if (hardy_max) {
            run.seed = hopt.seed;
            const HardyMaximum m = hardy_maximize(hopt);
            run.emit_json({{"params", hardy_params_json(m.params)},
                           {"p", m.p},
                           {"expectation", m.expectation},
                           {"restart_values", m.restart_values}});
            return;
        }
        const HardyGraph h = hardy_construct(hp);
        const HardyProbabilities pr = hardy_probabilities(h);
        run.emit_json({{"params", hardy_params_json(hp)},
                       {"p", pr.a1_and_b1},
                       {"expectation", hardy_upper_expectation(h)},
                       {"probabilities",
                        {{"B2=0|A1=1", pr.b2_zero_given_a1}, {"A2=0|B1=1", pr.a2_zero_given_b1}, {"A2=1,B2=1", pr.a2_and_b2}}},
                       {"psi_concurrence", two_qubit_concurrence(h.vec(HardyGraph::psi))},
                       {"graph", json_io::to_json(h.graph)}});
    });

    // four
    bool four_sep = false, four_ent = false, four_cab = false;
    RegularSearchOptions four_opt;
    auto* four_cmd = command("four", "Dimension-4 pentagrams");
    auto* g1 = four_cmd->add_flag("--separable-regular", four_sep, "The regular pentagram of product states");
    auto* g2 = four_cmd->add_flag("--entangled-regular", four_ent, "The two real (maximally entangled) regular pentagrams");
    auto* g3 = four_cmd->add_flag("--cabello-pentagons", four_cab, "CSV of the 18-vector set's pentagon spectra");
    g1->excludes(g2)->excludes(g3);
    g2->excludes(g3);
    four_cmd->add_option("--restarts", four_opt.restarts, "Restart budget")->check(CLI::PositiveNumber);
    four_cmd->add_option("--seed", four_opt.seed, "Seed of the restart points");
    bind(four_cmd, [&](Run& run) {
        if (four_sep) {
            run.seed = four_opt.seed;
            run.emit_json(class4_json(separable_regular(four_opt)));
        } else if (four_ent) {
            run.seed = four_opt.seed;
            json list = json::array();
            for (const auto& c : entangled_regular(four_opt)) list.push_back(class4_json(c));
            run.emit_json(list);
        } else if (four_cab) {
            const OrthogonalityGraph g = cabello18();
            run.emit(pentagon_spectra_csv(g, pentagon_spectra(g)));
        } else {
            throw UsageError("four: choose --separable-regular, --entangled-regular or --cabello-pentagons");
        }
    });

    // conjecture
    std::string conj_graph;
    std::uint64_t conj_samples = 10000, conj_seed = 0;
    auto* conj_cmd = command("conjecture", "Haar scan of the largest pentagon expectation");
    conj_cmd->add_option("graph", conj_graph, "Graph JSON file or builtin:<name>")->required();
    conj_cmd->add_option("--samples", conj_samples, "Number of Haar samples");
    conj_cmd->add_option("--seed", conj_seed, "Random seed");
    bind(conj_cmd, [&](Run& run) {
        run.seed = conj_seed;
        run.emit_json(report_json(conjecture_scan(load_graph(conj_graph), conj_samples, conj_seed)));
    });

    // validate
    std::string val_graph;
    auto* val_cmd = command("validate", "Check a graph's realization against its edges and bases");
    val_cmd->add_option("graph", val_graph, "Graph JSON file or builtin:<name>")->required();
    bind(val_cmd, [&](Run& run) {
        const ValidationReport r = validate(load_graph(val_graph));
        if (!r.ok()) throw ValidationError(val_graph + ": " + r.problems.front());
        run.emit_json({{"ok", true}, {"problems", json::array()}});
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << version << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    const CLI::App* sub = app.get_subcommands().front();
    Run run(out, sub);
    run.output = output;
    try {
        actions.at(action_of.at(sub))(run);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& c : msg)
            if (c == '\n') c = ' ';
        err << "error: " << msg << '\n';
        return 1;
    }
    return 0;
}

} // namespace pentaks::cli
