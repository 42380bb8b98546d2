#include "fibft/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "fibft/circuit.hpp"
#include "fibft/decoder.hpp"
#include "fibft/format.hpp"
#include "fibft/recursion.hpp"
#include "fibft/sim.hpp"

namespace fibft::cli {

namespace {

struct Options {
    std::string out;
    std::string config;
    uint64_t seed = 1;

    std::string th_model = "local-stochastic";
    int th_j_max = 10;
    double th_tolerance = 1e-5;
    int th_first_level = 3;
    std::string th_trace;

    std::string cv_model = "local-stochastic";
    std::vector<double> cv_eps;
    int cv_j_max = 5;

    std::string sim_circuit = "bp";
    int sim_j = 1;
    double sim_epsilon = 1e-3;
    uint64_t sim_trials = 100000;
    std::string sim_mode;
    bool sim_serial = false;
    double sim_nsigma = 3.0;

    std::string anc_model = "local-stochastic";
    int anc_j = 10;
    double anc_epsilon = -1;

    OverheadParams ov;
    int ov_j = 3;
    double ov_L = 1e9;
    double ov_epsilon = 1e-4;
    double ov_eps0 = 0.67e-3;

    std::string dec_file;
    int dec_level = 0;
    std::string dec_basis = "Z";
};

const std::vector<std::string> kModels{"local-stochastic", "depolarizing"};

std::vector<double> default_eps_grid() {
    std::vector<double> g;
    for (int k = 2; k <= 20; k++) g.push_back(k * 1e-4);
    return g;
}

void build_app(CLI::App& app, Options& o) {
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--out", o.out, "CSV/report path (default stdout)");
    app.add_option("--config", o.config, "key=value file; command-line flags win");
    app.add_option("--seed", o.seed, "Monte Carlo seed");

    auto* th = app.add_subcommand("threshold", "bisect the threshold of the gadget recursion");
    th->add_option("--model", o.th_model)->check(CLI::IsMember(kModels));
    th->add_option("--j-max", o.th_j_max)->check(CLI::Range(5, 16));
    th->add_option("--tolerance", o.th_tolerance)->check(CLI::PositiveNumber);
    th->add_option("--first-level", o.th_first_level, "first level of the decreasing run")->check(CLI::Range(1, 15));
    th->add_option("--trace", o.th_trace, "write the recursion trace at the lower end to this CSV");

    auto* cv = app.add_subcommand("curves", "eps_css(j) and p(j|j-1) over an epsilon grid");
    cv->add_option("--model", o.cv_model)->check(CLI::IsMember(kModels));
    cv->add_option("--eps", o.cv_eps, "comma-separated epsilon values")->delimiter(',');
    cv->add_option("--j-max", o.cv_j_max)->check(CLI::Range(1, 16));

    auto* sim = app.add_subcommand("simulate", "Pauli-frame Monte Carlo with bound comparison");
    sim->add_option("--circuit", o.sim_circuit)->check(CLI::IsMember({"bp", "gadget", "purification"}));
    sim->add_option("--j", o.sim_j)->check(CLI::Range(0, 3));
    sim->add_option("--epsilon", o.sim_epsilon)->check(CLI::Range(0.0, 1.0));
    sim->add_option("--trials", o.sim_trials)->check(CLI::PositiveNumber);
    sim->add_option("--mode", o.sim_mode, "postselect or gadget-accept")
        ->check(CLI::IsMember({"postselect", "gadget-accept"}));
    sim->add_flag("--serial", o.sim_serial, "use the single-threaded reference loop");
    sim->add_option("--nsigma", o.sim_nsigma)->check(CLI::NonNegativeNumber);

    auto* anc = app.add_subcommand("ancilla", "decoding and ancilla failure bounds");
    anc->add_option("--model", o.anc_model)->check(CLI::IsMember(kModels));
    anc->add_option("--j", o.anc_j)->check(CLI::Range(1, 16));
    anc->add_option("--epsilon", o.anc_epsilon, "default .67e-3 (local-stochastic) or 1.25e-3 (depolarizing)");

    auto* ov = app.add_subcommand("overhead", "Bell-pair, CNOT and measurement counts");
    ov->add_option("--r", o.ov.r_count);
    ov->add_option("--s", o.ov.s_count);
    ov->add_option("--t", o.ov.t_count);
    ov->add_option("--n", o.ov.n);
    ov->add_option("--j", o.ov_j)->check(CLI::Range(1, 16));
    ov->add_option("--ell", o.ov.ell, "gadget growth base (default r * phi^2)");
    ov->add_option("--L", o.ov_L, "computation size");
    ov->add_option("--epsilon", o.ov_epsilon);
    ov->add_option("--eps0", o.ov_eps0);

    auto* dec = app.add_subcommand("decode", "decode leaf bitstrings, one block per line");
    dec->add_option("--file", o.dec_file)->required();
    dec->add_option("--level", o.dec_level, "expected level (default: from line length)")->check(CLI::Range(0, 8));
    dec->add_option("--basis", o.dec_basis)->check(CLI::IsMember({"Z", "X", "z", "x"}));
}

std::vector<std::string> apply_config(const std::vector<std::string>& args, const std::string& path) {
    const auto cfg = read_config(path);
    Options scratch;
    CLI::App probe;
    build_app(probe, scratch);

    size_t sub_pos = args.size();
    CLI::App* sub = nullptr;
    for (size_t k = 0; k < args.size(); k++) {
        if (auto* s = probe.get_subcommand_no_throw(args[k])) {
            sub = s;
            sub_pos = k;
            break;
        }
    }
    std::vector<std::string> globals, locals;
    for (const auto& [key, value] : cfg) {
        const std::string flag = "--" + key;
        if (key == "config") throw std::runtime_error("config files cannot include other config files");
        if (probe.get_option_no_throw(flag)) {
            globals.push_back(flag + "=" + value);
        } else if (sub && sub->get_option_no_throw(flag)) {
            locals.push_back(flag + "=" + value);
        } else {
            throw std::runtime_error("unknown config key '" + key + "'");
        }
    }
    std::vector<std::string> merged = globals;
    for (size_t k = 0; k < args.size(); k++) {
        merged.push_back(args[k]);
        if (k == sub_pos) merged.insert(merged.end(), locals.begin(), locals.end());
    }
    return merged;
}

std::string find_config(const std::vector<std::string>& args) {
    for (size_t k = 0; k < args.size(); k++) {
        if (args[k] == "--config" && k + 1 < args.size()) return args[k + 1];
        if (args[k].rfind("--config=", 0) == 0) return args[k].substr(9);
    }
    return "";
}

int cmd_threshold(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.th_first_level >= o.th_j_max) {
        err << "--first-level must be below --j-max\n";
        return kUsage;
    }
    const NoiseModel model = parse_noise_model(o.th_model);
    ThresholdResult t;
    try {
        t = threshold_scan(model, o.th_j_max, o.th_tolerance, o.th_first_level);
    } catch (const NonBracketing& e) {
        err << "threshold search did not bracket: " << e.what() << '\n';
        return kNonConvergence;
    }
    out << "model: " << o.th_model << '\n';
    out << "criterion: eps_css(j) strictly decreasing for j = " << t.first_level << ".." << t.j_max << '\n';
    out << "interval: [" << sci(t.lo) << ", " << sci(t.hi) << "]\n";
    out << "midpoint: " << sci(t.midpoint()) << '\n';
    out << "iterations: " << t.iterations << '\n';
    out << "eps_css(" << t.j_max << ") at lower end: " << sci(t.eps_css_at_lo.back()) << '\n';
    out << "j,eps_css,acceptance\n";
    for (int j = 1; j <= t.j_max; j++) {
        out << j << ',' << sci(t.eps_css_at_lo[j - 1]) << ',' << sci(t.acceptance_at_lo[j - 1]) << '\n';
    }
    if (!o.th_trace.empty()) {
        std::ofstream tf(o.th_trace);
        if (!tf) {
            err << "cannot write " << o.th_trace << '\n';
            return kUsage;
        }
        const NoiseParams p{t.lo, model};
        RecursionTrace all;
        const auto levels = build_profile(p, t.j_max);
        for (int j = 1; j <= t.j_max; j++) {
            all.append(levels[j].trace);
            all.append(gadget_noise(levels[j].profile, p).trace);
        }
        all.write_csv(tf);
    }
    return kOk;
}

int cmd_curves(const Options& o, std::ostream& out) {
    const auto eps = o.cv_eps.empty() ? default_eps_grid() : o.cv_eps;
    const auto rows = curves(parse_noise_model(o.cv_model), eps, o.cv_j_max);
    out << "epsilon,j,eps_css,acceptance\n";
    for (const auto& r : rows) {
        out << sci(r.epsilon) << ',' << r.j << ',' << sci(r.eps_css) << ',' << sci(r.acceptance) << '\n';
    }
    return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    Circuit c;
    if (o.sim_circuit == "bp") {
        c = build_bp_circuit(o.sim_j);
    } else if (o.sim_circuit == "gadget") {
        c = build_cnot_gadget(o.sim_j);
    } else {
        c = build_purification_circuit();
    }
    const SimMode mode = o.sim_mode.empty() ? default_mode(c.kind) : parse_sim_mode(o.sim_mode);
    const NoiseParams p{o.sim_epsilon, NoiseModel::IndependentDepolarizing};
    const SimStats s = o.sim_serial ? run_trials_serial(c, p, o.sim_trials, o.seed, mode)
                                    : run_trials(c, p, o.sim_trials, o.seed, mode);
    if (!s.has_conditional()) err << "warning: no accepted trials; conditional rates are undefined\n";
    auto bounds = analytic_bounds(c, o.sim_epsilon);
    const bool ok = check_dominance(s, bounds, o.sim_nsigma);

    out << SimStats::csv_header() << ",bound,verdict\n";
    for (const auto& r : s.rates) {
        out << s.circuit << ',' << s.j << ',' << sci(s.epsilon) << ',' << s.trials << ',' << s.accepted << ','
            << r.name << ',' << sci(r.rate()) << ',' << sci(r.halfwidth());
        const BoundCheck* b = nullptr;
        for (const auto& x : bounds) {
            if (x.rate_name == r.name) b = &x;
        }
        if (b) {
            out << ',' << sci(b->bound) << ',' << b->verdict << '\n';
        } else {
            out << ",,n/a\n";
        }
    }
    if (!ok) {
        err << "bound dominance check failed\n";
        return kDominanceFailure;
    }
    return kOk;
}

int cmd_ancilla(const Options& o, std::ostream& out, std::ostream& err) {
    const NoiseModel model = parse_noise_model(o.anc_model);
    double eps = o.anc_epsilon;
    if (eps < 0) eps = model == NoiseModel::LocalStochastic ? 0.67e-3 : 1.25e-3;
    if (eps > 1) {
        err << "--epsilon must be in [0,1]\n";
        return kUsage;
    }
    AncillaBounds b;
    try {
        b = ancilla_bounds({eps, model}, o.anc_j);
    } catch (const RecursionFailure& e) {
        err << e.what() << '\n';
        return kNonConvergence;
    }
    out << "model: " << o.anc_model << '\n';
    out << "epsilon: " << sci(eps) << '\n';
    out << "j: " << o.anc_j << '\n';
    out << "f_dec: " << sci(b.f_dec) << '\n';
    out << "eps_dec: " << sci(b.eps_dec) << '\n';
    out << "eps_anc: " << sci(b.eps_anc) << '\n';
    out << "distillation_threshold: " << sci(kDistillationThreshold) << '\n';
    out << "below_distillation_threshold: " << (b.eps_anc < kDistillationThreshold ? "yes" : "no") << '\n';
    return kOk;
}

int cmd_overhead(const Options& o, std::ostream& out) {
    const OverheadResult r = overhead(o.ov, o.ov_j, o.ov_L, o.ov_epsilon, o.ov_eps0);
    const auto pm = parallel_multipliers();
    out << "j: " << o.ov_j << '\n';
    out << "B: " << r.B << '\n';
    out << "C: " << r.C << '\n';
    out << "M: " << r.M << '\n';
    out << "C_closed: " << r.C_closed << '\n';
    out << "M_closed: " << r.M_closed << '\n';
    out << "closed_forms_agree: " << (r.C == r.C_closed && r.M == r.M_closed ? "yes" : "no") << '\n';
    out << "M_parallel: " << sci(pm.M_parallel) << '\n';
    out << "N_parallel: " << sci(pm.N_parallel) << '\n';
    out << "overhead_factor_estimate: " << sci(r.overhead_factor_estimate) << '\n';
    return kOk;
}

int cmd_decode(const Options& o, std::ostream& out, std::ostream& err) {
    std::ifstream in(o.dec_file);
    if (!in) {
        err << "cannot read " << o.dec_file << '\n';
        return kUsage;
    }
    const MeasurementBasis basis = parse_basis(o.dec_basis);
    std::string line;
    std::vector<std::string> results;
    for (int lineno = 1; std::getline(in, line); lineno++) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        MeasurementRecord rec;
        rec.basis = basis;
        for (char ch : line) {
            if (ch != '0' && ch != '1') {
                err << o.dec_file << ':' << lineno << ": expected only '0' and '1'\n";
                return kUsage;
            }
            rec.leaves.push_back(static_cast<uint8_t>(ch - '0'));
        }
        rec.level = level_of_leaf_count(rec.leaves.size());
        if (rec.level < 1 || (o.dec_level > 0 && rec.level != o.dec_level)) {
            err << o.dec_file << ':' << lineno << ": block length " << rec.leaves.size()
                << " is not 4^level\n";
            return kUsage;
        }
        const DecodeResult d = decode_recursive(rec);
        results.push_back(std::to_string(d.value) + (d.flagged ? " true" : " false"));
    }
    for (const auto& r : results) out << r << '\n';
    return kOk;
}

}  // namespace

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::map<std::string, std::string> cfg;
    std::string line;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    for (int lineno = 1; std::getline(in, line); lineno++) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty key");
        cfg[key] = value;
    }
    return cfg;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    Options o;
    CLI::App app("Fibonacci-scheme fault-tolerance analysis and simulation", "fibft");
    build_app(app, o);
    try {
        const std::string cfg = find_config(args);
        if (!cfg.empty()) args = apply_config(args, cfg);
        std::vector<const char*> cargv{argv[0]};
        for (const auto& a : args) cargv.push_back(a.c_str());
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    std::unique_ptr<std::ofstream> file;
    std::ostream* sink = &out;
    if (!o.out.empty()) {
        file = std::make_unique<std::ofstream>(o.out);
        if (!*file) {
            err << "error: cannot write " << o.out << '\n';
            return kUsage;
        }
        sink = file.get();
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        if (name == "threshold") return cmd_threshold(o, *sink, err);
        if (name == "curves") return cmd_curves(o, *sink);
        if (name == "simulate") return cmd_simulate(o, *sink, err);
        if (name == "ancilla") return cmd_ancilla(o, *sink, err);
        if (name == "overhead") return cmd_overhead(o, *sink);
        if (name == "decode") return cmd_decode(o, *sink, err);
    } catch (const RecursionFailure& e) {
        err << "error: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace fibft::cli
