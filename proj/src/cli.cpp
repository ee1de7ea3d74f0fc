#include "npsim/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <cctype>
#include <fstream>
#include <sstream>

#include "npsim/extension.hpp"
#include "npsim/machines.hpp"
#include "npsim/oracle.hpp"

namespace npsim {

namespace fs = std::filesystem;

namespace {

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CliError("cannot open input file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    if (path.empty()) return;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw CliError("cannot write output file: " + path);
    f << text;
}

ProblemInstance load_instance(Variant v, const std::string& path) {
    std::string text = read_file(path);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    try {
        return parse_instance(problem_of(v), text);
    } catch (const ParseError& e) {
        throw CliError("parse error in " + path + ": " + e.what());
    }
}

std::string metrics_json(const RunMetrics& m) {
    nlohmann::ordered_json j;
    j["tape_len"] = m.tape_len;
    j["cert_len"] = m.cert_len;
    j["total_edges"] = m.total_edges;
    j["direct_ext"] = m.direct_ext;
    j["verified_ext"] = m.verified_ext;
    j["candidates_verified"] = m.candidates_verified;
    j["disjoint_edges"] = m.disjoint_edges;
    j["pruned_walks"] = m.pruned_walks;
    j["halting_edges"] = m.halting_edges;
    j["max_walks"] = m.max_walks;
    j["avg_walk_len"] = m.avg_walk_len;
    j["decision"] = outcome_name(m.decision);
    j["witness"] = m.witness;
    j["elapsed"] = m.elapsed;
    return j.dump(2) + "\n";
}

// Direct run of the machine on the instance with `cert` appended.
std::string trace_text(Variant v, const ProblemInstance& inst, bool sanitize, const std::string& cert,
                       std::optional<std::size_t> max_steps) {
    Machine m(build_machine(v, inst, sanitize));
    EncodedTape tape = encode_instance(inst, cert);
    RunResult rr = run_direct(m, tape.tokens, max_steps.value_or(default_max_steps(tape.tokens.size())));
    std::ostringstream os;
    os << "# certificate " << cert << "\n";
    for (std::size_t i = 0; i < rr.trace.size(); ++i) {
        const auto& s = rr.trace[i];
        os << i << '\t' << m.state_name(s.state) << '\t' << s.head << '\t' << m.symbol_name(s.read) << '\t'
           << m.symbol_name(s.write) << '\t' << (s.move < 0 ? "L" : "R") << '\n';
    }
    os << "# " << decision_name(rr.decision) << "\n";
    return os.str();
}

std::optional<std::size_t> env_max_steps() {
    const char* s = std::getenv("NPSIM_MAX_STEPS");
    if (!s || !*s) return std::nullopt;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (*end || v == 0) throw CliError(std::string("invalid NPSIM_MAX_STEPS: ") + s);
    return static_cast<std::size_t>(v);
}

Variant machine_arg(const std::string& name) {
    auto v = parse_variant(name);
    if (!v) throw CliError("unknown machine: " + name);
    return *v;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const ProblemInstance inst = load_instance(cfg.machine, cfg.input);
        SimulationOptions opts;
        opts.sanitize = cfg.sanitize;
        opts.max_steps = cfg.max_steps;
        opts.keep_graph = !cfg.graph_dump_path.empty();
        SimulationResult r = simulate(cfg.machine, inst, opts);

        const std::string metrics = format_metrics(r.metrics);
        out << metrics;
        write_file(cfg.metrics_path, metrics);
        write_file(cfg.metrics_json_path, metrics_json(r.metrics));
        write_file(cfg.graph_dump_path, r.graph_dump);

        if (r.outcome == Outcome::budget) {
            err << "budget exhausted: " << r.budget_reason << "\n";
            return exit_error;
        }
        const bool accepted = r.outcome == Outcome::accept;
        if (accepted) write_file(cfg.witness_path, *r.witness);

        if (!cfg.trace_path.empty()) {
            std::string cert;
            if (accepted)
                cert = *r.witness;
            else if (!r.rejected_witnesses.empty())
                cert = r.rejected_witnesses.front();
            write_file(cfg.trace_path, trace_text(cfg.machine, inst, cfg.sanitize, cert, cfg.max_steps));
        }

        if (cfg.oracle) {
            OracleResult o = analytic_oracle(inst);
            const bool witness_ok = !accepted || witness_valid(inst, *r.witness);
            out << "oracle=" << (o.yes ? "accept" : "reject") << "\n";
            if (o.yes != accepted || !witness_ok) {
                err << "oracle mismatch: simulator " << outcome_name(r.outcome) << ", oracle "
                    << (o.yes ? "accept" : "reject");
                if (!witness_ok) err << ", witness " << *r.witness << " invalid";
                err << "\n";
                return exit_mismatch;
            }
        }
        return accepted ? exit_accept : exit_reject;
    } catch (const CliError& e) {
        err << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return exit_error;
}

int batch_command(const BatchConfig& cfg, std::ostream& out, std::ostream& err) {
    std::error_code ec;
    if (!fs::is_directory(cfg.dir, ec)) {
        err << "not a directory: " << cfg.dir << "\n";
        return exit_error;
    }
    std::vector<fs::path> files;
    for (const auto& de : fs::directory_iterator(cfg.dir))
        if (de.is_regular_file()) files.push_back(de.path());
    std::sort(files.begin(), files.end());

    out << "instance\ttape_len\tcert_len\ttotal_edges\tdirect_ext\tverified_ext\tcandidates_verified\t"
           "disjoint_edges\tpruned_walks\thalting_edges\tmax_walks\tavg_walk_len\tdecision\twitness";
    if (cfg.with_elapsed) out << "\telapsed";
    out << "\n";

    bool failed = false;
    for (const auto& p : files) {
        const std::string name = p.filename().string();
        try {
            const ProblemInstance inst = load_instance(cfg.machine, p.string());
            SimulationOptions opts;
            opts.sanitize = cfg.sanitize;
            opts.max_steps = cfg.max_steps;
            const SimulationResult r = simulate(cfg.machine, inst, opts);
            const RunMetrics& m = r.metrics;
            char avg[64];
            std::snprintf(avg, sizeof avg, "%.2f", m.avg_walk_len);
            out << name << '\t' << m.tape_len << '\t' << m.cert_len << '\t' << m.total_edges << '\t' << m.direct_ext
                << '\t' << m.verified_ext << '\t' << m.candidates_verified << '\t' << m.disjoint_edges << '\t'
                << m.pruned_walks << '\t' << m.halting_edges << '\t' << m.max_walks << '\t' << avg << '\t'
                << outcome_name(m.decision) << '\t' << (m.witness.empty() ? "-" : m.witness);
            if (cfg.with_elapsed) {
                char el[64];
                std::snprintf(el, sizeof el, "%.3f", m.elapsed);
                out << '\t' << el;
            }
            out << "\n";
        } catch (const std::exception& e) {
            failed = true;
            out << name << "\terror\n";
            err << name << ": " << e.what() << "\n";
        }
    }
    return failed ? exit_error : exit_accept;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Footmarks simulation of NP verifier machines"};
    app.require_subcommand(1);

    std::string machine;
    RunConfig rc;
    std::optional<std::size_t> steps;

    auto* run = app.add_subcommand("run", "Simulate one instance");
    run->add_option("--machine,-m", machine, "sat-id, sat-fixed or subset-sum")->required();
    run->add_option("--input,-i", rc.input, "Instance file")->required();
    run->add_flag("--sanitize", rc.sanitize, "Prepend the sanitization block");
    run->add_flag("--oracle", rc.oracle, "Cross-check with the analytic oracle");
    run->add_option("--max-steps", steps, "Per-branch step budget");
    run->add_option("--metrics", rc.metrics_path, "Write key=value metrics");
    run->add_option("--metrics-json", rc.metrics_json_path, "Write metrics as JSON");
    run->add_option("--witness", rc.witness_path, "Write the accepted certificate");
    run->add_option("--trace", rc.trace_path, "Write the direct run of the witness");
    run->add_option("--graph-dump", rc.graph_dump_path, "Write the footmarks edge list");

    BatchConfig bc;
    bool no_elapsed = false;
    auto* batch = app.add_subcommand("batch", "Simulate every instance file in a directory");
    batch->add_option("--machine,-m", machine, "sat-id, sat-fixed or subset-sum")->required();
    batch->add_option("dir", bc.dir, "Instance directory")->required();
    batch->add_flag("--sanitize", bc.sanitize, "Prepend the sanitization block");
    batch->add_flag("--no-elapsed", no_elapsed, "Omit the wall-clock column");
    batch->add_option("--max-steps", steps, "Per-branch step budget");

    std::string oracle_input;
    bool exhaustive = false;
    auto* oracle = app.add_subcommand("oracle", "Decide an instance by brute force");
    oracle->add_option("--machine,-m", machine, "sat-id, sat-fixed or subset-sum")->required();
    oracle->add_option("--input,-i", oracle_input, "Instance file")->required();
    oracle->add_flag("--exhaustive", exhaustive, "Also run the machine on every certificate");

    std::string dump_input;
    int vars = 10;
    bool dump_sanitize = false;
    bool instantiated = false;
    auto* dump = app.add_subcommand("dump-tm", "Print a machine's transition table");
    dump->add_option("--machine,-m", machine, "sat-id, sat-fixed or subset-sum")->required();
    dump->add_option("--input,-i", dump_input, "Instance file fixing the variable count");
    dump->add_option("--vars", vars, "Variable count when no input is given")->check(CLI::PositiveNumber);
    dump->add_flag("--sanitize", dump_sanitize, "Include the sanitization block");
    dump->add_flag("--instantiated", instantiated, "Print every resolved (state, symbol) pair");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        if (!rev.empty()) rev.pop_back();
        app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : exit_error;
    }

    try {
        const Variant v = machine_arg(machine);
        if (!steps) steps = env_max_steps();
        if (*run) {
            rc.machine = v;
            rc.max_steps = steps;
            return run_command(rc, out, err);
        }
        if (*batch) {
            bc.machine = v;
            bc.max_steps = steps;
            bc.with_elapsed = !no_elapsed;
            return batch_command(bc, out, err);
        }
        if (*oracle) {
            const ProblemInstance inst = load_instance(v, oracle_input);
            OracleResult o = analytic_oracle(inst);
            out << "analytic=" << yes_no(o.yes) << "\n";
            if (o.witness) out << "witness=" << *o.witness << "\n";
            if (exhaustive) {
                OracleResult x = exhaustive_tm_decide(v, inst);
                if (x.budget_exceeded) {
                    err << "exhaustive search exceeded its certificate budget\n";
                    return exit_error;
                }
                out << "exhaustive=" << yes_no(x.yes) << "\n";
                if (x.yes != o.yes) {
                    err << "oracle mismatch: analytic " << yes_no(o.yes) << ", exhaustive " << yes_no(x.yes) << "\n";
                    return exit_mismatch;
                }
            }
            return o.yes ? exit_accept : exit_reject;
        }
        if (*dump) {
            ProblemInstance inst;
            if (!dump_input.empty()) {
                inst = load_instance(v, dump_input);
            } else {
                inst.kind = problem_of(v);
                inst.var_count = vars;
            }
            MachineSpec spec = build_machine(v, inst, dump_sanitize);
            if (instantiated)
                out << dump_instantiated(Machine(std::move(spec)));
            else
                out << dump_rules(spec);
            return exit_accept;
        }
    } catch (const CliError& e) {
        err << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return exit_error;
}

}  // namespace npsim
