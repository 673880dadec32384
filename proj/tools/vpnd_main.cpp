#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vpnd/bench.hpp"
#include "vpnd/exact.hpp"
#include "vpnd/generator.hpp"
#include "vpnd/instance.hpp"
#include "vpnd/oracle.hpp"
#include "vpnd/ssf.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw vpnd::Error("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& body) {
    if (path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw vpnd::Error("cannot write output: " + path);
    out << body;
}

// Cost function precedence: --costfn file, else the block embedded in the
// instance file, else the identity (plain linear VPND).
vpnd::ConcaveCost resolve_cost_fn(const std::string& costfn_path,
                                  const std::optional<vpnd::ConcaveCost>& embedded) {
    if (!costfn_path.empty()) return vpnd::parse_cost_fn(read_file(costfn_path));
    if (embedded) return *embedded;
    return vpnd::ConcaveCost::identity();
}

struct GenOpts {
    std::string kind = "random-connected";
    vpnd::GenParams params;
    std::string edge_prob = "1/2";
    std::uint64_t seed = 1;
    std::string out = "-";
};

int run_gen(const GenOpts& opts) {
    vpnd::GenParams params = opts.params;
    if (opts.kind == "random-connected")
        params.kind = vpnd::InstanceKind::RandomConnected;
    else if (opts.kind == "grid")
        params.kind = vpnd::InstanceKind::Grid;
    else if (opts.kind == "star")
        params.kind = vpnd::InstanceKind::Star;
    else
        params.kind = vpnd::InstanceKind::Path;
    const auto prob = vpnd::parse_rational(opts.edge_prob);
    if (!prob) throw vpnd::Error("gen: --edge-prob is not a rational: " + opts.edge_prob);
    params.edge_prob = *prob;
    write_output(opts.out, vpnd::serialize_instance(vpnd::gen_instance(params, opts.seed)));
    return 0;
}

struct SolveExactOpts {
    std::string instance_path;
    std::string out = "-";
};

int run_solve_exact(const SolveExactOpts& opts) {
    const vpnd::Instance instance = vpnd::parse_vpnd_file(read_file(opts.instance_path)).instance;
    const vpnd::ExactResult res = vpnd::solve_exact_linear(instance);
    std::ostringstream body;
    body << "value " << vpnd::to_string(res.value) << "\n";
    body << "root " << res.root + 1 << "\n";
    body << vpnd::serialize_tree_solution(res.solution, vpnd::ConcaveCost::identity());
    write_output(opts.out, body.str());
    return 0;
}

struct SolveCvpndOpts {
    std::string instance_path;
    std::string costfn_path;
    std::uint64_t seed = 1;
    int reps = 10;
    std::string out = "-";
};

int run_solve_cvpnd(const SolveCvpndOpts& opts) {
    const vpnd::ParsedFile parsed = vpnd::parse_vpnd_file(read_file(opts.instance_path));
    const vpnd::ConcaveCost f = resolve_cost_fn(opts.costfn_path, parsed.cost_fn);
    const vpnd::CvpndResult res =
        vpnd::solve_cvpnd(parsed.instance, f, opts.seed, opts.reps);
    std::ostringstream body;
    body << "value " << vpnd::to_string(res.value) << "\n";
    body << "source " << res.source + 1 << "\n";
    body << "seed " << res.seed << "\n";
    body << vpnd::serialize_tree_solution(res.solution, f);
    write_output(opts.out, body.str());
    return 0;
}

struct EvalTreeOpts {
    std::string instance_path;
    std::string tree_path;
    std::string costfn_path;
    bool check = false;
    std::string out = "-";
};

int run_eval_tree(const EvalTreeOpts& opts) {
    const vpnd::ParsedFile parsed = vpnd::parse_vpnd_file(read_file(opts.instance_path));
    const vpnd::ConcaveCost f = resolve_cost_fn(opts.costfn_path, parsed.cost_fn);
    const vpnd::ParsedTree stated =
        vpnd::parse_tree_solution(parsed.instance, read_file(opts.tree_path));
    const vpnd::TreeSolution tree = vpnd::TreeSolution::make(parsed.instance, stated.edges);
    write_output(opts.out, vpnd::serialize_tree_solution(tree, f));
    if (!opts.check) return 0;

    int rc = 0;
    for (std::size_t i = 0; i < tree.edges().size(); ++i) {
        const vpnd::EdgeId e = tree.edges()[i];
        auto it = stated.stated_capacities.find(e);
        if (it == stated.stated_capacities.end() || it->second != tree.capacities()[i]) {
            const vpnd::Edge& ed = parsed.instance.edge(e);
            std::cerr << "check: capacity mismatch on edge " << ed.u + 1 << " " << ed.v + 1
                      << ": stated "
                      << (it == stated.stated_capacities.end() ? std::string("(missing)")
                                                               : vpnd::to_string(it->second))
                      << ", computed " << vpnd::to_string(tree.capacities()[i]) << "\n";
            rc = 1;
        }
    }
    if (stated.stated_capacities.size() != tree.edges().size()) {
        std::cerr << "check: stated tree has " << stated.stated_capacities.size()
                  << " edges, canonical tree has " << tree.edges().size() << "\n";
        rc = 1;
    }
    const vpnd::Rational cost = vpnd::tree_cost(tree, f);
    if (stated.stated_cost != cost) {
        std::cerr << "check: cost mismatch: stated " << vpnd::to_string(stated.stated_cost)
                  << ", computed " << vpnd::to_string(cost) << "\n";
        rc = 1;
    }
    if (rc == 0) std::cerr << "check: ok\n";
    return rc;
}

struct OracleOpts {
    std::string instance_path;
    std::string op = "tree";
    std::string costfn_path;
    std::string out = "-";
};

int run_oracle(const OracleOpts& opts) {
    const vpnd::ParsedFile parsed = vpnd::parse_vpnd_file(read_file(opts.instance_path));
    const vpnd::ConcaveCost f = resolve_cost_fn(opts.costfn_path, parsed.cost_fn);
    std::ostringstream body;
    if (opts.op == "tree") {
        const vpnd::TreeOracleResult res = vpnd::optimal_tree_oracle(parsed.instance, f);
        body << "value " << vpnd::to_string(res.value) << "\n";
        body << vpnd::serialize_tree_solution(
            vpnd::TreeSolution::make(parsed.instance, res.tree_edges), f);
    } else if (opts.op == "routing") {
        body << "value " << vpnd::to_string(vpnd::optimal_routing_oracle(parsed.instance, f))
             << "\n";
    } else {  // steiner over the terminal set
        const vpnd::SteinerOracleResult res =
            vpnd::steiner_tree_optimum(parsed.instance, parsed.instance.terminals());
        body << "value " << vpnd::to_string(res.value) << "\n";
        for (vpnd::EdgeId e : res.tree_edges) {
            const vpnd::Edge& ed = parsed.instance.edge(e);
            body << "edge " << ed.u + 1 << " " << ed.v + 1 << "\n";
        }
    }
    write_output(opts.out, body.str());
    return 0;
}

struct VerifyOpts {
    std::string instance_path;
    std::string tree_path;
    std::string out = "-";
};

int run_verify(const VerifyOpts& opts) {
    const vpnd::Instance instance = vpnd::parse_vpnd_file(read_file(opts.instance_path)).instance;
    const vpnd::ParsedTree stated =
        vpnd::parse_tree_solution(instance, read_file(opts.tree_path));
    // Paths come from the tree, capacities are the stated ones: the verifier
    // judges the file as written, not a recomputation of it.
    const vpnd::TreeSolution tree = vpnd::TreeSolution::make(instance, stated.edges);
    const vpnd::Routing routing =
        vpnd::Routing::make(instance, vpnd::extract_paths(tree).paths(),
                            stated.stated_capacities);
    const vpnd::FeasibilityReport report = vpnd::verify_feasible(instance, routing);
    std::ostringstream body;
    if (report.feasible) {
        body << "feasible\n";
        write_output(opts.out, body.str());
        return 0;
    }
    const vpnd::Edge& ed = instance.edge(*report.violating_edge);
    body << "infeasible\n";
    body << "edge " << ed.u + 1 << " " << ed.v + 1 << "\n";
    body << "required " << vpnd::to_string(*report.required) << "\n";
    body << "installed " << vpnd::to_string(*report.installed) << "\n";
    body << report.certificate->serialize();
    write_output(opts.out, body.str());
    return 1;
}

struct BenchOpts {
    std::vector<std::string> instance_paths;
    std::string costfn_path;
    std::vector<std::uint64_t> seeds;
    int reps = 10;
    std::string format = "csv";
    std::string out = "-";
    bool timing = false;
};

int run_bench_cmd(const BenchOpts& opts) {
    vpnd::BenchOptions options;
    options.instance_paths = opts.instance_paths;
    options.cost_fn = opts.costfn_path.empty() ? vpnd::ConcaveCost::identity()
                                               : vpnd::parse_cost_fn(read_file(opts.costfn_path));
    if (!opts.seeds.empty()) options.seeds = opts.seeds;
    options.repetitions = opts.reps;
    options.format =
        opts.format == "json" ? vpnd::ReportFormat::Json : vpnd::ReportFormat::Csv;
    options.timing = opts.timing;

    const auto t0 = std::chrono::steady_clock::now();
    const vpnd::BenchReport report = vpnd::run_bench(options);
    const auto t1 = std::chrono::steady_clock::now();
    vpnd::write_report(report, opts.out);
    std::cerr << "bench: rows=" << report.rows.size() << " max_ratio="
              << vpnd::to_string(report.max_ratio)
              << " all_feasible=" << (report.all_feasible ? "true" : "false") << " elapsed_ms="
              << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() << "\n";
    return report.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Virtual private network design: exact and approximate solvers"};
    app.require_subcommand(1);
    int rc = 0;

    GenOpts gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file");
    gen_cmd->add_option("--kind", gen.kind, "Instance family")
        ->check(CLI::IsMember({"random-connected", "grid", "star", "path"}));
    gen_cmd->add_option("--n", gen.params.n, "Vertex count (random-connected, path)");
    gen_cmd->add_option("--rows", gen.params.rows, "Grid rows");
    gen_cmd->add_option("--cols", gen.params.cols, "Grid columns");
    gen_cmd->add_option("--k", gen.params.k, "Star leaf count");
    gen_cmd->add_option("--edge-prob", gen.edge_prob, "Edge probability, rational");
    gen_cmd->add_option("--max-cost", gen.params.max_cost, "Edge costs drawn from 1..max-cost");
    gen_cmd->add_option("--max-demand", gen.params.max_demand,
                        "Demands drawn from 0..max-demand");
    gen_cmd->add_option("--seed", gen.seed, "RNG seed");
    gen_cmd->add_option("--out", gen.out, "Output path, - for stdout");
    gen_cmd->callback([&] { rc = run_gen(gen); });

    SolveExactOpts exact;
    auto* exact_cmd = app.add_subcommand("solve-exact", "Exact linear VPND solver");
    exact_cmd->add_option("instance", exact.instance_path, "Instance file")->required();
    exact_cmd->add_option("--out", exact.out, "Output path, - for stdout");
    exact_cmd->callback([&] { rc = run_solve_exact(exact); });

    SolveCvpndOpts cvpnd;
    auto* cvpnd_cmd = app.add_subcommand("solve-cvpnd", "Concave-cost VPND approximation");
    cvpnd_cmd->add_option("instance", cvpnd.instance_path, "Instance file")->required();
    cvpnd_cmd->add_option("--costfn", cvpnd.costfn_path, "Cost function file");
    cvpnd_cmd->add_option("--seed", cvpnd.seed, "RNG seed");
    cvpnd_cmd->add_option("--reps", cvpnd.reps, "Repetitions per candidate source")
        ->check(CLI::PositiveNumber);
    cvpnd_cmd->add_option("--out", cvpnd.out, "Output path, - for stdout");
    cvpnd_cmd->callback([&] { rc = run_solve_cvpnd(cvpnd); });

    EvalTreeOpts eval;
    auto* eval_cmd = app.add_subcommand("eval-tree", "Recompute capacities and cost of a tree");
    eval_cmd->add_option("instance", eval.instance_path, "Instance file")->required();
    eval_cmd->add_option("tree", eval.tree_path, "Tree solution file")->required();
    eval_cmd->add_option("--costfn", eval.costfn_path, "Cost function file");
    eval_cmd->add_flag("--check", eval.check, "Exit 1 when the stated values disagree");
    eval_cmd->add_option("--out", eval.out, "Output path, - for stdout");
    eval_cmd->callback([&] { rc = run_eval_tree(eval); });

    OracleOpts oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force ground truth (small instances)");
    oracle_cmd->add_option("instance", oracle.instance_path, "Instance file")->required();
    oracle_cmd->add_option("--op", oracle.op, "Oracle to run")
        ->check(CLI::IsMember({"tree", "routing", "steiner"}));
    oracle_cmd->add_option("--costfn", oracle.costfn_path, "Cost function file");
    oracle_cmd->add_option("--out", oracle.out, "Output path, - for stdout");
    oracle_cmd->callback([&] { rc = run_oracle(oracle); });

    VerifyOpts verify;
    auto* verify_cmd =
        app.add_subcommand("verify", "Check a tree solution file against worst-case demands");
    verify_cmd->add_option("instance", verify.instance_path, "Instance file")->required();
    verify_cmd->add_option("tree", verify.tree_path, "Tree solution file")->required();
    verify_cmd->add_option("--out", verify.out, "Output path, - for stdout");
    verify_cmd->callback([&] { rc = run_verify(verify); });

    BenchOpts bench;
    auto* bench_cmd = app.add_subcommand("bench", "Benchmark solvers over instance files");
    bench_cmd->add_option("instances", bench.instance_paths, "Instance files")->required();
    bench_cmd->add_option("--costfn", bench.costfn_path, "Cost function file");
    bench_cmd->add_option("--seed", bench.seeds, "RNG seed (repeatable)");
    bench_cmd->add_option("--reps", bench.reps, "Repetitions per candidate source")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--format", bench.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}));
    bench_cmd->add_option("--out", bench.out, "Report path, - for stdout");
    bench_cmd->add_flag("--timing", bench.timing, "Record wall time in the ms column");
    bench_cmd->callback([&] { rc = run_bench_cmd(bench); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const vpnd::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
