#include "vpnd/bench.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "vpnd/exact.hpp"
#include "vpnd/instance.hpp"
#include "vpnd/oracle.hpp"
#include "vpnd/ssf.hpp"

namespace vpnd {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool within_capacity_caps(const Instance& instance) {
    if (static_cast<int>(instance.terminals().size()) > OracleCaps::kMaxTerminalsCapacity)
        return false;
    for (VertexId w : instance.terminals())
        if (instance.demand(w) > OracleCaps::kMaxDemandCapacity) return false;
    return true;
}

std::string csv_body(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "instance,seed,exact_linear,cvpnd_value,oracle_value,ratio,feasible,ms\n";
    for (const BenchRow& r : rows) {
        out << r.instance << ',' << r.seed << ',' << to_string(r.exact_linear) << ','
            << to_string(r.cvpnd_value) << ','
            << (r.oracle_value ? to_string(*r.oracle_value) : std::string()) << ','
            << to_string(r.ratio) << ','
            << (r.feasible ? (*r.feasible ? "true" : "false") : "") << ',' << r.ms << '\n';
    }
    return out.str();
}

std::string json_body(const BenchReport& report) {
    nlohmann::json doc;
    doc["rows"] = nlohmann::json::array();
    for (const BenchRow& r : report.rows) {
        nlohmann::json row;
        row["instance"] = r.instance;
        row["seed"] = r.seed;
        row["exact_linear"] = to_string(r.exact_linear);
        row["cvpnd_value"] = to_string(r.cvpnd_value);
        row["oracle_value"] =
            r.oracle_value ? nlohmann::json(to_string(*r.oracle_value)) : nlohmann::json();
        row["ratio"] = to_string(r.ratio);
        row["feasible"] = r.feasible ? nlohmann::json(*r.feasible) : nlohmann::json();
        row["ms"] = r.ms;
        doc["rows"].push_back(std::move(row));
    }
    doc["max_ratio"] = to_string(report.max_ratio);
    doc["all_feasible"] = report.all_feasible;
    doc["ok"] = report.ok;
    return doc.dump(2) + "\n";
}

}  // namespace

BenchReport run_bench(const BenchOptions& options) {
    const bool linear_cost = options.cost_fn.breakpoints().size() == 1;
    BenchReport report;
    report.max_ratio = 0;

    for (const std::string& path : options.instance_paths) {
        const Instance instance = parse_vpnd_file(read_file(path)).instance;
        for (std::uint64_t seed : options.seeds) {
            const auto t0 = std::chrono::steady_clock::now();
            BenchRow row;
            row.instance = path;
            row.seed = seed;
            row.exact_linear = solve_exact_linear(instance).value;
            CvpndResult cv =
                solve_cvpnd(instance, options.cost_fn, seed, options.repetitions);
            row.cvpnd_value = cv.value;
            if (instance.vertex_count() <= OracleCaps::kMaxVerticesTree)
                row.oracle_value = optimal_tree_oracle(instance, options.cost_fn).value;

            // The lower bound to gate on: the tree oracle when the instance
            // is small enough, otherwise exact_linear, which is the true
            // optimum only for a linear cost function.
            const Rational& bound = row.oracle_value ? *row.oracle_value : row.exact_linear;
            const bool gated = row.oracle_value.has_value() || linear_cost;
            if (bound != 0) {
                row.ratio = row.cvpnd_value / bound;
            } else if (row.cvpnd_value == 0) {
                row.ratio = 1;
            } else {
                // A zero optimum with a nonzero solution has no finite
                // ratio; report the raw value and fail the gate.
                row.ratio = row.cvpnd_value;
                if (gated) report.ok = false;
            }
            if (gated && row.ratio > kApproxRatioBound) report.ok = false;
            if (row.ratio > report.max_ratio) report.max_ratio = row.ratio;

            if (within_capacity_caps(instance)) {
                FeasibilityReport fr = verify_feasible(instance, extract_paths(cv.solution));
                row.feasible = fr.feasible;
                if (!fr.feasible) {
                    report.all_feasible = false;
                    report.ok = false;
                }
            }

            const auto t1 = std::chrono::steady_clock::now();
            row.ms = options.timing
                         ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
                         : 0;
            report.rows.push_back(std::move(row));
        }
    }

    report.body = options.format == ReportFormat::Csv ? csv_body(report.rows) : json_body(report);
    return report;
}

void write_report(const BenchReport& report, const std::string& out_path) {
    if (out_path == "-") {
        std::cout << report.body;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write report: " + out_path);
    out << report.body;
}

}  // namespace vpnd
