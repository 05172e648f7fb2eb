// result_io.hpp — run configuration, result records, and serialization.
//
// A RunConfig captures one CLI invocation (graph block, setup block, one
// operation selector, output options, tolerance overrides). Each cmd_*
// function executes the operation and returns a ResultRecord whose config
// echo is sufficient to reproduce the run exactly. Writers emit CSV (17
// significant digits) or JSON.

#pragma once

#include "qfd/detection.hpp"
#include "qfd/experiments.hpp"
#include "qfd/graphs.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qfd {

struct RunConfig {
    std::string op;  // pdet simulate sweep spectrum density bases census verify

    // graph block
    std::string graph = "ring";
    int L = 6;
    double alpha = 0.0;
    int d = 3;
    int generations = 2;
    double gamma = 1.0;
    std::string edges_file;

    // setup block
    double tau = 1.0;
    std::string r_in = "1";
    std::string r_d;  // empty: graph-dependent default (ring: L, others: 0)
    std::string psi_in_file;
    int n_max = 50;

    // operation parameters
    std::vector<double> alphas;
    std::vector<double> taus;
    std::vector<int> at;  // density snapshot measurement counts
    double threshold = 0.002;
    std::string census_mode = "symmetric";
    int samples = 8;  // verify: pole-duality sample count

    // output
    std::string format = "csv";
    std::string out;

    // tolerance overrides
    double tol_phase = tol::phase;
    double tol_degeneracy = tol::degeneracy_rel;
    double tol_dark = tol::completely_dark;
};

struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct BasisEntry {
    std::string kind;  // "bright" or "dark"
    int sector = 0;
    int index = 0;
    Vec state;
};

struct ResultRecord {
    std::vector<std::pair<std::string, std::string>> config;  // echo, ordered
    std::vector<std::pair<std::string, double>> scalars;
    std::optional<ResultTable> table;
    std::vector<BasisEntry> bases;
    int exit_code = 0;  // 0 ok, 3 numerical-consistency failure
};

// Exit codes: 0 success, 2 validation, 3 numerical consistency, 4 resource
// guard.
inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_numerical = 3;
inline constexpr int exit_resource = 4;

// %.17g formatting used by every CSV writer.
std::string fmt17(double value);

// Graph and setup resolution shared by the commands.
GraphSpec graph_from_config(const RunConfig& config);
std::string default_r_d(const RunConfig& config);

// Rebuilds a RunConfig from a record's config echo (reproduction path).
RunConfig config_from_echo(
    const std::vector<std::pair<std::string, std::string>>& echo);

ResultRecord cmd_pdet(const RunConfig& config);
ResultRecord cmd_simulate(const RunConfig& config);
ResultRecord cmd_sweep(const RunConfig& config);
ResultRecord cmd_spectrum(const RunConfig& config);
ResultRecord cmd_density(const RunConfig& config);
ResultRecord cmd_bases(const RunConfig& config);
ResultRecord cmd_census(const RunConfig& config);
ResultRecord cmd_verify(const RunConfig& config);

// Dispatch on config.op.
ResultRecord run_config(const RunConfig& config);

void write_csv(const ResultRecord& record, std::ostream& os);
void write_json(const ResultRecord& record, std::ostream& os);

// Writes in the configured format to config.out (or the stream when out is
// empty); returns the record's exit code.
int write_record(const ResultRecord& record, const RunConfig& config,
                 std::ostream& fallback);

}  // namespace qfd
