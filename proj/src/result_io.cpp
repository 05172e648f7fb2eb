#include "qfd/result_io.hpp"

#include "qfd/ring_walk.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qfd {

std::string fmt17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::string join17(const std::vector<double>& values) {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += fmt17(values[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(values[i]);
    }
    return out;
}

std::vector<double> split_doubles(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::vector<int> split_ints(const std::string& text) {
    std::vector<int> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

Vec read_state_file(const std::string& path, int expected_dim) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open state file " + path);
    }
    std::vector<cxd> amps;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::istringstream ls(line);
        double re = 0.0, im = 0.0;
        if (!(ls >> re)) continue;
        ls >> im;
        amps.emplace_back(re, im);
    }
    if (static_cast<int>(amps.size()) != expected_dim) {
        std::ostringstream msg;
        msg << "state file " << path << " has " << amps.size()
            << " amplitudes, expected " << expected_dim;
        throw std::invalid_argument(msg.str());
    }
    Vec v(expected_dim);
    for (int i = 0; i < expected_dim; ++i) v(i) = amps[i];
    return v;
}

}  // namespace

GraphSpec graph_from_config(const RunConfig& config) {
    const std::string& g = config.graph;
    if (g == "ring") return GraphSpec::ring(config.L, config.gamma);
    if (g == "magnetic-ring" || g == "magnetic_ring") {
        return GraphSpec::magnetic_ring(config.L, config.alpha, config.gamma);
    }
    if (g == "square-center" || g == "square_center") {
        return GraphSpec::square_center(config.gamma);
    }
    if (g == "complete") return GraphSpec::complete(config.L, config.gamma);
    if (g == "star") return GraphSpec::star(config.L, config.gamma);
    if (g == "hypercube") return GraphSpec::hypercube(config.d, config.gamma);
    if (g == "tree" || g == "binary-tree" || g == "binary_tree") {
        return GraphSpec::binary_tree(config.generations, config.gamma);
    }
    if (g == "custom") {
        if (config.edges_file.empty()) {
            throw std::invalid_argument("custom graph needs --edges FILE");
        }
        return load_adjacency(config.edges_file, config.gamma);
    }
    throw std::invalid_argument("unknown graph kind '" + g + "'");
}

std::string default_r_d(const RunConfig& config) {
    if (config.graph == "ring" || config.graph == "magnetic-ring" ||
        config.graph == "magnetic_ring") {
        return std::to_string(config.L);
    }
    if (config.graph == "complete") return "1";
    return "0";
}

namespace {

struct ResolvedSetup {
    GraphSpec spec;
    HermitianMatrix H;
    Vec psi_in;
    Vec psi_d;
    std::string r_d_label;
};

ResolvedSetup resolve_setup(const RunConfig& config) {
    GraphSpec spec = graph_from_config(config);
    HermitianMatrix H = build_graph(spec);
    const std::string rd = config.r_d.empty() ? default_r_d(config) : config.r_d;
    Vec psi_d = localized_state(spec, rd);
    Vec psi_in = config.psi_in_file.empty()
                     ? localized_state(spec, config.r_in)
                     : read_state_file(config.psi_in_file, node_count(spec));
    return {std::move(spec), std::move(H), std::move(psi_in), std::move(psi_d), rd};
}

void echo_graph(const RunConfig& config, ResultRecord& record) {
    auto& e = record.config;
    e.emplace_back("op", config.op);
    e.emplace_back("graph", config.graph);
    e.emplace_back("L", std::to_string(config.L));
    e.emplace_back("alpha", fmt17(config.alpha));
    e.emplace_back("d", std::to_string(config.d));
    e.emplace_back("generations", std::to_string(config.generations));
    e.emplace_back("gamma", fmt17(config.gamma));
    if (!config.edges_file.empty()) e.emplace_back("edges", config.edges_file);
    e.emplace_back("tol-phase", fmt17(config.tol_phase));
    e.emplace_back("tol-degeneracy", fmt17(config.tol_degeneracy));
    e.emplace_back("tol-dark", fmt17(config.tol_dark));
}

void echo_setup(const RunConfig& config, const std::string& rd,
                ResultRecord& record) {
    auto& e = record.config;
    e.emplace_back("tau", fmt17(config.tau));
    e.emplace_back("r-in", config.r_in);
    e.emplace_back("r-d", rd);
    if (!config.psi_in_file.empty()) {
        e.emplace_back("psi-in-file", config.psi_in_file);
    }
}

}  // namespace

RunConfig config_from_echo(
    const std::vector<std::pair<std::string, std::string>>& echo) {
    RunConfig c;
    for (const auto& [key, value] : echo) {
        if (key == "op") c.op = value;
        else if (key == "graph") c.graph = value;
        else if (key == "L") c.L = std::stoi(value);
        else if (key == "alpha") c.alpha = std::stod(value);
        else if (key == "d") c.d = std::stoi(value);
        else if (key == "generations") c.generations = std::stoi(value);
        else if (key == "gamma") c.gamma = std::stod(value);
        else if (key == "edges") c.edges_file = value;
        else if (key == "tau") c.tau = std::stod(value);
        else if (key == "r-in") c.r_in = value;
        else if (key == "r-d") c.r_d = value;
        else if (key == "psi-in-file") c.psi_in_file = value;
        else if (key == "n-max") c.n_max = std::stoi(value);
        else if (key == "alphas") c.alphas = split_doubles(value);
        else if (key == "taus") c.taus = split_doubles(value);
        else if (key == "at") c.at = split_ints(value);
        else if (key == "threshold") c.threshold = std::stod(value);
        else if (key == "census-mode") c.census_mode = value;
        else if (key == "samples") c.samples = std::stoi(value);
        else if (key == "tol-phase") c.tol_phase = std::stod(value);
        else if (key == "tol-degeneracy") c.tol_degeneracy = std::stod(value);
        else if (key == "tol-dark") c.tol_dark = std::stod(value);
    }
    return c;
}

ResultRecord cmd_pdet(const RunConfig& config) {
    auto rs = resolve_setup(config);
    const auto spec_data = diagonalize(rs.H, config.tol_degeneracy);
    const auto sectors = build_sectors(spec_data, config.tau, config.tol_phase);

    const double p_spectral =
        pdet_spectral(sectors, rs.psi_d, rs.psi_in, config.tol_dark);
    const auto bases = bright_dark_bases(sectors, rs.psi_d, config.tol_dark);
    const double p_projection = pdet_projection(bases, rs.psi_in);
    const auto measure =
        spectral_measure(sectors, rs.psi_d, rs.psi_in, config.tol_dark);
    const double p_aleksandrov = pdet_aleksandrov(measure);

    const double max_diff = std::max({std::abs(p_spectral - p_projection),
                                      std::abs(p_spectral - p_aleksandrov),
                                      std::abs(p_projection - p_aleksandrov)});

    ResultRecord record;
    echo_graph(config, record);
    echo_setup(config, rs.r_d_label, record);
    record.scalars.emplace_back("pdet_spectral", p_spectral);
    record.scalars.emplace_back("pdet_projection", p_projection);
    record.scalars.emplace_back("pdet_aleksandrov", p_aleksandrov);
    record.scalars.emplace_back("max_route_diff", max_diff);
    record.scalars.emplace_back("resonant", sectors.resonant ? 1.0 : 0.0);
    if (max_diff > 1e-8) record.exit_code = exit_numerical;
    return record;
}

ResultRecord cmd_simulate(const RunConfig& config) {
    auto rs = resolve_setup(config);
    const DetectionSetup setup(rs.psi_in, rs.psi_d, config.tau);
    const auto series = simulate(setup, rs.H, config.n_max);

    ResultRecord record;
    echo_graph(config, record);
    echo_setup(config, rs.r_d_label, record);
    record.config.emplace_back("n-max", std::to_string(config.n_max));
    ResultTable table;
    table.header = {"n", "F_n", "S_n"};
    for (int n = 1; n <= series.steps(); ++n) {
        table.rows.push_back(
            {static_cast<double>(n), series.F[n - 1], series.S[n]});
    }
    record.table = std::move(table);
    return record;
}

ResultRecord cmd_sweep(const RunConfig& config) {
    SweepGrid grid;
    grid.alphas = config.alphas.empty() ? std::vector<double>{config.alpha}
                                        : config.alphas;
    grid.taus = config.taus.empty() ? std::vector<double>{config.tau}
                                    : config.taus;
    grid.L = config.L;
    grid.n_measurements = config.n_max;
    grid.gamma = config.gamma;
    grid.r_in = std::stol(config.r_in);
    grid.r_d = config.r_d.empty() ? config.L : std::stol(config.r_d);
    const auto result = sweep_tau_alpha(grid);

    ResultRecord record;
    echo_graph(config, record);
    record.config.emplace_back("tau", fmt17(config.tau));
    record.config.emplace_back("r-in", config.r_in);
    record.config.emplace_back("r-d", std::to_string(grid.r_d));
    record.config.emplace_back("n-max", std::to_string(config.n_max));
    record.config.emplace_back("alphas", join17(grid.alphas));
    record.config.emplace_back("taus", join17(grid.taus));
    ResultTable table;
    table.header = {"alpha", "tau", "one_minus_S_N"};
    for (size_t ia = 0; ia < grid.alphas.size(); ++ia) {
        for (size_t it = 0; it < grid.taus.size(); ++it) {
            table.rows.push_back(
                {grid.alphas[ia], grid.taus[it], result.one_minus_sn[ia][it]});
        }
    }
    record.table = std::move(table);
    return record;
}

ResultRecord cmd_spectrum(const RunConfig& config) {
    auto rs = resolve_setup(config);
    const Mat U = propagator(diagonalize(rs.H, config.tol_degeneracy), config.tau);
    const auto spectrum = survival_spectrum(survival_operator(U, rs.psi_d));

    ResultRecord record;
    echo_graph(config, record);
    echo_setup(config, rs.r_d_label, record);
    record.scalars.emplace_back(
        "unit_circle_count", static_cast<double>(spectrum.unit_circle_ids.size()));
    record.scalars.emplace_back("zeta_max", spectrum.zeta_max);
    ResultTable table;
    table.header = {"re", "im", "abs"};
    for (int i = 0; i < spectrum.eigenvalues.size(); ++i) {
        const cxd z = spectrum.eigenvalues(i);
        table.rows.push_back({z.real(), z.imag(), std::abs(z)});
    }
    record.table = std::move(table);
    return record;
}

ResultRecord cmd_density(const RunConfig& config) {
    if (config.graph != "ring") {
        throw std::invalid_argument("density runs on plain rings only");
    }
    if (config.at.size() != 1) {
        throw std::invalid_argument("density needs exactly one --at N");
    }
    GraphSpec spec = graph_from_config(config);
    const std::string rd = config.r_d.empty() ? default_r_d(config) : config.r_d;
    const int start = node_index(spec, config.r_in);
    const int detect = node_index(spec, rd);
    const auto snaps =
        spread_density(config.L, config.tau, config.at, start, detect, config.gamma);
    const auto& snap = snaps.front();

    ResultRecord record;
    echo_graph(config, record);
    echo_setup(config, rd, record);
    record.config.emplace_back("at", join_ints(config.at));
    record.scalars.emplace_back("n", snap.n);
    record.scalars.emplace_back("S_n", snap.survival);
    record.scalars.emplace_back("mean_distance", snap.mean_distance);
    ResultTable table;
    table.header = {"node", "prob"};
    for (int r = 0; r < config.L; ++r) {
        table.rows.push_back({static_cast<double>(r), snap.density[r]});
    }
    record.table = std::move(table);
    return record;
}

ResultRecord cmd_bases(const RunConfig& config) {
    auto rs = resolve_setup(config);
    const auto sectors = build_sectors(diagonalize(rs.H, config.tol_degeneracy),
                                       config.tau, config.tol_phase);
    const auto bases = bright_dark_bases(sectors, rs.psi_d, config.tol_dark);

    ResultRecord record;
    echo_graph(config, record);
    echo_setup(config, rs.r_d_label, record);
    record.scalars.emplace_back("bright_count",
                                static_cast<double>(bases.bright.size()));
    record.scalars.emplace_back("dark_count",
                                static_cast<double>(bases.dark.size()));
    record.scalars.emplace_back(
        "completely_dark_sectors",
        static_cast<double>(bases.completely_dark_sectors.size()));
    int index = 0;
    for (const auto& b : bases.bright) {
        record.bases.push_back({"bright", b.sector, index++, b.state});
    }
    index = 0;
    for (const auto& d : bases.dark) {
        record.bases.push_back({"dark", d.sector, index++, d.state});
    }
    return record;
}

ResultRecord cmd_census(const RunConfig& config) {
    if (config.graph != "ring") {
        throw std::invalid_argument("census runs on plain rings only");
    }
    CensusMode mode;
    if (config.census_mode == "symmetric") {
        mode.kind = CensusMode::symmetric_subspace;
    } else if (config.census_mode == "full") {
        mode.kind = CensusMode::full;
    } else {
        throw std::invalid_argument("census mode must be 'symmetric' or 'full'");
    }
    const auto result = fast_eigenvalue_census(config.L, config.tau,
                                               config.threshold, mode,
                                               config.gamma);

    ResultRecord record;
    echo_graph(config, record);
    record.config.emplace_back("tau", fmt17(config.tau));
    record.config.emplace_back("threshold", fmt17(config.threshold));
    record.config.emplace_back("census-mode", config.census_mode);
    record.scalars.emplace_back("fast_count", result.fast_count);
    record.scalars.emplace_back("total_count", result.total_count);
    return record;
}

ResultRecord cmd_verify(const RunConfig& config) {
    auto rs = resolve_setup(config);
    const DetectionSetup setup(rs.psi_in, rs.psi_d, config.tau);
    const auto spec_data = diagonalize(rs.H, config.tol_degeneracy);
    const auto sectors = build_sectors(spec_data, config.tau, config.tol_phase);

    // Pole duality on deterministic samples in the annulus 1.05 < |z| < 1.95.
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> mag(1.05, 1.95);
    std::uniform_real_distribution<double> arg(0.0, two_pi);
    std::vector<cxd> samples;
    samples.reserve(config.samples);
    for (int i = 0; i < config.samples; ++i) {
        samples.push_back(std::polar(mag(rng), arg(rng)));
    }
    const auto duality = verify_pole_duality(rs.H, setup, samples);

    // Route equivalence.
    const double p1 = pdet_spectral(sectors, rs.psi_d, rs.psi_in, config.tol_dark);
    const double p2 = pdet_projection(
        bright_dark_bases(sectors, rs.psi_d, config.tol_dark), rs.psi_in);
    const double p3 = pdet_aleksandrov(
        spectral_measure(sectors, rs.psi_d, rs.psi_in, config.tol_dark));
    const double route_diff = std::max(
        {std::abs(p1 - p2), std::abs(p1 - p3), std::abs(p2 - p3)});

    // Convergence of 1 - S_N toward the spectral value.
    const Mat U = propagator(spec_data, config.tau);
    const auto spectrum = survival_spectrum(survival_operator(U, rs.psi_d));
    double sim_gap = 0.0;
    double n_steps = 0.0;
    if (spectrum.zeta_max > 0.0 && spectrum.zeta_max < 1.0 - 1e-12) {
        const double needed =
            std::log(1e-8) / (2.0 * std::log(spectrum.zeta_max));
        const int n = std::clamp(static_cast<int>(std::ceil(needed)), 50, 200000);
        const auto series = simulate_with_propagator(setup, U, n);
        sim_gap = std::abs((1.0 - series.S.back()) - p1);
        n_steps = n;
    }

    ResultRecord record;
    echo_graph(config, record);
    echo_setup(config, rs.r_d_label, record);
    record.config.emplace_back("samples", std::to_string(config.samples));
    record.scalars.emplace_back("pole_duality_max_residual", duality.max_residual);
    record.scalars.emplace_back("pole_duality_evaluated", duality.evaluated);
    record.scalars.emplace_back("pole_duality_skipped", duality.skipped);
    record.scalars.emplace_back("route_max_diff", route_diff);
    record.scalars.emplace_back("simulate_gap", sim_gap);
    record.scalars.emplace_back("simulate_steps", n_steps);
    if (duality.max_residual > 1e-8 || route_diff > 1e-8 || sim_gap > 1e-6) {
        record.exit_code = exit_numerical;
    }
    return record;
}

ResultRecord run_config(const RunConfig& config) {
    if (config.op == "pdet") return cmd_pdet(config);
    if (config.op == "simulate") return cmd_simulate(config);
    if (config.op == "sweep") return cmd_sweep(config);
    if (config.op == "spectrum") return cmd_spectrum(config);
    if (config.op == "density") return cmd_density(config);
    if (config.op == "bases") return cmd_bases(config);
    if (config.op == "census") return cmd_census(config);
    if (config.op == "verify") return cmd_verify(config);
    throw std::invalid_argument("unknown operation '" + config.op + "'");
}

void write_csv(const ResultRecord& record, std::ostream& os) {
    for (const auto& [key, value] : record.config) {
        os << "# " << key << " = " << value << "\n";
    }
    const bool has_payload = record.table.has_value() || !record.bases.empty();
    if (has_payload) {
        for (const auto& [name, value] : record.scalars) {
            os << "# " << name << " = " << fmt17(value) << "\n";
        }
    }
    if (record.table) {
        const auto& t = *record.table;
        for (size_t i = 0; i < t.header.size(); ++i) {
            os << (i ? "," : "") << t.header[i];
        }
        os << "\n";
        for (const auto& row : t.rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                os << (i ? "," : "") << fmt17(row[i]);
            }
            os << "\n";
        }
    } else if (!record.bases.empty()) {
        os << "kind,sector,index,node,re,im\n";
        for (const auto& b : record.bases) {
            for (int r = 0; r < b.state.size(); ++r) {
                os << b.kind << "," << b.sector << "," << b.index << "," << r
                   << "," << fmt17(b.state(r).real()) << ","
                   << fmt17(b.state(r).imag()) << "\n";
            }
        }
    } else {
        os << "quantity,value\n";
        for (const auto& [name, value] : record.scalars) {
            os << name << "," << fmt17(value) << "\n";
        }
    }
}

void write_json(const ResultRecord& record, std::ostream& os) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json cfg;
    for (const auto& [key, value] : record.config) cfg[key] = value;
    j["config"] = std::move(cfg);
    nlohmann::ordered_json scalars;
    for (const auto& [name, value] : record.scalars) scalars[name] = value;
    j["scalars"] = std::move(scalars);
    if (record.table) {
        nlohmann::ordered_json table;
        table["header"] = record.table->header;
        table["rows"] = record.table->rows;
        j["table"] = std::move(table);
    }
    if (!record.bases.empty()) {
        nlohmann::ordered_json entries = nlohmann::ordered_json::array();
        for (const auto& b : record.bases) {
            nlohmann::ordered_json e;
            e["kind"] = b.kind;
            e["sector"] = b.sector;
            e["index"] = b.index;
            std::vector<double> re(b.state.size()), im(b.state.size());
            for (int r = 0; r < b.state.size(); ++r) {
                re[r] = b.state(r).real();
                im[r] = b.state(r).imag();
            }
            e["re"] = std::move(re);
            e["im"] = std::move(im);
            entries.push_back(std::move(e));
        }
        j["bases"] = std::move(entries);
    }
    os << j.dump(2) << "\n";
}

int write_record(const ResultRecord& record, const RunConfig& config,
                 std::ostream& fallback) {
    std::ofstream file;
    std::ostream* os = &fallback;
    if (!config.out.empty()) {
        file.open(config.out);
        if (!file) {
            throw std::invalid_argument("cannot open output file " + config.out);
        }
        os = &file;
    }
    if (config.format == "json") {
        write_json(record, *os);
    } else if (config.format == "csv") {
        write_csv(record, *os);
    } else {
        throw std::invalid_argument("format must be 'csv' or 'json'");
    }
    return record.exit_code;
}

}  // namespace qfd
