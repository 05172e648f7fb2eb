#include "qfd/cli.hpp"

#include "qfd/result_io.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <stdexcept>

namespace qfd {

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
    RunConfig config;

    CLI::App app{"First-detection statistics of stroboscopically measured "
                 "quantum walks on finite graphs"};
    app.fallthrough();
    app.require_subcommand(0, 1);
    app.set_config("--config", "", "Read options from an INI/TOML file");

    app.add_option("--graph", config.graph,
                   "ring | magnetic-ring | square-center | complete | star | "
                   "hypercube | tree | custom")
        ->capture_default_str();
    app.add_option("--L", config.L, "Ring/complete sites or star periphery count")
        ->capture_default_str();
    app.add_option("--alpha", config.alpha, "Magnetic flux phase per hop")
        ->capture_default_str();
    app.add_option("--d", config.d, "Hypercube dimension")->capture_default_str();
    app.add_option("--generations", config.generations, "Binary tree depth")
        ->capture_default_str();
    app.add_option("--gamma", config.gamma, "Hopping scale (tau is in hbar/gamma)")
        ->capture_default_str();
    app.add_option("--edges", config.edges_file, "Edge-list file for --graph custom");
    app.add_option("--tau", config.tau, "Detection period")->capture_default_str();
    app.add_option("--r-in", config.r_in, "Initial node label")->capture_default_str();
    app.add_option("--r-d", config.r_d, "Detection node label (default: ring L, else 0)");
    app.add_option("--psi-in-file", config.psi_in_file,
                   "Initial state amplitudes, one 're im' pair per line");
    app.add_option("--n-max", config.n_max, "Measurement count")->capture_default_str();
    app.add_option("--alphas", config.alphas, "Sweep alpha values")->delimiter(',');
    app.add_option("--taus", config.taus, "Sweep tau values")->delimiter(',');
    app.add_option("--at", config.at, "Density snapshot measurement count")
        ->delimiter(',');
    app.add_option("--threshold", config.threshold,
                   "Census distance from the unit circle")
        ->capture_default_str();
    app.add_option("--census-mode", config.census_mode, "symmetric | full")
        ->capture_default_str();
    app.add_option("--samples", config.samples, "Pole-duality sample count")
        ->capture_default_str();
    app.add_option("--format", config.format, "csv | json")->capture_default_str();
    app.add_option("--out", config.out, "Output file (default: stdout)");
    app.add_option("--tol-phase", config.tol_phase,
                   "Quasienergy merge tolerance, radians")
        ->capture_default_str();
    app.add_option("--tol-degeneracy", config.tol_degeneracy,
                   "Energy merge tolerance, relative")
        ->capture_default_str();
    app.add_option("--tol-dark", config.tol_dark,
                   "Completely-dark sector threshold")
        ->capture_default_str();

    for (const char* name :
         {"pdet", "simulate", "sweep", "spectrum", "density", "bases", "census",
          "verify"}) {
        app.add_subcommand(name)->configurable();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_validation;
    }

    const auto chosen = app.get_subcommands();
    if (chosen.empty()) {
        err << app.help();
        return exit_validation;
    }
    config.op = chosen.front()->get_name();

    try {
        const ResultRecord record = run_config(config);
        return write_record(record, config, out);
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_resource;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_numerical;
    }
}

}  // namespace qfd
