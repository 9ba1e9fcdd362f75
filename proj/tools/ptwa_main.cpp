#include <CLI11.hpp>
#include <iostream>

#include "ptwa/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ptwa: perturbative truncated-Wigner dynamics for discrete systems in harmonic environments"};
    app.require_subcommand(1);

    ptwa::ExperimentConfig config;
    std::string config_path;

    const std::vector<std::string> experiments = {"qubit-decoherence", "suppression-scan",
                                                  "weak-coupling", "single-mode", "kernels"};
    for (const auto& name : experiments) {
        auto* sub = app.add_subcommand(name, "run the " + name + " study");
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--out", config.out_dir, "output directory");
        sub->add_option("--orders", config.orders, "perturbative orders to include");
        sub->add_option("--grid", config.grid, "quadrature grid intervals");
        sub->add_option("--tmax", config.t_max, "time horizon (fs)");
        sub->add_option("--model", config.model_file, "model JSON file");
        sub->add_option("--probes", config.probe_frequencies, "entropy probe frequencies (cm^-1)");
        sub->add_option("--alpha", config.alpha, "suppressed reorganization fraction");
        sub->add_option("--deltas", config.delta_list, "tunneling couplings (cm^-1)");
        sub->add_option("--K", config.discretization_K, "continuum discretization mode count");
        sub->add_flag("--oracle", config.oracle, "also run the dense reference propagation");
        sub->add_flag("--dump-pathways", config.dump_pathways, "write enumerated pathways to text");
        sub->add_flag("--serial", config.serial, "disable parallel sections");
        sub->callback([&config, name]() { config.experiment = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            ptwa::ExperimentConfig from_file = ptwa::ExperimentConfig::from_file(config_path);
            from_file.experiment = config.experiment;
            // Command-line values override file values where given.
            if (config.out_dir != "out") from_file.out_dir = config.out_dir;
            if (!config.orders.empty()) from_file.orders = config.orders;
            if (config.grid > 0) from_file.grid = config.grid;
            if (config.t_max > 0.0) from_file.t_max = config.t_max;
            if (config.model_file) from_file.model_file = config.model_file;
            if (!config.probe_frequencies.empty()) from_file.probe_frequencies = config.probe_frequencies;
            if (!config.delta_list.empty()) from_file.delta_list = config.delta_list;
            from_file.oracle = from_file.oracle || config.oracle;
            from_file.dump_pathways = config.dump_pathways;
            from_file.serial = config.serial;
            ptwa::run_experiment(from_file);
        } else {
            ptwa::run_experiment(config);
        }
    } catch (const ptwa::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const ptwa::NumericalGuardError& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
