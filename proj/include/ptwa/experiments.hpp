#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ptwa/engine.hpp"
#include "ptwa/io.hpp"

namespace ptwa {

/// Effective configuration of one experiment run. Fields left at their
/// sentinel values fall back to the experiment's built-in defaults (which
/// encode the published parameter sets).
struct ExperimentConfig {
    std::string experiment;
    std::optional<std::filesystem::path> model_file;
    std::filesystem::path out_dir = "out";
    std::vector<int> orders;           // empty = experiment default
    int grid = 0;                      // 0 = default
    double t_max = 0.0;                // 0 = default
    bool oracle = false;
    std::vector<double> probe_frequencies;  // cm^-1; empty = default set
    double alpha = 2.0 / 3.0;          // suppression fraction
    std::vector<double> delta_list;    // single-mode couplings (cm^-1)
    int discretization_K = 300;
    double omega_max_factor = 10.0;    // omega_max = factor * omega_c
    bool dump_pathways = false;
    bool serial = false;               // disable parallel sections

    static ExperimentConfig from_file(const std::filesystem::path& path);
};

/// Run one named experiment; writes CSVs, SVG plots, and a manifest into
/// config.out_dir. Throws ValidationError / NumericalGuardError on failure.
void run_experiment(const ExperimentConfig& config);

void run_qubit_decoherence(const ExperimentConfig& config);
void run_suppression_scan(const ExperimentConfig& config);
void run_weak_coupling(const ExperimentConfig& config);
void run_single_mode(const ExperimentConfig& config);
void run_kernels_dump(const ExperimentConfig& config);

/// The qubit model of the decoherence study: detuning eps, tunneling delta,
/// anti-correlated unit coupling coefficients on one channel.
ModelFile qubit_model(double eps, double delta, const SpectralChannel& channel, double temperature_K,
                      WidthRule rule);

std::string format_pathway(const LiouvillePathway& p);

}  // namespace ptwa
