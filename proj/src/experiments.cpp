#include "ptwa/experiments.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ptwa/envmode.hpp"
#include "ptwa/oracle.hpp"
#include "ptwa/svg.hpp"

namespace ptwa {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json config_echo(const ExperimentConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    if (c.model_file) j["model_file"] = c.model_file->string();
    j["orders"] = c.orders;
    j["grid"] = c.grid;
    j["t_max"] = c.t_max;
    j["oracle"] = c.oracle;
    j["probe_frequencies"] = c.probe_frequencies;
    j["alpha"] = c.alpha;
    j["delta_list"] = c.delta_list;
    j["discretization_K"] = c.discretization_K;
    j["omega_max_factor"] = c.omega_max_factor;
    UnitSystem u;
    j["constants"]["hbar_cm1_fs"] = u.hbar;
    j["constants"]["kB_cm1_per_K"] = u.kB;
    return j;
}

int default_grid(const ExperimentConfig& c, int fallback) { return c.grid > 0 ? c.grid : fallback; }
double default_tmax(const ExperimentConfig& c, double fallback) {
    return c.t_max > 0.0 ? c.t_max : fallback;
}
std::vector<int> default_orders(const ExperimentConfig& c, std::vector<int> fallback) {
    return c.orders.empty() ? fallback : c.orders;
}

int max_of(const std::vector<int>& v) {
    int m = 0;
    for (int x : v) m = std::max(m, x);
    return m;
}

void maybe_dump_pathways(const ExperimentConfig& c, int M, int max_order, const fs::path& out) {
    if (!c.dump_pathways) return;
    std::ofstream f(out / "pathways.txt");
    for (int N = 0; N <= max_order; ++N)
        for (int r = 0; r < M; ++r)
            for (int col = 0; col < M; ++col) {
                f << "# order " << N << " final (" << r << "," << col << ")\n";
                for (const auto& p : enumerate_pathways(M, N, {r, col})) f << format_pathway(p) << "\n";
            }
}

/// Column block of Bloch components and purity for a qubit series.
struct QubitSeriesColumns {
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
};

QubitSeriesColumns qubit_columns(const TimeSeriesResult& series, const std::string& prefix) {
    QubitSeriesColumns out;
    const int maxN = series.max_order();
    const char* obs[3] = {"sigma_x", "sigma_y", "sigma_z"};
    for (const char* o : obs) {
        for (int n = 0; n <= maxN; ++n)
            out.names.push_back(prefix + o + "_order" + std::to_string(n));
        out.names.push_back(prefix + o + "_total");
    }
    out.names.push_back(prefix + "purity_total");

    out.rows.resize(series.times.size());
    for (std::size_t ti = 0; ti < series.times.size(); ++ti) {
        auto& row = out.rows[ti];
        for (int axis = 0; axis < 3; ++axis) {
            double total = 0.0;
            for (int n = 0; n <= maxN; ++n) {
                const auto b = bloch_vector(series.order_rdm[n][ti]);
                row.push_back(b[axis]);
                total += b[axis];
            }
            row.push_back(total);
        }
        row.push_back(purity(hermitize_normalize(series.cumulative(ti))));
    }
    return out;
}

void write_series_csv(const fs::path& path, const TimeSeriesResult& series,
                      const std::vector<QubitSeriesColumns>& blocks) {
    std::vector<std::string> cols{"t_fs"};
    for (const auto& b : blocks) cols.insert(cols.end(), b.names.begin(), b.names.end());
    CsvWriter csv(path, cols);
    for (std::size_t ti = 0; ti < series.times.size(); ++ti) {
        std::vector<double> row{series.times[ti]};
        for (const auto& b : blocks) row.insert(row.end(), b.rows[ti].begin(), b.rows[ti].end());
        csv.row(row);
    }
}

}  // namespace

ModelFile qubit_model(double eps, double delta, const SpectralChannel& channel, double temperature_K,
                      WidthRule rule) {
    ModelFile m;
    m.system.energies = Eigen::Vector2d(0.5 * eps, -0.5 * eps);
    m.system.couplings = Eigen::MatrixXcd::Zero(2, 2);
    m.system.couplings(0, 1) = delta;
    m.system.couplings(1, 0) = delta;
    m.system.channel_coefficients = Eigen::MatrixXd(2, 1);
    m.system.channel_coefficients << 1.0, -1.0;
    m.bath.channels = {channel};
    m.bath.temperature = temperature_K;
    m.bath.width_rule = rule;
    m.initial_density.rho = Eigen::MatrixXcd(2, 2);
    m.initial_density.rho << 0.5, 0.5, 0.5, 0.5;
    return m;
}

std::string format_pathway(const LiouvillePathway& p) {
    std::ostringstream os;
    for (std::size_t j = 0; j < p.pairs.size(); ++j) {
        if (j) os << " -" << (p.signs[j - 1] > 0 ? "L" : "R") << "-> ";
        os << "(" << p.pairs[j].first << "," << p.pairs[j].second << ")";
    }
    return os.str();
}

ExperimentConfig ExperimentConfig::from_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path.string());
    json j;
    in >> j;
    ExperimentConfig c;
    c.experiment = j.value("experiment", std::string{});
    if (j.contains("model_file")) c.model_file = fs::path(j.at("model_file").get<std::string>());
    if (j.contains("out_dir")) c.out_dir = fs::path(j.at("out_dir").get<std::string>());
    c.orders = j.value("orders", std::vector<int>{});
    c.grid = j.value("grid", 0);
    c.t_max = j.value("t_max", 0.0);
    c.oracle = j.value("oracle", false);
    c.probe_frequencies = j.value("probe_frequencies", std::vector<double>{});
    c.alpha = j.value("alpha", 2.0 / 3.0);
    c.delta_list = j.value("delta_list", std::vector<double>{});
    c.discretization_K = j.value("discretization_K", 300);
    c.omega_max_factor = j.value("omega_max_factor", 10.0);
    return c;
}

void run_experiment(const ExperimentConfig& config) {
    fs::create_directories(config.out_dir);
    if (config.experiment == "qubit-decoherence") return run_qubit_decoherence(config);
    if (config.experiment == "suppression-scan") return run_suppression_scan(config);
    if (config.experiment == "weak-coupling") return run_weak_coupling(config);
    if (config.experiment == "single-mode") return run_single_mode(config);
    if (config.experiment == "kernels") return run_kernels_dump(config);
    throw ValidationError("unknown experiment: " + config.experiment);
}

void run_qubit_decoherence(const ExperimentConfig& config) {
    const double eps = 50.0, delta = 10.0, lambda = 50.0, omega_c = 100.0;
    const SpectralChannel dl{DrudeLorentz{lambda, omega_c}};
    ModelFile m = config.model_file ? load_model_file(*config.model_file)
                                    : qubit_model(eps, delta, dl, 0.0, WidthRule::groundState);
    const double t_max = default_tmax(config, 300.0);
    const auto orders = default_orders(config, {0, 1, 2, 3});
    const int max_order = max_of(orders);
    json manifest = config_echo(config);
    manifest["parameters"] = {{"eps", eps}, {"delta", delta}, {"lambda", lambda},
                              {"omega_c", omega_c}, {"temperature_K", 0.0}, {"t_max", t_max}};

    // Orders <= 2 on the fine grid.
    {
        QuadratureSpec quad{t_max, default_grid(config, 400), std::min(max_order, 2)};
        SeriesEngine engine(m.system, m.bath, m.initial_density, quad, BasisChoice::local,
                            !config.serial);
        const TimeSeriesResult series = engine.assemble_series();
        write_series_csv(config.out_dir / "bloch_purity.csv", series, {qubit_columns(series, "")});

        LineChart chart("Qubit decoherence", "t (fs)", "expectation value");
        std::vector<double> sx, sy, sz, pur;
        for (std::size_t ti = 0; ti < series.times.size(); ++ti) {
            const auto rho = hermitize_normalize(series.cumulative(ti));
            const auto b = bloch_vector(rho);
            sx.push_back(b[0]);
            sy.push_back(b[1]);
            sz.push_back(b[2]);
            pur.push_back(purity(rho));
        }
        chart.add_series("sigma_x", series.times, sx);
        chart.add_series("sigma_y", series.times, sy);
        chart.add_series("sigma_z", series.times, sz);
        chart.add_series("purity", series.times, pur);
        chart.write(config.out_dir / "bloch_purity.svg");
        maybe_dump_pathways(config, 2, max_order, config.out_dir);
    }

    // Order-3 convergence run on the coarser grid.
    if (max_order >= 3) {
        QuadratureSpec quad{t_max, config.grid > 0 ? config.grid / 2 : 200, 3};
        SeriesEngine engine(m.system, m.bath, m.initial_density, quad, BasisChoice::local,
                            !config.serial);
        const TimeSeriesResult series = engine.assemble_series();
        write_series_csv(config.out_dir / "convergence.csv", series, {qubit_columns(series, "")});
    }

    // Mode-resolved entanglement entropy on the discretized bath.
    {
        const auto& ch = m.bath.channels[0];
        BathSpec disc = m.bath;
        if (!ch.is_discrete()) {
            const double omega_max = config.omega_max_factor * ch.drude_lorentz().omega_c;
            disc.channels = {discretize_channel(ch, config.discretization_K, omega_max)};
        }
        const int entropy_grid_points = 300;
        QuadratureSpec quad{t_max, entropy_grid_points, 2};
        ModeRdmCalculator calc(m.system, disc, m.initial_density, quad, 2, 2);
        std::vector<double> probes = config.probe_frequencies;
        if (probes.empty()) probes = {25, 50, 75, 100, 150, 200, 300, 400};
        std::vector<std::size_t> ids;
        for (double f : probes) ids.push_back(calc.nearest_mode(f));
        // Output every few grid points so the times sit exactly on the grid.
        std::vector<double> times;
        const double dt = t_max / entropy_grid_points;
        for (int i = 0; i <= entropy_grid_points; i += 5) times.push_back(i * dt);
        const auto S = calc.entropy_grid(ids, times, !config.serial);

        CsvWriter csv(config.out_dir / "entropy.csv", {"t_fs", "omega_cm1", "S_k"});
        LineChart chart("Mode entanglement entropy", "t (fs)", "S_k");
        for (std::size_t ki = 0; ki < ids.size(); ++ki) {
            const double w = calc.mode_wavenumber(ids[ki]);
            for (std::size_t ti = 0; ti < times.size(); ++ti) csv.row({times[ti], w, S[ki][ti]});
            std::ostringstream label;
            label << "w = " << w << " cm-1";
            chart.add_series(label.str(), times, S[ki]);
        }
        chart.write(config.out_dir / "entropy.svg");
        manifest["entropy"] = {{"n_max", 2}, {"K", config.discretization_K}};

        // Per-mode RDM dump for the first probe: flattened complex columns.
        {
            const int nmax = 2;
            std::vector<std::string> cols{"t_fs"};
            for (int r = 0; r <= nmax; ++r)
                for (int cc = 0; cc <= nmax; ++cc) {
                    cols.push_back("re_rho" + std::to_string(r) + std::to_string(cc));
                    cols.push_back("im_rho" + std::to_string(r) + std::to_string(cc));
                }
            CsvWriter rdm_csv(config.out_dir / "mode_rdm_probe0.csv", cols);
            for (double t : times) {
                const ModeRDM m_rdm = calc.mode_rdm(ids[0], t);
                std::vector<double> row{t};
                for (int r = 0; r <= nmax; ++r)
                    for (int cc = 0; cc <= nmax; ++cc) {
                        row.push_back(m_rdm.rho(r, cc).real());
                        row.push_back(m_rdm.rho(r, cc).imag());
                    }
                rdm_csv.row(row);
            }
        }
    }
    write_manifest(config.out_dir / "manifest.json", manifest);
}

void run_suppression_scan(const ExperimentConfig& config) {
    const double eps = 50.0, delta = 10.0, lambda = 50.0, omega_c = 100.0;
    const auto [nu_h, nu_l] = suppression_cutoffs(lambda, omega_c, config.alpha);
    const double lam_high = windowed_reorganization(DrudeLorentz{lambda, omega_c}, 0.0, nu_h);
    const double lam_low =
        windowed_reorganization(DrudeLorentz{lambda, omega_c}, nu_l,
                                std::numeric_limits<double>::infinity());

    const double t_max = default_tmax(config, 300.0);
    const auto orders = default_orders(config, {0, 1, 2});
    QuadratureSpec quad{t_max, default_grid(config, 400), std::min(max_of(orders), 2)};

    struct Case {
        const char* name;
        DrudeLorentz dl;
    };
    const std::vector<Case> cases = {
        {"full", DrudeLorentz{lambda, omega_c}},
        {"high_cut", DrudeLorentz{lambda, omega_c, 0.0, nu_h}},
        {"low_cut", DrudeLorentz{lambda, omega_c, nu_l, std::numeric_limits<double>::infinity()}},
    };

    std::vector<std::vector<double>> purities;
    std::vector<double> times;
    for (const auto& cs : cases) {
        ModelFile m = qubit_model(eps, delta, SpectralChannel{cs.dl}, 0.0, WidthRule::groundState);
        SeriesEngine engine(m.system, m.bath, m.initial_density, quad, BasisChoice::local,
                            !config.serial);
        const TimeSeriesResult series = engine.assemble_series();
        times = series.times;
        std::vector<double> pur;
        for (std::size_t ti = 0; ti < series.times.size(); ++ti)
            pur.push_back(purity(hermitize_normalize(series.cumulative(ti))));
        purities.push_back(std::move(pur));
    }

    CsvWriter csv(config.out_dir / "suppression_purity.csv",
                  {"t_fs", "purity_full", "purity_high_cut", "purity_low_cut"});
    for (std::size_t ti = 0; ti < times.size(); ++ti)
        csv.row({times[ti], purities[0][ti], purities[1][ti], purities[2][ti]});

    LineChart chart("Purity under spectral suppression", "t (fs)", "purity");
    chart.add_series("full", times, purities[0]);
    chart.add_series("high-frequency cut", times, purities[1]);
    chart.add_series("low-frequency cut", times, purities[2]);
    chart.write(config.out_dir / "suppression_purity.svg");

    json manifest = config_echo(config);
    manifest["derived"] = {{"nu_h", nu_h},
                           {"nu_l", nu_l},
                           {"lambda_tilde_high_cut", lam_high},
                           {"lambda_tilde_low_cut", lam_low}};
    write_manifest(config.out_dir / "manifest.json", manifest);
}

namespace {

/// sigma_z and rho_(2,1) columns for the weak-coupling study.
QubitSeriesColumns coherence_columns(const TimeSeriesResult& series, const std::string& prefix) {
    QubitSeriesColumns out;
    const int maxN = series.max_order();
    for (int n = 0; n <= maxN; ++n) out.names.push_back(prefix + "sigma_z_order" + std::to_string(n));
    out.names.push_back(prefix + "sigma_z_total");
    for (int n = 0; n <= maxN; ++n) out.names.push_back(prefix + "re_rho21_order" + std::to_string(n));
    out.names.push_back(prefix + "re_rho21_total");
    for (int n = 0; n <= maxN; ++n) out.names.push_back(prefix + "im_rho21_order" + std::to_string(n));
    out.names.push_back(prefix + "im_rho21_total");

    out.rows.resize(series.times.size());
    for (std::size_t ti = 0; ti < series.times.size(); ++ti) {
        auto& row = out.rows[ti];
        double tot = 0.0;
        for (int n = 0; n <= maxN; ++n) {
            const double v = (series.order_rdm[n][ti](0, 0) - series.order_rdm[n][ti](1, 1)).real();
            row.push_back(v);
            tot += v;
        }
        row.push_back(tot);
        cplx ctot = 0.0;
        for (int n = 0; n <= maxN; ++n) {
            row.push_back(series.order_rdm[n][ti](1, 0).real());
            ctot += series.order_rdm[n][ti](1, 0);
        }
        row.push_back(ctot.real());
        for (int n = 0; n <= maxN; ++n) row.push_back(series.order_rdm[n][ti](1, 0).imag());
        row.push_back(ctot.imag());
    }
    return out;
}

ModelFile donor_acceptor_model(double gap_tilde0, double gap_tilde1, double delta,
                               const SpectralChannel& ch0, const SpectralChannel& ch1,
                               double temperature_K) {
    ModelFile m;
    m.system.energies = Eigen::Vector2d(gap_tilde0, gap_tilde1);
    m.system.couplings = Eigen::MatrixXcd::Zero(2, 2);
    m.system.couplings(0, 1) = delta;
    m.system.couplings(1, 0) = delta;
    m.system.channel_coefficients = Eigen::MatrixXd(2, 2);
    m.system.channel_coefficients << 1.0, 0.0, 0.0, 1.0;
    m.bath.channels = {ch0, ch1};
    m.bath.temperature = temperature_K;
    m.bath.width_rule = WidthRule::thermal;
    m.initial_density.rho = Eigen::MatrixXcd(2, 2);
    m.initial_density.rho << 0.5, 0.5, 0.5, 0.5;
    return m;
}

BathSpec discretized_bath(const BathSpec& bath, int K, double omega_max_factor) {
    BathSpec out = bath;
    for (auto& ch : out.channels) {
        if (ch.is_discrete()) continue;
        const double omega_max = omega_max_factor * ch.drude_lorentz().omega_c;
        ch = discretize_channel(ch, K, omega_max);
    }
    return out;
}

}  // namespace

void run_weak_coupling(const ExperimentConfig& config) {
    const double gap = 100.0, delta = 10.0, lambda = 1.0, omega_c = 53.08, T = 300.0;
    const SpectralChannel dl{DrudeLorentz{lambda, omega_c}};
    ModelFile m = config.model_file ? load_model_file(*config.model_file)
                                    : donor_acceptor_model(gap, 0.0, delta, dl, dl, T);
    const double t_max = default_tmax(config, 2000.0);
    const auto orders = default_orders(config, {0, 1, 2});
    QuadratureSpec quad{t_max, default_grid(config, 400), std::min(max_of(orders), 2)};

    SeriesEngine local(m.system, m.bath, m.initial_density, quad, BasisChoice::local, !config.serial);
    const TimeSeriesResult local_series = local.assemble_series();

    const BathSpec disc = discretized_bath(m.bath, config.discretization_K, config.omega_max_factor);
    SeriesEngine eigen(m.system, disc, m.initial_density, quad, BasisChoice::eigen, !config.serial);
    const TimeSeriesResult eigen_series = eigen.assemble_series();

    write_series_csv(config.out_dir / "weak_coupling.csv", local_series,
                     {coherence_columns(local_series, "local_"), coherence_columns(eigen_series, "eigen_")});

    LineChart chart("Weak-coupling donor-acceptor dynamics", "t (fs)", "<sigma_z>");
    std::vector<double> zl, ze;
    for (std::size_t ti = 0; ti < local_series.times.size(); ++ti) {
        zl.push_back((local_series.cumulative(ti)(0, 0) - local_series.cumulative(ti)(1, 1)).real());
        ze.push_back((eigen_series.cumulative(ti)(0, 0) - eigen_series.cumulative(ti)(1, 1)).real());
    }
    chart.add_series("local basis, order 2", local_series.times, zl);
    chart.add_series("eigenbasis, order 2", eigen_series.times, ze);
    chart.write(config.out_dir / "weak_coupling.svg");

    json manifest = config_echo(config);
    manifest["parameters"] = {{"gap", gap}, {"delta", delta}, {"lambda", lambda},
                              {"omega_c", omega_c}, {"temperature_K", T}, {"t_max", t_max}};
    write_manifest(config.out_dir / "manifest.json", manifest);
}

void run_single_mode(const ExperimentConfig& config) {
    const double omega_0 = 500.0, lambda = 25.0, T = 300.0;
    UnitSystem units;
    const double w = units.omega(omega_0);
    const double displacement = std::sqrt(2.0 * lambda) / w;
    std::vector<double> deltas = config.delta_list.empty() ? std::vector<double>{10.0, 50.0, 100.0}
                                                           : config.delta_list;
    const double t_max = default_tmax(config, 500.0);
    QuadratureSpec quad{t_max, default_grid(config, 400), 2};

    json manifest = config_echo(config);
    manifest["parameters"] = {{"omega_0", omega_0}, {"lambda", lambda}, {"temperature_K", T},
                              {"t_max", t_max}, {"deltas", deltas}};

    for (const double delta : deltas) {
        ModelFile m;
        m.system.energies = Eigen::Vector2d(omega_0, lambda);  // donor minimum gap = hbar omega_0
        m.system.couplings = Eigen::MatrixXcd::Zero(2, 2);
        m.system.couplings(0, 1) = delta;
        m.system.couplings(1, 0) = delta;
        m.system.channel_coefficients = Eigen::MatrixXd(2, 1);
        m.system.channel_coefficients << 0.0, 1.0;
        m.bath.channels = {SpectralChannel{std::vector<DiscreteMode>{{omega_0, displacement}}}};
        m.bath.temperature = T;
        m.bath.width_rule = WidthRule::thermal;
        m.initial_density.rho = Eigen::MatrixXcd::Zero(2, 2);
        m.initial_density.rho(0, 0) = 1.0;

        SeriesEngine local(m.system, m.bath, m.initial_density, quad, BasisChoice::local,
                           !config.serial);
        SeriesEngine eigen(m.system, m.bath, m.initial_density, quad, BasisChoice::eigen,
                           !config.serial);
        const TimeSeriesResult ls = local.assemble_series();
        const TimeSeriesResult es = eigen.assemble_series();

        std::vector<std::string> cols{"t_fs"};
        for (int n = 0; n <= 2; ++n) cols.push_back("local_pop_order" + std::to_string(n));
        cols.push_back("local_pop_total");
        for (int n = 0; n <= 2; ++n) cols.push_back("eigen_pop_order" + std::to_string(n));
        cols.push_back("eigen_pop_total");

        OracleResult oracle_result;
        if (config.oracle) {
            OracleMode om{omega_0, Eigen::Vector2d(0.0, displacement), 24};
            const DenseModel dense = build_hamiltonian(m.system, {om}, units);
            oracle_result = propagate(dense, m.initial_density.rho, T, ls.times, {false, false});
            cols.push_back("oracle_pop");
        }

        std::ostringstream tag;
        tag << "single_mode_delta" << delta;
        CsvWriter csv(config.out_dir / (tag.str() + ".csv"), cols);
        LineChart chart("Donor population, delta = " + std::to_string(delta), "t (fs)", "population");
        std::vector<double> pl, pe, po;
        for (std::size_t ti = 0; ti < ls.times.size(); ++ti) {
            std::vector<double> row{ls.times[ti]};
            double tot = 0.0;
            for (int n = 0; n <= 2; ++n) {
                const double v = ls.order_rdm[n][ti](0, 0).real();
                row.push_back(v);
                tot += v;
            }
            row.push_back(tot);
            pl.push_back(tot);
            tot = 0.0;
            for (int n = 0; n <= 2; ++n) {
                const double v = es.order_rdm[n][ti](0, 0).real();
                row.push_back(v);
                tot += v;
            }
            row.push_back(tot);
            pe.push_back(tot);
            if (config.oracle) {
                const double v = oracle_result.system_rdm[ti](0, 0).real();
                row.push_back(v);
                po.push_back(v);
            }
            csv.row(row);
        }
        chart.add_series("local, order 2", ls.times, pl);
        chart.add_series("eigen, order 2", es.times, pe);
        if (config.oracle) chart.add_series("exact", ls.times, po);
        chart.write(config.out_dir / (tag.str() + ".svg"));
    }
    write_manifest(config.out_dir / "manifest.json", manifest);
}

void run_kernels_dump(const ExperimentConfig& config) {
    const SpectralChannel dl{DrudeLorentz{50.0, 100.0}};
    ModelFile m = config.model_file ? load_model_file(*config.model_file)
                                    : qubit_model(50.0, 10.0, dl, 0.0, WidthRule::groundState);
    const double t_max = default_tmax(config, 500.0);
    const int grid = default_grid(config, 500);

    BathKernels kernels(m.bath, t_max);
    const BasisCoefficients coeffs = BasisCoefficients::local_basis(m.system, m.bath);
    StateKernels sk(kernels, coeffs);
    const double dt = t_max / grid;

    for (std::size_t c = 0; c < kernels.channel_count(); ++c) {
        CsvWriter h_csv(config.out_dir / ("kernel_h_ch" + std::to_string(c) + ".csv"),
                        {"t_fs", "value"});
        CsvWriter g_csv(config.out_dir / ("kernel_dg_ch" + std::to_string(c) + ".csv"),
                        {"t_fs", "value"});
        for (int i = 0; i <= grid; ++i) {
            const double t = dt * i;
            h_csv.row({t, kernels.channel(c).h(t)});
            g_csv.row({t, kernels.channel(c).dg(t)});
        }
    }
    {
        CsvWriter h_csv(config.out_dir / "kernel_H_0101.csv", {"t_fs", "value"});
        CsvWriter g_csv(config.out_dir / "kernel_dG_0101.csv", {"t_fs", "value"});
        for (int i = 0; i <= grid; ++i) {
            const double t = dt * i;
            h_csv.row({t, sk.h_kernel(0, 1, 0, 1, t)});
            g_csv.row({t, sk.g_kernel_diff(0, 1, 0, 1, t, 0.0)});
        }
    }
    LineChart chart("Base kernels", "t (fs)", "kernel value");
    std::vector<double> ts, hv, gv;
    for (int i = 0; i <= grid; ++i) {
        const double t = dt * i;
        ts.push_back(t);
        hv.push_back(kernels.channel(0).h(t));
        gv.push_back(kernels.channel(0).dg(t));
    }
    chart.add_series("h(t)", ts, hv);
    chart.add_series("dg(t)", ts, gv);
    chart.write(config.out_dir / "kernels.svg");

    write_manifest(config.out_dir / "manifest.json", config_echo(config));
}

}  // namespace ptwa
