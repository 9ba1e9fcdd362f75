#include "ptwa/io.hpp"

#include <fstream>
#include <iomanip>

#include <nlohmann/json.hpp>

namespace ptwa {

using nlohmann::json;

namespace {

Eigen::MatrixXcd parse_complex_matrix(const json& j, int rows, int cols, const std::string& what) {
    Eigen::MatrixXcd out(rows, cols);
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw ValidationError(what + ": expected " + std::to_string(rows) + " rows");
    for (int r = 0; r < rows; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ValidationError(what + ": bad row length");
        for (int c = 0; c < cols; ++c) {
            const auto& e = row[c];
            if (e.is_number())
                out(r, c) = e.get<double>();
            else if (e.is_array() && e.size() == 2)
                out(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
            else
                throw ValidationError(what + ": entries must be numbers or [re, im] pairs");
        }
    }
    return out;
}

json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

SpectralChannel parse_channel(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "drude_lorentz") {
        DrudeLorentz dl;
        dl.lambda = j.at("lambda").get<double>();
        dl.omega_c = j.at("omega_c").get<double>();
        if (j.contains("window")) {
            const auto& w = j.at("window");
            if (!w[0].is_null()) dl.nu_lo = w[0].get<double>();
            if (!w[1].is_null()) dl.nu_hi = w[1].get<double>();
        }
        return SpectralChannel{dl};
    }
    if (type == "discrete") {
        std::vector<DiscreteMode> modes;
        for (const auto& m : j.at("modes"))
            modes.push_back({m.at("omega").get<double>(), m.at("displacement").get<double>()});
        return SpectralChannel{modes};
    }
    throw ValidationError("unknown channel type: " + type);
}

json channel_to_json(const SpectralChannel& ch) {
    json j;
    if (ch.is_discrete()) {
        j["type"] = "discrete";
        json modes = json::array();
        for (const auto& m : ch.modes())
            modes.push_back({{"omega", m.wavenumber}, {"displacement", m.displacement}});
        j["modes"] = modes;
    } else {
        const auto& dl = ch.drude_lorentz();
        j["type"] = "drude_lorentz";
        j["lambda"] = dl.lambda;
        j["omega_c"] = dl.omega_c;
        j["window"] = {dl.nu_lo > 0.0 ? json(dl.nu_lo) : json(nullptr),
                       std::isfinite(dl.nu_hi) ? json(dl.nu_hi) : json(nullptr)};
    }
    return j;
}

}  // namespace

ModelFile parse_model_json(const json& j) {
    ModelFile out;
    const auto& sys = j.at("system");
    const auto energies = sys.at("energies").get<std::vector<double>>();
    const int m = static_cast<int>(energies.size());
    out.system.energies = Eigen::Map<const Eigen::VectorXd>(energies.data(), m);
    out.system.couplings = parse_complex_matrix(sys.at("couplings"), m, m, "couplings");

    const auto& cc = sys.at("channel_coefficients");
    const int nch = cc.empty() ? 0 : static_cast<int>(cc[0].size());
    out.system.channel_coefficients.resize(m, nch);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < nch; ++c) out.system.channel_coefficients(r, c) = cc[r][c].get<double>();

    const auto& bath = j.at("bath");
    for (const auto& ch : bath.at("channels")) out.bath.channels.push_back(parse_channel(ch));
    out.bath.temperature = bath.value("temperature_K", 0.0);
    const std::string rule = bath.value("width_rule", std::string("ground_state"));
    if (rule == "thermal")
        out.bath.width_rule = WidthRule::thermal;
    else if (rule == "ground_state")
        out.bath.width_rule = WidthRule::groundState;
    else
        throw ValidationError("unknown width_rule: " + rule);
    if (bath.contains("centers")) {
        for (const auto& chc : bath.at("centers")) {
            std::vector<WignerCenter> cs;
            for (const auto& c : chc) cs.push_back({c.at("x").get<double>(), c.at("p").get<double>()});
            out.bath.centers.push_back(std::move(cs));
        }
    }

    out.initial_density.rho = parse_complex_matrix(j.at("initial_density"), m, m, "initial_density");
    out.system.validate();
    out.bath.validate();
    out.initial_density.validate();
    if (static_cast<std::size_t>(nch) != out.bath.channels.size())
        throw ValidationError("channel_coefficients column count must match bath channel count");
    return out;
}

ModelFile load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path.string());
    json j;
    in >> j;
    return parse_model_json(j);
}

json model_to_json(const ModelFile& m) {
    json j;
    j["system"]["energies"] = std::vector<double>(m.system.energies.data(),
                                                  m.system.energies.data() + m.system.energies.size());
    j["system"]["couplings"] = complex_matrix_to_json(m.system.couplings);
    {
        json rows = json::array();
        for (int r = 0; r < m.system.channel_coefficients.rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < m.system.channel_coefficients.cols(); ++c)
                row.push_back(m.system.channel_coefficients(r, c));
            rows.push_back(row);
        }
        j["system"]["channel_coefficients"] = rows;
    }
    json channels = json::array();
    for (const auto& ch : m.bath.channels) channels.push_back(channel_to_json(ch));
    j["bath"]["channels"] = channels;
    j["bath"]["temperature_K"] = m.bath.temperature;
    j["bath"]["width_rule"] = m.bath.width_rule == WidthRule::thermal ? "thermal" : "ground_state";
    if (!m.bath.centers.empty()) {
        json centers = json::array();
        for (const auto& chc : m.bath.centers) {
            json cs = json::array();
            for (const auto& c : chc) cs.push_back({{"x", c.x}, {"p", c.p}});
            centers.push_back(cs);
        }
        j["bath"]["centers"] = centers;
    }
    j["initial_density"] = complex_matrix_to_json(m.initial_density.rho);
    return j;
}

struct CsvWriter::Impl {
    std::ofstream out;
    std::size_t columns;
};

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : impl_(new Impl) {
    impl_->out.open(path);
    if (!impl_->out) throw ValidationError("cannot open output file: " + path.string());
    impl_->columns = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i)
        impl_->out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    impl_->out << std::setprecision(12);
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != impl_->columns) throw ValidationError("CSV row length mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        impl_->out << values[i] << (i + 1 < values.size() ? "," : "\n");
}

void write_manifest(const std::filesystem::path& path, const json& manifest) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open manifest file: " + path.string());
    out << manifest.dump(2) << "\n";
}

}  // namespace ptwa
