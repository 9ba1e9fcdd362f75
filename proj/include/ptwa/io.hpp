#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ptwa/model.hpp"

namespace ptwa {

struct ModelFile {
    SystemModel system;
    BathSpec bath;
    InitialSystemDensity initial_density;
};

/// Load a model description from JSON:
///   system: {energies, couplings, channel_coefficients}
///   bath:   {channels[], temperature_K, width_rule, centers}
///   initial_density: row-major [re, im] pairs.
/// Energies in cm^-1, times in fs.
ModelFile load_model_file(const std::filesystem::path& path);
ModelFile parse_model_json(const nlohmann::json& j);
nlohmann::json model_to_json(const ModelFile& m);

/// Minimal CSV writer: fixed column set, one row per call.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
    ~CsvWriter();
    void row(const std::vector<double>& values);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Deterministic manifest (config echo plus derived constants); no
/// timestamps, so identical configurations rewrite identical bytes.
void write_manifest(const std::filesystem::path& path, const nlohmann::json& manifest);

}  // namespace ptwa
