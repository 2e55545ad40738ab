#pragma once

#include <string>

#include <json.hpp>

#include "zgkn/grid.hpp"
#include "zgkn/spectral.hpp"

namespace zgkn {

using nlohmann::json;

/// FNV-1a 64-bit hash of the canonical config dump, as a hex string; binds
/// every emitted artifact to the configuration that produced it.
std::string config_hash(const json& config);

json params_to_json(const ModelParams& p);
ModelParams params_from_json(const json& j);

/// Result envelope shared by all subcommands.  The timestamp is omitted in
/// reproducible mode so identical configs give byte-identical files.
json make_envelope(const json& config, json payload, json diagnostics,
                   bool reproducible);

/// Grid container: binary block (shape header + interleaved little-endian
/// re/im doubles) plus a JSON sidecar <path>.json with params, kappa and E.
void save_grid(const GridBiSpinor& g, const ModelParams& params,
               const std::string& path, const std::string& cfg_hash);
GridBiSpinor load_grid(const std::string& path, ModelParams* params_out = nullptr,
                       std::string* hash_out = nullptr);

/// Separated eigenstates round-trip through JSON (tables included).
json state_to_json(const SeparatedState& st);
SeparatedState state_from_json(const json& j);
void save_state(const SeparatedState& st, const std::string& path,
                const std::string& cfg_hash);
SeparatedState load_state(const std::string& path, std::string* hash_out = nullptr);

} // namespace zgkn
