#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "ffspec/ffop.hpp"
#include "ffspec/forward.hpp"
#include "ffspec/phaseless.hpp"
#include "ffspec/scatterer.hpp"

namespace ffspec::io {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

/// Shortest round-trip decimal form; "nan"/"inf" spelled out.
std::string format_double(double v);

json to_json(const ScattererSpec& spec);
/// Reads {"shape": ..., "condition": ..., ...}; the wavenumber comes from the
/// caller. Throws ConfigError with a field path prefix.
ScattererSpec scatterer_from_json(const json& j, double wavenumber, const std::string& path = "scatterer");

json to_json(const DirectionRule& rule);
/// {"n_polar", "n_azimuth"} or {"n_circle"}.
DirectionRule rule_from_json(const json& j, const std::string& path = "rule");

json to_json(const SpectralDiagnostics& diag);
json to_json(const TailResult& tail);
json to_json(const RetrievedKernel& result);

/// "i,j,re,im", one line per entry in row-major order.
void write_kernel_csv(const FarFieldKernel& kernel, const fs::path& file);
FarFieldKernel read_kernel_csv(const fs::path& file, const DirectionRule& rule, double wavenumber);
json kernel_meta(const FarFieldKernel& kernel);

/// "index,re,im,abs,circle_residual"; residual left blank below the floor.
void write_eigenvalues_csv(const Spectrum& spectrum, double k, int dimension, const fs::path& file);

/// Directory with r.csv, M.csv (one row per (i, pair)) and meta.json.
void write_dataset(const PhaselessDataset& data, const fs::path& dir);
PhaselessDataset read_dataset(const fs::path& dir);

void write_json(const json& j, const fs::path& file);
json read_json(const fs::path& file);

}  // namespace ffspec::io
