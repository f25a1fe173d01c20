#pragma once

#include "qcsvd/mps.hpp"
#include "qcsvd/spin_basis.hpp"
#include "qcsvd/svd_analysis.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <string>
#include <variant>

namespace qcsvd::io {

/// 17 significant digits, locale independent.
std::string format_double(double v);

/// N rows of N comma-separated fields, no header.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Header `n,sqrt_lambda,lambda`.
void write_spectrum_csv(const std::filesystem::path& path, const SvdSpectrum& spec);

/// Binary P5 graymap of |m| scaled to the largest magnitude.
void write_heatmap_pgm(const std::filesystem::path& path, const Eigen::MatrixXd& m);

/// Pretty JSON with sorted keys.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

struct EdState {
  int n_sites = 0;
  double coupling = 1.0;
  double energy = 0.0;
  Wavefunction wf;
};

/// Checkpoints. ED: {"format":"qcsvd-ed-state","version":1,"n_sites","sz_total",
/// "J","energy","amplitudes":[...]} over the sorted sector configurations.
/// MPS: {"format":"qcsvd-mps-state","version":1,"n_sites","chi","seed",
/// "sweep_count","J","tensors":[[up,down] per site, each row-major χ×χ]}.
nlohmann::json ed_state_to_json(const EdState& s);
EdState ed_state_from_json(const nlohmann::json& j);

nlohmann::json mps_to_json(const MpsState& s, double coupling);
MpsState mps_from_json(const nlohmann::json& j);

using StateFile = std::variant<EdState, MpsState>;

/// Dispatches on "format"; throws FormatError for anything unrecognized.
StateFile read_state(const std::filesystem::path& path);

}  // namespace qcsvd::io
