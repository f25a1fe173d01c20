#pragma once

#include "qcsvd/exact_diag.hpp"
#include "qcsvd/mps.hpp"
#include "qcsvd/spin_basis.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace qcsvd {

enum class Provenance { kEdGround, kMps, kThermal, kExternal };

std::string to_string(Provenance p);

/// N×N matrix of <S_i^z S_j^z>. Entries are stored dense and mirrored so the
/// matrix is exactly symmetric.
struct CorrelationMatrix {
  Eigen::MatrixXd entries;
  Provenance provenance = Provenance::kExternal;
  std::optional<double> beta;      // thermal only
  std::vector<std::string> notes;  // non-fatal build warnings

  int n_sites() const { return static_cast<int>(entries.rows()); }
};

/// Measured deviations from the structural invariants.
struct StructureReport {
  double asymmetry = 0.0;          // max |S_ij - S_ji|
  double diagonal_error = 0.0;     // max |S_ii - 1/4|
  double min_eigenvalue = 0.0;
  double max_row_sum = 0.0;        // max_i |Σ_j S_ij|
  double circulant_error = 0.0;    // max |S_ij - S_{0,(j-i) mod N}|
};

StructureReport check_structure(const CorrelationMatrix& s);

/// Ground-state style matrix from a normalized wavefunction. Outside the
/// S_z = 0 sector a note is attached instead of failing.
CorrelationMatrix build_from_wavefunction(const Wavefunction& wf);

CorrelationMatrix build_from_mps(const MpsState& state);

/// S_ij(β) = Z⁻¹ Σ_n e^{-β E_n} <n|S_i^z S_j^z|n>; throws DomainError for β < 0.
CorrelationMatrix build_thermal(const FullSpectrum& spectrum, double beta);

}  // namespace qcsvd
