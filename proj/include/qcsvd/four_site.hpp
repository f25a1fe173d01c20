#pragma once

#include "qcsvd/spin_basis.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

/// Closed-form reference values for the 4-site ring, plus the routines that
/// recompute them from a wavefunction.
namespace qcsvd::four_site {

/// (-1, 2, -1, -1, 2, -1)/√12 over the sorted S_z = 0 configurations.
Wavefunction oracle_ground_state();

struct DensityMatrices {
  Eigen::Matrix2d rho_a;   // site 1
  Eigen::Matrix4d rho_ab;  // sites 1-2, basis ↑↑, ↑↓, ↓↑, ↓↓
};

DensityMatrices oracle_density_matrices();

struct Entropies {
  double s_ab = 0.0;
  double s_a = 0.0;
  double s_b = 0.0;
  double mutual_information = 0.0;
};

/// S_AB = 2 ln 2 - ½ ln 3, S_A = S_B = ln 2, I = ½ ln 3.
Entropies oracle_entropies();

Eigen::Matrix4d oracle_correlation_matrix();
Eigen::Vector4d oracle_singular_values();
/// S⁽¹⁾, S⁽²⁾, S⁽³⁾ as printed for one choice of basis in the degenerate pair.
std::array<Eigen::Matrix4d, 3> oracle_components();

/// ψ = ψ₁ + ψ₂: Néel part and one-domain part, over the same sorted configs.
struct PsiSplit {
  Wavefunction psi1;
  Wavefunction psi2;
};

PsiSplit oracle_psi_split();

/// Reduced density matrix of `sites` (ascending, first site is the most
/// significant index bit; bit value 0 = up).
Eigen::MatrixXd reduced_density_matrix(const Wavefunction& wf, const std::vector<int>& sites);

/// -tr ρ ln ρ.
double von_neumann_entropy(const Eigen::MatrixXd& rho);

/// Entropies recomputed from a 4-site wavefunction.
Entropies entropies_of(const Wavefunction& wf);

/// Correlation matrix of an unnormalized state: (S_n)_ij = <ψ_n|S_i^z S_j^z|ψ_n>.
Eigen::MatrixXd unnormalized_correlation(const Wavefunction& wf);

struct DecompositionReport {
  Eigen::Matrix4d s1;
  Eigen::Matrix4d s2;
  Eigen::Matrix4d component1;  // S⁽¹⁾ from the eigendecomposition
  Eigen::Matrix4d pair_sum;    // S⁽²⁾ + S⁽³⁾
  double s1_error = 0.0;               // max |S₁ - S⁽¹⁾|
  double s2_factor4_error = 0.0;       // max |S₂ - 4(S⁽²⁾ + S⁽³⁾)|
  double s2_factor1_error = 0.0;       // max |S₂ - (S⁽²⁾ + S⁽³⁾)|
  double s2_best_factor = 0.0;         // least-squares c in S₂ ≈ c(S⁽²⁾ + S⁽³⁾)
  double overlap = 0.0;                // <ψ₁|ψ₂>
};

/// Compares S₁, S₂ built from ψ₁, ψ₂ against the SVD components of the exact
/// correlation matrix, with the degenerate pair summed.
DecompositionReport oracle_decomposition_check();

}  // namespace qcsvd::four_site
