#pragma once

#include "qcsvd/spin_basis.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace qcsvd {

inline constexpr int kMaxLanczosSites = 20;
inline constexpr int kMaxFullSpectrumSites = 12;

struct LanczosOptions {
  double tol = 1e-12;           // change of the lowest Ritz value between steps
  double residual_tol = 1e-10;  // ||H v - E v|| on acceptance
  int max_iter = 5000;          // total matrix-vector products
  int krylov_dim = 120;         // restart length
  double min_gap = 1e-8;        // two lowest Ritz values must be separated
  std::uint64_t seed = 0;
};

struct GroundSolution {
  double energy = 0.0;
  Wavefunction wf;
  double residual_norm = 0.0;
  double gap = 0.0;  // lowest Ritz gap seen (infinite for 1-dim sectors)
  int iterations = 0;
};

/// Lowest eigenpair of the ring Hamiltonian in one S_z sector by restarted
/// Lanczos with full re-orthogonalization. The sign is fixed so that the
/// lowest-integer Néel configuration (or, outside S_z = 0, the first largest
/// amplitude) is positive. Throws ConvergenceError when max_iter is exhausted
/// and ContractViolation if the ground state looks degenerate.
GroundSolution lanczos_ground_state(const SectorBasisPtr& basis, double coupling,
                                    const LanczosOptions& options = {});

/// Flip the sign of `wf` according to the convention above.
void fix_sign(Wavefunction& wf);

struct SectorSpectrum {
  SectorBasisPtr basis;
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd vectors;   // column n is the eigenvector for energies[n]
};

/// Every eigenpair of a small ring, grouped by S_z sector from -N/2 to N/2.
class FullSpectrum {
 public:
  FullSpectrum(int n_sites, double coupling, std::vector<SectorSpectrum> sectors);

  int n_sites() const noexcept { return n_sites_; }
  double coupling() const noexcept { return coupling_; }
  const std::vector<SectorSpectrum>& sectors() const noexcept { return sectors_; }

  std::size_t total_states() const;
  std::vector<double> energies() const;  // all sectors, ascending
  double ground_energy() const;
  Wavefunction state(std::size_t sector, Eigen::Index n) const;

  /// Z = Σ exp(-β E_n); throws DomainError for β < 0.
  double partition_function(double beta) const;
  /// log Z, stable for large β.
  double log_partition_function(double beta) const;

 private:
  int n_sites_;
  double coupling_;
  std::vector<SectorSpectrum> sectors_;
};

/// Dense diagonalization of every sector; throws InvalidSizeError above
/// kMaxFullSpectrumSites.
FullSpectrum full_spectrum(int n_sites, double coupling);

}  // namespace qcsvd
