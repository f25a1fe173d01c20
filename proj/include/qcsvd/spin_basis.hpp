#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace qcsvd {

/// Bit i set means spin up at site i.
using SpinConfig = std::uint64_t;

inline constexpr int kMaxSectorSites = 24;

/// All spin configurations of an N-site ring with fixed total S_z, in
/// increasing integer order. Lookup uses the combinatorial number system,
/// which enumerates fixed-popcount words in exactly that order.
class SectorBasis {
 public:
  SectorBasis(int n_sites, int n_up);

  int n_sites() const noexcept { return n_sites_; }
  int n_up() const noexcept { return n_up_; }
  double sz_total() const noexcept { return n_up_ - 0.5 * n_sites_; }
  std::size_t size() const noexcept { return configs_.size(); }
  bool empty() const noexcept { return configs_.empty(); }

  std::span<const SpinConfig> configs() const noexcept { return configs_; }
  SpinConfig config(std::size_t index) const { return configs_.at(index); }

  std::optional<std::size_t> index_of(SpinConfig config) const noexcept;

 private:
  int n_sites_;
  int n_up_;
  std::vector<SpinConfig> configs_;
  // binom_[n][k] = C(n, k) for n < n_sites, k <= n_up
  std::vector<std::vector<std::uint64_t>> binom_;
};

using SectorBasisPtr = std::shared_ptr<const SectorBasis>;

/// Throws InvalidSizeError for odd N, N < 4 or N above kMaxSectorSites, and
/// DomainError when sz_total is not a half-integer. An unattainable S_z gives
/// an empty basis.
SectorBasisPtr enumerate_sector(int n_sites, double sz_total);

/// Lowest-integer Néel configuration (spins up on even sites).
SpinConfig neel_config(int n_sites) noexcept;

/// Real amplitude vector over a sector.
struct Wavefunction {
  SectorBasisPtr basis;
  Eigen::VectorXd amps;

  Wavefunction() = default;
  Wavefunction(SectorBasisPtr b, Eigen::VectorXd a);
  explicit Wavefunction(SectorBasisPtr b);  // zero amplitudes

  int n_sites() const { return basis->n_sites(); }
  double norm() const { return amps.norm(); }
  Wavefunction& normalize();
};

/// Basis state |config> within `basis`; throws DomainError if absent.
Wavefunction basis_state(SectorBasisPtr basis, SpinConfig config);

/// H·wf for the periodic Heisenberg ring, H = J Σ_i S_i·S_{i+1}.
Wavefunction apply_hamiltonian(const Wavefunction& wf, double coupling);

/// <wf|H|wf>/<wf|wf>.
double energy_expectation(const Wavefunction& wf, double coupling);

/// <wf|S_i^z S_j^z|wf>, assuming wf is normalized.
double correlator_zz(const Wavefunction& wf, int i, int j);

/// Dense matrix of H in the sector (sector dims up to a few thousand).
Eigen::MatrixXd dense_hamiltonian(const SectorBasis& basis, double coupling);

}  // namespace qcsvd
