#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace qcsvd {

/// Periodic matrix product state |ψ> = Σ tr(A_1^{s_1} ... A_N^{s_N}) |s_1 ... s_N>
/// with site-dependent χ×χ real matrices. Physical index 0 is spin up.
class MpsState {
 public:
  MpsState(int n_sites, int chi);

  int n_sites() const noexcept { return n_sites_; }
  int chi() const noexcept { return chi_; }

  Eigen::MatrixXd& tensor(int site, int spin);
  const Eigen::MatrixXd& tensor(int site, int spin) const;

  /// Bookkeeping carried into checkpoints.
  std::uint64_t seed = 0;
  int sweep_count = 0;

 private:
  int n_sites_;
  int chi_;
  std::vector<std::array<Eigen::MatrixXd, 2>> tensors_;
};

/// Entries uniform in [-1, 1) from a seeded generator. A draw whose norm is
/// numerically zero is redrawn with seed+1, up to 8 times.
MpsState random_init(int n_sites, int chi, std::uint64_t seed);

/// log <ψ|ψ>; throws DegenerateStateError when the norm vanishes relative to
/// the scale of the transfer-matrix product.
double log_norm(const MpsState& state);

/// Rayleigh quotient of the Heisenberg ring, contracted bond by bond.
double energy(const MpsState& state, double coupling);

/// <S_i^z S_j^z> on the normalized state.
double mps_correlator_zz(const MpsState& state, int i, int j);

/// All pairs at once via prefix/suffix transfer products.
Eigen::MatrixXd mps_correlation_matrix(const MpsState& state);

/// Local problem H_eff |A> = E N_eff |A> for one site. Vector index is
/// spin * χ² + left * χ + right; both matrices share an arbitrary scale.
struct EffectiveProblem {
  Eigen::MatrixXd h_eff;
  Eigen::MatrixXd n_eff;
};

EffectiveProblem effective_problem(const MpsState& state, int site, double coupling);

struct SiteSolverOptions {
  double regularization = 1e-10;  // ε in N_eff + ε tr(N_eff)/(2χ²) 1
  double cutoff = 1e-8;           // directions with N_eff-norm below cutoff (relative) are discarded
};

struct SiteUpdate {
  double energy = 0.0;  // Rayleigh quotient of the tensor left in place
  int kept_dim = 0;     // dimension of the well-conditioned subspace
  bool accepted = true; // false when the previous tensor was kept
};

/// Solve the regularized generalized eigenproblem and replace the tensor at
/// `site` by the lowest eigenvector, unless its Rayleigh quotient on the raw
/// H_eff, N_eff is not below the current tensor's. Throws ConditioningError
/// if nothing survives the cutoff.
SiteUpdate solve_effective(const EffectiveProblem& problem, MpsState& state, int site,
                           const SiteSolverOptions& options = {});

/// Build the effective problem from scratch and update one site.
SiteUpdate optimize_site(MpsState& state, int site, double coupling,
                         const SiteSolverOptions& options = {});

struct SweepReport {
  int sweep_index = 0;
  double energy = 0.0;
  double energy_change = 0.0;
  std::optional<double> spectrum_change;
};

struct SweepOptions {
  int n_sweeps = 40;
  /// Track the correlation-matrix spectrum on the last this-many sweeps.
  int track_spectrum_last = 0;
  /// Modes with λ_n below this fraction of λ_1 are ignored in spectrum_change.
  double spectrum_floor = 1e-3;
  SiteSolverOptions site;
  std::function<void(const SweepReport&)> on_sweep;
};

/// Forward sweeps 0 → N-1 with cached ring environments.
std::vector<SweepReport> sweep_optimize(MpsState& state, double coupling,
                                        const SweepOptions& options = {});

/// λ_n = (eigenvalue of S)², descending.
Eigen::VectorXd squared_spectrum(const Eigen::MatrixXd& correlation);

}  // namespace qcsvd
