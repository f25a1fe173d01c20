#include "qcsvd/correlation.hpp"

#include "qcsvd/errors.hpp"

#include <cmath>

namespace qcsvd {

namespace {

// Σ_c weight(c) s_i(c) s_j(c) / 4 over one sector, upper triangle included.
void accumulate_diagonal_observable(const SectorBasis& basis, const Eigen::VectorXd& weights,
                                    Eigen::MatrixXd& out) {
  const int n = basis.n_sites();
  const auto configs = basis.configs();
  Eigen::VectorXd spins(n);
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const double w = weights[static_cast<Eigen::Index>(k)];
    if (w == 0.0) continue;
    for (int i = 0; i < n; ++i) spins[i] = ((configs[k] >> i) & 1ULL) ? 0.5 : -0.5;
    for (int i = 0; i < n; ++i) {
      const double wi = w * spins[i];
      for (int j = i; j < n; ++j) out(i, j) += wi * spins[j];
    }
  }
}

void mirror_upper(Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) m(j, i) = m(i, j);
  }
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kEdGround: return "ed-ground";
    case Provenance::kMps: return "mps";
    case Provenance::kThermal: return "thermal";
    case Provenance::kExternal: return "external";
  }
  return "external";
}

StructureReport check_structure(const CorrelationMatrix& s) {
  const Eigen::MatrixXd& m = s.entries;
  const Eigen::Index n = m.rows();
  StructureReport r;
  r.asymmetry = (m - m.transpose()).cwiseAbs().maxCoeff();
  r.diagonal_error = (m.diagonal().array() - 0.25).abs().maxCoeff();
  r.max_row_sum = m.rowwise().sum().cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()),
                                                     Eigen::EigenvaluesOnly);
  r.min_eigenvalue = eig.eigenvalues()[0];
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      r.circulant_error = std::max(r.circulant_error, std::abs(m(i, j) - m(0, (j - i + n) % n)));
    }
  }
  return r;
}

CorrelationMatrix build_from_wavefunction(const Wavefunction& wf) {
  const int n = wf.n_sites();
  CorrelationMatrix out;
  out.provenance = Provenance::kEdGround;
  out.entries = Eigen::MatrixXd::Zero(n, n);
  accumulate_diagonal_observable(*wf.basis, wf.amps.array().square().matrix(), out.entries);
  mirror_upper(out.entries);
  if (wf.basis->n_up() * 2 != n) {
    out.notes.push_back("wavefunction is outside the S_z = 0 sector; zero row sums not expected");
  }
  const double norm2 = wf.amps.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-10) {
    out.notes.push_back("wavefunction was not normalized; entries rescaled");
    out.entries /= norm2;
  }
  return out;
}

CorrelationMatrix build_from_mps(const MpsState& state) {
  CorrelationMatrix out;
  out.provenance = Provenance::kMps;
  // The contraction is symmetric in (i, j) by construction (the S^z
  // insertions commute), so the upper triangle is evaluated and mirrored.
  out.entries = mps_correlation_matrix(state);
  return out;
}

CorrelationMatrix build_thermal(const FullSpectrum& spectrum, double beta) {
  if (!(beta >= 0.0)) throw DomainError("inverse temperature must be >= 0");
  const int n = spectrum.n_sites();
  CorrelationMatrix out;
  out.provenance = Provenance::kThermal;
  out.beta = beta;
  out.entries = Eigen::MatrixXd::Zero(n, n);

  const double e0 = spectrum.ground_energy();
  double z = 0.0;
  for (const SectorSpectrum& sector : spectrum.sectors()) {
    Eigen::VectorXd weights;
    if (beta == 0.0) {
      // Every eigenbasis is complete, so Σ_n |<c|n>|² = 1 exactly.
      weights = Eigen::VectorXd::Ones(sector.energies.size());
      z += static_cast<double>(sector.energies.size());
    } else {
      const Eigen::VectorXd boltzmann = (-beta * (sector.energies.array() - e0)).exp().matrix();
      z += boltzmann.sum();
      weights = sector.vectors.array().square().matrix() * boltzmann;
    }
    accumulate_diagonal_observable(*sector.basis, weights, out.entries);
  }
  out.entries /= z;
  mirror_upper(out.entries);
  return out;
}

}  // namespace qcsvd
