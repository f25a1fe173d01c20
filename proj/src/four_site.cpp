#include "qcsvd/four_site.hpp"

#include "qcsvd/correlation.hpp"
#include "qcsvd/errors.hpp"
#include "qcsvd/svd_analysis.hpp"

#include <cmath>

namespace qcsvd::four_site {

namespace {

// Sorted S_z = 0 configurations of 4 sites: 3, 5, 6, 9, 10, 12, i.e.
// ↑↑↓↓, ↑↓↑↓, ↓↑↑↓, ↑↓↓↑, ↓↑↓↑, ↓↓↑↑ (site 1 leftmost).
SectorBasisPtr sector() { return enumerate_sector(4, 0.0); }

Wavefunction from_amplitudes(std::initializer_list<double> amps) {
  auto basis = sector();
  Eigen::VectorXd v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index k = 0;
  for (double a : amps) v[k++] = a;
  return Wavefunction(basis, v);
}

}  // namespace

Wavefunction oracle_ground_state() {
  const double c = 1.0 / std::sqrt(12.0);
  return from_amplitudes({-c, 2 * c, -c, -c, 2 * c, -c});
}

DensityMatrices oracle_density_matrices() {
  DensityMatrices d;
  d.rho_a = 0.5 * Eigen::Matrix2d::Identity();
  d.rho_ab.setZero();
  d.rho_ab(0, 0) = 1.0 / 12.0;
  d.rho_ab(1, 1) = 5.0 / 12.0;
  d.rho_ab(2, 2) = 5.0 / 12.0;
  d.rho_ab(3, 3) = 1.0 / 12.0;
  d.rho_ab(1, 2) = -1.0 / 3.0;
  d.rho_ab(2, 1) = -1.0 / 3.0;
  return d;
}

Entropies oracle_entropies() {
  Entropies e;
  e.s_ab = 2.0 * std::log(2.0) - 0.5 * std::log(3.0);
  e.s_a = std::log(2.0);
  e.s_b = std::log(2.0);
  e.mutual_information = 0.5 * std::log(3.0);
  return e;
}

Eigen::Matrix4d oracle_correlation_matrix() {
  const double d = 1.0 / 4.0;
  const double nn = -1.0 / 6.0;
  const double nnn = 1.0 / 12.0;
  Eigen::Matrix4d s;
  s << d, nn, nnn, nn,
       nn, d, nn, nnn,
       nnn, nn, d, nn,
       nn, nnn, nn, d;
  return s;
}

Eigen::Vector4d oracle_singular_values() {
  return Eigen::Vector4d(2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 0.0);
}

std::array<Eigen::Matrix4d, 3> oracle_components() {
  Eigen::Matrix4d s1;
  s1 << 1, -1, 1, -1,
        -1, 1, -1, 1,
        1, -1, 1, -1,
        -1, 1, -1, 1;
  Eigen::Matrix4d s2;
  s2 << 1, 0, -1, 0,
        0, 0, 0, 0,
        -1, 0, 1, 0,
        0, 0, 0, 0;
  Eigen::Matrix4d s3;
  s3 << 0, 0, 0, 0,
        0, 1, 0, -1,
        0, 0, 0, 0,
        0, -1, 0, 1;
  return {s1 / 6.0, s2 / 12.0, s3 / 12.0};
}

PsiSplit oracle_psi_split() {
  const double a = 1.0 / std::sqrt(3.0);
  const double b = -1.0 / std::sqrt(12.0);
  return PsiSplit{from_amplitudes({0, a, 0, 0, a, 0}), from_amplitudes({b, 0, b, b, 0, b})};
}

Eigen::MatrixXd reduced_density_matrix(const Wavefunction& wf, const std::vector<int>& sites) {
  const int n = wf.n_sites();
  for (int s : sites) {
    if (s < 0 || s >= n) throw IndexError("site index out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << sites.size();
  SpinConfig kept_mask = 0;
  for (int s : sites) kept_mask |= SpinConfig{1} << s;

  // Local index: first listed site is the most significant bit, 0 = up.
  const auto local_index = [&](SpinConfig c) {
    Eigen::Index idx = 0;
    for (int s : sites) idx = (idx << 1) | (((c >> s) & 1ULL) ? 0 : 1);
    return idx;
  };

  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim, dim);
  const auto configs = wf.basis->configs();
  for (std::size_t p = 0; p < configs.size(); ++p) {
    for (std::size_t q = 0; q < configs.size(); ++q) {
      if ((configs[p] & ~kept_mask) != (configs[q] & ~kept_mask)) continue;
      rho(local_index(configs[p]), local_index(configs[q])) +=
          wf.amps[static_cast<Eigen::Index>(p)] * wf.amps[static_cast<Eigen::Index>(q)];
    }
  }
  return rho;
}

double von_neumann_entropy(const Eigen::MatrixXd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
    const double p = eig.eigenvalues()[k];
    if (p > 1e-300) s -= p * std::log(p);
  }
  return s;
}

Entropies entropies_of(const Wavefunction& wf) {
  Entropies e;
  e.s_ab = von_neumann_entropy(reduced_density_matrix(wf, {0, 1}));
  e.s_a = von_neumann_entropy(reduced_density_matrix(wf, {0}));
  e.s_b = von_neumann_entropy(reduced_density_matrix(wf, {1}));
  e.mutual_information = e.s_a + e.s_b - e.s_ab;
  return e;
}

Eigen::MatrixXd unnormalized_correlation(const Wavefunction& wf) {
  const int n = wf.n_sites();
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s(i, j) = correlator_zz(wf, i, j);
  }
  return s;
}

DecompositionReport oracle_decomposition_check() {
  const PsiSplit split = oracle_psi_split();
  const SvdSpectrum spec = eigendecompose(Eigen::MatrixXd(oracle_correlation_matrix()));

  DecompositionReport r;
  r.s1 = unnormalized_correlation(split.psi1);
  r.s2 = unnormalized_correlation(split.psi2);
  r.component1 = component(spec, 1).matrix;
  r.pair_sum = component(spec, 2).matrix + component(spec, 3).matrix;
  r.s1_error = (r.s1 - r.component1).cwiseAbs().maxCoeff();
  r.s2_factor4_error = (r.s2 - 4.0 * r.pair_sum).cwiseAbs().maxCoeff();
  r.s2_factor1_error = (r.s2 - r.pair_sum).cwiseAbs().maxCoeff();
  r.s2_best_factor = (r.s2.array() * r.pair_sum.array()).sum() / r.pair_sum.squaredNorm();
  r.overlap = split.psi1.amps.dot(split.psi2.amps);
  return r;
}

}  // namespace qcsvd::four_site
