#include "qcsvd/exact_diag.hpp"

#include "qcsvd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace qcsvd {

namespace {

Eigen::VectorXd random_start(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = dist(rng);
  return v.normalized();
}

Eigen::VectorXd apply_h(const SectorBasisPtr& basis, const Eigen::VectorXd& v, double coupling) {
  return apply_hamiltonian(Wavefunction(basis, v), coupling).amps;
}

}  // namespace

void fix_sign(Wavefunction& wf) {
  const SectorBasis& basis = *wf.basis;
  if (wf.amps.size() == 0) return;
  Eigen::Index pivot = -1;
  if (basis.n_up() * 2 == basis.n_sites()) {
    if (auto idx = basis.index_of(neel_config(basis.n_sites()))) {
      if (wf.amps[static_cast<Eigen::Index>(*idx)] != 0.0) pivot = static_cast<Eigen::Index>(*idx);
    }
  }
  if (pivot < 0) {
    const double big = wf.amps.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < wf.amps.size(); ++i) {
      if (std::abs(wf.amps[i]) >= big * (1.0 - 1e-12)) {
        pivot = i;
        break;
      }
    }
  }
  if (wf.amps[pivot] < 0.0) wf.amps = -wf.amps;
}

GroundSolution lanczos_ground_state(const SectorBasisPtr& basis, double coupling,
                                    const LanczosOptions& options) {
  const Eigen::Index dim = static_cast<Eigen::Index>(basis->size());
  if (dim == 0) throw InvalidSizeError("empty sector has no ground state");
  if (basis->n_sites() > kMaxLanczosSites) {
    throw InvalidSizeError("Lanczos is limited to N <= " + std::to_string(kMaxLanczosSites));
  }

  GroundSolution result;
  if (dim == 1) {
    result.wf = Wavefunction(basis, Eigen::VectorXd::Ones(1));
    result.energy = energy_expectation(result.wf, coupling);
    result.gap = std::numeric_limits<double>::infinity();
    result.iterations = 1;
    return result;
  }

  const Eigen::Index m_max = std::min<Eigen::Index>(std::max(options.krylov_dim, 2), dim);
  Eigen::MatrixXd lanczos_vectors(dim, m_max);
  Eigen::VectorXd start = random_start(dim, options.seed);

  double best_residual = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  bool gap_known = false;
  int total = 0;

  while (true) {
    std::vector<double> alpha;
    std::vector<double> beta;
    lanczos_vectors.col(0) = start;
    Eigen::VectorXd ritz;
    double theta_prev = std::numeric_limits<double>::infinity();
    Eigen::Index used = 0;

    for (Eigen::Index j = 0; j < m_max; ++j) {
      Eigen::VectorXd w = apply_h(basis, lanczos_vectors.col(j), coupling);
      ++total;
      const double a = lanczos_vectors.col(j).dot(w);
      alpha.push_back(a);
      // Two passes of classical Gram-Schmidt against the whole Krylov basis.
      for (int pass = 0; pass < 2; ++pass) {
        const auto basis_block = lanczos_vectors.leftCols(j + 1);
        w -= basis_block * (basis_block.transpose() * w);
      }
      const double b = w.norm();

      const Eigen::Index k = j + 1;
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
      for (Eigen::Index t = 0; t < k; ++t) {
        tri(t, t) = alpha[static_cast<std::size_t>(t)];
        if (t + 1 < k) tri(t, t + 1) = tri(t + 1, t) = beta[static_cast<std::size_t>(t)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri_eig(tri);
      const double theta = tri_eig.eigenvalues()[0];
      ritz = tri_eig.eigenvectors().col(0);
      if (k >= 2 && !gap_known) gap = tri_eig.eigenvalues()[1] - theta;

      const double scale = std::max(1.0, std::abs(theta));
      const double estimate = b * std::abs(ritz[k - 1]);
      const bool invariant = b < 1e-13 * scale;
      const bool settled = std::abs(theta - theta_prev) <= options.tol * scale &&
                           estimate <= 0.1 * options.residual_tol;
      theta_prev = theta;
      used = k;
      if (invariant || settled || k == m_max || total >= options.max_iter) break;
      beta.push_back(b);
      lanczos_vectors.col(j + 1) = w / b;
    }
    if (used >= 2) gap_known = true;

    Eigen::VectorXd x = lanczos_vectors.leftCols(used) * ritz;
    x.normalize();
    const Eigen::VectorXd hx = apply_h(basis, x, coupling);
    ++total;
    const double energy = x.dot(hx);
    const double residual = (hx - energy * x).norm();
    best_residual = std::min(best_residual, residual);

    if (residual <= options.residual_tol) {
      if (gap_known && gap <= options.min_gap) {
        throw ContractViolation("ground state appears degenerate: Ritz gap " +
                                std::to_string(gap));
      }
      result.energy = energy;
      result.wf = Wavefunction(basis, std::move(x));
      fix_sign(result.wf);
      result.residual_norm = residual;
      result.gap = gap;
      result.iterations = total;
      return result;
    }
    if (total >= options.max_iter) {
      throw ConvergenceError("Lanczos did not converge within " +
                                 std::to_string(options.max_iter) + " iterations",
                             best_residual);
    }
    start = x;
  }
}

FullSpectrum::FullSpectrum(int n_sites, double coupling, std::vector<SectorSpectrum> sectors)
    : n_sites_(n_sites), coupling_(coupling), sectors_(std::move(sectors)) {}

std::size_t FullSpectrum::total_states() const {
  std::size_t total = 0;
  for (const auto& s : sectors_) total += static_cast<std::size_t>(s.energies.size());
  return total;
}

std::vector<double> FullSpectrum::energies() const {
  std::vector<double> all;
  all.reserve(total_states());
  for (const auto& s : sectors_) all.insert(all.end(), s.energies.begin(), s.energies.end());
  std::sort(all.begin(), all.end());
  return all;
}

double FullSpectrum::ground_energy() const {
  double e0 = std::numeric_limits<double>::infinity();
  for (const auto& s : sectors_) e0 = std::min(e0, s.energies.minCoeff());
  return e0;
}

Wavefunction FullSpectrum::state(std::size_t sector, Eigen::Index n) const {
  const SectorSpectrum& s = sectors_.at(sector);
  if (n < 0 || n >= s.energies.size()) throw IndexError("eigenstate index out of range");
  return Wavefunction(s.basis, s.vectors.col(n));
}

double FullSpectrum::log_partition_function(double beta) const {
  if (!(beta >= 0.0)) throw DomainError("inverse temperature must be >= 0");
  const double e0 = ground_energy();
  double sum = 0.0;
  for (const auto& s : sectors_) {
    for (Eigen::Index n = 0; n < s.energies.size(); ++n) {
      sum += std::exp(-beta * (s.energies[n] - e0));
    }
  }
  return std::log(sum) - beta * e0;
}

double FullSpectrum::partition_function(double beta) const {
  return std::exp(log_partition_function(beta));
}

FullSpectrum full_spectrum(int n_sites, double coupling) {
  if (n_sites > kMaxFullSpectrumSites) {
    throw InvalidSizeError("full spectrum is limited to N <= " +
                           std::to_string(kMaxFullSpectrumSites));
  }
  std::vector<SectorSpectrum> sectors(static_cast<std::size_t>(n_sites) + 1);
  // Sectors are independent; each slot is written by exactly one iteration.
#pragma omp parallel for schedule(dynamic)
  for (int n_up = 0; n_up <= n_sites; ++n_up) {
    auto basis = std::make_shared<const SectorBasis>(n_sites, n_up);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense_hamiltonian(*basis, coupling));
    sectors[static_cast<std::size_t>(n_up)] = SectorSpectrum{basis, eig.eigenvalues(), eig.eigenvectors()};
  }
  return FullSpectrum(n_sites, coupling, std::move(sectors));
}

}  // namespace qcsvd
