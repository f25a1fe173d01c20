#include "qcsvd/spin_basis.hpp"

#include "qcsvd/errors.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace qcsvd {

namespace {

inline double sz_of(SpinConfig c, int site) {
  return ((c >> site) & 1ULL) ? 0.5 : -0.5;
}

void check_site(int n_sites, int site) {
  if (site < 0 || site >= n_sites) {
    throw IndexError("site " + std::to_string(site) + " outside [0, " +
                     std::to_string(n_sites) + ")");
  }
}

}  // namespace

SectorBasis::SectorBasis(int n_sites, int n_up) : n_sites_(n_sites), n_up_(n_up) {
  if (n_sites < 4 || n_sites % 2 != 0 || n_sites > kMaxSectorSites) {
    throw InvalidSizeError("ring size must be even and in [4, " +
                           std::to_string(kMaxSectorSites) + "], got " +
                           std::to_string(n_sites));
  }
  if (n_up < 0 || n_up > n_sites) return;

  binom_.assign(n_sites, std::vector<std::uint64_t>(n_up + 1, 0));
  for (int n = 0; n < n_sites; ++n) {
    binom_[n][0] = 1;
    for (int k = 1; k <= n_up && k <= n; ++k) {
      binom_[n][k] = binom_[n - 1][k - 1] + (k <= n - 1 ? binom_[n - 1][k] : 0);
    }
  }

  if (n_up == 0) {
    configs_.push_back(0);
    return;
  }
  // Gosper's hack walks fixed-popcount words in increasing order.
  const SpinConfig limit = SpinConfig{1} << n_sites;
  SpinConfig c = (SpinConfig{1} << n_up) - 1;
  while (c < limit) {
    configs_.push_back(c);
    const SpinConfig lowest = c & (~c + 1);
    const SpinConfig ripple = c + lowest;
    c = (((ripple ^ c) >> 2) / lowest) | ripple;
  }
}

std::optional<std::size_t> SectorBasis::index_of(SpinConfig config) const noexcept {
  if (configs_.empty()) return std::nullopt;
  if (n_sites_ < 64 && (config >> n_sites_) != 0) return std::nullopt;
  if (std::popcount(config) != n_up_) return std::nullopt;
  std::size_t rank = 0;
  int k = 0;
  for (int pos = 0; pos < n_sites_; ++pos) {
    if ((config >> pos) & 1ULL) {
      ++k;
      if (k <= pos) rank += binom_[pos][k];
    }
  }
  return rank;
}

SectorBasisPtr enumerate_sector(int n_sites, double sz_total) {
  const double twice = 2.0 * sz_total;
  if (std::abs(twice - std::round(twice)) > 1e-12) {
    throw DomainError("sz_total must be a multiple of 1/2");
  }
  const double up = n_sites / 2.0 + sz_total;
  if (std::abs(up - std::round(up)) > 1e-12) {
    // S_z parity incompatible with N: no configurations.
    return std::make_shared<const SectorBasis>(n_sites, -1);
  }
  return std::make_shared<const SectorBasis>(n_sites, static_cast<int>(std::lround(up)));
}

SpinConfig neel_config(int n_sites) noexcept {
  SpinConfig c = 0;
  for (int i = 0; i < n_sites; i += 2) c |= SpinConfig{1} << i;
  return c;
}

Wavefunction::Wavefunction(SectorBasisPtr b, Eigen::VectorXd a)
    : basis(std::move(b)), amps(std::move(a)) {
  if (static_cast<std::size_t>(amps.size()) != basis->size()) {
    throw InvalidSizeError("amplitude count does not match sector dimension");
  }
}

Wavefunction::Wavefunction(SectorBasisPtr b)
    : basis(std::move(b)), amps(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis->size()))) {}

Wavefunction& Wavefunction::normalize() {
  const double n = amps.norm();
  if (n == 0.0) throw DegenerateStateError("cannot normalize a zero wavefunction");
  amps /= n;
  return *this;
}

Wavefunction basis_state(SectorBasisPtr basis, SpinConfig config) {
  auto idx = basis->index_of(config);
  if (!idx) throw DomainError("configuration not in sector");
  Wavefunction wf(basis);
  wf.amps[static_cast<Eigen::Index>(*idx)] = 1.0;
  return wf;
}

Wavefunction apply_hamiltonian(const Wavefunction& wf, double coupling) {
  const SectorBasis& basis = *wf.basis;
  const int n = basis.n_sites();
  const auto configs = basis.configs();
  const Eigen::Index dim = static_cast<Eigen::Index>(configs.size());
  Wavefunction out(wf.basis);
  const double half_j = 0.5 * coupling;

  // Gather form: each output entry only reads the input, so rows are
  // independent and the result does not depend on the thread count.
#pragma omp parallel for schedule(static)
  for (Eigen::Index row = 0; row < dim; ++row) {
    const SpinConfig c = configs[static_cast<std::size_t>(row)];
    double acc = 0.0;
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      const bool si = (c >> i) & 1ULL;
      const bool sj = (c >> j) & 1ULL;
      if (si == sj) {
        diag += 0.25;
      } else {
        diag -= 0.25;
        const SpinConfig flipped = c ^ ((SpinConfig{1} << i) | (SpinConfig{1} << j));
        acc += half_j * wf.amps[static_cast<Eigen::Index>(*basis.index_of(flipped))];
      }
    }
    out.amps[row] = acc + coupling * diag * wf.amps[row];
  }
  return out;
}

double energy_expectation(const Wavefunction& wf, double coupling) {
  const Wavefunction hw = apply_hamiltonian(wf, coupling);
  return wf.amps.dot(hw.amps) / wf.amps.squaredNorm();
}

double correlator_zz(const Wavefunction& wf, int i, int j) {
  const int n = wf.n_sites();
  check_site(n, i);
  check_site(n, j);
  const auto configs = wf.basis->configs();
  double acc = 0.0;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const double a = wf.amps[static_cast<Eigen::Index>(k)];
    acc += a * a * sz_of(configs[k], i) * sz_of(configs[k], j);
  }
  return acc;
}

Eigen::MatrixXd dense_hamiltonian(const SectorBasis& basis, double coupling) {
  const int n = basis.n_sites();
  const auto configs = basis.configs();
  const Eigen::Index dim = static_cast<Eigen::Index>(configs.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const SpinConfig c = configs[static_cast<std::size_t>(col)];
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      const bool si = (c >> i) & 1ULL;
      const bool sj = (c >> j) & 1ULL;
      if (si == sj) {
        h(col, col) += 0.25 * coupling;
      } else {
        h(col, col) -= 0.25 * coupling;
        const SpinConfig flipped = c ^ ((SpinConfig{1} << i) | (SpinConfig{1} << j));
        h(static_cast<Eigen::Index>(*basis.index_of(flipped)), col) += 0.5 * coupling;
      }
    }
  }
  return h;
}

}  // namespace qcsvd
