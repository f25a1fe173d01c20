#include "oracles.hpp"
#include "qcsvd/errors.hpp"
#include "qcsvd/spin_basis.hpp"

#include <doctest.h>

#include <random>

using namespace qcsvd;

namespace {

Wavefunction random_wf(const SectorBasisPtr& basis, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXd v(static_cast<Eigen::Index>(basis->size()));
  for (auto& x : v) x = g(rng);
  return Wavefunction(basis, v);
}

SpinConfig rotate(SpinConfig c, int n) {
  const SpinConfig mask = (SpinConfig{1} << n) - 1;
  return ((c << 1) | (c >> (n - 1))) & mask;
}

}  // namespace

TEST_CASE("sector sizes") {
  CHECK(enumerate_sector(4, 0)->size() == 6);
  CHECK(enumerate_sector(12, 0)->size() == 924);
  auto all_up = enumerate_sector(4, 2);
  REQUIRE(all_up->size() == 1);
  CHECK(all_up->config(0) == 0b1111);
  CHECK(enumerate_sector(4, 3)->empty());
  CHECK(enumerate_sector(20, 0)->size() == 184756);
}

TEST_CASE("sector enumeration is sorted and index_of inverts it") {
  for (int n : {4, 8, 10}) {
    for (int up = 0; up <= n; ++up) {
      auto b = enumerate_sector(n, up - n / 2.0);
      const auto expected = oracle::sector_states(n, up);
      REQUIRE(b->size() == expected.size());
      for (std::size_t k = 0; k < b->size(); ++k) {
        CHECK(b->config(k) == expected[k]);
        CHECK(b->index_of(expected[k]) == k);
      }
    }
  }
  auto b = enumerate_sector(6, 0);
  CHECK_FALSE(b->index_of(0b111111).has_value());
  CHECK_FALSE(b->index_of(SpinConfig{1} << 7).has_value());
}

TEST_CASE("invalid sizes and S_z values") {
  CHECK_THROWS_AS(enumerate_sector(5, 0.5), InvalidSizeError);
  CHECK_THROWS_AS(enumerate_sector(2, 0), InvalidSizeError);
  CHECK_THROWS_AS(enumerate_sector(kMaxSectorSites + 2, 0), InvalidSizeError);
  CHECK_THROWS_AS(enumerate_sector(4, 0.25), DomainError);
  CHECK(enumerate_sector(4, 0.5)->empty());
}

TEST_CASE("Neel and ferromagnetic energies") {
  auto b = enumerate_sector(4, 0);
  const SpinConfig neel = neel_config(4);
  CHECK(neel == 0b0101);
  CHECK(energy_expectation(basis_state(b, neel), 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  auto up = enumerate_sector(4, 2);
  CHECK(energy_expectation(basis_state(up, 0b1111), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(energy_expectation(basis_state(up, 0b1111), 2.5) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("matrix-free H matches Kronecker-product oracle") {
  for (int n : {4, 6, 8}) {
    const Eigen::MatrixXd full = oracle::kron_hamiltonian(n, 1.3);
    for (int up = 0; up <= n; ++up) {
      auto b = enumerate_sector(n, up - n / 2.0);
      const Eigen::MatrixXd mine = dense_hamiltonian(*b, 1.3);
      for (std::size_t a = 0; a < b->size(); ++a) {
        const Wavefunction hb = apply_hamiltonian(basis_state(b, b->config(a)), 1.3);
        for (std::size_t c = 0; c < b->size(); ++c) {
          const double ref = full(static_cast<Eigen::Index>(b->config(c)),
                                  static_cast<Eigen::Index>(b->config(a)));
          CHECK(hb.amps[static_cast<Eigen::Index>(c)] == doctest::Approx(ref).epsilon(1e-14));
          CHECK(mine(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(a)) ==
                doctest::Approx(ref).epsilon(1e-14));
        }
      }
    }
  }
}

TEST_CASE("sector closure") {
  // Column sums of |H| outside the sector must vanish in the full oracle.
  const int n = 6;
  const Eigen::MatrixXd full = oracle::kron_hamiltonian(n, 1.0);
  for (int r = 0; r < (1 << n); ++r)
    for (int c = 0; c < (1 << n); ++c)
      if (__builtin_popcount(r) != __builtin_popcount(c)) REQUIRE(full(r, c) == 0.0);
}

TEST_CASE("linearity and Hermiticity") {
  auto b = enumerate_sector(10, 0);
  const Wavefunction u = random_wf(b, 1), v = random_wf(b, 2);
  const Wavefunction combo(b, 0.7 * u.amps - 1.9 * v.amps);
  const Eigen::VectorXd lhs = apply_hamiltonian(combo, 1.0).amps;
  const Eigen::VectorXd rhs =
      0.7 * apply_hamiltonian(u, 1.0).amps - 1.9 * apply_hamiltonian(v, 1.0).amps;
  CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
  const double uhv = u.amps.dot(apply_hamiltonian(v, 1.0).amps);
  const double huv = apply_hamiltonian(u, 1.0).amps.dot(v.amps);
  CHECK(std::abs(uhv - huv) <= 1e-12 * std::abs(uhv) + 1e-12);
}

TEST_CASE("translation covariance") {
  const int n = 8;
  auto b = enumerate_sector(n, 0);
  const Wavefunction u = random_wf(b, 5);
  Wavefunction shifted(b);
  for (std::size_t a = 0; a < b->size(); ++a) {
    shifted.amps[static_cast<Eigen::Index>(*b->index_of(rotate(b->config(a), n)))] =
        u.amps[static_cast<Eigen::Index>(a)];
  }
  const Wavefunction hu = apply_hamiltonian(u, 1.0);
  Wavefunction shifted_hu(b);
  for (std::size_t a = 0; a < b->size(); ++a) {
    shifted_hu.amps[static_cast<Eigen::Index>(*b->index_of(rotate(b->config(a), n)))] =
        hu.amps[static_cast<Eigen::Index>(a)];
  }
  CHECK((apply_hamiltonian(shifted, 1.0).amps - shifted_hu.amps).norm() <= 1e-12);
}

TEST_CASE("zz correlator") {
  auto b = enumerate_sector(8, 0);
  Wavefunction u = random_wf(b, 9);
  u.normalize();
  CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 8; ++i) {
    CHECK(correlator_zz(u, i, i) == doctest::Approx(0.25).epsilon(1e-13));
    for (int j = 0; j < 8; ++j) CHECK(correlator_zz(u, i, j) == correlator_zz(u, j, i));
  }
  CHECK_THROWS_AS(correlator_zz(u, 0, 8), IndexError);
  CHECK_THROWS_AS(correlator_zz(u, -1, 0), IndexError);
}

TEST_CASE("basis_state rejects configurations outside the sector") {
  auto b = enumerate_sector(4, 0);
  CHECK_THROWS_AS(basis_state(b, 0b0111), DomainError);
}
