#include "oracles.hpp"
#include "qcsvd/errors.hpp"
#include "qcsvd/exact_diag.hpp"

#include <doctest.h>

#include <cmath>

using namespace qcsvd;

TEST_CASE("N=4 ground state") {
  const GroundSolution g = lanczos_ground_state(enumerate_sector(4, 0), 1.0);
  CHECK(g.energy == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(g.residual_norm <= 1e-10);
  Eigen::VectorXd expected(6);
  expected << -1, 2, -1, -1, 2, -1;
  expected /= std::sqrt(12.0);
  CHECK((g.wf.amps - expected).norm() <= 1e-10);
}

TEST_CASE("Lanczos agrees with dense sector oracles") {
  for (int n : {6, 8, 10, 12}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::sector_hamiltonian(n, n / 2, 1.0),
                                                      Eigen::EigenvaluesOnly);
    const double e0 = es.eigenvalues()[0];
    const GroundSolution g = lanczos_ground_state(enumerate_sector(n, 0), 1.0);
    CHECK(g.energy >= e0 - 1e-10);
    CHECK(std::abs(g.energy - e0) <= 1e-9);
    CHECK(g.residual_norm <= 1e-10);
    const Wavefunction hv = apply_hamiltonian(g.wf, 1.0);
    CHECK((hv.amps - g.energy * g.wf.amps).norm() <= 1e-10);
    CHECK(g.wf.amps[static_cast<Eigen::Index>(*g.wf.basis->index_of(neel_config(n)))] > 0.0);
  }
}

TEST_CASE("Lanczos is reproducible for a fixed seed") {
  auto b = enumerate_sector(10, 0);
  const GroundSolution a = lanczos_ground_state(b, 1.0);
  const GroundSolution c = lanczos_ground_state(b, 1.0);
  CHECK(a.energy == c.energy);
  CHECK(a.wf.amps == c.wf.amps);
}

TEST_CASE("coupling scales the energy") {
  const GroundSolution g = lanczos_ground_state(enumerate_sector(8, 0), 2.0);
  const GroundSolution h = lanczos_ground_state(enumerate_sector(8, 0), 1.0);
  CHECK(g.energy == doctest::Approx(2.0 * h.energy).epsilon(1e-12));
}

TEST_CASE("Lanczos reports non-convergence") {
  LanczosOptions opt;
  opt.max_iter = 3;
  opt.krylov_dim = 3;
  try {
    lanczos_ground_state(enumerate_sector(12, 0), 1.0, opt);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best_residual() > 0.0);
  }
}

TEST_CASE("full spectrum at N=4") {
  const FullSpectrum fs = full_spectrum(4, 1.0);
  CHECK(fs.total_states() == 16);
  const auto e = fs.energies();
  CHECK(e.size() == 16);
  CHECK(e.front() == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(e.back() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fs.partition_function(0.0) == doctest::Approx(16.0).epsilon(1e-14));
  CHECK_THROWS_AS(fs.partition_function(-1.0), DomainError);
}

TEST_CASE("full spectrum matches the Kronecker oracle") {
  const int n = 8;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::kron_hamiltonian(n, 1.0),
                                                    Eigen::EigenvaluesOnly);
  const FullSpectrum fs = full_spectrum(n, 1.0);
  const auto e = fs.energies();
  REQUIRE(e.size() == 256);
  for (std::size_t k = 0; k < e.size(); ++k) {
    CHECK(std::abs(e[k] - es.eigenvalues()[static_cast<Eigen::Index>(k)]) <= 1e-10);
  }
  const double beta = 0.7;
  double z = 0.0;
  for (double x : e) z += std::exp(-beta * x);
  CHECK(fs.partition_function(beta) == doctest::Approx(z).epsilon(1e-12));
  CHECK(fs.log_partition_function(beta) == doctest::Approx(std::log(z)).epsilon(1e-12));
}

TEST_CASE("full spectrum sectors: orthonormal, spin-flip symmetric") {
  const FullSpectrum fs = full_spectrum(10, 1.0);
  const auto& sec = fs.sectors();
  REQUIRE(sec.size() == 11);
  for (const auto& s : sec) {
    const Eigen::Index d = s.vectors.cols();
    CHECK((s.vectors.transpose() * s.vectors - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <=
          1e-10);
  }
  for (std::size_t k = 0; k < sec.size(); ++k) {
    const auto& a = sec[k].energies;
    const auto& b = sec[sec.size() - 1 - k].energies;
    REQUIRE(a.size() == b.size());
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("full spectrum size cap") {
  CHECK_THROWS_AS(full_spectrum(kMaxFullSpectrumSites + 2, 1.0), InvalidSizeError);
}
