#include "oracles.hpp"
#include "qcsvd/errors.hpp"
#include "qcsvd/svd_analysis.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qcsvd;

namespace {

Eigen::MatrixXd ground(int n) {
  return build_from_wavefunction(lanczos_ground_state(enumerate_sector(n, 0), 1.0).wf).entries;
}

SvdSpectrum from_squared(const std::vector<double>& lambda) {
  SvdSpectrum s;
  const auto n = static_cast<Eigen::Index>(lambda.size());
  s.squared = Eigen::Map<const Eigen::VectorXd>(lambda.data(), n);
  s.values = s.squared.cwiseSqrt();
  s.vectors = Eigen::MatrixXd::Identity(n, n);
  return s;
}

}  // namespace

TEST_CASE("N=4 spectrum, components, wavenumbers") {
  const SvdSpectrum spec = eigendecompose(ground(4));
  CHECK(spec.values[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(spec.values[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(spec.values[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(std::abs(spec.values[3]) <= 1e-12);
  CHECK((spec.squared - spec.values.cwiseAbs2()).norm() == 0.0);

  Eigen::Matrix4d alt;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) alt(i, j) = ((i + j) % 2 ? -1.0 : 1.0) / 6.0;
  CHECK((component(spec, 1).matrix - alt).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(dominant_wavenumber(spec.vectors.col(0)) == doctest::Approx(std::numbers::pi));
  CHECK(dominant_wavenumber(spec.vectors.col(1)) == doctest::Approx(std::numbers::pi / 2));
  CHECK(dominant_wavenumber(spec.vectors.col(2)) == doctest::Approx(std::numbers::pi / 2));
  CHECK(dominant_wavenumber(Eigen::VectorXd::Ones(6)) == 0.0);
  CHECK_THROWS_AS(dominant_wavenumber(Eigen::VectorXd::Zero(4)), DomainError);

  const DegeneracyPartition p = degeneracy_pairs(spec, 1e-10);
  REQUIRE(p.pairs.size() == 1);
  CHECK(p.pairs[0] == std::pair{2, 3});
  CHECK(p.singletons == std::vector<int>{1, 4});
  CHECK_THROWS_AS(component(spec, 0), IndexError);
  CHECK_THROWS_AS(component(spec, 5), IndexError);
}

TEST_CASE("spectral completeness, orthonormality, sign rule") {
  const Eigen::MatrixXd s = ground(10);
  const SvdSpectrum spec = eigendecompose(s);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(10, 10);
  for (int n = 1; n <= 10; ++n) {
    const SvdComponent c = component(spec, n);
    sum += c.matrix;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c.matrix);
    CHECK(svd.singularValues()[1] <= 1e-12 * std::max(1.0, svd.singularValues()[0]));
    const Eigen::VectorXd u = spec.vectors.col(n - 1);
    const double big = u.cwiseAbs().maxCoeff();
    Eigen::Index arg = 0;
    while (std::abs(u[arg]) < big - 1e-9) ++arg;
    CHECK(u[arg] > 0.0);
  }
  CHECK((sum - s).norm() <= 1e-10);
  CHECK((spec.vectors.transpose() * spec.vectors - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() <=
        1e-12);
  for (int n = 1; n < 10; ++n) CHECK(spec.values[n - 1] >= spec.values[n]);
}

TEST_CASE("trace identity and zero mode for ED matrices") {
  for (int n : {4, 8, 12}) {
    const SvdSpectrum spec = eigendecompose(ground(n));
    CHECK(std::abs(spec.values.sum() - n / 4.0) <= 1e-10);
    CHECK(std::abs(spec.values[n - 1]) <= 1e-10);
    const Eigen::VectorXd u = spec.vectors.col(n - 1);
    CHECK((u.cwiseAbs().array() - 1.0 / std::sqrt(double(n))).abs().maxCoeff() <= 1e-8);
    CHECK(dominant_wavenumber(spec.vectors.col(0)) == doctest::Approx(std::numbers::pi));
  }
}

TEST_CASE("circulant eigenvalues equal the Fourier oracle") {
  const Eigen::MatrixXd s = ground(12);
  const auto mu = oracle::circulant_eigenvalues(s.row(0));
  const SvdSpectrum spec = eigendecompose(s);
  for (int k = 0; k < 12; ++k) CHECK(std::abs(spec.values[k] - mu[static_cast<std::size_t>(k)]) <= 1e-12);
  const DegeneracyPartition p = degeneracy_pairs(spec, 1e-10);
  CHECK(p.singletons == std::vector<int>{1, 12});
  CHECK(p.pairs.size() == 5);
}

TEST_CASE("asymmetric input is a contract violation") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  m(0, 1) = 1e-3;
  CHECK_THROWS_AS(eigendecompose(m), ContractViolation);
}

TEST_CASE("domain measurement") {
  const int n = 64;
  Eigen::VectorXd neel(n);
  for (int i = 0; i < n; ++i) neel[i] = (i % 2 ? -1.0 : 1.0) / 8.0;
  DomainMeasurement d = measure_domain_size(neel);
  CHECK(d.wall_count == 0);
  CHECK(d.domain_size == 64.0);
  CHECK(d.wavenumber == doctest::Approx(std::numbers::pi));

  for (int m : {2, 4, 16}) {
    // Staggered pattern modulated by a sine with m zero crossings.
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i)
      v[i] = (i % 2 ? -1.0 : 1.0) * std::sin(std::numbers::pi * m * (i + 0.5) / n);
    d = measure_domain_size(v);
    CHECK(d.wall_count == m);
    CHECK(d.domain_size == doctest::Approx(double(n) / m));
  }
  CHECK_THROWS_AS(measure_domain_size(Eigen::VectorXd::Zero(8)), DegenerateStateError);
}

TEST_CASE("scaling fit") {
  const int n = 64;
  std::vector<double> lambda(n);
  for (int k = 1; k <= n; ++k) lambda[k - 1] = std::exp(-double(k) / n) / k;
  ScalingFit f = fit_scaling(from_squared(lambda));
  CHECK(std::abs(f.power + 1.0) <= 1e-10);
  CHECK(std::abs(f.r_squared - 1.0) <= 1e-10);
  CHECK(f.fit_set == default_fit_set(n));
  CHECK(f.fit_set.front() == 1);
  CHECK(f.fit_set.back() == 30);

  std::vector<double> flat(n, 0.3);
  f = fit_scaling(from_squared(flat), default_fit_set(n), false);
  CHECK(std::abs(f.power) <= 1e-12);

  std::vector<double> holes = lambda;
  holes[3] = 0.0;
  f = fit_scaling(from_squared(holes));
  CHECK(f.excluded == std::vector<int>{4});
  CHECK(std::abs(f.power + 1.0) <= 1e-10);

  CHECK_THROWS_AS(fit_scaling(from_squared(lambda), {1, 2}), FitError);
}

TEST_CASE("kernel reconstruction and the Gamma(1/2) integral") {
  CHECK(std::abs(gamma_half_integral(0.0, INFINITY) - std::sqrt(std::numbers::pi)) <= 1e-10);
  CHECK(gamma_half_integral(0.0, 1.0) == doctest::Approx(std::sqrt(std::numbers::pi) * std::erf(1.0)));

  const KernelReconstruction k = kernel_reconstruct(64, {0, 8, 16, 32});
  CHECK(k.separations == std::vector<int>{8, 16, 32});
  // Direct evaluation of the ansatz sum.
  for (std::size_t t = 0; t < k.separations.size(); ++t) {
    const double r = k.separations[t];
    double acc = 0.0;
    for (int m = 1; m <= 64; ++m)
      acc += std::sqrt(std::exp(-m / 64.0) / m) * std::sqrt(std::exp(-r * m / 64.0) / r);
    CHECK(k.values[t] == doctest::Approx(acc).epsilon(1e-13));
  }
  CHECK(k.slope < 0.0);
  CHECK(default_kernel_window(256).front() == 32);
  CHECK(default_kernel_window(256).back() == 128);
}

TEST_CASE("Haar transform") {
  const Eigen::MatrixXd s = ground(8);
  for (int levels = 0; levels <= 3; ++levels) {
    const Eigen::MatrixXd t = haar_transform(s, levels);
    CHECK(std::abs(t.norm() - s.norm()) <= 1e-12);
    CHECK((inverse_haar_transform(t, levels) - s).cwiseAbs().maxCoeff() <= 1e-12);
  }
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(16, 16);
  CHECK((haar_transform(id, 4) - id).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(max_haar_levels(12) == 2);
  CHECK(max_haar_levels(64) == 6);
  CHECK_THROWS_AS(haar_transform(s, 4), DomainError);
  CHECK_THROWS_AS(haar_transform(s, -1), DomainError);

  // One level on a 2x2 block is the explicit orthonormal butterfly.
  Eigen::Matrix2d m;
  m << 1, 2, 3, 4;
  Eigen::Matrix2d w;
  w << 1, 1, 1, -1;
  w /= std::sqrt(2.0);
  CHECK((haar_transform(m, 1) - w * m * w.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
}
