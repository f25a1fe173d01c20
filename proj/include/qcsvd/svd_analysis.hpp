#pragma once

#include "qcsvd/correlation.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace qcsvd {

/// Eigendecomposition of a symmetric correlation matrix, which is its SVD.
/// Rank n (1-based) ↔ column n-1.
struct SvdSpectrum {
  Eigen::VectorXd values;   // √λ_n, descending
  Eigen::VectorXd squared;  // λ_n
  Eigen::MatrixXd vectors;  // orthonormal columns U_{·n}

  int size() const { return static_cast<int>(values.size()); }
};

/// Descending eigenpairs; each vector's largest-magnitude entry is made
/// positive (lowest index on ties). Throws ContractViolation for asymmetric
/// input.
SvdSpectrum eigendecompose(const Eigen::MatrixXd& s);
SvdSpectrum eigendecompose(const CorrelationMatrix& s);

struct SvdComponent {
  int n = 0;
  Eigen::MatrixXd matrix;  // U_{·n} √λ_n U_{·n}ᵀ
};

SvdComponent component(const SvdSpectrum& spec, int n);

struct DegeneracyPartition {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> singletons;
};

/// Greedy adjacent pairing: (n, n+1) pair when |λ_n - λ_{n+1}| <= rel_tol λ_n.
DegeneracyPartition degeneracy_pairs(const SvdSpectrum& spec, double rel_tol);

/// k = 2πm/N in [0, π] maximizing the discrete Fourier power; lowest m wins
/// ties. Throws DomainError for a zero vector.
double dominant_wavenumber(const Eigen::VectorXd& v);

struct DomainMeasurement {
  int n = 0;
  double wavenumber = 0.0;
  double domain_size = 0.0;
  int wall_count = 0;
};

inline constexpr double kDefaultDomainThreshold = 0.1;

/// Walls are sign changes of the staggered sequence (-1)^i sign(v_i), taken
/// cyclically over entries with |v_i| >= threshold * max|v|.
DomainMeasurement measure_domain_size(const Eigen::VectorXd& v,
                                      double threshold = kDefaultDomainThreshold);

struct ScalingFit {
  double amplitude = 0.0;
  double power = 0.0;
  bool uses_exp_cutoff = true;
  double r_squared = 0.0;
  std::vector<int> fit_set;
  std::vector<int> excluded;  // nonpositive λ dropped from the request
};

/// {1} ∪ {even n < N/2}.
std::vector<int> default_fit_set(int n_sites);

/// Least squares on log λ_n = log a + p log n [- n/N]. r² is measured on
/// log λ_n. Throws FitError with fewer than 3 usable points.
ScalingFit fit_scaling(const SvdSpectrum& spec, const std::vector<int>& fit_set,
                       bool uses_exp_cutoff = true);
ScalingFit fit_scaling(const SvdSpectrum& spec);

/// Plain log-log line fit y = a x^p, r² on the log scale.
ScalingFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct KernelReconstruction {
  std::vector<int> separations;
  std::vector<double> values;
  double slope = 0.0;
  double r_squared = 0.0;
  // ∫ e^{-x} x^{-1/2} dx between r/2N and r/2 for each separation.
  std::vector<double> window_integrals;
  double gamma_half = 0.0;  // ∫_0^∞ e^{-x} x^{-1/2} dx
};

/// Σ_n √(e^{-n/N}/n) √(e^{-r n/N}/r) for each separation r; r = 0 entries are
/// dropped.
KernelReconstruction kernel_reconstruct(int n_sites, const std::vector<int>& separations);

/// Separations N/8 .. N/2.
std::vector<int> default_kernel_window(int n_sites);

/// ∫_a^b e^{-x} x^{-1/2} dx by double-exponential quadrature; b may be +∞.
double gamma_half_integral(double a, double b);

/// Largest number of Haar levels usable on an N-vector.
int max_haar_levels(int n);

/// Orthonormal multilevel Haar transform W S Wᵀ. Throws DomainError when
/// `levels` is negative or exceeds max_haar_levels.
Eigen::MatrixXd haar_transform(const Eigen::MatrixXd& s, int levels);
Eigen::MatrixXd inverse_haar_transform(const Eigen::MatrixXd& t, int levels);

}  // namespace qcsvd
