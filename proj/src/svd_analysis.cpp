#include "qcsvd/svd_analysis.hpp"

#include "qcsvd/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qcsvd {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void require_rank(const SvdSpectrum& spec, int n) {
  if (n < 1 || n > spec.size()) {
    throw IndexError("rank " + std::to_string(n) + " outside [1, " + std::to_string(spec.size()) + "]");
  }
}

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw FitError("abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

double r_squared(const std::vector<double>& observed, const std::vector<double>& predicted) {
  double mean = 0.0;
  for (double v : observed) mean += v;
  mean /= static_cast<double>(observed.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
    ss_tot += (observed[i] - mean) * (observed[i] - mean);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  return 1.0 - ss_res / ss_tot;
}

void haar_1d(Eigen::Ref<Eigen::VectorXd> x, int levels) {
  Eigen::Index m = x.size();
  Eigen::VectorXd tmp(m);
  for (int level = 0; level < levels; ++level) {
    const Eigen::Index half = m / 2;
    for (Eigen::Index k = 0; k < half; ++k) {
      tmp[k] = (x[2 * k] + x[2 * k + 1]) * kInvSqrt2;
      tmp[half + k] = (x[2 * k] - x[2 * k + 1]) * kInvSqrt2;
    }
    x.head(m) = tmp.head(m);
    m = half;
  }
}

void inverse_haar_1d(Eigen::Ref<Eigen::VectorXd> x, int levels) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd tmp(n);
  for (int level = levels - 1; level >= 0; --level) {
    const Eigen::Index m = n >> level;
    const Eigen::Index half = m / 2;
    for (Eigen::Index k = 0; k < half; ++k) {
      tmp[2 * k] = (x[k] + x[half + k]) * kInvSqrt2;
      tmp[2 * k + 1] = (x[k] - x[half + k]) * kInvSqrt2;
    }
    x.head(m) = tmp.head(m);
  }
}

void check_levels(Eigen::Index n, int levels) {
  const int max_levels = max_haar_levels(static_cast<int>(n));
  if (levels < 0 || levels > max_levels) {
    throw DomainError("Haar levels must be in [0, " + std::to_string(max_levels) + "] for N = " +
                      std::to_string(n));
  }
}

}  // namespace

SvdSpectrum eigendecompose(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols() || s.rows() == 0) throw ContractViolation("matrix must be square");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ContractViolation("correlation matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  const Eigen::Index n = s.rows();
  SvdSpectrum out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = eig.eigenvalues()[n - 1 - k];
    Eigen::VectorXd v = eig.eigenvectors().col(n - 1 - k);
    const double big = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v[i]) >= big * (1.0 - 1e-9)) {
        if (v[i] < 0.0) v = -v;
        break;
      }
    }
    out.vectors.col(k) = v;
  }
  out.squared = out.values.array().square().matrix();
  return out;
}

SvdSpectrum eigendecompose(const CorrelationMatrix& s) { return eigendecompose(s.entries); }

SvdComponent component(const SvdSpectrum& spec, int n) {
  require_rank(spec, n);
  const Eigen::VectorXd u = spec.vectors.col(n - 1);
  return SvdComponent{n, spec.values[n - 1] * u * u.transpose()};
}

DegeneracyPartition degeneracy_pairs(const SvdSpectrum& spec, double rel_tol) {
  DegeneracyPartition out;
  const int n = spec.size();
  int k = 1;
  while (k <= n) {
    if (k < n) {
      const double a = spec.squared[k - 1];
      const double b = spec.squared[k];
      if (std::abs(a - b) <= rel_tol * a) {
        out.pairs.emplace_back(k, k + 1);
        k += 2;
        continue;
      }
    }
    out.singletons.push_back(k);
    ++k;
  }
  return out;
}

double dominant_wavenumber(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  if (n == 0 || v.cwiseAbs().maxCoeff() == 0.0) {
    throw DomainError("wavenumber of a zero vector is undefined");
  }
  std::vector<double> power(static_cast<std::size_t>(n / 2 + 1));
  for (Eigen::Index m = 0; m <= n / 2; ++m) {
    double re = 0.0;
    double im = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((m * i) % n) / static_cast<double>(n);
      re += v[i] * std::cos(phase);
      im -= v[i] * std::sin(phase);
    }
    power[static_cast<std::size_t>(m)] = re * re + im * im;
  }
  const double best = *std::max_element(power.begin(), power.end());
  for (std::size_t m = 0; m < power.size(); ++m) {
    if (power[m] >= best * (1.0 - 1e-12)) {
      return 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    }
  }
  return 0.0;
}

DomainMeasurement measure_domain_size(const Eigen::VectorXd& v, double threshold) {
  const Eigen::Index n = v.size();
  const double big = n == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  if (!(big > 0.0)) throw DegenerateStateError("all entries below the domain threshold");

  std::vector<int> staggered;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(v[i]) < threshold * big) continue;
    const int sign = v[i] > 0.0 ? 1 : -1;
    staggered.push_back(i % 2 == 0 ? sign : -sign);
  }
  if (staggered.empty()) throw DegenerateStateError("all entries below the domain threshold");

  int walls = 0;
  for (std::size_t k = 0; k < staggered.size(); ++k) {
    if (staggered[k] != staggered[(k + 1) % staggered.size()]) ++walls;
  }
  DomainMeasurement m;
  m.wavenumber = dominant_wavenumber(v);
  m.wall_count = walls;
  m.domain_size = static_cast<double>(n) / std::max(walls, 1);
  return m;
}

std::vector<int> default_fit_set(int n_sites) {
  std::vector<int> set{1};
  for (int n = 2; 2 * n < n_sites; n += 2) set.push_back(n);
  return set;
}

ScalingFit fit_scaling(const SvdSpectrum& spec, const std::vector<int>& fit_set,
                       bool uses_exp_cutoff) {
  const double n_sites = static_cast<double>(spec.size());
  ScalingFit fit;
  fit.uses_exp_cutoff = uses_exp_cutoff;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> log_lambda;
  for (int n : fit_set) {
    require_rank(spec, n);
    const double lambda = spec.squared[n - 1];
    if (!(lambda > 0.0)) {
      fit.excluded.push_back(n);
      continue;
    }
    fit.fit_set.push_back(n);
    x.push_back(std::log(static_cast<double>(n)));
    log_lambda.push_back(std::log(lambda));
    y.push_back(log_lambda.back() + (uses_exp_cutoff ? n / n_sites : 0.0));
  }
  if (x.size() < 3) throw FitError("scaling fit needs at least 3 points with positive λ");

  const LineFit line = least_squares_line(x, y);
  fit.power = line.slope;
  fit.amplitude = std::exp(line.intercept);
  std::vector<double> predicted;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cutoff = uses_exp_cutoff ? fit.fit_set[i] / n_sites : 0.0;
    predicted.push_back(line.intercept + line.slope * x[i] - cutoff);
  }
  fit.r_squared = r_squared(log_lambda, predicted);
  return fit;
}

ScalingFit fit_scaling(const SvdSpectrum& spec) {
  return fit_scaling(spec, default_fit_set(spec.size()), true);
}

ScalingFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw FitError("x and y sizes differ");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) throw FitError("power-law fit needs at least 2 positive points");
  const LineFit line = least_squares_line(lx, ly);
  ScalingFit fit;
  fit.uses_exp_cutoff = false;
  fit.power = line.slope;
  fit.amplitude = std::exp(line.intercept);
  std::vector<double> predicted;
  for (double v : lx) predicted.push_back(line.intercept + line.slope * v);
  fit.r_squared = r_squared(ly, predicted);
  return fit;
}

double gamma_half_integral(double a, double b) {
  if (a < 0.0 || !(b >= a)) throw DomainError("integration limits must satisfy 0 <= a <= b");
  const auto f = [](double x) { return std::exp(-x) / std::sqrt(x); };
  if (std::isinf(b)) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f, a, b, 1e-12);
  }
  if (a == b) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, 1e-12);
}

std::vector<int> default_kernel_window(int n_sites) {
  std::vector<int> r;
  for (int k = n_sites / 8; k <= n_sites / 2; ++k) r.push_back(k);
  return r;
}

KernelReconstruction kernel_reconstruct(int n_sites, const std::vector<int>& separations) {
  if (n_sites < 1) throw InvalidSizeError("kernel size must be positive");
  const double n_total = static_cast<double>(n_sites);
  KernelReconstruction out;
  for (int r : separations) {
    if (r <= 0) continue;  // coincident points are singular
    const double dist = static_cast<double>(r);
    double sum = 0.0;
    for (int n = 1; n <= n_sites; ++n) {
      const double rank = static_cast<double>(n);
      const double domain = n_total / rank;
      sum += std::sqrt(std::exp(-rank / n_total) / rank) * std::sqrt(std::exp(-dist / domain) / dist);
    }
    out.separations.push_back(r);
    out.values.push_back(sum);
    out.window_integrals.push_back(gamma_half_integral(dist / (2.0 * n_total), dist / 2.0));
  }
  if (out.separations.size() >= 2) {
    std::vector<double> x(out.separations.begin(), out.separations.end());
    const ScalingFit fit = fit_power_law(x, out.values);
    out.slope = fit.power;
    out.r_squared = fit.r_squared;
  }
  out.gamma_half = gamma_half_integral(0.0, std::numeric_limits<double>::infinity());
  return out;
}

int max_haar_levels(int n) {
  int levels = 0;
  while (n >= 2 && n % 2 == 0) {
    n /= 2;
    ++levels;
  }
  return levels;
}

Eigen::MatrixXd haar_transform(const Eigen::MatrixXd& s, int levels) {
  if (s.rows() != s.cols()) throw ContractViolation("Haar transform needs a square matrix");
  check_levels(s.rows(), levels);
  Eigen::MatrixXd t = s;
  for (Eigen::Index c = 0; c < t.cols(); ++c) haar_1d(t.col(c), levels);
  Eigen::MatrixXd tt = t.transpose();
  for (Eigen::Index c = 0; c < tt.cols(); ++c) haar_1d(tt.col(c), levels);
  return tt.transpose();
}

Eigen::MatrixXd inverse_haar_transform(const Eigen::MatrixXd& t, int levels) {
  if (t.rows() != t.cols()) throw ContractViolation("Haar transform needs a square matrix");
  check_levels(t.rows(), levels);
  Eigen::MatrixXd s = t;
  for (Eigen::Index c = 0; c < s.cols(); ++c) inverse_haar_1d(s.col(c), levels);
  Eigen::MatrixXd st = s.transpose();
  for (Eigen::Index c = 0; c < st.cols(); ++c) inverse_haar_1d(st.col(c), levels);
  return st.transpose();
}

}  // namespace qcsvd
