#pragma once

// Independent reference constructions used across the unit tests. Nothing
// here goes through the library's basis or Hamiltonian code.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

// Full 2^N Hamiltonian from Kronecker products of Pauli-type matrices.
// Index bit i (of the state integer) is site i, 1 = up.
inline Eigen::MatrixXd kron_hamiltonian(int n, double coupling) {
  const int dim = 1 << n;
  Eigen::Matrix2d sz, sp, sm;
  // basis order within a site: index 0 = down, 1 = up
  sz << -0.5, 0.0, 0.0, 0.5;
  sp << 0.0, 0.0, 1.0, 0.0;
  sm = sp.transpose();
  auto site_op = [&](const Eigen::Matrix2d& op, int site) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Ones(1, 1);
    for (int s = n - 1; s >= 0; --s) {
      const Eigen::Matrix2d& f = (s == site) ? op : Eigen::Matrix2d::Identity().eval();
      Eigen::MatrixXd next(out.rows() * 2, out.cols() * 2);
      for (int a = 0; a < out.rows(); ++a)
        for (int b = 0; b < out.cols(); ++b) next.block<2, 2>(2 * a, 2 * b) = out(a, b) * f;
      out = next;
    }
    return out;
  };
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    h += site_op(sz, i) * site_op(sz, j);
    h += 0.5 * site_op(sp, i) * site_op(sm, j);
    h += 0.5 * site_op(sm, i) * site_op(sp, j);
  }
  return coupling * h;
}

// Sector restriction of a full matrix, rows in increasing integer order.
inline std::vector<std::uint64_t> sector_states(int n, int n_up) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
    if (__builtin_popcountll(c) == n_up) out.push_back(c);
  }
  return out;
}

// Dense sector matrix built by direct bond enumeration on sorted states.
inline Eigen::MatrixXd sector_hamiltonian(int n, int n_up, double coupling) {
  const auto states = sector_states(n, n_up);
  const auto dim = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    const std::uint64_t c = states[static_cast<std::size_t>(a)];
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      const bool si = (c >> i) & 1u;
      const bool sj = (c >> j) & 1u;
      if (si == sj) {
        h(a, a) += 0.25 * coupling;
      } else {
        h(a, a) -= 0.25 * coupling;
        const std::uint64_t f = c ^ ((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
        for (Eigen::Index b = 0; b < dim; ++b) {
          if (states[static_cast<std::size_t>(b)] == f) h(b, a) += 0.5 * coupling;
        }
      }
    }
  }
  return h;
}

// Ground state correlation matrix from dense diagonalization of the sector.
inline Eigen::MatrixXd ground_correlation(int n) {
  const auto states = sector_states(n, n / 2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sector_hamiltonian(n, n / 2, 1.0));
  const Eigen::VectorXd v = es.eigenvectors().col(0);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < states.size(); ++a) {
    const double p = v[static_cast<Eigen::Index>(a)] * v[static_cast<Eigen::Index>(a)];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double zi = ((states[a] >> i) & 1u) ? 0.5 : -0.5;
        const double zj = ((states[a] >> j) & 1u) ? 0.5 : -0.5;
        s(i, j) += p * zi * zj;
      }
  }
  return s;
}

// Eigenvalues of a real symmetric circulant matrix from its first row:
// μ_m = Σ_r c_r cos(2π m r / N). Returned sorted descending.
inline std::vector<double> circulant_eigenvalues(const Eigen::RowVectorXd& row) {
  const auto n = row.size();
  std::vector<double> mu(static_cast<std::size_t>(n));
  for (Eigen::Index m = 0; m < n; ++m) {
    double acc = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) acc += row[r] * std::cos(2.0 * M_PI * double(m * r) / double(n));
    mu[static_cast<std::size_t>(m)] = acc;
  }
  std::sort(mu.begin(), mu.end(), std::greater<>());
  return mu;
}

}  // namespace oracle
