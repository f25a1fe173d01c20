#include "qcsvd/mps.hpp"

#include "qcsvd/errors.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <random>
#include <string>

namespace qcsvd {

namespace {

using Mat = Eigen::MatrixXd;

// Operator slots used in bond terms: S^z, S^+, S^-.
constexpr int kOps = 3;
constexpr std::array<int, kOps> kPartner{0, 2, 1};
constexpr std::array<double, kOps> kCoef{1.0, 0.5, 0.5};

// <s'|O|s>, row = bra spin, column = ket spin, spin 0 = up.
double op_element(int op, int bra, int ket) {
  switch (op) {
    case 0: return bra == ket ? (bra == 0 ? 0.5 : -0.5) : 0.0;
    case 1: return (bra == 0 && ket == 1) ? 1.0 : 0.0;
    default: return (bra == 1 && ket == 0) ? 1.0 : 0.0;
  }
}

// kron(ket, bra)[(a, a'), (b, b')] = ket(a, b) * bra(a', b')
Mat kron(const Mat& ket, const Mat& bra) {
  const Eigen::Index chi = ket.rows();
  Mat out(chi * chi, chi * chi);
  for (Eigen::Index a = 0; a < chi; ++a) {
    for (Eigen::Index b = 0; b < chi; ++b) {
      out.block(a * chi, b * chi, chi, chi) = ket(a, b) * bra;
    }
  }
  return out;
}

struct Transfers {
  Mat id;
  std::array<Mat, kOps> op;
};

Transfers site_transfers(const MpsState& state, int site) {
  const Mat& up = state.tensor(site, 0);
  const Mat& dn = state.tensor(site, 1);
  const Mat uu = kron(up, up);
  const Mat dd = kron(dn, dn);
  Transfers t;
  t.id = uu + dd;
  t.op[0] = 0.5 * (uu - dd);
  t.op[1] = kron(dn, up);  // S^+ raises the ket spin
  t.op[2] = kron(up, dn);
  return t;
}

std::vector<Transfers> all_transfers(const MpsState& state) {
  std::vector<Transfers> out;
  out.reserve(static_cast<std::size_t>(state.n_sites()));
  for (int i = 0; i < state.n_sites(); ++i) out.push_back(site_transfers(state, i));
  return out;
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

double trace_of_product(const Mat& a, const Mat& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

// Matrix with a separately tracked log scale.
struct Scaled {
  Mat m;
  double log_scale = 0.0;

  void renormalize() {
    const double s = max_abs(m);
    if (s > 0.0 && std::isfinite(s)) {
      m /= s;
      log_scale += std::log(s);
    }
  }
};

// Contraction of a contiguous run of sites. `h` sums every bond fully inside
// the run; `first[a]` / `last[a]` carry operator a on the first / last site.
// All members share one scale.
struct Block {
  Mat t;
  Mat h;
  std::array<Mat, kOps> first;
  std::array<Mat, kOps> last;

  bool empty() const { return t.size() == 0; }

  void renormalize() {
    const double s = max_abs(t);
    if (!(s > 0.0) || !std::isfinite(s)) return;
    t /= s;
    h /= s;
    for (int a = 0; a < kOps; ++a) {
      first[a] /= s;
      last[a] /= s;
    }
  }
};

Block site_block(const Transfers& tr) {
  Block b;
  b.t = tr.id;
  b.h = Mat::Zero(tr.id.rows(), tr.id.cols());
  b.first = tr.op;
  b.last = tr.op;
  return b;
}

Block combine(const Block& x, const Block& y) {
  if (x.empty()) return y;
  if (y.empty()) return x;
  Block out;
  out.t = x.t * y.t;
  out.h = x.h * y.t + x.t * y.h;
  for (int a = 0; a < kOps; ++a) {
    out.h.noalias() += kCoef[a] * (x.last[a] * y.first[kPartner[a]]);
    out.first[a] = x.first[a] * y.t;
    out.last[a] = x.t * y.last[a];
  }
  out.renormalize();
  return out;
}

// Everything except `site`, in ring order site+1, ..., N-1, 0, ..., site-1.
Block ring_environment(const std::vector<Transfers>& tr, int site) {
  const int n = static_cast<int>(tr.size());
  Block env;
  for (int step = 1; step < n; ++step) {
    env = combine(env, site_block(tr[static_cast<std::size_t>((site + step) % n)]));
  }
  return env;
}

EffectiveProblem effective_from_environment(const Block& env, int chi, double coupling) {
  const Eigen::Index c = chi;
  const Eigen::Index c2 = c * c;
  EffectiveProblem p;
  p.h_eff = Mat::Zero(2 * c2, 2 * c2);
  p.n_eff = Mat::Zero(2 * c2, 2 * c2);

  // Site tensor A^s(b, c): b joins the last environment site, c the first.
  // Environment index (c, c') on rows, (b, b') on columns.
  for (int sb = 0; sb < 2; ++sb) {
    for (int sk = 0; sk < 2; ++sk) {
      std::array<double, kOps> first_w{};
      std::array<double, kOps> last_w{};
      bool any = sb == sk;
      for (int a = 0; a < kOps; ++a) {
        // Bond (site, site+1): op a here, partner on the first env site.
        first_w[kPartner[a]] += kCoef[a] * op_element(a, sb, sk);
        // Bond (site-1, site): op a on the last env site, partner here.
        last_w[a] += kCoef[a] * op_element(kPartner[a], sb, sk);
      }
      for (int a = 0; a < kOps; ++a) any = any || first_w[a] != 0.0 || last_w[a] != 0.0;
      if (!any) continue;

      for (Eigen::Index bb = 0; bb < c; ++bb) {
        for (Eigen::Index cb = 0; cb < c; ++cb) {
          const Eigen::Index row = sb * c2 + bb * c + cb;
          for (Eigen::Index bk = 0; bk < c; ++bk) {
            for (Eigen::Index ck = 0; ck < c; ++ck) {
              const Eigen::Index col = sk * c2 + bk * c + ck;
              const Eigen::Index er = ck * c + cb;
              const Eigen::Index ec = bk * c + bb;
              double h = 0.0;
              if (sb == sk) {
                h += env.h(er, ec);
                p.n_eff(row, col) = env.t(er, ec);
              }
              for (int a = 0; a < kOps; ++a) {
                if (first_w[a] != 0.0) h += first_w[a] * env.first[a](er, ec);
                if (last_w[a] != 0.0) h += last_w[a] * env.last[a](er, ec);
              }
              p.h_eff(row, col) = coupling * h;
            }
          }
        }
      }
    }
  }
  return p;
}

std::vector<Scaled> prefix_products(const std::vector<Transfers>& tr) {
  const std::size_t n = tr.size();
  const Eigen::Index d = tr[0].id.rows();
  std::vector<Scaled> p(n + 1);
  p[0].m = Mat::Identity(d, d);
  for (std::size_t j = 0; j < n; ++j) {
    p[j + 1].m = p[j].m * tr[j].id;
    p[j + 1].log_scale = p[j].log_scale;
    p[j + 1].renormalize();
  }
  return p;
}

std::vector<Scaled> suffix_products(const std::vector<Transfers>& tr) {
  const std::size_t n = tr.size();
  const Eigen::Index d = tr[0].id.rows();
  std::vector<Scaled> s(n + 1);
  s[n].m = Mat::Identity(d, d);
  for (std::size_t j = n; j-- > 0;) {
    s[j].m = tr[j].id * s[j + 1].m;
    s[j].log_scale = s[j + 1].log_scale;
    s[j].renormalize();
  }
  return s;
}

// log <ψ|ψ> from a full-ring product.
double ring_log_norm(const Scaled& full) {
  const double tr = full.m.trace();
  if (!(tr > 1e-300) || !std::isfinite(tr)) {
    throw DegenerateStateError("MPS norm vanishes (trace of transfer product " +
                               std::to_string(tr) + ")");
  }
  return std::log(tr) + full.log_scale;
}

}  // namespace

MpsState::MpsState(int n_sites, int chi) : n_sites_(n_sites), chi_(chi) {
  if (n_sites < 4 || n_sites % 2 != 0) {
    throw InvalidSizeError("MPS ring size must be even and >= 4, got " + std::to_string(n_sites));
  }
  if (chi < 1) throw InvalidSizeError("bond dimension must be >= 1");
  tensors_.resize(static_cast<std::size_t>(n_sites));
  for (auto& site : tensors_) {
    for (auto& m : site) m = Mat::Zero(chi, chi);
  }
}

Eigen::MatrixXd& MpsState::tensor(int site, int spin) {
  return tensors_.at(static_cast<std::size_t>(site)).at(static_cast<std::size_t>(spin));
}

const Eigen::MatrixXd& MpsState::tensor(int site, int spin) const {
  return tensors_.at(static_cast<std::size_t>(site)).at(static_cast<std::size_t>(spin));
}

MpsState random_init(int n_sites, int chi, std::uint64_t seed) {
  for (int attempt = 0; attempt <= 8; ++attempt) {
    MpsState state(n_sites, chi);
    state.seed = seed;
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < n_sites; ++i) {
      for (int s = 0; s < 2; ++s) {
        Mat& m = state.tensor(i, s);
        for (Eigen::Index r = 0; r < chi; ++r) {
          for (Eigen::Index c = 0; c < chi; ++c) m(r, c) = dist(rng);
        }
      }
    }
    try {
      log_norm(state);
      return state;
    } catch (const DegenerateStateError&) {
    }
  }
  throw DegenerateStateError("random MPS draw had zero norm after 8 retries");
}

double log_norm(const MpsState& state) {
  const auto tr = all_transfers(state);
  return ring_log_norm(prefix_products(tr).back());
}

double energy(const MpsState& state, double coupling) {
  const auto tr = all_transfers(state);
  const int n = state.n_sites();
  const auto pre = prefix_products(tr);
  const auto suf = suffix_products(tr);
  const double log_z = ring_log_norm(pre.back());

  double total = 0.0;
  for (int j = 0; j + 1 < n; ++j) {
    const Scaled& left = pre[static_cast<std::size_t>(j)];
    const Scaled& right = suf[static_cast<std::size_t>(j + 2)];
    for (int a = 0; a < kOps; ++a) {
      const Mat x = left.m * tr[static_cast<std::size_t>(j)].op[a] *
                    tr[static_cast<std::size_t>(j + 1)].op[kPartner[a]];
      total += kCoef[a] * trace_of_product(x, right.m) *
               std::exp(left.log_scale + right.log_scale - log_z);
    }
  }
  // Closing bond (N-1, 0): tr(E_0[Q] E_1 ... E_{N-2} E_{N-1}[P]).
  Scaled middle{Mat::Identity(tr[0].id.rows(), tr[0].id.cols()), 0.0};
  for (int j = 1; j + 1 < n; ++j) {
    middle.m = middle.m * tr[static_cast<std::size_t>(j)].id;
    middle.renormalize();
  }
  for (int a = 0; a < kOps; ++a) {
    const Mat x = tr[0].op[kPartner[a]] * middle.m;
    total += kCoef[a] * trace_of_product(x, tr[static_cast<std::size_t>(n - 1)].op[a]) *
             std::exp(middle.log_scale - log_z);
  }
  return coupling * total;
}

double mps_correlator_zz(const MpsState& state, int i, int j) {
  const int n = state.n_sites();
  if (i < 0 || i >= n || j < 0 || j >= n) throw IndexError("site index out of range");
  const auto tr = all_transfers(state);
  const double log_z = ring_log_norm(prefix_products(tr).back());
  Scaled ring{Mat::Identity(tr[0].id.rows(), tr[0].id.cols()), 0.0};
  for (int k = 0; k < n; ++k) {
    const Transfers& t = tr[static_cast<std::size_t>(k)];
    if (k == i && k == j) {
      ring.m = ring.m * (0.25 * t.id);
    } else if (k == i || k == j) {
      ring.m = ring.m * t.op[0];
    } else {
      ring.m = ring.m * t.id;
    }
    ring.renormalize();
  }
  return ring.m.trace() * std::exp(ring.log_scale - log_z);
}

Eigen::MatrixXd mps_correlation_matrix(const MpsState& state) {
  const int n = state.n_sites();
  const auto tr = all_transfers(state);
  const auto pre = prefix_products(tr);
  const auto suf = suffix_products(tr);
  const double log_z = ring_log_norm(pre.back());

  Mat corr(n, n);
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Scaled& left = pre[ui];
    const Scaled& right = suf[ui + 1];
    corr(i, i) = 0.25 * trace_of_product(left.m * tr[ui].id, right.m) *
                 std::exp(left.log_scale + right.log_scale - log_z);

    Scaled run{left.m * tr[ui].op[0], left.log_scale};
    run.renormalize();
    for (int j = i + 1; j < n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const Scaled& tail = suf[uj + 1];
      const double value = trace_of_product(run.m * tr[uj].op[0], tail.m) *
                           std::exp(run.log_scale + tail.log_scale - log_z);
      corr(i, j) = value;
      corr(j, i) = value;
      run.m = run.m * tr[uj].id;
      run.renormalize();
    }
  }
  return corr;
}

EffectiveProblem effective_problem(const MpsState& state, int site, double coupling) {
  if (site < 0 || site >= state.n_sites()) throw IndexError("site index out of range");
  const auto tr = all_transfers(state);
  return effective_from_environment(ring_environment(tr, site), state.chi(), coupling);
}

SiteUpdate solve_effective(const EffectiveProblem& problem, MpsState& state, int site,
                           const SiteSolverOptions& options) {
  const Eigen::Index c = state.chi();
  const Eigen::Index c2 = c * c;

  // N_eff = 1_spin ⊗ G, so one χ²×χ² eigensolve covers both spin blocks.
  Mat gram = problem.n_eff.topLeftCorner(c2, c2);
  gram = 0.5 * (gram + gram.transpose()).eval();
  const double shift = options.regularization * gram.trace() / static_cast<double>(c2);
  gram.diagonal().array() += shift;

  Eigen::SelfAdjointEigenSolver<Mat> gram_eig(gram);
  const Eigen::VectorXd& d = gram_eig.eigenvalues();
  const double d_max = d.maxCoeff();
  if (!(d_max > 0.0) || !std::isfinite(d_max)) {
    throw ConditioningError("site " + std::to_string(site) +
                            ": norm matrix has no positive eigenvalue (max " +
                            std::to_string(d_max) + ")");
  }
  std::vector<Eigen::Index> kept;
  // A unit eigenvector of N_eff has N_eff-norm √d.
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    if (d[k] > 0.0 && std::sqrt(d[k] / d_max) > options.cutoff) kept.push_back(k);
  }
  const Eigen::Index m = static_cast<Eigen::Index>(kept.size());
  Mat whiten(c2, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    whiten.col(k) = gram_eig.eigenvectors().col(kept[static_cast<std::size_t>(k)]) /
                    std::sqrt(d[kept[static_cast<std::size_t>(k)]]);
  }
  Mat transform = Mat::Zero(2 * c2, 2 * m);
  transform.topLeftCorner(c2, m) = whiten;
  transform.bottomRightCorner(c2, m) = whiten;

  const Mat h_sym = 0.5 * (problem.h_eff + problem.h_eff.transpose());
  Mat reduced = transform.transpose() * h_sym * transform;
  reduced = 0.5 * (reduced + reduced.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> h_eig(reduced);
  if (h_eig.info() != Eigen::Success) {
    throw ConditioningError("site " + std::to_string(site) + ": reduced eigensolve failed");
  }

  // Whitening amplifies rounding in the weak Gram directions, so the
  // candidate is judged by its Rayleigh quotient on the raw matrices and the
  // current tensor is kept when the candidate is not lower.
  const Mat n_sym = 0.5 * (problem.n_eff + problem.n_eff.transpose());
  const auto rayleigh = [&](const Eigen::VectorXd& v) {
    return v.dot(h_sym * v) / v.dot(n_sym * v);
  };
  Eigen::VectorXd current(2 * c2);
  for (int s = 0; s < 2; ++s) {
    const Mat& a = state.tensor(site, s);
    for (Eigen::Index b = 0; b < c; ++b) {
      for (Eigen::Index cc = 0; cc < c; ++cc) current[s * c2 + b * c + cc] = a(b, cc);
    }
  }
  const double current_norm = current.dot(n_sym * current);
  const double current_energy =
      current_norm > 0.0 ? rayleigh(current) : std::numeric_limits<double>::infinity();

  Eigen::VectorXd x = transform * h_eig.eigenvectors().col(0);
  x.normalize();
  const double candidate_energy = rayleigh(x);
  SiteUpdate update{candidate_energy, static_cast<int>(2 * m)};
  if (!(candidate_energy < current_energy)) {
    x = current.normalized();
    update.energy = current_energy;
    update.accepted = false;
  }
  for (int s = 0; s < 2; ++s) {
    Mat& a = state.tensor(site, s);
    for (Eigen::Index b = 0; b < c; ++b) {
      for (Eigen::Index cc = 0; cc < c; ++cc) a(b, cc) = x[s * c2 + b * c + cc];
    }
  }
  return update;
}

SiteUpdate optimize_site(MpsState& state, int site, double coupling,
                         const SiteSolverOptions& options) {
  return solve_effective(effective_problem(state, site, coupling), state, site, options);
}

Eigen::VectorXd squared_spectrum(const Eigen::MatrixXd& correlation) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(correlation, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();  // ascending
  Eigen::VectorXd out(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) out[k] = ev[ev.size() - 1 - k] * ev[ev.size() - 1 - k];
  return out;
}

std::vector<SweepReport> sweep_optimize(MpsState& state, double coupling,
                                        const SweepOptions& options) {
  const int n = state.n_sites();
  const int chi = state.chi();
  std::vector<SweepReport> reports;
  double previous_energy = energy(state, coupling);

  const int first_spectrum_sweep = options.n_sweeps - options.track_spectrum_last - 1;
  std::optional<Eigen::VectorXd> previous_spectrum;
  if (options.track_spectrum_last > 0 && first_spectrum_sweep < 0) {
    previous_spectrum = squared_spectrum(mps_correlation_matrix(state));
  }

  for (int sweep = 0; sweep < options.n_sweeps; ++sweep) {
    auto tr = all_transfers(state);

    // right[k] covers sites k+1 .. N-1 with the tensors from the previous sweep.
    std::vector<Block> right(static_cast<std::size_t>(n));
    for (int k = n - 2; k >= 0; --k) {
      right[static_cast<std::size_t>(k)] =
          combine(site_block(tr[static_cast<std::size_t>(k + 1)]), right[static_cast<std::size_t>(k + 1)]);
    }

    Block left;
    double sweep_energy = previous_energy;
    for (int k = 0; k < n; ++k) {
      const Block env = combine(right[static_cast<std::size_t>(k)], left);
      const SiteUpdate update =
          solve_effective(effective_from_environment(env, chi, coupling), state, k, options.site);
      sweep_energy = update.energy;
      tr[static_cast<std::size_t>(k)] = site_transfers(state, k);
      left = combine(left, site_block(tr[static_cast<std::size_t>(k)]));
      right[static_cast<std::size_t>(k)] = Block{};
    }
    ++state.sweep_count;

    SweepReport report;
    report.sweep_index = sweep;
    report.energy = sweep_energy;
    report.energy_change = sweep_energy - previous_energy;
    previous_energy = sweep_energy;

    if (options.track_spectrum_last > 0 && sweep >= first_spectrum_sweep) {
      Eigen::VectorXd spectrum = squared_spectrum(mps_correlation_matrix(state));
      if (previous_spectrum) {
        const double floor = options.spectrum_floor * (*previous_spectrum)[0];
        double change = 0.0;
        for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
          const double old = (*previous_spectrum)[k];
          if (old < floor || old <= 0.0) continue;
          change = std::max(change, std::abs(spectrum[k] - old) / old);
        }
        report.spectrum_change = change;
      }
      previous_spectrum = std::move(spectrum);
    }
    if (options.on_sweep) options.on_sweep(report);
    reports.push_back(report);
  }
  return reports;
}

}  // namespace qcsvd
