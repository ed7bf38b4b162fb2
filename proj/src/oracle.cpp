#include "oracle.hpp"

#include <Eigen/Core>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "kahan.hpp"

namespace wce {

double block_norm(const Weight& u, const Weight& w, const Block& block, const Exponents& exps,
                  const AtomicSpace& space) {
  const double nu = lp_norm(u, exps.p_conj, space, block);
  const double nw = lp_norm(w, exps.q, space, block);
  return nu * nw / block.mass;
}

namespace {

double sgn0(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Per-cell / per-block arrays driving the ascent search.
struct DenseView {
  std::vector<double> mass;  // per cell
  std::vector<double> uv;
  std::vector<double> wv;
  std::vector<std::size_t> owner;                 // cell -> block
  std::vector<double> kq;                         // int_A |w|^q dmu / mu(A)^q
  std::vector<std::vector<std::size_t>> members;  // block -> cells
};

DenseView make_view(const Weight& u, const Weight& w, const SubAlgebra& alg,
                    const Exponents& exps, const AtomicSpace& space) {
  const auto cells = space.cells();
  const auto blocks = alg.blocks();
  DenseView v;
  v.mass.resize(cells.size());
  v.uv.resize(cells.size());
  v.wv.resize(cells.size());
  v.owner.resize(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    v.mass[i] = cells[i].mass;
    v.uv[i] = u.eval(cells[i].id);
    v.wv[i] = w.eval(cells[i].id);
    v.owner[i] = alg.block_of_index(i);
  }
  v.kq.resize(blocks.size());
  v.members.resize(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    KahanSum s;
    for (std::size_t i : blocks[b].cell_indices) {
      s.add(std::pow(std::abs(v.wv[i]), exps.q) * v.mass[i]);
    }
    v.kq[b] = s.value() / std::pow(blocks[b].mass, exps.q);
    if (!std::isfinite(v.kq[b])) {
      fail(ErrorCode::NonFiniteData, "block " + std::to_string(b) +
                                         ": |w|^q integral is not finite");
    }
    v.members[b].assign(blocks[b].cell_indices.begin(), blocks[b].cell_indices.end());
  }
  return v;
}

// Upper side of the bracket: exact disjoint-block aggregation.
double formula_norm(const std::vector<double>& bn, const Exponents& exps) {
  double mx = 0.0;
  for (double x : bn) {
    if (!std::isfinite(x)) {
      fail(ErrorCode::NonFiniteData, "block norm is not finite");
    }
    mx = std::max(mx, x);
  }
  if (exps.p <= exps.q || mx == 0.0) {
    return mx;
  }
  KahanSum s;
  for (double x : bn) {
    s.add(std::pow(x / mx, exps.r));
  }
  return mx * std::pow(s.value(), exps.inv_r);
}

void compute_phi(const DenseView& v, const std::vector<double>& f, std::vector<double>& phi) {
  std::fill(phi.begin(), phi.end(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    phi[v.owner[i]] += v.uv[i] * f[i] * v.mass[i];
  }
}

// ||T f||_q / ||f||_p via the per-block functionals; 0 on degenerate input.
double rayleigh(const DenseView& v, const Exponents& e, const std::vector<double>& f,
                std::vector<double>& phi) {
  compute_phi(v, f, phi);
  KahanSum num;
  for (std::size_t b = 0; b < phi.size(); ++b) {
    if (phi[b] != 0.0 && v.kq[b] > 0.0) {
      num.add(std::pow(std::abs(phi[b]), e.q) * v.kq[b]);
    }
  }
  KahanSum den;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != 0.0) {
      den.add(std::pow(std::abs(f[i]), e.p) * v.mass[i]);
    }
  }
  if (!(den.value() > 0.0)) {
    return 0.0;
  }
  const double val = std::pow(num.value(), 1.0 / e.q) / std::pow(den.value(), 1.0 / e.p);
  return std::isfinite(val) ? val : 0.0;
}

bool normalize_p(const DenseView& v, double p, std::vector<double>& f) {
  double mx = 0.0;
  for (double x : f) {
    mx = std::max(mx, std::abs(x));
  }
  if (!(mx > 0.0) || !std::isfinite(mx)) {
    return false;
  }
  for (double& x : f) {
    x /= mx;
  }
  KahanSum s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != 0.0) {
      s.add(std::pow(std::abs(f[i]), p) * v.mass[i]);
    }
  }
  const double pv = s.value();
  if (!(pv > 0.0) || !std::isfinite(pv)) {
    return false;
  }
  const double scale = std::pow(pv, -1.0 / p);
  if (!std::isfinite(scale)) {
    return false;
  }
  for (double& x : f) {
    x *= scale;
  }
  return true;
}

// One step of the nonlinear power iteration for the Rayleigh ratio
// (p > 1): the stationarity condition gives
//   f(x) ~ sgn(phi_b u(x)) (|phi_b|^{q-1} kq_b |u(x)|)^{1/(p-1)}.
// All factors are normalized by their maxima first; the result is
// renormalized afterwards, so the scaling cancels.
void power_step(const DenseView& v, const Exponents& e, const std::vector<double>& phi,
                std::vector<double>& f) {
  const double ip = 1.0 / (e.p - 1.0);
  double phimax = 0.0;
  double kqmax = 0.0;
  double umax = 0.0;
  for (std::size_t b = 0; b < phi.size(); ++b) {
    phimax = std::max(phimax, std::abs(phi[b]));
    kqmax = std::max(kqmax, v.kq[b]);
  }
  for (double x : v.uv) {
    umax = std::max(umax, std::abs(x));
  }
  if (phimax == 0.0 || kqmax == 0.0 || umax == 0.0) {
    std::fill(f.begin(), f.end(), 0.0);
    return;
  }
  std::vector<double> amp(phi.size(), 0.0);
  for (std::size_t b = 0; b < phi.size(); ++b) {
    if (v.kq[b] > 0.0 && (phi[b] != 0.0 || e.q == 1.0)) {
      amp[b] = std::pow(std::abs(phi[b]) / phimax, (e.q - 1.0) * ip) *
               std::pow(v.kq[b] / kqmax, ip) * sgn0(phi[b]);
    }
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = amp[v.owner[i]];
    f[i] = (a == 0.0 || v.uv[i] == 0.0)
               ? 0.0
               : a * sgn0(v.uv[i]) * std::pow(std::abs(v.uv[i]) / umax, ip);
  }
}

}  // namespace

NormBracket operator_norm(const Weight& u, const Weight& w, const SubAlgebra& alg,
                          const Exponents& exps, const AtomicSpace& space) {
  const auto blocks = alg.blocks();
  const DenseView view = make_view(u, w, alg, exps, space);

  std::vector<double> bn(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    bn[b] = block_norm(u, w, blocks[b], exps, space);
  }
  NormBracket out;
  out.formula = formula_norm(bn, exps);
  if (out.formula == 0.0) {
    return out;
  }

  // Candidate starting points: fixed-seed random draws, one within-block
  // extremal per block, and (q < p) the cross-block mix with the
  // stationarity allocation lambda_b ~ bn_b^{r/p}.
  std::vector<std::vector<double>> starts;
  const std::size_t n = space.cell_count();
  std::mt19937 rng(0x9e3779b9u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int s = 0; s < 20; ++s) {
    std::vector<double> f(n);
    for (double& x : f) {
      x = dist(rng);
    }
    starts.push_back(std::move(f));
  }
  const bool p_gt_1 = exps.p > 1.0;
  const double ip = p_gt_1 ? 1.0 / (exps.p - 1.0) : 0.0;
  std::vector<std::vector<double>> extremal(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    double ub = 0.0;
    std::size_t argmax = n;
    for (std::size_t i : view.members[b]) {
      if (std::abs(view.uv[i]) > ub) {
        ub = std::abs(view.uv[i]);
        argmax = i;
      }
    }
    if (ub == 0.0) {
      continue;
    }
    std::vector<double> f(n, 0.0);
    if (p_gt_1) {
      for (std::size_t i : view.members[b]) {
        if (view.uv[i] != 0.0) {
          f[i] = sgn0(view.uv[i]) * std::pow(std::abs(view.uv[i]) / ub, ip);
        }
      }
    } else {
      f[argmax] = 1.0;
    }
    extremal[b] = f;
    starts.push_back(std::move(f));
  }
  if (exps.q < exps.p && p_gt_1) {
    std::vector<double> mix(n, 0.0);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (bn[b] == 0.0 || extremal[b].empty()) {
        continue;
      }
      std::vector<double> unit = extremal[b];
      if (!normalize_p(view, exps.p, unit)) {
        continue;
      }
      const double lambda = std::pow(bn[b] / out.formula, exps.r / exps.p);
      for (std::size_t i : view.members[b]) {
        mix[i] += lambda * unit[i];
      }
    }
    starts.push_back(std::move(mix));
  }
  if (exps.p == 1.0) {
    // For p = 1 the unit ball's extreme points are the scaled point masses;
    // the maximum over them is the exact norm, so enumerate them all.
    for (std::size_t i = 0; i < n; ++i) {
      if (view.uv[i] != 0.0) {
        std::vector<double> f(n, 0.0);
        f[i] = 1.0;
        starts.push_back(std::move(f));
      }
    }
  }

  std::vector<double> phi(blocks.size());
  std::vector<double> best_f;
  double best = 0.0;
  for (std::vector<double>& f : starts) {
    if (!normalize_p(view, exps.p, f)) {
      continue;
    }
    double cur = rayleigh(view, exps, f, phi);
    if (cur > best) {
      best = cur;
      best_f = f;
    }
    if (!p_gt_1) {
      continue;  // point-mass enumeration already covers p = 1 exactly
    }
    double prev = cur;
    int stalled = 0;
    for (int iter = 0; iter < 120 && stalled < 2; ++iter) {
      compute_phi(view, f, phi);
      power_step(view, exps, phi, f);
      if (!normalize_p(view, exps.p, f)) {
        break;
      }
      cur = rayleigh(view, exps, f, phi);
      if (cur > best) {
        best = cur;
        best_f = f;
      }
      stalled = (cur <= prev * (1.0 + 1e-13)) ? stalled + 1 : 0;
      prev = cur;
    }
  }

  if (best == 0.0 || best_f.empty()) {
    out.ascent = 0.0;
    return out;
  }
  // Honest final evaluation of the winning candidate through the library
  // path (apply + lp_norm), independent of the fast accumulators above.
  const auto cells = space.cells();
  std::vector<std::pair<std::int64_t, double>> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    entries.emplace_back(cells[i].id, best_f[i]);
  }
  const Weight fw = Weight::table(std::move(entries));
  const double fnorm = lp_norm(fw, exps.p, space);
  if (!(fnorm > 0.0)) {
    out.ascent = 0.0;
    return out;
  }
  out.ascent = lp_norm(apply(u, w, alg, fw, space), exps.q, space) / fnorm;
  return out;
}

double trace_norm_hilbert(const Weight& u, const Weight& w, const SubAlgebra& alg,
                          const AtomicSpace& space) {
  const std::size_t n = space.cell_count();
  if (n > 512) {
    fail(ErrorCode::BadArgument, "trace-norm oracle supports at most 512 cells");
  }
  const auto cells = space.cells();
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
  for (const Block& b : alg.blocks()) {
    for (std::size_t x : b.cell_indices) {
      const double row = w.eval(cells[x].id) * std::sqrt(cells[x].mass) / b.mass;
      for (std::size_t y : b.cell_indices) {
        const double entry = row * u.eval(cells[y].id) * std::sqrt(cells[y].mass);
        if (!std::isfinite(entry)) {
          fail(ErrorCode::NonFiniteData, "matrix entry is not finite");
        }
        mat(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = entry;
      }
    }
  }
  // Jacobi rather than bidiagonal divide-and-conquer: the latter can drop
  // singular values on these block-diagonal matrices (observed with Eigen
  // 3.4.0), and the size cap above keeps Jacobi affordable.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
  return svd.singularValues().sum();
}

std::vector<PietschTestFunction> pietsch_test_functions(const Weight& u, const Weight& w,
                                                        const SubAlgebra& alg,
                                                        const Exponents& exps,
                                                        const AtomicSpace& space,
                                                        double operator_norm_value) {
  if (!(exps.p > 1.0)) {
    fail(ErrorCode::InvalidExponent, "test functions need p > 1 (finite p')");
  }
  if (exps.regime == Regime::Equal) {
    fail(ErrorCode::RegimeUnsupported, "test functions need p != q");
  }
  if (!(operator_norm_value > 0.0) || !std::isfinite(operator_norm_value)) {
    fail(ErrorCode::ZeroOperator, "test functions need a positive operator norm");
  }
  // Mass exponent of the scaling: e = (r-p')/(pr) when q < p and
  // e = (p'+r)/(pr) when p < q; exactly the values that make
  // ||f_i||_p = (term_i/||T||)^{p'/p} and the image-norm identity hold.
  const double e_mass = (exps.regime == Regime::Smaller)
                            ? (exps.r - exps.p_conj) / (exps.p * exps.r)
                            : (exps.p_conj + exps.r) / (exps.p * exps.r);
  const std::vector<AtomStats> stats = atom_stats(u, w, alg, exps, space);
  const auto blocks = alg.blocks();
  const auto cells = space.cells();

  std::vector<PietschTestFunction> out;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    if (!(stats[bi].term > 0.0)) {
      continue;  // u or w vanishes on the block: f_i = 0, nothing to test
    }
    const double scale = std::pow(stats[bi].ew, (exps.p_conj - 1.0) / exps.q) /
                         (std::pow(operator_norm_value, exps.p_conj / exps.p) *
                          std::pow(blocks[bi].mass, e_mass));
    std::vector<std::pair<std::int64_t, double>> entries;
    entries.reserve(cells.size());
    for (const Cell& c : cells) {
      entries.emplace_back(c.id, 0.0);
    }
    for (std::size_t i : blocks[bi].cell_indices) {
      const double uv = u.eval(cells[i].id);
      entries[i].second =
          (uv == 0.0) ? 0.0
                      : sgn0(uv) * std::pow(std::abs(uv), exps.p_conj - 1.0) * scale;
      if (!std::isfinite(entries[i].second)) {
        fail(ErrorCode::NonFiniteData, "test-function value is not finite at cell " +
                                           std::to_string(cells[i].id));
      }
    }
    out.push_back(PietschTestFunction{bi, Weight::table(std::move(entries))});
  }
  return out;
}

double pietsch_identity_check(const Weight& u, const Weight& w, const SubAlgebra& alg,
                              const Exponents& exps, const AtomicSpace& space) {
  const auto blocks = alg.blocks();
  std::vector<double> bn(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    bn[b] = block_norm(u, w, blocks[b], exps, space);
  }
  const double norm = formula_norm(bn, exps);
  if (!(norm > 0.0)) {
    fail(ErrorCode::ZeroOperator, "the operator vanishes; there is nothing to test");
  }
  const std::vector<AtomStats> stats = atom_stats(u, w, alg, exps, space);
  const std::vector<PietschTestFunction> fns =
      pietsch_test_functions(u, w, alg, exps, space, norm);
  double worst = 0.0;
  for (const PietschTestFunction& tf : fns) {
    const double lhs = lp_norm(apply(u, w, alg, tf.values, space), exps.q, space);
    const double rhs = std::pow(norm, -exps.p_conj / exps.p) *
                       std::pow(stats[tf.block_index].term, exps.p_conj);
    const double denom = std::max(std::abs(rhs), 1e-300);
    worst = std::max(worst, std::abs(lhs - rhs) / denom);
  }
  return worst;
}

}  // namespace wce
