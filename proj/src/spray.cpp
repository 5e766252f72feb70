#include "finslab/spray.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "finslab/linalg.hpp"

namespace finslab {

namespace {

MultiIndex unit_index(int vars, int a) {
  MultiIndex idx(static_cast<std::size_t>(vars), 0);
  idx[static_cast<std::size_t>(a)] += 1;
  return idx;
}

MultiIndex unit_index(int vars, int a, int b) {
  MultiIndex idx(static_cast<std::size_t>(vars), 0);
  idx[static_cast<std::size_t>(a)] += 1;
  idx[static_cast<std::size_t>(b)] += 1;
  return idx;
}

// Horner composition sum_k coeffs[k] * (t - t0)^k; the shifted jet has no
// constant term, so the sum is exact under truncation.
Jet compose_series(const Jet& t, std::span<const double> coeffs) {
  Jet w = t - t.value();
  Jet acc = Jet::constant(t.space(), coeffs.back());
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
    acc = acc * w;
    acc = acc + coeffs[k];
  }
  return acc;
}

}  // namespace

PQJets compute_pq_jets(const PsiProfile& profile, double r, double s) {
  Jet psi = eval_profile_rs(profile, r, s);
  if (!(psi.value() > 0.0)) throw DomainError("profile not positive");

  auto space = psi.space();
  Jet rj = Jet::variable(space, 0, r);
  Jet sj = Jet::variable(space, 1, s);
  Jet psi_r = psi.derivative(0);
  Jet psi_s = psi.derivative(1);
  Jet psi_ss = psi_s.derivative(1);
  Jet psi_rs = psi_r.derivative(1);
  Jet rr_ss = rj * rj - sj * sj;

  Jet denom = psi - sj * psi_s + rr_ss * psi_ss;
  if (!(denom.value() > 0.0)) throw DomainError("metric not strongly convex here");

  PQJets out;
  out.psi = psi;
  out.Q = (rj * psi_ss + sj * psi_rs - psi_r) / ((2.0 * rj) * denom);
  out.P = (sj * psi_r + rj * psi_s) / ((2.0 * rj) * psi) -
          ((sj * psi + rr_ss * psi_s) / psi) * out.Q;
  return out;
}

SprayScalars scalars_from_jets(const PQJets& jets) {
  SprayScalars sc;
  const int vars = 2;
  sc.P = jets.P.value();
  sc.P_s = jets.P.partial(unit_index(vars, 1));
  sc.P_ss = jets.P.partial(unit_index(vars, 1, 1));
  sc.Q = jets.Q.value();
  sc.Q_s = jets.Q.partial(unit_index(vars, 1));
  sc.Q_ss = jets.Q.partial(unit_index(vars, 1, 1));
  MultiIndex sss{0, 3};
  sc.Q_sss = jets.Q.partial(sss);
  return sc;
}

SprayScalars compute_pq(const PsiProfile& profile, double r, double s) {
  return scalars_from_jets(compute_pq_jets(profile, r, s));
}

std::vector<double> assemble_spray(const EvaluationPoint& p, const SprayScalars& sc) {
  std::vector<double> g(static_cast<std::size_t>(p.n()));
  double u2 = p.u * p.u;
  for (int i = 0; i < p.n(); ++i)
    g[static_cast<std::size_t>(i)] =
        p.u * sc.P * p.y[static_cast<std::size_t>(i)] + u2 * sc.Q * p.x[static_cast<std::size_t>(i)];
  return g;
}

FundamentalTensor fundamental_tensor(const MetricEvaluator& metric, const EvaluationPoint& p) {
  int n = p.n();
  SeededPoint seeded = seed_xy(p, 0, 2, false);
  Jet L = metric.f_squared(seeded.x, seeded.y);
  int vars = seeded.space->var_count();

  FundamentalTensor out;
  out.n = n;
  out.g.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.g[static_cast<std::size_t>(i * n + j)] =
          0.5 * L.partial(unit_index(vars, n + i, n + j));

  std::vector<double> pivots = leading_pivots(out.g, n);
  out.positive_definite = pivots.size() == static_cast<std::size_t>(n);
  out.min_pivot = pivots.empty() ? 0.0 : pivots[0];
  for (double piv : pivots) {
    out.min_pivot = std::min(out.min_pivot, piv);
    if (!(piv > 0.0)) out.positive_definite = false;
  }

  bool singular = false;
  out.g_inv = matrix_inverse(out.g, n, &singular);
  out.condition = singular ? std::numeric_limits<double>::infinity()
                           : matrix_norm1(out.g, n) * matrix_norm1(out.g_inv, n);
  return out;
}

ConvexityCheck strong_convexity_check(const PsiProfile& profile, const EvaluationPoint& p) {
  ProfileMetric metric(profile, p.n());
  FundamentalTensor g = fundamental_tensor(metric, p);
  return {g.positive_definite, g.min_pivot};
}

ConvexityCheck strong_convexity_check(const PsiProfile& profile, std::span<const double> x,
                                      std::span<const double> y) {
  double u2 = 0.0;
  for (double yi : y) u2 += yi * yi;
  if (!(u2 > 0.0)) throw DomainError("norm not smooth at origin");
  return strong_convexity_check(
      profile, EvaluationPoint::make({x.begin(), x.end()}, {y.begin(), y.end()}));
}

std::vector<double> general_spray_oracle(const MetricEvaluator& metric,
                                         const EvaluationPoint& p) {
  int n = p.n();
  SeededPoint seeded = seed_xy(p, 1, 2, true);
  Jet L = metric.f_squared(seeded.x, seeded.y);
  int vars = seeded.space->var_count();

  std::vector<double> g(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g[static_cast<std::size_t>(i * n + j)] = 0.5 * L.partial(unit_index(vars, n + i, n + j));

  bool singular = false;
  std::vector<double> g_inv = matrix_inverse(g, n, &singular);
  if (singular) throw DomainError("fundamental tensor singular");

  std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
  for (int l = 0; l < n; ++l) {
    double acc = -L.partial(unit_index(vars, l));
    for (int k = 0; k < n; ++k)
      acc += L.partial(unit_index(vars, k, n + l)) * p.y[static_cast<std::size_t>(k)];
    rhs[static_cast<std::size_t>(l)] = acc;
  }

  std::vector<double> G(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int l = 0; l < n; ++l)
      acc += g_inv[static_cast<std::size_t>(i * n + l)] * rhs[static_cast<std::size_t>(l)];
    G[static_cast<std::size_t>(i)] = 0.25 * acc;
  }
  return G;
}

std::vector<Jet> spray_jets_closed(const PsiProfile& profile, const EvaluationPoint& p) {
  int n = p.n();
  PQJets pq = compute_pq_jets(profile, p.r, p.s);

  // s-series of P and Q about s0; orders above 4 are casualties of the psi
  // cap and are omitted (they could only touch y-degrees above 4 anyway).
  constexpr int kSeriesOrder = 4;
  std::array<double, kSeriesOrder + 1> pc{}, qc{};
  for (int k = 0; k <= kSeriesOrder; ++k) {
    MultiIndex idx{0, k};
    pc[static_cast<std::size_t>(k)] = pq.P.coefficient(idx);
    qc[static_cast<std::size_t>(k)] = pq.Q.coefficient(idx);
  }

  SeededPoint seeded = seed_xy(p, 1, 5, false);
  Jet u2 = seeded.y[0] * seeded.y[0];
  for (int i = 1; i < n; ++i) u2 += seeded.y[static_cast<std::size_t>(i)] * seeded.y[static_cast<std::size_t>(i)];
  Jet u = sqrt(u2);
  Jet v = seeded.x[0] * seeded.y[0];
  for (int i = 1; i < n; ++i) v += seeded.x[static_cast<std::size_t>(i)] * seeded.y[static_cast<std::size_t>(i)];
  Jet s_jet = v / u;

  Jet P_jet = compose_series(s_jet, pc);
  Jet Q_jet = compose_series(s_jet, qc);

  std::vector<Jet> G;
  G.reserve(static_cast<std::size_t>(n));
  Jet uP = u * P_jet;
  Jet u2Q = u2 * Q_jet;
  for (int i = 0; i < n; ++i)
    G.push_back(uP * seeded.y[static_cast<std::size_t>(i)] + u2Q * seeded.x[static_cast<std::size_t>(i)]);
  return G;
}

std::vector<Jet> spray_jets_general(const MetricEvaluator& metric, const EvaluationPoint& p) {
  int n = p.n();
  SeededPoint seeded = seed_xy(p, 1, 5, true);
  Jet L = metric.f_squared(seeded.x, seeded.y);

  std::vector<Jet> Lx;
  Lx.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) Lx.push_back(L.derivative(k));

  std::vector<Jet> g(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  std::vector<Jet> Ly;
  Ly.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) Ly.push_back(L.derivative(n + i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g[static_cast<std::size_t>(i * n + j)] = Ly[static_cast<std::size_t>(i)].derivative(n + j) * 0.5;

  std::vector<Jet> g_inv = jet_matrix_inverse(g, n);

  std::vector<Jet> rhs;
  rhs.reserve(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    Jet acc = Lx[0].derivative(n + l) * seeded.y[0];
    for (int k = 1; k < n; ++k)
      acc += Lx[static_cast<std::size_t>(k)].derivative(n + l) * seeded.y[static_cast<std::size_t>(k)];
    acc -= Lx[static_cast<std::size_t>(l)];
    rhs.push_back(acc);
  }

  std::vector<Jet> G;
  G.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Jet acc = g_inv[static_cast<std::size_t>(i * n)] * rhs[0];
    for (int l = 1; l < n; ++l)
      acc += g_inv[static_cast<std::size_t>(i * n + l)] * rhs[static_cast<std::size_t>(l)];
    G.push_back(acc * 0.25);
  }
  return G;
}

std::vector<double> finite_difference_spray(const MetricEvaluator& metric,
                                            const EvaluationPoint& p, double step) {
  int n = p.n();

  // (F^2) and (F^2)_{y^l} at shifted x, via y-jets only.
  auto eval_at = [&](const std::vector<double>& x, double* L0, std::vector<double>* Ly) {
    EvaluationPoint q = EvaluationPoint::make(x, p.y);
    SeededPoint seeded = seed_xy(q, 0, 1, false);
    Jet L = metric.f_squared(seeded.x, seeded.y);
    int vars = seeded.space->var_count();
    if (L0) *L0 = L.value();
    if (Ly) {
      Ly->resize(static_cast<std::size_t>(n));
      for (int l = 0; l < n; ++l)
        (*Ly)[static_cast<std::size_t>(l)] = L.partial(unit_index(vars, n + l));
    }
  };

  std::vector<double> Lx(static_cast<std::size_t>(n));
  std::vector<double> Lxy(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    std::vector<double> xp = p.x, xm = p.x;
    xp[static_cast<std::size_t>(k)] += step;
    xm[static_cast<std::size_t>(k)] -= step;
    double Lp = 0.0, Lm = 0.0;
    std::vector<double> Lyp, Lym;
    eval_at(xp, &Lp, &Lyp);
    eval_at(xm, &Lm, &Lym);
    Lx[static_cast<std::size_t>(k)] = (Lp - Lm) / (2.0 * step);
    for (int l = 0; l < n; ++l)
      Lxy[static_cast<std::size_t>(k * n + l)] =
          (Lyp[static_cast<std::size_t>(l)] - Lym[static_cast<std::size_t>(l)]) / (2.0 * step);
  }

  FundamentalTensor g = fundamental_tensor(metric, p);

  std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
  for (int l = 0; l < n; ++l) {
    double acc = -Lx[static_cast<std::size_t>(l)];
    for (int k = 0; k < n; ++k)
      acc += Lxy[static_cast<std::size_t>(k * n + l)] * p.y[static_cast<std::size_t>(k)];
    rhs[static_cast<std::size_t>(l)] = acc;
  }
  std::vector<double> G(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int l = 0; l < n; ++l)
      acc += g.g_inv[static_cast<std::size_t>(i * n + l)] * rhs[static_cast<std::size_t>(l)];
    G[static_cast<std::size_t>(i)] = 0.25 * acc;
  }
  return G;
}

}  // namespace finslab
