#include "finslab/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "finslab/curvature.hpp"
#include "finslab/flatness.hpp"
#include "finslab/sampling.hpp"
#include "finslab/util.hpp"
#include "finslab/version.hpp"

namespace finslab {

namespace {

template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  auto worker = [&] {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads - 1));
  for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);  // lowest sample index wins: deterministic
}

std::string verdict_of(double residual_max, const RunConfig& cfg) {
  if (residual_max <= cfg.tolerance_zero) return "holds";
  if (residual_max >= cfg.threshold_nonzero) return "fails";
  return "inconclusive";
}

FlagVerdict make_flag(const std::string& name, const std::vector<double>& per_sample,
                      std::span<const EvaluationPoint> samples, const RunConfig& cfg) {
  FlagVerdict f;
  f.flag = name;
  KahanSum mean;
  for (std::size_t i = 0; i < per_sample.size(); ++i) {
    mean.add(per_sample[i]);
    f.residual_max = std::max(f.residual_max, per_sample[i]);
  }
  f.residual_mean = per_sample.empty() ? 0.0 : mean.total() / static_cast<double>(per_sample.size());
  f.verdict = verdict_of(f.residual_max, cfg);

  std::vector<std::size_t> order(per_sample.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&per_sample](std::size_t a, std::size_t b) {
    return per_sample[a] > per_sample[b];
  });
  std::size_t n_wit = std::min<std::size_t>(3, order.size());
  for (std::size_t w = 0; w < n_wit && w < samples.size(); ++w) {
    const EvaluationPoint& p = samples[order[w]];
    f.witnesses.push_back({p.x, p.y, per_sample[order[w]]});
  }
  return f;
}

std::vector<double> classify_r_grid(std::array<double, 2> rr) {
  std::vector<double> grid;
  for (double r : {0.1, 0.3, 0.5, 0.7})
    if (r >= rr[0] && r <= rr[1]) grid.push_back(r);
  if (grid.empty())
    for (int i = 0; i < 4; ++i)
      grid.push_back(rr[0] + (rr[1] - rr[0]) * (i + 0.5) / 4.0);
  return grid;
}

double rel(double raw, double scale) { return raw / (1.0 + scale); }

struct SuiteContext {
  const RunConfig& cfg;
  const SuiteOptions& opts;
  PsiProfile profile;
  ProfileMetric metric;
  std::vector<EvaluationPoint> samples;
  std::array<double, 2> rr;  // effective r-range
  std::vector<double> r_grid;
};

void run_classify(SuiteContext& ctx, Report& report) {
  const RunConfig& cfg = ctx.cfg;
  int count = static_cast<int>(ctx.samples.size());

  struct PerSample {
    double berwald = 0.0, hamel = 0.0, dual = 0.0, pfdf = 0.0, riemann = 0.0;
  };
  std::vector<PerSample> rows(static_cast<std::size_t>(count));

  // k1 first: the pf_and_df flag needs it.
  ConstantFit k1_fit;
  if (cfg.k1_scan) {
    FitResult fit = fit_k1(ctx.metric, ctx.samples);
    k1_fit = {"scan", fit.value, fit.fit_residual};
  } else {
    k1_fit = {"fixed", cfg.k1_value, pfdf_rms(ctx.metric, ctx.samples, cfg.k1_value)};
  }
  report.k1 = k1_fit;

  parallel_for(count, ctx.opts.threads, [&](int i) {
    const EvaluationPoint& p = ctx.samples[static_cast<std::size_t>(i)];
    int n = p.n();
    PerSample& row = rows[static_cast<std::size_t>(i)];

    std::vector<Jet> spray = spray_jets_closed(ctx.profile, p);
    std::vector<double> b = berwald_tensor(spray, n);
    double second_scale = 0.0;
    {
      MultiIndex idx(static_cast<std::size_t>(2 * n), 0);
      for (int a = 0; a < n; ++a)
        for (int j = 0; j < n; ++j)
          for (int k = j; k < n; ++k) {
            std::fill(idx.begin(), idx.end(), 0);
            idx[static_cast<std::size_t>(n + j)] += 1;
            idx[static_cast<std::size_t>(n + k)] += 1;
            second_scale = std::max(second_scale,
                                    std::abs(spray[static_cast<std::size_t>(a)].partial(idx)));
          }
    }
    row.berwald = rel(max_abs(b), second_scale);

    double scale = 0.0;
    row.hamel = rel(max_abs(hamel_residual(ctx.metric, p, &scale)), scale);
    row.dual = rel(max_abs(dual_flat_residual(ctx.metric, p, &scale)), scale);
    row.pfdf = rel(max_abs(pfdf_residual(ctx.metric, p, k1_fit.value, &scale)), scale);

    RiemannCheck rc = is_riemannian(ctx.metric, std::span<const EvaluationPoint>(&p, 1));
    row.riemann = rc.max_third / rc.scale;
  });

  auto column = [&](auto member) {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = rows[static_cast<std::size_t>(i)].*member;
    return v;
  };

  report.flags.push_back(make_flag("berwald", column(&PerSample::berwald), ctx.samples, cfg));
  report.flags.push_back(
      make_flag("projectively_flat", column(&PerSample::hamel), ctx.samples, cfg));
  report.flags.push_back(make_flag("dually_flat", column(&PerSample::dual), ctx.samples, cfg));
  report.flags.push_back(make_flag("pf_and_df", column(&PerSample::pfdf), ctx.samples, cfg));

  // Isotropic E over the (r, s) grid; c may depend on x only through r.
  IsotropySummary iso;
  std::vector<double> dev_column;
  for (double r : ctx.r_grid) {
    std::vector<double> s_grid = default_s_grid(r);
    IsotropyEstimate est =
        isotropic_e_residual(ctx.profile, r, s_grid, cfg.n, cfg.tolerance_zero);
    iso.r_values.push_back(r);
    iso.c_values.push_back(est.c_mean);
    iso.c_deviations.push_back(est.c_deviation);
    dev_column.push_back(est.c_deviation);
  }
  KahanSum c_mean_sum;
  for (double c : iso.c_values) c_mean_sum.add(c);
  double c_mean = c_mean_sum.total() / static_cast<double>(iso.c_values.size());
  for (double c : iso.c_values)
    iso.cross_r_deviation = std::max(iso.cross_r_deviation, std::abs(c - c_mean));
  report.isotropy = iso;

  FlagVerdict iso_flag = make_flag("isotropic_E", dev_column, {}, cfg);
  report.flags.push_back(iso_flag);

  ConstantFit c_fit;
  if (cfg.c_scan) {
    double disp = iso.cross_r_deviation;
    for (double d : iso.c_deviations) disp = std::max(disp, d);
    c_fit = {"scan", c_mean, disp};
  } else {
    double disp = 0.0;
    for (std::size_t i = 0; i < iso.c_values.size(); ++i)
      disp = std::max(disp, std::abs(iso.c_values[i] - cfg.c_value) + iso.c_deviations[i]);
    c_fit = {"fixed", cfg.c_value, disp};
  }
  report.c = c_fit;

  report.flags.push_back(make_flag("riemannian", column(&PerSample::riemann), ctx.samples, cfg));
}

void run_validate(SuiteContext& ctx, Report& report) {
  const RunConfig& cfg = ctx.cfg;
  int count = static_cast<int>(ctx.samples.size());

  struct PerSample {
    double spray_dev = 0.0, trace_dev = 0.0, e_closed_dev = 0.0, e_general_dev = 0.0,
           b_max = 0.0;
  };
  std::vector<PerSample> rows(static_cast<std::size_t>(count));

  parallel_for(count, ctx.opts.threads, [&](int i) {
    const EvaluationPoint& p = ctx.samples[static_cast<std::size_t>(i)];
    int n = p.n();
    PerSample& row = rows[static_cast<std::size_t>(i)];

    SprayScalars sc = compute_pq(ctx.profile, p.r, p.s);
    std::vector<double> g_closed = assemble_spray(p, sc);
    std::vector<double> g_oracle = general_spray_oracle(ctx.metric, p);
    double g_scale = 0.0, g_dev = 0.0;
    for (int a = 0; a < n; ++a) {
      g_scale = std::max(g_scale, std::abs(g_oracle[static_cast<std::size_t>(a)]));
      g_dev = std::max(g_dev, std::abs(g_closed[static_cast<std::size_t>(a)] -
                                       g_oracle[static_cast<std::size_t>(a)]));
    }
    row.spray_dev = rel(g_dev, g_scale);

    std::vector<Jet> jets_general = spray_jets_general(ctx.metric, p);
    std::vector<Jet> jets_closed = spray_jets_closed(ctx.profile, p);

    double trace_formula = s_curvature(p, sc, n);
    double trace_jets = trace_spray_divergence(jets_general, n);
    row.trace_dev = rel(std::abs(trace_formula - trace_jets), std::abs(trace_jets));

    std::vector<double> e_cl = e_closed(p, sc);
    std::vector<double> e_or_closed = e_from_spray_jets(jets_closed, n);
    std::vector<double> e_or_general = e_from_spray_jets(jets_general, n);
    double scale_closed = max_abs(e_or_closed);
    double scale_general = max_abs(e_or_general);
    double dev_closed = 0.0, dev_general = 0.0;
    for (std::size_t a = 0; a < e_cl.size(); ++a) {
      dev_closed = std::max(dev_closed, std::abs(e_cl[a] - e_or_closed[a]));
      dev_general = std::max(dev_general, std::abs(e_cl[a] - e_or_general[a]));
    }
    row.e_closed_dev = rel(dev_closed, scale_closed);
    row.e_general_dev = rel(dev_general, scale_general);

    row.b_max = max_abs(berwald_tensor(jets_general, n));
  });

  auto row_max = [&](auto member) {
    double best = 0.0;
    for (const auto& r : rows) best = std::max(best, r.*member);
    return best;
  };

  auto add_row = [&report](const std::string& name, double dev, double tol,
                           const std::string& note = "") {
    report.cross_validation.push_back({name, dev, tol, dev <= tol, note});
  };

  add_row("spray_closed_vs_oracle", row_max(&PerSample::spray_dev), 1e-9);
  add_row("trace_formula_vs_jets", row_max(&PerSample::trace_dev), 1e-10);
  add_row("e_closed_vs_oracle_closed_spray", row_max(&PerSample::e_closed_dev), 1e-9);
  add_row("e_closed_vs_oracle_general_spray", row_max(&PerSample::e_general_dev), 1e-9);

  // Lemma conditions over the (r, s) grid against the Berwald tensor over the
  // samples: both zero or both nonzero.
  double lemma_max = 0.0;
  for (double r : ctx.r_grid)
    for (double s : default_s_grid(r)) {
      SprayScalars sc = compute_pq(ctx.profile, r, s);
      for (double v : berwald_conditions(sc, s)) lemma_max = std::max(lemma_max, std::abs(v));
    }
  double b_max = row_max(&PerSample::b_max);
  bool lemma_zero = lemma_max <= cfg.tolerance_zero;
  bool b_zero = b_max <= cfg.tolerance_zero;
  bool lemma_nonzero = lemma_max >= cfg.threshold_nonzero;
  bool b_nonzero = b_max >= cfg.threshold_nonzero;
  bool agree = (lemma_zero && b_zero) || (lemma_nonzero && b_nonzero);
  report.cross_validation.push_back(
      {"lemma_vs_berwald_tensor", std::max(lemma_max, b_max),
       agree ? std::max(lemma_max, b_max) : cfg.tolerance_zero, agree,
       "lemma_max=" + format_real(lemma_max) + " tensor_max=" + format_real(b_max)});

  // Finite-difference secondary cross-check of the spray oracle.
  int fd_count = std::min(count, 10);
  std::vector<double> fd_dev(static_cast<std::size_t>(fd_count), 0.0);
  parallel_for(fd_count, ctx.opts.threads, [&](int i) {
    const EvaluationPoint& p = ctx.samples[static_cast<std::size_t>(i)];
    std::vector<double> g_fd = finite_difference_spray(ctx.metric, p);
    std::vector<double> g_or = general_spray_oracle(ctx.metric, p);
    double scale = 0.0, dev = 0.0;
    for (std::size_t a = 0; a < g_fd.size(); ++a) {
      scale = std::max(scale, std::abs(g_or[a]));
      dev = std::max(dev, std::abs(g_fd[a] - g_or[a]));
    }
    fd_dev[static_cast<std::size_t>(i)] = rel(dev, scale);
  });
  double fd_max = 0.0;
  for (double v : fd_dev) fd_max = std::max(fd_max, v);
  add_row("spray_finite_difference", fd_max, 1e-4, "central differences, step 1e-5");
}

void run_rigidity(SuiteContext& ctx, Report& report) {
  const RunConfig& cfg = ctx.cfg;
  RigiditySection rg;
  rg.ran = true;

  if (!report.k1) {
    if (cfg.k1_scan) {
      FitResult fit = fit_k1(ctx.metric, ctx.samples);
      report.k1 = ConstantFit{"scan", fit.value, fit.fit_residual};
    } else {
      report.k1 =
          ConstantFit{"fixed", cfg.k1_value, pfdf_rms(ctx.metric, ctx.samples, cfg.k1_value)};
    }
  }
  double k1 = report.k1->value;

  if (!report.c || !report.isotropy) {
    IsotropySummary iso;
    for (double r : ctx.r_grid) {
      IsotropyEstimate est =
          isotropic_e_residual(ctx.profile, r, default_s_grid(r), cfg.n, cfg.tolerance_zero);
      iso.r_values.push_back(r);
      iso.c_values.push_back(est.c_mean);
      iso.c_deviations.push_back(est.c_deviation);
    }
    KahanSum mean;
    for (double c : iso.c_values) mean.add(c);
    double c_mean = mean.total() / static_cast<double>(iso.c_values.size());
    for (double c : iso.c_values)
      iso.cross_r_deviation = std::max(iso.cross_r_deviation, std::abs(c - c_mean));
    report.isotropy = iso;
    if (cfg.c_scan) {
      double disp = iso.cross_r_deviation;
      for (double d : iso.c_deviations) disp = std::max(disp, d);
      report.c = ConstantFit{"scan", c_mean, disp};
    } else {
      report.c = ConstantFit{"fixed", cfg.c_value, iso.cross_r_deviation};
    }
  }
  double c = report.c->value;

  ExprPtr k_ast;
  if (!cfg.k_fn.empty())
    k_ast = parse_expression(cfg.k_fn, {});
  else if (ctx.profile.k_fn)
    k_ast = ctx.profile.k_fn;

  bool q_small = true;
  for (double r : ctx.r_grid) {
    for (double s : default_s_grid(r)) {
      PQJets pq = compute_pq_jets(ctx.profile, r, s);
      SprayScalars sc = scalars_from_jets(pq);
      double psi = pq.psi.value();
      MultiIndex ds{0, 1};
      double psi_s = pq.psi.partial(ds);

      auto psi_res = pfdf_psi_residuals(ctx.profile, r, s, k1);
      rg.pfdf_psi_max =
          std::max({rg.pfdf_psi_max, std::abs(psi_res[0]), std::abs(psi_res[1])});

      auto cor = corollary_pq_residuals(sc, psi, k1);
      rg.corollary_p_max = std::max(rg.corollary_p_max, std::abs(cor[0]));
      rg.corollary_q_max = std::max(rg.corollary_q_max, std::abs(cor[1]));

      if (std::abs(sc.Q) > cfg.tolerance_zero) q_small = false;
      if (q_small) {
        double res = isotropy_consistency_residual(sc, psi, psi_s, s, c, cfg.tolerance_zero);
        rg.isotropy_consistency_max = std::max(rg.isotropy_consistency_max, std::abs(res));
      }

      if (k_ast) {
        RigidityResiduals rr = rigidity_chain_residuals(ctx.profile, r, s, k_ast);
        rg.hash_max = std::max(rg.hash_max, std::abs(rr.hash));
        rg.two_star_max = std::max(rg.two_star_max, std::abs(rr.two_star));
        rg.two_hash_max = std::max(rg.two_hash_max, std::abs(rr.two_hash));
        double star = star_residual(ctx.profile, r, s, k_ast);
        rg.star_max = std::max(rg.star_max, std::abs(star));
        double hash_s = hash_s_derivative(ctx.profile, r, s, k_ast);
        rg.star_identity_max = std::max(rg.star_identity_max, std::abs(star - hash_s));
      }
    }
  }
  rg.isotropy_consistency_applicable = q_small;
  rg.have_k_chain = static_cast<bool>(k_ast);

  RiemannCheck rc = is_riemannian(ctx.metric, ctx.samples);
  rg.riemannian = rc.riemannian;
  rg.riemann_third_max = rc.max_third;

  rg.degenerate_2c_minus_k1 = std::abs(2.0 * c - k1) <= 1e-6;

  // Premises: projectively + dually flat (pfdf at k1) and isotropic E.
  double pfdf_max = 0.0;
  for (const EvaluationPoint& p : ctx.samples) {
    double scale = 0.0;
    pfdf_max = std::max(pfdf_max, rel(max_abs(pfdf_residual(ctx.metric, p, k1, &scale)), scale));
  }
  bool premise_pfdf = pfdf_max <= cfg.tolerance_zero;
  bool premise_iso = true;
  for (double d : report.isotropy->c_deviations) premise_iso = premise_iso && d <= cfg.tolerance_zero;

  if (rg.degenerate_2c_minus_k1) {
    rg.chain_consistent = true;
    rg.chain_note = "degenerate: 2c - k1 ~ 0; the rigidity derivation divides by 2c - k1";
  } else if (premise_pfdf && premise_iso) {
    rg.chain_consistent = rg.riemannian;
    rg.chain_note = rg.riemannian
                        ? "premises hold and the metric is Riemannian"
                        : "VIOLATION: premises hold, 2c - k1 nonzero, metric not Riemannian";
  } else {
    rg.chain_consistent = true;
    rg.chain_note = "premises do not hold; conclusion not forced";
  }

  bool have_riemann_flag = false;
  for (const auto& f : report.flags) have_riemann_flag = have_riemann_flag || f.flag == "riemannian";
  if (!have_riemann_flag) {
    std::vector<double> per_sample;
    per_sample.reserve(ctx.samples.size());
    for (const EvaluationPoint& p : ctx.samples) {
      RiemannCheck one = is_riemannian(ctx.metric, std::span<const EvaluationPoint>(&p, 1));
      per_sample.push_back(one.max_third / one.scale);
    }
    report.flags.push_back(make_flag("riemannian", per_sample, ctx.samples, cfg));
  }

  report.rigidity = rg;
}

}  // namespace

Report run_suites(const RunConfig& config, const SuiteOptions& options) {
  Report report;
  report.tool_name = kToolName;
  report.tool_version = kToolVersion;
  report.config = config;

  PsiProfile profile = profile_from_config(config);
  std::array<double, 2> rr = effective_r_range(profile, config.r_range);
  check_profile_positive(profile, rr[0], rr[1]);

  SuiteContext ctx{config,
                   options,
                   profile,
                   ProfileMetric(profile, config.n),
                   draw_samples(profile, config.n, config.samples, config.seed, config.r_range,
                                config.u_range),
                   rr,
                   classify_r_grid(rr)};

  for (const std::string& suite : config.suites) {
    report.suites_run.push_back(suite);
    if (suite == "classify") run_classify(ctx, report);
    else if (suite == "validate") run_validate(ctx, report);
    else if (suite == "rigidity") run_rigidity(ctx, report);
  }

  bool all_ok = true;
  for (const auto& f : report.flags) all_ok = all_ok && f.verdict == "holds";
  for (const auto& row : report.cross_validation) all_ok = all_ok && row.pass;
  if (report.rigidity.ran) all_ok = all_ok && report.rigidity.chain_consistent;
  report.exit_code = all_ok ? 0 : 1;
  return report;
}

}  // namespace finslab
