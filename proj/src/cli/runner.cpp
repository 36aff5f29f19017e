#include "nsblow/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "nsblow/audit/audit.hpp"
#include "nsblow/stokes/picard.hpp"

namespace nsblow::cli {

namespace {

/// Runs a suite body, converting an evaluator failure into a failing audit
/// instead of aborting the whole run.
template <typename Fn>
void guarded(ReportBundle& bundle, const std::string& suite, Fn&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        bundle.record(suite + "-error", false, 0.0, e.what());
    }
}

void fill_series(ReportTable& table, const audit::NormSeries& s) {
    for (std::size_t i = 0; i < s.t.size(); ++i)
        table.rows.push_back({static_cast<int>(i), s.t[i], s.value[i],
                              i < s.error.size() ? s.error[i] : 0.0,
                              i < s.tail.size() ? s.tail[i] : 0.0});
}

heat::ForcingProfile profile_of(const ExperimentConfig& cfg) {
    return heat::make_profile(cfg.variant_enum(), cfg.T, cfg.delta);
}

}  // namespace

void run_heat(const ExperimentConfig& cfg, ReportBundle& bundle) {
    guarded(bundle, "heat", [&] {
        // 1e-8 certificate: ample headroom under the audit thresholds, and
        // the refinement pass stays convergent next to the logarithmic kink
        heat::HeatSolutionEvaluator ev(profile_of(cfg), 1e-8);
        TimeLadder ladder = make_time_ladder(cfg.T, cfg.k_max);

        ReportTable& tb = bundle.table("blowup_fit");
        for (std::size_t k = 0; k < ladder.levels.size(); ++k) {
            double t = ladder.levels[k];
            tb.rows.push_back({static_cast<int>(k), t, ev.radial(0.0, t).u,
                               ev.tol(), 0.0});
        }

        // the rate fit needs at least 7 ladder levels; deepen if necessary
        TimeLadder fit_ladder =
            make_time_ladder(cfg.T, std::max(cfg.k_max, 6));
        bool has_log = ev.forcing().has_log();
        audit::RateFit fit = audit::blowup_fit(
            [&](double t) { return ev.radial(0.0, t).u; }, fit_ladder,
            has_log ? audit::RateModel::LogLog : audit::RateModel::Log);
        bundle.record("heat-blowup-rate", fit.monotone && fit.lower_const > 0,
                      fit.lower_const,
                      has_log ? "ln ln growth of h1(0, t_k)"
                              : "ln growth of h1(0, t_k)");

        // keep the check points a few fd steps away from the final time so
        // the centered differences see the solution scale
        double t_hi = cfg.T * (1.0 - std::pow(2.0, -6.0));
        auto cloud = audit::sample_cloud(cfg.seed, 40, 3.0, cfg.T * 0.3, t_hi,
                                         cfg.T);
        heat::ResidualReport rr = heat::heat_residual(ev, cloud, 0.02, 5e-4);
        bundle.record("heat-residual", rr.max_relative < 1e-3,
                      rr.max_relative,
                      "max relative defect of the forced heat equation");
    });
}

void run_velocity(const ExperimentConfig& cfg, ReportBundle& bundle) {
    guarded(bundle, "velocity", [&] {
        heat::HeatSolutionEvaluator ev(profile_of(cfg));
        potential::VelocityField vf(ev);
        TimeLadder ladder = make_time_ladder(cfg.T, cfg.k_max);
        SampleGrid grid = make_sample_grid(cfg.grid_L, cfg.grid_n);

        if (cfg.audit_energy) {
            audit::EnergyReport er = audit::energy_report(vf, ladder, grid);
            ReportTable& tv = bundle.table("energy_velocity");
            ReportTable& th = bundle.table("energy_scalar");
            for (std::size_t i = 0; i < er.t.size(); ++i) {
                tv.rows.push_back({static_cast<int>(i + 1), er.t[i],
                                   er.v_l2[i], 0.0, er.v_dissipation[i]});
                th.rows.push_back({static_cast<int>(i + 1), er.t[i],
                                   er.h_l2[i], 0.0, er.h_dissipation[i]});
            }
            bool finite = true;
            for (double v : er.v_l2) finite = finite && std::isfinite(v);
            for (double v : er.v_dissipation)
                finite = finite && std::isfinite(v);
            bundle.record("energy-finite", finite,
                          er.v_l2.empty() ? 0.0 : er.v_l2.back(),
                          "L2 norms and cumulative dissipation stay finite");
        }

        if (cfg.audit_criticality) {
            audit::NormSeries cn = audit::critical_norm_report(
                [&](const Vec3& x, double t) {
                    return potential::force_assemble(vf, x, t);
                },
                ladder, grid, 1.5, 6.0);
            fill_series(bundle.table("critical_norm"), cn);
            // the series follows the full ladder; t_4 is the reference level
            std::size_t ref = std::min<std::size_t>(
                4, cn.value.empty() ? 0 : cn.value.size() - 1);
            double sup = 0.0;
            for (double v : cn.value) sup = std::max(sup, v);
            double ratio = cn.value.empty() ? 0.0 : sup / cn.value[ref];
            bundle.record("critical-norm-uniform", ratio <= 1.5, ratio,
                          "sup_k ||F(., t_k)||_{3/2} / early-level norm");
        }

        auto cloud = audit::sample_cloud(cfg.seed + 1, 24, 2.5, cfg.T * 0.5,
                                         ladder.levels.back(), cfg.T);
        potential::NsResidualReport nr = potential::ns_residual(
            vf, cloud,
            [&](const Vec3& x, double t) {
                return potential::force_assemble(vf, x, t);
            },
            true, 0.01);
        bundle.record("momentum-residual", nr.max_relative < 1e-2,
                      nr.max_relative,
                      "max relative defect of the momentum equation");
    });
}

void run_audit(const ExperimentConfig& cfg, ReportBundle& bundle) {
    guarded(bundle, "audit", [&] {
        heat::HeatSolutionEvaluator ev(profile_of(cfg));
        potential::VelocityField vf(ev);
        TimeLadder ladder = make_time_ladder(cfg.T, cfg.k_max);
        double t_hi = ladder.levels.back();

        if (cfg.audit_bounds) {
            auto cloud = audit::sample_cloud(cfg.seed, 200, 6.0, cfg.T * 0.5,
                                             t_hi, cfg.T);
            ReportTable& tb = bundle.table("bound_audits");
            const std::pair<audit::BoundId, const char*> ids[] = {
                {audit::BoundId::SolutionDecay, "solution-decay"},
                {audit::BoundId::GradientDecay, "gradient-decay"},
                {audit::BoundId::HessianDecay, "hessian-decay"},
                {audit::BoundId::VelocityDecay, "velocity-decay"},
                {audit::BoundId::VelocityGradientDecay,
                 "velocity-gradient-decay"},
            };
            int row = 0;
            for (const auto& [id, name] : ids) {
                audit::BoundAudit ba = audit::bound_audit(vf, id, cloud);
                tb.rows.push_back(
                    {row++, 0.0, ba.fitted_C, ba.worst_margin, ba.fitted_c});
                bundle.record(std::string("bound-") + name, ba.pass,
                              ba.worst_margin,
                              "held-out envelope margin, fitted C = " +
                                  std::to_string(ba.fitted_C));
            }

            // small-amplitude linear flow: envelopes plus delta-linearity
            auto small_cloud = audit::sample_cloud(
                cfg.seed + 2, 120, 6.0, cfg.T * 0.5, t_hi, cfg.T);
            double c1 = 0.0, c2 = 0.0;
            for (double mult : {1.0, 2.0}) {
                heat::HeatSolutionEvaluator evs(heat::make_profile(
                    heat::Variant::ScaledLogB, cfg.T, cfg.delta * mult));
                potential::VelocityField vfs(evs);
                for (auto [id, name] :
                     {std::pair{audit::BoundId::StokesDecay, "stokes-decay"},
                      std::pair{audit::BoundId::StokesGradientDecay,
                                "stokes-gradient-decay"}}) {
                    audit::BoundAudit ba =
                        audit::bound_audit(vfs, id, small_cloud);
                    if (mult == 1.0) {
                        tb.rows.push_back({row++, 0.0, ba.fitted_C,
                                           ba.worst_margin, ba.fitted_c});
                        bundle.record(std::string("bound-") + name, ba.pass,
                                      ba.worst_margin,
                                      "held-out envelope margin, fitted C = " +
                                          std::to_string(ba.fitted_C));
                        if (id == audit::BoundId::StokesDecay)
                            c1 = ba.fitted_C;
                    } else if (id == audit::BoundId::StokesDecay) {
                        c2 = ba.fitted_C;
                    }
                }
            }
            double ratio = c1 > 0.0 ? c2 / c1 : 0.0;
            bundle.record("linear-flow-delta-linearity",
                          std::abs(ratio - 2.0) <= 0.2, ratio,
                          "fitted C at 2*delta over fitted C at delta");
        }

        if (cfg.audit_symmetry) {
            auto cloud = audit::sample_cloud(cfg.seed + 3, 50, 4.0,
                                             cfg.T * 0.75, cfg.T * 0.75,
                                             cfg.T);
            std::vector<Vec3> pts;
            for (const auto& p : cloud) pts.push_back(p.x);
            audit::SymmetryReport sr =
                audit::symmetry_check(ev, cfg.T * 0.75, pts);
            bundle.record("symmetry-permutation", sr.perm_defect < 1e-6,
                          sr.perm_defect,
                          "index-swap identity of the second potentials");
            bundle.record("symmetry-sum", sr.sum_defect < 1e-4, sr.sum_defect,
                          "three pair-sums against -2 h1");
        }
    });
}

void run_picard(const ExperimentConfig& cfg, ReportBundle& bundle) {
    guarded(bundle, "picard", [&] {
        heat::HeatSolutionEvaluator ev(
            heat::make_profile(heat::Variant::CriticalLogB, cfg.T));
        potential::VelocityField base(ev);

        stokes::PicardOptions opt;
        opt.n = std::min(cfg.grid_n, 48);
        opt.k_max = std::min(cfg.k_max, 8);
        opt.tol = cfg.tol;
        stokes::PicardSolver solver(base, cfg.delta, opt);
        stokes::PicardTrace trace = solver.solve();

        ReportTable& tb = bundle.table("picard_trace");
        for (std::size_t m = 0; m < trace.x_norms.size(); ++m)
            tb.rows.push_back({static_cast<int>(m), 0.0, trace.x_norms[m],
                               m < trace.diffs.size() ? trace.diffs[m] : 0.0,
                               m < trace.ratios.size() ? trace.ratios[m]
                                                       : 0.0});

        const auto& st = trace.state;
        bundle.record("picard-converged", st.converged,
                      static_cast<double>(st.iterations),
                      "iterations to the fixed point");
        bundle.record("picard-contained", st.contained, st.x_norm,
                      "every iterate within eta = " + std::to_string(st.eta));
        bundle.record("picard-contracting", st.contracting,
                      st.contraction_ratio, "worst empirical ratio");
        bundle.record("picard-residual", st.residual < 2.0 * opt.tol,
                      st.residual, "x_norm(u - M u) against 2 tol");

        // quadratic amplitude scaling of the first iterate
        stokes::PicardOptions small = opt;
        small.n = std::min(small.n, 32);
        small.k_max = std::min(small.k_max, 6);
        stokes::PicardSolver s1(base, cfg.delta, small);
        stokes::PicardSolver s2(base, 2.0 * cfg.delta, small);
        double q = s1.x_norm(s1.map({})) > 0.0
                       ? s2.x_norm(s2.map({})) / s1.x_norm(s1.map({}))
                       : 0.0;
        bundle.record("picard-quadratic-scaling", std::abs(q - 4.0) <= 0.4, q,
                      "x_norm(M 0; 2 delta) / x_norm(M 0; delta)");

        stokes::DeltaSearchResult ds = stokes::delta0_search(
            base, {4.0 * cfg.delta, 2.0 * cfg.delta, cfg.delta,
                   0.5 * cfg.delta},
            small);
        ReportTable& td = bundle.table("delta_search");
        int row = 0;
        bool monotone = true;
        for (const auto& [d, pass] : ds.trials) {
            td.rows.push_back({row++, 0.0, d, 0.0, pass ? 1.0 : 0.0});
            if (d <= ds.delta_hat && !pass) monotone = false;
        }
        bundle.record("delta-search", ds.delta_hat > 0.0 && monotone,
                      ds.delta_hat, "largest passing amplitude");

        if (st.converged) {
            double res = solver.nse_residual(
                solver.fixed_point(), {0.75 * cfg.T, 0.9 * cfg.T}, 3.0);
            bundle.record("assembled-momentum-residual", res < 1e-2, res,
                          "relative defect of the perturbed momentum "
                          "equation for Z + u");
        }
    });
}

void run_baseline(const ExperimentConfig& cfg, ReportBundle& bundle) {
    guarded(bundle, "baseline", [&] {
        TimeLadder ladder = make_time_ladder(1.0, std::max(cfg.k_max, 8));
        SampleGrid unit = make_sample_grid(1.2, std::min(cfg.grid_n, 48));
        audit::BaselineReport br = audit::baseline_supercritical(ladder, unit);

        ReportTable& tb = bundle.table("baseline_norms");
        for (std::size_t i = 0; i < br.t.size(); ++i)
            tb.rows.push_back({static_cast<int>(i), br.t[i], br.norm_32[i],
                               br.ratio_log[i], br.norm_14[i]});

        double lo = 1e300, hi = 0.0, lo14 = 1e300, hi14 = 0.0;
        for (std::size_t i = 0; i < br.t.size(); ++i) {
            if (static_cast<int>(i) < 6) continue;
            lo = std::min(lo, br.ratio_log[i]);
            hi = std::max(hi, br.ratio_log[i]);
            lo14 = std::min(lo14, br.norm_14[i]);
            hi14 = std::max(hi14, br.norm_14[i]);
        }
        bundle.record("baseline-log-growth", hi <= lo * 1.15, hi / lo,
                      "spread of ||F||_{3/2} / ln(1/(1-t_k))");
        bundle.record("baseline-subnorm-bounded", hi14 <= 2.0 * lo14,
                      hi14 / lo14, "spread of ||F||_{1.4}");
        bundle.record("baseline-divergence-free", br.div_defect < 1e-6,
                      br.div_defect, "finite-difference divergence of v");
    });
}

int run(const std::string& subcommand, const ExperimentConfig& cfg,
        ReportBundle& bundle) {
    if (subcommand == "heat") run_heat(cfg, bundle);
    else if (subcommand == "velocity") run_velocity(cfg, bundle);
    else if (subcommand == "audit") run_audit(cfg, bundle);
    else if (subcommand == "picard") run_picard(cfg, bundle);
    else if (subcommand == "baseline") run_baseline(cfg, bundle);
    else if (subcommand == "all") {
        run_heat(cfg, bundle);
        run_velocity(cfg, bundle);
        run_audit(cfg, bundle);
        run_picard(cfg, bundle);
        run_baseline(cfg, bundle);
    } else {
        throw ConfigError("unknown subcommand: " + subcommand);
    }
    emit_csv(bundle, cfg.out);
    emit_structured(bundle, cfg, cfg.out);
    return bundle.all_pass() ? 0 : 1;
}

}  // namespace nsblow::cli
