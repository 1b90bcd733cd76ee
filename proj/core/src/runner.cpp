#include "psk/runner.hpp"

#include <cmath>

#include "psk/spectrum.hpp"
#include "psk/tanno.hpp"
#include "psk/variation.hpp"
#include "psk/version.hpp"

namespace psk {

namespace {

RunReport make_report(const RunConfig& cfg, const std::string& command)
{
    RunReport rep;
    rep.engine_version = kEngineVersion;
    rep.command = command;
    rep.seed = cfg.seed;
    rep.config_echo = cfg.echo;
    return rep;
}

ContactTolerances tolerances(const RunConfig& cfg)
{
    ContactTolerances tol;
    tol.scale = cfg.tolerance_scale;
    return tol;
}

std::string fmt(double v)
{
    char buf[40];
    snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void eta_einstein_records(RunReport& rep, const std::string& prefix, const AmbientStructure& S,
                          const EtaEinsteinFit& fit, double scale)
{
    rep.add_info(prefix + "/eta-einstein-A", fmt(fit.A));
    rep.add_info(prefix + "/eta-einstein-B", fmt(fit.B));
    rep.add_info(prefix + "/eta-einstein-residual", fmt(fit.residual));
    if (fit.eta_einstein)
        rep.add_record(prefix + "/eta-einstein-relation", "B = 2n - eps A",
                       std::abs(fit.B - (2.0 * S.n - S.eps * fit.A)), 1e-6 * scale);
    if (S.eta_einstein_ab)
        rep.add_record(prefix + "/eta-einstein-declared", "fitted A matches the declared constant",
                       std::abs(fit.A - S.eta_einstein_ab->first), 1e-5 * scale);
}

SpectrumOptions spectrum_options(const RunConfig& cfg)
{
    SpectrumOptions opts;
    opts.k = cfg.spectrum_k;
    opts.resolution = cfg.spectrum_resolution;
    return opts;
}

void spectrum_records(RunReport& rep, const std::string& prefix, const SpectrumResult& sp,
                      double scale)
{
    rep.add_record(prefix + "/lambda0", "lambda_0 = 0 on closed L", std::abs(sp.eigenvalues.at(0)),
                   1e-8 * scale);
    double mono = 0.0;
    for (size_t i = 1; i < sp.eigenvalues.size(); ++i)
        mono = std::max(mono, std::max(0.0, sp.eigenvalues[i - 1] - sp.eigenvalues[i]));
    rep.add_record(prefix + "/monotone", "eigenvalues nondecreasing", mono, 1e-12);
    rep.add_record(prefix + "/grid-settled", "relative lambda_1 movement under refinement < 1%",
                   sp.estimated_error * 3.0 / std::max(1e-300, sp.lambda1()), 1e-2);

    Table t;
    t.name = "eigenvalues";
    t.columns = {"k", "lambda"};
    for (size_t i = 0; i < sp.eigenvalues.size(); ++i)
        t.rows.push_back({static_cast<double>(i), sp.eigenvalues[i]});
    rep.tables.push_back(std::move(t));
}

} // namespace

RunReport run_verify(const RunConfig& cfg)
{
    RunReport rep = make_report(cfg, "verify");
    const ContactTolerances tol = tolerances(cfg);
    const AmbientStructure S = build_ambient(cfg);
    rep.add_info("ambient", S.name);

    Rng rng(cfg.seed + 1);
    const auto pts = sample_points(S, cfg.sample_count, rng);

    rep.add_report("verify", verify_sasakian(S, pts, tol));
    rep.add_report("curvature", curvature_identity_suite(S, pts, tol));

    const EtaEinsteinFit fit = eta_einstein_constants(S, pts);
    eta_einstein_records(rep, "verify", S, fit, cfg.tolerance_scale);

    if (cfg.has_immersion()) {
        const Immersion f = build_immersion(cfg);
        const double defect = legendrian_defect(f, S);
        rep.add_record("immersion/legendrian-defect", "max |eta(df)| = 0 over nodes", defect,
                       1e-6 * cfg.tolerance_scale);
        if (defect <= 1e-6 * cfg.tolerance_scale && cfg.run_legendrian_checks) {
            const InducedGeometry geom = induced_geometry(f, S);
            rep.add_info("immersion/volume", fmt(geom.volume));
            rep.add_info("immersion/max-mean-curvature", fmt(geom.max_mean_curvature));
            rep.add_report("immersion", induced_invariants(geom, rng, tol));
            rep.add_report("immersion", gauss_equation_check(geom, rng));
            rep.add_report("immersion", trace_curvature_check(geom, rng));
        }
    } else if (cfg.run_legendrian_checks && !cfg.potentials.empty()) {
        throw ValidationError("immersion", "potentials given but no immersion to apply them to");
    }
    return rep;
}

RunReport run_second_variation(const RunConfig& cfg)
{
    RunReport rep = make_report(cfg, "second-variation");
    const AmbientStructure S = build_ambient(cfg);
    const Immersion f = build_immersion(cfg);
    if (cfg.potentials.empty()) throw ValidationError("potentials", "second-variation needs at least one");
    rep.add_info("ambient", S.name);
    rep.add_info("immersion", f.name);

    Rng rng(cfg.seed + 1);
    const auto pts = sample_points(S, cfg.sample_count, rng);
    const EtaEinsteinFit fit = eta_einstein_constants(S, pts);
    eta_einstein_records(rep, "ambient", S, fit, cfg.tolerance_scale);

    const double defect = legendrian_defect(f, S);
    rep.add_record("immersion/legendrian-defect", "max |eta(df)| = 0 over nodes", defect,
                   1e-6 * cfg.tolerance_scale);

    const InducedGeometry geom = induced_geometry(f, S);
    const VariationContext ctx(geom, fit);
    rep.add_info("volume", fmt(geom.volume));

    SecondVariationOptions opts;
    opts.h_t = cfg.h_t;
    opts.flow.t_max = cfg.flow_t_max;

    Table table;
    table.name = "variation";
    table.columns = {"potential", "vol0",       "first_closed", "first_fd",  "second_closed",
                     "second_trace", "second_short", "second_fd",    "fd_order",  "lmin_defect",
                     "flow_defect",  "stability_sign"};

    const auto uvars = default_variables(f.n, "u");
    for (size_t pi = 0; pi < cfg.potentials.size(); ++pi) {
        const std::string tag = "potential" + std::to_string(pi);
        DeformationPotential pot{parse_expr(cfg.potentials[pi], uvars)};
        const VariationReport vr = second_variation(ctx, pot, opts);

        rep.add_record(tag + "/fd-agreement", "|closed - fd| / (1+|fd|) for d2 vol/dt2",
                       vr.resid_closed_vs_fd, 1e-3 * cfg.tolerance_scale);
        rep.add_record(tag + "/trace-agreement", "closed form vs frame-trace form",
                       vr.resid_closed_vs_trace, 1e-5 * cfg.tolerance_scale);
        if (vr.second_short)
            rep.add_record(tag + "/short-agreement", "closed form vs eta-Einstein short form",
                           vr.resid_closed_vs_short, 1e-5 * cfg.tolerance_scale);
        rep.add_record(tag + "/fd-order", "measured FD convergence order consistent with >= 2",
                       std::max(0.0, 2.0 - vr.fd_order), 0.1);
        rep.add_record(tag + "/flow-defect", "Legendrian defect of the flow", vr.flow_defect_max,
                       1e-6 * (1.0 + opts.flow.t_max) * cfg.tolerance_scale);
        rep.add_record(tag + "/first-agreement", "first variation closed vs fd", vr.first.residual,
                       1e-4 * cfg.tolerance_scale);
        rep.add_record(tag + "/bochner", "int (Lap f)^2 = int (Ric(grad f, grad f) + |Hess f|^2)",
                       bochner_check(geom, pot), 1e-5 * cfg.tolerance_scale);

        table.rows.push_back({static_cast<double>(pi), vr.vol0, vr.first.closed_form,
                              vr.first.fd_oracle, vr.second_closed, vr.second_trace,
                              vr.second_short.value_or(std::nan("")), vr.second_fd, vr.fd_order,
                              vr.lmin_defect, vr.flow_defect_max,
                              static_cast<double>(vr.stability_sign)});
    }
    rep.tables.push_back(std::move(table));

    if (fit.eta_einstein && f.closed()) {
        const SpectrumResult sp = laplace_spectrum(geom, spectrum_options(cfg));
        spectrum_records(rep, "spectrum", sp, cfg.tolerance_scale);
        const StabilityVerdict v = stability_verdict(sp.lambda1(), fit.A, S.eps);
        rep.add_info("stability/lambda1", fmt(sp.lambda1()));
        rep.add_info("stability/threshold", fmt(v.threshold));
        rep.add_info("stability/verdict", verdict_string(v));
    }
    return rep;
}

RunReport run_tanno(const RunConfig& cfg)
{
    RunReport rep = make_report(cfg, "tanno");
    const ContactTolerances tol = tolerances(cfg);
    const AmbientStructure S = build_ambient(cfg);
    if (cfg.alphas.empty()) throw ValidationError("alphas", "tanno needs at least one alpha");
    rep.add_info("ambient", S.name);

    Rng rng(cfg.seed + 1);
    const auto pts = sample_points(S, cfg.sample_count, rng);
    const EtaEinsteinFit fit_src = eta_einstein_constants(S, pts);
    eta_einstein_records(rep, "source", S, fit_src, cfg.tolerance_scale);

    Table table;
    table.name = "tanno";
    table.columns = {"alpha", "A_source", "A_formula", "A_fitted", "B_fitted"};

    for (double alpha : cfg.alphas) {
        const std::string tag = "alpha" + fmt(alpha);
        const TannoDeformation T = deform(S, alpha);

        Rng rng_t(cfg.seed + 2);
        const auto pts_t = sample_points(T.target, cfg.sample_count, rng_t);

        rep.add_report(tag, tanno_invariants(T, pts_t, tol));
        rep.add_report(tag + "/suite", verify_sasakian(T.target, pts_t, tol));
        rep.add_report(tag + "/suite", curvature_identity_suite(T.target, pts_t, tol));
        rep.add_report(tag, connection_difference_check(T, pts_t, tol));
        rep.add_report(tag, curvature_relation_check(T, pts_t, rng_t, 1e-4 * cfg.tolerance_scale));

        const EtaEinsteinFit fit_tgt = eta_einstein_constants(T.target, pts_t);
        eta_einstein_records(rep, tag, T.target, fit_tgt, cfg.tolerance_scale);
        double map_resid = std::nan("");
        if (fit_src.eta_einstein) {
            const double A_formula = einstein_constant_map(fit_src.A, alpha);
            map_resid = std::abs(fit_tgt.A - A_formula);
            rep.add_record(tag + "/einstein-constant-map", "fitted A~ = (A+2)/alpha + 2", map_resid,
                           1e-5 * cfg.tolerance_scale);
            table.rows.push_back({alpha, fit_src.A, A_formula, fit_tgt.A, fit_tgt.B});
        } else {
            table.rows.push_back({alpha, fit_src.A, std::nan(""), fit_tgt.A, fit_tgt.B});
        }

        if (cfg.has_immersion()) {
            const Immersion f = build_immersion(cfg);
            const MinimalityPreservation mp = minimality_preservation_check(f, T);
            rep.add_record(tag + "/homothety", "induced g~|_L = alpha g|_L", mp.homothety_residual,
                           1e-9 * cfg.tolerance_scale);
            rep.add_record(tag + "/tangential-connection", "nabla~ = nabla along Legendrian L",
                           mp.tangential_connection_residual, 1e-6 * cfg.tolerance_scale);
            rep.add_record(tag + "/minimality-preserved", "minimal in g iff minimal in g~",
                           mp.same_verdict ? 0.0 : 1.0, 0.5);
            rep.add_info(tag + "/max-H-source", fmt(mp.source_mean_curvature));
            rep.add_info(tag + "/max-H-target", fmt(mp.target_mean_curvature));

            if (f.closed() && fit_src.eta_einstein) {
                const StabilityEquivalence se = stability_equivalence_check(f, T, spectrum_options(cfg));
                rep.add_record(tag + "/eigenvalue-scaling", "lambda~_1 = lambda_1 / alpha",
                               se.eigenvalue_scaling_residual, 1e-6 * cfg.tolerance_scale);
                rep.add_record(tag + "/stability-equivalence",
                               "L-stable in g iff L-stable in g~", se.agree ? 0.0 : 1.0, 0.5);
                rep.add_info(tag + "/verdict-source", verdict_string(se.source));
                rep.add_info(tag + "/verdict-target", verdict_string(se.target));
                rep.add_info(tag + "/lambda1-source", fmt(se.lambda1_source));
                rep.add_info(tag + "/lambda1-target", fmt(se.lambda1_target));
            }
        }
    }
    rep.tables.push_back(std::move(table));
    return rep;
}

RunReport run_spectrum(const RunConfig& cfg)
{
    RunReport rep = make_report(cfg, "spectrum");
    const AmbientStructure S = build_ambient(cfg);
    const Immersion f = build_immersion(cfg);
    rep.add_info("ambient", S.name);
    rep.add_info("immersion", f.name);

    const InducedGeometry geom = induced_geometry(f, S);
    const SpectrumResult sp = laplace_spectrum(geom, spectrum_options(cfg));
    spectrum_records(rep, "spectrum", sp, cfg.tolerance_scale);
    rep.add_info("method", sp.method);

    Rng rng(cfg.seed + 1);
    const auto pts = sample_points(S, cfg.sample_count, rng);
    const EtaEinsteinFit fit = eta_einstein_constants(S, pts);
    eta_einstein_records(rep, "ambient", S, fit, cfg.tolerance_scale);
    if (fit.eta_einstein) {
        const StabilityVerdict v = stability_verdict(sp.lambda1(), fit.A, S.eps);
        rep.add_info("stability/lambda1", fmt(sp.lambda1()));
        rep.add_info("stability/threshold", fmt(v.threshold));
        rep.add_info("stability/verdict", verdict_string(v));
    }
    return rep;
}

} // namespace psk
