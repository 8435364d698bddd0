use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::Result;
use ghmtq::expr::ExprField;
use ghmtq::geometry::{frame_geometry, CoframeField, FrameGeometry, LowerTriangular, Signature};
use ghmtq::ghm::{conservation_residual, energy_momentum, field_eq_residual, lagrangian_density};
use ghmtq::quantization::{
    euler_number, regularity_scan, spectrum_search, synthetic_control, synthetic_control_loop, GridSpec, ParamPoint,
    PointSample, SpectrumConfig, SpectrumReport,
};
use ghmtq::solutions::{
    curzon_kappa, integrability_defect, oracle_sample, reconstruct_potential, Family, FamilyFrame, FamilyMetric,
};
use ghmtq::tolerances::{rel_err, Tolerances};
use ghmtq::{Point2, ScalarField2};
use serde_json::json;

use crate::config::{build_family, ConfigError, FrameChoice, RunConfig, ScanSection};
use crate::report::{Check, Report, Status, Worst};

/// Relative error, or the absolute value when the reference vanishes.
fn oracle_err(pipeline: f64, closed: f64) -> f64 {
    if closed == 0.0 {
        pipeline.abs()
    } else {
        rel_err(pipeline, closed)
    }
}

/// `|a - b|` relative to `max(|a|, |b|, 1)`.
fn scaled_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn frames(cfg: &RunConfig, family: &Arc<dyn Family>) -> Result<Arc<dyn CoframeField>, ConfigError> {
    let family_frame = match cfg.frame {
        FrameChoice::Auto => family.has_family_frame(),
        FrameChoice::Family if !family.has_family_frame() => {
            return Err(ConfigError(format!("family '{}' has no closed-form frame", cfg.family)))
        }
        FrameChoice::Family => true,
        FrameChoice::LowerTriangular => false,
    };
    Ok(if family_frame {
        Arc::new(FamilyFrame(family.clone()))
    } else {
        Arc::new(LowerTriangular::new(FamilyMetric(family.clone()), family.signature()))
    })
}

fn report(command: &str, cfg: &RunConfig, checks: Vec<Check>, outputs: Vec<String>, details: serde_json::Value) -> Result<Report> {
    Ok(Report { command: command.into(), config: serde_json::to_value(cfg)?, checks, outputs, details })
}

/// Residual checks hold only for solutions; off shell they are reported.
fn shell(c: Check, on_shell: bool) -> Check {
    if on_shell {
        c
    } else {
        c.informational()
    }
}

pub fn verify(cfg: &RunConfig) -> Result<Report> {
    let family = cfg.build_family()?;
    let grid = cfg.grid()?;
    let frames = frames(cfg, &family)?;
    let tol = &cfg.tolerances;
    let section = cfg.verify.clone().unwrap_or_default();
    let on_shell = section.on_shell.unwrap_or(cfg.family != "gowdy_avtd");
    let pts = grid.points();
    let mut checks = Vec::new();

    // families whose induced metric has rank 1 have no frame geometry at all
    if let Some(p) = pts.first() {
        if let Err(e @ ghmtq::Error::Unsupported(_)) = family.metric(*p).and_then(|h| frames.coframe(*p).map(|_| h)) {
            checks.push(Check::info("frame_geometry", None, format!("not applicable: {e}")));
            return finish_verify(cfg, family, &grid, pts, checks, tol, section, on_shell);
        }
    }
    let mut repro = Worst::default();
    let mut geometry: Vec<(Point2, ghmtq::Result<FrameGeometry>)> = Vec::with_capacity(pts.len());
    for &p in &pts {
        repro.push(p, (|| -> ghmtq::Result<f64> { Ok(frames.coframe(p)?.reproduction_defect(&family.metric(p)?, family.signature())) })());
        geometry.push((p, frame_geometry(frames.as_ref(), p)));
    }
    checks.push(repro.check("frame_reproduction", tol.frame, "coframe against the metric, relative"));

    let failed = geometry.iter().filter(|(_, g)| g.is_err()).count();
    let first = geometry.iter().find_map(|(_, g)| g.as_ref().err().map(|e| e.to_string()));
    checks.push(Check::info(
        "frame_coverage",
        Some(failed as f64),
        match first {
            Some(e) => format!("{failed} of {} grid points without a frame, first: {e}", pts.len()),
            None => format!("frame built at all {} grid points", pts.len()),
        },
    ));

    let mut omega = Worst::default();
    for (p, g) in &geometry {
        if let Ok(g) = g {
            let w = g.connection.frame;
            omega.value(*p, w[0].abs().max(w[1].abs()).max(g.curvature.f.abs()));
        }
    }
    if cfg.family == "schwarzschild" {
        let mut c = omega.check("connection_identically_zero", tol.zero_connection, "max of |omega_a| and |F|");
        c.note = if c.status == Status::Pass {
            format!("connection identically zero; {}", c.note)
        } else {
            format!("connection does not vanish; {}", c.note)
        };
        checks.push(c);
    } else if omega.evaluated > 0 {
        checks.push(Check::info("max_connection", Some(omega.value), "max of |omega_a| and |F| over the grid"));
    }

    let mut conn = Worst::default();
    let mut curv = Worst::default();
    let mut ricci = Worst::default();
    let (mut has_conn, mut has_curv, mut has_ricci) = (false, false, false);
    for &p in &pts {
        match oracle_sample(family.as_ref(), p) {
            Ok(s) => {
                if let Some(c) = s.closed_omega {
                    has_conn = true;
                    conn.value(p, oracle_err(s.omega[0], c[0]).max(oracle_err(s.omega[1], c[1])));
                }
                if let Some(c) = s.closed_f {
                    has_curv = true;
                    curv.value(p, oracle_err(s.f, c));
                }
                if let Some(c) = s.closed_r {
                    has_ricci = true;
                    ricci.value(p, oracle_err(s.r, c));
                }
            }
            Err(e) => {
                for w in [&mut conn, &mut curv, &mut ricci] {
                    w.push(p, Err(&e));
                }
            }
        }
    }
    let note = "pipeline in the family frame against the closed form";
    if has_conn {
        checks.push(conn.check("closed_form_connection", tol.oracle, note));
    }
    if has_curv {
        checks.push(curv.check("closed_form_curvature", tol.oracle, note));
    }
    if has_ricci {
        checks.push(ricci.check("closed_form_ricci", tol.oracle, note));
    }
    finish_verify(cfg, family, &grid, pts, checks, tol, section, on_shell)
}

/// Checks that need the field-theory structure rather than the frame.
#[allow(clippy::too_many_arguments)]
fn finish_verify(
    cfg: &RunConfig,
    family: Arc<dyn Family>,
    grid: &GridSpec,
    pts: Vec<Point2>,
    mut checks: Vec<Check>,
    tol: &Tolerances,
    section: crate::config::VerifySection,
    on_shell: bool,
) -> Result<Report> {
    if let Some(sys) = family.system() {
        let mut field = Worst::default();
        let mut main = Worst::default();
        let mut factors = Worst::default();
        let mut lagrangian = Worst::default();
        let mut cons = Worst::default();
        let mut quad = Worst::default();
        let mut integrable = Worst::default();
        let fac = family.main_eq_factors();
        let relation = family.quadrature_relation();
        let (mut has_main, mut has_lag) = (false, false);
        for &p in &pts {
            let generic = field_eq_residual(sys, p);
            field.push(p, generic.as_ref().map(|r| r.iter().fold(0f64, |a, x| a.max(x.abs()))));
            if let Some(m) = family.main_eq_residuals(p) {
                has_main = true;
                main.push(p, m.as_ref().map(|r| r.iter().fold(0f64, |a, x| a.max(x.abs()))));
                if let (Ok(m), Ok(g)) = (&m, &generic) {
                    if fac.len() == m.len() && g.len() >= m.len() {
                        let e = m.iter().zip(&fac).zip(g).fold(0f64, |a, ((m, f), g)| a.max(scaled_err(*m, f * g)));
                        factors.value(p, e);
                    }
                }
            }
            if let Some(l) = family.reduced_lagrangian(p) {
                has_lag = true;
                lagrangian.push(p, (|| -> ghmtq::Result<f64> { Ok(scaled_err(lagrangian_density(sys, p)?.total.value(), l?)) })());
            }
            cons.push(p, conservation_residual(sys, p).map(|c| c.components[0].abs().max(c.components[1].abs())));
            if let (Some(rel), Some(g)) = (relation, family.quadrature_gradient(p)) {
                let r = g.and_then(|g| {
                    let t = energy_momentum(sys, p)?;
                    integrable.value(p, integrability_defect(&g).abs());
                    let e11 = scaled_err(t.t[0], rel.t11.1 * g[rel.t11.0].value());
                    let e12 = scaled_err(t.t[1], rel.t12.1 * g[rel.t12.0].value());
                    Ok(e11.max(e12))
                });
                quad.push(p, r);
            }
        }
        checks.push(shell(field.check("field_equations", tol.residual, "generic field-equation residual"), on_shell));
        if has_main {
            checks.push(shell(main.check("main_equations", tol.residual, "family main equations"), on_shell));
            if factors.evaluated > 0 {
                checks.push(factors.check(
                    "main_equation_factors",
                    tol.identity,
                    "main equations against the generic residual times the family factors",
                ));
            }
        }
        if has_lag {
            checks.push(lagrangian.check("lagrangian_equivalence", tol.identity, "GHM Lagrangian against the reduced one"));
        }
        checks.push(shell(cons.check("conservation", tol.conservation, "generalized conservation law"), on_shell));
        if let Some(rel) = relation {
            let note = format!("T_11 and T_12 against the gradient of {}", rel.potential);
            checks.push(quad.check("energy_momentum_quadrature", tol.identity, &note));
            checks.push(shell(
                integrable.check("quadrature_integrability", tol.identity, "curl of the quadrature gradient"),
                on_shell,
            ));
        }
    }

    if cfg.family == "gowdy_avtd" && cfg.params.is_empty() {
        let mut p_decay = Worst::default();
        let mut q = Worst::default();
        for &p in pts.iter().filter(|p| p.x1 >= 0.0) {
            let r = family.main_eq_residuals(p).expect("gowdy has main equations");
            p_decay.push(p, r.as_ref().map(|r| (r[0] * (4.0 * p.x1).exp() - 1.0).abs()));
            q.push(p, r.map(|r| r[1].abs()));
        }
        checks.push(p_decay.check("residual_P_decay", tol.residual, "|residual_P e^(4t) - 1| for t >= 0"));
        checks.push(q.check("residual_Q", tol.residual, "|residual_Q| for t >= 0"));
    }

    if cfg.family == "weyl_static" {
        if let Some(m) = cfg.params.get("curzon_mass").and_then(toml::Value::as_float) {
            checks.push(potential_check(family.as_ref(), grid, m, section.paths.unwrap_or(8), tol));
        }
    }

    let details = json!({ "family_id": family.id(), "points": pts.len(), "on_shell": on_shell });
    report("verify", cfg, checks, Vec::new(), details)
}

/// Reconstructs `κ` along straight paths from the grid centre and compares
/// the increments with the Curzon closed form.
fn potential_check(family: &dyn Family, grid: &GridSpec, m: f64, paths: usize, tol: &Tolerances) -> Check {
    let c = Point2::new(0.5 * (grid.x1[0] + grid.x1[1]), 0.5 * (grid.x2[0] + grid.x2[1]));
    let pts = grid.points();
    let step = (pts.len() / paths.max(1)).max(1);
    let mut w = Worst::default();
    for &p in pts.iter().step_by(step).take(paths) {
        let r = reconstruct_potential(family, &[c, p], 16).map(|dk| (dk - (curzon_kappa(m, p) - curzon_kappa(m, c))).abs());
        w.push(p, r);
    }
    w.check("potential_reconstruction", tol.path, "path-integrated kappa against -m^2 rho^2 / (2 (rho^2 + z^2)^2)")
}

/// One CSV row per grid node, excluded nodes included with `frame_ok = false`.
fn write_csv(path: &Path, grid: &GridSpec, samples: &[PointSample]) -> Result<()> {
    let mut all = grid.clone();
    all.exclusions.clear();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
    w.write_record(["x1", "x2", "omega_1", "omega_2", "F", "R", "frame_ok"])?;
    let num = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
    let mut it = samples.iter().peekable();
    for p in all.points() {
        match it.peek() {
            Some(s) if s.p == p => {
                let s = it.next().unwrap();
                let ok = s.frame_ok();
                w.write_record([
                    p.x1.to_string(),
                    p.x2.to_string(),
                    num(s.omega.map(|o| o[0])),
                    num(s.omega.map(|o| o[1])),
                    num(s.f),
                    num(s.r),
                    ok.to_string(),
                ])?;
            }
            _ => w.write_record([p.x1.to_string(), p.x2.to_string(), "".into(), "".into(), "".into(), "".into(), "false".into()])?,
        }
    }
    w.flush()?;
    Ok(())
}

pub fn analyze(cfg: &RunConfig, out: &Path) -> Result<Report> {
    let family = cfg.build_family()?;
    let grid = cfg.grid()?;
    let frames = frames(cfg, &family)?;
    let tol = &cfg.tolerances;
    let section = cfg.analyze.clone().unwrap_or_default();
    let reference: Option<ExprField> = match &section.reference_ricci {
        Some(src) => Some(
            ExprField::parse(src, family.coordinate_names())
                .map_err(|e| ConfigError(format!("reference_ricci '{src}': {e}")))?,
        ),
        None => None,
    };
    let mut th = section.regularity.clone();
    th.zero_connection = tol.zero_connection;
    let scan = regularity_scan(frames.as_ref(), &grid, &th)?;

    fs::create_dir_all(out)?;
    write_csv(&out.join("fields.csv"), &grid, &scan.samples)?;

    let mut checks = vec![Check::info(
        "frame_coverage",
        Some(scan.failed as f64),
        format!("{} of {} grid points without a frame", scan.failed, scan.samples.len()),
    )];
    let zero_note = if scan.identically_zero { "connection identically zero" } else { "connection not identically zero" };
    checks.push(Check::info("max_connection", Some(scan.max_omega), zero_note));
    checks.push(Check::info("max_ricci", Some(scan.max_r), scan.verdict.clone()));

    let mut w = Worst::default();
    let label;
    match &reference {
        Some(f) => {
            label = format!("R column against {}", section.reference_ricci.as_deref().unwrap_or(""));
            for s in scan.samples.iter().filter(|s| s.frame_ok()) {
                w.push(s.p, f.eval(s.p).map(|j| oracle_err(s.r.unwrap(), j.value())));
            }
        }
        None => {
            label = "R column against the family closed form".to_string();
            for s in scan.samples.iter().filter(|s| s.frame_ok()) {
                if let Some(c) = family.closed_form_ricci(s.p) {
                    w.push(s.p, c.map(|c| oracle_err(s.r.unwrap(), c)));
                }
            }
        }
    }
    if w.evaluated + w.errors > 0 {
        checks.push(w.check("ricci_reference", tol.oracle, &label));
    }

    let details = json!({
        "family_id": family.id(),
        "frame": format!("{:?}", cfg.frame),
        "max_omega": scan.max_omega,
        "max_F": scan.max_f,
        "max_R": scan.max_r,
        "identically_zero": scan.identically_zero,
        "loci": scan.loci,
        "verdict": scan.verdict,
    });
    report("analyze", cfg, checks, vec!["fields.csv".into()], details)
}

pub fn euler(cfg: &RunConfig) -> Result<Report> {
    let family = cfg.build_family()?;
    if family.signature() == Signature::Lorentzian {
        return Err(ConfigError(format!(
            "euler needs a Riemannian metric, but family '{}' is Lorentzian: Gauss-Bonnet with an SO(2) Euler form does not apply",
            cfg.family
        ))
        .into());
    }
    let section = cfg.euler.clone().ok_or_else(|| ConfigError("euler needs an [euler] table with patches".into()))?;
    let domain = ghmtq::quantization::EulerDomain { patches: section.patches.clone() };
    let tol = &cfg.tolerances;
    let e = euler_number(&FamilyMetric(family.clone()), Signature::Riemannian, &domain, section.resolution)?;

    let mut checks = vec![Check::bound(
        "euler_integrality",
        e.integrality_defect(),
        tol.euler,
        format!("chi = {} (nearest integer {})", e.chi, e.nearest_integer()),
    )];
    if let Some(x) = section.expected {
        checks.push(Check::bound("euler_expected", (e.chi - x as f64).abs(), tol.euler, format!("expected chi = {x}")));
    }
    checks.push(Check::info("bulk", Some(e.bulk), "integral of F over the region"));
    for s in &e.boundary {
        checks.push(Check::info(
            &format!("boundary_{}_{}", s.patch, s.side),
            Some(s.value),
            "geodesic-curvature integral",
        ));
    }
    checks.push(Check::info("corners", Some(e.corners), "sum of exterior angles"));
    checks.push(Check::info("quadrature_error", Some(e.error), "Richardson estimate"));
    checks.push(Check::info(
        "convergence_order",
        e.observed_order,
        format!("chi at n, 2n, 4n panels: {:?}", e.sequence),
    ));
    report("euler", cfg, checks, Vec::new(), serde_json::to_value(&e)?)
}

fn constraint_check(name: &str, r: &SpectrumReport, expected: usize) -> Check {
    let kinds: Vec<String> = r.constraints.iter().map(|c| c.detail.clone()).collect();
    let note = if kinds.is_empty() {
        format!("no constraints (expected {expected})")
    } else {
        format!("expected {expected}: {}", kinds.join("; "))
    };
    let status = if r.constraints.len() == expected { Status::Pass } else { Status::Fail };
    Check { name: name.into(), status, measured: Some(r.constraints.len() as f64), tolerance: None, note }
}

pub fn scan(cfg: &RunConfig) -> Result<Report> {
    let family = cfg.build_family()?;
    let section: ScanSection = cfg.scan.clone().ok_or_else(|| ConfigError("scan needs a [scan] table".into()))?;
    let tol = &cfg.tolerances;
    let spectrum = SpectrumConfig {
        loops: section.loops.clone(),
        euler_domain: section.euler_domain.clone(),
        euler_resolution: section.euler_resolution,
        holonomy_steps: section.holonomy_steps,
        single_valued_gauge: section.single_valued_gauge,
        bisection_steps: section.bisection_steps,
    };
    if section.param.is_none() && !section.synthetic_control {
        return Err(ConfigError("scan needs a parameter to sweep or synthetic_control = true".into()).into());
    }
    let mut checks = Vec::new();
    let mut details = serde_json::Map::new();
    if let Some(name) = &section.param {
        if section.values.is_empty() {
            return Err(ConfigError(format!("scan over '{name}' has no values")).into());
        }
        if spectrum.euler_domain.is_some() && family.signature() == Signature::Lorentzian {
            return Err(ConfigError("an Euler domain needs a Riemannian family".into()).into());
        }
        let build_with = |v: f64| -> Result<Arc<dyn Family>, ConfigError> {
            let mut table = cfg.params.clone();
            table.insert(name.clone(), toml::Value::Float(v));
            build_family(&cfg.family, &table)
        };
        // an unknown parameter name is a configuration error, not a bad point
        if let Err(e) = build_with(section.values[0]) {
            if e.0.contains("unknown field") {
                return Err(ConfigError(format!("scan parameter '{name}': {e}")).into());
            }
        }
        let build = |v: f64| -> ghmtq::Result<ParamPoint> {
            build_with(v).map(ParamPoint::from_family).map_err(|e| ghmtq::Error::InvalidConfig(e.0))
        };
        let r = spectrum_search(&build, &section.values, &spectrum, tol);
        let bad = r.params.iter().filter(|p| p.error.is_some()).count();
        checks.push(constraint_check("constraints", &r, section.expected_constraints));
        checks.push(Check::info("invalid_parameter_points", Some(bad as f64), format!("{bad} of {} values failed to build", r.params.len())));
        details.insert("sweep".into(), json!({ "param": name, "report": r }));
    }
    if section.synthetic_control {
        let control = SpectrumConfig {
            loops: vec![synthetic_control_loop()],
            euler_domain: None,
            ..spectrum.clone()
        };
        let control = SpectrumConfig { single_valued_gauge: true, ..control };
        let r = spectrum_search(&synthetic_control, &section.control_values, &control, tol);
        checks.push(constraint_check("synthetic_control", &r, 1));
        details.insert("synthetic_control".into(), json!({ "report": r }));
    }
    report("scan", cfg, checks, Vec::new(), serde_json::Value::Object(details))
}
