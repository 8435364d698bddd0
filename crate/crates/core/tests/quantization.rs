mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use ghmtq::expr::ExprField;
use ghmtq::geometry::{rotate_coframe, ClosedCurve, Coframe, CoframeField, FnMetric, LowerTriangular, Signature};
use ghmtq::quantization::{
    euler_number, regularity_scan, spectrum_search, synthetic_control, synthetic_control_loop, transition_check,
    ConstraintKind, EulerDomain, GridSpec, Locus, ParamPoint, Patch, RegularityThresholds, SideKind, Sides,
    SpectrumConfig,
};
use ghmtq::solutions::{AvtdConfig, AvtdMetric, EinsteinRosen, ExtensionField, Family, FamilyFrame, FamilyMetric, Gowdy, Schwarzschild};
use ghmtq::tolerances::Tolerances;
use ghmtq::{Axis, Error, Jet3, Point2, Rect, Result};

fn avtd() -> Arc<dyn Family> {
    Arc::new(AvtdMetric)
}

fn annulus(t0: f64, t1: f64) -> EulerDomain {
    EulerDomain::single(Rect::new([t0, t1], [0.0, 2.0 * PI]), Sides::annulus())
}

fn flat() -> FnMetric<impl Fn(Jet3, Jet3) -> std::result::Result<[Jet3; 3], ghmtq::JetError> + Send + Sync> {
    FnMetric::new(|_, _| Ok([Jet3::constant(1.0), Jet3::constant(0.0), Jet3::constant(1.0)]))
}

fn sphere() -> FnMetric<impl Fn(Jet3, Jet3) -> std::result::Result<[Jet3; 3], ghmtq::JetError> + Send + Sync> {
    FnMetric::new(|th, _| {
        let s = th.sin();
        Ok([Jet3::constant(1.0), Jet3::constant(0.0), s * s])
    })
}

#[test]
fn avtd_annulus_has_zero_euler_number() {
    let m = FamilyMetric(avtd());
    let mut chis = Vec::new();
    for (t0, t1) in [(-1.0, 1.0), (0.0, 2.0), (-2.0, 0.5), (-0.5, 0.25), (1.0, 3.0)] {
        let e = euler_number(&m, Signature::Riemannian, &annulus(t0, t1), 16).unwrap();
        assert!(e.chi.abs() < 1e-6, "({t0}, {t1}): {}", e.chi);
        assert!(e.observed_order.unwrap() >= 2.0);
        assert_eq!(e.corners, 0.0);
        // the two boundary circles cancel the bulk
        assert_eq!(e.boundary.len(), 2);
        chis.push(e.chi);
    }
    let spread = chis.iter().copied().fold(f64::NEG_INFINITY, f64::max) - chis.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(spread < 1e-6);
}

#[test]
fn avtd_annulus_terms() {
    let m = FamilyMetric(avtd());
    let e = euler_number(&m, Signature::Riemannian, &annulus(-1.0, 1.0), 32).unwrap();
    // bulk = ∫∫ -eᵗ · ½ dt dθ = -π (e - 1/e)
    let bulk = -PI * (1f64.exp() - (-1f64).exp());
    assert!((e.bulk - bulk).abs() < 1e-8);
    // inner circle: -∮κ ds = -2π e^{-1/2}/√2 · e^{-1/2}/√2
    let inner = e.boundary.iter().find(|s| s.side == "x1_lo").unwrap().value;
    assert!((inner + PI * (-1f64).exp()).abs() < 1e-8);
}

#[test]
fn gowdy_avtd_induced_metric_annulus() {
    let g: Arc<dyn Family> = Arc::new(Gowdy::avtd(AvtdConfig::standard()).unwrap());
    let e = euler_number(&FamilyMetric(g), Signature::Riemannian, &annulus(-1.0, 1.0), 16).unwrap();
    assert!(e.chi.abs() < 1e-6);
}

#[test]
fn flat_square_and_disk_like_regions() {
    let sq = EulerDomain::single(Rect::new([0.0, 1.0], [0.0, 1.0]), Sides::boundary());
    let e = euler_number(&flat(), Signature::Riemannian, &sq, 8).unwrap();
    assert!((e.chi - 1.0).abs() < 1e-6);
    assert!((e.corners - 2.0 * PI).abs() < 1e-12);
    // a sheared parallelogram has non-right corners
    let sheared = FnMetric::new(|_, _| Ok([Jet3::constant(1.0), Jet3::constant(0.4), Jet3::constant(1.0)]));
    let e = euler_number(&sheared, Signature::Riemannian, &sq, 8).unwrap();
    assert!((e.chi - 1.0).abs() < 1e-6);
    // polar annulus in the plane
    let polar = FnMetric::new(|r, _| Ok([Jet3::constant(1.0), Jet3::constant(0.0), r * r]));
    let e = euler_number(&polar, Signature::Riemannian, &EulerDomain::single(Rect::new([0.5, 2.0], [0.0, 2.0 * PI]), Sides::annulus()), 8).unwrap();
    assert!(e.chi.abs() < 1e-6);
}

#[test]
fn round_sphere() {
    let poles = Sides { x1_lo: SideKind::Pole, x1_hi: SideKind::Pole, x2_lo: SideKind::Periodic, x2_hi: SideKind::Periodic };
    let whole = EulerDomain::single(Rect::new([0.0, PI], [0.0, 2.0 * PI]), poles);
    let e = euler_number(&sphere(), Signature::Riemannian, &whole, 16).unwrap();
    assert!((e.chi - 2.0).abs() < 1e-6, "{}", e.chi);
    assert!(e.observed_order.unwrap() >= 2.0);

    // cap and complement, each a disk with one boundary circle
    let cap = |lo: f64, hi: f64, lo_kind: SideKind, hi_kind: SideKind| Patch {
        rect: Rect::new([lo, hi], [0.0, 2.0 * PI]),
        sides: Sides { x1_lo: lo_kind, x1_hi: hi_kind, x2_lo: SideKind::Periodic, x2_hi: SideKind::Periodic },
    };
    let top = EulerDomain { patches: vec![cap(0.0, 1.0, SideKind::Pole, SideKind::Boundary)] };
    let bottom = EulerDomain { patches: vec![cap(1.0, PI, SideKind::Boundary, SideKind::Pole)] };
    let a = euler_number(&sphere(), Signature::Riemannian, &top, 16).unwrap();
    let b = euler_number(&sphere(), Signature::Riemannian, &bottom, 16).unwrap();
    assert!((a.chi - 1.0).abs() < 1e-6 && (b.chi - 1.0).abs() < 1e-6);
    assert!((a.chi + b.chi - 2.0).abs() < 1e-6);
}

#[test]
fn euler_rejects_bad_input() {
    let mink = FnMetric::new(|_, _| Ok([Jet3::constant(1.0), Jet3::constant(0.0), Jet3::constant(-1.0)]));
    let sq = EulerDomain::single(Rect::new([0.0, 1.0], [0.0, 1.0]), Sides::boundary());
    assert!(matches!(euler_number(&mink, Signature::Lorentzian, &sq, 8), Err(Error::LorentzianDomain(_))));
    let open = EulerDomain::single(
        Rect::new([0.0, 1.0], [0.0, 1.0]),
        Sides { x2_lo: SideKind::Periodic, ..Sides::boundary() },
    );
    assert!(matches!(euler_number(&flat(), Signature::Riemannian, &open, 8), Err(Error::OpenBoundary(_))));
}

struct Rotated<C> {
    inner: C,
}

impl<C: CoframeField> CoframeField for Rotated<C> {
    fn coframe(&self, p: Point2) -> Result<Coframe> {
        let (_, th) = Jet3::coordinates(p);
        Ok(rotate_coframe(&self.inner.coframe(p)?, &th, self.inner.signature()))
    }
    fn signature(&self) -> Signature {
        self.inner.signature()
    }
}

fn theta_loops() -> Vec<ClosedCurve> {
    vec![
        ClosedCurve::Periodic { axis: Axis::X2, fixed: -0.5, start: 0.0, period: 2.0 * PI },
        ClosedCurve::Periodic { axis: Axis::X2, fixed: 0.5, start: 0.0, period: 2.0 * PI },
    ]
}

#[test]
fn transition_between_avtd_frames() {
    let lt = LowerTriangular::new(FamilyMetric(avtd()), Signature::Riemannian);
    let fam = FamilyFrame(avtd());
    let grid = GridSpec::new([-1.0, 1.0], [0.0, 2.0 * PI], [16, 16]).periodic(Axis::X2);
    let r = transition_check(&lt, &fam, &grid, &theta_loops(), 1e-8).unwrap();
    assert!(r.gauge_ok && r.single_valued);
    assert!(r.lambda_max - r.lambda_min <= 1e-12);
    assert!(r.windings.iter().all(|w| w.winding == 0));

    let me = transition_check(&lt, &lt, &grid, &[], 1e-8).unwrap();
    assert_eq!((me.lambda_min, me.lambda_max), (0.0, 0.0));
}

#[test]
fn rotated_frame_winds_once() {
    let lt = LowerTriangular::new(FamilyMetric(avtd()), Signature::Riemannian);
    let rot = Rotated { inner: LowerTriangular::new(FamilyMetric(avtd()), Signature::Riemannian) };
    let grid = GridSpec::new([-1.0, 1.0], [0.0, 2.0 * PI], [16, 16]).periodic(Axis::X2);
    let r = transition_check(&lt, &rot, &grid, &theta_loops(), 1e-8).unwrap();
    assert!(r.gauge_ok, "{}", r.verdict);
    assert!(!r.single_valued);
    assert!(r.windings.iter().all(|w| w.winding == 1));
}

#[test]
fn lorentzian_transition_recovers_rapidity() {
    let h = FnMetric::new(|t, x| Ok([-(t * t + 1.0), x * 0.1, (t * 0.3).exp() + x * x]));
    let a = LowerTriangular::new(h, Signature::Lorentzian);
    let b = Rotated { inner: LowerTriangular::new(FnMetric::new(|t, x| Ok([-(t * t + 1.0), x * 0.1, (t * 0.3).exp() + x * x])), Signature::Lorentzian) };
    let grid = GridSpec::new([-0.5, 0.5], [0.1, 1.0], [8, 8]);
    let r = transition_check(&a, &b, &grid, &[], 1e-8).unwrap();
    assert!(r.gauge_ok, "{}", r.verdict);
    for s in &r.samples {
        assert!((s.lambda.unwrap() - s.p.x2).abs() < 1e-12);
    }
}

#[test]
fn transition_rejects_mixed_signatures() {
    let a = LowerTriangular::new(flat(), Signature::Riemannian);
    let b = LowerTriangular::new(FnMetric::new(|_, _| Ok([Jet3::constant(1.0), Jet3::constant(0.0), Jet3::constant(-1.0)])), Signature::Lorentzian);
    let grid = GridSpec::new([0.0, 1.0], [0.0, 1.0], [8, 8]);
    assert!(matches!(transition_check(&a, &b, &grid, &[], 1e-8), Err(Error::SignatureMismatch { .. })));
}

#[test]
fn schwarzschild_scan_is_identically_zero() {
    for x in [ExtensionField::Cartesian, ExtensionField::Multipole { n: 2 }] {
        let s: Arc<dyn Family> = Arc::new(Schwarzschild::new(1.0, x).unwrap());
        let grid = GridSpec::new([2.5, 10.0], [0.0, 2.0 * PI], [64, 64]).periodic(Axis::X2);
        let r = regularity_scan(&FamilyFrame(s), &grid, &RegularityThresholds::default()).unwrap();
        assert!(r.identically_zero);
        assert!(r.max_omega < 1e-10);
        assert!(r.verdict.starts_with("connection regular, identically zero"));
        // rows where ∂_φ X vanishes have no frame
        assert!(r.failed > 0);
        assert!(r.samples.iter().filter(|s| !s.frame_ok()).all(|s| s.error.as_deref().unwrap().contains("degenera")));
    }
}

#[test]
fn avtd_metric_scan() {
    let grid = GridSpec::new([-2.0, 2.0], [0.0, 2.0 * PI], [16, 8]).periodic(Axis::X2);
    let r = regularity_scan(&FamilyFrame(avtd()), &grid, &RegularityThresholds::default()).unwrap();
    for s in &r.samples {
        assert!((s.r.unwrap().abs() - 2.0 * s.p.x1.exp()).abs() < 1e-10 * s.p.x1.exp());
    }
    assert!(r.loci.iter().all(|l| !l.singular));
    assert_eq!(r.verdict, "connection and curvature regular on the grid");
}

#[test]
fn inverse_distance_blowup_is_classified() {
    // h = (dρ² + dz²)/ρ has R = -1/ρ
    let h = FnMetric::new(|rho, _| {
        let k = rho.recip()?;
        Ok([k, Jet3::constant(0.0), k])
    });
    let lt = LowerTriangular::new(h, Signature::Riemannian);
    let grid = GridSpec::new([0.1, 5.0], [0.0, 1.0], [128, 8]);
    let th = RegularityThresholds { loci: vec![Locus { axis: Axis::X1, value: 0.0 }], ..RegularityThresholds::default() };
    let r = regularity_scan(&lt, &grid, &th).unwrap();
    let fit = r.loci[0].fit.unwrap();
    assert!((fit.exponent + 1.0).abs() < 1e-8, "{fit:?}");
    assert!(r.loci[0].singular);
    assert!(r.verdict.contains("blows up towards x1 = 0"));
}

#[test]
fn scans_are_deterministic() {
    let n = ["t", "rho"];
    let er: Arc<dyn Family> = Arc::new(
        EinsteinRosen::new(Arc::new(ExprField::parse("0.1*t + 0.2*rho", n).unwrap()), Arc::new(ExprField::parse("rho*t", n).unwrap()))
            .unwrap(),
    );
    let grid = GridSpec::new([0.5, 1.5], [0.1, 5.0], [9, 32]);
    let a = regularity_scan(&FamilyFrame(er.clone()), &grid, &RegularityThresholds::default()).unwrap();
    let b = regularity_scan(&FamilyFrame(er), &grid, &RegularityThresholds::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.samples.len(), 9 * 32);
    assert_eq!(a.samples[1].p, Point2::new(0.5, 0.1 + 4.9 / 31.0));
}

fn sweep_cfg() -> SpectrumConfig {
    SpectrumConfig {
        loops: vec![ClosedCurve::Periodic { axis: Axis::X2, fixed: 1.0, start: 0.0, period: 2.0 * PI }],
        single_valued_gauge: true,
        ..SpectrumConfig::default()
    }
}

#[test]
fn schwarzschild_mass_sweep_has_no_constraint() {
    let build = |m: f64| -> Result<ParamPoint> {
        Ok(ParamPoint::from_family(Arc::new(Schwarzschild::new(m, ExtensionField::Cartesian)?)))
    };
    let masses: Vec<f64> = (1..=10).map(|i| 0.5 * i as f64).collect();
    let cfg = SpectrumConfig {
        loops: vec![ClosedCurve::rectangle([11.0, 12.0], [0.5, 1.0]), ClosedCurve::Circle { center: Point2::new(14.0, 1.5), radius: 0.5 }],
        ..sweep_cfg()
    };
    let r = spectrum_search(&build, &masses, &cfg, &Tolerances::default());
    assert!(r.constraints.is_empty());
    for rec in &r.params {
        assert!(rec.error.is_none(), "{:?}", rec.error);
        assert!(rec.holonomies.iter().all(|h| h.abs() < 1e-10));
    }
}

#[test]
fn avtd_sweep_has_no_constraint() {
    let build = |c: f64| -> Result<ParamPoint> { Ok(ParamPoint::from_family(Arc::new(Gowdy::avtd(AvtdConfig::with_c(c))?))) };
    let cfg = SpectrumConfig { euler_domain: Some(annulus(-1.0, 1.0)), ..sweep_cfg() };
    let r = spectrum_search(&build, &[0.5, 1.0, 2.0], &cfg, &Tolerances::default());
    assert!(r.constraints.is_empty());
    for rec in &r.params {
        assert!(rec.chi.unwrap().abs() < 1e-6, "{rec:?}");
    }
}

#[test]
fn einstein_rosen_amplitude_sweep_has_no_constraint() {
    let build = |k: f64| -> Result<ParamPoint> { Ok(ParamPoint::from_family(Arc::new(EinsteinRosen::exact(k)?))) };
    let cfg = SpectrumConfig {
        loops: vec![ClosedCurve::rectangle([-0.5, 0.5], [1.0, 2.0])],
        euler_domain: Some(EulerDomain::single(Rect::new([-0.5, 0.5], [1.0, 2.0]), Sides::boundary())),
        ..sweep_cfg()
    };
    let ks: Vec<f64> = (1..=6).map(|i| 0.25 * i as f64).collect();
    let r = spectrum_search(&build, &ks, &cfg, &Tolerances::default());
    assert!(r.constraints.is_empty(), "{:?}", r.constraints);
    assert!(r.params.iter().all(|p| p.error.is_none()));
}

#[test]
fn synthetic_control_gives_exactly_one_constraint() {
    let cs: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
    let cfg = SpectrumConfig { loops: vec![synthetic_control_loop()], single_valued_gauge: true, ..SpectrumConfig::default() };
    let r = spectrum_search(&synthetic_control, &cs, &cfg, &Tolerances::default());
    assert_eq!(r.constraints.len(), 1);
    let ConstraintKind::HolonomyIntegrality { allowed, .. } = &r.constraints[0].kind else { panic!() };
    assert_eq!(allowed.len(), 3);
    for (a, e) in allowed.iter().zip([0.0, 1.0, 2.0]) {
        assert!((a - e).abs() < 1e-9);
    }
}
