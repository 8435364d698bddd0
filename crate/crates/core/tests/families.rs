//! Field equations, energy–momentum tensor, conservation law and quadratures
//! of the solution catalog.

use std::f64::consts::PI;
use std::sync::Arc;

use ghmtq::expr::ExprField;
use ghmtq::ghm::{
    conservation_residual, energy_momentum, energy_momentum_trace, extension_defect, field_eq_residual,
    lagrangian_density,
};
use ghmtq::solutions::{
    curzon_kappa, reconstruct_potential, AvtdConfig, EinsteinRosen, ExtensionField, Family, Gowdy,
    Schwarzschild, StationaryAxisymmetric,
};
use ghmtq::{Error, Point2, ScalarField2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field(src: &str, names: [&str; 2]) -> Arc<dyn ScalarField2> {
    Arc::new(ExprField::parse(src, names).unwrap())
}

fn points(seed: u64, n: usize, x1: [f64; 2], x2: [f64; 2]) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point2::new(rng.random_range(x1[0]..x1[1]), rng.random_range(x2[0]..x2[1]))).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

struct Case {
    family: Box<dyn Family>,
    pts: Vec<Point2>,
}

fn cases() -> Vec<Case> {
    let rz = ["rho", "z"];
    let tth = ["t", "theta"];
    let tr = ["t", "rho"];
    vec![
        Case {
            family: Box::new(
                StationaryAxisymmetric::stationary(
                    field("1.3 + 0.2*sin(rho)*cos(z)", rz),
                    field("0.3*rho*z + 0.1*z^2", rz),
                )
                .unwrap(),
            ),
            pts: points(1, 20, [0.5, 2.0], [-1.0, 1.0]),
        },
        Case { family: Box::new(StationaryAxisymmetric::curzon(1.0, None).unwrap()), pts: points(2, 20, [0.5, 2.0], [-1.0, 1.0]) },
        Case {
            family: Box::new(StationaryAxisymmetric::curzon(0.7, Some(field("rho*z", rz))).unwrap()),
            pts: points(3, 20, [0.5, 2.0], [-1.0, 1.0]),
        },
        Case { family: Box::new(Schwarzschild::new(1.0, ExtensionField::Cartesian).unwrap()), pts: points(4, 20, [2.5, 10.0], [0.2, 3.0]) },
        Case {
            family: Box::new(Schwarzschild::new(2.0, ExtensionField::Multipole { n: 2 }).unwrap()),
            pts: points(5, 20, [2.5, 10.0], [0.2, 1.4]),
        },
        Case { family: Box::new(Gowdy::avtd(AvtdConfig::standard()).unwrap()), pts: points(6, 20, [0.0, 2.0], [0.0, 6.0]) },
        Case {
            family: Box::new(Gowdy::new(field("sin(t)*theta + t", tth), field("t*theta + cos(theta)", tth)).unwrap()),
            pts: points(7, 20, [0.1, 1.0], [0.2, 1.2]),
        },
        Case { family: Box::new(Gowdy::exact(1.5, 0.8).unwrap()), pts: points(8, 20, [-1.0, 1.0], [0.0, 6.0]) },
        Case {
            family: Box::new(EinsteinRosen::new(field("0.1*t + 0.2*rho", tr), field("rho*t", tr)).unwrap()),
            pts: points(9, 20, [0.2, 1.5], [0.5, 3.0]),
        },
        Case { family: Box::new(EinsteinRosen::exact(0.7).unwrap()), pts: points(10, 20, [-1.0, 1.0], [0.2, 3.0]) },
    ]
}

#[test]
fn lagrangian_density_matches_reduced_lagrangian() {
    for c in cases() {
        let sys = c.family.system().unwrap();
        for &p in &c.pts {
            let l = lagrangian_density(sys, p).unwrap().total.value();
            let r = c.family.reduced_lagrangian(p).unwrap().unwrap();
            assert!(rel(l, r) < 1e-10, "{} at {p}: {l} vs {r}", c.family.id());
        }
    }
}

#[test]
fn main_equations_are_the_generic_field_equations() {
    for c in cases() {
        let sys = c.family.system().unwrap();
        let factors = c.family.main_eq_factors();
        for &p in &c.pts {
            let generic = field_eq_residual(sys, p).unwrap();
            let main = c.family.main_eq_residuals(p).unwrap().unwrap();
            for i in 0..main.len() {
                let scale = main[i].abs().max(generic[i].abs()).max(1.0);
                assert!(
                    (main[i] - factors[i] * generic[i]).abs() < 1e-10 * scale,
                    "{} eq {i} at {p}: {} vs {}",
                    c.family.id(),
                    main[i],
                    generic[i]
                );
            }
        }
    }
}

#[test]
fn energy_momentum_equals_quadrature_gradient() {
    for c in cases() {
        let Some(q) = c.family.quadrature_relation() else { continue };
        let sys = c.family.system().unwrap();
        for &p in &c.pts {
            let t = energy_momentum(sys, p).unwrap();
            let g = c.family.quadrature_gradient(p).unwrap().unwrap();
            assert!(rel(t.t[0], q.t11.1 * g[q.t11.0].value()) < 1e-10, "{} T11 at {p}", c.family.id());
            assert!(rel(t.t[1], q.t12.1 * g[q.t12.0].value()) < 1e-10, "{} T12 at {p}", c.family.id());
        }
    }
}

#[test]
fn energy_momentum_is_traceless() {
    for c in cases() {
        let sys = c.family.system().unwrap();
        for &p in &c.pts {
            assert!(energy_momentum_trace(sys, p).unwrap().abs() < 1e-12);
        }
    }
}

#[test]
fn axisymmetric_stress_is_antidiagonal() {
    let c = &cases()[0];
    let sys = c.family.system().unwrap();
    for &p in &c.pts {
        let t = energy_momentum(sys, p).unwrap();
        assert!((t.t[2] + t.t[0]).abs() < 1e-12);
    }
}

#[test]
fn conservation_holds_on_shell() {
    let on_shell = [1usize, 2, 3, 4, 7, 9];
    let all = cases();
    for i in on_shell {
        let c = &all[i];
        let sys = c.family.system().unwrap();
        for &p in &c.pts {
            let r = conservation_residual(sys, p).unwrap();
            for v in r.components {
                assert!(v.abs() < 1e-8, "{} at {p}: {v}", c.family.id());
            }
        }
    }
}

#[test]
fn conservation_fails_off_shell() {
    let c = &cases()[0];
    let sys = c.family.system().unwrap();
    let worst = c
        .pts
        .iter()
        .map(|&p| {
            let r = conservation_residual(sys, p).unwrap();
            r.components[0].abs().max(r.components[1].abs())
        })
        .fold(0f64, f64::max);
    assert!(worst > 1e-3);
}

#[test]
fn axisymmetric_integrability_is_the_z_conservation_law() {
    let c = &cases()[1];
    let sys = c.family.system().unwrap();
    for &p in &c.pts {
        assert!(conservation_residual(sys, p).unwrap().integrability.abs() < 1e-10);
    }
}

#[test]
fn curzon_energy_momentum() {
    let cz = StationaryAxisymmetric::curzon(1.0, None).unwrap();
    let p = Point2::new(1.0, 0.0);
    let t = energy_momentum(cz.system().unwrap(), p).unwrap();
    assert!((t.t[0] - 1.0).abs() < 1e-12);
    let g = cz.quadrature_gradient(p).unwrap().unwrap();
    assert!((g[0].value() - 1.0).abs() < 1e-12);
    assert!((cz.kappa(p).unwrap() + 0.5).abs() < 1e-15);
}

#[test]
fn curzon_potential_is_harmonic() {
    let cz = StationaryAxisymmetric::curzon(1.3, None).unwrap();
    for p in points(11, 30, [0.3, 3.0], [-2.0, 2.0]) {
        assert!(cz.weyl_laplacian(p).unwrap().unwrap().abs() < 1e-10);
    }
}

#[test]
fn curzon_kappa_by_quadrature() {
    let cz = StationaryAxisymmetric::curzon(1.0, None).unwrap();
    let path = [Point2::new(2.0, 0.0), Point2::new(1.0, 0.0)];
    let dk = reconstruct_potential(&cz, &path, 16).unwrap();
    assert!((dk + 0.375).abs() < 1e-6, "{dk}");
    let path = [Point2::new(2.0, 0.5), Point2::new(1.0, 0.5), Point2::new(1.0, -1.0), Point2::new(0.5, 0.3)];
    let dk = reconstruct_potential(&cz, &path, 16).unwrap();
    let exact = curzon_kappa(1.0, path[3]) - curzon_kappa(1.0, path[0]);
    assert!((dk - exact).abs() < 1e-6, "{dk} vs {exact}");
}

#[test]
fn off_shell_quadrature_is_not_integrable() {
    let c = &cases()[0];
    let e = reconstruct_potential(c.family.as_ref(), &[Point2::new(0.6, 0.0), Point2::new(1.5, 0.5)], 16).unwrap_err();
    assert!(matches!(e, Error::IntegrabilityViolated { .. }), "{e}");
}

#[test]
fn avtd_lambda_by_quadrature() {
    let g = Gowdy::avtd(AvtdConfig::standard()).unwrap();
    for t in [0.0, 0.5, 1.0] {
        let q = g.quadrature_gradient(Point2::new(t, 0.4)).unwrap().unwrap();
        assert!((q[0].value() - 1.0 - (-4.0 * t).exp()).abs() < 1e-14);
        assert!(q[1].value().abs() < 1e-14);
    }
    let dl = reconstruct_potential(&g, &[Point2::new(0.0, 1.0), Point2::new(1.0, 1.0)], 16).unwrap();
    let exact = 1.0 + (1.0 - (-4.0f64).exp()) / 4.0;
    assert!((dl - exact).abs() < 1e-6);
    assert!((dl - 1.24542).abs() < 1e-5);
}

#[test]
fn avtd_residual_decays() {
    let g = Gowdy::avtd(AvtdConfig::standard()).unwrap();
    let sys = g.system().unwrap();
    let r = field_eq_residual(sys, Point2::new(1.0, 0.3)).unwrap();
    assert!((r[0] - 0.01832).abs() < 1e-5);
    for i in 0..=50 {
        let t = 0.1 * i as f64;
        let p = Point2::new(t, 2.0);
        let m = g.main_eq_residuals(p).unwrap().unwrap();
        assert!((m[0] * (4.0 * t).exp() - 1.0).abs() < 1e-9, "t = {t}");
        assert!(m[1].abs() < 1e-12);
        // the generic form cancels O(1) terms, so its error is absolute
        let r = field_eq_residual(sys, p).unwrap();
        assert!((r[0] - (-4.0 * t).exp()).abs() < 1e-14, "t = {t}");
        assert!(r[1].abs() < 1e-12);
    }
}

#[test]
fn avtd_induced_metric() {
    let g = Gowdy::avtd(AvtdConfig::standard()).unwrap();
    let h = g.metric(Point2::new(1.0, 0.0)).unwrap();
    assert!((h[0].value() - 0.18394).abs() < 1e-5);
    assert_eq!(h[1].value(), 0.0);
    assert!((h[2].value() - 0.02489).abs() < 1e-5);
}

#[test]
fn schwarzschild_induced_metric() {
    let s = Schwarzschild::new(1.0, ExtensionField::Cartesian).unwrap();
    let h = s.metric(Point2::new(4.0, PI / 2.0)).unwrap();
    assert!((h[0].value() - 0.0625).abs() < 1e-14);
    assert!(h[1].value().abs() < 1e-14);
    assert!((h[2].value() - 16.0).abs() < 1e-12);
}

#[test]
fn schwarzschild_fields_are_harmonic() {
    for m in [0.5, 1.0, 3.0] {
        for x in [ExtensionField::Cartesian, ExtensionField::Multipole { n: 2 }, ExtensionField::Multipole { n: 3 }] {
            let s = Schwarzschild::new(m, x).unwrap();
            for p in points(12, 10, [2.5, 10.0], [0.0, 2.0 * PI]) {
                let r = field_eq_residual(s.system().unwrap(), p).unwrap();
                assert!(r[0].abs() < 1e-10 && r[1].abs() < 1e-10, "{r:?}");
            }
        }
    }
}

#[test]
fn extension_blocks_decouple() {
    let s = Schwarzschild::new(1.0, ExtensionField::Cartesian).unwrap();
    let w = StationaryAxisymmetric::curzon(1.0, Some(field("z", ["rho", "z"]))).unwrap();
    for p in [Point2::new(3.0, 0.4), Point2::new(1.0, 0.2)] {
        assert_eq!(extension_defect(s.system().unwrap(), p).unwrap(), 0.0);
        assert_eq!(extension_defect(w.system().unwrap(), p).unwrap(), 0.0);
    }
}

#[test]
fn degenerate_configurations_are_refused() {
    let p = Point2::new(1.0, 0.3);
    let cz = StationaryAxisymmetric::curzon(1.0, None).unwrap();
    assert!(matches!(cz.metric(p), Err(Error::Unsupported(_))));
    // the field equations remain available
    assert_eq!(field_eq_residual(cz.system().unwrap(), p).unwrap().len(), 2);
    assert!(Schwarzschild::new(1.0, ExtensionField::LogRadius).is_err());
    let er = EinsteinRosen::new(field("t*rho", ["t", "rho"]), field("2", ["t", "rho"])).unwrap();
    assert!(matches!(er.metric(p), Err(Error::Unsupported(_))));
}
