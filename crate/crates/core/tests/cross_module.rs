//! Integration checks that tie the Lax-pair numerics, the integrator and the
//! classifier together.

use std::f64::consts::PI;

use p2c::acceptance::locate_separatrices;
use p2c::classifier::{classify_negative, classify_positive, fit_n2, ClassifierConfig, ClassifierError, FamilyParams};
use p2c::connection::{canonical_mod, family_from_stokes, Side};
use p2c::pii_ode::{integrate, InitialData};
use p2c::stokes_numeric::{compute_stokes, validate_prediction, StokesConfig};

fn from_numeric_stokes(a: f64, b: f64, side: Side) -> FamilyParams {
    let data = compute_stokes(a, b, &StokesConfig::default()).expect("stokes");
    family_from_stokes(side, data.s1(), data.s2().re)
}

fn measured_negative(a: f64, b: f64) -> FamilyParams {
    let traj = integrate(InitialData::new(a, b), -31.0, 0.0, 1e-11).expect("integration");
    let cfg = ClassifierConfig::default();
    classify_negative(&traj, cfg.negative_window, &cfg).expect("classification").family
}

fn phase_gap(x: f64, y: f64) -> f64 {
    canonical_mod(x - y, 2.0 * PI).abs()
}

#[test]
fn n1_parameters_agree_with_the_fit() {
    for (a, b) in [(0.0, 0.3), (0.2, 0.0), (0.0, -0.5), (0.5, 0.2)] {
        match (from_numeric_stokes(a, b, Side::Negative), measured_negative(a, b)) {
            (FamilyParams::N1 { amplitude: d, phase: p }, FamilyParams::N1 { amplitude: fd, phase: fp }) => {
                assert!((d - fd).abs() < 0.02 * d, "({a},{b}): d {d} vs fitted {fd}");
                assert!(phase_gap(p, fp) < 0.05, "({a},{b}): phi {p} vs fitted {fp}");
            }
            (x, y) => panic!("({a},{b}): expected N1 twice, got {x:?} and {y:?}"),
        }
    }
}

#[test]
fn n3_parameters_agree_with_the_fit() {
    for (a, b) in [(0.0, 1.0), (0.0, -1.0), (0.3, 1.2)] {
        match (from_numeric_stokes(a, b, Side::Negative), measured_negative(a, b)) {
            (FamilyParams::N3 { beta, phase }, FamilyParams::N3 { beta: fb, phase: fp }) => {
                assert!((beta - fb).abs() < 0.05, "({a},{b}): beta {beta} vs fitted {fb}");
                assert!(phase_gap(phase, fp) < 0.1, "({a},{b}): varphi {phase} vs fitted {fp}");
            }
            (x, y) => panic!("({a},{b}): expected N3 twice, got {x:?} and {y:?}"),
        }
    }
}

#[test]
fn first_separatrix_is_n2_and_deep_windows_are_refused() {
    let b1 = locate_separatrices(0.0, 1, 1.0, 0.05, 1e-12)[0];
    let traj = integrate(InitialData::new(0.0, b1), -26.0, 0.0, 1e-12).unwrap();
    let cfg = ClassifierConfig { min_depth: 5.0, ..ClassifierConfig::default() };
    let c = classify_negative(&traj, (-15.0, -5.0), &cfg).expect("N2 on the shallow window");
    let FamilyParams::N2 { sign, tail } = c.family else { panic!("expected N2, got {:?}", c.family) };
    assert_eq!(sign, 1.0);
    // Leading order from the Stokes data on the separatrix.
    let FamilyParams::N2 { tail: predicted, .. } = from_numeric_stokes(0.0, b1, Side::Negative) else {
        panic!("numeric Stokes data at b1 should sit on the curve")
    };
    assert!((tail - predicted).abs() < 0.15, "h fitted {tail} vs {predicted}");
    // Beyond the resolvable depth the solution has left the separatrix and
    // the tail fit must refuse.
    let deep = fit_n2(&traj, (-25.0, -20.0), &cfg);
    assert!(matches!(deep, Err(ClassifierError::SeparatrixInstability(_))), "{deep:?}");
}

#[test]
fn hastings_mcleod_data_decay_like_airy() {
    let traj =
        integrate(InitialData::new(0.367_061_551_548_077_7, -0.295_372_105_447_550_05), 0.0, 12.0, 1e-12).unwrap();
    let cfg = ClassifierConfig::default();
    let c = classify_positive(&traj, (4.0, 12.0), &cfg).expect("classification");
    let FamilyParams::P2 { kappa } = c.family else { panic!("expected P2, got {:?}", c.family) };
    assert!((kappa - 1.0).abs() < 1e-3, "kappa {kappa}");
}

#[test]
fn pole_sign_matches_the_stokes_sign() {
    let cfg = ClassifierConfig::default();
    for (a, b) in [(1.5, 0.0), (1.2, 0.3), (1.3, -0.5)] {
        let s2 = compute_stokes(a, b, &StokesConfig::default()).unwrap().s2().re;
        let traj = integrate(InitialData::new(a, b), 0.0, 16.0, 1e-11).unwrap();
        let c = classify_positive(&traj, cfg.positive_window, &cfg).unwrap();
        let FamilyParams::P1 { sign, .. } = c.family else { panic!("({a},{b}): expected P1, got {:?}", c.family) };
        assert_eq!(sign, s2.signum(), "({a},{b}): s2 = {s2}");
    }
}

/// Case-one predictions for `A B > 0` and `A B < 0` at equal `xi` and `|B/A|`.
/// The errors are printed rather than compared: neither quadrant is
/// systematically better, both are dominated by the `cos` node of `s2`.
#[test]
fn both_sign_quadrants_are_reported() {
    println!("xi   B/A    s1 rel err   s2 rel err");
    for xi in [2.0f64, 3.0, 4.0] {
        for ratio in [0.3f64, -0.3] {
            // A^4 = 1 + B^2 with B = ratio A.
            let mut a4: f64 = 1.5;
            for _ in 0..60 {
                a4 = 1.0 + ratio * ratio * a4.sqrt();
            }
            let amp = a4.sqrt().sqrt();
            let (a, b) = (amp * xi.cbrt(), ratio * amp * xi.powf(2.0 / 3.0));
            let v = validate_prediction(a, b, &StokesConfig::default()).expect("case one in both quadrants");
            println!("{xi:<4} {ratio:+.1}  {:.3e}    {:.3e}", v.rows[0].rel_err, v.rows[1].rel_err);
            assert!(v.rows.iter().all(|r| r.rel_err.is_finite()));
            assert!(v.rows[0].rel_err < 0.2, "s1 error at xi {xi}, B/A {ratio}");
        }
    }
}
