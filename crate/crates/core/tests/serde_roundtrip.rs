//! JSON documents parse back to the values they were written from.

use p2c::classifier::{Classification, FamilyParams};
use p2c::cli::classify_point;
use p2c::connection::connection_report;
use p2c::stokes_numeric::{compute_stokes, StokesConfig};
use proptest::prelude::*;
use serde::{de::DeserializeOwned, Serialize};

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(x: &T) {
    let text = serde_json::to_string(x).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, x, "{text}");
}

fn family() -> impl Strategy<Value = FamilyParams> {
    let r = -10.0f64..10.0;
    prop_oneof![
        (r.clone(), r.clone()).prop_map(|(amplitude, phase)| FamilyParams::N1 { amplitude, phase }),
        (r.clone(), any::<bool>()).prop_map(|(tail, s)| FamilyParams::N2 { sign: if s { 1.0 } else { -1.0 }, tail }),
        (r.clone(), r.clone()).prop_map(|(beta, phase)| FamilyParams::N3 { beta, phase }),
        (r.clone(), r.clone(), any::<bool>()).prop_map(|(gamma, chi, s)| FamilyParams::P1 {
            sign: if s { 1.0 } else { -1.0 },
            gamma,
            chi
        }),
        r.prop_map(|kappa| FamilyParams::P2 { kappa }),
    ]
}

proptest! {
    #[test]
    fn connection_reports(a in -3.0f64..3.0, b in 0.05f64..3.0) {
        // Reports exist off the degenerate lines and outside the A B < 0
        // quadrant of case two.
        if let Ok(r) = connection_report(a, b) {
            round_trip(&r);
        }
    }

    #[test]
    fn classifications(family in family(), residual in 0.0f64..1.0, poles in prop::collection::vec(-1.0f64..1.0, 0..5)) {
        round_trip(&Classification { family, residual, window: (-30.0, -15.0), pole_residuals: poles });
    }
}

#[test]
fn stokes_data() {
    round_trip(&compute_stokes(0.8, 0.3, &StokesConfig::default()).unwrap());
}

#[test]
fn classify_reports() {
    round_trip(&classify_point(0.0, 0.5, -30.0, 16.0, 1e-10).unwrap());
}
