use std::f64::consts::{FRAC_PI_4, PI};

use proptest::prelude::*;
use spdc_core::analytics::{coincidence_spectrum, rc_closed_form};
use spdc_core::optics::coincidence_projection_at;
use spdc_core::state::{make_spdc_state, sinc_amplitude};
use spdc_core::{BiphotonAmplitude, FrequencyGrid, FrequencyGrid32, SourceParams, SourceParams32};

fn state() -> BiphotonAmplitude {
    let src = SourceParams::new(702e-9, 63e-15).unwrap();
    make_spdc_state(&src, &FrequencyGrid::default(), true).unwrap()
}

proptest! {
    #[test]
    fn closed_form_symmetries(x in -6.0f64..6.0, t1 in -PI..PI, t2 in -PI..PI) {
        let r = rc_closed_form(x, t1, t2);
        prop_assert!((r - rc_closed_form(-x, t1, t2)).abs() < 1e-12);
        prop_assert!((r - rc_closed_form(x, t1 + PI, t2)).abs() < 1e-12);
        prop_assert!((r - rc_closed_form(x, t1, t2 + PI)).abs() < 1e-12);
        let f = sinc_amplitude(x);
        prop_assert!(r >= 0.0 && r <= f * f + 1e-15);
    }

    #[test]
    fn grid_rates_mirror(k in 0usize..2049, t1 in -PI..PI, t2 in -PI..PI) {
        let st = state();
        let a = coincidence_projection_at(&st, t1, t2, k);
        let b = coincidence_projection_at(&st, t1, t2, st.len() - 1 - k);
        prop_assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn crossed_at_zero_is_pure_envelope() {
    // sin^2(45 + 0) = sin^2(45 - 0) = 1/2: the bracket is flat.
    let st = state();
    let c = coincidence_spectrum(&st, FRAC_PI_4, 0.0, None).unwrap();
    let mut x = (0..st.len())
        .map(|k| st.grid().offset(k))
        .collect::<Vec<_>>();
    x.reverse();
    for (rate, x) in c.rate().iter().zip(x) {
        let f = sinc_amplitude(x);
        assert!((rate - 0.5 * f * f).abs() < 1e-12);
    }
}

#[test]
fn single_precision_tracks_double() {
    let s64 = state();
    let src = SourceParams32::new(702e-9, 63e-15).unwrap();
    let s32 = make_spdc_state(&src, &FrequencyGrid32::default(), true).unwrap();
    for k in (0..s64.len()).step_by(17) {
        let a = coincidence_projection_at(&s64, 0.3, -1.1, k);
        let b = coincidence_projection_at(&s32, 0.3f32, -1.1f32, k);
        assert!((a - f64::from(b)).abs() < 1e-5, "k={k}: {a} vs {b}");
    }
}
