//! Closed-form coincidence rates, monochromator-filtered spectra,
//! polarization fringes and visibility.

use crate::curve::{Abscissa, CoincidenceCurve};
use crate::error::{invalid, Error, Result};
use crate::numeric::integrate_linear;
use crate::optics::{apply_common_path, coincidence_projection, coincidence_projection_at, hwp};
use crate::scalar::{Real, SPEED_OF_LIGHT};
use crate::state::{sinc_amplitude, BiphotonAmplitude};

/// Coincidence rate of the uncompensated crystal output as a function of the
/// dimensionless offset `x = W tau0` and the two analyzer angles:
///
/// ```text
/// sinc^2(x) [ sin^2(t1 + t2) cos^2(x) + sin^2(t1 - t2) sin^2(x) ]
/// ```
pub fn rc_closed_form<T: Real>(omega_tau0: T, theta1: T, theta2: T) -> T {
    let f = sinc_amplitude(omega_tau0);
    let (s, c) = omega_tau0.sin_cos();
    let plus = (theta1 + theta2).sin();
    let minus = (theta1 - theta2).sin();
    f * f * (plus * plus * c * c + minus * minus * s * s)
}

fn two_pi_c<T: Real>() -> T {
    T::lit(2.0) * T::PI() * T::lit(SPEED_OF_LIGHT)
}

/// Frequency offset (rad/s) of a photon at wavelength `lambda` from the
/// degenerate frequency `2 pi c / lambda0`.
pub fn wavelength_to_offset<T: Real>(lambda: T, lambda0: T) -> Result<T> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(invalid("lambda", format!("must be positive, got {lambda}")));
    }
    if !(lambda0 > T::zero()) || !lambda0.is_finite() {
        return Err(invalid(
            "lambda0",
            format!("must be positive, got {lambda0}"),
        ));
    }
    Ok(two_pi_c::<T>() * (T::one() / lambda - T::one() / lambda0))
}

/// Inverse of [`wavelength_to_offset`].
pub fn offset_to_wavelength<T: Real>(omega: T, lambda0: T) -> Result<T> {
    if !(lambda0 > T::zero()) || !lambda0.is_finite() {
        return Err(invalid(
            "lambda0",
            format!("must be positive, got {lambda0}"),
        ));
    }
    let w = two_pi_c::<T>() / lambda0 + omega;
    if !(w > T::zero()) || !w.is_finite() {
        return Err(invalid("omega", "optical frequency must stay positive"));
    }
    Ok(two_pi_c::<T>() / w)
}

/// Wavelengths of the two singlet frequencies `W tau0 = +-pi/2`, in
/// ascending order.
pub fn singlet_wavelengths<T: Real>(lambda0: T, tau0: T) -> Result<(T, T)> {
    let w = T::FRAC_PI_2() / tau0;
    Ok((
        offset_to_wavelength(w, lambda0)?,
        offset_to_wavelength(-w, lambda0)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterShape {
    Rectangular,
    Gaussian,
}

/// Spectral passband of the monochromator (or any band filter) in front of
/// detector 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralFilter<T: Real> {
    center_lambda: T,
    fwhm_lambda: T,
    shape: FilterShape,
}

impl<T: Real> SpectralFilter<T> {
    pub fn new(center_lambda: T, fwhm_lambda: T, shape: FilterShape) -> Result<Self> {
        if !(center_lambda > T::zero()) || !center_lambda.is_finite() {
            return Err(invalid("center_lambda", "must be positive"));
        }
        if !(fwhm_lambda > T::zero()) || !fwhm_lambda.is_finite() {
            return Err(invalid("fwhm_lambda", "must be positive"));
        }
        if fwhm_lambda >= T::lit(2.0) * center_lambda {
            return Err(invalid("fwhm_lambda", "passband reaches zero wavelength"));
        }
        Ok(Self {
            center_lambda,
            fwhm_lambda,
            shape,
        })
    }

    /// 0.8 nm rectangular passband.
    pub fn monochromator(center_lambda: T) -> Result<Self> {
        Self::new(center_lambda, T::lit(0.8e-9), FilterShape::Rectangular)
    }

    pub fn center_lambda(&self) -> T {
        self.center_lambda
    }

    pub fn fwhm_lambda(&self) -> T {
        self.fwhm_lambda
    }

    pub fn shape(&self) -> FilterShape {
        self.shape
    }

    pub fn centered_at(&self, center_lambda: T) -> Result<Self> {
        Self::new(center_lambda, self.fwhm_lambda, self.shape)
    }

    /// Wavelength interval outside of which the transmission is treated as
    /// zero: the passband itself for the rectangular shape, `+-1.5 FWHM`
    /// (about `+-3.5 sigma`) for the Gaussian.
    pub fn support(&self) -> (T, T) {
        let half = match self.shape {
            FilterShape::Rectangular => self.fwhm_lambda / T::lit(2.0),
            FilterShape::Gaussian => self.fwhm_lambda * T::lit(1.5),
        };
        let lo = (self.center_lambda - half).max(self.center_lambda * T::lit(1e-3));
        (lo, self.center_lambda + half)
    }

    pub fn transmission(&self, lambda: T) -> T {
        let (lo, hi) = self.support();
        if lambda < lo || lambda > hi {
            return T::zero();
        }
        match self.shape {
            FilterShape::Rectangular => T::one(),
            FilterShape::Gaussian => {
                let sigma = self.fwhm_lambda / (T::lit(8.0) * T::LN_2()).sqrt();
                let d = (lambda - self.center_lambda) / sigma;
                (-d * d / T::lit(2.0)).exp()
            }
        }
    }

    /// Frequency-offset interval `[lo, hi]` (rad/s) covered by the support.
    pub fn offset_support(&self, lambda0: T) -> Result<(T, T)> {
        let (l_lo, l_hi) = self.support();
        Ok((
            wavelength_to_offset(l_hi, lambda0)?,
            wavelength_to_offset(l_lo, lambda0)?,
        ))
    }

    fn fits(&self, state: &BiphotonAmplitude<T>) -> Result<bool> {
        let (lo, hi) = self.offset_support(state.lambda0())?;
        let limit = state.grid().half_extent() / state.tau0();
        Ok(lo >= -limit && hi <= limit)
    }

    fn outside_error(&self) -> Error {
        let (lo, hi) = self.support();
        Error::PassbandOutsideGrid {
            lo_m: lo.to_f64().unwrap_or(f64::NAN),
            hi_m: hi.to_f64().unwrap_or(f64::NAN),
        }
    }
}

/// Per-sample oracle rates `R(W_k)` for one analyzer setting.
fn oracle_rates<T: Real>(state: &BiphotonAmplitude<T>, theta1: T, theta2: T) -> Vec<T> {
    (0..state.len())
        .map(|k| coincidence_projection_at(state, theta1, theta2, k))
        .collect()
}

/// Filter-weighted average of per-sample rates, for the filter's own center.
fn filtered_average<T: Real>(
    state: &BiphotonAmplitude<T>,
    omegas: &[T],
    rates: &[T],
    filter: &SpectralFilter<T>,
) -> Result<T> {
    if !filter.fits(state)? {
        return Err(filter.outside_error());
    }
    let (lo, hi) = filter.offset_support(state.lambda0())?;
    match filter.shape {
        FilterShape::Rectangular => Ok(integrate_linear(omegas, rates, lo, hi) / (hi - lo)),
        FilterShape::Gaussian => {
            let lambda0 = state.lambda0();
            let (mut num, mut den) = (T::zero(), T::zero());
            for (k, &w) in omegas.iter().enumerate() {
                if w < lo || w > hi {
                    continue;
                }
                let t = filter.transmission(offset_to_wavelength(w, lambda0)?);
                num = num + t * rates[k];
                den = den + t;
            }
            if den > T::zero() {
                Ok(num / den)
            } else {
                Err(filter.outside_error())
            }
        }
    }
}

/// Coincidence rate seen through `filter` centered where it is.
pub fn filtered_rate<T: Real>(
    state: &BiphotonAmplitude<T>,
    theta1: T,
    theta2: T,
    filter: &SpectralFilter<T>,
) -> Result<T> {
    let omegas: Vec<T> = (0..state.len()).map(|k| state.omega(k)).collect();
    filtered_average(state, &omegas, &oracle_rates(state, theta1, theta2), filter)
}

/// Coincidence rate against the wavelength selected in port 1.
///
/// Without a filter every grid sample is reported as-is. With a filter, its
/// passband is swept across the grid (the filter's own center is ignored) and
/// only positions whose passband fits inside the grid are kept. Rates are in
/// the units of [`coincidence_projection`]; use
/// [`normalize_family`](crate::curve::normalize_family) for plotting.
pub fn coincidence_spectrum<T: Real>(
    state: &BiphotonAmplitude<T>,
    theta1: T,
    theta2: T,
    filter: Option<&SpectralFilter<T>>,
) -> Result<CoincidenceCurve<T>> {
    let omegas: Vec<T> = (0..state.len()).map(|k| state.omega(k)).collect();
    let rates = oracle_rates(state, theta1, theta2);
    let lambda0 = state.lambda0();
    let mut xs = Vec::with_capacity(omegas.len());
    let mut ys = Vec::with_capacity(omegas.len());
    for (k, &w) in omegas.iter().enumerate() {
        let lambda = offset_to_wavelength(w, lambda0)?;
        let value = match filter {
            None => rates[k],
            Some(f) => {
                let moved = f.centered_at(lambda)?;
                if !moved.fits(state)? {
                    continue;
                }
                filtered_average(state, &omegas, &rates, &moved)?
            }
        };
        xs.push(lambda);
        ys.push(value);
    }
    if xs.is_empty() {
        return Err(filter
            .map(|f| f.outside_error())
            .unwrap_or_else(|| invalid("state", "empty grid")));
    }
    let label = format!(
        "theta1={:.4}deg theta2={:.4}deg",
        theta1.to_degrees(),
        theta2.to_degrees()
    );
    CoincidenceCurve::from_monotone(Abscissa::Lambda, label, xs, ys)
}

/// Rate against the port-2 analyzer angle at a fixed offset `omega`.
pub fn polarization_fringe<T: Real>(
    state: &BiphotonAmplitude<T>,
    theta1_fixed: T,
    theta2_sweep: &[T],
    omega: T,
) -> Result<CoincidenceCurve<T>> {
    let rates = theta2_sweep
        .iter()
        .map(|&t2| coincidence_projection(state, theta1_fixed, t2, omega))
        .collect::<Result<Vec<T>>>()?;
    CoincidenceCurve::new(
        Abscissa::Theta,
        format!("theta1={:.4}deg", theta1_fixed.to_degrees()),
        theta2_sweep.to_vec(),
        rates,
    )
}

/// `(max - min) / (max + min)` over the samples; `None` for fewer than two
/// samples or an all-zero curve.
pub fn visibility<T: Real>(curve: &CoincidenceCurve<T>) -> Option<T> {
    if curve.len() < 2 {
        return None;
    }
    let (max, min) = (curve.max_rate(), curve.min_rate());
    if !(max + min > T::zero()) {
        return None;
    }
    Some((max - min) / (max + min))
}

/// One spectrum per half-wave-plate angle placed before the beamsplitter.
pub fn hwp_scan_family<T: Real>(
    state: &BiphotonAmplitude<T>,
    alphas: &[T],
    theta1: T,
    theta2: T,
    filter: Option<&SpectralFilter<T>>,
) -> Result<Vec<CoincidenceCurve<T>>> {
    alphas
        .iter()
        .map(|&alpha| {
            let rotated = apply_common_path(state, &hwp(alpha))?;
            let mut curve = coincidence_spectrum(&rotated, theta1, theta2, filter)?;
            curve.set_label(format!(
                "hwp={:.4}deg {}",
                alpha.to_degrees(),
                curve.label()
            ));
            Ok(curve)
        })
        .collect()
}

/// Largest difference between the rates produced by the half-wave-plate
/// angles `alphas`, at each of the two singlet offsets `W tau0 = -pi/2, +pi/2`.
pub fn hwp_singlet_spread<T: Real>(
    state: &BiphotonAmplitude<T>,
    alphas: &[T],
    theta1: T,
    theta2: T,
) -> Result<[T; 2]> {
    let w = T::FRAC_PI_2() / state.tau0();
    let mut out = [T::zero(); 2];
    for (slot, omega) in out.iter_mut().zip([-w, w]) {
        let rates = alphas
            .iter()
            .map(|&a| {
                let rotated = apply_common_path(state, &hwp(a))?;
                coincidence_projection(&rotated, theta1, theta2, omega)
            })
            .collect::<Result<Vec<T>>>()?;
        let max = rates.iter().fold(T::neg_infinity(), |m, &r| m.max(r));
        let min = rates.iter().fold(T::infinity(), |m, &r| m.min(r));
        *slot = max - min;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::normalize_family;
    use crate::state::{make_spdc_state, pair_rate_spectrum, FrequencyGrid, SourceParams};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    const TAU0: f64 = 63e-15;
    const LAMBDA0: f64 = 702e-9;
    const NM: f64 = 1e-9;

    fn state() -> BiphotonAmplitude<f64> {
        let src = SourceParams::new(LAMBDA0, TAU0).unwrap();
        make_spdc_state(&src, &FrequencyGrid::default(), true).unwrap()
    }

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    #[test]
    fn closed_form_landmarks() {
        let q = FRAC_PI_4;
        assert_eq!(rc_closed_form(0.0, q, q), 1.0);
        assert!(rc_closed_form(FRAC_PI_2, q, q).abs() < 1e-30);
        assert!((rc_closed_form(FRAC_PI_2, q, -q) - 4.0 / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn wavelength_conversion() {
        assert_eq!(wavelength_to_offset(LAMBDA0, LAMBDA0).unwrap(), 0.0);
        let w = wavelength_to_offset(708.5 * NM, LAMBDA0).unwrap();
        assert!((w + 2.4617e13).abs() < 0.001e13, "{w}");
        let tau0 = FRAC_PI_2 / w.abs();
        assert!((tau0 - 6.38e-14).abs() < 0.01e-14, "{tau0}");
        for lambda in [650.0 * NM, 695.5 * NM, 708.5 * NM, 760.0 * NM] {
            let back =
                offset_to_wavelength(wavelength_to_offset(lambda, LAMBDA0).unwrap(), LAMBDA0)
                    .unwrap();
            assert!(((back - lambda) / lambda).abs() < 1e-12);
        }
        assert!(wavelength_to_offset(0.0, LAMBDA0).is_err());
        assert!(wavelength_to_offset(-1.0, LAMBDA0).is_err());
        assert!(offset_to_wavelength(-1e17, LAMBDA0).is_err());
    }

    #[test]
    fn singlet_wavelengths_sit_near_reported_values() {
        let (blue, red) = singlet_wavelengths(LAMBDA0, TAU0).unwrap();
        assert!((blue - 695.5 * NM).abs() < 0.2 * NM, "{blue}");
        assert!((red - 708.5 * NM).abs() < 0.2 * NM, "{red}");
    }

    #[test]
    fn envelope_fwhm_in_wavelength() {
        let st = state();
        let fam = coincidence_spectrum(&st, FRAC_PI_4, FRAC_PI_4, None).unwrap();
        let anti = coincidence_spectrum(&st, FRAC_PI_4, -FRAC_PI_4, None).unwrap();
        let env: Vec<f64> = fam
            .rate()
            .iter()
            .zip(anti.rate())
            .map(|(a, b)| a + b)
            .collect();
        let env = CoincidenceCurve::new(Abscissa::Lambda, "env", fam.x().to_vec(), env).unwrap();
        let fwhm = env.fwhm().unwrap();
        assert!((fwhm - 12.0 * NM).abs() < 1.0 * NM, "{fwhm}");
        // the Omega-domain envelope agrees with the pair-rate spectrum
        let ps = pair_rate_spectrum(&st);
        assert!((ps.fwhm().unwrap() * TAU0 - 2.7831).abs() < 1e-3);
    }

    #[test]
    fn spectrum_geometry() {
        let st = state();
        let (blue, red) = singlet_wavelengths(LAMBDA0, TAU0).unwrap();
        let par = coincidence_spectrum(&st, FRAC_PI_4, FRAC_PI_4, None).unwrap();
        let anti = coincidence_spectrum(&st, FRAC_PI_4, -FRAC_PI_4, None).unwrap();
        let at = |c: &CoincidenceCurve<f64>, i: usize| c.x()[i];
        assert!((at(&par, par.argmax().unwrap()) - LAMBDA0).abs() < 0.05 * NM);
        for singlet in [blue, red] {
            let i = par
                .argmin_in(singlet - 2.0 * NM, singlet + 2.0 * NM)
                .unwrap();
            assert!((at(&par, i) - singlet).abs() < 0.05 * NM);
            assert!(par.rate()[i] < 1e-12);
        }
        let centre = anti
            .argmin_in(LAMBDA0 - 2.0 * NM, LAMBDA0 + 2.0 * NM)
            .unwrap();
        assert!((at(&anti, centre) - LAMBDA0).abs() < 0.05 * NM);
        assert!(anti.rate()[centre] < 1e-12);
        // Maxima of the crossed-analyzer spectrum sit at tan(x) = 2x, inside
        // the singlet wavelengths.
        let x_peak = crate::numeric::bisect(|x: f64| x.tan() - 2.0 * x, 1.0, 1.4, 1e-14).unwrap();
        let (peak_blue, peak_red) = (
            offset_to_wavelength(x_peak / TAU0, LAMBDA0).unwrap(),
            offset_to_wavelength(-x_peak / TAU0, LAMBDA0).unwrap(),
        );
        let ib = anti.argmax_in(LAMBDA0 - 15.0 * NM, LAMBDA0).unwrap();
        let ir = anti.argmax_in(LAMBDA0, LAMBDA0 + 15.0 * NM).unwrap();
        assert!((at(&anti, ib) - peak_blue).abs() < 0.05 * NM);
        assert!((at(&anti, ir) - peak_red).abs() < 0.05 * NM);
        assert!(blue < at(&anti, ib) && at(&anti, ir) < red);
    }

    #[test]
    fn filtered_spectrum_keeps_extrema_and_stays_inside_grid() {
        let st = state();
        let mono = SpectralFilter::monochromator(LAMBDA0).unwrap();
        let par = coincidence_spectrum(&st, FRAC_PI_4, FRAC_PI_4, Some(&mono)).unwrap();
        let (blue, red) = singlet_wavelengths(LAMBDA0, TAU0).unwrap();
        let i = par.argmax().unwrap();
        assert!((par.x()[i] - LAMBDA0).abs() < 0.05 * NM);
        let j = par.argmin_in(red - 2.0 * NM, red + 2.0 * NM).unwrap();
        assert!((par.x()[j] - red).abs() < 0.2 * NM);
        let j = par.argmin_in(blue - 2.0 * NM, blue + 2.0 * NM).unwrap();
        assert!((par.x()[j] - blue).abs() < 0.2 * NM);
        assert!(par.len() < st.len());
        // Rectangular average of a smooth curve stays close to the raw value
        let raw = coincidence_spectrum(&st, FRAC_PI_4, FRAC_PI_4, None).unwrap();
        let centre_raw = raw.value_at(LAMBDA0).unwrap();
        let centre_filtered = par.value_at(LAMBDA0).unwrap();
        assert!(centre_filtered < centre_raw && centre_raw - centre_filtered < 0.01);

        let gauss = SpectralFilter::new(LAMBDA0, 0.8 * NM, FilterShape::Gaussian).unwrap();
        let g = coincidence_spectrum(&st, FRAC_PI_4, FRAC_PI_4, Some(&gauss)).unwrap();
        assert!((g.x()[g.argmax().unwrap()] - LAMBDA0).abs() < 0.05 * NM);
    }

    #[test]
    fn wide_filter_flattens() {
        let st = state();
        let q = FRAC_PI_4;
        // the 2pi grid spans about 677..729 nm
        let too_wide = SpectralFilter::new(LAMBDA0, 60.0 * NM, FilterShape::Rectangular).unwrap();
        assert!(matches!(
            coincidence_spectrum(&st, q, q, Some(&too_wide)),
            Err(Error::PassbandOutsideGrid { .. })
        ));
        let fit = SpectralFilter::new(LAMBDA0, 40.0 * NM, FilterShape::Rectangular).unwrap();
        let flat = coincidence_spectrum(&st, q, q, Some(&fit)).unwrap();
        let narrow = coincidence_spectrum(&st, q, q, None).unwrap();
        let spread = |c: &CoincidenceCurve<f64>| c.max_rate() - c.min_rate();
        assert!(spread(&flat) < 0.5 * spread(&narrow));
        // At the centre: the passband average of the per-offset rate
        let expect = filtered_rate(&st, q, q, &fit).unwrap();
        let got = flat.value_at(LAMBDA0).unwrap();
        assert!((got - expect).abs() < 1e-3);
    }

    #[test]
    fn filter_rules() {
        assert!(SpectralFilter::new(LAMBDA0, 0.0, FilterShape::Rectangular).is_err());
        assert!(SpectralFilter::new(-1.0, 1e-9, FilterShape::Rectangular).is_err());
        let f = SpectralFilter::monochromator(LAMBDA0).unwrap();
        assert_eq!(f.transmission(LAMBDA0), 1.0);
        assert_eq!(f.transmission(LAMBDA0 + 0.5 * NM), 0.0);
        let g = SpectralFilter::new(LAMBDA0, 2.0 * NM, FilterShape::Gaussian).unwrap();
        assert!((g.transmission(LAMBDA0 + NM) - 0.5).abs() < 1e-12);
        let st = state();
        let off = SpectralFilter::monochromator(650.0 * NM).unwrap();
        assert!(filtered_rate(&st, 0.0, 0.0, &off).is_err());
    }

    #[test]
    fn fringes_and_visibility() {
        let st = state();
        let sweep: Vec<f64> = (-90..=90).map(|d| deg(d as f64)).collect();
        let w = FRAC_PI_2 / TAU0;
        let fr = polarization_fringe(&st, FRAC_PI_4, &sweep, w).unwrap();
        let imax = fr.argmax().unwrap();
        assert!((fr.x()[imax] - deg(-45.0)).abs() < 1e-12);
        let i45 = sweep
            .iter()
            .position(|&t| (t - deg(45.0)).abs() < 1e-12)
            .unwrap();
        assert!(fr.rate()[i45] < 1e-30);
        for (t, r) in fr.points() {
            let expect = 4.0 / (PI * PI) * (FRAC_PI_4 - t).sin().powi(2);
            assert!((r - expect).abs() < 1e-12);
        }
        assert!((visibility(&fr).unwrap() - 1.0).abs() < 1e-15);

        let fr0 = polarization_fringe(&st, FRAC_PI_4, &sweep, 0.0).unwrap();
        assert!((fr0.x()[fr0.argmax().unwrap()] - deg(45.0)).abs() < 1e-12);
        for (t, r) in fr0.points() {
            assert!((r - (FRAC_PI_4 + t).sin().powi(2)).abs() < 1e-12);
        }
        assert!(polarization_fringe(&st, 0.0, &sweep, 100.0 / TAU0).is_err());
    }

    #[test]
    fn visibility_cases() {
        let x = vec![0.0, 1.0, 2.0];
        let c = CoincidenceCurve::new(Abscissa::Theta, "", x.clone(), vec![0.0, 1.0, 0.5]).unwrap();
        assert_eq!(visibility(&c), Some(1.0));
        let flat = CoincidenceCurve::new(Abscissa::Theta, "", x.clone(), vec![0.3; 3]).unwrap();
        assert_eq!(visibility(&flat), Some(0.0));
        let zero = CoincidenceCurve::new(Abscissa::Theta, "", x, vec![0.0; 3]).unwrap();
        assert_eq!(visibility(&zero), None);
        // Uniform background b*max on an ideal fringe: V = 1/(1+2b)
        let b: f64 = 0.0102;
        let with_bg =
            CoincidenceCurve::new(Abscissa::Theta, "", vec![0.0, 1.0], vec![0.0 + b, 1.0 + b])
                .unwrap();
        let v: f64 = visibility(&with_bg).unwrap();
        assert!((v - 1.0 / (1.0 + 2.0 * b)).abs() < 1e-15);
        assert!((v - 0.98).abs() < 1e-3);
    }

    #[test]
    fn hwp_scan() {
        let st = state();
        let alphas: Vec<f64> = [7.0, 17.0, 22.5].iter().map(|&d| deg(d)).collect();
        for t2 in [FRAC_PI_4, -FRAC_PI_4] {
            let spread = hwp_singlet_spread(&st, &alphas, FRAC_PI_4, t2).unwrap();
            assert!(spread[0] < 1e-10 && spread[1] < 1e-10);
            let fam = hwp_scan_family(&st, &alphas, FRAC_PI_4, t2, None).unwrap();
            let (blue, red) = singlet_wavelengths(LAMBDA0, TAU0).unwrap();
            for lambda in [blue, red] {
                let vals: Vec<f64> = fam.iter().map(|c| c.value_at(lambda).unwrap()).collect();
                let d = vals.iter().cloned().fold(f64::MIN, f64::max)
                    - vals.iter().cloned().fold(f64::MAX, f64::min);
                // value_at interpolates around the singlet sample
                assert!(d < 1e-4);
            }
            // away from the singlet frequencies the curves separate
            let centre: Vec<f64> = fam.iter().map(|c| c.value_at(LAMBDA0).unwrap()).collect();
            assert!((centre[0] - centre[2]).abs() > 0.1);
        }
        let none = hwp_scan_family(&st, &[0.0], FRAC_PI_4, FRAC_PI_4, None).unwrap();
        let bare = coincidence_spectrum(&st, FRAC_PI_4, FRAC_PI_4, None).unwrap();
        for (a, b) in none[0].rate().iter().zip(bare.rate()) {
            assert!((a - b).abs() < 1e-15);
        }
        let fam = hwp_scan_family(&st, &[0.0, deg(22.5)], FRAC_PI_4, -FRAC_PI_4, None).unwrap();
        let c0 = fam[0].value_at(LAMBDA0).unwrap();
        let c1 = fam[1].value_at(LAMBDA0).unwrap();
        assert!(c0 < 1e-12 && (c1 - 1.0).abs() < 1e-12);
        let norm = normalize_family(&fam);
        assert!((norm[1].max_rate() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_matches_closed_form_and_spec_ties() {
        let st = state();
        let w_singlet = FRAC_PI_2 / TAU0;
        let r =
            crate::optics::coincidence_projection(&st, FRAC_PI_4, -FRAC_PI_4, w_singlet).unwrap();
        assert!((r - rc_closed_form(FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn closed_form_symmetries(x in -10.0f64..10.0, t1 in -3.2f64..3.2, t2 in -3.2f64..3.2) {
            let r = rc_closed_form(x, t1, t2);
            prop_assert!((r - rc_closed_form(-x, t1, t2)).abs() < 1e-12);
            prop_assert!((r - rc_closed_form(x, t1 + PI, t2)).abs() < 1e-12);
            prop_assert!((r - rc_closed_form(x, t1, t2 + PI)).abs() < 1e-12);
            let q = FRAC_PI_4;
            let sum = rc_closed_form(x, q, q) + rc_closed_form(x, q, -q);
            prop_assert!((sum - sinc_amplitude(x).powi(2)).abs() < 1e-12);
        }
    }
}
