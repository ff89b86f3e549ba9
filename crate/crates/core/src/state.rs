//! Two-photon polarization-frequency amplitude of collinear, frequency
//! degenerate type-II down-conversion, and its Bell-state content.
//!
//! The state is stored as a 2x2 complex matrix `A[p][q](W)` per sample of a
//! symmetric frequency-offset grid: the amplitude for polarization `p` at
//! `w0 + W` and polarization `q` at `w0 - W`. For the crystal output
//!
//! ```text
//! A_HV(W) = F(W) exp(+i W tau0),   A_VH(W) = F(W) exp(-i W tau0),
//! A_HH = A_VV = 0,                 F(W) = sin(W tau0) / (W tau0)
//! ```
//!
//! The vacuum part of the field never produces a coincidence and is not
//! represented. Relabeling the two photons maps `A[p][q](W)` onto
//! `A[q][p](-W)`, so every valid state satisfies that exchange symmetry.

use crate::curve::{Abscissa, CoincidenceCurve};
use crate::error::{invalid, Error, Result};
use crate::matrix::Mat2;
use crate::numeric::{bisect, trapezoid_weight};
use crate::scalar::{cis, creal, Cplx, Real};

pub const H: usize = 0;
pub const V: usize = 1;

/// `sin(x)/x`, equal to 1 at the removable singularity.
#[inline]
pub fn sinc_amplitude<T: Real>(x: T) -> T {
    if x == T::zero() {
        T::one()
    } else {
        x.sin() / x
    }
}

/// Positive root of `sinc(x)^2 = 1/2` (half width at half maximum of the
/// pair-rate spectrum, in units of `1/tau0`), found by bisection.
pub fn sinc_squared_half_max<T: Real>() -> T {
    let half = T::lit(0.5);
    bisect(
        |x: T| {
            let s = sinc_amplitude(x);
            s * s - half
        },
        T::lit(0.5),
        T::FRAC_PI_2(),
        T::epsilon(),
    )
    .expect("sinc^2 - 1/2 changes sign on [0.5, pi/2]")
}

/// Crystal and pump parameters of the source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams<T: Real> {
    lambda0: T,
    tau0: T,
    crystal: Option<(T, T)>,
}

impl<T: Real> SourceParams<T> {
    /// `lambda0` is the degenerate wavelength (m), `tau0` the mean e-o delay (s).
    pub fn new(lambda0: T, tau0: T) -> Result<Self> {
        check_positive("lambda0", lambda0)?;
        check_positive("tau0", tau0)?;
        Ok(Self {
            lambda0,
            tau0,
            crystal: None,
        })
    }

    /// Derives `tau0 = D L / 2` from the inverse group-velocity difference `d`
    /// (s/m) and the crystal length `l` (m).
    pub fn from_crystal(lambda0: T, d: T, l: T) -> Result<Self> {
        check_positive("D", d)?;
        check_positive("L", l)?;
        let mut src = Self::new(lambda0, d * l / T::lit(2.0))?;
        src.crystal = Some((d, l));
        Ok(src)
    }

    pub fn lambda0(&self) -> T {
        self.lambda0
    }

    pub fn tau0(&self) -> T {
        self.tau0
    }

    /// `(D, L)` when the source was built from crystal parameters.
    pub fn crystal(&self) -> Option<(T, T)> {
        self.crystal
    }
}

fn check_positive<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(invalid(
            name,
            format!("must be finite and positive, got {v}"),
        ))
    }
}

/// Uniform grid of dimensionless offsets `x_k = W_k tau0` on
/// `[-half_extent, half_extent]`, with an odd number of samples so that the
/// degenerate point `x = 0` is included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid<T: Real> {
    n_points: usize,
    half_extent: T,
}

/// Where an offset falls on a [`FrequencyGrid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridPosition<T> {
    /// Coincides with sample `k` (within a small snapping tolerance).
    Exact(usize),
    /// Strictly between samples `k` and `k + 1`, at fraction `t`.
    Between(usize, T),
}

impl<T: Real> FrequencyGrid<T> {
    pub const DEFAULT_POINTS: usize = 2049;

    pub fn new(n_points: usize, half_extent: T) -> Result<Self> {
        if n_points < 3 || n_points.is_multiple_of(2) {
            return Err(invalid(
                "n_points",
                format!("must be odd and at least 3, got {n_points}"),
            ));
        }
        check_positive("half_extent", half_extent)?;
        Ok(Self {
            n_points,
            half_extent,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn half_extent(&self) -> T {
        self.half_extent
    }

    pub fn center(&self) -> usize {
        self.n_points / 2
    }

    /// Spacing in units of `1/tau0`.
    pub fn step(&self) -> T {
        self.half_extent / T::from_count(self.center())
    }

    /// Dimensionless offset `x_k`. Mirrored samples are exact negatives.
    pub fn offset(&self, k: usize) -> T {
        let c = self.center();
        let m = if k >= c {
            T::from_count(k - c)
        } else {
            -T::from_count(c - k)
        };
        self.half_extent * m / T::from_count(c)
    }

    pub fn offsets(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n_points).map(move |k| self.offset(k))
    }

    /// Locates the dimensionless offset `x`. Offsets within `sqrt(eps)` grid
    /// steps of a sample snap onto it.
    pub fn locate(&self, x: T) -> Result<GridPosition<T>> {
        let c = T::from_count(self.center());
        let f = x / self.step() + c;
        let last = T::from_count(self.n_points - 1);
        let snap = T::epsilon().sqrt();
        let out_of_range = || Error::OutOfRange {
            omega_tau0: x.to_f64().unwrap_or(f64::NAN),
            half_extent: self.half_extent.to_f64().unwrap_or(f64::NAN),
        };
        if !f.is_finite() || f < -snap || f > last + snap {
            return Err(out_of_range());
        }
        let r = f.round();
        if (f - r).abs() <= snap {
            let k = r.to_usize().ok_or_else(out_of_range)?;
            return Ok(GridPosition::Exact(k.min(self.n_points - 1)));
        }
        let lo = f.floor();
        let k = lo.to_usize().ok_or_else(out_of_range)?;
        Ok(GridPosition::Between(k, f - lo))
    }
}

impl<T: Real> Default for FrequencyGrid<T> {
    /// 2049 samples over `|W tau0| <= 2 pi`, which puts `W tau0 = pi/4, pi/2, pi`
    /// exactly on the grid.
    fn default() -> Self {
        Self::new(Self::DEFAULT_POINTS, T::lit(2.0) * T::PI()).expect("valid default grid")
    }
}

/// Sampled two-photon amplitude over a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct BiphotonAmplitude<T: Real> {
    source: SourceParams<T>,
    grid: FrequencyGrid<T>,
    amps: Vec<Mat2<T>>,
    /// `sum |A_pq(0)|^2` of the freshly built source; the unit of `pair_rate`.
    reference_rate: T,
}

impl<T: Real> BiphotonAmplitude<T> {
    pub fn source(&self) -> &SourceParams<T> {
        &self.source
    }

    pub fn grid(&self) -> &FrequencyGrid<T> {
        &self.grid
    }

    pub fn tau0(&self) -> T {
        self.source.tau0
    }

    pub fn lambda0(&self) -> T {
        self.source.lambda0
    }

    pub fn amplitudes(&self) -> &[Mat2<T>] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn reference_rate(&self) -> T {
        self.reference_rate
    }

    /// Frequency offset of sample `k`, rad/s.
    pub fn omega(&self, k: usize) -> T {
        self.grid.offset(k) / self.tau0()
    }

    /// Grid spacing in rad/s.
    pub fn omega_step(&self) -> T {
        self.grid.step() / self.tau0()
    }

    /// Amplitude matrix at an arbitrary offset (rad/s); linear interpolation
    /// between samples.
    pub fn amplitude_at(&self, omega: T) -> Result<Mat2<T>> {
        Ok(match self.grid.locate(omega * self.tau0())? {
            GridPosition::Exact(k) => self.amps[k],
            GridPosition::Between(k, t) => Mat2::lerp(&self.amps[k], &self.amps[k + 1], t),
        })
    }

    /// Spectral density `S(W) = sum_pq |A_pq(W)|^2` at each sample.
    pub fn spectral_density(&self) -> Vec<T> {
        self.amps.iter().map(Mat2::norm_sqr).collect()
    }

    /// Largest violation of `A_pq(W) = A_qp(-W)` over the grid.
    pub fn exchange_asymmetry(&self) -> T {
        let n = self.amps.len();
        (0..n).fold(T::zero(), |acc, k| {
            acc.max(self.amps[k].max_abs_diff(&self.amps[n - 1 - k].transpose()))
        })
    }

    /// Returns a copy with every sample replaced by `f(k, A_k)`.
    pub(crate) fn map_samples(&self, f: impl Fn(usize, &Mat2<T>) -> Mat2<T>) -> Self {
        Self {
            amps: self.amps.iter().enumerate().map(|(k, a)| f(k, a)).collect(),
            ..self.clone()
        }
    }
}

/// Builds the crystal output state on `grid`. With `normalize`, the
/// discretized norm ([`total_pair_rate`]) is 1; otherwise `F(0) = 1`.
pub fn make_spdc_state<T: Real>(
    src: &SourceParams<T>,
    grid: &FrequencyGrid<T>,
    normalize: bool,
) -> Result<BiphotonAmplitude<T>> {
    let n = grid.n_points();
    let h = grid.step() / src.tau0;
    let scale = if normalize {
        let norm: T = (0..n)
            .map(|k| {
                let f = sinc_amplitude(grid.offset(k));
                trapezoid_weight(k, n, h) * T::lit(2.0) * f * f
            })
            .fold(T::zero(), |a, b| a + b);
        T::one() / norm.sqrt()
    } else {
        T::one()
    };
    let amps = (0..n)
        .map(|k| {
            let x = grid.offset(k);
            let f = creal(scale * sinc_amplitude(x));
            let mut m = Mat2::zero();
            m.e[H][V] = f * cis(x);
            m.e[V][H] = f * cis(-x);
            m
        })
        .collect();
    Ok(BiphotonAmplitude {
        source: *src,
        grid: *grid,
        amps,
        reference_rate: T::lit(2.0) * scale * scale,
    })
}

/// Fractions of the four Bell states in a two-photon polarization amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellFractions<T> {
    pub phi_plus: T,
    pub phi_minus: T,
    pub psi_plus: T,
    pub psi_minus: T,
}

impl<T: Real> BellFractions<T> {
    pub fn sum(&self) -> T {
        self.phi_plus + self.phi_minus + self.psi_plus + self.psi_minus
    }
}

/// Bell content at one frequency offset. `fractions` is `None` at spectral
/// zeros, where the decomposition is undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellWeights<T> {
    pub fractions: Option<BellFractions<T>>,
    /// `sum |A_pq|^2` relative to the crystal output at `W = 0`.
    pub pair_rate: T,
}

impl<T: Real> BellWeights<T> {
    pub fn psi_minus(&self) -> Option<T> {
        self.fractions.map(|f| f.psi_minus)
    }

    pub fn psi_plus(&self) -> Option<T> {
        self.fractions.map(|f| f.psi_plus)
    }
}

/// Coefficients of `m` on `(Phi+, Phi-, Psi+, Psi-)`, with
/// `Phi+- = (HH +- VV)/sqrt2` and `Psi+- = (HV +- VH)/sqrt2`.
pub fn bell_components<T: Real>(m: &Mat2<T>) -> [Cplx<T>; 4] {
    let r = T::FRAC_1_SQRT_2();
    let e = &m.e;
    [
        (e[H][H] + e[V][V]) * r,
        (e[H][H] - e[V][V]) * r,
        (e[H][V] + e[V][H]) * r,
        (e[H][V] - e[V][H]) * r,
    ]
}

/// Bell decomposition of a single amplitude matrix; `reference` is the rate
/// that maps to `pair_rate = 1`.
pub fn bell_weights_of<T: Real>(m: &Mat2<T>, reference: T) -> BellWeights<T> {
    let w = bell_components(m).map(|c| c.norm_sqr());
    let total = w.iter().fold(T::zero(), |a, &b| a + b);
    let eps = T::epsilon();
    let fractions = (total > reference * eps * eps).then(|| BellFractions {
        phi_plus: w[0] / total,
        phi_minus: w[1] / total,
        psi_plus: w[2] / total,
        psi_minus: w[3] / total,
    });
    BellWeights {
        fractions,
        pair_rate: total / reference,
    }
}

/// Bell content of `state` at offset `omega` (rad/s).
pub fn bell_decompose<T: Real>(state: &BiphotonAmplitude<T>, omega: T) -> Result<BellWeights<T>> {
    let m = state.amplitude_at(omega)?;
    Ok(bell_weights_of(&m, state.reference_rate))
}

/// `S(W_k)` against `W_k` (rad/s), scaled to a unit maximum.
pub fn pair_rate_spectrum<T: Real>(state: &BiphotonAmplitude<T>) -> CoincidenceCurve<T> {
    let x = (0..state.len()).map(|k| state.omega(k)).collect();
    CoincidenceCurve::new(Abscissa::Omega, "pair_rate", x, state.spectral_density())
        .expect("grid offsets increase and densities are non-negative")
        .peak_normalized()
}

/// Trapezoidal quadrature of `S(W)` over the grid (in rad/s).
pub fn total_pair_rate<T: Real>(state: &BiphotonAmplitude<T>) -> T {
    let n = state.len();
    let h = state.omega_step();
    state
        .amps
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (k, m)| {
            acc + trapezoid_weight(k, n, h) * m.norm_sqr()
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    const TAU0: f64 = 63e-15;

    fn source() -> SourceParams<f64> {
        SourceParams::new(702e-9, TAU0).unwrap()
    }

    fn raw_state() -> BiphotonAmplitude<f64> {
        make_spdc_state(&source(), &FrequencyGrid::default(), false).unwrap()
    }

    fn index_of(grid: &FrequencyGrid<f64>, x: f64) -> usize {
        match grid.locate(x).unwrap() {
            GridPosition::Exact(k) => k,
            other => panic!("{x} not on grid: {other:?}"),
        }
    }

    #[test]
    fn sinc_values() {
        assert_eq!(sinc_amplitude(0.0), 1.0);
        assert!((sinc_amplitude(FRAC_PI_2) - 2.0 / PI).abs() < 1e-15);
        for m in 1..20 {
            assert!(sinc_amplitude(m as f64 * PI).abs() < 1e-15, "m = {m}");
        }
        assert!((sinc_amplitude(FRAC_PI_2).powi(2) - 0.4053).abs() < 1e-4);
    }

    #[test]
    fn half_max_matches_newton_refinement() {
        // Independent route: Newton iteration on sin(x) - x/sqrt(2) = 0.
        let mut x = 1.4f64;
        for _ in 0..50 {
            let g = x.sin() - x / 2f64.sqrt();
            let dg = x.cos() - 1.0 / 2f64.sqrt();
            x -= g / dg;
        }
        let b: f64 = sinc_squared_half_max();
        assert!((b - x).abs() < 1e-10);
        assert!((2.0 * b - 2.7831).abs() < 1e-4);
        assert!((b - 1.39156).abs() < 1e-5);
    }

    #[test]
    fn source_construction_rules() {
        let s = SourceParams::from_crystal(702e-9, 252e-12, 0.5e-3).unwrap();
        assert_eq!(s.tau0(), 252e-12 * 0.5e-3 / 2.0);
        assert!(SourceParams::new(-1.0, TAU0).is_err());
        assert!(SourceParams::new(702e-9, 0.0).is_err());
        assert!(SourceParams::<f64>::from_crystal(702e-9, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn grid_rules() {
        assert!(FrequencyGrid::new(1, 1.0).is_err());
        assert!(FrequencyGrid::new(4, 1.0).is_err());
        assert!(FrequencyGrid::new(5, 0.0).is_err());
        let g = FrequencyGrid::<f64>::default();
        let n = g.n_points();
        assert_eq!(g.offset(g.center()), 0.0);
        for k in (0..n).filter(|&k| k != g.center()) {
            assert_eq!(g.offset(k).to_bits(), (-g.offset(n - 1 - k)).to_bits());
        }
        assert_eq!(g.offset(n - 1), 2.0 * PI);
        assert_eq!(g.offset(index_of(&g, FRAC_PI_2)), FRAC_PI_2);
        assert!(g.locate(7.0).is_err());
        assert!(matches!(g.locate(0.001), Ok(GridPosition::Between(_, _))));
    }

    #[test]
    fn rejects_too_small_grid() {
        assert!(FrequencyGrid::<f64>::new(1, 1.0).is_err());
    }

    #[test]
    fn source_amplitudes_at_landmarks() {
        let st = raw_state();
        let g = *st.grid();
        let a0 = st.amplitudes()[g.center()];
        assert_eq!(a0.e[H][V].re, 1.0);
        assert_eq!(a0.e[V][H].re, 1.0);
        assert_eq!(a0.e[H][H].norm(), 0.0);
        assert_eq!(a0.e[V][V].norm(), 0.0);

        let a = st.amplitudes()[index_of(&g, FRAC_PI_2)];
        assert!((a.e[H][V] - Cplx::new(0.0, 2.0 / PI)).norm() < 1e-15);
        assert!((a.e[V][H] - Cplx::new(0.0, -2.0 / PI)).norm() < 1e-15);

        let a = st.amplitudes()[index_of(&g, PI)];
        assert!(a.e[H][V].norm() < 1e-15 && a.e[V][H].norm() < 1e-15);
        assert!(st.exchange_asymmetry() < 1e-12);
    }

    #[test]
    fn normalized_state_has_unit_norm() {
        let st = make_spdc_state(&source(), &FrequencyGrid::default(), true).unwrap();
        assert!((total_pair_rate(&st) - 1.0).abs() < 1e-12);
        assert!(st.exchange_asymmetry() < 1e-12);
    }

    #[test]
    fn bell_landmarks() {
        let st = make_spdc_state(&source(), &FrequencyGrid::default(), true).unwrap();
        let w = bell_decompose(&st, 0.0).unwrap();
        let f = w.fractions.unwrap();
        assert!((f.psi_plus - 1.0).abs() < 1e-12 && f.psi_minus.abs() < 1e-12);
        assert!((w.pair_rate - 1.0).abs() < 1e-12);

        let w = bell_decompose(&st, FRAC_PI_2 / TAU0).unwrap();
        assert!((w.psi_minus().unwrap() - 1.0).abs() < 1e-12);
        assert!((w.pair_rate - 4.0 / (PI * PI)).abs() < 1e-12);

        let w = bell_decompose(&st, FRAC_PI_4 / TAU0).unwrap();
        let f = w.fractions.unwrap();
        assert!((f.psi_plus - 0.5).abs() < 1e-12 && (f.psi_minus - 0.5).abs() < 1e-12);
        assert!((w.pair_rate - sinc_amplitude(FRAC_PI_4).powi(2)).abs() < 1e-12);
        assert!((w.pair_rate - 0.8106).abs() < 1e-4);
    }

    #[test]
    fn bell_undefined_at_spectral_zero_and_out_of_range() {
        let st = raw_state();
        let w = bell_decompose(&st, PI / TAU0).unwrap();
        assert!(w.fractions.is_none());
        assert!(w.pair_rate < 1e-30);
        assert!(matches!(
            bell_decompose(&st, 7.0 / TAU0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn source_bell_content_over_whole_grid() {
        let st = raw_state();
        for k in 0..st.len() {
            let x = st.grid().offset(k);
            let w = bell_weights_of(&st.amplitudes()[k], st.reference_rate());
            assert!((w.pair_rate - sinc_amplitude(x).powi(2)).abs() < 1e-12);
            if let Some(f) = w.fractions {
                assert_eq!(f.phi_plus, 0.0);
                assert_eq!(f.phi_minus, 0.0);
                assert!((f.sum() - 1.0).abs() < 1e-12);
                assert!((f.psi_minus - x.sin().powi(2)).abs() < 1e-12);
                assert!((f.psi_plus + f.psi_minus - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spectrum_is_sinc_squared_with_expected_width() {
        let st = make_spdc_state(&source(), &FrequencyGrid::default(), true).unwrap();
        let curve = pair_rate_spectrum(&st);
        for (w, r) in curve.points() {
            assert!((r - sinc_amplitude(w * TAU0).powi(2)).abs() < 1e-12);
        }
        let fwhm_x = curve.fwhm().unwrap() * TAU0;
        assert!((fwhm_x - 2.0 * sinc_squared_half_max::<f64>()).abs() < 1e-4);
    }

    #[test]
    fn off_grid_query_interpolates_linearly() {
        let st = raw_state();
        let g = *st.grid();
        let k = g.center() + 10;
        let mid = 0.5 * (st.omega(k) + st.omega(k + 1));
        let a = st.amplitude_at(mid).unwrap();
        let expect = Mat2::lerp(&st.amplitudes()[k], &st.amplitudes()[k + 1], 0.5);
        assert!(a.max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn norm_converges_quadratically_under_refinement() {
        // Fixed extent; halve the spacing twice. Differences shrink ~4x.
        let src = source();
        let rates: Vec<f64> = [257usize, 513, 1025]
            .iter()
            .map(|&n| {
                let g = FrequencyGrid::new(n, 2.3).unwrap();
                total_pair_rate(&make_spdc_state(&src, &g, false).unwrap()) * TAU0
            })
            .collect();
        let d1 = (rates[1] - rates[0]).abs();
        let d2 = (rates[2] - rates[1]).abs();
        let ratio = d1 / d2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn single_precision_landmarks() {
        let src = SourceParams::<f32>::new(702e-9, 63e-15).unwrap();
        let st = make_spdc_state(&src, &FrequencyGrid::default(), true).unwrap();
        let w = bell_decompose(&st, std::f32::consts::FRAC_PI_2 / 63e-15).unwrap();
        assert!((w.psi_minus().unwrap() - 1.0).abs() < 1e-5);
        assert!((w.pair_rate - 4.0 / (std::f32::consts::PI).powi(2)).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn sinc_is_even(x in -50.0f64..50.0) {
            prop_assert_eq!(sinc_amplitude(x), sinc_amplitude(-x));
        }

        #[test]
        fn fractions_sum_to_one_for_arbitrary_matrices(
            re in proptest::array::uniform4(-1.0f64..1.0),
            im in proptest::array::uniform4(-1.0f64..1.0),
        ) {
            let m = Mat2::new([
                [Cplx::new(re[0], im[0]), Cplx::new(re[1], im[1])],
                [Cplx::new(re[2], im[2]), Cplx::new(re[3], im[3])],
            ]);
            let w = bell_weights_of(&m, 1.0);
            if let Some(f) = w.fractions {
                prop_assert!((f.sum() - 1.0).abs() < 1e-12);
                prop_assert!(f.phi_plus >= 0.0 && f.phi_minus >= 0.0);
                prop_assert!((w.pair_rate - m.norm_sqr()).abs() < 1e-12);
            }
        }
    }
}
