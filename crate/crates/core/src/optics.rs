//! Optical elements acting on a [`BiphotonAmplitude`]: waveplates and
//! polarizers as Jones matrices, a birefringent compensator, the
//! beamsplitter-plus-analyzers coincidence projection, and the dispersive
//! fibre that maps frequency offsets onto arrival-time differences.

use crate::error::{invalid, Error, Result};
use crate::matrix::Mat2;
use crate::numeric::trapezoid_weight;
use crate::scalar::{cis, Cplx, Real};
use crate::state::{BiphotonAmplitude, H, V};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Unitary,
    Projector,
}

/// A 2x2 Jones matrix acting on one photon's polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesElement<T: Real> {
    m: Mat2<T>,
    kind: ElementKind,
}

impl<T: Real> JonesElement<T> {
    /// Wraps `m` as a unitary element, checking `m^dagger m = 1` to `1e-10`.
    pub fn unitary(m: Mat2<T>) -> Result<Self> {
        let dev = (m.adjoint() * m).max_abs_diff(&Mat2::identity());
        if dev > T::lit(1e-10).max(T::epsilon() * T::lit(64.0)) {
            return Err(invalid("m", format!("not unitary (deviation {dev})")));
        }
        Ok(Self {
            m,
            kind: ElementKind::Unitary,
        })
    }

    /// `[[a, -conj(b)], [b, conj(a)]]`, an SU(2) rotation, after rescaling
    /// `(a, b)` to unit norm.
    pub fn su2(a: Cplx<T>, b: Cplx<T>) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(invalid("su2", "zero or non-finite parameters"));
        }
        let (a, b) = (a / norm, b / norm);
        Self::unitary(Mat2::new([[a, -b.conj()], [b, a.conj()]]))
    }

    pub fn identity() -> Self {
        Self {
            m: Mat2::identity(),
            kind: ElementKind::Unitary,
        }
    }

    pub fn matrix(&self) -> &Mat2<T> {
        &self.m
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    /// Applies the element to a single-photon Jones vector.
    pub fn apply(&self, v: [Cplx<T>; 2]) -> [Cplx<T>; 2] {
        let e = &self.m.e;
        [
            e[0][0] * v[0] + e[0][1] * v[1],
            e[1][0] * v[0] + e[1][1] * v[1],
        ]
    }

    /// Element followed by `next`.
    pub fn then(&self, next: &Self) -> Self {
        let kind = if self.kind == ElementKind::Unitary && next.kind == ElementKind::Unitary {
            ElementKind::Unitary
        } else {
            ElementKind::Projector
        };
        Self {
            m: next.m * self.m,
            kind,
        }
    }
}

fn rotation<T: Real>(alpha: T) -> Mat2<T> {
    let (s, c) = alpha.sin_cos();
    Mat2::from_real([[c, -s], [s, c]])
}

/// `R(alpha) D R(-alpha)`.
fn rotated<T: Real>(d: Mat2<T>, alpha: T) -> Mat2<T> {
    rotation(alpha) * d * rotation(-alpha)
}

/// Linear polarizer (Glan prism) transmitting `(cos theta, sin theta)`.
pub fn polarizer<T: Real>(theta: T) -> JonesElement<T> {
    let (s, c) = theta.sin_cos();
    JonesElement {
        m: Mat2::from_real([[c * c, c * s], [c * s, s * s]]),
        kind: ElementKind::Projector,
    }
}

/// Half-wave plate with its fast axis at `alpha`: `R(alpha) diag(1, -1) R(-alpha)`,
/// no extra global phase.
pub fn hwp<T: Real>(alpha: T) -> JonesElement<T> {
    let (s, c) = (alpha + alpha).sin_cos();
    JonesElement {
        m: Mat2::from_real([[c, s], [s, -c]]),
        kind: ElementKind::Unitary,
    }
}

/// Quarter-wave plate with its fast axis at `alpha`: `R(alpha) diag(1, i) R(-alpha)`.
pub fn qwp<T: Real>(alpha: T) -> JonesElement<T> {
    let one = Cplx::new(T::one(), T::zero());
    let i = Cplx::new(T::zero(), T::one());
    let d = Mat2::new([
        [one, Cplx::new(T::zero(), T::zero())],
        [Cplx::new(T::zero(), T::zero()), i],
    ]);
    JonesElement {
        m: rotated(d, alpha),
        kind: ElementKind::Unitary,
    }
}

/// Passes both photons through the same unitary element: `A <- U A U^T`.
/// Projectors are rejected; the analyzers sit after the beamsplitter.
pub fn apply_common_path<T: Real>(
    state: &BiphotonAmplitude<T>,
    u: &JonesElement<T>,
) -> Result<BiphotonAmplitude<T>> {
    if u.kind != ElementKind::Unitary {
        return Err(Error::NotUnitary);
    }
    let ut = u.m.transpose();
    Ok(state.map_samples(|_, a| u.m * *a * ut))
}

/// Birefringent plate adding a signed delay `tau_c` (s) of V relative to H:
/// `A_HV <- A_HV exp(+i W tau_c)`, `A_VH <- A_VH exp(-i W tau_c)`.
/// `tau_c = -tau0` is the usual compensation; `+tau0` doubles the delay.
pub fn compensator<T: Real>(state: &BiphotonAmplitude<T>, tau_c: T) -> BiphotonAmplitude<T> {
    let ratio = tau_c / state.tau0();
    let grid = *state.grid();
    state.map_samples(|k, a| {
        let phase = grid.offset(k) * ratio;
        let mut out = *a;
        out.e[H][V] = a.e[H][V] * cis(phase);
        out.e[V][H] = a.e[V][H] * cis(-phase);
        out
    })
}

#[inline]
pub(crate) fn analyzer<T: Real>(theta: T) -> [T; 2] {
    let (s, c) = theta.sin_cos();
    [c, s]
}

/// Unnormalized coincidence amplitude `v1^T A v2` behind a split pair.
#[inline]
pub(crate) fn projection_amplitude<T: Real>(a: &Mat2<T>, theta1: T, theta2: T) -> Cplx<T> {
    a.bilinear(analyzer(theta1), analyzer(theta2))
}

/// Joint analyzer outcome probabilities for one split pair with amplitude
/// matrix `a`: `[pass/pass, pass/block, block/pass, block/block]`. The four
/// projections span the two-photon polarization space, so they sum to 1.
pub fn analyzer_outcomes<T: Real>(a: &Mat2<T>, theta1: T, theta2: T) -> Option<[T; 4]> {
    let total = a.norm_sqr();
    if !(total > T::zero()) || !total.is_finite() {
        return None;
    }
    let (p1, q1) = (theta1, theta1 + T::FRAC_PI_2());
    let (p2, q2) = (theta2, theta2 + T::FRAC_PI_2());
    Some([
        projection_amplitude(a, p1, p2).norm_sqr() / total,
        projection_amplitude(a, p1, q2).norm_sqr() / total,
        projection_amplitude(a, q1, p2).norm_sqr() / total,
        projection_amplitude(a, q1, q2).norm_sqr() / total,
    ])
}

/// Coincidence rate behind the 50/50 beamsplitter with analyzers at `theta1`
/// (port 1, photon at `w0 + W`) and `theta2` (port 2, photon at `w0 - W`):
/// `|v1^T A(W) v2|^2`, scaled so that the crystal output at `W = 0` with both
/// analyzers at 45 degrees gives 1.
pub fn coincidence_projection<T: Real>(
    state: &BiphotonAmplitude<T>,
    theta1: T,
    theta2: T,
    omega: T,
) -> Result<T> {
    let a = state.amplitude_at(omega)?;
    Ok(rate_of(state, &a, theta1, theta2))
}

/// Same as [`coincidence_projection`] at grid sample `k`.
pub fn coincidence_projection_at<T: Real>(
    state: &BiphotonAmplitude<T>,
    theta1: T,
    theta2: T,
    k: usize,
) -> T {
    rate_of(state, &state.amplitudes()[k], theta1, theta2)
}

fn rate_of<T: Real>(state: &BiphotonAmplitude<T>, a: &Mat2<T>, theta1: T, theta2: T) -> T {
    let norm = state.reference_rate() / T::lit(2.0);
    projection_amplitude(a, theta1, theta2).norm_sqr() / norm
}

/// Group-velocity dispersion `k2` (s^2/m) over a fibre of length `z` (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FibreParams<T: Real> {
    pub k2: T,
    pub z: T,
}

impl<T: Real> FibreParams<T> {
    pub fn new(k2: T, z: T) -> Self {
        Self { k2, z }
    }

    /// Laboratory units: `k2` in s^2/cm, `z` in km.
    pub fn from_lab_units(k2_s2_per_cm: T, z_km: T) -> Self {
        Self::new(k2_s2_per_cm * T::lit(100.0), z_km * T::lit(1000.0))
    }

    /// Signed map coefficient `2 k2 z` (s^2) in `tau = 2 k2 z W`.
    pub fn time_map_scale(&self) -> Result<T> {
        let s = T::lit(2.0) * self.k2 * self.z;
        if !s.is_finite() || s == T::zero() {
            return Err(invalid(
                "fibre",
                format!(
                    "k2 * z must be finite and non-zero, got {}",
                    self.k2 * self.z
                ),
            ));
        }
        Ok(s)
    }

    /// Delay at which the singlet frequencies `W tau0 = +-pi/2` arrive:
    /// `pi |k2| z / tau0`.
    pub fn singlet_delay(&self, tau0: T) -> Result<T> {
        Ok(self.time_map_scale()?.abs() * T::FRAC_PI_2() / tau0)
    }

    /// Delay of the first spectral zero `W tau0 = pi`, the half-width of the
    /// mapped main lobe.
    pub fn mapped_spread(&self, tau0: T) -> Result<T> {
        Ok(self.time_map_scale()?.abs() * T::PI() / tau0)
    }

    /// Whether the linear frequency-to-time map is usable for a detector
    /// timing jitter `jitter_sigma`: mapped spread at least ten times the jitter.
    pub fn regime_valid(&self, tau0: T, jitter_sigma: T) -> Result<bool> {
        Ok(self.mapped_spread(tau0)? >= T::lit(10.0) * jitter_sigma)
    }
}

/// Arrival-time-difference density behind a dispersive fibre.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeAmplitudeCurve<T: Real> {
    /// `(tau, density)` with `tau` in s, increasing; density in 1/s.
    pub samples: Vec<(T, T)>,
    /// Trapezoidal integral of the density.
    pub integral: T,
    /// `+- pi |k2| z / tau0`.
    pub singlet_delays: (T, T),
    /// Set when `k2 z < 0`; the time axis is mirrored with respect to `W`.
    pub anomalous: bool,
}

/// Maps the spectral density onto delays, `P(tau) = S(tau / 2k2z) / |2k2z|`.
pub fn fibre_time_density<T: Real>(
    state: &BiphotonAmplitude<T>,
    f: &FibreParams<T>,
) -> Result<TimeAmplitudeCurve<T>> {
    let scale = f.time_map_scale()?;
    let a = scale.abs();
    let n = state.len();
    let density = state.spectral_density();
    let mut samples: Vec<(T, T)> = (0..n)
        .map(|k| (scale * state.omega(k), density[k] / a))
        .collect();
    if scale < T::zero() {
        samples.reverse();
    }
    let h = a * state.omega_step();
    let integral = samples
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (k, &(_, p))| {
            acc + trapezoid_weight(k, n, h) * p
        });
    let d = f.singlet_delay(state.tau0())?;
    Ok(TimeAmplitudeCurve {
        samples,
        integral,
        singlet_delays: (-d, d),
        anomalous: scale < T::zero(),
    })
}

/// Coincidence rate of pairs arriving with delay `tau` behind the fibre.
pub fn coincidence_projection_polarized_time<T: Real>(
    state: &BiphotonAmplitude<T>,
    theta1: T,
    theta2: T,
    f: &FibreParams<T>,
    tau: T,
) -> Result<T> {
    let omega = tau / f.time_map_scale()?;
    coincidence_projection(state, theta1, theta2, omega)
}
