//! Event-level simulation of the coincidence experiment.
//!
//! Each generated pair draws its frequency offset from the (optionally
//! filtered) spectral density, splits on the beamsplitter with probability
//! 1/2, and draws the joint analyzer outcome from the exact two-photon
//! projection probabilities at that offset. Detection efficiencies, Gaussian
//! timing jitter and delay-uniform accidental coincidences are added on top.
//!
//! Sampling is split into fixed chunks of [`CHUNK_PAIRS`] pairs. Chunk `c`
//! uses `ChaCha8Rng::seed_from_u64(seed)` on stream `c`, and chunks are merged
//! in index order, so results do not depend on the number of worker threads.

mod estimate;
mod export;
mod histogram;

pub use estimate::{
    coincidence_count, coincidence_fraction, estimate_singlet_fraction, estimate_visibility,
    Estimate, VisibilityEstimate, MIN_EVENTS,
};
pub use export::{fmt_sig, write_events_csv, write_histogram_csv};
pub use histogram::{post_select_window, tac_histogram, MCAHistogram};

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use rayon::prelude::*;

use crate::analytics::{offset_to_wavelength, SpectralFilter};
use crate::error::{invalid, Error, Result};
use crate::numeric::trapezoid_weight;
use crate::optics::{analyzer_outcomes, FibreParams};
use crate::state::BiphotonAmplitude;

/// Pairs per deterministic RNG chunk.
pub const CHUNK_PAIRS: usize = 1 << 16;

/// Spacing of pair emission times. Only delays are physically meaningful.
pub const PAIR_PERIOD: f64 = 1e-6;

/// Generator identity echoed into output metadata.
pub const RNG_ALGORITHM: &str =
    "ChaCha8Rng: seed_from_u64(seed), stream = chunk index, 65536 pairs per chunk";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionParams {
    pub eta1: f64,
    pub eta2: f64,
    /// Per-detector Gaussian timing jitter, s.
    pub jitter_sigma: f64,
    /// Accidental-to-true coincidence ratio. Accidentals scale with the
    /// product of the singles rates; for unpolarized singles their count is
    /// this fraction of the maximum of the true-coincidence fringe.
    pub accidental_fraction: f64,
    /// Delay interval over which accidentals are spread uniformly, s.
    pub coincidence_window: f64,
}

impl DetectionParams {
    pub fn ideal() -> Self {
        Self {
            eta1: 1.0,
            eta2: 1.0,
            jitter_sigma: 0.0,
            accidental_fraction: 0.0,
            coincidence_window: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, eta) in [("eta1", self.eta1), ("eta2", self.eta2)] {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(invalid(
                    name,
                    format!("efficiency must be in (0, 1], got {eta}"),
                ));
            }
        }
        for (name, v) in [
            ("jitter_sigma", self.jitter_sigma),
            ("accidental_fraction", self.accidental_fraction),
            ("coincidence_window", self.coincidence_window),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(
                    name,
                    format!("must be finite and non-negative, got {v}"),
                ));
            }
        }
        Ok(())
    }
}

impl Default for DetectionParams {
    fn default() -> Self {
        Self::ideal()
    }
}

/// Which frequency offsets reach detector 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Selection {
    /// The whole spectrum (fibre measurements).
    Full,
    /// An ideal monochromator fixed at one offset, rad/s.
    Offset(f64),
    /// A finite passband in front of detector 1.
    Filter(SpectralFilter<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Setup {
    pub theta1: f64,
    pub theta2: f64,
    pub selection: Selection,
    pub fibre: Option<FibreParams<f64>>,
}

/// One recorded detection pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord {
    pub t1: f64,
    pub t2: f64,
    pub pass1: bool,
    pub pass2: bool,
    /// Offset of the pair that produced the event; `None` for accidentals.
    /// Diagnostic only.
    pub omega: Option<f64>,
    pub accidental: bool,
}

impl EventRecord {
    pub fn delay(&self) -> f64 {
        self.t2 - self.t1
    }

    pub fn is_coincidence(&self) -> bool {
        self.pass1 && self.pass2
    }
}

#[derive(Debug, Clone, Copy)]
struct Mode {
    omega: f64,
    /// Cumulative joint outcome probabilities (pp, pb, bp, bb).
    cumulative: [f64; 4],
    /// Marginal transmission probabilities at each analyzer.
    marginal: (f64, f64),
}

impl Mode {
    fn new(omega: f64, p: [f64; 4]) -> Self {
        let mut cumulative = [0.0; 4];
        let mut acc = 0.0;
        for (c, v) in cumulative.iter_mut().zip(p) {
            acc += v;
            *c = acc;
        }
        Self {
            omega,
            cumulative,
            marginal: (p[0] + p[1], p[0] + p[2]),
        }
    }
}

fn build_modes(
    state: &BiphotonAmplitude<f64>,
    setup: &Setup,
) -> Result<(Vec<Mode>, Option<WeightedIndex<f64>>)> {
    let (t1, t2) = (setup.theta1, setup.theta2);
    if !t1.is_finite() || !t2.is_finite() {
        return Err(invalid("theta", "analyzer angles must be finite"));
    }
    if let Selection::Offset(omega) = setup.selection {
        let a = state.amplitude_at(omega)?;
        let floor = state.reference_rate() * f64::EPSILON * f64::EPSILON;
        let p = (a.norm_sqr() > floor)
            .then(|| analyzer_outcomes(&a, t1, t2))
            .flatten()
            .ok_or_else(|| {
                Error::InvalidProbabilities(format!(
                    "spectral density vanishes at the selected offset {omega:e} rad/s"
                ))
            })?;
        return Ok((vec![Mode::new(omega, p)], None));
    }
    let n = state.len();
    let h = state.omega_step();
    let density = state.spectral_density();
    let mut modes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (k, &d) in density.iter().enumerate() {
        let omega = state.omega(k);
        let transmission = match &setup.selection {
            Selection::Filter(f) => f.transmission(offset_to_wavelength(omega, state.lambda0())?),
            _ => 1.0,
        };
        let w = trapezoid_weight(k, n, h) * d * transmission;
        if !(w > 0.0) {
            continue;
        }
        if let Some(p) = analyzer_outcomes(&state.amplitudes()[k], t1, t2) {
            modes.push(Mode::new(omega, p));
            weights.push(w);
        }
    }
    let index = WeightedIndex::new(&weights).map_err(|e| {
        Error::InvalidProbabilities(format!("no sampleable offsets in the selection: {e}"))
    })?;
    Ok((modes, Some(index)))
}

/// Simulates `n` emitted pairs. Pairs that do not split on the beamsplitter
/// leave no record; every split pair yields one event (whatever the analyzer
/// outcomes), and accidental coincidences are appended as extra events.
pub fn sample_pairs(
    state: &BiphotonAmplitude<f64>,
    n: usize,
    setup: &Setup,
    det: &DetectionParams,
    seed: u64,
) -> Result<Vec<EventRecord>> {
    if n == 0 {
        return Err(invalid("n", "at least one pair is required"));
    }
    det.validate()?;
    let (modes, index) = build_modes(state, setup)?;
    let delay_scale = match &setup.fibre {
        Some(f) => f.time_map_scale()?,
        None => 0.0,
    };
    let jitter = if det.jitter_sigma > 0.0 {
        Some(
            Normal::new(0.0, det.jitter_sigma)
                .map_err(|e| invalid("jitter_sigma", e.to_string()))?,
        )
    } else {
        None
    };
    let chunks = n.div_ceil(CHUNK_PAIRS);
    let parts: Vec<Vec<EventRecord>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let start = chunk * CHUNK_PAIRS;
            let end = (start + CHUNK_PAIRS).min(n);
            let mut out = Vec::with_capacity((end - start) / 2 + 16);
            for i in start..end {
                let mode = match &index {
                    Some(ix) => &modes[ix.sample(&mut rng)],
                    None => &modes[0],
                };
                let t_emit = i as f64 * PAIR_PERIOD;
                if rng.gen_bool(0.5) {
                    let u: f64 = rng.gen();
                    let outcome = mode.cumulative.iter().position(|&c| u < c).unwrap_or(3);
                    let (g1, g2) = (outcome < 2, outcome % 2 == 0);
                    let pass1 = g1 && rng.gen::<f64>() < det.eta1;
                    let pass2 = g2 && rng.gen::<f64>() < det.eta2;
                    let (j1, j2) = match &jitter {
                        Some(d) => (d.sample(&mut rng), d.sample(&mut rng)),
                        None => (0.0, 0.0),
                    };
                    out.push(EventRecord {
                        t1: t_emit + j1,
                        t2: t_emit + delay_scale * mode.omega + j2,
                        pass1,
                        pass2,
                        omega: Some(mode.omega),
                        accidental: false,
                    });
                }
                if det.accidental_fraction > 0.0 {
                    let q = det.accidental_fraction
                        * det.eta1
                        * det.eta2
                        * mode.marginal.0
                        * mode.marginal.1;
                    if rng.gen::<f64>() < q {
                        let t1 = t_emit + rng.gen::<f64>() * PAIR_PERIOD;
                        let delay = (rng.gen::<f64>() - 0.5) * det.coincidence_window;
                        out.push(EventRecord {
                            t1,
                            t2: t1 + delay,
                            pass1: true,
                            pass2: true,
                            omega: None,
                            accidental: true,
                        });
                    }
                }
            }
            out
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}
