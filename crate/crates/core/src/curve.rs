//! Sampled `(abscissa, rate)` series shared by spectra, fringes and time curves.

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// What the abscissa of a [`CoincidenceCurve`] measures. Values are stored in
/// SI units (rad/s, m, rad, s).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Abscissa {
    Omega,
    Lambda,
    Theta,
    Tau,
}

impl Abscissa {
    pub fn si_unit(self) -> &'static str {
        match self {
            Abscissa::Omega => "rad/s",
            Abscissa::Lambda => "m",
            Abscissa::Theta => "rad",
            Abscissa::Tau => "s",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceCurve<T: Real> {
    kind: Abscissa,
    label: String,
    x: Vec<T>,
    rate: Vec<T>,
}

impl<T: Real> CoincidenceCurve<T> {
    /// Builds a curve; `x` must be strictly increasing and rates non-negative.
    pub fn new(kind: Abscissa, label: impl Into<String>, x: Vec<T>, rate: Vec<T>) -> Result<Self> {
        if x.len() != rate.len() {
            return Err(invalid("rate", "abscissa and rate lengths differ"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("x", "abscissa must be strictly increasing"));
        }
        if rate.iter().any(|r| !(*r >= T::zero())) {
            return Err(invalid("rate", "rates must be finite and non-negative"));
        }
        Ok(Self {
            kind,
            label: label.into(),
            x,
            rate,
        })
    }

    /// Same as [`new`](Self::new) but accepts a decreasing abscissa, which is
    /// reversed. Used when mapping ascending frequency onto wavelength.
    pub fn from_monotone(
        kind: Abscissa,
        label: impl Into<String>,
        mut x: Vec<T>,
        mut rate: Vec<T>,
    ) -> Result<Self> {
        if x.len() >= 2 && x[1] < x[0] {
            x.reverse();
            rate.reverse();
        }
        Self::new(kind, label, x, rate)
    }

    pub fn kind(&self) -> Abscissa {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn rate(&self) -> &[T] {
        &self.rate
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.x.iter().copied().zip(self.rate.iter().copied())
    }

    pub fn max_rate(&self) -> T {
        self.rate.iter().fold(T::zero(), |m, &r| m.max(r))
    }

    pub fn min_rate(&self) -> T {
        self.rate.iter().fold(T::infinity(), |m, &r| m.min(r))
    }

    /// Index of the largest rate (first one on ties).
    pub fn argmax(&self) -> Option<usize> {
        self.extreme_index(|a, b| a > b)
    }

    pub fn argmin(&self) -> Option<usize> {
        self.extreme_index(|a, b| a < b)
    }

    fn extreme_index(&self, better: impl Fn(T, T) -> bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &r) in self.rate.iter().enumerate() {
            match best {
                Some(b) if !better(r, self.rate[b]) => {}
                _ => best = Some(i),
            }
        }
        best
    }

    /// Index of the extreme rate restricted to `lo <= x <= hi`.
    pub fn argmax_in(&self, lo: T, hi: T) -> Option<usize> {
        self.window_indices(lo, hi)
            .max_by(|&a, &b| self.rate[a].partial_cmp(&self.rate[b]).unwrap())
    }

    pub fn argmin_in(&self, lo: T, hi: T) -> Option<usize> {
        self.window_indices(lo, hi)
            .min_by(|&a, &b| self.rate[a].partial_cmp(&self.rate[b]).unwrap())
    }

    fn window_indices(&self, lo: T, hi: T) -> impl Iterator<Item = usize> + '_ {
        (0..self.x.len()).filter(move |&i| self.x[i] >= lo && self.x[i] <= hi)
    }

    /// Linear interpolation of the rate at `x`; `None` outside the sampled range.
    pub fn value_at(&self, x: T) -> Option<T> {
        let n = self.x.len();
        if n == 0 || x < self.x[0] || x > self.x[n - 1] {
            return None;
        }
        let hi = self.x.partition_point(|&v| v < x);
        if hi == 0 || self.x[hi] == x {
            return Some(self.rate[hi]);
        }
        let (x0, x1) = (self.x[hi - 1], self.x[hi]);
        let t = (x - x0) / (x1 - x0);
        Some(self.rate[hi - 1] * (T::one() - t) + self.rate[hi] * t)
    }

    /// Copy scaled so that the maximum rate is 1. An all-zero curve is
    /// returned unchanged.
    pub fn peak_normalized(&self) -> Self {
        self.scaled_by_max(self.max_rate())
    }

    pub(crate) fn scaled_by_max(&self, max: T) -> Self {
        let mut out = self.clone();
        if max > T::zero() {
            out.rate.iter_mut().for_each(|r| *r = *r / max);
        }
        out
    }

    /// Full width at half maximum of the main peak, from linear interpolation
    /// of the half-max crossings on either side of the global maximum.
    pub fn fwhm(&self) -> Option<T> {
        let peak = self.argmax()?;
        let half = self.rate[peak] / T::lit(2.0);
        if !(half > T::zero()) {
            return None;
        }
        let crossing = |a: usize, b: usize| {
            let (ra, rb) = (self.rate[a], self.rate[b]);
            let t = (half - ra) / (rb - ra);
            self.x[a] + (self.x[b] - self.x[a]) * t
        };
        let left = (0..peak)
            .rev()
            .find(|&i| self.rate[i] < half)
            .map(|i| crossing(i, i + 1))?;
        let right = (peak + 1..self.len())
            .find(|&i| self.rate[i] < half)
            .map(|i| crossing(i - 1, i))?;
        Some(right - left)
    }
}

/// Normalizes a family of curves by their common maximum, so relative heights
/// between members survive.
pub fn normalize_family<T: Real>(curves: &[CoincidenceCurve<T>]) -> Vec<CoincidenceCurve<T>> {
    let max = curves.iter().fold(T::zero(), |m, c| m.max(c.max_rate()));
    curves.iter().map(|c| c.scaled_by_max(max)).collect()
}
