use crate::error::{invalid, Result};

use super::EventRecord;

/// Delay histogram as accumulated by a TAC feeding a multichannel analyzer.
/// Bin `i` covers `[origin + i w, origin + (i + 1) w)`; bins are centered on
/// integer multiples of the bin width.
#[derive(Debug, Clone, PartialEq)]
pub struct MCAHistogram {
    pub bin_width: f64,
    pub origin: f64,
    pub counts: Vec<u64>,
}

impl MCAHistogram {
    pub fn bin_center(&self, i: usize) -> f64 {
        self.origin + (i as f64 + 0.5) * self.bin_width
    }

    pub fn bin_of(&self, delay: f64) -> Option<usize> {
        let f = ((delay - self.origin) / self.bin_width).floor();
        (f >= 0.0 && (f as usize) < self.counts.len()).then_some(f as usize)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Center of the fullest bin among those whose center lies in `[lo, hi]`.
    pub fn peak_in(&self, lo: f64, hi: f64) -> Option<f64> {
        (0..self.counts.len())
            .filter(|&i| (lo..=hi).contains(&self.bin_center(i)))
            .max_by_key(|&i| (self.counts[i], std::cmp::Reverse(i)))
            .map(|i| self.bin_center(i))
    }
}

/// Histograms `t2 - t1` of coincidences (both analyzers passed) with
/// `|t2 - t1| <= range`.
pub fn tac_histogram(events: &[EventRecord], bin_width: f64, range: f64) -> Result<MCAHistogram> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(invalid(
            "bin_width",
            format!("must be positive, got {bin_width}"),
        ));
    }
    if !(range >= 0.0 && range.is_finite()) {
        return Err(invalid(
            "range",
            format!("must be non-negative, got {range}"),
        ));
    }
    let half_bins = (range / bin_width).ceil() as usize;
    let mut hist = MCAHistogram {
        bin_width,
        origin: -(half_bins as f64 + 0.5) * bin_width,
        counts: vec![0; 2 * half_bins + 1],
    };
    for e in events.iter().filter(|e| e.is_coincidence()) {
        let d = e.delay();
        if d.abs() <= range {
            let i = hist.bin_of(d).expect("delay within range maps to a bin");
            hist.counts[i] += 1;
        }
    }
    Ok(hist)
}

/// Keeps events with `|(t2 - t1) - tau_center| <= width / 2`.
pub fn post_select_window(events: &[EventRecord], tau_center: f64, width: f64) -> Vec<EventRecord> {
    let half = width.abs() / 2.0;
    events
        .iter()
        .filter(|e| (e.delay() - tau_center).abs() <= half)
        .copied()
        .collect()
}
