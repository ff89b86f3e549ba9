use crate::error::{Error, Result};

use super::EventRecord;

/// Minimum number of events per analyzed setting.
pub const MIN_EVENTS: usize = 100;

/// Point estimate with its one-sigma standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityEstimate {
    pub visibility: Estimate,
    /// Analyzer angle of the fullest and emptiest setting.
    pub theta_max: f64,
    pub theta_min: f64,
}

fn check_len(events: &[EventRecord]) -> Result<()> {
    if events.len() < MIN_EVENTS {
        return Err(Error::LowStatistics {
            got: events.len(),
            need: MIN_EVENTS,
        });
    }
    Ok(())
}

pub fn coincidence_count(events: &[EventRecord]) -> u64 {
    events.iter().filter(|e| e.is_coincidence()).count() as u64
}

/// Fraction of events registering a coincidence, binomial error.
pub fn coincidence_fraction(events: &[EventRecord]) -> Result<Estimate> {
    check_len(events)?;
    let n = events.len() as f64;
    let p = coincidence_count(events) as f64 / n;
    Ok(Estimate {
        value: p,
        std_error: (p * (1.0 - p) / n).sqrt(),
    })
}

/// Fringe visibility `(max - min) / (max + min)` of the coincidence counts
/// of several runs, one per `theta2` setting, with Poisson error propagation.
pub fn estimate_visibility(runs: &[(f64, &[EventRecord])]) -> Result<VisibilityEstimate> {
    if runs.len() < 2 {
        return Err(Error::LowStatistics {
            got: runs.len(),
            need: 2,
        });
    }
    let mut counts = Vec::with_capacity(runs.len());
    for (theta, events) in runs {
        check_len(events)?;
        counts.push((*theta, coincidence_count(events) as f64));
    }
    let by_count = |a: &&(f64, f64), b: &&(f64, f64)| a.1.partial_cmp(&b.1).unwrap();
    let &(theta_max, a) = counts.iter().max_by(by_count).unwrap();
    let &(theta_min, b) = counts.iter().min_by(by_count).unwrap();
    if a + b <= 0.0 {
        return Err(Error::LowStatistics { got: 0, need: 1 });
    }
    Ok(VisibilityEstimate {
        visibility: Estimate {
            value: (a - b) / (a + b),
            std_error: (4.0 * a * b / (a + b).powi(3)).sqrt(),
        },
        theta_max,
        theta_min,
    })
}

/// Singlet weight from coincidences at parallel (45, 45) and crossed
/// (45, -45) analyzers: `N_crossed / (N_crossed + N_parallel)`.
pub fn estimate_singlet_fraction(
    parallel: &[EventRecord],
    crossed: &[EventRecord],
) -> Result<Estimate> {
    check_len(parallel)?;
    check_len(crossed)?;
    let par = coincidence_count(parallel) as f64;
    let cross = coincidence_count(crossed) as f64;
    let n = par + cross;
    if n <= 0.0 {
        return Err(Error::LowStatistics { got: 0, need: 1 });
    }
    let p = cross / n;
    Ok(Estimate {
        value: p,
        std_error: (p * (1.0 - p) / n).sqrt(),
    })
}
