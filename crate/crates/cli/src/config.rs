//! Flat `section.key = value` scenario files.
//!
//! ```text
//! # comments run to end of line
//! source.lambda0_nm = 702
//! source.tau0_fs = 63
//! elements.1.hwp_deg = 22.5
//! elements.2.compensator_tau_c_fs = -63
//! fibre.z_km = 1
//! ```
//!
//! Every key carries its unit suffix. Unknown and repeated keys are errors.
//! Sections `fibre` and `mc` exist only when at least one of their keys is
//! given; the remaining keys of a present section take their defaults.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Delay {
    Tau0Fs(f64),
    Crystal { d_fs_per_mm: f64, l_mm: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    Hwp { deg: f64 },
    Qwp { deg: f64 },
    Compensator { tau_c_fs: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Rectangular,
    Gaussian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterConfig {
    /// `None` selects the longer singlet wavelength of the configured source.
    pub center_nm: Option<f64>,
    pub fwhm_nm: f64,
    pub shape: Shape,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FibreConfig {
    pub k2_s2_per_cm: f64,
    pub z_km: f64,
}

impl Default for FibreConfig {
    fn default() -> Self {
        Self {
            k2_s2_per_cm: 3.2e-28,
            z_km: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub n_pairs: usize,
    pub seed: u64,
    pub eta1: f64,
    pub eta2: f64,
    pub jitter_ps: f64,
    pub accidental_fraction: f64,
    pub coincidence_window_ns: f64,
    pub bin_width_ns: f64,
    /// Half-range of the delay histogram.
    pub range_ns: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_pairs: 1_000_000,
            seed: 1,
            eta1: 1.0,
            eta2: 1.0,
            jitter_ps: 0.0,
            accidental_fraction: 0.0,
            coincidence_window_ns: 10.0,
            bin_width_ns: 0.1,
            range_ns: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub lambda0_nm: f64,
    pub delay: Delay,
    pub n_points: usize,
    pub half_extent_pi_units: f64,
    pub elements: Vec<Element>,
    pub theta1_deg: f64,
    pub theta2_deg: f64,
    pub filter: FilterConfig,
    pub fibre: Option<FibreConfig>,
    pub mc: Option<McConfig>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            lambda0_nm: 702.0,
            delay: Delay::Tau0Fs(63.0),
            n_points: 2049,
            half_extent_pi_units: 2.0,
            elements: Vec::new(),
            theta1_deg: 45.0,
            theta2_deg: -45.0,
            filter: FilterConfig {
                center_nm: None,
                fwhm_nm: 0.8,
                shape: Shape::Rectangular,
            },
            fibre: None,
            mc: None,
        }
    }
}

struct Entry {
    line: usize,
    value: String,
}

fn config_err(line: usize, key: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        line,
        key: key.to_string(),
        message: message.into(),
    }
}

fn num<T: std::str::FromStr>(key: &str, e: &Entry) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    e.value
        .parse::<T>()
        .map_err(|err| config_err(e.line, key, format!("cannot parse {:?}: {err}", e.value)))
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| config_err(line, content, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(config_err(line, key, "empty key or value"));
            }
            if let Some(prev) = entries.get(key) {
                return Err(config_err(
                    line,
                    key,
                    format!("duplicate key, first set on line {}", prev.line),
                ));
            }
            entries.insert(
                key.to_string(),
                Entry {
                    line,
                    value: value.to_string(),
                },
            );
        }

        let mut cfg = Self::default();
        let mut tau0 = None;
        let mut d = None;
        let mut l = None;
        let mut elements = BTreeMap::new();
        for (key, e) in &entries {
            match key.as_str() {
                "source.lambda0_nm" => cfg.lambda0_nm = num(key, e)?,
                "source.tau0_fs" => tau0 = Some((num::<f64>(key, e)?, e.line)),
                "source.d_fs_per_mm" => d = Some((num::<f64>(key, e)?, e.line)),
                "source.l_mm" => l = Some((num::<f64>(key, e)?, e.line)),
                "grid.n_points" => cfg.n_points = num(key, e)?,
                "grid.half_extent_pi_units" => cfg.half_extent_pi_units = num(key, e)?,
                "analyzers.theta1_deg" => cfg.theta1_deg = num(key, e)?,
                "analyzers.theta2_deg" => cfg.theta2_deg = num(key, e)?,
                "filter.center_nm" => cfg.filter.center_nm = Some(num(key, e)?),
                "filter.fwhm_nm" => cfg.filter.fwhm_nm = num(key, e)?,
                "filter.shape" => {
                    cfg.filter.shape = match e.value.as_str() {
                        "rectangular" => Shape::Rectangular,
                        "gaussian" => Shape::Gaussian,
                        other => {
                            return Err(config_err(
                                e.line,
                                key,
                                format!("expected rectangular or gaussian, got {other:?}"),
                            ))
                        }
                    }
                }
                "fibre.k2_s2_per_cm" => {
                    cfg.fibre.get_or_insert_with(Default::default).k2_s2_per_cm = num(key, e)?
                }
                "fibre.z_km" => cfg.fibre.get_or_insert_with(Default::default).z_km = num(key, e)?,
                k if k.starts_with("mc.") => {
                    parse_mc(cfg.mc.get_or_insert_with(Default::default), key, e)?
                }
                k if k.starts_with("elements.") => {
                    let mut parts = k.splitn(3, '.').skip(1);
                    let (index, kind) = (parts.next().unwrap_or(""), parts.next().unwrap_or(""));
                    let index: u32 = index.parse().map_err(|_| {
                        config_err(e.line, key, "element index must be a non-negative integer")
                    })?;
                    let v: f64 = num(key, e)?;
                    let element = match kind {
                        "hwp_deg" => Element::Hwp { deg: v },
                        "qwp_deg" => Element::Qwp { deg: v },
                        "compensator_tau_c_fs" => Element::Compensator { tau_c_fs: v },
                        _ => return Err(config_err(e.line, key, "unknown element kind")),
                    };
                    if elements.insert(index, element).is_some() {
                        return Err(config_err(e.line, key, "element index used twice"));
                    }
                }
                _ => return Err(config_err(e.line, key, "unknown key")),
            }
        }
        cfg.elements = elements.into_values().collect();
        cfg.delay = match (tau0, d, l) {
            (None, None, None) => cfg.delay,
            (Some((t, _)), None, None) => Delay::Tau0Fs(t),
            (None, Some((d, _)), Some((l, _))) => Delay::Crystal {
                d_fs_per_mm: d,
                l_mm: l,
            },
            (Some((_, line)), _, _) => {
                return Err(config_err(
                    line,
                    "source.tau0_fs",
                    "give either tau0_fs or both d_fs_per_mm and l_mm, not both",
                ))
            }
            (None, Some((_, line)), None) | (None, None, Some((_, line))) => {
                return Err(config_err(
                    line,
                    "source",
                    "d_fs_per_mm and l_mm must be given together",
                ))
            }
        };
        Ok(cfg)
    }

    /// Canonical text form; [`parse`](Self::parse) reads it back to an equal
    /// value.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("source.lambda0_nm", self.lambda0_nm.to_string());
        match self.delay {
            Delay::Tau0Fs(t) => kv("source.tau0_fs", t.to_string()),
            Delay::Crystal { d_fs_per_mm, l_mm } => {
                kv("source.d_fs_per_mm", d_fs_per_mm.to_string());
                kv("source.l_mm", l_mm.to_string());
            }
        }
        kv("grid.n_points", self.n_points.to_string());
        kv(
            "grid.half_extent_pi_units",
            self.half_extent_pi_units.to_string(),
        );
        for (i, el) in self.elements.iter().enumerate() {
            let (kind, v) = match *el {
                Element::Hwp { deg } => ("hwp_deg", deg),
                Element::Qwp { deg } => ("qwp_deg", deg),
                Element::Compensator { tau_c_fs } => ("compensator_tau_c_fs", tau_c_fs),
            };
            kv(&format!("elements.{}.{kind}", i + 1), v.to_string());
        }
        kv("analyzers.theta1_deg", self.theta1_deg.to_string());
        kv("analyzers.theta2_deg", self.theta2_deg.to_string());
        if let Some(c) = self.filter.center_nm {
            kv("filter.center_nm", c.to_string());
        }
        kv("filter.fwhm_nm", self.filter.fwhm_nm.to_string());
        let shape = match self.filter.shape {
            Shape::Rectangular => "rectangular",
            Shape::Gaussian => "gaussian",
        };
        kv("filter.shape", shape.to_string());
        if let Some(f) = &self.fibre {
            kv("fibre.k2_s2_per_cm", f.k2_s2_per_cm.to_string());
            kv("fibre.z_km", f.z_km.to_string());
        }
        if let Some(m) = &self.mc {
            kv("mc.n_pairs", m.n_pairs.to_string());
            kv("mc.seed", m.seed.to_string());
            kv("mc.eta1", m.eta1.to_string());
            kv("mc.eta2", m.eta2.to_string());
            kv("mc.jitter_ps", m.jitter_ps.to_string());
            kv("mc.accidental_fraction", m.accidental_fraction.to_string());
            kv(
                "mc.coincidence_window_ns",
                m.coincidence_window_ns.to_string(),
            );
            kv("mc.bin_width_ns", m.bin_width_ns.to_string());
            kv("mc.range_ns", m.range_ns.to_string());
        }
        s
    }
}

fn parse_mc(m: &mut McConfig, key: &str, e: &Entry) -> Result<(), CliError> {
    match key {
        "mc.n_pairs" => m.n_pairs = num(key, e)?,
        "mc.seed" => m.seed = num(key, e)?,
        "mc.eta1" => m.eta1 = num(key, e)?,
        "mc.eta2" => m.eta2 = num(key, e)?,
        "mc.jitter_ps" => m.jitter_ps = num(key, e)?,
        "mc.accidental_fraction" => m.accidental_fraction = num(key, e)?,
        "mc.coincidence_window_ns" => m.coincidence_window_ns = num(key, e)?,
        "mc.bin_width_ns" => m.bin_width_ns = num(key, e)?,
        "mc.range_ns" => m.range_ns = num(key, e)?,
        _ => return Err(config_err(e.line, key, "unknown key")),
    }
    Ok(())
}
