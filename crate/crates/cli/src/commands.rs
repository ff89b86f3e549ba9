//! One function per subcommand. Each returns the bytes to emit.

use std::f64::consts::PI;
use std::path::Path;

use spdc_core::analytics::{
    coincidence_spectrum, filtered_rate, hwp_scan_family, hwp_singlet_spread, offset_to_wavelength,
    polarization_fringe, singlet_wavelengths, visibility, wavelength_to_offset, FilterShape,
};
use spdc_core::curve::{normalize_family, Abscissa};
use spdc_core::montecarlo::{
    coincidence_fraction, estimate_visibility, fmt_sig, sample_pairs, tac_histogram,
    write_events_csv, write_histogram_csv, DetectionParams, Selection, Setup, RNG_ALGORITHM,
};
use spdc_core::optics::{
    apply_common_path, coincidence_projection_at, compensator, fibre_time_density, hwp, qwp,
};
use spdc_core::state::{make_spdc_state, sinc_squared_half_max};
use spdc_core::{
    BiphotonAmplitude, CoincidenceCurve, FibreParams, FrequencyGrid, SourceParams, SpectralFilter,
};

use crate::config::{Delay, Element, ScenarioConfig, Shape};
use crate::error::CliError;
use crate::output::{write_curves, write_state};

const NM: f64 = 1e-9;
const NS: f64 = 1e-9;
const FS: f64 = 1e-15;
/// Delay-time reference of the longer-crystal alternative.
const TAU0_ALT_FS: f64 = 33.5;

type Out = Result<Vec<u8>, CliError>;

/// Source state with the configured elements applied in order.
pub fn build_state(cfg: &ScenarioConfig) -> Result<BiphotonAmplitude, CliError> {
    let lambda0 = cfg.lambda0_nm * NM;
    let src = match cfg.delay {
        Delay::Tau0Fs(t) => SourceParams::new(lambda0, t * FS)?,
        // fs/mm -> s/m and mm -> m
        Delay::Crystal { d_fs_per_mm, l_mm } => {
            SourceParams::from_crystal(lambda0, d_fs_per_mm * 1e-12, l_mm * 1e-3)?
        }
    };
    let grid = FrequencyGrid::new(cfg.n_points, cfg.half_extent_pi_units * PI)?;
    let mut st = make_spdc_state(&src, &grid, true)?;
    for el in &cfg.elements {
        st = match *el {
            Element::Hwp { deg } => apply_common_path(&st, &hwp(deg.to_radians()))?,
            Element::Qwp { deg } => apply_common_path(&st, &qwp(deg.to_radians()))?,
            Element::Compensator { tau_c_fs } => compensator(&st, tau_c_fs * FS),
        };
    }
    Ok(st)
}

fn filter(cfg: &ScenarioConfig, center: f64) -> Result<SpectralFilter, CliError> {
    let shape = match cfg.filter.shape {
        Shape::Rectangular => FilterShape::Rectangular,
        Shape::Gaussian => FilterShape::Gaussian,
    };
    Ok(SpectralFilter::new(center, cfg.filter.fwhm_nm * NM, shape)?)
}

/// Monochromator wavelength: configured, or the longer singlet wavelength.
fn selected_wavelength(cfg: &ScenarioConfig, st: &BiphotonAmplitude) -> Result<f64, CliError> {
    match cfg.filter.center_nm {
        Some(c) => Ok(c * NM),
        None => Ok(singlet_wavelengths(st.lambda0(), st.tau0())?.1),
    }
}

fn config_lines(cfg: &ScenarioConfig) -> Vec<String> {
    cfg.to_text()
        .lines()
        .map(|l| format!("config: {l}"))
        .collect()
}

fn summary(lines: &mut Vec<String>, key: &str, value: impl std::fmt::Display) {
    lines.push(format!("summary: {key} = {value}"));
}

fn source_summary(lines: &mut Vec<String>, st: &BiphotonAmplitude) -> Result<(), CliError> {
    let (blue, red) = singlet_wavelengths(st.lambda0(), st.tau0())?;
    summary(lines, "tau0_fs", fmt_sig(st.tau0() / FS));
    summary(lines, "singlet_blue_nm", fmt_sig(blue / NM));
    summary(lines, "singlet_red_nm", fmt_sig(red / NM));
    Ok(())
}

pub fn dump_state(cfg: &ScenarioConfig, path: &Path) -> Result<(), CliError> {
    let st = build_state(cfg)?;
    let mut buf = Vec::new();
    write_state(&mut buf, &st)?;
    std::fs::write(path, buf)?;
    Ok(())
}

pub fn spectrum(cfg: &ScenarioConfig, thetas: &[(f64, f64)]) -> Out {
    if thetas.is_empty() {
        return Err(CliError::Usage(
            "spectrum needs at least one --theta THETA1,THETA2".into(),
        ));
    }
    let st = build_state(cfg)?;
    let f = filter(cfg, st.lambda0())?;
    let curves = thetas
        .iter()
        .map(|&(t1, t2)| coincidence_spectrum(&st, t1.to_radians(), t2.to_radians(), Some(&f)))
        .collect::<Result<Vec<_>, _>>()?;
    let curves = normalize_family(&curves);

    let mut meta = config_lines(cfg);
    source_summary(&mut meta, &st)?;
    let xh = sinc_squared_half_max::<f64>() / st.tau0();
    let fwhm = offset_to_wavelength(-xh, st.lambda0())? - offset_to_wavelength(xh, st.lambda0())?;
    summary(&mut meta, "envelope_fwhm_nm", fmt_sig(fwhm / NM));
    for c in &curves {
        if let Some(i) = c.argmax() {
            summary(
                &mut meta,
                &format!("peak_nm[{}]", c.label()),
                fmt_sig(c.x()[i] / NM),
            );
        }
    }
    let mut buf = Vec::new();
    write_curves(&mut buf, &curves, &meta)?;
    Ok(buf)
}

pub fn fringe(cfg: &ScenarioConfig, step_deg: f64) -> Out {
    if !(step_deg > 0.0 && step_deg <= 90.0) {
        return Err(CliError::Usage(format!(
            "--step-deg must be in (0, 90], got {step_deg}"
        )));
    }
    let st = build_state(cfg)?;
    let lambda = selected_wavelength(cfg, &st)?;
    let omega = wavelength_to_offset(lambda, st.lambda0())?;
    let theta1 = cfg.theta1_deg.to_radians();
    let steps = (180.0 / step_deg).floor() as usize;
    let sweep: Vec<f64> = (0..=steps)
        .map(|i| (i as f64 * step_deg).to_radians())
        .collect();

    let mut point = polarization_fringe(&st, theta1, &sweep, omega)?;
    point.set_label(format!("{} at {:.4}nm", point.label(), lambda / NM));
    let f = filter(cfg, lambda)?;
    let rates = sweep
        .iter()
        .map(|&t2| filtered_rate(&st, theta1, t2, &f))
        .collect::<Result<Vec<_>, _>>()?;
    let passband = CoincidenceCurve::new(
        Abscissa::Theta,
        format!(
            "{} through {}nm passband",
            point.label(),
            cfg.filter.fwhm_nm
        ),
        sweep.clone(),
        rates,
    )?;
    let v_point = visibility(&point);
    let v_pass = visibility(&passband);
    let curves = normalize_family(&[point, passband]);

    let mut meta = config_lines(cfg);
    source_summary(&mut meta, &st)?;
    summary(&mut meta, "selected_nm", fmt_sig(lambda / NM));
    let show = |v: Option<f64>| v.map_or("undefined".to_string(), fmt_sig);
    summary(&mut meta, "visibility", show(v_point));
    summary(&mut meta, "visibility_passband", show(v_pass));
    let mut buf = Vec::new();
    write_curves(&mut buf, &curves, &meta)?;
    Ok(buf)
}

pub fn hwpscan(cfg: &ScenarioConfig, alphas_deg: &[f64]) -> Out {
    if alphas_deg.is_empty() {
        return Err(CliError::Usage("hwpscan needs at least one angle".into()));
    }
    let st = build_state(cfg)?;
    let alphas: Vec<f64> = alphas_deg.iter().map(|a| a.to_radians()).collect();
    let (t1, t2) = (cfg.theta1_deg.to_radians(), cfg.theta2_deg.to_radians());
    let f = filter(cfg, st.lambda0())?;
    let curves = normalize_family(&hwp_scan_family(&st, &alphas, t1, t2, Some(&f))?);
    let [blue, red] = hwp_singlet_spread(&st, &alphas, t1, t2)?;

    let mut meta = config_lines(cfg);
    source_summary(&mut meta, &st)?;
    summary(&mut meta, "max_spread_singlet_blue", fmt_sig(blue));
    summary(&mut meta, "max_spread_singlet_red", fmt_sig(red));
    summary(&mut meta, "invariant_below_1e-10", blue.max(red) < 1e-10);
    let mut buf = Vec::new();
    write_curves(&mut buf, &curves, &meta)?;
    Ok(buf)
}

pub fn fibre(cfg: &ScenarioConfig) -> Out {
    let st = build_state(cfg)?;
    let fc = cfg.fibre.unwrap_or_default();
    let fp = FibreParams::from_lab_units(fc.k2_s2_per_cm, fc.z_km);
    let (t1, t2) = (cfg.theta1_deg.to_radians(), cfg.theta2_deg.to_radians());

    let density = fibre_time_density(&st, &fp)?;
    let (taus, values): (Vec<f64>, Vec<f64>) = density.samples.iter().copied().unzip();
    let density_curve =
        CoincidenceCurve::new(Abscissa::Tau, "pair delay density", taus, values)?.peak_normalized();
    let scale = fp.time_map_scale()?;
    let (taus, rates): (Vec<f64>, Vec<f64>) = (0..st.len())
        .map(|k| {
            (
                scale * st.omega(k),
                coincidence_projection_at(&st, t1, t2, k),
            )
        })
        .unzip();
    let analyzed = CoincidenceCurve::from_monotone(
        Abscissa::Tau,
        format!("theta1={}deg theta2={}deg", cfg.theta1_deg, cfg.theta2_deg),
        taus,
        rates,
    )?
    .peak_normalized();

    let mut meta = config_lines(cfg);
    source_summary(&mut meta, &st)?;
    summary(
        &mut meta,
        "singlet_delay_ns",
        fmt_sig(fp.singlet_delay(st.tau0())? / NS),
    );
    summary(
        &mut meta,
        "mapped_spread_ns",
        fmt_sig(fp.mapped_spread(st.tau0())? / NS),
    );
    summary(&mut meta, "anomalous_dispersion", density.anomalous);
    summary(
        &mut meta,
        "singlet_delay_ns_at_tau0_33.5fs",
        fmt_sig(fp.singlet_delay(TAU0_ALT_FS * FS)? / NS),
    );
    meta.push(format!(
        "note: tau0 = {TAU0_ALT_FS} fs reproduces a 3 ns singlet delay; the default 63 fs \
         follows from the singlet wavelengths"
    ));
    if let Some(mc) = &cfg.mc {
        summary(
            &mut meta,
            "linear_map_regime_valid",
            fp.regime_valid(st.tau0(), mc.jitter_ps * 1e-12)?,
        );
    }
    let mut buf = Vec::new();
    write_curves(&mut buf, &[density_curve, analyzed], &meta)?;
    Ok(buf)
}

pub fn mc(cfg: &ScenarioConfig, events_path: Option<&Path>) -> Out {
    let m = cfg.mc.as_ref().ok_or_else(|| {
        CliError::Usage("mc needs an mc section in the config (e.g. mc.n_pairs = 1000000)".into())
    })?;
    let st = build_state(cfg)?;
    let det = DetectionParams {
        eta1: m.eta1,
        eta2: m.eta2,
        jitter_sigma: m.jitter_ps * 1e-12,
        accidental_fraction: m.accidental_fraction,
        coincidence_window: m.coincidence_window_ns * NS,
    };
    let fibre = cfg
        .fibre
        .map(|f| FibreParams::from_lab_units(f.k2_s2_per_cm, f.z_km));
    let selection = match fibre {
        Some(_) => Selection::Full,
        None => Selection::Filter(filter(cfg, selected_wavelength(cfg, &st)?)?),
    };
    let setup = |theta2_deg: f64| Setup {
        theta1: cfg.theta1_deg.to_radians(),
        theta2: theta2_deg.to_radians(),
        selection: selection.clone(),
        fibre,
    };
    let events = sample_pairs(&st, m.n_pairs, &setup(cfg.theta2_deg), &det, m.seed)?;
    // Orthogonal setting for the visibility estimate, on the next seed.
    let theta2_perp = cfg.theta2_deg + 90.0;
    let perp = sample_pairs(
        &st,
        m.n_pairs,
        &setup(theta2_perp),
        &det,
        m.seed.wrapping_add(1),
    )?;
    let fraction = coincidence_fraction(&events)?;
    let vis = estimate_visibility(&[
        (cfg.theta2_deg.to_radians(), &events),
        (theta2_perp.to_radians(), &perp),
    ])?;
    let hist = tac_histogram(&events, m.bin_width_ns * NS, m.range_ns * NS)?;

    let mut meta = config_lines(cfg);
    meta.push(format!("rng: {RNG_ALGORITHM}"));
    meta.push(format!("seed: {}", m.seed));
    source_summary(&mut meta, &st)?;
    summary(&mut meta, "events", events.len());
    summary(&mut meta, "coincidences", hist.total());
    summary(
        &mut meta,
        "coincidence_fraction",
        format!(
            "{} +- {}",
            fmt_sig(fraction.value),
            fmt_sig(fraction.std_error)
        ),
    );
    summary(
        &mut meta,
        "visibility_vs_theta2_plus_90deg",
        format!(
            "{} +- {}",
            fmt_sig(vis.visibility.value),
            fmt_sig(vis.visibility.std_error)
        ),
    );
    if let Some(fp) = fibre {
        let range = m.range_ns * NS;
        let edge = hist.bin_width / 2.0;
        summary(
            &mut meta,
            "singlet_delay_ns",
            fmt_sig(fp.singlet_delay(st.tau0())? / NS),
        );
        for (name, lo, hi) in [("peak_neg_ns", -range, -edge), ("peak_pos_ns", edge, range)] {
            if let Some(p) = hist.peak_in(lo, hi) {
                summary(&mut meta, name, fmt_sig(p / NS));
            }
        }
    }
    if let Some(path) = events_path {
        let mut buf = Vec::new();
        write_events_csv(&mut buf, &events, &meta)?;
        std::fs::write(path, buf)?;
    }
    let mut buf = Vec::new();
    write_histogram_csv(&mut buf, &hist, &meta)?;
    Ok(buf)
}
