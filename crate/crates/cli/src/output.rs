//! CSV emission. Numbers use nine significant digits in scientific notation,
//! so identical inputs give identical bytes.

use std::io::{self, Write};

use spdc_core::curve::Abscissa;
use spdc_core::montecarlo::fmt_sig;
use spdc_core::{BiphotonAmplitude, CoincidenceCurve};

/// Boundary unit of each abscissa and the factor from SI.
fn display_unit(kind: Abscissa) -> (&'static str, f64) {
    match kind {
        Abscissa::Lambda => ("nm", 1e9),
        Abscissa::Theta => ("deg", 180.0 / std::f64::consts::PI),
        Abscissa::Tau => ("ns", 1e9),
        Abscissa::Omega => ("rad/s", 1.0),
    }
}

pub fn write_metadata<W: Write>(w: &mut W, lines: &[String]) -> io::Result<()> {
    for line in lines {
        writeln!(w, "# {line}")?;
    }
    Ok(())
}

pub fn write_curves<W: Write>(
    w: &mut W,
    curves: &[CoincidenceCurve],
    metadata: &[String],
) -> io::Result<()> {
    write_metadata(w, metadata)?;
    writeln!(w, "x_value,x_unit,rate_normalized,curve_label")?;
    for c in curves {
        let (unit, factor) = display_unit(c.kind());
        for (x, r) in c.points() {
            writeln!(
                w,
                "{},{unit},{},{}",
                fmt_sig(x * factor),
                fmt_sig(r),
                c.label()
            )?;
        }
    }
    Ok(())
}

/// Raw amplitude matrices on the grid, for debugging.
pub fn write_state<W: Write>(w: &mut W, state: &BiphotonAmplitude) -> io::Result<()> {
    writeln!(
        w,
        "omega_rad_s,hh_re,hh_im,hv_re,hv_im,vh_re,vh_im,vv_re,vv_im"
    )?;
    for (k, a) in state.amplitudes().iter().enumerate() {
        write!(w, "{}", fmt_sig(state.omega(k)))?;
        for z in [a.e[0][0], a.e[0][1], a.e[1][0], a.e[1][1]] {
            write!(w, ",{},{}", fmt_sig(z.re), fmt_sig(z.im))?;
        }
        writeln!(w)?;
    }
    Ok(())
}
