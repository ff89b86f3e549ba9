//! CSV writers for event streams and delay histograms. Metadata lines start
//! with `#` and precede the mandatory header row.

use std::io::{self, Write};

use super::{EventRecord, MCAHistogram};

/// Scientific notation with nine significant digits, `.` as decimal separator.
pub fn fmt_sig(v: f64) -> String {
    format!("{v:.8e}")
}

fn write_metadata<W: Write>(w: &mut W, metadata: &[String]) -> io::Result<()> {
    for line in metadata {
        writeln!(w, "# {line}")?;
    }
    Ok(())
}

pub fn write_events_csv<W: Write>(
    w: &mut W,
    events: &[EventRecord],
    metadata: &[String],
) -> io::Result<()> {
    write_metadata(w, metadata)?;
    writeln!(w, "t1_s,t2_s,pass1,pass2,accidental")?;
    for e in events {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_sig(e.t1),
            fmt_sig(e.t2),
            u8::from(e.pass1),
            u8::from(e.pass2),
            u8::from(e.accidental)
        )?;
    }
    Ok(())
}

pub fn write_histogram_csv<W: Write>(
    w: &mut W,
    hist: &MCAHistogram,
    metadata: &[String],
) -> io::Result<()> {
    write_metadata(w, metadata)?;
    writeln!(w, "bin_center_s,count")?;
    for (i, c) in hist.counts.iter().enumerate() {
        writeln!(w, "{},{}", fmt_sig(hist.bin_center(i)), c)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(fmt_sig(1.0), "1.00000000e0");
        assert_eq!(fmt_sig(-3.0e-9), "-3.00000000e-9");
        let hist = MCAHistogram {
            bin_width: 1.0,
            origin: -1.5,
            counts: vec![1, 2, 3],
        };
        let mut out = Vec::new();
        write_histogram_csv(&mut out, &hist, &["seed = 4".into()]).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "# seed = 4\nbin_center_s,count\n-1.00000000e0,1\n0.00000000e0,2\n1.00000000e0,3\n"
        );
    }

    #[test]
    fn event_rows() {
        let e = EventRecord {
            t1: 1e-6,
            t2: 1.5e-6,
            pass1: true,
            pass2: false,
            omega: None,
            accidental: true,
        };
        let mut out = Vec::new();
        write_events_csv(&mut out, &[e], &[]).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "t1_s,t2_s,pass1,pass2,accidental\n1.00000000e-6,1.50000000e-6,1,0,1\n"
        );
    }
}
