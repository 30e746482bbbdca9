//! Sweep records and their CSV form.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use tfd_core::{CostKind, VariationalAngles};

use crate::error::{HarnessError, Result};

pub const CSV_HEADER: [&str; 11] = [
    "beta",
    "g",
    "cost_kind",
    "gamma1",
    "gamma2",
    "alpha1",
    "alpha2",
    "cost_value",
    "fidelity",
    "trace_distance",
    "seed",
];

pub const GRID_CSV_HEADER: [&str; 3] = ["zeta", "tau", "xi_abs"];

/// One optimised point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub beta: f64,
    pub g: f64,
    pub cost_kind: CostKind,
    pub angles: VariationalAngles,
    pub cost_value: f64,
    pub fidelity: f64,
    pub trace_distance: f64,
    pub seed: u64,
}

impl SweepRecord {
    /// Points whose optimisation could not run carry `cost_value = +inf`
    /// and NaN metrics.
    pub fn failed(&self) -> bool {
        self.cost_value == f64::INFINITY
    }

    fn to_fields(&self) -> [String; 11] {
        let a = self.angles;
        [
            format_sig(self.beta),
            format_sig(self.g),
            self.cost_kind.name().to_string(),
            format_sig(a.gamma1),
            format_sig(a.gamma2),
            format_sig(a.alpha1),
            format_sig(a.alpha2),
            format_sig(self.cost_value),
            format_sig(self.fidelity),
            format_sig(self.trace_distance),
            self.seed.to_string(),
        ]
    }

    fn from_fields(row: &csv::StringRecord, line: u64) -> Result<Self> {
        if row.len() != CSV_HEADER.len() {
            return Err(HarnessError::Parse {
                line,
                message: format!("expected {} fields, found {}", CSV_HEADER.len(), row.len()),
            });
        }
        let num = |k: usize| -> Result<f64> {
            row[k].parse().map_err(|_| HarnessError::Parse {
                line,
                message: format!("{} = {:?} is not a number", CSV_HEADER[k], &row[k]),
            })
        };
        let cost_kind = row[2].parse().map_err(|e: tfd_core::Error| HarnessError::Parse {
            line,
            message: e.to_string(),
        })?;
        let seed = row[10].parse().map_err(|_| HarnessError::Parse {
            line,
            message: format!("seed = {:?} is not an unsigned integer", &row[10]),
        })?;
        Ok(Self {
            beta: num(0)?,
            g: num(1)?,
            cost_kind,
            angles: VariationalAngles::new(num(3)?, num(4)?, num(5)?, num(6)?),
            cost_value: num(7)?,
            fidelity: num(8)?,
            trace_distance: num(9)?,
            seed,
        })
    }
}

/// One point of the `(zeta, tau)` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRecord {
    pub zeta: f64,
    pub tau: f64,
    pub xi_abs: f64,
}

/// `x` rounded to 12 significant digits, in the shortest of fixed or
/// exponent notation with trailing zeros dropped. Parsing the output and
/// formatting again reproduces it exactly.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn write_records<W: Write>(out: W, records: &[SweepRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.to_fields())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(HarnessError::Parse {
            line: 1,
            message: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        out.push(SweepRecord::from_fields(&row, line)?);
    }
    Ok(out)
}

pub fn write_grid_records<W: Write>(out: W, records: &[GridRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(GRID_CSV_HEADER)?;
    for r in records {
        w.write_record([format_sig(r.zeta), format_sig(r.tau), format_sig(r.xi_abs)])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn emit_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_records(file, records).map_err(|e| e.with_path(path))
}

pub fn load_csv(path: &Path) -> Result<Vec<SweepRecord>> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_records(file).map_err(|e| e.with_path(path))
}

pub fn emit_grid_csv(records: &[GridRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_grid_records(file, records).map_err(|e| e.with_path(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.001), "0.001");
        assert_eq!(format_sig(1000.0), "1000");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(-2.0 / 3.0), "-0.666666666667");
        assert_eq!(format_sig(1.5e-9), "1.5e-9");
        assert_eq!(format_sig(123456789012345.0), "1.23456789012e14");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(f64::INFINITY), "inf");
        assert_eq!(format_sig(f64::NAN), "NaN");
    }

    #[test]
    fn formatting_is_a_fixed_point() {
        for x in [std::f64::consts::PI, 1e-300, 9.99999999999951e-6, 0.1 + 0.2, -7.0e21] {
            let once = format_sig(x);
            let twice = format_sig(once.parse().unwrap());
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn empty_records_give_header_only() {
        let mut buf = Vec::new();
        write_records(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{}\n", CSV_HEADER.join(",")));
    }

    #[test]
    fn wrong_header_rejected() {
        let err = read_records("beta,g\n1,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, HarnessError::Parse { line: 1, .. }));
    }
}
