//! Text serialization of [`SpaceTimeField`].
//!
//! ```text
//! sgm-field 1
//! # free-form comment lines (config hash, provenance) are allowed here
//! n_points 64
//! period 6.283185307179586
//! t_start -1
//! dt 0.001
//! n_steps 2000
//! data
//! <n_points whitespace-separated samples for t_start>
//! <... one line per stored slice, n_steps + 1 lines>
//! ```
//!
//! Samples are written in shortest round-trip exponent notation, so a
//! write/read cycle is lossless.

use std::io::{BufRead, Write};

use super::grid::{TimeGrid, TorusGrid};
use super::sampled::SpaceTimeField;
use crate::error::{Error, Result};

pub const FIELD_MAGIC: &str = "sgm-field 1";

pub fn write_field<W: Write>(field: &SpaceTimeField, comments: &[String], mut out: W) -> Result<()> {
    let g = field.grid();
    let t = field.times();
    writeln!(out, "{FIELD_MAGIC}")?;
    for c in comments {
        for line in c.lines() {
            writeln!(out, "# {line}")?;
        }
    }
    writeln!(out, "n_points {}", g.n_points())?;
    writeln!(out, "period {}", g.period())?;
    writeln!(out, "t_start {}", t.t_start())?;
    writeln!(out, "dt {}", t.dt())?;
    writeln!(out, "n_steps {}", t.n_steps())?;
    writeln!(out, "data")?;
    let mut line = String::new();
    for n in 0..t.n_slices() {
        line.clear();
        for (j, v) in field.slice(n).iter().enumerate() {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{v:e}"));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn field_to_string(field: &SpaceTimeField, comments: &[String]) -> String {
    let mut buf = Vec::new();
    write_field(field, comments, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("field text is ASCII")
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Reads a field, returning it with the comment lines found in the header.
pub fn read_field<R: BufRead>(input: R) -> Result<(SpaceTimeField, Vec<String>)> {
    let mut lines = input.lines();
    let first = lines.next().ok_or_else(|| parse_err("empty field file"))??;
    if first.trim() != FIELD_MAGIC {
        return Err(parse_err(format!("bad magic line {first:?}")));
    }
    let mut comments = Vec::new();
    let mut header = std::collections::HashMap::new();
    loop {
        let line = lines.next().ok_or_else(|| parse_err("missing data section"))??;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim_start().to_string());
            continue;
        }
        if line == "data" {
            break;
        }
        let (key, value) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| parse_err(format!("malformed header line {line:?}")))?;
        header.insert(key.to_string(), value.trim().to_string());
    }
    let get = |k: &str| {
        header
            .get(k)
            .ok_or_else(|| parse_err(format!("missing header key {k}")))
    };
    let num = |k: &str| -> Result<f64> { get(k)?.parse::<f64>().map_err(|e| parse_err(format!("{k}: {e}"))) };
    let int = |k: &str| -> Result<usize> { get(k)?.parse::<usize>().map_err(|e| parse_err(format!("{k}: {e}"))) };
    let grid = TorusGrid::new(int("n_points")?, num("period")?)?;
    let times = TimeGrid::new(num("t_start")?, num("dt")?, int("n_steps")?)?;
    let mut samples = Vec::with_capacity(times.n_slices() * grid.n_points());
    for line in lines {
        let line = line?;
        for tok in line.split_whitespace() {
            samples.push(
                tok.parse::<f64>()
                    .map_err(|e| parse_err(format!("sample {tok:?}: {e}")))?,
            );
        }
    }
    Ok((SpaceTimeField::new(grid, times, samples)?, comments))
}

pub fn read_field_file(path: &std::path::Path) -> Result<(SpaceTimeField, Vec<String>)> {
    let f = std::fs::File::open(path)?;
    read_field(std::io::BufReader::new(f))
}

pub fn write_field_file(field: &SpaceTimeField, comments: &[String], path: &std::path::Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_field(field, comments, &mut w)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn round_trip_is_lossless(
            n in prop::sample::select(vec![8usize, 10, 16]),
            steps in 0usize..4,
            t_start in -10.0f64..10.0,
            dt in 1e-6f64..1.0,
            seed in prop::collection::vec(-1e6f64..1e6, 64),
        ) {
            let grid = TorusGrid::new(n, 2.5).unwrap();
            let times = TimeGrid::new(t_start, dt, steps).unwrap();
            let samples: Vec<f64> = (0..n * (steps + 1)).map(|i| seed[i % seed.len()] * 1.0e-3f64.powi((i % 5) as i32)).collect();
            let field = SpaceTimeField::new(grid, times, samples).unwrap();
            let text = field_to_string(&field, &["config_hash abc".into()]);
            let (back, comments) = read_field(text.as_bytes()).unwrap();
            prop_assert_eq!(back, field);
            prop_assert_eq!(comments, vec!["config_hash abc".to_string()]);
        }
    }

    #[test]
    fn rejects_truncated_data() {
        let grid = TorusGrid::new(8, 1.0).unwrap();
        let times = TimeGrid::new(0.0, 0.5, 1).unwrap();
        let field = SpaceTimeField::constant(grid, times, 1.5).unwrap();
        let text = field_to_string(&field, &[]);
        let cut = &text[..text.len() - 10];
        assert!(read_field(cut.as_bytes()).is_err());
        assert!(read_field("nonsense\n".as_bytes()).is_err());
    }
}
