//! Minimal CSV output with the normative column sets.

use anyhow::{bail, Context, Result};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

pub const CURVE_HEADER: &str = "episode,exploitability,algorithm,game,seed";
pub const ARENA_HEADER: &str = "player1,player2,episodes,win_rate,loss_rate,draw_rate,avg_payoff,seed";
pub const MERGED_HEADER: &str = "episode,exploitability_mean,exploitability_std,seeds,algorithm,game";

/// `printf("%.10g")`.
pub fn fmt_g(x: f64) -> String {
    const PRECISION: i32 = 10;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (PRECISION - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Append-only CSV file. A new file gets `header`; an existing one must
/// already start with it.
pub struct CsvWriter {
    file: File,
}

impl CsvWriter {
    pub fn create(path: &Path, header: &str) -> Result<Self> {
        let mut file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        writeln!(file, "{header}")?;
        Ok(CsvWriter { file })
    }

    pub fn append(path: &Path, header: &str) -> Result<Self> {
        if path.exists() && std::fs::metadata(path)?.len() > 0 {
            let first = BufReader::new(File::open(path)?).lines().next().transpose()?.unwrap_or_default();
            if first != header {
                bail!("{} has header `{first}`, expected `{header}`", path.display());
            }
            let file = OpenOptions::new().append(true).open(path)?;
            Ok(CsvWriter { file })
        } else {
            Self::create(path, header)
        }
    }

    /// Write one row and flush it, so a crash never leaves half a file.
    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        writeln!(self.file, "{}", fields.join(","))?;
        self.file.flush()?;
        Ok(())
    }
}

/// Rows of a CSV file with the given header, split on commas.
pub fn read_rows(path: &Path, header: &str) -> Result<Vec<Vec<String>>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == header => {}
        other => bail!("{}: expected header `{header}`, found `{}`", path.display(), other.unwrap_or("")),
    }
    let width = header.split(',').count();
    lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let fields: Vec<String> = l.split(',').map(str::to_string).collect();
            if fields.len() != width {
                bail!("{}:{}: expected {width} fields, found {}", path.display(), i + 2, fields.len());
            }
            Ok(fields)
        })
        .collect()
}
