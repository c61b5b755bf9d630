use super::train::CURVE_FILE;
use crate::csv::{fmt_g, read_rows, CURVE_HEADER, MERGED_HEADER};
use anyhow::{bail, Context, Result};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub struct MergedRow {
    pub episode: u64,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single seed.
    pub std: f64,
    pub seeds: usize,
    pub algorithm: String,
    pub game: String,
}

/// Curve files named by `inputs`: files as given, directories searched for
/// `curve.csv` directly and one level down (`seed-*/curve.csv`).
pub fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_file() {
            files.push(input.clone());
            continue;
        }
        if input.join(CURVE_FILE).is_file() {
            files.push(input.join(CURVE_FILE));
        }
        let mut nested: Vec<PathBuf> = std::fs::read_dir(input)
            .with_context(|| format!("reading {}", input.display()))?
            .filter_map(|e| e.ok().map(|e| e.path().join(CURVE_FILE)))
            .filter(|p| p.is_file())
            .collect();
        nested.sort();
        files.extend(nested);
    }
    if files.is_empty() {
        bail!("no curve files found");
    }
    Ok(files)
}

/// Mean and standard deviation across files, per (algorithm, game, episode).
pub fn merge(files: &[PathBuf]) -> Result<Vec<MergedRow>> {
    let mut groups: BTreeMap<(String, String, u64), Vec<f64>> = BTreeMap::new();
    for file in files {
        for row in read_rows(file, CURVE_HEADER)? {
            let episode: u64 = row[0].parse().with_context(|| format!("{}: bad episode `{}`", file.display(), row[0]))?;
            let value: f64 = row[1].parse().with_context(|| format!("{}: bad value `{}`", file.display(), row[1]))?;
            groups.entry((row[2].clone(), row[3].clone(), episode)).or_default().push(value);
        }
    }
    Ok(groups
        .into_iter()
        .map(|((algorithm, game, episode), v)| {
            let n = v.len() as f64;
            let mean = v.iter().sum::<f64>() / n;
            let std = if v.len() > 1 {
                (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            MergedRow { episode, mean, std, seeds: v.len(), algorithm, game }
        })
        .collect())
}

pub fn render(rows: &[MergedRow]) -> String {
    let mut out = format!("{MERGED_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.episode,
            fmt_g(r.mean),
            fmt_g(r.std),
            r.seeds,
            r.algorithm,
            r.game
        ));
    }
    out
}

pub fn curves(inputs: &[PathBuf], out: Option<&Path>) -> Result<String> {
    let text = render(&merge(&collect_inputs(inputs)?)?);
    if let Some(out) = out {
        std::fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(text)
}
