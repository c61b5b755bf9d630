use super::profile::load_profile;
use crate::csv::{fmt_g, CsvWriter, CURVE_HEADER};
use anyhow::Result;
use eqlab::eval::{exploitability, EvalReport};
use eqlab::tree::GameTree;
use eqlab::GameKind;
use std::path::Path;

/// Exploitability of a checkpoint's average profile; appends a curve row to
/// `out` when given.
pub fn eval(checkpoint: &Path, game: Option<GameKind>, out: Option<&Path>) -> Result<EvalReport> {
    let profile = load_profile(checkpoint, game)?;
    let tree = GameTree::build(profile.game.clone());
    let mut report = exploitability(&tree, [profile.seat(0), profile.seat(1)]);
    report.episode = profile.meta.parse("episodes").unwrap_or(0);
    report.seed = profile.meta.parse("seed").unwrap_or(0);
    if let Some(out) = out {
        CsvWriter::append(out, CURVE_HEADER)?.row(&[
            report.episode.to_string(),
            fmt_g(report.exploitability),
            profile.label(),
            profile.game.name().to_string(),
            report.seed.to_string(),
        ])?;
    }
    Ok(report)
}

pub fn render(report: &EvalReport) -> String {
    format!(
        "exploitability {}\nbr_value_0 {}\nbr_value_1 {}\nprofile_value_0 {}\nepisode {}\nseed {}\n",
        fmt_g(report.exploitability),
        fmt_g(report.br_values[0]),
        fmt_g(report.br_values[1]),
        fmt_g(report.profile_values[0]),
        report.episode,
        report.seed
    )
}
