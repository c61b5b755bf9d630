use super::profile::load_profile;
use crate::csv::{fmt_g, CsvWriter, ARENA_HEADER};
use anyhow::{bail, Result};
use eqlab::eval::{arena, MatchReport};
use eqlab::GameKind;
use std::path::Path;

pub struct ArenaArgs<'a> {
    pub a: &'a Path,
    pub b: &'a Path,
    pub game: Option<GameKind>,
    pub episodes: u64,
    pub seed: u64,
    pub labels: [Option<String>; 2],
    pub out: Option<&'a Path>,
}

/// A's average policy in the first seat ("player 1") against B's in the
/// second. Swap the checkpoints for the other seating.
pub fn run_arena(args: &ArenaArgs) -> Result<(MatchReport, [String; 2])> {
    let a = load_profile(args.a, args.game)?;
    let b = load_profile(args.b, args.game.or(Some(a.game.kind())))?;
    if a.game.kind() != b.game.kind() {
        bail!("checkpoints are for different games: {} and {}", a.game.name(), b.game.name());
    }
    let report = arena(&*a.game, a.seat(0), b.seat(1), args.episodes, args.seed)?;
    let labels = [
        args.labels[0].clone().unwrap_or_else(|| a.label()),
        args.labels[1].clone().unwrap_or_else(|| b.label()),
    ];
    if let Some(out) = args.out {
        CsvWriter::append(out, ARENA_HEADER)?.row(&[
            labels[0].clone(),
            labels[1].clone(),
            report.episodes.to_string(),
            fmt_g(report.win_rate),
            fmt_g(report.loss_rate),
            fmt_g(report.draw_rate),
            fmt_g(report.avg_payoff),
            args.seed.to_string(),
        ])?;
    }
    Ok((report, labels))
}

pub fn render(report: &MatchReport, labels: &[String; 2]) -> String {
    format!(
        "{} (player 1) vs {} (player 2), {} episodes\nwin_rate {}\nloss_rate {}\ndraw_rate {}\navg_payoff {}\n",
        labels[0],
        labels[1],
        report.episodes,
        fmt_g(report.win_rate),
        fmt_g(report.loss_rate),
        fmt_g(report.draw_rate),
        fmt_g(report.avg_payoff)
    )
}
