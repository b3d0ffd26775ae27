//! CSV, table, and SVG rendering for run artifacts.
//!
//! All numeric output uses plain decimal-point formatting regardless of
//! locale, and every writer is a pure function from data to `String`, so
//! re-running a command with the same inputs reproduces artifacts byte for
//! byte.

use std::fmt::Write as _;

use crate::engine::{RoundRecord, RunSummary};
use crate::stats::{Metric, ReplicateStats, RoundAggregate};

pub const TRACE_HEADER: &str =
    "round,alive,dead,ch_count,retained_ch,pkts_bs_cum,pkts_ch_cum,residual_j,control_j";

/// Render a per-round trace as CSV, one row per round.
pub fn trace_csv(trace: &[RoundRecord]) -> String {
    let mut out = String::with_capacity(trace.len() * 48 + 64);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in trace {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.round,
            r.alive_count,
            r.dead_count,
            r.ch_count,
            r.retained_ch_count,
            r.packets_to_bs_cum,
            r.packets_to_ch_cum,
            r.total_residual_energy_j,
            r.control_energy_j_this_round
        );
    }
    out
}

pub const AGGREGATE_HEADER: &str = "round,metric,mean,ci95_lo,ci95_hi";

/// Render per-round replicate aggregates as CSV. Interval columns are left
/// empty when a single replicate cannot carry one.
pub fn aggregate_csv(rows: &[RoundAggregate]) -> String {
    let mut out = String::with_capacity(rows.len() * 40 + 32);
    out.push_str(AGGREGATE_HEADER);
    out.push('\n');
    for row in rows {
        let lo = row.ci95_lo.map(|v| v.to_string()).unwrap_or_default();
        let hi = row.ci95_hi.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{}", row.round, row.metric.name(), row.mean, lo, hi);
    }
    out
}

fn mean_ci_cell(stats: &ReplicateStats) -> String {
    match stats.ci95_halfwidth {
        Some(h) => format!("{:.1} ± {:.1}", stats.mean, h),
        None => format!("{:.1} ± n/a", stats.mean),
    }
}

/// One variant's row of the comparison table.
#[derive(Clone, Debug)]
pub struct ComparisonRow {
    pub variant: String,
    pub first_dead: ReplicateStats,
    pub half_dead: ReplicateStats,
    pub last_dead: ReplicateStats,
    pub packets_bs: ReplicateStats,
    pub mean_ch: ReplicateStats,
}

/// Plain-text comparison table with one row per variant.
pub fn comparison_table(rows: &[ComparisonRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12} {:>18} {:>18} {:>18} {:>20} {:>16}",
        "variant", "first_dead", "half_dead", "last_dead", "packets_to_bs", "mean_ch"
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{:<12} {:>18} {:>18} {:>18} {:>20} {:>16}",
            row.variant,
            mean_ci_cell(&row.first_dead),
            mean_ci_cell(&row.half_dead),
            mean_ci_cell(&row.last_dead),
            mean_ci_cell(&row.packets_bs),
            mean_ci_cell(&row.mean_ch)
        );
    }
    out
}

/// The comparison table as CSV.
pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from(
        "variant,first_dead_mean,first_dead_ci95,half_dead_mean,half_dead_ci95,\
         last_dead_mean,last_dead_ci95,packets_bs_mean,packets_bs_ci95,mean_ch_mean,mean_ch_ci95\n",
    );
    let cell = |s: &ReplicateStats| {
        format!(
            "{},{}",
            s.mean,
            s.ci95_halfwidth.map(|h| h.to_string()).unwrap_or_default()
        )
    };
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.variant,
            cell(&row.first_dead),
            cell(&row.half_dead),
            cell(&row.last_dead),
            cell(&row.packets_bs),
            cell(&row.mean_ch)
        );
    }
    out
}

/// Milestone summary for a batch of runs of one variant.
pub fn run_summary_text(
    variant: &str,
    seeds: (u64, u64),
    first: &ReplicateStats,
    half: &ReplicateStats,
    last: &ReplicateStats,
    pkts_bs: &ReplicateStats,
    pkts_ch: &ReplicateStats,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "variant {variant}  seeds {}..{}", seeds.0, seeds.1);
    let _ = writeln!(out, "round milestones (mean ± 95% CI over {} seed(s))", first.n);
    let _ = writeln!(out, "  first death : {}", mean_ci_cell(first));
    let _ = writeln!(out, "  half dead   : {}", mean_ci_cell(half));
    let _ = writeln!(out, "  last death  : {}", mean_ci_cell(last));
    let _ = writeln!(out, "throughput");
    let _ = writeln!(out, "  packets to bs : {}", mean_ci_cell(pkts_bs));
    let _ = writeln!(out, "  packets to ch : {}", mean_ci_cell(pkts_ch));
    out
}

const SVG_COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
const SVG_W: f64 = 720.0;
const SVG_H: f64 = 440.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 48.0;

/// Minimal polyline chart: one series per (name, points) pair, shared axes,
/// legend in the top-right corner.
pub fn svg_line_chart(title: &str, x_label: &str, y_label: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut x_max = 1.0_f64;
    let mut y_max = 1.0_f64;
    for (_, points) in series {
        for &(x, y) in points {
            x_max = x_max.max(x);
            y_max = y_max.max(y);
        }
    }
    let plot_w = SVG_W - MARGIN_L - MARGIN_R;
    let plot_h = SVG_H - MARGIN_T - MARGIN_B;
    let px = |x: f64| MARGIN_L + x / x_max * plot_w;
    let py = |y: f64| MARGIN_T + (1.0 - y / y_max) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}">"#
    );
    let _ = writeln!(out, r#"<rect width="{SVG_W}" height="{SVG_H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="22" font-family="sans-serif" font-size="15" text-anchor="middle">{title}</text>"#,
        SVG_W / 2.0
    );
    // axes
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" y2="{:.1}" stroke="black"/>"#,
        MARGIN_T + plot_h
    );
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN_L}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
        MARGIN_T + plot_h,
        MARGIN_L + plot_w,
        MARGIN_T + plot_h
    );
    // axis labels and extents
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">{x_label}</text>"#,
        MARGIN_L + plot_w / 2.0,
        SVG_H - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">{y_label}</text>"#,
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN_L}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">0</text>"#,
        MARGIN_T + plot_h + 16.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{x_max}</text>"#,
        MARGIN_L + plot_w,
        MARGIN_T + plot_h + 16.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{y_max}</text>"#,
        MARGIN_L - 6.0,
        MARGIN_T + 4.0
    );

    for (i, (name, points)) in series.iter().enumerate() {
        let color = SVG_COLORS[i % SVG_COLORS.len()];
        let mut path = String::with_capacity(points.len() * 12);
        for &(x, y) in points {
            let _ = write!(path, "{:.1},{:.1} ", px(x), py(y));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.trim_end()
        );
        let ly = MARGIN_T + 14.0 + i as f64 * 16.0;
        let lx = MARGIN_L + plot_w - 130.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            lx + 18.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11">{name}</text>"#,
            lx + 24.0,
            ly + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Build the alive-nodes chart series from per-round aggregates.
pub fn alive_series(rows: &[RoundAggregate]) -> Vec<(f64, f64)> {
    rows.iter()
        .filter(|r| r.metric == Metric::Alive)
        .map(|r| (r.round as f64, r.mean))
        .collect()
}

/// Build the cumulative BS-packet chart series from per-round aggregates.
pub fn packets_series(rows: &[RoundAggregate]) -> Vec<(f64, f64)> {
    rows.iter()
        .filter(|r| r.metric == Metric::PktsBsCum)
        .map(|r| (r.round as f64, r.mean))
        .collect()
}

/// Thin tabular view of a single run, used by the runnable examples.
pub fn single_run_text(summary: &RunSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "variant {} seed {}", summary.variant, summary.seed);
    let _ = writeln!(out, "  rounds simulated : {}", summary.rounds_simulated);
    let _ = writeln!(out, "  first death      : {}", summary.first_dead_round);
    let _ = writeln!(out, "  half dead        : {}", summary.half_dead_round);
    let _ = writeln!(out, "  last death       : {}", summary.last_dead_round);
    let _ = writeln!(out, "  packets to bs    : {}", summary.total_packets_to_bs);
    let _ = writeln!(out, "  packets to ch    : {}", summary.total_packets_to_ch);
    let _ = writeln!(out, "  mean ch count    : {:.2}", summary.mean_ch_count());
    out
}
