//! Cross-seed aggregation: lifetime milestones as mean ± 95% CI, and the
//! Student-t quantiles behind the interval.
//!
//! Run with: cargo run --release --example replicate_stats

use leachsim::engine::run_with_seed;
use leachsim::model::{Config, Variant};
use leachsim::stats::{aggregate, student_t_quantile};

fn main() {
    println!("t(0.975, df) quantiles used for the intervals:");
    for df in [1.0, 4.0, 9.0, 19.0] {
        println!("  df {df:>4}: {:.4}", student_t_quantile(0.975, df));
    }

    let mut config = Config::default();
    config.protocol.variant = Variant::Leach;
    let runs: Vec<_> = (1..=20u64)
        .map(|seed| run_with_seed(&config, seed).expect("valid config"))
        .collect();

    println!("\nleach over seeds 1..20:");
    let metrics: [(&str, Vec<f64>); 4] = [
        ("first_dead", runs.iter().map(|r| r.first_dead_round as f64).collect()),
        ("half_dead", runs.iter().map(|r| r.half_dead_round as f64).collect()),
        ("last_dead", runs.iter().map(|r| r.last_dead_round as f64).collect()),
        ("packets_bs", runs.iter().map(|r| r.total_packets_to_bs as f64).collect()),
    ];
    for (name, values) in metrics {
        let s = aggregate(name, &values).unwrap();
        println!(
            "  {name:<11} mean {:>9.1}  std {:>7.1}  95% CI ± {:>6.1}",
            s.mean,
            s.std.unwrap(),
            s.ci95_halfwidth.unwrap()
        );
    }
}
