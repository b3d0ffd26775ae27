//! One MODLEACH run: lifetime milestones, throughput, and a trace excerpt.
//!
//! Run with: cargo run --release --example single_run

use leachsim::engine::run_with_seed;
use leachsim::model::{Config, Variant};
use leachsim::report;

fn main() {
    let mut config = Config::default();
    config.protocol.variant = Variant::Modleach;

    let summary = run_with_seed(&config, 1).expect("default config is valid");
    print!("{}", report::single_run_text(&summary));

    println!("\nfirst rounds of the trace:");
    let csv = report::trace_csv(&summary.trace);
    for line in csv.lines().take(6) {
        println!("  {line}");
    }
    println!("  ... ({} rounds total)", summary.trace.len());

    let spent = summary.initial_energy_j - summary.trace.last().unwrap().total_residual_energy_j;
    println!("\nenergy drained: {spent:.3} J of {:.3} J", summary.initial_energy_j);
    let l = &summary.ledger;
    println!("  control     {:>8.3} J", l.control_j);
    println!("  data tx     {:>8.3} J", l.data_tx_j);
    println!("  data rx     {:>8.3} J", l.data_rx_j);
    println!("  aggregation {:>8.3} J", l.aggregation_j);
}
