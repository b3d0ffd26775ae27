//! Four-way comparison of LEACH, MODLEACH, and the two reactive variants on
//! paired deployments, with 95% confidence intervals over 20 seeds.
//!
//! Run with: cargo run --release --example compare_protocols

use leachsim::cli::compare_variants;
use leachsim::model::Config;
use leachsim::report::comparison_table;

fn main() {
    let config = Config::default();
    let seeds = (1, 20);
    println!(
        "running 4 variants x {} seeds, {} nodes, field {}x{} m, bs ({}, {})\n",
        seeds.1 - seeds.0 + 1,
        config.field.node_count,
        config.field.width_m,
        config.field.height_m,
        config.field.bs_pos.0,
        config.field.bs_pos.1
    );
    let outcome = compare_variants(&config, seeds).expect("default config runs");
    print!("{}", comparison_table(&outcome.rows));
    if let Some(note) = &outcome.st_throughput_note {
        println!("{note}");
    }
}
