//! End-to-end artifact export: per-seed traces, per-round aggregates, the
//! comparison table, and SVG charts, written into ./out-example.
//!
//! Run with: cargo run --release --example export_charts

use leachsim::cli::compare_variants;
use leachsim::model::Config;
use leachsim::report;
use leachsim::stats::aggregate_traces;

fn main() -> std::io::Result<()> {
    let config = Config::default();
    let out = std::path::Path::new("out-example");
    std::fs::create_dir_all(out)?;

    let outcome = compare_variants(&config, (1, 10)).expect("default config runs");

    let mut alive = Vec::new();
    let mut packets = Vec::new();
    for (variant, runs) in &outcome.runs {
        let traces: Vec<&[_]> = runs.iter().map(|r| r.trace.as_slice()).collect();
        let agg = aggregate_traces(&traces).unwrap();
        std::fs::write(
            out.join(format!("aggregate_{}.csv", variant.name())),
            report::aggregate_csv(&agg),
        )?;
        alive.push((variant.name().to_string(), report::alive_series(&agg)));
        packets.push((variant.name().to_string(), report::packets_series(&agg)));
    }
    std::fs::write(
        out.join("alive_nodes.svg"),
        report::svg_line_chart("alive nodes per round", "round", "alive nodes", &alive),
    )?;
    std::fs::write(
        out.join("packets_to_bs.svg"),
        report::svg_line_chart("packets delivered to bs", "round", "packets", &packets),
    )?;
    std::fs::write(out.join("comparison.csv"), report::comparison_csv(&outcome.rows))?;

    print!("{}", report::comparison_table(&outcome.rows));
    println!("wrote CSVs and SVGs to {}", out.display());
    Ok(())
}
