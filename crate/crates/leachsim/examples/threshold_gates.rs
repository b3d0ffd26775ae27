//! The hard/soft transmission gates on one shared reading stream: which
//! rounds each variant would transmit, and the subset relation between them.
//!
//! Run with: cargo run --example threshold_gates

use leachsim::model::{deploy_nodes, FieldConfig, ProtocolConfig, SensingConfig, Variant};
use leachsim::rng::SimRng;
use leachsim::sensing::{sense, transmit_through_gate};

fn main() {
    let sensing = SensingConfig::default();
    let field = FieldConfig {
        node_count: 1,
        ..FieldConfig::default()
    };

    // one walk, replayed through each variant's gate
    let mut walker = deploy_nodes(&field, &mut SimRng::new(7)).pop().unwrap();
    let mut rng = SimRng::new(42);
    let readings: Vec<f64> = (1..=40u32)
        .map(|round| sense(&mut walker, &sensing, round, &mut rng).value)
        .collect();

    let variants = [Variant::Modleach, Variant::ModleachHt, Variant::ModleachSt];
    let mut sent: Vec<Vec<bool>> = Vec::new();
    for variant in variants {
        let proto = ProtocolConfig {
            variant,
            ..ProtocolConfig::default()
        };
        let mut node = deploy_nodes(&field, &mut SimRng::new(7)).pop().unwrap();
        sent.push(
            readings
                .iter()
                .map(|&v| transmit_through_gate(&mut node, v, &proto))
                .collect(),
        );
    }

    println!(
        "hard threshold {} / soft threshold {} on a [0,100] walk\n",
        ProtocolConfig::default().hard_threshold,
        ProtocolConfig::default().soft_threshold
    );
    println!("{:>5} {:>8}  {:>9} {:>9} {:>9}", "round", "value", "modleach", "ht", "st");
    for (i, value) in readings.iter().enumerate() {
        let mark = |s: bool| if s { "send" } else { "-" };
        println!(
            "{:>5} {value:>8.2}  {:>9} {:>9} {:>9}",
            i + 1,
            mark(sent[0][i]),
            mark(sent[1][i]),
            mark(sent[2][i])
        );
    }
    let counts: Vec<usize> = sent.iter().map(|s| s.iter().filter(|&&x| x).count()).collect();
    println!(
        "\ntransmissions: modleach {} >= ht {} >= st {}",
        counts[0], counts[1], counts[2]
    );
}
