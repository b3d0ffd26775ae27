//! Cost tables of the first-order radio model: crossover distance, transmit
//! cost at both amplification levels, receive and fusion costs.
//!
//! Run with: cargo run --example radio_energy

use leachsim::{aggregation_cost, crossover_distance, rx_cost, tx_cost, PowerLevel, RadioModel};

fn main() {
    let radio = RadioModel::default();
    let d0 = crossover_distance(&radio, PowerLevel::High);
    println!("crossover distance d0 = {d0:.4} m (same at both levels)\n");

    let bits = 4000;
    println!("tx cost for a {bits}-bit packet:");
    println!("{:>8} {:>14} {:>14} {:>10}", "d (m)", "HIGH (J)", "LOW (J)", "regime");
    for d in [0.0, 10.0, 25.0, 50.0, 75.0, d0, 100.0, 125.0] {
        let high = tx_cost(&radio, bits, d, PowerLevel::High);
        let low = tx_cost(&radio, bits, d, PowerLevel::Low);
        let regime = if d < d0 { "d^2" } else { "d^4" };
        println!("{d:>8.2} {high:>14.6e} {low:>14.6e} {regime:>10}");
    }

    println!("\nrx cost  ({bits} bits)          = {:.6e} J", rx_cost(&radio, bits));
    println!("fusion   ({bits} bits, 5 sig)   = {:.6e} J", aggregation_cost(&radio, bits, 5));
    println!("fusion   ({bits} bits, 1 sig)   = {:.6e} J", aggregation_cost(&radio, bits, 1));
}
