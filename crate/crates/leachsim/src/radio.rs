//! Energy arithmetic of the first-order radio model.
//!
//! Transmitting `k` bits over distance `d` costs
//!
//! ```text
//! e_elec * k + e_fs * k * d^2    for d <  d0
//! e_elec * k + e_mp * k * d^4    for d >= d0
//! ```
//!
//! where `d0 = sqrt(e_fs / e_mp)` is the crossover distance at which both
//! amplification branches agree, so the cost is continuous in `d`.
//! Receiving costs the electronics term alone, and fusing `n` signals costs
//! `e_da * k * n`.
//!
//! Two amplification levels exist: HIGH for cluster-head-to-base-station
//! traffic and LOW for traffic inside a cluster. LOW divides both
//! amplification constants by the configured divisor, which leaves the
//! crossover distance unchanged.

use crate::model::RadioModel;

/// Amplification level of a transmission.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerLevel {
    /// Cluster-head-to-base-station amplification.
    High,
    /// Intra-cluster amplification, scaled down by the divisor.
    Low,
    /// Reserved for head-to-head relaying. No such routing exists yet; the
    /// hop span would match head-to-BS scale, so this maps to the HIGH
    /// constants as a placeholder.
    InterCluster,
}

fn amplification(radio: &RadioModel, level: PowerLevel) -> (f64, f64) {
    match level {
        PowerLevel::High | PowerLevel::InterCluster => {
            (radio.e_fs_j_per_bit_m2, radio.e_mp_j_per_bit_m4)
        }
        PowerLevel::Low => (
            radio.e_fs_j_per_bit_m2 / radio.intra_cluster_divisor,
            radio.e_mp_j_per_bit_m4 / radio.intra_cluster_divisor,
        ),
    }
}

/// Distance at which the free-space and multipath branches cost the same.
pub fn crossover_distance(radio: &RadioModel, level: PowerLevel) -> f64 {
    let (e_fs, e_mp) = amplification(radio, level);
    (e_fs / e_mp).sqrt()
}

/// Cost of transmitting `k` bits over `d` meters at the given level.
pub fn tx_cost(radio: &RadioModel, k: u32, d: f64, level: PowerLevel) -> f64 {
    debug_assert!(d >= 0.0);
    let (e_fs, e_mp) = amplification(radio, level);
    let bits = k as f64;
    let d0 = crossover_distance(radio, level);
    let amp = if d < d0 {
        e_fs * bits * d * d
    } else {
        e_mp * bits * d * d * d * d
    };
    radio.e_elec_j_per_bit * bits + amp
}

/// Cost of receiving `k` bits: the electronics term alone.
pub fn rx_cost(radio: &RadioModel, k: u32) -> f64 {
    radio.e_elec_j_per_bit * k as f64
}

/// Cost of fusing `n_signals` reports of `k` bits each into one packet.
pub fn aggregation_cost(radio: &RadioModel, k: u32, n_signals: u32) -> f64 {
    radio.e_da_j_per_bit_per_signal * k as f64 * n_signals as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radio() -> RadioModel {
        RadioModel::default()
    }

    #[test]
    fn crossover_matches_hand_computation() {
        // sqrt(10e-12 / 0.0013e-12) = sqrt(7692.307...) = 87.7058 m
        let d0 = crossover_distance(&radio(), PowerLevel::High);
        assert!((d0 - 87.7058).abs() < 1e-3, "d0 = {d0}");
    }

    #[test]
    fn crossover_same_for_both_levels() {
        // Numerator and denominator carry the same divisor.
        let high = crossover_distance(&radio(), PowerLevel::High);
        let low = crossover_distance(&radio(), PowerLevel::Low);
        assert!((high - low).abs() < 1e-9);
    }

    #[test]
    fn crossover_of_equal_constants_is_one_meter() {
        let r = RadioModel {
            e_fs_j_per_bit_m2: 3e-12,
            e_mp_j_per_bit_m4: 3e-12,
            ..radio()
        };
        assert_eq!(crossover_distance(&r, PowerLevel::High), 1.0);
    }

    #[test]
    fn tx_cost_free_space_example() {
        // 50e-9*4000 + 10e-12*4000*50^2 = 2.0e-4 + 1.0e-4 = 3.0e-4 J
        let c = tx_cost(&radio(), 4000, 50.0, PowerLevel::High);
        assert!((c - 3.0e-4).abs() < 1e-12, "cost = {c}");
    }

    #[test]
    fn tx_cost_multipath_example() {
        // 2.0e-4 + 0.0013e-12*4000*100^4 = 2.0e-4 + 5.2e-4 = 7.2e-4 J
        let c = tx_cost(&radio(), 4000, 100.0, PowerLevel::High);
        assert!((c - 7.2e-4).abs() < 1e-12, "cost = {c}");
    }

    #[test]
    fn tx_cost_low_level_example() {
        // 2.0e-4 + (10e-12/10)*4000*10^2 = 2.004e-4 J
        let c = tx_cost(&radio(), 4000, 10.0, PowerLevel::Low);
        assert!((c - 2.004e-4).abs() < 1e-12, "cost = {c}");
    }

    #[test]
    fn zero_distance_costs_electronics_only() {
        for level in [PowerLevel::High, PowerLevel::Low] {
            let c = tx_cost(&radio(), 4000, 0.0, level);
            assert_eq!(c, 50e-9 * 4000.0);
        }
    }

    #[test]
    fn rx_cost_examples() {
        assert!((rx_cost(&radio(), 4000) - 2.0e-4).abs() < 1e-15);
        assert_eq!(rx_cost(&radio(), 0), 0.0);
        assert!((rx_cost(&radio(), 1) - 5.0e-8).abs() < 1e-20);
    }

    #[test]
    fn aggregation_cost_examples() {
        assert!((aggregation_cost(&radio(), 4000, 5) - 1.0e-4).abs() < 1e-15);
        assert_eq!(aggregation_cost(&radio(), 4000, 0), 0.0);
        assert!((aggregation_cost(&radio(), 4000, 1) - 2.0e-5).abs() < 1e-15);
    }

    #[test]
    fn continuous_at_crossover() {
        let r = radio();
        let d0 = crossover_distance(&r, PowerLevel::High);
        // the two branches agree at d0 itself
        let bits = 4000.0;
        let fs_branch = r.e_elec_j_per_bit * bits + r.e_fs_j_per_bit_m2 * bits * d0 * d0;
        let mp_branch = r.e_elec_j_per_bit * bits + r.e_mp_j_per_bit_m4 * bits * d0.powi(4);
        assert!((fs_branch - mp_branch).abs() < 1e-12, "branch gap {}", (fs_branch - mp_branch).abs());
        // and the sandwich around d0 shrinks linearly with epsilon, as a
        // continuous function with bounded slope must
        let gap = |eps: f64| {
            (tx_cost(&r, 4000, d0 - eps, PowerLevel::High)
                - tx_cost(&r, 4000, d0 + eps, PowerLevel::High))
            .abs()
        };
        assert!(gap(1e-6) < 3e-11, "gap at 1e-6: {}", gap(1e-6));
        assert!(gap(1e-9) < 1e-12, "gap at 1e-9: {}", gap(1e-9));
        assert!(gap(1e-9) < gap(1e-6));
    }

    #[test]
    fn monotonic_in_distance_and_bits() {
        let r = radio();
        let mut prev = 0.0;
        for step in 0..400 {
            let d = step as f64 * 0.5;
            let c = tx_cost(&r, 4000, d, PowerLevel::High);
            assert!(c >= prev, "not monotone at d = {d}");
            assert!(c.is_finite() && c >= 0.0);
            prev = c;
        }
        let mut prev = 0.0;
        for k in 1..500u32 {
            let c = tx_cost(&r, k, 35.0, PowerLevel::Low);
            assert!(c > prev, "not strictly increasing at k = {k}");
            prev = c;
        }
    }

    #[test]
    fn low_level_never_costs_more_than_high() {
        let r = radio();
        for step in 0..300 {
            let d = step as f64 * 0.7;
            let low = tx_cost(&r, 4000, d, PowerLevel::Low);
            let high = tx_cost(&r, 4000, d, PowerLevel::High);
            assert!(low <= high);
            if d > 0.0 {
                assert!(low < high, "levels should differ at d = {d}");
            } else {
                assert_eq!(low, high);
            }
        }
    }

    #[test]
    fn inter_cluster_placeholder_uses_high_constants() {
        let r = radio();
        let a = tx_cost(&r, 4000, 60.0, PowerLevel::InterCluster);
        let b = tx_cost(&r, 4000, 60.0, PowerLevel::High);
        assert_eq!(a, b);
    }
}
