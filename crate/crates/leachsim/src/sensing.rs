//! Synthetic sensor readings and the hard/soft transmission gates.
//!
//! Readings follow a per-node uniform random walk on the configured range:
//! the first draw is uniform over `[min_value, max_value]`, every later
//! round adds a uniform step in `[-step_sigma, +step_sigma]`, clamped to the
//! range. Keeping the walk on the range makes threshold crossings recurrent,
//! so reactive nodes keep reporting now and then instead of going silent
//! after a long drift.
//!
//! LEACH and MODLEACH transmit every round. The HT variant transmits only
//! when the sensed value reaches the hard threshold. The ST variant
//! additionally requires the value to have moved by at least the soft
//! threshold since the last transmitted value, so its transmission set is a
//! subset of HT's, which in turn is a subset of the proactive set.

use crate::model::{NodeState, ProtocolConfig, SensingConfig, Variant};
use crate::rng::SimRng;

/// One sensed value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reading {
    pub node: usize,
    pub round: u32,
    pub value: f64,
}

/// Decision of the transmission gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateDecision {
    Transmit,
    Suppress,
}

/// Advance a node's reading by one round. The walk lives on the configured
/// range: steps that would leave it are clamped at the boundary. Exactly one
/// draw is consumed per call regardless of variant, which keeps RNG streams
/// aligned between runs that differ only in protocol behavior.
pub fn sense(node: &mut NodeState, cfg: &SensingConfig, round: u32, rng: &mut SimRng) -> Reading {
    debug_assert!(node.alive);
    let value = match node.last_sensed {
        None => rng.uniform(cfg.min_value, cfg.max_value),
        Some(prev) => (prev + rng.uniform(-cfg.step_sigma, cfg.step_sigma))
            .clamp(cfg.min_value, cfg.max_value),
    };
    node.last_sensed = Some(value);
    Reading {
        node: node.id,
        round,
        value,
    }
}

/// Pure gate decision for a sensed value given the node's gate memory.
pub fn gate(
    variant: Variant,
    value: f64,
    last_transmitted: Option<f64>,
    proto: &ProtocolConfig,
) -> GateDecision {
    match variant {
        Variant::Leach | Variant::Modleach => GateDecision::Transmit,
        Variant::ModleachHt => {
            if value >= proto.hard_threshold {
                GateDecision::Transmit
            } else {
                GateDecision::Suppress
            }
        }
        Variant::ModleachSt => {
            if value < proto.hard_threshold {
                return GateDecision::Suppress;
            }
            match last_transmitted {
                None => GateDecision::Transmit,
                Some(prev) => {
                    if (value - prev).abs() >= proto.soft_threshold {
                        GateDecision::Transmit
                    } else {
                        GateDecision::Suppress
                    }
                }
            }
        }
    }
}

/// Run a node's value through the gate, updating the node's gate memory on
/// transmit. Returns true when the value should be sent.
pub fn transmit_through_gate(node: &mut NodeState, value: f64, proto: &ProtocolConfig) -> bool {
    match gate(proto.variant, value, node.last_transmitted, proto) {
        GateDecision::Transmit => {
            node.last_transmitted = Some(value);
            true
        }
        GateDecision::Suppress => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{deploy_nodes, FieldConfig};

    fn proto(variant: Variant) -> ProtocolConfig {
        ProtocolConfig {
            variant,
            ..ProtocolConfig::default()
        }
    }

    fn one_node() -> NodeState {
        let field = FieldConfig {
            node_count: 1,
            ..FieldConfig::default()
        };
        deploy_nodes(&field, &mut SimRng::new(1)).pop().unwrap()
    }

    #[test]
    fn frozen_walk_with_zero_sigma() {
        let cfg = SensingConfig {
            step_sigma: 0.0,
            ..SensingConfig::default()
        };
        let mut node = one_node();
        let mut rng = SimRng::new(11);
        let first = sense(&mut node, &cfg, 1, &mut rng).value;
        for round in 2..50 {
            let v = sense(&mut node, &cfg, round, &mut rng).value;
            assert_eq!(v, first);
        }
    }

    #[test]
    fn reading_sequence_is_deterministic() {
        let cfg = SensingConfig::default();
        let mut a = one_node();
        let mut b = one_node();
        let mut rng_a = SimRng::new(77);
        let mut rng_b = SimRng::new(77);
        for round in 1..200 {
            let va = sense(&mut a, &cfg, round, &mut rng_a).value;
            let vb = sense(&mut b, &cfg, round, &mut rng_b).value;
            assert_eq!(va, vb);
        }
    }

    #[test]
    fn first_round_values_center_on_midpoint() {
        let cfg = SensingConfig::default();
        let mut rng = SimRng::new(321);
        let n = 10_000;
        let mut sum = 0.0;
        for id in 0..n {
            let mut node = one_node();
            node.id = id;
            sum += sense(&mut node, &cfg, 1, &mut rng).value;
        }
        let mean = sum / n as f64;
        // U(0,100): sd = 100/sqrt(12); three standard errors of the mean
        let se = 100.0 / 12f64.sqrt() / (n as f64).sqrt();
        assert!((mean - 50.0).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn walk_stays_on_the_configured_range() {
        let cfg = SensingConfig::default();
        let mut node = one_node();
        let mut rng = SimRng::new(5);
        let mut crossings = 0;
        let mut above = false;
        for round in 1..=4000u32 {
            let v = sense(&mut node, &cfg, round, &mut rng).value;
            assert!((cfg.min_value..=cfg.max_value).contains(&v));
            assert!(v.is_finite());
            let now_above = v >= 50.0;
            if round > 1 && now_above != above {
                crossings += 1;
            }
            above = now_above;
        }
        // bounded walk keeps re-crossing the middle of the range
        assert!(crossings > 10, "only {crossings} midline crossings");
    }

    #[test]
    fn hard_gate_examples() {
        let p = proto(Variant::ModleachHt);
        assert_eq!(gate(Variant::ModleachHt, 60.0, None, &p), GateDecision::Transmit);
        assert_eq!(gate(Variant::ModleachHt, 40.0, None, &p), GateDecision::Suppress);
    }

    #[test]
    fn soft_gate_examples() {
        let p = proto(Variant::ModleachSt);
        // change of 0.5 below the soft threshold of 2
        assert_eq!(
            gate(Variant::ModleachSt, 60.0, Some(59.5), &p),
            GateDecision::Suppress
        );
        // both gates pass and memory updates
        let mut node = one_node();
        node.last_transmitted = Some(59.0);
        assert!(transmit_through_gate(&mut node, 62.0, &p));
        assert_eq!(node.last_transmitted, Some(62.0));
    }

    #[test]
    fn proactive_variants_always_transmit() {
        for v in [Variant::Leach, Variant::Modleach] {
            let p = proto(v);
            assert_eq!(gate(v, -1e9, None, &p), GateDecision::Transmit);
            assert_eq!(gate(v, 0.0, Some(0.0), &p), GateDecision::Transmit);
        }
    }

    #[test]
    fn first_transmission_needs_no_memory() {
        let p = proto(Variant::ModleachSt);
        assert_eq!(gate(Variant::ModleachSt, 55.0, None, &p), GateDecision::Transmit);
    }

    /// On one shared reading stream the ST transmissions are a subset of the
    /// HT transmissions, which are a subset of the proactive ones, and the
    /// degenerate thresholds collapse the gates into each other.
    #[test]
    fn transmission_set_inclusion_and_degeneracies() {
        let cfg = SensingConfig::default();
        let base = ProtocolConfig::default();
        let mut stream_node = one_node();
        let mut rng = SimRng::new(2024);
        let readings: Vec<f64> = (1..400u32)
            .map(|r| sense(&mut stream_node, &cfg, r, &mut rng).value)
            .collect();

        let run_gate = |variant: Variant, hard: f64, soft: f64| -> Vec<bool> {
            let p = ProtocolConfig {
                variant,
                hard_threshold: hard,
                soft_threshold: soft,
                ..base.clone()
            };
            let mut node = one_node();
            readings
                .iter()
                .map(|&v| transmit_through_gate(&mut node, v, &p))
                .collect()
        };

        let proactive = run_gate(Variant::Modleach, 50.0, 2.0);
        let ht = run_gate(Variant::ModleachHt, 50.0, 2.0);
        let st = run_gate(Variant::ModleachSt, 50.0, 2.0);
        for i in 0..readings.len() {
            assert!(!st[i] || ht[i], "ST transmitted where HT suppressed at {i}");
            assert!(!ht[i] || proactive[i]);
        }
        assert!(st.iter().filter(|&&t| t).count() <= ht.iter().filter(|&&t| t).count());

        // soft threshold 0 reproduces the hard-threshold set exactly
        let st_zero = run_gate(Variant::ModleachSt, 50.0, 0.0);
        assert_eq!(st_zero, ht);

        // hard threshold -inf reproduces the proactive set exactly
        let ht_open = run_gate(Variant::ModleachHt, f64::NEG_INFINITY, 2.0);
        assert_eq!(ht_open, proactive);
    }
}
