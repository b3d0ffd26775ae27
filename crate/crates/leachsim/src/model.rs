//! Domain types and configuration shared by every other module.
//!
//! The four configuration structs mirror the JSON document accepted by the
//! CLI field for field; unknown keys are rejected at parse time. Validation
//! collects every violation rather than stopping at the first one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::SimRng;

/// Protocol variant selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Leach,
    Modleach,
    ModleachHt,
    ModleachSt,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Leach,
        Variant::Modleach,
        Variant::ModleachHt,
        Variant::ModleachSt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Leach => "leach",
            Variant::Modleach => "modleach",
            Variant::ModleachHt => "modleach_ht",
            Variant::ModleachSt => "modleach_st",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        match s {
            "leach" => Some(Variant::Leach),
            "modleach" => Some(Variant::Modleach),
            "modleach_ht" => Some(Variant::ModleachHt),
            "modleach_st" => Some(Variant::ModleachSt),
            _ => None,
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Rule deciding whether a sitting cluster head stays in office.
///
/// `Adaptive` compares residual energy against the energy the head spent in
/// its previous round of service, so it is parameter free. `Fixed` compares
/// against a configured joule floor; `Fixed(f64::INFINITY)` disables
/// retention entirely and the protocol degenerates to plain LEACH.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RetentionMode {
    Adaptive,
    Fixed(f64),
}

/// Deployment field, node population, and run horizon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldConfig {
    pub width_m: f64,
    pub height_m: f64,
    pub node_count: u32,
    /// Base station position in meters; may lie outside the field rectangle.
    pub bs_pos: (f64, f64),
    pub initial_energy_j: f64,
    pub max_rounds: u32,
    pub seed: u64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            width_m: 100.0,
            height_m: 100.0,
            node_count: 100,
            bs_pos: (50.0, 50.0),
            initial_energy_j: 0.5,
            max_rounds: 5000,
            seed: 1,
        }
    }
}

/// First-order radio energy constants.
///
/// `e_elec_j_per_bit` is charged per bit on both transmit and receive.
/// Amplification is free-space (`d^2`) below the crossover distance and
/// multipath (`d^4`) at or beyond it. The two amplification constants here
/// are the HIGH level used for cluster-head-to-base-station traffic; the LOW
/// level used inside a cluster divides both by `intra_cluster_divisor`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadioModel {
    pub e_elec_j_per_bit: f64,
    pub e_fs_j_per_bit_m2: f64,
    pub e_mp_j_per_bit_m4: f64,
    pub e_da_j_per_bit_per_signal: f64,
    pub intra_cluster_divisor: f64,
}

impl Default for RadioModel {
    fn default() -> Self {
        Self {
            e_elec_j_per_bit: 50e-9,
            e_fs_j_per_bit_m2: 10e-12,
            e_mp_j_per_bit_m4: 0.0013e-12,
            e_da_j_per_bit_per_signal: 5e-9,
            intra_cluster_divisor: 10.0,
        }
    }
}

/// Protocol knobs: variant, election probability, retention, packet sizes,
/// and the reactive thresholds used by the HT/ST variants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolConfig {
    pub variant: Variant,
    /// Desired cluster-head fraction per round.
    pub p_ch: f64,
    pub retention_mode: RetentionMode,
    pub data_packet_bits: u32,
    /// Size of advertisement/join/schedule packets. Zero is allowed and
    /// models the regime where cluster formation is treated as free.
    pub control_packet_bits: u32,
    /// Minimum sensed value required to transmit at all (HT and ST variants).
    /// `f64::NEG_INFINITY` disables the hard gate.
    pub hard_threshold: f64,
    /// Minimum change from the last transmitted value required to transmit
    /// again (ST variant).
    pub soft_threshold: f64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            variant: Variant::Leach,
            p_ch: 0.1,
            retention_mode: RetentionMode::Adaptive,
            data_packet_bits: 4000,
            control_packet_bits: 100,
            hard_threshold: 50.0,
            soft_threshold: 2.0,
        }
    }
}

impl ProtocolConfig {
    /// Rounds per election epoch, `ceil(1/p)`.
    pub fn epoch_rounds(&self) -> u32 {
        ((1.0 / self.p_ch) - 1e-9).ceil().max(1.0) as u32
    }
}

/// Synthetic sensed-data model: per-node uniform random walk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensingConfig {
    pub min_value: f64,
    pub max_value: f64,
    /// Maximum per-round step of the walk.
    pub step_sigma: f64,
}

impl Default for SensingConfig {
    fn default() -> Self {
        Self {
            min_value: 0.0,
            max_value: 100.0,
            step_sigma: 5.0,
        }
    }
}

/// Full simulation configuration, the unit accepted by [`crate::engine::run`]
/// and mirrored by the JSON config file.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub field: FieldConfig,
    pub radio: RadioModel,
    pub protocol: ProtocolConfig,
    pub sensing: SensingConfig,
}

/// A single parameter violation found during validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvalidParameter {
    pub name: String,
    pub reason: String,
}

impl std::fmt::Display for InvalidParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.name, self.reason)
    }
}

/// Validation failure carrying the complete list of violations.
#[derive(Clone, Debug, PartialEq, Error)]
#[error("invalid configuration ({} violation(s)):{}", .violations.len(),
    .violations.iter().map(|v| format!("\n  {v}")).collect::<String>())]
pub struct ConfigError {
    pub violations: Vec<InvalidParameter>,
}

/// Check every invariant of the four configuration types, returning all
/// violations at once.
pub fn validate_config(config: &Config) -> Result<(), ConfigError> {
    let mut violations = Vec::new();
    let mut bad = |name: &str, reason: String| {
        violations.push(InvalidParameter {
            name: name.to_string(),
            reason,
        });
    };

    let f = &config.field;
    if !(f.width_m > 0.0 && f.width_m.is_finite()) {
        bad("width_m", format!("must be positive and finite, got {}", f.width_m));
    }
    if !(f.height_m > 0.0 && f.height_m.is_finite()) {
        bad("height_m", format!("must be positive and finite, got {}", f.height_m));
    }
    if f.node_count < 1 {
        bad("node_count", "must be at least 1".to_string());
    }
    if !(f.bs_pos.0.is_finite() && f.bs_pos.1.is_finite()) {
        bad("bs_pos", format!("must be finite, got ({}, {})", f.bs_pos.0, f.bs_pos.1));
    }
    if !(f.initial_energy_j > 0.0 && f.initial_energy_j.is_finite()) {
        bad(
            "initial_energy_j",
            format!("must be positive and finite, got {}", f.initial_energy_j),
        );
    }
    if f.max_rounds < 1 {
        bad("max_rounds", "must be at least 1".to_string());
    }

    let r = &config.radio;
    let positive = [
        ("e_elec_j_per_bit", r.e_elec_j_per_bit),
        ("e_fs_j_per_bit_m2", r.e_fs_j_per_bit_m2),
        ("e_mp_j_per_bit_m4", r.e_mp_j_per_bit_m4),
        ("e_da_j_per_bit_per_signal", r.e_da_j_per_bit_per_signal),
    ];
    for (name, value) in positive {
        if !(value > 0.0 && value.is_finite()) {
            bad(name, format!("must be positive and finite, got {value}"));
        }
    }
    if !(r.intra_cluster_divisor >= 1.0 && r.intra_cluster_divisor.is_finite()) {
        bad(
            "intra_cluster_divisor",
            format!("must be at least 1, got {}", r.intra_cluster_divisor),
        );
    }

    let p = &config.protocol;
    if !(p.p_ch > 0.0 && p.p_ch <= 1.0) {
        bad("p_ch", format!("must satisfy 0 < p <= 1, got {}", p.p_ch));
    }
    if p.data_packet_bits < 1 {
        bad("data_packet_bits", "must be at least 1 bit".to_string());
    }
    // control_packet_bits == 0 is deliberately allowed: it reproduces the
    // regime where cluster formation costs nothing.
    if p.hard_threshold.is_nan() || p.hard_threshold == f64::INFINITY {
        bad(
            "hard_threshold",
            format!("must not be NaN or +inf, got {}", p.hard_threshold),
        );
    }
    if !(p.soft_threshold >= 0.0) {
        bad("soft_threshold", format!("must be non-negative, got {}", p.soft_threshold));
    }
    if let RetentionMode::Fixed(t) = p.retention_mode {
        if t.is_nan() || t < 0.0 {
            bad("retention_mode", format!("fixed threshold must be >= 0, got {t}"));
        }
    }

    let s = &config.sensing;
    if !(s.min_value < s.max_value) || !s.min_value.is_finite() || !s.max_value.is_finite() {
        bad(
            "sensing range",
            format!("requires finite min < max, got [{}, {}]", s.min_value, s.max_value),
        );
    }
    if !(s.step_sigma >= 0.0 && s.step_sigma.is_finite()) {
        bad("step_sigma", format!("must be non-negative and finite, got {}", s.step_sigma));
    }

    if violations.is_empty() {
        Ok(())
    } else {
        Err(ConfigError { violations })
    }
}

/// Role a node plays in the current round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Member,
    ClusterHead,
}

/// State of one sensor node.
#[derive(Clone, Debug)]
pub struct NodeState {
    pub id: usize,
    pub pos: (f64, f64),
    pub energy_j: f64,
    pub alive: bool,
    pub role: Role,
    /// Member of the election set G, i.e. not yet served this epoch.
    pub eligible: bool,
    /// Waiting for its turn in the replacement rotation; cleared on
    /// election and refilled network-wide only when the pool runs out.
    pub rotation_pending: bool,
    /// Head this node reports to, when it is a member of a cluster.
    pub ch_id: Option<usize>,
    /// Round of the node's most recent election to cluster head.
    pub elected_round: Option<u32>,
    pub last_sensed: Option<f64>,
    /// Last value that actually passed the transmission gate.
    pub last_transmitted: Option<f64>,
    /// Energy the node spent during its most recent round of head service.
    pub energy_spent_last_ch_round_j: Option<f64>,
    /// Scratch accumulator for the current round's debits.
    pub spent_this_round_j: f64,
}

impl NodeState {
    fn new(id: usize, pos: (f64, f64), energy_j: f64) -> Self {
        Self {
            id,
            pos,
            energy_j,
            alive: true,
            role: Role::Member,
            eligible: true,
            rotation_pending: true,
            ch_id: None,
            elected_round: None,
            last_sensed: None,
            last_transmitted: None,
            energy_spent_last_ch_round_j: None,
            spent_this_round_j: 0.0,
        }
    }

    /// Rounds this node can still be ineligible for; kept implicit, see
    /// `eligible` plus the epoch refill in the election module.
    pub fn is_candidate(&self) -> bool {
        self.alive && self.eligible && self.role == Role::Member
    }
}

/// Euclidean distance between two positions.
pub fn distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    (dx * dx + dy * dy).sqrt()
}

/// Place `node_count` nodes i.i.d. uniform over the field rectangle, each
/// with the full initial energy budget. Pure function of (field, rng state):
/// the same seed always yields the same deployment.
pub fn deploy_nodes(field: &FieldConfig, rng: &mut SimRng) -> Vec<NodeState> {
    (0..field.node_count as usize)
        .map(|id| {
            let x = rng.uniform(0.0, field.width_m);
            let y = rng.uniform(0.0, field.height_m);
            NodeState::new(id, (x, y), field.initial_energy_j)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        // Stock parameter set: 100 nodes, 0.5 J, 100x100 field, p = 0.1.
        let config = Config::default();
        assert!(validate_config(&config).is_ok());
    }

    #[test]
    fn zero_election_probability_rejected() {
        let mut config = Config::default();
        config.protocol.p_ch = 0.0;
        let err = validate_config(&config).unwrap_err();
        assert!(err.violations.iter().any(|v| v.name == "p_ch"));
    }

    #[test]
    fn empty_network_rejected() {
        let mut config = Config::default();
        config.field.node_count = 0;
        let err = validate_config(&config).unwrap_err();
        assert!(err.violations.iter().any(|v| v.name == "node_count"));
    }

    #[test]
    fn all_violations_reported_not_just_first() {
        let mut config = Config::default();
        config.protocol.p_ch = 0.0;
        config.field.node_count = 0;
        config.field.initial_energy_j = -1.0;
        config.sensing.step_sigma = -2.0;
        let err = validate_config(&config).unwrap_err();
        let names: Vec<&str> = err.violations.iter().map(|v| v.name.as_str()).collect();
        assert!(names.contains(&"p_ch"));
        assert!(names.contains(&"node_count"));
        assert!(names.contains(&"initial_energy_j"));
        assert!(names.contains(&"step_sigma"));
        assert_eq!(err.violations.len(), 4);
    }

    #[test]
    fn negative_infinity_hard_threshold_allowed() {
        // -inf disables the hard gate; only NaN and +inf are rejected.
        let mut config = Config::default();
        config.protocol.hard_threshold = f64::NEG_INFINITY;
        assert!(validate_config(&config).is_ok());
        config.protocol.hard_threshold = f64::INFINITY;
        assert!(validate_config(&config).is_err());
    }

    #[test]
    fn infinite_fixed_retention_allowed() {
        let mut config = Config::default();
        config.protocol.retention_mode = RetentionMode::Fixed(f64::INFINITY);
        assert!(validate_config(&config).is_ok());
    }

    #[test]
    fn deployment_stays_inside_field() {
        let field = FieldConfig::default();
        let mut rng = SimRng::new(field.seed);
        let nodes = deploy_nodes(&field, &mut rng);
        assert_eq!(nodes.len(), 100);
        for n in &nodes {
            assert!((0.0..100.0).contains(&n.pos.0));
            assert!((0.0..100.0).contains(&n.pos.1));
            assert!(n.alive);
            assert!(n.eligible);
            assert_eq!(n.role, Role::Member);
            assert_eq!(n.energy_j, 0.5);
        }
    }

    #[test]
    fn deployment_is_deterministic() {
        let field = FieldConfig::default();
        let a = deploy_nodes(&field, &mut SimRng::new(99));
        let b = deploy_nodes(&field, &mut SimRng::new(99));
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.pos, y.pos);
        }
    }

    #[test]
    fn single_node_deployment() {
        let field = FieldConfig {
            node_count: 1,
            ..FieldConfig::default()
        };
        let nodes = deploy_nodes(&field, &mut SimRng::new(3));
        assert_eq!(nodes.len(), 1);
        assert_eq!(nodes[0].energy_j, 0.5);
    }

    #[test]
    fn initial_energy_sums_exactly() {
        let field = FieldConfig::default();
        let nodes = deploy_nodes(&field, &mut SimRng::new(5));
        let total: f64 = nodes.iter().map(|n| n.energy_j).sum();
        assert_eq!(total, 100.0 * 0.5);
    }

    #[test]
    fn epoch_rounds_from_probability() {
        let mut p = ProtocolConfig::default();
        assert_eq!(p.epoch_rounds(), 10);
        p.p_ch = 0.3;
        assert_eq!(p.epoch_rounds(), 4);
        p.p_ch = 1.0;
        assert_eq!(p.epoch_rounds(), 1);
        p.p_ch = 0.125;
        assert_eq!(p.epoch_rounds(), 8);
    }

    #[test]
    fn config_json_round_trip_and_unknown_key_rejection() {
        let config = Config::default();
        let text = serde_json::to_string_pretty(&config).unwrap();
        let back: Config = serde_json::from_str(&text).unwrap();
        assert_eq!(config, back);

        let bad = r#"{ "field": { "node_cuont": 10 } }"#;
        let err = serde_json::from_str::<Config>(bad).unwrap_err();
        assert!(err.to_string().contains("unknown field"));
    }

    #[test]
    fn partial_config_fills_defaults() {
        let text = r#"{ "protocol": { "variant": "modleach_st", "p_ch": 0.2 } }"#;
        let config: Config = serde_json::from_str(text).unwrap();
        assert_eq!(config.protocol.variant, Variant::ModleachSt);
        assert_eq!(config.protocol.p_ch, 0.2);
        assert_eq!(config.field.node_count, 100);
        assert_eq!(config.protocol.data_packet_bits, 4000);
    }

    #[test]
    fn retention_mode_json_forms() {
        let a: RetentionMode = serde_json::from_str(r#""adaptive""#).unwrap();
        assert_eq!(a, RetentionMode::Adaptive);
        let f: RetentionMode = serde_json::from_str(r#"{ "fixed": 0.25 }"#).unwrap();
        assert_eq!(f, RetentionMode::Fixed(0.25));
    }
}
