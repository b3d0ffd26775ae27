//! Round-based simulator of cluster routing in wireless sensor networks.
//!
//! Implements LEACH and the MODLEACH family on a shared machinery: the
//! first-order radio energy model with dual amplification levels (HIGH for
//! head-to-base-station traffic, LOW for intra-cluster traffic), stochastic
//! rotation of cluster heads, MODLEACH's head retention that skips the
//! cluster-formation handshake while a head stays in office, and the
//! TEEN-style hard/soft transmission thresholds of the reactive variants.
//!
//! A run is a sequence of rounds; each round senses, picks heads, forms
//! clusters, moves one gated data-gathering frame, and snapshots metrics.
//! Everything is deterministic per seed, and runs that share a seed share
//! the node deployment, so cross-variant comparisons are paired.
//!
//! Start with the `examples/` directory: each example exercises one major
//! capability (radio costs, a single run, the four-way comparison,
//! threshold gating, replicate statistics, chart export). The `leachsim`
//! binary wraps the same machinery behind `run` and `compare` subcommands.

pub mod cli;
pub mod election;
pub mod engine;
pub mod model;
pub mod radio;
pub mod report;
pub mod rng;
pub mod sensing;
pub mod stats;

pub use engine::{run, run_with_seed, RoundRecord, RunSummary, Simulation};
pub use model::{
    deploy_nodes, validate_config, Config, ConfigError, FieldConfig, NodeState, ProtocolConfig,
    RadioModel, RetentionMode, Role, SensingConfig, Variant,
};
pub use radio::{aggregation_cost, crossover_distance, rx_cost, tx_cost, PowerLevel};
pub use rng::SimRng;
pub use sensing::{gate, sense, GateDecision, Reading};
pub use stats::{aggregate, aggregate_traces, Metric, ReplicateStats, StatsError};
