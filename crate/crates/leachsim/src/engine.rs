//! The round loop: sense, choose heads, form clusters, run the gated
//! steady-state frame, settle energy debits, record deaths, snapshot metrics.
//!
//! One round carries one data-gathering frame: every member whose gate opens
//! sends one report to its head at LOW power, and every head holding at
//! least one signal (member reports plus its own gated reading) fuses them
//! and forwards a single packet to the base station at HIGH power.
//!
//! Energy bookkeeping is exact. Debits are applied in a fixed order and
//! truncated against the remaining budget, so every joule that leaves a node
//! lands in exactly one ledger category and the ledger total always equals
//! the energy drained from the network. A node that runs dry mid-round still
//! completes the round's actions (its packets count) and is marked dead at
//! the round's end.

use std::collections::BTreeSet;

use crate::election::{
    elect_heads, form_clusters, refresh_epoch, retain_heads, select_replacements,
    ClusterAssignment,
};
use crate::model::{
    distance, validate_config, Config, ConfigError, NodeState, Role, Variant,
};
use crate::radio::{aggregation_cost, rx_cost, tx_cost, PowerLevel};
use crate::rng::{DrawKeys, Stream};
use crate::sensing::{sense, transmit_through_gate};

/// Where a debit is booked in the energy ledger.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostKind {
    Control,
    DataTx,
    DataRx,
    Aggregation,
}

/// Cumulative energy drained from the network, by category.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyLedger {
    pub control_j: f64,
    pub data_tx_j: f64,
    pub data_rx_j: f64,
    pub aggregation_j: f64,
}

impl EnergyLedger {
    pub fn total_j(&self) -> f64 {
        self.control_j + self.data_tx_j + self.data_rx_j + self.aggregation_j
    }

    fn book(&mut self, kind: CostKind, joules: f64) {
        match kind {
            CostKind::Control => self.control_j += joules,
            CostKind::DataTx => self.data_tx_j += joules,
            CostKind::DataRx => self.data_rx_j += joules,
            CostKind::Aggregation => self.aggregation_j += joules,
        }
    }
}

/// Per-round metric snapshot. Rounds are numbered from 1 in records and
/// summaries; the protocol math underneath runs on a zero-based counter.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    pub round: u32,
    pub alive_count: u32,
    pub dead_count: u32,
    pub ch_count: u32,
    pub retained_ch_count: u32,
    pub packets_to_bs_cum: u64,
    pub packets_to_ch_cum: u64,
    pub total_residual_energy_j: f64,
    pub control_energy_j_this_round: f64,
    /// Cumulative ledger total at the end of this round; not exported in
    /// traces, kept for conservation checks.
    pub debited_total_j: f64,
}

/// Lifetime milestones and totals of one run. Milestones that were never
/// reached are censored at `max_rounds`.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub variant: Variant,
    pub seed: u64,
    pub first_dead_round: u32,
    pub half_dead_round: u32,
    pub last_dead_round: u32,
    pub rounds_simulated: u32,
    pub total_packets_to_bs: u64,
    pub total_packets_to_ch: u64,
    pub initial_energy_j: f64,
    pub ledger: EnergyLedger,
    pub trace: Vec<RoundRecord>,
}

impl RunSummary {
    /// Mean cluster-head count over the recorded rounds.
    pub fn mean_ch_count(&self) -> f64 {
        if self.trace.is_empty() {
            return 0.0;
        }
        self.trace.iter().map(|r| r.ch_count as f64).sum::<f64>() / self.trace.len() as f64
    }
}

/// A single in-progress simulation run.
pub struct Simulation {
    config: Config,
    nodes: Vec<NodeState>,
    keys: DrawKeys,
    round: u32,
    previous: Option<ClusterAssignment>,
    packets_to_bs: u64,
    packets_to_ch: u64,
    ledger: EnergyLedger,
    initial_energy_j: f64,
}

impl Simulation {
    /// Validate the configuration, deploy the field, and stand ready at
    /// round zero.
    pub fn new(config: &Config) -> Result<Self, ConfigError> {
        validate_config(config)?;
        let keys = DrawKeys::new(config.field.seed);
        let nodes =
            crate::model::deploy_nodes(&config.field, &mut keys.rng(Stream::Deploy, 0, 0));
        let initial_energy_j = nodes.iter().map(|n| n.energy_j).sum();
        Ok(Self {
            config: config.clone(),
            nodes,
            keys,
            round: 0,
            previous: None,
            packets_to_bs: 0,
            packets_to_ch: 0,
            ledger: EnergyLedger::default(),
            initial_energy_j,
        })
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn ledger(&self) -> &EnergyLedger {
        &self.ledger
    }

    pub fn alive_count(&self) -> u32 {
        self.nodes.iter().filter(|n| n.alive).count() as u32
    }

    pub fn initial_energy_j(&self) -> f64 {
        self.initial_energy_j
    }

    fn debit(&mut self, node: usize, joules: f64, kind: CostKind) -> f64 {
        debug_assert!(joules >= 0.0 && joules.is_finite());
        let n = &mut self.nodes[node];
        // truncate against the remaining budget; x - x is exactly 0.0, so a
        // drained node ends the round at precisely zero energy
        let actual = joules.min(n.energy_j);
        n.energy_j -= actual;
        n.spent_this_round_j += actual;
        self.ledger.book(kind, actual);
        actual
    }

    /// Execute one full round. Returns the round's metric snapshot, or
    /// `None` when the run is already over (network dead or horizon hit).
    pub fn step_round(&mut self) -> Option<RoundRecord> {
        if self.round >= self.config.field.max_rounds || self.alive_count() == 0 {
            return None;
        }
        let r = self.round;
        let proto = self.config.protocol.clone();
        let field = self.config.field.clone();
        let radio = self.config.radio.clone();

        for node in self.nodes.iter_mut() {
            node.spent_this_round_j = 0.0;
            if node.alive {
                node.role = Role::Member;
                node.ch_id = None;
            }
        }

        // 1. sensing: one draw per alive node, keyed by round and node
        let sensing = self.config.sensing.clone();
        for id in 0..self.nodes.len() {
            if self.nodes[id].alive {
                let mut rng = self.keys.rng(Stream::Sense, r, id as u64);
                sense(&mut self.nodes[id], &sensing, r + 1, &mut rng);
            }
        }

        // 2. head selection: retention first, then election
        refresh_epoch(&mut self.nodes, &proto, r);
        let retained: BTreeSet<usize> = match (&proto.variant, &self.previous) {
            (Variant::Leach, _) | (_, None) => BTreeSet::new(),
            (_, Some(prev)) => {
                retain_heads(prev, &self.nodes, &proto, field.initial_energy_j)
            }
        };
        let mut heads: Vec<usize> = if retained.is_empty() {
            elect_heads(&mut self.nodes, &proto, r, &self.keys)
        } else {
            let alive = self.alive_count();
            let target = (proto.p_ch * alive as f64).floor() as usize;
            let need = target.saturating_sub(retained.len());
            let fresh = select_replacements(&mut self.nodes, &retained, need, r, &self.keys);
            retained.iter().copied().chain(fresh).collect()
        };
        heads.sort_unstable();
        for &h in &heads {
            self.nodes[h].role = Role::ClusterHead;
        }

        // 3. cluster formation and its control traffic
        let (assignment, control_debits) =
            form_clusters(r, &heads, &retained, &self.nodes, &field, &radio, &proto);
        for (&member, &head) in &assignment.members {
            self.nodes[member].ch_id = Some(head);
        }
        let mut control_this_round = 0.0;
        for d in &control_debits {
            control_this_round += self.debit(d.node, d.joules, CostKind::Control);
        }

        // 4. steady state: gated member reports, fusion, forward to BS
        let data_bits = proto.data_packet_bits;
        for &head in &assignment.heads {
            let members: Vec<usize> = assignment.members_of(head).collect();
            let mut signals = 0u32;
            for m in members {
                let value = self.nodes[m].last_sensed.expect("alive member sensed");
                if transmit_through_gate(&mut self.nodes[m], value, &proto) {
                    let d = distance(self.nodes[m].pos, self.nodes[head].pos);
                    self.debit(m, tx_cost(&radio, data_bits, d, PowerLevel::Low), CostKind::DataTx);
                    self.debit(head, rx_cost(&radio, data_bits), CostKind::DataRx);
                    self.packets_to_ch += 1;
                    signals += 1;
                }
            }
            let own = self.nodes[head].last_sensed.expect("alive head sensed");
            if transmit_through_gate(&mut self.nodes[head], own, &proto) {
                signals += 1;
            }
            if signals >= 1 {
                self.debit(
                    head,
                    aggregation_cost(&radio, data_bits, signals),
                    CostKind::Aggregation,
                );
                let d = distance(self.nodes[head].pos, field.bs_pos);
                self.debit(head, tx_cost(&radio, data_bits, d, PowerLevel::High), CostKind::DataTx);
                self.packets_to_bs += 1;
            }
        }

        // 5. settle the round: service-cost memory, then deaths
        for id in 0..self.nodes.len() {
            let node = &mut self.nodes[id];
            if node.role == Role::ClusterHead {
                node.energy_spent_last_ch_round_j = Some(node.spent_this_round_j);
            }
            if node.alive && node.energy_j <= 0.0 {
                node.energy_j = 0.0;
                node.alive = false;
                node.role = Role::Member;
                node.ch_id = None;
            }
        }

        // 6. snapshot
        let alive = self.alive_count();
        let record = RoundRecord {
            round: r + 1,
            alive_count: alive,
            dead_count: self.config.field.node_count - alive,
            ch_count: assignment.heads.len() as u32,
            retained_ch_count: assignment.retained.len() as u32,
            packets_to_bs_cum: self.packets_to_bs,
            packets_to_ch_cum: self.packets_to_ch,
            total_residual_energy_j: self.nodes.iter().map(|n| n.energy_j).sum(),
            control_energy_j_this_round: control_this_round,
            debited_total_j: self.ledger.total_j(),
        };
        self.previous = Some(assignment);
        self.round += 1;
        Some(record)
    }
}

/// Run a configuration to completion: until every node is dead or the round
/// horizon is reached. Deterministic for a fixed seed.
pub fn run(config: &Config) -> Result<RunSummary, ConfigError> {
    let mut sim = Simulation::new(config)?;
    let node_count = config.field.node_count;
    let max_rounds = config.field.max_rounds;
    let mut trace = Vec::new();
    let mut first_dead = None;
    let mut half_dead = None;
    let mut last_dead = None;
    while let Some(record) = sim.step_round() {
        if first_dead.is_none() && record.dead_count > 0 {
            first_dead = Some(record.round);
        }
        if half_dead.is_none() && u64::from(record.dead_count) * 2 >= u64::from(node_count) {
            half_dead = Some(record.round);
        }
        if last_dead.is_none() && record.alive_count == 0 {
            last_dead = Some(record.round);
        }
        trace.push(record);
    }
    Ok(RunSummary {
        variant: config.protocol.variant,
        seed: config.field.seed,
        first_dead_round: first_dead.unwrap_or(max_rounds),
        half_dead_round: half_dead.unwrap_or(max_rounds),
        last_dead_round: last_dead.unwrap_or(max_rounds),
        rounds_simulated: trace.len() as u32,
        total_packets_to_bs: sim.packets_to_bs,
        total_packets_to_ch: sim.packets_to_ch,
        initial_energy_j: sim.initial_energy_j,
        ledger: sim.ledger,
        trace,
    })
}

/// Run with the given seed in place of the configured one. Runs that share a
/// seed share the node deployment regardless of variant, which is what makes
/// per-seed comparisons across variants paired.
pub fn run_with_seed(config: &Config, seed: u64) -> Result<RunSummary, ConfigError> {
    let mut cfg = config.clone();
    cfg.field.seed = seed;
    run(&cfg)
}
