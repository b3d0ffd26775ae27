//! Cluster-head selection and cluster formation.
//!
//! LEACH elects heads with independent per-node draws: an eligible node
//! becomes head when a uniform draw falls below the rotation threshold
//! `T = p / (1 - p * (r mod ceil(1/p)))`. Eligibility is epoch aligned: the
//! set G of candidates refills at every epoch boundary, so within one epoch
//! of `ceil(1/p)` rounds each node serves at most once, and by the final
//! round of an epoch the threshold reaches 1 and sweeps up every remaining
//! candidate.
//!
//! The MODLEACH family reuses that election but keeps a sitting head in
//! office while it is alive, still inside the epoch that elected it, and
//! holds more energy than its retention floor. While at least one head is
//! retained, vacancies are filled to the target head count `round(p * alive)`
//! by rotating in the nodes that served longest ago, so the head population
//! stays flat and no fresh advertisement phase is paid for retained
//! clusters. When nothing is retained the plain election runs unchanged,
//! which is why a retention floor of `+inf` reproduces LEACH draw for draw.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{distance, FieldConfig, NodeState, ProtocolConfig, RadioModel, Role, Variant};
use crate::radio::{rx_cost, tx_cost, PowerLevel};
use crate::rng::{DrawKeys, Stream};

/// Outcome of head selection and member assignment for one round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterAssignment {
    pub round: u32,
    /// Head node ids, ascending.
    pub heads: Vec<usize>,
    /// Heads carried over from the previous round.
    pub retained: BTreeSet<usize>,
    /// Member id to head id.
    pub members: BTreeMap<usize, usize>,
}

impl ClusterAssignment {
    pub fn members_of(&self, head: usize) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .filter(move |(_, &h)| h == head)
            .map(|(&m, _)| m)
    }
}

/// One pending energy debit from the cluster formation handshake.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlDebit {
    pub node: usize,
    pub joules: f64,
}

/// LEACH rotation threshold for the given global round.
///
/// Ineligible nodes get 0. The value is clamped to 1 so that the final round
/// of an epoch elects every remaining candidate outright.
pub fn election_threshold(p: f64, round: u32, eligible: bool) -> f64 {
    if !eligible {
        return 0.0;
    }
    let epoch = ((1.0 / p) - 1e-9).ceil().max(1.0) as u32;
    let r_mod = (round % epoch) as f64;
    let denom = 1.0 - p * r_mod;
    if denom <= 0.0 {
        1.0
    } else {
        (p / denom).min(1.0)
    }
}

/// Refill the election set G with every alive node. Runs at epoch boundaries
/// and whenever the set empties mid-epoch.
fn reset_eligibility(nodes: &mut [NodeState]) {
    for node in nodes.iter_mut() {
        if node.alive {
            node.eligible = true;
        }
    }
}

/// Epoch bookkeeping shared by both selection paths; call once per round
/// before choosing heads.
pub fn refresh_epoch(nodes: &mut [NodeState], proto: &ProtocolConfig, round: u32) {
    let epoch = proto.epoch_rounds();
    if round % epoch == 0 {
        reset_eligibility(nodes);
    } else if !nodes.iter().any(|n| n.alive && n.eligible) {
        // epoch restart: the candidate set ran dry early
        reset_eligibility(nodes);
    }
}

fn mark_elected(node: &mut NodeState, round: u32) {
    node.role = Role::ClusterHead;
    node.eligible = false;
    node.rotation_pending = false;
    node.elected_round = Some(round);
}

/// Independent per-node election. Every alive eligible node draws once,
/// keyed by round and node id, and wins when the draw falls below its
/// threshold. May elect nobody, in which case the round runs without
/// clusters.
pub fn elect_heads(
    nodes: &mut [NodeState],
    proto: &ProtocolConfig,
    round: u32,
    keys: &DrawKeys,
) -> Vec<usize> {
    let mut heads = Vec::new();
    for id in 0..nodes.len() {
        if !nodes[id].alive || !nodes[id].eligible {
            continue;
        }
        let threshold = election_threshold(proto.p_ch, round, true);
        if keys.unit(Stream::Elect, round, id as u64) < threshold {
            mark_elected(&mut nodes[id], round);
            heads.push(id);
        }
    }
    heads
}

/// Retention floor for a sitting head under the configured mode.
///
/// Adaptive mode combines two parameter-free terms: the head must be able to
/// afford another round like its last one, and it must still hold at least
/// half its initial budget. The second term is what makes head turnover
/// revert to plain election behavior in a network's second half of life,
/// once sitting heads no longer clear the bar. Fixed mode compares against
/// the configured joule value alone.
fn retention_floor(node: &NodeState, proto: &ProtocolConfig, initial_energy_j: f64) -> f64 {
    match proto.retention_mode {
        // A head with no recorded service cost steps down; in practice every
        // sitting head has served at least one round and carries a value.
        crate::model::RetentionMode::Adaptive => node
            .energy_spent_last_ch_round_j
            .unwrap_or(f64::INFINITY)
            .max(initial_energy_j / 2.0),
        crate::model::RetentionMode::Fixed(threshold) => threshold,
    }
}

/// Steady-state head tenure in rounds: half the election epoch.
fn tenure_rounds(proto: &ProtocolConfig) -> usize {
    (proto.epoch_rounds() as usize).div_ceil(2)
}

/// Decide which of the previous round's heads stay in office.
///
/// A head qualifies while it is alive and its residual energy is at least
/// the retention floor; of the qualifying cohort, the longest-serving
/// `1/tenure` share (rounded up) stands down every round, so a head serves
/// about half an election epoch. Turnover is staggered by construction:
/// office never concentrates on one node and the head count stays level
/// instead of collapsing in synchronized waves. Heads that stand down fall
/// back to replacement through the election machinery.
pub fn retain_heads(
    previous: &ClusterAssignment,
    nodes: &[NodeState],
    proto: &ProtocolConfig,
    initial_energy_j: f64,
) -> BTreeSet<usize> {
    debug_assert!(proto.variant != Variant::Leach);
    let mut qualifying: Vec<usize> = previous
        .heads
        .iter()
        .copied()
        .filter(|&h| {
            let node = &nodes[h];
            node.alive && node.energy_j >= retention_floor(node, proto, initial_energy_j)
        })
        .collect();
    qualifying.sort_by_key(|&h| (nodes[h].elected_round.unwrap_or(0), h));
    let tenure = tenure_rounds(proto);
    let standing_down = qualifying.len().div_ceil(tenure);
    qualifying[standing_down..].iter().copied().collect()
}

/// Fill `need` vacancies from the replacement rotation: a uniform draw
/// without replacement from the nodes still waiting for their turn, the
/// pool refilling with every alive node only once it runs out.
///
/// Exhausting the pool before refilling keeps every node's head duty at
/// exactly one term per rotation cycle, the same long-run cadence the plain
/// election produces, while the random draw order reshuffles which heads
/// serve together from cycle to cycle so no node is stuck with the same
/// cluster geometry every time it serves.
pub fn select_replacements(
    nodes: &mut [NodeState],
    retained: &BTreeSet<usize>,
    need: usize,
    round: u32,
    keys: &DrawKeys,
) -> Vec<usize> {
    if need == 0 {
        return Vec::new();
    }
    let collect = |nodes: &[NodeState]| -> Vec<usize> {
        nodes
            .iter()
            .filter(|n| {
                n.alive && n.rotation_pending && n.role == Role::Member && !retained.contains(&n.id)
            })
            .map(|n| n.id)
            .collect()
    };
    let mut candidates = collect(nodes);
    if candidates.len() < need {
        // pool exhausted: a rotation cycle completed, start the next one
        for node in nodes.iter_mut() {
            if node.alive {
                node.rotation_pending = true;
            }
        }
        candidates = collect(nodes);
    }
    let mut chosen = Vec::with_capacity(need.min(candidates.len()));
    let mut pick = 0u64;
    while chosen.len() < need && !candidates.is_empty() {
        let idx = (keys.unit(Stream::Rotate, round, pick) * candidates.len() as f64) as usize;
        let idx = idx.min(candidates.len() - 1);
        chosen.push(candidates.swap_remove(idx));
        pick += 1;
    }
    for &id in &chosen {
        mark_elected(&mut nodes[id], round);
    }
    chosen.sort_unstable();
    chosen
}

fn farthest_corner_distance(pos: (f64, f64), field: &FieldConfig) -> f64 {
    let corners = [
        (0.0, 0.0),
        (field.width_m, 0.0),
        (0.0, field.height_m),
        (field.width_m, field.height_m),
    ];
    corners
        .iter()
        .map(|&c| distance(pos, c))
        .fold(0.0, f64::max)
}

/// Assign every alive non-head to a cluster and price the formation
/// handshake.
///
/// Every member joins the nearest head, ties broken by the lower head id.
/// In a fully retained round the head set is unchanged, so every member
/// keeps its cluster; when a cluster dissolves, its members and any member
/// now closer to the replacement move, which keeps cluster sizes at Voronoi
/// scale instead of letting long-lived heads accrete members round over
/// round. The handshake is charged per newly formed cluster only: the head
/// advertises once at HIGH power sized to reach the farthest field corner,
/// each member of that cluster receives the advertisement, answers with a
/// join packet at LOW power, and receives the schedule; the head receives
/// one join per member and broadcasts the schedule at LOW power over its
/// cluster radius. Retained clusters exchange nothing.
pub fn form_clusters(
    round: u32,
    heads: &[usize],
    retained: &BTreeSet<usize>,
    nodes: &[NodeState],
    field: &FieldConfig,
    radio: &RadioModel,
    proto: &ProtocolConfig,
) -> (ClusterAssignment, Vec<ControlDebit>) {
    let mut assignment = ClusterAssignment {
        round,
        heads: heads.to_vec(),
        retained: retained.clone(),
        members: BTreeMap::new(),
    };
    assignment.heads.sort_unstable();
    let head_set: BTreeSet<usize> = assignment.heads.iter().copied().collect();

    if assignment.heads.is_empty() {
        return (assignment, Vec::new());
    }

    for node in nodes.iter() {
        if !node.alive || head_set.contains(&node.id) {
            continue;
        }
        let mut best = assignment.heads[0];
        let mut best_d = distance(node.pos, nodes[best].pos);
        for &h in &assignment.heads[1..] {
            let d = distance(node.pos, nodes[h].pos);
            if d < best_d {
                best = h;
                best_d = d;
            }
        }
        assignment.members.insert(node.id, best);
    }

    let bits = proto.control_packet_bits;
    let mut debits = Vec::new();
    for &head in &assignment.heads {
        if retained.contains(&head) {
            continue;
        }
        let members: Vec<usize> = assignment.members_of(head).collect();
        debits.push(ControlDebit {
            node: head,
            joules: tx_cost(radio, bits, farthest_corner_distance(nodes[head].pos, field), PowerLevel::High),
        });
        let mut radius = 0.0f64;
        for &m in &members {
            let d = distance(nodes[m].pos, nodes[head].pos);
            radius = radius.max(d);
            debits.push(ControlDebit { node: m, joules: rx_cost(radio, bits) });
            debits.push(ControlDebit {
                node: m,
                joules: tx_cost(radio, bits, d, PowerLevel::Low),
            });
            debits.push(ControlDebit { node: head, joules: rx_cost(radio, bits) });
        }
        debits.push(ControlDebit {
            node: head,
            joules: tx_cost(radio, bits, radius, PowerLevel::Low),
        });
        for &m in &members {
            debits.push(ControlDebit { node: m, joules: rx_cost(radio, bits) });
        }
    }

    (assignment, debits)
}
