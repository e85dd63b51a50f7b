//! Belief propagation on the norm network of a tensor network state.
//!
//! One Hermitian positive-semidefinite message matrix lives on every
//! directed edge, over the bra/ket pair of that edge's bond index. A sweep
//! updates each directed edge once through the self-consistency rule: the
//! new message out of `v` toward `w` is the vertex norm tensor of `v`
//! dressed with every incoming message except the one from `w`. Messages
//! are Hermitized and trace-normalized after every update.
//!
//! Convergence is estimated by the average normalized trace distance between
//! consecutive sweeps, which tracks the order of magnitude of the distance
//! to the Vidal gauge that the current messages would achieve.

use std::collections::BTreeMap;
use std::time::Instant;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::DirectedEdge;
use crate::index::Index;
use crate::linalg;
use crate::network::TensorNetworkState;
use crate::tensor::LabeledTensor;

/// Sweep scheduling for message updates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Updates become visible immediately, in edge order. Converges in one
    /// sweep on trees with the default leaf-to-root-to-leaf order.
    #[default]
    Sequential,
    /// Every update of a sweep reads the previous iteration's messages.
    Synchronous,
}

/// Message initialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InitStrategy {
    /// `I / dim` on every directed edge.
    #[default]
    Identity,
    /// `A^dag A / tr(A^dag A)` with standard-normal complex `A`, seeded.
    RandomPsd { seed: u64 },
}

#[derive(Clone, Debug)]
pub struct BpConfig {
    pub schedule: Schedule,
    pub max_iters: usize,
    pub target_delta: f64,
    /// Blend factor in [0, 1): `new <- (1 - d) new + d old`. 0 disables.
    pub damping: f64,
    /// Custom deterministic directed-edge order; defaults to the graph's
    /// leaf-to-root-to-leaf BFS sweep order.
    pub edge_order: Option<Vec<DirectedEdge>>,
    pub init: InitStrategy,
}

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig {
            schedule: Schedule::Sequential,
            max_iters: 1000,
            target_delta: 1e-10,
            damping: 0.0,
            edge_order: None,
            init: InitStrategy::Identity,
        }
    }
}

impl BpConfig {
    pub fn with_target(target_delta: f64) -> Self {
        BpConfig { target_delta, ..Default::default() }
    }
}

/// Per-run diagnostics of a gauging or BP loop.
#[derive(Clone, Debug)]
pub struct GaugeReport {
    pub iterations: usize,
    pub final_delta: f64,
    /// Convergence estimate after each sweep.
    pub deltas: Vec<f64>,
    /// Wall time of each sweep, seconds.
    pub iter_seconds: Vec<f64>,
    /// Wall time of the whole routine loop, seconds.
    pub wall_seconds: f64,
    /// False when the loop stopped at `max_iters` without reaching target.
    pub converged: bool,
}

/// The set of BP messages: one Hermitian PSD trace-1 matrix per directed
/// edge, indexed `[bond bra, bond ket]`.
#[derive(Clone, Debug)]
pub struct MessageSet {
    messages: BTreeMap<DirectedEdge, LabeledTensor>,
}

impl MessageSet {
    pub fn get(&self, de: DirectedEdge) -> &LabeledTensor {
        &self.messages[&de]
    }

    pub fn insert(&mut self, de: DirectedEdge, msg: LabeledTensor) {
        self.messages.insert(de, msg);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DirectedEdge, &LabeledTensor)> {
        self.messages.iter()
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }
}

/// Hermitizes and trace-normalizes a raw environment into a valid message.
fn finish_message(env: &LabeledTensor, bond: Index) -> Result<LabeledTensor> {
    let rows = [bond.raised()];
    let env = env.permuted(&[bond.raised(), bond])?;
    let (m, _, _) = env.matricize(&rows)?;
    let na = linalg::nd_to_na(&m);
    let herm = (&na + na.adjoint()).scale(0.5);
    let tr: C64 = (0..herm.nrows()).map(|i| herm[(i, i)]).sum();
    if tr.norm() < 1e-300 {
        return Err(Error::DegenerateMessage("zero-trace message (null state slice)".into()));
    }
    let normed = herm.map(|z| z / C64::new(tr.re, 0.0));
    LabeledTensor::from_matricized(linalg::na_to_nd(&normed), &rows, &[bond])
}

/// Builds the initial message set.
pub fn init_messages(tns: &TensorNetworkState, strategy: InitStrategy) -> MessageSet {
    let mut messages = BTreeMap::new();
    match strategy {
        InitStrategy::Identity => {
            for de in tns.graph().directed_edges() {
                let b = tns.bond_index(de.edge);
                let eye =
                    LabeledTensor::diag_matrix(b.raised(), b, &vec![1.0 / b.dim as f64; b.dim]);
                messages.insert(de, eye);
            }
        }
        InitStrategy::RandomPsd { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for de in tns.graph().directed_edges() {
                let b = tns.bond_index(de.edge);
                let d = b.dim;
                let a = Array2::from_shape_fn((d, d), |_| {
                    C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
                });
                let na = linalg::nd_to_na(&a);
                let psd = na.adjoint() * &na;
                let t =
                    LabeledTensor::from_matricized(linalg::na_to_nd(&psd), &[b.raised()], &[b])
                        .expect("psd message construction");
                messages.insert(de, finish_message(&t, b).expect("random psd is normalizable"));
            }
        }
    }
    MessageSet { messages }
}

/// One message update: environment of `de.from` with every incoming message
/// except the reverse of `de`, Hermitized and trace-normalized.
pub fn bp_update_edge(
    tns: &TensorNetworkState,
    msgs: &MessageSet,
    de: DirectedEdge,
) -> Result<LabeledTensor> {
    let v = de.from;
    let mut incoming = BTreeMap::new();
    for &f in tns.graph().incident(v) {
        if f == de.edge {
            continue;
        }
        let src = tns.graph().edge(f).other(v);
        incoming.insert(f, msgs.get(DirectedEdge { edge: f, from: src }).clone());
    }
    let env = tns.norm_vertex_environment(v, &incoming)?;
    finish_message(&env, tns.bond_index(de.edge))
}

fn blend(new: &LabeledTensor, old: &LabeledTensor, damping: f64) -> Result<LabeledTensor> {
    if damping == 0.0 {
        return Ok(new.clone());
    }
    let mixed =
        new.scaled(C64::new(1.0 - damping, 0.0)).add(&old.scaled(C64::new(damping, 0.0)))?;
    // both inputs are trace-1 so the blend already is, but keep the
    // invariant exact
    let bond = mixed.indices()[1];
    finish_message(&mixed, Index { conj: 0, ..bond })
}

fn sweep_order(tns: &TensorNetworkState, cfg: &BpConfig) -> Vec<DirectedEdge> {
    cfg.edge_order.clone().unwrap_or_else(|| tns.graph().sweep_order())
}

/// One full sweep over every directed edge. Returns the updated set and the
/// convergence estimate
/// `delta = (1 / 2|E|) * sum over directed edges of || M_old - M_new ||_1'`.
pub fn bp_iterate(
    tns: &TensorNetworkState,
    msgs: &MessageSet,
    cfg: &BpConfig,
) -> Result<(MessageSet, f64)> {
    let order = sweep_order(tns, cfg);
    let mut next = msgs.clone();
    match cfg.schedule {
        Schedule::Sequential => {
            for &de in &order {
                let new = bp_update_edge(tns, &next, de)?;
                let new = blend(&new, next.get(de), cfg.damping)?;
                next.insert(de, new);
            }
        }
        Schedule::Synchronous => {
            let mut staged = Vec::with_capacity(order.len());
            for &de in &order {
                let new = bp_update_edge(tns, msgs, de)?;
                staged.push((de, blend(&new, msgs.get(de), cfg.damping)?));
            }
            for (de, m) in staged {
                next.insert(de, m);
            }
        }
    }
    let mut delta = 0.0;
    for (de, old) in msgs.iter() {
        delta += linalg::normalized_trace_distance_tensors(old, next.get(*de))?;
    }
    delta /= msgs.len() as f64;
    Ok((next, delta))
}

/// Runs BP from a warm-start message set until `target_delta` or
/// `max_iters`.
pub fn bp_run_from(
    tns: &TensorNetworkState,
    msgs: MessageSet,
    cfg: &BpConfig,
) -> Result<(MessageSet, GaugeReport)> {
    let start = Instant::now();
    let mut msgs = msgs;
    let mut deltas = Vec::new();
    let mut iter_seconds = Vec::new();
    let mut converged = false;
    while deltas.len() < cfg.max_iters {
        let t0 = Instant::now();
        let (next, delta) = bp_iterate(tns, &msgs, cfg)?;
        iter_seconds.push(t0.elapsed().as_secs_f64());
        msgs = next;
        deltas.push(delta);
        if delta <= cfg.target_delta {
            converged = true;
            break;
        }
    }
    let report = GaugeReport {
        iterations: deltas.len(),
        final_delta: deltas.last().copied().unwrap_or(0.0),
        deltas,
        iter_seconds,
        wall_seconds: start.elapsed().as_secs_f64(),
        converged,
    };
    Ok((msgs, report))
}

/// Runs BP from the configured initialization.
pub fn bp_run(tns: &TensorNetworkState, cfg: &BpConfig) -> Result<(MessageSet, GaugeReport)> {
    bp_run_from(tns, init_messages(tns, cfg.init), cfg)
}

/// Square-root message factors `M^{1/2}`, stored `[inner row, bond ket]`.
/// Squaring an entry (adjoint times itself) recovers a standard message.
#[derive(Clone, Debug)]
pub struct SqrtMessageSet {
    messages: BTreeMap<DirectedEdge, LabeledTensor>,
}

impl SqrtMessageSet {
    /// Square roots of an existing message set.
    pub fn from_messages(tns: &TensorNetworkState, msgs: &MessageSet) -> Result<Self> {
        let mut messages = BTreeMap::new();
        for (&de, m) in msgs.iter() {
            let b = tns.bond_index(de.edge);
            let (half, _) =
                linalg::sqrt_and_inv_sqrt(m, &[b.raised()], linalg::DEFAULT_PINV_CUTOFF)?;
            messages.insert(de, half);
        }
        Ok(SqrtMessageSet { messages })
    }

    pub fn get(&self, de: DirectedEdge) -> &LabeledTensor {
        &self.messages[&de]
    }

    pub fn insert(&mut self, de: DirectedEdge, msg: LabeledTensor) {
        self.messages.insert(de, msg);
    }

    /// Squares every factor into a standard (Hermitian, trace-1) message set.
    pub fn squared(&self, tns: &TensorNetworkState) -> Result<MessageSet> {
        let mut messages = BTreeMap::new();
        for (&de, half) in &self.messages {
            let b = tns.bond_index(de.edge);
            let rows = [half.indices()[0]];
            let (hm, _, _) = half.matricize(&rows)?;
            let na = linalg::nd_to_na(&hm);
            let sq = na.adjoint() * &na;
            let t = LabeledTensor::from_matricized(linalg::na_to_nd(&sq), &[b.raised()], &[b])?;
            messages.insert(de, finish_message(&t, b)?);
        }
        Ok(MessageSet { messages })
    }
}

/// Square-root update of one directed edge: absorb the incoming square-root
/// factors into `T_v`, QR against the outgoing bond, and rescale R to unit
/// Frobenius norm. Squaring the result reproduces the standard update.
pub fn sqrt_bp_update_edge(
    tns: &TensorNetworkState,
    sqrt_msgs: &SqrtMessageSet,
    de: DirectedEdge,
) -> Result<LabeledTensor> {
    let v = de.from;
    let mut dressed = tns.tensor(v).clone();
    for &f in tns.graph().incident(v) {
        if f == de.edge {
            continue;
        }
        let src = tns.graph().edge(f).other(v);
        dressed = crate::tensor::contract(
            &dressed,
            sqrt_msgs.get(DirectedEdge { edge: f, from: src }),
        )?;
    }
    let out_bond = tns.bond_index(de.edge);
    let rows: Vec<Index> =
        dressed.indices().iter().copied().filter(|i| i.key() != out_bond.key()).collect();
    let (_q, r) = linalg::qr(&dressed, &rows)?;
    let norm = r.norm();
    if norm < 1e-300 {
        return Err(Error::DegenerateMessage("zero square-root message".into()));
    }
    Ok(r.scaled(C64::new(1.0 / norm, 0.0)))
}

/// One sweep of square-root updates in the same order as [`bp_iterate`].
pub fn sqrt_bp_iterate(
    tns: &TensorNetworkState,
    sqrt_msgs: &SqrtMessageSet,
    cfg: &BpConfig,
) -> Result<SqrtMessageSet> {
    let order = sweep_order(tns, cfg);
    let mut next = sqrt_msgs.clone();
    match cfg.schedule {
        Schedule::Sequential => {
            for &de in &order {
                let new = sqrt_bp_update_edge(tns, &next, de)?;
                next.insert(de, new);
            }
        }
        Schedule::Synchronous => {
            let mut staged = Vec::with_capacity(order.len());
            for &de in &order {
                staged.push((de, sqrt_bp_update_edge(tns, sqrt_msgs, de)?));
            }
            for (de, m) in staged {
                next.insert(de, m);
            }
        }
    }
    Ok(next)
}

/// Deviation of the fixed-point isometry identity on a directed edge: the
/// site tensor dressed with incoming square roots and the outgoing inverse
/// square root should be an isometry toward the outgoing bond pair.
pub fn fixed_point_isometry_deviation(
    tns: &TensorNetworkState,
    msgs: &MessageSet,
    de: DirectedEdge,
) -> Result<f64> {
    let v = de.from;
    let mut dressed = tns.tensor(v).clone();
    for &f in tns.graph().incident(v) {
        if f == de.edge {
            continue;
        }
        let src = tns.graph().edge(f).other(v);
        let b = tns.bond_index(f);
        let (half, _) = linalg::sqrt_and_inv_sqrt(
            msgs.get(DirectedEdge { edge: f, from: src }),
            &[b.raised()],
            linalg::DEFAULT_PINV_CUTOFF,
        )?;
        dressed = crate::tensor::contract(&dressed, &half)?;
    }
    let b = tns.bond_index(de.edge);
    let (_, inv) =
        linalg::sqrt_and_inv_sqrt(msgs.get(de), &[b.raised()], linalg::DEFAULT_PINV_CUTOFF)?;
    let a = crate::tensor::contract(&dressed, &inv)?;
    let leg = *a.indices().last().expect("dressed tensor has the fresh outgoing leg");
    let fresh = leg.fresh_like();
    let bra = a.conj().relabel(leg, fresh)?;
    let gram = crate::tensor::contract(&a, &bra)?;
    let (gm, _, _) = gram.permuted(&[leg, fresh])?.matricize(&[leg])?;
    let eye = Array2::from_diag_elem(leg.dim, C64::new(1.0, 0.0));
    linalg::normalized_trace_distance(&gm, &eye)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeId, Graph, VertexId};
    use rand::Rng;

    fn random_path(n: u32, chi: usize, seed: u64) -> TensorNetworkState {
        let vs: Vec<VertexId> = (0..n).map(VertexId).collect();
        let es: Vec<(EdgeId, VertexId, VertexId)> =
            (0..n - 1).map(|i| (EdgeId(i), VertexId(i), VertexId(i + 1))).collect();
        let graph = Graph::new(vs.clone(), es).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let site_index: BTreeMap<VertexId, Index> =
            vs.iter().map(|&v| (v, Index::site(2))).collect();
        let bond_index: BTreeMap<EdgeId, Index> =
            graph.edges().iter().map(|r| (r.id, Index::bond(chi))).collect();
        let mut site_tensor = BTreeMap::new();
        for &v in &vs {
            let mut ix = vec![site_index[&v]];
            ix.extend(graph.incident(v).iter().map(|e| bond_index[e]));
            site_tensor.insert(
                v,
                LabeledTensor::from_fn(ix, |_| {
                    C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
                }),
            );
        }
        TensorNetworkState::new(graph, site_tensor, site_index, bond_index).unwrap()
    }

    #[test]
    fn identity_init_is_uniform() {
        let tns = random_path(3, 3, 1);
        let msgs = init_messages(&tns, InitStrategy::Identity);
        assert_eq!(msgs.len(), 4);
        for (_, m) in msgs.iter() {
            let d = m.indices()[0].dim;
            for i in 0..d {
                for j in 0..d {
                    let want = if i == j { 1.0 / d as f64 } else { 0.0 };
                    assert!((m.data()[[i, j]] - C64::new(want, 0.0)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn random_psd_init_is_reproducible_and_psd() {
        let tns = random_path(3, 3, 2);
        let a = init_messages(&tns, InitStrategy::RandomPsd { seed: 1 });
        let b = init_messages(&tns, InitStrategy::RandomPsd { seed: 1 });
        for ((dea, ma), (deb, mb)) in a.iter().zip(b.iter()) {
            assert_eq!(dea, deb);
            assert!(ma.max_abs_diff(mb).unwrap() == 0.0);
            let (m, _, _) = ma.matricize(&[ma.indices()[0]]).unwrap();
            let na = linalg::nd_to_na(&m);
            let eig = nalgebra::SymmetricEigen::new(na.clone());
            assert!(eig.eigenvalues.iter().all(|&x| x >= -1e-12));
            let tr: C64 = (0..m.nrows()).map(|i| m[(i, i)]).sum();
            assert!((tr.re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn degree_one_message_ignores_inputs() {
        let tns = random_path(2, 3, 3);
        let id = init_messages(&tns, InitStrategy::Identity);
        let rnd = init_messages(&tns, InitStrategy::RandomPsd { seed: 9 });
        let de = DirectedEdge { edge: EdgeId(0), from: VertexId(0) };
        let a = bp_update_edge(&tns, &id, de).unwrap();
        let b = bp_update_edge(&tns, &rnd, de).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-15);
        // and equals the trace-normalized vertex norm tensor
        let env = tns.norm_vertex_environment(VertexId(0), &BTreeMap::new()).unwrap();
        let want = finish_message(&env, tns.bond_index(EdgeId(0))).unwrap();
        assert!(a.max_abs_diff(&want).unwrap() < 1e-15);
    }

    #[test]
    fn sequential_sweep_converges_paths_in_one_iteration() {
        let tns = random_path(6, 3, 4);
        let cfg = BpConfig::with_target(1e-13);
        let (msgs, delta1) =
            bp_iterate(&tns, &init_messages(&tns, InitStrategy::Identity), &cfg).unwrap();
        assert!(delta1 > 1e-3, "first sweep should move off the identity init");
        let (_, delta2) = bp_iterate(&tns, &msgs, &cfg).unwrap();
        assert!(delta2 <= 1e-13, "second sweep re-derives the same fixed point, got {delta2}");
    }

    #[test]
    fn left_to_right_then_back_converges_on_sweep_two() {
        // the explicit MPS order: forward pass first, then the reverse pass
        let tns = random_path(5, 2, 8);
        let g = tns.graph();
        let mut order: Vec<DirectedEdge> =
            (0..4).map(|i| DirectedEdge { edge: EdgeId(i), from: VertexId(i) }).collect();
        order.extend((0..4).rev().map(|i| DirectedEdge { edge: EdgeId(i), from: VertexId(i + 1) }));
        assert_eq!(order.len(), g.directed_edges().len());
        let cfg = BpConfig { edge_order: Some(order), ..BpConfig::with_target(1e-13) };
        let (msgs, _) =
            bp_iterate(&tns, &init_messages(&tns, InitStrategy::Identity), &cfg).unwrap();
        let (_, delta2) = bp_iterate(&tns, &msgs, &cfg).unwrap();
        assert!(delta2 <= 1e-13, "got {delta2}");
    }

    #[test]
    fn bp_run_reports_convergence() {
        let tns = random_path(6, 3, 5);
        let (msgs, report) = bp_run(&tns, &BpConfig::with_target(1e-12)).unwrap();
        assert!(report.converged);
        assert!(report.iterations <= 2);
        assert_eq!(report.deltas.len(), report.iterations);
        // converged fixed point: one more sweep moves nothing
        let (_, delta) = bp_iterate(&tns, &msgs, &BpConfig::default()).unwrap();
        assert!(delta <= 1e-13);
    }

    #[test]
    fn synchronous_schedule_is_deterministic() {
        let tns = random_path(5, 3, 6);
        let cfg = BpConfig {
            schedule: Schedule::Synchronous,
            max_iters: 200,
            ..BpConfig::with_target(1e-10)
        };
        let (a, ra) = bp_run(&tns, &cfg).unwrap();
        let (b, rb) = bp_run(&tns, &cfg).unwrap();
        assert_eq!(ra.iterations, rb.iterations);
        for ((_, ma), (_, mb)) in a.iter().zip(b.iter()) {
            assert!(ma.max_abs_diff(mb).unwrap() == 0.0);
        }
    }

    #[test]
    fn left_orthogonal_tensors_pass_identity_messages() {
        // make each tensor left-orthogonal by a QR sweep, then check that
        // identity messages reproduce themselves left to right
        let mut tns = random_path(4, 2, 7);
        for i in 0..3u32 {
            let v = VertexId(i);
            let t = tns.tensor(v).clone();
            let out = tns.bond_index(EdgeId(i));
            let rows: Vec<Index> =
                t.indices().iter().copied().filter(|ix| ix.key() != out.key()).collect();
            let (q, r) = linalg::qr(&t, &rows).unwrap();
            let q = q.relabel(*q.indices().last().unwrap(), out).unwrap();
            tns = tns.with_tensor(v, q).unwrap();
            let w = VertexId(i + 1);
            let inner = r.indices()[0];
            let tw = crate::tensor::contract(&r, tns.tensor(w)).unwrap();
            let tw = tw.relabel(inner, out).unwrap();
            tns = tns.with_tensor(w, tw).unwrap();
        }
        let msgs = init_messages(&tns, InitStrategy::Identity);
        for i in 0..3u32 {
            let de = DirectedEdge { edge: EdgeId(i), from: VertexId(i) };
            let new = bp_update_edge(&tns, &msgs, de).unwrap();
            assert!(new.max_abs_diff(msgs.get(de)).unwrap() < 1e-13);
        }
    }

    #[test]
    fn three_site_partial_contraction_oracle() {
        // the updated message into site 2 must match the exact partial
        // contraction of sites 0 and 1 of the chain
        let tns = random_path(3, 2, 11);
        let cfg = BpConfig::with_target(1e-13);
        let (msgs, _) = bp_run(&tns, &cfg).unwrap();
        let de = DirectedEdge { edge: EdgeId(1), from: VertexId(1) };
        let updated = bp_update_edge(&tns, &msgs, de).unwrap();
        let t0 = tns.tensor(VertexId(0));
        let t1 = tns.tensor(VertexId(1));
        let blob = crate::tensor::contract_all(&[t0, &t0.bra(), t1, &t1.bra()]).unwrap();
        let want = finish_message(&blob, tns.bond_index(EdgeId(1))).unwrap();
        assert!(updated.max_abs_diff(&want).unwrap() < 1e-12);
    }

    #[test]
    fn sqrt_updates_square_to_standard_updates() {
        let tns = random_path(5, 3, 13);
        let cfg = BpConfig::with_target(1e-12);
        let mut msgs = init_messages(&tns, InitStrategy::Identity);
        let mut sqrt = SqrtMessageSet::from_messages(&tns, &msgs).unwrap();
        for _ in 0..3 {
            let (next, _) = bp_iterate(&tns, &msgs, &cfg).unwrap();
            msgs = next;
            sqrt = sqrt_bp_iterate(&tns, &sqrt, &cfg).unwrap();
            let squared = sqrt.squared(&tns).unwrap();
            for (de, m) in msgs.iter() {
                assert!(squared.get(*de).max_abs_diff(m).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn psd_preserved_from_positive_definite_start() {
        let tns = random_path(5, 3, 17);
        let cfg = BpConfig::with_target(1e-12);
        let mut msgs = init_messages(&tns, InitStrategy::RandomPsd { seed: 3 });
        for _ in 0..3 {
            let (next, _) = bp_iterate(&tns, &msgs, &cfg).unwrap();
            msgs = next;
            for (_, m) in msgs.iter() {
                let (mm, _, _) = m.matricize(&[m.indices()[0]]).unwrap();
                let na = linalg::nd_to_na(&mm);
                let eig = nalgebra::SymmetricEigen::new(na);
                assert!(eig.eigenvalues.iter().all(|&x| x >= -1e-12));
            }
        }
    }
}
