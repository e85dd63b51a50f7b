//! The three gauging routines and the distance-to-Vidal-gauge diagnostic.
//!
//! * [`bp_gauge`] iterates belief propagation to the target estimate and
//!   performs the gauge transformation once at the end.
//! * [`eager_gauge`] runs the identical message updates but pays for a full
//!   gauge transformation (plus the move to the symmetric gauge and the
//!   bond-tensor message reset) every sweep, so its iteration count matches
//!   [`bp_gauge`]'s by construction while each sweep costs more.
//! * [`simple_update_gauge`] sweeps identity-gate simple updates over the
//!   edges of a state already in (possibly poor) Vidal form.
//!
//! All three converge to the same fixed point: the bond tensors carry the
//! local Schmidt-like spectra, and the vertex tensors obey the per-edge
//! isometry conditions measured by [`vidal_distance`].

use std::collections::BTreeMap;
use std::time::Instant;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::bp::{self, BpConfig, GaugeReport, MessageSet};
use crate::error::{Error, Result};
use crate::graph::{DirectedEdge, EdgeId};
use crate::index::Index;
use crate::linalg::{self, SvdOptions};
use crate::network::{TensorNetworkState, VidalState};
use crate::tensor::{contract, LabeledTensor};

/// Floor under which singular values are treated as structural zeros and
/// dropped, independent of any user truncation.
const ZERO_CUTOFF: f64 = 1e-14;

/// Bond truncation policy for gauge transformations and gate applications.
#[derive(Clone, Copy, Debug, Default)]
pub struct TruncationPolicy {
    pub max_rank: Option<usize>,
    /// Relative singular-value cutoff in [0, 1).
    pub cutoff: Option<f64>,
}

impl TruncationPolicy {
    pub fn none() -> Self {
        TruncationPolicy::default()
    }

    pub fn with_max_rank(max_rank: usize) -> Self {
        TruncationPolicy { max_rank: Some(max_rank), cutoff: None }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(m) = self.max_rank {
            if m < 1 {
                return Err(Error::InvalidSpec("max_rank must be at least 1".into()));
            }
        }
        if let Some(c) = self.cutoff {
            if !(0.0..1.0).contains(&c) {
                return Err(Error::InvalidSpec("cutoff must lie in [0, 1)".into()));
            }
        }
        Ok(())
    }

    pub(crate) fn svd_options(&self) -> SvdOptions {
        SvdOptions {
            max_rank: self.max_rank,
            cutoff: Some(self.cutoff.unwrap_or(0.0).max(ZERO_CUTOFF)),
        }
    }
}

/// Transforms a TNS into the Vidal gauge using a set of (ideally converged)
/// BP messages.
///
/// Per edge, the two square-root message factors are multiplied through the
/// bond and SVD'd; the singular values become the bond tensor while the
/// isometries, pseudo-inverse square roots, and original site tensors
/// combine into the new vertex tensors. With converged messages and no
/// truncation the contracted state is unchanged and the result satisfies
/// the Vidal isometry conditions.
pub fn gauge_from_messages(
    tns: &TensorNetworkState,
    msgs: &MessageSet,
    trunc: TruncationPolicy,
) -> Result<VidalState> {
    trunc.validate()?;
    let graph = tns.graph().clone();
    let mut gamma: BTreeMap<_, _> =
        graph.vertices().iter().map(|&v| (v, tns.tensor(v).clone())).collect();
    let mut lambda = BTreeMap::new();
    let mut log_norm = tns.log_norm;
    for rec in graph.edges() {
        let b = tns.bond_index(rec.id);
        let fwd = msgs.get(DirectedEdge { edge: rec.id, from: rec.u });
        let bwd = msgs.get(DirectedEdge { edge: rec.id, from: rec.v });
        for m in [fwd, bwd] {
            if m.matrix_trace()?.norm() < 1e-300 {
                return Err(Error::DegenerateMessage(format!("zero message on {:?}", rec.id)));
            }
        }
        let (half_f, inv_f) =
            linalg::sqrt_and_inv_sqrt(fwd, &[b.raised()], linalg::DEFAULT_PINV_CUTOFF)?;
        let (half_b, inv_b) =
            linalg::sqrt_and_inv_sqrt(bwd, &[b.raised()], linalg::DEFAULT_PINV_CUTOFF)?;
        // B = M_e^{1/2} (M_ebar^{1/2})^T, contracted over the shared ket bond
        let core = contract(&half_f, &half_b)?;
        let rows = [half_f.indices()[0]];
        let svd = linalg::svd(&core, &rows, trunc.svd_options())?;
        let total: f64 = svd.values.iter().sum();
        let normed: Vec<f64> = svd.values.iter().map(|s| s / total).collect();
        log_norm += total.ln();
        let left = svd.s.indices()[0];
        let right = svd.s.indices()[1];
        lambda.insert(rec.id, LabeledTensor::diag_matrix(left, right, &normed));
        // tail vertex: T_u . (M_e^{-1/2} U); head vertex: (V M_ebar^{-1/2 T}) . T_v
        let gu = contract(&inv_f, &svd.u)?;
        gamma.insert(rec.u, contract(&gamma[&rec.u], &gu)?);
        let gv = contract(&svd.v, &inv_b)?;
        gamma.insert(rec.v, contract(&gamma[&rec.v], &gv)?);
    }
    let site_index: BTreeMap<_, _> = graph
        .vertices()
        .iter()
        .filter_map(|&v| tns.site_index(v).map(|s| (v, s)))
        .collect();
    let mut vs = VidalState::new(graph, gamma, lambda, site_index)?;
    vs.log_norm = log_norm;
    Ok(vs)
}

/// Messages of a symmetric-gauge network at its fixed point: trace-normalized
/// `Lambda^2`, identical in both directions of every edge.
pub fn messages_from_lambdas(
    sym: &TensorNetworkState,
    lambdas: &BTreeMap<EdgeId, Vec<f64>>,
) -> MessageSet {
    let mut msgs = bp::init_messages(sym, bp::InitStrategy::Identity);
    for rec in sym.graph().edges() {
        let b = sym.bond_index(rec.id);
        let vals = &lambdas[&rec.id];
        let total: f64 = vals.iter().map(|x| x * x).sum();
        let sq: Vec<f64> = vals.iter().map(|x| x * x / total).collect();
        let m = LabeledTensor::diag_matrix(b.raised(), b, &sq);
        msgs.insert(DirectedEdge { edge: rec.id, from: rec.u }, m.clone());
        msgs.insert(DirectedEdge { edge: rec.id, from: rec.v }, m);
    }
    msgs
}

/// Belief-propagation gauging: BP to convergence, one gauge transformation
/// at the end.
pub fn bp_gauge(
    tns: &TensorNetworkState,
    cfg: &BpConfig,
    trunc: TruncationPolicy,
) -> Result<(VidalState, GaugeReport)> {
    let start = Instant::now();
    let (msgs, mut report) = bp::bp_run(tns, cfg)?;
    let vs = gauge_from_messages(tns, &msgs, trunc)?;
    report.wall_seconds = start.elapsed().as_secs_f64();
    Ok((vs, report))
}

/// Eager gauging: the same message iteration as [`bp_gauge`] with a full
/// gauge transformation, symmetric-gauge move, and bond-tensor message
/// reset performed every sweep. Identical iteration counts to [`bp_gauge`]
/// by construction; each sweep costs roughly `z` extra contractions of the
/// leading order.
pub fn eager_gauge(
    tns: &TensorNetworkState,
    cfg: &BpConfig,
    trunc: TruncationPolicy,
) -> Result<(VidalState, GaugeReport)> {
    let start = Instant::now();
    let mut msgs = bp::init_messages(tns, cfg.init);
    let mut deltas = Vec::new();
    let mut iter_seconds = Vec::new();
    let mut converged = false;
    let mut state = None;
    while deltas.len() < cfg.max_iters {
        let t0 = Instant::now();
        let (next, delta) = bp::bp_iterate(tns, &msgs, cfg)?;
        msgs = next;
        let vs = gauge_from_messages(tns, &msgs, trunc)?;
        let sym = vs.to_symmetric()?;
        let lambdas: BTreeMap<EdgeId, Vec<f64>> =
            sym.graph().edges().iter().map(|r| (r.id, vs.lambda_values(r.id))).collect();
        let eager_msgs = messages_from_lambdas(&sym, &lambdas);
        std::hint::black_box(&eager_msgs);
        iter_seconds.push(t0.elapsed().as_secs_f64());
        deltas.push(delta);
        state = Some(vs);
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
    Ok((state.expect("at least one iteration"), report))
}

/// One identity-gate simple update on an edge of a Vidal state: absorb the
/// surrounding bond tensors, QR both endpoint tensors against the edge,
/// SVD the R-R core, and undo the absorbed bond tensors with pseudo-inverse
/// resolutions of identity. Returns the truncation error.
pub fn identity_simple_update_edge(
    vs: &mut VidalState,
    e: EdgeId,
    trunc: TruncationPolicy,
) -> Result<f64> {
    let rec = *vs.graph().edge(e);
    let graph = vs.graph().clone();
    let surrounding = |vtx| -> Vec<EdgeId> {
        graph.incident(vtx).iter().copied().filter(|&f| f != e).collect()
    };
    let absorb_surrounding = |vtx, undo: &[EdgeId]| -> Result<LabeledTensor> {
        let mut a = vs.gamma(vtx).clone();
        for &f in undo {
            a = contract(&a, vs.lambda(f))?;
        }
        Ok(a)
    };
    let undo_u = surrounding(rec.u);
    let undo_v = surrounding(rec.v);
    // the edge's own bond tensor enters the core once, through the tail side
    let a_u = contract(&absorb_surrounding(rec.u, &undo_u)?, vs.lambda(e))?;
    let a_v = absorb_surrounding(rec.v, &undo_v)?;
    let leg = vs.lambda_side(e, rec.v);
    let rows_u: Vec<Index> =
        a_u.indices().iter().copied().filter(|i| i.key() != leg.key()).collect();
    let (q_u, r_u) = linalg::qr(&a_u, &rows_u)?;
    let rows_v: Vec<Index> =
        a_v.indices().iter().copied().filter(|i| i.key() != leg.key()).collect();
    let (q_v, r_v) = linalg::qr(&a_v, &rows_v)?;
    let theta = contract(&r_u, &r_v)?;
    let svd = linalg::svd(&theta, &[r_u.indices()[0]], trunc.svd_options())?;
    let total: f64 = svd.values.iter().sum();
    let normed: Vec<f64> = svd.values.iter().map(|s| s / total).collect();
    vs.log_norm += total.ln();
    let mut new_u = contract(&q_u, &svd.u)?;
    let mut new_v = contract(&svd.v, &q_v)?;
    // reinsert old-Lambda resolutions of identity on the exposed edges
    for (vtx, undo, out) in
        [(rec.u, &undo_u, &mut new_u), (rec.v, &undo_v, &mut new_v)]
    {
        for &f in undo.iter() {
            let near = vs.lambda_side(f, vtx);
            let far = vs.lambda_side(f, graph.edge(f).other(vtx));
            let vals = vs.lambda_values(f);
            let vmax = vals.iter().cloned().fold(0.0, f64::max);
            let pinv: Vec<f64> = vals
                .iter()
                .map(|&x| if x > linalg::DEFAULT_PINV_CUTOFF * vmax { 1.0 / x } else { 0.0 })
                .collect();
            let inv = LabeledTensor::diag_matrix(far, near, &pinv);
            *out = contract(out, &inv)?;
        }
    }
    vs.replace_gamma(rec.u, new_u);
    vs.replace_gamma(rec.v, new_v);
    let left = svd.s.indices()[0];
    let right = svd.s.indices()[1];
    vs.replace_lambda(e, LabeledTensor::diag_matrix(left, right, &normed));
    Ok(svd.truncation_error)
}

/// Simple-update gauging: repeated sweeps of identity simple updates over
/// every edge until the bond spectra stop moving. Plain TNS inputs should be
/// wrapped with identity bond tensors first
/// (see [`crate::network::wrap_with_identity_bonds`]).
pub fn simple_update_gauge(
    vs: &VidalState,
    cfg: &BpConfig,
    trunc: TruncationPolicy,
) -> Result<(VidalState, GaugeReport)> {
    let start = Instant::now();
    let mut state = vs.clone();
    // each undirected edge once per sweep, in first-appearance order of the
    // BP sweep order
    let mut edges = Vec::new();
    for de in state.graph().sweep_order() {
        if !edges.contains(&de.edge) {
            edges.push(de.edge);
        }
    }
    let mut deltas = Vec::new();
    let mut iter_seconds = Vec::new();
    let mut converged = false;
    while deltas.len() < cfg.max_iters {
        let t0 = Instant::now();
        let before: BTreeMap<EdgeId, Vec<f64>> =
            edges.iter().map(|&e| (e, state.lambda_values(e))).collect();
        for &e in &edges {
            identity_simple_update_edge(&mut state, e, trunc)?;
        }
        let mut delta = 0.0;
        for &e in &edges {
            delta += lambda_sq_distance(&before[&e], &state.lambda_values(e));
        }
        delta /= edges.len() as f64;
        iter_seconds.push(t0.elapsed().as_secs_f64());
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
    Ok((state, report))
}

/// `|| diag(a^2)/tr - diag(b^2)/tr ||_1` with zero padding for unequal
/// lengths: the per-edge term of the simple-update convergence estimate.
fn lambda_sq_distance(a: &[f64], b: &[f64]) -> f64 {
    let ta: f64 = a.iter().map(|x| x * x).sum();
    let tb: f64 = b.iter().map(|x| x * x).sum();
    let n = a.len().max(b.len());
    let mut d = 0.0;
    for i in 0..n {
        let xa = a.get(i).map_or(0.0, |x| x * x / ta);
        let xb = b.get(i).map_or(0.0, |x| x * x / tb);
        d += (xa - xb).abs();
    }
    d
}

/// The distance to the Vidal gauge: for every directed edge, absorb all
/// other bond tensors into the vertex tensor, contract against its
/// conjugate, and take the normalized trace distance of the result to the
/// identity; average over directed edges.
pub fn vidal_distance(vs: &VidalState) -> Result<f64> {
    let graph = vs.graph();
    let mut total = 0.0;
    let mut count = 0usize;
    for &v in graph.vertices() {
        for &e in graph.incident(v) {
            let mut w = vs.gamma(v).clone();
            for &f in graph.incident(v) {
                if f == e {
                    continue;
                }
                w = contract(&w, vs.lambda(f))?;
            }
            let leg = vs.lambda_side(e, v);
            let fresh = leg.fresh_like();
            let bra = w.conj().relabel(leg, fresh)?;
            let gram = contract(&w, &bra)?;
            let (gm, _, _) = gram.permuted(&[leg, fresh])?.matricize(&[leg])?;
            let eye = Array2::from_diag_elem(leg.dim, C64::new(1.0, 0.0));
            total += linalg::normalized_trace_distance(&gm, &eye)?;
            count += 1;
        }
    }
    Ok(total / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bp::InitStrategy;
    use crate::graph::{Graph, VertexId};
    use crate::network::{wrap_with_identity_bonds, DEFAULT_CONTRACT_LIMIT};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

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

    fn schmidt_values(tns: &TensorNetworkState, left_sites: &[VertexId]) -> Vec<f64> {
        let amp = tns.exact_contract(DEFAULT_CONTRACT_LIMIT).unwrap();
        let rows: Vec<Index> =
            left_sites.iter().map(|&v| tns.site_index(v).unwrap()).collect();
        let (mat, _, _) = amp.matricize(&rows).unwrap();
        let na = linalg::nd_to_na(&mat);
        let mut sv: Vec<f64> = na.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }

    fn assert_amplitudes_match(a: &LabeledTensor, ascale: f64, b: &LabeledTensor, bscale: f64) {
        let factor = (bscale - ascale).exp();
        let scaled = b.scaled(C64::new(factor, 0.0));
        let diff = a.max_abs_diff(&scaled).unwrap();
        let magnitude = a.max_abs().max(1e-300);
        assert!(diff <= 1e-9 * magnitude, "amplitude drift {diff:.3e} vs scale {magnitude:.3e}");
    }

    #[test]
    fn two_site_lambda_is_the_schmidt_spectrum() {
        let tns = random_path(2, 3, 42);
        let (msgs, _) = bp::bp_run(&tns, &BpConfig::with_target(1e-13)).unwrap();
        let vs = gauge_from_messages(&tns, &msgs, TruncationPolicy::none()).unwrap();
        let lam = vs.lambda_values(EdgeId(0));
        let dense = schmidt_values(&tns, &[VertexId(0)]);
        let total: f64 = dense.iter().sum();
        for (i, l) in lam.iter().enumerate() {
            let want = dense.get(i).copied().unwrap_or(0.0) / total;
            assert!((l - want).abs() < 1e-10, "lambda[{i}] = {l}, want {want}");
        }
    }

    #[test]
    fn identity_messages_on_product_state_pass_through() {
        // chi = 1 product state in symmetric form: gauging with identity
        // messages returns the same tensors and unit bond tensors
        let tns = random_path(3, 1, 7);
        let msgs = bp::init_messages(&tns, InitStrategy::Identity);
        let vs = gauge_from_messages(&tns, &msgs, TruncationPolicy::none()).unwrap();
        for rec in tns.graph().edges() {
            let lam = vs.lambda_values(rec.id);
            assert_eq!(lam.len(), 1);
            assert!((lam[0] - 1.0).abs() < 1e-12);
        }
        let a = tns.exact_contract(DEFAULT_CONTRACT_LIMIT).unwrap();
        let b = vs.exact_contract(DEFAULT_CONTRACT_LIMIT).unwrap();
        assert_amplitudes_match(&a, tns.log_norm, &b, vs.log_norm);
    }

    #[test]
    fn gauging_preserves_amplitudes_and_reaches_the_gauge() {
        let tns = random_path(4, 3, 99);
        let (vs, report) = bp_gauge(&tns, &BpConfig::with_target(1e-12), TruncationPolicy::none()).unwrap();
        assert!(report.converged);
        let c = vidal_distance(&vs).unwrap();
        assert!(c <= 1e-10, "distance to the Vidal gauge: {c:.3e}");
        let a = tns.exact_contract(DEFAULT_CONTRACT_LIMIT).unwrap();
        let b = vs.exact_contract(DEFAULT_CONTRACT_LIMIT).unwrap();
        assert_amplitudes_match(&a, tns.log_norm, &b, vs.log_norm);
    }

    #[test]
    fn vidal_isometry_holds_per_site_on_paths() {
        let tns = random_path(5, 3, 5);
        let (vs, _) = bp_gauge(&tns, &BpConfig::with_target(1e-13), TruncationPolicy::none()).unwrap();
        // left condition at each bulk site: contract everything but the
        // right leg pair and compare to identity
        for e in 0..4u32 {
            let rec = *vs.graph().edge(EdgeId(e));
            let mut w = vs.gamma(rec.u).clone();
            for &f in vs.graph().incident(rec.u) {
                if f != EdgeId(e) {
                    w = contract(&w, vs.lambda(f)).unwrap();
                }
            }
            let leg = vs.lambda_side(EdgeId(e), rec.u);
            let fresh = leg.fresh_like();
            let bra = w.conj().relabel(leg, fresh).unwrap();
            let gram = contract(&w, &bra).unwrap();
            let (gm, _, _) = gram.permuted(&[leg, fresh]).unwrap().matricize(&[leg]).unwrap();
            let eye = Array2::from_diag_elem(leg.dim, C64::new(1.0, 0.0));
            let d = linalg::normalized_trace_distance(&gm, &eye).unwrap();
            assert!(d < 1e-10, "edge {e}: {d:.3e}");
        }
    }

    #[test]
    fn eager_matches_bp_iterations_and_spectra() {
        let tns = random_path(6, 3, 123);
        let cfg = BpConfig::with_target(1e-11);
        let (vb, rb) = bp_gauge(&tns, &cfg, TruncationPolicy::none()).unwrap();
        let (ve, re) = eager_gauge(&tns, &cfg, TruncationPolicy::none()).unwrap();
        assert_eq!(rb.iterations, re.iterations);
        for rec in tns.graph().edges() {
            let a = vb.lambda_values(rec.id);
            let b = ve.lambda_values(rec.id);
            for (x, y) in a.iter().zip(b.iter()) {
                assert!((x - y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn simple_update_gauge_finds_the_same_spectra() {
        let tns = random_path(4, 2, 321);
        let cfg = BpConfig::with_target(1e-12);
        let (vb, _) = bp_gauge(&tns, &cfg, TruncationPolicy::none()).unwrap();
        let wrapped = wrap_with_identity_bonds(&tns).unwrap();
        let (vsu, rsu) = simple_update_gauge(&wrapped, &cfg, TruncationPolicy::none()).unwrap();
        assert!(rsu.converged);
        let a = tns.exact_contract(DEFAULT_CONTRACT_LIMIT).unwrap();
        let b = vsu.exact_contract(DEFAULT_CONTRACT_LIMIT).unwrap();
        assert_amplitudes_match(&a, tns.log_norm, &b, vsu.log_norm);
        for rec in tns.graph().edges() {
            let x = vb.lambda_values(rec.id);
            let y = vsu.lambda_values(rec.id);
            for i in 0..x.len().max(y.len()) {
                let xi = x.get(i).copied().unwrap_or(0.0);
                let yi = y.get(i).copied().unwrap_or(0.0);
                assert!((xi - yi).abs() < 1e-6, "edge {:?} rank {i}: {xi} vs {yi}", rec.id);
            }
        }
        let c = vidal_distance(&vsu).unwrap();
        assert!(c < 1e-9, "distance {c:.3e}");
    }

    #[test]
    fn already_gauged_state_is_a_simple_update_fixed_point() {
        let tns = random_path(4, 3, 77);
        let (vs, _) = bp_gauge(&tns, &BpConfig::with_target(1e-13), TruncationPolicy::none()).unwrap();
        let mut probe = vs.clone();
        let before: Vec<Vec<f64>> =
            probe.graph().edges().iter().map(|r| probe.lambda_values(r.id)).collect();
        let edges: Vec<EdgeId> = probe.graph().edges().iter().map(|r| r.id).collect();
        for e in edges {
            identity_simple_update_edge(&mut probe, e, TruncationPolicy::none()).unwrap();
        }
        for (rec, old) in probe.graph().edges().to_vec().iter().zip(before) {
            let new = probe.lambda_values(rec.id);
            assert!(lambda_sq_distance(&old, &new) < 1e-12);
        }
    }

    #[test]
    fn perturbed_lambda_is_detected_by_the_distance() {
        let tns = random_path(3, 2, 11);
        let (vs, _) = bp_gauge(&tns, &BpConfig::with_target(1e-13), TruncationPolicy::none()).unwrap();
        let base = vidal_distance(&vs).unwrap();
        assert!(base < 1e-11);
        let mut bad = vs.clone();
        let l = bad.lambda(EdgeId(0)).clone();
        let mut vals = bad.lambda_values(EdgeId(0));
        vals[0] *= 1.1;
        let t: f64 = vals.iter().sum();
        for v in &mut vals {
            *v /= t;
        }
        bad.replace_lambda(EdgeId(0), LabeledTensor::diag_matrix(l.indices()[0], l.indices()[1], &vals));
        let c = vidal_distance(&bad).unwrap();
        assert!(c > 1e-3, "perturbation must be visible, got {c:.3e}");
    }
}
