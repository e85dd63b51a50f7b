//! Graph builders and state constructors: lattices, random regular graphs,
//! random trees, random tensor network states, Neel product states, and the
//! square-root classical-Ising state.
//!
//! Vertex ids are deterministic functions of coordinates (row-major), edge
//! ids follow the construction order, and every randomized builder is a
//! pure function of its seed.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::index::Index;
use crate::network::{TensorNetworkState, VidalState};
use crate::tensor::LabeledTensor;

/// Lattice and random-graph families used by the benchmarks.
#[derive(Clone, Debug, PartialEq)]
pub enum LatticeKind {
    Path { l: usize },
    Square { lx: usize, ly: usize },
    Cubic { lx: usize, ly: usize, lz: usize },
    /// Brick-wall embedded honeycomb: `rows x cols` bricks, degree <= 3.
    Hexagonal { rows: usize, cols: usize },
    RandomRegular { n: usize, degree: usize, seed: u64 },
    RandomTree { n: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    /// Periodic wrap per dimension (used by path/square/cubic).
    pub periodic: [bool; 3],
}

impl LatticeSpec {
    pub fn open(kind: LatticeKind) -> Self {
        LatticeSpec { kind, periodic: [false; 3] }
    }

    pub fn periodic(kind: LatticeKind) -> Self {
        LatticeSpec { kind, periodic: [true; 3] }
    }
}

/// Geometry metadata kept alongside a built graph: integer coordinates per
/// vertex and the axis (0 = x, 1 = y, 2 = z) of each lattice edge.
#[derive(Clone, Debug, Default)]
pub struct LatticeInfo {
    pub coords: BTreeMap<VertexId, [usize; 3]>,
    pub axis: BTreeMap<EdgeId, usize>,
}

impl LatticeInfo {
    /// The vertex closest to the middle of the lattice.
    pub fn center(&self) -> VertexId {
        let mut max = [0usize; 3];
        for c in self.coords.values() {
            for d in 0..3 {
                max[d] = max[d].max(c[d]);
            }
        }
        let target = [max[0] / 2, max[1] / 2, max[2] / 2];
        *self
            .coords
            .iter()
            .find(|(_, &c)| c == target)
            .map(|(v, _)| v)
            .expect("center coordinate exists")
    }
}

/// Builds the graph for a lattice spec. Wrap edges of periodic dimensions
/// may duplicate existing edges (parallel edges are intentional for 2-wide
/// dimensions); a periodic dimension of length 1 would need a self-loop and
/// is rejected.
pub fn build_graph(spec: &LatticeSpec) -> Result<(Graph, LatticeInfo)> {
    match spec.kind {
        LatticeKind::Path { l } => grid_graph([l, 1, 1], [spec.periodic[0], false, false]),
        LatticeKind::Square { lx, ly } => {
            grid_graph([lx, ly, 1], [spec.periodic[0], spec.periodic[1], false])
        }
        LatticeKind::Cubic { lx, ly, lz } => grid_graph([lx, ly, lz], spec.periodic),
        LatticeKind::Hexagonal { rows, cols } => hexagonal_graph(rows, cols),
        LatticeKind::RandomRegular { n, degree, seed } => {
            let g = random_regular_graph(n, degree, seed)?;
            Ok((g, LatticeInfo::default()))
        }
        LatticeKind::RandomTree { n, seed } => {
            let g = random_tree(n, seed)?;
            Ok((g, LatticeInfo::default()))
        }
    }
}

fn grid_graph(dims: [usize; 3], periodic: [bool; 3]) -> Result<(Graph, LatticeInfo)> {
    if dims.iter().any(|&d| d < 1) {
        return Err(Error::InvalidSpec("lattice dimensions must be at least 1".into()));
    }
    for d in 0..3 {
        if periodic[d] && dims[d] == 1 {
            return Err(Error::InvalidSpec(
                "a periodic dimension of length 1 would create a self-loop".into(),
            ));
        }
    }
    let id = |x: usize, y: usize, z: usize| -> VertexId {
        VertexId((x * dims[1] * dims[2] + y * dims[2] + z) as u32)
    };
    let mut coords = BTreeMap::new();
    let mut vertices = Vec::new();
    for x in 0..dims[0] {
        for y in 0..dims[1] {
            for z in 0..dims[2] {
                let v = id(x, y, z);
                vertices.push(v);
                coords.insert(v, [x, y, z]);
            }
        }
    }
    let mut edges = Vec::new();
    let mut axis = BTreeMap::new();
    let mut next_edge = 0u32;
    for x in 0..dims[0] {
        for y in 0..dims[1] {
            for z in 0..dims[2] {
                let from = [x, y, z];
                for d in 0..3 {
                    if dims[d] == 1 {
                        continue;
                    }
                    let mut to = from;
                    if from[d] + 1 < dims[d] {
                        to[d] = from[d] + 1;
                    } else if periodic[d] {
                        to[d] = 0;
                    } else {
                        continue;
                    }
                    let e = EdgeId(next_edge);
                    next_edge += 1;
                    edges.push((e, id(from[0], from[1], from[2]), id(to[0], to[1], to[2])));
                    axis.insert(e, d);
                }
            }
        }
    }
    let graph = Graph::new(vertices, edges)?;
    Ok((graph, LatticeInfo { coords, axis }))
}

fn hexagonal_graph(rows: usize, cols: usize) -> Result<(Graph, LatticeInfo)> {
    if rows < 1 || cols < 1 {
        return Err(Error::InvalidSpec("hexagonal lattice needs rows, cols >= 1".into()));
    }
    // brick-wall embedding: full rows of horizontal edges, vertical rungs on
    // alternating columns
    let nr = rows + 1;
    let nc = 2 * (cols + 1);
    let id = |r: usize, c: usize| VertexId((r * nc + c) as u32);
    let mut vertices = Vec::new();
    let mut coords = BTreeMap::new();
    for r in 0..nr {
        for c in 0..nc {
            vertices.push(id(r, c));
            coords.insert(id(r, c), [r, c, 0]);
        }
    }
    let mut edges = Vec::new();
    let mut axis = BTreeMap::new();
    let mut next_edge = 0u32;
    for r in 0..nr {
        for c in 0..nc {
            if c + 1 < nc {
                let e = EdgeId(next_edge);
                next_edge += 1;
                edges.push((e, id(r, c), id(r, c + 1)));
                axis.insert(e, 1);
            }
            if r + 1 < nr && (r + c) % 2 == 0 {
                let e = EdgeId(next_edge);
                next_edge += 1;
                edges.push((e, id(r, c), id(r + 1, c)));
                axis.insert(e, 0);
            }
        }
    }
    let graph = Graph::new(vertices, edges)?;
    Ok((graph, LatticeInfo { coords, axis }))
}

/// Uniform random tree on `n` vertices from a seeded Pruefer sequence.
pub fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidSpec("a tree needs at least 2 vertices".into()));
    }
    let vertices: Vec<VertexId> = (0..n as u32).map(VertexId).collect();
    if n == 2 {
        return Graph::new(vertices, vec![(EdgeId(0), VertexId(0), VertexId(1))]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut edges = Vec::new();
    let mut next_edge = 0u32;
    for &s in &seq {
        let leaf = degree.iter().position(|&d| d == 1).expect("a leaf always exists");
        edges.push((EdgeId(next_edge), VertexId(leaf as u32), VertexId(s as u32)));
        next_edge += 1;
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> =
        degree.iter().enumerate().filter(|(_, &d)| d == 1).map(|(i, _)| i).collect();
    edges.push((EdgeId(next_edge), VertexId(rest[0] as u32), VertexId(rest[1] as u32)));
    Graph::new(vertices, edges)
}

/// Random regular graph by the pairing model: shuffle stubs, reject
/// pairings with self-loops, parallel edges, or disconnected outcomes, and
/// retry deterministically.
pub fn random_regular_graph(n: usize, degree: usize, seed: u64) -> Result<Graph> {
    if n * degree % 2 != 0 {
        return Err(Error::InvalidSpec("n * degree must be even".into()));
    }
    if degree >= n {
        return Err(Error::InvalidSpec("degree must be below the vertex count".into()));
    }
    if degree < 1 {
        return Err(Error::InvalidSpec("degree must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..10_000 {
        let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat(v).take(degree)).collect();
        stubs.shuffle(&mut rng);
        let mut seen = std::collections::BTreeSet::new();
        let mut edges = Vec::with_capacity(n * degree / 2);
        for (k, pair) in stubs.chunks(2).enumerate() {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !seen.insert((a, b)) {
                continue 'attempt;
            }
            edges.push((EdgeId(k as u32), VertexId(a), VertexId(b)));
        }
        edges.sort_by_key(|&(_, a, b)| (a, b));
        let edges: Vec<_> = edges
            .into_iter()
            .enumerate()
            .map(|(k, (_, a, b))| (EdgeId(k as u32), a, b))
            .collect();
        let vertices: Vec<VertexId> = (0..n as u32).map(VertexId).collect();
        match Graph::new(vertices, edges) {
            Ok(g) => return Ok(g),
            Err(_) => continue 'attempt,
        }
    }
    Err(Error::InvalidSpec(format!(
        "could not realize a connected {degree}-regular graph on {n} vertices"
    )))
}

/// Random TNS with i.i.d. standard-normal entries (real, stored complex),
/// uniform bond dimension `chi` and site dimension `site_dim`.
pub fn random_tns(
    graph: &Graph,
    chi: usize,
    site_dim: usize,
    seed: u64,
) -> Result<TensorNetworkState> {
    if chi < 1 || site_dim < 1 {
        return Err(Error::InvalidSpec("chi and site_dim must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let site_index: BTreeMap<VertexId, Index> =
        graph.vertices().iter().map(|&v| (v, Index::site(site_dim))).collect();
    let bond_index: BTreeMap<EdgeId, Index> =
        graph.edges().iter().map(|r| (r.id, Index::bond(chi))).collect();
    let mut site_tensor = BTreeMap::new();
    for &v in graph.vertices() {
        let mut ix = vec![site_index[&v]];
        ix.extend(graph.incident(v).iter().map(|e| bond_index[e]));
        let t = LabeledTensor::from_fn(ix, |_| C64::new(StandardNormal.sample(&mut rng), 0.0));
        site_tensor.insert(v, t);
    }
    TensorNetworkState::new(graph.clone(), site_tensor, site_index, bond_index)
}

/// Neel product state in Vidal form: spins alternate between up and down
/// across the bipartition classes of the graph. `chi = 1`, exact gauge.
pub fn neel_state(graph: &Graph) -> Result<VidalState> {
    let colors = graph
        .bipartition()
        .ok_or_else(|| Error::InvalidSpec("Neel pattern needs a bipartite graph".into()))?;
    let site_index: BTreeMap<VertexId, Index> =
        graph.vertices().iter().map(|&v| (v, Index::site(2))).collect();
    let mut lambda = BTreeMap::new();
    let mut side: BTreeMap<(EdgeId, VertexId), Index> = BTreeMap::new();
    for rec in graph.edges() {
        let bu = Index::bond(1);
        let bv = Index::bond(1);
        lambda.insert(rec.id, LabeledTensor::diag_matrix(bu, bv, &[1.0]));
        side.insert((rec.id, rec.u), bu);
        side.insert((rec.id, rec.v), bv);
    }
    let mut gamma = BTreeMap::new();
    for &v in graph.vertices() {
        let up = colors[&v] == 0;
        let mut ix = vec![site_index[&v]];
        ix.extend(graph.incident(v).iter().map(|e| side[&(*e, v)]));
        let t = LabeledTensor::from_fn(ix, |c| {
            let want = if up { 0 } else { 1 };
            if c[0] == want { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
        });
        gamma.insert(v, t);
    }
    VidalState::new(graph.clone(), gamma, lambda, site_index)
}

/// The TNS whose amplitudes are square roots of classical Ising Boltzmann
/// weights, `E(s) = -sum_<vw> s_v s_w - h sum_v s_v`, so the norm network
/// contracts to the partition function `Z(beta, h)`. Site and bond
/// dimensions are 2; spin +1 maps to index 0.
pub fn ising_sqrt_partition_state(
    graph: &Graph,
    beta: f64,
    h: f64,
) -> Result<TensorNetworkState> {
    if beta < 0.0 {
        return Err(Error::InvalidSpec("beta must be nonnegative".into()));
    }
    // per-edge amplitude factor exp(beta/2 s s') = (A A^T)[s, s'] via the
    // symmetric eigendecomposition of the half-coupling Boltzmann matrix
    let lp = (2.0 * (beta / 2.0).cosh()).sqrt();
    let lm = (2.0 * (beta / 2.0).sinh()).sqrt();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let a = [[lp * inv_sqrt2, lm * inv_sqrt2], [lp * inv_sqrt2, -lm * inv_sqrt2]];
    let site_index: BTreeMap<VertexId, Index> =
        graph.vertices().iter().map(|&v| (v, Index::site(2))).collect();
    let bond_index: BTreeMap<EdgeId, Index> =
        graph.edges().iter().map(|r| (r.id, Index::bond(2))).collect();
    let mut site_tensor = BTreeMap::new();
    for &v in graph.vertices() {
        let incident: Vec<EdgeId> = graph.incident(v).to_vec();
        let mut ix = vec![site_index[&v]];
        ix.extend(incident.iter().map(|e| bond_index[e]));
        let t = LabeledTensor::from_fn(ix, |c| {
            let spin = if c[0] == 0 { 1.0 } else { -1.0 };
            let mut w = (beta * h * spin / 2.0).exp();
            for (k, _) in incident.iter().enumerate() {
                w *= a[c[0]][c[k + 1]];
            }
            C64::new(w, 0.0)
        });
        site_tensor.insert(v, t);
    }
    TensorNetworkState::new(graph.clone(), site_tensor, site_index, bond_index)
}

/// Brute-force Ising partition function over all spin configurations.
pub fn ising_partition_brute_force(graph: &Graph, beta: f64, h: f64) -> f64 {
    let n = graph.vertex_count();
    assert!(n <= 24, "brute force is for desk-scale oracles");
    let verts = graph.vertices();
    let pos: BTreeMap<VertexId, usize> =
        verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut z = 0.0;
    for mask in 0u64..(1 << n) {
        let spin = |v: VertexId| if mask >> pos[&v] & 1 == 0 { 1.0 } else { -1.0 };
        let mut energy = 0.0;
        for rec in graph.edges() {
            energy -= spin(rec.u) * spin(rec.v);
        }
        for &v in verts {
            energy -= h * spin(v);
        }
        z += (-beta * energy).exp();
    }
    z
}
