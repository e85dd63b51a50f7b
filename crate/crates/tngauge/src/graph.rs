//! Undirected multigraphs underlying tensor network states.
//!
//! Edges have their own ids so that parallel edges (which appear in periodic
//! unit cells) stay distinguishable; a directed edge is an (edge id, source
//! vertex) pair. Self-loops are rejected.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

/// An edge id together with the endpoint the message (or sweep) leaves from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedEdge {
    pub edge: EdgeId,
    pub from: VertexId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

impl EdgeRecord {
    pub fn other(&self, v: VertexId) -> VertexId {
        if v == self.u { self.v } else { self.u }
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeRecord>,
    incident: BTreeMap<VertexId, Vec<EdgeId>>,
}

impl Graph {
    /// Builds a connected multigraph from vertex ids and (edge id, u, v)
    /// triples. Duplicate ids, self-loops, dangling endpoints, and
    /// disconnected graphs are rejected.
    pub fn new(vertices: Vec<VertexId>, edges: Vec<(EdgeId, VertexId, VertexId)>) -> Result<Self> {
        let mut vs = vertices;
        vs.sort();
        let unique: BTreeSet<VertexId> = vs.iter().copied().collect();
        if unique.len() != vs.len() {
            return Err(Error::InvalidSpec("duplicate vertex id".into()));
        }
        if vs.is_empty() {
            return Err(Error::InvalidSpec("graph needs at least one vertex".into()));
        }
        let mut incident: BTreeMap<VertexId, Vec<EdgeId>> =
            vs.iter().map(|&v| (v, Vec::new())).collect();
        let mut recs = Vec::with_capacity(edges.len());
        let mut edge_ids = BTreeSet::new();
        for (id, u, v) in edges {
            if u == v {
                return Err(Error::InvalidSpec(format!("self-loop on vertex {:?}", u)));
            }
            if !unique.contains(&u) || !unique.contains(&v) {
                return Err(Error::InvalidSpec(format!("edge {:?} touches unknown vertex", id)));
            }
            if !edge_ids.insert(id) {
                return Err(Error::InvalidSpec(format!("duplicate edge id {:?}", id)));
            }
            incident.get_mut(&u).unwrap().push(id);
            incident.get_mut(&v).unwrap().push(id);
            recs.push(EdgeRecord { id, u, v });
        }
        recs.sort_by_key(|r| r.id);
        for list in incident.values_mut() {
            list.sort();
        }
        let g = Graph { vertices: vs, edges: recs, incident };
        if !g.is_connected() {
            return Err(Error::InvalidSpec("graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> &EdgeRecord {
        self.edges
            .binary_search_by_key(&id, |r| r.id)
            .map(|pos| &self.edges[pos])
            .expect("edge id must exist")
    }

    /// Incident edge ids of a vertex, ascending.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        self.incident.get(&v).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).len()
    }

    /// The endpoint a directed edge points at.
    pub fn head(&self, de: DirectedEdge) -> VertexId {
        self.edge(de.edge).other(de.from)
    }

    /// All directed edges (both orientations of every edge), sorted.
    pub fn directed_edges(&self) -> Vec<DirectedEdge> {
        let mut out = Vec::with_capacity(2 * self.edges.len());
        for r in &self.edges {
            out.push(DirectedEdge { edge: r.id, from: r.u });
            out.push(DirectedEdge { edge: r.id, from: r.v });
        }
        out.sort();
        out
    }

    fn is_connected(&self) -> bool {
        let mut seen = BTreeSet::new();
        let root = self.vertices[0];
        let mut queue = VecDeque::from([root]);
        seen.insert(root);
        while let Some(v) = queue.pop_front() {
            for &e in self.incident(v) {
                let w = self.edge(e).other(v);
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// BFS edge discovery order from the smallest vertex: each edge appears
    /// once, directed away from the vertex at which it was first examined.
    pub fn bfs_edges(&self) -> Vec<DirectedEdge> {
        let root = self.vertices[0];
        let mut seen_v = BTreeSet::from([root]);
        let mut seen_e = BTreeSet::new();
        let mut queue = VecDeque::from([root]);
        let mut order = Vec::with_capacity(self.edges.len());
        while let Some(v) = queue.pop_front() {
            for &e in self.incident(v) {
                if seen_e.insert(e) {
                    order.push(DirectedEdge { edge: e, from: v });
                    let w = self.edge(e).other(v);
                    if seen_v.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        order
    }

    /// The default sequential sweep order: every directed edge once per
    /// sweep, leaves-to-root first (BFS discovery order reversed, pointing
    /// back at the discovering vertex), then root-to-leaves. On a tree this
    /// order converges belief propagation in a single sweep.
    pub fn sweep_order(&self) -> Vec<DirectedEdge> {
        let bfs = self.bfs_edges();
        let mut order = Vec::with_capacity(2 * bfs.len());
        for de in bfs.iter().rev() {
            order.push(DirectedEdge { edge: de.edge, from: self.head(*de) });
        }
        order.extend(bfs.iter().copied());
        order
    }

    /// True when the graph admits a 2-coloring; returns the color map.
    pub fn bipartition(&self) -> Option<BTreeMap<VertexId, u8>> {
        let mut color: BTreeMap<VertexId, u8> = BTreeMap::new();
        let root = self.vertices[0];
        color.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let cv = color[&v];
            for &e in self.incident(v) {
                let w = self.edge(e).other(v);
                match color.get(&w) {
                    Some(&cw) if cw == cv => return None,
                    Some(_) => {}
                    None => {
                        color.insert(w, 1 - cv);
                        queue.push_back(w);
                    }
                }
            }
        }
        Some(color)
    }
}
