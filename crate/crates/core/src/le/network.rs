use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::One;
use serde::Serialize;

use super::LeTableau;
use crate::algebra::{serialize_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Color {
    Black,
    White,
}

/// Compass direction at which an edge meets a vertex in the planar drawing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Dir {
    N,
    E,
    S,
    W,
}

impl Dir {
    pub const CLOCKWISE: [Dir; 4] = [Dir::N, Dir::E, Dir::S, Dir::W];

    pub fn clockwise(self) -> Dir {
        Self::CLOCKWISE[(self.index() + 1) % 4]
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Vertex roles. Rows are 1-based, slots s = 1..N_r index the filled boxes
/// of a row in increasing column order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VertexKind {
    /// b_index on the boundary.
    Boundary { index: usize },
    /// White vertex V_{i_r} next to the boundary source.
    Source { row: usize },
    /// White vertex V_{i_r j}.
    White { row: usize, slot: usize, column: usize },
    /// Black vertex V'_{i_r j}.
    Black { row: usize, slot: usize, column: usize },
    /// Extra vertex carrying the Darboux edge of row r in the modified network.
    Darboux { row: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub id: usize,
    pub color: Color,
    pub kind: VertexKind,
}

impl Vertex {
    pub fn is_boundary(&self) -> bool {
        matches!(self.kind, VertexKind::Boundary { .. })
    }
}

/// Edge label e^{(m)}_{r,s}: m = 1 weighted horizontal, 2 vertical, 3 unit
/// horizontal (black to white, or the Darboux edge when s = 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeLabel {
    pub kind: u8,
    pub row: usize,
    pub slot: usize,
}

impl EdgeLabel {
    pub fn new(kind: u8, row: usize, slot: usize) -> Self {
        Self { kind, row, slot }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({})_{},{}", self.kind, self.row, self.slot)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub weight: Rational,
    pub tail_dir: Dir,
    pub head_dir: Dir,
    /// More than one label only after bivalent contraction.
    pub labels: Vec<EdgeLabel>,
}

impl Edge {
    pub fn has_label(&self, label: EdgeLabel) -> bool {
        self.labels.contains(&label)
    }
}

/// Planar directed bipartite network with boundary vertices b_1..b_n at ids
/// 0..n−1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeNetwork {
    pub k: usize,
    pub n: usize,
    pub pivots: Vec<usize>,
    /// Filled columns of each row, increasing; survives reduction.
    pub cells: Vec<Vec<usize>>,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// Bivalent vertices kept by [`reduce_network`] (n_b).
    pub kept_bivalent: usize,
    #[serde(skip)]
    by_kind: HashMap<VertexKind, usize>,
    #[serde(skip)]
    out_adj: Vec<Vec<usize>>,
    #[serde(skip)]
    in_adj: Vec<Vec<usize>>,
}

impl LeNetwork {
    pub(crate) fn assemble(
        k: usize,
        n: usize,
        pivots: Vec<usize>,
        cells: Vec<Vec<usize>>,
        vertices: Vec<Vertex>,
        mut edges: Vec<Edge>,
        kept_bivalent: usize,
    ) -> Self {
        for (i, e) in edges.iter_mut().enumerate() {
            e.id = i;
        }
        let by_kind = vertices.iter().map(|v| (v.kind, v.id)).collect();
        let mut out_adj = vec![Vec::new(); vertices.len()];
        let mut in_adj = vec![Vec::new(); vertices.len()];
        for e in &edges {
            out_adj[e.tail].push(e.id);
            in_adj[e.head].push(e.id);
        }
        Self {
            k,
            n,
            pivots,
            cells,
            vertices,
            edges,
            kept_bivalent,
            by_kind,
            out_adj,
            in_adj,
        }
    }

    pub fn boundary(&self, j: usize) -> usize {
        j - 1
    }

    pub fn vertex_of(&self, kind: VertexKind) -> Option<usize> {
        self.by_kind.get(&kind).copied()
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.out_adj[v].len() + self.in_adj[v].len()
    }

    pub fn edge_with_label(&self, label: EdgeLabel) -> Option<&Edge> {
        self.edges.iter().find(|e| e.has_label(label))
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.iter().filter(|v| !v.is_boundary())
    }

    /// Edge leaving or entering `v` in direction `d`.
    pub fn edge_at(&self, v: usize, d: Dir) -> Option<usize> {
        self.out_adj[v]
            .iter()
            .copied()
            .find(|&e| self.edges[e].tail_dir == d)
            .or_else(|| self.in_adj[v].iter().copied().find(|&e| self.edges[e].head_dir == d))
    }

    /// Kahn order; `None` if the orientation has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = self.in_adj.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..self.vertices.len()).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &e in &self.out_adj[v] {
                let h = self.edges[e].head;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    queue.push_back(h);
                }
            }
        }
        (order.len() == self.vertices.len()).then_some(order)
    }

    /// Sum over directed paths from `start` of the weight products, per vertex.
    pub fn path_sums_from(&self, start: usize) -> Vec<Rational> {
        let order = self.topological_order().expect("acyclic network");
        let mut sums = vec![Rational::from_integer(0.into()); self.vertices.len()];
        sums[start] = Rational::one();
        for v in order {
            if sums[v] == Rational::from_integer(0.into()) {
                continue;
            }
            for &e in &self.out_adj[v] {
                let edge = &self.edges[e];
                let add = &sums[v] * &edge.weight;
                sums[edge.head] += add;
            }
        }
        sums
    }
}

/// Trivalent bipartite network of a Le-tableau with deterministic vertex ids:
/// boundary b_1..b_n, then per row V_{i_r} followed by V'_{r,s}, V_{r,s}.
pub fn build_network(tab: &LeTableau) -> LeNetwork {
    let d = tab.diagram();
    let (k, n) = (d.k(), d.n());
    let mut vertices: Vec<Vertex> = (1..=n)
        .map(|j| Vertex {
            id: j - 1,
            color: Color::Black,
            kind: VertexKind::Boundary { index: j },
        })
        .collect();
    let push = |vertices: &mut Vec<Vertex>, color, kind| {
        let id = vertices.len();
        vertices.push(Vertex { id, color, kind });
        id
    };
    let mut source = vec![0; k + 1];
    let mut black = HashMap::new();
    let mut white = HashMap::new();
    for r in 1..=k {
        source[r] = push(&mut vertices, Color::White, VertexKind::Source { row: r });
        for (s0, j) in d.filled_in_row(r).into_iter().enumerate() {
            let slot = s0 + 1;
            let b = push(&mut vertices, Color::Black, VertexKind::Black { row: r, slot, column: j });
            let w = push(&mut vertices, Color::White, VertexKind::White { row: r, slot, column: j });
            black.insert((r, j), b);
            white.insert((r, j), w);
        }
    }

    let unit = Rational::one;
    let mut edges = Vec::new();
    let mut edge = |tail, head, weight, tail_dir, head_dir, label| {
        edges.push(Edge {
            id: 0,
            tail,
            head,
            weight,
            tail_dir,
            head_dir,
            labels: vec![label],
        })
    };
    for r in 1..=k {
        let i = d.pivot(r);
        edge(i - 1, source[r], unit(), Dir::W, Dir::E, EdgeLabel::new(2, r, 0));
        let mut prev = source[r];
        let cols = d.filled_in_row(r);
        for (s0, &j) in cols.iter().enumerate() {
            let slot = s0 + 1;
            let (b, w) = (black[&(r, j)], white[&(r, j)]);
            edge(prev, b, tab.weight(i, j).clone(), Dir::W, Dir::E, EdgeLabel::new(1, r, s0));
            edge(b, w, unit(), Dir::W, Dir::E, EdgeLabel::new(3, r, slot));
            let below = (r + 1..=k).find(|&rr| d.is_filled(rr, j));
            let target = below.map_or(j - 1, |rr| black[&(rr, j)]);
            edge(w, target, unit(), Dir::S, Dir::N, EdgeLabel::new(2, r, slot));
            prev = w;
        }
    }
    LeNetwork::assemble(
        k,
        n,
        d.pivots().to_vec(),
        (1..=k).map(|r| d.filled_in_row(r)).collect(),
        vertices,
        edges,
        0,
    )
}

/// Contracts maximal chains of bivalent internal vertices, multiplying the
/// weights. A chain joining two boundary vertices keeps its first vertex.
pub fn reduce_network(net: &LeNetwork) -> LeNetwork {
    let bivalent = |v: usize| !net.vertices[v].is_boundary() && net.in_edges(v).len() == 1 && net.out_edges(v).len() == 1;
    let mut keep = vec![true; net.vertices.len()];
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for e in &net.edges {
        if bivalent(e.tail) {
            continue;
        }
        let mut chain = vec![e.id];
        let mut head = e.head;
        while bivalent(head) {
            keep[head] = false;
            let next = net.out_edges(head)[0];
            chain.push(next);
            head = net.edges[next].head;
        }
        chains.push(chain);
    }

    let mut kept_bivalent = 0;
    let mut segments: Vec<Vec<usize>> = Vec::new();
    for chain in chains {
        let first = &net.edges[chain[0]];
        let last = &net.edges[*chain.last().unwrap()];
        let both_boundary = net.vertices[first.tail].is_boundary() && net.vertices[last.head].is_boundary();
        if both_boundary && chain.len() > 1 {
            keep[first.head] = true;
            kept_bivalent += 1;
            segments.push(vec![chain[0]]);
            segments.push(chain[1..].to_vec());
        } else {
            segments.push(chain);
        }
    }

    let mut new_id = vec![usize::MAX; net.vertices.len()];
    let mut vertices = Vec::new();
    for v in &net.vertices {
        if keep[v.id] {
            new_id[v.id] = vertices.len();
            vertices.push(Vertex {
                id: vertices.len(),
                ..v.clone()
            });
        }
    }
    let mut edges: Vec<Edge> = segments
        .into_iter()
        .map(|seg| {
            let first = &net.edges[seg[0]];
            let last = &net.edges[*seg.last().unwrap()];
            let mut weight = Rational::one();
            let mut labels = Vec::new();
            for &e in &seg {
                weight *= &net.edges[e].weight;
                labels.extend(net.edges[e].labels.iter().copied());
            }
            Edge {
                id: 0,
                tail: new_id[first.tail],
                head: new_id[last.head],
                weight,
                tail_dir: first.tail_dir,
                head_dir: last.head_dir,
                labels,
            }
        })
        .collect();
    edges.sort_by_key(|e| (e.tail, e.tail_dir));
    LeNetwork::assemble(net.k, net.n, net.pivots.clone(), net.cells.clone(), vertices, edges, kept_bivalent)
}
