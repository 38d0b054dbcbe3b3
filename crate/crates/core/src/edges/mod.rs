//! The modified network N′ and its edge vectors.
//!
//! N′ is the Le-network with each boundary source turned into a sink: the
//! edge b_{i_r} → V_{i_r} is reversed and a Darboux vertex V^(D)_{i_r} feeds
//! V_{i_r} through a unit edge. Edge vectors are built row by row from the
//! transition matrices C^[r−1,r]; a dynamic program over directed paths is
//! kept alongside as an independent check.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{format_rational, Rational, RationalMatrix};
use crate::le::{boundary_measurement, build_network, Color, Dir, Edge, EdgeLabel, LeNetwork, LeTableau, Vertex, VertexKind};


/// Pivot and weighted filled columns of one row.
#[derive(Clone, Debug)]
struct RowWeights {
    pivot: usize,
    cells: Vec<(usize, Rational)>,
}

fn rows_of_tableau(tab: &LeTableau) -> Vec<RowWeights> {
    let d = tab.diagram();
    (1..=d.k())
        .map(|r| {
            let pivot = d.pivot(r);
            let cells = d.filled_in_row(r).into_iter().map(|j| (j, tab.weight(pivot, j).clone())).collect();
            RowWeights { pivot, cells }
        })
        .collect()
}

fn rows_of_network(net: &LeNetwork) -> Vec<RowWeights> {
    (1..=net.k)
        .map(|r| {
            let cells = net.cells[r - 1]
                .iter()
                .enumerate()
                .map(|(s0, &j)| {
                    let e = net
                        .edge_with_label(EdgeLabel::new(1, r, s0))
                        .expect("horizontal edge of a filled box");
                    (j, e.weight.clone())
                })
                .collect();
            RowWeights {
                pivot: net.pivots[r - 1],
                cells,
            }
        })
        .collect()
}

/// Prefix products c^r_j of the horizontal weights, by column.
fn prefix_weights(row: &RowWeights) -> Vec<(usize, Rational)> {
    let mut acc = Rational::one();
    row.cells
        .iter()
        .map(|(j, w)| {
            acc = &acc * w;
            (*j, acc.clone())
        })
        .collect()
}

fn transition_from_rows(rows: &[RowWeights], n: usize, r: usize) -> RationalMatrix {
    let row = &rows[r - 1];
    let i = row.pivot;
    let prefix = prefix_weights(row);
    let mut c = RationalMatrix::zeros(n, n);
    for l in 1..=n {
        if l < i {
            c.set(l - 1, l - 1, Rational::one());
        } else if l == i {
            c.set(l - 1, l - 1, -Rational::one());
            for (j, p) in &prefix {
                c.set(l - 1, j - 1, -p.clone());
            }
        } else if let Some(pos) = row.cells.iter().position(|(j, _)| *j == l) {
            // ŵ_{lj}: product of the weights after l up to j, ŵ_{ll} = 1
            let mut acc = Rational::one();
            c.set(l - 1, l - 1, -Rational::one());
            for (j, w) in &row.cells[pos + 1..] {
                acc = &acc * w;
                c.set(l - 1, j - 1, -acc.clone());
            }
        } else {
            c.set(l - 1, l - 1, -Rational::one());
        }
    }
    c
}

fn coefficients_from_rows(rows: &[RowWeights], n: usize, r: usize) -> Vec<Rational> {
    let row = &rows[r - 1];
    let mut c = vec![Rational::zero(); n];
    c[row.pivot - 1] = Rational::one();
    for (j, p) in prefix_weights(row) {
        c[j - 1] = p;
    }
    c
}

fn chain_from_rows(rows: &[RowWeights], n: usize) -> Vec<RationalMatrix> {
    let k = rows.len();
    let mut bases = vec![RationalMatrix::identity(n); k];
    for r in (1..k).rev() {
        bases[r - 1] = transition_from_rows(rows, n, r + 1).mul(&bases[r]).expect("square matrices");
    }
    bases
}

/// C^[r−1,r] for 1 ≤ r ≤ k (upper triangular, n × n).
pub fn transition_matrix(tab: &LeTableau, r: usize) -> RationalMatrix {
    transition_from_rows(&rows_of_tableau(tab), tab.n(), r)
}

/// Ê^(1), …, Ê^(k) (index r − 1), with Ê^(k) = I and Ê^(r−1) = C^[r−1,r] Ê^(r).
pub fn basis_chain(tab: &LeTableau) -> Vec<RationalMatrix> {
    chain_from_rows(&rows_of_tableau(tab), tab.n())
}

/// ĉ^(r): 1 at the pivot, the path weight b_{i_r} → V_{i_r l} at filled l.
pub fn coefficient_vector(tab: &LeTableau, r: usize) -> Vec<Rational> {
    coefficients_from_rows(&rows_of_tableau(tab), tab.n(), r)
}

/// The network N′. Base vertex and edge ids are preserved; the k Darboux
/// vertices and edges are appended in row order.
#[derive(Clone, Debug, Serialize)]
pub struct ModifiedNetwork {
    pub base: LeNetwork,
    pub network: LeNetwork,
}

impl ModifiedNetwork {
    pub fn k(&self) -> usize {
        self.base.k
    }

    pub fn n(&self) -> usize {
        self.base.n
    }

    pub fn darboux_vertex(&self, r: usize) -> usize {
        self.network.vertex_of(VertexKind::Darboux { row: r }).expect("Darboux vertex")
    }

    /// Id of e^(3)_{i_r}.
    pub fn darboux_edge(&self, r: usize) -> usize {
        self.base.edges.len() + r - 1
    }

    pub fn edge(&self, label: EdgeLabel) -> Option<&Edge> {
        self.network.edge_with_label(label)
    }
}

pub fn modify_network(net: &LeNetwork) -> ModifiedNetwork {
    let mut vertices = net.vertices.clone();
    let mut edges = net.edges.clone();
    for e in edges.iter_mut() {
        if e.labels.iter().any(|l| l.kind == 2 && l.slot == 0) {
            std::mem::swap(&mut e.tail, &mut e.head);
            std::mem::swap(&mut e.tail_dir, &mut e.head_dir);
        }
    }
    for r in 1..=net.k {
        let id = vertices.len();
        vertices.push(Vertex {
            id,
            color: Color::White,
            kind: VertexKind::Darboux { row: r },
        });
        let source = net.vertex_of(VertexKind::Source { row: r }).expect("row source");
        edges.push(Edge {
            id: 0,
            tail: id,
            head: source,
            weight: Rational::one(),
            tail_dir: Dir::S,
            head_dir: Dir::N,
            labels: vec![EdgeLabel::new(3, r, 0)],
        });
    }
    let network = LeNetwork::assemble(
        net.k,
        net.n,
        net.pivots.clone(),
        net.cells.clone(),
        vertices,
        edges,
        net.kept_bivalent,
    );
    ModifiedNetwork {
        base: net.clone(),
        network,
    }
}

pub fn modify_tableau(tab: &LeTableau) -> ModifiedNetwork {
    modify_network(&build_network(tab))
}

/// Edge vectors of N′ together with the recursion data that produced them.
#[derive(Clone, Debug)]
pub struct EdgeVectorSystem {
    /// Indexed by edge id of N′.
    pub vectors: Vec<Vec<Rational>>,
    /// C^[r−1,r] at index r − 1.
    pub transitions: Vec<RationalMatrix>,
    /// Ê^(r) at index r − 1.
    pub bases: Vec<RationalMatrix>,
    /// ĉ^(r) at index r − 1.
    pub coefficients: Vec<Vec<Rational>>,
    labels: BTreeMap<EdgeLabel, usize>,
}

fn axpy(acc: &mut [Rational], a: &Rational, x: &[Rational]) {
    for (y, v) in acc.iter_mut().zip(x) {
        *y += a * v;
    }
}

pub fn edge_vector_system(mn: &ModifiedNetwork) -> EdgeVectorSystem {
    let net = &mn.network;
    let n = mn.n();
    let rows = rows_of_network(&mn.base);
    let bases = chain_from_rows(&rows, n);
    let transitions = (1..=mn.k()).map(|r| transition_from_rows(&rows, n, r)).collect();
    let coefficients = (1..=mn.k()).map(|r| coefficients_from_rows(&rows, n, r)).collect();

    let labels: BTreeMap<EdgeLabel, usize> = net.edges.iter().flat_map(|e| e.labels.iter().map(move |&l| (l, e.id))).collect();
    let mut vectors = vec![vec![Rational::zero(); n]; net.edges.len()];
    for (r0, row) in rows.iter().enumerate() {
        let r = r0 + 1;
        let basis = &bases[r0];
        let mut next: Option<(Rational, Vec<Rational>)> = None;
        for s in (1..=row.cells.len()).rev() {
            let (j, w) = &row.cells[s - 1];
            let vertical = basis.row_vec(j - 1);
            let mut e3 = vertical.clone();
            if let Some((w_next, e3_next)) = next.take() {
                let mut e1 = vec![Rational::zero(); n];
                axpy(&mut e1, &w_next, &e3_next);
                for (a, b) in e3.iter_mut().zip(&e1) {
                    *a += b;
                }
                vectors[labels[&EdgeLabel::new(1, r, s)]] = e1;
            }
            vectors[labels[&EdgeLabel::new(2, r, s)]] = vertical;
            vectors[labels[&EdgeLabel::new(3, r, s)]] = e3.clone();
            next = Some((w.clone(), e3));
        }
        let mut unit = vec![Rational::zero(); n];
        unit[row.pivot - 1] = Rational::one();
        let mut darboux = unit.clone();
        if let Some((w_next, e3_next)) = next {
            let mut e1 = vec![Rational::zero(); n];
            axpy(&mut e1, &w_next, &e3_next);
            for (a, b) in darboux.iter_mut().zip(&e1) {
                *a += b;
            }
            vectors[labels[&EdgeLabel::new(1, r, 0)]] = e1;
        }
        vectors[labels[&EdgeLabel::new(2, r, 0)]] = unit;
        vectors[labels[&EdgeLabel::new(3, r, 0)]] = darboux;
    }
    EdgeVectorSystem {
        vectors,
        transitions,
        bases,
        coefficients,
        labels,
    }
}

impl EdgeVectorSystem {
    pub fn vector(&self, edge: usize) -> &[Rational] {
        &self.vectors[edge]
    }

    /// 𝔈^(m)_{i_r j_s} for the label e^(m)_{r,s}.
    pub fn by_label(&self, label: EdgeLabel) -> Option<&[Rational]> {
        self.labels.get(&label).map(|&e| self.vectors[e].as_slice())
    }

    /// 𝔈^(3)_{i_r}, which is the r-th RREF row.
    pub fn darboux_vector(&self, r: usize) -> &[Rational] {
        self.by_label(EdgeLabel::new(3, r, 0)).expect("Darboux edge")
    }

    pub fn to_json(&self, mn: &ModifiedNetwork) -> serde_json::Value {
        let edges: Vec<_> = mn
            .network
            .edges
            .iter()
            .map(|e| {
                serde_json::json!({
                    "id": e.id,
                    "labels": e.labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "tail": e.tail,
                    "head": e.head,
                    "vector": self.vectors[e.id].iter().map(format_rational).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({ "k": mn.k(), "n": mn.n(), "edges": edges })
    }
}

/// Largest row r whose Darboux vertex reaches each edge of N′ (0 if none).
fn highest_darboux_row(mn: &ModifiedNetwork) -> Vec<usize> {
    let net = &mn.network;
    let mut best = vec![0; net.edges.len()];
    for r in 1..=mn.k() {
        let sums = net.path_sums_from(mn.darboux_vertex(r));
        for e in &net.edges {
            if !sums[e.tail].is_zero() {
                best[e.id] = r;
            }
        }
    }
    best
}

/// Signed path sums from every edge of N′ to each boundary sink.
pub fn path_sum_vectors(mn: &ModifiedNetwork) -> Vec<Vec<Rational>> {
    let net = &mn.network;
    let n = mn.n();
    let order = net.topological_order().expect("N′ is acyclic");
    let mut at_vertex = vec![vec![Rational::zero(); n]; net.vertices.len()];
    let mut at_edge = vec![vec![Rational::zero(); n]; net.edges.len()];
    for &v in order.iter().rev() {
        if let VertexKind::Boundary { index } = net.vertices[v].kind {
            at_vertex[v][index - 1] = Rational::one();
            continue;
        }
        let mut acc = vec![Rational::zero(); n];
        for &e in net.out_edges(v) {
            let head = net.edges[e].head;
            let mut vec_e = vec![Rational::zero(); n];
            axpy(&mut vec_e, &net.edges[e].weight, &at_vertex[head]);
            for (a, b) in acc.iter_mut().zip(&vec_e) {
                *a += b;
            }
            at_edge[e] = vec_e;
        }
        at_vertex[v] = acc;
    }
    let rows = highest_darboux_row(mn);
    for (e, v) in at_edge.iter_mut().enumerate() {
        let r = rows[e];
        if r == 0 {
            v.iter_mut().for_each(|x| *x = Rational::zero());
            continue;
        }
        let i = mn.base.pivots[r - 1];
        for (j0, x) in v.iter_mut().enumerate() {
            let sigma = mn.base.pivots.iter().filter(|&&p| i < p && p < j0 + 1).count();
            if sigma % 2 == 1 {
                *x = -x.clone();
            }
        }
    }
    at_edge
}

/// Oracle value for a single edge.
pub fn path_sum_vector(mn: &ModifiedNetwork, edge: usize) -> Vec<Rational> {
    path_sum_vectors(mn).swap_remove(edge)
}

/// E^(r)[l]: signed path sums from V_{i_r l} going down (the vertical edge of
/// the filled box), or the unit vector at the pivot for l = i_r.
pub fn row_entry_vector(mn: &ModifiedNetwork, r: usize, l: usize) -> Vec<Rational> {
    let label = if l == mn.base.pivots[r - 1] {
        EdgeLabel::new(2, r, 0)
    } else {
        let slot = mn.base.cells[r - 1].iter().position(|&j| j == l).expect("filled column") + 1;
        EdgeLabel::new(2, r, slot)
    };
    let e = mn.edge(label).expect("vertical edge").id;
    path_sum_vector(mn, e)
}

/// Sum of ĉ^r_l Ê^(r)[l], which should reproduce A[r].
pub fn reconstruct_row(sys: &EdgeVectorSystem, r: usize) -> Vec<Rational> {
    let basis = &sys.bases[r - 1];
    let mut acc = vec![Rational::zero(); basis.cols()];
    for (l0, c) in sys.coefficients[r - 1].iter().enumerate() {
        if !c.is_zero() {
            axpy(&mut acc, c, basis.row(l0));
        }
    }
    acc
}

/// RREF rows of the boundary measurement, for comparison.
pub fn rref_rows(mn: &ModifiedNetwork) -> Vec<Vec<Rational>> {
    boundary_measurement(&mn.base).matrix().to_rows()
}
