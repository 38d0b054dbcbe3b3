//! Faces of the planar map formed by a network together with the boundary
//! circle through b_1..b_n.

use crate::le::{Dir, LeNetwork};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DartKind {
    /// Network edge traversed along (`forward`) or against its orientation.
    Edge { edge: usize, forward: bool },
    /// Boundary arc between b_j and b_{j+1} (j = n is the outer arc to b_1).
    Arc { arc: usize, forward: bool },
}

#[derive(Clone, Copy, Debug)]
pub struct Dart {
    pub from: usize,
    pub to: usize,
    pub kind: DartKind,
}

/// Rotation system and face cycles. Darts come in pairs (2i, 2i+1).
#[derive(Clone, Debug)]
pub struct PlanarMap {
    pub darts: Vec<Dart>,
    rotation: Vec<Vec<usize>>,
    pub face_of: Vec<usize>,
    pub faces: Vec<Vec<usize>>,
    pub exterior: usize,
    pub omega0: usize,
    edge_dart: Vec<usize>,
    arc_dart: Vec<usize>,
    /// Clockwise direction of each dart at its origin (None on boundary vertices).
    dir_from: Vec<Option<Dir>>,
}

impl PlanarMap {
    pub fn new(net: &LeNetwork) -> Self {
        let n = net.n;
        let mut darts = Vec::new();
        let mut dir_from = Vec::new();
        let mut edge_dart = Vec::new();
        for e in &net.edges {
            edge_dart.push(darts.len());
            darts.push(Dart {
                from: e.tail,
                to: e.head,
                kind: DartKind::Edge { edge: e.id, forward: true },
            });
            dir_from.push(Some(e.tail_dir));
            darts.push(Dart {
                from: e.head,
                to: e.tail,
                kind: DartKind::Edge {
                    edge: e.id,
                    forward: false,
                },
            });
            dir_from.push(Some(e.head_dir));
        }
        let mut arc_dart = Vec::new();
        for j in 1..=n {
            let (a, b) = (net.boundary(j), net.boundary(j % n + 1));
            arc_dart.push(darts.len());
            darts.push(Dart {
                from: a,
                to: b,
                kind: DartKind::Arc { arc: j, forward: true },
            });
            darts.push(Dart {
                from: b,
                to: a,
                kind: DartKind::Arc { arc: j, forward: false },
            });
            dir_from.extend([None, None]);
        }

        let mut rotation = vec![Vec::new(); net.vertices.len()];
        for v in &net.vertices {
            if v.is_boundary() {
                continue;
            }
            let mut out: Vec<usize> = (0..darts.len()).filter(|&d| darts[d].from == v.id).collect();
            out.sort_by_key(|&d| dir_from[d].map(Dir::index));
            rotation[v.id] = out;
        }
        // clockwise at b_j: toward b_{j-1}, toward b_{j+1}, into the disk
        for j in 1..=n {
            let b = net.boundary(j);
            let prev_arc = if j == 1 { n } else { j - 1 };
            let mut rot = vec![arc_dart[prev_arc - 1] + 1, arc_dart[j - 1]];
            rot.extend(net.out_edges(b).iter().map(|&e| edge_dart[e]));
            rot.extend(net.in_edges(b).iter().map(|&e| edge_dart[e] + 1));
            rotation[b] = rot;
        }

        let mut map = Self {
            darts,
            rotation,
            face_of: Vec::new(),
            faces: Vec::new(),
            exterior: 0,
            omega0: 0,
            edge_dart,
            arc_dart,
            dir_from,
        };
        map.trace_faces();
        map.exterior = map.face_of[map.arc_dart[0]];
        map.omega0 = map.face_of[map.arc_dart[n - 1] + 1];
        map
    }

    fn next(&self, d: usize) -> usize {
        let v = self.darts[d].to;
        let back = d ^ 1;
        let rot = &self.rotation[v];
        let pos = rot.iter().position(|&x| x == back).expect("rotation contains reverse dart");
        rot[(pos + 1) % rot.len()]
    }

    fn trace_faces(&mut self) {
        self.face_of = vec![usize::MAX; self.darts.len()];
        for start in 0..self.darts.len() {
            if self.face_of[start] != usize::MAX {
                continue;
            }
            let id = self.faces.len();
            let mut cycle = Vec::new();
            let mut d = start;
            loop {
                self.face_of[d] = id;
                cycle.push(d);
                d = self.next(d);
                if d == start {
                    break;
                }
            }
            self.faces.push(cycle);
        }
    }

    /// Face on the left of an edge traversed tail to head.
    pub fn left_of_edge(&self, edge: usize) -> usize {
        self.face_of[self.edge_dart[edge]]
    }

    pub fn right_of_edge(&self, edge: usize) -> usize {
        self.face_of[self.edge_dart[edge] + 1]
    }

    /// Face inside the disk along the boundary arc b_j to b_{j+1}.
    pub fn inner_face_of_arc(&self, j: usize) -> usize {
        self.face_of[self.arc_dart[j - 1] + 1]
    }

    /// Face holding the sector of internal vertex `v` that ends at direction
    /// `end` (clockwise), i.e. the face of the first dart leaving `v` at or
    /// clockwise after `end`.
    pub fn face_at_sector_end(&self, v: usize, end: Dir) -> Option<usize> {
        let mut d = end;
        for _ in 0..4 {
            if let Some(&dart) = self.rotation[v].iter().find(|&&x| self.dir_from[x] == Some(d)) {
                return Some(self.face_of[dart]);
            }
            d = d.clockwise();
        }
        None
    }

    /// The exterior face should consist of the n forward boundary arcs.
    pub fn exterior_is_boundary_only(&self) -> bool {
        self.faces[self.exterior]
            .iter()
            .all(|&d| matches!(self.darts[d].kind, DartKind::Arc { forward: true, .. }))
    }

    pub fn interior_faces(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn euler_characteristic(&self, vertices: usize) -> i64 {
        vertices as i64 - (self.darts.len() / 2) as i64 + self.faces.len() as i64
    }
}
