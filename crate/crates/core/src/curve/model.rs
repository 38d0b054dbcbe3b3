use std::fmt;

use serde::{Serialize, Serializer};

use super::faces::PlanarMap;
use super::CurveError;
use crate::le::{Dir, LeNetwork, VertexKind};

/// Local affine coordinate of a marked point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coord {
    Zero,
    One,
    Infinity,
    /// Placeholder for the phase κ_j on Γ0.
    Kappa(usize),
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Zero => write!(f, "0"),
            Coord::One => write!(f, "1"),
            Coord::Infinity => write!(f, "inf"),
            Coord::Kappa(j) => write!(f, "kappa_{j}"),
        }
    }
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    /// Γ0, carrying the phases and P0.
    Gamma0,
    /// Γ_{i_r}, next to the boundary source of row r.
    Source { row: usize, pivot: usize },
    /// Γ_{i_r j}, white vertex.
    White {
        row: usize,
        slot: usize,
        pivot: usize,
        column: usize,
    },
    /// Σ_{i_r j}, black vertex.
    Black {
        row: usize,
        slot: usize,
        pivot: usize,
        column: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkedPoint {
    pub label: String,
    /// 1, 2, 3 on vertex components; 0 on Γ0.
    pub role: u8,
    pub coord: Coord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<Dir>,
    /// Index into [`CurveModel::gluings`].
    pub gluing: Option<usize>,
    pub darboux: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Component {
    pub id: usize,
    pub label: String,
    pub kind: ComponentKind,
    /// Network vertex this copy of CP^1 stands for.
    pub vertex: Option<usize>,
    pub points: Vec<MarkedPoint>,
    /// Real arcs (point a, point b, oval) in cyclic order of the coordinate.
    pub arcs: Vec<(usize, usize, usize)>,
}

/// Double point: (component, point) pairs identified by a network edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gluing {
    pub id: usize,
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub edge: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Oval {
    pub id: usize,
    pub label: String,
    /// Filled box (i_r, j_s) naming the oval; None for Ω0.
    pub cell: Option<(usize, usize)>,
    #[serde(skip)]
    pub face: usize,
    /// Arcs (component, point a, point b) on this oval.
    pub arcs: Vec<(usize, usize, usize)>,
}

/// Reducible rational curve modelled on a (possibly reduced) network.
#[derive(Clone, Debug, Serialize)]
pub struct CurveModel {
    pub k: usize,
    pub n: usize,
    pub components: Vec<Component>,
    pub gluings: Vec<Gluing>,
    pub ovals: Vec<Oval>,
    #[serde(skip)]
    pub network: LeNetwork,
    #[serde(skip)]
    pub map: PlanarMap,
    #[serde(skip)]
    component_of_vertex: Vec<Option<usize>>,
}

fn role_dirs(kind: &VertexKind) -> [Dir; 3] {
    match kind {
        VertexKind::White { .. } => [Dir::W, Dir::S, Dir::E],
        _ => [Dir::W, Dir::E, Dir::N],
    }
}

const ROLE_COORDS: [Coord; 3] = [Coord::Zero, Coord::One, Coord::Infinity];

/// Face containing the arc of a three-pointed component between roles `a`
/// and `b` that avoids the third role.
fn arc_face(map: &PlanarMap, v: usize, dirs: [Dir; 3], a: usize, b: usize) -> Option<usize> {
    let third = 3 - a - b;
    let (da, db, dt) = (dirs[a], dirs[b], dirs[third]);
    // walk clockwise from da; if the third direction comes first the arc is db -> da
    let mut d = da.clockwise();
    let mut end = db;
    while d != db {
        if d == dt {
            end = da;
            break;
        }
        d = d.clockwise();
    }
    map.face_at_sector_end(v, end)
}

impl CurveModel {
    pub fn component_of_vertex(&self, v: usize) -> Option<usize> {
        self.component_of_vertex[v]
    }

    pub fn component_by_kind(&self, kind: VertexKind) -> Option<&Component> {
        self.network
            .vertex_of(kind)
            .and_then(|v| self.component_of_vertex[v])
            .map(|c| &self.components[c])
    }

    pub fn gamma0(&self) -> &Component {
        &self.components[0]
    }

    pub fn omega0(&self) -> usize {
        0
    }

    /// Oval containing the real point with coordinate `zeta` on component
    /// `comp`; Γ0 needs the numeric phases. Marked points are rejected.
    pub fn oval_of_point(&self, comp: usize, zeta: f64, kappas: &[f64]) -> Result<usize, CurveError> {
        let c = &self.components[comp];
        let on_marked = || CurveError::OnMarkedPoint {
            component: c.label.clone(),
            zeta,
        };
        if c.kind == ComponentKind::Gamma0 {
            if zeta.is_infinite() || zeta < kappas[0] || zeta > kappas[self.n - 1] {
                return Ok(self.omega0());
            }
            if kappas.contains(&zeta) {
                return Err(on_marked());
            }
            let j = kappas.iter().rposition(|&kj| kj < zeta).expect("zeta inside the phase range");
            return Ok(c.arcs[j].2);
        }
        let arc = if zeta.is_infinite() || zeta == 0.0 || zeta == 1.0 {
            return Err(on_marked());
        } else if zeta > 0.0 && zeta < 1.0 {
            0
        } else if zeta > 1.0 {
            1
        } else {
            2
        };
        Ok(c.arcs[arc].2)
    }

    pub fn oval_by_cell(&self, i: usize, j: usize) -> Option<usize> {
        self.ovals.iter().position(|o| o.cell == Some((i, j)))
    }

    /// Marked points lying on the boundary of each oval.
    pub fn oval_census(&self) -> Vec<OvalCensus> {
        self.ovals
            .iter()
            .map(|o| {
                let mut points: Vec<(usize, usize)> = Vec::new();
                for &(c, a, b) in &o.arcs {
                    for p in [a, b] {
                        if !points.contains(&(c, p)) {
                            points.push((c, p));
                        }
                    }
                }
                OvalCensus {
                    oval: o.label.clone(),
                    marked_points: points
                        .into_iter()
                        .map(|(c, p)| format!("{}:{}", self.components[c].label, self.components[c].points[p].label))
                        .collect(),
                }
            })
            .collect()
    }

    pub fn darboux_points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.components
            .iter()
            .flat_map(|c| c.points.iter().enumerate().filter(|(_, p)| p.darboux).map(move |(i, _)| (c.id, i)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OvalCensus {
    pub oval: String,
    pub marked_points: Vec<String>,
}

fn component_label(kind: &ComponentKind) -> String {
    match kind {
        ComponentKind::Gamma0 => "Gamma_0".into(),
        ComponentKind::Source { pivot, .. } => format!("Gamma_{pivot}"),
        ComponentKind::White { pivot, column, .. } => format!("Gamma_{pivot},{column}"),
        ComponentKind::Black { pivot, column, .. } => format!("Sigma_{pivot},{column}"),
    }
}

/// Builds Γ from the network N or its reduction; never from the modified
/// network.
pub fn build_curve(net: &LeNetwork) -> Result<CurveModel, CurveError> {
    if net.vertices.iter().any(|v| matches!(v.kind, VertexKind::Darboux { .. })) {
        return Err(CurveError::Structure(
            "curves are built from N or its reduction, not the modified network".into(),
        ));
    }
    let map = PlanarMap::new(net);
    if !map.exterior_is_boundary_only() {
        return Err(CurveError::Structure(
            "exterior face is not bounded by the boundary circle alone".into(),
        ));
    }
    let n = net.n;

    // ovals: Ω0 first, then one per filled box in row-major order
    let mut face_to_oval = vec![usize::MAX; map.faces.len()];
    let mut ovals = vec![Oval {
        id: 0,
        label: "Omega_0".into(),
        cell: None,
        face: map.omega0,
        arcs: Vec::new(),
    }];
    face_to_oval[map.omega0] = 0;
    let cells = net
        .cells
        .iter()
        .enumerate()
        .flat_map(|(r, cols)| cols.iter().enumerate().map(move |(s, &j)| (r + 1, s + 1, j)));
    for (row, slot, column) in cells {
        let label = crate::le::EdgeLabel::new(1, row, slot - 1);
        let edge = net
            .edge_with_label(label)
            .ok_or_else(|| CurveError::Structure(format!("no edge carries {label}")))?;
        let face = map.left_of_edge(edge.id);
        if face_to_oval[face] != usize::MAX || face == map.exterior {
            return Err(CurveError::Structure(format!("face below {label} already labelled")));
        }
        let pivot = net.pivots[row - 1];
        face_to_oval[face] = ovals.len();
        ovals.push(Oval {
            id: ovals.len(),
            label: format!("Omega_{pivot},{column}"),
            cell: Some((pivot, column)),
            face,
            arcs: Vec::new(),
        });
    }
    if ovals.len() != map.interior_faces() {
        return Err(CurveError::Structure(format!(
            "{} labelled ovals but {} interior faces",
            ovals.len(),
            map.interior_faces()
        )));
    }
    let oval_of_face = |f: usize| -> Result<usize, CurveError> {
        match face_to_oval[f] {
            usize::MAX => Err(CurveError::Structure(format!("face {f} has no oval label"))),
            o => Ok(o),
        }
    };

    // Γ0: κ_1..κ_n then P0
    let mut gamma0 = Component {
        id: 0,
        label: "Gamma_0".into(),
        kind: ComponentKind::Gamma0,
        vertex: None,
        points: (1..=n)
            .map(|j| MarkedPoint {
                label: format!("kappa_{j}"),
                role: 0,
                coord: Coord::Kappa(j),
                dir: None,
                gluing: None,
                darboux: false,
            })
            .collect(),
        arcs: Vec::new(),
    };
    gamma0.points.push(MarkedPoint {
        label: "P_0".into(),
        role: 0,
        coord: Coord::Infinity,
        dir: None,
        gluing: None,
        darboux: false,
    });
    for j in 1..n {
        gamma0.arcs.push((j - 1, j, oval_of_face(map.inner_face_of_arc(j))?));
    }
    gamma0.arcs.push((n - 1, n, 0));
    gamma0.arcs.push((n, 0, 0));

    let mut components = vec![gamma0];
    let mut component_of_vertex = vec![None; net.vertices.len()];
    for v in net.internal_vertices() {
        let pivot = |row: usize| net.pivots[row - 1];
        let kind = match v.kind {
            VertexKind::Source { row } => ComponentKind::Source { row, pivot: pivot(row) },
            VertexKind::White { row, slot, column } => ComponentKind::White {
                row,
                slot,
                pivot: pivot(row),
                column,
            },
            VertexKind::Black { row, slot, column } => ComponentKind::Black {
                row,
                slot,
                pivot: pivot(row),
                column,
            },
            VertexKind::Boundary { .. } | VertexKind::Darboux { .. } => unreachable!("internal vertex"),
        };
        let dirs = role_dirs(&v.kind);
        let suffix = match kind {
            ComponentKind::Source { pivot, .. } => format!("{pivot}"),
            ComponentKind::White { pivot, column, .. } | ComponentKind::Black { pivot, column, .. } => {
                format!("{pivot},{column}")
            }
            ComponentKind::Gamma0 => unreachable!(),
        };
        let points = (0..3)
            .map(|m| {
                let darboux = matches!(kind, ComponentKind::Source { .. }) && m == 2;
                let letter = if matches!(kind, ComponentKind::Black { .. }) { "Q" } else { "P" };
                MarkedPoint {
                    label: if darboux {
                        format!("D_{suffix}")
                    } else {
                        format!("{letter}{}_{suffix}", m + 1)
                    },
                    role: m as u8 + 1,
                    coord: ROLE_COORDS[m],
                    dir: Some(dirs[m]),
                    gluing: None,
                    darboux,
                }
            })
            .collect();
        let mut arcs = Vec::new();
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            let face = arc_face(&map, v.id, dirs, a, b).ok_or_else(|| CurveError::Structure(format!("vertex {} has no edges", v.id)))?;
            arcs.push((a, b, oval_of_face(face)?));
        }
        let id = components.len();
        component_of_vertex[v.id] = Some(id);
        components.push(Component {
            id,
            label: component_label(&kind),
            kind,
            vertex: Some(v.id),
            points,
            arcs,
        });
    }

    // double points, one per network edge
    let mut gluings = Vec::new();
    let endpoint = |v: usize, dir: Dir, comps: &[Component]| -> Result<(usize, usize), CurveError> {
        if let VertexKind::Boundary { index } = net.vertices[v].kind {
            return Ok((0, index - 1));
        }
        let c = component_of_vertex[v].expect("internal vertex has a component");
        let p = comps[c]
            .points
            .iter()
            .position(|p| p.dir == Some(dir))
            .ok_or_else(|| CurveError::Structure(format!("no marked point at {dir:?} on {}", comps[c].label)))?;
        Ok((c, p))
    };
    for e in &net.edges {
        let a = endpoint(e.tail, e.tail_dir, &components)?;
        let b = endpoint(e.head, e.head_dir, &components)?;
        if a.0 == b.0 {
            return Err(CurveError::Structure(format!("edge {} glues a component to itself", e.id)));
        }
        let id = gluings.len();
        for (c, p) in [a, b] {
            let slot = &mut components[c].points[p].gluing;
            if slot.is_some() {
                return Err(CurveError::Structure(format!(
                    "marked point glued twice on {}",
                    components[c].label
                )));
            }
            *slot = Some(id);
        }
        gluings.push(Gluing { id, a, b, edge: e.id });
    }

    for c in &components {
        for &(a, b, o) in &c.arcs {
            ovals[o].arcs.push((c.id, a, b));
        }
    }

    Ok(CurveModel {
        k: net.k,
        n,
        components,
        gluings,
        ovals,
        network: net.clone(),
        map,
        component_of_vertex,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenusCounts {
    pub components: i64,
    pub double_points: i64,
    pub genus: i64,
}

/// Counts for the reduced curve of an irreducible cell: 2d−n+n_b+1
/// components, 3d−n+n_b double points, genus d.
pub fn genus_accounting(d: usize, n: usize, n_b: usize) -> GenusCounts {
    let (d, n, nb) = (d as i64, n as i64, n_b as i64);
    let components = 2 * d - n + nb + 1;
    let double_points = 3 * d - n + nb;
    GenusCounts {
        components,
        double_points,
        genus: double_points - components + 1,
    }
}

/// Counts read off an actual curve; the genus is the first Betti number of
/// the dual graph.
pub fn observed_counts(curve: &CurveModel) -> GenusCounts {
    let components = curve.components.len() as i64;
    let double_points = curve.gluings.len() as i64;
    GenusCounts {
        components,
        double_points,
        genus: double_points - components + 1,
    }
}
