use serde::Serialize;

use super::waves::{EdgeWaveField, NetworkDivisor, WaveVariant};
use super::DivisorError;
use crate::curve::{ComponentKind, CurveModel};
use crate::edges::ModifiedNetwork;
use crate::le::EdgeLabel;
use crate::soliton::{theta, SatoDivisor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DivisorKind {
    Vacuum,
    Sato,
    Kp,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisorPoint {
    pub component: usize,
    pub component_label: String,
    pub zeta: f64,
    pub oval: usize,
    pub oval_label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveDivisor {
    pub kind: DivisorKind,
    pub points: Vec<DivisorPoint>,
}

impl CurveDivisor {
    pub fn degree(&self) -> usize {
        self.points.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Divisors {
    pub vacuum: CurveDivisor,
    pub sato: CurveDivisor,
    pub kp: CurveDivisor,
}

fn place(curve: &CurveModel, comp: usize, zeta: f64, kappa: &[f64]) -> Result<DivisorPoint, DivisorError> {
    let oval = curve.oval_of_point(comp, zeta, kappa)?;
    Ok(DivisorPoint {
        component: comp,
        component_label: curve.components[comp].label.clone(),
        zeta,
        oval,
        oval_label: curve.ovals[oval].label.clone(),
    })
}

/// Places the network divisor numbers on their components and the Sato
/// roots on Γ0. The curve must be built from the base network of N′.
pub fn assemble_divisors(nd: &NetworkDivisor, curve: &CurveModel, sato: &SatoDivisor, kappa: &[f64]) -> Result<Divisors, DivisorError> {
    let on_curve = |variant| -> Result<Vec<DivisorPoint>, DivisorError> {
        nd.of(variant)
            .map(|e| {
                let comp = curve
                    .component_of_vertex(e.vertex)
                    .ok_or_else(|| DivisorError::Degree(format!("vertex {} has no component", e.vertex)))?;
                place(curve, comp, e.gamma, kappa)
            })
            .collect()
    };
    let vacuum = on_curve(WaveVariant::Vacuum)?;
    let sato_points = sato
        .roots
        .iter()
        .map(|&z| place(curve, 0, z, kappa))
        .collect::<Result<Vec<_>, _>>()?;
    let mut kp = on_curve(WaveVariant::Dressed)?;
    kp.extend(sato_points.iter().cloned());

    let g: usize = curve.network.cells.iter().map(Vec::len).sum();
    let k_red = curve.network.cells.iter().filter(|c| !c.is_empty()).count();
    if vacuum.len() != g {
        return Err(DivisorError::Degree(format!(
            "vacuum divisor has {} points, expected {g}",
            vacuum.len()
        )));
    }
    if sato_points.len() != k_red {
        return Err(DivisorError::Degree(format!(
            "Sato divisor has {} points, expected {k_red}",
            sato_points.len()
        )));
    }
    if kp.len() != g {
        return Err(DivisorError::Degree(format!("KP divisor has {} points, expected {g}", kp.len())));
    }
    Ok(Divisors {
        vacuum: CurveDivisor {
            kind: DivisorKind::Vacuum,
            points: vacuum,
        },
        sato: CurveDivisor {
            kind: DivisorKind::Sato,
            points: sato_points,
        },
        kp: CurveDivisor {
            kind: DivisorKind::Kp,
            points: kp,
        },
    })
}

/// Oval holding the Darboux point (ζ = ∞) of a source component.
pub fn darboux_oval(curve: &CurveModel, comp: usize) -> usize {
    curve.components[comp].arcs[1].2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OvalParity {
    pub oval: usize,
    pub label: String,
    pub poles: usize,
    pub darboux: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub ovals: Vec<OvalParity>,
    pub violations: Vec<String>,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Poles plus Darboux points must be odd on finite ovals; on Ω0 the same
/// count minus k must be even.
pub fn parity_check(vacuum: &CurveDivisor, curve: &CurveModel) -> ParityReport {
    let mut poles = vec![0usize; curve.ovals.len()];
    for p in &vacuum.points {
        poles[p.oval] += 1;
    }
    let mut darboux = vec![0usize; curve.ovals.len()];
    for (comp, _) in curve.darboux_points() {
        darboux[darboux_oval(curve, comp)] += 1;
    }
    let mut ovals = Vec::new();
    let mut violations = Vec::new();
    for o in &curve.ovals {
        let total = poles[o.id] + darboux[o.id];
        let ok = if o.id == curve.omega0() {
            (total + curve.k).is_multiple_of(2)
        } else {
            total % 2 == 1
        };
        if !ok {
            violations.push(format!("{}: {} poles, {} Darboux points", o.label, poles[o.id], darboux[o.id]));
        }
        ovals.push(OvalParity {
            oval: o.id,
            label: o.label.clone(),
            poles: poles[o.id],
            darboux: darboux[o.id],
            ok,
        });
    }
    ParityReport { ovals, violations }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OvalCount {
    pub oval: usize,
    pub label: String,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OvalCountReport {
    pub ovals: Vec<OvalCount>,
    pub violations: Vec<String>,
}

impl OvalCountReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exactly one KP divisor point in each finite oval and none in Ω0.
pub fn kp_oval_check(kp: &CurveDivisor, curve: &CurveModel) -> OvalCountReport {
    let mut counts = vec![0usize; curve.ovals.len()];
    for p in &kp.points {
        counts[p.oval] += 1;
    }
    let mut violations = Vec::new();
    let ovals = curve
        .ovals
        .iter()
        .map(|o| {
            let want = usize::from(o.id != curve.omega0());
            if counts[o.id] != want {
                violations.push(format!("{} holds {} points, expected {want}", o.label, counts[o.id]));
            }
            OvalCount {
                oval: o.id,
                label: o.label.clone(),
                points: counts[o.id],
            }
        })
        .collect();
    OvalCountReport { ovals, violations }
}

fn gamma0_wave(zeta: f64, field: &EdgeWaveField, field0: &EdgeWaveField) -> Result<f64, DivisorError> {
    let pole = || DivisorError::Pole {
        component: "Gamma_0".into(),
        zeta,
    };
    if zeta.is_infinite() {
        return Err(pole());
    }
    let shift = theta(zeta, &field.t) - theta(zeta, &field0.t);
    match field.variant {
        WaveVariant::Vacuum => Ok(shift.exp()),
        WaveVariant::Dressed => {
            let (pi, pi0) = field
                .dressing
                .as_ref()
                .zip(field0.dressing.as_ref())
                .ok_or_else(|| DivisorError::Undefined("dressed field without its dressing factor".into()))?;
            let (num, den) = (pi.eval(zeta), pi0.eval(zeta));
            if den == 0.0 {
                return Err(if num == 0.0 {
                    DivisorError::Undefined(format!("dressed wave vanishes identically at zeta = {zeta}"))
                } else {
                    pole()
                });
            }
            Ok(num / den * shift.exp())
        }
    }
}

/// Normalised vacuum or KP wave function at the point ζ of a component
/// (ζ = ±∞ allowed). `field` is taken at t, `field0` at the normalisation time.
pub fn wave_on_curve(
    curve: &CurveModel,
    mn: &ModifiedNetwork,
    nd: &NetworkDivisor,
    comp: usize,
    zeta: f64,
    field: &EdgeWaveField,
    field0: &EdgeWaveField,
) -> Result<f64, DivisorError> {
    let c = &curve.components[comp];
    let Some(v) = c.vertex else {
        return gamma0_wave(zeta, field, field0);
    };
    let (row, slot) = match c.kind {
        ComponentKind::Source { row, .. } => (row, 0),
        ComponentKind::White { row, slot, .. } => (row, slot),
        _ => (0, 0),
    };
    if let Some(entry) = nd.find(v, field.variant) {
        let edge = |kind| mn.edge(EdgeLabel::new(kind, row, slot)).expect("edge at a trivalent white").id;
        let (e1, e2, e3) = (edge(1), edge(2), edge(3));
        // common scale for the two values at t, then one factor against t0
        let top = field.log_scales[e1].max(field.log_scales[e2]);
        let scale = (top - field0.log_scales[e3]).exp();
        let (g1, g2, g30) = (field.rescaled(e1, top), field.rescaled(e2, top), field0.mantissas[e3]);
        if zeta.is_infinite() {
            // G1 + G2 = G3, taken directly to avoid cancellation
            return Ok(field.normalized(e3, field0));
        }
        if zeta == entry.gamma {
            return Err(DivisorError::Pole {
                component: c.label.clone(),
                zeta,
            });
        }
        return Ok((g1 * (zeta - 1.0) + g2 * zeta) / (g30 * (zeta - entry.gamma)) * scale);
    }
    // no divisor point here: constant extension by any edge with a usable value
    let net = &mn.network;
    let candidates = net.out_edges(v).iter().chain(net.in_edges(v)).copied();
    for e in candidates {
        let label = net.edges[e].labels[0];
        if label.kind == 3 && label.slot == 0 {
            continue;
        }
        if field0.mantissas[e] != 0.0 && field0.is_nonzero(e, 1e-12) {
            return Ok(field.normalized(e, field0));
        }
    }
    Err(DivisorError::Undefined(format!("no normalisable edge value on {}", c.label)))
}
