use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::DivisorError;
use crate::algebra::{rational_to_f64, Rational};
use crate::edges::{EdgeVectorSystem, ModifiedNetwork};
use crate::le::{EdgeLabel, VertexKind};
use crate::soliton::{sato_at, theta, Precision, SatoDivisor, SolitonData, Times};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum WaveVariant {
    Vacuum,
    Dressed,
}

/// π_t(ζ) = e^{−θ(ζ)} 𝔇e^{θ(ζ)} at one time, kept as the Wronskian expansion
/// Σ_J w_J ∏_{j∈J}(ζ − κ_j) / Σ_J w_J with w_J = Δ_J V(κ_J) e^{θ_J − max}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DressingFactor {
    terms: Vec<(Vec<f64>, f64)>,
    tau: f64,
    /// max_J θ_J, the scale removed from the weights.
    pub log_scale: f64,
}

impl DressingFactor {
    pub fn new(sd: &SolitonData, t: &Times) -> Self {
        let kappa = sd.kappa();
        let theta_sum = |j: &[usize]| j.iter().map(|&i| theta(kappa[i - 1], t)).sum::<f64>();
        let top = sd
            .tau_terms()
            .iter()
            .map(|term| theta_sum(&term.subset))
            .fold(f64::NEG_INFINITY, f64::max);
        let terms: Vec<(Vec<f64>, f64)> = sd
            .tau_terms()
            .iter()
            .map(|term| {
                let roots = term.subset.iter().map(|&i| kappa[i - 1]).collect();
                (roots, term.coeff() * (theta_sum(&term.subset) - top).exp())
            })
            .collect();
        let tau = terms.iter().map(|(_, w)| w).sum();
        Self {
            terms,
            tau,
            log_scale: top,
        }
    }

    pub fn eval(&self, zeta: f64) -> f64 {
        self.terms
            .iter()
            .map(|(roots, w)| w * roots.iter().map(|k| zeta - k).product::<f64>())
            .sum::<f64>()
            / self.tau
    }
}

/// Edge values at one time, stored per edge as mantissa · e^{log_scale}.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeWaveField {
    pub variant: WaveVariant,
    pub t: Times,
    pub log_scales: Vec<f64>,
    pub mantissas: Vec<f64>,
    /// Σ|terms| on the same scale, for cancellation tests.
    pub magnitudes: Vec<f64>,
    /// π_t for dressed fields.
    pub dressing: Option<DressingFactor>,
}

impl EdgeWaveField {
    pub fn value(&self, edge: usize) -> f64 {
        self.mantissas[edge] * self.log_scales[edge].exp()
    }

    /// Value divided by e^{scale}.
    pub fn rescaled(&self, edge: usize, scale: f64) -> f64 {
        self.mantissas[edge] * (self.log_scales[edge] - scale).exp()
    }

    /// Value on edge `a` over value on edge `b`.
    pub fn ratio(&self, a: usize, b: usize) -> f64 {
        self.mantissas[a] / self.mantissas[b] * (self.log_scales[a] - self.log_scales[b]).exp()
    }

    /// Value at this time divided by the value in `at_t0`.
    pub fn normalized(&self, edge: usize, at_t0: &EdgeWaveField) -> f64 {
        self.mantissas[edge] / at_t0.mantissas[edge] * (self.log_scales[edge] - at_t0.log_scales[edge]).exp()
    }

    /// True if the value is not lost to cancellation (relative `tol`).
    pub fn is_nonzero(&self, edge: usize, tol: f64) -> bool {
        self.mantissas[edge].abs() > tol * self.magnitudes[edge]
    }
}

impl EdgeWaveField {
    fn empty(variant: WaveVariant, t: &Times, dressing: Option<DressingFactor>) -> Self {
        Self {
            variant,
            t: t.clone(),
            log_scales: Vec::new(),
            mantissas: Vec::new(),
            magnitudes: Vec::new(),
            dressing,
        }
    }

    /// Appends Σ c e^{θ} with its own scale max θ.
    fn push(&mut self, terms: impl Iterator<Item = (f64, f64)> + Clone) {
        let top = terms.clone().map(|(_, th)| th).fold(f64::NEG_INFINITY, f64::max);
        let top = if top.is_finite() { top } else { 0.0 };
        let (m, a) = terms.fold((0.0, 0.0), |(m, a), (c, th)| {
            let x = c * (th - top).exp();
            (m + x, a + x.abs())
        });
        self.log_scales.push(top);
        self.mantissas.push(m);
        self.magnitudes.push(a);
    }
}

/// Precomputed data for evaluating both fields at many times.
///
/// Dressed values use 𝔇g = Wr(f_1,…,f_k, g)/Wr(f_1,…,f_k) expanded by
/// Cauchy–Binet, so each edge carries exact (k+1)-minors of [A; 𝔈]. This
/// avoids the cancellation of Σ_j 𝔈_j π(κ_j) e^{θ_j} and gives exact zeros on
/// vectors in the row space.
#[derive(Clone, Debug)]
pub struct WaveEvaluator<'a> {
    sd: &'a SolitonData,
    vacuum: Vec<Vec<(usize, f64)>>,
    /// Per edge: ((k+1)-subset, minor · Vandermonde).
    dressed: Vec<Vec<(Vec<usize>, f64)>>,
}

impl<'a> WaveEvaluator<'a> {
    pub fn new(evs: &EdgeVectorSystem, sd: &'a SolitonData) -> Self {
        let k = sd.k();
        let kappa = sd.kappa();
        let plucker: Vec<(Vec<usize>, Rational)> = sd.point().plucker().into_iter().filter(|(_, d)| !d.is_zero()).collect();
        let vandermonde = |s: &[usize]| -> f64 { s.iter().tuple_combinations().map(|(&a, &b)| kappa[b - 1] - kappa[a - 1]).product() };
        let vacuum = evs
            .vectors
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (j, rational_to_f64(c)))
                    .collect()
            })
            .collect();
        let dressed = evs
            .vectors
            .iter()
            .map(|v| {
                // Laplace expansion of det([A; v]_I) along the last row
                let mut minors: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
                for (j0, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let j = j0 + 1;
                    for (subset, delta) in &plucker {
                        if !subset.contains(&j) {
                            let m = subset.iter().filter(|&&i| i < j).count();
                            let mut s = subset.clone();
                            s.insert(m, j);
                            let term = c * delta;
                            let entry = minors.entry(s).or_insert_with(Rational::zero);
                            if (k + m).is_multiple_of(2) {
                                *entry += term;
                            } else {
                                *entry -= term;
                            }
                        }
                    }
                }
                minors
                    .into_iter()
                    .filter(|(_, d)| !d.is_zero())
                    .map(|(s, d)| {
                        let coeff = rational_to_f64(&d) * vandermonde(&s);
                        (s, coeff)
                    })
                    .collect()
            })
            .collect();
        Self { sd, vacuum, dressed }
    }

    /// Vacuum values ⟨𝔈, e^θ⟩ and dressed values ⟨𝔈, 𝔇e^θ⟩ on every edge.
    pub fn at(&self, t: &Times) -> (EdgeWaveField, EdgeWaveField) {
        let thetas: Vec<f64> = self.sd.kappa().iter().map(|&k| theta(k, t)).collect();
        let mut vacuum = EdgeWaveField::empty(WaveVariant::Vacuum, t, None);
        for v in &self.vacuum {
            vacuum.push(v.iter().map(|&(j, c)| (c, thetas[j])));
        }

        let pi = DressingFactor::new(self.sd, t);
        let theta_sum = |s: &[usize]| s.iter().map(|&i| thetas[i - 1]).sum::<f64>();
        let shift = pi.log_scale + pi.tau.abs().ln();
        let sign = pi.tau.signum();
        let mut dressed = EdgeWaveField::empty(WaveVariant::Dressed, t, None);
        for terms in &self.dressed {
            dressed.push(terms.iter().map(|(s, c)| (sign * c, theta_sum(s) - shift)));
        }
        dressed.dressing = Some(pi);
        (vacuum, dressed)
    }
}

/// Vacuum and dressed fields at a single time.
pub fn edge_waves(evs: &EdgeVectorSystem, sd: &SolitonData, t: &Times) -> (EdgeWaveField, EdgeWaveField) {
    WaveEvaluator::new(evs, sd).at(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct T0Options {
    /// Largest x0 tried by the doubling schedule 0, 1, 2, 4, ….
    pub max_x: f64,
    pub precision: Precision,
    /// Relative size below which a value counts as zero.
    pub zero_tol: f64,
}

impl Default for T0Options {
    fn default() -> Self {
        Self {
            max_x: 1024.0,
            precision: Precision::Double,
            zero_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct T0Choice {
    pub t0: Times,
    #[serde(skip)]
    pub vacuum: EdgeWaveField,
    #[serde(skip)]
    pub dressed: EdgeWaveField,
    pub sato: SatoDivisor,
    /// x values rejected before `t0`.
    pub rejected: Vec<f64>,
}

/// Why a candidate time fails, or None if it is admissible.
pub(crate) fn t0_defect(mn: &ModifiedNetwork, evs: &EdgeVectorSystem, vac: &EdgeWaveField, dr: &EdgeWaveField, tol: f64) -> Option<String> {
    let isolated = |r: usize| mn.base.cells[r - 1].is_empty();
    for e in &mn.network.edges {
        let label = e.labels[0];
        let horizontal = label.kind != 2;
        if horizontal {
            let top = evs.vectors[e.id].iter().rev().find(|c| !c.is_zero()).map(|c| c.is_positive());
            if let Some(positive) = top {
                if !vac.is_nonzero(e.id, tol) || (vac.mantissas[e.id] > 0.0) != positive {
                    return Some(format!("vacuum sign on {label}"));
                }
            }
        }
        // a zero on a vertical edge would put γ on the double point ζ = 1
        if !vac.is_nonzero(e.id, tol) {
            return Some(format!("vacuum value vanishes on {label}"));
        }
        let darboux = label.kind == 3 && label.slot == 0;
        if !darboux && !isolated(label.row) && !dr.is_nonzero(e.id, tol) {
            return Some(format!("dressed value vanishes on {label}"));
        }
    }
    None
}

fn sato_defect(sato: &SatoDivisor, kappa: &[f64]) -> Option<String> {
    let span = 1.0 + kappa[kappa.len() - 1] - kappa[0];
    if sato.roots.windows(2).any(|w| w[1] - w[0] < 1e-9 * span) {
        return Some("repeated Sato root".into());
    }
    if sato.roots.iter().any(|r| kappa.iter().any(|k| (r - k).abs() < 1e-12 * span)) {
        return Some("Sato root on a phase".into());
    }
    None
}

/// Smallest x0 on the doubling schedule satisfying the sign and non-vanishing
/// conditions, with a generic Sato divisor.
pub fn choose_t0(mn: &ModifiedNetwork, evs: &EdgeVectorSystem, sd: &SolitonData, opts: &T0Options) -> Result<T0Choice, DivisorError> {
    let eval = WaveEvaluator::new(evs, sd);
    let mut rejected = Vec::new();
    let mut x = 0.0;
    while x <= opts.max_x {
        let t0 = Times::from_pairs([(1, x)]);
        let (vacuum, dressed) = eval.at(&t0);
        if let Ok(sato) = sato_at(opts.precision, sd, &t0) {
            let defect = t0_defect(mn, evs, &vacuum, &dressed, opts.zero_tol).or_else(|| sato_defect(&sato, sd.kappa()));
            if defect.is_none() {
                return Ok(T0Choice {
                    t0,
                    vacuum,
                    dressed,
                    sato,
                    rejected,
                });
            }
        }
        rejected.push(x);
        x = if x == 0.0 { 1.0 } else { 2.0 * x };
    }
    Err(DivisorError::T0Search { max_x: opts.max_x })
}

/// One network divisor number γ at a trivalent white vertex of N′.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisorEntry {
    pub vertex: usize,
    pub row: usize,
    /// 0 for V_{i_r}, otherwise the position of the box in its row.
    pub slot: usize,
    pub pivot: usize,
    /// None for V_{i_r}.
    pub column: Option<usize>,
    pub gamma: f64,
    pub variant: WaveVariant,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetworkDivisor {
    pub t0: Times,
    pub entries: Vec<DivisorEntry>,
}

impl NetworkDivisor {
    pub fn of(&self, variant: WaveVariant) -> impl Iterator<Item = &DivisorEntry> + '_ {
        self.entries.iter().filter(move |e| e.variant == variant)
    }

    pub fn find(&self, vertex: usize, variant: WaveVariant) -> Option<&DivisorEntry> {
        self.entries.iter().find(|e| e.vertex == vertex && e.variant == variant)
    }
}

/// γ = G(e^(1))/G(e^(3)) at every trivalent white vertex: all V_{i_r j_l} with
/// l < N_r for the vacuum field, and only l ≥ 1 for the dressed one.
pub fn divisor_numbers(mn: &ModifiedNetwork, vac0: &EdgeWaveField, dr0: &EdgeWaveField) -> Result<NetworkDivisor, DivisorError> {
    let mut entries = Vec::new();
    let edge = |kind, r, s| mn.edge(EdgeLabel::new(kind, r, s)).expect("edge of N′").id;
    for r in 1..=mn.k() {
        let cells = &mn.base.cells[r - 1];
        let pivot = mn.base.pivots[r - 1];
        for slot in 0..cells.len() {
            let (vertex, column) = if slot == 0 {
                (mn.network.vertex_of(VertexKind::Source { row: r }).expect("source"), None)
            } else {
                let column = cells[slot - 1];
                (
                    mn.network.vertex_of(VertexKind::White { row: r, slot, column }).expect("white"),
                    Some(column),
                )
            };
            let (e1, e3) = (edge(1, r, slot), edge(3, r, slot));
            for (field, variant) in [(vac0, WaveVariant::Vacuum), (dr0, WaveVariant::Dressed)] {
                if variant == WaveVariant::Dressed && slot == 0 {
                    continue;
                }
                if field.mantissas[e3] == 0.0 || !field.mantissas[e3].is_finite() {
                    return Err(DivisorError::Degenerate(format!(
                        "{variant:?} value on {}",
                        EdgeLabel::new(3, r, slot)
                    )));
                }
                entries.push(DivisorEntry {
                    vertex,
                    row: r,
                    slot,
                    pivot,
                    column,
                    gamma: field.ratio(e1, e3),
                    variant,
                });
            }
        }
    }
    Ok(NetworkDivisor {
        t0: vac0.t.clone(),
        entries,
    })
}
