//! Invariant checks over one datum and the randomised suite behind `verify`.

use itertools::Itertools;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curve::{build_curve, genus_accounting, observed_counts};
use crate::divisor::{DivisorAnalysis, T0Options};
use crate::edges::{edge_vector_system, modify_tableau, path_sum_vectors, reconstruct_row, rref_rows};
use crate::le::{boundary_measurement, build_network, minor_by_paths, reduce_network, LeDiagram, LeTableau};
use crate::soliton::{kp_residual, sato_at, tau_minorsum, tau_wronskian, Precision, SolitonData, Times};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerifyReport {
    fn new(seed: u64, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self { seed, checks, passed }
    }
}

fn random_time(rng: &mut ChaCha8Rng, spread: f64) -> Times {
    Times::xyt(
        rng.gen_range(-spread..spread),
        rng.gen_range(-spread..spread),
        rng.gen_range(-spread / 4.0..spread / 4.0),
    )
}

pub fn random_phases(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut acc = -0.6 * n as f64;
    (0..n)
        .map(|_| {
            acc += rng.gen_range(0.3..1.3);
            acc
        })
        .collect()
}

pub fn random_tableau(rng: &mut ChaCha8Rng, k: usize, n: usize) -> LeTableau {
    let d = LeDiagram::random(rng, k, n, 0.6);
    LeTableau::random_weights(rng, d, 9, 5)
}

/// All checks for one tableau and phase set, tagged with `name`.
pub fn datum_checks(name: &str, tab: &LeTableau, kappa: &[f64], prec: Precision, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let tag = |s: &str| format!("{name}: {s}");
    let mut out = Vec::new();
    let net = build_network(tab);
    let gp = boundary_measurement(&net);
    out.push(Check::new(tag("boundary measurement is TNN"), gp.is_totally_nonnegative(), ""));

    if gp.n() <= 10 {
        let bad: Vec<Vec<usize>> = (1..=gp.n())
            .combinations(gp.k())
            .filter(|j| minor_by_paths(&net, j).ok() != gp.minor(j).ok())
            .collect();
        out.push(Check::new(
            tag("path-family minors equal determinants"),
            bad.is_empty(),
            format!("{} mismatches", bad.len()),
        ));
    }

    let mn = modify_tableau(tab);
    let evs = edge_vector_system(&mn);
    let oracle = path_sum_vectors(&mn);
    let mismatched = mn
        .network
        .edges
        .iter()
        .filter(|e| evs.vector(e.id) != oracle[e.id].as_slice())
        .count();
    out.push(Check::new(
        tag("edge vectors equal path sums"),
        mismatched == 0,
        format!("{mismatched} edges differ"),
    ));
    let rows = rref_rows(&mn);
    let row_ok = (1..=mn.k()).all(|r| reconstruct_row(&evs, r) == rows[r - 1] && evs.darboux_vector(r) == rows[r - 1].as_slice());
    out.push(Check::new(tag("row identity and Darboux vectors"), row_ok, ""));

    match SolitonData::from_tableau(kappa.to_vec(), tab) {
        Err(e) => out.push(Check::new(tag("soliton data"), false, e.to_string())),
        Ok(sd) => {
            let mut worst_tau = 0.0f64;
            let mut positive = true;
            let mut worst_kp = 0.0f64;
            for i in 0..20 {
                let t = random_time(rng, 3.0);
                let (w, m) = (tau_wronskian::<f64>(&sd, &t), tau_minorsum::<f64>(&sd, &t));
                positive &= m.mantissa > 0.0;
                worst_tau = worst_tau.max((w.ratio(m) - 1.0).abs());
                if i < 5 {
                    worst_kp = worst_kp.max(kp_residual::<twofloat::TwoFloat>(&sd, &t).map(f64::abs).unwrap_or(f64::INFINITY));
                }
            }
            out.push(Check::new(
                tag("Wronskian and minor-sum tau agree"),
                positive && worst_tau < 1e-9,
                format!("max rel diff {worst_tau:.3e}"),
            ));
            out.push(Check::new(
                tag("KP-II residual"),
                worst_kp < 1e-5,
                format!("max |residual| {worst_kp:.3e}"),
            ));
            let sato = sato_at(prec, &sd, &Times::from_pairs([(1, rng.gen_range(-2.0..2.0))]));
            out.push(Check::new(
                tag("Sato divisor real and inside the phase range"),
                sato.is_ok(),
                sato.err().map(|e| e.to_string()).unwrap_or_default(),
            ));
        }
    }

    let opts = T0Options {
        precision: prec,
        ..T0Options::default()
    };
    match DivisorAnalysis::run(tab, kappa.to_vec(), &opts, None) {
        Err(e) => out.push(Check::new(tag("divisor pipeline"), false, e.to_string())),
        Ok(run) => {
            out.push(Check::new(
                tag("parity laws"),
                run.parity.passed(),
                run.parity.violations.join("; "),
            ));
            out.push(Check::new(
                tag("one KP point per finite oval"),
                run.kp_ovals.passed(),
                run.kp_ovals.violations.join("; "),
            ));
            let c = run.checks();
            out.push(Check::new(
                tag("KP divisor degree and Sato part"),
                c.kp_degree && c.sato_on_gamma0,
                "",
            ));
        }
    }

    let reduced = reduce_network(&net);
    match build_curve(&reduced) {
        Err(e) => out.push(Check::new(tag("reduced curve"), false, e.to_string())),
        Ok(curve) => {
            let d = tab.diagram().cell_dimension();
            let seen = observed_counts(&curve);
            let want = genus_accounting(d, tab.n(), reduced.kept_bivalent);
            let ok = curve.ovals.len() == d + 1 && seen.genus == d as i64 && (seen == want || !is_irreducible(tab));
            out.push(Check::new(
                tag("curve counts"),
                ok,
                format!("{} ovals, {seen:?}, expected {want:?}", curve.ovals.len()),
            ));
        }
    }
    out
}

/// No zero columns and no pivot-only rows in the boundary measurement.
fn is_irreducible(tab: &LeTableau) -> bool {
    let gp = boundary_measurement(&build_network(tab));
    let m = gp.matrix();
    let zero_col = (0..gp.n()).any(|c| (0..gp.k()).all(|r| m.get(r, c).is_zero()));
    let pivot_only = (0..gp.k()).any(|r| (0..gp.n()).filter(|&c| !m.get(r, c).is_zero()).count() == 1);
    !zero_col && !pivot_only
}

/// Worked examples plus `trials` random tableaux with k ≤ 4, n ≤ 9.
pub fn suite(seed: u64, trials: usize, prec: Precision) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let one = || crate::algebra::Rational::from_integer(1.into());
    let examples = [
        (
            "Gr(2,4) unit weights",
            crate::catalog::gr24(one(), one(), one(), one()),
            vec![-3.0, -1.0, 2.0, 3.0],
        ),
        (
            "Gr(4,9) sample",
            crate::catalog::gr492_sample(),
            vec![-2.0, -1.5, -1.0, -0.3, 0.0, 0.4, 1.0, 1.7, 2.5],
        ),
        ("Case B", crate::catalog::case_b(), (1..=16).map(|j| j as f64 / 4.0 - 2.0).collect()),
    ];
    for (name, tab, kappa) in examples {
        checks.extend(datum_checks(name, &tab, &kappa, prec, &mut rng));
    }

    let mut failures = Vec::new();
    for trial in 0..trials {
        let k = rng.gen_range(1..=4);
        let n = rng.gen_range(k + 1..=9);
        let tab = random_tableau(&mut rng, k, n);
        let kappa = random_phases(&mut rng, n);
        let opts = T0Options {
            precision: prec,
            ..T0Options::default()
        };
        match DivisorAnalysis::run(&tab, kappa, &opts, None) {
            Ok(run) if run.checks().all() => {}
            Ok(run) => failures.push(format!(
                "trial {trial}: {}",
                run.parity.violations.iter().chain(&run.kp_ovals.violations).join("; ")
            )),
            Err(e) => failures.push(format!("trial {trial}: {e}")),
        }
    }
    checks.push(Check::new(
        format!("random suite ({trials} tableaux): parity and KP oval laws"),
        failures.is_empty(),
        failures.join(" | "),
    ));
    VerifyReport::new(seed, checks)
}

/// Checks for a single configured datum.
pub fn single(name: &str, tab: &LeTableau, kappa: &[f64], seed: u64, prec: Precision) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    VerifyReport::new(seed, datum_checks(name, tab, kappa, prec, &mut rng))
}
