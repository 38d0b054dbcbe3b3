use super::*;
use crate::algebra::Rational;
use crate::catalog;
use crate::curve::{build_curve, Coord, CurveModel};
use crate::edges::{edge_vector_system, modify_tableau, EdgeVectorSystem, ModifiedNetwork};
use crate::le::{EdgeLabel, LeDiagram, LeTableau, VertexKind};
use crate::soliton::{theta, SolitonData, Times};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Pipeline {
    mn: ModifiedNetwork,
    evs: EdgeVectorSystem,
    sd: SolitonData,
    choice: T0Choice,
    nd: NetworkDivisor,
    curve: CurveModel,
}

impl Pipeline {
    fn new(tab: &LeTableau, kappa: Vec<f64>) -> Self {
        let mn = modify_tableau(tab);
        let evs = edge_vector_system(&mn);
        let sd = SolitonData::from_tableau(kappa, tab).unwrap();
        let choice = choose_t0(&mn, &evs, &sd, &T0Options::default()).unwrap();
        let nd = divisor_numbers(&mn, &choice.vacuum, &choice.dressed).unwrap();
        let curve = build_curve(&mn.base).unwrap();
        Self {
            mn,
            evs,
            sd,
            choice,
            nd,
            curve,
        }
    }

    fn divisors(&self) -> Divisors {
        assemble_divisors(&self.nd, &self.curve, &self.choice.sato, self.sd.kappa()).unwrap()
    }

    fn fields(&self, t: &Times) -> (EdgeWaveField, EdgeWaveField) {
        edge_waves(&self.evs, &self.sd, t)
    }

    fn edge(&self, kind: u8, r: usize, s: usize) -> Option<usize> {
        self.mn.edge(EdgeLabel::new(kind, r, s)).map(|e| e.id)
    }
}

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn random_kappa(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut acc = -0.6 * n as f64;
    (0..n)
        .map(|_| {
            acc += rng.gen_range(0.3..1.3);
            acc
        })
        .collect()
}

fn random_tableau(rng: &mut ChaCha8Rng, k: usize, n: usize) -> LeTableau {
    let d = LeDiagram::random(rng, k, n, 0.6);
    LeTableau::random_weights(rng, d, 9, 5)
}

fn random_time(rng: &mut ChaCha8Rng) -> Times {
    Times::from_pairs([
        (1, rng.gen_range(-2.0..2.0)),
        (2, rng.gen_range(-1.0..1.0)),
        (3, rng.gen_range(-0.5..0.5)),
    ])
}

fn gr24_unit() -> LeTableau {
    catalog::gr24(q(1, 1), q(1, 1), q(1, 1), q(1, 1))
}

const K24: [f64; 4] = [-3.0, -1.0, 2.0, 3.0];

fn gr492_kappa() -> Vec<f64> {
    vec![-2.0, -1.5, -1.0, -0.3, 0.0, 0.4, 1.0, 1.7, 2.5]
}

#[test]
fn phi3_45_matches_closed_form() {
    let tab = catalog::gr492_sample();
    let p = Pipeline::new(&tab, gr492_kappa());
    let t = Times::xyt(0.3, -0.2, 0.1);
    let (vac, _) = p.fields(&t);
    let e = p.edge(3, 3, 1).unwrap();
    let (w46, w48, w49) = (1.25, 1.2, 3.0 / 7.0);
    let ex = |j: usize| theta(p.sd.kappa()[j - 1], &t).exp();
    let want = ex(5) + w46 * ex(6) - w46 * w48 * ex(8) - w46 * w48 * w49 * ex(9);
    assert!(rel(vac.value(e), want) < 1e-13);
}

#[test]
fn dressed_vanishes_on_darboux_edges() {
    for (tab, kappa) in [(catalog::gr492_sample(), gr492_kappa()), (catalog::gr24_sample(), K24.to_vec())] {
        let p = Pipeline::new(&tab, kappa);
        let (_, dr) = p.fields(&Times::xyt(0.7, 0.4, -0.2));
        for r in 1..=p.mn.k() {
            let e = p.mn.darboux_edge(r);
            assert!(dr.mantissas[e].abs() < 1e-10 * dr.magnitudes[e].max(1e-300), "row {r}");
        }
    }
}

fn check_vertex_relations(p: &Pipeline, field: &EdgeWaveField) {
    let tol = 1e-12;
    let net = &p.mn.network;
    for v in &net.vertices {
        let (row, slot) = match v.kind {
            VertexKind::Source { row } => (row, 0),
            VertexKind::White { row, slot, .. } => (row, slot),
            VertexKind::Black { row, slot, .. } => {
                let out = p.edge(3, row, slot).unwrap();
                for &e in net.in_edges(v.id) {
                    let w = crate::algebra::rational_to_f64(&net.edges[e].weight);
                    let top = field.log_scales[e].max(field.log_scales[out]);
                    let lhs = field.rescaled(e, top).abs();
                    let rhs = w * field.rescaled(out, top).abs();
                    let mag = |i: usize| field.magnitudes[i] * (field.log_scales[i] - top).exp();
                    let scale = mag(e).max(w * mag(out));
                    assert!((lhs - rhs).abs() <= tol * scale, "black vertex {}", v.id);
                }
                continue;
            }
            _ => continue,
        };
        let (Some(e1), Some(e2), Some(e3)) = (p.edge(1, row, slot), p.edge(2, row, slot), p.edge(3, row, slot)) else {
            continue;
        };
        let top = field.log_scales[e1].max(field.log_scales[e2]).max(field.log_scales[e3]);
        let m = |i: usize| field.rescaled(i, top);
        let scale: f64 = [e1, e2, e3]
            .iter()
            .map(|&i| field.magnitudes[i] * (field.log_scales[i] - top).exp())
            .sum();
        assert!((m(e3) - m(e1) - m(e2)).abs() <= tol * scale, "white vertex {}", v.id);
    }
}

#[test]
fn vertex_linear_relations_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (tab, kappa) in [
        (catalog::gr492_sample(), gr492_kappa()),
        (catalog::case_b(), random_kappa(&mut rng, 16)),
    ] {
        let p = Pipeline::new(&tab, kappa);
        for _ in 0..5 {
            let (vac, dr) = p.fields(&random_time(&mut rng));
            check_vertex_relations(&p, &vac);
            check_vertex_relations(&p, &dr);
        }
    }
}

fn assert_admissible(p: &Pipeline) {
    assert!(t0_defect_ok(p, &p.choice.vacuum, &p.choice.dressed));
}

fn t0_defect_ok(p: &Pipeline, vac: &EdgeWaveField, dr: &EdgeWaveField) -> bool {
    super::waves::t0_defect(&p.mn, &p.evs, vac, dr, 1e-9).is_none()
}

#[test]
fn t0_for_single_box() {
    let p = Pipeline::new(&catalog::single_box(q(2, 1)), vec![-1.0, 1.5]);
    assert_admissible(&p);
    // larger x0 stays admissible
    for x in [10.0, 40.0] {
        let (vac, dr) = p.fields(&Times::from_pairs([(1, p.choice.t0.x() + x)]));
        assert!(t0_defect_ok(&p, &vac, &dr));
    }
}

#[test]
fn t0_for_gr24_matches_sign_scan() {
    let p = Pipeline::new(&gr24_unit(), K24.to_vec());
    let x0 = p.choice.t0.x();
    // independent scan: signs of horizontal vacuum values against their leading coefficient
    let ok = |x: f64| {
        let t = Times::from_pairs([(1, x)]);
        let ex: Vec<f64> = K24.iter().map(|&k| theta(k, &t).exp()).collect();
        p.mn.network.edges.iter().filter(|e| e.labels[0].kind != 2).all(|e| {
            let v = p.evs.vector(e.id);
            let val: f64 = v.iter().zip(&ex).map(|(c, e)| crate::algebra::rational_to_f64(c) * e).sum();
            match v.iter().rposition(|c| !num_traits::Zero::is_zero(c)) {
                Some(top) => val != 0.0 && (val > 0.0) == num_traits::Signed::is_positive(&v[top]),
                None => true,
            }
        })
    };
    assert!(ok(x0));
    for &x in &p.choice.rejected {
        let t = Times::from_pairs([(1, x)]);
        let (vac, dr) = p.fields(&t);
        assert!(!ok(x) || !t0_defect_ok(&p, &vac, &dr) || x < x0);
    }
}

#[test]
fn t0_search_exhaustion_is_an_error() {
    let tab = gr24_unit();
    let mn = modify_tableau(&tab);
    let evs = edge_vector_system(&mn);
    let sd = SolitonData::from_tableau(K24.to_vec(), &tab).unwrap();
    let opts = T0Options {
        max_x: -1.0,
        ..T0Options::default()
    };
    let err = choose_t0(&mn, &evs, &sd, &opts).unwrap_err();
    assert!(err.to_string().contains("precision"));
}

#[test]
fn vacuum_numbers_positive_and_interpolate() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p = Pipeline::new(&catalog::gr492_sample(), gr492_kappa());
    let d = 10;
    assert_eq!(p.nd.of(WaveVariant::Vacuum).count(), d);
    assert_eq!(p.nd.of(WaveVariant::Dressed).count(), d - 4);
    assert!(p.nd.of(WaveVariant::Vacuum).all(|e| e.gamma > 0.0));
    for _ in 0..20 {
        let (vac, dr) = p.fields(&random_time(&mut rng));
        for (field, field0) in [(&vac, &p.choice.vacuum), (&dr, &p.choice.dressed)] {
            for e in p.nd.of(field.variant) {
                let ids = [1, 2, 3].map(|m| p.edge(m, e.row, e.slot).unwrap());
                let [h1, h2, h3] = ids.map(|id| field.normalized(id, field0));
                let rhs = e.gamma * h1 + (1.0 - e.gamma) * h2;
                let scale = (e.gamma * h1).abs() + ((1.0 - e.gamma) * h2).abs();
                assert!((h3 - rhs).abs() < 1e-9 * scale, "{e:?}");
            }
        }
    }
}

#[test]
fn isolated_source_gets_no_number() {
    let p = Pipeline::new(&catalog::case_b(), (1..=16).map(|j| j as f64 / 4.0).collect());
    let v = p.mn.network.vertex_of(VertexKind::Source { row: 2 }).unwrap();
    assert!(p.nd.find(v, WaveVariant::Vacuum).is_none());
    assert!(p.nd.find(v, WaveVariant::Dressed).is_none());
}

#[test]
fn gr24_dressed_numbers_match_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..20 {
        let w: [f64; 4] = std::array::from_fn(|_| rng.gen_range(1..8) as f64 / rng.gen_range(1..4) as f64);
        let kappa = random_kappa(&mut rng, 4);
        let qw = |v: f64| num_rational::BigRational::from_float(v).unwrap();
        let tab = catalog::gr24(qw(w[0]), qw(w[1]), qw(w[2]), qw(w[3]));
        let p = Pipeline::new(&tab, kappa.clone());
        let k4: [f64; 4] = kappa.try_into().unwrap();
        let xd = gr24_xi_divisor(k4, w, 100.0, &p.choice.t0).unwrap();
        let gamma = |r: usize| {
            let v =
                p.mn.network
                    .vertex_of(VertexKind::White {
                        row: r,
                        slot: 1,
                        column: 3,
                    })
                    .unwrap();
            p.nd.find(v, WaveVariant::Dressed).unwrap().gamma
        };
        assert!(rel(gamma(1), xd.zeta_dr13) < 1e-10, "{} vs {}", gamma(1), xd.zeta_dr13);
        assert!(rel(gamma(2), xd.zeta_dr23) < 1e-10, "{} vs {}", gamma(2), xd.zeta_dr23);
    }
}

#[test]
fn gr24_divisors_and_ovals() {
    let p = Pipeline::new(&gr24_unit(), K24.to_vec());
    let div = p.divisors();
    assert_eq!(div.vacuum.degree(), 4);
    assert_eq!(div.sato.degree(), 2);
    assert_eq!(div.kp.degree(), 4);
    let on = |label: &str| div.kp.points.iter().filter(|pt| pt.component_label == label).count();
    assert_eq!(on("Gamma_0"), 2);
    assert_eq!(on("Gamma_1,3"), 1);
    assert_eq!(on("Gamma_2,3"), 1);
    let sato: Vec<f64> = div.sato.points.iter().map(|pt| pt.zeta).collect();
    assert_eq!(sato, p.choice.sato.roots);
    let report = kp_oval_check(&div.kp, &p.curve);
    assert!(report.passed(), "{:?}", report.violations);
    assert_eq!(report.ovals.iter().filter(|o| o.points == 1).count(), 4);
    assert!(parity_check(&div.vacuum, &p.curve).passed());
    // one vacuum point per trivalent white component
    let mut comps: Vec<usize> = div.vacuum.points.iter().map(|pt| pt.component).collect();
    comps.dedup();
    assert_eq!(comps.len(), 4);
}

#[test]
fn case_b_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let p = Pipeline::new(&catalog::case_b(), random_kappa(&mut rng, 16));
    let div = p.divisors();
    let report = parity_check(&div.vacuum, &p.curve);
    assert!(report.passed(), "{:?}", report.violations);
    let omega = &report.ovals[p.curve.omega0()];
    assert_eq!((omega.poles, omega.darboux), (1, 2));
    assert_eq!((omega.poles + omega.darboux + 5) % 2, 0);
    let kp = kp_oval_check(&div.kp, &p.curve);
    assert!(kp.passed(), "{:?}", kp.violations);
}

#[test]
fn empty_cell_is_vacuous() {
    let diagram = LeDiagram::from_pivots(3, vec![1, 2], vec![vec![], vec![]]).unwrap();
    let tab = LeTableau::unit(diagram).unwrap();
    let p = Pipeline::new(&tab, vec![-1.0, 0.0, 1.0]);
    let div = p.divisors();
    assert_eq!(div.kp.degree(), 0);
    assert_eq!(div.sato.degree(), 0);
    assert!(parity_check(&div.vacuum, &p.curve).passed());
    assert!(kp_oval_check(&div.kp, &p.curve).passed());
}

#[test]
fn random_parity_and_kp_ovals() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..200 {
        let k = rng.gen_range(1..=4);
        let n = rng.gen_range(k + 1..=9);
        let tab = random_tableau(&mut rng, k, n);
        let p = Pipeline::new(&tab, random_kappa(&mut rng, n));
        let div = p.divisors();
        let parity = parity_check(&div.vacuum, &p.curve);
        assert!(parity.passed(), "trial {trial}: {:?}", parity.violations);
        let kp = kp_oval_check(&div.kp, &p.curve);
        assert!(kp.passed(), "trial {trial}: {:?} {:?}", kp.violations, tab.to_json());
        assert_eq!(div.kp.degree(), tab.diagram().cell_dimension());
    }
}

fn zeta_of(curve: &CurveModel, comp: usize, point: usize, kappa: &[f64]) -> f64 {
    match curve.components[comp].points[point].coord {
        Coord::Zero => 0.0,
        Coord::One => 1.0,
        Coord::Infinity => f64::INFINITY,
        Coord::Kappa(j) => kappa[j - 1],
    }
}

#[test]
fn marked_points_match_normalized_edges() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p = Pipeline::new(&catalog::gr492_sample(), gr492_kappa());
    let (vac, dr) = p.fields(&random_time(&mut rng));
    for (field, field0) in [(&vac, &p.choice.vacuum), (&dr, &p.choice.dressed)] {
        for e in p.nd.of(field.variant) {
            let comp = p.curve.component_of_vertex(e.vertex).unwrap();
            for (zeta, kind) in [(0.0, 1), (1.0, 2), (f64::INFINITY, 3)] {
                let got = wave_on_curve(&p.curve, &p.mn, &p.nd, comp, zeta, field, field0).unwrap();
                let want = field.normalized(p.edge(kind, e.row, e.slot).unwrap(), field0);
                assert!(rel(got, want) < 1e-10, "{e:?} at {zeta}");
            }
            let pole = wave_on_curve(&p.curve, &p.mn, &p.nd, comp, e.gamma, field, field0);
            assert!(matches!(pole, Err(DivisorError::Pole { .. })));
        }
    }
}

/// Wave values at both ends of every double point; pairs where the dressed
/// value is identically zero (isolated source rows) are skipped.
fn check_gluings(p: &Pipeline, rng: &mut ChaCha8Rng) {
    let kappa = p.sd.kappa();
    for _ in 0..20 {
        let (vac, dr) = p.fields(&random_time(rng));
        for (field, field0) in [(&vac, &p.choice.vacuum), (&dr, &p.choice.dressed)] {
            for g in &p.curve.gluings {
                let at = |(c, i): (usize, usize)| wave_on_curve(&p.curve, &p.mn, &p.nd, c, zeta_of(&p.curve, c, i, kappa), field, field0);
                match (at(g.a), at(g.b)) {
                    (Ok(a), Ok(b)) => assert!(rel(a, b) < 1e-10, "gluing {g:?}: {a} vs {b}"),
                    (a, b) => {
                        let row = p.mn.base.edges[g.edge].labels[0].row;
                        assert!(
                            field.variant == WaveVariant::Dressed && p.mn.base.cells[row - 1].is_empty(),
                            "gluing {g:?}: {a:?} {b:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn gluing_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    check_gluings(&Pipeline::new(&gr24_unit(), K24.to_vec()), &mut rng);
    check_gluings(&Pipeline::new(&catalog::gr492_sample(), gr492_kappa()), &mut rng);
    let kappa = random_kappa(&mut rng, 16);
    check_gluings(&Pipeline::new(&catalog::case_b(), kappa), &mut rng);
    for _ in 0..10 {
        let k = rng.gen_range(1..=4);
        let n = rng.gen_range(k + 1..=9);
        let tab = random_tableau(&mut rng, k, n);
        let kappa = random_kappa(&mut rng, n);
        check_gluings(&Pipeline::new(&tab, kappa), &mut rng);
    }
}

#[test]
fn xi_family_relations() {
    let p = Pipeline::new(&gr24_unit(), K24.to_vec());
    let w = [1.0; 4];
    let at = |xi| gr24_xi_divisor(K24, w, xi, &p.choice.t0).unwrap();
    assert!(at(100.0).first_gap() < 1e-12 * at(100.0).zeta_dr23.abs().max(1.0));
    let xs = [10.0f64, 100.0, 1000.0];
    let gaps: Vec<f64> = xs.iter().map(|&x| at(x).second_gap()).collect();
    for i in 0..2 {
        let slope = (gaps[i + 1].ln() - gaps[i].ln()) / (xs[i + 1].ln() - xs[i].ln());
        assert!((slope + 1.0).abs() < 0.1, "slope {slope}");
    }
}

#[test]
fn dressed_values_agree_with_darboux_operator() {
    use crate::soliton::{apply_darboux, darboux_at, ExpSum, Precision};
    let p = Pipeline::new(&catalog::gr492_sample(), gr492_kappa());
    let t = Times::xyt(0.2, 0.1, -0.05);
    let (_, dr) = p.fields(&t);
    let ds = darboux_at(Precision::Double, &p.sd, &t).unwrap();
    for e in &p.mn.network.edges {
        let v = ExpSum::new(p.evs.vector(e.id).iter().map(crate::algebra::rational_to_f64).collect());
        let direct = apply_darboux(&v, &ds, p.sd.kappa());
        let size: f64 = v
            .coeffs
            .iter()
            .zip(p.sd.kappa())
            .map(|(c, &k)| (c * ds.char_eval(k) * theta(k, &t).exp()).abs())
            .sum();
        assert!((dr.value(e.id) - direct).abs() < 1e-10 * size, "{:?}", e.labels);
    }
}
