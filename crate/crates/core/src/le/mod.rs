//! Le-diagrams and tableaux, their trivalent bipartite networks, the
//! boundary measurement map and the reductions of reducible soliton data.

mod diagram;
mod lindstrom;
mod measurement;
mod network;

pub use diagram::{partition_from_pivots, pivots_from_partition, LeDiagram, LeTableau, TableauJson};
pub use lindstrom::minor_by_paths;
pub use measurement::{boundary_measurement, reduce_soliton_data, GrassmannPoint, SolitonReduction};
pub use network::{build_network, reduce_network, Color, Dir, Edge, EdgeLabel, LeNetwork, Vertex, VertexKind};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LeError {
    #[error("invalid tableau shape: {0}")]
    Shape(String),
    #[error("Le-rule violated: box (row {row}, column {column}) must be filled (forced by row {upper})")]
    LeViolation { upper: usize, row: usize, column: usize },
    #[error("missing weight for filled box ({i},{j})")]
    MissingWeight { i: usize, j: usize },
    #[error("weight of box ({i},{j}) is not positive")]
    NonPositiveWeight { i: usize, j: usize },
    #[error("weight given for empty or absent box ({i},{j})")]
    UnexpectedWeight { i: usize, j: usize },
    #[error("{0:?} is not a valid column subset")]
    BadSubset(Vec<usize>),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;
    use crate::catalog;
    use itertools::Itertools;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(p: i64) -> Rational {
        Rational::from_integer(p.into())
    }

    #[test]
    fn gr492_matrix_matches_symbolic_entries() {
        let tab = catalog::gr492_sample();
        let w = |i, j| tab.weight(i, j).clone();
        let a = boundary_measurement(&build_network(&tab));
        let m = a.matrix();
        assert_eq!(a.pivots(), &[1, 2, 4, 7]);
        let w16_46 = w(1, 6) + w(4, 6);
        let expected_row1 = [
            q(1),
            q(0),
            q(0),
            q(0),
            w(1, 5),
            w(1, 5) * &w16_46,
            q(0),
            -w(1, 5) * w(4, 8) * &w16_46,
            -w(1, 5) * w(4, 8) * w(4, 9) * &w16_46 - w(1, 5) * w(1, 6) * w(1, 9),
        ];
        assert_eq!(m.row(0), &expected_row1);
        let expected_row2 = [
            q(0),
            q(1),
            w(2, 3),
            q(0),
            -w(2, 3) * w(2, 5),
            -w(2, 3) * w(2, 5) * w(4, 6),
            q(0),
            w(2, 3) * w(2, 5) * w(4, 6) * w(4, 8),
            w(2, 3) * w(2, 5) * w(4, 6) * w(4, 8) * w(4, 9),
        ];
        assert_eq!(m.row(1), &expected_row2);
        let expected_row3 = [
            q(0),
            q(0),
            q(0),
            q(1),
            w(4, 5),
            w(4, 5) * w(4, 6),
            q(0),
            -w(4, 5) * w(4, 6) * w(4, 8),
            -w(4, 5) * w(4, 6) * w(4, 8) * w(4, 9),
        ];
        assert_eq!(m.row(2), &expected_row3);
        let expected_row4 = [q(0), q(0), q(0), q(0), q(0), q(0), q(1), w(7, 8), q(0)];
        assert_eq!(m.row(3), &expected_row4);
    }

    #[test]
    fn gr492_unit_weights() {
        let a = boundary_measurement(&build_network(&catalog::gr492_unit()));
        assert_eq!(a.matrix().get(0, 7), &q(-2));
        assert_eq!(catalog::gr492_unit().diagram().cell_dimension(), 10);
    }

    #[test]
    fn single_box_measurement() {
        let d = LeDiagram::top_cell(1, 2).unwrap();
        let mut weights = std::collections::BTreeMap::new();
        weights.insert((1, 2), Rational::new(3.into(), 7.into()));
        let a = boundary_measurement(&build_network(&LeTableau::new(d, weights).unwrap()));
        assert_eq!(a.matrix().row(0), &[q(1), Rational::new(3.into(), 7.into())]);
    }

    #[test]
    fn gr24_minors() {
        let tab = catalog::gr24_sample();
        let w = |i, j| tab.weight(i, j).clone();
        let net = build_network(&tab);
        let a = boundary_measurement(&net);
        let expected = w(1, 3) * w(1, 4) * w(2, 3);
        assert_eq!(a.minor(&[3, 4]).unwrap(), expected);
        assert_eq!(minor_by_paths(&net, &[3, 4]).unwrap(), expected);
        assert_eq!(minor_by_paths(&net, &[1, 2]).unwrap(), q(1));
        assert_eq!(a.minor(&[1, 2]).unwrap(), q(1));
        assert!(minor_by_paths(&net, &[1]).is_err());
    }

    #[test]
    fn gr492_lindstrom_example() {
        let tab = catalog::gr492_sample();
        let net = build_network(&tab);
        assert_eq!(minor_by_paths(&net, &[1, 2, 4, 8]).unwrap(), tab.weight(7, 8).clone());
        assert_eq!(boundary_measurement(&net).minor(&[1, 2, 4, 8]).unwrap(), tab.weight(7, 8).clone());
    }

    #[test]
    fn bivalent_reduction_counts() {
        let tab = catalog::bivalent_example();
        let net = build_network(&tab);
        let red = reduce_network(&net);
        let d = tab.diagram().cell_dimension();
        let n = tab.n();
        assert_eq!(d, 3);
        assert_eq!(red.kept_bivalent, 1);
        let internal = red.internal_vertices().count();
        assert_eq!(internal + 1, 2 * d - n + red.kept_bivalent + 1);
        assert_eq!(red.edges.len(), 3 * d - n + red.kept_bivalent);
        assert_eq!(boundary_measurement(&red), boundary_measurement(&net));
    }

    #[test]
    fn reduction_without_bivalent_vertices_is_identity() {
        let tab = catalog::bivalent_example();
        let red = reduce_network(&build_network(&tab));
        assert_eq!(reduce_network(&red).edges, red.edges);
    }

    #[test]
    fn irreducible_data_is_unchanged() {
        let a = boundary_measurement(&build_network(&catalog::gr24_sample()));
        let red = reduce_soliton_data(&a).unwrap();
        assert_eq!(red.point, a);
        assert!(red.removed_columns.is_empty() && red.removed_rows.is_empty());
    }

    #[test]
    fn zero_column_removal() {
        // Gr(2,5) with column 3 never reachable
        let d = LeDiagram::from_pivots(5, vec![1, 2], vec![vec![4, 5], vec![4, 5]]).unwrap();
        let a = boundary_measurement(&build_network(&LeTableau::unit(d).unwrap()));
        let red = reduce_soliton_data(&a).unwrap();
        assert_eq!(red.removed_columns, vec![3]);
        assert_eq!((red.point.k(), red.point.n()), (2, 4));
        check_minor_correspondence(&a, &red);
    }

    #[test]
    fn isolated_source_flips_signs_above_right() {
        let tab = catalog::case_b();
        let a = boundary_measurement(&build_network(&tab));
        let red = reduce_soliton_data(&a).unwrap();
        assert_eq!(red.removed_rows, vec![2]);
        assert_eq!(red.removed_pivot_columns, vec![6]);
        assert_eq!(red.removed_columns, vec![1, 2, 4, 11]);
        // row 1, column 9 lies above-right of pivot 6: sign flipped
        let kept = red.kept_columns(16);
        let c9 = kept.iter().position(|&j| j == 9).unwrap();
        assert_eq!(red.point.matrix().get(0, c9), &-a.matrix().get(0, 8).clone());
        let c5 = kept.iter().position(|&j| j == 5).unwrap();
        assert_eq!(red.point.matrix().get(0, c5), a.matrix().get(0, 4));
        assert!(red.point.is_totally_nonnegative());
        check_minor_correspondence(&a, &red);
    }

    /// Reduced minors are the original minors with the removed pivots added back.
    fn check_minor_correspondence(a: &GrassmannPoint, red: &SolitonReduction) {
        let kept = red.kept_columns(a.n());
        for sub in (1..=red.point.n()).combinations(red.point.k()) {
            let mut full: Vec<usize> = sub.iter().map(|&c| kept[c - 1]).collect();
            full.extend(&red.removed_pivot_columns);
            full.sort_unstable();
            assert_eq!(red.point.minor(&sub).unwrap(), a.minor(&full).unwrap(), "{sub:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn measurement_is_tnn_rref_and_lindstrom_agrees(seed in 0u64..100_000, k in 1usize..4, extra in 1usize..4) {
            let n = (k + extra).min(6);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = LeDiagram::random(&mut rng, k, n, 0.6);
            let tab = LeTableau::random_weights(&mut rng, d, 7, 3);
            let net = build_network(&tab);
            let a = boundary_measurement(&net);
            prop_assert!(a.matrix().is_rref());
            prop_assert_eq!(a.pivots(), tab.diagram().pivots());
            for (sub, m) in a.plucker() {
                prop_assert!(m >= q(0), "negative minor {:?}", sub);
                prop_assert_eq!(&minor_by_paths(&net, &sub).unwrap(), &m, "{:?}", sub);
            }
            let red = reduce_network(&net);
            prop_assert_eq!(boundary_measurement(&red), a.clone());
            let d = tab.diagram().cell_dimension();
            let irreducible = (0..tab.n()).all(|b| net.degree(b) == 1)
                && (1..=tab.k()).all(|r| tab.diagram().row_count(r) > 0);
            if irreducible {
                prop_assert_eq!(red.edges.len() + tab.n(), 3 * d + red.kept_bivalent);
                prop_assert_eq!(red.internal_vertices().count() + tab.n(), 2 * d + red.kept_bivalent);
            }
        }

        #[test]
        fn soliton_reduction_preserves_minors(seed in 0u64..100_000, k in 1usize..4, extra in 1usize..4) {
            let n = k + extra;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = LeDiagram::random(&mut rng, k, n, 0.4);
            let a = boundary_measurement(&build_network(&LeTableau::random_weights(&mut rng, d, 5, 3)));
            if let Ok(red) = reduce_soliton_data(&a) {
                check_minor_correspondence(&a, &red);
                prop_assert!(red.point.is_totally_nonnegative());
                for j in 1..=red.point.n() {
                    prop_assert!((0..red.point.k()).any(|r| *red.point.matrix().get(r, j - 1) != q(0)));
                }
            }
        }
    }
}
