//! Named tableaux used by tests, the acceptance suite and the CLI.

use std::collections::BTreeMap;

use crate::algebra::Rational;
use crate::le::{LeDiagram, LeTableau};

fn tableau(n: usize, pivots: Vec<usize>, rows: Vec<Vec<(usize, Rational)>>) -> LeTableau {
    let filled = rows.iter().map(|r| r.iter().map(|(j, _)| *j).collect()).collect();
    let diagram = LeDiagram::from_pivots(n, pivots.clone(), filled).expect("catalog shape");
    let weights: BTreeMap<(usize, usize), Rational> = rows
        .into_iter()
        .zip(&pivots)
        .flat_map(|(row, &i)| row.into_iter().map(move |(j, w)| ((i, j), w)))
        .collect();
    LeTableau::new(diagram, weights).expect("catalog tableau")
}

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

/// Top cell of Gr(2,4) with the given w13, w14, w23, w24.
pub fn gr24(w13: Rational, w14: Rational, w23: Rational, w24: Rational) -> LeTableau {
    tableau(4, vec![1, 2], vec![vec![(3, w13), (4, w14)], vec![(3, w23), (4, w24)]])
}

pub fn gr24_sample() -> LeTableau {
    gr24(q(1, 1), q(2, 1), q(3, 2), q(1, 3))
}

/// Gr(4,9) cell with weights w15, w16, w19, w23, w25, w45, w46, w48, w49, w78.
pub fn gr492(w: [Rational; 10]) -> LeTableau {
    let [w15, w16, w19, w23, w25, w45, w46, w48, w49, w78] = w;
    tableau(
        9,
        vec![1, 2, 4, 7],
        vec![
            vec![(5, w15), (6, w16), (9, w19)],
            vec![(3, w23), (5, w25)],
            vec![(5, w45), (6, w46), (8, w48), (9, w49)],
            vec![(8, w78)],
        ],
    )
}

/// The ten-parameter cell of Gr(4,9) with pivots {1,2,4,7}.
pub fn gr492_sample() -> LeTableau {
    gr492([
        q(2, 1),
        q(3, 1),
        q(5, 2),
        q(1, 2),
        q(7, 3),
        q(4, 1),
        q(5, 4),
        q(6, 5),
        q(3, 7),
        q(9, 4),
    ])
}

pub fn gr492_unit() -> LeTableau {
    gr492(std::array::from_fn(|_| q(1, 1)))
}

/// Cell of Gr(2,5), d = 3, whose first row forms an isolated source to sink
/// component.
pub fn bivalent_example() -> LeTableau {
    tableau(5, vec![1, 3], vec![vec![(2, q(2, 1))], vec![(4, q(1, 2)), (5, q(3, 1))]])
}

/// Reducible cell of Gr(5,16) with an isolated source b_6 and isolated
/// sinks b_1, b_2, b_4, b_11.
pub fn case_b() -> LeTableau {
    tableau(
        16,
        vec![3, 6, 7, 12, 14],
        vec![
            vec![(5, q(1, 1)), (9, q(2, 1)), (10, q(3, 2))],
            vec![],
            vec![(8, q(1, 2)), (9, q(2, 1)), (10, q(1, 1))],
            vec![(13, q(3, 1)), (16, q(1, 1))],
            vec![(15, q(2, 3)), (16, q(5, 2))],
        ],
    )
}

/// Gr(1,2) with the single box (1,2) filled.
pub fn single_box(w12: Rational) -> LeTableau {
    tableau(2, vec![1], vec![vec![(2, w12)]])
}
