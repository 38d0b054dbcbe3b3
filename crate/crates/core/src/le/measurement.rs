use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{LeError, LeNetwork};
use crate::algebra::{AlgebraError, Rational, RationalMatrix};

/// A point of the totally non-negative Grassmannian, stored as its RREF
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannPoint {
    matrix: RationalMatrix,
    pivots: Vec<usize>,
}

impl GrassmannPoint {
    /// Any full-rank representative; it is brought to RREF.
    pub fn new(matrix: &RationalMatrix) -> Result<Self, AlgebraError> {
        let (matrix, pivots) = matrix.rref()?;
        Ok(Self { matrix, pivots })
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn minor(&self, subset: &[usize]) -> Result<Rational, AlgebraError> {
        self.matrix.maximal_minor(subset)
    }

    /// All k-subsets with their minors, in lexicographic order.
    pub fn plucker(&self) -> Vec<(Vec<usize>, Rational)> {
        (1..=self.n())
            .combinations(self.k())
            .map(|j| {
                let m = self.minor(&j).expect("k-subset");
                (j, m)
            })
            .collect()
    }

    /// Bases: the k-subsets with non-zero minor.
    pub fn matroid(&self) -> Vec<Vec<usize>> {
        self.plucker().into_iter().filter(|(_, m)| !m.is_zero()).map(|(j, _)| j).collect()
    }

    pub fn is_totally_nonnegative(&self) -> bool {
        self.plucker().iter().all(|(_, m)| !m.is_negative())
    }
}

/// A^r_j from path sums: (−1)^σ times the sum over paths b_{i_r} → b_j, with σ
/// the number of pivots strictly between i_r and j.
pub fn boundary_measurement(net: &LeNetwork) -> GrassmannPoint {
    let (k, n) = (net.k, net.n);
    let mut a = RationalMatrix::zeros(k, n);
    for (r0, &i) in net.pivots.iter().enumerate() {
        let sums = net.path_sums_from(net.boundary(i));
        for j in 1..=n {
            let v = if j == i {
                Rational::one()
            } else {
                let s = sums[net.boundary(j)].clone();
                let sigma = net.pivots.iter().filter(|&&p| i < p && p < j).count();
                if sigma % 2 == 1 {
                    -s
                } else {
                    s
                }
            };
            a.set(r0, j - 1, v);
        }
    }
    GrassmannPoint {
        matrix: a,
        pivots: net.pivots.clone(),
    }
}

/// Outcome of stripping zero columns and pivot-only rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolitonReduction {
    #[serde(skip)]
    pub point: GrassmannPoint,
    /// Original 1-based labels of the deleted zero columns.
    pub removed_columns: Vec<usize>,
    /// Original 1-based row indices of the deleted pivot-only rows.
    pub removed_rows: Vec<usize>,
    /// Pivot columns of the deleted rows.
    pub removed_pivot_columns: Vec<usize>,
}

impl SolitonReduction {
    /// Original column label of each surviving column.
    pub fn kept_columns(&self, n: usize) -> Vec<usize> {
        (1..=n)
            .filter(|j| !self.removed_columns.contains(j) && !self.removed_pivot_columns.contains(j))
            .collect()
    }
}

/// Drops zero columns and rows holding only their pivot. Each dropped pivot
/// row flips the sign of entries above it and to the right of its pivot, so
/// the result stays totally non-negative.
pub fn reduce_soliton_data(gp: &GrassmannPoint) -> Result<SolitonReduction, LeError> {
    let (k, n) = (gp.k(), gp.n());
    let a = gp.matrix();
    let removed_columns: Vec<usize> = (1..=n).filter(|&j| (0..k).all(|r| a.get(r, j - 1).is_zero())).collect();
    let removed_rows: Vec<usize> = (1..=k)
        .filter(|&r| (1..=n).all(|j| j == gp.pivots[r - 1] || a.get(r - 1, j - 1).is_zero()))
        .collect();
    let mut m = a.clone();
    for &r in &removed_rows {
        let i = gp.pivots[r - 1];
        for above in 1..r {
            for j in i + 1..=n {
                let v = -m.get(above - 1, j - 1).clone();
                m.set(above - 1, j - 1, v);
            }
        }
    }
    let removed_pivot_columns: Vec<usize> = removed_rows.iter().map(|&r| gp.pivots[r - 1]).collect();
    let keep_rows: Vec<usize> = (1..=k).filter(|r| !removed_rows.contains(r)).collect();
    let keep_cols: Vec<usize> = (1..=n)
        .filter(|j| !removed_columns.contains(j) && !removed_pivot_columns.contains(j))
        .collect();
    if keep_rows.is_empty() || keep_cols.len() < 2 {
        return Err(LeError::Shape("soliton data reduces to nothing".into()));
    }
    let rows = keep_rows
        .iter()
        .map(|&r| keep_cols.iter().map(|&j| m.get(r - 1, j - 1).clone()).collect())
        .collect();
    let reduced = RationalMatrix::from_rows(rows).map_err(|e| LeError::Shape(e.to_string()))?;
    let point = GrassmannPoint::new(&reduced).map_err(|e| LeError::Shape(e.to_string()))?;
    Ok(SolitonReduction {
        point,
        removed_columns,
        removed_rows,
        removed_pivot_columns,
    })
}
