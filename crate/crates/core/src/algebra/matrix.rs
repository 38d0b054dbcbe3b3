use std::fmt;

use num_traits::{One, Zero};

use super::{format_rational, AlgebraError, Rational};

/// Dense row-major matrix of exact rationals.
///
/// Column subsets and pivot sets use 1-based labels, matching the boundary
/// vertex labels b_1..b_n used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect();
        Self::from_rows(rows).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// 0-based entry access.
    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Rational> {
        self.row(r).to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row_vec(r)).collect()
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Gauss-Jordan reduction; returns the reduced matrix, its rank and the
    /// 1-based pivot columns. Works for any shape.
    fn gauss_jordan(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = m.get(r, c) - &f * m.get(row, c);
                    m.set(r, c, v);
                }
            }
            pivots.push(col + 1);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form of a full-row-rank matrix with its pivot set.
    pub fn rref(&self) -> Result<(RationalMatrix, Vec<usize>), AlgebraError> {
        let (m, pivots) = self.gauss_jordan();
        if pivots.len() < self.rows {
            return Err(AlgebraError::RankDeficient {
                rank: pivots.len(),
                rows: self.rows,
            });
        }
        Ok((m, pivots))
    }

    pub fn rank(&self) -> usize {
        self.gauss_jordan().1.len()
    }

    pub fn is_rref(&self) -> bool {
        match self.gauss_jordan() {
            (m, p) if p.len() == self.rows => m == *self,
            _ => false,
        }
    }

    pub fn det(&self) -> Result<Rational, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::Dimension("determinant of non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m.get(col, col).clone();
            det *= &piv;
            for r in col + 1..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col) / &piv;
                for c in col..n {
                    let v = m.get(r, c) - &f * m.get(col, c);
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    /// Submatrix on the given 1-based columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<RationalMatrix, AlgebraError> {
        if cols.iter().any(|&c| c == 0 || c > self.cols) {
            return Err(AlgebraError::BadSubset {
                subset: cols.to_vec(),
                k: cols.len(),
                n: self.cols,
            });
        }
        let mut out = RationalMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (i, &c) in cols.iter().enumerate() {
                out.set(r, i, self.get(r, c - 1).clone());
            }
        }
        Ok(out)
    }

    /// Δ_J: determinant of the columns J (1-based, strictly increasing).
    pub fn maximal_minor(&self, subset: &[usize]) -> Result<Rational, AlgebraError> {
        let ok = subset.len() == self.rows && subset.windows(2).all(|w| w[0] < w[1]) && subset.iter().all(|&c| c >= 1 && c <= self.cols);
        if !ok {
            return Err(AlgebraError::BadSubset {
                subset: subset.to_vec(),
                k: self.rows,
                n: self.cols,
            });
        }
        self.select_columns(subset)?.det()
    }

    pub fn remove_row(&self, r: usize) -> RationalMatrix {
        let rows = (0..self.rows).filter(|&i| i != r).map(|i| self.row_vec(i)).collect();
        RationalMatrix::from_rows(rows).unwrap_or_else(|_| RationalMatrix::zeros(0, self.cols))
    }

    /// Drops the given 0-based column.
    pub fn remove_column(&self, c: usize) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.rows, self.cols - 1);
        for r in 0..self.rows {
            let mut j = 0;
            for col in 0..self.cols {
                if col != c {
                    out.set(r, j, self.get(r, col).clone());
                    j += 1;
                }
            }
        }
        out
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
