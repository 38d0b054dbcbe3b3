use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::LeError;
use crate::algebra::{format_rational, parse_rational, Rational};

/// A filling of a Young diagram inside the k×(n−k) rectangle.
///
/// Rows are addressed by their 1-based index r with pivot i_r; boxes of row r
/// by the non-pivot column label j > i_r.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeDiagram {
    k: usize,
    n: usize,
    pivots: Vec<usize>,
    filled: Vec<BTreeSet<usize>>,
}

/// Pivots from a partition: i_r = n − k + r − λ_r.
pub fn pivots_from_partition(k: usize, n: usize, partition: &[usize]) -> Result<Vec<usize>, LeError> {
    if partition.len() != k {
        return Err(LeError::Shape(format!("partition has {} parts, expected {k}", partition.len())));
    }
    if partition.windows(2).any(|w| w[0] < w[1]) || partition.iter().any(|&l| l > n - k) {
        return Err(LeError::Shape(format!("{partition:?} is not a partition inside {k}x{}", n - k)));
    }
    Ok(partition.iter().enumerate().map(|(r, &l)| n - k + r + 1 - l).collect())
}

pub fn partition_from_pivots(n: usize, pivots: &[usize]) -> Vec<usize> {
    let k = pivots.len();
    pivots.iter().enumerate().map(|(r, &i)| n - k + r + 1 - i).collect()
}

impl LeDiagram {
    /// Structural constructor: checks the shape but not the Le-rule.
    pub fn from_pivots(n: usize, pivots: Vec<usize>, filled: Vec<Vec<usize>>) -> Result<Self, LeError> {
        let k = pivots.len();
        if n < 2 || k == 0 || k > n {
            return Err(LeError::Shape(format!("need n >= 2 and 1 <= k <= n, got k={k}, n={n}")));
        }
        if pivots.windows(2).any(|w| w[0] >= w[1]) || pivots.iter().any(|&i| i == 0 || i > n) {
            return Err(LeError::Shape(format!(
                "pivot set {pivots:?} is not an increasing subset of [1,{n}]"
            )));
        }
        if filled.len() != k {
            return Err(LeError::Shape(format!("fill has {} rows, expected {k}", filled.len())));
        }
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        let mut rows = Vec::with_capacity(k);
        for (r, cols) in filled.into_iter().enumerate() {
            let set: BTreeSet<usize> = cols.into_iter().collect();
            if let Some(&j) = set.iter().find(|&&j| j <= pivots[r] || j > n || pivot_set.contains(&j)) {
                return Err(LeError::Shape(format!("row {} has no box in column {j}", r + 1)));
            }
            rows.push(set);
        }
        Ok(Self {
            k,
            n,
            pivots,
            filled: rows,
        })
    }

    /// Fill rows in drawing order: `fill[r][c]` is the c-th box from the left.
    pub fn from_partition(k: usize, n: usize, partition: &[usize], fill: &[Vec<u8>]) -> Result<Self, LeError> {
        if n < 2 || k == 0 || k > n {
            return Err(LeError::Shape(format!("need n >= 2 and 1 <= k <= n, got k={k}, n={n}")));
        }
        let pivots = pivots_from_partition(k, n, partition)?;
        if fill.len() != k {
            return Err(LeError::Shape(format!("fill has {} rows, expected {k}", fill.len())));
        }
        let skeleton = Self::from_pivots(n, pivots.clone(), vec![vec![]; k])?;
        let mut filled = Vec::with_capacity(k);
        for (r, row) in fill.iter().enumerate() {
            if row.len() != partition[r] {
                return Err(LeError::Shape(format!(
                    "fill row {} has {} entries, partition says {}",
                    r + 1,
                    row.len(),
                    partition[r]
                )));
            }
            let cols = skeleton.row_columns(r + 1);
            let mut set = Vec::new();
            for (c, &bit) in row.iter().enumerate() {
                match bit {
                    0 => {}
                    1 => set.push(cols[cols.len() - 1 - c]),
                    other => return Err(LeError::Shape(format!("fill entry {other} is not 0 or 1"))),
                }
            }
            filled.push(set);
        }
        Self::from_pivots(n, pivots, filled)
    }

    /// Every box filled: the top cell of Gr(k, n).
    pub fn top_cell(k: usize, n: usize) -> Result<Self, LeError> {
        let skeleton = Self::from_pivots(n, (1..=k).collect(), vec![vec![]; k])?;
        let filled = (1..=k).map(|r| skeleton.row_columns(r)).collect();
        Self::from_pivots(n, (1..=k).collect(), filled)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Pivot set I, ascending.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn pivot(&self, r: usize) -> usize {
        self.pivots[r - 1]
    }

    pub fn is_pivot(&self, j: usize) -> bool {
        self.pivots.binary_search(&j).is_ok()
    }

    /// Row index r with i_r = i, if i is a pivot.
    pub fn row_of_pivot(&self, i: usize) -> Option<usize> {
        self.pivots.binary_search(&i).ok().map(|p| p + 1)
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        (1..=self.n).filter(|&j| !self.is_pivot(j)).collect()
    }

    pub fn partition(&self) -> Vec<usize> {
        partition_from_pivots(self.n, &self.pivots)
    }

    /// Box columns of row r in increasing j (right to left in the drawing).
    pub fn row_columns(&self, r: usize) -> Vec<usize> {
        let i = self.pivot(r);
        (i + 1..=self.n).filter(|&j| !self.is_pivot(j)).collect()
    }

    pub fn has_box(&self, r: usize, j: usize) -> bool {
        j > self.pivot(r) && j <= self.n && !self.is_pivot(j)
    }

    pub fn is_filled(&self, r: usize, j: usize) -> bool {
        self.filled[r - 1].contains(&j)
    }

    /// Filled columns j_1 < … < j_{N_r} of row r.
    pub fn filled_in_row(&self, r: usize) -> Vec<usize> {
        self.filled[r - 1].iter().copied().collect()
    }

    /// N_r, the number of filled boxes in row r.
    pub fn row_count(&self, r: usize) -> usize {
        self.filled[r - 1].len()
    }

    /// Fill bits of each row in drawing order (left to right).
    pub fn fill_bits(&self) -> Vec<Vec<u8>> {
        (1..=self.k)
            .map(|r| self.row_columns(r).iter().rev().map(|&j| u8::from(self.is_filled(r, j))).collect())
            .collect()
    }

    /// d, the number of filled boxes.
    pub fn cell_dimension(&self) -> usize {
        self.filled.iter().map(BTreeSet::len).sum()
    }

    /// Checks the Le-rule at every triple; reports the first box (row l,
    /// column k) that should be filled but is not.
    pub fn validate_le(&self) -> Result<(), LeError> {
        match self.first_violation() {
            None => Ok(()),
            Some((upper, row, column)) => Err(LeError::LeViolation { upper, row, column }),
        }
    }

    fn first_violation(&self) -> Option<(usize, usize, usize)> {
        for l in 2..=self.k {
            for &j in &self.filled[l - 1] {
                for i in 1..l {
                    for &c in self.filled[i - 1].range(..j) {
                        if self.has_box(l, c) && !self.is_filled(l, c) {
                            return Some((i, l, c));
                        }
                    }
                }
            }
        }
        None
    }

    /// Smallest Le-diagram containing this filling.
    pub fn le_closure(mut self) -> Self {
        while let Some((_, l, c)) = self.first_violation() {
            self.filled[l - 1].insert(c);
        }
        self
    }

    /// Random Le-diagram: random pivots, random fill, then Le-closure.
    pub fn random<R: Rng>(rng: &mut R, k: usize, n: usize, density: f64) -> Self {
        let mut all: Vec<usize> = (1..=n).collect();
        rand::seq::SliceRandom::shuffle(all.as_mut_slice(), rng);
        let mut pivots: Vec<usize> = all[..k].to_vec();
        pivots.sort_unstable();
        let skeleton = Self::from_pivots(n, pivots.clone(), vec![vec![]; k]).expect("valid pivots");
        let filled = (1..=k)
            .map(|r| skeleton.row_columns(r).into_iter().filter(|_| rng.gen_bool(density)).collect())
            .collect();
        Self::from_pivots(n, pivots, filled).expect("valid fill").le_closure()
    }
}

/// Le-diagram with a positive weight w_{i_r j} on every filled box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeTableau {
    diagram: LeDiagram,
    weights: BTreeMap<(usize, usize), Rational>,
}

impl LeTableau {
    /// Weights are keyed by (pivot i_r, column j).
    pub fn new(diagram: LeDiagram, weights: BTreeMap<(usize, usize), Rational>) -> Result<Self, LeError> {
        diagram.validate_le()?;
        for r in 1..=diagram.k() {
            for j in diagram.filled_in_row(r) {
                let key = (diagram.pivot(r), j);
                match weights.get(&key) {
                    None => return Err(LeError::MissingWeight { i: key.0, j }),
                    Some(w) if !w.is_positive() => return Err(LeError::NonPositiveWeight { i: key.0, j }),
                    _ => {}
                }
            }
        }
        if let Some(&(i, j)) = weights
            .keys()
            .find(|&&(i, j)| diagram.row_of_pivot(i).is_none_or(|r| !diagram.is_filled(r, j)))
        {
            return Err(LeError::UnexpectedWeight { i, j });
        }
        Ok(Self { diagram, weights })
    }

    /// Same diagram, every weight set to one.
    pub fn unit(diagram: LeDiagram) -> Result<Self, LeError> {
        let weights = Self::keys(&diagram).map(|key| (key, Rational::from_integer(1.into()))).collect();
        Self::new(diagram, weights)
    }

    /// Random weights p/q with p in 1..=max_num and q in 1..=max_den.
    pub fn random_weights<R: Rng>(rng: &mut R, diagram: LeDiagram, max_num: i64, max_den: i64) -> Self {
        let weights = Self::keys(&diagram)
            .map(|key| {
                let w = Rational::new(rng.gen_range(1..=max_num).into(), rng.gen_range(1..=max_den).into());
                (key, w)
            })
            .collect();
        Self::new(diagram, weights).expect("random weights on a valid diagram")
    }

    fn keys(diagram: &LeDiagram) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=diagram.k()).flat_map(move |r| {
            let i = diagram.pivot(r);
            diagram.filled_in_row(r).into_iter().map(move |j| (i, j))
        })
    }

    pub fn diagram(&self) -> &LeDiagram {
        &self.diagram
    }

    pub fn k(&self) -> usize {
        self.diagram.k
    }

    pub fn n(&self) -> usize {
        self.diagram.n
    }

    /// w_{ij}; panics when the box is empty.
    pub fn weight(&self, i: usize, j: usize) -> &Rational {
        &self.weights[&(i, j)]
    }

    pub fn weights(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.weights
    }

    pub fn to_json(&self) -> TableauJson {
        TableauJson {
            k: self.k(),
            n: self.n(),
            partition: self.diagram.partition(),
            fill: Some(self.diagram.fill_bits()),
            weights: self
                .weights
                .iter()
                .map(|(&(i, j), w)| (format!("{i},{j}"), format_rational(w)))
                .collect(),
        }
    }
}

/// File format of a tableau. `fill` may be omitted, in which case it is
/// read off the weight keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableauJson {
    pub k: usize,
    pub n: usize,
    pub partition: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fill: Option<Vec<Vec<u8>>>,
    pub weights: BTreeMap<String, String>,
}

impl TryFrom<TableauJson> for LeTableau {
    type Error = LeError;

    fn try_from(js: TableauJson) -> Result<Self, LeError> {
        let mut weights = BTreeMap::new();
        for (key, value) in &js.weights {
            let bad = || LeError::Shape(format!("weight key {key:?} is not of the form \"i,j\""));
            let (i, j) = key.split_once(',').ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let j: usize = j.trim().parse().map_err(|_| bad())?;
            let w = parse_rational(value).map_err(|e| LeError::Shape(e.to_string()))?;
            weights.insert((i, j), w);
        }
        let diagram = match &js.fill {
            Some(fill) => LeDiagram::from_partition(js.k, js.n, &js.partition, fill)?,
            None => {
                if js.n < 2 || js.k == 0 || js.k > js.n {
                    return Err(LeError::Shape(format!("need n >= 2 and 1 <= k <= n, got k={}, n={}", js.k, js.n)));
                }
                let pivots = pivots_from_partition(js.k, js.n, &js.partition)?;
                let mut filled = vec![Vec::new(); js.k];
                for &(i, j) in weights.keys() {
                    let r = pivots.binary_search(&i).map_err(|_| LeError::UnexpectedWeight { i, j })?;
                    filled[r].push(j);
                }
                LeDiagram::from_pivots(js.n, pivots, filled)?
            }
        };
        LeTableau::new(diagram, weights)
    }
}
