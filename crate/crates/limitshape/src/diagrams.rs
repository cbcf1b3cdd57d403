//! Young diagrams in English convention with 1-based `(row, col)` cells.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact big integer count.
pub type BigCount = BigUint;

/// Diagrams up to this many cells get exact dimensions by default.
pub const DEFAULT_EXACT_THRESHOLD: usize = 400;

/// A partition `λ(1) ≥ λ(2) ≥ … > 0`, stored without trailing zeros.
///
/// Serialises as a plain JSON array of row lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

/// A cell of a diagram; both coordinates are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

/// An `rows × cols` rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rectangle {
    pub rows: usize,
    pub cols: usize,
}

impl Rectangle {
    pub fn new(rows: usize, cols: usize) -> Self {
        Rectangle { rows, cols }
    }

    pub fn square(n: usize) -> Self {
        Rectangle { rows: n, cols: n }
    }

    pub fn area(&self) -> usize {
        self.rows * self.cols
    }

    pub fn shape(&self) -> Partition {
        Partition::rectangle(self.rows, self.cols)
    }
}

/// Dimension either as an exact count or as its natural logarithm.
#[derive(Clone, Debug, PartialEq)]
pub enum Dimension {
    Exact(BigCount),
    Log(f64),
}

impl Dimension {
    pub fn ln(&self) -> f64 {
        match self {
            Dimension::Exact(d) => ln_big(d),
            Dimension::Log(l) => *l,
        }
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Partition {
    /// Builds a partition from row lengths. Trailing zeros are dropped; any
    /// increase between consecutive rows is an error.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::param(format!("row lengths {parts:?} are not non-increasing")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn rectangle(rows: usize, cols: usize) -> Self {
        if cols == 0 {
            return Partition::empty();
        }
        Partition { parts: vec![cols; rows] }
    }

    pub fn square(n: usize) -> Self {
        Partition::rectangle(n, n)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of cells `|λ|`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero rows, `λ'(1)`.
    pub fn num_rows(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `λ(i)`, zero past the last row.
    pub fn row(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// `λ'(j)`, the length of column `j`.
    pub fn col(&self, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        self.parts.iter().take_while(|&&p| p >= j).count()
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.row(1);
        Partition { parts: (1..=w).map(|j| self.col(j)).collect() }
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.row >= 1 && c.col >= 1 && c.col <= self.row(c.row)
    }

    pub fn fits_in(&self, rect: Rectangle) -> bool {
        self.num_rows() <= rect.rows && self.row(1) <= rect.cols
    }

    /// Is `self ⊆ other` as diagrams.
    pub fn is_subset_of(&self, other: &Partition) -> bool {
        self.num_rows() <= other.num_rows()
            && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| Cell::new(i + 1, j)))
    }

    /// `h(i,j) = λ(i) - j + λ'(j) - i + 1`.
    pub fn hook_length(&self, c: Cell) -> Result<usize> {
        if !self.contains(c) {
            return Err(Error::CellOutsideDiagram { row: c.row, col: c.col });
        }
        Ok(self.row(c.row) - c.col + self.col(c.col) - c.row + 1)
    }

    /// All hook lengths, row-major.
    pub fn hook_lengths(&self) -> Vec<usize> {
        let conj = self.conjugate();
        self.cells()
            .map(|c| self.row(c.row) - c.col + conj.row(c.col) - c.row + 1)
            .collect()
    }

    /// Removable cells, top to bottom.
    pub fn corners(&self) -> Vec<Cell> {
        (1..=self.num_rows())
            .filter(|&i| self.row(i) > self.row(i + 1))
            .map(|i| Cell::new(i, self.row(i)))
            .collect()
    }

    /// Addable cells, top to bottom.
    pub fn exterior_corners(&self) -> Vec<Cell> {
        (1..=self.num_rows() + 1)
            .filter(|&i| i == 1 || self.row(i - 1) > self.row(i))
            .map(|i| Cell::new(i, self.row(i) + 1))
            .collect()
    }

    /// Removes a corner cell.
    pub fn remove_corner(&self, c: Cell) -> Result<Partition> {
        if !self.contains(c) || self.row(c.row + 1) >= c.col || self.row(c.row) != c.col {
            return Err(Error::param(format!("{c} is not a corner of {self}")));
        }
        let mut parts = self.parts.clone();
        parts[c.row - 1] -= 1;
        Partition::new(parts)
    }

    /// Adds an exterior corner cell.
    pub fn add_cell(&self, c: Cell) -> Result<Partition> {
        let ok = c.row >= 1
            && c.row <= self.num_rows() + 1
            && c.col == self.row(c.row) + 1
            && (c.row == 1 || self.row(c.row - 1) >= c.col);
        if !ok {
            return Err(Error::param(format!("{c} is not addable to {self}")));
        }
        let mut parts = self.parts.clone();
        if c.row > parts.len() {
            parts.push(1);
        } else {
            parts[c.row - 1] += 1;
        }
        Ok(Partition { parts })
    }

    /// The diagram obtained by adding one box to the first row.
    pub fn next_first_row(&self) -> Partition {
        let mut parts = self.parts.clone();
        if parts.is_empty() {
            parts.push(1);
        } else {
            parts[0] += 1;
        }
        Partition { parts }
    }

    /// Skew complement of `λ` inside the rectangle, rotated by 180 degrees:
    /// `μ(i) = cols - λ(rows + 1 - i)`.
    pub fn complement_in_rectangle(&self, rect: Rectangle) -> Result<Partition> {
        if !self.fits_in(rect) {
            return Err(Error::ShapeExceedsRectangle { rows: rect.rows, cols: rect.cols });
        }
        let parts = (1..=rect.rows).map(|i| rect.cols - self.row(rect.rows + 1 - i)).collect();
        Partition::new(parts)
    }

    /// Number of standard Young tableaux, `|λ|! / Π h`.
    pub fn dimension(&self) -> BigCount {
        let mut num = factorial(self.size());
        let mut den = BigUint::one();
        for h in self.hook_lengths() {
            den *= h as u64;
        }
        num /= den;
        num
    }

    /// `ln d(λ)` through log-gamma sums; never overflows.
    pub fn log_dimension(&self) -> f64 {
        let lf: f64 = ln_factorial(self.size());
        let lh: f64 = self.hook_lengths().iter().map(|&h| (h as f64).ln()).sum();
        lf - lh
    }

    /// Exact below `threshold` cells, logarithmic above.
    pub fn dimension_auto(&self, threshold: usize) -> Dimension {
        if self.size() <= threshold {
            Dimension::Exact(self.dimension())
        } else {
            Dimension::Log(self.log_dimension())
        }
    }

    /// All partitions of `k`, in reverse lexicographic order.
    pub fn all_of_size(k: usize) -> Vec<Partition> {
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(k, k, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions of `k` fitting in the rectangle.
    pub fn all_of_size_in(k: usize, rect: Rectangle) -> Vec<Partition> {
        Partition::all_of_size(k).into_iter().filter(|p| p.fits_in(rect)).collect()
    }
}

/// `d(□_n)` by the closed product
/// `(n²)! / (Π_{m=1}^{n-1} [m(2n-m)]^m · n^n)`.
pub fn square_dimension(n: usize) -> BigCount {
    let mut den = BigUint::one();
    for m in 1..n {
        let f = BigUint::from((m * (2 * n - m)) as u64);
        den *= num_traits::pow(f, m);
    }
    den *= num_traits::pow(BigUint::from(n as u64), n);
    factorial(n * n) / den
}

pub fn factorial(k: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=k as u64 {
        acc *= i;
    }
    acc
}

pub fn ln_factorial(k: usize) -> f64 {
    statrs::function::gamma::ln_gamma(k as f64 + 1.0)
}

/// Natural log of a big integer without converting through `f64` overflow.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = num_traits::ToPrimitive::to_f64(&(x >> shift)).unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
