//! Hook walks, uniform standard tableaux, RSK and the measures on shapes
//! that they induce.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::diagrams::{factorial, Cell, Partition, Rectangle};
use crate::error::{Error, Result};

/// A standard Young tableau, stored row by row.
///
/// Serialises as a row-major JSON array of arrays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct Tableau {
    rows: Vec<Vec<u32>>,
}

impl TryFrom<Vec<Vec<u32>>> for Tableau {
    type Error = Error;

    fn try_from(rows: Vec<Vec<u32>>) -> Result<Self> {
        Tableau::new(rows)
    }
}

impl From<Tableau> for Vec<Vec<u32>> {
    fn from(t: Tableau) -> Self {
        t.rows
    }
}

impl Tableau {
    /// Validates that the rows form a standard filling of a Young diagram.
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let t = Tableau { rows };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<()> {
        if self.rows.iter().any(|r| r.is_empty()) {
            return Err(Error::NotStandard("empty row".into()));
        }
        Partition::new(self.rows.iter().map(|r| r.len()).collect())
            .map_err(|e| Error::NotStandard(e.to_string()))?;
        let k = self.size();
        let mut seen = vec![false; k + 1];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let x = x as usize;
                if x == 0 || x > k || seen[x] {
                    return Err(Error::NotStandard(format!("entry {x} repeated or out of range")));
                }
                seen[x] = true;
                if j > 0 && row[j - 1] >= row[j] {
                    return Err(Error::NotStandard(format!("row {} not increasing", i + 1)));
                }
                if i > 0 && self.rows[i - 1][j] >= row[j] {
                    return Err(Error::NotStandard(format!("column {} not increasing", j + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition::new(self.rows.iter().map(|r| r.len()).collect()).expect("validated shape")
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Entry at a 1-based cell.
    pub fn get(&self, c: Cell) -> Option<u32> {
        self.rows.get(c.row.wrapping_sub(1))?.get(c.col.wrapping_sub(1)).copied()
    }

    /// Cell holding each entry; index 0 is unused.
    pub fn positions(&self) -> Vec<Cell> {
        let mut pos = vec![Cell::new(0, 0); self.size() + 1];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                pos[x as usize] = Cell::new(i + 1, j + 1);
            }
        }
        pos
    }

    /// Side length if the shape is a square.
    pub fn square_side(&self) -> Option<usize> {
        let n = self.rows.len();
        self.rows.iter().all(|r| r.len() == n).then_some(n)
    }

    /// Shape of the subtableau `{t ≤ k}`.
    pub fn shape_at(&self, k: usize) -> Partition {
        let parts = self
            .rows
            .iter()
            .map(|r| r.iter().take_while(|&&x| x as usize <= k).count())
            .collect();
        Partition::new(parts).expect("subtableau of a standard tableau is a diagram")
    }

    /// `λ^1 ⊂ λ^2 ⊂ … ⊂ λ^{|T|}`.
    pub fn growth_path(&self) -> Vec<Partition> {
        let pos = self.positions();
        let mut parts: Vec<usize> = Vec::new();
        let mut out = Vec::with_capacity(self.size());
        for c in pos.iter().skip(1) {
            if parts.len() < c.row {
                parts.push(0);
            }
            parts[c.row - 1] += 1;
            out.push(Partition::new(parts.clone()).expect("growth of standard tableau"));
        }
        out
    }

    /// The transposed tableau.
    pub fn transpose(&self) -> Tableau {
        let w = self.rows.first().map_or(0, |r| r.len());
        let rows = (0..w)
            .map(|j| self.rows.iter().take_while(|r| r.len() > j).map(|r| r[j]).collect())
            .collect();
        Tableau { rows }
    }
}

/// A permutation of `1..=k` in one-line notation. Serialises as a JSON array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    values: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.values
    }
}

impl Permutation {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let k = values.len();
        let mut seen = vec![false; k + 1];
        for &v in &values {
            let v = v as usize;
            if v == 0 || v > k || seen[v] {
                return Err(Error::param(format!("{values:?} is not a permutation")));
            }
            seen[v] = true;
        }
        Ok(Permutation { values })
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn uniform<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        let mut values: Vec<u32> = (1..=k as u32).collect();
        values.shuffle(rng);
        Permutation { values }
    }
}

/// Mutable diagram with row and column lengths kept in sync, used by the
/// hook-walk sampler. Indices are 0-based internally.
#[derive(Clone, Debug)]
struct WorkShape {
    rows: Vec<usize>,
    cols: Vec<usize>,
    size: usize,
}

impl WorkShape {
    fn new(l: &Partition) -> Self {
        WorkShape {
            rows: l.parts().to_vec(),
            cols: l.conjugate().parts().to_vec(),
            size: l.size(),
        }
    }

    fn uniform_cell<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        let mut r = rng.gen_range(0..self.size);
        for (i, &len) in self.rows.iter().enumerate() {
            if r < len {
                return (i, r);
            }
            r -= len;
        }
        unreachable!("cell index below diagram size")
    }

    fn walk<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        let (mut i, mut j) = self.uniform_cell(rng);
        loop {
            let arm = self.rows[i] - j - 1;
            let leg = self.cols[j] - i - 1;
            if arm + leg == 0 {
                return (i, j);
            }
            let r = rng.gen_range(0..arm + leg);
            if r < arm {
                j += r + 1;
            } else {
                i += r - arm + 1;
            }
        }
    }

    fn remove(&mut self, i: usize, j: usize) {
        self.rows[i] -= 1;
        self.cols[j] -= 1;
        if self.rows[i] == 0 {
            self.rows.pop();
        }
        if self.cols[j] == 0 {
            self.cols.pop();
        }
        self.size -= 1;
    }
}

/// One Greene–Nijenhuis–Wilf hook walk: start at a uniform cell, jump to a
/// uniform cell of the current hook, stop at a corner.
pub fn hook_walk<R: Rng + ?Sized>(l: &Partition, rng: &mut R) -> Result<Cell> {
    if l.is_empty() {
        return Err(Error::EmptyDiagram);
    }
    let (i, j) = WorkShape::new(l).walk(rng);
    Ok(Cell::new(i + 1, j + 1))
}

/// Uniform standard tableau of shape `λ`: the largest entry goes to a
/// hook-walk corner, then recurse on the smaller diagram.
pub fn sample_uniform_tableau<R: Rng + ?Sized>(l: &Partition, rng: &mut R) -> Tableau {
    let mut rows: Vec<Vec<u32>> = l.parts().iter().map(|&len| vec![0; len]).collect();
    let mut w = WorkShape::new(l);
    for entry in (1..=l.size() as u32).rev() {
        let (i, j) = w.walk(rng);
        rows[i][j] = entry;
        w.remove(i, j);
    }
    Tableau { rows }
}

/// Uniform standard tableau of the `rows × cols` rectangle.
pub fn sample_rectangular_tableau<R: Rng + ?Sized>(rect: Rectangle, rng: &mut R) -> Result<Tableau> {
    if rect.area() == 0 {
        return Err(Error::EmptyDiagram);
    }
    Ok(sample_uniform_tableau(&rect.shape(), rng))
}

/// Uniform standard tableau of the `n × n` square.
pub fn sample_square_tableau<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Tableau> {
    sample_rectangular_tableau(Rectangle::square(n), rng)
}

/// Robinson–Schensted row insertion. Returns the insertion tableau `P` and
/// the recording tableau `Q`.
pub fn rsk(pi: &Permutation) -> (Tableau, Tableau) {
    let mut p: Vec<Vec<u32>> = Vec::new();
    let mut q: Vec<Vec<u32>> = Vec::new();
    for (step, &v) in pi.values().iter().enumerate() {
        let mut x = v;
        let mut r = 0;
        loop {
            if r == p.len() {
                p.push(vec![x]);
                q.push(vec![step as u32 + 1]);
                break;
            }
            let row = &mut p[r];
            let pos = row.partition_point(|&y| y < x);
            if pos == row.len() {
                row.push(x);
                q[r].push(step as u32 + 1);
                break;
            }
            std::mem::swap(&mut row[pos], &mut x);
            r += 1;
        }
    }
    (Tableau { rows: p }, Tableau { rows: q })
}

/// Inverse of [`rsk`].
pub fn inverse_rsk(p: &Tableau, q: &Tableau) -> Result<Permutation> {
    if p.shape() != q.shape() {
        return Err(Error::ShapeMismatch(format!("{} vs {}", p.shape(), q.shape())));
    }
    let k = p.size();
    let mut prow = p.rows.clone();
    let qpos = q.positions();
    let mut out = vec![0u32; k];
    for step in (1..=k).rev() {
        let c = qpos[step];
        let r = c.row - 1;
        if prow[r].len() != c.col {
            return Err(Error::NotStandard("recording tableau is not standard".into()));
        }
        let mut x = prow[r].pop().expect("nonempty row");
        if prow[r].is_empty() {
            prow.pop();
        }
        for up in (0..r).rev() {
            let row = &mut prow[up];
            let pos = row.partition_point(|&y| y < x) - 1;
            std::mem::swap(&mut row[pos], &mut x);
        }
        out[step - 1] = x;
    }
    Permutation::new(out)
}

/// Plancherel-distributed standard tableau of size `k`: the recording
/// tableau of a uniform permutation.
pub fn sample_plancherel_tableau<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Tableau {
    rsk(&Permutation::uniform(k, rng)).1
}

/// `μ_λ(c) = d(λ∖c)/d(λ)` on the corners of `λ`, as exact rationals.
pub fn cotransition_measure(l: &Partition) -> Result<BTreeMap<Cell, BigRational>> {
    if l.is_empty() {
        return Err(Error::EmptyDiagram);
    }
    let d = BigInt::from(l.dimension());
    l.corners()
        .into_iter()
        .map(|c| {
            let dc = BigInt::from(l.remove_corner(c)?.dimension());
            Ok((c, BigRational::new(dc, d.clone())))
        })
        .collect()
}

/// Floating point cotransition measure through the hook product
/// `μ_λ(c) = (1/|λ|) Π h_b / (h_b - 1)` over the other cells `b` of the row
/// and column of `c`. Usable far past the exact threshold.
pub fn cotransition_measure_f64(l: &Partition) -> Result<BTreeMap<Cell, f64>> {
    if l.is_empty() {
        return Err(Error::EmptyDiagram);
    }
    let k = l.size() as f64;
    Ok(l.corners()
        .into_iter()
        .map(|c| {
            let mut prod = 1.0 / k;
            for j in 1..c.col {
                let h = l.hook_length(Cell::new(c.row, j)).unwrap() as f64;
                prod *= h / (h - 1.0);
            }
            for i in 1..c.row {
                let h = l.hook_length(Cell::new(i, c.col)).unwrap() as f64;
                prod *= h / (h - 1.0);
            }
            (c, prod)
        })
        .collect())
}

fn falling(top: usize, len: usize) -> BigUint {
    let mut acc = BigUint::one();
    for t in 0..len {
        acc *= (top - t) as u64;
    }
    acc
}

/// `ν_{n,k}(λ) / μ_k(λ)` by the falling-power product
/// `Π_i (n+λ(i)-i)^{↓λ(i)} · Π_j (n+λ'(j)-j)^{↓λ'(j)} / (n²)^{↓k}`,
/// rows `i ≤ λ'(1)`, columns `j ≤ λ(1)`.
pub fn nu_ratio(l: &Partition, n: usize) -> Result<BigRational> {
    if !l.fits_in(Rectangle::square(n)) {
        return Err(Error::ShapeExceedsRectangle { rows: n, cols: n });
    }
    let conj = l.conjugate();
    let mut num = BigUint::one();
    for (i, &len) in l.parts().iter().enumerate() {
        num *= falling(n + len - (i + 1), len);
    }
    for (j, &len) in conj.parts().iter().enumerate() {
        num *= falling(n + len - (j + 1), len);
    }
    let den = falling(n * n, l.size());
    Ok(BigRational::new(num.into(), den.into()))
}

/// The same ratio from dimensions: `d(□_n∖λ) k! / (d(□_n) d(λ))`.
pub fn nu_ratio_direct(l: &Partition, n: usize) -> Result<BigRational> {
    let rect = Rectangle::square(n);
    let comp = l.complement_in_rectangle(rect)?;
    let num = comp.dimension() * factorial(l.size());
    let den = Partition::square(n).dimension() * l.dimension();
    Ok(BigRational::new(num.into(), den.into()))
}

/// `ν_{n,k}(λ) = d(λ) d(□_n∖λ) / d(□_n)`: the law of the shape of the
/// `k`-subtableau of a uniform `n × n` tableau.
pub fn nu_probability(l: &Partition, n: usize) -> Result<BigRational> {
    let comp = l.complement_in_rectangle(Rectangle::square(n))?;
    let num = l.dimension() * comp.dimension();
    Ok(BigRational::new(num.into(), Partition::square(n).dimension().into()))
}

/// Plancherel probability `μ_k(λ) = d(λ)² / k!`.
pub fn plancherel_probability(l: &Partition) -> BigRational {
    let d = l.dimension();
    BigRational::new((&d * &d).into(), factorial(l.size()).into())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
