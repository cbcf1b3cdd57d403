//! Partitions of an integer into a fixed number of parts, and plane
//! partitions with a fixed support built from them.
//!
//! `p(m, k)` counts partitions of `m` into exactly `k` parts and
//! `q(m, k) = p(m - k(k-1)/2, k)` those with distinct parts.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::diagrams::{BigCount, Cell, Partition, Rectangle};
use crate::error::{Error, Result};
use crate::sampler::{self, Tableau};

/// Largest total handled by the counting tables.
pub const MAX_TOTAL: usize = 1_000_000;
/// Largest number of parts handled by the counting tables.
pub const MAX_PARTS: usize = 64;
/// Totals up to this size are sampled with exact big-integer tables.
pub const EXACT_TOTAL: usize = 100_000;
/// Exact tables are also capped in entries to bound memory.
const EXACT_ENTRIES: usize = 4_000_000;

fn check_budget(m: usize, k: usize) -> Result<()> {
    if m > MAX_TOTAL || k > MAX_PARTS {
        return Err(Error::BudgetExceeded(format!(
            "m = {m}, k = {k} exceeds m ≤ {MAX_TOTAL}, k ≤ {MAX_PARTS}"
        )));
    }
    Ok(())
}

fn staircase(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Number of partitions of `m` into exactly `k` parts, distinct if asked.
pub fn count_partitions(m: usize, k: usize, distinct: bool) -> Result<BigCount> {
    check_budget(m, k)?;
    let m = if distinct {
        match m.checked_sub(staircase(k)) {
            Some(r) => r,
            None => return Ok(BigUint::zero()),
        }
    } else {
        m
    };
    if k == 0 {
        return Ok(if m == 0 { 1u32.into() } else { BigUint::zero() });
    }
    // Column j holds p(·, j); p(t, j) = p(t-1, j-1) + p(t-j, j).
    let mut prev: Vec<BigUint> = vec![BigUint::zero(); m + 1];
    prev[0] = 1u32.into();
    for j in 1..=k {
        let mut cur: Vec<BigUint> = vec![BigUint::zero(); m + 1];
        for t in j..=m {
            let a = &prev[t - 1];
            let b = if t >= j { cur[t - j].clone() } else { BigUint::zero() };
            cur[t] = a + b;
        }
        prev = cur;
    }
    Ok(prev.swap_remove(m))
}

/// `q(m, k) / p(m, k)` computed from exact counts.
pub fn distinct_fraction(m: usize, k: usize) -> Result<f64> {
    let q = count_partitions(m, k, true)?;
    let p = count_partitions(m, k, false)?;
    if p.is_zero() {
        return Err(Error::param(format!("no partitions of {m} into {k} parts")));
    }
    Ok(ratio(&q, &p))
}

fn ratio(a: &BigUint, b: &BigUint) -> f64 {
    let shift = b.bits().saturating_sub(900);
    (a >> shift).to_f64().unwrap_or(f64::NAN) / (b >> shift).to_f64().unwrap_or(f64::NAN)
}

enum Table {
    Exact(Vec<Vec<BigUint>>),
    Float(Vec<Vec<f64>>),
}

/// Uniform sampler for partitions of `m` into exactly `k` distinct parts.
///
/// Draws run the recursion `p(t, j) = p(t-1, j-1) + p(t-j, j)` backwards on
/// the staircase-reduced total: the first branch removes a smallest part,
/// the second lowers every part by one. A uniform rank is therefore decoded
/// in the order induced by this recursion. Exact tables are used for small
/// totals, `f64` tables beyond.
pub struct DistinctPartitionSampler {
    m: usize,
    k: usize,
    reduced: usize,
    table: Table,
}

impl DistinctPartitionSampler {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        check_budget(m, k)?;
        if k == 0 {
            return Err(Error::param("k must be positive"));
        }
        let reduced = m
            .checked_sub(staircase(k))
            .filter(|&r| r >= k)
            .ok_or_else(|| Error::param(format!("no partition of {m} into {k} distinct parts")))?;
        let entries = (reduced + 1) * (k + 1);
        let table = if reduced <= EXACT_TOTAL && entries <= EXACT_ENTRIES {
            Table::Exact(build_table(reduced, k, BigUint::zero(), 1u32.into(), |a, b| a + b))
        } else {
            let t = build_table(reduced, k, 0.0f64, 1.0, |a, b| a + b);
            if !t[k][reduced].is_finite() {
                return Err(Error::BudgetExceeded("counts overflow f64".into()));
            }
            Table::Float(t)
        };
        Ok(DistinctPartitionSampler { m, k, reduced, table })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.table, Table::Exact(_))
    }

    /// `q(m, k)` from the table, as a float.
    pub fn count_f64(&self) -> f64 {
        match &self.table {
            Table::Exact(t) => t[self.k][self.reduced].to_f64().unwrap_or(f64::INFINITY),
            Table::Float(t) => t[self.k][self.reduced],
        }
    }

    /// Parts in decreasing order.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        let mut parts = Vec::with_capacity(self.k);
        let (mut t, mut j, mut lift) = (self.reduced, self.k, 0u64);
        match &self.table {
            Table::Exact(tab) => {
                let mut r = rng.gen_biguint_below(&tab[j][t]);
                while j > 0 {
                    let first = &tab[j - 1][t - 1];
                    if r < *first {
                        parts.push(lift + 1);
                        j -= 1;
                        t -= 1;
                    } else {
                        r -= first;
                        lift += 1;
                        t -= j;
                    }
                }
            }
            Table::Float(tab) => {
                while j > 0 {
                    let p_first = tab[j - 1][t - 1] / tab[j][t];
                    if rng.gen::<f64>() < p_first {
                        parts.push(lift + 1);
                        j -= 1;
                        t -= 1;
                    } else {
                        lift += 1;
                        t -= j;
                    }
                }
            }
        }
        debug_assert_eq!(t, 0);
        // Parts were found smallest first; add the staircase back.
        parts.reverse();
        let k = self.k as u64;
        parts.iter().enumerate().map(|(i, &v)| v + (k - 1 - i as u64)).collect()
    }

    pub fn total(&self) -> usize {
        self.m
    }
}

fn build_table<T: Clone>(m: usize, k: usize, zero: T, one: T, add: impl Fn(&T, &T) -> T) -> Vec<Vec<T>> {
    let mut tab = vec![vec![zero.clone(); m + 1]; k + 1];
    tab[0][0] = one;
    for j in 1..=k {
        for t in j..=m {
            let v = add(&tab[j - 1][t - 1], &tab[j][t - j]);
            tab[j][t] = v;
        }
    }
    tab
}

/// Uniform partition of `m` into exactly `k` distinct parts, decreasing.
pub fn sample_distinct_partition<R: Rng + ?Sized>(m: usize, k: usize, rng: &mut R) -> Result<Vec<u64>> {
    Ok(DistinctPartitionSampler::new(m, k)?.sample(rng))
}

/// A plane partition on a fixed diagram: positive entries, weakly
/// decreasing along rows and columns. Serialises as `{shape, rows}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPlanePartition", into = "RawPlanePartition")]
pub struct PlanePartition {
    shape: Partition,
    rows: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct RawPlanePartition {
    shape: Partition,
    rows: Vec<Vec<u64>>,
}

impl TryFrom<RawPlanePartition> for PlanePartition {
    type Error = Error;

    fn try_from(r: RawPlanePartition) -> Result<Self> {
        let pp = PlanePartition::new(r.rows)?;
        if pp.shape != r.shape {
            return Err(Error::ShapeMismatch(format!("declared {} but rows give {}", r.shape, pp.shape)));
        }
        Ok(pp)
    }
}

impl From<PlanePartition> for RawPlanePartition {
    fn from(p: PlanePartition) -> Self {
        RawPlanePartition { shape: p.shape, rows: p.rows }
    }
}

impl PlanePartition {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(|r| r.len()).collect())?;
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v == 0 {
                    return Err(Error::param("plane partition entries must be positive"));
                }
                if (j > 0 && row[j - 1] < v) || (i > 0 && rows[i - 1][j] < v) {
                    return Err(Error::NonMonotone(format!("entry at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(PlanePartition { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn get(&self, c: Cell) -> Option<u64> {
        self.rows.get(c.row.wrapping_sub(1))?.get(c.col.wrapping_sub(1)).copied()
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().flatten().sum()
    }

    pub fn has_distinct_parts(&self) -> bool {
        let mut all: Vec<u64> = self.rows.iter().flatten().copied().collect();
        all.sort_unstable();
        all.windows(2).all(|w| w[0] != w[1])
    }

    /// `S̃(x, y) = (n²/m) p_{⌊nx⌋+1, ⌊ny⌋+1}` on a square support of side
    /// `n`; `x = 1` or `y = 1` read the last row or column.
    pub fn rescaled_surface(&self, m: u64, x: f64, y: f64) -> Result<f64> {
        let n = self.shape.num_rows();
        if self.shape != Partition::square(n) || n == 0 {
            return Err(Error::ShapeMismatch("rescaled surface needs a square support".into()));
        }
        if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
            return Err(Error::OutOfDomain(format!("({x}, {y}) outside the unit square")));
        }
        let idx = |t: f64| ((n as f64 * t).floor() as usize + 1).min(n);
        let v = self.rows[idx(x) - 1][idx(y) - 1] as f64;
        Ok((n * n) as f64 / m as f64 * v)
    }
}

/// `p_{ij} = μ(t_{ij})` for a standard tableau `T` and a nonincreasing
/// sequence `μ` with `|T|` positive terms.
pub fn assemble_plane_partition(t: &Tableau, mu: &[u64]) -> Result<PlanePartition> {
    if mu.len() != t.size() {
        return Err(Error::ShapeMismatch(format!(
            "{} parts for a tableau with {} cells",
            mu.len(),
            t.size()
        )));
    }
    if mu.windows(2).any(|w| w[0] < w[1]) || mu.iter().any(|&v| v == 0) {
        return Err(Error::NonMonotone("parts must be positive and nonincreasing".into()));
    }
    let rows = t.rows().iter().map(|r| r.iter().map(|&e| mu[e as usize - 1]).collect()).collect();
    PlanePartition::new(rows)
}

/// Inverse of [`assemble_plane_partition`]: cells are ranked by value
/// (largest first), ties broken by row and then column.
pub fn decompose_plane_partition(pp: &PlanePartition) -> (Tableau, Vec<u64>) {
    let mut cells: Vec<(u64, usize, usize)> = pp
        .rows
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (v, i, j)))
        .collect();
    cells.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut rows: Vec<Vec<u32>> = pp.rows.iter().map(|r| vec![0; r.len()]).collect();
    let mut mu = Vec::with_capacity(cells.len());
    for (rank, &(v, i, j)) in cells.iter().enumerate() {
        rows[i][j] = rank as u32 + 1;
        mu.push(v);
    }
    (Tableau::new(rows).expect("ranked filling is standard"), mu)
}

/// Uniform plane partition of `m` with distinct parts on the `n × n`
/// square: a uniform square tableau and a uniform distinct partition of
/// `m` into `n²` parts.
pub fn sample_plane_partition<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<PlanePartition> {
    let sampler = DistinctPartitionSampler::new(m, n * n)?;
    sample_plane_partition_with(&sampler, Rectangle::square(n), rng)
}

/// As [`sample_plane_partition`] on a rectangle, reusing a sampler whose
/// part count equals the rectangle area.
pub fn sample_plane_partition_with<R: Rng + ?Sized>(
    parts: &DistinctPartitionSampler,
    rect: Rectangle,
    rng: &mut R,
) -> Result<PlanePartition> {
    if parts.k != rect.area() {
        return Err(Error::ShapeMismatch(format!(
            "sampler has {} parts, rectangle has {} cells",
            parts.k,
            rect.area()
        )));
    }
    let t = sampler::sample_rectangular_tableau(rect, rng)?;
    let mu = parts.sample(rng);
    assemble_plane_partition(&t, &mu)
}

/// Brute-force count of plane partitions of `m` on shape `λ` (all parts
/// distinct if asked). Limited to `|λ| ≤ 12`, `m ≤ 200`.
pub fn count_plane_partitions_small(l: &Partition, m: usize, distinct: bool) -> Result<u64> {
    if l.size() > 12 || m > 200 {
        return Err(Error::BudgetExceeded("brute force limited to |λ| ≤ 12, m ≤ 200".into()));
    }
    let cells: Vec<Cell> = l.cells().collect();
    let mut vals = vec![vec![0u64; l.row(1)]; l.num_rows()];
    let mut used = vec![false; m + 1];
    fn rec(
        idx: usize,
        rem: u64,
        cells: &[Cell],
        vals: &mut Vec<Vec<u64>>,
        used: &mut Vec<bool>,
        distinct: bool,
    ) -> u64 {
        if idx == cells.len() {
            return (rem == 0) as u64;
        }
        let left_after = (cells.len() - idx - 1) as u64;
        if rem < left_after + 1 {
            return 0;
        }
        let c = cells[idx];
        let (i, j) = (c.row - 1, c.col - 1);
        let mut cap = rem - left_after;
        if j > 0 {
            cap = cap.min(vals[i][j - 1]);
        }
        if i > 0 {
            cap = cap.min(vals[i - 1][j]);
        }
        let mut total = 0;
        for v in 1..=cap {
            if distinct && used[v as usize] {
                continue;
            }
            vals[i][j] = v;
            used[v as usize] = true;
            total += rec(idx + 1, rem - v, cells, vals, used, distinct);
            used[v as usize] = false;
        }
        total
    }
    if cells.is_empty() {
        return Ok((m == 0) as u64);
    }
    Ok(rec(0, m as u64, &cells, &mut vals, &mut used, distinct))
}

/// Fraction of the parts of `mu` exceeding `(m/k) t`.
pub fn fraction_parts_above(mu: &[u64], t: f64) -> f64 {
    let m: u64 = mu.iter().sum();
    let k = mu.len() as f64;
    let cut = m as f64 / k * t;
    mu.iter().filter(|&&v| v as f64 > cut).count() as f64 / k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use std::collections::HashMap;

    // Oracle: list distinct partitions of m into k parts, decreasing.
    fn distinct_partitions(m: usize, k: usize) -> Vec<Vec<u64>> {
        fn rec(rem: usize, k: usize, max: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if k == 0 {
                if rem == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for p in (1..=max.min(rem)).rev() {
                cur.push(p as u64);
                rec(rem - p, k - 1, p - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, k, m, &mut Vec::new(), &mut out);
        out
    }

    fn weak_count(m: usize, k: usize) -> usize {
        Partition::all_of_size(m).iter().filter(|p| p.num_rows() == k).count()
    }

    #[test]
    fn counts_match_enumeration() {
        for m in 0..=25 {
            for k in 0..=7 {
                let p = count_partitions(m, k, false).unwrap();
                assert_eq!(p, BigUint::from(weak_count(m, k)), "p({m},{k})");
                let q = count_partitions(m, k, true).unwrap();
                assert_eq!(q, BigUint::from(distinct_partitions(m, k).len()), "q({m},{k})");
            }
        }
        assert_eq!(count_partitions(10, 3, false).unwrap(), BigUint::from(8u32));
        assert_eq!(count_partitions(10, 3, true).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(count_partitions(2_000_000, 3, false), Err(Error::BudgetExceeded(_))));
        assert!(matches!(count_partitions(100, 65, false), Err(Error::BudgetExceeded(_))));
        assert!(DistinctPartitionSampler::new(5, 3).is_err());
    }

    #[test]
    fn distinct_fraction_is_large_for_big_totals() {
        let r = distinct_fraction(50_000, 10).unwrap();
        assert!(r > 0.95, "{r}");
    }

    #[test]
    fn sampler_is_uniform_small() {
        let (m, k) = (30, 4);
        let all = distinct_partitions(m, k);
        let s = DistinctPartitionSampler::new(m, k).unwrap();
        assert!(s.is_exact());
        assert!((s.count_f64() - all.len() as f64).abs() < 0.5);
        let mut rng = substream(0, 31);
        let draws = 200 * all.len();
        let mut counts: HashMap<Vec<u64>, usize> = HashMap::new();
        for _ in 0..draws {
            let p = s.sample(&mut rng);
            assert_eq!(p.iter().sum::<u64>(), m as u64);
            assert!(p.windows(2).all(|w| w[0] > w[1]));
            *counts.entry(p).or_default() += 1;
        }
        assert_eq!(counts.len(), all.len());
        for c in counts.values() {
            assert!((*c as f64 - 200.0).abs() < 70.0, "{c}");
        }
    }

    #[test]
    fn float_mode_tracks_exact_counts() {
        let s = DistinctPartitionSampler::new(150_000, 25).unwrap();
        assert!(!s.is_exact());
        let exact = count_partitions(150_000, 25, true).unwrap();
        let rel = (s.count_f64() - exact.to_f64().unwrap()).abs() / exact.to_f64().unwrap();
        assert!(rel < 1e-12, "{rel}");
        let mut rng = substream(0, 32);
        let p = s.sample(&mut rng);
        assert_eq!(p.len(), 25);
        assert_eq!(p.iter().sum::<u64>(), 150_000);
        assert!(p.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn figure_seven_decomposition() {
        let pp = PlanePartition::new(vec![
            vec![7, 7, 6, 5, 2],
            vec![7, 6, 5, 5],
            vec![7, 5, 2],
            vec![6],
        ])
        .unwrap();
        let (t, mu) = decompose_plane_partition(&pp);
        assert_eq!(
            t.rows(),
            &[vec![1, 2, 5, 8, 12], vec![3, 6, 9, 10], vec![4, 11, 13], vec![7]]
        );
        assert_eq!(mu, vec![7, 7, 7, 7, 6, 6, 6, 5, 5, 5, 5, 2, 2]);
        assert_eq!(assemble_plane_partition(&t, &mu).unwrap(), pp);
        // Twelve parts cannot fill thirteen cells.
        let short = [7, 7, 7, 7, 6, 6, 6, 5, 5, 5, 2, 2];
        assert!(matches!(assemble_plane_partition(&t, &short), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn assemble_decompose_round_trip_distinct() {
        let mut rng = substream(0, 33);
        for _ in 0..20 {
            let pp = sample_plane_partition(3, 200, &mut rng).unwrap();
            assert!(pp.has_distinct_parts());
            assert_eq!(pp.total(), 200);
            let (t, mu) = decompose_plane_partition(&pp);
            assert_eq!(assemble_plane_partition(&t, &mu).unwrap(), pp);
        }
    }

    #[test]
    fn plane_partition_counts_factor() {
        for l in [vec![2, 1], vec![2, 2], vec![3, 1]] {
            let l = Partition::new(l).unwrap();
            let d = l.dimension().to_u64().unwrap();
            let k = l.size();
            for m in 0..=60 {
                let q = count_plane_partitions_small(&l, m, true).unwrap();
                let qk = count_partitions(m, k, true).unwrap().to_u64().unwrap();
                assert_eq!(q, d * qk, "{l} m={m}");
                let p = count_plane_partitions_small(&l, m, false).unwrap();
                let pk = count_partitions(m, k, false).unwrap().to_u64().unwrap();
                assert!(p <= d * pk, "{l} m={m}");
            }
        }
    }

    #[test]
    fn plane_partition_json() {
        let pp = PlanePartition::new(vec![vec![5, 3], vec![4, 1]]).unwrap();
        let s = serde_json::to_string(&pp).unwrap();
        assert_eq!(s, r#"{"shape":[2,2],"rows":[[5,3],[4,1]]}"#);
        assert_eq!(serde_json::from_str::<PlanePartition>(&s).unwrap(), pp);
        assert!(serde_json::from_str::<PlanePartition>(r#"{"shape":[2],"rows":[[5,3],[4,1]]}"#).is_err());
        assert!(PlanePartition::new(vec![vec![3, 5]]).is_err());
    }

    #[test]
    fn rescaled_surface_reads_cells() {
        let pp = PlanePartition::new(vec![vec![9, 5], vec![4, 1]]).unwrap();
        assert_eq!(pp.rescaled_surface(19, 0.0, 0.0).unwrap(), 4.0 / 19.0 * 9.0);
        assert_eq!(pp.rescaled_surface(19, 0.6, 0.2).unwrap(), 4.0 / 19.0 * 4.0);
        assert_eq!(pp.rescaled_surface(19, 1.0, 1.0).unwrap(), 4.0 / 19.0);
    }
}
