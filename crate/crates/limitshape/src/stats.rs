//! Verification harness: statistics that compare sampled tableaux and
//! plane partitions with their limit objects, exact identities, and a
//! fixture-driven suite runner.
//!
//! Monte Carlo thresholds are engineering targets for finite sizes, frozen
//! together with their seeds in `fixtures/trials.json`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::diagrams::{square_dimension, Cell, Partition, Rectangle};
use crate::error::{Error, Result};
use crate::partitions1d::{self, DistinctPartitionSampler, PlanePartition};
use crate::rng::substream;
use crate::sampler::{self, Tableau};
use crate::surfaces;
use crate::variational::{self, Constraints, GridFunction};

// ---------------------------------------------------------------------------
// Shape statistics

/// Rotated boundary `g_λ` of `λ/n` at the `2n+1` lattice nodes
/// `u_d = d/(n√2)`, `d = -n..=n`. Rows run along `x`, columns along `y`.
pub fn rotated_boundary(l: &Partition, n: usize) -> Vec<f64> {
    let scale = 1.0 / (n as f64 * SQRT_2);
    let mut out: Vec<f64> = (0..=2 * n).map(|i| (i as f64 - n as f64).abs() * scale).collect();
    // The boundary path from (0, λ(1)) to (λ'(1), 0) meets each diagonal
    // a - b = d exactly once.
    let mut put = |a: usize, b: usize| {
        let d = a as isize - b as isize + n as isize;
        if (0..=2 * n as isize).contains(&d) {
            out[d as usize] = (a + b) as f64 * scale;
        }
    };
    put(0, l.row(1));
    for i in 1..=l.num_rows() {
        put(i, l.row(i));
        for b in (l.row(i + 1)..l.row(i)).rev() {
            put(i, b);
        }
    }
    out
}

/// `max_u |g_{λ_T^k}(u) - g̃_{k/n²}(u)|` over the lattice nodes.
pub fn supnorm_level_gap(t: &Tableau, k: usize) -> Result<f64> {
    let n = square_side(t)?;
    if k == 0 || k > n * n {
        return Err(Error::param(format!("k = {k} is outside 1..={}", n * n)));
    }
    let alpha = k as f64 / (n * n) as f64;
    let g = rotated_boundary(&t.shape_at(k), n);
    let scale = 1.0 / (n as f64 * SQRT_2);
    let mut worst = 0.0f64;
    for (i, v) in g.iter().enumerate() {
        let u = (i as f64 - n as f64) * scale;
        worst = worst.max((v - surfaces::g_tilde(alpha, u.clamp(-FRAC_1_SQRT_2, FRAC_1_SQRT_2))?).abs());
    }
    Ok(worst)
}

fn square_side(t: &Tableau) -> Result<usize> {
    t.square_side()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::ShapeMismatch(format!("expected a square tableau, got {}", t.shape())))
}

/// Outcome of [`surface_gap`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGap {
    /// Largest deviation over interior cells; 0 if there are none.
    pub max: f64,
    pub interior_cells: usize,
    /// `|S̃_T - L|` at every cell, row by row.
    pub grid: Vec<Vec<f64>>,
}

/// Deviation of `t_{ij}/n²` from `L(i/n, j/n)` on the interior cells
/// `min(ij, (n-i)(n-j)) > n^{3/2+ε}`.
pub fn surface_gap(t: &Tableau, epsilon: f64) -> Result<SurfaceGap> {
    square_side(t)?;
    rect_surface_gap(t, epsilon)
}

/// Rectangular analogue for an `n × m` tableau with `m ≤ n`: deviation of
/// `t_{ij}/(nm)` from `L_θ(i/n, j/n)`, `θ = m/n`, on cells with
/// `min(ij, (n-i)(m-j)) > (nm)^{3/4+ε/2}` (which is the square condition
/// when `m = n`).
pub fn rect_surface_gap(t: &Tableau, epsilon: f64) -> Result<SurfaceGap> {
    let shape = t.shape();
    let (n, m) = (shape.num_rows(), shape.row(1));
    if n == 0 || shape != Partition::rectangle(n, m) {
        return Err(Error::ShapeMismatch(format!("expected a rectangular tableau, got {shape}")));
    }
    if m > n {
        return rect_surface_gap(&t.transpose(), epsilon).map(|g| SurfaceGap {
            grid: transpose_grid(&g.grid),
            ..g
        });
    }
    let theta = m as f64 / n as f64;
    let nm = (n * m) as f64;
    let cut = nm.powf(0.75 + 0.5 * epsilon);
    let square = n == m;
    let mut grid = vec![vec![0.0; m]; n];
    let (mut max, mut interior) = (0.0f64, 0);
    for i in 1..=n {
        for j in 1..=m {
            let (x, y) = (i as f64 / n as f64, j as f64 / n as f64);
            let l = if square { surfaces::limit_surface_l(x, y)? } else { surfaces::rect_surface_l(theta, x, y)? };
            let d = (t.rows()[i - 1][j - 1] as f64 / nm - l).abs();
            grid[i - 1][j - 1] = d;
            let inner = ((i * j) as f64).min(((n - i) * (m - j)) as f64);
            if inner > cut {
                interior += 1;
                max = max.max(d);
            }
        }
    }
    Ok(SurfaceGap { max, interior_cells: interior, grid })
}

fn transpose_grid(g: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let w = g.first().map_or(0, |r| r.len());
    (0..w).map(|j| g.iter().map(|r| r[j]).collect()).collect()
}

/// Rotated location `(u, v)` of the entry `k` of a square tableau, with
/// `X = i/n`, `Y = j/n` the outer corner of its cell.
pub fn entry_location(t: &Tableau, k: usize) -> Result<(f64, f64)> {
    let n = square_side(t)?;
    if k == 0 || k > n * n {
        return Err(Error::param(format!("k = {k} is outside 1..={}", n * n)));
    }
    let c = t.positions()[k];
    let (x, y) = (c.row as f64 / n as f64, c.col as f64 / n as f64);
    Ok(((x - y) / SQRT_2, (x + y) / SQRT_2))
}

/// The `u` coordinate of [`entry_location`].
pub fn entry_location_u(t: &Tableau, k: usize) -> Result<f64> {
    Ok(entry_location(t, k)?.0)
}

/// `λ_T^k(1)` for `k = 1..=|T|`.
pub fn lis_prefix_lengths(t: &Tableau) -> Vec<usize> {
    let mut first = vec![false; t.size() + 1];
    for &e in t.rows().first().map_or(&[][..], |r| &r[..]) {
        first[e as usize] = true;
    }
    let mut acc = 0;
    (1..=t.size())
        .map(|k| {
            acc += first[k] as usize;
            acc
        })
        .collect()
}

/// The permutation with recording tableau `T` and insertion tableau
/// `companion`; by RSK its prefixes have `LIS(π(1..k)) = λ_T^k(1)`.
pub fn lis_companion_permutation(t: &Tableau, companion: &Tableau) -> Result<sampler::Permutation> {
    sampler::inverse_rsk(companion, t)
}

/// Length of the longest increasing subsequence, by patience sorting.
pub fn longest_increasing(values: &[u32]) -> usize {
    let mut piles: Vec<u32> = Vec::new();
    for &v in values {
        let p = piles.partition_point(|&x| x < v);
        if p == piles.len() {
            piles.push(v);
        } else {
            piles[p] = v;
        }
    }
    piles.len()
}

// ---------------------------------------------------------------------------
// Generic tests

/// Kolmogorov–Smirnov distance between the empirical law of `samples` and
/// `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("no samples".into()));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// Pearson statistic and its p-value with `bins - 1` degrees of freedom.
pub fn chi_square(observed: &[f64], expected: &[f64]) -> Result<(f64, f64)> {
    if observed.len() != expected.len() {
        return Err(Error::ShapeMismatch(format!("{} observed vs {} expected bins", observed.len(), expected.len())));
    }
    if observed.len() < 2 {
        return Err(Error::EmptyInput("chi-square needs at least two bins".into()));
    }
    if expected.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::param("expected counts must be positive"));
    }
    let stat = pearson(observed, expected);
    Ok((stat, chi_square_sf(stat, (observed.len() - 1) as f64)?))
}

fn pearson(observed: &[f64], expected: &[f64]) -> f64 {
    observed.iter().zip(expected).map(|(o, e)| (o - e) * (o - e) / e).sum()
}

/// Upper tail of the chi-square law (regularised incomplete gamma).
pub fn chi_square_sf(stat: f64, df: f64) -> Result<f64> {
    let d = ChiSquared::new(df).map_err(|e| Error::param(e.to_string()))?;
    Ok(d.sf(stat))
}

// ---------------------------------------------------------------------------
// Exact identities

/// Every standard tableau of shape `λ`, by placing the largest entry in
/// each corner in turn. Used as an oracle for small shapes.
pub fn enumerate_tableaux(l: &Partition) -> Vec<Tableau> {
    fn rec(shape: &Partition, rows: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        let k = shape.size();
        if k == 0 {
            out.push(rows.clone());
            return;
        }
        for c in shape.corners() {
            rows[c.row - 1][c.col - 1] = k as u32;
            let smaller = shape.remove_corner(c).expect("corner");
            rec(&smaller, rows, out);
        }
    }
    let mut rows: Vec<Vec<u32>> = l.parts().iter().map(|&len| vec![0; len]).collect();
    let mut out = Vec::new();
    rec(l, &mut rows, &mut out);
    out.into_iter().map(|r| Tableau::new(r).expect("enumerated filling is standard")).collect()
}

/// `Σ_{λ ⊢ k} |ν_{n,k}(λ) - μ_k(λ)|`, exact. `ν` is computed as `μ` times
/// the falling-power ratio and vanishes on shapes outside the square.
pub fn tv_distance_nu_mu(n: usize, k: usize) -> Result<BigRational> {
    if k > 20 {
        return Err(Error::BudgetExceeded(format!("k = {k} > 20 for exact enumeration")));
    }
    let rect = Rectangle::square(n);
    let mut acc = BigRational::zero();
    for l in Partition::all_of_size(k) {
        let mu = sampler::plancherel_probability(&l);
        let nu = if l.fits_in(rect) { &mu * sampler::nu_ratio(&l, n)? } else { BigRational::zero() };
        acc += (nu - mu).abs();
    }
    Ok(acc)
}

/// Float version of [`tv_distance_nu_mu`] for larger `k`.
pub fn tv_distance_nu_mu_f64(n: usize, k: usize) -> Result<f64> {
    if k > 60 {
        return Err(Error::BudgetExceeded(format!("k = {k} > 60 for enumeration")));
    }
    let rect = Rectangle::square(n);
    let lnk = crate::diagrams::ln_factorial(k);
    let mut acc = 0.0;
    for l in Partition::all_of_size(k) {
        let mu = (2.0 * l.log_dimension() - lnk).exp();
        let nu = if l.fits_in(rect) {
            let comp = l.complement_in_rectangle(rect)?;
            (l.log_dimension() + comp.log_dimension() - Partition::square(n).log_dimension()).exp()
        } else {
            0.0
        };
        acc += (nu - mu).abs();
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Amusing {
    Holds,
    Fails,
    /// `λ(1) = n`: `next(λ)` leaves the square and both sides vanish.
    Degenerate,
}

/// Checks `d(λ) d(□∖next λ) / (d(next λ) d(□∖λ)) = (n² - λ(1)²) / (j (n² - j + 1))`
/// with `j = |λ| + 1`, in exact arithmetic.
pub fn verify_amusing_identity(l: &Partition, n: usize) -> Result<Amusing> {
    let rect = Rectangle::square(n);
    if !l.fits_in(rect) {
        return Err(Error::ShapeExceedsRectangle { rows: n, cols: n });
    }
    if l.row(1) == n {
        return Ok(Amusing::Degenerate);
    }
    let next = l.next_first_row();
    let j = l.size() + 1;
    let num = BigInt::from(l.dimension()) * BigInt::from(next.complement_in_rectangle(rect)?.dimension());
    let den = BigInt::from(next.dimension()) * BigInt::from(l.complement_in_rectangle(rect)?.dimension());
    let lhs = BigRational::new(num, den);
    let n2 = (n * n) as i64;
    let r1 = l.row(1) as i64;
    let rhs = BigRational::new((n2 - r1 * r1).into(), (j as i64 * (n2 - j as i64 + 1)).into());
    Ok(if lhs == rhs { Amusing::Holds } else { Amusing::Fails })
}

/// A partition fitting in `rows × (max_part)`, parts uniform then sorted.
pub fn random_partition_in<R: Rng + ?Sized>(rows: usize, max_part: usize, rng: &mut R) -> Partition {
    let mut parts: Vec<usize> = (0..rows).map(|_| rng.gen_range(0..=max_part)).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(parts).expect("sorted parts")
}

// ---------------------------------------------------------------------------
// Reports

/// How a statistic is compared with its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Below,
    AtMost,
    Above,
    AtLeast,
}

impl Direction {
    pub fn check(self, statistic: f64, threshold: f64) -> bool {
        match self {
            Direction::Below => statistic < threshold,
            Direction::AtMost => statistic <= threshold,
            Direction::Above => statistic > threshold,
            Direction::AtLeast => statistic >= threshold,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    pub seed: u64,
}

/// One checked statistic. Everything except `runtime_ms` is a function of
/// the parameters and seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub theorem: String,
    pub params: TrialParams,
    pub statistic: f64,
    pub threshold: f64,
    pub direction: Direction,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, f64>,
}

impl TrialReport {
    pub fn new(theorem: impl Into<String>, params: TrialParams, statistic: f64, threshold: f64, direction: Direction) -> Self {
        TrialReport {
            theorem: theorem.into(),
            params,
            statistic,
            threshold,
            direction,
            pass: direction.check(statistic, threshold),
            runtime_ms: None,
            extras: BTreeMap::new(),
        }
    }

    pub fn with_extra(mut self, key: &str, value: f64) -> Self {
        self.extras.insert(key.to_string(), value);
        self
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo trials. Trial `t` of a fixture with stream `s` draws from
// `substream(seed, s << 32 | t)`; results are merged in trial order.

fn trial_rng(seed: u64, stream: u64, t: usize) -> crate::rng::Rng {
    substream(seed, (stream << 32) | t as u64)
}

fn parallel_trials<T: Send>(trials: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..trials).into_par_iter().map(f).collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len().max(1) as f64
}

/// Shapes used for the hook-walk law test.
pub fn hook_walk_panel() -> Vec<Partition> {
    [
        vec![2, 1],
        vec![3, 1],
        vec![2, 2, 1],
        vec![3, 2, 1],
        vec![4, 2, 1],
        vec![3, 3, 2],
        vec![4, 3, 1, 1],
        vec![5, 3, 2, 1],
        vec![4, 4, 2, 2],
        vec![6, 4, 3, 1, 1],
    ]
    .into_iter()
    .map(|p| Partition::new(p).expect("panel shape"))
    .collect()
}

/// Pooled chi-square of `walks` hook walks per panel shape against the
/// cotransition measure: returns `(statistic, degrees of freedom, p)`.
pub fn hook_walk_chi_square(panel: &[Partition], walks: usize, seed: u64, stream: u64) -> Result<(f64, f64, f64)> {
    let parts: Vec<(f64, f64)> = panel
        .par_iter()
        .enumerate()
        .map(|(idx, l)| {
            let measure = sampler::cotransition_measure_f64(l)?;
            let index: HashMap<Cell, usize> = measure.keys().enumerate().map(|(i, c)| (*c, i)).collect();
            let mut counts = vec![0.0; measure.len()];
            let mut rng = trial_rng(seed, stream, idx);
            for _ in 0..walks {
                counts[index[&sampler::hook_walk(l, &mut rng)?]] += 1.0;
            }
            let expected: Vec<f64> = measure.values().map(|p| p * walks as f64).collect();
            Ok((pearson(&counts, &expected), (measure.len() - 1) as f64))
        })
        .collect::<Result<_>>()?;
    let stat: f64 = parts.iter().map(|p| p.0).sum();
    let df: f64 = parts.iter().map(|p| p.1).sum();
    Ok((stat, df, chi_square_sf(stat, df)?))
}

/// Mean interior [`surface_gap`] over uniform `n × n` tableaux.
pub fn mean_surface_gap(n: usize, trials: usize, epsilon: f64, seed: u64, stream: u64) -> Result<f64> {
    let gaps = parallel_trials(trials, |t| {
        let tab = sampler::sample_square_tableau(n, &mut trial_rng(seed, stream, t))?;
        Ok(surface_gap(&tab, epsilon)?.max)
    })?;
    Ok(mean(&gaps))
}

/// Mean [`rect_surface_gap`] over uniform `n × ⌊θn⌋` tableaux.
pub fn mean_rect_surface_gap(n: usize, theta: f64, trials: usize, epsilon: f64, seed: u64, stream: u64) -> Result<f64> {
    let m = (theta * n as f64).round() as usize;
    let gaps = parallel_trials(trials, |t| {
        let tab = sampler::sample_rectangular_tableau(Rectangle::new(n, m), &mut trial_rng(seed, stream, t))?;
        Ok(rect_surface_gap(&tab, epsilon)?.max)
    })?;
    Ok(mean(&gaps))
}

/// Mean [`supnorm_level_gap`] at `k = ⌊αn²⌋`.
pub fn mean_level_gap(n: usize, alpha: f64, trials: usize, seed: u64, stream: u64) -> Result<f64> {
    let k = ((alpha * (n * n) as f64).floor() as usize).max(1);
    let gaps = parallel_trials(trials, |t| {
        let tab = sampler::sample_square_tableau(n, &mut trial_rng(seed, stream, t))?;
        supnorm_level_gap(&tab, k)
    })?;
    Ok(mean(&gaps))
}

/// Location of the entry `k = ⌊αn²⌋`: KS distance of the `u` sample from
/// the semicircle law, and the largest `|v - g̃_α(u)|`.
pub fn entry_location_trial(n: usize, alpha: f64, trials: usize, seed: u64, stream: u64) -> Result<(f64, f64)> {
    let k = ((alpha * (n * n) as f64).floor() as usize).max(1);
    let a = k as f64 / (n * n) as f64;
    let pts = parallel_trials(trials, |t| {
        let tab = sampler::sample_square_tableau(n, &mut trial_rng(seed, stream, t))?;
        entry_location(&tab, k)
    })?;
    let us: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ks = ks_statistic(&us, |u| surfaces::semicircle_cdf(a, u).unwrap_or(f64::NAN))?;
    let mut worst = 0.0f64;
    for &(u, v) in &pts {
        worst = worst.max((v - surfaces::g_tilde(a, u)?).abs());
    }
    Ok((ks, worst))
}

/// `λ_T^k(1)/n` at `k = ⌊αn²⌋` for each trial.
pub fn first_row_trial(n: usize, alpha: f64, trials: usize, seed: u64, stream: u64) -> Result<Vec<f64>> {
    let k = ((alpha * (n * n) as f64).floor() as usize).max(1);
    parallel_trials(trials, |t| {
        let tab = sampler::sample_square_tableau(n, &mut trial_rng(seed, stream, t))?;
        Ok(lis_prefix_lengths(&tab)[k - 1] as f64 / n as f64)
    })
}

/// `2√(α(1-α))`, capped at 1.
pub fn first_row_limit(alpha: f64) -> f64 {
    if alpha >= 0.5 {
        1.0
    } else {
        2.0 * (alpha * (1.0 - alpha)).sqrt()
    }
}

/// Points where the plane partition surface is compared.
pub const PLANE_PARTITION_GRID: [f64; 3] = [0.25, 0.5, 0.75];

/// Mean rescaled surface of uniform distinct-part plane partitions of `m`
/// on `□_n`, and its largest deviation from `M` on the 3 × 3 grid.
pub fn plane_partition_trial(n: usize, m: usize, samples: usize, seed: u64, stream: u64) -> Result<(f64, Vec<f64>)> {
    let parts = DistinctPartitionSampler::new(m, n * n)?;
    let pps: Vec<PlanePartition> = parallel_trials(samples, |t| {
        partitions1d::sample_plane_partition_with(&parts, Rectangle::square(n), &mut trial_rng(seed, stream, t))
    })?;
    let mut means = Vec::new();
    let mut worst = 0.0f64;
    for &x in &PLANE_PARTITION_GRID {
        for &y in &PLANE_PARTITION_GRID {
            let vals: Vec<f64> = pps.iter().map(|p| p.rescaled_surface(m as u64, x, y)).collect::<Result<_>>()?;
            let avg = mean(&vals);
            worst = worst.max((avg - surfaces::plane_partition_surface(1.0, x, y)?.value).abs());
            means.push(avg);
        }
    }
    Ok((worst, means))
}

/// Empirical `Σ|ν̂ - μ_k|` for the shape of the `k = ⌊√n⌋` subtableau of
/// uniform `n × n` tableaux.
pub fn plancherel_subtableau_tv(n: usize, trials: usize, seed: u64, stream: u64) -> Result<f64> {
    let k = (n as f64).sqrt().floor() as usize;
    let shapes = parallel_trials(trials, |t| {
        Ok(sampler::sample_square_tableau(n, &mut trial_rng(seed, stream, t))?.shape_at(k))
    })?;
    let mut counts: HashMap<Partition, usize> = HashMap::new();
    for s in shapes {
        *counts.entry(s).or_default() += 1;
    }
    let mut tv = 0.0;
    for l in Partition::all_of_size(k) {
        let emp = counts.get(&l).copied().unwrap_or(0) as f64 / trials as f64;
        tv += (emp - sampler::rational_to_f64(&sampler::plancherel_probability(&l))).abs();
    }
    Ok(tv)
}

// ---------------------------------------------------------------------------
// Variational checks

/// `max_α |K(g̃_α) - (ln 2 - H(α))|` with `g̃_α` interpolated on `cells`.
pub fn k_closed_form_gap(alphas: &[f64], cells: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for &a in alphas {
        let g = GridFunction::from_fn(-FRAC_1_SQRT_2, FRAC_1_SQRT_2, cells, |u| {
            surfaces::g_tilde(a, u).unwrap_or(f64::NAN)
        })?;
        worst = worst.max((variational::functional_k(&g) - variational::k_closed_form(a)).abs());
    }
    Ok(worst)
}

/// Smallest `K(g) - K(g̃_α) - K(g - g̃_α)` over random admissible `g` on the
/// grid. `g` has the same end values and area as the interpolated `g̃_α`.
pub fn variational_inequality_slack(alpha: f64, cells: usize, trials: usize, seed: u64, stream: u64) -> Result<f64> {
    let g0 = GridFunction::from_fn(-FRAC_1_SQRT_2, FRAC_1_SQRT_2, cells, |u| {
        surfaces::g_tilde(alpha, u).unwrap_or(f64::NAN)
    })?;
    let c = Constraints::of(&g0);
    let k0 = variational::functional_k(&g0);
    let s0 = g0.slopes();
    let slacks = parallel_trials(trials, |t| {
        let mut rng = trial_rng(seed, stream, t);
        let sigma = rng.gen_range(0.05..1.0);
        let y: Vec<f64> = s0.iter().map(|s| s + sigma * rng.gen_range(-1.0..1.0)).collect();
        let g = GridFunction::from_slopes(c.a, c.b, c.left, &variational::project_slopes(&y, &c)?)?;
        let d = g.sub(&g0)?;
        Ok(variational::functional_k(&g) - k0 - variational::functional_k(&d))
    })?;
    Ok(slacks.into_iter().fold(f64::INFINITY, f64::min))
}

/// Sup-norm distance between the airfoil inversion of the level-curve
/// right side and the rescaled slope, over interior nodes.
pub fn airfoil_gap(alpha: f64, cells: usize) -> Result<f64> {
    let f = move |x: f64| variational::level_curve_airfoil_rhs(alpha, x);
    let g = variational::airfoil_solve(&f, 0.0, cells)?;
    let mut worst = 0.0f64;
    for i in 1..cells {
        let x = g.node(i);
        worst = worst.max((g.values[i] - variational::level_curve_rescaled_slope(alpha, x)).abs());
    }
    Ok(worst)
}

/// Sup-norm gaps of the continual cotransition density from the semicircle,
/// for `g̃_α` and for `Ω`, on `cells - 1` interior points of each support.
pub fn continual_cotransition_gaps(alpha: f64, cells: usize) -> Result<(f64, f64)> {
    let b = surfaces::beta(alpha);
    let dg = move |u: f64| surfaces::g_tilde_slope(alpha, u).unwrap_or(f64::NAN);
    let mut level = 0.0f64;
    for i in 1..cells {
        let x = -b + 2.0 * b * i as f64 / cells as f64;
        let d = variational::continual_cotransition_density(&dg, -b, b, alpha, x)?;
        level = level.max((d - surfaces::semicircle_density(alpha, x)?).abs());
    }
    let mut omega = 0.0f64;
    for i in 1..cells {
        let x = -SQRT_2 + 2.0 * SQRT_2 * i as f64 / cells as f64;
        let d = variational::continual_cotransition_density(&surfaces::plancherel_omega_slope, -SQRT_2, SQRT_2, 1.0, x)?;
        omega = omega.max((d - (2.0 - x * x).sqrt() / std::f64::consts::PI).abs());
    }
    Ok((level, omega))
}

/// Largest disagreement between the `θ = 1` rectangular code path and the
/// square one, over level curves and surface values on a grid.
pub fn rect_theta_one_gap(cells: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for ai in 1..cells {
        let a = ai as f64 / cells as f64;
        for ui in 0..=cells {
            let u = -FRAC_1_SQRT_2 + SQRT_2 * ui as f64 / cells as f64;
            let d = surfaces::rect_level_curve_extended(1.0, a, u)? - surfaces::g_tilde(a, u)?;
            worst = worst.max(d.abs());
        }
    }
    for i in 0..=cells {
        for j in 0..=cells {
            let (x, y) = (i as f64 / cells as f64, j as f64 / cells as f64);
            let d = surfaces::rect_surface_l(1.0, x, y)? - surfaces::limit_surface_l(x, y)?;
            worst = worst.max(d.abs());
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Fixtures and the suite runner

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Exact,
    Variational,
    #[serde(rename = "montecarlo")]
    MonteCarlo,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Suite::Exact),
            "variational" => Ok(Suite::Variational),
            "montecarlo" => Ok(Suite::MonteCarlo),
            "all" => Ok(Suite::All),
            _ => Err(Error::param(format!("unknown suite {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Small,
    Full,
}

impl FromStr for Tier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Tier::Small),
            "full" => Ok(Tier::Full),
            _ => Err(Error::param(format!("unknown tier {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureParams {
    pub n: Option<usize>,
    pub ns: Option<Vec<usize>>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub alpha: Option<f64>,
    pub alphas: Option<Vec<f64>>,
    pub theta: Option<f64>,
    pub trials: Option<usize>,
    pub epsilon: Option<f64>,
    pub cells: Option<usize>,
}

/// A pre-registered trial: parameters, seed and thresholds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub id: String,
    pub suite: Suite,
    pub tiers: Vec<Tier>,
    pub seed: u64,
    pub stream: u64,
    pub params: FixtureParams,
    pub thresholds: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
struct FixtureFile {
    trials: Vec<Fixture>,
}

const FIXTURES: &str = include_str!("../fixtures/trials.json");

pub fn fixtures() -> Vec<Fixture> {
    serde_json::from_str::<FixtureFile>(FIXTURES).expect("bundled fixtures parse").trials
}

impl Fixture {
    fn threshold(&self, key: &str) -> Result<f64> {
        self.thresholds
            .get(key)
            .copied()
            .ok_or_else(|| Error::param(format!("fixture {} has no threshold {key}", self.id)))
    }

    fn get<T: Copy>(&self, v: Option<T>, name: &str) -> Result<T> {
        v.ok_or_else(|| Error::param(format!("fixture {} lacks {name}", self.id)))
    }

    fn list<'a, T>(&'a self, v: &'a Option<Vec<T>>, name: &str) -> Result<&'a [T]> {
        v.as_deref().ok_or_else(|| Error::param(format!("fixture {} lacks {name}", self.id)))
    }
}

/// Runs one fixture, with `seed` overriding the registered one.
pub fn run_fixture(f: &Fixture, seed: Option<u64>) -> Result<Vec<TrialReport>> {
    let start = Instant::now();
    let seed = seed.unwrap_or(f.seed);
    let p = &f.params;
    let params = TrialParams {
        n: p.n,
        alpha: p.alpha,
        theta: p.theta,
        m: p.m,
        trials: p.trials,
        seed,
    };
    let name = |s: &str| format!("{}/{s}", f.id);
    let report = |s: &str, stat: f64, key: &str, dir: Direction| -> Result<TrialReport> {
        Ok(TrialReport::new(name(s), params.clone(), stat, f.threshold(key)?, dir))
    };
    let mut out = Vec::new();
    match f.id.as_str() {
        "dimension-squares" => {
            let mut bad = 0.0;
            for (n, want) in [(2usize, 2u64), (3, 42), (4, 24024)] {
                let d = Partition::square(n).dimension();
                bad += (d != want.into()) as u8 as f64;
                bad += (square_dimension(n) != d) as u8 as f64;
                if n <= 3 {
                    bad += (enumerate_tableaux(&Partition::square(n)).len() as u64 != want) as u8 as f64;
                }
            }
            out.push(report("mismatches", bad, "mismatches", Direction::AtMost)?);
        }
        "cotransition-exact" => {
            let kmax = f.get(p.k, "k")?;
            let mut bad = 0.0;
            for k in 1..=kmax {
                for l in Partition::all_of_size(k) {
                    let all = enumerate_tableaux(&l);
                    let mut freq: BTreeMap<Cell, usize> = BTreeMap::new();
                    for t in &all {
                        *freq.entry(t.positions()[k]).or_default() += 1;
                    }
                    let measure = sampler::cotransition_measure(&l)?;
                    let total = BigInt::from(all.len());
                    let mut sum = BigRational::zero();
                    for (c, pr) in &measure {
                        let emp = BigRational::new(freq.get(c).copied().unwrap_or(0).into(), total.clone());
                        bad += (emp != *pr) as u8 as f64;
                        sum += pr;
                    }
                    bad += (sum != BigRational::from_integer(1.into())) as u8 as f64;
                    bad += (freq.len() != measure.len()) as u8 as f64;
                }
            }
            out.push(report("mismatches", bad, "mismatches", Direction::AtMost)?);
        }
        "amusing-identity" => {
            let (n, trials) = (f.get(p.n, "n")?, f.get(p.trials, "trials")?);
            let outcomes = parallel_trials(trials, |t| {
                let l = random_partition_in(n, n - 1, &mut trial_rng(seed, f.stream, t));
                verify_amusing_identity(&l, n)
            })?;
            let fails = outcomes.iter().filter(|o| **o != Amusing::Holds).count() as f64;
            out.push(report("failures", fails, "failures", Direction::AtMost)?);
        }
        "nu-ratio" => {
            let (nmax, trials) = (f.get(p.n, "n")?, f.get(p.trials, "trials")?);
            let bad = parallel_trials(trials, |t| {
                let mut rng = trial_rng(seed, f.stream, t);
                let n = rng.gen_range(1..=nmax);
                let l = random_partition_in(n, n, &mut rng);
                Ok((sampler::nu_ratio(&l, n)? != sampler::nu_ratio_direct(&l, n)?) as u8 as f64)
            })?;
            out.push(report("mismatches", bad.iter().sum(), "mismatches", Direction::AtMost)?);
        }
        "distinct-fraction" => {
            let r = partitions1d::distinct_fraction(f.get(p.m, "m")?, f.get(p.k, "k")?)?;
            out.push(report("ratio", r, "ratio", Direction::Above)?);
        }
        "tv-monotone" => {
            let k = f.get(p.k, "k")?;
            let tvs: Vec<BigRational> = f.list(&p.ns, "ns")?.iter().map(|&n| tv_distance_nu_mu(n, k)).collect::<Result<_>>()?;
            let worst = tvs
                .windows(2)
                .map(|w| sampler::rational_to_f64(&(&w[1] - &w[0])))
                .fold(f64::NEG_INFINITY, f64::max);
            let mut r = report("increase", worst, "increase", Direction::Below)?;
            for (n, tv) in f.list(&p.ns, "ns")?.iter().zip(&tvs) {
                r = r.with_extra(&format!("tv_n{n}"), sampler::rational_to_f64(tv));
            }
            out.push(r);
        }
        "plane-partition-factor" => {
            let m = f.get(p.m, "m")?;
            let mut bad = 0.0;
            for shape in [vec![2, 1], vec![2, 2], vec![3, 1], vec![2, 1, 1]] {
                let l = Partition::new(shape)?;
                let d = l.dimension().to_u64().unwrap_or(0);
                for mm in 0..=m {
                    let q = partitions1d::count_plane_partitions_small(&l, mm, true)?;
                    let qk = partitions1d::count_partitions(mm, l.size(), true)?.to_u64().unwrap_or(0);
                    bad += (q != d * qk) as u8 as f64;
                    let pp = partitions1d::count_plane_partitions_small(&l, mm, false)?;
                    let pk = partitions1d::count_partitions(mm, l.size(), false)?.to_u64().unwrap_or(0);
                    bad += (pp > d * pk) as u8 as f64;
                }
            }
            out.push(report("mismatches", bad, "mismatches", Direction::AtMost)?);
        }
        "k-closed-form" => {
            let gap = k_closed_form_gap(f.list(&p.alphas, "alphas")?, f.get(p.cells, "cells")?)?;
            out.push(report("gap", gap, "gap", Direction::Below)?);
        }
        "minimizer" | "minimizer-rect" => {
            let (alpha, theta, cells) = (f.get(p.alpha, "alpha")?, f.get(p.theta, "theta")?, f.get(p.cells, "cells")?);
            let (_, rep) = variational::minimize_k(alpha, theta, cells)?;
            out.push(
                report("supnorm", rep.supnorm_gap, "supnorm", Direction::Below)?
                    .with_extra("iterations", rep.iterations as f64),
            );
            if f.thresholds.contains_key("k_gap") {
                out.push(report("k_gap", (rep.k_value - rep.k_closed_form).abs(), "k_gap", Direction::Below)?);
            }
            if f.thresholds.contains_key("inequality") {
                let slack = variational_inequality_slack(alpha, cells, f.get(p.trials, "trials")?, seed, f.stream)?;
                out.push(report("inequality", slack, "inequality", Direction::AtLeast)?);
            }
        }
        "airfoil" => {
            let cells = f.get(p.cells, "cells")?;
            for &a in f.list(&p.alphas, "alphas")? {
                let gap = airfoil_gap(a, cells)?;
                let mut r = report(&format!("supnorm/alpha={a}"), gap, "supnorm", Direction::Below)?;
                r.params.alpha = Some(a);
                out.push(r);
            }
        }
        "continual-cotransition" => {
            let (level, omega) = continual_cotransition_gaps(f.get(p.alpha, "alpha")?, f.get(p.cells, "cells")?)?;
            out.push(report("level_curve", level, "level_curve", Direction::Below)?);
            out.push(report("omega", omega, "omega", Direction::Below)?);
        }
        "rect-theta-one" => {
            let gap = rect_theta_one_gap(f.get(p.cells, "cells")?)?;
            out.push(report("gap", gap, "gap", Direction::Below)?);
        }
        "hook-walk-law" => {
            let (stat, df, pv) = hook_walk_chi_square(&hook_walk_panel(), f.get(p.trials, "trials")?, seed, f.stream)?;
            out.push(
                report("p_value", pv, "p_value", Direction::Above)?
                    .with_extra("chi_square", stat)
                    .with_extra("df", df),
            );
        }
        "surface-gap" => {
            let g = mean_surface_gap(f.get(p.n, "n")?, f.get(p.trials, "trials")?, f.get(p.epsilon, "epsilon")?, seed, f.stream)?;
            out.push(report("mean", g, "mean", Direction::Below)?);
        }
        "rect-surface-gap" => {
            let g = mean_rect_surface_gap(
                f.get(p.n, "n")?,
                f.get(p.theta, "theta")?,
                f.get(p.trials, "trials")?,
                f.get(p.epsilon, "epsilon")?,
                seed,
                f.stream,
            )?;
            out.push(report("mean", g, "mean", Direction::Below)?);
        }
        "surface-gap-trend" | "level-gap-trend" => {
            let trials = f.get(p.trials, "trials")?;
            let mut means = Vec::new();
            for (i, &n) in f.list(&p.ns, "ns")?.iter().enumerate() {
                let s = (f.stream << 8) | i as u64;
                means.push(if f.id == "surface-gap-trend" {
                    mean_surface_gap(n, trials, f.get(p.epsilon, "epsilon")?, seed, s)?
                } else {
                    mean_level_gap(n, f.get(p.alpha, "alpha")?, trials, seed, s)?
                });
            }
            let worst = means.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
            let mut r = report("increase", worst, "increase", Direction::Below)?;
            for (n, m) in f.list(&p.ns, "ns")?.iter().zip(&means) {
                r = r.with_extra(&format!("mean_n{n}"), *m);
            }
            out.push(r);
        }
        "level-gap" => {
            let g = mean_level_gap(f.get(p.n, "n")?, f.get(p.alpha, "alpha")?, f.get(p.trials, "trials")?, seed, f.stream)?;
            out.push(report("mean", g, "mean", Direction::Below)?);
        }
        "entry-location" => {
            let n = f.get(p.n, "n")?;
            let (ks, v) = entry_location_trial(n, f.get(p.alpha, "alpha")?, f.get(p.trials, "trials")?, seed, f.stream)?;
            out.push(report("ks", ks, "ks", Direction::Below)?);
            out.push(report("v_gap_times_n", v * n as f64, "v_gap_times_n", Direction::AtMost)?);
        }
        "first-row" => {
            let (n, trials) = (f.get(p.n, "n")?, f.get(p.trials, "trials")?);
            for (i, &a) in f.list(&p.alphas, "alphas")?.iter().enumerate() {
                let rows = first_row_trial(n, a, trials, seed, (f.stream << 8) | i as u64)?;
                let c = first_row_limit(a);
                let shortfall = rows.iter().map(|r| c - r).fold(f64::NEG_INFINITY, f64::max);
                let mut r1 = report(&format!("mean/alpha={a}"), (mean(&rows) - c).abs(), "mean", Direction::Below)?;
                r1.params.alpha = Some(a);
                let mut r2 = report(&format!("shortfall/alpha={a}"), shortfall, "shortfall", Direction::AtMost)?;
                r2.params.alpha = Some(a);
                out.push(r1);
                out.push(r2);
            }
        }
        "plane-partition-surface" => {
            let (n, m) = (f.get(p.n, "n")?, f.get(p.m, "m")?);
            let (worst, _) = plane_partition_trial(n, m, f.get(p.trials, "trials")?, seed, f.stream)?;
            let ratio = partitions1d::distinct_fraction(m, n * n)?;
            out.push(report("max_gap", worst, "max_gap", Direction::Below)?.with_extra("q_over_p", ratio));
        }
        "plancherel-subtableau" => {
            let tv = plancherel_subtableau_tv(f.get(p.n, "n")?, f.get(p.trials, "trials")?, seed, f.stream)?;
            out.push(report("tv", tv, "tv", Direction::Below)?);
        }
        other => return Err(Error::param(format!("unknown fixture {other:?}"))),
    }
    let ms = start.elapsed().as_millis() as u64;
    for r in &mut out {
        r.runtime_ms = Some(ms);
    }
    Ok(out)
}

/// Runs every fixture of `suite` registered for `tier`, on `jobs` threads.
/// Reports come back in fixture order.
pub fn run_suite(suite: Suite, tier: Tier, seed: Option<u64>, jobs: usize) -> Result<Vec<TrialReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::param(e.to_string()))?;
    let selected: Vec<Fixture> = fixtures()
        .into_iter()
        .filter(|f| (suite == Suite::All || f.suite == suite) && f.tiers.contains(&tier))
        .collect();
    pool.install(|| {
        let mut out = Vec::new();
        for f in &selected {
            out.extend(run_fixture(f, seed)?);
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn boundary_of_staircase() {
        let l = Partition::new(vec![2, 1]).unwrap();
        let g = rotated_boundary(&l, 3);
        let s = 1.0 / (3.0 * SQRT_2);
        // Path (0,2) (1,2) (1,1) (2,1) (2,0), with the axes beyond.
        let want = [3.0, 2.0, 3.0, 2.0, 3.0, 2.0, 3.0];
        for (v, w) in g.iter().zip(want) {
            assert!((v - w * s).abs() < 1e-15, "{g:?}");
        }
        let empty = rotated_boundary(&Partition::empty(), 2);
        assert!((empty[0] - SQRT_2 / 2.0).abs() < 1e-15 && empty[2] == 0.0);
    }

    #[test]
    fn trivial_gaps() {
        let one = Tableau::new(vec![vec![1]]).unwrap();
        assert!(supnorm_level_gap(&one, 1).unwrap() < 1e-12);
        let g = surface_gap(&one, 0.1).unwrap();
        assert_eq!(g.max, 0.0);
        assert!(g.grid[0][0] < 1e-12);
        let mut rng = stream(3);
        let t = sampler::sample_square_tableau(6, &mut rng).unwrap();
        assert!(supnorm_level_gap(&t, 36).unwrap() < 1e-12);
        assert!(supnorm_level_gap(&t, 0).is_err());
    }

    #[test]
    fn entry_locations_at_extremes() {
        let mut rng = stream(4);
        let t = sampler::sample_square_tableau(7, &mut rng).unwrap();
        assert_eq!(entry_location_u(&t, 1).unwrap(), 0.0);
        assert_eq!(entry_location_u(&t, 49).unwrap(), 0.0);
        let (u, v) = entry_location(&t, 49).unwrap();
        assert!(u == 0.0 && (v - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn lis_prefixes_match_rsk() {
        let mut rng = stream(5);
        for n in 1..=5 {
            let t = sampler::sample_square_tableau(n, &mut rng).unwrap();
            let p = sampler::sample_square_tableau(n, &mut rng).unwrap();
            let lens = lis_prefix_lengths(&t);
            assert_eq!(lens[0], 1);
            assert_eq!(lens[n * n - 1], n);
            assert!(lens.windows(2).all(|w| w[0] <= w[1]));
            let pi = lis_companion_permutation(&t, &p).unwrap();
            for k in 1..=n * n {
                assert_eq!(longest_increasing(&pi.values()[..k]), lens[k - 1], "n={n} k={k}");
            }
        }
    }

    #[test]
    fn ks_and_chi_square_basics() {
        assert!(matches!(ks_statistic(&[], |x| x), Err(Error::EmptyInput(_))));
        let mut rng = stream(6);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.gen::<f64>()).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(d < 1.63 / 100.0, "{d}");
        let (s, p) = chi_square(&[10.0, 20.0, 30.0], &[10.0, 20.0, 30.0]).unwrap();
        assert_eq!(s, 0.0);
        assert!((p - 1.0).abs() < 1e-12);
        assert!(chi_square(&[5.0], &[5.0]).is_err());
        // Known value: P(χ²₂ > 2 ln 20) = 1/20.
        assert!((chi_square_sf(2.0 * 20f64.ln(), 2.0).unwrap() - 0.05).abs() < 1e-12);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_tableaux(&Partition::square(3)).len(), 42);
        assert_eq!(enumerate_tableaux(&Partition::new(vec![3, 2]).unwrap()).len(), 5);
        assert_eq!(enumerate_tableaux(&Partition::empty()).len(), 1);
    }

    #[test]
    fn tv_examples() {
        assert!(tv_distance_nu_mu(5, 1).unwrap().is_zero());
        let tv = sampler::rational_to_f64(&tv_distance_nu_mu(2, 4).unwrap());
        assert!(tv > 0.0);
        let a = tv_distance_nu_mu(20, 8).unwrap();
        let b = tv_distance_nu_mu(100, 8).unwrap();
        assert!(b < a);
        let fl = tv_distance_nu_mu_f64(20, 8).unwrap();
        assert!((fl - sampler::rational_to_f64(&a)).abs() < 1e-10);
    }

    #[test]
    fn amusing_identity_examples() {
        let l = Partition::new(vec![2, 1]).unwrap();
        assert_eq!(verify_amusing_identity(&l, 3).unwrap(), Amusing::Holds);
        let full = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(verify_amusing_identity(&full, 3).unwrap(), Amusing::Degenerate);
        assert!(verify_amusing_identity(&Partition::new(vec![4]).unwrap(), 3).is_err());
        let mut rng = stream(7);
        for _ in 0..200 {
            let l = random_partition_in(6, 5, &mut rng);
            assert_eq!(verify_amusing_identity(&l, 6).unwrap(), Amusing::Holds, "{l}");
        }
    }

    #[test]
    fn fixtures_parse_and_are_unique() {
        let fx = fixtures();
        let mut ids: Vec<&str> = fx.iter().map(|f| f.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), fx.len());
        let mut streams: Vec<u64> = fx.iter().map(|f| f.stream).collect();
        streams.sort_unstable();
        streams.dedup();
        assert_eq!(streams.len(), fx.len());
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn reports_are_reproducible() {
        let f = fixtures().into_iter().find(|f| f.id == "amusing-identity").unwrap();
        let strip = |mut v: Vec<TrialReport>| {
            for r in &mut v {
                r.runtime_ms = None;
            }
            v
        };
        let a = strip(run_fixture(&f, Some(9)).unwrap());
        let b = strip(run_fixture(&f, Some(9)).unwrap());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.iter().all(|r| r.pass));
    }
}
