//! The hook-integral functional, its minimisers, and the singular integral
//! tools used to identify them.
//!
//! Shapes are continuous piecewise-linear [`GridFunction`]s in rotated
//! coordinates. `K(g) = -½ ∬ g'(s) g'(t) ln|s - t| ds dt` is evaluated in
//! closed form over pairs of cells, so it is exact for the interpolant.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surfaces;

/// Values of a continuous piecewise-linear function at `N + 1` equally
/// spaced nodes of `[a, b]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub a: f64,
    pub b: f64,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(a: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        if !(b > a) {
            return Err(Error::param(format!("empty interval [{a}, {b}]")));
        }
        if values.len() < 2 {
            return Err(Error::param("a grid function needs at least two nodes"));
        }
        Ok(GridFunction { a, b, values })
    }

    /// Samples `f` at `cells + 1` nodes.
    pub fn from_fn(a: f64, b: f64, cells: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if cells == 0 {
            return Err(Error::param("cells must be positive"));
        }
        let h = (b - a) / cells as f64;
        let values = (0..=cells).map(|i| f(a + i as f64 * h)).collect();
        GridFunction::new(a, b, values)
    }

    pub fn cells(&self) -> usize {
        self.values.len() - 1
    }

    pub fn step(&self) -> f64 {
        (self.b - self.a) / self.cells() as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.a + i as f64 * self.step()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.node(i)).collect()
    }

    /// Slope on each cell.
    pub fn slopes(&self) -> Vec<f64> {
        let h = self.step();
        self.values.windows(2).map(|w| (w[1] - w[0]) / h).collect()
    }

    /// Rebuilds the function from a left value and cell slopes.
    pub fn from_slopes(a: f64, b: f64, left: f64, slopes: &[f64]) -> Result<Self> {
        let h = (b - a) / slopes.len() as f64;
        let mut values = Vec::with_capacity(slopes.len() + 1);
        let mut v = left;
        values.push(v);
        for s in slopes {
            v += s * h;
            values.push(v);
        }
        GridFunction::new(a, b, values)
    }

    /// Linear interpolation; clamps to the end values outside `[a, b]`.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.cells();
        let t = ((x - self.a) / self.step()).clamp(0.0, n as f64);
        let i = (t.floor() as usize).min(n - 1);
        let f = t - i as f64;
        self.values[i] * (1.0 - f) + self.values[i + 1] * f
    }

    /// `∫_a^b (g(u) - |u|) du`, exact for the interpolant.
    pub fn area_above_abs(&self) -> f64 {
        let h = self.step();
        let trap: f64 = self.values.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).sum();
        trap - abs_integral(self.a, self.b)
    }

    /// Largest `|g(u_i) - f(u_i)|` over the nodes.
    pub fn sup_distance(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes()
            .iter()
            .zip(&self.values)
            .map(|(&u, &v)| (v - f(u)).abs())
            .fold(0.0, f64::max)
    }

    /// Pointwise difference on a shared grid.
    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        GridFunction::new(self.a, self.b, values)
    }

    fn same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.values.len() != other.values.len() || self.a != other.a || self.b != other.b {
            return Err(Error::ShapeMismatch("grid functions live on different grids".into()));
        }
        Ok(())
    }
}

fn abs_integral(a: f64, b: f64) -> f64 {
    let prim = |x: f64| 0.5 * x * x.abs();
    prim(b) - prim(a)
}

/// Admissibility data on `[a, b]`: end values and `∫ (g - |u|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraints {
    pub a: f64,
    pub b: f64,
    pub left: f64,
    pub right: f64,
    pub area: f64,
}

impl Constraints {
    /// `α`-admissible shapes for the `1 × θ` rectangle.
    pub fn for_rectangle(alpha: f64, theta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::param(format!("alpha = {alpha} is outside (0, 1)")));
        }
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::param(format!("theta = {theta} is outside (0, 1]")));
        }
        Ok(Constraints {
            a: -theta * FRAC_1_SQRT_2,
            b: FRAC_1_SQRT_2,
            left: theta * FRAC_1_SQRT_2,
            right: FRAC_1_SQRT_2,
            area: alpha * theta,
        })
    }

    /// The constraints that `g` already satisfies.
    pub fn of(g: &GridFunction) -> Self {
        Constraints {
            a: g.a,
            b: g.b,
            left: g.values[0],
            right: *g.values.last().unwrap(),
            area: g.area_above_abs(),
        }
    }

    /// Linear targets on the slopes: `h Σ s_k` and `h Σ m_k s_k`, with
    /// `m_k` the cell midpoints.
    fn slope_targets(&self) -> (f64, f64) {
        let total = self.right - self.left;
        // Integration by parts: ∫ u g' = b g(b) - a g(a) - ∫ g.
        let int_g = self.area + abs_integral(self.a, self.b);
        (total, self.b * self.right - self.a * self.left - int_g)
    }
}

/// Whether `g` is 1-Lipschitz and meets the constraints within `tol`.
pub fn is_admissible(g: &GridFunction, c: &Constraints, tol: f64) -> bool {
    g.slopes().iter().all(|s| s.abs() <= 1.0 + tol)
        && (g.values[0] - c.left).abs() <= tol
        && (g.values.last().unwrap() - c.right).abs() <= tol
        && (g.area_above_abs() - c.area).abs() <= tol
        && (g.a - c.a).abs() <= tol
        && (g.b - c.b).abs() <= tol
}

// Second difference of x² ln|x| / 2 at integer d ≥ 0.
fn log_second_difference(d: usize) -> f64 {
    if d == 0 {
        return 0.0;
    }
    if d >= 64 {
        let x = d as f64;
        let x2 = x * x;
        return x.ln() + 1.5 - 1.0 / (12.0 * x2) - 1.0 / (60.0 * x2 * x2) - 1.0 / (168.0 * x2 * x2 * x2);
    }
    let f = |x: f64| if x == 0.0 { 0.0 } else { 0.5 * x * x * x.abs().ln() };
    let x = d as f64;
    f(x + 1.0) - 2.0 * f(x) + f(x - 1.0)
}

/// `W(d) = ∬ ln|s - t|` over two cells of width `h` whose left ends differ
/// by `d h`.
pub fn cell_log_kernel(cells: usize, h: f64) -> Vec<f64> {
    let base = h.ln() - 1.5;
    (0..cells).map(|d| h * h * (log_second_difference(d) + base)).collect()
}

fn toeplitz_apply(kernel: &[f64], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for (j, xj) in x.iter().enumerate() {
                acc += kernel[i.abs_diff(j)] * xj;
            }
            acc
        })
        .collect()
}

/// Symmetric bilinear form `⟨g₁, g₂⟩ = -½ ∬ g₁'(s) g₂'(t) ln|s - t|`.
pub fn bilinear_k(g1: &GridFunction, g2: &GridFunction) -> Result<f64> {
    g1.same_grid(g2)?;
    let kernel = cell_log_kernel(g1.cells(), g1.step());
    let s1 = g1.slopes();
    let w = toeplitz_apply(&kernel, &g2.slopes());
    Ok(-0.5 * s1.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>())
}

/// `K(g)`, exact for the piecewise-linear interpolant.
pub fn functional_k(g: &GridFunction) -> f64 {
    bilinear_k(g, g).expect("same grid")
}

/// `K(g̃_α) = -H(α) + ln 2`.
pub fn k_closed_form(alpha: f64) -> f64 {
    -surfaces::entropy(alpha) + 2f64.ln()
}

/// `C = 3/2 - 2 ln 2`, the constant in the dimension asymptotics.
pub fn hook_constant() -> f64 {
    1.5 - 2.0 * 2f64.ln()
}

/// `w(s) = -∫ g'(t) ln|s - t| dt - λ s`, exact for piecewise-linear `g`.
pub fn optimality_residual(g: &GridFunction, lambda: f64, s: f64) -> f64 {
    let prim = |x: f64| if x == 0.0 { 0.0 } else { x * x.abs().ln() - x };
    let slopes = g.slopes();
    let mut acc = 0.0;
    for (j, sj) in slopes.iter().enumerate() {
        let (t0, t1) = (g.node(j), g.node(j + 1));
        acc += sj * (prim(s - t0) - prim(s - t1));
    }
    -acc - lambda * s
}

/// `λ = ln((1-α)/α)`.
pub fn lagrange_multiplier(alpha: f64) -> f64 {
    ((1.0 - alpha) / alpha).ln()
}

/// Euclidean projection of `y` onto `{s ∈ [-1, 1]^N : h Σ s = c₁, h Σ m s = c₂}`.
///
/// The solution is `clamp(y - μ₁ - μ₂ m)`; the multipliers come from a
/// semismooth Newton iteration with a nested-bisection fallback.
pub fn project_slopes(y: &[f64], c: &Constraints) -> Result<Vec<f64>> {
    let n = y.len();
    let h = (c.b - c.a) / n as f64;
    let mids: Vec<f64> = (0..n).map(|k| c.a + (k as f64 + 0.5) * h).collect();
    let (t1, t2) = c.slope_targets();
    let max_total = h * n as f64;
    if t1.abs() > max_total + 1e-12 {
        return Err(Error::Infeasible(format!("end values need slope sum {t1}")));
    }
    let eval = |m1: f64, m2: f64| -> (Vec<f64>, f64, f64) {
        let s: Vec<f64> = y
            .iter()
            .zip(&mids)
            .map(|(yk, mk)| (yk - m1 - m2 * mk).clamp(-1.0, 1.0))
            .collect();
        let f1 = h * s.iter().sum::<f64>() - t1;
        let f2 = h * s.iter().zip(&mids).map(|(a, b)| a * b).sum::<f64>() - t2;
        (s, f1, f2)
    };
    let tol = 1e-14;
    let (mut m1, mut m2) = (0.0, 0.0);
    for _ in 0..60 {
        let (s, f1, f2) = eval(m1, m2);
        if f1.abs() < tol && f2.abs() < tol {
            return Ok(s);
        }
        let (mut j11, mut j12, mut j22) = (0.0, 0.0, 0.0);
        for (k, sk) in s.iter().enumerate() {
            if sk.abs() < 1.0 {
                j11 += h;
                j12 += h * mids[k];
                j22 += h * mids[k] * mids[k];
            }
        }
        let det = j11 * j22 - j12 * j12;
        if det.abs() < 1e-300 || !det.is_finite() {
            break;
        }
        // F(μ + d) ≈ F(μ) - J d.
        let d1 = (j22 * f1 - j12 * f2) / det;
        let d2 = (j11 * f2 - j12 * f1) / det;
        let norm0 = f1.hypot(f2);
        let mut step = 1.0;
        let mut moved = false;
        while step > 1e-6 {
            let (_, g1, g2) = eval(m1 + step * d1, m2 + step * d2);
            if g1.hypot(g2) < norm0 {
                m1 += step * d1;
                m2 += step * d2;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    project_by_bisection(y, &mids, h, t1, t2)
}

fn project_by_bisection(y: &[f64], mids: &[f64], h: f64, t1: f64, t2: f64) -> Result<Vec<f64>> {
    let ymax = y.iter().fold(0.0f64, |m, v| m.max(v.abs())) + 2.0;
    let mmax = mids.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
    let inner = |m2: f64| -> Vec<f64> {
        let lim = ymax + m2.abs() * mmax;
        let (mut lo, mut hi) = (-lim, lim);
        let at = |m1: f64| -> Vec<f64> {
            y.iter().zip(mids).map(|(yk, mk)| (yk - m1 - m2 * mk).clamp(-1.0, 1.0)).collect()
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h * at(mid).iter().sum::<f64>() > t1 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-16 * (1.0 + lim) {
                break;
            }
        }
        at(0.5 * (lo + hi))
    };
    let moment = |s: &[f64]| h * s.iter().zip(mids).map(|(a, b)| a * b).sum::<f64>();
    let mut lim = 1.0;
    while lim < 1e12 {
        if moment(&inner(-lim)) >= t2 && moment(&inner(lim)) <= t2 {
            break;
        }
        lim *= 4.0;
    }
    let (mut lo, mut hi) = (-lim, lim);
    if moment(&inner(lo)) < t2 - 1e-12 || moment(&inner(hi)) > t2 + 1e-12 {
        return Err(Error::Infeasible("area constraint cannot be met with |g'| ≤ 1".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if moment(&inner(mid)) > t2 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * lim {
            break;
        }
    }
    Ok(inner(0.5 * (lo + hi)))
}

/// Projects an arbitrary grid function onto the admissible set `c`.
pub fn project_admissible(g: &GridFunction, c: &Constraints) -> Result<GridFunction> {
    let s = project_slopes(&g.slopes(), c)?;
    GridFunction::from_slopes(c.a, c.b, c.left, &s)
}

/// Outcome of [`minimize_k`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizerReport {
    pub alpha: f64,
    pub theta: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K_value")]
    pub k_value: f64,
    /// `-H(α) + ln 2` when `θ = 1`; otherwise `K` of the closed-form curve
    /// interpolated on the same grid.
    #[serde(rename = "K_closed_form")]
    pub k_closed_form: f64,
    pub supnorm_gap: f64,
    pub iterations: usize,
}

pub const MAX_ITERATIONS: usize = 5000;

/// Minimises `K` over `α`-admissible shapes of the `1 × θ` rectangle by
/// projected gradient descent on cell slopes, with step `0.5 / L` where `L`
/// is a power-iteration estimate of the Hessian norm.
pub fn minimize_k(alpha: f64, theta: f64, cells: usize) -> Result<(GridFunction, MinimizerReport)> {
    if cells < 4 {
        return Err(Error::param("need at least 4 cells"));
    }
    let c = Constraints::for_rectangle(alpha, theta)?;
    let h = (c.b - c.a) / cells as f64;
    let kernel = cell_log_kernel(cells, h);
    let hess = |s: &[f64]| -> Vec<f64> { toeplitz_apply(&kernel, s).iter().map(|v| -v).collect() };

    let mut v: Vec<f64> = (0..cells).map(|k| 1.0 + 0.1 * ((k * 7919) % 13) as f64).collect();
    let mut lmax = 0.0;
    for _ in 0..200 {
        let w = hess(&v);
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        let prev = lmax;
        lmax = norm / v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v = w.iter().map(|x| x / norm).collect();
        if (lmax - prev).abs() < 1e-10 * lmax {
            break;
        }
    }
    let step = 0.5 / lmax;

    let mut s = project_slopes(&vec![0.0; cells], &c)?;
    let mut iterations = 0;
    for it in 1..=MAX_ITERATIONS {
        iterations = it;
        let grad = hess(&s);
        let y: Vec<f64> = s.iter().zip(&grad).map(|(a, g)| a - step * g).collect();
        let next = project_slopes(&y, &c)?;
        let change = next.iter().zip(&s).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        s = next;
        if change < 1e-13 {
            break;
        }
    }
    let g = GridFunction::from_slopes(c.a, c.b, c.left, &s)?;
    let reference = |u: f64| surfaces::rect_level_curve_extended(theta, alpha, u).unwrap();
    let k_closed_form = if theta == 1.0 {
        k_closed_form(alpha)
    } else {
        functional_k(&GridFunction::from_fn(c.a, c.b, cells, reference)?)
    };
    let report = MinimizerReport {
        alpha,
        theta,
        n: cells,
        k_value: functional_k(&g),
        k_closed_form,
        supnorm_gap: g.sup_distance(reference),
        iterations,
    };
    Ok((g, report))
}

fn gauss_legendre_16() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = 16;
        let mut out = Vec::with_capacity(n);
        for i in 1..=n {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        out
    })
}

fn gl_panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
    gauss_legendre_16().iter().map(|(x, w)| w * f(c + r * x)).sum::<f64>() * r
}

/// Gauss–Legendre on `panels` equal panels, each end panel refined
/// geometrically `levels` times.
fn graded_integral(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize, levels: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let d = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 1..panels.saturating_sub(1) {
        acc += gl_panel(f, a + p as f64 * d, a + (p + 1) as f64 * d);
    }
    let ends = if panels == 1 { 1 } else { 2 };
    for e in 0..ends {
        let (lo, hi) = if e == 0 { (a, a + d) } else { (b - d, b) };
        let mut w = hi - lo;
        for _ in 0..levels {
            let half = 0.5 * w;
            if e == 0 {
                acc += gl_panel(f, lo + half, lo + w);
            } else {
                acc += gl_panel(f, hi - w, hi - half);
            }
            w = half;
        }
        acc += if e == 0 { gl_panel(f, lo, lo + w) } else { gl_panel(f, hi - w, hi) };
    }
    acc
}

/// `PV ∫_a^b f(t)/(t - s) dt` for piecewise-linear `f`, exact: the regular
/// part `∫ (f(t) - f(s))/(t - s)` is integrated cell by cell and
/// `f(s) ln((b - s)/(s - a))` is added.
pub fn hilbert_pv(f: &GridFunction, s: f64) -> Result<f64> {
    if !(s > f.a && s < f.b) {
        return Err(Error::OutOfDomain(format!("s = {s} is not inside ({}, {})", f.a, f.b)));
    }
    let fs = f.eval(s);
    let slopes = f.slopes();
    let h = f.step();
    let mut acc = 0.0;
    for (k, m) in slopes.iter().enumerate() {
        let (t0, t1) = (f.node(k), f.node(k + 1));
        let ext = f.values[k] + m * (s - t0);
        let d = ext - fs;
        acc += m * h;
        let (r0, r1) = ((t0 - s).abs(), (t1 - s).abs());
        // A cell touching s has d = 0 exactly; skip it to avoid ln 0.
        if r0 > 1e-12 * h && r1 > 1e-12 * h {
            acc += d * (r1 / r0).ln();
        }
    }
    Ok(acc + fs * ((f.b - s) / (s - f.a)).ln())
}

/// `PV ∫_a^b f(t)/(t - s) dt` for a smooth `f`, by singularity subtraction
/// and the substitution `t = c + r sin φ`, which also tames square-root
/// behaviour at the ends.
pub fn pv_integral(f: &dyn Fn(f64) -> f64, a: f64, b: f64, s: f64) -> Result<f64> {
    if !(s > a && s < b) {
        return Err(Error::OutOfDomain(format!("s = {s} is not inside ({a}, {b})")));
    }
    let fs = f(s);
    let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
    let phi_s = ((s - c) / r).clamp(-1.0, 1.0).asin();
    let eps = 1e-7 * r;
    let slope = (f((s + eps).min(b)) - f((s - eps).max(a))) / (2.0 * eps);
    let g = |phi: f64| {
        let t = c + r * phi.sin();
        let dt = r * phi.cos();
        if (t - s).abs() < 1e-10 * r {
            return slope * dt;
        }
        (f(t) - fs) / (t - s) * dt
    };
    let left = graded_integral(&g, -PI / 2.0, phi_s, 48, 30);
    let right = graded_integral(&g, phi_s, PI / 2.0, 48, 30);
    Ok(left + right + fs * ((b - s) / (s - a)).ln())
}

/// Bounded-plus-homogeneous solution of `(1/π) PV ∫ g(y)/(y - x) dy = f(x)`
/// on `[-1, 1]`:
/// `g(x) = PV ∫ √(1-y²) f(y)/(x - y) dy / (π √(1-x²)) + c / √(1-x²)`.
///
/// Values are returned on `cells + 1` uniform nodes; the two end nodes are
/// extrapolated linearly from their neighbours.
pub fn airfoil_solve(f: &(dyn Fn(f64) -> f64 + Sync), c: f64, cells: usize) -> Result<GridFunction> {
    if cells < 3 {
        return Err(Error::param("need at least 3 cells"));
    }
    let h = 2.0 / cells as f64;
    let w = |y: f64| {
        let root = (1.0 - y * y).max(0.0).sqrt();
        if root == 0.0 {
            0.0
        } else {
            root * f(y)
        }
    };
    let mut values: Vec<f64> = (0..=cells)
        .into_par_iter()
        .map(|i| {
            if i == 0 || i == cells {
                return 0.0;
            }
            let x = -1.0 + i as f64 * h;
            let pv = pv_integral(&w, -1.0, 1.0, x).expect("interior node");
            let root = (1.0 - x * x).sqrt();
            -pv / (PI * root) + c / root
        })
        .collect();
    values[0] = 2.0 * values[1] - values[2];
    values[cells] = 2.0 * values[cells - 1] - values[cells - 2];
    GridFunction::new(-1.0, 1.0, values)
}

/// Right side of the airfoil equation satisfied by the rescaled slope
/// of `g̃_α`: `(λ + ln(β²(1-x²) / (1/2 - β²x²))) / π` with `λ = ln((1-α)/α)`.
pub fn level_curve_airfoil_rhs(alpha: f64, x: f64) -> f64 {
    let b2 = surfaces::beta(alpha).powi(2);
    (lagrange_multiplier(alpha) + (b2 * (1.0 - x * x) / (0.5 - b2 * x * x)).ln()) / PI
}

/// `h'(x) = g̃_α'(βx) = (2/π) atan((1-2α)x / √(1-x²))` on `[-1, 1]`.
pub fn level_curve_rescaled_slope(alpha: f64, x: f64) -> f64 {
    2.0 / PI * ((1.0 - 2.0 * alpha) * x).atan2((1.0 - x * x).max(0.0).sqrt())
}

/// `(1/π) PV ∫_{-1}^{1} g(y)/(y - x) dy` for piecewise-linear `g`.
pub fn airfoil_forward(g: &GridFunction, x: f64) -> Result<f64> {
    Ok(hilbert_pv(g, x)? / PI)
}

/// Density of the continual cotransition measure of a shape with slope
/// `dg`, support `[lo, hi]` and area `area` above `|u|`:
/// `(2/(πA)) cos(π g'(x)/2) √((x-lo)(hi-x)) exp(½ PV ∫ g'(u)/(x-u) du)`.
pub fn continual_cotransition_density(
    dg: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    area: f64,
    x: f64,
) -> Result<f64> {
    if !(hi > lo) || !(area > 0.0) {
        return Err(Error::param("support must be nondegenerate and area positive"));
    }
    if x <= lo || x >= hi {
        return Ok(0.0);
    }
    let pv = -pv_integral(dg, lo, hi, x)?;
    let d = dg(x);
    Ok(2.0 / (PI * area) * (PI * d / 2.0).cos() * ((x - lo) * (hi - x)).sqrt() * (0.5 * pv).exp())
}

/// Boundary of `{(x, y) ∈ [0,1]² : y ≤ f(x)}` for nonincreasing `f` on
/// `[0, 1]`, in rotated coordinates, sampled on `cells + 1` nodes of
/// `[-√2/2, √2/2]`. Jumps of `f` become vertical segments.
pub fn rotate_decreasing(f: &GridFunction, cells: usize) -> Result<GridFunction> {
    check_decreasing(f)?;
    let f0 = f.values[0];
    let f1 = *f.values.last().unwrap();
    GridFunction::from_fn(-FRAC_1_SQRT_2, FRAC_1_SQRT_2, cells, |u| {
        let t = u * std::f64::consts::SQRT_2;
        let (x, y) = if t <= -f0 {
            (0.0, -t)
        } else if t >= 1.0 - f1 {
            (1.0, 1.0 - t)
        } else {
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if mid - f.eval(mid) < t {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let x = 0.5 * (lo + hi);
            (x, x - t)
        };
        (x + y) * FRAC_1_SQRT_2
    })
}

/// Inverse of [`rotate_decreasing`] for a 1-Lipschitz `g`: the profile
/// `y = f(x)` sampled on `cells + 1` nodes of `[0, 1]`.
pub fn unrotate(g: &GridFunction, cells: usize) -> Result<GridFunction> {
    GridFunction::from_fn(0.0, 1.0, cells, |x| {
        let target = x * std::f64::consts::SQRT_2;
        let (mut lo, mut hi) = (g.a, g.b);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid + g.eval(mid) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let u = 0.5 * (lo + hi);
        ((g.eval(u) - u) * FRAC_1_SQRT_2).clamp(0.0, 1.0)
    })
}

fn check_decreasing(f: &GridFunction) -> Result<()> {
    if f.a != 0.0 || f.b != 1.0 {
        return Err(Error::param("profile must live on [0, 1]"));
    }
    if f.values.windows(2).any(|w| w[1] > w[0] + 1e-15) {
        return Err(Error::NonMonotone("profile increases somewhere".into()));
    }
    if f.values.iter().any(|v| !(-1e-15..=1.0 + 1e-15).contains(v)) {
        return Err(Error::param("profile leaves [0, 1]"));
    }
    Ok(())
}

/// `I(f) = ∫₀¹∫₀¹ ln|f(x) - y + f⁻¹(y) - x| dy dx` by direct quadrature,
/// with `f⁻¹(y) = inf{x : f(x) ≤ y}`.
pub fn functional_i(f: &GridFunction) -> Result<f64> {
    check_decreasing(f)?;
    let inv = |y: f64| -> f64 {
        if f.values[0] <= y {
            return 0.0;
        }
        if *f.values.last().unwrap() > y {
            return 1.0;
        }
        // First node at or below y; the crossing lies in the cell before it.
        let k = f.values.partition_point(|&v| v > y);
        let (v0, v1) = (f.values[k - 1], f.values[k]);
        f.node(k - 1) + f.step() * (v0 - y) / (v0 - v1)
    };
    let inner = |x: f64| -> f64 {
        let fx = f.eval(x);
        let g = |y: f64| (fx - y + inv(y) - x).abs().max(1e-300).ln();
        graded_integral(&g, 0.0, fx, 24, 40) + graded_integral(&g, fx, 1.0, 24, 40)
    };
    let panels = 64;
    let d = 1.0 / panels as f64;
    let total: f64 = (0..panels)
        .into_par_iter()
        .map(|p| {
            let (a, b) = (p as f64 * d, (p + 1) as f64 * d);
            if p == 0 || p == panels - 1 {
                graded_integral(&inner, a, b, 1, 20)
            } else {
                gl_panel(&inner, a, b)
            }
        })
        .sum();
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use rand::Rng;
    use std::f64::consts::SQRT_2;

    fn square_curve(alpha: f64, cells: usize) -> GridFunction {
        GridFunction::from_fn(-FRAC_1_SQRT_2, FRAC_1_SQRT_2, cells, |u| {
            surfaces::g_tilde(alpha, u).unwrap()
        })
        .unwrap()
    }

    // Oracle: K by brute-force midpoint sums over sub-cells, skipping the
    // diagonal sub-cell where the exact self term is used.
    fn k_brute(g: &GridFunction, sub: usize) -> f64 {
        let slopes = g.slopes();
        let h = g.step() / sub as f64;
        let pts: Vec<(f64, f64)> = (0..g.cells() * sub)
            .map(|i| (g.a + (i as f64 + 0.5) * h, slopes[i / sub]))
            .collect();
        let mut acc = 0.0;
        for (i, (x, sx)) in pts.iter().enumerate() {
            for (j, (y, sy)) in pts.iter().enumerate() {
                let w = if i == j { h * h * (h.ln() - 1.5) } else { h * h * (x - y).abs().ln() };
                acc += sx * sy * w;
            }
        }
        -0.5 * acc
    }

    #[test]
    fn kernel_matches_direct_second_difference() {
        for d in [60usize, 64, 65, 100, 1000] {
            let x = d as f64;
            let f = |x: f64| 0.5 * x * x * x.ln();
            let direct = f(x + 1.0) - 2.0 * f(x) + f(x - 1.0);
            assert!((direct - log_second_difference(d)).abs() < 1e-9, "{d}");
        }
        assert_eq!(log_second_difference(0), 0.0);
        assert!((log_second_difference(1) - 2.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn k_closed_form_agrees_with_brute_force() {
        let g = square_curve(0.3, 40);
        let exact = functional_k(&g);
        let brute = k_brute(&g, 20);
        assert!((exact - brute).abs() < 2e-3, "{exact} {brute}");
    }

    #[test]
    fn k_of_abs_and_flat() {
        // g = |u| (α = 0) and g = √2/2 (α = 1/2).
        let flat = GridFunction::from_fn(-FRAC_1_SQRT_2, FRAC_1_SQRT_2, 200, |_| FRAC_1_SQRT_2).unwrap();
        assert!(functional_k(&flat).abs() < 1e-15);
        let abs = GridFunction::from_fn(-FRAC_1_SQRT_2, FRAC_1_SQRT_2, 200, f64::abs).unwrap();
        assert!((functional_k(&abs) - 2f64.ln()).abs() < 1e-12);
        assert!((k_closed_form(0.0) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn k_of_level_curves() {
        for &a in &[0.25, 0.4] {
            let k = functional_k(&square_curve(a, 2000));
            assert!((k - k_closed_form(a)).abs() < 1e-4, "{a}: {k} vs {}", k_closed_form(a));
        }
        assert!((k_closed_form(0.25) - 0.130_812).abs() < 1e-6);
    }

    #[test]
    fn residual_vanishes_inside_support() {
        for &a in &[0.2, 0.35] {
            let g = square_curve(a, 1000);
            let lam = lagrange_multiplier(a);
            let b = surfaces::beta(a);
            for k in 1..20 {
                let s = -b + 2.0 * b * k as f64 / 20.0;
                let w = optimality_residual(&g, lam, s);
                assert!(w.abs() < 1e-2, "{a} {s}: {w}");
            }
            // Outside: w ≥ 0 where g' = -1, w ≤ 0 where g' = +1.
            assert!(optimality_residual(&g, lam, -0.69) > 0.0);
            assert!(optimality_residual(&g, lam, 0.69) < 0.0);
        }
    }

    #[test]
    fn projection_meets_constraints() {
        let mut rng = substream(0, 21);
        for &(a, th) in &[(0.3, 1.0), (0.1, 0.5), (0.7, 0.8)] {
            let c = Constraints::for_rectangle(a, th).unwrap();
            let y: Vec<f64> = (0..150).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let s = project_slopes(&y, &c).unwrap();
            let g = GridFunction::from_slopes(c.a, c.b, c.left, &s).unwrap();
            assert!(is_admissible(&g, &c, 1e-10), "{a} {th}");
            // Projection is idempotent.
            let s2 = project_slopes(&s, &c).unwrap();
            assert!(s.iter().zip(&s2).all(|(p, q)| (p - q).abs() < 1e-9));
        }
    }

    #[test]
    fn projection_fallback_agrees_with_newton() {
        let c = Constraints::for_rectangle(0.35, 0.6).unwrap();
        let n = 80;
        let h = (c.b - c.a) / n as f64;
        let mids: Vec<f64> = (0..n).map(|k| c.a + (k as f64 + 0.5) * h).collect();
        let (t1, t2) = c.slope_targets();
        let y: Vec<f64> = (0..n).map(|k| ((k as f64) * 0.37).sin() * 2.0).collect();
        let a = project_slopes(&y, &c).unwrap();
        let b = project_by_bisection(&y, &mids, h, t1, t2).unwrap();
        assert!(a.iter().zip(&b).all(|(p, q)| (p - q).abs() < 1e-8));
    }

    #[test]
    fn hilbert_pv_linear_exact() {
        // PV ∫_{-1}^{1} t/(t - s) dt = 2 + s ln((1-s)/(1+s)).
        let f = GridFunction::from_fn(-1.0, 1.0, 7, |t| t).unwrap();
        for &s in &[-0.6f64, 0.0, 0.3, 0.5] {
            let exact = 2.0 + s * ((1.0 - s) / (1.0 + s)).ln();
            assert!((hilbert_pv(&f, s).unwrap() - exact).abs() < 1e-13, "{s}");
        }
        assert!(hilbert_pv(&f, 1.0).is_err());
    }

    #[test]
    fn pv_semicircle_identity() {
        // PV ∫ √(β² - t²)/(s - t) dt = π s.
        let b = 0.6;
        let f = |t: f64| (b * b - t * t).max(0.0).sqrt();
        for &s in &[-0.5, -0.1, 0.0, 0.33, 0.59] {
            let v = -pv_integral(&f, -b, b, s).unwrap();
            assert!((v - PI * s).abs() < 1e-9, "{s}: {v}");
        }
    }

    #[test]
    fn airfoil_constant_rhs() {
        let lam = 0.7;
        let g = airfoil_solve(&|_| lam, 0.0, 200).unwrap();
        for i in 1..200 {
            let x = g.node(i);
            let exact = lam * x / (1.0 - x * x).sqrt();
            assert!((g.values[i] - exact).abs() < 1e-8 * (1.0 + exact.abs()), "{x}");
        }
        // The homogeneous part.
        let g0 = airfoil_solve(&|_| 0.0, 1.0, 50).unwrap();
        assert!((g0.values[25] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn airfoil_recovers_level_curve_slope() {
        let a = 0.3;
        let f = move |x: f64| level_curve_airfoil_rhs(a, x);
        let g = airfoil_solve(&f, 0.0, 400).unwrap();
        let exact = |x: f64| level_curve_rescaled_slope(a, x);
        for i in 1..400 {
            let x = g.node(i);
            assert!((g.values[i] - exact(x)).abs() < 1e-6, "{x}");
            if x.abs() <= 0.9 {
                assert!((airfoil_forward(&g, x).unwrap() - f(x)).abs() < 5e-3, "{x}");
            }
        }
    }

    #[test]
    fn minimizer_square_recovers_level_curve() {
        let (g, rep) = minimize_k(0.3, 1.0, 200).unwrap();
        assert!(rep.supnorm_gap < 0.02, "{rep:?}");
        assert!((rep.k_value - rep.k_closed_form).abs() < 2e-3, "{rep:?}");
        let c = Constraints::for_rectangle(0.3, 1.0).unwrap();
        assert!(is_admissible(&g, &c, 1e-9));
    }

    #[test]
    fn functional_i_identity_on_simple_profiles() {
        let ln2 = 2f64.ln();
        let zero = GridFunction::new(0.0, 1.0, vec![0.0; 3]).unwrap();
        assert!((functional_i(&zero).unwrap() - (2.0 * ln2 - 1.5)).abs() < 1e-4);
        let diag = GridFunction::from_fn(0.0, 1.0, 4, |x| 1.0 - x).unwrap();
        assert!((functional_i(&diag).unwrap() - (ln2 - 1.5)).abs() < 1e-4);
        let rising = GridFunction::from_fn(0.0, 1.0, 4, |x| x).unwrap();
        assert!(matches!(functional_i(&rising), Err(Error::NonMonotone(_))));
    }

    #[test]
    fn rotation_round_trip() {
        let g = square_curve(0.3, 400);
        let f = unrotate(&g, 400).unwrap();
        let g2 = rotate_decreasing(&f, 400).unwrap();
        assert!(g.sub(&g2).unwrap().values.iter().all(|d| d.abs() < 5e-3));
        let zero = GridFunction::new(0.0, 1.0, vec![0.0; 5]).unwrap();
        let abs = rotate_decreasing(&zero, 10).unwrap();
        assert!(abs.sup_distance(f64::abs) < 1e-12);
        assert!((abs.values[5] - 0.0).abs() < 1e-12 && (abs.values[0] - SQRT_2 / 2.0).abs() < 1e-12);
    }
}
