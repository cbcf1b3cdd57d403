//! The limit surface of square and rectangular tableaux, its level curves,
//! and the related closed forms.
//!
//! Rotated coordinates are `u = (x - y)/√2`, `v = (x + y)/√2`. The unit
//! square maps to the region `|u| ≤ v ≤ √2 - |u|`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BISECT_STEPS: usize = 200;
const EDGE_TOL: f64 = 1e-12;

/// Largest value of the plane-partition surface `-ln L`.
pub const SURFACE_CAP: f64 = 745.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotatedPoint {
    pub u: f64,
    pub v: f64,
}

impl RotatedPoint {
    pub fn from_xy(x: f64, y: f64) -> Self {
        RotatedPoint { u: (x - y) * FRAC_1_SQRT_2, v: (x + y) * FRAC_1_SQRT_2 }
    }

    pub fn to_xy(self) -> (f64, f64) {
        ((self.u + self.v) * FRAC_1_SQRT_2, (self.v - self.u) * FRAC_1_SQRT_2)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) || alpha.is_nan() {
        return Err(Error::param(format!("alpha = {alpha} is outside [0, 1]")));
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::param(format!("theta = {theta} is outside (0, 1]")));
    }
    Ok(())
}

/// Half-width `β = √(2α(1-α))` of the non-trivial part of `g̃_α`.
pub fn beta(alpha: f64) -> f64 {
    (2.0 * alpha * (1.0 - alpha)).max(0.0).sqrt()
}

/// Binary entropy in nats.
pub fn entropy(alpha: f64) -> f64 {
    let t = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    t(alpha) + t(1.0 - alpha)
}

// g_α on |u| < β for α ≤ 1/2.
fn g_lower(alpha: f64, u: f64) -> f64 {
    let b = beta(alpha);
    if u.abs() >= b {
        return u.abs();
    }
    let r = (b * b - u * u).max(0.0).sqrt();
    let c = 1.0 - 2.0 * alpha;
    (2.0 / PI) * u * (c * u).atan2(r) + (SQRT_2 / PI) * (SQRT_2 * r).atan2(c)
}

/// The level curve `v = g_α(u)` of `L`, for `|u| ≤ β(α)`.
///
/// Values with `α > 1/2` come from the reflection `√2 - g_{1-α}(u)`.
pub fn g_alpha(alpha: f64, u: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let b = beta(alpha);
    if u.abs() > b * (1.0 + 1e-15) + 1e-300 {
        return Err(Error::OutOfDomain(format!("|u| = {} exceeds beta = {b}", u.abs())));
    }
    Ok(g_tilde_unchecked(alpha, u))
}

fn g_tilde_unchecked(alpha: f64, u: f64) -> f64 {
    if alpha <= 0.5 {
        g_lower(alpha, u)
    } else {
        SQRT_2 - g_lower(1.0 - alpha, u)
    }
}

/// `g̃_α` on the whole diagonal range `[-√2/2, √2/2]`: equal to `|u|` (for
/// `α ≤ 1/2`) or `√2 - |u|` (for `α > 1/2`) outside `[-β, β]`.
pub fn g_tilde(alpha: f64, u: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if u.abs() > FRAC_1_SQRT_2 + 1e-12 {
        return Err(Error::OutOfDomain(format!("u = {u} outside [-√2/2, √2/2]")));
    }
    Ok(g_tilde_unchecked(alpha, u))
}

/// Slope `d g̃_α / du = (2/π) atan((1-2α)u / √(β² - u²))` inside `[-β, β]`.
pub fn g_tilde_slope(alpha: f64, u: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let b = beta(alpha);
    let s = if u.abs() >= b {
        if alpha <= 0.5 {
            u.signum()
        } else {
            -u.signum()
        }
    } else {
        let r = (b * b - u * u).sqrt();
        (2.0 / PI) * ((1.0 - 2.0 * alpha) * u).atan2(r)
    };
    Ok(s)
}

/// `∂g̃_α(u)/∂α = √(2α(1-α) - u²) / (π α (1-α))` inside `[-β, β]`, zero
/// outside. As a function of `u` this is the semicircle density.
pub fn dg_dalpha(alpha: f64, u: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param(format!("alpha = {alpha} is outside (0, 1)")));
    }
    let b2 = 2.0 * alpha * (1.0 - alpha);
    Ok((b2 - u * u).max(0.0).sqrt() / (PI * alpha * (1.0 - alpha)))
}

/// Semicircle density of radius `β(α)`.
pub fn semicircle_density(alpha: f64, u: f64) -> Result<f64> {
    dg_dalpha(alpha, u)
}

/// Distribution function of [`semicircle_density`].
pub fn semicircle_cdf(alpha: f64, u: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param(format!("alpha = {alpha} is outside (0, 1)")));
    }
    let b = beta(alpha);
    if u <= -b {
        return Ok(0.0);
    }
    if u >= b {
        return Ok(1.0);
    }
    let r = (b * b - u * u).sqrt();
    Ok(0.5 + (u * r + b * b * (u / b).asin()) / (PI * b * b))
}

fn check_unit(x: f64, hi: f64, name: &str) -> Result<f64> {
    if !(x >= -1e-12 && x <= hi + 1e-12) {
        return Err(Error::OutOfDomain(format!("{name} = {x} outside [0, {hi}]")));
    }
    Ok(x.clamp(0.0, hi))
}

/// `L(x, y)` on the unit square: the `α` whose level curve `g̃_α` passes
/// through `(x, y)`. Points with `x + y > 1` use `L = 1 - L(1-x, 1-y)`.
pub fn limit_surface_l(x: f64, y: f64) -> Result<f64> {
    let x = check_unit(x, 1.0, "x")?;
    let y = check_unit(y, 1.0, "y")?;
    if x + y > 1.0 {
        return Ok(1.0 - lower_square_l(1.0 - x, 1.0 - y));
    }
    Ok(lower_square_l(x, y))
}

fn lower_square_l(x: f64, y: f64) -> f64 {
    let p = RotatedPoint::from_xy(x, y);
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..BISECT_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g_lower(mid, p.u) <= p.v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Parameters of the level curve `h_{θ,α}` of the rectangular surface.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelCurveParams {
    pub theta: f64,
    pub alpha: f64,
    /// `√(2θα(1-α))`.
    pub beta_bar: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// `γ₁ - 1` and `γ₂ - 1`, computed without cancellation.
    pub gamma1_m1: f64,
    pub gamma2_m1: f64,
    /// `θ/(1+θ)`.
    pub alpha_star: f64,
}

impl LevelCurveParams {
    /// Parameters for `α ∈ [0, 1]`; the curve occupies `[-β₁, β₂]`.
    pub fn new(theta: f64, alpha: f64) -> Result<Self> {
        check_theta(theta)?;
        check_alpha(alpha)?;
        let beta_bar = (2.0 * theta * alpha * (1.0 - alpha)).max(0.0).sqrt();
        let shift = alpha * (1.0 - theta) * FRAC_1_SQRT_2;
        let root = 2.0 * (theta * alpha * (1.0 - alpha)).sqrt();
        Ok(LevelCurveParams {
            theta,
            alpha,
            beta_bar,
            beta1: beta_bar - shift,
            beta2: beta_bar + shift,
            gamma1: (alpha + theta * (1.0 - alpha)) / root,
            gamma2: (theta * alpha + 1.0 - alpha) / root,
            gamma1_m1: (alpha.sqrt() - (theta * (1.0 - alpha)).sqrt()).powi(2) / root,
            gamma2_m1: ((theta * alpha).sqrt() - (1.0 - alpha).sqrt()).powi(2) / root,
            alpha_star: theta / (1.0 + theta),
        })
    }

    fn b(&self) -> f64 {
        self.alpha * (1.0 - self.theta) * FRAC_1_SQRT_2
    }

    fn xi(&self, u: f64) -> f64 {
        ((u - self.b()) / self.beta_bar).clamp(-1.0, 1.0)
    }
}

/// `(atan √((1-ξ)(γ₁-1)/((1+ξ)(γ₁+1))), atan √((1+ξ)(γ₂-1)/((1-ξ)(γ₂+1))))`.
fn hook_angles(p: &LevelCurveParams, xi: f64) -> (f64, f64) {
    let a1 = ((1.0 - xi) * p.gamma1_m1).sqrt().atan2(((1.0 + xi) * (p.gamma1 + 1.0)).sqrt());
    let a2 = ((1.0 + xi) * p.gamma2_m1).sqrt().atan2(((1.0 - xi) * (p.gamma2 + 1.0)).sqrt());
    (a1, a2)
}

// h_{θ,α} for α ≤ 1/2 on its own interval.
fn rect_h_core(p: &LevelCurveParams, u: f64) -> f64 {
    let xi = p.xi(u);
    let (a1, a2) = hook_angles(p, xi);
    let r1 = (p.gamma1_m1 * (p.gamma1 + 1.0)).sqrt();
    let r2 = (p.gamma2_m1 * (p.gamma2 + 1.0)).sqrt();
    let arc = 0.5 * (xi.asin() + PI / 2.0);
    let scale = 2.0 * p.beta_bar / PI;
    if p.alpha <= p.alpha_star {
        p.beta1
            + scale
                * (-(xi + p.gamma1) * a1
                    + (xi - p.gamma2) * a2
                    + arc * (r2 - r1)
                    + PI / 2.0 * p.gamma1_m1)
    } else {
        p.theta * SQRT_2 - p.beta1
            + scale
                * ((xi + p.gamma1) * a1
                    + (xi - p.gamma2) * a2
                    + arc * (r1 + r2)
                    - PI / 2.0 * p.gamma1_m1)
    }
}

fn rect_h_lower(theta: f64, alpha: f64, u: f64) -> f64 {
    if alpha <= 0.0 {
        return u.abs();
    }
    let p = LevelCurveParams::new(theta, alpha).expect("validated");
    if u <= -p.beta1 {
        return if alpha <= p.alpha_star { -u } else { theta * SQRT_2 + u };
    }
    if u >= p.beta2 {
        return u;
    }
    rect_h_core(&p, u)
}

fn rect_h_any(theta: f64, alpha: f64, u: f64) -> f64 {
    if alpha <= 0.5 {
        rect_h_lower(theta, alpha, u)
    } else {
        (1.0 + theta) * FRAC_1_SQRT_2
            - rect_h_lower(theta, 1.0 - alpha, (1.0 - theta) * FRAC_1_SQRT_2 - u)
    }
}

fn rect_u_range(theta: f64) -> (f64, f64) {
    (-theta * FRAC_1_SQRT_2, FRAC_1_SQRT_2)
}

/// Level curve `h_{θ,α}(u)` of the rectangular surface on `[-β₁, β₂]`.
/// Values with `α > 1/2` use the reflection
/// `h_{θ,α}(u) = (1+θ)√2/2 - h_{θ,1-α}((1-θ)√2/2 - u)`.
pub fn rect_level_curve(theta: f64, alpha: f64, u: f64) -> Result<f64> {
    let p = LevelCurveParams::new(theta, alpha)?;
    let tol = 1e-12;
    if u < -p.beta1 - tol || u > p.beta2 + tol {
        return Err(Error::OutOfDomain(format!(
            "u = {u} outside [{}, {}]",
            -p.beta1, p.beta2
        )));
    }
    Ok(rect_h_any(theta, alpha, u))
}

/// `h̃_{θ,α}` on the full range `[-θ√2/2, √2/2]`, following the rectangle
/// boundary outside `[-β₁, β₂]`.
pub fn rect_level_curve_extended(theta: f64, alpha: f64, u: f64) -> Result<f64> {
    check_theta(theta)?;
    check_alpha(alpha)?;
    let (a, b) = rect_u_range(theta);
    if u < a - 1e-12 || u > b + 1e-12 {
        return Err(Error::OutOfDomain(format!("u = {u} outside [{a}, {b}]")));
    }
    Ok(rect_h_any(theta, alpha, u.clamp(a, b)))
}

/// Slope of [`rect_level_curve_extended`].
pub fn rect_level_curve_slope(theta: f64, alpha: f64, u: f64) -> Result<f64> {
    check_theta(theta)?;
    check_alpha(alpha)?;
    if alpha > 0.5 {
        return rect_level_curve_slope(theta, 1.0 - alpha, (1.0 - theta) * FRAC_1_SQRT_2 - u);
    }
    if alpha == 0.0 {
        return Ok(if u < 0.0 { -1.0 } else { 1.0 });
    }
    let p = LevelCurveParams::new(theta, alpha)?;
    if u <= -p.beta1 {
        return Ok(if alpha <= p.alpha_star { -1.0 } else { 1.0 });
    }
    if u >= p.beta2 {
        return Ok(1.0);
    }
    let (a1, a2) = hook_angles(&p, p.xi(u));
    Ok(if alpha <= p.alpha_star {
        2.0 / PI * (a2 - a1)
    } else {
        2.0 / PI * (a1 + a2)
    })
}

/// `L_θ(x, y)` on `[0, 1] × [0, θ]`.
///
/// Interior points and points on the sides `x = 0`, `y = 0` are located by
/// bisection on `α`; the sides `x = 1`, `y = θ` by the point reflection
/// through the centre. The two corners where every level curve meets get
/// the limiting values `α*` and `1 - α*`; the other two corners are 0 and 1.
pub fn rect_surface_l(theta: f64, x: f64, y: f64) -> Result<f64> {
    check_theta(theta)?;
    let x = check_unit(x, 1.0, "x")?;
    let y = check_unit(y, theta, "y")?;
    let astar = theta / (1.0 + theta);
    let on_low = x <= EDGE_TOL || y <= EDGE_TOL;
    let on_high = x >= 1.0 - EDGE_TOL || y >= theta - EDGE_TOL;
    if x <= EDGE_TOL && y <= EDGE_TOL {
        return Ok(0.0);
    }
    if x >= 1.0 - EDGE_TOL && y >= theta - EDGE_TOL {
        return Ok(1.0);
    }
    if on_low && on_high {
        if x <= EDGE_TOL && y >= theta - EDGE_TOL {
            return Ok(astar);
        }
        if x >= 1.0 - EDGE_TOL && y <= EDGE_TOL {
            return Ok(1.0 - astar);
        }
    }
    if on_high {
        return Ok(1.0 - rect_l_bisect(theta, 1.0 - x, theta - y));
    }
    Ok(rect_l_bisect(theta, x, y))
}

fn rect_l_bisect(theta: f64, x: f64, y: f64) -> f64 {
    let p = RotatedPoint::from_xy(x, y);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..BISECT_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if rect_h_any(theta, mid, p.u) <= p.v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// A surface value together with whether it hit [`SURFACE_CAP`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Capped {
    pub value: f64,
    pub capped: bool,
}

/// `M_θ(x, y) = -ln L_θ(x, y)`, capped at [`SURFACE_CAP`] where `L`
/// underflows.
pub fn plane_partition_surface(theta: f64, x: f64, y: f64) -> Result<Capped> {
    let l = rect_surface_l(theta, x, y)?;
    if l <= (-SURFACE_CAP).exp() {
        return Ok(Capped { value: SURFACE_CAP, capped: true });
    }
    Ok(Capped { value: -l.ln(), capped: false })
}

/// Limit shape of Plancherel-distributed diagrams,
/// `Ω(u) = (2/π)(u asin(u/√2) + √(2 - u²))` for `|u| ≤ √2`, `|u|` beyond.
pub fn plancherel_omega(u: f64) -> f64 {
    if u.abs() >= SQRT_2 {
        return u.abs();
    }
    2.0 / PI * (u * (u / SQRT_2).asin() + (2.0 - u * u).sqrt())
}

/// `Ω'(u) = (2/π) asin(u/√2)`.
pub fn plancherel_omega_slope(u: f64) -> f64 {
    if u.abs() >= SQRT_2 {
        return u.signum();
    }
    2.0 / PI * (u / SQRT_2).asin()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    // Adaptive Simpson, used as an independent integrator in these tests.
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let n = if n % 2 == 1 { n + 1 } else { n };
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    // The display form of the rectangular level curve with ± branches and
    // the radical term written as (1-θ)/(√2 β̄).
    fn printed_rect_h(theta: f64, alpha: f64, u: f64) -> f64 {
        let p = LevelCurveParams::new(theta, alpha).unwrap();
        let sgn = if alpha <= p.alpha_star { 1.0 } else { -1.0 };
        let xi = p.xi(u);
        let (a1, a2) = hook_angles(&p, xi);
        let half = theta * SQRT_2 / 2.0;
        half + sgn * (p.beta1 - half)
            + 2.0 * p.beta_bar / PI
                * (sgn * (-xi - p.gamma1) * a1
                    + (xi - p.gamma2) * a2
                    + 0.5 * (xi.asin() + PI / 2.0) * (1.0 - theta) / (SQRT_2 * p.beta_bar)
                    + sgn * PI / 2.0 * (p.gamma1 - 1.0))
    }

    #[test]
    fn g_alpha_at_zero_matches_diagonal_formula() {
        // On the diagonal L(t,t) = (1 - cos πt)/2, so g_α(0) = √2 acos(1-2α)/π.
        for &a in &[0.05f64, 0.2, 0.37, 0.5, 0.63, 0.9] {
            let expect = SQRT_2 * (1.0 - 2.0 * a).acos() / PI;
            assert!(close(g_alpha(a, 0.0).unwrap(), expect, 1e-14), "alpha {a}");
        }
        assert!(close(g_alpha(0.2, 0.0).unwrap(), 0.417_429_507_3, 1e-10));
    }

    #[test]
    fn g_alpha_domain_and_endpoints() {
        for &a in &[0.1, 0.3, 0.5, 0.8] {
            let b = beta(a);
            let edge = if a <= 0.5 { b } else { SQRT_2 - b };
            assert!(close(g_alpha(a, b).unwrap(), edge, 1e-12));
            assert!(close(g_alpha(a, -b).unwrap(), edge, 1e-12));
            assert!(g_alpha(a, b + 1e-6).is_err());
        }
        assert!(g_alpha(1.2, 0.0).is_err());
        assert_eq!(g_tilde(0.5, 0.2).unwrap(), FRAC_1_SQRT_2);
        assert_eq!(g_tilde(0.0, -0.3).unwrap(), 0.3);
        assert!(close(g_tilde(1.0, -0.3).unwrap(), SQRT_2 - 0.3, 1e-15));
    }

    #[test]
    fn level_curve_area_equals_alpha() {
        for &a in &[0.05, 0.25, 0.4, 0.5, 0.75, 0.95] {
            let f = |u: f64| g_tilde(a, u).unwrap() - u.abs();
            let area = simpson(&f, -FRAC_1_SQRT_2, FRAC_1_SQRT_2, 20000);
            assert!(close(area, a, 1e-6), "alpha {a}: {area}");
        }
    }

    #[test]
    fn slope_matches_finite_difference() {
        for &a in &[0.15, 0.4, 0.7] {
            let b = beta(a);
            for k in 1..20 {
                let u = -b + 2.0 * b * k as f64 / 20.0;
                let h = 1e-6;
                let fd = (g_tilde(a, u + h).unwrap() - g_tilde(a, u - h).unwrap()) / (2.0 * h);
                assert!(close(fd, g_tilde_slope(a, u).unwrap(), 1e-6), "{a} {u}");
            }
        }
    }

    #[test]
    fn dg_dalpha_is_derivative_and_semicircle() {
        assert!(close(dg_dalpha(0.5, 0.0).unwrap(), 0.900_316_3, 1e-6));
        for &a in &[0.2, 0.45, 0.6] {
            for &u in &[-0.3, 0.0, 0.1, 0.25] {
                let h = 1e-6;
                let fd = (g_tilde(a + h, u).unwrap() - g_tilde(a - h, u).unwrap()) / (2.0 * h);
                assert!(close(fd, dg_dalpha(a, u).unwrap(), 1e-5), "{a} {u}");
            }
            let b = beta(a);
            let mass = simpson(&|u| semicircle_density(a, u).unwrap(), -b, b, 20000);
            assert!(close(mass, 1.0, 1e-4));
            for &u in &[-0.2f64, 0.0, 0.3] {
                let part = simpson(&|t| semicircle_density(a, t).unwrap(), -b, u.max(-b), 20000);
                assert!(close(part, semicircle_cdf(a, u).unwrap(), 1e-4));
            }
        }
        assert!(dg_dalpha(0.0, 0.0).is_err());
    }

    #[test]
    fn surface_special_values() {
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            let l1 = limit_surface_l(t, 0.0).unwrap();
            assert!(close(l1, (1.0 - (1.0 - t * t).sqrt()) / 2.0, 1e-10), "L({t},0)");
            let l2 = limit_surface_l(1.0, t).unwrap();
            assert!(close(l2, (1.0 + (2.0 * t - t * t).sqrt()) / 2.0, 1e-10), "L(1,{t})");
            let l3 = limit_surface_l(t, t).unwrap();
            assert!(close(l3, (1.0 - (PI * t).cos()) / 2.0, 1e-10), "L({t},{t})");
        }
        assert!(limit_surface_l(1.1, 0.0).is_err());
    }

    #[test]
    fn surface_symmetries() {
        for i in 0..=10 {
            for j in 0..=10 {
                let (x, y) = (i as f64 / 10.0, j as f64 / 10.0);
                let l = limit_surface_l(x, y).unwrap();
                assert!(close(l, limit_surface_l(y, x).unwrap(), 1e-12));
                assert!(close(l, 1.0 - limit_surface_l(1.0 - x, 1.0 - y).unwrap(), 1e-12));
            }
        }
    }

    #[test]
    fn surface_inverts_level_curves() {
        for &a in &[0.1, 0.3, 0.5, 0.6, 0.85] {
            let b = beta(a);
            for k in 1..10 {
                let u = -b + 2.0 * b * k as f64 / 10.0;
                let v = g_tilde(a, u).unwrap();
                let (x, y) = RotatedPoint { u, v }.to_xy();
                assert!(close(limit_surface_l(x, y).unwrap(), a, 1e-9), "{a} {u}");
            }
        }
    }

    #[test]
    fn printed_rectangular_curve_agrees_with_case_formulas() {
        for &theta in &[0.2, 0.5, 0.8] {
            for &a in &[0.05, 0.15, 0.3, 0.4, 0.5] {
                let p = LevelCurveParams::new(theta, a).unwrap();
                for k in 0..=40 {
                    let u = -p.beta1 + (p.beta1 + p.beta2) * k as f64 / 40.0;
                    let ours = rect_level_curve(theta, a, u).unwrap();
                    let printed = printed_rect_h(theta, a, u);
                    assert!(close(ours, printed, 1e-12), "theta {theta} alpha {a} u {u}");
                }
            }
        }
    }

    #[test]
    fn rectangular_curve_is_admissible() {
        for &theta in &[0.25, 0.5, 0.75, 1.0] {
            for &a in &[0.1, 0.3, 0.45, 0.5, 0.6, 0.9] {
                let (lo, hi) = rect_u_range(theta);
                let h = |u: f64| rect_level_curve_extended(theta, a, u).unwrap();
                assert!(close(h(lo), theta * FRAC_1_SQRT_2, 1e-12), "left end {theta} {a}");
                assert!(close(h(hi), FRAC_1_SQRT_2, 1e-12), "right end {theta} {a}");
                let area = simpson(&|u| h(u) - u.abs(), lo, hi, 40000);
                assert!(close(area, a * theta, 1e-6), "area {theta} {a}: {area}");
                for k in 0..=50 {
                    let u = lo + (hi - lo) * k as f64 / 50.0;
                    let v = h(u);
                    assert!(v >= u.abs() - 1e-12);
                    assert!(v <= (u + theta * SQRT_2).min(SQRT_2 - u) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn rectangular_slope_forms_agree() {
        // Closed form of the slope written through ξ alone.
        fn closed(theta: f64, a: f64, u: f64) -> f64 {
            let p = LevelCurveParams::new(theta, a).unwrap();
            let xi = p.xi(u);
            let num = (1.0 - theta) * (a * (1.0 - a)).sqrt() + xi * theta.sqrt() * (1.0 - 2.0 * a);
            2.0 / PI * num.atan2((theta * (1.0 - xi * xi)).sqrt())
        }
        for &theta in &[0.3, 0.6, 1.0] {
            for &a in &[0.1, 0.2, 0.35, 0.5] {
                let p = LevelCurveParams::new(theta, a).unwrap();
                for k in 1..30 {
                    let u = -p.beta1 + (p.beta1 + p.beta2) * k as f64 / 30.0;
                    let s = rect_level_curve_slope(theta, a, u).unwrap();
                    assert!(close(s, closed(theta, a, u), 1e-12), "{theta} {a} {u}");
                    let e = 1e-6;
                    let fd = (rect_level_curve(theta, a, u + e).unwrap()
                        - rect_level_curve(theta, a, u - e).unwrap())
                        / (2.0 * e);
                    assert!(close(s, fd, 1e-5), "fd {theta} {a} {u}");
                }
            }
        }
    }

    #[test]
    fn rectangular_theta_one_is_square() {
        for &a in &[0.1, 0.3, 0.5, 0.7] {
            for k in 0..=20 {
                let u = -FRAC_1_SQRT_2 + SQRT_2 * k as f64 / 20.0;
                let r = rect_level_curve_extended(1.0, a, u).unwrap();
                assert!(close(r, g_tilde(a, u).unwrap(), 1e-12));
            }
        }
        for i in 0..=20 {
            for j in 0..=20 {
                let (x, y) = (i as f64 / 20.0, j as f64 / 20.0);
                let a = rect_surface_l(1.0, x, y).unwrap();
                let b = limit_surface_l(x, y).unwrap();
                assert!(close(a, b, 1e-9), "({x},{y}) {a} {b}");
            }
        }
    }

    #[test]
    fn corner_reaching_curve() {
        let theta = 0.5;
        let p = LevelCurveParams::new(theta, 1.0 / 3.0).unwrap();
        assert!(close(p.alpha_star, 1.0 / 3.0, 1e-15));
        assert!(close(p.beta1, theta * FRAC_1_SQRT_2, 1e-12));
        assert!(close(rect_surface_l(theta, 0.0, theta).unwrap(), 1.0 / 3.0, 1e-15));
    }

    #[test]
    fn rectangular_surface_inverts_curves() {
        for &theta in &[0.3, 0.5, 0.9] {
            for &a in &[0.05, 0.2, 0.45, 0.55, 0.8] {
                let p = LevelCurveParams::new(theta, a).unwrap();
                for k in 1..10 {
                    let u = -p.beta1 + (p.beta1 + p.beta2) * k as f64 / 10.0;
                    let v = rect_level_curve(theta, a, u).unwrap();
                    let (x, y) = RotatedPoint { u, v }.to_xy();
                    let l = rect_surface_l(theta, x, y.min(theta)).unwrap();
                    assert!(close(l, a, 1e-8), "{theta} {a} {u}: {l}");
                }
            }
            // Reflection through the centre.
            for i in 0..=8 {
                for j in 0..=8 {
                    let (x, y) = (i as f64 / 8.0, theta * j as f64 / 8.0);
                    let l = rect_surface_l(theta, x, y).unwrap();
                    let r = rect_surface_l(theta, 1.0 - x, theta - y).unwrap();
                    assert!(close(l + r, 1.0, 1e-9), "{theta} ({x},{y})");
                }
            }
        }
    }

    #[test]
    fn plane_partition_surface_values() {
        let m = plane_partition_surface(1.0, 0.5, 0.5).unwrap();
        assert!(close(m.value, 2f64.ln(), 1e-9) && !m.capped);
        let c = plane_partition_surface(1.0, 0.0, 0.0).unwrap();
        assert!(c.capped && c.value == SURFACE_CAP);
        assert!(plane_partition_surface(0.5, 0.5, 0.7).is_err());
    }

    #[test]
    fn omega_values() {
        assert!(close(plancherel_omega(0.0), 2.0 * SQRT_2 / PI, 1e-15));
        assert!(close(plancherel_omega(SQRT_2), SQRT_2, 1e-12));
        assert_eq!(plancherel_omega(-2.0), 2.0);
        let area = simpson(&|u| plancherel_omega(u) - u.abs(), -SQRT_2, SQRT_2, 20000);
        assert!(close(area, 1.0, 1e-6));
    }

    #[test]
    fn entropy_values() {
        assert!(close(entropy(0.5), 2f64.ln(), 1e-15));
        assert_eq!(entropy(0.0), 0.0);
    }
}
