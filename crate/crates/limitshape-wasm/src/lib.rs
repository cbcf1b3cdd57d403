//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a flat `Float64Array`; shapes are documented per
//! function. The functions are plain Rust on native targets, which is how
//! the tests call them.

use limitshape::rng::substream;
use limitshape::sampler;
use limitshape::surfaces::{self, RotatedPoint};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 10_000;
const MAX_CURVES: usize = 64;
const MAX_RESOLUTION: usize = 512;
const MAX_SIDE: usize = 200;

fn level_point(theta: f64, alpha: f64, u: f64) -> limitshape::Result<f64> {
    if theta == 1.0 {
        surfaces::g_tilde(alpha, u)
    } else {
        surfaces::rect_level_curve_extended(theta, alpha, u)
    }
}

fn surface_value(theta: f64, x: f64, y: f64, plane_partition: bool) -> limitshape::Result<f64> {
    if plane_partition {
        Ok(surfaces::plane_partition_surface(theta, x, y)?.value)
    } else if theta == 1.0 {
        surfaces::limit_surface_l(x, y)
    } else {
        surfaces::rect_surface_l(theta, x, y)
    }
}

/// Level curves `{L_θ = α}` as polylines in `[0, 1] × [0, θ]`.
///
/// Returns `alphas.len()` consecutive blocks of `points` vertices, each
/// vertex as `x, y`.
#[wasm_bindgen]
pub fn level_curves(theta: f64, alphas: &[f64], points: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_POINTS).contains(&points) || alphas.len() > MAX_CURVES {
        return Err(format!("need 2 ≤ points ≤ {MAX_POINTS} and at most {MAX_CURVES} curves"));
    }
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let (a, b) = (-theta * half, half);
    let mut out = Vec::with_capacity(2 * points * alphas.len());
    for &alpha in alphas {
        for i in 0..points {
            let u = if i + 1 == points { b } else { a + (b - a) * i as f64 / (points - 1) as f64 };
            let v = level_point(theta, alpha, u).map_err(|e| e.to_string())?;
            let (x, y) = RotatedPoint { u, v }.to_xy();
            out.push(x);
            out.push(y);
        }
    }
    Ok(out)
}

/// `L_θ`, or `M_θ = -ln L_θ` when `plane_partition` is set, at the centres
/// of a `res × res` grid over `[0, 1] × [0, θ]`. Row `i` is `x`, column `j`
/// is `y`; row-major.
#[wasm_bindgen]
pub fn surface_grid(theta: f64, res: usize, plane_partition: bool) -> Result<Vec<f64>, String> {
    if !(1..=MAX_RESOLUTION).contains(&res) {
        return Err(format!("resolution must be in 1..={MAX_RESOLUTION}"));
    }
    let h = 1.0 / res as f64;
    let mut out = Vec::with_capacity(res * res);
    for i in 0..res {
        for j in 0..res {
            let x = (i as f64 + 0.5) * h;
            let y = theta * (j as f64 + 0.5) * h;
            out.push(surface_value(theta, x, y, plane_partition).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

/// A uniform `n × n` tableau drawn from `seed`, rescaled: `t_ij / n²`
/// row-major in the first `n²` entries, then `L(i/n, j/n)` for the same
/// cells in the next `n²`.
#[wasm_bindgen]
pub fn sampled_surface(n: usize, seed: u32) -> Result<Vec<f64>, String> {
    if !(1..=MAX_SIDE).contains(&n) {
        return Err(format!("n must be in 1..={MAX_SIDE}"));
    }
    let t = sampler::sample_square_tableau(n, &mut substream(seed as u64, 0)).map_err(|e| e.to_string())?;
    let nn = (n * n) as f64;
    let mut out: Vec<f64> = t.rows().iter().flatten().map(|&e| e as f64 / nn).collect();
    for i in 1..=n {
        for j in 1..=n {
            let l = surfaces::limit_surface_l(i as f64 / n as f64, j as f64 / n as f64).map_err(|e| e.to_string())?;
            out.push(l);
        }
    }
    Ok(out)
}
