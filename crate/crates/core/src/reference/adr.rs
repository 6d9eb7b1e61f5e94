use super::grid::{linspace, GridField};
use crate::error::{Error, Result};
use crate::physics::AdrParams;

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Semi-infinite 1-D step-inlet solution of `R c_t = D c_xx - v c_x`.
pub fn ogata_banks(a: &AdrParams, x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Problem(format!(
            "the erfc solution needs t > 0, got {t}"
        )));
    }
    let r = a.retardation();
    let den = 2.0 * (a.d * r * t).sqrt();
    let lead = erfc((r * x - a.vx * t) / den);
    let tail = erfc((r * x + a.vx * t) / den);
    let tail = if tail == 0.0 {
        0.0
    } else {
        (a.vx * x / a.d + tail.ln()).exp()
    };
    Ok(a.c_initial + (a.c_inlet - a.c_initial) * 0.5 * (lead + tail))
}

/// Explicit scheme on `n × n` nodes of the unit square: first-order upwind
/// advection, central dispersion, a fixed inlet at `x = 0` and zero normal
/// gradient elsewhere (mirror ghost nodes). `safety` scales the largest
/// stable step.
pub fn adr_upwind_2d(a: &AdrParams, n: usize, times: &[f64], safety: f64) -> Result<Vec<GridField>> {
    if !(safety > 0.0) {
        return Err(Error::Config(format!("step safety factor must be positive, got {safety}")));
    }
    if safety > 1.0 {
        return Err(Error::Cfl(safety));
    }
    if n < 3 {
        return Err(Error::Grid("2-D solve needs at least 3 nodes per side".into()));
    }
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Grid("output times must be non-negative and ascending".into()));
    }
    let r = a.retardation();
    let h = 1.0 / (n - 1) as f64;
    let rate = (a.vx.abs() + a.vy.abs()) / (r * h) + 4.0 * a.d / (r * h * h);
    let dt_max = safety / rate;
    let axis = linspace(0.0, 1.0, n);
    let idx = |i: usize, j: usize| j * n + i;
    // Mirror ghosts: index -1 maps to 1, index n maps to n - 2.
    let at = |k: isize| -> usize {
        if k < 0 {
            (-k) as usize
        } else if k as usize >= n {
            2 * (n - 1) - k as usize
        } else {
            k as usize
        }
    };
    let mut c = vec![a.c_initial; n * n];
    let mut next = c.clone();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while now < target {
            let dt = dt_max.min(target - now);
            let k = dt / r;
            for j in 0..n {
                for i in 1..n {
                    let (ii, jj) = (i as isize, j as isize);
                    let cc = c[idx(i, j)];
                    let (w, e) = (c[idx(at(ii - 1), j)], c[idx(at(ii + 1), j)]);
                    let (s, nn) = (c[idx(i, at(jj - 1))], c[idx(i, at(jj + 1))]);
                    let lap = (w + e + s + nn - 4.0 * cc) / (h * h);
                    let cx = (if a.vx >= 0.0 { cc - w } else { e - cc }) / h;
                    let cy = (if a.vy >= 0.0 { cc - s } else { nn - cc }) / h;
                    next[idx(i, j)] = cc + k * (a.d * lap - a.vx * cx - a.vy * cy);
                }
                next[idx(0, j)] = a.c_inlet;
            }
            std::mem::swap(&mut c, &mut next);
            now = if target - now <= dt_max { target } else { now + dt };
        }
        let mut values = c.clone();
        if target == 0.0 {
            values.fill(a.c_initial);
        }
        out.push(GridField::new(axis.clone(), Some(axis.clone()), Some(target), values)?);
    }
    Ok(out)
}
