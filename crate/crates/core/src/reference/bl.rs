use super::grid::GridField;
use crate::error::{Error, Result};
use crate::physics::BuckleyLeverettParams;

fn flux(b: &BuckleyLeverettParams, s: f64) -> Result<(f64, f64)> {
    b.corey.fractional_flow_scalar(&s, b.m)
}

fn check(b: &BuckleyLeverettParams) -> Result<()> {
    b.corey.validate()?;
    if !(b.v > 0.0 && b.m > 0.0) {
        return Err(Error::Problem(
            "reference solutions need positive velocity and viscosity ratio".into(),
        ));
    }
    if !(b.s_inject > b.s_initial) {
        return Err(Error::Problem(
            "reference solutions need injected saturation above the initial one".into(),
        ));
    }
    Ok(())
}

/// Self-similar solution of the injection Riemann problem by the method of
/// characteristics. Only concave fluxes between the initial and injected
/// saturations are supported, where the solution is a pure rarefaction fan.
#[derive(Debug, Clone, Copy)]
pub struct BlFan {
    params: BuckleyLeverettParams,
    slowest: f64,
    fastest: f64,
}

impl BlFan {
    pub fn new(params: &BuckleyLeverettParams) -> Result<Self> {
        check(params)?;
        let (lo, hi) = (params.s_initial, params.s_inject);
        let samples = 2000;
        let mut prev = f64::INFINITY;
        for i in 0..=samples {
            let s = lo + (hi - lo) * i as f64 / samples as f64;
            let (_, d) = flux(params, s)?;
            if d > prev + 1e-12 {
                return Err(Error::Problem(format!(
                    "fractional flow is not concave near Sw = {s}; the solution has a shock"
                )));
            }
            prev = d;
        }
        Ok(Self {
            params: *params,
            fastest: flux(params, lo)?.1,
            slowest: flux(params, hi)?.1,
        })
    }

    /// Characteristic speeds `(fw'(S_inject), fw'(S_initial))` bounding the fan.
    pub fn speeds(&self) -> (f64, f64) {
        (self.slowest, self.fastest)
    }

    pub fn saturation(&self, x: f64, t: f64) -> Result<f64> {
        let b = &self.params;
        if x <= 0.0 && t > 0.0 {
            return Ok(b.s_inject);
        }
        if t <= 0.0 {
            return Ok(b.s_initial);
        }
        let xi = x / (b.v * t);
        if xi <= self.slowest {
            return Ok(b.s_inject);
        }
        if xi >= self.fastest {
            return Ok(b.s_initial);
        }
        // fw' decreases across the fan, so bisect fw'(S) = xi.
        let (mut lo, mut hi) = (b.s_initial, b.s_inject);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if flux(b, mid)?.1 > xi {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Cell centres of a uniform `nx`-cell grid on `[0, 1]`.
pub fn cell_centres(nx: usize) -> Vec<f64> {
    (0..nx).map(|i| (i as f64 + 0.5) / nx as f64).collect()
}

/// First-order explicit upwind solution on `nx` cells, reported at each of
/// `times` (ascending) on the cell centres. `cfl` is the Courant number with
/// respect to the fastest characteristic speed.
pub fn bl_upwind(
    params: &BuckleyLeverettParams,
    nx: usize,
    times: &[f64],
    cfl: f64,
) -> Result<Vec<GridField>> {
    check(params)?;
    if !(cfl > 0.0) {
        return Err(Error::Config(format!("CFL number must be positive, got {cfl}")));
    }
    if cfl > 1.0 {
        return Err(Error::Cfl(cfl));
    }
    if nx < 2 {
        return Err(Error::Grid("upwind solve needs at least 2 cells".into()));
    }
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Grid("output times must be non-negative and ascending".into()));
    }
    let (lo, hi) = (params.s_initial, params.s_inject);
    let mut max_speed: f64 = 0.0;
    for i in 0..=2000 {
        let s = lo + (hi - lo) * i as f64 / 2000.0;
        max_speed = max_speed.max(flux(params, s)?.1.abs());
    }
    let dx = 1.0 / nx as f64;
    let dt_max = cfl * dx / (params.v * max_speed);
    let inlet_flux = flux(params, hi)?.0;
    let xs = cell_centres(nx);
    let mut s = vec![lo; nx];
    let mut f = vec![0.0; nx];
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while now < target {
            let dt = dt_max.min(target - now);
            let r = params.v * dt / dx;
            for (fi, si) in f.iter_mut().zip(&s) {
                *fi = flux(params, *si)?.0;
            }
            s[0] -= r * (f[0] - inlet_flux);
            for i in 1..nx {
                s[i] -= r * (f[i] - f[i - 1]);
            }
            now = if target - now <= dt_max { target } else { now + dt };
        }
        out.push(GridField::new(xs.clone(), None, Some(target), s.clone())?);
    }
    Ok(out)
}

/// `Σ |S_fd - S_exact| Δx` over the cells of an upwind solution at time `t`.
pub fn upwind_l1_error(params: &BuckleyLeverettParams, nx: usize, t: f64, cfl: f64) -> Result<f64> {
    let fan = BlFan::new(params)?;
    let fd = bl_upwind(params, nx, &[t], cfl)?.remove(0);
    let mut sum = 0.0;
    for (x, v) in fd.x().iter().zip(fd.values()) {
        sum += (v - fan.saturation(*x, t)?).abs();
    }
    Ok(sum / nx as f64)
}
