use crate::error::{Error, Result};
use crate::physics::PressureParams;

/// Exact layered-medium pressure at normalized height `y`; constant in `x`.
pub fn pressure_analytic(p: &PressureParams, y: f64) -> f64 {
    let k = |y: f64| (p.k0 + p.ly * y) / p.k0;
    p.p_bottom - (p.p_bottom - p.p_top) * k(y).ln() / k(1.0).ln()
}

/// Thomas algorithm for `a[i] u[i-1] + b[i] u[i] + c[i] u[i+1] = d[i]`.
pub(crate) fn solve_tridiagonal(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    for i in 0..n {
        let lower = if i == 0 { 0.0 } else { a[i] };
        let den = b[i] - lower * if i == 0 { 0.0 } else { cp[i - 1] };
        if den == 0.0 || !den.is_finite() {
            return Err(Error::NonFinite("tridiagonal pivot".into()));
        }
        cp[i] = c[i] / den;
        dp[i] = (d[i] - lower * if i == 0 { 0.0 } else { dp[i - 1] }) / den;
    }
    let mut u = vec![0.0; n];
    for i in (0..n).rev() {
        u[i] = dp[i] - if i + 1 < n { cp[i] * u[i + 1] } else { 0.0 };
    }
    Ok(u)
}

/// Conservative second-order finite-difference solve of
/// `d/dy((K0 + Ly·y) dp/dy) = 0` on `cells` uniform cells; returns nodal
/// pressures at `y = i / cells`.
pub fn pressure_fd(p: &PressureParams, cells: usize) -> Result<Vec<f64>> {
    if cells < 2 {
        return Err(Error::Grid("pressure solve needs at least 2 cells".into()));
    }
    let h = 1.0 / cells as f64;
    let k = |face: f64| p.k0 + p.ly * face * h;
    let m = cells - 1;
    let (mut a, mut b, mut c, mut d) = (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    for j in 0..m {
        let i = (j + 1) as f64;
        let (kw, ke) = (k(i - 0.5), k(i + 0.5));
        a[j] = kw;
        b[j] = -(kw + ke);
        c[j] = ke;
    }
    d[0] -= a[0] * p.p_bottom;
    d[m - 1] -= c[m - 1] * p.p_top;
    let inner = solve_tridiagonal(&a, &b, &c, &d)?;
    let mut out = Vec::with_capacity(cells + 1);
    out.push(p.p_bottom);
    out.extend(inner);
    out.push(p.p_top);
    Ok(out)
}
