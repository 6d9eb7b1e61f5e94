use serde::{Deserialize, Serialize};

use crate::autodiff::Scalar;
use crate::error::{Error, Result};

/// Corey relative-permeability parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Corey {
    pub swc: f64,
    pub sor: f64,
    pub nw: f64,
    pub no: f64,
}

impl Corey {
    pub const LINEAR: Corey = Corey {
        swc: 0.0,
        sor: 0.0,
        nw: 1.0,
        no: 1.0,
    };

    pub fn validate(&self) -> Result<()> {
        if !(self.swc >= 0.0 && self.sor >= 0.0 && self.swc + self.sor < 1.0) {
            return Err(Error::Problem(format!(
                "Corey endpoints need 0 <= swc, sor and swc + sor < 1 (got {}, {})",
                self.swc, self.sor
            )));
        }
        if !(self.nw > 0.0 && self.no > 0.0) {
            return Err(Error::Problem("Corey exponents must be positive".into()));
        }
        Ok(())
    }

    fn mobile_range(&self) -> f64 {
        1.0 - self.swc - self.sor
    }

    /// `(krw, kro)` with exact clamping outside the mobile range.
    pub fn relperm(&self, sw: f64) -> (f64, f64) {
        let (krw, kro, _, _) = self.relperm_with_slopes(&sw);
        (krw, kro)
    }

    /// `(krw, kro, dkrw/dSw, dkro/dSw)` on any scalar.
    pub fn relperm_with_slopes<S: Scalar<Prim = f64>>(&self, sw: &S) -> (S, S, S, S) {
        let zero = sw.lift(0.0);
        let one = sw.lift(1.0);
        let range = self.mobile_range();
        let se_v = (sw.value() - self.swc) / range;
        if se_v < 0.0 {
            return (zero.clone(), one, zero.clone(), zero);
        }
        if se_v > 1.0 {
            return (one, zero.clone(), zero.clone(), zero);
        }
        let se = sw.offset(-self.swc).scale(1.0 / range);
        let so = se.scale(-1.0).offset(1.0);
        let krw = power(&se, self.nw);
        let kro = power(&so, self.no);
        let dkrw = power(&se, self.nw - 1.0).scale(self.nw / range);
        let dkro = power(&so, self.no - 1.0).scale(-self.no / range);
        (krw, kro, dkrw, dkro)
    }

    /// `(fw, dfw/dSw)` with mobility ratio `M = mu_o / mu_w`.
    pub fn fractional_flow(&self, sw: f64, mu_w: f64, mu_o: f64) -> Result<(f64, f64)> {
        let (fw, dfw) = self.fractional_flow_scalar(&sw, mu_o / mu_w)?;
        Ok((fw, dfw))
    }

    /// `fw = krw / (krw + kro / M)` and its slope on any scalar.
    pub fn fractional_flow_scalar<S: Scalar<Prim = f64>>(&self, sw: &S, m: f64) -> Result<(S, S)> {
        let (krw, kro, dkrw, dkro) = self.relperm_with_slopes(sw);
        let inv_m = 1.0 / m;
        let den = krw.clone() + kro.scale(inv_m);
        if den.value() == 0.0 {
            return Err(Error::Problem(format!(
                "fractional flow undefined at Sw = {}",
                sw.value()
            )));
        }
        let inv = den.recip();
        let fw = krw.clone() * inv.clone();
        let num = (dkrw * kro - krw * dkro).scale(inv_m);
        Ok((fw, num * inv.clone() * inv))
    }
}

fn power<S: Scalar<Prim = f64>>(x: &S, n: f64) -> S {
    if n == 0.0 {
        x.lift(1.0)
    } else if n == 1.0 {
        x.clone()
    } else if n.fract() == 0.0 && n.abs() < i32::MAX as f64 {
        x.powi(n as i32)
    } else if x.value() <= 0.0 {
        x.lift(0.0)
    } else {
        (x.ln().scale(n)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_branches() {
        let c = Corey {
            swc: 0.2,
            sor: 0.15,
            nw: 2.0,
            no: 3.0,
        };
        assert_eq!(c.relperm(0.2), (0.0, 1.0));
        assert_eq!(c.relperm(0.1), (0.0, 1.0));
        let (krw, kro) = c.relperm(0.85);
        assert!((krw - 1.0).abs() < 1e-15 && kro.abs() < 1e-15);
        assert_eq!(c.relperm(0.95), (1.0, 0.0));
    }

    #[test]
    fn linear_corey() {
        let (krw, kro) = Corey::LINEAR.relperm(0.3);
        assert!((krw - 0.3).abs() < 1e-15 && (kro - 0.7).abs() < 1e-15);
    }

    #[test]
    fn linear_fractional_flow() {
        let c = Corey::LINEAR;
        assert_eq!(c.fractional_flow(0.0, 1.0, 2.0).unwrap().0, 0.0);
        assert_eq!(c.fractional_flow(1.0, 1.0, 2.0).unwrap().0, 1.0);
        let (fw, _) = c.fractional_flow(0.5, 1.0, 2.0).unwrap();
        assert!((fw - 2.0 / 3.0).abs() < 1e-15);
        let (_, d0) = c.fractional_flow(0.0, 1.0, 2.0).unwrap();
        assert!((d0 - 2.0).abs() < 1e-15);
        for s in [0.1, 0.35, 0.8] {
            let (fw, d) = c.fractional_flow(s, 1.0, 2.0).unwrap();
            assert!((fw - 2.0 * s / (1.0 + s)).abs() < 1e-14);
            assert!((d - 2.0 / (1.0 + s) / (1.0 + s)).abs() < 1e-14);
        }
    }

    #[test]
    fn general_slope_matches_differences() {
        let c = Corey {
            swc: 0.1,
            sor: 0.2,
            nw: 2.5,
            no: 1.7,
        };
        for s in [0.2, 0.4, 0.6] {
            let h = 1e-6;
            let (fp, _) = c.fractional_flow(s + h, 1.0, 3.0).unwrap();
            let (fm, _) = c.fractional_flow(s - h, 1.0, 3.0).unwrap();
            let (_, d) = c.fractional_flow(s, 1.0, 3.0).unwrap();
            assert!((d - (fp - fm) / (2.0 * h)).abs() < 1e-7);
        }
    }
}
