use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::flow::Corey;
use crate::autodiff::{InputDerivative, Scalar};
use crate::error::{Error, Result};
use crate::network::OutputScaling;

/// Steady pressure in a layered medium, `∇·((K0 + Ly·ŷ)∇p) = 0` on the unit
/// square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureParams {
    pub k0: f64,
    pub ly: f64,
    pub p_bottom: f64,
    pub p_top: f64,
}

impl Default for PressureParams {
    fn default() -> Self {
        Self {
            k0: 0.01,
            ly: 100.0,
            p_bottom: 10.0,
            p_top: 5.0,
        }
    }
}

/// Buckley-Leverett waterflood on `[0, 1] × [0, 1]` in `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuckleyLeverettParams {
    pub v: f64,
    /// Oil-to-water viscosity ratio.
    pub m: f64,
    pub corey: Corey,
    pub s_inject: f64,
    pub s_initial: f64,
}

impl Default for BuckleyLeverettParams {
    fn default() -> Self {
        Self {
            v: 1.0,
            m: 2.0,
            corey: Corey::LINEAR,
            s_inject: 1.0,
            s_initial: 0.0,
        }
    }
}

/// Advection-dispersion with linear sorption on the unit square, unit time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdrParams {
    pub phi: f64,
    pub rho_b: f64,
    pub kd: f64,
    pub d: f64,
    pub vx: f64,
    pub vy: f64,
    pub c_inlet: f64,
    pub c_initial: f64,
}

impl Default for AdrParams {
    fn default() -> Self {
        Self {
            phi: 0.3,
            rho_b: 2000.0,
            kd: 1.0e-4,
            d: 0.5,
            vx: 0.5,
            vy: 0.0,
            c_inlet: 1.0,
            c_initial: 0.0,
        }
    }
}

impl AdrParams {
    /// `R = φ + ρb·Kd`
    pub fn retardation(&self) -> f64 {
        self.phi + self.rho_b * self.kd
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Ex1,
    Ex2,
    Ex3,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 3] = [ProblemKind::Ex1, ProblemKind::Ex2, ProblemKind::Ex3];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Ex1 => "ex1",
            ProblemKind::Ex2 => "ex2",
            ProblemKind::Ex3 => "ex3",
        }
    }

    pub fn default_qubits(self) -> usize {
        match self {
            ProblemKind::Ex1 => 2,
            ProblemKind::Ex2 => 5,
            ProblemKind::Ex3 => 6,
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ex1" => Ok(ProblemKind::Ex1),
            "ex2" => Ok(ProblemKind::Ex2),
            "ex3" => Ok(ProblemKind::Ex3),
            _ => Err(Error::Config(format!(
                "unknown problem '{s}' (valid: ex1, ex2, ex3)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConditionKind {
    /// Target in network units.
    Dirichlet(f64),
    /// Zero normal derivative across the segment.
    NeumannZero,
}

/// Boundary piece `x[axis] = at`, optionally restricted to `x[time] ≥ from`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub name: &'static str,
    pub axis: usize,
    pub at: f64,
    pub time_from: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCondition {
    pub segment: Segment,
    pub kind: ConditionKind,
}

/// Dirichlet data is not enforced on the inlet before this time, where it
/// contradicts the initial state.
pub const INLET_TIME_GAP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PdeProblem {
    HeterogeneousPressure(PressureParams),
    BuckleyLeverett(BuckleyLeverettParams),
    AdvectionDispersionAdsorption(AdrParams),
}

impl PdeProblem {
    pub fn example(kind: ProblemKind) -> Self {
        match kind {
            ProblemKind::Ex1 => PdeProblem::HeterogeneousPressure(PressureParams::default()),
            ProblemKind::Ex2 => PdeProblem::BuckleyLeverett(BuckleyLeverettParams::default()),
            ProblemKind::Ex3 => {
                PdeProblem::AdvectionDispersionAdsorption(AdrParams::default())
            }
        }
    }

    pub fn kind(&self) -> ProblemKind {
        match self {
            PdeProblem::HeterogeneousPressure(_) => ProblemKind::Ex1,
            PdeProblem::BuckleyLeverett(_) => ProblemKind::Ex2,
            PdeProblem::AdvectionDispersionAdsorption(_) => ProblemKind::Ex3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Problem(m.to_string()));
        match self {
            PdeProblem::HeterogeneousPressure(p) => {
                if !(p.k0 > 0.0) {
                    return bad("K0 must be positive");
                }
                if !(p.ly > 0.0) {
                    return bad("Ly must be positive");
                }
                if p.p_bottom == p.p_top {
                    return bad("boundary pressures must differ");
                }
            }
            PdeProblem::BuckleyLeverett(b) => {
                b.corey.validate()?;
                if !(b.m > 0.0) {
                    return bad("viscosity ratio M must be positive");
                }
                if !b.v.is_finite() {
                    return bad("velocity must be finite");
                }
            }
            PdeProblem::AdvectionDispersionAdsorption(a) => {
                if !(a.d > 0.0) {
                    return bad("dispersion coefficient D must be positive");
                }
                if !(a.retardation() > 0.0) {
                    return bad("retardation factor must be positive");
                }
                if !(a.vx.is_finite() && a.vy.is_finite()) {
                    return bad("velocity must be finite");
                }
            }
        }
        Ok(())
    }

    /// Number of model inputs; time, when present, is the last coordinate.
    pub fn dim(&self) -> usize {
        match self {
            PdeProblem::HeterogeneousPressure(_) | PdeProblem::BuckleyLeverett(_) => 2,
            PdeProblem::AdvectionDispersionAdsorption(_) => 3,
        }
    }

    pub fn time_axis(&self) -> Option<usize> {
        match self {
            PdeProblem::HeterogeneousPressure(_) => None,
            PdeProblem::BuckleyLeverett(_) => Some(1),
            PdeProblem::AdvectionDispersionAdsorption(_) => Some(2),
        }
    }

    pub fn coordinate_names(&self) -> &'static [&'static str] {
        match self {
            PdeProblem::HeterogeneousPressure(_) => &["x", "y"],
            PdeProblem::BuckleyLeverett(_) => &["x", "t"],
            PdeProblem::AdvectionDispersionAdsorption(_) => &["x", "y", "t"],
        }
    }

    /// Map between network output and physical units.
    pub fn output_scaling(&self) -> OutputScaling {
        match self {
            PdeProblem::HeterogeneousPressure(p) => OutputScaling {
                offset: p.p_top,
                scale: p.p_bottom - p.p_top,
            },
            _ => OutputScaling::IDENTITY,
        }
    }

    pub fn boundary_conditions(&self) -> Vec<BoundaryCondition> {
        let seg = |name, axis, at, time_from| Segment {
            name,
            axis,
            at,
            time_from,
        };
        let dirichlet = |segment, v| BoundaryCondition {
            segment,
            kind: ConditionKind::Dirichlet(v),
        };
        let neumann = |segment| BoundaryCondition {
            segment,
            kind: ConditionKind::NeumannZero,
        };
        let out = self.output_scaling();
        match self {
            PdeProblem::HeterogeneousPressure(p) => vec![
                dirichlet(seg("bottom", 1, 0.0, None), out.to_network(p.p_bottom)),
                dirichlet(seg("top", 1, 1.0, None), out.to_network(p.p_top)),
                neumann(seg("left", 0, 0.0, None)),
                neumann(seg("right", 0, 1.0, None)),
            ],
            PdeProblem::BuckleyLeverett(b) => vec![dirichlet(
                seg("inlet", 0, 0.0, Some(INLET_TIME_GAP)),
                b.s_inject,
            )],
            PdeProblem::AdvectionDispersionAdsorption(a) => vec![
                dirichlet(seg("inlet", 0, 0.0, Some(INLET_TIME_GAP)), a.c_inlet),
                neumann(seg("outlet", 0, 1.0, None)),
                neumann(seg("bottom", 1, 0.0, None)),
                neumann(seg("top", 1, 1.0, None)),
            ],
        }
    }

    /// Initial value in network units for transient problems.
    pub fn initial_value(&self) -> Option<f64> {
        match self {
            PdeProblem::HeterogeneousPressure(_) => None,
            PdeProblem::BuckleyLeverett(b) => Some(b.s_initial),
            PdeProblem::AdvectionDispersionAdsorption(a) => Some(a.c_initial),
        }
    }

    pub fn has_neumann(&self) -> bool {
        self.boundary_conditions()
            .iter()
            .any(|c| c.kind == ConditionKind::NeumannZero)
    }

    /// PDE residual of the network output `u` at normalized point `x`.
    ///
    /// `u` must carry input derivatives in direction `i` for coordinate `i`.
    pub fn residual<S>(&self, u: &S, x: &[f64]) -> Result<S>
    where
        S: Scalar<Prim = f64> + InputDerivative,
    {
        let d = |dir: usize, order: u8| u.input_derivative(dir, order);
        Ok(match self {
            PdeProblem::HeterogeneousPressure(p) => {
                // Divided through by Ly.
                let lap = d(0, 2)? + d(1, 2)?;
                lap.scale(p.k0 / p.ly + x[1]) + d(1, 1)?
            }
            PdeProblem::BuckleyLeverett(b) => {
                let (_, dfw) = b.corey.fractional_flow_scalar(u, b.m)?;
                d(1, 1)? + (dfw * d(0, 1)?).scale(b.v)
            }
            PdeProblem::AdvectionDispersionAdsorption(a) => {
                let lap = d(0, 2)? + d(1, 2)?;
                let adv = S::mul_add2(&d(0, 1)?, &u.lift(a.vx), &d(1, 1)?, &u.lift(a.vy));
                d(2, 1)?.scale(a.retardation()) - lap.scale(a.d) + adv
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autodiff::Jet;

    fn field2(f: impl Fn(Jet<f64, 2>, Jet<f64, 2>) -> Jet<f64, 2>, x: [f64; 2]) -> Jet<f64, 2> {
        f(Jet::input(x[0], 0), Jet::input(x[1], 1))
    }

    #[test]
    fn retardation_from_defaults() {
        assert!((AdrParams::default().retardation() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn constant_and_linear_fields_have_zero_residual() {
        for kind in ProblemKind::ALL {
            let p = PdeProblem::example(kind);
            let x = [0.3, 0.6, 0.2];
            let r = match p.dim() {
                2 => p.residual(&Jet::<f64, 2>::constant(0.7), &x).unwrap().v,
                _ => p.residual(&Jet::<f64, 3>::constant(0.7), &x).unwrap().v,
            };
            assert_eq!(r, 0.0, "{kind}");
        }
        let p = PdeProblem::example(ProblemKind::Ex1);
        let u = field2(|x, _| x, [0.4, 0.3]);
        assert_eq!(p.residual(&u, &[0.4, 0.3]).unwrap().v, 0.0);
    }

    #[test]
    fn bl_residual_of_linear_profile() {
        let p = PdeProblem::example(ProblemKind::Ex2);
        let u = field2(|x, _| x, [0.0, 0.5]);
        assert!((p.residual(&u, &[0.0, 0.5]).unwrap().v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        let mut a = AdrParams::default();
        a.d = 0.0;
        assert!(PdeProblem::AdvectionDispersionAdsorption(a).validate().is_err());
        let mut b = BuckleyLeverettParams::default();
        b.corey.swc = 0.6;
        b.corey.sor = 0.5;
        assert!(PdeProblem::BuckleyLeverett(b).validate().is_err());
        let mut p = PressureParams::default();
        p.k0 = -1.0;
        assert!(PdeProblem::HeterogeneousPressure(p).validate().is_err());
        for k in ProblemKind::ALL {
            PdeProblem::example(k).validate().unwrap();
        }
    }
}
