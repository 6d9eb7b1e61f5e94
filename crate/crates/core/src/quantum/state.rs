use crate::autodiff::Scalar;
use crate::error::{shape, Error, Result};

pub const MAX_QUBITS: usize = 12;

/// Rotation axis of a single-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Pure state of `dq` qubits. Qubit 0 is the least-significant bit of the
/// basis-state index.
#[derive(Debug, Clone)]
pub struct StateVector<S> {
    dq: usize,
    re: Vec<S>,
    im: Vec<S>,
}

impl<S: Scalar> StateVector<S> {
    /// `|0…0⟩`. `like` supplies the recording context for tape scalars.
    pub fn zero(dq: usize, like: &S) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&dq) {
            return Err(Error::QubitCount(dq));
        }
        let zero = <S::Prim as num_traits::Zero>::zero();
        let dim = 1usize << dq;
        let z = like.lift(zero);
        let mut re = vec![z.clone(); dim];
        re[0] = like.lift(<S::Prim as num_traits::One>::one());
        Ok(Self {
            dq,
            re,
            im: vec![z; dim],
        })
    }

    pub fn qubits(&self) -> usize {
        self.dq
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn amplitude(&self, k: usize) -> (S, S) {
        (self.re[k].clone(), self.im[k].clone())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q < self.dq {
            Ok(())
        } else {
            Err(Error::QubitIndex {
                index: q,
                dq: self.dq,
            })
        }
    }

    /// Applies `R_axis(angle)` with the half-angle convention.
    pub fn apply_rotation(&mut self, qubit: usize, axis: Axis, angle: &S) -> Result<()> {
        self.check_qubit(qubit)?;
        let (c, s) = half_angle(angle);
        self.rotate_cs(qubit, None, axis, &c, &s);
        Ok(())
    }

    /// Rotation with precomputed `cos(θ/2)`, `sin(θ/2)`.
    pub fn apply_rotation_cs(&mut self, qubit: usize, axis: Axis, c: &S, s: &S) -> Result<()> {
        self.check_qubit(qubit)?;
        self.rotate_cs(qubit, None, axis, c, s);
        Ok(())
    }

    /// Controlled rotation; acts on `target` where the control bit is 1.
    pub fn apply_controlled_rotation(
        &mut self,
        control: usize,
        target: usize,
        axis: Axis,
        angle: &S,
    ) -> Result<()> {
        let (c, s) = half_angle(angle);
        self.apply_controlled_rotation_cs(control, target, axis, &c, &s)
    }

    pub fn apply_controlled_rotation_cs(
        &mut self,
        control: usize,
        target: usize,
        axis: Axis,
        c: &S,
        s: &S,
    ) -> Result<()> {
        self.check_pair(control, target)?;
        self.rotate_cs(target, Some(control), axis, c, s);
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_pair(control, target)?;
        let (cm, tm) = (1usize << control, 1usize << target);
        for k in 0..self.len() {
            if k & cm != 0 && k & tm == 0 {
                self.re.swap(k, k | tm);
                self.im.swap(k, k | tm);
            }
        }
        Ok(())
    }

    fn check_pair(&self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::SameControlTarget(control));
        }
        Ok(())
    }

    fn rotate_cs(&mut self, target: usize, control: Option<usize>, axis: Axis, c: &S, s: &S) {
        let tm = 1usize << target;
        let cm = control.map_or(0, |q| 1usize << q);
        let ns = -s.clone();
        for k0 in 0..self.len() {
            if k0 & tm != 0 || k0 & cm != cm {
                continue;
            }
            let k1 = k0 | tm;
            let (r0, i0) = (&self.re[k0], &self.im[k0]);
            let (r1, i1) = (&self.re[k1], &self.im[k1]);
            let (nr0, ni0, nr1, ni1) = match axis {
                // [[c, -is], [-is, c]]
                Axis::X => (
                    S::mul_add2(c, r0, s, i1),
                    S::mul_add2(c, i0, &ns, r1),
                    S::mul_add2(s, i0, c, r1),
                    S::mul_add2(&ns, r0, c, i1),
                ),
                // [[c, -s], [s, c]]
                Axis::Y => (
                    S::mul_add2(c, r0, &ns, r1),
                    S::mul_add2(c, i0, &ns, i1),
                    S::mul_add2(s, r0, c, r1),
                    S::mul_add2(s, i0, c, i1),
                ),
                // diag(c - is, c + is)
                Axis::Z => (
                    S::mul_add2(c, r0, s, i0),
                    S::mul_add2(c, i0, &ns, r0),
                    S::mul_add2(c, r1, &ns, i1),
                    S::mul_add2(c, i1, s, r1),
                ),
            };
            self.re[k0] = nr0;
            self.im[k0] = ni0;
            self.re[k1] = nr1;
            self.im[k1] = ni1;
        }
    }

    /// `RX(x_i)` on qubit `i`, ascending.
    pub fn angle_embed(&mut self, features: &[S]) -> Result<()> {
        shape("angle embedding features", self.dq, features.len())?;
        for (q, x) in features.iter().enumerate() {
            self.apply_rotation(q, Axis::X, x)?;
        }
        Ok(())
    }

    /// `|a_k|²` for every basis state.
    pub fn probabilities(&self) -> Vec<S> {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(r, i)| S::mul_add2(r, r, i, i))
            .collect()
    }

    /// `⟨Z_q⟩` for every qubit.
    pub fn expect_z(&self) -> Vec<S> {
        let probs = self.probabilities();
        let one = <S::Prim as num_traits::One>::one();
        (0..self.dq)
            .map(|q| {
                let signs: Vec<S::Prim> = (0..self.len())
                    .map(|k| if k >> q & 1 == 0 { one } else { -one })
                    .collect();
                S::lincomb(&probs, &signs)
            })
            .collect()
    }

    pub fn norm_sqr(&self) -> S::Prim {
        self.re
            .iter()
            .zip(&self.im)
            .fold(<S::Prim as num_traits::Zero>::zero(), |acc, (r, i)| {
                acc + r.value() * r.value() + i.value() * i.value()
            })
    }
}

/// `(cos(θ/2), sin(θ/2))`
pub fn half_angle<S: Scalar>(angle: &S) -> (S, S) {
    let half: S::Prim = crate::cst(0.5);
    let h = angle.scale(half);
    (h.cos(), h.sin())
}
