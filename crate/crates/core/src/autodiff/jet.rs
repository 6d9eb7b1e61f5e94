//! Truncated second-order Taylor numbers over `N` input directions.
//!
//! A [`Jet`] carries a value, its first partial derivative along each input
//! direction and the pure second partial along the same direction. Mixed
//! partials are not tracked; the set `{v, d_i, dd_i}` is closed under every
//! elementary operation because each direction is an independent univariate
//! Taylor expansion sharing the same value.

use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T, const N: usize> {
    /// Value.
    pub v: T,
    /// First partials `∂/∂x_i`.
    pub d: [T; N],
    /// Pure second partials `∂²/∂x_i²`.
    pub dd: [T; N],
}

impl<T: Float, const N: usize> Jet<T, N> {
    #[inline]
    pub fn constant(v: T) -> Self {
        Self {
            v,
            d: [T::zero(); N],
            dd: [T::zero(); N],
        }
    }

    /// Seeded independent input along `direction`.
    ///
    /// # Panics
    /// If `direction >= N`.
    #[inline]
    pub fn input(v: T, direction: usize) -> Self {
        assert!(direction < N, "jet direction {direction} out of range 0..{N}");
        let mut j = Self::constant(v);
        j.d[direction] = T::one();
        j
    }

    #[inline]
    pub fn zero() -> Self {
        Self::constant(T::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite()
            && self.d.iter().all(|x| x.is_finite())
            && self.dd.iter().all(|x| x.is_finite())
    }

    /// Component accessor: order 0 is the value, order 1 the first partial
    /// along `direction`, order 2 the pure second partial.
    #[inline]
    pub fn component(&self, direction: usize, order: u8) -> Option<T> {
        match order {
            0 => Some(self.v),
            1 => self.d.get(direction).copied(),
            2 => self.dd.get(direction).copied(),
            _ => None,
        }
    }

    #[inline]
    pub fn add_jet(&self, o: &Self) -> Self {
        let mut r = *self;
        r.v = r.v + o.v;
        for i in 0..N {
            r.d[i] = r.d[i] + o.d[i];
            r.dd[i] = r.dd[i] + o.dd[i];
        }
        r
    }

    /// `ca * self + cb * o`
    #[inline]
    pub fn lin(&self, ca: T, o: &Self, cb: T) -> Self {
        let mut r = Self::zero();
        r.v = ca * self.v + cb * o.v;
        for i in 0..N {
            r.d[i] = ca * self.d[i] + cb * o.d[i];
            r.dd[i] = ca * self.dd[i] + cb * o.dd[i];
        }
        r
    }

    #[inline]
    pub fn scale(&self, c: T) -> Self {
        let mut r = *self;
        r.v = r.v * c;
        for i in 0..N {
            r.d[i] = r.d[i] * c;
            r.dd[i] = r.dd[i] * c;
        }
        r
    }

    #[inline]
    pub fn mul_jet(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        r.v = self.v * o.v;
        let two = T::one() + T::one();
        for i in 0..N {
            r.d[i] = self.d[i] * o.v + self.v * o.d[i];
            r.dd[i] = self.dd[i] * o.v + two * self.d[i] * o.d[i] + self.v * o.dd[i];
        }
        r
    }

    /// `self += a * b`, the fused step used by dot products.
    #[inline]
    pub fn mul_acc(&mut self, a: &Self, b: &Self) {
        self.v = self.v + a.v * b.v;
        let two = T::one() + T::one();
        for i in 0..N {
            self.d[i] = self.d[i] + a.d[i] * b.v + a.v * b.d[i];
            self.dd[i] = self.dd[i] + a.dd[i] * b.v + two * a.d[i] * b.d[i] + a.v * b.dd[i];
        }
    }

    /// Composition with a scalar function given its value and first two
    /// derivatives at `self.v`.
    #[inline]
    pub fn chain(&self, f0: T, f1: T, f2: T) -> Self {
        let mut r = Self::zero();
        r.v = f0;
        for i in 0..N {
            r.d[i] = f1 * self.d[i];
            r.dd[i] = f1 * self.dd[i] + f2 * self.d[i] * self.d[i];
        }
        r
    }
}

/// Value and first three derivatives of the closed set of unary functions.
///
/// The third derivative is needed by the reverse sweep of a jet-valued tape:
/// the pure second partial of `f(u)` depends on `f''(u)`, whose sensitivity
/// to `u` is `f'''(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFn {
    Tanh,
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Recip,
    Powi(i32),
}

impl UnaryFn {
    /// `(f, f', f'', f''')` at `x`.
    pub fn derivatives<T: Float>(self, x: T) -> (T, T, T, T) {
        let one = T::one();
        let two = one + one;
        match self {
            UnaryFn::Tanh => {
                let t = x.tanh();
                let f1 = one - t * t;
                let f2 = -two * t * f1;
                let f3 = -two * (f1 * f1 + t * f2);
                (t, f1, f2, f3)
            }
            UnaryFn::Sin => {
                let (s, c) = x.sin_cos();
                (s, c, -s, -c)
            }
            UnaryFn::Cos => {
                let (s, c) = x.sin_cos();
                (c, -s, -c, s)
            }
            UnaryFn::Exp => {
                let e = x.exp();
                (e, e, e, e)
            }
            UnaryFn::Ln => {
                let r = x.recip();
                (x.ln(), r, -r * r, two * r * r * r)
            }
            UnaryFn::Sqrt => {
                let s = x.sqrt();
                let f1 = (two * s).recip();
                let f2 = -f1 / (two * x);
                let f3 = -(one + two) * f2 / (two * x);
                (s, f1, f2, f3)
            }
            UnaryFn::Recip => {
                let r = x.recip();
                let r2 = r * r;
                (r, -r2, two * r2 * r, -(two + two + two) * r2 * r2)
            }
            UnaryFn::Powi(n) => {
                let nf = T::from(n).unwrap();
                let f = x.powi(n);
                let f1 = if n == 0 { T::zero() } else { nf * x.powi(n - 1) };
                let f2 = if n == 0 || n == 1 {
                    T::zero()
                } else {
                    nf * (nf - one) * x.powi(n - 2)
                };
                let f3 = if (0..=2).contains(&n) {
                    T::zero()
                } else {
                    nf * (nf - one) * (nf - two) * x.powi(n - 3)
                };
                (f, f1, f2, f3)
            }
        }
    }

    /// Whether `x` lies in the function's differentiable domain.
    pub fn in_domain<T: Float>(self, x: T) -> bool {
        match self {
            UnaryFn::Ln | UnaryFn::Sqrt => x > T::zero(),
            UnaryFn::Recip => x != T::zero(),
            UnaryFn::Powi(n) if n < 0 => x != T::zero(),
            _ => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UnaryFn::Tanh => "tanh",
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Exp => "exp",
            UnaryFn::Ln => "ln",
            UnaryFn::Sqrt => "sqrt",
            UnaryFn::Recip => "recip",
            UnaryFn::Powi(_) => "powi",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_second_order() {
        // f = x^2 * x at x = 2: f' = 12, f'' = 12
        let x = Jet::<f64, 1>::input(2.0, 0);
        let f = x.mul_jet(&x).mul_jet(&x);
        assert_eq!(f.v, 8.0);
        assert_eq!(f.d[0], 12.0);
        assert_eq!(f.dd[0], 12.0);
    }

    #[test]
    fn chain_matches_closed_forms() {
        let x = Jet::<f64, 2>::input(0.7, 1);
        let (f0, f1, f2, _) = UnaryFn::Sin.derivatives(0.7);
        let s = x.chain(f0, f1, f2);
        assert!((s.d[1] - 0.7f64.cos()).abs() < 1e-15);
        assert!((s.dd[1] + 0.7f64.sin()).abs() < 1e-15);
        assert_eq!(s.d[0], 0.0);
    }

    #[test]
    fn third_derivatives_by_differences() {
        let h = 1e-4;
        for f in [
            UnaryFn::Tanh,
            UnaryFn::Sin,
            UnaryFn::Cos,
            UnaryFn::Exp,
            UnaryFn::Ln,
            UnaryFn::Sqrt,
            UnaryFn::Recip,
            UnaryFn::Powi(4),
            UnaryFn::Powi(-2),
        ] {
            let x = 0.83_f64;
            let (_, _, _, f3) = f.derivatives(x);
            let (_, _, f2p, _) = f.derivatives(x + h);
            let (_, _, f2m, _) = f.derivatives(x - h);
            let fd = (f2p - f2m) / (2.0 * h);
            assert!((fd - f3).abs() < 1e-6 * (1.0 + f3.abs()), "{}: {fd} vs {f3}", f.name());
        }
    }
}
