use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Float;

use super::jet::{Jet, UnaryFn};
use super::tape::Var;
use super::AdError;

/// Arithmetic surface shared by plain floats, [`Jet`]s and tape [`Var`]s.
///
/// Constants are created with [`Scalar::lift`] from an existing value so that
/// tape-backed implementations know which recording context they belong to.
pub trait Scalar:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// Underlying floating-point type.
    type Prim: Float;

    fn value(&self) -> Self::Prim;
    fn lift(&self, c: Self::Prim) -> Self;

    fn tanh(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn recip(&self) -> Self;
    fn powi(&self, n: i32) -> Self;

    fn scale(&self, c: Self::Prim) -> Self {
        self.clone() * self.lift(c)
    }

    fn offset(&self, c: Self::Prim) -> Self {
        self.clone() + self.lift(c)
    }

    fn div(&self, rhs: &Self) -> Self {
        self.clone() * rhs.recip()
    }

    /// `a * b + c * d`
    fn mul_add2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.clone() * b.clone() + c.clone() * d.clone()
    }

    /// `Σ w[k] * x[k] (+ bias)`.
    ///
    /// # Panics
    /// If the slices are empty or differ in length.
    fn dot(w: &[Self], x: &[Self], bias: Option<&Self>) -> Self {
        assert!(!w.is_empty() && w.len() == x.len(), "dot needs equal non-empty operands");
        let mut acc = w[0].clone() * x[0].clone();
        for (a, b) in w.iter().zip(x).skip(1) {
            acc = acc + a.clone() * b.clone();
        }
        match bias {
            Some(b) => acc + b.clone(),
            None => acc,
        }
    }

    /// `Σ c[k] * x[k]`.
    ///
    /// # Panics
    /// If the slices are empty or differ in length.
    fn lincomb(x: &[Self], c: &[Self::Prim]) -> Self {
        assert!(!x.is_empty() && x.len() == c.len(), "lincomb needs equal non-empty operands");
        let mut acc = x[0].scale(c[0]);
        for (a, &k) in x.iter().zip(c).skip(1) {
            acc = acc + a.scale(k);
        }
        acc
    }
}

/// Scalars that carry derivatives with respect to model inputs.
pub trait InputDerivative: Sized {
    /// `∂^order self / ∂x_dir^order`; order 0 returns the value itself.
    fn input_derivative(&self, dir: usize, order: u8) -> Result<Self, AdError>;
}

macro_rules! float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            type Prim = $t;
            #[inline]
            fn value(&self) -> $t { *self }
            #[inline]
            fn lift(&self, c: $t) -> $t { c }
            fn tanh(&self) -> $t { <$t>::tanh(*self) }
            fn sin(&self) -> $t { <$t>::sin(*self) }
            fn cos(&self) -> $t { <$t>::cos(*self) }
            fn exp(&self) -> $t { <$t>::exp(*self) }
            fn ln(&self) -> $t { <$t>::ln(*self) }
            fn sqrt(&self) -> $t { <$t>::sqrt(*self) }
            fn recip(&self) -> $t { <$t>::recip(*self) }
            fn powi(&self, n: i32) -> $t { <$t>::powi(*self, n) }
            #[inline]
            fn scale(&self, c: $t) -> $t { *self * c }
            #[inline]
            fn offset(&self, c: $t) -> $t { *self + c }
            #[inline]
            fn mul_add2(a: &$t, b: &$t, c: &$t, d: &$t) -> $t { a * b + c * d }
        }
    )*};
}

float_scalar!(f32, f64);

impl<T: Float, const N: usize> Add for Jet<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Jet::add_jet(&self, &rhs)
    }
}

impl<T: Float, const N: usize> Sub for Jet<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.lin(T::one(), &rhs, -T::one())
    }
}

impl<T: Float, const N: usize> Mul for Jet<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Jet::mul_jet(&self, &rhs)
    }
}

impl<T: Float, const N: usize> Neg for Jet<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet::scale(&self, -T::one())
    }
}

impl<T: Float, const N: usize> Jet<T, N> {
    #[inline]
    fn apply(&self, f: UnaryFn) -> Self {
        let (f0, f1, f2, _) = f.derivatives(self.v);
        self.chain(f0, f1, f2)
    }
}

impl<T: Float, const N: usize> Scalar for Jet<T, N> {
    type Prim = T;

    fn value(&self) -> T {
        self.v
    }
    fn lift(&self, c: T) -> Self {
        Jet::constant(c)
    }
    fn tanh(&self) -> Self {
        self.apply(UnaryFn::Tanh)
    }
    fn sin(&self) -> Self {
        self.apply(UnaryFn::Sin)
    }
    fn cos(&self) -> Self {
        self.apply(UnaryFn::Cos)
    }
    fn exp(&self) -> Self {
        self.apply(UnaryFn::Exp)
    }
    fn ln(&self) -> Self {
        self.apply(UnaryFn::Ln)
    }
    fn sqrt(&self) -> Self {
        self.apply(UnaryFn::Sqrt)
    }
    fn recip(&self) -> Self {
        self.apply(UnaryFn::Recip)
    }
    fn powi(&self, n: i32) -> Self {
        self.apply(UnaryFn::Powi(n))
    }
    fn scale(&self, c: T) -> Self {
        Jet::scale(self, c)
    }
    fn offset(&self, c: T) -> Self {
        let mut r = *self;
        r.v = r.v + c;
        r
    }
    fn dot(w: &[Self], x: &[Self], bias: Option<&Self>) -> Self {
        assert!(!w.is_empty() && w.len() == x.len(), "dot needs equal non-empty operands");
        let mut acc = bias.copied().unwrap_or_else(Jet::zero);
        for (a, b) in w.iter().zip(x) {
            acc.mul_acc(a, b);
        }
        acc
    }
}

impl<T: Float, const N: usize> InputDerivative for Jet<T, N> {
    fn input_derivative(&self, dir: usize, order: u8) -> Result<Self, AdError> {
        if order > 2 {
            return Err(AdError::UnsupportedOrder(order));
        }
        self.component(dir, order)
            .map(Jet::constant)
            .ok_or(AdError::Direction { dir, n: N })
    }
}

impl<'t, T: Float, const N: usize> Scalar for Var<'t, T, N> {
    type Prim = T;

    fn value(&self) -> T {
        Var::value(self)
    }
    fn lift(&self, c: T) -> Self {
        Var::lift(self, c)
    }
    fn tanh(&self) -> Self {
        Var::tanh(self)
    }
    fn sin(&self) -> Self {
        Var::sin(self)
    }
    fn cos(&self) -> Self {
        Var::cos(self)
    }
    fn exp(&self) -> Self {
        Var::exp(self)
    }
    fn ln(&self) -> Self {
        Var::ln(self)
    }
    fn sqrt(&self) -> Self {
        Var::sqrt(self)
    }
    fn recip(&self) -> Self {
        Var::recip(self)
    }
    fn powi(&self, n: i32) -> Self {
        Var::powi(self, n)
    }
    fn scale(&self, c: T) -> Self {
        Var::scale(self, c)
    }
    fn offset(&self, c: T) -> Self {
        Var::offset(self, c)
    }
    fn mul_add2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.tape().dot2(*a, *b, *c, *d)
    }
    fn dot(w: &[Self], x: &[Self], bias: Option<&Self>) -> Self {
        assert!(!w.is_empty() && w.len() == x.len(), "dot needs equal non-empty operands");
        w[0].tape().dot(w, x, bias.copied())
    }
    fn lincomb(x: &[Self], c: &[T]) -> Self {
        assert!(!x.is_empty() && x.len() == c.len(), "lincomb needs equal non-empty operands");
        x[0].tape().lincomb(x, c)
    }
}

impl<'t, T: Float, const N: usize> InputDerivative for Var<'t, T, N> {
    fn input_derivative(&self, dir: usize, order: u8) -> Result<Self, AdError> {
        self.derivative(dir, order)
    }
}

/// Working precision: a primitive float that is its own [`Scalar`].
pub trait Real:
    Float + Scalar<Prim = Self> + Default + Send + Sync + std::fmt::Debug + std::fmt::Display + 'static
{
}

impl<T> Real for T where
    T: Float + Scalar<Prim = T> + Default + Send + Sync + std::fmt::Debug + std::fmt::Display + 'static
{
}
