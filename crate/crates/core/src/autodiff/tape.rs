//! Reverse-mode tape whose node values are second-order input jets.
//!
//! Every recorded node holds a [`Jet`] (value plus first and pure-second
//! partials along the `N` input directions). The reverse sweep propagates
//! jet-shaped adjoints, so a quantity assembled from input derivatives (a PDE
//! residual, say) can itself be differentiated with respect to every leaf.

use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Float;

use super::jet::{Jet, UnaryFn};
use super::AdError;

const NONE: u32 = u32::MAX;

/// Node derives from an extracted input derivative.
const TRUNC: u8 = 1;
/// Node's input-derivative components are structurally zero.
const FLAT: u8 = 2;

#[inline]
fn combine(x: u8, y: u8) -> u8 {
    ((x | y) & TRUNC) | (x & y & FLAT)
}

#[derive(Debug, Clone, Copy)]
enum Op<T> {
    Leaf,
    Const,
    /// `ca * a + k`; the constant `k` only shifts the value.
    Affine { a: u32, ca: T },
    /// `ca * a + cb * b`
    Lin { a: u32, b: u32, ca: T, cb: T },
    Mul { a: u32, b: u32 },
    /// `a * b + c * d`
    Dot2 { a: u32, b: u32, c: u32, d: u32 },
    /// `Σ args[2k] * args[2k+1] (+ bias)`
    Dot { start: u32, len: u32, bias: u32 },
    /// `Σ coefs[k] * args[k]`
    LinN { start: u32, cstart: u32, len: u32 },
    Unary { a: u32, f1: T, f2: T, f3: T },
    /// Input-derivative component of `a` lifted to a fresh value.
    Extract { a: u32, dir: u16, order: u8 },
}

struct Inner<T, const N: usize> {
    vals: Vec<Jet<T, N>>,
    ops: Vec<Op<T>>,
    flags: Vec<u8>,
    args: Vec<u32>,
    coefs: Vec<T>,
    adj: Vec<Jet<T, N>>,
    fault: Option<AdError>,
}

/// Recording context for [`Var`]s.
pub struct Tape<T, const N: usize> {
    inner: RefCell<Inner<T, N>>,
}

/// Scalar recorded on a [`Tape`].
#[derive(Clone, Copy)]
pub struct Var<'t, T, const N: usize> {
    tape: &'t Tape<T, N>,
    idx: u32,
}

impl<T: Float, const N: usize> Default for Tape<T, N> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Float, const N: usize> Tape<T, N> {
    pub fn new() -> Self {
        Self::with_capacity(0)
    }

    pub fn with_capacity(nodes: usize) -> Self {
        Self {
            inner: RefCell::new(Inner {
                vals: Vec::with_capacity(nodes),
                ops: Vec::with_capacity(nodes),
                flags: Vec::with_capacity(nodes),
                args: Vec::new(),
                coefs: Vec::new(),
                adj: Vec::new(),
                fault: None,
            }),
        }
    }

    /// Drops every recorded node, keeping allocations.
    pub fn clear(&mut self) {
        let inner = self.inner.get_mut();
        inner.vals.clear();
        inner.ops.clear();
        inner.flags.clear();
        inner.args.clear();
        inner.coefs.clear();
        inner.fault = None;
    }

    pub fn len(&self) -> usize {
        self.inner.borrow().vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// First domain violation recorded on this tape, if any.
    pub fn fault(&self) -> Option<AdError> {
        self.inner.borrow().fault.clone()
    }

    fn push(&self, val: Jet<T, N>, op: Op<T>, flags: u8) -> Var<'_, T, N> {
        let mut inner = self.inner.borrow_mut();
        let idx = inner.vals.len();
        assert!(idx < NONE as usize, "tape exceeds u32 node capacity");
        inner.vals.push(val);
        inner.ops.push(op);
        inner.flags.push(flags);
        Var {
            tape: self,
            idx: idx as u32,
        }
    }

    /// Registers a gradient-addressable parameter (constant along every input
    /// direction).
    pub fn variable(&self, value: T) -> Var<'_, T, N> {
        self.push(Jet::constant(value), Op::Leaf, FLAT)
    }

    /// Registers an independent input seeded along `direction`. Inputs are
    /// also gradient-addressable.
    ///
    /// # Panics
    /// If `direction >= N`.
    pub fn input(&self, value: T, direction: usize) -> Var<'_, T, N> {
        self.push(Jet::input(value, direction), Op::Leaf, 0)
    }

    pub fn constant(&self, value: T) -> Var<'_, T, N> {
        self.push(Jet::constant(value), Op::Const, FLAT)
    }

    fn check<'t>(&'t self, v: &Var<'t, T, N>) {
        assert!(
            std::ptr::eq(self, v.tape),
            "{}",
            AdError::ForeignTape
        );
    }

    /// Runs the reverse sweep from `output`, leaving adjoints in the internal
    /// buffer for [`Tape::adjoint`].
    pub fn backward(&self, output: Var<'_, T, N>) -> Result<(), AdError> {
        self.check(&output);
        let mut guard = self.inner.borrow_mut();
        let inner = &mut *guard;
        if let Some(f) = &inner.fault {
            return Err(f.clone());
        }
        let out = output.idx as usize;
        if !inner.vals[out].v.is_finite() {
            return Err(AdError::NonFinite("backward output".into()));
        }
        let adj = &mut inner.adj;
        adj.clear();
        adj.resize(out + 1, Jet::zero());
        adj[out].v = T::one();
        let vals = &inner.vals;
        let flags = &inner.flags;
        let flat = |i: usize| flags[i] & FLAT != 0;
        let two = T::one() + T::one();
        for i in (0..=out).rev() {
            let g = adj[i];
            if flat(i) {
                // Operands are flat too, so only value adjoints carry through.
                let gv = g.v;
                if gv == T::zero() {
                    continue;
                }
                match inner.ops[i] {
                    Op::Leaf | Op::Const => {}
                    Op::Affine { a, ca } => adj[a as usize].v = adj[a as usize].v + gv * ca,
                    Op::Lin { a, b, ca, cb } => {
                        adj[a as usize].v = adj[a as usize].v + gv * ca;
                        adj[b as usize].v = adj[b as usize].v + gv * cb;
                    }
                    Op::Mul { a, b } => {
                        let (a, b) = (a as usize, b as usize);
                        adj[a].v = adj[a].v + gv * vals[b].v;
                        adj[b].v = adj[b].v + gv * vals[a].v;
                    }
                    Op::Dot2 { a, b, c, d } => {
                        let (a, b, c, d) = (a as usize, b as usize, c as usize, d as usize);
                        adj[a].v = adj[a].v + gv * vals[b].v;
                        adj[b].v = adj[b].v + gv * vals[a].v;
                        adj[c].v = adj[c].v + gv * vals[d].v;
                        adj[d].v = adj[d].v + gv * vals[c].v;
                    }
                    Op::Dot { start, len, bias } => {
                        let s = start as usize;
                        for k in 0..len as usize {
                            let a = inner.args[s + 2 * k] as usize;
                            let b = inner.args[s + 2 * k + 1] as usize;
                            adj[a].v = adj[a].v + gv * vals[b].v;
                            adj[b].v = adj[b].v + gv * vals[a].v;
                        }
                        if bias != NONE {
                            adj[bias as usize].v = adj[bias as usize].v + gv;
                        }
                    }
                    Op::LinN { start, cstart, len } => {
                        for k in 0..len as usize {
                            let a = inner.args[start as usize + k] as usize;
                            let c = inner.coefs[cstart as usize + k];
                            adj[a].v = adj[a].v + gv * c;
                        }
                    }
                    Op::Unary { a, f1, .. } => adj[a as usize].v = adj[a as usize].v + gv * f1,
                    Op::Extract { a, dir, order } => {
                        let a = a as usize;
                        let k = dir as usize;
                        match order {
                            0 => adj[a].v = adj[a].v + gv,
                            1 => adj[a].d[k] = adj[a].d[k] + gv,
                            _ => adj[a].dd[k] = adj[a].dd[k] + gv,
                        }
                    }
                }
                continue;
            }
            let lin_back = |adj: &mut [Jet<T, N>], a: usize, c: T| {
                if flat(a) {
                    adj[a].v = adj[a].v + g.v * c;
                } else {
                    adj[a] = adj[a].lin(T::one(), &g, c);
                }
            };
            match inner.ops[i] {
                Op::Leaf | Op::Const | Op::Extract { .. } => {}
                Op::Affine { a, ca } => lin_back(&mut adj[..], a as usize, ca),
                Op::Lin { a, b, ca, cb } => {
                    lin_back(&mut adj[..], a as usize, ca);
                    lin_back(&mut adj[..], b as usize, cb);
                }
                Op::Mul { a, b } => {
                    let (a, b) = (a as usize, b as usize);
                    mul_back(&mut adj[..], &g, vals, flags, a, b, two);
                }
                Op::Dot2 { a, b, c, d } => {
                    mul_back(&mut adj[..], &g, vals, flags, a as usize, b as usize, two);
                    mul_back(&mut adj[..], &g, vals, flags, c as usize, d as usize, two);
                }
                Op::Dot { start, len, bias } => {
                    let s = start as usize;
                    for k in 0..len as usize {
                        let a = inner.args[s + 2 * k] as usize;
                        let b = inner.args[s + 2 * k + 1] as usize;
                        mul_back(&mut adj[..], &g, vals, flags, a, b, two);
                    }
                    if bias != NONE {
                        lin_back(&mut adj[..], bias as usize, T::one());
                    }
                }
                Op::LinN { start, cstart, len } => {
                    for k in 0..len as usize {
                        let a = inner.args[start as usize + k] as usize;
                        let c = inner.coefs[cstart as usize + k];
                        lin_back(&mut adj[..], a, c);
                    }
                }
                Op::Unary { a, f1, f2, f3 } => {
                    let a = a as usize;
                    let x = vals[a];
                    let mut ga = adj[a];
                    ga.v = ga.v + g.v * f1;
                    for k in 0..N {
                        ga.v = ga.v
                            + g.d[k] * f2 * x.d[k]
                            + g.dd[k] * (f2 * x.dd[k] + f3 * x.d[k] * x.d[k]);
                        ga.d[k] = ga.d[k] + g.d[k] * f1 + two * g.dd[k] * f2 * x.d[k];
                        ga.dd[k] = ga.dd[k] + g.dd[k] * f1;
                    }
                    adj[a] = ga;
                }
            }
        }
        Ok(())
    }

    /// Adjoint (value component) of `var` after the last [`Tape::backward`].
    /// Nodes recorded after the swept output have zero adjoint.
    pub fn adjoint(&self, var: Var<'_, T, N>) -> T {
        self.check(&var);
        let inner = self.inner.borrow();
        inner
            .adj
            .get(var.idx as usize)
            .map(|j| j.v)
            .unwrap_or_else(T::zero)
    }

    /// `∂output/∂slot` for each slot. Slots must be leaves of this tape.
    pub fn gradient(
        &self,
        output: Var<'_, T, N>,
        wrt: &[Var<'_, T, N>],
    ) -> Result<Vec<T>, AdError> {
        self.check_slots(wrt)?;
        self.backward(output)?;
        Ok(wrt.iter().map(|v| self.adjoint(*v)).collect())
    }

    /// Adds `∂output/∂slot` into `acc` for each slot.
    pub fn accumulate_gradient(
        &self,
        output: Var<'_, T, N>,
        wrt: &[Var<'_, T, N>],
        acc: &mut [T],
    ) -> Result<(), AdError> {
        if acc.len() != wrt.len() {
            return Err(AdError::Shape {
                expected: wrt.len(),
                got: acc.len(),
            });
        }
        self.check_slots(wrt)?;
        self.backward(output)?;
        let inner = self.inner.borrow();
        for (a, v) in acc.iter_mut().zip(wrt) {
            if let Some(j) = inner.adj.get(v.idx as usize) {
                *a = *a + j.v;
            }
        }
        Ok(())
    }

    fn check_slots(&self, wrt: &[Var<'_, T, N>]) -> Result<(), AdError> {
        let inner = self.inner.borrow();
        for v in wrt {
            if !std::ptr::eq(self, v.tape) {
                return Err(AdError::ForeignTape);
            }
            if !matches!(inner.ops[v.idx as usize], Op::Leaf) {
                return Err(AdError::NotASlot(v.idx as usize));
            }
        }
        Ok(())
    }

    fn record_unary(&self, a: u32, f: UnaryFn) -> Var<'_, T, N> {
        let (x, trunc) = {
            let inner = self.inner.borrow();
            (inner.vals[a as usize], inner.flags[a as usize])
        };
        if !f.in_domain(x.v) {
            let mut inner = self.inner.borrow_mut();
            if inner.fault.is_none() {
                inner.fault = Some(AdError::Domain {
                    op: f.name(),
                    value: x.v.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let (f0, f1, f2, f3) = f.derivatives(x.v);
        self.push(x.chain(f0, f1, f2), Op::Unary { a, f1, f2, f3 }, trunc)
    }

    fn record_mul(&self, a: u32, b: u32) -> Var<'_, T, N> {
        let (val, trunc) = {
            let inner = self.inner.borrow();
            let (ia, ib) = (a as usize, b as usize);
            (
                inner.vals[ia].mul_jet(&inner.vals[ib]),
                combine(inner.flags[ia], inner.flags[ib]),
            )
        };
        self.push(val, Op::Mul { a, b }, trunc)
    }

    fn record_lin(&self, a: u32, ca: T, b: u32, cb: T) -> Var<'_, T, N> {
        let (val, trunc) = {
            let inner = self.inner.borrow();
            let (ia, ib) = (a as usize, b as usize);
            (
                inner.vals[ia].lin(ca, &inner.vals[ib], cb),
                combine(inner.flags[ia], inner.flags[ib]),
            )
        };
        self.push(val, Op::Lin { a, b, ca, cb }, trunc)
    }

    fn record_affine(&self, a: u32, ca: T, k: T) -> Var<'_, T, N> {
        let (mut val, trunc) = {
            let inner = self.inner.borrow();
            (inner.vals[a as usize].scale(ca), inner.flags[a as usize])
        };
        val.v = val.v + k;
        self.push(val, Op::Affine { a, ca }, trunc)
    }

    /// `a * b + c * d`, recorded as one node.
    pub fn dot2<'t>(
        &'t self,
        a: Var<'t, T, N>,
        b: Var<'t, T, N>,
        c: Var<'t, T, N>,
        d: Var<'t, T, N>,
    ) -> Var<'t, T, N> {
        for v in [&a, &b, &c, &d] {
            self.check(v);
        }
        let mut guard = self.inner.borrow_mut();
        let inner = &mut *guard;
        let (ia, ib, ic, id) = (a.idx as usize, b.idx as usize, c.idx as usize, d.idx as usize);
        let mut acc = inner.vals[ia].mul_jet(&inner.vals[ib]);
        acc.mul_acc(&inner.vals[ic], &inner.vals[id]);
        let f = &inner.flags;
        let flags = combine(combine(f[ia], f[ib]), combine(f[ic], f[id]));
        let idx = inner.vals.len();
        assert!(idx < NONE as usize, "tape exceeds u32 node capacity");
        inner.vals.push(acc);
        inner.ops.push(Op::Dot2 {
            a: a.idx,
            b: b.idx,
            c: c.idx,
            d: d.idx,
        });
        inner.flags.push(flags);
        Var {
            tape: self,
            idx: idx as u32,
        }
    }

    /// `Σ w[k] * x[k] + bias`, recorded as one node.
    pub fn dot<'t>(
        &'t self,
        w: &[Var<'t, T, N>],
        x: &[Var<'t, T, N>],
        bias: Option<Var<'t, T, N>>,
    ) -> Var<'t, T, N> {
        assert_eq!(w.len(), x.len(), "dot operands differ in length");
        let mut inner = self.inner.borrow_mut();
        let start = inner.args.len();
        let mut acc = Jet::zero();
        let mut flags = FLAT;
        for (a, b) in w.iter().zip(x) {
            self.check(a);
            self.check(b);
            let (ia, ib) = (a.idx as usize, b.idx as usize);
            acc.mul_acc(&inner.vals[ia], &inner.vals[ib]);
            flags = combine(flags, combine(inner.flags[ia], inner.flags[ib]));
            inner.args.push(a.idx);
            inner.args.push(b.idx);
        }
        let bias_idx = match bias {
            Some(b) => {
                self.check(&b);
                acc = acc.add_jet(&inner.vals[b.idx as usize]);
                flags = combine(flags, inner.flags[b.idx as usize]);
                b.idx
            }
            None => NONE,
        };
        drop(inner);
        self.push(
            acc,
            Op::Dot {
                start: start as u32,
                len: w.len() as u32,
                bias: bias_idx,
            },
            flags,
        )
    }

    /// `Σ coefs[k] * items[k]`, recorded as one node.
    pub fn lincomb<'t>(&'t self, items: &[Var<'t, T, N>], coefs: &[T]) -> Var<'t, T, N> {
        assert_eq!(items.len(), coefs.len(), "lincomb operands differ in length");
        let mut inner = self.inner.borrow_mut();
        let start = inner.args.len();
        let cstart = inner.coefs.len();
        let mut acc = Jet::zero();
        let mut flags = FLAT;
        for (x, &c) in items.iter().zip(coefs) {
            self.check(x);
            let ix = x.idx as usize;
            acc = acc.lin(T::one(), &inner.vals[ix], c);
            flags = combine(flags, inner.flags[ix]);
            inner.args.push(x.idx);
            inner.coefs.push(c);
        }
        drop(inner);
        self.push(
            acc,
            Op::LinN {
                start: start as u32,
                cstart: cstart as u32,
                len: items.len() as u32,
            },
            flags,
        )
    }
}

#[inline]
fn mul_back_one<T: Float, const N: usize>(
    ga: &mut Jet<T, N>,
    g: &Jet<T, N>,
    y: &Jet<T, N>,
    flat: bool,
    two: T,
) {
    let mut v = ga.v + g.v * y.v;
    if flat {
        for k in 0..N {
            v = v + g.d[k] * y.d[k] + g.dd[k] * y.dd[k];
        }
    } else {
        for k in 0..N {
            v = v + g.d[k] * y.d[k] + g.dd[k] * y.dd[k];
            ga.d[k] = ga.d[k] + g.d[k] * y.v + two * g.dd[k] * y.d[k];
            ga.dd[k] = ga.dd[k] + g.dd[k] * y.v;
        }
    }
    ga.v = v;
}

#[inline]
fn mul_back<T: Float, const N: usize>(
    adj: &mut [Jet<T, N>],
    g: &Jet<T, N>,
    vals: &[Jet<T, N>],
    flags: &[u8],
    a: usize,
    b: usize,
    two: T,
) {
    let mut ga = adj[a];
    mul_back_one(&mut ga, g, &vals[b], flags[a] & FLAT != 0, two);
    adj[a] = ga;
    let mut gb = adj[b];
    mul_back_one(&mut gb, g, &vals[a], flags[b] & FLAT != 0, two);
    adj[b] = gb;
}

impl<'t, T: Float, const N: usize> Var<'t, T, N> {
    pub fn value(&self) -> T {
        self.tape.inner.borrow().vals[self.idx as usize].v
    }

    pub fn jet(&self) -> Jet<T, N> {
        self.tape.inner.borrow().vals[self.idx as usize]
    }

    pub fn tape(&self) -> &'t Tape<T, N> {
        self.tape
    }

    pub fn index(&self) -> usize {
        self.idx as usize
    }

    pub fn same_tape(&self, other: &Self) -> bool {
        std::ptr::eq(self.tape, other.tape)
    }

    /// `∂^order self / ∂x_dir^order` as a new scalar that stays
    /// differentiable with respect to every leaf.
    pub fn derivative(&self, dir: usize, order: u8) -> Result<Self, AdError> {
        if order > 2 {
            return Err(AdError::UnsupportedOrder(order));
        }
        if dir >= N {
            return Err(AdError::Direction { dir, n: N });
        }
        let (val, trunc) = {
            let inner = self.tape.inner.borrow();
            let i = self.idx as usize;
            (inner.vals[i], inner.flags[i] & TRUNC != 0)
        };
        if trunc && order > 0 {
            // Derivatives of an already-extracted derivative would need
            // components this jet does not carry.
            return Err(AdError::UnsupportedOrder(order + 1));
        }
        let c = val.component(dir, order).expect("checked above");
        Ok(self.tape.push(
            Jet::constant(c),
            Op::Extract {
                a: self.idx,
                dir: dir as u16,
                order,
            },
            TRUNC | FLAT,
        ))
    }

    fn unary(&self, f: UnaryFn) -> Self {
        self.tape.record_unary(self.idx, f)
    }

    /// Unary op that reports a domain violation immediately.
    pub fn try_unary(&self, f: UnaryFn) -> Result<Self, AdError> {
        let x = self.value();
        if !f.in_domain(x) {
            return Err(AdError::Domain {
                op: f.name(),
                value: x.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(self.unary(f))
    }

    pub fn tanh(&self) -> Self {
        self.unary(UnaryFn::Tanh)
    }
    pub fn sin(&self) -> Self {
        self.unary(UnaryFn::Sin)
    }
    pub fn cos(&self) -> Self {
        self.unary(UnaryFn::Cos)
    }
    pub fn exp(&self) -> Self {
        self.unary(UnaryFn::Exp)
    }
    pub fn ln(&self) -> Self {
        self.unary(UnaryFn::Ln)
    }
    pub fn sqrt(&self) -> Self {
        self.unary(UnaryFn::Sqrt)
    }
    pub fn recip(&self) -> Self {
        self.unary(UnaryFn::Recip)
    }
    pub fn powi(&self, n: i32) -> Self {
        self.unary(UnaryFn::Powi(n))
    }

    pub fn scale(&self, c: T) -> Self {
        self.tape.record_affine(self.idx, c, T::zero())
    }

    pub fn offset(&self, k: T) -> Self {
        self.tape.record_affine(self.idx, T::one(), k)
    }

    pub fn lift(&self, c: T) -> Self {
        self.tape.constant(c)
    }
}

impl<T: Float + fmt::Debug, const N: usize> fmt::Debug for Var<'_, T, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Var#{}({:?})", self.idx, self.value())
    }
}

impl<'t, T: Float, const N: usize> Add for Var<'t, T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.tape.check(&rhs);
        self.tape.record_lin(self.idx, T::one(), rhs.idx, T::one())
    }
}

impl<'t, T: Float, const N: usize> Sub for Var<'t, T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.tape.check(&rhs);
        self.tape.record_lin(self.idx, T::one(), rhs.idx, -T::one())
    }
}

impl<'t, T: Float, const N: usize> Mul for Var<'t, T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.tape.check(&rhs);
        self.tape.record_mul(self.idx, rhs.idx)
    }
}

impl<'t, T: Float, const N: usize> Div for Var<'t, T, N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.tape.check(&rhs);
        self * rhs.recip()
    }
}

impl<'t, T: Float, const N: usize> Neg for Var<'t, T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

macro_rules! scalar_rhs_ops {
    ($($t:ty),*) => {$(
        impl<'t, const N: usize> Add<$t> for Var<'t, $t, N> {
            type Output = Self;
            fn add(self, rhs: $t) -> Self { self.offset(rhs) }
        }
        impl<'t, const N: usize> Sub<$t> for Var<'t, $t, N> {
            type Output = Self;
            fn sub(self, rhs: $t) -> Self { self.offset(-rhs) }
        }
        impl<'t, const N: usize> Mul<$t> for Var<'t, $t, N> {
            type Output = Self;
            fn mul(self, rhs: $t) -> Self { self.scale(rhs) }
        }
        impl<'t, const N: usize> Div<$t> for Var<'t, $t, N> {
            type Output = Self;
            fn div(self, rhs: $t) -> Self { self.scale(rhs.recip()) }
        }
        impl<'t, const N: usize> Add<Var<'t, $t, N>> for $t {
            type Output = Var<'t, $t, N>;
            fn add(self, rhs: Var<'t, $t, N>) -> Var<'t, $t, N> { rhs.offset(self) }
        }
        impl<'t, const N: usize> Sub<Var<'t, $t, N>> for $t {
            type Output = Var<'t, $t, N>;
            fn sub(self, rhs: Var<'t, $t, N>) -> Var<'t, $t, N> {
                rhs.tape.record_affine(rhs.idx, -1.0, self)
            }
        }
        impl<'t, const N: usize> Mul<Var<'t, $t, N>> for $t {
            type Output = Var<'t, $t, N>;
            fn mul(self, rhs: Var<'t, $t, N>) -> Var<'t, $t, N> { rhs.scale(self) }
        }
    )*};
}

scalar_rhs_ops!(f32, f64);
