//! Classical pre/postprocessors and their composition with the quantum core.
//!
//! Parameters live in one flat vector:
//! `W1 (d_h×d_m) | b1 | W2 (dq×d_h) | b2 | θ2 | W3 (d_h×dq) | b3 | W4 (1×d_h) | b4`,
//! weights row-major. Forward passes take the parameters as a slice of any
//! [`Scalar`], so the same code evaluates plain values and tape variables.

use std::ops::Range;

use num_traits::Float;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::autodiff::{Real, Scalar};
use crate::error::{shape, Error, Result};
use crate::quantum::{CircuitSpec, GateProgram};

/// Dense `rows × cols` layer with row-major weights.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineLayer<T> {
    pub rows: usize,
    pub cols: usize,
    pub weight: Vec<T>,
    pub bias: Vec<T>,
}

impl<T: Float> AffineLayer<T> {
    /// Weights uniform on `±sqrt(6 / (fan_in + fan_out))`, zero biases.
    pub fn xavier<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Self {
        assert!(rows > 0 && cols > 0, "layer dimensions must be positive");
        let bound = (6.0 / (rows + cols) as f64).sqrt();
        let weight = (0..rows * cols)
            .map(|_| crate::cst(rng.gen_range(-bound..=bound)))
            .collect();
        Self {
            rows,
            cols,
            weight,
            bias: vec![T::zero(); rows],
        }
    }

    pub fn forward<S: Scalar<Prim = T>>(&self, x: &[S]) -> Result<Vec<S>> {
        let like = x.first().ok_or(Error::Shape {
            what: "layer input",
            expected: self.cols,
            got: 0,
        })?;
        let w: Vec<S> = self.weight.iter().map(|&v| like.lift(v)).collect();
        let b: Vec<S> = self.bias.iter().map(|&v| like.lift(v)).collect();
        affine(&w, &b, self.rows, self.cols, x)
    }
}

/// `W x + b` over slices.
pub fn affine<S: Scalar>(w: &[S], b: &[S], rows: usize, cols: usize, x: &[S]) -> Result<Vec<S>> {
    shape("layer input", cols, x.len())?;
    shape("layer weights", rows * cols, w.len())?;
    shape("layer bias", rows, b.len())?;
    Ok((0..rows)
        .map(|r| S::dot(&w[r * cols..(r + 1) * cols], x, Some(&b[r])))
        .collect())
}

/// Per-dimension map from raw coordinates onto the unit interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputNormalization {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl InputNormalization {
    pub fn identity(dim: usize) -> Self {
        Self {
            lower: vec![0.0; dim],
            upper: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn apply(&self, raw: &[f64]) -> Vec<f64> {
        raw.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(x, (lo, hi))| (x - lo) / (hi - lo))
            .collect()
    }
}

/// `physical = offset + scale · network`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputScaling {
    pub offset: f64,
    pub scale: f64,
}

impl OutputScaling {
    pub const IDENTITY: Self = Self {
        offset: 0.0,
        scale: 1.0,
    };

    pub fn to_physical(&self, y: f64) -> f64 {
        self.offset + self.scale * y
    }

    pub fn to_network(&self, p: f64) -> f64 {
        (p - self.offset) / self.scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub inputs: usize,
    pub hidden: usize,
    pub circuit: CircuitSpec,
}

/// Offsets of each block inside the flat parameter vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamLayout {
    pub w1: Range<usize>,
    pub b1: Range<usize>,
    pub w2: Range<usize>,
    pub b2: Range<usize>,
    pub theta2: Range<usize>,
    pub w3: Range<usize>,
    pub b3: Range<usize>,
    pub w4: Range<usize>,
    pub b4: Range<usize>,
}

impl ParamLayout {
    pub fn new(arch: &Architecture) -> Self {
        let (dm, dh, dq) = (arch.inputs, arch.hidden, arch.circuit.qubits);
        let mut at = 0;
        let mut take = |n: usize| {
            at += n;
            at - n..at
        };
        Self {
            w1: take(dh * dm),
            b1: take(dh),
            w2: take(dq * dh),
            b2: take(dq),
            theta2: take(arch.circuit.parameter_count()),
            w3: take(dh * dq),
            b3: take(dh),
            w4: take(dh),
            b4: take(1),
        }
    }

    pub fn len(&self) -> usize {
        self.b4.end
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `|θ1|`
    pub fn preprocessor_len(&self) -> usize {
        self.b2.end
    }

    /// `|θ3|`
    pub fn postprocessor_len(&self) -> usize {
        self.b4.end - self.w3.start
    }
}

/// Circuit half-angles computed once per parameter set.
pub struct PreparedCore<S> {
    angles: Vec<(S, S)>,
}

/// `Y = W4 tanh(W3 ⟨Z⟩(W2 tanh(W1 X + b1) + b2; θ2) + b3) + b4`.
#[derive(Debug, Clone)]
pub struct HybridModel<T> {
    pub arch: Architecture,
    pub input_map: InputNormalization,
    pub output_map: OutputScaling,
    pub params: Vec<T>,
    layout: ParamLayout,
    program: GateProgram,
}

impl<T: Real> HybridModel<T> {
    /// Xavier weights, zero biases, circuit angles uniform on `[0, 2π)`.
    pub fn init<R: Rng>(
        arch: Architecture,
        input_map: InputNormalization,
        output_map: OutputScaling,
        rng: &mut R,
    ) -> Result<Self> {
        let (dm, dh, dq) = (arch.inputs, arch.hidden, arch.circuit.qubits);
        let l1 = AffineLayer::<T>::xavier(dh, dm, rng);
        let l2 = AffineLayer::<T>::xavier(dq, dh, rng);
        let theta2: Vec<T> = arch
            .circuit
            .init_params(rng)
            .into_iter()
            .map(crate::cst)
            .collect();
        let l3 = AffineLayer::<T>::xavier(dh, dq, rng);
        let l4 = AffineLayer::<T>::xavier(1, dh, rng);
        let mut params = Vec::new();
        for l in [&l1, &l2] {
            params.extend_from_slice(&l.weight);
            params.extend_from_slice(&l.bias);
        }
        params.extend_from_slice(&theta2);
        for l in [&l3, &l4] {
            params.extend_from_slice(&l.weight);
            params.extend_from_slice(&l.bias);
        }
        Self::from_params(arch, input_map, output_map, params)
    }

    pub fn from_params(
        arch: Architecture,
        input_map: InputNormalization,
        output_map: OutputScaling,
        params: Vec<T>,
    ) -> Result<Self> {
        if arch.inputs == 0 || arch.hidden == 0 {
            return Err(Error::Config("network dimensions must be positive".into()));
        }
        shape("input normalization", arch.inputs, input_map.dim())?;
        let layout = ParamLayout::new(&arch);
        shape("model parameters", layout.len(), params.len())?;
        Ok(Self {
            program: arch.circuit.program(),
            arch,
            input_map,
            output_map,
            params,
            layout,
        })
    }

    pub fn layout(&self) -> &ParamLayout {
        &self.layout
    }

    pub fn program(&self) -> &GateProgram {
        &self.program
    }

    pub fn parameter_count(&self) -> usize {
        self.layout.len()
    }

    /// `X_q = W2 tanh(W1 X + b1) + b2`
    pub fn preprocess<S: Scalar<Prim = T>>(&self, p: &[S], x: &[S]) -> Result<Vec<S>> {
        shape("model parameters", self.layout.len(), p.len())?;
        let (dm, dh, dq) = (self.arch.inputs, self.arch.hidden, self.arch.circuit.qubits);
        let l = &self.layout;
        let h: Vec<S> = affine(&p[l.w1.clone()], &p[l.b1.clone()], dh, dm, x)?
            .iter()
            .map(S::tanh)
            .collect();
        affine(&p[l.w2.clone()], &p[l.b2.clone()], dq, dh, &h)
    }

    /// `Y = W4 tanh(W3 Y_q + b3) + b4`
    pub fn postprocess<S: Scalar<Prim = T>>(&self, p: &[S], yq: &[S]) -> Result<S> {
        shape("model parameters", self.layout.len(), p.len())?;
        let (dh, dq) = (self.arch.hidden, self.arch.circuit.qubits);
        let l = &self.layout;
        let h: Vec<S> = affine(&p[l.w3.clone()], &p[l.b3.clone()], dh, dq, yq)?
            .iter()
            .map(S::tanh)
            .collect();
        Ok(S::dot(&p[l.w4.clone()], &h, Some(&p[l.b4.start])))
    }

    pub fn prepare<S: Scalar<Prim = T>>(&self, p: &[S]) -> Result<PreparedCore<S>> {
        shape("model parameters", self.layout.len(), p.len())?;
        Ok(PreparedCore {
            angles: self.program.prepare(&p[self.layout.theta2.clone()])?,
        })
    }

    /// Forward pass on normalized inputs with precomputed circuit angles.
    pub fn forward_prepared<S: Scalar<Prim = T>>(
        &self,
        p: &[S],
        core: &PreparedCore<S>,
        x: &[S],
    ) -> Result<S> {
        let xq = self.preprocess(p, x)?;
        let yq = self.program.run_prepared(&core.angles, &xq)?;
        self.postprocess(p, &yq)
    }

    /// Forward pass on normalized inputs.
    pub fn forward<S: Scalar<Prim = T>>(&self, p: &[S], x: &[S]) -> Result<S> {
        let core = self.prepare(p)?;
        self.forward_prepared(p, &core, x)
    }

    /// Network output at a normalized point using the stored parameters.
    pub fn predict(&self, x: &[T]) -> Result<T> {
        self.forward(&self.params, x)
    }
}

impl HybridModel<f64> {
    /// Physical output at raw coordinates.
    pub fn predict_physical(&self, raw: &[f64]) -> Result<f64> {
        shape("model input", self.arch.inputs, raw.len())?;
        let x = self.input_map.apply(raw);
        Ok(self.output_map.to_physical(self.predict(&x)?))
    }
}
