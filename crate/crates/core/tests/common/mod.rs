//! Dense-matrix oracle shared by the quantum and acceptance tests.

use num_complex::Complex64 as C;
use qcpinn::quantum::{Axis, CircuitSpec, Gate};

type Mat = Vec<Vec<C>>;

fn rot_matrix(axis: Axis, theta: f64) -> [[C; 2]; 2] {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let i = C::new(0.0, 1.0);
    match axis {
        Axis::X => [[C::from(c), -i * s], [-i * s, C::from(c)]],
        Axis::Y => [[C::from(c), C::from(-s)], [C::from(s), C::from(c)]],
        Axis::Z => [
            [C::from_polar(1.0, -theta / 2.0), C::from(0.0)],
            [C::from(0.0), C::from_polar(1.0, theta / 2.0)],
        ],
    }
}

fn embed_single(dq: usize, q: usize, u: [[C; 2]; 2], control: Option<usize>) -> Mat {
    let dim = 1 << dq;
    let mut m = vec![vec![C::from(0.0); dim]; dim];
    for col in 0..dim {
        if control.is_some_and(|c| col >> c & 1 == 0) {
            m[col][col] = C::from(1.0);
            continue;
        }
        let b = col >> q & 1;
        for nb in 0..2 {
            let row = (col & !(1 << q)) | (nb << q);
            m[row][col] = u[nb][b];
        }
    }
    m
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Dense unitary product of embedding plus circuit, applied to |0…0⟩.
pub fn dense_expectations(spec: &CircuitSpec, theta: &[f64], x: &[f64]) -> Vec<f64> {
    let dq = spec.qubits;
    let dim = 1 << dq;
    let mut u: Mat = (0..dim)
        .map(|i| (0..dim).map(|j| C::from(if i == j { 1.0 } else { 0.0 })).collect())
        .collect();
    let mut apply = |g: Mat| u = matmul(&g, &u);
    for (q, &xi) in x.iter().enumerate() {
        apply(embed_single(dq, q, rot_matrix(Axis::X, xi), None));
    }
    let x_gate = [[C::from(0.0), C::from(1.0)], [C::from(1.0), C::from(0.0)]];
    for g in spec.program().gates() {
        match *g {
            Gate::Rotation { qubit, axis, slot } => {
                apply(embed_single(dq, qubit, rot_matrix(axis, theta[slot]), None))
            }
            Gate::ControlledRotation {
                control,
                target,
                axis,
                slot,
            } => apply(embed_single(
                dq,
                target,
                rot_matrix(axis, theta[slot]),
                Some(control),
            )),
            Gate::Cnot { control, target } => {
                apply(embed_single(dq, target, x_gate, Some(control)))
            }
        }
    }
    let psi: Vec<C> = (0..dim).map(|i| u[i][0]).collect();
    (0..dq)
        .map(|q| {
            psi.iter()
                .enumerate()
                .map(|(k, a)| a.norm_sqr() * if k >> q & 1 == 0 { 1.0 } else { -1.0 })
                .sum()
        })
        .collect()
}
