use std::f64::consts::TAU;

use qcpinn::autodiff::Jet;
use qcpinn::network::{Architecture, HybridModel, InputNormalization, OutputScaling};
use qcpinn::quantum::{CircuitSpec, Gate, Topology};
use qcpinn::{Model, ModelF32};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn arch(t: Topology, dm: usize, dq: usize) -> Architecture {
    Architecture {
        inputs: dm,
        hidden: 50,
        circuit: CircuitSpec::new(t, dq, 1).unwrap(),
    }
}

/// Model with every parameter, biases included, drawn uniformly.
fn random_model(t: Topology, dm: usize, dq: usize, seed: u64) -> Model {
    let a = arch(t, dm, dq);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = HybridModel::init(a, InputNormalization::identity(dm), OutputScaling::IDENTITY, &mut rng)
        .unwrap();
    for p in m.params.iter_mut() {
        *p = rng.gen_range(-0.5..0.5);
    }
    m
}

fn matvec_tanh(w: &[f64], b: &[f64], x: &[f64]) -> Vec<f64> {
    let cols = x.len();
    b.iter()
        .enumerate()
        .map(|(r, bias)| {
            let mut s = 0.0;
            for c in 0..cols {
                s += w[r * cols + c] * x[c];
            }
            (s + bias).tanh()
        })
        .collect()
}

#[test]
fn preprocess_matches_arithmetic() {
    let m = random_model(Topology::Cascade, 3, 4, 1);
    let l = m.layout().clone();
    let p = &m.params;
    let x = [0.2, -0.7, 0.9];
    let h = matvec_tanh(&p[l.w1.clone()], &p[l.b1.clone()], &x);
    let got = m.preprocess(p, &x).unwrap();
    for (r, g) in got.iter().enumerate() {
        let mut s = 0.0;
        for (c, hc) in h.iter().enumerate() {
            s += p[l.w2.start + r * 50 + c] * hc;
        }
        s += p[l.b2.start + r];
        assert!((g - s).abs() < 1e-14, "{g} vs {s}");
    }
}

#[test]
fn postprocess_matches_arithmetic() {
    let m = random_model(Topology::Alternate, 2, 3, 2);
    let l = m.layout().clone();
    let p = &m.params;
    let yq = [0.3, -0.1, 0.8];
    let h = matvec_tanh(&p[l.w3.clone()], &p[l.b3.clone()], &yq);
    let mut y = p[l.b4.start];
    for (k, hk) in h.iter().enumerate() {
        y += p[l.w4.start + k] * hk;
    }
    assert!((m.postprocess(p, &yq).unwrap() - y).abs() < 1e-14);
}

#[test]
fn zero_weight_stages() {
    let mut m = random_model(Topology::CrossMesh, 2, 2, 3);
    let l = m.layout().clone();
    m.params[l.w2.clone()].iter_mut().for_each(|v| *v = 0.0);
    let b2 = m.params[l.b2.clone()].to_vec();
    assert_eq!(m.preprocess(&m.params, &[0.4, 0.6]).unwrap(), b2);
    m.params[l.w4.clone()].iter_mut().for_each(|v| *v = 0.0);
    let b4 = m.params[l.b4.start];
    assert_eq!(m.postprocess(&m.params, &[0.1, 0.2]).unwrap(), b4);
}

#[test]
fn composition_is_exact() {
    for t in Topology::ALL {
        let m = random_model(t, 2, 3, 4);
        let l = m.layout().clone();
        let x = [0.35, 0.8];
        let xq = m.preprocess(&m.params, &x).unwrap();
        let yq = m.program().run(&m.params[l.theta2.clone()], &xq).unwrap();
        let y = m.postprocess(&m.params, &yq).unwrap();
        assert_eq!(y.to_bits(), m.predict(&x).unwrap().to_bits());
    }
}

/// Period of each circuit slot: 2π for single-qubit rotations, whose shift
/// is a global phase, and 4π for controlled ones, where the sign lands on the
/// control-one subspace only.
fn slot_periods(m: &Model) -> Vec<f64> {
    let mut periods = vec![0.0; m.program().parameter_slots()];
    for g in m.program().gates() {
        match *g {
            Gate::Rotation { slot, .. } => periods[slot] = TAU,
            Gate::ControlledRotation { slot, .. } => periods[slot] = 2.0 * TAU,
            Gate::Cnot { .. } => {}
        }
    }
    periods
}

#[test]
fn periodic_in_circuit_angles_and_embedding() {
    for t in Topology::ALL {
        let m = random_model(t, 2, 2, 5);
        let x = [0.6, 0.1];
        let y0 = m.predict(&x).unwrap();
        let l = m.layout().clone();
        let periods = slot_periods(&m);
        let shifts = l
            .theta2
            .clone()
            .zip(periods)
            .chain(l.b2.clone().map(|i| (i, TAU)));
        for (i, period) in shifts {
            let mut shifted = m.clone();
            shifted.params[i] += period;
            let y = shifted.predict(&x).unwrap();
            assert!((y - y0).abs() < 1e-12, "{t} slot {i}: {y} vs {y0}");
        }
    }
}

#[test]
fn controlled_angle_is_not_two_pi_periodic() {
    let m = random_model(Topology::Cascade, 2, 2, 5);
    let slot = m
        .program()
        .gates()
        .iter()
        .find_map(|g| match g {
            Gate::ControlledRotation { slot, .. } => Some(*slot),
            _ => None,
        })
        .unwrap();
    let x = [0.6, 0.1];
    let mut shifted = m.clone();
    shifted.params[m.layout().theta2.start + slot] += TAU;
    assert!((shifted.predict(&x).unwrap() - m.predict(&x).unwrap()).abs() > 1e-6);
}

fn jet_derivatives(m: &Model, x: &[f64; 2]) -> Jet<f64, 2> {
    let p: Vec<Jet<f64, 2>> = m.params.iter().map(|&v| Jet::constant(v)).collect();
    let xs = [Jet::input(x[0], 0), Jet::input(x[1], 1)];
    m.forward(&p, &xs).unwrap()
}

#[test]
fn input_derivatives_match_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for t in Topology::ALL {
        let m = random_model(t, 2, 2, 7);
        for _ in 0..50 {
            let x = [rng.gen::<f64>(), rng.gen::<f64>()];
            let j = jet_derivatives(&m, &x);
            for dir in 0..2 {
                let at = |h: f64| {
                    let mut z = x;
                    z[dir] += h;
                    m.predict(&z).unwrap()
                };
                let h1 = 1e-5;
                let fd1 = (at(h1) - at(-h1)) / (2.0 * h1);
                let rel1 = (fd1 - j.d[dir]).abs() / j.d[dir].abs().max(1e-3);
                assert!(rel1 < 1e-6, "{t} first derivative: {} vs {fd1}", j.d[dir]);
                let h2 = 1e-3;
                let fd2 = (at(h2) - 2.0 * at(0.0) + at(-h2)) / (h2 * h2);
                let rel2 = (fd2 - j.dd[dir]).abs() / j.dd[dir].abs().max(1e-2);
                assert!(rel2 < 1e-4, "{t} second derivative: {} vs {fd2}", j.dd[dir]);
            }
        }
    }
}

#[test]
fn physical_prediction_applies_both_maps() {
    let mut m = random_model(Topology::Cascade, 2, 2, 8);
    let raw = [50.0, 25.0];
    m.input_map = InputNormalization {
        lower: vec![0.0, 0.0],
        upper: vec![100.0, 100.0],
    };
    m.output_map = OutputScaling {
        offset: 5.0,
        scale: 5.0,
    };
    let y = m.predict(&[0.5, 0.25]).unwrap();
    assert_eq!(m.predict_physical(&raw).unwrap(), 5.0 + 5.0 * y);
}

#[test]
fn single_precision_model_tracks_double() {
    let m = random_model(Topology::Alternate, 2, 2, 9);
    let single = ModelF32::from_params(
        m.arch,
        m.input_map.clone(),
        m.output_map,
        m.params.iter().map(|&v| v as f32).collect(),
    )
    .unwrap();
    let x = [0.3, 0.7];
    let a = m.predict(&x).unwrap();
    let b = single.predict(&[0.3f32, 0.7]).unwrap();
    assert!((a - b as f64).abs() < 1e-4, "{a} vs {b}");
}
