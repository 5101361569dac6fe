use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinqcorr::linalg::{ComplexMatrix, HermitianOperator};
use spinqcorr::measures::{closed_xxz, measures, MeasureSet};
use spinqcorr::states::xxz_state;
use spinqcorr::xxz::correlators;

fn qubit_state(rng: &mut ChaCha8Rng) -> HermitianOperator {
    let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let len: f64 = rng.gen_range(0.0..1.0);
    let b = v.map(|x| x / norm * len);
    let m = ComplexMatrix::from_rows(&[
        vec![Complex64::new(0.5 * (1.0 + b[2]), 0.0), Complex64::new(0.5 * b[0], -0.5 * b[1])],
        vec![Complex64::new(0.5 * b[0], 0.5 * b[1]), Complex64::new(0.5 * (1.0 - b[2]), 0.0)],
    ])
    .unwrap();
    HermitianOperator::new(m).unwrap()
}

fn unitary(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let q: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = Complex64::new(q[0] / n, q[1] / n);
    let b = Complex64::new(q[2] / n, q[3] / n);
    ComplexMatrix::from_rows(&[vec![a, -b.conj()], vec![b, a.conj()]]).unwrap()
}

#[test]
fn product_states_carry_no_correlations() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let rho = qubit_state(&mut rng).kron(&qubit_state(&mut rng)).unwrap();
        let m = measures(&rho).unwrap();
        assert!(m.as_array().iter().all(|v| *v <= 1e-9 && *v >= 0.0), "{m:?}");
    }
}

#[test]
fn definitional_measures_are_local_unitary_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rho = xxz_state(&correlators(0.5, 1).unwrap()).unwrap().to_operator();
    let base = measures(&rho).unwrap();
    for _ in 0..100 {
        let u = unitary(&mut rng).kron(&unitary(&mut rng));
        let rotated = rho.conjugate_by(&u).unwrap();
        let m = measures(&rotated).unwrap();
        assert!(m.max_abs_diff(&base) <= 1e-7, "{m:?} vs {base:?}");
    }
}

#[test]
fn nearest_neighbours_dominate_and_values_are_bounded() {
    for k in 1..=30 {
        let delta = -1.0 + 4.0 * k as f64 / 30.0;
        let near = closed_xxz(&correlators(delta, 1).unwrap()).unwrap();
        let next = closed_xxz(&correlators(delta, 2).unwrap()).unwrap();
        for (a, b) in near.as_array().iter().zip(next.as_array()) {
            assert!(*a >= b - 1e-12, "Δ={delta}: {near:?} vs {next:?}");
        }
        for v in near.as_array().iter().chain(next.as_array().iter()) {
            assert!((0.0..=1.0).contains(v));
        }
    }
}

#[test]
fn closed_forms_match_definitions_on_validation_grid() {
    for delta in [-0.9, -0.5, -0.1, 0.3, 0.7, 1.0, 1.5, 2.5] {
        for r in [1, 2] {
            let c = correlators(delta, r).unwrap();
            let closed: MeasureSet = closed_xxz(&c).unwrap();
            let def = measures(&xxz_state(&c).unwrap().to_operator()).unwrap();
            assert!(closed.max_abs_diff(&def) <= 1e-7, "Δ={delta} r={r}: {closed:?} vs {def:?}");
        }
    }
}
