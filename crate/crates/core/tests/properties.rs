use lueq::gen::{haar_unitary, random_local_unitary, random_state, Seed};
use lueq::invariants::{certificates, j_moments, triple_traces};
use lueq::linalg::{det_and_inverse, herm_eig, ComplexMatrix};
use lueq::state::{apply_local_unitary, eigensystem, flatten, partial_trace_first, partial_trace_second, unfold, RANK_TOL};
use num_complex::Complex;
use proptest::prelude::*;

type M = ComplexMatrix<f64>;

fn matrix(n: usize) -> impl Strategy<Value = M> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n)
        .prop_map(move |v| M::new(n, n, v.into_iter().map(|(a, b)| Complex::new(a, b)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(a in matrix(3), b in matrix(3), c in matrix(3)) {
        let left = &(&a * &b) * &c;
        let right = &a * &(&b * &c);
        prop_assert!(left.distance(&right) <= 1e-12 * (1.0 + left.frobenius_norm()));
    }

    #[test]
    fn kron_mixed_product(a in matrix(2), b in matrix(2), c in matrix(2), d in matrix(2)) {
        let left = &a.kron(&b) * &c.kron(&d);
        let right = (&a * &c).kron(&(&b * &d));
        prop_assert!(left.distance(&right) <= 1e-12 * (1.0 + left.frobenius_norm()));
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix(3), b in matrix(3)) {
        let da = det_and_inverse(&a, 0.0).unwrap().det;
        let db = det_and_inverse(&b, 0.0).unwrap().det;
        let dab = det_and_inverse(&(&a * &b), 0.0).unwrap().det;
        prop_assert!((dab - da * db).norm() <= 1e-9 * (1.0 + dab.norm()));
    }

    #[test]
    fn eigenvalues_sum_to_trace(a in matrix(4)) {
        let h = a.hermitian_part();
        let e = herm_eig(&h, 1e-12).unwrap();
        let sum: f64 = e.values.iter().sum();
        prop_assert!((sum - h.trace().re).abs() <= 1e-10);
        prop_assert!(e.reconstruct().distance(&h) <= 1e-10 * (1.0 + h.frobenius_norm()));
    }

    #[test]
    fn partial_traces_agree_on_the_full_trace(seed in any::<u64>(), rank in 1usize..=9) {
        let rho = random_state::<f64>(3, rank, Seed(seed)).unwrap();
        let a = partial_trace_second(rho.matrix(), 3);
        let b = partial_trace_first(rho.matrix(), 3);
        prop_assert!((a.trace().re - 1.0).abs() <= 1e-12);
        prop_assert!((b.trace().re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn certificates_are_local_unitary_invariant(seed in any::<u64>(), rank in 1usize..=4) {
        let rho = random_state::<f64>(2, rank, Seed(seed)).unwrap();
        let (u, w) = random_local_unitary::<f64>(2, Seed(seed ^ 0x5555));
        let moved = apply_local_unitary(&rho, &u, &w).unwrap();
        let a = certificates(&rho).unwrap();
        let b = certificates(&moved).unwrap();
        prop_assert!(a.omega.distance(&b.omega) <= 1e-9);
        prop_assert!(a.theta.distance(&b.theta) <= 1e-9);
        for (x, y) in a.x.as_slice().iter().zip(b.x.as_slice()) {
            prop_assert!((x - y).norm() <= 1e-9);
        }
        for (x, y) in a.y.as_slice().iter().zip(b.y.as_slice()) {
            prop_assert!((x - y).norm() <= 1e-9);
        }
    }

    #[test]
    fn triple_traces_are_cyclic(a in matrix(2), b in matrix(2), c in matrix(2)) {
        let t = triple_traces(&[a, b, c]);
        prop_assert!((t[(0, 1, 2)] - t[(1, 2, 0)]).norm() <= 1e-12);
        prop_assert!((t[(0, 1, 2)] - t[(2, 0, 1)]).norm() <= 1e-12);
    }

    #[test]
    fn moments_by_two_routes(seed in any::<u64>(), rank in 1usize..=4) {
        let rho = random_state::<f64>(2, rank, Seed(seed)).unwrap();
        let j = j_moments(&rho).unwrap();
        let mut power = M::identity(4);
        for (s, js) in j.iter().enumerate() {
            power = &power * rho.matrix();
            prop_assert!((power.trace().re - js).abs() <= 1e-12, "s = {}", s + 1);
        }
    }

    #[test]
    fn local_unitaries_compose(seed in any::<u64>()) {
        let rho = random_state::<f64>(2, 3, Seed(seed)).unwrap();
        let (u1, w1) = random_local_unitary::<f64>(2, Seed(seed.wrapping_add(1)));
        let (u2, w2) = random_local_unitary::<f64>(2, Seed(seed.wrapping_add(2)));
        let twice = apply_local_unitary(&apply_local_unitary(&rho, &u1, &w1).unwrap(), &u2, &w2).unwrap();
        let once = apply_local_unitary(&rho, &(&u2 * &u1), &(&w2 * &w1)).unwrap();
        prop_assert!(twice.matrix().distance(once.matrix()) <= 1e-12);
    }

    #[test]
    fn unfold_flatten_round_trip(seed in any::<u64>()) {
        let u = haar_unitary::<f64>(9, Seed(seed));
        let v = u.column(0);
        let a = unfold(&v, 3).unwrap();
        prop_assert!((a.frobenius_norm() - 1.0).abs() <= 1e-12);
        prop_assert_eq!(flatten(&a), v);
    }
}

#[test]
fn eigensystem_recovers_the_state() {
    for s in 0..10 {
        let rho = random_state::<f64>(3, 5, Seed(s)).unwrap();
        let es = eigensystem(&rho, RANK_TOL).unwrap();
        let mut m = M::zeros(9, 9);
        for (l, v) in es.lambdas.iter().zip(&es.vectors) {
            for i in 0..9 {
                for j in 0..9 {
                    m[(i, j)] += v[i] * v[j].conj() * *l;
                }
            }
        }
        assert!(m.distance(rho.matrix()) < 1e-12);
        assert!(es.lambdas.windows(2).all(|w| w[0] <= w[1]));
    }
}
