use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symflat::lefschetz::is_primitive;
use symflat::random::{prim_element, Sizes};
use symflat::tty::{check_stasheff, m1, m2, FiberKind};

fn check_relations(n: usize, kind: FiberKind, trials: usize, seed: u64) {
    for r in check_stasheff(n, kind, 4, trials, seed, &Sizes::default()).unwrap() {
        assert_eq!(r.trials, trials);
        assert!(r.failures == 0, "relation k={} fails for n={n}: {:#?}", r.k, r.counterexample);
    }
}

#[test]
fn stasheff_scalar_n1() {
    check_relations(1, FiberKind::Scalar, 200, 11);
}

#[test]
fn stasheff_scalar_n2() {
    check_relations(2, FiberKind::Scalar, 200, 12);
}

#[test]
fn stasheff_scalar_n3() {
    check_relations(3, FiberKind::Scalar, 200, 13);
}

#[test]
fn stasheff_matrix_fiber() {
    for n in 1..=3 {
        check_relations(n, FiberKind::Matrix(2), 50, 20 + n as u64);
    }
}

#[test]
fn product_is_graded_commutative() {
    let sizes = Sizes::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=3 {
        for _ in 0..100 {
            let a = prim_element(&mut rng, n, FiberKind::Scalar, &sizes);
            let b = prim_element(&mut rng, n, FiberKind::Scalar, &sizes);
            let ab = m2(&a, &b).unwrap();
            let ba = m2(&b, &a).unwrap();
            let ba = if (a.grading() * b.grading()) % 2 == 0 { ba } else { ba.negated() };
            assert!(ab.checked_sub(&ba).unwrap().is_zero(), "{a} x {b}");
            assert!(is_primitive(ab.payload()));
        }
    }
}

#[test]
fn differential_raises_grading_by_one() {
    let sizes = Sizes::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 1..=3 {
        for _ in 0..100 {
            let a = prim_element(&mut rng, n, FiberKind::Vector(2), &sizes);
            let d = m1(&a).unwrap();
            assert_eq!(d.grading(), a.grading() + 1);
            assert!(is_primitive(d.payload()));
        }
    }
}
