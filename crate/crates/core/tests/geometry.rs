//! Connections, the twisted differential, the cone and truncated cohomology
//! on explicit examples.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symflat::cohomology::{cohomology_dims, cone_cohomology_dims, exactness_witness, Cochain};
use symflat::cone::{cone_d, map_f, map_g, ConeElement};
use symflat::connection::{canonical_flat, generate_flat, Connection, Gauge, LambdaChoice};
use symflat::forms::{Form, FormLike, MatrixForm, VectorForm, Wedge};
use symflat::random::{self, Sizes};
use symflat::scalars::{int, Poly, Rational};
use symflat::tty::{FiberKind, PrimElement};
use symflat::twist::{twisted_m1, EvalMode};
use symflat::Error;

fn diag(a: i64, b: i64) -> Vec<Vec<Rational>> {
    vec![vec![int(a), int(0)], vec![int(0), int(b)]]
}

fn scalar_connection(a: Form) -> Connection {
    Connection::new(MatrixForm::scalar(1, &a)).unwrap()
}

#[test]
fn curvature_of_a_non_flat_potential() {
    let n = 2;
    let a = Form::function(Poly::x(n, 1)).wedge(&Form::dx(n, 2)).unwrap();
    let c = scalar_connection(a);
    let r = c.analyze_flatness();
    let dx12 = Form::dx(n, 1).wedge(&Form::dx(n, 2)).unwrap();
    assert_eq!(r.f, MatrixForm::scalar(1, &dx12));
    assert_eq!(r.f0, r.f);
    assert!(r.phi.is_zero());
    assert!(!r.is_symplectically_flat);
    assert!(matches!(c.yang_mills_residual(), Err(Error::PrimitiveCurvature)));
}

#[test]
fn covariant_derivative_squares_to_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sizes = Sizes::default();
    for n in 1..=2 {
        for rank in 1..=3 {
            let c = Connection::new(random::matrix_form(&mut rng, n, rank, 1, &sizes)).unwrap();
            for k in 0..=2 * n - 2 {
                let v = random::vector_form(&mut rng, n, rank, k, &sizes);
                let dd = c.covariant_d(&c.covariant_d(&v).unwrap()).unwrap();
                assert_eq!(dd, c.curvature().wedge(&v).unwrap());
            }
        }
    }
}

#[test]
fn curvature_is_gauge_covariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sizes = Sizes::default();
    for n in 1..=2 {
        let c = Connection::new(random::matrix_form(&mut rng, n, 3, 1, &sizes)).unwrap();
        let g = Gauge::unipotent(&random::strictly_upper(&mut rng, n, 3, 2)).unwrap();
        let moved = c.gauge(&g).unwrap();
        assert_eq!(moved.curvature(), g.conjugate(&c.curvature()).unwrap());
        assert_eq!(moved.phi(), g.conjugate(&c.phi()).unwrap());
    }
}

#[test]
fn gauge_requires_an_inverse() {
    let n = 1;
    let g = MatrixForm::constant(n, &diag(1, 2)).unwrap();
    assert!(Gauge::new(g.clone(), g).is_err());
}

#[test]
fn generated_frames_are_flat() {
    let n = 2;
    let mut nil = MatrixForm::zero(n, 2, 0);
    nil.set(0, 1, Form::function(Poly::x(n, 1)));
    let g = Gauge::unipotent(&nil).unwrap();
    let c = generate_flat(n, &diag(1, 0), &g, LambdaChoice::Standard).unwrap();
    let r = c.analyze_flatness();
    assert!(r.is_symplectically_flat);
    assert_eq!(r.bianchi_consistent, Some(true));
    assert_eq!(r.phi, g.conjugate(&MatrixForm::constant(n, &diag(1, 0)).unwrap()).unwrap());
    assert!(c.yang_mills_residual().unwrap().is_zero());
}

#[test]
fn branch_table_matches_series_on_gauged_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sizes = Sizes::default();
    for n in 1..=3 {
        let g = Gauge::unipotent(&random::strictly_upper(&mut rng, n, 2, 1)).unwrap();
        let c = generate_flat(n, &random::constant_matrix(&mut rng, 2), &g, LambdaChoice::Symmetric).unwrap();
        for _ in 0..20 {
            let b = random::prim_element(&mut rng, n, FiberKind::Vector(2), &sizes);
            let once = twisted_m1(&c, &b, EvalMode::Checked).unwrap();
            assert!(twisted_m1(&c, &once, EvalMode::Checked).unwrap().is_zero());
        }
    }
}

#[test]
fn cone_maps_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let c = canonical_flat(2, &diag(1, 0), LambdaChoice::Standard).unwrap();
    for _ in 0..30 {
        let b = random::prim_element(&mut rng, 2, FiberKind::Vector(2), &Sizes::default());
        let g = map_g(&c, &b).unwrap();
        assert_eq!(map_f(&c, &g).unwrap(), b);
    }
}

fn unit(f: Form) -> symflat::tty::Payload {
    VectorForm::new(vec![f]).unwrap().into()
}

/// With `A = 0` the pair `(lambda, -1)` is closed in `C^1` but not exact:
/// it represents the class dual to the cokernel of `Phi_0 = 0`.
#[test]
fn lambda_class_in_the_cone() {
    let n = 1;
    let c = Connection::trivial(n, 1);
    let a = ConeElement::new(1, unit(Form::lambda_standard(n)), unit(Form::constant(n, int(-1)))).unwrap();
    assert!(cone_d(&c, &a).unwrap().is_zero());
    assert_eq!(exactness_witness(&c, &Cochain::Cone(a.clone()), 4).unwrap(), None);

    // Its image under f is a nonzero class of P^1_+.
    let f = map_f(&c, &a).unwrap();
    assert!(!f.is_zero());
    assert_eq!(exactness_witness(&c, &Cochain::Prim(f), 4).unwrap(), None);

    // An exact element does have a verified preimage.
    let pre = ConeElement::new(0, unit(Form::function(Poly::x(n, 1).checked_mul(&Poly::y(n, 1)).unwrap())), unit(Form::zero(n, -1)))
        .unwrap();
    let exact = Cochain::Cone(cone_d(&c, &pre).unwrap());
    assert!(exactness_witness(&c, &exact, 4).unwrap().is_some());
}

#[test]
fn trivial_rank_one_tables() {
    for n in 1..=2 {
        let c = Connection::trivial(n, 1);
        let mut want = vec![0; 2 * n + 2];
        want[0] = 1;
        want[1] = 1;
        let prim = cohomology_dims(&c, 4, &[2, 3]).unwrap();
        let cone = cone_cohomology_dims(&c, 4, &[2, 3]).unwrap();
        assert!(prim.stabilized() && cone.stabilized());
        assert_eq!(prim.dims(), want);
        assert_eq!(cone.dims(), want);
        for p in &prim.positions {
            assert_eq!(p.witnesses.len(), p.dim);
        }
    }
}

#[test]
fn cohomology_rejects_non_flat_connections() {
    let n = 2;
    let a = Form::function(Poly::x(n, 1)).wedge(&Form::dx(n, 2)).unwrap();
    assert!(matches!(cohomology_dims(&scalar_connection(a), 3, &[2]), Err(Error::NotFlat)));
}

#[test]
fn one_is_closed_only_in_the_kernel_of_phi() {
    let n = 1;
    let c = canonical_flat(n, &diag(1, 0), LambdaChoice::Standard).unwrap();
    let e2 = VectorForm::new(vec![Form::zero(n, 0), Form::one(n)]).unwrap();
    let e1 = VectorForm::new(vec![Form::one(n), Form::zero(n, 0)]).unwrap();
    assert!(twisted_m1(&c, &PrimElement::plus(e2).unwrap(), EvalMode::Checked).unwrap().is_zero());
    assert!(!twisted_m1(&c, &PrimElement::plus(e1).unwrap(), EvalMode::Checked).unwrap().is_zero());
}
