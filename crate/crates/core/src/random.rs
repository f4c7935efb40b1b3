//! Seeded generators for randomized identity checks.
//!
//! All generators draw from a caller-supplied RNG, so one seed reproduces a
//! whole run. Coefficients are small integers with occasional halves and
//! thirds; polynomials and forms are kept sparse.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::forms::{Form, FormIndex, FormLike, MatrixForm, VectorForm};
use crate::lefschetz::primitive_basis;
use crate::scalars::{rat, Monomial, Poly, Rational};
use crate::tty::{FiberKind, Payload, PrimElement, Side};

/// Shape parameters for random data.
#[derive(Clone, Copy, Debug)]
pub struct Sizes {
    /// Maximum total degree of coefficient monomials.
    pub max_deg: u32,
    /// Maximum number of monomials per coefficient.
    pub max_terms: usize,
    /// Maximum number of basis forms per scalar form.
    pub max_forms: usize,
}

impl Default for Sizes {
    fn default() -> Self {
        Sizes {
            max_deg: 3,
            max_terms: 2,
            max_forms: 2,
        }
    }
}

pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    let num = loop {
        let v = rng.gen_range(-4i64..=4);
        if v != 0 {
            break v;
        }
    };
    let den = *[1, 1, 1, 1, 2, 3].choose(rng).unwrap();
    rat(num, den)
}

pub fn monomial<R: Rng>(rng: &mut R, n: usize, max_deg: u32) -> Monomial {
    let deg = rng.gen_range(0..=max_deg);
    let mut e = vec![0u32; 2 * n];
    for _ in 0..deg {
        e[rng.gen_range(0..2 * n)] += 1;
    }
    Monomial::from_exponents(e)
}

/// A nonzero polynomial.
pub fn poly<R: Rng>(rng: &mut R, n: usize, sizes: &Sizes) -> Poly {
    loop {
        let terms = rng.gen_range(1..=sizes.max_terms.max(1));
        let p = Poly::from_terms(n, (0..terms).map(|_| (monomial(rng, n, sizes.max_deg), rational(rng))));
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random `k`-form (possibly zero only when there are no `k`-forms).
pub fn form<R: Rng>(rng: &mut R, n: usize, k: usize, sizes: &Sizes) -> Form {
    let indices = FormIndex::all_of_degree(n, k);
    let mut f = Form::zero(n, k as i32);
    if indices.is_empty() {
        return f;
    }
    let count = rng.gen_range(1..=sizes.max_forms.max(1));
    for _ in 0..count {
        let idx = *indices.choose(rng).unwrap();
        f.add_term(idx, poly(rng, n, sizes));
    }
    f
}

/// A random primitive `s`-form built on the constant primitive basis.
pub fn primitive_form<R: Rng>(rng: &mut R, n: usize, s: usize, sizes: &Sizes) -> Form {
    let basis = primitive_basis(n, s);
    let mut f = Form::zero(n, s as i32);
    if basis.dim() == 0 {
        return f;
    }
    let count = rng.gen_range(1..=sizes.max_forms.max(1));
    for _ in 0..count {
        let b = &basis.forms[rng.gen_range(0..basis.dim())];
        f = f.checked_add(&b.mul_poly(&poly(rng, n, sizes))).expect("same degree");
    }
    f
}

/// Random fiber-valued form; each scalar part is drawn by `part`. Each entry
/// is zero with probability one half, except that at least one is nonzero.
fn fiber_valued<R: Rng>(rng: &mut R, n: usize, kind: FiberKind, degree: usize, mut part: impl FnMut(&mut R) -> Form) -> Payload {
    let len = match kind {
        FiberKind::Scalar => 1,
        FiberKind::Vector(r) => r,
        FiberKind::Matrix(r) => r * r,
    };
    let forced = rng.gen_range(0..len);
    let parts: Vec<Form> = (0..len)
        .map(|i| {
            if i == forced || rng.gen_bool(0.5) {
                part(rng)
            } else {
                Form::zero(n, degree as i32)
            }
        })
        .collect();
    let template = Payload::zero(n, kind, degree as i32);
    template.with_parts(parts)
}

pub fn primitive_payload<R: Rng>(rng: &mut R, n: usize, s: usize, kind: FiberKind, sizes: &Sizes) -> Payload {
    fiber_valued(rng, n, kind, s, |rng| primitive_form(rng, n, s, sizes))
}

pub fn payload<R: Rng>(rng: &mut R, n: usize, k: usize, kind: FiberKind, sizes: &Sizes) -> Payload {
    fiber_valued(rng, n, kind, k, |rng| form(rng, n, k, sizes))
}

pub fn vector_form<R: Rng>(rng: &mut R, n: usize, rank: usize, k: usize, sizes: &Sizes) -> VectorForm {
    payload(rng, n, k, FiberKind::Vector(rank), sizes).to_vector().unwrap()
}

pub fn matrix_form<R: Rng>(rng: &mut R, n: usize, rank: usize, k: usize, sizes: &Sizes) -> MatrixForm {
    payload(rng, n, k, FiberKind::Matrix(rank), sizes).to_matrix().unwrap()
}

/// A random element of a uniformly chosen slot `P^s_+` or `P^s_-`.
pub fn prim_element<R: Rng>(rng: &mut R, n: usize, kind: FiberKind, sizes: &Sizes) -> PrimElement {
    let side = if rng.gen_bool(0.5) { Side::Plus } else { Side::Minus };
    let s = rng.gen_range(0..=n);
    prim_element_at(rng, n, side, s, kind, sizes)
}

pub fn prim_element_at<R: Rng>(rng: &mut R, n: usize, side: Side, s: usize, kind: FiberKind, sizes: &Sizes) -> PrimElement {
    PrimElement::new(side, primitive_payload(rng, n, s, kind, sizes)).expect("generated primitive")
}

/// A constant `r x r` matrix with small integer entries.
pub fn constant_matrix<R: Rng>(rng: &mut R, rank: usize) -> Vec<Vec<Rational>> {
    (0..rank)
        .map(|_| (0..rank).map(|_| rat(rng.gen_range(-2..=2), 1)).collect())
        .collect()
}

/// A strictly upper triangular matrix of polynomials of degree at most
/// `max_deg` (nilpotent, so `I + N` has a polynomial inverse).
pub fn strictly_upper<R: Rng>(rng: &mut R, n: usize, rank: usize, max_deg: u32) -> MatrixForm {
    let sizes = Sizes {
        max_deg,
        max_terms: 2,
        max_forms: 1,
    };
    let mut m = MatrixForm::zero(n, rank, 0);
    for i in 0..rank {
        for j in i + 1..rank {
            if rng.gen_bool(0.7) {
                m.set(i, j, Form::function(poly(rng, n, &sizes)));
            }
        }
    }
    m
}
