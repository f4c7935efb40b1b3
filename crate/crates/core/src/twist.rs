//! Twisting the primitive complex by a connection.
//!
//! For an element `A` of grading one, the twisted differential is
//! `m1'(B) = sum_k delta_k m_k(A, ..., A, B)` with
//! `delta_k = (-1)^{(k-1)(k-2)/2}`. On the primitive complex it reduces to
//! the branch table
//!
//! ```text
//! P^k_+, k < n :  del_{+A}
//! P^n_+        :  -del_{+A} del_{-A} + Phi
//! P^k_-        :  -del_{-A}
//! ```
//!
//! which holds for every connection, flat or not. In checked mode both
//! evaluations are computed and compared.
//!
//! For `n = 1` the series gives `m1'(A) = -d_A Phi = -(dPhi + [A, Phi])`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::forms::FormLike;
use crate::lefschetz::{is_primitive, l_power, pi};
use crate::random::{prim_element_at, Sizes};
use crate::tty::{position_of_grading, AInfinity, FiberKind, Payload, PrimElement, Side, Tty};

/// `delta_k = (-1)^{(k-1)(k-2)/2}`: `+1` for `k = 1, 2 mod 4`.
pub fn delta_sign(k: i64) -> Result<i32> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!("delta_k needs k >= 1, got {k}")));
    }
    Ok(if ((k - 1) * (k - 2) / 2) % 2 == 0 { 1 } else { -1 })
}

/// `sum_{k=1}^{K} delta_k m_k(a^{k-1}, b)`, where `K` is the algebra's
/// largest nonzero arity or `max_k`, whichever is smaller.
pub fn twist_series<A: AInfinity>(alg: &A, a: &A::Elem, b: &A::Elem, max_k: usize) -> Result<A::Elem> {
    let top = alg.max_arity().map_or(max_k, |m| m.min(max_k)).max(1);
    let mut acc = alg.m(std::slice::from_ref(b))?;
    for k in 2..=top {
        let mut args = vec![a.clone(); k - 1];
        args.push(b.clone());
        let term = alg.m(&args)?;
        let term = if delta_sign(k as i64)? < 0 { alg.negate(&term) } else { term };
        acc = alg.add(&acc, &term)?;
    }
    Ok(acc)
}

/// `A` as a matrix-valued element of `P^1_+`.
pub fn connection_element(c: &Connection) -> PrimElement {
    PrimElement::plus(c.a().clone()).expect("1-forms are primitive")
}

/// `d_A beta = d beta + A /\ beta`, with `A` acting on fiber values from the
/// left.
pub fn covariant_d(c: &Connection, beta: &Payload) -> Result<Payload> {
    let a: Payload = c.a().clone().into();
    Ok(beta.exterior_d().plus(&a.wedge(beta)?))
}

fn require_primitive(beta: &Payload) -> Result<()> {
    if is_primitive(beta) {
        Ok(())
    } else {
        Err(Error::NotPrimitive { degree: beta.degree() })
    }
}

/// `del_{+A} = Pi d_A` on primitive forms.
pub fn del_plus_a(c: &Connection, beta: &Payload) -> Result<Payload> {
    require_primitive(beta)?;
    Ok(pi(&covariant_d(c, beta)?))
}

/// `del_{-A} = L^{-1} d_A` on primitive forms.
pub fn del_minus_a(c: &Connection, beta: &Payload) -> Result<Payload> {
    require_primitive(beta)?;
    Ok(l_power(-1, &covariant_d(c, beta)?))
}

/// The operator of the middle map `-del_{+A} del_{-A} + Phi` on `P^n`.
pub fn middle_map(c: &Connection, beta: &Payload) -> Result<Payload> {
    let phi: Payload = c.phi().into();
    let first = del_plus_a(c, &del_minus_a(c, beta)?)?.negated();
    Ok(first.plus(&phi.wedge(beta)?))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EvalMode {
    /// Evaluate the branch table and the series; fail if they differ.
    #[default]
    Checked,
    /// Branch table only.
    Fast,
}

/// The branch-table value of `m1'`.
pub fn twisted_m1_branch(c: &Connection, b: &PrimElement) -> Result<PrimElement> {
    let n = c.n() as i32;
    let grading = b.grading() + 1;
    if b.is_zero() || !(0..=n).contains(&b.s()) || (b.side() == Side::Minus && b.s() == 0) {
        let kind = FiberKind::Matrix(c.rank()).product(b.kind())?;
        return Ok(PrimElement::zero_at(c.n(), kind, grading));
    }
    let beta = b.payload();
    let value = match b.side() {
        Side::Plus if b.s() < n => del_plus_a(c, beta)?,
        Side::Plus => middle_map(c, beta)?,
        Side::Minus => del_minus_a(c, beta)?.negated(),
    };
    PrimElement::at(grading, value)
}

/// The series value of `m1'`.
pub fn twisted_m1_series(c: &Connection, b: &PrimElement) -> Result<PrimElement> {
    twist_series(&Tty, &connection_element(c), b, usize::MAX)
}

pub fn twisted_m1(c: &Connection, b: &PrimElement, mode: EvalMode) -> Result<PrimElement> {
    let branch = twisted_m1_branch(c, b)?;
    if mode == EvalMode::Checked {
        let series = twisted_m1_series(c, b)?;
        if !branch.checked_sub(&series)?.is_zero() {
            return Err(Error::BranchMismatch(format!("P^{}_{:?}", b.s(), b.side())));
        }
    }
    Ok(branch)
}

/// `m1'(A) = m1(A) + m2(A, A) - m3(A, A, A)`; vanishes iff the connection
/// is symplectically flat.
pub fn m1_prime_of_a(c: &Connection) -> Result<PrimElement> {
    let a = connection_element(c);
    twist_series(&Tty, &a, &a, usize::MAX)
}

/// Closed form of `m1'(A)`: `Pi F` in `P^2_+` for `n >= 2`, `-d_A Phi` in
/// `P^1_-` for `n = 1`.
pub fn m1_prime_of_a_closed_form(c: &Connection) -> Result<PrimElement> {
    if c.n() >= 2 {
        PrimElement::plus(pi(&c.curvature()))
    } else {
        PrimElement::minus(c.covariant_d_end(&c.phi())?.negated())
    }
}

/// Result of applying `m1'` twice to random elements.
#[derive(Clone, Debug)]
pub struct SquareZeroReport {
    pub flat: bool,
    pub trials: usize,
    pub failures: usize,
    /// First input with a nonzero `m1' m1'`, and that value.
    pub witness: Option<(PrimElement, PrimElement)>,
}

/// Applies `m1'` twice to `trials` random vector-valued elements drawn from
/// `seed`, cycling through the slots of the complex.
pub fn check_square_zero(c: &Connection, trials: usize, seed: u64, sizes: &Sizes, mode: EvalMode) -> Result<SquareZeroReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = FiberKind::Vector(c.rank());
    let n = c.n();
    let mut failures = 0;
    let mut witness = None;
    for t in 0..trials {
        let (side, s) = position_of_grading(n, (t % (2 * n + 2)) as i32);
        let b = prim_element_at(&mut rng, n, side, s as usize, kind, sizes);
        let once = twisted_m1(c, &b, mode)?;
        let twice = twisted_m1(c, &once, mode)?;
        if !twice.is_zero() {
            failures += 1;
            if witness.is_none() {
                witness = Some((b, twice));
            }
        }
    }
    Ok(SquareZeroReport {
        flat: c.is_symplectically_flat(),
        trials,
        failures,
        witness,
    })
}
