//! The A-infinity algebra of primitive forms.
//!
//! Elements live in `P^0_+, ..., P^n_+, P^n_-, ..., P^0_-`, where `P^s_+` has
//! grading `s` and `P^s_-` has grading `2n+1-s`. Only `m1`, `m2`, `m3` are
//! nonzero. Values may be scalar, vector or endomorphism valued; the maps are
//! extended to fiber values by `m_k(a_i (x) e_i) = m_k(a_i) (x) (e_1 ... e_k)`
//! without extra signs, which is what evaluating the formulas with the fiber
//! composing wedge computes.
//!
//! Sign conventions. The Stasheff relation of arity `k` is
//! `sum_{r+s+t=k} (-1)^{r+st} m_{r+t+1}(1^r (x) m_s (x) 1^t) = 0`, and applying
//! `1^r (x) m_s (x) 1^t` to `a_1 (x) ... (x) a_k` carries the Koszul sign
//! `(-1)^{s (|a_1| + ... + |a_r|)}` (the map `m_s` has degree `2 - s`). With
//! these conventions the product formulas below satisfy all relations exactly
//! as written; no sign in the product or in `m3` had to be adjusted.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::forms::{Form, FormLike, MatrixForm, VectorForm, Wedge};
use crate::lefschetz::{del_minus, del_plus, is_primitive, l_power, pi, star_r};
use crate::random::{prim_element, Sizes};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiberKind {
    Scalar,
    Vector(usize),
    Matrix(usize),
}

impl FiberKind {
    fn len(self) -> usize {
        match self {
            FiberKind::Scalar => 1,
            FiberKind::Vector(r) => r,
            FiberKind::Matrix(r) => r * r,
        }
    }

    /// Kind of `a /\ b`, or an error if the fibers do not compose.
    pub fn product(self, other: FiberKind) -> Result<FiberKind> {
        use FiberKind::*;
        match (self, other) {
            (Scalar, k) | (k, Scalar) => Ok(k),
            (Matrix(a), Matrix(b)) if a == b => Ok(Matrix(a)),
            (Matrix(a), Vector(b)) if a == b => Ok(Vector(a)),
            _ => Err(Error::IncomposableFibers {
                left: self.to_string(),
                right: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberKind::Scalar => write!(f, "scalar"),
            FiberKind::Vector(r) => write!(f, "vector({r})"),
            FiberKind::Matrix(r) => write!(f, "matrix({r})"),
        }
    }
}

/// A form of any fiber kind; the common payload type of module elements.
#[derive(Clone, Debug, PartialEq)]
pub struct Payload {
    kind: FiberKind,
    parts: Vec<Form>,
}

impl Payload {
    pub fn zero(n: usize, kind: FiberKind, degree: i32) -> Self {
        Payload {
            kind,
            parts: vec![Form::zero(n, degree); kind.len()],
        }
    }

    pub fn kind(&self) -> FiberKind {
        self.kind
    }

    pub fn as_form(&self) -> Option<&Form> {
        (self.kind == FiberKind::Scalar).then(|| &self.parts[0])
    }

    pub fn to_vector(&self) -> Option<VectorForm> {
        matches!(self.kind, FiberKind::Vector(_)).then(|| VectorForm::new(self.parts.clone()).expect("uniform"))
    }

    pub fn to_matrix(&self) -> Option<MatrixForm> {
        match self.kind {
            FiberKind::Matrix(r) => Some(MatrixForm::new(r, self.parts.clone()).expect("uniform")),
            _ => None,
        }
    }

    /// Exterior product composing fiber values in order.
    pub fn wedge(&self, other: &Payload) -> Result<Payload> {
        use FiberKind::*;
        let kind = self.kind.product(other.kind)?;
        let parts = match (self.kind, other.kind) {
            (Scalar, _) => other.left_wedge(&self.parts[0])?.parts,
            (_, Scalar) => self.right_wedge(&other.parts[0])?.parts,
            (Matrix(_), Matrix(_)) => {
                let m = self.to_matrix().unwrap().wedge(&other.to_matrix().unwrap())?;
                m.parts().to_vec()
            }
            (Matrix(_), Vector(_)) => {
                let v = self.to_matrix().unwrap().wedge(&other.to_vector().unwrap())?;
                v.parts().to_vec()
            }
            _ => unreachable!("rejected by FiberKind::product"),
        };
        Ok(Payload { kind, parts })
    }
}

impl FormLike for Payload {
    fn parts(&self) -> &[Form] {
        &self.parts
    }

    fn with_parts(&self, parts: Vec<Form>) -> Self {
        debug_assert_eq!(parts.len(), self.parts.len());
        Payload { kind: self.kind, parts }
    }
}

impl From<Form> for Payload {
    fn from(f: Form) -> Self {
        Payload {
            kind: FiberKind::Scalar,
            parts: vec![f],
        }
    }
}

impl From<VectorForm> for Payload {
    fn from(v: VectorForm) -> Self {
        Payload {
            kind: FiberKind::Vector(v.rank()),
            parts: v.parts().to_vec(),
        }
    }
}

impl From<MatrixForm> for Payload {
    fn from(m: MatrixForm) -> Self {
        Payload {
            kind: FiberKind::Matrix(m.rank()),
            parts: m.parts().to_vec(),
        }
    }
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FiberKind::Scalar => write!(f, "{}", self.parts[0]),
            FiberKind::Vector(_) => write!(f, "{}", self.to_vector().unwrap()),
            FiberKind::Matrix(_) => write!(f, "{}", self.to_matrix().unwrap()),
        }
    }
}

/// `(side, s)` of the slot with the given grading. Gradings outside
/// `0..=2n+1` map to slots with `s` outside `0..=n`, which hold only zero.
pub fn position_of_grading(n: usize, grading: i32) -> (Side, i32) {
    let n = n as i32;
    if grading <= n {
        (Side::Plus, grading)
    } else {
        (Side::Minus, 2 * n + 1 - grading)
    }
}

pub fn grading_of(n: usize, side: Side, s: i32) -> i32 {
    match side {
        Side::Plus => s,
        Side::Minus => 2 * n as i32 + 1 - s,
    }
}

/// An element of `P^s_+` or `P^s_-`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimElement {
    side: Side,
    s: i32,
    payload: Payload,
}

impl PrimElement {
    /// Checks primitivity and that the payload degree fits the slot.
    pub fn new(side: Side, payload: impl Into<Payload>) -> Result<Self> {
        let payload = payload.into();
        let s = payload.degree();
        let n = payload.n() as i32;
        if !payload.is_zero() && !(0..=n).contains(&s) {
            return Err(Error::InvalidArgument(format!("primitive degree {s} outside 0..={n}")));
        }
        if !is_primitive(&payload) {
            return Err(Error::NotPrimitive { degree: s });
        }
        Ok(PrimElement { side, s, payload })
    }

    pub fn plus(payload: impl Into<Payload>) -> Result<Self> {
        Self::new(Side::Plus, payload)
    }

    pub fn minus(payload: impl Into<Payload>) -> Result<Self> {
        Self::new(Side::Minus, payload)
    }

    /// The zero element at a grading, possibly outside the complex.
    pub fn zero_at(n: usize, kind: FiberKind, grading: i32) -> Self {
        let (side, s) = position_of_grading(n, grading);
        PrimElement {
            side,
            s,
            payload: Payload::zero(n, kind, s),
        }
    }

    /// The element at `grading` with the given payload; checks degree and
    /// primitivity.
    pub fn at(grading: i32, payload: Payload) -> Result<Self> {
        let n = payload.n();
        let (side, s) = position_of_grading(n, grading);
        if payload.is_zero() {
            return Ok(Self::zero_at(n, payload.kind, grading));
        }
        if payload.degree() != s {
            return Err(Error::DegreeMismatch {
                left: payload.degree(),
                right: s,
            });
        }
        Self::new(side, payload)
    }

    /// Builds the element at `grading` from a payload of matching degree; the
    /// payload must vanish if the slot is outside the complex.
    fn at_grading(grading: i32, payload: Payload) -> Self {
        let n = payload.n();
        let (side, s) = position_of_grading(n, grading);
        if payload.is_zero() || !(0..=n as i32).contains(&s) {
            debug_assert!(payload.is_zero(), "nonzero payload outside the complex");
            return Self::zero_at(n, payload.kind, grading);
        }
        debug_assert_eq!(payload.degree(), s);
        PrimElement { side, s, payload }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn s(&self) -> i32 {
        self.s
    }

    pub fn n(&self) -> usize {
        self.payload.n()
    }

    pub fn grading(&self) -> i32 {
        grading_of(self.n(), self.side, self.s)
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn kind(&self) -> FiberKind {
        self.payload.kind
    }

    pub fn is_zero(&self) -> bool {
        self.payload.is_zero()
    }

    pub fn checked_add(&self, other: &PrimElement) -> Result<PrimElement> {
        if self.kind() != other.kind() {
            return Err(Error::IncomposableFibers {
                left: self.kind().to_string(),
                right: other.kind().to_string(),
            });
        }
        if self.grading() != other.grading() {
            if other.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(other.clone());
            }
            return Err(Error::PositionMismatch(format!(
                "gradings {} and {}",
                self.grading(),
                other.grading()
            )));
        }
        Ok(PrimElement {
            side: self.side,
            s: self.s,
            payload: self.payload.checked_add(&other.payload)?,
        })
    }

    pub fn checked_sub(&self, other: &PrimElement) -> Result<PrimElement> {
        self.checked_add(&other.negated())
    }

    pub fn negated(&self) -> PrimElement {
        self.map_payload(|p| p.negated())
    }

    pub fn map_payload(&self, f: impl FnOnce(&Payload) -> Payload) -> PrimElement {
        PrimElement {
            side: self.side,
            s: self.s,
            payload: f(&self.payload),
        }
    }
}

impl fmt::Display for PrimElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.side {
            Side::Plus => '+',
            Side::Minus => '-',
        };
        write!(f, "P^{}_{}: {}", self.s, sign, self.payload)
    }
}

fn sign_pow(e: i32) -> bool {
    e.rem_euclid(2) == 1
}

fn negate_if(p: Payload, neg: bool) -> Payload {
    if neg {
        p.negated()
    } else {
        p
    }
}

/// The differential of the primitive complex.
pub fn m1(a: &PrimElement) -> Result<PrimElement> {
    let n = a.n() as i32;
    let out_grading = a.grading() + 1;
    if a.is_zero() || !(0..=n).contains(&a.s) {
        return Ok(PrimElement::zero_at(a.n(), a.kind(), out_grading));
    }
    let b = &a.payload;
    let value = match a.side {
        Side::Plus if a.s < n => del_plus(b)?,
        Side::Plus => del_plus(&del_minus(b)?)?.negated(),
        Side::Minus => del_minus(b)?.negated(),
    };
    Ok(PrimElement::at_grading(out_grading, value))
}

/// The product.
pub fn m2(a: &PrimElement, b: &PrimElement) -> Result<PrimElement> {
    check_chart(a, b)?;
    let kind = a.kind().product(b.kind())?;
    let n = a.n();
    let grading = a.grading() + b.grading();
    let zero = || PrimElement::zero_at(n, kind, grading);
    if a.is_zero() || b.is_zero() {
        return Ok(zero());
    }
    let (beta, gamma) = (&a.payload, &b.payload);
    let j = a.s;
    let value = match (a.side, b.side) {
        (Side::Plus, Side::Plus) => {
            let bg = beta.wedge(gamma)?;
            let first = pi(&bg);
            let bracket = l_power(-1, &bg)
                .exterior_d()
                .negated()
                .plus(&del_minus(beta)?.wedge(gamma)?)
                .plus(&negate_if(beta.wedge(&del_minus(gamma)?)?, sign_pow(j)));
            let second = pi(&star_r(&bracket));
            // at most one of the two terms is nonzero; each sits in the slot
            // of its own degree
            let (side, s) = position_of_grading(n, grading);
            match side {
                Side::Plus => {
                    debug_assert!(second.is_zero());
                    debug_assert_eq!(first.degree(), s);
                    first
                }
                Side::Minus => {
                    debug_assert!(first.is_zero());
                    second
                }
            }
        }
        (Side::Plus, Side::Minus) => negate_if(star_r(&beta.wedge(&star_r(gamma))?), sign_pow(j)),
        (Side::Minus, Side::Plus) => star_r(&star_r(beta).wedge(gamma)?),
        (Side::Minus, Side::Minus) => return Ok(zero()),
    };
    Ok(PrimElement::at_grading(grading, value))
}

/// The associator correction; nonzero only on three plus-side inputs whose
/// degrees sum to at least `n + 2`.
pub fn m3(a: &PrimElement, b: &PrimElement, c: &PrimElement) -> Result<PrimElement> {
    check_chart(a, b)?;
    check_chart(b, c)?;
    let kind = a.kind().product(b.kind())?.product(c.kind())?;
    let n = a.n();
    let grading = a.grading() + b.grading() + c.grading() - 1;
    let all_plus = [a, b, c].iter().all(|e| e.side == Side::Plus);
    if !all_plus || a.s + b.s + c.s < n as i32 + 2 || [a, b, c].iter().any(|e| e.is_zero()) {
        return Ok(PrimElement::zero_at(n, kind, grading));
    }
    let (beta, gamma, sigma) = (&a.payload, &b.payload, &c.payload);
    let left = beta.wedge(&l_power(-1, &gamma.wedge(sigma)?))?;
    let right = l_power(-1, &beta.wedge(gamma)?).wedge(sigma)?;
    let value = pi(&star_r(&left.minus(&right)));
    Ok(PrimElement::at_grading(grading, value))
}

fn check_chart(a: &PrimElement, b: &PrimElement) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}

/// A graded algebra with higher products `m_1, m_2, ...`.
pub trait AInfinity {
    type Elem: Clone;

    fn grading(&self, a: &Self::Elem) -> i32;

    /// `m_k` on `args.len() = k` inputs.
    fn m(&self, args: &[Self::Elem]) -> Result<Self::Elem>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn negate(&self, a: &Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Largest arity with a possibly nonzero product, if finite.
    fn max_arity(&self) -> Option<usize> {
        None
    }
}

/// The primitive-form algebra, extended to vector and matrix fibers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Tty;

impl AInfinity for Tty {
    type Elem = PrimElement;

    fn grading(&self, a: &PrimElement) -> i32 {
        a.grading()
    }

    fn m(&self, args: &[PrimElement]) -> Result<PrimElement> {
        match args {
            [a] => m1(a),
            [a, b] => m2(a, b),
            [a, b, c] => m3(a, b, c),
            [first, rest @ ..] if !rest.is_empty() => {
                let mut kind = first.kind();
                let mut grading = first.grading();
                for e in rest {
                    check_chart(first, e)?;
                    kind = kind.product(e.kind())?;
                    grading += e.grading();
                }
                Ok(PrimElement::zero_at(first.n(), kind, grading + 2 - args.len() as i32))
            }
            _ => Err(Error::InvalidArgument("m_k needs k >= 1 inputs".into())),
        }
    }

    fn add(&self, a: &PrimElement, b: &PrimElement) -> Result<PrimElement> {
        a.checked_add(b)
    }

    fn negate(&self, a: &PrimElement) -> PrimElement {
        a.negated()
    }

    fn is_zero(&self, a: &PrimElement) -> bool {
        a.is_zero()
    }

    fn max_arity(&self) -> Option<usize> {
        Some(3)
    }
}

/// Left-hand side of the arity-`k` Stasheff relation evaluated on `inputs`
/// (`k = inputs.len()`); vanishes in an A-infinity algebra.
pub fn stasheff_residual<A: AInfinity>(alg: &A, inputs: &[A::Elem]) -> Result<A::Elem> {
    let k = inputs.len();
    if k == 0 {
        return Err(Error::InvalidArgument("Stasheff relation needs at least one input".into()));
    }
    let mut acc: Option<A::Elem> = None;
    for s in 1..=k {
        for r in 0..=k - s {
            let t = k - s - r;
            let koszul: i32 = inputs[..r].iter().map(|a| alg.grading(a)).sum::<i32>() * s as i32;
            let sign = r as i32 + (s * t) as i32 + koszul;
            let inner = alg.m(&inputs[r..r + s])?;
            let mut args: Vec<A::Elem> = inputs[..r].to_vec();
            args.push(inner);
            args.extend_from_slice(&inputs[r + s..]);
            let mut term = alg.m(&args)?;
            if sign_pow(sign) {
                term = alg.negate(&term);
            }
            acc = Some(match acc {
                None => term,
                Some(a) => alg.add(&a, &term)?,
            });
        }
    }
    Ok(acc.expect("k >= 1"))
}

/// Outcome of one Stasheff relation on random inputs.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub k: usize,
    pub trials: usize,
    pub failures: usize,
    /// Inputs and residual of the first failure.
    pub counterexample: Option<(Vec<PrimElement>, PrimElement)>,
}

/// Evaluates the Stasheff relations of arity `1..=max_k` on `trials` random
/// tuples each, all drawn from one generator seeded with `seed`.
pub fn check_stasheff(n: usize, kind: FiberKind, max_k: usize, trials: usize, seed: u64, sizes: &Sizes) -> Result<Vec<RelationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        let mut report = RelationReport {
            k,
            trials,
            failures: 0,
            counterexample: None,
        };
        for _ in 0..trials {
            let inputs: Vec<_> = (0..k).map(|_| prim_element(&mut rng, n, kind, sizes)).collect();
            let res = stasheff_residual(&Tty, &inputs)?;
            if !res.is_zero() {
                report.failures += 1;
                report.counterexample.get_or_insert((inputs, res));
            }
        }
        out.push(report);
    }
    Ok(out)
}
