//! The twisted cone complex `C^j = Omega^j(E) + theta Omega^{j-1}(E)` with
//! `d theta = omega` and `D_C = d_A - theta Phi`, and its comparison maps to
//! the twisted primitive complex.
//!
//! `theta` is never stored: an element is a pair `(eta, xi)` standing for
//! `eta + theta xi`, and
//!
//! ```text
//! D_C(eta, xi) = (d_A eta + omega xi, -(Phi eta + d_A xi)).
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::forms::{Form, FormLike};
use crate::lefschetz::{decompose, l_power, LefschetzComponents};
use crate::random::{payload, prim_element_at, Sizes};
use crate::tty::{position_of_grading, FiberKind, Payload, PrimElement, Side};
use crate::twist::{covariant_d, del_minus_a, del_plus_a, twisted_m1, EvalMode};

#[derive(Clone, Debug, PartialEq)]
pub struct ConeElement {
    j: i32,
    eta: Payload,
    xi: Payload,
}

impl ConeElement {
    /// `eta` of degree `j`, `xi` of degree `j - 1` (zero payloads may carry
    /// any degree label).
    pub fn new(j: i32, eta: Payload, xi: Payload) -> Result<Self> {
        if eta.kind() != xi.kind() {
            return Err(Error::IncomposableFibers {
                left: eta.kind().to_string(),
                right: xi.kind().to_string(),
            });
        }
        if !eta.is_zero() && eta.degree() != j {
            return Err(Error::DegreeMismatch {
                left: eta.degree(),
                right: j,
            });
        }
        if !xi.is_zero() && xi.degree() != j - 1 {
            return Err(Error::DegreeMismatch {
                left: xi.degree(),
                right: j - 1,
            });
        }
        Ok(ConeElement {
            j,
            eta: eta.zero_of_degree(j).plus(&eta),
            xi: xi.zero_of_degree(j - 1).plus(&xi),
        })
    }

    pub fn zero(n: usize, kind: FiberKind, j: i32) -> Self {
        ConeElement {
            j,
            eta: Payload::zero(n, kind, j),
            xi: Payload::zero(n, kind, j - 1),
        }
    }

    pub fn grading(&self) -> i32 {
        self.j
    }

    pub fn eta(&self) -> &Payload {
        &self.eta
    }

    pub fn xi(&self) -> &Payload {
        &self.xi
    }

    pub fn n(&self) -> usize {
        self.eta.n()
    }

    pub fn kind(&self) -> FiberKind {
        self.eta.kind()
    }

    pub fn is_zero(&self) -> bool {
        self.eta.is_zero() && self.xi.is_zero()
    }

    pub fn checked_add(&self, other: &ConeElement) -> Result<ConeElement> {
        if self.j != other.j {
            if other.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(other.clone());
            }
            return Err(Error::PositionMismatch(format!("cone gradings {} and {}", self.j, other.j)));
        }
        Ok(ConeElement {
            j: self.j,
            eta: self.eta.checked_add(&other.eta)?,
            xi: self.xi.checked_add(&other.xi)?,
        })
    }

    pub fn checked_sub(&self, other: &ConeElement) -> Result<ConeElement> {
        self.checked_add(&other.negated())
    }

    pub fn negated(&self) -> ConeElement {
        ConeElement {
            j: self.j,
            eta: self.eta.negated(),
            xi: self.xi.negated(),
        }
    }
}

impl std::fmt::Display for ConeElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "C^{}: ({}) + theta ({})", self.j, self.eta, self.xi)
    }
}

/// `D_C = d_A - theta Phi`.
pub fn cone_d(c: &Connection, a: &ConeElement) -> Result<ConeElement> {
    let omega = Form::omega(c.n());
    let phi: Payload = c.phi().into();
    let eta = covariant_d(c, &a.eta)?.plus(&a.xi.left_wedge(&omega)?);
    let xi = phi.wedge(&a.eta)?.plus(&covariant_d(c, &a.xi)?).negated();
    ConeElement::new(a.j + 1, eta, xi)
}

/// `Phi` acting on both slots.
pub fn apply_phi(c: &Connection, a: &ConeElement) -> Result<ConeElement> {
    let phi: Payload = c.phi().into();
    ConeElement::new(a.j, phi.wedge(&a.eta)?, phi.wedge(&a.xi)?)
}

/// `G(eta, xi) = (xi, L^{-1} eta)`.
pub fn homotopy_g(a: &ConeElement) -> Result<ConeElement> {
    ConeElement::new(a.j - 1, a.xi.clone(), l_power(-1, &a.eta))
}

/// Primitive components of both slots. `beta_i` in either slot is the
/// primitive component of degree `i` of that slot's decomposition.
#[derive(Clone, Debug)]
pub struct ConeSplit {
    j: i32,
    eta: LefschetzComponents<Payload>,
    xi: LefschetzComponents<Payload>,
    template: Payload,
}

fn component(comps: &LefschetzComponents<Payload>, i: i32, template: &Payload) -> Payload {
    let d = comps.degree();
    if i < 0 || (d - i) < 0 || (d - i) % 2 != 0 {
        return template.zero_of_degree(i);
    }
    comps
        .get(((d - i) / 2) as usize)
        .cloned()
        .unwrap_or_else(|| template.zero_of_degree(i))
}

impl ConeSplit {
    pub fn grading(&self) -> i32 {
        self.j
    }

    /// `beta_i` from the `eta` slot.
    pub fn eta_beta(&self, i: i32) -> Payload {
        component(&self.eta, i, &self.template)
    }

    /// `beta_i` from the `theta` slot.
    pub fn xi_beta(&self, i: i32) -> Payload {
        component(&self.xi, i, &self.template)
    }

    pub fn eta_components(&self) -> &LefschetzComponents<Payload> {
        &self.eta
    }

    pub fn xi_components(&self) -> &LefschetzComponents<Payload> {
        &self.xi
    }
}

/// Decomposes both slots. For `j > n`, with `k = 2n+1-j`, checks that `eta`
/// is divisible by `omega^{n-k+1}` and `xi` by `omega^{n-k}`.
pub fn cone_split(a: &ConeElement) -> Result<ConeSplit> {
    let n = a.n() as i32;
    let split = ConeSplit {
        j: a.j,
        eta: decompose(&a.eta),
        xi: decompose(&a.xi),
        template: a.eta.zero_of_degree(0),
    };
    if a.j > n {
        let k = 2 * n + 1 - a.j;
        let low = |comps: &LefschetzComponents<Payload>, below: i32| comps.nonzero().any(|(r, _)| (r as i32) < below);
        if low(&split.eta, n - k + 1) || low(&split.xi, n - k) {
            return Err(Error::ConeShape { grading: a.j });
        }
    }
    Ok(split)
}

/// `f(alpha_j) = beta_j` for `j <= n`, `-(beta_k + del_{+A} beta_{k-1})` for
/// `j > n`, `k = 2n+1-j`; `beta_{-1} = 0`.
pub fn map_f(c: &Connection, a: &ConeElement) -> Result<PrimElement> {
    let n = c.n() as i32;
    let split = cone_split(a)?;
    if a.j <= n {
        return PrimElement::at(a.j, split.eta_beta(a.j));
    }
    let k = 2 * n + 1 - a.j;
    let beta_k = split.xi_beta(k);
    let value = if k >= 1 {
        beta_k.plus(&del_plus_a(c, &split.eta_beta(k - 1))?)
    } else {
        beta_k
    };
    PrimElement::at(a.j, value.negated())
}

/// `g(beta_j) = beta_j - theta del_{-A} beta_j` on the plus side,
/// `g(beta_k) = -theta omega^{n-k} beta_k` on the minus side.
pub fn map_g(c: &Connection, b: &PrimElement) -> Result<ConeElement> {
    let n = c.n() as i32;
    let j = b.grading();
    if b.is_zero() || !(0..=n).contains(&b.s()) {
        return Ok(ConeElement::zero(c.n(), b.kind(), j));
    }
    let beta = b.payload();
    match b.side() {
        Side::Plus => ConeElement::new(j, beta.clone(), del_minus_a(c, beta)?.negated()),
        Side::Minus => {
            let w = Form::omega_power(c.n(), (n - b.s()) as u32);
            ConeElement::new(j, beta.zero_of_degree(j), beta.left_wedge(&w)?.negated())
        }
    }
}

/// A random cone element of grading `j`.
pub fn random_cone_element<R: rand::Rng>(rng: &mut R, n: usize, kind: FiberKind, j: i32, sizes: &Sizes) -> ConeElement {
    let slot = |rng: &mut R, d: i32| {
        if (0..=2 * n as i32).contains(&d) {
            payload(rng, n, d as usize, kind, sizes)
        } else {
            Payload::zero(n, kind, d)
        }
    };
    let eta = slot(rng, j);
    let xi = slot(rng, j - 1);
    ConeElement::new(j, eta, xi).expect("degrees match")
}

/// Outcome of one identity over many samples.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    /// Input and nonzero residual of the first failure.
    pub counterexample: Option<(String, String)>,
}

impl IdentityCheck {
    pub fn new(name: &'static str) -> Self {
        IdentityCheck {
            name,
            checked: 0,
            failures: 0,
            counterexample: None,
        }
    }

    pub fn record(&mut self, ok: bool, input: impl FnOnce() -> String, residual: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some((input(), residual()));
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug)]
pub struct ChainReport {
    pub checks: Vec<IdentityCheck>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub type MapF = dyn Fn(&Connection, &ConeElement) -> Result<PrimElement>;

/// Checks, on `trials` random samples per identity and grading:
/// `f D_C = m1' f`, `g m1' = D_C g`, `f g = id`,
/// `id - g f - Phi = D_C G + G D_C`, and `D_C(-xi, 0) = Phi alpha` for
/// closed `alpha`. Closed samples are `D_C`-images of random elements plus
/// any supplied in `closed`.
pub fn check_chain_identities(
    c: &Connection,
    trials: usize,
    seed: u64,
    sizes: &Sizes,
    closed: &[ConeElement],
) -> Result<ChainReport> {
    check_chain_identities_with(c, trials, seed, sizes, closed, &map_f)
}

/// As [`check_chain_identities`] with a replaceable `f`.
pub fn check_chain_identities_with(
    c: &Connection,
    trials: usize,
    seed: u64,
    sizes: &Sizes,
    closed: &[ConeElement],
    f: &MapF,
) -> Result<ChainReport> {
    let n = c.n();
    let kind = FiberKind::Vector(c.rank());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f_chain = IdentityCheck::new("f_chain_map");
    let mut g_chain = IdentityCheck::new("g_chain_map");
    let mut fg = IdentityCheck::new("fg_identity");
    let mut homotopy = IdentityCheck::new("homotopy");
    let mut phi_exact = IdentityCheck::new("phi_exact");
    let top = 2 * n as i32 + 1;
    let mode = EvalMode::Fast;

    for t in 0..trials {
        let j = (t as i32) % (top + 1);
        let alpha = random_cone_element(&mut rng, n, kind, j, sizes);

        if j < top {
            let lhs = f(c, &cone_d(c, &alpha)?)?;
            let rhs = twisted_m1(c, &f(c, &alpha)?, mode)?;
            let res = lhs.checked_sub(&rhs)?;
            f_chain.record(res.is_zero(), || alpha.to_string(), || res.to_string());
        }

        let gf = map_g(c, &f(c, &alpha)?)?;
        let lhs = alpha.checked_sub(&gf)?.checked_sub(&apply_phi(c, &alpha)?)?;
        let rhs = cone_d(c, &homotopy_g(&alpha)?)?.checked_add(&homotopy_g(&cone_d(c, &alpha)?)?)?;
        let res = lhs.checked_sub(&rhs)?;
        homotopy.record(res.is_zero(), || alpha.to_string(), || res.to_string());

        let (side, s) = position_of_grading(n, j);
        let b = prim_element_at(&mut rng, n, side, s as usize, kind, sizes);
        if j < top {
            let lhs = map_g(c, &twisted_m1(c, &b, mode)?)?;
            let rhs = cone_d(c, &map_g(c, &b)?)?;
            let res = lhs.checked_sub(&rhs)?;
            g_chain.record(res.is_zero(), || b.to_string(), || res.to_string());
        }
        let res = f(c, &map_g(c, &b)?)?.checked_sub(&b)?;
        fg.record(res.is_zero(), || b.to_string(), || res.to_string());

        if j >= 1 {
            let prev = random_cone_element(&mut rng, n, kind, j - 1, sizes);
            let exact = cone_d(c, &prev)?;
            check_phi_exact(c, &exact, &mut phi_exact)?;
        }
    }
    for a in closed {
        check_phi_exact(c, a, &mut phi_exact)?;
    }
    Ok(ChainReport {
        checks: vec![f_chain, g_chain, fg, homotopy, phi_exact],
    })
}

/// For closed `alpha = (eta, xi)`: `D_C(-xi, 0) = Phi alpha`.
fn check_phi_exact(c: &Connection, alpha: &ConeElement, out: &mut IdentityCheck) -> Result<()> {
    if !cone_d(c, alpha)?.is_zero() {
        return Err(Error::InvalidArgument(format!("sample {alpha} is not D_C-closed")));
    }
    let pre = ConeElement::new(alpha.j - 1, alpha.xi.negated(), alpha.xi.zero_of_degree(alpha.j - 2))?;
    let res = cone_d(c, &pre)?.checked_sub(&apply_phi(c, alpha)?)?;
    out.record(res.is_zero(), || alpha.to_string(), || res.to_string());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{canonical_flat, LambdaChoice};
    use crate::forms::{MatrixForm, VectorForm};
    use crate::scalars::{int, Poly};

    fn vec1(f: Form) -> Payload {
        VectorForm::new(vec![f]).unwrap().into()
    }

    #[test]
    fn split_examples() {
        let n = 2;
        let a = ConeElement::new(2, vec1(Form::omega(n)), vec1(Form::zero(n, 1))).unwrap();
        let s = cone_split(&a).unwrap();
        assert!(s.eta_beta(2).is_zero());
        assert_eq!(s.eta_beta(0), vec1(Form::one(n)));

        let beta = Form::dx(n, 1).mul_poly(&Poly::y(n, 2));
        let a = ConeElement::new(2, vec1(Form::zero(n, 2)), vec1(beta.clone())).unwrap();
        assert_eq!(cone_split(&a).unwrap().xi_beta(1), vec1(beta));
    }

    #[test]
    fn split_round_trips_above_middle() {
        let sizes = Sizes::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 3;
        let kind = FiberKind::Vector(2);
        for k in 0..=n as i32 {
            let j = 2 * n as i32 + 1 - k;
            let b_k = crate::random::primitive_payload(&mut rng, n, k as usize, kind, &sizes);
            let b_km1 = if k >= 1 {
                crate::random::primitive_payload(&mut rng, n, k as usize - 1, kind, &sizes)
            } else {
                Payload::zero(n, kind, -1)
            };
            let eta = b_km1.left_wedge(&Form::omega_power(n, (n as i32 - k + 1) as u32)).unwrap();
            let xi = b_k.left_wedge(&Form::omega_power(n, (n as i32 - k) as u32)).unwrap();
            let a = ConeElement::new(j, eta, xi).unwrap();
            let s = cone_split(&a).unwrap();
            assert_eq!(s.xi_beta(k), b_k);
            assert!(s.eta_beta(k - 1).minus(&b_km1).is_zero());
        }
    }

    #[test]
    fn homotopy_examples() {
        let n = 2;
        let a = ConeElement::new(2, vec1(Form::omega(n)), vec1(Form::zero(n, 1))).unwrap();
        let g = homotopy_g(&a).unwrap();
        assert!(g.eta().is_zero());
        assert_eq!(g.xi(), &vec1(Form::one(n)));
        let b = ConeElement::new(1, vec1(Form::dx(n, 1)), vec1(Form::zero(n, 0))).unwrap();
        assert!(homotopy_g(&b).unwrap().is_zero());
        let xi = vec1(Form::dy(n, 2));
        let a = ConeElement::new(2, vec1(Form::zero(n, 2)), xi.clone()).unwrap();
        let g = homotopy_g(&a).unwrap();
        assert_eq!(g.eta(), &xi);
        assert_eq!(g.grading(), 1);
    }

    #[test]
    fn f_and_g_examples() {
        let n = 1;
        let phi0 = vec![vec![int(1), int(0)], vec![int(0), int(0)]];
        let c = canonical_flat(n, &phi0, LambdaChoice::Standard).unwrap();
        let v: Payload = VectorForm::constant(n, &[int(2), int(3)]).into();
        let b = PrimElement::plus(v.clone()).unwrap();
        let g = map_g(&c, &b).unwrap();
        assert_eq!(g.eta(), &v);
        assert!(g.xi().is_zero());
        assert_eq!(map_f(&c, &g).unwrap(), b);

        let m = PrimElement::minus(v.clone()).unwrap();
        let g = map_g(&c, &m).unwrap();
        assert_eq!(g.grading(), 3);
        assert_eq!(g.xi(), &v.left_wedge(&Form::omega(n)).unwrap().negated());
        assert_eq!(map_f(&c, &g).unwrap(), m);
    }

    #[test]
    fn cone_square_detects_flatness() {
        let sizes = Sizes::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let flat = canonical_flat(2, &[vec![int(1), int(1)], vec![int(0), int(2)]], LambdaChoice::Standard).unwrap();
        let f = Form::dx(2, 2).mul_poly(&Poly::x(2, 1));
        let bent = Connection::new(MatrixForm::scalar(2, &f)).unwrap();
        let mut bent_witness = false;
        for j in 0..=5 {
            let a = random_cone_element(&mut rng, 2, FiberKind::Vector(2), j, &sizes);
            assert!(cone_d(&flat, &cone_d(&flat, &a).unwrap()).unwrap().is_zero());
            let b = random_cone_element(&mut rng, 2, FiberKind::Vector(2), j, &sizes);
            bent_witness |= !cone_d(&bent, &cone_d(&bent, &b).unwrap()).unwrap().is_zero();
        }
        assert!(bent_witness);
    }

    #[test]
    fn chain_identities_small() {
        let c = canonical_flat(1, &[vec![int(1), int(0)], vec![int(1), int(0)]], LambdaChoice::Symmetric).unwrap();
        let r = check_chain_identities(&c, 24, 9, &Sizes::default(), &[]).unwrap();
        assert!(r.passed(), "{r:#?}");
        let flipped = |c: &Connection, a: &ConeElement| map_f(c, a).map(|p| p.negated());
        let r = check_chain_identities_with(&c, 24, 9, &Sizes::default(), &[], &flipped).unwrap();
        assert!(!r.check("fg_identity").unwrap().passed());
        assert!(!r.check("homotopy").unwrap().passed());
    }
}
