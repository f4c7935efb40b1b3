//! Connections `d + A` on the trivial rank-`r` bundle over a Darboux chart.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forms::{Form, FormLike, MatrixForm, VectorForm, Wedge};
use crate::lefschetz::{l_power, pi};
use crate::linalg;
use crate::scalars::Rational;

/// Primitive 1-form with `d lambda = omega`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LambdaChoice {
    /// `sum x_i dy_i`
    #[default]
    Standard,
    /// `1/2 sum (x_i dy_i - y_i dx_i)`
    Symmetric,
}

impl LambdaChoice {
    pub fn form(self, n: usize) -> Form {
        match self {
            LambdaChoice::Standard => Form::lambda_standard(n),
            LambdaChoice::Symmetric => Form::lambda_symmetric(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    a: MatrixForm,
}

impl Connection {
    /// `a` must be a 1-form (or zero).
    pub fn new(a: MatrixForm) -> Result<Self> {
        let a = if a.is_zero() { a.zero_of_degree(1) } else { a };
        if a.degree() != 1 {
            return Err(Error::DegreeMismatch {
                left: a.degree(),
                right: 1,
            });
        }
        Ok(Connection { a })
    }

    pub fn trivial(n: usize, rank: usize) -> Self {
        Connection {
            a: MatrixForm::zero(n, rank, 1),
        }
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn rank(&self) -> usize {
        self.a.rank()
    }

    pub fn a(&self) -> &MatrixForm {
        &self.a
    }

    /// Maximum coefficient degree of `A` (0 for `A = 0`).
    pub fn coefficient_degree(&self) -> u32 {
        self.a.max_coefficient_degree().unwrap_or(0)
    }

    /// `F = dA + A /\ A`.
    pub fn curvature(&self) -> MatrixForm {
        self.a.exterior_d().plus(&self.a.wedge(&self.a).expect("same rank"))
    }

    /// `Phi = L^{-1} F`.
    pub fn phi(&self) -> MatrixForm {
        l_power(-1, &self.curvature())
    }

    /// `d_A v = dv + A /\ v`.
    pub fn covariant_d(&self, v: &VectorForm) -> Result<VectorForm> {
        Ok(v.exterior_d().plus(&self.a.wedge(v)?))
    }

    /// `d_A m = dm + [A, m]` with the graded commutator.
    pub fn covariant_d_end(&self, m: &MatrixForm) -> Result<MatrixForm> {
        Ok(m.exterior_d().plus(&self.a.commutator(m)?))
    }

    pub fn analyze_flatness(&self) -> FlatnessReport {
        let f = self.curvature();
        let f0 = pi(&f);
        let phi = l_power(-1, &f);
        let d_a_phi = self.covariant_d_end(&phi).expect("same rank");
        let flat = f0.is_zero() && d_a_phi.is_zero();
        let bianchi_consistent = (self.n() >= 2 && f0.is_zero()).then(|| d_a_phi.is_zero());
        FlatnessReport {
            f,
            f0,
            phi,
            d_a_phi,
            is_symplectically_flat: flat,
            bianchi_consistent,
        }
    }

    pub fn is_symplectically_flat(&self) -> bool {
        self.analyze_flatness().is_symplectically_flat
    }

    /// `A' = g A g^{-1} + g d(g^{-1})`.
    pub fn gauge(&self, g: &Gauge) -> Result<Connection> {
        let gag = g.g.wedge(&self.a)?.wedge(&g.g_inv)?;
        let gdg = g.g.wedge(&g.g_inv.exterior_d())?;
        Connection::new(gag.plus(&gdg))
    }

    /// `d_A(Phi omega^{n-1})`; for `F_0 = 0` this is a nonzero multiple of
    /// `*d_A*F`, so it vanishes iff the Yang-Mills equation holds.
    pub fn yang_mills_residual(&self) -> Result<MatrixForm> {
        let report = self.analyze_flatness();
        if !report.f0.is_zero() {
            return Err(Error::PrimitiveCurvature);
        }
        let w = Form::omega_power(self.n(), self.n() as u32 - 1);
        self.covariant_d_end(&report.phi.right_wedge(&w)?)
    }
}

/// Curvature data of a connection.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatnessReport {
    pub f: MatrixForm,
    /// Primitive part of `F`.
    pub f0: MatrixForm,
    /// `L^{-1} F`; `F = F_0 + omega Phi`.
    pub phi: MatrixForm,
    pub d_a_phi: MatrixForm,
    pub is_symplectically_flat: bool,
    /// For `n >= 2` and `F_0 = 0`: whether `d_A Phi = 0` (the Bianchi
    /// identity forces it). `None` when the check does not apply.
    pub bianchi_consistent: Option<bool>,
}

/// An invertible 0-form matrix together with its polynomial inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Gauge {
    g: MatrixForm,
    g_inv: MatrixForm,
}

impl Gauge {
    /// Checks `g g_inv = I`.
    pub fn new(g: MatrixForm, g_inv: MatrixForm) -> Result<Self> {
        let id = MatrixForm::identity(g.n(), g.rank());
        let prod = g.wedge(&g_inv)?;
        if g.degree() != 0 || !prod.minus(&id).is_zero() {
            return Err(Error::GaugeInverse);
        }
        Ok(Gauge { g, g_inv })
    }

    pub fn identity(n: usize, rank: usize) -> Self {
        let id = MatrixForm::identity(n, rank);
        Gauge { g: id.clone(), g_inv: id }
    }

    /// `g = I + N` for nilpotent `N`; `g^{-1} = I - N + N^2 - ...`.
    pub fn unipotent(nilpotent: &MatrixForm) -> Result<Self> {
        let n = nilpotent.n();
        let r = nilpotent.rank();
        let id = MatrixForm::identity(n, r);
        let mut inv = id.clone();
        let mut power = id.clone();
        for k in 1..=r {
            power = power.wedge(nilpotent)?;
            if power.is_zero() {
                break;
            }
            inv = if k % 2 == 1 { inv.minus(&power) } else { inv.plus(&power) };
        }
        Gauge::new(id.plus(nilpotent), inv)
    }

    /// A constant invertible matrix.
    pub fn constant(n: usize, rows: &[Vec<Rational>]) -> Result<Self> {
        let inv = linalg::inverse(rows)?;
        Gauge::new(MatrixForm::constant(n, rows)?, MatrixForm::constant(n, &inv)?)
    }

    /// `self` after `other`: `g = g_self g_other`.
    pub fn compose(&self, other: &Gauge) -> Result<Gauge> {
        Gauge::new(self.g.wedge(&other.g)?, other.g_inv.wedge(&self.g_inv)?)
    }

    pub fn g(&self) -> &MatrixForm {
        &self.g
    }

    pub fn g_inv(&self) -> &MatrixForm {
        &self.g_inv
    }

    /// Conjugation `g m g^{-1}`.
    pub fn conjugate(&self, m: &MatrixForm) -> Result<MatrixForm> {
        self.g.wedge(m)?.wedge(&self.g_inv)
    }
}

/// `A = g (Phi_0 lambda) g^{-1} + g d(g^{-1})`: symplectically flat with
/// `Phi = g Phi_0 g^{-1}`.
pub fn generate_flat(n: usize, phi0: &[Vec<Rational>], gauge: &Gauge, lambda: LambdaChoice) -> Result<Connection> {
    let rank = phi0.len();
    if gauge.g.rank() != rank {
        return Err(Error::RankMismatch {
            left: rank,
            right: gauge.g.rank(),
        });
    }
    let a = MatrixForm::constant(n, phi0)?.right_wedge(&lambda.form(n))?;
    Connection::new(a)?.gauge(gauge)
}

/// `A = Phi_0 lambda`, the canonical frame.
pub fn canonical_flat(n: usize, phi0: &[Vec<Rational>], lambda: LambdaChoice) -> Result<Connection> {
    generate_flat(n, phi0, &Gauge::identity(n, phi0.len()), lambda)
}

/// Checks a candidate constant `Phi_0` against a flatness report:
/// `Phi = g Phi_0 g^{-1}`.
pub fn phi_matches(report: &FlatnessReport, gauge: &Gauge, phi0: &[Vec<Rational>]) -> Result<bool> {
    let n = report.phi.n();
    let expected = gauge.conjugate(&MatrixForm::constant(n, phi0)?)?;
    Ok(report.phi.minus(&expected).is_zero())
}

/// Identity matrix rows.
pub fn identity_rows(rank: usize) -> Vec<Vec<Rational>> {
    (0..rank)
        .map(|i| (0..rank).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}
