//! Exact linear algebra on truncated polynomial-coefficient models of the
//! twisted primitive complex and the cone complex.
//!
//! The truncated space at grading `j` and degree bound `D` is spanned by
//! `m * b * e_i`: `m` a monomial of total degree `<= D`, `b` a constant fiber
//! form, `e_i` a unit vector of the rank-`r` fiber. The fiber forms are the
//! constant primitive basis of the slot (primitive kind), or the basis forms
//! of degree `j` for `eta` followed by those of degree `j - 1` for `xi`
//! (cone kind). Basis vectors are ordered lexicographically by
//! (monomial, fiber form, unit), monomials by degree and then exponent
//! vector, so
//!
//! ```text
//! index = (monomial_index * fiber_dim + fiber_index) * r + unit.
//! ```
//!
//! Cohomology at truncation `D` with margin `s` is
//! `dim Z_D - dim(B_{D+s} cap V_D)`, where `Z_D` is the kernel of the
//! differential on `V_D` and `B_{D+s}` the image of the previous space at
//! degree `D + s`. With `M` the matrix of that image and `M_high` its rows on
//! monomials of degree `> D`, the intersection has dimension
//! `rank M - rank M_high`; both ranks come out of one echelon pass whose row
//! order puts high-degree monomials first.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{cone_d, ConeElement, IdentityCheck};
use crate::connection::{Connection, LambdaChoice};
use crate::error::{Error, Result};
use crate::forms::{Form, FormIndex, FormLike};
use crate::lefschetz::primitive_basis;
use crate::linalg::{sparse_kernel, Echelon, Insertion, SparseVec};
use crate::scalars::{int, Monomial, Poly, Rational};
use crate::tty::{m1, m2, position_of_grading, FiberKind, Payload, PrimElement, Side};
use crate::twist::{del_minus_a, del_plus_a, twisted_m1, EvalMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComplexKind {
    Primitive,
    Cone,
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplexKind::Primitive => "prim",
            ComplexKind::Cone => "cone",
        })
    }
}

/// An element of either complex.
#[derive(Clone, Debug, PartialEq)]
pub enum Cochain {
    Prim(PrimElement),
    Cone(ConeElement),
}

impl Cochain {
    pub fn kind(&self) -> ComplexKind {
        match self {
            Cochain::Prim(_) => ComplexKind::Primitive,
            Cochain::Cone(_) => ComplexKind::Cone,
        }
    }

    pub fn grading(&self) -> i32 {
        match self {
            Cochain::Prim(p) => p.grading(),
            Cochain::Cone(c) => c.grading(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Cochain::Prim(p) => p.is_zero(),
            Cochain::Cone(c) => c.is_zero(),
        }
    }

    /// Largest coefficient degree (0 for zero).
    pub fn coefficient_degree(&self) -> u32 {
        let parts: Vec<&Payload> = match self {
            Cochain::Prim(p) => vec![p.payload()],
            Cochain::Cone(c) => vec![c.eta(), c.xi()],
        };
        parts.into_iter().filter_map(|p| p.max_coefficient_degree()).max().unwrap_or(0)
    }

    pub fn checked_sub(&self, other: &Cochain) -> Result<Cochain> {
        match (self, other) {
            (Cochain::Prim(a), Cochain::Prim(b)) => Ok(Cochain::Prim(a.checked_sub(b)?)),
            (Cochain::Cone(a), Cochain::Cone(b)) => Ok(Cochain::Cone(a.checked_sub(b)?)),
            _ => Err(Error::InvalidArgument("cochains of different complexes".into())),
        }
    }

    /// Slot-wise DSL strings: one per fiber component (two per component,
    /// `eta` then `xi`, for the cone).
    pub fn components(&self) -> Vec<String> {
        match self {
            Cochain::Prim(p) => p.payload().parts().iter().map(Form::to_string).collect(),
            Cochain::Cone(c) => c
                .eta()
                .parts()
                .iter()
                .zip(c.xi().parts())
                .flat_map(|(e, x)| [e.to_string(), x.to_string()])
                .collect(),
        }
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cochain::Prim(p) => write!(f, "{p}"),
            Cochain::Cone(c) => write!(f, "{c}"),
        }
    }
}

/// The differential of the complex: `m1'` (branch table) or `D_C`.
pub fn differential(c: &Connection, a: &Cochain) -> Result<Cochain> {
    match a {
        Cochain::Prim(p) => Ok(Cochain::Prim(twisted_m1(c, p, EvalMode::Fast)?)),
        Cochain::Cone(x) => Ok(Cochain::Cone(cone_d(c, x)?)),
    }
}

/// Highest grading of either complex.
pub fn top_grading(n: usize) -> i32 {
    2 * n as i32 + 1
}

/// `P^s_+`, `P^s_-` or `C^j`.
pub fn position_label(kind: ComplexKind, n: usize, grading: i32) -> String {
    match kind {
        ComplexKind::Primitive => {
            let (side, s) = position_of_grading(n, grading);
            let sign = if side == Side::Plus { '+' } else { '-' };
            format!("P^{s}_{sign}")
        }
        ComplexKind::Cone => format!("C^{grading}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FiberForm {
    Prim(usize),
    Eta(FormIndex),
    Xi(FormIndex),
}

/// A finite model of one position of a complex; see the module docs for the
/// basis order.
#[derive(Clone, Debug)]
pub struct TruncatedSpace {
    kind: ComplexKind,
    n: usize,
    rank: usize,
    grading: i32,
    max_deg: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    fiber: Vec<FiberForm>,
}

impl TruncatedSpace {
    pub fn new(kind: ComplexKind, n: usize, rank: usize, grading: i32, max_deg: u32) -> Self {
        let top = top_grading(n);
        let fiber = if !(0..=top).contains(&grading) {
            Vec::new()
        } else {
            match kind {
                ComplexKind::Primitive => {
                    let (_, s) = position_of_grading(n, grading);
                    (0..primitive_basis(n, s as usize).dim()).map(FiberForm::Prim).collect()
                }
                ComplexKind::Cone => {
                    let j = grading as usize;
                    let mut f: Vec<FiberForm> = Vec::new();
                    if j <= 2 * n {
                        f.extend(FormIndex::all_of_degree(n, j).into_iter().map(FiberForm::Eta));
                    }
                    if j >= 1 {
                        f.extend(FormIndex::all_of_degree(n, j - 1).into_iter().map(FiberForm::Xi));
                    }
                    f
                }
            }
        };
        let monomials = Monomial::enumerate(n, max_deg);
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        TruncatedSpace {
            kind,
            n,
            rank,
            grading,
            max_deg,
            monomials,
            index,
            fiber,
        }
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn grading(&self) -> i32 {
        self.grading
    }

    pub fn max_deg(&self) -> u32 {
        self.max_deg
    }

    /// Number of constant fiber forms.
    pub fn fiber_dim(&self) -> usize {
        self.fiber.len()
    }

    /// Basis vectors per monomial.
    fn block(&self) -> usize {
        self.fiber.len() * self.rank
    }

    pub fn dim(&self) -> usize {
        self.monomials.len() * self.block()
    }

    /// Number of monomials of degree at most `deg`; they are the first ones.
    pub fn monomials_up_to(&self, deg: u32) -> usize {
        self.monomials.partition_point(|m| m.degree() <= deg)
    }

    /// Coefficient degree of basis vector `idx`.
    pub fn degree_of(&self, idx: usize) -> u32 {
        self.monomials[idx / self.block()].degree()
    }

    fn payload_kind(&self) -> FiberKind {
        FiberKind::Vector(self.rank)
    }

    /// The element with the given coordinates.
    pub fn element(&self, coords: &[(usize, Rational)]) -> Result<Cochain> {
        let n = self.n;
        let r = self.rank;
        let f_dim = self.fiber.len();
        // coefficient polynomial per (fiber form, unit)
        let mut polys = vec![Poly::zero(n); f_dim * r];
        for (idx, c) in coords {
            if *idx >= self.dim() {
                return Err(Error::InvalidArgument(format!("coordinate {idx} outside a space of dimension {}", self.dim())));
            }
            let (mono, rem) = (idx / self.block(), idx % self.block());
            polys[rem].add_term(self.monomials[mono].clone(), c.clone());
        }
        let j = self.grading;
        match self.kind {
            ComplexKind::Primitive => {
                let (_, s) = position_of_grading(n, j);
                if f_dim == 0 {
                    return Ok(Cochain::Prim(PrimElement::zero_at(n, self.payload_kind(), j)));
                }
                let basis = primitive_basis(n, s as usize);
                let parts = (0..r)
                    .map(|unit| {
                        let coeffs: Vec<Poly> = (0..f_dim).map(|f| polys[f * r + unit].clone()).collect();
                        basis.assemble(&coeffs)
                    })
                    .collect();
                let payload = Payload::zero(n, self.payload_kind(), s).with_parts(parts);
                Ok(Cochain::Prim(PrimElement::at(j, payload)?))
            }
            ComplexKind::Cone => {
                let mut eta = vec![Form::zero(n, j); r];
                let mut xi = vec![Form::zero(n, j - 1); r];
                for (f, slot) in self.fiber.iter().enumerate() {
                    for unit in 0..r {
                        let p = &polys[f * r + unit];
                        if p.is_zero() {
                            continue;
                        }
                        match slot {
                            FiberForm::Eta(i) => eta[unit].add_term(*i, p.clone()),
                            FiberForm::Xi(i) => xi[unit].add_term(*i, p.clone()),
                            FiberForm::Prim(_) => unreachable!("cone spaces hold no primitive slots"),
                        }
                    }
                }
                let kind = self.payload_kind();
                let eta = Payload::zero(n, kind, j).with_parts(eta);
                let xi = Payload::zero(n, kind, j - 1).with_parts(xi);
                Ok(Cochain::Cone(ConeElement::new(j, eta, xi)?))
            }
        }
    }

    pub fn basis_element(&self, idx: usize) -> Result<Cochain> {
        self.element(&[(idx, int(1))])
    }

    /// Coordinates of `a` in this space, sorted by index. Fails with
    /// `InsufficientTruncation` if a coefficient exceeds the degree bound.
    pub fn coordinates(&self, a: &Cochain) -> Result<SparseVec> {
        if a.kind() != self.kind {
            return Err(Error::InvalidArgument(format!("a {} cochain in a {} space", a.kind(), self.kind)));
        }
        if a.is_zero() {
            return Ok(Vec::new());
        }
        if a.grading() != self.grading {
            return Err(Error::PositionMismatch(format!("grading {} in a space of grading {}", a.grading(), self.grading)));
        }
        let r = self.rank;
        // (fiber index, unit) -> coefficient polynomial
        let mut entries: Vec<(usize, Poly)> = Vec::new();
        match a {
            Cochain::Prim(p) => {
                check_rank(p.payload(), r)?;
                let basis = primitive_basis(self.n, p.s() as usize);
                for (unit, part) in p.payload().parts().iter().enumerate() {
                    for (f, poly) in basis.coordinates(part).into_iter().enumerate() {
                        entries.push((f * r + unit, poly));
                    }
                }
            }
            Cochain::Cone(c) => {
                check_rank(c.eta(), r)?;
                for (f, slot) in self.fiber.iter().enumerate() {
                    let (payload, idx) = match slot {
                        FiberForm::Eta(i) => (c.eta(), *i),
                        FiberForm::Xi(i) => (c.xi(), *i),
                        FiberForm::Prim(_) => unreachable!("cone spaces hold no primitive slots"),
                    };
                    for (unit, part) in payload.parts().iter().enumerate() {
                        entries.push((f * r + unit, part.coefficient(idx)));
                    }
                }
            }
        }
        let mut out = Vec::new();
        for (rem, poly) in entries {
            for (m, c) in poly.terms() {
                let Some(&mono) = self.index.get(m) else {
                    return Err(Error::InsufficientTruncation {
                        given: self.max_deg,
                        required: m.degree(),
                    });
                };
                out.push((mono * self.block() + rem, c.clone()));
            }
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }

    /// Reindexes so that monomials of higher degree come first; the first
    /// `(monomials - monomials_up_to(d)) * block` indices are then exactly the
    /// basis vectors of degree `> d`.
    fn descending(&self, v: &[(usize, Rational)]) -> SparseVec {
        let b = self.block();
        let last = self.monomials.len() - 1;
        let mut out: SparseVec = v.iter().map(|(i, c)| ((last - i / b) * b + i % b, c.clone())).collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    /// Coordinates in the descending order of `self` of a vector given in the
    /// ascending order of a smaller space of the same position.
    fn descending_from(&self, smaller: &TruncatedSpace, v: &[(usize, Rational)]) -> SparseVec {
        debug_assert_eq!(smaller.block(), self.block());
        debug_assert!(smaller.max_deg <= self.max_deg);
        self.descending(v)
    }
}

fn check_rank(p: &Payload, rank: usize) -> Result<()> {
    match p.kind() {
        FiberKind::Vector(r) if r == rank => Ok(()),
        FiberKind::Scalar if rank == 1 => Ok(()),
        other => Err(Error::RankMismatch {
            left: rank,
            right: match other {
                FiberKind::Scalar => 1,
                FiberKind::Vector(r) | FiberKind::Matrix(r) => r,
            },
        }),
    }
}

/// Bound on how much one application of the differential leaving grading
/// `j` can raise coefficient degrees: `deg A` per covariant derivative (two
/// in the middle map), at least `deg Phi` wherever `Phi` acts.
pub fn growth_bound(c: &Connection, kind: ComplexKind, grading: i32) -> u32 {
    let a = c.coefficient_degree();
    let phi = c.phi().max_coefficient_degree().unwrap_or(0);
    match kind {
        ComplexKind::Primitive if grading == c.n() as i32 => (2 * a).max(phi),
        ComplexKind::Primitive => a,
        ComplexKind::Cone => a.max(phi),
    }
}

/// Matrix of the differential from one truncated space to the next.
#[derive(Clone, Debug)]
pub struct LinOpMatrix {
    pub source: TruncatedSpace,
    pub target: TruncatedSpace,
    /// Column `i` is the image of source basis vector `i` in target
    /// coordinates.
    pub columns: Vec<SparseVec>,
}

impl LinOpMatrix {
    pub fn rows(&self) -> usize {
        self.target.dim()
    }

    pub fn cols(&self) -> usize {
        self.source.dim()
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(false);
        for (i, col) in self.columns.iter().enumerate() {
            e.insert(col, i);
        }
        e.rank()
    }

    /// Kernel basis in source coordinates.
    pub fn kernel(&self) -> Vec<SparseVec> {
        sparse_kernel(&self.columns)
    }
}

/// The matrix of `m1'` (primitive kind) or `D_C` (cone kind) from grading
/// `grading` at degree `d_source` into grading `grading + 1` at degree
/// `d_target`.
pub fn assemble_operator(c: &Connection, kind: ComplexKind, grading: i32, d_source: u32, d_target: u32) -> Result<LinOpMatrix> {
    let required = d_source + growth_bound(c, kind, grading);
    if d_target < required {
        return Err(Error::InsufficientTruncation { given: d_target, required });
    }
    let source = TruncatedSpace::new(kind, c.n(), c.rank(), grading, d_source);
    let target = TruncatedSpace::new(kind, c.n(), c.rank(), grading + 1, d_target);
    let columns = (0..source.dim())
        .map(|i| target.coordinates(&differential(c, &source.basis_element(i)?)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(LinOpMatrix { source, target, columns })
}

#[derive(Clone, Debug)]
pub struct PositionReport {
    pub grading: i32,
    pub label: String,
    /// Dimension of the truncated space at degree `D`.
    pub space_dim: usize,
    /// Dimension of the closed subspace at degree `D`.
    pub closed_dim: usize,
    /// Cohomology dimension per margin, margins ascending.
    pub by_margin: Vec<(u32, usize)>,
    /// Value at the largest margin.
    pub dim: usize,
    /// The two largest margins agree.
    pub stabilized: bool,
    /// Closed elements of degree `<= D`, independent modulo exact ones, one
    /// per class.
    pub witnesses: Vec<Cochain>,
}

#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub kind: ComplexKind,
    pub truncation: u32,
    pub margins: Vec<u32>,
    pub positions: Vec<PositionReport>,
}

impl CohomologyReport {
    pub fn dims(&self) -> Vec<usize> {
        self.positions.iter().map(|p| p.dim).collect()
    }

    pub fn stabilized(&self) -> bool {
        self.positions.iter().all(|p| p.stabilized)
    }
}

/// Dimensions of `PH^k_{+-}` at truncation `d`, ordered by grading
/// `P^0_+, ..., P^n_+, P^n_-, ..., P^0_-`.
pub fn cohomology_dims(c: &Connection, d: u32, margins: &[u32]) -> Result<CohomologyReport> {
    dims_for(c, ComplexKind::Primitive, d, margins)
}

/// Dimensions of `H^j_C`, `j = 0..=2n+1`.
pub fn cone_cohomology_dims(c: &Connection, d: u32, margins: &[u32]) -> Result<CohomologyReport> {
    dims_for(c, ComplexKind::Cone, d, margins)
}

/// Either complex.
pub fn dims_for(c: &Connection, kind: ComplexKind, d: u32, margins: &[u32]) -> Result<CohomologyReport> {
    if !c.is_symplectically_flat() {
        return Err(Error::NotFlat);
    }
    let mut margins = margins.to_vec();
    margins.sort_unstable();
    margins.dedup();
    if margins.is_empty() {
        return Err(Error::InvalidArgument("at least one stabilization margin is needed".into()));
    }
    let top = top_grading(c.n());
    let positions = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..=top)
            .map(|j| {
                let margins = &margins;
                scope.spawn(move || position_report(c, kind, j, d, margins))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("cohomology worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(CohomologyReport {
        kind,
        truncation: d,
        margins,
        positions,
    })
}

/// Image of the previous differential from degree `d + s`, for every margin
/// at once: columns go in by ascending degree and ranks are read off at each
/// margin's boundary. Returns the per-margin dimensions of `B_{d+s} cap V_d`,
/// the target space and, at the largest margin, a basis of `B cap V_d` in the
/// target's descending order.
fn exact_part(c: &Connection, kind: ComplexKind, j: i32, d: u32, margins: &[u32]) -> Result<(Vec<usize>, TruncatedSpace, Vec<SparseVec>)> {
    let s_max = *margins.last().expect("margins nonempty");
    let g = growth_bound(c, kind, j - 1);
    let source = TruncatedSpace::new(kind, c.n(), c.rank(), j - 1, d + s_max);
    let target = TruncatedSpace::new(kind, c.n(), c.rank(), j, d + s_max + g);
    let high = (target.monomials.len() - target.monomials_up_to(d)) * target.block();
    let mut echelon = Echelon::new(false);
    let mut out = Vec::with_capacity(margins.len());
    let mut next = 0;
    let low_dim = |e: &Echelon| e.rank() - e.pivots().filter(|p| *p < high).count();
    for i in 0..source.dim() {
        let deg = source.degree_of(i);
        while next < margins.len() && deg > d + margins[next] {
            out.push(low_dim(&echelon));
            next += 1;
        }
        let col = target.coordinates(&differential(c, &source.basis_element(i)?)?)?;
        echelon.insert(&target.descending(&col), i);
    }
    while out.len() < margins.len() {
        out.push(low_dim(&echelon));
    }
    let low_basis = echelon.basis_vectors().into_iter().filter(|v| v[0].0 >= high).collect();
    Ok((out, target, low_basis))
}

fn position_report(c: &Connection, kind: ComplexKind, j: i32, d: u32, margins: &[u32]) -> Result<PositionReport> {
    let n = c.n();
    let top = top_grading(n);
    let space = TruncatedSpace::new(kind, n, c.rank(), j, d);
    let out_space = TruncatedSpace::new(kind, n, c.rank(), j + 1, d + growth_bound(c, kind, j));
    let images = |i: usize| -> Result<SparseVec> {
        if j == top {
            return Ok(Vec::new());
        }
        out_space.coordinates(&differential(c, &space.basis_element(i)?)?)
    };

    // rank of the outgoing differential on V_d
    let mut outgoing = Echelon::new(false);
    for i in 0..space.dim() {
        outgoing.insert(&images(i)?, i);
    }
    let closed_dim = space.dim() - outgoing.rank();

    let (exact, exact_space, exact_basis) = if j >= 1 && space.dim() > 0 {
        let (dims, t, basis) = exact_part(c, kind, j, d, margins)?;
        (dims, Some(t), basis)
    } else {
        (vec![0; margins.len()], None, Vec::new())
    };
    let by_margin: Vec<(u32, usize)> = margins.iter().zip(&exact).map(|(s, e)| (*s, closed_dim - e)).collect();
    let dim = by_margin.last().expect("margins nonempty").1;
    let stabilized = by_margin.len() >= 2 && by_margin[by_margin.len() - 2].1 == dim;

    // Witnesses: kernel vectors found in ascending degree, kept when
    // independent of the exact part and of earlier witnesses.
    let mut witnesses = Vec::new();
    if dim > 0 {
        let mut modulo = Echelon::new(false);
        for (i, v) in exact_basis.iter().enumerate() {
            modulo.insert(v, i);
        }
        let mut kernel = Echelon::new(true);
        for i in 0..space.dim() {
            if witnesses.len() == dim {
                break;
            }
            let col = images(i)?;
            let relation = if col.is_empty() {
                vec![(i, int(1))]
            } else {
                match kernel.insert(&col, i) {
                    Insertion::Dependent { relation } => relation,
                    Insertion::Independent { .. } => continue,
                }
            };
            let key = match &exact_space {
                Some(t) => t.descending_from(&space, &relation),
                None => relation.clone(),
            };
            if let Insertion::Independent { .. } = modulo.insert(&key, usize::MAX) {
                witnesses.push(space.element(&relation)?);
            }
        }
    }

    Ok(PositionReport {
        grading: j,
        label: position_label(kind, n, j),
        space_dim: space.dim(),
        closed_dim,
        by_margin,
        dim,
        stabilized,
        witnesses,
    })
}

/// Default search degree for [`exactness_witness`]: the element's coefficient
/// degree plus two, enough in the `A = Phi_0 lambda` frame.
pub fn default_search_degree(a: &Cochain) -> u32 {
    a.coefficient_degree() + 2
}

/// A preimage of `a` under the differential with coefficients of degree
/// `<= d_search`, or `None` if there is none at that degree. Every returned
/// preimage has been checked by applying the differential.
pub fn exactness_witness(c: &Connection, a: &Cochain, d_search: u32) -> Result<Option<Cochain>> {
    let kind = a.kind();
    let j = a.grading();
    let n = c.n();
    let source = TruncatedSpace::new(kind, n, c.rank(), j - 1, d_search);
    if a.is_zero() {
        return Ok(Some(source.element(&[])?));
    }
    if j < 1 || j > top_grading(n) {
        return Ok(None);
    }
    let d_target = (d_search + growth_bound(c, kind, j - 1)).max(a.coefficient_degree());
    let target = TruncatedSpace::new(kind, n, c.rank(), j, d_target);
    let rhs = target.coordinates(a)?;
    let mut echelon = Echelon::new(true);
    for i in 0..source.dim() {
        let col = target.coordinates(&differential(c, &source.basis_element(i)?)?)?;
        echelon.insert(&col, i);
    }
    let Some(x) = echelon.express(&rhs) else {
        return Ok(None);
    };
    let pre = source.element(&x)?;
    if !differential(c, &pre)?.checked_sub(a)?.is_zero() {
        return Err(Error::InvalidArgument("solver returned a preimage that does not map to the target".into()));
    }
    Ok(Some(pre))
}

/// A basis of the closed elements of degree `<= d` at one position.
pub fn closed_basis(c: &Connection, kind: ComplexKind, grading: i32, d: u32) -> Result<Vec<Cochain>> {
    let space = TruncatedSpace::new(kind, c.n(), c.rank(), grading, d);
    let kernel = if grading >= top_grading(c.n()) {
        (0..space.dim()).map(|i| vec![(i, int(1))]).collect()
    } else {
        assemble_operator(c, kind, grading, d, d + growth_bound(c, kind, grading))?.kernel()
    };
    kernel.iter().map(|v| space.element(v)).collect()
}

/// Random closed elements: combinations of one to three closed basis
/// elements with small nonzero coefficients.
pub fn sample_closed<R: Rng>(rng: &mut R, basis: &[Cochain], count: usize) -> Result<Vec<Cochain>> {
    let mut out = Vec::with_capacity(count);
    if basis.is_empty() {
        return Ok(out);
    }
    for _ in 0..count {
        let terms = rng.gen_range(1..=3.min(basis.len()));
        let mut acc: Option<Cochain> = None;
        for _ in 0..terms {
            let b = &basis[rng.gen_range(0..basis.len())];
            let k = loop {
                let v = rng.gen_range(-3i64..=3);
                if v != 0 {
                    break int(v);
                }
            };
            let term = scale(b, &k);
            acc = Some(match acc {
                None => term,
                Some(a) => a.checked_sub(&scale(&term, &int(-1)))?,
            });
        }
        out.push(acc.expect("at least one term"));
    }
    Ok(out)
}

fn scale(a: &Cochain, k: &Rational) -> Cochain {
    match a {
        Cochain::Prim(p) => Cochain::Prim(p.map_payload(|x| x.scaled(k))),
        Cochain::Cone(x) => Cochain::Cone(
            ConeElement::new(x.grading(), x.eta().scaled(k), x.xi().scaled(k)).expect("scaling keeps degrees"),
        ),
    }
}

/// Gradings of the primitive complex covered by the closedness identities:
/// `P^k_+` for `k = 0..=n` and `P^k_-` for `k < n`.
fn closedlem_gradings(n: usize) -> Vec<i32> {
    let n = n as i32;
    (0..=n).chain(n + 2..=2 * n + 1).collect()
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub checks: Vec<IdentityCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `trials` random closed elements of the primitive complex of degree
/// `<= d`, cycling through those `gradings` with a nonzero kernel.
fn closed_samples(c: &Connection, gradings: &[i32], d: u32, trials: usize, seed: u64) -> Result<Vec<PrimElement>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bases = Vec::new();
    for &j in gradings {
        let b = closed_basis(c, ComplexKind::Primitive, j, d)?;
        if !b.is_empty() {
            bases.push(b);
        }
    }
    let mut out = Vec::with_capacity(trials);
    if bases.is_empty() {
        return Ok(out);
    }
    for t in 0..trials {
        let basis = &bases[t % bases.len()];
        for s in sample_closed(&mut rng, basis, 1)? {
            match s {
                Cochain::Prim(p) => out.push(p),
                Cochain::Cone(_) => unreachable!("primitive bases"),
            }
        }
    }
    Ok(out)
}

/// For `A = Phi_0 lambda` with constant `Phi_0`, checks on random closed
/// elements (sampled from kernels at degree `<= d`):
///
/// ```text
/// del_+(b_k - lambda x del_{-A} b_k) = 0                 k < n
/// -del_+ del_-(b_n - lambda x del_{-A} b_n) = 0
/// -del_-(bb_k + lambda x del_{+A} bb_k) = 0              k < n
/// ```
///
/// with `x` the product `m2` and the untwisted `m1` on the outside.
pub fn closedlem_check(c: &Connection, lambda: LambdaChoice, trials: usize, seed: u64, d: u32) -> Result<SuiteReport> {
    let n = c.n();
    let lam_form = lambda.form(n);
    let phi = c.phi();
    if phi.as_constant().is_none() || c.a() != &phi.right_wedge(&lam_form)? {
        return Err(Error::InvalidArgument("connection is not Phi_0 lambda with constant Phi_0 and this lambda".into()));
    }
    let lam = PrimElement::plus(lam_form)?;
    let mut below = IdentityCheck::new("plus_below_middle");
    let mut middle = IdentityCheck::new("plus_middle");
    let mut minus = IdentityCheck::new("minus_below_middle");
    for b in closed_samples(c, &closedlem_gradings(n), d, trials, seed)? {
        let beta = b.payload();
        let (candidate, check) = match b.side() {
            Side::Plus => {
                let inner = del_minus_a(c, beta)?;
                let corr = if b.s() == 0 { None } else { Some(m2(&lam, &PrimElement::plus(inner)?)?) };
                let cand = match corr {
                    Some(x) => b.checked_sub(&x)?,
                    None => b.clone(),
                };
                (cand, if b.s() == n as i32 { &mut middle } else { &mut below })
            }
            Side::Minus => {
                let inner = PrimElement::minus(del_plus_a(c, beta)?)?;
                (b.checked_add(&m2(&lam, &inner)?)?, &mut minus)
            }
        };
        let res = m1(&candidate)?;
        check.record(res.is_zero(), || b.to_string(), || res.to_string());
    }
    Ok(SuiteReport {
        checks: vec![below, middle, minus],
    })
}

/// `Phi beta` is exact for closed `beta`: checks the explicit preimages
///
/// ```text
/// P^k_+        :  del_{-A} b        in P^{k-1}_+
/// P^k_-, k < n :  -del_{+A} bb      in P^{k+1}_-
/// P^n_-        :  bb                in P^n_+
/// ```
///
/// and that the solver finds a preimage at the default search degree.
pub fn phi_exactness_check(c: &Connection, trials: usize, seed: u64, d: u32) -> Result<SuiteReport> {
    let n = c.n() as i32;
    let phi: Payload = c.phi().into();
    let gradings: Vec<i32> = (0..=top_grading(c.n())).collect();
    let mut formula = IdentityCheck::new("formula_preimage");
    let mut solver = IdentityCheck::new("solver_preimage");
    for b in closed_samples(c, &gradings, d, trials, seed)? {
        let target = PrimElement::at(b.grading(), phi.wedge(b.payload())?)?;
        let beta = b.payload();
        let pre = match b.side() {
            Side::Plus if b.s() == 0 => PrimElement::zero_at(c.n(), b.kind(), -1),
            Side::Plus => PrimElement::plus(del_minus_a(c, beta)?)?,
            Side::Minus if b.s() < n => PrimElement::minus(del_plus_a(c, beta)?.negated())?,
            Side::Minus => PrimElement::plus(beta.clone())?,
        };
        let res = twisted_m1(c, &pre, EvalMode::Fast)?.checked_sub(&target)?;
        formula.record(res.is_zero(), || b.to_string(), || res.to_string());
        let t = Cochain::Prim(target);
        let found = exactness_witness(c, &t, default_search_degree(&t))?.is_some();
        solver.record(found, || b.to_string(), || t.to_string());
    }
    Ok(SuiteReport {
        checks: vec![formula, solver],
    })
}
