//! Exterior algebra over a Darboux chart with polynomial coefficients.
//!
//! The symplectic form is fixed as `omega = sum_i dx_i /\ dy_i`. Forms are
//! homogeneous; a form may carry a degree outside `0..=2n`, in which case it
//! is necessarily zero (this keeps operators like `L^{-1}` total).
//!
//! Fiber-valued forms come in two shapes: [`VectorForm`] (sections of a rank
//! `r` bundle) and [`MatrixForm`] (endomorphism valued). Products between
//! them compose the fiber values in order and take the Koszul sign from the
//! form degrees only.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalars::{fmt_abs_term, Poly, Rational};

/// A basis covector `dz_{i1} /\ ... /\ dz_{ik}` with `i1 < ... < ik`,
/// stored as a bitmask (bit `i - 1` for coordinate `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormIndex(u32);

impl FormIndex {
    pub const EMPTY: FormIndex = FormIndex(0);

    /// Builds an index from coordinates in `1..=2n`; they need not be sorted,
    /// but must be distinct.
    pub fn new(n: usize, coords: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &c in coords {
            if c == 0 || c > 2 * n {
                return Err(Error::CoordinateOutOfRange {
                    index: c,
                    max: 2 * n,
                });
            }
            let b = 1u32 << (c - 1);
            if bits & b != 0 {
                return Err(Error::InvalidArgument(format!(
                    "repeated coordinate {c} in form index"
                )));
            }
            bits |= b;
        }
        Ok(FormIndex(bits))
    }

    pub fn from_bits(bits: u32) -> Self {
        FormIndex(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, coord: usize) -> bool {
        self.0 & (1 << (coord - 1)) != 0
    }

    /// Coordinates in increasing order.
    pub fn coords(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// All indices of a given degree over `2n` coordinates, ascending.
    pub fn all_of_degree(n: usize, degree: usize) -> Vec<FormIndex> {
        let mut out: Vec<FormIndex> = (0u32..(1u32 << (2 * n)))
            .filter(|b| b.count_ones() as usize == degree)
            .map(FormIndex)
            .collect();
        out.sort();
        out
    }

    /// `e_self /\ e_other` as `(sign, index)`, or `None` if they overlap.
    pub fn wedge(self, other: FormIndex) -> Option<(i32, FormIndex)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            swaps += (self.0 >> (j + 1)).count_ones();
        }
        Some((if swaps % 2 == 0 { 1 } else { -1 }, FormIndex(self.0 | other.0)))
    }

    /// Interior product with `d/dz_coord`: `(sign, index)` or `None`.
    pub fn contract(self, coord: usize) -> Option<(i32, FormIndex)> {
        let b = 1u32 << (coord - 1);
        if self.0 & b == 0 {
            return None;
        }
        let before = (self.0 & (b - 1)).count_ones();
        Some((if before % 2 == 0 { 1 } else { -1 }, FormIndex(self.0 & !b)))
    }
}

impl Ord for FormIndex {
    /// Degree first, then lexicographic on the increasing coordinate lists.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.len().cmp(&other.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let lowest = diff & diff.wrapping_neg();
        if self.0 & lowest != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for FormIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A homogeneous differential form with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    n: usize,
    degree: i32,
    terms: BTreeMap<FormIndex, Poly>,
}

impl Form {
    pub fn zero(n: usize, degree: i32) -> Self {
        Form {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The 0-form `p`.
    pub fn function(p: Poly) -> Self {
        let mut f = Form::zero(p.n(), 0);
        f.add_term(FormIndex::EMPTY, p);
        f
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Form::function(Poly::constant(n, c))
    }

    pub fn one(n: usize) -> Self {
        Form::constant(n, Rational::one())
    }

    /// `p * e_index`.
    pub fn term(n: usize, index: FormIndex, p: Poly) -> Self {
        assert_eq!(p.n(), n, "chart dimension mismatch");
        let mut f = Form::zero(n, index.len() as i32);
        f.add_term(index, p);
        f
    }

    pub fn basis(n: usize, coords: &[usize]) -> Result<Self> {
        let idx = FormIndex::new(n, coords)?;
        let sign = sort_sign(coords);
        Ok(Form::term(n, idx, Poly::constant(n, Rational::from_integer(sign.into()))))
    }

    pub fn dx(n: usize, i: usize) -> Self {
        Form::basis(n, &[i]).unwrap()
    }

    pub fn dy(n: usize, i: usize) -> Self {
        Form::basis(n, &[n + i]).unwrap()
    }

    /// `omega = sum_i dx_i /\ dy_i`.
    pub fn omega(n: usize) -> Self {
        let mut f = Form::zero(n, 2);
        for i in 1..=n {
            f.add_term(FormIndex::new(n, &[i, n + i]).unwrap(), Poly::one(n));
        }
        f
    }

    /// `omega^r`; the constant 1 for `r = 0`.
    pub fn omega_power(n: usize, r: u32) -> Self {
        let w = Form::omega(n);
        let mut out = Form::one(n);
        for _ in 0..r {
            out = out.wedge(&w).unwrap();
        }
        out
    }

    /// `sum_i x_i dy_i`, whose exterior derivative is `omega`.
    pub fn lambda_standard(n: usize) -> Self {
        let mut f = Form::zero(n, 1);
        for i in 1..=n {
            f.add_term(FormIndex::new(n, &[n + i]).unwrap(), Poly::x(n, i));
        }
        f
    }

    /// `1/2 sum_i (x_i dy_i - y_i dx_i)`.
    pub fn lambda_symmetric(n: usize) -> Self {
        let half = Rational::new(1.into(), 2.into());
        let mut f = Form::zero(n, 1);
        for i in 1..=n {
            f.add_term(FormIndex::new(n, &[n + i]).unwrap(), Poly::x(n, i).scale(&half));
            f.add_term(FormIndex::new(n, &[i]).unwrap(), Poly::y(n, i).scale(&-&half));
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormIndex, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, index: FormIndex) -> Poly {
        self.terms
            .get(&index)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.n))
    }

    /// Highest coefficient degree, `None` for the zero form.
    pub fn max_coefficient_degree(&self) -> Option<u32> {
        self.terms.values().filter_map(Poly::total_degree).max()
    }

    /// The same (necessarily zero) form relabelled with another degree.
    pub fn zero_with_degree(&self, degree: i32) -> Self {
        Form::zero(self.n, degree)
    }

    /// Reinterprets a zero form at `degree`; nonzero forms must already have it.
    pub fn with_degree(self, degree: i32) -> Result<Self> {
        if self.is_zero() {
            Ok(Form::zero(self.n, degree))
        } else if self.degree == degree {
            Ok(self)
        } else {
            Err(Error::DegreeMismatch {
                left: self.degree,
                right: degree,
            })
        }
    }

    pub fn add_term(&mut self, index: FormIndex, p: Poly) {
        debug_assert_eq!(index.len() as i32, self.degree);
        if p.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn add_scaled_term(&mut self, index: FormIndex, p: &Poly, c: &Rational) {
        if c.is_zero() || p.is_zero() {
            return;
        }
        let entry = self.terms.entry(index).or_insert_with(|| Poly::zero(p.n()));
        entry.add_scaled(p, c);
        if entry.is_zero() {
            self.terms.remove(&index);
        }
    }

    fn check_compatible(&self, other: &Form) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        if self.is_zero() {
            return Ok(if other.is_zero() { self.clone() } else { other.clone() });
        }
        let mut out = self.clone();
        for (i, p) in &other.terms {
            out.add_term(*i, p.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Form) -> Result<Form> {
        self.checked_add(&other.neg())
    }

    pub fn add_scaled(&mut self, other: &Form, c: &Rational) {
        self.check_compatible(other).expect("form add");
        if self.is_zero() {
            self.degree = other.degree;
        }
        for (i, p) in &other.terms {
            self.add_scaled_term(*i, p, c);
        }
    }

    pub fn neg(&self) -> Form {
        Form {
            n: self.n,
            degree: self.degree,
            terms: self.terms.iter().map(|(i, p)| (*i, -p)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Form {
        if c.is_zero() {
            return Form::zero(self.n, self.degree);
        }
        Form {
            n: self.n,
            degree: self.degree,
            terms: self.terms.iter().map(|(i, p)| (*i, p.scale(c))).collect(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> Form {
        let mut out = Form::zero(self.n, self.degree);
        for (i, q) in &self.terms {
            out.add_term(*i, q * p);
        }
        out
    }

    /// Exterior product with the Koszul sign of the coordinate reordering.
    pub fn wedge(&self, other: &Form) -> Result<Form> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut out = Form::zero(self.n, self.degree + other.degree);
        for (i, p) in &self.terms {
            for (j, q) in &other.terms {
                if let Some((sign, k)) = i.wedge(*j) {
                    let prod = p * q;
                    out.add_term(k, if sign < 0 { -prod } else { prod });
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn exterior_d(&self) -> Form {
        let mut out = Form::zero(self.n, self.degree + 1);
        for (i, p) in &self.terms {
            for c in 1..=2 * self.n {
                if i.contains(c) {
                    continue;
                }
                let dp = p.partial(c).expect("coordinate in range");
                if dp.is_zero() {
                    continue;
                }
                let (sign, k) = FormIndex(1 << (c - 1)).wedge(*i).unwrap();
                out.add_term(k, if sign < 0 { -dp } else { dp });
            }
        }
        out
    }

    /// Interior product with the coordinate vector field `d/dz_coord`.
    pub fn interior(&self, coord: usize) -> Result<Form> {
        if coord == 0 || coord > 2 * self.n {
            return Err(Error::CoordinateOutOfRange {
                index: coord,
                max: 2 * self.n,
            });
        }
        let mut out = Form::zero(self.n, self.degree - 1);
        for (i, p) in &self.terms {
            if let Some((sign, k)) = i.contract(coord) {
                out.add_term(k, if sign < 0 { -p } else { p.clone() });
            }
        }
        Ok(out)
    }

    /// The lowering operator `Lambda = sum_i i(d/dy_i) i(d/dx_i)`.
    pub fn contract_lambda(&self) -> Form {
        let n = self.n;
        let mut out = Form::zero(n, self.degree - 2);
        for (idx, p) in &self.terms {
            for i in 1..=n {
                let Some((s1, a)) = idx.contract(i) else { continue };
                let Some((s2, b)) = a.contract(n + i) else { continue };
                out.add_term(b, if s1 * s2 < 0 { -p } else { p.clone() });
            }
        }
        out
    }
}

/// Sign of the permutation sorting `coords` (assumed distinct).
fn sort_sign(coords: &[usize]) -> i32 {
    let mut inv = 0;
    for a in 0..coords.len() {
        for b in a + 1..coords.len() {
            if coords[a] > coords[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn fmt_basis(n: usize, idx: FormIndex) -> String {
    idx.coords()
        .into_iter()
        .map(|c| {
            if c <= n {
                format!("dx{c}")
            } else {
                format!("dy{}", c - n)
            }
        })
        .collect::<Vec<_>>()
        .join("/\\")
}

impl fmt::Display for Form {
    /// Renders in the form-expression syntax, e.g. `3/2*x1^2*dx1/\dy2 - dx2/\dy2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, p) in &self.terms {
            for (m, c) in p.terms().rev() {
                let neg = c.is_negative();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if neg { " - " } else { " + " })?;
                }
                first = false;
                let basis = fmt_basis(self.n, *idx);
                let coeff_is_one = c.abs().is_one() && m.degree() == 0;
                if basis.is_empty() {
                    write!(f, "{}", fmt_abs_term(self.n, m, c))?;
                } else if coeff_is_one {
                    write!(f, "{basis}")?;
                } else {
                    write!(f, "{}*{basis}", fmt_abs_term(self.n, m, c))?;
                }
            }
        }
        Ok(())
    }
}

/// Common surface of [`Form`], [`VectorForm`] and [`MatrixForm`]: all are
/// finite arrays of scalar forms of one degree, and every fiberwise-linear
/// operator acts on them part by part.
pub trait FormLike: Clone + PartialEq + fmt::Debug {
    fn parts(&self) -> &[Form];

    /// A value of the same shape as `self` built from `parts`.
    fn with_parts(&self, parts: Vec<Form>) -> Self;

    fn n(&self) -> usize {
        self.parts()[0].n()
    }

    /// Degree of the first nonzero part; zero parts may carry stale labels.
    fn degree(&self) -> i32 {
        let parts = self.parts();
        parts.iter().find(|f| !f.is_zero()).unwrap_or(&parts[0]).degree()
    }

    fn is_zero(&self) -> bool {
        self.parts().iter().all(Form::is_zero)
    }

    fn map_parts(&self, f: impl FnMut(&Form) -> Form) -> Self {
        let parts = self.parts().iter().map(f).collect();
        self.with_parts(parts)
    }

    fn try_map_parts(&self, f: impl FnMut(&Form) -> Result<Form>) -> Result<Self> {
        let parts = self.parts().iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(self.with_parts(parts))
    }

    fn zip_parts(&self, other: &Self, mut f: impl FnMut(&Form, &Form) -> Result<Form>) -> Result<Self> {
        if self.parts().len() != other.parts().len() {
            return Err(Error::RankMismatch {
                left: self.parts().len(),
                right: other.parts().len(),
            });
        }
        let parts = self
            .parts()
            .iter()
            .zip(other.parts())
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.with_parts(parts))
    }

    fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_parts(other, |a, b| a.checked_add(b))
    }

    fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_parts(other, |a, b| a.checked_sub(b))
    }

    fn plus(&self, other: &Self) -> Self {
        self.checked_add(other).expect("shape mismatch in add")
    }

    fn minus(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("shape mismatch in sub")
    }

    fn negated(&self) -> Self {
        self.map_parts(Form::neg)
    }

    fn scaled(&self, c: &Rational) -> Self {
        self.map_parts(|f| f.scale(c))
    }

    fn times_poly(&self, p: &Poly) -> Self {
        self.map_parts(|f| f.mul_poly(p))
    }

    fn zero_of_degree(&self, degree: i32) -> Self {
        self.map_parts(|f| f.zero_with_degree(degree))
    }

    fn exterior_d(&self) -> Self {
        self.map_parts(Form::exterior_d)
    }

    /// Wedge with a scalar form on the left: `s /\ self`.
    fn left_wedge(&self, s: &Form) -> Result<Self> {
        self.try_map_parts(|f| s.wedge(f))
    }

    /// Wedge with a scalar form on the right: `self /\ s`.
    fn right_wedge(&self, s: &Form) -> Result<Self> {
        self.try_map_parts(|f| f.wedge(s))
    }

    fn max_coefficient_degree(&self) -> Option<u32> {
        self.parts().iter().filter_map(Form::max_coefficient_degree).max()
    }
}

impl FormLike for Form {
    fn parts(&self) -> &[Form] {
        std::slice::from_ref(self)
    }

    fn with_parts(&self, parts: Vec<Form>) -> Self {
        parts.into_iter().next().expect("one part")
    }
}

/// A form with values in the trivial rank-`r` bundle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorForm {
    entries: Vec<Form>,
}

impl VectorForm {
    pub fn new(entries: Vec<Form>) -> Result<Self> {
        check_uniform(&entries)?;
        Ok(VectorForm { entries })
    }

    pub fn zero(n: usize, rank: usize, degree: i32) -> Self {
        VectorForm {
            entries: vec![Form::zero(n, degree); rank],
        }
    }

    /// `f e_i` for the `i`-th unit section (0-based).
    pub fn unit(rank: usize, i: usize, f: Form) -> Self {
        let mut entries = vec![f.zero_with_degree(f.degree()); rank];
        entries[i] = f;
        VectorForm { entries }
    }

    /// A constant section.
    pub fn constant(n: usize, values: &[Rational]) -> Self {
        VectorForm {
            entries: values.iter().map(|c| Form::constant(n, c.clone())).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize) -> &Form {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[Form] {
        &self.entries
    }
}

impl FormLike for VectorForm {
    fn parts(&self) -> &[Form] {
        &self.entries
    }

    fn with_parts(&self, parts: Vec<Form>) -> Self {
        VectorForm { entries: parts }
    }
}

/// An `r x r` matrix of forms (row-major), i.e. a form with values in
/// `End E`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixForm {
    rank: usize,
    entries: Vec<Form>,
}

impl MatrixForm {
    pub fn new(rank: usize, entries: Vec<Form>) -> Result<Self> {
        if entries.len() != rank * rank || rank == 0 {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a rank {rank} matrix, got {}",
                rank * rank,
                entries.len()
            )));
        }
        check_uniform(&entries)?;
        Ok(MatrixForm { rank, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Form>>) -> Result<Self> {
        let rank = rows.len();
        if rows.iter().any(|r| r.len() != rank) {
            return Err(Error::InvalidArgument("matrix must be square".into()));
        }
        Self::new(rank, rows.into_iter().flatten().collect())
    }

    pub fn zero(n: usize, rank: usize, degree: i32) -> Self {
        MatrixForm {
            rank,
            entries: vec![Form::zero(n, degree); rank * rank],
        }
    }

    pub fn identity(n: usize, rank: usize) -> Self {
        Self::scalar(rank, &Form::one(n))
    }

    /// `f * I`.
    pub fn scalar(rank: usize, f: &Form) -> Self {
        let mut m = MatrixForm {
            rank,
            entries: vec![f.zero_with_degree(f.degree()); rank * rank],
        };
        for i in 0..rank {
            m.entries[i * rank + i] = f.clone();
        }
        m
    }

    /// A constant matrix of 0-forms.
    pub fn constant(n: usize, rows: &[Vec<Rational>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|c| Form::constant(n, c.clone())).collect())
                .collect(),
        )
    }

    pub fn diagonal(n: usize, diag: &[Rational]) -> Self {
        let r = diag.len();
        let mut m = MatrixForm::zero(n, r, 0);
        for (i, c) in diag.iter().enumerate() {
            m.entries[i * r + i] = Form::constant(n, c.clone());
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> &Form {
        &self.entries[i * self.rank + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: Form) {
        self.entries[i * self.rank + j] = f;
    }

    pub fn rows(&self) -> Vec<Vec<Form>> {
        self.entries.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    /// Graded commutator `[a, b] = a /\ b - (-1)^{|a||b|} b /\ a`.
    pub fn commutator(&self, other: &MatrixForm) -> Result<MatrixForm> {
        let ab = self.wedge(other)?;
        let ba = other.wedge(self)?;
        if (self.degree() * other.degree()) % 2 == 0 {
            ab.checked_sub(&ba)
        } else {
            ab.checked_add(&ba)
        }
    }

    /// Constant rational entries, if every entry is a constant 0-form.
    pub fn as_constant(&self) -> Option<Vec<Vec<Rational>>> {
        if self.degree() != 0 {
            return self.is_zero().then(|| vec![vec![Rational::zero(); self.rank]; self.rank]);
        }
        self.rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|f| f.coefficient(FormIndex::EMPTY).as_constant())
                    .collect::<Option<Vec<_>>>()
            })
            .collect()
    }
}

impl FormLike for MatrixForm {
    fn parts(&self) -> &[Form] {
        &self.entries
    }

    fn with_parts(&self, parts: Vec<Form>) -> Self {
        MatrixForm {
            rank: self.rank,
            entries: parts,
        }
    }
}

fn check_uniform(entries: &[Form]) -> Result<()> {
    let Some(first) = entries.first() else {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    };
    for e in entries {
        if e.n() != first.n() {
            return Err(Error::DimensionMismatch {
                left: first.n(),
                right: e.n(),
            });
        }
        if e.degree() != first.degree() {
            return Err(Error::DegreeMismatch {
                left: first.degree(),
                right: e.degree(),
            });
        }
    }
    Ok(())
}

/// Exterior product between the three form families.
pub trait Wedge<Rhs> {
    type Output;
    fn wedge(&self, rhs: &Rhs) -> Result<Self::Output>;
}

impl Wedge<Form> for Form {
    type Output = Form;
    fn wedge(&self, rhs: &Form) -> Result<Form> {
        Form::wedge(self, rhs)
    }
}

impl Wedge<VectorForm> for Form {
    type Output = VectorForm;
    fn wedge(&self, rhs: &VectorForm) -> Result<VectorForm> {
        rhs.left_wedge(self)
    }
}

impl Wedge<MatrixForm> for Form {
    type Output = MatrixForm;
    fn wedge(&self, rhs: &MatrixForm) -> Result<MatrixForm> {
        rhs.left_wedge(self)
    }
}

impl Wedge<Form> for VectorForm {
    type Output = VectorForm;
    fn wedge(&self, rhs: &Form) -> Result<VectorForm> {
        self.right_wedge(rhs)
    }
}

impl Wedge<Form> for MatrixForm {
    type Output = MatrixForm;
    fn wedge(&self, rhs: &Form) -> Result<MatrixForm> {
        self.right_wedge(rhs)
    }
}

impl Wedge<MatrixForm> for MatrixForm {
    type Output = MatrixForm;
    fn wedge(&self, rhs: &MatrixForm) -> Result<MatrixForm> {
        if self.rank != rhs.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: rhs.rank,
            });
        }
        let r = self.rank;
        let n = self.n();
        let mut entries = Vec::with_capacity(r * r);
        for i in 0..r {
            for k in 0..r {
                let mut acc = Form::zero(n, self.degree() + rhs.degree());
                for j in 0..r {
                    let (a, b) = (self.get(i, j), rhs.get(j, k));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.checked_add(&a.wedge(b)?)?;
                }
                entries.push(acc);
            }
        }
        Ok(MatrixForm { rank: r, entries })
    }
}

impl Wedge<VectorForm> for MatrixForm {
    type Output = VectorForm;
    fn wedge(&self, rhs: &VectorForm) -> Result<VectorForm> {
        if self.rank != rhs.rank() {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: rhs.rank(),
            });
        }
        let r = self.rank;
        let n = self.n();
        let mut entries = Vec::with_capacity(r);
        for i in 0..r {
            let mut acc = Form::zero(n, self.degree() + rhs.degree());
            for j in 0..r {
                let (a, b) = (self.get(i, j), rhs.entry(j));
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.checked_add(&a.wedge(b)?)?;
            }
            entries.push(acc);
        }
        Ok(VectorForm { entries })
    }
}

impl fmt::Display for VectorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Display for MatrixForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let parts: Vec<String> = r.iter().map(|e| e.to_string()).collect();
                format!("[{}]", parts.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
