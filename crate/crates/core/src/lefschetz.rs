//! Lefschetz decomposition and the symplectic operators built on it.
//!
//! Every `k`-form decomposes uniquely as `sum_r omega^r /\ beta_{k-2r}` with
//! primitive `beta`. The decomposition is pointwise linear with constant
//! coefficients, so it is solved once per constant basis form `e_I` on the
//! fiber and extended over polynomial coefficients.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forms::{Form, FormIndex, FormLike};
use crate::linalg;
use crate::scalars::{Poly, Rational};

/// Constant primitive forms of one degree, in reduced echelon shape: basis
/// form `b` has coefficient 1 at `free[b]` and 0 at every other free index.
#[derive(Debug)]
pub struct PrimitiveBasis {
    pub n: usize,
    pub degree: usize,
    pub forms: Vec<Form>,
    pub free: Vec<FormIndex>,
}

impl PrimitiveBasis {
    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    /// Coefficients of a primitive form in this basis (read off at the free
    /// indices).
    pub fn coordinates(&self, beta: &Form) -> Vec<Poly> {
        self.free.iter().map(|i| beta.coefficient(*i)).collect()
    }

    /// `sum_b coeffs[b] * forms[b]`.
    pub fn assemble(&self, coeffs: &[Poly]) -> Form {
        let mut out = Form::zero(self.n, self.degree as i32);
        for (c, b) in coeffs.iter().zip(&self.forms) {
            if !c.is_zero() {
                out = out.checked_add(&b.mul_poly(c)).expect("same degree");
            }
        }
        out
    }
}

/// `beta_{k-2r}` for `r = 0..`, per constant basis form of degree `k`.
type Table = HashMap<FormIndex, Vec<Form>>;

type Cache<T> = OnceLock<RwLock<HashMap<(usize, usize), Arc<T>>>>;

static PRIMITIVE: Cache<PrimitiveBasis> = OnceLock::new();
static TABLES: Cache<Table> = OnceLock::new();

fn cached<T>(cache: &'static Cache<T>, key: (usize, usize), build: impl FnOnce() -> T) -> Arc<T> {
    let lock = cache.get_or_init(Default::default);
    if let Some(v) = lock.read().expect("cache lock").get(&key) {
        return v.clone();
    }
    let mut w = lock.write().expect("cache lock");
    w.entry(key).or_insert_with(|| Arc::new(build())).clone()
}

fn constant_form(n: usize, degree: usize, indices: &[FormIndex], coeffs: &[Rational]) -> Form {
    let mut f = Form::zero(n, degree as i32);
    for (i, c) in indices.iter().zip(coeffs) {
        if !c.is_zero() {
            f.add_term(*i, Poly::constant(n, c.clone()));
        }
    }
    f
}

fn constant_coords(f: &Form, indices: &[FormIndex]) -> Vec<Rational> {
    indices
        .iter()
        .map(|i| f.coefficient(*i).as_constant().unwrap_or_else(Rational::zero))
        .collect()
}

/// Constant primitive basis of degree `s`: the kernel of `Lambda` on
/// constant `s`-forms. Empty for `s > n`.
pub fn primitive_basis(n: usize, s: usize) -> Arc<PrimitiveBasis> {
    cached(&PRIMITIVE, (n, s), || {
        let cols = FormIndex::all_of_degree(n, s);
        let forms = if s > 2 * n {
            Vec::new()
        } else if s < 2 {
            cols.iter().map(|i| Form::term(n, *i, Poly::one(n))).collect()
        } else {
            let rows = FormIndex::all_of_degree(n, s - 2);
            let mut m = vec![vec![Rational::zero(); cols.len()]; rows.len()];
            for (c, idx) in cols.iter().enumerate() {
                let img = Form::term(n, *idx, Poly::one(n)).contract_lambda();
                for (r, v) in constant_coords(&img, &rows).into_iter().enumerate() {
                    m[r][c] = v;
                }
            }
            linalg::kernel(&m, cols.len())
                .iter()
                .map(|v| constant_form(n, s, &cols, v))
                .collect()
        };
        // in reduced echelon shape a kernel vector's last nonzero entry is the
        // 1 at its free column
        let free = forms
            .iter()
            .map(|f: &Form| {
                *cols
                    .iter()
                    .rev()
                    .find(|i| !f.coefficient(**i).is_zero())
                    .expect("kernel vector is nonzero")
            })
            .collect();
        PrimitiveBasis {
            n,
            degree: s,
            forms,
            free,
        }
    })
}

fn table(n: usize, k: usize) -> Arc<Table> {
    cached(&TABLES, (n, k), || build_table(n, k))
}

fn build_table(n: usize, k: usize) -> Table {
    let rows = FormIndex::all_of_degree(n, k);
    // columns: omega^r /\ p for every primitive basis form p of degree k-2r
    let mut columns: Vec<(usize, usize)> = Vec::new();
    let mut images: Vec<Vec<Rational>> = Vec::new();
    for r in 0..=k / 2 {
        let s = k - 2 * r;
        if s > n || r + s > n {
            continue;
        }
        let basis = primitive_basis(n, s);
        let wr = Form::omega_power(n, r as u32);
        for (b, p) in basis.forms.iter().enumerate() {
            let img = wr.wedge(p).expect("same chart");
            columns.push((r, b));
            images.push(constant_coords(&img, &rows));
        }
    }
    assert_eq!(columns.len(), rows.len(), "Lefschetz system must be square");
    let a: Vec<Vec<Rational>> = (0..rows.len())
        .map(|i| images.iter().map(|col| col[i].clone()).collect())
        .collect();
    let rhs: Vec<Vec<Rational>> = (0..rows.len())
        .map(|j| (0..rows.len()).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let sol = linalg::solve_unique(&a, &rhs).expect("Lefschetz system is invertible");
    let mut out = Table::new();
    for (j, idx) in rows.iter().enumerate() {
        let mut comps: Vec<Form> = (0..=k / 2).map(|r| Form::zero(n, (k - 2 * r) as i32)).collect();
        for (c, (r, b)) in columns.iter().enumerate() {
            let coeff = &sol[j][c];
            if !coeff.is_zero() {
                let p = &primitive_basis(n, k - 2 * r).forms[*b];
                comps[*r].add_scaled(p, coeff);
            }
        }
        out.insert(*idx, comps);
    }
    out
}

/// The primitive components `beta_{k-2r}` of a degree-`k` form, indexed by
/// `r`. Reassembles exactly to the source.
#[derive(Clone, Debug, PartialEq)]
pub struct LefschetzComponents<T> {
    n: usize,
    degree: i32,
    parts: Vec<T>,
}

impl<T: FormLike> LefschetzComponents<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// `beta_{k-2r}` or `None` when `k - 2r < 0`.
    pub fn get(&self, r: usize) -> Option<&T> {
        self.parts.get(r)
    }

    pub fn parts(&self) -> &[T] {
        &self.parts
    }

    /// Nonzero components as `(r, beta)` pairs.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &T)> {
        self.parts.iter().enumerate().filter(|(_, b)| !b.is_zero())
    }

    pub fn reassemble(&self, template: &T) -> T {
        let mut out = template.zero_of_degree(self.degree);
        for (r, b) in self.nonzero() {
            let term = b.left_wedge(&Form::omega_power(self.n, r as u32)).expect("same chart");
            out = out.plus(&term);
        }
        out
    }
}

/// Lefschetz decomposition of a homogeneous form of any family.
pub fn decompose<T: FormLike>(a: &T) -> LefschetzComponents<T> {
    let n = a.n();
    let k = a.degree();
    if k < 0 || k > 2 * n as i32 || a.is_zero() {
        let len = if k < 0 { 0 } else { k as usize / 2 + 1 };
        let parts = (0..len).map(|r| a.zero_of_degree(k - 2 * r as i32)).collect();
        return LefschetzComponents { n, degree: k, parts };
    }
    let ku = k as usize;
    let t = table(n, ku);
    let len = ku / 2 + 1;
    let mut per_part: Vec<Vec<Form>> = vec![Vec::with_capacity(a.parts().len()); len];
    for f in a.parts() {
        let mut comps: Vec<Form> = (0..len).map(|r| Form::zero(n, (ku - 2 * r) as i32)).collect();
        for (idx, p) in f.terms() {
            for (r, b) in t[idx].iter().enumerate() {
                if !b.is_zero() {
                    comps[r] = comps[r].checked_add(&b.mul_poly(p)).expect("same degree");
                }
            }
        }
        for (r, c) in comps.into_iter().enumerate() {
            per_part[r].push(c);
        }
    }
    LefschetzComponents {
        n,
        degree: k,
        parts: per_part.into_iter().map(|p| a.with_parts(p)).collect(),
    }
}

/// True iff `Lambda` kills every scalar component.
pub fn is_primitive<T: FormLike>(a: &T) -> bool {
    a.parts().iter().all(|f| f.contract_lambda().is_zero())
}

/// Independent primitivity test: `omega^{n-s+1} /\ a = 0` for degree `s <= n`;
/// above the middle degree only zero is primitive.
pub fn is_primitive_by_power<T: FormLike>(a: &T) -> bool {
    let n = a.n() as i32;
    let s = a.degree();
    if s > n {
        return a.is_zero();
    }
    let w = Form::omega_power(a.n(), (n - s + 1) as u32);
    a.parts().iter().all(|f| w.wedge(f).expect("same chart").is_zero())
}

/// `L^p`: `omega^p /\ a` for `p >= 0`; for `p < 0` shifts every component
/// `omega^r /\ beta` to `omega^{r+p} /\ beta`, dropping those with `r + p < 0`.
pub fn l_power<T: FormLike>(p: i32, a: &T) -> T {
    let n = a.n();
    if p >= 0 {
        return a.left_wedge(&Form::omega_power(n, p as u32)).expect("same chart");
    }
    let comps = decompose(a);
    let mut out = a.zero_of_degree(a.degree() + 2 * p);
    for (r, b) in comps.nonzero() {
        let e = r as i32 + p;
        if e >= 0 {
            let term = b.left_wedge(&Form::omega_power(n, e as u32)).expect("same chart");
            out = out.plus(&term);
        }
    }
    out
}

/// `Pi^p`: keeps the components `omega^r /\ beta` with `r <= p`.
pub fn pi_p<T: FormLike>(p: usize, a: &T) -> T {
    let n = a.n();
    let comps = decompose(a);
    let mut out = a.zero_of_degree(a.degree());
    for (r, b) in comps.nonzero() {
        if r <= p {
            let term = b.left_wedge(&Form::omega_power(n, r as u32)).expect("same chart");
            out = out.plus(&term);
        }
    }
    out
}

/// Primitive projection `Pi = Pi^0`.
pub fn pi<T: FormLike>(a: &T) -> T {
    let comps = decompose(a);
    comps.parts.into_iter().next().unwrap_or_else(|| a.zero_of_degree(a.degree()))
}

/// `*_r = L^{n-k}` on degree `k`.
pub fn star_r<T: FormLike>(a: &T) -> T {
    l_power(a.n() as i32 - a.degree(), a)
}

fn require_primitive<T: FormLike>(beta: &T) -> Result<()> {
    if is_primitive(beta) {
        Ok(())
    } else {
        Err(Error::NotPrimitive { degree: beta.degree() })
    }
}

/// `del_+ = Pi d` on primitive forms.
pub fn del_plus<T: FormLike>(beta: &T) -> Result<T> {
    require_primitive(beta)?;
    Ok(pi(&beta.exterior_d()))
}

/// `del_- = L^{-1} d` on primitive forms.
pub fn del_minus<T: FormLike>(beta: &T) -> Result<T> {
    require_primitive(beta)?;
    Ok(l_power(-1, &beta.exterior_d()))
}
