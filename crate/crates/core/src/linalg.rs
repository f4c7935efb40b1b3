//! Exact linear algebra over the rationals.
//!
//! Small dense systems (Lefschetz tables, constant matrix inverses) use
//! Gauss-Jordan elimination on [`Rational`]. Large sparse systems use an
//! incremental fraction-free echelon basis over the integers: every inserted
//! vector is cleared of denominators, reduced against existing basis vectors
//! with integer row operations and divided by its content.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalars::Rational;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel of a dense matrix with `cols` columns.
///
/// Each basis vector has a 1 at one free column and 0 at the other free
/// columns.
pub fn kernel(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn dense_rank(m: &[Vec<Rational>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Solves `a x = b_k` for every right-hand side column; errors unless each
/// system has exactly one solution.
pub fn solve_unique(a: &[Vec<Rational>], rhs: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let k = rhs.len();
    let mut aug: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend(rhs.iter().map(|b| b[i].clone()));
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.iter().any(|&p| p >= cols) {
        return Err(Error::Singular);
    }
    if pivots.len() != cols {
        return Err(Error::Singular);
    }
    Ok((0..k)
        .map(|j| (0..cols).map(|row| aug[row][cols + j].clone()).collect())
        .collect())
}

pub fn inverse(a: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let r = a.len();
    let id: Vec<Vec<Rational>> = (0..r)
        .map(|j| (0..r).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let cols = solve_unique(a, &id)?;
    Ok((0..r).map(|i| (0..r).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Sparse vector: `(index, value)` pairs sorted by index, no zeros.
pub type SparseVec = Vec<(usize, Rational)>;

type IntVec = Vec<(usize, BigInt)>;

fn to_integer(v: &[(usize, Rational)]) -> (IntVec, BigInt) {
    let l = v.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let out = v
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (*i, c.numer() * (&l / c.denom())))
        .collect();
    (out, l)
}

/// `p * v - a * w` on sorted integer vectors.
fn combine(p: &BigInt, v: &IntVec, a: &BigInt, w: &IntVec) -> IntVec {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        let take_v = j >= w.len() || (i < v.len() && v[i].0 < w[j].0);
        let take_w = i >= v.len() || (j < w.len() && w[j].0 < v[i].0);
        if take_v {
            out.push((v[i].0, p * &v[i].1));
            i += 1;
        } else if take_w {
            out.push((w[j].0, -(a * &w[j].1)));
            j += 1;
        } else {
            let x = p * &v[i].1 - a * &w[j].1;
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn content(v: &IntVec) -> BigInt {
    let mut g = BigInt::zero();
    for (_, x) in v {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Linear combination of labelled input vectors.
type Combo = BTreeMap<usize, Rational>;

fn combo_combine(p: &BigInt, v: &Combo, a: &BigInt, w: &Combo) -> Combo {
    let p = Rational::from_integer(p.clone());
    let a = Rational::from_integer(a.clone());
    let mut out: Combo = v.iter().map(|(k, c)| (*k, c * &p)).collect();
    for (k, c) in w {
        let e = out.entry(*k).or_insert_with(Rational::zero);
        *e -= c * &a;
        if e.is_zero() {
            out.remove(k);
        }
    }
    out
}

struct BasisVector {
    entries: IntVec,
    combo: Combo,
}

/// Outcome of inserting a vector into an [`Echelon`].
#[derive(Debug, Clone)]
pub enum Insertion {
    /// The vector was independent; its leading index became a new pivot.
    Independent { pivot: usize },
    /// The vector lies in the span. With tracking enabled, the relation is a
    /// combination of input labels summing to zero.
    Dependent { relation: SparseVec },
}

/// Incremental fraction-free echelon basis of a growing set of vectors.
///
/// Basis vectors are kept with distinct leading (smallest) indices, so the
/// number of basis vectors whose pivot lies in an index range `[0, k)` is the
/// rank of the projection onto that range.
pub struct Echelon {
    basis: Vec<BasisVector>,
    pivots: HashMap<usize, usize>,
    track: bool,
}

impl Echelon {
    /// With `track`, every basis vector remembers how it was formed from the
    /// inserted vectors (needed for kernels and preimages).
    pub fn new(track: bool) -> Self {
        Echelon {
            basis: Vec::new(),
            pivots: HashMap::new(),
            track,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.basis.iter().map(|b| b.entries[0].0)
    }

    /// Basis vectors as rational sparse vectors, in insertion order.
    pub fn basis_vectors(&self) -> Vec<SparseVec> {
        self.basis
            .iter()
            .map(|b| {
                b.entries
                    .iter()
                    .map(|(i, x)| (*i, Rational::from_integer(x.clone())))
                    .collect()
            })
            .collect()
    }

    /// Reduces `(v, combo)` against the basis, returning the remainder and
    /// its combination.
    fn reduce(&self, mut v: IntVec, mut combo: Combo) -> (IntVec, Combo) {
        let mut pos = 0;
        while pos < v.len() {
            let idx = v[pos].0;
            let Some(&bi) = self.pivots.get(&idx) else {
                pos += 1;
                continue;
            };
            let b = &self.basis[bi];
            let pb = &b.entries[0].1;
            let a = v[pos].1.clone();
            let g = pb.gcd(&a);
            let (p, a) = (pb / &g, a / &g);
            v = combine(&p, &v, &a, &b.entries);
            if self.track {
                combo = combo_combine(&p, &combo, &a, &b.combo);
            }
            let c = content(&v);
            if !c.is_zero() && !c.is_one() {
                for (_, x) in v.iter_mut() {
                    *x /= &c;
                }
                if self.track {
                    let cr = Rational::from_integer(c.clone());
                    for x in combo.values_mut() {
                        *x /= &cr;
                    }
                }
            }
            pos = v.partition_point(|(i, _)| *i <= idx);
        }
        (v, combo)
    }

    /// Inserts `v` labelled `label` (the label is used in relations).
    pub fn insert(&mut self, v: &[(usize, Rational)], label: usize) -> Insertion {
        let (iv, l) = to_integer(v);
        let mut combo = Combo::new();
        if self.track && !iv.is_empty() {
            combo.insert(label, Rational::from_integer(l));
        }
        let (rest, combo) = self.reduce(iv, combo);
        if rest.is_empty() {
            return Insertion::Dependent {
                relation: combo.into_iter().collect(),
            };
        }
        let pivot = rest[0].0;
        self.pivots.insert(pivot, self.basis.len());
        self.basis.push(BasisVector {
            entries: rest,
            combo,
        });
        Insertion::Independent { pivot }
    }

    /// True if `v` lies in the span.
    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        let (iv, _) = to_integer(v);
        self.reduce(iv, Combo::new()).0.is_empty()
    }

    /// Coefficients `x` over the inserted labels with `sum x_l v_l = target`,
    /// if the target lies in the span. Requires tracking.
    pub fn express(&self, target: &[(usize, Rational)]) -> Option<SparseVec> {
        assert!(self.track, "express needs a tracking echelon");
        let (iv, l) = to_integer(target);
        // remainder = s * target + sum combo_l v_l; s sits on a marker label
        const MARK: usize = usize::MAX;
        let mut combo = Combo::new();
        combo.insert(MARK, Rational::from_integer(l));
        let (rest, combo) = self.reduce(iv, combo);
        if !rest.is_empty() {
            return None;
        }
        let s = combo.get(&MARK).cloned().unwrap_or_else(Rational::zero);
        if s.is_zero() {
            return None;
        }
        Some(
            combo
                .into_iter()
                .filter(|(k, _)| *k != MARK)
                .map(|(k, c)| (k, -c / &s))
                .collect(),
        )
    }
}

/// Rank of a set of sparse vectors.
pub fn sparse_rank(vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new(false);
    for (i, v) in vectors.iter().enumerate() {
        e.insert(v, i);
    }
    e.rank()
}

/// Kernel basis of the map sending label `i` to `vectors[i]`.
pub fn sparse_kernel(vectors: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new(true);
    let mut out = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if v.is_empty() {
            out.push(vec![(i, Rational::one())]);
            continue;
        }
        if let Insertion::Dependent { relation } = e.insert(v, i) {
            out.push(normalize(relation));
        }
    }
    out
}

/// Scales a sparse vector so its leading entry is 1.
pub fn normalize(v: SparseVec) -> SparseVec {
    let Some((_, lead)) = v.first() else { return v };
    let lead = lead.clone();
    v.into_iter().map(|(i, c)| (i, c / &lead)).collect()
}

/// `sum_l x_l vectors[l]` as a sparse vector.
pub fn combine_vectors(vectors: &[SparseVec], coeffs: &[(usize, Rational)]) -> SparseVec {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (l, c) in coeffs {
        for (i, x) in &vectors[*l] {
            let e = acc.entry(*i).or_insert_with(Rational::zero);
            *e += c * x;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn is_negative_leading(v: &[(usize, Rational)]) -> bool {
    v.first().is_some_and(|(_, c)| c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|(i, c)| (*i, int(*c))).collect()
    }

    #[test]
    fn dense_inverse() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![int(1), int(-1)], vec![int(-1), int(2)]]);
        let s = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(inverse(&s), Err(Error::Singular));
    }

    #[test]
    fn dense_kernel() {
        let a = vec![vec![int(1), int(1), int(0)], vec![int(0), int(0), int(1)]];
        let k = kernel(&a, 3);
        assert_eq!(k, vec![vec![int(-1), int(1), int(0)]]);
    }

    #[test]
    fn sparse_rank_and_kernel() {
        let cols = vec![
            sv(&[(0, 1), (1, 2)]),
            sv(&[(0, 2), (1, 4)]),
            sv(&[(1, 1), (3, 5)]),
            vec![(0, rat(1, 2)), (1, int(2)), (3, int(5))],
        ];
        assert_eq!(sparse_rank(&cols), 2);
        let k = sparse_kernel(&cols);
        assert_eq!(k.len(), 2);
        for rel in &k {
            assert!(combine_vectors(&cols, rel).is_empty());
        }
    }

    #[test]
    fn express_in_span() {
        let cols = vec![sv(&[(0, 3), (2, 1)]), sv(&[(1, 2), (2, 7)])];
        let mut e = Echelon::new(true);
        for (i, c) in cols.iter().enumerate() {
            e.insert(c, i);
        }
        let target = vec![(0, rat(3, 2)), (1, int(4)), (2, rat(29, 2))];
        let x = e.express(&target).unwrap();
        assert_eq!(combine_vectors(&cols, &x), target);
        assert!(e.express(&sv(&[(3, 1)])).is_none());
    }

    #[test]
    fn projection_rank_from_pivots() {
        // rows 0,1 are "high"; the second vector vanishes there
        let cols = vec![sv(&[(0, 1), (2, 1)]), sv(&[(2, 1), (3, 1)]), sv(&[(0, 2), (2, 3), (3, 1)])];
        let mut e = Echelon::new(false);
        for (i, c) in cols.iter().enumerate() {
            e.insert(c, i);
        }
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivots().filter(|p| *p < 2).count(), 1);
    }
}
