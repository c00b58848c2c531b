//! Row echelon forms over the two scalar backends.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{Field, FieldElem};

/// Arithmetic backend for the linear algebra. `ModP` works on raw `u64`
/// residues, `Rationals` on exact fractions.
pub(crate) trait Scalars: Clone + Send + Sync {
    type E: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a - c·b`
    fn sub_mul(&self, a: &Self::E, c: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn lift(&self, c: &FieldElem) -> Self::E;
    fn lower(&self, a: &Self::E) -> FieldElem;
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct ModP(pub u64);

#[derive(Clone, Copy, Debug)]
pub(crate) struct Rationals;

impl Scalars for ModP {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn sub_mul(&self, a: &u64, c: &u64, b: &u64) -> u64 {
        let cb = c * b % self.0;
        (a + self.0 - cb) % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        match Field::Prime(self.0).inv(&FieldElem::Mod(*a)) {
            Some(FieldElem::Mod(v)) => v,
            _ => panic!("inverse of zero"),
        }
    }
    fn lift(&self, c: &FieldElem) -> u64 {
        match c {
            FieldElem::Mod(v) => *v,
            FieldElem::Rat(_) => panic!("rational coefficient in a prime field"),
        }
    }
    fn lower(&self, a: &u64) -> FieldElem {
        FieldElem::Mod(*a)
    }
}

impl Scalars for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub_mul(&self, a: &BigRational, c: &BigRational, b: &BigRational) -> BigRational {
        a - c * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn lift(&self, c: &FieldElem) -> BigRational {
        match c {
            FieldElem::Rat(v) => v.clone(),
            FieldElem::Mod(_) => panic!("modular coefficient over the rationals"),
        }
    }
    fn lower(&self, a: &BigRational) -> FieldElem {
        FieldElem::Rat(a.clone())
    }
}

/// Sparse row: `(column, value)` pairs, strictly increasing columns, no zeros.
pub(crate) type SparseRow<E> = Vec<(u32, E)>;

const NO_PIVOT: u32 = u32::MAX;

/// Row echelon form whose rows are normalized to leading coefficient one and
/// whose pivots are the leftmost nonzero columns.
#[derive(Clone, Debug)]
pub(crate) struct Echelon<S: Scalars> {
    pub(crate) scalars: S,
    pivot_row: Vec<u32>,
    rows: Vec<SparseRow<S::E>>,
}

impl<S: Scalars> Echelon<S> {
    pub(crate) fn new(scalars: S, ncols: usize) -> Self {
        Echelon { scalars, pivot_row: vec![NO_PIVOT; ncols], rows: Vec::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn rows(&self) -> &[SparseRow<S::E>] {
        &self.rows
    }

    pub(crate) fn is_pivot(&self, col: u32) -> bool {
        self.pivot_row[col as usize] != NO_PIVOT
    }

    /// `r - c·rows[i]`
    fn eliminate(&self, r: &SparseRow<S::E>, c: &S::E, i: usize) -> SparseRow<S::E> {
        let p = &self.rows[i];
        let s = &self.scalars;
        let mut out = Vec::with_capacity(r.len() + p.len());
        let (mut a, mut b) = (0, 0);
        while a < r.len() || b < p.len() {
            let ca = r.get(a).map_or(u32::MAX, |e| e.0);
            let cb = p.get(b).map_or(u32::MAX, |e| e.0);
            if ca < cb {
                out.push(r[a].clone());
                a += 1;
            } else if cb < ca {
                out.push((cb, s.sub_mul(&s.zero(), c, &p[b].1)));
                b += 1;
            } else {
                let v = s.sub_mul(&r[a].1, c, &p[b].1);
                if !s.is_zero(&v) {
                    out.push((ca, v));
                }
                a += 1;
                b += 1;
            }
        }
        out
    }

    /// Reduces the leading entries of `r` until its leading column is not a
    /// pivot. Returns the empty row exactly when `r` lies in the row space.
    pub(crate) fn reduce_head(&self, mut r: SparseRow<S::E>) -> SparseRow<S::E> {
        while let Some((col, v)) = r.first() {
            let i = self.pivot_row[*col as usize];
            if i == NO_PIVOT {
                break;
            }
            let v = v.clone();
            r = self.eliminate(&r, &v, i as usize);
        }
        r
    }

    /// Adds a row to the span. Returns whether the rank grew.
    pub(crate) fn insert(&mut self, r: SparseRow<S::E>) -> bool {
        let r = self.reduce_head(r);
        let Some((col, lead)) = r.first() else {
            return false;
        };
        let col = *col;
        let s = &self.scalars;
        let inv = s.inv(lead);
        let normalized: SparseRow<S::E> = r.iter().map(|(c, v)| (*c, s.mul(v, &inv))).collect();
        self.pivot_row[col as usize] = self.rows.len() as u32;
        self.rows.push(normalized);
        true
    }

    pub(crate) fn contains(&self, r: SparseRow<S::E>) -> bool {
        self.reduce_head(r).is_empty()
    }

    /// Number of pivots in columns `< bound`.
    pub(crate) fn pivots_below(&self, bound: usize) -> usize {
        self.pivot_row[..bound].iter().filter(|&&p| p != NO_PIVOT).count()
    }

    /// Projects onto the first `ncols` columns and brings the result to
    /// reduced row echelon form, rows sorted by pivot column.
    pub(crate) fn project_rref(&self, ncols: usize) -> Echelon<S> {
        let mut rows: Vec<SparseRow<S::E>> = self
            .rows
            .iter()
            .filter(|r| (r[0].0 as usize) < ncols)
            .map(|r| r.iter().filter(|(c, _)| (*c as usize) < ncols).cloned().collect())
            .collect();
        rows.sort_by_key(|r: &SparseRow<S::E>| r[0].0);
        let mut out = Echelon::new(self.scalars.clone(), ncols);
        for (i, r) in rows.iter().enumerate() {
            out.pivot_row[r[0].0 as usize] = i as u32;
        }
        out.rows = rows;
        // Back substitution, last pivot first.
        for i in (0..out.rows.len()).rev() {
            let pivot_col = out.rows[i][0].0;
            for j in 0..i {
                let hit = out.rows[j].iter().find(|(c, _)| *c == pivot_col).map(|(_, v)| v.clone());
                if let Some(v) = hit {
                    out.rows[j] = out.eliminate(&out.rows[j], &v, i);
                }
            }
        }
        out
    }
}

/// A particular solution and a kernel basis.
pub(crate) type AffineSolution<E> = (Vec<E>, Vec<Vec<E>>);

/// Solves `A·z = rhs` by dense Gauss-Jordan elimination. Returns a particular
/// solution (free variables zero) and a basis of the kernel, or `None` when
/// the system is inconsistent.
pub(crate) fn solve_affine<S: Scalars>(
    s: &S,
    mut a: Vec<Vec<S::E>>,
    rhs: Vec<S::E>,
    ncols: usize,
) -> Option<AffineSolution<S::E>> {
    for (row, b) in a.iter_mut().zip(rhs) {
        row.push(b);
    }
    let nrows = a.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !s.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let inv = s.inv(&a[r][c]);
        for v in a[r].iter_mut() {
            *v = s.mul(v, &inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || s.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !s.is_zero(pv) {
                    *v = s.sub_mul(v, &f, pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    if a[r..].iter().any(|row| !s.is_zero(&row[ncols])) {
        return None;
    }
    let mut particular = vec![s.zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = a[i][ncols].clone();
    }
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![s.zero(); ncols];
        v[free] = s.one();
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = s.neg(&a[i][free]);
        }
        kernel.push(v);
    }
    Some((particular, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[(u32, u64)]) -> SparseRow<u64> {
        v.to_vec()
    }

    #[test]
    fn rank_and_membership_mod_p() {
        let mut e = Echelon::new(ModP(7), 4);
        assert!(e.insert(row(&[(0, 1), (1, 2)])));
        assert!(e.insert(row(&[(0, 3), (2, 1)])));
        assert!(!e.insert(row(&[(0, 2), (1, 4)])));
        assert_eq!(e.rank(), 2);
        // 1·r1 + 1·r2 = (4, 2, 1, 0)
        assert!(e.contains(row(&[(0, 4), (1, 2), (2, 1)])));
        assert!(!e.contains(row(&[(3, 1)])));
        assert_eq!(e.pivots_below(1), 1);
        assert_eq!(e.pivots_below(4), 2);
    }

    #[test]
    fn rref_projection_is_reduced() {
        let mut e = Echelon::new(ModP(5), 3);
        e.insert(row(&[(0, 1), (1, 1), (2, 1)]));
        e.insert(row(&[(1, 1), (2, 3)]));
        let r = e.project_rref(3);
        assert_eq!(r.rows()[0], row(&[(0, 1), (2, 3)]));
        assert_eq!(r.rows()[1], row(&[(1, 1), (2, 3)]));
        let p = e.project_rref(1);
        assert_eq!(p.rows(), &[row(&[(0, 1)])]);
    }

    #[test]
    fn affine_solver() {
        let s = Rationals;
        let q = |n: i64| BigRational::from_integer(n.into());
        // x + y = 3, 2x + 2y = 6 -> particular (3, 0), kernel (-1, 1)
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        let (p, k) = solve_affine(&s, a.clone(), vec![q(3), q(6)], 2).unwrap();
        assert_eq!(p, vec![q(3), q(0)]);
        assert_eq!(k, vec![vec![q(-1), q(1)]]);
        assert!(solve_affine(&s, a, vec![q(3), q(7)], 2).is_none());
    }
}
