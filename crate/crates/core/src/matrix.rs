//! Dense matrices of polynomials, used for presentations and module maps.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Polynomial;

pub type PolyVec<K> = Vec<Polynomial<K>>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix<K: Field> {
    nrows: usize,
    ncols: usize,
    entries: Vec<Polynomial<K>>,
}

impl<K: Field> PolyMatrix<K> {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        PolyMatrix {
            nrows,
            ncols,
            entries: vec![Polynomial::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Polynomial::one())
    }

    pub fn scalar(n: usize, p: Polynomial<K>) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    /// From rows; all rows must have the same length. `ncols` is needed for
    /// matrices with no rows.
    pub fn from_rows(rows: Vec<Vec<Polynomial<K>>>, ncols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch("rows of unequal length".into()));
        }
        Ok(PolyMatrix {
            nrows: rows.len(),
            ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_columns(cols: &[PolyVec<K>], nrows: usize) -> Self {
        let mut m = Self::zero(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "column length");
            for (i, p) in c.iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        m
    }

    /// Parses a matrix of polynomial strings in the given variable names.
    pub fn parse(rows: &[Vec<&str>], names: &[String]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| Polynomial::parse(s, names)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Self::from_rows(parsed, ncols)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<K> {
        &self.entries[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial<K>) {
        self.entries[i * self.ncols + j] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial<K>)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, p)| (k / self.ncols.max(1), k % self.ncols.max(1), p))
    }

    pub fn column(&self, j: usize) -> PolyVec<K> {
        (0..self.nrows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<PolyVec<K>> {
        (0..self.ncols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> PolyVec<K> {
        (0..self.ncols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.ncols != o.nrows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, o.nrows, o.ncols
            )));
        }
        let mut m = Self::zero(self.nrows, o.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.ncols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let s = m.get(i, j) + &(a * b);
                        m.set(i, j, s);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn apply(&self, v: &[Polynomial<K>]) -> Result<PolyVec<K>> {
        if v.len() != self.ncols {
            return Err(Error::ShapeMismatch("vector length".into()));
        }
        Ok((0..self.nrows)
            .map(|i| {
                let mut acc = Polynomial::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = &acc + &(self.get(i, j) * x);
                    }
                }
                acc
            })
            .collect())
    }

    fn zip(&self, o: &Self, f: impl Fn(&Polynomial<K>, &Polynomial<K>) -> Polynomial<K>) -> Result<Self> {
        if self.nrows != o.nrows || self.ncols != o.ncols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.nrows, self.ncols, o.nrows, o.ncols
            )));
        }
        Ok(PolyMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a - b)
    }

    pub fn map(&self, f: impl Fn(&Polynomial<K>) -> Polynomial<K>) -> Self {
        PolyMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, p: &Polynomial<K>) -> Self {
        self.map(|e| e * p)
    }

    pub fn neg(&self) -> Self {
        self.map(|e| -e)
    }

    /// `[[a, b], [c, d]]` from four blocks of compatible shapes.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.nrows != b.nrows || c.nrows != d.nrows || a.ncols != c.ncols || b.ncols != d.ncols {
            return Err(Error::ShapeMismatch("incompatible blocks".into()));
        }
        let mut m = Self::zero(a.nrows + c.nrows, a.ncols + b.ncols);
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, a.ncols), (c, a.nrows, 0), (d, a.nrows, a.ncols)] {
            for i in 0..blk.nrows {
                for j in 0..blk.ncols {
                    m.set(r0 + i, c0 + j, blk.get(i, j).clone());
                }
            }
        }
        Ok(m)
    }

    pub fn block_diag(a: &Self, b: &Self) -> Self {
        Self::block(
            a,
            &Self::zero(a.nrows, b.ncols),
            &Self::zero(b.nrows, a.ncols),
            b,
        )
        .expect("shapes agree by construction")
    }

    pub fn hstack(a: &Self, b: &Self) -> Result<Self> {
        if a.nrows != b.nrows {
            return Err(Error::ShapeMismatch("hstack row counts differ".into()));
        }
        Self::block(a, b, &Self::zero(0, a.ncols), &Self::zero(0, b.ncols))
    }

    pub fn vstack(a: &Self, b: &Self) -> Result<Self> {
        if a.ncols != b.ncols {
            return Err(Error::ShapeMismatch("vstack column counts differ".into()));
        }
        Self::block(a, &Self::zero(a.nrows, 0), b, &Self::zero(b.nrows, 0))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut m = Self::zero(rows.len(), self.ncols);
        for (ni, &i) in rows.iter().enumerate() {
            for j in 0..self.ncols {
                m.set(ni, j, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zero(self.nrows, cols.len());
        for i in 0..self.nrows {
            for (nj, &j) in cols.iter().enumerate() {
                m.set(i, nj, self.get(i, j).clone());
            }
        }
        m
    }

    /// Entry-wise exact division; `None` if some entry is not divisible.
    pub fn div_exact(&self, f: &Polynomial<K>) -> Option<Self> {
        let mut m = Self::zero(self.nrows, self.ncols);
        for (k, e) in self.entries.iter().enumerate() {
            m.entries[k] = divide_exact(e, f)?;
        }
        Some(m)
    }

    pub fn to_strings(&self, names: &[String]) -> Vec<Vec<String>> {
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self.get(i, j).to_string_with(names)).collect())
            .collect()
    }
}

impl<K: Field> fmt::Debug for PolyMatrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| format!("{:?}", self.get(i, j))).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

/// `p / f` when `f` divides `p` exactly. A single polynomial is a Gröbner
/// basis of the ideal it generates, so a nonzero remainder proves
/// non-divisibility.
pub fn divide_exact<K: Field>(p: &Polynomial<K>, f: &Polynomial<K>) -> Option<Polynomial<K>> {
    let (lm, lc) = f.terms().next_back()?;
    let lc_inv = lc.inv()?;
    let mut r = p.clone();
    let mut q = Polynomial::zero();
    loop {
        let lead = r.terms().next_back().map(|(m, c)| (*m, c.clone()));
        let Some((m, c)) = lead else { break };
        let u = lm.quotient_of(&m)?;
        let coeff = c * lc_inv.clone();
        r.add_scaled(&f.mul_monomial(&u), &-coeff.clone());
        q.add_term(u, coeff);
    }
    Some(q)
}
