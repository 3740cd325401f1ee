//! Finite-dimensional models of `A^r / (U + m^{L+1} A^r)`.
//!
//! Columns are `(component, monomial)` pairs of degree at most `L`, ordered by
//! degree. Spanning rows are all monomial multiples of the generators of `U`
//! (relations included), truncated at degree `L`. Because the echelon form
//! pivots on the lowest column, the same elimination also yields the
//! dimension at every smaller level.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{sparse_from, Echelon, LinearMap, SparseVec};
use crate::matrix::{PolyMatrix, PolyVec};
use crate::poly::{monomials_of_degree, Monomial, Polynomial};
use crate::ring::Ring;

pub const DEFAULT_DIMENSION_CAP: usize = 200_000;

static DIMENSION_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_DIMENSION_CAP);

/// Largest number of columns a single truncation may use.
pub fn dimension_cap() -> usize {
    DIMENSION_CAP.load(Ordering::Relaxed)
}

pub fn set_dimension_cap(cap: usize) {
    DIMENSION_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Number of monomials of degree at most `level` in `nvars` variables.
pub fn monomial_count(nvars: usize, level: u32) -> usize {
    // binom(level + nvars, nvars), saturating
    let mut acc: u128 = 1;
    for i in 1..=nvars as u128 {
        acc = acc * (level as u128 + i) / i;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

#[derive(Clone, Debug)]
pub struct QuotientSpace<K: Field> {
    nvars: usize,
    rank: usize,
    level: u32,
    columns: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
    echelon: Echelon<K>,
    basis: Vec<usize>,
    basis_pos: HashMap<usize, usize>,
}

impl<K: Field> QuotientSpace<K> {
    /// `A^rank` (over the ambient polynomial ring) modulo the submodule
    /// generated by `generators`, truncated above degree `level`.
    pub fn build(nvars: usize, rank: usize, level: u32, generators: &[PolyVec<K>]) -> Result<Self> {
        let needed = monomial_count(nvars, level).saturating_mul(rank);
        let cap = dimension_cap();
        if needed > cap {
            return Err(Error::CapExceeded { needed, cap });
        }
        let mut columns = Vec::with_capacity(needed);
        for d in 0..=level {
            for m in monomials_of_degree(nvars, d) {
                for c in 0..rank {
                    columns.push((c, m));
                }
            }
        }
        let index: HashMap<(usize, Monomial), usize> =
            columns.iter().enumerate().map(|(i, k)| (*k, i)).collect();

        let mut rows: Vec<SparseVec<K>> = Vec::new();
        for g in generators {
            assert_eq!(g.len(), rank, "generator length");
            let order = g
                .iter()
                .filter(|p| !p.is_zero())
                .map(|p| p.lowest_degree().expect("nonzero"))
                .min();
            let Some(order) = order else { continue };
            if order > level {
                continue;
            }
            for du in 0..=(level - order) {
                for u in monomials_of_degree(nvars, du) {
                    let row = sparse_from(g.iter().enumerate().flat_map(|(c, p)| {
                        let index = &index;
                        p.terms().filter_map(move |(m, v)| {
                            let mm = m.mul(&u);
                            (mm.degree() <= level).then(|| (index[&(c, mm)], v.clone()))
                        })
                    }));
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        rows.sort_by_key(|r| (r[0].0, r.len()));
        let mut echelon = Echelon::new();
        for r in rows {
            echelon.insert(r);
        }
        let basis: Vec<usize> = (0..columns.len()).filter(|c| !echelon.is_pivot(*c)).collect();
        let basis_pos = basis.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        Ok(QuotientSpace {
            nvars,
            rank,
            level,
            columns,
            index,
            echelon,
            basis,
            basis_pos,
        })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Dimension of the same quotient truncated at a smaller level.
    pub fn dimension_at(&self, level: u32) -> usize {
        assert!(level <= self.level);
        self.basis
            .iter()
            .filter(|&&c| self.columns[c].1.degree() <= level)
            .count()
    }

    /// Basis elements as `(component, monomial)`.
    pub fn basis(&self) -> impl Iterator<Item = (usize, Monomial)> + '_ {
        self.basis.iter().map(|&c| self.columns[c])
    }

    pub fn basis_element(&self, i: usize) -> (usize, Monomial) {
        self.columns[self.basis[i]]
    }

    fn to_columns(&self, v: &[Polynomial<K>]) -> SparseVec<K> {
        sparse_from(v.iter().enumerate().flat_map(|(c, p)| {
            p.terms()
                .filter(|(m, _)| m.degree() <= self.level)
                .map(move |(m, x)| (self.index[&(c, *m)], x.clone()))
        }))
    }

    /// Coordinates of the class of `v` in the quotient basis.
    pub fn reduce(&self, v: &[Polynomial<K>]) -> SparseVec<K> {
        assert_eq!(v.len(), self.rank, "vector length");
        self.echelon
            .reduce(&self.to_columns(v))
            .into_iter()
            .map(|(c, x)| (self.basis_pos[&c], x))
            .collect()
    }

    pub fn reduce_poly(&self, p: &Polynomial<K>) -> SparseVec<K> {
        assert_eq!(self.rank, 1);
        self.reduce(std::slice::from_ref(p))
    }

    /// Coordinates of `p * e_comp`, `p` a single term.
    pub fn reduce_term(&self, comp: usize, c: &K, m: &Monomial) -> SparseVec<K> {
        if m.degree() > self.level || c.is_zero() {
            return Vec::new();
        }
        let col = self.index[&(comp, *m)];
        self.echelon
            .reduce(&vec![(col, c.clone())])
            .into_iter()
            .map(|(c, x)| (self.basis_pos[&c], x))
            .collect()
    }

    /// The normal-form representative with the given coordinates.
    pub fn lift(&self, coords: &SparseVec<K>) -> PolyVec<K> {
        let mut out = vec![Polynomial::zero(); self.rank];
        for (i, x) in coords {
            let (c, m) = self.basis_element(*i);
            out[c].add_term(m, x.clone());
        }
        out
    }

    pub fn is_zero_class(&self, v: &[Polynomial<K>]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Smallest `L' < level` with `dim(L') = dim(L'+1)`: then
    /// `m^{L'+1}` lies in the submodule (Nakayama).
    pub fn saturation_level(&self) -> Option<u32> {
        let mut counts = vec![0usize; self.level as usize + 1];
        for &c in &self.basis {
            counts[self.columns[c].1.degree() as usize] += 1;
        }
        (0..self.level).find(|&l| counts[l as usize + 1] == 0)
    }
}

/// `A / (extra + m^{L+1})` with its normal-form reducer.
#[derive(Clone, Debug)]
pub struct TruncatedAlgebra<K: Field> {
    ring: Arc<Ring<K>>,
    extra: Vec<Polynomial<K>>,
    space: QuotientSpace<K>,
}

impl<K: Field> TruncatedAlgebra<K> {
    pub fn build(ring: &Arc<Ring<K>>, extra: &[Polynomial<K>], level: u32) -> Result<Self> {
        let gens: Vec<PolyVec<K>> = ring
            .relations()
            .iter()
            .chain(extra)
            .map(|p| vec![p.clone()])
            .collect();
        let space = QuotientSpace::build(ring.nvars(), 1, level, &gens)?;
        Ok(TruncatedAlgebra {
            ring: ring.clone(),
            extra: extra.to_vec(),
            space,
        })
    }

    /// `A / J` for an `m`-primary `J = (extra)`, at a level where `m^{L+1}`
    /// is already contained in `J`, so the model is exact.
    pub fn saturated(ring: &Arc<Ring<K>>, extra: &[Polynomial<K>]) -> Result<Self> {
        let start = extra
            .iter()
            .filter_map(Polynomial::degree)
            .max()
            .unwrap_or(1)
            .max(1);
        let level = saturation_level(ring, extra, start)?;
        Self::build(ring, extra, level)
    }

    pub fn ring(&self) -> &Arc<Ring<K>> {
        &self.ring
    }

    pub fn extra(&self) -> &[Polynomial<K>] {
        &self.extra
    }

    pub fn space(&self) -> &QuotientSpace<K> {
        &self.space
    }

    pub fn level(&self) -> u32 {
        self.space.level()
    }

    pub fn dimension(&self) -> usize {
        self.space.dimension()
    }

    pub fn basis(&self) -> Vec<Monomial> {
        self.space.basis().map(|(_, m)| m).collect()
    }

    pub fn reduce(&self, p: &Polynomial<K>) -> SparseVec<K> {
        self.space.reduce_poly(p)
    }

    /// Normal form as a polynomial.
    pub fn normal_form(&self, p: &Polynomial<K>) -> Polynomial<K> {
        self.space.lift(&self.reduce(p)).pop().expect("rank one")
    }

    pub fn contains(&self, p: &Polynomial<K>) -> bool {
        self.reduce(p).is_empty()
    }

    /// Multiplication by `a` on the basis.
    pub fn mult_map(&self, a: &Polynomial<K>) -> LinearMap<K> {
        let n = self.dimension();
        let cols = (0..n)
            .map(|i| {
                let (_, m) = self.space.basis_element(i);
                self.reduce(&a.mul_monomial(&m))
            })
            .collect();
        LinearMap::new(n, n, cols)
    }

    /// `d ⊗ T : T^cols -> T^rows`, block `j` of the domain at offset `j*dim`.
    pub fn tensor_map(&self, d: &PolyMatrix<K>) -> LinearMap<K> {
        let n = self.dimension();
        let mut cols = Vec::with_capacity(d.ncols() * n);
        for j in 0..d.ncols() {
            for b in 0..n {
                let (_, m) = self.space.basis_element(b);
                let entries = (0..d.nrows()).flat_map(|i| {
                    let img = self.reduce(&d.get(i, j).mul_monomial(&m));
                    img.into_iter().map(move |(k, x)| (i * n + k, x))
                });
                cols.push(sparse_from(entries));
            }
        }
        LinearMap::new(d.ncols() * n, d.nrows() * n, cols)
    }
}

/// Least `L` with `m^{L+1} ⊆ (relations, extra)`, searched by doubling.
pub fn saturation_level<K: Field>(ring: &Arc<Ring<K>>, extra: &[Polynomial<K>], start: u32) -> Result<u32> {
    let gens: Vec<PolyVec<K>> = ring
        .relations()
        .iter()
        .chain(extra)
        .map(|p| vec![p.clone()])
        .collect();
    let mut level = start.max(1) + 1;
    loop {
        let space = QuotientSpace::build(ring.nvars(), 1, level, &gens)?;
        if let Some(l) = space.saturation_level() {
            return Ok(l);
        }
        let next = level * 2;
        let needed = monomial_count(ring.nvars(), next);
        if needed > dimension_cap() {
            return Err(Error::TruncationInsufficient(format!(
                "ideal does not contain a power of the maximal ideal below degree {level}"
            )));
        }
        level = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use proptest::prelude::*;

    type F = Fp<32003>;

    fn node() -> Arc<Ring<F>> {
        Ring::parse(2, &["x*y"]).unwrap()
    }

    #[test]
    fn node_truncation_basis() {
        let r = node();
        let t = TruncatedAlgebra::build(&r, &[], 3).unwrap();
        assert_eq!(t.dimension(), 7);
        let mut got: Vec<String> = t.basis().iter().map(|m| r.show(&Polynomial::monomial(*m))).collect();
        got.sort();
        let mut want = vec!["1", "x", "x^2", "x^3", "y", "y^2", "y^3"];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn line_modulo_square() {
        let r = Ring::<F>::parse(2, &["y"]).unwrap();
        let t = TruncatedAlgebra::build(&r, &[r.parse_poly("x^2").unwrap()], 5).unwrap();
        assert_eq!(t.dimension(), 2);
        let t = TruncatedAlgebra::build(&node(), &[Polynomial::var(0), Polynomial::var(1)], 4).unwrap();
        assert_eq!(t.dimension(), 1);
    }

    #[test]
    fn multiplication_by_x_on_node() {
        let r = node();
        let t = TruncatedAlgebra::build(&r, &[], 2).unwrap();
        assert_eq!(t.mult_map(&Polynomial::one()).rank(), 5);
        assert_eq!(t.mult_map(&Polynomial::zero()).rank(), 0);
        let mx = t.mult_map(&Polynomial::var(0));
        assert_eq!(mx.rank(), 2);
        // 1 -> x, x -> x^2, the rest to 0
        let basis = t.basis();
        for (i, m) in basis.iter().enumerate() {
            let img = t.space().lift(&mx.columns[i]).pop().unwrap();
            let expect = if m.exponent(1) == 0 && m.degree() < 2 {
                Polynomial::monomial(m.mul(&Monomial::var(0)))
            } else {
                Polynomial::zero()
            };
            assert_eq!(img, expect);
        }
    }

    #[test]
    fn node_dimensions_are_odd_numbers() {
        let r = node();
        let t = TruncatedAlgebra::build(&r, &[], 30).unwrap();
        for n in 0..=30 {
            assert_eq!(t.space().dimension_at(n), 2 * n as usize + 1);
        }
    }

    #[test]
    fn saturation_finds_power_of_maximal_ideal() {
        let r = node();
        // (x^2, y^3) contains m^4 in A but m^3 is not inside: x*y is 0 already
        let j = [r.parse_poly("x^2").unwrap(), r.parse_poly("y^3").unwrap()];
        let l = saturation_level(&r, &j, 2).unwrap();
        assert_eq!(l, 2);
        let t = TruncatedAlgebra::saturated(&r, &j).unwrap();
        assert_eq!(t.dimension(), 4);
    }

    #[test]
    fn cap_is_enforced() {
        let r = node();
        let q = QuotientSpace::<F>::build(2, 1000, 1000, &[]);
        assert!(matches!(q, Err(Error::CapExceeded { .. })));
        let _ = r;
    }

    proptest! {
        #[test]
        fn dimension_monotone_in_level(level in 0u32..8, a in 0u32..4, b in 0u32..4) {
            let r = Ring::<F>::parse(3, &["x^2", "y^2"]).unwrap();
            let extra = vec![Polynomial::monomial(Monomial::from_exponents(&[a, b, 2]))];
            let lo = TruncatedAlgebra::build(&r, &extra, level).unwrap();
            let hi = TruncatedAlgebra::build(&r, &extra, level + 1).unwrap();
            prop_assert!(lo.dimension() <= hi.dimension());
            prop_assert_eq!(hi.space().dimension_at(level), lo.dimension());
        }

        #[test]
        fn reduce_is_linear_and_fixes_basis(c1 in -5i64..5, c2 in -5i64..5, e in 0u32..4) {
            let r = node();
            let t = TruncatedAlgebra::build(&r, &[], 4).unwrap();
            let p = r.parse_poly(&format!("{c1}*x^{e}*y + {c2}*y^2")).unwrap();
            let q = r.parse_poly("x^3 + 2*x*y").unwrap();
            let sum = &p + &q;
            let lhs = t.reduce(&sum);
            let rhs = crate::linalg::add_sparse(&t.reduce(&p), &t.reduce(&q));
            prop_assert_eq!(lhs, rhs);
            let nf = t.normal_form(&p);
            prop_assert_eq!(t.normal_form(&nf), nf);
            for m in t.basis() {
                let b = Polynomial::monomial(m);
                prop_assert_eq!(t.normal_form(&b), b);
            }
        }
    }
}
