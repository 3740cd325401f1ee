//! Sparse exact linear algebra.
//!
//! Vectors are sorted `(index, value)` lists without zeros. [`Echelon`] keeps
//! rows whose *lowest* index is a distinct pivot; with columns ordered by
//! degree this matches the local (lowest-degree-first) elimination used for
//! truncated quotients.

use std::collections::{BTreeMap, HashMap};

use crate::field::Field;

pub type SparseVec<K> = Vec<(usize, K)>;

/// Builds a sparse vector from unsorted entries, summing duplicates.
pub fn sparse_from<K: Field>(entries: impl IntoIterator<Item = (usize, K)>) -> SparseVec<K> {
    let mut acc: BTreeMap<usize, K> = BTreeMap::new();
    for (i, v) in entries {
        accumulate(&mut acc, i, v);
    }
    acc.into_iter().collect()
}

fn accumulate<K: Field>(acc: &mut BTreeMap<usize, K>, i: usize, v: K) {
    if v.is_zero() {
        return;
    }
    match acc.get_mut(&i) {
        Some(x) => {
            let s = x.clone() + v;
            if s.is_zero() {
                acc.remove(&i);
            } else {
                *x = s;
            }
        }
        None => {
            acc.insert(i, v);
        }
    }
}

pub fn scale_sparse<K: Field>(v: &SparseVec<K>, c: &K) -> SparseVec<K> {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x.clone() * c.clone())).collect()
}

pub fn add_sparse<K: Field>(a: &SparseVec<K>, b: &SparseVec<K>) -> SparseVec<K> {
    sparse_from(a.iter().cloned().chain(b.iter().cloned()))
}

/// Row echelon form with lowest-index pivots, rows normalized to pivot 1.
#[derive(Clone, Debug, Default)]
pub struct Echelon<K: Field> {
    rows: Vec<SparseVec<K>>,
    pivots: HashMap<usize, usize>,
}

impl<K: Field> Echelon<K> {
    pub fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn rows(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    fn eliminate(&self, v: &SparseVec<K>, full: bool) -> BTreeMap<usize, K> {
        let mut acc: BTreeMap<usize, K> = v.iter().cloned().collect();
        let mut cursor = 0usize;
        loop {
            if !full {
                // stop once the lowest entry is not a pivot
                match acc.iter().next() {
                    Some((k, _)) if !self.pivots.contains_key(k) => break,
                    None => break,
                    _ => {}
                }
            }
            let next = acc
                .range(cursor..)
                .find(|(k, _)| self.pivots.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let Some((col, c)) = next else { break };
            let row = &self.rows[self.pivots[&col]];
            for (i, x) in row {
                accumulate(&mut acc, *i, -(c.clone() * x.clone()));
            }
            cursor = col + 1;
        }
        acc
    }

    /// Normal form: the unique representative supported on non-pivot columns.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        self.eliminate(v, true).into_iter().collect()
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.eliminate(v, true).is_empty()
    }

    /// Adds a vector to the span. Returns the new pivot column, or `None` if
    /// the vector was already in the span.
    pub fn insert(&mut self, v: SparseVec<K>) -> Option<usize> {
        let acc = self.eliminate(&v, false);
        let (&col, lead) = acc.iter().next()?;
        let inv = lead.inv().expect("nonzero lead");
        let row: SparseVec<K> = acc.iter().map(|(i, x)| (*i, x.clone() * inv.clone())).collect();
        self.pivots.insert(col, self.rows.len());
        self.rows.push(row);
        Some(col)
    }
}

/// A k-linear map given by sparse columns.
#[derive(Clone, Debug)]
pub struct LinearMap<K: Field> {
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub columns: Vec<SparseVec<K>>,
}

impl<K: Field> LinearMap<K> {
    pub fn new(domain_dim: usize, codomain_dim: usize, columns: Vec<SparseVec<K>>) -> Self {
        assert_eq!(columns.len(), domain_dim);
        debug_assert!(columns
            .iter()
            .all(|c| c.iter().all(|(i, _)| *i < codomain_dim)));
        LinearMap {
            domain_dim,
            codomain_dim,
            columns,
        }
    }

    pub fn zero(domain_dim: usize, codomain_dim: usize) -> Self {
        Self::new(domain_dim, codomain_dim, vec![Vec::new(); domain_dim])
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, n, (0..n).map(|i| vec![(i, K::one())]).collect())
    }

    pub fn apply(&self, v: &SparseVec<K>) -> SparseVec<K> {
        sparse_from(
            v.iter()
                .flat_map(|(j, c)| self.columns[*j].iter().map(move |(i, x)| (*i, c.clone() * x.clone()))),
        )
    }

    pub fn compose(&self, first: &LinearMap<K>) -> LinearMap<K> {
        assert_eq!(first.codomain_dim, self.domain_dim);
        LinearMap::new(
            first.domain_dim,
            self.codomain_dim,
            first.columns.iter().map(|c| self.apply(c)).collect(),
        )
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new();
        for c in &self.columns {
            e.insert(c.clone());
        }
        e.rank()
    }

    pub fn kernel_dim(&self) -> usize {
        self.domain_dim - self.rank()
    }

    pub fn coker_dim(&self) -> usize {
        self.codomain_dim - self.rank()
    }

    fn augmented(&self) -> Echelon<K> {
        let n = self.codomain_dim;
        let mut e = Echelon::new();
        for (j, c) in self.columns.iter().enumerate() {
            let mut row = c.clone();
            row.push((n + j, K::one()));
            e.insert(row);
        }
        e
    }

    /// A basis of the kernel.
    pub fn kernel_basis(&self) -> Vec<SparseVec<K>> {
        let n = self.codomain_dim;
        self.augmented()
            .rows()
            .iter()
            .filter(|r| r.first().is_some_and(|(i, _)| *i >= n))
            .map(|r| r.iter().map(|(i, x)| (i - n, x.clone())).collect())
            .collect()
    }

    /// Some `y` with `self(y) = b`.
    pub fn solve(&self, b: &SparseVec<K>) -> Option<SparseVec<K>> {
        let n = self.codomain_dim;
        let r = self.augmented().reduce(b);
        if r.first().is_some_and(|(i, _)| *i < n) {
            return None;
        }
        Some(r.into_iter().map(|(i, x)| (i - n, -x)).collect())
    }
}
