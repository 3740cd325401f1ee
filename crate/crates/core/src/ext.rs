//! `Ext^1_A(M, N)` for graded modules given by matrix factorizations.
//!
//! With the periodic resolution `F_2 --psi--> F_1 --phi--> F_0 -> M`, a
//! class is represented by `W ∈ Hom(F_1, N)` with `W psi ∈ im(phi_N)`,
//! modulo `U phi`. Each weighted degree `e` gives a finite-dimensional
//! complex `Hom(F_0, N)_e -> Hom(F_1, N)_e -> Hom(F_2, N)_e`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{GradedPiece, DEFAULT_HEADROOM};
use crate::linalg::{sparse_from, Echelon, LinearMap, SparseVec};
use crate::matrix::{PolyMatrix, PolyVec};
use crate::module::Module;
use crate::poly::Polynomial;
use crate::sequence::ShortExactSequence;

/// Hard limit on the degree scan, in units of the largest variable weight.
const EXT_SCAN_LIMIT: i64 = 64;

/// Largest number of classes [`ExtGroup::classes`] will list.
pub const ENUMERATION_CAP: usize = 1 << 16;

#[derive(Clone, Debug)]
struct Block<K: Field> {
    offset: usize,
    piece: GradedPiece<K>,
}

/// The complex `C_0 -> C_1 -> C_2` in one degree.
#[derive(Clone, Debug)]
struct DegreeComplex<K: Field> {
    c0: Vec<Block<K>>,
    c1: Vec<Block<K>>,
    c1_dim: usize,
    delta0: LinearMap<K>,
    delta1: LinearMap<K>,
}

#[derive(Clone, Debug)]
struct ExtPiece<K: Field> {
    degree: i64,
    complex: DegreeComplex<K>,
    vectors: Vec<SparseVec<K>>,
    matrices: Vec<PolyMatrix<K>>,
}

#[derive(Clone, Debug)]
pub struct ExtGroup<K: Field> {
    m: Module<K>,
    n: Module<K>,
    g_m: Vec<i64>,
    h_m: Vec<i64>,
    h2_m: Vec<i64>,
    g_n: Vec<i64>,
    n_extra: Vec<(PolyVec<K>, i64)>,
    pieces: Vec<ExtPiece<K>>,
    scanned: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtSummary {
    pub dimension: usize,
    pub degrees: Vec<(i64, usize)>,
    pub scanned: (i64, i64),
}

fn blocks<K: Field>(
    ring: &crate::ring::Ring<K>,
    shifts_n: &[i64],
    extra: &[(PolyVec<K>, i64)],
    bases: &[i64],
    e: i64,
) -> Result<(Vec<Block<K>>, usize)> {
    let mut out = Vec::with_capacity(bases.len());
    let mut offset = 0;
    for &b in bases {
        let piece = GradedPiece::build(ring, shifts_n, b + e, extra)?;
        let dim = piece.dimension();
        out.push(Block { offset, piece });
        offset += dim;
    }
    Ok((out, offset))
}

/// `v ↦ (Σ_i mat[i][j] v_i)_j` from blocks over the rows of `mat` to
/// blocks over its columns.
fn block_map<K: Field>(mat: &PolyMatrix<K>, src: &[Block<K>], src_dim: usize, tgt: &[Block<K>], tgt_dim: usize) -> LinearMap<K> {
    let mut cols = Vec::with_capacity(src_dim);
    for (i, sb) in src.iter().enumerate() {
        for k in 0..sb.piece.dimension() {
            let (l, mono) = sb.piece.basis_element(k);
            let mut entries = Vec::new();
            for (j, tb) in tgt.iter().enumerate() {
                let p = mat.get(i, j);
                if p.is_zero() {
                    continue;
                }
                for (m, c) in p.terms() {
                    for (idx, x) in tb.piece.reduce_term(l, c, &m.mul(&mono)) {
                        entries.push((tb.offset + idx, x));
                    }
                }
            }
            cols.push(sparse_from(entries));
        }
    }
    LinearMap::new(src_dim, tgt_dim, cols)
}

fn lift_blocks<K: Field>(blocks: &[Block<K>], v: &SparseVec<K>, rank: usize) -> PolyMatrix<K> {
    let cols: Vec<PolyVec<K>> = blocks
        .iter()
        .map(|b| {
            let d = b.piece.dimension();
            let local: SparseVec<K> = v
                .iter()
                .filter(|(i, _)| *i >= b.offset && *i < b.offset + d)
                .map(|(i, x)| (i - b.offset, x.clone()))
                .collect();
            b.piece.lift(&local, rank)
        })
        .collect();
    PolyMatrix::from_columns(&cols, rank)
}

impl<K: Field> ExtGroup<K> {
    /// `Ext^1(M, N)`, scanning degrees until `headroom` weight units pass
    /// without a new class.
    pub fn compute(m: &Module<K>, n: &Module<K>) -> Result<Self> {
        Self::compute_with(m, n, DEFAULT_HEADROOM)
    }

    pub fn compute_with(m: &Module<K>, n: &Module<K>, headroom: i64) -> Result<Self> {
        let mut group = Self::prepare(m, n)?;
        if group.g_m.is_empty() || group.g_n.is_empty() {
            return Ok(group);
        }
        let max_w = *group.m.ring().require_weights()?.iter().max().unwrap() as i64;
        let lo = group.g_n.iter().min().unwrap() - group.h_m.iter().max().unwrap();
        let base = lo + group.h2_m.iter().max().unwrap() - group.g_m.iter().min().unwrap();
        let window = headroom.max(1) * max_w;
        let mut last = base;
        let mut e = lo;
        while e <= last.max(base) + window {
            if e > lo + EXT_SCAN_LIMIT * max_w {
                return Err(Error::TruncationInsufficient(format!(
                    "Ext classes keep appearing up to degree {e}"
                )));
            }
            let complex = group.complex_at(e)?;
            let mut span = Echelon::new();
            for c in &complex.delta0.columns {
                span.insert(c.clone());
            }
            let mut vectors = Vec::new();
            for k in complex.delta1.kernel_basis() {
                if span.insert(k.clone()).is_some() {
                    vectors.push(k);
                }
            }
            if !vectors.is_empty() {
                let rank = group.n.phi().nrows();
                let matrices = vectors.iter().map(|v| lift_blocks(&complex.c1, v, rank)).collect();
                group.pieces.push(ExtPiece {
                    degree: e,
                    complex,
                    vectors,
                    matrices,
                });
                last = e;
            }
            e += 1;
        }
        group.scanned = (lo, e - 1);
        Ok(group)
    }

    fn prepare(m: &Module<K>, n: &Module<K>) -> Result<Self> {
        let ring = m.ring().clone();
        if !ring.same_as(n.ring()) {
            return Err(Error::RingMismatch);
        }
        let w = ring.require_weights()?.to_vec();
        let df = ring
            .hypersurface_equation()?
            .homogeneous_degree(&w)
            .flatten()
            .ok_or_else(|| Error::NotGraded("hypersurface equation".into()))? as i64;
        let m = m.as_mf()?;
        let n = n.as_mf()?;
        let gm = m.require_grading()?.clone();
        let gn = n.require_grading()?.clone();
        let h2_m: Vec<i64> = gm.generators.iter().map(|g| g + df).collect();
        let n_extra: Vec<(PolyVec<K>, i64)> = n.phi().columns().into_iter().zip(gn.relations.iter().copied()).collect();
        Ok(ExtGroup {
            g_m: gm.generators.clone(),
            h_m: gm.relations.clone(),
            h2_m,
            g_n: gn.generators.clone(),
            n_extra,
            m,
            n,
            pieces: Vec::new(),
            scanned: (0, -1),
        })
    }

    fn complex_at(&self, e: i64) -> Result<DegreeComplex<K>> {
        let ring = self.m.ring();
        let (c0, d0) = blocks(ring, &self.g_n, &self.n_extra, &self.g_m, e)?;
        let (c1, d1) = blocks(ring, &self.g_n, &self.n_extra, &self.h_m, e)?;
        let (c2, d2) = blocks(ring, &self.g_n, &self.n_extra, &self.h2_m, e)?;
        let (phi, psi) = self.m.mf_pair()?;
        let delta0 = block_map(&phi, &c0, d0, &c1, d1);
        let delta1 = block_map(&psi, &c1, d1, &c2, d2);
        Ok(DegreeComplex {
            c0,
            c1,
            c1_dim: d1,
            delta0,
            delta1,
        })
    }

    pub fn m(&self) -> &Module<K> {
        &self.m
    }

    pub fn n(&self) -> &Module<K> {
        &self.n
    }

    pub fn dimension(&self) -> usize {
        self.pieces.iter().map(|p| p.vectors.len()).sum()
    }

    /// Class matrices `W` with their degrees.
    pub fn basis(&self) -> Vec<(i64, PolyMatrix<K>)> {
        self.pieces
            .iter()
            .flat_map(|p| p.matrices.iter().map(move |w| (p.degree, w.clone())))
            .collect()
    }

    pub fn summary(&self) -> ExtSummary {
        ExtSummary {
            dimension: self.dimension(),
            degrees: self.pieces.iter().map(|p| (p.degree, p.vectors.len())).collect(),
            scanned: self.scanned,
        }
    }

    /// `Σ c_i W_i`.
    pub fn class_matrix(&self, coeffs: &[K]) -> Result<PolyMatrix<K>> {
        let basis = self.basis();
        if coeffs.len() != basis.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for an Ext group of dimension {}",
                coeffs.len(),
                basis.len()
            )));
        }
        let (phi_n, _) = self.n.mf_pair()?;
        let (phi_m, _) = self.m.mf_pair()?;
        let mut w = PolyMatrix::zero(phi_n.nrows(), phi_m.ncols());
        for ((_, b), c) in basis.iter().zip(coeffs) {
            w = w.add(&b.scale(&Polynomial::constant(c.clone())))?;
        }
        Ok(w)
    }

    /// The extension with class `Σ c_i W_i`.
    pub fn sequence(&self, coeffs: &[K]) -> Result<ShortExactSequence<K>> {
        ShortExactSequence::standard(&self.n, &self.m, self.class_matrix(coeffs)?)
    }

    /// Every coefficient vector, for a finite field and a small group.
    pub fn classes(&self) -> Result<Vec<Vec<K>>> {
        let elems = K::elements()
            .ok_or_else(|| Error::Precondition("class enumeration needs a finite field".into()))?;
        let dim = self.dimension();
        let count = elems.len().checked_pow(dim as u32).filter(|&c| c <= ENUMERATION_CAP).ok_or({
            Error::CapExceeded {
                needed: usize::MAX,
                cap: ENUMERATION_CAP,
            }
        })?;
        let mut out = Vec::with_capacity(count);
        for mut idx in 0..count {
            let mut v = Vec::with_capacity(dim);
            for _ in 0..dim {
                v.push(elems[idx % elems.len()].clone());
                idx /= elems.len();
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Coordinates of the class of a cocycle `W` in the basis.
    pub fn coordinates(&self, w: &PolyMatrix<K>) -> Result<Vec<K>> {
        let ring = self.m.ring();
        let wts = ring.require_weights()?;
        let (phi_n, _) = self.n.mf_pair()?;
        let rank = phi_n.nrows();
        let ncols = self.h_m.len();
        if w.nrows() != rank || w.ncols() != ncols {
            return Err(Error::ShapeMismatch(format!("class matrix must be {rank}x{ncols}")));
        }
        let mut parts: BTreeMap<i64, PolyMatrix<K>> = BTreeMap::new();
        for (l, j, p) in w.entries() {
            for (m, c) in p.terms() {
                let e = m.weighted_degree(wts) as i64 + self.g_n[l] - self.h_m[j];
                let part = parts.entry(e).or_insert_with(|| PolyMatrix::zero(rank, ncols));
                let mut q = part.get(l, j).clone();
                q.add_term(*m, c.clone());
                part.set(l, j, q);
            }
        }
        let mut out = vec![K::zero(); self.dimension()];
        for (e, part) in parts {
            let stored = self.pieces.iter().position(|p| p.degree == e);
            let fresh;
            let complex = match stored {
                Some(i) => &self.pieces[i].complex,
                None => {
                    fresh = self.complex_at(e)?;
                    &fresh
                }
            };
            let v = sparse_from(complex.c1.iter().enumerate().flat_map(|(j, b)| {
                b.piece
                    .reduce(&part.column(j))
                    .into_iter()
                    .map(move |(i, x)| (b.offset + i, x))
            }));
            if !complex.delta1.apply(&v).is_empty() {
                return Err(Error::NotExact("matrix is not a cocycle".into()));
            }
            let mut cols = complex.delta0.columns.clone();
            let ext_vectors: &[SparseVec<K>] = stored.map(|i| self.pieces[i].vectors.as_slice()).unwrap_or(&[]);
            let nb = cols.len();
            cols.extend(ext_vectors.iter().cloned());
            let solver = LinearMap::new(cols.len(), complex.c1_dim, cols);
            let sol = solver.solve(&v).ok_or_else(|| {
                Error::Invariant(format!("cocycle in degree {e} lies outside the computed Ext group"))
            })?;
            let offset: usize = self
                .pieces
                .iter()
                .take_while(|p| p.degree != e)
                .map(|p| p.vectors.len())
                .sum();
            for (i, x) in sol {
                if i >= nb {
                    out[offset + i - nb] = x;
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero_class(&self, w: &PolyMatrix<K>) -> Result<bool> {
        Ok(self.coordinates(w)?.iter().all(|c| c.is_zero()))
    }

    /// Class of a standard-form or convertible sequence with these end terms.
    pub fn classify(&self, s: &ShortExactSequence<K>) -> Result<Vec<K>> {
        let st = s.to_standard_form()?;
        self.coordinates(&st.class().expect("standard form").w)
    }
}

/// Degree-`e` homomorphisms `M -> N` as matrices on generators.
pub fn hom_basis<K: Field>(m: &Module<K>, n: &Module<K>, e: i64) -> Result<Vec<PolyMatrix<K>>> {
    let group = ExtGroup::prepare(m, n)?;
    let complex = group.complex_at(e)?;
    let rank = group.n.phi().nrows();
    Ok(complex
        .delta0
        .kernel_basis()
        .iter()
        .map(|v| lift_blocks(&complex.c0, v, rank))
        .collect())
}

impl<K: Field> ExtGroup<K> {
    /// Least degree in which `Hom(M, N)` can be nonzero.
    pub fn lowest_hom_degree(&self) -> i64 {
        self.g_n.iter().min().copied().unwrap_or(0) - self.g_m.iter().max().copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::filtration::Filtration;
    use num_traits::Zero;
    use crate::ring::Ring;
    use std::sync::Arc;

    type F3 = Fp<3>;

    fn node() -> Arc<Ring<F3>> {
        Ring::parse(2, &["x*y"]).unwrap()
    }

    fn mf(r: &Arc<Ring<F3>>, a: &str, b: &str) -> Module<F3> {
        Module::matrix_factorization(
            r,
            PolyMatrix::parse(&[vec![a]], r.names()).unwrap(),
            PolyMatrix::parse(&[vec![b]], r.names()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn ext_of_node_modules() {
        let r = node();
        let ax = mf(&r, "x", "y");
        let ay = mf(&r, "y", "x");
        let g = ExtGroup::compute(&ax, &ay).unwrap();
        assert_eq!(g.dimension(), 1);
        assert_eq!(g.summary().degrees, vec![(-1, 1)]);
        assert_eq!(ExtGroup::compute(&ax, &ax).unwrap().dimension(), 0);
        assert_eq!(ExtGroup::compute(&ax, &Module::free(&r, 1)).unwrap().dimension(), 0);
    }

    #[test]
    fn classes_and_tsplit() {
        let r = node();
        let f = Filtration::maximal(&r);
        let ax = mf(&r, "x", "y");
        let ay = mf(&r, "y", "x");
        let g = ExtGroup::compute(&ax, &ay).unwrap();
        let classes = g.classes().unwrap();
        assert_eq!(classes.len(), 3);
        for c in classes {
            let s = g.sequence(&c).unwrap();
            assert_eq!(s.is_tsplit(&f).unwrap(), c[0].is_zero());
            assert_eq!(g.coordinates(&s.class().unwrap().w).unwrap(), c);
        }
    }

    #[test]
    fn general_form_is_classified() {
        let r = node();
        let ax = mf(&r, "x", "y");
        let ay = mf(&r, "y", "x");
        let a = Module::presentation(&r, PolyMatrix::zero(1, 0));
        let s = ShortExactSequence::from_maps(
            &ay,
            &a,
            &ax,
            PolyMatrix::parse(&[vec!["x"]], r.names()).unwrap(),
            PolyMatrix::parse(&[vec!["1"]], r.names()).unwrap(),
        )
        .unwrap();
        let g = ExtGroup::compute(&ax, &ay).unwrap();
        assert!(!g.classify(&s).unwrap()[0].is_zero());
        // coboundaries are zero classes
        assert!(g.is_zero_class(&PolyMatrix::parse(&[vec!["x"]], r.names()).unwrap()).unwrap());
    }

    #[test]
    fn homs_between_node_modules() {
        let r = node();
        let ax = mf(&r, "x", "y");
        let a = Module::free(&r, 1);
        // A/(x) -> A is multiplication by y, in degree 1
        let h = hom_basis(&ax, &a, 1).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].get(0, 0), &r.parse_poly("y").unwrap());
        assert!(hom_basis(&ax, &a, 0).unwrap().is_empty());
        assert_eq!(hom_basis(&ax, &ax, 0).unwrap().len(), 1);
    }
}
