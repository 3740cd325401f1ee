//! Homogeneous pieces of graded modules over a weighted-homogeneous ring.
//!
//! For weighted-homogeneous data the local computations (syzygies, Hom,
//! solving linear systems over `A`) can be done one weighted degree at a
//! time, where every space is finite dimensional.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{sparse_from, Echelon, LinearMap, SparseVec};
use crate::matrix::{PolyMatrix, PolyVec};
use crate::poly::{monomials_of_weighted_degree, Monomial, Polynomial};
use crate::ring::Ring;
use crate::truncate::dimension_cap;

/// Degrees of the scan window kept free of new generators before a graded
/// kernel is accepted, in units of the largest variable weight.
pub const DEFAULT_HEADROOM: i64 = 4;

/// Hard limit on how far past the source degrees a kernel scan may run.
const SCAN_LIMIT: i64 = 64;

/// Degree-`t` piece of `⊕_l A(-shift_l)` modulo a homogeneous submodule.
#[derive(Clone, Debug)]
pub struct GradedPiece<K: Field> {
    degree: i64,
    columns: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
    echelon: Echelon<K>,
    basis: Vec<usize>,
    basis_pos: HashMap<usize, usize>,
}

fn monos(weights: &[u32], d: i64) -> Vec<Monomial> {
    if d < 0 {
        Vec::new()
    } else {
        monomials_of_weighted_degree(weights, d as u32)
    }
}

impl<K: Field> GradedPiece<K> {
    /// `extra` lists homogeneous vectors with their degrees; their span
    /// (over `A`) is factored out together with the ring relations.
    pub fn build(ring: &Ring<K>, shifts: &[i64], t: i64, extra: &[(PolyVec<K>, i64)]) -> Result<Self> {
        let w = ring.require_weights()?;
        let mut columns = Vec::new();
        for (l, &s) in shifts.iter().enumerate() {
            for m in monos(w, t - s) {
                columns.push((l, m));
            }
        }
        if columns.len() > dimension_cap() {
            return Err(Error::CapExceeded {
                needed: columns.len(),
                cap: dimension_cap(),
            });
        }
        let index: HashMap<(usize, Monomial), usize> =
            columns.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let to_row = |v: &[Polynomial<K>], u: &Monomial| -> SparseVec<K> {
            sparse_from(v.iter().enumerate().flat_map(|(l, p)| {
                let index = &index;
                p.terms().map(move |(m, c)| {
                    let key = (l, m.mul(u));
                    (*index.get(&key).expect("homogeneous input"), c.clone())
                })
            }))
        };
        let mut rows = Vec::new();
        for f in ring.relations() {
            let wf = f.homogeneous_degree(w).flatten().expect("graded ring") as i64;
            for (l, &s) in shifts.iter().enumerate() {
                for u in monos(w, t - s - wf) {
                    let mut v = vec![Polynomial::zero(); shifts.len()];
                    v[l] = f.clone();
                    rows.push(to_row(&v, &u));
                }
            }
        }
        for (v, d) in extra {
            for u in monos(w, t - d) {
                rows.push(to_row(v, &u));
            }
        }
        rows.retain(|r| !r.is_empty());
        rows.sort_by_key(|r| (r[0].0, r.len()));
        let mut echelon = Echelon::new();
        for r in rows {
            echelon.insert(r);
        }
        let basis: Vec<usize> = (0..columns.len()).filter(|c| !echelon.is_pivot(*c)).collect();
        let basis_pos = basis.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        Ok(GradedPiece {
            degree: t,
            columns,
            index,
            echelon,
            basis,
            basis_pos,
        })
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_element(&self, i: usize) -> (usize, Monomial) {
        self.columns[self.basis[i]]
    }

    /// Coordinates of a vector homogeneous of this piece's degree.
    pub fn reduce(&self, v: &[Polynomial<K>]) -> SparseVec<K> {
        let cols = sparse_from(v.iter().enumerate().flat_map(|(l, p)| {
            p.terms()
                .map(move |(m, c)| (*self.index.get(&(l, *m)).expect("homogeneous input"), c.clone()))
        }));
        self.echelon
            .reduce(&cols)
            .into_iter()
            .map(|(c, x)| (self.basis_pos[&c], x))
            .collect()
    }

    pub fn reduce_term(&self, comp: usize, c: &K, m: &Monomial) -> SparseVec<K> {
        let Some(&col) = self.index.get(&(comp, *m)) else {
            return Vec::new();
        };
        self.echelon
            .reduce(&vec![(col, c.clone())])
            .into_iter()
            .map(|(c, x)| (self.basis_pos[&c], x))
            .collect()
    }

    pub fn lift(&self, coords: &SparseVec<K>, rank: usize) -> PolyVec<K> {
        let mut out = vec![Polynomial::zero(); rank];
        for (i, x) in coords {
            let (l, m) = self.basis_element(*i);
            out[l].add_term(m, x.clone());
        }
        out
    }
}

/// Checks that every nonzero entry `(i, j)` is homogeneous of degree
/// `src[j] - tgt[i]`.
pub fn check_homogeneous<K: Field>(ring: &Ring<K>, m: &PolyMatrix<K>, src: &[i64], tgt: &[i64]) -> Result<()> {
    let w = ring.require_weights()?;
    for (i, j, p) in m.entries() {
        if p.is_zero() {
            continue;
        }
        match p.homogeneous_degree(w).flatten() {
            Some(d) if d as i64 == src[j] - tgt[i] => {}
            _ => {
                return Err(Error::NotGraded(format!(
                    "entry ({i},{j}) = {} does not have degree {}",
                    ring.show(p),
                    src[j] - tgt[i]
                )))
            }
        }
    }
    Ok(())
}

/// The degree-`t` component of `m : ⊕ A(-src_j) -> ⊕ A(-tgt_i)`, on the given pieces.
pub fn map_at<K: Field>(
    m: &PolyMatrix<K>,
    src_piece: &GradedPiece<K>,
    tgt_piece: &GradedPiece<K>,
) -> LinearMap<K> {
    let cols = (0..src_piece.dimension())
        .map(|b| {
            let (j, mono) = src_piece.basis_element(b);
            let img: PolyVec<K> = (0..m.nrows()).map(|i| m.get(i, j).mul_monomial(&mono)).collect();
            tgt_piece.reduce(&img)
        })
        .collect();
    LinearMap::new(src_piece.dimension(), tgt_piece.dimension(), cols)
}

/// Minimal homogeneous generators of `ker(m)` for
/// `m : ⊕ A(-src_j) -> ⊕ A(-tgt_i)`, returned as the columns of a matrix
/// together with their degrees.
pub fn graded_kernel<K: Field>(
    ring: &Ring<K>,
    m: &PolyMatrix<K>,
    src: &[i64],
    tgt: &[i64],
    headroom: i64,
) -> Result<(PolyMatrix<K>, Vec<i64>)> {
    check_homogeneous(ring, m, src, tgt)?;
    let c = m.ncols();
    if c == 0 {
        return Ok((PolyMatrix::zero(0, 0), Vec::new()));
    }
    let w = ring.require_weights()?;
    let max_w = *w.iter().max().unwrap() as i64;
    let wdeg = |p: &Polynomial<K>| p.homogeneous_degree(w).flatten().unwrap_or(0) as i64;
    let d_entries = m.entries().map(|(_, _, p)| wdeg(p)).max().unwrap_or(0);
    let d_rel = ring.relations().iter().map(wdeg).max().unwrap_or(0);
    let lo = *src.iter().min().unwrap();
    let hi_src = *src.iter().max().unwrap();
    let base = hi_src + d_entries.max(d_rel);
    let window = headroom.max(1) * max_w;

    let mut gens: Vec<(PolyVec<K>, i64)> = Vec::new();
    let mut last_new = base;
    let mut t = lo;
    while t <= last_new.max(base) + window {
        if t > hi_src + SCAN_LIMIT * max_w {
            return Err(Error::TruncationInsufficient(format!(
                "kernel generators keep appearing up to degree {t}"
            )));
        }
        let sp = GradedPiece::build(ring, src, t, &[])?;
        let tp = GradedPiece::build(ring, tgt, t, &[])?;
        if sp.dimension() > 0 {
            let map = map_at(m, &sp, &tp);
            let kernel = map.kernel_basis();
            if !kernel.is_empty() {
                let mut span = Echelon::new();
                for (g, d) in &gens {
                    for u in monos(w, t - d) {
                        let v: PolyVec<K> = g.iter().map(|p| p.mul_monomial(&u)).collect();
                        span.insert(sp.reduce(&v));
                    }
                }
                for k in kernel {
                    if span.insert(k.clone()).is_some() {
                        gens.push((sp.lift(&k, c), t));
                        last_new = last_new.max(t);
                    }
                }
            }
        }
        t += 1;
    }
    let degs: Vec<i64> = gens.iter().map(|(_, d)| *d).collect();
    let cols: Vec<PolyVec<K>> = gens.into_iter().map(|(g, _)| g).collect();
    Ok((PolyMatrix::from_columns(&cols, c), degs))
}

/// Splits a vector into pieces homogeneous of degree `t`, where a term
/// `c * mono` in component `i` has degree `wdeg(mono) + tgt[i]`.
pub fn homogeneous_components<K: Field>(
    w: &[u32],
    v: &[Polynomial<K>],
    tgt: &[i64],
) -> BTreeMap<i64, PolyVec<K>> {
    let mut out: BTreeMap<i64, PolyVec<K>> = BTreeMap::new();
    for (i, p) in v.iter().enumerate() {
        for (m, c) in p.terms() {
            let t = m.weighted_degree(w) as i64 + tgt[i];
            out.entry(t)
                .or_insert_with(|| vec![Polynomial::zero(); v.len()])[i]
                .add_term(*m, c.clone());
        }
    }
    out
}

/// Some `y` with `m y = b` in `⊕ A(-tgt_i)`, or `None` when `b` is not in
/// the image. `b` need not be homogeneous.
pub fn graded_solve<K: Field>(
    ring: &Ring<K>,
    m: &PolyMatrix<K>,
    src: &[i64],
    tgt: &[i64],
    b: &[Polynomial<K>],
) -> Result<Option<PolyVec<K>>> {
    check_homogeneous(ring, m, src, tgt)?;
    let w = ring.require_weights()?;
    let mut y = vec![Polynomial::zero(); m.ncols()];
    for (t, bt) in homogeneous_components(w, b, tgt) {
        let sp = GradedPiece::build(ring, src, t, &[])?;
        let tp = GradedPiece::build(ring, tgt, t, &[])?;
        let target = tp.reduce(&bt);
        if target.is_empty() {
            continue;
        }
        let map = map_at(m, &sp, &tp);
        let Some(sol) = map.solve(&target) else {
            return Ok(None);
        };
        for (j, p) in sp.lift(&sol, m.ncols()).into_iter().enumerate() {
            y[j] = &y[j] + &p;
        }
    }
    Ok(Some(y))
}

/// Reduces every entry of a homogeneous matrix to its normal form modulo
/// the ring relations.
pub fn canonical_entries<K: Field>(ring: &Ring<K>, m: &PolyMatrix<K>) -> Result<PolyMatrix<K>> {
    let w = ring.require_weights()?;
    let mut cache: HashMap<i64, GradedPiece<K>> = HashMap::new();
    let mut out = m.clone();
    for (i, j, p) in m.entries() {
        if p.is_zero() {
            continue;
        }
        let Some(Some(d)) = p.homogeneous_degree(w) else {
            return Err(Error::NotGraded(format!("entry {} is not homogeneous", ring.show(p))));
        };
        let d = d as i64;
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(d) {
            e.insert(GradedPiece::build(ring, &[0], d, &[])?);
        }
        let piece = &cache[&d];
        let nf = piece.lift(&piece.reduce(std::slice::from_ref(p)), 1).pop().unwrap();
        out.set(i, j, nf);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    type F = Fp<32003>;

    #[test]
    fn node_pieces_have_dimension_two() {
        let r = Ring::<F>::parse(2, &["x*y"]).unwrap();
        for t in 1..6 {
            assert_eq!(GradedPiece::build(&r, &[0], t, &[]).unwrap().dimension(), 2);
        }
        assert_eq!(GradedPiece::build(&r, &[0], 0, &[]).unwrap().dimension(), 1);
        assert_eq!(GradedPiece::build(&r, &[0], -1, &[]).unwrap().dimension(), 0);
    }

    #[test]
    fn kernel_of_x_on_node_is_y() {
        let r = Ring::<F>::parse(2, &["x*y"]).unwrap();
        let m = PolyMatrix::parse(&[vec!["x"]], r.names()).unwrap();
        let (k, d) = graded_kernel(&r, &m, &[1], &[0], DEFAULT_HEADROOM).unwrap();
        assert_eq!(d, vec![2]);
        assert_eq!(k.get(0, 0), &r.parse_poly("y").unwrap());
    }

    #[test]
    fn solve_in_node() {
        let r = Ring::<F>::parse(2, &["x*y"]).unwrap();
        let m = PolyMatrix::parse(&[vec!["x", "y"]], r.names()).unwrap();
        let b = vec![r.parse_poly("x^3 + 2*y^2 + x*y").unwrap()];
        let y = graded_solve(&r, &m, &[1, 1], &[0], &b).unwrap().unwrap();
        let back = m.apply(&y).unwrap();
        let t = crate::truncate::TruncatedAlgebra::build(&r, &[], 6).unwrap();
        assert_eq!(t.normal_form(&back[0]), t.normal_form(&b[0]));
        let one = vec![Polynomial::one()];
        assert!(graded_solve(&r, &m, &[1, 1], &[0], &one).unwrap().is_none());
    }

    #[test]
    fn nonhomogeneous_matrix_rejected() {
        let r = Ring::<F>::parse(2, &["x*y"]).unwrap();
        let m = PolyMatrix::parse(&[vec!["x + y^2"]], r.names()).unwrap();
        assert!(matches!(
            graded_kernel(&r, &m, &[1], &[0], 4),
            Err(Error::NotGraded(_))
        ));
    }
}
