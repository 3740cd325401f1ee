//! Finitely presented modules and matrix factorizations.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::{module_quotient_at, Filtration};
use crate::fit::PolyFit;
use crate::graded::{graded_kernel, GradedPiece, DEFAULT_HEADROOM};
use crate::linalg::{sparse_from, LinearMap};
use crate::matrix::{divide_exact, PolyMatrix};
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::truncate::{dimension_cap, monomial_count, QuotientSpace};

/// Degrees of the generators and relations of a graded presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grading {
    pub generators: Vec<i64>,
    pub relations: Vec<i64>,
}

/// `M = coker(phi : A^c -> A^r)`; `psi` is present when `(phi, psi)` is a
/// matrix factorization of the hypersurface equation.
#[derive(Clone, Debug)]
pub struct Module<K: Field> {
    ring: Arc<Ring<K>>,
    phi: PolyMatrix<K>,
    psi: Option<PolyMatrix<K>>,
    grading: Option<Grading>,
    resolution: Arc<OnceLock<Vec<(PolyMatrix<K>, Vec<i64>)>>>,
}

/// Solves `val[v] - val[u] = delta` over the connected components of a graph
/// on `n` nodes, anchoring each component at its first node.
pub fn potentials(n: usize, edges: &[(usize, usize, i64)]) -> Option<Vec<i64>> {
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for &(u, v, d) in edges {
        adj[u].push((v, d));
        adj[v].push((u, -d));
    }
    let mut val: Vec<Option<i64>> = vec![None; n];
    for s in 0..n {
        if val[s].is_some() {
            continue;
        }
        val[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let vu = val[u].unwrap();
            for &(v, d) in &adj[u] {
                match val[v] {
                    None => {
                        val[v] = Some(vu + d);
                        queue.push_back(v);
                    }
                    Some(x) if x != vu + d => return None,
                    _ => {}
                }
            }
        }
    }
    Some(val.into_iter().map(Option::unwrap).collect())
}

fn entry_degree<K: Field>(w: &[u32], p: &Polynomial<K>) -> Option<i64> {
    p.homogeneous_degree(w).flatten().map(|d| d as i64)
}

/// Degrees making every nonzero entry of `phi` (and of `psi`, if given)
/// homogeneous, or `None` when no such grading exists.
pub fn infer_grading<K: Field>(ring: &Ring<K>, phi: &PolyMatrix<K>, psi: Option<&PolyMatrix<K>>) -> Option<Grading> {
    let w = ring.weights()?;
    let (r, c) = (phi.nrows(), phi.ncols());
    // nodes: rows 0..r, columns r..r+c
    let mut edges = Vec::new();
    for (i, j, p) in phi.entries() {
        if !p.is_zero() {
            edges.push((i, r + j, entry_degree(w, p)?));
        }
    }
    if let Some(psi) = psi {
        let df = entry_degree(w, ring.hypersurface_equation().ok()?)?;
        // psi : A(-g - df)^r -> A(-h)^c
        for (k, j, p) in psi.entries() {
            if !p.is_zero() {
                edges.push((r + k, j, entry_degree(w, p)? - df));
            }
        }
    }
    let val = potentials(r + c, &edges)?;
    Some(Grading {
        generators: val[..r].to_vec(),
        relations: val[r..].to_vec(),
    })
}

/// Checks `phi psi = psi phi = f I` in the ambient ring, naming the first
/// offending entry.
pub fn mf_validate<K: Field>(ring: &Ring<K>, phi: &PolyMatrix<K>, psi: &PolyMatrix<K>) -> Result<()> {
    let f = ring.hypersurface_equation()?;
    let n = phi.nrows();
    if phi.ncols() != n || psi.nrows() != n || psi.ncols() != n {
        return Err(Error::InvalidFactorization(format!(
            "phi is {}x{} and psi is {}x{}; both must be square of the same size",
            phi.nrows(),
            phi.ncols(),
            psi.nrows(),
            psi.ncols()
        )));
    }
    for (name, prod) in [("phi*psi", phi.mul(psi)?), ("psi*phi", psi.mul(phi)?)] {
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { f.clone() } else { Polynomial::zero() };
                if prod.get(i, j) != &want {
                    return Err(Error::InvalidFactorization(format!(
                        "entry ({i},{j}) of {name} is {}, expected {}",
                        ring.show(prod.get(i, j)),
                        ring.show(&want)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Normal forms of ring elements modulo the relations.
pub struct EntryReducer<K: Field> {
    ring: Arc<Ring<K>>,
    pieces: HashMap<i64, GradedPiece<K>>,
}

impl<K: Field> EntryReducer<K> {
    pub fn new(ring: &Arc<Ring<K>>) -> Self {
        EntryReducer {
            ring: ring.clone(),
            pieces: HashMap::new(),
        }
    }

    /// Exact for graded rings (componentwise) and for zero tests over
    /// hypersurfaces; otherwise the input is returned unchanged.
    pub fn reduce(&mut self, p: &Polynomial<K>) -> Result<Polynomial<K>> {
        if p.is_zero() {
            return Ok(p.clone());
        }
        if let Some(w) = self.ring.weights() {
            let w = w.to_vec();
            let mut out = Polynomial::zero();
            for (d, part) in p.homogeneous_parts(&w) {
                let d = d as i64;
                if !self.pieces.contains_key(&d) {
                    self.pieces.insert(d, GradedPiece::build(&self.ring, &[0], d, &[])?);
                }
                let piece = &self.pieces[&d];
                let nf = piece.lift(&piece.reduce(std::slice::from_ref(&part)), 1).pop().unwrap();
                out = &out + &nf;
            }
            return Ok(out);
        }
        if let Ok(f) = self.ring.hypersurface_equation() {
            if divide_exact(p, f).is_some() {
                return Ok(Polynomial::zero());
            }
        }
        Ok(p.clone())
    }

    pub fn reduce_matrix(&mut self, m: &PolyMatrix<K>) -> Result<PolyMatrix<K>> {
        let mut out = m.clone();
        for (i, j, p) in m.entries() {
            if !p.is_zero() {
                out.set(i, j, self.reduce(p)?);
            }
        }
        Ok(out)
    }
}

/// Removes entries with nonzero constant term by fraction-free row and
/// column operations, then drops zero columns. Valid over the local ring.
pub fn minimalize<K: Field>(ring: &Arc<Ring<K>>, phi: &PolyMatrix<K>) -> Result<PolyMatrix<K>> {
    let mut red = EntryReducer::new(ring);
    let mut m = red.reduce_matrix(phi)?;
    loop {
        let keep: Vec<usize> = (0..m.ncols()).filter(|&j| m.column(j).iter().any(|p| !p.is_zero())).collect();
        m = m.select_columns(&keep);
        // prefer constant pivots, which keep the presentation graded
        let pivot = m
            .entries()
            .filter(|(_, _, p)| !p.constant_term().is_zero())
            .min_by_key(|(_, _, p)| p.len())
            .map(|(i, j, _)| (i, j));
        let Some((i, j)) = pivot else { break };
        let u = m.get(i, j).clone();
        let scalar = u.len() == 1;
        let uinv = u.constant_term().inv().expect("nonzero constant");
        let pc = m.column(j);
        let mut cols = m.columns();
        for (k, col) in cols.iter_mut().enumerate() {
            let a = m.get(i, k).clone();
            if k == j || a.is_zero() {
                continue;
            }
            for (l, entry) in col.iter_mut().enumerate() {
                *entry = if scalar {
                    &*entry - &(&a * &pc[l]).scale(&uinv)
                } else {
                    &(&u * entry) - &(&a * &pc[l])
                };
            }
        }
        let rows: Vec<usize> = (0..m.nrows()).filter(|&l| l != i).collect();
        let others: Vec<usize> = (0..m.ncols()).filter(|&k| k != j).collect();
        m = PolyMatrix::from_columns(&cols, m.nrows()).select_rows(&rows).select_columns(&others);
        m = red.reduce_matrix(&m)?;
    }
    Ok(m)
}

impl<K: Field> Module<K> {
    fn build(ring: &Arc<Ring<K>>, phi: PolyMatrix<K>, psi: Option<PolyMatrix<K>>) -> Self {
        let grading = infer_grading(ring, &phi, psi.as_ref());
        Module {
            ring: ring.clone(),
            phi,
            psi,
            grading,
            resolution: Arc::new(OnceLock::new()),
        }
    }

    /// `coker(phi)`.
    pub fn presentation(ring: &Arc<Ring<K>>, phi: PolyMatrix<K>) -> Self {
        Self::build(ring, phi, None)
    }

    /// `coker(phi)` with its 2-periodic resolution `... -> psi -> phi`.
    pub fn matrix_factorization(ring: &Arc<Ring<K>>, phi: PolyMatrix<K>, psi: PolyMatrix<K>) -> Result<Self> {
        mf_validate(ring, &phi, &psi)?;
        Ok(Self::build(ring, phi, Some(psi)))
    }

    /// `A^r`; over a hypersurface stored as the factorization `(f I, I)`.
    pub fn free(ring: &Arc<Ring<K>>, r: usize) -> Self {
        match ring.hypersurface_equation() {
            Ok(f) => Self::build(ring, PolyMatrix::scalar(r, f.clone()), Some(PolyMatrix::identity(r))),
            Err(_) => Self::presentation(ring, PolyMatrix::zero(r, 0)),
        }
    }

    pub fn zero(ring: &Arc<Ring<K>>) -> Self {
        if ring.is_hypersurface() {
            Self::build(ring, PolyMatrix::zero(0, 0), Some(PolyMatrix::zero(0, 0)))
        } else {
            Self::presentation(ring, PolyMatrix::zero(0, 0))
        }
    }

    pub fn ring(&self) -> &Arc<Ring<K>> {
        &self.ring
    }

    pub fn phi(&self) -> &PolyMatrix<K> {
        &self.phi
    }

    pub fn psi(&self) -> Option<&PolyMatrix<K>> {
        self.psi.as_ref()
    }

    pub fn is_mf(&self) -> bool {
        self.psi.is_some()
    }

    pub fn backend(&self) -> &'static str {
        if self.is_mf() {
            "matrix-factorization"
        } else {
            "presentation"
        }
    }

    /// Number of generators of the stored presentation (not necessarily minimal).
    pub fn cover_rank(&self) -> usize {
        self.phi.nrows()
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    pub fn require_grading(&self) -> Result<&Grading> {
        self.ring.require_weights()?;
        self.grading
            .as_ref()
            .ok_or_else(|| Error::NotGraded("presentation matrix is not homogeneous".into()))
    }

    fn same_ring(&self, other: &Module<K>) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring.same_as(&other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// The factorization behind the module; free presentations over a
    /// hypersurface count as `(f I, I)`.
    pub fn mf_pair(&self) -> Result<(PolyMatrix<K>, PolyMatrix<K>)> {
        if let Some(psi) = &self.psi {
            return Ok((self.phi.clone(), psi.clone()));
        }
        let f = self.ring.hypersurface_equation()?;
        if self.phi.is_zero() {
            let r = self.phi.nrows();
            return Ok((PolyMatrix::scalar(r, f.clone()), PolyMatrix::identity(r)));
        }
        Err(Error::Precondition(
            "module is not given by a matrix factorization".into(),
        ))
    }

    /// The module with the same cokernel, backed by a factorization when possible.
    pub fn as_mf(&self) -> Result<Module<K>> {
        if self.is_mf() {
            return Ok(self.clone());
        }
        let (phi, psi) = self.mf_pair()?;
        Ok(Self::build(&self.ring, phi, Some(psi)))
    }

    /// Differentials `d_1, ..., d_len` of a free resolution, each with the
    /// degrees of its source when graded.
    pub fn resolution(&self, len: usize) -> Result<Vec<PolyMatrix<K>>> {
        if let Some(psi) = &self.psi {
            return Ok((0..len)
                .map(|i| if i % 2 == 0 { self.phi.clone() } else { psi.clone() })
                .collect());
        }
        if len <= 1 {
            return Ok(vec![self.phi.clone(); len]);
        }
        let cached = self.resolution.get().filter(|c| c.len() >= len);
        if let Some(c) = cached {
            return Ok(c[..len].iter().map(|(m, _)| m.clone()).collect());
        }
        let g = self.require_grading()?.clone();
        let mut maps = vec![(self.phi.clone(), g.relations.clone())];
        let mut tgt = g.generators;
        while maps.len() < len {
            let (m, src) = maps.last().unwrap().clone();
            let (k, degs) = graded_kernel(&self.ring, &m, &src, &tgt, DEFAULT_HEADROOM)?;
            tgt = src;
            maps.push((k, degs));
        }
        let out = maps.iter().map(|(m, _)| m.clone()).collect();
        if self.resolution.get().is_none_or(|c| c.len() < maps.len()) {
            let _ = self.resolution.set(maps);
        }
        Ok(out)
    }

    /// A presentation with no unit entries, so its row count is `μ(M)`.
    pub fn minimal_presentation(&self) -> Result<PolyMatrix<K>> {
        minimalize(&self.ring, &self.phi)
    }

    pub fn minimal(&self) -> Result<Module<K>> {
        Ok(Self::presentation(&self.ring, self.minimal_presentation()?))
    }

    /// Minimal number of generators.
    pub fn mu(&self) -> Result<usize> {
        Ok(self.minimal_presentation()?.nrows())
    }

    /// Removes trivial `(1, f)` summands from a factorization whose unit
    /// entries are constants.
    pub fn reduced_mf(&self) -> Result<Module<K>> {
        let Some(psi) = &self.psi else {
            return Err(Error::Precondition("module is not given by a matrix factorization".into()));
        };
        let mut phi = self.phi.clone();
        let mut psi = psi.clone();
        loop {
            let pivot = phi
                .entries()
                .find(|(_, _, p)| p.len() == 1 && p.degree() == Some(0))
                .map(|(i, j, _)| (i, j));
            let Some((i, j)) = pivot else { break };
            let uinv = phi.get(i, j).constant_term().inv().unwrap();
            // column ops on phi, inverse row ops on psi
            for k in 0..phi.ncols() {
                if k == j || phi.get(i, k).is_zero() {
                    continue;
                }
                let t = phi.get(i, k).scale(&uinv);
                for l in 0..phi.nrows() {
                    let v = phi.get(l, k) - &(&t * phi.get(l, j));
                    phi.set(l, k, v);
                }
                for l in 0..psi.ncols() {
                    let v = psi.get(j, l) + &(&t * psi.get(k, l));
                    psi.set(j, l, v);
                }
            }
            // row ops on phi, inverse column ops on psi
            for l in 0..phi.nrows() {
                if l == i || phi.get(l, j).is_zero() {
                    continue;
                }
                let t = phi.get(l, j).scale(&uinv);
                for k in 0..phi.ncols() {
                    let v = phi.get(l, k) - &(&t * phi.get(i, k));
                    phi.set(l, k, v);
                }
                for k in 0..psi.nrows() {
                    let v = psi.get(k, i) + &(&t * psi.get(k, l));
                    psi.set(k, i, v);
                }
            }
            let prow: Vec<usize> = (0..phi.nrows()).filter(|&l| l != i).collect();
            let pcol: Vec<usize> = (0..phi.ncols()).filter(|&k| k != j).collect();
            phi = phi.select_rows(&prow).select_columns(&pcol);
            psi = psi.select_rows(&pcol).select_columns(&prow);
        }
        Module::matrix_factorization(&self.ring, phi, psi)
    }

    /// `Syz_i(M)`: for factorizations the period-2 shift, otherwise the
    /// cokernel of the next graded kernel, minimalized.
    pub fn syzygy(&self, i: usize) -> Result<Module<K>> {
        if i == 0 {
            return Ok(self.clone());
        }
        if self.is_mf() {
            let mut m = self.reduced_mf()?;
            for _ in 0..i {
                let (phi, psi) = m.mf_pair()?;
                m = Module::build(&self.ring, psi, Some(phi));
            }
            return Ok(m);
        }
        let mut m = self.minimal()?;
        for _ in 0..i {
            let d = m.resolution(2)?;
            m = Module::presentation(&self.ring, d[1].clone()).minimal()?;
        }
        Ok(m)
    }

    /// `β_0..=β_hi`, read off as `dim Tor_n(M, k)` from the constant parts
    /// of any free resolution.
    pub fn betti(&self, hi: usize) -> Result<Vec<usize>> {
        let res = self.resolution(hi + 1)?;
        let ranks: Vec<usize> = res
            .iter()
            .map(|d| {
                let cols = d
                    .columns()
                    .iter()
                    .map(|c| sparse_from(c.iter().enumerate().map(|(i, p)| (i, p.constant_term()))))
                    .collect();
                LinearMap::<K>::new(d.ncols(), d.nrows(), cols).rank()
            })
            .collect();
        let mut out = Vec::with_capacity(hi + 1);
        let f0 = self.phi.nrows();
        out.push(f0 - ranks[0]);
        for n in 1..=hi {
            out.push(res[n - 1].ncols() - ranks[n - 1] - ranks[n]);
        }
        Ok(out)
    }

    /// Whether `map`, sending the generators of `self` to elements of the
    /// cover of `target`, induces a well-defined surjection `self -> target`.
    /// The target must come from a matrix factorization.
    pub fn verify_surjection(&self, target: &Module<K>, map: &PolyMatrix<K>) -> Result<bool> {
        self.same_ring(target)?;
        if map.nrows() != target.cover_rank() || map.ncols() != self.cover_rank() {
            return Err(Error::ShapeMismatch(format!(
                "map is {}x{}, expected {}x{}",
                map.nrows(),
                map.ncols(),
                target.cover_rank(),
                self.cover_rank()
            )));
        }
        let (phi_t, psi_t) = target.mf_pair()?;
        let f = self.ring.hypersurface_equation()?;
        // columns of map * phi_s lie in im phi_t iff psi_t kills them mod f
        let image = psi_t.mul(&map.mul(&self.phi)?)?;
        if image.div_exact(f).is_none() {
            return Ok(false);
        }
        let both = PolyMatrix::hstack(map, &phi_t)?;
        let cols = both
            .columns()
            .iter()
            .map(|c| sparse_from(c.iter().enumerate().map(|(i, p)| (i, p.constant_term()))))
            .collect();
        Ok(LinearMap::<K>::new(both.ncols(), both.nrows(), cols).rank() == both.nrows())
    }

    pub fn is_free(&self) -> Result<bool> {
        Ok(self.minimal_presentation()?.is_zero())
    }

    /// `M ≅ L ⊕ A^r` with `L` free of free summands.
    pub fn free_summand_split(&self) -> Result<(Module<K>, usize)> {
        let p = self.minimal_presentation()?;
        let rows: Vec<usize> = (0..p.nrows()).filter(|&i| p.row(i).iter().any(|x| !x.is_zero())).collect();
        let free = p.nrows() - rows.len();
        Ok((Module::presentation(&self.ring, p.select_rows(&rows)), free))
    }

    pub fn direct_sum(&self, other: &Module<K>) -> Result<Module<K>> {
        self.same_ring(other)?;
        let phi = PolyMatrix::block_diag(&self.phi, &other.phi);
        if self.ring.is_hypersurface() {
            if let (Ok((a, b)), Ok((c, d))) = (self.mf_pair(), other.mf_pair()) {
                return Ok(Module::build(
                    &self.ring,
                    PolyMatrix::block_diag(&a, &c),
                    Some(PolyMatrix::block_diag(&b, &d)),
                ));
            }
        }
        Ok(Module::presentation(&self.ring, phi))
    }

    /// `(e_0, ..., e_d)` for the filtration.
    pub fn hilbert_coefficients(&self, f: &Filtration<K>) -> Result<Vec<i128>> {
        f.hilbert_coefficients(&self.phi)
    }

    pub fn is_ulrich(&self, f: &Filtration<K>) -> Result<UlrichReport> {
        let e = self.hilbert_coefficients(f)?;
        let mu = self.mu()?;
        Ok(UlrichReport {
            mu,
            e0: e[0],
            e1: e.get(1).copied(),
            ulrich: mu as i128 == e[0],
        })
    }

    /// Compares `ℓ(M/ℓM)` with `e_0(M)` for random linear forms `ℓ`.
    /// Equality forces `ℓ` to be a nonzerodivisor on `M`, which for a
    /// one-dimensional ring means `M` is maximal Cohen–Macaulay.
    pub fn mcm_probe(&self, seed: u64, attempts: usize) -> Result<McmProbe> {
        if self.ring.dimension() != 1 {
            return Ok(McmProbe {
                certified: false,
                attempts: 0,
                label: "probe only available for one-dimensional rings",
            });
        }
        let e0 = self.hilbert_coefficients(&Filtration::maximal(&self.ring))?[0];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = self.phi.nrows();
        for t in 1..=attempts {
            let l = Polynomial::from_terms(
                (0..self.ring.nvars()).map(|i| (crate::poly::Monomial::var(i), K::random(&mut rng))),
            );
            if l.is_zero() {
                continue;
            }
            let mut extra = self.phi.clone();
            extra = PolyMatrix::hstack(&extra, &PolyMatrix::scalar(r, l))?;
            let len = saturated_length(&self.ring, &extra)?;
            if len as i128 == e0 {
                return Ok(McmProbe {
                    certified: true,
                    attempts: t,
                    label: "probabilistic evidence",
                });
            }
        }
        Ok(McmProbe {
            certified: false,
            attempts,
            label: "probabilistic evidence",
        })
    }
}

/// `ℓ(coker phi)` for a cokernel of finite length, at a level where the
/// truncation no longer changes it.
pub fn saturated_length<K: Field>(ring: &Ring<K>, phi: &PolyMatrix<K>) -> Result<usize> {
    let mut level = 4;
    loop {
        let q: QuotientSpace<K> = module_quotient_at(ring, phi, &[], level)?;
        if q.saturation_level().is_some() {
            return Ok(q.dimension());
        }
        let next = level * 2;
        if monomial_count(ring.nvars(), next).saturating_mul(phi.nrows()) > dimension_cap() {
            return Err(Error::TruncationInsufficient("cokernel does not have finite length".into()));
        }
        level = next;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UlrichReport {
    pub mu: usize,
    pub e0: i128,
    pub e1: Option<i128>,
    pub ulrich: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McmProbe {
    pub certified: bool,
    pub attempts: usize,
    pub label: &'static str,
}

/// `1 + deg` of the polynomial that eventually agrees with the Betti
/// numbers, 0 when they eventually vanish; `None` when the window shows no
/// polynomial tail.
pub fn complexity_estimate(betti: &[usize]) -> Option<usize> {
    if betti.len() < 6 {
        return None;
    }
    let t: Vec<i128> = betti.iter().map(|&b| b as i128).collect();
    let fit = PolyFit::auto(&t).ok()?;
    if fit.is_zero() {
        Some(0)
    } else {
        Some(fit.degree + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    type F = Fp<32003>;

    fn node() -> Arc<Ring<F>> {
        Ring::parse(2, &["x*y"]).unwrap()
    }

    fn mat(r: &Ring<F>, rows: &[Vec<&str>]) -> PolyMatrix<F> {
        PolyMatrix::parse(rows, r.names()).unwrap()
    }

    fn a_mod_x(r: &Arc<Ring<F>>) -> Module<F> {
        Module::matrix_factorization(r, mat(r, &[vec!["x"]]), mat(r, &[vec!["y"]])).unwrap()
    }

    #[test]
    fn surjections_are_checked() {
        let r = Ring::<F>::parse(2, &["x^2 - y^3"]).unwrap();
        let m = Module::matrix_factorization(
            &r,
            mat(&r, &[vec!["x", "y"], vec!["y^2", "x"]]),
            mat(&r, &[vec!["x", "-y"], vec!["-y^2", "x"]]),
        )
        .unwrap();
        assert!(m.verify_surjection(&m, &PolyMatrix::identity(2)).unwrap());
        assert!(!m.verify_surjection(&m, &mat(&r, &[vec!["y", "0"], vec!["0", "y"]])).unwrap());
        assert!(!m.verify_surjection(&m, &mat(&r, &[vec!["1", "0"], vec!["0", "0"]])).unwrap());
        assert!(m.verify_surjection(&m, &PolyMatrix::identity(1)).is_err());
    }

    #[test]
    fn mf_validation() {
        let r = node();
        assert!(mf_validate(&r, &mat(&r, &[vec!["x"]]), &mat(&r, &[vec!["y"]])).is_ok());
        let err = mf_validate(&r, &mat(&r, &[vec!["x"]]), &mat(&r, &[vec!["x"]])).unwrap_err();
        assert!(err.to_string().contains("entry (0,0)"), "{err}");
        let q = Ring::<F>::parse(2, &["x^2 + y^2"]).unwrap();
        let phi = mat(&q, &[vec!["x", "y"], vec!["-y", "x"]]);
        let psi = mat(&q, &[vec!["x", "-y"], vec!["y", "x"]]);
        assert!(mf_validate(&q, &phi, &psi).is_ok());
    }

    #[test]
    fn minimalize_examples() {
        let r = node();
        assert_eq!(minimalize(&r, &mat(&r, &[vec!["1"]])).unwrap().nrows(), 0);
        let p = mat(&r, &[vec!["x", "1"], vec!["y", "x"]]);
        let m = minimalize(&r, &p).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (1, 1));
        let ax = mat(&r, &[vec!["x"]]);
        assert_eq!(minimalize(&r, &ax).unwrap(), ax);
        // non-constant unit
        let u = mat(&r, &[vec!["1 + x", "y"]]);
        assert_eq!(minimalize(&r, &u).unwrap().nrows(), 0);
    }

    #[test]
    fn grading_inference() {
        let r = Ring::<F>::parse(2, &["x^2 - y^3"]).unwrap();
        assert_eq!(r.weights(), Some(&[3u32, 2][..]));
        let phi = mat(&r, &[vec!["x", "y"], vec!["y^2", "x"]]);
        let g = infer_grading(&r, &phi, None).unwrap();
        assert_eq!(g.generators, vec![0, -1]);
        assert_eq!(g.relations, vec![3, 2]);
        assert!(infer_grading(&r, &mat(&r, &[vec!["x + y"]]), None).is_none());
    }

    #[test]
    fn syzygies_of_a_mod_x() {
        let r = node();
        let m = a_mod_x(&r);
        let s1 = m.syzygy(1).unwrap();
        assert_eq!(s1.phi(), &mat(&r, &[vec!["y"]]));
        assert_eq!(m.syzygy(2).unwrap().phi(), m.phi());
        assert!(Module::free(&r, 2).syzygy(1).unwrap().is_free().unwrap());
        assert_eq!(Module::free(&r, 2).syzygy(1).unwrap().mu().unwrap(), 0);
        // the presentation backend agrees
        let p = Module::presentation(&r, mat(&r, &[vec!["x"]]));
        assert_eq!(p.syzygy(1).unwrap().phi(), &mat(&r, &[vec!["y"]]));
    }

    #[test]
    fn betti_numbers() {
        let r = node();
        assert_eq!(a_mod_x(&r).betti(6).unwrap(), vec![1; 7]);
        assert_eq!(Module::free(&r, 2).betti(4).unwrap(), vec![2, 0, 0, 0, 0]);
        let ci = Ring::<F>::parse(3, &["x^2", "y^2"]).unwrap();
        let k = Module::presentation(&ci, mat(&ci, &[vec!["x", "y", "z"]]));
        let b = k.betti(6).unwrap();
        assert_eq!(b, (0..=6).map(|n| 2 * n + 1).collect::<Vec<_>>());
        assert_eq!(complexity_estimate(&b), Some(2));
        assert_eq!(complexity_estimate(&[1, 1, 1, 1, 1, 1, 1]), Some(1));
        assert_eq!(complexity_estimate(&[2, 0, 0, 0, 0, 0, 0]), Some(0));
    }

    #[test]
    fn freeness_and_split() {
        let r = node();
        let m = a_mod_x(&r);
        let a = Module::free(&r, 1);
        assert!(a.is_free().unwrap());
        assert!(!m.is_free().unwrap());
        let (l, f) = m.direct_sum(&a).unwrap().free_summand_split().unwrap();
        assert_eq!(f, 1);
        assert_eq!(l.mu().unwrap(), 1);
        assert!(!l.is_free().unwrap());
        let (l, f) = m.free_summand_split().unwrap();
        assert_eq!((l.mu().unwrap(), f), (1, 0));
    }

    #[test]
    fn ulrich_checks() {
        let r = node();
        let madic = Filtration::maximal(&r);
        let m = a_mod_x(&r);
        let u = m.is_ulrich(&madic).unwrap();
        assert!(u.ulrich);
        assert_eq!(u.e1, Some(0));
        assert!(!Module::free(&r, 1).is_ulrich(&madic).unwrap().ulrich);
        let n = Module::matrix_factorization(&r, mat(&r, &[vec!["y"]]), mat(&r, &[vec!["x"]])).unwrap();
        assert!(m.direct_sum(&n).unwrap().is_ulrich(&madic).unwrap().ulrich);
    }

    #[test]
    fn mcm_probe_on_node() {
        let r = node();
        assert!(a_mod_x(&r).mcm_probe(1, 4).unwrap().certified);
        let k = Module::presentation(&r, mat(&r, &[vec!["x", "y"]]));
        assert!(!k.mcm_probe(1, 4).unwrap().certified);
    }

    #[test]
    fn reduced_mf_drops_trivial_summands() {
        let r = node();
        let phi = mat(&r, &[vec!["x", "0"], vec!["0", "1"]]);
        let psi = mat(&r, &[vec!["y", "0"], vec!["0", "x*y"]]);
        let m = Module::matrix_factorization(&r, phi, psi).unwrap();
        let red = m.reduced_mf().unwrap();
        assert_eq!(red.phi(), &mat(&r, &[vec!["x"]]));
        assert_eq!(red.psi().unwrap(), &mat(&r, &[vec!["y"]]));
    }
}
