//! Admissible filtrations, Hilbert functions, and superficial elements.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::fit::PolyFit;
use crate::linalg::{Echelon, LinearMap, SparseVec};
use crate::matrix::{PolyMatrix, PolyVec};
use crate::newton::NewtonPolyhedron;
use crate::poly::{Monomial, Polynomial};
use crate::ring::Ring;
use crate::truncate::{saturation_level, QuotientSpace, TruncatedAlgebra};

/// Largest window end tried when fitting Hilbert or Tor tables.
pub const WINDOW_CAP: usize = 64;

#[derive(Clone, Debug)]
pub enum FiltrationKind<K: Field> {
    /// `F_n = I^n`.
    Adic,
    /// `F_n` = integral closure of `I^n`, for monomial `I`.
    IntegralClosure,
    /// Explicit `F_0..F_{n0}`, then `F_n = I F_{n-1}`.
    Custom { table: Vec<Vec<Polynomial<K>>> },
}

#[derive(Clone, Debug)]
pub struct Filtration<K: Field> {
    ring: Arc<Ring<K>>,
    kind: FiltrationKind<K>,
    ideal: Vec<Polynomial<K>>,
    newton: Option<NewtonPolyhedron>,
    /// Least `s` with `m^s ⊆ I` in `A`.
    power: u32,
}

/// Products of `n` generators, with duplicates (and, for monomials,
/// redundant multiples) removed.
pub fn power_products<K: Field>(ideal: &[Polynomial<K>], n: u32) -> Vec<Polynomial<K>> {
    let mut cur = vec![Polynomial::one()];
    for _ in 0..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for a in &cur {
            for g in ideal {
                let p = a * g;
                if !p.is_zero() && seen.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        cur = prune_monomials(next);
    }
    cur
}

/// Drops monomials divisible by another monomial of the list.
fn prune_monomials<K: Field>(v: Vec<Polynomial<K>>) -> Vec<Polynomial<K>> {
    if !v.iter().all(Polynomial::is_monomial) {
        return v;
    }
    let monos: Vec<Monomial> = v.iter().map(|p| *p.terms().next().unwrap().0).collect();
    v.into_iter()
        .enumerate()
        .filter(|(i, _)| {
            !monos
                .iter()
                .enumerate()
                .any(|(j, m)| j != *i && m.divides(&monos[*i]) && (m != &monos[*i] || j < *i))
        })
        .map(|(_, p)| p)
        .collect()
}

fn monomial_exponents<K: Field>(ring: &Ring<K>, ideal: &[Polynomial<K>]) -> Result<Vec<Vec<u32>>> {
    ideal
        .iter()
        .map(|p| {
            if !p.is_monomial() {
                return Err(Error::NotMonomial(ring.show(p)));
            }
            Ok(p.terms().next().unwrap().0.exponents(ring.nvars()))
        })
        .collect()
}

impl<K: Field> Filtration<K> {
    fn new(ring: &Arc<Ring<K>>, kind: FiltrationKind<K>, ideal: Vec<Polynomial<K>>) -> Result<Self> {
        if ideal.is_empty() {
            return Err(Error::Precondition("filtration ideal has no generators".into()));
        }
        if let Some(p) = ideal.iter().find(|p| p.is_local_unit()) {
            return Err(Error::Precondition(format!(
                "ideal generator {} is a unit",
                ring.show(p)
            )));
        }
        let start = ideal.iter().filter_map(Polynomial::degree).max().unwrap_or(1);
        let power = saturation_level(ring, &ideal, start).map_err(|_| {
            Error::Precondition("filtration ideal is not primary to the maximal ideal".into())
        })? + 1;
        let newton = match kind {
            FiltrationKind::IntegralClosure => Some(NewtonPolyhedron::new(
                ring.nvars(),
                monomial_exponents(ring, &ideal)?,
            )?),
            _ => None,
        };
        Ok(Filtration {
            ring: ring.clone(),
            kind,
            ideal,
            newton,
            power,
        })
    }

    pub fn adic(ring: &Arc<Ring<K>>, ideal: Vec<Polynomial<K>>) -> Result<Self> {
        Self::new(ring, FiltrationKind::Adic, ideal)
    }

    /// The `m`-adic filtration.
    pub fn maximal(ring: &Arc<Ring<K>>) -> Self {
        let ideal = (0..ring.nvars()).map(Polynomial::var).collect();
        Self::adic(ring, ideal).expect("the maximal ideal is m-primary")
    }

    pub fn integral_closure(ring: &Arc<Ring<K>>, ideal: Vec<Polynomial<K>>) -> Result<Self> {
        Self::new(ring, FiltrationKind::IntegralClosure, ideal)
    }

    /// `table[n]` generates `F_n` for `n <= table.len() - 1`.
    pub fn custom(ring: &Arc<Ring<K>>, ideal: Vec<Polynomial<K>>, table: Vec<Vec<Polynomial<K>>>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::Precondition("custom filtration needs F_0".into()));
        }
        Self::new(ring, FiltrationKind::Custom { table }, ideal)
    }

    pub fn ring(&self) -> &Arc<Ring<K>> {
        &self.ring
    }

    pub fn kind(&self) -> &FiltrationKind<K> {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            FiltrationKind::Adic => "adic",
            FiltrationKind::IntegralClosure => "integral-closure-monomial",
            FiltrationKind::Custom { .. } => "custom",
        }
    }

    pub fn ideal(&self) -> &[Polynomial<K>] {
        &self.ideal
    }

    /// Whether `F_n = m^n` for all `n`.
    pub fn is_maximal_adic(&self) -> bool {
        matches!(self.kind, FiltrationKind::Adic) && self.power == 1
    }

    /// Index beyond which `F_n = I F_{n-1}` is expected.
    pub fn stabilization_index(&self) -> usize {
        match &self.kind {
            FiltrationKind::Adic => 0,
            FiltrationKind::IntegralClosure => self.ring.nvars(),
            FiltrationKind::Custom { table } => table.len() - 1,
        }
    }

    /// Generators of `F_n`.
    pub fn gens(&self, n: u32) -> Vec<Polynomial<K>> {
        if n == 0 {
            return vec![Polynomial::one()];
        }
        match &self.kind {
            FiltrationKind::Adic => power_products(&self.ideal, n),
            FiltrationKind::IntegralClosure => self
                .newton
                .as_ref()
                .expect("built with polyhedron")
                .closure_generators(n)
                .iter()
                .map(|e| Polynomial::monomial(Monomial::from_exponents(e)))
                .collect(),
            FiltrationKind::Custom { table } => {
                if (n as usize) < table.len() {
                    table[n as usize].clone()
                } else {
                    let prev = self.gens(n - 1);
                    let mut seen = HashSet::new();
                    let mut out = Vec::new();
                    for a in &prev {
                        for g in &self.ideal {
                            let p = a * g;
                            if !p.is_zero() && seen.insert(p.clone()) {
                                out.push(p);
                            }
                        }
                    }
                    prune_monomials(out)
                }
            }
        }
    }

    /// Truncation degree `L` with `m^{L+1} ⊆ F_{n+1}`.
    pub fn level_for(&self, n: u32) -> u32 {
        if self.is_maximal_adic() {
            n
        } else {
            self.power * (n + 1) - 1
        }
    }

    /// Generators that must be factored out to model `A / F_{n+1}`.
    pub fn quotient_generators(&self, n: u32) -> Vec<Polynomial<K>> {
        if self.is_maximal_adic() {
            Vec::new()
        } else {
            self.gens(n + 1)
        }
    }

    /// `T = A / F_{n+1}`.
    pub fn truncated_algebra(&self, n: u32) -> Result<TruncatedAlgebra<K>> {
        TruncatedAlgebra::build(&self.ring, &self.quotient_generators(n), self.level_for(n))
    }

    /// `M / F_{n+1} M` for `M = coker(phi)`.
    pub fn module_quotient(&self, phi: &PolyMatrix<K>, n: u32) -> Result<QuotientSpace<K>> {
        module_quotient_at(&self.ring, phi, &self.quotient_generators(n), self.level_for(n))
    }

    /// `ℓ(M / F_{n+1} M)` for `n` in `lo..=hi`.
    pub fn hilbert_values(&self, phi: &PolyMatrix<K>, lo: u32, hi: u32) -> Result<Vec<i128>> {
        if self.is_maximal_adic() {
            let q = module_quotient_at(&self.ring, phi, &[], hi)?;
            return Ok((lo..=hi).map(|n| q.dimension_at(n) as i128).collect());
        }
        (lo..=hi)
            .into_par_iter()
            .map(|n| self.module_quotient(phi, n).map(|q| q.dimension() as i128))
            .collect()
    }

    /// Hilbert table from 0 with a fitted polynomial of degree at most `d`.
    /// The window starts at `2d + 8` and doubles until the fit is stable.
    pub fn hilbert_fit(&self, phi: &PolyMatrix<K>) -> Result<(HilbertTable, PolyFit)> {
        let d = self.ring.dimension();
        let mut hi = 2 * d + 8;
        loop {
            let values = self.hilbert_values(phi, 0, hi as u32)?;
            match PolyFit::with_degree(&values, d) {
                Ok(fit) => return Ok((HilbertTable { start: 0, values }, fit)),
                Err(e) if hi >= WINDOW_CAP => return Err(e),
                Err(_) => hi = (hi * 2).min(WINDOW_CAP),
            }
        }
    }

    /// `(e_0, ..., e_d)` of `M = coker(phi)`.
    pub fn hilbert_coefficients(&self, phi: &PolyMatrix<K>) -> Result<Vec<i128>> {
        let (_, fit) = self.hilbert_fit(phi)?;
        Ok(fit.hilbert_coefficients(self.ring.dimension()))
    }
}

/// `A^r / (relations, extra, columns of phi) + m^{level+1}`.
pub fn module_quotient_at<K: Field>(
    ring: &Ring<K>,
    phi: &PolyMatrix<K>,
    extra: &[Polynomial<K>],
    level: u32,
) -> Result<QuotientSpace<K>> {
    let r = phi.nrows();
    let mut gens: Vec<PolyVec<K>> = Vec::new();
    for l in 0..r {
        for p in ring.relations().iter().chain(extra) {
            let mut v = vec![Polynomial::zero(); r];
            v[l] = p.clone();
            gens.push(v);
        }
    }
    gens.extend(phi.columns());
    QuotientSpace::build(ring.nvars(), r, level, &gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertTable {
    pub start: usize,
    pub values: Vec<i128>,
}

impl HilbertTable {
    pub fn get(&self, n: usize) -> Option<i128> {
        n.checked_sub(self.start).and_then(|i| self.values.get(i).copied())
    }
}

// ---------------------------------------------------------------------------
// admissibility

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
    pub checked_up_to: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub kind: &'static str,
    pub axioms: Vec<AxiomCheck>,
    pub exact_membership: bool,
    pub note: Option<String>,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }
}

struct Membership<K: Field> {
    algebra: TruncatedAlgebra<K>,
    exact: bool,
}

impl<K: Field> Membership<K> {
    fn new(ring: &Arc<Ring<K>>, gens: &[Polynomial<K>], fallback: u32) -> Result<Self> {
        let start = gens.iter().filter_map(Polynomial::degree).max().unwrap_or(1);
        match saturation_level(ring, gens, start) {
            Ok(l) => Ok(Membership {
                algebra: TruncatedAlgebra::build(ring, gens, l)?,
                exact: true,
            }),
            Err(Error::TruncationInsufficient(_)) => Ok(Membership {
                algebra: TruncatedAlgebra::build(ring, gens, fallback)?,
                exact: false,
            }),
            Err(e) => Err(e),
        }
    }

    fn first_outside<'a>(&self, cands: &'a [Polynomial<K>]) -> Option<&'a Polynomial<K>> {
        cands.iter().find(|p| !self.algebra.contains(p))
    }
}

impl<K: Field> Filtration<K> {
    /// Checks `I^n ⊆ F_n`, `F_n F_m ⊆ F_{n+m}` and `F_n = I F_{n-1}` beyond
    /// the stabilization index, for indices up to `level`.
    pub fn check_admissible(&self, level: u32) -> Result<AdmissibilityReport> {
        let ring = &self.ring;
        let fallback = level.max(1) * self.power.max(1) + 1;
        let mut exact = true;
        let mut members = Vec::new();
        for n in 0..=level {
            let m = Membership::new(ring, &self.gens(n), fallback)?;
            exact &= m.exact;
            members.push(m);
        }
        let show = |p: &Polynomial<K>| ring.show(p);

        let mut power_ok = AxiomCheck {
            axiom: "power-contained",
            passed: true,
            witness: None,
            checked_up_to: level,
        };
        for n in 1..=level {
            let pw = power_products(&self.ideal, n);
            if let Some(p) = members[n as usize].first_outside(&pw) {
                power_ok.passed = false;
                power_ok.witness = Some(format!("n={n}: {}", show(p)));
                break;
            }
        }

        let mut product_ok = AxiomCheck {
            axiom: "multiplicative",
            passed: true,
            witness: None,
            checked_up_to: level,
        };
        'outer: for n in 1..level {
            for m in 1..=(level - n).min(n) {
                let gn = self.gens(n);
                let gm = self.gens(m);
                let prods: Vec<Polynomial<K>> =
                    gn.iter().flat_map(|a| gm.iter().map(move |b| a * b)).collect();
                if let Some(p) = members[(n + m) as usize].first_outside(&prods) {
                    product_ok.passed = false;
                    product_ok.witness = Some(format!("n={n}, m={m}: {}", show(p)));
                    break 'outer;
                }
            }
        }

        let mut stable_ok = AxiomCheck {
            axiom: "eventually-ideal-multiple",
            passed: true,
            witness: None,
            checked_up_to: level,
        };
        let n0 = self.stabilization_index() as u32;
        for n in (n0 + 1).max(1)..=level {
            let prev = self.gens(n - 1);
            let prods: Vec<Polynomial<K>> = prev
                .iter()
                .flat_map(|a| self.ideal.iter().map(move |b| a * b))
                .collect();
            if let Some(p) = members[n as usize].first_outside(&prods) {
                stable_ok.passed = false;
                stable_ok.witness = Some(format!("n={n}: {} not in F_n", show(p)));
                break;
            }
            let im = Membership::new(ring, &prods, fallback)?;
            exact &= im.exact;
            if let Some(p) = im.first_outside(&self.gens(n)) {
                stable_ok.passed = false;
                stable_ok.witness = Some(format!("n={n}: {} not in I F_(n-1)", show(p)));
                break;
            }
        }
        let note = matches!(self.kind, FiltrationKind::IntegralClosure).then(|| {
            "integral closures are computed for the monomial ideal in the ambient polynomial ring and mapped to A".to_string()
        });
        Ok(AdmissibilityReport {
            kind: self.kind_name(),
            axioms: vec![power_ok, product_ok, stable_ok],
            exact_membership: exact,
            note,
        })
    }
}

// ---------------------------------------------------------------------------
// superficial elements

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuperficialReport {
    pub holds_in_window: bool,
    pub window: (u32, u32),
    pub first_failure: Option<u32>,
    pub witness: Option<String>,
    pub note: &'static str,
}

fn span_of<K: Field>(vs: impl IntoIterator<Item = SparseVec<K>>) -> Echelon<K> {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v);
    }
    e
}

impl<K: Field> Filtration<K> {
    /// Checks `(F_{n+1}M :_M x) ∩ F_c M = F_n M` for `n` in `c..=b`, inside
    /// `M / F_{n+1} M` where both sides are finite dimensional.
    pub fn superficial_check(&self, x: &Polynomial<K>, phi: &PolyMatrix<K>, c: u32, b: u32) -> Result<SuperficialReport> {
        let ring = &self.ring;
        let f1 = self.truncated_algebra(0)?;
        let f2 = self.truncated_algebra(1)?;
        if !f1.contains(x) || f2.contains(x) {
            return Err(Error::Precondition(format!(
                "{} is not in F_1 \\ F_2",
                ring.show(x)
            )));
        }
        let r = phi.nrows();
        for n in c.max(1)..=b {
            let q = self.module_quotient(phi, n)?;
            let dim = q.dimension();
            let times = |p: &Polynomial<K>| -> Vec<SparseVec<K>> {
                (0..dim)
                    .map(|i| {
                        let (l, m) = q.basis_element(i);
                        let mut v = vec![Polynomial::zero(); r];
                        v[l] = p.mul_monomial(&m);
                        q.reduce(&v)
                    })
                    .collect()
            };
            let mult_x = LinearMap::new(dim, dim, times(x));
            let kernel = mult_x.kernel_basis();
            let sc = span_of(self.gens(c).iter().flat_map(&times));
            let sn = span_of(self.gens(n).iter().flat_map(times));
            // intersection of ker(x) with F_c M, via the kernel of [K | -S]
            let sc_rows: Vec<SparseVec<K>> = sc.rows().to_vec();
            let mut cols: Vec<SparseVec<K>> = kernel.clone();
            cols.extend(sc_rows.iter().map(|v| v.iter().map(|(i, a)| (*i, -a.clone())).collect()));
            let joint = LinearMap::new(cols.len(), dim, cols);
            for z in joint.kernel_basis() {
                let v = crate::linalg::sparse_from(
                    z.iter()
                        .filter(|(i, _)| *i < kernel.len())
                        .flat_map(|(i, a)| kernel[*i].iter().map(move |(k, y)| (*k, a.clone() * y.clone()))),
                );
                if !sn.contains(&v) {
                    let w = q.lift(&v);
                    let text = w.iter().map(|p| ring.show(p)).collect::<Vec<_>>().join(", ");
                    return Ok(SuperficialReport {
                        holds_in_window: false,
                        window: (c, b),
                        first_failure: Some(n),
                        witness: Some(if r == 1 { text } else { format!("({text})") }),
                        note: "finite window only; not a proof for all n",
                    });
                }
            }
        }
        Ok(SuperficialReport {
            holds_in_window: true,
            window: (c, b),
            first_failure: None,
            witness: None,
            note: "finite window only; not a proof for all n",
        })
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

    fn p(r: &Ring<F>, s: &str) -> Polynomial<F> {
        r.parse_poly(s).unwrap()
    }

    #[test]
    fn adic_generators() {
        let r = node();
        let f = Filtration::maximal(&r);
        let mut g: Vec<String> = f.gens(2).iter().map(|q| r.show(q)).collect();
        g.sort();
        assert_eq!(g, vec!["x*y", "x^2", "y^2"]);
        assert_eq!(f.gens(0), vec![Polynomial::one()]);
        assert!(f.is_maximal_adic());
    }

    #[test]
    fn integral_closure_generators() {
        let r = Ring::<F>::parse(3, &["z"]).unwrap();
        let f = Filtration::integral_closure(&r, vec![p(&r, "x^2"), p(&r, "y^3")]);
        // (x^2, y^3) is not primary in k[x,y,z]/(z)?  It is: z = 0 in A.
        let f = f.unwrap();
        assert!(f.gens(1).contains(&p(&r, "x*y^2")));
        assert!(Filtration::integral_closure(&r, vec![p(&r, "x^2 + y^3")]).is_err());
    }

    #[test]
    fn node_hilbert_function() {
        let r = node();
        let f = Filtration::maximal(&r);
        let free = PolyMatrix::zero(1, 0);
        assert_eq!(f.hilbert_values(&free, 0, 5).unwrap(), vec![1, 3, 5, 7, 9, 11]);
        let ax = PolyMatrix::parse(&[vec!["x"]], r.names()).unwrap();
        assert_eq!(f.hilbert_values(&ax, 0, 5).unwrap(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(f.hilbert_coefficients(&free).unwrap(), vec![2, 1]);
        assert_eq!(f.hilbert_coefficients(&ax).unwrap(), vec![1, 0]);
        let free2 = PolyMatrix::zero(2, 0);
        assert_eq!(f.hilbert_coefficients(&free2).unwrap(), vec![4, 2]);
    }

    #[test]
    fn non_maximal_adic_matches_direct_count() {
        let r = node();
        // I = (x^2, y): I^n = (x^{2n}, y^n) in A, length of A/I^{n+1} = 3n + 2
        let f = Filtration::adic(&r, vec![p(&r, "x^2"), p(&r, "y")]).unwrap();
        let free = PolyMatrix::zero(1, 0);
        let v = f.hilbert_values(&free, 0, 6).unwrap();
        assert_eq!(v, (0..=6).map(|n| 3 * n + 2).collect::<Vec<i128>>());
    }

    #[test]
    fn admissibility_reports() {
        let r = node();
        assert!(Filtration::maximal(&r).check_admissible(6).unwrap().passed());
        let r2 = Ring::<F>::parse(3, &["z"]).unwrap();
        let ic = Filtration::integral_closure(&r2, vec![p(&r2, "x^2"), p(&r2, "y^3")]).unwrap();
        let rep = ic.check_admissible(8).unwrap();
        assert!(rep.axioms[1].passed, "{rep:?}");
        // F_2 lacks y^2 from m^2
        let table = vec![
            vec![Polynomial::one()],
            vec![p(&r, "x"), p(&r, "y")],
            vec![p(&r, "x^2")],
        ];
        let bad = Filtration::custom(&r, vec![p(&r, "x"), p(&r, "y")], table).unwrap();
        let rep = bad.check_admissible(4).unwrap();
        assert!(!rep.axioms[0].passed);
        assert_eq!(rep.axioms[0].witness.as_deref(), Some("n=2: y^2"));
    }

    #[test]
    fn superficial_elements_of_node() {
        let r = node();
        let f = Filtration::maximal(&r);
        let free = PolyMatrix::zero(1, 0);
        let good = f.superficial_check(&p(&r, "x + y"), &free, 2, 10).unwrap();
        assert!(good.holds_in_window);
        let bad = f.superficial_check(&p(&r, "x"), &free, 1, 10).unwrap();
        assert_eq!(bad.first_failure, Some(2));
        assert_eq!(bad.witness.as_deref(), Some("y"));
        let bad2 = f.superficial_check(&p(&r, "x"), &free, 2, 10).unwrap();
        assert_eq!(bad2.first_failure, Some(3));
        assert_eq!(bad2.witness.as_deref(), Some("y^2"));
        assert!(f.superficial_check(&p(&r, "x^2"), &free, 1, 4).is_err());
    }
}
