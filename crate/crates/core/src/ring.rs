//! Ambient polynomial ring, defining relations, and the derived local ring data.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::poly::{default_var_names, Polynomial, MAX_VARS};

/// `A = k[x_1..x_v]_(x) / (f_1..f_c)`, modelled through its polynomial data.
#[derive(Clone, Debug)]
pub struct Ring<K: Field> {
    names: Vec<String>,
    relations: Vec<Polynomial<K>>,
    weights: Option<Vec<u32>>,
    gorenstein: bool,
}

/// Result of [`Ring::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingDiagnostics {
    pub variables: usize,
    pub dimension: usize,
    pub field: FieldSpec,
    pub relation_orders: Vec<u32>,
    pub orders_at_least_two: bool,
    pub hypersurface: bool,
    pub quadric: bool,
    pub weights: Option<Vec<u32>>,
}

impl<K: Field> Ring<K> {
    /// Builds and validates a ring. Weights for a positive grading are
    /// searched automatically; `hints` are extra polynomials (module entries,
    /// map entries) that should also be homogeneous.
    pub fn new(nvars: usize, relations: Vec<Polynomial<K>>) -> Result<Arc<Self>> {
        Self::with_hints(default_var_names(nvars), relations, &[])
    }

    pub fn with_hints(
        names: Vec<String>,
        relations: Vec<Polynomial<K>>,
        hints: &[Polynomial<K>],
    ) -> Result<Arc<Self>> {
        let nvars = names.len();
        if nvars == 0 || nvars > MAX_VARS {
            return Err(Error::InvalidRing(format!(
                "variable count must be between 1 and {MAX_VARS}, got {nvars}"
            )));
        }
        if relations.iter().any(Polynomial::is_zero) {
            return Err(Error::InvalidRing("zero relation".into()));
        }
        if relations.len() >= nvars {
            return Err(Error::InvalidRing(format!(
                "dimension {} - {} = {} is not positive",
                nvars,
                relations.len(),
                nvars as i64 - relations.len() as i64
            )));
        }
        let all: Vec<&Polynomial<K>> = relations.iter().chain(hints.iter()).collect();
        let weights = find_weights(nvars, &all).or_else(|| {
            let rel: Vec<&Polynomial<K>> = relations.iter().collect();
            find_weights(nvars, &rel)
        });
        Ok(Arc::new(Ring {
            names,
            relations,
            weights,
            gorenstein: true,
        }))
    }

    /// Parses relations given as text in the default variable names.
    pub fn parse(nvars: usize, relations: &[&str]) -> Result<Arc<Self>> {
        let names = default_var_names(nvars);
        let rels = relations
            .iter()
            .map(|s| Polynomial::parse(s, &names))
            .collect::<Result<Vec<_>>>()?;
        Self::with_hints(names, rels, &[])
    }

    /// Overrides the grading. Every relation must be homogeneous for it.
    pub fn with_weights(&self, weights: Vec<u32>) -> Result<Arc<Self>> {
        if weights.len() != self.nvars() || weights.contains(&0) {
            return Err(Error::InvalidRing("weights must be positive, one per variable".into()));
        }
        if let Some(f) = self
            .relations
            .iter()
            .find(|f| f.homogeneous_degree(&weights).is_none())
        {
            return Err(Error::NotGraded(format!(
                "relation {} is not homogeneous for weights {weights:?}",
                self.show(f)
            )));
        }
        let mut r = self.clone();
        r.weights = Some(weights);
        Ok(Arc::new(r))
    }

    /// Marks the ring as not Gorenstein, which disables cosyzygies.
    pub fn without_gorenstein(&self) -> Arc<Self> {
        let mut r = self.clone();
        r.gorenstein = false;
        Arc::new(r)
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relations(&self) -> &[Polynomial<K>] {
        &self.relations
    }

    pub fn dimension(&self) -> usize {
        self.nvars() - self.relations.len()
    }

    pub fn is_hypersurface(&self) -> bool {
        self.relations.len() == 1
    }

    /// The defining equation of a hypersurface.
    pub fn hypersurface_equation(&self) -> Result<&Polynomial<K>> {
        match self.relations.as_slice() {
            [f] => Ok(f),
            _ => Err(Error::Precondition(
                "matrix factorizations need a hypersurface ring".into(),
            )),
        }
    }

    pub fn is_gorenstein(&self) -> bool {
        self.gorenstein
    }

    pub fn weights(&self) -> Option<&[u32]> {
        self.weights.as_deref()
    }

    pub fn require_weights(&self) -> Result<&[u32]> {
        self.weights()
            .ok_or_else(|| Error::NotGraded("ring admits no positive grading".into()))
    }

    pub fn parse_poly(&self, text: &str) -> Result<Polynomial<K>> {
        Polynomial::parse(text, &self.names)
    }

    pub fn show(&self, p: &Polynomial<K>) -> String {
        p.to_string_with(&self.names)
    }

    pub fn variable(&self, i: usize) -> Polynomial<K> {
        Polynomial::var(i)
    }

    /// Dimension, relation orders and the quadric flag.
    pub fn validate(&self) -> Result<RingDiagnostics> {
        let orders = self
            .relations
            .iter()
            .map(Polynomial::lowest_degree)
            .collect::<Result<Vec<_>>>()?;
        if self.relations.len() >= self.nvars() {
            return Err(Error::InvalidRing("dimension must be at least 1".into()));
        }
        Ok(RingDiagnostics {
            variables: self.nvars(),
            dimension: self.dimension(),
            field: FieldSpec::of::<K>(),
            orders_at_least_two: orders.iter().all(|&o| o >= 2),
            quadric: !orders.is_empty() && orders.iter().all(|&o| o == 2),
            hypersurface: self.is_hypersurface(),
            relation_orders: orders,
            weights: self.weights.clone(),
        })
    }

    /// Same ring up to the data that matters for computations.
    pub fn same_as(&self, other: &Ring<K>) -> bool {
        self.names == other.names && self.relations == other.relations
    }
}

/// Searches positive integer weights making every polynomial homogeneous,
/// preferring the smallest weight sum.
pub fn find_weights<K: Field>(nvars: usize, polys: &[&Polynomial<K>]) -> Option<Vec<u32>> {
    let ones = vec![1u32; nvars];
    if polys.iter().all(|p| p.homogeneous_degree(&ones).is_some()) {
        return Some(ones);
    }
    if nvars > 4 {
        return None;
    }
    const MAX_WEIGHT: u32 = 16;
    for total in (nvars as u32 + 1)..=(MAX_WEIGHT * nvars as u32) {
        let mut found = None;
        compositions(nvars, total, MAX_WEIGHT, &mut Vec::new(), &mut |w| {
            if found.is_none() && polys.iter().all(|p| p.homogeneous_degree(w).is_some()) {
                found = Some(w.to_vec());
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

fn compositions(n: usize, total: u32, max: u32, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if cur.len() + 1 == n {
        if (1..=max).contains(&total) {
            cur.push(total);
            f(cur);
            cur.pop();
        }
        return;
    }
    let left = n - cur.len() - 1;
    for w in 1..=max.min(total.saturating_sub(left as u32)) {
        cur.push(w);
        compositions(n, total - w, max, cur, f);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    type F = Fp<32003>;

    #[test]
    fn node_is_quadric_of_dimension_one() {
        let r = Ring::<F>::parse(2, &["x*y"]).unwrap();
        let d = r.validate().unwrap();
        assert_eq!(d.dimension, 1);
        assert!(d.quadric);
        assert_eq!(d.weights, Some(vec![1, 1]));
    }

    #[test]
    fn complete_intersection_of_squares() {
        let r = Ring::<F>::parse(3, &["x^2", "y^2"]).unwrap();
        let d = r.validate().unwrap();
        assert_eq!(d.dimension, 1);
        assert!(d.quadric);
        assert!(!d.hypersurface);
    }

    #[test]
    fn cusp_gets_weighted_grading() {
        let r = Ring::<F>::parse(2, &["x^2 - y^3"]).unwrap();
        let d = r.validate().unwrap();
        assert!(d.quadric);
        assert_eq!(d.relation_orders, vec![2]);
        assert_eq!(d.weights, Some(vec![3, 2]));
    }

    #[test]
    fn nonpositive_dimension_rejected() {
        assert!(matches!(
            Ring::<F>::parse(2, &["x", "y"]),
            Err(Error::InvalidRing(_))
        ));
    }
}
