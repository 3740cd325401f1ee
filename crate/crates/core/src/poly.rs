//! Monomials and sparse multivariate polynomials, with a small text grammar.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{Field, SignedRepr};

/// Upper bound on the number of ambient variables.
pub const MAX_VARS: usize = 8;

/// Exponent vector. Ordered by total degree, then lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::default();
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u16::try_from(e).expect("exponent overflow");
        }
        m
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::default();
        m.exps[i] = 1;
        m
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| e as u32).collect()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        self.exps
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u32 * w)
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        m
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut m = *other;
        for (a, b) in m.exps.iter_mut().zip(self.exps.iter()) {
            *a -= *b;
        }
        Some(m)
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        self.exps.cmp(&other.exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self
            .exps
            .iter()
            .rposition(|&e| e != 0)
            .map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

/// All monomials in `nvars` variables of total degree exactly `d`, in
/// ascending monomial order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = [0u32; MAX_VARS];
    fn rec(i: usize, nvars: usize, left: u32, cur: &mut [u32; MAX_VARS], out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur[i] = left;
            out.push(Monomial::from_exponents(&cur[..nvars]));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, nvars, left - e, cur, out);
        }
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    rec(0, nvars, d, &mut cur, &mut out);
    out.sort();
    out
}

/// All monomials with the given weighted degree.
pub fn monomials_of_weighted_degree(weights: &[u32], d: u32) -> Vec<Monomial> {
    let nvars = weights.len();
    let mut out = Vec::new();
    let mut cur = [0u32; MAX_VARS];
    fn rec(
        i: usize,
        weights: &[u32],
        left: u32,
        cur: &mut [u32; MAX_VARS],
        out: &mut Vec<Monomial>,
    ) {
        if i == weights.len() {
            if left == 0 {
                out.push(Monomial::from_exponents(&cur[..weights.len()]));
            }
            return;
        }
        let w = weights[i];
        let mut e = 0;
        while e * w <= left {
            cur[i] = e;
            rec(i + 1, weights, left - e * w, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    rec(0, weights, d, &mut cur, &mut out);
    out.sort();
    out
}

/// Sparse polynomial: no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<K: Field> {
    terms: BTreeMap<Monomial, K>,
}

impl<K: Field> Default for Polynomial<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Field> Polynomial<K> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: K, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(K::one(), m)
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Monomial::var(i))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    pub fn constant_term(&self) -> K {
        self.coefficient(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &K) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(*m, v.clone() * c.clone());
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (*m, v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(t, v)| (t.mul(m), v.clone())).collect(),
        }
    }

    pub fn mul_term(&self, c: &K, m: &Monomial) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(t, v)| (t.mul(m), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Minimum total degree of a term.
    pub fn lowest_degree(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(Monomial::degree)
            .min()
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Drops all terms of total degree above `level`.
    pub fn truncate(&self, level: u32) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= level)
                .map(|(m, v)| (*m, v.clone()))
                .collect(),
        }
    }

    /// The common weighted degree of all terms, `None` when mixed; zero
    /// polynomials report `Some(None)`-like behavior via `Ok(None)`.
    pub fn homogeneous_degree(&self, weights: &[u32]) -> Option<Option<u32>> {
        let mut it = self.terms.keys().map(|m| m.weighted_degree(weights));
        let first = match it.next() {
            Some(d) => d,
            None => return Some(None),
        };
        it.all(|d| d == first).then_some(Some(first))
    }

    /// Splits into weighted-homogeneous components keyed by weighted degree.
    pub fn homogeneous_parts(&self, weights: &[u32]) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, v) in &self.terms {
            out.entry(m.weighted_degree(weights))
                .or_default()
                .terms
                .insert(*m, v.clone());
        }
        out
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Whether the constant term is invertible, i.e. a unit in the local ring.
    pub fn is_local_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    pub fn parse(text: &str, names: &[String]) -> Result<Self> {
        Parser::new(text, names).parse()
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a, K> {
        PolyDisplay { poly: self, names }
    }
}

impl<K: Field> std::ops::Add for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn add(self, o: &Polynomial<K>) -> Polynomial<K> {
        let mut r = self.clone();
        for (m, v) in &o.terms {
            r.add_term(*m, v.clone());
        }
        r
    }
}

impl<K: Field> std::ops::Sub for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn sub(self, o: &Polynomial<K>) -> Polynomial<K> {
        let mut r = self.clone();
        for (m, v) in &o.terms {
            r.add_term(*m, -v.clone());
        }
        r
    }
}

impl<K: Field> std::ops::Mul for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn mul(self, o: &Polynomial<K>) -> Polynomial<K> {
        let mut r = Polynomial::zero();
        for (m1, v1) in &self.terms {
            for (m2, v2) in &o.terms {
                r.add_term(m1.mul(m2), v1.clone() * v2.clone());
            }
        }
        r
    }
}

impl<K: Field> std::ops::Neg for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn neg(self) -> Polynomial<K> {
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (*m, -v.clone())).collect(),
        }
    }
}

impl<K: Field> fmt::Debug for Polynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=MAX_VARS).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display(&names))
    }
}

/// Default variable names: `x, y, z` for up to three variables, else `x1..xv`.
pub fn default_var_names(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

pub struct PolyDisplay<'a, K: Field> {
    poly: &'a Polynomial<K>,
    names: &'a [String],
}

fn monomial_text(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, name) in names.iter().enumerate() {
        match m.exponent(i) {
            0 => {}
            1 => parts.push(name.clone()),
            e => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

impl<K: Field> fmt::Display for PolyDisplay<'_, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        // ascending degree; inside one degree, x before y
        let mut terms: Vec<_> = self.poly.terms.iter().collect();
        terms.sort_by(|a, b| {
            a.0.degree()
                .cmp(&b.0.degree())
                .then_with(|| b.0.lex_cmp(a.0))
        });
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative_repr();
            let abs = if negative { -c.clone() } else { c.clone() };
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = monomial_text(m, self.names);
            let coeff = match abs.signed_repr() {
                SignedRepr::Int(v) => v.to_string(),
                SignedRepr::Ratio(n, d) => format!("{n}/{d}"),
            };
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{coeff}*{mono}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(text: &str, names: &'a [String]) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            names,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected variable");
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn parse<K: Field>(mut self) -> Result<Polynomial<K>> {
        let mut poly = Polynomial::zero();
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut first = true;
        loop {
            let mut sign = 1i64;
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                }
                Some('-') => {
                    sign = -1;
                    self.pos += 1;
                }
                Some(_) if first => {}
                Some(c) => return self.err(format!("expected `+` or `-`, found `{c}`")),
                None => break,
            }
            first = false;
            // tolerate a unary sign after the operator, as in `x + -2*y`
            match self.peek() {
                Some('-') => {
                    sign = -sign;
                    self.pos += 1;
                }
                Some('+') => self.pos += 1,
                _ => {}
            }
            let (c, m) = self.term::<K>()?;
            let c = if sign < 0 { -c } else { c };
            poly.add_term(m, c);
            if self.peek().is_none() {
                break;
            }
        }
        Ok(poly)
    }

    fn term<K: Field>(&mut self) -> Result<(K, Monomial)> {
        let mut coeff = K::one();
        let mut mono = Monomial::one();
        let mut any = false;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    let num = self.integer()?;
                    let den = if self.peek() == Some('/') {
                        self.pos += 1;
                        self.integer()?
                    } else {
                        BigInt::from(1)
                    };
                    let value = K::from_ratio(&num, &den).ok_or_else(|| {
                        let text: String = self.chars[start..self.pos].iter().collect();
                        Error::NotInvertible(text)
                    })?;
                    coeff = coeff * value;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let name = self.ident()?;
                    let idx = self
                        .names
                        .iter()
                        .position(|n| *n == name)
                        .ok_or(Error::UnknownVariable(name))?;
                    let mut e = 1u32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        let v = self.integer()?;
                        e = u32::try_from(v).or_else(|_| self.err("exponent too large"))?;
                    }
                    let mut exps = [0u32; MAX_VARS];
                    exps[idx] = e;
                    mono = mono.mul(&Monomial::from_exponents(&exps));
                }
                Some(c) => return self.err(format!("unexpected `{c}`")),
                None => break,
            }
            any = true;
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_alphanumeric() => {}
                _ => break,
            }
        }
        if !any {
            return self.err("expected term");
        }
        Ok((coeff, mono))
    }
}

impl<K: Field> Polynomial<K> {
    pub fn to_string_with(&self, names: &[String]) -> String {
        self.display(names).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    type F = Fp<32003>;
    type F3 = Fp<3>;

    fn names() -> Vec<String> {
        default_var_names(2)
    }

    #[test]
    fn parse_single_monomial() {
        let p = Polynomial::<F>::parse("x*y", &names()).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&Monomial::from_exponents(&[1, 1])), F::new(1));
    }

    #[test]
    fn parse_two_terms() {
        let p = Polynomial::<F>::parse("x^2 - y^3", &names()).unwrap();
        let degs: Vec<u32> = p.terms().map(|(m, _)| m.degree()).collect();
        assert_eq!(degs, vec![2, 3]);
        assert_eq!(p.to_string_with(&names()), "x^2 - y^3");
    }

    #[test]
    fn parse_characteristic_cancellation() {
        let p = Polynomial::<F3>::parse("x^2 + 2*x^2", &names()).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Polynomial::<F>::parse("x + w", &names()),
            Err(Error::UnknownVariable(_))
        ));
        assert!(matches!(
            Polynomial::<F3>::parse("1/3*x", &names()),
            Err(Error::NotInvertible(_))
        ));
        match Polynomial::<F>::parse("x + * y", &names()) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lowest_degree_examples() {
        let n = names();
        let ld = |s: &str| Polynomial::<F>::parse(s, &n).unwrap().lowest_degree().unwrap();
        assert_eq!(ld("x*y"), 2);
        assert_eq!(ld("x^2 - y^3"), 2);
        assert_eq!(ld("x^5"), 5);
        assert_eq!(Polynomial::<F>::zero().lowest_degree(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(2, 3).len(), 4);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        // weights (3,2): degree 6 is x^2 or y^3
        assert_eq!(monomials_of_weighted_degree(&[3, 2], 6).len(), 2);
        assert_eq!(monomials_of_weighted_degree(&[3, 2], 1).len(), 0);
    }

    #[test]
    fn printing_rationals_and_constants() {
        let n = names();
        let p = Polynomial::<crate::field::Rational>::parse("3/2*x - 1 + y^2", &n).unwrap();
        assert_eq!(p.to_string_with(&n), "-1 + 3/2*x + y^2");
    }
}
