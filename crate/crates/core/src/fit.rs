//! Exact polynomial fits of integer sequences by finite differences.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

/// Number of trailing entries on which the next difference must vanish.
pub const STABLE_RUN: usize = 3;

/// A polynomial `P` with `table[n] = P(n)` for all tabulated `n >= stabilization_index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFit {
    pub degree: usize,
    /// Newton data: `P(n) = sum_k diffs[k] * binom(n - base, k)`.
    base: i64,
    diffs: Vec<i128>,
    pub stabilization_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FitSummary {
    pub degree: usize,
    pub coefficients: Vec<String>,
    pub stabilization_index: usize,
}

fn differences(v: &[i128]) -> Vec<i128> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Generalized binomial coefficient `binom(x, k)` for integer `x`.
pub fn binom(x: i128, k: usize) -> i128 {
    let mut acc: i128 = 1;
    for i in 0..k as i128 {
        acc = acc * (x - i) / (i + 1);
    }
    acc
}

impl PolyFit {
    /// Fits a polynomial of the given degree through the last `degree + 1`
    /// entries, then walks back to the first index where the table agrees.
    pub fn with_degree(table: &[i128], degree: usize) -> Result<Self> {
        Self::with_degree_at(0, table, degree)
    }

    /// As [`PolyFit::with_degree`] for a table whose first entry is `P(start)`.
    pub fn with_degree_at(start: usize, table: &[i128], degree: usize) -> Result<Self> {
        let need = degree + 1 + STABLE_RUN;
        if table.len() < need {
            return Err(Error::WindowTooShort(format!(
                "{} entries, need {need} for degree {degree}",
                table.len()
            )));
        }
        let mut d = table.to_vec();
        for _ in 0..=degree {
            d = differences(&d);
        }
        if d[d.len() - STABLE_RUN..].iter().any(|&x| x != 0) {
            return Err(Error::WindowTooShort(format!(
                "difference of order {} has not vanished",
                degree + 1
            )));
        }
        let base = table.len() - degree - 1;
        let mut diffs = Vec::with_capacity(degree + 1);
        let mut cur = table[base..].to_vec();
        for _ in 0..=degree {
            diffs.push(cur[0]);
            cur = differences(&cur);
        }
        let mut fit = PolyFit {
            degree,
            base: (start + base) as i64,
            diffs,
            stabilization_index: 0,
        };
        let mut s = table.len();
        while s > 0 && fit.eval((start + s) as i64 - 1) == table[s - 1] {
            s -= 1;
        }
        fit.stabilization_index = start + s;
        fit.trim();
        Ok(fit)
    }

    /// Smallest degree whose next difference vanishes on the tail.
    pub fn auto(table: &[i128]) -> Result<Self> {
        Self::auto_at(0, table)
    }

    pub fn auto_at(start: usize, table: &[i128]) -> Result<Self> {
        let mut d = table.to_vec();
        for degree in 0..table.len() {
            d = differences(&d);
            if d.len() < STABLE_RUN {
                break;
            }
            if d[d.len() - STABLE_RUN..].iter().all(|&x| x == 0) {
                return Self::with_degree_at(start, table, degree);
            }
        }
        Err(Error::WindowTooShort(
            "finite differences never stabilized".into(),
        ))
    }

    /// Drops leading zero Newton coefficients so `degree` is exact.
    fn trim(&mut self) {
        while self.diffs.len() > 1 && *self.diffs.last().unwrap() == 0 {
            self.diffs.pop();
        }
        self.degree = self.diffs.len() - 1;
    }

    pub fn is_zero(&self) -> bool {
        self.diffs.iter().all(|&x| x == 0)
    }

    pub fn eval(&self, n: i64) -> i128 {
        self.diffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * binom(n as i128 - self.base as i128, k))
            .sum()
    }

    /// `degree! * leading coefficient`, the top finite difference.
    pub fn top_difference(&self) -> i128 {
        *self.diffs.last().unwrap()
    }

    /// Coefficients in the monomial basis, constant term first.
    pub fn coefficients(&self) -> Vec<Ratio<i128>> {
        // expand each binom(n - base, k) as a polynomial in n
        let mut out = vec![Ratio::from_integer(0); self.diffs.len()];
        for (k, &c) in self.diffs.iter().enumerate() {
            // prod_{i<k} (n - base - i) / k!
            let mut poly: Vec<Ratio<i128>> = vec![Ratio::from_integer(1)];
            for i in 0..k as i128 {
                let shift = -(self.base as i128) - i;
                let mut next = vec![Ratio::from_integer(0); poly.len() + 1];
                for (e, a) in poly.iter().enumerate() {
                    next[e + 1] += *a;
                    next[e] += *a * shift;
                }
                poly = next;
            }
            let fact: i128 = (1..=k as i128).product();
            for (e, a) in poly.iter().enumerate() {
                out[e] += *a * Ratio::from_integer(c) / Ratio::from_integer(fact);
            }
        }
        out
    }

    /// Hilbert coefficients: `P(n) = sum_i (-1)^i e_i binom(n + r - i, r - i)`
    /// with `r` the degree, so `e_i = (-1)^i (∇^{r-i} P)(-1)`.
    pub fn hilbert_coefficients(&self, r: usize) -> Vec<i128> {
        (0..=r)
            .map(|i| {
                let m = r - i;
                let back: i128 = (0..=m)
                    .map(|k| {
                        let sign = if k % 2 == 0 { 1 } else { -1 };
                        sign * binom(m as i128, k) * self.eval(-1 - k as i64)
                    })
                    .sum();
                if i % 2 == 0 {
                    back
                } else {
                    -back
                }
            })
            .collect()
    }

    pub fn summary(&self) -> FitSummary {
        FitSummary {
            degree: self.degree,
            coefficients: self.coefficients().iter().map(ratio_text).collect(),
            stabilization_index: self.stabilization_index,
        }
    }
}

pub fn ratio_text(r: &Ratio<i128>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn odd_numbers() {
        let t: Vec<i128> = (0..8).map(|n| 2 * n + 1).collect();
        let f = PolyFit::auto(&t).unwrap();
        assert_eq!(f.degree, 1);
        assert_eq!(f.stabilization_index, 0);
        assert_eq!(f.coefficients(), vec![Ratio::from_integer(1), Ratio::from_integer(2)]);
        // P(n) = 2(n+1) - 1
        assert_eq!(f.hilbert_coefficients(1), vec![2, 1]);
    }

    #[test]
    fn constant_table() {
        let f = PolyFit::auto(&[5; 6]).unwrap();
        assert_eq!(f.degree, 0);
        assert_eq!(f.eval(100), 5);
        assert_eq!(f.hilbert_coefficients(0), vec![5]);
    }

    #[test]
    fn rank_two_free_module_doubles_leading_term() {
        let t: Vec<i128> = (0..8).map(|n| 2 * (2 * n + 1)).collect();
        let f = PolyFit::auto(&t).unwrap();
        assert_eq!(f.coefficients()[1], Ratio::from_integer(4));
    }

    #[test]
    fn late_stabilization_is_reported() {
        let t = [0i128, 2, 3, 5, 7, 9, 11, 13];
        let f = PolyFit::auto(&t).unwrap();
        assert_eq!(f.degree, 1);
        assert_eq!(f.stabilization_index, 2);
    }

    #[test]
    fn offset_tables() {
        let t: Vec<i128> = (3..10).map(|n| 2 * n + 1).collect();
        let f = PolyFit::auto_at(3, &t).unwrap();
        assert_eq!(f.eval(0), 1);
        assert_eq!(f.stabilization_index, 3);
    }

    #[test]
    fn short_window_rejected() {
        assert!(matches!(PolyFit::auto(&[1, 4, 9]), Err(Error::WindowTooShort(_))));
        assert!(PolyFit::with_degree(&[1, 2, 4, 8, 16, 32, 64], 1).is_err());
    }

    proptest! {
        #[test]
        fn fit_reproduces_polynomials(c in proptest::collection::vec(-20i128..20, 1..4), start in 0usize..4) {
            // P(n) = sum c_k binom(n, k), padded with noise before `start`
            let p = |n: i128| c.iter().enumerate().map(|(k, &a)| a * binom(n, k)).sum::<i128>();
            let mut t: Vec<i128> = (0..14).map(p).collect();
            for v in t.iter_mut().take(start) {
                *v += 1000;
            }
            let f = PolyFit::auto(&t).unwrap();
            for n in f.stabilization_index..t.len() {
                prop_assert_eq!(f.eval(n as i64), t[n]);
            }
            prop_assert!(f.stabilization_index <= start);
            for n in -5..20 {
                prop_assert_eq!(f.eval(n), p(n as i128));
            }
        }

        #[test]
        fn hilbert_coefficients_invert_binomial_expansion(e in proptest::collection::vec(-9i128..9, 1..4)) {
            let r = e.len() - 1;
            let p = |n: i128| -> i128 {
                e.iter().enumerate().map(|(i, &ei)| {
                    let s = if i % 2 == 0 { 1 } else { -1 };
                    s * ei * binom(n + (r - i) as i128, r - i)
                }).sum()
            };
            let t: Vec<i128> = (0..12).map(p).collect();
            let f = PolyFit::with_degree(&t, r).unwrap();
            prop_assert_eq!(f.hilbert_coefficients(r), e.clone());
        }
    }
}
