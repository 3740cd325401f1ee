//! Newton polyhedra of monomial ideals and their lattice points.
//!
//! The integral closure of `I^n` for a monomial ideal `I` is spanned by the
//! monomials whose exponent lies in `n · NP(I)`, where
//! `NP(I) = conv(exponents) + R_{>=0}^v`.

use std::collections::BTreeSet;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub type Exponent = Vec<u32>;

/// Inequality description `c · a >= b` of a Newton polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    nvars: usize,
    points: Vec<Exponent>,
    inequalities: Vec<(Vec<i64>, i64)>,
}

fn nullvector(rows: &[Vec<i64>], m: usize) -> Option<Vec<i64>> {
    // Gaussian elimination over Q on an (m-1) x m integer matrix of rank m-1
    let mut a: Vec<Vec<Ratio<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Ratio::from_integer(x as i128)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = Ratio::one() / a[row][col];
        for x in a[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col];
                for k in 0..m {
                    let v = a[row][k];
                    a[r][k] -= f * v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() + 1 != m {
        return None;
    }
    let free = (0..m).find(|c| !pivots.contains(c))?;
    let mut v = vec![Ratio::<i128>::zero(); m];
    v[free] = Ratio::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[r][free];
    }
    let lcm = v.iter().fold(1i128, |acc, x| num_integer::lcm(acc, *x.denom()));
    let ints: Vec<i128> = v.iter().map(|x| (x * Ratio::from_integer(lcm)).to_integer()).collect();
    let g = ints.iter().fold(0i128, |acc, x| num_integer::gcd(acc, *x));
    Some(ints.iter().map(|x| (x / g) as i64).collect())
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..n {
        cur.push(i);
        subsets(n, k, i + 1, cur, f);
        cur.pop();
    }
}

impl NewtonPolyhedron {
    pub fn new(nvars: usize, points: Vec<Exponent>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::NotMonomial("ideal has no generators".into()));
        }
        let m = nvars;
        let mut dirs: Vec<Vec<i64>> = Vec::new();
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                dirs.push((0..m).map(|k| points[j][k] as i64 - points[i][k] as i64).collect());
            }
        }
        for i in 0..m {
            let mut e = vec![0i64; m];
            e[i] = 1;
            dirs.push(e);
        }
        let mut normals: BTreeSet<Vec<i64>> = BTreeSet::new();
        if m == 1 {
            normals.insert(vec![1]);
        } else {
            subsets(dirs.len(), m - 1, 0, &mut Vec::new(), &mut |idx| {
                let rows: Vec<Vec<i64>> = idx.iter().map(|&i| dirs[i].clone()).collect();
                if let Some(mut c) = nullvector(&rows, m) {
                    if c.iter().all(|&x| x <= 0) {
                        c.iter_mut().for_each(|x| *x = -*x);
                    }
                    if c.iter().all(|&x| x >= 0) && c.iter().any(|&x| x > 0) {
                        normals.insert(c);
                    }
                }
            });
        }
        let inequalities = normals
            .into_iter()
            .map(|c| {
                let b = points
                    .iter()
                    .map(|p| p.iter().zip(&c).map(|(&a, &ci)| a as i64 * ci).sum::<i64>())
                    .min()
                    .unwrap();
                (c, b)
            })
            .collect();
        Ok(NewtonPolyhedron {
            nvars,
            points,
            inequalities,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn inequalities(&self) -> &[(Vec<i64>, i64)] {
        &self.inequalities
    }

    /// Whether `a` lies in `n · NP`.
    pub fn contains_scaled(&self, a: &[u32], n: u32) -> bool {
        if n == 0 {
            return true;
        }
        self.inequalities.iter().all(|(c, b)| {
            let lhs: i64 = a.iter().zip(c).map(|(&x, &ci)| x as i64 * ci).sum();
            lhs >= n as i64 * b
        })
    }

    /// Minimal generators of the integral closure of `I^n`.
    pub fn closure_generators(&self, n: u32) -> Vec<Exponent> {
        if n == 0 {
            return vec![vec![0; self.nvars]];
        }
        let bounds: Vec<u32> = (0..self.nvars)
            .map(|i| n * self.points.iter().map(|p| p[i]).max().unwrap())
            .collect();
        let mut members = Vec::new();
        let mut cur = vec![0u32; self.nvars];
        loop {
            if self.contains_scaled(&cur, n) {
                members.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == self.nvars {
                    return minimal_elements(members);
                }
                if cur[i] < bounds[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }
}

/// Keeps the exponents not dominated by another one in the set.
pub fn minimal_elements(mut v: Vec<Exponent>) -> Vec<Exponent> {
    v.sort();
    v.dedup();
    let mut out: Vec<Exponent> = v
        .iter()
        .filter(|a| {
            !v.iter()
                .any(|b| b != *a && b.iter().zip(a.iter()).all(|(x, y)| x <= y))
        })
        .cloned()
        .collect();
    out.sort();
    out
}

/// Outcome of comparing `ov(J^n)` with `Σ_i ov(I^{n-i}) X^i` for `J = (I, X)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntClosumReport {
    pub n: u32,
    pub closure_of_power: Vec<Exponent>,
    pub sum_of_closures: Vec<Exponent>,
    pub equal: bool,
}

/// Checks the identity on minimal generating sets; exponents of the fresh
/// variable `X` are the last coordinate.
pub fn check_intclosum(nvars: usize, ideal: &[Exponent], n: u32) -> Result<IntClosumReport> {
    let np_i = NewtonPolyhedron::new(nvars, ideal.to_vec())?;
    let mut j_points: Vec<Exponent> = ideal
        .iter()
        .map(|p| p.iter().copied().chain([0]).collect())
        .collect();
    let mut x = vec![0u32; nvars + 1];
    x[nvars] = 1;
    j_points.push(x);
    let np_j = NewtonPolyhedron::new(nvars + 1, j_points)?;
    let lhs = np_j.closure_generators(n);
    let mut union = Vec::new();
    for i in 0..=n {
        for g in np_i.closure_generators(n - i) {
            union.push(g.into_iter().chain([i]).collect());
        }
    }
    let rhs = minimal_elements(union);
    Ok(IntClosumReport {
        n,
        equal: lhs == rhs,
        closure_of_power: lhs,
        sum_of_closures: rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    /// Membership of `a` in `n·NP` decided by a direct convex-combination
    /// search over rational weights, independent of the facet description.
    /// Exponential; intended for cross-checking in two variables.
    fn brute_force_member(points: &[Exponent], a: &[u32], n: u32) -> bool {
        // In two variables a point dominates a convex combination of at most two
        // generators; test every pair with a rational line search.
        if n == 0 {
            return true;
        }
        let dominated = |q: [Ratio<i64>; 2]| {
            Ratio::from_integer(a[0] as i64) >= q[0] && Ratio::from_integer(a[1] as i64) >= q[1]
        };
        for p in points {
            let q = [
                Ratio::from_integer(p[0] as i64 * n as i64),
                Ratio::from_integer(p[1] as i64 * n as i64),
            ];
            if dominated(q) {
                return true;
            }
        }
        for p in points {
            for r in points {
                // q(t) = n (t p + (1-t) r); need q(t) <= a, find t interval
                let mut lo = Ratio::from_integer(0i64);
                let mut hi = Ratio::from_integer(1i64);
                for k in 0..2 {
                    let slope = Ratio::from_integer(n as i64 * (p[k] as i64 - r[k] as i64));
                    let rest = Ratio::from_integer(a[k] as i64 - n as i64 * r[k] as i64);
                    // slope * t <= rest
                    if slope.is_zero() {
                        if rest.is_negative() {
                            lo = Ratio::from_integer(2);
                        }
                    } else if slope.is_positive() {
                        hi = hi.min(rest / slope);
                    } else {
                        lo = lo.max(rest / slope);
                    }
                }
                if lo <= hi {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn closure_of_x2_y3_contains_xy2() {
        let np = NewtonPolyhedron::new(2, vec![vec![2, 0], vec![0, 3]]).unwrap();
        assert!(np.contains_scaled(&[1, 2], 1));
        assert!(!np.contains_scaled(&[1, 1], 1));
        let g = np.closure_generators(1);
        assert_eq!(g, vec![vec![0, 3], vec![1, 2], vec![2, 0]]);
    }

    #[test]
    fn facets_agree_with_convex_combinations() {
        let pts = vec![vec![2, 0], vec![0, 3], vec![1, 1]];
        let np = NewtonPolyhedron::new(2, pts.clone()).unwrap();
        for n in 1..4 {
            for a in 0..10 {
                for b in 0..12 {
                    assert_eq!(np.contains_scaled(&[a, b], n), brute_force_member(&pts, &[a, b], n), "{a} {b} {n}");
                }
            }
        }
    }

    #[test]
    fn intclosum_principal_square() {
        let r = check_intclosum(1, &[vec![2]], 2).unwrap();
        assert!(r.equal);
        assert_eq!(r.closure_of_power, vec![vec![0, 2], vec![2, 1], vec![4, 0]]);
        let r0 = check_intclosum(1, &[vec![2]], 0).unwrap();
        assert_eq!(r0.closure_of_power, vec![vec![0, 0]]);
        assert!(r0.equal);
    }

    #[test]
    fn intclosum_two_generators() {
        for n in 0..=4 {
            assert!(check_intclosum(2, &[vec![2, 0], vec![0, 3]], n).unwrap().equal);
        }
    }
}
