//! Lengths of `Tor_i(M, A/F_{n+1})` and the invariant `e^T`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::{Filtration, WINDOW_CAP};
use crate::fit::PolyFit;
use crate::matrix::PolyMatrix;
use crate::module::Module;

/// `n ↦ ℓ(Tor_i(M, A/F_{n+1}))` on `start..start+values.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorTable {
    pub i: usize,
    pub start: usize,
    pub values: Vec<i128>,
}

/// `ℓ(Tor_i(M, A/F_{n+1}))` from the tensored resolution.
pub fn tor_length<K: Field>(m: &Module<K>, i: usize, f: &Filtration<K>, n: u32) -> Result<usize> {
    let res = m.resolution(i + 1)?;
    let t = f.truncated_algebra(n)?;
    let dim = t.dimension();
    let incoming = t.tensor_map(&res[i]);
    if i == 0 {
        return Ok(m.cover_rank() * dim - incoming.rank());
    }
    let outgoing = t.tensor_map(&res[i - 1]);
    Ok(outgoing.kernel_dim() - incoming.rank())
}

pub fn tor_table<K: Field>(m: &Module<K>, i: usize, f: &Filtration<K>, lo: u32, hi: u32) -> Result<TorTable> {
    m.resolution(i + 1)?;
    let values = (lo..=hi)
        .into_par_iter()
        .map(|n| tor_length(m, i, f, n).map(|v| v as i128))
        .collect::<Result<Vec<_>>>()?;
    Ok(TorTable {
        i,
        start: lo as usize,
        values,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EtorMethod {
    Limit,
    Formula,
    Both,
}

impl std::str::FromStr for EtorMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "limit" => Ok(EtorMethod::Limit),
            "formula" => Ok(EtorMethod::Formula),
            "both" => Ok(EtorMethod::Both),
            _ => Err(Error::Precondition(format!(
                "unknown method `{s}` (expected limit, formula or both)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ETorReport {
    pub etor: i128,
    pub method: EtorMethod,
    pub limit: Option<i128>,
    pub formula: Option<i128>,
    pub method_agreement: Option<bool>,
    pub stabilization_index: Option<usize>,
    pub window: Option<(usize, usize)>,
    pub mcm: &'static str,
}

/// Normalized leading coefficient of the `Tor_1` table, with the
/// stabilization index and the window that certified it.
pub fn etor_limit<K: Field>(m: &Module<K>, f: &Filtration<K>) -> Result<(i128, usize, (usize, usize))> {
    let d = m.ring().dimension();
    let lo = 1u32;
    let mut hi = (2 * d + 8) as u32;
    loop {
        let t = tor_table(m, 1, f, lo, hi)?;
        let v = &t.values;
        let found = if d == 1 {
            // the limit is the eventual constant value
            let last = *v.last().unwrap();
            if v.len() >= 3 && v[v.len() - 3..].iter().all(|&x| x == last) {
                let mut s = v.len();
                while s > 0 && v[s - 1] == last {
                    s -= 1;
                }
                Ok((last, lo as usize + s))
            } else {
                Err(Error::WindowTooShort("Tor table not constant on its tail".into()))
            }
        } else {
            PolyFit::with_degree_at(lo as usize, v, d - 1).map(|fit| (fit.top_difference(), fit.stabilization_index))
        };
        match found {
            Ok((value, s)) => return Ok((value, s, (lo as usize, hi as usize))),
            Err(e) if hi as usize >= WINDOW_CAP => return Err(e),
            Err(_) => hi = (hi * 2).min(WINDOW_CAP as u32),
        }
    }
}

/// `r e_1(A) - e_1(M) - e_1(Syz)`, with `r` generators and `Syz` the
/// kernel of the corresponding cover, so no minimality is needed.
pub fn etor_formula<K: Field>(m: &Module<K>, f: &Filtration<K>) -> Result<i128> {
    if m.ring().dimension() == 0 {
        return Err(Error::Precondition("ring dimension must be positive".into()));
    }
    let r = m.cover_rank() as i128;
    let res = m.resolution(2)?;
    let syz: PolyMatrix<K> = res[1].clone();
    let e1 = |phi: &PolyMatrix<K>| -> Result<i128> { Ok(f.hilbert_coefficients(phi)?[1]) };
    let ring_e1 = e1(&PolyMatrix::zero(1, 0))?;
    let syz_e1 = if syz.nrows() == 0 { 0 } else { e1(&syz)? };
    let m_e1 = if m.cover_rank() == 0 { 0 } else { e1(m.phi())? };
    Ok(r * ring_e1 - m_e1 - syz_e1)
}

pub fn etor<K: Field>(m: &Module<K>, f: &Filtration<K>, method: EtorMethod) -> Result<ETorReport> {
    let limit = match method {
        EtorMethod::Limit | EtorMethod::Both => Some(etor_limit(m, f)?),
        EtorMethod::Formula => None,
    };
    let formula = match method {
        EtorMethod::Formula | EtorMethod::Both => Some(etor_formula(m, f)?),
        EtorMethod::Limit => None,
    };
    let agreement = match (&limit, formula) {
        (Some((l, _, _)), Some(fv)) => {
            if *l != fv {
                return Err(Error::Invariant(format!(
                    "e^T by limit is {l} but the closed formula gives {fv}"
                )));
            }
            Some(true)
        }
        _ => None,
    };
    Ok(ETorReport {
        etor: limit.map(|l| l.0).or(formula).unwrap(),
        method,
        limit: limit.map(|l| l.0),
        formula,
        method_agreement: agreement,
        stabilization_index: limit.map(|l| l.1),
        window: limit.map(|l| l.2),
        mcm: "asserted",
    })
}

/// `e^T(M)` by the limit method.
pub fn etor_value<K: Field>(m: &Module<K>, f: &Filtration<K>) -> Result<i128> {
    Ok(etor_limit(m, f)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::ring::Ring;
    use std::sync::Arc;

    type F = Fp<32003>;

    fn node() -> Arc<Ring<F>> {
        Ring::parse(2, &["x*y"]).unwrap()
    }

    fn mf(r: &Arc<Ring<F>>, a: &str, b: &str) -> Module<F> {
        Module::matrix_factorization(
            r,
            PolyMatrix::parse(&[vec![a]], r.names()).unwrap(),
            PolyMatrix::parse(&[vec![b]], r.names()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn tor_of_a_mod_x() {
        let r = node();
        let f = Filtration::maximal(&r);
        let m = mf(&r, "x", "y");
        for n in 1..6 {
            assert_eq!(tor_length(&m, 1, &f, n).unwrap(), 1);
        }
        assert_eq!(tor_length(&m, 0, &f, 3).unwrap(), 4);
        let free = Module::free(&r, 2);
        assert_eq!(tor_table(&free, 1, &f, 0, 5).unwrap().values, vec![0; 6]);
        let sum = m.direct_sum(&mf(&r, "y", "x")).unwrap();
        assert_eq!(tor_table(&sum, 1, &f, 1, 6).unwrap().values, vec![2; 6]);
    }

    #[test]
    fn etor_both_methods() {
        let r = node();
        let f = Filtration::maximal(&r);
        let m = mf(&r, "x", "y");
        let rep = etor(&m, &f, EtorMethod::Both).unwrap();
        assert_eq!(rep.etor, 1);
        assert_eq!(rep.method_agreement, Some(true));
        assert_eq!(etor(&Module::free(&r, 1), &f, EtorMethod::Both).unwrap().etor, 0);
        let u = m.direct_sum(&Module::free(&r, 1)).unwrap();
        assert_eq!(etor(&u, &f, EtorMethod::Both).unwrap().etor, 1);
        // presentation backend, graded kernels for the syzygy
        let p = Module::presentation(&r, PolyMatrix::parse(&[vec!["x"]], r.names()).unwrap());
        assert_eq!(etor(&p, &f, EtorMethod::Both).unwrap().etor, 1);
    }

    #[test]
    fn periodic_tor() {
        let r = Ring::<F>::parse(2, &["x^2 - y^3"]).unwrap();
        let f = Filtration::maximal(&r);
        let m = Module::matrix_factorization(
            &r,
            PolyMatrix::parse(&[vec!["x", "y"], vec!["y^2", "x"]], r.names()).unwrap(),
            PolyMatrix::parse(&[vec!["x", "-y"], vec!["-y^2", "x"]], r.names()).unwrap(),
        )
        .unwrap();
        for n in 0..8 {
            let t1 = tor_length(&m, 1, &f, n).unwrap();
            assert_eq!(t1, tor_length(&m, 3, &f, n).unwrap());
            assert_eq!(tor_length(&m, 2, &f, n).unwrap(), tor_length(&m, 4, &f, n).unwrap());
        }
        let rep = etor(&m, &f, EtorMethod::Both).unwrap();
        assert_eq!(rep.etor, 2);
    }
}
