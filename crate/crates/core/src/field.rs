//! Exact coefficient fields.
//!
//! Everything above this module is generic over [`Field`]. Three families are
//! provided: prime fields with a compile-time modulus ([`Fp`]), a prime field
//! whose modulus is fixed once per process ([`DynFp`], used by the command
//! line front end), and the rationals ([`Rational`]).

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// An exact field usable as a coefficient domain.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// 0 for the rationals, otherwise the prime modulus.
    fn characteristic() -> u64;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;

    /// The element `num / den`, or `None` when `den` vanishes in the field.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self>;

    /// A uniformly random element (rationals draw small integers).
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Every element, for finite fields small enough to enumerate.
    fn elements() -> Option<Vec<Self>>;

    /// Signed integer representative, used for printing.
    fn signed_repr(&self) -> SignedRepr;

    fn is_negative_repr(&self) -> bool {
        matches!(self.signed_repr(), SignedRepr::Int(v) if v < 0)
            || matches!(self.signed_repr(), SignedRepr::Ratio(n, _) if n < BigInt::zero())
    }
}

/// How a coefficient prints: a signed integer or a signed fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignedRepr {
    Int(i64),
    Ratio(BigInt, BigInt),
}

fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        return None;
    }
    let g = (a as i64).extended_gcd(&(p as i64));
    Some(g.x.rem_euclid(p as i64) as u64)
}

fn reduce_ratio(num: &BigInt, den: &BigInt, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = num.mod_floor(&pb).to_u64()?;
    let d = den.mod_floor(&pb).to_u64()?;
    let dinv = mod_inverse(d, p)?;
    Some(n * dinv % p)
}

fn signed_of(v: u32, p: u64) -> i64 {
    let v = v as i64;
    let p = p as i64;
    if v > p / 2 {
        v - p
    } else {
        v
    }
}

/// `F_P` with the modulus fixed at compile time. `P` must be prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub const MODULUS: u32 = P;

    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", signed_of(self.0, P as u64))
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", signed_of(self.0, P as u64))
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let s = self.0 as u64 + o.0 as u64;
        Fp((s % P as u64) as u32)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let s = self.0 as u64 + P as u64 - o.0 as u64;
        Fp((s % P as u64) as u32)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp((self.0 as u64 * o.0 as u64 % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn characteristic() -> u64 {
        P as u64
    }

    fn inv(&self) -> Option<Self> {
        mod_inverse(self.0 as u64, P as u64).map(|v| Fp(v as u32))
    }

    fn from_i64(v: i64) -> Self {
        Self::new(v)
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        reduce_ratio(num, den, P as u64).map(|v| Fp(v as u32))
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..P))
    }

    fn elements() -> Option<Vec<Self>> {
        (P <= 1024).then(|| (0..P).map(Fp).collect())
    }

    fn signed_repr(&self) -> SignedRepr {
        SignedRepr::Int(signed_of(self.0, P as u64))
    }
}

static DYN_MODULUS: OnceLock<u32> = OnceLock::new();

/// `F_p` with the modulus chosen at run time, once per process.
///
/// Call [`DynFp::set_modulus`] before creating any element.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct DynFp(u32);

impl DynFp {
    /// Fixes the process-wide modulus. Setting the same prime twice is fine;
    /// a different prime is rejected.
    pub fn set_modulus(p: u32) -> Result<()> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let stored = *DYN_MODULUS.get_or_init(|| p);
        if stored != p {
            return Err(Error::InvalidField(format!(
                "run-time modulus already fixed to {stored}"
            )));
        }
        Ok(())
    }

    pub fn modulus() -> u32 {
        *DYN_MODULUS
            .get()
            .expect("DynFp::set_modulus must be called before arithmetic")
    }

    pub fn new(v: i64) -> Self {
        DynFp(v.rem_euclid(Self::modulus() as i64) as u32)
    }
}

impl fmt::Debug for DynFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", signed_of(self.0, Self::modulus() as u64))
    }
}

impl fmt::Display for DynFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", signed_of(self.0, Self::modulus() as u64))
    }
}

impl Add for DynFp {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let p = Self::modulus() as u64;
        DynFp(((self.0 as u64 + o.0 as u64) % p) as u32)
    }
}

impl Sub for DynFp {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let p = Self::modulus() as u64;
        DynFp(((self.0 as u64 + p - o.0 as u64) % p) as u32)
    }
}

impl Mul for DynFp {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = Self::modulus() as u64;
        DynFp((self.0 as u64 * o.0 as u64 % p) as u32)
    }
}

impl Neg for DynFp {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            DynFp(Self::modulus() - self.0)
        }
    }
}

impl Zero for DynFp {
    fn zero() -> Self {
        DynFp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for DynFp {
    fn one() -> Self {
        DynFp(1)
    }
}

impl Field for DynFp {
    fn characteristic() -> u64 {
        Self::modulus() as u64
    }

    fn inv(&self) -> Option<Self> {
        mod_inverse(self.0 as u64, Self::modulus() as u64).map(|v| DynFp(v as u32))
    }

    fn from_i64(v: i64) -> Self {
        Self::new(v)
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        reduce_ratio(num, den, Self::modulus() as u64).map(|v| DynFp(v as u32))
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        DynFp(rng.gen_range(0..Self::modulus()))
    }

    fn elements() -> Option<Vec<Self>> {
        let p = Self::modulus();
        (p <= 1024).then(|| (0..p).map(DynFp).collect())
    }

    fn signed_repr(&self) -> SignedRepr {
        SignedRepr::Int(signed_of(self.0, Self::modulus() as u64))
    }
}

/// The rationals, for characteristic-zero cross-checks.
pub type Rational = BigRational;

impl Field for BigRational {
    fn characteristic() -> u64 {
        0
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        (!den.is_zero()).then(|| BigRational::new(num.clone(), den.clone()))
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_i64(rng.gen_range(-9..=9))
    }

    fn elements() -> Option<Vec<Self>> {
        None
    }

    fn signed_repr(&self) -> SignedRepr {
        if self.is_integer() {
            if let Some(v) = self.numer().to_i64() {
                return SignedRepr::Int(v);
            }
        }
        SignedRepr::Ratio(self.numer().clone(), self.denom().clone())
    }

    fn is_negative_repr(&self) -> bool {
        self.is_negative()
    }
}

/// Trial-division primality test; moduli are below 2^31.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Runtime description of a coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct FieldSpec {
    pub characteristic: u64,
}

impl FieldSpec {
    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic != 0 && !(is_prime(characteristic) && characteristic < (1 << 31)) {
            return Err(Error::InvalidField(format!(
                "characteristic must be 0 or a prime below 2^31, got {characteristic}"
            )));
        }
        Ok(FieldSpec { characteristic })
    }

    pub fn of<K: Field>() -> Self {
        FieldSpec {
            characteristic: K::characteristic(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F7 = Fp<7>;

    #[test]
    fn prime_field_arithmetic() {
        let a = F7::new(5);
        let b = F7::new(4);
        assert_eq!(a + b, F7::new(2));
        assert_eq!(a - b, F7::new(1));
        assert_eq!(b - a, F7::new(6));
        assert_eq!(a * b, F7::new(6));
        assert_eq!(-a, F7::new(2));
        assert_eq!(a * a.inv().unwrap(), F7::one());
        assert!(F7::zero().inv().is_none());
    }

    #[test]
    fn ratio_reduction() {
        let half = F7::from_ratio(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(half * F7::new(2), F7::one());
        assert!(F7::from_ratio(&BigInt::from(1), &BigInt::from(14)).is_none());
        let q = Rational::from_ratio(&BigInt::from(3), &BigInt::from(6)).unwrap();
        assert_eq!(q.signed_repr(), SignedRepr::Ratio(BigInt::from(1), BigInt::from(2)));
    }

    #[test]
    fn signed_representatives() {
        assert_eq!(F7::new(6).to_string(), "-1");
        assert_eq!(F7::new(3).to_string(), "3");
        assert!(F7::new(6).is_negative_repr());
    }

    #[test]
    fn field_spec_validation() {
        assert!(FieldSpec::new(0).is_ok());
        assert!(FieldSpec::new(32003).is_ok());
        assert!(FieldSpec::new(32004).is_err());
        assert!(FieldSpec::new(1).is_err());
        assert_eq!(FieldSpec::of::<Fp<3>>().characteristic, 3);
    }

    #[test]
    fn enumeration_of_small_fields() {
        assert_eq!(Fp::<3>::elements().unwrap().len(), 3);
        assert!(Rational::elements().is_none());
    }
}
