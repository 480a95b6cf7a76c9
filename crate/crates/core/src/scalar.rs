//! Coefficient fields for the elimination engine: exact rationals, and prime
//! fields for the optional modular fast path.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub trait Scalar: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// `None` when the rational has no image (denominator divisible by p).
    fn from_rational(r: &BigRational) -> Option<Self>;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;

    /// `self -= a * b`.
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        self.add_assign(&a.mul(b).neg());
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn from_rational(r: &BigRational) -> Option<Self> {
        Some(r.clone())
    }

    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Self {
        self.recip()
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
}

/// Element of the prime field `Z/PZ`, `P < 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp<const P: u64>(u64);

/// `2^61 - 1`.
pub const PRIME_A: u64 = 2_305_843_009_213_693_951;
/// `2^62 - 57`.
pub const PRIME_B: u64 = 4_611_686_018_427_387_847;

impl<const P: u64> Fp<P> {
    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn reduce_big(n: &BigInt) -> u64 {
        let m = n.mod_floor(&BigInt::from(P));
        m.to_u64().expect("residue fits in u64")
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }

    fn one() -> Self {
        Fp(1)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn from_rational(r: &BigRational) -> Option<Self> {
        let den = Self::reduce_big(r.denom());
        if den == 0 {
            return None;
        }
        let num = Fp(Self::reduce_big(r.numer()));
        Some(num.mul(&Fp(den).inv()))
    }

    fn add_assign(&mut self, other: &Self) {
        let s = self.0 + other.0;
        self.0 = if s >= P { s - P } else { s };
    }

    fn mul(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 * other.0 as u128) % P as u128) as u64)
    }

    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }

    fn inv(&self) -> Self {
        debug_assert!(self.0 != 0, "inverse of zero");
        self.pow(P - 2)
    }
}
