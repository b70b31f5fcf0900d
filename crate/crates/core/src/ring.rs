//! Coefficient rings for truncated series.
//!
//! A ring is a runtime value (the modulus of `Modular` is only known at run
//! time), so arithmetic goes through the ring rather than through operator
//! traits on the element type.

use std::fmt;
use std::marker::PhantomData;

use num_bigint::{BigInt, ToBigInt};
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive};

/// Arithmetic in a commutative ring with identity.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// `acc += a * b`
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, &self.mul(a, b));
    }

    /// `acc -= a * b`
    fn mul_sub_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.sub(acc, &self.mul(a, b));
    }

    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Multiplicative inverse, if `a` is a unit.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Canonical integer representative (the value itself for exact rings,
    /// the residue in `[0, m)` for modular rings).
    fn to_bigint(&self, a: &Self::Elem) -> BigInt;

    /// Residue of an element modulo `m`, or `None` when the ring does not
    /// determine it (a modular ring whose modulus is not a multiple of `m`).
    fn residue(&self, a: &Self::Elem, m: u64) -> Option<u64>;

    /// The kind descriptor used in reports and comparisons across types.
    fn kind(&self) -> CoefficientRing;
}

/// Ring descriptor independent of the element type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientRing {
    ExactInteger,
    Modular { modulus: u64 },
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::ExactInteger => f.write_str("Z"),
            CoefficientRing::Modular { modulus } => write!(f, "Z/{modulus}Z"),
        }
    }
}

/// Exact integers backed by the integer type `T`.
///
/// `Exact<BigInt>` never overflows; fixed-width instantiations are useful in
/// tests and for small orders where the caller knows the coefficient bound.
pub struct Exact<T>(PhantomData<fn() -> T>);

impl<T> Exact<T> {
    pub const fn new() -> Self {
        Exact(PhantomData)
    }
}

impl<T> Default for Exact<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for Exact<T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for Exact<T> {}

impl<T> PartialEq for Exact<T> {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl<T> Eq for Exact<T> {}

impl<T> fmt::Debug for Exact<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Exact<{}>", std::any::type_name::<T>())
    }
}

impl<T> fmt::Display for Exact<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Z")
    }
}

/// Bound collecting what an exact coefficient type needs.
pub trait ExactInteger:
    Integer + Signed + Clone + FromPrimitive + ToBigInt + fmt::Debug + Send + Sync + 'static
{
    fn from_big(v: &BigInt) -> Self;

    fn mul_add_assign(acc: &mut Self, a: &Self, b: &Self) {
        *acc = acc.clone() + a.clone() * b.clone();
    }

    fn mul_sub_assign(acc: &mut Self, a: &Self, b: &Self) {
        *acc = acc.clone() - a.clone() * b.clone();
    }
}

impl ExactInteger for BigInt {
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }

    fn mul_add_assign(acc: &mut Self, a: &Self, b: &Self) {
        *acc += a * b;
    }

    fn mul_sub_assign(acc: &mut Self, a: &Self, b: &Self) {
        *acc -= a * b;
    }
}

macro_rules! impl_exact_primitive {
    ($($t:ty),*) => {$(
        impl ExactInteger for $t {
            fn from_big(v: &BigInt) -> Self {
                v.to_i128()
                    .and_then(<$t>::from_i128)
                    .expect("integer literal out of range for fixed-width exact ring")
            }
        }
    )*};
}

impl_exact_primitive!(i32, i64, i128);

impl<T: ExactInteger> Ring for Exact<T> {
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }

    fn one(&self) -> T {
        T::one()
    }

    fn from_i64(&self, v: i64) -> T {
        T::from_i64(v).expect("value out of range for exact ring")
    }

    fn from_bigint(&self, v: &BigInt) -> T {
        T::from_big(v)
    }

    fn add(&self, a: &T, b: &T) -> T {
        a.clone() + b.clone()
    }

    fn neg(&self, a: &T) -> T {
        -a.clone()
    }

    fn mul(&self, a: &T, b: &T) -> T {
        a.clone() * b.clone()
    }

    fn sub(&self, a: &T, b: &T) -> T {
        a.clone() - b.clone()
    }

    fn mul_add_assign(&self, acc: &mut T, a: &T, b: &T) {
        T::mul_add_assign(acc, a, b)
    }

    fn mul_sub_assign(&self, acc: &mut T, a: &T, b: &T) {
        T::mul_sub_assign(acc, a, b)
    }

    fn is_zero(&self, a: &T) -> bool {
        a.is_zero()
    }

    fn unit_inverse(&self, a: &T) -> Option<T> {
        if a.is_one() || (-a.clone()).is_one() {
            Some(a.clone())
        } else {
            None
        }
    }

    fn to_bigint(&self, a: &T) -> BigInt {
        a.to_bigint().expect("integer types always convert")
    }

    fn residue(&self, a: &T, m: u64) -> Option<u64> {
        let r = self.to_bigint(a).mod_floor(&BigInt::from(m));
        r.to_u64()
    }

    fn kind(&self) -> CoefficientRing {
        CoefficientRing::ExactInteger
    }
}

/// Integers modulo `m`, elements stored reduced into `[0, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modular {
    modulus: u64,
}

impl Modular {
    /// Panics unless `2 <= modulus < 2^63`.
    pub fn new(modulus: u64) -> Self {
        Self::try_new(modulus).expect("modulus must satisfy 2 <= m < 2^63")
    }

    pub fn try_new(modulus: u64) -> Option<Self> {
        (2..(1u64 << 63)).contains(&modulus).then_some(Modular { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl fmt::Display for Modular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}Z", self.modulus)
    }
}

impl Ring for Modular {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.modulus as i128) as u64
    }

    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.modulus))
            .to_u64()
            .expect("residue fits in u64")
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }

    #[inline]
    fn mul_add_assign(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = ((*acc as u128 + *a as u128 * *b as u128) % self.modulus as u128) as u64;
    }

    #[inline]
    fn mul_sub_assign(&self, acc: &mut u64, a: &u64, b: &u64) {
        let p = self.mul(a, b);
        *acc = self.sub(acc, &p);
    }

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn unit_inverse(&self, a: &u64) -> Option<u64> {
        let m = self.modulus as i128;
        let e = (*a as i128).extended_gcd(&m);
        e.gcd.is_one().then(|| e.x.rem_euclid(m) as u64)
    }

    fn to_bigint(&self, a: &u64) -> BigInt {
        BigInt::from(*a)
    }

    fn residue(&self, a: &u64, m: u64) -> Option<u64> {
        self.modulus.is_multiple_of(m).then_some(a % m)
    }

    fn kind(&self) -> CoefficientRing {
        CoefficientRing::Modular {
            modulus: self.modulus,
        }
    }
}
