//! Exact commutative rings.
//!
//! Every algorithm in the crate is generic over [`Ring`], which keeps the
//! ring description (the "handle") separate from its elements. Concrete
//! rings live in the submodules; [`AnyRing`] assembles them from a
//! declarative [`RingDescriptor`].

mod any;
mod cyclotomic;
mod modular;
mod poly;
mod rational;

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::RngCore;

pub use any::{lift, make_ring, reduce, AnyRing, RingDescriptor, RingElement};
pub use cyclotomic::{cyclotomic_polynomial, CyclotomicNumbers, CyclotomicQuotient};
pub use modular::Modular;
pub use poly::{Monomial, PolyRing, Polynomial, MAX_VARS};
pub use rational::{Integers, PLocal, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("{dividend} is not divisible by {divisor} in {ring}")]
    NotDivisible {
        ring: String,
        dividend: String,
        divisor: String,
    },
    #[error("{dividend} / {divisor} has more than one quotient in {ring}")]
    AmbiguousQuotient {
        ring: String,
        dividend: String,
        divisor: String,
    },
    #[error("{0} is not finite")]
    NotFinite(String),
    #[error("no lift declared between {from} and {to}")]
    NoLiftDeclared { from: String, to: String },
}

/// A commutative ring with unit and exact arithmetic.
///
/// Elements are plain values in canonical form, so `==` on elements is
/// ring equality.
pub trait Ring: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_int(&self, n: &BigInt) -> Self::Elem;

    /// The unique `q` with `q * b == a`.
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, RingError>;

    fn name(&self) -> String;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    /// A random element, used by the property checks.
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    /// Image of a rational number; fails when the denominator is not a unit.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, RingError> {
        let num = self.from_int(q.numer());
        if q.denom().is_one() {
            return Ok(num);
        }
        self.exact_div(&num, &self.from_int(q.denom()))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn scale_int(&self, a: &Self::Elem, n: &BigInt) -> Self::Elem {
        self.mul(&self.from_int(n), a)
    }

    /// All elements of a finite ring in a fixed order.
    fn elements(&self) -> Result<Vec<Self::Elem>, RingError> {
        Err(RingError::NotFinite(self.name()))
    }

    fn cardinality(&self) -> Option<u64> {
        None
    }

    /// Whether `a` is a well-formed element of this ring.
    fn owns(&self, _a: &Self::Elem) -> bool {
        true
    }
}

pub(crate) fn not_divisible<R: Ring>(ring: &R, a: &R::Elem, b: &R::Elem) -> RingError {
    RingError::NotDivisible {
        ring: ring.name(),
        dividend: ring.fmt_elem(a),
        divisor: ring.fmt_elem(b),
    }
}

pub(crate) fn ambiguous<R: Ring>(ring: &R, a: &R::Elem, b: &R::Elem) -> RingError {
    RingError::AmbiguousQuotient {
        ring: ring.name(),
        dividend: ring.fmt_elem(a),
        divisor: ring.fmt_elem(b),
    }
}

/// Primality by trial division; descriptor parameters are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    Some(v)
}

/// True when the rational lies in the localization at `p`.
pub fn is_p_local(q: &BigRational, p: u64) -> bool {
    !(q.denom() % BigInt::from(p)).is_zero()
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn random_small_int(rng: &mut dyn RngCore, bound: i64) -> BigInt {
    let span = (2 * bound + 1) as u64;
    BigInt::from((rng.next_u64() % span) as i64 - bound)
}

/// Checks a single ring axiom instance; used by the property suites.
pub fn check_axioms<R: Ring>(ring: &R, a: &R::Elem, b: &R::Elem, c: &R::Elem) -> Result<(), String> {
    let ab = ring.add(a, b);
    if ab != ring.add(b, a) {
        return Err("addition is not commutative".into());
    }
    if ring.add(&ab, c) != ring.add(a, &ring.add(b, c)) {
        return Err("addition is not associative".into());
    }
    let m = ring.mul(a, b);
    if m != ring.mul(b, a) {
        return Err("multiplication is not commutative".into());
    }
    if ring.mul(&m, c) != ring.mul(a, &ring.mul(b, c)) {
        return Err("multiplication is not associative".into());
    }
    if ring.mul(a, &ring.add(b, c)) != ring.add(&m, &ring.mul(a, c)) {
        return Err("distributivity fails".into());
    }
    if ring.add(a, &ring.zero()) != *a || ring.mul(a, &ring.one()) != *a {
        return Err("units fail".into());
    }
    if !ring.is_zero(&ring.add(a, &ring.neg(a))) {
        return Err("negation fails".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(97));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(0));
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(48), 2), Some(4));
        assert_eq!(valuation(&BigInt::from(-27), 3), Some(3));
        assert_eq!(valuation(&BigInt::from(0), 3), None);
    }
}
