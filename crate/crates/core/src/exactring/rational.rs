use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;

use super::{ambiguous, fmt_rational, is_p_local, is_prime, not_divisible, random_small_int, Ring, RingError};

/// The rational integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn add_assign(&self, a: &mut BigInt, b: &BigInt) {
        *a += b;
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn exact_div(&self, a: &BigInt, b: &BigInt) -> Result<BigInt, RingError> {
        if b.is_zero() {
            return Err(if a.is_zero() { ambiguous(self, a, b) } else { not_divisible(self, a, b) });
        }
        let (q, r) = a.div_rem(b);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(not_divisible(self, a, b))
        }
    }
    fn name(&self) -> String {
        "Z".into()
    }
    fn fmt_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigInt {
        random_small_int(rng, 50)
    }
}

/// Rationals whose reduced denominator is prime to `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PLocal {
    p: u64,
}

impl PLocal {
    pub fn new(p: u64) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::InvalidDescriptor(format!("{p} is not prime")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Admits `q` only when its denominator is prime to `p`.
    pub fn element(&self, q: BigRational) -> Result<BigRational, RingError> {
        if is_p_local(&q, self.p) {
            Ok(q)
        } else {
            Err(RingError::NotDivisible {
                ring: self.name(),
                dividend: q.numer().to_string(),
                divisor: q.denom().to_string(),
            })
        }
    }
}

impl Ring for PLocal {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn add_assign(&self, a: &mut BigRational, b: &BigRational) {
        *a += b;
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational, RingError> {
        self.element(q.clone())
    }
    fn exact_div(&self, a: &BigRational, b: &BigRational) -> Result<BigRational, RingError> {
        if b.is_zero() {
            return Err(if a.is_zero() { ambiguous(self, a, b) } else { not_divisible(self, a, b) });
        }
        let q = a / b;
        if is_p_local(&q, self.p) {
            Ok(q)
        } else {
            Err(not_divisible(self, a, b))
        }
    }
    fn name(&self) -> String {
        format!("Z_({})", self.p)
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        fmt_rational(a)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigRational {
        let num = random_small_int(rng, 30);
        let mut den = BigInt::from(rng.next_u64() % 12 + 1);
        while (&den % BigInt::from(self.p)).is_zero() {
            den += 1;
        }
        BigRational::new(num, den)
    }
    fn owns(&self, a: &BigRational) -> bool {
        is_p_local(a, self.p)
    }
}

/// The rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn add_assign(&self, a: &mut BigRational, b: &BigRational) {
        *a += b;
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational, RingError> {
        Ok(q.clone())
    }
    fn exact_div(&self, a: &BigRational, b: &BigRational) -> Result<BigRational, RingError> {
        if b.is_zero() {
            return Err(if a.is_zero() { ambiguous(self, a, b) } else { not_divisible(self, a, b) });
        }
        Ok(a / b)
    }
    fn name(&self) -> String {
        "Q".into()
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        fmt_rational(a)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigRational {
        let num = random_small_int(rng, 30);
        let den = BigInt::from(rng.next_u64() % 12 + 1);
        BigRational::new(num, den)
    }
}
