use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::RngCore;

use super::{ambiguous, not_divisible, Ring, RingError};

/// The residue ring Z/N, elements stored in `[0, N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modular {
    n: u64,
}

impl Modular {
    pub fn new(n: u64) -> Result<Self, RingError> {
        if n < 2 {
            return Err(RingError::InvalidDescriptor(format!("modulus {n} must be at least 2")));
        }
        if n > u32::MAX as u64 {
            return Err(RingError::InvalidDescriptor(format!("modulus {n} is too large")));
        }
        Ok(Self { n })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn inverse(&self, a: u64) -> Option<u64> {
        let (g, x) = ext_gcd(a as i128, self.n as i128);
        if g != 1 {
            return None;
        }
        Some(x.rem_euclid(self.n as i128) as u64)
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0, s0)
}

impl Ring for Modular {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.n
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.n - a) % self.n
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.n as u128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.n)).to_u64().expect("residue fits")
    }
    fn exact_div(&self, a: &u64, b: &u64) -> Result<u64, RingError> {
        let g = b.gcd(&self.n);
        if a % g != 0 {
            return Err(not_divisible(self, a, b));
        }
        if g != 1 {
            return Err(ambiguous(self, a, b));
        }
        let inv = self.inverse(*b).expect("unit");
        Ok(self.mul(a, &inv))
    }
    fn name(&self) -> String {
        format!("Z/{}", self.n)
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        rng.next_u64() % self.n
    }
    fn elements(&self) -> Result<Vec<u64>, RingError> {
        Ok((0..self.n).collect())
    }
    fn cardinality(&self) -> Option<u64> {
        Some(self.n)
    }
    fn owns(&self, a: &u64) -> bool {
        *a < self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn enumerates_residues() {
        assert_eq!(Modular::new(2).unwrap().elements().unwrap(), vec![0, 1]);
        assert_eq!(Modular::new(9).unwrap().elements().unwrap().len(), 9);
        assert!(Modular::new(1).is_err());
    }

    #[test]
    fn division_cases_against_enumeration() {
        let r = Modular::new(9).unwrap();
        assert!(matches!(r.exact_div(&3, &3), Err(RingError::AmbiguousQuotient { .. })));
        for a in 0..9u64 {
            for b in 0..9u64 {
                let sols: Vec<u64> = (0..9).filter(|q| r.mul(q, &b) == a).collect();
                match r.exact_div(&a, &b) {
                    Ok(q) => assert_eq!(sols, vec![q]),
                    Err(RingError::AmbiguousQuotient { .. }) => assert!(sols.len() > 1),
                    Err(RingError::NotDivisible { .. }) => assert!(sols.is_empty()),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn rational_image_by_search() {
        let r = Modular::new(4).unwrap();
        let third = BigRational::new(1.into(), 3.into());
        let got = r.from_rational(&third).unwrap();
        let oracle: Vec<u64> = (0..4).filter(|q| (q * 3) % 4 == 1).collect();
        assert_eq!(vec![got], oracle);
        assert_eq!(got, 3);
        assert!(r.from_rational(&BigRational::new(1.into(), 2.into())).is_err());
    }
}
