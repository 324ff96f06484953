//! Cyclotomic integers `Z[ζ]` for `ζ` a primitive `p^l`-th root of unity.
//!
//! Elements are coefficient vectors in the power basis `1, ζ, …, ζ^{d-1}`
//! with `d = (p-1)p^{l-1}`; that basis is integral, so membership in
//! `Z_(p)[ζ]` is a coefficientwise check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use super::{ambiguous, fmt_rational, is_p_local, is_prime, not_divisible, random_small_int, Ring, RingError};

/// Coefficients of `Φ_{p^l}(Z) = Σ_{j<p} Z^{j p^{l-1}}`, lowest degree first.
pub fn cyclotomic_polynomial(p: u64, l: u32) -> Vec<i64> {
    let m = p.pow(l - 1) as usize;
    let d = (p as usize - 1) * m;
    let mut c = vec![0; d + 1];
    for j in 0..p as usize {
        c[j * m] = 1;
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Shape {
    p: u64,
    l: u32,
    /// degree of Φ
    d: usize,
    /// p^{l-1}
    m: usize,
}

impl Shape {
    fn new(p: u64, l: u32) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::InvalidDescriptor(format!("{p} is not prime")));
        }
        if l == 0 {
            return Err(RingError::InvalidDescriptor("cyclotomic level must be at least 1".into()));
        }
        let m = p
            .checked_pow(l - 1)
            .filter(|m| *m <= 1 << 12)
            .ok_or_else(|| RingError::InvalidDescriptor(format!("p^l = {p}^{l} is too large")))? as usize;
        Ok(Self { p, l, d: (p as usize - 1) * m, m })
    }

    /// Folds `ζ^k` for `k ≥ d` back using `ζ^d = -Σ_{j<p-1} ζ^{jm}`.
    fn fold<T: Clone>(&self, v: &mut Vec<T>, is_zero: impl Fn(&T) -> bool, sub_from: impl Fn(&mut T, &T)) {
        for k in (self.d..v.len()).rev() {
            if is_zero(&v[k]) {
                continue;
            }
            let c = v[k].clone();
            for j in 0..(self.p as usize - 1) {
                sub_from(&mut v[k - self.d + j * self.m], &c);
            }
        }
        v.truncate(self.d);
    }

    fn fmt_coeffs(&self, c: &[String]) -> String {
        let parts: Vec<String> = c
            .iter()
            .enumerate()
            .filter(|(_, s)| s.as_str() != "0")
            .map(|(i, s)| match i {
                0 => s.clone(),
                1 => format!("{s}*z"),
                _ => format!("{s}*z^{i}"),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `Z[ζ]/(Φ_{p^l}, p^l)`, a finite local ring with `p^{l d}` elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicQuotient {
    shape: Shape,
    q: u64,
}

impl CyclotomicQuotient {
    pub fn new(p: u64, l: u32) -> Result<Self, RingError> {
        let shape = Shape::new(p, l)?;
        let q = p.pow(l);
        if q > u32::MAX as u64 {
            return Err(RingError::InvalidDescriptor("p^l is too large".into()));
        }
        Ok(Self { shape, q })
    }

    pub fn p(&self) -> u64 {
        self.shape.p
    }
    pub fn level(&self) -> u32 {
        self.shape.l
    }
    pub fn degree(&self) -> usize {
        self.shape.d
    }
    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn zeta(&self) -> Vec<u64> {
        let mut v = vec![0; self.shape.d];
        if self.shape.d == 1 {
            // Φ_2 = Z + 1, so ζ = -1
            v[0] = self.q - 1;
        } else {
            v[1] = 1;
        }
        v
    }

    /// Coefficientwise reduction of a p-local element of `Z_(p)[ζ]`.
    pub fn reduce_coeffs(&self, c: &[BigRational]) -> Result<Vec<u64>, RingError> {
        let modulus = BigInt::from(self.q);
        c.iter()
            .map(|x| {
                let den = x.denom().mod_floor(&modulus).to_u64().unwrap();
                let inv = mod_inverse(den, self.q).ok_or_else(|| RingError::NotDivisible {
                    ring: self.name(),
                    dividend: x.numer().to_string(),
                    divisor: x.denom().to_string(),
                })?;
                let num = x.numer().mod_floor(&modulus).to_u64().unwrap();
                Ok(((num as u128 * inv as u128) % self.q as u128) as u64)
            })
            .collect()
    }

    /// Canonical preimage with coefficients in `[0, p^l)`.
    pub fn lift_coeffs(&self, c: &[u64]) -> Vec<BigRational> {
        c.iter().map(|x| BigRational::from_integer(BigInt::from(*x))).collect()
    }

    fn lift_ring(&self) -> CyclotomicNumbers {
        CyclotomicNumbers { shape: self.shape, local: true }
    }

    /// Valuation at the prime `1 - ζ`, capped at that of `p^l`.
    pub fn pi_valuation(&self, a: &[u64]) -> u32 {
        let cap = self.shape.l * self.shape.d as u32;
        if a.iter().all(|x| *x == 0) {
            return cap;
        }
        self.lift_ring().pi_valuation(&self.lift_coeffs(a)).unwrap_or(cap).min(cap)
    }
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (a as i128, n as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(n as i128) as u64)
}

impl Ring for CyclotomicQuotient {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.shape.d]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.q).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| (self.q - x) % self.q).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let d = self.shape.d;
        let q = self.q as u128;
        let mut acc = vec![0u128; 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                acc[i + j] = (acc[i + j] + *x as u128 * *y as u128) % q;
            }
        }
        let mut v: Vec<u64> = acc.into_iter().map(|x| x as u64).collect();
        let modulus = self.q;
        self.shape.fold(&mut v, |x| *x == 0, |t, c| *t = (*t + modulus - c) % modulus);
        v
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|x| *x == 0)
    }
    fn from_int(&self, n: &BigInt) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = n.mod_floor(&BigInt::from(self.q)).to_u64().unwrap();
        v
    }
    fn exact_div(&self, a: &Vec<u64>, b: &Vec<u64>) -> Result<Vec<u64>, RingError> {
        let vb = self.pi_valuation(b);
        let va = self.pi_valuation(a);
        if va < vb {
            return Err(not_divisible(self, a, b));
        }
        if vb > 0 {
            // b is a zero divisor of a finite local ring
            return Err(ambiguous(self, a, b));
        }
        let lift = self.lift_ring();
        let inv = lift.exact_div(&lift.one(), &self.lift_coeffs(b))?;
        let inv = self.reduce_coeffs(&inv)?;
        Ok(self.mul(a, &inv))
    }
    fn name(&self) -> String {
        format!("Z[z]/(Phi_{}(z), {})", self.q, self.q)
    }
    fn fmt_elem(&self, a: &Vec<u64>) -> String {
        self.shape.fmt_coeffs(&a.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Vec<u64> {
        (0..self.shape.d).map(|_| rng.next_u64() % self.q).collect()
    }
    fn elements(&self) -> Result<Vec<Vec<u64>>, RingError> {
        let count = self.cardinality().ok_or_else(|| RingError::NotFinite(self.name()))?;
        let mut out = Vec::with_capacity(count as usize);
        let mut cur = self.zero();
        for _ in 0..count {
            out.push(cur.clone());
            for c in cur.iter_mut() {
                *c += 1;
                if *c < self.q {
                    break;
                }
                *c = 0;
            }
        }
        Ok(out)
    }
    fn cardinality(&self) -> Option<u64> {
        self.q.checked_pow(self.shape.d as u32).filter(|n| *n <= 1 << 26)
    }
    fn owns(&self, a: &Vec<u64>) -> bool {
        a.len() == self.shape.d && a.iter().all(|x| *x < self.q)
    }
}

/// `Z_(p)[ζ]` (when `local`) or the cyclotomic field `Q(ζ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumbers {
    shape: Shape,
    local: bool,
}

impl CyclotomicNumbers {
    pub fn lift(p: u64, l: u32) -> Result<Self, RingError> {
        Ok(Self { shape: Shape::new(p, l)?, local: true })
    }

    pub fn field(p: u64, l: u32) -> Result<Self, RingError> {
        Ok(Self { shape: Shape::new(p, l)?, local: false })
    }

    pub fn p(&self) -> u64 {
        self.shape.p
    }
    pub fn level(&self) -> u32 {
        self.shape.l
    }
    pub fn degree(&self) -> usize {
        self.shape.d
    }
    pub fn is_local(&self) -> bool {
        self.local
    }

    pub fn as_field(&self) -> Self {
        Self { shape: self.shape, local: false }
    }
    pub fn as_lift(&self) -> Self {
        Self { shape: self.shape, local: true }
    }

    pub fn zeta(&self) -> Vec<BigRational> {
        let mut v = self.zero();
        if self.shape.d == 1 {
            v[0] = -BigRational::one();
        } else {
            v[1] = BigRational::one();
        }
        v
    }

    pub fn from_coeffs(&self, c: &[i64]) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = c.iter().map(|x| BigRational::from_integer((*x).into())).collect();
        if v.len() < self.shape.d {
            v.resize(self.shape.d, BigRational::zero());
        }
        self.shape.fold(&mut v, |x| x.is_zero(), |t, c| *t -= c);
        v
    }

    /// Membership in `Z_(p)[ζ]`.
    pub fn is_integral(&self, a: &[BigRational]) -> bool {
        a.iter().all(|x| is_p_local(x, self.shape.p))
    }

    /// Valuation at `1 - ζ` of an element of `Z_(p)[ζ]`; `None` for zero.
    pub fn pi_valuation(&self, a: &[BigRational]) -> Option<u32> {
        if a.iter().all(|x| x.is_zero()) {
            return None;
        }
        let field = self.as_field();
        let one = field.one();
        let pi = field.sub(&one, &field.zeta());
        let pi_inv = field.exact_div(&one, &pi).expect("1 - ζ is nonzero");
        let mut cur = a.to_vec();
        let mut v = 0;
        loop {
            let next = field.mul(&cur, &pi_inv);
            if !self.is_integral(&next) {
                return Some(v);
            }
            cur = next;
            v += 1;
        }
    }

    /// Solves `x * b = a` in `Q(ζ)` by elimination on the multiplication matrix.
    fn solve(&self, a: &[BigRational], b: &Vec<BigRational>) -> Option<Vec<BigRational>> {
        let d = self.shape.d;
        let field = self.as_field();
        // column j is b * ζ^j
        let mut cols = Vec::with_capacity(d);
        let mut basis = field.one();
        let z = field.zeta();
        for _ in 0..d {
            cols.push(field.mul(b, &basis));
            basis = field.mul(&basis, &z);
        }
        let mut m: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(a[i].clone());
                row
            })
            .collect();
        for col in 0..d {
            let pivot = (col..d).find(|r| !m[*r][col].is_zero())?;
            m.swap(col, pivot);
            let inv = m[col][col].recip();
            for x in m[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=d {
                        let t = &m[col][c] * &f;
                        m[r][c] -= t;
                    }
                }
            }
        }
        Some(m.into_iter().map(|row| row[d].clone()).collect())
    }
}

impl Ring for CyclotomicNumbers {
    type Elem = Vec<BigRational>;

    fn zero(&self) -> Vec<BigRational> {
        vec![BigRational::zero(); self.shape.d]
    }
    fn one(&self) -> Vec<BigRational> {
        let mut v = self.zero();
        v[0] = BigRational::one();
        v
    }
    fn add(&self, a: &Vec<BigRational>, b: &Vec<BigRational>) -> Vec<BigRational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn add_assign(&self, a: &mut Vec<BigRational>, b: &Vec<BigRational>) {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
    }
    fn neg(&self, a: &Vec<BigRational>) -> Vec<BigRational> {
        a.iter().map(|x| -x).collect()
    }
    fn mul(&self, a: &Vec<BigRational>, b: &Vec<BigRational>) -> Vec<BigRational> {
        let d = self.shape.d;
        let mut acc = vec![BigRational::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    acc[i + j] += x * y;
                }
            }
        }
        self.shape.fold(&mut acc, |x| x.is_zero(), |t, c| *t -= c);
        acc
    }
    fn is_zero(&self, a: &Vec<BigRational>) -> bool {
        a.iter().all(|x| x.is_zero())
    }
    fn from_int(&self, n: &BigInt) -> Vec<BigRational> {
        let mut v = self.zero();
        v[0] = BigRational::from_integer(n.clone());
        v
    }
    fn from_rational(&self, q: &BigRational) -> Result<Vec<BigRational>, RingError> {
        if self.local && !is_p_local(q, self.shape.p) {
            return Err(RingError::NotDivisible {
                ring: self.name(),
                dividend: q.numer().to_string(),
                divisor: q.denom().to_string(),
            });
        }
        let mut v = self.zero();
        v[0] = q.clone();
        Ok(v)
    }
    fn exact_div(&self, a: &Vec<BigRational>, b: &Vec<BigRational>) -> Result<Vec<BigRational>, RingError> {
        if self.is_zero(b) {
            return Err(if self.is_zero(a) { ambiguous(self, a, b) } else { not_divisible(self, a, b) });
        }
        let q = self.solve(a, b).ok_or_else(|| not_divisible(self, a, b))?;
        if self.local && !self.is_integral(&q) {
            return Err(not_divisible(self, a, b));
        }
        Ok(q)
    }
    fn name(&self) -> String {
        let n = self.shape.p.pow(self.shape.l);
        if self.local {
            format!("Z_({})[z]/(Phi_{}(z))", self.shape.p, n)
        } else {
            format!("Q[z]/(Phi_{}(z))", n)
        }
    }
    fn fmt_elem(&self, a: &Vec<BigRational>) -> String {
        self.shape.fmt_coeffs(&a.iter().map(fmt_rational).collect::<Vec<_>>())
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Vec<BigRational> {
        (0..self.shape.d)
            .map(|_| {
                let num = random_small_int(rng, 9);
                let mut den = BigInt::from(rng.next_u64() % 4 + 1);
                if self.local {
                    while (&den % BigInt::from(self.shape.p)).is_zero() {
                        den += 1;
                    }
                }
                BigRational::new(num, den)
            })
            .collect()
    }
    fn owns(&self, a: &Vec<BigRational>) -> bool {
        a.len() == self.shape.d && (!self.local || self.is_integral(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::check_axioms;
    use rand::SeedableRng;

    fn gauss(ring: &CyclotomicNumbers, re: i64, im: i64) -> Vec<BigRational> {
        ring.from_coeffs(&[re, im])
    }

    #[test]
    fn phi_coefficients() {
        assert_eq!(cyclotomic_polynomial(2, 2), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(3, 1), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(2, 3), vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn gaussian_quotient_has_sixteen_elements() {
        let r = CyclotomicQuotient::new(2, 2).unwrap();
        let all = r.elements().unwrap();
        assert_eq!(all.len(), 16);
        assert_eq!(r.cardinality(), Some(16));
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 16);
        assert!(all.iter().all(|v| v.len() == 2 && v.iter().all(|c| *c < 4)));
    }

    #[test]
    fn i_squared_is_minus_one() {
        let r = CyclotomicQuotient::new(2, 2).unwrap();
        let i = r.zeta();
        assert_eq!(r.mul(&i, &i), vec![3, 0]);
        let lift = CyclotomicNumbers::lift(2, 2).unwrap();
        let z = lift.zeta();
        assert_eq!(lift.mul(&z, &z), lift.from_coeffs(&[-1]));
    }

    #[test]
    fn division_by_cube_of_one_minus_i() {
        let lift = CyclotomicNumbers::lift(2, 2).unwrap();
        let lambda = gauss(&lift, 1, -1);
        let cube = lift.pow(&lambda, 3);
        let q = lift.exact_div(&lift.from_i64(4), &cube).unwrap();
        assert_eq!(q, gauss(&lift, -1, 1));
        // independent check by exact Gaussian multiplication
        assert_eq!(lift.mul(&q, &cube), lift.from_i64(4));
        assert!(lift.exact_div(&lift.one(), &lambda).is_err());
    }

    #[test]
    fn quotient_division_agrees_with_enumeration() {
        let r = CyclotomicQuotient::new(2, 2).unwrap();
        let all = r.elements().unwrap();
        for a in &all {
            for b in &all {
                let sols: Vec<&Vec<u64>> = all.iter().filter(|q| r.mul(q, b) == *a).collect();
                match r.exact_div(a, b) {
                    Ok(q) => assert_eq!(sols, vec![&q]),
                    Err(RingError::AmbiguousQuotient { .. }) => assert!(sols.len() > 1, "{a:?}/{b:?}"),
                    Err(RingError::NotDivisible { .. }) => assert!(sols.is_empty(), "{a:?}/{b:?}"),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn reduce_lift_roundtrip() {
        let r = CyclotomicQuotient::new(2, 2).unwrap();
        let lift = CyclotomicNumbers::lift(2, 2).unwrap();
        assert_eq!(r.reduce_coeffs(&gauss(&lift, -1, 1)).unwrap(), vec![3, 1]);
        for x in r.elements().unwrap() {
            assert_eq!(r.reduce_coeffs(&r.lift_coeffs(&x)).unwrap(), x);
        }
    }

    #[test]
    fn valuations_at_one_minus_zeta() {
        let lift = CyclotomicNumbers::lift(2, 2).unwrap();
        assert_eq!(lift.pi_valuation(&lift.from_i64(2)), Some(2));
        assert_eq!(lift.pi_valuation(&lift.from_i64(4)), Some(4));
        assert_eq!(lift.pi_valuation(&gauss(&lift, 1, -1)), Some(1));
        let l3 = CyclotomicNumbers::lift(3, 1).unwrap();
        assert_eq!(l3.pi_valuation(&l3.from_i64(3)), Some(2));
    }

    #[test]
    fn axioms_hold_on_samples() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let quo = CyclotomicQuotient::new(2, 2).unwrap();
        let quo3 = CyclotomicQuotient::new(3, 2).unwrap();
        let lift = CyclotomicNumbers::lift(2, 3).unwrap();
        for _ in 0..200 {
            let s = |r: &CyclotomicQuotient, rng: &mut rand::rngs::StdRng| r.sample(rng);
            check_axioms(&quo, &s(&quo, &mut rng), &s(&quo, &mut rng), &s(&quo, &mut rng)).unwrap();
            check_axioms(&quo3, &s(&quo3, &mut rng), &s(&quo3, &mut rng), &s(&quo3, &mut rng)).unwrap();
            let (a, b, c) = (lift.sample(&mut rng), lift.sample(&mut rng), lift.sample(&mut rng));
            check_axioms(&lift, &a, &b, &c).unwrap();
        }
    }

    #[test]
    fn lift_is_p_torsion_free_on_samples() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let lift = CyclotomicNumbers::lift(3, 1).unwrap();
        for _ in 0..200 {
            let x = lift.sample(&mut rng);
            assert_eq!(lift.is_zero(&lift.scale_int(&x, &3.into())), lift.is_zero(&x));
        }
    }

    #[test]
    fn division_inverts_multiplication_by_nonzerodivisors() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let lift = CyclotomicNumbers::lift(2, 2).unwrap();
        for _ in 0..100 {
            let (x, y) = (lift.sample(&mut rng), lift.sample(&mut rng));
            if lift.is_zero(&y) {
                continue;
            }
            assert_eq!(lift.exact_div(&lift.mul(&x, &y), &y).unwrap(), x);
        }
    }
}
