use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::exactring::{Integers, Monomial, PolyRing, Polynomial, Ring};

use super::{Witt, WittError, WittVector};

/// `p^l·[λ]` over `Z[λ]` together with its closed-form coefficients.
#[derive(Debug, Clone)]
pub struct PowerTeichmuller {
    pub ring: PolyRing<Integers>,
    pub b: WittVector<Polynomial<BigInt>>,
    /// `alpha[k]`, with `alpha[0] = 1`
    pub alpha: Vec<BigRational>,
    /// `b[k] = coeff[k]·λ^{p^k}`
    pub coeff: Vec<BigInt>,
}

fn p_power(p: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        Pow::pow(&base, e as u32)
    } else {
        Pow::pow(&base, (-e) as u32).recip()
    }
}

/// The rational sequence `α_k` with `Σ_i p^{i + (l−i)p^{k−i}} α_i^{p^{k−i}} = p^l`.
pub fn alpha_sequence(p: u64, l: u32, n: usize) -> Vec<BigRational> {
    let l = l as i64;
    let mut alpha: Vec<BigRational> = vec![BigRational::one()];
    for k in 1..n {
        let pk = p.pow(k as u32) as i64;
        let mut a = BigRational::one() - p_power(p, (pk - 1) * l);
        for (i, ai) in alpha.iter().enumerate().skip(1) {
            let q = p.pow((k - i) as u32);
            a -= p_power(p, (q as i64 - 1) * (l - i as i64)) * Pow::pow(ai, q as u32);
        }
        alpha.push(a);
    }
    alpha
}

/// Computes `p^l[λ]` of length `n` by repeated Witt doubling and checks it
/// against `b_k = p^{l−k} λ^{p^k} α_k`, then checks `b_k ≡ λ^{p^l}` (k = l)
/// and `b_k ≡ 0` (k ≠ l) modulo `p`.
pub fn p_power_teichmuller(p: u64, l: u32, n: usize) -> Result<PowerTeichmuller, WittError> {
    let ring = PolyRing::new(Integers, vec!["L".into()])?;
    let w = Witt::new(ring.clone(), p);
    let lambda = ring.var(0);
    let b = w.scalar_mul(p.pow(l), &w.teichmuller(&lambda, n))?;
    let alpha = alpha_sequence(p, l, n);
    let mut coeff = Vec::with_capacity(n);
    for (k, ak) in alpha.iter().enumerate() {
        let c = p_power(p, l as i64 - k as i64) * ak;
        let mono = Monomial::var(0, p.pow(k as u32) as i16);
        let closed_text = format!("{}*L^{}", c, p.pow(k as u32));
        let expected = if c.is_integer() { Some(ring.term(mono, c.to_integer())) } else { None };
        if expected.as_ref() != Some(&b.coords[k]) {
            return Err(WittError::MismatchWithClosedForm {
                index: k,
                closed: closed_text,
                scalar: ring.fmt_elem(&b.coords[k]),
            });
        }
        let c = c.to_integer();
        let target = if k == l as usize { BigInt::one() } else { BigInt::zero() };
        if !(&c - target).is_multiple_of(&BigInt::from(p)) {
            return Err(WittError::CongruenceFailure { index: k });
        }
        coeff.push(c);
    }
    Ok(PowerTeichmuller { ring, b, alpha, coeff })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn alpha_values() {
        let a = alpha_sequence(2, 1, 4);
        assert_eq!(a[1], q(-1));
        assert_eq!(a[2], q(-8));
        assert_eq!(alpha_sequence(2, 2, 2)[1], q(-3));
    }

    #[test]
    fn closed_form_matches_scalar_multiple() {
        let t = p_power_teichmuller(2, 1, 4).unwrap();
        assert_eq!(t.coeff[..2], [BigInt::from(2), BigInt::from(-1)]);
        let t2 = p_power_teichmuller(2, 2, 4).unwrap();
        assert_eq!(t2.coeff[1], BigInt::from(-6));
        p_power_teichmuller(3, 1, 3).unwrap();
    }
}
