//! Artin–Hasse exponentials and their two-parameter and Witt-vector deformations.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::exactring::{is_p_local, PLocal, PolyRing, Polynomial, Rationals, Ring, RingError};
use crate::wittcore::{Witt, WittVector};

use super::series::{Series, SeriesRing};
use super::SeriesError;

/// Largest `K` with `p^K ≤ order`.
pub fn top_index(p: u64, order: usize) -> usize {
    let mut k = 0;
    let mut q = p as usize;
    while q <= order {
        k += 1;
        q *= p as usize;
    }
    k
}

fn check_integral_rational(p: u64, s: &SeriesRing<Rationals>, e: &Series<BigRational>) -> Result<(), SeriesError> {
    for d in 0..=s.order() {
        let c = &e.component(d)[0];
        if !is_p_local(c, p) {
            return Err(SeriesError::IntegralityViolation { degree: d, coefficient: c.to_string() });
        }
    }
    Ok(())
}

/// `exp(Σ_{r≥0} X^{p^r}/p^r)` over `Z_(p)`.
pub fn artin_hasse(p: u64, order: usize) -> Result<(SeriesRing<PLocal>, Series<BigRational>), SeriesError> {
    let q = SeriesRing::new(Rationals, &["X"], order);
    let mut arg = q.zero();
    let mut pr = 1usize;
    while pr <= order {
        let c = BigRational::new(BigInt::one(), BigInt::from(pr));
        arg = q.add(&arg, &q.monomial([pr as u16, 0, 0], c));
        pr *= p as usize;
    }
    let e = q.exp(&arg)?;
    check_integral_rational(p, &q, &e)?;
    let local = SeriesRing::new(PLocal::new(p)?, &["X"], order);
    let out = q.map_into(&local, &e, |c| local.ring().element(c.clone()))?;
    Ok((local, out))
}

/// `E_p(U, Λ; X)` with coefficients in `Z_(p)[U, Λ]`.
#[derive(Debug, Clone)]
pub struct TwoParam {
    pub p: u64,
    /// Laurent ring `Q[U^±, L^±]` in which the series was computed.
    pub ring: PolyRing<Rationals>,
    pub series: SeriesRing<PolyRing<Rationals>>,
    pub coeffs: Series<Polynomial<BigRational>>,
}

impl TwoParam {
    /// Coefficient of `X^n`.
    pub fn coeff(&self, n: usize) -> &Polynomial<BigRational> {
        &self.coeffs.component(n)[0]
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }
}

fn compute_two_param(p: u64, order: usize) -> Result<TwoParam, SeriesError> {
    let ring = PolyRing::laurent(Rationals, vec!["U".into(), "L".into()])?;
    let s = SeriesRing::new(ring.clone(), &["X"], order);
    let (u, lam) = (ring.var(0), ring.var(1));
    let ratio = ring.exact_div(&u, &lam)?;
    let linear = s.add(&s.one(), &s.monomial([1, 0, 0], lam.clone()));
    let mut e = s.pow_scalar(&linear, &ratio)?;
    let mut prev = ratio.clone();
    for k in 1..=top_index(p, order) {
        let q = p.pow(k as u32);
        let cur = ring.pow(&prev, p);
        let num = ring.sub(&cur, &prev);
        let exponent = ring.exact_div(&num, &ring.from_int(&BigInt::from(q)))?;
        let factor = s.add(&s.one(), &s.monomial([q as u16, 0, 0], ring.pow(&lam, q)));
        e = s.mul(&e, &s.pow_scalar(&factor, &exponent)?);
        prev = cur;
    }
    for d in 0..=order {
        let c = &e.component(d)[0];
        let bad = c.terms().iter().any(|(m, q)| !m.is_nonnegative() || !is_p_local(q, p));
        if bad {
            return Err(SeriesError::IntegralityViolation { degree: d, coefficient: ring.fmt_elem(c) });
        }
    }
    Ok(TwoParam { p, ring, series: s, coeffs: e })
}

/// Cached universal series; recomputed when a deeper order is requested.
pub fn ep_two_param(p: u64, order: usize) -> Result<Arc<TwoParam>, SeriesError> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<TwoParam>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache lock").get(&p) {
        if t.order() >= order {
            return Ok(t.clone());
        }
    }
    let t = Arc::new(compute_two_param(p, order)?);
    cache.lock().expect("cache lock").insert(p, t.clone());
    Ok(t)
}

struct Powers<E> {
    u: Vec<E>,
    mu: Vec<E>,
}

impl<E: Clone> Powers<E> {
    fn new<R: Ring<Elem = E>>(ring: &R, u: &E, mu: &E, top: usize) -> Self {
        let grow = |x: &E| {
            let mut v = vec![ring.one()];
            for i in 1..=top {
                let next = ring.mul(&v[i - 1], x);
                v.push(next);
            }
            v
        };
        Self { u: grow(u), mu: grow(mu) }
    }
}

fn eval_coeff<R: Ring>(
    ring: &R,
    poly: &Polynomial<BigRational>,
    pw: &Powers<R::Elem>,
) -> Result<R::Elem, RingError> {
    let mut acc = ring.zero();
    for (m, c) in poly.terms() {
        let (eu, el) = (m.0[0] as usize, m.0[1] as usize);
        if ring.is_zero(&pw.u[eu]) || ring.is_zero(&pw.mu[el]) {
            continue;
        }
        let t = ring.mul(&ring.mul(&ring.from_rational(c)?, &pw.u[eu]), &pw.mu[el]);
        ring.add_assign(&mut acc, &t);
    }
    Ok(acc)
}

/// `E_p(u, μ; X^m)` in any `Z_(p)`-algebra, from the universal coefficients.
pub fn ep_scalar<R: Ring>(
    s: &SeriesRing<R>,
    p: u64,
    u: &R::Elem,
    mu: &R::Elem,
    m: usize,
) -> Result<Series<R::Elem>, SeriesError> {
    assert_eq!(s.nvars(), 1);
    let ring = s.ring();
    if ring.is_zero(u) {
        return Ok(s.one());
    }
    let top = s.order() / m;
    let universal = ep_two_param(p, top.max(1))?;
    let pw = Powers::new(ring, u, mu, top);
    let mut c = vec![ring.zero(); s.order() + 1];
    for n in 0..=top {
        c[n * m] = eval_coeff(ring, universal.coeff(n), &pw)?;
    }
    Ok(s.from_coeffs(c))
}

/// Product form `∏_k E_p(v_k, λ^{p^k}; X^{p^k})`, integral over any `Z_(p)`-algebra.
pub fn ep_product<R: Ring>(
    s: &SeriesRing<R>,
    p: u64,
    v: &[R::Elem],
    lambda: &R::Elem,
) -> Result<Series<R::Elem>, SeriesError> {
    ep_product_stretched(s, p, v, lambda, 1)
}

/// Product form evaluated at `X^m`.
pub fn ep_product_stretched<R: Ring>(
    s: &SeriesRing<R>,
    p: u64,
    v: &[R::Elem],
    lambda: &R::Elem,
    m: usize,
) -> Result<Series<R::Elem>, SeriesError> {
    let ring = s.ring();
    let mut out = s.one();
    let mut mu = lambda.clone();
    let mut q = 1usize;
    for vk in v {
        if q * m > s.order() {
            break;
        }
        out = s.mul(&out, &ep_scalar(s, p, vk, &mu, q * m)?);
        mu = ring.pow(&mu, p);
        q *= p as usize;
    }
    Ok(out)
}

/// `v` padded with zeros (or truncated) to length `n`.
pub fn padded<E: Clone>(zero: E, v: &[E], n: usize) -> Vec<E> {
    (0..n).map(|i| v.get(i).cloned().unwrap_or_else(|| zero.clone())).collect()
}

/// `1 + c·X^m` in a one-variable ring.
fn one_plus<R: Ring>(s: &SeriesRing<R>, c: R::Elem, m: usize) -> Series<R::Elem> {
    s.add(&s.one(), &s.monomial([m as u16, 0, 0], c))
}

fn divide<R: Ring>(ring: &R, a: &R::Elem, b: &R::Elem) -> Result<R::Elem, SeriesError> {
    Ok(ring.exact_div(a, b)?)
}

/// Exponent form `(1+λX)^{v₀/λ} ∏_{k≥1} (1+λ^{p^k}X^{p^k})^{Φ_{k−1}(F^{(λ)}v)/(p^kλ^{p^k})}`.
pub fn ep_exponent<R: Ring>(
    s: &SeriesRing<R>,
    p: u64,
    v: &[R::Elem],
    lambda: &R::Elem,
) -> Result<Series<R::Elem>, SeriesError> {
    let ring = s.ring();
    let k_top = top_index(p, s.order());
    let w = Witt::new(ring.clone(), p);
    let x = WittVector::new(p, padded(ring.zero(), v, k_top + 1));
    let ghost = w.ghost(&w.f_lambda(&x, lambda)?);
    let mut out = s.pow_scalar(&one_plus(s, lambda.clone(), 1), &divide(ring, &x.coords[0], lambda)?)?;
    for k in 1..=k_top {
        let q = p.pow(k as u32);
        let mu = ring.pow(lambda, q);
        let denom = ring.mul(&ring.from_int(&BigInt::from(q)), &mu);
        let exponent = divide(ring, &ghost[k - 1], &denom)?;
        out = s.mul(&out, &s.pow_scalar(&one_plus(s, mu, q as usize), &exponent)?);
    }
    Ok(out)
}

/// Both forms of `E_p(v, λ; X)`, compared; returns the common value.
pub fn ep_witt<R: Ring>(
    s: &SeriesRing<R>,
    p: u64,
    v: &[R::Elem],
    lambda: &R::Elem,
) -> Result<Series<R::Elem>, SeriesError> {
    let product = ep_product(s, p, v, lambda)?;
    let exponent = ep_exponent(s, p, v, lambda)?;
    match s.first_mismatch(&product, &exponent) {
        None => Ok(product),
        Some((degree, e)) => Err(SeriesError::FormMismatch { degree, monomial: s.fmt_monomial(&e) }),
    }
}

/// `X + Y + λXY` in a two-variable ring.
pub fn group_law<R: Ring>(s: &SeriesRing<R>, lambda: &R::Elem, a: &Series<R::Elem>, b: &Series<R::Elem>) -> Series<R::Elem> {
    s.add(&s.add(a, b), &s.scale(&s.mul(a, b), lambda))
}

/// `F_p(v, λ; X, Y) = ∏_{k≥1} [(1+λ^{p^k}X^{p^k})(1+λ^{p^k}Y^{p^k})/(1+λ^{p^k}(X∘Y)^{p^k})]^{Φ_{k−1}(v)/(p^kλ^{p^k})}`.
pub fn fp_cocycle<R: Ring>(
    s: &SeriesRing<R>,
    p: u64,
    v: &[R::Elem],
    lambda: &R::Elem,
) -> Result<Series<R::Elem>, SeriesError> {
    assert_eq!(s.nvars(), 2);
    let ring = s.ring();
    let k_top = top_index(p, s.order());
    let w = Witt::new(ring.clone(), p);
    let ghost = w.ghost(&WittVector::new(p, padded(ring.zero(), v, k_top)));
    let (x, y) = (s.var(0), s.var(1));
    let z = group_law(s, lambda, &x, &y);
    let mut out = s.one();
    for k in 1..=k_top {
        if ring.is_zero(&ghost[k - 1]) {
            continue;
        }
        let q = p.pow(k as u32);
        let mu = ring.pow(lambda, q);
        let lift = |t: &Series<R::Elem>| s.add(&s.one(), &s.scale(&s.pow(t, q), &mu));
        let base = s.div(&s.mul(&lift(&x), &lift(&y)), &lift(&z))?;
        let denom = ring.mul(&ring.from_int(&BigInt::from(q)), &mu);
        let exponent = divide(ring, &ghost[k - 1], &denom)?;
        out = s.mul(&out, &s.pow_scalar(&base, &exponent)?);
    }
    Ok(out)
}

/// Embeds a one-variable series as a function of `arg` in a multivariable ring.
pub fn substitute_one<R: Ring>(
    multi: &SeriesRing<R>,
    single: &SeriesRing<R>,
    f: &Series<R::Elem>,
    arg: &Series<R::Elem>,
) -> Result<Series<R::Elem>, SeriesError> {
    multi.compose(single, f, std::slice::from_ref(arg))
}

/// Both sides of `F_p(F^{(λ)}v, λ; X, Y) = E_p(v,λ;X)E_p(v,λ;Y)/E_p(v,λ;X+Y+λXY)`.
pub fn cocycle_coboundary_sides<R: Ring>(
    s2: &SeriesRing<R>,
    p: u64,
    v: &[R::Elem],
    lambda: &R::Elem,
) -> Result<(Series<R::Elem>, Series<R::Elem>), SeriesError> {
    let ring = s2.ring();
    let s1 = SeriesRing::new(ring.clone(), &["T"], s2.order());
    let k_top = top_index(p, s2.order());
    let w = Witt::new(ring.clone(), p);
    let x = WittVector::new(p, padded(ring.zero(), v, k_top + 1));
    let fx = w.f_lambda(&x, lambda)?;
    let lhs = fp_cocycle(s2, p, &fx.coords, lambda)?;
    let e = ep_witt(&s1, p, &x.coords, lambda)?;
    let (a, b) = (s2.var(0), s2.var(1));
    let ex = substitute_one(s2, &s1, &e, &a)?;
    let ey = substitute_one(s2, &s1, &e, &b)?;
    let ez = substitute_one(s2, &s1, &e, &group_law(s2, lambda, &a, &b))?;
    let rhs = s2.div(&s2.mul(&ex, &ey), &ez)?;
    Ok((lhs, rhs))
}

/// Outcome of the symmetric 2-cocycle test for a two-variable series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    pub order: usize,
    pub symmetric: bool,
    pub cocycle: bool,
    /// First differing monomial of the cocycle identity, if any.
    pub mismatch: Option<String>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.symmetric && self.cocycle
    }
}

/// Checks `F(X,Y) = F(Y,X)` and `F(Y,Z)·F(X, Y∘Z) = F(X,Y)·F(X∘Y, Z)`.
pub fn cocycle_conditions<R: Ring>(
    s2: &SeriesRing<R>,
    f: &Series<R::Elem>,
    lambda: &R::Elem,
) -> Result<CocycleReport, SeriesError> {
    let ring = s2.ring();
    if !ring.is_one(s2.constant_term(f)) {
        return Err(SeriesError::BadConstantTerm(ring.fmt_elem(s2.constant_term(f))));
    }
    let swapped = s2.compose(s2, f, &[s2.var(1), s2.var(0)])?;
    let symmetric = swapped == *f;
    let s3 = SeriesRing::new(ring.clone(), &["X", "Y", "Z"], s2.order());
    let (x, y, z) = (s3.var(0), s3.var(1), s3.var(2));
    let yz = group_law(&s3, lambda, &y, &z);
    let xy = group_law(&s3, lambda, &x, &y);
    let at = |a: &Series<R::Elem>, b: &Series<R::Elem>| s3.compose(s2, f, &[a.clone(), b.clone()]);
    let left = s3.mul(&at(&y, &z)?, &at(&x, &yz)?);
    let right = s3.mul(&at(&x, &y)?, &at(&xy, &z)?);
    let mismatch = s3.first_mismatch(&left, &right).map(|(_, e)| s3.fmt_monomial(&e));
    Ok(CocycleReport { order: s2.order(), symmetric, cocycle: mismatch.is_none(), mismatch })
}
