//! Truncated power series in one to three variables.
//!
//! A series of order `N` keeps every monomial of total degree `≤ N`, stored
//! as dense homogeneous components.

use num_bigint::BigInt;
use crate::exactring::{Ring, RingError};

use super::SeriesError;

pub type Exps = [u16; 3];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Series<E> {
    comps: Vec<Vec<E>>,
}

impl<E> Series<E> {
    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: usize) -> &[E] {
        &self.comps[d]
    }

    pub fn order(&self) -> usize {
        self.comps.len() - 1
    }
}

/// Arithmetic context: coefficient ring, variable names and truncation order.
#[derive(Debug, Clone)]
pub struct SeriesRing<R: Ring> {
    ring: R,
    names: Vec<String>,
    order: usize,
    exps: Vec<Vec<Exps>>,
}

fn comp_len(nvars: usize, d: usize) -> usize {
    match nvars {
        1 => 1,
        2 => d + 1,
        _ => (d + 1) * (d + 2) / 2,
    }
}

impl<R: Ring> SeriesRing<R> {
    pub fn new(ring: R, names: &[&str], order: usize) -> Self {
        assert!((1..=3).contains(&names.len()), "series take one to three variables");
        let nvars = names.len();
        let exps = (0..=order)
            .map(|d| {
                let mut v = vec![[0u16; 3]; comp_len(nvars, d)];
                match nvars {
                    1 => v[0] = [d as u16, 0, 0],
                    2 => {
                        for (e1, slot) in v.iter_mut().enumerate() {
                            *slot = [(d - e1) as u16, e1 as u16, 0];
                        }
                    }
                    _ => {
                        for r in 0..=d {
                            for e2 in 0..=r {
                                v[r * (r + 1) / 2 + e2] = [(d - r) as u16, (r - e2) as u16, e2 as u16];
                            }
                        }
                    }
                }
                v
            })
            .collect();
        Self { ring, names: names.iter().map(|s| s.to_string()).collect(), order, exps }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn nvars(&self) -> usize {
        self.names.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Same variables and coefficients at another order.
    pub fn with_order(&self, order: usize) -> Self {
        let names: Vec<&str> = self.names.iter().map(|s| s.as_str()).collect();
        Self::new(self.ring.clone(), &names, order)
    }

    fn index(&self, e: &Exps) -> usize {
        match self.nvars() {
            1 => 0,
            2 => e[1] as usize,
            _ => {
                let r = (e[1] + e[2]) as usize;
                r * (r + 1) / 2 + e[2] as usize
            }
        }
    }

    pub fn exponents(&self, d: usize) -> &[Exps] {
        &self.exps[d]
    }

    pub fn zero(&self) -> Series<R::Elem> {
        Series {
            comps: (0..=self.order).map(|d| vec![self.ring.zero(); comp_len(self.nvars(), d)]).collect(),
        }
    }

    pub fn constant(&self, c: R::Elem) -> Series<R::Elem> {
        let mut s = self.zero();
        s.comps[0][0] = c;
        s
    }

    pub fn one(&self) -> Series<R::Elem> {
        self.constant(self.ring.one())
    }

    /// `c · X^e`, dropped when the degree exceeds the order.
    pub fn monomial(&self, e: Exps, c: R::Elem) -> Series<R::Elem> {
        let mut s = self.zero();
        let d = e.iter().map(|x| *x as usize).sum::<usize>();
        if d <= self.order {
            let i = self.index(&e);
            s.comps[d][i] = c;
        }
        s
    }

    pub fn var(&self, i: usize) -> Series<R::Elem> {
        let mut e = [0u16; 3];
        e[i] = 1;
        self.monomial(e, self.ring.one())
    }

    pub fn coeff<'a>(&self, s: &'a Series<R::Elem>, e: Exps) -> &'a R::Elem {
        let d = e.iter().map(|x| *x as usize).sum::<usize>();
        &s.comps[d][self.index(&e)]
    }

    /// Coefficients of a one-variable series, lowest degree first.
    pub fn from_coeffs(&self, c: Vec<R::Elem>) -> Series<R::Elem> {
        assert_eq!(self.nvars(), 1);
        let mut s = self.zero();
        for (d, x) in c.into_iter().enumerate().take(self.order + 1) {
            s.comps[d][0] = x;
        }
        s
    }

    pub fn coeffs(&self, s: &Series<R::Elem>) -> Vec<R::Elem> {
        assert_eq!(self.nvars(), 1);
        s.comps.iter().map(|c| c[0].clone()).collect()
    }

    pub fn constant_term<'a>(&self, s: &'a Series<R::Elem>) -> &'a R::Elem {
        &s.comps[0][0]
    }

    pub fn map(&self, s: &Series<R::Elem>, f: impl Fn(&R::Elem) -> R::Elem) -> Series<R::Elem> {
        Series { comps: s.comps.iter().map(|c| c.iter().map(&f).collect()).collect() }
    }

    /// Coefficientwise transfer into another coefficient ring with the same shape.
    pub fn map_into<S: Ring>(
        &self,
        target: &SeriesRing<S>,
        s: &Series<R::Elem>,
        f: impl Fn(&R::Elem) -> Result<S::Elem, RingError>,
    ) -> Result<Series<S::Elem>, RingError> {
        assert_eq!(self.nvars(), target.nvars());
        let mut out = target.zero();
        for d in 0..=self.order.min(target.order) {
            for (i, c) in s.comps[d].iter().enumerate() {
                out.comps[d][i] = f(c)?;
            }
        }
        Ok(out)
    }

    pub fn add(&self, a: &Series<R::Elem>, b: &Series<R::Elem>) -> Series<R::Elem> {
        Series {
            comps: a
                .comps
                .iter()
                .zip(&b.comps)
                .map(|(x, y)| x.iter().zip(y).map(|(u, v)| self.ring.add(u, v)).collect())
                .collect(),
        }
    }

    pub fn neg(&self, a: &Series<R::Elem>) -> Series<R::Elem> {
        self.map(a, |c| self.ring.neg(c))
    }

    pub fn sub(&self, a: &Series<R::Elem>, b: &Series<R::Elem>) -> Series<R::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Series<R::Elem>, c: &R::Elem) -> Series<R::Elem> {
        self.map(a, |x| self.ring.mul(x, c))
    }

    pub fn is_zero(&self, a: &Series<R::Elem>) -> bool {
        a.comps.iter().all(|c| c.iter().all(|x| self.ring.is_zero(x)))
    }

    /// Adds the product of homogeneous parts `a` (degree `da`) and `b` (degree `db`) into `out`.
    fn hmul_into(&self, out: &mut [R::Elem], da: usize, a: &[R::Elem], db: usize, b: &[R::Elem]) {
        if self.nvars() == 1 {
            if !self.ring.is_zero(&a[0]) && !self.ring.is_zero(&b[0]) {
                let t = self.ring.mul(&a[0], &b[0]);
                self.ring.add_assign(&mut out[0], &t);
            }
            return;
        }
        for (i, x) in a.iter().enumerate() {
            if self.ring.is_zero(x) {
                continue;
            }
            let ea = self.exps[da][i];
            for (j, y) in b.iter().enumerate() {
                if self.ring.is_zero(y) {
                    continue;
                }
                let eb = self.exps[db][j];
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                let t = self.ring.mul(x, y);
                self.ring.add_assign(&mut out[self.index(&e)], &t);
            }
        }
    }

    fn comp_is_zero(&self, c: &[R::Elem]) -> bool {
        c.iter().all(|x| self.ring.is_zero(x))
    }

    pub fn mul(&self, a: &Series<R::Elem>, b: &Series<R::Elem>) -> Series<R::Elem> {
        let mut out = self.zero();
        for da in 0..=self.order {
            if self.comp_is_zero(&a.comps[da]) {
                continue;
            }
            for db in 0..=(self.order - da) {
                if self.comp_is_zero(&b.comps[db]) {
                    continue;
                }
                self.hmul_into(&mut out.comps[da + db], da, &a.comps[da], db, &b.comps[db]);
            }
        }
        out
    }

    pub fn pow(&self, a: &Series<R::Elem>, mut e: u64) -> Series<R::Elem> {
        let mut acc = self.one();
        let mut base = a.clone();
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

    fn div_int(&self, x: &R::Elem, n: usize) -> Result<R::Elem, SeriesError> {
        self.ring
            .exact_div(x, &self.ring.from_int(&BigInt::from(n)))
            .map_err(|_| SeriesError::NonRationalCoefficients(format!("{} does not invert {n}", self.ring.name())))
    }

    fn scale_int(&self, c: &[R::Elem], k: usize) -> Vec<R::Elem> {
        let k = self.ring.from_int(&BigInt::from(k));
        c.iter().map(|x| self.ring.mul(x, &k)).collect()
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn reciprocal(&self, a: &Series<R::Elem>) -> Result<Series<R::Elem>, SeriesError> {
        let inv0 = self
            .ring
            .exact_div(&self.ring.one(), &a.comps[0][0])
            .map_err(|_| SeriesError::BadConstantTerm(self.ring.fmt_elem(&a.comps[0][0])))?;
        let mut b = self.zero();
        b.comps[0][0] = inv0.clone();
        for d in 1..=self.order {
            let mut acc = vec![self.ring.zero(); comp_len(self.nvars(), d)];
            for k in 1..=d {
                if self.comp_is_zero(&a.comps[k]) {
                    continue;
                }
                self.hmul_into(&mut acc, k, &a.comps[k], d - k, &b.comps[d - k]);
            }
            let minus_inv = self.ring.neg(&inv0);
            b.comps[d] = acc.iter().map(|x| self.ring.mul(x, &minus_inv)).collect();
        }
        Ok(b)
    }

    pub fn div(&self, a: &Series<R::Elem>, b: &Series<R::Elem>) -> Result<Series<R::Elem>, SeriesError> {
        Ok(self.mul(a, &self.reciprocal(b)?))
    }

    /// `exp(a)` for `a` without constant term, via `d·B_d = Σ k·A_k·B_{d−k}`.
    pub fn exp(&self, a: &Series<R::Elem>) -> Result<Series<R::Elem>, SeriesError> {
        if !self.ring.is_zero(&a.comps[0][0]) {
            return Err(SeriesError::BadConstantTerm(self.ring.fmt_elem(&a.comps[0][0])));
        }
        let weighted: Vec<Vec<R::Elem>> = (0..=self.order).map(|k| self.scale_int(&a.comps[k], k)).collect();
        let mut b = self.one();
        for d in 1..=self.order {
            let mut acc = vec![self.ring.zero(); comp_len(self.nvars(), d)];
            for k in 1..=d {
                if self.comp_is_zero(&weighted[k]) {
                    continue;
                }
                self.hmul_into(&mut acc, k, &weighted[k], d - k, &b.comps[d - k]);
            }
            b.comps[d] = acc.iter().map(|x| self.div_int(x, d)).collect::<Result<_, _>>()?;
        }
        Ok(b)
    }

    /// `log(a)` for `a` with constant term 1, via `d·A_d = d·B_d − Σ_{k<d} k·A_k·B_{d−k}`.
    pub fn log(&self, b: &Series<R::Elem>) -> Result<Series<R::Elem>, SeriesError> {
        if !self.ring.is_one(&b.comps[0][0]) {
            return Err(SeriesError::BadConstantTerm(self.ring.fmt_elem(&b.comps[0][0])));
        }
        let mut a = self.zero();
        let mut weighted: Vec<Vec<R::Elem>> = vec![vec![self.ring.zero()]];
        for d in 1..=self.order {
            let mut acc = vec![self.ring.zero(); comp_len(self.nvars(), d)];
            for k in 1..d {
                if self.comp_is_zero(&weighted[k]) {
                    continue;
                }
                self.hmul_into(&mut acc, k, &weighted[k], d - k, &b.comps[d - k]);
            }
            let db = self.scale_int(&b.comps[d], d);
            let num: Vec<R::Elem> = db.iter().zip(&acc).map(|(x, y)| self.ring.sub(x, y)).collect();
            weighted.push(num.clone());
            a.comps[d] = num.iter().map(|x| self.div_int(x, d)).collect::<Result<_, _>>()?;
        }
        Ok(a)
    }

    /// `a^t := exp(t · log a)` for a coefficient-ring scalar `t`.
    pub fn pow_scalar(&self, a: &Series<R::Elem>, t: &R::Elem) -> Result<Series<R::Elem>, SeriesError> {
        if self.ring.is_zero(t) {
            return Ok(self.one());
        }
        self.exp(&self.scale(&self.log(a)?, t))
    }

    /// `f(g_1, …, g_k)` where `f` lives in `outer` and each `g_i` has zero constant term.
    pub fn compose<S: Ring<Elem = R::Elem>>(
        &self,
        outer: &SeriesRing<S>,
        f: &Series<R::Elem>,
        inner: &[Series<R::Elem>],
    ) -> Result<Series<R::Elem>, SeriesError> {
        assert_eq!(outer.nvars(), inner.len());
        for g in inner {
            if !self.ring.is_zero(&g.comps[0][0]) {
                return Err(SeriesError::BadConstantTerm(self.ring.fmt_elem(&g.comps[0][0])));
            }
        }
        // each g_i has order ≥ 1, so only powers up to self.order matter
        let top = outer.order.min(self.order);
        let powers: Vec<Vec<Series<R::Elem>>> = inner
            .iter()
            .map(|g| {
                let mut v = vec![self.one()];
                for k in 1..=top {
                    let next = self.mul(&v[k - 1], g);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = self.zero();
        for d in 0..=top {
            for (i, c) in f.comps[d].iter().enumerate() {
                if self.ring.is_zero(c) {
                    continue;
                }
                let e = outer.exps[d][i];
                let mut term = self.constant(c.clone());
                for (v, pw) in powers.iter().enumerate() {
                    if e[v] > 0 {
                        term = self.mul(&term, &pw[e[v] as usize]);
                    }
                }
                out = self.add(&out, &term);
            }
        }
        Ok(out)
    }

    /// Replaces every variable `X_i` by `X_i^m` (one-variable fast path included).
    pub fn inflate(&self, a: &Series<R::Elem>, m: usize) -> Series<R::Elem> {
        let mut out = self.zero();
        for d in 0..=self.order / m.max(1) {
            for (i, c) in a.comps[d].iter().enumerate() {
                let e = self.exps[d][i];
                let scaled = [e[0] * m as u16, e[1] * m as u16, e[2] * m as u16];
                let idx = self.index(&scaled);
                out.comps[d * m][idx] = c.clone();
            }
        }
        out
    }

    /// `(d, exponents)` of the first differing coefficient in degree order.
    pub fn first_mismatch(&self, a: &Series<R::Elem>, b: &Series<R::Elem>) -> Option<(usize, Exps)> {
        for d in 0..=self.order {
            for i in 0..a.comps[d].len() {
                if a.comps[d][i] != b.comps[d][i] {
                    return Some((d, self.exps[d][i]));
                }
            }
        }
        None
    }

    pub fn fmt_monomial(&self, e: &Exps) -> String {
        let parts: Vec<String> = (0..self.nvars())
            .filter(|v| e[*v] > 0)
            .map(|v| if e[v] == 1 { self.names[v].clone() } else { format!("{}^{}", self.names[v], e[v]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Canonical text: nonzero terms by degree, then by the component index.
    pub fn format(&self, a: &Series<R::Elem>) -> String {
        let mut terms = Vec::new();
        for d in 0..=self.order {
            for (i, c) in a.comps[d].iter().enumerate() {
                if self.ring.is_zero(c) {
                    continue;
                }
                let coeff = self.ring.fmt_elem(c);
                let coeff = if coeff.contains(' ') { format!("({coeff})") } else { coeff };
                let mono = self.fmt_monomial(&self.exps[d][i]);
                terms.push(match (coeff.as_str(), mono.as_str()) {
                    (_, "1") => coeff.clone(),
                    ("1", _) => mono,
                    _ => format!("{coeff}*{mono}"),
                });
            }
        }
        if terms.is_empty() {
            "0".into()
        } else {
            format!("{} + O({})", terms.join(" + "), self.order + 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{Integers, Rationals};
    use num_rational::BigRational;
    use rand::{RngCore, SeedableRng};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn log_of_one_plus_x() {
        let s = SeriesRing::new(Rationals, &["X"], 4);
        let one_plus_x = s.add(&s.one(), &s.var(0));
        let l = s.log(&one_plus_x).unwrap();
        assert_eq!(s.coeffs(&l), vec![q(0, 1), q(1, 1), q(-1, 2), q(1, 3), q(-1, 4)]);
        assert_eq!(s.format(&l), "X + -1/2*X^2 + 1/3*X^3 + -1/4*X^4 + O(5)");
    }

    #[test]
    fn exp_log_and_reciprocal_invert() {
        let s = SeriesRing::new(Rationals, &["X"], 10);
        let a = s.add(&s.one(), &s.var(0));
        assert_eq!(s.exp(&s.log(&a).unwrap()).unwrap(), a);
        assert_eq!(s.mul(&s.reciprocal(&a).unwrap(), &a), s.one());
        assert!(matches!(s.log(&s.var(0)), Err(SeriesError::BadConstantTerm(_))));
        assert!(matches!(s.exp(&a), Err(SeriesError::BadConstantTerm(_))));
        let z = SeriesRing::new(Integers, &["X"], 3);
        assert!(matches!(
            z.log(&z.add(&z.one(), &z.var(0))),
            Err(SeriesError::NonRationalCoefficients(_))
        ));
    }

    #[test]
    fn scalar_power_matches_binomial() {
        let s = SeriesRing::new(Rationals, &["X"], 6);
        let a = s.add(&s.one(), &s.var(0));
        let t = q(1, 3);
        let got = s.pow_scalar(&a, &t).unwrap();
        let mut c = q(1, 1);
        for (k, coeff) in s.coeffs(&got).iter().enumerate() {
            assert_eq!(*coeff, c);
            c = c * (&t - q(k as i64, 1)) / q(k as i64 + 1, 1);
        }
        assert_eq!(s.pow_scalar(&a, &q(3, 1)).unwrap(), s.pow(&a, 3));
    }

    fn naive_mul(s: &SeriesRing<Rationals>, a: &Series<BigRational>, b: &Series<BigRational>) -> Series<BigRational> {
        let mut out = s.zero();
        for da in 0..=s.order() {
            for ea in s.exponents(da).to_vec() {
                for db in 0..=s.order() - da {
                    for eb in s.exponents(db).to_vec() {
                        let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                        let t = s.coeff(a, ea) * s.coeff(b, eb);
                        let m = s.monomial(e, t);
                        out = s.add(&out, &m);
                    }
                }
            }
        }
        out
    }

    fn random_sparse(s: &SeriesRing<Rationals>, rng: &mut impl RngCore) -> Series<BigRational> {
        let mut a = s.zero();
        for _ in 0..4 {
            let d = (rng.next_u64() % (s.order() as u64 + 1)) as usize;
            let choices = s.exponents(d).to_vec();
            let e = choices[(rng.next_u64() % choices.len() as u64) as usize];
            let c = q((rng.next_u64() % 9) as i64 - 4, (rng.next_u64() % 3 + 1) as i64);
            a = s.add(&a, &s.monomial(e, c));
        }
        a
    }

    #[test]
    fn products_and_composition_agree_with_naive_oracles() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(17);
        for names in [&["X"][..], &["X", "Y"][..], &["X", "Y", "Z"][..]] {
            let s = SeriesRing::new(Rationals, names, 5);
            for _ in 0..100 {
                let (a, b) = (random_sparse(&s, &mut rng), random_sparse(&s, &mut rng));
                assert_eq!(s.mul(&a, &b), naive_mul(&s, &a, &b));
            }
        }
        // composition against direct expansion: (1 + X)^2 at X = Y + Y^2
        let s1 = SeriesRing::new(Rationals, &["X"], 4);
        let f = s1.pow(&s1.add(&s1.one(), &s1.var(0)), 2);
        let g = s1.add(&s1.var(0), &s1.pow(&s1.var(0), 2));
        let direct = s1.pow(&s1.add(&s1.one(), &g), 2);
        assert_eq!(s1.compose(&s1, &f, &[g]).unwrap(), direct);
        for _ in 0..100 {
            let f = random_sparse(&s1, &mut rng);
            let mut g = random_sparse(&s1, &mut rng);
            g.comps[0][0] = q(0, 1);
            let mut naive = s1.zero();
            for (k, c) in s1.coeffs(&f).iter().enumerate() {
                naive = s1.add(&naive, &s1.scale(&s1.pow(&g, k as u64), c));
            }
            assert_eq!(s1.compose(&s1, &f, &[g]).unwrap(), naive);
        }
    }

    #[test]
    fn two_variable_exp_is_multiplicative() {
        let s = SeriesRing::new(Rationals, &["X", "Y"], 6);
        let (x, y) = (s.var(0), s.var(1));
        let ex = s.exp(&x).unwrap();
        let ey = s.exp(&y).unwrap();
        assert_eq!(s.mul(&ex, &ey), s.exp(&s.add(&x, &y)).unwrap());
        assert_eq!(s.inflate(&ex, 2), s.exp(&s.mul(&x, &x)).unwrap());
    }
}
