//! Sparse multivariate polynomials over any [`Ring`], optionally Laurent.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rand::RngCore;
use rustc_hash::FxHashMap;

use super::{not_divisible, Ring, RingError};

pub const MAX_VARS: usize = 16;

/// Exponent vector; the derived order is lexicographic with variable 0 most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub [i16; MAX_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn var(i: usize, e: i16) -> Self {
        let mut m = Self::ONE;
        m.0[i] = e;
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        out
    }

    pub fn div(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a -= b;
        }
        out
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|e| *e >= 0)
    }

    pub fn total_degree(&self) -> i32 {
        self.0.iter().map(|e| *e as i32).sum()
    }

    pub fn meet(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a = (*a).min(*b);
        }
        out
    }
}

/// Terms sorted by increasing monomial, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<C> {
    terms: Vec<(Monomial, C)>,
}

impl<C> Polynomial<C> {
    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, C)> {
        self.terms.last()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms.binary_search_by(|(t, _)| t.cmp(m)).ok().map(|i| &self.terms[i].1)
    }

    /// Largest exponent of variable `v`.
    pub fn degree_in(&self, v: usize) -> i16 {
        self.terms.iter().map(|(m, _)| m.0[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> i32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    fn min_exponents(&self) -> Monomial {
        let mut it = self.terms.iter();
        let first = it.next().map(|(m, _)| *m).unwrap_or_default();
        it.fold(first, |acc, (m, _)| acc.meet(m))
    }
}

/// `R[vars]`, or the Laurent ring `R[vars^±]` when `laurent` is set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing<R> {
    base: R,
    vars: Vec<String>,
    laurent: bool,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R, vars: Vec<String>) -> Result<Self, RingError> {
        Self::build(base, vars, false)
    }

    pub fn laurent(base: R, vars: Vec<String>) -> Result<Self, RingError> {
        Self::build(base, vars, true)
    }

    fn build(base: R, vars: Vec<String>, laurent: bool) -> Result<Self, RingError> {
        if vars.is_empty() || vars.len() > MAX_VARS {
            return Err(RingError::InvalidDescriptor(format!(
                "polynomial rings take between 1 and {MAX_VARS} variables"
            )));
        }
        let mut sorted = vars.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != vars.len() {
            return Err(RingError::InvalidDescriptor("repeated variable name".into()));
        }
        Ok(Self { base, vars, laurent })
    }

    pub fn base(&self) -> &R {
        &self.base
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn is_laurent(&self) -> bool {
        self.laurent
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var(&self, i: usize) -> Polynomial<R::Elem> {
        assert!(i < self.vars.len(), "variable index out of range");
        self.term(Monomial::var(i, 1), self.base.one())
    }

    pub fn named(&self, name: &str) -> Polynomial<R::Elem> {
        self.var(self.var_index(name).unwrap_or_else(|| panic!("unknown variable {name}")))
    }

    pub fn constant(&self, c: R::Elem) -> Polynomial<R::Elem> {
        self.term(Monomial::ONE, c)
    }

    pub fn term(&self, m: Monomial, c: R::Elem) -> Polynomial<R::Elem> {
        if self.base.is_zero(&c) {
            Polynomial { terms: vec![] }
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from unsorted terms, merging repeats.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, R::Elem)>) -> Polynomial<R::Elem> {
        let mut acc: FxHashMap<Monomial, R::Elem> = FxHashMap::default();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => self.base.add_assign(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        self.collect(acc)
    }

    fn collect(&self, acc: FxHashMap<Monomial, R::Elem>) -> Polynomial<R::Elem> {
        let mut terms: Vec<(Monomial, R::Elem)> = acc.into_iter().filter(|(_, c)| !self.base.is_zero(c)).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Polynomial { terms }
    }

    pub fn map_coeffs(&self, p: &Polynomial<R::Elem>, f: impl Fn(&R::Elem) -> R::Elem) -> Polynomial<R::Elem> {
        Polynomial {
            terms: p
                .terms
                .iter()
                .map(|(m, c)| (*m, f(c)))
                .filter(|(_, c)| !self.base.is_zero(c))
                .collect(),
        }
    }

    pub fn scale(&self, p: &Polynomial<R::Elem>, c: &R::Elem) -> Polynomial<R::Elem> {
        self.map_coeffs(p, |x| self.base.mul(x, c))
    }

    pub fn shift(&self, p: &Polynomial<R::Elem>, by: &Monomial) -> Polynomial<R::Elem> {
        Polynomial {
            terms: p.terms.iter().map(|(m, c)| (m.mul(by), c.clone())).collect(),
        }
    }

    /// Evaluates `p` at `vals` in a target ring, mapping coefficients with `coeff`.
    pub fn eval<S: Ring>(
        &self,
        p: &Polynomial<R::Elem>,
        target: &S,
        vals: &[S::Elem],
        coeff: impl Fn(&R::Elem) -> S::Elem,
    ) -> Result<S::Elem, RingError> {
        let mut powers: FxHashMap<(usize, i16), S::Elem> = FxHashMap::default();
        let mut out = target.zero();
        'terms: for (m, c) in &p.terms {
            let mut t = coeff(c);
            for (v, e) in m.0.iter().enumerate().take(self.vars.len()) {
                if *e == 0 {
                    continue;
                }
                if target.is_zero(&vals[v]) && *e > 0 {
                    continue 'terms;
                }
                let pw = match powers.get(&(v, *e)) {
                    Some(x) => x.clone(),
                    None => {
                        let x = if *e > 0 {
                            target.pow(&vals[v], *e as u64)
                        } else {
                            target.exact_div(&target.one(), &target.pow(&vals[v], (-*e) as u64))?
                        };
                        powers.insert((v, *e), x.clone());
                        x
                    }
                };
                t = target.mul(&t, &pw);
            }
            target.add_assign(&mut out, &t);
        }
        Ok(out)
    }

    /// Substitutes polynomials of another ring for every variable.
    pub fn substitute<S: Ring>(
        &self,
        p: &Polynomial<R::Elem>,
        target: &PolyRing<S>,
        vals: &[Polynomial<S::Elem>],
        coeff: impl Fn(&R::Elem) -> S::Elem,
    ) -> Result<Polynomial<S::Elem>, RingError> {
        self.eval(p, target, vals, |c| target.constant(coeff(c)))
    }

    fn divide_nonnegative(
        &self,
        a: &Polynomial<R::Elem>,
        b: &Polynomial<R::Elem>,
    ) -> Result<Polynomial<R::Elem>, RingError> {
        let (lm, lc) = b.leading().expect("nonzero divisor").clone();
        let mut rem = a.clone();
        let mut quot: Vec<(Monomial, R::Elem)> = Vec::new();
        while let Some((m, c)) = rem.leading().cloned() {
            let qm = m.div(&lm);
            if !qm.is_nonnegative() {
                return Err(not_divisible(self, a, b));
            }
            let qc = self.base.exact_div(&c, &lc).map_err(|_| not_divisible(self, a, b))?;
            let t = self.term(qm, qc.clone());
            rem = self.sub(&rem, &self.mul(&t, b));
            quot.push((qm, qc));
        }
        Ok(self.from_terms(quot))
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Polynomial<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Polynomial { terms: vec![] }
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut terms = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            let (ma, ca) = &a.terms[i];
            let (mb, cb) = &b.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Less => {
                    terms.push((*ma, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    terms.push((*mb, cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = self.base.add(ca, cb);
                    if !self.base.is_zero(&c) {
                        terms.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&a.terms[i..]);
        terms.extend_from_slice(&b.terms[j..]);
        Polynomial { terms }
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Polynomial {
            terms: a.terms.iter().map(|(m, c)| (*m, self.base.neg(c))).collect(),
        }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.terms.is_empty() || b.terms.is_empty() {
            return self.zero();
        }
        if a.terms.len() == 1 || b.terms.len() == 1 {
            let (single, other) = if a.terms.len() == 1 { (a, b) } else { (b, a) };
            let (sm, sc) = &single.terms[0];
            return Polynomial {
                terms: other
                    .terms
                    .iter()
                    .map(|(m, c)| (m.mul(sm), self.base.mul(c, sc)))
                    .filter(|(_, c)| !self.base.is_zero(c))
                    .collect(),
            };
        }
        let mut acc: FxHashMap<Monomial, R::Elem> =
            FxHashMap::with_capacity_and_hasher(a.terms.len() * b.terms.len() / 2, Default::default());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let prod = self.base.mul(ca, cb);
                match acc.get_mut(&ma.mul(mb)) {
                    Some(v) => self.base.add_assign(v, &prod),
                    None => {
                        acc.insert(ma.mul(mb), prod);
                    }
                }
            }
        }
        self.collect(acc)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.terms.is_empty()
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        self.constant(self.base.from_int(n))
    }
    fn from_rational(&self, q: &num_rational::BigRational) -> Result<Self::Elem, RingError> {
        Ok(self.constant(self.base.from_rational(q)?))
    }
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, RingError> {
        if b.terms.is_empty() {
            return Err(if a.terms.is_empty() {
                super::ambiguous(self, a, b)
            } else {
                not_divisible(self, a, b)
            });
        }
        if a.terms.is_empty() {
            return Ok(self.zero());
        }
        if b.terms.len() == 1 {
            let (bm, bc) = &b.terms[0];
            let mut terms = Vec::with_capacity(a.terms.len());
            for (m, c) in &a.terms {
                let qm = m.div(bm);
                if !self.laurent && !qm.is_nonnegative() {
                    return Err(not_divisible(self, a, b));
                }
                terms.push((qm, self.base.exact_div(c, bc).map_err(|_| not_divisible(self, a, b))?));
            }
            return Ok(Polynomial { terms });
        }
        if self.laurent {
            let (sa, sb) = (a.min_exponents(), b.min_exponents());
            let a0 = self.shift(a, &Monomial::ONE.div(&sa));
            let b0 = self.shift(b, &Monomial::ONE.div(&sb));
            let q = self.divide_nonnegative(&a0, &b0)?;
            return Ok(self.shift(&q, &sa.div(&sb)));
        }
        self.divide_nonnegative(a, b)
    }
    fn name(&self) -> String {
        let vars = if self.laurent {
            self.vars.iter().map(|v| format!("{v}^±1")).collect::<Vec<_>>().join(",")
        } else {
            self.vars.join(",")
        };
        format!("{}[{}]", self.base.name(), vars)
    }
    fn fmt_elem(&self, a: &Self::Elem) -> String {
        if a.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in a.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            let coeff = self.base.fmt_elem(c);
            let needs_parens = coeff.contains(" + ");
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e != 0)
                .map(|(i, e)| if *e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
                .collect();
            if mono.is_empty() {
                out.push_str(&coeff);
            } else {
                if needs_parens {
                    let _ = write!(out, "({coeff})*");
                } else if coeff != "1" {
                    let _ = write!(out, "{coeff}*");
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem {
        let nterms = rng.next_u64() % 4;
        let low: i64 = if self.laurent { -1 } else { 0 };
        let terms: Vec<(Monomial, R::Elem)> = (0..nterms)
            .map(|_| {
                let mut m = Monomial::ONE;
                for e in m.0.iter_mut().take(self.vars.len()) {
                    *e = (low + (rng.next_u64() % 3) as i64) as i16;
                }
                (m, self.base.sample(rng))
            })
            .collect();
        self.from_terms(terms)
    }
    fn owns(&self, a: &Self::Elem) -> bool {
        a.terms.iter().all(|(m, c)| {
            m.0[self.vars.len()..].iter().all(|e| *e == 0)
                && (self.laurent || m.is_nonnegative())
                && !self.base.is_zero(c)
                && self.base.owns(c)
        })
    }
}
