use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{
    is_p_local, CyclotomicNumbers, CyclotomicQuotient, Integers, Modular, PLocal, PolyRing, Polynomial, Rationals,
    Ring, RingError,
};

/// Declarative description of a ring in the supported tower.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "ring", rename_all = "kebab-case")]
pub enum RingDescriptor {
    Integers,
    PLocalRationals { p: u64 },
    Modular { n: u64 },
    /// `Z[ζ]/(Φ_{p^l}, p^l)`
    CyclotomicQuotient { p: u64, l: u32 },
    /// `Z_(p)[ζ_{p^l}]`
    CyclotomicLift { p: u64, l: u32 },
    PolynomialExtension { base: Box<RingDescriptor>, vars: Vec<String> },
    FractionField { base: Box<RingDescriptor> },
}

/// Runtime handle for any ring built from a [`RingDescriptor`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AnyRing {
    Int(Integers),
    PLocal(PLocal),
    Rat(Rationals),
    Mod(Modular),
    CycQ(CyclotomicQuotient),
    Cyc(CyclotomicNumbers),
    Poly(Arc<PolyRing<AnyRing>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingElement {
    Int(BigInt),
    Rat(BigRational),
    Mod(u64),
    CycQ(Vec<u64>),
    Cyc(Vec<BigRational>),
    Poly(Polynomial<RingElement>),
}

pub fn make_ring(desc: &RingDescriptor) -> Result<AnyRing, RingError> {
    Ok(match desc {
        RingDescriptor::Integers => AnyRing::Int(Integers),
        RingDescriptor::PLocalRationals { p } => AnyRing::PLocal(PLocal::new(*p)?),
        RingDescriptor::Modular { n } => AnyRing::Mod(Modular::new(*n)?),
        RingDescriptor::CyclotomicQuotient { p, l } => AnyRing::CycQ(CyclotomicQuotient::new(*p, *l)?),
        RingDescriptor::CyclotomicLift { p, l } => AnyRing::Cyc(CyclotomicNumbers::lift(*p, *l)?),
        RingDescriptor::PolynomialExtension { base, vars } => {
            AnyRing::Poly(Arc::new(PolyRing::new(make_ring(base)?, vars.clone())?))
        }
        RingDescriptor::FractionField { base } => fraction_field(&make_ring(base)?)?,
    })
}

/// Fraction field of a domain; polynomial rings become Laurent rings over
/// the fraction field of their coefficients, where division by monomials is
/// exact and other exact quotients are found by long division.
fn fraction_field(r: &AnyRing) -> Result<AnyRing, RingError> {
    Ok(match r {
        AnyRing::Int(_) | AnyRing::PLocal(_) | AnyRing::Rat(_) => AnyRing::Rat(Rationals),
        AnyRing::Cyc(c) => AnyRing::Cyc(c.as_field()),
        AnyRing::Poly(pr) => AnyRing::Poly(Arc::new(PolyRing::laurent(
            fraction_field(pr.base())?,
            pr.vars().to_vec(),
        )?)),
        AnyRing::Mod(_) | AnyRing::CycQ(_) => {
            return Err(RingError::InvalidDescriptor(format!("{} is not a domain", r.name())))
        }
    })
}

impl AnyRing {
    /// Nested polynomial ring, if this is one.
    pub fn as_poly(&self) -> Option<&PolyRing<AnyRing>> {
        match self {
            AnyRing::Poly(p) => Some(p),
            _ => None,
        }
    }

    /// Enumerable rings.
    pub fn is_finite(&self) -> bool {
        matches!(self, AnyRing::Mod(_) | AnyRing::CycQ(_))
    }

    /// `p`-torsion-free rings in which divisions by `p` are meaningful.
    pub fn is_torsion_free(&self) -> bool {
        match self {
            AnyRing::Int(_) | AnyRing::PLocal(_) | AnyRing::Rat(_) | AnyRing::Cyc(_) => true,
            AnyRing::Mod(_) | AnyRing::CycQ(_) => false,
            AnyRing::Poly(p) => p.base().is_torsion_free(),
        }
    }

    pub fn fraction_field(&self) -> Result<AnyRing, RingError> {
        fraction_field(self)
    }

    /// Parses an element written as an integer polynomial in `z` (cyclotomic
    /// rings) or as an integer or fraction, e.g. `"1 - z"`, `"-3/5"`.
    pub fn parse_element(&self, text: &str) -> Result<RingElement, RingError> {
        let bad = || RingError::InvalidDescriptor(format!("cannot parse element {text:?} of {}", self.name()));
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad());
        }
        let mut coeffs: Vec<BigRational> = Vec::new();
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let (c, e) = parse_term(term).ok_or_else(bad)?;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigRational::from_integer(0.into()));
            }
            coeffs[e] += c * BigRational::from_integer(sign.into());
        }
        let constant_only = coeffs.len() == 1;
        match self {
            AnyRing::Cyc(c) => {
                let z = c.zeta();
                let mut acc = c.zero();
                let mut pw = c.one();
                for q in &coeffs {
                    let term: Vec<BigRational> = pw.iter().map(|x| x * q).collect();
                    acc = c.add(&acc, &term);
                    pw = c.mul(&pw, &z);
                }
                if !c.is_integral(&acc) && c.is_local() {
                    return Err(bad());
                }
                Ok(RingElement::Cyc(acc))
            }
            AnyRing::CycQ(c) => {
                let z = c.zeta();
                let mut acc = c.zero();
                let mut pw = c.one();
                for q in &coeffs {
                    let k = c.from_rational(q)?;
                    acc = c.add(&acc, &c.mul(&pw, &k));
                    pw = c.mul(&pw, &z);
                }
                Ok(RingElement::CycQ(acc))
            }
            _ if constant_only => self.from_rational(&coeffs[0]),
            _ => Err(bad()),
        }
    }
}

fn parse_term(term: &str) -> Option<(BigRational, usize)> {
    let (coef, power) = match term.find('z') {
        None => (term, None),
        Some(i) => {
            let c = term[..i].trim_end_matches('*');
            let tail = &term[i + 1..];
            let e = if tail.is_empty() { 1 } else { tail.strip_prefix('^')?.parse().ok()? };
            (c, Some(e))
        }
    };
    let c = if coef.is_empty() {
        BigRational::from_integer(1.into())
    } else if let Some((n, d)) = coef.split_once('/') {
        let d: BigInt = d.parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        BigRational::new(n.parse().ok()?, d)
    } else {
        BigRational::from_integer(coef.parse().ok()?)
    };
    Some((c, power.unwrap_or(0)))
}

macro_rules! unary {
    ($self:ident, $a:ident, $r:ident, $x:ident => $body:expr) => {
        match ($self, $a) {
            (AnyRing::Int($r), RingElement::Int($x)) => RingElement::Int($body),
            (AnyRing::PLocal($r), RingElement::Rat($x)) => RingElement::Rat($body),
            (AnyRing::Rat($r), RingElement::Rat($x)) => RingElement::Rat($body),
            (AnyRing::Mod($r), RingElement::Mod($x)) => RingElement::Mod($body),
            (AnyRing::CycQ($r), RingElement::CycQ($x)) => RingElement::CycQ($body),
            (AnyRing::Cyc($r), RingElement::Cyc($x)) => RingElement::Cyc($body),
            (AnyRing::Poly(pr), RingElement::Poly($x)) => {
                let $r = &**pr;
                RingElement::Poly($body)
            }
            (r, e) => mismatch(r, e),
        }
    };
}

macro_rules! binary {
    ($self:ident, $a:ident, $b:ident, $r:ident, $x:ident, $y:ident => $body:expr) => {
        match ($self, $a, $b) {
            (AnyRing::Int($r), RingElement::Int($x), RingElement::Int($y)) => RingElement::Int($body),
            (AnyRing::PLocal($r), RingElement::Rat($x), RingElement::Rat($y)) => RingElement::Rat($body),
            (AnyRing::Rat($r), RingElement::Rat($x), RingElement::Rat($y)) => RingElement::Rat($body),
            (AnyRing::Mod($r), RingElement::Mod($x), RingElement::Mod($y)) => RingElement::Mod($body),
            (AnyRing::CycQ($r), RingElement::CycQ($x), RingElement::CycQ($y)) => RingElement::CycQ($body),
            (AnyRing::Cyc($r), RingElement::Cyc($x), RingElement::Cyc($y)) => RingElement::Cyc($body),
            (AnyRing::Poly(pr), RingElement::Poly($x), RingElement::Poly($y)) => {
                let $r = &**pr;
                RingElement::Poly($body)
            }
            (r, e, _) => mismatch(r, e),
        }
    };
}

macro_rules! nullary {
    ($self:ident, $r:ident => $body:expr) => {
        match $self {
            AnyRing::Int($r) => RingElement::Int($body),
            AnyRing::PLocal($r) => RingElement::Rat($body),
            AnyRing::Rat($r) => RingElement::Rat($body),
            AnyRing::Mod($r) => RingElement::Mod($body),
            AnyRing::CycQ($r) => RingElement::CycQ($body),
            AnyRing::Cyc($r) => RingElement::Cyc($body),
            AnyRing::Poly(pr) => {
                let $r = &**pr;
                RingElement::Poly($body)
            }
        }
    };
}

fn mismatch(r: &AnyRing, e: &RingElement) -> ! {
    panic!("element {e:?} does not belong to {}", r.name())
}

impl Ring for AnyRing {
    type Elem = RingElement;

    fn zero(&self) -> RingElement {
        nullary!(self, r => r.zero())
    }
    fn one(&self) -> RingElement {
        nullary!(self, r => r.one())
    }
    fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        binary!(self, a, b, r, x, y => r.add(x, y))
    }
    fn neg(&self, a: &RingElement) -> RingElement {
        unary!(self, a, r, x => r.neg(x))
    }
    fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        binary!(self, a, b, r, x, y => r.mul(x, y))
    }
    fn pow(&self, a: &RingElement, e: u64) -> RingElement {
        unary!(self, a, r, x => r.pow(x, e))
    }
    fn is_zero(&self, a: &RingElement) -> bool {
        match (self, a) {
            (AnyRing::Int(r), RingElement::Int(x)) => r.is_zero(x),
            (AnyRing::PLocal(r), RingElement::Rat(x)) => r.is_zero(x),
            (AnyRing::Rat(r), RingElement::Rat(x)) => r.is_zero(x),
            (AnyRing::Mod(r), RingElement::Mod(x)) => r.is_zero(x),
            (AnyRing::CycQ(r), RingElement::CycQ(x)) => r.is_zero(x),
            (AnyRing::Cyc(r), RingElement::Cyc(x)) => r.is_zero(x),
            (AnyRing::Poly(r), RingElement::Poly(x)) => r.is_zero(x),
            (r, e) => mismatch(r, e),
        }
    }
    fn from_int(&self, n: &BigInt) -> RingElement {
        nullary!(self, r => r.from_int(n))
    }
    fn from_rational(&self, q: &BigRational) -> Result<RingElement, RingError> {
        Ok(match self {
            AnyRing::Int(r) => RingElement::Int(r.from_rational(q)?),
            AnyRing::PLocal(r) => RingElement::Rat(r.from_rational(q)?),
            AnyRing::Rat(r) => RingElement::Rat(r.from_rational(q)?),
            AnyRing::Mod(r) => RingElement::Mod(r.from_rational(q)?),
            AnyRing::CycQ(r) => RingElement::CycQ(r.from_rational(q)?),
            AnyRing::Cyc(r) => RingElement::Cyc(r.from_rational(q)?),
            AnyRing::Poly(r) => RingElement::Poly(r.from_rational(q)?),
        })
    }
    fn exact_div(&self, a: &RingElement, b: &RingElement) -> Result<RingElement, RingError> {
        Ok(match (self, a, b) {
            (AnyRing::Int(r), RingElement::Int(x), RingElement::Int(y)) => RingElement::Int(r.exact_div(x, y)?),
            (AnyRing::PLocal(r), RingElement::Rat(x), RingElement::Rat(y)) => RingElement::Rat(r.exact_div(x, y)?),
            (AnyRing::Rat(r), RingElement::Rat(x), RingElement::Rat(y)) => RingElement::Rat(r.exact_div(x, y)?),
            (AnyRing::Mod(r), RingElement::Mod(x), RingElement::Mod(y)) => RingElement::Mod(r.exact_div(x, y)?),
            (AnyRing::CycQ(r), RingElement::CycQ(x), RingElement::CycQ(y)) => RingElement::CycQ(r.exact_div(x, y)?),
            (AnyRing::Cyc(r), RingElement::Cyc(x), RingElement::Cyc(y)) => RingElement::Cyc(r.exact_div(x, y)?),
            (AnyRing::Poly(r), RingElement::Poly(x), RingElement::Poly(y)) => RingElement::Poly(r.exact_div(x, y)?),
            (r, e, _) => mismatch(r, e),
        })
    }
    fn name(&self) -> String {
        match self {
            AnyRing::Int(r) => r.name(),
            AnyRing::PLocal(r) => r.name(),
            AnyRing::Rat(r) => r.name(),
            AnyRing::Mod(r) => r.name(),
            AnyRing::CycQ(r) => r.name(),
            AnyRing::Cyc(r) => r.name(),
            AnyRing::Poly(r) => r.name(),
        }
    }
    fn fmt_elem(&self, a: &RingElement) -> String {
        match (self, a) {
            (AnyRing::Int(r), RingElement::Int(x)) => r.fmt_elem(x),
            (AnyRing::PLocal(r), RingElement::Rat(x)) => r.fmt_elem(x),
            (AnyRing::Rat(r), RingElement::Rat(x)) => r.fmt_elem(x),
            (AnyRing::Mod(r), RingElement::Mod(x)) => r.fmt_elem(x),
            (AnyRing::CycQ(r), RingElement::CycQ(x)) => r.fmt_elem(x),
            (AnyRing::Cyc(r), RingElement::Cyc(x)) => r.fmt_elem(x),
            (AnyRing::Poly(r), RingElement::Poly(x)) => r.fmt_elem(x),
            (_, e) => format!("{e:?}"),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> RingElement {
        nullary!(self, r => r.sample(rng))
    }
    fn elements(&self) -> Result<Vec<RingElement>, RingError> {
        match self {
            AnyRing::Mod(r) => Ok(r.elements()?.into_iter().map(RingElement::Mod).collect()),
            AnyRing::CycQ(r) => Ok(r.elements()?.into_iter().map(RingElement::CycQ).collect()),
            _ => Err(RingError::NotFinite(self.name())),
        }
    }
    fn cardinality(&self) -> Option<u64> {
        match self {
            AnyRing::Mod(r) => r.cardinality(),
            AnyRing::CycQ(r) => r.cardinality(),
            _ => None,
        }
    }
    fn owns(&self, a: &RingElement) -> bool {
        match (self, a) {
            (AnyRing::Int(_), RingElement::Int(_)) => true,
            (AnyRing::PLocal(r), RingElement::Rat(x)) => r.owns(x),
            (AnyRing::Rat(_), RingElement::Rat(_)) => true,
            (AnyRing::Mod(r), RingElement::Mod(x)) => r.owns(x),
            (AnyRing::CycQ(r), RingElement::CycQ(x)) => r.owns(x),
            (AnyRing::Cyc(r), RingElement::Cyc(x)) => r.owns(x),
            (AnyRing::Poly(r), RingElement::Poly(x)) => r.owns(x),
            _ => false,
        }
    }
}

fn no_lift(from: &AnyRing, to: &AnyRing) -> RingError {
    RingError::NoLiftDeclared { from: from.name(), to: to.name() }
}

/// Image of `x ∈ from` in the quotient ring `to`.
pub fn reduce(x: &RingElement, from: &AnyRing, to: &AnyRing) -> Result<RingElement, RingError> {
    match (from, x, to) {
        (AnyRing::Int(_), RingElement::Int(n), AnyRing::Mod(_) | AnyRing::CycQ(_)) => Ok(to.from_int(n)),
        (AnyRing::PLocal(_) | AnyRing::Rat(_), RingElement::Rat(q), AnyRing::Mod(_) | AnyRing::CycQ(_)) => {
            to.from_rational(q)
        }
        (AnyRing::Cyc(c), RingElement::Cyc(v), AnyRing::CycQ(q)) if c.p() == q.p() && c.level() == q.level() => {
            if !c.is_local() && !v.iter().all(|x| is_p_local(x, c.p())) {
                return Err(RingError::NotDivisible {
                    ring: to.name(),
                    dividend: from.fmt_elem(x),
                    divisor: "1".into(),
                });
            }
            Ok(RingElement::CycQ(q.reduce_coeffs(v)?))
        }
        (AnyRing::Poly(pf), RingElement::Poly(p), AnyRing::Poly(pt)) if pf.nvars() == pt.nvars() => {
            let mut terms = Vec::with_capacity(p.len());
            for (m, c) in p.terms() {
                if !pt.is_laurent() && !m.is_nonnegative() {
                    return Err(no_lift(from, to));
                }
                terms.push((*m, reduce(c, pf.base(), pt.base())?));
            }
            Ok(RingElement::Poly(pt.from_terms(terms)))
        }
        _ => Err(no_lift(from, to)),
    }
}

/// Canonical preimage of `y ∈ quotient` in `lift`, coefficients in `[0, p^l)`.
pub fn lift(y: &RingElement, quotient: &AnyRing, lift: &AnyRing) -> Result<RingElement, RingError> {
    match (quotient, y, lift) {
        (AnyRing::Mod(_), RingElement::Mod(v), AnyRing::Int(_) | AnyRing::PLocal(_) | AnyRing::Rat(_)) => {
            Ok(lift.from_int(&BigInt::from(*v)))
        }
        (AnyRing::CycQ(q), RingElement::CycQ(v), AnyRing::Cyc(c)) if c.p() == q.p() && c.level() == q.level() => {
            Ok(RingElement::Cyc(q.lift_coeffs(v)))
        }
        (AnyRing::Poly(pq), RingElement::Poly(p), AnyRing::Poly(pl)) if pq.nvars() == pl.nvars() => {
            let mut terms = Vec::with_capacity(p.len());
            for (m, c) in p.terms() {
                terms.push((*m, self::lift(c, pq.base(), pl.base())?));
            }
            Ok(RingElement::Poly(pl.from_terms(terms)))
        }
        _ => Err(no_lift(quotient, lift)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn descriptors_build_expected_rings() {
        let r = make_ring(&RingDescriptor::Modular { n: 9 }).unwrap();
        assert_eq!(r.elements().unwrap().len(), 9);
        let g = make_ring(&RingDescriptor::CyclotomicQuotient { p: 2, l: 2 }).unwrap();
        assert_eq!(g.cardinality(), Some(16));
        assert!(make_ring(&RingDescriptor::Modular { n: 1 }).is_err());
        assert!(make_ring(&RingDescriptor::PLocalRationals { p: 6 }).is_err());
        let nested = RingDescriptor::PolynomialExtension {
            base: Box::new(RingDescriptor::FractionField {
                base: Box::new(RingDescriptor::PolynomialExtension {
                    base: Box::new(RingDescriptor::PLocalRationals { p: 2 }),
                    vars: vec!["L1".into(), "L2".into()],
                }),
            }),
            vars: vec!["U0".into(), "U1".into(), "W0".into(), "W1".into()],
        };
        let r = make_ring(&nested).unwrap();
        let inner = r.as_poly().unwrap().base().as_poly().unwrap();
        assert!(inner.is_laurent());
        let l1 = RingElement::Poly(inner.var(0));
        let inv = inner_inverse(inner, &l1);
        assert_eq!(inner.mul(&unwrap_poly(&l1), &unwrap_poly(&inv)), inner.one());
        assert!(make_ring(&RingDescriptor::FractionField { base: Box::new(RingDescriptor::Modular { n: 4 }) }).is_err());
    }

    fn unwrap_poly(e: &RingElement) -> Polynomial<RingElement> {
        match e {
            RingElement::Poly(p) => p.clone(),
            _ => panic!(),
        }
    }

    fn inner_inverse(r: &PolyRing<AnyRing>, e: &RingElement) -> RingElement {
        RingElement::Poly(r.exact_div(&r.one(), &unwrap_poly(e)).unwrap())
    }

    #[test]
    fn reduce_examples() {
        let z = AnyRing::Int(Integers);
        let m4 = make_ring(&RingDescriptor::Modular { n: 4 }).unwrap();
        assert_eq!(reduce(&RingElement::Int(5.into()), &z, &m4).unwrap(), RingElement::Mod(1));
        let z2 = make_ring(&RingDescriptor::PLocalRationals { p: 2 }).unwrap();
        assert_eq!(reduce(&RingElement::Rat(q(1, 3)), &z2, &m4).unwrap(), RingElement::Mod(3));
        let lift_r = make_ring(&RingDescriptor::CyclotomicLift { p: 2, l: 2 }).unwrap();
        let quo = make_ring(&RingDescriptor::CyclotomicQuotient { p: 2, l: 2 }).unwrap();
        let x = lift_r.parse_element("-1 + z").unwrap();
        assert_eq!(reduce(&x, &lift_r, &quo).unwrap(), quo.parse_element("3 + z").unwrap());
        assert!(matches!(
            reduce(&RingElement::Mod(1), &m4, &z),
            Err(RingError::NoLiftDeclared { .. })
        ));
    }

    #[test]
    fn reduce_after_lift_is_identity() {
        let quo = make_ring(&RingDescriptor::CyclotomicQuotient { p: 3, l: 1 }).unwrap();
        let lift_r = make_ring(&RingDescriptor::CyclotomicLift { p: 3, l: 1 }).unwrap();
        for y in quo.elements().unwrap() {
            let x = lift(&y, &quo, &lift_r).unwrap();
            assert_eq!(reduce(&x, &lift_r, &quo).unwrap(), y);
        }
        let m9 = make_ring(&RingDescriptor::Modular { n: 9 }).unwrap();
        for y in m9.elements().unwrap() {
            assert_eq!(reduce(&lift(&y, &m9, &AnyRing::Int(Integers)).unwrap(), &AnyRing::Int(Integers), &m9).unwrap(), y);
        }
    }

    #[test]
    fn reduce_is_a_homomorphism_on_samples() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(21);
        let lift_r = make_ring(&RingDescriptor::CyclotomicLift { p: 2, l: 2 }).unwrap();
        let quo = make_ring(&RingDescriptor::CyclotomicQuotient { p: 2, l: 2 }).unwrap();
        for _ in 0..200 {
            let (x, y) = (lift_r.sample(&mut rng), lift_r.sample(&mut rng));
            let (rx, ry) = (reduce(&x, &lift_r, &quo).unwrap(), reduce(&y, &lift_r, &quo).unwrap());
            assert_eq!(reduce(&lift_r.add(&x, &y), &lift_r, &quo).unwrap(), quo.add(&rx, &ry));
            assert_eq!(reduce(&lift_r.mul(&x, &y), &lift_r, &quo).unwrap(), quo.mul(&rx, &ry));
        }
    }

    #[test]
    fn parses_elements() {
        let c = make_ring(&RingDescriptor::CyclotomicLift { p: 2, l: 2 }).unwrap();
        let lam = c.parse_element("1-z").unwrap();
        assert_eq!(c.fmt_elem(&lam), "1 + -1*z");
        assert_eq!(c.parse_element("z^2").unwrap(), c.from_i64(-1));
        let z = AnyRing::Int(Integers);
        assert_eq!(z.parse_element(" 2 ").unwrap(), RingElement::Int(2.into()));
        assert!(z.parse_element("1+z").is_err());
        assert!(z.parse_element("1/2").is_err());
    }

    #[test]
    fn descriptor_serde_roundtrip() {
        let d = RingDescriptor::CyclotomicQuotient { p: 2, l: 2 };
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"ring":"cyclotomic-quotient","p":2,"l":2}"#);
        assert_eq!(serde_json::from_str::<RingDescriptor>(&s).unwrap(), d);
    }
}
