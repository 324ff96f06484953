//! Symbolic congruences modulo `p^l` between deformed exponentials.
//!
//! Everything is computed over the polynomial ring in the coordinates of a
//! generic Witt vector with coefficients in the fraction field of the lift.
//! A congruence holds when every coefficient of `(lhs − rhs)/p^l` lies in
//! the lift.

use num_bigint::BigInt;
use serde::Serialize;

use crate::ahseries::{
    ep_product, fp_cocycle, group_law, padded, substitute_one, top_index, Exps, Series, SeriesRing,
};
use crate::exactring::{is_p_local, AnyRing, PolyRing, Polynomial, Ring, RingElement};
use crate::par::{digits, map_range, Exec};
use crate::wittcore::Witt;

use super::{check_divisibility, psi_lift, DualityError, DualityInstance};

type Poly = Polynomial<RingElement>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub order: usize,
    /// Generic Witt coordinates; the rest are zero.
    pub variables: usize,
    pub modulus: u64,
    pub holds: bool,
    /// Lowest degree whose difference is not divisible by `p^l` in the lift.
    pub first_failure: Option<usize>,
    /// Number of nonzero coefficients of `(lhs − rhs)/p^l`.
    pub witness_terms: usize,
    /// Lowest-degree nonzero coefficient of the quotient.
    pub witness_sample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma2Report {
    /// The congruence for a generic `x`.
    pub congruence: CongruenceReport,
    /// `E_p(p^l[λ], λ; X) = (1 + λX)^{p^l}` exactly.
    pub teichmuller_power: bool,
    /// Exact equality for the generic `x` with `F^{(λ^{p^l})}x = 0` over the
    /// fraction field, where the correction factor is `1`.
    pub kernel_identity: bool,
}

impl Lemma2Report {
    pub fn passed(&self) -> bool {
        self.congruence.holds && self.teichmuller_power
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    /// `E_p(x, λ^{p^l}; ψ(X)) ≡ E_p(T_a x, λ; X)`.
    pub exponential_square: CongruenceReport,
    /// `F_p(F^{(λ^{p^l})}z, λ^{p^l}; ψ(X), ψ(Y)) ≡ F_p(F^{(λ)}T_a z, λ; X, Y)`.
    pub cocycle_square: CongruenceReport,
    /// The same square with `z` in place of `F^{(λ^{p^l})}z` on the left.
    pub cocycle_square_untwisted: CongruenceReport,
    /// Left side of the cocycle square has coefficients in the lift.
    pub cocycle_lhs_integral: bool,
    /// `G = E_p(z, λ^{p^l}; ψ(X))/E_p(T_a z, λ; X)` has coefficients in the lift.
    pub coboundary_integral: bool,
    /// Left side = right side · `G(X)G(Y)/G(X+Y+λXY)`, exactly.
    pub cohomologous: bool,
}

impl DiagramReport {
    pub fn passed(&self) -> bool {
        self.exponential_square.holds && self.cocycle_square.holds && self.cocycle_lhs_integral
    }
}

/// Generic Witt vectors over `Frac(lift)[x_0, …, y_0, …]`.
pub(super) struct Generic {
    pub p: u64,
    pub lift: AnyRing,
    pub field: AnyRing,
    pub poly: PolyRing<AnyRing>,
    /// One padded coordinate list per named vector.
    pub vectors: Vec<Vec<Poly>>,
    pub witt: Witt<PolyRing<AnyRing>>,
    pub len: usize,
}

impl Generic {
    pub fn new(inst: &DualityInstance, shape: &[(&str, usize)], order: usize) -> Result<Self, DualityError> {
        let field = inst.lift.fraction_field()?;
        let len = top_index(inst.p, order) + 1;
        let mut names = Vec::new();
        let mut ranges = Vec::new();
        for (prefix, vars) in shape {
            let start = names.len();
            names.extend((0..(*vars).clamp(1, len)).map(|i| format!("{prefix}{i}")));
            ranges.push(start..names.len());
        }
        let poly = PolyRing::new(field.clone(), names)?;
        let vectors = ranges
            .into_iter()
            .map(|r| padded(poly.zero(), &r.map(|i| poly.var(i)).collect::<Vec<_>>(), len))
            .collect();
        let witt = Witt::new(poly.clone(), inst.p);
        Ok(Self { p: inst.p, lift: inst.lift.clone(), field, poly, vectors, witt, len })
    }

    pub fn constant(&self, c: &RingElement) -> Poly {
        self.poly.constant(to_field(&self.field, c))
    }

    /// `T_a v` for the vector `a = λ^{−p^l}·p^l[λ]`.
    pub fn t_a(&self, inst: &DualityInstance, v: &[Poly]) -> Result<Vec<Poly>, DualityError> {
        let div = check_divisibility(inst, self.len)?;
        let a = self.witt.vector(div.a_lift.iter().map(|c| self.constant(c)).collect());
        Ok(self.witt.t_a(&a, &self.witt.vector(v.to_vec()))?.coords)
    }

    pub fn in_lift(&self, p: &Poly) -> bool {
        p.terms().iter().all(|(_, c)| in_lift(&self.lift, self.p, c))
    }

    /// `(lhs − rhs)/p^l`, checked coefficientwise.
    pub fn compare(
        &self,
        s: &SeriesRing<PolyRing<AnyRing>>,
        lhs: &Series<Poly>,
        rhs: &Series<Poly>,
        modulus: u64,
    ) -> CongruenceReport {
        let inv = self.field.exact_div(&self.field.one(), &self.field.from_int(&BigInt::from(modulus)));
        let inv = inv.expect("p^l is invertible in the fraction field");
        let quotient = s.scale(&s.sub(lhs, rhs), &self.poly.constant(inv));
        let mut first_failure = None;
        let mut witness_terms = 0;
        let mut witness_sample = None;
        for d in 0..=s.order() {
            for (i, c) in quotient.component(d).iter().enumerate() {
                if self.poly.is_zero(c) {
                    continue;
                }
                witness_terms += 1;
                if witness_sample.is_none() {
                    let e: Exps = s.exponents(d)[i];
                    witness_sample = Some(format!("[{}] {}", s.fmt_monomial(&e), self.poly.fmt_elem(c)));
                }
                if first_failure.is_none() && !self.in_lift(c) {
                    first_failure = Some(d);
                }
            }
        }
        CongruenceReport {
            order: s.order(),
            variables: self.poly.nvars(),
            modulus,
            holds: first_failure.is_none(),
            first_failure,
            witness_terms,
            witness_sample,
        }
    }
}

pub(super) fn to_field(field: &AnyRing, c: &RingElement) -> RingElement {
    match c {
        RingElement::Int(n) => field.from_int(n),
        _ => c.clone(),
    }
}

/// Membership in the lift, with `Z` read as `Z_(p)`.
fn in_lift(lift: &AnyRing, p: u64, c: &RingElement) -> bool {
    match (lift, c) {
        (AnyRing::Int(_), RingElement::Rat(q)) => is_p_local(q, p),
        _ => lift.owns(c),
    }
}

/// `ψ(T)` as a series in variable `var` of `s`.
pub(super) fn psi_series<R: Ring<Elem = Poly>>(
    s: &SeriesRing<R>,
    g: &Generic,
    psi: &[RingElement],
    var: usize,
) -> Series<Poly> {
    let mut out = s.zero();
    for (k, c) in psi.iter().enumerate().skip(1) {
        if k > s.order() {
            break;
        }
        let mut e: Exps = [0; 3];
        e[var] = k as u16;
        out = s.add(&out, &s.monomial(e, g.constant(c)));
    }
    out
}

/// `E_p(x, λ^{p^l}; ψ(X)) ≡ E_p(T_a x, λ; X) mod p^l` for generic `x`, plus
/// the exact identity `E_p(p^l[λ], λ; X) = (1+λX)^{p^l}` behind it.
pub fn lemma2_congruence(inst: &DualityInstance, vars: usize, order: usize) -> Result<Lemma2Report, DualityError> {
    let g = Generic::new(inst, &[("x", vars)], order)?;
    let s = SeriesRing::new(g.poly.clone(), &["X"], order);
    let (lhs, rhs) = exponential_sides(inst, &g, &s, &g.vectors[0])?;
    let congruence = g.compare(&s, &lhs, &rhs, inst.p_power());

    let field = &g.field;
    let s0 = SeriesRing::new(field.clone(), &["X"], order);
    let div = check_divisibility(inst, g.len)?;
    let b: Vec<RingElement> = div.b.iter().map(|c| to_field(field, c)).collect();
    let lam = to_field(field, &inst.lambda);
    let power = ep_product(&s0, inst.p, &b, &lam)?;
    let expected = s0.pow(&s0.add(&s0.one(), &s0.monomial([1, 0, 0], lam)), inst.p_power());

    // ghost (c, c·μ^{p−1}, c·μ^{p²−1}, …) spans Ker F^{(μ)} over the fraction field
    let k = Generic::new(inst, &[("c", 1)], order)?;
    let mu = k.constant(&inst.lambda_pl());
    let c = k.poly.var(0);
    let ghost: Vec<Poly> = (0..k.len)
        .map(|n| k.poly.mul(&c, &k.poly.pow(&mu, inst.p.pow(n as u32) - 1)))
        .collect();
    let x = k.witt.ghost_invert(&ghost)?.coords;
    let sk = SeriesRing::new(k.poly.clone(), &["X"], order);
    let (kl, kr) = exponential_sides(inst, &k, &sk, &x)?;
    Ok(Lemma2Report {
        congruence,
        teichmuller_power: s0.first_mismatch(&power, &expected).is_none(),
        kernel_identity: sk.first_mismatch(&kl, &kr).is_none(),
    })
}

/// `E_p(x, λ^{p^l}; ψ(X))` and `E_p(T_a x, λ; X)`.
fn exponential_sides(
    inst: &DualityInstance,
    g: &Generic,
    s: &SeriesRing<PolyRing<AnyRing>>,
    x: &[Poly],
) -> Result<(Series<Poly>, Series<Poly>), DualityError> {
    let lam = g.constant(&inst.lambda);
    let lam_pl = g.constant(&inst.lambda_pl());
    let rhs = ep_product(s, inst.p, &g.t_a(inst, x)?, &lam)?;
    let outer = ep_product(s, inst.p, x, &lam_pl)?;
    let psi = psi_series(s, g, &psi_lift(inst)?, 0);
    let lhs = s.compose(s, &outer, &[psi])?;
    Ok((lhs, rhs))
}

/// Pointwise form over `A`: every `x ∈ W(A)` with `F^{(λ^{p^l})}x = 0`
/// satisfies `E_p(x, λ^{p^l}; ψ(X)) = E_p(T_a x, λ; X)` in `A[[X]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointwiseReport {
    pub order: usize,
    pub vectors: usize,
    pub kernel_points: usize,
    pub holds: bool,
    pub counterexample: Option<String>,
}

pub fn lemma2_on_points(inst: &DualityInstance, order: usize, exec: Exec) -> Result<PointwiseReport, DualityError> {
    let base = &inst.base;
    let len = top_index(inst.p, order) + 1;
    let witt = Witt::new(base.clone(), inst.p);
    let div = check_divisibility(inst, len)?;
    let a = witt.vector(div.a_base);
    let mu = base.pow(&inst.lambda_base, inst.p_power());
    let s = SeriesRing::new(base.clone(), &["X"], order);
    let psi = s.from_coeffs(super::psi_polynomial(inst)?);
    let elems = base.elements()?;
    let q = elems.len();
    let total = q.pow(len as u32 + 1);
    let outcome = map_range(exec, total, |i| -> Result<Option<bool>, DualityError> {
        let x = witt.vector(digits(i, q, len + 1).into_iter().map(|j| elems[j].clone()).collect());
        if !witt.is_zero(&witt.f_lambda(&x, &mu)?) {
            return Ok(None);
        }
        let x = x.truncate(len);
        let lhs = s.compose(&s, &ep_product(&s, inst.p, &x.coords, &mu)?, std::slice::from_ref(&psi))?;
        let rhs = ep_product(&s, inst.p, &witt.t_a(&a, &x)?.coords, &inst.lambda_base)?;
        Ok(Some(s.first_mismatch(&lhs, &rhs).is_none()))
    });
    let mut kernel_points = 0;
    let mut counterexample = None;
    for (i, r) in outcome.into_iter().enumerate() {
        match r? {
            Some(true) => kernel_points += 1,
            Some(false) => {
                kernel_points += 1;
                if counterexample.is_none() {
                    let x = digits(i, q, len + 1).into_iter().map(|j| elems[j].clone()).collect();
                    counterexample = Some(witt.fmt_vector(&witt.vector(x)));
                }
            }
            None => {}
        }
    }
    Ok(PointwiseReport { order, vectors: total, kernel_points, holds: counterexample.is_none(), counterexample })
}

/// Both squares relating the `λ^{p^l}` theory pulled back along `ψ` to the
/// `λ` theory through `T_a`.
pub fn diagram_congruences(inst: &DualityInstance, vars: usize, order: usize) -> Result<DiagramReport, DualityError> {
    let g = Generic::new(inst, &[("x", vars)], order)?;
    let s1 = SeriesRing::new(g.poly.clone(), &["X"], order);
    let z = &g.vectors[0];
    let (pulled, e) = exponential_sides(inst, &g, &s1, z)?;
    let exponential_square = g.compare(&s1, &pulled, &e, inst.p_power());

    let s2 = SeriesRing::new(g.poly.clone(), &["X", "Y"], order);
    let lam = g.constant(&inst.lambda);
    let lam_pl = g.constant(&inst.lambda_pl());
    let psi = psi_lift(inst)?;
    let (px, py) = (psi_series(&s2, &g, &psi, 0), psi_series(&s2, &g, &psi, 1));

    let (x, y) = (s2.var(0), s2.var(1));
    let xy = group_law(&s2, &lam, &x, &y);
    let coboundary = |f: &Series<Poly>| -> Result<Series<Poly>, DualityError> {
        let fx = substitute_one(&s2, &s1, f, &x)?;
        let fy = substitute_one(&s2, &s1, f, &y)?;
        let fxy = substitute_one(&s2, &s1, f, &xy)?;
        Ok(s2.div(&s2.mul(&fx, &fy), &fxy)?)
    };
    let rhs = coboundary(&e)?;

    let pulled_back = |v: &[Poly]| -> Result<Series<Poly>, DualityError> {
        let f = fp_cocycle(&s2, inst.p, v, &lam_pl)?;
        Ok(s2.compose(&s2, &f, &[px.clone(), py.clone()])?)
    };
    let twisted = g.witt.f_lambda(&g.witt.vector(z.clone()), &lam_pl)?;
    let lhs = pulled_back(&twisted.coords)?;
    let lhs_plain = pulled_back(z)?;
    let integral = |f: &Series<Poly>, top: usize| (0..=top).all(|d| f.component(d).iter().all(|c| g.in_lift(c)));
    let correction = s1.div(&pulled, &e)?;
    let cohomologous = s2.first_mismatch(&lhs, &s2.mul(&rhs, &coboundary(&correction)?)).is_none();
    Ok(DiagramReport {
        exponential_square,
        cocycle_square: g.compare(&s2, &lhs, &rhs, inst.p_power()),
        cocycle_square_untwisted: g.compare(&s2, &lhs_plain, &rhs, inst.p_power()),
        cocycle_lhs_integral: integral(&lhs, order),
        coboundary_integral: integral(&correction, order),
        cohomologous,
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn lemma2_on_prime_field() {
        let r = lemma2_congruence(&prime_field(2, 1, "1"), 2, 4).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.congruence.witness_terms > 0);
        let r = lemma2_congruence(&prime_field(3, 1, "1"), 2, 4).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn lemma2_on_flagship_fails_for_generic_vectors_only() {
        let r = lemma2_congruence(&flagship(), 2, 5).unwrap();
        assert!(!r.congruence.holds);
        assert_eq!(r.congruence.first_failure, Some(3));
        assert!(r.teichmuller_power && r.kernel_identity, "{r:?}");
    }

    #[test]
    fn lemma2_generic_failure_over_z_mod_4() {
        // first non-divisible coefficient sits in degree 6 for λ = 1
        let inst = prime_field(2, 2, "1");
        assert!(lemma2_congruence(&inst, 1, 5).unwrap().passed());
        let r = lemma2_congruence(&inst, 1, 6).unwrap();
        assert_eq!(r.congruence.first_failure, Some(6));
        assert!(r.kernel_identity);
    }

    #[test]
    fn lemma2_holds_on_kernel_points() {
        let r = lemma2_on_points(&prime_field(2, 2, "1"), 8, Exec::Sequential).unwrap();
        assert!(r.holds && r.kernel_points > 0, "{r:?}");
    }

    #[test]
    fn diagram_on_prime_field() {
        let r = diagram_congruences(&prime_field(2, 1, "1"), 2, 4).unwrap();
        assert!(r.passed() && r.cohomologous && r.coboundary_integral, "{r:?}");
    }
}
