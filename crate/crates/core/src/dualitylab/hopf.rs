//! `A[t]/(ψ(t))` with comultiplication `t ↦ t⊗1 + 1⊗t + λ·t⊗t`.

use serde::Serialize;

use crate::exactring::{AnyRing, Ring, RingElement};
use crate::par::{map_range, Exec};

use super::{fmt_poly, psi_polynomial, DualityError, DualityInstance};

/// Element of the `k`-fold tensor power, dense in the monomial basis
/// `t_0^{e_0}⋯t_{k−1}^{e_{k−1}}`, `e_i < D`, index `Σ e_i D^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tensor {
    pub k: usize,
    pub coeffs: Vec<RingElement>,
}

#[derive(Debug, Clone)]
pub struct QuotientAlgebra {
    ring: AnyRing,
    psi: Vec<RingElement>,
    lambda: RingElement,
}

impl QuotientAlgebra {
    /// `psi` must be monic, lowest degree first.
    pub fn new(ring: AnyRing, psi: Vec<RingElement>, lambda: RingElement) -> Self {
        assert!(psi.len() >= 2 && ring.is_one(psi.last().expect("nonempty")), "ψ must be monic");
        Self { ring, psi, lambda }
    }

    pub fn from_instance(inst: &DualityInstance) -> Result<Self, DualityError> {
        Ok(Self::new(inst.base.clone(), psi_polynomial(inst)?, inst.lambda_base.clone()))
    }

    pub fn ring(&self) -> &AnyRing {
        &self.ring
    }

    /// Rank `D = deg ψ`.
    pub fn dim(&self) -> usize {
        self.psi.len() - 1
    }

    fn radix_reduce(&self, mut arr: Vec<RingElement>, k: usize) -> Vec<RingElement> {
        let d = self.dim();
        let r = 2 * d - 1;
        for v in 0..k {
            let stride = r.pow(v as u32);
            for e in (d..r).rev() {
                for idx in 0..arr.len() {
                    if (idx / stride) % r != e || self.ring.is_zero(&arr[idx]) {
                        continue;
                    }
                    let c = std::mem::replace(&mut arr[idx], self.ring.zero());
                    for (i, pc) in self.psi[..d].iter().enumerate() {
                        if self.ring.is_zero(pc) {
                            continue;
                        }
                        let target = idx - (d - i) * stride;
                        let t = self.ring.mul(&c, pc);
                        arr[target] = self.ring.sub(&arr[target], &t);
                    }
                }
            }
        }
        let size = d.pow(k as u32);
        (0..size)
            .map(|i| {
                let mut idx = 0;
                let mut rest = i;
                for v in 0..k {
                    idx += (rest % d) * r.pow(v as u32);
                    rest /= d;
                }
                arr[idx].clone()
            })
            .collect()
    }

    /// Reduces a polynomial of any degree modulo `ψ`.
    pub fn reduce_poly(&self, c: &[RingElement]) -> Vec<RingElement> {
        let d = self.dim();
        let mut arr = c.to_vec();
        arr.resize(arr.len().max(2 * d - 1), self.ring.zero());
        let mut k = arr.len() - 1;
        while k >= d {
            if !self.ring.is_zero(&arr[k]) {
                let top = std::mem::replace(&mut arr[k], self.ring.zero());
                for i in 0..d {
                    let t = self.ring.mul(&top, &self.psi[i]);
                    arr[k - d + i] = self.ring.sub(&arr[k - d + i], &t);
                }
            }
            k -= 1;
        }
        arr.truncate(d);
        arr
    }

    pub fn one(&self) -> Vec<RingElement> {
        self.reduce_poly(&[self.ring.one()])
    }

    pub fn t(&self) -> Vec<RingElement> {
        self.reduce_poly(&[self.ring.zero(), self.ring.one()])
    }

    pub fn mul(&self, a: &[RingElement], b: &[RingElement]) -> Vec<RingElement> {
        let mut c = vec![self.ring.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.ring.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.ring.mul(x, y);
                self.ring.add_assign(&mut c[i + j], &t);
            }
        }
        self.reduce_poly(&c)
    }

    pub fn pow(&self, a: &[RingElement], e: u64) -> Vec<RingElement> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn is_zero(&self, a: &[RingElement]) -> bool {
        a.iter().all(|c| self.ring.is_zero(c))
    }

    /// Smallest `n` with `t^n = 0`, searched up to `limit`.
    pub fn nilpotency_index(&self, limit: usize) -> Option<usize> {
        let t = self.t();
        let mut acc = self.one();
        for n in 1..=limit {
            acc = self.mul(&acc, &t);
            if self.is_zero(&acc) {
                return Some(n);
            }
        }
        None
    }

    pub fn tensor_one(&self, k: usize) -> Tensor {
        self.embed(&self.one(), k, 0)
    }

    /// `g` placed in tensor slot `v`.
    pub fn embed(&self, g: &[RingElement], k: usize, v: usize) -> Tensor {
        let d = self.dim();
        let mut coeffs = vec![self.ring.zero(); d.pow(k as u32)];
        let stride = d.pow(v as u32);
        for (e, c) in g.iter().enumerate() {
            coeffs[e * stride] = c.clone();
        }
        Tensor { k, coeffs }
    }

    pub fn tensor_add(&self, a: &Tensor, b: &Tensor) -> Tensor {
        Tensor { k: a.k, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.ring.add(x, y)).collect() }
    }

    pub fn tensor_scale(&self, a: &Tensor, c: &RingElement) -> Tensor {
        Tensor { k: a.k, coeffs: a.coeffs.iter().map(|x| self.ring.mul(x, c)).collect() }
    }

    pub fn tensor_mul(&self, a: &Tensor, b: &Tensor) -> Tensor {
        let k = a.k;
        let d = self.dim();
        let r = 2 * d - 1;
        let mut arr = vec![self.ring.zero(); r.pow(k as u32)];
        let spread = |mut i: usize| {
            let mut idx = 0;
            for v in 0..k {
                idx += (i % d) * r.pow(v as u32);
                i /= d;
            }
            idx
        };
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.ring.is_zero(x) {
                continue;
            }
            let si = spread(i);
            for (j, y) in b.coeffs.iter().enumerate() {
                if self.ring.is_zero(y) {
                    continue;
                }
                let t = self.ring.mul(x, y);
                let idx = si + spread(j);
                self.ring.add_assign(&mut arr[idx], &t);
            }
        }
        Tensor { k, coeffs: self.radix_reduce(arr, k) }
    }

    /// `Σ g_i x^i` for a tensor `x`.
    pub fn eval_at(&self, g: &[RingElement], x: &Tensor) -> Tensor {
        let mut acc = self.tensor_scale(&self.tensor_one(x.k), &self.ring.zero());
        let mut pw = self.tensor_one(x.k);
        for c in g {
            if !self.ring.is_zero(c) {
                acc = self.tensor_add(&acc, &self.tensor_scale(&pw, c));
            }
            pw = self.tensor_mul(&pw, x);
        }
        acc
    }

    /// `a + b + λab`.
    pub fn group_law(&self, a: &Tensor, b: &Tensor) -> Tensor {
        let ab = self.tensor_scale(&self.tensor_mul(a, b), &self.lambda);
        self.tensor_add(&self.tensor_add(a, b), &ab)
    }

    /// `Δ(t) = t⊗1 + 1⊗t + λ t⊗t`.
    pub fn delta_t(&self) -> Tensor {
        self.group_law(&self.embed(&self.t(), 2, 0), &self.embed(&self.t(), 2, 1))
    }

    /// `Δ(g) = g(Δ t)`.
    pub fn delta(&self, g: &[RingElement]) -> Tensor {
        self.eval_at(g, &self.delta_t())
    }

    /// `Δ(g) = g⊗g` and `ε(g) = 1`.
    pub fn is_group_like(&self, g: &[RingElement]) -> bool {
        if !self.ring.is_one(&g[0]) {
            return false;
        }
        self.delta(g) == self.tensor_mul(&self.embed(g, 2, 0), &self.embed(g, 2, 1))
    }

    /// Every group-like element, by exhaustive search over `A^D`.
    pub fn group_likes(&self, exec: Exec) -> Result<Vec<Vec<RingElement>>, DualityError> {
        let elems = self.ring.elements()?;
        let d = self.dim();
        let q = elems.len();
        let count = q.pow((d - 1) as u32);
        let found = map_range(exec, count, |i| {
            let mut g = vec![self.ring.one()];
            g.extend(crate::par::digits(i, q, d - 1).into_iter().map(|j| elems[j].clone()));
            self.is_group_like(&g).then_some(g)
        });
        Ok(found.into_iter().flatten().collect())
    }

    pub fn fmt(&self, a: &[RingElement]) -> String {
        fmt_poly(&self.ring, a, "t")
    }

    pub fn psi(&self) -> &[RingElement] {
        &self.psi
    }

    /// `A[[t]]/(ψ) = A[t]/(q)` for the distinguished factor `q` of `ψ` given by
    /// Weierstrass preparation: `ψ = u·q` with `u` a unit power series and
    /// `q ≡ t^d` modulo the maximal ideal. `None` when `A` is not local or
    /// the iteration does not settle.
    pub fn formal_part(&self) -> Option<QuotientAlgebra> {
        const ROUNDS: usize = 64;
        let ring = &self.ring;
        let is_unit = |c: &RingElement| ring.exact_div(&ring.one(), c).is_ok_and(|q| ring.is_one(&ring.mul(&q, c)));
        let d = self.psi.iter().position(is_unit)?;
        let len = d * (ROUNDS + 2);
        let trunc_mul = |a: &[RingElement], b: &[RingElement]| {
            let mut c = vec![ring.zero(); len];
            for (i, x) in a.iter().enumerate().filter(|(_, x)| !ring.is_zero(x)) {
                for (j, y) in b.iter().enumerate().take(len - i) {
                    let t = ring.mul(x, y);
                    ring.add_assign(&mut c[i + j], &t);
                }
            }
            c
        };
        // ψ = P + t^d·U with deg P < d and U a unit
        let low = &self.psi[..d];
        let unit = &self.psi[d..];
        let u0 = ring.exact_div(&ring.one(), &unit[0]).ok()?;
        let mut inv = vec![ring.zero(); len];
        inv[0] = u0.clone();
        for n in 1..len {
            let mut s = ring.zero();
            for k in 1..=n.min(unit.len() - 1) {
                ring.add_assign(&mut s, &ring.mul(&unit[k], &inv[n - k]));
            }
            inv[n] = ring.neg(&ring.mul(&s, &u0));
        }
        // t^d = g·ψ + r by Weierstrass division; then q = t^d − r
        let mut f = vec![ring.zero(); len];
        f[d] = ring.one();
        let mut r = vec![ring.zero(); d];
        for _ in 0..ROUNDS {
            if f.iter().all(|c| ring.is_zero(c)) {
                let mut q: Vec<RingElement> = r.iter().map(|c| ring.neg(c)).collect();
                q.push(ring.one());
                let formal = QuotientAlgebra::new(ring.clone(), q, self.lambda.clone());
                // q must divide ψ exactly as polynomials
                return formal.is_zero(&formal.reduce_poly(&self.psi)).then_some(formal);
            }
            for (i, c) in f[..d].iter().enumerate() {
                ring.add_assign(&mut r[i], c);
            }
            let h = trunc_mul(&f[d..], &inv);
            f = trunc_mul(&h, low).into_iter().map(|c| ring.neg(&c)).collect();
        }
        None
    }
}

/// Verified presentation of the Hopf algebra of `N_l`.
#[derive(Debug, Clone, Serialize)]
pub struct HopfPresentation {
    pub psi: String,
    pub rank: usize,
    /// `Some(n)` when `t^n = 0`; `None` when `t` is not nilpotent.
    pub nilpotency_index: Option<usize>,
    pub comultiplication_well_defined: bool,
    pub coassociative: bool,
    pub counit: bool,
    pub antipode: String,
    pub antipode_well_defined: bool,
    pub antipode_axiom: bool,
    /// Distinguished factor `q` with `A[[t]]/(ψ) = A[t]/(q)`.
    pub formal_factor: Option<String>,
    pub formal_nilpotency_index: Option<usize>,
}

impl HopfPresentation {
    /// All Hopf-algebra axioms hold and the rank is `p^l`.
    pub fn axioms_hold(&self, expected_rank: usize) -> bool {
        self.rank == expected_rank
            && self.comultiplication_well_defined
            && self.coassociative
            && self.counit
            && self.antipode_well_defined
            && self.antipode_axiom
    }
}

pub fn nl_hopf(inst: &DualityInstance) -> Result<(QuotientAlgebra, HopfPresentation), DualityError> {
    let h = QuotientAlgebra::from_instance(inst)?;
    let ring = h.ring().clone();
    let d = h.dim();
    let psi = psi_polynomial(inst)?;
    let t = h.t();
    let dt = h.delta_t();
    let comultiplication_well_defined = h.eval_at(&psi, &dt).coeffs.iter().all(|c| ring.is_zero(c));
    let slot = |v: usize| h.embed(&t, 3, v);
    let left = h.group_law(&h.group_law(&slot(0), &slot(1)), &slot(2));
    let right = h.group_law(&slot(0), &h.group_law(&slot(1), &slot(2)));
    let coassociative = left == right;
    // ε(t) = 0 is well defined because ψ(0) = 0
    let eps_id: Vec<RingElement> = (0..d).map(|j| dt.coeffs[j * d].clone()).collect();
    let id_eps: Vec<RingElement> = dt.coeffs[..d].to_vec();
    let counit = ring.is_zero(&psi[0]) && eps_id == t && id_eps == t;
    // S(t) = −t(1+λt)^{D−1}, the inverse for the law since (1+λt)^{p^l} = 1 in the quotient
    let one_plus = h.reduce_poly(&[ring.one(), inst.lambda_base.clone()]);
    let s = h.mul(&h.reduce_poly(&[ring.zero(), ring.neg(&ring.one())]), &h.pow(&one_plus, d as u64 - 1));
    let antipode_well_defined = h.is_zero(&h.eval_at(&psi, &h.embed(&s, 1, 0)).coeffs);
    let ts = h.mul(&t, &s);
    let sum: Vec<RingElement> = (0..d)
        .map(|i| ring.add(&ring.add(&t[i], &s[i]), &ring.mul(&inst.lambda_base, &ts[i])))
        .collect();
    let antipode_axiom = h.is_zero(&sum);
    let formal = h.formal_part();
    let pres = HopfPresentation {
        psi: fmt_poly(&ring, &psi, "X"),
        rank: d,
        nilpotency_index: h.nilpotency_index(64 * d),
        comultiplication_well_defined,
        coassociative,
        counit,
        antipode: h.fmt(&s),
        antipode_well_defined,
        antipode_axiom,
        formal_factor: formal.as_ref().map(|f| fmt_poly(&ring, f.psi(), "X")),
        formal_nilpotency_index: formal.as_ref().and_then(|f| f.nilpotency_index(64 * f.dim())),
    };
    Ok((h, pres))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn flagship_is_free_of_rank_four_but_not_infinitesimal() {
        let inst = flagship();
        let (h, pres) = nl_hopf(&inst).unwrap();
        assert!(pres.axioms_hold(4), "{pres:?}");
        // ψ has the unit roots −1 and −i, so t cannot be nilpotent
        assert_eq!(pres.nilpotency_index, None);
        let ring = h.ring();
        for root in ["0", "-1", "-z", "-1 - z"] {
            let lifted = inst.lift.parse_element(root).unwrap();
            let r = inst.reduce(&lifted).unwrap();
            let psi = psi_polynomial(&inst).unwrap();
            let mut acc = ring.zero();
            for c in psi.iter().rev() {
                acc = ring.add(&ring.mul(&acc, &r), c);
            }
            assert!(ring.is_zero(&acc), "ψ({root}) ≠ 0");
        }
        let formal = h.formal_part().unwrap();
        let expected: Vec<RingElement> =
            ["0", "1 + z", "1"].iter().map(|c| inst.reduce(&inst.lift.parse_element(c).unwrap()).unwrap()).collect();
        assert_eq!(formal.psi(), expected.as_slice());
        assert!(pres.formal_nilpotency_index.is_some());
    }

    #[test]
    fn prime_field_presentations() {
        let (h, pres) = nl_hopf(&prime_field(2, 1, "1")).unwrap();
        assert!(pres.axioms_hold(2));
        assert_eq!(pres.nilpotency_index, Some(2));
        assert_eq!(pres.psi, "X^2");
        // Δ(t) = t⊗1 + 1⊗t + t⊗t
        let dt = h.delta_t();
        let one = RingElement::Mod(1);
        let zero = RingElement::Mod(0);
        assert_eq!(dt.coeffs, vec![zero, one.clone(), one.clone(), one]);
        let (_, pres) = nl_hopf(&prime_field(2, 2, "1")).unwrap();
        assert_eq!(pres.nilpotency_index, Some(4));
        assert!(pres.axioms_hold(4));
    }

    #[test]
    fn group_like_counts() {
        for (p, l, lam, n) in [(2, 2, "1", 4), (2, 1, "0", 1), (3, 1, "1", 3), (2, 1, "1", 2)] {
            let (h, _) = nl_hopf(&prime_field(p, l, lam)).unwrap();
            assert_eq!(h.group_likes(Exec::Sequential).unwrap().len(), n, "p={p} l={l} λ={lam}");
        }
    }
}
