//! Finite duality checks for the kernel `N_l` of `ψ(x) = λ^{−p^l}((1+λx)^{p^l} − 1)`.
//!
//! An instance is a finite ring `A` with `p^l = 0`, a `p`-torsion-free lift
//! reducing onto `A`, and `λ` in the lift. Every division by powers of `p`
//! and `λ` happens in the lift; results are then reduced to `A`.

mod congruence;
mod hopf;
mod kernels;
mod pairing;

pub use congruence::{
    diagram_congruences, lemma2_congruence, lemma2_on_points, CongruenceReport, DiagramReport, Lemma2Report, PointwiseReport,
};
pub use hopf::{nl_hopf, HopfPresentation, QuotientAlgebra, Tensor};
pub use kernels::{lemma1_kernels, KernelReport, ProjectedKernels, PROJECTION_LIMIT};
pub use pairing::{
    pairing_phi, pairing_report, phi_series_group_law, theorem2_regression, well_definedness, PairingMode, PairingReport,
    Theorem2Report, WellDefinednessReport,
};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::ahseries::SeriesError;
use crate::exactring::{make_ring, reduce, AnyRing, RingDescriptor, RingElement, Ring, RingError};
use crate::wittcore::{p_power_teichmuller, WittError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualityError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("λ = 0 leaves λ^(-p^l)·p^l[λ] undefined")]
    LambdaZero,
    #[error("the class of X is not nilpotent in A[X]/(ψ(X))")]
    NotNilpotent,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Witt(#[from] WittError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn default_window() -> usize {
    3
}
fn default_order() -> usize {
    8
}

/// Declarative instance, as read from a configuration file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub name: String,
    pub p: u64,
    pub l: u32,
    /// `λ` in the lift, e.g. `"1 - z"` or `"2"`.
    pub lambda: String,
    pub ring: RingDescriptor,
    pub lift: RingDescriptor,
    /// Number of Witt coordinates in enumeration windows (`n + 1 → n`).
    #[serde(default = "default_window")]
    pub window: usize,
    /// Truncation order of series checks.
    #[serde(default = "default_order")]
    pub order: usize,
}

#[derive(Debug, Clone)]
pub struct DualityInstance {
    pub name: String,
    pub p: u64,
    pub l: u32,
    pub base: AnyRing,
    pub lift: AnyRing,
    pub lambda: RingElement,
    pub lambda_base: RingElement,
    pub window: usize,
    pub order: usize,
}

impl DualityInstance {
    pub fn new(spec: &InstanceSpec) -> Result<Self, DualityError> {
        let invalid = |m: String| DualityError::InvalidInstance(m);
        if !crate::exactring::is_prime(spec.p) {
            return Err(invalid(format!("{} is not prime", spec.p)));
        }
        if spec.l == 0 || spec.window < 2 || spec.order == 0 {
            return Err(invalid("l, order must be positive and window at least 2".into()));
        }
        let base = make_ring(&spec.ring)?;
        let lift = make_ring(&spec.lift)?;
        if !base.is_finite() {
            return Err(invalid(format!("{} is not finite", base.name())));
        }
        if !lift.is_torsion_free() {
            return Err(invalid(format!("{} is not p-torsion-free", lift.name())));
        }
        let pl = BigInt::from(spec.p).pow(spec.l);
        if !base.is_zero(&base.from_int(&pl)) {
            return Err(invalid(format!("p^l = {pl} is not zero in {}", base.name())));
        }
        let lambda = lift.parse_element(&spec.lambda)?;
        let lambda_base = reduce(&lambda, &lift, &base)?;
        Ok(Self {
            name: spec.name.clone(),
            p: spec.p,
            l: spec.l,
            base,
            lift,
            lambda,
            lambda_base,
            window: spec.window,
            order: spec.order,
        })
    }

    /// `p^l`.
    pub fn p_power(&self) -> u64 {
        self.p.pow(self.l)
    }

    pub fn reduce(&self, x: &RingElement) -> Result<RingElement, RingError> {
        reduce(x, &self.lift, &self.base)
    }

    pub fn lift_element(&self, x: &RingElement) -> Result<RingElement, RingError> {
        crate::exactring::lift(x, &self.base, &self.lift)
    }

    /// `λ^{p^l}` in the lift.
    pub fn lambda_pl(&self) -> RingElement {
        self.lift.pow(&self.lambda, self.p_power())
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: A = {}, lift = {}, λ = {}, p = {}, l = {}",
            self.name,
            self.base.name(),
            self.lift.name(),
            self.lift.fmt_elem(&self.lambda),
            self.p,
            self.l
        )
    }
}

/// `b = p^l[λ]` and `a = λ^{−p^l}·b`, coordinatewise in the lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisibility {
    pub b: Vec<RingElement>,
    pub a_lift: Vec<RingElement>,
    pub a_base: Vec<RingElement>,
}

/// Computes `a` of length `n`; fails with `NotDivisible` when some `b_k` is
/// not a multiple of `λ^{p^l}` in the lift.
pub fn check_divisibility(inst: &DualityInstance, n: usize) -> Result<Divisibility, DualityError> {
    if inst.lift.is_zero(&inst.lambda) {
        return Err(DualityError::LambdaZero);
    }
    let closed = p_power_teichmuller(inst.p, inst.l, n)?;
    let lift = &inst.lift;
    let denom = inst.lambda_pl();
    let mut b = Vec::with_capacity(n);
    let mut a_lift = Vec::with_capacity(n);
    let mut a_base = Vec::with_capacity(n);
    for (k, c) in closed.coeff.iter().enumerate() {
        let bk = lift.mul(&lift.from_int(c), &lift.pow(&inst.lambda, inst.p.pow(k as u32)));
        let ak = lift.exact_div(&bk, &denom)?;
        a_base.push(inst.reduce(&ak)?);
        a_lift.push(ak);
        b.push(bk);
    }
    Ok(Divisibility { b, a_lift, a_base })
}

/// Coefficients of `ψ` in the lift, lowest degree first, monic of degree `p^l`.
pub fn psi_lift(inst: &DualityInstance) -> Result<Vec<RingElement>, DualityError> {
    let lift = &inst.lift;
    let d = inst.p_power() as usize;
    if lift.is_zero(&inst.lambda) {
        let mut c = vec![lift.zero(); d + 1];
        c[d] = lift.one();
        return Ok(c);
    }
    let denom = inst.lambda_pl();
    let mut out = vec![lift.zero()];
    let mut binom = BigInt::from(1);
    for k in 1..=d {
        binom = binom * BigInt::from(d - k + 1) / BigInt::from(k);
        let num = lift.mul(&lift.from_int(&binom), &lift.pow(&inst.lambda, k as u64));
        out.push(lift.exact_div(&num, &denom)?);
    }
    Ok(out)
}

/// `ψ` reduced into `A`.
pub fn psi_polynomial(inst: &DualityInstance) -> Result<Vec<RingElement>, DualityError> {
    psi_lift(inst)?.iter().map(|c| Ok(inst.reduce(c)?)).collect()
}

/// Text form `c0 + c1*X + …` of a coefficient list.
pub fn fmt_poly(ring: &AnyRing, coeffs: &[RingElement], var: &str) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !ring.is_zero(c))
        .map(|(k, c)| {
            let c = ring.fmt_elem(c);
            let c = if c.contains(' ') { format!("({c})") } else { c };
            match k {
                0 => c,
                1 if c == "1" => var.to_string(),
                1 => format!("{c}*{var}"),
                _ if c == "1" => format!("{var}^{k}"),
                _ => format!("{c}*{var}^{k}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn spec(name: &str, p: u64, l: u32, lambda: &str, ring: RingDescriptor, lift: RingDescriptor) -> InstanceSpec {
        InstanceSpec { name: name.into(), p, l, lambda: lambda.into(), ring, lift, window: 3, order: 8 }
    }

    pub fn flagship() -> DualityInstance {
        DualityInstance::new(&spec(
            "flagship",
            2,
            2,
            "1 - z",
            RingDescriptor::CyclotomicQuotient { p: 2, l: 2 },
            RingDescriptor::CyclotomicLift { p: 2, l: 2 },
        ))
        .unwrap()
    }

    pub fn prime_field(p: u64, l: u32, lambda: &str) -> DualityInstance {
        let mut s = spec(
            "char-p",
            p,
            l,
            lambda,
            RingDescriptor::Modular { n: p },
            RingDescriptor::PLocalRationals { p },
        );
        s.window = l as usize + 1;
        DualityInstance::new(&s).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn flagship_witnesses() {
        let inst = flagship();
        let d = check_divisibility(&inst, 4).unwrap();
        assert_eq!(inst.lift.fmt_elem(&d.a_lift[0]), inst.lift.fmt_elem(&inst.lift.parse_element("-1 + z").unwrap()));
        let psi = psi_lift(&inst).unwrap();
        let expected = ["0", "-1 + z", "3z", "2 + 2z", "1"];
        for (c, e) in psi.iter().zip(expected) {
            assert_eq!(*c, inst.lift.parse_element(e).unwrap());
        }
        let reduced = psi_polynomial(&inst).unwrap();
        assert_eq!(reduced[4], inst.base.one());
    }

    #[test]
    fn bad_lambda_is_rejected() {
        let inst = DualityInstance::new(&spec(
            "bad-lambda",
            2,
            2,
            "2",
            RingDescriptor::Modular { n: 4 },
            RingDescriptor::Integers,
        ))
        .unwrap();
        assert!(matches!(check_divisibility(&inst, 3), Err(DualityError::Ring(RingError::NotDivisible { .. }))));
        let zero = prime_field(2, 1, "0");
        assert_eq!(check_divisibility(&zero, 2), Err(DualityError::LambdaZero));
    }

    #[test]
    fn psi_over_prime_fields_and_mod_four() {
        for lam in ["1", "0"] {
            let psi = psi_polynomial(&prime_field(2, 1, lam)).unwrap();
            assert_eq!(psi, vec![RingElement::Mod(0), RingElement::Mod(0), RingElement::Mod(1)]);
        }
        let inst = DualityInstance::new(&spec(
            "mod4",
            2,
            2,
            "1",
            RingDescriptor::Modular { n: 4 },
            RingDescriptor::Integers,
        ))
        .unwrap();
        let psi: Vec<u64> = psi_polynomial(&inst)
            .unwrap()
            .into_iter()
            .map(|c| match c {
                RingElement::Mod(v) => v,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(psi, vec![0, 0, 2, 0, 1]);
    }

    #[test]
    fn instance_validation() {
        let mut s = spec("x", 2, 1, "1", RingDescriptor::Modular { n: 4 }, RingDescriptor::Integers);
        assert!(matches!(DualityInstance::new(&s), Err(DualityError::InvalidInstance(_))));
        s.l = 2;
        s.lift = RingDescriptor::Modular { n: 8 };
        assert!(matches!(DualityInstance::new(&s), Err(DualityError::InvalidInstance(_))));
    }
}
