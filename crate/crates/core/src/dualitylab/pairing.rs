//! The pairing `x ↦ E_p(x, λ; t)` from `F^{(λ)}`-kernel points to group-likes
//! of `A[t]/(ψ(t))`, and its well-definedness modulo `T_a`.

use std::collections::HashSet;

use serde::Serialize;

use crate::ahseries::{ep_product, group_law, padded, substitute_one, top_index, SeriesRing};
use crate::exactring::{AnyRing, Ring, RingDescriptor, RingElement};
use crate::par::{digits, map_range, Exec};
use crate::wittcore::{Witt, WittVector};

use super::congruence::{psi_series, Generic};
use super::{check_divisibility, nl_hopf, psi_lift, DualityError, DualityInstance, InstanceSpec, QuotientAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingMode {
    /// `t` nilpotent in `A[t]/(ψ)`: values in the whole Hopf algebra.
    Full,
    /// Values in `A[[t]]/(ψ)`, the algebra of the connected part.
    Formal,
}

/// `φ` on one instance, with the truncation that makes it exact.
struct Pairing {
    p: u64,
    mode: PairingMode,
    h: QuotientAlgebra,
    lambda: RingElement,
    series: SeriesRing<AnyRing>,
    /// Coordinates that can reach `t^k` with `t^k ≠ 0`.
    coords: usize,
}

impl Pairing {
    fn new(inst: &DualityInstance) -> Result<Self, DualityError> {
        let full = QuotientAlgebra::from_instance(inst)?;
        let (mode, h, nil) = match full.nilpotency_index(64 * full.dim()) {
            Some(n) => (PairingMode::Full, full, n),
            None => {
                let formal = full.formal_part().ok_or(DualityError::NotNilpotent)?;
                let n = formal.nilpotency_index(64 * formal.dim()).ok_or(DualityError::NotNilpotent)?;
                (PairingMode::Formal, formal, n)
            }
        };
        let order = nil.saturating_sub(1).max(1);
        Ok(Self {
            p: inst.p,
            mode,
            series: SeriesRing::new(inst.base.clone(), &["t"], order),
            lambda: inst.lambda_base.clone(),
            coords: top_index(inst.p, order) + 1,
            h,
        })
    }

    fn phi(&self, x: &[RingElement]) -> Result<Vec<RingElement>, DualityError> {
        let e = ep_product(&self.series, self.p, x, &self.lambda)?;
        Ok(self.h.reduce_poly(&self.series.coeffs(&e)))
    }
}

/// `E_p(x, λ; t)` reduced into `A[t]/(ψ(t))`, or into `A[[t]]/(ψ(t))` when
/// `t` is not nilpotent in the former.
pub fn pairing_phi(inst: &DualityInstance, x: &WittVector<RingElement>) -> Result<Vec<RingElement>, DualityError> {
    Pairing::new(inst)?.phi(&x.coords)
}

/// `E_p(x,λ;X)·E_p(x,λ;Y) = E_p(x,λ;X+Y+λXY)` over `A` to the given order.
pub fn phi_series_group_law(inst: &DualityInstance, x: &[RingElement], order: usize) -> Result<bool, DualityError> {
    let s1 = SeriesRing::new(inst.base.clone(), &["T"], order);
    let s2 = SeriesRing::new(inst.base.clone(), &["X", "Y"], order);
    let e = ep_product(&s1, inst.p, x, &inst.lambda_base)?;
    let (a, b) = (s2.var(0), s2.var(1));
    let lhs = s2.mul(&substitute_one(&s2, &s1, &e, &a)?, &substitute_one(&s2, &s1, &e, &b)?);
    let rhs = substitute_one(&s2, &s1, &e, &group_law(&s2, &inst.lambda_base, &a, &b))?;
    Ok(s2.first_mismatch(&lhs, &rhs).is_none())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairingReport {
    pub mode: PairingMode,
    /// Defining polynomial of the target algebra.
    pub target: String,
    pub coordinates: usize,
    pub kernel_points: usize,
    /// Every pair and every `T_a`-shift was checked.
    pub exhaustive: bool,
    pub group_like: bool,
    pub multiplicative: bool,
    pub coset_constant: bool,
    pub distinct_images: usize,
    pub hopf_group_likes: usize,
    pub counterexample: Option<String>,
}

impl PairingReport {
    pub fn passed(&self) -> bool {
        self.group_like && self.multiplicative && self.coset_constant
    }
}

fn enumerate(base: &AnyRing, len: usize, exec: Exec) -> Result<Vec<Vec<RingElement>>, DualityError> {
    let elems = base.elements()?;
    let q = elems.len();
    Ok(map_range(exec, q.pow(len as u32), |i| digits(i, q, len).into_iter().map(|j| elems[j].clone()).collect()))
}

/// Points `x` of `W_len(A)` with `F^{(λ)}x = 0` in `W_{len−1}(A)`.
fn kernel_points(inst: &DualityInstance, len: usize, exec: Exec) -> Result<Vec<Vec<RingElement>>, DualityError> {
    let witt = Witt::new(inst.base.clone(), inst.p);
    let all = enumerate(&inst.base, len, exec)?;
    let flags = map_range(exec, all.len(), |i| -> Result<bool, DualityError> {
        Ok(witt.is_zero(&witt.f_lambda(&witt.vector(all[i].clone()), &inst.lambda_base)?))
    });
    let mut out = Vec::new();
    for (x, keep) in all.into_iter().zip(flags) {
        if keep? {
            out.push(x);
        }
    }
    Ok(out)
}

/// Kernel points used for pairwise checks, and `T_a`-shifts tried, on large instances.
const PAIR_SAMPLE: usize = 32;
const SHIFT_SAMPLE: usize = 256;

/// Group-like, multiplicativity and `T_a`-coset checks on kernel points,
/// exact in the target algebra. Small instances are checked exhaustively;
/// larger ones on the first kernel points and evenly spaced shifts.
pub fn pairing_report(inst: &DualityInstance, exec: Exec) -> Result<PairingReport, DualityError> {
    let pairing = Pairing::new(inst)?;
    let len = pairing.coords + 1;
    let witt = Witt::new(inst.base.clone(), inst.p);
    let kernel = kernel_points(inst, len, exec)?;
    let images = map_range(exec, kernel.len(), |i| pairing.phi(&kernel[i]))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let h = &pairing.h;
    let fmt = |x: &[RingElement]| witt.fmt_vector(&witt.vector(x.to_vec()));
    let mut counterexample = None;
    let group_like = match kernel.iter().zip(&images).find(|(_, g)| !h.is_group_like(g)) {
        Some((x, _)) => {
            counterexample = Some(format!("not group-like: {}", fmt(x)));
            false
        }
        None => true,
    };

    let paired = kernel.len().min(PAIR_SAMPLE);
    let products = map_range(exec, paired * paired, |k| -> Result<bool, DualityError> {
        let (i, j) = (k / paired, k % paired);
        let sum = witt.add(&witt.vector(kernel[i].clone()), &witt.vector(kernel[j].clone()))?;
        Ok(pairing.phi(&sum.coords)? == h.mul(&images[i], &images[j]))
    });
    let mut multiplicative = true;
    for (k, ok) in products.into_iter().enumerate() {
        if !ok? {
            multiplicative = false;
            let (x, y) = (&kernel[k / paired], &kernel[k % paired]);
            counterexample.get_or_insert_with(|| format!("not multiplicative: {} + {}", fmt(x), fmt(y)));
            break;
        }
    }

    let shifts = enumerate(&inst.base, len, exec)?;
    let step = shifts.len().div_ceil(SHIFT_SAMPLE);
    let mut coset_constant = true;
    match check_divisibility(inst, len) {
        Ok(div) => {
            let a = witt.vector(div.a_base);
            let tried: Vec<&Vec<RingElement>> = shifts.iter().step_by(step).collect();
            let moved = map_range(exec, tried.len(), |i| -> Result<Option<usize>, DualityError> {
                let tx0 = witt.t_a(&a, &witt.vector(tried[i].clone()))?;
                for (j, (x, g)) in kernel.iter().zip(&images).enumerate().take(paired) {
                    let y = witt.add(&witt.vector(x.clone()), &tx0)?;
                    if pairing.phi(&y.coords)? != *g {
                        return Ok(Some(j));
                    }
                }
                Ok(None)
            });
            for (i, bad) in moved.into_iter().enumerate() {
                if let Some(j) = bad? {
                    coset_constant = false;
                    counterexample
                        .get_or_insert_with(|| format!("moved by T_a{}: {}", fmt(tried[i]), fmt(&kernel[j])));
                    break;
                }
            }
        }
        Err(DualityError::LambdaZero) => {}
        Err(e) => return Err(e),
    }
    let distinct: HashSet<&Vec<RingElement>> = images.iter().collect();
    Ok(PairingReport {
        mode: pairing.mode,
        target: h.fmt(h.psi()),
        coordinates: len,
        kernel_points: kernel.len(),
        exhaustive: step == 1 && paired == kernel.len(),
        group_like,
        multiplicative,
        coset_constant,
        distinct_images: distinct.len(),
        hopf_group_likes: h.group_likes(exec)?.len(),
        counterexample,
    })
}

/// Symbolic form of `E_p(x + T_a y, λ; X) ≡ E_p(x, λ; X) mod (p^l, ψ(X))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WellDefinednessReport {
    pub order: usize,
    pub variables: usize,
    /// `E_p(x + T_a y) = E_p(x)·E_p(T_a y)`.
    pub additive: bool,
    /// `W = (E_p(T_a y, λ; X) − E_p(y, λ^{p^l}; ψ(X)))/p^l` has coefficients in the lift.
    pub congruence_witness_integral: bool,
    /// `Q = (E_p(y, λ^{p^l}; ψ(X)) − 1)/ψ(X)` has coefficients in the lift.
    pub psi_witness_integral: bool,
    /// `E_p(x + T_a y) = E_p(x)·(1 + p^l·W + ψ(X)·Q)`.
    pub decomposition: bool,
}

impl WellDefinednessReport {
    pub fn passed(&self) -> bool {
        self.additive && self.congruence_witness_integral && self.psi_witness_integral && self.decomposition
    }
}

pub fn well_definedness(inst: &DualityInstance, vars: usize, order: usize) -> Result<WellDefinednessReport, DualityError> {
    let g = Generic::new(inst, &[("x", vars), ("y", vars)], order)?;
    let s = SeriesRing::new(g.poly.clone(), &["X"], order);
    let (x, y) = (&g.vectors[0], &g.vectors[1]);
    let lam = g.constant(&inst.lambda);
    let lam_pl = g.constant(&inst.lambda_pl());
    let ty = g.t_a(inst, y)?;
    let moved = g.witt.add(&g.witt.vector(x.clone()), &g.witt.vector(ty.clone()))?;
    let lhs = ep_product(&s, inst.p, &moved.coords, &lam)?;
    let ex = ep_product(&s, inst.p, x, &lam)?;
    let ety = ep_product(&s, inst.p, &ty, &lam)?;
    let additive = s.first_mismatch(&lhs, &s.mul(&ex, &ety)).is_none();

    let psi = psi_series(&s, &g, &psi_lift(inst)?, 0);
    let ey = ep_product(&s, inst.p, y, &lam_pl)?;
    let ey_psi = s.compose(&s, &ey, std::slice::from_ref(&psi))?;
    let witness = g.compare(&s, &ety, &ey_psi, inst.p_power());

    let wide = s.with_order(order + 1);
    let ey_wide = wide.coeffs(&ep_product(&wide, inst.p, y, &lam_pl)?);
    let quotient = s.from_coeffs(ey_wide[1..].to_vec());
    let q = s.compose(&s, &quotient, std::slice::from_ref(&psi))?;
    let psi_witness_integral = (0..=order).all(|d| q.component(d).iter().all(|c| g.in_lift(c)));

    let correction = s.add(&s.add(&s.one(), &s.sub(&ety, &ey_psi)), &s.mul(&psi, &q));
    let decomposition = s.first_mismatch(&lhs, &s.mul(&ex, &correction)).is_none();
    Ok(WellDefinednessReport {
        order,
        variables: g.poly.nvars(),
        additive,
        congruence_witness_integral: witness.holds,
        psi_witness_integral,
        decomposition,
    })
}

/// Characteristic-`p` duality: `Ker F^{(λ)}` on `W_l(F_p)` against group-likes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem2Report {
    pub p: u64,
    pub l: u32,
    pub lambda: String,
    pub kernel: Vec<String>,
    pub images: Vec<String>,
    pub group_likes: usize,
    pub distinct: bool,
    pub all_group_like: bool,
    pub homomorphism: bool,
}

impl Theorem2Report {
    pub fn passed(&self) -> bool {
        self.distinct && self.all_group_like && self.homomorphism && self.kernel.len() == self.group_likes
    }
}

pub fn theorem2_regression(p: u64, l: u32, lambda: &str, exec: Exec) -> Result<Theorem2Report, DualityError> {
    let inst = DualityInstance::new(&InstanceSpec {
        name: format!("F_{p}"),
        p,
        l,
        lambda: lambda.into(),
        ring: RingDescriptor::Modular { n: p },
        lift: RingDescriptor::PLocalRationals { p },
        window: l as usize + 1,
        order: p.pow(l) as usize,
    })?;
    let pairing = Pairing::new(&inst)?;
    let (h, _) = nl_hopf(&inst)?;
    let witt = Witt::new(inst.base.clone(), p);
    let len = l as usize;
    let kernel: Vec<Vec<RingElement>> = enumerate(&inst.base, len, exec)?
        .into_iter()
        .filter_map(|x| {
            let wide = witt.vector(padded(inst.base.zero(), &x, len + 1));
            match witt.f_lambda(&wide, &inst.lambda_base) {
                Ok(v) if witt.is_zero(&v) => Some(Ok(x)),
                Ok(_) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect::<Result<_, _>>()?;
    let images = kernel.iter().map(|x| pairing.phi(x)).collect::<Result<Vec<_>, _>>()?;
    let mut homomorphism = true;
    for (i, x) in kernel.iter().enumerate() {
        for (j, y) in kernel.iter().enumerate() {
            let sum = witt.add(&witt.vector(x.clone()), &witt.vector(y.clone()))?;
            homomorphism &= pairing.phi(&sum.coords)? == h.mul(&images[i], &images[j]);
        }
    }
    let distinct = images.iter().collect::<HashSet<_>>().len() == images.len();
    Ok(Theorem2Report {
        p,
        l,
        lambda: lambda.into(),
        kernel: kernel.iter().map(|x| witt.fmt_vector(&witt.vector(x.clone()))).collect(),
        images: images.iter().map(|g| h.fmt(g)).collect(),
        group_likes: h.group_likes(exec)?.len(),
        distinct,
        all_group_like: images.iter().all(|g| h.is_group_like(g)),
        homomorphism,
    })
}
