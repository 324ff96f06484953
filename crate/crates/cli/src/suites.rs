//! Verification suites. Each suite turns one instance into a list of reports.

use std::time::Instant;

use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wittlab_core::ahseries::{
    artin_hasse, ep_two_param, verify_cocycle_quotient, verify_correction_quotient, verify_factorization,
    verify_factorization_inverse, verify_fp_cocycle, verify_twisted_exponential, IdentityReport, SeriesError,
};
use wittlab_core::dualitylab::{
    check_divisibility, diagram_congruences, lemma1_kernels, lemma2_congruence, lemma2_on_points, nl_hopf,
    pairing_report, theorem2_regression, well_definedness, DualityError, DualityInstance,
};
use wittlab_core::exactring::{Integers, PolyRing, Ring, RingDescriptor, RingError};
use wittlab_core::par::Exec;
use wittlab_core::report::VerificationReport;
use wittlab_core::wittcore::cachefile::format_polynomial;
use wittlab_core::wittcore::{p_power_teichmuller, structure_table, StructureKind, Witt, WittError};

use crate::config::InstanceFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    WittAxioms,
    SeriesIdentities,
    Lemma1,
    Lemma2,
    Pairing,
    Diagram,
    Theorem2,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::WittAxioms,
        Suite::SeriesIdentities,
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Pairing,
        Suite::Diagram,
        Suite::Theorem2,
    ];

    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Self::EACH.to_vec(),
            s => vec![s],
        }
    }
}

/// Everything a suite reads.
pub struct Context {
    pub file: InstanceFile,
    pub inst: DualityInstance,
    pub seed: u64,
    pub exec: Exec,
}

impl Context {
    /// Whether the characteristic-`p` regression applies: `A` must be `F_p`.
    pub fn is_prime_field(&self) -> bool {
        self.file.ring == RingDescriptor::Modular { n: self.file.p }
    }
}

/// Short machine-readable name of the innermost error variant.
pub fn error_kind(e: &DualityError) -> String {
    match e {
        DualityError::Ring(r) => ring_kind(r),
        DualityError::Witt(w) => witt_kind(w),
        DualityError::Series(s) => series_kind(s),
        other => leaf(other),
    }
}

fn series_kind(e: &SeriesError) -> String {
    match e {
        SeriesError::Ring(r) => ring_kind(r),
        SeriesError::Witt(w) => witt_kind(w),
        other => leaf(other),
    }
}

fn witt_kind(e: &WittError) -> String {
    match e {
        WittError::Ring(r) => ring_kind(r),
        other => leaf(other),
    }
}

fn ring_kind(e: &RingError) -> String {
    leaf(e)
}

fn leaf(e: &impl std::fmt::Debug) -> String {
    format!("{e:?}").chars().take_while(|c| c.is_alphanumeric()).collect()
}

/// Error kinds that signal a bug rather than a failed claim.
pub const INTEGRALITY_KINDS: [&str; 2] = ["IntegralityViolation", "NotIntegral"];

fn failure(check: &str, anchor: &str, inst: &str, kind: String, message: String) -> VerificationReport {
    VerificationReport::new(check, anchor, inst, false, json!({ "error": message, "kind": kind }))
}

fn timed(
    check: &str,
    anchor: &str,
    inst: &str,
    body: impl FnOnce() -> Result<(bool, Value), (String, String)>,
) -> VerificationReport {
    let start = Instant::now();
    let report = match body() {
        Ok((passed, evidence)) => VerificationReport::new(check, anchor, inst, passed, evidence),
        Err((kind, message)) => failure(check, anchor, inst, kind, message),
    };
    report.timed(start.elapsed().as_millis() as u64)
}

fn duality(e: DualityError) -> (String, String) {
    (error_kind(&e), e.to_string())
}

fn series(e: SeriesError) -> (String, String) {
    (series_kind(&e), e.to_string())
}

fn witt(e: WittError) -> (String, String) {
    (witt_kind(&e), e.to_string())
}

fn to_value(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

pub fn run_suite(suite: Suite, ctx: &Context) -> Vec<VerificationReport> {
    match suite {
        Suite::WittAxioms => witt_axioms(ctx),
        Suite::SeriesIdentities => series_identities(ctx),
        Suite::Lemma1 => twist_and_kernels(ctx),
        Suite::Lemma2 => exponential_congruence(ctx),
        Suite::Pairing => pairing(ctx),
        Suite::Diagram => diagram(ctx),
        Suite::Theorem2 => prime_field_duality(ctx),
        Suite::All => Suite::EACH.iter().flat_map(|s| run_suite(*s, ctx)).collect(),
    }
}

fn witt_axioms(ctx: &Context) -> Vec<VerificationReport> {
    let name = ctx.inst.name.as_str();
    let p = ctx.inst.p;
    let cfg = &ctx.file.witt_axioms;
    let mut out = vec![timed("structure-polynomials", "ghost inversion of universal polynomials", name, || {
        let mut kinds = Vec::new();
        let mut ok = true;
        let mut first = serde_json::Map::new();
        for kind in StructureKind::ALL {
            let t = structure_table(p, kind, cfg.depth).map_err(witt)?;
            let integral = t.is_integral();
            let ghost = t.verify_symbolic();
            ok &= integral && ghost.is_ok();
            kinds.push(json!({
                "kind": kind.name(),
                "depth": t.depth(),
                "integral": integral,
                "ghost_identities": ghost.is_ok(),
                "first_bad_index": ghost.err(),
            }));
            if matches!(kind, StructureKind::Sum | StructureKind::Product) && t.depth() > 1 {
                first.insert(format!("{}_1", kind.name()), Value::String(format_polynomial(kind, &t.polys[1])));
            }
        }
        Ok((ok, json!({ "p": p, "tables": kinds, "index_one": first })))
    })];

    let base = ctx.inst.base.clone();
    out.push(timed("witt-ring-axioms", "ring axioms and ghost homomorphism", name, || {
        let w = Witt::new(base.clone(), p);
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let n = cfg.length;
        let mut failures: Vec<String> = Vec::new();
        for trial in 0..cfg.trials {
            let (x, y, z) = (w.sample(n, &mut rng), w.sample(n, &mut rng), w.sample(n, &mut rng));
            let add = |a, b| w.add(a, b);
            let mul = |a, b| w.mul(a, b);
            let gx = w.ghost(&x);
            let gy = w.ghost(&y);
            let ghost_sum: Vec<_> = gx.iter().zip(&gy).map(|(a, b)| base.add(a, b)).collect();
            let ghost_product: Vec<_> = gx.iter().zip(&gy).map(|(a, b)| base.mul(a, b)).collect();
            let checks: [(&str, bool); 9] = [
                ("additive commutativity", add(&x, &y).map_err(witt)? == add(&y, &x).map_err(witt)?),
                (
                    "additive associativity",
                    add(&add(&x, &y).map_err(witt)?, &z).map_err(witt)? == add(&x, &add(&y, &z).map_err(witt)?).map_err(witt)?,
                ),
                ("multiplicative commutativity", mul(&x, &y).map_err(witt)? == mul(&y, &x).map_err(witt)?),
                (
                    "multiplicative associativity",
                    mul(&mul(&x, &y).map_err(witt)?, &z).map_err(witt)? == mul(&x, &mul(&y, &z).map_err(witt)?).map_err(witt)?,
                ),
                (
                    "distributivity",
                    mul(&x, &add(&y, &z).map_err(witt)?).map_err(witt)?
                        == add(&mul(&x, &y).map_err(witt)?, &mul(&x, &z).map_err(witt)?).map_err(witt)?,
                ),
                ("additive inverse", w.is_zero(&add(&x, &w.neg(&x).map_err(witt)?).map_err(witt)?)),
                ("unit", mul(&x, &w.one(n)).map_err(witt)? == x),
                ("ghost of sum", w.ghost(&add(&x, &y).map_err(witt)?) == ghost_sum),
                ("ghost of product", w.ghost(&mul(&x, &y).map_err(witt)?) == ghost_product),
            ];
            for (law, ok) in checks {
                if !ok {
                    failures.push(format!("trial {trial}: {law} at x = {}, y = {}, z = {}", w.fmt_vector(&x), w.fmt_vector(&y), w.fmt_vector(&z)));
                }
            }
        }
        let evidence = json!({
            "ring": base.name(),
            "length": n,
            "trials": cfg.trials,
            "seed": ctx.seed,
            "failures": failures.len(),
            "first_failure": failures.first(),
        });
        Ok((failures.is_empty(), evidence))
    }));

    out.push(timed("frobenius-verschiebung", "F∘V = p·id", name, || {
        let w = Witt::new(base.clone(), p);
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0x5eed);
        let mut bad = None;
        let trials = cfg.trials.min(100);
        for _ in 0..trials {
            let x = w.sample(cfg.length + 1, &mut rng);
            let fv = w.frobenius(&w.verschiebung(&x)).map_err(witt)?;
            let px = w.scalar_mul(p, &x.truncate(fv.len())).map_err(witt)?;
            if fv != px && bad.is_none() {
                bad = Some(w.fmt_vector(&x));
            }
        }
        Ok((bad.is_none(), json!({ "trials": trials, "counterexample": bad })))
    }));

    out.push(timed("t-a-specializations", "T_a at the unit, the shift and Teichmüller vectors", name, || {
        let ring = PolyRing::new(Integers, vec!["a0".into(), "X0".into(), "X1".into(), "X2".into()])
            .map_err(|e| (ring_kind(&e), e.to_string()))?;
        let w = Witt::new(ring.clone(), p);
        let x = w.vector((1..4).map(|i| ring.var(i)).collect());
        let a0 = ring.var(0);
        let unit = w.one(3);
        let shift = w.vector(vec![ring.zero(), ring.one(), ring.zero()]);
        let teich = w.teichmuller(&a0, 3);
        let identity = w.t_a(&unit, &x).map_err(witt)? == x;
        let verschiebung = w.t_a(&shift, &x).map_err(witt)? == w.verschiebung(&x);
        let scaling = w.t_a(&teich, &x).map_err(witt)? == w.teich_scale(&a0, &x);
        Ok((
            identity && verschiebung && scaling,
            json!({ "depth": 3, "identity": identity, "verschiebung": verschiebung, "teichmuller_scaling": scaling }),
        ))
    }));
    out
}

fn identity_evidence(r: &IdentityReport) -> Value {
    json!({
        "identity": r.name,
        "p": r.p,
        "order": r.order,
        "first_mismatch": r.mismatch.as_ref().map(|(d, m)| json!({ "degree": d, "coefficient": m })),
        "terms": r.terms,
    })
}

fn series_identities(ctx: &Context) -> Vec<VerificationReport> {
    let name = ctx.inst.name.as_str();
    let p = ctx.inst.p;
    let cfg = &ctx.file.series_identities;
    let order = cfg.order.unwrap_or(ctx.file.order);
    let io = cfg.integrality_order;
    let mut out = vec![timed("artin-hasse", "p-integrality of the Artin–Hasse exponential", name, || {
        let (s, e) = artin_hasse(p, io).map_err(series)?;
        let coeffs: Vec<String> = s.coeffs(&e).iter().take(6).map(|c| c.to_string()).collect();
        Ok((true, json!({ "p": p, "order": io, "leading_coefficients": coeffs })))
    })];
    out.push(timed("two-parameter-series", "p-integrality of E_p(U, Λ; X) and E_p(Λ, Λ; X) = 1 + ΛX", name, || {
        let t = ep_two_param(p, io).map_err(series)?;
        let lam = t.ring.var(1);
        let mut collapse = true;
        for n in 0..=io {
            let c = t
                .ring
                .eval(t.coeff(n), &t.ring, &[lam.clone(), lam.clone()], |c| t.ring.constant(c.clone()))
                .map_err(|e| series(e.into()))?;
            let expected = match n {
                0 => t.ring.one(),
                1 => lam.clone(),
                _ => t.ring.zero(),
            };
            collapse &= c == expected;
        }
        Ok((collapse, json!({ "p": p, "order": io, "integral": true, "collapses_at_u_equal_lambda": collapse })))
    }));

    type Verify = fn(u64, usize, usize) -> Result<IdentityReport, SeriesError>;
    let identities: [(&str, &str, Verify, usize); 5] = [
        ("cocycle-quotient", "F_p(F^(λ)v) as a coboundary quotient", verify_cocycle_quotient, cfg.order2),
        ("twisted-exponential", "twisted exponential equals E_p(T_V W)", verify_twisted_exponential, order),
        ("correction-quotient", "correction factor G_p as a quotient", verify_correction_quotient, order),
        ("factorization-product", "E_p(T_V W) = E_p(W; (E−1)/Λ2) · G_p", verify_factorization, order),
        ("factorization-quotient", "E_p(T_V W) = E_p(W; (E−1)/Λ2) / G_p", verify_factorization_inverse, order),
    ];
    for (check, anchor, f, n) in identities {
        out.push(timed(check, anchor, name, || {
            let r = f(p, cfg.length, n).map_err(series)?;
            Ok((r.holds, identity_evidence(&r)))
        }));
    }
    out.push(timed("cocycle-conditions", "F_p(v, λ; X, Y) is a symmetric 2-cocycle", name, || {
        let r = verify_fp_cocycle(p, cfg.length, cfg.cocycle_order).map_err(series)?;
        Ok((r.passed(), to_value(&r)))
    }));
    out
}

fn twist_and_kernels(ctx: &Context) -> Vec<VerificationReport> {
    let inst = &ctx.inst;
    let name = inst.name.as_str();
    let n = inst.window.max(2);
    let mut out = vec![timed("teichmuller-power-closed-form", "closed form of p^l·[λ] over Z[λ]", name, || {
        let t = p_power_teichmuller(inst.p, inst.l, n).map_err(witt)?;
        let coeff: Vec<String> = t.coeff.iter().map(|c| c.to_string()).collect();
        let alpha: Vec<String> = t.alpha.iter().map(|c| c.to_string()).collect();
        let b: Vec<String> = t.b.coords.iter().map(|c| t.ring.fmt_elem(c)).collect();
        Ok((true, json!({ "p": inst.p, "l": inst.l, "b": b, "coefficients": coeff, "alpha": alpha })))
    })];
    out.push(timed("twist-vector", "a = λ^(−p^l)·p^l[λ] in the lift", name, || {
        let d = check_divisibility(inst, n).map_err(duality)?;
        let a: Vec<String> = d.a_lift.iter().map(|c| inst.lift.fmt_elem(c)).collect();
        let a_base: Vec<String> = d.a_base.iter().map(|c| inst.base.fmt_elem(c)).collect();
        Ok((true, json!({ "a_lift": a, "a": a_base })))
    }));
    let start = Instant::now();
    let kernels = lemma1_kernels(inst, ctx.exec);
    let millis = start.elapsed().as_millis() as u64;
    let anchor = "Ker(F^(λ)∘T_a) = Ker(F^(λ^(p^l)))";
    match kernels {
        Err(e) => {
            let (kind, msg) = duality(e);
            out.push(failure("kernel-equality", anchor, name, kind, msg).timed(millis));
        }
        Ok(r) => {
            let projected = r.projected.as_ref().is_some_and(|p| p.equal) && r.frobenius_in_twisted;
            out.push(VerificationReport::new(
                "kernel-equality-projected",
                "kernels agree on the window after enumerating up to l coordinates deeper",
                name,
                projected,
                json!({ "inclusion": r.frobenius_in_twisted, "projected": to_value(&r.projected) }),
            )
            .timed(millis));
            out.insert(2, VerificationReport::new("kernel-equality", anchor, name, r.passed(), to_value(&r)).timed(millis));
        }
    }
    out
}

fn exponential_congruence(ctx: &Context) -> Vec<VerificationReport> {
    let inst = &ctx.inst;
    let name = inst.name.as_str();
    let cfg = &ctx.file.lemma2;
    let order = cfg.order.unwrap_or(ctx.file.order);
    let start = Instant::now();
    let report = lemma2_congruence(inst, cfg.variables, order);
    let millis = start.elapsed().as_millis() as u64;
    let mut out: Vec<VerificationReport> = match report {
        Err(e) => {
            let (kind, msg) = duality(e);
            vec![failure("exponential-congruence", "E_p(x, λ^(p^l); ψ(X)) ≡ E_p(T_a x, λ; X) mod p^l", name, kind, msg)]
        }
        Ok(r) => vec![
            VerificationReport::new(
                "exponential-congruence",
                "E_p(x, λ^(p^l); ψ(X)) ≡ E_p(T_a x, λ; X) mod p^l",
                name,
                r.congruence.holds,
                to_value(&r.congruence),
            ),
            VerificationReport::new(
                "teichmuller-power-series",
                "E_p(p^l[λ], λ; X) = (1 + λX)^(p^l)",
                name,
                r.teichmuller_power,
                json!({ "order": order }),
            ),
            VerificationReport::new(
                "kernel-exponential-identity",
                "E_p(x, λ^(p^l); ψ(X)) = E_p(T_a x, λ; X) on Ker F^(λ^(p^l))",
                name,
                r.kernel_identity,
                json!({ "order": order, "reading": "generic kernel vector over the fraction field" }),
            ),
        ],
    }
    .into_iter()
    .map(|r| r.timed(millis))
    .collect();
    if let Some(points_order) = cfg.points_order {
        out.push(timed(
            "kernel-exponential-points",
            "E_p(x, λ^(p^l); ψ(X)) = E_p(T_a x, λ; X) for A-points of Ker F^(λ^(p^l))",
            name,
            || {
                let r = lemma2_on_points(inst, points_order, ctx.exec).map_err(duality)?;
                Ok((r.holds, to_value(&r)))
            },
        ));
    }
    out
}

fn pairing(ctx: &Context) -> Vec<VerificationReport> {
    let inst = &ctx.inst;
    let name = inst.name.as_str();
    let cfg = &ctx.file.pairing;
    let mut out = vec![timed("hopf-presentation", "Hopf algebra of ker ψ, free of rank p^l", name, || {
        let (_, h) = nl_hopf(inst).map_err(duality)?;
        Ok((h.axioms_hold(inst.p_power() as usize), to_value(&h)))
    })];
    out.push(timed("pairing-group-likes", "φ(x) is group-like, multiplicative and constant on T_a-cosets", name, || {
        let r = pairing_report(inst, ctx.exec).map_err(duality)?;
        Ok((r.passed(), to_value(&r)))
    }));
    out.push(timed("pairing-well-definedness", "E_p(x + T_a y) = E_p(x)(1 + p^l W + ψ Q)", name, || {
        let r = well_definedness(inst, cfg.variables, cfg.order.unwrap_or(ctx.file.order)).map_err(duality)?;
        Ok((r.passed(), to_value(&r)))
    }));
    out
}

fn diagram(ctx: &Context) -> Vec<VerificationReport> {
    let inst = &ctx.inst;
    let name = inst.name.as_str();
    let cfg = &ctx.file.diagram;
    let order = cfg.order.unwrap_or(ctx.file.order);
    let start = Instant::now();
    let report = diagram_congruences(inst, cfg.variables, order);
    let millis = start.elapsed().as_millis() as u64;
    let out = match report {
        Err(e) => {
            let (kind, msg) = duality(e);
            vec![failure("diagram-congruences", "pullback squares along ψ and T_a", name, kind, msg)]
        }
        Ok(r) => vec![
            VerificationReport::new(
                "diagram-exponential-square",
                "E_p(x, λ^(p^l); ψ(X)) ≡ E_p(T_a x, λ; X) mod p^l",
                name,
                r.exponential_square.holds,
                to_value(&r.exponential_square),
            ),
            VerificationReport::new(
                "diagram-cocycle-square",
                "F_p(F^(λ^(p^l))z; ψ(X), ψ(Y)) ≡ F_p(F^(λ)T_a z; X, Y) mod p^l",
                name,
                r.cocycle_square.holds && r.cocycle_lhs_integral,
                json!({
                    "congruence": to_value(&r.cocycle_square),
                    "untwisted": to_value(&r.cocycle_square_untwisted),
                    "lhs_integral": r.cocycle_lhs_integral,
                }),
            ),
            VerificationReport::new(
                "diagram-cocycle-cohomologous",
                "cocycle square up to the coboundary of E_p(z, λ^(p^l); ψ(X))/E_p(T_a z, λ; X)",
                name,
                r.cohomologous && r.coboundary_integral,
                json!({ "order": order, "coboundary_integral": r.coboundary_integral, "exact": r.cohomologous }),
            ),
        ],
    };
    out.into_iter().map(|r| r.timed(millis)).collect()
}

fn prime_field_duality(ctx: &Context) -> Vec<VerificationReport> {
    let inst = &ctx.inst;
    let name = inst.name.as_str();
    vec![timed("prime-field-duality", "Ker F^(λ) on W_l(F_p) against group-likes of ker ψ", name, || {
        let lambda = inst.base.fmt_elem(&inst.lambda_base);
        let r = theorem2_regression(inst.p, inst.l, &lambda, ctx.exec).map_err(duality)?;
        Ok((r.passed(), to_value(&r)))
    })]
}
