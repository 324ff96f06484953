//! Acceptance criteria 1 to 11, one line each.
//!
//! Every criterion is evaluated literally and printed as PASS or FAIL. The
//! process fails when an outcome differs from the recorded one in `EXPECTED`,
//! so a literal FAIL stays visible without breaking the test run.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use wittlab::config::InstanceFile;
use wittlab::suites::{run_suite, Context, Suite};
use wittlab_core::ahseries::{
    artin_hasse, ep_two_param, verify_cocycle_quotient, verify_correction_quotient, verify_factorization,
    verify_factorization_inverse, verify_fp_cocycle, verify_twisted_exponential,
};
use wittlab_core::dualitylab::{
    diagram_congruences, lemma1_kernels, lemma2_congruence, nl_hopf, pairing_report, theorem2_regression,
    DualityInstance,
};
use wittlab_core::exactring::{Integers, Monomial, PolyRing, Ring};
use wittlab_core::par::Exec;
use wittlab_core::wittcore::cachefile::{self, format_polynomial};
use wittlab_core::wittcore::{alpha_sequence, p_power_teichmuller, structure_table, StructureKind, Witt};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// Recorded outcome of each criterion; `false` marks a literal failure with
/// a known counterexample.
const EXPECTED: [(u8, bool); 11] = [
    (1, true),
    (2, true),
    (3, true),
    (4, false),
    (5, true),
    (6, false),
    (7, false),
    (8, false),
    (9, true),
    (10, true),
    (11, false),
];

const MOD_NINE: &str = r#"
name = "mod-9"
p = 3
l = 2
lambda = "1"
ring = { ring = "modular", n = 9 }
lift = { ring = "p-local-rationals", p = 3 }
"#;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn load(name: &str) -> (InstanceFile, DualityInstance) {
    let file = InstanceFile::load(&fixture(name)).expect("fixture parses");
    let inst = DualityInstance::new(&file.spec()).expect("fixture is a valid instance");
    (file, inst)
}

fn instance(text: &str) -> (InstanceFile, DualityInstance) {
    let file = InstanceFile::parse(text, "inline").expect("instance parses");
    let inst = DualityInstance::new(&file.spec()).expect("valid instance");
    (file, inst)
}

/// Terms of a printed structure polynomial as (coefficient, sorted factors).
fn terms(text: &str) -> BTreeSet<(String, Vec<String>)> {
    text.split(" + ")
        .map(|t| {
            let mut parts = t.split(" * ").map(str::to_string);
            let coeff = parts.next().unwrap_or_default();
            let mut factors: Vec<String> = parts.collect();
            factors.sort();
            (coeff, factors)
        })
        .collect()
}

fn expected_terms(list: &[(&str, &[&str])]) -> BTreeSet<(String, Vec<String>)> {
    list.iter()
        .map(|(c, f)| {
            let mut f: Vec<String> = f.iter().map(|s| s.to_string()).collect();
            f.sort();
            (c.to_string(), f)
        })
        .collect()
}

fn structure_polynomials() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [2, 3] {
        for kind in StructureKind::ALL {
            let t = structure_table(p, kind, 4).expect("table");
            let good = t.is_integral() && t.verify_symbolic().is_ok();
            if !good {
                notes.push(format!("p={p} {} broken", kind.name()));
            }
            ok &= good;
        }
    }
    let sum = structure_table(2, StructureKind::Sum, 2).expect("sum");
    let product = structure_table(2, StructureKind::Product, 2).expect("product");
    let s1 = format_polynomial(StructureKind::Sum, &sum.polys[1]);
    let p1 = format_polynomial(StructureKind::Product, &product.polys[1]);
    let s1_ok = terms(&s1) == expected_terms(&[("1", &["X1"]), ("1", &["Y1"]), ("-1", &["X0", "Y0"])]);
    let p1_ok = terms(&p1) == expected_terms(&[("1", &["X0^2", "Y1"]), ("1", &["X1", "Y0^2"]), ("2", &["X1", "Y1"])]);
    let elapsed = start.elapsed();
    let passed = ok && s1_ok && p1_ok && elapsed < Duration::from_secs(30);
    notes.push(format!("S1 = {s1}; P1 = {p1}; {:.1}s", elapsed.as_secs_f64()));
    outcome(passed, format!("p in {{2,3}}, depth 4, integral with ghost identities: {ok}; {}", notes.join("; ")))
}

fn suite_passes(file: InstanceFile, inst: DualityInstance, suite: Suite) -> (bool, Vec<String>) {
    let ctx = Context { file, inst, seed: 7, exec: Exec::Parallel };
    let reports = run_suite(suite, &ctx);
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.check.clone()).collect();
    (failed.is_empty() && !reports.is_empty(), failed)
}

fn witt_axioms() -> Outcome {
    let (mut nine, inst9) = instance(MOD_NINE);
    let (mut flag, inst) = load("flagship.cfg");
    nine.witt_axioms.trials = 200;
    flag.witt_axioms.trials = 200;
    let (a, fa) = suite_passes(nine, inst9, Suite::WittAxioms);
    let (b, fb) = suite_passes(flag, inst, Suite::WittAxioms);
    outcome(
        a && b,
        format!("Modular(9) failed checks {fa:?}; CyclotomicQuotient(2,2) failed checks {fb:?}; 200 trials, F∘V on 100 vectors, T_a at depth 3"),
    )
}

fn teichmuller_power() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let ring = PolyRing::new(Integers, vec!["L".into()]).expect("Z[λ]");
    let w = Witt::new(ring.clone(), 2);
    for l in [1u32, 2] {
        let scalar = w.scalar_mul(2u64.pow(l), &w.teichmuller(&ring.var(0), 4)).expect("scalar multiple");
        let alpha = alpha_sequence(2, l, 4);
        let mut closed = true;
        let mut congruent = true;
        for (k, a) in alpha.iter().enumerate() {
            let shift = BigRational::from_integer(BigInt::from(2).pow(l.abs_diff(k as u32)));
            let c = if k <= l as usize { a * shift } else { a / shift };
            let integral = c.is_integer();
            closed &= integral && ring.term(Monomial::var(0, 1 << k), c.to_integer()) == scalar.coords[k];
            let target = BigInt::from(u8::from(k == l as usize));
            congruent &= integral && (c.to_integer() - target).is_even();
        }
        ok &= closed && congruent && p_power_teichmuller(2, l, 4).is_ok();
        let shown: Vec<String> = scalar.coords.iter().map(|c| ring.fmt_elem(c)).collect();
        let alpha: Vec<String> = alpha.iter().map(|a| a.to_string()).collect();
        notes.push(format!("l={l}: b = ({}), alpha = ({}), closed form {closed}, mod-2 congruences {congruent}", shown.join(", "), alpha.join(", ")));
        if l == 1 {
            ok &= ring.term(Monomial::var(0, 2), BigInt::from(-1)) == scalar.coords[1] && alpha[2] == "-8";
        }
    }
    outcome(ok, notes.join("; "))
}

fn kernel_equality() -> Outcome {
    let start = Instant::now();
    let (_, flag) = load("flagship.cfg");
    let r = lemma1_kernels(&flag, Exec::Parallel).expect("flagship kernels");
    let (_, f2) = instance(
        r#"
name = "F2"
p = 2
l = 1
lambda = "1"
ring = { ring = "modular", n = 2 }
lift = { ring = "p-local-rationals", p = 2 }
window = 2
"#,
    );
    let s = lemma1_kernels(&f2, Exec::Parallel).expect("F_2 kernels");
    let elapsed = start.elapsed();
    let projected = r.projected.as_ref().map(|p| format!("{} = {} after {} coordinates", p.kernel_twisted, p.kernel_frobenius, p.enumerated));
    outcome(
        r.equal && s.equal && elapsed < Duration::from_secs(60),
        format!(
            "Z[i]/4 over {} vectors: twisted {} vs Frobenius {}, counterexample {:?}, inclusion {}, projected {}; F_2: {} vs {}; {:.1}s",
            r.vectors,
            r.kernel_twisted,
            r.kernel_frobenius,
            r.counterexample.as_deref().unwrap_or("none"),
            r.frobenius_in_twisted,
            projected.unwrap_or_else(|| "skipped".into()),
            s.kernel_twisted,
            s.kernel_frobenius,
            elapsed.as_secs_f64()
        ),
    )
}

fn series_engine() -> Outcome {
    let (s, e) = artin_hasse(2, 4).expect("E_2");
    let leading: Vec<String> = s.coeffs(&e).iter().take(5).map(|c| c.to_string()).collect();
    let leading_ok = leading == ["1", "1", "1", "2/3", "2/3"];
    let mut ok = leading_ok;
    for p in [2, 3] {
        ok &= artin_hasse(p, 12).is_ok();
        let t = ep_two_param(p, 12).expect("two-parameter series is p-integral");
        let lam = t.ring.var(1);
        for n in 0..=12 {
            let c = t
                .ring
                .eval(t.coeff(n), &t.ring, &[lam.clone(), lam.clone()], |c| t.ring.constant(c.clone()))
                .expect("evaluation");
            let expected = match n {
                0 => t.ring.one(),
                1 => lam.clone(),
                _ => t.ring.zero(),
            };
            ok &= c == expected;
        }
    }
    outcome(ok, format!("E_2 leading coefficients {leading:?}; integrality to degree 12 and E_p(Λ,Λ;X) = 1+ΛX for p in {{2,3}}"))
}

fn identities() -> Outcome {
    let start = Instant::now();
    let named = [
        ("cocycle quotient", verify_cocycle_quotient(2, 3, 6)),
        ("twisted exponential", verify_twisted_exponential(2, 3, 8)),
        ("correction quotient", verify_correction_quotient(2, 3, 8)),
        ("factorization as printed", verify_factorization(2, 3, 8)),
    ];
    let inverse = verify_factorization_inverse(2, 3, 8).map(|r| r.holds).unwrap_or(false);
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, r) in named {
        let holds = r.as_ref().is_ok_and(|r| r.holds);
        ok &= holds;
        let at = r.ok().and_then(|r| r.mismatch.map(|(d, _)| d));
        notes.push(match at {
            Some(d) => format!("{name}: fails at degree {d}"),
            None => format!("{name}: {}", if holds { "holds" } else { "error" }),
        });
    }
    let elapsed = start.elapsed();
    notes.push(format!("factorization with the correction factor inverted: {}", if inverse { "holds" } else { "fails" }));
    notes.push(format!("{:.1}s", elapsed.as_secs_f64()));
    outcome(ok && elapsed < Duration::from_secs(300), notes.join("; "))
}

fn lemma2() -> Outcome {
    let (_, flag) = load("flagship.cfg");
    let r = lemma2_congruence(&flag, 3, 8).expect("flagship congruence");
    outcome(
        r.passed(),
        format!(
            "generic x of length 3 to degree 8: congruence mod 4 {} (first failure at degree {:?}, witness {:?}); E_p(4[λ],λ;X) = (1+λX)^4 {}; exact on the Frobenius kernel {}",
            r.congruence.holds,
            r.congruence.first_failure,
            r.congruence.witness_sample,
            r.teichmuller_power,
            r.kernel_identity
        ),
    )
}

fn diagram() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for name in ["flagship.cfg", "char-p.cfg"] {
        let (_, inst) = load(name);
        let r = diagram_congruences(&inst, 3, 6).expect("diagram congruences");
        ok &= r.passed();
        notes.push(format!(
            "{}: exponential square first fails at {:?}, cocycle square at {:?}, cohomologous with integral coboundary {}",
            inst.name,
            r.exponential_square.first_failure,
            r.cocycle_square.first_failure,
            r.cohomologous && r.coboundary_integral
        ));
    }
    outcome(ok, notes.join("; "))
}

fn duality() -> Outcome {
    let t = theorem2_regression(2, 2, "1", Exec::Parallel).expect("F_2 regression");
    let (_, f2) = instance(
        r#"
name = "F2-l2"
p = 2
l = 2
lambda = "1"
ring = { ring = "modular", n = 2 }
lift = { ring = "p-local-rationals", p = 2 }
window = 3
"#,
    );
    let pairing = pairing_report(&f2, Exec::Parallel).expect("pairing");
    let mut ranks = Vec::new();
    let mut ranks_ok = true;
    let instances = [load("flagship.cfg").1, load("char-p.cfg").1, instance(MOD_NINE).1, f2];
    for inst in &instances {
        let (_, h) = nl_hopf(inst).expect("hopf algebra");
        ranks_ok &= h.axioms_hold(inst.p_power() as usize);
        ranks.push(format!("{} rank {}", inst.name, h.rank));
    }
    let bad = nl_hopf(&load("bad-lambda.cfg").1).is_err();
    ranks_ok &= bad;
    ranks.push(format!("bad-lambda has no ψ over its lift: {bad}"));
    let ok = t.kernel.len() == 4 && t.distinct && t.images.len() == 4 && t.all_group_like && t.homomorphism && pairing.coset_constant && ranks_ok;
    outcome(
        ok,
        format!(
            "kernel {:?}; images {:?}; group-likes {}; homomorphism {}; constant on T_a-cosets {}; {}",
            t.kernel,
            t.images,
            t.group_likes,
            t.homomorphism,
            pairing.coset_constant,
            ranks.join(", ")
        ),
    )
}

fn cocycle() -> Outcome {
    let r = verify_fp_cocycle(2, 3, 5).expect("cocycle check");
    outcome(r.passed(), format!("symmetric {}, cocycle {}, total degree {}", r.symmetric, r.cocycle, r.order))
}

fn wittlab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wittlab")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn cli() -> Outcome {
    let run = |name: &str| {
        let path = fixture(name);
        wittlab(&["run", "--instance", path.to_str().expect("utf-8 path"), "--no-timing"])
    };
    let (flag, _) = run("flagship.cfg");
    let (charp, _) = run("char-p.cfg");
    let (bad, bad_report) = run("bad-lambda.cfg");
    let not_divisible = bad_report.contains("\"NotDivisible\"");

    let dir = std::env::temp_dir().join(format!("wittlab-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let dir_text = dir.to_str().expect("utf-8 path");
    let (build, _) = wittlab(&["cache-build", "--cache", dir_text, "--p", "2", "--depth", "4"]);
    let (verify, _) = wittlab(&["cache-verify", "--cache", dir_text, "--p", "2"]);
    let path = cachefile::cache_path(&dir, 2);
    let bytes = std::fs::read(&path).expect("cache file");
    let reread = cachefile::read(&path).expect("cache parses");
    let bit_exact = cachefile::serialize(&reread).as_bytes() == bytes.as_slice();
    let _ = std::fs::remove_dir_all(&dir);

    let round_trip = build == 0 && verify == 0 && bit_exact;
    outcome(
        flag == 0 && charp == 0 && bad == 1 && not_divisible && round_trip,
        format!(
            "flagship exit {flag}, char-p exit {charp}, bad-lambda exit {bad} with NotDivisible evidence {not_divisible}, cache round trip bit-exact {round_trip}"
        ),
    )
}

fn main() {
    let criteria: [fn() -> Outcome; 11] = [
        structure_polynomials,
        witt_axioms,
        teichmuller_power,
        kernel_equality,
        series_engine,
        identities,
        lemma2,
        diagram,
        duality,
        cocycle,
        cli,
    ];
    let mut unexpected = Vec::new();
    for ((n, expected), check) in EXPECTED.into_iter().zip(criteria) {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check));
        let secs = start.elapsed().as_secs_f64();
        let (passed, detail) = match result {
            Ok(o) => (o.passed, o.detail),
            Err(_) => (false, "panicked".to_string()),
        };
        let tag = if passed { "PASS" } else { "FAIL" };
        println!("criterion {n:>2}: {tag} [{secs:.1}s] {detail}");
        if passed != expected {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria with an unrecorded outcome: {unexpected:?}");
        std::process::exit(1);
    }
}
