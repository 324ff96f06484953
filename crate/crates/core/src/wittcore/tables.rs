//! Universal integer structure polynomials, obtained by inverting the ghost
//! map over `Z[vars]` and cached process-wide.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Pow;
use rand::RngCore;

use crate::exactring::{Integers, Monomial, PolyRing, Polynomial, Ring, MAX_VARS};

use super::WittError;

/// Deepest table the fixed-width monomials can hold.
pub const MAX_TABLE_DEPTH: usize = MAX_VARS / 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureKind {
    Sum,
    Product,
    Neg,
    Frobenius,
    TA,
}

impl StructureKind {
    pub const ALL: [StructureKind; 5] = [Self::Sum, Self::Product, Self::Neg, Self::Frobenius, Self::TA];

    pub fn name(self) -> &'static str {
        match self {
            Self::Sum => "sum",
            Self::Product => "product",
            Self::Neg => "neg",
            Self::Frobenius => "frobenius",
            Self::TA => "t_a",
        }
    }

    fn two_inputs(self) -> bool {
        matches!(self, Self::Sum | Self::Product | Self::TA)
    }

    /// Variable names in index order.
    pub fn var_names(self) -> Vec<String> {
        if self.two_inputs() {
            let (a, b) = if self == Self::TA { ("a", "X") } else { ("X", "Y") };
            (0..MAX_TABLE_DEPTH).flat_map(|i| [format!("{a}{i}"), format!("{b}{i}")]).collect()
        } else {
            (0..=MAX_TABLE_DEPTH).map(|i| format!("X{i}")).collect()
        }
    }

    /// Polynomial ring the table lives in.
    pub fn ring(self) -> PolyRing<Integers> {
        PolyRing::new(Integers, self.var_names()).expect("fixed variable layout")
    }

    /// Variable index of coordinate `i` of the first (or only) input.
    pub fn first(self, i: usize) -> usize {
        if self.two_inputs() {
            2 * i
        } else {
            i
        }
    }

    /// Variable index of coordinate `i` of the second input.
    pub fn second(self, i: usize) -> usize {
        debug_assert!(self.two_inputs());
        2 * i + 1
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StructureKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown structure kind {s:?}"))
    }
}

/// `polys[i]` gives output coordinate `i` as an integer polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTable {
    pub p: u64,
    pub kind: StructureKind,
    pub polys: Vec<Polynomial<BigInt>>,
}

impl StructureTable {
    pub fn depth(&self) -> usize {
        self.polys.len()
    }

    pub fn truncated(&self, depth: usize) -> StructureTable {
        StructureTable { p: self.p, kind: self.kind, polys: self.polys[..depth.min(self.depth())].to_vec() }
    }

    /// Every coefficient is an integer by construction of the carrier type;
    /// this also rules out stray zero entries.
    pub fn is_integral(&self) -> bool {
        self.polys.iter().all(|q| q.terms().iter().all(|(m, c)| m.is_nonnegative() && *c != BigInt::from(0)))
    }

    /// Checks `Φ_n(table) = target_n` symbolically for every stored index.
    pub fn verify_symbolic(&self) -> Result<(), usize> {
        let ring = self.kind.ring();
        let mut chains: Vec<Vec<Polynomial<BigInt>>> = Vec::new();
        for n in 0..self.depth() {
            chains.push(vec![self.polys[n].clone()]);
            let phi = ghost_from_chains(&ring, self.p, &mut chains, n);
            if phi != ghost_target(&ring, self.p, self.kind, n) {
                return Err(n);
            }
        }
        Ok(())
    }

    /// Cheap spot check: the ghost identity at random small integer points.
    pub fn verify_numeric(&self, rng: &mut dyn RngCore, trials: usize) -> Result<(), usize> {
        let ring = self.kind.ring();
        let nvars = ring.nvars();
        for _ in 0..trials {
            let vals: Vec<BigInt> = (0..nvars).map(|_| BigInt::from((rng.next_u64() % 7) as i64 - 3)).collect();
            let coords: Vec<BigInt> = self
                .polys
                .iter()
                .map(|q| ring.eval(q, &Integers, &vals, |c| c.clone()).expect("integer evaluation"))
                .collect();
            for n in 0..self.depth() {
                let lhs = ghost_ints(self.p, &coords[..=n]);
                let rhs = ring
                    .eval(&ghost_target(&ring, self.p, self.kind, n), &Integers, &vals, |c| c.clone())
                    .expect("integer evaluation");
                if lhs != rhs {
                    return Err(n);
                }
            }
        }
        Ok(())
    }
}

fn ghost_ints(p: u64, x: &[BigInt]) -> BigInt {
    let n = x.len() - 1;
    let pb = BigInt::from(p);
    (0..=n).map(|i| Pow::pow(&pb, i as u32) * Pow::pow(&x[i], p.pow((n - i) as u32) as u32)).sum()
}

/// `Φ_n` of the variables starting at `first(0)`, `first(1)`, … (or `second`).
fn ghost_of_vars(ring: &PolyRing<Integers>, p: u64, n: usize, index: impl Fn(usize) -> usize) -> Polynomial<BigInt> {
    let terms = (0..=n).map(|i| {
        let e = p.pow((n - i) as u32) as i16;
        (Monomial::var(index(i), e), Pow::pow(&BigInt::from(p), i as u32))
    });
    ring.from_terms(terms)
}

/// The ghost component the `n`-th output must have.
pub(crate) fn ghost_target(ring: &PolyRing<Integers>, p: u64, kind: StructureKind, n: usize) -> Polynomial<BigInt> {
    let x = |k: usize| ghost_of_vars(ring, p, k, |i| kind.first(i));
    match kind {
        StructureKind::Sum => ring.add(&x(n), &ghost_of_vars(ring, p, n, |i| kind.second(i))),
        StructureKind::Product => ring.mul(&x(n), &ghost_of_vars(ring, p, n, |i| kind.second(i))),
        StructureKind::Neg => ring.neg(&x(n)),
        StructureKind::Frobenius => x(n + 1),
        StructureKind::TA => {
            // a-coordinates in the first slots, x-coordinates in the second
            let mut acc = ring.zero();
            for k in 0..=n {
                let a_pow = Monomial::var(kind.first(k), p.pow((n - k) as u32) as i16);
                let scaled = ring.term(a_pow, Pow::pow(&BigInt::from(p), k as u32));
                let phi = ghost_of_vars(ring, p, n - k, |i| kind.second(i));
                acc = ring.add(&acc, &ring.mul(&scaled, &phi));
            }
            acc
        }
    }
}

/// `Φ_n(S_0, …, S_n)` using cached power chains `chains[i][j] = S_i^{p^j}`.
fn ghost_from_chains(
    ring: &PolyRing<Integers>,
    p: u64,
    chains: &mut [Vec<Polynomial<BigInt>>],
    n: usize,
) -> Polynomial<BigInt> {
    let mut acc = ring.zero();
    for i in 0..=n {
        extend_chain(ring, p, &mut chains[i], n - i);
        let t = ring.scale(&chains[i][n - i], &Pow::pow(&BigInt::from(p), i as u32));
        acc = ring.add(&acc, &t);
    }
    acc
}

fn extend_chain(ring: &PolyRing<Integers>, p: u64, chain: &mut Vec<Polynomial<BigInt>>, upto: usize) {
    while chain.len() <= upto {
        let next = ring.pow(chain.last().expect("chain starts with S_i"), p);
        chain.push(next);
    }
}

struct Entry {
    table: Arc<StructureTable>,
    chains: Vec<Vec<Polynomial<BigInt>>>,
}

type Registry = RwLock<HashMap<(u64, StructureKind), Entry>>;

fn registry() -> &'static Registry {
    static REGISTRY: OnceLock<Registry> = OnceLock::new();
    REGISTRY.get_or_init(Default::default)
}

/// The table for `(p, kind)` with at least `depth` polynomials; extends
/// the shared cache under its write lock when needed.
pub fn structure_table(p: u64, kind: StructureKind, depth: usize) -> Result<Arc<StructureTable>, WittError> {
    if depth > MAX_TABLE_DEPTH {
        return Err(WittError::DepthLimit { depth, max: MAX_TABLE_DEPTH });
    }
    if let Some(e) = registry().read().expect("registry lock").get(&(p, kind)) {
        if e.table.depth() >= depth {
            return Ok(e.table.clone());
        }
    }
    let mut reg = registry().write().expect("registry lock");
    let entry = reg.entry((p, kind)).or_insert_with(|| Entry {
        table: Arc::new(StructureTable { p, kind, polys: vec![] }),
        chains: vec![],
    });
    if entry.table.depth() >= depth {
        return Ok(entry.table.clone());
    }
    let ring = kind.ring();
    let mut polys = entry.table.polys.clone();
    while entry.chains.len() < polys.len() {
        let i = entry.chains.len();
        entry.chains.push(vec![polys[i].clone()]);
    }
    for n in polys.len()..depth {
        let target = ghost_target(&ring, p, kind, n);
        let mut lower = ring.zero();
        for i in 0..n {
            extend_chain(&ring, p, &mut entry.chains[i], n - i);
            let t = ring.scale(&entry.chains[i][n - i], &Pow::pow(&BigInt::from(p), i as u32));
            lower = ring.add(&lower, &t);
        }
        let numer = ring.sub(&target, &lower);
        let pn = ring.from_int(&Pow::pow(&BigInt::from(p), n as u32));
        let s = ring.exact_div(&numer, &pn).map_err(|_| WittError::NotIntegral { index: n })?;
        entry.chains.push(vec![s.clone()]);
        polys.push(s);
    }
    entry.table = Arc::new(StructureTable { p, kind, polys });
    Ok(entry.table.clone())
}

/// Seeds the shared cache with a previously computed table.
pub fn install_table(table: StructureTable) {
    let mut reg = registry().write().expect("registry lock");
    let key = (table.p, table.kind);
    let deeper = reg.get(&key).map_or(true, |e| e.table.depth() < table.depth());
    if deeper {
        reg.insert(key, Entry { table: Arc::new(table), chains: vec![] });
    }
}

/// A table with coefficients mapped into a target ring, ready for repeated evaluation.
#[derive(Debug)]
pub(crate) struct Compiled<E> {
    pub depth: usize,
    polys: Vec<Vec<(E, Vec<(u8, u16)>)>>,
    /// `max_exp[d][v]`: largest exponent of `v` among the first `d + 1` polynomials
    max_exp: Vec<Vec<u16>>,
}

impl<E: Clone> Compiled<E> {
    pub fn new<R: Ring<Elem = E>>(ring: &R, table: &StructureTable) -> Self {
        let nvars = table.kind.var_names().len();
        let mut running = vec![0u16; nvars];
        let mut max_exp = Vec::new();
        let polys = table
            .polys
            .iter()
            .map(|q| {
                let terms: Vec<(E, Vec<(u8, u16)>)> = q
                    .terms()
                    .iter()
                    .map(|(m, c)| {
                        let factors: Vec<(u8, u16)> = m
                            .0
                            .iter()
                            .enumerate()
                            .filter(|(_, e)| **e > 0)
                            .map(|(v, e)| (v as u8, *e as u16))
                            .collect();
                        for (v, e) in &factors {
                            running[*v as usize] = running[*v as usize].max(*e);
                        }
                        (ring.from_int(c), factors)
                    })
                    .collect();
                max_exp.push(running.clone());
                terms
            })
            .collect();
        Self { depth: table.depth(), polys, max_exp }
    }

    /// Evaluates the first `depth` polynomials at `vals` (indexed by variable).
    pub fn eval<R: Ring<Elem = E>>(&self, ring: &R, vals: &[Option<&E>], depth: usize) -> Vec<E> {
        let limits = &self.max_exp[depth - 1];
        let powers: Vec<Vec<E>> = limits
            .iter()
            .enumerate()
            .map(|(v, max)| match vals.get(v).copied().flatten() {
                Some(x) if *max > 0 && !ring.is_zero(x) => {
                    let mut pw = Vec::with_capacity(*max as usize + 1);
                    pw.push(ring.one());
                    for k in 1..=*max as usize {
                        pw.push(if k == 1 { x.clone() } else { ring.mul(&pw[k - 1], x) });
                    }
                    pw
                }
                _ => Vec::new(),
            })
            .collect();
        self.polys[..depth]
            .iter()
            .map(|terms| {
                let mut acc = ring.zero();
                'terms: for (c, factors) in terms {
                    let mut t: Option<E> = None;
                    for (v, e) in factors {
                        let pw = &powers[*v as usize];
                        if pw.is_empty() {
                            continue 'terms;
                        }
                        let f = &pw[*e as usize];
                        t = Some(match t {
                            None => f.clone(),
                            Some(t) => ring.mul(&t, f),
                        });
                    }
                    let term = match t {
                        None => c.clone(),
                        Some(t) if ring.is_one(c) => t,
                        Some(t) => ring.mul(c, &t),
                    };
                    ring.add_assign(&mut acc, &term);
                }
                acc
            })
            .collect()
    }
}
