//! p-typical Witt vectors of finite length.
//!
//! Ring operations, Frobenius and the `T_a` endomorphism are evaluated from
//! universal integer tables (see [`tables`]), so they work verbatim over
//! rings with p-torsion. Ghost inversion needs a p-torsion-free ring.
//!
//! Length conventions: operations that read ghost index `i + 1` (Frobenius,
//! [`Witt::f_lambda`], [`Witt::t_a_prime`]) map length `n + 1` to `n`; every
//! other operation preserves length.

pub mod cachefile;
mod tables;
mod teich;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::Pow;
use rand::RngCore;

use crate::exactring::{Ring, RingError};

pub use tables::{install_table, structure_table, StructureKind, StructureTable, MAX_TABLE_DEPTH};
pub use teich::{alpha_sequence, p_power_teichmuller, PowerTeichmuller};

use tables::Compiled;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WittError {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vectors for primes {0} and {1} cannot be combined")]
    PrimeMismatch(u64, u64),
    #[error("coordinate {index} does not belong to {ring}")]
    RingMismatch { index: usize, ring: String },
    #[error("ghost vector is not integral at index {index}")]
    NotIntegral { index: usize },
    #[error("depth {depth} exceeds the supported maximum {max}")]
    DepthLimit { depth: usize, max: usize },
    #[error("closed form disagrees with scalar multiplication at index {index}: {closed} vs {scalar}")]
    MismatchWithClosedForm { index: usize, closed: String, scalar: String },
    #[error("congruence mod p fails at index {index}")]
    CongruenceFailure { index: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Coordinates `(x_0, …, x_{n-1})` of a p-typical Witt vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WittVector<E> {
    pub p: u64,
    pub coords: Vec<E>,
}

impl<E> WittVector<E> {
    pub fn new(p: u64, coords: Vec<E>) -> Self {
        Self { p, coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

impl<E: Clone> WittVector<E> {
    pub fn truncate(&self, n: usize) -> Self {
        Self { p: self.p, coords: self.coords[..n.min(self.len())].to_vec() }
    }
}

/// Witt vector operations over a fixed ring and prime.
pub struct Witt<R: Ring> {
    ring: R,
    p: u64,
    compiled: RwLock<HashMap<StructureKind, Arc<Compiled<R::Elem>>>>,
}

impl<R: Ring> Clone for Witt<R> {
    fn clone(&self) -> Self {
        Self::new(self.ring.clone(), self.p)
    }
}

impl<R: Ring> fmt::Debug for Witt<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{}({})", self.p, self.ring.name())
    }
}

impl<R: Ring> Witt<R> {
    pub fn new(ring: R, p: u64) -> Self {
        Self { ring, p, compiled: RwLock::new(HashMap::new()) }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn vector(&self, coords: Vec<R::Elem>) -> WittVector<R::Elem> {
        WittVector::new(self.p, coords)
    }

    pub fn zero(&self, n: usize) -> WittVector<R::Elem> {
        self.vector(vec![self.ring.zero(); n])
    }

    pub fn one(&self, n: usize) -> WittVector<R::Elem> {
        self.teichmuller(&self.ring.one(), n)
    }

    pub fn sample(&self, n: usize, rng: &mut dyn RngCore) -> WittVector<R::Elem> {
        self.vector((0..n).map(|_| self.ring.sample(rng)).collect())
    }

    pub fn is_zero(&self, x: &WittVector<R::Elem>) -> bool {
        x.coords.iter().all(|c| self.ring.is_zero(c))
    }

    fn check(&self, x: &WittVector<R::Elem>) -> Result<(), WittError> {
        if x.p != self.p {
            return Err(WittError::PrimeMismatch(self.p, x.p));
        }
        if let Some(index) = x.coords.iter().position(|c| !self.ring.owns(c)) {
            return Err(WittError::RingMismatch { index, ring: self.ring.name() });
        }
        Ok(())
    }

    fn check_pair(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<(), WittError> {
        self.check(x)?;
        self.check(y)?;
        if x.len() != y.len() {
            return Err(WittError::LengthMismatch { expected: x.len(), got: y.len() });
        }
        Ok(())
    }

    fn compiled(&self, kind: StructureKind, depth: usize) -> Result<Arc<Compiled<R::Elem>>, WittError> {
        if let Some(c) = self.compiled.read().expect("compiled lock").get(&kind) {
            if c.depth >= depth {
                return Ok(c.clone());
            }
        }
        let table = structure_table(self.p, kind, depth)?;
        let c = Arc::new(Compiled::new(&self.ring, &table));
        self.compiled.write().expect("compiled lock").insert(kind, c.clone());
        Ok(c)
    }

    fn apply2(
        &self,
        kind: StructureKind,
        first: &[R::Elem],
        second: &[R::Elem],
        depth: usize,
    ) -> Result<Vec<R::Elem>, WittError> {
        if depth == 0 {
            return Ok(vec![]);
        }
        let table = self.compiled(kind, depth)?;
        let mut vals: Vec<Option<&R::Elem>> = vec![None; 2 * depth];
        for i in 0..depth {
            vals[kind.first(i)] = first.get(i);
            vals[kind.second(i)] = second.get(i);
        }
        Ok(table.eval(&self.ring, &vals, depth))
    }

    fn apply1(&self, kind: StructureKind, x: &[R::Elem], depth: usize) -> Result<Vec<R::Elem>, WittError> {
        if depth == 0 {
            return Ok(vec![]);
        }
        let table = self.compiled(kind, depth)?;
        let vals: Vec<Option<&R::Elem>> = x.iter().map(Some).collect();
        Ok(table.eval(&self.ring, &vals, depth))
    }

    /// Ghost components `Φ_0(x), …, Φ_{n-1}(x)`.
    pub fn ghost(&self, x: &WittVector<R::Elem>) -> Vec<R::Elem> {
        let r = &self.ring;
        (0..x.len())
            .map(|n| {
                let mut acc = r.zero();
                for i in 0..=n {
                    let t = r.pow(&x.coords[i], self.p.pow((n - i) as u32));
                    r.add_assign(&mut acc, &r.scale_int(&t, &Pow::pow(&BigInt::from(self.p), i as u32)));
                }
                acc
            })
            .collect()
    }

    /// Solves the ghost equations step by step; needs `p`-torsion-free coefficients.
    pub fn ghost_invert(&self, w: &[R::Elem]) -> Result<WittVector<R::Elem>, WittError> {
        let r = &self.ring;
        let mut coords: Vec<R::Elem> = Vec::with_capacity(w.len());
        for (n, wn) in w.iter().enumerate() {
            let mut rest = wn.clone();
            for (i, xi) in coords.iter().enumerate() {
                let t = r.pow(xi, self.p.pow((n - i) as u32));
                rest = r.sub(&rest, &r.scale_int(&t, &Pow::pow(&BigInt::from(self.p), i as u32)));
            }
            let pn = r.from_int(&Pow::pow(&BigInt::from(self.p), n as u32));
            coords.push(r.exact_div(&rest, &pn).map_err(|_| WittError::NotIntegral { index: n })?);
        }
        Ok(self.vector(coords))
    }

    pub fn add(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check_pair(x, y)?;
        Ok(self.vector(self.apply2(StructureKind::Sum, &x.coords, &y.coords, x.len())?))
    }

    pub fn mul(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check_pair(x, y)?;
        Ok(self.vector(self.apply2(StructureKind::Product, &x.coords, &y.coords, x.len())?))
    }

    pub fn neg(&self, x: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(x)?;
        Ok(self.vector(self.apply1(StructureKind::Neg, &x.coords, x.len())?))
    }

    pub fn sub(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.add(x, &self.neg(y)?)
    }

    /// `k·x` by repeated doubling.
    pub fn scalar_mul(&self, k: u64, x: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(x)?;
        let mut acc = self.zero(x.len());
        let mut base = x.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Length `n + 1` to length `n`, with `Φ_i(F x) = Φ_{i+1}(x)`.
    pub fn frobenius(&self, x: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(x)?;
        if x.is_empty() {
            return Err(WittError::LengthMismatch { expected: 1, got: 0 });
        }
        Ok(self.vector(self.apply1(StructureKind::Frobenius, &x.coords, x.len() - 1)?))
    }

    /// `(0, x_0, …, x_{n-2})`.
    pub fn verschiebung(&self, x: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        let mut coords = Vec::with_capacity(x.len());
        if !x.is_empty() {
            coords.push(self.ring.zero());
            coords.extend_from_slice(&x.coords[..x.len() - 1]);
        }
        WittVector::new(x.p, coords)
    }

    /// `(λ, 0, …, 0)` of length `n`.
    pub fn teichmuller(&self, lambda: &R::Elem, n: usize) -> WittVector<R::Elem> {
        let mut coords = vec![self.ring.zero(); n];
        if n > 0 {
            coords[0] = lambda.clone();
        }
        self.vector(coords)
    }

    /// `[λ]·x`, coordinates `λ^{p^i} x_i`.
    pub fn teich_scale(&self, lambda: &R::Elem, x: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        let mut pw = lambda.clone();
        let coords = x
            .coords
            .iter()
            .map(|c| {
                let out = self.ring.mul(&pw, c);
                pw = self.ring.pow(&pw, self.p);
                out
            })
            .collect();
        WittVector::new(x.p, coords)
    }

    /// `F^{(λ)} = F − [λ^{p−1}]`, length `n + 1` to `n`.
    pub fn f_lambda(&self, x: &WittVector<R::Elem>, lambda: &R::Elem) -> Result<WittVector<R::Elem>, WittError> {
        let fx = self.frobenius(x)?;
        let scaled = self.teich_scale(&self.ring.pow(lambda, self.p - 1), &x.truncate(fx.len()));
        self.sub(&fx, &scaled)
    }

    /// The additive map with `Φ_n(T_a x) = Σ_k p^k a_k^{p^{n−k}} Φ_{n−k}(x)`.
    pub fn t_a(&self, a: &WittVector<R::Elem>, x: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(a)?;
        self.check(x)?;
        if a.p != x.p {
            return Err(WittError::PrimeMismatch(a.p, x.p));
        }
        if a.len() < x.len() {
            return Err(WittError::LengthMismatch { expected: x.len(), got: a.len() });
        }
        Ok(self.vector(self.apply2(StructureKind::TA, &a.coords, &x.coords, x.len())?))
    }

    /// `F^{(λ)} ∘ T_a`, length `n + 1` to `n`.
    pub fn t_a_prime(
        &self,
        a: &WittVector<R::Elem>,
        x: &WittVector<R::Elem>,
        lambda: &R::Elem,
    ) -> Result<WittVector<R::Elem>, WittError> {
        self.f_lambda(&self.t_a(a, x)?, lambda)
    }

    pub fn fmt_vector(&self, x: &WittVector<R::Elem>) -> String {
        let parts: Vec<String> = x.coords.iter().map(|c| self.ring.fmt_elem(c)).collect();
        format!("({})", parts.join(", "))
    }
}
