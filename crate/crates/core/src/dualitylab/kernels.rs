//! Exhaustive comparison of `Ker(F^{(λ)}∘T_a)` and `Ker(F^{(λ^{p^l})})` on a window.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::exactring::{Ring, RingElement};
use crate::par::{digits, map_range, Exec};
use crate::wittcore::Witt;

use super::{check_divisibility, DualityError, DualityInstance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    /// Coordinates of the enumerated vectors (`n + 1` in `W_{n+1} → W_n`).
    pub window: usize,
    pub vectors: usize,
    pub kernel_twisted: usize,
    pub kernel_frobenius: usize,
    pub equal: bool,
    /// Smallest vector (coordinate 0 most significant) in exactly one kernel.
    pub counterexample: Option<String>,
    /// Distinct values of `F^{(λ^{p^l})}` seen.
    pub fibers: usize,
    /// `F^{(λ)}∘T_a` is constant on every fiber of `F^{(λ^{p^l})}`.
    pub factors_through: bool,
    pub factorization_counterexample: Option<String>,
    /// `Ker(F^{(λ^{p^l})}) ⊆ Ker(F^{(λ)}∘T_a)` on the window.
    pub frobenius_in_twisted: bool,
    /// Both kernels enumerated up to `l` coordinates deeper, then projected
    /// back onto the window; `None` when the deeper grid is too large.
    pub projected: Option<ProjectedKernels>,
}

impl KernelReport {
    pub fn passed(&self) -> bool {
        self.equal && self.factors_through
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectedKernels {
    pub enumerated: usize,
    pub kernel_twisted: usize,
    pub kernel_frobenius: usize,
    pub equal: bool,
}

/// Largest grid enumerated for the projected comparison.
pub const PROJECTION_LIMIT: usize = 1 << 20;

struct Row {
    digits: Vec<usize>,
    frob: Vec<RingElement>,
    twisted: Vec<RingElement>,
}

fn grid(inst: &DualityInstance, n: usize, exec: Exec) -> Result<(Vec<RingElement>, Vec<Row>), DualityError> {
    let div = check_divisibility(inst, n)?;
    let base = &inst.base;
    let elems = base.elements()?;
    let q = elems.len();
    let witt = Witt::new(base.clone(), inst.p);
    let a = witt.vector(div.a_base);
    let lam_pl = base.pow(&inst.lambda_base, inst.p_power());
    let rows = map_range(exec, q.pow(n as u32), |i| -> Result<Row, DualityError> {
        let d = digits(i, q, n);
        let x = witt.vector(d.iter().map(|j| elems[*j].clone()).collect());
        let frob = witt.f_lambda(&x, &lam_pl)?.coords;
        let twisted = witt.f_lambda(&witt.t_a(&a, &x)?, &inst.lambda_base)?.coords;
        Ok(Row { digits: d, frob, twisted })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    Ok((elems, rows))
}

fn projected_at(inst: &DualityInstance, n: usize, extra: usize, exec: Exec) -> Result<ProjectedKernels, DualityError> {
    let (_, rows) = grid(inst, n + extra, exec)?;
    let base = &inst.base;
    let is_zero = |v: &[RingElement]| v.iter().all(|c| base.is_zero(c));
    let project = |zero: &dyn Fn(&Row) -> bool| -> BTreeSet<&[usize]> {
        rows.iter().filter(|r| zero(r)).map(|r| &r.digits[..n]).collect()
    };
    let twisted = project(&|r| is_zero(&r.twisted));
    let frobenius = project(&|r| is_zero(&r.frob));
    Ok(ProjectedKernels {
        enumerated: n + extra,
        kernel_twisted: twisted.len(),
        kernel_frobenius: frobenius.len(),
        equal: twisted == frobenius,
    })
}

/// First depth `n + e`, `1 ≤ e ≤ l`, at which the projections agree, or the
/// deepest one within [`PROJECTION_LIMIT`].
fn projected(inst: &DualityInstance, n: usize, q: usize, exec: Exec) -> Result<Option<ProjectedKernels>, DualityError> {
    let mut last = None;
    for extra in 1..=inst.l as usize {
        if q.checked_pow((n + extra) as u32).is_none_or(|m| m > PROJECTION_LIMIT) {
            break;
        }
        let r = projected_at(inst, n, extra, exec)?;
        let done = r.equal;
        last = Some(r);
        if done {
            break;
        }
    }
    Ok(last)
}

pub fn lemma1_kernels(inst: &DualityInstance, exec: Exec) -> Result<KernelReport, DualityError> {
    let n = inst.window;
    let base = &inst.base;
    let (elems, rows) = grid(inst, n, exec)?;
    let witt = Witt::new(base.clone(), inst.p);
    let is_zero = |v: &[RingElement]| v.iter().all(|c| base.is_zero(c));
    let fmt = |d: &[usize]| witt.fmt_vector(&witt.vector(d.iter().map(|j| elems[*j].clone()).collect()));
    let mut kernel_twisted = 0;
    let mut kernel_frobenius = 0;
    let mut frobenius_in_twisted = true;
    let mut odd: Option<&Row> = None;
    let mut fibers: HashMap<&[RingElement], &Row> = HashMap::new();
    let mut clash: Option<&Row> = None;
    for r in &rows {
        let (zt, zf) = (is_zero(&r.twisted), is_zero(&r.frob));
        kernel_twisted += zt as usize;
        kernel_frobenius += zf as usize;
        frobenius_in_twisted &= zt || !zf;
        if zt != zf && odd.is_none_or(|o| r.digits < o.digits) {
            odd = Some(r);
        }
        match fibers.get(r.frob.as_slice()) {
            Some(rep) if rep.twisted != r.twisted => {
                if clash.is_none_or(|c| r.digits < c.digits) {
                    clash = Some(r);
                }
            }
            Some(_) => {}
            None => {
                fibers.insert(&r.frob, r);
            }
        }
    }
    Ok(KernelReport {
        window: n,
        vectors: rows.len(),
        kernel_twisted,
        kernel_frobenius,
        equal: odd.is_none(),
        counterexample: odd.map(|r| fmt(&r.digits)),
        fibers: fibers.len(),
        factors_through: clash.is_none(),
        factorization_counterexample: clash.map(|r| fmt(&r.digits)),
        frobenius_in_twisted,
        projected: projected(inst, n, elems.len(), exec)?,
    })
}
