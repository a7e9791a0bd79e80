//! Hilbert, Buchsbaum-Rim and fiber invariants of ideals and of direct sums
//! `M = I_1 ⊕ ... ⊕ I_r ⊆ R^r`.
//!
//! For such `M` the Rees algebra is `R[I_1 t_1, ..., I_r t_r]`, so
//!
//! ```text
//! BF_M(n)     = Σ_{|α| = n} ℓ(R / I_1^{α_1} ··· I_r^{α_r})
//! μ(R_n(M))   = Σ_{|α| = n} μ(I_1^{α_1} ··· I_r^{α_r})
//! ```
//!
//! Repeated summands are grouped: with distinct ideals `J_1..J_k` occurring
//! `u_1..u_k` times, a tuple `(i_1..i_k)` stands for
//! `Π C(i_j + u_j - 1, u_j - 1)` compositions `α`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{
    choose, fit_polynomial, BinomialPolynomial, Convention, Fit, IntegerSequenceWindow,
};
use crate::num_json;
use crate::ring::{Ideal, Ring};

/// `M = I_1 ⊕ ... ⊕ I_r` inside `F = R^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSumModule {
    ring: Arc<Ring>,
    summands: Vec<Ideal>,
}

impl DirectSumModule {
    pub fn new(summands: Vec<Ideal>) -> Result<Self> {
        let first = summands
            .first()
            .ok_or_else(|| Error::InvalidIdeal("a module needs at least one summand".into()))?;
        let ring = first.ring().clone();
        for s in &summands {
            if **s.ring() != *ring {
                return Err(Error::RingMismatch);
            }
            if s.is_unit() {
                return Err(Error::InvalidIdeal("summands must be proper ideals".into()));
            }
            if !s.is_m_primary() {
                return Err(Error::InfiniteColength(s.to_string()));
            }
        }
        Ok(DirectSumModule { ring, summands })
    }

    /// `I^{⊕r}`.
    pub fn copies(ideal: &Ideal, r: usize) -> Result<Self> {
        Self::new(vec![ideal.clone(); r])
    }

    /// `I^{⊕u} ⊕ J^{⊕v}`.
    pub fn mixed(i: &Ideal, u: usize, j: &Ideal, v: usize) -> Result<Self> {
        let mut s = vec![i.clone(); u];
        s.extend(std::iter::repeat_n(j.clone(), v));
        Self::new(s)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn summands(&self) -> &[Ideal] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    /// `ℓ(F/M) = Σ ℓ(R/I_k)`.
    pub fn len_f_mod_m(&self) -> Result<u64> {
        self.summands.iter().map(|s| s.colength()).sum()
    }

    /// `μ(M) = Σ μ(I_k)`.
    pub fn min_gens(&self) -> Result<usize> {
        self.summands.iter().map(|s| s.min_gens()).sum()
    }

    /// Distinct summands in order of first appearance, with multiplicities.
    pub fn groups(&self) -> (Vec<Ideal>, Vec<usize>) {
        let mut distinct: Vec<Ideal> = Vec::new();
        let mut mult: Vec<usize> = Vec::new();
        for s in &self.summands {
            match distinct.iter().position(|d| d == s) {
                Some(i) => mult[i] += 1,
                None => {
                    distinct.push(s.clone());
                    mult.push(1);
                }
            }
        }
        (distinct, mult)
    }
}

impl std::fmt::Display for DirectSumModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" (+) "))
    }
}

/// All `k`-tuples of non-negative integers summing to `n`, in lexicographic order.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<u32>> {
    fn go(n: usize, k: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 1 {
            prefix.push(n as u32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for i in 0..=n {
            prefix.push(i as u32);
            go(n - i, k - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        go(n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Evaluates `BF_M(n)` and `μ(R_n(M))` degree by degree.
///
/// Mixed products `Π J_j^{i_j}` of total degree `n` are built from degree
/// `n - 1` by one multiplication; only the top layer is kept in memory.
pub struct ModuleEvaluator {
    distinct: Vec<Ideal>,
    mult: Vec<usize>,
    layer: HashMap<Vec<u32>, Ideal>,
    bf: Vec<BigInt>,
    fiber: Vec<BigInt>,
}

impl ModuleEvaluator {
    pub fn new(module: &DirectSumModule) -> Self {
        let (distinct, mult) = module.groups();
        let mut layer = HashMap::new();
        layer.insert(vec![0; distinct.len()], Ideal::unit(module.ring()));
        ModuleEvaluator {
            distinct,
            mult,
            layer,
            bf: vec![BigInt::zero()],
            fiber: vec![BigInt::from(1)],
        }
    }

    pub fn computed_up_to(&self) -> usize {
        self.bf.len() - 1
    }

    fn weight(&self, t: &[u32]) -> BigInt {
        t.iter()
            .zip(&self.mult)
            .map(|(&i, &u)| choose(i as usize + u - 1, u - 1))
            .product()
    }

    pub fn extend_to(&mut self, n_max: usize) -> Result<()> {
        while self.computed_up_to() < n_max {
            let n = self.computed_up_to() + 1;
            let tuples = compositions(n, self.distinct.len());
            let prev = &self.layer;
            let distinct = &self.distinct;
            let built: Vec<(Vec<u32>, Ideal, u64, usize)> = tuples
                .into_par_iter()
                .map(|t| {
                    let j = t.iter().rposition(|&x| x > 0).expect("n >= 1");
                    let mut parent = t.clone();
                    parent[j] -= 1;
                    let p = prev[&parent].product(&distinct[j])?;
                    let len = p.colength()?;
                    let mu = p.min_gens()?;
                    Ok((t, p, len, mu))
                })
                .collect::<Result<_>>()?;
            let mut bf = BigInt::zero();
            let mut fiber = BigInt::zero();
            let mut layer = HashMap::with_capacity(built.len());
            for (t, p, len, mu) in built {
                let w = self.weight(&t);
                bf += &w * BigInt::from(len);
                fiber += &w * BigInt::from(mu);
                layer.insert(t, p);
            }
            self.layer = layer;
            self.bf.push(bf);
            self.fiber.push(fiber);
        }
        Ok(())
    }

    pub fn bf_values(&self) -> &[BigInt] {
        &self.bf
    }

    pub fn fiber_values(&self) -> &[BigInt] {
        &self.fiber
    }
}

/// `BF_M(n) = ℓ(S_n(F)/R_n(M))`.
pub fn bf_value(module: &DirectSumModule, n: usize) -> Result<BigInt> {
    let mut ev = ModuleEvaluator::new(module);
    ev.extend_to(n)?;
    Ok(ev.bf[n].clone())
}

/// `H(F(M), n) = μ(R_n(M))`.
pub fn fiber_value(module: &DirectSumModule, n: usize) -> Result<BigInt> {
    let mut ev = ModuleEvaluator::new(module);
    ev.extend_to(n)?;
    Ok(ev.fiber[n].clone())
}

/// Window and retry policy for fits and reduction searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FitConfig {
    /// Initial window end; `None` means `4(d + r)`.
    pub n_max: Option<usize>,
    pub verify_window: usize,
    /// Largest window end tried after doubling.
    pub ceiling: usize,
    pub s_max: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            n_max: None,
            verify_window: 3,
            ceiling: 60,
            s_max: 20,
        }
    }
}

impl FitConfig {
    pub fn initial_n_max(&self, dim: usize, rank: usize) -> usize {
        self.n_max.unwrap_or(4 * (dim + rank)).min(self.ceiling.max(1))
    }
}

/// Fits `window(n_max)` by `convention`, doubling `n_max` up to the ceiling while
/// the differences have not stabilized.
fn fit_with_retry<F>(cfg: &FitConfig, start: usize, mut window: F, conventions: &[Convention])
    -> Result<(Vec<Fit>, usize)>
where
    F: FnMut(usize) -> Result<Vec<IntegerSequenceWindow>>,
{
    let mut n_max = start;
    loop {
        let windows = window(n_max)?;
        let fits: Result<Vec<Fit>> = windows
            .iter()
            .zip(conventions)
            .map(|(w, &c)| fit_polynomial(w, c, cfg.verify_window))
            .collect();
        match fits {
            Ok(f) => return Ok((f, n_max)),
            Err(e) if e.is_not_stabilized() && n_max < cfg.ceiling => {
                n_max = (2 * n_max).min(cfg.ceiling);
            }
            Err(e) => return Err(e),
        }
    }
}

/// The full invariant record of a direct-sum module.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleInvariants {
    pub dim: usize,
    pub rank: usize,
    /// Buchsbaum-Rim coefficients `br_0 .. br_{d+r-1}`.
    #[serde(serialize_with = "num_json::serialize_vec")]
    pub br: Vec<BigInt>,
    /// Fiber coefficients `f_0 .. f_{d+r-2}`.
    #[serde(serialize_with = "num_json::serialize_vec")]
    pub f: Vec<BigInt>,
    pub len_f_mod_m: u64,
    pub mu_m: usize,
    pub bf_postulation: i64,
    pub fiber_postulation: i64,
    pub n_max: usize,
}

impl ModuleInvariants {
    pub fn br(&self, i: usize) -> &BigInt {
        &self.br[i]
    }

    pub fn f0(&self) -> &BigInt {
        &self.f[0]
    }

    /// `br_1 - br_0 + ℓ(F/M) + μ(M) - (d + r - 2)`.
    pub fn vasconcelos_bound(&self) -> BigInt {
        &self.br[1] - &self.br[0] + BigInt::from(self.len_f_mod_m) + BigInt::from(self.mu_m)
            - BigInt::from(self.dim + self.rank - 2)
    }
}

pub fn module_invariants(module: &DirectSumModule, cfg: &FitConfig) -> Result<ModuleInvariants> {
    let (d, r) = (module.dim(), module.rank());
    let br_conv = Convention::BuchsbaumRim { dim: d, rank: r };
    let f_conv = Convention::Fiber { dim: d, rank: r };
    let mut ev = ModuleEvaluator::new(module);
    let (fits, n_max) = fit_with_retry(
        cfg,
        cfg.initial_n_max(d, r),
        |n| {
            ev.extend_to(n)?;
            Ok(vec![
                IntegerSequenceWindow::new(0, ev.bf[..=n].to_vec()),
                IntegerSequenceWindow::new(0, ev.fiber[..=n].to_vec()),
            ])
        },
        &[br_conv, f_conv],
    )?;
    Ok(ModuleInvariants {
        dim: d,
        rank: r,
        br: fits[0].polynomial.signed_coefficients().to_vec(),
        f: fits[1].polynomial.signed_coefficients().to_vec(),
        len_f_mod_m: module.len_f_mod_m()?,
        mu_m: module.min_gens()?,
        bf_postulation: fits[0].postulation,
        fiber_postulation: fits[1].postulation,
        n_max,
    })
}

/// Hilbert-Samuel and fiber data of a single ideal.
#[derive(Clone, Debug, Serialize)]
pub struct IdealInvariants {
    pub dim: usize,
    /// `e_0 .. e_d`.
    #[serde(serialize_with = "num_json::serialize_vec")]
    pub e: Vec<BigInt>,
    /// `f_0 .. f_{d-1}`.
    #[serde(serialize_with = "num_json::serialize_vec")]
    pub f: Vec<BigInt>,
    pub mu: usize,
    pub colength: u64,
    pub hilbert_postulation: i64,
    pub fiber_postulation: i64,
    /// Multiplicity read off the Newton polygon (`d = 2` only).
    pub newton_e0: Option<u64>,
    pub n_max: usize,
}

impl IdealInvariants {
    pub fn e0(&self) -> &BigInt {
        &self.e[0]
    }

    pub fn e1(&self) -> &BigInt {
        &self.e[1]
    }

    pub fn f0(&self) -> &BigInt {
        &self.f[0]
    }
}

pub fn ideal_invariants(ideal: &Ideal, cfg: &FitConfig) -> Result<IdealInvariants> {
    let m = module_invariants(&DirectSumModule::new(vec![ideal.clone()])?, cfg)?;
    let newton_e0 = match ideal.ring().dim() {
        2 => Some(ideal.newton_multiplicity()?),
        _ => None,
    };
    if let Some(ne) = newton_e0 {
        if BigInt::from(ne) != m.br[0] {
            return Err(Error::OracleMismatch(format!(
                "fitted e_0 = {} but Newton polygon gives {ne} for {ideal}",
                m.br[0]
            )));
        }
    }
    Ok(IdealInvariants {
        dim: m.dim,
        e: m.br,
        f: m.f,
        mu: m.mu_m,
        colength: m.len_f_mod_m,
        hilbert_postulation: m.bf_postulation,
        fiber_postulation: m.fiber_postulation,
        newton_e0,
        n_max: m.n_max,
    })
}

fn ensure_contained(outer: &Ideal, inner: &Ideal) -> Result<()> {
    if outer.contains(inner)? {
        Ok(())
    } else {
        Err(Error::NotContained {
            inner: inner.to_string(),
            outer: outer.to_string(),
        })
    }
}

/// Multiplicity when it is available without fitting.
fn quick_multiplicity(ideal: &Ideal) -> Option<u64> {
    match ideal.ring().dim() {
        1 => ideal.order().map(u64::from),
        2 => ideal.newton_multiplicity().ok(),
        _ => None,
    }
}

/// Least `s <= s_max` with `J I^s = I^{s+1}`, or `None`.
pub fn is_reduction(j: &Ideal, i: &Ideal, s_max: usize) -> Result<Option<usize>> {
    ensure_contained(i, j)?;
    if let (Some(a), Some(b)) = (quick_multiplicity(j), quick_multiplicity(i)) {
        if a != b {
            return Ok(None);
        }
    }
    let mut i_s = Ideal::unit(i.ring());
    for s in 0..=s_max {
        let next = i_s.product(i)?;
        if j.product(&i_s)?.equals(&next)? {
            return Ok(Some(s));
        }
        i_s = next;
    }
    Ok(None)
}

/// `red_J(I)`.
pub fn reduction_number(i: &Ideal, j: &Ideal, s_max: usize) -> Result<usize> {
    is_reduction(j, i, s_max)?.ok_or(Error::NotAReduction { s_max })
}

/// `ℓ(I^{n+1} / I J^n)`, the length of the degree-`n` piece of the Sally module.
pub fn sally_length(i: &Ideal, j: &Ideal, n: usize) -> Result<u64> {
    ensure_contained(i, j)?;
    let lower = i.product(&j.power(n)?)?.colength()?;
    let upper = i.power(n + 1)?.colength()?;
    Ok(lower - upper)
}

/// Fits `n ↦ ℓ(S_{n-1}) = sally_length(I, J, n - 1)`, `n >= 1`, in dimension two.
pub fn fit_sally_lengths(i: &Ideal, j: &Ideal, cfg: &FitConfig) -> Result<Fit> {
    if i.ring().dim() != 2 {
        return Err(Error::Unsupported("Sally lengths are fitted in dimension two".into()));
    }
    ensure_contained(i, j)?;
    let conv = Convention::Sally { rank: 1 };
    let mut values: Vec<BigInt> = Vec::new();
    // keep I J^{n-1} and I^n incrementally
    let mut ij = i.clone();
    let mut ipow = i.clone();
    let (fits, _) = fit_with_retry(
        cfg,
        cfg.initial_n_max(2, 1),
        |n_max| {
            while values.len() < n_max {
                values.push(BigInt::from(ij.colength()? - ipow.colength()?));
                ij = ij.product(j)?;
                ipow = ipow.product(i)?;
            }
            Ok(vec![IntegerSequenceWindow::new(1, values[..n_max].to_vec())])
        },
        &[conv],
    )?;
    Ok(fits.into_iter().next().expect("one window"))
}

/// Closed Hilbert polynomial of the Sally module in dimension two:
/// `[br_1 - br_0 + ℓ(F/M)] C(n+r-1, r) - br_2 C(n+r-2, r-1) + ... + (-1)^r br_{r+1}`,
/// whose value at `n` is `ℓ(S_{n-1})` for `n ≫ 0`.
#[derive(Clone, Debug, Serialize)]
pub struct SallyPolynomial {
    pub rank: usize,
    #[serde(serialize_with = "num_json::serialize_vec")]
    pub coefficients: Vec<BigInt>,
    /// `br_0 - br_1 <= ℓ(F/M)`; false marks a counterexample candidate.
    pub northcott_ok: bool,
    #[serde(skip)]
    pub polynomial: BinomialPolynomial,
}

impl SallyPolynomial {
    pub fn leading(&self) -> &BigInt {
        &self.coefficients[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_zero())
    }
}

pub fn sally_polynomial(inv: &ModuleInvariants) -> Result<SallyPolynomial> {
    if inv.dim != 2 {
        return Err(Error::Unsupported(format!(
            "the closed Sally polynomial needs dimension 2, got {}",
            inv.dim
        )));
    }
    let r = inv.rank;
    let mut coefficients = Vec::with_capacity(r + 1);
    coefficients.push(&inv.br[1] - &inv.br[0] + BigInt::from(inv.len_f_mod_m));
    coefficients.extend(inv.br[2..=r + 1].iter().cloned());
    let northcott_ok = !coefficients[0].is_negative();
    let polynomial = BinomialPolynomial::from_signed(Convention::Sally { rank: r }, coefficients.clone())?;
    Ok(SallyPolynomial {
        rank: r,
        coefficients,
        northcott_ok,
        polynomial,
    })
}
