//! Structured verdicts for the inequalities and identities relating fiber
//! multiplicities, Buchsbaum-Rim coefficients and reduction numbers.
//!
//! Every check returns a [`CheckReport`]; computation failures become an
//! `INAPPLICABLE` verdict carrying the reason, so a batch never aborts on a
//! single instance.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::growth::choose;
use crate::invariants::{
    ideal_invariants, is_reduction, module_invariants, sally_polynomial, DirectSumModule,
    FitConfig, IdealInvariants, ModuleEvaluator, ModuleInvariants,
};
use crate::num_json::{self, to_value};
use crate::ring::Ideal;

/// Attached to every report: statements phrased through `red(M)` are only
/// exercised through ideal-level reductions.
pub const MODULE_REDUCTION_NOTE: &str =
    "module reduction numbers are not computed; reduction data is taken at the ideal level";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Equality,
    Violated,
    Inapplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// The fitting window never stabilized.
    NotStabilized,
    /// Invalid or unsupported input.
    Input,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_name: String,
    pub inputs: String,
    #[serde(serialize_with = "num_json::serialize_opt")]
    pub lhs: Option<BigInt>,
    #[serde(serialize_with = "num_json::serialize_opt")]
    pub rhs: Option<BigInt>,
    #[serde(serialize_with = "num_json::serialize_opt")]
    pub slack: Option<BigInt>,
    pub verdict: Verdict,
    pub witness: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<String>,
}

impl CheckReport {
    fn new(name: &str, inputs: String) -> Self {
        CheckReport {
            check_name: name.into(),
            inputs,
            lhs: None,
            rhs: None,
            slack: None,
            verdict: Verdict::Inapplicable,
            witness: BTreeMap::new(),
            reason: None,
            failure: None,
            note: Some(MODULE_REDUCTION_NOTE.into()),
            replay: None,
        }
    }

    /// `lhs <= rhs` with slack `rhs - lhs`.
    fn inequality(mut self, lhs: BigInt, rhs: BigInt) -> Self {
        let slack = &rhs - &lhs;
        self.verdict = if slack.is_zero() {
            Verdict::Equality
        } else if slack.is_positive() {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self.slack = Some(slack);
        self
    }

    /// `lhs = rhs` with slack `|lhs - rhs|`.
    fn equality(mut self, lhs: BigInt, rhs: BigInt) -> Self {
        let slack = (&lhs - &rhs).abs();
        self.verdict = if slack.is_zero() {
            Verdict::Equality
        } else {
            Verdict::Violated
        };
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self.slack = Some(slack);
        self
    }

    fn inapplicable(mut self, reason: impl Into<String>) -> Self {
        self.verdict = Verdict::Inapplicable;
        self.reason = Some(reason.into());
        self.failure = None;
        self
    }

    /// A report for a check that was not run on these inputs.
    pub fn not_run(name: &str, inputs: String, reason: impl Into<String>) -> Self {
        CheckReport::new(name, inputs).inapplicable(reason)
    }

    fn failed(name: &str, inputs: String, err: Error) -> Self {
        let mut r = CheckReport::new(name, inputs);
        r.failure = Some(if err.is_not_stabilized() {
            FailureKind::NotStabilized
        } else {
            FailureKind::Input
        });
        r.reason = Some(err.to_string());
        r
    }

    fn witness(&mut self, key: &str, value: Value) {
        self.witness.insert(key.into(), value);
    }

    pub fn is_violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    pub fn not_stabilized(&self) -> bool {
        self.failure == Some(FailureKind::NotStabilized)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn run_check<F>(name: &str, inputs: String, body: F) -> CheckReport
where
    F: FnOnce(CheckReport) -> Result<CheckReport>,
{
    match body(CheckReport::new(name, inputs.clone())) {
        Ok(r) => r,
        Err(e) => CheckReport::failed(name, inputs, e),
    }
}

fn module_inputs(m: &DirectSumModule) -> String {
    format!("R = {}; M = {}", m.ring(), m)
}

fn pair_inputs(i: &Ideal, j: &Ideal) -> String {
    format!("R = {}; I = {}; J = {}", i.ring(), i, j)
}

fn big(v: impl Into<BigInt>) -> BigInt {
    v.into()
}

fn module_witness(r: &mut CheckReport, inv: &ModuleInvariants) {
    r.witness("invariants", serde_json::to_value(inv).expect("serializes"));
}

fn ideal_witness(r: &mut CheckReport, key: &str, inv: &IdealInvariants) {
    r.witness(key, serde_json::to_value(inv).expect("serializes"));
}

/// `f_0(M) <= br_1(M) - br_0(M) + ℓ(F/M) + μ(M) - (d + r - 2)`.
pub fn check_vasconcelos(m: &DirectSumModule, cfg: &FitConfig) -> CheckReport {
    run_check("vasconcelos", module_inputs(m), |mut r| {
        let inv = module_invariants(m, cfg)?;
        module_witness(&mut r, &inv);
        r.witness("dim", json!(inv.dim));
        let mut r = r.inequality(inv.f0().clone(), inv.vasconcelos_bound());
        if r.verdict == Verdict::Violated && inv.dim >= 2 {
            r.witness("counterexample_candidate", json!(true));
        }
        Ok(r)
    })
}

/// `br_0(M) - br_1(M) <= ℓ(F/M)` in dimension two, with equality flagged.
pub fn check_northcott_equality(m: &DirectSumModule, cfg: &FitConfig) -> CheckReport {
    run_check("northcott", module_inputs(m), |r| {
        if m.dim() != 2 {
            return Ok(r.inapplicable(format!("stated for d = 2, ring has d = {}", m.dim())));
        }
        let inv = module_invariants(m, cfg)?;
        let sally = sally_polynomial(&inv)?;
        let mut r = r.inequality(&inv.br[0] - &inv.br[1], big(inv.len_f_mod_m));
        module_witness(&mut r, &inv);
        r.witness("sally_polynomial", serde_json::to_value(&sally).expect("serializes"));
        if r.verdict == Verdict::Violated {
            r.witness("counterexample_candidate", json!(true));
        }
        Ok(r)
    })
}

fn require_parameter_reduction(i: &Ideal, j: &Ideal, cfg: &FitConfig) -> Result<std::result::Result<usize, String>> {
    let d = i.ring().dim();
    let mu_j = j.min_gens()?;
    if mu_j != d {
        return Ok(Err(format!("J needs {d} generators to be a minimal reduction, has {mu_j}")));
    }
    Ok(match is_reduction(j, i, cfg.s_max)? {
        Some(s) => Ok(s),
        None => Err(format!("J is not a reduction of I within s <= {}", cfg.s_max)),
    })
}

/// Terms `ℓ(I^i / (J I^{i-1} + m I^i))` for `i = 0..=b`.
fn reduction_sum_terms(i: &Ideal, j: &Ideal, b: usize) -> Result<Vec<u64>> {
    let m = Ideal::maximal(i.ring());
    let mut terms = vec![1u64];
    let mut prev = Ideal::unit(i.ring());
    for _ in 1..=b {
        let cur = prev.product(i)?;
        let sub = j.product(&prev)?.sum(&m.product(&cur)?)?;
        terms.push(sub.colength()? - cur.colength()?);
        prev = cur;
    }
    Ok(terms)
}

/// Cohen-Macaulayness of `F(I)` through `f_0(I) = Σ_{i<=b} ℓ(I^i/(J I^{i-1} + m I^i))`.
///
/// The sum is the length of `F(I)` modulo the images of the generators of
/// `J`, a system of parameters, so `lhs <= rhs` always and equality holds
/// exactly when `F(I)` is Cohen-Macaulay.
pub fn check_cm_fiber_ideal(i: &Ideal, j: &Ideal, cfg: &FitConfig) -> CheckReport {
    run_check("cm_fiber", pair_inputs(i, j), |r| {
        let b = match require_parameter_reduction(i, j, cfg)? {
            Ok(b) => b,
            Err(why) => return Ok(r.inapplicable(why)),
        };
        let inv = ideal_invariants(i, cfg)?;
        let terms = reduction_sum_terms(i, j, b)?;
        let rhs: u64 = terms.iter().sum();

        // truncated numerator (1 - t)^d Σ μ(I^n) t^n
        let d = i.ring().dim();
        let mut ev = ModuleEvaluator::new(&DirectSumModule::new(vec![i.clone()])?);
        ev.extend_to(inv.n_max)?;
        let h = ev.fiber_values();
        let numerator: Vec<BigInt> = (0..h.len())
            .map(|k| {
                (0..=d.min(k))
                    .map(|s| {
                        let t = choose(d, s) * &h[k - s];
                        if s % 2 == 0 {
                            t
                        } else {
                            -t
                        }
                    })
                    .sum()
            })
            .collect();
        let series_matches = numerator
            .iter()
            .enumerate()
            .all(|(k, c)| *c == big(terms.get(k).copied().unwrap_or(0)));

        let mut r = r.inequality(inv.f0().clone(), big(rhs));
        ideal_witness(&mut r, "ideal", &inv);
        r.witness("reduction_number", json!(b));
        r.witness("reduction_sum_terms", json!(terms));
        let shown = (b + 3).min(numerator.len());
        r.witness(
            "series_numerator",
            Value::Array(numerator[..shown].iter().map(to_value).collect()),
        );
        r.witness("series_matches", json!(series_matches));
        r.witness("cohen_macaulay", json!(r.verdict == Verdict::Equality));
        if r.verdict == Verdict::Violated {
            r.witness("counterexample_candidate", json!(true));
        }
        r.note = Some(format!(
            "CM verdict via the reduction-sum criterion on the fiber cone; {MODULE_REDUCTION_NOTE}"
        ));
        Ok(r)
    })
}

/// `red_J(I) <= f_0 - μ + d` and, in dimension two, `red_J(I) <= e_1 - e_0 + ℓ(R/I) + 1`,
/// both under a Cohen-Macaulay fiber cone.
pub fn check_reduction_bound(i: &Ideal, j: &Ideal, cfg: &FitConfig) -> CheckReport {
    run_check("reduction_bound", pair_inputs(i, j), |r| {
        let cm = check_cm_fiber_ideal(i, j, cfg);
        let mut r = r;
        if cm.failure.is_some() {
            r.failure = cm.failure;
            r.reason = cm.reason;
            return Ok(r);
        }
        if cm.verdict != Verdict::Equality {
            let why = cm
                .reason
                .clone()
                .unwrap_or_else(|| "fiber cone is not Cohen-Macaulay".into());
            let mut r = r.inapplicable(why);
            r.witness("cm_verdict", json!(cm.verdict));
            return Ok(r);
        }
        let d = i.ring().dim();
        let inv = ideal_invariants(i, cfg)?;
        let red = cm.witness["reduction_number"].as_u64().expect("recorded");
        let lhs = big(red);
        let rhs_fiber = inv.f0() - big(inv.mu) + big(d);
        let fiber_ok = lhs <= rhs_fiber;

        if d != 2 {
            let mut r = r.inapplicable(format!(
                "the Hilbert-coefficient bound is stated for d = 2, ring has d = {d}"
            ));
            r.witness("reduction_number", json!(red));
            r.witness("rhs_fiber", to_value(&rhs_fiber));
            r.witness("fiber_bound_holds", json!(fiber_ok));
            return Ok(r);
        }
        let rhs_hilbert = inv.e1() - inv.e0() + big(inv.colength) + big(1);
        let rhs = rhs_fiber.clone().min(rhs_hilbert.clone());
        let mut r = r.inequality(lhs, rhs);
        r.witness("reduction_number", json!(red));
        r.witness("rhs_fiber", to_value(&rhs_fiber));
        r.witness("rhs_hilbert", to_value(&rhs_hilbert));
        ideal_witness(&mut r, "ideal", &inv);
        if r.verdict == Verdict::Violated {
            r.witness("counterexample_candidate", json!(true));
        }
        Ok(r)
    })
}

/// Closed formulas for `I^{⊕r}` in terms of the ideal's invariants.
pub struct SumFormulas {
    pub br0: BigInt,
    pub br1: BigInt,
    pub f0: BigInt,
    pub len: BigInt,
    pub mu: BigInt,
}

pub fn sum_formulas(ideal: &IdealInvariants, r: usize) -> SumFormulas {
    let d = ideal.dim;
    let br1_first = if r >= 2 {
        big(d as i64 - 1) * choose(d + r - 2, r - 2) * ideal.e0()
    } else {
        BigInt::zero()
    };
    SumFormulas {
        br0: choose(d + r - 1, r - 1) * ideal.e0(),
        br1: br1_first + choose(d + r - 2, r - 1) * ideal.e1(),
        f0: choose(d + r - 2, r - 1) * ideal.f0(),
        len: big(r as u64 * ideal.colength),
        mu: big(r * ideal.mu),
    }
}

/// Fitted invariants of `I^{⊕r}` against the closed formulas.
pub fn check_sum_formulas(i: &Ideal, r: usize, cfg: &FitConfig) -> CheckReport {
    let inputs = format!("R = {}; I = {}; r = {}", i.ring(), i, r);
    run_check("sum_formulas", inputs, |rep| {
        if r < 2 {
            return Ok(rep.inapplicable("needs rank r >= 2"));
        }
        let ideal = ideal_invariants(i, cfg)?;
        let module = module_invariants(&DirectSumModule::copies(i, r)?, cfg)?;
        let closed = sum_formulas(&ideal, r);
        let pairs = [
            ("br0", module.br[0].clone(), closed.br0),
            ("br1", module.br[1].clone(), closed.br1),
            ("f0", module.f[0].clone(), closed.f0),
            ("len_f_mod_m", big(module.len_f_mod_m), closed.len),
            ("mu_m", big(module.mu_m), closed.mu),
        ];
        let discrepancy: BigInt = pairs.iter().map(|(_, a, b)| (a - b).abs()).sum();
        let mut rep = rep.equality(discrepancy, BigInt::zero());
        for (k, fitted, formula) in &pairs {
            rep.witness(k, json!({ "fitted": to_value(fitted), "closed": to_value(formula) }));
        }
        ideal_witness(&mut rep, "ideal", &ideal);
        Ok(rep)
    })
}

/// `Λ` for `I^{⊕r}` from the closed formulas:
/// `(d-1)C(d+r-2,r-2)e_0 + C(d+r-2,r-1)e_1 - C(d+r-1,r-1)e_0 + r[ℓ(R/I)+μ(I)] - (d+r-2) - C(d+r-2,r-1)f_0(I)`.
pub fn lambda_closed(ideal: &IdealInvariants, r: usize) -> BigInt {
    let d = ideal.dim;
    let c = sum_formulas(ideal, r);
    &c.br1 - &c.br0 + &c.len + &c.mu - big((d + r - 2) as u64) - &c.f0
}

/// Whether `Λ = 0` is expected for a parameter ideal `I`, given `d`, `r` and `e_0`.
pub fn parameter_lambda_vanishes(d: usize, r: usize, e0: &BigInt) -> bool {
    if d == 2 {
        return true;
    }
    match r {
        0..=2 => true,
        3 => *e0 == big(1),
        _ => false,
    }
}

/// `M = I^{⊕u} ⊕ J^{⊕v}` with `J` a reduction of `I`: invariant transfer to
/// `M' = I^{⊕(u+v)}` and the inequality with its slack.
pub fn check_mixed_sum(i: &Ideal, j: &Ideal, u: usize, v: usize, cfg: &FitConfig) -> CheckReport {
    let inputs = format!("R = {}; I = {}; J = {}; u = {u}; v = {v}", i.ring(), i, j);
    run_check("mixed_sum", inputs, |rep| {
        let d = i.ring().dim();
        if d < 2 {
            return Ok(rep.inapplicable("stated for d >= 2"));
        }
        if u == 0 || v == 0 {
            return Ok(rep.inapplicable("needs u, v >= 1"));
        }
        let Some(s) = is_reduction(j, i, cfg.s_max)? else {
            return Ok(rep.inapplicable(format!(
                "J is not a reduction of I within s <= {}",
                cfg.s_max
            )));
        };
        let r = u + v;
        let m = module_invariants(&DirectSumModule::mixed(i, u, j, v)?, cfg)?;
        let mp = module_invariants(&DirectSumModule::copies(i, r)?, cfg)?;
        let ideal = ideal_invariants(i, cfg)?;
        let ideal_j_len = big(j.colength()?);
        let ideal_j_mu = big(j.min_gens()?);

        let transfer = m.br[0] == mp.br[0] && m.br[1] == mp.br[1] && m.f[0] == mp.f[0];
        let lambda = lambda_closed(&ideal, r);
        let lambda_fitted = mp.vasconcelos_bound() - mp.f0();
        let correction = big(v as u64)
            * (&ideal_j_len + &ideal_j_mu - big(ideal.colength) - big(ideal.mu));
        let slack_m = m.vasconcelos_bound() - m.f0();
        let consistent = lambda == lambda_fitted && slack_m == &lambda + &correction;

        let mut rep = rep.inequality(m.f0().clone(), m.vasconcelos_bound());
        rep.witness("reduction_number", json!(s));
        rep.witness("transfer_holds", json!(transfer));
        rep.witness(
            "transfer",
            json!({
                "br0": [to_value(&m.br[0]), to_value(&mp.br[0])],
                "br1": [to_value(&m.br[1]), to_value(&mp.br[1])],
                "f0": [to_value(&m.f[0]), to_value(&mp.f[0])],
            }),
        );
        rep.witness("lambda", to_value(&lambda));
        rep.witness("lambda_fitted", to_value(&lambda_fitted));
        rep.witness("j_correction", to_value(&correction));
        rep.witness("consistent", json!(consistent));
        rep.witness("module", serde_json::to_value(&m).expect("serializes"));
        rep.witness("module_all_i", serde_json::to_value(&mp).expect("serializes"));

        let mut parameter_ok = true;
        if ideal.mu == d {
            let expect_zero = parameter_lambda_vanishes(d, r, ideal.e0());
            parameter_ok = expect_zero == lambda.is_zero() && !lambda.is_negative();
            rep.witness(
                "parameter_case",
                json!({ "expected_zero": expect_zero, "observed_zero": lambda.is_zero() }),
            );
        }
        if !transfer || !consistent || lambda.is_negative() || !parameter_ok {
            rep.verdict = Verdict::Violated;
        }
        if rep.verdict == Verdict::Violated {
            rep.witness("counterexample_candidate", json!(true));
        }
        Ok(rep)
    })
}

/// Compares `Σ_{i+j=n} μ(I^i J^j)` with `n μ(I^n) + μ(J^n)` on a window.
/// Informational: `HOLDS` when the identity holds throughout, `INAPPLICABLE` otherwise.
pub fn check_prop_decomposition(i: &Ideal, j: &Ideal, n_max: usize, cfg: &FitConfig) -> CheckReport {
    run_check("prop_decomposition", pair_inputs(i, j), |rep| {
        if i.ring().dim() != 2 {
            return Ok(rep.inapplicable(format!(
                "stated for d = 2, ring has d = {}",
                i.ring().dim()
            )));
        }
        if is_reduction(j, i, cfg.s_max)?.is_none() {
            return Ok(rep.inapplicable("J is not a reduction of I"));
        }
        let mut sum_ev = ModuleEvaluator::new(&DirectSumModule::new(vec![i.clone(), j.clone()])?);
        let mut i_ev = ModuleEvaluator::new(&DirectSumModule::new(vec![i.clone()])?);
        let mut j_ev = ModuleEvaluator::new(&DirectSumModule::new(vec![j.clone()])?);
        sum_ev.extend_to(n_max)?;
        i_ev.extend_to(n_max)?;
        j_ev.extend_to(n_max)?;
        let mut rows = Vec::new();
        let mut matching = 0u64;
        for n in 0..=n_max {
            let lhs = sum_ev.fiber_values()[n].clone();
            let rhs = big(n as u64) * &i_ev.fiber_values()[n] + &j_ev.fiber_values()[n];
            if lhs == rhs {
                matching += 1;
            }
            rows.push(json!([n, to_value(&lhs), to_value(&rhs)]));
        }
        let window = big(n_max as u64 + 1);
        let holds = big(matching) == window;
        let mut rep = rep.inequality(big(matching), window);
        rep.verdict = if holds { Verdict::Holds } else { Verdict::Inapplicable };
        if !holds {
            rep.reason = Some("the decomposition identity fails on the window".into());
        }
        rep.witness("per_n", Value::Array(rows));
        rep.witness("ideals_equal", json!(i.equals(j)?));
        Ok(rep)
    })
}
