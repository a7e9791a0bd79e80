//! Seeded random instances and batch checking.
//!
//! Instance `k` of a sweep draws from `ChaCha8Rng` seeded with the sweep seed
//! on stream `k`, so every instance is reproducible on its own and the batch
//! can run in parallel.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{self, CheckReport, Verdict};
use crate::error::{Error, Result};
use crate::invariants::{is_reduction, module_invariants, sally_polynomial, DirectSumModule, FitConfig};
use crate::ring::{Exponent, Ideal, Ring};
use crate::runner::{Status, VERSION};
use crate::script::{Command, ReplayBuilder, Settings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum CheckKind {
    Vasconcelos,
    Northcott,
    CmFiber,
    ReductionBound,
    SumFormulas,
    MixedSum,
    PropDecomposition,
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Vasconcelos => "vasconcelos",
            CheckKind::Northcott => "northcott",
            CheckKind::CmFiber => "cm_fiber",
            CheckKind::ReductionBound => "reduction_bound",
            CheckKind::SumFormulas => "sum_formulas",
            CheckKind::MixedSum => "mixed_sum",
            CheckKind::PropDecomposition => "prop_decomposition",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    pub dim: usize,
    pub rank: usize,
    pub count: usize,
    pub seed: u64,
    /// Largest pure-power exponent (box side).
    pub max_exp: u32,
    /// Largest number of generators drawn per ideal, pure powers included.
    pub max_gens: usize,
    pub checks: Vec<CheckKind>,
    /// Draw `(I, J)` with `J` a reduction of `I` and build `I^{⊕u} ⊕ J^{⊕v}`.
    pub mixed: bool,
    #[serde(skip)]
    pub fit: FitConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            dim: 2,
            rank: 2,
            count: 10,
            seed: 0,
            max_exp: 4,
            max_gens: 4,
            checks: vec![CheckKind::Vasconcelos],
            mixed: false,
            fit: FitConfig::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidIdeal(m.into()));
        if !(1..=3).contains(&self.dim) {
            return bad("dimension must be 1, 2 or 3");
        }
        if !(1..=4).contains(&self.rank) {
            return bad("rank must lie in 1..=4");
        }
        if self.count == 0 {
            return bad("count must be at least 1");
        }
        if self.max_exp == 0 || self.max_exp > 12 {
            return bad("max exponent must lie in 1..=12");
        }
        if self.max_gens == 0 || self.max_gens > 12 {
            return bad("max generators must lie in 1..=12");
        }
        if self.mixed && self.rank < 2 {
            return bad("mixed mode needs rank >= 2");
        }
        Ok(())
    }
}

/// An `(I, J)` pair with `J` a reduction of `I`, and the copy counts of the mixed module.
#[derive(Clone, Debug)]
pub struct ReductionPair {
    pub i: Ideal,
    pub j: Ideal,
    pub u: usize,
    pub v: usize,
    pub reduction_number: usize,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub index: usize,
    pub module: DirectSumModule,
    pub pair: Option<ReductionPair>,
}

pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// A numerical semigroup with 2..=4 generators in `3..=12` and gcd 1.
pub fn random_semigroup<R: Rng>(rng: &mut R) -> Arc<Ring> {
    for _ in 0..64 {
        let k = rng.gen_range(2..=4);
        let mut gens: Vec<u32> = (0..k).map(|_| rng.gen_range(3..=12)).collect();
        gens.sort_unstable();
        gens.dedup();
        if gens.iter().fold(0, |g, &x| g.gcd(&x)) == 1 {
            if let Ok(r) = Ring::semigroup(&gens) {
                return r;
            }
        }
    }
    Ring::semigroup(&[3, 5]).expect("valid semigroup")
}

fn random_semigroup_ideal<R: Rng>(rng: &mut R, ring: &Arc<Ring>, max_gens: usize) -> Ideal {
    let s = ring.as_semigroup().expect("semigroup ring");
    let top = s.frobenius_bound() + 2 * s.multiplicity();
    let members: Vec<u32> = (1..=top).filter(|&v| s.contains(v)).collect();
    let k = rng.gen_range(1..=max_gens.min(members.len()));
    let vals: Vec<u32> = members.choose_multiple(rng, k).copied().collect();
    Ideal::from_valuations(ring, &vals).expect("members of the semigroup")
}

fn random_pure_powers<R: Rng>(rng: &mut R, d: usize, max_exp: u32) -> Vec<u32> {
    (0..d).map(|_| rng.gen_range(1..=max_exp)).collect()
}

fn power_ideal(ring: &Arc<Ring>, a: &[u32]) -> Ideal {
    let d = a.len();
    let gens = (0..d)
        .map(|k| {
            let mut e = vec![0; d];
            e[k] = a[k];
            e
        })
        .collect();
    Ideal::new(ring, gens).expect("pure powers")
}

/// An m-primary monomial ideal: pure powers `x_k^{a_k}` plus random monomials in the box.
fn random_box_ideal<R: Rng>(rng: &mut R, ring: &Arc<Ring>, max_exp: u32, max_gens: usize) -> Ideal {
    let d = ring.dim();
    let a = random_pure_powers(rng, d, max_exp);
    let extra = rng.gen_range(0..=max_gens.saturating_sub(d));
    let mut gens: Vec<Exponent> = power_ideal(ring, &a).generators().to_vec();
    for _ in 0..extra {
        let e: Exponent = a.iter().map(|&ak| rng.gen_range(0..ak)).collect();
        if e.iter().any(|&x| x > 0) {
            gens.push(e);
        }
    }
    Ideal::new(ring, gens).expect("proper monomial ideal")
}

/// `J = (x_k^{a_k})` and `I = J + ` monomials on or above the hyperplane `Σ e_k / a_k = 1`,
/// so `I` is integral over `J`.
fn random_pair<R: Rng>(rng: &mut R, ring: &Arc<Ring>, max_exp: u32, max_gens: usize) -> (Ideal, Ideal) {
    let d = ring.dim();
    if d == 1 {
        let i = random_semigroup_ideal(rng, ring, max_gens);
        let j = Ideal::from_valuations(ring, &[i.order().expect("semigroup ideal")]).expect("member");
        return (i, j);
    }
    let a = random_pure_powers(rng, d, max_exp);
    let j = power_ideal(ring, &a);
    let lcm = a.iter().fold(1u64, |l, &x| l.lcm(&(x as u64)));
    let extra = rng.gen_range(0..=max_gens.saturating_sub(d).max(1));
    let mut gens = j.generators().to_vec();
    for _ in 0..extra {
        let e: Exponent = a.iter().map(|&ak| rng.gen_range(0..ak)).collect();
        let weight: u64 = e.iter().zip(&a).map(|(&x, &ak)| x as u64 * (lcm / ak as u64)).sum();
        if weight >= lcm {
            gens.push(e);
        }
    }
    (Ideal::new(ring, gens).expect("proper"), j)
}

fn ring_for<R: Rng>(rng: &mut R, d: usize) -> Arc<Ring> {
    match d {
        1 => random_semigroup(rng),
        _ => Ring::standard_power_series(d).expect("d in 2..=3"),
    }
}

const PAIR_ATTEMPTS: usize = 16;

/// Deterministic in `(cfg.seed, index)`.
pub fn generate_instance(cfg: &SweepConfig, index: usize) -> Result<Instance> {
    cfg.validate()?;
    let mut rng = instance_rng(cfg.seed, index);
    let ring = ring_for(&mut rng, cfg.dim);
    if !cfg.mixed {
        let summands = (0..cfg.rank)
            .map(|_| match cfg.dim {
                1 => random_semigroup_ideal(&mut rng, &ring, cfg.max_gens),
                _ => random_box_ideal(&mut rng, &ring, cfg.max_exp, cfg.max_gens),
            })
            .collect();
        return Ok(Instance {
            index,
            module: DirectSumModule::new(summands)?,
            pair: None,
        });
    }
    let u = rng.gen_range(1..cfg.rank);
    let v = cfg.rank - u;
    for _ in 0..PAIR_ATTEMPTS {
        let (i, j) = random_pair(&mut rng, &ring, cfg.max_exp, cfg.max_gens);
        if let Some(s) = is_reduction(&j, &i, cfg.fit.s_max)? {
            return Ok(Instance {
                index,
                module: DirectSumModule::mixed(&i, u, &j, v)?,
                pair: Some(ReductionPair { i, j, u, v, reduction_number: s }),
            });
        }
    }
    Err(Error::NotAReduction { s_max: cfg.fit.s_max })
}

fn settings_of(fit: &FitConfig) -> Settings {
    let d = FitConfig::default();
    Settings {
        n_max: fit.n_max,
        verify_window: (fit.verify_window != d.verify_window).then_some(fit.verify_window),
        s_max: (fit.s_max != d.s_max).then_some(fit.s_max),
    }
}

fn run_check(cfg: &SweepConfig, inst: &Instance, kind: CheckKind) -> CheckReport {
    let fit = &cfg.fit;
    let mut replay = ReplayBuilder::new(inst.module.ring(), settings_of(fit));
    let pair = inst.pair.as_ref();
    let (mut report, command) = match (kind, pair) {
        (CheckKind::Vasconcelos, _) => (
            checks::check_vasconcelos(&inst.module, fit),
            Command::Vasconcelos { module: replay.module(&inst.module) },
        ),
        (CheckKind::Northcott, _) => (
            checks::check_northcott_equality(&inst.module, fit),
            Command::Northcott { module: replay.module(&inst.module) },
        ),
        (CheckKind::SumFormulas, _) => {
            let i = &inst.module.summands()[0];
            (
                checks::check_sum_formulas(i, cfg.rank, fit),
                Command::SumFormulas { i: replay.ideal(i), rank: cfg.rank },
            )
        }
        (_, None) => {
            return CheckReport::not_run(
                kind.name(),
                format!("R = {}; M = {}", inst.module.ring(), inst.module),
                "needs a reduction pair (mixed mode)",
            )
        }
        (CheckKind::CmFiber, Some(p)) => (
            checks::check_cm_fiber_ideal(&p.i, &p.j, fit),
            Command::CmFiber { i: replay.ideal(&p.i), j: replay.ideal(&p.j) },
        ),
        (CheckKind::ReductionBound, Some(p)) => (
            checks::check_reduction_bound(&p.i, &p.j, fit),
            Command::ReductionBound { i: replay.ideal(&p.i), j: replay.ideal(&p.j) },
        ),
        (CheckKind::MixedSum, Some(p)) => (
            checks::check_mixed_sum(&p.i, &p.j, p.u, p.v, fit),
            Command::MixedSum { i: replay.ideal(&p.i), j: replay.ideal(&p.j), u: p.u, v: p.v },
        ),
        (CheckKind::PropDecomposition, Some(p)) => (
            checks::check_prop_decomposition(&p.i, &p.j, fit.initial_n_max(2, 2), fit),
            Command::PropDecomposition { i: replay.ideal(&p.i), j: replay.ideal(&p.j) },
        ),
    };
    if report.verdict == Verdict::Violated {
        report.replay = Some(replay.finish(&command));
    }
    report
}

struct InstanceResult {
    value: Value,
    status: Status,
    reports: Vec<CheckReport>,
    sally_sign: Option<&'static str>,
    skipped: bool,
}

fn run_instance(cfg: &SweepConfig, index: usize) -> InstanceResult {
    let inst = match generate_instance(cfg, index) {
        Ok(i) => i,
        Err(e) => {
            return InstanceResult {
                value: json!({ "index": index, "skipped": true, "reason": e.to_string() }),
                status: Status::default(),
                reports: Vec::new(),
                sally_sign: None,
                skipped: true,
            }
        }
    };
    let mut status = Status::default();
    let reports: Vec<CheckReport> = cfg.checks.iter().map(|&k| run_check(cfg, &inst, k)).collect();
    for r in &reports {
        status.record_report(r);
    }
    let mut sally = Value::Null;
    let mut sally_sign = None;
    if cfg.dim == 2 {
        if let Ok(sp) = module_invariants(&inst.module, &cfg.fit).and_then(|m| sally_polynomial(&m)) {
            let lead = sp.leading().clone();
            sally_sign = Some(if lead.is_positive() {
                "positive"
            } else if lead.is_negative() {
                "negative"
            } else {
                "zero"
            });
            sally = serde_json::to_value(&sp).expect("serializes");
        }
    }
    let mut value = json!({
        "index": index,
        "ring": inst.module.ring().to_string(),
        "module": inst.module.to_string(),
        "reports": reports.iter().map(CheckReport::to_json).collect::<Vec<_>>(),
    });
    if let Some(p) = &inst.pair {
        value["pair"] = json!({
            "i": p.i.to_string(),
            "j": p.j.to_string(),
            "u": p.u,
            "v": p.v,
            "reduction_number": p.reduction_number,
        });
    }
    if !sally.is_null() {
        value["sally_polynomial"] = sally;
    }
    InstanceResult {
        value,
        status,
        reports,
        sally_sign,
        skipped: false,
    }
}

pub struct SweepOutcome {
    pub document: Value,
    pub exit_code: i32,
    pub reports: Vec<Vec<CheckReport>>,
}

pub fn run_sweep(cfg: &SweepConfig) -> SweepOutcome {
    if let Err(e) = cfg.validate() {
        return SweepOutcome {
            document: json!({ "version": VERSION, "error": e.to_string() }),
            exit_code: crate::runner::EXIT_INPUT,
            reports: Vec::new(),
        };
    }
    let results: Vec<InstanceResult> = (0..cfg.count)
        .into_par_iter()
        .map(|k| run_instance(cfg, k))
        .collect();

    let mut status = Status::default();
    let mut verdicts: BTreeMap<&str, BTreeMap<String, usize>> = BTreeMap::new();
    let mut signs: BTreeMap<&str, usize> = BTreeMap::new();
    let mut not_stabilized = 0usize;
    let mut skipped = 0usize;
    let mut candidates = Vec::new();
    for r in &results {
        status.merge(r.status);
        skipped += r.skipped as usize;
        if let Some(s) = r.sally_sign {
            *signs.entry(s).or_default() += 1;
        }
        for rep in &r.reports {
            let v = serde_json::to_value(rep.verdict).expect("serializes");
            *verdicts
                .entry(kind_name(&rep.check_name))
                .or_default()
                .entry(v.as_str().unwrap_or_default().to_string())
                .or_default() += 1;
            not_stabilized += rep.not_stabilized() as usize;
            if rep.verdict == Verdict::Violated {
                candidates.push(json!({ "index": r.value["index"], "check": rep.check_name }));
            }
        }
    }
    let document = json!({
        "version": VERSION,
        "config": cfg,
        "instances": results.iter().map(|r| &r.value).collect::<Vec<_>>(),
        "summary": {
            "instances": cfg.count,
            "skipped": skipped,
            "not_stabilized": not_stabilized,
            "verdicts": verdicts,
            "violations": candidates,
            "sally_leading_signs": signs,
        },
    });
    SweepOutcome {
        document,
        exit_code: status.exit_code(),
        reports: results.into_iter().map(|r| r.reports).collect(),
    }
}

fn kind_name(name: &str) -> &'static str {
    [
        CheckKind::Vasconcelos,
        CheckKind::Northcott,
        CheckKind::CmFiber,
        CheckKind::ReductionBound,
        CheckKind::SumFormulas,
        CheckKind::MixedSum,
        CheckKind::PropDecomposition,
    ]
    .iter()
    .map(CheckKind::name)
    .find(|n| *n == name)
    .unwrap_or("other")
}

/// Aligned summary table of a sweep document.
pub fn render_text(doc: &Value) -> String {
    if let Some(e) = doc.get("error") {
        return format!("error: {}\n", e.as_str().unwrap_or_default());
    }
    let s = &doc["summary"];
    let mut rows = Vec::new();
    if let Some(v) = s["verdicts"].as_object() {
        for (check, counts) in v {
            let get = |k: &str| counts[k].as_u64().unwrap_or(0).to_string();
            rows.push(vec![
                check.clone(),
                get("HOLDS"),
                get("EQUALITY"),
                get("VIOLATED"),
                get("INAPPLICABLE"),
            ]);
        }
    }
    let mut out = crate::runner::format_table(
        &["check", "holds", "equality", "violated", "inapplicable"],
        &rows,
    );
    out.push_str(&format!(
        "instances {}, skipped {}, not stabilized {}\n",
        s["instances"], s["skipped"], s["not_stabilized"]
    ));
    if let Some(signs) = s["sally_leading_signs"].as_object() {
        if !signs.is_empty() {
            let parts: Vec<String> = signs.iter().map(|(k, v)| format!("{k} {v}")).collect();
            out.push_str(&format!("sally leading coefficient: {}\n", parts.join(", ")));
        }
    }
    for inst in doc["instances"].as_array().into_iter().flatten() {
        for rep in inst["reports"].as_array().into_iter().flatten() {
            if let Some(script) = rep.get("replay").and_then(Value::as_str) {
                out.push_str(&format!(
                    "\nviolation at instance {} ({}):\n{}",
                    inst["index"], rep["check_name"].as_str().unwrap_or_default(), script
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dim: usize, rank: usize) -> SweepConfig {
        SweepConfig { dim, rank, count: 4, seed: 42, ..SweepConfig::default() }
    }

    #[test]
    fn instances_are_reproducible() {
        for d in 1..=3 {
            let c = cfg(d, 2);
            let a = generate_instance(&c, 0).unwrap();
            let b = generate_instance(&c, 0).unwrap();
            assert_eq!(a.module, b.module);
            assert!(a.module.summands().iter().all(Ideal::is_m_primary));
        }
        let c = cfg(2, 2);
        let differ = (1..8).any(|k| generate_instance(&c, k).unwrap().module != generate_instance(&c, 0).unwrap().module);
        assert!(differ);
    }

    #[test]
    fn semigroups_have_gcd_one() {
        for k in 0..30 {
            let mut rng = instance_rng(7, k);
            let r = random_semigroup(&mut rng);
            let s = r.as_semigroup().unwrap();
            assert_eq!(s.generators().iter().fold(0u32, |g, &x| g.gcd(&x)), 1);
        }
    }

    #[test]
    fn mixed_pairs_are_reductions() {
        for d in 1..=3 {
            let c = SweepConfig { mixed: true, max_exp: 3, ..cfg(d, 3) };
            for k in 0..6 {
                let inst = generate_instance(&c, k).unwrap();
                let p = inst.pair.unwrap();
                assert_eq!(is_reduction(&p.j, &p.i, 20).unwrap(), Some(p.reduction_number));
                assert_eq!(p.u + p.v, 3);
                assert_eq!(inst.module.rank(), 3);
            }
        }
    }

    #[test]
    fn mixed_box_three_reaches_the_plane_example() {
        let c = SweepConfig { mixed: true, max_exp: 3, max_gens: 3, ..cfg(2, 2) };
        let target = Ring::standard_power_series(2).unwrap();
        let want = Ideal::new(&target, vec![vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap();
        let found = (0..400).any(|k| {
            let p = generate_instance(&c, k).unwrap().pair.unwrap();
            p.i == want && p.j.to_string() == "(x^2, y^2)"
        });
        assert!(found);
    }

    #[test]
    fn sweep_is_deterministic() {
        let c = SweepConfig {
            checks: vec![CheckKind::Vasconcelos, CheckKind::SumFormulas],
            ..cfg(2, 2)
        };
        let a = serde_json::to_string(&run_sweep(&c).document).unwrap();
        let b = serde_json::to_string(&run_sweep(&c).document).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pair_checks_need_mixed_mode() {
        let c = SweepConfig { checks: vec![CheckKind::CmFiber], count: 1, ..cfg(2, 2) };
        let out = run_sweep(&c);
        assert_eq!(out.reports[0][0].verdict, Verdict::Inapplicable);
        assert_eq!(out.exit_code, 0);
    }

    #[test]
    fn invalid_config() {
        let out = run_sweep(&SweepConfig { dim: 4, ..SweepConfig::default() });
        assert_eq!(out.exit_code, crate::runner::EXIT_INPUT);
    }
}
