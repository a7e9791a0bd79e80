use brimcalc::checks::{self, Verdict};
use brimcalc::invariants::{ideal_invariants, module_invariants, DirectSumModule, FitConfig};
use brimcalc::sweep::{generate_instance, SweepConfig};
use num_bigint::BigInt;
use serde_json::json;

fn pairs(dim: usize, seed: u64, count: usize) -> Vec<brimcalc::sweep::ReductionPair> {
    let cfg = SweepConfig {
        dim,
        rank: 3,
        seed,
        mixed: true,
        max_exp: if dim == 3 { 3 } else { 4 },
        ..SweepConfig::default()
    };
    (0..count)
        .map(|k| generate_instance(&cfg, k).unwrap().pair.unwrap())
        .collect()
}

#[test]
fn cm_fiber_equality_bounds_the_reduction_number() {
    let cfg = FitConfig::default();
    for d in 1..=3 {
        for p in pairs(d, 11, 8) {
            let rep = checks::check_cm_fiber_ideal(&p.i, &p.j, &cfg);
            assert_ne!(rep.verdict, Verdict::Violated, "{} {}", p.i, p.j);
            assert_eq!(rep.witness["series_matches"], json!(rep.verdict == Verdict::Equality), "{} {}", p.i, p.j);
            if rep.verdict == Verdict::Equality {
                let inv = ideal_invariants(&p.i, &cfg).unwrap();
                let bound = &inv.f[0] - BigInt::from(inv.mu) + BigInt::from(d);
                assert!(BigInt::from(p.reduction_number) <= bound, "{}", p.i);
            }
        }
    }
}

#[test]
fn sum_formulas_always_agree() {
    for d in 1..=3 {
        for p in pairs(d, 12, 5) {
            for r in 2..=3 {
                let rep = checks::check_sum_formulas(&p.i, r, &FitConfig::default());
                assert_eq!(rep.verdict, Verdict::Equality, "{} r = {r}", p.i);
            }
        }
    }
}

#[test]
fn mixed_sum_slack_matches_module_invariants() {
    let cfg = FitConfig::default();
    for d in 2..=3 {
        for p in pairs(d, 13, 5) {
            let rep = checks::check_mixed_sum(&p.i, &p.j, p.u, p.v, &cfg);
            assert_ne!(rep.verdict, Verdict::Violated, "{} {}", p.i, p.j);
            assert_eq!(rep.witness["transfer_holds"], json!(true));
            let m = module_invariants(&DirectSumModule::mixed(&p.i, p.u, &p.j, p.v).unwrap(), &cfg).unwrap();
            let slack = m.vasconcelos_bound() - &m.f[0];
            assert_eq!(rep.slack, Some(slack));
        }
    }
}

#[test]
fn reduction_bound_respects_the_cm_gate() {
    let cfg = FitConfig::default();
    for p in pairs(2, 14, 8) {
        let cm = checks::check_cm_fiber_ideal(&p.i, &p.j, &cfg);
        let rep = checks::check_reduction_bound(&p.i, &p.j, &cfg);
        if cm.verdict == Verdict::Equality {
            assert!(matches!(rep.verdict, Verdict::Holds | Verdict::Equality), "{}", p.i);
        } else {
            assert_eq!(rep.verdict, Verdict::Inapplicable);
        }
    }
}

#[test]
fn every_report_carries_the_module_reduction_note() {
    let p = &pairs(2, 15, 1)[0];
    let cfg = FitConfig::default();
    let m = DirectSumModule::copies(&p.i, 2).unwrap();
    for rep in [
        checks::check_vasconcelos(&m, &cfg),
        checks::check_northcott_equality(&m, &cfg),
        checks::check_cm_fiber_ideal(&p.i, &p.j, &cfg),
        checks::check_reduction_bound(&p.i, &p.j, &cfg),
        checks::check_sum_formulas(&p.i, 2, &cfg),
        checks::check_mixed_sum(&p.i, &p.j, 1, 1, &cfg),
        checks::check_prop_decomposition(&p.i, &p.j, 8, &cfg),
    ] {
        assert!(rep.note.as_deref().unwrap().contains(checks::MODULE_REDUCTION_NOTE), "{}", rep.check_name);
    }
}
