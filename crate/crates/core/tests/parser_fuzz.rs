use brimcalc::script::parse_script;
use proptest::prelude::*;

const HEADER: &str = "ring R = power_series(x, y)\nideal I = (x^2, x*y, y^2)\nideal J = (x^2, y^2)\nmodule M = I (+) J\n";

fn token() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("ring".to_string()),
        Just("ideal".to_string()),
        Just("module".to_string()),
        Just("check".to_string()),
        Just("compute".to_string()),
        Just("set".to_string()),
        Just("vasconcelos".to_string()),
        Just("cm_fiber".to_string()),
        Just("mixed_sum".to_string()),
        Just("reduction".to_string()),
        Just("copies".to_string()),
        Just("rank".to_string()),
        Just("invariants".to_string()),
        Just("I".to_string()),
        Just("J".to_string()),
        Just("M".to_string()),
        Just("x".to_string()),
        Just("y".to_string()),
        Just("(+)".to_string()),
        Just("(".to_string()),
        Just(")".to_string()),
        Just(",".to_string()),
        Just("=".to_string()),
        Just("^".to_string()),
        Just("*".to_string()),
        Just("#".to_string()),
        (0u64..40).prop_map(|n| n.to_string()),
        Just("99999999999999999999999".to_string()),
    ]
}

fn check_positions(text: &str) {
    if let Err(e) = parse_script(text) {
        let lines: Vec<&str> = text.lines().collect();
        assert!(e.line >= 1 && e.line <= lines.len().max(1), "{e:?}");
        let width = lines.get(e.line - 1).map_or(0, |l| l.chars().count());
        assert!(e.column >= 1 && e.column <= width + 1, "{e:?} in {text:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn arbitrary_text_never_panics(text in "\\PC{0,120}") {
        check_positions(&text);
    }

    #[test]
    fn token_soup_never_panics(toks in proptest::collection::vec(token(), 0..12)) {
        let text = format!("{HEADER}{}", toks.join(" "));
        check_positions(&text);
    }

    #[test]
    fn multiline_soup_never_panics(lines in proptest::collection::vec(proptest::collection::vec(token(), 0..8), 0..6)) {
        let body: Vec<String> = lines.iter().map(|l| l.join(" ")).collect();
        check_positions(&body.join("\n"));
    }
}

#[test]
fn every_malformed_line_is_located() {
    for bad in [
        "check",
        "check vasconcelos",
        "check vasconcelos I",
        "check cm_fiber I J",
        "check sum_formulas I rank 0",
        "check mixed_sum I J copies 1",
        "ideal K = ()",
        "ideal K = (x^, y)",
        "ideal K = (1)",
        "module N = I (+)",
        "module N = I + J",
        "compute",
        "compute invariants Z",
        "set nmax",
        "ideal K = (x^2, y) (x)",
    ] {
        let e = parse_script(&format!("{HEADER}{bad}")).unwrap_err();
        assert_eq!(e.line, 5, "{bad}");
        assert!(e.column >= 1 && e.column <= bad.chars().count() + 1, "{bad}: {e:?}");
    }
}
