//! Small known cases for each subcommand.

use serde_json::{json, Value};
use univoque::arith::rational::{int, parse_rational, ratio};
use univoque::constants::{golden_ratio_general, komornik_loreti};
use univoque::dimension::{admissible_word_count, dim_u_q, scan_dimension};
use univoque::expansion::{enumerate_expansions, greedy_expansion, lazy_expansion, uniqueness_certificate, UniquenessVerdict};
use univoque::transversality::{transversality_root, verify_inspection_inequalities, verify_star};
use univoque::two_expansion::{check_u2_point, construct_u2_candidates, theorem_bound};
use univoque::{BaseEnclosure, DiffSeries, DigitWord, EventuallyPeriodicSeq, Rational, RationalInterval, Result};

type Check = (&'static str, fn() -> Result<bool>);

fn rat(m: u32, s: &str) -> BaseEnclosure {
    BaseEnclosure::rational(m, parse_rational(s).expect("literal")).expect("literal base")
}

fn iv(a: &str, b: &str) -> RationalInterval {
    RationalInterval::spanning(parse_rational(a).expect("literal"), parse_rational(b).expect("literal"))
}

fn point(s: &str) -> RationalInterval {
    RationalInterval::point(parse_rational(s).expect("literal"))
}

fn seq(s: &str, m: u32) -> EventuallyPeriodicSeq {
    EventuallyPeriodicSeq::parse(s, m).expect("literal sequence")
}

fn digits(w: &DigitWord) -> String {
    w.digits().iter().map(|d| d.to_string()).collect()
}

const CONSTANTS: &[Check] = &[
    ("golden ratio for M=2 is exactly 2", || Ok(golden_ratio_general(2)?.as_rational() == Some(&int(2)))),
    ("golden ratio for M=1 encloses 1.6180339887", || {
        Ok(golden_ratio_general(1)?.q().is_subset_of(&iv("1.61803398874", "1.61803398875")))
    }),
    ("q_KL for M=1 lies in [1.787, 1.788]", || Ok(komornik_loreti(1, &ratio(1, 100_000_000))?.q().is_subset_of(&iv("1.787", "1.788")))),
    ("alpha(2) = 1^n for M=1 and M=2", || {
        let a = univoque::constants::alpha_of_q(&rat(1, "2"), 8)?;
        let b = univoque::constants::alpha_of_q(&rat(2, "2"), 8)?;
        Ok(digits(&a) == "11111111" && digits(&b) == "11111111")
    }),
];

const EXPAND: &[Check] = &[
    ("x=1/2, q=2 has live paths 100000 and 011111", || {
        let t = enumerate_expansions(&point("1/2"), &rat(1, "2"), 6)?;
        let live: Vec<String> = t.live_paths().map(digits).collect();
        Ok(live == ["011111", "100000"])
    }),
    ("x=0 has the single live path 0^6", || {
        let t = enumerate_expansions(&point("0"), &rat(1, "19/10"), 6)?;
        Ok(t.live_paths().map(digits).collect::<Vec<_>>() == ["000000"])
    }),
    ("greedy(1, 2) = 1^6", || Ok(digits(&greedy_expansion(&point("1"), &rat(1, "2"), 6)?) == "111111")),
    ("greedy(2/3, 2) = (10)^3", || Ok(digits(&greedy_expansion(&point("2/3"), &rat(1, "2"), 6)?) == "101010")),
    ("lazy(1/2, 2) = 01111", || Ok(digits(&lazy_expansion(&point("1/2"), &rat(1, "2"), 5)?) == "01111")),
];

const UNIQUE: &[Check] = &[
    ("0^inf is unique", || Ok(uniqueness_certificate(&seq("(0)", 1), &rat(1, "19/10"), 64)? == UniquenessVerdict::UniqueCertified)),
    ("1^inf is unique", || Ok(uniqueness_certificate(&seq("(1)", 1), &rat(1, "19/10"), 64)? == UniquenessVerdict::UniqueCertified)),
    ("10^inf is not unique at q=2", || {
        Ok(matches!(uniqueness_certificate(&seq("1(0)", 1), &rat(1, "2"), 64)?, UniquenessVerdict::NotUniqueCertified { .. }))
    }),
];

const ROOT: &[Check] = &[
    ("(-1,-1,-1)(0) has its root at 1.8392867552", || {
        let d = DiffSeries::parse("(-1,-1,-1)(0)", 1)?;
        let r = transversality_root(&d, &iv("1.79", "1.99"), &ratio(1, 1_000_000_000_000))?;
        Ok(r.root().is_some_and(|q| q.q().is_subset_of(&iv("1.8392867552", "1.8392867553"))))
    }),
    ("(-1)^inf has its root at 2", || {
        let d = DiffSeries::parse("(-1)", 1)?;
        let kl = komornik_loreti(1, &ratio(1, 1_000_000_000_000))?;
        let r = transversality_root(&d, &RationalInterval::spanning(kl.q().lo().clone(), int(2)), &ratio(1, 1_000_000))?;
        Ok(r.root().is_some_and(|q| q.as_rational() == Some(&int(2))))
    }),
];

const CERTIFY: &[Check] = &[
    ("M=7: h = 1/12 and h' = -5/9", || {
        let c = verify_star(7)?;
        Ok(c.h_value == RationalInterval::point(ratio(1, 12)) && c.h_deriv == RationalInterval::point(ratio(-5, 9)))
    }),
    ("M=6: h = 1/4 and h' = -1/3", || {
        let c = verify_star(6)?;
        Ok(c.h_value == RationalInterval::point(ratio(1, 4)) && c.h_deriv == RationalInterval::point(ratio(-1, 3)))
    }),
    ("M=1..10 certified", || Ok((1..=10).all(|m| verify_star(m).is_ok()))),
];

const U2: &[Check] = &[
    ("a=b=0^inf is invalid", || {
        let c = check_u2_point(&DigitWord::empty(1), 0, &seq("(0)", 1), &seq("(0)", 1), &rat(1, "19/10"), 12)?;
        Ok(!c.valid && !c.checks.value_equality)
    }),
    ("window [1.62, 1.70] is rejected", || Ok(construct_u2_candidates(1, &iv("1.62", "1.70"), 2, 2).is_err())),
    ("constant pairs give no constructive record inside (q_KL, 2)", || {
        Ok(construct_u2_candidates(1, &iv("1.80", "1.99"), 1, 0)?.iter().all(|r| !r.constructive))
    }),
    ("theorem bound: 0.7 -> 0.4, 0.4 -> 0, [0.45, 0.55] -> [0, 0.1]", || {
        Ok(theorem_bound(&point("0.7"))? == point("0.4")
            && theorem_bound(&point("0.4"))? == point("0")
            && theorem_bound(&iv("0.45", "0.55"))? == iv("0", "0.1"))
    }),
];

const DIM: &[Check] = &[
    ("q=2: all 1024 words of length 10 pass", || {
        Ok(admissible_word_count(&rat(1, "2"), 10, 12)?.upper_count == 1024u32.into())
    }),
    ("q=2: upper bound is 1", || Ok(dim_u_q(&rat(1, "2"), 16, 16)?.hi == int(1))),
    ("enclosure inside [0, 1]", || {
        let d = dim_u_q(&rat(1, "19/10"), 16, 16)?;
        Ok(d.lo >= Rational::from_integer(0.into()) && d.lo <= d.hi && d.hi <= int(1))
    }),
];

const SCAN: &[Check] = &[
    ("grid [7/4] is rejected", || Ok(scan_dimension(1, &[rat(1, "7/4")], 8, 8).is_err())),
    ("record bound equals the theorem bound of its dimension", || {
        let r = scan_dimension(1, &[rat(1, "19/10")], 12, 12)?;
        let d = r[0].dimension.as_ref().expect("record has a dimension");
        Ok(r[0].bound.as_ref() == Some(&theorem_bound(&d.interval())?))
    }),
];

const INSPECT: &[Check] = &[
    ("M=1: both cases certified", || Ok(verify_inspection_inequalities(1)?.len() == 2)),
    ("M=2 and M=3 certified", || Ok(verify_inspection_inequalities(2).is_ok() && verify_inspection_inequalities(3).is_ok())),
];

fn suite(name: &str) -> Vec<(&'static str, &'static [Check])> {
    let all: [(&'static str, &'static [Check]); 9] = [
        ("constants", CONSTANTS),
        ("expand", EXPAND),
        ("unique", UNIQUE),
        ("root", ROOT),
        ("certify", CERTIFY),
        ("u2", U2),
        ("dim", DIM),
        ("scan", SCAN),
        ("inspect", INSPECT),
    ];
    all.into_iter().filter(|(n, _)| name == "all" || *n == name).collect()
}

/// JSON report and overall pass flag.
pub fn run(name: &str) -> (Value, bool) {
    let mut results = Vec::new();
    let mut passed = true;
    for (sub, checks) in suite(name) {
        for (label, f) in checks {
            let (pass, error) = match f() {
                Ok(p) => (p, None),
                Err(e) => (false, Some(e.to_string())),
            };
            passed &= pass;
            results.push(json!({ "subcommand": sub, "check": label, "pass": pass, "error": error }));
        }
    }
    (json!({ "selftest": name, "checks": results, "passed": passed }), passed)
}
