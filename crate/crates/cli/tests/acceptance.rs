//! One line per acceptance criterion, then a single assertion over all of them.

use std::time::{Duration, Instant};

use chowsym::checks::{run_check, two_row_lines, CheckSpec};
use chowsym::random::{self, lv};
use chowsym::report::{CheckResult, Status};
use chowsym::scenario::{bundled, Scenario};
use chowsym_core::filtration::psi_closed;
use rand::Rng;

const SEED: u64 = 42;

struct Outcome {
    ok: bool,
    detail: String,
}

fn all_pass(results: &[CheckResult]) -> Outcome {
    let failed: Vec<&CheckResult> = results.iter().filter(|r| r.status != Status::Pass).collect();
    let cases: usize = results.iter().map(|r| r.cases).sum();
    match failed.first() {
        None => Outcome { ok: true, detail: format!("{} checks, {cases} cases", results.len()) },
        Some(f) => Outcome {
            ok: false,
            detail: format!("{}: {:?} {} {}", f.name, f.status, f.detail, f.witness.clone().unwrap_or_default()),
        },
    }
}

fn run(sc: &Scenario, specs: &[CheckSpec]) -> Vec<CheckResult> {
    specs.iter().enumerate().flat_map(|(i, c)| run_check(sc, i, c, SEED)).collect()
}

fn criterion(
    lines: &mut Vec<(usize, bool)>,
    n: usize,
    title: &str,
    limit: Option<Duration>,
    f: impl FnOnce() -> Outcome,
) {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        if took > limit {
            out.ok = false;
            out.detail.push_str(&format!("; took {took:.2?}, limit {limit:?}"));
        }
    }
    println!(
        "criterion {n} [{}] {title}: {} ({took:.2?})",
        if out.ok { "PASS" } else { "FAIL" },
        out.detail
    );
    lines.push((n, out.ok));
}

#[test]
fn acceptance() {
    let roundtrip = bundled("roundtrip_random").unwrap();
    let two_row = bundled("two_row").unwrap();
    let genus2 = bundled("genus2").unwrap();
    let elliptic = bundled("elliptic").unwrap();
    let all_d = vec![1, 2, 3];
    let all_r = vec![1, 2, 3, 4];
    let mut lines = Vec::new();

    criterion(&mut lines, 1, "round trip: Phi_r Psi'_r = r! q, Phi_t Psi'_r = 0 for t < r", Some(Duration::from_secs(60)), || {
        all_pass(&run(&roundtrip, &[CheckSpec::RandomRoundtrip { d: all_d.clone(), r: all_r.clone(), cases: 200 }]))
    });

    criterion(&mut lines, 2, "closed formula = product construction", Some(Duration::from_secs(30)), || {
        all_pass(&run(&roundtrip, &[CheckSpec::RandomPathEquivalence { d: all_d.clone(), r: all_r.clone(), cases: 200 }]))
    });

    criterion(&mut lines, 3, "two-row Psi'_2 on one curve, line by line", None, || {
        let mut out = all_pass(&run(
            &two_row,
            &["rational", "quadratic", "abelian_only"]
                .map(|i| CheckSpec::PsiRankTwoLines { input: i.into() }),
        ));
        // symbolic coefficients: random divisors on every level
        let s = &two_row.setting;
        for i in 0..100u64 {
            let mut rng = random::rng(SEED, 3 << 32 | i);
            let level = lv([1, 2, 4][rng.gen_range(0..3)]);
            let d = random::datum_at(&mut rng, s, 2, level);
            if psi_closed(s, &d).unwrap() != two_row_lines(s, &d).unwrap() {
                out = Outcome { ok: false, detail: format!("random case {i} differs") };
                break;
            }
        }
        if out.ok {
            out.detail.push_str(" + 100 random two-row data");
        }
        out
    });

    criterion(&mut lines, 4, "partial multilinearity and projection formula", None, || {
        all_pass(&run(
            &roundtrip,
            &[CheckSpec::RandomMultilinearity { cases: 100 }, CheckSpec::RandomProjectionFormula { cases: 100 }],
        ))
    });

    criterion(&mut lines, 5, "Tr o res = [L:E] on values, divisors, cycles, symbols", None, || {
        let mut results = run(&roundtrip, &[CheckSpec::FunctorLaws { cases: 10 }]);
        results.extend(run(&two_row, &[CheckSpec::FunctorLaws { cases: 10 }]));
        results.extend(run(&genus2, &[CheckSpec::FunctorLaws { cases: 10 }]));
        all_pass(&results)
    });

    criterion(&mut lines, 6, "subset counts and alternating sums, r <= 6", Some(Duration::from_secs(5)), || {
        all_pass(&run(&roundtrip, &[CheckSpec::BinomialLemma { max_r: 6 }]))
    });

    criterion(&mut lines, 7, "(deg, alb) factors through (Phi_0, Phi_1)", None, || {
        all_pass(&run(&roundtrip, &[CheckSpec::RandomAlbanese { cases: 50 }]))
    });

    criterion(&mut lines, 8, "genus-2 example, all four steps", Some(Duration::from_secs(10)), || {
        let results = run(&genus2, &[CheckSpec::Genus2Steps]);
        let expected = [Status::Pass, Status::AxiomCited, Status::Pass, Status::Pass];
        let got: Vec<Status> = results.iter().map(|r| r.status).collect();
        if got == expected {
            Outcome { ok: true, detail: "steps a, c, d pass; step b carries its Pontryagin witness (axiom-cited)".into() }
        } else {
            let bad = results.iter().zip(expected).find(|(r, e)| r.status != *e).unwrap().0;
            Outcome { ok: false, detail: format!("{}: {} {}", bad.name, bad.detail, bad.witness.clone().unwrap_or_default()) }
        }
    });

    criterion(&mut lines, 9, "d = 1, g = 1, r = 3: every Psi'_3 summand classified", None, || {
        all_pass(&run(
            &elliptic,
            &[
                CheckSpec::Vanishing { input: "pure".into(), g: Some(1) },
                CheckSpec::Vanishing { input: "mixed".into(), g: Some(1) },
                CheckSpec::RandomVanishing { r: 3, cases: 100 },
            ],
        ))
    });

    let failed: Vec<usize> = lines.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
