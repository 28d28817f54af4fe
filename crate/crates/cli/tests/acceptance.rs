//! Acceptance suite: one PASS/FAIL line per criterion.

use shadowcover::containment::translate_into;
use shadowcover::containment::lutwak_simplex_contains;
use shadowcover::shadow::transport_verdict;
use shadowcover_cli::repro::{self, ReproReport, DEFAULT_SEED};

const TITLES: [&str; 10] = [
    "worst-case ratio in R^3 near 1.1634",
    "cap body volume and prism intersection",
    "2(-Δ) dilate 3/2 is attained",
    "-nΔ holds Δ with least dilate n",
    "mixed-volume simplex test matches LP 200/200",
    "Steiner fit vs facet formula, difference-body ratios",
    "hidden bodies: f'(1) < 0, f(t*) > V(Ξ), interpolant covered 20/20",
    "bound constants 2.5, 2.026, 3.375, 2.942",
    "codimension-d sweeps, certificates, least dilates",
    "affine transport of verdicts 100/100",
];

fn report_line(report: &ReproReport, c: u8) -> bool {
    let ok = report.criterion_passes(c);
    println!("[{}] criterion {c:>2}: {}", if ok { "PASS" } else { "FAIL" }, TITLES[c as usize - 1]);
    for item in report.items.iter().filter(|i| i.criterion == c) {
        println!(
            "        {:<34} computed {:<22} reference {:<14} tol {:e}{}",
            item.id,
            format!("{:.12}", item.computed_value),
            format!("{}", item.paper_value),
            item.tolerance,
            if item.pass { "" } else { "  <-- FAIL" }
        );
    }
    ok
}

#[test]
fn acceptance() {
    let report = repro::run(DEFAULT_SEED).expect("suite runs");
    let results: Vec<bool> = (1..=10).map(|c| report_line(&report, c)).collect();
    println!("{}", report.note);
    let failed: Vec<usize> = (1..=10).filter(|c| !results[c - 1]).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
    assert!(report.items.iter().all(|i| i.pass));
}

/// The randomized pairs in criteria 5 and 10 must exercise both outcomes;
/// otherwise agreement would be vacuous.
#[test]
fn randomized_cases_are_mixed() {
    for n in 2..=3 {
        let contained = (0..100u64)
            .filter(|s| {
                let (t, k) = repro::lutwak_pair(n, 20_000 + 100 * n as u64 + s).unwrap();
                assert_eq!(lutwak_simplex_contains(&t, &k).unwrap(), translate_into(&k, &t).unwrap().feasible);
                translate_into(&k, &t).unwrap().feasible
            })
            .count();
        println!("n = {n}: {contained}/100 simplex pairs contain a translate");
        assert!((10..=90).contains(&contained));
    }
    let covered = (0..100u64)
        .filter(|s| {
            let (k, l, psi, u) = repro::transport_case(50_000 + s).unwrap();
            transport_verdict(&k, &l, &psi, &u).unwrap().original.covered
        })
        .count();
    println!("transport: {covered}/100 covered");
    assert!((10..=90).contains(&covered));
}

#[test]
fn seed_only_moves_samples() {
    let a = repro::run(DEFAULT_SEED).unwrap();
    let b = repro::run(7).unwrap();
    let pa: Vec<(&str, bool)> = a.items.iter().map(|i| (i.id.as_str(), i.pass)).collect();
    let pb: Vec<(&str, bool)> = b.items.iter().map(|i| (i.id.as_str(), i.pass)).collect();
    assert_eq!(pa, pb);
}
