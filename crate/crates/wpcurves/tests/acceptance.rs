//! End-to-end acceptance gate: every numbered criterion is evaluated through
//! the public suite runner and reported as a single pass/fail line. The gate
//! fails if any criterion fails, after printing the full table.

use wpcurves::suites::{run_suite, Check, SuiteConfig};

struct Criterion {
    number: u32,
    title: &'static str,
    suite: &'static str,
    /// check-id prefixes belonging to this criterion
    prefixes: &'static [&'static str],
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "Hilbert involution and Riesz projection identities (n=512, 20 probes, 1e-12)",
        suite: "identities",
        prefixes: &[
            "hilbert-involution",
            "projection-partition",
            "projection-annihilation",
            "projection-idempotence",
        ],
    },
    Criterion {
        number: 2,
        title: "line/circle Hilbert consistency at n=2048 (oracle 1e-5, Cayley route 1e-5)",
        suite: "identities",
        prefixes: &["hilbert-line-oracle", "hilbert-cayley-consistency"],
    },
    Criterion {
        number: 3,
        title: "Besov quadrature vs adaptive oracle (0.5%) and exact vanishing on constants",
        suite: "besov",
        prefixes: &["besov-second-difference-oracle", "constant-"],
    },
    Criterion {
        number: 4,
        title: "composition-operator inequalities for h = theta + a sin theta, a in {0.1, 0.3}",
        suite: "composition",
        prefixes: &["w11-isometry-", "bound-slack-", "sup-log-dh-vs-w11-"],
    },
    Criterion {
        number: 5,
        title: "welding residual <= 1e-4 at n=1024, >= 4x refinement, seminorm stability 5%",
        suite: "welding",
        prefixes: &["welding-residual-", "welding-refinement-", "bhat"],
    },
    Criterion {
        number: 6,
        title: "interior-trace spectral purity <= 1e-8 for the schlicht family",
        suite: "welding",
        prefixes: &["analytic-trace-purity-"],
    },
    Criterion {
        number: 7,
        title: "Plemelj/direct-sum crosscheck: identity 1e-9; welded 1e-4 with 4x refinement; off-curve 1e-5",
        suite: "cauchy",
        prefixes: &["identity-crosscheck", "welded-projection-", "welded-offcurve-oracles"],
    },
    Criterion {
        number: 8,
        title: "standardized transform = -i(P+ - P-) and symmetric reduction to conjugated Hilbert (1e-5)",
        suite: "cauchy",
        prefixes: &["standardized-plemelj-identity", "symmetric-reduction"],
    },
    Criterion {
        number: 9,
        title: "arc-length transfer residual <= 1e-4, quadratic in amplitude (ratio in [4,8])",
        suite: "cauchy",
        prefixes: &["delta-"],
    },
    Criterion {
        number: 10,
        title: "Cauchy-Riemann residual of the operator-matrix family <= 1e-3 norm, halving >= 2x",
        suite: "holomorphy",
        prefixes: &["cauchy-riemann-"],
    },
    Criterion {
        number: 11,
        title: "Beurling-Ahlfors dilatations, hyperbolic L_p indicator, annulus local integral",
        suite: "quasiconformal",
        prefixes: &["ba-", "indicator-", "twb-"],
    },
];

fn matches(check: &Check, prefixes: &[&str]) -> bool {
    prefixes.iter().any(|p| check.id.starts_with(p))
}

#[test]
fn acceptance_gate() {
    // one run per distinct suite, reused across criteria
    let mut reports = std::collections::BTreeMap::new();
    for crit in CRITERIA {
        reports.entry(crit.suite).or_insert_with(|| {
            let mut cfg = SuiteConfig::new(crit.suite);
            if crit.suite == "identities" {
                cfg.n = 512;
            }
            run_suite(&cfg)
        });
    }

    let mut all_pass = true;
    for crit in CRITERIA {
        let line = match &reports[crit.suite] {
            Err(e) => {
                all_pass = false;
                format!("criterion {:2} FAIL  {} [suite error: {e}]", crit.number, crit.title)
            }
            Ok(report) => {
                let selected: Vec<&Check> =
                    report.checks.iter().filter(|c| matches(c, crit.prefixes)).collect();
                assert!(
                    !selected.is_empty(),
                    "criterion {} selects no checks from suite {}",
                    crit.number,
                    crit.suite
                );
                let pass = selected.iter().all(|c| c.pass);
                all_pass &= pass;
                let detail: Vec<String> = selected
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| format!("{} value={:.3e} threshold={:.3e}", c.id, c.value, c.threshold))
                    .collect();
                format!(
                    "criterion {:2} {}  {}{}",
                    crit.number,
                    if pass { "PASS" } else { "FAIL" },
                    crit.title,
                    if detail.is_empty() { String::new() } else { format!(" [{}]", detail.join("; ")) }
                )
            }
        };
        println!("{line}");
    }
    assert!(all_pass, "acceptance criteria failed (see table above)");
}

/// Every suite check belongs to exactly one criterion, so a regression in a
/// future check cannot silently escape the gate.
#[test]
fn every_check_is_claimed_by_one_criterion() {
    for suite in ["identities", "besov", "composition", "welding", "cauchy", "holomorphy", "quasiconformal"]
    {
        let mut cfg = SuiteConfig::new(suite);
        // smallest grids that exercise every check id
        cfg.n = if suite == "composition" || suite == "cauchy" { 1024 } else { 256 };
        let report = run_suite(&cfg).unwrap_or_else(|e| panic!("suite {suite} failed: {e}"));
        for check in &report.checks {
            let owners: Vec<u32> = CRITERIA
                .iter()
                .filter(|crit| crit.suite == suite && matches(check, crit.prefixes))
                .map(|crit| crit.number)
                .collect();
            assert_eq!(owners.len(), 1, "check {} claimed by criteria {owners:?}", check.id);
        }
    }
}
