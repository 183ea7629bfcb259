//! Acceptance gate: every verification family at its pinned tolerance, one
//! pass/fail line per criterion.
//!
//! Run with `cargo test -p csmx-core --test acceptance -- --nocapture` to
//! see the per-criterion summary.

use csmx_core::propagators::QuadratureConfig;
use csmx_core::verify::{self, Report};

struct Criterion {
    number: usize,
    title: &'static str,
    reports: Vec<Report>,
}

impl Criterion {
    fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }
}

#[test]
fn acceptance() {
    let cfg = QuadratureConfig::default();
    let criteria = vec![
        Criterion {
            number: 1,
            title: "Fermi parity: printed table and exhaustive inversion oracle to n = 6",
            reports: vec![verify::parity_suite().unwrap()],
        },
        Criterion {
            number: 2,
            title: "Wick duality: exhaustive to length 4, randomized at lengths 5-6",
            reports: vec![verify::wick_duality_suite(17, 1000).unwrap()],
        },
        Criterion {
            number: 3,
            title: "Time-ordering identities: photon words to n = 5, three-field form, bilocal blocks to n = 4",
            reports: vec![verify::time_order_suite(5).unwrap()],
        },
        Criterion {
            number: 4,
            title: "Chronological-form equivalences to n = 5 and inclusion-exclusion to n = 4",
            reports: vec![verify::chrono_forms_suite(5).unwrap()],
        },
        Criterion {
            number: 5,
            title: "Causal factorization: exact splits to n = 4 and the numeric defect below 1e-2",
            reports: vec![
                verify::factorization_suite(4, true).unwrap(),
                verify::factorization_numeric_suite(&cfg).unwrap(),
            ],
        },
        Criterion {
            number: 6,
            title: "Green-function numerics: fundamental solution, splitting, support, closed form",
            reports: vec![verify::green_function_suite(&cfg).unwrap()],
        },
        Criterion {
            number: 7,
            title: "Norm bounds with frozen constants on the twenty-case suite",
            reports: vec![verify::bounds_suite(&cfg).unwrap()],
        },
        Criterion {
            number: 8,
            title: "Series structure: selection rule, pattern census, residual scaling, adjoint, unitarity",
            reports: vec![verify::smatrix_suite(&cfg).unwrap()],
        },
        Criterion {
            number: 9,
            title: "Representation layer: exact low weights, homomorphism, unitarity, metric",
            reports: vec![verify::reps_suite(11).unwrap()],
        },
        Criterion {
            number: 10,
            title: "Forbidden limits are structured errors, never numbers",
            reports: vec![verify::guards_suite().unwrap()],
        },
    ];
    let mut all_ok = true;
    for c in &criteria {
        let instances: usize = c.reports.iter().map(|r| r.instances.len()).sum();
        let failures: usize = c.reports.iter().map(|r| r.failures()).sum();
        let status = if c.passed() { "PASS" } else { "FAIL" };
        println!("[{status}] criterion {:>2}: {} ({instances} instances, {failures} failures)", c.number, c.title);
        if !c.passed() {
            all_ok = false;
            for r in &c.reports {
                for i in &r.instances {
                    if !i.pass {
                        println!("         {}::{}: {}", r.suite, i.id, i.detail);
                    }
                }
            }
        }
    }
    assert!(all_ok, "acceptance criteria failed");
}
