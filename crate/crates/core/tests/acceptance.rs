//! Acceptance criteria, one line each: `PASS`/`FAIL`, number, title, case
//! count and wall time against the time budget. Exits nonzero on any failure.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use sslab::correspondences::sharp_rebuild;
use sslab::document::{parse_document, Operation};
use sslab::verify::{
    check_cb_ranks, check_cor4, check_dictionary, check_lattice_agreement, check_normalize_catalog,
    check_normalize_one_dim, check_rebuild_one_dim, check_scattered_joins, check_set_identities, check_supnonrad,
    check_transfer, example_spaces, run_check, CheckOutcome,
};

const SEED: u64 = 2024;
const CATALOG: usize = 5;

struct Criterion {
    number: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Vec<CheckOutcome>,
}

/// `ℓ = ℓ♯` for every stable pair written in a fixture on a min-scattered space.
fn rebuild_fixtures() -> CheckOutcome {
    run_check("rebuild on min-scattered fixtures", |t| {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        let mut paths: Vec<_> = fs::read_dir(&dir).expect("fixtures directory").map(|e| e.expect("entry").path()).collect();
        paths.sort();
        for path in paths {
            let text = fs::read_to_string(&path).expect("readable fixture");
            let doc = parse_document(&text).map_err(|e| sslab::error::SslabError::InvalidDescriptor(e.to_string()))?;
            for d in &doc.operations {
                if let Operation::Stable(pair) = &d.value {
                    if pair.space().is_min_scattered() {
                        let rebuilt = sharp_rebuild(pair)?;
                        t.case(&rebuilt == pair, || format!("{}: {} rebuilt as {}", path.display(), d.name, rebuilt.render()));
                    }
                }
            }
        }
        Ok(())
    })
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            number: 1,
            title: "stable meet/join/leq agree with the F-table oracle on the poset catalog",
            budget: Duration::from_secs(60),
            run: || vec![check_lattice_agreement(CATALOG)],
        },
        Criterion {
            number: 2,
            title: "every radical join on the poset catalog is spectral",
            budget: Duration::from_secs(30),
            run: || vec![check_cor4(CATALOG)],
        },
        Criterion {
            number: 3,
            title: "joins on [0,w], [0,w^2], [0,w^3] agree with the spectral supremum",
            budget: Duration::from_secs(60),
            run: || vec![check_scattered_joins(&["w", "w^2", "w^3"], 500, 200, SEED)],
        },
        Criterion {
            number: 4,
            title: "Cantor punctured supremum: qspec {generic}, radical but not spectral",
            budget: Duration::from_secs(5),
            run: || vec![check_supnonrad(200, SEED)],
        },
        Criterion {
            number: 5,
            title: "cb_rank(Max [0,w^k]) = k+1 and derived([0,w^2]) is the nu>=1 cell",
            budget: Duration::from_secs(1),
            run: || vec![check_cb_ranks(5)],
        },
        Criterion {
            number: 6,
            title: "normalization round-trips catalog pairs and 200 one-dimensional pairs",
            budget: Duration::from_secs(30),
            run: || vec![check_normalize_catalog(CATALOG), check_normalize_one_dim(200, SEED)],
        },
        Criterion {
            number: 7,
            title: "transfer along catalog automorphisms is an order isomorphism",
            budget: Duration::from_secs(30),
            run: || vec![check_transfer(CATALOG)],
        },
        Criterion {
            number: 8,
            title: "pair, localizing system and length function agree; l = l# on min-scattered models",
            budget: Duration::from_secs(30),
            run: || vec![check_dictionary(CATALOG), check_rebuild_one_dim(200, SEED), rebuild_fixtures()],
        },
        Criterion {
            number: 9,
            title: "1000 randomized set identities per backend",
            budget: Duration::from_secs(30),
            run: || {
                let mut seen = Vec::new();
                let mut out = Vec::new();
                for (label, space) in example_spaces() {
                    let backend = space.backend();
                    if !seen.contains(&backend) {
                        seen.push(backend);
                        out.push(check_set_identities(&label, &space, 1000, SEED));
                    }
                }
                assert_eq!(seen.len(), 3, "one space per backend");
                out
            },
        },
    ]
}

fn main() -> ExitCode {
    let mut failed = 0;
    for c in criteria() {
        let start = Instant::now();
        let outcomes = (c.run)();
        let elapsed = start.elapsed();
        let cases: usize = outcomes.iter().map(|o| o.cases).sum();
        let failure = outcomes.iter().find(|o| !o.passed()).and_then(|o| o.failure.clone());
        let late = elapsed > c.budget;
        let verdict = if failure.is_none() && !late && cases > 0 { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {}. {} ({cases} cases, {:.2}s / {}s)",
            c.number,
            c.title,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if let Some(f) = failure {
            println!("     counterexample: {f}");
        }
        if late {
            println!("     over the time budget");
        }
        if verdict == "FAIL" {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
