//! Acceptance suite: one PASS or FAIL line per criterion. Exits nonzero if
//! any criterion fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use graph_barcode::constructions::{counterexample_pair, golden_counterexample, verify_counterexample};
use graph_barcode::graph::{is_circle, parse_graph};
use graph_barcode::verify::{
    cactus_suite, injective_corpus, local_isometry_suite, oracle_case, quoted_values_case, random_corpus,
    reconstruction_case, stability_suite, structure_case, tip_case, tip_instance, trees_suite, CaseReport, SuiteReport,
};
use graph_barcode::Rational;

const SEED: u64 = 1;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    summary: String,
}

fn first_failures(cases: &[CaseReport]) -> String {
    let failed: Vec<String> = cases
        .iter()
        .filter(|c| !c.passed)
        .take(3)
        .map(|c| {
            format!(
                "{}: {}",
                c.name,
                c.detail.get("failures").map(|f| f.to_string()).unwrap_or_default()
            )
        })
        .collect();
    if failed.is_empty() {
        String::new()
    } else {
        format!("; first failures: {}", failed.join(" | "))
    }
}

fn from_cases(cases: &[CaseReport], what: &str) -> Outcome {
    let failed = cases.iter().filter(|c| !c.passed).count();
    let checks: usize = cases.iter().map(|c| c.checks).sum();
    Outcome {
        passed: failed == 0,
        summary: format!(
            "{} {what}, {checks} checks, {failed} failing{}",
            cases.len(),
            first_failures(cases)
        ),
    }
}

fn from_suite(r: &SuiteReport, what: &str) -> Outcome {
    from_cases(&r.details, what)
}

fn oracle_equivalence() -> Outcome {
    let corpus = random_corpus(SEED, 200);
    let bounded = corpus.iter().all(|g| g.vertex_count() <= 8 && g.edge_count() <= 12);
    let start = Instant::now();
    let cases: Vec<CaseReport> = corpus
        .iter()
        .enumerate()
        .map(|(i, g)| oracle_case(&format!("oracle-{i}"), g))
        .collect();
    let elapsed = start.elapsed();
    let mut o = from_cases(&cases, "graphs");
    o.passed &= bounded && elapsed < Duration::from_secs(60);
    o.summary = format!(
        "{}, {:.2} s (target < 60 s), sizes within bounds: {bounded}",
        o.summary,
        elapsed.as_secs_f64()
    );
    o
}

fn quoted_values() -> Outcome {
    from_cases(&[quoted_values_case()], "case")
}

fn stability() -> Outcome {
    from_suite(&stability_suite(SEED, 1000), "trials")
}

fn local_isometry() -> Outcome {
    let r = local_isometry_suite(SEED, 200);
    let circles = random_corpus(SEED, 200).iter().filter(|g| is_circle(g)).count();
    let mut o = from_suite(&r, "non-circle graphs");
    o.passed &= r.cases + circles == 200;
    o.summary = format!("{} ({circles} circles skipped)", o.summary);
    o
}

fn structural_counts() -> Outcome {
    let cases: Vec<CaseReport> = random_corpus(SEED, 200)
        .iter()
        .enumerate()
        .map(|(i, g)| structure_case(&format!("structure-{i}"), g))
        .collect();
    from_cases(&cases, "graphs")
}

fn cactus_injectivity() -> Outcome {
    from_suite(&cactus_suite(SEED, 20), "constructions")
}

fn counterexample() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../testdata/v1");
    let read = |side: &str| {
        let text = std::fs::read_to_string(dir.join(format!("counterexample_{side}.graph"))).expect("golden file");
        parse_graph(&text).expect("golden file parses")
    };
    let (g, h) = (read("g"), read("h"));
    let (gen_g, gen_h) = counterexample_pair(&golden_counterexample()).expect("golden parameters");
    let frozen = g.to_string() == gen_g.to_string() && h.to_string() == gen_h.to_string();
    match verify_counterexample(&g, &h, &Rational::new(1, 4)) {
        Ok(r) => {
            let res: Vec<String> = r
                .resolutions
                .iter()
                .map(|c| format!("delta {} estimate {} slack {}", c.delta, c.estimate, c.slack))
                .collect();
            Outcome {
                passed: r.passed() && frozen,
                summary: format!(
                    "codes differ: {}, {}, shrinks: {}, files match generator: {frozen}",
                    r.codes_differ,
                    res.join("; "),
                    r.shrinks
                ),
            }
        }
        Err(e) => Outcome {
            passed: false,
            summary: e.to_string(),
        },
    }
}

fn reconstruction() -> Outcome {
    let cases: Vec<CaseReport> = injective_corpus(SEED, 10)
        .iter()
        .enumerate()
        .map(|(i, g)| reconstruction_case(&format!("reconstruct-{i}"), g))
        .collect();
    let worst = cases
        .iter()
        .filter_map(|c| c.detail.get("max_error").and_then(|v| v["float"].as_f64()))
        .fold(0.0, f64::max);
    let mut o = from_cases(&cases, "graphs");
    o.summary = format!("{}, largest error {worst:.3e}", o.summary);
    o
}

fn cech_rips_on_trees() -> Outcome {
    let r = trees_suite(SEED, 50);
    let control = r
        .details
        .iter()
        .find(|c| c.name == "cycle-negative-control")
        .is_some_and(|c| c.passed);
    let mut o = from_suite(&r, "cases");
    o.passed &= control && r.cases == 51;
    o.summary = format!("{}, cycle control finds a violation: {control}", o.summary);
    o
}

fn self_loops() -> Outcome {
    let cases: Vec<CaseReport> = (0..20u64)
        .map(|i| tip_case(&format!("tips-{i}"), &tip_instance(SEED * 1000 + i)))
        .collect();
    from_cases(&cases, "instances")
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("quoted values", quoted_values),
        ("Lipschitz and stability inequalities", stability),
        ("local isometry", local_isometry),
        ("structural counts", structural_counts),
        ("cactus injectivity", cactus_injectivity),
        ("counterexample reproduction", counterexample),
        ("reconstruction within 4 delta-hat", reconstruction),
        ("Cech and Rips on trees", cech_rips_on_trees),
        ("self-loop discrimination", self_loops),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        all &= o.passed;
        println!(
            "{} {:>2} {name}: {} [{:.2} s]",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.summary,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
