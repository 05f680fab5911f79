//! Acceptance suite: nine timed criteria, each printed as a pass/fail line.

use std::time::{Duration, Instant};

use hahnfactor::cli::dsl::{parse_series, parse_series_rank};
use hahnfactor::cli::props::{deterministic, run_suite, SuiteReport};
use hahnfactor::cli::run;
use hahnfactor::exponents::GroupSpec;
use hahnfactor::factor::certify::{certify_irreducible, certify_prime};
use hahnfactor::factor::coarse::coarse_factor;
use hahnfactor::factor::oz::{oz_gcd_demo, OzVerdict};
use hahnfactor::factor::{Criterion, Verdict, ZRing};
use hahnfactor::rvcore::table1::{int_hat_matches_group_ring, residue_tables_match};
use hahnfactor::series::closed::ClosedSeries;

struct Outcome {
    problems: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { problems: Vec::new() }
    }

    fn suite(&mut self, r: hahnfactor::Result<SuiteReport>, want: usize) {
        match r {
            Ok(r) => {
                if !r.ok() || r.cases < want {
                    self.problems.push(format!("{}: {}/{} passed; {:?}", r.suite, r.passed, r.cases, r.failures));
                }
            }
            Err(e) => self.problems.push(format!("suite error: {e}")),
        }
    }

    fn expect(&mut self, ok: bool, what: &str) {
        if !ok {
            self.problems.push(what.to_string());
        }
    }
}

fn criterion(n: usize, name: &str, limit: Duration, body: impl FnOnce(&mut Outcome)) -> Option<String> {
    let start = Instant::now();
    let mut o = Outcome::new();
    body(&mut o);
    let elapsed = start.elapsed();
    if elapsed > limit {
        o.problems.push(format!("took {elapsed:.2?}, limit {limit:?}"));
    }
    let status = if o.problems.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n} ({name}): {status} in {elapsed:.2?} (limit {limit:?})");
    for p in &o.problems {
        println!("    {p}");
    }
    if o.problems.is_empty() {
        None
    } else {
        Some(format!("criterion {n}: {}", o.problems.join("; ")))
    }
}

fn series(s: &str) -> ClosedSeries {
    parse_series(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

const HARM: &str = "ladder(limit=0; step=harm(1); coef=const(1))";

fn ordinal_laws(o: &mut Outcome) {
    o.suite(run_suite("ordinal", 10_000, 1), 10_000 + 64 * 64);
}

fn theorem_d(o: &mut Outcome) {
    o.suite(run_suite("degree", 200, 2), 200);
}

fn sup_valuation(o: &mut Outcome) {
    o.suite(run_suite("sup", 100, 3), 101);
}

fn rv_laws(o: &mut Outcome) {
    o.suite(run_suite("rv", 1000, 4), 4000);
    o.expect(residue_tables_match(3).unwrap_or(false), "residue ring of (Z, v_3) differs from F_3");
    for p in [2, 3] {
        o.expect(int_hat_matches_group_ring(p, 20, 4).unwrap_or(false), "graded ring differs from the group-ring oracle");
    }
}

fn p_multiplicativity(o: &mut Outcome) {
    o.suite(run_suite("pmult", 50, 5), 50);
}

fn named_certificates(o: &mut Outcome) {
    let b = series("1 + ladder(limit=-1; step=harm(1); coef=const(1))");
    let c = certify_irreducible(&b);
    o.expect((c.verdict, c.criterion) == (Verdict::Certified, Criterion::ThmE), "1 + sum t^(-1-1/n) irreducible by ThmE");
    let c = certify_prime(&b);
    o.expect((c.verdict, c.criterion) == (Verdict::Certified, Criterion::ThmF), "1 + sum t^(-1-1/n) prime by ThmF");
    let c = certify_prime(&series(HARM));
    o.expect(c.verdict == Verdict::Certified, "sum t^(-1/n) prime");
    let three = series(&format!(
        "t^(-sqrt(2)) * {HARM} + t^(-1) * ladder(limit=0; step=geo(1, 1/2); start=0; coef=const(1)) + {HARM}"
    ));
    let c = certify_prime(&three);
    o.expect(c.verdict == Verdict::Certified, "three-term degree-one series prime");
    let c = certify_irreducible(&series("1 + t^(-1)"));
    o.expect(
        (c.verdict, c.criterion) == (Verdict::Refuted, Criterion::FiniteFactor)
            && c.witnesses.get("factor").is_some_and(|f| f == "1 + t^(-1/3)"),
        "1 + t^(-1) refuted by its cyclotomic factor",
    );
}

fn pipelines(o: &mut Outcome) {
    o.suite(run_suite("pg", 100, 7), 100);
    let pell = series("ladder(base=0; step=pell(1, 2); coef=const(1))");
    match coarse_factor(&pell, ZRing::Integers, &GroupSpec::rationals(1)) {
        Ok(cf) => o.expect(
            cf.up_to_monomials
                && cf.factorisation.factors.len() == 1
                && cf.factorisation.factors[0].1.verdict == Verdict::Certified,
            "q_n -> -sqrt(2) example is irreducible up to monomials",
        ),
        Err(e) => o.expect(false, &format!("q_n example: {e}")),
    }
    o.suite(run_suite("coarse", 20, 7), 20);
    match oz_gcd_demo() {
        Ok(r) => o.expect(
            r.verdict == OzVerdict::NoGcd && r.samples.iter().all(|s| s.consistent()),
            "oz demo reports a verified NoGCD witness",
        ),
        Err(e) => o.expect(false, &format!("oz demo: {e}")),
    }
}

fn appendix(o: &mut Outcome) {
    o.suite(run_suite("cofinal", 1000, 8), 1200);
}

fn cli_round_trip(o: &mut Outcome) {
    o.suite(run_suite("roundtrip", 500, 9), 500);
    o.expect(deterministic("roundtrip", 50, 9).unwrap_or(false), "seeded report is byte-identical");
    let args = ["hahnfactor", "--json", "props", "--suite", "pg", "--cases", "20", "--seed", "9"];
    let a = run(args);
    let b = run(args);
    o.expect(a.code == 0 && a.stdout == b.stdout, "CLI report is byte-identical");
    let s = parse_series_rank(HARM, 1).map(|s| s.to_string());
    o.expect(s.as_deref() == Ok(HARM), "canonical text is a fixed point");
}

#[test]
fn acceptance_criteria() {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "ordinal laws", s(10), ordinal_laws),
        criterion(2, "degree of products", s(60), theorem_d),
        criterion(3, "sup valuation", s(10), sup_valuation),
        criterion(4, "RV laws", s(30), rv_laws),
        criterion(5, "p multiplicativity", s(60), p_multiplicativity),
        criterion(6, "named certificates", s(10), named_certificates),
        criterion(7, "group and coarse pipelines", s(60), pipelines),
        criterion(8, "cofinal completion", s(30), appendix),
        criterion(9, "CLI round trip", s(10), cli_round_trip),
    ];
    let failed: Vec<String> = results.into_iter().flatten().collect();
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}
