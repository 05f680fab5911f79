//! Command dispatch, report rendering and the exit-code contract.

use std::cmp::Ordering;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use crate::cli::dsl::parse_series;
use crate::cli::json::{certificate_json, cut_json, SCHEMA};
use crate::cli::props::{run_suite, SUITES};
use crate::error::{HahnError, Result};
use crate::exponents::GroupSpec;
use crate::factor::certify::{certify_irreducible, certify_prime};
use crate::factor::coarse::coarse_factor;
use crate::factor::oz::{oz_gcd_demo, OzVerdict};
use crate::factor::{factor_theorem_a, p_of_series, Certificate, Check, Factorisation, Verdict, ZRing};
use crate::grpalg::{gcd, p_g, FracPoly, Units};
use crate::rvcore::instances::{degree_class_rep, SeriesDegree};
use crate::rvcore::rv_equiv;
use crate::rvcore::table1::table1;
use crate::series::closed::ClosedSeries;
use crate::series::forms::{normal_form_in, NfComponent};
use crate::series::lazy::prefix_len_from_env;
use crate::supcomp::{coarsely_equal, cut_compare};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "hahnfactor", version, about = "Factorisation of generalised power series with non-positive exponents")]
struct Cli {
    /// Emit a versioned JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Number of terms used for prefix-bounded checks.
    #[arg(long, global = true, value_name = "N")]
    prefix: Option<usize>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ZArg {
    Int,
    Rat,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    Irreducible,
    Prime,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Order type of the support.
    Ot { series: String },
    /// Ordinal degree.
    Deg { series: String },
    /// Normal form as shifted principal pieces.
    Nf {
        series: String,
        #[arg(long)]
        group: Option<String>,
    },
    /// Degree class in the RV monoid; with a second series, tests equivalence.
    Rv { series: String, other: Option<String> },
    /// Maximal finite-support divisor.
    Pb { series: String },
    /// Monic content with exponents in a subgroup.
    Pg {
        poly: String,
        #[arg(long, default_value = "Q")]
        group: String,
    },
    /// Greatest common divisor of two finite-support series.
    Gcd {
        p: String,
        q: String,
        /// Treat monomials as units.
        #[arg(long)]
        monomials: bool,
    },
    /// Certificate of irreducibility or primality.
    Certify { property: Property, series: String },
    /// Factorisation over the real exponent group.
    Factor { series: String },
    /// Coarse factorisation over a lexicographic exponent group.
    CoarseFactor {
        series: String,
        #[arg(long = "Z", value_enum, default_value = "int")]
        z: ZArg,
        #[arg(long)]
        group: Option<String>,
    },
    /// Compares the suprema of two series.
    Supcmp {
        b: String,
        c: String,
        #[arg(long)]
        group: Option<String>,
    },
    /// Two coarsely irreducible series without a greatest common divisor.
    OzDemo,
    /// Randomised property suites.
    Props {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Valued-ring instantiation table.
    Table1 {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit code and rendered report of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    text: Vec<String>,
    json: Json,
}

impl Report {
    fn new(verb: &str, code: i32) -> Self {
        Report { code, text: Vec::new(), json: json!({ "schema": SCHEMA, "verb": verb }) }
    }

    fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.text.push(s.into());
        self
    }

    fn set(&mut self, k: &str, v: Json) -> &mut Self {
        self.json[k] = v;
        self
    }
}

pub fn exit_code(e: &HahnError) -> i32 {
    match e {
        HahnError::Parse { .. } | HahnError::Schema(_) | HahnError::Domain(_) | HahnError::Precondition(_) => EXIT_USAGE,
        HahnError::ClosureFailure(_) | HahnError::DepthExceeded(_) => EXIT_UNKNOWN,
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Certified => EXIT_OK,
        Verdict::Refuted => EXIT_REFUTED,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn group_for(spec: &Option<String>, rank: usize) -> Result<GroupSpec> {
    match spec {
        Some(s) => Ok(GroupSpec::parse(s)?.with_rank(rank)),
        None => Ok(GroupSpec::real(rank)),
    }
}

fn finite(text: &str) -> Result<FracPoly> {
    let s = parse_series(text)?;
    FracPoly::from_series(&s).ok_or_else(|| HahnError::domain("a finite-support series is required"))
}

fn cert_line(c: &Certificate) -> String {
    let mut s = format!("{} ({})", c.verdict, c.criterion);
    for (k, v) in &c.witnesses {
        s.push_str(&format!("; {k} = {v}"));
    }
    if let Some(n) = c.prefix_checked {
        s.push_str(&format!("; checked on {n} terms"));
    }
    s
}

fn check_json(c: Check) -> Json {
    match c {
        Check::Exact => json!({ "kind": "exact" }),
        Check::Prefix(n) => json!({ "kind": "prefix", "terms": n }),
        Check::Failed => json!({ "kind": "failed" }),
    }
}

fn factorisation_report(r: &mut Report, f: &Factorisation, b: &ClosedSeries) -> Result<()> {
    let check = f.verify(b)?;
    r.line(format!("ring = {}", f.context));
    r.line(format!("unit = {}", f.unit));
    r.line(format!("p = {}", f.p));
    for (i, (s, c)) in f.factors.iter().enumerate() {
        r.line(format!("factor {} = {}", i + 1, s));
        r.line(format!("  {}", cert_line(c)));
    }
    if let Some(n) = f.count_bound {
        r.line(format!("factor count bound = {n}"));
    }
    for (k, v) in &f.notes {
        r.line(format!("{k}: {v}"));
    }
    r.line(match check {
        Check::Exact => "check: exact".to_string(),
        Check::Prefix(n) => format!("check: first {n} terms agree"),
        Check::Failed => "check: FAILED".to_string(),
    });
    let factors: Vec<Json> =
        f.factors.iter().map(|(s, c)| json!({ "series": s.to_string(), "certificate": certificate_json(c) })).collect();
    r.set("ring", json!(f.context.to_string()))
        .set("unit", json!(f.unit.to_string()))
        .set("p", json!(f.p.to_string()))
        .set("factors", json!(factors))
        .set("countBound", json!(f.count_bound))
        .set("notes", json!(f.notes))
        .set("check", check_json(check));
    if check == Check::Failed {
        r.code = EXIT_REFUTED;
    } else if f.factors.iter().any(|(_, c)| c.verdict == Verdict::Unknown) {
        r.code = EXIT_UNKNOWN;
    }
    Ok(())
}

fn dispatch(verb: Verb) -> Result<Report> {
    Ok(match verb {
        Verb::Ot { series } => {
            let b = parse_series(&series)?;
            let o = b.order_type();
            let mut r = Report::new("ot", EXIT_OK);
            r.line(format!("ot = {o}")).set("ot", json!(o.to_string()));
            r
        }
        Verb::Deg { series } => {
            let b = parse_series(&series)?;
            let d = b.degree();
            let mut r = Report::new("deg", EXIT_OK);
            r.line(format!("deg = {d}")).set("deg", json!(d.to_string()));
            r
        }
        Verb::Nf { series, group } => {
            let b = parse_series(&series)?;
            let g = group_for(&group, b.rank)?;
            let nf = normal_form_in(&b, &g)?;
            let mut r = Report::new("nf", EXIT_OK);
            let mut parts = Vec::new();
            for c in &nf {
                match c {
                    NfComponent::Shifted { principal, shift } => {
                        r.line(format!("t^({shift}) * [{principal}]"));
                        parts.push(json!({ "kind": "shifted", "shift": shift.to_string(), "principal": principal.to_string() }));
                    }
                    NfComponent::NotInGroup { component, sup } => {
                        r.line(format!("[{component}] with sup {sup} outside the group"));
                        parts.push(json!({ "kind": "notInGroup", "component": component.to_string(), "sup": cut_json(sup) }));
                    }
                }
            }
            r.set("components", json!(parts));
            r
        }
        Verb::Rv { series, other } => {
            let b = parse_series(&series)?;
            let rep = degree_class_rep(&b)?;
            let mut r = Report::new("rv", EXIT_OK);
            r.line(format!("deg = {}", b.degree())).line(format!("class representative = {rep}"));
            r.set("deg", json!(b.degree().to_string())).set("representative", json!(rep.to_string()));
            if let Some(o) = other {
                let c = parse_series(&o)?;
                let eq = rv_equiv(&SeriesDegree { rank: b.rank.max(c.rank) }, &b, &c)?;
                r.line(format!("equivalent = {eq}")).set("equivalent", json!(eq));
                if !eq {
                    r.code = EXIT_REFUTED;
                }
            }
            r
        }
        Verb::Pb { series } => {
            let b = parse_series(&series)?;
            let p = p_of_series(&b)?;
            let mut r = Report::new("pb", EXIT_OK);
            r.line(format!("p = {p}")).set("p", json!(p.to_string()));
            r
        }
        Verb::Pg { poly, group } => {
            let p = finite(&poly)?;
            let g = GroupSpec::parse(&group)?.with_rank(p.rank);
            let pg = p_g(&p, &g)?;
            let mut r = Report::new("pg", EXIT_OK);
            r.line(format!("p_G = {pg}")).set("pG", json!(pg.to_string()));
            r
        }
        Verb::Gcd { p, q, monomials } => {
            let (p, q) = (finite(&p)?, finite(&q)?);
            let units = if monomials { Units::Monomials } else { Units::Constants };
            let d = gcd(&p, &q, units)?;
            let mut r = Report::new("gcd", EXIT_OK);
            r.line(format!("gcd = {d}")).set("gcd", json!(d.to_string()));
            r
        }
        Verb::Certify { property, series } => {
            let b = parse_series(&series)?;
            let (name, c) = match property {
                Property::Irreducible => ("irreducible", certify_irreducible(&b)),
                Property::Prime => ("prime", certify_prime(&b)),
            };
            let mut r = Report::new("certify", verdict_code(c.verdict));
            r.line(format!("{name}: {}", cert_line(&c))).set("property", json!(name)).set("certificate", certificate_json(&c));
            r
        }
        Verb::Factor { series } => {
            let b = parse_series(&series)?;
            let f = factor_theorem_a(&b)?;
            let mut r = Report::new("factor", EXIT_OK);
            factorisation_report(&mut r, &f, &b)?;
            r
        }
        Verb::CoarseFactor { series, z, group } => {
            let b = parse_series(&series)?;
            let g = group_for(&group, b.rank)?;
            let z = match z {
                ZArg::Int => ZRing::Integers,
                ZArg::Rat => ZRing::Rationals,
            };
            let cf = coarse_factor(&b, z, &g)?;
            let mut r = Report::new("coarse-factor", EXIT_OK);
            r.set("sigma", json!(cf.sigma + 1))
                .set("phi", json!(cf.phi.to_string()))
                .set("coarseP", json!(cf.coarse_p.to_string()))
                .set("upToMonomials", json!(cf.up_to_monomials));
            factorisation_report(&mut r, &cf.factorisation, &b)?;
            r
        }
        Verb::Supcmp { b, c, group } => {
            let (b, c) = (parse_series(&b)?, parse_series(&c)?);
            let rank = b.rank.max(c.rank);
            let g = group_for(&group, rank)?;
            let (sb, sc) = match (b.sup_in(&g), c.sup_in(&g)) {
                (Some(x), Some(y)) => (x, y),
                _ => return Err(HahnError::pre("the zero series has no supremum")),
            };
            let ord = match cut_compare(&sb, &sc, &g) {
                Ordering::Less => "<",
                Ordering::Equal => "=",
                Ordering::Greater => ">",
            };
            let coarse = coarsely_equal(&sb, &sc, &g);
            let mut r = Report::new("supcmp", EXIT_OK);
            r.line(format!("sup b = {sb}"))
                .line(format!("sup c = {sc}"))
                .line(format!("sup b {ord} sup c"))
                .line(format!("coarsely equal = {coarse}"));
            r.set("supB", cut_json(&sb)).set("supC", cut_json(&sc)).set("order", json!(ord)).set("coarselyEqual", json!(coarse));
            r
        }
        Verb::OzDemo => {
            let rep = oz_gcd_demo()?;
            let code = if rep.verdict == OzVerdict::NoGcd { EXIT_OK } else { EXIT_REFUTED };
            let mut r = Report::new("oz-demo", code);
            r.line(format!("b = {}", rep.b))
                .line(format!("  {}", cert_line(&rep.b_certificate)))
                .line(format!("c = {}", rep.c))
                .line(format!("  {}", cert_line(&rep.c_certificate)))
                .line(format!("d = {}", rep.d));
            for (name, s) in &rep.cofactors {
                r.line(format!("{name} = {s}"));
            }
            r.line(format!("1/d = {} (not in the ring, so d^2 does not divide d)", rep.d_inverse));
            let mut samples = Vec::new();
            for s in &rep.samples {
                r.line(format!(
                    "sample {}: divides b = {}, divides c = {}, dominated = {} ({})",
                    s.d, s.divides_b, s.divides_c, s.dominated, s.witness
                ));
                samples.push(json!({
                    "d": s.d.to_string(),
                    "dividesB": s.divides_b,
                    "dividesC": s.divides_c,
                    "dominated": s.dominated,
                    "witness": s.witness,
                }));
            }
            r.line(format!("verdict = {}", rep.verdict));
            r.set("b", json!(rep.b.to_string()))
                .set("c", json!(rep.c.to_string()))
                .set("bCertificate", certificate_json(&rep.b_certificate))
                .set("cCertificate", certificate_json(&rep.c_certificate))
                .set("d", json!(rep.d.to_string()))
                .set("cofactors", json!(rep.cofactors.iter().map(|(k, s)| json!({ "name": k, "series": s.to_string() })).collect::<Vec<_>>()))
                .set("dInverse", json!(rep.d_inverse.to_string()))
                .set("samples", json!(samples))
                .set("verdict", json!(rep.verdict.to_string()));
            r
        }
        Verb::Props { suite, cases, seed } => {
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(HahnError::Parse {
                    line: 1,
                    column: 1,
                    message: format!("unknown suite '{suite}'; expected one of {} or all", SUITES.join(", ")),
                });
            };
            let mut r = Report::new("props", EXIT_OK);
            let mut reports = Vec::new();
            for name in names {
                let s = run_suite(name, cases, seed)?;
                r.line(format!("{}: {}/{} passed", s.suite, s.passed, s.cases));
                for f in &s.failures {
                    r.line(format!("  {f}"));
                }
                if !s.ok() {
                    r.code = EXIT_REFUTED;
                }
                reports.push(s.to_json());
            }
            r.set("seed", json!(seed)).set("suites", json!(reports));
            r
        }
        Verb::Table1 { p, seed } => {
            let rows = table1(p, seed)?;
            let mut r = Report::new("table1", EXIT_OK);
            let mut js = Vec::new();
            for row in &rows {
                r.line(format!("{} | RV0 = {} | RV* = {} | RV_m = {} | hat = {}", row.ring, row.rv0, row.rv_star, row.rv_m, row.hat));
                for (name, ok) in &row.checks {
                    r.line(format!("  {name}: {}", if *ok { "ok" } else { "FAILED" }));
                }
                if !row.passed() {
                    r.code = EXIT_REFUTED;
                }
                js.push(json!({
                    "ring": row.ring,
                    "rv0": row.rv0,
                    "rvStar": row.rv_star,
                    "rvM": row.rv_m,
                    "hat": row.hat,
                    "checks": row.checks.iter().map(|(k, ok)| json!({ "name": k, "ok": ok })).collect::<Vec<_>>(),
                }));
            }
            r.set("p", json!(p)).set("seed", json!(seed)).set("rows", json!(js));
            r
        }
    })
}

/// Parses `argv` (including the program name), evaluates the command and renders the report.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if let Some(n) = cli.prefix {
        if n == 0 {
            return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: "--prefix must be positive\n".into() };
        }
        std::env::set_var("HAHN_PREFIX_LEN", n.to_string());
    }
    let verb = verb_name(&cli.verb);
    match dispatch(cli.verb) {
        Ok(mut r) => {
            let code = r.code;
            r.set("prefixLen", json!(prefix_len_from_env())).set("exitCode", json!(code));
            let stdout = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&r.json).expect("serialisable"))
            } else {
                let mut s = r.text.join("\n");
                s.push('\n');
                s
            };
            Outcome { code: r.code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.json {
                let j = json!({ "schema": SCHEMA, "verb": verb, "error": e.to_string(), "exitCode": code });
                Outcome { code, stdout: format!("{}\n", serde_json::to_string_pretty(&j).expect("serialisable")), stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") }
            }
        }
    }
}

fn verb_name(v: &Verb) -> &'static str {
    match v {
        Verb::Ot { .. } => "ot",
        Verb::Deg { .. } => "deg",
        Verb::Nf { .. } => "nf",
        Verb::Rv { .. } => "rv",
        Verb::Pb { .. } => "pb",
        Verb::Pg { .. } => "pg",
        Verb::Gcd { .. } => "gcd",
        Verb::Certify { .. } => "certify",
        Verb::Factor { .. } => "factor",
        Verb::CoarseFactor { .. } => "coarse-factor",
        Verb::Supcmp { .. } => "supcmp",
        Verb::OzDemo => "oz-demo",
        Verb::Props { .. } => "props",
        Verb::Table1 { .. } => "table1",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("hahnfactor").chain(args.iter().copied()))
    }

    #[test]
    fn positive_exponent_is_usage_error() {
        assert_eq!(go(&["ot", "t^(1)"]).code, EXIT_USAGE);
    }

    #[test]
    fn unknown_verb_and_flag_rejected() {
        assert_eq!(go(&["frobnicate"]).code, EXIT_USAGE);
        assert_eq!(go(&["ot", "--bogus", "1"]).code, EXIT_USAGE);
    }

    #[test]
    fn certify_prime_harmonic() {
        let o = go(&["--json", "certify", "prime", "ladder(limit=0; step=harm(1); coef=const(1))"]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
        let j: Json = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(j["certificate"]["criterion"], "ThmF");
    }

    #[test]
    fn simple_verbs() {
        let o = go(&["ot", "1 + ladder(limit=0; step=harm(1); coef=const(1))"]);
        assert_eq!(o.code, EXIT_OK);
        assert_eq!(o.stdout, "ot = w + 1\n");
        let o = go(&["deg", "ladder(limit=0; step=harm(1); coef=const(1))"]);
        assert_eq!(o.stdout, "deg = 1\n");
        let o = go(&["gcd", "1 - t^(-2)", "1 - t^(-1)"]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    }

    #[test]
    fn props_report_is_deterministic() {
        let a = go(&["--json", "props", "--suite", "degree", "--cases", "5", "--seed", "7"]);
        let b = go(&["--json", "props", "--suite", "degree", "--cases", "5", "--seed", "7"]);
        assert_eq!(a.code, EXIT_OK);
        assert_eq!(a.stdout, b.stdout);
    }
}
