//! Executes the expectations and the theta sweep declared in input files.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::fpmod::FPModule;
use crate::groebner::Count;
use crate::input::{normalize_value, Document, Expectation};
use crate::resolve::detect_periodicity;
use crate::theorems::{TheoremReport, Verdict, DEFAULT_SEED};
use crate::theta::DEFAULT_WINDOW;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Default resolution length for `betti` and `periodicity`.
    pub steps: usize,
    pub window: usize,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            steps: 8,
            window: DEFAULT_WINDOW,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectationOutcome {
    pub op: String,
    pub on: String,
    pub line: usize,
    pub provenance: String,
    pub expected: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// θ on one declared pair, with the stabilization evidence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairTheta {
    pub pair: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<i64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tor_lengths: BTreeMap<usize, u64>,
    pub stabilized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryReport {
    pub source: String,
    pub ring_fingerprint: String,
    pub expectations: Vec<ExpectationOutcome>,
    pub theta: Vec<PairTheta>,
    pub checks: Vec<TheoremReport>,
    pub violations: usize,
    pub mismatches: usize,
    pub errors: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusReport {
    pub entries: Vec<EntryReport>,
    pub violations: usize,
    pub mismatches: usize,
    pub errors: usize,
    pub pass: bool,
    pub warnings: Vec<String>,
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn count_text(c: Count) -> String {
    match c {
        Count::Finite(n) => n.to_string(),
        Count::Infinite => "inf".to_string(),
    }
}

fn list_text(v: &[usize]) -> String {
    v.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",")
}

struct Evaluated {
    actual: String,
    report: Option<TheoremReport>,
}

impl Evaluated {
    fn value(actual: impl Into<String>) -> Result<Self> {
        Ok(Evaluated {
            actual: actual.into(),
            report: None,
        })
    }

    fn check(report: TheoremReport) -> Result<Self> {
        Ok(Evaluated {
            actual: report.verdict.to_string(),
            report: Some(report),
        })
    }
}

fn arg<'a>(x: &'a Expectation, key: &str) -> Result<&'a str> {
    x.args
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Semantic(format!("`{}` expectations need `{key}`", x.op)))
}

fn usize_arg(x: &Expectation, key: &str, default: Option<usize>) -> Result<usize> {
    match (x.args.get(key), default) {
        (Some(v), _) => v
            .parse()
            .map_err(|_| Error::Semantic(format!("`{key}` must be a non-negative integer"))),
        (None, Some(d)) => Ok(d),
        (None, None) => Err(Error::Semantic(format!("`{}` expectations need `{key}`", x.op))),
    }
}

fn evaluate(engine: &Engine, doc: &Document, x: &Expectation, opts: &RunOptions) -> Result<Evaluated> {
    let module = || doc.module(&x.on);
    let pair = || doc.pair(&x.on);
    match x.op.as_str() {
        "theta" => {
            let (m, n) = pair()?;
            Evaluated::value(engine.theta_with_window(&m, &n, opts.window)?.theta.to_string())
        }
        "chi" => {
            let (m, n) = pair()?;
            Evaluated::value(engine.serre_chi_s(&m, &n)?.to_string())
        }
        "tor" | "ext" => {
            let (m, n) = pair()?;
            let i = usize_arg(x, "index", None)?;
            let h = if x.op == "tor" {
                engine.tor_module(&m, &n, i)?
            } else {
                engine.ext_module(&m, &n, i)?
            };
            Evaluated::value(count_text(h.length))
        }
        "theta-chi" => {
            let (m, n) = pair()?;
            Evaluated::check(engine.theta_equals_chi_check(&m, &n)?)
        }
        "rigidity" => {
            let (m, n) = pair()?;
            Evaluated::check(engine.check_rigidity(&m, &n)?)
        }
        "hom-ext" => {
            let (m, n) = pair()?;
            Evaluated::check(engine.check_hom_ext_vanishing(&m, &n)?)
        }
        "bridge" => {
            let (m, n) = pair()?;
            Evaluated::check(engine.ext1_tor1_bridge_check(&m, &n)?)
        }
        "betti" => {
            let steps = usize_arg(x, "steps", Some(opts.steps))?;
            Evaluated::value(list_text(&engine.resolve_over_r(&module()?, steps)?.betti))
        }
        "betti-s" => Evaluated::value(list_text(&engine.resolve_over_s(&module()?)?.betti)),
        "periodicity" => {
            let steps = usize_arg(x, "steps", Some(opts.steps))?;
            let res = engine.resolve_over_r(&module()?, steps)?;
            Evaluated::value(detect_periodicity(&res)?.to_string())
        }
        "resolution-ok" => {
            let steps = usize_arg(x, "steps", Some(opts.steps))?;
            let res = engine.resolve_over_r(&module()?, steps)?;
            Evaluated::value(yes_no(engine.verify_resolution(&res)?.ok()))
        }
        "depth" => Evaluated::value(engine.depth(&module()?)?.to_string()),
        "pd-s" => Evaluated::value(engine.pd_s(&module()?)?.to_string()),
        "rank" => Evaluated::value(engine.generic_rank(&module()?)?.to_string()),
        "length" => Evaluated::value(count_text(engine.length(&module()?)?)),
        "krull-dim" => Evaluated::value(engine.krull_dim(&module()?)?.to_string()),
        "mf-size" => Evaluated::value(engine.matrix_factorization(&module()?)?.size().to_string()),
        "presentation" => {
            let mm = engine.minimal_presentation(&module()?)?;
            Evaluated::value(format!("{},{}", mm.ngens(), mm.nrels()))
        }
        "free" => Evaluated::value(yes_no(engine.is_free(&module()?)?.0)),
        "mcm" => Evaluated::value(yes_no(engine.is_mcm(&module()?)?)),
        "reflexive" => Evaluated::value(yes_no(engine.biduality_defect(&module()?)?.reflexive())),
        "locally-free" => Evaluated::value(yes_no(engine.is_locally_free_on_punctured(&module()?)?.0)),
        "finite-pd" => Evaluated::value(yes_no(engine.has_finite_pd(&module()?)?)),
        "endo" => Evaluated::check(engine.check_endo_mcm(&module()?)?),
        "principal" => {
            let g = doc.ctx.ring().parse(arg(x, "g")?)?;
            Evaluated::check(engine.theta_principal_vanishing(&module()?, &g)?)
        }
        "additivity" => {
            let ses = doc.sequence(&x.on)?;
            let m = doc.module(arg(x, "with")?)?;
            Evaluated::check(engine.theta_additivity_check(&m, &ses.ses)?)
        }
        "bourbaki" => Evaluated::check(engine.bourbaki_report(&module()?, &[], opts.seed)?),
        "isolated" | "jacobian-dim" => {
            ring_target(x)?;
            let prof = doc.ctx.singularity_profile(engine.limits())?;
            if x.op == "isolated" {
                Evaluated::value(yes_no(prof.isolated))
            } else {
                Evaluated::value(prof.jacobian_dim.to_string())
            }
        }
        "ufd-probe" => {
            ring_target(x)?;
            let mods: Vec<(String, FPModule, String, FPModule)> = doc
                .pairs
                .iter()
                .map(|p| {
                    Ok((
                        p.left.clone(),
                        doc.module(&p.left)?,
                        p.right.clone(),
                        doc.module(&p.right)?,
                    ))
                })
                .collect::<Result<_>>()?;
            let refs: Vec<(&str, &FPModule, &str, &FPModule)> =
                mods.iter().map(|(a, m, b, n)| (a.as_str(), m, b.as_str(), n)).collect();
            let report = engine.ufd_theta_probe(&doc.ctx, &refs)?;
            let conclusion = report.measured.get("conclusion").and_then(|v| v.as_str()).unwrap_or("");
            let actual = if conclusion.starts_with("not") {
                "not-ufd"
            } else {
                "consistent"
            };
            Ok(Evaluated {
                actual: actual.to_string(),
                report: Some(report),
            })
        }
        other => Err(Error::Semantic(format!("unknown expectation op `{other}`"))),
    }
}

fn ring_target(x: &Expectation) -> Result<()> {
    if x.on != "ring" {
        return Err(Error::Semantic(format!("`{}` applies to `on = ring`", x.op)));
    }
    Ok(())
}

fn pair_theta(engine: &Engine, doc: &Document, name: &str, window: usize) -> PairTheta {
    let blank = PairTheta {
        pair: name.to_string(),
        verdict: Verdict::Error,
        theta: None,
        tor_lengths: BTreeMap::new(),
        stabilized: false,
        witness: None,
    };
    let computed = doc
        .pair(name)
        .and_then(|(m, n)| engine.theta_with_window(&m, &n, window));
    match computed {
        Ok(t) => PairTheta {
            verdict: Verdict::Pass,
            theta: Some(t.theta),
            stabilized: t.stabilized,
            tor_lengths: t.tor_lengths,
            ..blank
        },
        Err(Error::Ineligible(why)) => PairTheta {
            verdict: Verdict::Ineligible,
            witness: Some(why),
            ..blank
        },
        Err(e) => PairTheta {
            witness: Some(e.to_string()),
            ..blank
        },
    }
}

/// Run one parsed file: every expectation, then θ on every pair.
pub fn run_document(engine: &Engine, doc: &Document, source: &str, opts: &RunOptions) -> EntryReport {
    let mut expectations = Vec::with_capacity(doc.expectations.len());
    let mut checks = Vec::new();
    for x in &doc.expectations {
        let mut outcome = ExpectationOutcome {
            op: x.op.clone(),
            on: x.on.clone(),
            line: x.line,
            provenance: x.provenance.clone(),
            expected: x.value.clone(),
            actual: None,
            matched: false,
            error: None,
        };
        match evaluate(engine, doc, x, opts) {
            Ok(ev) => {
                let actual = normalize_value(&ev.actual);
                outcome.matched = actual.eq_ignore_ascii_case(&x.value);
                outcome.actual = Some(actual);
                if let Some(mut r) = ev.report {
                    r.inputs.insert("on".into(), x.on.clone());
                    checks.push(r);
                }
            }
            Err(e) => outcome.error = Some(e.to_string()),
        }
        expectations.push(outcome);
    }
    let theta: Vec<PairTheta> = doc
        .pairs
        .iter()
        .map(|p| pair_theta(engine, doc, &p.name, opts.window))
        .collect();
    let violations = checks.iter().filter(|c| c.verdict == Verdict::Violation).count();
    let mismatches = expectations.iter().filter(|o| !o.matched).count();
    let errors = expectations.iter().filter(|o| o.error.is_some()).count()
        + theta.iter().filter(|t| t.verdict == Verdict::Error).count();
    EntryReport {
        source: source.to_string(),
        ring_fingerprint: doc.ctx.fingerprint(),
        pass: violations == 0 && mismatches == 0 && errors == 0,
        expectations,
        theta,
        checks,
        violations,
        mismatches,
        errors,
    }
}

/// Runs entries concurrently against one shared engine; the report keeps
/// the input order.
pub fn run_corpus(engine: &Engine, entries: &[(String, Document)], opts: &RunOptions) -> CorpusReport {
    let reports: Vec<EntryReport> = std::thread::scope(|s| {
        let handles: Vec<_> = entries
            .iter()
            .map(|(name, doc)| s.spawn(move || run_document(engine, doc, name, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("corpus worker panicked"))
            .collect()
    });
    let warnings = if entries.is_empty() {
        vec!["empty corpus: nothing was checked".to_string()]
    } else {
        Vec::new()
    };
    let violations = reports.iter().map(|r| r.violations).sum();
    let mismatches = reports.iter().map(|r| r.mismatches).sum();
    let errors = reports.iter().map(|r| r.errors).sum();
    CorpusReport {
        pass: reports.iter().all(|r| r.pass),
        entries: reports,
        violations,
        mismatches,
        errors,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::parse_document;

    const SMALL: &str = "\
ring { p = 101  vars = x y z w  f = x*y - z*w  domain = yes }
module Mxz { quotient = x, z }
module Myw { quotient = y, w }
pair P { left = Mxz  right = Myw }
expect { op = theta  on = P  value = 1  provenance = oracle }
expect { op = theta-chi  on = P  value = PASS  provenance = identity }
expect { op = isolated  on = ring  value = yes  provenance = jacobian }
";

    #[test]
    fn runs_and_detects_mismatch() {
        let e = Engine::default();
        let doc = parse_document(SMALL, &e).unwrap();
        let opts = RunOptions::default();
        let ok = run_document(&e, &doc, "small", &opts);
        assert!(ok.pass, "{ok:#?}");
        assert_eq!(ok.theta[0].theta, Some(1));
        assert!(ok.theta[0].stabilized);

        let corrupted = parse_document(&SMALL.replace("value = 1 ", "value = 2 "), &e).unwrap();
        let bad = run_document(&e, &corrupted, "bad", &opts);
        assert!(!bad.pass);
        assert_eq!(bad.mismatches, 1);
        assert_eq!(bad.expectations[0].line, 5);
        assert_eq!(bad.expectations[0].actual.as_deref(), Some("1"));
    }

    #[test]
    fn empty_corpus_passes_with_warning() {
        let r = run_corpus(&Engine::default(), &[], &RunOptions::default());
        assert!(r.pass);
        assert_eq!(r.warnings.len(), 1);
    }
}
