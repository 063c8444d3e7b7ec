//! `hypersurf`: command-line front end. Every invocation prints one report
//! (JSON by default) and exits with the code of its worst verdict.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hypersurf::cache::{clear_dir, verify_dir};
use hypersurf::corpus::{run_corpus, CorpusReport, RunOptions};
use hypersurf::fpmod::FPModule;
use hypersurf::groebner::Limits;
use hypersurf::hypersurface::Mode;
use hypersurf::input::{format_matrix, parse_document, print_document, Document};
use hypersurf::report::Report;
use hypersurf::resolve::{detect_periodicity, ResolutionData};
use hypersurf::theorems::{TheoremReport, Verdict, DEFAULT_SEED};
use hypersurf::theta::DEFAULT_WINDOW;
use hypersurf::{Engine, Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "hypersurf",
    version,
    about = "Homological algebra over graded hypersurface rings"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Input file declaring the ring, modules and pairs.
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,
    /// Resolution prefix length.
    #[arg(long, global = true, default_value_t = 8)]
    steps: usize,
    /// Extra Tor indices checked for theta stabilization.
    #[arg(long, global = true, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    /// Seed for the random Bourbaki forms.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Persist resolutions in this directory.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Ceiling on Gröbner basis size.
    #[arg(long, global = true, default_value_t = 20_000)]
    max_basis: usize,
    /// Ceiling on the total degree of basis elements.
    #[arg(long, global = true, default_value_t = 64)]
    max_degree: u32,
    /// Omit timing so identical runs print identical bytes.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Over {
    #[value(name = "R", alias = "r")]
    R,
    #[value(name = "S", alias = "s")]
    S,
}

#[derive(Args, Debug)]
struct PairSel {
    /// A declared pair; alternative to --left/--right.
    #[arg(long, conflicts_with_all = ["left", "right"])]
    pair: Option<String>,
    #[arg(long, requires = "right")]
    left: Option<String>,
    #[arg(long, requires = "left")]
    right: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ring fingerprint, singularity profile and declared objects.
    Info,
    /// Canonical text of the input file.
    Print,
    /// theta(M, N) with its Tor lengths.
    Theta(PairSel),
    /// Serre's intersection multiplicity over S.
    Chi(PairSel),
    /// Length of Tor_i^R(M, N).
    Tor {
        #[command(flatten)]
        sel: PairSel,
        #[arg(long)]
        index: usize,
    },
    /// Length of Ext^i_R(M, N).
    Ext {
        #[command(flatten)]
        sel: PairSel,
        #[arg(long)]
        index: usize,
    },
    /// Minimal free resolution over R or S.
    Resolve {
        #[arg(long)]
        module: String,
        #[arg(long, value_enum, default_value_t = Over::R)]
        ring: Over,
    },
    /// Matrix factorization of an MCM module.
    Mf {
        #[arg(long)]
        module: String,
    },
    /// Module invariants: depth, rank, freeness, reflexivity.
    Invariants {
        #[arg(long)]
        module: String,
    },
    /// Run one theorem checker.
    #[command(subcommand)]
    Check(Check),
    /// Random Bourbaki sequence 0 -> R^(r-1) -> M -> I -> 0.
    Bourbaki {
        #[arg(long)]
        module: String,
    },
    /// Evaluate every expectation in one file.
    Run { file: PathBuf },
    /// Evaluate every `*.ring` file in a directory.
    Corpus { dir: PathBuf },
    /// Inspect or empty the --cache-dir directory.
    #[command(subcommand)]
    Cache(CacheCmd),
}

#[derive(Subcommand, Debug)]
enum Check {
    /// theta(N*, N) = 0 and Hom(N, N) MCM force N free.
    Endo {
        #[arg(long)]
        module: String,
    },
    /// theta(M*, N) = 0 and Ext^1(M, N) = 0 force M free or pd N finite.
    Rigidity(PairSel),
    /// Hom(M, N) MCM forces Ext^1(M, N) = 0.
    HomExt(PairSel),
    /// Ext^1(M, N) and Tor_1 of the dual syzygy cokernel have equal length.
    Bridge(PairSel),
    /// theta agrees with Serre's chi over S.
    ThetaChi(PairSel),
    /// theta(M, R/(g)) = 0.
    Principal {
        #[arg(long)]
        module: String,
        /// A nonzero form g; the check runs against R/(g).
        #[arg(long)]
        g: String,
    },
    /// theta is additive along a declared short exact sequence.
    Additivity {
        #[arg(long)]
        ses: String,
        #[arg(long = "with")]
        with: String,
    },
    /// Theta on every declared pair, as evidence against factoriality.
    Ufd,
}

#[derive(Subcommand, Debug)]
enum CacheCmd {
    /// Count entries and check every digest.
    Verify,
    /// Delete every entry.
    Clear,
}

struct Ctx {
    global: Global,
    engine: Engine,
}

impl Ctx {
    fn document(&self) -> Result<Document> {
        let path = self
            .global
            .input
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("this command needs --input FILE".into()))?;
        load(&self.engine, path)
    }

    fn options(&self) -> RunOptions {
        RunOptions {
            steps: self.global.steps,
            window: self.global.window,
            seed: self.global.seed,
        }
    }
}

fn load(engine: &Engine, path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_document(&text, engine).map_err(|e| match e {
        Error::Syntax { line, column, message } => Error::Syntax {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn pair_of(doc: &Document, sel: &PairSel) -> Result<(String, String, FPModule, FPModule)> {
    let (l, r) = match (&sel.pair, &sel.left, &sel.right) {
        (Some(p), _, _) => {
            let e = doc
                .pairs
                .iter()
                .find(|e| &e.name == p)
                .ok_or_else(|| Error::Semantic(format!("unknown pair `{p}`")))?;
            (e.left.clone(), e.right.clone())
        }
        (None, Some(l), Some(r)) => (l.clone(), r.clone()),
        _ => return Err(Error::InvalidArgument("give --pair or both --left and --right".into())),
    };
    let (m, n) = (doc.module(&l)?, doc.module(&r)?);
    Ok((l, r, m, n))
}

fn module_json(m: &FPModule) -> Value {
    json!({
        "gen_degrees": m.gen_degrees(),
        "relations": format_matrix(m.ctx().ring(), m.presentation()),
        "mode": m.ctx().mode(),
    })
}

fn resolution_json(res: &ResolutionData) -> Value {
    let ring = res.module.ctx().ring();
    json!({
        "betti": res.betti,
        "degrees": res.degrees,
        "complete": res.complete,
        "minimal": res.minimal,
        "differentials": res.differentials.iter().map(|d| format_matrix(ring, d)).collect::<Vec<_>>(),
    })
}

fn theorem(report: &mut Report, t: TheoremReport) -> Result<()> {
    report.verdicts.push(t.verdict);
    report.results = serde_json::to_value(&t).map_err(|e| Error::Engine(e.to_string()))?;
    Ok(())
}

fn corpus_into(report: &mut Report, c: &CorpusReport) -> Result<()> {
    // a computed value that contradicts its expectation counts as a violation
    let wrong_values = c
        .entries
        .iter()
        .flat_map(|e| &e.expectations)
        .filter(|x| !x.matched && x.error.is_none())
        .count();
    let verdict = if c.violations > 0 || wrong_values > 0 {
        Verdict::Violation
    } else if c.errors > 0 {
        Verdict::Error
    } else {
        Verdict::Pass
    };
    report.verdicts.push(verdict);
    report.results = serde_json::to_value(c).map_err(|e| Error::Engine(e.to_string()))?;
    Ok(())
}

fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "ring"))
        .collect();
    files.sort();
    Ok(files)
}

fn execute(cx: &Ctx, command: &Command, report: &mut Report) -> Result<()> {
    let e = &cx.engine;
    let g = &cx.global;
    match command {
        Command::Run { file } => {
            let doc = load(e, file)?;
            report.ring_fingerprint = Some(doc.ctx.fingerprint());
            let c = run_corpus(e, &[(file.display().to_string(), doc)], &cx.options());
            return corpus_into(report, &c);
        }
        Command::Corpus { dir } => {
            let entries = corpus_files(dir)?
                .into_iter()
                .map(|p| Ok((p.display().to_string(), load(e, &p)?)))
                .collect::<Result<Vec<_>>>()?;
            let c = run_corpus(e, &entries, &cx.options());
            return corpus_into(report, &c);
        }
        Command::Cache(cmd) => {
            let dir = g
                .cache_dir
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("cache commands need --cache-dir".into()))?;
            report.results = match cmd {
                CacheCmd::Verify => {
                    let v = verify_dir(dir)?;
                    report.verdicts.push(if v.corrupt.is_empty() {
                        Verdict::Pass
                    } else {
                        Verdict::Error
                    });
                    json!(v)
                }
                CacheCmd::Clear => json!({ "removed": clear_dir(dir)? }),
            };
            return Ok(());
        }
        _ => {}
    }

    let doc = cx.document()?;
    report.ring_fingerprint = Some(doc.ctx.fingerprint());
    match command {
        Command::Info => {
            let prof = doc.ctx.singularity_profile(e.limits())?;
            report.results = json!({
                "ring": doc.ctx.canonical_text(),
                "krull_dim": doc.ctx.krull_dim(e.limits())?,
                "f_degree": doc.ctx.f_degree(),
                "domain": doc.ctx.is_domain(),
                "singularity": prof,
                "modules": doc.modules.iter().map(|m| m.name.clone()).collect::<Vec<_>>(),
                "pairs": doc.pairs.iter().map(|p| json!([p.name, p.left, p.right])).collect::<Vec<_>>(),
                "sequences": doc.sequences.iter().map(|s| s.name.clone()).collect::<Vec<_>>(),
                "expectations": doc.expectations.len(),
            });
        }
        Command::Print => report.results = json!({ "canonical": print_document(&doc) }),
        Command::Theta(sel) => {
            let (l, r, m, n) = pair_of(&doc, sel)?;
            let t = e.theta_with_window(&m, &n, g.window)?.labelled(&l, &r);
            report.verdicts.push(Verdict::Pass);
            report.results = json!(t);
        }
        Command::Chi(sel) => {
            let (l, r, m, n) = pair_of(&doc, sel)?;
            report.results = json!({ "left": l, "right": r, "chi_s": e.serre_chi_s(&m, &n)? });
        }
        Command::Tor { sel, index } | Command::Ext { sel, index } => {
            let (l, r, m, n) = pair_of(&doc, sel)?;
            let is_tor = matches!(command, Command::Tor { .. });
            let h = if is_tor {
                e.tor_module(&m, &n, *index)?
            } else {
                e.ext_module(&m, &n, *index)?
            };
            let length = match h.length.finite() {
                Some(v) => json!(v),
                None => json!("inf"),
            };
            report.results = json!({
                "functor": if is_tor { "tor" } else { "ext" },
                "left": l, "right": r, "index": index,
                "length": length,
                "module": module_json(&e.minimal_presentation(&h.module)?),
            });
        }
        Command::Resolve { module, ring } => {
            let m = doc.module(module)?;
            let res = match ring {
                Over::R => e.resolve_over_r(&m, g.steps)?,
                Over::S => e.resolve_over_s(&m.with_mode(Mode::S))?,
            };
            let check = e.verify_resolution(&res)?;
            let mut v = resolution_json(&res);
            v["module"] = json!(module);
            v["over"] = json!(res.mode);
            v["check"] = json!(check);
            if *ring == Over::R {
                v["periodicity"] = match detect_periodicity(&res) {
                    Ok(i) => json!(i),
                    Err(_) => Value::Null,
                };
            }
            report
                .verdicts
                .push(if check.ok() { Verdict::Pass } else { Verdict::Violation });
            report.results = v;
        }
        Command::Mf { module } => {
            let m = doc.module(module)?;
            let mf = e.matrix_factorization(&m)?;
            e.verify_factorization(m.ctx(), &mf)?;
            let ring = m.ctx().ring();
            report.verdicts.push(Verdict::Pass);
            report.results = json!({
                "module": module,
                "size": mf.size(),
                "a": format_matrix(ring, &mf.a),
                "b": format_matrix(ring, &mf.b),
                "verified": true,
            });
        }
        Command::Invariants { module } => {
            let m = doc.module(module)?;
            let mut v = json!({
                "module": module,
                "presentation": module_json(&e.minimal_presentation(&m)?),
                "depth": e.depth(&m)?,
                "pd_s": e.pd_s(&m)?,
                "krull_dim": e.krull_dim(&m)?,
                "mcm": e.is_mcm(&m)?,
                "free": e.is_free(&m)?.0,
                "length": e.length(&m)?.finite(),
            });
            if m.ctx().is_domain() && m.ctx().mode() == Mode::R {
                v["rank"] = json!(e.generic_rank(&m)?);
                v["reflexive"] = json!(e.biduality_defect(&m)?.reflexive());
                v["locally_free_on_punctured"] = json!(e.is_locally_free_on_punctured(&m)?.0);
            }
            report.results = v;
        }
        Command::Check(c) => {
            let t = match c {
                Check::Endo { module } => e.check_endo_mcm(&doc.module(module)?)?,
                Check::Rigidity(sel) => {
                    let (.., m, n) = pair_of(&doc, sel)?;
                    e.check_rigidity(&m, &n)?
                }
                Check::HomExt(sel) => {
                    let (.., m, n) = pair_of(&doc, sel)?;
                    e.check_hom_ext_vanishing(&m, &n)?
                }
                Check::Bridge(sel) => {
                    let (.., m, n) = pair_of(&doc, sel)?;
                    e.ext1_tor1_bridge_check(&m, &n)?
                }
                Check::ThetaChi(sel) => {
                    let (.., m, n) = pair_of(&doc, sel)?;
                    e.theta_equals_chi_check(&m, &n)?
                }
                Check::Principal { module, g } => {
                    let poly = doc.ctx.ring().parse(g)?;
                    e.theta_principal_vanishing(&doc.module(module)?, &poly)?
                }
                Check::Additivity { ses, with } => {
                    let s = doc.sequence(ses)?;
                    e.theta_additivity_check(&doc.module(with)?, &s.ses)?
                }
                Check::Ufd => {
                    let mods = doc
                        .pairs
                        .iter()
                        .map(|p| {
                            Ok((
                                p.left.as_str(),
                                doc.module(&p.left)?,
                                p.right.as_str(),
                                doc.module(&p.right)?,
                            ))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let refs: Vec<_> = mods.iter().map(|(a, m, b, n)| (*a, m, *b, n)).collect();
                    e.ufd_theta_probe(&doc.ctx, &refs)?
                }
            };
            theorem(report, t)?;
        }
        Command::Bourbaki { module } => {
            let t = e.bourbaki_report(&doc.module(module)?, &[], g.seed)?;
            theorem(report, t)?;
        }
        Command::Run { .. } | Command::Corpus { .. } | Command::Cache(_) => unreachable!("handled above"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let g = &cli.global;
    let limits = Limits {
        max_basis: g.max_basis,
        max_degree: g.max_degree,
        max_steps: Limits::default().max_steps.max(g.steps).max(2 * 2 + 3 + g.window),
    };
    let engine = match &g.cache_dir {
        Some(dir) => match Engine::with_cache_dir(limits, dir) {
            Ok(e) => e,
            Err(err) => {
                eprintln!("cannot open cache directory {}: {err}", dir.display());
                return ExitCode::from(1);
            }
        },
        None => Engine::new(limits),
    };
    let cx = Ctx {
        global: cli.global,
        engine,
    };
    let started = Instant::now();
    let mut report = Report::new(argv.iter().skip(1).cloned().collect());
    let outcome = execute(&cx, &cli.command, &mut report);
    if let Err(err) = &outcome {
        report = report.failed(err);
    }
    if !cx.global.deterministic {
        report.timing_ms = Some(started.elapsed().as_millis() as u64);
    }
    match cx.global.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    ExitCode::from(report.exit_code(outcome.as_ref().err()) as u8)
}
