//! The `extiso` command line: file parsing, dispatch, and report emission.

pub mod report;
pub mod ringfile;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use extiso_core::cayley::{parse_element_list, parse_gtab, subgroup_generated};
use extiso_core::finring::unit_group;
use extiso_core::tower::{
    automorphism_group_with, cyclic_quotient_normals, default_bottom, extension_isomorphism, isomorphism_test_with,
    simple_quotient_normals, tower_normals, IsomorphismOutcome, TowerOptions,
};
use extiso_core::{oracle, Error, GroupTable, IsomorphismCoset, StabChainGroup, Subgroup};

use report::{to_sorted_json, CosetSummary, Outcome, RunReport};
use ringfile::RingFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NON_ISO: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "extiso", version, about = "Isomorphism testing for extensions of abelian groups")]
struct Cli {
    /// Print the run report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Include per-phase wall-clock timings in the report
    #[arg(long, global = true)]
    timings: bool,
    /// Reserved; every algorithm is deterministic, so only 0 is accepted
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Cyclic,
    Simple,
    Tower,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariant factors of an abelian group, or of an abelian subgroup
    Decompose {
        group: PathBuf,
        /// File of 1-based elements generating the subgroup
        #[arg(long)]
        subgroup: Option<PathBuf>,
    },
    /// Unit group of a finite ring given as a `.ring` file
    Units { ring: PathBuf },
    /// Normal subgroups with cyclic or simple quotient, or tower bottoms
    Normals {
        group: PathBuf,
        #[arg(long, value_enum, default_value = "tower")]
        kind: Kind,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// All isomorphisms between two groups
    Iso {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Write the isomorphism coset to this file
        #[arg(long)]
        coset: Option<PathBuf>,
        /// Enumerate quotient maps on a minimum generating tuple
        #[arg(long)]
        min_generators: bool,
    },
    /// Automorphism group
    Aut {
        group: PathBuf,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Enumerate quotient maps on a minimum generating tuple
        #[arg(long)]
        min_generators: bool,
    },
    /// Isomorphisms carrying a chosen abelian normal subgroup onto another
    IsoExt {
        g1: PathBuf,
        g2: PathBuf,
        /// 1-based elements generating A in the first group
        #[arg(long)]
        bottom: Option<PathBuf>,
        /// 1-based elements generating A0 in the second group
        #[arg(long)]
        bottom0: Option<PathBuf>,
        /// Number of generators of G/A used when choosing A
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Write the isomorphism coset to this file
        #[arg(long)]
        coset: Option<PathBuf>,
    },
    /// Exhaustive reference answers for small inputs
    Oracle {
        g1: Option<PathBuf>,
        g2: Option<PathBuf>,
        /// Count ring units instead of group isomorphisms
        #[arg(long, conflicts_with_all = ["g1", "g2"])]
        ring: Option<PathBuf>,
        /// Largest input size to enumerate
        #[arg(long)]
        limit: Option<usize>,
    },
}

/// What a run prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Core(Error::ResourceLimit { .. } | Error::SizeGuard { .. }) => EXIT_RESOURCE,
            Failure::Core(Error::UnsupportedShape { .. }) => EXIT_UNSUPPORTED,
            Failure::Core(_) => EXIT_USAGE,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

struct Done {
    outcome: Outcome,
    coset: Option<CosetSummary>,
    details: serde_json::Value,
    text: String,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_group(path: &Path) -> Result<GroupTable, Failure> {
    parse_gtab(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_subgroup(g: &GroupTable, path: &Path) -> Result<Subgroup, Failure> {
    let elems = parse_element_list(&read(path)?, g.order()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(subgroup_generated(g, &elems))
}

fn load_ring(path: &Path) -> Result<RingFile, Failure> {
    RingFile::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn one_based(elems: &[usize]) -> String {
    elems.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn summary(stabilizer: &StabChainGroup, representative: Option<Vec<usize>>) -> CosetSummary {
    CosetSummary {
        stabilizer_order: stabilizer.order(),
        stabilizer_generators: stabilizer.generators().iter().map(|p| p.images()).collect(),
        representative,
    }
}

fn coset_summary(c: &IsomorphismCoset) -> CosetSummary {
    summary(&c.stabilizer, c.representative.as_ref().map(|r| r.images().to_vec()))
}

fn write_coset(path: &Path, c: &CosetSummary) -> Result<(), Failure> {
    let text = to_sorted_json(c).expect("cosets serialize");
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn options(min_generators: bool) -> TowerOptions {
    TowerOptions {
        min_generators,
        ..TowerOptions::default()
    }
}

fn iso_outcome(c: &IsomorphismCoset) -> Outcome {
    if c.is_empty() {
        Outcome::NonIso
    } else {
        Outcome::Iso
    }
}

fn execute(command: &Command) -> Result<Done, Failure> {
    match command {
        Command::Decompose { group, subgroup } => {
            let g = load_group(group)?;
            let a = match subgroup {
                Some(p) => load_subgroup(&g, p)?,
                None => g.whole(),
            };
            let dec = extiso_core::abelian::decompose(&g, &a)?;
            let factors = dec.invariant_factors().to_vec();
            let text = if factors.is_empty() {
                "trivial group\n".to_string()
            } else {
                let names: Vec<String> = factors.iter().map(|n| format!("Z{n}")).collect();
                format!("{}\n", names.join(" x "))
            };
            Ok(Done {
                outcome: Outcome::Ok,
                coset: None,
                details: json!({ "invariant_factors": factors, "order": a.order() }),
                text,
            })
        }
        Command::Units { ring } => {
            let f = load_ring(ring)?;
            let r = f.ring()?;
            let action = f.action(&r)?;
            let u = unit_group(&r, action.as_ref())?;
            Ok(Done {
                outcome: Outcome::Ok,
                coset: None,
                details: json!({ "order": u.order(), "degree": u.degree, "generators": u.generators }),
                text: format!("unit group order {} ({} generators on {} points)\n", u.order(), u.generators.len(), u.degree),
            })
        }
        Command::Normals { group, kind, depth } => {
            let g = load_group(group)?;
            let mut text = String::new();
            let details = match kind {
                Kind::Cyclic | Kind::Simple => {
                    let subs = if *kind == Kind::Cyclic {
                        cyclic_quotient_normals(&g)
                    } else {
                        simple_quotient_normals(&g)
                    };
                    for s in &subs {
                        text += &format!("{{{}}}\n", one_based(s.elements()));
                    }
                    let lists: Vec<&[usize]> = subs.iter().map(Subgroup::elements).collect();
                    json!({ "kind": format!("{kind:?}").to_lowercase(), "subgroups": lists })
                }
                Kind::Tower => {
                    let ws = tower_normals(&g, *depth);
                    for w in &ws {
                        let kinds: Vec<String> = w.factor_kinds.iter().map(|k| format!("{k:?}").to_lowercase()).collect();
                        text += &format!("{{{}}} via {}\n", one_based(w.subgroup.elements()), kinds.join(", "));
                    }
                    let lists: Vec<&[usize]> = ws.iter().map(|w| w.subgroup.elements()).collect();
                    let towers: Vec<Vec<&[usize]>> = ws.iter().map(|w| w.tower.iter().map(Subgroup::elements).collect()).collect();
                    let kinds: Vec<_> = ws.iter().map(|w| w.factor_kinds.clone()).collect();
                    json!({ "kind": "tower", "depth": depth, "subgroups": lists, "towers": towers, "factor_kinds": kinds })
                }
            };
            Ok(Done {
                outcome: Outcome::Ok,
                coset: None,
                details,
                text,
            })
        }
        Command::Iso { g1, g2, depth, coset, min_generators } => {
            let (g, g0) = (load_group(g1)?, load_group(g2)?);
            let out = isomorphism_test_with(&g, &g0, *depth, &options(*min_generators))?;
            match out {
                IsomorphismOutcome::Isomorphic(c) => {
                    let s = coset_summary(&c);
                    if let Some(p) = coset {
                        write_coset(p, &s)?;
                    }
                    Ok(Done {
                        outcome: Outcome::Iso,
                        details: json!({ "depth": depth, "isomorphisms": c.size() }),
                        text: format!("isomorphic: {} isomorphisms\n", c.size()),
                        coset: Some(s),
                    })
                }
                IsomorphismOutcome::NotIsomorphic => Ok(Done {
                    outcome: Outcome::NonIso,
                    coset: None,
                    details: json!({ "depth": depth, "isomorphisms": 0 }),
                    text: "not isomorphic\n".into(),
                }),
            }
        }
        Command::Aut { group, depth, min_generators } => {
            let g = load_group(group)?;
            let aut = automorphism_group_with(&g, *depth, &options(*min_generators))?;
            Ok(Done {
                outcome: Outcome::Ok,
                coset: Some(summary(&aut, Some((0..g.order()).collect()))),
                details: json!({ "depth": depth, "order": aut.order() }),
                text: format!("automorphism group order {}\n", aut.order()),
            })
        }
        Command::IsoExt { g1, g2, bottom, bottom0, k, coset } => {
            let (g, g0) = (load_group(g1)?, load_group(g2)?);
            let a = match bottom {
                Some(p) => load_subgroup(&g, p)?,
                None => default_bottom(&g, *k)?,
            };
            let a0 = bottom0.as_ref().map(|p| load_subgroup(&g0, p)).transpose()?;
            let c = extension_isomorphism(&g, &g0, &a, a0.as_ref(), &TowerOptions::default())?;
            let s = coset_summary(&c);
            if let Some(p) = coset {
                write_coset(p, &s)?;
            }
            let text = if c.is_empty() {
                "no isomorphism carries A onto a matching subgroup\n".to_string()
            } else {
                format!("isomorphic; Aut_0(G, A) has order {}\n", c.stabilizer.order())
            };
            Ok(Done {
                outcome: iso_outcome(&c),
                details: json!({ "bottom": a.elements(), "aut0_order": c.stabilizer.order() }),
                coset: Some(s),
                text,
            })
        }
        Command::Oracle { g1, g2, ring, limit } => {
            if let Some(r) = ring {
                let r = load_ring(r)?.ring()?;
                let n = oracle::unit_count_by_trial(&r, limit.unwrap_or(oracle::DEFAULT_RING_GUARD))?;
                return Ok(Done {
                    outcome: Outcome::Ok,
                    coset: None,
                    details: json!({ "units": n }),
                    text: format!("units: {n}\n"),
                });
            }
            let Some(g1) = g1 else {
                return Err(Failure::Usage("oracle: give a group file or --ring".into()));
            };
            let g = load_group(g1)?;
            let g0 = match g2 {
                Some(p) => load_group(p)?,
                None => g.clone(),
            };
            let rep = oracle::brute_force_oracles(&g, &g0, limit.unwrap_or(oracle::DEFAULT_GROUP_GUARD))?;
            let isos: Vec<&[usize]> = rep.isomorphisms.iter().map(|f| f.images()).collect();
            Ok(Done {
                outcome: if isos.is_empty() { Outcome::NonIso } else { Outcome::Iso },
                coset: None,
                details: json!({ "aut_order": rep.aut_order, "isomorphisms": isos }),
                text: format!("automorphisms: {}\nisomorphisms: {}\n", rep.aut_order, isos.len()),
            })
        }
    }
}

fn name_and_inputs(command: &Command) -> (&'static str, Vec<String>) {
    let show = |p: &PathBuf| p.display().to_string();
    match command {
        Command::Decompose { group, subgroup } => ("decompose", [Some(group), subgroup.as_ref()].into_iter().flatten().map(show).collect()),
        Command::Units { ring } => ("units", vec![show(ring)]),
        Command::Normals { group, .. } => ("normals", vec![show(group)]),
        Command::Iso { g1, g2, .. } => ("iso", vec![show(g1), show(g2)]),
        Command::Aut { group, .. } => ("aut", vec![show(group)]),
        Command::IsoExt { g1, g2, bottom, bottom0, .. } => (
            "iso-ext",
            [Some(g1), Some(g2), bottom.as_ref(), bottom0.as_ref()].into_iter().flatten().map(show).collect(),
        ),
        Command::Oracle { g1, g2, ring, .. } => (
            "oracle",
            [g1.as_ref(), g2.as_ref(), ring.as_ref()].into_iter().flatten().map(show).collect(),
        ),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("EXTISO_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("EXTISO_THREADS: expected a positive integer, found {v:?}")))?;
    // the pool can only be set once per process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code with the text to print.
pub fn run<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Execution { code, stdout: String::new(), stderr: text }
            } else {
                Execution { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let (name, inputs) = name_and_inputs(&cli.command);
    let start = Instant::now();
    let result = if cli.seed != 0 {
        Err(Failure::Usage(format!("--seed: only 0 is accepted, got {}", cli.seed)))
    } else {
        configure_threads().and_then(|()| execute(&cli.command))
    };
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let timings = cli.timings.then(|| BTreeMap::from([("total_ms".to_string(), elapsed)]));
    let (code, report, text, err) = match result {
        Ok(done) => {
            let code = if done.outcome == Outcome::NonIso { EXIT_NON_ISO } else { EXIT_OK };
            let report = RunReport {
                command: name.into(),
                inputs,
                outcome: done.outcome,
                coset: done.coset,
                details: done.details,
                timings,
                error: None,
            };
            let mut text = done.text;
            if let Some(t) = &report.timings {
                text += &format!("time: {:.3} ms\n", t["total_ms"]);
            }
            (code, report, text, String::new())
        }
        Err(f) => {
            let message = f.message();
            let report = RunReport {
                command: name.into(),
                inputs,
                outcome: Outcome::Error,
                coset: None,
                details: serde_json::Value::Null,
                timings,
                error: Some(message.clone()),
            };
            (f.code(), report, String::new(), format!("extiso {name}: {message}\n"))
        }
    };
    if cli.json {
        Execution { code, stdout: report.emit(), stderr: err }
    } else {
        Execution { code, stdout: text, stderr: err }
    }
}
