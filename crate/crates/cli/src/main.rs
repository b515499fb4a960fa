use std::collections::BTreeSet;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use planar_seq_core::combinators::{concatenate, find_break, union_sequences};
use planar_seq_core::embedding::{enumerate_embeddings, RotationSystem};
use planar_seq_core::export::{export_svg, to_dot};
use planar_seq_core::gadgets::{
    arches, equaliser, indefinite_or, negator, or_gadget_with, Gadget, OrVariant,
};
use planar_seq_core::sat::{hybrid_to_weak, mini_prep, parse_dimacs, sat_prep, CnfFormula};
use planar_seq_core::sequence::{analyze, validate_sequence, HybridSequence, ScaleCaps};
use planar_seq_core::verify::{verify_lemma, Status, VerifyParams, LEMMAS};

#[derive(Parser)]
#[command(name = "planar-seq", version, about = "Simultaneous embeddings of temporal planar graph sequences")]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a gadget sequence.
    Gadget {
        kind: GadgetKind,
        #[arg(long)]
        m: usize,
        /// House indices, or the triple number for the or gadgets.
        #[arg(long, value_delimiter = ',')]
        indices: Vec<usize>,
        /// Build the or gadget exactly as the steps are written.
        #[arg(long)]
        literal: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run a registered lemma check.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Decide simultaneous embeddability and count embeddings.
    Solve { sequence: PathBuf },
    /// Allocation set of a housing sequence.
    Allocation { sequence: PathBuf },
    /// Reduce a 3-CNF formula to a housing sequence.
    Reduce {
        /// DIMACS file, or `-` for stdin.
        #[arg(long)]
        cnf: String,
        #[arg(long, value_enum, default_value = "paper")]
        mode: ReduceMode,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Convert between sequence kinds.
    Convert {
        #[command(subcommand)]
        what: ConvertCmd,
    },
    /// Combine two housing sequences.
    Combine {
        op: CombineOp,
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Structural analysis of a housing sequence.
    Analyze { what: AnalyzeWhat, sequence: PathBuf },
    /// Draw one graph of a sequence.
    Export {
        format: ExportFormat,
        sequence: PathBuf,
        /// 1-based graph index.
        #[arg(long, default_value_t = 1)]
        graph: usize,
        /// 1-based embedding class, for SVG.
        #[arg(long, default_value_t = 1)]
        embedding: usize,
        /// Rotation system to draw instead of an enumerated one, for SVG.
        #[arg(long)]
        rotation: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    Lemma {
        name: String,
        #[arg(long)]
        m: Option<usize>,
        /// Write the witness or counterexample here.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// List the registered lemmas.
    List,
}

#[derive(Subcommand)]
enum ConvertCmd {
    /// Replace strict edges by rigid gadgets.
    Weak {
        sequence: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetKind {
    Equaliser,
    Negator,
    Or,
    IndefiniteOr,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceMode {
    Paper,
    Mini,
}

#[derive(Clone, Copy, ValueEnum)]
enum CombineOp {
    Union,
    Concat,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnalyzeWhat {
    Arches,
    Break,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Svg,
}

/// Exit codes: 0 success, 1 negative verdict, 2 usage or input error.
enum Verdict {
    Ok,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Verdict::Ok) => ExitCode::from(0),
        Ok(Verdict::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_text(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn load(path: &Path) -> Result<HybridSequence> {
    let text = read_text(&path.to_string_lossy())?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json(path: &Path, v: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

/// `seq.json` -> `seq.<tag>.json`.
fn sidecar(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    path.with_file_name(format!("{stem}.{tag}.json"))
}

/// Prints `v` as JSON with `--json`, else the text lines.
fn emit(cli: &Cli, v: serde_json::Value, text: &[String]) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&v).expect("json values serialize"));
    } else {
        for l in text {
            println!("{l}");
        }
    }
}

fn run(cli: &Cli) -> Result<Verdict> {
    let caps = ScaleCaps::from_env();
    match &cli.cmd {
        Cmd::Gadget {
            kind,
            m,
            indices,
            literal,
            output,
        } => {
            let idx = |k: usize| -> Result<usize> {
                indices
                    .get(k)
                    .copied()
                    .with_context(|| format!("--indices needs at least {} values", k + 1))
            };
            let g: Gadget = match kind {
                GadgetKind::Equaliser => equaliser(*m, idx(0)?, idx(1)?)?,
                GadgetKind::Negator => negator(*m, idx(0)?, idx(1)?)?,
                GadgetKind::Or | GadgetKind::IndefiniteOr => {
                    // A triple 3t-2,3t-1,3t or its number t.
                    let t = match indices.as_slice() {
                        [t] => *t,
                        [a, b, c] if *b == a + 1 && *c == a + 2 && c % 3 == 0 => c / 3,
                        _ => bail!("--indices takes t or an aligned triple 3t-2,3t-1,3t"),
                    };
                    if matches!(kind, GadgetKind::Or) {
                        let v = if *literal {
                            OrVariant::Literal
                        } else {
                            OrVariant::Corrected
                        };
                        or_gadget_with(*m, t, v)?
                    } else {
                        indefinite_or(*m, t)?.gadget
                    }
                }
            };
            write_json(output, &g.sequence)?;
            let roles = sidecar(output, "roles");
            write_json(&roles, &g.role_table())?;
            emit(
                cli,
                json!({ "output": output, "roles": roles, "length": g.sequence.len(), "size": g.sequence.size() }),
                &[format!(
                    "wrote {} ({} graphs, size {}) and {}",
                    output.display(),
                    g.sequence.len(),
                    g.sequence.size(),
                    roles.display()
                )],
            );
            Ok(Verdict::Ok)
        }
        Cmd::Verify { what } => match what {
            VerifyCmd::List => {
                emit(cli, json!(LEMMAS), &LEMMAS.iter().map(|s| s.to_string()).collect::<Vec<_>>());
                Ok(Verdict::Ok)
            }
            VerifyCmd::Lemma {
                name,
                m,
                witness_dir,
            } => {
                let params = VerifyParams { m: *m, caps };
                let mut r = verify_lemma(name, &params)?;
                if let Some(dir) = witness_dir {
                    std::fs::create_dir_all(dir)?;
                    let payload = r.witness.clone().or_else(|| r.counterexample.clone());
                    if let Some(w) = payload {
                        let kind = if r.status == Status::Pass { "witness" } else { "counterexample" };
                        let p = dir.join(format!("{name}.{kind}.json"));
                        write_json(&p, &w)?;
                        r.artifacts.push(p.display().to_string());
                    }
                }
                let mut text = vec![format!("{}: {}", r.target, status_word(r.status))];
                for (k, v) in &r.measured {
                    text.push(format!("  {k}: {v}"));
                }
                for c in r.checks.iter().filter(|c| !c.ok) {
                    text.push(format!("  failed {}: {}", c.name, c.detail));
                }
                for n in &r.notes {
                    text.push(format!("  note: {n}"));
                }
                for a in &r.artifacts {
                    text.push(format!("  artifact: {a}"));
                }
                let code = r.status.exit_code();
                emit(cli, serde_json::to_value(&r)?, &text);
                Ok(if code == 0 { Verdict::Ok } else { Verdict::Negative })
            }
        },
        Cmd::Solve { sequence } => {
            let s = load(sequence)?;
            let a = analyze(&s, &caps)?;
            let (emb, n) = (a.embeddable(), a.count_up_to_reflection());
            emit(
                cli,
                json!({ "embeddable": emb, "count_up_to_reflection": n.to_string() }),
                &[format!("embeddable: {emb}, count_up_to_reflection: {n}")],
            );
            Ok(if emb { Verdict::Ok } else { Verdict::Negative })
        }
        Cmd::Allocation { sequence } => {
            let s = load(sequence)?;
            let a = analyze(&s, &caps)?.allocation(&s.village()?)?;
            emit(cli, serde_json::to_value(&a)?, &[format!("allocation: {a}")]);
            Ok(Verdict::Ok)
        }
        Cmd::Reduce {
            cnf,
            mode,
            output,
            report,
        } => {
            let f = parse_dimacs(&read_text(cnf)?)?;
            reduce(cli, &f, *mode, output.as_deref(), report.as_deref())
        }
        Cmd::Convert {
            what: ConvertCmd::Weak { sequence, output },
        } => {
            let s = load(sequence)?;
            let w = hybrid_to_weak(&s);
            write_json(output, &w.sequence)?;
            let map = sidecar(output, "gadgets");
            write_json(&map, &json!({ "k": w.k, "ordinals": w.ordinals }))?;
            emit(
                cli,
                json!({ "output": output, "gadgets": w.ordinals.len(), "k": w.k }),
                &[format!(
                    "wrote {}: {} strict edges replaced by {}x{} grids",
                    output.display(),
                    w.ordinals.len(),
                    w.k,
                    w.k
                )],
            );
            Ok(Verdict::Ok)
        }
        Cmd::Combine {
            op,
            first,
            second,
            output,
        } => {
            let (a, b) = (load(first)?, load(second)?);
            let s = match op {
                CombineOp::Union => union_sequences(&a, &b)?,
                CombineOp::Concat => concatenate(&a, &b)?,
            };
            write_json(output, &s)?;
            emit(
                cli,
                json!({ "output": output, "length": s.len() }),
                &[format!("wrote {} ({} graphs)", output.display(), s.len())],
            );
            Ok(Verdict::Ok)
        }
        Cmd::Analyze { what, sequence } => {
            let s = load(sequence)?;
            let v = s.village()?;
            match what {
                AnalyzeWhat::Arches => {
                    let a = arches(&s, &v)?;
                    let text: Vec<String> = a.iter().map(|(i, j)| format!("{i} {j}")).collect();
                    emit(cli, json!(a), &text);
                    Ok(Verdict::Ok)
                }
                AnalyzeWhat::Break => {
                    let b = find_break(&s, &v)?;
                    let text = match &b {
                        Some((p, q)) => vec![format!("break: {p:?} | {q:?}")],
                        None => vec!["no break".into()],
                    };
                    emit(cli, json!(b), &text);
                    Ok(if b.is_some() { Verdict::Ok } else { Verdict::Negative })
                }
            }
        }
        Cmd::Export {
            format,
            sequence,
            graph,
            embedding,
            rotation,
            output,
        } => {
            let s = load(sequence)?;
            let g = s
                .graphs
                .get(graph.wrapping_sub(1))
                .with_context(|| format!("--graph must be in 1..={}", s.len()))?
                .clone();
            let text = match format {
                ExportFormat::Dot => to_dot(&g, &format!("G_{graph}")),
                ExportFormat::Svg => {
                    let e = match rotation {
                        Some(p) => {
                            let r: RotationSystem = serde_json::from_str(&read_text(&p.to_string_lossy())?)?;
                            RotationSystem::from_labels(g.clone(), &r.to_label_map())?
                        }
                        None => {
                            let classes = enumerate_embeddings(&g)?;
                            classes
                                .get(embedding.wrapping_sub(1))
                                .with_context(|| format!("--embedding must be in 1..={}", classes.len()))?
                                .representative
                                .clone()
                        }
                    };
                    // Decorate when the graph contains the sequence's village.
                    let village = s.village().ok().filter(|v| {
                        v.houses
                            .iter()
                            .all(|&i| v.bounding_cycle(i).iter().all(|l| g.has_edge(l)))
                    });
                    let svg = export_svg(&e, village.as_ref())?;
                    if let Some(out) = output {
                        write_json(&sidecar(out, "rot"), &e)?;
                    }
                    svg
                }
            };
            match output {
                Some(p) => std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{text}"),
            }
            Ok(Verdict::Ok)
        }
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Unknown => "unknown",
        Status::NotCertifiedAtScale => "not-certified-at-scale",
    }
}

fn reduce(
    cli: &Cli,
    f: &CnfFormula,
    mode: ReduceMode,
    output: Option<&Path>,
    report: Option<&Path>,
) -> Result<Verdict> {
    match mode {
        ReduceMode::Paper => {
            let out = sat_prep(f)?;
            if let Some(p) = output {
                match &out.sequence {
                    Some(s) => write_json(p, s)?,
                    // Too large to build: keep the block plan instead.
                    None => write_json(p, &json!({ "plan": out.plan }))?,
                }
            }
            if let Some(p) = report {
                write_json(p, &out.report)?;
            }
            let r = &out.report;
            let mut text = vec![format!(
                "paper mode: equator {}, length {} (bound {}), size {}, materialized: {}",
                r.equator, r.length, r.length_bound, r.size, r.materialized
            )];
            for c in &r.components {
                text.push(format!("  {}: length {} (bound {})", c.name, c.length, c.length_bound));
            }
            for fl in &r.flags {
                text.push(format!("  flag: {fl}"));
            }
            emit(cli, serde_json::to_value(r)?, &text);
            Ok(Verdict::Ok)
        }
        ReduceMode::Mini => {
            let Some(r) = mini_prep(f)? else {
                bail!("formula has no clauses or an empty clause; there is nothing to reduce");
            };
            let valid = validate_sequence(&r.sequence).valid;
            if let Some(p) = output {
                write_json(p, &r.sequence)?;
            }
            let houses: BTreeSet<usize> = (1..=r.formula.size()).collect();
            let rep = json!({
                "mode": "mini",
                "formula": r.formula,
                "equator": r.plan.equator,
                "houses": houses,
                "length": r.sequence.len(),
                "size": r.sequence.size(),
                "valid": valid,
                "guard": r.guard,
            });
            if let Some(p) = report {
                write_json(p, &rep)?;
            }
            let mut text = vec![format!(
                "mini mode: equator {}, length {}, size {}, valid: {valid}",
                r.plan.equator,
                r.sequence.len(),
                r.sequence.size()
            )];
            text.extend(r.guard.iter().map(|g| format!("  guard: {g}")));
            emit(cli, rep, &text);
            Ok(Verdict::Ok)
        }
    }
}
