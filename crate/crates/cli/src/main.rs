use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use flagcert::certificate::{round_to_rational, Pins};
use flagcert::density::{builtin_graphon, count_induced, parse_graphon, t_hom, t_ind_graph};
use flagcert::graph::{automorphism_count, enumerate_flags, enumerate_graphs, parse_graph, MAX_ENUMERATION};
use flagcert::rational::{format_rational, ratio, to_f64};
use flagcert::sdp::{assemble, build_bases, extract_certificate, goodman_objective, objective_for, objective_for_inducibility, parse_solution};
use flagcert::{Certificate, HostGraph, LabeledGraph, Manifest, PsdCheck, StepGraphon};

#[derive(Parser)]
#[command(name = "flagcert", version, about = "Flag-algebra SDP builder and exact certificate checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List canonical graphs on N vertices, or the flags of a type.
    Enumerate {
        #[arg(long)]
        n: Option<usize>,
        /// Type (fully labeled graph) whose flags to list, e.g. "{}_{1, 1}".
        #[arg(long)]
        sigma: Option<String>,
        /// Flag size when listing flags.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Exact density of an unlabeled graph in a graphon.
    Density {
        graph: String,
        /// Graphon file or builtin: k<n>, k2uk2, complement(<w>), paley<q>, "const p/q".
        graphon: String,
        #[arg(long, value_enum, default_value_t = Kind::Ind)]
        kind: Kind,
    },
    /// Assemble the SDP and write it in sparse SDPA format with a manifest.
    BuildSdp {
        /// Graph whose induced density is maximized, or `goodman`.
        target: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        dedup_types: bool,
        #[arg(long)]
        split: bool,
        /// Conjectured extremal graphons (files or builtins).
        #[arg(long, num_args = 1..)]
        delta: Vec<String>,
        #[arg(long)]
        name: Option<String>,
        /// Solver command; `{in}` and `{out}` are replaced by file paths.
        #[arg(long)]
        solver_cmd: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Read a solver solution and write a floating-point certificate.
    Ingest {
        solution: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Round a floating certificate to rationals.
    Round {
        certificate: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        den_cap: u64,
        #[arg(long)]
        pin: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a certificate exactly.
    Verify {
        certificate: PathBuf,
        /// Print every class slack.
        #[arg(long)]
        all_slacks: bool,
    },
    /// Quadratic-residue graph QR(q) and its induced P_4 density.
    Paley { q: usize },
    /// Count induced copies of H in a host graph.
    Oracle {
        graph: String,
        /// Graph string or paley<q>.
        host: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ind,
    Hom,
}

enum Failure {
    Rejected,
    Usage(String),
    Input(String),
}

impl From<flagcert::Error> for Failure {
    fn from(e: flagcert::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Enumerate { n, sigma, m } => enumerate(n, sigma, m),
        Command::Density { graph, graphon, kind } => density(&graph, &graphon, kind),
        Command::BuildSdp { target, n, l, dedup_types, split, delta, name, solver_cmd, out } => {
            build_sdp(&target, n, l, dedup_types, split, &delta, name, solver_cmd, &out)
        }
        Command::Ingest { solution, manifest, out } => ingest(&solution, &manifest, out.as_deref()).map(|_| ()),
        Command::Round { certificate, den_cap, pin, out } => round(&certificate, den_cap, pin.as_deref(), &out),
        Command::Verify { certificate, all_slacks } => verify(&certificate, all_slacks),
        Command::Paley { q } => paley(q),
        Command::Oracle { graph, host } => oracle(&graph, &host),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn unlabeled(text: &str) -> Result<LabeledGraph, Failure> {
    let g = parse_graph(text)?;
    if g.k() != 0 {
        return Err(Failure::Usage(format!("`{text}` has labels; an unlabeled graph is needed")));
    }
    Ok(g)
}

/// A graphon file when the path exists, otherwise a builtin name.
fn graphon(arg: &str) -> Result<StepGraphon, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(parse_graphon(&read(path)?)?);
    }
    Ok(builtin_graphon(arg)?)
}

fn enumerate(n: Option<usize>, sigma: Option<String>, m: Option<usize>) -> Outcome {
    let list = match (sigma, n.or(m)) {
        (None, Some(n)) => {
            if n > MAX_ENUMERATION {
                return Err(Failure::Usage(format!("--n is limited to {MAX_ENUMERATION}")));
            }
            enumerate_graphs(n)?
        }
        (Some(s), Some(m)) => {
            let sigma = parse_graph(&s)?;
            if !sigma.is_type() {
                return Err(Failure::Usage(format!("`{s}` is not a type: every vertex must be labeled")));
            }
            enumerate_flags(&sigma, m)?
        }
        _ => return Err(Failure::Usage("give --n, or --sigma with --m".into())),
    };
    for g in list {
        println!("{g}\t{}", automorphism_count(&g));
    }
    Ok(())
}

fn density(graph: &str, w: &str, kind: Kind) -> Outcome {
    let h = unlabeled(graph)?;
    let w = graphon(w)?;
    let value = match kind {
        Kind::Ind => t_ind_graph(&h, &w),
        Kind::Hom => t_hom(&h, &w),
    };
    println!("{} ({})", format_rational(&value), to_f64(&value));
    Ok(())
}

fn sidecar(out: &Path, ext: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

#[allow(clippy::too_many_arguments)]
fn build_sdp(target: &str, n: usize, l: usize, dedup: bool, split: bool, delta: &[String], name: Option<String>, solver: Option<String>, out: &Path) -> Outcome {
    if n > MAX_ENUMERATION || l == 0 || l > n {
        return Err(Failure::Usage(format!("need 1 <= --l <= --n <= {MAX_ENUMERATION}")));
    }
    let w0s = delta.iter().map(|d| graphon(d)).collect::<Result<Vec<_>, _>>()?;
    let (objective, h) = if target == "goodman" {
        (objective_for(&goodman_objective(), n)?, None)
    } else {
        let h = unlabeled(target)?;
        (objective_for_inducibility(&h, n)?, Some(h))
    };
    let bases = build_bases(n, l, dedup, split, &w0s)?;
    let problem = assemble(&objective, &bases, n)?;
    let problem = match h {
        Some(h) => problem.with_target(name.as_deref().unwrap_or("inducibility"), &h),
        None => problem.with_name(name.as_deref().unwrap_or(target)),
    };
    write(out, &problem.emit_sdpa())?;
    let manifest_path = sidecar(out, ".manifest.json");
    write(&manifest_path, &problem.manifest().to_json())?;
    println!("wrote {} ({} variables, blocks {:?} + nonnegativity + normalization)", out.display(), problem.classes.len(), problem.block_dims());
    println!("wrote {}", manifest_path.display());
    if let Some(template) = solver {
        let sol = sidecar(out, ".sol");
        let cmd = template.replace("{in}", &shell_quote(out)).replace("{out}", &shell_quote(&sol));
        let status = std::process::Command::new("sh").arg("-c").arg(&cmd).status().map_err(|e| Failure::Input(format!("solver: {e}")))?;
        if !status.success() {
            return Err(Failure::Input(format!("solver exited with {status}")));
        }
        let cert = problem.target.map(|_| sidecar(out, ".cert"));
        ingest(&sol, &manifest_path, cert.as_deref())?;
    }
    Ok(())
}

fn shell_quote(p: &Path) -> String {
    format!("'{}'", p.display().to_string().replace('\'', r"'\''"))
}

fn ingest(solution: &Path, manifest: &Path, out: Option<&Path>) -> Result<f64, Failure> {
    let manifest = Manifest::from_json(&read(manifest)?)?;
    let text = read(solution)?;
    let s = parse_solution(&text, &manifest)?;
    let bound = if manifest.target.is_some() { -s.dual_objective } else { s.dual_objective };
    println!("primal objective: {:.12}", s.primal_objective);
    println!("dual objective: {:.12}", s.dual_objective);
    println!("bound: {bound:.12}");
    if let Some(out) = out {
        let cert = extract_certificate(&s, &manifest)?;
        write(out, &cert.save())?;
        println!("wrote {}", out.display());
    }
    Ok(bound)
}

fn round(path: &Path, cap: u64, pin: Option<&Path>, out: &Path) -> Outcome {
    if cap == 0 {
        return Err(Failure::Usage("--den-cap must be at least 1".into()));
    }
    let cert = Certificate::load(&read(path)?)?;
    let pins = match pin {
        Some(p) => Pins::parse(&read(p)?)?,
        None => Pins::default(),
    };
    let rounded = round_to_rational(&cert, cap, &pins)?;
    write(out, &rounded.save())?;
    println!("wrote {} (bound {})", out.display(), format_rational(&rounded.bound));
    Ok(())
}

fn verify(path: &Path, all: bool) -> Outcome {
    let cert = Certificate::load(&read(path)?)?;
    println!("certificate: {}", cert.name);
    println!("claim: t_ind({}) <= {} over {}-vertex graphs", cert.target, format_rational(&cert.bound), cert.n);
    let report = cert.verify()?;
    for (i, (b, psd)) in cert.blocks.iter().zip(&report.psd).enumerate() {
        match psd {
            PsdCheck::Psd { .. } => println!("block {}: PSD ({}x{}, k = {})", i + 1, b.y.len(), b.y.len(), b.k),
            PsdCheck::NotPsd { witness } => {
                let w: Vec<String> = witness.iter().map(|v| format!("{:.6}", to_f64(v))).collect();
                println!("block {}: NOT PSD, witness ~ ({})", i + 1, w.join(", "));
            }
        }
    }
    if all {
        for (h, s) in report.classes.iter().zip(&report.slacks) {
            println!("slack {h}: {}", format_rational(s));
        }
    }
    let failing = report.failing_classes();
    println!("classes: {}, negative slacks: {}", report.classes.len(), failing.len());
    for (h, s) in failing.iter().take(10) {
        println!("  {h}: {}", format_rational(s));
    }
    if let Some((h, s)) = report.worst_slack() {
        println!("worst slack: {} at {h}", format_rational(&s));
    }
    if report.accepted {
        println!("verdict: accepted");
        Ok(())
    } else {
        println!("verdict: rejected");
        Err(Failure::Rejected)
    }
}

fn paley(q: usize) -> Outcome {
    if q > 17 {
        return Err(Failure::Usage("q is limited to 17".into()));
    }
    let g = HostGraph::paley(q).map_err(|e| Failure::Usage(e.to_string()))?;
    let edges: Vec<String> = (0..q).flat_map(|u| (u + 1..q).map(move |v| (u, v))).filter(|&(u, v)| g.has_edge(u, v)).map(|(u, v)| format!("{u}-{v}")).collect();
    println!("QR({q}): {q} vertices, {} edges", edges.len());
    println!("edges: {}", edges.join(" "));
    let p4 = LabeledGraph::path(4)?;
    let w = flagcert::density::step_graphon_of(&g);
    let t = t_ind_graph(&p4, &w);
    println!("t_ind(P4; w_QR({q})) = {} ({:.6})", format_rational(&t), to_f64(&t));
    let reference = ratio(80, 4877);
    println!("published blow-up construction: {} ({:.6}); not reproduced here, the blow-up is unspecified", format_rational(&reference), to_f64(&reference));
    Ok(())
}

fn oracle(graph: &str, host: &str) -> Outcome {
    let h = unlabeled(graph)?;
    let g = match host.strip_prefix("paley") {
        Some(q) => HostGraph::paley(q.parse().map_err(|_| Failure::Usage(format!("bad host `{host}`")))?)?,
        None => HostGraph::from(&unlabeled(host)?),
    };
    let (count, normalized) = count_induced(&h, &g)?;
    println!("induced copies: {count}");
    println!("i(H; G) = {} ({})", format_rational(&normalized), to_f64(&normalized));
    Ok(())
}
