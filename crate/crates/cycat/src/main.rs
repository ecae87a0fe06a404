//! Command-line front door. The heavy lifting lives in the library; this
//! binary parses flags, wires files in and out, and maps outcomes to the
//! exit-code contract: 0 success, 1 verification failure, 2 input error.

use clap::{Args, Parser, Subcommand};
use cycat::error::Error;
use cycat::export;
use cycat::json::{self, MorphismJson, PosetJson};
use cycat::linear::LinCtx;
use cycat::mcluster::{self, MArc, MCtx};
use cycat::mf;
use cycat::poset::{CyclicPoset, Elem};
use cycat::scalar::ScalarRing;
use cycat::stable::{InjectFault, StableCtx};
use cycat::verify::{run_criterion, VerifyBounds, CRITERIA};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cycat",
    about = "cyclic posets, matrix factorizations, cluster categories"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RingArgs {
    /// coefficient field prime
    #[arg(long, default_value_t = 101)]
    prime: u32,
    /// truncation order N of k[t]/(t^N)
    #[arg(long, default_value_t = 8)]
    precision: usize,
}

impl RingArgs {
    fn ring(&self) -> Result<ScalarRing, Error> {
        ScalarRing::new(self.prime, self.precision)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build or verify cyclic posets
    Poset {
        #[command(subcommand)]
        cmd: PosetCmd,
    },
    /// Operations in the linearized category
    Linearize {
        #[command(subcommand)]
        cmd: LinearizeCmd,
    },
    /// Matrix factorization objects
    Mf {
        #[command(subcommand)]
        cmd: MfCmd,
    },
    /// Stable-category Hom dimensions
    Stable {
        #[command(subcommand)]
        cmd: StableCmd,
    },
    /// Clusters of Z_n
    Cluster {
        #[command(subcommand)]
        cmd: ClusterCmd,
    },
    /// m-cluster categories of Z_m * Z
    Mcluster {
        #[command(subcommand)]
        cmd: MclusterCmd,
    },
    /// Run the acceptance criteria
    Verify {
        /// all | cyclic_poset | linearization | frobenius | stable_cluster |
        /// mcluster | a criterion number 1..10
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 8)]
        max_n: i64,
        /// comma-separated m values
        #[arg(long, default_value = "3,4,5")]
        m: String,
        #[arg(long, default_value_t = 3)]
        max_s: i64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 500)]
        cy_samples: usize,
        #[arg(long, default_value_t = 20260809)]
        seed: u64,
        /// harness self-test: force a failure ("crossing")
        #[arg(long)]
        inject_fault: Option<String>,
    },
}

#[derive(Subcommand)]
enum PosetCmd {
    /// Build a poset and emit its canonical table JSON
    Build {
        #[arg(long)]
        zn: Option<i64>,
        /// builder JSON file
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the reduced-cocycle laws
    Verify {
        #[arg(long)]
        zn: Option<i64>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LinearizeCmd {
    /// Compose two sparse morphisms g . f over a poset
    Compose {
        /// JSON file: {"poset": ..., "f": ..., "g": ...}
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MfCmd {
    /// Validate d^2 = t (and the twisted factoring criterion)
    Validate {
        /// JSON file: {"poset": ..., "object": ...}
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        twisted: bool,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Krull-Schmidt decomposition
    Decompose {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum StableCmd {
    /// Stable Hom dimension between two arcs
    Hom {
        #[arg(long)]
        zn: i64,
        /// first arc "x0,x1"
        #[arg(long)]
        arc: String,
        /// second arc "y0,y1"
        #[arg(long)]
        arc2: String,
        /// also run the linear-algebra oracle
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Subcommand)]
enum ClusterCmd {
    /// Enumerate all clusters of Z_n
    Enumerate {
        #[arg(long)]
        zn: i64,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mutate a cluster at an arc
    Mutate {
        #[arg(long)]
        zn: i64,
        /// cluster as JSON [[x0,x1],...]
        #[arg(long)]
        cluster: String,
        /// arc "x0,x1"
        #[arg(long)]
        arc: String,
    },
    /// Quiver of a cluster (optionally FZ-mutated at an arc)
    Quiver {
        #[arg(long)]
        zn: i64,
        #[arg(long)]
        cluster: String,
        #[arg(long)]
        mutate_at: Option<String>,
        #[arg(long, default_value = "dot")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MclusterCmd {
    /// Count standard m-clusters on the (m s + 2)-gon window
    Count {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        s: i64,
    },
    /// Mutation partners of a window chord
    Mutate {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        s: i64,
        /// angulation chords as JSON [[l1,l2],...]
        #[arg(long)]
        chords: String,
        /// chord to mutate "l1,l2"
        #[arg(long)]
        arc: String,
    },
    /// Rigidity and compatibility checks for lambda arcs
    Check {
        #[arg(long)]
        m: i64,
        /// arcs as JSON [[l1,l2],...]
        #[arg(long)]
        arcs: String,
    },
    /// Reproduce the m = 5 worked configuration
    ExampleM5 {
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            let diag = serde_json::json!({ "error": e.to_string() });
            eprintln!("{diag}");
            ExitCode::from(2)
        }
    }
}

fn parse_pair(s: &str) -> Result<(i64, i64), Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidParams(format!("expected \"a,b\", got {s}")));
    }
    let a = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParams(format!("bad integer in {s}")))?;
    let b = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParams(format!("bad integer in {s}")))?;
    Ok((a, b))
}

fn load_poset(zn: Option<i64>, file: &Option<PathBuf>) -> Result<CyclicPoset, Error> {
    match (zn, file) {
        (Some(n), None) => CyclicPoset::zn(n),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let j: PosetJson = serde_json::from_str(&text)?;
            json::poset_from_json(&j)
        }
        _ => Err(Error::InvalidParams(
            "provide exactly one of --zn or --file".into(),
        )),
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Poset { cmd } => match cmd {
            PosetCmd::Build { zn, file, out } => {
                let p = load_poset(zn, &file)?;
                let j = json::poset_to_json(&p)?;
                emit(&out, &format!("{}\n", serde_json::to_string_pretty(&j)?))?;
                Ok(ExitCode::SUCCESS)
            }
            PosetCmd::Verify { zn, file } => {
                let p = load_poset(zn, &file)?;
                let report = p.verify_cocycle(16)?;
                if report.ok() {
                    println!(
                        "ok: reduced cocycle law holds on {} elements",
                        p.elements().len()
                    );
                    Ok(ExitCode::SUCCESS)
                } else {
                    let diag = serde_json::to_string(&report.violations)?;
                    eprintln!("{diag}");
                    Ok(ExitCode::from(2))
                }
            }
        },
        Command::Linearize { cmd } => match cmd {
            LinearizeCmd::Compose { file, ring, out } => {
                #[derive(serde::Deserialize)]
                struct ComposeInput {
                    poset: PosetJson,
                    f: MorphismJson,
                    g: MorphismJson,
                }
                let text = std::fs::read_to_string(&file)?;
                let input: ComposeInput = serde_json::from_str(&text)?;
                let p = json::poset_from_json(&input.poset)?;
                let ctx = LinCtx::new(&p, ring.ring()?);
                let f = json::morphism_from_json(&ctx, &input.f)?;
                let g = json::morphism_from_json(&ctx, &input.g)?;
                let comp = ctx.compose(&g, &f)?;
                let j = json::morphism_to_json(&ctx, &comp);
                emit(&out, &format!("{}\n", serde_json::to_string_pretty(&j)?))?;
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Mf { cmd } => match cmd {
            MfCmd::Validate {
                file,
                twisted,
                ring,
            } => {
                #[derive(serde::Deserialize)]
                struct ValidateInput {
                    poset: PosetJson,
                    object: json::MFObjectJson,
                }
                let text = std::fs::read_to_string(&file)?;
                let input: ValidateInput = serde_json::from_str(&text)?;
                let p = json::poset_from_json(&input.poset)?;
                let ctx = LinCtx::new(&p, ring.ring()?);
                let obj = json::mf_from_json(&ctx, &input.object)?;
                let outcome = if twisted {
                    let phi = p.canonical_automorphism()?;
                    let tctx = cycat::linear::TwistedCtx {
                        lin: ctx,
                        phi: &phi,
                    };
                    mf::validate_twisted(&tctx, &obj)
                } else {
                    mf::validate(&ctx, &obj)
                };
                match outcome {
                    Ok(()) => {
                        println!(
                            "ok: d^2 = t{}",
                            if twisted { ", twisted-valid" } else { "" }
                        );
                        Ok(ExitCode::SUCCESS)
                    }
                    Err(e) => {
                        eprintln!("{}", serde_json::json!({ "invalid": e.to_string() }));
                        Ok(ExitCode::from(1))
                    }
                }
            }
            MfCmd::Decompose { file, ring, out } => {
                #[derive(serde::Deserialize)]
                struct DecomposeInput {
                    poset: PosetJson,
                    object: json::MFObjectJson,
                }
                let text = std::fs::read_to_string(&file)?;
                let input: DecomposeInput = serde_json::from_str(&text)?;
                let p = json::poset_from_json(&input.poset)?;
                let ctx = LinCtx::new(&p, ring.ring()?);
                let obj = json::mf_from_json(&ctx, &input.object)?;
                let dec = mf::decompose(&ctx, &obj)?;
                let j = json::decomposition_to_json(&ctx, &dec);
                emit(&out, &format!("{}\n", serde_json::to_string_pretty(&j)?))?;
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Stable { cmd } => match cmd {
            StableCmd::Hom {
                zn,
                arc,
                arc2,
                oracle,
            } => {
                let p = CyclicPoset::zn(zn)?;
                let ctx = StableCtx::new(&p)?;
                let (a, b) = parse_pair(&arc)?;
                let (c, d) = parse_pair(&arc2)?;
                let x = ctx.arc(Elem(a), Elem(b))?;
                let y = ctx.arc(Elem(c), Elem(d))?;
                let dim = ctx.stable_hom_dim(&x, &y)?;
                if oracle {
                    let o = ctx.stable_hom_oracle(&x, &y)?;
                    println!("hom = {dim}, oracle = {o}");
                    if dim != o {
                        return Ok(ExitCode::from(1));
                    }
                } else {
                    println!("hom = {dim}");
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Cluster { cmd } => match cmd {
            ClusterCmd::Enumerate { zn, format, out } => {
                let p = CyclicPoset::zn(zn)?;
                let ctx = StableCtx::new(&p)?;
                let clusters = ctx.enumerate_clusters()?;
                match format.as_str() {
                    "json" => {
                        let data: Vec<Vec<[i64; 2]>> =
                            clusters.iter().map(json::cluster_to_json).collect();
                        emit(
                            &out,
                            &format!(
                                "{}\n",
                                serde_json::to_string_pretty(&serde_json::json!({
                                    "count": clusters.len(),
                                    "clusters": data,
                                }))?
                            ),
                        )?;
                    }
                    other => return Err(Error::UnknownFormat(other.into())),
                }
                Ok(ExitCode::SUCCESS)
            }
            ClusterCmd::Mutate { zn, cluster, arc } => {
                let p = CyclicPoset::zn(zn)?;
                let ctx = StableCtx::new(&p)?;
                let chords: Vec<[i64; 2]> = serde_json::from_str(&cluster)?;
                let c = json::cluster_from_json(&chords);
                let (a, b) = parse_pair(&arc)?;
                let t = ctx.arc(Elem(a), Elem(b))?;
                let m = ctx.mutate(&t, &c)?;
                println!(
                    "{}",
                    serde_json::json!({
                        "t_star": [m.t_star.x0.0, m.t_star.x1.0],
                        "witnesses": { "a": m.a.0, "b": m.b.0 },
                    })
                );
                Ok(ExitCode::SUCCESS)
            }
            ClusterCmd::Quiver {
                zn,
                cluster,
                mutate_at,
                format,
                out,
            } => {
                let p = CyclicPoset::zn(zn)?;
                let ctx = StableCtx::new(&p)?;
                let chords: Vec<[i64; 2]> = serde_json::from_str(&cluster)?;
                let c = json::cluster_from_json(&chords);
                let mut q = ctx.quiver(&c)?;
                if let Some(at) = mutate_at {
                    let (a, b) = parse_pair(&at)?;
                    let t = ctx.arc(Elem(a), Elem(b))?;
                    q = ctx.fz_mutate(&q, &t)?;
                }
                match format.as_str() {
                    "dot" => emit(&out, &export::quiver_to_dot(&p, &q))?,
                    "json" => {
                        let verts: Vec<[i64; 2]> =
                            q.vertices.iter().map(|v| [v.x0.0, v.x1.0]).collect();
                        emit(
                            &out,
                            &format!(
                                "{}\n",
                                serde_json::to_string_pretty(&serde_json::json!({
                                    "vertices": verts,
                                    "arrows": q.arrows,
                                }))?
                            ),
                        )?;
                    }
                    other => return Err(Error::UnknownFormat(other.into())),
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Mcluster { cmd } => match cmd {
            MclusterCmd::Count { m, s } => {
                let ctx = MCtx::new(m)?;
                let clusters = mcluster::enumerate_standard_clusters(&ctx, s)?;
                println!("{}", clusters.len());
                Ok(ExitCode::SUCCESS)
            }
            MclusterCmd::Mutate { m, s, chords, arc } => {
                let ctx = MCtx::new(m)?;
                let raw: Vec<[i64; 2]> = serde_json::from_str(&chords)?;
                let arcs = raw
                    .iter()
                    .map(|[a, b]| MArc::new(*a, *b))
                    .collect::<Result<Vec<_>, _>>()?;
                let c = mcluster::MCluster::new(arcs);
                let (a, b) = parse_pair(&arc)?;
                let t = MArc::new(a, b)?;
                let mp = mcluster::mutation_partners(&ctx, s, &c, &t)?;
                let partners: Vec<[i64; 2]> = mp.partners.iter().map(|p| [p.l1, p.l2]).collect();
                println!(
                    "{}",
                    serde_json::json!({ "partners": partners, "chain_certified": mp.chain.len() })
                );
                Ok(ExitCode::SUCCESS)
            }
            MclusterCmd::Check { m, arcs } => {
                let ctx = MCtx::new(m)?;
                let raw: Vec<[i64; 2]> = serde_json::from_str(&arcs)?;
                let list = raw
                    .iter()
                    .map(|[a, b]| MArc::new(*a, *b))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut all_ok = true;
                for arc in &list {
                    let class = ctx.class(arc)?;
                    let rigid = ctx.is_rigid(arc)?;
                    println!(
                        "{}",
                        serde_json::json!({
                            "arc": [arc.l1, arc.l2],
                            "class": format!("{class:?}"),
                            "rigid": rigid,
                        })
                    );
                    all_ok &= rigid;
                }
                for (i, x) in list.iter().enumerate() {
                    for y in &list[i + 1..] {
                        let compat = ctx.compatible_rigid(x, y)?;
                        println!(
                            "{}",
                            serde_json::json!({
                                "pair": [[x.l1, x.l2], [y.l1, y.l2]],
                                "compatible": compat,
                            })
                        );
                        all_ok &= compat;
                    }
                }
                Ok(if all_ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                })
            }
            MclusterCmd::ExampleM5 { format, out } => {
                let ex = mcluster::example_m5()?;
                match format.as_str() {
                    "svg" => {
                        let svg =
                            export::strip_to_svg(&ex.ctx, &ex.cluster, ex.window.0, ex.window.1)?;
                        emit(&out, &svg)?;
                    }
                    "json" => {
                        let arcs: Vec<[i64; 2]> = ex.cluster.iter().map(|a| [a.l1, a.l2]).collect();
                        emit(
                            &out,
                            &format!(
                                "{}\n",
                                serde_json::to_string_pretty(&serde_json::json!({
                                    "window": ex.window,
                                    "arcs": arcs,
                                    "face_sizes": ex.faces.face_sizes,
                                    "central_face": ex.faces.central.is_some(),
                                }))?
                            ),
                        )?;
                    }
                    other => return Err(Error::UnknownFormat(other.into())),
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Verify {
            suite,
            max_n,
            m,
            max_s,
            trials,
            cy_samples,
            seed,
            inject_fault,
        } => {
            let fault = match inject_fault.as_deref() {
                None => InjectFault::None,
                Some("crossing") => InjectFault::Crossing,
                Some(other) => return Err(Error::InvalidParams(format!("unknown fault {other}"))),
            };
            let ms = m
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::InvalidParams(format!("bad m value {x}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let bounds = VerifyBounds {
                max_n,
                ms,
                max_s,
                trials,
                cy_samples,
                seed,
                fault,
            };
            let ids: Vec<usize> = match suite.as_str() {
                "all" => (1..=10).collect(),
                "cyclic_poset" => vec![1],
                "linearization" => vec![2],
                "frobenius" => vec![6],
                "stable_cluster" => vec![2, 3, 4, 5],
                "mcluster" => vec![7, 8, 9],
                other => match other.parse::<usize>() {
                    Ok(id) if (1..=10).contains(&id) => vec![id],
                    _ => {
                        return Err(Error::InvalidParams(format!(
                            "unknown suite {other}; use all, a module name, or 1..10"
                        )))
                    }
                },
            };
            let mut all_passed = true;
            for id in ids {
                let r = run_criterion(id, &bounds);
                println!(
                    "[{}] criterion {:>2}: {:<42} {:>8} ms  {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.id,
                    CRITERIA[r.id - 1],
                    r.millis,
                    r.details
                );
                all_passed &= r.passed;
            }
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
