mod plot;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use te_motifs::dynsim::{gen_rbn, read_panel, simulate_rbn, simulate_var, write_panel, DEFAULT_BURN_IN};
use te_motifs::estim::{
    ais_gaussian, format_te_records, select_embedding_with_tolerance, default_tie_tolerance, te_discrete_plugin,
    te_gaussian_empirical, TERecord, TeMethod,
};
use te_motifs::experiments::{all_link_records, run_experiment, ExperimentConfig, ExperimentId, Preset};
use te_motifs::lincov::{te_exact, te_trace_series, DEFAULT_EMBEDDING, DEFAULT_SERIES_TOL};
use te_motifs::motifte::{motif_terms, MotifVariant};
use te_motifs::netgen::{gen_ba, gen_ws_ring, read_network, spectral_radius, write_network};
use te_motifs::{EmbeddingSpec, Error};

#[derive(Parser)]
#[command(name = "te-motifs", version, about = "Transfer entropy from network structure and motifs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a weighted network.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Analytic TE of the linear Gaussian process on a network.
    #[command(subcommand)]
    Te(TeCmd),
    /// Simulate dynamics on a network.
    #[command(subcommand)]
    Sim(SimCmd),
    /// Estimate TE or embedding length from a sampled panel.
    #[command(subcommand)]
    Estimate(EstimateCmd),
    /// Run an experiment sweep.
    Exp(ExpArgs),
}

#[derive(Subcommand)]
enum GenCmd {
    /// Preferential-attachment network.
    Ba {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        weight: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ring lattice with random rewiring of incoming links.
    Ws {
        #[arg(long)]
        nodes: usize,
        /// Links from each side of the ring.
        #[arg(long)]
        neighbors: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        weight: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    net: PathBuf,
    #[arg(long)]
    source: usize,
    #[arg(long)]
    target: usize,
}

#[derive(Subcommand)]
enum TeCmd {
    Exact {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = DEFAULT_EMBEDDING)]
        k: usize,
    },
    Motifs {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value = "full")]
        variant: MotifVariant,
        /// Print each motif term.
        #[arg(long)]
        breakdown: bool,
    },
    /// Partial sums of the log-determinant trace series.
    Series {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = DEFAULT_EMBEDDING)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        terms: usize,
    },
    /// Exact and motif TE for every linked pair, as CSV.
    AllLinks {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EMBEDDING)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SimCmd {
    Var {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_BURN_IN)]
        burn_in: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    Rbn {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        samples: usize,
        /// Probability of a 1 in each truth-table entry.
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        /// Per-step output flip probability.
        #[arg(long, default_value_t = 0.005)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum EstimateCmd {
    /// Gaussian TE from a real-valued panel.
    Gaussian {
        #[arg(long)]
        panel: PathBuf,
        #[arg(long)]
        source: usize,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = DEFAULT_EMBEDDING)]
        k: usize,
        #[arg(long)]
        no_bias_correction: bool,
    },
    /// Plug-in TE in bits from a binary panel.
    Discrete {
        #[arg(long)]
        panel: PathBuf,
        #[arg(long)]
        source: usize,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Embedding length maximizing active information storage.
    Embedding {
        #[arg(long)]
        panel: PathBuf,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 20)]
        k_max: usize,
    },
}

#[derive(Args)]
struct ExpArgs {
    /// ba-indegree, ws-rewiring, rbn-indegree or rbn-rewiring.
    id: ExperimentId,
    #[arg(long)]
    preset: Option<Preset>,
    /// File of `key = value` settings.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Base seed for realization seeds.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Extra `key=value` overrides, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Skip the SVG plot.
    #[arg(long)]
    no_plot: bool,
}

fn with_path<T>(path: &Path, r: te_motifs::Result<T>) -> te_motifs::Result<T> {
    r.map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    })
}

fn read_net(path: &Path) -> te_motifs::Result<te_motifs::WeightedAdjacency> {
    with_path(path, read_network(path))
}

fn read_samples(path: &Path) -> te_motifs::Result<te_motifs::dynsim::TimeSeriesPanel> {
    with_path(path, read_panel(path))
}

fn ensure_parent(path: &Path) -> te_motifs::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(())
}

fn run(cli: Cli) -> te_motifs::Result<()> {
    match cli.command {
        Command::Gen(g) => {
            let (adj, out) = match g {
                GenCmd::Ba { nodes, weight, seed, out } => (gen_ba(nodes, weight, seed)?, out),
                GenCmd::Ws {
                    nodes,
                    neighbors,
                    gamma,
                    weight,
                    seed,
                    out,
                } => (gen_ws_ring(nodes, neighbors, gamma, weight, seed)?, out),
            };
            ensure_parent(&out)?;
            write_network(&adj, &out)?;
            eprintln!(
                "wrote {} ({} links, spectral radius {:.6})",
                out.display(),
                adj.links().len(),
                spectral_radius(&adj)?
            );
        }
        Command::Te(t) => match t {
            TeCmd::Exact { pair, k } => {
                let adj = read_net(&pair.net)?;
                println!("{}", te_exact(&adj, pair.source, pair.target, EmbeddingSpec::new(k)?, DEFAULT_SERIES_TOL)?);
            }
            TeCmd::Motifs { pair, variant, breakdown } => {
                let adj = read_net(&pair.net)?;
                let m = motif_terms(&adj, pair.source, pair.target)?;
                if breakdown {
                    let labels = [
                        "a_direct_link",
                        "b_secondary_path",
                        "c_source_in_links",
                        "d_target_in_links",
                        "e_source_self_loop",
                        "f_common_parent_self_loop",
                        "g_source_self_loop_path",
                    ];
                    for (label, v) in labels.iter().zip(m.terms()) {
                        println!("{label} {v:e}");
                    }
                }
                println!("total {:e}", m.value(variant));
            }
            TeCmd::Series { pair, k, terms } => {
                let adj = read_net(&pair.net)?;
                let sums = te_trace_series(&adj, pair.source, pair.target, EmbeddingSpec::new(k)?, terms)?;
                println!("m,partial_sum");
                for (m, s) in sums.iter().enumerate() {
                    println!("{},{s:.16e}", m + 1);
                }
            }
            TeCmd::AllLinks { net, k, out } => {
                let adj = read_net(&net)?;
                let csv = format_te_records(&all_link_records(&adj, EmbeddingSpec::new(k)?)?);
                emit(out.as_deref(), &csv)?;
            }
        },
        Command::Sim(s) => match s {
            SimCmd::Var {
                net,
                samples,
                burn_in,
                seed,
                out,
            } => {
                let panel = simulate_var(&read_net(&net)?, samples, burn_in, seed)?;
                ensure_parent(&out)?;
                write_panel(&panel, &out)?;
            }
            SimCmd::Rbn {
                net,
                samples,
                r,
                p,
                seed,
                out,
            } => {
                let adj = read_net(&net)?;
                let spec = gen_rbn(&adj, r, p, te_motifs::rng::derive_seed(seed, 0))?;
                let panel = simulate_rbn(&spec, samples, te_motifs::rng::derive_seed(seed, 1))?;
                ensure_parent(&out)?;
                write_panel(&panel, &out)?;
            }
        },
        Command::Estimate(e) => match e {
            EstimateCmd::Gaussian {
                panel,
                source,
                target,
                k,
                no_bias_correction,
            } => {
                let panel = read_samples(&panel)?;
                let emb = EmbeddingSpec::new(k)?;
                let te = te_gaussian_empirical(&panel, source, target, emb, !no_bias_correction)?;
                print_record(source, target, TeMethod::GaussEmp, k, te);
            }
            EstimateCmd::Discrete { panel, source, target, k } => {
                let panel = read_samples(&panel)?;
                let te = te_discrete_plugin(&panel, source, target, EmbeddingSpec::new(k)?)?;
                print_record(source, target, TeMethod::Discrete, k, te);
            }
            EstimateCmd::Embedding { panel, target, k_max } => {
                let panel = read_samples(&panel)?;
                let tol = default_tie_tolerance(panel.t_samples(), k_max);
                let (k, scores) = select_embedding_with_tolerance(&panel, target, k_max, tol)?;
                println!("k,ais");
                for (i, s) in scores.iter().enumerate() {
                    println!("{},{s:.16e}", i + 1);
                }
                println!("selected {k}");
                log::debug!("ais at selected k: {}", ais_gaussian(&panel, target, EmbeddingSpec::new(k)?, true)?);
            }
        },
        Command::Exp(a) => run_exp(a)?,
    }
    Ok(())
}

fn print_record(source: usize, target: usize, method: TeMethod, k: usize, value: f64) {
    let rec = TERecord {
        source,
        target,
        method,
        k,
        value,
    };
    print!("{}", format_te_records(&[rec]));
}

fn emit(out: Option<&Path>, text: &str) -> te_motifs::Result<()> {
    match out {
        Some(p) => {
            ensure_parent(p)?;
            fs::write(p, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run_exp(a: ExpArgs) -> te_motifs::Result<()> {
    let file_settings = match &a.config {
        Some(p) => ExperimentConfig::parse_settings(&with_path(p, fs::read_to_string(p).map_err(Error::from))?)?,
        None => Vec::new(),
    };
    let mut overrides: Vec<(String, String)> = Vec::new();
    if let Some(s) = a.seed {
        overrides.push(("seed".into(), s.to_string()));
    }
    if let Some(r) = a.realizations {
        overrides.push(("realizations".into(), r.to_string()));
    }
    if let Some(k) = a.k {
        overrides.push(("k".into(), k.to_string()));
    }
    if let Some(d) = &a.out_dir {
        overrides.push(("out_dir".into(), d.display().to_string()));
    }
    for kv in &a.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::InvalidArgument {
            arg: "set",
            reason: format!("expected KEY=VALUE, got `{kv}`"),
        })?;
        overrides.push((k.trim().into(), v.trim().into()));
    }
    let cfg = ExperimentConfig::resolve(Some(a.id), a.preset, &file_settings, &overrides)?;
    let out = run_experiment(&cfg)?;
    let csv = out.write_to(&cfg.out_dir)?;
    for note in &out.notes {
        log::warn!("{note}");
    }
    if !a.no_plot {
        let text = fs::read_to_string(&csv)?;
        let svg_path = csv.with_extension("svg");
        let svg = match out.grid() {
            Some(_) => plot::heatmap_from_csv(&text, &format!("{} mean TE by in-degree", cfg.experiment)),
            None => plot::curves_from_csv(&text, &format!("{} mean TE vs rewiring", cfg.experiment)),
        };
        match svg {
            Ok(svg) => fs::write(&svg_path, svg)?,
            Err(e) => log::warn!("plot skipped: {e}"),
        }
    }
    println!("{}", csv.display());
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(io) if io.kind() == std::io::ErrorKind::NotFound => 2,
        e if e.is_validation() => 2,
        _ => 1,
    }
}

fn diagnostic(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": kind, "message": message }).to_string()
}

/// Parse `argv`, run the command, and map the outcome to an exit code.
fn cli_dispatch<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.kind().to_string();
            let detail = e.render().to_string();
            let first = detail.lines().find(|l| !l.trim().is_empty()).unwrap_or(&msg);
            eprintln!("{}", diagnostic("usage", first.trim_start_matches("error: ")));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            let kind = if code == 2 { "validation" } else { "runtime" };
            eprintln!("{}", diagnostic(kind, &e.to_string()));
            ExitCode::from(code)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    cli_dispatch(std::env::args_os())
}
