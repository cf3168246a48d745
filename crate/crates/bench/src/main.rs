use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use edgecount_bench::config::{parse_fraction, parse_list, parse_pairs, Profile};
use edgecount_bench::divergence::{self, tenth_r_budget, DivergenceConfig};
use edgecount_bench::experiment::{self, format_summary, graph_rng, run_on_graph, sig9};
use edgecount_bench::families::{gen_family, hard_pair, Family};
use edgecount_bench::{BenchError, BenchResult, ExperimentConfig};

#[derive(Parser)]
#[command(name = "edgecount", version, about = "Edge-count estimation experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a graph in the text format.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; hard pairs also get `<out>.meta`. Stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the estimator once and print the estimate with its ledger.
    Estimate {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run seeded trials and write one CSV row per trial.
    Bench {
        /// Flat key=value file; flags given on the command line win.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall time per trial (breaks byte-identical output).
        #[arg(long)]
        timing: bool,
    },
    /// Coupled runs on hard pairs; writes divergence rates per budget.
    Lowerbound {
        #[arg(long)]
        n: usize,
        #[arg(long = "nk")]
        n_k: usize,
        /// Accuracy of the hard pair, at most 1/11.
        #[arg(long = "lb-eps", default_value = "1/11", value_parser = fraction)]
        lb_eps: f64,
        /// Accuracy requested from the estimator.
        #[arg(long, default_value = "1/15", value_parser = fraction)]
        eps: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated budgets; defaults to floor(R/10).
        #[arg(long)]
        budgets: Option<String>,
        #[arg(long, default_value = "standard")]
        profile: Profile,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// clique, gnm, star_forest, clique_biclique, hard_pair or file
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Clique size.
    #[arg(long)]
    t: Option<usize>,
    /// Edge count for gnm.
    #[arg(long)]
    m: Option<u64>,
    /// Comma-separated star sizes.
    #[arg(long)]
    degrees: Option<String>,
    #[arg(long = "nk")]
    n_k: Option<usize>,
    #[arg(long = "nl")]
    n_ell: Option<usize>,
    #[arg(long = "nh")]
    n_h: Option<usize>,
    #[arg(long = "lb-eps")]
    lb_epsilon: Option<String>,
    /// Side of a hard pair, 1 or 2.
    #[arg(long)]
    which: Option<u8>,
    /// Graph file for the `file` family.
    #[arg(long)]
    graph: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "mbar-star")]
    mbar_star: Option<f64>,
    #[arg(long)]
    budget: Option<u64>,
    /// standard or desk
    #[arg(long)]
    profile: Option<String>,
}

fn fraction(s: &str) -> Result<f64, String> {
    parse_fraction(s).ok_or_else(|| format!("not a number: {s:?}"))
}

fn put<T: ToString>(pairs: &mut BTreeMap<String, String>, key: &str, v: &Option<T>) {
    if let Some(v) = v {
        pairs.insert(key.to_string(), v.to_string());
    }
}

impl FamilyArgs {
    fn merge_into(&self, p: &mut BTreeMap<String, String>) {
        put(p, "family", &self.family);
        put(p, "n", &self.n);
        put(p, "t", &self.t);
        put(p, "m", &self.m);
        put(p, "degrees", &self.degrees);
        put(p, "n_k", &self.n_k);
        put(p, "n_ell", &self.n_ell);
        put(p, "n_h", &self.n_h);
        put(p, "lb_epsilon", &self.lb_epsilon);
        put(p, "which", &self.which);
        put(p, "graph", &self.graph);
    }
}

impl RunArgs {
    fn merge_into(&self, p: &mut BTreeMap<String, String>) {
        put(p, "epsilon", &self.eps);
        put(p, "seed", &self.seed);
        put(p, "mbar_star", &self.mbar_star);
        put(p, "budget", &self.budget);
        put(p, "profile", &self.profile);
    }
}

fn open_out(path: Option<&Path>) -> BenchResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> BenchResult<()> {
    match cli.cmd {
        Cmd::Gen { family, seed, out } => {
            let mut pairs = BTreeMap::new();
            family.merge_into(&mut pairs);
            let (fam, n) = edgecount_bench::config::family_from_pairs(&pairs)?;
            let mut rng = graph_rng(seed);
            let (graph, meta) = match fam {
                Family::HardPair { n_k, epsilon, second } => {
                    let pair = hard_pair(n, n_k, epsilon, &mut rng)?;
                    let (g1, g2) = pair.graphs();
                    let meta = format!("{}which={}\n", pair.metadata(seed), 1 + u8::from(second));
                    (if second { g2 } else { g1 }, Some(meta))
                }
                other => (gen_family(&other, n, &mut rng)?, None),
            };
            open_out(out.as_deref())?.write_all(graph.to_text().as_bytes())?;
            if let (Some(meta), Some(path)) = (meta, out) {
                let mut side = path.into_os_string();
                side.push(".meta");
                std::fs::write(side, meta)?;
            }
        }
        Cmd::Estimate { family, run } => {
            let mut pairs = BTreeMap::new();
            family.merge_into(&mut pairs);
            run.merge_into(&mut pairs);
            let cfg = ExperimentConfig::from_pairs(&pairs)?;
            let exp = experiment::run_experiment(&cfg)?;
            let r = &exp.records[0];
            let estimate = r.estimate.map_or("budget_exhausted".to_string(), sig9);
            println!(
                "estimate={} true_m={} deg={} neigh={} is={} total={} route={:?} deviation={}",
                estimate,
                r.true_m,
                r.ledger.deg_count,
                r.ledger.neigh_count,
                r.ledger.is_count,
                r.ledger.total,
                r.route,
                r.deviation
            );
        }
        Cmd::Bench {
            config,
            family,
            run,
            trials,
            out,
            timing,
        } => {
            let mut pairs = match config {
                Some(path) => parse_pairs(&std::fs::read_to_string(path)?)?,
                None => BTreeMap::new(),
            };
            family.merge_into(&mut pairs);
            run.merge_into(&mut pairs);
            put(&mut pairs, "trials", &trials);
            put(&mut pairs, "out", &out.as_ref().map(|p| p.display()));
            if timing {
                pairs.insert("timing".into(), "true".into());
            }
            let cfg = ExperimentConfig::from_pairs(&pairs)?;
            let graph = gen_family(&cfg.family, cfg.n, &mut graph_rng(cfg.master_seed))?;
            let exp = run_on_graph(&cfg, &graph)?;
            experiment::write_csv(&exp, open_out(cfg.out.as_deref())?)?;
            eprintln!("{}", format_summary(&exp));
        }
        Cmd::Lowerbound {
            n,
            n_k,
            lb_eps,
            eps,
            trials,
            seed,
            budgets,
            profile,
            out,
        } => {
            let params = edgecount::lowerbound::lb_params(n, n_k, lb_eps)?;
            let budgets = match budgets {
                Some(list) => parse_list("budgets", &list)?,
                None => vec![tenth_r_budget(&params)],
            };
            let cfg = DivergenceConfig {
                n,
                n_k,
                lb_epsilon: lb_eps,
                epsilon: eps,
                trials,
                master_seed: seed,
                budgets,
                profile,
            };
            let report = divergence::run_divergence(&cfg)?;
            divergence::write_csv(&report, open_out(out.as_deref())?)?;
            eprintln!(
                "R={} identity_failures={}",
                sig9(report.params.r()),
                report.identity_failures
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (BenchError::Config(_) | BenchError::Core(edgecount::Error::Domain(_)))) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
