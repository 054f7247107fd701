//! Command-line surface over the library: simulate leakage, run attacks,
//! flatten and audit distributions, generate tightness instances, and drive
//! experiment grids. Exit codes: 0 success, 2 cap violation, 3 config or
//! input error.

use clap::{Parser, Subcommand, ValueEnum};
use lama::error::Error;
use lama::{
    audit_flatness, build_instance, emit_report, flatten_equidistant, flatten_singletons,
    read_database, run_attack, run_experiment, sample_leakage, verify_instance, write_database,
    AttackConfig, AttackReport, ExperimentConfig, FrequencySource, LeakageTrace, QueryDistribution,
    SelectorKind, DEFAULT_QUERY_CAP,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lama",
    version,
    about = "Frequency analysis for encrypted range queries: attacks, defenses, experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectorArg {
    Full,
    Trimmed,
    Anchored,
}

impl From<SelectorArg> for SelectorKind {
    fn from(s: SelectorArg) -> SelectorKind {
        match s {
            SelectorArg::Full => SelectorKind::Full,
            SelectorArg::Trimmed => SelectorKind::Trimmed,
            SelectorArg::Anchored => SelectorKind::Anchored,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FlattenMode {
    /// Equalize single-value retrieval probabilities only.
    Singles,
    /// Equalize every equidistant pair (includes singles as distance 0).
    Pairs,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an access-pattern trace from a distribution and database.
    Simulate {
        /// Query distribution file (header `N=<int> k=<int>`).
        #[arg(long)]
        qd: PathBuf,
        /// Database file (`id,coord_1,...,coord_k` CSV).
        #[arg(long)]
        db: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trace output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct candidate databases from leakage.
    Attack {
        #[arg(long)]
        qd: PathBuf,
        /// Database file: exact limit-frequency mode.
        #[arg(long, conflicts_with = "trace")]
        db: Option<PathBuf>,
        /// Trace file: empirical mode with --epsilon tolerance.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Matching tolerance for empirical mode, as `num/den`.
        #[arg(long, default_value = "1/1000")]
        epsilon: String,
        #[arg(long, value_enum, default_value = "full")]
        selector: SelectorArg,
        /// Constraint rounds; defaults to the selector's maximum.
        #[arg(long)]
        t_max: Option<usize>,
        /// Disable candidate pruning (identical output, higher cost).
        #[arg(long)]
        no_prune: bool,
        /// Print the constraint formula.
        #[arg(long)]
        show_formula: bool,
        /// Reconstructions to print.
        #[arg(long, default_value_t = 10)]
        show: usize,
    },
    /// Rewrite a distribution so retrieval frequencies carry less signal.
    Flatten {
        #[arg(long)]
        qd: PathBuf,
        #[arg(long, value_enum, default_value = "pairs")]
        mode: FlattenMode,
        #[arg(long)]
        out: PathBuf,
    },
    /// Census pair-retrieval probabilities by distance class.
    Audit {
        #[arg(long)]
        qd: PathBuf,
        /// CSV output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate an instance where dropping size-2k tests loses accuracy.
    Counterexample {
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        #[arg(short, long, default_value_t = 6)]
        n: u32,
        #[arg(long)]
        out_qd: PathBuf,
        #[arg(long)]
        out_db: PathBuf,
        #[arg(long)]
        out_db_prime: PathBuf,
        /// Replay the instance through both selectors and check the gap.
        #[arg(long)]
        verify: bool,
    },
    /// Run a configured experiment grid and emit reports.
    Experiment {
        /// TOML experiment config.
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's CSV output path.
        #[arg(long)]
        out_csv: Option<PathBuf>,
        /// Overrides the config's JSON output path.
        #[arg(long)]
        out_json: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> lama::Result<()> {
    match cli.command {
        Command::Simulate {
            qd,
            db,
            samples,
            seed,
            out,
        } => {
            let qd = QueryDistribution::read_from(&qd)?;
            let db = read_database(&db, *qd.domain())?;
            let trace = sample_leakage(&qd, &db, samples, seed)?;
            trace.write_to(&out)?;
            println!(
                "wrote {} responses to {}",
                trace.responses.len(),
                out.display()
            );
            Ok(())
        }
        Command::Attack {
            qd,
            db,
            trace,
            epsilon,
            selector,
            t_max,
            no_prune,
            show_formula,
            show,
        } => {
            let qd = QueryDistribution::read_from(&qd)?;
            let config = AttackConfig {
                prune: !no_prune,
                ..AttackConfig::default()
            };
            let selector: SelectorKind = selector.into();
            let report =
                match (db, trace) {
                    (Some(db_path), None) => {
                        let db = read_database(&db_path, *qd.domain())?;
                        let source = FrequencySource::Exact { db: &db };
                        let t = t_max.unwrap_or(2 * qd.domain().k);
                        run_attack(&qd, &source, selector, t, &config)?
                    }
                    (None, Some(trace_path)) => {
                        let trace = LeakageTrace::read_from(&trace_path)?;
                        let epsilon = parse_rational_arg(&epsilon)?;
                        let source = FrequencySource::Empirical {
                            trace: &trace,
                            epsilon,
                        };
                        let t = t_max.unwrap_or(2 * qd.domain().k);
                        run_attack(&qd, &source, selector, t, &config)?
                    }
                    _ => return Err(Error::Config(
                        "exactly one of --db (exact mode) or --trace (empirical mode) is required"
                            .into(),
                    )),
                };
            print_attack_report(&report, show, show_formula);
            Ok(())
        }
        Command::Flatten { qd, mode, out } => {
            let input = QueryDistribution::read_from(&qd)?;
            let flattened = match mode {
                FlattenMode::Singles => flatten_singletons(&input, DEFAULT_QUERY_CAP)?,
                FlattenMode::Pairs => flatten_equidistant(&input, DEFAULT_QUERY_CAP)?,
            };
            flattened.write_to(&out)?;
            println!(
                "wrote flattened distribution ({} weighted queries) to {}",
                flattened.len(),
                out.display()
            );
            Ok(())
        }
        Command::Audit { qd, out } => {
            let qd = QueryDistribution::read_from(&qd)?;
            let report = audit_flatness(&qd, DEFAULT_QUERY_CAP)?;
            let mut text = String::from("distance,pair_count,min_prob,max_prob,flat\n");
            for row in report.rows() {
                text.push_str(&row);
                text.push('\n');
            }
            match out {
                Some(path) => {
                    std::fs::write(&path, text)?;
                    println!(
                        "wrote {} distance classes to {} (all flat: {})",
                        report.classes.len(),
                        path.display(),
                        report.all_flat()
                    );
                }
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Counterexample {
            k,
            n,
            out_qd,
            out_db,
            out_db_prime,
            verify,
        } => {
            let inst = build_instance(k, n, DEFAULT_QUERY_CAP)?;
            inst.qd.write_to(&out_qd)?;
            write_database(&out_db, &inst.db)?;
            write_database(&out_db_prime, &inst.db_prime)?;
            println!(
                "instance over [{n}]^{k}: {} records per side, alpha={}, delta={}",
                2 * k,
                inst.alpha,
                inst.delta
            );
            if verify {
                let record = verify_instance(&inst, &AttackConfig::default())?;
                println!(
                    "decoy accepted by trimmed selector: {}",
                    record.accepted_by_trimmed
                );
                println!(
                    "decoy rejected by full selector:    {}",
                    record.rejected_by_full
                );
                println!(
                    "strict-subset probabilities match:  {}",
                    record.strict_subsets_match
                );
                println!(
                    "full-set probability gap:           {}",
                    record.full_set_gap
                );
                if !record.passes() {
                    return Err(Error::Config("instance verification failed".into()));
                }
            }
            Ok(())
        }
        Command::Experiment {
            config,
            seed,
            out_csv,
            out_json,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if out_csv.is_some() {
                cfg.output_csv = out_csv;
            }
            if out_json.is_some() {
                cfg.output_json = out_json;
            }
            let report = run_experiment(&cfg)?;
            print!("{}", report.to_csv_string());
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let failed: Vec<&str> = report
                .cells
                .iter()
                .filter(|c| c.error.is_some())
                .map(|c| c.distribution.as_str())
                .collect();
            if !failed.is_empty() {
                eprintln!("failed cells: {}", failed.join(", "));
            }
            emit_report(
                &report,
                cfg.output_csv.as_deref(),
                cfg.output_json.as_deref(),
            )?;
            Ok(())
        }
    }
}

fn parse_rational_arg(s: &str) -> lama::Result<num_rational::BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: num_bigint::BigInt = num
        .parse()
        .map_err(|_| Error::Config(format!("bad rational `{s}`")))?;
    let den: num_bigint::BigInt = den
        .parse()
        .map_err(|_| Error::Config(format!("bad rational `{s}`")))?;
    if den == num_bigint::BigInt::from(0) {
        return Err(Error::Config(format!("bad rational `{s}`")));
    }
    Ok(num_rational::BigRational::new(num, den))
}

fn print_attack_report(report: &AttackReport, show: usize, show_formula: bool) {
    println!(
        "selector={} mode={}",
        report.selector.as_str(),
        if report.exact_mode {
            "exact"
        } else {
            "empirical"
        }
    );
    println!("t,matches,reconstructions,elapsed_ms");
    for r in &report.rounds {
        println!(
            "{},{},{},{}",
            r.t, r.matches, r.reconstructions, r.elapsed_ms
        );
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if show_formula {
        println!("formula: {}", report.formula);
    }
    println!("final reconstructions: {}", report.final_set.count);
    for (i, sol) in report.final_set.solutions.iter().take(show).enumerate() {
        let rendered: Vec<String> = report
            .final_set
            .ids
            .iter()
            .zip(sol)
            .map(|(id, v)| format!("{id}={v}"))
            .collect();
        println!("  #{:<3} {}", i + 1, rendered.join(" "));
    }
    let total = report.final_set.solutions.len();
    if total > show {
        println!("  ... {} more materialized", total - show);
    }
}
