//! Command-line front end: distances, worst-case solvers, Monte Carlo
//! estimators, bound verification, the reproduction registry and the
//! property suites.
//!
//! Exit codes: 0 all checks passed, 1 a violation was found, 2 input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use avdist::avg::{closed_form, d_av_channels, d_av_classical, d_av_povms, d_av_states};
use avdist::ensembles::{random_channel, random_density, random_povm, SeedSpec, UnitaryEnsemble};
use avdist::linalg::ComplexMatrix;
use avdist::moments::{frame_potential, haar_frame_potential};
use avdist::montecarlo::{
    bound_check, bound_constants, estimate_avg_tv_channels, estimate_avg_tv_povms,
    estimate_avg_tv_states, ObjectKind,
};
use avdist::objects::{ChannelChoi, DensityMatrix, Povm};
use avdist::suites::{
    reproduce, reproduce_all, run_property_suite, suite_name, Suite, ALL_SUITES,
};
use avdist::worst::{
    diamond_distance, operational_distance, separation_report, trace_distance, DiamondConfig,
    ObjectPair,
};
use avdist::{Error, Result};

/// Versioned header prepended to every CSV report.
const CSV_VERSION_LINE: &str = "# avdist-csv v1";

#[derive(Parser)]
#[command(name = "avdist", version, about = "Average-case distances for quantum objects")]
struct Cli {
    /// Master seed for all randomized operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    State,
    Povm,
    Channel,
    Classical,
}

#[derive(Subcommand)]
enum Command {
    /// Average-case distance between two objects loaded from JSON files.
    Distance {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Worst-case distance (trace, operational or diamond).
    Worst {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Random-instance sweep of the worst/average sandwich at one dimension.
    Separation {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        dim: usize,
    },
    /// Monte Carlo estimate of the average TV distance over an ensemble.
    Estimate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        ensemble: PathBuf,
        #[arg(long)]
        samples: usize,
    },
    /// Estimate vs two-sided bound over random pairs and a dimension range.
    VerifyBounds {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Inclusive dimension range, e.g. 2:8.
        #[arg(long)]
        dims: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0.0)]
        delta_prime: f64,
    },
    /// Evaluate a named closed-form distance.
    ClosedForm {
        #[arg(long)]
        name: String,
        /// JSON parameter object.
        #[arg(long)]
        params: String,
    },
    /// Run one registered reproduction case, or all of them.
    Reproduce {
        #[arg(long, default_value = "all")]
        case: String,
    },
    /// Run a randomized property suite.
    Propcheck {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Print the two-sided bound constants for a kind and dimension.
    Constants {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0.0)]
        delta_prime: f64,
    },
    /// Monte Carlo frame potential of an ensemble, with the Haar reference.
    FramePotential {
        #[arg(long)]
        ensemble: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        samples: usize,
    },
}

/// On-disk JSON representation of an input object.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ObjectFile {
    State {
        mat: ComplexMatrix,
    },
    Povm {
        effects: Vec<ComplexMatrix>,
    },
    Channel {
        #[serde(default)]
        choi: Option<ComplexMatrix>,
        #[serde(default)]
        kraus: Option<Vec<ComplexMatrix>>,
    },
}

fn load_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn load_state(path: &PathBuf) -> Result<DensityMatrix> {
    match load_json::<ObjectFile>(path)? {
        ObjectFile::State { mat } => DensityMatrix::new(&mat),
        _ => Err(Error::BadParams(format!("{}: expected a state object", path.display()))),
    }
}

fn load_povm(path: &PathBuf) -> Result<Povm> {
    match load_json::<ObjectFile>(path)? {
        ObjectFile::Povm { effects } => Povm::new(&effects),
        _ => Err(Error::BadParams(format!("{}: expected a povm object", path.display()))),
    }
}

fn load_channel(path: &PathBuf) -> Result<ChannelChoi> {
    match load_json::<ObjectFile>(path)? {
        ObjectFile::Channel { choi: Some(choi), kraus: None } => ChannelChoi::from_choi(&choi),
        ObjectFile::Channel { choi: None, kraus: Some(kraus) } => ChannelChoi::from_kraus(&kraus),
        ObjectFile::Channel { .. } => Err(Error::BadParams(format!(
            "{}: channel needs exactly one of \"choi\" or \"kraus\"",
            path.display()
        ))),
        _ => Err(Error::BadParams(format!("{}: expected a channel object", path.display()))),
    }
}

fn object_kind(kind: Kind) -> Result<ObjectKind> {
    Ok(match kind {
        Kind::State => ObjectKind::State,
        Kind::Povm => ObjectKind::Povm,
        Kind::Channel => ObjectKind::Channel,
        Kind::Classical => {
            return Err(Error::BadParams("classical kind is not valid here".into()))
        }
    })
}

/// Parse an inclusive `lo:hi` dimension range.
fn parse_dims(spec: &str) -> Result<Vec<usize>> {
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::BadParams(format!("bad dimension range {spec:?}")))
    };
    let (lo, hi) = match spec.split_once(':') {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let d = parse(spec)?;
            (d, d)
        }
    };
    if lo < 2 || hi < lo {
        return Err(Error::BadParams(format!("bad dimension range {spec:?}")));
    }
    Ok((lo..=hi).collect())
}

/// A report ready for serialization: a JSON value plus a tabular view.
struct Report {
    value: serde_json::Value,
    csv_header: Vec<&'static str>,
    csv_rows: Vec<Vec<String>>,
    /// false when the report documents a violation (exit code 1)
    passed: bool,
}

impl Report {
    fn scalar(value: serde_json::Value) -> Self {
        let rows = match value.as_object() {
            Some(map) => map
                .iter()
                .map(|(k, v)| vec![k.clone(), v.to_string()])
                .collect(),
            None => vec![vec!["value".into(), value.to_string()]],
        };
        Report { value, csv_header: vec!["field", "value"], csv_rows: rows, passed: true }
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.17e}")
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let text = match cli.format {
        Format::Json => format!("{:#}\n", report.value),
        Format::Csv => {
            let mut out = format!("{CSV_VERSION_LINE}\n{}\n", report.csv_header.join(","));
            for row in &report.csv_rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
    };
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Distance { kind, a, b } => {
            let (value, dims) = match kind {
                Kind::State => {
                    let (x, y) = (load_state(a)?, load_state(b)?);
                    (d_av_states(&x, &y)?, json!([x.dim()]))
                }
                Kind::Povm => {
                    let (x, y) = (load_povm(a)?, load_povm(b)?);
                    (d_av_povms(&x, &y)?, json!([x.dim(), x.n_outcomes()]))
                }
                Kind::Channel => {
                    let (x, y) = (load_channel(a)?, load_channel(b)?);
                    (d_av_channels(&x, &y)?, json!([x.dim_in(), x.dim_out()]))
                }
                Kind::Classical => {
                    let (x, y) = (load_povm(a)?, load_povm(b)?);
                    (d_av_classical(&x, &y)?, json!([x.dim(), x.n_outcomes()]))
                }
            };
            let kind_str = match kind {
                Kind::State => "state",
                Kind::Povm => "povm",
                Kind::Channel => "channel",
                Kind::Classical => "classical",
            };
            Ok(Report::scalar(json!({ "value": value, "kind": kind_str, "dims": dims })))
        }
        Command::Worst { kind, a, b } => match kind {
            Kind::State => {
                let (x, y) = (load_state(a)?, load_state(b)?);
                Ok(Report::scalar(json!({
                    "value": trace_distance(&x, &y)?, "kind": "state", "dims": [x.dim()],
                })))
            }
            Kind::Povm => {
                let (x, y) = (load_povm(a)?, load_povm(b)?);
                Ok(Report::scalar(json!({
                    "value": operational_distance(&x, &y)?,
                    "kind": "povm",
                    "dims": [x.dim(), x.n_outcomes()],
                })))
            }
            Kind::Channel => {
                let (x, y) = (load_channel(a)?, load_channel(b)?);
                let solve =
                    diamond_distance(&x, &y, &DiamondConfig { seed: cli.seed, ..Default::default() })?;
                Ok(Report::scalar(serde_json::to_value(&solve)?))
            }
            Kind::Classical => {
                Err(Error::BadParams("worst-case distance is not defined for classical".into()))
            }
        },
        Command::Separation { kind, trials, dim } => {
            let kind = object_kind(*kind)?;
            let mut rows = Vec::new();
            let mut entries = Vec::new();
            let mut passed = true;
            for trial in 0..*trials as u64 {
                let mut rng = SeedSpec::new(cli.seed, trial).rng();
                let report = match kind {
                    ObjectKind::State => {
                        let (x, y) = (random_density(*dim, &mut rng), random_density(*dim, &mut rng));
                        separation_report(ObjectPair::States(&x, &y), cli.seed)?
                    }
                    ObjectKind::Povm => {
                        let (x, y) =
                            (random_povm(*dim, *dim, &mut rng), random_povm(*dim, *dim, &mut rng));
                        separation_report(ObjectPair::Povms(&x, &y), cli.seed)?
                    }
                    ObjectKind::Channel => {
                        let (x, y) = (random_channel(*dim, &mut rng), random_channel(*dim, &mut rng));
                        separation_report(ObjectPair::Channels(&x, &y), cli.seed)?
                    }
                };
                passed &= report.holds;
                rows.push(vec![
                    trial.to_string(),
                    fmt_f64(report.d_av),
                    fmt_f64(report.d_worst),
                    fmt_f64(if report.d_av > 0.0 { report.d_worst / report.d_av } else { 0.0 }),
                    fmt_f64(report.upper_factor),
                    report.holds.to_string(),
                ]);
                entries.push(serde_json::to_value(&report)?);
            }
            Ok(Report {
                value: json!({ "kind": kind, "dim": dim, "trials": trials, "reports": entries }),
                csv_header: vec!["trial", "d_av", "d_worst", "ratio", "bound", "ok"],
                csv_rows: rows,
                passed,
            })
        }
        Command::Estimate { kind, a, b, ensemble, samples } => {
            let ens: UnitaryEnsemble = load_json(ensemble)?;
            let report = match kind {
                Kind::State => {
                    let (x, y) = (load_state(a)?, load_state(b)?);
                    estimate_avg_tv_states(&ens, &x, &y, *samples, cli.seed)?
                }
                Kind::Povm => {
                    let (x, y) = (load_povm(a)?, load_povm(b)?);
                    estimate_avg_tv_povms(&ens, &x, &y, *samples, cli.seed)?
                }
                Kind::Channel => {
                    let (x, y) = (load_channel(a)?, load_channel(b)?);
                    estimate_avg_tv_channels(&ens, &x, &y, *samples, cli.seed)?
                }
                Kind::Classical => {
                    return Err(Error::BadParams("estimation runs on quantum kinds only".into()))
                }
            };
            Ok(Report::scalar(serde_json::to_value(&report)?))
        }
        Command::VerifyBounds { kind, dims, trials, samples, delta_prime } => {
            let kind = object_kind(*kind)?;
            let mut rows = Vec::new();
            let mut entries = Vec::new();
            let mut passed = true;
            for d in parse_dims(dims)? {
                let ens = UnitaryEnsemble::haar(d);
                for trial in 0..*trials as u64 {
                    let pair_seed = cli.seed ^ (d as u64) << 32;
                    let mut rng = SeedSpec::new(pair_seed, trial).rng();
                    let (estimate, d_av) = match kind {
                        ObjectKind::State => {
                            let (x, y) = (random_density(d, &mut rng), random_density(d, &mut rng));
                            (
                                estimate_avg_tv_states(&ens, &x, &y, *samples, pair_seed + trial)?,
                                d_av_states(&x, &y)?,
                            )
                        }
                        ObjectKind::Povm => {
                            let (x, y) = (random_povm(d, d, &mut rng), random_povm(d, d, &mut rng));
                            (
                                estimate_avg_tv_povms(&ens, &x, &y, *samples, pair_seed + trial)?,
                                d_av_povms(&x, &y)?,
                            )
                        }
                        ObjectKind::Channel => {
                            let (x, y) = (random_channel(d, &mut rng), random_channel(d, &mut rng));
                            (
                                estimate_avg_tv_channels(&ens, &x, &y, *samples, pair_seed + trial)?,
                                d_av_channels(&x, &y)?,
                            )
                        }
                    };
                    let report = bound_check(&estimate, d_av, kind, d, *delta_prime)?;
                    passed &= report.passed;
                    rows.push(vec![
                        d.to_string(),
                        trial.to_string(),
                        fmt_f64(report.d_av),
                        fmt_f64(report.lower),
                        fmt_f64(report.upper),
                        fmt_f64(report.mean),
                        fmt_f64(report.std_err),
                        report.n_samples.to_string(),
                        report.passed.to_string(),
                    ]);
                    entries.push(serde_json::to_value(&report)?);
                }
            }
            Ok(Report {
                value: json!({ "kind": kind, "delta_prime": delta_prime, "reports": entries }),
                csv_header: vec![
                    "d", "trial", "d_av", "lower", "upper", "mean", "std_err", "n_samples",
                    "passed",
                ],
                csv_rows: rows,
                passed,
            })
        }
        Command::ClosedForm { name, params } => {
            let params: serde_json::Value = serde_json::from_str(params)?;
            let result = closed_form(name, &params)?;
            Ok(Report::scalar(serde_json::to_value(&result)?))
        }
        Command::Reproduce { case } => {
            let outcomes = if case == "all" { reproduce_all()? } else { reproduce(case)? };
            let passed = outcomes.iter().all(|o| o.passed);
            let rows = outcomes
                .iter()
                .map(|o| {
                    vec![
                        o.case.clone(),
                        o.quantity.clone(),
                        fmt_f64(o.expected),
                        fmt_f64(o.actual),
                        fmt_f64(o.tolerance),
                        o.passed.to_string(),
                    ]
                })
                .collect();
            Ok(Report {
                value: serde_json::to_value(&outcomes)?,
                csv_header: vec!["case", "quantity", "expected", "actual", "tolerance", "passed"],
                csv_rows: rows,
                passed,
            })
        }
        Command::Propcheck { suite, trials } => {
            let suites: Vec<Suite> = if suite == "all" {
                ALL_SUITES.to_vec()
            } else {
                vec![suite.parse()?]
            };
            let mut rows = Vec::new();
            let mut reports = Vec::new();
            let mut passed = true;
            for s in suites {
                let report = run_property_suite(s, *trials, cli.seed)?;
                passed &= report.violations == 0;
                for l in &report.lines {
                    rows.push(vec![
                        suite_name(l.suite).to_string(),
                        l.check.clone(),
                        l.d.to_string(),
                        l.trial.to_string(),
                        cli.seed.to_string(),
                        fmt_f64(l.lhs),
                        fmt_f64(l.rhs),
                        l.holds.to_string(),
                    ]);
                }
                reports.push(serde_json::to_value(&report)?);
            }
            Ok(Report {
                value: json!({ "seed": cli.seed, "reports": reports }),
                csv_header: vec!["suite", "check", "d", "trial", "seed", "lhs", "rhs", "holds"],
                csv_rows: rows,
                passed,
            })
        }
        Command::Constants { kind, dim, delta_prime } => {
            let k = bound_constants(object_kind(*kind)?, *dim, *delta_prime)?;
            Ok(Report::scalar(serde_json::to_value(&k)?))
        }
        Command::FramePotential { ensemble, k, samples } => {
            let ens: UnitaryEnsemble = load_json(ensemble)?;
            let estimate = frame_potential(&ens, *k, *samples, cli.seed)?;
            let haar = haar_frame_potential(ens.dim(), *k).ok();
            Ok(Report::scalar(json!({ "estimate": estimate, "haar_value": haar, "k": k })))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
