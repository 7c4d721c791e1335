//! Command-line interface. Every command validates its inputs before any
//! computation, writes its outputs under the output directory and prints a
//! one-line summary. Exit codes: 0 success or passing verdict, 1 failing
//! verdict, 2 usage, configuration or computation error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::HashMap;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use crate::cantor::{realize_measure, CantorTree, Side};
use crate::capacity::{
    direct_capacity_lower, melnikov_gamma_lower, theorem1_indices, wolff_capacity_lower,
    CapacityIndices, QuadratureSpec, WolffSource,
};
use crate::config::ScheduleConfig;
use crate::error::{Error, Result};
use crate::experiments::{
    example1_gauge_test, example2_experiment, example3_experiment, main_lemma_experiment,
    sharpness_experiment, verify_teocap_a, verify_theorem1, ExperimentReport, RealizationSetup,
};
use crate::gauges::{
    check_g1, check_g2, content_mh_tree, frostman_tree, lemtec1_check, sample_g1_pairs, Ball,
    ConstantGauge, DensityGauge, Gauge, MassGauge, RadialGauge,
};
use crate::geom::Point;
use crate::potentials::{
    linear_growth_constant, menger_curvature, riesz_potential, wolff_dyadic_many, wolff_tree,
    QuerySet,
};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "CANTOR_CAPACITY_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "cantor-capacity",
    version,
    about = "Capacities and potentials on quasiconformal Cantor pairs"
)]
pub struct Cli {
    /// Output directory (default: $CANTOR_CAPACITY_OUT, else the current directory).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; `verify` writes both when omitted.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for realizations and Monte Carlo sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Source,
    Target,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Source => Side::Source,
            SideArg::Target => Side::Target,
        }
    }
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Use the distortion indices `(2K/(2K+1), (2K+1)/(K+1))` for this `K`.
    #[arg(long = "K")]
    pub k: Option<f64>,
}

impl IndexArgs {
    fn resolve(&self) -> Result<CapacityIndices> {
        match (self.alpha, self.p, self.k) {
            (Some(a), Some(p), None) => CapacityIndices::new(a, p),
            (None, None, Some(k)) => theorem1_indices(k),
            _ => Err(Error::Argument(
                "give either --alpha and --p, or --K".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WolffMode {
    /// Per-generation tree formula.
    Tree,
    /// Dyadic sums of a leaf-center realization at leaf centers.
    Dyadic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Estimator {
    Wolff,
    Direct,
    Melnikov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GaugeArg {
    Unit,
    Mass,
    Density,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Constant,
    Density,
    InverseRadius,
    Lemtec1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Thm1,
    Teocap,
    Sharpness,
    Ex1,
    Ex2,
    Ex3,
    Mainlemma,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a tree from a schedule config and export its nodes.
    Build {
        #[arg(long)]
        config: PathBuf,
    },
    /// Wolff potential profile.
    Wolff {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        #[command(flatten)]
        indices: IndexArgs,
        #[arg(long, value_enum, default_value = "tree")]
        mode: WolffMode,
        /// Finest dyadic scale `2^{k_min}` in dyadic mode.
        #[arg(long, default_value_t = -40, allow_hyphen_values = true)]
        k_min: i32,
    },
    /// Riesz potential `I_α μ` at the leaf centers of a realization.
    Riesz {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        samples_per_leaf: usize,
    },
    /// Menger curvature of a realization.
    Curvature {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long, default_value_t = 1)]
        samples_per_leaf: usize,
        #[arg(long, default_value_t = 200_000)]
        triples: usize,
    },
    /// Capacity estimate.
    Capacity {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        #[command(flatten)]
        indices: IndexArgs,
        #[arg(long, value_enum, default_value = "wolff")]
        estimator: Estimator,
        #[arg(long, default_value_t = 1)]
        samples_per_leaf: usize,
    },
    /// Tree content `M^h` and its Frostman measure.
    Content {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long, value_enum, default_value = "log")]
        gauge: GaugeArg,
        /// Parameter `a` of `ε_{μ,a}`.
        #[arg(long, default_value_t = 0.1)]
        a: f64,
        /// Exponent `γ` in `h = r^γ ε` (unit and log gauges).
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
    },
    /// Empirical regularity constants of a gauge.
    CheckGauge {
        #[arg(long, value_enum)]
        gauge: CheckArg,
        /// Schedule whose source realization defines `ε_{μ,a}` (density gauge).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        a: f64,
        /// Second exponent for lemtec1.
        #[arg(long, default_value_t = 2.0)]
        b: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Run an experiment and write its report.
    Verify {
        #[arg(value_enum)]
        experiment: Experiment,
        #[arg(long = "K", default_value_t = 2.0)]
        k: f64,
        /// Depth range `a..b` (inclusive).
        #[arg(long, value_parser = parse_depths)]
        depths: Option<RangeInclusive<usize>>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        a: f64,
        /// Exponent of `ε(r) = 1/log(1/r)^power` in ex2.
        #[arg(long, default_value_t = 1.0)]
        power: f64,
    },
}

/// Parses `a..b` or `a..=b` (both inclusive) or a single depth.
pub fn parse_depths(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("invalid depth {t:?}: {e}"))
    };
    let range = match s.split_once("..") {
        Some((a, b)) => parse(a)?..=parse(b.trim_start_matches('='))?,
        None => {
            let d = parse(s)?;
            d..=d
        }
    };
    if range.is_empty() {
        return Err(format!("empty depth range {s}"));
    }
    Ok(range)
}

struct Output {
    name: String,
    contents: String,
}

struct Outcome {
    outputs: Vec<Output>,
    summary: String,
    pass: bool,
}

impl Outcome {
    fn ok(outputs: Vec<Output>, summary: String) -> Self {
        Self {
            outputs,
            summary,
            pass: true,
        }
    }
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn load(config: &Path, seed: Option<u64>) -> Result<ScheduleConfig> {
    let mut cfg = ScheduleConfig::from_path(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn realized(cfg: &ScheduleConfig) -> Result<CantorTree> {
    let tree = cfg.tree()?;
    if tree.is_realized() {
        Ok(tree)
    } else {
        tree.realize_centers(cfg.seed)
    }
}

fn single(
    format: Option<Format>,
    stem: &str,
    csv: impl FnOnce() -> String,
    js: impl FnOnce() -> String,
) -> Vec<Output> {
    match format.unwrap_or(Format::Csv) {
        Format::Csv => vec![Output {
            name: format!("{stem}.csv"),
            contents: csv(),
        }],
        Format::Json => vec![Output {
            name: format!("{stem}.json"),
            contents: js(),
        }],
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    match &cli.command {
        Command::Build { config } => {
            let cfg = load(config, seed)?;
            let tree = cfg.tree()?;
            let export = tree.export()?;
            let outputs = single(
                cli.format,
                "tree",
                || {
                    let mut s = String::from("path,s_log,t_log,mass_log\n");
                    for n in &export.nodes {
                        let path: Vec<String> = n.path.iter().map(u32::to_string).collect();
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            path.join("."),
                            fmt(n.s_log),
                            fmt(n.t_log),
                            fmt(n.mass_log)
                        ));
                    }
                    s
                },
                || json(&export),
            );
            Ok(Outcome::ok(
                outputs,
                format!(
                    "build: K = {}, depth {}, {} nodes",
                    cfg.k,
                    cfg.depth,
                    export.nodes.len()
                ),
            ))
        }
        Command::Wolff {
            config,
            side,
            indices,
            mode,
            k_min,
        } => {
            let idx = indices.resolve()?;
            let cfg = load(config, seed)?;
            let side = Side::from(*side);
            match mode {
                WolffMode::Tree => {
                    let tree = cfg.tree()?;
                    let prof = wolff_tree(&tree, side, &idx, tree.depth())?;
                    let summary =
                        format!("wolff tree/{}: total {}", side.as_str(), fmt(prof.total()));
                    let outputs = single(cli.format, "wolff", || prof.to_csv(), || json(&prof));
                    Ok(Outcome::ok(outputs, summary))
                }
                WolffMode::Dyadic => {
                    let tree = realized(&cfg)?;
                    let mu = realize_measure(&tree, side, 1, cfg.seed)?;
                    let query = QuerySet::for_tree(&tree, side, 0, cfg.seed)?;
                    let profiles = wolff_dyadic_many(&mu, &query.points, &idx, *k_min, 2)?;
                    let mut csv = String::from("point,x,y,total,divergent\n");
                    for (i, (pt, prof)) in query.points.iter().zip(&profiles).enumerate() {
                        csv.push_str(&format!(
                            "{i},{},{},{},{}\n",
                            fmt(pt.x),
                            fmt(pt.y),
                            fmt(prof.total()),
                            prof.is_divergent()
                        ));
                    }
                    let sup = profiles.iter().map(|p| p.total()).fold(0.0, f64::max);
                    let outputs = single(cli.format, "wolff", || csv, || json(&profiles));
                    Ok(Outcome::ok(
                        outputs,
                        format!(
                            "wolff dyadic/{}: sup over {} points {}",
                            side.as_str(),
                            profiles.len(),
                            fmt(sup)
                        ),
                    ))
                }
            }
        }
        Command::Riesz {
            config,
            side,
            alpha,
            samples_per_leaf,
        } => {
            let cfg = load(config, seed)?;
            let side = Side::from(*side);
            let tree = realized(&cfg)?;
            let mu = realize_measure(&tree, side, *samples_per_leaf, cfg.seed)?;
            let leaves = tree.leaves()?;
            let mut rows = Vec::with_capacity(leaves.len());
            for leaf in &leaves {
                let x = leaf.center(side).ok_or(Error::Unrealized)?;
                rows.push((x, riesz_potential(&mu, x, *alpha)?));
            }
            let sup = rows.iter().map(|r| r.1).fold(0.0, f64::max);
            let outputs = single(
                cli.format,
                "riesz",
                || {
                    let mut s = String::from("point,x,y,potential\n");
                    for (i, (x, v)) in rows.iter().enumerate() {
                        s.push_str(&format!("{i},{},{},{}\n", fmt(x.x), fmt(x.y), fmt(*v)));
                    }
                    s
                },
                || json(&rows.iter().map(|(x, v)| (x, v)).collect::<Vec<_>>()),
            );
            Ok(Outcome::ok(
                outputs,
                format!("riesz/{}: sup {}", side.as_str(), fmt(sup)),
            ))
        }
        Command::Curvature {
            config,
            side,
            samples_per_leaf,
            triples,
        } => {
            let cfg = load(config, seed)?;
            let side = Side::from(*side);
            let tree = realized(&cfg)?;
            let mu = realize_measure(&tree, side, *samples_per_leaf, cfg.seed)?;
            let est = menger_curvature(&mu, *triples, cfg.seed)?;
            let outputs = vec![Output {
                name: "curvature.json".into(),
                contents: json(&est),
            }];
            Ok(Outcome::ok(
                outputs,
                format!(
                    "curvature/{}: c² = {} ± {}",
                    side.as_str(),
                    fmt(est.value),
                    fmt(est.stderr)
                ),
            ))
        }
        Command::Capacity {
            config,
            side,
            indices,
            estimator,
            samples_per_leaf,
        } => {
            let cfg = load(config, seed)?;
            let side = Side::from(*side);
            let est = match estimator {
                Estimator::Wolff => {
                    let idx = indices.resolve()?;
                    let tree = cfg.tree()?;
                    wolff_capacity_lower(
                        WolffSource::Tree {
                            tree: &tree,
                            side,
                            depth: tree.depth(),
                        },
                        &idx,
                    )?
                }
                Estimator::Direct => {
                    let idx = indices.resolve()?;
                    let tree = realized(&cfg)?;
                    let mu = realize_measure(&tree, side, *samples_per_leaf, cfg.seed)?;
                    direct_capacity_lower(&mu, &idx, &QuadratureSpec::default())?
                }
                Estimator::Melnikov => {
                    let tree = realized(&cfg)?;
                    let mu = realize_measure(&tree, side, *samples_per_leaf, cfg.seed)?;
                    let fine = tree.log_gen_radius(side, tree.depth()).exp()
                        / (*samples_per_leaf as f64).sqrt();
                    let growth = linear_growth_constant(&mu, fine.log2().floor() as i32, 1, &[]);
                    let curvature = menger_curvature(&mu, 200_000, cfg.seed)?;
                    melnikov_gamma_lower(&mu, &curvature, growth)?
                }
            };
            let summary = format!("capacity/{}: {}", side.as_str(), fmt(est.value));
            Ok(Outcome::ok(
                vec![Output {
                    name: "capacity.json".into(),
                    contents: est.to_json() + "\n",
                }],
                summary,
            ))
        }
        Command::Content {
            config,
            side,
            gauge,
            a,
            gamma,
        } => {
            let cfg = load(config, seed)?;
            let side = Side::from(*side);
            let tree = match gauge {
                GaugeArg::Density => realized(&cfg)?,
                _ => cfg.tree()?,
            };
            let g: Box<dyn Gauge> = match gauge {
                GaugeArg::Unit => Box::new(ConstantGauge {
                    value: 1.0,
                    gamma: *gamma,
                }),
                GaugeArg::Mass => Box::new(MassGauge),
                GaugeArg::Log => Box::new(RadialGauge::inverse_log_power(1.0, *gamma)),
                GaugeArg::Density => Box::new(DensityGauge {
                    measure: realize_measure(&tree, side, 1, cfg.seed)?,
                    a: *a,
                }),
            };
            let content = content_mh_tree(&tree, side, g.as_ref())?;
            let frostman = frostman_tree(&tree, side, g.as_ref())?;
            let mut report = HashMap::new();
            report.insert("gauge", serde_json::json!(g.description()));
            report.insert("content", serde_json::json!(content.value));
            report.insert("cover_size", serde_json::json!(content.cover.len()));
            report.insert("frostman_total", serde_json::json!(frostman.total));
            let ordered: std::collections::BTreeMap<_, _> = report.into_iter().collect();
            Ok(Outcome::ok(
                vec![Output {
                    name: "content.json".into(),
                    contents: json(&ordered),
                }],
                format!(
                    "content/{}: M^h = {}, Frostman total = {}",
                    side.as_str(),
                    fmt(content.value),
                    fmt(frostman.total)
                ),
            ))
        }
        Command::CheckGauge {
            gauge,
            config,
            a,
            b,
            samples,
        } => {
            let seed = seed.unwrap_or(0);
            let report = match gauge {
                CheckArg::Lemtec1 => {
                    let radii: Vec<f64> = (0..=400)
                        .map(|i| {
                            if i == 0 {
                                0.0
                            } else {
                                2f64.powf(i as f64 / 20.0 - 0.0)
                            }
                        })
                        .collect();
                    let c = lemtec1_check(*a, *b, &radii)?;
                    return Ok(Outcome::ok(
                        vec![Output {
                            name: "lemtec1.json".into(),
                            contents: json(&serde_json::json!({"a": a, "b": b, "constant": c})),
                        }],
                        format!("lemtec1: C = {}", fmt(c)),
                    ));
                }
                CheckArg::Constant => {
                    let g = ConstantGauge {
                        value: 1.0,
                        gamma: 1.0,
                    };
                    gauge_report(&g, Point::ORIGIN, 1.0, *samples, seed, 1.0)?
                }
                CheckArg::InverseRadius => {
                    let g = RadialGauge::new("1/r", 1.0, |r| 1.0 / r);
                    gauge_report(&g, Point::ORIGIN, 1.0, *samples, seed, 1.0)?
                }
                CheckArg::Density => {
                    let path = config.as_ref().ok_or_else(|| {
                        Error::Argument("--config is required for the density gauge".into())
                    })?;
                    let cfg = load(path, Some(seed))?;
                    let tree = realized(&cfg)?;
                    let nu = realize_measure(&tree, Side::Source, 1, cfg.seed)?;
                    let g = DensityGauge { measure: nu, a: *a };
                    gauge_report(
                        &g,
                        Point::ORIGIN,
                        1.0,
                        *samples,
                        seed,
                        4.0 * 2f64.powf(1.0 + a),
                    )?
                }
            };
            let summary = format!(
                "check-gauge {}: C0 = {}, C0' = {}",
                report.gauge,
                report.c0.map_or("n/a".into(), fmt),
                report.c0_prime.map_or("n/a".into(), fmt)
            );
            let pass = report.pass;
            Ok(Outcome {
                outputs: vec![Output {
                    name: "doubling.json".into(),
                    contents: json(&report),
                }],
                summary,
                pass,
            })
        }
        Command::Verify {
            experiment,
            k,
            depths,
            p,
            q,
            beta,
            a,
            power,
        } => {
            let setup = RealizationSetup {
                seed: seed.unwrap_or(1),
                ..RealizationSetup::default()
            };
            let d = |default: RangeInclusive<usize>| depths.clone().unwrap_or(default);
            let report: ExperimentReport = match experiment {
                Experiment::Thm1 => verify_theorem1(*k, d(2..=6), *a, &setup)?,
                Experiment::Teocap => verify_teocap_a(*k, p.unwrap_or(2.0), d(2..=5), &setup)?,
                Experiment::Sharpness => sharpness_experiment(*k, q.unwrap_or(3.0), d(8..=64))?,
                Experiment::Ex1 => example1_gauge_test(*k, beta.unwrap_or(*k / (*k + 1.0)))?,
                Experiment::Ex2 => example2_experiment(*k, d(2..=6), *power, &setup)?,
                Experiment::Ex3 => example3_experiment(*k, d(0..=8), &setup)?,
                Experiment::Mainlemma => main_lemma_experiment(*k, d(2..=6), *a, &setup)?,
            };
            let mut outputs = Vec::new();
            if cli.format != Some(Format::Json) {
                outputs.push(Output {
                    name: format!("{}.csv", report.id),
                    contents: report.to_csv(),
                });
            }
            if cli.format != Some(Format::Csv) {
                outputs.push(Output {
                    name: format!("{}.json", report.id),
                    contents: report.to_json(),
                });
            }
            Ok(Outcome {
                outputs,
                summary: report.summary(),
                pass: report.passed(),
            })
        }
    }
}

fn gauge_report(
    g: &dyn Gauge,
    center: Point,
    spread: f64,
    samples: usize,
    seed: u64,
    threshold: f64,
) -> Result<crate::gauges::DoublingReport> {
    let pairs = sample_g1_pairs(center, spread, -10.0, 2.0, samples, seed);
    let g1 = check_g1(g, &pairs, threshold)?;
    let balls: Vec<Ball> = pairs.iter().map(|(b, _)| b.clone()).collect();
    let g2 = check_g2(g, &balls, 4.0 * spread, 64, f64::INFINITY)?;
    Ok(crate::gauges::DoublingReport {
        c0_prime: g2.c0_prime,
        balls: g2.balls,
        truncated_at: g2.truncated_at,
        ..g1
    })
}

fn write_outputs(dir: &Path, outputs: &[Output]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for o in outputs {
        fs::write(dir.join(&o.name), &o.contents)?;
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli).and_then(|outcome| {
        write_outputs(&out_dir(&cli), &outcome.outputs)?;
        Ok(outcome)
    }) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            if outcome.pass {
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
