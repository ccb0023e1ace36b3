use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cfk_core::infinite::{infinite_ball, root_counts, srw_infinite, WalkStats};
use cfk_core::sampler::stream_rng;
use cfk_core::stats::{self, task_seed, Table};
use cfk_core::{
    psi, psi_inverse, ExperimentConfig, InfiniteWordSource, ModelParams, OutputFormat, StatReport,
};
use cfk_core::{SubgraphRootedMap, Word};

#[derive(Parser, Debug)]
#[command(
    name = "cfk",
    version,
    about = "Critical FK planar maps via the hamburger-cheeseburger bijection"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Loop weight q in [0, inf]; "inf" is accepted.
    #[arg(long, global = true, conflicts_with = "p")]
    q: Option<f64>,
    /// Proportion p in [0, 1] of flexible orders. Defaults to 1/3 (q = 1).
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Half the word length.
    #[arg(long, global = true, default_value_t = 10)]
    n: usize,
    #[arg(long, global = true, default_value_t = 1)]
    radius: usize,
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory. Reports go to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Give up after this many rejected words per sample.
    #[arg(long, global = true)]
    retry_cap: Option<u64>,
    /// Largest window, in letters, read from an infinite word.
    #[arg(long, global = true, default_value_t = cfk_core::infinite::DEFAULT_WINDOW_CAP)]
    window_cap: usize,
    /// Interval half-width, in standard errors, for every pass/fail check.
    #[arg(long, global = true, default_value_t = 3.0)]
    sigmas: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample words of the conditioned law and their maps.
    Sample,
    /// Map of a word file (`offset=<k>` line, then the letters).
    Encode { input: PathBuf },
    /// Word of a map file.
    Decode { input: PathBuf },
    /// Exhaustive and sampled checks of the bijection and the limit.
    Verify {
        /// Run a single block.
        #[arg(long)]
        only: Option<String>,
        /// Map files to round-trip in the `files` block.
        #[arg(long, num_args = 1..)]
        maps: Vec<PathBuf>,
        /// Seeds for the certification block.
        #[arg(long, default_value_t = 100)]
        walks: usize,
        /// Word size of the sampled checks.
        #[arg(long, default_value_t = 50)]
        mc_n: usize,
    },
    /// Total variation between finite window laws and the product law.
    LocalConvergence {
        #[arg(long, value_delimiter = ',', default_value = "4,16,64")]
        ladder: Vec<usize>,
    },
    /// Certified ball around the root of the infinite map.
    LimitBall,
    /// Simple random walk on the infinite map.
    Walk {
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Root degree counts of independent infinite maps.
    Rootdeg,
    /// Pending-edge frequency, root-degree law and tail diagnostics.
    LimitStats {
        #[arg(long, default_value_t = 100)]
        walks: usize,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0,0.3333333333333333,0.5,0.6666666666666666"
        )]
        p_ladder: Vec<f64>,
    },
}

fn params(g: &Global) -> Result<ModelParams> {
    Ok(match (g.q, g.p) {
        (Some(q), _) => ModelParams::from_q(q)?,
        (None, Some(p)) => ModelParams::from_p(p)?,
        (None, None) => ModelParams::from_q(1.0)?,
    })
}

fn config(verb: &str, g: &Global) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(verb, params(g)?);
    cfg.n = g.n;
    cfg.radius = g.radius;
    cfg.samples = g.samples;
    cfg.seed = g.seed;
    cfg.out = g.out.clone();
    cfg.format = match g.format {
        Format::Csv => OutputFormat::Csv,
        Format::Structured => OutputFormat::Structured,
    };
    cfg.retry_cap = g.retry_cap;
    cfg.window_cap = g.window_cap;
    cfg.tolerances.sigmas = g.sigmas;
    Ok(cfg)
}

/// Writes `files` under the output directory, or prints them in order.
fn emit(cfg: &ExperimentConfig, files: &[(String, String)]) -> Result<()> {
    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for (name, body) in files {
                let path = dir.join(name);
                fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            }
            fs::write(dir.join("config.json"), cfg.dump() + "\n")?;
        }
        None => {
            for (i, (name, body)) in files.iter().enumerate() {
                if files.len() > 1 {
                    if i > 0 {
                        println!();
                    }
                    println!("# {name}");
                }
                print!("{body}");
            }
        }
    }
    Ok(())
}

fn report_files(cfg: &ExperimentConfig, report: &StatReport) -> Vec<(String, String)> {
    match cfg.format {
        OutputFormat::Structured => vec![("report.json".into(), report.to_json() + "\n")],
        OutputFormat::Csv => {
            let mut files = vec![("summary.csv".to_string(), report.summary_csv())];
            files.extend(
                report
                    .tables
                    .iter()
                    .map(|t| (format!("{}.csv", t.name), t.to_csv())),
            );
            files
        }
    }
}

/// Emits a report; failed checks go to stderr with the config as a reproducer.
fn finish(cfg: &ExperimentConfig, report: &StatReport) -> Result<bool> {
    emit(cfg, &report_files(cfg, report))?;
    let pass = report.all_pass();
    if !pass {
        for c in report.failures() {
            eprintln!("FAIL {}: {}", c.name, c.detail);
        }
        eprintln!("reproduce with config {}", cfg.dump());
    }
    Ok(pass)
}

fn read_map(path: &Path) -> Result<SubgraphRootedMap> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SubgraphRootedMap::from_json(&text).with_context(|| format!("loading map {}", path.display()))
}

fn cmd_sample(cfg: &ExperimentConfig) -> Result<bool> {
    if cfg.format == OutputFormat::Structured && cfg.out.is_none() {
        bail!("structured sample output needs --out");
    }
    let records = stats::sample_records(cfg)?;
    let table = stats::sample_table(&records);
    let mut files = vec![("samples.csv".to_string(), table.to_csv())];
    if cfg.format == OutputFormat::Structured {
        for r in &records {
            files.push((format!("map_{:05}.json", r.index), r.map.to_json() + "\n"));
            files.push((format!("word_{:05}.txt", r.index), r.word.to_text()));
        }
    }
    emit(cfg, &files)?;
    let bad: Vec<usize> = records
        .iter()
        .filter(|r| !r.loops_match())
        .map(|r| r.index)
        .collect();
    if !bad.is_empty() {
        eprintln!("loop identity fails on samples {bad:?}; config {}", cfg.dump());
    }
    Ok(bad.is_empty())
}

fn cmd_encode(cfg: &ExperimentConfig, input: &Path) -> Result<bool> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let word = Word::from_text(&text)?;
    let map = psi(&word)?;
    emit(cfg, &[("map.json".into(), map.to_json() + "\n")])?;
    Ok(true)
}

fn cmd_decode(cfg: &ExperimentConfig, input: &Path) -> Result<bool> {
    let word = psi_inverse(&read_map(input)?)?;
    emit(cfg, &[("word.txt".into(), word.to_text())])?;
    Ok(true)
}

fn cmd_limit_ball(cfg: &ExperimentConfig) -> Result<bool> {
    let mut src = InfiniteWordSource::new(cfg.params, cfg.seed);
    let cert = infinite_ball(&mut src, cfg.radius, cfg.window_cap)?;
    let m = &cert.ball.rooted.map;
    let mut t = Table::new(
        "ball",
        &[
            "seed",
            "radius",
            "window_used",
            "root_degree",
            "vertices",
            "edges",
            "certified",
        ],
    );
    t.push(vec![
        cfg.seed.to_string(),
        cfg.radius.to_string(),
        (2 * cert.half_width).to_string(),
        cert.root_degree.to_string(),
        m.num_vertices().to_string(),
        m.num_edges().to_string(),
        cert.certified.to_string(),
    ]);
    let files = match cfg.format {
        OutputFormat::Csv => vec![("ball.csv".to_string(), t.to_csv())],
        OutputFormat::Structured => vec![
            ("ball.json".to_string(), cert.ball.rooted.to_json() + "\n"),
            (
                "certificate.json".to_string(),
                serde_json::to_string_pretty(&json!({
                    "seed": cfg.seed,
                    "radius": cfg.radius,
                    "half_width": cert.half_width,
                    "root_degree": cert.root_degree,
                    "certified": cert.certified,
                    "witnesses": cert.witnesses,
                }))? + "\n",
            ),
        ],
    };
    emit(cfg, &files)?;
    Ok(cert.certified)
}

fn cmd_walk(cfg: &ExperimentConfig, steps: usize) -> Result<bool> {
    let mut src = InfiniteWordSource::new(cfg.params, cfg.seed);
    let mut rng = stream_rng(cfg.seed, stats::WALK_STREAM);
    let w: WalkStats = srw_infinite(&mut src, steps, &mut rng, cfg.window_cap);
    let mut t = Table::new(
        "walk",
        &[
            "seed",
            "steps",
            "pending",
            "pending_frequency",
            "root_returns",
            "window_used",
            "truncated",
        ],
    );
    t.push(vec![
        cfg.seed.to_string(),
        w.steps().to_string(),
        w.pending.to_string(),
        w.pending_frequency().to_string(),
        w.root_returns.to_string(),
        (2 * w.half_width).to_string(),
        w.truncated.to_string(),
    ]);
    let files = match cfg.format {
        OutputFormat::Csv => vec![("walk.csv".to_string(), t.to_csv())],
        OutputFormat::Structured => vec![(
            "walk.json".to_string(),
            serde_json::to_string_pretty(&json!({
                "seed": cfg.seed,
                "path": w.path,
                "pending": w.pending,
                "root_returns": w.root_returns,
                "half_width": w.half_width,
                "truncated": w.truncated,
            }))? + "\n",
        )],
    };
    emit(cfg, &files)?;
    if w.truncated {
        eprintln!("walk stopped after {} steps at the window cap", w.steps());
    }
    Ok(!w.truncated)
}

fn cmd_rootdeg(cfg: &ExperimentConfig) -> Result<bool> {
    let mut t = Table::new(
        "rootdeg",
        &[
            "index",
            "seed",
            "n0",
            "n0_plus",
            "i0",
            "j0",
            "window_used",
            "capped",
        ],
    );
    for i in 0..cfg.samples {
        let s = task_seed(cfg.seed, i as u64);
        let mut src = InfiniteWordSource::new(cfg.params, s);
        let row = match root_counts(&mut src, cfg.window_cap) {
            Ok(r) => vec![
                r.n0.to_string(),
                r.n0_plus.to_string(),
                r.i0.to_string(),
                r.j0.to_string(),
                (2 * r.half_width).to_string(),
                "false".into(),
            ],
            Err(_) => {
                let mut row = vec![String::new(); 6];
                row[4] = cfg.window_cap.to_string();
                row[5] = "true".into();
                row
            }
        };
        t.push([vec![i.to_string(), s.to_string()], row].concat());
    }
    let files = match cfg.format {
        OutputFormat::Csv => vec![("rootdeg.csv".to_string(), t.to_csv())],
        OutputFormat::Structured => vec![(
            "rootdeg.json".to_string(),
            serde_json::to_string_pretty(&t)? + "\n",
        )],
    };
    emit(cfg, &files)?;
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    match cli.command {
        Command::Sample => cmd_sample(&config("sample", g)?),
        Command::Encode { input } => cmd_encode(&config("encode", g)?, &input),
        Command::Decode { input } => cmd_decode(&config("decode", g)?, &input),
        Command::Verify {
            only,
            maps,
            walks,
            mc_n,
        } => {
            let mut cfg = config("verify", g)?;
            cfg.walks = walks;
            cfg.mc_n = mc_n;
            let mut loaded = Vec::new();
            let mut unreadable = StatReport::new("files");
            for path in &maps {
                match read_map(path) {
                    Ok(m) => loaded.push((path.display().to_string(), m)),
                    Err(e) => unreadable.check(
                        format!("map file {} loads", path.display()),
                        false,
                        format!("{e:#}"),
                    ),
                }
            }
            let mut report = stats::verify(&cfg, only.as_deref(), &loaded)?;
            report.merge(unreadable);
            finish(&cfg, &report)
        }
        Command::LocalConvergence { ladder } => {
            let mut cfg = config("local-convergence", g)?;
            cfg.n_ladder = ladder;
            finish(&cfg, &stats::local_convergence(&cfg)?)
        }
        Command::LimitBall => cmd_limit_ball(&config("limit-ball", g)?),
        Command::Walk { steps } => {
            let mut cfg = config("walk", g)?;
            cfg.steps = steps;
            cmd_walk(&cfg, steps)
        }
        Command::Rootdeg => cmd_rootdeg(&config("rootdeg", g)?),
        Command::LimitStats {
            walks,
            steps,
            p_ladder,
        } => {
            let mut cfg = config("limit-stats", g)?;
            cfg.walks = walks;
            cfg.steps = steps;
            cfg.p_ladder = p_ladder;
            finish(&cfg, &stats::limit_stats(&cfg)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
