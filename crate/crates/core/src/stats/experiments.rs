//! Runners behind the command-line verbs. Every random choice is drawn
//! from a stream addressed by the run seed and a task index.

use std::collections::HashSet;

use rand::RngCore;
use serde::Serialize;

use super::exact::{loop_weight_law, pushforward_law, ExactQ};
use super::{
    chi2_conditional_uniform, survival_counts, tail_shape, window_flexible_frequency, window_tv, Estimate,
    ExperimentConfig, StatReport, Table,
};
use crate::bijection::{loop_tree_decode, loop_tree_encode, psi, psi_inverse, PlaneTree};
use crate::error::{Error, Result};
use crate::infinite::{ball_in_window, infinite_ball, root_counts, srw_infinite, ResolvedWindow};
use crate::map::{
    ball, enumerate_maps, enumerate_rooted_maps, loop_count_euler, loop_count_trace, CanonicalForm,
};
use crate::map::{SubgraphRootedMap, MAX_MAP_ENUMERATION};
use crate::sampler::{enumerate_wn, sample_many, stream_rng, InfiniteWordSource, ModelParams};
use crate::word::{dual_word, Letter, Word};

/// Streams at or above this are reserved for per-task seeds.
const TASK_STREAM: u64 = 1 << 62;
/// Stream of a walk's step choices, next to the word streams of its seed.
pub const WALK_STREAM: u64 = 3;

pub const VERIFY_BLOCKS: [&str; 7] = [
    "bijection",
    "loops",
    "duality",
    "transport",
    "loop-tree",
    "certification",
    "files",
];

/// Seed of task `task` in a run seeded by `seed`.
pub fn task_seed(seed: u64, task: u64) -> u64 {
    stream_rng(seed, TASK_STREAM | task).next_u64()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub index: usize,
    pub word: Word,
    pub map: SubgraphRootedMap,
    pub loops: i64,
    pub flexible: usize,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl SampleRecord {
    pub fn loops_match(&self) -> bool {
        self.loops == 1 + self.flexible as i64
    }
}

pub fn sample_records(cfg: &ExperimentConfig) -> Result<Vec<SampleRecord>> {
    let words = sample_many(&cfg.params, cfg.n, cfg.samples, cfg.seed, cfg.retry_cap)?;
    words
        .into_iter()
        .enumerate()
        .map(|(index, word)| {
            let map = psi(&word)?;
            let stats = map.validate()?;
            Ok(SampleRecord {
                index,
                loops: loop_count_trace(&map),
                flexible: word.count(Letter::Flexible),
                vertices: stats.vertices,
                edges: stats.edges,
                faces: stats.faces,
                word,
                map,
            })
        })
        .collect()
}

pub fn sample_table(records: &[SampleRecord]) -> Table {
    let mut t = Table::new(
        "samples",
        &[
            "index", "offset", "word", "loops", "flexible", "vertices", "edges", "faces", "loops_ok",
        ],
    );
    for r in records {
        t.push(vec![
            r.index.to_string(),
            r.word.offset().to_string(),
            r.word.to_string(),
            r.loops.to_string(),
            r.flexible.to_string(),
            r.vertices.to_string(),
            r.edges.to_string(),
            r.faces.to_string(),
            r.loops_match().to_string(),
        ]);
    }
    t
}

pub fn local_convergence(cfg: &ExperimentConfig) -> Result<StatReport> {
    let sig = cfg.tolerances.sigmas;
    let mut report = StatReport::new("local-convergence");
    let mut table = Table::new(
        "tv",
        &["n", "samples", "tv", "se", "lo", "hi", "flexible_frequency"],
    );
    let mut tvs: Vec<(usize, Estimate)> = Vec::new();
    for &n in &cfg.n_ladder {
        let words = sample_many(
            &cfg.params,
            n,
            cfg.samples,
            task_seed(cfg.seed, n as u64),
            cfg.retry_cap,
        )?;
        let mut e = window_tv(&words, &cfg.params, cfg.radius, sig)?;
        e.name = format!("tv_r{}_n{}", cfg.radius, n);
        let ff = window_flexible_frequency(&words, cfg.radius);
        if cfg.params.p == 0.0 {
            report.check(
                format!("no flexible orders at n={n}"),
                ff == 0.0,
                format!("frequency {ff}"),
            );
        }
        table.push(vec![
            n.to_string(),
            e.n.to_string(),
            e.value.to_string(),
            e.se.to_string(),
            e.lo.to_string(),
            e.hi.to_string(),
            ff.to_string(),
        ]);
        report.estimate(e.clone());
        tvs.push((n, e));
    }
    if cfg.radius == 0 {
        let pass = tvs.iter().all(|(_, e)| e.value == 0.0);
        report.check("tv vanishes on the empty window", pass, String::new());
    } else {
        for pair in tvs.windows(2) {
            let ((n1, a), (n2, b)) = (&pair[0], &pair[1]);
            let gap = a.value - b.value;
            let se = a.se.hypot(b.se);
            report.check(
                format!("tv decreases from n={n1} to n={n2}"),
                gap > sig * se,
                format!("gap {gap} vs {sig} x {se}"),
            );
        }
    }
    report.tables.push(table);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PendingRun {
    pub estimate: Estimate,
    pub walks: usize,
    pub steps: u64,
    /// Walks stopped early by the window cap; their steps still count.
    pub truncated: usize,
    pub max_half_width: usize,
}

/// Pending-edge frequency along independent walks on the infinite map, as a
/// ratio estimate with the spread across walks as its standard error.
pub fn pending_run(
    params: &ModelParams,
    walks: usize,
    steps: usize,
    seed: u64,
    window_cap: usize,
    sigmas: f64,
) -> PendingRun {
    let mut per_walk = Vec::with_capacity(walks);
    let (mut truncated, mut max_half_width) = (0, 0);
    for i in 0..walks {
        let s = task_seed(seed, i as u64);
        let mut src = InfiniteWordSource::new(*params, s);
        let mut rng = stream_rng(s, WALK_STREAM);
        let w = srw_infinite(&mut src, steps, &mut rng, window_cap);
        truncated += w.truncated as usize;
        max_half_width = max_half_width.max(w.half_width);
        per_walk.push((w.pending as f64, w.steps() as f64));
    }
    let total_steps: f64 = per_walk.iter().map(|x| x.1).sum();
    let f = per_walk.iter().map(|x| x.0).sum::<f64>() / total_steps.max(1.0);
    let se = if walks > 1 && total_steps > 0.0 {
        let ss: f64 = per_walk.iter().map(|&(p, s)| (p - f * s).powi(2)).sum();
        (ss * walks as f64 / (walks - 1) as f64).sqrt() / total_steps
    } else {
        f64::NAN
    };
    let estimate = Estimate::new(
        format!("pending_srw_p{}", params.p),
        f,
        se,
        total_steps as u64,
        sigmas,
    )
    .with_target((1.0 + params.p) / 16.0);
    PendingRun {
        estimate,
        walks,
        steps: total_steps as u64,
        truncated,
        max_half_width,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootDegreeRun {
    /// `(N0, N0+)` per resolved sample.
    pub pairs: Vec<(usize, usize)>,
    /// Samples whose root counts needed more than the window cap.
    pub capped: usize,
    pub max_half_width: usize,
}

impl RootDegreeRun {
    pub fn degrees(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.0).collect()
    }
}

pub fn root_degree_run(params: &ModelParams, samples: usize, seed: u64, window_cap: usize) -> RootDegreeRun {
    let mut run = RootDegreeRun {
        pairs: Vec::with_capacity(samples),
        capped: 0,
        max_half_width: 0,
    };
    for i in 0..samples {
        let mut src = InfiniteWordSource::new(*params, task_seed(seed, i as u64));
        match root_counts(&mut src, window_cap) {
            Ok(s) => {
                run.pairs.push((s.n0, s.n0_plus));
                run.max_half_width = run.max_half_width.max(s.half_width);
            }
            Err(_) => run.capped += 1,
        }
    }
    run
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationRun {
    pub seeds: usize,
    pub certified: usize,
    pub capped: usize,
    /// Seeds whose ball changed when the window was doubled.
    pub unstable: Vec<u64>,
    pub max_half_width: usize,
}

/// Certifies radius-`radius` balls for `seeds` sources and recomputes each
/// from a window twice as wide.
pub fn certification_run(
    params: &ModelParams,
    seeds: usize,
    radius: usize,
    seed: u64,
    window_cap: usize,
) -> Result<CertificationRun> {
    if params.p >= 1.0 {
        return Err(Error::Precondition("window certification needs p < 1".into()));
    }
    let mut run = CertificationRun {
        seeds,
        certified: 0,
        capped: 0,
        unstable: Vec::new(),
        max_half_width: 0,
    };
    for i in 0..seeds {
        let s = task_seed(seed, i as u64);
        let mut src = InfiniteWordSource::new(*params, s);
        let cert = match infinite_ball(&mut src, radius, window_cap) {
            Ok(c) => c,
            Err(Error::WindowCapExceeded { .. }) => {
                run.capped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        run.certified += 1;
        run.max_half_width = run.max_half_width.max(cert.half_width);
        let wide = ResolvedWindow::new(&src.extend_window(2 * cert.half_width));
        let again = ball_in_window(&wide, radius);
        let same = again.is_some_and(|b| {
            CanonicalForm::of_full(&b.ball.rooted) == CanonicalForm::of_full(&cert.ball.rooted)
        });
        if !same {
            run.unstable.push(s);
        }
    }
    Ok(run)
}

pub fn limit_stats(cfg: &ExperimentConfig) -> Result<StatReport> {
    let tol = &cfg.tolerances;
    let sig = tol.sigmas;
    let p = cfg.params.p;
    let mut report = StatReport::new("limit-stats");
    let mut telemetry = Table::new("telemetry", &["quantity", "value"]);

    let pending = pending_run(&cfg.params, cfg.walks, cfg.steps, cfg.seed, cfg.window_cap, sig);
    telemetry.push(vec!["walks_truncated".into(), pending.truncated.to_string()]);
    telemetry.push(vec![
        "walk_max_half_width".into(),
        pending.max_half_width.to_string(),
    ]);
    report.estimate(pending.estimate);

    let hits = (0..cfg.samples)
        .filter(|&i| {
            let src = InfiniteWordSource::new(cfg.params, task_seed(cfg.seed, i as u64));
            src.letter(-1) == Letter::Hamburger
                && matches!(src.letter(0), Letter::HamburgerOrder | Letter::Flexible)
        })
        .count();
    report.estimate(
        Estimate::proportion(format!("pending_iid_p{p}"), hits as u64, cfg.samples as u64, sig)
            .with_target((1.0 + p) / 16.0),
    );

    let run = root_degree_run(&cfg.params, cfg.samples, cfg.seed, cfg.window_cap);
    telemetry.push(vec!["root_counts_capped".into(), run.capped.to_string()]);
    telemetry.push(vec![
        "root_counts_max_half_width".into(),
        run.max_half_width.to_string(),
    ]);
    let degrees = run.degrees();
    let as_f: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
    report.estimate(Estimate::mean(format!("root_degree_mean_p{p}"), &as_f, sig));

    let chi2 = chi2_conditional_uniform(&run.pairs, 8, tol.min_cell_expectation);
    report.check(
        "N0+ uniform given N0",
        chi2.p_value >= tol.chi2_level,
        format!(
            "chi2 {} on {} dof, p-value {}, m in {:?}",
            chi2.statistic, chi2.dof, chi2.p_value, chi2.used
        ),
    );
    let shape = tail_shape(&degrees, tol);
    report.check(
        "log-survival of N0 is concave or linear",
        shape.concave_or_linear,
        format!(
            "largest convexity {} sigma over {} points",
            shape.max_convexity, shape.points
        ),
    );
    report.check(
        "survival of N0 drops below the tail level",
        shape.drop_below.is_some(),
        format!("first x {:?}", shape.drop_below),
    );

    let total = degrees.len() as f64;
    let mut surv = Table::new(
        "root_degree_survival",
        &["x", "count", "survival", "log_survival"],
    );
    for (x, c) in survival_counts(&degrees) {
        let s = c as f64 / total;
        surv.push(vec![
            x.to_string(),
            c.to_string(),
            s.to_string(),
            s.ln().to_string(),
        ]);
    }

    let mut ladder = Table::new(
        "root_degree_by_p",
        &["p", "samples", "capped", "mean", "se", "tail_slope", "drop_below"],
    );
    for &lp in &cfg.p_ladder {
        let params = ModelParams::from_p(lp)?;
        let run = root_degree_run(&params, cfg.samples, cfg.seed, cfg.window_cap);
        let xs: Vec<f64> = run.pairs.iter().map(|p| p.0 as f64).collect();
        let mean = Estimate::mean("mean", &xs, sig);
        let shape = tail_shape(&run.degrees(), tol);
        ladder.push(vec![
            lp.to_string(),
            run.pairs.len().to_string(),
            run.capped.to_string(),
            mean.value.to_string(),
            mean.se.to_string(),
            shape.slope.to_string(),
            shape.drop_below.map(|x| x.to_string()).unwrap_or_default(),
        ]);
    }
    report.tables.extend([telemetry, surv, ladder]);
    Ok(report)
}

fn catalan(n: usize) -> u64 {
    (0..n as u64).fold(1, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

fn exhaustive_words(n_max: usize) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.extend(enumerate_wn(n)?);
    }
    Ok(out)
}

fn verify_bijection(report: &mut StatReport, n_max: usize) -> Result<()> {
    for n in 1..=n_max {
        let words = enumerate_wn(n)?;
        let maps: HashSet<CanonicalForm> = enumerate_maps(n)?
            .iter()
            .map(CanonicalForm::of_doubly_rooted)
            .collect();
        report.check(
            format!("word and map counts agree at n={n}"),
            words.len() == maps.len(),
            format!("{} words, {} maps", words.len(), maps.len()),
        );
        let mut image = HashSet::new();
        let mut round_trip = 0;
        for w in &words {
            let m = psi(w)?;
            image.insert(CanonicalForm::of_doubly_rooted(&m));
            round_trip += (psi_inverse(&m).as_ref() == Ok(w)) as usize;
        }
        report.check(
            format!("psi is injective at n={n}"),
            image.len() == words.len(),
            String::new(),
        );
        report.check(format!("psi is onto at n={n}"), image == maps, String::new());
        report.check(
            format!("inverse round trip at n={n}"),
            round_trip == words.len(),
            format!("{round_trip} of {}", words.len()),
        );
    }
    Ok(())
}

fn verify_loops(report: &mut StatReport, cfg: &ExperimentConfig) -> Result<()> {
    let mut words = exhaustive_words(cfg.n.min(MAX_MAP_ENUMERATION - 1))?;
    if cfg.mc_n > 0 {
        words.extend(sample_many(
            &cfg.params,
            cfg.mc_n,
            cfg.samples,
            cfg.seed,
            cfg.retry_cap,
        )?);
    }
    let mut bad = Vec::new();
    for w in &words {
        let m = psi(w)?;
        let trace = loop_count_trace(&m);
        let euler = loop_count_euler(&m);
        if trace != euler || trace != 1 + w.count(Letter::Flexible) as i64 {
            bad.push(format!("{}@{}", w, w.offset()));
        }
    }
    report.check(
        "loops equal one plus flexible orders, trace equals Euler count",
        bad.is_empty(),
        format!(
            "{} words, failures {:?}",
            words.len(),
            bad.iter().take(5).collect::<Vec<_>>()
        ),
    );
    Ok(())
}

fn exact_qs() -> [(&'static str, ExactQ); 4] {
    [
        ("0", ExactQ::Zero),
        ("1", ExactQ::from_sqrt(1, 1)),
        ("4", ExactQ::from_sqrt(2, 1)),
        ("inf", ExactQ::Infinite),
    ]
}

fn verify_duality(report: &mut StatReport, n_max: usize) -> Result<()> {
    let n_max = n_max.min(2);
    let words = exhaustive_words(n_max)?;
    let commute = words
        .iter()
        .map(|w| Ok(CanonicalForm::of_full(&psi(&dual_word(w))?) == CanonicalForm::of_full(&psi(w)?.dual())))
        .collect::<Result<Vec<bool>>>()?;
    report.check(
        "psi commutes with duality",
        commute.iter().all(|&b| b),
        format!("{} words up to n={n_max}", words.len()),
    );
    for (label, q) in exact_qs() {
        for n in 1..=n_max {
            let law = pushforward_law(n, &q)?;
            let mut invariant = true;
            for w in enumerate_wn(n)? {
                let m = psi(&w)?;
                let a = law.get(&CanonicalForm::of_doubly_rooted(&m));
                let b = law.get(&CanonicalForm::of_doubly_rooted(&m.dual()));
                invariant &= a == b;
            }
            report.check(
                format!("law on n={n} is self-dual at q={label}"),
                invariant,
                String::new(),
            );
        }
    }
    Ok(())
}

fn verify_transport(report: &mut StatReport, n_max: usize) -> Result<()> {
    for (label, q) in [("1", ExactQ::from_sqrt(1, 1)), ("4", ExactQ::from_sqrt(2, 1))] {
        for n in 1..=n_max.min(2) {
            let pushed = pushforward_law(n, &q)?;
            let direct = loop_weight_law(n, &q)?;
            report.check(
                format!("pushed word law is the loop-weight law at n={n}, q={label}"),
                pushed == direct,
                format!("{} classes", direct.len()),
            );
        }
    }
    Ok(())
}

fn verify_loop_tree(report: &mut StatReport) -> Result<()> {
    for n in 0..=MAX_MAP_ENUMERATION {
        let trees = PlaneTree::all(n);
        let mut ok = true;
        for t in &trees {
            let sm = loop_tree_decode(t)?;
            ok &= loop_count_euler(&sm) == n as i64 + 1 && loop_tree_encode(&sm)? == *t;
        }
        let mut full = 0u64;
        for m in enumerate_rooted_maps(n)? {
            for mask in 0..1u32 << n {
                let g = (0..n).map(|i| mask >> i & 1 == 1).collect();
                full += (loop_count_euler(&SubgraphRootedMap::new(m.clone(), g)) == n as i64 + 1) as u64;
            }
        }
        let expect = catalan(n) << n;
        report.check(format!("loop-tree round trip at n={n}"), ok, String::new());
        report.check(
            format!("maximal-loop configurations at n={n}"),
            full == expect && trees.len() as u64 == expect,
            format!("{full} configurations, {} trees, expected {expect}", trees.len()),
        );
    }
    Ok(())
}

fn verify_certification(report: &mut StatReport, cfg: &ExperimentConfig) -> Result<()> {
    let params = if cfg.params.p < 1.0 {
        cfg.params
    } else {
        ModelParams::from_p(1.0 / 3.0)?
    };
    let radius = cfg.radius.max(1);
    let run = certification_run(&params, cfg.walks, radius, cfg.seed, cfg.window_cap)?;
    report.check(
        format!("certified balls of radius {radius} survive window doubling"),
        run.unstable.is_empty(),
        format!(
            "{} certified, {} capped, unstable seeds {:?}",
            run.certified, run.capped, run.unstable
        ),
    );
    let mut mismatches = Vec::new();
    let mut certified = 0;
    for w in exhaustive_words(cfg.n.min(MAX_MAP_ENUMERATION - 1))? {
        let rw = ResolvedWindow::new(&w);
        let image = psi(&w)?;
        for r in 0..=3 {
            if let Some(cert) = ball_in_window(&rw, r) {
                certified += 1;
                if CanonicalForm::of_full(&cert.ball.rooted)
                    != CanonicalForm::of_full(&ball(&image, r).rooted)
                {
                    mismatches.push(format!("{}@{} r={r}", w, w.offset()));
                }
            }
        }
    }
    report.check(
        "window balls of finite words match their image balls",
        mismatches.is_empty(),
        format!(
            "{certified} certified, mismatches {:?}",
            mismatches.iter().take(5).collect::<Vec<_>>()
        ),
    );
    Ok(())
}

fn verify_files(report: &mut StatReport, maps: &[(String, SubgraphRootedMap)]) -> Result<()> {
    for (name, sm) in maps {
        let outcome = sm
            .validate()
            .and_then(|_| psi_inverse(sm))
            .and_then(|w| psi(&w))
            .map(|back| CanonicalForm::of_doubly_rooted(&back) == CanonicalForm::of_doubly_rooted(sm));
        let (pass, detail) = match outcome {
            Ok(true) => (true, String::new()),
            Ok(false) => (false, "round trip changed the map".to_string()),
            Err(e) => (false, e.to_string()),
        };
        report.check(format!("map file {name} decodes and re-encodes"), pass, detail);
    }
    Ok(())
}

/// Runs the verification blocks, or only `only`. Exhaustive checks go up to
/// `cfg.n` edges (at most 3); `maps` are named map files for the `files`
/// block.
pub fn verify(
    cfg: &ExperimentConfig,
    only: Option<&str>,
    maps: &[(String, SubgraphRootedMap)],
) -> Result<StatReport> {
    if let Some(o) = only {
        if !VERIFY_BLOCKS.contains(&o) {
            return Err(Error::Precondition(format!(
                "unknown block {o:?}, expected one of {VERIFY_BLOCKS:?}"
            )));
        }
    }
    let run = |block: &str| only.is_none_or(|o| o == block);
    let n_max = cfg.n.min(MAX_MAP_ENUMERATION - 1);
    let mut report = StatReport::new("verify");
    let mut blocks = Table::new("blocks", &["block", "checks"]);
    for block in VERIFY_BLOCKS.into_iter().filter(|b| run(b)) {
        let before = report.checks.len();
        match block {
            "bijection" => verify_bijection(&mut report, n_max)?,
            "loops" => verify_loops(&mut report, cfg)?,
            "duality" => verify_duality(&mut report, n_max)?,
            "transport" => verify_transport(&mut report, n_max)?,
            "loop-tree" => verify_loop_tree(&mut report)?,
            "certification" => verify_certification(&mut report, cfg)?,
            "files" => verify_files(&mut report, maps)?,
            _ => unreachable!(),
        }
        blocks.push(vec![
            block.to_string(),
            (report.checks.len() - before).to_string(),
        ]);
    }
    report.tables.push(blocks);
    Ok(report)
}
