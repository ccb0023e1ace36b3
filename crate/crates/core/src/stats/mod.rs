//! Experiment configuration, statistical reports and the estimators behind
//! the command-line experiments.

mod exact;
mod experiments;

pub use exact::{exact_weights, loop_weight_law, pushforward_law, ExactLaw, ExactQ};
pub use experiments::{
    certification_run, limit_stats, local_convergence, pending_run, root_degree_run, sample_records,
    sample_table, task_seed, verify, CertificationRun, PendingRun, RootDegreeRun, SampleRecord,
    VERIFY_BLOCKS, WALK_STREAM,
};

use std::path::PathBuf;

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::infinite::DEFAULT_WINDOW_CAP;
use crate::sampler::ModelParams;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Structured,
}

/// Tolerances every pass/fail flag of a report is judged against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Half-width of reported intervals, in standard errors.
    pub sigmas: f64,
    /// Level below which a chi-square p-value rejects.
    pub chi2_level: f64,
    /// Survival level the root-degree tail has to fall below.
    pub tail_level: f64,
    /// Smallest count for a survival point to enter the tail-shape check.
    pub min_tail_count: u64,
    /// Smallest expected count for a chi-square cell.
    pub min_cell_expectation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            sigmas: 3.0,
            chi2_level: 0.01,
            tail_level: (-1.0f64).exp(),
            min_tail_count: 200,
            min_cell_expectation: 5.0,
        }
    }
}

/// Everything a run depends on. Equal configs give byte-identical output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub verb: String,
    pub params: ModelParams,
    /// Half the word length of finite samples; the exhaustive bound in
    /// `verify`.
    pub n: usize,
    /// Word sizes of a local-convergence run.
    pub n_ladder: Vec<usize>,
    /// Word size of the sampled checks in `verify`.
    pub mc_n: usize,
    pub radius: usize,
    pub samples: usize,
    /// Independent walks (and certification seeds).
    pub walks: usize,
    pub steps: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub retry_cap: Option<u64>,
    pub window_cap: usize,
    /// Values of `p` for the root-degree table.
    pub p_ladder: Vec<f64>,
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    pub fn new(verb: impl Into<String>, params: ModelParams) -> Self {
        ExperimentConfig {
            verb: verb.into(),
            params,
            n: 3,
            n_ladder: vec![4, 16, 64],
            mc_n: 50,
            radius: 1,
            samples: 1000,
            walks: 100,
            steps: 1000,
            seed: 0,
            out: None,
            format: OutputFormat::Csv,
            retry_cap: None,
            window_cap: DEFAULT_WINDOW_CAP,
            p_ladder: vec![0.0, 1.0 / 3.0, 0.5, 2.0 / 3.0],
            tolerances: Tolerances::default(),
        }
    }

    /// JSON dump, enough to reproduce the run.
    pub fn dump(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// A scalar estimate with its standard error, sample count and interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    pub se: f64,
    pub n: u64,
    pub lo: f64,
    pub hi: f64,
    pub target: Option<f64>,
}

impl Estimate {
    pub fn new(name: impl Into<String>, value: f64, se: f64, n: u64, sigmas: f64) -> Self {
        Estimate {
            name: name.into(),
            value,
            se,
            n,
            lo: value - sigmas * se,
            hi: value + sigmas * se,
            target: None,
        }
    }

    /// Frequency of `hits` among `n` independent trials.
    pub fn proportion(name: impl Into<String>, hits: u64, n: u64, sigmas: f64) -> Self {
        let f = hits as f64 / n.max(1) as f64;
        let se = (f * (1.0 - f) / n.max(1) as f64).sqrt();
        Estimate::new(name, f, se, n, sigmas)
    }

    pub fn mean(name: impl Into<String>, xs: &[f64], sigmas: f64) -> Self {
        let n = xs.len();
        let m = xs.iter().sum::<f64>() / n.max(1) as f64;
        let var = if n > 1 {
            xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Estimate::new(name, m, (var / n.max(1) as f64).sqrt(), n as u64, sigmas)
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target = Some(target);
        self
    }

    /// Whether the interval contains the target, if there is one.
    pub fn covers_target(&self) -> Option<bool> {
        self.target.map(|t| self.lo <= t && t <= self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatReport {
    pub name: String,
    pub estimates: Vec<Estimate>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl StatReport {
    pub fn new(name: impl Into<String>) -> Self {
        StatReport {
            name: name.into(),
            estimates: Vec::new(),
            tables: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    /// Adds an estimate, and a check when it carries a target.
    pub fn estimate(&mut self, e: Estimate) {
        if let Some(pass) = e.covers_target() {
            let detail = format!(
                "{} in [{}, {}] vs target {}",
                e.value,
                e.lo,
                e.hi,
                e.target.unwrap_or(f64::NAN)
            );
            self.check(format!("{} covers target", e.name), pass, detail);
        }
        self.estimates.push(e);
    }

    pub fn merge(&mut self, other: StatReport) {
        self.estimates.extend(other.estimates);
        self.tables.extend(other.tables);
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Estimates and checks as one CSV; tables go through [`Table::to_csv`].
    pub fn summary_csv(&self) -> String {
        let mut t = Table::new(
            "summary",
            &[
                "kind", "name", "value", "se", "n", "lo", "hi", "target", "pass", "detail",
            ],
        );
        for e in &self.estimates {
            t.push(vec![
                "estimate".into(),
                e.name.clone(),
                e.value.to_string(),
                e.se.to_string(),
                e.n.to_string(),
                e.lo.to_string(),
                e.hi.to_string(),
                e.target.map(|x| x.to_string()).unwrap_or_default(),
                e.covers_target().map(|b| b.to_string()).unwrap_or_default(),
                String::new(),
            ]);
        }
        for c in &self.checks {
            let mut row = vec![String::new(); 10];
            row[0] = "check".into();
            row[1] = c.name.clone();
            row[8] = c.pass.to_string();
            row[9] = c.detail.clone();
            t.push(row);
        }
        t.to_csv()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Index of the window `w_[-radius, radius)` among the `5^{2 radius}`
/// letter strings, or `None` when the word does not cover the window.
fn window_cell(w: &Word, radius: usize) -> Option<usize> {
    let r = radius as i64;
    let mut cell = 0;
    for z in (-r..r).rev() {
        cell = cell * 5 + w.get(z)?.index();
    }
    Some(cell)
}

/// Total variation between the empirical law of the radius-`radius` window
/// of `words` and the i.i.d. product law. Words not covering the window
/// count as mass off the support of the product law. The standard error is
/// the delta-method one.
pub fn window_tv(words: &[Word], params: &ModelParams, radius: usize, sigmas: f64) -> Result<Estimate> {
    if radius > 3 {
        return Err(Error::Precondition(format!("window radius {radius} exceeds 3")));
    }
    let name = format!("tv_r{radius}");
    let total = words.len() as u64;
    if total == 0 {
        return Err(Error::Precondition("no samples".into()));
    }
    let cells = 5usize.pow(2 * radius as u32);
    let mut counts = vec![0u64; cells];
    let mut off = 0u64;
    for w in words {
        match window_cell(w, radius) {
            Some(c) => counts[c] += 1,
            None => off += 1,
        }
    }
    let weights = params.weights();
    let nf = total as f64;
    let (mut tv, mut g_mean, mut g_sq) = (0.0, 0.0, 0.0);
    for (c, &k) in counts.iter().enumerate() {
        let mut pi = 1.0;
        let mut x = c;
        for _ in 0..2 * radius {
            pi *= weights[x % 5];
            x /= 5;
        }
        let f = k as f64 / nf;
        tv += (f - pi).abs();
        let g = if f > pi {
            0.5
        } else if f < pi {
            -0.5
        } else {
            0.0
        };
        g_mean += g * f;
        g_sq += g * g * f;
    }
    let f_off = off as f64 / nf;
    tv += f_off;
    g_mean += 0.5 * f_off;
    g_sq += 0.25 * f_off;
    let se = ((g_sq - g_mean * g_mean).max(0.0) / nf).sqrt();
    Ok(Estimate::new(name, tv / 2.0, se, total, sigmas))
}

/// Frequency of flexible orders over the letters of the radius-`radius`
/// window of each word.
pub fn window_flexible_frequency(words: &[Word], radius: usize) -> f64 {
    let r = radius as i64;
    let (mut f, mut seen) = (0u64, 0u64);
    for w in words {
        for z in -r..r {
            if let Some(l) = w.get(z) {
                seen += 1;
                f += (l == Letter::Flexible) as u64;
            }
        }
    }
    f as f64 / seen.max(1) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Chi2Outcome {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Values of `m` that entered the test.
    pub used: Vec<usize>,
}

/// Chi-square test that, given `N = m`, `N+` is uniform on `1..=m`, pooled
/// over `2 <= m <= max_m`. Values of `m` whose cells would expect fewer
/// than `min_expectation` counts are left out.
pub fn chi2_conditional_uniform(pairs: &[(usize, usize)], max_m: usize, min_expectation: f64) -> Chi2Outcome {
    let mut statistic = 0.0;
    let mut dof = 0;
    let mut used = Vec::new();
    for m in 2..=max_m {
        let mut counts = vec![0u64; m];
        for &(n0, plus) in pairs {
            if n0 == m && (1..=m).contains(&plus) {
                counts[plus - 1] += 1;
            }
        }
        let total: u64 = counts.iter().sum();
        let expect = total as f64 / m as f64;
        if expect < min_expectation {
            continue;
        }
        statistic += counts
            .iter()
            .map(|&o| (o as f64 - expect).powi(2) / expect)
            .sum::<f64>();
        dof += m - 1;
        used.push(m);
    }
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).expect("positive dof").sf(statistic)
    };
    Chi2Outcome {
        statistic,
        dof,
        p_value,
        used,
    }
}

/// `(x, #{values >= x})` for `x = 1..=max`.
pub fn survival_counts(values: &[usize]) -> Vec<(usize, u64)> {
    let max = values.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0u64; max + 2];
    for &v in values {
        hist[v] += 1;
    }
    let mut out = Vec::with_capacity(max);
    let mut above = 0;
    for x in (1..=max).rev() {
        above += hist[x];
        out.push((x, above));
    }
    out.reverse();
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailShape {
    /// Largest second difference of `log S`, in standard errors.
    pub max_convexity: f64,
    pub concave_or_linear: bool,
    /// First `x` with `S(x) < level * S(1)`.
    pub drop_below: Option<usize>,
    /// Least-squares slope of `log S` over the well-sampled points.
    pub slope: f64,
    /// Number of survival points used.
    pub points: usize,
}

/// Shape diagnostics of the empirical log-survival `log S(x)` over the
/// points with at least `min_count` values at or above `x`.
pub fn tail_shape(values: &[usize], tol: &Tolerances) -> TailShape {
    let total = values.len() as f64;
    let surv = survival_counts(values);
    let s1 = surv.first().map_or(0.0, |&(_, c)| c as f64 / total);
    let drop_below = surv
        .iter()
        .find(|&&(_, c)| (c as f64 / total) < tol.tail_level * s1)
        .map(|&(x, _)| x);
    let pts: Vec<(f64, f64, f64)> = surv
        .iter()
        .filter(|&&(_, c)| c >= tol.min_tail_count)
        .map(|&(x, c)| {
            let s = c as f64 / total;
            // delta method for log of a proportion
            (x as f64, s.ln(), ((1.0 - s) / (total * s)).max(0.0))
        })
        .collect();
    let mut max_convexity = f64::NEG_INFINITY;
    for t in pts.windows(3) {
        let d2 = t[0].1 - 2.0 * t[1].1 + t[2].1;
        let se = (t[0].2 + 4.0 * t[1].2 + t[2].2).sqrt();
        let z = if se > 0.0 {
            d2 / se
        } else if d2 > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        max_convexity = max_convexity.max(z);
    }
    if pts.len() < 3 {
        max_convexity = 0.0;
    }
    let slope = if pts.len() >= 2 {
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        sxy / sxx
    } else {
        f64::NAN
    };
    TailShape {
        max_convexity,
        concave_or_linear: max_convexity <= tol.sigmas,
        drop_below,
        slope,
        points: pts.len(),
    }
}
