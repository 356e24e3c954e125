//! Experiment pipelines: in-degree sweeps on preferential-attachment networks
//! and rewiring sweeps on ring networks, for both the Gaussian VAR dynamics
//! (analytic TE) and random Boolean dynamics (estimated TE).
//!
//! Every run is a pure function of its [`ExperimentConfig`]. Realizations execute
//! on a rayon pool (capped by `TE_MOTIFS_THREADS`) and are reduced in seed
//! order, so serial and parallel runs write identical files.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::dynsim::{gen_rbn, simulate_rbn, simulate_var, DEFAULT_BURN_IN};
use crate::error::{Error, Result};
use crate::estim::{te_discrete_plugin, GaussianEmbedding, TERecord, TeMethod};
use crate::lincov::{te_exact_from_cov, EmbeddingSpec, StationaryCovariance, DEFAULT_MAX_TERMS, DEFAULT_SERIES_TOL};
use crate::motifte::motif_terms;
use crate::netgen::{degree_profile, gen_ba, gen_ws_ring, WeightedAdjacency};
use crate::rng::derive_seed;

pub const THREADS_ENV: &str = "TE_MOTIFS_THREADS";
/// Attempts per realization before a failing generator is reported.
const MAX_RESAMPLES: u64 = 100;

pub const BA_GRID_HEADER: &str = "d_in_src,d_in_tgt,mean_te,count";
pub const WS_CURVE_HEADER: &str = "gamma,seed,method,mean_te";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    BaIndegree,
    WsRewiring,
    RbnIndegree,
    RbnRewiring,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 4] = [
        ExperimentId::BaIndegree,
        ExperimentId::WsRewiring,
        ExperimentId::RbnIndegree,
        ExperimentId::RbnRewiring,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::BaIndegree => "ba-indegree",
            ExperimentId::WsRewiring => "ws-rewiring",
            ExperimentId::RbnIndegree => "rbn-indegree",
            ExperimentId::RbnRewiring => "rbn-rewiring",
        }
    }

    fn is_rbn(self) -> bool {
        matches!(self, ExperimentId::RbnIndegree | ExperimentId::RbnRewiring)
    }

    fn is_ring(self) -> bool {
        matches!(self, ExperimentId::WsRewiring | ExperimentId::RbnRewiring)
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::invalid("experiment", format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Desk,
    Paper,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Preset::Desk),
            "paper" => Ok(Preset::Paper),
            other => Err(Error::invalid("preset", format!("unknown preset `{other}`"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Desk => "desk",
            Preset::Paper => "paper",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub preset: Preset,
    pub n: usize,
    pub weight: f64,
    pub k: usize,
    /// Networks per gamma for ring sweeps, total networks otherwise.
    pub realizations: usize,
    pub t_samples: usize,
    pub gamma: Vec<f64>,
    /// One seed per realization. Empty means derived from `base_seed`.
    pub seeds: Vec<u64>,
    pub base_seed: u64,
    pub neighbors: usize,
    pub r: f64,
    pub p: f64,
    pub burn_in: usize,
    /// Also estimate Gaussian TE from simulated series (ws-rewiring).
    pub empirical: bool,
    pub out_dir: PathBuf,
}

fn even_grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| i as f64 / (points - 1) as f64).collect()
}

impl ExperimentConfig {
    pub fn preset(experiment: ExperimentId, preset: Preset) -> Self {
        let desk = preset == Preset::Desk;
        let mut cfg = ExperimentConfig {
            experiment,
            preset,
            n: 100,
            weight: 0.1,
            k: 14,
            realizations: 10,
            t_samples: 100_000,
            gamma: even_grid(11),
            seeds: Vec::new(),
            base_seed: 1,
            neighbors: 2,
            r: 0.5,
            p: 0.005,
            burn_in: DEFAULT_BURN_IN,
            empirical: true,
            out_dir: PathBuf::from("results"),
        };
        match experiment {
            ExperimentId::BaIndegree => {
                cfg.weight = 0.1;
                cfg.n = if desk { 50 } else { 100 };
                cfg.realizations = if desk { 200 } else { 10_000 };
                cfg.k = if desk { 8 } else { 14 };
            }
            ExperimentId::WsRewiring => {
                cfg.weight = 0.15;
                cfg.realizations = if desk { 3 } else { 10 };
                cfg.t_samples = if desk { 20_000 } else { 100_000 };
                cfg.gamma = if desk { even_grid(5) } else { even_grid(11) };
            }
            ExperimentId::RbnIndegree => {
                cfg.weight = 1.0;
                cfg.n = if desk { 50 } else { 100 };
                cfg.realizations = if desk { 200 } else { 10_000 };
                cfg.k = if desk { 4 } else { 14 };
                cfg.t_samples = if desk { 50_000 } else { 100_000 };
            }
            ExperimentId::RbnRewiring => {
                cfg.weight = 1.0;
                cfg.realizations = if desk { 5 } else { 20 };
                cfg.k = if desk { 4 } else { 14 };
                cfg.t_samples = if desk { 50_000 } else { 100_000 };
                cfg.gamma = if desk { even_grid(5) } else { even_grid(11) };
            }
        }
        cfg
    }

    /// Apply one `key = value` setting.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &'static str, v: &str) -> Result<T>
        where
            T::Err: fmt::Display,
        {
            v.parse::<T>().map_err(|e| Error::invalid(key, format!("`{v}`: {e}")))
        }
        fn list<T: FromStr>(key: &'static str, v: &str) -> Result<Vec<T>>
        where
            T::Err: fmt::Display,
        {
            v.split(',').map(|s| num(key, s.trim())).collect()
        }
        let v = value.trim();
        match key.trim() {
            "experiment" => self.experiment = v.parse()?,
            "preset" => self.preset = v.parse()?,
            "n" => self.n = num("n", v)?,
            "weight" => self.weight = num("weight", v)?,
            "k" => self.k = num("k", v)?,
            "realizations" => self.realizations = num("realizations", v)?,
            "t_samples" => self.t_samples = num("t_samples", v)?,
            "gamma" => self.gamma = list("gamma", v)?,
            "seeds" => self.seeds = list("seeds", v)?,
            "seed" => self.base_seed = num("seed", v)?,
            "neighbors" => self.neighbors = num("neighbors", v)?,
            "r" => self.r = num("r", v)?,
            "p" => self.p = num("p", v)?,
            "burn_in" => self.burn_in = num("burn_in", v)?,
            "empirical" => self.empirical = num("empirical", v)?,
            "out_dir" => self.out_dir = PathBuf::from(v),
            other => return Err(Error::invalid("config", format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Parse `key = value` lines; `#` starts a comment.
    pub fn parse_settings(text: &str) -> Result<Vec<(String, String)>> {
        let mut out = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(Error::Parse {
                line: i + 1,
                reason: format!("expected `key = value`, got `{line}`"),
            })?;
            out.push((k.trim().to_owned(), v.trim().to_owned()));
        }
        Ok(out)
    }

    /// Build from presets, then file settings, then overrides, in that order.
    /// `experiment` and `preset` settings pick the base before the rest apply.
    pub fn resolve(
        experiment: Option<ExperimentId>,
        preset: Option<Preset>,
        file_settings: &[(String, String)],
        overrides: &[(String, String)],
    ) -> Result<Self> {
        let pick = |key: &str| {
            overrides
                .iter()
                .chain(file_settings)
                .rev()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.clone())
        };
        let experiment = match experiment {
            Some(e) => e,
            None => pick("experiment")
                .ok_or_else(|| Error::invalid("experiment", "no experiment given"))?
                .parse()?,
        };
        let preset = match preset {
            Some(p) => p,
            None => pick("preset").map(|p| p.parse()).transpose()?.unwrap_or(Preset::Desk),
        };
        let mut cfg = Self::preset(experiment, preset);
        for (k, v) in file_settings.iter().chain(overrides) {
            if k == "experiment" || k == "preset" {
                continue;
            }
            cfg.apply(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n", "must be at least 1"));
        }
        if self.k == 0 {
            return Err(Error::invalid("k", "must be at least 1"));
        }
        if self.realizations == 0 {
            return Err(Error::invalid("realizations", "must be at least 1"));
        }
        if !self.weight.is_finite() {
            return Err(Error::invalid("weight", "must be finite"));
        }
        if !self.seeds.is_empty() && self.seeds.len() != self.realizations {
            return Err(Error::invalid(
                "seeds",
                format!("{} seeds given for {} realizations", self.seeds.len(), self.realizations),
            ));
        }
        if self.experiment.is_ring() {
            if self.gamma.is_empty() || self.gamma.iter().any(|g| !(0.0..=1.0).contains(g)) {
                return Err(Error::invalid("gamma", "grid must be non-empty with values in [0, 1]"));
            }
            if 2 * self.neighbors + 1 > self.n {
                return Err(Error::invalid("neighbors", format!("2*{}+1 exceeds n = {}", self.neighbors, self.n)));
            }
        }
        if self.experiment.is_rbn() {
            if !(0.0..=1.0).contains(&self.r) || !(0.0..=1.0).contains(&self.p) {
                return Err(Error::invalid("p", "r and p must lie in [0, 1]"));
            }
            if self.k > crate::estim::DISCRETE_MAX_K {
                return Err(Error::invalid("k", "too long for the discrete estimator"));
            }
        }
        let needs_series = self.experiment.is_rbn() || (self.experiment == ExperimentId::WsRewiring && self.empirical);
        if needs_series && self.t_samples < self.k + 10 * (self.k + 2) {
            return Err(Error::invalid(
                "t_samples",
                format!("{} samples too few for k = {}", self.t_samples, self.k),
            ));
        }
        Ok(())
    }

    pub fn realization_seeds(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            (0..self.realizations as u64).map(|i| derive_seed(self.base_seed, i)).collect()
        } else {
            self.seeds.clone()
        }
    }

    /// Settings in `key = value` form, for run logs.
    pub fn describe(&self) -> String {
        let join = |v: &[String]| v.join(",");
        let gammas: Vec<String> = self.gamma.iter().map(|g| g.to_string()).collect();
        let seeds: Vec<String> = self.realization_seeds().iter().map(|s| s.to_string()).collect();
        format!(
            "experiment = {}\npreset = {}\nn = {}\nweight = {}\nk = {}\nrealizations = {}\nt_samples = {}\n\
             gamma = {}\nseeds = {}\nneighbors = {}\nr = {}\np = {}\nburn_in = {}\nempirical = {}\n",
            self.experiment,
            self.preset,
            self.n,
            self.weight,
            self.k,
            self.realizations,
            self.t_samples,
            join(&gammas),
            join(&seeds),
            self.neighbors,
            self.r,
            self.p,
            self.burn_in,
            self.empirical
        )
    }
}

/// Mean TE per `(source in-degree, target in-degree)` bin. Degrees exclude self-loops.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DegreeBinnedTE {
    bins: BTreeMap<(usize, usize), (f64, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeBin {
    pub d_in_src: usize,
    pub d_in_tgt: usize,
    pub mean_te: f64,
    pub count: usize,
}

impl DegreeBinnedTE {
    pub fn add(&mut self, d_in_src: usize, d_in_tgt: usize, te: f64) {
        let e = self.bins.entry((d_in_src, d_in_tgt)).or_insert((0.0, 0));
        e.0 += te;
        e.1 += 1;
    }

    /// Occupied bins, sorted by `(d_in_src, d_in_tgt)`.
    pub fn bins(&self) -> Vec<DegreeBin> {
        self.bins
            .iter()
            .map(|(&(s, t), &(sum, count))| DegreeBin {
                d_in_src: s,
                d_in_tgt: t,
                mean_te: sum / count as f64,
                count,
            })
            .collect()
    }

    pub fn mean(&self, d_in_src: usize, d_in_tgt: usize) -> Option<f64> {
        self.bins.get(&(d_in_src, d_in_tgt)).map(|&(s, c)| s / c as f64)
    }

    pub fn total_count(&self) -> usize {
        self.bins.values().map(|b| b.1).sum()
    }

    fn well_sampled(&self, min_count: usize) -> Vec<DegreeBin> {
        self.bins().into_iter().filter(|b| b.count >= min_count).collect()
    }

    /// Spearman correlation of bin means against source in-degree.
    pub fn spearman_source(&self, min_count: usize) -> Option<f64> {
        let b = self.well_sampled(min_count);
        spearman(
            &b.iter().map(|b| b.d_in_src as f64).collect::<Vec<_>>(),
            &b.iter().map(|b| b.mean_te).collect::<Vec<_>>(),
        )
    }

    pub fn spearman_target(&self, min_count: usize) -> Option<f64> {
        let b = self.well_sampled(min_count);
        spearman(
            &b.iter().map(|b| b.d_in_tgt as f64).collect::<Vec<_>>(),
            &b.iter().map(|b| b.mean_te).collect::<Vec<_>>(),
        )
    }

    /// Largest over smallest bin mean among bins with at least `min_count` samples.
    pub fn max_min_ratio(&self, min_count: usize) -> Option<f64> {
        let means: Vec<f64> = self.well_sampled(min_count).iter().map(|b| b.mean_te).collect();
        let max = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = means.iter().copied().fold(f64::INFINITY, f64::min);
        (!means.is_empty() && min > 0.0).then(|| max / min)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(BA_GRID_HEADER);
        out.push('\n');
        for b in self.bins() {
            let _ = writeln!(out, "{},{},{:.16e},{}", b.d_in_src, b.d_in_tgt, b.mean_te, b.count);
        }
        out
    }
}

fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &p in &idx[i..=j] {
            ranks[p] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties; `None` when undefined.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    (vx > 0.0 && vy > 0.0).then(|| cov / (vx * vy).sqrt())
}

/// One row of a rewiring curve; `seed == None` marks the per-gamma mean.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub gamma: f64,
    pub seed: Option<u64>,
    pub method: TeMethod,
    pub mean_te: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CurveTable {
    pub rows: Vec<CurveRow>,
}

impl CurveTable {
    pub fn methods(&self) -> Vec<TeMethod> {
        let mut m: Vec<TeMethod> = self.rows.iter().map(|r| r.method).collect();
        m.sort();
        m.dedup();
        m
    }

    pub fn gammas(&self) -> Vec<f64> {
        let mut g: Vec<f64> = Vec::new();
        for r in &self.rows {
            if !g.contains(&r.gamma) {
                g.push(r.gamma);
            }
        }
        g
    }

    /// Per-gamma mean of one method, in grid order.
    pub fn mean_curve(&self, method: TeMethod) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.seed.is_none() && r.method == method)
            .map(|r| (r.gamma, r.mean_te))
            .collect()
    }

    pub fn per_seed(&self, method: TeMethod, gamma: f64) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.seed.is_some() && r.method == method && r.gamma == gamma)
            .map(|r| r.mean_te)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(WS_CURVE_HEADER);
        out.push('\n');
        for r in &self.rows {
            let seed = r.seed.map_or_else(|| "mean".to_owned(), |s| s.to_string());
            let _ = writeln!(out, "{},{},{},{:.16e}", r.gamma, seed, r.method, r.mean_te);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentResult {
    Grid(DegreeBinnedTE),
    Curve(CurveTable),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub result: ExperimentResult,
    /// Realizations regenerated after a generator/stationarity failure.
    pub resampled: usize,
    /// Links whose estimate failed and were left out of the averages.
    pub excluded_links: usize,
    pub notes: Vec<String>,
}

impl ExperimentOutput {
    pub fn grid(&self) -> Option<&DegreeBinnedTE> {
        match &self.result {
            ExperimentResult::Grid(g) => Some(g),
            ExperimentResult::Curve(_) => None,
        }
    }

    pub fn curve(&self) -> Option<&CurveTable> {
        match &self.result {
            ExperimentResult::Curve(c) => Some(c),
            ExperimentResult::Grid(_) => None,
        }
    }

    pub fn csv_name(&self) -> String {
        let suffix = match self.result {
            ExperimentResult::Grid(_) => "grid",
            ExperimentResult::Curve(_) => "curve",
        };
        format!("{}_{suffix}.csv", self.config.experiment)
    }

    pub fn csv(&self) -> String {
        match &self.result {
            ExperimentResult::Grid(g) => g.to_csv(),
            ExperimentResult::Curve(c) => c.to_csv(),
        }
    }

    pub fn log(&self) -> String {
        let mut s = self.config.describe();
        let _ = writeln!(s, "resampled_realizations = {}", self.resampled);
        let _ = writeln!(s, "excluded_links = {}", self.excluded_links);
        for n in &self.notes {
            let _ = writeln!(s, "# {n}");
        }
        s
    }

    /// Write the CSV and run log into `dir`, returning the CSV path.
    pub fn write_to(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let csv = dir.join(self.csv_name());
        fs::write(&csv, self.csv())?;
        fs::write(dir.join(format!("{}_run.log", self.config.experiment)), self.log())?;
        Ok(csv)
    }
}

/// Rayon pool honouring `TE_MOTIFS_THREADS`.
pub fn work_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let threads: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::invalid("TE_MOTIFS_THREADS", format!("expected a positive integer, got `{v}`")))?;
        if threads == 0 {
            return Err(Error::invalid("TE_MOTIFS_THREADS", "must be at least 1"));
        }
        b = b.num_threads(threads);
    }
    b.build().map_err(|e| Error::Estimation(format!("thread pool: {e}")))
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let pool = work_pool()?;
    pool.install(|| match cfg.experiment {
        ExperimentId::BaIndegree => exp_ba_indegree(cfg),
        ExperimentId::WsRewiring => exp_ws_rewiring(cfg),
        ExperimentId::RbnIndegree | ExperimentId::RbnRewiring => exp_rbn(cfg),
    })
}

/// Per-link TE samples of one network, tagged with non-self in-degrees.
struct LinkSamples {
    samples: Vec<(usize, usize, f64)>,
    excluded: usize,
    resampled: usize,
}

/// Generate a network from `seed`, regenerating from derived seeds while `accept` fails.
fn with_resampling<T>(
    seed: u64,
    mut attempt: impl FnMut(u64) -> Result<T>,
) -> Result<(T, usize)> {
    let mut last = None;
    for i in 0..MAX_RESAMPLES {
        let s = if i == 0 { seed } else { derive_seed(seed, 1_000_000 + i) };
        match attempt(s) {
            Ok(v) => return Ok((v, i as usize)),
            Err(e) if e.is_validation() => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

fn solved_cov(adj: &WeightedAdjacency, k: usize) -> Result<StationaryCovariance> {
    let mut cov = StationaryCovariance::solve(adj, DEFAULT_SERIES_TOL, DEFAULT_MAX_TERMS)?;
    cov.ensure_lags(k);
    Ok(cov)
}

pub fn exp_ba_indegree(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let emb = EmbeddingSpec::new(cfg.k)?;
    let per_seed: Vec<Result<LinkSamples>> = cfg
        .realization_seeds()
        .par_iter()
        .map(|&seed| {
            let ((adj, cov), resampled) = with_resampling(seed, |s| {
                let adj = gen_ba(cfg.n, cfg.weight, s)?;
                let cov = solved_cov(&adj, cfg.k)?;
                Ok((adj, cov))
            })?;
            let deg = degree_profile(&adj);
            let samples = adj
                .linked_pairs()
                .into_iter()
                .map(|(x, y)| {
                    let te = te_exact_from_cov(&cov, x, y, emb)?;
                    Ok((deg.non_self_in_degree(x), deg.non_self_in_degree(y), te))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(LinkSamples {
                samples,
                excluded: 0,
                resampled,
            })
        })
        .collect();
    reduce_grid(cfg, per_seed)
}

fn reduce_grid(cfg: &ExperimentConfig, per_seed: Vec<Result<LinkSamples>>) -> Result<ExperimentOutput> {
    let mut grid = DegreeBinnedTE::default();
    let (mut resampled, mut excluded) = (0, 0);
    for r in per_seed {
        let r = r?;
        resampled += r.resampled;
        excluded += r.excluded;
        for (s, t, te) in r.samples {
            grid.add(s, t, te);
        }
    }
    let mut notes = Vec::new();
    if resampled > 0 {
        notes.push(format!("{resampled} realizations regenerated after generator or stationarity failure"));
    }
    if excluded > 0 {
        notes.push(format!("{excluded} links excluded after estimation failure"));
    }
    Ok(ExperimentOutput {
        config: cfg.clone(),
        result: ExperimentResult::Grid(grid),
        resampled,
        excluded_links: excluded,
        notes,
    })
}

/// Mean over links of each method for one ring realization.
struct RingMeans {
    means: Vec<(TeMethod, f64)>,
    excluded: usize,
    resampled: usize,
}

pub fn exp_ws_rewiring(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let emb = EmbeddingSpec::new(cfg.k)?;
    let seeds = cfg.realization_seeds();
    let jobs: Vec<(usize, f64, u64)> = cfg
        .gamma
        .iter()
        .enumerate()
        .flat_map(|(gi, &g)| seeds.iter().map(move |&s| (gi, g, s)))
        .collect();
    let results: Vec<Result<RingMeans>> = jobs
        .par_iter()
        .map(|&(gi, gamma, seed)| {
            let ((adj, cov), resampled) = with_resampling(derive_seed(seed, 2 * gi as u64), |s| {
                let adj = gen_ws_ring(cfg.n, cfg.neighbors, gamma, cfg.weight, s)?;
                let cov = solved_cov(&adj, cfg.k)?;
                Ok((adj, cov))
            })?;
            let links = adj.linked_pairs();
            let mut sums = [0.0f64; 4];
            for &(x, y) in &links {
                let m = motif_terms(&adj, x, y)?;
                sums[0] += te_exact_from_cov(&cov, x, y, emb)?;
                sums[1] += m.total();
                sums[2] += m.partial_indegree();
                sums[3] += m.partial_directed();
            }
            let count = links.len() as f64;
            let mut means = vec![
                (TeMethod::Exact, sums[0] / count),
                (TeMethod::MotifFull, sums[1] / count),
                (TeMethod::MotifIndegree, sums[2] / count),
                (TeMethod::MotifDirected, sums[3] / count),
            ];
            let mut excluded = 0;
            if cfg.empirical {
                let panel = simulate_var(&adj, cfg.t_samples, cfg.burn_in, derive_seed(seed, 2 * gi as u64 + 1))?;
                let (mut sum, mut ok) = (0.0, 0usize);
                for y in 0..adj.n() {
                    let sources: Vec<usize> = links.iter().filter(|l| l.1 == y).map(|l| l.0).collect();
                    if sources.is_empty() {
                        continue;
                    }
                    let embedding = match GaussianEmbedding::new(&panel, y, emb) {
                        Ok(e) => e,
                        Err(e) => {
                            log::warn!("target {y}: {e}");
                            excluded += sources.len();
                            continue;
                        }
                    };
                    for x in sources {
                        match embedding.transfer_entropy(x, true) {
                            Ok(te) => {
                                sum += te;
                                ok += 1;
                            }
                            Err(e) => {
                                log::warn!("link {x}->{y}: {e}");
                                excluded += 1;
                            }
                        }
                    }
                }
                if ok > 0 {
                    means.push((TeMethod::GaussEmp, sum / ok as f64));
                }
            }
            Ok(RingMeans {
                means,
                excluded,
                resampled,
            })
        })
        .collect();
    reduce_curve(cfg, &jobs, results)
}

fn reduce_curve(
    cfg: &ExperimentConfig,
    jobs: &[(usize, f64, u64)],
    results: Vec<Result<RingMeans>>,
) -> Result<ExperimentOutput> {
    let mut table = CurveTable::default();
    let (mut resampled, mut excluded) = (0, 0);
    let mut by_gamma: BTreeMap<(usize, TeMethod), Vec<f64>> = BTreeMap::new();
    for (&(gi, gamma, seed), res) in jobs.iter().zip(results) {
        let res = res?;
        resampled += res.resampled;
        excluded += res.excluded;
        for (method, v) in res.means {
            table.rows.push(CurveRow {
                gamma,
                seed: Some(seed),
                method,
                mean_te: v,
            });
            by_gamma.entry((gi, method)).or_default().push(v);
        }
    }
    for ((gi, method), vals) in by_gamma {
        table.rows.push(CurveRow {
            gamma: cfg.gamma[gi],
            seed: None,
            method,
            mean_te: vals.iter().sum::<f64>() / vals.len() as f64,
        });
    }
    let mut notes = Vec::new();
    if resampled > 0 {
        notes.push(format!("{resampled} realizations regenerated after generator or stationarity failure"));
    }
    if excluded > 0 {
        notes.push(format!("{excluded} links excluded after estimation failure"));
    }
    Ok(ExperimentOutput {
        config: cfg.clone(),
        result: ExperimentResult::Curve(table),
        resampled,
        excluded_links: excluded,
        notes,
    })
}

/// Discrete TE of every linked pair on one RBN realization.
fn rbn_link_te(cfg: &ExperimentConfig, adj: &WeightedAdjacency, seed: u64) -> Result<Vec<((usize, usize), f64)>> {
    let emb = EmbeddingSpec::new(cfg.k)?;
    let spec = gen_rbn(adj, cfg.r, cfg.p, derive_seed(seed, 7))?;
    let panel = simulate_rbn(&spec, cfg.t_samples, derive_seed(seed, 8))?;
    adj.linked_pairs()
        .into_iter()
        .map(|(x, y)| Ok(((x, y), te_discrete_plugin(&panel, x, y, emb)?)))
        .collect()
}

pub fn exp_rbn(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let cells = 1usize << (cfg.k + 2);
    let undersampled = cfg.t_samples < 10 * cells;
    if undersampled {
        log::warn!(
            "{} samples for {cells} joint states at k = {}: discrete estimates are undersampled",
            cfg.t_samples,
            cfg.k
        );
    }
    let mut out = match cfg.experiment {
        ExperimentId::RbnIndegree => {
            let per_seed: Vec<Result<LinkSamples>> = cfg
                .realization_seeds()
                .par_iter()
                .map(|&seed| {
                    let ((adj, tes), resampled) = with_resampling(seed, |s| {
                        let adj = gen_ba(cfg.n, cfg.weight, s)?;
                        let tes = rbn_link_te(cfg, &adj, s)?;
                        Ok((adj, tes))
                    })?;
                    let deg = degree_profile(&adj);
                    let samples = tes
                        .into_iter()
                        .map(|((x, y), te)| (deg.non_self_in_degree(x), deg.non_self_in_degree(y), te))
                        .collect();
                    Ok(LinkSamples {
                        samples,
                        excluded: 0,
                        resampled,
                    })
                })
                .collect();
            reduce_grid(cfg, per_seed)?
        }
        ExperimentId::RbnRewiring => {
            let seeds = cfg.realization_seeds();
            let jobs: Vec<(usize, f64, u64)> = cfg
                .gamma
                .iter()
                .enumerate()
                .flat_map(|(gi, &g)| seeds.iter().map(move |&s| (gi, g, s)))
                .collect();
            let results: Vec<Result<RingMeans>> = jobs
                .par_iter()
                .map(|&(gi, gamma, seed)| {
                    let ((_, tes), resampled) = with_resampling(derive_seed(seed, 2 * gi as u64), |s| {
                        let adj = gen_ws_ring(cfg.n, cfg.neighbors, gamma, cfg.weight, s)?;
                        let tes = rbn_link_te(cfg, &adj, s)?;
                        Ok((adj, tes))
                    })?;
                    let mean = tes.iter().map(|t| t.1).sum::<f64>() / tes.len() as f64;
                    Ok(RingMeans {
                        means: vec![(TeMethod::Discrete, mean)],
                        excluded: 0,
                        resampled,
                    })
                })
                .collect();
            reduce_curve(cfg, &jobs, results)?
        }
        _ => return Err(Error::invalid("experiment", "not a Boolean-network experiment")),
    };
    if undersampled {
        out.notes.push(format!("undersampled: T = {} < 10 * 2^(k+2) = {}", cfg.t_samples, 10 * cells));
    }
    Ok(out)
}

/// Analytic TE records for every linked pair: exact plus the three motif variants.
pub fn all_link_records(adj: &WeightedAdjacency, emb: EmbeddingSpec) -> Result<Vec<TERecord>> {
    let cov = solved_cov(adj, emb.k())?;
    let pairs = adj.linked_pairs();
    let per_link: Vec<Result<Vec<TERecord>>> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let m = motif_terms(adj, x, y)?;
            let rec = |method, value| TERecord {
                source: x,
                target: y,
                method,
                k: emb.k(),
                value,
            };
            Ok(vec![
                rec(TeMethod::Exact, te_exact_from_cov(&cov, x, y, emb)?),
                rec(TeMethod::MotifFull, m.total()),
                rec(TeMethod::MotifDirected, m.partial_directed()),
                rec(TeMethod::MotifIndegree, m.partial_indegree()),
            ])
        })
        .collect();
    let mut out = Vec::with_capacity(pairs.len() * 4);
    for r in per_link {
        out.extend(r?);
    }
    Ok(out)
}
