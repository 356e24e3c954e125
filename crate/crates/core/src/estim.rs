//! Finite-sample estimators: Gaussian plug-in transfer entropy and active
//! information storage (nats), the discrete plug-in transfer entropy (bits),
//! embedding selection and sample lagged covariances.
//!
//! Samples are aligned as `(X(t), Y(t+1), Y(t), ..., Y(t-k+1))` for
//! `t = k-1 ..= T-2`, giving `T - k` rows in the same variable order as
//! [`JointCovBlocks`](crate::lincov::JointCovBlocks).

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::dynsim::TimeSeriesPanel;
use crate::error::{Error, Result};
use crate::lincov::{log_det_pd, EmbeddingSpec, JointCovBlocks};

/// Largest history accepted by the discrete estimator (2^(k+2) count cells).
pub const DISCRETE_MAX_K: usize = 20;
/// Lagged covariances from fewer pairs than this are flagged as high-variance.
pub const MIN_RELIABLE_PAIRS: usize = 30;

pub fn nats_to_bits(v: f64) -> f64 {
    v / std::f64::consts::LN_2
}

pub fn bits_to_nats(v: f64) -> f64 {
    v * std::f64::consts::LN_2
}

/// Design matrix of embedded rows, `(T - k) x (k + 2)`.
#[derive(Debug, Clone)]
pub struct EmbeddedSample {
    pub rows: DMatrix<f64>,
}

impl EmbeddedSample {
    pub fn new(panel: &TimeSeriesPanel, x: usize, y: usize, emb: EmbeddingSpec) -> Result<Self> {
        panel.check_node(x)?;
        panel.check_node(y)?;
        let k = emb.k();
        let t = panel.t_samples();
        if t <= k {
            return Err(Error::invalid("panel", format!("{t} samples too short for k = {k}")));
        }
        let rows = DMatrix::from_fn(t - k, k + 2, |r, c| {
            let now = k - 1 + r;
            match c {
                0 => panel.get(now, x),
                1 => panel.get(now + 1, y),
                _ => panel.get(now - (c - 2), y),
            }
        });
        Ok(Self { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.nrows() == 0
    }
}

fn check_length(panel: &TimeSeriesPanel, k: usize) -> Result<()> {
    let t = panel.t_samples();
    if t < k || t - k < 10 * (k + 2) {
        return Err(Error::invalid(
            "panel",
            format!("{t} samples too few for k = {k}: need T - k >= {}", 10 * (k + 2)),
        ));
    }
    Ok(())
}

/// Sample moments of one target's embedding, reusable across sources.
#[derive(Debug, Clone)]
pub struct GaussianEmbedding<'a> {
    panel: &'a TimeSeriesPanel,
    y: usize,
    k: usize,
    /// Covariance of `(Y(t+1), Y(t), ..., Y(t-k+1))`.
    target_cov: DMatrix<f64>,
    target_cols: Vec<Vec<f64>>,
}

impl<'a> GaussianEmbedding<'a> {
    pub fn new(panel: &'a TimeSeriesPanel, y: usize, emb: EmbeddingSpec) -> Result<Self> {
        panel.check_node(y)?;
        let k = emb.k();
        check_length(panel, k)?;
        let rows = panel.t_samples() - k;
        let series = panel.column(y);
        // Column 0 is Y(t+1), column 1 + j is Y(t - j), for t = k-1 ..= T-2.
        let target_cols: Vec<Vec<f64>> = (0..=k)
            .map(|c| {
                let start = if c == 0 { k } else { k - c };
                let mut col = series[start..start + rows].to_vec();
                let mean = col.iter().sum::<f64>() / rows as f64;
                col.iter_mut().for_each(|v| *v -= mean);
                col
            })
            .collect();
        let mut target_cov = DMatrix::zeros(k + 1, k + 1);
        for i in 0..=k {
            for j in i..=k {
                let v = dot(&target_cols[i], &target_cols[j]) / (rows - 1) as f64;
                target_cov[(i, j)] = v;
                target_cov[(j, i)] = v;
            }
        }
        if target_cov[(0, 0)] <= 0.0 {
            return Err(Error::Estimation(format!("target {y} series is constant")));
        }
        Ok(Self {
            panel,
            y,
            k,
            target_cov,
            target_cols,
        })
    }

    pub fn rows(&self) -> usize {
        self.panel.t_samples() - self.k
    }

    /// Joint sample covariance of `(X(t), Y(t+1), Y^(k))`.
    pub fn joint_cov(&self, x: usize) -> Result<JointCovBlocks> {
        self.panel.check_node(x)?;
        if x == self.y {
            return Err(Error::invalid("source", "source and target must differ"));
        }
        let (k, rows) = (self.k, self.rows());
        let series = self.panel.column(x);
        let mut xs = series[k - 1..k - 1 + rows].to_vec();
        let mean = xs.iter().sum::<f64>() / rows as f64;
        xs.iter_mut().for_each(|v| *v -= mean);
        let denom = (rows - 1) as f64;
        let mut b = DMatrix::zeros(k + 2, k + 2);
        b[(0, 0)] = dot(&xs, &xs) / denom;
        if b[(0, 0)] <= 0.0 {
            return Err(Error::Estimation(format!("source {x} series is constant")));
        }
        for (c, col) in self.target_cols.iter().enumerate() {
            let v = dot(&xs, col) / denom;
            b[(0, c + 1)] = v;
            b[(c + 1, 0)] = v;
        }
        b.view_mut((1, 1), (k + 1, k + 1)).copy_from(&self.target_cov);
        Ok(JointCovBlocks::from_full(b))
    }

    /// Plug-in TE `x -> y` in nats, minus `1 / (2 (T - k))` when `bias_correct`.
    pub fn transfer_entropy(&self, x: usize, bias_correct: bool) -> Result<f64> {
        let blocks = self.joint_cov(x)?;
        let raw = log_det_combination(&blocks)?;
        Ok(if bias_correct {
            raw - 1.0 / (2.0 * self.rows() as f64)
        } else {
            raw
        })
    }

    /// Plug-in `I(Y(t+1); Y^(k))` in nats, minus `k / (2 (T - k))` when `bias_correct`.
    pub fn active_information_storage(&self, bias_correct: bool) -> Result<f64> {
        let k = self.k;
        let past = self.target_cov.view((1, 1), (k, k)).clone_owned();
        let ld = |m: &DMatrix<f64>, w| log_det_pd(m, w).map_err(|e| Error::Estimation(e.to_string()));
        let raw = 0.5
            * (self.target_cov[(0, 0)].ln() + ld(&past, "sample Y^(k) covariance")?
                - ld(&self.target_cov, "sample (Y, Y^(k)) covariance")?);
        Ok(if bias_correct {
            raw - k as f64 / (2.0 * self.rows() as f64)
        } else {
            raw
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Unclamped four-log-determinant combination of sample covariances.
fn log_det_combination(b: &JointCovBlocks) -> Result<f64> {
    let ld = |m: &DMatrix<f64>, w| log_det_pd(m, w).map_err(|e| Error::Estimation(format!("rank-deficient sample covariance: {e}")));
    Ok(0.5
        * (ld(&b.b_y_past, "sample (Y, Y^(k))")? - ld(&b.b_past, "sample Y^(k)")?
            - ld(&b.b_full, "sample (X, Y, Y^(k))")?
            + ld(&b.b_x_past, "sample (X, Y^(k))")?))
}

pub fn te_gaussian_empirical(
    panel: &TimeSeriesPanel,
    x: usize,
    y: usize,
    emb: EmbeddingSpec,
    bias_correct: bool,
) -> Result<f64> {
    GaussianEmbedding::new(panel, y, emb)?.transfer_entropy(x, bias_correct)
}

pub fn ais_gaussian(panel: &TimeSeriesPanel, y: usize, emb: EmbeddingSpec, bias_correct: bool) -> Result<f64> {
    GaussianEmbedding::new(panel, y, emb)?.active_information_storage(bias_correct)
}

/// Embedding length maximizing bias-corrected AIS over `1..=k_max`.
///
/// Values within `tie_tolerance` of the maximum count as ties and resolve to
/// the smallest such `k`.
pub fn select_embedding_with_tolerance(
    panel: &TimeSeriesPanel,
    y: usize,
    k_max: usize,
    tie_tolerance: f64,
) -> Result<(usize, Vec<f64>)> {
    if k_max == 0 {
        return Err(Error::invalid("k_max", "must be at least 1"));
    }
    let scores = (1..=k_max)
        .map(|k| ais_gaussian(panel, y, EmbeddingSpec::new(k)?, true))
        .collect::<Result<Vec<f64>>>()?;
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k_star = scores.iter().position(|&s| s >= best - tie_tolerance).unwrap() + 1;
    Ok((k_star, scores))
}

/// Default tie tolerance: three null standard deviations of the corrected
/// AIS at `k_max`, `3 sqrt(2 k_max) / (2 (T - k_max))`.
pub fn default_tie_tolerance(t_samples: usize, k_max: usize) -> f64 {
    let rows = t_samples.saturating_sub(k_max).max(1) as f64;
    3.0 * (2.0 * k_max as f64).sqrt() / (2.0 * rows)
}

pub fn select_embedding(panel: &TimeSeriesPanel, y: usize, k_max: usize) -> Result<usize> {
    let tol = default_tie_tolerance(panel.t_samples(), k_max);
    Ok(select_embedding_with_tolerance(panel, y, k_max, tol)?.0)
}

/// Plug-in `I(X(t); Y(t+1) | Y^(k))` in bits from joint frequency counts.
pub fn te_discrete_plugin(panel: &TimeSeriesPanel, x: usize, y: usize, emb: EmbeddingSpec) -> Result<f64> {
    let xs = panel.binary_column(x)?;
    let ys = panel.binary_column(y)?;
    if x == y {
        return Err(Error::invalid("source", "source and target must differ"));
    }
    let k = emb.k();
    if k > DISCRETE_MAX_K {
        return Err(Error::invalid("k", format!("discrete estimator supports k <= {DISCRETE_MAX_K}")));
    }
    let t = panel.t_samples();
    if t <= k + 1 {
        return Err(Error::invalid("panel", format!("{t} samples too short for k = {k}")));
    }
    let cells = 1usize << (k + 2);
    if t < 10 * cells {
        log::warn!("discrete TE {x}->{y}: {t} samples for {cells} states at k = {k} is undersampled");
    }
    // Code: bit 0 = X(t), bit 1 = Y(t+1), bits 2.. = Y(t), ..., Y(t-k+1).
    let mask = (1usize << k) - 1;
    let mut past = 0usize;
    // Newest history value in bit 0: Y(t) at bit 0, Y(t-k+1) at bit k-1.
    for &v in ys.iter().take(k) {
        past = (past << 1) | usize::from(v);
    }
    let mut joint = vec![0u32; cells];
    for now in k - 1..t - 1 {
        if now >= k {
            past = ((past << 1) | usize::from(ys[now])) & mask;
        }
        let code = usize::from(xs[now]) | (usize::from(ys[now + 1]) << 1) | (past << 2);
        joint[code] += 1;
    }
    let rows = (t - k) as f64;
    let mut pz = vec![0u32; 1 << k];
    let mut pxz = vec![0u32; 1 << (k + 1)];
    let mut pyz = vec![0u32; 1 << (k + 1)];
    for (code, &c) in joint.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let z = code >> 2;
        pz[z] += c;
        pxz[(z << 1) | (code & 1)] += c;
        pyz[(z << 1) | ((code >> 1) & 1)] += c;
    }
    let mut cmi = 0.0;
    for (code, &c) in joint.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let z = code >> 2;
        let num = f64::from(c) * f64::from(pz[z]);
        let den = f64::from(pxz[(z << 1) | (code & 1)]) * f64::from(pyz[(z << 1) | ((code >> 1) & 1)]);
        cmi += f64::from(c) / rows * (num / den).log2();
    }
    Ok(cmi.max(0.0))
}

/// Sample cross-covariance of `Z(t)` against `Z(t + s)`.
#[derive(Debug, Clone)]
pub struct LaggedCovEstimate {
    /// Entry `(i, j)` estimates `cov(Z_i(t), Z_j(t + s))`.
    pub matrix: DMatrix<f64>,
    pub pairs: usize,
    pub high_variance: bool,
}

pub fn sample_lagged_cov(panel: &TimeSeriesPanel, s: usize) -> Result<LaggedCovEstimate> {
    let t = panel.t_samples();
    if s >= t {
        return Err(Error::invalid("s", format!("lag {s} must be below the panel length {t}")));
    }
    let n = panel.n();
    let pairs = t - s;
    let mean = |offset: usize, i: usize| (0..pairs).map(|r| panel.get(r + offset, i)).sum::<f64>() / pairs as f64;
    let early: Vec<f64> = (0..n).map(|i| mean(0, i)).collect();
    let late: Vec<f64> = (0..n).map(|i| mean(s, i)).collect();
    let denom = pairs.saturating_sub(1).max(1) as f64;
    let mut m = DMatrix::zeros(n, n);
    for r in 0..pairs {
        for i in 0..n {
            let a = panel.get(r, i) - early[i];
            for j in 0..n {
                m[(i, j)] += a * (panel.get(r + s, j) - late[j]);
            }
        }
    }
    m /= denom;
    Ok(LaggedCovEstimate {
        matrix: m,
        pairs,
        high_variance: pairs < MIN_RELIABLE_PAIRS,
    })
}

/// Method tag of a [`TERecord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TeMethod {
    Exact,
    MotifFull,
    MotifDirected,
    MotifIndegree,
    GaussEmp,
    Discrete,
}

impl TeMethod {
    pub fn name(self) -> &'static str {
        match self {
            TeMethod::Exact => "exact",
            TeMethod::MotifFull => "motif_full",
            TeMethod::MotifDirected => "motif_directed",
            TeMethod::MotifIndegree => "motif_indegree",
            TeMethod::GaussEmp => "gauss_emp",
            TeMethod::Discrete => "discrete",
        }
    }

    pub fn units(self) -> &'static str {
        match self {
            TeMethod::Discrete => "bits",
            _ => "nats",
        }
    }
}

impl fmt::Display for TeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TeMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            TeMethod::Exact,
            TeMethod::MotifFull,
            TeMethod::MotifDirected,
            TeMethod::MotifIndegree,
            TeMethod::GaussEmp,
            TeMethod::Discrete,
        ]
        .into_iter()
        .find(|m| m.name() == s)
        .ok_or_else(|| Error::invalid("method", format!("unknown method `{s}`")))
    }
}

/// One `(source, target, method, k, value)` measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct TERecord {
    pub source: usize,
    pub target: usize,
    pub method: TeMethod,
    pub k: usize,
    pub value: f64,
}

pub const TE_RECORDS_HEADER: &str = "source,target,method,k,value,units";

impl TERecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.16e},{}",
            self.source,
            self.target,
            self.method,
            self.k,
            self.value,
            self.method.units()
        )
    }
}

pub fn format_te_records(records: &[TERecord]) -> String {
    let mut out = String::from(TE_RECORDS_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}
