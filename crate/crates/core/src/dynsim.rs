//! Synthetic dynamics on a fixed topology: the Gaussian VAR(1) process and
//! stochastic random Boolean networks.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lincov::STATIONARITY_MARGIN;
use crate::netgen::{spectral_radius, WeightedAdjacency};
use crate::rng::rng_from_seed;

pub const DEFAULT_BURN_IN: usize = 1000;
/// Largest parent count (self-loop included) for which a truth table is built.
pub const RBN_MAX_PARENTS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub enum PanelValues {
    Real(Vec<f64>),
    Binary(Vec<u8>),
}

/// `T x n` observations, stored row-major (one row per time step).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesPanel {
    n: usize,
    t_samples: usize,
    values: PanelValues,
    pub seed: Option<u64>,
    pub burn_in: usize,
}

impl TimeSeriesPanel {
    pub fn from_real(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || !values.len().is_multiple_of(n) {
            return Err(Error::invalid("values", format!("length {} is not a multiple of n = {n}", values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("values", "panel entries must be finite"));
        }
        Ok(Self {
            n,
            t_samples: values.len() / n,
            values: PanelValues::Real(values),
            seed: None,
            burn_in: 0,
        })
    }

    pub fn from_binary(n: usize, values: Vec<u8>) -> Result<Self> {
        if n == 0 || !values.len().is_multiple_of(n) {
            return Err(Error::invalid("values", format!("length {} is not a multiple of n = {n}", values.len())));
        }
        if values.iter().any(|&v| v > 1) {
            return Err(Error::invalid("values", "binary panel entries must be 0 or 1"));
        }
        Ok(Self {
            n,
            t_samples: values.len() / n,
            values: PanelValues::Binary(values),
            seed: None,
            burn_in: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_samples(&self) -> usize {
        self.t_samples
    }

    pub fn is_binary(&self) -> bool {
        matches!(self.values, PanelValues::Binary(_))
    }

    pub fn values(&self) -> &PanelValues {
        &self.values
    }

    #[inline]
    pub fn get(&self, t: usize, node: usize) -> f64 {
        match &self.values {
            PanelValues::Real(v) => v[t * self.n + node],
            PanelValues::Binary(v) => f64::from(v[t * self.n + node]),
        }
    }

    pub fn column(&self, node: usize) -> Vec<f64> {
        (0..self.t_samples).map(|t| self.get(t, node)).collect()
    }

    pub fn binary_column(&self, node: usize) -> Result<Vec<u8>> {
        match &self.values {
            PanelValues::Binary(v) => Ok(v.iter().skip(node).step_by(self.n).copied().collect()),
            PanelValues::Real(_) => Err(Error::invalid("panel", "expected a binary panel")),
        }
    }

    pub(crate) fn check_node(&self, node: usize) -> Result<()> {
        if node >= self.n {
            return Err(Error::invalid("node", format!("{node} out of range for n = {}", self.n)));
        }
        Ok(())
    }

    /// Replace one node's series, keeping the value type.
    pub fn with_column(&self, node: usize, series: &[f64]) -> Result<Self> {
        self.check_node(node)?;
        if series.len() != self.t_samples {
            return Err(Error::invalid("series", "length differs from panel length"));
        }
        let mut out = self.clone();
        match &mut out.values {
            PanelValues::Real(v) => {
                for (t, &s) in series.iter().enumerate() {
                    v[t * self.n + node] = s;
                }
            }
            PanelValues::Binary(v) => {
                for (t, &s) in series.iter().enumerate() {
                    if s != 0.0 && s != 1.0 {
                        return Err(Error::invalid("series", "binary panel entries must be 0 or 1"));
                    }
                    v[t * self.n + node] = s as u8;
                }
            }
        }
        Ok(out)
    }
}

/// Iterate `Z(t+1) = Z(t) C + eps(t)` from a standard-normal initial state,
/// discard `burn_in` steps and keep the next `t_samples` states.
pub fn simulate_var(adj: &WeightedAdjacency, t_samples: usize, burn_in: usize, seed: u64) -> Result<TimeSeriesPanel> {
    let limit = 1.0 - STATIONARITY_MARGIN;
    let radius = spectral_radius(adj)?;
    if radius > limit {
        return Err(Error::NonStationary { radius, limit });
    }
    let n = adj.n();
    // Sparse incoming lists: inputs[j] = [(i, C_ij)].
    let inputs: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|j| (0..n).filter_map(|i| {
            let w = adj.weight(i, j);
            (w != 0.0).then_some((i, w))
        }).collect())
        .collect();
    let mut rng = rng_from_seed(seed);
    let mut state: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let mut next = vec![0.0; n];
    let mut values = Vec::with_capacity(n * t_samples);
    for step in 0..burn_in + t_samples {
        if step >= burn_in {
            values.extend_from_slice(&state);
        }
        for (j, inp) in inputs.iter().enumerate() {
            let drive: f64 = inp.iter().map(|&(i, w)| state[i] * w).sum();
            next[j] = drive + rng.sample::<f64, _>(StandardNormal);
        }
        std::mem::swap(&mut state, &mut next);
    }
    let mut panel = TimeSeriesPanel::from_real(n, values)?;
    panel.seed = Some(seed);
    panel.burn_in = burn_in;
    Ok(panel)
}

/// Random Boolean network: topology, per-node truth tables and noise levels.
///
/// Parents are ordered by ascending node index (self-loops included); in a
/// node's table, entry `idx` is the output when parent `p` is in state
/// `(idx >> p) & 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RBNSpec {
    parents: Vec<Vec<usize>>,
    tables: Vec<Vec<u8>>,
    /// Probability of a `1` output when tables were drawn.
    pub r: f64,
    /// Per-step, per-node output flip probability.
    pub p: f64,
}

impl RBNSpec {
    pub fn new(parents: Vec<Vec<usize>>, tables: Vec<Vec<u8>>, r: f64, p: f64) -> Result<Self> {
        let n = parents.len();
        if n == 0 || tables.len() != n {
            return Err(Error::invalid("tables", "one table per node required"));
        }
        if !(0.0..=1.0).contains(&r) || !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid("p", "probabilities must lie in [0, 1]"));
        }
        for (node, (par, tab)) in parents.iter().zip(&tables).enumerate() {
            if par.len() > RBN_MAX_PARENTS {
                return Err(Error::invalid(
                    "topology",
                    format!("node {node} has {} parents, limit is {RBN_MAX_PARENTS}", par.len()),
                ));
            }
            if par.iter().any(|&q| q >= n) || par.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid("parents", format!("node {node}: parents must be ascending node indices")));
            }
            if tab.len() != 1 << par.len() || tab.iter().any(|&b| b > 1) {
                return Err(Error::invalid("tables", format!("node {node}: table must be binary of length 2^{}", par.len())));
            }
        }
        Ok(Self { parents, tables, r, p })
    }

    pub fn n(&self) -> usize {
        self.parents.len()
    }

    pub fn parents(&self, node: usize) -> &[usize] {
        &self.parents[node]
    }

    pub fn table(&self, node: usize) -> &[u8] {
        &self.tables[node]
    }

    fn output(&self, node: usize, state: &[u8]) -> u8 {
        let idx = self.parents[node]
            .iter()
            .enumerate()
            .fold(0usize, |acc, (bit, &q)| acc | (usize::from(state[q]) << bit));
        self.tables[node][idx]
    }
}

/// Draw a truth table per node, each entry an independent Bernoulli(`r`).
pub fn gen_rbn(adj: &WeightedAdjacency, r: f64, p: f64, seed: u64) -> Result<RBNSpec> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::invalid("r", format!("must lie in [0, 1], got {r}")));
    }
    let n = adj.n();
    let parents: Vec<Vec<usize>> = (0..n).map(|j| adj.parents(j)).collect();
    if let Some((node, par)) = parents.iter().enumerate().find(|(_, p)| p.len() > RBN_MAX_PARENTS) {
        return Err(Error::invalid(
            "topology",
            format!("node {node} has {} parents, limit is {RBN_MAX_PARENTS}", par.len()),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let tables = parents
        .iter()
        .map(|par| (0..1usize << par.len()).map(|_| u8::from(rng.random_bool(r))).collect())
        .collect();
    RBNSpec::new(parents, tables, r, p)
}

/// Synchronous stochastic update from a fair-coin initial state: each node
/// looks up its table output and then flips it with probability `p`.
pub fn simulate_rbn(spec: &RBNSpec, t_samples: usize, seed: u64) -> Result<TimeSeriesPanel> {
    let n = spec.n();
    let mut rng = rng_from_seed(seed);
    let mut state: Vec<u8> = (0..n).map(|_| u8::from(rng.random_bool(0.5))).collect();
    let mut next = vec![0u8; n];
    let mut values = Vec::with_capacity(n * t_samples);
    for step in 0..t_samples {
        values.extend_from_slice(&state);
        if step + 1 == t_samples {
            break;
        }
        for (node, nx) in next.iter_mut().enumerate() {
            let out = spec.output(node, &state);
            *nx = if rng.random_bool(spec.p) { 1 - out } else { out };
        }
        std::mem::swap(&mut state, &mut next);
    }
    let mut panel = TimeSeriesPanel::from_binary(n, values)?;
    panel.seed = Some(seed);
    Ok(panel)
}

/// CSV with header `n0,...,n{N-1}`; reals with 17 significant digits, RBN values as 0/1.
pub fn format_panel(panel: &TimeSeriesPanel) -> String {
    let n = panel.n();
    let mut out = String::with_capacity(panel.t_samples() * n * 8);
    let header: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for t in 0..panel.t_samples() {
        for i in 0..n {
            if i > 0 {
                out.push(',');
            }
            match panel.values() {
                PanelValues::Real(v) => {
                    let _ = write!(out, "{:.16e}", v[t * n + i]);
                }
                PanelValues::Binary(v) => out.push(if v[t * n + i] == 1 { '1' } else { '0' }),
            }
        }
        out.push('\n');
    }
    out
}

pub fn parse_panel(text: &str) -> Result<TimeSeriesPanel> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "missing header".into(),
    })?;
    let cols: Vec<&str> = header.trim().split(',').collect();
    for (i, c) in cols.iter().enumerate() {
        if *c != format!("n{i}") {
            return Err(Error::Parse {
                line: 1,
                reason: format!("expected column `n{i}`, got `{c}`"),
            });
        }
    }
    let n = cols.len();
    let mut tokens: Vec<String> = Vec::new();
    for (idx, l) in lines {
        let fields: Vec<&str> = l.trim().split(',').collect();
        if fields.len() != n {
            return Err(Error::Parse {
                line: idx + 1,
                reason: format!("expected {n} fields, got {}", fields.len()),
            });
        }
        tokens.extend(fields.into_iter().map(str::to_owned));
    }
    if tokens.iter().all(|t| t == "0" || t == "1") && !tokens.is_empty() {
        return TimeSeriesPanel::from_binary(n, tokens.iter().map(|t| u8::from(t == "1")).collect());
    }
    let values = tokens
        .iter()
        .enumerate()
        .map(|(i, t)| {
            t.parse::<f64>().map_err(|e| Error::Parse {
                line: i / n + 2,
                reason: format!("bad value `{t}`: {e}"),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    TimeSeriesPanel::from_real(n, values)
}

pub fn write_panel(panel: &TimeSeriesPanel, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_panel(panel))?;
    Ok(())
}

pub fn read_panel(path: impl AsRef<Path>) -> Result<TimeSeriesPanel> {
    parse_panel(&fs::read_to_string(path)?)
}
