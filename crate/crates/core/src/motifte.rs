//! Order-4 motif decomposition of pairwise transfer entropy.
//!
//! Each term is a weighted walk count around the link `X -> Y`. Unlabelled
//! nodes always range over nodes other than `X` and `Y`:
//!
//! | term | motif | expression |
//! |------|-------|------------|
//! | a | directed link | `C_XY^2/2 - C_XY^4/4` |
//! | b | common parent via two walks | `sum C_XY C_iX C_ij C_jY`, `j != i` |
//! | c | source in-degree | `1/2 sum C_XY^2 C_iX^2` |
//! | d | target in-degree | `-1/2 sum C_XY^2 C_iY^2` |
//! | e | source self-loop | `C_XX^2 C_XY^2 / 2` |
//! | f | common parent with self-loop | `sum C_XY C_ii C_iX C_iY` |
//! | g | secondary path through X's self-loop | `sum C_XY C_XX C_Xi C_iY` |
//!
//! The remainder against the exact TE is sixth order in the weights.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lincov::{te_exact, EmbeddingSpec, DEFAULT_SERIES_TOL};
use crate::netgen::WeightedAdjacency;

/// Largest network accepted by [`walk_count_oracle`].
pub const ORACLE_MAX_NODES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MotifBreakdown {
    pub term_a: f64,
    pub term_b: f64,
    pub term_c: f64,
    pub term_d: f64,
    pub term_e: f64,
    pub term_f: f64,
    pub term_g: f64,
}

impl MotifBreakdown {
    pub fn terms(&self) -> [f64; 7] {
        [
            self.term_a,
            self.term_b,
            self.term_c,
            self.term_d,
            self.term_e,
            self.term_f,
            self.term_g,
        ]
    }

    pub fn total(&self) -> f64 {
        self.terms().iter().sum()
    }

    /// Terms attributed to the directed link alone (a + e).
    pub fn partial_directed(&self) -> f64 {
        self.term_a + self.term_e
    }

    /// Directed link plus in-degree terms (a + c + d + e).
    pub fn partial_indegree(&self) -> f64 {
        self.term_a + self.term_c + self.term_d + self.term_e
    }

    pub fn value(&self, variant: MotifVariant) -> f64 {
        match variant {
            MotifVariant::Full => self.total(),
            MotifVariant::Directed => self.partial_directed(),
            MotifVariant::InDegree => self.partial_indegree(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.terms()
            .iter()
            .zip(other.terms())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Which subset of motif terms approximates the TE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MotifVariant {
    Full,
    Directed,
    InDegree,
}

impl MotifVariant {
    pub const ALL: [MotifVariant; 3] = [MotifVariant::Full, MotifVariant::Directed, MotifVariant::InDegree];

    pub fn name(self) -> &'static str {
        match self {
            MotifVariant::Full => "full",
            MotifVariant::Directed => "directed",
            MotifVariant::InDegree => "indegree",
        }
    }
}

impl fmt::Display for MotifVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MotifVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(MotifVariant::Full),
            "directed" => Ok(MotifVariant::Directed),
            "indegree" => Ok(MotifVariant::InDegree),
            other => Err(Error::invalid("variant", format!("unknown motif variant `{other}`"))),
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

fn check_pair(adj: &WeightedAdjacency, x: usize, y: usize) -> Result<()> {
    let n = adj.n();
    if x >= n || y >= n {
        return Err(Error::invalid("node", format!("({x}, {y}) out of range for n = {n}")));
    }
    if x == y {
        return Err(Error::invalid("target", "source and target must differ"));
    }
    Ok(())
}

/// Seven motif terms for the link `x -> y`.
///
/// Uses masked parent vectors `u_i = C_iX`, `v_i = C_iY` (zero at `X`, `Y`):
/// `b = C_XY (u^T C v - sum_i u_i C_ii v_i)` and `f = C_XY sum_i u_i C_ii v_i`.
pub fn motif_terms(adj: &WeightedAdjacency, x: usize, y: usize) -> Result<MotifBreakdown> {
    check_pair(adj, x, y)?;
    let c = adj.weights();
    let n = adj.n();
    let cxy = c[(x, y)];
    if cxy == 0.0 {
        return Ok(MotifBreakdown::default());
    }
    let cxx = c[(x, x)];
    let cxy2 = cxy * cxy;
    let others = |i: &usize| *i != x && *i != y;

    let mut u = vec![0.0; n];
    let mut v = vec![0.0; n];
    for i in (0..n).filter(others) {
        u[i] = c[(i, x)];
        v[i] = c[(i, y)];
    }

    let mut in_x = CompensatedSum::default();
    let mut in_y = CompensatedSum::default();
    let mut diag = CompensatedSum::default();
    let mut path = CompensatedSum::default();
    let mut bilinear = CompensatedSum::default();
    for i in (0..n).filter(others) {
        in_x.add(u[i] * u[i]);
        in_y.add(v[i] * v[i]);
        diag.add(u[i] * c[(i, i)] * v[i]);
        path.add(c[(x, i)] * v[i]);
        if u[i] != 0.0 {
            let mut row = CompensatedSum::default();
            for j in 0..n {
                row.add(c[(i, j)] * v[j]);
            }
            bilinear.add(u[i] * row.value());
        }
    }
    let diag = diag.value();

    Ok(MotifBreakdown {
        term_a: 0.5 * cxy2 - 0.25 * cxy2 * cxy2,
        term_b: cxy * (bilinear.value() - diag),
        term_c: 0.5 * cxy2 * in_x.value(),
        term_d: -0.5 * cxy2 * in_y.value(),
        term_e: 0.5 * cxx * cxx * cxy2,
        term_f: cxy * diag,
        term_g: cxy * cxx * path.value(),
    })
}

/// Motif approximation of the TE `x -> y` for the chosen subset of terms.
pub fn te_motif(adj: &WeightedAdjacency, x: usize, y: usize, variant: MotifVariant) -> Result<f64> {
    Ok(motif_terms(adj, x, y)?.value(variant))
}

/// `|te_exact - te_motif(full)|` after scaling every weight by each factor.
pub fn motif_error_order(
    adj_base: &WeightedAdjacency,
    x: usize,
    y: usize,
    emb: EmbeddingSpec,
    scales: &[f64],
) -> Result<Vec<(f64, f64)>> {
    scales
        .iter()
        .map(|&s| {
            let scaled = adj_base.scaled(s);
            let exact = te_exact(&scaled, x, y, emb, DEFAULT_SERIES_TOL)?;
            let approx = te_motif(&scaled, x, y, MotifVariant::Full)?;
            Ok((s, (exact - approx).abs()))
        })
        .collect()
}

/// Reference implementation: every term by explicit nested loops over all
/// index tuples with the exclusion constraints checked literally.
pub fn walk_count_oracle(adj: &WeightedAdjacency, x: usize, y: usize) -> Result<MotifBreakdown> {
    check_pair(adj, x, y)?;
    let n = adj.n();
    if n > ORACLE_MAX_NODES {
        return Err(Error::invalid(
            "adj",
            format!("oracle enumeration limited to {ORACLE_MAX_NODES} nodes, got {n}"),
        ));
    }
    let c = |i: usize, j: usize| adj.weight(i, j);
    let mut out = MotifBreakdown {
        term_a: 0.5 * c(x, y).powi(2) - 0.25 * c(x, y).powi(4),
        term_e: 0.5 * c(x, x).powi(2) * c(x, y).powi(2),
        ..Default::default()
    };
    for i1 in 0..n {
        if i1 == x || i1 == y {
            continue;
        }
        for i2 in 0..n {
            if i2 == x || i2 == y || i2 == i1 {
                continue;
            }
            out.term_b += c(x, y) * c(i1, x) * c(i1, i2) * c(i2, y);
        }
        out.term_c += 0.5 * c(x, y).powi(2) * c(i1, x).powi(2);
        out.term_d -= 0.5 * c(x, y).powi(2) * c(i1, y).powi(2);
        out.term_f += c(x, y) * c(i1, i1) * c(i1, x) * c(i1, y);
        out.term_g += c(x, y) * c(x, x) * c(x, i1) * c(i1, y);
    }
    Ok(out)
}
