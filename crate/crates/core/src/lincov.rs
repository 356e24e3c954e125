//! Stationary covariance of the VAR(1) process `Z(t+1) = Z(t) C + eps(t)`
//! with unit-variance white noise, and the transfer entropy it implies.
//!
//! The equal-time covariance solves `Omega = I + C^T Omega C` and is obtained
//! as the power series `sum_j (C^j)^T C^j`. Lagged covariances are
//! `Omega(s) = <Z(t)^T Z(t+s)> = Omega C^s`.
//!
//! Transfer entropy `X -> Y` with a `k`-step target history is the
//! four-log-determinant combination
//!
//! ```text
//! T = 1/2 ( ln|Om(Y,Yk)| - ln|Om(Yk)| - ln|Om(X,Y,Yk)| + ln|Om(X,Yk)| )
//! ```
//!
//! evaluated either directly ([`te_exact`]) or through the alternating trace
//! expansion of each log-determinant ([`te_trace_series`]).

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::netgen::{spectral_radius, WeightedAdjacency};

pub const DEFAULT_SERIES_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_TERMS: usize = 100_000;
/// Couplings with spectral radius above `1 - STATIONARITY_MARGIN` are rejected.
pub const STATIONARITY_MARGIN: f64 = 1e-6;
pub const DEFAULT_EMBEDDING: usize = 14;
/// Negative TE above this floor is rounding noise and clamps to zero.
pub const NEGATIVE_TE_FLOOR: f64 = -1e-10;

/// Target history length `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EmbeddingSpec(usize);

impl EmbeddingSpec {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k", "embedding length must be at least 1"));
        }
        Ok(Self(k))
    }

    pub fn k(self) -> usize {
        self.0
    }
}

impl Default for EmbeddingSpec {
    fn default() -> Self {
        Self(DEFAULT_EMBEDDING)
    }
}

/// Solved `Omega` plus a cache of lagged covariances `Omega C^s`.
#[derive(Debug, Clone)]
pub struct StationaryCovariance {
    coupling: DMatrix<f64>,
    lags: Vec<DMatrix<f64>>,
    residual: f64,
    terms: usize,
}

impl StationaryCovariance {
    /// Sum the covariance series until a term's max-norm drops below `tol`.
    pub fn solve(adj: &WeightedAdjacency, tol: f64, max_terms: usize) -> Result<Self> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::invalid("tol", "must be positive"));
        }
        let limit = 1.0 - STATIONARITY_MARGIN;
        let radius = spectral_radius(adj)?;
        if radius > limit {
            return Err(Error::NonStationary { radius, limit });
        }
        let c = adj.weights();
        let n = adj.n();
        let mut omega = DMatrix::<f64>::identity(n, n);
        let mut power = c.clone();
        let mut terms = 1;
        loop {
            if terms > max_terms {
                return Err(Error::NonConvergence {
                    what: "stationary covariance series",
                    iterations: max_terms,
                });
            }
            let term = power.tr_mul(&power);
            omega += &term;
            terms += 1;
            if term.amax() < tol {
                break;
            }
            power = &power * c;
        }
        let residual = fixed_point_residual(&omega, c);
        Ok(Self {
            coupling: c.clone(),
            lags: vec![omega],
            residual,
            terms,
        })
    }

    pub fn omega(&self) -> &DMatrix<f64> {
        &self.lags[0]
    }

    pub fn n(&self) -> usize {
        self.coupling.nrows()
    }

    /// `max |Omega - I - C^T Omega C|` of the solved matrix.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Number of series terms summed, the identity included.
    pub fn terms(&self) -> usize {
        self.terms
    }

    /// Make `Omega(0..=max_lag)` available through [`Self::lag`].
    pub fn ensure_lags(&mut self, max_lag: usize) {
        while self.lags.len() <= max_lag {
            let next = self.lags.last().unwrap() * &self.coupling;
            self.lags.push(next);
        }
    }

    /// `Omega(s) = Omega C^s`, computed and cached on first use.
    pub fn lagged(&mut self, s: usize) -> &DMatrix<f64> {
        self.ensure_lags(s);
        &self.lags[s]
    }

    /// Cached lag, if already computed.
    pub fn lag(&self, s: usize) -> Option<&DMatrix<f64>> {
        self.lags.get(s)
    }

    pub fn max_cached_lag(&self) -> usize {
        self.lags.len() - 1
    }
}

pub fn stationary_covariance(
    adj: &WeightedAdjacency,
    tol: f64,
    max_terms: usize,
) -> Result<StationaryCovariance> {
    StationaryCovariance::solve(adj, tol, max_terms)
}

pub fn lagged_covariance(cov: &mut StationaryCovariance, s: usize) -> DMatrix<f64> {
    cov.lagged(s).clone()
}

pub fn fixed_point_residual(omega: &DMatrix<f64>, c: &DMatrix<f64>) -> f64 {
    let n = omega.nrows();
    (omega - DMatrix::<f64>::identity(n, n) - c.tr_mul(omega) * c).amax()
}

/// `ln det` of a symmetric positive-definite matrix via Cholesky.
pub fn log_det_pd(sigma: &DMatrix<f64>, what: &'static str) -> Result<f64> {
    if sigma.nrows() != sigma.ncols() || sigma.nrows() == 0 {
        return Err(Error::invalid("sigma", "expected a non-empty square matrix"));
    }
    let scale = sigma.amax().max(1.0);
    if (sigma - sigma.transpose()).amax() > 1e-10 * scale {
        return Err(Error::NotPositiveDefinite { what });
    }
    let chol = Cholesky::new(sigma.clone()).ok_or(Error::NotPositiveDefinite { what })?;
    let l = chol.l_dirty();
    let mut acc = 0.0;
    for i in 0..sigma.nrows() {
        let d = l[(i, i)];
        if d.is_nan() || d <= 0.0 || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { what });
        }
        acc += d.ln();
    }
    Ok(2.0 * acc)
}

/// Differential entropy in nats: `1/2 ln((2 pi e)^d |sigma|)`.
pub fn gaussian_entropy(sigma: &DMatrix<f64>) -> Result<f64> {
    let d = sigma.nrows() as f64;
    let ld = log_det_pd(sigma, "covariance")?;
    Ok(0.5 * (d * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln() + ld))
}

/// Joint covariances over `(X(t), Y(t+1), Y(t), ..., Y(t-k+1))` and the
/// three principal submatrices used by the transfer entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct JointCovBlocks {
    /// `(X, Y, Y^(k))`, dimension `k + 2`.
    pub b_full: DMatrix<f64>,
    /// `(Y, Y^(k))`: `b_full` without the X row/column.
    pub b_y_past: DMatrix<f64>,
    /// `(Y^(k))`: `b_full` without the X and Y rows/columns.
    pub b_past: DMatrix<f64>,
    /// `(X, Y^(k))`: `b_full` without the Y row/column.
    pub b_x_past: DMatrix<f64>,
}

impl JointCovBlocks {
    /// Derive the submatrices from an assembled `(k+2)x(k+2)` joint covariance.
    pub fn from_full(b_full: DMatrix<f64>) -> Self {
        let b_y_past = b_full.clone().remove_row(0).remove_column(0);
        let b_past = b_y_past.clone().remove_row(0).remove_column(0);
        let b_x_past = b_full.clone().remove_row(1).remove_column(1);
        Self {
            b_full,
            b_y_past,
            b_past,
            b_x_past,
        }
    }

    pub fn k(&self) -> usize {
        self.b_full.nrows() - 2
    }

    /// The four-log-determinant transfer entropy, clamped at the numerical floor.
    pub fn transfer_entropy(&self) -> Result<f64> {
        let te = 0.5
            * (log_det_pd(&self.b_y_past, "Omega(Y, Y^(k))")?
                - log_det_pd(&self.b_past, "Omega(Y^(k))")?
                - log_det_pd(&self.b_full, "Omega(X, Y, Y^(k))")?
                + log_det_pd(&self.b_x_past, "Omega(X, Y^(k))")?);
        clamp_te(te)
    }

    /// Partial sums `S_1..=S_m_max` of the trace expansion of the
    /// four log-determinants.
    pub fn trace_series(&self, m_max: usize) -> Result<Vec<f64>> {
        let shifted = |m: &DMatrix<f64>| m - DMatrix::<f64>::identity(m.nrows(), m.ncols());
        // Signed combination: + (Y,Yk) - (Yk) - (X,Y,Yk) + (X,Yk).
        let blocks = [
            ("Omega(Y, Y^(k))", shifted(&self.b_y_past), 1.0),
            ("Omega(Y^(k))", shifted(&self.b_past), -1.0),
            ("Omega(X, Y, Y^(k))", shifted(&self.b_full), -1.0),
            ("Omega(X, Y^(k))", shifted(&self.b_x_past), 1.0),
        ];
        for (name, b, _) in &blocks {
            let radius = SymmetricEigen::new(b.clone()).eigenvalues.amax();
            if radius >= 1.0 {
                return Err(Error::SeriesDivergence { block: name, radius });
            }
        }
        let mut powers: Vec<DMatrix<f64>> = blocks.iter().map(|(_, b, _)| b.clone()).collect();
        let mut sums = Vec::with_capacity(m_max);
        let mut acc = 0.0;
        for m in 1..=m_max {
            if m > 1 {
                for (p, (_, b, _)) in powers.iter_mut().zip(&blocks) {
                    *p = &*p * b;
                }
            }
            let combo: f64 = powers
                .iter()
                .zip(&blocks)
                .map(|(p, (_, _, sign))| sign * p.trace())
                .sum();
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            acc += 0.5 * sign * combo / m as f64;
            if !acc.is_finite() {
                return Err(Error::SeriesDivergence {
                    block: "trace combination",
                    radius: f64::INFINITY,
                });
            }
            sums.push(acc);
        }
        Ok(sums)
    }
}

fn clamp_te(te: f64) -> Result<f64> {
    if te >= 0.0 {
        Ok(te)
    } else if te >= NEGATIVE_TE_FLOOR {
        Ok(0.0)
    } else {
        Err(Error::NegativeTransferEntropy { value: te })
    }
}

fn check_pair(n: usize, x: usize, y: usize) -> Result<()> {
    if x >= n || y >= n {
        return Err(Error::invalid("node", format!("({x}, {y}) out of range for n = {n}")));
    }
    if x == y {
        return Err(Error::invalid("target", "source and target must differ"));
    }
    Ok(())
}

/// Assemble the joint covariance of `(X(t), Y(t+1), Y(t), ..., Y(t-k+1))`.
///
/// Requires lags `0..=k` to be cached (see [`StationaryCovariance::ensure_lags`]).
pub fn build_joint_cov(
    cov: &StationaryCovariance,
    x: usize,
    y: usize,
    emb: EmbeddingSpec,
) -> Result<JointCovBlocks> {
    check_pair(cov.n(), x, y)?;
    let k = emb.k();
    if cov.max_cached_lag() < k {
        return Err(Error::invalid(
            "cov",
            format!("lags 0..={k} required, only 0..={} cached", cov.max_cached_lag()),
        ));
    }
    let lag = |s: usize| &cov.lags[s];
    let d = k + 2;
    let mut b = DMatrix::<f64>::zeros(d, d);
    b[(0, 0)] = lag(0)[(x, x)];
    b[(0, 1)] = lag(1)[(x, y)];
    b[(1, 0)] = b[(0, 1)];
    b[(1, 1)] = lag(0)[(y, y)];
    for j in 0..k {
        // cov(X(t), Y(t-j)) and cov(Y(t+1), Y(t-j)).
        b[(0, j + 2)] = lag(j)[(y, x)];
        b[(j + 2, 0)] = b[(0, j + 2)];
        b[(1, j + 2)] = lag(j + 1)[(y, y)];
        b[(j + 2, 1)] = b[(1, j + 2)];
        for i in 0..k {
            b[(i + 2, j + 2)] = lag(i.abs_diff(j))[(y, y)];
        }
    }
    Ok(JointCovBlocks::from_full(b))
}

/// Exact TE from an already solved covariance.
pub fn te_exact_from_cov(cov: &StationaryCovariance, x: usize, y: usize, emb: EmbeddingSpec) -> Result<f64> {
    build_joint_cov(cov, x, y, emb)?.transfer_entropy()
}

/// Exact pairwise TE `x -> y` in nats.
pub fn te_exact(adj: &WeightedAdjacency, x: usize, y: usize, emb: EmbeddingSpec, tol: f64) -> Result<f64> {
    check_pair(adj.n(), x, y)?;
    let mut cov = StationaryCovariance::solve(adj, tol, DEFAULT_MAX_TERMS)?;
    cov.ensure_lags(emb.k());
    te_exact_from_cov(&cov, x, y, emb)
}

/// Partial sums of the trace expansion of the TE, `S_1..=S_m_max`.
pub fn te_trace_series(
    adj: &WeightedAdjacency,
    x: usize,
    y: usize,
    emb: EmbeddingSpec,
    m_max: usize,
) -> Result<Vec<f64>> {
    check_pair(adj.n(), x, y)?;
    let mut cov = StationaryCovariance::solve(adj, DEFAULT_SERIES_TOL, DEFAULT_MAX_TERMS)?;
    cov.ensure_lags(emb.k());
    build_joint_cov(&cov, x, y, emb)?.trace_series(m_max)
}

/// Recover the coupling matrix as `Omega^{-1} Omega(1)`.
pub fn reconstruct_adjacency(omega: &DMatrix<f64>, omega_lag1: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if omega.shape() != omega_lag1.shape() || omega.nrows() != omega.ncols() {
        return Err(Error::invalid("omega_lag1", "shape mismatch with omega"));
    }
    let chol = Cholesky::new(omega.clone()).ok_or(Error::Singular { what: "Omega" })?;
    Ok(chol.solve(omega_lag1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::{gen_ba, gen_ws_ring};

    fn chain(c: f64) -> WeightedAdjacency {
        WeightedAdjacency::from_links(2, &[(0, 1, c)]).unwrap()
    }

    fn emb(k: usize) -> EmbeddingSpec {
        EmbeddingSpec::new(k).unwrap()
    }

    fn solve(adj: &WeightedAdjacency) -> StationaryCovariance {
        StationaryCovariance::solve(adj, DEFAULT_SERIES_TOL, DEFAULT_MAX_TERMS).unwrap()
    }

    #[test]
    fn zero_coupling_gives_identity() {
        let cov = solve(&WeightedAdjacency::zeros(4).unwrap());
        assert_eq!(cov.omega(), &DMatrix::<f64>::identity(4, 4));
    }

    #[test]
    fn self_loop_geometric_series() {
        let a = WeightedAdjacency::from_links(1, &[(0, 0, 0.5)]).unwrap();
        let cov = solve(&a);
        assert!((cov.omega()[(0, 0)] - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn chain_covariances() {
        let c = 0.3;
        let mut cov = solve(&chain(c));
        let expect = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0 + c * c]);
        assert!((cov.omega() - expect).amax() < 1e-15);
        let l1 = cov.lagged(1).clone();
        assert!((l1 - DMatrix::from_row_slice(2, 2, &[0.0, c, 0.0, 0.0])).amax() < 1e-15);
        assert_eq!(cov.lagged(2), &DMatrix::<f64>::zeros(2, 2));
        let l0 = cov.lagged(0).clone();
        assert_eq!(&l0, cov.omega());
    }

    #[test]
    fn stationarity_guard() {
        let a = WeightedAdjacency::from_links(1, &[(0, 0, 1.0)]).unwrap();
        match StationaryCovariance::solve(&a, 1e-12, 1000) {
            Err(Error::NonStationary { radius, .. }) => assert!((radius - 1.0).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn max_terms_exceeded() {
        let a = WeightedAdjacency::from_links(1, &[(0, 0, 0.99)]).unwrap();
        assert!(matches!(
            StationaryCovariance::solve(&a, 1e-12, 10),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn residual_small_on_generated_networks() {
        for seed in 0..5 {
            let cov = solve(&gen_ws_ring(100, 2, 0.3, 0.15, seed).unwrap());
            assert!(cov.residual() < 1e-10, "{}", cov.residual());
            assert!((cov.omega() - cov.omega().transpose()).amax() < 1e-12);
        }
    }

    #[test]
    fn entropy_values() {
        let h = |v: &[f64]| gaussian_entropy(&DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(v))).unwrap();
        let two_pi_e = 2.0 * std::f64::consts::PI * std::f64::consts::E;
        assert!((h(&[1.0]) - 1.418_938_533_204_672_7).abs() < 1e-12);
        assert!((h(&[1.0, 1.0, 1.0]) - 1.5 * two_pi_e.ln()).abs() < 1e-12);
        assert!((h(&[4.0]) - 0.5 * (4.0 * two_pi_e).ln()).abs() < 1e-12);
    }

    #[test]
    fn entropy_rejects_invalid() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(gaussian_entropy(&m), Err(Error::NotPositiveDefinite { .. })));
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(gaussian_entropy(&asym).is_err());
    }

    #[test]
    fn entropy_block_diagonal_additive() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
        let b = DMatrix::from_row_slice(1, 1, &[0.7]);
        let mut m = DMatrix::zeros(3, 3);
        m.view_mut((0, 0), (2, 2)).copy_from(&a);
        m[(2, 2)] = 0.7;
        let lhs = gaussian_entropy(&m).unwrap();
        let rhs = gaussian_entropy(&a).unwrap() + gaussian_entropy(&b).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn joint_blocks_zero_coupling() {
        let mut cov = solve(&WeightedAdjacency::zeros(3).unwrap());
        cov.ensure_lags(5);
        let b = build_joint_cov(&cov, 0, 1, emb(5)).unwrap();
        assert_eq!(b.b_full, DMatrix::<f64>::identity(7, 7));
    }

    #[test]
    fn joint_blocks_chain_k1() {
        let c = 0.2;
        let mut cov = solve(&chain(c));
        cov.ensure_lags(1);
        let b = build_joint_cov(&cov, 0, 1, emb(1)).unwrap();
        let s = 1.0 + c * c;
        let expect = DMatrix::from_row_slice(3, 3, &[1.0, c, 0.0, c, s, 0.0, 0.0, 0.0, s]);
        assert!((&b.b_full - expect).amax() < 1e-15);
        assert_eq!(b.b_y_past, b.b_full.clone().remove_row(0).remove_column(0));
    }

    #[test]
    fn joint_blocks_need_lags() {
        let cov = solve(&chain(0.1));
        assert!(build_joint_cov(&cov, 0, 1, emb(3)).is_err());
    }

    #[test]
    fn te_chain_closed_form() {
        for &c in &[0.05, 0.1, 0.3] {
            for k in [1usize, 2, 14] {
                let te = te_exact(&chain(c), 0, 1, emb(k), 1e-12).unwrap();
                assert!((te - 0.5 * (1.0 + c * c).ln()).abs() < 1e-12, "c={c} k={k}");
            }
        }
    }

    #[test]
    fn te_zero_when_uncoupled() {
        assert_eq!(te_exact(&WeightedAdjacency::zeros(3).unwrap(), 0, 1, emb(3), 1e-12).unwrap(), 0.0);
        // Nodes 3 and 4 are isolated from the chain 0 -> 1 -> 2.
        let a = WeightedAdjacency::from_links(5, &[(0, 1, 0.2), (1, 2, 0.2), (1, 1, 0.3), (3, 3, 0.4)]).unwrap();
        assert_eq!(te_exact(&a, 3, 4, emb(4), 1e-12).unwrap(), 0.0);
        assert_eq!(te_exact(&a, 4, 0, emb(4), 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn te_rejects_same_node() {
        assert!(te_exact(&chain(0.1), 1, 1, emb(1), 1e-12).is_err());
    }

    #[test]
    fn te_monotone_in_chain_weight() {
        let mut prev = f64::INFINITY;
        for i in (0..=10).rev() {
            let te = te_exact(&chain(0.05 * i as f64), 0, 1, emb(2), 1e-12).unwrap();
            assert!(te < prev || (te == 0.0 && prev == 0.0));
            prev = te;
        }
        assert_eq!(prev, 0.0);
    }

    #[test]
    fn te_matches_naive_determinants() {
        // LU determinants on small blocks as an independent route.
        let a = gen_ws_ring(12, 2, 0.5, 0.15, 3).unwrap();
        let mut cov = solve(&a);
        cov.ensure_lags(4);
        for (x, y) in a.linked_pairs() {
            let b = build_joint_cov(&cov, x, y, emb(4)).unwrap();
            let ld = |m: &DMatrix<f64>| m.clone().lu().determinant().ln();
            let naive = 0.5 * (ld(&b.b_y_past) - ld(&b.b_past) - ld(&b.b_full) + ld(&b.b_x_past));
            assert!((naive - b.transfer_entropy().unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn series_first_terms() {
        let s = te_trace_series(&chain(0.1), 0, 1, emb(1), 50).unwrap();
        assert!(s[0].abs() < 1e-15);
        assert!((s[1] - 0.005).abs() < 1e-15);
        assert!((s[49] - 0.5 * 1.01f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn series_m1_vanishes_everywhere() {
        let a = gen_ba(30, 0.1, 4).unwrap();
        for (x, y) in a.linked_pairs().into_iter().take(10) {
            let s = te_trace_series(&a, x, y, emb(5), 1).unwrap();
            assert!(s[0].abs() < 1e-13);
        }
    }

    #[test]
    fn series_converges_to_exact() {
        let a = gen_ws_ring(30, 2, 0.25, 0.15, 2).unwrap();
        for &(x, y) in a.linked_pairs().iter().take(8) {
            // Tail decays like rho^m / m; rho reaches about 0.97 on some links here.
            let s = te_trace_series(&a, x, y, emb(6), 5000).unwrap();
            let exact = te_exact(&a, x, y, emb(6), 1e-12).unwrap();
            assert!((s[4999] - exact).abs() < 1e-12, "{x}->{y}: {} vs {exact}", s[4999]);
            assert!((s[4999] - exact).abs() <= (s[99] - exact).abs());
        }
    }

    #[test]
    fn series_divergence_detected() {
        let blocks = JointCovBlocks::from_full(DMatrix::from_row_slice(
            3,
            3,
            &[1.0, 0.9, 0.9, 0.9, 3.0, 0.0, 0.9, 0.0, 1.0],
        ));
        assert!(matches!(blocks.trace_series(10), Err(Error::SeriesDivergence { .. })));
    }

    #[test]
    fn reconstruct_identity_and_chain() {
        let r = reconstruct_adjacency(&DMatrix::identity(3, 3), &DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(r, DMatrix::zeros(3, 3));
        let a = chain(0.4);
        let mut cov = solve(&a);
        let l1 = cov.lagged(1).clone();
        let r = reconstruct_adjacency(cov.omega(), &l1).unwrap();
        assert!((r - a.weights()).amax() < 1e-12);
    }

    #[test]
    fn reconstruct_singular() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            reconstruct_adjacency(&m, &DMatrix::zeros(2, 2)),
            Err(Error::Singular { .. })
        ));
    }
}
