//! Network topologies: preferential-attachment and ring/rewiring generators,
//! degree bookkeeping, spectral radius and the plain-text network format.
//!
//! Weights follow the VAR convention: entry `(i, j)` is the weight of the
//! directed link `i -> j`, so rows are sources and columns are targets.
//! Node indices are 0-based everywhere, including files.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Dense weighted coupling matrix, row = source, column = target.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedAdjacency {
    weights: DMatrix<f64>,
}

impl WeightedAdjacency {
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        if weights.nrows() == 0 || weights.nrows() != weights.ncols() {
            return Err(Error::invalid(
                "weights",
                format!("expected a non-empty square matrix, got {}x{}", weights.nrows(), weights.ncols()),
            ));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("weights", "all entries must be finite"));
        }
        Ok(Self { weights })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "node count must be at least 1"));
        }
        Ok(Self {
            weights: DMatrix::zeros(n, n),
        })
    }

    /// Build from `(source, target, weight)` triples; later duplicates overwrite earlier ones.
    pub fn from_links(n: usize, links: &[(usize, usize, f64)]) -> Result<Self> {
        let mut adj = Self::zeros(n)?;
        for &(src, dst, w) in links {
            adj.set_weight(src, dst, w)?;
        }
        Ok(adj)
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn into_weights(self) -> DMatrix<f64> {
        self.weights
    }

    #[inline]
    pub fn weight(&self, src: usize, dst: usize) -> f64 {
        self.weights[(src, dst)]
    }

    pub fn set_weight(&mut self, src: usize, dst: usize, w: f64) -> Result<()> {
        let n = self.n();
        if src >= n || dst >= n {
            return Err(Error::invalid("link", format!("({src}, {dst}) out of range for n = {n}")));
        }
        if !w.is_finite() {
            return Err(Error::invalid("weight", format!("non-finite weight {w}")));
        }
        self.weights[(src, dst)] = w;
        Ok(())
    }

    /// Copy with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            weights: &self.weights * factor,
        }
    }

    /// Nonzero entries as `(source, target, weight)`, sorted by `(source, target)`.
    pub fn links(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for src in 0..n {
            for dst in 0..n {
                let w = self.weights[(src, dst)];
                if w != 0.0 {
                    out.push((src, dst, w));
                }
            }
        }
        out
    }

    /// Ordered pairs `(x, y)` with `x != y` and a nonzero link `x -> y`.
    pub fn linked_pairs(&self) -> Vec<(usize, usize)> {
        self.links()
            .into_iter()
            .filter(|&(s, d, _)| s != d)
            .map(|(s, d, _)| (s, d))
            .collect()
    }

    /// Sources with a nonzero link into `target`, ascending, self-loop included.
    pub fn parents(&self, target: usize) -> Vec<usize> {
        (0..self.n())
            .filter(|&i| self.weights[(i, target)] != 0.0)
            .collect()
    }

    /// Relabel nodes so that old node `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::invalid("perm", "not a permutation of the node set"));
        }
        let mut w = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                w[(perm[i], perm[j])] = self.weights[(i, j)];
            }
        }
        Ok(Self { weights: w })
    }

    pub fn max_abs_weight(&self) -> f64 {
        self.weights.amax()
    }
}

/// Per-node link counts. Degrees count every nonzero entry, self-loops
/// included; `self_loop` records which nodes carry one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub in_degree: Vec<usize>,
    pub out_degree: Vec<usize>,
    pub self_loop: Vec<bool>,
}

impl DegreeProfile {
    /// Number of incoming links from nodes other than `node`.
    pub fn non_self_in_degree(&self, node: usize) -> usize {
        self.in_degree[node] - usize::from(self.self_loop[node])
    }

    pub fn non_self_out_degree(&self, node: usize) -> usize {
        self.out_degree[node] - usize::from(self.self_loop[node])
    }
}

pub fn degree_profile(adj: &WeightedAdjacency) -> DegreeProfile {
    let n = adj.n();
    let mut in_degree = vec![0; n];
    let mut out_degree = vec![0; n];
    let mut self_loop = vec![false; n];
    for (src, dst, _) in adj.links() {
        out_degree[src] += 1;
        in_degree[dst] += 1;
        if src == dst {
            self_loop[src] = true;
        }
    }
    DegreeProfile {
        in_degree,
        out_degree,
        self_loop,
    }
}

/// Undirected scale-free network grown by preferential attachment.
///
/// Starts from node 0 with a self-loop. Each later node attaches to one
/// existing node chosen with probability proportional to its total degree
/// (in + out, the self-loop counted once), links to it in both directions,
/// and gets its own self-loop. All links carry `weight`.
pub fn gen_ba(n: usize, weight: f64, seed: u64) -> Result<WeightedAdjacency> {
    if n == 0 {
        return Err(Error::invalid("n", "node count must be at least 1"));
    }
    if !weight.is_finite() {
        return Err(Error::invalid("weight", "must be finite"));
    }
    let mut rng = rng_from_seed(seed);
    let mut adj = WeightedAdjacency::zeros(n)?;
    // One stub per unit of degree; a uniform stub draw is a degree-proportional node draw.
    let mut stubs: Vec<usize> = Vec::with_capacity(3 * n);
    adj.weights[(0, 0)] = weight;
    stubs.push(0);
    for node in 1..n {
        let partner = stubs[rng.random_range(0..stubs.len())];
        adj.weights[(node, partner)] = weight;
        adj.weights[(partner, node)] = weight;
        adj.weights[(node, node)] = weight;
        stubs.extend_from_slice(&[partner, partner, node, node, node]);
    }
    Ok(adj)
}

/// Directed ring lattice with source rewiring.
///
/// Node `j` starts with incoming links from `j ± 1 ..= j ± neighbors_per_side`
/// (mod `n`) plus a self-loop. Each non-self incoming link independently has
/// its source replaced, with probability `gamma`, by a uniformly drawn node
/// that is neither `j` nor a current source of `j`. In-degrees are therefore
/// preserved exactly. Redraws are capped at `100 * n` per link.
pub fn gen_ws_ring(
    n: usize,
    neighbors_per_side: usize,
    gamma: f64,
    weight: f64,
    seed: u64,
) -> Result<WeightedAdjacency> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::invalid("gamma", format!("must lie in [0, 1], got {gamma}")));
    }
    if 2 * neighbors_per_side + 1 > n {
        return Err(Error::invalid(
            "neighbors_per_side",
            format!("2*{neighbors_per_side}+1 exceeds node count {n}"),
        ));
    }
    if !weight.is_finite() {
        return Err(Error::invalid("weight", "must be finite"));
    }
    let mut rng = rng_from_seed(seed);
    let max_retries = 100 * n;
    let k = neighbors_per_side;
    let mut adj = WeightedAdjacency::zeros(n)?;
    for target in 0..n {
        // Current sources of `target`, including itself so it is never drawn.
        let mut is_source = vec![false; n];
        is_source[target] = true;
        let offsets: Vec<usize> = (1..=k).map(|d| n - d).chain(1..=k).collect();
        let mut sources: Vec<usize> = offsets.iter().map(|&d| (target + d) % n).collect();
        for &s in &sources {
            is_source[s] = true;
        }
        for slot in 0..sources.len() {
            if !rng.random_bool(gamma) {
                continue;
            }
            let mut retries = 0;
            let new_src = loop {
                let cand = rng.random_range(0..n);
                if !is_source[cand] {
                    break cand;
                }
                retries += 1;
                if retries >= max_retries {
                    return Err(Error::DegenerateRewiring { target, retries });
                }
            };
            is_source[sources[slot]] = false;
            is_source[new_src] = true;
            sources[slot] = new_src;
        }
        for &s in &sources {
            adj.weights[(s, target)] = weight;
        }
        adj.weights[(target, target)] = weight;
    }
    Ok(adj)
}

/// Largest eigenvalue modulus of the coupling matrix.
///
/// Uses the real Schur form; matrices on which the unshifted iteration stalls
/// (cyclic permutation structure, for instance) fall back to Gelfand's formula.
pub fn spectral_radius(adj: &WeightedAdjacency) -> Result<f64> {
    let n = adj.n();
    if adj.weights.iter().all(|&w| w == 0.0) {
        return Ok(0.0);
    }
    match adj.weights.clone().try_schur(f64::EPSILON, 1000 * n.max(10)) {
        Some(schur) => Ok(schur
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)),
        None => {
            log::debug!("Schur iteration stalled on {n} nodes, using repeated squaring");
            Ok(gelfand_radius(&adj.weights))
        }
    }
}

/// `lim ||C^m||^(1/m)` along `m = 2^j`, renormalizing after every squaring.
fn gelfand_radius(m: &DMatrix<f64>) -> f64 {
    let mut a = m.clone();
    let mut log_rho = 0.0;
    let mut weight = 1.0;
    for _ in 0..64 {
        let norm = a.norm();
        if norm == 0.0 {
            return 0.0;
        }
        log_rho += weight * norm.ln();
        a /= norm;
        a = &a * &a;
        weight *= 0.5;
    }
    log_rho.exp()
}

/// Serialize in the plain-text network format.
pub fn format_network(adj: &WeightedAdjacency) -> String {
    let mut out = format!("n {}\n", adj.n());
    for (src, dst, w) in adj.links() {
        let _ = writeln!(out, "{src} {dst} {w:.16e}");
    }
    out
}

pub fn parse_network(text: &str) -> Result<WeightedAdjacency> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "missing `n <count>` header".into(),
    })?;
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["n", count] => count.parse::<usize>().map_err(|e| Error::Parse {
            line: hline,
            reason: format!("bad node count: {e}"),
        })?,
        _ => {
            return Err(Error::Parse {
                line: hline,
                reason: format!("expected `n <count>`, got `{header}`"),
            })
        }
    };
    if n == 0 {
        return Err(Error::Parse {
            line: hline,
            reason: "node count must be at least 1".into(),
        });
    }
    let mut adj = WeightedAdjacency::zeros(n)?;
    let mut seen = std::collections::HashSet::new();
    for (line, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        let [src, dst, w] = fields.as_slice() else {
            return Err(Error::Parse {
                line,
                reason: format!("expected `src dst weight`, got `{l}`"),
            });
        };
        let parse_idx = |s: &str| -> Result<usize> {
            let idx = s.parse::<usize>().map_err(|e| Error::Parse {
                line,
                reason: format!("bad node index `{s}`: {e}"),
            })?;
            if idx >= n {
                return Err(Error::Parse {
                    line,
                    reason: format!("node index {idx} out of range for n = {n}"),
                });
            }
            Ok(idx)
        };
        let (src, dst) = (parse_idx(src)?, parse_idx(dst)?);
        let w: f64 = w.parse().map_err(|e| Error::Parse {
            line,
            reason: format!("bad weight `{w}`: {e}"),
        })?;
        if !w.is_finite() {
            return Err(Error::Parse {
                line,
                reason: format!("non-finite weight `{w}`"),
            });
        }
        if !seen.insert((src, dst)) {
            return Err(Error::Parse {
                line,
                reason: format!("duplicate link {src} -> {dst}"),
            });
        }
        adj.weights[(src, dst)] = w;
    }
    Ok(adj)
}

pub fn write_network(adj: &WeightedAdjacency, path: impl AsRef<Path>) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(format_network(adj).as_bytes())?;
    Ok(())
}

pub fn read_network(path: impl AsRef<Path>) -> Result<WeightedAdjacency> {
    parse_network(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Average local clustering of the undirected skeleton (self-loops ignored),
    /// by direct triangle counting.
    fn average_clustering(adj: &WeightedAdjacency) -> f64 {
        let n = adj.n();
        let linked = |a: usize, b: usize| a != b && (adj.weight(a, b) != 0.0 || adj.weight(b, a) != 0.0);
        let mut total = 0.0;
        for v in 0..n {
            let nb: Vec<usize> = (0..n).filter(|&u| linked(u, v)).collect();
            if nb.len() < 2 {
                continue;
            }
            let mut tri = 0;
            for a in 0..nb.len() {
                for b in a + 1..nb.len() {
                    if linked(nb[a], nb[b]) {
                        tri += 1;
                    }
                }
            }
            total += 2.0 * tri as f64 / (nb.len() * (nb.len() - 1)) as f64;
        }
        total / n as f64
    }

    #[test]
    fn ba_single_node() {
        let a = gen_ba(1, 0.1, 3).unwrap();
        assert_eq!(a.links(), vec![(0, 0, 0.1)]);
    }

    #[test]
    fn ba_three_nodes_structure() {
        for seed in 0..20 {
            let a = gen_ba(3, 0.1, seed).unwrap();
            assert_eq!(a.links().len(), 7);
            let p = degree_profile(&a);
            assert!(p.self_loop.iter().all(|&s| s));
            assert!(a.links().iter().all(|&(_, _, w)| w == 0.1));
        }
    }

    #[test]
    fn ba_counts_and_symmetry() {
        for seed in 0..10 {
            let a = gen_ba(100, 0.1, seed).unwrap();
            let links = a.links();
            assert_eq!(links.iter().filter(|l| l.0 == l.1).count(), 100);
            assert_eq!(links.iter().filter(|l| l.0 != l.1).count(), 2 * 99);
            assert_eq!(a.weights(), &a.weights().transpose());
        }
    }

    #[test]
    fn ba_heavy_tail_over_seeds() {
        // Direct simulation of the attachment rule over many seeds.
        let seeds = 2000;
        let mut max_in = Vec::with_capacity(seeds);
        for seed in 0..seeds as u64 {
            let p = degree_profile(&gen_ba(100, 0.1, seed).unwrap());
            max_in.push((0..100).map(|i| p.non_self_in_degree(i)).max().unwrap());
        }
        max_in.sort_unstable();
        let median = max_in[seeds / 2];
        assert!(median >= 10, "median max in-degree {median}");
    }

    #[test]
    fn ws_ring_gamma_zero_neighbourhood() {
        let a = gen_ws_ring(100, 2, 0.0, 0.15, 1).unwrap();
        assert_eq!(a.parents(0), vec![0, 1, 2, 98, 99]);
        let p = degree_profile(&a);
        assert!((0..100).all(|i| p.non_self_in_degree(i) == 4 && p.self_loop[i]));
    }

    #[test]
    fn ws_ring_in_degree_preserved() {
        for &gamma in &[0.0, 0.3, 0.5, 1.0] {
            for seed in 0..5 {
                let a = gen_ws_ring(100, 2, gamma, 0.15, seed).unwrap();
                let p = degree_profile(&a);
                assert!((0..100).all(|i| p.non_self_in_degree(i) == 4 && p.self_loop[i]));
            }
        }
    }

    #[test]
    fn ws_ring_rewiring_lowers_clustering() {
        let c0 = average_clustering(&gen_ws_ring(100, 2, 0.0, 0.15, 5).unwrap());
        for seed in 0..5 {
            let c = average_clustering(&gen_ws_ring(100, 2, 0.5, 0.15, seed).unwrap());
            assert!(c < c0, "{c} !< {c0}");
        }
    }

    #[test]
    fn ws_ring_too_dense_fails() {
        // Every node already feeds every other: no admissible new source exists.
        assert!(matches!(
            gen_ws_ring(5, 2, 1.0, 0.1, 0),
            Err(Error::DegenerateRewiring { .. })
        ));
        assert!(gen_ws_ring(4, 2, 0.0, 0.1, 0).is_err());
        assert!(gen_ws_ring(10, 2, 1.5, 0.1, 0).is_err());
    }

    #[test]
    fn seeds_reproduce() {
        assert_eq!(gen_ba(50, 0.1, 9).unwrap(), gen_ba(50, 0.1, 9).unwrap());
        assert_ne!(gen_ba(50, 0.1, 9).unwrap(), gen_ba(50, 0.1, 10).unwrap());
        assert_eq!(
            gen_ws_ring(50, 2, 0.4, 0.1, 9).unwrap(),
            gen_ws_ring(50, 2, 0.4, 0.1, 9).unwrap()
        );
        assert_ne!(
            gen_ws_ring(50, 2, 0.4, 0.1, 9).unwrap(),
            gen_ws_ring(50, 2, 0.4, 0.1, 10).unwrap()
        );
    }

    #[test]
    fn radius_simple_cases() {
        assert_eq!(spectral_radius(&WeightedAdjacency::zeros(4).unwrap()).unwrap(), 0.0);
        let d = WeightedAdjacency::new(DMatrix::from_diagonal_element(5, 5, 0.5)).unwrap();
        assert!((spectral_radius(&d).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn radius_directed_ring() {
        // Circulant: eigenvalues w * exp(2 pi i k / n), all of modulus w.
        for n in [3usize, 7, 20] {
            let links: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 0.3)).collect();
            let a = WeightedAdjacency::from_links(n, &links).unwrap();
            let r = spectral_radius(&a).unwrap();
            assert!((r - 0.3).abs() / 0.3 < 1e-9, "n={n}: {r}");
        }
    }

    #[test]
    fn gelfand_agrees_with_schur() {
        let jordan = DMatrix::from_row_slice(2, 2, &[0.5, 1.0, 0.0, 0.5]);
        assert!((gelfand_radius(&jordan) - 0.5).abs() < 1e-12);
        let nilpotent = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(gelfand_radius(&nilpotent), 0.0);
        for seed in 0..3 {
            let a = gen_ws_ring(25, 2, 0.7, 0.15, seed).unwrap();
            let g = gelfand_radius(a.weights());
            assert!((g - spectral_radius(&a).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn radius_matches_power_iteration() {
        // Nonnegative matrices: Perron root via power iteration.
        for seed in 0..5 {
            let a = gen_ws_ring(30, 2, 0.5, 0.15, seed).unwrap();
            let m = a.weights();
            let mut v = nalgebra::DVector::from_element(30, 1.0);
            let mut lambda = 0.0;
            for _ in 0..2000 {
                let next = m.transpose() * &v;
                lambda = next.norm() / v.norm();
                v = next.normalize();
            }
            let r = spectral_radius(&a).unwrap();
            assert!((r - lambda).abs() / lambda < 1e-9, "{r} vs {lambda}");
        }
    }

    #[test]
    fn degree_profile_chain() {
        let a = WeightedAdjacency::from_links(2, &[(0, 1, 0.1)]).unwrap();
        let p = degree_profile(&a);
        assert_eq!(p.in_degree, vec![0, 1]);
        assert_eq!(p.out_degree, vec![1, 0]);
        assert_eq!(p.self_loop, vec![false, false]);
    }

    #[test]
    fn network_text_roundtrip() {
        let a = gen_ws_ring(20, 2, 0.5, 0.15 / 7.0, 3).unwrap();
        let b = parse_network(&format_network(&a)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn network_file_header_only() {
        let a = parse_network("n 5\n").unwrap();
        assert_eq!(a, WeightedAdjacency::zeros(5).unwrap());
    }

    #[test]
    fn network_file_errors() {
        assert!(parse_network("n 3\n0 3 0.1\n").is_err());
        assert!(parse_network("nodes 3\n").is_err());
        assert!(parse_network("").is_err());
        assert!(parse_network("n 3\n0 1\n").is_err());
        assert!(parse_network("n 3\n0 1 abc\n").is_err());
        assert!(parse_network("n 3\n0 1 0.1\n0 1 0.2\n").is_err());
        assert!(parse_network("n 3\n0 1 NaN\n").is_err());
    }

    #[test]
    fn network_file_format() {
        let a = WeightedAdjacency::from_links(3, &[(1, 0, 0.1), (0, 2, 0.5)]).unwrap();
        assert_eq!(
            format_network(&a),
            "n 3\n0 2 5.0000000000000000e-1\n1 0 1.0000000000000001e-1\n"
        );
    }
}
