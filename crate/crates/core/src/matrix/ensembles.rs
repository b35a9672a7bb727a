//! Generators for the standard coupling ensembles.
//!
//! Simple graphs carry the n/(2|E|) scaling, d-regular graphs 1/d,
//! Erdos-Renyi 1/(np), bi-regular bipartite graphs 1/(c+d), SK couplings
//! 1/sqrt(n), and Hopfield pattern correlations 1/n. The star graph can be
//! left raw to exhibit a matrix with two macroscopic eigenvalues.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

use super::{read_matrix, CouplingMatrix, ScalingTag};

/// Tagged descriptor of a coupling-matrix ensemble.
#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleSpec {
    /// Complete graph K_n, per-edge scaling (entries 1/(n-1)).
    Complete { n: usize },
    /// Circulant d-regular graph on n vertices, entries 1/d.
    RegularCirculant { n: usize, d: usize },
    /// d-dimensional hypercube on 2^d vertices, entries 1/d.
    Hypercube { d: usize },
    /// G(n, p) with entries 1/(np) on edges.
    ErdosRenyi { n: usize, p: f64, seed: u64 },
    /// K_{a,b} with entries 1/(a+b).
    CompleteBipartite { a: usize, b: usize },
    /// Deterministic bi-regular bipartite graph: left sizes a (degree c),
    /// right size b (degree ac/b), entries 1/(c + ac/b).
    BipartiteCirculant { a: usize, b: usize, c: usize },
    /// Star K_{1,n-1}; raw adjacency when `scaled` is false, per-edge scaling
    /// otherwise.
    Star { n: usize, scaled: bool },
    /// Sherrington-Kirkpatrick couplings Z(i,j)/sqrt(n), zero diagonal.
    Sk { n: usize, seed: u64 },
    /// Hopfield pattern matrix (1/n) sum_k eta_ik eta_jk with fair +-1 coins;
    /// the diagonal equals m/n.
    Hopfield { n: usize, m: usize, seed: u64 },
    /// Load from the dense/sparse matrix file format.
    FromFile { path: PathBuf },
}

pub fn generate(spec: &EnsembleSpec) -> Result<CouplingMatrix> {
    match *spec {
        EnsembleSpec::Complete { n } => complete(n),
        EnsembleSpec::RegularCirculant { n, d } => regular_circulant(n, d),
        EnsembleSpec::Hypercube { d } => hypercube(d),
        EnsembleSpec::ErdosRenyi { n, p, seed } => erdos_renyi(n, p, seed),
        EnsembleSpec::CompleteBipartite { a, b } => complete_bipartite(a, b),
        EnsembleSpec::BipartiteCirculant { a, b, c } => bipartite_circulant(a, b, c),
        EnsembleSpec::Star { n, scaled } => star(n, scaled),
        EnsembleSpec::Sk { n, seed } => sk(n, seed),
        EnsembleSpec::Hopfield { n, m, seed } => hopfield(n, m, seed),
        EnsembleSpec::FromFile { ref path } => read_matrix(path),
    }
}

fn complete(n: usize) -> Result<CouplingMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "complete graph needs n >= 2 (no edges means the per-edge scaling is undefined)".into(),
        ));
    }
    let mut a = CouplingMatrix::zeros(n, ScalingTag::PerEdge)?;
    let w = 1.0 / (n as f64 - 1.0); // n / (2 |E|) with |E| = n(n-1)/2
    for i in 0..n {
        for j in (i + 1)..n {
            a.set_sym(i, j, w);
        }
    }
    Ok(a)
}

fn regular_circulant(n: usize, d: usize) -> Result<CouplingMatrix> {
    if n < 2 || d == 0 || d >= n {
        return Err(Error::InvalidParameter(format!(
            "circulant graph needs 1 <= d < n, got n={n} d={d}"
        )));
    }
    if d % 2 == 1 && n % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "odd degree {d} needs an even vertex count, got n={n}"
        )));
    }
    let mut a = CouplingMatrix::zeros(n, ScalingTag::PerDegree)?;
    let w = 1.0 / d as f64;
    for i in 0..n {
        for k in 1..=(d / 2) {
            a.set_sym(i, (i + k) % n, w);
        }
        if d % 2 == 1 {
            a.set_sym(i, (i + n / 2) % n, w);
        }
    }
    Ok(a)
}

fn hypercube(d: usize) -> Result<CouplingMatrix> {
    if d == 0 || d > 11 {
        return Err(Error::InvalidParameter(format!(
            "hypercube dimension must be in 1..=11 (dense 2^d x 2^d storage), got {d}"
        )));
    }
    let n = 1usize << d;
    let mut a = CouplingMatrix::zeros(n, ScalingTag::PerDegree)?;
    let w = 1.0 / d as f64;
    for i in 0..n {
        for bit in 0..d {
            let j = i ^ (1 << bit);
            if j > i {
                a.set_sym(i, j, w);
            }
        }
    }
    Ok(a)
}

fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<CouplingMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter("Erdos-Renyi needs n >= 2".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "edge probability must lie in [0,1], got {p}"
        )));
    }
    let mut a = CouplingMatrix::zeros(n, ScalingTag::PerDegree)?;
    if p == 0.0 {
        return Ok(a); // no edges, nothing to scale
    }
    let mut rng = SplitMix64::new(seed);
    let w = 1.0 / (n as f64 * p);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.next_f64() < p {
                a.set_sym(i, j, w);
            }
        }
    }
    Ok(a)
}

fn complete_bipartite(a_size: usize, b_size: usize) -> Result<CouplingMatrix> {
    if a_size == 0 || b_size == 0 {
        return Err(Error::InvalidParameter(
            "bipartite sides must be nonempty".into(),
        ));
    }
    // side degrees: c = b_size on the left, d = a_size on the right
    let n = a_size + b_size;
    let mut a = CouplingMatrix::zeros(n, ScalingTag::Bipartite)?;
    let w = 1.0 / n as f64;
    for i in 0..a_size {
        for j in 0..b_size {
            a.set_sym(i, a_size + j, w);
        }
    }
    Ok(a)
}

fn bipartite_circulant(a_size: usize, b_size: usize, c: usize) -> Result<CouplingMatrix> {
    if a_size == 0 || b_size == 0 || c == 0 {
        return Err(Error::InvalidParameter(
            "bipartite circulant needs positive a, b, c".into(),
        ));
    }
    if c > b_size {
        return Err(Error::InvalidParameter(format!(
            "left degree c={c} cannot exceed the right side size b={b_size}"
        )));
    }
    if (a_size * c) % b_size != 0 {
        return Err(Error::InvalidParameter(format!(
            "a*c = {} is not divisible by b = {b_size}; no bi-regular graph exists",
            a_size * c
        )));
    }
    let d = a_size * c / b_size;
    let n = a_size + b_size;
    let mut a = CouplingMatrix::zeros(n, ScalingTag::Bipartite)?;
    let w = 1.0 / (c + d) as f64;
    // left vertex i covers the c consecutive right residues starting at i*c
    for i in 0..a_size {
        for t in 0..c {
            let j = (i * c + t) % b_size;
            a.set_sym(i, a_size + j, w);
        }
    }
    Ok(a)
}

fn star(n: usize, scaled: bool) -> Result<CouplingMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter("star graph needs n >= 2".into()));
    }
    let tag = if scaled {
        ScalingTag::PerEdge
    } else {
        ScalingTag::Raw
    };
    let mut a = CouplingMatrix::zeros(n, tag)?;
    let w = if scaled {
        n as f64 / (2.0 * (n as f64 - 1.0))
    } else {
        1.0
    };
    for leaf in 1..n {
        a.set_sym(0, leaf, w);
    }
    Ok(a)
}

fn sk(n: usize, seed: u64) -> Result<CouplingMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter("SK couplings need n >= 2".into()));
    }
    let mut a = CouplingMatrix::zeros(n, ScalingTag::Sk)?;
    let mut rng = SplitMix64::new(seed);
    let scale = 1.0 / (n as f64).sqrt();
    for i in 0..n {
        for j in (i + 1)..n {
            a.set_sym(i, j, scale * rng.next_gaussian());
        }
    }
    Ok(a)
}

fn hopfield(n: usize, m: usize, seed: u64) -> Result<CouplingMatrix> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter(
            "Hopfield needs positive n and m".into(),
        ));
    }
    let mut rng = SplitMix64::new(seed);
    let patterns: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..m).map(|_| rng.next_sign()).collect())
        .collect();
    let mut a = CouplingMatrix::zeros(n, ScalingTag::Hopfield)?;
    let inv_n = 1.0 / n as f64;
    for i in 0..n {
        for j in i..n {
            let dot: f64 = patterns[i]
                .iter()
                .zip(&patterns[j])
                .map(|(x, y)| x * y)
                .sum();
            a.set_sym(i, j, inv_n * dot);
        }
    }
    Ok(a)
}
