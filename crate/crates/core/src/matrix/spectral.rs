//! Dense symmetric eigendecomposition and the spectral side of the
//! mean-field diagnostics.
//!
//! The eigensolver is the cyclic Jacobi rotation scheme: dependency-free,
//! quadratically convergent, and entirely adequate at desk scale. Sweeps stop
//! once the off-diagonal Frobenius mass drops below 1e-12 times the input
//! Frobenius norm.

use serde::Serialize;

use crate::error::{Error, Result};

use super::{row_sum_summary, CouplingMatrix};

const OFF_DIAGONAL_FACTOR: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// All eigenvalues of a symmetric matrix, sorted ascending.
pub fn symmetric_eigenvalues(a: &CouplingMatrix) -> Result<Vec<f64>> {
    let n = a.n();
    let mut m: Vec<f64> = (0..n * n).map(|idx| a.get(idx / n, idx % n)).collect();
    let threshold = OFF_DIAGONAL_FACTOR * a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m, n) <= threshold {
            let mut eig: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
            eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(eig);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, n, p, q);
            }
        }
    }
    if off_diagonal_norm(&m, n) <= threshold {
        let mut eig: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
        return Ok(eig);
    }
    Err(Error::EigenNoConvergence { sweeps: MAX_SWEEPS })
}

fn off_diagonal_norm(m: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                let v = m[p * n + q];
                sum += v * v;
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation annihilating m[p][q], applied to both triangles.
fn rotate(m: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = m[p * n + p];
    let aqq = m[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    // smaller-magnitude root of t^2 + 2 theta t - 1 = 0
    let t = if theta.abs() > 1e150 {
        // asymptotic form; avoids overflow in theta^2
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    m[p * n + p] = app - t * apq;
    m[q * n + q] = aqq + t * apq;
    m[p * n + q] = 0.0;
    m[q * n + p] = 0.0;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[k * n + p];
        let akq = m[k * n + q];
        let new_kp = akp - s * (akq + tau * akp);
        let new_kq = akq + s * (akp - tau * akq);
        m[k * n + p] = new_kp;
        m[p * n + k] = new_kp;
        m[k * n + q] = new_kq;
        m[q * n + k] = new_kq;
    }
}

/// Spectral summary of a coupling matrix at resolution `epsilon`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralDiagnostics {
    pub epsilon: f64,
    /// Eigenvalues sorted ascending.
    pub eigenvalues: Vec<f64>,
    /// tr(A^2)/n from the entries (checked against the spectrum in tests).
    pub trace_sq_over_n: f64,
    /// Count of |lambda| > epsilon/2.
    pub n_big: usize,
    /// Sizes of the magnitude level sets: index 0 covers (epsilon/2, 1],
    /// index k >= 1 covers (2^{k-1}, 2^k], up to ceil(log2 sqrt(n)).
    pub level_set_sizes: Vec<usize>,
    /// Per-site upper bound on log(net size)/n from the level-set counting
    /// bound. An upper bound, not a tight value.
    pub net_log_size_bound: f64,
    pub lambda_max_abs: f64,
    pub row_sum_mean: f64,
    /// Fraction of rows with |R(i) - 1| > row_sum_delta.
    pub row_sum_deviation_fraction: f64,
    pub row_sum_delta: f64,
}

pub fn spectral_diagnostics(
    a: &CouplingMatrix,
    epsilon: f64,
    row_sum_delta: f64,
) -> Result<SpectralDiagnostics> {
    if epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let n = a.n();
    let eigenvalues = symmetric_eigenvalues(a)?;
    let lambda_max_abs = eigenvalues.iter().fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let n_big = eigenvalues
        .iter()
        .filter(|&&l| l.abs() > epsilon / 2.0)
        .count();

    let levels = level_count(n);
    let mut level_set_sizes = vec![0usize; levels + 1];
    for &l in &eigenvalues {
        let mag = l.abs();
        if mag > epsilon / 2.0 && mag <= 1.0 {
            level_set_sizes[0] += 1;
        }
        for k in 1..=levels {
            let lo = (2.0f64).powi(k as i32 - 1);
            let hi = (2.0f64).powi(k as i32);
            if mag > lo && mag <= hi {
                level_set_sizes[k] += 1;
            }
        }
    }

    let net_log_size_bound = net_bound(&level_set_sizes, epsilon, n);
    let rows = row_sum_summary(a, row_sum_delta);

    Ok(SpectralDiagnostics {
        epsilon,
        eigenvalues,
        trace_sq_over_n: a.trace_sq_over_n(),
        n_big,
        level_set_sizes,
        net_log_size_bound,
        lambda_max_abs,
        row_sum_mean: rows.mean,
        row_sum_deviation_fraction: rows.deviation_fraction,
        row_sum_delta,
    })
}

/// ceil(log2 sqrt(n)).
fn level_count(n: usize) -> usize {
    let mut levels = 0usize;
    // smallest l with 4^l >= n, i.e. 2^l >= sqrt(n)
    while (1u128 << (2 * levels)) < n as u128 {
        levels += 1;
    }
    levels
}

/// Upper bound on log |net| / n.
///
/// Each level set I_k is covered by a ball net whose size obeys
/// |C_k(j)| <= max{1, (6/eps * 2^{k+j} / sqrt(|I_k|))^{|I_k|}}, and the
/// admissible radius exponents satisfy sum_k 4^{j_k} <= 5n. The bound is
/// log(#admissible assignments) plus the largest total log-size over them.
fn net_bound(level_set_sizes: &[usize], epsilon: f64, n: usize) -> f64 {
    let levels = level_set_sizes.len() - 1;
    let nonempty: Vec<(usize, usize)> = level_set_sizes
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0)
        .map(|(k, &s)| (k, s))
        .collect();
    if nonempty.is_empty() {
        return 0.0;
    }
    let empty_slots = (level_set_sizes.len() - nonempty.len()) as u128;
    let budget = (5 * n as u128).saturating_sub(empty_slots);

    // log |C_k(j)| bound for each nonempty level and each radius exponent j
    let weights: Vec<Vec<f64>> = nonempty
        .iter()
        .map(|&(k, size)| {
            (0..=levels)
                .map(|j| {
                    let log_term = (6.0 / epsilon).ln() + ((k + j) as f64) * std::f64::consts::LN_2
                        - 0.5 * (size as f64).ln();
                    size as f64 * log_term.max(0.0)
                })
                .collect()
        })
        .collect();

    let mut count: u128 = 0;
    let mut best = f64::NEG_INFINITY;
    search(&weights, levels, 0, budget, 0.0, &mut count, &mut best);
    if count == 0 {
        // no admissible assignment at all; the net degenerates to a point
        return 0.0;
    }
    ((count as f64).ln() + best.max(0.0)) / n as f64
}

fn search(
    weights: &[Vec<f64>],
    levels: usize,
    slot: usize,
    budget: u128,
    acc: f64,
    count: &mut u128,
    best: &mut f64,
) {
    if slot == weights.len() {
        *count += 1;
        if acc > *best {
            *best = acc;
        }
        return;
    }
    for j in 0..=levels {
        let cost = 1u128 << (2 * j);
        if cost > budget {
            break;
        }
        search(
            weights,
            levels,
            slot + 1,
            budget - cost,
            acc + weights[slot][j],
            count,
            best,
        );
    }
}
