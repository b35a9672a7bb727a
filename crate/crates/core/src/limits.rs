//! Limiting formulas for asymptotically regular and bi-regular bipartite
//! ensembles: the one-dimensional Curie-Weiss variational problem, the
//! magnetization roots of m = tanh(beta m + B), the large-deviation rate
//! function with its minimizer set, and the bipartite fixed points.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{binary_entropy, softmax_in_place, x_log_x};
use crate::rng::SplitMix64;

/// Probability vector on the colors.
#[derive(Debug, Clone, Serialize)]
pub struct SimplexPoint {
    probs: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("empty probability vector".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidParameter(
                "probabilities must lie in [0, 1]".into(),
            ));
        }
        Ok(SimplexPoint { probs })
    }

    pub fn uniform(q: usize) -> Self {
        SimplexPoint {
            probs: vec![1.0 / q as f64; q],
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn q(&self) -> usize {
        self.probs.len()
    }

    /// mu_1 - mu_2 for two colors.
    pub fn magnetization(&self) -> Result<f64> {
        if self.probs.len() != 2 {
            return Err(Error::InvalidParameter(
                "magnetization needs exactly two colors".into(),
            ));
        }
        Ok(self.probs[0] - self.probs[1])
    }

    pub fn sup_distance(&self, other: &SimplexPoint) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Deduplicated minimizers of the rate function (equivalently, maximizers of
/// the one-dimensional variational objective with the sign flipped).
#[derive(Debug, Clone, Serialize)]
pub struct MinimizerSet {
    pub points: Vec<SimplexPoint>,
    pub rate_min: f64,
}

/// Rate function value and its centered version.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateValue {
    pub rate: f64,
    pub rate_tilde: f64,
}

/// Value and argmax set of the one-dimensional limit.
#[derive(Debug, Clone, Serialize)]
pub struct CwLimit {
    pub value: f64,
    pub argmax: MinimizerSet,
}

/// f(theta) = (beta/2) sum_r theta_r^2 + sum_r h_r theta_r
///          - sum_r theta_r log theta_r on the simplex.
fn simplex_objective(beta: f64, h: &[f64], probs: &[f64]) -> f64 {
    let mut value = 0.0;
    for (r, &p) in probs.iter().enumerate() {
        value += 0.5 * beta * p * p + h[r] * p - x_log_x(p);
    }
    value
}

const SELF_CONSISTENCY_ITERS: usize = 500;
const POLISH_ITERS: usize = 300;
const DEDUP_RADIUS: f64 = 1e-6;
const VALUE_WINDOW: f64 = 1e-8;
const MULTISTART_SEED: u64 = 0x9D2C_5680_CA87_3151;

/// Damped self-consistency theta <- softmax(beta theta + h) from multistart,
/// then an undamped polish. Returns (best value, deduplicated argmax list).
fn maximize_simplex(q: usize, beta: f64, h: &[f64]) -> (f64, Vec<SimplexPoint>) {
    let mut starts: Vec<Vec<f64>> = Vec::new();
    starts.push(vec![1.0 / q as f64; q]);
    for r in 0..q {
        // near-corner start at sup distance 1e-3 from the vertex
        let mut corner = vec![1e-3 / (q as f64 - 1.0); q];
        corner[r] = 1.0 - 1e-3;
        starts.push(corner);
    }
    let mut rng = SplitMix64::new(MULTISTART_SEED);
    for _ in 0..8 {
        starts.push(rng.next_simplex(q));
    }

    let mut candidates: Vec<(f64, Vec<f64>)> = Vec::new();
    for start in starts {
        let mut theta = start;
        let mut next = vec![0.0; q];
        for _ in 0..SELF_CONSISTENCY_ITERS {
            step(beta, h, &theta, &mut next);
            let mut change = 0.0f64;
            for r in 0..q {
                let mixed = 0.5 * theta[r] + 0.5 * next[r];
                change = change.max((mixed - theta[r]).abs());
                theta[r] = mixed;
            }
            if change < 1e-15 {
                break;
            }
        }
        for _ in 0..POLISH_ITERS {
            step(beta, h, &theta, &mut next);
            let mut change = 0.0f64;
            for r in 0..q {
                change = change.max((next[r] - theta[r]).abs());
                theta[r] = next[r];
            }
            if change < 1e-16 {
                break;
            }
        }
        candidates.push((simplex_objective(beta, h, &theta), theta));
    }

    let best = candidates
        .iter()
        .map(|(v, _)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut points: Vec<SimplexPoint> = Vec::new();
    // deterministic order for the reported set
    candidates.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    for (value, theta) in &candidates {
        if best - value <= VALUE_WINDOW {
            let point = SimplexPoint::new(theta.clone()).expect("softmax output is stochastic");
            if points.iter().all(|p| p.sup_distance(&point) > DEDUP_RADIUS) {
                points.push(point);
            }
        }
    }
    (best, points)
}

fn step(beta: f64, h: &[f64], theta: &[f64], out: &mut [f64]) {
    for (r, o) in out.iter_mut().enumerate() {
        *o = beta * theta[r] + h[r];
    }
    softmax_in_place(out);
}

/// Maximize (beta/2) sum theta^2 + sum h theta - sum theta log theta over the
/// simplex. This is the limiting log partition function per site on
/// asymptotically regular graphs.
pub fn cw_limit(q: usize, beta: f64, h: &[f64]) -> Result<CwLimit> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q must be >= 2, got {q}")));
    }
    if beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "the one-dimensional limit needs beta >= 0, got {beta}"
        )));
    }
    if h.len() != q {
        return Err(Error::InvalidParameter(format!(
            "field must have length {q}, got {}",
            h.len()
        )));
    }
    let (value, points) = maximize_simplex(q, beta, h);
    Ok(CwLimit {
        value,
        argmax: MinimizerSet {
            points,
            rate_min: -value,
        },
    })
}

/// The distinguished root m of m = tanh(beta m + B): the unique root with the
/// sign of B when B != 0, the unique positive root when B = 0 and beta > 1,
/// and 0 otherwise.
pub fn cw_magnetization(beta: f64, b: f64) -> Result<f64> {
    if beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "magnetization root needs beta >= 0, got {beta}"
        )));
    }
    if b == 0.0 {
        if beta <= 1.0 {
            return Ok(0.0);
        }
        return Ok(bisect_root(|m| (beta * m).tanh() - m, 1e-16, 1.0));
    }
    let magnitude = b.abs();
    let root = bisect_root(|m| (beta * m + magnitude).tanh() - m, 0.0, 1.0);
    Ok(if b > 0.0 { root } else { -root })
}

/// Bisection on [lo, hi] where g(lo) > 0 > g(hi); g has a single sign change.
fn bisect_root(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = g(mid);
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-17 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// I(mu) = sum_r (mu_r log mu_r - beta mu_r^2 / 2 - h_r mu_r), plus the
/// centered version against the minimum over the simplex.
pub fn ldp_rate(q: usize, beta: f64, h: &[f64], mu: &SimplexPoint) -> Result<RateValue> {
    if mu.q() != q {
        return Err(Error::InvalidParameter(format!(
            "point has {} colors, expected {q}",
            mu.q()
        )));
    }
    let minimizers = ldp_minimizers(q, beta, h)?;
    let rate = -simplex_objective(beta, h, mu.probs());
    Ok(RateValue {
        rate,
        rate_tilde: rate - minimizers.rate_min,
    })
}

/// Minimizer set of the rate function. Same optimization as [`cw_limit`]
/// with the opposite sign.
pub fn ldp_minimizers(q: usize, beta: f64, h: &[f64]) -> Result<MinimizerSet> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q must be >= 2, got {q}")));
    }
    if beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "the rate function needs beta >= 0, got {beta}"
        )));
    }
    if h.len() != q {
        return Err(Error::InvalidParameter(format!(
            "field must have length {q}, got {}",
            h.len()
        )));
    }
    let (value, points) = maximize_simplex(q, beta, h);
    Ok(MinimizerSet {
        points,
        rate_min: -value,
    })
}

/// eta(sigma) = tanh(beta (1-p) tanh(beta p sigma)).
fn bipartite_map(beta: f64, p: f64, sigma: f64) -> f64 {
    (beta * (1.0 - p) * (beta * p * sigma).tanh()).tanh()
}

/// Nonnegative fixed point of the bipartite composition map for |beta|:
/// zero when beta^2 p (1-p) <= 1, the unique positive root otherwise.
pub fn bipartite_sigma(beta: f64, p: f64) -> Result<f64> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "p must lie in (0, 1), got {p}"
        )));
    }
    let beta = beta.abs();
    if beta * beta * p * (1.0 - p) <= 1.0 {
        return Ok(0.0);
    }
    // damped warm-up from sigma = 1 narrows the bracket when it converges;
    // near the critical curve it crawls, so the bisection stays global
    let mut sigma = 1.0;
    for _ in 0..200 {
        sigma = 0.5 * sigma + 0.5 * bipartite_map(beta, p, sigma);
    }
    let residual = (bipartite_map(beta, p, sigma) - sigma).abs();
    let hi = if residual < 1e-8 {
        (2.0 * sigma).min(1.0)
    } else {
        1.0
    };
    Ok(bisect_root(|s| bipartite_map(beta, p, s) - s, 1e-15, hi))
}

/// Limiting log partition function per site for the Ising model on
/// bi-regular bipartite graphs with side fraction p. The first term keeps
/// the sign of beta; only the fixed points use |beta|.
pub fn bipartite_limit(beta: f64, p: f64) -> Result<f64> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "p must lie in (0, 1), got {p}"
        )));
    }
    let base = 0.5 * beta * p * (1.0 - p);
    if beta * beta * p * (1.0 - p) <= 1.0 {
        return Ok(base + std::f64::consts::LN_2);
    }
    let sigma_p = bipartite_sigma(beta, p)?;
    let sigma_q = bipartite_sigma(beta, 1.0 - p)?;
    Ok(base
        + 0.5 * beta.abs() * p * (1.0 - p) * sigma_p * sigma_q
        + p * binary_entropy(sigma_p)
        + (1.0 - p) * binary_entropy(sigma_q))
}

/// Finite-n optimum of the mean-field objective over the bipartite product
/// family on the bi-regular graph with side sizes (a, b) and degrees (c, d),
/// scaled by 1/(c+d).
///
/// Writing each side's row as ((1+s)/2, (1-s)/2), the objective becomes
/// (beta/2) sum_{ij} A(i,j)(1 + s_i s'_j) + sum H(s_i) + sum H(s'_j), whose
/// stationary points satisfy s_i = tanh((beta/2) sum_j A(i,j) s'_j). The
/// composed map is therefore the bipartite fixed-point map at coupling
/// beta/2, and the zero solution stops being optimal once
/// (beta/2)^2 p (1-p) > 1 with p = d/(c+d). For beta < 0 the optimal spins
/// take opposite signs on the two sides, so the cross term still enters
/// with |beta|.
pub fn finite_bipartite_value(a: usize, b: usize, c: usize, d: usize, beta: f64) -> Result<f64> {
    if a == 0 || b == 0 || c == 0 || d == 0 {
        return Err(Error::InvalidParameter(
            "bipartite sizes and degrees must be positive".into(),
        ));
    }
    if a * c != b * d {
        return Err(Error::InvalidParameter(format!(
            "bi-regularity needs a*c = b*d, got {} != {}",
            a * c,
            b * d
        )));
    }
    if c > b || d > a {
        return Err(Error::InvalidParameter(
            "degrees cannot exceed the opposite side size".into(),
        ));
    }
    let p = d as f64 / (c + d) as f64;
    let edges_scaled = (a * c) as f64 / (c + d) as f64;
    let half = 0.5 * beta;
    let (sigma_a, sigma_b) = if half * half * p * (1.0 - p) <= 1.0 {
        (0.0, 0.0)
    } else {
        (bipartite_sigma(half, p)?, bipartite_sigma(half, 1.0 - p)?)
    };
    Ok(0.5 * beta * edges_scaled
        + 0.5 * beta.abs() * edges_scaled * sigma_a * sigma_b
        + a as f64 * binary_entropy(sigma_a)
        + b as f64 * binary_entropy(sigma_b))
}
