//! Brute-force oracle for the generalized Potts measure at desk scale:
//! Hamiltonian evaluation, the exact log partition function, single-site
//! conditional distributions, and the exact law of the empirical color
//! measure.
//!
//! All exponential sums are max-shifted; the enumeration walks colorings in
//! mixed-radix order with site 0 changing fastest.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::CouplingMatrix;
use crate::numeric::softmax_in_place;

/// Default enumeration budget: 2^24 configurations.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

/// A coupling matrix together with the color-coupling matrix J and the
/// per-color field h.
#[derive(Debug, Clone)]
pub struct PottsModel {
    coupling: CouplingMatrix,
    q: usize,
    color_coupling: Vec<f64>, // q x q, symmetric
    field: Vec<f64>,          // length q
}

impl PottsModel {
    pub fn new(
        coupling: CouplingMatrix,
        q: usize,
        color_coupling: Vec<f64>,
        field: Vec<f64>,
    ) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameter(format!("q must be >= 2, got {q}")));
        }
        if color_coupling.len() != q * q {
            return Err(Error::InvalidParameter(format!(
                "color coupling must be {q}x{q}",
            )));
        }
        if field.len() != q {
            return Err(Error::InvalidParameter(format!(
                "field must have length {q}",
            )));
        }
        for r in 0..q {
            for s in (r + 1)..q {
                if color_coupling[r * q + s] != color_coupling[s * q + r] {
                    return Err(Error::InvalidParameter(format!(
                        "color coupling must be symmetric, J({r},{s}) != J({s},{r})"
                    )));
                }
            }
        }
        Ok(PottsModel {
            coupling,
            q,
            color_coupling,
            field,
        })
    }

    /// Standard Potts model: J = beta * I_q and h = B e_1.
    pub fn standard(coupling: CouplingMatrix, q: usize, beta: f64, b_field: f64) -> Result<Self> {
        let mut j = vec![0.0; q * q];
        for r in 0..q {
            j[r * q + r] = beta;
        }
        let mut h = vec![0.0; q];
        if q > 0 {
            h[0] = b_field;
        }
        PottsModel::new(coupling, q, j, h)
    }

    pub fn n(&self) -> usize {
        self.coupling.n()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn coupling(&self) -> &CouplingMatrix {
        &self.coupling
    }

    #[inline]
    pub fn j(&self, r: usize, s: usize) -> f64 {
        self.color_coupling[r * self.q + s]
    }

    pub fn h(&self, r: usize) -> f64 {
        self.field[r]
    }

    pub fn field(&self) -> &[f64] {
        &self.field
    }

    pub fn color_coupling(&self) -> &[f64] {
        &self.color_coupling
    }

    /// Same model with the colors permuted: J'(r,s) = J(p(r),p(s)),
    /// h'(r) = h(p(r)).
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.q {
            return Err(Error::InvalidParameter(
                "permutation length mismatch".into(),
            ));
        }
        let q = self.q;
        let mut j = vec![0.0; q * q];
        let mut h = vec![0.0; q];
        for r in 0..q {
            h[r] = self.field[perm[r]];
            for s in 0..q {
                j[r * q + s] = self.color_coupling[perm[r] * q + perm[s]];
            }
        }
        PottsModel::new(self.coupling.clone(), q, j, h)
    }

    fn check_config(&self, colors: &[usize]) -> Result<()> {
        if colors.len() != self.n() {
            return Err(Error::InvalidParameter(format!(
                "configuration has {} sites, model has {}",
                colors.len(),
                self.n()
            )));
        }
        if let Some(&bad) = colors.iter().find(|&&c| c >= self.q) {
            return Err(Error::InvalidParameter(format!(
                "color {bad} out of range for q = {}",
                self.q
            )));
        }
        Ok(())
    }

    fn check_cap(&self, cap: u128) -> Result<u128> {
        let mut needed: u128 = 1;
        for _ in 0..self.n() {
            needed = needed
                .checked_mul(self.q as u128)
                .ok_or(Error::CapExceeded {
                    needed: u128::MAX,
                    cap,
                })?;
            if needed > cap {
                return Err(Error::CapExceeded { needed, cap });
            }
        }
        Ok(needed)
    }
}

/// H(y) = (1/2) sum_{i,j} A(i,j) J(y_i, y_j) + sum_i h(y_i).
pub fn hamiltonian(model: &PottsModel, colors: &[usize]) -> Result<f64> {
    model.check_config(colors)?;
    let n = model.n();
    let a = model.coupling();
    let mut total = 0.0;
    for i in 0..n {
        let row = a.row(i);
        let ci = colors[i];
        let mut pair = 0.0;
        for j in 0..n {
            pair += row[j] * model.j(ci, colors[j]);
        }
        total += 0.5 * pair + model.h(ci);
    }
    Ok(total)
}

/// Walk all q^n colorings, reporting each with its Hamiltonian. Site 0 cycles
/// fastest. The energy is accumulated along the recursion (each level adds
/// its field term, half its diagonal term, and its pairs with later sites),
/// so rounding never builds up across configurations.
fn enumerate<F: FnMut(&[usize], &[usize], f64)>(model: &PottsModel, visit: &mut F) {
    let n = model.n();
    let q = model.q();
    let mut colors = vec![0usize; n];
    let mut counts = vec![0usize; q];

    fn site_energy(model: &PottsModel, colors: &[usize], k: usize) -> f64 {
        let row = model.coupling().row(k);
        let ck = colors[k];
        let mut pair = 0.0;
        for j in (k + 1)..colors.len() {
            pair += row[j] * model.j(ck, colors[j]);
        }
        pair + 0.5 * row[k] * model.j(ck, ck) + model.h(ck)
    }

    fn rec<F: FnMut(&[usize], &[usize], f64)>(
        model: &PottsModel,
        colors: &mut [usize],
        counts: &mut [usize],
        k: usize,
        acc: f64,
        visit: &mut F,
    ) {
        for color in 0..model.q() {
            colors[k] = color;
            counts[color] += 1;
            let here = acc + site_energy(model, colors, k);
            if k == 0 {
                visit(colors, counts, here);
            } else {
                rec(model, colors, counts, k - 1, here, visit);
            }
            counts[color] -= 1;
        }
    }

    rec(model, &mut colors, &mut counts, n - 1, 0.0, visit);
}

/// Exact log partition function by enumeration over all q^n configurations.
pub fn log_partition(model: &PottsModel, cap: u128) -> Result<f64> {
    model.check_cap(cap)?;
    // streaming max-shifted log-sum-exp
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0f64;
    enumerate(model, &mut |_, _, h| {
        if h <= max {
            sum += (h - max).exp();
        } else {
            sum = sum * (max - h).exp() + 1.0;
            max = h;
        }
    });
    Ok(max + sum.ln())
}

/// Single-site conditional distribution P(Y_i = r | Y_k = y_k, k != i):
/// softmax over gamma_ir + h_r with gamma_ir = sum_j A(i,j) J(r, y_j).
/// Requires a zero diagonal so gamma is free of site i.
pub fn conditional_distribution(
    model: &PottsModel,
    colors: &[usize],
    site: usize,
) -> Result<Vec<f64>> {
    model.check_config(colors)?;
    if site >= model.n() {
        return Err(Error::InvalidParameter(format!(
            "site {site} out of range for n = {}",
            model.n()
        )));
    }
    if let Some(index) = model.coupling().first_nonzero_diagonal() {
        return Err(Error::NonzeroDiagonal { index });
    }
    let mut logits = site_logits(model, colors, site);
    softmax_in_place(&mut logits);
    Ok(logits)
}

/// gamma_i(r) + h_r for all r.
fn site_logits(model: &PottsModel, colors: &[usize], site: usize) -> Vec<f64> {
    let q = model.q();
    let row = model.coupling().row(site);
    let mut logits = vec![0.0; q];
    for (r, logit) in logits.iter_mut().enumerate() {
        let mut gamma = 0.0;
        for (j, &w) in row.iter().enumerate() {
            if w != 0.0 {
                gamma += w * model.j(r, colors[j]);
            }
        }
        *logit = gamma + model.h(r);
    }
    logits
}

/// Exact law of the color-count vector (k_1, ..., k_q) under the model.
#[derive(Debug, Clone)]
pub struct EmpiricalLaw {
    n: usize,
    q: usize,
    probabilities: BTreeMap<Vec<usize>, f64>,
}

impl EmpiricalLaw {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn probability(&self, counts: &[usize]) -> f64 {
        self.probabilities.get(counts).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, f64)> {
        self.probabilities.iter().map(|(k, &v)| (k, v))
    }

    pub fn total_mass(&self) -> f64 {
        self.probabilities.values().sum()
    }

    /// Law of the magnetization (k_1 - k_2)/n, ascending in m. Two colors
    /// only.
    pub fn magnetization_law(&self) -> Result<Vec<(f64, f64)>> {
        if self.q != 2 {
            return Err(Error::InvalidParameter(format!(
                "magnetization law needs q = 2, got q = {}",
                self.q
            )));
        }
        let mut law: Vec<(f64, f64)> = self
            .probabilities
            .iter()
            .map(|(counts, &p)| {
                let m = (counts[0] as f64 - counts[1] as f64) / self.n as f64;
                (m, p)
            })
            .collect();
        law.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(law)
    }
}

/// Exact probabilities of every count vector, by grouping the enumeration.
pub fn empirical_law(model: &PottsModel, cap: u128) -> Result<EmpiricalLaw> {
    model.check_cap(cap)?;
    // pass 1: global maximum of H for the shift
    let mut max = f64::NEG_INFINITY;
    enumerate(model, &mut |_, _, h| {
        if h > max {
            max = h;
        }
    });
    // pass 2: bucket exp(H - max) by count vector
    let mut buckets: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    enumerate(model, &mut |_, counts, h| {
        *buckets.entry(counts.to_vec()).or_insert(0.0) += (h - max).exp();
    });
    let total: f64 = buckets.values().sum();
    for v in buckets.values_mut() {
        *v /= total;
    }
    Ok(EmpiricalLaw {
        n: model.n(),
        q: model.q(),
        probabilities: buckets,
    })
}
