//! Step graphons from coupling matrices: exact cut and infinity-to-one norms
//! at desk scale, the block functional over fractional partitions, and its
//! maximization.
//!
//! Fractional partitions are restricted to block-constant representatives,
//! which loses nothing on step-graphon inputs and keeps the optimization
//! finite-dimensional.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::CouplingMatrix;
use crate::meanfield::SolveSchedule;
use crate::numeric::{softmax_in_place, x_log_x};
use crate::rng::SplitMix64;

const MASS_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-12;
const CUT_NORM_MAX_BLOCKS: usize = 20;
const DISTANCE_MAX_BLOCKS: usize = 8;

/// Block-constant symmetric kernel with block masses.
#[derive(Debug, Clone)]
pub struct StepGraphon {
    k: usize,
    values: Vec<f64>, // k x k, symmetric
    masses: Vec<f64>, // positive, sums to 1
}

impl StepGraphon {
    pub fn new(values: Vec<Vec<f64>>, masses: Vec<f64>) -> Result<Self> {
        let k = masses.len();
        if k == 0 {
            return Err(Error::InvalidParameter(
                "graphon needs at least one block".into(),
            ));
        }
        if values.len() != k {
            return Err(Error::InvalidParameter(format!(
                "expected {k} value rows, got {}",
                values.len()
            )));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidParameter(format!(
                "block masses sum to {total}, not 1"
            )));
        }
        if masses.iter().any(|&m| m <= 0.0) {
            return Err(Error::InvalidParameter(
                "block masses must be positive".into(),
            ));
        }
        let mut flat = vec![0.0; k * k];
        for (i, row) in values.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidParameter(format!(
                    "value row {i} has length {}, expected {k}",
                    row.len()
                )));
            }
            flat[i * k..(i + 1) * k].copy_from_slice(row);
        }
        for i in 0..k {
            for j in (i + 1)..k {
                let delta = (flat[i * k + j] - flat[j * k + i]).abs();
                if delta > SYMMETRY_TOL {
                    return Err(Error::AsymmetricInput { i, j, delta });
                }
                let avg = 0.5 * (flat[i * k + j] + flat[j * k + i]);
                flat[i * k + j] = avg;
                flat[j * k + i] = avg;
            }
        }
        Ok(StepGraphon {
            k,
            values: flat,
            masses,
        })
    }

    /// Step graphon of a matrix: n equal blocks of mass 1/n carrying the
    /// entries, optionally multiplied by n.
    pub fn from_matrix(a: &CouplingMatrix, multiply_by_n: bool) -> StepGraphon {
        let n = a.n();
        let factor = if multiply_by_n { n as f64 } else { 1.0 };
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] = factor * a.get(i, j);
            }
        }
        StepGraphon {
            k: n,
            values,
            masses: vec![1.0 / n as f64; n],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.k + j]
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Integral over the square: sum_{i,j} m_i m_j W_ij.
    pub fn integral(&self) -> f64 {
        let mut total = 0.0;
        for i in 0..self.k {
            for j in 0..self.k {
                total += self.masses[i] * self.masses[j] * self.get(i, j);
            }
        }
        total
    }

    pub fn scaled(&self, factor: f64) -> StepGraphon {
        StepGraphon {
            k: self.k,
            values: self.values.iter().map(|v| factor * v).collect(),
            masses: self.masses.clone(),
        }
    }

    /// Blocks reindexed by `perm`: W'(i,j) = W(perm[i], perm[j]).
    pub fn permuted(&self, perm: &[usize]) -> Result<StepGraphon> {
        if perm.len() != self.k {
            return Err(Error::InvalidParameter(
                "permutation length mismatch".into(),
            ));
        }
        let mut values = vec![0.0; self.k * self.k];
        let mut masses = vec![0.0; self.k];
        for i in 0..self.k {
            masses[i] = self.masses[perm[i]];
            for j in 0..self.k {
                values[i * self.k + j] = self.get(perm[i], perm[j]);
            }
        }
        Ok(StepGraphon {
            k: self.k,
            values,
            masses,
        })
    }
}

/// Exact cut norm and infinity-to-one norm.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CutNorms {
    pub cut: f64,
    pub inf_to_1: f64,
}

/// Exhaustive subset/sign enumeration. Bilinearity puts the cut supremum at
/// block unions and the infinity-to-one supremum at +-1 vectors, so both
/// values are exact. Row aggregates are recomputed per subset so the result
/// does not depend on enumeration order.
pub fn cut_norm_exact(w: &StepGraphon) -> Result<CutNorms> {
    let k = w.k();
    if k > CUT_NORM_MAX_BLOCKS {
        return Err(Error::CapExceeded {
            needed: k as u128,
            cap: CUT_NORM_MAX_BLOCKS as u128,
        });
    }
    // weighted entries t_ij = m_i m_j W_ij
    let mut t = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            t[i * k + j] = w.masses[i] * w.masses[j] * w.get(i, j);
        }
    }

    let mut cut = 0.0f64;
    let mut col = vec![0.0f64; k];
    for s in 1u32..(1u32 << k) {
        for (j, c) in col.iter_mut().enumerate() {
            let mut acc = 0.0;
            for i in 0..k {
                if s >> i & 1 == 1 {
                    acc += t[i * k + j];
                }
            }
            *c = acc;
        }
        // the optimal T collects one sign class of column sums
        let mut positive = 0.0;
        let mut negative = 0.0;
        for &c in &col {
            if c > 0.0 {
                positive += c;
            } else {
                negative -= c;
            }
        }
        cut = cut.max(positive.max(negative));
    }

    let mut inf_to_1 = 0.0f64;
    for s in 0u32..(1u32 << (k - 1)) {
        // fix the sign of the last coordinate; f and -f give the same value
        for (j, c) in col.iter_mut().enumerate() {
            let mut acc = 0.0;
            for i in 0..k {
                let sign = if i + 1 == k || s >> i & 1 == 0 {
                    1.0
                } else {
                    -1.0
                };
                acc += sign * t[i * k + j];
            }
            *c = acc;
        }
        let value: f64 = col.iter().map(|c| c.abs()).sum();
        inf_to_1 = inf_to_1.max(value);
    }

    Ok(CutNorms { cut, inf_to_1 })
}

/// Block-constant fractional partition: one simplex row per block.
#[derive(Debug, Clone, Serialize)]
pub struct BlockPartition {
    k: usize,
    q: usize,
    rho: Vec<f64>,
}

impl BlockPartition {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidParameter("no partition rows".into()));
        }
        let q = rows[0].len();
        if q == 0 {
            return Err(Error::InvalidParameter(
                "partition needs at least one class".into(),
            ));
        }
        let mut rho = Vec::with_capacity(k * q);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != q {
                return Err(Error::InvalidParameter(format!(
                    "partition row {i} has length {}, expected {q}",
                    row.len()
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > MASS_TOL {
                return Err(Error::InvalidParameter(format!(
                    "partition row {i} sums to {sum}, not 1"
                )));
            }
            if row.iter().any(|&v| v < 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "partition row {i} has a negative entry"
                )));
            }
            rho.extend_from_slice(row);
        }
        Ok(BlockPartition { k, q, rho })
    }

    pub fn uniform(k: usize, q: usize) -> Self {
        BlockPartition {
            k,
            q,
            rho: vec![1.0 / q as f64; k * q],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn get(&self, i: usize, r: usize) -> f64 {
        self.rho[i * self.q + r]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.k)
            .map(|i| self.rho[i * self.q..(i + 1) * self.q].to_vec())
            .collect()
    }

    fn set_row(&mut self, i: usize, row: &[f64]) {
        self.rho[i * self.q..(i + 1) * self.q].copy_from_slice(row);
    }
}

fn check_model_dims(q: usize, j: &[f64], h: &[f64]) -> Result<()> {
    if q < 1 {
        return Err(Error::InvalidParameter("q must be positive".into()));
    }
    if j.len() != q * q {
        return Err(Error::InvalidParameter(format!(
            "color coupling must be {q}x{q}"
        )));
    }
    if h.len() != q {
        return Err(Error::InvalidParameter(format!(
            "field must have length {q}"
        )));
    }
    Ok(())
}

/// F(W, rho) = (1/2) sum_{r,s} J(r,s) sum_{i,j} m_i m_j rho_ir rho_js W_ij
///           + sum_r h_r sum_i m_i rho_ir
///           - sum_i m_i sum_r rho_ir log rho_ir.
pub fn f_functional(w: &StepGraphon, rho: &BlockPartition, j: &[f64], h: &[f64]) -> Result<f64> {
    let q = rho.q();
    check_model_dims(q, j, h)?;
    if rho.k() != w.k() {
        return Err(Error::InvalidParameter(format!(
            "partition has {} blocks, graphon has {}",
            rho.k(),
            w.k()
        )));
    }
    let k = w.k();
    let mut quad = 0.0;
    // u_s(i) = sum_j m_j W_ij rho_js
    let mut u = vec![0.0; k];
    for s in 0..q {
        for (i, ui) in u.iter_mut().enumerate() {
            let mut acc = 0.0;
            for jj in 0..k {
                acc += w.masses[jj] * w.get(i, jj) * rho.get(jj, s);
            }
            *ui = acc;
        }
        for r in 0..q {
            let jrs = j[r * q + s];
            if jrs == 0.0 {
                continue;
            }
            let mut dot = 0.0;
            for i in 0..k {
                dot += w.masses[i] * rho.get(i, r) * u[i];
            }
            quad += jrs * dot;
        }
    }
    let mut linear = 0.0;
    let mut entropy = 0.0;
    for i in 0..k {
        for r in 0..q {
            let v = rho.get(i, r);
            linear += h[r] * w.masses[i] * v;
            entropy -= w.masses[i] * x_log_x(v);
        }
    }
    Ok(0.5 * quad + linear + entropy)
}

/// Result of maximizing the block functional.
#[derive(Debug, Clone, Serialize)]
pub struct FSupResult {
    pub value: f64,
    pub rho_star: BlockPartition,
}

fn updated_block_row(
    w: &StepGraphon,
    rho: &BlockPartition,
    j: &[f64],
    h: &[f64],
    block: usize,
) -> Vec<f64> {
    let q = rho.q();
    let k = w.k();
    let mut moments = vec![0.0; q]; // sum_j m_j W(block, j) rho_js
    for jj in 0..k {
        let wij = w.get(block, jj);
        if wij != 0.0 {
            let mj = w.masses[jj];
            for (s, m) in moments.iter_mut().enumerate() {
                *m += mj * wij * rho.get(jj, s);
            }
        }
    }
    let mut logits = vec![0.0; q];
    for (r, logit) in logits.iter_mut().enumerate() {
        let mut gamma = 0.0;
        for s in 0..q {
            gamma += j[r * q + s] * moments[s];
        }
        *logit = gamma + h[r];
    }
    softmax_in_place(&mut logits);
    logits
}

/// Coordinate ascent over blocks with multistart, mirroring the product
/// measure solver in mass-weighted coordinates.
pub fn f_sup(
    w: &StepGraphon,
    q: usize,
    j: &[f64],
    h: &[f64],
    schedule: &SolveSchedule,
) -> Result<FSupResult> {
    check_model_dims(q, j, h)?;
    schedule.validate()?;
    let k = w.k();
    let restarts = schedule.restarts.max(1);
    let mut rng = SplitMix64::new(schedule.seed);

    let mut best: Option<FSupResult> = None;
    for index in 0..restarts {
        let mut rho = if index == 0 {
            BlockPartition::uniform(k, q)
        } else if index <= q {
            let mut rows = vec![vec![0.0; q]; k];
            for row in &mut rows {
                row[index - 1] = 1.0;
            }
            BlockPartition::from_rows(rows)?
        } else {
            let rows: Vec<Vec<f64>> = (0..k).map(|_| rng.next_simplex(q)).collect();
            BlockPartition::from_rows(rows)?
        };
        let mut mixed = vec![0.0; q];
        for _ in 0..schedule.max_sweeps {
            let mut max_change = 0.0f64;
            for i in 0..k {
                let update = updated_block_row(w, &rho, j, h, i);
                for r in 0..q {
                    let old = rho.get(i, r);
                    mixed[r] = if schedule.damping > 0.0 {
                        (1.0 - schedule.damping) * update[r] + schedule.damping * old
                    } else {
                        update[r]
                    };
                    max_change = max_change.max((mixed[r] - old).abs());
                }
                rho.set_row(i, &mixed);
            }
            if max_change <= schedule.tol {
                break;
            }
        }
        let value = f_functional(w, &rho, j, h)?;
        let better = match &best {
            None => true,
            Some(current) => value > current.value,
        };
        if better {
            best = Some(FSupResult {
                value,
                rho_star: rho,
            });
        }
    }
    Ok(best.expect("at least one restart runs"))
}

/// Upper bound on the cut distance between two step graphons with matching
/// block masses: the smallest cut norm of W1 - pi(W2) over block
/// permutations pi that preserve the masses. The two mass vectors must agree
/// as multisets; only mass-aligned permutations are searched.
pub fn cut_distance_blocks(w1: &StepGraphon, w2: &StepGraphon) -> Result<f64> {
    let k = w1.k();
    if w2.k() != k {
        return Err(Error::InvalidParameter(format!(
            "block counts differ: {k} vs {}",
            w2.k()
        )));
    }
    if k > DISTANCE_MAX_BLOCKS {
        return Err(Error::CapExceeded {
            needed: k as u128,
            cap: DISTANCE_MAX_BLOCKS as u128,
        });
    }
    let mut sorted1 = w1.masses.clone();
    let mut sorted2 = w2.masses.clone();
    sorted1.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sorted2.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for i in 0..k {
        if (sorted1[i] - sorted2[i]).abs() > MASS_TOL {
            return Err(Error::InvalidParameter(
                "block mass multisets differ".into(),
            ));
        }
    }

    let mut best = f64::INFINITY;
    let mut perm: Vec<usize> = (0..k).collect();
    permute_all(&mut perm, 0, &mut |p| {
        // only mass-preserving matchings are admissible couplings
        if (0..k).any(|i| (w1.masses[i] - w2.masses[p[i]]).abs() > MASS_TOL) {
            return Ok(());
        }
        let mut diff = vec![0.0; k * k];
        for i in 0..k {
            for jj in 0..k {
                diff[i * k + jj] = w1.get(i, jj) - w2.get(p[i], p[jj]);
            }
        }
        let rows: Vec<Vec<f64>> = (0..k).map(|i| diff[i * k..(i + 1) * k].to_vec()).collect();
        let graphon = StepGraphon::new(rows, w1.masses.clone())?;
        let norms = cut_norm_exact(&graphon)?;
        if norms.cut < best {
            best = norms.cut;
        }
        Ok(())
    })?;
    // the sort-aligned matching is always admissible, so a finite minimum
    // exists whenever the multisets agree
    Ok(best)
}

fn permute_all(
    items: &mut [usize],
    start: usize,
    visit: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if start == items.len() {
        return visit(items);
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute_all(items, start + 1, visit)?;
        items.swap(start, i);
    }
    Ok(())
}

/// Step-graphon file format: line 1 is the block count k, line 2 the k
/// masses, lines 3..k+2 the k x k values. Symmetry and the unit mass sum are
/// validated like the matrix format.
pub fn read_graphon(path: &Path) -> Result<StepGraphon> {
    let text = fs::read_to_string(path)?;
    read_graphon_str(&text)
}

pub fn read_graphon_str(text: &str) -> Result<StepGraphon> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let k: usize = header.trim().parse().map_err(|_| Error::Parse {
        line: line_no + 1,
        msg: format!("expected a block count, got `{header}`"),
    })?;
    let parse_row = |line_no: usize, line: &str| -> Result<Vec<f64>> {
        line.split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no + 1,
                    msg: format!("bad number `{tok}`"),
                })
            })
            .collect()
    };
    let (mass_line_no, mass_line) = lines.next().ok_or(Error::Parse {
        line: line_no + 2,
        msg: "missing mass line".into(),
    })?;
    let masses = parse_row(mass_line_no, mass_line)?;
    if masses.len() != k {
        return Err(Error::Parse {
            line: mass_line_no + 1,
            msg: format!("expected {k} masses, found {}", masses.len()),
        });
    }
    let mut rows = Vec::with_capacity(k);
    for _ in 0..k {
        let (value_line_no, value_line) = lines.next().ok_or(Error::Parse {
            line: mass_line_no + 2,
            msg: format!("expected {k} value rows"),
        })?;
        let row = parse_row(value_line_no, value_line)?;
        if row.len() != k {
            return Err(Error::Parse {
                line: value_line_no + 1,
                msg: format!("expected {k} entries, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    StepGraphon::new(rows, masses)
}

pub fn write_graphon_string(w: &StepGraphon) -> String {
    let mut out = String::new();
    out.push_str(&w.k().to_string());
    out.push('\n');
    let masses: Vec<String> = w.masses.iter().map(|m| m.to_string()).collect();
    out.push_str(&masses.join(" "));
    out.push('\n');
    for i in 0..w.k() {
        let row: Vec<String> = (0..w.k()).map(|j| w.get(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
