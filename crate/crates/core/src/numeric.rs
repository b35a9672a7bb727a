//! Shared numerically-stable primitives.

/// log(sum_i exp(x_i)), max-shifted.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Replace `values` by softmax(values), max-shifted.
pub fn softmax_in_place(values: &mut [f64]) {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in values.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    for v in values.iter_mut() {
        *v /= sum;
    }
}

/// x log x with the 0 log 0 = 0 convention. Values below 1e-300 count as 0,
/// which keeps denormals from producing NaN through log.
pub fn x_log_x(x: f64) -> f64 {
    if x < 1e-300 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Entropy H(s) = -(1+s)/2 log (1+s)/2 - (1-s)/2 log (1-s)/2 for s in [-1, 1].
pub fn binary_entropy(s: f64) -> f64 {
    -x_log_x((1.0 + s) / 2.0) - x_log_x((1.0 - s) / 2.0)
}
