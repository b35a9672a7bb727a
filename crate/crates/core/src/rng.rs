//! Seeded random numbers for reproducible ensembles and multistart schedules.
//!
//! The generator is splitmix64: a 64-bit counter passed through a fixed
//! bit-mixing permutation. It has a single word of state, every seed gives an
//! independent-looking stream, and the output sequence is identical on every
//! platform. Gaussians come from the Box-Muller transform.

/// splitmix64 stream with a one-value Gaussian cache for Box-Muller pairs.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare_gaussian: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 {
            state: seed,
            spare_gaussian: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1), using the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Fair coin in {-1.0, +1.0}.
    pub fn next_sign(&mut self) -> f64 {
        if self.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Standard Gaussian via Box-Muller; one transform yields two values,
    /// the second is cached.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(g) = self.spare_gaussian.take() {
            return g;
        }
        // 1 - u lies in (0, 1], so the log is finite.
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare_gaussian = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// Uniform point on the probability simplex (normalized exponentials).
    pub fn next_simplex(&mut self, q: usize) -> Vec<f64> {
        let mut row: Vec<f64> = (0..q).map(|_| -(1.0 - self.next_f64()).ln()).collect();
        let total: f64 = row.iter().sum();
        for v in &mut row {
            *v /= total;
        }
        row
    }
}
