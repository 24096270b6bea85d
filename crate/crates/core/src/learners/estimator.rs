use statrs::function::erf::erf;

/// Floor applied to estimated variances.
pub const MIN_VARIANCE: f64 = 1e-9;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Weighted running mean/variance (West's incremental update).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GaussianEstimator {
    weight: f64,
    mean: f64,
    m2: f64,
}

impl GaussianEstimator {
    pub fn add(&mut self, x: f64, w: f64) {
        if w <= 0.0 {
            return;
        }
        let total = self.weight + w;
        let delta = x - self.mean;
        let r = delta * w / total;
        self.mean += r;
        self.m2 += self.weight * delta * r;
        self.weight = total;
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance, floored at [`MIN_VARIANCE`].
    pub fn variance(&self) -> f64 {
        if self.weight > 1.0 {
            (self.m2 / (self.weight - 1.0)).max(MIN_VARIANCE)
        } else {
            MIN_VARIANCE
        }
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        let var = self.variance();
        let d = x - self.mean;
        -0.5 * (LN_2PI + var.ln() + d * d / var)
    }

    /// Estimated weight at or below `x`.
    pub fn weight_below(&self, x: f64) -> f64 {
        let sd = self.variance().sqrt();
        let z = (x - self.mean) / (sd * std::f64::consts::SQRT_2);
        self.weight * 0.5 * (1.0 + erf(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn matches_batch_statistics() {
        let xs = [1.0, 4.0, -2.0, 3.5, 0.25, 7.0];
        let mut est = GaussianEstimator::default();
        for x in xs {
            est.add(x, 1.0);
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert_abs_diff_eq!(est.mean(), mean, epsilon = 1e-12);
        assert_abs_diff_eq!(est.variance(), var, epsilon = 1e-12);
    }

    #[test]
    fn integer_weight_equals_repetition() {
        let mut a = GaussianEstimator::default();
        let mut b = GaussianEstimator::default();
        for (x, k) in [(1.0, 3), (2.0, 1), (-1.0, 2)] {
            a.add(x, k as f64);
            for _ in 0..k {
                b.add(x, 1.0);
            }
        }
        assert_abs_diff_eq!(a.mean(), b.mean(), epsilon = 1e-12);
        assert_abs_diff_eq!(a.variance(), b.variance(), epsilon = 1e-12);
    }

    #[test]
    fn single_observation_uses_floor() {
        let mut est = GaussianEstimator::default();
        est.add(2.0, 1.0);
        assert_eq!(est.variance(), MIN_VARIANCE);
        assert_abs_diff_eq!(est.weight_below(2.0), 0.5, epsilon = 1e-12);
    }
}
