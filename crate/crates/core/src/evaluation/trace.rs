use crate::error::{Error, Result};

/// Per-step 0-1 losses of one (scenario, learner, seed) run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    scenario: String,
    learner: String,
    seed: u64,
    losses: Vec<u8>,
    /// `errors[n]` = number of losses among the first `n` steps.
    errors: Vec<u32>,
}

/// Metrics at one time index (1-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPoint {
    pub n: usize,
    pub loss: u8,
    pub ae_cum: f64,
    /// Windowed error over `min(n, w)` most recent steps.
    pub ae_win: f64,
}

impl RunTrace {
    pub fn new(
        scenario: impl Into<String>,
        learner: impl Into<String>,
        seed: u64,
        losses: Vec<u8>,
    ) -> Result<Self> {
        if let Some(i) = losses.iter().position(|l| *l > 1) {
            return Err(Error::InvalidArgument(format!(
                "loss at step {} is {}; losses are 0 or 1",
                i + 1,
                losses[i]
            )));
        }
        let mut errors = Vec::with_capacity(losses.len() + 1);
        errors.push(0u32);
        for l in &losses {
            errors.push(errors.last().unwrap() + *l as u32);
        }
        Ok(Self {
            scenario: scenario.into(),
            learner: learner.into(),
            seed,
            losses,
            errors,
        })
    }

    pub fn scenario(&self) -> &str {
        &self.scenario
    }

    pub fn learner(&self) -> &str {
        &self.learner
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn losses(&self) -> &[u8] {
        &self.losses
    }

    pub fn len(&self) -> usize {
        self.losses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.losses.is_empty()
    }

    /// Mean loss over steps `1..=n`.
    pub fn ae_cum(&self, n: usize) -> Result<f64> {
        if n == 0 || n > self.len() {
            return Err(Error::InvalidArgument(format!(
                "n = {n} outside 1..={}",
                self.len()
            )));
        }
        Ok(self.errors[n] as f64 / n as f64)
    }

    /// Mean loss over the `w` most recent steps ending at `n`.
    pub fn ae_win(&self, n: usize, w: usize) -> Result<f64> {
        if w == 0 {
            return Err(Error::InvalidArgument("window must be at least 1".into()));
        }
        if n < w || n > self.len() {
            return Err(Error::InvalidArgument(format!(
                "n = {n} outside {w}..={} for window {w}",
                self.len()
            )));
        }
        Ok((self.errors[n] - self.errors[n - w]) as f64 / w as f64)
    }

    /// Final cumulative error, the headline number of a run.
    pub fn final_ae(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.errors[self.len()] as f64 / self.len() as f64
        }
    }

    /// Windowed error at every step, using `min(n, w)` steps while the
    /// window is still filling.
    pub fn ae_win_series(&self, w: usize) -> Vec<f64> {
        let w = w.max(1);
        (1..=self.len())
            .map(|n| {
                let span = n.min(w);
                (self.errors[n] - self.errors[n - span]) as f64 / span as f64
            })
            .collect()
    }

    pub fn series(&self, w: usize) -> Vec<MetricPoint> {
        self.ae_win_series(w)
            .into_iter()
            .enumerate()
            .map(|(i, ae_win)| MetricPoint {
                n: i + 1,
                loss: self.losses[i],
                ae_cum: self.errors[i + 1] as f64 / (i + 1) as f64,
                ae_win,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(l: &[u8]) -> RunTrace {
        RunTrace::new("s", "l", 1, l.to_vec()).unwrap()
    }

    #[test]
    fn cumulative_error() {
        let t = trace(&[0, 1, 1, 0]);
        assert_eq!(t.ae_cum(4).unwrap(), 0.5);
        assert_eq!(trace(&[0]).ae_cum(1).unwrap(), 0.0);
        assert_eq!(t.final_ae(), 0.5);
        assert!(t.ae_cum(0).is_err());
        assert!(t.ae_cum(5).is_err());
    }

    #[test]
    fn windowed_error() {
        let t = trace(&[1, 1, 0, 0]);
        assert_eq!(t.ae_win(4, 2).unwrap(), 0.0);
        assert_eq!(t.ae_win(4, 4).unwrap(), t.ae_cum(4).unwrap());
        assert!(t.ae_win(1, 2).is_err());
        assert!(t.ae_win(4, 0).is_err());
    }

    #[test]
    fn series_uses_partial_window_at_start() {
        let t = trace(&[1, 0, 0, 1]);
        assert_eq!(t.ae_win_series(2), vec![1.0, 0.5, 0.0, 0.5]);
        let s = t.series(2);
        assert_eq!(s[3].n, 4);
        assert_eq!(s[3].ae_cum, 0.5);
    }

    #[test]
    fn rejects_non_binary_losses() {
        assert!(RunTrace::new("s", "l", 1, vec![0, 2]).is_err());
    }
}
