//! Multivariate normal components: construction from spreads and planar
//! rotations, Cholesky factorization, log-density and sampling.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Added to covariance diagonals before factorization to absorb round-off.
pub const VARIANCE_FLOOR: f64 = 1e-12;

const SYMMETRY_TOL: f64 = 1e-9;

/// A rotation by `angle_deg` in the plane spanned by two coordinate axes.
///
/// Positive angles turn `axis_a` towards `axis_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarRotation {
    pub axis_a: usize,
    pub axis_b: usize,
    pub angle_deg: f64,
}

impl PlanarRotation {
    pub fn new(axis_a: usize, axis_b: usize, angle_deg: f64) -> Self {
        Self {
            axis_a,
            axis_b,
            angle_deg,
        }
    }

    /// Rotation in the (0, 1) plane, the only plane used by 2-D scenarios.
    pub fn xy(angle_deg: f64) -> Self {
        Self::new(0, 1, angle_deg)
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.axis_a >= dim || self.axis_b >= dim {
            return Err(Error::InvalidParameter(format!(
                "rotation axes ({}, {}) out of range for dimension {dim}",
                self.axis_a, self.axis_b
            )));
        }
        if self.axis_a == self.axis_b {
            return Err(Error::InvalidParameter(format!(
                "rotation repeats axis {}",
                self.axis_a
            )));
        }
        if !self.angle_deg.is_finite() {
            return Err(Error::InvalidParameter("rotation angle is not finite".into()));
        }
        Ok(())
    }

    /// The `dim × dim` Givens matrix for this rotation scaled by `fraction`.
    pub fn matrix(&self, dim: usize, fraction: f64) -> DMatrix<f64> {
        let theta = (self.angle_deg * fraction).to_radians();
        let (s, c) = theta.sin_cos();
        let mut r = DMatrix::identity(dim, dim);
        r[(self.axis_a, self.axis_a)] = c;
        r[(self.axis_b, self.axis_b)] = c;
        r[(self.axis_a, self.axis_b)] = -s;
        r[(self.axis_b, self.axis_a)] = s;
        r
    }
}

/// Composite rotation `R = R_k ⋯ R_1` for an ordered list of planar rotations,
/// each angle scaled by `fraction`.
pub fn rotation_matrix(dim: usize, rotations: &[PlanarRotation], fraction: f64) -> DMatrix<f64> {
    rotations
        .iter()
        .fold(DMatrix::identity(dim, dim), |acc, rot| rot.matrix(dim, fraction) * acc)
}

/// `Σ = R · diag(stddev²) · Rᵀ`.
pub fn covariance_from(stddev: &[f64], rotations: &[PlanarRotation]) -> Result<DMatrix<f64>> {
    let dim = stddev.len();
    if dim == 0 {
        return Err(Error::InvalidParameter("empty stddev vector".into()));
    }
    if let Some((i, s)) = stddev
        .iter()
        .enumerate()
        .find(|(_, s)| !(s.is_finite() && **s > 0.0))
    {
        return Err(Error::InvalidParameter(format!(
            "stddev[{i}] = {s} must be positive"
        )));
    }
    for rot in rotations {
        rot.validate(dim)?;
    }
    let r = rotation_matrix(dim, rotations, 1.0);
    let diag = DMatrix::from_diagonal(&DVector::from_iterator(dim, stddev.iter().map(|s| s * s)));
    Ok(symmetrize(&r * diag * r.transpose()))
}

/// Averages a matrix with its transpose, removing rotation round-off asymmetry.
pub(crate) fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianParams {
    pub center: DVector<f64>,
    pub covariance: DMatrix<f64>,
}

impl GaussianParams {
    pub fn new(center: DVector<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        let dim = center.len();
        if covariance.nrows() != dim || covariance.ncols() != dim {
            return Err(Error::InvalidParameter(format!(
                "covariance is {}x{} but center has dimension {dim}",
                covariance.nrows(),
                covariance.ncols()
            )));
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (covariance[(i, j)] - covariance[(j, i)]).abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "covariance not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let params = Self { center, covariance };
        params.factorize()?;
        Ok(params)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn factorize(&self) -> Result<FactorizedGaussian> {
        FactorizedGaussian::new(self)
    }
}

/// A Gaussian with its Cholesky factor and log-determinant precomputed.
#[derive(Debug, Clone)]
pub struct FactorizedGaussian {
    center: DVector<f64>,
    lower: DMatrix<f64>,
    log_norm: f64,
}

impl FactorizedGaussian {
    pub fn new(params: &GaussianParams) -> Result<Self> {
        let dim = params.dim();
        let mut cov = params.covariance.clone();
        for i in 0..dim {
            cov[(i, i)] += VARIANCE_FLOOR;
        }
        let chol = cov.cholesky().ok_or_else(|| {
            Error::NumericalDegeneracy("covariance is not positive definite".into())
        })?;
        let lower = chol.unpack();
        let log_det: f64 = 2.0 * lower.diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let log_norm = -0.5 * (dim as f64 * (2.0 * std::f64::consts::PI).ln() + log_det);
        Ok(Self {
            center: params.center.clone(),
            lower,
            log_norm,
        })
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn cholesky_factor(&self) -> &DMatrix<f64> {
        &self.lower
    }

    pub fn log_pdf(&self, x: &[f64]) -> f64 {
        let dim = self.center.len();
        // Forward substitution on L z = x - mu.
        let mut z = vec![0.0; dim];
        for i in 0..dim {
            let mut acc = x[i] - self.center[i];
            for (j, zj) in z.iter().enumerate().take(i) {
                acc -= self.lower[(i, j)] * zj;
            }
            z[i] = acc / self.lower[(i, i)];
        }
        let maha: f64 = z.iter().map(|v| v * v).sum();
        self.log_norm - 0.5 * maha
    }

    pub fn pdf(&self, x: &[f64]) -> f64 {
        self.log_pdf(x).exp()
    }

    /// `center + L · z` with `z` a vector of standard normals drawn from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let dim = self.center.len();
        let z: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        (0..dim)
            .map(|i| {
                self.center[i]
                    + (0..=i)
                        .map(|j| self.lower[(i, j)] * z[j])
                        .sum::<f64>()
            })
            .collect()
    }
}
