//! Multivariate Gaussian flavor models and their closed-form
//! symmetrized Kullback-Leibler divergence.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::corpus::{RecipeCorpus, FLAVOR_DIM};
use crate::error::{Error, Result};
use crate::metrics::BalancedSample;

/// A Gaussian fitted to the complete flavor vectors of one cuisine's
/// sampled recipes.
#[derive(Debug, Clone, PartialEq)]
pub struct FlavorGaussian {
    pub cuisine: String,
    pub mean: DVector<f64>,
    /// Maximum-likelihood covariance (normalized by `n`) plus a ridge
    /// term on the diagonal.
    pub cov: DMatrix<f64>,
    /// Number of flavor vectors the fit used.
    pub n: usize,
    /// Sampled recipes skipped because their flavor vector was absent.
    pub skipped: usize,
}

/// Fits the flavor Gaussian of one sampled cuisine.
///
/// Only recipes carrying a complete six-dimensional flavor vector
/// participate. At least `FLAVOR_DIM + 1` such vectors are required;
/// otherwise the cuisine is reported via
/// [`Error::TooFewFlavorVectors`]. The covariance is the MLE estimate
/// (divide by `n`) with `ridge` added to every diagonal entry.
pub fn fit_flavor_gaussian(
    sample: &BalancedSample,
    cuisine: &str,
    corpus: &RecipeCorpus,
    ridge: f64,
) -> Result<FlavorGaussian> {
    if !(ridge.is_finite() && ridge >= 0.0) {
        return Err(Error::InvalidArg(format!(
            "ridge must be finite and non-negative, got {ridge}"
        )));
    }
    let indices = sample.indices_of(cuisine)?;
    let mut xs: Vec<DVector<f64>> = Vec::new();
    let mut skipped = 0usize;
    for &idx in indices {
        match &corpus.recipes[idx].flavors {
            Some(f) => xs.push(DVector::from_column_slice(&f.as_array())),
            None => skipped += 1,
        }
    }
    let need = FLAVOR_DIM + 1;
    if xs.len() < need {
        return Err(Error::TooFewFlavorVectors {
            cuisine: cuisine.to_string(),
            have: xs.len(),
            need,
        });
    }
    let n = xs.len();
    let mut mean = DVector::zeros(FLAVOR_DIM);
    for x in &xs {
        mean += x;
    }
    mean /= n as f64;
    let mut cov = DMatrix::zeros(FLAVOR_DIM, FLAVOR_DIM);
    for x in &xs {
        let d = x - &mean;
        cov.ger(1.0 / n as f64, &d, &d, 1.0);
    }
    for i in 0..FLAVOR_DIM {
        cov[(i, i)] += ridge;
    }
    Ok(FlavorGaussian {
        cuisine: cuisine.to_string(),
        mean,
        cov,
        n,
        skipped,
    })
}

struct CholeskyParts {
    chol: Cholesky<f64, nalgebra::Dyn>,
    ln_det: f64,
}

fn decompose(g: &FlavorGaussian) -> Result<CholeskyParts> {
    let chol = Cholesky::new(g.cov.clone()).ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l_dirty();
    let ln_det = 2.0 * (0..g.cov.nrows()).map(|i| l[(i, i)].ln()).sum::<f64>();
    Ok(CholeskyParts { chol, ln_det })
}

/// KL(P0 || P1) between Gaussians, given P1's decomposition:
/// `0.5 * [tr(S1^-1 S0) + (m1-m0)' S1^-1 (m1-m0) - d + ln det S1 - ln det S0]`.
fn kl_directed(
    g0: &FlavorGaussian,
    ln_det0: f64,
    g1: &FlavorGaussian,
    parts1: &CholeskyParts,
) -> f64 {
    let d = g0.mean.len() as f64;
    let trace = parts1.chol.solve(&g0.cov).trace();
    let diff = &g1.mean - &g0.mean;
    let mahal = diff.dot(&parts1.chol.solve(&diff));
    0.5 * (trace + mahal - d + parts1.ln_det - ln_det0)
}

/// Symmetrized KL divergence `0.5 * (KL(a||b) + KL(b||a))` between two
/// equal-dimension Gaussians. Zero iff the Gaussians coincide;
/// swapping the arguments returns the identical value.
pub fn gaussian_symkl(a: &FlavorGaussian, b: &FlavorGaussian) -> Result<f64> {
    if a.mean.len() != b.mean.len() {
        return Err(Error::DimensionMismatch {
            context: "gaussian_symkl",
            expected: a.mean.len(),
            got: b.mean.len(),
        });
    }
    if a.cov.nrows() != a.mean.len() || b.cov.nrows() != b.mean.len() {
        return Err(Error::Data("covariance does not match mean dimension".into()));
    }
    let pa = decompose(a)?;
    let pb = decompose(b)?;
    let kl_ab = kl_directed(a, pa.ln_det, b, &pb);
    let kl_ba = kl_directed(b, pb.ln_det, a, &pa);
    let sym = 0.5 * (kl_ab + kl_ba);
    if !sym.is_finite() {
        return Err(Error::Divergence(format!(
            "symmetrized KL between {:?} and {:?} is not finite",
            a.cuisine, b.cuisine
        )));
    }
    if sym < 0.0 {
        // The true value is non-negative; tolerate rounding noise only.
        if sym > -1e-9 {
            return Ok(0.0);
        }
        return Err(Error::Divergence(format!(
            "symmetrized KL came out negative ({sym})"
        )));
    }
    Ok(sym)
}

/// Flavor similarity `1 / symKL`, capped at `cap` so identical (or
/// numerically indistinguishable) flavor profiles stay finite.
pub fn flavor_similarity(a: &FlavorGaussian, b: &FlavorGaussian, cap: f64) -> Result<f64> {
    if !(cap.is_finite() && cap > 0.0) {
        return Err(Error::InvalidArg(format!(
            "similarity cap must be finite and positive, got {cap}"
        )));
    }
    let sym = gaussian_symkl(a, b)?;
    if sym <= 1.0 / cap {
        Ok(cap)
    } else {
        Ok(1.0 / sym)
    }
}
