//! Least-squares polynomial fitting (used for metric-vs-statistic
//! trend curves, e.g. diversity against net migration).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A fitted polynomial in two equivalent forms:
///
/// * raw basis: `y = coefficients[0] + coefficients[1] x + ...`
/// * stable basis: `y = Σ scaled_coefficients[k] z^k` with
///   `z = (x - x_offset) / x_scale`.
///
/// Both describe the same least-squares optimum. The raw coefficients
/// are convenient to read but evaluating them far from the data can
/// cancel catastrophically when `x` spans a large range; the scaled
/// form stays well-conditioned because `z` lies in `[-1, 1]` over the
/// fitted points.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFit {
    /// Raw-basis coefficients in ascending-degree order, length
    /// `degree + 1`.
    pub coefficients: Vec<f64>,
    /// Euclidean norm of the residual vector at the optimum.
    pub residual_norm: f64,
    /// Center of the fitted `x` values (their mean).
    pub x_offset: f64,
    /// Half-range of the fitted `x` values (`max |x - x_offset|`).
    pub x_scale: f64,
    /// Coefficients over `z = (x - x_offset) / x_scale`, ascending.
    pub scaled_coefficients: Vec<f64>,
}

impl PolyFit {
    /// Evaluates the fit at `x` through the well-conditioned scaled
    /// basis (Horner's rule).
    pub fn evaluate(&self, x: f64) -> f64 {
        let z = (x - self.x_offset) / self.x_scale;
        self.scaled_coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * z + c)
    }
}

/// Fit a polynomial of the given degree to `(x, y)` points by least
/// squares.
///
/// The design matrix is built over the centered and scaled abscissa
/// `z = (x - mean) / max|x - mean|`, which keeps the Vandermonde
/// columns comparable even when `x` spans several orders of magnitude
/// (net-migration figures reach hundreds of thousands); the solution
/// is then re-expressed in the raw basis, an exact change of basis for
/// polynomials.
///
/// Requires `degree >= 1`, at least `degree + 1` points, and finite
/// coordinates. A rank-deficient design — e.g. all `x` equal, or fewer
/// distinct `x` than coefficients — is reported as an error rather
/// than solved in the pseudoinverse sense.
pub fn fit_polynomial(points: &[(f64, f64)], degree: usize) -> Result<PolyFit> {
    if degree == 0 {
        return Err(Error::InvalidArg("degree must be at least 1".into()));
    }
    let cols = degree + 1;
    if points.len() < cols {
        return Err(Error::InvalidArg(format!(
            "need at least {cols} points for degree {degree}, got {}",
            points.len()
        )));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::InvalidArg("points must be finite".into()));
    }

    let x_offset = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let x_scale = points
        .iter()
        .map(|p| (p.0 - x_offset).abs())
        .fold(0.0, f64::max);
    if x_scale == 0.0 {
        // Every x identical: the columns beyond the intercept vanish.
        return Err(Error::RankDeficient);
    }

    let z = |x: f64| (x - x_offset) / x_scale;
    let design = DMatrix::from_fn(points.len(), cols, |r, c| z(points[r].0).powi(c as i32));
    let y = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));

    let svd = design.clone().svd(true, true);
    let max_sv = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = max_sv * 1e-10;
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    if max_sv == 0.0 || rank < cols {
        return Err(Error::RankDeficient);
    }
    let solution = svd
        .solve(&y, tol)
        .map_err(|e| Error::Divergence(e.to_string()))?;
    let residual_norm = (&design * &solution - &y).norm();
    let scaled_coefficients: Vec<f64> = solution.iter().copied().collect();

    // Change of basis back to raw x: expand each d_k ((x - u)/s)^k via
    // the binomial theorem and collect powers of x.
    let mut coefficients = vec![0.0; cols];
    for (k, &dk) in scaled_coefficients.iter().enumerate() {
        let dk_scaled = dk / x_scale.powi(k as i32);
        let mut binom = 1.0; // C(k, 0)
        for j in 0..=k {
            coefficients[j] += dk_scaled * binom * (-x_offset).powi((k - j) as i32);
            binom = binom * (k - j) as f64 / (j + 1) as f64; // C(k, j+1)
        }
    }

    Ok(PolyFit {
        coefficients,
        residual_norm,
        x_offset,
        x_scale,
        scaled_coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_an_exact_line() {
        let points: Vec<(f64, f64)> = [0.0, 1.0, 2.0, 3.0]
            .iter()
            .map(|&x| (x, 2.0 * x + 1.0))
            .collect();
        let fit = fit_polynomial(&points, 1).unwrap();
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-9);
        assert!((fit.coefficients[1] - 2.0).abs() < 1e-9);
        assert!(fit.residual_norm < 1e-9);
    }

    #[test]
    fn recovers_an_exact_parabola() {
        let points: Vec<(f64, f64)> = [-1.0, 0.0, 1.0, 2.0].iter().map(|&x| (x, x * x)).collect();
        let fit = fit_polynomial(&points, 2).unwrap();
        assert!(fit.coefficients[0].abs() < 1e-9);
        assert!(fit.coefficients[1].abs() < 1e-9);
        assert!((fit.coefficients[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn identical_x_values_are_rank_deficient() {
        let points = [(2.0, 1.0), (2.0, 2.0), (2.0, 3.0)];
        assert!(matches!(
            fit_polynomial(&points, 1),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn too_few_distinct_x_values_are_rank_deficient() {
        // Two distinct abscissas cannot pin down a parabola.
        let points = [(0.0, 1.0), (0.0, 1.0), (1.0, 2.0), (1.0, 2.0)];
        assert!(matches!(
            fit_polynomial(&points, 2),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn argument_preconditions_are_enforced() {
        let points = [(0.0, 0.0), (1.0, 1.0)];
        assert!(matches!(
            fit_polynomial(&points, 0),
            Err(Error::InvalidArg(_))
        ));
        assert!(matches!(
            fit_polynomial(&points, 2),
            Err(Error::InvalidArg(_))
        ));
        assert!(matches!(
            fit_polynomial(&[(f64::NAN, 0.0), (1.0, 1.0)], 1),
            Err(Error::InvalidArg(_))
        ));
    }

    #[test]
    fn scaled_and_raw_forms_agree_on_the_data() {
        use rand::Rng;
        let mut rng = crate::seed::rng(3, "polyfit-basis");
        let points: Vec<(f64, f64)> = (0..25)
            .map(|i| {
                let x = i as f64 - 12.0;
                let noise: f64 = rng.random_range(-0.3..0.3);
                (x, 0.5 * x * x - 3.0 * x + noise)
            })
            .collect();
        let fit = fit_polynomial(&points, 2).unwrap();
        for &(x, _) in &points {
            let raw: f64 = fit
                .coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| c * x.powi(k as i32))
                .sum();
            assert!((raw - fit.evaluate(x)).abs() < 1e-9 * (1.0 + raw.abs()));
        }
    }

    #[test]
    fn survives_migration_scale_abscissas() {
        // Cubic over x spanning about a million, the scale of net
        // migration figures. A raw Vandermonde matrix would span 17
        // orders of magnitude and lose rank numerically.
        let truth = |x: f64| 40.0 + 3e-5 * x + 2e-11 * x * x - 1e-17 * x * x * x;
        let points: Vec<(f64, f64)> = (0..60)
            .map(|i| {
                let x = -500_000.0 + i as f64 * 17_000.0;
                (x, truth(x))
            })
            .collect();
        let fit = fit_polynomial(&points, 3).unwrap();
        assert!(fit.residual_norm < 1e-6);
        for &(x, y) in &points {
            assert!((fit.evaluate(x) - y).abs() < 1e-6 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn fit_is_a_least_squares_optimum() {
        use rand::Rng;
        let mut rng = crate::seed::rng(11, "polyfit-optimum");
        // Noisy cubic.
        let points: Vec<(f64, f64)> = (0..30)
            .map(|i| {
                let x = -2.0 + i as f64 * 0.15;
                let noise: f64 = rng.random_range(-0.5..0.5);
                (x, 0.3 * x * x * x - x + 2.0 + noise)
            })
            .collect();
        let fit = fit_polynomial(&points, 3).unwrap();

        let residual_of = |coeffs: &[f64]| -> f64 {
            points
                .iter()
                .map(|&(x, y)| {
                    let mut pred = 0.0;
                    for (k, c) in coeffs.iter().enumerate() {
                        pred += c * x.powi(k as i32);
                    }
                    (y - pred) * (y - pred)
                })
                .sum::<f64>()
                .sqrt()
        };
        assert!((residual_of(&fit.coefficients) - fit.residual_norm).abs() < 1e-9);

        // No random perturbation of the coefficients does better.
        for _ in 0..500 {
            let perturbed: Vec<f64> = fit
                .coefficients
                .iter()
                .map(|c| c + rng.random_range(-0.2..0.2))
                .collect();
            assert!(residual_of(&perturbed) >= fit.residual_norm - 1e-9);
        }
    }
}
