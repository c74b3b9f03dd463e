//! Least squares with intercept, coefficient of determination, and
//! L1-penalized least squares with BIC-selected penalty.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::anm::Dataset;
use crate::error::{Error, Result};

/// A fitted linear model `y ≈ intercept + X · coefficients`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    /// Residual sum of squares.
    pub rss: f64,
    pub n: usize,
    /// Set when the centered design had deficient rank and the minimum-norm
    /// least-squares solution was returned.
    pub rank_deficient: bool,
}

impl LinearFit {
    fn intercept_only(y_mean: f64, tss: f64, n: usize, p: usize) -> Self {
        LinearFit { coefficients: vec![0.0; p], intercept: y_mean, rss: tss, n, rank_deficient: false }
    }

    pub fn predict(&self, x: &DMatrix<f64>) -> DVector<f64> {
        let beta = DVector::from_column_slice(&self.coefficients);
        (x * beta).add_scalar(self.intercept)
    }

    pub fn nonzero(&self) -> usize {
        self.coefficients.iter().filter(|c| **c != 0.0).count()
    }
}

/// Centered design with unit-norm columns. Columns without spread get scale 0
/// and are excluded from the fit.
struct CenteredDesign {
    z: DMatrix<f64>,
    yc: DVector<f64>,
    x_means: Vec<f64>,
    /// Norm of each centered column; 0 marks a dropped column.
    scales: Vec<f64>,
    y_mean: f64,
    live: Vec<usize>,
}

fn is_flat(centered_norm: f64, mean: f64, n: usize) -> bool {
    !(centered_norm > 0.0) || centered_norm <= mean.abs() * (n as f64).sqrt() * f64::EPSILON * 4.0
}

fn center(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<CenteredDesign> {
    let n = y.len();
    if x.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.nrows() });
    }
    if n == 0 {
        return Err(Error::invalid("regression needs at least one observation"));
    }
    let y_mean = y.mean();
    let yc = y.add_scalar(-y_mean);
    let p = x.ncols();
    let mut x_means = Vec::with_capacity(p);
    let mut scales = Vec::with_capacity(p);
    let mut live = Vec::with_capacity(p);
    let mut z = DMatrix::zeros(n, 0);
    let mut cols = Vec::with_capacity(p);
    for j in 0..p {
        let mean = x.column(j).mean();
        let col = x.column(j).add_scalar(-mean);
        let norm = col.norm();
        x_means.push(mean);
        if is_flat(norm, mean, n) {
            scales.push(0.0);
        } else {
            scales.push(norm);
            live.push(j);
            cols.push(col / norm);
        }
    }
    if !cols.is_empty() {
        z = DMatrix::from_columns(&cols);
    }
    Ok(CenteredDesign { z, yc, x_means, scales, y_mean, live })
}

/// Minimum-norm solution of `min ‖yc − z β‖` for a centered design.
fn least_squares(z: &DMatrix<f64>, yc: &DVector<f64>) -> (DVector<f64>, bool) {
    let (n, p) = z.shape();
    if p == 0 {
        return (DVector::zeros(0), false);
    }
    let (square, rhs) = if n >= p {
        let qr = z.clone().qr();
        let mut qty = yc.clone();
        qr.q_tr_mul(&mut qty);
        (qr.r(), qty.rows(0, p).into_owned())
    } else {
        (z.clone(), yc.clone())
    };
    let svd = square.svd(true, true);
    let smax = svd.singular_values.max();
    let tol = smax * (n.max(p) as f64) * f64::EPSILON;
    let rank = svd.singular_values.iter().filter(|s| **s > tol).count();
    let beta = svd.solve(&rhs, tol).expect("U and V were computed");
    (beta, rank < p)
}

/// Ordinary least squares with an intercept.
///
/// Rank-deficient designs (including `n ≤ p + 1` and constant predictors)
/// return the minimum-norm solution with `rank_deficient` set.
pub fn ols_fit(predictors: &DMatrix<f64>, target: &DVector<f64>) -> Result<LinearFit> {
    let cd = center(predictors, target)?;
    let p = predictors.ncols();
    let (beta, mut deficient) = least_squares(&cd.z, &cd.yc);
    deficient |= cd.live.len() < p;
    let residual = &cd.yc - &cd.z * &beta;
    let mut coefficients = vec![0.0; p];
    for (k, &j) in cd.live.iter().enumerate() {
        coefficients[j] = beta[k] / cd.scales[j];
    }
    let intercept = cd.y_mean - coefficients.iter().zip(&cd.x_means).map(|(c, m)| c * m).sum::<f64>();
    Ok(LinearFit { coefficients, intercept, rss: residual.norm_squared(), n: target.len(), rank_deficient: deficient })
}

fn check_target(data: &Dataset, t: usize) -> Result<f64> {
    let col = data.values().column(t);
    let mean = col.mean();
    let tss = col.add_scalar(-mean).norm_squared();
    if is_flat(tss.sqrt(), mean, data.n()) {
        return Err(Error::DegenerateColumn { column: t, name: data.names().map(|n| n[t].clone()) });
    }
    Ok(tss)
}

/// In-sample coefficient of determination of `X_t` regressed on `X_S` with
/// intercept, clipped to `[0, 1]`.
pub fn r_squared(data: &Dataset, t: usize, s: &[usize]) -> Result<f64> {
    let d = data.d();
    if t >= d || s.iter().any(|&j| j >= d) {
        return Err(Error::invalid("node index out of range"));
    }
    if s.contains(&t) {
        return Err(Error::invalid(format!("target {t} is among its own predictors")));
    }
    let tss = check_target(data, t)?;
    if s.is_empty() {
        return Ok(0.0);
    }
    let fit = ols_fit(&data.columns(s), &data.column(t))?;
    Ok((1.0 - fit.rss / tss).clamp(0.0, 1.0))
}

/// R² of every column regressed on all remaining columns, from a single QR
/// factorization of the centered, column-normalized data.
///
/// With unit-norm centered columns and `X = QR`, the residual sum of squares
/// of column `t` on the others is `1 / ‖row_t(R⁻¹)‖²`. Falls back to one OLS
/// fit per column when `R` is numerically singular.
pub fn r_squared_each_on_rest(data: &Dataset) -> Result<Vec<f64>> {
    let (n, d) = (data.n(), data.d());
    for t in 0..d {
        check_target(data, t)?;
    }
    if d == 1 {
        return Ok(vec![0.0]);
    }
    let per_column = || -> Result<Vec<f64>> {
        (0..d)
            .map(|t| {
                let rest: Vec<usize> = (0..d).filter(|&j| j != t).collect();
                r_squared(data, t, &rest)
            })
            .collect()
    };
    if n <= d {
        return per_column();
    }
    let mut z = data.values().clone();
    for t in 0..d {
        let mut col = z.column_mut(t);
        let mean = col.mean();
        col.add_scalar_mut(-mean);
        let norm = col.norm();
        col.unscale_mut(norm);
    }
    let r = z.qr().r();
    let diag_max = r.diagonal().amax();
    let diag_min = r.diagonal().amin();
    if !(diag_min > diag_max * (n as f64) * f64::EPSILON * 16.0) {
        return per_column();
    }
    let r_inv = match r.solve_upper_triangular(&DMatrix::identity(d, d)) {
        Some(inv) => inv,
        None => return per_column(),
    };
    Ok((0..d)
        .map(|t| {
            let g = r_inv.row(t).norm_squared();
            (1.0 - 1.0 / g).clamp(0.0, 1.0)
        })
        .collect())
}

/// Bayesian information criterion `n ln(rss / n) + k ln(n)`.
pub fn bic(rss: f64, n: usize, k: usize) -> f64 {
    let nf = n as f64;
    nf * (rss.max(f64::MIN_POSITIVE) / nf).ln() + k as f64 * nf.ln()
}

/// Settings for the L1 path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LassoOptions {
    /// Number of geometrically spaced penalties from `λ_max` downward.
    pub n_lambdas: usize,
    /// Smallest grid penalty as a fraction of `λ_max`.
    pub lambda_ratio: f64,
    /// Coordinate descent stops once no coefficient moves by more than this
    /// (standardized scale).
    pub tol: f64,
    pub max_sweeps: usize,
    /// Append the unpenalized least-squares fit as the final path point.
    pub include_unpenalized: bool,
}

impl Default for LassoOptions {
    fn default() -> Self {
        LassoOptions { n_lambdas: 100, lambda_ratio: 1e-3, tol: 1e-8, max_sweeps: 10_000, include_unpenalized: true }
    }
}

/// Coordinate descent on `(1/2n)‖yc − Zβ‖² + λ‖β‖₁` for a centered design,
/// run on the Gram form `G = ZᵀZ / n`, `c = Zᵀyc / n` so that an update costs
/// `O(p)`. `g_beta` must equal `Gβ` on entry and is kept in sync.
fn coordinate_descent(
    design: &LassoDesign,
    beta: &mut [f64],
    g_beta: &mut [f64],
    lambda: f64,
    opts: &LassoOptions,
    mut trace: Option<&mut Vec<f64>>,
) -> usize {
    let (gram, c) = (&design.gram, &design.zty);
    let p = beta.len();
    for sweep in 1..=opts.max_sweeps {
        let mut max_delta = 0.0f64;
        for j in 0..p {
            let gjj = gram[(j, j)];
            let rho = c[j] - g_beta[j] + gjj * beta[j];
            let updated = soft_threshold(rho, lambda) / gjj;
            let delta = updated - beta[j];
            if delta != 0.0 {
                for (k, gb) in g_beta.iter_mut().enumerate() {
                    *gb += delta * gram[(k, j)];
                }
                beta[j] = updated;
                max_delta = max_delta.max(delta.abs());
            }
        }
        if let Some(t) = trace.as_deref_mut() {
            let nf = design.z.nrows() as f64;
            t.push(design.rss(beta) / (2.0 * nf) + lambda * beta.iter().map(|b| b.abs()).sum::<f64>());
        }
        if max_delta < opts.tol {
            return sweep;
        }
    }
    opts.max_sweeps
}

fn soft_threshold(x: f64, lambda: f64) -> f64 {
    if x > lambda {
        x - lambda
    } else if x < -lambda {
        x + lambda
    } else {
        0.0
    }
}

/// Centered design whose columns have unit mean square (`‖z_j‖² = n`).
struct LassoDesign {
    cd: CenteredDesign,
    z: DMatrix<f64>,
    /// `ZᵀZ / n`.
    gram: DMatrix<f64>,
    /// `Zᵀyc / n`.
    zty: Vec<f64>,
}

fn lasso_design(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<LassoDesign> {
    let cd = center(x, y)?;
    let nf = y.len() as f64;
    let z = &cd.z * nf.sqrt();
    let gram = z.tr_mul(&z) / nf;
    let zty = (z.tr_mul(&cd.yc) / nf).iter().copied().collect();
    Ok(LassoDesign { cd, z, gram, zty })
}

impl LassoDesign {
    /// `‖yc − Zβ‖²` from the data, exact where the Gram form would cancel.
    fn rss(&self, beta: &[f64]) -> f64 {
        let mut residual = self.cd.yc.clone();
        for (j, &b) in beta.iter().enumerate() {
            if b != 0.0 {
                residual.axpy(-b, &self.z.column(j), 1.0);
            }
        }
        residual.norm_squared()
    }

    fn to_fit(&self, beta: &[f64], rss: f64, p: usize, n: usize) -> LinearFit {
        let root_n = (n as f64).sqrt();
        let mut coefficients = vec![0.0; p];
        for (k, &j) in self.cd.live.iter().enumerate() {
            coefficients[j] = beta[k] * root_n / self.cd.scales[j];
        }
        let intercept = self.cd.y_mean - coefficients.iter().zip(&self.cd.x_means).map(|(c, m)| c * m).sum::<f64>();
        LinearFit { coefficients, intercept, rss, n, rank_deficient: false }
    }

    fn lambda_max(&self) -> f64 {
        self.zty.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }
}

/// Smallest penalty whose solution is entirely zero (standardized predictors).
pub fn lambda_max(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<f64> {
    Ok(lasso_design(x, y)?.lambda_max())
}

/// Lasso solution at a single penalty, starting from zero.
pub fn lasso_fit(x: &DMatrix<f64>, y: &DVector<f64>, lambda: f64, opts: &LassoOptions) -> Result<LinearFit> {
    Ok(lasso_fit_traced(x, y, lambda, opts)?.0)
}

/// Like [`lasso_fit`], also returning the objective after every sweep.
pub fn lasso_fit_traced(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    lambda: f64,
    opts: &LassoOptions,
) -> Result<(LinearFit, Vec<f64>)> {
    if !(lambda >= 0.0) {
        return Err(Error::invalid(format!("penalty must be nonnegative, got {lambda}")));
    }
    let design = lasso_design(x, y)?;
    let p = design.z.ncols();
    let (mut beta, mut g_beta) = (vec![0.0; p], vec![0.0; p]);
    let mut trace = Vec::new();
    coordinate_descent(&design, &mut beta, &mut g_beta, lambda, opts, Some(&mut trace));
    let fit = design.to_fit(&beta, design.rss(&beta), x.ncols(), y.len());
    Ok((fit, trace))
}

/// Every fit along the penalty path and its BIC.
#[derive(Debug, Clone)]
pub struct LassoPath {
    /// Penalties in decreasing order; a trailing `0.0` is the unpenalized fit.
    pub lambdas: Vec<f64>,
    pub fits: Vec<LinearFit>,
    pub bic: Vec<f64>,
    /// Index of the BIC minimizer (first one on ties, i.e. the sparsest).
    pub selected: usize,
}

impl LassoPath {
    pub fn best(&self) -> &LinearFit {
        &self.fits[self.selected]
    }
}

/// Warm-started coordinate descent along a geometric grid from `λ_max` down
/// to `λ_max · lambda_ratio`, optionally closed by the OLS fit, scored by
/// BIC with `k = nonzero coefficients + 1`.
pub fn lasso_path(x: &DMatrix<f64>, y: &DVector<f64>, opts: &LassoOptions) -> Result<LassoPath> {
    let n = y.len();
    if n <= 2 {
        return Err(Error::invalid(format!("penalized regression needs n > 2, got {n}")));
    }
    if opts.n_lambdas == 0 || !(opts.lambda_ratio > 0.0 && opts.lambda_ratio < 1.0) {
        return Err(Error::invalid("lasso grid needs n_lambdas ≥ 1 and 0 < lambda_ratio < 1"));
    }
    let p = x.ncols();
    let design = lasso_design(x, y)?;
    let tss = design.cd.yc.norm_squared();
    let lmax = design.lambda_max();

    let mut lambdas = Vec::new();
    let mut fits = Vec::new();
    if lmax > 0.0 && design.z.ncols() > 0 {
        let (mut beta, mut g_beta) = (vec![0.0; design.z.ncols()], vec![0.0; design.z.ncols()]);
        let steps = opts.n_lambdas.max(2) - 1;
        for k in 0..opts.n_lambdas {
            let lambda = if k == 0 { lmax } else { lmax * opts.lambda_ratio.powf(k as f64 / steps as f64) };
            coordinate_descent(&design, &mut beta, &mut g_beta, lambda, opts, None);
            lambdas.push(lambda);
            fits.push(design.to_fit(&beta, design.rss(&beta), p, n));
        }
    } else {
        lambdas.push(0.0);
        fits.push(LinearFit::intercept_only(design.cd.y_mean, tss, n, p));
    }
    if opts.include_unpenalized && p > 0 {
        lambdas.push(0.0);
        fits.push(ols_fit(x, y)?);
    }
    let scores: Vec<f64> = fits.iter().map(|f| bic(f.rss, n, f.nonzero() + 1)).collect();
    let mut selected = 0;
    for (k, s) in scores.iter().enumerate() {
        if *s < scores[selected] {
            selected = k;
        }
    }
    Ok(LassoPath { lambdas, fits, bic: scores, selected })
}

/// The BIC-selected fit from [`lasso_path`] with default options.
pub fn lasso_path_bic(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<LinearFit> {
    lasso_path_bic_with(x, y, &LassoOptions::default())
}

pub fn lasso_path_bic_with(x: &DMatrix<f64>, y: &DVector<f64>, opts: &LassoOptions) -> Result<LinearFit> {
    let path = lasso_path(x, y, opts)?;
    Ok(path.fits[path.selected].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column(v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_column_slice(v.len(), 1, v)
    }

    #[test]
    fn exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y = DVector::from_iterator(5, x.iter().map(|v| 2.0 * v + 1.0));
        let fit = ols_fit(&column(&x), &y).unwrap();
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-12);
        assert!(fit.rss < 1e-20);
        assert!(!fit.rank_deficient);
    }

    #[test]
    fn empty_predictor_set_gives_mean() {
        let y = DVector::from_vec(vec![1.0, 2.0, 6.0]);
        let fit = ols_fit(&DMatrix::zeros(3, 0), &y).unwrap();
        assert!((fit.intercept - 3.0).abs() < 1e-12);
        assert!((fit.rss - 3.0 * y.variance()).abs() < 1e-12);
    }

    #[test]
    fn duplicated_predictor_is_flagged_and_min_norm() {
        let x = DMatrix::from_row_slice(4, 2, &[0.0, 0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0]);
        let y = DVector::from_vec(vec![0.0, 2.0, 4.0, 6.0]);
        let fit = ols_fit(&x, &y).unwrap();
        assert!(fit.rank_deficient);
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-10);
        assert!((fit.coefficients[1] - 1.0).abs() < 1e-10);
        assert!(fit.rss < 1e-20);
    }

    #[test]
    fn constant_predictor_is_dropped() {
        let x = DMatrix::from_row_slice(3, 2, &[5.0, 0.0, 5.0, 1.0, 5.0, 2.0]);
        let y = DVector::from_vec(vec![1.0, 3.0, 5.0]);
        let fit = ols_fit(&x, &y).unwrap();
        assert!(fit.rank_deficient);
        assert_eq!(fit.coefficients[0], 0.0);
        assert!((fit.coefficients[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn r_squared_edge_cases() {
        let ds = Dataset::from_rows(4, 3, &[0.0, 1.0, 7.0, 1.0, 3.0, 7.0, 2.0, 5.0, 7.0, 3.0, 7.0, 7.0]).unwrap();
        assert!((r_squared(&ds, 1, &[0]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r_squared(&ds, 1, &[]).unwrap(), 0.0);
        assert!(matches!(r_squared(&ds, 2, &[0]), Err(Error::DegenerateColumn { column: 2, .. })));
        assert!(r_squared(&ds, 1, &[1]).is_err());
    }

    #[test]
    fn soft_threshold_cases() {
        assert_eq!(soft_threshold(3.0, 1.0), 2.0);
        assert_eq!(soft_threshold(-3.0, 1.0), -2.0);
        assert_eq!(soft_threshold(0.5, 1.0), 0.0);
    }

    #[test]
    fn bic_counts_parameters() {
        assert!((bic(10.0, 10, 1) - 10f64.ln()).abs() < 1e-12);
        assert!(bic(0.0, 10, 1).is_finite());
    }

    #[test]
    fn lasso_picks_up_strong_signal() {
        let x: Vec<f64> = (0..50).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
        let y = DVector::from_iterator(50, x.iter().map(|v| 3.0 * v));
        let fit = lasso_path_bic(&column(&x), &y).unwrap();
        assert!((fit.coefficients[0] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn lasso_path_needs_three_rows() {
        let y = DVector::from_vec(vec![1.0, 2.0]);
        assert!(lasso_path_bic(&column(&[0.0, 1.0]), &y).is_err());
    }
}
