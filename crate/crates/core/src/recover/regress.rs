use log::warn;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::library::{BasisLibrary, Feature};
use crate::error::{Error, Result};

/// Sparse fit of one target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub features: Vec<Feature>,
    pub coefficients: Vec<f64>,
    /// Indices of the nonzero coefficients.
    pub support: Vec<usize>,
    pub mse: f64,
    /// STLSQ threshold or LASSO penalty; `None` for plain least squares.
    pub penalty: Option<f64>,
}

impl FitResult {
    fn new(
        lib: &BasisLibrary,
        target: &[f64],
        coefficients: Vec<f64>,
        penalty: Option<f64>,
    ) -> Self {
        let support = (0..coefficients.len())
            .filter(|&j| coefficients[j] != 0.0)
            .collect();
        let mse = mse(lib, target, &coefficients);
        Self {
            features: lib.features.clone(),
            coefficients,
            support,
            mse,
            penalty,
        }
    }

    pub fn coefficient(&self, feature: &Feature) -> f64 {
        self.features
            .iter()
            .position(|f| f == feature)
            .map_or(0.0, |j| self.coefficients[j])
    }

    pub fn support_features(&self) -> Vec<&Feature> {
        self.support.iter().map(|&j| &self.features[j]).collect()
    }

    pub fn predict(&self, lib: &BasisLibrary) -> Vec<f64> {
        let x = DVector::from_column_slice(&self.coefficients);
        (&lib.matrix * x).iter().copied().collect()
    }
}

fn mse(lib: &BasisLibrary, target: &[f64], coef: &[f64]) -> f64 {
    let x = DVector::from_column_slice(coef);
    let r = &lib.matrix * x - DVector::from_column_slice(target);
    r.norm_squared() / target.len().max(1) as f64
}

fn check(lib: &BasisLibrary, target: &[f64]) -> Result<()> {
    if target.len() != lib.samples() {
        return Err(Error::Dimension {
            expected: lib.samples(),
            found: target.len(),
        });
    }
    if lib.samples() < lib.len() {
        return Err(Error::Rank(format!(
            "{} samples cannot determine {} features",
            lib.samples(),
            lib.len()
        )));
    }
    Ok(())
}

/// Least squares on the columns in `active`; the rest stay zero. Falls back
/// to the pseudo-inverse (with a warning) when the active columns are
/// numerically dependent.
fn least_squares_on(matrix: &DMatrix<f64>, target: &[f64], active: &[usize]) -> Vec<f64> {
    let mut coef = vec![0.0; matrix.ncols()];
    if active.is_empty() {
        return coef;
    }
    let sub = matrix.select_columns(active);
    // column scaling keeps powers of t comparable to the trig columns
    let scale: Vec<f64> = sub.column_iter().map(|c| c.norm().max(1e-300)).collect();
    let mut scaled = sub;
    for (j, s) in scale.iter().enumerate() {
        scaled.column_mut(j).unscale_mut(*s);
    }
    let svd = scaled.svd(true, true);
    let smax = svd.singular_values.max();
    let tol = 1e-12 * smax * (active.len() as f64);
    if svd.singular_values.iter().any(|&s| s <= tol) {
        warn!(
            "least squares: active set of {} columns is rank deficient, using the pseudo-inverse",
            active.len()
        );
    }
    let b = DVector::from_column_slice(target);
    let x = svd
        .solve(&b, tol)
        .expect("SVD was computed with both factors");
    for (j, &col) in active.iter().enumerate() {
        coef[col] = x[j] / scale[j];
    }
    coef
}

pub fn ols(lib: &BasisLibrary, target: &[f64]) -> Result<FitResult> {
    check(lib, target)?;
    let all: Vec<usize> = (0..lib.len()).collect();
    let coef = least_squares_on(&lib.matrix, target, &all);
    Ok(FitResult::new(lib, target, coef, None))
}

/// Sequentially thresholded least squares: refit on the surviving columns
/// and drop those below `threshold` until the support stops changing.
pub fn stlsq(lib: &BasisLibrary, target: &[f64], threshold: f64) -> Result<FitResult> {
    check(lib, target)?;
    let mut active: Vec<usize> = (0..lib.len()).collect();
    let mut coef = least_squares_on(&lib.matrix, target, &active);
    for _ in 0..100 {
        let next: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&j| coef[j].abs() >= threshold)
            .collect();
        if next == active {
            break;
        }
        active = next;
        coef = least_squares_on(&lib.matrix, target, &active);
    }
    for (j, c) in coef.iter_mut().enumerate() {
        if !active.contains(&j) {
            *c = 0.0;
        }
    }
    Ok(FitResult::new(lib, target, coef, Some(threshold)))
}

/// Settings of [`lasso`].
#[derive(Clone, Copy, Debug)]
pub struct LassoOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Refit the selected support without penalty.
    pub debias: bool,
    /// Scale every column to unit variance before penalizing. Without it the
    /// penalty acts on the raw coefficients.
    pub standardize: bool,
}

impl Default for LassoOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 100_000,
            debias: true,
            standardize: true,
        }
    }
}

/// Columns centred and scaled to unit variance; the constant column (if any)
/// becomes the unpenalized intercept.
struct Standardized {
    x: DMatrix<f64>,
    y: DVector<f64>,
    cols: Vec<usize>,
    mean: Vec<f64>,
    scale: Vec<f64>,
    y_mean: f64,
    intercept: Option<usize>,
}

impl Standardized {
    fn new(lib: &BasisLibrary, target: &[f64], standardize: bool) -> Self {
        let n = lib.samples() as f64;
        let intercept = lib.position(&Feature::Constant);
        let cols: Vec<usize> = (0..lib.len()).filter(|&j| Some(j) != intercept).collect();
        let centre = intercept.is_some();
        let mut x = lib.matrix.select_columns(&cols);
        let mut mean = Vec::with_capacity(cols.len());
        let mut scale = Vec::with_capacity(cols.len());
        for mut c in x.column_iter_mut() {
            let m = if centre { c.sum() / n } else { 0.0 };
            c.add_scalar_mut(-m);
            let s = if standardize {
                (c.norm_squared() / n).sqrt()
            } else {
                1.0
            };
            let s = if s > 1e-300 { s } else { 1.0 };
            c.unscale_mut(s);
            mean.push(m);
            scale.push(s);
        }
        let y_mean = if centre {
            target.iter().sum::<f64>() / n
        } else {
            0.0
        };
        let y = DVector::from_iterator(target.len(), target.iter().map(|v| v - y_mean));
        Self {
            x,
            y,
            cols,
            mean,
            scale,
            y_mean,
            intercept,
        }
    }

    fn lambda_max(&self) -> f64 {
        (self.x.transpose() * &self.y).amax() / self.y.len() as f64
    }

    /// Coordinate descent for `1/(2n) |y - X b|^2 + penalty |b|_1` from a warm
    /// start, stopped on the duality gap.
    fn solve(&self, penalty: f64, beta: &mut DVector<f64>, opts: &LassoOptions) -> Result<()> {
        let n = self.y.len() as f64;
        let p = self.x.ncols();
        let norms: Vec<f64> = self.x.column_iter().map(|c| c.norm_squared()).collect();
        let mut r = &self.y - &self.x * &*beta;
        let y_norm = self.y.norm_squared().max(1e-300);
        let mut gap = f64::INFINITY;
        for it in 0..opts.max_iter {
            for j in 0..p {
                if norms[j] == 0.0 {
                    continue;
                }
                let col = self.x.column(j);
                let old = beta[j];
                let rho = col.dot(&r) + norms[j] * old;
                let thr = penalty * n;
                let new = if rho > thr {
                    (rho - thr) / norms[j]
                } else if rho < -thr {
                    (rho + thr) / norms[j]
                } else {
                    0.0
                };
                if new != old {
                    r.axpy(old - new, &col, 1.0);
                    beta[j] = new;
                }
            }
            if it % 10 == 0 || it + 1 == opts.max_iter {
                let xtr = self.x.transpose() * &r;
                let dual_norm = xtr.amax();
                let bound = penalty * n;
                // without a penalty the residual itself is the dual point and
                // the gap reduces to |b . X^T r|
                let c = if bound > 0.0 && dual_norm > bound {
                    bound / dual_norm
                } else {
                    1.0
                };
                let r2 = r.norm_squared();
                gap =
                    (0.5 * r2 * (1.0 + c * c) + bound * beta.lp_norm(1) - c * r.dot(&self.y)).abs();
                gap /= n;
                if gap <= opts.tol * y_norm / n {
                    return Ok(());
                }
            }
        }
        Err(Error::Convergence {
            iterations: opts.max_iter,
            gap,
        })
    }

    /// Back to the original column scale, intercept included.
    fn restore(&self, beta: &DVector<f64>, width: usize) -> Vec<f64> {
        let mut coef = vec![0.0; width];
        let mut shift = 0.0;
        for (j, &col) in self.cols.iter().enumerate() {
            coef[col] = beta[j] / self.scale[j];
            shift += coef[col] * self.mean[j];
        }
        if let Some(i) = self.intercept {
            coef[i] = self.y_mean - shift;
        }
        coef
    }
}

fn finish(
    lib: &BasisLibrary,
    target: &[f64],
    mut coef: Vec<f64>,
    penalty: f64,
    opts: &LassoOptions,
) -> FitResult {
    if opts.debias {
        let active: Vec<usize> = (0..coef.len())
            .filter(|&j| coef[j] != 0.0 || lib.features[j] == Feature::Constant)
            .collect();
        coef = least_squares_on(&lib.matrix, target, &active);
    }
    FitResult::new(lib, target, coef, Some(penalty))
}

/// LASSO at a fixed penalty, on internally standardized columns.
pub fn lasso(
    lib: &BasisLibrary,
    target: &[f64],
    penalty: f64,
    opts: &LassoOptions,
) -> Result<FitResult> {
    check(lib, target)?;
    let st = Standardized::new(lib, target, opts.standardize);
    let mut beta = DVector::zeros(st.x.ncols());
    st.solve(penalty, &mut beta, opts)?;
    Ok(finish(
        lib,
        target,
        st.restore(&beta, lib.len()),
        penalty,
        opts,
    ))
}

/// Smallest penalty that zeroes every coefficient.
pub fn lasso_lambda_max(lib: &BasisLibrary, target: &[f64], opts: &LassoOptions) -> f64 {
    Standardized::new(lib, target, opts.standardize).lambda_max()
}

/// Scans 50 log-spaced penalties from `lambda_max` down to `1e-4 lambda_max`
/// and keeps the largest one whose (undebiased) MSE stays within
/// `mse_factor` times the least-squares MSE.
pub fn lasso_auto(
    lib: &BasisLibrary,
    target: &[f64],
    mse_factor: f64,
    opts: &LassoOptions,
) -> Result<FitResult> {
    check(lib, target)?;
    let st = Standardized::new(lib, target, opts.standardize);
    let best = ols(lib, target)?.mse;
    let lmax = st.lambda_max();
    let mut beta = DVector::zeros(st.x.ncols());
    const POINTS: usize = 50;
    for i in 0..POINTS {
        let penalty = lmax * 10f64.powf(-4.0 * i as f64 / (POINTS - 1) as f64);
        st.solve(penalty, &mut beta, opts)?;
        let coef = st.restore(&beta, lib.len());
        if mse(lib, target, &coef) <= mse_factor * best {
            return Ok(finish(lib, target, coef, penalty, opts));
        }
    }
    warn!("lasso_auto: no penalty on the path met the MSE rule, using the smallest");
    let coef = st.restore(&beta, lib.len());
    Ok(finish(lib, target, coef, lmax * 1e-4, opts))
}

/// Largest KKT violation `|x_j . r| / n - penalty` over the zero
/// coefficients of an undebiased standardized solution (non-positive at the
/// optimum).
pub fn lasso_kkt_violation(
    lib: &BasisLibrary,
    target: &[f64],
    penalty: f64,
    opts: &LassoOptions,
) -> Result<f64> {
    check(lib, target)?;
    let st = Standardized::new(lib, target, opts.standardize);
    let mut beta = DVector::zeros(st.x.ncols());
    st.solve(penalty, &mut beta, opts)?;
    let r = &st.y - &st.x * &beta;
    let n = st.y.len() as f64;
    let xtr = st.x.transpose() * r;
    Ok((0..beta.len())
        .filter(|&j| beta[j] == 0.0)
        .map(|j| xtr[j].abs() / n - penalty)
        .fold(f64::NEG_INFINITY, f64::max))
}
