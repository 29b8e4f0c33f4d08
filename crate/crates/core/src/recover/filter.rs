use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Centred differences in the interior, one-sided at the two ends.
pub fn central_difference(x: &[f64], dt: f64) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|i| {
            if i == 0 {
                (x[1] - x[0]) / dt
            } else if i == n - 1 {
                (x[n - 1] - x[n - 2]) / dt
            } else {
                (x[i + 1] - x[i - 1]) / (2.0 * dt)
            }
        })
        .collect()
}

/// Centred moving average; the window shrinks symmetrically at the ends.
pub fn rolling_mean(x: &[f64], window: usize) -> Vec<f64> {
    savitzky_golay(x, window | 1, 0).unwrap_or_else(|_| x.to_vec())
}

fn prefix(x: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len() + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for v in x {
        acc += v;
        out.push(acc);
    }
    out
}

/// Central value of the least-squares polynomial of degree `order` fitted
/// on `[-h, h]`, as convolution weights.
fn sg_weights(h: usize, order: usize) -> Vec<f64> {
    let w = 2 * h + 1;
    let v = DMatrix::from_fn(w, order + 1, |i, j| (i as f64 - h as f64).powi(j as i32));
    let vtv = v.transpose() * &v;
    let inv = vtv
        .try_inverse()
        .expect("Vandermonde normal matrix is invertible when window > order");
    let e0 = DVector::from_fn(order + 1, |i, _| if i == 0 { 1.0 } else { 0.0 });
    let row = v * (inv * e0);
    row.iter().copied().collect()
}

/// Savitzky-Golay smoothing with an odd window of `window` samples. Near the
/// ends the window shrinks symmetrically, so polynomials of degree `<= order`
/// pass through unchanged everywhere.
pub fn savitzky_golay(x: &[f64], window: usize, order: usize) -> Result<Vec<f64>> {
    if window % 2 == 0 || window <= order {
        return Err(Error::Config(format!(
            "Savitzky-Golay window must be odd and larger than the order (window {window}, order {order})"
        )));
    }
    let n = x.len();
    let h = window / 2;
    if order <= 1 {
        // a symmetric window makes the linear term drop out of the centre value
        let s = prefix(x);
        return Ok((0..n)
            .map(|i| {
                let r = h.min(i).min(n - 1 - i);
                (s[i + r + 1] - s[i - r]) / (2 * r + 1) as f64
            })
            .collect());
    }
    let mut cache: Vec<Option<Vec<f64>>> = vec![None; h + 1];
    let mut out = vec![0.0; n];
    for i in 0..n {
        let r = h.min(i).min(n - 1 - i);
        if 2 * r < order {
            out[i] = x[i];
            continue;
        }
        let w = cache[r].get_or_insert_with(|| sg_weights(r, order));
        out[i] = w.iter().zip(&x[i - r..=i + r]).map(|(a, b)| a * b).sum();
    }
    Ok(out)
}

/// Window length in samples for a time span, rounded to the nearest odd count.
pub fn window_samples(span: f64, dt: f64) -> usize {
    ((span / dt).round() as usize) | 1
}
