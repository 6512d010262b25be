use super::Tensor;
use crate::error::{Error, Result};

/// Relative cutoff used by [`pseudoinverse_default`].
pub const DEFAULT_PINV_TOL: f64 = f64::EPSILON;

const MAX_SWEEPS: usize = 100;

/// Thin singular value decomposition `A = U diag(s) Vᵀ` of a `rows × cols`
/// matrix, `k = min(rows, cols)`. `u` is `rows × k`, `v` is `cols × k`, both
/// row-major. Singular values are sorted in decreasing order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub rows: usize,
    pub cols: usize,
    pub u: Vec<f64>,
    pub s: Vec<f64>,
    pub v: Vec<f64>,
}

/// One-sided Jacobi SVD.
pub fn svd(m: &Tensor) -> Result<Svd> {
    m.expect_rank(2)?;
    let (rows, cols) = (m.axes()[0].dim(), m.axes()[1].dim());
    if rows >= cols {
        let (u, s, v) = jacobi(m.data(), rows, cols);
        Ok(Svd {
            rows,
            cols,
            u,
            s,
            v,
        })
    } else {
        // A = (Aᵀ)ᵀ = (U' S V'ᵀ)ᵀ = V' S U'ᵀ
        let mut at = vec![0.0; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                at[j * rows + i] = m.data()[i * cols + j];
            }
        }
        let (u, s, v) = jacobi(&at, cols, rows);
        Ok(Svd {
            rows,
            cols,
            u: v,
            s,
            v: u,
        })
    }
}

/// Requires `m >= n`. Returns `(U m×n, s n, V n×n)`.
fn jacobi(a: &[f64], m: usize, n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut u = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    let (x, y) = (u[i * n + p], u[i * n + q]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (u[i * n + p], u[i * n + q]);
                    u[i * n + p] = c * x - s * y;
                    u[i * n + q] = s * x + c * y;
                }
                for i in 0..n {
                    let (x, y) = (v[i * n + p], v[i * n + q]);
                    v[i * n + p] = c * x - s * y;
                    v[i * n + q] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = (0..n)
        .map(|j| {
            (0..m)
                .map(|i| u[i * n + j] * u[i * n + j])
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    for (j, &sj) in sigma.iter().enumerate() {
        if sj > 0.0 {
            for i in 0..m {
                u[i * n + j] /= sj;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let permute = |x: &[f64], rows: usize| -> Vec<f64> {
        let mut out = vec![0.0; rows * n];
        for i in 0..rows {
            for (k, &j) in order.iter().enumerate() {
                out[i * n + k] = x[i * n + j];
            }
        }
        out
    };
    let (u, v) = (permute(&u, m), permute(&v, n));
    sigma = order.iter().map(|&j| sigma[j]).collect();
    (u, sigma, v)
}

/// Moore–Penrose pseudoinverse by SVD. Singular values below
/// `tol · σ_max · max(rows, cols)` are treated as zero. The result has the
/// transposed axis signature `(cols, rows)`.
pub fn pseudoinverse(m: &Tensor, tol: f64) -> Result<Tensor> {
    if tol.is_nan() || tol < 0.0 || !tol.is_finite() {
        return Err(Error::Shape(format!(
            "pseudoinverse tolerance must be finite and >= 0, got {tol}"
        )));
    }
    let Svd {
        rows,
        cols,
        u,
        s,
        v,
    } = svd(m)?;
    let k = rows.min(cols);
    let smax = s.first().copied().unwrap_or(0.0);
    let cutoff = tol * smax * rows.max(cols) as f64;

    let mut data = vec![0.0; cols * rows];
    for (l, &sl) in s.iter().enumerate() {
        if sl <= cutoff || sl == 0.0 {
            continue;
        }
        let inv = 1.0 / sl;
        for i in 0..cols {
            let vi = v[i * k + l] * inv;
            if vi == 0.0 {
                continue;
            }
            for j in 0..rows {
                data[i * rows + j] += vi * u[j * k + l];
            }
        }
    }
    Tensor::new(vec![m.axes()[1].clone(), m.axes()[0].clone()], data)
}

pub fn pseudoinverse_default(m: &Tensor) -> Result<Tensor> {
    pseudoinverse(m, DEFAULT_PINV_TOL)
}
