//! Dense real tensors over named spaces.
//!
//! Storage is row-major in axis order: the first axis varies slowest and the
//! last axis fastest. Every flattening in the crate (lexicon files, `W·f`
//! matrices, Kronecker products) uses this layout.

mod contract;
mod linalg;

pub use contract::{contract, AxisRef};
pub use linalg::{pseudoinverse, pseudoinverse_default, svd, Svd, DEFAULT_PINV_TOL};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite-dimensional real vector space with a fixed orthonormal basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Space {
    name: String,
    dim: usize,
}

impl Space {
    pub fn new(name: impl Into<String>, dim: usize) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Shape("space name must be non-empty".into()));
        }
        if dim == 0 {
            return Err(Error::Shape(format!("space `{name}` must have dim >= 1")));
        }
        Ok(Space { name, dim })
    }

    /// Anonymous `R^dim`.
    pub fn real(dim: usize) -> Result<Self> {
        Space::new(format!("R{dim}"), dim)
    }

    /// The tensor product of several spaces, flattened row-major.
    /// The empty product is the one-dimensional unit space.
    pub fn product(spaces: &[Space]) -> Space {
        if spaces.len() == 1 {
            return spaces[0].clone();
        }
        if spaces.is_empty() {
            return Space {
                name: "I".into(),
                dim: 1,
            };
        }
        Space {
            name: spaces
                .iter()
                .map(|s| s.name.as_str())
                .collect::<Vec<_>>()
                .join("⊗"),
            dim: spaces.iter().map(|s| s.dim).product(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name, self.dim)
    }
}

/// Dense real tensor with an ordered axis signature.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    axes: Vec<Space>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn new(axes: Vec<Space>, data: Vec<f64>) -> Result<Self> {
        let expected: usize = axes.iter().map(Space::dim).product();
        if data.len() != expected {
            return Err(Error::Shape(format!(
                "{} entries for axes [{}] (expected {expected})",
                data.len(),
                axes.iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Tensor { axes, data })
    }

    pub fn scalar(value: f64) -> Result<Self> {
        Tensor::new(Vec::new(), vec![value])
    }

    pub fn vector(space: Space, data: Vec<f64>) -> Result<Self> {
        Tensor::new(vec![space], data)
    }

    pub fn matrix(rows: Space, cols: Space, data: Vec<f64>) -> Result<Self> {
        Tensor::new(vec![rows, cols], data)
    }

    pub fn zeros(axes: Vec<Space>) -> Self {
        let len = axes.iter().map(Space::dim).product();
        Tensor {
            axes,
            data: vec![0.0; len],
        }
    }

    pub fn ones(space: Space) -> Self {
        let d = space.dim();
        Tensor {
            axes: vec![space],
            data: vec![1.0; d],
        }
    }

    /// The `i`-th basis vector of `space`.
    pub fn basis(space: Space, i: usize) -> Result<Self> {
        if i >= space.dim() {
            return Err(Error::AxisOutOfRange {
                axis: i,
                rank: space.dim(),
            });
        }
        let mut t = Tensor::zeros(vec![space]);
        t.data[i] = 1.0;
        Ok(t)
    }

    /// Identity matrix on `space`, axes `(space, space)`.
    pub fn identity(space: Space) -> Self {
        let d = space.dim();
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            data[i * d + i] = 1.0;
        }
        Tensor {
            axes: vec![space.clone(), space],
            data,
        }
    }

    pub fn diagonal(v: &Tensor) -> Result<Self> {
        v.expect_rank(1)?;
        let d = v.len();
        let mut data = vec![0.0; d * d];
        for (i, x) in v.data.iter().enumerate() {
            data[i * d + i] = *x;
        }
        Ok(Tensor {
            axes: vec![v.axes[0].clone(), v.axes[0].clone()],
            data,
        })
    }

    pub fn axes(&self) -> &[Space] {
        &self.axes
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.axes.iter().map(Space::dim).collect()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn strides(&self) -> Vec<usize> {
        strides_of(&self.dims())
    }

    /// Entry at a multi-index.
    pub fn get(&self, index: &[usize]) -> Result<f64> {
        if index.len() != self.rank() {
            return Err(Error::Rank {
                expected: self.rank(),
                found: index.len(),
            });
        }
        let mut off = 0;
        for ((&i, s), st) in index.iter().zip(&self.axes).zip(self.strides()) {
            if i >= s.dim() {
                return Err(Error::AxisOutOfRange {
                    axis: i,
                    rank: s.dim(),
                });
            }
            off += i * st;
        }
        Ok(self.data[off])
    }

    pub fn expect_rank(&self, rank: usize) -> Result<()> {
        if self.rank() != rank {
            return Err(Error::Rank {
                expected: rank,
                found: self.rank(),
            });
        }
        Ok(())
    }

    /// Same data under a different axis signature of equal total size.
    pub fn reshape(&self, axes: Vec<Space>) -> Result<Tensor> {
        Tensor::new(axes, self.data.clone())
    }

    /// Collapse all axes into one rank-1 tensor over their product space.
    pub fn flatten(&self) -> Tensor {
        Tensor {
            axes: vec![Space::product(&self.axes)],
            data: self.data.clone(),
        }
    }

    pub fn scale(&self, k: f64) -> Tensor {
        Tensor {
            axes: self.axes.clone(),
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.same_axes(other)?;
        Ok(Tensor {
            axes: self.axes.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.same_axes(other)?;
        Ok(Tensor {
            axes: self.axes.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Frobenius inner product of two tensors with identical signatures.
    pub fn inner(&self, other: &Tensor) -> Result<f64> {
        self.same_axes(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Tensor) -> Result<f64> {
        if self.dims() != other.dims() {
            return Err(Error::DimMismatch(format!(
                "{:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    fn same_axes(&self, other: &Tensor) -> Result<()> {
        if self.axes != other.axes {
            return Err(Error::SpaceMismatch {
                left: signature(&self.axes),
                right: signature(&other.axes),
            });
        }
        Ok(())
    }
}

pub(crate) fn signature(axes: &[Space]) -> String {
    if axes.is_empty() {
        return "I".into();
    }
    axes.iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join("⊗")
}

pub(crate) fn strides_of(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    strides
}

/// `a ⊗ b`: axes concatenated, `c[i.., j..] = a[i..] * b[j..]`.
pub fn tensor_product(a: &Tensor, b: &Tensor) -> Tensor {
    let mut axes = a.axes.clone();
    axes.extend(b.axes.iter().cloned());
    let mut data = Vec::with_capacity(a.len() * b.len());
    for x in &a.data {
        data.extend(b.data.iter().map(|y| x * y));
    }
    Tensor { axes, data }
}

/// Counit `ε: V ⊗ V → R`, stored as the rank-2 tensor `Σ_i e_i ⊗ e_i`.
/// Contracting it against `e_i ⊗ e_j` yields `δ_ij`.
pub fn epsilon(space: &Space) -> Tensor {
    Tensor::identity(space.clone())
}

/// Unit `η: R → V ⊗ V`, `1 ↦ Σ_i e_i ⊗ e_i`.
pub fn eta(space: &Space) -> Tensor {
    Tensor::identity(space.clone())
}

/// Frobenius multiplication: pointwise product of two vectors in one space.
pub fn frobenius_mu(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    a.expect_rank(1)?;
    b.expect_rank(1)?;
    if a.axes != b.axes {
        return Err(Error::SpaceMismatch {
            left: a.axes[0].to_string(),
            right: b.axes[0].to_string(),
        });
    }
    Ok(Tensor {
        axes: a.axes.clone(),
        data: a.data.iter().zip(&b.data).map(|(x, y)| x * y).collect(),
    })
}

/// Frobenius counit `ι`: delete an axis by summing over it.
pub fn iota_delete(t: &Tensor, axis: usize) -> Result<Tensor> {
    if axis >= t.rank() {
        return Err(Error::AxisOutOfRange {
            axis,
            rank: t.rank(),
        });
    }
    let dims = t.dims();
    let outer: usize = dims[..axis].iter().product();
    let mid = dims[axis];
    let inner: usize = dims[axis + 1..].iter().product();
    let mut data = vec![0.0; outer * inner];
    for o in 0..outer {
        for m in 0..mid {
            for i in 0..inner {
                data[o * inner + i] += t.data[(o * mid + m) * inner + i];
            }
        }
    }
    let mut axes = t.axes.clone();
    axes.remove(axis);
    Ok(Tensor { axes, data })
}

/// Cosine of the angle between two vectors of the same space.
pub fn cosine(a: &Tensor, b: &Tensor) -> Result<f64> {
    a.expect_rank(1)?;
    b.expect_rank(1)?;
    if a.axes != b.axes {
        return Err(Error::SpaceMismatch {
            left: a.axes[0].to_string(),
            right: b.axes[0].to_string(),
        });
    }
    cosine_raw(&a.data, &b.data)
}

pub(crate) fn cosine_raw(a: &[f64], b: &[f64]) -> Result<f64> {
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    Ok(dot / (na * nb))
}

// Matrix helpers. Rank-2 tensors are matrices with axes (rows, cols); the
// checks here are on dimensions only, so that `W·f` forms can mix named and
// product spaces.

fn expect_matrix(m: &Tensor) -> Result<(usize, usize)> {
    m.expect_rank(2)?;
    Ok((m.axes[0].dim(), m.axes[1].dim()))
}

pub fn matmul(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    let (r, k) = expect_matrix(a)?;
    let (k2, c) = expect_matrix(b)?;
    if k != k2 {
        return Err(Error::DimMismatch(format!("matmul {r}x{k} by {k2}x{c}")));
    }
    let mut data = vec![0.0; r * c];
    for i in 0..r {
        for l in 0..k {
            let x = a.data[i * k + l];
            if x == 0.0 {
                continue;
            }
            for j in 0..c {
                data[i * c + j] += x * b.data[l * c + j];
            }
        }
    }
    Ok(Tensor {
        axes: vec![a.axes[0].clone(), b.axes[1].clone()],
        data,
    })
}

pub fn matvec(m: &Tensor, v: &Tensor) -> Result<Tensor> {
    let (r, c) = expect_matrix(m)?;
    v.expect_rank(1)?;
    if v.len() != c {
        return Err(Error::DimMismatch(format!(
            "matvec {r}x{c} by vector of length {}",
            v.len()
        )));
    }
    let data = (0..r)
        .map(|i| {
            m.data[i * c..(i + 1) * c]
                .iter()
                .zip(&v.data)
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect();
    Ok(Tensor {
        axes: vec![m.axes[0].clone()],
        data,
    })
}

pub fn transpose(m: &Tensor) -> Result<Tensor> {
    let (r, c) = expect_matrix(m)?;
    let mut data = vec![0.0; r * c];
    for i in 0..r {
        for j in 0..c {
            data[j * r + i] = m.data[i * c + j];
        }
    }
    Ok(Tensor {
        axes: vec![m.axes[1].clone(), m.axes[0].clone()],
        data,
    })
}

/// Kronecker product of two matrices, `(A ⊗ B)[(i,k),(j,l)] = A[i,j] B[k,l]`.
pub fn kron(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    let (ar, ac) = expect_matrix(a)?;
    let (br, bc) = expect_matrix(b)?;
    let (r, c) = (ar * br, ac * bc);
    let mut data = vec![0.0; r * c];
    for i in 0..ar {
        for j in 0..ac {
            let x = a.data[i * ac + j];
            for k in 0..br {
                for l in 0..bc {
                    data[(i * br + k) * c + j * bc + l] = x * b.data[k * bc + l];
                }
            }
        }
    }
    let rows = Space::product(&[a.axes[0].clone(), b.axes[0].clone()]);
    let cols = Space::product(&[a.axes[1].clone(), b.axes[1].clone()]);
    Ok(Tensor {
        axes: vec![rows, cols],
        data,
    })
}
