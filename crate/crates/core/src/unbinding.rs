//! Approximate unbinding and in-place substitution through the pseudoinverse.
//!
//! For `s = W_r · f`, `W_r⁺ · s` recovers `f` exactly when `W_r` has full
//! column rank and gives the least-squares solution otherwise. Substitution
//! conjugates a modifier acting on one filler factor by `W_r`:
//! `W_F = W_r · (I ⊗ … ⊗ M ⊗ … ⊗ I) · W_r⁺`.

use crate::error::{Error, Result};
use crate::tensor::{kron, matmul, matvec, pseudoinverse, Space, Tensor, DEFAULT_PINV_TOL};

/// `W⁺ · s`.
pub fn approx_unbind(w: &Tensor, s: &Tensor, tol: f64) -> Result<Tensor> {
    w.expect_rank(2)?;
    s.expect_rank(1)?;
    if w.axes()[0].dim() != s.len() {
        return Err(Error::DimMismatch(format!(
            "W has {} rows, s has length {}",
            w.axes()[0].dim(),
            s.len()
        )));
    }
    matvec(&pseudoinverse(w, tol)?, s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionOp {
    operator: Tensor,
    source_role: Tensor,
    modifier: Tensor,
    padded: Tensor,
    slot: usize,
}

impl SubstitutionOp {
    /// `W_F`.
    pub fn operator(&self) -> &Tensor {
        &self.operator
    }

    pub fn source_role(&self) -> &Tensor {
        &self.source_role
    }

    pub fn modifier(&self) -> &Tensor {
        &self.modifier
    }

    /// `I ⊗ … ⊗ M ⊗ … ⊗ I`.
    pub fn padded_modifier(&self) -> &Tensor {
        &self.padded
    }

    pub fn slot(&self) -> usize {
        self.slot
    }

    /// The structure the substitution aims at: `W_r · (I ⊗ M ⊗ I) · f`.
    pub fn target_for(&self, filler: &Tensor) -> Result<Tensor> {
        matvec(&self.source_role, &matvec(&self.padded, filler)?)
    }
}

/// Build `W_F = W_r · (I ⊗ … ⊗ M ⊗ … ⊗ I) · W_r⁺` with the modifier at
/// `slot` among factors of dimensions `slot_dims`.
pub fn make_substitution(
    w_r: &Tensor,
    modifier: &Tensor,
    slot: usize,
    slot_dims: &[usize],
) -> Result<SubstitutionOp> {
    make_substitution_with_tol(w_r, modifier, slot, slot_dims, DEFAULT_PINV_TOL)
}

pub fn make_substitution_with_tol(
    w_r: &Tensor,
    modifier: &Tensor,
    slot: usize,
    slot_dims: &[usize],
    tol: f64,
) -> Result<SubstitutionOp> {
    w_r.expect_rank(2)?;
    modifier.expect_rank(2)?;
    if slot >= slot_dims.len() {
        return Err(Error::SlotOutOfRange {
            slot,
            slots: slot_dims.len(),
        });
    }
    let md = modifier.dims();
    if md[0] != md[1] || md[0] != slot_dims[slot] {
        return Err(Error::DimMismatch(format!(
            "modifier is {}x{}, slot {slot} has dim {}",
            md[0], md[1], slot_dims[slot]
        )));
    }
    let total: usize = slot_dims.iter().product();
    if w_r.axes()[1].dim() != total {
        return Err(Error::DimMismatch(format!(
            "W_r has {} columns, slots {slot_dims:?} span {total}",
            w_r.axes()[1].dim()
        )));
    }

    let mut padded: Option<Tensor> = None;
    for (k, &d) in slot_dims.iter().enumerate() {
        let factor = if k == slot {
            modifier.clone()
        } else {
            Tensor::identity(Space::real(d)?)
        };
        padded = Some(match padded {
            None => factor,
            Some(p) => kron(&p, &factor)?,
        });
    }
    let padded = padded
        .expect("at least one slot")
        .reshape(vec![w_r.axes()[1].clone(), w_r.axes()[1].clone()])?;

    let operator = matmul(&matmul(w_r, &padded)?, &pseudoinverse(w_r, tol)?)?;
    Ok(SubstitutionOp {
        operator,
        source_role: w_r.clone(),
        modifier: modifier.clone(),
        padded,
        slot,
    })
}

/// `W_F · s`.
pub fn apply_substitution(op: &SubstitutionOp, s: &Tensor) -> Result<Tensor> {
    s.expect_rank(1)?;
    if op.operator.axes()[1].dim() != s.len() {
        return Err(Error::DimMismatch(format!(
            "operator has {} columns, s has length {}",
            op.operator.axes()[1].dim(),
            s.len()
        )));
    }
    matvec(&op.operator, s)
}

/// Result of applying a substitution to `s = W_r · f`, with the distance to
/// the exactly rebuilt target `W_r · (I ⊗ M ⊗ I) · f`.
#[derive(Debug, Clone, PartialEq)]
pub struct Substitution {
    pub result: Tensor,
    pub target: Tensor,
    pub residual: f64,
}

pub fn substitute(op: &SubstitutionOp, filler: &Tensor) -> Result<Substitution> {
    let s = matvec(&op.source_role, filler)?;
    let result = apply_substitution(op, &s)?;
    let target = op.target_for(filler)?;
    let residual = result.sub(&target)?.norm();
    Ok(Substitution {
        result,
        target,
        residual,
    })
}
