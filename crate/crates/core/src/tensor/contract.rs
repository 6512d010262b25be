use std::collections::HashMap;

use super::{strides_of, Space, Tensor};
use crate::error::{Error, Result};

/// `(operand index, axis index)`.
pub type AxisRef = (usize, usize);

/// Generalized inner product over paired axes (einsum semantics).
///
/// Every pairing sums the two axes against each other; pairings inside a
/// single operand are traces. Each unpaired axis must appear exactly once in
/// `output`, which fixes the axis order of the result. Operands are folded
/// left to right.
pub fn contract(
    operands: &[&Tensor],
    pairings: &[(AxisRef, AxisRef)],
    output: &[AxisRef],
) -> Result<Tensor> {
    let check = |(op, ax): AxisRef| -> Result<&Space> {
        let t = operands.get(op).ok_or(Error::AxisOutOfRange {
            axis: op,
            rank: operands.len(),
        })?;
        t.axes().get(ax).ok_or(Error::AxisOutOfRange {
            axis: ax,
            rank: t.rank(),
        })
    };

    let mut label_of: HashMap<AxisRef, usize> = HashMap::new();
    for (n, &(a, b)) in pairings.iter().enumerate() {
        let (sa, sb) = (check(a)?, check(b)?);
        if sa.dim() != sb.dim() {
            return Err(Error::DimMismatch(format!(
                "paired axes {a:?} and {b:?} have dims {} and {}",
                sa.dim(),
                sb.dim()
            )));
        }
        for r in [a, b] {
            if label_of.insert(r, n).is_some() {
                return Err(Error::DuplicateAxis(r.0, r.1));
            }
        }
    }

    let mut out_labels = Vec::with_capacity(output.len());
    let mut out_axes = Vec::with_capacity(output.len());
    for (n, &r) in output.iter().enumerate() {
        out_axes.push(check(r)?.clone());
        let label = pairings.len() + n;
        if label_of.insert(r, label).is_some() {
            return Err(Error::DuplicateAxis(r.0, r.1));
        }
        out_labels.push(label);
    }

    let mut acc: Option<Labeled> = None;
    for (op, t) in operands.iter().enumerate() {
        let mut labels = Vec::with_capacity(t.rank());
        for ax in 0..t.rank() {
            labels.push(
                *label_of
                    .get(&(op, ax))
                    .ok_or(Error::MissingOutputAxis(op, ax))?,
            );
        }
        let next = Labeled {
            labels,
            dims: t.dims(),
            data: t.data().to_vec(),
        };
        acc = Some(match acc {
            None => merge(&next, None),
            Some(prev) => merge(&prev, Some(&next)),
        });
    }

    let acc = match acc {
        Some(acc) => acc,
        None => Labeled {
            labels: vec![],
            dims: vec![],
            data: vec![1.0],
        },
    };
    let data = acc.permute(&out_labels);
    Tensor::new(out_axes, data)
}

#[derive(Debug)]
struct Labeled {
    labels: Vec<usize>,
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl Labeled {
    fn permute(&self, order: &[usize]) -> Vec<f64> {
        debug_assert_eq!(order.len(), self.labels.len());
        let strides = strides_of(&self.dims);
        let src: Vec<usize> = order
            .iter()
            .map(|l| {
                self.labels
                    .iter()
                    .position(|x| x == l)
                    .expect("label present")
            })
            .collect();
        let dims: Vec<usize> = src.iter().map(|&p| self.dims[p]).collect();
        let src_strides: Vec<usize> = src.iter().map(|&p| strides[p]).collect();
        let mut out = Vec::with_capacity(self.data.len());
        for_each_index(&dims, |idx| {
            out.push(
                self.data[idx
                    .iter()
                    .zip(&src_strides)
                    .map(|(i, s)| i * s)
                    .sum::<usize>()],
            );
        });
        out
    }
}

/// Contract `a` (with `b`, if given) over every label that occurs twice.
fn merge(a: &Labeled, b: Option<&Labeled>) -> Labeled {
    let empty = Labeled {
        labels: vec![],
        dims: vec![],
        data: vec![1.0],
    };
    let b = b.unwrap_or(&empty);

    let mut union: Vec<(usize, usize)> = Vec::new();
    let mut count: HashMap<usize, usize> = HashMap::new();
    for (&l, &d) in a
        .labels
        .iter()
        .zip(&a.dims)
        .chain(b.labels.iter().zip(&b.dims))
    {
        let c = count.entry(l).or_insert(0);
        if *c == 0 {
            union.push((l, d));
        }
        *c += 1;
    }
    let kept: Vec<(usize, usize)> = union
        .iter()
        .copied()
        .filter(|(l, _)| count[l] == 1)
        .collect();

    let pos = |l: usize| {
        union
            .iter()
            .position(|(x, _)| *x == l)
            .expect("label in union")
    };
    let offsets = |t: &Labeled| -> Vec<(usize, usize)> {
        let st = strides_of(&t.dims);
        t.labels.iter().zip(st).map(|(&l, s)| (pos(l), s)).collect()
    };
    let (a_off, b_off) = (offsets(a), offsets(b));
    let kept_strides = strides_of(&kept.iter().map(|k| k.1).collect::<Vec<_>>());
    let k_off: Vec<(usize, usize)> = kept
        .iter()
        .zip(kept_strides)
        .map(|(k, s)| (pos(k.0), s))
        .collect();

    let kept_len = kept.iter().map(|k| k.1).product();
    let mut data = vec![0.0; kept_len];
    let udims: Vec<usize> = union.iter().map(|u| u.1).collect();
    let at =
        |idx: &[usize], off: &[(usize, usize)]| off.iter().map(|&(p, s)| idx[p] * s).sum::<usize>();
    for_each_index(&udims, |idx| {
        let x = a.data[at(idx, &a_off)];
        if x != 0.0 {
            data[at(idx, &k_off)] += x * b.data[at(idx, &b_off)];
        }
    });

    Labeled {
        labels: kept.iter().map(|k| k.0).collect(),
        dims: kept.iter().map(|k| k.1).collect(),
        data,
    }
}

fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.contains(&0) {
        return;
    }
    let mut idx = vec![0; dims.len()];
    loop {
        f(&idx);
        let mut k = dims.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}
