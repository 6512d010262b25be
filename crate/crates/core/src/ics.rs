//! Filler/role representations.
//!
//! Trees are realized in the direct-sum space `S* = ⊕_d V_F ⊗ R^{⊗d}`: a leaf
//! at depth `d` contributes `filler ⊗ role-string`, where the role string of
//! a child is its own step role followed by the parent's string,
//! `r_path = r_step ⊗ r_parent`. So the left child of the right child of the
//! root is bound to `r0 ⊗ r1`, written as the role path `"01"`: role paths
//! list the steps deepest-first, in tensor factor order.
//!
//! The factored form `W·f` keeps the atomic fillers as a single tensor
//! product `f` and folds all structure into one matrix `W`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pregroup::{self, BaseType, PregroupType};
use crate::semantics::{compile_reduction, Lexicon};
use crate::tensor::{
    contract, kron, matmul, matvec, pseudoinverse_default, tensor_product, AxisRef, Space, Tensor,
};

/// Bind a filler to a role: `f ⊗ r`.
pub fn bind(filler: &Tensor, role: &Tensor) -> Result<Tensor> {
    filler.expect_rank(1)?;
    role.expect_rank(1)?;
    Ok(tensor_product(filler, role))
}

/// Roles for the left (`r0`) and right (`r1`) child positions.
#[derive(Debug, Clone, PartialEq)]
pub struct RoleBasis {
    r0: Tensor,
    r1: Tensor,
}

impl RoleBasis {
    pub fn new(r0: Tensor, r1: Tensor) -> Result<Self> {
        r0.expect_rank(1)?;
        r1.expect_rank(1)?;
        if r0.axes() != r1.axes() {
            return Err(Error::SpaceMismatch {
                left: r0.axes()[0].to_string(),
                right: r1.axes()[0].to_string(),
            });
        }
        Ok(RoleBasis { r0, r1 })
    }

    /// `r0 = e_0`, `r1 = e_1` in `space` (dim ≥ 2).
    pub fn standard(space: Space) -> Result<Self> {
        RoleBasis::new(Tensor::basis(space.clone(), 0)?, Tensor::basis(space, 1)?)
    }

    pub fn space(&self) -> &Space {
        &self.r0.axes()[0]
    }

    pub fn role(&self, bit: u8) -> &Tensor {
        if bit == 0 {
            &self.r0
        } else {
            &self.r1
        }
    }

    /// Dual vectors `u_0, u_1` with `⟨u_a, r_b⟩ = δ_ab`, from the
    /// pseudoinverse of the role matrix `[r0 r1]`.
    pub fn duals(&self) -> Result<[Tensor; 2]> {
        let space = self.space().clone();
        let d = space.dim();
        let mut data = vec![0.0; d * 2];
        for i in 0..d {
            data[i * 2] = self.r0.data()[i];
            data[i * 2 + 1] = self.r1.data()[i];
        }
        let roles = Tensor::matrix(space.clone(), Space::real(2)?, data)?;
        let pinv = pseudoinverse_default(&roles)?;
        let gram = matmul(&pinv, &roles)?;
        if gram.max_abs_diff(&Tensor::identity(Space::real(2)?))? > 1e-9 {
            return Err(Error::SingularRoles);
        }
        let row =
            |b: usize| Tensor::vector(space.clone(), pinv.data()[b * d..(b + 1) * d].to_vec());
        Ok([row(0)?, row(1)?])
    }
}

/// Binary tree over rank-1 fillers.
#[derive(Debug, Clone, PartialEq)]
pub enum BinaryTree {
    Leaf(Tensor),
    Node(Box<BinaryTree>, Box<BinaryTree>),
}

impl BinaryTree {
    pub fn leaf(filler: Tensor) -> Self {
        BinaryTree::Leaf(filler)
    }

    pub fn node(left: BinaryTree, right: BinaryTree) -> Self {
        BinaryTree::Node(Box::new(left), Box::new(right))
    }

    /// Leaves paired with their role paths (deepest step first).
    pub fn leaves(&self) -> Vec<(String, &Tensor)> {
        let mut out = Vec::new();
        self.collect_leaves(String::new(), &mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, path: String, out: &mut Vec<(String, &'a Tensor)>) {
        match self {
            BinaryTree::Leaf(f) => out.push((path, f)),
            BinaryTree::Node(l, r) => {
                l.collect_leaves(format!("0{path}"), out);
                r.collect_leaves(format!("1{path}"), out);
            }
        }
    }
}

/// Element of `S*`: depth `d` maps to a tensor with axes `(V_F, R × d)`.
/// Depths whose component is zero are not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSumElement {
    filler_space: Space,
    role_space: Space,
    components: BTreeMap<usize, Tensor>,
}

impl DirectSumElement {
    pub fn zero(filler_space: Space, role_space: Space) -> Self {
        DirectSumElement {
            filler_space,
            role_space,
            components: BTreeMap::new(),
        }
    }

    pub fn filler_space(&self) -> &Space {
        &self.filler_space
    }

    pub fn role_space(&self) -> &Space {
        &self.role_space
    }

    pub fn component(&self, depth: usize) -> Option<&Tensor> {
        self.components.get(&depth)
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Tensor)> {
        self.components.iter().map(|(d, t)| (*d, t))
    }

    /// Add `t` into the depth given by its rank.
    pub fn accumulate(&mut self, t: Tensor) -> Result<()> {
        let depth = t.rank().checked_sub(1).ok_or(Error::Rank {
            expected: 1,
            found: 0,
        })?;
        if t.axes()[0] != self.filler_space || t.axes()[1..].iter().any(|a| a != &self.role_space) {
            return Err(Error::SpaceMismatch {
                left: crate::tensor::signature(t.axes()),
                right: format!("{}⊗{}^{depth}", self.filler_space, self.role_space),
            });
        }
        let sum = match self.components.remove(&depth) {
            Some(prev) => prev.add(&t)?,
            None => t,
        };
        if sum.data().iter().any(|&x| x != 0.0) {
            self.components.insert(depth, sum);
        }
        Ok(())
    }
}

/// Realize a tree in `S*`.
pub fn encode_tree(tree: &BinaryTree, roles: &RoleBasis) -> Result<DirectSumElement> {
    let leaves = tree.leaves();
    let filler_space = leaves[0].1.axes().first().cloned().ok_or(Error::Rank {
        expected: 1,
        found: 0,
    })?;
    let mut out = DirectSumElement::zero(filler_space, roles.space().clone());
    for (path, filler) in leaves {
        filler.expect_rank(1)?;
        let mut t = filler.clone();
        for bit in path.bytes() {
            t = tensor_product(&t, roles.role(bit - b'0'));
        }
        out.accumulate(t)?;
    }
    Ok(out)
}

/// Recover the filler bound at a role path (deepest step first, e.g. `"01"`
/// for `r0 ⊗ r1`) by contracting each role axis with the matching dual role.
pub fn unbind_role(s: &DirectSumElement, path: &str, roles: &RoleBasis) -> Result<Tensor> {
    if let Some(c) = path.chars().find(|c| *c != '0' && *c != '1') {
        return Err(Error::Parse(format!(
            "role path must be a bit string, found `{c}`"
        )));
    }
    if roles.space() != s.role_space() {
        return Err(Error::SpaceMismatch {
            left: roles.space().to_string(),
            right: s.role_space().to_string(),
        });
    }
    let duals = roles.duals()?;
    let Some(component) = s.component(path.len()) else {
        return Ok(Tensor::zeros(vec![s.filler_space().clone()]));
    };
    let mut operands: Vec<&Tensor> = vec![component];
    let mut pairings: Vec<(AxisRef, AxisRef)> = Vec::new();
    for (t, bit) in path.bytes().enumerate() {
        operands.push(&duals[usize::from(bit - b'0')]);
        pairings.push(((0, t + 1), (t + 1, 0)));
    }
    contract(&operands, &pairings, &[(0, 0)])
}

/// `⊕_i v_i ↦ ⊗_i v_i`.
pub fn direct_sum_to_tensor(vs: &[Tensor]) -> Result<Tensor> {
    let (first, rest) = vs
        .split_first()
        .ok_or_else(|| Error::Shape("empty direct sum".into()))?;
    first.expect_rank(1)?;
    rest.iter().try_fold(first.clone(), |acc, v| {
        v.expect_rank(1)?;
        Ok(tensor_product(&acc, v))
    })
}

/// Circular convolution `(a ⊛ b)[k] = Σ_i a[i] b[(k − i) mod n]`.
pub fn circular_convolution(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    a.expect_rank(1)?;
    b.expect_rank(1)?;
    let n = a.len();
    if b.len() != n {
        return Err(Error::DimMismatch(format!(
            "circular convolution of lengths {n} and {}",
            b.len()
        )));
    }
    let data = (0..n)
        .map(|k| {
            (0..n)
                .map(|i| a.data()[i] * b.data()[(k + n - i) % n])
                .sum()
        })
        .collect();
    Tensor::vector(a.axes()[0].clone(), data)
}

/// `W · f` with `f` a flattened tensor product of atomic fillers.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredForm {
    weight: Tensor,
    filler: Tensor,
    factors: Vec<Space>,
}

impl FactoredForm {
    pub fn new(weight: Tensor, filler: Tensor) -> Result<Self> {
        weight.expect_rank(2)?;
        filler.expect_rank(1)?;
        if weight.axes()[1].dim() != filler.len() {
            return Err(Error::Shape(format!(
                "weight has {} columns, filler has length {}",
                weight.axes()[1].dim(),
                filler.len()
            )));
        }
        let factors = vec![filler.axes()[0].clone()];
        Ok(FactoredForm {
            weight,
            filler,
            factors,
        })
    }

    fn with_factors(mut self, factors: Vec<Space>) -> Self {
        debug_assert_eq!(
            factors.iter().map(Space::dim).product::<usize>(),
            self.filler.len()
        );
        self.factors = factors;
        self
    }

    pub fn weight(&self) -> &Tensor {
        &self.weight
    }

    pub fn filler(&self) -> &Tensor {
        &self.filler
    }

    /// Spaces of the atomic fillers whose tensor product is `f`.
    pub fn factors(&self) -> &[Space] {
        &self.factors
    }

    /// The realized activation vector `W · f`.
    pub fn realize(&self) -> Result<Tensor> {
        matvec(&self.weight, &self.filler)
    }
}

/// Nested operator applications over atomic fillers.
#[derive(Debug, Clone, PartialEq)]
pub enum FillerExpr {
    Atom(Tensor),
    Apply(Tensor, Box<FillerExpr>),
    Product(Vec<FillerExpr>),
}

impl FillerExpr {
    pub fn atom(v: Tensor) -> Self {
        FillerExpr::Atom(v)
    }

    pub fn apply(op: Tensor, arg: FillerExpr) -> Self {
        FillerExpr::Apply(op, Box::new(arg))
    }

    pub fn product(parts: Vec<FillerExpr>) -> Self {
        FillerExpr::Product(parts)
    }

    /// Evaluate the expression as written, innermost first.
    pub fn evaluate(&self) -> Result<Tensor> {
        match self {
            FillerExpr::Atom(v) => {
                v.expect_rank(1)?;
                Ok(v.clone())
            }
            FillerExpr::Apply(op, arg) => matvec(op, &arg.evaluate()?).map_err(shape_mismatch),
            FillerExpr::Product(parts) => {
                let vs = parts
                    .iter()
                    .map(FillerExpr::evaluate)
                    .collect::<Result<Vec<_>>>()?;
                Ok(direct_sum_to_tensor(&vs)?.flatten())
            }
        }
    }
}

fn shape_mismatch(e: Error) -> Error {
    match e {
        Error::DimMismatch(m) => Error::Shape(m),
        other => other,
    }
}

/// Pull every operator out past the tensor products: atoms get identities,
/// products of factored parts combine as `(W_1 ⊗ W_2)·(f_1 ⊗ f_2)`, and
/// applications compose, giving `W = W_n ⋯ W_1` and `f = ⊗_j a_j`.
pub fn factor_to_wf(expr: &FillerExpr) -> Result<FactoredForm> {
    match expr {
        FillerExpr::Atom(v) => {
            v.expect_rank(1)?;
            FactoredForm::new(Tensor::identity(v.axes()[0].clone()), v.clone())
        }
        FillerExpr::Apply(op, arg) => {
            let inner = factor_to_wf(arg)?;
            let weight = matmul(op, &inner.weight).map_err(shape_mismatch)?;
            Ok(FactoredForm::new(weight, inner.filler)?.with_factors(inner.factors))
        }
        FillerExpr::Product(parts) => {
            let (first, rest) = parts
                .split_first()
                .ok_or_else(|| Error::Shape("empty product".into()))?;
            let first = factor_to_wf(first)?;
            rest.iter().try_fold(first, |acc, p| {
                let next = factor_to_wf(p)?;
                let factors = acc.factors.iter().chain(&next.factors).cloned().collect();
                let filler = tensor_product(&acc.filler, &next.filler).flatten();
                Ok(FactoredForm::new(kron(&acc.weight, &next.weight)?, filler)?
                    .with_factors(factors))
            })
        }
    }
}

/// Which lexicon words are kept as atomic fillers in [`compile_sentence_to_wf`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomicFillers {
    /// Every word whose type is exactly the plain base type.
    PlainBase(BaseType),
    /// The listed words (each must have a single-simple type).
    Words(Vec<String>),
}

impl Default for AtomicFillers {
    fn default() -> Self {
        AtomicFillers::PlainBase(BaseType::new("n").expect("valid symbol"))
    }
}

/// Realize a sentence in `W·f` form: atomic fillers are replaced by
/// identity wires whose lower ends stay open, everything else is contracted
/// into `W` as the reduction diagram dictates. Rows of `W` index the
/// surviving wires, columns the fillers in sentence order.
pub fn compile_sentence_to_wf<S: AsRef<str>>(
    words: &[S],
    lexicon: &Lexicon,
    target: &PregroupType,
    fillers: &AtomicFillers,
) -> Result<FactoredForm> {
    let entries = words
        .iter()
        .map(|w| lexicon.get(w.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let types: Vec<PregroupType> = entries.iter().map(|e| e.ty().clone()).collect();
    let diagram = pregroup::parse(&types, target)?;
    let plan = compile_reduction(&diagram, &types, lexicon.spaces())?;

    let is_filler = |e: &&crate::semantics::LexiconEntry| -> Result<bool> {
        let chosen = match fillers {
            AtomicFillers::PlainBase(b) => {
                return Ok(matches!(e.ty().simples(), [s] if &s.base == b && s.adjoint == 0));
            }
            AtomicFillers::Words(ws) => ws.iter().any(|w| w == e.word()),
        };
        if chosen && e.ty().len() != 1 {
            return Err(Error::Shape(format!(
                "atomic filler `{}` has type {}",
                e.word(),
                e.ty()
            )));
        }
        Ok(chosen)
    };
    let flags = entries.iter().map(is_filler).collect::<Result<Vec<_>>>()?;

    let wires: Vec<Tensor> = entries
        .iter()
        .zip(&flags)
        .map(|(e, &f)| {
            if f {
                Tensor::identity(e.meaning().axes()[0].clone())
            } else {
                e.meaning().clone()
            }
        })
        .collect();
    // a filler slot's wire moves to axis 1 of its identity; axis 0 stays open
    let remap = |(w, a): AxisRef| if flags[w] { (w, a + 1) } else { (w, a) };
    let pairings: Vec<(AxisRef, AxisRef)> = plan
        .pairings()
        .iter()
        .map(|&(x, y)| (remap(x), remap(y)))
        .collect();
    let mut output: Vec<AxisRef> = plan.output().iter().map(|&r| remap(r)).collect();
    let filler_slots: Vec<usize> = (0..entries.len()).filter(|&w| flags[w]).collect();
    output.extend(filler_slots.iter().map(|&w| (w, 0)));

    let operands: Vec<&Tensor> = wires.iter().collect();
    let w_full = contract(&operands, &pairings, &output)?;

    let row_space = Space::product(&plan.output_spaces());
    let filler_spaces: Vec<Space> = filler_slots
        .iter()
        .map(|&w| entries[w].meaning().axes()[0].clone())
        .collect();
    let col_space = Space::product(&filler_spaces);
    let factors = if filler_spaces.is_empty() {
        vec![col_space.clone()]
    } else {
        filler_spaces
    };
    let weight = Tensor::matrix(row_space, col_space.clone(), w_full.into_data())?;

    let filler = filler_slots
        .iter()
        .map(|&w| entries[w].meaning())
        .fold(Tensor::scalar(1.0)?, |acc, v| tensor_product(&acc, v));
    Ok(FactoredForm::new(weight, filler.reshape(vec![col_space])?)?.with_factors(factors))
}
