//! The meaning functor: base types to spaces, reduction diagrams to
//! contraction plans, and sentence evaluation over a typed lexicon.
//!
//! A word of type `p_1 … p_k` has a meaning tensor with one axis per simple
//! type, in type order, each axis living in the space of its base type
//! (adjoints share the space of their base). A cup between two wires becomes
//! an ε-pairing of the two axes; surviving wires become output axes.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pregroup::{self, BaseType, PregroupType, ReductionDiagram, SimpleType};
use crate::tensor::{
    self, contract, frobenius_mu, iota_delete, matvec, transpose, AxisRef, Space, Tensor,
};

/// `Q` on objects: one space per base type.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpaceAssignment {
    spaces: BTreeMap<BaseType, Space>,
}

impl SpaceAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Assign `base ↦ Space(BASE, dim)`, naming the space by the upper-cased symbol.
    pub fn assign(&mut self, base: BaseType, dim: usize) -> Result<&Space> {
        let space = Space::new(base.symbol().to_uppercase(), dim)?;
        self.spaces.insert(base.clone(), space);
        Ok(&self.spaces[&base])
    }

    pub fn space_of_base(&self, base: &BaseType) -> Result<&Space> {
        self.spaces
            .get(base)
            .ok_or_else(|| Error::UnknownBaseType(base.to_string()))
    }

    pub fn space_of(&self, s: &SimpleType) -> Result<&Space> {
        self.space_of_base(&s.base)
    }

    /// Axis signature of a meaning of type `t`.
    pub fn spaces_of(&self, t: &PregroupType) -> Result<Vec<Space>> {
        t.simples()
            .iter()
            .map(|s| self.space_of(s).cloned())
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BaseType, &Space)> {
        self.spaces.iter()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconEntry {
    word: String,
    ty: PregroupType,
    meaning: Tensor,
}

impl LexiconEntry {
    /// Build an entry from row-major data over the type's axis signature.
    pub fn new(
        word: impl Into<String>,
        ty: PregroupType,
        data: Vec<f64>,
        spaces: &SpaceAssignment,
    ) -> Result<Self> {
        let word = word.into();
        let axes = spaces.spaces_of(&ty)?;
        let meaning = Tensor::new(axes, data).map_err(|e| match e {
            Error::Shape(msg) => Error::Shape(format!("entry `{word}`: {msg}")),
            other => other,
        })?;
        Ok(LexiconEntry { word, ty, meaning })
    }

    pub fn word(&self) -> &str {
        &self.word
    }

    pub fn ty(&self) -> &PregroupType {
        &self.ty
    }

    pub fn meaning(&self) -> &Tensor {
        &self.meaning
    }
}

/// Words with types and meanings over one space assignment. Entry order is
/// preserved.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    spaces: SpaceAssignment,
    entries: Vec<LexiconEntry>,
}

impl Lexicon {
    pub fn new(spaces: SpaceAssignment) -> Self {
        Lexicon {
            spaces,
            entries: Vec::new(),
        }
    }

    pub fn insert(
        &mut self,
        word: impl Into<String>,
        ty: PregroupType,
        data: Vec<f64>,
    ) -> Result<&LexiconEntry> {
        let entry = LexiconEntry::new(word, ty, data, &self.spaces)?;
        if self.entries.iter().any(|e| e.word == entry.word) {
            return Err(Error::DuplicateWord(entry.word));
        }
        self.entries.push(entry);
        Ok(self.entries.last().expect("just pushed"))
    }

    pub fn get(&self, word: &str) -> Result<&LexiconEntry> {
        self.entries
            .iter()
            .find(|e| e.word == word)
            .ok_or_else(|| Error::UnknownWord(word.to_string()))
    }

    pub fn spaces(&self) -> &SpaceAssignment {
        &self.spaces
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `Q(α)` for one reduction: operand slots, ε-pairings and output axes.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionPlan {
    slot_axes: Vec<Vec<Space>>,
    pairings: Vec<(AxisRef, AxisRef)>,
    output: Vec<AxisRef>,
}

impl ContractionPlan {
    pub fn slot_axes(&self) -> &[Vec<Space>] {
        &self.slot_axes
    }

    pub fn pairings(&self) -> &[(AxisRef, AxisRef)] {
        &self.pairings
    }

    pub fn output(&self) -> &[AxisRef] {
        &self.output
    }

    pub fn output_spaces(&self) -> Vec<Space> {
        self.output
            .iter()
            .map(|&(w, a)| self.slot_axes[w][a].clone())
            .collect()
    }

    /// Apply the plan to one tensor per slot. Operand dims must match the slots.
    pub fn evaluate(&self, operands: &[&Tensor]) -> Result<Tensor> {
        if operands.len() != self.slot_axes.len() {
            return Err(Error::DimMismatch(format!(
                "plan has {} slots, got {} operands",
                self.slot_axes.len(),
                operands.len()
            )));
        }
        for (slot, (t, axes)) in operands.iter().zip(&self.slot_axes).enumerate() {
            let want: Vec<usize> = axes.iter().map(Space::dim).collect();
            if t.dims() != want {
                return Err(Error::DimMismatch(format!(
                    "slot {slot}: dims {:?}, expected {want:?}",
                    t.dims()
                )));
            }
        }
        contract(operands, &self.pairings, &self.output)
    }
}

/// Compile a reduction diagram into a contraction plan. The diagram must be
/// valid against `types` and the type spelled by its own survivors.
pub fn compile_reduction(
    diagram: &ReductionDiagram,
    types: &[PregroupType],
    spaces: &SpaceAssignment,
) -> Result<ContractionPlan> {
    let flat = PregroupType::product(types);
    let survivors_ty = PregroupType::new(
        diagram
            .survivors()
            .iter()
            .map(|&k| flat.simples().get(k).cloned())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidDiagram("survivor index out of range".into()))?,
    );
    if !pregroup::is_valid(diagram, types, &survivors_ty) {
        return Err(Error::InvalidDiagram(format!(
            "cups {:?} / survivors {:?} do not reduce the given types",
            diagram.cups(),
            diagram.survivors()
        )));
    }

    let mut locate = Vec::with_capacity(flat.len());
    let mut slot_axes = Vec::with_capacity(types.len());
    for (w, t) in types.iter().enumerate() {
        for a in 0..t.len() {
            locate.push((w, a));
        }
        slot_axes.push(spaces.spaces_of(t)?);
    }
    Ok(ContractionPlan {
        slot_axes,
        pairings: diagram
            .cups()
            .iter()
            .map(|&(i, j)| (locate[i], locate[j]))
            .collect(),
        output: diagram.survivors().iter().map(|&k| locate[k]).collect(),
    })
}

/// A parsed and evaluated word sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    pub diagram: ReductionDiagram,
    pub plan: ContractionPlan,
    pub meaning: Tensor,
}

pub fn compose<S: AsRef<str>>(
    words: &[S],
    lexicon: &Lexicon,
    target: &PregroupType,
) -> Result<Composition> {
    let entries = words
        .iter()
        .map(|w| lexicon.get(w.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let types: Vec<PregroupType> = entries.iter().map(|e| e.ty.clone()).collect();
    let diagram = pregroup::parse(&types, target)?;
    let plan = compile_reduction(&diagram, &types, &lexicon.spaces)?;
    let operands: Vec<&Tensor> = entries.iter().map(|e| &e.meaning).collect();
    let meaning = plan.evaluate(&operands)?;
    Ok(Composition {
        diagram,
        plan,
        meaning,
    })
}

/// Meaning of a word sequence reduced to `target`.
pub fn evaluate<S: AsRef<str>>(
    words: &[S],
    lexicon: &Lexicon,
    target: &PregroupType,
) -> Result<Tensor> {
    compose(words, lexicon, target).map(|c| c.meaning)
}

/// Display layout of a transitive verb `c[i,j,k]` (subject, sentence, object)
/// as a `d_N × (d_N·d_S)` matrix: row `i`, column `k·d_S + j`. The printed toy
/// verb `[[3,8,4,1],[6,2,9,5]]` with `c[1,0,1] = 9` uses this layout.
pub fn display_matrix(verb: &Tensor) -> Result<Tensor> {
    verb.expect_rank(3)?;
    let (di, dj, dk) = (
        verb.axes()[0].dim(),
        verb.axes()[1].dim(),
        verb.axes()[2].dim(),
    );
    let mut data = vec![0.0; di * dj * dk];
    for i in 0..di {
        for j in 0..dj {
            for k in 0..dk {
                data[i * dj * dk + k * dj + j] = verb.data()[(i * dj + j) * dk + k];
            }
        }
    }
    let cols = Space::product(&[verb.axes()[2].clone(), verb.axes()[1].clone()]);
    Tensor::matrix(verb.axes()[0].clone(), cols, data)
}

/// Inverse of [`display_matrix`].
pub fn verb_from_display(
    display: &Tensor,
    subject: Space,
    sentence: Space,
    object: Space,
) -> Result<Tensor> {
    display.expect_rank(2)?;
    let (di, dj, dk) = (subject.dim(), sentence.dim(), object.dim());
    if display.dims() != [di, dj * dk] {
        return Err(Error::DimMismatch(format!(
            "display {:?} vs {di}x{}",
            display.dims(),
            dj * dk
        )));
    }
    let mut data = vec![0.0; di * dj * dk];
    for i in 0..di {
        for j in 0..dj {
            for k in 0..dk {
                data[(i * dj + j) * dk + k] = display.data()[i * dj * dk + k * dj + j];
            }
        }
    }
    Tensor::new(vec![subject, sentence, object], data)
}

/// Relative clause through the literal matrix pipeline
/// `W^μ_head · (W_ι · (W^Obj · object))` with `W^μ = diag(head)`,
/// `W^Obj = displayᵀ` and `W_ι = I ⊗ 1ᵀ` summing the fastest axis.
///
/// Note `displayᵀ · object` contracts the object against the display rows,
/// i.e. the verb's subject axis.
pub fn evaluate_relative_clause_matrix(
    head: &Tensor,
    display: &Tensor,
    object: &Tensor,
) -> Result<Tensor> {
    head.expect_rank(1)?;
    object.expect_rank(1)?;
    display.expect_rank(2)?;
    let cols = display.axes()[1].dim();
    let h = head.len();
    if !cols.is_multiple_of(h) {
        return Err(Error::DimMismatch(format!(
            "display has {cols} columns, not a multiple of head dim {h}"
        )));
    }
    let group = cols / h;

    let w_obj = transpose(display)?;
    let applied = matvec(&w_obj, object)?;

    let mut iota = vec![0.0; h * cols];
    for r in 0..h {
        for g in 0..group {
            iota[r * cols + r * group + g] = 1.0;
        }
    }
    let w_iota = Tensor::matrix(head.axes()[0].clone(), applied.axes()[0].clone(), iota)?;
    let deleted = matvec(&w_iota, &applied)?;

    matvec(&Tensor::diagonal(head)?, &deleted)
}

/// Relative clause from the `(μ_N ⊗ ι_S ⊗ ε_N)` string diagram with
/// type-ordered verb axes: `result_i = head_i · Σ_{j,k} verb[i,j,k] · object_k`.
pub fn evaluate_relative_clause_diagram(
    head: &Tensor,
    verb: &Tensor,
    object: &Tensor,
) -> Result<Tensor> {
    head.expect_rank(1)?;
    object.expect_rank(1)?;
    verb.expect_rank(3)?;
    if verb.axes()[2].dim() != object.len() {
        return Err(Error::DimMismatch(format!(
            "verb object axis {} vs object {}",
            verb.axes()[2].dim(),
            object.len()
        )));
    }
    if verb.axes()[0].dim() != head.len() {
        return Err(Error::DimMismatch(format!(
            "verb subject axis {} vs head {}",
            verb.axes()[0].dim(),
            head.len()
        )));
    }
    let applied = contract(&[verb, object], &[((0, 2), (1, 0))], &[(0, 0), (0, 1)])?;
    let subject = iota_delete(&applied, 1)?;
    let subject = subject.reshape(head.axes().to_vec())?;
    frobenius_mu(head, &subject)
}

/// Which relative-clause evaluator to use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Pipeline {
    Matrix,
    #[default]
    Diagram,
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix" => Ok(Pipeline::Matrix),
            "diagram" => Ok(Pipeline::Diagram),
            other => Err(Error::Parse(format!(
                "unknown pipeline `{other}` (matrix|diagram)"
            ))),
        }
    }
}

/// A phrase to evaluate: a plain word sequence, or `head who verb object`
/// where head and object are noun phrases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Phrase {
    Sentence(Vec<String>),
    Relative {
        head: Vec<String>,
        verb: String,
        object: Vec<String>,
    },
}

impl Phrase {
    /// Splits on whitespace; a single `who` token followed by a verb and a
    /// non-empty object makes a relative clause.
    pub fn parse(text: &str) -> Result<Phrase> {
        let words: Vec<String> = text.split_whitespace().map(str::to_string).collect();
        if words.is_empty() {
            return Err(Error::Parse("empty phrase".into()));
        }
        match words.iter().position(|w| w == "who") {
            None => Ok(Phrase::Sentence(words)),
            Some(p) if p > 0 && p + 2 < words.len() => Ok(Phrase::Relative {
                head: words[..p].to_vec(),
                verb: words[p + 1].clone(),
                object: words[p + 2..].to_vec(),
            }),
            Some(_) => Err(Error::Parse(format!(
                "relative clause must read `head who verb object`: `{text}`"
            ))),
        }
    }

    pub fn word_count(&self) -> usize {
        match self {
            Phrase::Sentence(w) => w.len(),
            Phrase::Relative { head, object, .. } => head.len() + object.len() + 2,
        }
    }
}

/// Evaluate a phrase. Sentences reduce to `target`; relative clauses
/// evaluate head and object as noun phrases and ignore `target`.
pub fn evaluate_phrase(
    phrase: &Phrase,
    lexicon: &Lexicon,
    target: &PregroupType,
    pipeline: Pipeline,
) -> Result<Tensor> {
    match phrase {
        Phrase::Sentence(words) => evaluate(words, lexicon, target),
        Phrase::Relative { head, verb, object } => {
            let verb = lexicon.get(verb)?;
            let noun = match verb.ty.simples() {
                [subj, _, obj]
                    if subj.base == obj.base && subj.adjoint == 1 && obj.adjoint == -1 =>
                {
                    PregroupType::simple(SimpleType::plain(subj.base.clone()))
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "`{}` of type {} is not a transitive verb",
                        verb.word, verb.ty
                    )))
                }
            };
            let head = evaluate(head, lexicon, &noun)?;
            let object = evaluate(object, lexicon, &noun)?;
            match pipeline {
                Pipeline::Matrix => {
                    evaluate_relative_clause_matrix(&head, &display_matrix(&verb.meaning)?, &object)
                }
                Pipeline::Diagram => {
                    evaluate_relative_clause_diagram(&head, &verb.meaning, &object)
                }
            }
        }
    }
}

/// Cosine similarity of two evaluated phrases.
///
/// Both must be vectors of equal dimension. Spaces of equal dimension are
/// compared in their fixed bases, so a sentence in `S` can be compared with
/// a noun phrase in `N` when `d_N = d_S`.
pub fn meaning_similarity(
    a: &Phrase,
    b: &Phrase,
    lexicon: &Lexicon,
    target: &PregroupType,
    pipeline: Pipeline,
) -> Result<f64> {
    let ta = evaluate_phrase(a, lexicon, target, pipeline)?;
    let tb = evaluate_phrase(b, lexicon, target, pipeline)?;
    if ta.rank() != 1 || tb.rank() != 1 || ta.len() != tb.len() {
        return Err(Error::SpaceMismatch {
            left: tensor::signature(ta.axes()),
            right: tensor::signature(tb.axes()),
        });
    }
    tensor::cosine_raw(ta.data(), tb.data())
}
