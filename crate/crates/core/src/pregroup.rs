//! Pregroup types and planar type reduction.
//!
//! A simple type is a base symbol with an integer adjoint order (`-1` is the
//! left adjoint `p^l`, `+1` the right adjoint `p^r`). Reductions contract an
//! adjacent-after-cancellation pair `a^(z) a^(z+1) → 1`; a reduction of a
//! whole sequence is witnessed by a planar set of cups plus the surviving
//! wires, which must spell the target type.
//!
//! Text syntax: identifiers with `.r` / `.l` suffixes (iterable, `n.l.l`),
//! products separated by whitespace, `1` for the unit.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BaseType(String);

impl BaseType {
    pub fn new(symbol: impl Into<String>) -> Result<Self> {
        let symbol = symbol.into();
        let mut chars = symbol.chars();
        let ok = match chars.next() {
            Some(c) if c.is_alphabetic() || c == '_' => {
                chars.all(|c| c.is_alphanumeric() || c == '_')
            }
            _ => false,
        };
        if !ok {
            return Err(Error::TypeSyntax(format!(
                "`{symbol}` is not a base type identifier"
            )));
        }
        Ok(BaseType(symbol))
    }

    pub fn symbol(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleType {
    pub base: BaseType,
    /// Iterated adjoint count: negative for left, positive for right.
    pub adjoint: i32,
}

impl SimpleType {
    pub fn new(base: BaseType, adjoint: i32) -> Self {
        SimpleType { base, adjoint }
    }

    pub fn plain(base: BaseType) -> Self {
        SimpleType { base, adjoint: 0 }
    }

    /// True when `self · other → 1` is a generalized contraction.
    pub fn contracts_with(&self, other: &SimpleType) -> bool {
        self.base == other.base && self.adjoint.checked_add(1) == Some(other.adjoint)
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        let suffix = if self.adjoint > 0 { ".r" } else { ".l" };
        for _ in 0..self.adjoint.unsigned_abs() {
            f.write_str(suffix)?;
        }
        Ok(())
    }
}

impl FromStr for SimpleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('.');
        let base = BaseType::new(parts.next().unwrap_or_default())?;
        let mut adjoint: i32 = 0;
        for p in parts {
            adjoint = match p {
                "r" => adjoint.checked_add(1),
                "l" => adjoint.checked_sub(1),
                other => {
                    return Err(Error::TypeSyntax(format!(
                        "unknown adjoint suffix `.{other}` in `{s}`"
                    )))
                }
            }
            .ok_or_else(|| Error::TypeSyntax(format!("adjoint order overflow in `{s}`")))?;
        }
        Ok(SimpleType { base, adjoint })
    }
}

/// An element of the free pregroup: a product of simple types. The empty
/// product is the unit `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PregroupType(Vec<SimpleType>);

impl PregroupType {
    pub fn new(simples: Vec<SimpleType>) -> Self {
        PregroupType(simples)
    }

    pub fn unit() -> Self {
        PregroupType(Vec::new())
    }

    pub fn simple(s: SimpleType) -> Self {
        PregroupType(vec![s])
    }

    pub fn simples(&self) -> &[SimpleType] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_unit()
    }

    pub fn concat(&self, other: &PregroupType) -> PregroupType {
        PregroupType(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// Monoid product of a sequence of types.
    pub fn product(types: &[PregroupType]) -> PregroupType {
        PregroupType(types.iter().flat_map(|t| t.0.iter().cloned()).collect())
    }

    pub fn left_adjoint(&self) -> PregroupType {
        self.adjoint_by(-1)
    }

    pub fn right_adjoint(&self) -> PregroupType {
        self.adjoint_by(1)
    }

    fn adjoint_by(&self, step: i32) -> PregroupType {
        PregroupType(
            self.0
                .iter()
                .rev()
                .map(|s| SimpleType {
                    base: s.base.clone(),
                    adjoint: s.adjoint + step,
                })
                .collect(),
        )
    }

    pub fn base_types(&self) -> impl Iterator<Item = &BaseType> {
        self.0.iter().map(|s| &s.base)
    }
}

impl fmt::Display for PregroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for PregroupType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut simples = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            simples.push(tok.parse()?);
        }
        if simples.is_empty() && s.split_whitespace().next().is_none() {
            return Err(Error::TypeSyntax(
                "empty type string (write `1` for the unit)".into(),
            ));
        }
        Ok(PregroupType(simples))
    }
}

/// The set of base symbols a grammar is built over.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabet(BTreeSet<BaseType>);

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = BaseType>) -> Self {
        Alphabet(symbols.into_iter().collect())
    }

    pub fn contains(&self, b: &BaseType) -> bool {
        self.0.contains(b)
    }

    pub fn iter(&self) -> impl Iterator<Item = &BaseType> {
        self.0.iter()
    }
}

/// Planar cups over the flattened simple-type sequence plus the surviving
/// (straight) wires.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionDiagram {
    cups: Vec<(usize, usize)>,
    survivors: Vec<usize>,
}

impl ReductionDiagram {
    /// Cups are stored sorted; no other checking happens here, see [`is_valid`].
    pub fn new(mut cups: Vec<(usize, usize)>, survivors: Vec<usize>) -> Self {
        cups.sort_unstable();
        ReductionDiagram { cups, survivors }
    }

    pub fn identity(len: usize) -> Self {
        ReductionDiagram {
            cups: Vec::new(),
            survivors: (0..len).collect(),
        }
    }

    pub fn cups(&self) -> &[(usize, usize)] {
        &self.cups
    }

    pub fn survivors(&self) -> &[usize] {
        &self.survivors
    }
}

/// Check all diagram invariants against a type sequence and target: every
/// index used exactly once, cups non-crossing with no wire passing under a
/// cup, each cup an `a^(z) a^(z+1)` pair, survivors spelling the target.
pub fn is_valid(diagram: &ReductionDiagram, types: &[PregroupType], target: &PregroupType) -> bool {
    let flat = PregroupType::product(types);
    let x = flat.simples();
    let n = x.len();

    let mut used = vec![false; n];
    let mut mark = |i: usize| -> bool {
        if i >= n || used[i] {
            return false;
        }
        used[i] = true;
        true
    };
    for &(i, j) in &diagram.cups {
        if i >= j || !mark(i) || !mark(j) {
            return false;
        }
    }
    for &k in &diagram.survivors {
        if !mark(k) {
            return false;
        }
    }
    if used.iter().any(|u| !u) {
        return false;
    }

    for (a, &(i, j)) in diagram.cups.iter().enumerate() {
        if !x[i].contracts_with(&x[j]) {
            return false;
        }
        for &(k, l) in &diagram.cups[a + 1..] {
            if (i < k && k < j && j < l) || (k < i && i < l && l < j) {
                return false;
            }
        }
        if diagram.survivors.iter().any(|&s| i < s && s < j) {
            return false;
        }
    }

    if diagram.survivors.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    diagram.survivors.len() == target.len()
        && diagram
            .survivors
            .iter()
            .zip(target.simples())
            .all(|(&k, t)| &x[k] == t)
}

/// Find a planar reduction of `types` to `target`.
///
/// Interval dynamic programming: first which spans reduce to the unit, then
/// which suffixes reduce to which target suffixes. When several diagrams
/// exist, the one with the lexicographically smallest sorted cup list is
/// returned.
pub fn parse(types: &[PregroupType], target: &PregroupType) -> Result<ReductionDiagram> {
    let flat = PregroupType::product(types);
    let x = flat.simples();
    let t = target.simples();
    let (n, m) = (x.len(), t.len());

    let not_grammatical = || Error::NotGrammatical {
        sequence: types
            .iter()
            .map(|t| format!("({t})"))
            .collect::<Vec<_>>()
            .join(" "),
        target: target.to_string(),
    };
    if n < m || (n - m) % 2 != 0 {
        return Err(not_grammatical());
    }

    // empty[i][j]: x[i..j] reduces to 1.
    let mut empty = vec![vec![false; n + 1]; n + 1];
    for (i, row) in empty.iter_mut().enumerate() {
        row[i] = true;
    }
    for len in (2..=n).step_by(2) {
        for i in 0..=n - len {
            let j = i + len;
            empty[i][j] = (i + 1..j)
                .step_by(2)
                .any(|k| x[i].contracts_with(&x[k]) && empty[i + 1][k] && empty[k + 1][j]);
        }
    }

    // suffix[p][l]: x[p..] reduces to t[l..].
    let mut suffix = vec![vec![false; m + 1]; n + 1];
    suffix[n][m] = true;
    for p in (0..n).rev() {
        for l in 0..=m {
            let keep = l < m && x[p] == t[l] && suffix[p + 1][l + 1];
            suffix[p][l] = keep || first_cup(x, &empty, &suffix, p, l).is_some();
        }
    }
    if !suffix[0][0] {
        return Err(not_grammatical());
    }

    let mut cups = Vec::with_capacity((n - m) / 2);
    let mut survivors = Vec::with_capacity(m);
    let (mut p, mut l) = (0, 0);
    while p < n {
        if let Some(q) = first_cup(x, &empty, &suffix, p, l) {
            cups.push((p, q));
            fill_empty(x, &empty, p + 1, q, &mut cups);
            p = q + 1;
        } else {
            survivors.push(p);
            p += 1;
            l += 1;
        }
    }
    cups.sort_unstable();
    Ok(ReductionDiagram { cups, survivors })
}

/// Parse, additionally rejecting base types outside `alphabet`.
pub fn parse_in(
    alphabet: &Alphabet,
    types: &[PregroupType],
    target: &PregroupType,
) -> Result<ReductionDiagram> {
    for b in types
        .iter()
        .flat_map(PregroupType::base_types)
        .chain(target.base_types())
    {
        if !alphabet.contains(b) {
            return Err(Error::AlphabetMismatch(b.to_string()));
        }
    }
    parse(types, target)
}

fn first_cup(
    x: &[SimpleType],
    empty: &[Vec<bool>],
    suffix: &[Vec<bool>],
    p: usize,
    l: usize,
) -> Option<usize> {
    (p + 1..x.len())
        .step_by(2)
        .find(|&q| x[p].contracts_with(&x[q]) && empty[p + 1][q] && suffix[q + 1][l])
}

fn fill_empty(
    x: &[SimpleType],
    empty: &[Vec<bool>],
    mut i: usize,
    j: usize,
    cups: &mut Vec<(usize, usize)>,
) {
    while i < j {
        let k = (i + 1..j)
            .step_by(2)
            .find(|&k| x[i].contracts_with(&x[k]) && empty[i + 1][k] && empty[k + 1][j])
            .expect("span marked reducible");
        cups.push((i, k));
        fill_empty(x, empty, i + 1, k, cups);
        i = k + 1;
    }
}
