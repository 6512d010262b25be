//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use catcog::pregroup::{BaseType, PregroupType, SimpleType};
use catcog::semantics::{Lexicon, SpaceAssignment};
use catcog::tensor::{Space, Tensor};
use rand::Rng;

pub fn ty(s: &str) -> PregroupType {
    s.parse().unwrap()
}

pub fn simple(base: &str, adjoint: i32) -> SimpleType {
    SimpleType::new(BaseType::new(base).unwrap(), adjoint)
}

fn linked(a: &SimpleType, b: &SimpleType) -> bool {
    a.base == b.base && b.adjoint == a.adjoint + 1
}

/// Every planar reduction of `x` to `target`, as sorted cup lists.
///
/// Enumerates all partial matchings whose pairs obey the adjoint rule, then
/// keeps those with no crossing cups, no surviving wire under a cup, and
/// survivors spelling the target.
pub fn all_reductions(x: &[SimpleType], target: &[SimpleType]) -> Vec<Vec<(usize, usize)>> {
    let mut found = Vec::new();
    let mut partner = vec![None; x.len()];
    enumerate(x, target, 0, &mut partner, &mut |cups| {
        found.push(cups);
        true
    });
    found.sort();
    found
}

pub fn brute_reduces(x: &[SimpleType], target: &[SimpleType]) -> bool {
    let mut hit = false;
    let mut partner = vec![None; x.len()];
    enumerate(x, target, 0, &mut partner, &mut |_| {
        hit = true;
        false
    });
    hit
}

/// Returns false from `visit` to stop the search.
fn enumerate(
    x: &[SimpleType],
    target: &[SimpleType],
    i: usize,
    partner: &mut Vec<Option<usize>>,
    visit: &mut dyn FnMut(Vec<(usize, usize)>) -> bool,
) -> bool {
    if i == x.len() {
        if let Some(cups) = accept(x, target, partner) {
            return visit(cups);
        }
        return true;
    }
    if partner[i].is_some() {
        return enumerate(x, target, i + 1, partner, visit);
    }
    // i survives
    if !enumerate(x, target, i + 1, partner, visit) {
        return false;
    }
    for j in i + 1..x.len() {
        if partner[j].is_none() && linked(&x[i], &x[j]) {
            partner[i] = Some(j);
            partner[j] = Some(i);
            let go = enumerate(x, target, i + 1, partner, visit);
            partner[i] = None;
            partner[j] = None;
            if !go {
                return false;
            }
        }
    }
    true
}

fn accept(
    x: &[SimpleType],
    target: &[SimpleType],
    partner: &[Option<usize>],
) -> Option<Vec<(usize, usize)>> {
    let cups: Vec<(usize, usize)> = partner
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.filter(|&j| j > i).map(|j| (i, j)))
        .collect();
    let survivors: Vec<usize> = (0..x.len()).filter(|&i| partner[i].is_none()).collect();
    for &(a, b) in &cups {
        for &(c, d) in &cups {
            if a < c && c < b && b < d {
                return None;
            }
        }
        if survivors.iter().any(|&s| a < s && s < b) {
            return None;
        }
    }
    if survivors.len() != target.len() || survivors.iter().zip(target).any(|(&s, t)| &x[s] != t) {
        return None;
    }
    Some(cups)
}

/// Unfused evaluation: form the full tensor product of all word meanings,
/// then apply ε to every cup by summing over equal index pairs.
pub fn unfused_evaluate(
    meanings: &[&Tensor],
    cups: &[(usize, usize)],
    survivors: &[usize],
) -> Vec<f64> {
    let mut dims = Vec::new();
    let mut full = vec![1.0];
    for m in meanings {
        dims.extend(m.dims());
        let mut next = Vec::with_capacity(full.len() * m.len());
        for a in &full {
            for b in m.data() {
                next.push(a * b);
            }
        }
        full = next;
    }
    let out_dims: Vec<usize> = survivors.iter().map(|&k| dims[k]).collect();
    let mut out = vec![0.0; out_dims.iter().product()];
    let mut idx = vec![0usize; dims.len()];
    for value in &full {
        if cups.iter().all(|&(i, j)| idx[i] == idx[j]) {
            let mut o = 0;
            for (&k, &d) in survivors.iter().zip(&out_dims) {
                o = o * d + idx[k];
            }
            out[o] += value;
        }
        for k in (0..dims.len()).rev() {
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    out
}

pub fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn random_tensor(rng: &mut impl Rng, axes: Vec<Space>) -> Tensor {
    let n = axes.iter().map(Space::dim).product();
    Tensor::new(axes, random_vec(rng, n)).unwrap()
}

pub fn real(dim: usize) -> Space {
    Space::real(dim).unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Tensor {
    random_tensor(rng, vec![real(rows), real(cols)])
}

pub fn rel_err(got: &[f64], want: &[f64]) -> f64 {
    assert_eq!(got.len(), want.len());
    let diff = got
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    let scale = want.iter().map(|b| b * b).sum::<f64>().sqrt().max(1e-300);
    if diff == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

/// Word classes of the toy grammar used for random sentences.
pub const WORD_TYPES: &[(&str, &str)] = &[
    ("noun", "n"),
    ("adj", "n n.l"),
    ("iv", "n.r s"),
    ("tv", "n.r s n.l"),
    ("adv", "s.r s"),
];

/// A random lexicon with `per_class` words of each class above.
pub fn random_lexicon(rng: &mut impl Rng, dn: usize, ds: usize, per_class: usize) -> Lexicon {
    let mut spaces = SpaceAssignment::new();
    spaces.assign(BaseType::new("n").unwrap(), dn).unwrap();
    spaces.assign(BaseType::new("s").unwrap(), ds).unwrap();
    let mut lex = Lexicon::new(spaces);
    for (class, t) in WORD_TYPES {
        let t = ty(t);
        for k in 0..per_class {
            let axes = lex.spaces().spaces_of(&t).unwrap();
            let n = axes.iter().map(Space::dim).product();
            lex.insert(format!("{class}{k}"), t.clone(), random_vec(rng, n))
                .unwrap();
        }
    }
    lex
}

/// A random grammatical sentence (reducing to `s`) of at most `max_len` words.
pub fn random_sentence(rng: &mut impl Rng, per_class: usize, max_len: usize) -> Vec<String> {
    loop {
        let w = |rng: &mut dyn rand::RngCore, class: &str| {
            format!("{class}{}", rng.gen_range(0..per_class))
        };
        let np = |rng: &mut dyn rand::RngCore| {
            let mut out = Vec::new();
            while rng.gen_bool(0.3) {
                out.push(w(rng, "adj"));
            }
            out.push(w(rng, "noun"));
            out
        };
        let mut words = np(rng);
        if rng.gen_bool(0.5) {
            words.push(w(rng, "iv"));
        } else {
            words.push(w(rng, "tv"));
            words.extend(np(rng));
        }
        while rng.gen_bool(0.25) {
            words.push(w(rng, "adv"));
        }
        if words.len() <= max_len {
            return words;
        }
    }
}

/// A random noun phrase of at most `max_len` words.
pub fn random_noun_phrase(rng: &mut impl Rng, per_class: usize, max_len: usize) -> Vec<String> {
    let adjs = rng.gen_range(0..max_len);
    let mut words: Vec<String> = (0..adjs)
        .map(|_| format!("adj{}", rng.gen_range(0..per_class)))
        .collect();
    words.push(format!("noun{}", rng.gen_range(0..per_class)));
    words
}
