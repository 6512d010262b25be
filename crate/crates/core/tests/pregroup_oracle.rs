mod common;

use catcog::pregroup::{is_valid, parse, PregroupType, ReductionDiagram, SimpleType};
use catcog::Error;
use common::{all_reductions, brute_reduces, simple, ty};
use proptest::prelude::*;

fn alphabet6() -> Vec<SimpleType> {
    let mut out = Vec::new();
    for b in ["n", "s"] {
        for z in -1..=1 {
            out.push(simple(b, z));
        }
    }
    out
}

fn singletons(x: &[SimpleType]) -> Vec<PregroupType> {
    x.iter().cloned().map(PregroupType::simple).collect()
}

fn check_agrees(x: &[SimpleType], target: &PregroupType) {
    let types = singletons(x);
    let got = parse(&types, target);
    let want = brute_reduces(x, target.simples());
    match got {
        Ok(d) => {
            assert!(want, "parser found a reduction the oracle rejects: {x:?}");
            assert!(is_valid(&d, &types, target));
        }
        Err(Error::NotGrammatical { .. }) => assert!(!want, "parser missed a reduction: {x:?}"),
        Err(e) => panic!("unexpected error {e}"),
    }
}

#[test]
fn exhaustive_short_sequences() {
    let a = alphabet6();
    let targets = [ty("s"), ty("n"), PregroupType::unit()];
    for len in 0..=6u32 {
        for code in 0..a.len().pow(len) {
            let mut c = code;
            let x: Vec<SimpleType> = (0..len)
                .map(|_| {
                    let s = a[c % a.len()].clone();
                    c /= a.len();
                    s
                })
                .collect();
            for t in &targets {
                check_agrees(&x, t);
            }
        }
    }
}

#[test]
fn parser_returns_first_oracle_diagram() {
    // s.l s s.r s … has several planar reductions; the parser picks the
    // lexicographically smallest sorted cup list
    let cases = [
        "n n.r n n.r n",
        "s s.r s s.r s",
        "n.l n n.l n s",
        "n n.l n n.r n",
    ];
    for case in cases {
        let x = ty(case);
        for target in [ty("n"), ty("s"), PregroupType::unit()] {
            let all = all_reductions(x.simples(), target.simples());
            match parse(&singletons(x.simples()), &target) {
                Ok(d) => assert_eq!(d.cups(), all[0].as_slice(), "{case} -> {target}"),
                Err(_) => assert!(all.is_empty()),
            }
        }
    }
}

#[test]
fn transitive_sentence_and_swap() {
    let types = [ty("n"), ty("n.r s n.l"), ty("n")];
    let d = parse(&types, &ty("s")).unwrap();
    assert_eq!(d, ReductionDiagram::new(vec![(0, 1), (3, 4)], vec![2]));
    let swapped = [ty("n"), ty("n"), ty("n.r s n.l")];
    assert!(parse(&swapped, &ty("s")).is_err());
    assert!(!brute_reduces(
        ty("n n n.r s n.l").simples(),
        ty("s").simples()
    ));
}

fn simple_strategy() -> impl Strategy<Value = SimpleType> {
    (prop_oneof![Just("n"), Just("s"), Just("p")], -3i32..=3).prop_map(|(b, z)| simple(b, z))
}

fn seq_strategy(max: usize) -> impl Strategy<Value = Vec<SimpleType>> {
    prop::collection::vec(simple_strategy(), 0..=max)
}

/// Sequences built from nested contractible pairs around a target, so that a
/// good share of cases is grammatical.
fn grammatical_ish(max_pairs: usize) -> impl Strategy<Value = Vec<SimpleType>> {
    let step = (
        simple_strategy(),
        any::<bool>(),
        any::<prop::sample::Index>(),
    );
    (
        prop::collection::vec(step, 0..=max_pairs),
        simple_strategy(),
    )
        .prop_map(|(steps, head)| {
            let mut x = vec![head];
            for (s, left, at) in steps {
                let pair = if left {
                    vec![SimpleType::new(s.base.clone(), s.adjoint - 1), s]
                } else {
                    vec![s.clone(), SimpleType::new(s.base.clone(), s.adjoint + 1)]
                };
                let i = at.index(x.len() + 1);
                x.splice(i..i, pair);
            }
            x
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn adjoints_invert(x in seq_strategy(8)) {
        let t = PregroupType::new(x);
        prop_assert_eq!(t.left_adjoint().right_adjoint(), t.clone());
        prop_assert_eq!(t.right_adjoint().left_adjoint(), t.clone());
        let display = t.to_string();
        prop_assert_eq!(display.parse::<PregroupType>().unwrap(), t);
    }

    #[test]
    fn adjoint_cancels(x in seq_strategy(5)) {
        // x·xʳ and xˡ·x both reduce to the unit
        let t = PregroupType::new(x);
        let right = t.concat(&t.right_adjoint());
        let left = t.left_adjoint().concat(&t);
        for seq in [right, left] {
            let d = parse(&singletons(seq.simples()), &PregroupType::unit()).unwrap();
            prop_assert!(d.survivors().is_empty());
        }
    }

    #[test]
    fn random_sequences_agree(x in seq_strategy(9), t in seq_strategy(2)) {
        check_agrees(&x, &PregroupType::new(t));
    }

    #[test]
    fn built_sequences_agree(x in grammatical_ish(5), t in seq_strategy(1)) {
        check_agrees(&x, &PregroupType::new(t));
    }

    #[test]
    fn grouping_does_not_change_grammaticality(x in grammatical_ish(4), cut in any::<prop::sample::Index>()) {
        let target: Vec<SimpleType> = Vec::new();
        let flat = singletons(&x);
        let k = cut.index(x.len() + 1);
        let grouped = vec![PregroupType::new(x[..k].to_vec()), PregroupType::new(x[k..].to_vec())];
        let a = parse(&flat, &PregroupType::new(target.clone()));
        let b = parse(&grouped, &PregroupType::new(target));
        prop_assert_eq!(a.is_ok(), b.is_ok());
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
    }
}
