use std::process::Command;

use catcog::cli::{run, EXIT_DATA, EXIT_NOT_GRAMMATICAL, EXIT_OK, EXIT_USAGE};
use catcog::io::{load_lexicon, save_lexicon, ResultRecord};

fn toy() -> String {
    format!("{}/data/toy.json", env!("CARGO_MANIFEST_DIR"))
}

fn extended() -> String {
    format!("{}/data/extended.json", env!("CARGO_MANIFEST_DIR"))
}

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("catcog").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn record(args: &[&str]) -> ResultRecord {
    let (code, out, err) = call(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn compose_sentence() {
    let lex = toy();
    let rec = record(&["--lexicon", &lex, "compose", "Clowns tell jokes"]);
    assert_eq!(rec.output.unwrap().data, vec![289.0, 347.0]);
    let d = rec.diagram.unwrap();
    assert_eq!(d.cups, vec![(0, 1), (3, 4)]);
    assert_eq!(d.survivors, vec![2]);
}

#[test]
fn compose_relative_clause_both_pipelines() {
    let lex = toy();
    let rec = record(&[
        "--lexicon",
        &lex,
        "--pipeline",
        "matrix",
        "compose",
        "Comedians who tell jokes",
    ]);
    assert_eq!(rec.output.unwrap().data, vec![441.0, 156.0]);
    let rec = record(&["--lexicon", &lex, "compose", "Comedians who tell jokes"]);
    assert_eq!(rec.output.unwrap().data, vec![420.0, 216.0]);
}

#[test]
fn exit_codes() {
    let lex = toy();
    assert_eq!(
        call(&["--lexicon", &lex, "compose", "jokes Clowns"]).0,
        EXIT_NOT_GRAMMATICAL
    );
    assert_eq!(
        call(&["--lexicon", &lex, "compose", "Clowns juggle"]).0,
        EXIT_DATA
    );
    assert_eq!(call(&["compose", "Clowns tell jokes"]).0, EXIT_USAGE);
    assert_eq!(call(&["--lexicon", &lex, "frobnicate"]).0, EXIT_USAGE);
    assert_eq!(
        call(&["--lexicon", "/nonexistent/lexicon.json", "compose", "a"]).0,
        EXIT_DATA
    );
    assert_eq!(call(&["parse", "n n.x"]).0, EXIT_USAGE);
    assert_eq!(
        call(&["unbind", "--w", "[[1,2],[3]]", "--s", "[1,2]"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        call(&["unbind", "--w", "[[1,2],[3,4]]", "--s", "[1,2,3]"]).0,
        EXIT_DATA
    );
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("compose"));
}

#[test]
fn compare_self_and_cross() {
    let lex = toy();
    let rec = record(&[
        "--lexicon",
        &lex,
        "compare",
        "Clowns tell jokes",
        "Clowns tell jokes",
    ]);
    assert!((rec.scalar.unwrap() - 1.0).abs() <= 1e-12);
    assert_eq!(rec.scalar_name.as_deref(), Some("cosine"));
    let rec = record(&[
        "--lexicon",
        &lex,
        "--pipeline",
        "matrix",
        "compare",
        "Clowns tell jokes",
        "Comedians who tell jokes",
    ]);
    assert!((rec.scalar.unwrap() - 0.8595859615370288).abs() <= 1e-12);
}

#[test]
fn parse_types_and_words() {
    let rec = record(&["parse", "n", "n.r s n.l", "n"]);
    assert_eq!(rec.diagram.unwrap().cups, vec![(0, 1), (3, 4)]);
    let lex = toy();
    let rec = record(&["--lexicon", &lex, "parse", "Clowns tell jokes"]);
    assert_eq!(rec.diagram.unwrap().survivors, vec![2]);
    assert_eq!(
        call(&["--target", "n", "parse", "n", "n.r s n.l", "n"]).0,
        EXIT_NOT_GRAMMATICAL
    );
}

#[test]
fn compile_and_substitute() {
    let lex = extended();
    let rec = record(&["--lexicon", &lex, "compile", "Clowns tell funny jokes"]);
    assert_eq!(
        rec.output.unwrap().data,
        rec.tensors["W"]
            .data
            .chunks(4)
            .map(|row| {
                row.iter()
                    .zip(&rec.tensors["f"].data)
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
            })
            .collect::<Vec<_>>()
    );
    assert_eq!(rec.tensors["W"].data.len(), 8);

    let rec = record(&[
        "--lexicon",
        &lex,
        "substitute",
        "Clowns tell jokes",
        "--modifier",
        "funny",
        "--slot",
        "1",
    ]);
    assert_eq!(rec.scalar_name.as_deref(), Some("residual"));
    assert!(rec.scalar.unwrap().is_finite());
    assert_eq!(rec.tensors["W_F"].data.len(), 4);
    assert_eq!(
        call(&[
            "--lexicon",
            &lex,
            "substitute",
            "Clowns tell jokes",
            "--modifier",
            "funny",
            "--slot",
            "2"
        ])
        .0,
        EXIT_DATA
    );
}

#[test]
fn unbind_convolve_encode() {
    let rec = record(&["unbind", "--w", "[[7,0],[0,4]]", "--s", "[441,156]"]);
    let f = rec.output.unwrap().data;
    assert!((f[0] - 63.0).abs() <= 1e-12 && (f[1] - 39.0).abs() <= 1e-12);

    let rec = record(&["convolve", "--a", "[1,2,3,4]", "--b", "[0,1,0,0]"]);
    assert_eq!(rec.output.unwrap().data, vec![4.0, 1.0, 2.0, 3.0]);

    let lex = extended();
    let rec = record(&["--lexicon", &lex, "ics-encode", "[Clowns [jokes mimes]]"]);
    assert_eq!(rec.tensors["depth1"].data, vec![7.0, 0.0, 4.0, 0.0]);
    assert_eq!(rec.tensors["depth2"].data.len(), 8);
}

#[test]
fn plain_output() {
    let lex = toy();
    let (code, out, _) = call(&[
        "--lexicon",
        &lex,
        "--output",
        "plain",
        "compose",
        "Clowns tell jokes",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("output S(2): 289 347"), "{out}");
    assert!(out.contains("cups: (0,1) (3,4)"));
}

#[test]
fn lexicon_file_roundtrip() {
    let lex = load_lexicon(extended()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("copy.json");
    save_lexicon(&lex, &path).unwrap();
    assert_eq!(load_lexicon(&path).unwrap(), lex);
}

#[test]
fn binary_entry_point() {
    let out = Command::new(env!("CARGO_BIN_EXE_catcog"))
        .args(["--lexicon", &toy(), "compose", "Clowns tell jokes"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let rec: ResultRecord = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rec.output.unwrap().data, vec![289.0, 347.0]);
    let bad = Command::new(env!("CARGO_BIN_EXE_catcog"))
        .args(["--lexicon", &toy(), "compose", "jokes Clowns"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_NOT_GRAMMATICAL));
}
