//! Command-line front end. `run` parses arguments, executes one subcommand
//! and writes a [`ResultRecord`] to `stdout`; diagnostics go to `stderr`.
//!
//! Exit codes: 0 success, 1 usage error, 2 not grammatical, 3 data error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::ics::{self, AtomicFillers, BinaryTree, RoleBasis};
use crate::io::{load_lexicon, DiagramRecord, ResultRecord, TensorRecord};
use crate::pregroup::{self, PregroupType};
use crate::semantics::{self, Lexicon, Phrase, Pipeline};
use crate::tensor::{Space, Tensor, DEFAULT_PINV_TOL};
use crate::unbinding;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_GRAMMATICAL: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "catcog",
    version,
    about = "Compose, compare, factor and unbind typed tensor meanings"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Lexicon file (JSON)
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Target type, e.g. "s" or "n"
    #[arg(long, global = true, default_value = "s")]
    target: String,
    /// Relative pseudoinverse cutoff
    #[arg(long, global = true, default_value_t = DEFAULT_PINV_TOL)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Relative-clause evaluator
    #[arg(long, global = true, value_enum, default_value_t = PipelineArg::Diagram)]
    pipeline: PipelineArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PipelineArg {
    Matrix,
    Diagram,
}

impl From<PipelineArg> for Pipeline {
    fn from(p: PipelineArg) -> Self {
        match p {
            PipelineArg::Matrix => Pipeline::Matrix,
            PipelineArg::Diagram => Pipeline::Diagram,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce words (with --lexicon) or type strings (without) to the target
    Parse { items: Vec<String> },
    /// Meaning of a sentence, or of `head who verb object`
    Compose { phrase: String },
    /// Cosine similarity of two phrases
    Compare { a: String, b: String },
    /// Factor a sentence into W·f
    Compile {
        sentence: String,
        /// Comma-separated atomic filler words (default: words of type n)
        #[arg(long, value_delimiter = ',')]
        fillers: Option<Vec<String>>,
    },
    /// Apply the pseudoinverse of W to s
    Unbind {
        /// Matrix as JSON rows, e.g. "[[7,0],[0,4]]"
        #[arg(long)]
        w: String,
        /// Vector as JSON, e.g. "[441,156]"
        #[arg(long)]
        s: String,
    },
    /// Insert a modifier into one filler slot of a sentence's W·f form
    Substitute {
        sentence: String,
        /// Lexicon word whose matrix modifies the slot
        #[arg(long)]
        modifier: String,
        #[arg(long)]
        slot: usize,
    },
    /// Encode a bracketed binary tree of lexicon words, e.g. "[A [B C]]"
    IcsEncode {
        tree: String,
        /// Role vectors r0, r1 as JSON, default "[[1,0],[0,1]]"
        #[arg(long)]
        roles: Option<String>,
    },
    /// Circular convolution of two vectors
    Convolve {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Execute one command line (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();

    match execute(&cli, echo) {
        Ok(record) => {
            let text = match cli.common.output {
                Output::Json => serde_json::to_string(&record).expect("record serializes"),
                Output::Plain => render_plain(&record),
            };
            let _ = writeln!(stdout, "{text}");
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "usage error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::NotGrammatical { .. } => EXIT_NOT_GRAMMATICAL,
                Error::TypeSyntax(_) => EXIT_USAGE,
                _ => EXIT_DATA,
            }
        }
    }
}

fn execute(cli: &Cli, command: Vec<String>) -> Result<ResultRecord, Failure> {
    let c = &cli.common;
    let target: PregroupType = c.target.parse()?;
    let mut rec = ResultRecord {
        command,
        ..Default::default()
    };

    match &cli.command {
        Command::Parse { items } => {
            let (types, label): (Vec<PregroupType>, _) = match &c.lexicon {
                Some(_) => {
                    let lex = lexicon(c)?;
                    let words: Vec<&str> =
                        items.iter().flat_map(|s| s.split_whitespace()).collect();
                    let types = words
                        .iter()
                        .map(|w| lex.get(w).map(|e| e.ty().clone()))
                        .collect::<Result<_, _>>()?;
                    (types, "words")
                }
                None => (
                    items.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
                    "types",
                ),
            };
            if types.is_empty() {
                return Err(Failure::Usage(format!("no {label} given")));
            }
            let diagram = pregroup::parse(&types, &target)?;
            rec.diagram = Some(DiagramRecord::from(&diagram));
        }
        Command::Compose { phrase } => {
            let lex = lexicon(c)?;
            match Phrase::parse(phrase)? {
                Phrase::Sentence(words) => {
                    let comp = semantics::compose(&words, &lex, &target)?;
                    rec.output = Some(TensorRecord::from(&comp.meaning));
                    rec.diagram = Some(DiagramRecord::from(&comp.diagram));
                }
                rel => {
                    let t = semantics::evaluate_phrase(&rel, &lex, &target, c.pipeline.into())?;
                    rec.output = Some(TensorRecord::from(&t));
                }
            }
        }
        Command::Compare { a, b } => {
            let lex = lexicon(c)?;
            let (pa, pb) = (Phrase::parse(a)?, Phrase::parse(b)?);
            let cos = semantics::meaning_similarity(&pa, &pb, &lex, &target, c.pipeline.into())?;
            rec.scalar = Some(cos);
            rec.scalar_name = Some("cosine".into());
        }
        Command::Compile { sentence, fillers } => {
            let lex = lexicon(c)?;
            let words: Vec<&str> = sentence.split_whitespace().collect();
            let policy = match fillers {
                Some(ws) => AtomicFillers::Words(ws.clone()),
                None => AtomicFillers::default(),
            };
            let form = ics::compile_sentence_to_wf(&words, &lex, &target, &policy)?;
            rec.output = Some(TensorRecord::from(&form.realize()?));
            rec.tensors
                .insert("W".into(), TensorRecord::from(form.weight()));
            rec.tensors
                .insert("f".into(), TensorRecord::from(form.filler()));
        }
        Command::Unbind { w, s } => {
            let w = json_matrix(w)?;
            let s = json_vector(s)?;
            let f = unbinding::approx_unbind(&w, &s, c.tol)?;
            rec.output = Some(TensorRecord::from(&f));
        }
        Command::Substitute {
            sentence,
            modifier,
            slot,
        } => {
            let lex = lexicon(c)?;
            let words: Vec<&str> = sentence.split_whitespace().collect();
            let form =
                ics::compile_sentence_to_wf(&words, &lex, &target, &AtomicFillers::default())?;
            let filler_dims: Vec<usize> = form.factors().iter().map(Space::dim).collect();
            let m = lex.get(modifier)?.meaning().clone();
            let op = unbinding::make_substitution_with_tol(
                form.weight(),
                &m,
                *slot,
                &filler_dims,
                c.tol,
            )?;
            let out = unbinding::substitute(&op, form.filler())?;
            rec.output = Some(TensorRecord::from(&out.result));
            rec.tensors
                .insert("target".into(), TensorRecord::from(&out.target));
            rec.tensors
                .insert("W_F".into(), TensorRecord::from(op.operator()));
            rec.scalar = Some(out.residual);
            rec.scalar_name = Some("residual".into());
        }
        Command::IcsEncode { tree, roles } => {
            let lex = lexicon(c)?;
            let tree = parse_tree(tree, &lex)?;
            let roles = match roles {
                Some(text) => {
                    let rows: Vec<Vec<f64>> =
                        serde_json::from_str(text).map_err(|e| Failure::Usage(e.to_string()))?;
                    let [r0, r1] = rows.as_slice() else {
                        return Err(Failure::Usage("--roles needs exactly two vectors".into()));
                    };
                    if r0.len() != r1.len() {
                        return Err(Failure::Usage("role vectors differ in length".into()));
                    }
                    let space = Space::new("R", r0.len())?;
                    RoleBasis::new(
                        Tensor::vector(space.clone(), r0.clone())?,
                        Tensor::vector(space, r1.clone())?,
                    )?
                }
                None => RoleBasis::standard(Space::new("R", 2)?)?,
            };
            let s = ics::encode_tree(&tree, &roles)?;
            for (depth, t) in s.components() {
                rec.tensors
                    .insert(format!("depth{depth}"), TensorRecord::from(t));
            }
        }
        Command::Convolve { a, b } => {
            let out = ics::circular_convolution(&json_vector(a)?, &json_vector(b)?)?;
            rec.output = Some(TensorRecord::from(&out));
        }
    }
    Ok(rec)
}

fn lexicon(c: &Common) -> Result<Lexicon, Failure> {
    let path = c
        .lexicon
        .as_ref()
        .ok_or_else(|| Failure::Usage("--lexicon is required".into()))?;
    Ok(load_lexicon(path)?)
}

fn json_vector(text: &str) -> Result<Tensor, Failure> {
    let data: Vec<f64> =
        serde_json::from_str(text).map_err(|e| Failure::Usage(format!("`{text}`: {e}")))?;
    if data.is_empty() {
        return Err(Failure::Usage("empty vector".into()));
    }
    Ok(Tensor::vector(Space::real(data.len())?, data)?)
}

fn json_matrix(text: &str) -> Result<Tensor, Failure> {
    let rows: Vec<Vec<f64>> =
        serde_json::from_str(text).map_err(|e| Failure::Usage(format!("`{text}`: {e}")))?;
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(Failure::Usage(
            "matrix rows must be non-empty and of equal length".into(),
        ));
    }
    let r = rows.len();
    Ok(Tensor::matrix(
        Space::real(r)?,
        Space::real(cols)?,
        rows.concat(),
    )?)
}

/// `[left right]` nodes, bare words as leaves.
fn parse_tree(text: &str, lex: &Lexicon) -> Result<BinaryTree, Failure> {
    let spaced = text.replace('[', " [ ").replace(']', " ] ");
    let tokens: Vec<&str> = spaced.split_whitespace().collect();
    let mut pos = 0;
    let tree = tree_node(&tokens, &mut pos, lex)?;
    if pos != tokens.len() {
        return Err(Failure::Usage(format!("trailing input in tree `{text}`")));
    }
    Ok(tree)
}

fn tree_node(tokens: &[&str], pos: &mut usize, lex: &Lexicon) -> Result<BinaryTree, Failure> {
    let tok = *tokens
        .get(*pos)
        .ok_or_else(|| Failure::Usage("unexpected end of tree".into()))?;
    *pos += 1;
    match tok {
        "[" => {
            let left = tree_node(tokens, pos, lex)?;
            let right = tree_node(tokens, pos, lex)?;
            if tokens.get(*pos) != Some(&"]") {
                return Err(Failure::Usage(
                    "tree nodes must have exactly two children".into(),
                ));
            }
            *pos += 1;
            Ok(BinaryTree::node(left, right))
        }
        "]" => Err(Failure::Usage("unexpected `]`".into())),
        word => {
            let m = lex.get(word)?.meaning();
            m.expect_rank(1)?;
            Ok(BinaryTree::leaf(m.clone()))
        }
    }
}

fn render_plain(rec: &ResultRecord) -> String {
    let fmt_tensor = |t: &TensorRecord| {
        let axes = if t.axes.is_empty() {
            "I".to_string()
        } else {
            t.axes
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join("⊗")
        };
        let data = t
            .data
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        format!("{axes}: {data}")
    };
    let mut lines = Vec::new();
    if let Some(t) = &rec.output {
        lines.push(format!("output {}", fmt_tensor(t)));
    }
    for (name, t) in &rec.tensors {
        lines.push(format!("{name} {}", fmt_tensor(t)));
    }
    if let Some(x) = rec.scalar {
        lines.push(format!(
            "{}: {x}",
            rec.scalar_name.as_deref().unwrap_or("scalar")
        ));
    }
    if let Some(d) = &rec.diagram {
        let cups = d
            .cups
            .iter()
            .map(|(i, j)| format!("({i},{j})"))
            .collect::<Vec<_>>()
            .join(" ");
        let surv = d
            .survivors
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        lines.push(format!("cups: {cups}"));
        lines.push(format!("survivors: {surv}"));
    }
    lines.join("\n")
}
