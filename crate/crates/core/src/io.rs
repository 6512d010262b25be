//! Lexicon files and result records (JSON).
//!
//! ```json
//! {
//!   "spaces": { "n": 2, "s": 2 },
//!   "entries": [
//!     { "word": "Clowns", "type": "n", "data": [7, 4] },
//!     { "word": "tell", "type": "n.r s n.l", "data": [3, 4, 8, 1, 6, 9, 2, 5] }
//!   ]
//! }
//! ```
//!
//! `data` is row-major over the type's simple types, last index fastest.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pregroup::{BaseType, ReductionDiagram};
use crate::semantics::{Lexicon, SpaceAssignment};
use crate::tensor::{Space, Tensor};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconFile {
    pub spaces: BTreeMap<String, usize>,
    #[serde(default)]
    pub entries: Vec<EntryRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryRecord {
    pub word: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub data: Vec<f64>,
}

impl LexiconFile {
    pub fn into_lexicon(self) -> Result<Lexicon> {
        let mut spaces = SpaceAssignment::new();
        for (symbol, dim) in self.spaces {
            spaces.assign(BaseType::new(symbol)?, dim)?;
        }
        let mut lexicon = Lexicon::new(spaces);
        for e in self.entries {
            let ty = e.ty.parse().map_err(|err| match err {
                Error::TypeSyntax(m) => Error::Parse(format!("entry `{}`: {m}", e.word)),
                other => other,
            })?;
            lexicon.insert(e.word, ty, e.data)?;
        }
        Ok(lexicon)
    }

    pub fn from_lexicon(lexicon: &Lexicon) -> Self {
        LexiconFile {
            spaces: lexicon
                .spaces()
                .iter()
                .map(|(b, s)| (b.symbol().to_string(), s.dim()))
                .collect(),
            entries: lexicon
                .entries()
                .iter()
                .map(|e| EntryRecord {
                    word: e.word().to_string(),
                    ty: e.ty().to_string(),
                    data: e.meaning().data().to_vec(),
                })
                .collect(),
        }
    }
}

pub fn parse_lexicon(text: &str) -> Result<Lexicon> {
    let file: LexiconFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_lexicon()
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_lexicon(&text)
}

pub fn lexicon_to_string(lexicon: &Lexicon) -> String {
    serde_json::to_string_pretty(&LexiconFile::from_lexicon(lexicon)).expect("lexicon serializes")
}

pub fn save_lexicon(lexicon: &Lexicon, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, lexicon_to_string(lexicon) + "\n")?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorRecord {
    pub axes: Vec<Space>,
    pub data: Vec<f64>,
}

impl From<&Tensor> for TensorRecord {
    fn from(t: &Tensor) -> Self {
        TensorRecord {
            axes: t.axes().to_vec(),
            data: t.data().to_vec(),
        }
    }
}

impl TryFrom<TensorRecord> for Tensor {
    type Error = Error;

    fn try_from(r: TensorRecord) -> Result<Tensor> {
        Tensor::new(r.axes, r.data)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramRecord {
    pub cups: Vec<(usize, usize)>,
    pub survivors: Vec<usize>,
}

impl From<&ReductionDiagram> for DiagramRecord {
    fn from(d: &ReductionDiagram) -> Self {
        DiagramRecord {
            cups: d.cups().to_vec(),
            survivors: d.survivors().to_vec(),
        }
    }
}

/// One CLI result.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<TensorRecord>,
    /// Additional named tensors (e.g. the filler vector of a factored form).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tensors: BTreeMap<String, TensorRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<DiagramRecord>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = include_str!("../data/toy.json");

    #[test]
    fn toy_lexicon_loads_with_index_anchor() {
        let lex = parse_lexicon(TOY).unwrap();
        let tell = lex.get("tell").unwrap().meaning();
        assert_eq!(tell.dims(), vec![2, 2, 2]);
        assert_eq!(tell.get(&[1, 0, 1]).unwrap(), 9.0);
        assert_eq!(lex.get("Clowns").unwrap().meaning().data(), &[7.0, 4.0]);
        assert_eq!(lex.get("jokes").unwrap().meaning().data(), &[5.0, 1.0]);
    }

    #[test]
    fn shape_error() {
        let text = r#"{"spaces": {"n": 2, "s": 2}, "entries": [{"word": "tell", "type": "n.r s n.l", "data": [1,2,3,4,5,6,7]}]}"#;
        assert!(matches!(parse_lexicon(text), Err(Error::Shape(_))));
    }

    #[test]
    fn empty_entries() {
        let lex = parse_lexicon(r#"{"spaces": {"n": 2}, "entries": []}"#).unwrap();
        assert!(lex.is_empty());
        assert!(parse_lexicon(r#"{"spaces": {}}"#).unwrap().is_empty());
    }

    #[test]
    fn malformed_and_unknown() {
        assert!(matches!(parse_lexicon("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_lexicon(r#"{"spaces": {"n": 2}, "extra": 1}"#),
            Err(Error::Parse(_))
        ));
        let text = r#"{"spaces": {"n": 2}, "entries": [{"word": "x", "type": "q", "data": [1]}]}"#;
        assert_eq!(parse_lexicon(text), Err(Error::UnknownBaseType("q".into())));
        let text =
            r#"{"spaces": {"n": 2}, "entries": [{"word": "x", "type": "n.z", "data": [1, 2]}]}"#;
        assert!(matches!(parse_lexicon(text), Err(Error::Parse(_))));
        assert!(matches!(
            parse_lexicon(r#"{"spaces": {"n": 0}}"#),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn roundtrip_through_text() {
        let lex = parse_lexicon(TOY).unwrap();
        assert_eq!(parse_lexicon(&lexicon_to_string(&lex)).unwrap(), lex);
    }

    #[test]
    fn record_roundtrip() {
        let rec = ResultRecord {
            command: vec!["compose".into()],
            output: Some(TensorRecord {
                axes: vec![Space::new("S", 2).unwrap()],
                data: vec![289.0, 347.0],
            }),
            scalar: Some(0.1 + 0.2),
            scalar_name: Some("cosine".into()),
            diagram: Some(DiagramRecord {
                cups: vec![(0, 1), (3, 4)],
                survivors: vec![2],
            }),
            ..Default::default()
        };
        let text = serde_json::to_string(&rec).unwrap();
        assert_eq!(serde_json::from_str::<ResultRecord>(&text).unwrap(), rec);
    }
}
