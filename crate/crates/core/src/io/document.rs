//! The chain document: a small JSON format naming states, target classes and
//! transitions by label.
//!
//! ```json
//! {
//!   "mode": "exact",
//!   "states": ["0", "1"],
//!   "targets": {"T": ["1"]},
//!   "transitions": [
//!     ["0", "0", "2/3"],
//!     ["0", "1", "1/3"],
//!     ["1", "1", "1/1"]
//!   ]
//! }
//! ```
//!
//! Probabilities are either all fractions `a/b` (exact mode) or all decimal
//! literals (float mode); bare integers fit either. `mode` may be omitted and
//! is then inferred from the probability style.

use indexmap::IndexMap;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::chain::{validate_chain, Chain, Targets};
use crate::error::{Error, Result};
use crate::numeric::{parse_rational, Mode, Weight};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub states: Vec<String>,
    pub targets: IndexMap<String, Vec<String>>,
    pub transitions: Vec<(String, String, String)>,
}

/// A parsed chain in whichever mode the document used.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyChain {
    Exact(Chain<BigRational>, Targets),
    Float(Chain<f64>, Targets),
}

impl AnyChain {
    pub fn mode(&self) -> Mode {
        match self {
            AnyChain::Exact(..) => Mode::Exact,
            AnyChain::Float(..) => Mode::Float,
        }
    }

    pub fn targets(&self) -> &Targets {
        match self {
            AnyChain::Exact(_, t) | AnyChain::Float(_, t) => t,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyChain::Exact(c, _) => c.len(),
            AnyChain::Float(c, _) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Style {
    Integer,
    Fraction,
    Decimal,
}

fn style_of(text: &str) -> Option<Style> {
    let t = text.trim();
    if t.contains('/') {
        parse_rational(t).map(|_| Style::Fraction)
    } else if parse_rational(t).is_some() {
        Some(Style::Integer)
    } else {
        t.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(|_| Style::Decimal)
    }
}

/// Parses and validates a chain document.
pub fn parse_chain(text: &str) -> Result<AnyChain> {
    let doc: ChainDocument = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_document(&doc)
}

pub fn from_document(doc: &ChainDocument) -> Result<AnyChain> {
    let mut styles = Vec::with_capacity(doc.transitions.len());
    for (i, (_, _, p)) in doc.transitions.iter().enumerate() {
        let style = style_of(p).ok_or_else(|| Error::Field {
            field: format!("transitions[{i}]"),
            message: format!("{p:?} is not a probability literal"),
        })?;
        styles.push(style);
    }
    let has = |s: Style| styles.iter().position(|&x| x == s);
    let mode = match doc.mode {
        Some(mode) => {
            let clash = match mode {
                Mode::Exact => has(Style::Decimal),
                Mode::Float => has(Style::Fraction),
            };
            if let Some(i) = clash {
                return Err(Error::Field {
                    field: format!("transitions[{i}]"),
                    message: format!("literal does not match mode {mode}"),
                });
            }
            mode
        }
        None => match (has(Style::Fraction), has(Style::Decimal)) {
            (Some(_), Some(i)) => {
                return Err(Error::Field {
                    field: format!("transitions[{i}]"),
                    message: "document mixes fractions and decimals".into(),
                })
            }
            (None, Some(_)) => Mode::Float,
            _ => Mode::Exact,
        },
    };
    match mode {
        Mode::Exact => {
            let (c, t) = build(doc, |p| parse_rational(p).expect("style checked"))?;
            Ok(AnyChain::Exact(c, t))
        }
        Mode::Float => {
            let (c, t) = build(doc, |p| p.trim().parse::<f64>().expect("style checked"))?;
            Ok(AnyChain::Float(c, t))
        }
    }
}

fn build<W: Weight>(doc: &ChainDocument, parse: impl Fn(&str) -> W) -> Result<(Chain<W>, Targets)> {
    let mut ids = std::collections::HashMap::with_capacity(doc.states.len());
    for (i, label) in doc.states.iter().enumerate() {
        ids.entry(label.as_str()).or_insert(i);
    }
    let id = |label: &str| {
        ids.get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    };
    let triples = doc
        .transitions
        .iter()
        .map(|(from, to, p)| Ok((id(from)?, id(to)?, parse(p))))
        .collect::<Result<Vec<_>>>()?;
    let chain = Chain::from_triples(doc.states.clone(), triples)?;
    let classes = doc
        .targets
        .iter()
        .map(|(name, members)| {
            let states = members.iter().map(|l| id(l)).collect::<Result<Vec<_>>>()?;
            Ok((name.clone(), states))
        })
        .collect::<Result<Vec<_>>>()?;
    let targets = Targets::new(classes);
    validate_chain(&chain, &targets).into_result()?;
    Ok((chain, targets))
}

/// The document for a chain, states in id order and transitions by (from, to).
pub fn to_document<W: Weight>(chain: &Chain<W>, targets: &Targets) -> ChainDocument {
    let label = |s: usize| chain.label(s).to_string();
    ChainDocument {
        mode: Some(W::MODE),
        states: chain.labels().to_vec(),
        targets: targets
            .classes()
            .iter()
            .map(|c| (c.name.clone(), c.states.iter().map(|&s| label(s)).collect()))
            .collect(),
        transitions: chain
            .rows()
            .iter()
            .enumerate()
            .flat_map(|(from, row)| row.iter().map(move |(to, p)| (from, *to, p.render())))
            .map(|(from, to, p)| (label(from), label(to), p))
            .collect(),
    }
}

/// Canonical text: one transition per line, deterministic for equal chains.
pub fn serialize_document(doc: &ChainDocument) -> String {
    let list = |v: &[String]| format!("[{}]", v.iter().map(json).collect::<Vec<_>>().join(", "));
    let mut out = String::from("{\n");
    if let Some(mode) = doc.mode {
        out += &format!("  \"mode\": {},\n", json(&mode.to_string()));
    }
    out += &format!("  \"states\": {},\n", list(&doc.states));
    out += "  \"targets\": {";
    for (i, (name, members)) in doc.targets.iter().enumerate() {
        if i > 0 {
            out += ", ";
        }
        out += &format!("{}: {}", json(name), list(members));
    }
    out += "},\n  \"transitions\": [";
    for (i, (from, to, p)) in doc.transitions.iter().enumerate() {
        out += if i == 0 { "\n    " } else { ",\n    " };
        out += &format!("[{}, {}, {}]", json(from), json(to), json(p));
    }
    out += if doc.transitions.is_empty() {
        "]\n}\n"
    } else {
        "\n  ]\n}\n"
    };
    out
}

pub fn serialize_chain<W: Weight>(chain: &Chain<W>, targets: &Targets) -> String {
    serialize_document(&to_document(chain, targets))
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("strings serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_gamblers_ruin, gen_hypercube};

    #[test]
    fn hypercube_round_trip() {
        let (c, t) = gen_hypercube::<BigRational>(3, false).unwrap();
        let text = serialize_chain(&c, &t);
        assert_eq!(
            parse_chain(&text).unwrap(),
            AnyChain::Exact(c.clone(), t.clone())
        );
        // Idempotent.
        let AnyChain::Exact(c2, t2) = parse_chain(&text).unwrap() else {
            unreachable!()
        };
        assert_eq!(serialize_chain(&c2, &t2), text);
    }

    #[test]
    fn float_round_trip_is_bit_exact() {
        let (c, t) = gen_gamblers_ruin::<f64>(2, 3, 0.3, false).unwrap();
        let text = serialize_chain(&c, &t);
        assert!(text.contains("\"0.3\"") && text.contains("\"0.7\""));
        assert_eq!(parse_chain(&text).unwrap(), AnyChain::Float(c, t));
    }

    #[test]
    fn fractions_are_reduced_exact() {
        let text = r#"{
            "states": ["a", "b"],
            "targets": {"T": ["b"]},
            "transitions": [["a", "a", "2/6"], ["a", "b", "4/6"], ["b", "b", "1"]]
        }"#;
        let AnyChain::Exact(c, _) = parse_chain(text).unwrap() else {
            panic!("expected exact mode")
        };
        assert_eq!(c.row(0)[0].1.render(), "1/3");
        assert_eq!(c.row(0)[1].1.render(), "2/3");
    }

    #[test]
    fn decimals_infer_float_mode() {
        let text = r#"{"states": ["a", "b"], "targets": {"T": ["b"]},
            "transitions": [["a", "b", "0.25"], ["a", "a", "0.75"], ["b", "b", "1"]]}"#;
        assert_eq!(parse_chain(text).unwrap().mode(), Mode::Float);
    }

    #[test]
    fn unknown_label() {
        let text = r#"{"states": ["a"], "targets": {"T": ["a"]},
            "transitions": [["a", "zz", "1/1"]]}"#;
        assert!(matches!(parse_chain(text), Err(Error::UnknownLabel(l)) if l == "zz"));
        let text = r#"{"states": ["a"], "targets": {"T": ["q"]},
            "transitions": [["a", "a", "1/1"]]}"#;
        assert!(matches!(parse_chain(text), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn syntax_error_has_position() {
        let text = "{\n  \"states\": [\"a\",\n  oops\n}";
        match parse_chain(text) {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(
            parse_chain(r#"{"states": [], "targets": {}, "transitions": [], "extra": 1}"#),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn style_and_mode_conflicts() {
        let mixed = r#"{"states": ["a"], "targets": {"T": ["a"]},
            "transitions": [["a", "a", "1/2"], ["a", "a", "0.5"]]}"#;
        assert!(matches!(parse_chain(mixed), Err(Error::Field { .. })));
        let wrong_mode = r#"{"mode": "float", "states": ["a"], "targets": {"T": ["a"]},
            "transitions": [["a", "a", "1/1"]]}"#;
        assert!(matches!(parse_chain(wrong_mode), Err(Error::Field { .. })));
        let junk = r#"{"states": ["a"], "targets": {"T": ["a"]},
            "transitions": [["a", "a", "half"]]}"#;
        assert!(matches!(parse_chain(junk), Err(Error::Field { .. })));
    }

    #[test]
    fn invalid_chain_is_rejected_with_report() {
        let text = r#"{"states": ["a", "b"], "targets": {"T": ["b"]},
            "transitions": [["a", "b", "9/10"], ["b", "a", "1/1"]]}"#;
        match parse_chain(text) {
            Err(Error::Invalid(report)) => assert_eq!(report.violations.len(), 2),
            other => panic!("expected validation failure, got {other:?}"),
        }
    }
}
