//! Line-oriented shift description files.
//!
//! ```text
//! # golden-mean shift on the binary tree
//! d = 2
//! k = 2
//! forbid 2 * 2          # symbol, generator index or * for all, symbol
//! ```
//!
//! A file declares `d` and `k` first, then exactly one of three styles:
//! `forbid` lines (forbidden transitions), `block` lines (admissible child
//! tuples per root symbol, `block i : i_1 ... i_d`), or `snre` lines
//! (equation items, `snre i : c * s_1 ... s_d`, one monomial per line with
//! its coefficient; height-1 values are the per-symbol coefficient sums).
//! `#` starts a comment; unknown directives are errors.

use std::fmt;

use treeshift::{
    Alphabet, BasicSet, ForbiddenSet, Monomial, Snre, SnreEquation, Symbol, Transition,
};

/// A diagnostic with the 1-based source line it refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Which declaration style the file used.
#[derive(Debug, Clone)]
pub enum Decl {
    Forbidden(ForbiddenSet),
    Blocks(BasicSet),
    Equations(Snre),
}

/// Parsed shift description.
#[derive(Debug, Clone)]
pub struct SpecFile {
    pub d: usize,
    pub k: usize,
    pub decl: Decl,
}

impl SpecFile {
    /// The recursive count system, whichever style was declared.
    pub fn to_snre(&self) -> Result<Snre, ParseError> {
        match &self.decl {
            Decl::Forbidden(f) => {
                let alphabet = Alphabet::new(self.k).map_err(internal)?;
                let b = BasicSet::from_forbidden(f, alphabet).map_err(internal)?;
                Ok(Snre::from_basic(&b))
            }
            Decl::Blocks(b) => Ok(Snre::from_basic(b)),
            Decl::Equations(f) => Ok(f.clone()),
        }
    }

    /// The basic set, when the declaration style provides one (equation-style
    /// files carry no block structure).
    pub fn basic_set(&self) -> Result<Option<BasicSet>, ParseError> {
        match &self.decl {
            Decl::Forbidden(f) => {
                let alphabet = Alphabet::new(self.k).map_err(internal)?;
                Ok(Some(BasicSet::from_forbidden(f, alphabet).map_err(internal)?))
            }
            Decl::Blocks(b) => Ok(Some(b.clone())),
            Decl::Equations(_) => Ok(None),
        }
    }
}

fn internal(e: treeshift::Error) -> ParseError {
    ParseError { line: 0, message: e.to_string() }
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Style {
    Forbid,
    Block,
    Snre,
}

/// Parse a shift description. Total: every input yields either a `SpecFile`
/// or a `ParseError` with a line number.
pub fn parse_spec(text: &str) -> Result<SpecFile, ParseError> {
    let mut d: Option<usize> = None;
    let mut k: Option<usize> = None;
    let mut style: Option<Style> = None;
    let mut forbids: Vec<Transition> = Vec::new();
    let mut blocks: Vec<(Symbol, Vec<Symbol>)> = Vec::new();
    let mut items: Vec<(Symbol, u64, Vec<Symbol>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }

        // `d = 2` / `k = 2`
        if let Some(eq_pos) = line.find('=') {
            let key = line[..eq_pos].trim();
            let value = line[eq_pos + 1..].trim();
            match key {
                "d" | "k" => {
                    let parsed: usize = match value.parse() {
                        Ok(v) if v >= 1 => v,
                        _ => return err(line_no, format!("`{key}` needs a positive integer, got `{value}`")),
                    };
                    let slot = if key == "d" { &mut d } else { &mut k };
                    if slot.is_some() {
                        return err(line_no, format!("`{key}` declared twice"));
                    }
                    *slot = Some(parsed);
                    continue;
                }
                _ => return err(line_no, format!("unknown assignment `{key}`")),
            }
        }

        // accept `block 1: 1 2` as well as `block 1 : 1 2`
        let spaced = line.replace(':', " : ");
        let mut words = spaced.split_whitespace();
        let directive = words.next().expect("non-empty line");
        let rest: Vec<&str> = words.collect();
        let (dd, kk) = match (d, k) {
            (Some(d), Some(k)) => (d, k),
            _ => return err(line_no, "declare `d = ...` and `k = ...` before any directive"),
        };
        let new_style = match directive {
            "forbid" => Style::Forbid,
            "block" => Style::Block,
            "snre" => Style::Snre,
            other => return err(line_no, format!("unknown directive `{other}`")),
        };
        match style {
            None => style = Some(new_style),
            Some(s) if s != new_style => {
                return err(line_no, "mixed declaration styles; use only one of forbid/block/snre")
            }
            _ => {}
        }

        let parse_symbol = |word: &str, what: &str| -> Result<Symbol, ParseError> {
            match word.parse::<usize>() {
                Ok(s) if (1..=kk).contains(&s) => Ok(s),
                Ok(s) => err(line_no, format!("{what} {s} out of range 1..={kk}")),
                Err(_) => err(line_no, format!("{what} `{word}` is not an integer")),
            }
        };

        match new_style {
            Style::Forbid => {
                // forbid a g b   (g = generator index or *)
                if rest.len() != 3 {
                    return err(line_no, "expected `forbid <symbol> <generator|*> <symbol>`");
                }
                let from = parse_symbol(rest[0], "symbol")?;
                let generator = if rest[1] == "*" {
                    None
                } else {
                    match rest[1].parse::<usize>() {
                        Ok(g) if (1..=dd).contains(&g) => Some(g),
                        Ok(g) => return err(line_no, format!("generator {g} out of range 1..={dd}")),
                        Err(_) => return err(line_no, format!("generator `{}` is not an integer or *", rest[1])),
                    }
                };
                let to = parse_symbol(rest[2], "symbol")?;
                forbids.push(Transition { from, generator, to });
            }
            Style::Block => {
                // block i : i_1 ... i_d
                if rest.len() != dd + 2 || rest.get(1) != Some(&":") {
                    return err(line_no, format!("expected `block <symbol> : <{dd} child symbols>`"));
                }
                let root = parse_symbol(rest[0], "root symbol")?;
                let tuple = rest[2..]
                    .iter()
                    .map(|w| parse_symbol(w, "child symbol"))
                    .collect::<Result<Vec<_>, _>>()?;
                blocks.push((root, tuple));
            }
            Style::Snre => {
                // snre i : c * s_1 ... s_d
                if rest.len() != dd + 4 || rest.get(1) != Some(&":") || rest.get(3) != Some(&"*") {
                    return err(
                        line_no,
                        format!("expected `snre <symbol> : <coeff> * <{dd} factor symbols>`"),
                    );
                }
                let owner = parse_symbol(rest[0], "symbol")?;
                let coeff: u64 = match rest[2].parse() {
                    Ok(c) if c >= 1 => c,
                    _ => return err(line_no, format!("malformed coefficient `{}`", rest[2])),
                };
                let factors = rest[4..]
                    .iter()
                    .map(|w| parse_symbol(w, "factor symbol"))
                    .collect::<Result<Vec<_>, _>>()?;
                items.push((owner, coeff, factors));
            }
        }
    }

    let (d, k) = match (d, k) {
        (Some(d), Some(k)) => (d, k),
        _ => return err(text.lines().count().max(1), "missing `d = ...` or `k = ...`"),
    };
    let style = match style {
        Some(s) => s,
        None => return err(text.lines().count().max(1), "no declaration lines (forbid/block/snre)"),
    };

    let decl = match style {
        Style::Forbid => {
            Decl::Forbidden(ForbiddenSet::new(d, forbids).map_err(internal)?)
        }
        Style::Block => {
            let mut sets = vec![std::collections::BTreeSet::new(); k];
            for (root, tuple) in blocks {
                sets[root - 1].insert(tuple);
            }
            Decl::Blocks(BasicSet::new(d, k, sets).map_err(internal)?)
        }
        Style::Snre => {
            let mut per_symbol: Vec<Vec<(Monomial, u64)>> = vec![Vec::new(); k];
            for (owner, coeff, factors) in items {
                let mono = Monomial::from_tuple(&factors, k);
                per_symbol[owner - 1].push((mono, coeff));
            }
            let equations = per_symbol
                .into_iter()
                .enumerate()
                .map(|(i, terms)| SnreEquation::new(i + 1, d, k, terms).map_err(internal))
                .collect::<Result<Vec<_>, _>>()?;
            Decl::Equations(Snre::new(d, k, equations).map_err(internal)?)
        }
    };
    Ok(SpecFile { d, k, decl })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forbid_hom() {
        let spec = parse_spec("d=2\nk=2\nforbid 2 * 2\n").unwrap();
        assert_eq!((spec.d, spec.k), (2, 2));
        let f = spec.to_snre().unwrap();
        assert_eq!(f.initial(1), 4);
        assert_eq!(f.initial(2), 1);
        match &spec.decl {
            Decl::Forbidden(fb) => assert!(fb.is_hom()),
            _ => panic!("wrong style"),
        }
    }

    #[test]
    fn parse_blocks() {
        let text = "d=2\nk=2\nblock 1: 1 1\nblock 1: 1 2\nblock 1: 2 1\nblock 1: 2 2\nblock 2: 1 1\n";
        let spec = parse_spec(text).unwrap();
        let b = spec.basic_set().unwrap().unwrap();
        assert_eq!(b.block(1).len(), 4);
        assert_eq!(b.block(2).len(), 1);
    }

    #[test]
    fn parse_snre_style() {
        // 2·x1x2 / x1² with height-1 values (2, 1)
        let text = "d = 2\nk = 2\nsnre 1 : 2 * 1 2\nsnre 2 : 1 * 1 1\n";
        let spec = parse_spec(text).unwrap();
        let f = spec.to_snre().unwrap();
        assert_eq!(f.initial(1), 2);
        assert_eq!(f.initial(2), 1);
        assert!(spec.basic_set().unwrap().is_none());
    }

    #[test]
    fn rejects_out_of_range_symbol() {
        let e = parse_spec("d=2\nk=2\nforbid 3 * 1\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("out of range"));
    }

    #[test]
    fn rejects_mixed_styles() {
        let e = parse_spec("d=2\nk=2\nforbid 2 * 2\nblock 1: 1 1\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("mixed"));
    }

    #[test]
    fn rejects_unknown_directive() {
        let e = parse_spec("d=2\nk=2\nallow 1 1 1\n").unwrap_err();
        assert!(e.message.contains("unknown directive"));
    }

    #[test]
    fn rejects_missing_header() {
        assert!(parse_spec("forbid 1 * 1\n").is_err());
        assert!(parse_spec("").is_err());
        assert!(parse_spec("d=2\nk=2\n").is_err());
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let text = "# a shift\nd = 2 # two generators\n\nk = 2\nforbid 2 * 2 # no 2-2\n";
        assert!(parse_spec(text).is_ok());
    }

    mod fuzz {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // the parser must never panic, whatever the input
            #[test]
            fn total_on_unicode(input in ".*") {
                let _ = parse_spec(&input);
            }

            #[test]
            fn total_on_arbitrary_bytes(bytes in prop::collection::vec(any::<u8>(), 0..256)) {
                let text = String::from_utf8_lossy(&bytes);
                let _ = parse_spec(&text);
            }

            // near-miss inputs around the real grammar
            #[test]
            fn total_on_grammar_shaped(
                d in 0usize..5, k in 0usize..5,
                words in prop::collection::vec("(forbid|block|snre|bogus|[0-9*:]{1,3})", 0..12),
            ) {
                let text = format!("d={d}\nk={k}\n{}", words.join(" "));
                let _ = parse_spec(&text);
            }
        }
    }
}
