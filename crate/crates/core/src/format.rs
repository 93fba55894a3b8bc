//! The line-oriented design file format.
//!
//! ```text
//! # comment
//! design v=7
//! block 0 1 2
//! block 0 3 4
//! group degree=7
//! gen (0 1 2 3 4 5 6)
//! partition 0 0 0 0 0 0 0
//! ```
//!
//! Points are 0-based. Blocks are strictly increasing. The `group` and
//! `partition` sections are optional, in that order. A `gen` line with no
//! cycles is the identity. Files are UTF-8 with LF line endings.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::action::{ActionError, BlockSystem};
use crate::design::{DesignError, IncidenceStructure};
use crate::group::{GroupError, PermutationGroup};
use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("carriage return found; files must use LF line endings")]
    CarriageReturn,
    #[error("missing `design v=<int>` header")]
    MissingHeader,
    #[error("expected `{expected}`")]
    BadKeyValue { expected: &'static str },
    #[error("`{0}` is not a decimal integer")]
    BadInteger(String),
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("`{directive}` is out of place: {reason}")]
    OutOfOrder { directive: &'static str, reason: &'static str },
    #[error("block is not strictly increasing at `{0}`")]
    NonIncreasing(usize),
    #[error("group degree {degree} differs from v = {v}")]
    DegreeMismatch { degree: usize, v: usize },
    #[error("partition lists {found} class ids, expected {v}")]
    PartitionLength { found: usize, v: usize },
    #[error(transparent)]
    Cycle(#[from] PermError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Partition(#[from] ActionError),
}

/// A parse failure with the 1-based line it occurred on (0 for whole-file
/// checks).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// The generators of a `group` section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl GroupSpec {
    pub fn build(&self) -> Result<PermutationGroup, GroupError> {
        PermutationGroup::new(self.generators.clone(), self.degree)
    }
}

/// A design with its optional group and partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignFile {
    pub design: IncidenceStructure,
    pub group: Option<GroupSpec>,
    pub partition: Option<BlockSystem>,
}

impl DesignFile {
    pub fn new(design: IncidenceStructure) -> Self {
        DesignFile { design, group: None, partition: None }
    }
}

fn err(line: usize, kind: impl Into<ParseErrorKind>) -> ParseError {
    ParseError { line, kind: kind.into() }
}

fn parse_uint(tok: &str) -> Result<usize, ParseErrorKind> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseErrorKind::BadInteger(tok.to_string()));
    }
    tok.parse().map_err(|_| ParseErrorKind::BadInteger(tok.to_string()))
}

fn key_value(rest: &str, key: &str, expected: &'static str) -> Result<usize, ParseErrorKind> {
    let mut toks = rest.split_ascii_whitespace();
    let value = match (toks.next(), toks.next()) {
        (Some(t), None) => t.strip_prefix(key).ok_or(ParseErrorKind::BadKeyValue { expected })?,
        _ => return Err(ParseErrorKind::BadKeyValue { expected }),
    };
    parse_uint(value)
}

#[derive(PartialEq)]
enum Section {
    Start,
    Blocks,
    Group,
    Partition,
}

/// Parses a design file. Repeated blocks are rejected unless
/// `allow_multiset` is set, in which case a file with repeated blocks
/// yields a multiset structure and any other file a simple one.
pub fn parse_design_file(text: &str, allow_multiset: bool) -> Result<DesignFile, ParseError> {
    let mut v = None;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut group: Option<GroupSpec> = None;
    let mut class_ids: Option<Vec<usize>> = None;
    let mut section = Section::Start;

    for (idx, raw) in text.split('\n').enumerate() {
        let line = idx + 1;
        if raw.contains('\r') {
            return Err(err(line, ParseErrorKind::CarriageReturn));
        }
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (directive, rest) = trimmed.split_once(' ').unwrap_or((trimmed, ""));
        match directive {
            "design" => {
                if section != Section::Start {
                    return Err(err(line, ParseErrorKind::OutOfOrder { directive: "design", reason: "header appears twice" }));
                }
                v = Some(key_value(rest, "v=", "design v=<int>").map_err(|k| err(line, k))?);
                section = Section::Blocks;
            }
            "block" => {
                if section != Section::Blocks {
                    let reason = if section == Section::Start { "before the header" } else { "after the group or partition" };
                    return Err(err(line, ParseErrorKind::OutOfOrder { directive: "block", reason }));
                }
                let mut block = Vec::new();
                for tok in rest.split_ascii_whitespace() {
                    let x = parse_uint(tok).map_err(|k| err(line, k))?;
                    if block.last().is_some_and(|&p| p >= x) {
                        return Err(err(line, ParseErrorKind::NonIncreasing(x)));
                    }
                    block.push(x);
                }
                blocks.push(block);
            }
            "group" => {
                if section != Section::Blocks {
                    return Err(err(line, ParseErrorKind::OutOfOrder { directive: "group", reason: "expected after the blocks, at most once" }));
                }
                let degree = key_value(rest, "degree=", "group degree=<int>").map_err(|k| err(line, k))?;
                let nv = v.expect("header seen");
                if degree != nv {
                    return Err(err(line, ParseErrorKind::DegreeMismatch { degree, v: nv }));
                }
                group = Some(GroupSpec { degree, generators: Vec::new() });
                section = Section::Group;
            }
            "gen" => {
                let Some(gs) = group.as_mut().filter(|_| section == Section::Group) else {
                    return Err(err(line, ParseErrorKind::OutOfOrder { directive: "gen", reason: "only allowed inside a group section" }));
                };
                let g = Permutation::from_cycles(rest, gs.degree).map_err(|e| err(line, e))?;
                gs.generators.push(g);
            }
            "partition" => {
                if section == Section::Start || section == Section::Partition {
                    return Err(err(line, ParseErrorKind::OutOfOrder { directive: "partition", reason: "expected after the blocks, at most once" }));
                }
                let ids = rest
                    .split_ascii_whitespace()
                    .map(parse_uint)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|k| err(line, k))?;
                let nv = v.expect("header seen");
                if ids.len() != nv {
                    return Err(err(line, ParseErrorKind::PartitionLength { found: ids.len(), v: nv }));
                }
                class_ids = Some(ids);
                section = Section::Partition;
            }
            other => return Err(err(line, ParseErrorKind::UnknownDirective(other.to_string()))),
        }
    }

    let v = v.ok_or_else(|| err(0, ParseErrorKind::MissingHeader))?;
    let design = match IncidenceStructure::new(v, blocks.clone()) {
        Err(DesignError::DuplicateBlock { .. }) if allow_multiset => IncidenceStructure::new_multiset(v, blocks),
        other => other,
    }
    .map_err(|e| err(0, e))?;
    let partition = class_ids
        .map(BlockSystem::from_class_ids)
        .transpose()
        .map_err(|e| err(0, e))?;
    Ok(DesignFile { design, group, partition })
}

/// Reads and parses a design file from disk.
pub fn read_design_file(path: &Path, allow_multiset: bool) -> Result<DesignFile, FormatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    Ok(parse_design_file(&text, allow_multiset)?)
}

/// Canonical text for a design file; [`parse_design_file`] inverts it.
pub fn write_design_file(file: &DesignFile) -> String {
    let d = &file.design;
    let mut out = String::new();
    writeln!(out, "design v={}", d.v()).unwrap();
    for b in d.blocks() {
        out.push_str("block");
        for x in b {
            write!(out, " {x}").unwrap();
        }
        out.push('\n');
    }
    if let Some(g) = &file.group {
        writeln!(out, "group degree={}", g.degree).unwrap();
        for p in &g.generators {
            if p.is_identity() {
                out.push_str("gen\n");
            } else {
                writeln!(out, "gen {p}").unwrap();
            }
        }
    }
    if let Some(sigma) = &file.partition {
        out.push_str("partition");
        for c in sigma.class_ids() {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FANO: &str = "# Fano plane\ndesign v=7\nblock 0 1 2\nblock 0 3 4\nblock 0 5 6\nblock 1 3 5\nblock 1 4 6\nblock 2 3 6\nblock 2 4 5\ngroup degree=7\ngen (1 3)(2 4)\ngen\npartition 0 0 0 0 0 0 0\n";

    #[test]
    fn parses_all_sections() {
        let f = parse_design_file(FANO, false).unwrap();
        assert_eq!((f.design.v(), f.design.b()), (7, 7));
        let g = f.group.as_ref().unwrap();
        assert_eq!(g.generators.len(), 2);
        assert!(g.generators[1].is_identity());
        assert_eq!(f.partition.unwrap().num_classes(), 1);
    }

    #[test]
    fn round_trips() {
        let f = parse_design_file(FANO, false).unwrap();
        let text = write_design_file(&f);
        assert_eq!(parse_design_file(&text, false).unwrap(), f);
        assert_eq!(write_design_file(&parse_design_file(&text, false).unwrap()), text);
    }

    fn kind(text: &str) -> ParseErrorKind {
        parse_design_file(text, false).unwrap_err().kind
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(kind("design v=3\r\nblock 0 1\n"), ParseErrorKind::CarriageReturn);
        assert_eq!(kind("# nothing\n"), ParseErrorKind::MissingHeader);
        assert_eq!(kind("design v=3\nblock 1 0\n"), ParseErrorKind::NonIncreasing(0));
        assert_eq!(kind("design v=3\nblock 1 1\n"), ParseErrorKind::NonIncreasing(1));
        assert_eq!(kind("design v=3\nblock 0 1\ngroup degree=4\n"), ParseErrorKind::DegreeMismatch { degree: 4, v: 3 });
        assert_eq!(kind("design v=3\nblock 0 -1\n"), ParseErrorKind::BadInteger("-1".into()));
        assert_eq!(kind("design v=1e1\n"), ParseErrorKind::BadInteger("1e1".into()));
        assert_eq!(kind("design v=3\nfoo 1\n"), ParseErrorKind::UnknownDirective("foo".into()));
        assert_eq!(kind("design v=4\nblock 0 1\npartition 0 0 1\n"), ParseErrorKind::PartitionLength { found: 3, v: 4 });
        assert!(matches!(kind("design v=4\nblock 0 1\npartition 0 0 0 1\n"), ParseErrorKind::Partition(ActionError::RaggedPartition(_))));
        assert!(matches!(kind("design v=3\nblock 0 1\nblock 0 1\n"), ParseErrorKind::Design(DesignError::DuplicateBlock { .. })));
        assert!(matches!(kind("design v=3\ngen (0 1)\n"), ParseErrorKind::OutOfOrder { directive: "gen", .. }));
        assert!(matches!(kind("block 0 1\n"), ParseErrorKind::OutOfOrder { directive: "block", .. }));
        assert!(matches!(kind("design v=3\ngroup degree=3\ngen (0 3)\n"), ParseErrorKind::Cycle(_)));
    }

    #[test]
    fn multiset_needs_opt_in() {
        let text = "design v=3\nblock 0 1\nblock 0 1\n";
        assert!(parse_design_file(text, true).unwrap().design.is_multiset());
        assert!(!parse_design_file(FANO, true).unwrap().design.is_multiset());
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_design_file("design v=3\n\n# c\nblock 2 1\n", false).unwrap_err();
        assert_eq!(e.line, 4);
    }
}
