//! On-disk formats: versioned text files for codes, designs and square
//! sets, plus a JSON mirror for codes and synthesis plans.
//!
//! Symbols and points are one-based on disk, zero-based in memory. On
//! ingest the symbol `0` is normalized to `n`, accommodating transcriptions
//! that print `0` for the largest symbol; writers always emit `1..=n`.

use std::collections::BTreeMap;
use std::fmt;

use permcode_core::design::PairwiseBalancedDesign;
use permcode_core::latin::{LatinSquare, MolsSet};
use permcode_core::perm::{Permutation, PermutationCode};
use serde::{Deserialize, Serialize};

pub const CODE_HEADER: &str = "# permcode v1";
pub const PBD_HEADER: &str = "# pbd v1";
pub const LATIN_HEADER: &str = "# latin v1";

#[derive(Debug)]
pub enum FormatError {
    BadHeader { expected: &'static str },
    MissingField(&'static str),
    BadLine { line: usize, reason: String },
    WrongCount { what: &'static str, expected: usize, found: usize },
    Json(serde_json::Error),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::BadHeader { expected } => {
                write!(f, "missing or wrong header line, expected `{expected}`")
            }
            FormatError::MissingField(field) => write!(f, "missing header field `{field}`"),
            FormatError::BadLine { line, reason } => write!(f, "line {line}: {reason}"),
            FormatError::WrongCount { what, expected, found } => {
                write!(f, "expected {expected} {what}, found {found}")
            }
            FormatError::Json(e) => write!(f, "invalid JSON: {e}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e)
    }
}

/// A parsed code file: raw zero-based words plus the header claims.
/// Words are *not* validated here — that is the verifier's job.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeDocument {
    pub n: usize,
    pub claimed_d: Option<usize>,
    pub claimed_r: Option<usize>,
    pub words: Vec<Vec<u16>>,
}

impl CodeDocument {
    pub fn from_code(code: &PermutationCode) -> Self {
        CodeDocument {
            n: code.n(),
            claimed_d: code.claimed_d(),
            claimed_r: code.claimed_r(),
            words: code.words().iter().map(|w| w.word().to_vec()).collect(),
        }
    }

    /// Promotes the raw words to a validated [`PermutationCode`].
    pub fn to_code(&self) -> Result<PermutationCode, permcode_core::Error> {
        let words = self
            .words
            .iter()
            .map(|w| Permutation::from_word(w.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PermutationCode::new(self.n, words)?
            .with_claims(self.claimed_d, self.claimed_r))
    }

    pub fn parse_text(input: &str) -> Result<Self, FormatError> {
        let mut lines = input.lines().enumerate();
        let (_, header) = lines.next().ok_or(FormatError::BadHeader {
            expected: CODE_HEADER,
        })?;
        if header.trim() != CODE_HEADER {
            return Err(FormatError::BadHeader {
                expected: CODE_HEADER,
            });
        }
        let (meta_line_no, meta) = lines.next().ok_or(FormatError::MissingField("n"))?;
        let fields = parse_fields(meta, meta_line_no + 1)?;
        let n = get_usize(&fields, "n")?;
        let size = get_usize(&fields, "size")?;
        let claimed_d = get_opt_usize(&fields, "d")?;
        let claimed_r = get_opt_usize(&fields, "r")?;

        let mut words = Vec::with_capacity(size);
        for (line_no, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            words.push(parse_symbols(line, line_no + 1, n)?);
        }
        if words.len() != size {
            return Err(FormatError::WrongCount {
                what: "words",
                expected: size,
                found: words.len(),
            });
        }
        Ok(CodeDocument {
            n,
            claimed_d,
            claimed_r,
            words,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(CODE_HEADER);
        out.push('\n');
        out.push_str(&format!("n={} size={}", self.n, self.words.len()));
        if let Some(d) = self.claimed_d {
            out.push_str(&format!(" d={d}"));
        }
        if let Some(r) = self.claimed_r {
            out.push_str(&format!(" r={r}"));
        }
        out.push('\n');
        for word in &self.words {
            let line: Vec<String> = word.iter().map(|&s| (s + 1).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_json(input: &str) -> Result<Self, FormatError> {
        let file: CodeJson = serde_json::from_str(input)?;
        if file.words.len() != file.size {
            return Err(FormatError::WrongCount {
                what: "words",
                expected: file.size,
                found: file.words.len(),
            });
        }
        let words = file
            .words
            .iter()
            .map(|w| {
                w.iter()
                    .map(|&s| normalize_symbol(s as u64, file.n))
                    .collect::<Result<Vec<u16>, String>>()
                    .map_err(|reason| FormatError::BadLine { line: 0, reason })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CodeDocument {
            n: file.n,
            claimed_d: file.d,
            claimed_r: file.r,
            words,
        })
    }

    pub fn to_json(&self) -> String {
        let file = CodeJson {
            n: self.n,
            size: self.words.len(),
            d: self.claimed_d,
            r: self.claimed_r,
            words: self
                .words
                .iter()
                .map(|w| w.iter().map(|&s| s as u32 + 1).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serialization cannot fail")
    }

    /// Parses either format, sniffing JSON by the leading brace.
    pub fn parse(input: &str) -> Result<Self, FormatError> {
        if input.trim_start().starts_with('{') {
            Self::parse_json(input)
        } else {
            Self::parse_text(input)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CodeJson {
    n: usize,
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
    words: Vec<Vec<u32>>,
}

/// JSON form of a synthesis plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanJson {
    pub n: u64,
    pub r: usize,
    pub q: u64,
    pub m: u64,
    pub t: u64,
    pub u: u64,
}

impl From<permcode_core::sieve::SynthesisPlan> for PlanJson {
    fn from(p: permcode_core::sieve::SynthesisPlan) -> Self {
        PlanJson { n: p.n, r: p.r, q: p.q, m: p.m, t: p.t, u: p.u }
    }
}

pub fn plan_to_json(plan: permcode_core::sieve::SynthesisPlan) -> String {
    serde_json::to_string(&PlanJson::from(plan)).expect("serialization cannot fail")
}

pub fn parse_pbd(input: &str) -> Result<PairwiseBalancedDesign, FormatError> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines.next().ok_or(FormatError::BadHeader {
        expected: PBD_HEADER,
    })?;
    if header.trim() != PBD_HEADER {
        return Err(FormatError::BadHeader {
            expected: PBD_HEADER,
        });
    }
    let (meta_line_no, meta) = lines.next().ok_or(FormatError::MissingField("n"))?;
    let fields = parse_fields(meta, meta_line_no + 1)?;
    let n = get_usize(&fields, "n")?;
    let count = get_usize(&fields, "blocks")?;
    let mut blocks = Vec::with_capacity(count);
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut block = Vec::new();
        for token in line.split_whitespace() {
            let point: u64 = token.parse().map_err(|_| FormatError::BadLine {
                line: line_no + 1,
                reason: format!("`{token}` is not a point"),
            })?;
            if point == 0 || point > n as u64 {
                return Err(FormatError::BadLine {
                    line: line_no + 1,
                    reason: format!("point {point} outside 1..={n}"),
                });
            }
            block.push((point - 1) as u16);
        }
        blocks.push(block);
    }
    if blocks.len() != count {
        return Err(FormatError::WrongCount {
            what: "blocks",
            expected: count,
            found: blocks.len(),
        });
    }
    PairwiseBalancedDesign::new(n, blocks).map_err(|e| FormatError::BadLine {
        line: 0,
        reason: e.to_string(),
    })
}

pub fn write_pbd(pbd: &PairwiseBalancedDesign) -> String {
    let mut out = String::new();
    out.push_str(PBD_HEADER);
    out.push('\n');
    out.push_str(&format!("n={} blocks={}\n", pbd.n(), pbd.blocks().len()));
    for block in pbd.blocks() {
        let line: Vec<String> = block.iter().map(|&p| (p + 1).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_latin(input: &str) -> Result<MolsSet, FormatError> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines.next().ok_or(FormatError::BadHeader {
        expected: LATIN_HEADER,
    })?;
    if header.trim() != LATIN_HEADER {
        return Err(FormatError::BadHeader {
            expected: LATIN_HEADER,
        });
    }
    let (meta_line_no, meta) = lines.next().ok_or(FormatError::MissingField("n"))?;
    let fields = parse_fields(meta, meta_line_no + 1)?;
    let n = get_usize(&fields, "n")?;
    let count = get_usize(&fields, "count")?;
    let idempotent = match fields.get("idempotent").copied() {
        Some("true") => true,
        Some("false") => false,
        Some(other) => {
            return Err(FormatError::BadLine {
                line: meta_line_no + 1,
                reason: format!("idempotent must be true or false, got `{other}`"),
            })
        }
        None => return Err(FormatError::MissingField("idempotent")),
    };

    let mut squares = Vec::with_capacity(count);
    let mut rows: Vec<Vec<u16>> = Vec::with_capacity(n);
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        rows.push(parse_symbols(line, line_no + 1, n)?);
        if rows.len() == n {
            let square = LatinSquare::from_rows(&rows).map_err(|e| FormatError::BadLine {
                line: line_no + 1,
                reason: e.to_string(),
            })?;
            squares.push(square);
            rows.clear();
        }
    }
    if !rows.is_empty() || squares.len() != count {
        return Err(FormatError::WrongCount {
            what: "squares",
            expected: count,
            found: squares.len(),
        });
    }
    MolsSet::new(n, squares, idempotent).map_err(|e| FormatError::BadLine {
        line: 0,
        reason: e.to_string(),
    })
}

pub fn write_latin(set: &MolsSet) -> String {
    let mut out = String::new();
    out.push_str(LATIN_HEADER);
    out.push('\n');
    out.push_str(&format!(
        "n={} count={} idempotent={}\n",
        set.n(),
        set.len(),
        set.is_idempotent()
    ));
    for (k, square) in set.squares().iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for row in square.rows() {
            let line: Vec<String> = row.iter().map(|&s| (s + 1).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out
}

fn parse_fields(
    line: &str,
    line_no: usize,
) -> Result<BTreeMap<&str, &str>, FormatError> {
    line.split_whitespace()
        .map(|token| {
            token.split_once('=').ok_or_else(|| FormatError::BadLine {
                line: line_no,
                reason: format!("`{token}` is not a key=value field"),
            })
        })
        .collect()
}

fn get_usize(fields: &BTreeMap<&str, &str>, key: &'static str) -> Result<usize, FormatError> {
    fields
        .get(key)
        .ok_or(FormatError::MissingField(key))?
        .parse()
        .map_err(|_| FormatError::BadLine {
            line: 2,
            reason: format!("field `{key}` is not a number"),
        })
}

fn get_opt_usize(
    fields: &BTreeMap<&str, &str>,
    key: &'static str,
) -> Result<Option<usize>, FormatError> {
    match fields.get(key) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| FormatError::BadLine {
            line: 2,
            reason: format!("field `{key}` is not a number"),
        }),
    }
}

/// One-based symbol to zero-based, with `0` standing for `n`. Out-of-range
/// values are kept (shifted) so the verifier can report them as a witness;
/// only values that cannot be represented are rejected here.
fn normalize_symbol(token: u64, n: usize) -> Result<u16, String> {
    let value = if token == 0 { n as u64 } else { token };
    if value == 0 || value > u16::MAX as u64 {
        return Err(format!("symbol {token} cannot be represented"));
    }
    Ok((value - 1) as u16)
}

fn parse_symbols(line: &str, line_no: usize, n: usize) -> Result<Vec<u16>, FormatError> {
    line.split_whitespace()
        .map(|token| {
            let raw: u64 = token.parse().map_err(|_| FormatError::BadLine {
                line: line_no,
                reason: format!("`{token}` is not a symbol"),
            })?;
            normalize_symbol(raw, n).map_err(|reason| FormatError::BadLine {
                line: line_no,
                reason,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use permcode_core::latin::field_idempotent_mols;

    #[test]
    fn code_text_roundtrip() {
        let doc = CodeDocument {
            n: 4,
            claimed_d: Some(3),
            claimed_r: Some(1),
            words: vec![vec![0, 2, 3, 1], vec![2, 1, 3, 0]],
        };
        let text = doc.to_text();
        assert!(text.starts_with("# permcode v1\nn=4 size=2 d=3 r=1\n"));
        assert_eq!(CodeDocument::parse_text(&text).unwrap(), doc);
    }

    #[test]
    fn code_json_roundtrip() {
        let doc = CodeDocument {
            n: 3,
            claimed_d: None,
            claimed_r: Some(1),
            words: vec![vec![0, 2, 1]],
        };
        let json = doc.to_json();
        assert_eq!(CodeDocument::parse(&json).unwrap(), doc);
    }

    #[test]
    fn zero_symbol_normalizes_to_n() {
        let text = "# permcode v1\nn=3 size=1\n2 3 0\n";
        let doc = CodeDocument::parse_text(text).unwrap();
        // 0 stands for 3, so the zero-based word is [1, 2, 2]
        assert_eq!(doc.words, vec![vec![1, 2, 2]]);
    }

    #[test]
    fn header_and_counts_are_enforced() {
        assert!(matches!(
            CodeDocument::parse_text("# latin v1\nn=3 size=0\n"),
            Err(FormatError::BadHeader { .. })
        ));
        assert!(matches!(
            CodeDocument::parse_text("# permcode v1\nn=3 size=2\n1 2 3\n"),
            Err(FormatError::WrongCount { .. })
        ));
        assert!(matches!(
            CodeDocument::parse_text("# permcode v1\nsize=2\n"),
            Err(FormatError::MissingField("n"))
        ));
    }

    #[test]
    fn out_of_range_symbols_survive_for_the_verifier() {
        let doc = CodeDocument::parse_text("# permcode v1\nn=3 size=1\n1 9 3\n").unwrap();
        assert_eq!(doc.words[0][1], 8);
        assert!(doc.to_code().is_err());
    }

    #[test]
    fn pbd_roundtrip() {
        let pbd = permcode_core::design::truncated_td_pbd(3, 3, 1, None).unwrap();
        let text = write_pbd(&pbd);
        let back = parse_pbd(&text).unwrap();
        assert_eq!(back, pbd);
        assert_eq!(back.verify(), Ok(()));
    }

    #[test]
    fn latin_roundtrip() {
        let set = field_idempotent_mols(4).unwrap();
        let text = write_latin(&set);
        let back = parse_latin(&text).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn latin_rejects_wrong_counts() {
        let set = field_idempotent_mols(4).unwrap();
        let mut text = write_latin(&set);
        text.push_str("1 2 3 4\n");
        assert!(matches!(
            parse_latin(&text),
            Err(FormatError::WrongCount { .. })
        ));
    }
}
