//! Reading string sets from line files and FASTA.

use std::fmt::Write as _;

use alcs_core::{Alphabet, IndeterminateString, LetterSet, StringSet};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Lines,
    Fasta,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{what} {number} has an empty sequence")]
    EmptySequence { what: &'static str, number: usize },
    #[error("{what} {number}: unknown IUPAC code {code:?}")]
    UnknownIupacCode {
        what: &'static str,
        number: usize,
        code: char,
    },
    #[error("no sequences found")]
    NoSequences,
    #[error(transparent)]
    Core(#[from] alcs_core::AlcsError),
}

/// One named sequence as read from the file, before interpretation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    pub text: String,
    /// 1-based line number for line files, record number for FASTA.
    pub number: usize,
}

fn record_kind(format: Format) -> &'static str {
    match format {
        Format::Lines => "line",
        Format::Fasta => "record",
    }
}

/// Splits `text` into records. Blank lines are skipped in both formats.
pub fn read_records(text: &str, format: Format) -> Result<Vec<Record>, IngestError> {
    let mut out = Vec::new();
    match format {
        Format::Lines => {
            for (n, line) in text.lines().enumerate() {
                let line = line.trim();
                if !line.is_empty() {
                    out.push(Record {
                        name: format!("s{}", out.len() + 1),
                        text: line.to_string(),
                        number: n + 1,
                    });
                }
            }
        }
        Format::Fasta => {
            for (n, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with(';') {
                    continue;
                }
                if let Some(header) = line.strip_prefix('>') {
                    out.push(Record {
                        name: header.trim().to_string(),
                        text: String::new(),
                        number: out.len() + 1,
                    });
                } else {
                    let Some(rec) = out.last_mut() else {
                        return Err(IngestError::Parse {
                            line: n + 1,
                            message: "sequence data before the first '>' header".into(),
                        });
                    };
                    rec.text.extend(line.chars().filter(|c| !c.is_whitespace()));
                }
            }
        }
    }
    if out.is_empty() {
        return Err(IngestError::NoSequences);
    }
    let kind = record_kind(format);
    if let Some(r) = out.iter().find(|r| r.text.is_empty()) {
        return Err(IngestError::EmptySequence {
            what: kind,
            number: r.number,
        });
    }
    Ok(out)
}

/// Plain strings. FASTA input is lowercased unless `normalize` is off.
pub fn ingest_plain(
    text: &str,
    format: Format,
    alphabet: Option<&Alphabet>,
    normalize: bool,
) -> Result<(Vec<String>, StringSet), IngestError> {
    let records = read_records(text, format)?;
    let raw: Vec<Vec<u8>> = records
        .iter()
        .map(|r| {
            if format == Format::Fasta && normalize {
                r.text.to_ascii_lowercase().into_bytes()
            } else {
                r.text.clone().into_bytes()
            }
        })
        .collect();
    let alphabet = match alphabet {
        Some(a) => a.clone(),
        None => Alphabet::infer(&raw)?,
    };
    let set = StringSet::new(&raw, alphabet)?;
    Ok((records.into_iter().map(|r| r.name).collect(), set))
}

/// Letters denoted by an IUPAC nucleotide code.
pub fn iupac(code: u8) -> Option<&'static [u8]> {
    Some(match code {
        b'A' => b"A",
        b'C' => b"C",
        b'G' => b"G",
        b'T' => b"T",
        b'R' => b"AG",
        b'Y' => b"CT",
        b'S' => b"CG",
        b'W' => b"AT",
        b'K' => b"GT",
        b'M' => b"AC",
        b'B' => b"CGT",
        b'D' => b"AGT",
        b'H' => b"ACT",
        b'V' => b"ACG",
        b'N' => b"ACGT",
        _ => return None,
    })
}

/// Parses one degenerate sequence: IUPAC codes plus bracket groups such as
/// `[AT]` or `[A,T]`. Input is uppercased first.
pub fn parse_degenerate(
    text: &str,
    what: &'static str,
    number: usize,
) -> Result<IndeterminateString, IngestError> {
    let upper = text.to_ascii_uppercase();
    let bytes = upper.as_bytes();
    let unknown = |c: u8| IngestError::UnknownIupacCode {
        what,
        number,
        code: c as char,
    };
    let mut positions = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'[' {
            let close = bytes[i..].iter().position(|&c| c == b']').ok_or_else(|| {
                IngestError::Parse {
                    line: number,
                    message: format!("unclosed '[' in {what} {number}"),
                }
            })?;
            let mut letters = Vec::new();
            for &c in &bytes[i + 1..i + close] {
                if c == b',' {
                    continue;
                }
                letters.extend_from_slice(iupac(c).ok_or_else(|| unknown(c))?);
            }
            positions.push(LetterSet::new(&letters)?);
            i += close + 1;
        } else {
            positions.push(LetterSet::new(iupac(bytes[i]).ok_or_else(|| unknown(bytes[i]))?)?);
            i += 1;
        }
    }
    Ok(IndeterminateString::new(positions, &Alphabet::dna())?)
}

pub fn ingest_degenerate(
    text: &str,
    format: Format,
) -> Result<(Vec<String>, Vec<IndeterminateString>), IngestError> {
    let records = read_records(text, format)?;
    let kind = record_kind(format);
    let strings = records
        .iter()
        .map(|r| parse_degenerate(&r.text, kind, r.number))
        .collect::<Result<_, _>>()?;
    Ok((records.into_iter().map(|r| r.name).collect(), strings))
}

/// Inverse of [`ingest_plain`] for line files.
pub fn emit_lines(set: &StringSet) -> String {
    let mut out = String::new();
    for s in set.iter() {
        out.push_str(&String::from_utf8_lossy(s));
        out.push('\n');
    }
    out
}

/// Inverse of [`ingest_plain`] for FASTA, wrapping at 60 columns.
pub fn emit_fasta(names: &[String], set: &StringSet) -> String {
    let mut out = String::new();
    for (name, s) in names.iter().zip(set.iter()) {
        let _ = writeln!(out, ">{name}");
        for chunk in s.chunks(60) {
            let _ = writeln!(out, "{}", String::from_utf8_lossy(chunk));
        }
    }
    out
}
