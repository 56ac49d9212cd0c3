//! Weighted edit cost tables in TSV form.
//!
//! Each row is `op<TAB>from<TAB>to<TAB>cost` where `op` is `sub`, `ins` or
//! `del` and `-` marks the empty side of an insertion or deletion. Blank
//! lines and lines starting with `#` are ignored. Anything not listed costs 1.

use alcs_core::CostTable;
use anyhow::{bail, Context, Result};

fn letter(field: &str, line: usize) -> Result<u8> {
    match field.as_bytes() {
        [c] if *c != b'-' => Ok(*c),
        _ => bail!("line {line}: expected a single letter, got {field:?}"),
    }
}

pub fn parse_costs(text: &str) -> Result<CostTable> {
    let mut table = CostTable::unit();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let row = raw.trim_end_matches('\r');
        if row.trim().is_empty() || row.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = row.split('\t').map(str::trim).collect();
        let [op, from, to, cost] = fields[..] else {
            bail!("line {line}: expected 4 tab-separated fields, got {}", fields.len());
        };
        let cost: u32 = cost
            .parse()
            .with_context(|| format!("line {line}: bad cost {cost:?}"))?;
        let set = match op {
            "sub" | "substitute" => table.set_substitution(letter(from, line)?, letter(to, line)?, cost),
            "ins" | "insert" => {
                if from != "-" {
                    bail!("line {line}: insertion rows need '-' as the source");
                }
                table.set_insertion(letter(to, line)?, cost)
            }
            "del" | "delete" => {
                if to != "-" {
                    bail!("line {line}: deletion rows need '-' as the target");
                }
                table.set_deletion(letter(from, line)?, cost)
            }
            other => bail!("line {line}: unknown operation {other:?}"),
        };
        set.with_context(|| format!("line {line}"))?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_and_defaults() {
        let t = parse_costs("# costs\nsub\ta\tb\t3\nins\t-\tc\t2\n\ndel\ta\t-\t4\n").unwrap();
        assert_eq!(t.substitution(b'a', b'b'), 3);
        assert_eq!(t.substitution(b'b', b'a'), 1);
        assert_eq!(t.insertion(b'c'), 2);
        assert_eq!(t.insertion(b'a'), 1);
        assert_eq!(t.deletion(b'a'), 4);
    }

    #[test]
    fn malformed_rows() {
        assert!(parse_costs("sub\ta\tb\n").is_err());
        assert!(parse_costs("ins\ta\tb\t1\n").is_err());
        assert!(parse_costs("del\ta\tb\t1\n").is_err());
        assert!(parse_costs("swap\ta\tb\t1\n").is_err());
        assert!(parse_costs("sub\ta\tb\t-2\n").is_err());
        assert!(parse_costs("sub\tab\tb\t2\n").is_err());
    }
}
