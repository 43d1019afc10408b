//! Element and group inputs.
//!
//! An argument naming an existing file is read from disk; anything else is parsed as inline
//! text. Besides the library formats (cycles, `s i j ...` reflection words, `id`, 9x9
//! matrices) two shorthands are accepted: `rep <type>` for the canonical order-3
//! representative of a Carter type and `beta` for the Bertini involution.

use std::path::Path;

use anyhow::{bail, Context, Result};
use dp1_core::curves::bertini_isometry;
use dp1_core::lattice::{GroupSpec, LatticeIsometry, RANK};
use dp1_core::weyl::{parse_element, representative_order3, CarterType3};

pub fn read_source(arg: &str) -> Result<(String, String)> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        Ok((text, path.file_stem().map_or(arg.to_string(), |s| s.to_string_lossy().into_owned())))
    } else {
        Ok((arg.to_string(), arg.trim().to_string()))
    }
}

fn shorthand(line: &str) -> Result<Option<LatticeIsometry>> {
    let mut tokens = line.split_whitespace();
    match tokens.next() {
        Some("beta") if tokens.next().is_none() => Ok(Some(bertini_isometry())),
        Some("rep") => {
            let Some(t) = tokens.next() else { bail!("`rep` needs a Carter type such as A2x3") };
            if tokens.next().is_some() {
                bail!("unexpected input after `rep {t}`");
            }
            let t: CarterType3 = t.parse()?;
            Ok(Some(representative_order3(t)))
        }
        _ => Ok(None),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().flat_map(|l| l.split(';')).map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty())
}

/// One element.
pub fn parse_single(text: &str) -> Result<LatticeIsometry> {
    let lines: Vec<&str> = content_lines(text).collect();
    if let [line] = lines[..] {
        if let Some(m) = shorthand(line)? {
            return Ok(m);
        }
    }
    Ok(parse_element(&lines.join("\n"))?)
}

/// Generators, one per line (or `;`-separated); matrix rows are grouped nine at a time.
pub fn parse_generators(text: &str) -> Result<Vec<LatticeIsometry>> {
    let mut out = Vec::new();
    let mut rows: Vec<&str> = Vec::new();
    for line in content_lines(text) {
        let numeric = line.starts_with(|c: char| c.is_ascii_digit() || c == '-');
        if numeric {
            rows.push(line);
            if rows.len() == RANK {
                out.push(LatticeIsometry::parse_matrix(&rows.join("\n"))?);
                rows.clear();
            }
            continue;
        }
        if !rows.is_empty() {
            bail!("incomplete matrix: {} of {RANK} rows before {line:?}", rows.len());
        }
        match shorthand(line)? {
            Some(m) => out.push(m),
            None => out.push(parse_element(line)?),
        }
    }
    if !rows.is_empty() {
        bail!("incomplete matrix: {} of {RANK} rows", rows.len());
    }
    Ok(out)
}

pub fn element_arg(arg: &str) -> Result<LatticeIsometry> {
    let (text, _) = read_source(arg)?;
    parse_single(&text)
}

pub fn group_arg(arg: Option<&str>) -> Result<GroupSpec> {
    match arg {
        None => Ok(GroupSpec::trivial()),
        Some(arg) => {
            let (text, label) = read_source(arg)?;
            Ok(GroupSpec::new(label, parse_generators(&text)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthands() {
        assert_eq!(parse_single("rep A2x4").unwrap(), representative_order3(CarterType3::A2x4));
        assert_eq!(parse_single("beta").unwrap(), bertini_isometry());
        assert!(parse_single("rep A5").is_err());
    }

    #[test]
    fn generator_lists() {
        let gens = parse_generators("(1 2 3)\n# comment\n(4 5 6); beta\n").unwrap();
        assert_eq!(gens.len(), 3);
        let mut text = LatticeIsometry::identity().to_matrix_text();
        text.push_str("(1 2)\n");
        assert_eq!(parse_generators(&text).unwrap().len(), 2);
        assert!(parse_generators("1 0 0 0 0 0 0 0 0\n(1 2)").is_err());
    }
}
