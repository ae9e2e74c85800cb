//! Parser for systems of wreath recursions such as
//! `a = (0 1)(1, 1, a); b = (0 2)(1, b, 1)`.
//!
//! Each definition is a name, `=`, zero or more permutation cycles and a
//! final parenthesized list of `k` sections. A section is either `1` (the
//! identity) or the name of another definition in the same system.
//! Definitions are separated by newlines or `;`, and `#` starts a comment.

use std::collections::BTreeMap;

use crate::automaton::{State, TreeAutomorphism};
use crate::error::{Error, Result};
use crate::perm::{parse_cycles, Permutation};

struct Definition {
    name: String,
    cycles: Vec<Vec<usize>>,
    sections: Vec<String>,
}

/// Parses a system of recursions and returns every named automorphism.
pub fn parse_system(text: &str) -> Result<BTreeMap<String, TreeAutomorphism>> {
    let defs = text
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(|line| line.split(';'))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_definition)
        .collect::<Result<Vec<_>>>()?;
    if defs.is_empty() {
        return Err(Error::Parse("no definitions".into()));
    }
    let k = defs[0].sections.len();
    let mut index = BTreeMap::new();
    for (i, d) in defs.iter().enumerate() {
        if d.sections.len() != k {
            return Err(Error::Parse(format!(
                "{} has {} sections, expected {k}",
                d.name,
                d.sections.len()
            )));
        }
        if d.name == "1" || index.insert(d.name.clone(), i).is_some() {
            return Err(Error::Parse(format!(
                "duplicate or reserved name {}",
                d.name
            )));
        }
    }
    let identity = defs.len();
    let mut states = Vec::with_capacity(defs.len() + 1);
    for d in &defs {
        let perm = Permutation::from_cycles(k, &d.cycles)?;
        let next = d
            .sections
            .iter()
            .map(|s| {
                if s == "1" {
                    Ok(identity)
                } else {
                    index
                        .get(s)
                        .copied()
                        .ok_or_else(|| Error::Parse(format!("undefined section {s}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        states.push(State { perm, next });
    }
    states.push(State {
        perm: Permutation::identity(k),
        next: vec![identity; k],
    });
    index
        .into_iter()
        .map(|(name, i)| Ok((name, TreeAutomorphism::from_states(k, states.clone(), i)?)))
        .collect()
}

fn parse_definition(text: &str) -> Result<Definition> {
    let (name, rhs) = text
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("missing '=' in {text:?}")))?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(Error::Parse(format!("bad name {name:?}")));
    }
    let groups = paren_groups(rhs)?;
    let (sections, cycle_groups) = groups
        .split_last()
        .ok_or_else(|| Error::Parse(format!("no sections for {name}")))?;
    if !sections.contains(',') {
        return Err(Error::Parse(format!(
            "{name}: last group must list sections separated by commas"
        )));
    }
    let sections = sections
        .split(',')
        .map(|s| s.trim().to_string())
        .collect::<Vec<_>>();
    if sections.iter().any(String::is_empty) {
        return Err(Error::Parse(format!("{name}: empty section")));
    }
    let mut cycles = Vec::new();
    for g in cycle_groups {
        cycles.extend(parse_cycles(&format!("({g})"))?);
    }
    Ok(Definition {
        name: name.to_string(),
        cycles,
        sections,
    })
}

/// Contents of each top-level `( .. )` group, in order.
fn paren_groups(text: &str) -> Result<Vec<String>> {
    let mut groups = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' at {rest:?}")))?;
        let end = body
            .find(')')
            .ok_or_else(|| Error::Parse("unbalanced parenthesis".into()))?;
        groups.push(body[..end].to_string());
        rest = body[end + 1..].trim_start();
    }
    Ok(groups)
}
