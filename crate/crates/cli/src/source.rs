//! Group sources, numeric ranges and output plumbing.

use std::fs;
use std::path::Path;

use hanoi_core::hanoi::family_by_name;
use hanoi_core::notation::parse_system;
use hanoi_core::{GeneratorSet, HanoiGenerator};

use crate::{Failure, Format, GroupSource, Output};

/// A loaded group with a display name.
pub struct LoadedGroup {
    pub name: String,
    pub set: GeneratorSet,
}

pub fn load_group(source: &GroupSource) -> Result<LoadedGroup, Failure> {
    match (&source.group, &source.file) {
        (Some(text), None) => {
            let set = if text.contains('=') {
                from_recursions(text)?
            } else {
                family_by_name(text).map_err(|e| Failure::Usage(e.to_string()))?
            };
            Ok(LoadedGroup {
                name: text.trim().to_string(),
                set,
            })
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            let set = if text.trim_start().starts_with('{') {
                GeneratorSet::from_json(&text).map_err(|e| Failure::Usage(e.to_string()))?
            } else {
                from_recursions(&text)?
            };
            Ok(LoadedGroup {
                name: path.display().to_string(),
                set,
            })
        }
        _ => Err(Failure::Usage(
            "give exactly one of --group and --file".into(),
        )),
    }
}

fn from_recursions(text: &str) -> Result<GeneratorSet, Failure> {
    let system = parse_system(text).map_err(|e| Failure::Usage(e.to_string()))?;
    let k = system.values().next().map(|g| g.k()).unwrap_or(0);
    let named = system
        .into_iter()
        .map(|(name, g)| {
            HanoiGenerator::from_automorphism(&g)
                .map(|h| (name.clone(), h))
                .ok_or_else(|| Failure::Usage(format!("{name} is not a Hanoi automorphism")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    GeneratorSet::new(k, named).map_err(|e| Failure::Usage(e.to_string()))
}

/// Parses `4` or `3..6` (inclusive).
pub fn parse_k_range(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Usage(format!("bad range {text:?}; use K or A..B"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let k = num(text)?;
            (k, k)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

pub fn format_or(output: &Output, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let format = output.format.unwrap_or(default);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        let names: Vec<String> = allowed
            .iter()
            .map(|f| format!("{f:?}").to_lowercase())
            .collect();
        Err(Failure::Usage(format!(
            "format {} not available here; use {}",
            format!("{format:?}").to_lowercase(),
            names.join(", ")
        )))
    }
}

pub fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::Computation(format!("cannot write {}: {e}", path.display())))
}
