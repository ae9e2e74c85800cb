//! Letters, alphabets and permutations of the peg alphabet `{0, .., k-1}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter of the alphabet (a peg).
pub type Letter = u8;

/// Largest supported alphabet.
pub const MAX_K: usize = 64;

/// The alphabet `X_k = {0, .., k-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Alphabet {
    k: usize,
}

impl Alphabet {
    pub fn new(k: usize) -> Result<Self> {
        if !(2..=MAX_K).contains(&k) {
            return Err(Error::InvalidAlphabet(k));
        }
        Ok(Alphabet { k })
    }

    pub fn size(self) -> usize {
        self.k
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (0..self.k).map(|x| x as Letter)
    }

    pub fn check(self, letter: usize) -> Result<Letter> {
        if letter < self.k {
            Ok(letter as Letter)
        } else {
            Err(Error::LetterOutOfRange { letter, k: self.k })
        }
    }
}

/// A bijection of `{0, .., k-1}` stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<Letter>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation {
            images: (0..k).map(|x| x as Letter).collect(),
        }
    }

    pub fn from_images(images: Vec<Letter>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &y in &images {
            let y = y as usize;
            if y >= k || seen[y] {
                return Err(Error::InvalidPermutation(format!(
                    "image table {images:?} is not a bijection"
                )));
            }
            seen[y] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles, e.g. `[[0, 1, 2]]` for `0 -> 1 -> 2 -> 0`.
    pub fn from_cycles<C: AsRef<[usize]>>(k: usize, cycles: &[C]) -> Result<Self> {
        let mut images: Vec<Letter> = (0..k).map(|x| x as Letter).collect();
        let mut used = vec![false; k];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for &x in cycle {
                if x >= k {
                    return Err(Error::LetterOutOfRange { letter: x, k });
                }
                if used[x] {
                    return Err(Error::InvalidPermutation(format!(
                        "letter {x} appears in more than one cycle position"
                    )));
                }
                used[x] = true;
            }
            for (pos, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(pos + 1) % cycle.len()] as Letter;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `(0 1 2)(3 4)` or `()`.
    pub fn parse(k: usize, text: &str) -> Result<Self> {
        let cycles = parse_cycles(text)?;
        Permutation::from_cycles(k, &cycles)
    }

    pub fn k(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Letter] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: Letter) -> Letter {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &y)| i == y as usize)
    }

    pub fn fixes(&self, x: Letter) -> bool {
        self.apply(x) == x
    }

    /// `self ∘ other`: apply `other` first.
    pub fn after(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.k(), other.k());
        Permutation {
            images: other.images.iter().map(|&x| self.apply(x)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.k()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as Letter;
        }
        Permutation { images }
    }

    /// `phi ∘ self ∘ phi^{-1}`.
    pub fn conjugate_by(&self, phi: &Permutation) -> Permutation {
        phi.after(self).after(&phi.inverse())
    }

    /// Disjoint cycles of length at least two, each starting at its smallest
    /// letter, ordered by that letter.
    pub fn cycles(&self) -> Vec<Vec<Letter>> {
        let k = self.k();
        let mut seen = vec![false; k];
        let mut out = Vec::new();
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as Letter];
            seen[start] = true;
            let mut x = self.images[start];
            while x as usize != start {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.images[x as usize];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle lengths including fixed points, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat_n(1, self.k() - moved));
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .map(|c| c.len() as u64)
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }

    pub fn support(&self) -> Vec<Letter> {
        (0..self.k() as Letter)
            .filter(|&x| !self.fixes(x))
            .collect()
    }

    /// All permutations of `{0, .., k-1}` in lexicographic order of image tables.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<Letter> = (0..k as Letter).collect();
        loop {
            out.push(Permutation {
                images: current.clone(),
            });
            if !next_permutation(&mut current) {
                break;
            }
        }
        out
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn next_permutation(v: &mut [Letter]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Parses `(a b c)(d e)` into a list of cycles. Whitespace or commas separate letters.
pub fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>> {
    let text = text.trim();
    let mut cycles = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' in cycle notation {text:?}")))?;
        let close = open
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
        let body = &open[..close];
        let cycle = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad letter {s:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = open[close + 1..].trim_start();
    }
    Ok(cycles)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

/// A word `x_n .. x_1`, stored leftmost letter first; the leftmost letter is read first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn check(&self, k: usize) -> Result<()> {
        match self.0.iter().find(|&&x| x as usize >= k) {
            Some(&x) => Err(Error::LetterOutOfRange {
                letter: x as usize,
                k,
            }),
            None => Ok(()),
        }
    }

    /// The `index`-th word of length `n` in lexicographic order.
    pub fn from_index(k: usize, n: usize, mut index: usize) -> Self {
        let mut letters = vec![0; n];
        for slot in letters.iter_mut().rev() {
            *slot = (index % k) as Letter;
            index /= k;
        }
        Word(letters)
    }

    pub fn index(&self, k: usize) -> usize {
        self.0.iter().fold(0, |acc, &x| acc * k + x as usize)
    }

    /// All `k^n` words of length `n` in lexicographic order.
    pub fn all(k: usize, n: usize) -> impl Iterator<Item = Word> {
        let total = k.pow(n as u32);
        (0..total).map(move |i| Word::from_index(k, n, i))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.0.iter().any(|&x| x >= 10) {
            " "
        } else {
            ""
        };
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `"220"` (single-digit letters) or `"2 2 10"` (space separated).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let letters: Result<Vec<Letter>> = if s.contains(char::is_whitespace) {
            s.split_whitespace()
                .map(|t| {
                    t.parse::<Letter>()
                        .map_err(|_| Error::Parse(format!("bad letter {t:?}")))
                })
                .collect()
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as Letter)
                        .ok_or_else(|| Error::Parse(format!("bad letter {c:?}")))
                })
                .collect()
        };
        letters.map(Word)
    }
}
