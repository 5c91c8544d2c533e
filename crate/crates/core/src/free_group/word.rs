use std::fmt;

use crate::error::{Error, Result};

/// A signed generator index: `i` is `a_i`, `-i` is its inverse.
pub type Letter = i32;

/// Generators are spelled `a..z`, so ranks above 26 cannot be written down.
pub const MAX_RANK: usize = 26;

pub(crate) fn check_rank(rank: usize) -> Result<()> {
    if (2..=MAX_RANK).contains(&rank) {
        Ok(())
    } else {
        Err(Error::Malformed(format!("rank {rank} outside 2..={MAX_RANK}")))
    }
}

pub(crate) fn ensure_same_rank(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::RankMismatch { expected, found })
    }
}

/// Appends `letter` to an already reduced stack, cancelling against the top.
#[inline]
pub(crate) fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    if stack.last() == Some(&-letter) {
        stack.pop();
    } else {
        stack.push(letter);
    }
}

/// Free reduction of an arbitrary signed sequence. Also used for edge paths,
/// where the sign is the orientation of an edge.
pub(crate) fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Vec<Letter> {
    let mut out = Vec::new();
    for l in raw {
        push_reduced(&mut out, l);
    }
    out
}

/// Strips matching first/last letters of a freely reduced sequence. Returns the
/// number of letters peeled from each side.
pub(crate) fn cyclic_core(letters: &[Letter]) -> usize {
    let n = letters.len();
    let mut peel = 0;
    while 2 * peel + 1 < n && letters[peel] == -letters[n - 1 - peel] {
        peel += 1;
    }
    peel
}

pub(crate) fn invert_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| -l).collect()
}

pub fn letter_char(l: Letter) -> char {
    let idx = l.unsigned_abs() as u8 - 1;
    if l > 0 {
        (b'a' + idx) as char
    } else {
        (b'A' + idx) as char
    }
}

pub(crate) fn spell(letters: &[Letter]) -> String {
    letters.iter().map(|&l| letter_char(l)).collect()
}

/// Parses `a..z` / `A..Z` letters; whitespace between letters is ignored, so
/// `"ab"` and `"a b"` are the same word. `"1"` is accepted for the identity.
pub(crate) fn parse_letters(s: &str, rank: usize) -> Result<Vec<Letter>> {
    let trimmed = s.trim();
    if trimmed == "1" {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(trimmed.len());
    for ch in trimmed.chars() {
        if ch.is_whitespace() {
            continue;
        }
        let l = match ch {
            'a'..='z' => (ch as u8 - b'a' + 1) as Letter,
            'A'..='Z' => -((ch as u8 - b'A' + 1) as Letter),
            _ => return Err(Error::Malformed(format!("unexpected character {ch:?} in word {s:?}"))),
        };
        if l.unsigned_abs() as usize > rank {
            return Err(Error::Malformed(format!("letter {ch:?} in word {s:?} exceeds rank {rank}")));
        }
        out.push(l);
    }
    Ok(out)
}

/// A freely reduced word in the free group of rank `rank`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    /// Freely reduces `raw`. Fails if any index is zero or exceeds the rank.
    pub fn reduce(raw: &[Letter], rank: usize) -> Result<Word> {
        check_rank(rank)?;
        if let Some(bad) = raw.iter().find(|l| **l == 0 || l.unsigned_abs() as usize > rank) {
            return Err(Error::Malformed(format!("letter index {bad} invalid for rank {rank}")));
        }
        Ok(Word { rank, letters: free_reduce(raw.iter().copied()) })
    }

    pub fn parse(s: &str, rank: usize) -> Result<Word> {
        check_rank(rank)?;
        let raw = parse_letters(s, rank)?;
        Ok(Word { rank, letters: free_reduce(raw) })
    }

    pub fn identity(rank: usize) -> Word {
        Word { rank, letters: Vec::new() }
    }

    /// The generator `a_i` (1-based).
    pub fn generator(i: usize, rank: usize) -> Word {
        assert!(i >= 1 && i <= rank, "generator index out of range");
        Word { rank, letters: vec![i as Letter] }
    }

    /// Caller guarantees the letters are reduced and within range.
    pub(crate) fn from_reduced(rank: usize, letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|p| p[0] != -p[1]));
        Word { rank, letters }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { rank: self.rank, letters: invert_letters(&self.letters) }
    }

    /// Reduced product `self · other`.
    pub fn mul(&self, other: &Word) -> Result<Word> {
        ensure_same_rank(self.rank, other.rank)?;
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Ok(Word { rank: self.rank, letters: out })
    }

    pub fn pow(&self, k: u32) -> Word {
        let mut out = Vec::with_capacity(self.len() * k as usize);
        for _ in 0..k {
            for &l in &self.letters {
                push_reduced(&mut out, l);
            }
        }
        Word { rank: self.rank, letters: out }
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate_by(&self, conjugator: &Word) -> Result<Word> {
        conjugator.mul(self)?.mul(&conjugator.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(f), Some(l)) => self.letters.len() == 1 || *f != -*l,
            _ => true,
        }
    }

    /// Length of the cyclically reduced form.
    pub fn cyclic_len(&self) -> usize {
        self.len() - 2 * cyclic_core(&self.letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&spell(&self.letters))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "Word(1)")
        } else {
            write!(f, "Word({})", spell(&self.letters))
        }
    }
}
