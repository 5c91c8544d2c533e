use std::fmt;

use crate::error::{Error, Result};

use super::word::{cyclic_core, ensure_same_rank, invert_letters, spell, Letter, Word};

/// Start index of the lexicographically least rotation (letters ordered as
/// integers, so `-N < .. < -1 < 1 < .. < N`). Linear time.
pub(crate) fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

pub(crate) fn canonical_rotation(s: &[Letter]) -> Vec<Letter> {
    if s.is_empty() {
        return Vec::new();
    }
    let start = least_rotation(s);
    s[start..].iter().chain(&s[..start]).copied().collect()
}

/// Smallest period `p` of `s` such that `s` is a power of its length-`p` prefix.
pub(crate) fn primitive_period(s: &[Letter]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    // KMP failure function
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = n - fail[n - 1];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}

/// A conjugacy class representative: cyclically reduced and stored as its least
/// rotation, so equal classes compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl CyclicWord {
    /// Caller guarantees the letters are cyclically reduced.
    pub(crate) fn from_cyclically_reduced(rank: usize, letters: &[Letter]) -> CyclicWord {
        CyclicWord { rank, letters: canonical_rotation(letters) }
    }

    /// Caller guarantees the letters are cyclically reduced and already in least rotation.
    pub(crate) fn from_canonical(rank: usize, letters: Vec<Letter>) -> CyclicWord {
        debug_assert_eq!(canonical_rotation(&letters), letters);
        CyclicWord { rank, letters }
    }

    /// The conjugacy class of `w`.
    pub fn of(w: &Word) -> CyclicWord {
        let peel = cyclic_core(w.letters());
        let core = &w.letters()[peel..w.len() - peel];
        CyclicWord::from_cyclically_reduced(w.rank(), core)
    }

    pub fn parse(s: &str, rank: usize) -> Result<CyclicWord> {
        Ok(CyclicWord::of(&Word::parse(s, rank)?))
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

    /// The class of the inverse element.
    pub fn inverse(&self) -> CyclicWord {
        CyclicWord::from_cyclically_reduced(self.rank, &invert_letters(&self.letters))
    }

    /// The canonical representative as a word.
    pub fn to_word(&self) -> Word {
        Word::from_reduced(self.rank, self.letters.clone())
    }

    /// Decomposes the class as `root^k` with `k` maximal.
    pub fn proper_power(&self) -> Result<(CyclicWord, usize)> {
        if self.is_empty() {
            return Err(Error::TrivialWord);
        }
        let p = primitive_period(&self.letters);
        let root = CyclicWord::from_canonical(self.rank, self.letters[..p].to_vec());
        Ok((root, self.len() / p))
    }

    /// The class of `self^k`.
    pub fn pow(&self, k: usize) -> CyclicWord {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        CyclicWord { rank: self.rank, letters }
    }

    /// Iterator over all rotations of the stored letter sequence.
    pub fn rotations(&self) -> impl Iterator<Item = Vec<Letter>> + '_ {
        let n = self.letters.len();
        (0..n.max(1)).map(move |i| {
            if n == 0 {
                Vec::new()
            } else {
                self.letters[i..].iter().chain(&self.letters[..i]).copied().collect()
            }
        })
    }
}

/// Cyclically reduces `w`, returning the class and a conjugator `u` with
/// `w = u·c·u⁻¹` where `c` is the returned representative.
pub fn cyclic_reduce(w: &Word) -> (CyclicWord, Word) {
    let letters = w.letters();
    let peel = cyclic_core(letters);
    let core = &letters[peel..letters.len() - peel];
    if core.is_empty() {
        return (CyclicWord { rank: w.rank(), letters: Vec::new() }, Word::identity(w.rank()));
    }
    let start = least_rotation(core);
    let canonical: Vec<Letter> = core[start..].iter().chain(&core[..start]).copied().collect();
    // core = x·y with y = core[start..]; then core = x · (y·x) · x⁻¹
    let mut conj = letters[..peel].to_vec();
    conj.extend_from_slice(&core[..start]);
    (CyclicWord { rank: w.rank(), letters: canonical }, Word::from_reduced(w.rank(), conj))
}

/// Whether two classes coincide, optionally also accepting `c1 = c2⁻¹`.
pub fn conjugate_equal(c1: &CyclicWord, c2: &CyclicWord, allow_inversion: bool) -> Result<bool> {
    ensure_same_rank(c1.rank, c2.rank)?;
    if c1 == c2 {
        return Ok(true);
    }
    Ok(allow_inversion && c1.len() == c2.len() && *c1 == c2.inverse())
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&spell(&self.letters))
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicWord({})", spell(&self.letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn c(s: &str) -> CyclicWord {
        CyclicWord::parse(s, 2).unwrap()
    }

    fn brute_least_rotation(s: &[Letter]) -> Vec<Letter> {
        (0..s.len()).map(|i| s[i..].iter().chain(&s[..i]).copied().collect::<Vec<_>>()).min().unwrap_or_default()
    }

    // Scans every rotation of both words (and of the inverse when allowed).
    fn brute_conjugate(a: &CyclicWord, b: &CyclicWord, inv: bool) -> bool {
        let rots: Vec<_> = a.rotations().collect();
        let target = b.letters().to_vec();
        if rots.contains(&target) {
            return true;
        }
        if inv {
            let binv = invert_letters(b.letters());
            return rots.contains(&binv) || (binv.is_empty() && a.is_empty());
        }
        false
    }

    #[test]
    fn least_rotation_matches_brute_force() {
        let samples: &[&[Letter]] =
            &[&[1, 2, 1, 2], &[2, 1, 1, 2, 1], &[-1, 2, -1, 2, -1], &[3, 3, 3], &[1], &[2, -1, -2, 1, 2, -1]];
        for s in samples {
            assert_eq!(canonical_rotation(s), brute_least_rotation(s));
        }
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (cw, u) = cyclic_reduce(&w("abA"));
        assert_eq!(cw, c("b"));
        assert_eq!(u, w("a"));

        let word = w("abaBAA");
        let (cw, u) = cyclic_reduce(&word);
        assert_eq!(cw, c("baBA"));
        assert_eq!(cw.len(), 4);
        assert_eq!(cw.to_word().conjugate_by(&u).unwrap(), word);

        let (cw, u) = cyclic_reduce(&w("ab"));
        assert_eq!(cw.letters(), &[1, 2]);
        assert!(u.is_empty());
    }

    #[test]
    fn cyclic_reduce_of_identity() {
        let (cw, u) = cyclic_reduce(&Word::identity(2));
        assert!(cw.is_empty());
        assert!(u.is_empty());
    }

    #[test]
    fn conjugacy_examples() {
        assert!(conjugate_equal(&c("ab"), &c("ba"), false).unwrap());
        let lhs = CyclicWord::of(&w("abaBAA"));
        assert!(conjugate_equal(&lhs, &c("abAB"), true).unwrap());
        assert!(brute_conjugate(&lhs, &c("abAB"), true));
        assert!(!conjugate_equal(&lhs, &c("abAB"), false).unwrap());
        assert!(!conjugate_equal(&c("ab"), &c("aB"), true).unwrap());
        assert!(!brute_conjugate(&c("ab"), &c("aB"), true));
        let other = CyclicWord::parse("ab", 3).unwrap();
        assert!(matches!(conjugate_equal(&c("ab"), &other, false), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn proper_power_examples() {
        assert_eq!(c("abab").proper_power().unwrap(), (c("ab"), 2));
        assert_eq!(c("ab").proper_power().unwrap(), (c("ab"), 1));
        assert_eq!(c("aaaaaa").proper_power().unwrap(), (c("a"), 6));
        assert_eq!(c("").proper_power(), Err(Error::TrivialWord));
        assert_eq!(c("abaabaaba").proper_power().unwrap(), (c("aab"), 3));
    }

    #[test]
    fn primitive_period_on_non_powers() {
        assert_eq!(primitive_period(&[1, 2, 1]), 3);
        assert_eq!(primitive_period(&[1, 1, 2, 1, 1, 2]), 3);
    }
}
