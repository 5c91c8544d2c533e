use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::cyclic::CyclicWord;
use super::word::{check_rank, ensure_same_rank, push_reduced, Letter, Word};

/// An automorphism of the free group given by generator images together with
/// a declared inverse. Construction verifies that the two maps really are
/// mutually inverse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    rank: usize,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

/// JSON form: `{"rank": 2, "images": ["ab", "a"], "inverse_images": ["b", "B a"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub images: Vec<String>,
    pub inverse_images: Vec<String>,
}

fn substitute(images: &[Word], letters: &[Letter], out: &mut Vec<Letter>) {
    for &l in letters {
        let image = images[l.unsigned_abs() as usize - 1].letters();
        if l > 0 {
            for &x in image {
                push_reduced(out, x);
            }
        } else {
            for &x in image.iter().rev() {
                push_reduced(out, -x);
            }
        }
    }
}

fn fixes_generators(outer: &[Word], inner: &[Word]) -> bool {
    inner.iter().enumerate().all(|(i, w)| {
        let mut out = Vec::new();
        substitute(outer, w.letters(), &mut out);
        out == [(i + 1) as Letter]
    })
}

/// True iff both compositions of the two generator maps fix every generator.
pub fn verify_inverse(images: &[Word], inverse_images: &[Word]) -> bool {
    let rank = images.len();
    if rank == 0 || inverse_images.len() != rank {
        return false;
    }
    if images.iter().chain(inverse_images).any(|w| w.rank() != rank) {
        return false;
    }
    fixes_generators(images, inverse_images) && fixes_generators(inverse_images, images)
}

impl Automorphism {
    pub fn new(images: Vec<Word>, inverse_images: Vec<Word>) -> Result<Automorphism> {
        let rank = images.len();
        check_rank(rank)?;
        for w in images.iter().chain(&inverse_images) {
            ensure_same_rank(rank, w.rank())?;
        }
        if !verify_inverse(&images, &inverse_images) {
            return Err(Error::NotInverse);
        }
        Ok(Automorphism { rank, images, inverse_images })
    }

    /// Builds from spelled images, e.g. `from_strs(2, &["ab", "a"], &["b", "Ba"])`.
    pub fn from_strs(rank: usize, images: &[&str], inverse_images: &[&str]) -> Result<Automorphism> {
        let parse = |v: &[&str]| -> Result<Vec<Word>> {
            if v.len() != rank {
                return Err(Error::Malformed(format!("expected {rank} images, got {}", v.len())));
            }
            v.iter().map(|s| Word::parse(s, rank)).collect()
        };
        Automorphism::new(parse(images)?, parse(inverse_images)?)
    }

    pub fn from_doc(doc: &AutomorphismDoc, default_rank: Option<usize>) -> Result<Automorphism> {
        let rank = doc.rank.or(default_rank).unwrap_or(doc.images.len());
        if let (Some(r), Some(d)) = (doc.rank, default_rank) {
            ensure_same_rank(d, r)?;
        }
        let images: Vec<&str> = doc.images.iter().map(String::as_str).collect();
        let inverse: Vec<&str> = doc.inverse_images.iter().map(String::as_str).collect();
        Automorphism::from_strs(rank, &images, &inverse)
    }

    pub fn from_json(s: &str) -> Result<Automorphism> {
        let doc: AutomorphismDoc = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        Automorphism::from_doc(&doc, None)
    }

    pub fn to_doc(&self) -> AutomorphismDoc {
        AutomorphismDoc {
            rank: Some(self.rank),
            images: self.images.iter().map(Word::to_string).collect(),
            inverse_images: self.inverse_images.iter().map(Word::to_string).collect(),
        }
    }

    pub fn identity(rank: usize) -> Automorphism {
        let gens: Vec<Word> = (1..=rank).map(|i| Word::generator(i, rank)).collect();
        Automorphism { rank, images: gens.clone(), inverse_images: gens }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    /// Image of generator `a_i` (1-based).
    pub fn image(&self, i: usize) -> &Word {
        &self.images[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| w.letters() == [(i + 1) as Letter])
    }

    /// Substitutes each letter by its image and freely reduces.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        ensure_same_rank(self.rank, w.rank())?;
        Ok(Word::from_reduced(self.rank, self.apply_letters(w.letters())))
    }

    pub(crate) fn apply_letters(&self, letters: &[Letter]) -> Vec<Letter> {
        let mut out = Vec::with_capacity(letters.len() * 2);
        substitute(&self.images, letters, &mut out);
        out
    }

    /// Image of a conjugacy class.
    pub fn apply_class(&self, c: &CyclicWord) -> Result<CyclicWord> {
        ensure_same_rank(self.rank, c.rank())?;
        let image = Word::from_reduced(self.rank, self.apply_letters(c.letters()));
        Ok(CyclicWord::of(&image))
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism { rank: self.rank, images: self.inverse_images.clone(), inverse_images: self.images.clone() }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        ensure_same_rank(self.rank, other.rank)?;
        let images =
            other.images.iter().map(|w| Word::from_reduced(self.rank, self.apply_letters(w.letters()))).collect();
        let inverse_images = self
            .inverse_images
            .iter()
            .map(|w| {
                let mut out = Vec::new();
                substitute(&other.inverse_images, w.letters(), &mut out);
                Word::from_reduced(self.rank, out)
            })
            .collect();
        Ok(Automorphism { rank: self.rank, images, inverse_images })
    }

    /// `self^k` by repeated composition; negative `k` uses the declared inverse.
    pub fn power(&self, k: i64) -> Automorphism {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Automorphism::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            acc = base.compose(&acc).expect("same rank");
        }
        acc
    }

    /// Largest image length, used to bound blow-up of composites.
    pub fn max_image_len(&self) -> usize {
        self.images.iter().chain(&self.inverse_images).map(Word::len).max().unwrap_or(0)
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{}->{}", super::word::letter_char((i + 1) as Letter), w))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Automorphism{self}")
    }
}
