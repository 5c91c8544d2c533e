//! Rational geodesic currents: finite nonnegative combinations of counting
//! currents `η_g`, with occurrence counts, weights, the automorphism action and
//! normalized frequency profiles.
//!
//! All counts are taken with respect to the rose with the standard basis. The
//! number of occurrences of `v` in a cyclic word `c` is the number of positions
//! of `c` from which `v` or `v⁻¹` can be read going around the cycle, wrapping
//! as many times as needed; `⟨aa, η_a⟩ = 1`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_group::{ensure_same_rank, invert_letters, Automorphism, CyclicWord, Letter, Word};
use crate::Rational;

/// `Σ cᵢ·η_{hᵢ}` with every `hᵢ` a canonical, non-proper-power class. A class
/// and its inverse share one key (`η_g = η_{g⁻¹}`): whichever canonical form
/// comes first with generators ordered before inverses.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalCurrent {
    rank: usize,
    terms: BTreeMap<CyclicWord, Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub word: String,
    pub coeff: String,
}

/// JSON form: `{"rank": 2, "terms": [{"word": "ab", "coeff": "3/2"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurrentDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub terms: Vec<TermDoc>,
}

fn key_of(root: CyclicWord) -> CyclicWord {
    let inv = root.inverse();
    if display_cmp(inv.letters(), root.letters()) == Ordering::Less {
        inv
    } else {
        root
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::Malformed(format!("bad rational {s:?}")))
}

/// Number of positions of the cycle `c` from which `v` can be read.
pub(crate) fn cyclic_count(c: &[Letter], v: &[Letter]) -> u64 {
    let n = c.len();
    if n == 0 || v.is_empty() {
        return 0;
    }
    (0..n).filter(|&i| v.iter().enumerate().all(|(j, &x)| c[(i + j) % n] == x)).count() as u64
}

impl RationalCurrent {
    pub fn zero(rank: usize) -> RationalCurrent {
        RationalCurrent { rank, terms: BTreeMap::new() }
    }

    /// `η_g`: depends only on the conjugacy class of `g`, and equals `k·η_h`
    /// when `g` is conjugate to `h^k` with `h` not a proper power.
    pub fn counting(g: &Word) -> Result<RationalCurrent> {
        let mut out = RationalCurrent::zero(g.rank());
        out.add_class(&CyclicWord::of(g), Rational::one())?;
        Ok(out)
    }

    pub fn counting_class(c: &CyclicWord) -> Result<RationalCurrent> {
        let mut out = RationalCurrent::zero(c.rank());
        out.add_class(c, Rational::one())?;
        Ok(out)
    }

    /// Builds `Σ cᵢ·η_{gᵢ}`; coefficients must be nonnegative.
    pub fn from_terms<'a, I>(rank: usize, terms: I) -> Result<RationalCurrent>
    where
        I: IntoIterator<Item = (&'a Word, Rational)>,
    {
        let mut out = RationalCurrent::zero(rank);
        for (w, c) in terms {
            ensure_same_rank(rank, w.rank())?;
            out.add_class(&CyclicWord::of(w), c)?;
        }
        Ok(out)
    }

    fn add_class(&mut self, class: &CyclicWord, coeff: Rational) -> Result<()> {
        if coeff.is_negative() {
            return Err(Error::NegativeScalar);
        }
        let (root, k) = class.proper_power()?;
        if coeff.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(key_of(root)).or_insert_with(Rational::zero);
        *slot += coeff * Rational::from_integer(k.into());
        Ok(())
    }

    pub fn from_doc(doc: &CurrentDoc, default_rank: Option<usize>) -> Result<RationalCurrent> {
        let rank = match (doc.rank, default_rank) {
            (Some(r), Some(d)) => {
                ensure_same_rank(d, r)?;
                r
            }
            (Some(r), None) | (None, Some(r)) => r,
            (None, None) => return Err(Error::Malformed("current without rank".into())),
        };
        let mut out = RationalCurrent::zero(rank);
        for t in &doc.terms {
            let w = Word::parse(&t.word, rank)?;
            if w.is_empty() {
                return Err(Error::TrivialWord);
            }
            out.add_class(&CyclicWord::of(&w), parse_rational(&t.coeff)?)?;
        }
        Ok(out)
    }

    pub fn from_json(s: &str) -> Result<RationalCurrent> {
        let doc: CurrentDoc = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        RationalCurrent::from_doc(&doc, None)
    }

    pub fn to_doc(&self) -> CurrentDoc {
        CurrentDoc {
            rank: Some(self.rank),
            terms: self.terms.iter().map(|(k, c)| TermDoc { word: k.to_string(), coeff: c.to_string() }).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CyclicWord, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest cyclic length of a stored root.
    pub fn max_root_len(&self) -> usize {
        self.terms.keys().map(CyclicWord::len).max().unwrap_or(0)
    }

    /// `⟨v, ν⟩`.
    pub fn occurrences(&self, v: &Word) -> Result<Rational> {
        ensure_same_rank(self.rank, v.rank())?;
        if v.is_empty() {
            return Err(Error::TrivialWord);
        }
        let inv = invert_letters(v.letters());
        let mut total = Rational::zero();
        for (c, coeff) in &self.terms {
            let n = cyclic_count(c.letters(), v.letters()) + cyclic_count(c.letters(), &inv);
            if n > 0 {
                total += coeff * Rational::from_integer(n.into());
            }
        }
        Ok(total)
    }

    /// `w(ν) = Σ_e ⟨e, ν⟩` over the 2N oriented edges of the rose.
    pub fn weight(&self) -> Rational {
        self.terms
            .iter()
            .map(|(c, coeff)| coeff * Rational::from_integer((2 * c.len()).into()))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// `φ·ν`; on counting currents `η_g ↦ η_{φ(g)}`.
    pub fn act(&self, phi: &Automorphism) -> Result<RationalCurrent> {
        ensure_same_rank(self.rank, phi.rank())?;
        let mut out = RationalCurrent::zero(self.rank);
        for (c, coeff) in &self.terms {
            out.add_class(&phi.apply_class(c)?, coeff.clone())?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &RationalCurrent) -> Result<RationalCurrent> {
        ensure_same_rank(self.rank, other.rank)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            *out.terms.entry(k.clone()).or_insert_with(Rational::zero) += c;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Result<RationalCurrent> {
        if c.is_negative() {
            return Err(Error::NegativeScalar);
        }
        if c.is_zero() {
            return Ok(RationalCurrent::zero(self.rank));
        }
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        Ok(RationalCurrent { rank: self.rank, terms })
    }

    /// Whether `self = t·other` for some `t > 0`.
    pub fn is_proportional_to(&self, other: &RationalCurrent) -> bool {
        if self.rank != other.rank || self.terms.len() != other.terms.len() {
            return false;
        }
        let mut ratio: Option<Rational> = None;
        for ((k1, c1), (k2, c2)) in self.terms.iter().zip(&other.terms) {
            if k1 != k2 {
                return false;
            }
            let r = c1 / c2;
            match &ratio {
                None => ratio = Some(r),
                Some(prev) if *prev != r => return false,
                _ => {}
            }
        }
        true
    }

    /// Whether every stored class is conjugate, up to inversion, to a power of
    /// one of `classes`.
    pub fn supported_on(&self, classes: &[CyclicWord]) -> bool {
        let roots: Vec<CyclicWord> =
            classes.iter().filter_map(|c| c.proper_power().ok()).map(|(r, _)| key_of(r)).collect();
        self.terms.keys().all(|k| roots.contains(k))
    }

    /// The normalized occurrence vector `⟨v,ν⟩/w(ν)` for all `|v| ≤ level`.
    pub fn frequency_profile(&self, level: usize) -> Result<FrequencyProfile> {
        if self.is_zero() {
            return Err(Error::ZeroCurrent);
        }
        let codec = WindowCodec::new(self.rank, level)?;
        let reps = FrequencyProfile::representatives(self.rank, level);
        let mut totals = vec![Rational::zero(); reps.len()];
        for (c, coeff) in &self.terms {
            let counts = codec.window_counts(c.letters());
            for (slot, v) in totals.iter_mut().zip(&reps) {
                let inv = invert_letters(v.letters());
                let n = counts.get(&codec.encode(v.letters())).copied().unwrap_or(0)
                    + counts.get(&codec.encode(&inv)).copied().unwrap_or(0);
                if n > 0 {
                    *slot += coeff * Rational::from_integer(n.into());
                }
            }
        }
        let w = self.weight();
        let values = totals.into_iter().map(|t| ratio_to_f64(&(t / &w))).collect();
        Ok(FrequencyProfile { rank: self.rank, level, words: reps, values })
    }
}

pub(crate) fn ratio_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Packs words of length ≤ level into `u128` keys, digit `d+1` per letter.
struct WindowCodec {
    rank: usize,
    level: usize,
    base: u128,
}

impl WindowCodec {
    fn new(rank: usize, level: usize) -> Result<WindowCodec> {
        if level == 0 {
            return Err(Error::Malformed("profile level must be at least 1".into()));
        }
        let base = 2 * rank as u128 + 1;
        let fits = (0..level).try_fold(1u128, |acc, _| acc.checked_mul(base)).is_some();
        if !fits {
            return Err(Error::Malformed(format!("profile level {level} too deep for rank {rank}")));
        }
        Ok(WindowCodec { rank, level, base })
    }

    fn digit(&self, l: Letter) -> u128 {
        if l > 0 {
            l as u128
        } else {
            self.rank as u128 + l.unsigned_abs() as u128
        }
    }

    fn encode(&self, v: &[Letter]) -> u128 {
        v.iter().fold(0, |acc, &l| acc * self.base + self.digit(l))
    }

    fn window_counts(&self, c: &[Letter]) -> HashMap<u128, u64> {
        let n = c.len();
        let mut counts = HashMap::new();
        for i in 0..n {
            let mut code = 0u128;
            for j in 0..self.level {
                code = code * self.base + self.digit(c[(i + j) % n]);
                *counts.entry(code).or_insert(0) += 1;
            }
        }
        counts
    }
}

/// Ordering used to choose one representative of `{v, v⁻¹}`: shorter first,
/// then letterwise with generators before inverses (`a < b < .. < A < B`).
pub(crate) fn display_cmp(x: &[Letter], y: &[Letter]) -> Ordering {
    let key = |l: &Letter| (*l < 0, l.unsigned_abs());
    x.len().cmp(&y.len()).then_with(|| x.iter().map(key).cmp(y.iter().map(key)))
}

/// Normalized occurrence values `⟨v,ν⟩/w(ν)` for one representative `v` of
/// each pair `{v, v⁻¹}` with `|v| ≤ level`.
#[derive(Clone, PartialEq)]
pub struct FrequencyProfile {
    rank: usize,
    level: usize,
    words: Vec<Word>,
    values: Vec<f64>,
}

impl FrequencyProfile {
    /// Representatives in profile order.
    pub fn representatives(rank: usize, level: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
        for _ in 0..level {
            let mut next = Vec::new();
            for prefix in &frontier {
                for l in (1..=rank as Letter).chain((1..=rank as Letter).map(|x| -x)) {
                    if prefix.last() == Some(&-l) {
                        continue;
                    }
                    let mut v = prefix.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            for v in &next {
                if display_cmp(v, &invert_letters(v)) == Ordering::Less {
                    out.push(Word::from_reduced(rank, v.clone()));
                }
            }
            frontier = next;
        }
        out.sort_by(|a, b| display_cmp(a.letters(), b.letters()));
        out
    }

    /// Wraps raw values given in representative order.
    pub fn from_values(rank: usize, level: usize, values: Vec<f64>) -> Result<FrequencyProfile> {
        let words = FrequencyProfile::representatives(rank, level);
        if words.len() != values.len() {
            return Err(Error::Malformed(format!("expected {} profile values, got {}", words.len(), values.len())));
        }
        Ok(FrequencyProfile { rank, level, words, values })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, f64)> {
        self.words.iter().zip(self.values.iter().copied())
    }

    /// Value for `v` or its inverse.
    pub fn get(&self, v: &Word) -> Option<f64> {
        let inv = v.inverse();
        let rep = if display_cmp(inv.letters(), v.letters()) == Ordering::Less { &inv } else { v };
        self.words.binary_search_by(|w| display_cmp(w.letters(), rep.letters())).ok().map(|i| self.values[i])
    }
}

impl fmt::Debug for FrequencyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (w, v) in self.entries() {
            m.entry(&w.to_string(), &v);
        }
        m.finish()
    }
}

/// `Σ_v 2^{-|v|}·|p(v) − q(v)|` over the shared representatives.
pub fn projective_distance(p: &FrequencyProfile, q: &FrequencyProfile) -> Result<f64> {
    ensure_same_rank(p.rank, q.rank)?;
    if p.level != q.level {
        return Err(Error::LevelMismatch(p.level, q.level));
    }
    Ok(p.entries().zip(q.values.iter()).map(|((w, a), b)| (a - b).abs() * 0.5f64.powi(w.len() as i32)).sum())
}

impl fmt::Display for RationalCurrent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| if c.is_one() { format!("η[{k}]") } else { format!("{c}·η[{k}]") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for RationalCurrent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalCurrent({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_group::catalog::fibonacci;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn eta(s: &str) -> RationalCurrent {
        RationalCurrent::counting(&w(s)).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn single(c: &RationalCurrent) -> (String, Rational) {
        let (k, v) = c.terms().next().unwrap();
        (k.to_string(), v.clone())
    }

    // Reads the length-|v| word from every start position of every rotation.
    fn scan_rotations(c: &str, v: &str) -> u64 {
        let c = w(c);
        let n = c.len();
        let v = w(v);
        let inv = v.inverse();
        let mut total = 0;
        for start in 0..n {
            let read: Vec<Letter> = (0..v.len()).map(|j| c.letters()[(start + j) % n]).collect();
            if read == v.letters() || read == inv.letters() {
                total += 1;
            }
        }
        total
    }

    #[test]
    fn counting_current_examples() {
        assert_eq!(single(&eta("a")), ("a".into(), q(1, 1)));
        assert_eq!(single(&eta("abab")), ("ab".into(), q(2, 1)));
        assert_eq!(eta("baB"), eta("a"));
        assert!(RationalCurrent::counting(&Word::identity(2)).is_err());
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(eta("a").occurrences(&w("a")).unwrap(), q(1, 1));
        assert_eq!(scan_rotations("ab", "ab"), 1);
        assert_eq!(eta("abab").occurrences(&w("ab")).unwrap(), q(2, 1));
        assert_eq!(eta("a").occurrences(&w("aa")).unwrap(), q(1, 1));
        assert!(eta("a").occurrences(&Word::identity(2)).is_err());
    }

    #[test]
    fn weight_examples() {
        let by_definition = |nu: &RationalCurrent| -> Rational {
            ["a", "A", "b", "B"].iter().map(|e| nu.occurrences(&w(e)).unwrap()).sum()
        };
        assert_eq!(eta("ab").weight(), q(4, 1));
        assert_eq!(by_definition(&eta("ab")), q(4, 1));
        assert_eq!(eta("a").weight(), q(2, 1));
        assert_eq!(by_definition(&eta("a")), q(2, 1));
        assert_eq!(RationalCurrent::zero(2).weight(), q(0, 1));
    }

    #[test]
    fn action_examples() {
        let id = Automorphism::identity(2);
        let nu = eta("abAB").add(&eta("aab")).unwrap();
        assert_eq!(nu.act(&id).unwrap(), nu);
        assert_eq!(eta("a").act(&fibonacci()).unwrap(), eta("ab"));
        let image = eta("abAB").act(&fibonacci()).unwrap();
        assert_eq!(image, eta("baBA"));
        // the inverse class has the same counting current
        assert_eq!(image, eta("abAB"));
    }

    #[test]
    fn cone_operations() {
        assert_eq!(eta("a").add(&eta("a")).unwrap(), eta("a").scale(&q(2, 1)).unwrap());
        assert_eq!(eta("ab").add(&eta("ba")).unwrap(), eta("ab").scale(&q(2, 1)).unwrap());
        let flipped = eta("ab").add(&eta("BA")).unwrap();
        assert_eq!(flipped, eta("ab").scale(&q(2, 1)).unwrap());
        for v in FrequencyProfile::representatives(2, 3) {
            assert_eq!(flipped.occurrences(&v).unwrap(), q(2, 1) * eta("ab").occurrences(&v).unwrap());
        }
        assert!(eta("a").scale(&q(0, 1)).unwrap().is_zero());
        assert_eq!(eta("a").scale(&q(-1, 2)), Err(Error::NegativeScalar));
    }

    #[test]
    fn profile_examples() {
        let p = eta("a").frequency_profile(1).unwrap();
        assert_eq!(p.get(&w("a")), Some(0.5));
        assert_eq!(p.get(&w("b")), Some(0.0));
        assert_eq!(p.get(&w("A")), Some(0.5));
        let p = eta("ab").frequency_profile(1).unwrap();
        assert_eq!(p.values(), &[0.25, 0.25]);
        let nu = eta("aab").add(&eta("abAB")).unwrap();
        let scaled = nu.scale(&q(7, 3)).unwrap();
        assert_eq!(nu.frequency_profile(3).unwrap(), scaled.frequency_profile(3).unwrap());
        assert_eq!(RationalCurrent::zero(2).frequency_profile(2), Err(Error::ZeroCurrent));
    }

    #[test]
    fn representatives_cover_each_pair_once() {
        let reps = FrequencyProfile::representatives(2, 3);
        // 4 + 12 + 36 reduced words, halved
        assert_eq!(reps.len(), 26);
        assert_eq!(reps[0], w("a"));
        assert_eq!(reps[1], w("b"));
        for r in &reps {
            assert!(!reps.contains(&r.inverse()));
        }
    }

    #[test]
    fn distance_examples() {
        let pa = eta("a").frequency_profile(1).unwrap();
        let pb = eta("b").frequency_profile(1).unwrap();
        assert_eq!(projective_distance(&pa, &pa).unwrap(), 0.0);
        assert_eq!(projective_distance(&pa, &pb).unwrap(), 0.5);
        let p2 = eta("a").frequency_profile(2).unwrap();
        assert_eq!(projective_distance(&pa, &p2), Err(Error::LevelMismatch(1, 2)));
    }

    #[test]
    fn json_form() {
        let nu = RationalCurrent::from_json(
            r#"{"rank": 2, "terms": [{"word": "ab", "coeff": "3/2"}, {"word": "BA", "coeff": "1/2"}]}"#,
        )
        .unwrap();
        assert_eq!(nu, eta("ab").scale(&q(2, 1)).unwrap());
        let doc = nu.to_doc();
        assert_eq!(doc.terms, vec![TermDoc { word: "ab".into(), coeff: "2".into() }]);
        assert_eq!(RationalCurrent::from_doc(&doc, Some(2)).unwrap(), nu);
        assert!(RationalCurrent::from_json(r#"{"rank": 2, "terms": [{"word": "a", "coeff": "-1"}]}"#).is_err());
        assert!(RationalCurrent::from_json(r#"{"rank": 2, "terms": [{"word": "", "coeff": "1"}]}"#).is_err());
    }

    #[test]
    fn proportionality() {
        let nu = eta("aab").add(&eta("abAB")).unwrap();
        assert!(nu.is_proportional_to(&nu.scale(&q(5, 2)).unwrap()));
        assert!(!nu.is_proportional_to(&nu.add(&eta("aab")).unwrap()));
        assert!(!nu.is_proportional_to(&eta("aab")));
    }
}
