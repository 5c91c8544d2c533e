//! Whitehead graphs of conjugacy classes, the cut-vertex obstruction for the
//! minimal set, and Whitehead's length-reduction algorithm for primitivity.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_group::{letter_char, Automorphism, CyclicWord, Letter, Word};

/// Letter-adjacency graph on the `2N` letters: each cyclically adjacent pair
/// `x·y` contributes the edge `{x⁻¹, y}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadGraph {
    rank: usize,
    edges: BTreeMap<(Letter, Letter), usize>,
}

fn all_letters(rank: usize) -> impl Iterator<Item = Letter> + Clone {
    let r = rank as Letter;
    (1..=r).chain((1..=r).map(|x| -x))
}

impl WhiteheadGraph {
    pub fn of(c: &CyclicWord) -> Result<WhiteheadGraph> {
        if c.is_empty() {
            return Err(Error::TrivialWord);
        }
        let s = c.letters();
        let n = s.len();
        let mut edges = BTreeMap::new();
        for i in 0..n {
            let (x, y) = (s[i], s[(i + 1) % n]);
            let pair = if -x < y { (-x, y) } else { (y, -x) };
            *edges.entry(pair).or_insert(0) += 1;
        }
        Ok(WhiteheadGraph { rank: c.rank(), edges })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Edges as unordered letter pairs with multiplicity.
    pub fn edges(&self) -> impl Iterator<Item = ((Letter, Letter), usize)> + '_ {
        self.edges.iter().map(|(k, v)| (*k, *v))
    }

    pub fn total_multiplicity(&self) -> usize {
        self.edges.values().sum()
    }

    pub fn degree(&self, x: Letter) -> usize {
        self.edges.iter().map(|(&(p, q), &m)| if p == x || q == x { m } else { 0 }).sum()
    }

    fn neighbours(&self, x: Letter) -> impl Iterator<Item = Letter> + '_ {
        self.edges.keys().filter_map(move |&(p, q)| {
            if p == x {
                Some(q)
            } else if q == x {
                Some(p)
            } else {
                None
            }
        })
    }

    /// Whether the vertices in `keep` induce a connected simple subgraph.
    fn connected_within(&self, keep: &[Letter]) -> bool {
        let Some(&start) = keep.first() else {
            return true;
        };
        let mut seen = vec![start];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for y in self.neighbours(x) {
                if keep.contains(&y) && !seen.contains(&y) {
                    seen.push(y);
                    stack.push(y);
                }
            }
        }
        seen.len() == keep.len()
    }

    /// Connected non-isolated part?
    pub fn is_connected(&self) -> bool {
        let present: Vec<Letter> = all_letters(self.rank).filter(|&x| self.degree(x) > 0).collect();
        present.len() == 2 * self.rank && self.connected_within(&present)
    }

    pub fn cut_vertices(&self) -> Vec<Letter> {
        let present: Vec<Letter> = all_letters(self.rank).filter(|&x| self.degree(x) > 0).collect();
        present
            .iter()
            .copied()
            .filter(|&v| {
                let rest: Vec<Letter> = present.iter().copied().filter(|&x| x != v).collect();
                !self.connected_within(&rest)
            })
            .collect()
    }

    /// True iff the graph is disconnected or has a cut vertex. A letter pair
    /// `{x, x⁻¹}` absent from the word counts as disconnection. `false`
    /// certifies that the class is not in the minimal set.
    pub fn minimal_set_obstruction(&self) -> bool {
        if all_letters(self.rank).any(|x| self.degree(x) == 0) {
            return true;
        }
        let present: Vec<Letter> = all_letters(self.rank).collect();
        if !self.connected_within(&present) {
            return true;
        }
        !self.cut_vertices().is_empty()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph whitehead {\n");
        for x in all_letters(self.rank) {
            let _ = writeln!(out, "  \"{}\";", letter_char(x));
        }
        for (&(p, q), &m) in &self.edges {
            let _ = writeln!(out, "  \"{}\" -- \"{}\" [label=\"{m}\"];", letter_char(p), letter_char(q));
        }
        out.push_str("}\n");
        out
    }
}

/// Whitehead automorphism `(S, x)`: `x ∈ S`, `x⁻¹ ∉ S`, and every generator
/// `y ≠ x^{±1}` maps to `x⁻¹^[y⁻¹∈S] · y · x^[y∈S]`. `subset` is a bitmask over
/// letters, bit `i-1` for `a_i` and bit `N+i-1` for `a_i⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WhiteheadMove {
    pub multiplier: Letter,
    pub subset: u64,
}

fn bit(rank: usize, l: Letter) -> u64 {
    let idx = if l > 0 { l as usize - 1 } else { rank + l.unsigned_abs() as usize - 1 };
    1 << idx
}

impl WhiteheadMove {
    /// All nontrivial moves of the given rank, sorted by `(multiplier, subset)`.
    pub fn all(rank: usize) -> Vec<WhiteheadMove> {
        let mut out = Vec::new();
        let mut multipliers: Vec<Letter> = all_letters(rank).collect();
        multipliers.sort_unstable();
        for x in multipliers {
            let others: Vec<Letter> = all_letters(rank).filter(|&y| y != x && y != -x).collect();
            for mask in 1u64..(1 << others.len()) {
                let mut subset = bit(rank, x);
                for (i, &y) in others.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        subset |= bit(rank, y);
                    }
                }
                out.push(WhiteheadMove { multiplier: x, subset });
            }
        }
        out.sort_unstable();
        out
    }

    pub fn contains(&self, rank: usize, l: Letter) -> bool {
        self.subset & bit(rank, l) != 0
    }

    pub fn automorphism(&self, rank: usize) -> Automorphism {
        let x = self.multiplier;
        let build = |mult: Letter| -> Vec<Word> {
            (1..=rank as Letter)
                .map(|y| {
                    if y == x.abs() {
                        return Word::generator(y as usize, rank);
                    }
                    let mut raw = Vec::new();
                    if self.contains(rank, -y) {
                        raw.push(-mult);
                    }
                    raw.push(y);
                    if self.contains(rank, y) {
                        raw.push(mult);
                    }
                    Word::reduce(&raw, rank).expect("letters in range")
                })
                .collect()
        };
        Automorphism::new(build(x), build(-x)).expect("Whitehead moves are invertible")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadReduction {
    pub minimal_length: usize,
    pub minimal_class: CyclicWord,
    pub witness: Vec<WhiteheadMove>,
}

/// Greedy strict descent over all Whitehead moves. At each step the move with
/// the largest reduction wins; ties go to the least `(multiplier, subset)`.
pub fn whitehead_reduce(c: &CyclicWord) -> Result<WhiteheadReduction> {
    if c.is_empty() {
        return Err(Error::TrivialWord);
    }
    let rank = c.rank();
    let moves: Vec<(WhiteheadMove, Automorphism)> =
        WhiteheadMove::all(rank).into_iter().map(|m| (m, m.automorphism(rank))).collect();
    let mut current = c.clone();
    let mut witness = Vec::new();
    loop {
        let images: Vec<CyclicWord> =
            moves.par_iter().map(|(_, phi)| phi.apply_class(&current).expect("same rank")).collect();
        let best = images
            .iter()
            .enumerate()
            .filter(|(_, img)| img.len() < current.len())
            .min_by_key(|(i, img)| (img.len(), *i));
        match best {
            Some((i, img)) => {
                witness.push(moves[i].0);
                current = img.clone();
            }
            None => break,
        }
    }
    Ok(WhiteheadReduction { minimal_length: current.len(), minimal_class: current, witness })
}

/// `g` is primitive iff Whitehead reduction reaches cyclic length one.
pub fn is_primitive(g: &Word) -> Result<bool> {
    if g.is_empty() {
        return Err(Error::TrivialWord);
    }
    Ok(whitehead_reduce(&CyclicWord::of(g))?.minimal_length == 1)
}
