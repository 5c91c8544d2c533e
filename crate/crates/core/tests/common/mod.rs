#![allow(dead_code)]

use currents_core::free_group::{catalog, Automorphism, CyclicWord, Letter, Word};
use proptest::prelude::*;

pub fn raw_letters(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    let r = rank as Letter;
    prop::collection::vec((1..=r, any::<bool>()).prop_map(|(i, s)| if s { i } else { -i }), 0..=max_len)
}

pub fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    raw_letters(rank, max_len).prop_map(move |raw| Word::reduce(&raw, rank).unwrap())
}

pub fn nontrivial_class(rank: usize, max_len: usize) -> impl Strategy<Value = CyclicWord> {
    word(rank, max_len).prop_map(|w| CyclicWord::of(&w)).prop_filter("nontrivial", |c| !c.is_empty())
}

/// Random product of at most `max_factors` elements of the standard pool.
pub fn automorphism(rank: usize, max_factors: usize) -> impl Strategy<Value = Automorphism> {
    let pool = catalog::pool(rank);
    let n = pool.len();
    prop::collection::vec(0..n, 0..=max_factors)
        .prop_map(move |idx| idx.iter().fold(Automorphism::identity(rank), |acc, &i| acc.compose(&pool[i]).unwrap()))
}

/// Reduction by repeated scanning for adjacent cancelling pairs.
pub fn naive_reduce(raw: &[Letter]) -> Vec<Letter> {
    let mut v = raw.to_vec();
    loop {
        match (1..v.len()).find(|&i| v[i - 1] == -v[i]) {
            Some(i) => {
                v.drain(i - 1..=i);
            }
            None => return v,
        }
    }
}

/// Positions `i` of the cyclic word `c` where `v` reads off starting at `i`,
/// wrapping around as many times as needed.
pub fn naive_cyclic_count(c: &[Letter], v: &[Letter]) -> usize {
    let n = c.len();
    (0..n).filter(|&i| v.iter().enumerate().all(|(j, &x)| c[(i + j) % n] == x)).count()
}

pub fn inverse_letters(v: &[Letter]) -> Vec<Letter> {
    v.iter().rev().map(|&l| -l).collect()
}

/// All reduced words of length exactly `len`.
pub fn reduced_words(rank: usize, len: usize) -> Vec<Vec<Letter>> {
    let letters: Vec<Letter> = (1..=rank as Letter).flat_map(|i| [i, -i]).collect();
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<Letter>| {
                letters
                    .iter()
                    .filter(|&&l| w.last() != Some(&-l))
                    .map(|&l| {
                        let mut x = w.clone();
                        x.push(l);
                        x
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}
