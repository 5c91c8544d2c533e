//! A handful of automorphisms with known inverses that recur in experiments.

use super::{Automorphism, Word};

/// `a ↦ ab, b ↦ a` on `F_2`.
pub fn fibonacci() -> Automorphism {
    Automorphism::from_strs(2, &["ab", "a"], &["b", "Ba"]).expect("valid")
}

/// `a ↦ b, b ↦ c, c ↦ ab` on `F_3`.
pub fn tribonacci() -> Automorphism {
    Automorphism::from_strs(3, &["b", "c", "ab"], &["cA", "a", "b"]).expect("valid")
}

/// A product of Dehn-twist automorphisms of the one-holed genus-two surface
/// group `⟨a, b, c, d⟩`; it fixes the class of [`genus_two_boundary`].
pub fn genus_two() -> Automorphism {
    Automorphism::from_strs(4, &["B", "bdba", "D", "dbdc"], &["acab", "A", "cacd", "C"]).expect("valid")
}

/// `[a,b][c,d]`.
pub fn genus_two_boundary() -> Word {
    Word::parse("abABcdCD", 4).expect("valid")
}

/// Elementary Nielsen automorphisms of `F_rank`: right and left transvections
/// `x ↦ x y^{±1}`, `x ↦ y^{±1} x`, transpositions of generators and single
/// inversions.
pub fn nielsen_moves(rank: usize) -> Vec<Automorphism> {
    let letter = |i: usize| (b'a' + i as u8) as char;
    let upper = |i: usize| (b'A' + i as u8) as char;
    let mut out = Vec::new();
    let gens: Vec<String> = (0..rank).map(|i| letter(i).to_string()).collect();
    for x in 0..rank {
        for y in 0..rank {
            if x == y {
                continue;
            }
            let (lx, ly, uy) = (letter(x), letter(y), upper(y));
            for (img, inv) in [
                (format!("{lx}{ly}"), format!("{lx}{uy}")),
                (format!("{lx}{uy}"), format!("{lx}{ly}")),
                (format!("{ly}{lx}"), format!("{uy}{lx}")),
                (format!("{uy}{lx}"), format!("{ly}{lx}")),
            ] {
                let mut images = gens.clone();
                let mut inverse = gens.clone();
                images[x] = img;
                inverse[x] = inv;
                out.push(strs(rank, &images, &inverse));
            }
        }
    }
    for x in 0..rank {
        for y in (x + 1)..rank {
            let mut images = gens.clone();
            images.swap(x, y);
            out.push(strs(rank, &images, &images));
        }
        let mut images = gens.clone();
        images[x] = upper(x).to_string();
        out.push(strs(rank, &images, &images));
    }
    out
}

fn strs(rank: usize, images: &[String], inverse: &[String]) -> Automorphism {
    let a: Vec<&str> = images.iter().map(String::as_str).collect();
    let b: Vec<&str> = inverse.iter().map(String::as_str).collect();
    Automorphism::from_strs(rank, &a, &b).expect("elementary Nielsen move")
}

/// Verified pool used by randomized checks: Nielsen moves plus the named
/// examples of matching rank.
pub fn pool(rank: usize) -> Vec<Automorphism> {
    let mut out = nielsen_moves(rank);
    match rank {
        2 => {
            out.push(fibonacci());
            out.push(fibonacci().inverse());
        }
        3 => {
            out.push(tribonacci());
            out.push(tribonacci().inverse());
        }
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pools_are_verified() {
        for rank in 2..=4 {
            let p = pool(rank);
            assert_eq!(nielsen_moves(rank).len(), 4 * rank * (rank - 1) + rank * (rank - 1) / 2 + rank);
            assert!(p.iter().all(|phi| phi.rank() == rank));
        }
    }

    #[test]
    fn genus_two_fixes_its_boundary() {
        let b = crate::free_group::CyclicWord::of(&genus_two_boundary());
        assert_eq!(genus_two().apply_class(&b).unwrap(), b);
    }
}
