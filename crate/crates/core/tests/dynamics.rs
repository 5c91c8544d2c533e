mod common;

use std::collections::BTreeSet;

use common::*;
use currents_core::currents::{projective_distance, RationalCurrent};
use currents_core::dynamics::*;
use currents_core::free_group::{catalog, Automorphism, CyclicWord, Word};
use currents_core::rng::CounterRng;
use currents_core::Rational;
use proptest::prelude::*;

const GOLDEN: f64 = 1.618_033_988_749_895;

fn primitive_seed(rng: &mut CounterRng, rank: usize, factors: usize) -> Word {
    let pool = catalog::nielsen_moves(rank);
    let phi = (0..factors).fold(Automorphism::identity(rank), |acc, _| {
        acc.compose(&pool[rng.below(pool.len() as u64) as usize]).unwrap()
    });
    phi.apply(&Word::generator(1 + rng.below(rank as u64) as usize, rank)).unwrap()
}

#[test]
fn class_count_matches_brute_force() {
    for rank in 2..=3 {
        for max_len in 1..=5 {
            let mut seen = BTreeSet::new();
            for len in 1..=max_len {
                for raw in reduced_words(rank, len) {
                    let w = Word::reduce(&raw, rank).unwrap();
                    if w.is_cyclically_reduced() {
                        seen.insert(CyclicWord::of(&w));
                    }
                }
            }
            let listed = enumerate_classes(rank, max_len);
            assert_eq!(count_classes(rank, max_len), seen.len() as u128);
            assert_eq!(listed.len(), seen.len());
            assert_eq!(listed.into_iter().collect::<BTreeSet<_>>(), seen);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn certificates_are_sound(phi in automorphism(2, 3)) {
        let cert = periodic_class_search(&phi, 4, 3).unwrap();
        let mut expected = Vec::new();
        for c in enumerate_classes(2, 4) {
            let mut x = c.clone();
            let period = (1..=3).find(|_| {
                x = phi.apply_class(&x).unwrap();
                x == c
            });
            if let Some(p) = period {
                if c <= c.inverse() {
                    expected.push((c, p));
                }
            }
        }
        prop_assert_eq!(cert.findings, expected);
        prop_assert_eq!(cert.classes_examined as u128, count_classes(2, 4));
    }

    #[test]
    fn orbit_is_scale_covariant(g in word(2, 8), n in 1i64..7, d in 1i64..7) {
        prop_assume!(g.cyclic_len() > 0);
        let phi = catalog::fibonacci();
        let nu = RationalCurrent::counting(&g).unwrap();
        let c = Rational::new(n.into(), d.into());
        let a = orbit(&phi, &nu, 6, 3).unwrap();
        let b = orbit(&phi, &nu.scale(&c).unwrap(), 6, 3).unwrap();
        for (x, y) in a.states.iter().zip(&b.states) {
            prop_assert_eq!(&x.profile, &y.profile);
            prop_assert_eq!(&x.weight * &c, y.weight.clone());
        }
        prop_assert_eq!(a.growth_ratio, b.growth_ratio);
    }
}

#[test]
fn limits_do_not_depend_on_the_seed() {
    let phi = catalog::fibonacci();
    let mut rng = CounterRng::new(2024, 0);
    let limits: Vec<_> = (0..5)
        .map(|_| {
            let g = primitive_seed(&mut rng, 2, 3);
            let report = orbit(&phi, &RationalCurrent::counting(&g).unwrap(), 25, 3).unwrap();
            let conv = detect_convergence(&report, 1e-3);
            assert!(conv.converged_at.is_some(), "{g} did not converge");
            conv.limit
        })
        .collect();
    for p in &limits {
        for q in &limits {
            assert!(projective_distance(p, q).unwrap() < 2e-2);
        }
    }
}

#[test]
fn dilatation_forward_and_backward() {
    let phi = catalog::fibonacci();
    let seed = RationalCurrent::counting(&Word::parse("a", 2).unwrap()).unwrap();
    let pf = transition_matrix(&phi).pf_eigenvalue();
    assert!(pf.primitive);
    assert!((pf.eigenvalue - GOLDEN).abs() < 1e-9);
    for psi in [phi.clone(), phi.inverse()] {
        let report = orbit(&psi, &seed, 20, 1).unwrap();
        let lambda = estimate_dilatation(&report, 5).unwrap();
        assert!((lambda - GOLDEN).abs() < 1e-3, "{lambda}");
    }
}

#[test]
fn boundary_classes() {
    let fib = catalog::fibonacci();
    let commutator = Word::parse("abAB", 2).unwrap();
    assert_ne!(boundary_class_test(&fib, &commutator).unwrap(), BoundaryClass::Moved);
    let g2 = catalog::genus_two();
    assert_eq!(boundary_class_test(&g2, &catalog::genus_two_boundary()).unwrap(), BoundaryClass::Preserved);
    assert!(transition_matrix(&g2).is_primitive());
    assert!(periodic_class_search(&g2, 4, 3).unwrap().is_empty());
}

#[test]
fn tribonacci_has_no_short_periodic_classes() {
    let cert = periodic_class_search(&catalog::tribonacci(), 6, 4).unwrap();
    assert!(cert.is_empty() && cert.exhaustive);
    assert_eq!(cert.classes_examined as u128, count_classes(3, 6));
}

#[test]
fn fibonacci_fixes_its_commutator_class() {
    let cert = periodic_class_search(&catalog::fibonacci(), 4, 2).unwrap();
    let periods: Vec<usize> = cert.findings.iter().map(|(_, p)| *p).collect();
    assert_eq!(cert.findings.len(), 1);
    assert_eq!(
        cert.findings[0].0,
        CyclicWord::parse("abAB", 2).unwrap().inverse().min(CyclicWord::parse("abAB", 2).unwrap())
    );
    assert_eq!(periods, vec![2]);
}
