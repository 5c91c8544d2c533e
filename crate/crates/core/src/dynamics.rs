//! Orbit experiments for automorphisms acting on projectivized currents,
//! boundary-class tests, bounded searches for periodic conjugacy classes and
//! fixed-point checks.
//!
//! The attracting and repelling currents of an iwip are only ever seen here as
//! limits of frequency profiles along forward and backward orbits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::currents::{projective_distance, ratio_to_f64, FrequencyProfile, RationalCurrent};
use crate::error::{Error, Result};
use crate::free_group::{conjugate_equal, ensure_same_rank, Automorphism, CyclicWord, Letter, Word};
use crate::Rational;

/// Refusal threshold for exhaustive class enumeration.
pub const MAX_CLASSES: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitStep {
    pub weight: Rational,
    pub profile: FrequencyProfile,
}

/// The forward orbit `ν, φν, …, φⁿν` sampled through weights and profiles.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitReport {
    pub automorphism: String,
    pub seed: String,
    pub level: usize,
    pub steps: usize,
    /// `steps + 1` entries, index `k` for `φᵏν`.
    pub states: Vec<OrbitStep>,
    /// `successive_distance[k] = d(profile[k], profile[k+1])`.
    pub successive_distance: Vec<f64>,
    /// `growth_ratio[k] = weight[k+1] / weight[k]`.
    pub growth_ratio: Vec<f64>,
}

impl OrbitReport {
    pub fn with_ids(mut self, automorphism: &str, seed: &str) -> OrbitReport {
        self.automorphism = automorphism.to_string();
        self.seed = seed.to_string();
        self
    }

    pub fn weights(&self) -> impl Iterator<Item = &Rational> {
        self.states.iter().map(|s| &s.weight)
    }

    pub fn final_profile(&self) -> &FrequencyProfile {
        &self.states.last().expect("orbit has at least one state").profile
    }
}

pub fn orbit(phi: &Automorphism, seed: &RationalCurrent, steps: usize, level: usize) -> Result<OrbitReport> {
    ensure_same_rank(phi.rank(), seed.rank())?;
    if seed.is_zero() {
        return Err(Error::ZeroCurrent);
    }
    if steps == 0 {
        return Err(Error::Precondition("an orbit needs at least one step".into()));
    }
    let mut current = seed.clone();
    let mut states = Vec::with_capacity(steps + 1);
    states.push(OrbitStep { weight: current.weight(), profile: current.frequency_profile(level)? });
    for _ in 0..steps {
        current = current.act(phi)?;
        states.push(OrbitStep { weight: current.weight(), profile: current.frequency_profile(level)? });
    }
    let successive_distance =
        states.windows(2).map(|p| projective_distance(&p[0].profile, &p[1].profile)).collect::<Result<Vec<f64>>>()?;
    let growth_ratio = states.windows(2).map(|p| ratio_to_f64(&(&p[1].weight / &p[0].weight))).collect();
    Ok(OrbitReport {
        automorphism: String::new(),
        seed: String::new(),
        level,
        steps,
        states,
        successive_distance,
        growth_ratio,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Convergence {
    /// First index from which every successive distance is below tolerance.
    pub converged_at: Option<usize>,
    pub limit: FrequencyProfile,
}

/// Suffix-window test: the least `k` with `successive_distance[j] < tol` for
/// all `j ≥ k`.
pub fn detect_convergence(report: &OrbitReport, tol: f64) -> Convergence {
    let d = &report.successive_distance;
    let tail = d.iter().rev().take_while(|&&x| x < tol).count();
    let converged_at = (tail > 0 || d.is_empty()).then(|| d.len() - tail);
    Convergence { converged_at, limit: report.final_profile().clone() }
}

/// Geometric mean of the growth ratios after `burn_in` steps.
pub fn estimate_dilatation(report: &OrbitReport, burn_in: usize) -> Result<f64> {
    if report.steps < burn_in + 2 {
        return Err(Error::Precondition(format!("orbit of {} steps is too short for burn-in {burn_in}", report.steps)));
    }
    let tail = &report.growth_ratio[burn_in..];
    let mean_log = tail.iter().map(|r| r.ln()).sum::<f64>() / tail.len() as f64;
    Ok(mean_log.exp())
}

/// Abelianized transition matrix: entry `(i, j)` counts occurrences of
/// `a_i^{±1}` in `φ(a_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub size: usize,
    pub entries: Vec<Vec<u64>>,
}

pub fn transition_matrix(phi: &Automorphism) -> TransitionMatrix {
    let n = phi.rank();
    let mut entries = vec![vec![0u64; n]; n];
    for (j, img) in phi.images().iter().enumerate() {
        for &l in img.letters() {
            entries[l.unsigned_abs() as usize - 1][j] += 1;
        }
    }
    TransitionMatrix { size: n, entries }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerronFrobenius {
    pub eigenvalue: f64,
    /// Some power of the matrix (exponent ≤ 2N²) is strictly positive.
    pub primitive: bool,
    pub iterations: usize,
}

impl TransitionMatrix {
    fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.entries.iter().map(|row| row.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum()).collect()
    }

    /// Whether some power up to `2N²` has all entries positive.
    pub fn is_primitive(&self) -> bool {
        let n = self.size;
        let pattern: Vec<Vec<bool>> = self.entries.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
        let mut power = pattern.clone();
        for _ in 0..(2 * n * n) {
            if power.iter().all(|r| r.iter().all(|&b| b)) {
                return true;
            }
            let next: Vec<Vec<bool>> =
                (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| power[i][k] && pattern[k][j])).collect()).collect();
            if next == power {
                return false;
            }
            power = next;
        }
        false
    }

    /// Spectral radius by power iteration on `M + I`, stopped when the
    /// Collatz–Wielandt bounds `min (Mx)ᵢ/xᵢ ≤ ρ ≤ max (Mx)ᵢ/xᵢ` agree to a
    /// relative `1e-10`.
    pub fn pf_eigenvalue(&self) -> PerronFrobenius {
        const REL_TOL: f64 = 1e-10;
        const MAX_ITERS: usize = 1_000_000;
        let n = self.size;
        let mut x = vec![1.0 / n as f64; n];
        let mut estimate = 0.0;
        let mut iterations = 0;
        for it in 1..=MAX_ITERS {
            iterations = it;
            let mx = self.mul_vec(&x);
            let ratios = mx.iter().zip(&x).map(|(a, b)| a / b);
            let (lo, hi) = ratios.fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
            estimate = 0.5 * (lo + hi);
            if hi - lo <= REL_TOL * hi.max(f64::MIN_POSITIVE) {
                break;
            }
            let mut y: Vec<f64> = mx.iter().zip(&x).map(|(a, b)| a + b).collect();
            let norm: f64 = y.iter().sum();
            y.iter_mut().for_each(|v| *v /= norm);
            x = y;
        }
        PerronFrobenius { eigenvalue: estimate, primitive: self.is_primitive(), iterations }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryClass {
    Preserved,
    Inverted,
    Moved,
}

/// How `φ` acts on the conjugacy class of `g_b`.
pub fn boundary_class_test(phi: &Automorphism, boundary: &Word) -> Result<BoundaryClass> {
    ensure_same_rank(phi.rank(), boundary.rank())?;
    if boundary.is_empty() {
        return Err(Error::TrivialWord);
    }
    let class = CyclicWord::of(boundary);
    let image = phi.apply_class(&class)?;
    Ok(if conjugate_equal(&image, &class, false)? {
        BoundaryClass::Preserved
    } else if conjugate_equal(&image, &class, true)? {
        BoundaryClass::Inverted
    } else {
        BoundaryClass::Moved
    })
}

/// Number of cyclically reduced words of length `n` in `F_rank`: the trace of
/// the `n`-th power of the non-backtracking transfer matrix.
fn cyclically_reduced_count(rank: usize, n: usize) -> u128 {
    let m = 2 * rank as u128 - 1;
    let sign: i128 = if n.is_multiple_of(2) { 1 } else { -1 };
    (m.pow(n as u32) as i128 + 1 + (rank as i128 - 1) * (1 + sign)) as u128
}

fn euler_phi(mut n: usize) -> usize {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Number of nontrivial conjugacy classes of cyclic length `≤ max_len`
/// (Burnside over rotations).
pub fn count_classes(rank: usize, max_len: usize) -> u128 {
    (1..=max_len)
        .map(|n| {
            let fixed: u128 = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| euler_phi(n / d) as u128 * cyclically_reduced_count(rank, d))
                .sum();
            fixed / n as u128
        })
        .sum()
}

/// One canonical representative (least rotation) per conjugacy class of each
/// cyclic length `1..=max_len`, in lexicographic order per length.
pub fn enumerate_classes(rank: usize, max_len: usize) -> Vec<CyclicWord> {
    let mut letters: Vec<Letter> = (1..=rank as Letter).flat_map(|x| [x, -x]).collect();
    letters.sort_unstable();
    let mut out = Vec::new();
    for len in 1..=max_len {
        let shards: Vec<Vec<CyclicWord>> = letters
            .par_iter()
            .map(|&first| {
                let mut found = Vec::new();
                let mut word = vec![first];
                extend_necklaces(rank, len, &letters, &mut word, &mut found);
                found
            })
            .collect();
        out.extend(shards.into_iter().flatten());
    }
    out
}

fn extend_necklaces(rank: usize, len: usize, letters: &[Letter], word: &mut Vec<Letter>, found: &mut Vec<CyclicWord>) {
    if word.len() == len {
        if word.len() > 1 && word[0] == -word[len - 1] {
            return;
        }
        if crate::free_group::canonical_rotation(word) == *word {
            found.push(CyclicWord::from_canonical(rank, word.clone()));
        }
        return;
    }
    for &l in letters {
        // a least rotation never contains a letter below its first letter
        if l < word[0] || *word.last().unwrap() == -l {
            continue;
        }
        word.push(l);
        extend_necklaces(rank, len, letters, word, found);
        word.pop();
    }
}

/// Bounded search for periodic conjugacy classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicClassCertificate {
    pub automorphism: String,
    pub max_len: usize,
    pub max_period: usize,
    /// `(class, least period)`, one of each inverse pair.
    pub findings: Vec<(CyclicWord, usize)>,
    pub classes_examined: usize,
    pub exhaustive: bool,
}

impl PeriodicClassCertificate {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }
}

fn least_period(
    phi: &Automorphism,
    class: &CyclicWord,
    max_period: usize,
    budget: Option<usize>,
) -> Result<Option<usize>> {
    let mut current = class.clone();
    for k in 1..=max_period {
        current = phi.apply_class(&current)?;
        if let Some(b) = budget {
            if current.len() > b {
                return Err(Error::BudgetExceeded { budget: b, reached: current.len() });
            }
        }
        if current == *class {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

pub fn periodic_class_search(
    phi: &Automorphism,
    max_len: usize,
    max_period: usize,
) -> Result<PeriodicClassCertificate> {
    periodic_class_search_with_budget(phi, max_len, max_period, None)
}

/// As [`periodic_class_search`], failing if any iterate exceeds `budget`
/// letters.
pub fn periodic_class_search_with_budget(
    phi: &Automorphism,
    max_len: usize,
    max_period: usize,
    budget: Option<usize>,
) -> Result<PeriodicClassCertificate> {
    if max_len == 0 || max_period == 0 {
        return Err(Error::Precondition("length and period bounds must be positive".into()));
    }
    let count = count_classes(phi.rank(), max_len);
    if count > MAX_CLASSES {
        return Err(Error::TooManyClasses { count, limit: MAX_CLASSES });
    }
    let classes = enumerate_classes(phi.rank(), max_len);
    let periods = classes.par_iter().map(|c| least_period(phi, c, max_period, budget)).collect::<Result<Vec<_>>>()?;
    let findings = classes
        .iter()
        .zip(periods)
        .filter_map(|(c, p)| p.map(|p| (c.clone(), p)))
        .filter(|(c, _)| {
            let inv = c.inverse();
            *c <= inv
        })
        .collect();
    Ok(PeriodicClassCertificate {
        automorphism: String::new(),
        max_len,
        max_period,
        findings,
        classes_examined: classes.len(),
        exhaustive: true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicSearchReport {
    /// Certificates for `φᵐψ`, `m = 1, 2, …` up to the least empty one.
    pub certificates: Vec<(usize, PeriodicClassCertificate)>,
    /// Least `m` whose bounded certificate is empty. A bounded search, not a proof.
    pub least_m: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicSearchParams {
    pub m_max: usize,
    pub max_len: usize,
    pub max_period: usize,
    /// Word-length budget for composite images and iterates.
    pub budget: usize,
}

/// Searches `m = 1..=m_max` for a composite `φᵐψ` with no periodic classes
/// within the bounds. Requires rank ≥ 3 and `ψ` to move the class of the
/// boundary word of `φ` off itself and its inverse.
pub fn hyperbolic_candidate_search(
    phi: &Automorphism,
    psi: &Automorphism,
    boundary: &Word,
    params: &HyperbolicSearchParams,
) -> Result<HyperbolicSearchReport> {
    ensure_same_rank(phi.rank(), psi.rank())?;
    let verdict = boundary_class_test(psi, boundary)?;
    if verdict != BoundaryClass::Moved {
        return Err(Error::Precondition(format!("psi must move the boundary class, but it is {verdict:?}")));
    }
    if phi.rank() < 3 {
        return Err(Error::Precondition("hyperbolic iwips need rank at least 3".into()));
    }
    // sequential in m so the search stops at the first empty certificate;
    // each certificate is itself computed in parallel
    let mut certificates = Vec::new();
    let mut least_m = None;
    let mut theta = psi.clone();
    for m in 1..=params.m_max {
        theta = phi.compose(&theta)?;
        let longest = theta.max_image_len();
        if longest > params.budget {
            return Err(Error::BudgetExceeded { budget: params.budget, reached: longest });
        }
        let cert = periodic_class_search_with_budget(&theta, params.max_len, params.max_period, Some(params.budget))?;
        let empty = cert.is_empty();
        certificates.push((m, cert));
        if empty {
            least_m = Some(m);
            break;
        }
    }
    Ok(HyperbolicSearchReport { certificates, least_m })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedStatus {
    Fixed,
    NotFixed,
}

/// `Fixed` iff `φν` is a positive multiple of `ν` and their profiles agree.
pub fn fixed_point_check(phi: &Automorphism, candidates: &[RationalCurrent], level: usize) -> Result<Vec<FixedStatus>> {
    candidates
        .iter()
        .map(|nu| {
            if nu.is_zero() {
                return Err(Error::ZeroCurrent);
            }
            let image = nu.act(phi)?;
            let same_profile = image.frequency_profile(level)? == nu.frequency_profile(level)?;
            Ok(if same_profile && image.is_proportional_to(nu) { FixedStatus::Fixed } else { FixedStatus::NotFixed })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExceptionalParams {
    pub steps: usize,
    pub level: usize,
    pub tol: f64,
    pub separation_threshold: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExceptionalReport {
    pub boundary_converged_at: Option<usize>,
    pub boundary_stationary: bool,
    pub generic_converged_at: Option<usize>,
    pub separation: f64,
    pub threshold: f64,
    /// Both orbits are stationary, so nothing is being separated.
    pub degenerate: bool,
    pub separated: bool,
    pub boundary_limit: FrequencyProfile,
    pub generic_limit: FrequencyProfile,
}

/// Runs the orbit of a boundary-supported current and of a generic seed and
/// measures how far apart their limit profiles are.
pub fn exceptional_orbit_check(
    phi: &Automorphism,
    boundary_words: &[Word],
    boundary: &RationalCurrent,
    generic: &RationalCurrent,
    params: &ExceptionalParams,
) -> Result<ExceptionalReport> {
    let classes: Vec<CyclicWord> = boundary_words.iter().filter(|w| !w.is_empty()).map(CyclicWord::of).collect();
    if classes.is_empty() {
        return Err(Error::Precondition("no boundary words declared".into()));
    }
    if boundary.is_zero() || !boundary.supported_on(&classes) {
        return Err(Error::Precondition("boundary current is not a combination of boundary-word currents".into()));
    }
    if generic.is_zero() || generic.supported_on(&classes) {
        return Err(Error::Precondition("generic seed is supported on boundary classes".into()));
    }
    let b_orbit = orbit(phi, boundary, params.steps, params.level)?;
    let g_orbit = orbit(phi, generic, params.steps, params.level)?;
    let b_conv = detect_convergence(&b_orbit, params.tol);
    let g_conv = detect_convergence(&g_orbit, params.tol);
    let own = &b_orbit.states[0].profile;
    let boundary_stationary = b_conv.converged_at == Some(0) && b_conv.limit == *own;
    let separation = projective_distance(&b_conv.limit, &g_conv.limit)?;
    let degenerate = boundary_stationary && g_conv.converged_at == Some(0);
    Ok(ExceptionalReport {
        boundary_converged_at: b_conv.converged_at,
        boundary_stationary,
        generic_converged_at: g_conv.converged_at,
        separation,
        threshold: params.separation_threshold,
        degenerate,
        separated: boundary_stationary && !degenerate && separation > params.separation_threshold,
        boundary_limit: b_conv.limit,
        generic_limit: g_conv.limit,
    })
}
