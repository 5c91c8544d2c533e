//! Simplicial points of outer space as marked metric graphs: translation
//! lengths, the intersection form with rational currents, and the right action
//! of automorphisms by precomposing the marking.
//!
//! Edge paths are sequences of oriented-edge tokens: `+(e+1)` traverses edge
//! `e` from `u` to `v`, `-(e+1)` from `v` to `u`. Reversal negates a token, so
//! tightening a path is free reduction over the same involution as for words.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::currents::{parse_rational, RationalCurrent};
use crate::error::{Error, Result};
use crate::free_group::{ensure_same_rank, free_reduce, letter_char, Automorphism, CyclicWord, Letter, Word};
use crate::Rational;

pub type EdgeToken = i32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: Rational,
}

/// A connected metric graph without valence-one vertices, with first Betti
/// number `rank`, marked by one closed tight edge path per generator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MarkedMetricGraph {
    rank: usize,
    vertices: usize,
    basepoint: usize,
    edges: Vec<Edge>,
    marking: Vec<Vec<EdgeToken>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub u: usize,
    pub v: usize,
    pub len: String,
}

/// JSON form: `{"vertices": 1, "edges": [{"u":0,"v":0,"len":"1"}], "marking": {"a": ["e0+"]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: usize,
    pub edges: Vec<EdgeDoc>,
    pub marking: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<usize>,
}

fn parse_token(s: &str, edges: usize) -> Result<EdgeToken> {
    let bad = || Error::InvalidGraph(format!("bad edge token {s:?}"));
    let body = s.trim().strip_prefix('e').ok_or_else(bad)?;
    let (num, sign) = match body.strip_suffix('+') {
        Some(n) => (n, 1),
        None => (body.strip_suffix('-').ok_or_else(bad)?, -1),
    };
    let idx: usize = num.parse().map_err(|_| bad())?;
    if idx >= edges {
        return Err(Error::InvalidGraph(format!("edge token {s:?} refers to a missing edge")));
    }
    Ok(sign * (idx as EdgeToken + 1))
}

fn format_token(t: EdgeToken) -> String {
    format!("e{}{}", t.unsigned_abs() - 1, if t > 0 { '+' } else { '-' })
}

/// Strips backtracking across the basepoint of a closed tight path.
fn cyclically_tighten(path: &[EdgeToken]) -> &[EdgeToken] {
    let mut lo = 0;
    let mut hi = path.len();
    while hi - lo >= 2 && path[lo] == -path[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    &path[lo..hi]
}

impl MarkedMetricGraph {
    pub fn new(
        vertices: usize,
        basepoint: usize,
        edges: Vec<Edge>,
        marking: Vec<Vec<EdgeToken>>,
    ) -> Result<MarkedMetricGraph> {
        let invalid = |m: String| Err(Error::InvalidGraph(m));
        let rank = marking.len();
        if !(2..=crate::free_group::MAX_RANK).contains(&rank) {
            return invalid(format!("marking must name 2..=26 generators, got {rank}"));
        }
        if vertices == 0 || basepoint >= vertices {
            return invalid("basepoint outside the vertex set".into());
        }
        let mut valence = vec![0usize; vertices];
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertices || e.v >= vertices {
                return invalid(format!("edge e{i} has an endpoint outside the vertex set"));
            }
            if !e.len.is_positive() {
                return invalid(format!("edge e{i} has nonpositive length"));
            }
            valence[e.u] += 1;
            valence[e.v] += 1;
        }
        if let Some(v) = valence.iter().position(|&d| d < 2) {
            return invalid(format!("vertex {v} has valence {}", valence[v]));
        }
        // connectivity by union-find
        let mut parent: Vec<usize> = (0..vertices).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        if (0..vertices).any(|v| find(&mut parent, v) != root) {
            return invalid("graph is disconnected".into());
        }
        if edges.len() + 1 != vertices + rank {
            return invalid(format!(
                "first Betti number {} does not match rank {rank}",
                edges.len() + 1 - vertices.min(edges.len() + 1)
            ));
        }
        let graph = MarkedMetricGraph { rank, vertices, basepoint, edges, marking };
        for (i, path) in graph.marking.iter().enumerate() {
            graph
                .check_loop(path)
                .map_err(|m| Error::InvalidGraph(format!("marking of {}: {m}", letter_char((i + 1) as Letter))))?;
        }
        Ok(graph)
    }

    fn tail(&self, t: EdgeToken) -> usize {
        let e = &self.edges[t.unsigned_abs() as usize - 1];
        if t > 0 {
            e.u
        } else {
            e.v
        }
    }

    fn head(&self, t: EdgeToken) -> usize {
        self.tail(-t)
    }

    fn check_loop(&self, path: &[EdgeToken]) -> std::result::Result<(), String> {
        if path.is_empty() {
            return Err("empty path".into());
        }
        if path.iter().any(|&t| t == 0 || t.unsigned_abs() as usize > self.edges.len()) {
            return Err("unknown edge".into());
        }
        if path.windows(2).any(|p| p[0] == -p[1]) {
            return Err("path backtracks".into());
        }
        if path.windows(2).any(|p| self.head(p[0]) != self.tail(p[1])) {
            return Err("path is not connected".into());
        }
        if self.tail(path[0]) != self.basepoint || self.head(path[path.len() - 1]) != self.basepoint {
            return Err("path is not closed at the basepoint".into());
        }
        Ok(())
    }

    /// The rose `R_N` with the identity marking and the given edge lengths.
    pub fn rose_with_lengths(lengths: Vec<Rational>) -> Result<MarkedMetricGraph> {
        let rank = lengths.len();
        let edges = lengths.into_iter().map(|len| Edge { u: 0, v: 0, len }).collect();
        let marking = (1..=rank as EdgeToken).map(|t| vec![t]).collect();
        MarkedMetricGraph::new(1, 0, edges, marking)
    }

    /// The rose with unit lengths.
    pub fn rose(rank: usize) -> MarkedMetricGraph {
        MarkedMetricGraph::rose_with_lengths(vec![Rational::from_integer(1.into()); rank])
            .expect("rose is a valid marked graph")
    }

    pub fn from_doc(doc: &GraphDoc) -> Result<MarkedMetricGraph> {
        let edges = doc
            .edges
            .iter()
            .map(|e| Ok(Edge { u: e.u, v: e.v, len: parse_rational(&e.len)? }))
            .collect::<Result<Vec<_>>>()?;
        let rank = doc.marking.len();
        let mut marking = vec![Vec::new(); rank];
        for (name, path) in &doc.marking {
            let letter = Word::parse(name, rank.max(2))
                .ok()
                .and_then(|w| (w.len() == 1 && w.letters()[0] > 0).then(|| w.letters()[0]))
                .ok_or_else(|| Error::InvalidGraph(format!("marking key {name:?} is not a generator")))?;
            marking[letter as usize - 1] = path.iter().map(|s| parse_token(s, edges.len())).collect::<Result<_>>()?;
        }
        MarkedMetricGraph::new(doc.vertices, doc.basepoint.unwrap_or(0), edges, marking)
    }

    pub fn from_json(s: &str) -> Result<MarkedMetricGraph> {
        let doc: GraphDoc = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        MarkedMetricGraph::from_doc(&doc)
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            vertices: self.vertices,
            edges: self.edges.iter().map(|e| EdgeDoc { u: e.u, v: e.v, len: e.len.to_string() }).collect(),
            marking: self
                .marking
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    (letter_char((i + 1) as Letter).to_string(), p.iter().map(|&t| format_token(t)).collect())
                })
                .collect(),
            basepoint: (self.basepoint != 0).then_some(self.basepoint),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn marking(&self) -> &[Vec<EdgeToken>] {
        &self.marking
    }

    /// Tight edge path representing `w` under the marking.
    pub fn path_of(&self, w: &Word) -> Result<Vec<EdgeToken>> {
        ensure_same_rank(self.rank, w.rank())?;
        Ok(self.path_of_letters(w.letters()))
    }

    fn path_of_letters(&self, letters: &[Letter]) -> Vec<EdgeToken> {
        free_reduce(letters.iter().flat_map(|&l| {
            let path = &self.marking[l.unsigned_abs() as usize - 1];
            let forward = l > 0;
            (0..path.len()).map(move |i| if forward { path[i] } else { -path[path.len() - 1 - i] })
        }))
    }

    fn path_length(&self, path: &[EdgeToken]) -> Rational {
        path.iter().map(|t| &self.edges[t.unsigned_abs() as usize - 1].len).fold(Rational::zero(), |acc, l| acc + l)
    }

    /// `‖g‖_T`: length of the tight loop freely homotopic to the image of `g`.
    pub fn translation_length(&self, g: &Word) -> Result<Rational> {
        ensure_same_rank(self.rank, g.rank())?;
        Ok(self.class_length(&CyclicWord::of(g)))
    }

    pub fn class_length(&self, c: &CyclicWord) -> Rational {
        let path = self.path_of_letters(c.letters());
        self.path_length(cyclically_tighten(&path))
    }

    /// `⟨T, ν⟩ = Σ cᵢ·‖hᵢ‖_T`.
    pub fn intersection(&self, nu: &RationalCurrent) -> Result<Rational> {
        ensure_same_rank(self.rank, nu.rank())?;
        Ok(nu.terms().map(|(c, coeff)| coeff * self.class_length(c)).fold(Rational::zero(), |a, b| a + b))
    }

    /// All edge lengths multiplied by `c > 0`.
    pub fn scale(&self, c: &Rational) -> Result<MarkedMetricGraph> {
        if !c.is_positive() {
            return Err(Error::InvalidGraph("scale factor must be positive".into()));
        }
        let mut out = self.clone();
        for e in &mut out.edges {
            e.len = &e.len * c;
        }
        Ok(out)
    }

    /// `T·φ`: the marking precomposed with `φ`, so `‖g‖_{Tφ} = ‖φ(g)‖_T`.
    /// Acting by `φ` then `ψ` equals acting by `φ.compose(ψ)` (that is, `φ∘ψ`).
    pub fn act(&self, phi: &Automorphism) -> Result<MarkedMetricGraph> {
        ensure_same_rank(self.rank, phi.rank())?;
        let mut out = self.clone();
        out.marking = phi.images().iter().map(|w| self.path_of_letters(w.letters())).collect();
        Ok(out)
    }
}

impl fmt::Debug for MarkedMetricGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let doc = self.to_doc();
        f.debug_struct("MarkedMetricGraph")
            .field("vertices", &doc.vertices)
            .field("edges", &doc.edges)
            .field("marking", &doc.marking)
            .finish()
    }
}
