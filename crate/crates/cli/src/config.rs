//! Experiment configuration: schema, parsing and validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use currents_core::currents::{CurrentDoc, RationalCurrent};
use currents_core::free_group::{Automorphism, AutomorphismDoc, Word};
use currents_core::trees::{GraphDoc, MarkedMetricGraph};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Orbit,
    Dilatation,
    Boundary,
    Periodic,
    HyperbolicSearch,
    Whitehead,
    Primitive,
    Intersection,
    FixedPoints,
    Exceptional,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub images: Vec<String>,
    pub inverse_images: Vec<String>,
    /// Boundary words whose classes the automorphism is expected to fix.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub name: String,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphism: Option<String>,
    /// Exponent applied to `automorphism` before the experiment runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_seed: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(rename = "Lmax", default, skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_length: Option<usize>,
    #[serde(default)]
    pub csv: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub rank: usize,
    #[serde(default)]
    pub automorphisms: BTreeMap<String, AutomorphismEntry>,
    #[serde(default)]
    pub seeds: BTreeMap<String, CurrentDoc>,
    #[serde(default)]
    pub trees: BTreeMap<String, GraphDoc>,
    #[serde(default)]
    pub experiments: Vec<Experiment>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    #[error("{}", .0.join("\n"))]
    Invalid(Vec<String>),
}

/// Named objects of a validated configuration.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub config: ExperimentConfig,
    pub automorphisms: BTreeMap<String, Automorphism>,
    pub boundaries: BTreeMap<String, Vec<Word>>,
    pub seeds: BTreeMap<String, RationalCurrent>,
    pub trees: BTreeMap<String, MarkedMetricGraph>,
}

impl Loaded {
    /// `φ^power` for the experiment's automorphism.
    pub fn automorphism(&self, exp: &Experiment) -> Automorphism {
        let phi = &self.automorphisms[exp.automorphism.as_deref().expect("validated")];
        match exp.power.unwrap_or(1) {
            1 => phi.clone(),
            k => phi.power(k),
        }
    }

    pub fn boundary_words(&self, exp: &Experiment) -> &[Word] {
        exp.automorphism.as_deref().and_then(|a| self.boundaries.get(a)).map_or(&[], Vec::as_slice)
    }
}

pub fn load(path: &Path) -> Result<Loaded, ConfigError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse(&text, &path.display().to_string())
}

pub fn parse(text: &str, origin: &str) -> Result<Loaded, ConfigError> {
    let config: ExperimentConfig = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate(config)
}

fn is_safe_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

pub fn validate(config: ExperimentConfig) -> Result<Loaded, ConfigError> {
    let mut errors = Vec::new();
    let rank = config.rank;
    if !(2..=currents_core::free_group::MAX_RANK).contains(&rank) {
        errors.push(format!("rank: must be between 2 and 26, got {rank}"));
    }

    let mut automorphisms = BTreeMap::new();
    let mut boundaries = BTreeMap::new();
    for (name, entry) in &config.automorphisms {
        let doc = AutomorphismDoc {
            rank: entry.rank,
            images: entry.images.clone(),
            inverse_images: entry.inverse_images.clone(),
        };
        match Automorphism::from_doc(&doc, Some(rank)) {
            Ok(phi) => {
                automorphisms.insert(name.clone(), phi);
            }
            Err(e) => errors.push(format!("automorphisms.{name}: {e}")),
        }
        let mut words = Vec::new();
        for (i, w) in entry.boundary.iter().enumerate() {
            match Word::parse(w, rank) {
                Ok(w) if w.is_empty() => errors.push(format!("automorphisms.{name}.boundary[{i}]: trivial word")),
                Ok(w) => words.push(w),
                Err(e) => errors.push(format!("automorphisms.{name}.boundary[{i}]: {e}")),
            }
        }
        boundaries.insert(name.clone(), words);
    }

    let mut seeds = BTreeMap::new();
    for (name, doc) in &config.seeds {
        match RationalCurrent::from_doc(doc, Some(rank)) {
            Ok(nu) if nu.is_zero() => errors.push(format!("seeds.{name}: current is zero")),
            Ok(nu) => {
                seeds.insert(name.clone(), nu);
            }
            Err(e) => errors.push(format!("seeds.{name}: {e}")),
        }
    }

    let mut trees = BTreeMap::new();
    for (name, doc) in &config.trees {
        match MarkedMetricGraph::from_doc(doc) {
            Ok(t) if t.rank() != rank => {
                errors.push(format!("trees.{name}: marking has rank {}, config rank is {rank}", t.rank()))
            }
            Ok(t) => {
                trees.insert(name.clone(), t);
            }
            Err(e) => errors.push(format!("trees.{name}: {e}")),
        }
    }

    let mut names = std::collections::BTreeSet::new();
    for (i, exp) in config.experiments.iter().enumerate() {
        let at = format!("experiments[{i}]");
        if !is_safe_name(&exp.name) {
            errors.push(format!("{at}.name: {:?} must be nonempty and use only [A-Za-z0-9_-]", exp.name));
        } else if exp.name == "manifest" || !names.insert(exp.name.clone()) {
            errors.push(format!("{at}.name: {:?} is reserved or used twice", exp.name));
        }
        check_experiment(exp, &at, &config, &mut errors);
    }

    if errors.is_empty() {
        Ok(Loaded { config, automorphisms, boundaries, seeds, trees })
    } else {
        Err(ConfigError::Invalid(errors))
    }
}

fn check_experiment(exp: &Experiment, at: &str, config: &ExperimentConfig, errors: &mut Vec<String>) {
    use Kind::*;
    let mut need = |field: &str, present: bool| {
        if !present {
            errors.push(format!("{at}.{field}: required for kind {}", exp.kind));
        }
    };
    let needs_phi = !matches!(exp.kind, Whitehead | Primitive | Intersection);
    need("automorphism", !needs_phi || exp.automorphism.is_some());
    match exp.kind {
        Orbit => {
            need("seed", exp.seed.is_some());
            need("n", exp.n.is_some());
            need("L", exp.level.is_some());
        }
        Dilatation => {
            need("seed", exp.seed.is_some());
            need("n", exp.n.is_some());
        }
        Boundary => {}
        Periodic => {
            need("Lmax", exp.max_len.is_some());
            need("p", exp.p.is_some());
        }
        HyperbolicSearch => {
            need("psi", exp.psi.is_some());
            need("m_max", exp.m_max.is_some());
            need("Lmax", exp.max_len.is_some());
            need("p", exp.p.is_some());
            need("budget", exp.budget.is_some());
        }
        Whitehead => need("words", !exp.words.is_empty()),
        Primitive => need("words", !exp.words.is_empty() || exp.random_count.is_some()),
        Intersection => {
            need("tree", exp.tree.is_some());
            need("seeds", !exp.seeds.is_empty());
        }
        FixedPoints => {
            need("seeds", !exp.seeds.is_empty());
            need("L", exp.level.is_some());
        }
        Exceptional => {
            need("boundary_seed", exp.boundary_seed.is_some());
            need("seed", exp.seed.is_some());
            need("n", exp.n.is_some());
            need("L", exp.level.is_some());
            need("threshold", exp.threshold.is_some());
        }
    }
    if exp.random_count.is_some() != exp.random_length.is_some() {
        errors.push(format!("{at}: random_count and random_length go together"));
    }
    if exp.kind == Primitive && exp.random_length == Some(0) {
        errors.push(format!("{at}.random_length: must be positive"));
    }
    if matches!(exp.level, Some(0)) {
        errors.push(format!("{at}.L: must be positive"));
    }
    for (field, value) in [("tol", exp.tol), ("threshold", exp.threshold)] {
        if value.is_some_and(|x| !(x.is_finite() && x >= 0.0)) {
            errors.push(format!("{at}.{field}: must be a nonnegative number"));
        }
    }

    let undefined = |errors: &mut Vec<String>, field: &str, what: &str, name: &str| {
        errors.push(format!("{at}.{field}: undefined {what} {name:?}"));
    };
    for (field, name) in [("automorphism", &exp.automorphism), ("psi", &exp.psi)] {
        if let Some(name) = name {
            if !config.automorphisms.contains_key(name) {
                undefined(errors, field, "automorphism", name);
            }
        }
    }
    for (field, name) in [("seed", &exp.seed), ("boundary_seed", &exp.boundary_seed)] {
        if let Some(name) = name {
            if !config.seeds.contains_key(name) {
                undefined(errors, field, "seed", name);
            }
        }
    }
    for (j, name) in exp.seeds.iter().enumerate() {
        if !config.seeds.contains_key(name) {
            undefined(errors, &format!("seeds[{j}]"), "seed", name);
        }
    }
    if let Some(name) = &exp.tree {
        if !config.trees.contains_key(name) {
            undefined(errors, "tree", "tree", name);
        }
    }
    for (j, w) in exp.words.iter().enumerate() {
        match Word::parse(w, config.rank) {
            Ok(w) if w.is_empty() => errors.push(format!("{at}.words[{j}]: trivial word")),
            Ok(_) => {}
            Err(e) => errors.push(format!("{at}.words[{j}]: {e}")),
        }
    }
    if matches!(exp.kind, Boundary | HyperbolicSearch | Exceptional) {
        if let Some(a) = &exp.automorphism {
            if config.automorphisms.get(a).is_some_and(|e| e.boundary.is_empty()) {
                errors.push(format!("{at}.automorphism: {a:?} declares no boundary words"));
            }
        }
    }
}
