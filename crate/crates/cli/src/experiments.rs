//! One runner per experiment kind. Each returns a JSON report and, for
//! orbits, an optional CSV table.

use currents_core::currents::{FrequencyProfile, RationalCurrent};
use currents_core::dynamics::{self, ExceptionalParams, HyperbolicSearchParams, PeriodicClassCertificate};
use currents_core::free_group::{letter_char, CyclicWord, Letter, Word};
use currents_core::rng::CounterRng;
use currents_core::whitehead::{self, WhiteheadGraph};
use serde_json::{json, Value};

use crate::config::{Experiment, Kind, Loaded};
use crate::output::csv_float;

pub const DEFAULT_TOL: f64 = 1e-3;
pub const DEFAULT_BURN_IN: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct Artifacts {
    pub report: Value,
    pub csv: Option<String>,
}

type Outcome = Result<Artifacts, String>;

fn err(e: currents_core::Error) -> String {
    e.to_string()
}

/// Runs experiment `index` of the configuration with RNG stream `(seed, index)`.
pub fn run(loaded: &Loaded, index: usize, seed: u64) -> Outcome {
    let exp = &loaded.config.experiments[index];
    let mut rng = CounterRng::new(seed, index as u64);
    let body = match exp.kind {
        Kind::Orbit => orbit(loaded, exp),
        Kind::Dilatation => dilatation(loaded, exp),
        Kind::Boundary => boundary(loaded, exp),
        Kind::Periodic => periodic(loaded, exp),
        Kind::HyperbolicSearch => hyperbolic(loaded, exp),
        Kind::Whitehead => whitehead_report(loaded, exp),
        Kind::Primitive => primitive(loaded, exp, &mut rng),
        Kind::Intersection => intersection(loaded, exp),
        Kind::FixedPoints => fixed_points(loaded, exp),
        Kind::Exceptional => exceptional(loaded, exp),
    }?;
    let mut report = json!({ "name": exp.name, "kind": exp.kind, "parameters": exp });
    let map = report.as_object_mut().expect("object");
    map.insert("result".into(), body.report);
    Ok(Artifacts { report, csv: body.csv })
}

fn plain(report: Value) -> Outcome {
    Ok(Artifacts { report, csv: None })
}

fn profile_json(p: &FrequencyProfile) -> Value {
    json!({
        "words": p.words().iter().map(Word::to_string).collect::<Vec<_>>(),
        "values": p.values(),
    })
}

fn letter_str(l: Letter) -> String {
    letter_char(l).to_string()
}

fn orbit(loaded: &Loaded, exp: &Experiment) -> Outcome {
    let phi = loaded.automorphism(exp);
    let seed = &loaded.seeds[exp.seed.as_deref().expect("validated")];
    let n = exp.n.expect("validated");
    let level = exp.level.expect("validated");
    let tol = exp.tol.unwrap_or(DEFAULT_TOL);
    let report = dynamics::orbit(&phi, seed, n, level).map_err(err)?;
    let conv = dynamics::detect_convergence(&report, tol);
    let words: Vec<String> = report.states[0].profile.words().iter().map(Word::to_string).collect();
    let steps: Vec<Value> = report
        .states
        .iter()
        .enumerate()
        .map(|(k, s)| {
            json!({
                "step": k,
                "weight": s.weight.to_string(),
                "growth_ratio": k.checked_sub(1).map(|j| report.growth_ratio[j]),
                "distance": k.checked_sub(1).map(|j| report.successive_distance[j]),
                "profile": s.profile.values(),
            })
        })
        .collect();
    let csv = exp.csv.then(|| {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["step", "weight_num", "weight_den", "ratio", "distance"];
        header.extend(words.iter().map(String::as_str));
        w.write_record(&header).expect("in-memory write");
        for (k, s) in report.states.iter().enumerate() {
            let mut row = vec![
                k.to_string(),
                s.weight.numer().to_string(),
                s.weight.denom().to_string(),
                k.checked_sub(1).map_or(String::new(), |j| csv_float(report.growth_ratio[j])),
                k.checked_sub(1).map_or(String::new(), |j| csv_float(report.successive_distance[j])),
            ];
            row.extend(s.profile.values().iter().map(|&x| csv_float(x)));
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
    });
    Ok(Artifacts {
        report: json!({
            "words": words,
            "steps": steps,
            "converged_at": conv.converged_at,
            "tol": tol,
            "limit": profile_json(&conv.limit),
        }),
        csv,
    })
}

fn dilatation(loaded: &Loaded, exp: &Experiment) -> Outcome {
    let phi = loaded.automorphism(exp);
    let seed = &loaded.seeds[exp.seed.as_deref().expect("validated")];
    let burn_in = exp.burn_in.unwrap_or(DEFAULT_BURN_IN);
    let report = dynamics::orbit(&phi, seed, exp.n.expect("validated"), exp.level.unwrap_or(1)).map_err(err)?;
    let estimate = dynamics::estimate_dilatation(&report, burn_in).map_err(err)?;
    let matrix = dynamics::transition_matrix(&phi);
    let pf = matrix.pf_eigenvalue();
    plain(json!({
        "estimate": estimate,
        "burn_in": burn_in,
        "growth_ratios": report.growth_ratio,
        "transition_matrix": matrix.entries,
        "pf_eigenvalue": pf.eigenvalue,
        "pf_iterations": pf.iterations,
        "matrix_primitive": pf.primitive,
        "abs_difference": (estimate - pf.eigenvalue).abs(),
    }))
}

fn boundary(loaded: &Loaded, exp: &Experiment) -> Outcome {
    let phi = loaded.automorphism(exp);
    let verdicts = loaded
        .boundary_words(exp)
        .iter()
        .map(|w| {
            let v = dynamics::boundary_class_test(&phi, w).map_err(err)?;
            Ok(json!({ "word": w.to_string(), "class": CyclicWord::of(w).to_string(), "verdict": v }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    plain(json!({ "verdicts": verdicts }))
}

fn certificate_json(c: &PeriodicClassCertificate) -> Value {
    json!({
        "findings": c.findings.iter().map(|(w, p)| json!({"class": w.to_string(), "period": p})).collect::<Vec<_>>(),
        "classes_examined": c.classes_examined,
        "exhaustive": c.exhaustive,
        "empty": c.is_empty(),
    })
}

fn periodic(loaded: &Loaded, exp: &Experiment) -> Outcome {
    let phi = loaded.automorphism(exp);
    let cert = dynamics::periodic_class_search_with_budget(
        &phi,
        exp.max_len.expect("validated"),
        exp.p.expect("validated"),
        exp.budget,
    )
    .map_err(err)?;
    plain(certificate_json(&cert))
}

fn hyperbolic(loaded: &Loaded, exp: &Experiment) -> Outcome {
    let phi = loaded.automorphism(exp);
    let psi = &loaded.automorphisms[exp.psi.as_deref().expect("validated")];
    let boundary = &loaded.boundary_words(exp)[0];
    let params = HyperbolicSearchParams {
        m_max: exp.m_max.expect("validated"),
        max_len: exp.max_len.expect("validated"),
        max_period: exp.p.expect("validated"),
        budget: exp.budget.expect("validated"),
    };
    let report = dynamics::hyperbolic_candidate_search(&phi, psi, boundary, &params).map_err(err)?;
    let certs: Vec<Value> = report
        .certificates
        .iter()
        .map(|(m, c)| {
            let mut v = certificate_json(c);
            v["m"] = json!(m);
            v
        })
        .collect();
    plain(json!({ "boundary": boundary.to_string(), "certificates": certs, "least_m": report.least_m }))
}

fn whitehead_report(loaded: &Loaded, exp: &Experiment) -> Outcome {
    let rank = loaded.config.rank;
    let graphs = exp
        .words
        .iter()
        .map(|s| {
            let c = CyclicWord::of(&Word::parse(s, rank).map_err(err)?);
            let g = WhiteheadGraph::of(&c).map_err(err)?;
            let red = whitehead::whitehead_reduce(&c).map_err(err)?;
            Ok(json!({
                "word": s,
                "class": c.to_string(),
                "edges": g.edges().map(|((x, y), m)| json!([letter_str(x), letter_str(y), m])).collect::<Vec<_>>(),
                "connected": g.is_connected(),
                "cut_vertices": g.cut_vertices().into_iter().map(letter_str).collect::<Vec<_>>(),
                "obstruction": g.minimal_set_obstruction(),
                "dot": g.to_dot(),
                "minimal_length": red.minimal_length,
                "minimal_class": red.minimal_class.to_string(),
                "witness": red.witness.iter().map(|m| json!({"multiplier": letter_str(m.multiplier), "subset": m.subset})).collect::<Vec<_>>(),
            }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    plain(json!({ "graphs": graphs }))
}

fn primitive(loaded: &Loaded, exp: &Experiment, rng: &mut CounterRng) -> Outcome {
    let rank = loaded.config.rank;
    let mut words: Vec<(Word, &str)> =
        exp.words.iter().map(|s| Word::parse(s, rank).map(|w| (w, "config"))).collect::<Result<_, _>>().map_err(err)?;
    if let (Some(count), Some(len)) = (exp.random_count, exp.random_length) {
        words.extend((0..count).map(|_| (rng.word(rank, len), "random")));
    }
    let rows = words
        .iter()
        .map(|(w, source)| {
            Ok(json!({ "word": w.to_string(), "source": source, "primitive": whitehead::is_primitive(w).map_err(err)? }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    plain(json!({ "words": rows }))
}

fn exact_json(q: &currents_core::Rational) -> Value {
    use num_traits::ToPrimitive;
    json!({ "exact": q.to_string(), "approx": q.to_f64() })
}

fn intersection(loaded: &Loaded, exp: &Experiment) -> Outcome {
    let tree = &loaded.trees[exp.tree.as_deref().expect("validated")];
    let phi = exp.automorphism.as_ref().map(|_| loaded.automorphism(exp));
    let acted_tree = phi.as_ref().map(|p| tree.act(p)).transpose().map_err(err)?;
    let rows = exp
        .seeds
        .iter()
        .map(|name| {
            let nu = &loaded.seeds[name];
            let mut row = json!({ "seed": name, "value": exact_json(&tree.intersection(nu).map_err(err)?) });
            if let (Some(p), Some(t)) = (&phi, &acted_tree) {
                let lhs = t.intersection(nu).map_err(err)?;
                let rhs = tree.intersection(&nu.act(p).map_err(err)?).map_err(err)?;
                row["tree_acted"] = exact_json(&lhs);
                row["current_acted"] = exact_json(&rhs);
                row["equal"] = json!(lhs == rhs);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, String>>()?;
    plain(json!({ "pairings": rows }))
}

fn fixed_points(loaded: &Loaded, exp: &Experiment) -> Outcome {
    let phi = loaded.automorphism(exp);
    let currents: Vec<RationalCurrent> = exp.seeds.iter().map(|s| loaded.seeds[s].clone()).collect();
    let statuses = dynamics::fixed_point_check(&phi, &currents, exp.level.expect("validated")).map_err(err)?;
    let rows: Vec<Value> = exp.seeds.iter().zip(statuses).map(|(s, st)| json!({ "seed": s, "status": st })).collect();
    plain(json!({ "statuses": rows }))
}

fn exceptional(loaded: &Loaded, exp: &Experiment) -> Outcome {
    let phi = loaded.automorphism(exp);
    let params = ExceptionalParams {
        steps: exp.n.expect("validated"),
        level: exp.level.expect("validated"),
        tol: exp.tol.unwrap_or(DEFAULT_TOL),
        separation_threshold: exp.threshold.expect("validated"),
    };
    let r = dynamics::exceptional_orbit_check(
        &phi,
        loaded.boundary_words(exp),
        &loaded.seeds[exp.boundary_seed.as_deref().expect("validated")],
        &loaded.seeds[exp.seed.as_deref().expect("validated")],
        &params,
    )
    .map_err(err)?;
    plain(json!({
        "boundary_converged_at": r.boundary_converged_at,
        "boundary_stationary": r.boundary_stationary,
        "generic_converged_at": r.generic_converged_at,
        "separation": r.separation,
        "threshold": r.threshold,
        "degenerate": r.degenerate,
        "separated": r.separated,
        "boundary_limit": profile_json(&r.boundary_limit),
        "generic_limit": profile_json(&r.generic_limit),
    }))
}
