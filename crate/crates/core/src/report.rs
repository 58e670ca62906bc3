//! Text tables and machine-readable records.
//!
//! A record is one JSON object on one line with a `version` stamp and a
//! `kind`. Rational coefficients are written as "p/q" strings.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cohomology::Cohomology;
use crate::conjecture::{Analysis, ConjectureReport};
use crate::dga::{SullivanPresentation, ValidationReport};
use crate::gca::Polynomial;
use crate::gysin::ExactnessReport;
use crate::invariants::ToomerReport;
use crate::linalg::Q;
use crate::Error;

pub const RECORD_VERSION: u32 = 1;

pub fn rational(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Exact terms of a polynomial, highest monomial first.
pub fn terms(p: &Polynomial, gens: &SullivanPresentation) -> Vec<Value> {
    p.terms()
        .rev()
        .map(|(m, c)| {
            json!({
                "monomial": m.display(gens.generators()).to_string(),
                "coefficient": rational(c),
            })
        })
        .collect()
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn envelope(kind: &str, p: &SullivanPresentation) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("version".into(), json!(RECORD_VERSION));
    m.insert("kind".into(), json!(kind));
    m.insert("model".into(), json!(p.name()));
    m
}

/// Short machine status for a pipeline error.
pub fn error_status(e: &Error) -> &'static str {
    match e {
        Error::NotCertified => "NOT_CERTIFIED",
        Error::NotHomogeneous => "NOT_HOMOGENEOUS",
        Error::FirstGeneratorOdd(_) => "FIRST_GENERATOR_ODD",
        Error::ToomerMismatch { .. }
        | Error::InternalInconsistency(_)
        | Error::LiftNotDivisible(_) => "INCONSISTENT",
        _ => "ERROR",
    }
}

pub fn check_status(r: &ConjectureReport) -> &'static str {
    if r.violated() {
        "VIOLATED"
    } else {
        "PASS"
    }
}

pub fn validation_record(p: &SullivanPresentation, r: &ValidationReport) -> Value {
    let mut m = envelope("validate", p);
    m.insert("ok".into(), json!(r.ok()));
    m.insert("violations".into(), to_value(&r.violations));
    Value::Object(m)
}

pub fn validation_text(r: &ValidationReport) -> String {
    if r.ok() {
        return "ok\n".into();
    }
    let mut s = String::new();
    for v in &r.violations {
        let _ = write!(s, "{}: generator {}", v.rule.id(), v.generator);
        if let Some(w) = &v.witness {
            let _ = write!(s, " (witness {w})");
        }
        s.push('\n');
    }
    s
}

pub fn check_record(p: &SullivanPresentation, result: &Result<Analysis, Error>) -> Value {
    let mut m = envelope("check", p);
    match result {
        Ok(a) => {
            m.insert("status".into(), json!(check_status(&a.report)));
            if let Value::Object(r) = to_value(&a.report) {
                for (k, v) in r {
                    if k != "model" {
                        m.insert(k, v);
                    }
                }
            }
            if let Some(w) = &a.certificate.fundamental_class {
                m.insert("fundamental_class".into(), Value::Array(terms(w, p)));
            }
        }
        Err(e) => {
            m.insert("status".into(), json!(error_status(e)));
            m.insert("error".into(), json!(e.to_string()));
        }
    }
    Value::Object(m)
}

pub fn check_text(p: &SullivanPresentation, a: &Analysis) -> String {
    let r = &a.report;
    let gens = p.generators();
    let mut s = String::new();
    let _ = writeln!(s, "model            {}", p.name().unwrap_or("-"));
    let _ = writeln!(s, "status           {}", check_status(r));
    let _ = writeln!(s, "formal dimension {}", r.formal_dimension);
    let _ = writeln!(s, "dims H^0..H^N    {:?}", r.dims);
    if let Some(w) = &a.certificate.fundamental_class {
        let _ = writeln!(s, "fundamental      {}", w.display(gens));
    }
    let _ = writeln!(
        s,
        "word length l    {}{}",
        r.word_length,
        if r.coformal { " (coformal)" } else { "" }
    );
    let _ = writeln!(s, "e (formula)      {}", r.e);
    let _ = writeln!(s, "e (quotients)    {}", r.e_direct);
    let _ = writeln!(s, "k   dim H_k^*");
    for (k, d) in &r.per_k_dims {
        let _ = writeln!(s, "{k:<3} {d}");
    }
    let _ = writeln!(
        s,
        "no-gap           {}{}",
        r.felix_no_gap,
        if r.gaps.is_empty() {
            String::new()
        } else {
            format!(" gaps {:?}", r.gaps)
        }
    );
    let _ = writeln!(
        s,
        "lupton           {}",
        to_value(&r.lupton_status).as_str().unwrap_or_default()
    );
    if let Some(w) = &r.truncated_poly_witness {
        let _ = writeln!(
            s,
            "witness          [{}] in degree {}, power {}",
            w.generator, w.degree, w.power
        );
    }
    let _ = writeln!(
        s,
        "hilali           {} ({} >= {})",
        r.hilali.holds, r.hilali.dim_h, r.hilali.dim_v
    );
    let _ = writeln!(
        s,
        "kernel           {} {:?}",
        to_value(&r.kernel.parity).as_str().unwrap_or_default(),
        r.kernel.cocycle_generators
    );
    let _ = writeln!(
        s,
        "branch           {}",
        to_value(&r.branch).as_str().unwrap_or_default()
    );
    s
}

fn cells_json(h: &Cohomology) -> Vec<Value> {
    let p = h.presentation();
    h.cells()
        .filter(|c| c.dim() > 0)
        .map(|c| {
            json!({
                "degree": c.degree,
                "length": c.length,
                "dim": c.dim(),
                "representatives": c.representatives.iter().map(|r| terms(r, p)).collect::<Vec<_>>(),
            })
        })
        .collect()
}

pub fn cohomology_record(h: &Cohomology) -> Value {
    let p = h.presentation();
    let mut m = envelope("cohomology", p);
    m.insert("max_degree".into(), json!(h.max_degree()));
    m.insert(
        "bigraded".into(),
        json!(h.cells().any(|c| c.length.is_some())),
    );
    m.insert("dims".into(), json!(h.dims()));
    m.insert("cells".into(), Value::Array(cells_json(h)));
    Value::Object(m)
}

pub fn cohomology_text(h: &Cohomology, bigraded: bool) -> String {
    let gens = h.presentation().generators();
    let mut s = String::new();
    if bigraded {
        let _ = writeln!(s, "deg len dim representatives");
    } else {
        let _ = writeln!(s, "deg dim representatives");
    }
    for i in 0..=h.max_degree() {
        let cells: Vec<_> = h.cells().filter(|c| c.degree == i && c.dim() > 0).collect();
        if cells.is_empty() {
            if !bigraded {
                let _ = writeln!(s, "{i:<3} 0");
            }
            continue;
        }
        for c in cells {
            let reps: Vec<String> = c
                .representatives
                .iter()
                .map(|r| r.display(gens).to_string())
                .collect();
            if bigraded {
                let _ = writeln!(
                    s,
                    "{i:<3} {:<3} {:<3} {}",
                    c.length.unwrap_or(0),
                    c.dim(),
                    reps.join(", ")
                );
            } else {
                let _ = writeln!(s, "{i:<3} {:<3} {}", c.dim(), reps.join(", "));
            }
        }
    }
    s
}

pub fn exactness_record(p: &SullivanPresentation, r: &ExactnessReport) -> Value {
    let mut m = envelope("gysin", p);
    if let Value::Object(o) = to_value(r) {
        m.extend(o);
    }
    Value::Object(m)
}

pub fn exactness_text(r: &ExactnessReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "degree bound {}, shift 2r = {}, word length {}",
        r.max_degree, r.shift, r.word_length
    );
    let checked = r.nodes.len();
    let failed: Vec<_> = r.failures().collect();
    let _ = writeln!(s, "{checked} nodes checked, {} inexact", failed.len());
    for n in failed {
        let _ = writeln!(
            s,
            "  inexact {:?} at ({}, {}): rank in {} vs kernel out {}",
            n.node, n.degree, n.length, n.rank_in, n.kernel_out
        );
    }
    let bad: Vec<_> = r.composites.iter().filter(|c| !c.zero).collect();
    let _ = writeln!(
        s,
        "{} composites checked, {} nonzero",
        r.composites.len(),
        bad.len()
    );
    for c in bad {
        let _ = writeln!(
            s,
            "  nonzero {} at ({}, {})",
            c.composite, c.degree, c.length
        );
    }
    let _ = writeln!(s, "{}", if r.overall { "exact" } else { "NOT exact" });
    s
}

pub fn toomer_record(
    p: &SullivanPresentation,
    r: &ToomerReport,
    classes: &[(u32, usize, u32)],
) -> Value {
    let mut m = envelope("toomer", p);
    if let Value::Object(o) = to_value(r) {
        m.extend(o);
    }
    m.insert(
        "classes".into(),
        Value::Array(
            classes
                .iter()
                .map(|(d, j, e)| json!({"degree": d, "index": j, "e0": e}))
                .collect(),
        ),
    );
    Value::Object(m)
}

pub fn toomer_text(r: &ToomerReport, classes: &[(u32, usize, u32)]) -> String {
    let mut s = String::new();
    match r.e_formula {
        Some(e) => {
            let _ = writeln!(s, "e (formula)   {e}");
        }
        None => {
            let _ = writeln!(s, "e (formula)   n/a (not homogeneous)");
        }
    }
    let _ = writeln!(s, "e (quotients) {}", r.e_direct);
    if let Some(k) = r.fundamental_length {
        let _ = writeln!(s, "fundamental class word length {k}");
    }
    let _ = writeln!(s, "n   survives");
    for (n, ok) in &r.per_n_survival {
        let _ = writeln!(s, "{n:<3} {ok}");
    }
    let _ = writeln!(s, "basis class e0 (degree, index: e0)");
    for (d, j, e) in classes {
        let _ = writeln!(s, "  {d}, {j}: {e}");
    }
    let _ = writeln!(s, "{}", if r.agrees { "agree" } else { "DISAGREE" });
    s
}
