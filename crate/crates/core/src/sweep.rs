//! Enumerate small pure models and run the full pipeline on each
//! certified one, looking for counterexamples.
//!
//! A pure model here has even generators that are cocycles and odd
//! generators whose differentials are homogeneous of a common word length
//! in the evens. Candidates are deduplicated by a canonical form: even
//! generators are permuted within equal degrees, each odd differential is
//! scaled to a primitive integer vector with positive leading coefficient,
//! and odd differentials of equal degree are sorted.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conjecture::{analyze, reproducer, ConjectureReport};
use crate::dga::SullivanPresentation;
use crate::gca::{Generator, Monomial, Polynomial};
use crate::linalg::q;
use crate::parser::serialize_model;
use crate::{Error, Result};

pub const GUARD_MAX_EVEN: usize = 3;
pub const GUARD_MAX_ODD: usize = 4;
pub const GUARD_MAX_DEGREE: u32 = 10;
pub const GUARD_MAX_COEFFICIENT: i64 = 3;
pub const GUARD_MAX_CANDIDATES: u128 = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepSpec {
    pub max_even: usize,
    pub max_odd: usize,
    pub max_degree: u32,
    /// Only quadratic differentials; otherwise word lengths 2 and 3.
    pub coformal_only: bool,
    /// Seeds the subsample when `sample` is set.
    pub seed: u64,
    /// Coefficients range over -c..=c.
    pub coefficient_bound: i64,
    /// Analyze a random subset of this size instead of every candidate.
    pub sample: Option<usize>,
}

impl SweepSpec {
    pub fn new(max_even: usize, max_odd: usize, max_degree: u32, coformal_only: bool) -> Self {
        SweepSpec {
            max_even,
            max_odd,
            max_degree,
            coformal_only,
            seed: 0,
            coefficient_bound: 1,
            sample: None,
        }
    }

    fn lengths(&self) -> Vec<u32> {
        if self.coformal_only {
            vec![2]
        } else {
            vec![2, 3]
        }
    }

    pub fn check_guard(&self) -> Result<()> {
        let fail = |m: String| Err(Error::GuardExceeded(m));
        if self.max_even > GUARD_MAX_EVEN {
            return fail(format!("max even {} > {GUARD_MAX_EVEN}", self.max_even));
        }
        if self.max_odd > GUARD_MAX_ODD {
            return fail(format!("max odd {} > {GUARD_MAX_ODD}", self.max_odd));
        }
        if self.max_degree > GUARD_MAX_DEGREE {
            return fail(format!(
                "max degree {} > {GUARD_MAX_DEGREE}",
                self.max_degree
            ));
        }
        if !(0..=GUARD_MAX_COEFFICIENT).contains(&self.coefficient_bound) {
            return fail(format!(
                "coefficient bound {} outside 0..={GUARD_MAX_COEFFICIENT}",
                self.coefficient_bound
            ));
        }
        let n = self.raw_candidate_count();
        if n > GUARD_MAX_CANDIDATES {
            return fail(format!("{n} raw candidates > {GUARD_MAX_CANDIDATES}"));
        }
        Ok(())
    }

    /// Number of (shape, differential) combinations before deduplication.
    pub fn raw_candidate_count(&self) -> u128 {
        let mut total = 0u128;
        for (evens, odds) in self.shapes() {
            for &l in &self.lengths() {
                let mut n = 1u128;
                for &b in &odds {
                    let m = pure_monomials(&evens, l, b + 1).len() as u32;
                    n = n.saturating_mul(
                        primitive_vectors(m as usize, self.coefficient_bound).len() as u128,
                    );
                }
                total = total.saturating_add(n);
            }
        }
        total
    }

    fn shapes(&self) -> Vec<(Vec<u32>, Vec<u32>)> {
        let even_degrees: Vec<u32> = (2..=self.max_degree).step_by(2).collect();
        let odd_degrees: Vec<u32> = (3..=self.max_degree).step_by(2).collect();
        let mut out = Vec::new();
        for ne in 0..=self.max_even {
            for evens in even_degrees
                .iter()
                .copied()
                .combinations_with_replacement(ne)
            {
                for no in 0..=self.max_odd {
                    for odds in odd_degrees
                        .iter()
                        .copied()
                        .combinations_with_replacement(no)
                    {
                        if ne + no > 0 {
                            out.push((evens.clone(), odds));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Exponent vectors over the evens of word length `l` and degree `t`,
/// in descending lex order.
fn pure_monomials(evens: &[u32], l: u32, t: u32) -> Vec<Vec<u32>> {
    fn rec(evens: &[u32], i: usize, l: u32, t: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == evens.len() {
            if l == 0 && t == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in (0..=l).rev() {
            if e * evens[i] > t {
                continue;
            }
            cur.push(e);
            rec(evens, i + 1, l - e, t - e * evens[i], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(evens, 0, l, t, &mut Vec::new(), &mut out);
    out
}

/// Integer vectors with entries in -c..=c that are zero or primitive with
/// a positive first nonzero entry.
fn primitive_vectors(m: usize, c: i64) -> Vec<Vec<i64>> {
    (0..m)
        .map(|_| -c..=c)
        .multi_cartesian_product()
        .filter(|v| normalized(v).as_ref() == Some(v))
        .collect()
}

fn normalized(v: &[i64]) -> Option<Vec<i64>> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        return Some(v.to_vec());
    }
    let lead = *v.iter().find(|&&x| x != 0)?;
    let g = if lead < 0 { -g } else { g };
    Some(v.iter().map(|x| x / g).collect())
}

type Terms = Vec<(Vec<u32>, i64)>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Candidate {
    evens: Vec<u32>,
    odds: Vec<u32>,
    diffs: Vec<Terms>,
}

fn normalize_terms(mut t: Terms) -> Terms {
    t.retain(|(_, c)| *c != 0);
    t.sort_by(|a, b| b.0.cmp(&a.0));
    let coeffs: Vec<i64> = t.iter().map(|(_, c)| *c).collect();
    if let Some(n) = normalized(&coeffs) {
        for ((_, c), nc) in t.iter_mut().zip(n) {
            *c = nc;
        }
    }
    t
}

fn canonical(c: &Candidate) -> Candidate {
    let blocks: Vec<Vec<usize>> = (0..c.evens.len())
        .chunk_by(|&i| c.evens[i])
        .into_iter()
        .map(|(_, g)| g.collect())
        .collect();
    let perms = blocks
        .iter()
        .map(|b| b.iter().copied().permutations(b.len()).collect::<Vec<_>>())
        .multi_cartesian_product();
    let mut best: Option<Candidate> = None;
    for choice in perms {
        // sigma[old] = new
        let mut sigma = vec![0; c.evens.len()];
        for (block, perm) in blocks.iter().zip(&choice) {
            for (&old, &new) in block.iter().zip(perm) {
                sigma[old] = new;
            }
        }
        let mut diffs: Vec<Terms> = c
            .diffs
            .iter()
            .map(|t| {
                normalize_terms(
                    t.iter()
                        .map(|(e, k)| {
                            let mut ne = vec![0; e.len()];
                            for (i, &x) in e.iter().enumerate() {
                                ne[sigma[i]] = x;
                            }
                            (ne, *k)
                        })
                        .collect(),
                )
            })
            .collect();
        let mut start = 0;
        while start < diffs.len() {
            let end = (start..diffs.len())
                .find(|&j| c.odds[j] != c.odds[start])
                .unwrap_or(diffs.len());
            diffs[start..end].sort();
            start = end;
        }
        let cand = Candidate {
            evens: c.evens.clone(),
            odds: c.odds.clone(),
            diffs,
        };
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    best.unwrap_or_else(|| c.clone())
}

fn enumerate(spec: &SweepSpec) -> (u128, BTreeSet<Candidate>) {
    let mut raw = 0u128;
    let mut seen = BTreeSet::new();
    for (evens, odds) in spec.shapes() {
        for &l in &spec.lengths() {
            let per_odd: Vec<Vec<Terms>> = odds
                .iter()
                .map(|&b| {
                    let monos = pure_monomials(&evens, l, b + 1);
                    primitive_vectors(monos.len(), spec.coefficient_bound)
                        .into_iter()
                        .map(|v| normalize_terms(monos.iter().cloned().zip(v).collect()))
                        .collect()
                })
                .collect();
            let combos: Box<dyn Iterator<Item = Vec<Terms>>> = if per_odd.is_empty() {
                Box::new(std::iter::once(Vec::new()))
            } else {
                Box::new(per_odd.into_iter().multi_cartesian_product())
            };
            for diffs in combos {
                raw += 1;
                seen.insert(canonical(&Candidate {
                    evens: evens.clone(),
                    odds: odds.clone(),
                    diffs,
                }));
            }
        }
    }
    (raw, seen)
}

fn build(c: &Candidate, id: &str) -> SullivanPresentation {
    let ne = c.evens.len();
    let n = ne + c.odds.len();
    let mut gens: Vec<Generator> = (0..ne)
        .map(|i| Generator::new(format!("x{}", i + 1), c.evens[i]))
        .collect();
    gens.extend(
        c.odds
            .iter()
            .enumerate()
            .map(|(j, &b)| Generator::new(format!("y{}", j + 1), b)),
    );
    let mut diffs = vec![Polynomial::zero(); ne];
    for t in &c.diffs {
        let mut p = Polynomial::zero();
        for (e, k) in t {
            let mut full = e.clone();
            full.resize(n, 0);
            p.add_term(Monomial::from_exponents(full), q(*k));
        }
        diffs.push(p);
    }
    SullivanPresentation::new(Some(id.to_string()), gens, diffs)
        .expect("sweep models are well formed")
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepFinding {
    pub id: String,
    pub model: String,
    pub report: Option<ConjectureReport>,
    /// Set when the pipeline itself failed on a certified model.
    pub error: Option<String>,
    pub reproducer: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub spec: SweepSpec,
    pub raw_candidates: u128,
    pub distinct: usize,
    pub analyzed: usize,
    pub certified: usize,
    pub uncertified: usize,
    pub certified_ids: Vec<String>,
    pub findings: Vec<SweepFinding>,
}

impl SweepReport {
    pub fn clean(&self) -> bool {
        self.findings.is_empty()
    }
}

enum Outcome {
    Uncertified,
    Certified(Box<ConjectureReport>),
    Failed(Error),
}

/// The distinct candidate models in canonical order, named `sweep-NNNNN`,
/// with the raw count before deduplication.
pub fn enumerate_models(spec: &SweepSpec) -> Result<(u128, Vec<SullivanPresentation>)> {
    spec.check_guard()?;
    let (raw, seen) = enumerate(spec);
    let models = seen
        .iter()
        .enumerate()
        .map(|(i, c)| build(c, &format!("sweep-{i:05}")))
        .collect();
    Ok((raw, models))
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    let (raw, all) = enumerate_models(spec)?;
    let distinct = all.len();
    let mut models: Vec<(String, SullivanPresentation)> = all
        .into_iter()
        .map(|p| (p.name().unwrap_or_default().to_string(), p))
        .collect();
    if let Some(k) = spec.sample.filter(|&k| k < models.len()) {
        let mut rng = StdRng::seed_from_u64(spec.seed);
        let mut picks = rand::seq::index::sample(&mut rng, models.len(), k).into_vec();
        picks.sort_unstable();
        models = picks.into_iter().map(|i| models[i].clone()).collect();
    }

    let outcomes: Vec<Outcome> = models
        .par_iter()
        .map(|(_, p)| {
            if p.dim_odd() < p.dim_even() {
                return Outcome::Uncertified;
            }
            match analyze(p, None) {
                Ok(a) => Outcome::Certified(Box::new(a.report)),
                Err(Error::NotCertified) => Outcome::Uncertified,
                Err(e) => Outcome::Failed(e),
            }
        })
        .collect();

    let mut report = SweepReport {
        spec: spec.clone(),
        raw_candidates: raw,
        distinct,
        analyzed: models.len(),
        certified: 0,
        uncertified: 0,
        certified_ids: Vec::new(),
        findings: Vec::new(),
    };
    for ((id, p), o) in models.iter().zip(outcomes) {
        match o {
            Outcome::Uncertified => report.uncertified += 1,
            Outcome::Certified(r) => {
                report.certified += 1;
                report.certified_ids.push(id.clone());
                if r.violated() {
                    report.findings.push(SweepFinding {
                        id: id.clone(),
                        model: serialize_model(p),
                        reproducer: reproducer(p, &r),
                        report: Some(*r),
                        error: None,
                    });
                }
            }
            Outcome::Failed(e) => {
                let model = serialize_model(p);
                report.findings.push(SweepFinding {
                    id: id.clone(),
                    reproducer: format!("{model}# pipeline error: {e}\n"),
                    model,
                    report: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials_and_vectors() {
        assert_eq!(
            pure_monomials(&[2, 2], 2, 4),
            vec![vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert_eq!(pure_monomials(&[2, 4], 2, 6), vec![vec![1, 1]]);
        assert!(pure_monomials(&[2], 2, 6).is_empty());
        // 3^3 = 27 vectors: zero plus 26 / 2 primitive up to sign.
        assert_eq!(primitive_vectors(3, 1).len(), 14);
        assert_eq!(primitive_vectors(0, 1), vec![Vec::<i64>::new()]);
    }

    #[test]
    fn canonical_merges_even_swaps() {
        // dz = x1^2 and dz = x2^2 over two degree-2 evens are the same model.
        let a = Candidate {
            evens: vec![2, 2],
            odds: vec![3],
            diffs: vec![vec![(vec![2, 0], 1)]],
        };
        let b = Candidate {
            evens: vec![2, 2],
            odds: vec![3],
            diffs: vec![vec![(vec![0, 2], -1)]],
        };
        assert_eq!(canonical(&a), canonical(&b));
    }

    #[test]
    fn empty_and_odd_free_bounds() {
        let r = run_sweep(&SweepSpec::new(0, 0, 6, true)).unwrap();
        assert_eq!((r.distinct, r.certified), (0, 0));
        let r = run_sweep(&SweepSpec::new(2, 0, 6, true)).unwrap();
        assert!(r.distinct > 0);
        assert_eq!(r.certified, 0);
    }

    #[test]
    fn guard() {
        assert!(matches!(
            SweepSpec::new(9, 1, 6, true).check_guard(),
            Err(Error::GuardExceeded(_))
        ));
        assert!(SweepSpec::new(1, 1, 4, true).check_guard().is_ok());
    }

    #[test]
    fn small_sweep_finds_spheres() {
        let r = run_sweep(&SweepSpec::new(1, 1, 4, true)).unwrap();
        // S^3 and the 2-sphere Λ(x₂, y₃), dy = x², among others.
        assert!(r.certified >= 2, "{r:?}");
        assert!(r.clean());
    }
}
