//! Minimal Sullivan algebras (ΛV, d): the presentation, its validation, the
//! derivation extension of `d`, homogeneous word length and the quotient by
//! the ideal generated by the first generator.

use std::collections::HashSet;
use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gca::{monomial_basis, Generator, Monomial, Polynomial};
use crate::linalg::Q;

/// Generators sorted by (degree, declaration order) together with `d` on each generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SullivanPresentation {
    name: Option<String>,
    generators: Vec<Generator>,
    differentials: Vec<Polynomial>,
}

impl SullivanPresentation {
    /// Builds a presentation from generators in declaration order and their
    /// differentials, written over that same order. Generators are then
    /// stably re-sorted by degree, so the first one always has minimal degree.
    pub fn new(
        name: Option<String>,
        generators: Vec<Generator>,
        differentials: Vec<Polynomial>,
    ) -> Result<Self> {
        if generators.len() != differentials.len() {
            return Err(Error::InvalidPresentation(format!(
                "{} generators but {} differentials",
                generators.len(),
                differentials.len()
            )));
        }
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(Error::InvalidPresentation(format!(
                    "generator `{}` declared twice",
                    g.name
                )));
            }
        }
        let n = generators.len();
        for d in &differentials {
            if d.terms().any(|(m, _)| m.arity() != n) {
                return Err(Error::InvalidPresentation(
                    "differential written over a different generator list".into(),
                ));
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| generators[i].degree);
        let mut new_id = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new;
        }
        let sorted_gens: Vec<Generator> = order.iter().map(|&i| generators[i].clone()).collect();
        let sorted_diffs = order
            .iter()
            .map(|&i| reindex(&sorted_gens, &differentials[i], &new_id, n))
            .collect();
        Ok(SullivanPresentation {
            name,
            generators: sorted_gens,
            differentials: sorted_diffs,
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn arity(&self) -> usize {
        self.generators.len()
    }

    pub fn differential(&self, id: usize) -> &Polynomial {
        &self.differentials[id]
    }

    pub fn generator_id(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn dim_odd(&self) -> usize {
        self.generators.iter().filter(|g| g.is_odd()).count()
    }

    pub fn dim_even(&self) -> usize {
        self.generators.len() - self.dim_odd()
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.generators.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    /// Generators whose differential vanishes.
    pub fn cocycle_generators(&self) -> Vec<usize> {
        (0..self.arity())
            .filter(|&i| self.differentials[i].is_zero())
            .collect()
    }

    /// `d` on a single monomial, by the graded Leibniz rule over the
    /// canonical factor order.
    pub fn differential_of_monomial(&self, m: &Monomial) -> Polynomial {
        let n = self.arity();
        let gens = &self.generators;
        let mut out = Polynomial::zero();
        let mut prefix_degree = 0u32;
        for i in 0..n {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let dg = &self.differentials[i];
            if !dg.is_zero() {
                let mut pre = vec![0; n];
                pre[..i].copy_from_slice(&m.exponents()[..i]);
                let mut post = m.exponents().to_vec();
                post[..i].iter_mut().for_each(|x| *x = 0);
                post[i] -= 1;
                let mut coeff = Q::from_integer(e.into());
                if prefix_degree % 2 == 1 {
                    coeff = -coeff;
                }
                let term = Polynomial::monomial(Monomial::from_exponents(pre), coeff)
                    .mul(gens, dg)
                    .mul(
                        gens,
                        &Polynomial::monomial(Monomial::from_exponents(post), Q::one()),
                    );
                out = out.add(&term);
            }
            prefix_degree += e * gens[i].degree;
        }
        out
    }

    /// Extends `d` to all of ΛV as a degree +1 derivation.
    pub fn apply_differential(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            out = out.add(&self.differential_of_monomial(m).scale(c));
        }
        out
    }

    pub fn is_zero_differential(&self) -> bool {
        self.differentials.iter().all(Polynomial::is_zero)
    }

    /// The same algebra with generators declared in a different order.
    /// `order[k]` is the current id of the generator declared k-th.
    pub fn redeclared(&self, order: &[usize]) -> Result<Self> {
        let n = self.arity();
        assert_eq!(order.len(), n);
        let mut new_id = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new;
        }
        let gens: Vec<Generator> = order.iter().map(|&i| self.generators[i].clone()).collect();
        let diffs = order
            .iter()
            .map(|&i| reindex(&gens, &self.differentials[i], &new_id, n))
            .collect();
        SullivanPresentation::new(self.name.clone(), gens, diffs)
    }
}

/// Renames generator ids in `p` via `new_id`, restoring canonical order and Koszul signs.
fn reindex(gens_new: &[Generator], p: &Polynomial, new_id: &[usize], arity: usize) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        // Rebuild the monomial factor by factor in the old order, multiplying
        // in the new algebra so the sign of the reordering is accounted for.
        let mut acc = Polynomial::monomial(Monomial::one(arity), c.clone());
        for (old, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                acc = acc.mul(gens_new, &Polynomial::generator(arity, new_id[old]));
            }
        }
        out = out.add(&acc);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    GeneratorDegree,
    DifferentialDegree,
    Minimality,
    DSquared,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::GeneratorDegree => "generator-degree",
            Rule::DifferentialDegree => "differential-degree",
            Rule::Minimality => "minimality",
            Rule::DSquared => "d-squared",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub generator: String,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

/// Checks generator degrees, the degree of each differential, minimality
/// and d² = 0. d² is checked on generators, which suffices for a derivation.
pub fn validate(p: &SullivanPresentation) -> ValidationReport {
    let gens = p.generators();
    let mut violations = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if g.degree < 2 {
            violations.push(Violation {
                rule: Rule::GeneratorDegree,
                generator: g.name.clone(),
                witness: None,
            });
        }
        let dg = p.differential(i);
        if let Some((m, _)) = dg.terms().find(|(m, _)| m.degree(gens) != g.degree + 1) {
            violations.push(Violation {
                rule: Rule::DifferentialDegree,
                generator: g.name.clone(),
                witness: Some(m.display(gens).to_string()),
            });
        }
        if let Some((m, _)) = dg.terms().find(|(m, _)| m.word_length() < 2) {
            violations.push(Violation {
                rule: Rule::Minimality,
                generator: g.name.clone(),
                witness: Some(m.display(gens).to_string()),
            });
        }
        let dd = p.apply_differential(dg);
        if !dd.is_zero() {
            violations.push(Violation {
                rule: Rule::DSquared,
                generator: g.name.clone(),
                witness: Some(dd.display(gens).to_string()),
            });
        }
    }
    ValidationReport { violations }
}

/// Exhaustive check that d∘d vanishes on every basis monomial of degree ≤ `max_degree`.
/// Exercises the Leibniz implementation itself; returns the first failing monomial.
pub fn sweep_d_squared(p: &SullivanPresentation, max_degree: u32) -> Option<Monomial> {
    (0..=max_degree)
        .flat_map(|deg| monomial_basis(p.generators(), deg, None))
        .find(|m| {
            let dm = p.differential_of_monomial(m);
            !p.apply_differential(&dm).is_zero()
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneousLength {
    pub length: u32,
    /// Set when d = 0, which is compatible with any length; 2 is reported.
    pub vacuous: bool,
}

/// The common word length of all monomials in all differentials, if there is one.
pub fn homogeneous_length(p: &SullivanPresentation) -> Option<HomogeneousLength> {
    let mut lengths = (0..p.arity()).flat_map(|i| p.differential(i).word_lengths());
    match lengths.next() {
        None => Some(HomogeneousLength {
            length: 2,
            vacuous: true,
        }),
        Some(l) => lengths.all(|k| k == l).then_some(HomogeneousLength {
            length: l,
            vacuous: false,
        }),
    }
}

/// True when every nonzero differential has pure word length `l`.
pub fn is_compatible_length(p: &SullivanPresentation, l: u32) -> bool {
    (0..p.arity()).all(|i| p.differential(i).word_lengths().iter().all(|&k| k == l))
}

/// ΛW = ΛV/(x₁) together with the projection p: ΛV → ΛW and its canonical section.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    pub algebra: SullivanPresentation,
    pub removed: Generator,
}

impl QuotientPresentation {
    /// Sets the first generator to zero: drops monomials containing it, shifts ids down.
    pub fn project(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            if m.exponent(0) == 0 {
                out.add_term(
                    Monomial::from_exponents(m.exponents()[1..].to_vec()),
                    c.clone(),
                );
            }
        }
        out
    }

    /// The section ΛW → ΛV using the same monomials (exponent 0 on x₁).
    pub fn lift(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            let mut e = Vec::with_capacity(m.arity() + 1);
            e.push(0);
            e.extend_from_slice(m.exponents());
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        out
    }
}

/// Factors out the differential ideal generated by the first (minimal-degree) generator.
pub fn quotient_mod_first_generator(p: &SullivanPresentation) -> Result<QuotientPresentation> {
    let first = p.generators().first().ok_or(Error::NoGenerators)?.clone();
    if !p.differential(0).is_zero() {
        return Err(Error::FirstGeneratorNotCocycle(first.name));
    }
    let gens: Vec<Generator> = p.generators()[1..].to_vec();
    let mut q = QuotientPresentation {
        algebra: SullivanPresentation {
            name: p.name().map(|n| format!("{n}/({})", first.name)),
            generators: gens,
            differentials: Vec::new(),
        },
        removed: first,
    };
    // already sorted by degree, so no re-sorting is needed
    q.algebra.differentials = (1..p.arity())
        .map(|i| q.project(p.differential(i)))
        .collect();
    Ok(q)
}
