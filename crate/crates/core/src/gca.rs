//! The free graded-commutative algebra ΛV = Sym(V^even) ⊗ Ext(V^odd).
//!
//! Generators are identified by their position in a generator list. A
//! monomial is a dense exponent vector over that list, read in canonical
//! order `g0^a0 g1^a1 ... gn^an`; Koszul signs are always computed against
//! this order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::Q;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Exponent vector indexed by generator id. Odd exponents are 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn generator(arity: usize, id: usize) -> Self {
        let mut e = vec![0; arity];
        e[id] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn exponent(&self, id: usize) -> u32 {
        self.0[id]
    }

    pub fn word_length(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn degree(&self, gens: &[Generator]) -> u32 {
        self.0.iter().zip(gens).map(|(e, g)| e * g.degree).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// True when every odd generator appears at most once.
    pub fn is_canonical(&self, gens: &[Generator]) -> bool {
        self.0.iter().zip(gens).all(|(&e, g)| !g.is_odd() || e <= 1)
    }

    /// Removes one factor of generator `id`, if present.
    pub fn divide_by_generator(&self, id: usize) -> Option<Monomial> {
        if self.0[id] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[id] -= 1;
        Some(Monomial(e))
    }

    pub fn display<'a>(&'a self, gens: &'a [Generator]) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, gens }
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    gens: &'a [Generator],
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (e, g) in self.mono.0.iter().zip(self.gens) {
            if *e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{}", g.name)?;
            } else {
                write!(f, "{}^{}", g.name, e)?;
            }
        }
        Ok(())
    }
}

/// Product of two monomials with its Koszul sign, or `None` when they share
/// an odd generator.
///
/// Merging `a·b` into canonical order moves each odd factor of `b` leftward
/// past every odd factor of `a` with a larger id.
pub fn mono_mul(gens: &[Generator], a: &Monomial, b: &Monomial) -> Option<(i8, Monomial)> {
    debug_assert_eq!(a.arity(), b.arity());
    let mut swaps = 0usize;
    let mut odd_in_a_after = 0usize;
    // Walk ids from the top down so that, at id t, `odd_in_a_after` counts
    // odd factors of `a` with id > t.
    for t in (0..gens.len()).rev() {
        if !gens[t].is_odd() {
            continue;
        }
        let (ea, eb) = (a.0[t], b.0[t]);
        if ea > 0 && eb > 0 {
            return None;
        }
        if eb > 0 {
            swaps += odd_in_a_after;
        }
        if ea > 0 {
            odd_in_a_after += 1;
        }
    }
    let exps = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
    let sign = if swaps.is_multiple_of(2) { 1 } else { -1 };
    Some((sign, Monomial(exps)))
}

/// Finite rational combination of canonical monomials; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one(arity: usize) -> Self {
        Polynomial::monomial(Monomial::one(arity), Q::one())
    }

    pub fn generator(arity: usize, id: usize) -> Self {
        Polynomial::monomial(Monomial::generator(arity, id), Q::one())
    }

    pub fn monomial(m: Monomial, coeff: Q) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Monomial, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// Bilinear extension of [`mono_mul`].
    pub fn mul(&self, gens: &[Generator], other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((sign, m)) = mono_mul(gens, a, b) {
                    let c = ca * cb;
                    out.add_term(m, if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }

    pub fn pow(&self, gens: &[Generator], n: u32, arity: usize) -> Polynomial {
        let mut out = Polynomial::one(arity);
        for _ in 0..n {
            out = out.mul(gens, self);
        }
        out
    }

    /// Distinct total degrees present.
    pub fn degrees(&self, gens: &[Generator]) -> BTreeSet<u32> {
        self.terms.keys().map(|m| m.degree(gens)).collect()
    }

    /// Distinct word lengths present.
    pub fn word_lengths(&self) -> BTreeSet<u32> {
        self.terms.keys().map(Monomial::word_length).collect()
    }

    /// The single total degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self, gens: &[Generator]) -> Option<u32> {
        let d = self.degrees(gens);
        (d.len() == 1).then(|| *d.iter().next().unwrap())
    }

    /// Keeps only the monomials satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Component of pure word length `k`.
    pub fn length_component(&self, k: u32) -> Polynomial {
        self.filter(|m| m.word_length() == k)
    }

    /// Re-canonicalizes from raw terms: merges duplicates, drops zeros and
    /// monomials with an odd generator squared.
    pub fn from_terms(
        gens: &[Generator],
        raw: impl IntoIterator<Item = (Monomial, Q)>,
    ) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in raw {
            if m.is_canonical(gens) {
                out.add_term(m, c);
            }
        }
        out
    }

    pub fn display<'a>(&'a self, gens: &'a [Generator]) -> PolynomialDisplay<'a> {
        PolynomialDisplay { poly: self, gens }
    }
}

pub struct PolynomialDisplay<'a> {
    poly: &'a Polynomial,
    gens: &'a [Generator],
}

impl fmt::Display for PolynomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        // Highest word length first, then descending exponent order, which
        // reads naturally (x^2 + x*y + y^2).
        let mut terms: Vec<_> = self.poly.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| b.word_length().cmp(&a.word_length()).then(b.cmp(a)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.display(self.gens))?;
            } else {
                write!(f, "{abs}*{}", m.display(self.gens))?;
            }
        }
        Ok(())
    }
}

/// Word-length restriction applied when enumerating a basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LengthFilter {
    Any,
    Exactly(u32),
    AtMost(u32),
}

impl LengthFilter {
    pub fn admits(self, length: u32) -> bool {
        match self {
            LengthFilter::Any => true,
            LengthFilter::Exactly(k) => length == k,
            LengthFilter::AtMost(n) => length <= n,
        }
    }
}

/// All canonical monomials of the given total degree (and word length, if
/// given), in descending lexicographic order of exponent vectors.
pub fn monomial_basis(gens: &[Generator], degree: u32, length: Option<u32>) -> Vec<Monomial> {
    let filter = length.map_or(LengthFilter::Any, LengthFilter::Exactly);
    monomial_basis_filtered(gens, degree, filter, usize::MAX)
        .expect("an unbounded basis enumeration cannot exceed its cap")
}

/// Basis enumeration with a length filter and a size cap. Returns `None`
/// once more than `cap` monomials have been produced.
pub fn monomial_basis_filtered(
    gens: &[Generator],
    degree: u32,
    filter: LengthFilter,
    cap: usize,
) -> Option<Vec<Monomial>> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; gens.len()];
    if !enumerate(gens, 0, degree, 0, filter, cap, &mut exps, &mut out) {
        return None;
    }
    Some(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    gens: &[Generator],
    id: usize,
    remaining: u32,
    length: u32,
    filter: LengthFilter,
    cap: usize,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) -> bool {
    if let LengthFilter::Exactly(k) | LengthFilter::AtMost(k) = filter {
        if length > k {
            return true;
        }
    }
    if id == gens.len() {
        if remaining == 0 && filter.admits(length) {
            if out.len() >= cap {
                return false;
            }
            out.push(Monomial(exps.clone()));
        }
        return true;
    }
    let g = &gens[id];
    let max = if g.is_odd() {
        (remaining / g.degree).min(1)
    } else {
        remaining / g.degree
    };
    for e in (0..=max).rev() {
        exps[id] = e;
        if !enumerate(
            gens,
            id + 1,
            remaining - e * g.degree,
            length + e,
            filter,
            cap,
            exps,
            out,
        ) {
            return false;
        }
    }
    exps[id] = 0;
    true
}
