//! Formal dimension, ellipticity evidence, the Toomer invariant and the
//! extremal degrees of the bigraded cohomology.
//!
//! An [`EllipticityCertificate`] is desk-scale evidence only: cohomology is
//! computed through a finite window and checked for vanishing above the
//! expected formal dimension and for Poincaré-duality symmetry. It never
//! proves ellipticity.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cohomology::{cell_basis, cohomology_total, d_matrix, Cohomology, CohomologyClass};
use crate::dga::{homogeneous_length, SullivanPresentation};
use crate::error::{Error, Result};
use crate::gca::{LengthFilter, Polynomial};
use crate::linalg::Span;

/// Σ_{odd}|x| − Σ_{even}(|x| − 1): the formal dimension of an elliptic algebra.
/// May be negative for algebras that are not elliptic.
pub fn formal_dimension_bound(p: &SullivanPresentation) -> i64 {
    p.generators()
        .iter()
        .map(|g| {
            if g.is_odd() {
                i64::from(g.degree)
            } else {
                -(i64::from(g.degree) - 1)
            }
        })
        .sum()
}

/// Default working bound: formal dimension bound plus the largest generator degree.
pub fn default_degree_bound(p: &SullivanPresentation) -> u32 {
    formal_dimension_bound(p).max(0) as u32 + p.max_generator_degree()
}

#[derive(Clone, Debug)]
pub struct EllipticityCertificate {
    pub certified: bool,
    /// Top degree with nonzero cohomology inside the window (N).
    pub formal_dimension: Option<u32>,
    /// The formula value B used to size the window.
    pub truncation_bound: i64,
    /// Cohomology was computed for degrees 0..=window.
    pub window: u32,
    pub dims: Vec<usize>,
    /// (dim H^i, dim H^{N−i}) for 0 ≤ i ≤ N.
    pub duality_table: Vec<(usize, usize)>,
    pub duality_ok: bool,
    pub vanishing_window_ok: bool,
    /// dim V^odd ≥ dim V^even.
    pub euler_inequality_ok: bool,
    /// Representative of the fundamental class, a basis of H^N.
    pub fundamental_class: Option<Polynomial>,
    pub cohomology: Cohomology,
}

pub fn ellipticity_check(p: &SullivanPresentation) -> Result<EllipticityCertificate> {
    ellipticity_check_with_window(p, default_degree_bound(p))
}

/// Like [`ellipticity_check`] with an explicit window, which is raised to
/// the default if smaller.
pub fn ellipticity_check_with_window(
    p: &SullivanPresentation,
    window: u32,
) -> Result<EllipticityCertificate> {
    let bound = formal_dimension_bound(p);
    let window = window.max(default_degree_bound(p));
    let h = cohomology_total(p, window)?;
    let dims = h.dims();
    let top = dims.iter().rposition(|&d| d > 0).map(|i| i as u32);
    let euler_inequality_ok = p.dim_odd() >= p.dim_even();

    let mut vanishing_window_ok = false;
    let mut duality_ok = false;
    let mut duality_table = Vec::new();
    if bound >= 0 {
        let b = bound as usize;
        vanishing_window_ok = dims[b] == 1 && dims[b + 1..].iter().all(|&d| d == 0);
        duality_table = (0..=b).map(|i| (dims[i], dims[b - i])).collect();
        duality_ok = duality_table.iter().all(|(a, c)| a == c);
    }
    let certified = euler_inequality_ok && vanishing_window_ok && duality_ok;
    let fundamental_class = if certified {
        let omega = h
            .cell(bound as u32, None)
            .map(|c| c.representatives[0].clone());
        match (omega, homogeneous_length(p)) {
            (Some(w), Some(_)) => Some(purify(&h, &w)?),
            (w, None) => w,
            (None, _) => None,
        }
    } else {
        None
    };
    Ok(EllipticityCertificate {
        certified,
        formal_dimension: top,
        truncation_bound: bound,
        window,
        dims,
        duality_table,
        duality_ok,
        vanishing_window_ok,
        euler_inequality_ok,
        fundamental_class,
        cohomology: h,
    })
}

/// With a homogeneous differential each word-length component of a cocycle
/// is a cocycle; for a one-dimensional H^N exactly one of them carries the class.
fn purify(h: &Cohomology, omega: &Polynomial) -> Result<Polynomial> {
    let mut carriers = Vec::new();
    for k in omega.word_lengths() {
        let part = omega.length_component(k);
        if !h.reduce_class(&part)?.is_zero() {
            carriers.push(part);
        }
    }
    match carriers.len() {
        1 => Ok(carriers.pop().unwrap()),
        _ => Err(Error::InternalInconsistency(
            "fundamental class is not carried by a single word length".into(),
        )),
    }
}

impl EllipticityCertificate {
    pub fn require(&self) -> Result<(u32, &Polynomial)> {
        match (
            self.certified,
            self.formal_dimension,
            &self.fundamental_class,
        ) {
            (true, Some(n), Some(w)) => Ok((n, w)),
            _ => Err(Error::NotCertified),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// dim V^odd + (l − 2)·dim V^even for a differential homogeneous of length l.
pub fn toomer_via_formula(p: &SullivanPresentation) -> Result<u32> {
    let l = homogeneous_length(p).ok_or(Error::NotHomogeneous)?.length;
    Ok((p.dim_odd() + (l as usize - 2) * p.dim_even()) as u32)
}

/// Does the image of `cocycle` in the cohomology of ΛV/Λ^{≥n+1}V vanish?
///
/// The quotient complex has the monomials of word length ≤ n as basis and
/// `d` followed by dropping longer terms as differential.
fn dies_in_truncation(
    p: &SullivanPresentation,
    degree: u32,
    n: u32,
    cocycle: &Polynomial,
) -> Result<bool> {
    let cap = crate::cohomology::DEFAULT_SLICE_CAP;
    let filter = LengthFilter::AtMost(n);
    let target = cell_basis(p, Some(degree), filter, cap)?;
    let source = cell_basis(p, degree.checked_sub(1), filter, cap)?;
    let index = target
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let d = d_matrix(p, &source, &target, &index, true)?;
    let mut image = Span::new(target.len());
    for j in 0..d.cols() {
        image.insert(&d.column(j));
    }
    let truncated = cocycle.filter(|m| m.word_length() <= n);
    let mut v = vec![num_traits::Zero::zero(); target.len()];
    for (m, c) in truncated.terms() {
        v[index[m]] = c.clone();
    }
    Ok(image.contains(&v))
}

/// Least n for which `cocycle` (a nonzero class in `degree`) survives to
/// ΛV/Λ^{≥n+1}V, together with the survival flag for every n tried.
fn survival_profile(
    p: &SullivanPresentation,
    degree: u32,
    cocycle: &Polynomial,
) -> Result<(u32, Vec<(u32, bool)>)> {
    // Past the longest word in this degree the truncation changes nothing.
    let longest = crate::gca::monomial_basis(p.generators(), degree, None)
        .iter()
        .map(|m| m.word_length())
        .max()
        .unwrap_or(0);
    let mut profile = Vec::new();
    for n in 0..=longest {
        profile.push((n, !dies_in_truncation(p, degree, n, cocycle)?));
    }
    let first = profile
        .iter()
        .find(|(_, s)| *s)
        .map(|(n, _)| *n)
        .ok_or_else(|| {
            Error::InternalInconsistency("nonzero class dies in every truncation".into())
        })?;
    if profile.iter().any(|&(n, s)| n > first && !s) {
        return Err(Error::InternalInconsistency(format!(
            "survival is not monotone in n: {profile:?}"
        )));
    }
    Ok((first, profile))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToomerReport {
    /// Absent when the differential is not homogeneous.
    pub e_formula: Option<u32>,
    pub e_direct: u32,
    pub per_n_survival: Vec<(u32, bool)>,
    /// Word length of the fundamental-class representative, when it is pure.
    pub fundamental_length: Option<u32>,
    pub agrees: bool,
}

/// e₀ from its definition: the least n with the fundamental class surviving
/// to ΛV/Λ^{≥n+1}V.
pub fn toomer_via_quotients(
    p: &SullivanPresentation,
    cert: &EllipticityCertificate,
) -> Result<ToomerReport> {
    let (n_top, omega) = cert.require()?;
    let (e_direct, per_n_survival) = survival_profile(p, n_top, omega)?;
    let e_formula = toomer_via_formula(p).ok();
    let fundamental_length = if e_formula.is_some() {
        let lengths = omega.word_lengths();
        (lengths.len() == 1).then(|| *lengths.iter().next().unwrap())
    } else {
        None
    };
    let agrees = match e_formula {
        Some(f) => f == e_direct && fundamental_length == Some(e_direct),
        None => true,
    };
    Ok(ToomerReport {
        e_formula,
        e_direct,
        per_n_survival,
        fundamental_length,
        agrees,
    })
}

/// e₀ of a single nonzero class of the certificate's total cohomology.
pub fn class_toomer(
    p: &SullivanPresentation,
    cert: &EllipticityCertificate,
    class: &CohomologyClass,
) -> Result<u32> {
    cert.require()?;
    if class.is_zero() {
        return Err(Error::ZeroClass);
    }
    let rep = cert.cohomology.representative(class);
    Ok(survival_profile(p, class.degree, &rep)?.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HilaliReport {
    pub dim_v: usize,
    pub dim_h: usize,
    pub holds: bool,
}

/// dim H^*(ΛV, d) ≥ dim V, on a certified model.
pub fn hilali_check(
    p: &SullivanPresentation,
    cert: &EllipticityCertificate,
) -> Result<HilaliReport> {
    cert.require()?;
    let dim_v = p.arity();
    let dim_h = cert.total_dim();
    Ok(HilaliReport {
        dim_v,
        dim_h,
        holds: dim_h >= dim_v,
    })
}

/// Per word length k: (least, greatest) degree i with H_k^i ≠ 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExtremalDegrees {
    /// k ↦ (n_k, N_k) for ΛV.
    pub algebra: BTreeMap<u32, (u32, u32)>,
    /// k ↦ (m_k, M_k) for the quotient ΛW.
    pub quotient: BTreeMap<u32, (u32, u32)>,
}

fn extremes(h: &Cohomology) -> BTreeMap<u32, (u32, u32)> {
    let mut out: BTreeMap<u32, (u32, u32)> = BTreeMap::new();
    for cell in h.cells().filter(|c| c.dim() > 0) {
        let Some(k) = cell.length else { continue };
        out.entry(k)
            .and_modify(|(lo, hi)| {
                *lo = (*lo).min(cell.degree);
                *hi = (*hi).max(cell.degree);
            })
            .or_insert((cell.degree, cell.degree));
    }
    out
}

pub fn extremal_degrees(algebra: &Cohomology, quotient: &Cohomology) -> ExtremalDegrees {
    ExtremalDegrees {
        algebra: extremes(algebra),
        quotient: extremes(quotient),
    }
}
