//! Per-model verdicts: the no-gap property of the word-length grading,
//! Lupton's dichotomy (enough classes in every length, or a truncated
//! polynomial algebra on one generator), Hilali's inequality, and which
//! known result covers the model according to the parity of its cocycle
//! generators.

use serde::Serialize;

use crate::cohomology::{cohomology_bigraded, Cohomology};
use crate::dga::{homogeneous_length, SullivanPresentation};
use crate::error::{Error, Result};
use crate::invariants::{
    default_degree_bound, ellipticity_check_with_window, hilali_check, toomer_via_formula,
    toomer_via_quotients, EllipticityCertificate, HilaliReport,
};
use crate::parser::serialize_model;

/// Lengths k in 0..=e with H_k^* = 0.
pub fn felix_gap_scan(bigraded: &Cohomology, e: u32) -> (bool, Vec<u32>) {
    let gaps: Vec<u32> = (0..=e).filter(|&k| bigraded.length_dim(k) == 0).collect();
    (gaps.is_empty(), gaps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedWitness {
    /// Representative cocycle of the generating class u.
    pub generator: String,
    pub degree: u32,
    /// h with u^h ≠ 0 = u^{h+1}.
    pub power: u32,
}

/// Looks for a class u with {1, u, …, u^h} a basis of H^* and u^{h+1} = 0.
///
/// Only the lowest positive nonzero degree can hold u, and it must be
/// one-dimensional there, so the candidate is unique up to scalar.
/// `top` is the formal dimension; cohomology vanishes above it.
pub fn truncated_poly_detect(total: &Cohomology, top: u32) -> Result<Option<TruncatedWitness>> {
    let dims = total.dims();
    let Some(a) = (1..dims.len()).find(|&i| dims[i] > 0) else {
        return Ok(None);
    };
    if dims[a] != 1 {
        return Ok(None);
    }
    let a = a as u32;
    let u = total.basis_class(a, None, 0);
    let mut power = 1;
    let mut current = u.clone();
    while (power + 1) * a <= top {
        let next = total.cup_product(&current, &u)?;
        if next.is_zero() {
            break;
        }
        current = next;
        power += 1;
    }
    let expected = |i: usize| {
        let i = i as u32;
        if i.is_multiple_of(a) && i / a <= power {
            1
        } else {
            0
        }
    };
    if dims.iter().enumerate().any(|(i, &d)| d != expected(i)) {
        return Ok(None);
    }
    let gens = total.presentation().generators();
    Ok(Some(TruncatedWitness {
        generator: total.representative(&u).display(gens).to_string(),
        degree: a,
        power,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LuptonStatus {
    HoldsViaDims,
    HoldsViaTruncatedPoly,
    Violated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum KernelParity {
    EvenOnly,
    OddPresent,
}

/// Which published argument applies to a homogeneous elliptic model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisBranch {
    /// Some odd generator is a cocycle: Lupton's own partial proof.
    OddKernel,
    /// Coformal with all cocycle generators even: the complementary coformal case.
    CoformalEvenKernel,
    /// Length ≥ 3 with all cocycle generators even: the dichotomy is still open here.
    OpenTerritory,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelClassification {
    pub parity: KernelParity,
    pub cocycle_generators: Vec<String>,
}

/// Generators with d = 0 and whether any of them is odd.
pub fn kernel_parity(p: &SullivanPresentation) -> KernelClassification {
    let ids = p.cocycle_generators();
    let odd = ids.iter().any(|&i| p.generators()[i].is_odd());
    KernelClassification {
        parity: if odd {
            KernelParity::OddPresent
        } else {
            KernelParity::EvenOnly
        },
        cocycle_generators: ids
            .iter()
            .map(|&i| p.generators()[i].name.clone())
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub model: Option<String>,
    pub formal_dimension: u32,
    pub dims: Vec<usize>,
    pub word_length: u32,
    pub coformal: bool,
    pub e: u32,
    pub e_direct: u32,
    /// (k, dim H_k^*) for k = 0..=e.
    pub per_k_dims: Vec<(u32, usize)>,
    pub felix_no_gap: bool,
    pub gaps: Vec<u32>,
    pub lupton_status: LuptonStatus,
    /// Reported whenever one exists, even if the dimension branch already holds.
    pub truncated_poly_witness: Option<TruncatedWitness>,
    pub hilali: HilaliReport,
    pub kernel: KernelClassification,
    pub branch: HypothesisBranch,
}

impl ConjectureReport {
    pub fn violated(&self) -> bool {
        self.lupton_status == LuptonStatus::Violated || !self.hilali.holds || !self.felix_no_gap
    }
}

/// Everything computed on the way to a report.
#[derive(Debug)]
pub struct Analysis {
    pub certificate: EllipticityCertificate,
    pub bigraded: Cohomology,
    pub report: ConjectureReport,
}

/// Full pipeline on a validated, homogeneous model: certify, compute the
/// bigraded cohomology, cross-check e₀, then evaluate every verdict.
pub fn analyze(p: &SullivanPresentation, max_degree: Option<u32>) -> Result<Analysis> {
    let hl = homogeneous_length(p).ok_or(Error::NotHomogeneous)?;
    let window = max_degree.unwrap_or_else(|| default_degree_bound(p));
    let cert = ellipticity_check_with_window(p, window)?;
    let (top, _) = cert.require()?;
    let e = toomer_via_formula(p)?;
    let toomer = toomer_via_quotients(p, &cert)?;
    if toomer.e_direct != e {
        return Err(Error::ToomerMismatch {
            formula: e,
            direct: toomer.e_direct,
        });
    }
    if toomer.fundamental_length != Some(e) {
        return Err(Error::InternalInconsistency(format!(
            "fundamental class has word length {:?}, expected {e}",
            toomer.fundamental_length
        )));
    }
    let bigraded = cohomology_bigraded(p, cert.window)?;
    let per_k_dims: Vec<(u32, usize)> = (0..=e).map(|k| (k, bigraded.length_dim(k))).collect();
    let (felix_no_gap, gaps) = felix_gap_scan(&bigraded, e);
    let dims_branch = (1..e).all(|k| bigraded.length_dim(k) >= 2);
    let witness = truncated_poly_detect(&cert.cohomology, top)?;
    let lupton_status = if dims_branch {
        LuptonStatus::HoldsViaDims
    } else if witness.is_some() {
        LuptonStatus::HoldsViaTruncatedPoly
    } else {
        LuptonStatus::Violated
    };
    let hilali = hilali_check(p, &cert)?;
    let kernel = kernel_parity(p);
    let coformal = hl.length == 2;
    let branch = match (kernel.parity, coformal) {
        (KernelParity::OddPresent, _) => HypothesisBranch::OddKernel,
        (KernelParity::EvenOnly, true) => HypothesisBranch::CoformalEvenKernel,
        (KernelParity::EvenOnly, false) => HypothesisBranch::OpenTerritory,
    };
    let report = ConjectureReport {
        model: p.name().map(str::to_string),
        formal_dimension: top,
        dims: cert.dims[..=top as usize].to_vec(),
        word_length: hl.length,
        coformal,
        e,
        e_direct: toomer.e_direct,
        per_k_dims,
        felix_no_gap,
        gaps,
        lupton_status,
        truncated_poly_witness: witness,
        hilali,
        kernel,
        branch,
    };
    Ok(Analysis {
        certificate: cert,
        bigraded,
        report,
    })
}

pub fn lupton_check(p: &SullivanPresentation) -> Result<ConjectureReport> {
    analyze(p, None).map(|a| a.report)
}

/// Model text followed by the computed data as comments, for filing a
/// finding that contradicts a known result or exposes a bug.
pub fn reproducer(p: &SullivanPresentation, report: &ConjectureReport) -> String {
    let mut out = serialize_model(p);
    out.push_str(&format!("# dims H^0..H^N: {:?}\n", report.dims));
    out.push_str(&format!(
        "# dim H_k^* for k = 0..e: {:?}\n",
        report.per_k_dims
    ));
    out.push_str(&format!(
        "# e = {}, lupton = {:?}, hilali = {:?}, no-gap = {}\n",
        report.e, report.lupton_status, report.hilali, report.felix_no_gap
    ));
    out
}
