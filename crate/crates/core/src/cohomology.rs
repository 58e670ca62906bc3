//! Exact rational cohomology of (ΛV, d).
//!
//! A *cell* is the part of ΛV in one total degree, optionally restricted by
//! word length. For a differential homogeneous of length `l`, `d` maps the
//! cell (i, k) into (i + 1, k + l − 1), so the bigraded groups H_k^i are the
//! cohomology of these cells. Truncated cells (word length ≤ n, with `d`
//! followed by dropping longer terms) give the quotients ΛV/Λ^{≥n+1}V used
//! for the Toomer invariant.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use crate::dga::{homogeneous_length, is_compatible_length, SullivanPresentation};
use crate::error::{Error, Result};
use crate::gca::{monomial_basis_filtered, LengthFilter, Monomial, Polynomial};
use crate::linalg::{Matrix, Span, Q};

/// Largest basis a single cell may have before the engine gives up.
pub const DEFAULT_SLICE_CAP: usize = 200_000;

/// Degree-i piece of ΛV with the matrix of d: (ΛV)^i → (ΛV)^{i+1}.
#[derive(Clone, Debug)]
pub struct DegreeSlice {
    pub degree: u32,
    pub basis: Vec<Monomial>,
    /// Rows indexed by the basis of degree i + 1, columns by `basis`.
    pub d_matrix: Matrix,
}

pub(crate) fn cell_basis(
    p: &SullivanPresentation,
    degree: Option<u32>,
    filter: LengthFilter,
    cap: usize,
) -> Result<Vec<Monomial>> {
    match degree {
        None => Ok(Vec::new()),
        Some(degree) => monomial_basis_filtered(p.generators(), degree, filter, cap)
            .ok_or(Error::SliceTooLarge { degree, cap }),
    }
}

fn index_of(basis: &[Monomial]) -> HashMap<Monomial, usize> {
    basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect()
}

/// Matrix of d from `source` into `target`. With `truncate`, terms outside
/// the target basis are dropped (quotient by long words); otherwise they are
/// an internal error.
pub(crate) fn d_matrix(
    p: &SullivanPresentation,
    source: &[Monomial],
    target: &[Monomial],
    target_index: &HashMap<Monomial, usize>,
    truncate: bool,
) -> Result<Matrix> {
    let mut m = Matrix::zeros(target.len(), source.len());
    for (j, mono) in source.iter().enumerate() {
        for (t, c) in p.differential_of_monomial(mono).terms() {
            match target_index.get(t) {
                Some(&i) => m[(i, j)] = c.clone(),
                None if truncate => {}
                None => {
                    return Err(Error::InternalInconsistency(format!(
                        "d({}) has a term {} outside the target cell",
                        mono.display(p.generators()),
                        t.display(p.generators())
                    )))
                }
            }
        }
    }
    Ok(m)
}

/// Slices for degrees 0..=max_degree with exact matrices of d.
pub fn build_complex(p: &SullivanPresentation, max_degree: u32) -> Result<Vec<DegreeSlice>> {
    build_complex_capped(p, max_degree, DEFAULT_SLICE_CAP)
}

pub fn build_complex_capped(
    p: &SullivanPresentation,
    max_degree: u32,
    cap: usize,
) -> Result<Vec<DegreeSlice>> {
    let mut bases = Vec::new();
    for deg in 0..=max_degree + 1 {
        bases.push(cell_basis(p, Some(deg), LengthFilter::Any, cap)?);
    }
    let mut out = Vec::new();
    for deg in 0..=max_degree as usize {
        let idx = index_of(&bases[deg + 1]);
        let d = d_matrix(p, &bases[deg], &bases[deg + 1], &idx, false)?;
        out.push(DegreeSlice {
            degree: deg as u32,
            basis: bases[deg].clone(),
            d_matrix: d,
        });
    }
    Ok(out)
}

/// One cohomology group: the cell basis, coboundaries, and a basis of
/// representatives for a complement of the coboundaries in the cocycles.
#[derive(Clone, Debug)]
pub struct CohomologyCell {
    pub degree: u32,
    pub length: Option<u32>,
    pub basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    boundary_rank: usize,
    cocycle_dim: usize,
    /// Coboundaries first, then representatives.
    span: Span,
    pub representatives: Vec<Polynomial>,
}

/// Where a cell sits and which neighbours feed it.
#[derive(Clone, Copy, Debug)]
pub(crate) struct CellShape {
    pub degree: u32,
    pub filter: LengthFilter,
    pub prev_filter: Option<LengthFilter>,
    pub next_filter: LengthFilter,
    pub truncate: bool,
}

impl CohomologyCell {
    pub(crate) fn compute(
        p: &SullivanPresentation,
        shape: CellShape,
        cap: usize,
    ) -> Result<CohomologyCell> {
        let CellShape {
            degree,
            filter,
            prev_filter,
            next_filter,
            truncate,
        } = shape;
        let basis = cell_basis(p, Some(degree), filter, cap)?;
        let index = index_of(&basis);
        let prev = match prev_filter {
            Some(f) if degree > 0 => cell_basis(p, Some(degree - 1), f, cap)?,
            _ => Vec::new(),
        };
        let next = cell_basis(p, Some(degree + 1), next_filter, cap)?;
        let next_index = index_of(&next);
        let incoming = d_matrix(p, &prev, &basis, &index, truncate)?;
        let outgoing = d_matrix(p, &basis, &next, &next_index, truncate)?;

        let mut span = Span::new(basis.len());
        for j in 0..incoming.cols() {
            span.insert(&incoming.column(j));
        }
        let boundary_rank = span.len();
        let cocycles = outgoing.kernel();
        let cocycle_dim = cocycles.len();
        let mut representatives = Vec::new();
        for z in cocycles {
            if span.insert(&z) {
                representatives.push(to_polynomial(&basis, &z));
            }
        }
        if boundary_rank + representatives.len() != cocycle_dim {
            return Err(Error::InternalInconsistency(format!(
                "coboundaries are not cocycles in degree {degree}"
            )));
        }
        let length = match filter {
            LengthFilter::Exactly(k) => Some(k),
            _ => None,
        };
        Ok(CohomologyCell {
            degree,
            length,
            basis,
            index,
            boundary_rank,
            cocycle_dim,
            span,
            representatives,
        })
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundary_rank
    }

    pub fn cocycle_dim(&self) -> usize {
        self.cocycle_dim
    }

    /// Coordinates of a polynomial in the cell basis, if all its monomials lie in the cell.
    pub fn vector(&self, poly: &Polynomial) -> Option<Vec<Q>> {
        let mut v = vec![Q::zero(); self.basis.len()];
        for (m, c) in poly.terms() {
            v[*self.index.get(m)?] = c.clone();
        }
        Some(v)
    }

    /// Is the cell element a coboundary (in the cell's own complex)?
    pub fn is_coboundary(&self, v: &[Q]) -> bool {
        self.class_coordinates(v)
            .is_some_and(|c| c.iter().all(Zero::is_zero))
    }

    /// Class coordinates of a cocycle vector, or `None` if it is not a cocycle of this cell.
    pub fn class_coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        self.span
            .coordinates(v)
            .map(|c| c[self.boundary_rank..].to_vec())
    }
}

fn to_polynomial(basis: &[Monomial], v: &[Q]) -> Polynomial {
    let mut p = Polynomial::zero();
    for (m, c) in basis.iter().zip(v) {
        p.add_term(m.clone(), c.clone());
    }
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Grading {
    Total,
    Bigraded { length: u32 },
}

/// A class given by coordinates in the chosen representatives of its group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: u32,
    pub length: Option<u32>,
    pub coords: Vec<Q>,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Cohomology through a degree bound, total or bigraded by word length.
#[derive(Clone, Debug)]
pub struct Cohomology {
    presentation: SullivanPresentation,
    max_degree: u32,
    grading: Grading,
    cells: BTreeMap<(u32, Option<u32>), CohomologyCell>,
}

pub fn cohomology_total(p: &SullivanPresentation, max_degree: u32) -> Result<Cohomology> {
    cohomology_total_capped(p, max_degree, DEFAULT_SLICE_CAP)
}

pub fn cohomology_total_capped(
    p: &SullivanPresentation,
    max_degree: u32,
    cap: usize,
) -> Result<Cohomology> {
    let mut cells = BTreeMap::new();
    for degree in 0..=max_degree {
        let shape = CellShape {
            degree,
            filter: LengthFilter::Any,
            prev_filter: Some(LengthFilter::Any),
            next_filter: LengthFilter::Any,
            truncate: false,
        };
        cells.insert((degree, None), CohomologyCell::compute(p, shape, cap)?);
    }
    Ok(Cohomology {
        presentation: p.clone(),
        max_degree,
        grading: Grading::Total,
        cells,
    })
}

/// Bigraded cohomology H_k^i for a homogeneous differential.
pub fn cohomology_bigraded(p: &SullivanPresentation, max_degree: u32) -> Result<Cohomology> {
    let l = homogeneous_length(p).ok_or(Error::NotHomogeneous)?.length;
    cohomology_bigraded_with_length(p, max_degree, l)
}

/// Bigraded cohomology using a prescribed length `l`; every nonzero
/// differential must have pure length `l`. Needed for quotients whose
/// differential may vanish while the ambient algebra's length is fixed.
pub fn cohomology_bigraded_with_length(
    p: &SullivanPresentation,
    max_degree: u32,
    l: u32,
) -> Result<Cohomology> {
    cohomology_bigraded_capped(p, max_degree, l, DEFAULT_SLICE_CAP)
}

pub fn cohomology_bigraded_capped(
    p: &SullivanPresentation,
    max_degree: u32,
    l: u32,
    cap: usize,
) -> Result<Cohomology> {
    if l < 2 || !is_compatible_length(p, l) {
        return Err(Error::NotHomogeneous);
    }
    let min_deg = p
        .generators()
        .iter()
        .map(|g| g.degree)
        .min()
        .unwrap_or(2)
        .max(1);
    let mut cells = BTreeMap::new();
    for degree in 0..=max_degree {
        for k in 0..=degree / min_deg {
            let shape = CellShape {
                degree,
                filter: LengthFilter::Exactly(k),
                prev_filter: (k + 1 >= l).then(|| LengthFilter::Exactly(k + 1 - l)),
                next_filter: LengthFilter::Exactly(k + l - 1),
                truncate: false,
            };
            let cell = CohomologyCell::compute(p, shape, cap)?;
            if !cell.basis.is_empty() {
                cells.insert((degree, Some(k)), cell);
            }
        }
    }
    Ok(Cohomology {
        presentation: p.clone(),
        max_degree,
        grading: Grading::Bigraded { length: l },
        cells,
    })
}

impl Cohomology {
    pub fn presentation(&self) -> &SullivanPresentation {
        &self.presentation
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn cells(&self) -> impl Iterator<Item = &CohomologyCell> {
        self.cells.values()
    }

    /// The group in degree i (and word length k for bigraded cohomology).
    pub fn cell(&self, degree: u32, length: Option<u32>) -> Option<&CohomologyCell> {
        self.cells.get(&(degree, length))
    }

    /// dim H^i, summed over lengths when bigraded.
    pub fn dim(&self, degree: u32) -> usize {
        self.cells
            .range((degree, None)..=(degree, Some(u32::MAX)))
            .map(|(_, c)| c.dim())
            .sum()
    }

    /// dim H_k^i; zero outside the computed range or for total cohomology.
    pub fn dim_bigraded(&self, degree: u32, length: u32) -> usize {
        self.cells
            .get(&(degree, Some(length)))
            .map_or(0, CohomologyCell::dim)
    }

    /// dim H^i for i = 0..=max_degree.
    pub fn dims(&self) -> Vec<usize> {
        (0..=self.max_degree).map(|i| self.dim(i)).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    /// dim H_k^* = Σ_i dim H_k^i within the bound.
    pub fn length_dim(&self, length: u32) -> usize {
        self.cells
            .iter()
            .filter(|((_, k), _)| *k == Some(length))
            .map(|(_, c)| c.dim())
            .sum()
    }

    /// Largest word length with a nonzero cell.
    pub fn max_length(&self) -> u32 {
        self.cells
            .iter()
            .filter(|(_, c)| c.dim() > 0)
            .filter_map(|((_, k), _)| *k)
            .max()
            .unwrap_or(0)
    }

    /// The j-th basis class of a group.
    pub fn basis_class(&self, degree: u32, length: Option<u32>, j: usize) -> CohomologyClass {
        let dim = self.cell(degree, length).map_or(0, CohomologyCell::dim);
        assert!(j < dim, "basis index out of range");
        let mut coords = vec![Q::zero(); dim];
        coords[j] = Q::from_integer(1.into());
        CohomologyClass {
            degree,
            length,
            coords,
        }
    }

    /// The cocycle Σ cⱼ·repⱼ representing a class.
    pub fn representative(&self, class: &CohomologyClass) -> Polynomial {
        let Some(cell) = self.cell(class.degree, class.length) else {
            return Polynomial::zero();
        };
        let mut out = Polynomial::zero();
        for (c, r) in class.coords.iter().zip(&cell.representatives) {
            out = out.add(&r.scale(c));
        }
        out
    }

    /// Class of a cocycle; degree (and length, when bigraded) are read off the polynomial.
    pub fn reduce_class(&self, cocycle: &Polynomial) -> Result<CohomologyClass> {
        let gens = self.presentation.generators();
        let degree = cocycle.homogeneous_degree(gens).ok_or_else(|| {
            Error::NotHomogeneousElement(format!("{} has no single degree", cocycle.display(gens)))
        })?;
        let length = match self.grading {
            Grading::Total => None,
            Grading::Bigraded { .. } => {
                let ls = cocycle.word_lengths();
                if ls.len() != 1 {
                    return Err(Error::NotHomogeneousElement(format!(
                        "{} has mixed word lengths",
                        cocycle.display(gens)
                    )));
                }
                ls.into_iter().next()
            }
        };
        self.reduce_at(degree, length, cocycle)
    }

    /// Class of a cocycle in a prescribed group; the zero polynomial gives the zero class.
    pub fn reduce_at(
        &self,
        degree: u32,
        length: Option<u32>,
        cocycle: &Polynomial,
    ) -> Result<CohomologyClass> {
        if degree > self.max_degree {
            return Err(Error::DegreeOutOfBound {
                degree,
                bound: self.max_degree,
            });
        }
        if !self.presentation.apply_differential(cocycle).is_zero() {
            return Err(Error::NotACocycle);
        }
        let Some(cell) = self.cell(degree, length) else {
            // no monomials of that shape: only zero lives here
            if cocycle.is_zero() {
                return Ok(CohomologyClass {
                    degree,
                    length,
                    coords: Vec::new(),
                });
            }
            return Err(Error::NotHomogeneousElement(
                "polynomial outside the requested group".into(),
            ));
        };
        let v = cell.vector(cocycle).ok_or_else(|| {
            Error::NotHomogeneousElement("polynomial outside the requested group".into())
        })?;
        let coords = cell.class_coordinates(&v).ok_or_else(|| {
            Error::InternalInconsistency("cocycle outside the cocycle span".into())
        })?;
        Ok(CohomologyClass {
            degree,
            length,
            coords,
        })
    }

    /// Class of the product of representatives.
    pub fn cup_product(&self, a: &CohomologyClass, b: &CohomologyClass) -> Result<CohomologyClass> {
        let degree = a.degree + b.degree;
        if degree > self.max_degree {
            return Err(Error::DegreeOutOfBound {
                degree,
                bound: self.max_degree,
            });
        }
        let length = match (a.length, b.length) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        let prod = self
            .representative(a)
            .mul(self.presentation.generators(), &self.representative(b));
        self.reduce_at(degree, length, &prod)
    }

    /// The unit class [1].
    pub fn unit(&self) -> CohomologyClass {
        let length = match self.grading {
            Grading::Total => None,
            Grading::Bigraded { .. } => Some(0),
        };
        self.basis_class(0, length, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use crate::parser::{parse_model, parse_polynomial};

    const S2: &str = "generator x 2\ngenerator y 3\nd y = x^2";
    const CP2: &str = "generator x 2\ngenerator y 5\nd y = x^3";
    const S3S3: &str = "generator x 3\ngenerator y 3";

    #[test]
    fn s2_slices() {
        let p = parse_model(S2).unwrap();
        let slices = build_complex(&p, 4).unwrap();
        let dims: Vec<_> = slices.iter().map(|s| s.basis.len()).collect();
        assert_eq!(dims, vec![1, 0, 1, 1, 1]);
        for w in slices.windows(2) {
            assert!(w[1].d_matrix.mul(&w[0].d_matrix).is_zero());
        }
    }

    #[test]
    fn odd_sphere_slices() {
        let p = parse_model("generator x 3").unwrap();
        let dims: Vec<_> = build_complex(&p, 3)
            .unwrap()
            .iter()
            .map(|s| s.basis.len())
            .collect();
        assert_eq!(dims, vec![1, 0, 0, 1]);
    }

    #[test]
    fn cp2_total() {
        let p = parse_model(CP2).unwrap();
        let h = cohomology_total(&p, 4).unwrap();
        assert_eq!(h.dims(), vec![1, 0, 1, 0, 1]);
        let reps: Vec<String> = [0, 2, 4]
            .iter()
            .map(|&i| {
                h.cell(i, None).unwrap().representatives[0]
                    .display(p.generators())
                    .to_string()
            })
            .collect();
        assert_eq!(reps, ["1", "x", "x^2"]);
    }

    #[test]
    fn zero_differential_total() {
        let p = parse_model(S3S3).unwrap();
        let h = cohomology_total(&p, 6).unwrap();
        assert_eq!(h.dims(), vec![1, 0, 0, 2, 0, 0, 1]);
    }

    #[test]
    fn s2_total_and_bigraded() {
        let p = parse_model(S2).unwrap();
        let h = cohomology_total(&p, 4).unwrap();
        assert_eq!(h.dims(), vec![1, 0, 1, 0, 0]);
        let b = cohomology_bigraded(&p, 4).unwrap();
        assert_eq!(b.dim_bigraded(2, 1), 1);
        assert_eq!(b.dim_bigraded(4, 2), 0);
    }

    #[test]
    fn bigraded_zero_differential() {
        let p = parse_model(S3S3).unwrap();
        let b = cohomology_bigraded(&p, 6).unwrap();
        assert_eq!(b.dim_bigraded(3, 1), 2);
        assert_eq!(b.dim_bigraded(6, 2), 1);
    }

    #[test]
    fn reduce_examples() {
        let s2 = parse_model(S2).unwrap();
        let h = cohomology_total(&s2, 4).unwrap();
        let x2 = parse_polynomial("x^2", &s2).unwrap();
        assert!(h.reduce_class(&x2).unwrap().is_zero());
        let y = parse_polynomial("y", &s2).unwrap();
        assert_eq!(h.reduce_class(&y).unwrap_err(), Error::NotACocycle);

        let cp2 = parse_model(CP2).unwrap();
        let h = cohomology_total(&cp2, 4).unwrap();
        let x = parse_polynomial("x", &cp2).unwrap();
        assert_eq!(h.reduce_class(&x).unwrap().coords, vec![q(1)]);
        let three_x = parse_polynomial("3*x", &cp2).unwrap();
        assert_eq!(h.reduce_class(&three_x).unwrap().coords, vec![q(3)]);

        let s3s3 = parse_model(S3S3).unwrap();
        let h = cohomology_total(&s3s3, 6).unwrap();
        let xy = parse_polynomial("x*y", &s3s3).unwrap();
        let c = h.reduce_class(&xy).unwrap();
        assert_eq!(c.degree, 6);
        assert!(!c.is_zero());
    }

    #[test]
    fn cup_examples() {
        let cp2 = parse_model(CP2).unwrap();
        let h = cohomology_total(&cp2, 4).unwrap();
        let x = h.basis_class(2, None, 0);
        assert!(!h.cup_product(&x, &x).unwrap().is_zero());
        assert_eq!(h.cup_product(&h.unit(), &x).unwrap(), x);
        assert!(matches!(
            h.cup_product(&h.cup_product(&x, &x).unwrap(), &x),
            Err(Error::DegreeOutOfBound {
                degree: 6,
                bound: 4
            })
        ));

        let s2 = parse_model(S2).unwrap();
        let h = cohomology_total(&s2, 4).unwrap();
        let x = h.basis_class(2, None, 0);
        assert!(h.cup_product(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn not_homogeneous_rejected() {
        let p = parse_model("generator x 2\ngenerator y 3\ngenerator z 5\nd y = x^2\nd z = x^3")
            .unwrap();
        assert_eq!(
            cohomology_bigraded(&p, 4).unwrap_err(),
            Error::NotHomogeneous
        );
    }

    #[test]
    fn slice_cap() {
        let p = parse_model("generator x 2\ngenerator y 2").unwrap();
        assert!(matches!(
            cohomology_total_capped(&p, 20, 5),
            Err(Error::SliceTooLarge { cap: 5, .. })
        ));
    }
}
