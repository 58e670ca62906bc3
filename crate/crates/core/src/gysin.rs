//! The Gysin sequence of 0 → ΛV →j ΛV →p ΛW → 0, where j multiplies by an
//! even first generator x₁ of degree 2r and ΛW = ΛV/(x₁).
//!
//! With d homogeneous of length l the induced long exact sequence reads
//!
//! ```text
//! H^{i-1}_{k-1-(l-2)}(W) -δ*-> H^{i-2r}_{k-1}(V) -j*-> H^i_k(V) -p*-> H^i_k(W) -δ*-> H^{i-2r+1}_{k+(l-2)}(V) -> ...
//! ```
//!
//! All maps are matrices between the representative bases of the bigraded
//! cohomology (rows: target basis, columns: source basis).

use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use crate::cohomology::{cohomology_bigraded_with_length, Cohomology, CohomologyClass};
use crate::dga::{
    homogeneous_length, quotient_mod_first_generator, QuotientPresentation, SullivanPresentation,
};
use crate::error::{Error, Result};
use crate::gca::{Monomial, Polynomial};
use crate::invariants::{default_degree_bound, ellipticity_check};
use crate::linalg::{Matrix, Q};

/// Bigraded cohomology of ΛV and ΛW plus the data to evaluate j*, p* and δ*.
#[derive(Debug)]
pub struct GysinSequence {
    algebra: SullivanPresentation,
    quotient: QuotientPresentation,
    length: u32,
    shift: u32,
    max_degree: u32,
    hv: Cohomology,
    hw: Cohomology,
    cache: Mutex<HashMap<(MapKind, u32, u32), Matrix>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    J,
    P,
    Delta,
}

impl GysinSequence {
    /// Sets up the sequence without checking ellipticity.
    pub fn new(p: &SullivanPresentation, max_degree: u32) -> Result<Self> {
        let first = p.generators().first().ok_or(Error::NoGenerators)?;
        if first.is_odd() {
            return Err(Error::FirstGeneratorOdd(first.name.clone()));
        }
        let length = homogeneous_length(p).ok_or(Error::NotHomogeneous)?.length;
        let quotient = quotient_mod_first_generator(p)?;
        let hv = cohomology_bigraded_with_length(p, max_degree, length)?;
        let hw = cohomology_bigraded_with_length(&quotient.algebra, max_degree, length)?;
        Ok(GysinSequence {
            shift: first.degree,
            algebra: p.clone(),
            quotient,
            length,
            max_degree,
            hv,
            hw,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn algebra_cohomology(&self) -> &Cohomology {
        &self.hv
    }

    pub fn quotient_cohomology(&self) -> &Cohomology {
        &self.hw
    }

    pub fn quotient(&self) -> &QuotientPresentation {
        &self.quotient
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    /// |x₁| = 2r.
    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    fn dim_in(h: &Cohomology, degree: i64, length: i64) -> usize {
        if degree < 0 || length < 0 {
            return 0;
        }
        h.dim_bigraded(degree as u32, length as u32)
    }

    /// dim H^i_k(V), zero for negative indices.
    pub fn dim_v(&self, degree: i64, length: i64) -> usize {
        Self::dim_in(&self.hv, degree, length)
    }

    /// dim H^i_k(W), zero for negative indices.
    pub fn dim_w(&self, degree: i64, length: i64) -> usize {
        Self::dim_in(&self.hw, degree, length)
    }

    fn cached(
        &self,
        kind: MapKind,
        i: u32,
        k: u32,
        f: impl FnOnce() -> Result<Matrix>,
    ) -> Result<Matrix> {
        if let Some(m) = self.cache.lock().unwrap().get(&(kind, i, k)) {
            return Ok(m.clone());
        }
        let m = f()?;
        self.cache.lock().unwrap().insert((kind, i, k), m.clone());
        Ok(m)
    }

    fn representatives(h: &Cohomology, degree: i64, length: i64) -> Vec<Polynomial> {
        if degree < 0 || length < 0 {
            return Vec::new();
        }
        h.cell(degree as u32, Some(length as u32))
            .map(|c| c.representatives.clone())
            .unwrap_or_default()
    }

    fn check_bound(&self, i: u32) -> Result<()> {
        if i > self.max_degree {
            return Err(Error::DegreeOutOfBound {
                degree: i,
                bound: self.max_degree,
            });
        }
        Ok(())
    }

    /// j*: H^{i-2r}_{k-1}(V) → H^i_k(V), [χ] ↦ [x₁χ].
    pub fn map_j_star(&self, i: u32, k: u32) -> Result<Matrix> {
        self.check_bound(i)?;
        self.cached(MapKind::J, i, k, || {
            let (si, sk) = (i as i64 - self.shift as i64, k as i64 - 1);
            let sources = Self::representatives(&self.hv, si, sk);
            let rows = self.dim_v(i as i64, k as i64);
            let x1 = Polynomial::generator(self.algebra.arity(), 0);
            let mut cols = Vec::new();
            for chi in &sources {
                let image = x1.mul(self.algebra.generators(), chi);
                cols.push(self.hv.reduce_at(i, Some(k), &image)?.coords);
            }
            Ok(Matrix::from_columns(rows, &cols))
        })
    }

    /// p*: H^i_k(V) → H^i_k(W), [χ] ↦ [χ mod x₁].
    pub fn map_p_star(&self, i: u32, k: u32) -> Result<Matrix> {
        self.check_bound(i)?;
        self.cached(MapKind::P, i, k, || {
            let sources = Self::representatives(&self.hv, i as i64, k as i64);
            let rows = self.dim_w(i as i64, k as i64);
            let mut cols = Vec::new();
            for chi in &sources {
                let image = self.quotient.project(chi);
                cols.push(self.hw.reduce_at(i, Some(k), &image)?.coords);
            }
            Ok(Matrix::from_columns(rows, &cols))
        })
    }

    /// δ*: H^i_k(W) → H^{i-2r+1}_{k+l-2}(V).
    pub fn map_delta_star(&self, i: u32, k: u32) -> Result<Matrix> {
        self.check_bound(i)?;
        self.cached(MapKind::Delta, i, k, || {
            let sources = Self::representatives(&self.hw, i as i64, k as i64);
            let (ti, tk) = self.delta_target(i, k);
            let rows = self.dim_v(ti, tk);
            let mut cols = Vec::new();
            for chi in &sources {
                cols.push(
                    self.connecting(chi, i, k)?
                        .map_or_else(|| vec![Q::from_integer(0.into()); rows], |c| c.coords),
                );
            }
            Ok(Matrix::from_columns(rows, &cols))
        })
    }

    fn delta_target(&self, i: u32, k: u32) -> (i64, i64) {
        (
            i as i64 + 1 - self.shift as i64,
            k as i64 + self.length as i64 - 2,
        )
    }

    /// δ*[χ] for a d̄-cocycle χ of ΛW in bidegree (i, k): lift with the same
    /// monomials, apply d, divide by x₁. `None` when the target group is
    /// below degree 0 (then dχ must vanish).
    pub fn connecting(&self, chi: &Polynomial, i: u32, k: u32) -> Result<Option<CohomologyClass>> {
        let lifted = self.quotient.lift(chi);
        let dl = self.algebra.apply_differential(&lifted);
        let mut divided = Polynomial::zero();
        for (m, c) in dl.terms() {
            let q: Monomial = m.divide_by_generator(0).ok_or_else(|| {
                Error::LiftNotDivisible(m.display(self.algebra.generators()).to_string())
            })?;
            divided.add_term(q, c.clone());
        }
        let (ti, tk) = self.delta_target(i, k);
        if ti < 0 || tk < 0 {
            if divided.is_zero() {
                return Ok(None);
            }
            return Err(Error::InternalInconsistency(
                "connecting map lands below degree zero".into(),
            ));
        }
        self.hv
            .reduce_at(ti as u32, Some(tk as u32), &divided)
            .map(Some)
    }

    /// The four maps around (i, k) and the node dimensions they connect.
    pub fn window(&self, i: u32, k: u32) -> Result<GysinWindow> {
        let (i_, k_) = (i as i64, k as i64);
        let (r2, l) = (self.shift as i64, self.length as i64);
        let delta_in = if i >= 1 && k_ - 1 - (l - 2) >= 0 {
            self.map_delta_star(i - 1, (k_ - 1 - (l - 2)) as u32)?
        } else {
            Matrix::zeros(self.dim_v(i_ - r2, k_ - 1), 0)
        };
        let j_star = self.map_j_star(i, k)?;
        let p_star = self.map_p_star(i, k)?;
        let delta_out = self.map_delta_star(i, k)?;
        let (ti, tk) = self.delta_target(i, k);
        let j_next = if i < self.max_degree {
            Some(self.map_j_star(i + 1, k + self.length - 1)?)
        } else {
            None
        };
        Ok(GysinWindow {
            degree: i,
            length: k,
            word_length: self.length,
            shift: self.shift,
            dims: WindowDims {
                w_prev: self.dim_w(i_ - 1, k_ - 1 - (l - 2)),
                v_source: self.dim_v(i_ - r2, k_ - 1),
                v_middle: self.dim_v(i_, k_),
                w_middle: self.dim_w(i_, k_),
                v_next: self.dim_v(ti, tk),
                v_after: self.dim_v(i_ + 1, k_ + l - 1),
            },
            delta_in,
            j_star,
            p_star,
            delta_out,
            j_next,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WindowDims {
    /// H^{i-1}_{k-1-(l-2)}(W)
    pub w_prev: usize,
    /// H^{i-2r}_{k-1}(V)
    pub v_source: usize,
    /// H^i_k(V)
    pub v_middle: usize,
    /// H^i_k(W)
    pub w_middle: usize,
    /// H^{i-2r+1}_{k+(l-2)}(V)
    pub v_next: usize,
    /// H^{i+1}_{k+l-1}(V)
    pub v_after: usize,
}

/// The segment of the sequence around bidegree (i, k).
#[derive(Clone, Debug)]
pub struct GysinWindow {
    pub degree: u32,
    pub length: u32,
    pub word_length: u32,
    pub shift: u32,
    pub dims: WindowDims,
    pub delta_in: Matrix,
    pub j_star: Matrix,
    pub p_star: Matrix,
    pub delta_out: Matrix,
    /// Absent at the top of the degree range.
    pub j_next: Option<Matrix>,
}

fn kernel_dim(m: &Matrix) -> usize {
    m.cols() - m.rank()
}

impl GysinWindow {
    /// Exactness at the nodes of this window whose both maps are available.
    pub fn checks(&self) -> Vec<NodeCheck> {
        let mut out = vec![
            NodeCheck::new(
                NodeKind::JSource,
                self.degree as i64 - self.shift as i64,
                self.length as i64 - 1,
                &self.delta_in,
                &self.j_star,
            ),
            NodeCheck::new(
                NodeKind::JTarget,
                self.degree as i64,
                self.length as i64,
                &self.j_star,
                &self.p_star,
            ),
            NodeCheck::new(
                NodeKind::Quotient,
                self.degree as i64,
                self.length as i64,
                &self.p_star,
                &self.delta_out,
            ),
        ];
        if let Some(j) = &self.j_next {
            out.push(NodeCheck::new(
                NodeKind::JSource,
                self.degree as i64 + 1 - self.shift as i64,
                self.length as i64 + self.word_length as i64 - 2,
                &self.delta_out,
                j,
            ));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    /// H(V) as the source of j*, between δ* and j*.
    JSource,
    /// H(V) as the target of j*, between j* and p*.
    JTarget,
    /// H(W), between p* and δ*.
    Quotient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeCheck {
    pub node: NodeKind,
    pub degree: i64,
    pub length: i64,
    pub dim: usize,
    pub rank_in: usize,
    pub kernel_out: usize,
    pub exact: bool,
}

impl NodeCheck {
    fn new(node: NodeKind, degree: i64, length: i64, incoming: &Matrix, outgoing: &Matrix) -> Self {
        let rank_in = incoming.rank();
        let kernel_out = kernel_dim(outgoing);
        NodeCheck {
            node,
            degree,
            length,
            dim: outgoing.cols(),
            rank_in,
            kernel_out,
            exact: rank_in == kernel_out,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeCheck {
    /// "p*j*", "δ*p*" or "j*δ*".
    pub composite: String,
    pub degree: u32,
    pub length: u32,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub max_degree: u32,
    pub shift: u32,
    pub word_length: u32,
    pub nodes: Vec<NodeCheck>,
    pub composites: Vec<CompositeCheck>,
    pub overall: bool,
}

impl ExactnessReport {
    pub fn failures(&self) -> impl Iterator<Item = &NodeCheck> {
        self.nodes.iter().filter(|n| !n.exact)
    }
}

fn certified_sequence(p: &SullivanPresentation, max_degree: Option<u32>) -> Result<GysinSequence> {
    if let Some(first) = p.generators().first() {
        if first.is_odd() {
            return Err(Error::FirstGeneratorOdd(first.name.clone()));
        }
    }
    if homogeneous_length(p).is_none() {
        return Err(Error::NotHomogeneous);
    }
    if !ellipticity_check(p)?.certified {
        return Err(Error::NotCertified);
    }
    GysinSequence::new(p, max_degree.unwrap_or_else(|| default_degree_bound(p)))
}

/// Checks rank(incoming) = dim ker(outgoing) at every node whose flanking
/// nodes lie inside the degree bound, and that consecutive maps compose to zero.
pub fn verify_exactness(
    p: &SullivanPresentation,
    max_degree: Option<u32>,
) -> Result<ExactnessReport> {
    let g = certified_sequence(p, max_degree)?;
    exactness_of(&g)
}

pub fn exactness_of(g: &GysinSequence) -> Result<ExactnessReport> {
    let bound = g.max_degree;
    let (r2, l) = (g.shift, g.length);
    let mut nodes = Vec::new();
    let mut composites = Vec::new();
    for i in 0..=bound {
        for k in 0..=i / 2 + 1 {
            let j = g.map_j_star(i, k)?;
            let p = g.map_p_star(i, k)?;
            let delta = g.map_delta_star(i, k)?;
            nodes.push(NodeCheck::new(
                NodeKind::JTarget,
                i as i64,
                k as i64,
                &j,
                &p,
            ));
            nodes.push(NodeCheck::new(
                NodeKind::Quotient,
                i as i64,
                k as i64,
                &p,
                &delta,
            ));
            composites.push(CompositeCheck {
                composite: "p*j*".into(),
                degree: i,
                length: k,
                zero: p.mul(&j).is_zero(),
            });
            composites.push(CompositeCheck {
                composite: "δ*p*".into(),
                degree: i,
                length: k,
                zero: delta.mul(&p).is_zero(),
            });
            if i < bound {
                let j_next = g.map_j_star(i + 1, k + l - 1)?;
                composites.push(CompositeCheck {
                    composite: "j*δ*".into(),
                    degree: i,
                    length: k,
                    zero: j_next.mul(&delta).is_zero(),
                });
            }
        }
    }
    // H^a_k(V) between δ* from W^{a+2r-1} and j* into V^{a+2r}.
    for a in 0..=bound.saturating_sub(r2) {
        if a + r2 > bound {
            break;
        }
        for k in 0..=a / 2 + 1 {
            let j = g.map_j_star(a + r2, k + 1)?;
            let delta_in = match (k + 2).checked_sub(l) {
                Some(wk) if a + r2 >= 1 => g.map_delta_star(a + r2 - 1, wk)?,
                _ => Matrix::zeros(j.cols(), 0),
            };
            nodes.push(NodeCheck::new(
                NodeKind::JSource,
                a as i64,
                k as i64,
                &delta_in,
                &j,
            ));
        }
    }
    let overall = nodes.iter().all(|n| n.exact) && composites.iter().all(|c| c.zero);
    Ok(ExactnessReport {
        max_degree: bound,
        shift: r2,
        word_length: l,
        nodes,
        composites,
        overall,
    })
}

/// A single window, after the same preconditions as [`verify_exactness`].
pub fn gysin_window(
    p: &SullivanPresentation,
    i: u32,
    k: u32,
    max_degree: Option<u32>,
) -> Result<GysinWindow> {
    let bound = max_degree
        .unwrap_or_else(|| default_degree_bound(p))
        .max(i + 1);
    certified_sequence(p, Some(bound))?.window(i, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_model;

    const S2: &str = "generator x 2\ngenerator y 3\nd y = x^2";
    const E1: &str = "generator x 2\ngenerator y 2\ngenerator z 3\ngenerator w 3\ngenerator t 3\n\
                      d z = x^2\nd w = x*y\nd t = y^2";

    fn m(t: &str) -> SullivanPresentation {
        parse_model(t).unwrap()
    }

    #[test]
    fn s2_maps() {
        let g = GysinSequence::new(&m(S2), 6).unwrap();
        let j = g.map_j_star(2, 1).unwrap();
        assert_eq!((j.rows(), j.cols(), j.rank()), (1, 1, 1));
        let j = g.map_j_star(4, 2).unwrap();
        assert_eq!(j.rank(), 0);
        let p = g.map_p_star(2, 1).unwrap();
        assert_eq!(p.rank(), 0);
        let p0 = g.map_p_star(0, 0).unwrap();
        assert_eq!(p0.rank(), 1);
        let d = g.map_delta_star(3, 1).unwrap();
        assert_eq!((d.rows(), d.cols(), d.rank()), (1, 1, 1));
        assert!(g.map_delta_star(0, 0).unwrap().is_zero());
        assert_eq!(g.map_j_star(2, 0).unwrap().cols(), 0);
    }

    #[test]
    fn e1_maps() {
        let g = GysinSequence::new(&m(E1), 10).unwrap();
        let p = g.map_p_star(2, 1).unwrap();
        assert_eq!((p.rows(), p.cols(), p.rank()), (1, 2, 1));
        // δ*[z] = [x]
        let hw = g.quotient_cohomology();
        let z = Polynomial::generator(4, 1);
        let c = hw.reduce_at(3, Some(1), &z).unwrap();
        assert!(!c.is_zero());
        let image = g.connecting(&z, 3, 1).unwrap().unwrap();
        let x = Polynomial::generator(5, 0);
        assert_eq!(
            image,
            g.algebra_cohomology().reduce_at(2, Some(1), &x).unwrap()
        );
    }

    #[test]
    fn s2_exact() {
        let r = verify_exactness(&m(S2), Some(4)).unwrap();
        assert!(r.overall, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn preconditions() {
        assert_eq!(
            verify_exactness(&m("generator x 3\ngenerator y 3"), None).unwrap_err(),
            Error::FirstGeneratorOdd("x".into())
        );
        assert_eq!(
            verify_exactness(&m("generator x 2\ngenerator y 3"), None).unwrap_err(),
            Error::NotCertified
        );
    }

    #[test]
    fn window_dims() {
        let w = gysin_window(&m(S2), 3, 1, None).unwrap();
        assert_eq!(w.dims.w_middle, 1);
        assert_eq!(w.dims.v_next, 1);
        assert!(w.checks().iter().all(|c| c.exact));
    }
}
