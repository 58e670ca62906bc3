//! Exact linear algebra over the rationals.
//!
//! Everything here is dense: the degree slices of a desk-scale Sullivan
//! algebra have at most a few hundred monomials. Pivoting is deterministic
//! (first nonzero column, smallest row index) so two runs always produce the
//! same echelon forms and therefore the same cohomology representatives.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Dense rational matrix, row-major. Zero-sized shapes are legal and keep
/// their dimensions, which matters for maps out of or into zero spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(
            self.cols,
            v.len(),
            "shape mismatch in matrix-vector product"
        );
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    if self[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &f * &self[(r, j)];
                    self[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the null space, one vector per free column, in increasing
    /// free-column order. Each vector has a 1 in its free column.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[(r, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Clone, Debug)]
struct EchelonRow {
    pivot: usize,
    vector: Vec<Q>,
    /// Expression of `vector` in terms of the inserted originals.
    combo: Vec<Q>,
}

/// Incrementally built span of vectors in a fixed ambient dimension.
///
/// Every accepted vector gets an index. Reducing a query vector against the
/// span returns its coordinates with respect to the accepted vectors, which is
/// how cohomology classes are read off: accept coboundaries first, then
/// representatives, and the trailing coordinates are the class.
#[derive(Clone, Debug)]
pub struct Span {
    dim: usize,
    rows: Vec<EchelonRow>,
}

impl Span {
    pub fn new(dim: usize) -> Self {
        Span {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn reduce(&self, v: &[Q]) -> (Vec<Q>, Vec<Q>) {
        assert_eq!(v.len(), self.dim, "vector dimension mismatch");
        let mut rest = v.to_vec();
        // rest = v - sum_k coeff_k * row_k.vector
        let mut coeffs = vec![Q::zero(); self.rows.len()];
        for (k, row) in self.rows.iter().enumerate() {
            let f = rest[row.pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in rest.iter_mut().zip(&row.vector) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            coeffs[k] = f;
        }
        (rest, coeffs)
    }

    /// Expresses `v` in the accepted vectors, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        let (rest, coeffs) = self.reduce(v);
        if rest.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut out = vec![Q::zero(); self.rows.len()];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(&row.combo) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        Some(out)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).0.iter().all(Zero::is_zero)
    }

    /// Accepts `v` if it is independent of the current span; returns whether it was accepted.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let (mut rest, coeffs) = self.reduce(v);
        let Some(pivot) = rest.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let n = self.rows.len();
        let mut combo = vec![Q::zero(); n + 1];
        combo[n] = Q::one();
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in combo.iter_mut().zip(&row.combo) {
                if !x.is_zero() {
                    *o -= c * x;
                }
            }
        }
        let inv = rest[pivot].recip();
        for x in rest.iter_mut() {
            *x *= &inv;
        }
        for x in combo.iter_mut() {
            *x *= &inv;
        }
        for row in &mut self.rows {
            row.combo.push(Q::zero());
        }
        self.rows.push(EchelonRow {
            pivot,
            vector: rest,
            combo,
        });
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
            cols,
        )
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn zero_sized_shapes() {
        let a = Matrix::zeros(0, 3);
        assert_eq!(a.rank(), 0);
        assert_eq!(a.kernel().len(), 3);
        let b = Matrix::zeros(3, 0);
        assert!(b.kernel().is_empty());
        assert_eq!(a.mul(&Matrix::zeros(3, 2)).cols(), 2);
        assert_eq!(b.mul(&a).rows(), 3);
    }

    #[test]
    fn span_coordinates_recover_combination() {
        let mut s = Span::new(3);
        assert!(s.insert(&[q(1), q(1), q(0)]));
        assert!(s.insert(&[q(0), q(1), q(1)]));
        assert!(!s.insert(&[q(1), q(2), q(1)]));
        let c = s.coordinates(&[q(2), q(5), q(3)]).unwrap();
        assert_eq!(c, vec![q(2), q(3)]);
        assert!(s.coordinates(&[q(0), q(0), q(1)]).is_none());
    }
}
