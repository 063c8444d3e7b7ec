//! Dense matrices of polynomials with optional degree labels.

use crate::error::{Error, Result};
use crate::poly::{PolyRing, Polynomial};

/// A `rows x cols` matrix of polynomials, row-major.
///
/// With labels present, entry `(i, j)` is zero or homogeneous of degree
/// `col_degrees[j] - row_degrees[i]`: the matrix is then a degree-zero map
/// `⊕ S(-col_degrees[j]) -> ⊕ S(-row_degrees[i])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
    row_degrees: Option<Vec<i32>>,
    col_degrees: Option<Vec<i32>>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![Polynomial::zero(); rows * cols],
            row_degrees: None,
            col_degrees: None,
        }
    }

    pub fn identity(ring: &PolyRing, n: usize) -> Self {
        let mut m = PolyMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        if rows.iter().any(|v| v.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Ok(PolyMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
            row_degrees: None,
            col_degrees: None,
        })
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<Polynomial>>) -> Self {
        let cols = columns.len();
        let mut m = PolyMatrix::zero(rows, cols);
        for (j, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, e) in col.into_iter().enumerate() {
                m.set(i, j, e);
            }
        }
        m
    }

    pub fn parse_rows(ring: &PolyRing, rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|t| ring.parse(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PolyMatrix::from_rows(rows)
    }

    /// Attach degree labels, checking homogeneity of every entry.
    pub fn with_degrees(mut self, row_degrees: Vec<i32>, col_degrees: Vec<i32>) -> Result<Self> {
        if row_degrees.len() != self.rows || col_degrees.len() != self.cols {
            return Err(Error::InvalidArgument("degree label count mismatch".into()));
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let want = col_degrees[j] - row_degrees[i];
                if e.homogeneous_degree().map(|d| d as i32) != Some(want) {
                    return Err(Error::NotHomogeneous(format!(
                        "entry ({}, {}) should be homogeneous of degree {want}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        self.row_degrees = Some(row_degrees);
        self.col_degrees = Some(col_degrees);
        Ok(self)
    }

    pub(crate) fn with_degrees_unchecked(mut self, row_degrees: Vec<i32>, col_degrees: Vec<i32>) -> Self {
        debug_assert_eq!(row_degrees.len(), self.rows);
        debug_assert_eq!(col_degrees.len(), self.cols);
        self.row_degrees = Some(row_degrees);
        self.col_degrees = Some(col_degrees);
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_degrees(&self) -> Option<&[i32]> {
        self.row_degrees.as_deref()
    }

    pub fn col_degrees(&self) -> Option<&[i32]> {
        self.col_degrees.as_deref()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Polynomial) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Polynomial>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = PolyMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// The transpose as a map between dual free modules: labels negate and
    /// swap, so the result is again a labelled degree-zero map.
    pub fn dual(&self) -> PolyMatrix {
        let mut t = self.transpose();
        if let (Some(r), Some(c)) = (&self.row_degrees, &self.col_degrees) {
            t.row_degrees = Some(c.iter().map(|d| -d).collect());
            t.col_degrees = Some(r.iter().map(|d| -d).collect());
        }
        t
    }

    pub fn mul(&self, ring: &PolyRing, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Polynomial::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = ring.add(&acc, &ring.mul(a, b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out.row_degrees = self.row_degrees.clone();
        out.col_degrees = other.col_degrees.clone();
        Ok(out)
    }

    pub fn map_entries(&self, mut f: impl FnMut(&Polynomial) -> Polynomial) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(&mut f).collect(),
            row_degrees: self.row_degrees.clone(),
            col_degrees: self.col_degrees.clone(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut m = PolyMatrix::zero(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Columns `a` followed by columns `b`.
    pub fn hconcat(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.rows != other.rows {
            return Err(Error::InvalidArgument("row count mismatch in hconcat".into()));
        }
        let mut cols = self.columns();
        cols.extend(other.columns());
        let mut m = PolyMatrix::from_columns(self.rows, cols);
        if let (Some(r), Some(c1), Some(c2)) = (&self.row_degrees, &self.col_degrees, &other.col_degrees) {
            m.row_degrees = Some(r.clone());
            m.col_degrees = Some(c1.iter().chain(c2.iter()).copied().collect());
        }
        Ok(m)
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn determinant(&self, ring: &PolyRing) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(ring.one());
        }
        let mut a: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut negate = false;
        let mut prev = ring.one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        negate = !negate;
                    }
                    None => return Ok(Polynomial::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = ring.sub(&ring.mul(&a[i][j], &a[k][k]), &ring.mul(&a[i][k], &a[k][j]));
                    a[i][j] = ring
                        .div_exact(&t, &prev)
                        .ok_or_else(|| Error::Engine("inexact Bareiss division".into()))?;
                }
                a[i][k] = Polynomial::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { ring.neg(&d) } else { d })
    }

    /// All `t x t` minors, row subsets outer and column subsets inner, both
    /// in lexicographic order.
    pub fn minors(&self, ring: &PolyRing, t: usize) -> Result<Vec<Polynomial>> {
        let mut out = Vec::new();
        self.for_each_minor(ring, t, |m| {
            out.push(m);
            true
        })?;
        Ok(out)
    }

    /// Visit minors in enumeration order until the callback returns `false`.
    pub fn for_each_minor(&self, ring: &PolyRing, t: usize, mut visit: impl FnMut(Polynomial) -> bool) -> Result<()> {
        if t == 0 || t > self.rows.min(self.cols) {
            return Err(Error::InvalidArgument(format!(
                "minor size {t} out of range for a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        for rs in subsets(self.rows, t) {
            for cs in subsets(self.cols, t) {
                let d = self.submatrix(&rs, &cs).determinant(ring)?;
                if !visit(d) {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Free-function form of [`PolyMatrix::minors`].
pub fn minors(ring: &PolyRing, m: &PolyMatrix, t: usize) -> Result<Vec<Polynomial>> {
    m.minors(ring, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring() -> PolyRing {
        PolyRing::standard(101).unwrap()
    }

    /// Independent oracle: Laplace expansion along the first row.
    fn cofactor_det(ring: &PolyRing, m: &PolyMatrix) -> Polynomial {
        let n = m.rows();
        if n == 0 {
            return ring.one();
        }
        let mut acc = Polynomial::zero();
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let sub = cofactor_det(ring, &m.submatrix(&rows, &cols));
            let term = ring.mul(m.get(0, j), &sub);
            acc = if j % 2 == 0 {
                ring.add(&acc, &term)
            } else {
                ring.sub(&acc, &term)
            };
        }
        acc
    }

    #[test]
    fn quadric_matrix_minor() {
        let r = ring();
        let m = PolyMatrix::parse_rows(&r, &[&["y", "z"], &["-w", "-x"]]).unwrap();
        assert_eq!(m.minors(&r, 2).unwrap(), vec![r.parse("-x*y + z*w").unwrap()]);
    }

    #[test]
    fn identity_minor() {
        let r = ring();
        assert_eq!(PolyMatrix::identity(&r, 3).minors(&r, 3).unwrap(), vec![r.one()]);
    }

    #[test]
    fn two_by_three_minors() {
        let r = ring();
        let m = PolyMatrix::parse_rows(&r, &[&["x", "y", "z"], &["0", "x", "y"]]).unwrap();
        let got = m.minors(&r, 2).unwrap();
        let expected: Vec<Polynomial> = ["x^2", "x*y", "y^2 - x*z"]
            .iter()
            .map(|s| r.parse(s).unwrap())
            .collect();
        assert_eq!(got, expected);
        for (cs, g) in subsets(3, 2).iter().zip(&got) {
            assert_eq!(&cofactor_det(&r, &m.submatrix(&[0, 1], cs)), g);
        }
    }

    #[test]
    fn minor_size_out_of_range() {
        let r = ring();
        let m = PolyMatrix::identity(&r, 2);
        assert!(m.minors(&r, 0).is_err());
        assert!(m.minors(&r, 3).is_err());
    }

    #[test]
    fn degree_labels_checked() {
        let r = ring();
        let m = PolyMatrix::parse_rows(&r, &[&["y", "z"], &["-w", "-x"]]).unwrap();
        assert!(m.clone().with_degrees(vec![1, 1], vec![2, 2]).is_ok());
        assert!(m.with_degrees(vec![0, 1], vec![2, 2]).is_err());
    }

    fn arb_entry() -> impl Strategy<Value = Vec<([u16; 4], u32)>> {
        prop::collection::vec(((0u16..2, 0u16..2, 0u16..2, 0u16..2), 0u32..101), 0..3)
            .prop_map(|v| v.into_iter().map(|((a, b, c, d), k)| ([a, b, c, d], k)).collect())
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<([u16; 4], u32)>>> {
        prop::collection::vec(arb_entry(), n * n)
    }

    fn build(r: &PolyRing, n: usize, v: Vec<Vec<([u16; 4], u32)>>) -> PolyMatrix {
        let mut m = PolyMatrix::zero(n, n);
        for (k, t) in v.into_iter().enumerate() {
            m.set(
                k / n,
                k % n,
                r.from_terms(t.into_iter().map(|(e, c)| (r.monomial(e), c)).collect()),
            );
        }
        m
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn det_multiplicative(n in 1usize..=3, a in arb_matrix(3), b in arb_matrix(3)) {
            let r = ring();
            let a = build(&r, n, a.into_iter().take(n * n).collect());
            let b = build(&r, n, b.into_iter().take(n * n).collect());
            let ab = a.mul(&r, &b).unwrap();
            let lhs = ab.determinant(&r).unwrap();
            let rhs = r.mul(&a.determinant(&r).unwrap(), &b.determinant(&r).unwrap());
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(lhs, cofactor_det(&r, &ab));
        }
    }
}
