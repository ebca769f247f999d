//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers: Hermite normal
//! form with a unimodular transform, integer solutions of linear systems
//! together with a kernel basis, and fraction-free determinants.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. All rows must have
    /// the same length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has length {}, expected {}",
                    i + 1,
                    row.len(),
                    cols
                )));
            }
            data.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Ok(IntegerMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has length {}, expected {}",
                    i + 1,
                    row.len(),
                    cols
                )));
            }
            data.extend(row);
        }
        Ok(IntegerMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Sub-matrix made of the given rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> IntegerMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        IntegerMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Entries as machine integers, failing if any entry does not fit.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| to_i64_vec(self.row(i))).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[r * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    /// row[target] -= factor * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.data[source * self.cols + j].clone();
            self.data[target * self.cols + j] -= factor * s;
        }
    }

    /// Replaces rows (p, r) by (x·p + y·r, u·p + w·r).
    fn combine_rows(&mut self, p: usize, r: usize, coeffs: [&BigInt; 4]) {
        let [x, y, u, w] = coeffs;
        for j in 0..self.cols {
            let a = self.data[p * self.cols + j].clone();
            let b = self.data[r * self.cols + j].clone();
            self.data[p * self.cols + j] = x * &a + y * &b;
            self.data[r * self.cols + j] = u * &a + w * &b;
        }
    }
}

impl Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub(crate) fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            x.to_i64()
                .ok_or_else(|| Error::Overflow(format!("{x} does not fit in 64 bits")))
        })
        .collect()
}

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `U` unimodular and `U·M = H`. `H` is in row echelon
/// form, every pivot is positive and the entries above a pivot lie in
/// `[0, pivot)`. Zero rows sit at the bottom.
pub fn hermite_normal_form(m: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let mut h = m.clone();
    let mut u = IntegerMatrix::identity(m.rows());
    let mut pivot_row = 0;

    for col in 0..m.cols() {
        if pivot_row == m.rows() {
            break;
        }
        for r in pivot_row + 1..m.rows() {
            if h[(r, col)].is_zero() {
                continue;
            }
            let a = h[(pivot_row, col)].clone();
            let b = h[(r, col)].clone();
            let eg = a.extended_gcd(&b);
            // [[x, y], [-b/g, a/g]] has determinant (x·a + y·b)/g = 1
            let u_coef = -(&b / &eg.gcd);
            let w_coef = &a / &eg.gcd;
            let coeffs = [&eg.x, &eg.y, &u_coef, &w_coef];
            h.combine_rows(pivot_row, r, coeffs);
            u.combine_rows(pivot_row, r, coeffs);
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let pivot = h[(pivot_row, col)].clone();
        for r in 0..pivot_row {
            let q = h[(r, col)].div_floor(&pivot);
            h.sub_row_multiple(r, pivot_row, &q);
            u.sub_row_multiple(r, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Rank of the row lattice of `m`.
pub fn rank(m: &IntegerMatrix) -> usize {
    let (h, _) = hermite_normal_form(m);
    (0..h.rows()).filter(|&i| !h.is_zero_row(i)).count()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntegerMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                Some(r) => {
                    a.swap_rows(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = v / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// An integer solution set `x₀ + span_Z(kernel)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiophantineSolution {
    pub particular: Vec<BigInt>,
    /// Basis of the integer kernel, in Hermite normal form.
    pub kernel: Vec<Vec<BigInt>>,
}

/// A linear system `A·x = b` with the Hermite decomposition of `Aᵀ`
/// precomputed, so that many right-hand sides can be solved cheaply.
#[derive(Debug, Clone)]
pub struct DiophantineSystem {
    rows: usize,
    cols: usize,
    // HNF of Aᵀ: U·Aᵀ = H
    h: IntegerMatrix,
    u: IntegerMatrix,
    pivots: Vec<usize>,
    kernel: Vec<Vec<BigInt>>,
}

impl DiophantineSystem {
    pub fn new(a: &IntegerMatrix) -> Self {
        let (h, u) = hermite_normal_form(&a.transpose());
        let mut pivots = Vec::new();
        for i in 0..h.rows() {
            match h.row(i).iter().position(|x| !x.is_zero()) {
                Some(p) => pivots.push(p),
                None => break,
            }
        }
        let r = pivots.len();
        // A·Uᵀ = Hᵀ, whose last n - r columns vanish.
        let kernel = if r < u.rows() {
            let raw = IntegerMatrix {
                rows: u.rows() - r,
                cols: u.cols(),
                data: u.data[r * u.cols()..].to_vec(),
            };
            let (kh, _) = hermite_normal_form(&raw);
            (0..kh.rows())
                .filter(|&i| !kh.is_zero_row(i))
                .map(|i| kh.row_vec(i))
                .collect()
        } else {
            Vec::new()
        };
        DiophantineSystem {
            rows: a.rows(),
            cols: a.cols(),
            h,
            u,
            pivots,
            kernel,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn kernel(&self) -> &[Vec<BigInt>] {
        &self.kernel
    }

    /// One integer solution of `A·x = b`, if any.
    pub fn particular(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, system has {} equations",
                b.len(),
                self.rows
            )));
        }
        // Solve Hᵀ·y = b, then x = Uᵀ·y.
        let mut y = vec![BigInt::zero(); self.cols];
        for (i, &p) in self.pivots.iter().enumerate() {
            let mut rhs = b[p].clone();
            for (k, yk) in y.iter().enumerate().take(i) {
                rhs -= &self.h[(k, p)] * yk;
            }
            let (q, rem) = rhs.div_rem(&self.h[(i, p)]);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
        for (row, bj) in b.iter().enumerate() {
            let lhs: BigInt = (0..self.pivots.len())
                .map(|k| &self.h[(k, row)] * &y[k])
                .sum();
            if &lhs != bj {
                return Ok(None);
            }
        }
        let x = (0..self.cols)
            .map(|j| (0..self.cols).map(|k| &self.u[(k, j)] * &y[k]).sum())
            .collect();
        Ok(Some(x))
    }

    pub fn solve(&self, b: &[BigInt]) -> Result<Option<DiophantineSolution>> {
        Ok(self.particular(b)?.map(|particular| DiophantineSolution {
            particular,
            kernel: self.kernel.clone(),
        }))
    }
}

/// Integer solutions of `A·x = b`: `None` when no integer solution exists.
pub fn solve_diophantine(a: &IntegerMatrix, b: &[BigInt]) -> Result<Option<DiophantineSolution>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    DiophantineSystem::new(a).solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn mat(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows).unwrap()
    }

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    fn assert_hnf(m: &IntegerMatrix) {
        let (h, u) = hermite_normal_form(m);
        assert_eq!(u.mul(m).unwrap(), h);
        assert_eq!(determinant(&u).unwrap().abs(), BigInt::one());
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for i in 0..h.rows() {
            match h.row(i).iter().position(|x| !x.is_zero()) {
                None => seen_zero = true,
                Some(p) => {
                    assert!(!seen_zero, "nonzero row below a zero row");
                    assert!(last_pivot.is_none_or(|lp| p > lp));
                    assert!(h[(i, p)].is_positive());
                    for k in 0..i {
                        assert!(!h[(k, p)].is_negative() && h[(k, p)] < h[(i, p)]);
                    }
                    last_pivot = Some(p);
                }
            }
        }
    }

    #[test]
    fn hnf_identity() {
        let id = IntegerMatrix::identity(3);
        let (h, u) = hermite_normal_form(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn hnf_two_by_two() {
        let m = mat(&[&[2, 4], &[1, 3]]);
        assert_hnf(&m);
        let (h, _) = hermite_normal_form(&m);
        assert_eq!(&h[(0, 0)] * &h[(1, 1)], BigInt::from(2));
        assert!(h[(1, 0)].is_zero());
    }

    #[test]
    fn hnf_zero_matrix() {
        let z = IntegerMatrix::zeros(2, 2);
        let (h, u) = hermite_normal_form(&z);
        assert!(h.is_zero());
        assert_eq!(determinant(&u).unwrap().abs(), BigInt::one());
    }

    #[test]
    fn diophantine_identity() {
        let sol = solve_diophantine(&IntegerMatrix::identity(2), &big(&[5, -3]))
            .unwrap()
            .unwrap();
        assert_eq!(sol.particular, big(&[5, -3]));
        assert!(sol.kernel.is_empty());
    }

    #[test]
    fn diophantine_parity_obstruction() {
        assert_eq!(solve_diophantine(&mat(&[&[2]]), &big(&[1])).unwrap(), None);
    }

    #[test]
    fn diophantine_balanced_equation() {
        let sol = solve_diophantine(&mat(&[&[1, 1]]), &big(&[0]))
            .unwrap()
            .unwrap();
        assert_eq!(sol.particular, big(&[0, 0]));
        assert_eq!(sol.kernel, vec![big(&[1, -1])]);
    }

    #[test]
    fn diophantine_dimension_mismatch() {
        assert!(matches!(
            solve_diophantine(&IntegerMatrix::identity(2), &big(&[1])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn diophantine_inconsistent_overdetermined() {
        // x = 1 and x = 2
        assert_eq!(
            solve_diophantine(&mat(&[&[1], &[1]]), &big(&[1, 2])).unwrap(),
            None
        );
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(
            determinant(&IntegerMatrix::identity(4)).unwrap(),
            BigInt::one()
        );
        assert_eq!(
            determinant(&mat(&[&[1, -1], &[0, 1]])).unwrap(),
            BigInt::one()
        );
        assert_eq!(
            determinant(&mat(&[&[2, 0], &[0, 2]])).unwrap(),
            BigInt::from(4)
        );
        assert!(matches!(
            determinant(&mat(&[&[1, 2, 3]])),
            Err(Error::NotSquare { rows: 1, cols: 3 })
        ));
    }

    #[test]
    fn determinant_needs_pivoting() {
        assert_eq!(
            determinant(&mat(&[&[0, 1], &[1, 0]])).unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            determinant(&mat(&[&[0, 0, 1], &[0, 2, 0], &[3, 0, 0]])).unwrap(),
            BigInt::from(-6)
        );
    }

    #[test]
    fn hnf_entries_exceed_machine_words() {
        let m = mat(&[
            &[i64::MAX, i64::MAX - 1],
            &[i64::MAX - 2, i64::MAX - 7],
            &[3, 5],
        ]);
        assert_hnf(&m);
    }

    fn small_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1..=max_dim, 1..=max_dim)
            .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..=4, c), r))
    }

    proptest! {
        #[test]
        fn hnf_postconditions(rows in small_matrix(5)) {
            assert_hnf(&IntegerMatrix::from_rows(&rows).unwrap());
        }

        #[test]
        fn determinant_matches_cofactor_expansion(
            rows in (1usize..=4).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-5i64..=5, n), n))
        ) {
            let m = IntegerMatrix::from_rows(&rows).unwrap();
            prop_assert_eq!(determinant(&m).unwrap(), BigInt::from(cofactor_det(&rows)));
        }

        #[test]
        fn diophantine_solutions_and_kernel(rows in small_matrix(4), x in prop::collection::vec(-3i64..=3, 4)) {
            let a = IntegerMatrix::from_rows(&rows).unwrap();
            let x = big(&x[..a.cols()]);
            let b = a.mul_vec(&x).unwrap();
            let sol = solve_diophantine(&a, &b).unwrap().expect("b was built from an integer point");
            prop_assert_eq!(a.mul_vec(&sol.particular).unwrap(), b);
            for k in &sol.kernel {
                prop_assert!(a.mul_vec(k).unwrap().iter().all(Zero::is_zero));
            }
            prop_assert_eq!(sol.kernel.len(), a.cols() - rank(&a));
            if !sol.kernel.is_empty() {
                let kb = IntegerMatrix::from_big_rows(sol.kernel.clone(), a.cols()).unwrap();
                prop_assert_eq!(rank(&kb), sol.kernel.len());
            }
        }
    }
}
