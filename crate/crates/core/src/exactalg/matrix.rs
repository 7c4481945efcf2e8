use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AlgebraError, GaussQ, MultiPoly, UniPoly};

/// The commutative `Q(i)`-algebras that appear as matrix entries.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplication by a scalar of the coefficient field.
    fn scale(&self, c: &GaussQ) -> Self;
}

impl Ring for GaussQ {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &GaussQ) -> Self {
        self * c
    }
}

impl Ring for UniPoly {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &GaussQ) -> Self {
        UniPoly::scale(self, c)
    }
}

impl Ring for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &GaussQ) -> Self {
        MultiPoly::scale(self, c)
    }
}

/// Dense row-major matrix over a [`Ring`].
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type ScalarMatrix = Matrix<GaussQ>;
pub type PolyMatrix = Matrix<UniPoly>;
pub type MultiPolyMatrix = Matrix<MultiPoly>;

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.data.iter().enumerate().map(move |(n, v)| (n / self.cols, n % self.cols, v))
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(AlgebraError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    acc.add(&a.mul(b))
                }
            })
        }))
    }

    /// Shorthand for square matrices of matching size; panics on mismatch.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("matrix shapes")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("matrix shapes")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("matrix shapes")
    }

    pub fn scale_entries(&self, s: &T) -> Self {
        self.map(|a| a.mul(s))
    }

    pub fn scale(&self, c: &GaussQ) -> Self {
        self.map(|a| a.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.map(Ring::neg)
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Coefficients `c_0..c_n` of `det(y I - A) = sum c_j y^j`, by the
    /// Faddeev-LeVerrier recursion. Only divides by integers, so it works
    /// over any commutative `Q(i)`-algebra.
    pub fn char_poly_coeffs(&self) -> Result<Vec<T>, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::ShapeMismatch("characteristic polynomial of non-square matrix".into()));
        }
        let n = self.rows;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut m = Self::zeros(n, n);
        for step in 1..=n {
            // M_step = A M_{step-1} + c_{n-step+1} I
            m = self.mul(&m);
            for i in 0..n {
                let v = m.get(i, i).add(&coeffs[n - step + 1]);
                m.set(i, i, v);
            }
            let am = self.mul(&m);
            let inv = GaussQ::from_ratio(-1, step as i64);
            coeffs[n - step] = am.trace().scale(&inv);
        }
        Ok(coeffs)
    }

    pub fn det(&self) -> Result<T, AlgebraError> {
        let coeffs = self.char_poly_coeffs()?;
        let c0 = coeffs[0].clone();
        Ok(if self.rows.is_multiple_of(2) { c0 } else { c0.neg() })
    }
}

impl<T: Ring> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl<T: Ring + Serialize> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de, T: Ring + Deserialize<'de>> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<T>>::deserialize(deserializer)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

impl ScalarMatrix {
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| GaussQ::from_int(v)).collect()).collect())
            .expect("rectangular input")
    }

    /// Row echelon form by Bareiss fraction-free elimination. Returns the
    /// reduced rows and the pivot column of each nonzero row.
    fn echelon(&self) -> (Vec<Vec<GaussQ>>, Vec<usize>) {
        let mut rows = self.to_rows();
        let mut pivots = Vec::new();
        let mut prev = GaussQ::one();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !Ring::is_zero(&rows[i][col])) else {
                continue;
            };
            rows.swap(r, p);
            let piv = rows[r][col].clone();
            for i in (r + 1)..self.rows {
                let a = rows[i][col].clone();
                #[allow(clippy::needless_range_loop)]
                for j in 0..self.cols {
                    let v = &(&(&piv * &rows[i][j]) - &(&a * &rows[r][j])) / &prev;
                    rows[i][j] = v;
                }
            }
            prev = piv;
            pivots.push(col);
            r += 1;
        }
        rows.truncate(pivots.len());
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Self::identity(n).to_rows();
        for col in 0..n {
            let p = (col..n).find(|&i| !Ring::is_zero(&a[i][col])).ok_or(AlgebraError::Singular)?;
            a.swap(col, p);
            inv.swap(col, p);
            let s = a[col][col].inv().unwrap();
            for j in 0..n {
                a[col][j] = &a[col][j] * &s;
                inv[col][j] = &inv[col][j] * &s;
            }
            for i in 0..n {
                if i != col && !Ring::is_zero(&a[i][col]) {
                    let f = a[i][col].clone();
                    for j in 0..n {
                        a[i][j] = &a[i][j] - &(&f * &a[col][j]);
                        inv[i][j] = &inv[i][j] - &(&f * &inv[col][j]);
                    }
                }
            }
        }
        Matrix::from_rows(inv)
    }

    pub fn mul_vec(&self, v: &[GaussQ]) -> Vec<GaussQ> {
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(GaussQ::zero(), |acc, (a, b)| &acc + &(a * b))).collect()
    }
}

/// Basis of the right kernel `{v : M v = 0}`.
///
/// One vector per non-pivot column, in increasing column order, with a `1`
/// in that column and zeros in the other free columns. Pivots are the first
/// nonzero entry in column order, so the output is a function of the input.
pub fn kernel_basis(m: &ScalarMatrix) -> Vec<Vec<GaussQ>> {
    let (rows, pivots) = m.echelon();
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![GaussQ::zero(); m.cols()];
            v[f] = GaussQ::one();
            for (r, &pc) in pivots.iter().enumerate().rev() {
                let mut s = GaussQ::zero();
                for c in (pc + 1)..m.cols() {
                    if !Ring::is_zero(&rows[r][c]) {
                        s += &(&rows[r][c] * &v[c]);
                    }
                }
                v[pc] = -(&s / &rows[r][pc]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Rank via plain Gauss-Jordan reduction with division, written out
    /// separately from the Bareiss path.
    fn rank_oracle(rows: &[Vec<GaussQ>]) -> usize {
        let mut a = rows.to_vec();
        let ncols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..ncols {
            let Some(p) = (rank..a.len()).find(|&i| !Ring::is_zero(&a[i][col])) else { continue };
            a.swap(rank, p);
            let inv = a[rank][col].inv().unwrap();
            let pivot_row: Vec<GaussQ> = a[rank].iter().map(|x| x * &inv).collect();
            for (i, row) in a.iter_mut().enumerate() {
                if i != rank {
                    let f = row[col].clone();
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x = &*x - &(&f * y);
                    }
                }
            }
            a[rank] = pivot_row;
            rank += 1;
        }
        rank
    }

    #[test]
    fn kernel_examples() {
        let m = ScalarMatrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![vec![GaussQ::from_int(-1), GaussQ::from_int(1)]]);
        assert!(kernel_basis(&ScalarMatrix::identity(3)).is_empty());
    }

    #[test]
    fn rank_four_by_six_has_two_kernel_vectors() {
        let m = ScalarMatrix::from_int_rows(&[
            &[2, -1, 0, 3, 5, 1],
            &[0, 4, 1, -2, 0, 7],
            &[1, 1, -3, 0, 2, -1],
            &[5, 0, 2, 1, -4, 3],
        ]);
        assert_eq!(rank_oracle(&m.to_rows()), 4);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Ring::is_zero));
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let m = ScalarMatrix::from_int_rows(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det().unwrap(), GaussQ::from_int(18));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ScalarMatrix::identity(3));
        let sing = ScalarMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.inverse(), Err(AlgebraError::Singular));
    }

    #[test]
    fn char_poly_of_polynomial_matrix() {
        // [[0, z^2+1], [z^2-1, 0]] has det(y - A) = y^2 - z^4 + 1
        let a = PolyMatrix::from_rows(vec![
            vec![UniPoly::zero(), UniPoly::from_ints(&[1, 0, 1])],
            vec![UniPoly::from_ints(&[-1, 0, 1]), UniPoly::zero()],
        ])
        .unwrap();
        let c = a.char_poly_coeffs().unwrap();
        assert_eq!(c, vec![UniPoly::from_ints(&[1, 0, 0, 0, -1]), UniPoly::zero(), UniPoly::one()]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn kernel_vectors_annihilate_and_count_matches_rank(
            rows in 1usize..5, cols in 1usize..6,
            seed in prop::collection::vec(-3i64..=3, 30)
        ) {
            let m = ScalarMatrix::from_fn(rows, cols, |i, j| GaussQ::from_int(seed[i * 6 + j]));
            let k = kernel_basis(&m);
            prop_assert_eq!(k.len(), cols - rank_oracle(&m.to_rows()));
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(Ring::is_zero));
            }
        }
    }
}
