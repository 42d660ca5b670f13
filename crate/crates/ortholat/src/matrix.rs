//! Dense matrices over any [`Ring`], with p-adic norm helpers.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::padic::{norm_max, Padic, PadicCtx};
use crate::quadext::QuadExt;
use crate::scalar::{Field, Ring};

#[derive(Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?}, ", self.data[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<T> Mat<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Mat { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
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

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> std::result::Result<U, E>) -> std::result::Result<Mat<U>, E> {
        let data = self.data.iter().map(f).collect::<std::result::Result<Vec<U>, E>>()?;
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<T: Clone> Mat<T> {
    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn block_diag(&self, other: &Self, zero: &T) -> Self {
        let r = self.rows + other.rows;
        let c = self.cols + other.cols;
        Mat::from_fn(r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self[(i, j)].clone()
            } else if i >= self.rows && j >= self.cols {
                other[(i - self.rows, j - self.cols)].clone()
            } else {
                zero.clone()
            }
        })
    }
}

impl<T: Ring> Mat<T> {
    pub fn zeros_like(rows: usize, cols: usize, proto: &T) -> Self {
        let z = proto.zero_like();
        Mat::from_fn(rows, cols, |_, _| z.clone())
    }

    pub fn identity_like(n: usize, proto: &T) -> Self {
        let z = proto.zero_like();
        let o = proto.one_like();
        Mat::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn diag(entries: &[T]) -> Self {
        let n = entries.len();
        assert!(n > 0, "empty diagonal");
        let z = entries[0].zero_like();
        Mat::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { z.clone() })
    }

    /// Matrix from small integer entries.
    pub fn from_i64(rows: &[&[i64]], proto: &T) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Mat::from_fn(r, c, |i, j| proto.from_i64_like(rows[i][j]))
    }

    fn proto(&self) -> &T {
        &self.data[0]
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let z = self.proto().zero_like();
        Mat::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = z.clone();
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero_el() {
                    continue;
                }
                acc = acc.add_ref(&a.mul_ref(&o[(k, j)]));
            }
            acc
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols, "shape mismatch in sum");
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].add_ref(&o[(i, j)]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols, "shape mismatch in difference");
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].sub_ref(&o[(i, j)]))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg_ref())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul_ref(s))
    }

    /// `[self, o] = self·o − o·self`.
    pub fn bracket(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> T {
        let mut acc = self.proto().zero_like();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add_ref(&self[(i, i)]);
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Mat::identity_like(self.rows, self.proto());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero_el())
    }

    /// `v·M` for a row vector `v`.
    pub fn left_apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let mut acc = self.proto().zero_like();
                for (i, vi) in v.iter().enumerate() {
                    acc = acc.add_ref(&vi.mul_ref(&self[(i, j)]));
                }
                acc
            })
            .collect()
    }

    /// Determinant by cofactor expansion; fine for the small sizes here and
    /// valid over any commutative ring.
    pub fn det_laplace(&self) -> T {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            panic!("determinant of empty matrix");
        }
        let idx: Vec<usize> = (0..n).collect();
        laplace(self, &idx, &idx)
    }

    /// `Λ²` matrix of 2×2 minors, rows and columns indexed by pairs `i<j`
    /// in lexicographic order.
    pub fn wedge2(&self) -> Self {
        let rp: Vec<(usize, usize)> = pairs(self.rows);
        let cp: Vec<(usize, usize)> = pairs(self.cols);
        Mat::from_fn(rp.len(), cp.len(), |a, b| {
            let (i, k) = rp[a];
            let (j, l) = cp[b];
            self[(i, j)].mul_ref(&self[(k, l)]).sub_ref(&self[(i, l)].mul_ref(&self[(k, j)]))
        })
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            v.push((i, j));
        }
    }
    v
}

fn laplace<T: Ring>(m: &Mat<T>, rows: &[usize], cols: &[usize]) -> T {
    if rows.len() == 1 {
        return m[(rows[0], cols[0])].clone();
    }
    if rows.len() == 2 {
        let (a, b) = (rows[0], rows[1]);
        let (c, d) = (cols[0], cols[1]);
        return m[(a, c)].mul_ref(&m[(b, d)]).sub_ref(&m[(a, d)].mul_ref(&m[(b, c)]));
    }
    let mut acc = m[(rows[0], cols[0])].zero_like();
    for (k, &c) in cols.iter().enumerate() {
        let x = &m[(rows[0], c)];
        if x.is_zero_el() {
            continue;
        }
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|&cc| cc != c).collect();
        let minor = laplace(m, &rows[1..], &sub_cols);
        let term = x.mul_ref(&minor);
        acc = if k % 2 == 0 { acc.add_ref(&term) } else { acc.sub_ref(&term) };
    }
    acc
}

impl<T: Field> Mat<T> {
    /// Gaussian elimination with pivots chosen by [`Field::pivot_weight`].
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.proto().one_like();
        for c in 0..n {
            let piv = (c..n)
                .filter_map(|r| a[(r, c)].pivot_weight().map(|w| (r, w)))
                .fold(None, |best: Option<(usize, f64)>, (r, w)| match best {
                    Some((_, bw)) if bw >= w => best,
                    _ => Some((r, w)),
                });
            let Some((r, _)) = piv else {
                return self.proto().zero_like();
            };
            if r != c {
                a.swap_rows(r, c);
                det = det.neg_ref();
            }
            let pv = a[(c, c)].clone();
            det = det.mul_ref(&pv);
            let inv = pv.inv_ref().expect("pivot is nonzero");
            for i in c + 1..n {
                let f = a[(i, c)].mul_ref(&inv);
                if f.is_zero_el() {
                    continue;
                }
                for j in c..n {
                    let t = a[(c, j)].mul_ref(&f);
                    a[(i, j)] = a[(i, j)].sub_ref(&t);
                }
            }
        }
        det
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity_like(n, self.proto());
        for c in 0..n {
            let piv = (c..n)
                .filter_map(|r| a[(r, c)].pivot_weight().map(|w| (r, w)))
                .fold(None, |best: Option<(usize, f64)>, (r, w)| match best {
                    Some((_, bw)) if bw >= w => best,
                    _ => Some((r, w)),
                });
            let Some((r, _)) = piv else {
                return Err(Error::DivisionByZero);
            };
            a.swap_rows(r, c);
            inv.swap_rows(r, c);
            let pinv = a[(c, c)].inv_ref().ok_or(Error::DivisionByZero)?;
            for j in 0..n {
                a[(c, j)] = a[(c, j)].mul_ref(&pinv);
                inv[(c, j)] = inv[(c, j)].mul_ref(&pinv);
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let f = a[(i, c)].clone();
                if f.is_zero_el() {
                    continue;
                }
                for j in 0..n {
                    let t = a[(c, j)].mul_ref(&f);
                    a[(i, j)] = a[(i, j)].sub_ref(&t);
                    let t = inv[(c, j)].mul_ref(&f);
                    inv[(i, j)] = inv[(i, j)].sub_ref(&t);
                }
            }
        }
        Ok(inv)
    }

    /// Solves `x·self = b` for a row vector `x`.
    pub fn solve_left(&self, b: &[T]) -> Result<Vec<T>> {
        Ok(self.inverse()?.left_apply(b))
    }

    /// Row echelon reduction of `[self | extra]`; returns the pivot columns
    /// and the reduced augmented matrix.
    fn echelon(&self, extra: Option<&[T]>) -> (Vec<usize>, Mat<T>) {
        let (n, m) = (self.rows, self.cols);
        let w = m + extra.is_some() as usize;
        let mut a = Mat::from_fn(n, w, |i, j| if j < m { self[(i, j)].clone() } else { extra.unwrap()[i].clone() });
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let piv = (r..n)
                .filter_map(|i| a[(i, c)].pivot_weight().map(|wt| (i, wt)))
                .fold(None, |best: Option<(usize, f64)>, (i, wt)| match best {
                    Some((_, bw)) if bw >= wt => best,
                    _ => Some((i, wt)),
                });
            let Some((i, _)) = piv else { continue };
            a.swap_rows(i, r);
            let inv = a[(r, c)].inv_ref().expect("pivot is nonzero");
            for j in c..w {
                a[(r, j)] = a[(r, j)].mul_ref(&inv);
            }
            for i in 0..n {
                if i == r || a[(i, c)].is_zero_el() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..w {
                    let t = a[(r, j)].mul_ref(&f);
                    a[(i, j)] = a[(i, j)].sub_ref(&t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, a)
    }

    pub fn rank(&self) -> usize {
        self.echelon(None).0.len()
    }

    /// The unique `x` with `self·x = b` for a matrix of full column rank.
    pub fn solve_column(&self, b: &[T]) -> Result<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let (pivots, a) = self.echelon(Some(b));
        if pivots.len() != self.cols {
            return Err(Error::invalid("columns are linearly dependent"));
        }
        if (pivots.len()..self.rows).any(|i| !a[(i, self.cols)].is_zero_el()) {
            return Err(Error::invalid("right-hand side is not in the column span"));
        }
        Ok((0..self.cols).map(|i| a[(i, self.cols)].clone()).collect())
    }
}

impl Mat<i64> {
    pub fn to_bigrational(&self) -> Mat<BigRational> {
        self.map(|&x| BigRational::from_integer(BigInt::from(x)))
    }

    pub fn to_padic(&self, ctx: &Arc<PadicCtx>) -> Mat<Padic> {
        self.map(|&x| ctx.int(x))
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(|&x| x as f64)
    }

    pub fn identity(n: usize) -> Self {
        Mat::identity_like(n, &0i64)
    }
}

impl Mat<BigRational> {
    pub fn to_padic(&self, ctx: &Arc<PadicCtx>) -> Mat<Padic> {
        self.map(|x| ctx.rational(x))
    }
}

impl Mat<Padic> {
    /// `log_p ‖g‖_p`, `None` for the zero matrix.
    pub fn norm_exp(&self) -> Option<i64> {
        self.data.iter().fold(None, |acc, x| norm_max(acc, x.norm_exp()))
    }

    /// `log_p ‖Λ²g‖_p`.
    pub fn wedge2_norm_exp(&self) -> Option<i64> {
        self.wedge2().norm_exp()
    }

    pub fn ctx(&self) -> &Arc<PadicCtx> {
        self.data[0].ctx()
    }

    /// Entrywise congruence modulo `p^k`.
    pub fn congruent(&self, o: &Mat<Padic>, k: i64) -> bool {
        self.data.iter().zip(&o.data).all(|(a, b)| a.congruent(b, k))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integral())
    }

    /// In `GL_n(Z_p)`: integral with unit determinant.
    pub fn is_unimodular(&self) -> bool {
        self.is_integral() && self.det().is_unit()
    }

    pub fn min_abs_precision(&self) -> i64 {
        self.data.iter().map(|x| x.abs_precision()).min().unwrap_or(i64::MAX)
    }

    pub fn truncate_abs(&self, abs: i64) -> Self {
        self.map(|x| x.truncate_abs(abs))
    }
}

impl Mat<QuadExt> {
    pub fn norm_exp(&self) -> Option<i64> {
        self.data.iter().filter_map(|x| x.valuation().ok()).min().map(|v| -v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn rational_inverse_roundtrip() {
        let m = Mat::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]], &0i64).to_bigrational();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity_like(3, &BigRational::zero()));
        assert_eq!(m.det(), BigRational::from_integer(BigInt::from(18)));
        assert_eq!(m.det_laplace(), m.det());
    }

    #[test]
    fn integer_laplace() {
        let m = Mat::from_i64(&[&[1, 2, 3, 4], &[0, 1, 0, 2], &[5, 0, 1, 0], &[0, 0, 1, 1]], &0i64);
        assert_eq!(BigRational::from_integer(BigInt::from(m.det_laplace())), m.to_bigrational().det());
    }

    #[test]
    fn norms() {
        let ctx = PadicCtx::new(5, 16).unwrap();
        let g = Mat::diag(&[ctx.p_pow(-2), ctx.p_pow(2), ctx.p_pow(-1), ctx.p_pow(1)]);
        assert_eq!(g.norm_exp(), Some(2));
        assert_eq!(g.wedge2_norm_exp(), Some(3));
        let e = Mat::identity_like(4, &ctx.one());
        assert_eq!(e.norm_exp(), Some(0));
        assert_eq!(e.wedge2_norm_exp(), Some(0));
        assert!(BigRational::one().is_one());
    }
}
