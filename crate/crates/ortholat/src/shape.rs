//! Reduction of positive definite integer Gram matrices and the shape
//! observables built from them.
//!
//! In dimension at most four a basis that satisfies the Minkowski
//! conditions with coefficients in {−1, 0, 1} is Minkowski reduced, and its
//! diagonal lists the squared successive minima.

use num_traits::{Float, FromPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::sphere::{int_det, ortho_lattice, SpherePoint};

/// Shape data of a lattice of rank `n ≤ 4`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeObservables<F = f64> {
    pub reduced_gram: Vec<Vec<i64>>,
    /// Successive minima after rescaling to covolume one.
    pub minima: Vec<F>,
    /// `λ_i / λ₁`.
    pub ratios: Vec<F>,
    /// `1 / λ₁`.
    pub ht: F,
}

fn gram_of(t: &[Vec<i128>], g0: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = t.len();
    let mut tg = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            tg[i][j] = (0..n).map(|k| t[i][k] * g0[k][j]).sum();
        }
    }
    let mut g = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            g[i][j] = (0..n).map(|k| tg[i][k] * t[j][k]).sum();
        }
    }
    g
}

fn gso(g: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut bstar = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j] as f64;
            for k in 0..j {
                s -= mu[j][k] * mu[i][k] * bstar[k];
            }
            mu[i][j] = s / bstar[j];
        }
        let mut s = g[i][i] as f64;
        for k in 0..i {
            s -= mu[i][k] * mu[i][k] * bstar[k];
        }
        bstar[i] = s;
    }
    (mu, bstar)
}

fn row_sub(t: &mut [Vec<i128>], k: usize, j: usize, q: i128) {
    for c in 0..t[k].len() {
        let x = t[j][c];
        t[k][c] -= q * x;
    }
}

/// LLL with `δ = 0.99` on the basis encoded by `t` relative to `g0`.
fn lll(t: &mut [Vec<i128>], g0: &[Vec<i128>]) {
    let n = t.len();
    let mut k = 1;
    let mut guard = 0;
    while k < n {
        guard += 1;
        assert!(guard < 100_000, "LLL did not terminate");
        for j in (0..k).rev() {
            let g = gram_of(t, g0);
            let (mu, _) = gso(&g);
            let q = mu[k][j].round() as i128;
            if q != 0 {
                row_sub(t, k, j, q);
            }
        }
        let g = gram_of(t, g0);
        let (mu, b) = gso(&g);
        if b[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            k += 1;
        } else {
            t.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}

fn coeff_vectors(n: usize) -> Vec<Vec<i128>> {
    let mut out = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = Vec::with_capacity(n);
        let mut x = code;
        for _ in 0..n {
            c.push((x % 3) as i128 - 1);
            x /= 3;
        }
        if c.iter().any(|&y| y != 0) {
            out.push(c);
        }
    }
    out
}

fn qform(g: &[Vec<i128>], c: &[i128]) -> i128 {
    let n = g.len();
    let mut s = 0;
    for i in 0..n {
        for j in 0..n {
            s += c[i] * g[i][j] * c[j];
        }
    }
    s
}

/// Minkowski reduction of a positive definite integer Gram matrix of rank
/// at most 4. Returns the reduced Gram `T G Tᵀ` and `T`.
pub fn minkowski_reduce(gram: &Mat<i64>) -> Result<(Mat<i64>, Mat<i64>)> {
    let n = gram.rows();
    if n == 0 || n > 4 || !gram.is_square() {
        return Err(Error::invalid("Minkowski reduction needs a square Gram of size 1..=4"));
    }
    let g0: Vec<Vec<i128>> = (0..n).map(|i| gram.row(i).iter().map(|&x| x as i128).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            if g0[i][j] != g0[j][i] {
                return Err(Error::invalid("Gram matrix not symmetric"));
            }
        }
        let minor: Vec<usize> = (0..=i).collect();
        if int_det(&gram.submatrix(&minor, &minor)) <= 0 {
            return Err(Error::invalid("Gram matrix not positive definite"));
        }
    }
    let mut t: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    lll(&mut t, &g0);
    let coeffs = coeff_vectors(n);
    loop {
        let g = gram_of(&t, &g0);
        // sort by norm, ties by current position
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (g[i][i], i));
        if order.iter().enumerate().any(|(a, &b)| a != b) {
            t = order.iter().map(|&i| t[i].clone()).collect();
            continue;
        }
        let mut improved = false;
        'outer: for k in 0..n {
            for c in &coeffs {
                if c[k..].iter().all(|&x| x == 0) {
                    continue;
                }
                let q = qform(&g, c);
                if q < g[k][k] {
                    let j = (k..n).find(|&j| c[j] != 0).unwrap();
                    let row: Vec<i128> = (0..n).map(|col| (0..n).map(|i| c[i] * t[i][col]).sum()).collect();
                    t[j] = row;
                    improved = true;
                    break 'outer;
                }
            }
        }
        if !improved {
            break;
        }
    }
    // sign convention: superdiagonal entries nonpositive
    for i in 1..n {
        let g = gram_of(&t, &g0);
        if g[i - 1][i] > 0 {
            for x in t[i].iter_mut() {
                *x = -*x;
            }
        }
    }
    let g = gram_of(&t, &g0);
    let to64 = |x: i128| i64::try_from(x).map_err(|_| Error::internal("reduced entry overflow"));
    let gm = Mat::from_vec(n, n, g.iter().flatten().map(|&x| to64(x)).collect::<Result<Vec<_>>>()?);
    let tm = Mat::from_vec(n, n, t.iter().flatten().map(|&x| to64(x)).collect::<Result<Vec<_>>>()?);
    Ok((gm, tm))
}

/// Shape observables of the lattice with Gram `gram`, rescaled to covolume
/// one.
pub fn shape_from_gram<F: Float + FromPrimitive>(gram: &Mat<i64>) -> Result<ShapeObservables<F>> {
    let (red, _) = minkowski_reduce(gram)?;
    let n = red.rows();
    let det = int_det(&red);
    let det_f = F::from_i128(det).ok_or_else(|| Error::internal("determinant not representable"))?;
    let scale = det_f.powf(F::one() / F::from_usize(2 * n).unwrap());
    let minima: Vec<F> = (0..n).map(|i| F::from_i64(red[(i, i)]).unwrap().sqrt() / scale).collect();
    let ratios = minima.iter().map(|&m| m / minima[0]).collect();
    let ht = height_surrogate(minima[0]);
    let reduced_gram = (0..n).map(|i| red.row(i).to_vec()).collect();
    Ok(ShapeObservables { reduced_gram, minima, ratios, ht })
}

/// `1/λ₁` of a covolume-one lattice.
pub fn height_surrogate<F: Float>(lambda1: F) -> F {
    F::one() / lambda1
}

/// Shape of `Λ_v`.
pub fn shape(v: &SpherePoint) -> Result<ShapeObservables> {
    shape_from_gram(&ortho_lattice(v)?.gram)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic() {
        let s: ShapeObservables = shape_from_gram(&Mat::<i64>::identity(3)).unwrap();
        assert_eq!(s.ratios, vec![1.0, 1.0, 1.0]);
        assert!((s.ht - 1.0).abs() < 1e-12);
    }

    #[test]
    fn skewed_basis_reduces() {
        let g = Mat::from_i64(&[&[1, 5, 0], &[5, 26, 0], &[0, 0, 1]], &0i64);
        let (red, t) = minkowski_reduce(&g).unwrap();
        assert_eq!(red, Mat::<i64>::identity(3));
        assert_eq!(int_det(&t).abs(), 1);
    }

    #[test]
    fn rejects_indefinite() {
        let g = Mat::from_i64(&[&[0, 1], &[1, 0]], &0i64);
        assert!(minkowski_reduce(&g).is_err());
    }
}
