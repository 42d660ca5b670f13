//! Primitive integer points on spheres and their orthogonal lattices.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Mat;

/// A primitive `v ∈ Z^d` with `‖v‖² = D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpherePoint {
    v: Vec<i64>,
    disc: i64,
}

impl SpherePoint {
    pub fn new(v: Vec<i64>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::invalid("empty vector"));
        }
        let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g != 1 {
            return Err(Error::invalid(format!("{v:?} is not primitive")));
        }
        let disc = v.iter().map(|x| x * x).sum();
        Ok(SpherePoint { v, disc })
    }

    pub fn coords(&self) -> &[i64] {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn neg(&self) -> Self {
        SpherePoint { v: self.v.iter().map(|x| -x).collect(), disc: self.disc }
    }

    /// `v / √D` on the unit sphere.
    pub fn unit(&self) -> Vec<f64> {
        let s = (self.disc as f64).sqrt();
        self.v.iter().map(|&x| x as f64 / s).collect()
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 4 || d == 5 {
        Ok(())
    } else {
        Err(Error::invalid(format!("dimension {d} unsupported (use 4 or 5)")))
    }
}

/// Whether primitive points of norm `D` exist in dimension `d`.
pub fn feasible(d: usize, disc: i64) -> Result<bool> {
    check_dim(d)?;
    if disc < 1 {
        return Err(Error::invalid("D must be positive"));
    }
    Ok(d == 5 || disc % 8 != 0)
}

/// Representations `r = a² + b²` with `a ≥ b ≥ 0`, for all `r ≤ max`.
struct TwoSquares {
    start: Vec<u32>,
    pairs: Vec<(u32, u32)>,
}

impl TwoSquares {
    fn new(max: u64) -> Self {
        let mut by_r: Vec<(u64, u32, u32)> = Vec::new();
        let mut a = 0u64;
        while a * a <= max {
            let mut b = 0u64;
            while b <= a && a * a + b * b <= max {
                by_r.push((a * a + b * b, a as u32, b as u32));
                b += 1;
            }
            a += 1;
        }
        by_r.sort_unstable_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)));
        let mut start = vec![0u32; max as usize + 2];
        for &(r, _, _) in &by_r {
            start[r as usize + 1] += 1;
        }
        for i in 1..start.len() {
            start[i] += start[i - 1];
        }
        let pairs = by_r.into_iter().map(|(_, a, b)| (a, b)).collect();
        TwoSquares { start, pairs }
    }

    fn get(&self, r: u64) -> &[(u32, u32)] {
        &self.pairs[self.start[r as usize] as usize..self.start[r as usize + 1] as usize]
    }
}

/// A point of the form `a₁ ≥ a₂ ≥ … ≥ a_d ≥ 0` together with the size of
/// its orbit under signed permutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRep {
    pub v: Vec<i64>,
    pub orbit_size: u64,
}

/// Number of signed-permutation images of a vector.
pub fn orbit_size(v: &[i64]) -> u64 {
    let mut a: Vec<u64> = v.iter().map(|x| x.unsigned_abs()).collect();
    a.sort_unstable();
    let nonzero = a.iter().filter(|&&x| x != 0).count() as u32;
    let mut perms: u64 = (1..=a.len() as u64).product();
    let mut i = 0;
    while i < a.len() {
        let mut j = i;
        while j < a.len() && a[j] == a[i] {
            j += 1;
        }
        perms /= (1..=(j - i) as u64).product::<u64>();
        i = j;
    }
    perms << nonzero
}

/// All primitive points of norm `D` up to signed permutations, in
/// decreasing-lexicographic order of the sorted representative.
pub fn sphere_orbit_reps(d: usize, disc: i64) -> Result<Vec<OrbitRep>> {
    if !feasible(d, disc)? {
        return Ok(Vec::new());
    }
    let disc = disc as u64;
    let table = TwoSquares::new(disc);
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(d);
    reps_rec(d, disc, u64::MAX, &table, &mut prefix, &mut out);
    Ok(out)
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn reps_rec(d: usize, rem: u64, cap: u64, t: &TwoSquares, prefix: &mut Vec<i64>, out: &mut Vec<OrbitRep>) {
    let left = d - prefix.len();
    if left == 2 {
        for &(a, b) in t.get(rem) {
            let (a, b) = (a as u64, b as u64);
            if a > cap {
                continue;
            }
            let g = prefix.iter().fold(0i64, |g, &x| g.gcd(&x)).gcd(&(a as i64)).gcd(&(b as i64));
            if g != 1 {
                continue;
            }
            let mut v = prefix.clone();
            v.push(a as i64);
            v.push(b as i64);
            let orbit_size = orbit_size(&v);
            out.push(OrbitRep { v, orbit_size });
        }
        return;
    }
    // the largest remaining coordinate satisfies left·a² ≥ rem
    let hi = isqrt(rem).min(cap);
    let mut a = hi;
    loop {
        if (left as u64) * a * a < rem {
            break;
        }
        prefix.push(a as i64);
        reps_rec(d, rem - a * a, a, t, prefix, out);
        prefix.pop();
        if a == 0 {
            break;
        }
        a -= 1;
    }
}

/// Every signed permutation image of `v`, sorted and deduplicated.
pub fn signed_permutations(v: &[i64]) -> Vec<Vec<i64>> {
    let mut base: Vec<i64> = v.iter().map(|x| x.abs()).collect();
    base.sort_unstable();
    let mut perms = Vec::new();
    loop {
        perms.push(base.clone());
        if !next_permutation(&mut base) {
            break;
        }
    }
    let mut out = Vec::new();
    for p in perms {
        let nz: Vec<usize> = (0..p.len()).filter(|&i| p[i] != 0).collect();
        for mask in 0u32..(1 << nz.len()) {
            let mut q = p.clone();
            for (b, &i) in nz.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    q[i] = -q[i];
                }
            }
            out.push(q);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn next_permutation(a: &mut [i64]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// All primitive `v ∈ Z^d` with `‖v‖² = D`, lexicographically sorted.
pub fn enumerate_sphere(d: usize, disc: i64) -> Result<Vec<SpherePoint>> {
    let reps = sphere_orbit_reps(d, disc)?;
    let mut all: Vec<Vec<i64>> = Vec::new();
    for r in &reps {
        all.extend(signed_permutations(&r.v));
    }
    all.sort_unstable();
    Ok(all.into_iter().map(|v| SpherePoint { v, disc }).collect())
}

/// `|Q_D|` without materializing the points.
pub fn sphere_count(d: usize, disc: i64) -> Result<u64> {
    Ok(sphere_orbit_reps(d, disc)?.iter().map(|r| r.orbit_size).sum())
}

/// `Λ_v = v^⊥ ∩ Z^d` with its Gram form and a complement `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoLattice {
    /// Rows `w₁, …, w_{d−1}`.
    pub basis: Mat<i64>,
    pub w: Vec<i64>,
    /// `A_v = B Bᵀ`.
    pub gram: Mat<i64>,
}

impl OrthoLattice {
    /// `g_v`: the basis rows followed by `w`.
    pub fn g(&self) -> Mat<i64> {
        let d = self.w.len();
        Mat::from_fn(d, d, |i, j| if i + 1 < d { self.basis[(i, j)] } else { self.w[j] })
    }
}

/// Hermite normal form of integer rows of full rank: upper echelon,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let n = m.len();
    let cols = if n == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == n {
            break;
        }
        // gcd-combine the column below r into row r
        for i in r + 1..n {
            while m[i][c] != 0 {
                let q = m[r][c].div_euclid(m[i][c]);
                for j in 0..cols {
                    let t = m[i][j];
                    m[r][j] -= q * t;
                }
                m.swap(r, i);
            }
        }
        if m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            for x in m[r].iter_mut() {
                *x = -*x;
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    for &(pr, pc) in &pivots {
        let pv = m[pr][pc];
        for i in 0..pr {
            let q = m[i][pc].div_euclid(pv);
            if q != 0 {
                for j in 0..cols {
                    let t = m[pr][j];
                    m[i][j] -= q * t;
                }
            }
        }
    }
    m
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut acc = 0i128;
    for c in 0..n {
        if m[0][c] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect()).collect();
        let t = m[0][c] * det_i128(&minor);
        acc += if c % 2 == 0 { t } else { -t };
    }
    acc
}

/// Determinant of a small integer matrix.
pub fn int_det(m: &Mat<i64>) -> i128 {
    let rows: Vec<Vec<i128>> = (0..m.rows()).map(|i| m.row(i).iter().map(|&x| x as i128).collect()).collect();
    det_i128(&rows)
}

/// Builds the canonical orthogonal lattice of a primitive vector.
pub fn ortho_lattice(v: &SpherePoint) -> Result<OrthoLattice> {
    let d = v.dim();
    // rows of `u` stay unimodular; a[i] = ⟨u_i, v⟩
    let mut u: Vec<Vec<i128>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i128).collect()).collect();
    let mut a: Vec<i128> = v.coords().iter().map(|&x| x as i128).collect();
    loop {
        let nz: Vec<usize> = (0..d).filter(|&i| a[i] != 0).collect();
        if nz.len() <= 1 {
            break;
        }
        let piv = *nz.iter().min_by_key(|&&i| (a[i].abs(), i)).unwrap();
        for &i in &nz {
            if i == piv {
                continue;
            }
            let q = a[i].div_euclid(a[piv]);
            a[i] -= q * a[piv];
            for j in 0..d {
                let t = u[piv][j];
                u[i][j] -= q * t;
            }
        }
    }
    let k = (0..d).find(|&i| a[i] != 0).ok_or_else(|| Error::internal("zero vector"))?;
    if a[k].abs() != 1 {
        return Err(Error::internal("vector is not primitive"));
    }
    let mut w: Vec<i128> = u[k].clone();
    if a[k] < 0 {
        w.iter_mut().for_each(|x| *x = -*x);
    }
    let kernel: Vec<Vec<i128>> = (0..d).filter(|&i| i != k).map(|i| u[i].clone()).collect();
    let mut basis = hermite_rows(&kernel);
    // reduce w against the kernel basis for a canonical complement
    for row in &basis {
        let c = (0..d).find(|&j| row[j] != 0).unwrap();
        let q = w[c].div_euclid(row[c]);
        if q != 0 {
            for j in 0..d {
                w[j] -= q * row[j];
            }
        }
    }
    let mut g = basis.clone();
    g.push(w.clone());
    let dg = det_i128(&g);
    if dg == -1 {
        basis[0].iter_mut().for_each(|x| *x = -*x);
    } else if dg != 1 {
        return Err(Error::internal(format!("det g_v = {dg}")));
    }
    let to64 = |x: i128| i64::try_from(x).map_err(|_| Error::internal("entry overflow"));
    let b = Mat::from_vec(d - 1, d, basis.iter().flatten().map(|&x| to64(x)).collect::<Result<Vec<_>>>()?);
    let w = w.into_iter().map(to64).collect::<Result<Vec<_>>>()?;
    for i in 0..d - 1 {
        let ip: i128 = (0..d).map(|j| b[(i, j)] as i128 * v.coords()[j] as i128).sum();
        if ip != 0 {
            return Err(Error::internal("basis vector not orthogonal to v"));
        }
    }
    let wv: i128 = (0..d).map(|j| w[j] as i128 * v.coords()[j] as i128).sum();
    if wv != 1 {
        return Err(Error::internal("⟨v, w⟩ ≠ 1"));
    }
    let gram = b.mul(&b.transpose());
    if int_det(&gram) != v.disc() as i128 {
        return Err(Error::internal("det A_v ≠ D"));
    }
    Ok(OrthoLattice { basis: b, w, gram })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_spheres() {
        assert_eq!(enumerate_sphere(5, 1).unwrap().len(), 10);
        assert_eq!(enumerate_sphere(4, 7).unwrap().len(), 64);
        assert!(enumerate_sphere(4, 8).unwrap().is_empty());
        assert_eq!(sphere_count(4, 7).unwrap(), 64);
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_size(&[1, 0, 0, 0, 0]), 10);
        assert_eq!(orbit_size(&[2, 1, 1, 1]), 64);
        assert_eq!(orbit_size(&[3, 2, 1, 0]), 24 * 8);
    }

    #[test]
    fn unit_vector_lattice() {
        let v = SpherePoint::new(vec![0, 0, 0, 1]).unwrap();
        let l = ortho_lattice(&v).unwrap();
        assert_eq!(l.gram, Mat::<i64>::identity(3));
        assert_eq!(int_det(&l.g()), 1);
    }

    #[test]
    fn hermite_is_canonical() {
        let a = vec![vec![2i128, 4, 1], vec![0, 3, 5]];
        let b = vec![vec![2i128, 7, 6], vec![2, 4, 1]];
        assert_eq!(hermite_rows(&a), hermite_rows(&b));
    }
}
