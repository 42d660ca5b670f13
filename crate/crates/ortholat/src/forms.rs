//! Prime selection, diagonalization of quadratic forms over Z_p and the
//! classification of their special orthogonal groups.
//!
//! Forms are given by symmetric Gram matrices `A` with `Q(x) = xᵀ A x`. A
//! change of basis by the rows of `U` sends `A` to `U A Uᵀ`; conjugators act
//! on columns, so `hᵀ A h` is the Gram of `A` in the basis of columns of `h`.

use std::sync::Arc;

use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::groups::{ModelGroup, ModelKind};
use crate::matrix::Mat;
use crate::padic::{hensel_sqrt, max_norm_exp, is_prime, smallest_nonresidue, Padic, PadicCtx};
use crate::scalar::PValued;
use crate::sphere::int_det;

/// Default lower cutoff for [`choose_prime`].
pub const DEFAULT_PRIME_CUTOFF: u64 = 17;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrimeChoice {
    #[serde(rename = "D")]
    pub disc: u64,
    #[serde(rename = "M")]
    pub cutoff: u64,
    pub p: u64,
    /// `p / log(D)²`.
    pub ratio: f64,
}

/// The least prime `p ≥ M` with `p ≡ 1 (mod 4)` and `p ∤ D`.
pub fn choose_prime(disc: u64, cutoff: u64) -> Result<PrimeChoice> {
    if disc < 2 {
        return Err(Error::invalid("discriminant must be at least 2"));
    }
    let mut p = cutoff.max(5);
    p += (4 + 1 - p % 4) % 4;
    while !(is_prime(p) && disc % p != 0) {
        p += 4;
    }
    let l = (disc as f64).ln();
    Ok(PrimeChoice { disc, cutoff, p, ratio: p as f64 / (l * l) })
}

/// `c` and `U` with `U A Uᵀ = diag(c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalForm<T> {
    pub coeffs: Vec<T>,
    pub u: Mat<T>,
}

fn symmetric_check<T: PValued>(a: &Mat<T>) -> Result<()> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::invalid("Gram matrix must be square and nonempty"));
    }
    let n = a.rows();
    for i in 0..n {
        for j in 0..i {
            if !a[(i, j)].sub_ref(&a[(j, i)]).is_zero_el() {
                return Err(Error::invalid("Gram matrix not symmetric"));
            }
        }
    }
    Ok(())
}

/// Split-off diagonalization over `Z_p`.
///
/// Each step picks, among `e_i` and `e_i + e_j` of the remaining block, the
/// first vector in row-major order of `(i, j)` maximizing `|Q(v)|_p`, puts
/// it first and clears its pairings with the rest.
pub fn diagonalize<T: PValued>(a: &Mat<T>, p: u64) -> Result<DiagonalForm<T>> {
    symmetric_check(a)?;
    let n = a.rows();
    let proto = a[(0, 0)].clone();
    let two = proto.from_i64_like(2);
    let mut u = Mat::identity_like(n, &proto);
    let congr = |u: &Mat<T>| u.mul(a).mul(&u.transpose());
    let mut coeffs = Vec::with_capacity(n);
    for k in 0..n {
        let g = congr(&u);
        let mut best: Option<(usize, usize, i64)> = None;
        for i in k..n {
            for j in i..n {
                let q = if i == j {
                    g[(i, i)].clone()
                } else {
                    g[(i, i)].add_ref(&g[(j, j)]).add_ref(&two.mul_ref(&g[(i, j)]))
                };
                if let Some(v) = q.pval(p) {
                    if best.is_none_or(|(_, _, b)| v < b) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((i, j, _)) = best else {
            coeffs.extend((k..n).map(|_| proto.zero_like()));
            break;
        };
        if i != j {
            for c in 0..n {
                u[(i, c)] = u[(i, c)].add_ref(&u[(j, c)]);
            }
        }
        u.swap_rows(k, i);
        let g = congr(&u);
        let piv = g[(k, k)].clone();
        for l in k + 1..n {
            let f = g[(k, l)].div_ref(&piv).ok_or(Error::DivisionByZero)?;
            for c in 0..n {
                u[(l, c)] = u[(l, c)].sub_ref(&f.mul_ref(&u[(k, c)]));
            }
        }
        coeffs.push(piv);
    }
    Ok(DiagonalForm { coeffs, u })
}

/// Exact diagonalization of an integer form, returned at the precision of
/// `ctx`.
pub fn diagonalize_zp(a: &Mat<i64>, ctx: &Arc<PadicCtx>) -> Result<DiagonalForm<Padic>> {
    let exact = diagonalize(&a.to_bigrational(), ctx.p())?;
    Ok(DiagonalForm {
        coeffs: exact.coeffs.iter().map(|c| ctx.rational(c)).collect(),
        u: exact.u.to_padic(ctx),
    })
}

/// Exact rational diagonalization of an integer form.
pub fn diagonalize_exact(a: &Mat<i64>, p: u64) -> Result<DiagonalForm<BigRational>> {
    diagonalize(&a.to_bigrational(), p)
}

/// The three defining properties of a diagonalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalCheck {
    pub unimodular: bool,
    pub congruent: bool,
    pub max_norm_identity: bool,
}

impl DiagonalCheck {
    pub fn all(&self) -> bool {
        self.unimodular && self.congruent && self.max_norm_identity
    }
}

/// Checks `U ∈ GL_n(Z_p)`, `U A Uᵀ ≡ diag(c) (mod p^k)` and
/// `max|c_k|_p = max|a_ij|_p`.
pub fn check_diagonalization(a: &Mat<i64>, d: &DiagonalForm<Padic>, k: i64) -> DiagonalCheck {
    let ctx = d.u.ctx();
    let ap = a.to_padic(ctx);
    let lhs = d.u.mul(&ap).mul(&d.u.transpose());
    DiagonalCheck {
        unimodular: d.u.is_unimodular(),
        congruent: lhs.congruent(&Mat::diag(&d.coeffs), k),
        max_norm_identity: max_norm_exp(&d.coeffs) == ap.norm_exp(),
    }
}

/// Outcome of [`classify`].
#[derive(Clone, Debug)]
pub struct Classification {
    pub kind: ModelKind,
    /// Non-square of the model, for the quasi-split kind.
    pub eta: Option<i64>,
    /// `s ∈ {1, η}` with `hᵀ A h = s J`.
    pub scale: i64,
    pub h: Mat<Padic>,
}

impl Classification {
    /// SHA-256 of the residues of `h` modulo `p^k`, in hex.
    pub fn digest(&self, k: u32) -> Result<String> {
        let mut hasher = Sha256::new();
        hasher.update(self.kind.name().as_bytes());
        for x in self.h.iter() {
            hasher.update(x.residue(k)?.to_bytes_le());
            hasher.update([0xff]);
        }
        Ok(hasher.finalize().iter().map(|b| format!("{b:02x}")).collect())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub p: u64,
    pub kind: ModelKind,
    pub eta: Option<i64>,
    pub scale: i64,
    pub hv_digest: String,
}

/// Columns `(e_i + εe_j)/(2t)` and `e_i − εe_j`, an isotropic pair with
/// pairing 1 in `t(x_i² + x_j²)`.
fn hyperbolic_pair(n: usize, i: usize, j: usize, t: &Padic, eps: &Padic) -> Result<(Vec<Padic>, Vec<Padic>)> {
    let ctx = t.ctx();
    let half_t = t.mul(&ctx.int(2)).inv()?;
    let mut f1 = vec![ctx.zero(); n];
    let mut f2 = vec![ctx.zero(); n];
    f1[i] = half_t.clone();
    f1[j] = eps.mul(&half_t);
    f2[i] = ctx.one();
    f2[j] = eps.neg();
    Ok((f1, f2))
}

/// Classifies the special orthogonal group of a ternary or quaternary form
/// with `p ∤ det A`, returning a conjugator `h ∈ GL_n(Z_p)` with
/// `hᵀ A h = s J`.
pub fn classify(a: &Mat<i64>, ctx: &Arc<PadicCtx>) -> Result<Classification> {
    let n = a.rows();
    if !(n == 3 || n == 4) || !a.is_square() {
        return Err(Error::invalid("classification needs a 3×3 or 4×4 Gram matrix"));
    }
    let p = ctx.p();
    if p % 4 != 1 {
        return Err(Error::invalid(format!("p = {p} is not 1 mod 4")));
    }
    let det = int_det(a);
    if det % p as i128 == 0 {
        return Err(Error::invalid(format!("p = {p} divides det A = {det}")));
    }
    let diag = diagonalize_zp(a, ctx)?;
    let eta_i = smallest_nonresidue(p)? as i64;
    let eta = ctx.int(eta_i);
    let nonsq: Vec<bool> = diag.coeffs.iter().map(|c| c.unit_legendre().map(|l| l == -1)).collect::<Result<_>>()?;
    let m = nonsq.iter().filter(|&&b| b).count();
    let rescale = if n == 3 { m % 2 == 1 } else { m >= 3 };
    let scale = if rescale { eta_i } else { 1 };
    let s = ctx.int(scale);

    // normalize each coefficient c_i / s to 1 or η
    let mut h = diag.u.transpose();
    let mut squares = Vec::new();
    let mut others = Vec::new();
    for (i, c) in diag.coeffs.iter().enumerate() {
        let d = c.div(&s)?;
        let is_sq = d.unit_legendre()? == 1;
        let t = if is_sq { ctx.one() } else { eta.clone() };
        let r = hensel_sqrt(&d.div(&t)?)?.inv()?;
        for row in 0..n {
            h[(row, i)] = h[(row, i)].mul(&r);
        }
        if is_sq {
            squares.push(i);
        } else {
            others.push(i);
        }
    }
    let eps = hensel_sqrt(&ctx.int(-1))?;
    let one = ctx.one();
    let mut cols: Vec<Vec<Padic>> = Vec::with_capacity(n);
    let unit_col = |i: usize| (0..n).map(|r| if r == i { ctx.one() } else { ctx.zero() }).collect::<Vec<_>>();
    let kind = match (n, squares.len(), others.len()) {
        (3, 3, 0) => {
            let (f1, f2) = hyperbolic_pair(n, squares[0], squares[1], &one, &eps)?;
            cols.extend([f1, f2, unit_col(squares[2])]);
            ModelKind::Ternary
        }
        (3, 1, 2) => {
            let (f1, f2) = hyperbolic_pair(n, others[0], others[1], &eta, &eps)?;
            cols.extend([f1, f2, unit_col(squares[0])]);
            ModelKind::Ternary
        }
        (4, 4, 0) => {
            let (f1, f2) = hyperbolic_pair(n, squares[0], squares[1], &one, &eps)?;
            let (f3, f4) = hyperbolic_pair(n, squares[2], squares[3], &one, &eps)?;
            cols.extend([f1, f2, f3, f4]);
            ModelKind::Split
        }
        (4, 2, 2) => {
            let (f1, f2) = hyperbolic_pair(n, squares[0], squares[1], &one, &eps)?;
            let (f3, f4) = hyperbolic_pair(n, others[0], others[1], &eta, &eps)?;
            cols.extend([f1, f2, f3, f4]);
            ModelKind::Split
        }
        (4, 3, 1) => {
            let (f1, f2) = hyperbolic_pair(n, squares[0], squares[1], &one, &eps)?;
            cols.extend([f1, f2, unit_col(squares[2]), unit_col(others[0])]);
            ModelKind::QuasiSplit
        }
        _ => return Err(Error::internal("unexpected square-class pattern")),
    };
    let t = Mat::from_fn(n, n, |r, c| cols[c][r].clone());
    let h = h.mul(&t);
    let cls = Classification {
        kind,
        eta: (kind == ModelKind::QuasiSplit).then_some(eta_i),
        scale,
        h,
    };
    let j = kind.gram_i64(eta_i).to_padic(ctx).scale(&s);
    let k = ctx.prec() as i64 - 4;
    if !cls.h.transpose().mul(&a.to_padic(ctx)).mul(&cls.h).congruent(&j, k) || !cls.h.is_unimodular() {
        return Err(Error::internal("conjugator does not carry the form to the model"));
    }
    Ok(cls)
}

/// Whether `X = h g h⁻¹` satisfies `Xᵀ A X ≡ A (mod p^k)` for `samples`
/// random products of model generators `g`.
pub fn verify_conjugation<R: Rng + ?Sized>(
    a: &Mat<i64>,
    cls: &Classification,
    samples: usize,
    k: i64,
    rng: &mut R,
) -> Result<bool> {
    let ctx = cls.h.ctx().clone();
    let group = match cls.eta {
        Some(e) => ModelGroup::with_eta(cls.kind, &ctx, e),
        None => ModelGroup::new(cls.kind, &ctx)?,
    };
    let ap = a.to_padic(&ctx);
    let hinv = cls.h.inverse()?;
    for _ in 0..samples {
        let g = group.random_k(rng, 6);
        let x = cls.h.mul(&g).mul(&hinv);
        if !x.transpose().mul(&ap).mul(&x).congruent(&ap, k) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classification and digest in report form.
pub fn classify_report(a: &Mat<i64>, ctx: &Arc<PadicCtx>) -> Result<ClassifyReport> {
    let cls = classify(a, ctx)?;
    Ok(ClassifyReport {
        p: ctx.p(),
        kind: cls.kind,
        eta: cls.eta,
        scale: cls.scale,
        hv_digest: cls.digest(ctx.prec().min(16))?,
    })
}

/// Maximum of `v_p` over nonzero entries' negatives, i.e. `log_p max|a_ij|_p`.
pub fn max_norm_exp_rational(xs: &[BigRational], p: u64) -> Option<i64> {
    xs.iter().filter_map(|x| x.pval(p)).map(|v| -v).max()
}

/// Whether an exact rational matrix has entries in `Z_(p)` and a unit
/// determinant at `p`.
pub fn is_unimodular_at(u: &Mat<BigRational>, p: u64) -> bool {
    let integral = u.iter().all(|x| x.pval(p).is_none_or(|v| v >= 0));
    integral && u.det().pval(p) == Some(0)
}
