//! Invariant complements at a fixed prime: lowest weight projections, the
//! `Ad(exp tZ)` polynomial, the finite sets `𝓕`, `𝓜`, `𝓝` and their
//! certificates. Everything is exact over `Q`, valuations are taken at `p`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::ModelKind;
use crate::matrix::Mat;
use crate::padic::{is_prime, smallest_nonresidue};
use crate::scalar::{Field, PValued, Ring};

use super::algebra::{embed, in_orthogonal_algebra, LieModel, Named, Sl2Triple, Space};
use super::weights::{coordinates, weight_decomposition, WeightDecomposition};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `exp(z)` for nilpotent `z`, a finite sum.
pub fn exp_nilpotent<T: Field>(z: &Mat<T>) -> Result<Mat<T>> {
    let n = z.rows();
    let proto = &z[(0, 0)];
    let mut acc = Mat::identity_like(n, proto);
    let mut term = acc.clone();
    for k in 1..=n {
        let inv = proto.from_i64_like(k as i64).inv_ref().ok_or(Error::DivisionByZero)?;
        term = term.mul(z).scale(&inv);
        if term.is_zero() {
            return Ok(acc);
        }
        acc = acc.add(&term);
    }
    Err(Error::invalid("exp_nilpotent: matrix is not nilpotent"))
}

/// `g r g⁻¹`.
pub fn adjoint<T: Field>(g: &Mat<T>, r: &Mat<T>) -> Result<Mat<T>> {
    Ok(g.mul(r).mul(&g.inverse()?))
}

/// Coefficients `c_ℓ = ad(Z)^ℓ r / ℓ!` of `Ad(exp tZ) r = Σ c_ℓ t^ℓ`,
/// trailing zeros dropped.
pub fn ad_polynomial<T: Field>(z: &Mat<T>, r: &Mat<T>) -> Result<Vec<Mat<T>>> {
    if !z.pow(z.rows() as u32).is_zero() {
        return Err(Error::invalid("ad_polynomial: Z is not nilpotent"));
    }
    let proto = &z[(0, 0)];
    let mut out = Vec::new();
    let mut cur = r.clone();
    let mut k = 0i64;
    while !cur.is_zero() {
        out.push(cur.clone());
        k += 1;
        let inv = proto.from_i64_like(k).inv_ref().ok_or(Error::DivisionByZero)?;
        cur = z.bracket(&cur).scale(&inv);
    }
    Ok(out)
}

/// Evaluates `Σ c_ℓ t^ℓ`.
pub fn eval_polynomial<T: Ring>(coeffs: &[Mat<T>], t: &T) -> Option<Mat<T>> {
    let mut it = coeffs.iter().rev();
    let mut acc = it.next()?.clone();
    for c in it {
        acc = acc.scale(t).add(c);
    }
    Some(acc)
}

/// `log_p ‖m‖_p` over `Q`; `None` for zero.
pub fn norm_exp(m: &Mat<Q>, p: u64) -> Option<i64> {
    m.iter().filter_map(|x| x.pval(p)).map(|v| -v).max()
}

fn residue(x: &Q, p: u64) -> Result<u64> {
    if x.pval(p).is_some_and(|v| v < 0) {
        return Err(Error::invalid("residue of a non-integral rational"));
    }
    let pb = BigInt::from(p);
    let num = (x.numer() % &pb + &pb) % &pb;
    let den = (x.denom() % &pb + &pb) % &pb;
    let den_inv = den.modpow(&BigInt::from(p - 2), &pb);
    Ok(((num * den_inv) % pb).to_u64().expect("residue fits"))
}

fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = crate::padic::pow_mod(m[rank][c], p - 2, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] * inv % p;
                for k in c..cols {
                    m[r][k] = (m[r][k] + p * p - f * m[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Valuations of the elementary divisors at `p` of the `Z_(p)`-lattice
/// spanned by integral vectors (as matrices), via elimination with
/// minimal-valuation pivots. `None` marks a dependent vector.
pub fn elementary_divisors(vs: &[Mat<Q>], p: u64) -> Result<Vec<Option<i64>>> {
    let mut rows: Vec<Vec<Q>> = vs.iter().map(|m| m.data().to_vec()).collect();
    if rows.iter().flatten().any(|x| x.pval(p).is_some_and(|v| v < 0)) {
        return Err(Error::invalid("elementary_divisors: vectors are not integral"));
    }
    let cols = rows.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut done = vec![false; cols];
    for i in 0..rows.len() {
        let best = (i..rows.len())
            .flat_map(|r| (0..cols).filter(|&c| !done[c]).map(move |c| (r, c)))
            .filter_map(|(r, c)| rows[r][c].pval(p).map(|v| (v, r, c)))
            .min();
        let Some((v, r, c)) = best else {
            out.extend(std::iter::repeat_n(None, rows.len() - i));
            break;
        };
        rows.swap(i, r);
        done[c] = true;
        let piv = rows[i][c].clone();
        for k in i + 1..rows.len() {
            if !rows[k][c].is_zero() {
                let f = &rows[k][c] / &piv;
                let (head, tail) = rows.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[i]) {
                    *x -= &f * y;
                }
            }
        }
        out.push(Some(v));
    }
    Ok(out)
}

/// Whether integral vectors are part of a `Z_p`-basis of `Z_p^N`
/// (independent modulo `p`).
pub fn is_saturated(vs: &[Mat<Q>], p: u64) -> Result<bool> {
    let rows = vs.iter().map(|m| m.iter().map(|x| residue(x, p)).collect()).collect::<Result<Vec<Vec<u64>>>>()?;
    Ok(rank_mod_p(&rows, p) == vs.len())
}

/// `exp(Z)` products used as `𝓕`, `𝓜`, `𝓝`.
#[derive(Clone, Debug)]
pub struct Word {
    /// Letters `(name, t)` with the rightmost factor last.
    pub letters: Vec<(String, i64)>,
    pub g: Mat<Q>,
}

impl Word {
    pub fn label(&self) -> String {
        if self.letters.is_empty() {
            return "e".into();
        }
        self.letters.iter().map(|(n, t)| format!("exp({t}{n})")).collect::<Vec<_>>().join("·")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisCertificate {
    pub p: u64,
    /// Vectors produced.
    pub count: usize,
    /// `dim` of the target lattice.
    pub dim: usize,
    /// `v_p` of the determinant of the coordinate matrix in the chain basis
    /// (`𝓜` only), `None` if singular.
    pub det_valuation: Option<i64>,
    /// The vectors are independent modulo `p`.
    pub saturated: bool,
}

impl BasisCertificate {
    pub fn is_basis(&self) -> bool {
        self.count == self.dim && self.saturated && self.det_valuation.is_none_or(|v| v == 0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Undistortedness {
    pub m: u32,
    /// Sum of elementary divisor valuations of `𝔥[m] + 𝔯[m]` inside `𝔤[0]`.
    pub index_valuation: Option<i64>,
    /// `m · dim 𝔤`, the valuation of `[𝔤[0] : 𝔤[m]]`.
    pub expected: i64,
}

impl Undistortedness {
    pub fn holds(&self) -> bool {
        self.index_valuation == Some(self.expected)
    }
}

/// A model algebra and one of its spaces specialised at a prime.
#[derive(Clone, Debug)]
pub struct Complement {
    pub kind: ModelKind,
    pub space: Space,
    pub p: u64,
    pub eta: i64,
    pub lambda: i64,
    pub model: LieModel<Q>,
    pub decomposition: WeightDecomposition<Q>,
    pub triple: Sl2Triple<Q>,
    h_chains: WeightDecomposition<Q>,
}

impl Complement {
    /// `η` is the least non-residue mod `p`; `λ` must be a unit at `p`.
    pub fn new(kind: ModelKind, space: Space, p: u64, lambda: i64) -> Result<Self> {
        if p < 5 || !is_prime(p) {
            return Err(Error::invalid(format!("p = {p} must be a prime ≥ 5")));
        }
        if lambda == 0 || lambda.unsigned_abs() % p == 0 {
            return Err(Error::invalid(format!("λ = {lambda} is not a unit at {p}")));
        }
        let eta = smallest_nonresidue(p)? as i64;
        let sym = LieModel::new(kind);
        let spec = |x: &super::sym::Sym| x.eval(&q(eta), &q(lambda));
        let decomposition = weight_decomposition(&sym, space).map(spec);
        let h_chains = weight_decomposition(&sym, Space::H).map(spec);
        let model = sym.specialize(&q(eta), &q(lambda));
        let triple = model.triple_in(space);
        Ok(Complement { kind, space, p, eta, lambda, model, decomposition, triple, h_chains })
    }

    /// Chain basis of `𝔯`.
    pub fn basis(&self) -> Vec<Mat<Q>> {
        self.decomposition.basis()
    }

    /// Basis of `𝔥` (its weight chains) in the matrix size of the space.
    pub fn h_basis(&self) -> Vec<Mat<Q>> {
        let d = self.model.size(self.space);
        self.h_chains.basis().iter().map(|m| embed(m, d)).collect()
    }

    pub fn dim(&self) -> usize {
        self.decomposition.dim()
    }

    /// Dimension of the ambient algebra `𝔤`.
    pub fn ambient_dim(&self) -> usize {
        let d = self.model.size(self.space);
        match self.space {
            Space::H => self.dim(),
            Space::S1 => d * (d - 1) / 2,
            Space::S2 => d * d - 1,
        }
    }

    /// Whether `x` lies in the ambient algebra `𝔤`.
    pub fn in_ambient(&self, x: &Mat<Q>) -> bool {
        match self.space {
            Space::H => in_orthogonal_algebra(x, &self.model.form),
            Space::S1 => in_orthogonal_algebra(x, &self.model.ambient_form),
            Space::S2 => x.trace().is_zero(),
        }
    }

    fn h_elem(&self, name: &str) -> Mat<Q> {
        self.model.h_in(name, self.space)
    }

    /// `exp(t₁Z₁)·exp(t₂Z₂)···` for letters `(Zᵢ, tᵢ)`.
    pub fn word(&self, letters: &[(&str, i64)]) -> Word {
        let d = self.model.size(self.space);
        let mut g = Mat::identity_like(d, &Q::zero());
        for &(name, t) in letters {
            let e = exp_nilpotent(&self.h_elem(name).scale(&q(t))).expect("model unipotents are nilpotent");
            g = g.mul(&e);
        }
        Word { letters: letters.iter().map(|&(n, t)| (n.to_string(), t)).collect(), g }
    }

    /// The lowest weight vector spanning `𝔯^lw`.
    pub fn lowest_weight_vector(&self) -> &Mat<Q> {
        self.decomposition.lowest_weight_vector()
    }

    /// The highest weight vector of the top component.
    pub fn highest_weight_vector(&self) -> &Mat<Q> {
        let c = self.decomposition.components.iter().max_by_key(|c| c.highest_weight).expect("nonempty");
        &c.chain[0]
    }

    /// Coordinates of `r ∈ 𝔯` in the chain basis.
    pub fn coordinates(&self, r: &Mat<Q>) -> Result<Vec<Q>> {
        coordinates(&self.basis(), r)
    }

    /// Projection `r ↦ r^lw` along the other weight spaces.
    pub fn lowest_weight_part(&self, r: &Mat<Q>) -> Result<Mat<Q>> {
        let c = self.coordinates(r)?;
        let top = self.decomposition.components.iter().map(|c| c.highest_weight).max().unwrap_or(0);
        let mut idx = 0;
        let mut out = Mat::zeros_like(r.rows(), r.cols(), &Q::zero());
        for comp in &self.decomposition.components {
            for (k, v) in comp.chain.iter().enumerate() {
                if comp.weight(k) == -top {
                    out = out.add(&v.scale(&c[idx]));
                }
                idx += 1;
            }
        }
        Ok(out)
    }

    /// The set `𝓕` of words used to move a vector along the complement until
    /// its lowest-weight part carries its full norm.
    pub fn f_set(&self) -> Vec<Word> {
        use ModelKind::*;
        match (self.space, self.kind) {
            (Space::S1, Ternary) | (Space::H, _) => (0..=2).map(|t| self.word(&[("Y", t)])).collect(),
            (Space::S1, _) => {
                let mut v: Vec<Word> = (0..=2).map(|t| self.word(&[("Y", t)])).collect();
                v.push(self.word(&[("Y2", 1)]));
                v
            }
            (Space::S2, Ternary) => (0..=4).map(|t| self.word(&[("Y", t)])).collect(),
            (Space::S2, QuasiSplit) => grid(0..=4, 0..=4).map(|(a, b)| self.word(&[("Y2", b), ("Y", a)])).collect(),
            (Space::S2, Split) => grid(0..=2, 0..=2).map(|(a, b)| self.word(&[("Y2", b), ("Y1", a)])).collect(),
        }
    }

    /// First `h ∈ 𝓕` with `‖Ad(h)r‖ = ‖(Ad(h)r)^lw‖ = ‖r‖`.
    pub fn maximize_lowest_weight(&self, r: &Mat<Q>) -> Result<(Word, Mat<Q>)> {
        let target = norm_exp(r, self.p);
        for h in self.f_set() {
            let s = adjoint(&h.g, r)?;
            let lw = self.lowest_weight_part(&s)?;
            if norm_exp(&s, self.p) == target && norm_exp(&lw, self.p) == target {
                return Ok((h, s));
            }
        }
        Err(Error::internal(format!("no element of F works for {:?} {:?} at p = {}", self.kind, self.space, self.p)))
    }

    /// The set `𝓜` used by the basis certificate.
    pub fn m_set(&self) -> Vec<Word> {
        use ModelKind::*;
        let ys = |n: i64| (0..=n).map(|t| self.word(&[("Y", t)])).collect::<Vec<_>>();
        match (self.space, self.kind) {
            (Space::H, _) | (Space::S1, Ternary) => ys(2),
            (Space::S1, _) => {
                let mut v = ys(2);
                v.push(self.word(&[("Y2", 1)]));
                v
            }
            (Space::S2, Ternary) => ys(4),
            (Space::S2, QuasiSplit) => {
                let mut v = ys(4);
                v.extend((1..=3).map(|t| self.word(&[("Y2", t)])));
                v.push(self.word(&[("Y", 1), ("Y2", 1)]));
                v
            }
            (Space::S2, Split) => grid(0..=2, 0..=2).map(|(a, b)| self.word(&[("Y1", a), ("Y2", b)])).collect(),
        }
    }

    /// The set `𝓝` used by the generation certificate. The ternary and
    /// quasi-split sets contain the identity and the quasi-split set also
    /// `exp X₂`; without them the count falls short of `dim 𝔥`.
    pub fn n_set(&self) -> Vec<Word> {
        use ModelKind::*;
        match self.kind {
            Ternary => vec![self.word(&[]), self.word(&[("X", 1)]), self.word(&[("Y", 1)])],
            QuasiSplit => vec![
                self.word(&[]),
                self.word(&[("X", 1)]),
                self.word(&[("Y", 1)]),
                self.word(&[("X2", 1)]),
                self.word(&[("Y", 1), ("X2", 1)]),
                self.word(&[("Y", 1), ("Y", 1), ("X2", 1)]),
            ],
            Split => grid(0..=2, 1..=2)
                .map(|(j, i)| {
                    let x = if i == 1 { "X1" } else { "X2" };
                    self.word(&[("Y", j), (x, 1)])
                })
                .collect(),
        }
    }

    /// `𝓝` without those extra words, kept for comparison.
    pub fn n_set_short(&self) -> Vec<Word> {
        match self.kind {
            ModelKind::Ternary => vec![self.word(&[("X", 1)]), self.word(&[("Y", 1)])],
            ModelKind::QuasiSplit => vec![
                self.word(&[("X", 1)]),
                self.word(&[("Y", 1)]),
                self.word(&[("Y", 1), ("X2", 1)]),
                self.word(&[("Y", 1), ("Y", 1), ("X2", 1)]),
            ],
            ModelKind::Split => self.n_set(),
        }
    }

    /// Checks that every element is in `H_p ∩ K[0]`: integral with unit
    /// determinant and preserving the form in the row convention of the
    /// algebra (`g J gᵀ = J`).
    pub fn in_stabilizer(&self, w: &Word) -> bool {
        let form = match self.space {
            Space::S1 => &self.model.ambient_form,
            _ => &self.model.form,
        };
        let integral = w.g.iter().all(|x| x.pval(self.p).is_none_or(|v| v >= 0));
        integral && w.g.det().pval(self.p) == Some(0) && w.g.mul(form).mul(&w.g.transpose()) == *form
    }

    /// `{Ad(m) r}_{m ∈ 𝓜}` for `r` the highest weight vector.
    pub fn m_vectors(&self, r: &Mat<Q>) -> Result<Vec<Mat<Q>>> {
        self.m_set().iter().map(|m| adjoint(&m.g, r)).collect()
    }

    /// Basis certificate for part (1): the `𝓜`-translates of `r` have unit
    /// determinant in the chain basis, and the chain basis itself is
    /// saturated, so they form a `Z_p`-basis of `𝔯[0]`.
    pub fn basis_certificate(&self, r: &Mat<Q>) -> Result<BasisCertificate> {
        if norm_exp(r, self.p) != Some(0) {
            return Err(Error::invalid("basis_certificate: r must have norm one"));
        }
        let vs = self.m_vectors(r)?;
        let dim = self.dim();
        let det_valuation = if vs.len() == dim {
            let cols = vs.iter().map(|v| self.coordinates(v)).collect::<Result<Vec<_>>>()?;
            Mat::from_fn(dim, dim, |i, j| cols[j][i].clone()).det().pval(self.p)
        } else {
            None
        };
        let saturated = is_saturated(&self.basis(), self.p)? && is_saturated(&vs, self.p)?;
        Ok(BasisCertificate { p: self.p, count: vs.len(), dim, det_valuation, saturated })
    }

    /// `{Ad(n) Ad(exp s) r}_{n ∈ 𝓝}`, `s` the lowest weight vector.
    pub fn n_vectors(&self, r: &Mat<Q>, n_set: &[Word]) -> Result<Vec<Mat<Q>>> {
        let es = exp_nilpotent(self.lowest_weight_vector())?;
        let base = adjoint(&es, r)?;
        n_set.iter().map(|n| adjoint(&n.g, &base)).collect()
    }

    /// Part (2): the `𝓝`- and `𝓜`-vectors form a `Z_p`-basis of
    /// `𝔤₂[0] = 𝔰𝔩_n(Z_p)`.
    pub fn generation_certificate(&self, r: &Mat<Q>, n_set: &[Word]) -> Result<BasisCertificate> {
        if self.space != Space::S2 {
            return Err(Error::invalid("generation_certificate applies to the sl_n complement"));
        }
        let mut vs = self.n_vectors(r, n_set)?;
        vs.extend(self.m_vectors(r)?);
        let saturated = vs.iter().all(|v| self.in_ambient(v)) && is_saturated(&vs, self.p)?;
        Ok(BasisCertificate { p: self.p, count: vs.len(), dim: self.ambient_dim(), det_valuation: None, saturated })
    }

    /// `𝔤[m] = 𝔥[m] ⊕ 𝔯[m]`: the index of `p^m(𝔥[0] + 𝔯[0])` in `𝔤[0]`
    /// equals `p^{m dim 𝔤}`, given that the bases are integral, lie in `𝔤`
    /// and have the right count.
    pub fn undistortedness(&self, m: u32) -> Result<Undistortedness> {
        let pm = q(self.p as i64).pow(m as i32);
        let mut vs: Vec<Mat<Q>> = self.h_basis();
        if self.space != Space::H {
            vs.extend(self.basis());
        }
        let count_ok = vs.len() == self.ambient_dim() && vs.iter().all(|v| self.in_ambient(v));
        let scaled: Vec<Mat<Q>> = vs.iter().map(|v| v.scale(&pm)).collect();
        let divs = elementary_divisors(&scaled, self.p)?;
        let index_valuation = if count_ok && divs.iter().all(|d| d.is_some()) {
            Some(divs.iter().map(|d| d.unwrap()).sum())
        } else {
            None
        };
        Ok(Undistortedness { m, index_valuation, expected: m as i64 * self.ambient_dim() as i64 })
    }

    /// A random element of `𝔯[0]` with coefficients mixing units,
    /// multiples of `p` and zeros, so every dominance pattern occurs.
    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Mat<Q> {
        let basis = self.basis();
        let p = self.p as i64;
        loop {
            let mut r = Mat::zeros_like(basis[0].rows(), basis[0].cols(), &Q::zero());
            for b in &basis {
                let c = match rng.random_range(0..4) {
                    0 => 0,
                    1 => p * rng.random_range(-p * p..p * p),
                    _ => rng.random_range(-p * p * p..p * p * p),
                };
                r = r.add(&b.scale(&q(c)));
            }
            if !r.is_zero() {
                return r;
            }
        }
    }
}

fn grid(
    a: std::ops::RangeInclusive<i64>,
    b: std::ops::RangeInclusive<i64>,
) -> impl Iterator<Item = (i64, i64)> {
    a.flat_map(move |x| b.clone().map(move |y| (x, y)))
}

/// Named elements of a space, for display.
pub fn named_basis(c: &Complement) -> Vec<Named<Q>> {
    c.decomposition
        .components
        .iter()
        .flat_map(|comp| {
            comp.chain.iter().enumerate().map(move |(k, m)| {
                Named::new(format!("V({})[{}]", comp.highest_weight, comp.weight(k)), m.clone())
            })
        })
        .collect()
}


/// Certificates of one complement at one prime.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateRow {
    pub kind: ModelKind,
    pub space: String,
    pub p: u64,
    /// `{Ad(m)r : m ∈ 𝓜}` for the highest weight vector `r`.
    pub basis: BasisCertificate,
    /// `𝓝`-augmented set, for `𝔰₂` only.
    pub generation: Option<BasisCertificate>,
    pub undistorted: Vec<Undistortedness>,
}

impl CertificateRow {
    pub fn holds(&self) -> bool {
        self.basis.is_basis()
            && self.generation.as_ref().is_none_or(BasisCertificate::is_basis)
            && self.undistorted.iter().all(Undistortedness::holds)
    }
}

/// Basis, generation and undistortedness certificates for every model and
/// complement at `p`, with `m = 0, 1, 2`.
pub fn certificate_table(p: u64, lambda: i64) -> Result<Vec<CertificateRow>> {
    let mut rows = Vec::new();
    for kind in [ModelKind::Ternary, ModelKind::QuasiSplit, ModelKind::Split] {
        for (space, name) in [(Space::S1, "s1"), (Space::S2, "s2")] {
            let c = Complement::new(kind, space, p, lambda)?;
            let r = c.highest_weight_vector().clone();
            let generation = match space {
                Space::S2 => Some(c.generation_certificate(&r, &c.n_set())?),
                _ => None,
            };
            rows.push(CertificateRow {
                kind,
                space: name.into(),
                p,
                basis: c.basis_certificate(&r)?,
                generation,
                undistorted: (0..=2).map(|m| c.undistortedness(m)).collect::<Result<_>>()?,
            });
        }
    }
    Ok(rows)
}
