//! The model Lie algebras in the coordinates of the weight computations:
//! `−2xz + y²`, `−2xw + y² + ηz²` and `2xw − 2yz`, each extended by `λu²`
//! for the ambient orthogonal algebra.

use num_rational::BigRational;

use crate::groups::ModelKind;
use crate::matrix::Mat;
use crate::scalar::Ring;

use super::sym::Sym;

/// A matrix with a label.
#[derive(Clone, Debug, PartialEq)]
pub struct Named<T> {
    pub name: String,
    pub m: Mat<T>,
}

impl<T> Named<T> {
    pub fn new(name: impl Into<String>, m: Mat<T>) -> Self {
        Named { name: name.into(), m }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Triple<T> {
    pub h: Mat<T>,
    pub x: Mat<T>,
    pub y: Mat<T>,
}

impl<T: Ring + PartialEq> Sl2Triple<T> {
    /// `[H,X] = 2X`, `[H,Y] = −2Y`, `[X,Y] = H`.
    pub fn relations_hold(&self) -> bool {
        let two = self.h[(0, 0)].from_i64_like(2);
        self.h.bracket(&self.x) == self.x.scale(&two)
            && self.h.bracket(&self.y) == self.y.scale(&two.neg_ref())
            && self.x.bracket(&self.y) == self.h
    }

}

impl<T> Sl2Triple<T> {
    pub fn map<U>(&self, f: impl Fn(&Mat<T>) -> Mat<U>) -> Sl2Triple<U> {
        Sl2Triple { h: f(&self.h), x: f(&self.x), y: f(&self.y) }
    }
}

/// Which invariant complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// The model algebra `𝔥` itself.
    H,
    /// Complement of `𝔥` in `𝔰𝔬(d)`.
    S1,
    /// Complement of `𝔥` in `𝔰𝔩_{d−1}`.
    S2,
}

/// Bases of `𝔥`, `𝔰₁`, `𝔰₂` for one model.
#[derive(Clone, Debug)]
pub struct LieModel<T> {
    pub kind: ModelKind,
    /// Gram matrix of the model form, size `n = d − 1`.
    pub form: Mat<T>,
    /// `form ⊕ λ`.
    pub ambient_form: Mat<T>,
    pub triple: Sl2Triple<T>,
    /// Named basis of `𝔥`, starting with `H, X, Y`.
    pub h_basis: Vec<Named<T>>,
    /// Coordinate basis of `𝔰₁` in the shorthand `(a, b, c[, d])`.
    pub s1_basis: Vec<Named<T>>,
    /// Named basis of `𝔰₂`.
    pub s2_basis: Vec<Named<T>>,
}

fn int_mat(rows: &[&[i64]]) -> Mat<Sym> {
    Mat::from_i64(rows, &Sym::zero())
}

fn with(mut m: Mat<Sym>, entries: &[(usize, usize, Sym)]) -> Mat<Sym> {
    for (i, j, x) in entries {
        m[(*i, *j)] = x.clone();
    }
    m
}

fn unit(n: usize, i: usize, j: usize) -> Mat<Sym> {
    Mat::from_fn(n, n, |a, b| if (a, b) == (i, j) { Sym::int(1) } else { Sym::zero() })
}

/// `m` in the upper-left corner of a `d×d` zero matrix.
pub fn embed<T: Ring>(m: &Mat<T>, d: usize) -> Mat<T> {
    let z = m[(0, 0)].zero_like();
    Mat::from_fn(d, d, |i, j| if i < m.rows() && j < m.cols() { m[(i, j)].clone() } else { z.clone() })
}

/// The shorthand element `(a, b, c[, d])` of `𝔰₁ ⊂ 𝔰𝔬(d)`.
pub fn s1_element(kind: ModelKind, c: &[Sym]) -> Mat<Sym> {
    let n = kind.dim();
    assert_eq!(c.len(), n, "one coefficient per model coordinate");
    let lam = Sym::lambda();
    let d = n + 1;
    let mut m = Mat::zeros_like(d, d, &Sym::zero());
    for i in 0..n {
        m[(i, n)] = c[i].clone();
    }
    let last: Vec<Sym> = match kind {
        ModelKind::Ternary => vec![c[2].clone(), c[1].neg_ref(), c[0].clone()],
        ModelKind::QuasiSplit => {
            vec![c[3].clone(), c[1].neg_ref(), c[2].mul_ref(&Sym::term(-1, -1, 0)), c[0].clone()]
        }
        ModelKind::Split => vec![c[3].neg_ref(), c[2].clone(), c[1].clone(), c[0].neg_ref()],
    };
    for (j, x) in last.into_iter().enumerate() {
        m[(n, j)] = x.mul_ref(&lam);
    }
    m
}

fn s1_coords(kind: ModelKind, ints: &[i64]) -> Mat<Sym> {
    let c: Vec<Sym> = ints.iter().map(|&x| Sym::int(x)).collect();
    s1_element(kind, &c)
}

fn tuple_name(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl LieModel<Sym> {
    pub fn new(kind: ModelKind) -> Self {
        let eta = Sym::eta();
        let (form, triple, h_basis, s2_basis) = match kind {
            ModelKind::Ternary => {
                let form = int_mat(&[&[0, 0, -1], &[0, 1, 0], &[-1, 0, 0]]);
                let h = int_mat(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]);
                let x = int_mat(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
                let y = int_mat(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0]]);
                let hb = vec![Named::new("H", h.clone()), Named::new("X", x.clone()), Named::new("Y", y.clone())];
                let s2 = vec![
                    Named::new("z", unit(3, 0, 2)),
                    Named::new("z1", int_mat(&[&[0, -1, 0], &[0, 0, 1], &[0, 0, 0]])),
                    Named::new("z2", int_mat(&[&[1, 0, 0], &[0, -2, 0], &[0, 0, 1]])),
                    Named::new("z3", int_mat(&[&[0, 0, 0], &[1, 0, 0], &[0, -1, 0]])),
                    Named::new("zT", unit(3, 2, 0)),
                ];
                (form, Sl2Triple { h, x, y }, hb, s2)
            }
            ModelKind::QuasiSplit => {
                let form = with(int_mat(&[&[0, 0, 0, -1], &[0, 1, 0, 0], &[0, 0, 0, 0], &[-1, 0, 0, 0]]), &[(2, 2, eta.clone())]);
                let h = int_mat(&[&[2, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, -2]]);
                let x = int_mat(&[&[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
                let y = int_mat(&[&[0, 0, 0, 0], &[2, 0, 0, 0], &[0, 0, 0, 0], &[0, 2, 0, 0]]);
                let z4 = Mat::zeros_like(4, 4, &Sym::zero());
                let m = with(z4.clone(), &[(1, 2, Sym::int(-2)), (2, 1, Sym::term(2, 1, 0))]);
                let x2 = with(z4.clone(), &[(0, 2, Sym::int(1)), (2, 3, eta.clone())]);
                let y2 = with(z4.clone(), &[(2, 0, Sym::term(-2, 1, 0)), (3, 2, Sym::int(-2))]);
                let hb = vec![
                    Named::new("H", h.clone()),
                    Named::new("X", x.clone()),
                    Named::new("Y", y.clone()),
                    Named::new("M", m),
                    Named::new("X2", x2),
                    Named::new("Y2", y2),
                ];
                let s2 = vec![
                    Named::new("z", unit(4, 0, 3)),
                    Named::new("X1'", int_mat(&[&[0, 1, 0, 0], &[0, 0, 0, -1], &[0, 0, 0, 0], &[0, 0, 0, 0]])),
                    Named::new("H4", int_mat(&[&[-1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, -1]])),
                    Named::new("Y1'", int_mat(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0], &[0, -1, 0, 0]])),
                    Named::new("zT", unit(4, 3, 0)),
                    Named::new("X2'", with(z4.clone(), &[(0, 2, Sym::int(1)), (2, 3, Sym::term(-1, 1, 0))])),
                    Named::new("S", with(z4.clone(), &[(1, 2, Sym::int(1)), (2, 1, eta.clone())])),
                    Named::new("Y2'", with(z4.clone(), &[(2, 0, eta.clone()), (3, 2, Sym::int(-1))])),
                    Named::new("Ht", int_mat(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -3, 0], &[0, 0, 0, 1]])),
                ];
                (form, Sl2Triple { h, x, y }, hb, s2)
            }
            ModelKind::Split => {
                let form = int_mat(&[&[0, 0, 0, 1], &[0, 0, -1, 0], &[0, -1, 0, 0], &[1, 0, 0, 0]]);
                let h1 = int_mat(&[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1]]);
                let x1 = int_mat(&[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]]);
                let y1 = x1.transpose();
                let h2 = int_mat(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]);
                let x2 = int_mat(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
                let y2 = x2.transpose();
                let h = int_mat(&[&[2, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, -2]]);
                let x = int_mat(&[&[0, 1, 1, 0], &[0, 0, 0, 1], &[0, 0, 0, 1], &[0, 0, 0, 0]]);
                let y = x.transpose();
                let hb = vec![
                    Named::new("H", h.clone()),
                    Named::new("X", x.clone()),
                    Named::new("Y", y.clone()),
                    Named::new("H1", h1),
                    Named::new("X1", x1),
                    Named::new("Y1", y1),
                    Named::new("H2", h2),
                    Named::new("X2", x2),
                    Named::new("Y2", y2),
                ];
                // the parametrised matrix [[w,a,b,x],[e,−w,c,−b],[f,d,−w,−a],[y,−f,−e,w]]
                let params: [(&str, &[(usize, usize, i64)]); 9] = [
                    ("w", &[(0, 0, 1), (1, 1, -1), (2, 2, -1), (3, 3, 1)]),
                    ("a", &[(0, 1, 1), (2, 3, -1)]),
                    ("b", &[(0, 2, 1), (1, 3, -1)]),
                    ("c", &[(1, 2, 1)]),
                    ("d", &[(2, 1, 1)]),
                    ("e", &[(1, 0, 1), (3, 2, -1)]),
                    ("f", &[(2, 0, 1), (3, 1, -1)]),
                    ("x", &[(0, 3, 1)]),
                    ("y", &[(3, 0, 1)]),
                ];
                let s2 = params
                    .iter()
                    .map(|(name, es)| {
                        let es: Vec<(usize, usize, Sym)> = es.iter().map(|&(i, j, c)| (i, j, Sym::int(c))).collect();
                        Named::new(*name, with(Mat::zeros_like(4, 4, &Sym::zero()), &es))
                    })
                    .collect();
                (form, Sl2Triple { h, x, y }, hb, s2)
            }
        };
        let n = kind.dim();
        let ambient_form = with(embed(&form, n + 1), &[(n, n, Sym::lambda())]);
        let s1_basis = (0..n)
            .map(|i| {
                let v: Vec<i64> = (0..n).map(|j| (i == j) as i64).collect();
                Named::new(tuple_name(&v), s1_coords(kind, &v))
            })
            .collect();
        LieModel { kind, form, ambient_form, triple, h_basis, s1_basis, s2_basis }
    }

    /// Exact rational specialization at given `η`, `λ`.
    pub fn specialize(&self, eta: &BigRational, lambda: &BigRational) -> LieModel<BigRational> {
        self.map(&|x: &Sym| x.eval(eta, lambda))
    }
}

impl<T: Ring> LieModel<T> {
    pub fn map<U: Ring>(&self, f: &dyn Fn(&T) -> U) -> LieModel<U> {
        let mm = |m: &Mat<T>| m.map(f);
        let nm = |v: &Vec<Named<T>>| v.iter().map(|x| Named::new(x.name.clone(), mm(&x.m))).collect();
        LieModel {
            kind: self.kind,
            form: mm(&self.form),
            ambient_form: mm(&self.ambient_form),
            triple: self.triple.map(mm),
            h_basis: nm(&self.h_basis),
            s1_basis: nm(&self.s1_basis),
            s2_basis: nm(&self.s2_basis),
        }
    }

    /// `n = d − 1`.
    pub fn n(&self) -> usize {
        self.form.rows()
    }

    /// An element of `𝔥` by name.
    pub fn h(&self, name: &str) -> &Mat<T> {
        &self.h_basis.iter().find(|x| x.name == name).unwrap_or_else(|| panic!("no element {name}")).m
    }

    /// An element of `𝔰₂` by name.
    pub fn s2(&self, name: &str) -> &Mat<T> {
        &self.s2_basis.iter().find(|x| x.name == name).unwrap_or_else(|| panic!("no element {name}")).m
    }

    /// Size of the matrices in a space.
    pub fn size(&self, space: Space) -> usize {
        match space {
            Space::S1 => self.n() + 1,
            _ => self.n(),
        }
    }

    /// `𝔥`-element in the matrix size of `space`.
    pub fn h_in(&self, name: &str, space: Space) -> Mat<T> {
        embed(self.h(name), self.size(space))
    }

    /// The principal triple in the matrix size of `space`.
    pub fn triple_in(&self, space: Space) -> Sl2Triple<T> {
        let d = self.size(space);
        self.triple.map(|m| embed(m, d))
    }

    /// Second unipotent direction used by the generation arguments: `Y₂`
    /// for the quasi-split and split models.
    pub fn second_lowering(&self) -> Option<&Mat<T>> {
        match self.kind {
            ModelKind::Ternary => None,
            _ => Some(self.h("Y2")),
        }
    }
}

/// Whether `m` lies in the orthogonal algebra of `form`: `mJ + Jmᵀ = 0`.
pub fn in_orthogonal_algebra<T: Ring>(m: &Mat<T>, form: &Mat<T>) -> bool {
    m.mul(form).add(&form.mul(&m.transpose())).is_zero()
}
