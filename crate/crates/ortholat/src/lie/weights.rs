//! Weight decompositions under the principal `𝔰𝔩₂`.

use serde::Serialize;

use crate::groups::ModelKind;
use crate::matrix::Mat;
use crate::scalar::{Field, Ring};

use super::algebra::{LieModel, Space};
use super::sym::Sym;

/// `V^(n)` given by a highest weight vector and its `ad(Y)` chain.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightComponent<T> {
    pub highest_weight: i64,
    /// `v, ad(Y)v, …, ad(Y)^n v`.
    pub chain: Vec<Mat<T>>,
}

impl<T: Ring> WeightComponent<T> {
    /// Weight of `chain[k]`.
    pub fn weight(&self, k: usize) -> i64 {
        self.highest_weight - 2 * k as i64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightDecomposition<T> {
    pub space: Space,
    pub components: Vec<WeightComponent<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeightCheck {
    /// `ad(H)` acts on each chain vector by its weight.
    pub eigenvalues: bool,
    /// `ad(X)` kills each highest weight vector.
    pub highest_killed: bool,
    /// `ad(Y)` steps through the chain and kills its last vector.
    pub chains_close: bool,
}

impl WeightCheck {
    pub fn all(&self) -> bool {
        self.eigenvalues && self.highest_killed && self.chains_close
    }
}

/// Highest weight generators of each `V^(n)` in a space.
fn generators(model: &LieModel<Sym>, space: Space) -> Vec<(i64, Mat<Sym>)> {
    let s1 = |v: &[i64]| {
        let c: Vec<Sym> = v.iter().map(|&x| Sym::int(x)).collect();
        super::algebra::s1_element(model.kind, &c)
    };
    let m = |rows: &[&[i64]]| Mat::from_i64(rows, &Sym::zero());
    match (model.kind, space) {
        (ModelKind::Ternary, Space::H) => vec![(2, model.h("X").clone())],
        (ModelKind::QuasiSplit, Space::H) => vec![(2, model.h("X").clone()), (2, model.h("X2").clone())],
        (ModelKind::Split, Space::H) => vec![(2, model.h("X").clone()), (2, model.h("X1").clone())],
        (ModelKind::Ternary, Space::S1) => vec![(2, s1(&[1, 0, 0]))],
        (ModelKind::QuasiSplit, Space::S1) => vec![(2, s1(&[1, 0, 0, 0])), (0, s1(&[0, 0, 1, 0]))],
        (ModelKind::Split, Space::S1) => vec![(2, s1(&[1, 0, 0, 0])), (0, s1(&[0, 1, -1, 0]))],
        (ModelKind::Ternary, Space::S2) => vec![(4, model.s2("z").clone())],
        (ModelKind::QuasiSplit, Space::S2) => {
            vec![(4, model.s2("z").clone()), (2, model.s2("X2'").clone()), (0, model.s2("Ht").clone())]
        }
        (ModelKind::Split, Space::S2) => vec![
            (4, model.s2("x").clone()),
            (2, m(&[&[0, -1, 1, 0], &[0, 0, 0, -1], &[0, 0, 0, 1], &[0, 0, 0, 0]])),
            (0, m(&[&[1, 0, 0, 0], &[0, -1, 2, 0], &[0, 2, -1, 0], &[0, 0, 0, 1]])),
        ],
    }
}

/// The decomposition of `space` into `ad(Y)` chains.
pub fn weight_decomposition(model: &LieModel<Sym>, space: Space) -> WeightDecomposition<Sym> {
    let y = model.triple_in(space).y;
    let components = generators(model, space)
        .into_iter()
        .map(|(n, v)| {
            let mut chain = vec![v];
            for _ in 0..n {
                let next = y.bracket(chain.last().unwrap());
                chain.push(next);
            }
            WeightComponent { highest_weight: n, chain }
        })
        .collect();
    WeightDecomposition { space, components }
}

impl<T: Ring + PartialEq> WeightDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.components.iter().map(|c| c.chain.len()).sum()
    }

    pub fn basis(&self) -> Vec<Mat<T>> {
        self.components.iter().flat_map(|c| c.chain.iter().cloned()).collect()
    }

    /// Highest weights, e.g. `[4, 2, 0]`.
    pub fn highest_weights(&self) -> Vec<i64> {
        self.components.iter().map(|c| c.highest_weight).collect()
    }

    /// The vector of weight `−max` (unique up to scalar).
    pub fn lowest_weight_vector(&self) -> &Mat<T> {
        let c = self.components.iter().max_by_key(|c| c.highest_weight).expect("nonempty");
        c.chain.last().unwrap()
    }

    pub fn check(&self, h: &Mat<T>, x: &Mat<T>, y: &Mat<T>) -> WeightCheck {
        let mut out = WeightCheck { eigenvalues: true, highest_killed: true, chains_close: true };
        for c in &self.components {
            let proto = &c.chain[0][(0, 0)];
            for (k, v) in c.chain.iter().enumerate() {
                let w = proto.from_i64_like(c.weight(k));
                out.eigenvalues &= h.bracket(v) == v.scale(&w) && !v.is_zero();
                if k + 1 < c.chain.len() {
                    out.chains_close &= y.bracket(v) == c.chain[k + 1];
                }
            }
            out.highest_killed &= x.bracket(&c.chain[0]).is_zero();
            out.chains_close &= y.bracket(c.chain.last().unwrap()).is_zero();
        }
        out
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> WeightDecomposition<U> {
        WeightDecomposition {
            space: self.space,
            components: self
                .components
                .iter()
                .map(|c| WeightComponent {
                    highest_weight: c.highest_weight,
                    chain: c.chain.iter().map(|m| m.map(&f)).collect(),
                })
                .collect(),
        }
    }
}

/// Rank of a list of matrices viewed as vectors.
pub fn span_rank<T: Field>(vs: &[Mat<T>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let len = vs[0].rows() * vs[0].cols();
    Mat::from_fn(len, vs.len(), |i, j| vs[j].data()[i].clone()).rank()
}

/// Coordinates of `v` in the basis `basis`.
pub fn coordinates<T: Field>(basis: &[Mat<T>], v: &Mat<T>) -> crate::Result<Vec<T>> {
    let len = v.rows() * v.cols();
    let a = Mat::from_fn(len, basis.len(), |i, j| basis[j].data()[i].clone());
    a.solve_column(v.data())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn chains_span_each_space() {
        let expect = |k: ModelKind, s: Space| match (k, s) {
            (ModelKind::Ternary, Space::H) => (3, vec![2]),
            (ModelKind::Ternary, Space::S1) => (3, vec![2]),
            (ModelKind::Ternary, Space::S2) => (5, vec![4]),
            (_, Space::H) => (6, vec![2, 2]),
            (_, Space::S1) => (4, vec![2, 0]),
            (_, Space::S2) => (9, vec![4, 2, 0]),
        };
        for kind in [ModelKind::Ternary, ModelKind::QuasiSplit, ModelKind::Split] {
            let model = LieModel::new(kind);
            for space in [Space::H, Space::S1, Space::S2] {
                let dec = weight_decomposition(&model, space);
                let t = model.triple_in(space);
                assert!(dec.check(&t.h, &t.x, &t.y).all(), "{kind:?} {space:?}");
                let (dim, hw) = expect(kind, space);
                assert_eq!(dec.dim(), dim);
                assert_eq!(dec.highest_weights(), hw);
                for (eta, lam) in [(2, 3), (-5, 7)] {
                    let num = dec.map(|x| x.eval(&q(eta), &q(lam)));
                    assert_eq!(span_rank(&num.basis()), dim, "{kind:?} {space:?}");
                }
            }
        }
    }
}
