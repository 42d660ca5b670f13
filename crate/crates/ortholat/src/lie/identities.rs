//! Table of the bracket identities satisfied by the model algebras and
//! their complements, checked exactly with symbolic `η` and `λ`.

use serde::Serialize;

use crate::groups::ModelKind;
use crate::matrix::Mat;
use crate::scalar::Ring;

use super::algebra::{embed, in_orthogonal_algebra, s1_element, LieModel};
use super::sym::Sym;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub algebra: String,
    pub identity: String,
    pub holds: bool,
}

struct Table {
    algebra: String,
    rows: Vec<IdentityCheck>,
}

impl Table {
    fn push(&mut self, identity: impl Into<String>, holds: bool) {
        self.rows.push(IdentityCheck { algebra: self.algebra.clone(), identity: identity.into(), holds });
    }

    fn eq(&mut self, identity: impl Into<String>, lhs: Mat<Sym>, rhs: Mat<Sym>) {
        self.push(identity, lhs == rhs);
    }

    fn section(&mut self, algebra: impl Into<String>) {
        self.algebra = algebra.into();
    }
}

fn ad_pow(z: &Mat<Sym>, r: &Mat<Sym>, k: usize) -> Mat<Sym> {
    (0..k).fold(r.clone(), |acc, _| z.bracket(&acc))
}

fn s(n: i64) -> Sym {
    Sym::int(n)
}

/// Checks `ad(Z)^k (e_i) = T(e_i)` on the shorthand basis of `𝔰₁`, where
/// `T` maps coefficient vectors to coefficient vectors.
fn shorthand_rule(
    t: &mut Table,
    model: &LieModel<Sym>,
    label: &str,
    z: &Mat<Sym>,
    k: usize,
    rule: impl Fn(&[Sym]) -> Vec<Sym>,
) {
    let n = model.n();
    let zd = embed(z, n + 1);
    let ok = (0..n).all(|i| {
        let e: Vec<Sym> = (0..n).map(|j| s((i == j) as i64)).collect();
        ad_pow(&zd, &s1_element(model.kind, &e), k) == s1_element(model.kind, &rule(&e))
    });
    t.push(label, ok);
}

fn exp_nilpotent(z: &Mat<Sym>) -> Mat<Sym> {
    let n = z.rows();
    let mut acc = Mat::identity_like(n, &Sym::zero());
    let mut term = acc.clone();
    for k in 1..=n {
        term = term.mul(z).scale(&Sym::ratio(1, k as i64));
        acc = acc.add(&term);
    }
    acc
}

fn common(t: &mut Table, model: &LieModel<Sym>) {
    let name = t.algebra.clone();
    for b in &model.h_basis {
        t.push(format!("{} ∈ {name}", b.name), in_orthogonal_algebra(&b.m, &model.form));
    }
    t.push("[H,X] = 2X, [H,Y] = −2Y, [X,Y] = H", model.triple.relations_hold());
    for b in &model.s1_basis {
        t.push(format!("{} ∈ 𝔰𝔬(Q + λu²)", b.name), in_orthogonal_algebra(&b.m, &model.ambient_form));
    }
}

fn ternary(t: &mut Table) {
    let m = LieModel::new(ModelKind::Ternary);
    t.section("so(2,1)");
    common(t, &m);
    let (x, y) = (&m.triple.x, &m.triple.y);
    t.section("s1 in so(4)");
    shorthand_rule(t, &m, "ad[X](a,b,c) = (b,c,0)", x, 1, |v| vec![v[1].clone(), v[2].clone(), s(0)]);
    shorthand_rule(t, &m, "ad[X]^2(a,b,c) = (c,0,0)", x, 2, |v| vec![v[2].clone(), s(0), s(0)]);
    shorthand_rule(t, &m, "ad[Y](a,b,c) = (0,2a,2b)", y, 1, |v| {
        vec![s(0), v[0].mul_ref(&s(2)), v[1].mul_ref(&s(2))]
    });
    shorthand_rule(t, &m, "ad[Y]^2(a,b,c) = (0,0,4a)", y, 2, |v| vec![s(0), s(0), v[0].mul_ref(&s(4))]);
    t.section("s2 in sl3");
    let z = m.s2("z").clone();
    t.eq("ad[H]z = 4z", m.triple.h.bracket(&z), z.scale(&s(4)));
    t.push("ad[X]z = 0", x.bracket(&z).is_zero());
    t.eq("ad[Y]z = 2·z1", ad_pow(y, &z, 1), m.s2("z1").scale(&s(2)));
    t.eq("ad[Y]^2 z = 4·z2", ad_pow(y, &z, 2), m.s2("z2").scale(&s(4)));
    t.eq("ad[Y]^3 z = 24·z3", ad_pow(y, &z, 3), m.s2("z3").scale(&s(24)));
    t.eq("ad[Y]^4 z = 96·E31", ad_pow(y, &z, 4), m.s2("zT").scale(&s(96)));
    let zt = m.s2("zT").clone();
    let half_h = m.triple.h.scale(&Sym::ratio(1, 2));
    t.eq("ad[zT]z = −H/2", zt.bracket(&z), half_h.neg());
    let e = exp_nilpotent(&zt);
    let einv = exp_nilpotent(&zt.neg());
    t.eq("Ad[exp zT]z = z − H/2 − zT", e.mul(&z).mul(&einv), z.sub(&half_h).sub(&zt));
}

fn quasi(t: &mut Table) {
    let m = LieModel::new(ModelKind::QuasiSplit);
    let eta = Sym::eta();
    let lam = Sym::lambda();
    t.section("so_eta(3,1)");
    common(t, &m);
    let (h, x, y) = (m.h("H").clone(), m.h("X").clone(), m.h("Y").clone());
    let (mm, x2, y2) = (m.h("M").clone(), m.h("X2").clone(), m.h("Y2").clone());
    t.push("ad[H]M = 0", h.bracket(&mm).is_zero());
    t.eq("ad[H]X2 = 2X2", h.bracket(&x2), x2.scale(&s(2)));
    t.eq("ad[H]Y2 = −2Y2", h.bracket(&y2), y2.scale(&s(-2)));
    t.eq("ad[Y]X2 = −M", y.bracket(&x2), mm.neg());
    t.eq("ad[Y]M = 2Y2", y.bracket(&mm), y2.scale(&s(2)));
    t.eq("ad[X]Y2 = M", x.bracket(&y2), mm.clone());
    t.eq("ad[X]M = −2X2", x.bracket(&mm), x2.scale(&s(-2)));
    t.eq("ad[Y2]X2 = ηH", y2.bracket(&x2), h.scale(&eta));
    t.eq("ad[M]X = 2X2", mm.bracket(&x), x2.scale(&s(2)));
    t.eq("ad[M]X2 = −2ηX", mm.bracket(&x2), x.scale(&Sym::term(-2, 1, 0)));
    t.eq("ad[M]Y = −2Y2", mm.bracket(&y), y2.scale(&s(-2)));
    t.eq("ad[M]Y2 = 2ηY", mm.bracket(&y2), y.scale(&Sym::term(2, 1, 0)));

    t.section("s1 in so(5), quasi-split");
    let c = |v: &[Sym], i: usize, k: i64| v[i].mul_ref(&s(k));
    shorthand_rule(t, &m, "ad[X](a,b,c,d) = (b,d,0,0)", &x, 1, |v| vec![v[1].clone(), v[3].clone(), s(0), s(0)]);
    shorthand_rule(t, &m, "ad[X]^2(a,b,c,d) = (d,0,0,0)", &x, 2, |v| vec![v[3].clone(), s(0), s(0), s(0)]);
    shorthand_rule(t, &m, "ad[Y](a,b,c,d) = (0,2a,0,2b)", &y, 1, |v| vec![s(0), c(v, 0, 2), s(0), c(v, 1, 2)]);
    shorthand_rule(t, &m, "ad[Y]^2(a,b,c,d) = (0,0,0,4a)", &y, 2, |v| vec![s(0), s(0), s(0), c(v, 0, 4)]);
    shorthand_rule(t, &m, "ad[X2](a,b,c,d) = (c,0,ηd,0)", &x2, 1, |v| {
        vec![v[2].clone(), s(0), v[3].mul_ref(&eta), s(0)]
    });
    shorthand_rule(t, &m, "ad[X2]^2(a,b,c,d) = (ηd,0,0,0)", &x2, 2, |v| vec![v[3].mul_ref(&eta), s(0), s(0), s(0)]);
    shorthand_rule(t, &m, "ad[Y2](a,b,c,d) = (0,0,−2ηa,−2c)", &y2, 1, |v| {
        vec![s(0), s(0), v[0].mul_ref(&Sym::term(-2, 1, 0)), c(v, 2, -2)]
    });
    shorthand_rule(t, &m, "ad[Y2]^2(a,b,c,d) = (0,0,0,4ηa)", &y2, 2, |v| {
        vec![s(0), s(0), s(0), v[0].mul_ref(&Sym::term(4, 1, 0))]
    });
    let e = |i: usize| {
        let v: Vec<Sym> = (0..4).map(|j| s((i == j) as i64)).collect();
        s1_element(ModelKind::QuasiSplit, &v)
    };
    t.eq("[(1,0,0,0),(0,1,0,0)] = −λX", e(0).bracket(&e(1)), embed(&x, 5).scale(&lam.neg_ref()));

    t.section("s2 in sl4, quasi-split");
    let g = |n: &str| m.s2(n).clone();
    let (z, x1p, h4, y1p, zt) = (g("z"), g("X1'"), g("H4"), g("Y1'"), g("zT"));
    let (x2p, sp, y2p, ht) = (g("X2'"), g("S"), g("Y2'"), g("Ht"));
    t.eq("ad[H]z = 4z", h.bracket(&z), z.scale(&s(4)));
    t.push("ad[X]z = 0", x.bracket(&z).is_zero());
    t.eq("ad[Y]z = −2X1'", y.bracket(&z), x1p.scale(&s(-2)));
    t.eq("ad[Y]X1' = 2H4", y.bracket(&x1p), h4.scale(&s(2)));
    t.eq("ad[Y]H4 = −6Y1'", y.bracket(&h4), y1p.scale(&s(-6)));
    t.eq("ad[Y]Y1' = 4zT", y.bracket(&y1p), zt.scale(&s(4)));
    t.eq("ad[H]X2' = 2X2'", h.bracket(&x2p), x2p.scale(&s(2)));
    t.push("ad[X]X2' = 0", x.bracket(&x2p).is_zero());
    t.eq("ad[Y]X2' = 2S", y.bracket(&x2p), sp.scale(&s(2)));
    t.eq("ad[Y]S = −2Y2'", y.bracket(&sp), y2p.scale(&s(-2)));
    t.push("ad[X]Ht = ad[Y]Ht = 0", x.bracket(&ht).is_zero() && y.bracket(&ht).is_zero());
    t.push("ad[M]z = ad[M]zT = 0", mm.bracket(&z).is_zero() && mm.bracket(&zt).is_zero());
    t.eq("ad[M]X1' = 2X2'", mm.bracket(&x1p), x2p.scale(&s(2)));
    t.eq("ad[M]X2' = −2ηX1'", mm.bracket(&x2p), x1p.scale(&Sym::term(-2, 1, 0)));
    t.eq("ad[M]Y1' = 2Y2'", mm.bracket(&y1p), y2p.scale(&s(2)));
    t.eq("ad[M]Y2' = −2ηY1'", mm.bracket(&y2p), y1p.scale(&Sym::term(-2, 1, 0)));
    t.eq("ad[M]H4 = 4S", mm.bracket(&h4), sp.scale(&s(4)));
    let four_eta_thirds = Sym::term(-4, 1, 0).mul_ref(&Sym::ratio(1, 3));
    t.eq("ad[M]S = −(4η/3)(H4 + Ht)", mm.bracket(&sp), h4.add(&ht).scale(&four_eta_thirds));
    t.eq("ad[M]Ht = 8S", mm.bracket(&ht), sp.scale(&s(8)));
    let comb = h4.neg().add(&ht.scale(&s(2)));
    t.eq("ad[Y2]z = 2X2'", y2.bracket(&z), x2p.scale(&s(2)));
    let two_eta_thirds = Sym::term(2, 1, 0).mul_ref(&Sym::ratio(1, 3));
    t.eq("ad[Y2]X2' = (2η/3)(−H4 + 2Ht)", y2.bracket(&x2p), comb.scale(&two_eta_thirds));
    t.eq("ad[Y2](−H4 + 2Ht) = −18Y2'", y2.bracket(&comb), y2p.scale(&s(-18)));
    t.eq("ad[Y2]Y2' = −4ηzT", y2.bracket(&y2p), zt.scale(&Sym::term(-4, 1, 0)));
    t.eq("ad[Y2]Ht = −8Y2'", y2.bracket(&ht), y2p.scale(&s(-8)));
    t.eq("ad[X2]Ht = −4X2'", x2.bracket(&ht), x2p.scale(&s(-4)));
}

fn split(t: &mut Table) {
    let m = LieModel::new(ModelKind::Split);
    let lam = Sym::lambda();
    t.section("so(2,2)");
    common(t, &m);
    let g = |n: &str| m.h(n).clone();
    let (h, x, y) = (g("H"), g("X"), g("Y"));
    let (h1, x1, y1, h2, x2, y2) = (g("H1"), g("X1"), g("Y1"), g("H2"), g("X2"), g("Y2"));
    for (label, (a, b, c)) in [("1", (&h1, &x1, &y1)), ("2", (&h2, &x2, &y2))] {
        let tr = super::algebra::Sl2Triple { h: a.clone(), x: b.clone(), y: c.clone() };
        t.push(format!("(H{label},X{label},Y{label}) is an sl2-triple"), tr.relations_hold());
    }
    let commute = [&h1, &x1, &y1].iter().all(|a| [&h2, &x2, &y2].iter().all(|b| a.bracket(b).is_zero()));
    t.push("[sl2 ⊗ Id, Id ⊗ sl2] = 0", commute);
    t.push("H = H1 + H2, X = X1 + X2, Y = Y1 + Y2", h == h1.add(&h2) && x == x1.add(&x2) && y == y1.add(&y2));

    t.section("s1 in so(5), split");
    let c = |v: &[Sym], i: usize, k: i64| v[i].mul_ref(&s(k));
    shorthand_rule(t, &m, "ad[X](a,b,c,d) = (b+c,d,d,0)", &x, 1, |v| {
        vec![v[1].add_ref(&v[2]), v[3].clone(), v[3].clone(), s(0)]
    });
    shorthand_rule(t, &m, "ad[X]^2(a,b,c,d) = (2d,0,0,0)", &x, 2, |v| vec![c(v, 3, 2), s(0), s(0), s(0)]);
    shorthand_rule(t, &m, "ad[Y](a,b,c,d) = (0,a,a,b+c)", &y, 1, |v| {
        vec![s(0), v[0].clone(), v[0].clone(), v[1].add_ref(&v[2])]
    });
    shorthand_rule(t, &m, "ad[Y]^2(a,b,c,d) = (0,0,0,2a)", &y, 2, |v| vec![s(0), s(0), s(0), c(v, 0, 2)]);
    shorthand_rule(t, &m, "ad[Y1](a,b,c,d) = (0,a,0,c)", &y1, 1, |v| vec![s(0), v[0].clone(), s(0), v[2].clone()]);
    shorthand_rule(t, &m, "ad[X1](a,b,c,d) = (b,0,d,0)", &x1, 1, |v| vec![v[1].clone(), s(0), v[3].clone(), s(0)]);
    shorthand_rule(t, &m, "ad[Y2](a,b,c,d) = (0,0,a,b)", &y2, 1, |v| vec![s(0), s(0), v[0].clone(), v[1].clone()]);
    shorthand_rule(t, &m, "ad[X2](a,b,c,d) = (c,d,0,0)", &x2, 1, |v| vec![v[2].clone(), v[3].clone(), s(0), s(0)]);
    let e = |i: usize| {
        let v: Vec<Sym> = (0..4).map(|j| s((i == j) as i64)).collect();
        s1_element(ModelKind::Split, &v)
    };
    t.eq("[(1,0,0,0),(0,0,1,0)] = λX1", e(0).bracket(&e(2)), embed(&x1, 5).scale(&lam));
    t.eq("[(1,0,0,0),(0,1,0,0)] = λX2", e(0).bracket(&e(1)), embed(&x2, 5).scale(&lam));

    t.section("s2 in sl4, split");
    let j = &m.form;
    t.push("J² = I", j.mul(j) == Mat::identity_like(4, &Sym::zero()));
    let in_s2 = |v: &Mat<Sym>| *v == j.mul(&v.transpose()).mul(j);
    t.push("s2 = {v : v = J vᵀ J⁻¹}", m.s2_basis.iter().all(|b| in_s2(&b.m)));
    let invariant = m.h_basis.iter().all(|a| m.s2_basis.iter().all(|b| in_s2(&a.m.bracket(&b.m))));
    t.push("s2 is so(2,2)-invariant", invariant);
    let z = m.s2("x").clone();
    t.eq("ad[H]z = 4z", h.bracket(&z), z.scale(&s(4)));
    t.push("ad[X]z = 0", x.bracket(&z).is_zero());
}

/// Every identity, for all three models.
pub fn identity_table() -> Vec<IdentityCheck> {
    let mut t = Table { algebra: String::new(), rows: Vec::new() };
    ternary(&mut t);
    quasi(&mut t);
    split(&mut t);
    t.rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_identity_holds() {
        let table = identity_table();
        let failed: Vec<_> = table.iter().filter(|c| !c.holds).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(table.len() > 90, "{}", table.len());
    }

    #[test]
    fn sign_variants_fail() {
        let m = LieModel::new(ModelKind::QuasiSplit);
        let y2 = embed(m.h("Y2"), 5);
        let a = s1_element(ModelKind::QuasiSplit, &[s(1), s(0), s(0), s(0)]);
        let variant = s1_element(ModelKind::QuasiSplit, &[s(0), s(0), Sym::eta().neg_ref(), s(0)]);
        assert_ne!(y2.bracket(&a), variant);
        let y2p = m.s2("Y2'");
        let n_as_one = m.s2("Y1'").scale(&s(-2));
        assert_ne!(m.h("M").bracket(y2p), n_as_one);
    }
}
