use std::str::FromStr;

use num_rational::BigRational;
use ortholat::equidist::{run_sweep, shape_statistics, EquidistConfig, EquidistReport};
use ortholat::forms::{choose_prime, classify, verify_conjugation};
use ortholat::groups::cartan::{cartan, precision_overhead};
use ortholat::groups::sl2::{a_p, random_k as sl2_random_k, sl2_cartan};
use ortholat::groups::tree::{coset_representatives, count_sphere};
use ortholat::groups::volume::{ball_volume, sphere_volume, BallKind};
use ortholat::groups::{ModelGroup, ModelKind};
use ortholat::hecke::{default_norm_bound, find_small_stabilizer, hecke_classes, hecke_related};
use ortholat::lie::{certificate_table, identity_table};
use ortholat::padic::{is_prime, smallest_nonresidue, Padic, PadicCtx};
use ortholat::shape::shape;
use ortholat::sphere::{enumerate_sphere, feasible, ortho_lattice, sphere_orbit_reps, SpherePoint};
use ortholat::{Mat, Result as LibResult};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::args::*;
use crate::{CliError, Output, Series};

type Result<T> = std::result::Result<T, CliError>;

fn rows_i64(m: &Mat<i64>) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn parse_matrix<T: FromStr>(s: &str) -> Result<Vec<Vec<T>>> {
    let rows: Vec<Vec<T>> = s
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|x| x.trim().parse::<T>().map_err(|_| CliError::Invalid(format!("cannot parse matrix entry {x:?}"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Invalid("matrix must be square".into()));
    }
    Ok(rows)
}

/// SHA-256 of the residues of `p^s g` modulo `p^k`, where `p^s` clears denominators.
pub fn padic_digest(g: &Mat<Padic>, k: u32) -> LibResult<String> {
    let s = g.iter().map(|x| (-x.valuation_lower_bound()).max(0)).max().unwrap_or(0);
    let mut h = Sha256::new();
    for x in g.iter() {
        h.update(x.shift(s).residue(k)?.to_bytes_le());
        h.update([0xff]);
    }
    Ok(h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect())
}

fn model_kind(k: GroupKind) -> Result<ModelKind> {
    match k {
        GroupKind::So21 => Ok(ModelKind::Ternary),
        GroupKind::So31 => Ok(ModelKind::QuasiSplit),
        GroupKind::So22 => Ok(ModelKind::Split),
        GroupKind::Sl2 => Err(CliError::Invalid("sl2 is not an orthogonal model group here".into())),
    }
}

fn ball_kind(k: GroupKind) -> BallKind {
    match k {
        GroupKind::So21 => BallKind::So21,
        GroupKind::So31 => BallKind::So31,
        GroupKind::So22 => BallKind::So22Plus,
        GroupKind::Sl2 => BallKind::Sl2,
    }
}

fn odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(CliError::Invalid(format!("{p} is not an odd prime")));
    }
    Ok(())
}

pub fn sphere(a: &SphereArgs) -> Result<Output> {
    let ok = feasible(a.d, a.disc)?;
    let reps = sphere_orbit_reps(a.d, a.disc)?;
    let count: u64 = reps.iter().map(|r| r.orbit_size).sum();
    let note = if ok {
        None
    } else {
        Some(format!("no primitive points: d = {} and 8 divides D = {}", a.d, a.disc))
    };
    let mut text = format!("{count} points");
    if let Some(n) = &note {
        text = format!("{text} ({n})");
    }
    let points = enumerate_sphere(a.d, a.disc)?;
    let series = Series {
        header: vec!["v".into()],
        rows: points.iter().map(|p| vec![join(p.coords(), " ")]).collect(),
    };
    let mut result = json!({
        "d": a.d, "D": a.disc, "feasible": ok, "note": note, "count": count,
        "orbit_reps": reps,
    });
    if a.points {
        result["points"] = json!(points.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>());
    }
    Ok(Output { text, result, series: Some(series) })
}

pub fn shape_cmd(a: &ShapeArgs) -> Result<Output> {
    if let Some(v) = &a.v {
        let p = SpherePoint::new(v.clone())?;
        let lat = ortho_lattice(&p)?;
        let s = shape(&p)?;
        let text = format!("ratios {} ht {:.6}", join(&s.ratios.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>(), " "), s.ht);
        let result = json!({
            "v": v, "D": p.disc(),
            "basis": rows_i64(&lat.basis), "w": lat.w, "gram": rows_i64(&lat.gram), "g": rows_i64(&lat.g()),
            "shape": s,
        });
        let series = Series { header: shape_header(), rows: vec![shape_row(v, &s)] };
        return Ok(Output { text, result, series: Some(series) });
    }
    let (Some(d), Some(disc)) = (a.d, a.disc) else {
        return Err(CliError::Invalid("give --v or both --d and --D".into()));
    };
    let points = enumerate_sphere(d, disc)?;
    let shapes = points.iter().map(shape).collect::<LibResult<Vec<_>>>()?;
    let rows = points.iter().zip(&shapes).map(|(p, s)| shape_row(p.coords(), s)).collect();
    let (text, stats) = if shapes.is_empty() {
        ("0 points".to_string(), Value::Null)
    } else {
        let st = shape_statistics(&shapes)?;
        (format!("{} points, median l2/l1 {:.6}", points.len(), st.ratios[0].median), json!(st))
    };
    Ok(Output {
        text,
        result: json!({"d": d, "D": disc, "count": points.len(), "statistics": stats}),
        series: Some(Series { header: shape_header(), rows }),
    })
}

fn shape_header() -> Vec<String> {
    ["v", "reduced_gram", "ratios", "ht"].map(String::from).to_vec()
}

fn shape_row(v: &[i64], s: &ortholat::shape::ShapeObservables) -> Vec<String> {
    vec![
        join(v, " "),
        s.reduced_gram.iter().map(|r| join(r, " ")).collect::<Vec<_>>().join(";"),
        join(&s.ratios, " "),
        s.ht.to_string(),
    ]
}

pub fn choose_prime_cmd(a: &ChoosePrimeArgs) -> Result<Output> {
    let c = choose_prime(a.disc, a.cutoff)?;
    Ok(Output { text: c.p.to_string(), result: json!(c), series: None })
}

pub fn classify_cmd(a: &ClassifyArgs, seed: u64) -> Result<Output> {
    let (gram, disc) = match (&a.v, &a.gram) {
        (Some(v), None) => {
            let p = SpherePoint::new(v.clone())?;
            (ortho_lattice(&p)?.gram, p.disc())
        }
        (None, Some(g)) => {
            let rows: Vec<Vec<i64>> = parse_matrix(g)?;
            let m = Mat::from_rows(rows);
            let det = ortholat::sphere::int_det(&m);
            (m, i64::try_from(det.abs()).map_err(|_| CliError::Invalid("determinant too large".into()))?)
        }
        _ => return Err(CliError::Invalid("give exactly one of --v and --gram".into())),
    };
    if disc == 0 {
        return Err(CliError::Invalid("the form is degenerate".into()));
    }
    let p = match a.p {
        Some(p) => {
            if !is_prime(p) || p % 4 != 1 || disc as u64 % p == 0 || p < a.cutoff {
                return Err(CliError::Invalid(format!(
                    "p = {p} must be a prime ≡ 1 mod 4, p ∤ D = {disc}, p ≥ M = {}",
                    a.cutoff
                )));
            }
            p
        }
        None => choose_prime((disc as u64).max(2), a.cutoff)?.p,
    };
    let ctx = PadicCtx::new(p, a.precision)?;
    let cls = classify(&gram, &ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = a.precision as i64 - 4;
    let verified = verify_conjugation(&gram, &cls, a.samples, k, &mut rng)?;
    let digest = cls.digest(a.precision.min(16))?;
    let result = json!({
        "D": disc, "p": p, "kind": cls.kind, "eta": cls.eta, "scale": cls.scale,
        "hv_digest": digest, "gram": rows_i64(&gram), "verified": verified, "samples": a.samples,
        "congruence_digits": k,
    });
    if !verified {
        return Err(CliError::failed("conjugation check failed", result));
    }
    Ok(Output { text: format!("{} p={p}", cls.kind.name()), result, series: None })
}

pub fn cartan_cmd(a: &CartanArgs, seed: u64) -> Result<Output> {
    odd_prime(a.p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_digits = a.precision as i64;
    let mut trials = Vec::new();
    let inputs: Vec<Option<Vec<Vec<BigRational>>>> = match &a.matrix {
        Some(s) => vec![Some(parse_matrix(s)?)],
        None => (0..a.samples).map(|_| None).collect(),
    };
    for input in inputs {
        let m_hint = input.as_ref().map_or(a.m, |_| 0);
        let base = PadicCtx::new(a.p, (n_digits + precision_overhead(m_hint.abs())) as u32)?;
        let g_of = |ctx: &std::sync::Arc<PadicCtx>, rows: &Vec<Vec<BigRational>>| {
            Mat::from_rows(rows.clone()).to_padic(ctx)
        };
        let trial = if a.kind == GroupKind::Sl2 {
            let (g, expected) = match &input {
                Some(rows) => {
                    let g0 = g_of(&base, rows);
                    let m = g0.norm_exp().unwrap_or(0).max(0);
                    let ctx = PadicCtx::new(a.p, (n_digits + precision_overhead(m)) as u32)?;
                    (g_of(&ctx, rows), None)
                }
                None => {
                    let g = sl2_random_k(&base, &mut rng, 8).mul(&a_p(&base, -a.m)).mul(&sl2_random_k(&base, &mut rng, 8));
                    (g, Some(a.m.abs()))
                }
            };
            let f = sl2_cartan(&g)?;
            json!({
                "m": f.m, "n": null, "expected": expected.map(|m| (m, 0)),
                "norm": g.norm_exp(), "wedge2_norm": null,
                "reassembles": f.reassemble().congruent(&g, n_digits),
                "k1": padic_digest(&f.k1, 16)?, "k2": padic_digest(&f.k2, 16)?,
            })
        } else {
            let kind = model_kind(a.kind)?;
            let (g, expected, grp) = match &input {
                Some(rows) => {
                    let g0 = g_of(&base, rows);
                    let m = g0.norm_exp().unwrap_or(0).max(0);
                    let ctx = PadicCtx::new(a.p, (n_digits + precision_overhead(m)) as u32)?;
                    let grp = ModelGroup::new(kind, &ctx)?;
                    (g_of(&ctx, rows), None, grp)
                }
                None => {
                    let grp = ModelGroup::new(kind, &base)?;
                    let n = if kind == ModelKind::Split { a.n } else { 0 };
                    if a.m < n.abs() {
                        return Err(CliError::Invalid("need m ≥ |n|".into()));
                    }
                    let g = grp.random_k(&mut rng, 12).mul(&grp.a(a.m, n)).mul(&grp.random_k(&mut rng, 12));
                    (g, Some((a.m, n)), grp)
                }
            };
            let f = cartan(&grp, &g)?;
            let wedge = if g.rows() == 4 { g.wedge2_norm_exp() } else { None };
            json!({
                "m": f.m, "n": f.n, "expected": expected,
                "norm": g.norm_exp(), "wedge2_norm": wedge,
                "reassembles": f.reassemble(&grp).congruent(&g, n_digits),
                "k1": padic_digest(&f.k1, 16)?, "k2": padic_digest(&f.k2, 16)?,
            })
        };
        trials.push(trial);
    }
    let ok = trials.iter().all(|t| {
        t["reassembles"] == json!(true)
            && (t["expected"].is_null() || t["expected"] == json!([t["m"], if t["n"].is_null() { json!(0) } else { t["n"].clone() }]))
    });
    let first = &trials[0];
    let text = match a.kind {
        GroupKind::So22 => format!("m={} n={}", first["m"], first["n"]),
        _ => format!("m={}", first["m"]),
    };
    let result = json!({"kind": a.kind, "p": a.p, "N": a.precision, "trials": trials, "ok": ok});
    if !ok {
        return Err(CliError::failed("a decomposition did not reproduce its input", result));
    }
    Ok(Output { text, result, series: None })
}

pub fn volume_cmd(a: &VolumeArgs) -> Result<Output> {
    odd_prime(a.p)?;
    let k = ball_kind(a.kind);
    let v = if a.sphere { sphere_volume(k, a.p, a.l) } else { ball_volume(k, a.p, a.l) };
    Ok(Output {
        text: v.to_string(),
        result: json!({"kind": a.kind, "p": a.p, "l": a.l, "sphere": a.sphere, "volume": v.to_string()}),
        series: None,
    })
}

pub fn tree_cmd(a: &TreeArgs) -> Result<Output> {
    odd_prime(a.p)?;
    let eta = smallest_nonresidue(a.p)? as i64;
    let count = count_sphere(ball_kind(a.kind), a.p, eta, a.l)?;
    let mut series = None;
    if matches!(a.kind, GroupKind::So21 | GroupKind::So31) {
        let ctx = PadicCtx::new(a.p, 2 * a.l + 8)?;
        let grp = ModelGroup::new(model_kind(a.kind)?, &ctx)?;
        let reps = coset_representatives(&grp, a.l as usize)?;
        let rows = reps
            .iter()
            .map(|(w, g)| {
                Ok(vec![w.to_string(), padic_digest(g, 2 * a.l + 2)?, g.norm_exp().map_or("?".into(), |e| e.to_string())])
            })
            .collect::<LibResult<Vec<_>>>()?;
        series = Some(Series { header: ["word", "digest", "norm_exp"].map(String::from).to_vec(), rows });
    }
    let ok = count.distinct == count.words && count.norms_exact;
    let result = json!({"kind": a.kind, "p": a.p, "l": a.l, "count": count, "certified": ok});
    if !ok {
        return Err(CliError::failed("coset representatives are not pairwise distinct", result));
    }
    Ok(Output { text: count.words.to_string(), result, series })
}

pub fn lie_cmd(c: &LieCommand) -> Result<Output> {
    let LieCommand::Verify { p, lambda } = c;
    let table = identity_table();
    let mut certs = Vec::new();
    for &q in p {
        certs.extend(certificate_table(q, *lambda)?);
    }
    let passed = table.iter().filter(|r| r.holds).count();
    let certs_ok = certs.iter().filter(|c| c.holds()).count();
    let mut rows: Vec<Vec<String>> = table
        .iter()
        .map(|r| vec![r.algebra.clone(), r.identity.clone(), pass(r.holds).into()])
        .collect();
    rows.extend(certs.iter().map(|c| {
        vec![format!("{}/{}", c.kind.name(), c.space), format!("certificates at p = {}", c.p), pass(c.holds()).into()]
    }));
    let text = format!(
        "{}\nidentities {passed}/{} pass, certificates {certs_ok}/{} pass",
        rows.iter().map(|r| format!("{}  {}  {}", r[2], r[0], r[1])).collect::<Vec<_>>().join("\n"),
        table.len(),
        certs.len()
    );
    let result = json!({"identities": table, "certificates": certs, "passed": passed, "total": table.len()});
    let out = Output { text, result, series: Some(Series { header: ["algebra", "check", "result"].map(String::from).to_vec(), rows }) };
    if passed < table.len() || certs_ok < certs.len() {
        return Err(CliError::Failed("some checks failed".into(), Box::new(out)));
    }
    Ok(out)
}

fn pass(b: bool) -> &'static str {
    if b { "PASS" } else { "FAIL" }
}

pub fn hecke_cmd(c: &HeckeCommand) -> Result<Output> {
    match c {
        HeckeCommand::Classes { d, disc, p, kmax } => {
            let h = hecke_classes(*d, *disc, *p, *kmax)?;
            let rows = h
                .classes
                .iter()
                .enumerate()
                .map(|(i, cl)| vec![i.to_string(), join(&cl[0], " "), cl.len().to_string()])
                .collect();
            Ok(Output {
                text: format!("{} classes: {}", h.classes.len(), join(&h.sizes(), " ")),
                result: json!(h),
                series: Some(Series { header: ["class", "representative", "size"].map(String::from).to_vec(), rows }),
            })
        }
        HeckeCommand::Related { v, w, p, kmax } => {
            let (a, b) = (SpherePoint::new(v.clone())?, SpherePoint::new(w.clone())?);
            let r = hecke_related(&a, &b, *p, *kmax)?;
            let text = match &r {
                Some(x) => format!("related at level {}", x.k),
                None => format!("NOT_FOUND_UP_TO({kmax})"),
            };
            Ok(Output { text, result: json!({"v": v, "w": w, "p": p, "k_max": kmax, "witness": r}), series: None })
        }
        HeckeCommand::Stabilizer { v, p, kmax, norm_bound } => {
            let a = SpherePoint::new(v.clone())?;
            let bound = norm_bound.unwrap_or_else(|| default_norm_bound(*p));
            let s = find_small_stabilizer(&a, *p, *kmax, bound)?;
            Ok(Output {
                text: format!("{} elements", s.len()),
                result: json!({"v": v, "p": p, "k_max": kmax, "norm_bound": bound, "elements": s}),
                series: None,
            })
        }
    }
}

pub fn equidist_config(c: &EquidistCommand, seed: u64) -> EquidistConfig {
    let EquidistCommand::Run { d, dmin, dmax, samples, caps } = c;
    EquidistConfig {
        d: *d,
        dmin: *dmin,
        dmax: *dmax,
        samples: *samples,
        cap_thresholds: caps.clone(),
        seed,
        ..EquidistConfig::default()
    }
}

pub fn equidist_cmd(c: &EquidistCommand, seed: u64) -> Result<Output> {
    let r: EquidistReport = run_sweep(&equidist_config(c, seed))?;
    let header = ["D", "count", "orbit_reps", "discrepancy", "independence", "ratio2_median"]
        .into_iter()
        .map(String::from)
        .chain(r.config.ht_thresholds.iter().map(|t| format!("ht_gt_{t}")))
        .collect();
    let rows = r
        .rows
        .iter()
        .map(|row| {
            let mut v = vec![
                row.disc.to_string(),
                row.count.to_string(),
                row.orbit_reps.to_string(),
                row.discrepancy.to_string(),
                row.independence.to_string(),
                row.ratio2.median.to_string(),
            ];
            v.extend(row.ht_tail.iter().map(|t| t.1.to_string()));
            v
        })
        .collect();
    let text = format!(
        "{} discriminants; discrepancy slope {:.3} [{:.3}, {:.3}]; independence slope {:.3}; |Q_D| slope {:.3}; shape KS {:.4}",
        r.rows.len(),
        r.discrepancy_fit.slope,
        r.discrepancy_fit.slope_ci95.0,
        r.discrepancy_fit.slope_ci95.1,
        r.independence_fit.slope,
        r.growth.slope.slope,
        r.shape_halves.as_ref().map_or(f64::NAN, |c| c.ks)
    );
    Ok(Output { text, result: json!(r), series: Some(Series { header, rows }) })
}
