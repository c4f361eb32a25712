use std::collections::BTreeSet;

use ffsieve::lattice::fourier_ball_closed_form;
use ffsieve::sieve::{linear_sum_threshold, orthogonality_check};
use ffsieve::{
    kappa, m_thresholds, sieve_report, sigma_linear, tau_divisors, u_sum, weyl_identity_check, BallIndicator,
    CoeffFamily, CoeffKind, Error, FieldSpec, FiniteField, Lattice2, ModuliKind, ModuliSet, Poly, PolyRing,
    QScaled, QuadInt, QuadOrder, QuadRat, RatFun, SieveReport,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::*;
use crate::output::render;

/// Rendered records, summary lines for stderr, and the number of failed checks.
pub struct Report {
    pub records: Vec<u8>,
    pub summary: Vec<String>,
    pub failures: usize,
}

type Outcome = Result<Report, String>;

fn bad(key: &str) -> impl Fn(Error) -> String + '_ {
    move |e| format!("invalid value for --{key}: {e}")
}

fn ring(common: &Common) -> Result<PolyRing, String> {
    let spec: FieldSpec = common.field.parse().map_err(bad("q"))?;
    Ok(PolyRing::new(FiniteField::new(spec).map_err(bad("q"))?))
}

fn order(common: &Common) -> Result<QuadOrder, String> {
    let ring = ring(common)?;
    let alpha = ring.parse_poly(&common.alpha).map_err(bad("alpha"))?;
    QuadOrder::new(ring, &alpha).map_err(bad("alpha"))
}

fn report<T: Serialize>(rows: &[T], common: &Common, summary: Vec<String>, failures: usize) -> Outcome {
    Ok(Report { records: render(rows, common.json)?, summary, failures })
}

fn collect<T>(rows: Vec<Result<T, String>>) -> Result<Vec<T>, String> {
    rows.into_iter().collect()
}

/// Nonzero elements with `𝐃 ≤ d`, in ball order.
fn nonzero_up_to(o: &QuadOrder, d: i64) -> Vec<QuadInt> {
    o.ball(d).skip(1).collect()
}

pub fn parse_coeffs(o: &QuadOrder, spec: &str, seed: u64) -> Result<CoeffKind, String> {
    let invalid = || format!("invalid value for --coeffs: {spec:?}");
    let (head, rest) = match spec.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (spec, None),
    };
    Ok(match (head, rest) {
        ("ones", None) => CoeffKind::Ones,
        ("zero", None) => CoeffKind::User(Vec::new()),
        ("delta", None) => CoeffKind::Delta(QuadInt::zero()),
        ("delta", Some(g)) => CoeffKind::Delta(o.parse_quadint(g).map_err(bad("coeffs"))?),
        ("random", None) => CoeffKind::RandomUnit(seed),
        ("random", Some(s)) => CoeffKind::RandomUnit(s.parse().map_err(|_| invalid())?),
        ("user", Some(list)) => CoeffKind::User(
            list.split(',')
                .filter(|v| !v.trim().is_empty())
                .map(|v| v.trim().parse::<Complex64>().map_err(|_| invalid()))
                .collect::<Result<_, _>>()?,
        ),
        _ => return Err(invalid()),
    })
}

pub fn sieve(a: &SieveArgs) -> Outcome {
    let o = order(&a.common)?;
    let kinds =
        a.coeffs.iter().map(|c| parse_coeffs(&o, c, a.common.seed)).collect::<Result<Vec<_>, _>>()?;
    let mut tasks = Vec::new();
    for big_q in a.big_q.values() {
        for n in a.n.values() {
            for k in 0..kinds.len() {
                tasks.push((big_q, n, k));
            }
        }
    }
    let rows: Vec<SieveReport> = collect(
        tasks
            .par_iter()
            .map(|&(big_q, n, k)| {
                let family = CoeffFamily::new(&o, kinds[k].clone(), n).map_err(bad("coeffs"))?;
                sieve_report(&o, &family, a.moduli, big_q).map_err(|e| e.to_string())
            })
            .collect(),
    )?;
    let max = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    report(&rows, &a.common, vec![format!("max ratio {max}")], 0)
}

#[derive(Serialize)]
struct KappaRow {
    q: u32,
    alpha: String,
    moduli_kind: ModuliKind,
    #[serde(rename = "Q")]
    big_q: i64,
    #[serde(rename = "N")]
    n: i64,
    #[serde(rename = "M")]
    m: i64,
    #[serde(rename = "M1")]
    m1: i64,
    #[serde(rename = "M2")]
    m2: i64,
    kappa: u64,
    r1: Option<String>,
    f1: Option<String>,
    /// `𝒦 ≤ q`, checked only when `M < 0`.
    bound_holds: Option<bool>,
}

pub fn kappa_cmd(a: &KappaArgs) -> Outcome {
    let o = order(&a.common)?;
    let mut rows = Vec::new();
    for big_q in a.big_q.values() {
        for n in a.n.values() {
            let k = kappa(&o, &ModuliSet::new(a.moduli, big_q), n).map_err(|e| e.to_string())?;
            let (m, m1, m2) = m_thresholds(big_q, n, o.ell());
            let (r1, f1) = match &k.witness {
                Some((r, f)) => (Some(r.to_string()), Some(f.to_string())),
                None => (None, None),
            };
            rows.push(KappaRow {
                q: o.q(),
                alpha: o.alpha().to_string(),
                moduli_kind: a.moduli,
                big_q,
                n,
                m,
                m1,
                m2,
                kappa: k.value,
                r1,
                f1,
                bound_holds: (m < 0).then_some(k.value <= o.q() as u64),
            });
        }
    }
    let failures = rows.iter().filter(|r| r.bound_holds == Some(false)).count();
    report(&rows, &a.common, Vec::new(), failures)
}

#[derive(Serialize)]
struct LinearRow {
    q: u32,
    alpha: String,
    #[serde(rename = "X")]
    x: i64,
    h: String,
    /// Exponent of `N_T(h)`; empty when `h ∈ 𝔸`.
    torus_exponent: Option<i64>,
    threshold: i64,
    value: String,
    direct_eq_factorized: bool,
    bounds_hold: bool,
}

#[derive(Serialize)]
struct URow {
    q: u32,
    alpha: String,
    #[serde(rename = "X")]
    x: i64,
    #[serde(rename = "Y")]
    y: i64,
    f: String,
    r: String,
    value: f64,
    terms: u64,
    nonzero_terms: u64,
    majorant: f64,
}

/// Every `γr/f` with nonzero `f` and `γ` of `𝐃 ≤ d`, `r` over residues mod `f`.
pub fn h_grid(o: &QuadOrder, d: i64) -> Result<BTreeSet<QuadRat>, Error> {
    let mut hs = BTreeSet::new();
    let gammas: Vec<QuadInt> = o.ball(d).collect();
    for f in nonzero_up_to(o, d) {
        for r in o.residue_system(&f)?.reps() {
            for g in &gammas {
                hs.insert(o.fraction(&o.mul(g, &r), &f)?);
            }
        }
    }
    Ok(hs)
}

pub fn expsum(a: &ExpsumArgs) -> Outcome {
    let o = order(&a.common)?;
    if let Some(ys) = a.y {
        return usum_cmd(a, &o, ys);
    }
    let mut hs = BTreeSet::new();
    for h in &a.h {
        hs.insert(o.parse_quadrat(h).map_err(bad("h"))?);
    }
    if let Some(d) = a.grid {
        hs.extend(h_grid(&o, d).map_err(bad("grid"))?);
    }
    if hs.is_empty() {
        return Err("invalid value for --h: expsum needs --h, --grid or --Y".into());
    }
    let q = o.q() as i64;
    let tasks: Vec<(i64, &QuadRat)> = a.x.values().flat_map(|x| hs.iter().map(move |h| (x, h))).collect();
    let rows: Vec<LinearRow> = collect(
        tasks
            .par_iter()
            .map(|&(x, h)| {
                let s = sigma_linear(&o, x, h).map_err(bad("X"))?;
                let torus = o.torus_norm_t(h);
                let threshold = linear_sum_threshold(&o, x);
                let abs2 = s.direct.abs2_exact().to_cyclo();
                let bounded = match abs2.as_integer() {
                    Some(v) => v <= q.pow(2 * x as u32 + 4),
                    None => s.direct.abs() <= (q as f64).powi(x as i32 + 2),
                };
                let vanishes = torus <= Some(threshold) || s.direct.is_zero();
                Ok(LinearRow {
                    q: o.q(),
                    alpha: o.alpha().to_string(),
                    x,
                    h: h.to_string(),
                    torus_exponent: torus,
                    threshold,
                    value: s.direct.to_cyclo().to_string(),
                    direct_eq_factorized: s.agree(),
                    bounds_hold: bounded && vanishes,
                })
            })
            .collect(),
    )?;
    let failures = rows.iter().filter(|r| !r.direct_eq_factorized || !r.bounds_hold).count();
    let summary = vec![format!("{}/{} consistent", rows.len() - failures, rows.len())];
    report(&rows, &a.common, summary, failures)
}

fn usum_cmd(a: &ExpsumArgs, o: &QuadOrder, ys: IntRange) -> Outcome {
    let f = o.parse_quadint(a.f.as_deref().ok_or("invalid value for --f: U sums need --f")?).map_err(bad("f"))?;
    let rs = match &a.r {
        Some(r) => vec![o.parse_quadint(r).map_err(bad("r"))?],
        None => o.residue_system(&f).map_err(bad("f"))?.units(),
    };
    let mut rows = Vec::new();
    for x in a.x.values() {
        for y in ys.values() {
            for r in &rs {
                let u = u_sum(o, x, y, &f, r).map_err(|e| e.to_string())?;
                rows.push(URow {
                    q: o.q(),
                    alpha: o.alpha().to_string(),
                    x,
                    y,
                    f: f.to_string(),
                    r: r.to_string(),
                    value: u.value,
                    terms: u.terms,
                    nonzero_terms: u.nonzero_terms,
                    majorant: u.majorant,
                });
            }
        }
    }
    report(&rows, &a.common, Vec::new(), 0)
}

fn random_poly(ring: &PolyRing, rng: &mut ChaCha8Rng, max_deg: i64) -> Poly {
    ring.poly_from_index(rng.gen_range(0..ring.count_polys(max_deg)))
}

/// Numerator of degree ≤ 1 over `1` or a monic linear denominator.
fn random_coordinate(ring: &PolyRing, rng: &mut ChaCha8Rng) -> RatFun {
    let num = random_poly(ring, rng, 1);
    let c = rng.gen_range(0..=ring.q());
    let den = if c == 0 {
        Poly::one()
    } else {
        Poly::from_coeffs(vec![ring.field().elem(c - 1), ring.field().one()])
    };
    ring.ratfun(num, den).expect("denominator is nonzero")
}

#[derive(Serialize)]
struct PoissonRow {
    q: u32,
    alpha: String,
    f1: String,
    h: String,
    #[serde(rename = "L")]
    l: i64,
    lhs: u64,
    rhs: String,
    dual_terms: usize,
    equal: bool,
}

pub fn poisson(a: &PoissonArgs) -> Outcome {
    let o = order(&a.common)?;
    let ring = o.ring();
    let fixed = a.f1.as_deref().map(|s| o.parse_quadint(s).map_err(bad("f1"))).transpose()?;
    let pool = nonzero_up_to(&o, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let trials: Vec<(QuadInt, [RatFun; 2], i64)> = (0..a.trials)
        .map(|_| {
            let f1 = fixed.clone().unwrap_or_else(|| pool[rng.gen_range(0..pool.len())].clone());
            let h = [random_coordinate(ring, &mut rng), random_coordinate(ring, &mut rng)];
            let l = a.l.unwrap_or_else(|| rng.gen_range(-1..=2));
            (f1, h, l)
        })
        .collect();
    let rows: Vec<PoissonRow> = collect(
        trials
            .par_iter()
            .map(|(f1, h, l)| {
                let lattice = Lattice2::multiples_of(&o, f1).map_err(bad("f1"))?;
                let out = ffsieve::poisson_check(ring, &lattice, h, *l).map_err(|e| e.to_string())?;
                Ok(PoissonRow {
                    q: o.q(),
                    alpha: o.alpha().to_string(),
                    f1: f1.to_string(),
                    h: format!("{};{}", h[0], h[1]),
                    l: *l,
                    lhs: out.lhs,
                    rhs: out.rhs.to_string(),
                    dual_terms: out.dual_terms,
                    equal: out.equal,
                })
            })
            .collect(),
    )?;
    let exact = rows.iter().filter(|r| r.equal).count();
    let summary = vec![format!("{exact}/{} exact", rows.len())];
    report(&rows, &a.common, summary, rows.len() - exact)
}

#[derive(Serialize)]
struct FourierRow {
    q: u32,
    n: usize,
    #[serde(rename = "L")]
    l: i64,
    x: String,
    value: String,
    expected: String,
    equal: bool,
}

/// `∫ Φ₁(y/t^L) e(−x·y) dy` by coset summation, against `q^{nL}·qⁿΦ₁(t^{L+2}x)`.
pub fn fourier_value(ring: &PolyRing, x: &[RatFun], l: i64) -> (QScaled, QScaled) {
    let value = BallIndicator { scale_exponent: l, dim: x.len() }.fourier(ring, x);
    let scaled: Vec<RatFun> = x.iter().map(|xi| ring.rat_shift(xi, l)).collect();
    let closed = fourier_ball_closed_form(ring, &scaled);
    let expected = QScaled::from_int(ring.q(), ring.p(), closed).mul_qpow(x.len() as i64 * l);
    (value, expected)
}

pub fn fourier(a: &FourierArgs) -> Outcome {
    let ring = ring(&a.common)?;
    if !(1..=2).contains(&a.n) {
        return Err(format!("invalid value for --n: {} (expected 1 or 2)", a.n));
    }
    let x = a.x.split(';').map(|c| ring.parse_ratfun(c)).collect::<Result<Vec<_>, _>>().map_err(bad("x"))?;
    if x.len() != a.n {
        return Err(format!("invalid value for --x: {} coordinates for n = {}", x.len(), a.n));
    }
    let (value, expected) = fourier_value(&ring, &x, a.l);
    let row = FourierRow {
        q: ring.q(),
        n: a.n,
        l: a.l,
        x: a.x.clone(),
        value: value.to_string(),
        expected: expected.to_string(),
        equal: value == expected,
    };
    let failures = usize::from(!row.equal);
    report(&[row], &a.common, Vec::new(), failures)
}

#[derive(Serialize)]
struct WeylRow {
    q: u32,
    alpha: String,
    j: String,
    r1: String,
    f1: String,
    #[serde(rename = "Qhalf")]
    qhalf: i64,
    lhs: String,
    rhs: String,
    equal: bool,
    punctured_lhs: String,
    punctured_rhs: String,
    boundary_correction: String,
}

pub fn weyl(a: &WeylArgs) -> Outcome {
    let o = order(&a.common)?;
    let parse = |s: &Option<String>, key: &'static str| {
        s.as_deref().map(|s| o.parse_quadint(s).map_err(bad(key))).transpose()
    };
    let (j, r1, f1) = (parse(&a.j, "j")?, parse(&a.r1, "r1")?, parse(&a.f1, "f1")?);
    let trials = if j.is_some() && r1.is_some() && f1.is_some() && a.qhalf.is_some() { 1 } else { a.trials };
    let pool = nonzero_up_to(&o, 2);
    let ball: Vec<QuadInt> = o.ball(2).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let tuples: Vec<(QuadInt, QuadInt, QuadInt, i64)> = (0..trials)
        .map(|_| {
            let j = j.clone().unwrap_or_else(|| ball[rng.gen_range(0..ball.len())].clone());
            let r1 = r1.clone().unwrap_or_else(|| ball[rng.gen_range(0..ball.len())].clone());
            let f1 = f1.clone().unwrap_or_else(|| pool[rng.gen_range(0..pool.len())].clone());
            let qhalf = a.qhalf.unwrap_or_else(|| rng.gen_range(0..=1));
            (j, r1, f1, qhalf)
        })
        .collect();
    let rows: Vec<WeylRow> = collect(
        tuples
            .par_iter()
            .map(|(j, r1, f1, qhalf)| {
                let w = weyl_identity_check(&o, j, r1, f1, *qhalf).map_err(|e| e.to_string())?;
                Ok(WeylRow {
                    q: o.q(),
                    alpha: o.alpha().to_string(),
                    j: j.to_string(),
                    r1: r1.to_string(),
                    f1: f1.to_string(),
                    qhalf: *qhalf,
                    lhs: w.lhs.to_string(),
                    rhs: w.rhs.to_string(),
                    equal: w.holds(),
                    punctured_lhs: w.punctured_lhs.to_string(),
                    punctured_rhs: w.punctured_rhs.to_string(),
                    boundary_correction: w.boundary_correction().to_string(),
                })
            })
            .collect(),
    )?;
    let exact = rows.iter().filter(|r| r.equal).count();
    let summary = vec![format!("{exact}/{} exact", rows.len())];
    report(&rows, &a.common, summary, rows.len() - exact)
}

#[derive(Serialize)]
struct DivisorRow {
    q: u32,
    alpha: String,
    l: String,
    #[serde(rename = "D")]
    d: i64,
    tau: u64,
    ratio: f64,
}

pub fn divisors(a: &DivisorArgs) -> Outcome {
    let o = order(&a.common)?;
    let ls = nonzero_up_to(&o, a.d);
    let rows: Vec<DivisorRow> = collect(
        ls.par_iter()
            .map(|l| {
                let d = o.big_d(l).map_err(|e| e.to_string())?;
                let tau = tau_divisors(&o, l).map_err(|e| e.to_string())?;
                Ok(DivisorRow {
                    q: o.q(),
                    alpha: o.alpha().to_string(),
                    l: l.to_string(),
                    d,
                    tau,
                    ratio: tau as f64 / 2f64.powi(d as i32),
                })
            })
            .collect(),
    )?;
    let summary = rows
        .iter()
        .fold(None::<&DivisorRow>, |best, r| match best {
            Some(b) if b.ratio >= r.ratio => Some(b),
            _ => Some(r),
        })
        .map(|b| vec![format!("C = {} at l = {}", b.ratio, b.l)])
        .unwrap_or_default();
    report(&rows, &a.common, summary, 0)
}

#[derive(Serialize)]
struct OrthogonalityRow {
    q: u32,
    alpha: String,
    f: String,
    #[serde(rename = "N")]
    n: i64,
    coeff_kind: String,
    seed: Option<u64>,
    lhs: String,
    rhs: String,
    equal: bool,
}

pub fn orthogonality(a: &OrthogonalityArgs) -> Outcome {
    let o = order(&a.common)?;
    let kinds =
        a.coeffs.iter().map(|c| parse_coeffs(&o, c, a.common.seed)).collect::<Result<Vec<_>, _>>()?;
    let fs = match &a.f {
        Some(f) => vec![o.parse_quadint(f).map_err(bad("f"))?],
        None => nonzero_up_to(&o, a.d),
    };
    let mut tasks = Vec::new();
    for f in &fs {
        for n in a.n.values() {
            for kind in &kinds {
                tasks.push((f, n, kind));
            }
        }
    }
    let rows: Vec<OrthogonalityRow> = collect(
        tasks
            .par_iter()
            .map(|&(f, n, kind)| {
                let family = CoeffFamily::new(&o, kind.clone(), n).map_err(bad("coeffs"))?;
                let check = orthogonality_check(&o, &family, f).map_err(|e| e.to_string())?;
                Ok(OrthogonalityRow {
                    q: o.q(),
                    alpha: o.alpha().to_string(),
                    f: f.to_string(),
                    n,
                    coeff_kind: kind.to_string(),
                    seed: kind.seed(),
                    equal: check.holds(),
                    lhs: check.lhs.to_string(),
                    rhs: check.rhs.to_string(),
                })
            })
            .collect(),
    )?;
    let exact = rows.iter().filter(|r| r.equal).count();
    let summary = vec![format!("{exact}/{} exact", rows.len())];
    report(&rows, &a.common, summary, rows.len() - exact)
}

#[derive(Serialize)]
struct AlphaRow {
    q: u32,
    alpha: String,
    accepted: bool,
    ell: Option<i64>,
    reason: Option<String>,
}

fn reason(e: &Error) -> String {
    match e {
        Error::NotSquareFree => "NotSquareFree".into(),
        Error::NotImaginary => "NotImaginary".into(),
        Error::ZeroElement => "ZeroElement".into(),
        other => other.to_string(),
    }
}

/// A rejected `α` is a result, not an error: the row says why and the exit code is 0.
pub fn validate_alpha(a: &ValidateArgs) -> Outcome {
    let ring = ring(&a.common)?;
    let alpha = ring.parse_poly(&a.common.alpha).map_err(bad("alpha"))?;
    let (accepted, ell, why) = match ffsieve::quadext::validate_alpha(&ring, &alpha) {
        Ok(spec) => (true, Some(spec.ell()), None),
        Err(e) => (false, None, Some(reason(&e))),
    };
    let row = AlphaRow { q: ring.q(), alpha: alpha.to_string(), accepted, ell, reason: why };
    report(&[row], &a.common, Vec::new(), 0)
}
