//! Exponential sums and large-sieve quantities over `𝔸`.
//!
//! The central object is the inner sum
//! `S(f, r) = Σ_{g ∈ 𝐁(0,N) ∩ 𝔸} a_g · e(Tr(g r / (2√α f)))`.
//! When every coefficient is zero or a `p`-th root of unity the sum is a
//! [`CharSum`] and everything downstream (`|S|²`, `T`, orthogonality) stays
//! in `Z[ζ_p]`; general complex coefficients fall back to `f64` with a fixed
//! summation order.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::CharSum;
use crate::polyring::{Poly, RatFun};
use crate::quadext::{QuadInt, QuadOrder, QuadRat};

#[cfg(feature = "parallel")]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}

fn root_of_unity(p: u32, k: u32) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / p as f64)
}

// ---- coefficient families -------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub enum CoeffKind {
    /// `a_{g₀} = 1`, every other coefficient zero.
    Delta(QuadInt),
    Ones,
    /// Independent uniform `p`-th roots of unity drawn from a seeded ChaCha8 stream.
    RandomUnit(u64),
    /// Explicit values in ball order; missing trailing values are zero.
    User(Vec<Complex64>),
}

impl CoeffKind {
    pub fn seed(&self) -> Option<u64> {
        match self {
            CoeffKind::RandomUnit(s) => Some(*s),
            _ => None,
        }
    }
}

impl fmt::Display for CoeffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffKind::Delta(g) => write!(f, "delta:{g}"),
            CoeffKind::Ones => write!(f, "ones"),
            CoeffKind::RandomUnit(_) => write!(f, "random"),
            CoeffKind::User(_) => write!(f, "user"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Values {
    /// `a_g = ζ^k`, or `0` for `None`.
    Roots(Vec<Option<u32>>),
    Complex(Vec<Complex64>),
}

/// Coefficients `a_g` on `𝐁(0, N) ∩ 𝔸`, stored in ball order. Points outside
/// the ball (in particular those with `2 deg w + ℓ > N`) carry no coefficient.
#[derive(Clone, Debug)]
pub struct CoeffFamily {
    kind: CoeffKind,
    n: i64,
    p: u32,
    points: Vec<QuadInt>,
    values: Values,
}

impl CoeffFamily {
    pub fn new(order: &QuadOrder, kind: CoeffKind, n: i64) -> Result<Self> {
        let points: Vec<QuadInt> = order.ball(n).collect();
        let len = points.len();
        let p = order.p();
        let values = match &kind {
            CoeffKind::Delta(g0) => {
                if !order.in_ball(g0, n) {
                    return Err(Error::PreconditionViolated(format!(
                        "delta point {g0} lies outside the ball of radius {n}"
                    )));
                }
                let at = order.ball_index(n, g0) as usize;
                Values::Roots((0..len).map(|i| (i == at).then_some(0)).collect())
            }
            CoeffKind::Ones => Values::Roots(vec![Some(0); len]),
            CoeffKind::RandomUnit(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Values::Roots((0..len).map(|_| Some(rng.gen_range(0..p))).collect())
            }
            CoeffKind::User(v) => {
                if v.len() > len {
                    return Err(Error::PreconditionViolated(format!(
                        "{} coefficients given for a ball of {len} points",
                        v.len()
                    )));
                }
                let mut v = v.clone();
                v.resize(len, Complex64::new(0.0, 0.0));
                Values::Complex(v)
            }
        };
        Ok(Self { kind, n, p, points, values })
    }

    /// An exact family with `a_g = ζ^{k_g}` (or `0`), listed in ball order.
    pub fn from_roots(order: &QuadOrder, n: i64, mut exps: Vec<Option<u32>>) -> Result<Self> {
        let points: Vec<QuadInt> = order.ball(n).collect();
        let p = order.p();
        if exps.len() > points.len() {
            return Err(Error::PreconditionViolated(format!(
                "{} coefficients given for a ball of {} points",
                exps.len(),
                points.len()
            )));
        }
        exps.resize(points.len(), None);
        let exps: Vec<Option<u32>> = exps.into_iter().map(|e| e.map(|k| k % p)).collect();
        let listed = exps.iter().map(|e| e.map_or(Complex64::new(0.0, 0.0), |k| root_of_unity(p, k)));
        Ok(Self { kind: CoeffKind::User(listed.collect()), n, p, points, values: Values::Roots(exps) })
    }

    pub fn kind(&self) -> &CoeffKind {
        &self.kind
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn points(&self) -> &[QuadInt] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether all coefficients are zero or roots of unity, so sums stay exact.
    pub fn is_exact(&self) -> bool {
        matches!(self.values, Values::Roots(_))
    }

    pub fn value(&self, i: usize) -> Complex64 {
        match &self.values {
            Values::Roots(e) => e[i].map_or(Complex64::new(0.0, 0.0), |k| root_of_unity(self.p, k)),
            Values::Complex(v) => v[i],
        }
    }

    /// `Σ |a_g|²`.
    pub fn l2(&self) -> f64 {
        match &self.values {
            Values::Roots(e) => e.iter().filter(|k| k.is_some()).count() as f64,
            Values::Complex(v) => v.iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    /// Every coefficient multiplied by `ζ^k`.
    pub fn rotate(&self, k: u32) -> Self {
        let p = self.p;
        let values = match &self.values {
            Values::Roots(e) => Values::Roots(e.iter().map(|x| x.map(|j| (j + k) % p)).collect()),
            Values::Complex(v) => Values::Complex(v.iter().map(|z| z * root_of_unity(p, k)).collect()),
        };
        let listed = (0..self.len()).map(|i| self.value(i) * root_of_unity(p, k)).collect();
        Self { kind: CoeffKind::User(listed), values, ..self.clone() }
    }

    /// `Σ a_g ζ^{e(g)}` with `e` evaluated only where `a_g ≠ 0`.
    fn weighted_sum(&self, e: impl Fn(&QuadInt) -> u32) -> InnerSum {
        let p = self.p;
        match &self.values {
            Values::Roots(exps) => {
                let mut acc = CharSum::empty(p);
                for (g, k) in self.points.iter().zip(exps) {
                    if let Some(k) = k {
                        acc.push((k + e(g)) % p);
                    }
                }
                InnerSum::Exact(acc)
            }
            Values::Complex(v) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (g, a) in self.points.iter().zip(v) {
                    if *a != Complex64::new(0.0, 0.0) {
                        acc += a * root_of_unity(p, e(g));
                    }
                }
                InnerSum::Float(acc)
            }
        }
    }
}

/// Value of an inner sum.
#[derive(Clone, Debug, PartialEq)]
pub enum InnerSum {
    Exact(CharSum),
    Float(Complex64),
}

impl InnerSum {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            InnerSum::Exact(s) => s.to_complex(),
            InnerSum::Float(z) => *z,
        }
    }

    /// `|S|²`, exact when `S` is.
    pub fn abs2(&self) -> SumValue {
        match self {
            InnerSum::Exact(s) => SumValue::Exact(s.abs2_exact().to_cyclo()),
            InnerSum::Float(z) => SumValue::Float(z.norm_sqr()),
        }
    }
}

/// A real total, exact in `Z[ζ_p]` when every contribution was.
#[derive(Clone, Debug, PartialEq)]
pub enum SumValue {
    Exact(Cyclo),
    Float(f64),
}

impl SumValue {
    fn zero(p: u32) -> Self {
        SumValue::Exact(Cyclo::zero(p))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            SumValue::Exact(c) => c.to_complex().re,
            SumValue::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Cyclo> {
        match self {
            SumValue::Exact(c) => Some(c),
            SumValue::Float(_) => None,
        }
    }

    fn add(self, other: &SumValue) -> SumValue {
        match (self, other) {
            (SumValue::Exact(a), SumValue::Exact(b)) => SumValue::Exact(a + b.clone()),
            (a, b) => SumValue::Float(a.to_f64() + b.to_f64()),
        }
    }
}

/// `S(f, r) = Σ_g a_g · e(Tr(g r / (2√α f)))`.
pub fn inner_sum(order: &QuadOrder, coeffs: &CoeffFamily, f: &QuadInt, r: &QuadInt) -> Result<InnerSum> {
    let sigma = order.sigma_functional(r, f, coeffs.n)?;
    Ok(coeffs.weighted_sum(|g| sigma.exponent(order, g)))
}

// ---- moduli ---------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuliKind {
    All,
    Squares,
}

impl fmt::Display for ModuliKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModuliKind::All => "all",
            ModuliKind::Squares => "squares",
        })
    }
}

impl FromStr for ModuliKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(ModuliKind::All),
            "squares" => Ok(ModuliKind::Squares),
            _ => Err(Error::Parse(format!("unknown moduli kind {s:?} (expected all or squares)"))),
        }
    }
}

/// `𝒮(Q)`: the moduli of a given kind with `𝐍(f) = q^Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModuliSet {
    pub kind: ModuliKind,
    pub big_q: i64,
}

impl ModuliSet {
    pub fn new(kind: ModuliKind, big_q: i64) -> Self {
        Self { kind, big_q }
    }

    /// Nonzero `f` with `𝐃(f) = Q`, or the distinct squares `f²` with `𝐃(f²) = Q`.
    pub fn members(&self, order: &QuadOrder) -> Vec<QuadInt> {
        match self.kind {
            ModuliKind::All => order.elements_with_d(self.big_q),
            ModuliKind::Squares => {
                if self.big_q < 0 || self.big_q % 2 != 0 {
                    return Vec::new();
                }
                let mut seen = HashSet::new();
                order
                    .elements_with_d(self.big_q / 2)
                    .iter()
                    .map(|f| order.mul(f, f))
                    .filter(|s| seen.insert(s.clone()))
                    .collect()
            }
        }
    }

    /// `𝒮(≤Q)`.
    pub fn members_up_to(&self, order: &QuadOrder) -> Vec<QuadInt> {
        (0..=self.big_q).flat_map(|d| ModuliSet::new(self.kind, d).members(order)).collect()
    }
}

/// Residues run modulo `modulus` and must be coprime to `coprime_to`.
struct Plan {
    modulus: QuadInt,
    coprime_to: QuadInt,
}

impl Plan {
    fn plain(f: QuadInt) -> Self {
        Self { coprime_to: f.clone(), modulus: f }
    }

    fn residues(&self, order: &QuadOrder) -> Result<Vec<QuadInt>> {
        let rs = order.residue_system(&self.modulus)?;
        if self.modulus == self.coprime_to {
            return Ok(rs.units());
        }
        let cs = order.residue_system(&self.coprime_to)?;
        Ok(rs.reps().filter(|r| cs.is_unit(r)).collect())
    }
}

fn sum_over_plans(order: &QuadOrder, coeffs: &CoeffFamily, plans: &[Plan]) -> Result<SumValue> {
    let partials = par_map(plans, |plan| -> Result<SumValue> {
        let mut acc = SumValue::zero(order.p());
        for r in plan.residues(order)? {
            acc = acc.add(&inner_sum(order, coeffs, &plan.modulus, &r)?.abs2());
        }
        Ok(acc)
    });
    let mut total = SumValue::zero(order.p());
    for part in partials {
        total = total.add(&part?);
    }
    Ok(total)
}

/// `T = Σ_{f ∈ 𝒮(Q)} Σ_{r mod f, (r,f)=1} |S(f, r)|²`.
pub fn big_t(order: &QuadOrder, coeffs: &CoeffFamily, moduli: &ModuliSet) -> Result<SumValue> {
    let plans: Vec<Plan> = moduli.members(order).into_iter().map(Plan::plain).collect();
    sum_over_plans(order, coeffs, &plans)
}

/// Left side of the square-moduli sieve:
/// `Σ_{𝐃(f)=Q} Σ_{r mod f², (r,f)=1} |S(f², r)|²`. Each square is reached
/// from every `f` that squares to it, so this is twice `T` over `𝒮(2Q)`.
pub fn squares_lhs(order: &QuadOrder, coeffs: &CoeffFamily, big_q: i64) -> Result<SumValue> {
    let plans: Vec<Plan> = order
        .elements_with_d(big_q)
        .into_iter()
        .map(|f| Plan { modulus: order.mul(&f, &f), coprime_to: f })
        .collect();
    sum_over_plans(order, coeffs, &plans)
}

/// Both sides of `Σ_{all r mod f} |S(f, r)|² = q^{𝐃(f)} Σ_{g ≡ g′ (f)} a_g conj(a_{g′})`.
#[derive(Clone, Debug, PartialEq)]
pub struct Orthogonality {
    pub lhs: Cyclo,
    pub rhs: Cyclo,
}

impl Orthogonality {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn orthogonality_check(order: &QuadOrder, coeffs: &CoeffFamily, f: &QuadInt) -> Result<Orthogonality> {
    let Values::Roots(exps) = &coeffs.values else {
        return Err(Error::PreconditionViolated("exact orthogonality needs root-of-unity coefficients".into()));
    };
    let p = order.p();
    let rs = order.residue_system(f)?;
    let mut lhs = Cyclo::zero(p);
    for r in rs.reps() {
        match inner_sum(order, coeffs, f, &r)?.abs2() {
            SumValue::Exact(c) => lhs += &c,
            SumValue::Float(_) => unreachable!("root-of-unity coefficients give exact sums"),
        }
    }
    let mut classes: HashMap<u64, CharSum> = HashMap::new();
    for (g, k) in coeffs.points.iter().zip(exps) {
        if let Some(k) = k {
            classes.entry(rs.index_of(g)).or_insert_with(|| CharSum::empty(p)).push(*k);
        }
    }
    let mut diag = Cyclo::zero(p);
    for s in classes.values() {
        diag += &s.abs2_exact().to_cyclo();
    }
    Ok(Orthogonality { lhs, rhs: diag.scale(rs.size() as i64) })
}

// ---- the two inequalities -------------------------------------------------

/// The bracketed majorant: `q^{2Q} + q^N` for all moduli, and
/// `q^{3Q} + 2^{(N−Q)/2}(q^{Q/2+N} + q^{2Q+N/2})` for squares.
pub fn theorem_bracket(kind: ModuliKind, q: u32, big_q: i64, n: i64) -> f64 {
    let qf = q as f64;
    match kind {
        ModuliKind::All => qf.powi(2 * big_q as i32) + qf.powi(n as i32),
        ModuliKind::Squares => {
            let (bq, nf) = (big_q as f64, n as f64);
            qf.powi(3 * big_q as i32)
                + 2f64.powf((nf - bq) / 2.0) * (qf.powf(bq / 2.0 + nf) + qf.powf(2.0 * bq + nf / 2.0))
        }
    }
}

pub fn theorem_rhs(kind: ModuliKind, q: u32, big_q: i64, n: i64, coeff_l2: f64) -> f64 {
    if coeff_l2 == 0.0 {
        return 0.0;
    }
    theorem_bracket(kind, q, big_q, n) * coeff_l2
}

/// One measured instance of either inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveReport {
    pub q: u32,
    pub alpha: String,
    pub moduli_kind: ModuliKind,
    #[serde(rename = "Q")]
    pub big_q: i64,
    #[serde(rename = "N")]
    pub n: i64,
    pub coeff_kind: String,
    pub seed: Option<u64>,
    pub lhs: f64,
    pub rhs_bracket: f64,
    pub coeff_l2: f64,
    pub ratio: f64,
    /// No modulus has the requested size, so the left side is an empty sum.
    pub empty_moduli: bool,
}

/// Measures `lhs / (bracket · Σ|a_g|²)`. The `squares` kind uses moduli `f²`
/// with `𝐃(f) = Q` and residues `r mod f²` coprime to `f`.
pub fn sieve_report(order: &QuadOrder, coeffs: &CoeffFamily, kind: ModuliKind, big_q: i64) -> Result<SieveReport> {
    let (lhs, empty) = match kind {
        ModuliKind::All => {
            let set = ModuliSet::new(kind, big_q);
            (big_t(order, coeffs, &set)?, set.members(order).is_empty())
        }
        ModuliKind::Squares => (squares_lhs(order, coeffs, big_q)?, order.elements_with_d(big_q).is_empty()),
    };
    let lhs = lhs.to_f64();
    let coeff_l2 = coeffs.l2();
    let rhs_bracket = theorem_bracket(kind, order.q(), big_q, coeffs.n());
    let ratio = if coeff_l2 > 0.0 { lhs / (rhs_bracket * coeff_l2) } else { 0.0 };
    Ok(SieveReport {
        q: order.q(),
        alpha: order.alpha().to_string(),
        moduli_kind: kind,
        big_q,
        n: coeffs.n(),
        coeff_kind: coeffs.kind().to_string(),
        seed: coeffs.kind().seed(),
        lhs,
        rhs_bracket,
        coeff_l2,
        ratio,
        empty_moduli: empty,
    })
}

// ---- spacing ----------------------------------------------------------------

/// `(M, M₁, M₂)` with `M = 2Q + ℓ − (N + 4)`, `M₁ = 2⌊M/2⌋ + 2 − Q`,
/// `M₂ = Q − (⌊M/2⌋ + 2)`.
pub fn m_thresholds(big_q: i64, n: i64, ell: i64) -> (i64, i64, i64) {
    let m = 2 * big_q + ell - (n + 4);
    let half = m.div_euclid(2);
    (m, 2 * half + 2 - big_q, big_q - (half + 2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kappa {
    pub value: u64,
    /// A maximising `(r₁, f₁)`, absent when `𝒮(Q)` is empty.
    pub witness: Option<(QuadInt, QuadInt)>,
    pub m: i64,
}

/// `𝒦`: the largest number of pairs `(r₂, f₂)`, `f₂ ∈ 𝒮(Q)`, `(r₂, f₂) = 1`,
/// with `𝐃(r₁f₂ − r₂f₁) ≤ M`, over `f₁ ∈ 𝒮(Q)` and units `r₁ mod f₁`.
///
/// `r₂` runs over all of `𝔸`: each admissible pair corresponds to a
/// difference `h = r₁f₂ − r₂f₁` with `𝐃(h) ≤ M` and `f₁ | r₁f₂ − h`.
pub fn kappa(order: &QuadOrder, moduli: &ModuliSet, n: i64) -> Result<Kappa> {
    let (m, _, _) = m_thresholds(moduli.big_q, n, order.ell());
    let members = moduli.members(order);
    let diffs: Vec<QuadInt> = if m < 0 { vec![QuadInt::zero()] } else { order.ball(m).collect() };
    let systems = members.iter().map(|f| order.residue_system(f)).collect::<Result<Vec<_>>>()?;
    let best = par_map(&members, |f1| -> Result<(u64, Option<QuadInt>)> {
        let mut best = (0, None);
        for r1 in order.residue_system(f1)?.units() {
            let mut count = 0;
            for (f2, sys2) in members.iter().zip(&systems) {
                let target = order.mul(&r1, f2);
                for h in &diffs {
                    if let Some(r2) = order.div_exact(&order.sub(&target, h), f1) {
                        if sys2.is_unit(&r2) {
                            count += 1;
                        }
                    }
                }
            }
            if count > best.0 || best.1.is_none() {
                best = (count, Some(r1));
            }
        }
        Ok(best)
    });
    let mut out = Kappa { value: 0, witness: None, m };
    for (f1, res) in members.iter().zip(best) {
        let (count, r1) = res?;
        if let Some(r1) = r1 {
            if out.witness.is_none() || count > out.value {
                out = Kappa { value: count, witness: Some((r1, f1.clone())), m };
            }
        }
    }
    Ok(out)
}

// ---- linear sums --------------------------------------------------------------

fn check_x(order: &QuadOrder, x: i64) -> Result<()> {
    if x < order.ell() {
        return Err(Error::XBelowEll { x, ell: order.ell() });
    }
    Ok(())
}

/// `Σ(X, h)` by enumerating `x ∈ 𝔸` with `𝐃(x) ≤ X` and evaluating
/// `e(Tr(h x / (2√α)))` in `K`.
pub fn sigma_linear_direct(order: &QuadOrder, x: i64, h: &QuadRat) -> Result<CharSum> {
    check_x(order, x)?;
    let ring = order.ring();
    let two_sqrt_alpha = order.to_rat(&QuadInt::new(Poly::zero(), ring.from_int(2)));
    let mut acc = CharSum::empty(order.p());
    for g in order.ball(x) {
        let xi = order.rat_div(&order.rat_mul(h, &order.to_rat(&g)), &two_sqrt_alpha)?;
        acc.push(ring.char_e_exponent(&order.rat_trace(&xi)));
    }
    Ok(acc)
}

/// `Σ(X, h)` as `(Σ_{deg u ≤ ⌊X/2⌋} e(ub)) · (Σ_{deg v ≤ ⌊(X−ℓ)/2⌋} e(va))`
/// for `h = a + b√α`.
pub fn sigma_linear_factorized(order: &QuadOrder, x: i64, h: &QuadRat) -> Result<CharSum> {
    check_x(order, x)?;
    let ring = order.ring();
    let one_dim = |deg: i64, c: &RatFun| {
        let mut s = CharSum::empty(order.p());
        for u in ring.enumerate_polys(deg) {
            s.push(ring.char_e_exponent(&ring.rat_mul(&ring.rat_from_poly(u), c)));
        }
        s
    };
    let (du, dv) = order.ball_degrees(x);
    Ok(one_dim(du, &h.im).product(&one_dim(dv, &h.re)))
}

/// `Σ(X, h)` evaluated both ways.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSum {
    pub direct: CharSum,
    pub factorized: CharSum,
}

impl LinearSum {
    pub fn agree(&self) -> bool {
        self.direct.to_cyclo() == self.factorized.to_cyclo()
    }
}

pub fn sigma_linear(order: &QuadOrder, x: i64, h: &QuadRat) -> Result<LinearSum> {
    Ok(LinearSum { direct: sigma_linear_direct(order, x, h)?, factorized: sigma_linear_factorized(order, x, h)? })
}

/// Exponent `ℓ − X − 1`: `Σ(X, h)` can be nonzero only if `N_T(h) ≤ q^{ℓ−X−1}`.
pub fn linear_sum_threshold(order: &QuadOrder, x: i64) -> i64 {
    order.ell() - x - 1
}

#[derive(Clone, Debug, PartialEq)]
pub struct USum {
    /// `U(X, Y; f, r)`.
    pub value: f64,
    pub terms: u64,
    pub nonzero_terms: u64,
    /// `q^Q + q^Y`.
    pub majorant: f64,
}

/// `U(X, Y; f, r) = Σ_{γ ≠ 0, 𝐍(γ) ≤ q^Y} |Σ(X, γr/f)|`.
pub fn u_sum(order: &QuadOrder, x: i64, y: i64, f: &QuadInt, r: &QuadInt) -> Result<USum> {
    check_x(order, x)?;
    if y < 0 {
        return Err(Error::PreconditionViolated(format!("Y = {y} is negative")));
    }
    if order.is_unit_mod(r, f)?.is_none() {
        return Err(Error::PreconditionViolated(format!("({r}, {f}) ≠ 1")));
    }
    let big_q = order.big_d(f)?;
    let mut out = USum { value: 0.0, terms: 0, nonzero_terms: 0, majorant: 0.0 };
    // the ball lists 0 first
    for gamma in order.ball(y).skip(1) {
        let h = order.fraction(&order.mul(&gamma, r), f)?;
        let s = sigma_linear_factorized(order, x, &h)?;
        out.terms += 1;
        if !s.is_zero() {
            out.nonzero_terms += 1;
            out.value += s.abs();
        }
    }
    let q = order.q() as f64;
    out.majorant = q.powi(big_q as i32) + q.powi(y as i32);
    Ok(out)
}

// ---- divisors -----------------------------------------------------------------

fn canonical_among(order: &QuadOrder, units: &[QuadInt], d: &QuadInt) -> QuadInt {
    let ring = order.ring();
    let one = ring.field().one();
    let key = |x: &&QuadInt| (ring.poly_index(&x.re), ring.poly_index(&x.im));
    let assoc: Vec<QuadInt> = units.iter().map(|u| order.mul(u, d)).collect();
    let normalized = assoc.iter().filter(|x| {
        let first = if x.re.is_zero() { &x.im } else { &x.re };
        !first.is_zero() && first.lead() == one
    });
    normalized.min_by_key(key).or_else(|| assoc.iter().min_by_key(key)).cloned().unwrap_or_default()
}

/// The representative of `d`'s associate class: among unit multiples whose
/// first nonzero coordinate is monic, the least in enumeration order.
pub fn canonical_associate(order: &QuadOrder, d: &QuadInt) -> QuadInt {
    canonical_among(order, &order.units(), d)
}

/// Number of divisors of `l` in `𝔸`, up to units.
pub fn tau_divisors(order: &QuadOrder, l: &QuadInt) -> Result<u64> {
    if l.is_zero() {
        return Err(Error::ZeroElement);
    }
    let dl = order.big_d(l)?;
    let units = order.units();
    let count = order
        .ball(dl)
        .filter(|d| !d.is_zero() && order.divides(d, l) && canonical_among(order, &units, d) == *d)
        .count();
    Ok(count as u64)
}

/// `max τ(l) / 2^{𝐃(l)}` over nonzero `l` with `𝐃(l) ≤ max_d`, with a maximiser.
pub fn tau_constant(order: &QuadOrder, max_d: i64) -> Result<(f64, QuadInt)> {
    let mut best = (0.0, QuadInt::zero());
    for l in order.ball(max_d).skip(1) {
        let c = tau_divisors(order, &l)? as f64 / 2f64.powi(order.big_d(&l)? as i32);
        if c > best.0 {
            best = (c, l);
        }
    }
    Ok(best)
}

// ---- Weyl shift -----------------------------------------------------------------

/// Both sides of `|Σ_{f∈B} θ(f²)|² = Σ_{h∈B} Σ_{f∈B} θ(h(h+2f))` with
/// `θ(x) = e(Tr(j r₁ x / (2 f₁ √α)))` and `B = {f : 𝐃(f) ≤ Qhalf} ∪ {0}`,
/// plus the same two expressions with `0` removed from `B`, where the
/// diagonal is split off as `|B∖{0}|` and the shift is no longer a bijection.
#[derive(Clone, Debug, PartialEq)]
pub struct Weyl {
    pub lhs: Cyclo,
    pub rhs: Cyclo,
    pub punctured_lhs: Cyclo,
    pub punctured_rhs: Cyclo,
}

impl Weyl {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    /// `punctured_rhs − punctured_lhs`.
    pub fn boundary_correction(&self) -> Cyclo {
        self.punctured_rhs.clone() - self.punctured_lhs.clone()
    }
}

pub fn weyl_identity_check(
    order: &QuadOrder,
    j: &QuadInt,
    r1: &QuadInt,
    f1: &QuadInt,
    qhalf: i64,
) -> Result<Weyl> {
    let p = order.p();
    let theta = order.sigma_functional(&order.mul(j, r1), f1, 2 * qhalf)?;
    let e = |x: &QuadInt| theta.exponent(order, x);
    let ball: Vec<QuadInt> = order.ball(qhalf).collect();
    let two = order.ring().from_int(2);

    let mut s = CharSum::empty(p);
    let mut s_star = CharSum::empty(p);
    for f in &ball {
        let k = e(&order.mul(f, f));
        s.push(k);
        if !f.is_zero() {
            s_star.push(k);
        }
    }
    let mut rhs = CharSum::empty(p);
    let mut rhs_star = CharSum::empty(p);
    rhs_star.push_n(0, ball.len() as u64 - 1);
    for h in &ball {
        for f in &ball {
            let k = e(&order.mul(h, &order.add(h, &order.mul_poly(f, &two))));
            rhs.push(k);
            if !h.is_zero() && !f.is_zero() {
                rhs_star.push(k);
            }
        }
    }
    Ok(Weyl {
        lhs: s.abs2_exact().to_cyclo(),
        rhs: rhs.to_cyclo(),
        punctured_lhs: s_star.abs2_exact().to_cyclo(),
        punctured_rhs: rhs_star.to_cyclo(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;
    use crate::polyring::PolyRing;

    fn order(p: u32, alpha: &str) -> QuadOrder {
        let ring = PolyRing::new(FiniteField::prime(p).unwrap());
        let a = ring.parse_poly(alpha).unwrap();
        QuadOrder::new(ring, &a).unwrap()
    }

    fn qi(o: &QuadOrder, s: &str) -> QuadInt {
        o.parse_quadint(s).unwrap()
    }

    /// Inner sum through the K-division path, one term at a time.
    fn inner_oracle(o: &QuadOrder, c: &CoeffFamily, f: &QuadInt, r: &QuadInt) -> Complex64 {
        (0..c.len()).map(|i| c.value(i) * root_of_unity(o.p(), o.sigma_exponent_direct(&c.points()[i], r, f).unwrap())).sum()
    }

    #[test]
    fn inner_sum_examples() {
        let o = order(3, "0,1");
        let f = qi(&o, "0;1");
        let delta = CoeffFamily::new(&o, CoeffKind::Delta(QuadInt::zero()), 2).unwrap();
        let ones = CoeffFamily::new(&o, CoeffKind::Ones, 1).unwrap();
        for r in o.residue_system(&f).unwrap().reps() {
            assert_eq!(inner_sum(&o, &delta, &f, &r).unwrap().to_complex(), Complex64::new(1.0, 0.0));
            let s = inner_sum(&o, &ones, &f, &r).unwrap();
            assert!((s.to_complex() - inner_oracle(&o, &ones, &f, &r)).norm() < 1e-9);
        }
        let at_zero = inner_sum(&o, &ones, &f, &QuadInt::zero()).unwrap();
        assert_eq!(at_zero, InnerSum::Exact(CharSum::from_counts(vec![9, 0, 0])));
        assert_eq!(o.ball_size(1), 9);
    }

    #[test]
    fn big_t_examples() {
        let o = order(3, "0,1");
        for big_q in 1..=2 {
            let set = ModuliSet::new(ModuliKind::All, big_q);
            let delta = CoeffFamily::new(&o, CoeffKind::Delta(qi(&o, "1;0")), 2).unwrap();
            let units: u64 = set.members(&o).iter().map(|f| o.unit_count(f).unwrap()).sum();
            let t = big_t(&o, &delta, &set).unwrap();
            assert_eq!(t.as_exact().unwrap().as_integer(), Some(units as i64));
        }
        let ones = CoeffFamily::new(&o, CoeffKind::Ones, 1).unwrap();
        let set = ModuliSet::new(ModuliKind::All, 1);
        let mut oracle = 0.0;
        for f in set.members(&o) {
            for r in o.residue_system(&f).unwrap().units() {
                oracle += inner_oracle(&o, &ones, &f, &r).norm_sqr();
            }
        }
        assert!((big_t(&o, &ones, &set).unwrap().to_f64() - oracle).abs() < 1e-9);
        let odd = ModuliSet::new(ModuliKind::Squares, 1);
        assert!(odd.members(&o).is_empty());
        assert_eq!(big_t(&o, &ones, &odd).unwrap(), SumValue::Exact(Cyclo::zero(3)));
    }

    #[test]
    fn squares_lhs_is_twice_literal_t() {
        let o = order(3, "0,1");
        for n in 1..=3 {
            let c = CoeffFamily::new(&o, CoeffKind::RandomUnit(5), n).unwrap();
            let lhs = squares_lhs(&o, &c, 1).unwrap();
            let t = big_t(&o, &c, &ModuliSet::new(ModuliKind::Squares, 2)).unwrap();
            assert_eq!(lhs.as_exact().unwrap(), &t.as_exact().unwrap().scale(2));
        }
    }

    #[test]
    fn orthogonality_small() {
        let o = order(3, "0,1");
        for fs in ["0;1", "1;1", "0,1;0", "2"] {
            let f = qi(&o, fs);
            for kind in [CoeffKind::Ones, CoeffKind::RandomUnit(1)] {
                let c = CoeffFamily::new(&o, kind, 2).unwrap();
                assert!(orthogonality_check(&o, &c, &f).unwrap().holds(), "f = {fs}");
            }
        }
    }

    #[test]
    fn theorem_rhs_examples() {
        assert_eq!(theorem_rhs(ModuliKind::All, 3, 1, 1, 1.0), 12.0);
        // Q = N = 2: q^6 + 2^0 (q^3 + q^5)
        assert!((theorem_bracket(ModuliKind::Squares, 3, 2, 2) - 999.0).abs() < 1e-9);
        assert_eq!(theorem_rhs(ModuliKind::All, 3, 2, 3, 0.0), 0.0);
    }

    #[test]
    fn m_threshold_examples() {
        assert_eq!(m_thresholds(3, 1, 1), (2, 1, 0));
        assert_eq!(m_thresholds(1, 2, 1).0, -3);
        for m_even in [-4i64, 0, 2, 6] {
            // pick Q, N with M = m_even at ℓ = 1
            let (big_q, n) = (4, 2 * 4 + 1 - 4 - m_even);
            let (m, m1, _) = m_thresholds(big_q, n, 1);
            assert_eq!(m, m_even);
            assert_eq!(m1, m + 2 - big_q);
        }
    }

    #[test]
    fn kappa_with_negative_m() {
        let o = order(3, "0,1");
        let k = kappa(&o, &ModuliSet::new(ModuliKind::All, 1), 2).unwrap();
        assert_eq!(k.m, -3);
        // only unit multiples c·f₁ with r₂ = c·r₁ qualify
        assert_eq!(k.value, 2);
        let k = kappa(&o, &ModuliSet::new(ModuliKind::Squares, 2), 5).unwrap();
        assert_eq!(k.value, 1);
    }

    #[test]
    fn kappa_single_residue() {
        // 𝒮(0) = units, each with the single residue 0
        let o = order(3, "0,1");
        let k = kappa(&o, &ModuliSet::new(ModuliKind::Squares, 0), 10).unwrap();
        assert_eq!(k.value, 1);
    }

    #[test]
    fn sigma_linear_examples() {
        let o = order(3, "0,1");
        let zero = o.parse_quadrat("0;0").unwrap();
        let s = sigma_linear(&o, 1, &zero).unwrap();
        assert!(s.agree());
        assert_eq!(s.direct.to_cyclo().as_integer(), Some(9));
        let h = o.parse_quadrat("0;1/0,1").unwrap();
        assert_eq!(o.torus_norm_t(&h), Some(-1));
        for x in [1, 2] {
            let s = sigma_linear(&o, x, &h).unwrap();
            assert!(s.agree());
            assert!(s.direct.is_zero());
        }
        assert_eq!(sigma_linear(&o, 0, &h), Err(Error::XBelowEll { x: 0, ell: 1 }));
    }

    #[test]
    fn u_sum_example() {
        let o = order(3, "0,1");
        let f = qi(&o, "0;1");
        let u = u_sum(&o, 1, 0, &f, &QuadInt::one()).unwrap();
        // γ runs over the two nonzero constants
        let mut oracle = 0.0;
        for gamma in ["1", "2"] {
            let h = o.fraction(&qi(&o, gamma), &f).unwrap();
            oracle += sigma_linear_direct(&o, 1, &h).unwrap().abs();
        }
        assert_eq!(u.terms, 2);
        assert!((u.value - oracle).abs() < 1e-9);
        assert_eq!(u.majorant, 4.0);
        assert!(u_sum(&o, 1, 0, &f, &QuadInt::zero()).is_err());
    }

    #[test]
    fn tau_examples() {
        let o = order(3, "0,1");
        assert_eq!(tau_divisors(&o, &qi(&o, "2")).unwrap(), 1);
        assert_eq!(tau_divisors(&o, &qi(&o, "0;1")).unwrap(), 2);
        // t = −(√t)² has divisors 1, √t, t
        assert_eq!(tau_divisors(&o, &qi(&o, "0,1")).unwrap(), 3);
        assert_eq!(tau_divisors(&o, &QuadInt::zero()), Err(Error::ZeroElement));
        assert_eq!(canonical_associate(&o, &qi(&o, "2;1")), qi(&o, "1;2"));
    }

    #[test]
    fn weyl_examples() {
        let o = order(3, "0,1");
        let f1 = qi(&o, "1;1");
        let w = weyl_identity_check(&o, &QuadInt::zero(), &QuadInt::one(), &f1, 1).unwrap();
        assert!(w.holds());
        assert_eq!(w.lhs.as_integer(), Some(81));
        assert_eq!(w.punctured_lhs.as_integer(), Some(64));
        let w = weyl_identity_check(&o, &QuadInt::one(), &QuadInt::one(), &f1, 1).unwrap();
        assert!(w.holds());
    }

    #[test]
    fn report_examples() {
        let o = order(3, "0,1");
        let delta = CoeffFamily::new(&o, CoeffKind::Delta(QuadInt::zero()), 2).unwrap();
        let r = sieve_report(&o, &delta, ModuliKind::All, 1).unwrap();
        let units: u64 = o.elements_with_d(1).iter().map(|f| o.unit_count(f).unwrap()).sum();
        assert_eq!(r.lhs, units as f64);
        assert!(r.ratio <= 1.0);
        let zero = CoeffFamily::new(&o, CoeffKind::User(vec![]), 2).unwrap();
        let r = sieve_report(&o, &zero, ModuliKind::Squares, 1).unwrap();
        assert_eq!((r.lhs, r.ratio), (0.0, 0.0));
    }

    #[test]
    fn rotation_keeps_t() {
        let o = order(3, "0,1");
        let c = CoeffFamily::new(&o, CoeffKind::RandomUnit(3), 2).unwrap();
        let set = ModuliSet::new(ModuliKind::All, 1);
        assert_eq!(big_t(&o, &c, &set).unwrap(), big_t(&o, &c.rotate(2), &set).unwrap());
    }
}
