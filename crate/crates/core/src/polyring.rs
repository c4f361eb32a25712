//! The ring `A = F_q[t]`, rational functions `k = F_q(t)`, and the additive
//! character `e` of the completion at infinity.
//!
//! Absolute values are reported as exponents: `|a|∞ = q^v` with `v` an
//! `Option<i64>`, where `None` stands for `-∞` (the value of `0`). The
//! derived ordering of `Option` puts `None` below every `Some`, which is the
//! ordering wanted here.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{CharSum, FiniteField, Fq};

/// Exponent of an absolute value; `None` is `-∞`.
pub type Valuation = Option<i64>;

/// A polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    coeffs: Vec<Fq>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Fq) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Fq(1))
    }

    /// `c · t^k`.
    pub fn monomial(c: Fq, k: usize) -> Self {
        let mut coeffs = vec![Fq(0); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn t() -> Self {
        Self::monomial(Fq(1), 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as a valuation exponent (`None` for the zero polynomial).
    pub fn valuation(&self) -> Valuation {
        self.deg().map(|d| d as i64)
    }

    pub fn lead(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or_default()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    /// Comma-separated coefficient encodings, ascending; `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.0.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A rational function in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.deg() == Some(0)
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `F_q[t]` as an arithmetic context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: FiniteField,
}

impl PolyRing {
    pub fn new(field: FiniteField) -> Self {
        Self { field }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn from_int(&self, n: i64) -> Poly {
        Poly::constant(self.field.from_int(n))
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let f = &self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| f.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly::from_coeffs(a.coeffs.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let f = &self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| f.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn scale(&self, a: &Poly, c: Fq) -> Poly {
        Poly::from_coeffs(a.coeffs.iter().map(|&x| self.field.mul(x, c)).collect())
    }

    /// `a · t^k`.
    pub fn shift(&self, a: &Poly, k: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Fq(0); k];
        coeffs.extend_from_slice(&a.coeffs);
        Poly { coeffs }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let f = &self.field;
        let mut out = vec![Fq(0); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        Poly::from_coeffs(out)
    }

    /// Euclidean division: `a = Q·b + R` with `deg R < deg b`.
    pub fn divmod(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.deg().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        let inv_lead = f.inv(b.lead())?;
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), a.clone()));
        }
        let mut quot = vec![Fq(0); rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + db], inv_lead);
            quot[k] = c;
            if !c.is_zero() {
                for (i, &bc) in b.coeffs.iter().enumerate() {
                    rem[k + i] = f.sub(rem[k + i], f.mul(c, bc));
                }
            }
        }
        rem.truncate(db);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(a, b)?.1)
    }

    /// Exact quotient, or `None` when `b` does not divide `a`.
    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Result<Option<Poly>> {
        let (q, r) = self.divmod(a, b)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let inv = self.field.inv(a.lead()).expect("nonzero lead");
        self.scale(a, inv)
    }

    /// Monic gcd (`0` when both inputs are zero).
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Returns `(g, s, t)` with `s·a + t·b = g`, `g` the monic gcd.
    pub fn xgcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = self.divmod(&r0, &r1).expect("nonzero divisor");
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = self.field.inv(r0.lead()).expect("nonzero lead");
        (self.scale(&r0, inv), self.scale(&s0, inv), self.scale(&t0, inv))
    }

    /// Inverse of `a` modulo `m`, reduced below `deg m`.
    pub fn modinv(&self, a: &Poly, m: &Poly) -> Result<Poly> {
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.xgcd(a, m);
        if g.deg() != Some(0) {
            return Err(Error::NotInvertible);
        }
        self.rem(&s, m)
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
                .collect(),
        )
    }

    // ---- enumeration -------------------------------------------------------

    /// Number of polynomials of degree at most `max_deg`.
    pub fn count_polys(&self, max_deg: i64) -> u64 {
        if max_deg < 0 {
            1
        } else {
            (self.q() as u64).pow(max_deg as u32 + 1)
        }
    }

    /// The polynomial whose base-`q` digits (constant term lowest) are `index`.
    pub fn poly_from_index(&self, mut index: u64) -> Poly {
        let q = self.q() as u64;
        let mut coeffs = Vec::new();
        while index > 0 {
            coeffs.push(Fq((index % q) as u32));
            index /= q;
        }
        Poly::from_coeffs(coeffs)
    }

    /// Inverse of [`poly_from_index`](Self::poly_from_index).
    pub fn poly_index(&self, a: &Poly) -> u64 {
        let q = self.q() as u64;
        a.coeffs.iter().rev().fold(0, |acc, c| acc * q + c.0 as u64)
    }

    /// Every polynomial of degree `<= max_deg`, each once, `0` first and
    /// lower degrees before higher ones. `max_deg < 0` yields only `0`.
    pub fn enumerate_polys(&self, max_deg: i64) -> impl Iterator<Item = Poly> + '_ {
        (0..self.count_polys(max_deg)).map(move |i| self.poly_from_index(i))
    }

    /// The share of [`enumerate_polys`](Self::enumerate_polys) owned by
    /// `worker` out of `workers`: indices congruent to `worker` modulo `workers`.
    pub fn enumerate_polys_strided(
        &self,
        max_deg: i64,
        worker: u64,
        workers: u64,
    ) -> impl Iterator<Item = Poly> + '_ {
        (worker..self.count_polys(max_deg))
            .step_by(workers.max(1) as usize)
            .map(move |i| self.poly_from_index(i))
    }

    /// Polynomials of degree exactly `deg`.
    pub fn enumerate_exact_degree(&self, deg: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = self.q() as u64;
        let lo = q.pow(deg as u32);
        let lo = if deg == 0 { 1 } else { lo };
        (lo..q.pow(deg as u32 + 1)).map(move |i| self.poly_from_index(i))
    }

    // ---- rational functions ------------------------------------------------

    pub fn ratfun(&self, num: Poly, den: Poly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFun { num, den: Poly::one() });
        }
        let g = self.gcd(&num, &den);
        let (num, den) = if g.deg() == Some(0) {
            (num, den)
        } else {
            (self.divmod(&num, &g)?.0, self.divmod(&den, &g)?.0)
        };
        let inv = self.field.inv(den.lead())?;
        Ok(RatFun { num: self.scale(&num, inv), den: self.scale(&den, inv) })
    }

    pub fn rat_from_poly(&self, a: Poly) -> RatFun {
        RatFun { num: a, den: Poly::one() }
    }

    pub fn rat_zero(&self) -> RatFun {
        self.rat_from_poly(Poly::zero())
    }

    pub fn rat_one(&self) -> RatFun {
        self.rat_from_poly(Poly::one())
    }

    pub fn rat_add(&self, a: &RatFun, b: &RatFun) -> RatFun {
        if a.den == b.den {
            return self.ratfun(self.add(&a.num, &b.num), a.den.clone()).unwrap();
        }
        let num = self.add(&self.mul(&a.num, &b.den), &self.mul(&b.num, &a.den));
        self.ratfun(num, self.mul(&a.den, &b.den)).unwrap()
    }

    pub fn rat_neg(&self, a: &RatFun) -> RatFun {
        RatFun { num: self.neg(&a.num), den: a.den.clone() }
    }

    pub fn rat_sub(&self, a: &RatFun, b: &RatFun) -> RatFun {
        self.rat_add(a, &self.rat_neg(b))
    }

    pub fn rat_mul(&self, a: &RatFun, b: &RatFun) -> RatFun {
        self.ratfun(self.mul(&a.num, &b.num), self.mul(&a.den, &b.den)).unwrap()
    }

    pub fn rat_inv(&self, a: &RatFun) -> Result<RatFun> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.ratfun(a.den.clone(), a.num.clone())
    }

    pub fn rat_div(&self, a: &RatFun, b: &RatFun) -> Result<RatFun> {
        Ok(self.rat_mul(a, &self.rat_inv(b)?))
    }

    /// `a · t^k` for any integer `k`.
    pub fn rat_shift(&self, a: &RatFun, k: i64) -> RatFun {
        if k >= 0 {
            self.ratfun(self.shift(&a.num, k as usize), a.den.clone()).unwrap()
        } else {
            self.ratfun(a.num.clone(), self.shift(&a.den, (-k) as usize)).unwrap()
        }
    }

    // ---- the place at infinity ---------------------------------------------

    /// `|a|∞ = q^{deg num − deg den}`.
    pub fn abs_infty(&self, a: &RatFun) -> Valuation {
        Some(a.num.valuation()? - a.den.valuation()?)
    }

    /// Coefficients `c_1, …, c_depth` of `t^{-1}, …, t^{-depth}` in the
    /// expansion of `num/den` at infinity. The fraction need not be reduced.
    pub fn negative_laurent_coeffs(&self, num: &Poly, den: &Poly, depth: usize) -> Result<Vec<Fq>> {
        let (_, r) = self.divmod(num, den)?;
        let (q, _) = self.divmod(&self.shift(&r, depth), den)?;
        Ok((1..=depth).map(|j| q.coeff(depth - j)).collect())
    }

    /// Coefficient of `t^k` in the expansion of `num/den` at infinity.
    pub fn laurent_coeff_frac(&self, num: &Poly, den: &Poly, k: i64) -> Result<Fq> {
        if k >= 0 {
            return Ok(self.divmod(num, den)?.0.coeff(k as usize));
        }
        let depth = (-k) as usize;
        Ok(self.negative_laurent_coeffs(num, den, depth)?[depth - 1])
    }

    /// The coefficient `a_{-1}` read by the character `e`.
    pub fn laurent_coeff_minus1(&self, a: &RatFun) -> Fq {
        self.laurent_coeff_frac(&a.num, &a.den, -1).expect("nonzero denominator")
    }

    /// Exponent `j` with `e(a) = exp(2πij/p)`.
    pub fn char_e_exponent(&self, a: &RatFun) -> u32 {
        self.field.trace(self.laurent_coeff_minus1(a))
    }

    pub fn char_e(&self, a: &RatFun) -> CharSum {
        CharSum::single(self.p(), self.char_e_exponent(a))
    }

    /// The fractional part `a − ⌊a⌋`, a proper fraction.
    pub fn frac_part(&self, a: &RatFun) -> RatFun {
        let (_, r) = self.divmod(&a.num, &a.den).expect("nonzero denominator");
        RatFun { num: r, den: a.den.clone() }
    }

    /// Exponent of `‖a‖∞ = inf over g in A of |a + g|∞`; always `<= -1` or `-∞`.
    pub fn torus_norm_1d(&self, a: &RatFun) -> Valuation {
        self.abs_infty(&self.frac_part(a))
    }

    // ---- text forms ----------------------------------------------------------

    /// Parses `"c0,c1,..."` (coefficient encodings, ascending).
    pub fn parse_poly(&self, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let coeffs = s
            .split(',')
            .map(|c| {
                let v: u32 = c
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient {c:?} in {s:?}")))?;
                if v >= self.q() {
                    return Err(Error::Parse(format!("coefficient {v} is not below q = {}", self.q())));
                }
                Ok(Fq(v))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(coeffs))
    }

    /// Parses `"num/den"` or a bare polynomial.
    pub fn parse_ratfun(&self, s: &str) -> Result<RatFun> {
        match s.split_once('/') {
            Some((n, d)) => self.ratfun(self.parse_poly(n)?, self.parse_poly(d)?),
            None => Ok(self.rat_from_poly(self.parse_poly(s)?)),
        }
    }
}
