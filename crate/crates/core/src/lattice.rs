//! Rank-2 `A`-lattices in `k_∞²`, their duals, exact Haar integrals of
//! scaled ball indicators, and the Poisson summation check.
//!
//! Integrals are computed by splitting the domain into the finitely many
//! cosets on which the integrand is constant. Haar measure is normalised by
//! `vol{|y|∞ < 1} = 1` per coordinate, so `vol{|y|∞ <= q^L} = q^{L+1}`.

use std::fmt;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::CharSum;
use crate::polyring::{Poly, PolyRing, RatFun};
use crate::quadext::{QuadInt, QuadOrder};

/// A point of `k²` (or `k¹` for one-dimensional integrals).
pub type Point = Vec<RatFun>;

/// A value `q^exp · z` with `z ∈ Z[ζ_p]`, kept in the canonical form
/// `exp <= 0`, and `z` not divisible by `q` when `exp < 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScaled {
    q: u32,
    exp: i64,
    value: Cyclo,
}

impl QScaled {
    pub fn new(q: u32, exp: i64, value: Cyclo) -> Self {
        let mut s = Self { q, exp, value };
        s.normalize();
        s
    }

    pub fn zero(q: u32, p: u32) -> Self {
        Self::new(q, 0, Cyclo::zero(p))
    }

    pub fn from_int(q: u32, p: u32, n: i64) -> Self {
        Self::new(q, 0, Cyclo::from_int(p, n))
    }

    fn normalize(&mut self) {
        if self.value.is_zero() {
            self.exp = 0;
            return;
        }
        while self.exp > 0 {
            self.value = self.value.scale(self.q as i64);
            self.exp -= 1;
        }
        while self.exp < 0 {
            match self.value.div_exact(self.q as i64) {
                Some(v) => {
                    self.value = v;
                    self.exp += 1;
                }
                None => break,
            }
        }
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn value(&self) -> &Cyclo {
        &self.value
    }

    /// The rational integer this equals, if any.
    pub fn as_integer(&self) -> Option<i64> {
        if self.exp == 0 {
            self.value.as_integer()
        } else {
            None
        }
    }

    pub fn equals_int(&self, n: i64) -> bool {
        self.as_integer() == Some(n)
    }

    pub fn add(&self, other: &QScaled) -> QScaled {
        let e = self.exp.min(other.exp);
        let lift = |s: &QScaled| s.value.scale((s.q as i64).pow((s.exp - e) as u32));
        QScaled::new(self.q, e, lift(self) + lift(other))
    }

    pub fn mul(&self, other: &QScaled) -> QScaled {
        QScaled::new(self.q, self.exp + other.exp, self.value.clone() * other.value.clone())
    }

    pub fn mul_cyclo(&self, z: &Cyclo) -> QScaled {
        QScaled::new(self.q, self.exp, self.value.clone() * z.clone())
    }

    /// Multiplication by `q^k`.
    pub fn mul_qpow(&self, k: i64) -> QScaled {
        QScaled::new(self.q, self.exp + k, self.value.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_complex().re * (self.q as f64).powi(self.exp as i32)
    }
}

impl fmt::Debug for QScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{}·({})", self.exp, self.value)
    }
}

impl fmt::Display for QScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}^{}·({})", self.q, self.exp, self.value),
        }
    }
}

/// Column-style Hermite basis of the `A`-module spanned by `c1, c2`:
/// `[(h11, 0), (h12, h22)]` with `h11, h22` monic and `deg h12 < deg h11`.
pub fn hermite_basis(ring: &PolyRing, c1: &[Poly; 2], c2: &[Poly; 2]) -> Result<[[Poly; 2]; 2]> {
    if c1[1].is_zero() && c2[1].is_zero() {
        return Err(Error::PreconditionViolated("generators are linearly dependent".into()));
    }
    let (g, s, t) = ring.xgcd(&c1[1], &c2[1]);
    let k1 = ring.divmod(&c2[1], &g)?.0;
    let k2 = ring.divmod(&c1[1], &g)?.0;
    // (k1, -k2; s, t) has determinant ±1 after dividing out g
    let top1 = ring.sub(&ring.mul(&k1, &c1[0]), &ring.mul(&k2, &c2[0]));
    let top2 = ring.add(&ring.mul(&s, &c1[0]), &ring.mul(&t, &c2[0]));
    if top1.is_zero() {
        return Err(Error::PreconditionViolated("generators are linearly dependent".into()));
    }
    let h11 = ring.monic(&top1);
    let h12 = ring.rem(&top2, &h11)?;
    Ok([[h11, Poly::zero()], [h12, g]])
}

/// `(1/den) · span_A{col0, col1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice2 {
    den: Poly,
    cols: [[Poly; 2]; 2],
}

impl Lattice2 {
    pub fn new(ring: &PolyRing, den: Poly, cols: [[Poly; 2]; 2]) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let l = Self { den, cols };
        if l.det(ring).is_zero() {
            return Err(Error::PreconditionViolated("generators are linearly dependent".into()));
        }
        Ok(l)
    }

    /// `A²`.
    pub fn standard() -> Self {
        Self { den: Poly::one(), cols: [[Poly::one(), Poly::zero()], [Poly::zero(), Poly::one()]] }
    }

    /// Coordinates of the multiples of `f = u + v√α`: columns `(u, v)`, `(vα, u)`.
    pub fn multiples_of(order: &QuadOrder, f: &QuadInt) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let ring = order.ring();
        let cols = [[f.re.clone(), f.im.clone()], [ring.mul(&f.im, order.alpha()), f.re.clone()]];
        Self::new(ring, Poly::one(), cols)
    }

    /// The dual of [`multiples_of`](Self::multiples_of) written out directly:
    /// `(1/Norm f) · span{(u, −vα), (−v, u)}`.
    pub fn dual_of_multiples(order: &QuadOrder, f: &QuadInt) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let ring = order.ring();
        let cols = [
            [f.re.clone(), ring.neg(&ring.mul(&f.im, order.alpha()))],
            [ring.neg(&f.im), f.re.clone()],
        ];
        Self::new(ring, order.norm(f), cols)
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn cols(&self) -> &[[Poly; 2]; 2] {
        &self.cols
    }

    fn det(&self, ring: &PolyRing) -> Poly {
        let [[a, c], [b, d]] = &self.cols;
        ring.sub(&ring.mul(a, d), &ring.mul(b, c))
    }

    pub fn generators(&self, ring: &PolyRing) -> [Point; 2] {
        self.cols.clone().map(|c| {
            c.into_iter().map(|x| ring.ratfun(x, self.den.clone()).unwrap()).collect()
        })
    }

    /// `vol(k_∞²/Λ) = q^{vol_exponent}`.
    pub fn vol_exponent(&self, ring: &PolyRing) -> i64 {
        self.det(ring).valuation().unwrap() - 2 * self.den.valuation().unwrap()
    }

    /// `Λ′ = {x : y·x ∈ A for all y ∈ Λ}`, i.e. `(den/det C) · adj(C)ᵀ`.
    pub fn dual(&self, ring: &PolyRing) -> Self {
        let [[a, c], [b, d]] = &self.cols;
        // adj(C)ᵀ has columns (d, −b) and (−c, a)
        let cols = [
            [ring.mul(&self.den, d), ring.neg(&ring.mul(&self.den, b))],
            [ring.neg(&ring.mul(&self.den, c)), ring.mul(&self.den, a)],
        ];
        let den = self.det(ring);
        let g = cols.iter().flatten().fold(den.clone(), |g, x| ring.gcd(&g, x));
        let shrink = |x: &Poly| ring.divmod(x, &g).unwrap().0;
        let den = shrink(&den);
        let inv = ring.field().inv(den.lead()).unwrap();
        let cols = cols.map(|col| col.map(|x| ring.scale(&shrink(&x), inv)));
        Self { den: ring.scale(&den, inv), cols }
    }

    /// Membership of a point of `k²`.
    pub fn contains(&self, ring: &PolyRing, v: &[RatFun]) -> bool {
        let [[a, c], [b, d]] = &self.cols;
        let den = ring.rat_from_poly(self.den.clone());
        let w: Vec<RatFun> = v.iter().map(|x| ring.rat_mul(x, &den)).collect();
        let det = ring.rat_from_poly(self.det(ring));
        let r = |x: &Poly| ring.rat_from_poly(x.clone());
        // C = [[a, b], [c, d]] row-wise; C⁻¹ = adj(C)/det with adj(C) = [[d, −b], [−c, a]]
        let z0 = ring.rat_sub(&ring.rat_mul(&r(d), &w[0]), &ring.rat_mul(&r(b), &w[1]));
        let z1 = ring.rat_sub(&ring.rat_mul(&r(a), &w[1]), &ring.rat_mul(&r(c), &w[0]));
        [z0, z1].iter().all(|z| ring.rat_div(z, &det).unwrap().is_poly())
    }

    /// Same `A`-span (checked by mutual membership of generators).
    pub fn same_span(&self, other: &Lattice2, ring: &PolyRing) -> bool {
        other.generators(ring).iter().all(|g| self.contains(ring, g))
            && self.generators(ring).iter().all(|g| other.contains(ring, g))
    }

    /// Every generator pairing `y·x` lands in `A`.
    pub fn pairs_integrally_with(&self, other: &Lattice2, ring: &PolyRing) -> bool {
        self.generators(ring).iter().all(|y| {
            other.generators(ring).iter().all(|x| dot(ring, y, x).is_poly())
        })
    }

    /// All `y ∈ shift + Λ` with `|y|∞ <= q^radius`.
    ///
    /// The search over the Hermite coordinates `(a, b)` is bounded by the
    /// ultrametric inequality, so the result is complete.
    pub fn points_in_ball(&self, ring: &PolyRing, shift: &[RatFun], radius: i64) -> Vec<Point> {
        let [[h11, _], [h12, h22]] =
            hermite_basis(ring, &self.cols[0], &self.cols[1]).expect("independent generators");
        let den_deg = self.den.valuation().unwrap();
        let bound = |s: &RatFun, diag: &Poly| {
            ring.abs_infty(s).unwrap_or(i64::MIN).max(radius) - diag.valuation().unwrap() + den_deg
        };
        let frac = |x: &Poly| ring.ratfun(x.clone(), self.den.clone()).unwrap();
        let fits = |y: &RatFun| ring.abs_infty(y).is_none_or(|e| e <= radius);
        let mut out = Vec::new();
        for b in ring.enumerate_polys(bound(&shift[1], &h22)) {
            let y1 = ring.rat_add(&shift[1], &frac(&ring.mul(&b, &h22)));
            if !fits(&y1) {
                continue;
            }
            let s0 = ring.rat_add(&shift[0], &frac(&ring.mul(&b, &h12)));
            for a in ring.enumerate_polys(bound(&s0, &h11)) {
                let y0 = ring.rat_add(&s0, &frac(&ring.mul(&a, &h11)));
                if fits(&y0) {
                    out.push(vec![y0, y1.clone()]);
                }
            }
        }
        out
    }
}

pub fn dot(ring: &PolyRing, x: &[RatFun], y: &[RatFun]) -> RatFun {
    x.iter().zip(y).fold(ring.rat_zero(), |acc, (a, b)| ring.rat_add(&acc, &ring.rat_mul(a, b)))
}

/// `y ↦ Φ₁(y / t^L)` on `k_∞ⁿ`: the indicator of `{|y|∞ <= q^L}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallIndicator {
    pub scale_exponent: i64,
    pub dim: usize,
}

impl BallIndicator {
    pub fn unit(dim: usize) -> Self {
        Self { scale_exponent: 0, dim }
    }

    /// `∫ Φ₁(y/t^L) e(−x·y) dy`, exactly.
    ///
    /// With `|x_i| = q^{k_i}`, the integrand depends only on the coefficients
    /// `y_j`, `−1 − k_i <= j <= L`, of each coordinate; the sum runs over
    /// those coefficients and each cell has volume `q^{−1−k_i}`.
    pub fn fourier(&self, ring: &PolyRing, x: &[RatFun]) -> QScaled {
        assert_eq!(x.len(), self.dim, "point has the wrong dimension");
        let field = ring.field();
        let (q, p) = (ring.q(), ring.p());
        let l = self.scale_exponent;
        let mut vol_exp = 0;
        // per coordinate: the x-coefficients paired with y_L, y_{L-1}, …
        let mut pairings: Vec<Vec<crate::field::Fq>> = Vec::new();
        for xi in x {
            match ring.abs_infty(xi) {
                Some(k) if -1 - k <= l => {
                    let lo = -1 - k;
                    vol_exp += lo;
                    // y_j pairs with x_{-1-j}
                    let coeffs = (lo..=l)
                        .map(|j| ring.laurent_coeff_frac(xi.num(), xi.den(), -1 - j).unwrap())
                        .collect();
                    pairings.push(coeffs);
                }
                _ => vol_exp += l + 1,
            }
        }
        let width: usize = pairings.iter().map(Vec::len).sum();
        let flat: Vec<_> = pairings.into_iter().flatten().collect();
        let mut sum = CharSum::empty(p);
        let mut digits = vec![0u32; width];
        loop {
            let mut acc = field.zero();
            for (d, c) in digits.iter().zip(&flat) {
                acc = field.add(acc, field.mul(field.elem(*d), *c));
            }
            sum.push(field.trace(field.neg(acc)));
            // odometer over F_q^width
            let mut i = 0;
            while i < width {
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == width {
                break;
            }
        }
        QScaled::new(q, vol_exp, sum.to_cyclo())
    }
}

/// `Φ̂₁(x)` on `k_∞ⁿ` by exact coset integration.
pub fn fourier_ball(ring: &PolyRing, x: &[RatFun]) -> QScaled {
    BallIndicator::unit(x.len()).fourier(ring, x)
}

/// `qⁿ Φ₁(t² x)`: `qⁿ` when `|x|∞ <= q^{-2}`, else `0`.
pub fn fourier_ball_closed_form(ring: &PolyRing, x: &[RatFun]) -> i64 {
    let small = x.iter().all(|xi| ring.abs_infty(xi).is_none_or(|e| e <= -2));
    if small {
        (ring.q() as i64).pow(x.len() as u32)
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonOutcome {
    /// `#{y ∈ h + Λ : |y|∞ <= q^L}`.
    pub lhs: u64,
    /// `q^{2L}/vol · Σ_{x ∈ Λ′} e(h·x) Φ̂₁(t^L x)`.
    pub rhs: QScaled,
    pub dual_terms: usize,
    pub equal: bool,
}

/// Both sides of the shifted Poisson formula for the ball indicator.
///
/// The dual sum enumerates `x ∈ Λ′` one shell beyond the support of
/// `Φ̂₁(t^L x)`, so the exact integrals also have to produce the zeros.
pub fn poisson_check(ring: &PolyRing, lattice: &Lattice2, h: &[RatFun], l: i64) -> Result<PoissonOutcome> {
    if h.len() != 2 {
        return Err(Error::PreconditionViolated("shift must be a point of k²".into()));
    }
    let (q, p) = (ring.q(), ring.p());
    let lhs = lattice.points_in_ball(ring, h, l).len() as u64;
    let dual = lattice.dual(ring);
    let xs = dual.points_in_ball(ring, &[ring.rat_zero(), ring.rat_zero()], -1 - l);
    let mut total = QScaled::zero(q, p);
    for x in &xs {
        let phase = Cyclo::zeta_pow(p, ring.char_e_exponent(&dot(ring, h, x)));
        let scaled: Point = x.iter().map(|xi| ring.rat_shift(xi, l)).collect();
        let ft = fourier_ball(ring, &scaled);
        total = total.add(&ft.mul_cyclo(&phase));
    }
    let rhs = total.mul_qpow(2 * l - lattice.vol_exponent(ring));
    let equal = rhs.equals_int(lhs as i64);
    Ok(PoissonOutcome { lhs, rhs, dual_terms: xs.len(), equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    fn setup(p: u32) -> QuadOrder {
        let ring = PolyRing::new(FiniteField::prime(p).unwrap());
        let alpha = ring.parse_poly("0,1").unwrap();
        QuadOrder::new(ring, &alpha).unwrap()
    }

    fn pt(ring: &PolyRing, a: &str, b: &str) -> Point {
        vec![ring.parse_ratfun(a).unwrap(), ring.parse_ratfun(b).unwrap()]
    }

    #[test]
    fn qscaled_normalizes() {
        let a = QScaled::new(3, -2, Cyclo::from_int(3, 18));
        assert_eq!(a.as_integer(), Some(2));
        let b = QScaled::new(3, -1, Cyclo::from_int(3, 1));
        assert_eq!(b.as_integer(), None);
        assert_eq!(b.add(&b).add(&b).as_integer(), Some(1));
        assert_eq!(QScaled::new(3, 2, Cyclo::from_int(3, 1)).as_integer(), Some(9));
    }

    #[test]
    fn dual_of_sqrt_t_lattice() {
        let o = setup(3);
        let ring = o.ring();
        let f = o.parse_quadint("0;1").unwrap();
        let lat = Lattice2::multiples_of(&o, &f).unwrap();
        let literal = Lattice2::dual_of_multiples(&o, &f).unwrap();
        // (1/(-t))·{p(0, -t) + q(-1, 0)}
        let expected = Lattice2::new(
            ring,
            ring.parse_poly("0,2").unwrap(),
            [
                [Poly::zero(), ring.parse_poly("0,2").unwrap()],
                [ring.parse_poly("2").unwrap(), Poly::zero()],
            ],
        )
        .unwrap();
        assert!(literal.same_span(&expected, ring));
        assert!(lat.dual(ring).same_span(&literal, ring));
        assert!(lat.pairs_integrally_with(&literal, ring));
        assert_eq!(lat.vol_exponent(ring), 1);
        assert_eq!(literal.vol_exponent(ring), -1);
    }

    #[test]
    fn unit_lattice_is_self_dual() {
        let o = setup(3);
        let ring = o.ring();
        let lat = Lattice2::multiples_of(&o, &QuadInt::one()).unwrap();
        assert!(lat.same_span(&Lattice2::standard(), ring));
        assert!(lat.dual(ring).same_span(&Lattice2::standard(), ring));
    }

    #[test]
    fn double_dual_is_original() {
        let o = setup(3);
        let ring = o.ring();
        for f in o.ball(4).skip(1) {
            let lat = Lattice2::multiples_of(&o, &f).unwrap();
            let dd = lat.dual(ring).dual(ring);
            assert!(lat.same_span(&dd, ring), "f = {f}");
            assert!(lat.dual(ring).same_span(&Lattice2::dual_of_multiples(&o, &f).unwrap(), ring));
        }
    }

    #[test]
    fn fourier_examples() {
        let o = setup(3);
        let ring = o.ring();
        let zero = ring.rat_zero();
        assert!(fourier_ball(ring, std::slice::from_ref(&zero)).equals_int(3));
        let x = ring.parse_ratfun("1/0,1").unwrap();
        assert!(fourier_ball(ring, &[x]).equals_int(0));
        let x = pt(ring, "0", "1/0,0,0,1");
        assert!(fourier_ball(ring, &x).equals_int(9));
    }

    #[test]
    fn fourier_scaling_law() {
        let o = setup(3);
        let ring = o.ring();
        for s in ["0", "1/0,1", "1/0,0,1", "2,1/1,0,1", "1", "0,1"] {
            let x = pt(ring, s, "1/0,0,1");
            for l in -2..=2 {
                let direct = BallIndicator { scale_exponent: l, dim: 2 }.fourier(ring, &x);
                let scaled: Point = x.iter().map(|xi| ring.rat_shift(xi, l)).collect();
                let via_unit = fourier_ball(ring, &scaled).mul_qpow(2 * l);
                assert_eq!(direct, via_unit, "x = {s}, L = {l}");
            }
        }
    }

    #[test]
    fn poisson_standard_lattice() {
        let o = setup(3);
        let ring = o.ring();
        let zero = pt(ring, "0", "0");
        let out = poisson_check(ring, &Lattice2::standard(), &zero, 0).unwrap();
        assert_eq!(out.lhs, 9);
        assert!(out.equal);
        let shifted = pt(ring, "1,2", "2");
        assert_eq!(poisson_check(ring, &Lattice2::standard(), &shifted, 0).unwrap().lhs, 9);
    }

    #[test]
    fn points_in_ball_brute_force() {
        let o = setup(3);
        let ring = o.ring();
        let f = o.parse_quadint("1,1;1").unwrap();
        let lat = Lattice2::multiples_of(&o, &f).unwrap();
        let h = pt(ring, "1/0,1", "2");
        for radius in -1..=2 {
            let fast = lat.points_in_ball(ring, &h, radius).len();
            // brute force over coefficient multiples c·f with c in a large ball
            let brute = o
                .ball(8)
                .map(|c| o.mul(&c, &f))
                .map(|m| {
                    vec![
                        ring.rat_add(&h[0], &ring.rat_from_poly(m.re.clone())),
                        ring.rat_add(&h[1], &ring.rat_from_poly(m.im.clone())),
                    ]
                })
                .filter(|y| y.iter().all(|c| ring.abs_infty(c).is_none_or(|e| e <= radius)))
                .count();
            assert_eq!(fast, brute, "radius {radius}");
        }
    }
}
