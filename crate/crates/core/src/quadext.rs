//! The imaginary quadratic order `𝔸 = A + A√α` inside `K = k(√α)`.
//!
//! Covers norms and traces, the balls `𝐁(0, N) ∩ 𝔸`, the torus norm
//! `N_T`, residue systems modulo a principal ideal `(f)` (via a Hermite
//! basis of the coordinate lattice of multiples of `f`), the coprimality
//! test `(r, f) = 1`, and the proper additive characters
//! `σ(g) = e(Tr(g r / (2√α f)))`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{CharSum, Fq};
use crate::lattice::hermite_basis;
use crate::polyring::{Poly, PolyRing, RatFun, Valuation};

/// `a + b√α` with `a, b ∈ A`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QuadInt {
    pub re: Poly,
    pub im: Poly,
}

impl QuadInt {
    pub fn new(re: Poly, im: Poly) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(Poly::one(), Poly::zero())
    }

    pub fn sqrt_alpha() -> Self {
        Self::new(Poly::zero(), Poly::one())
    }

    pub fn from_poly(a: Poly) -> Self {
        Self::new(a, Poly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadInt({self})")
    }
}

impl fmt::Display for QuadInt {
    /// `"re;im"`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.re, self.im)
    }
}

/// `a + b√α` with `a, b ∈ k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadRat {
    pub re: RatFun,
    pub im: RatFun,
}

impl fmt::Debug for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadRat({};{})", self.re, self.im)
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.re, self.im)
    }
}

/// A validated `α`: square-free, and of odd degree or with non-square
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaSpec {
    alpha: Poly,
    ell: i64,
}

impl AlphaSpec {
    pub fn alpha(&self) -> &Poly {
        &self.alpha
    }

    /// `ℓ = deg α`.
    pub fn ell(&self) -> i64 {
        self.ell
    }
}

pub fn validate_alpha(ring: &PolyRing, alpha: &Poly) -> Result<AlphaSpec> {
    let deg = alpha.deg().ok_or(Error::ZeroElement)?;
    if ring.gcd(alpha, &ring.derivative(alpha)).deg() != Some(0) {
        return Err(Error::NotSquareFree);
    }
    if deg % 2 == 0 && ring.field().is_square(alpha.lead()) {
        return Err(Error::NotImaginary);
    }
    Ok(AlphaSpec { alpha: alpha.clone(), ell: deg as i64 })
}

/// The order `𝔸` as an arithmetic context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadOrder {
    ring: PolyRing,
    alpha: AlphaSpec,
}

impl QuadOrder {
    pub fn new(ring: PolyRing, alpha: &Poly) -> Result<Self> {
        let alpha = validate_alpha(&ring, alpha)?;
        Ok(Self { ring, alpha })
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn alpha(&self) -> &Poly {
        &self.alpha.alpha
    }

    pub fn ell(&self) -> i64 {
        self.alpha.ell
    }

    pub fn q(&self) -> u32 {
        self.ring.q()
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    // ---- arithmetic in 𝔸 ---------------------------------------------------

    pub fn add(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        let r = &self.ring;
        QuadInt::new(r.add(&x.re, &y.re), r.add(&x.im, &y.im))
    }

    pub fn sub(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        let r = &self.ring;
        QuadInt::new(r.sub(&x.re, &y.re), r.sub(&x.im, &y.im))
    }

    pub fn neg(&self, x: &QuadInt) -> QuadInt {
        QuadInt::new(self.ring.neg(&x.re), self.ring.neg(&x.im))
    }

    pub fn scale(&self, x: &QuadInt, c: Fq) -> QuadInt {
        QuadInt::new(self.ring.scale(&x.re, c), self.ring.scale(&x.im, c))
    }

    pub fn mul_poly(&self, x: &QuadInt, a: &Poly) -> QuadInt {
        QuadInt::new(self.ring.mul(&x.re, a), self.ring.mul(&x.im, a))
    }

    /// `(a + b√α)(c + d√α) = (ac + bdα) + (ad + bc)√α`.
    pub fn mul(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        let r = &self.ring;
        let bd = r.mul(&x.im, &y.im);
        QuadInt::new(
            r.add(&r.mul(&x.re, &y.re), &r.mul(&bd, self.alpha())),
            r.add(&r.mul(&x.re, &y.im), &r.mul(&x.im, &y.re)),
        )
    }

    pub fn conj(&self, x: &QuadInt) -> QuadInt {
        QuadInt::new(x.re.clone(), self.ring.neg(&x.im))
    }

    /// `Norm(a + b√α) = a² − b²α`.
    pub fn norm(&self, x: &QuadInt) -> Poly {
        let r = &self.ring;
        r.sub(&r.mul(&x.re, &x.re), &r.mul(&r.mul(&x.im, &x.im), self.alpha()))
    }

    /// `Tr(a + b√α) = 2a`.
    pub fn trace(&self, x: &QuadInt) -> Poly {
        self.ring.scale(&x.re, self.ring.field().from_int(2))
    }

    /// `𝐃(x) = deg Norm(x)`; by imaginarity equal to `max(2 deg a, 2 deg b + ℓ)`.
    pub fn big_d(&self, x: &QuadInt) -> Result<i64> {
        self.norm(x).valuation().ok_or(Error::ZeroElement)
    }

    /// Exponent of `𝐍(x) = q^{𝐃(x)}`.
    pub fn big_n_exponent(&self, x: &QuadInt) -> Result<i64> {
        self.big_d(x)
    }

    /// Whether `d` divides `l` in `𝔸`.
    pub fn divides(&self, d: &QuadInt, l: &QuadInt) -> bool {
        if d.is_zero() {
            return l.is_zero();
        }
        self.div_exact(l, d).is_some()
    }

    /// `l / d` when `d ≠ 0` divides `l` in `𝔸`.
    pub fn div_exact(&self, l: &QuadInt, d: &QuadInt) -> Option<QuadInt> {
        if d.is_zero() {
            return None;
        }
        let n = self.norm(d);
        let prod = self.mul(l, &self.conj(d));
        let r = &self.ring;
        Some(QuadInt::new(r.div_exact(&prod.re, &n).ok()??, r.div_exact(&prod.im, &n).ok()??))
    }

    // ---- arithmetic in K ---------------------------------------------------

    pub fn to_rat(&self, x: &QuadInt) -> QuadRat {
        QuadRat {
            re: self.ring.rat_from_poly(x.re.clone()),
            im: self.ring.rat_from_poly(x.im.clone()),
        }
    }

    pub fn quadrat(&self, re: RatFun, im: RatFun) -> QuadRat {
        QuadRat { re, im }
    }

    pub fn rat_add(&self, x: &QuadRat, y: &QuadRat) -> QuadRat {
        let r = &self.ring;
        QuadRat { re: r.rat_add(&x.re, &y.re), im: r.rat_add(&x.im, &y.im) }
    }

    pub fn rat_sub(&self, x: &QuadRat, y: &QuadRat) -> QuadRat {
        let r = &self.ring;
        QuadRat { re: r.rat_sub(&x.re, &y.re), im: r.rat_sub(&x.im, &y.im) }
    }

    pub fn rat_mul(&self, x: &QuadRat, y: &QuadRat) -> QuadRat {
        let r = &self.ring;
        let alpha = r.rat_from_poly(self.alpha().clone());
        let bd = r.rat_mul(&x.im, &y.im);
        QuadRat {
            re: r.rat_add(&r.rat_mul(&x.re, &y.re), &r.rat_mul(&bd, &alpha)),
            im: r.rat_add(&r.rat_mul(&x.re, &y.im), &r.rat_mul(&x.im, &y.re)),
        }
    }

    pub fn rat_conj(&self, x: &QuadRat) -> QuadRat {
        QuadRat { re: x.re.clone(), im: self.ring.rat_neg(&x.im) }
    }

    pub fn rat_norm(&self, x: &QuadRat) -> RatFun {
        let r = &self.ring;
        let alpha = r.rat_from_poly(self.alpha().clone());
        r.rat_sub(&r.rat_mul(&x.re, &x.re), &r.rat_mul(&r.rat_mul(&x.im, &x.im), &alpha))
    }

    pub fn rat_trace(&self, x: &QuadRat) -> RatFun {
        let two = self.ring.rat_from_poly(self.ring.from_int(2));
        self.ring.rat_mul(&x.re, &two)
    }

    pub fn rat_div(&self, x: &QuadRat, y: &QuadRat) -> Result<QuadRat> {
        let n = self.rat_norm(y);
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let top = self.rat_mul(x, &self.rat_conj(y));
        let r = &self.ring;
        Ok(QuadRat { re: r.rat_div(&top.re, &n)?, im: r.rat_div(&top.im, &n)? })
    }

    /// `x / y` for `x, y ∈ 𝔸`, as an element of `K`.
    pub fn fraction(&self, x: &QuadInt, y: &QuadInt) -> Result<QuadRat> {
        self.rat_div(&self.to_rat(x), &self.to_rat(y))
    }

    // ---- balls and the torus -----------------------------------------------

    /// Degree bounds `(deg s, deg w)` for `s + w√α ∈ 𝐁(0, N)`; `-1` means only zero.
    pub fn ball_degrees(&self, n: i64) -> (i64, i64) {
        (n.div_euclid(2), (n - self.ell()).div_euclid(2))
    }

    /// `g ∈ 𝐁(0, N) ∩ 𝔸`, i.e. `2 deg s <= N` and `2 deg w + ℓ <= N`.
    pub fn in_ball(&self, g: &QuadInt, n: i64) -> bool {
        let re_ok = g.re.valuation().is_none_or(|d| 2 * d <= n);
        let im_ok = g.im.valuation().is_none_or(|d| 2 * d + self.ell() <= n);
        re_ok && im_ok
    }

    pub fn ball_size(&self, n: i64) -> u64 {
        let (a, b) = self.ball_degrees(n);
        self.ring.count_polys(a) * self.ring.count_polys(b)
    }

    /// The `index`-th ball element: the real part runs fastest.
    pub fn ball_elem(&self, n: i64, index: u64) -> QuadInt {
        let (a, _) = self.ball_degrees(n);
        let na = self.ring.count_polys(a);
        QuadInt::new(self.ring.poly_from_index(index % na), self.ring.poly_from_index(index / na))
    }

    /// Position of `g` in [`ball`](Self::ball) order; `g` must lie in the ball.
    pub fn ball_index(&self, n: i64, g: &QuadInt) -> u64 {
        let (a, _) = self.ball_degrees(n);
        let na = self.ring.count_polys(a);
        self.ring.poly_index(&g.im) * na + self.ring.poly_index(&g.re)
    }

    /// `𝐁(0, N) ∩ 𝔸` in a fixed order, `0` first.
    pub fn ball(&self, n: i64) -> impl Iterator<Item = QuadInt> + '_ {
        (0..self.ball_size(n)).map(move |i| self.ball_elem(n, i))
    }

    /// Nonzero `x ∈ 𝔸` with `𝐃(x) = d` exactly, in ball order.
    pub fn elements_with_d(&self, d: i64) -> Vec<QuadInt> {
        if d < 0 {
            return Vec::new();
        }
        self.ball(d).filter(|x| self.big_d(x).ok() == Some(d)).collect()
    }

    /// Units of `𝔸` (elements with `𝐃 = 0`).
    pub fn units(&self) -> Vec<QuadInt> {
        self.elements_with_d(0)
    }

    /// Exponent of `N_T(h) = ‖h‖²_{T,∞}`: `max(2 e_a, 2 e_b + ℓ)` with
    /// `e_a, e_b` the one-dimensional torus exponents of the coordinates.
    pub fn torus_norm_t(&self, h: &QuadRat) -> Valuation {
        let ea = self.ring.torus_norm_1d(&h.re).map(|e| 2 * e);
        let eb = self.ring.torus_norm_1d(&h.im).map(|e| 2 * e + self.ell());
        ea.max(eb)
    }

    /// Exponent of `𝐍(h) = |h|²∞` for `h ∈ K`.
    pub fn abs2_exponent(&self, h: &QuadRat) -> Valuation {
        let ea = self.ring.abs_infty(&h.re).map(|e| 2 * e);
        let eb = self.ring.abs_infty(&h.im).map(|e| 2 * e + self.ell());
        ea.max(eb)
    }

    // ---- residues modulo (f) -----------------------------------------------

    pub fn residue_system(&self, f: &QuadInt) -> Result<ResidueSystem<'_>> {
        ResidueSystem::new(self, f)
    }

    /// `(r, f) = 1`, with the inverse of `r` modulo `f` when it exists.
    pub fn is_unit_mod(&self, r: &QuadInt, f: &QuadInt) -> Result<Option<QuadInt>> {
        Ok(self.residue_system(f)?.inverse(r))
    }

    pub fn unit_count(&self, f: &QuadInt) -> Result<u64> {
        Ok(self.residue_system(f)?.units().len() as u64)
    }

    // ---- proper additive characters ----------------------------------------

    /// The trace `Tr(g r / (2√α f))` via the coordinate identity
    /// `(w(xu − yvα) + s(yu − xv)) / Norm(f)`, as an unreduced fraction.
    pub fn sigma_trace_fraction(&self, g: &QuadInt, r: &QuadInt, f: &QuadInt) -> Result<(Poly, Poly)> {
        if f.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let ring = &self.ring;
        let (a, b) = self.sigma_coordinates(r, f);
        let num = ring.add(&ring.mul(&g.im, &a), &ring.mul(&g.re, &b));
        Ok((num, self.norm(f)))
    }

    /// `(xu − yvα, yu − xv)` for `r = x + y√α`, `f = u + v√α`: the numerators
    /// of `r/f = (A + B√α)/Norm(f)`.
    fn sigma_coordinates(&self, r: &QuadInt, f: &QuadInt) -> (Poly, Poly) {
        let prod = self.mul(r, &self.conj(f));
        (prod.re, prod.im)
    }

    /// Exponent `j` with `σ(g) = exp(2πij/p)`.
    pub fn sigma_exponent(&self, g: &QuadInt, r: &QuadInt, f: &QuadInt) -> Result<u32> {
        let (num, den) = self.sigma_trace_fraction(g, r, f)?;
        let c = self.ring.laurent_coeff_frac(&num, &den, -1)?;
        Ok(self.ring.field().trace(c))
    }

    pub fn sigma_char(&self, g: &QuadInt, r: &QuadInt, f: &QuadInt) -> Result<CharSum> {
        Ok(CharSum::single(self.p(), self.sigma_exponent(g, r, f)?))
    }

    /// The same exponent computed by dividing in `K`, taking the trace, and
    /// reading the `t^{-1}` coefficient.
    pub fn sigma_exponent_direct(&self, g: &QuadInt, r: &QuadInt, f: &QuadInt) -> Result<u32> {
        if f.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let two_sqrt_alpha = QuadInt::new(Poly::zero(), self.ring.from_int(2));
        let den = self.mul(&two_sqrt_alpha, f);
        let xi = self.fraction(&self.mul(g, r), &den)?;
        Ok(self.ring.char_e_exponent(&self.rat_trace(&xi)))
    }

    /// Precomputes `g ↦ σ(g)` on `𝐁(0, N)` as an `F_q`-linear functional of
    /// the coefficients of `g = s + w√α`.
    pub fn sigma_functional(&self, r: &QuadInt, f: &QuadInt, n: i64) -> Result<SigmaFunctional> {
        if f.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let (a, b) = self.sigma_coordinates(r, f);
        let norm = self.norm(f);
        let (ds, dw) = self.ball_degrees(n);
        let depth_s = (ds + 1).max(0) as usize;
        let depth_w = (dw + 1).max(0) as usize;
        // coefficient of t^{-1} in s·B/Norm is Σ_i s_i · [t^{-1-i}](B/Norm)
        let on_s = self.ring.negative_laurent_coeffs(&b, &norm, depth_s)?;
        let on_w = self.ring.negative_laurent_coeffs(&a, &norm, depth_w)?;
        Ok(SigmaFunctional { on_s, on_w })
    }

    // ---- text forms ----------------------------------------------------------

    /// `"re;im"`, each a polynomial; a missing `;im` means `im = 0`.
    pub fn parse_quadint(&self, s: &str) -> Result<QuadInt> {
        match s.split_once(';') {
            Some((a, b)) => Ok(QuadInt::new(self.ring.parse_poly(a)?, self.ring.parse_poly(b)?)),
            None => Ok(QuadInt::from_poly(self.ring.parse_poly(s)?)),
        }
    }

    /// `"re;im"`, each a rational function `num/den`.
    pub fn parse_quadrat(&self, s: &str) -> Result<QuadRat> {
        match s.split_once(';') {
            Some((a, b)) => Ok(QuadRat { re: self.ring.parse_ratfun(a)?, im: self.ring.parse_ratfun(b)? }),
            None => Ok(QuadRat { re: self.ring.parse_ratfun(s)?, im: self.ring.rat_zero() }),
        }
    }
}

/// `g ↦ σ(g)` restricted to a ball, as precomputed Laurent coefficients.
#[derive(Clone, Debug)]
pub struct SigmaFunctional {
    on_s: Vec<Fq>,
    on_w: Vec<Fq>,
}

impl SigmaFunctional {
    /// Exponent of `σ(g)`; `g` must lie in the ball the functional was built for.
    pub fn exponent(&self, order: &QuadOrder, g: &QuadInt) -> u32 {
        let field = order.ring().field();
        debug_assert!(g.re.coeffs().len() <= self.on_s.len() && g.im.coeffs().len() <= self.on_w.len());
        let mut acc = field.zero();
        for (c, k) in g.re.coeffs().iter().zip(&self.on_s) {
            acc = field.add(acc, field.mul(*c, *k));
        }
        for (c, k) in g.im.coeffs().iter().zip(&self.on_w) {
            acc = field.add(acc, field.mul(*c, *k));
        }
        field.trace(acc)
    }
}

/// A complete residue system for `𝔸/(f)`.
///
/// The multiples of `f = u + v√α` form the coordinate lattice spanned by the
/// columns `(u, v)` and `(vα, u)`. Its Hermite basis `[[h11, h12], [0, h22]]`
/// (monic diagonal, `deg h12 < deg h11`) makes `(a, b)` with
/// `deg a < deg h11`, `deg b < deg h22` a canonical set of representatives.
#[derive(Clone, Debug)]
pub struct ResidueSystem<'a> {
    order: &'a QuadOrder,
    modulus: QuadInt,
    h11: Poly,
    h12: Poly,
    h22: Poly,
}

impl<'a> ResidueSystem<'a> {
    fn new(order: &'a QuadOrder, f: &QuadInt) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let ring = order.ring();
        let c1 = [f.re.clone(), f.im.clone()];
        let c2 = [ring.mul(&f.im, order.alpha()), f.re.clone()];
        let [[h11, _], [h12, h22]] = hermite_basis(ring, &c1, &c2)?;
        Ok(Self { order, modulus: f.clone(), h11, h12, h22 })
    }

    pub fn modulus(&self) -> &QuadInt {
        &self.modulus
    }

    /// Hermite basis columns `(h11, 0)` and `(h12, h22)`.
    pub fn basis(&self) -> [[Poly; 2]; 2] {
        [[self.h11.clone(), Poly::zero()], [self.h12.clone(), self.h22.clone()]]
    }

    fn dims(&self) -> (usize, usize) {
        (self.h11.deg().unwrap(), self.h22.deg().unwrap())
    }

    /// `dim_{F_q} 𝔸/(f) = 𝐃(f)`.
    pub fn dimension(&self) -> usize {
        let (a, b) = self.dims();
        a + b
    }

    /// `|𝔸/(f)| = q^{𝐃(f)}`.
    pub fn size(&self) -> u64 {
        (self.order.q() as u64).pow(self.dimension() as u32)
    }

    /// Canonical representative of `g` modulo `f`.
    pub fn reduce(&self, g: &QuadInt) -> QuadInt {
        let ring = self.order.ring();
        let (k, b) = ring.divmod(&g.im, &self.h22).unwrap();
        let a = ring.sub(&g.re, &ring.mul(&k, &self.h12));
        QuadInt::new(ring.rem(&a, &self.h11).unwrap(), b)
    }

    pub fn is_zero_mod(&self, g: &QuadInt) -> bool {
        self.reduce(g).is_zero()
    }

    pub fn rep(&self, index: u64) -> QuadInt {
        let ring = self.order.ring();
        let na = (self.order.q() as u64).pow(self.dims().0 as u32);
        QuadInt::new(ring.poly_from_index(index % na), ring.poly_from_index(index / na))
    }

    /// Position of the class of `g` in [`reps`](Self::reps) order.
    pub fn index_of(&self, g: &QuadInt) -> u64 {
        let ring = self.order.ring();
        let r = self.reduce(g);
        let na = (self.order.q() as u64).pow(self.dims().0 as u32);
        ring.poly_index(&r.im) * na + ring.poly_index(&r.re)
    }

    pub fn reps(&self) -> impl Iterator<Item = QuadInt> + '_ {
        (0..self.size()).map(move |i| self.rep(i))
    }

    fn coords(&self, g: &QuadInt) -> Vec<Fq> {
        let (da, db) = self.dims();
        let r = self.reduce(g);
        (0..da).map(|i| r.re.coeff(i)).chain((0..db).map(|j| r.im.coeff(j))).collect()
    }

    fn element_at(&self, x: &[Fq]) -> QuadInt {
        let da = self.dims().0;
        QuadInt::new(Poly::from_coeffs(x[..da].to_vec()), Poly::from_coeffs(x[da..].to_vec()))
    }

    /// Matrix of `y ↦ r·y` on `𝔸/(f)` in the monomial basis
    /// `t^i` (`i < deg h11`), `t^j√α` (`j < deg h22`); `m[row][col]`.
    pub fn multiplication_matrix(&self, r: &QuadInt) -> Vec<Vec<Fq>> {
        let (da, db) = self.dims();
        let ring = self.order.ring();
        let one = ring.field().one();
        let basis = (0..da)
            .map(|i| QuadInt::from_poly(Poly::monomial(one, i)))
            .chain((0..db).map(|j| QuadInt::new(Poly::zero(), Poly::monomial(one, j))));
        let cols: Vec<Vec<Fq>> = basis.map(|e| self.coords(&self.order.mul(r, &e))).collect();
        let n = da + db;
        (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
    }

    /// Inverse of `r` modulo `f`, or `None` when `(r, f) ≠ 1`.
    ///
    /// Solves `M x = [1]` by Gaussian elimination, `M` the multiplication
    /// matrix of `r`. The zero ring (`f` a unit) has every element invertible.
    pub fn inverse(&self, r: &QuadInt) -> Option<QuadInt> {
        let field = self.order.ring().field();
        let n = self.dimension();
        let mut m = self.multiplication_matrix(r);
        let rhs = self.coords(&QuadInt::one());
        for (row, b) in m.iter_mut().zip(rhs) {
            row.push(b);
        }
        for col in 0..n {
            let pivot = (col..n).find(|&i| !m[i][col].is_zero())?;
            m.swap(col, pivot);
            let inv = field.inv(m[col][col]).unwrap();
            for x in m[col].iter_mut() {
                *x = field.mul(*x, inv);
            }
            let pivot_row = m[col].clone();
            for (i, row) in m.iter_mut().enumerate() {
                let factor = row[col];
                if i != col && !factor.is_zero() {
                    for (x, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                        *x = field.sub(*x, field.mul(factor, p));
                    }
                }
            }
        }
        let x: Vec<Fq> = m.iter().map(|row| row[n]).collect();
        Some(self.element_at(&x))
    }

    pub fn is_unit(&self, r: &QuadInt) -> bool {
        self.inverse(r).is_some()
    }

    /// Representatives coprime to the modulus, in [`reps`](Self::reps) order.
    pub fn units(&self) -> Vec<QuadInt> {
        self.reps().filter(|r| self.is_unit(r)).collect()
    }
}
