use ffsieve::sieve::{
    linear_sum_threshold, sigma_linear, squares_lhs, CoeffFamily, CoeffKind, ModuliKind, ModuliSet,
};
use ffsieve::{big_t, weyl_identity_check, FiniteField, Poly, PolyRing, QuadInt, QuadOrder, QuadRat, RatFun};
use proptest::prelude::*;

fn order() -> QuadOrder {
    let ring = PolyRing::new(FiniteField::prime(3).unwrap());
    let alpha = ring.parse_poly("0,1").unwrap();
    QuadOrder::new(ring, &alpha).unwrap()
}

fn poly(o: &QuadOrder, index: u64) -> Poly {
    o.ring().poly_from_index(index)
}

fn quad(o: &QuadOrder, (a, b): (u64, u64)) -> QuadInt {
    QuadInt::new(poly(o, a), poly(o, b))
}

fn rat(o: &QuadOrder, num: u64, den: u64) -> RatFun {
    o.ring().ratfun(poly(o, num), poly(o, den + 1)).unwrap()
}

/// Indices of polynomials of degree ≤ 2 over F_3.
fn small() -> impl Strategy<Value = u64> {
    0u64..27
}

fn nonzero_modulus() -> impl Strategy<Value = (u64, u64)> {
    // 𝐃 ≤ 2 at α = t: deg re ≤ 1, im constant
    (0u64..9, 0u64..3).prop_filter("nonzero", |&(a, b)| a != 0 || b != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn e_is_additive(a in small(), b in small(), c in small(), d in 0u64..8) {
        let o = order();
        let ring = o.ring();
        let x = rat(&o, a, d);
        let y = rat(&o, b, c % 8);
        let sum = ring.char_e_exponent(&ring.rat_add(&x, &y));
        prop_assert_eq!(sum, (ring.char_e_exponent(&x) + ring.char_e_exponent(&y)) % 3);
    }

    #[test]
    fn norm_is_multiplicative(x in (small(), small()), y in (small(), small())) {
        let o = order();
        let (x, y) = (quad(&o, x), quad(&o, y));
        prop_assert_eq!(o.norm(&o.mul(&x, &y)), o.ring().mul(&o.norm(&x), &o.norm(&y)));
    }

    #[test]
    fn torus_norm_is_min_over_translates(a in small(), b in small(), da in 0u64..8, db in 0u64..8) {
        let o = order();
        let h = QuadRat { re: rat(&o, a, da), im: rat(&o, b, db) };
        let bound = 2 + h.re.den().deg().unwrap().max(h.im.den().deg().unwrap()) as i64;
        let brute = o.ring().enumerate_polys(bound)
            .flat_map(|u| o.ring().enumerate_polys(bound).map(move |v| (u.clone(), v)))
            .map(|(u, v)| {
                let shifted = o.rat_sub(&h, &o.to_rat(&QuadInt::new(u, v)));
                o.abs2_exponent(&shifted)
            })
            .min()
            .unwrap();
        prop_assert_eq!(o.torus_norm_t(&h), brute);
    }

    #[test]
    fn sigma_is_well_defined_and_additive(
        f in nonzero_modulus(), r in (small(), small()), k in (small(), 0u64..9),
        g1 in (small(), small()), g2 in (small(), small()),
    ) {
        let o = order();
        let (f, r, k) = (quad(&o, f), quad(&o, r), quad(&o, k));
        let (g1, g2) = (quad(&o, g1), quad(&o, g2));
        let e = |g: &QuadInt, r: &QuadInt| o.sigma_exponent(g, r, &f).unwrap();
        let shifted_r = o.add(&r, &o.mul(&k, &f));
        let shifted_g = o.add(&g1, &o.mul(&k, &f));
        prop_assert_eq!(e(&g1, &shifted_r), e(&g1, &r));
        prop_assert_eq!(e(&shifted_g, &r), e(&g1, &r));
        prop_assert_eq!(e(&o.add(&g1, &g2), &r), (e(&g1, &r) + e(&g2, &r)) % 3);
        prop_assert_eq!(e(&g1, &r), o.sigma_exponent_direct(&g1, &r, &f).unwrap());
    }

    #[test]
    fn character_orthogonality(f in nonzero_modulus(), g in (0u64..9, 0u64..9), g2 in (0u64..9, 0u64..9)) {
        let o = order();
        let f = quad(&o, f);
        let diff = o.sub(&quad(&o, g), &quad(&o, g2));
        let rs = o.residue_system(&f).unwrap();
        let mut s = ffsieve::CharSum::empty(3);
        for r in rs.reps() {
            s.push(o.sigma_exponent(&diff, &r, &f).unwrap());
        }
        let expect = if o.divides(&f, &diff) { rs.size() as i64 } else { 0 };
        prop_assert_eq!(s.to_cyclo().as_integer(), Some(expect));
    }

    #[test]
    fn one_dimensional_orthogonality(m in 1u64..27, a in small()) {
        let o = order();
        let ring = o.ring();
        let m = poly(&o, m);
        let a = poly(&o, a);
        let mut s = ffsieve::CharSum::empty(3);
        for r in ring.enumerate_polys(m.deg().unwrap() as i64 - 1) {
            s.push(ring.char_e_exponent(&ring.ratfun(ring.mul(&a, &r), m.clone()).unwrap()));
        }
        let expect = if ring.rem(&a, &m).unwrap().is_zero() { s.total() as i64 } else { 0 };
        prop_assert_eq!(s.to_cyclo().as_integer(), Some(expect));
    }

    #[test]
    fn big_t_is_rotation_invariant(seed in any::<u64>(), k in 1u32..3, n in 1i64..3) {
        let o = order();
        let c = CoeffFamily::new(&o, CoeffKind::RandomUnit(seed), n).unwrap();
        let set = ModuliSet::new(ModuliKind::All, 1);
        prop_assert_eq!(big_t(&o, &c, &set).unwrap(), big_t(&o, &c.rotate(k), &set).unwrap());
    }

    #[test]
    fn linear_sum_dichotomy(a in small(), b in small(), da in 0u64..8, db in 0u64..8, x in 1i64..4) {
        let o = order();
        let h = QuadRat { re: rat(&o, a, da), im: rat(&o, b, db) };
        let s = sigma_linear(&o, x, &h).unwrap();
        prop_assert!(s.agree());
        let abs2 = s.direct.abs2_exact().to_cyclo().as_integer().unwrap();
        prop_assert!(abs2 <= 3i64.pow(2 * x as u32 + 4));
        if o.torus_norm_t(&h) > Some(linear_sum_threshold(&o, x)) {
            prop_assert!(s.direct.is_zero());
        }
    }

    #[test]
    fn weyl_identity(j in (0u64..9, 0u64..3), r1 in (0u64..9, 0u64..3), f1 in nonzero_modulus(), qhalf in 0i64..2) {
        let o = order();
        let w = weyl_identity_check(&o, &quad(&o, j), &quad(&o, r1), &quad(&o, f1), qhalf).unwrap();
        prop_assert!(w.holds());
    }
}

#[test]
fn squares_count_each_modulus_twice() {
    // only ±f square to the same element, so the f-indexed sum doubles T over squares
    let o = order();
    for seed in 0..3 {
        let c = CoeffFamily::new(&o, CoeffKind::RandomUnit(seed), 2).unwrap();
        for big_q in 0..=1 {
            let lhs = squares_lhs(&o, &c, big_q).unwrap();
            let t = big_t(&o, &c, &ModuliSet::new(ModuliKind::Squares, 2 * big_q)).unwrap();
            assert_eq!(lhs.as_exact().unwrap(), &t.as_exact().unwrap().scale(2));
        }
    }
}
