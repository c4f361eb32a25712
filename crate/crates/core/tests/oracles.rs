//! Brute-force cross-checks that share no code path with the library's
//! fast routines.

use ffsieve::sieve::{kappa, tau_divisors, CoeffFamily, CoeffKind, ModuliKind, ModuliSet};
use ffsieve::{big_t, u_sum, FiniteField, PolyRing, QuadInt, QuadOrder};

fn order(p: u32) -> QuadOrder {
    let ring = PolyRing::new(FiniteField::prime(p).unwrap());
    let alpha = ring.parse_poly("0,1").unwrap();
    QuadOrder::new(ring, &alpha).unwrap()
}

#[test]
fn residue_systems_are_complete_and_irredundant() {
    let o = order(3);
    for d in 0..=3 {
        for f in o.elements_with_d(d) {
            let reps: Vec<QuadInt> = o.residue_system(&f).unwrap().reps().collect();
            assert_eq!(reps.len() as i64, 3i64.pow(d as u32));
            for (i, a) in reps.iter().enumerate() {
                for b in &reps[..i] {
                    assert!(!o.divides(&f, &o.sub(a, b)), "{a} ≡ {b} mod {f}");
                }
            }
        }
    }
}

#[test]
fn unit_counts_match_search_for_inverses() {
    let o = order(3);
    for d in 0..=2 {
        for f in o.elements_with_d(d) {
            let rs = o.residue_system(&f).unwrap();
            let reps: Vec<QuadInt> = rs.reps().collect();
            let brute = reps
                .iter()
                .filter(|r| reps.iter().any(|s| o.divides(&f, &o.sub(&o.mul(r, s), &QuadInt::one()))))
                .count();
            assert_eq!(o.unit_count(&f).unwrap(), brute as u64, "f = {f}");
        }
    }
}

#[test]
fn tau_matches_divisor_count_over_units() {
    let o = order(3);
    let units = o.units().len();
    for l in o.ball(3).skip(1) {
        let dl = o.big_d(&l).unwrap();
        let all = o.ball(dl).filter(|d| !d.is_zero() && o.divides(d, &l)).count();
        assert_eq!(all % units, 0);
        assert_eq!(tau_divisors(&o, &l).unwrap(), (all / units) as u64, "l = {l}");
    }
}

/// 𝒦 from the distance form `𝐍(r₁/f₁ − r₂/f₂) ≤ q^{ℓ−(N+4)}`, searching `r₂`
/// in a ball large enough to hold every candidate.
fn kappa_by_distance(o: &QuadOrder, set: &ModuliSet, n: i64) -> u64 {
    let members = set.members(o);
    let bound = o.ell() - (n + 4);
    let mut best = 0;
    for f1 in &members {
        for r1 in o.residue_system(f1).unwrap().units() {
            let x1 = o.fraction(&r1, f1).unwrap();
            let radius = o.big_d(&r1).unwrap_or(0).max(set.big_q + bound);
            let mut count = 0;
            for f2 in &members {
                let sys2 = o.residue_system(f2).unwrap();
                for r2 in o.ball(radius) {
                    let dist = o.abs2_exponent(&o.rat_sub(&x1, &o.fraction(&r2, f2).unwrap()));
                    if dist <= Some(bound) && sys2.is_unit(&r2) {
                        count += 1;
                    }
                }
            }
            best = best.max(count);
        }
    }
    best
}

#[test]
fn kappa_matches_distance_form() {
    let o = order(3);
    for (kind, big_q, n) in [
        (ModuliKind::All, 1, 2),
        (ModuliKind::All, 1, 0),
        (ModuliKind::All, 2, 3),
        (ModuliKind::Squares, 2, 1),
        (ModuliKind::Squares, 2, 5),
    ] {
        let set = ModuliSet::new(kind, big_q);
        assert_eq!(kappa(&o, &set, n).unwrap().value, kappa_by_distance(&o, &set, n), "{kind} Q={big_q} N={n}");
    }
}

#[test]
fn big_t_matches_term_by_term_complex_sum() {
    let o = order(5);
    let c = CoeffFamily::new(&o, CoeffKind::RandomUnit(11), 2).unwrap();
    let set = ModuliSet::new(ModuliKind::All, 1);
    let mut oracle = 0.0;
    for f in set.members(&o) {
        for r in o.residue_system(&f).unwrap().units() {
            let mut s = num_complex::Complex64::new(0.0, 0.0);
            for (i, g) in c.points().iter().enumerate() {
                let k = o.sigma_exponent_direct(g, &r, &f).unwrap();
                s += c.value(i) * num_complex::Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 5.0);
            }
            oracle += s.norm_sqr();
        }
    }
    let t = big_t(&o, &c, &set).unwrap().to_f64();
    assert!((t - oracle).abs() < 1e-9 * oracle.max(1.0), "{t} vs {oracle}");
}

#[test]
fn complex_coefficients_follow_exact_path() {
    let o = order(3);
    let exact = CoeffFamily::new(&o, CoeffKind::RandomUnit(4), 2).unwrap();
    let listed: Vec<_> = (0..exact.len()).map(|i| exact.value(i)).collect();
    let float = CoeffFamily::new(&o, CoeffKind::User(listed), 2).unwrap();
    let set = ModuliSet::new(ModuliKind::All, 2);
    let a = big_t(&o, &exact, &set).unwrap().to_f64();
    let b = big_t(&o, &float, &set).unwrap().to_f64();
    assert!((a - b).abs() < 1e-9 * a);
}

#[test]
fn u_sum_stays_below_majorant_scale() {
    let o = order(3);
    for f in o.elements_with_d(2) {
        for r in o.residue_system(&f).unwrap().units() {
            for (x, y) in [(1, 0), (1, 2), (2, 1), (3, 2)] {
                let u = u_sum(&o, x, y, &f, &r).unwrap();
                // every nonzero Σ(X, h) has modulus at most q^{X+2}
                assert!(u.value <= u.nonzero_terms as f64 * 3f64.powi(x as i32 + 2));
                assert!(u.value.is_finite() && u.majorant > 0.0);
            }
        }
    }
}

#[test]
fn residues_give_distinct_characters() {
    let o = order(3);
    for d in 0..=2 {
        for f in o.elements_with_d(d) {
            let reps: Vec<QuadInt> = o.residue_system(&f).unwrap().reps().collect();
            let tables: std::collections::HashSet<Vec<i64>> = reps
                .iter()
                .map(|r| reps.iter().map(|g| o.sigma_exponent_direct(g, r, &f).unwrap() as i64).collect())
                .collect();
            assert_eq!(tables.len(), reps.len(), "f = {f}");
        }
    }
}
