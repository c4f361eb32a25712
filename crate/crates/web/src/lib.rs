//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes plain numbers and strings and returns a JSON string,
//! so the page needs no generated type glue beyond `wasm-bindgen`'s own.

use std::collections::BTreeSet;

use ffsieve::{
    sieve_report, sigma_linear, CoeffFamily, CoeffKind, FiniteField, ModuliKind, PolyRing, QuadInt, QuadOrder,
    QuadRat,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn order(q: u32, alpha: &str) -> Result<QuadOrder, String> {
    let ring = PolyRing::new(FiniteField::prime(q).map_err(|e| format!("q: {e}"))?);
    let alpha = ring.parse_poly(alpha).map_err(|e| format!("alpha: {e}"))?;
    QuadOrder::new(ring, &alpha).map_err(|e| format!("alpha: {e}"))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Sieve reports over `1 ≤ Q ≤ q_max`, `1 ≤ N ≤ n_max` for one coefficient family.
pub fn sieve_sweep_json(
    q: u32,
    alpha: &str,
    moduli: &str,
    q_max: i64,
    n_max: i64,
    coeffs: &str,
    seed: u64,
) -> Result<String, String> {
    let o = order(q, alpha)?;
    let kind: ModuliKind = moduli.parse().map_err(|e| format!("moduli: {e}"))?;
    let coeffs = match coeffs {
        "ones" => CoeffKind::Ones,
        "delta" => CoeffKind::Delta(QuadInt::zero()),
        "random" => CoeffKind::RandomUnit(seed),
        other => return Err(format!("coeffs: unknown family {other:?}")),
    };
    let mut rows = Vec::new();
    for big_q in 1..=q_max {
        for n in 1..=n_max {
            let family = CoeffFamily::new(&o, coeffs.clone(), n).map_err(|e| e.to_string())?;
            rows.push(sieve_report(&o, &family, kind, big_q).map_err(|e| e.to_string())?);
        }
    }
    to_json(&rows)
}

#[derive(Serialize)]
struct LinearPoint {
    x: i64,
    h: String,
    torus_exponent: Option<i64>,
    threshold: i64,
    abs: f64,
}

/// `|Σ(X, h)|` for every `h = γr/f` with `𝐃(γ), 𝐃(f) ≤ grid` and `X ≤ x_max`.
pub fn linear_sums_json(q: u32, alpha: &str, x_max: i64, grid: i64) -> Result<String, String> {
    let o = order(q, alpha)?;
    let mut hs: BTreeSet<QuadRat> = BTreeSet::new();
    let gammas: Vec<QuadInt> = o.ball(grid).collect();
    for f in o.ball(grid).skip(1) {
        for r in o.residue_system(&f).map_err(|e| e.to_string())?.reps() {
            for g in &gammas {
                hs.insert(o.fraction(&o.mul(g, &r), &f).map_err(|e| e.to_string())?);
            }
        }
    }
    let mut points = Vec::new();
    for x in 1..=x_max {
        for h in &hs {
            let s = sigma_linear(&o, x, h).map_err(|e| e.to_string())?;
            points.push(LinearPoint {
                x,
                h: h.to_string(),
                torus_exponent: o.torus_norm_t(h),
                threshold: o.ell() - x - 1,
                abs: s.direct.abs(),
            });
        }
    }
    to_json(&points)
}

#[derive(Serialize)]
struct AlphaCheck {
    accepted: bool,
    ell: Option<i64>,
    reason: Option<String>,
}

/// Whether `α` defines an imaginary quadratic extension, and why not.
pub fn validate_alpha_json(q: u32, alpha: &str) -> Result<String, String> {
    let ring = PolyRing::new(FiniteField::prime(q).map_err(|e| format!("q: {e}"))?);
    let alpha = ring.parse_poly(alpha).map_err(|e| format!("alpha: {e}"))?;
    let check = match ffsieve::quadext::validate_alpha(&ring, &alpha) {
        Ok(spec) => AlphaCheck { accepted: true, ell: Some(spec.ell()), reason: None },
        Err(e) => AlphaCheck { accepted: false, ell: None, reason: Some(e.to_string()) },
    };
    to_json(&check)
}

#[wasm_bindgen]
pub fn sieve_sweep(
    q: u32,
    alpha: &str,
    moduli: &str,
    q_max: i32,
    n_max: i32,
    coeffs: &str,
    seed: u32,
) -> Result<String, JsError> {
    sieve_sweep_json(q, alpha, moduli, q_max.into(), n_max.into(), coeffs, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn linear_sums(q: u32, alpha: &str, x_max: i32, grid: i32) -> Result<String, JsError> {
    linear_sums_json(q, alpha, x_max.into(), grid.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn validate_alpha(q: u32, alpha: &str) -> Result<String, JsError> {
    validate_alpha_json(q, alpha).map_err(|e| JsError::new(&e))
}
