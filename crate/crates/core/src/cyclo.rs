//! Exact elements of the cyclotomic ring `Z[ζ_p]`.
//!
//! An element is stored as a coefficient vector over `1, ζ, …, ζ^{p-1}`.
//! Because `1 + ζ + … + ζ^{p-1} = 0`, such vectors are only defined up to
//! adding a constant vector; the canonical form has the last coefficient
//! equal to zero, which makes equality structural.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    coeffs: Vec<i64>,
}

impl Cyclo {
    pub fn zero(p: u32) -> Self {
        Self { coeffs: vec![0; p as usize] }
    }

    pub fn from_int(p: u32, n: i64) -> Self {
        let mut c = Self::zero(p);
        c.coeffs[0] = n;
        c.normalize();
        c
    }

    /// `ζ^k`.
    pub fn zeta_pow(p: u32, k: u32) -> Self {
        let mut c = Self::zero(p);
        c.coeffs[(k % p) as usize] = 1;
        c.normalize();
        c
    }

    /// Builds from an arbitrary (not necessarily canonical) coefficient vector.
    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        assert!(!coeffs.is_empty());
        let mut c = Self { coeffs };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        let last = *self.coeffs.last().unwrap();
        if last != 0 {
            for c in &mut self.coeffs {
                *c -= last;
            }
        }
    }

    pub fn p(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Returns `Some(n)` when the element is the rational integer `n`.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let p = self.coeffs.len();
        let mut out = vec![0; p];
        for (j, &c) in self.coeffs.iter().enumerate() {
            out[(p - j) % p] += c;
        }
        Self::from_coeffs(out)
    }

    /// Multiplication by `ζ^k`.
    pub fn rotate(&self, k: u32) -> Self {
        let p = self.coeffs.len();
        let mut out = vec![0; p];
        for (j, &c) in self.coeffs.iter().enumerate() {
            out[(j + k as usize) % p] += c;
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, n: i64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&c| c * n).collect())
    }

    /// Divides by `n` if every canonical coefficient is a multiple of `n`.
    pub fn div_exact(&self, n: i64) -> Option<Self> {
        if n == 0 || self.coeffs.iter().any(|&c| c % n != 0) {
            return None;
        }
        Some(Self::from_coeffs(self.coeffs.iter().map(|&c| c / n).collect()))
    }

    pub fn to_complex(&self) -> Complex64 {
        let p = self.coeffs.len() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| Complex64::from_polar(c as f64, std::f64::consts::TAU * j as f64 / p))
            .sum()
    }

    /// `|z|²` as an exact ring element (always real).
    pub fn abs2(&self) -> Self {
        self.clone() * self.conj()
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo{:?}", self.coeffs)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}ζ")?,
                _ => write!(f, "{c}ζ^{j}")?,
            }
        }
        Ok(())
    }
}

impl Add for Cyclo {
    type Output = Cyclo;
    fn add(mut self, rhs: Cyclo) -> Cyclo {
        self += &rhs;
        self
    }
}

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &Cyclo) {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len(), "mismatched characteristic");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self.normalize();
    }
}

impl Sub for Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: Cyclo) -> Cyclo {
        self + (-rhs)
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Self::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: Cyclo) -> Cyclo {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len(), "mismatched characteristic");
        let p = self.coeffs.len();
        let mut out = vec![0i64; p];
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[(i + j) % p] += a * b;
            }
        }
        Self::from_coeffs(out)
    }
}
