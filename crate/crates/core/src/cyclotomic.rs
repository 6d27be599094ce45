//! Exact arithmetic in `Z[ζ_p]`.
//!
//! Values are stored in the integral basis `{ζ, ζ^2, …, ζ^(p-1)}`; the
//! constant `1` is rewritten as `-(ζ + … + ζ^(p-1))`. With that basis there
//! is no redundancy, so equality is plain coefficient equality.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::gf::legendre;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("operands live in Z[ζ_{left}] and Z[ζ_{right}]")]
    MixedPrimes { left: u32, right: u32 },
    #[error("{a} is not a unit modulo {p}")]
    NonUnit { a: i64, p: u32 },
    #[error("coefficient overflow")]
    Overflow,
    #[error("value is not a rational integer")]
    NotRational,
}

/// An element of `Z[ζ_p]` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u32,
    /// `coeffs[i - 1]` multiplies `ζ^i`.
    coeffs: Vec<i64>,
}

/// `p* = (-1)^((p-1)/2) p`.
pub fn pstar(p: u32) -> i64 {
    crate::gf::minus_one_symbol(p) as i64 * p as i64
}

impl CycInt {
    pub fn zero(p: u32) -> CycInt {
        assert!(p >= 2, "p must be prime");
        CycInt {
            p,
            coeffs: vec![0; (p - 1) as usize],
        }
    }

    pub fn from_integer(p: u32, n: i64) -> CycInt {
        assert!(p >= 2, "p must be prime");
        CycInt {
            p,
            coeffs: vec![-n; (p - 1) as usize],
        }
    }

    pub fn one(p: u32) -> CycInt {
        CycInt::from_integer(p, 1)
    }

    /// `ζ_p^e`; `e` is reduced modulo `p`.
    pub fn from_root_power(p: u32, e: i64) -> CycInt {
        let e = e.rem_euclid(p as i64) as usize;
        if e == 0 {
            return CycInt::one(p);
        }
        let mut z = CycInt::zero(p);
        z.coeffs[e - 1] = 1;
        z
    }

    /// `sum_e counts[e] ζ^e` for a length-`p` count vector.
    pub fn from_exponent_counts(p: u32, counts: &[i64]) -> CycInt {
        assert_eq!(counts.len(), p as usize, "need one count per residue");
        let c0 = counts[0];
        CycInt {
            p,
            coeffs: counts[1..].iter().map(|&c| c - c0).collect(),
        }
    }

    /// Builds a value directly from canonical coefficients of `ζ^1..ζ^(p-1)`.
    pub fn from_coeffs(p: u32, coeffs: Vec<i64>) -> CycInt {
        assert_eq!(coeffs.len() + 1, p as usize, "need p - 1 coefficients");
        CycInt { p, coeffs }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same_prime(&self, other: &CycInt) -> Result<(), CycError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(CycError::MixedPrimes {
                left: self.p,
                right: other.p,
            })
        }
    }

    pub fn checked_add(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.same_prime(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(CycError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn checked_sub(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.same_prime(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_sub(*b).ok_or(CycError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn checked_mul(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.same_prime(other)?;
        let p = self.p as usize;
        let mut acc = vec![0i64; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let e = (i + 1 + j + 1) % p;
                let t = a.checked_mul(b).ok_or(CycError::Overflow)?;
                acc[e] = acc[e].checked_add(t).ok_or(CycError::Overflow)?;
            }
        }
        canonical(self.p, &acc)
    }

    pub fn scale(&self, n: i64) -> Result<CycInt, CycError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.checked_mul(n).ok_or(CycError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    /// Multiplication by `ζ^e`: a rotation of the exponents.
    pub fn mul_root_power(&self, e: i64) -> Result<CycInt, CycError> {
        let p = self.p as usize;
        let shift = e.rem_euclid(p as i64) as usize;
        let mut acc = vec![0i64; p];
        for (i, &c) in self.coeffs.iter().enumerate() {
            acc[(i + 1 + shift) % p] = c;
        }
        canonical(self.p, &acc)
    }

    /// The automorphism `σ_a : ζ ↦ ζ^a`.
    pub fn galois(&self, a: i64) -> Result<CycInt, CycError> {
        let p = self.p as i64;
        let a = a.rem_euclid(p);
        if a == 0 {
            return Err(CycError::NonUnit { a, p: self.p });
        }
        let mut coeffs = vec![0i64; self.coeffs.len()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = ((i as i64 + 1) * a).rem_euclid(p) as usize;
            coeffs[j - 1] = c;
        }
        Ok(CycInt { p: self.p, coeffs })
    }

    /// Complex conjugate, i.e. `σ_{p-1}`.
    pub fn conj(&self) -> CycInt {
        self.galois(self.p as i64 - 1)
            .expect("p - 1 is a unit modulo p")
    }

    /// `z · conj(z)`.
    pub fn abs_square(&self) -> Result<CycInt, CycError> {
        self.checked_mul(&self.conj())
    }

    pub fn as_rational_integer(&self) -> Result<i64, CycError> {
        let first = self.coeffs.first().copied().unwrap_or(0);
        if self.coeffs.iter().all(|&c| c == first) {
            Ok(-first)
        } else {
            Err(CycError::NotRational)
        }
    }

    pub fn pow(&self, e: u32) -> Result<CycInt, CycError> {
        (0..e).try_fold(CycInt::one(self.p), |acc, _| acc.checked_mul(self))
    }
}

/// Reduces a redundant length-`p` exponent vector to canonical form.
fn canonical(p: u32, acc: &[i64]) -> Result<CycInt, CycError> {
    let c0 = acc[0];
    let coeffs = acc[1..]
        .iter()
        .map(|c| c.checked_sub(c0).ok_or(CycError::Overflow))
        .collect::<Result<_, _>>()?;
    Ok(CycInt { p, coeffs })
}

/// The quadratic Gauss sum `sum_{x in F_p^×} (x/p) ζ^x`, which squares to `p*`.
pub fn gauss_sum(p: u32) -> CycInt {
    let coeffs = (1..p)
        .map(|x| legendre(x, p).expect("x is nonzero") as i64)
        .collect();
    CycInt { p, coeffs }
}

/// `sqrt(p*)^m`, realised as `gauss_sum(p)^m`.
pub fn sqrt_pstar_pow(p: u32, m: u32) -> Result<CycInt, CycError> {
    gauss_sum(p).pow(m)
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Ok(n) = self.as_rational_integer() {
            return write!(f, "{n}");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first && c > 0 {
                f.write_str("+")?;
            }
            match c {
                1 => {}
                -1 => f.write_str("-")?,
                c => write!(f, "{c}")?,
            }
            write!(f, "ζ^{}", i + 1)?;
            first = false;
        }
        Ok(())
    }
}

// Operator forms panic on mixed primes or overflow; use the `checked_*`
// methods where either can happen.

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.checked_add(rhs).expect("CycInt addition")
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.checked_sub(rhs).expect("CycInt subtraction")
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.checked_mul(rhs).expect("CycInt multiplication")
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        self.scale(-1).expect("CycInt negation")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta(p: u32) -> CycInt {
        CycInt::from_root_power(p, 1)
    }

    #[test]
    fn root_powers() {
        assert_eq!(CycInt::from_root_power(3, 1).coeffs(), &[1, 0]);
        assert_eq!(CycInt::from_root_power(3, 0).coeffs(), &[-1, -1]);
        assert_eq!(CycInt::from_root_power(5, 4).coeffs(), &[0, 0, 0, 1]);
        assert_eq!(CycInt::from_root_power(5, -1), CycInt::from_root_power(5, 4));
    }

    #[test]
    fn ring_basics() {
        let z = zeta(7);
        assert!((&z + &(-&z)).is_zero());
        assert_eq!(&z * &CycInt::from_root_power(7, 6), CycInt::one(7));
        let d = &zeta(3) - &CycInt::from_root_power(3, 2);
        assert_eq!((&d * &d).as_rational_integer(), Ok(-3));
    }

    #[test]
    fn mixed_primes_rejected() {
        assert_eq!(
            zeta(3).checked_add(&zeta(5)),
            Err(CycError::MixedPrimes { left: 3, right: 5 })
        );
        assert!(zeta(3).checked_mul(&zeta(5)).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let big = CycInt::from_integer(3, i64::MAX / 2);
        assert_eq!(big.checked_mul(&big), Err(CycError::Overflow));
        assert_eq!(big.scale(4), Err(CycError::Overflow));
    }

    #[test]
    fn galois_action() {
        let z = &zeta(5) + &CycInt::from_root_power(5, 3).scale(4).unwrap();
        assert_eq!(z.galois(1).unwrap(), z);
        assert_eq!(z.galois(0), Err(CycError::NonUnit { a: 0, p: 5 }));
        let d = &zeta(3) - &CycInt::from_root_power(3, 2);
        assert_eq!(d.galois(2).unwrap(), -&d);
    }

    #[test]
    fn gauss_sum_squares() {
        let g3 = gauss_sum(3);
        assert_eq!(g3, &zeta(3) - &CycInt::from_root_power(3, 2));
        assert_eq!((&g3 * &g3).as_rational_integer(), Ok(-3));
        let g5 = gauss_sum(5);
        assert_eq!((&g5 * &g5).as_rational_integer(), Ok(5));
        let g7 = gauss_sum(7);
        assert_eq!((&g7 * &g7).as_rational_integer(), Ok(-7));
    }

    #[test]
    fn sqrt_pstar_powers() {
        assert_eq!(sqrt_pstar_pow(3, 2).unwrap().as_rational_integer(), Ok(-3));
        assert_eq!(sqrt_pstar_pow(3, 0).unwrap(), CycInt::one(3));
        assert_eq!(sqrt_pstar_pow(5, 4).unwrap().as_rational_integer(), Ok(25));
        assert!(sqrt_pstar_pow(3, 3).unwrap().as_rational_integer().is_err());
    }

    #[test]
    fn abs_squares() {
        assert_eq!(zeta(5).abs_square().unwrap(), CycInt::one(5));
        assert_eq!(gauss_sum(3).abs_square().unwrap().as_rational_integer(), Ok(3));
        assert!(CycInt::zero(7).abs_square().unwrap().is_zero());
    }

    #[test]
    fn rational_detection() {
        assert_eq!(CycInt::one(5).as_rational_integer(), Ok(1));
        assert_eq!(zeta(5).as_rational_integer(), Err(CycError::NotRational));
    }

    #[test]
    fn display() {
        assert_eq!(alloc::format!("{}", CycInt::from_integer(5, -9)), "-9");
        assert_eq!(alloc::format!("{}", gauss_sum(3)), "ζ^1-ζ^2");
    }
}
