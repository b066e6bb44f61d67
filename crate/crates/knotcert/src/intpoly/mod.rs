//! Exact integer and Laurent polynomial algebra.
//!
//! `IntPoly` is a dense univariate polynomial over arbitrary-precision
//! integers, stored lowest degree first; the canonical form has no trailing
//! zero and the zero polynomial is the empty vector. `LaurentPoly` pairs an
//! `IntPoly` with a minimum exponent and is canonical when the stored first
//! and last coefficients are nonzero.

mod det;
mod interp;

pub use det::poly_det;
pub(crate) use det::int_det;
pub use interp::{interpolate, interpolate_consecutive};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("matrix is not square")]
    NonSquare,
    #[error("matrix entry ({0},{1}) exceeds the stated degree or coefficient bound")]
    EntryBound(usize, usize),
    #[error("interpolation nodes must be distinct")]
    RepeatedNode,
    #[error("interpolation through an empty point set")]
    NoPoints,
    #[error("interpolant has non-integer coefficients")]
    NonIntegralInterpolant,
    #[error("gcd of an all-zero family")]
    AllZero,
    #[error("input polynomial is zero")]
    ZeroInput,
    #[error("polynomial is not symmetrizable: {0}")]
    NotSymmetric(&'static str),
    #[error("|f(1)| = {0}, expected 1")]
    UnitValue(BigInt),
}

/// Dense integer polynomial, coefficients lowest degree first.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// The monomial c * t^k.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Largest absolute value of any coefficient.
    pub fn max_norm(&self) -> BigUint {
        self.coeffs
            .iter()
            .map(|c| c.magnitude().clone())
            .max()
            .unwrap_or_else(BigUint::zero)
    }

    /// Gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigUint {
        self.coeffs
            .iter()
            .fold(BigUint::zero(), |acc, c| acc.gcd(c.magnitude()))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let content = BigInt::from(self.content());
        let mut out: Vec<BigInt> = self.coeffs.iter().map(|c| c / &content).collect();
        if out.last().unwrap().is_negative() {
            for c in &mut out {
                *c = -&*c;
            }
        }
        IntPoly { coeffs: out }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    /// Multiplication by t^k.
    pub fn shift_up(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        IntPoly { coeffs }
    }

    /// Number of trailing zero coefficients, i.e. the largest k with t^k | f.
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Exact division; None when the remainder is nonzero or divisor is zero.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let n = self.coeffs.len();
        let m = divisor.coeffs.len();
        if n < m {
            return None;
        }
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); n - m + 1];
        for i in (0..=n - m).rev() {
            let top = std::mem::take(&mut rem[i + m - 1]);
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for j in 0..m - 1 {
                let sub = &q * &divisor.coeffs[j];
                rem[i + j] -= sub;
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(quot))
    }

    /// Pseudo-remainder: lc(g)^(deg f - deg g + 1) * f = q*g + r with deg r < deg g.
    fn pseudo_rem(&self, g: &IntPoly) -> IntPoly {
        debug_assert!(!g.is_zero());
        let dg = g.coeffs.len() - 1;
        let lead = g.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        while rem.len() > dg && !rem.is_empty() {
            let top = rem.last().unwrap().clone();
            if top.is_zero() {
                rem.pop();
                continue;
            }
            let shift = rem.len() - 1 - dg;
            for c in rem.iter_mut() {
                *c = &*c * &lead;
            }
            for j in 0..=dg {
                let sub = &top * &g.coeffs[j];
                rem[shift + j] -= sub;
            }
            while rem.last().map_or(false, |c| c.is_zero()) {
                rem.pop();
            }
        }
        IntPoly::new(rem)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                first = false;
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.magnitude();
            if i == 0 || !mag.is_one() {
                write!(f, "{}", mag)?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{}", i)?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        IntPoly::new(out)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

/// Gcd of a family of integer polynomials, computed by folding pairwise gcds.
///
/// The result is primitive (content 1) with positive leading coefficient.
/// Every intermediate gcd divides the first nonzero input, so its max-norm is
/// checked in debug builds against the Mignotte divisor bound
/// (d+1)^(1/2) 2^d C of that input.
pub fn poly_gcd(polys: &[IntPoly]) -> Result<IntPoly, PolyError> {
    let mut acc = IntPoly::zero();
    let mut bound: Option<BigUint> = None;
    for f in polys {
        acc = gcd_pair(&acc, f);
        if bound.is_none() && !f.is_zero() {
            bound = Some(mignotte_divisor_bound(f));
        }
        if let Some(b) = &bound {
            debug_assert!(
                acc.max_norm() <= *b,
                "intermediate gcd exceeds the Mignotte bound"
            );
        }
    }
    if acc.is_zero() {
        return Err(PolyError::AllZero);
    }
    Ok(acc)
}

/// Mignotte bound on the max-norm of any divisor of f: (d+1)^(1/2) 2^d ||f||.
/// Returned as the integer floor of an upper bound (we compare squares).
fn mignotte_divisor_bound(f: &IntPoly) -> BigUint {
    let d = f.degree().unwrap_or(0) as u32;
    let norm = f.max_norm();
    // ceil(sqrt(d+1)) * 2^d * norm is a safe integer upper bound
    let root = BigUint::from(d + 1).sqrt() + 1u32;
    root * (BigUint::one() << d) * norm
}

fn gcd_pair(f: &IntPoly, g: &IntPoly) -> IntPoly {
    if f.is_zero() {
        return g.primitive();
    }
    if g.is_zero() {
        return f.primitive();
    }
    let (mut a, mut b) = if f.coeffs.len() >= g.coeffs.len() {
        (f.primitive(), g.primitive())
    } else {
        (g.primitive(), f.primitive())
    };
    // primitive polynomial remainder sequence
    while !b.is_zero() {
        let r = a.pseudo_rem(&b).primitive();
        a = b;
        b = r;
    }
    a.primitive()
}

/// Laurent polynomial: poly * t^min_exp.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    min_exp: i64,
    poly: IntPoly,
}

impl LaurentPoly {
    pub fn new(min_exp: i64, poly: IntPoly) -> Self {
        if poly.is_zero() {
            return LaurentPoly {
                min_exp: 0,
                poly: IntPoly::zero(),
            };
        }
        let k = poly.trailing_zeros();
        if k == 0 {
            return LaurentPoly { min_exp, poly };
        }
        LaurentPoly {
            min_exp: min_exp + k as i64,
            poly: IntPoly::new(poly.coeffs[k..].to_vec()),
        }
    }

    pub fn zero() -> Self {
        LaurentPoly::new(0, IntPoly::zero())
    }

    pub fn one() -> Self {
        LaurentPoly::new(0, IntPoly::one())
    }

    pub fn from_poly(poly: IntPoly) -> Self {
        LaurentPoly::new(0, poly)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.min_exp == 0 && self.poly == IntPoly::one()
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn max_exp(&self) -> i64 {
        self.min_exp + self.poly.degree().unwrap_or(0) as i64
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        if e < self.min_exp {
            return BigInt::zero();
        }
        self.poly.coeff((e - self.min_exp) as usize)
    }

    /// Value at t = 1.
    pub fn eval_one(&self) -> BigInt {
        self.poly.coeffs().iter().sum()
    }

    /// Value at t = -1 (well defined since (-1)^(-1) = -1).
    pub fn eval_neg_one(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, c) in self.poly.coeffs().iter().enumerate() {
            let e = self.min_exp + i as i64;
            if e.rem_euclid(2) == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc
    }

    /// The substitution t -> 1/t.
    pub fn invert_variable(&self) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = self.poly.coeffs().to_vec();
        coeffs.reverse();
        LaurentPoly::new(-self.max_exp(), IntPoly::new(coeffs))
    }

    /// True when f(t) = f(1/t) exactly.
    pub fn is_symmetric(&self) -> bool {
        *self == self.invert_variable()
    }

    pub fn mul(&self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::new(self.min_exp + rhs.min_exp, &self.poly * &rhs.poly)
    }

    pub fn sub(&self, rhs: &LaurentPoly) -> LaurentPoly {
        let min = self.min_exp.min(rhs.min_exp);
        let a = self.poly.shift_up((self.min_exp - min) as usize);
        let b = rhs.poly.shift_up((rhs.min_exp - min) as usize);
        LaurentPoly::new(min, &a - &b)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{} * ({:?})", self.min_exp, self.poly)
    }
}

/// Wire form of a Laurent polynomial: minimum exponent plus decimal-string
/// coefficients, lowest degree first.
#[derive(Serialize, Deserialize)]
pub struct LaurentPolyJson {
    pub minexp: i64,
    pub coeffs: Vec<String>,
}

impl From<&LaurentPoly> for LaurentPolyJson {
    fn from(p: &LaurentPoly) -> Self {
        LaurentPolyJson {
            minexp: p.min_exp,
            coeffs: p.poly.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl TryFrom<&LaurentPolyJson> for LaurentPoly {
    type Error = num_bigint::ParseBigIntError;
    fn try_from(j: &LaurentPolyJson) -> Result<Self, Self::Error> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LaurentPoly::new(j.minexp, IntPoly::new(coeffs)))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LaurentPolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = LaurentPolyJson::deserialize(d)?;
        LaurentPoly::try_from(&j).map_err(serde::de::Error::custom)
    }
}

/// Normalizes a Laurent polynomial to the symmetric representative with
/// value 1 at t = 1.
///
/// The input must be a unit multiple of a symmetric polynomial with
/// |f(1)| = 1; anything else is reported as an error since it cannot be an
/// Alexander polynomial of a knot.
pub fn laurent_normalize_symmetric(f: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let at_one = f.eval_one();
    if !at_one.magnitude().is_one() {
        return Err(PolyError::UnitValue(at_one));
    }
    let mut poly = f.poly.clone();
    if at_one.is_negative() {
        poly = -&poly;
    }
    let deg = poly.degree().unwrap_or(0);
    if deg % 2 != 0 {
        return Err(PolyError::NotSymmetric("odd coefficient span"));
    }
    for i in 0..=deg / 2 {
        if poly.coeff(i) != poly.coeff(deg - i) {
            return Err(PolyError::NotSymmetric("coefficients are not palindromic"));
        }
    }
    Ok(LaurentPoly::new(-((deg / 2) as i64), poly))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64(coeffs)
    }

    #[test]
    fn canonical_form() {
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(IntPoly::zero().degree(), None);
    }

    #[test]
    fn arithmetic() {
        let f = p(&[1, 1]); // 1 + t
        let g = p(&[-1, 1]); // -1 + t
        assert_eq!(&f * &g, p(&[-1, 0, 1]));
        assert_eq!(&f + &g, p(&[0, 2]));
        assert_eq!(&f - &f, IntPoly::zero());
        assert_eq!(f.eval_i64(3), BigInt::from(4));
    }

    #[test]
    fn exact_division() {
        let f = p(&[-1, 0, 0, 0, 0, 0, 1]); // t^6 - 1
        let g = p(&[-1, 0, 1]); // t^2 - 1
        let q = f.div_exact(&g).unwrap();
        assert_eq!(&q * &g, f);
        assert!(p(&[1, 1]).div_exact(&p(&[0, 1])).is_none());
    }

    #[test]
    fn gcd_with_zero_normalizes() {
        let f = p(&[2, 4, 2]);
        let g = poly_gcd(&[f, IntPoly::zero()]).unwrap();
        assert_eq!(g, p(&[1, 2, 1]));
        assert_eq!(poly_gcd(&[IntPoly::zero()]), Err(PolyError::AllZero));
    }

    #[test]
    fn gcd_of_factored_pair() {
        // gcd(t^2 - 1, t^2 - 2t + 1) = t - 1
        let f = p(&[-1, 0, 1]);
        let g = p(&[1, -2, 1]);
        assert_eq!(poly_gcd(&[f, g]).unwrap(), p(&[-1, 1]));
    }

    #[test]
    fn gcd_sign_normalization() {
        let f = p(&[0, -2]); // -2t
        let g = p(&[0, 0, -4]); // -4t^2
        assert_eq!(poly_gcd(&[f, g]).unwrap(), p(&[0, 1]));
    }

    #[test]
    fn laurent_canonical() {
        let f = LaurentPoly::new(-2, p(&[0, 1, 1])); // t^-2 (t + t^2) = t^-1 + 1
        assert_eq!(f.min_exp(), -1);
        assert_eq!(f.max_exp(), 0);
        assert_eq!(f.coeff(-1), BigInt::one());
    }

    #[test]
    fn laurent_symmetry() {
        let f = LaurentPoly::new(-1, p(&[1, -1, 1]));
        assert!(f.is_symmetric());
        let g = LaurentPoly::new(0, p(&[1, -1, 1]));
        assert!(!g.is_symmetric());
    }

    #[test]
    fn normalize_monomial_to_one() {
        let t = LaurentPoly::new(1, IntPoly::one());
        assert_eq!(laurent_normalize_symmetric(&t).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn normalize_rejects_zero_at_one() {
        // -t^2 + t = t(1 - t) has value 0 at t = 1
        let f = LaurentPoly::new(0, p(&[0, 1, -1]));
        assert_eq!(
            laurent_normalize_symmetric(&f),
            Err(PolyError::UnitValue(BigInt::zero()))
        );
    }

    #[test]
    fn normalize_shifts_trefoil_polynomial() {
        let f = LaurentPoly::new(0, p(&[1, -1, 1]));
        let g = laurent_normalize_symmetric(&f).unwrap();
        assert_eq!(g, LaurentPoly::new(-1, p(&[1, -1, 1])));
        assert_eq!(g.eval_one(), BigInt::one());
        assert!(g.is_symmetric());
    }

    #[test]
    fn laurent_json_round_trip() {
        let f = LaurentPoly::new(-1, p(&[1, -1, 1]));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"minexp":-1,"coeffs":["1","-1","1"]}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn eval_neg_one_handles_negative_exponents() {
        // t^-1 - 1 + t at t = -1: -1 - 1 - 1 = -3
        let f = LaurentPoly::new(-1, p(&[1, -1, 1]));
        assert_eq!(f.eval_neg_one(), BigInt::from(-3));
    }
}
