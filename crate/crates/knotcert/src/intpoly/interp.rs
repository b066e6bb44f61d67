//! Exact polynomial interpolation.

use super::{IntPoly, PolyError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Interpolates the unique polynomial of degree < points.len() through the
/// given points, which must have distinct x coordinates and an interpolant
/// with integer coefficients.
pub fn interpolate(points: &[(BigInt, BigInt)]) -> Result<IntPoly, PolyError> {
    if points.is_empty() {
        return Err(PolyError::NoPoints);
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].0 == points[j].0 {
                return Err(PolyError::RepeatedNode);
            }
        }
    }
    let n = points.len();
    // Newton divided differences
    let mut dd: Vec<BigRational> = points
        .iter()
        .map(|(_, y)| BigRational::from_integer(y.clone()))
        .collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = BigRational::from_integer(&points[i].0 - &points[i - j].0);
            dd[i] = num / den;
        }
    }
    // Horner assembly: P = dd[n-1]; P = P*(t - x_j) + dd[j]
    let mut acc: Vec<BigRational> = vec![dd[n - 1].clone()];
    for j in (0..n - 1).rev() {
        let x = BigRational::from_integer(points[j].0.clone());
        let mut next = vec![BigRational::zero(); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &x;
        }
        next[0] += &dd[j];
        acc = next;
    }
    rational_to_int(&acc)
}

/// Interpolation through the values f(0), f(1), ..., f(N) at consecutive
/// integers, using integer-only forward differences. Agrees with
/// [`interpolate`] on the same data.
pub fn interpolate_consecutive(values: &[BigInt]) -> Result<IntPoly, PolyError> {
    if values.is_empty() {
        return Err(PolyError::NoPoints);
    }
    let n = values.len() - 1; // top index N
    let mut table = values.to_vec();
    let mut deltas = Vec::with_capacity(n + 1);
    deltas.push(table[0].clone());
    for j in 1..=n {
        for i in 0..=n - j {
            table[i] = &table[i + 1] - &table[i];
        }
        deltas.push(table[0].clone());
    }
    // N! * f(t) = sum_j (N!/j!) * delta_j * t(t-1)...(t-j+1)
    let mut weights = vec![BigInt::one(); n + 1]; // weights[j] = N!/j!
    for j in (0..n).rev() {
        weights[j] = &weights[j + 1] * BigInt::from((j + 1) as u64);
    }
    let factorial_n = weights[0].clone();
    let mut acc = vec![BigInt::zero(); n + 1];
    let mut falling = vec![BigInt::one()]; // t(t-1)...(t-j+1), starts as 1
    for (j, delta) in deltas.iter().enumerate() {
        if !delta.is_zero() {
            let scale = delta * &weights[j];
            for (i, c) in falling.iter().enumerate() {
                acc[i] += c * &scale;
            }
        }
        if j < n {
            // falling *= (t - j)
            let minus_j = BigInt::from(j as u64);
            let mut next = vec![BigInt::zero(); falling.len() + 1];
            for (i, c) in falling.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * &minus_j;
            }
            falling = next;
        }
    }
    let mut coeffs = Vec::with_capacity(n + 1);
    for c in acc {
        let (q, r) = num_integer::Integer::div_rem(&c, &factorial_n);
        if !r.is_zero() {
            return Err(PolyError::NonIntegralInterpolant);
        }
        coeffs.push(q);
    }
    Ok(IntPoly::new(coeffs))
}

fn rational_to_int(coeffs: &[BigRational]) -> Result<IntPoly, PolyError> {
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        if !c.is_integer() {
            return Err(PolyError::NonIntegralInterpolant);
        }
        out.push(c.to_integer());
    }
    Ok(IntPoly::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn constant_through_one_point() {
        let f = interpolate(&[(big(0), big(1))]).unwrap();
        assert_eq!(f, IntPoly::one());
    }

    #[test]
    fn quadratic_through_three_points() {
        // t^2 - 1 at 0, 1, 2
        let f = interpolate(&[(big(0), big(-1)), (big(1), big(0)), (big(2), big(3))]).unwrap();
        assert_eq!(f, IntPoly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn repeated_node_rejected() {
        let err = interpolate(&[(big(1), big(0)), (big(1), big(2))]).unwrap_err();
        assert_eq!(err, PolyError::RepeatedNode);
    }

    #[test]
    fn non_integral_rejected() {
        // line through (0,0), (2,1) has slope 1/2
        let err = interpolate(&[(big(0), big(0)), (big(2), big(1))]).unwrap_err();
        assert_eq!(err, PolyError::NonIntegralInterpolant);
    }

    #[test]
    fn consecutive_matches_general() {
        let f = IntPoly::from_i64(&[3, -2, 0, 5, 1, -4, 2, 7]); // degree 7
        let values: Vec<BigInt> = (0..8).map(|i| f.eval_i64(i)).collect();
        let g = interpolate_consecutive(&values).unwrap();
        assert_eq!(g, f);
        let points: Vec<(BigInt, BigInt)> =
            values.iter().enumerate().map(|(i, v)| (big(i as i64), v.clone())).collect();
        assert_eq!(interpolate(&points).unwrap(), f);
    }

    #[test]
    fn consecutive_non_integral_rejected() {
        // values of t(t-1)/2, whose coefficients are half-integers
        let err = interpolate_consecutive(&[big(0), big(0), big(1)]).unwrap_err();
        assert_eq!(err, PolyError::NonIntegralInterpolant);
    }
}
