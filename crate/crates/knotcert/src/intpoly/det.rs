//! Determinants of matrices over Z[t].
//!
//! The determinant of a k x k matrix with entries of degree at most d is a
//! polynomial of degree at most dk, so it is reconstructed from its values at
//! t = 0, 1, ..., dk. Each integer determinant is computed exactly by Chinese
//! remaindering over 62-bit primes, with the number of primes chosen from a
//! Hadamard bound on the evaluated matrix.

use super::{interpolate_consecutive, IntPoly, PolyError};
use crate::arith::{invmod, is_prime_u64, mulmod, submod};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use std::sync::Mutex;

/// Exact determinant of a square matrix of integer polynomials.
///
/// `degree_bound` and `coeff_bound` are the caller's stated bounds on entry
/// degrees and coefficient magnitudes; entries exceeding them are an error.
pub fn poly_det(
    a: &[Vec<IntPoly>],
    degree_bound: usize,
    coeff_bound: &BigUint,
) -> Result<IntPoly, PolyError> {
    let k = a.len();
    for (i, row) in a.iter().enumerate() {
        if row.len() != k {
            return Err(PolyError::NonSquare);
        }
        for (j, entry) in row.iter().enumerate() {
            if entry.degree().map_or(false, |d| d > degree_bound)
                || entry.max_norm() > *coeff_bound
            {
                return Err(PolyError::EntryBound(i, j));
            }
        }
    }
    if k == 0 {
        return Ok(IntPoly::one());
    }
    let top = degree_bound * k;
    let mut values = Vec::with_capacity(top + 1);
    for i in 0..=top {
        let x = BigInt::from(i as u64);
        let evaluated: Vec<Vec<BigInt>> = a
            .iter()
            .map(|row| row.iter().map(|e| e.eval(&x)).collect())
            .collect();
        let det = int_det(&evaluated);
        #[cfg(debug_assertions)]
        check_lemma_hadamard(&det, k, degree_bound, coeff_bound, i);
        values.push(det);
    }
    interpolate_consecutive(&values)
}

/// Runtime check (debug builds) that |det(A_i)| <= k^(k/2) ((d+1) C i^d)^k.
#[cfg(debug_assertions)]
fn check_lemma_hadamard(det: &BigInt, k: usize, d: usize, c: &BigUint, i: usize) {
    let entry = {
        let raw = BigUint::from(d as u64 + 1) * c * BigUint::from(i as u64).pow(d as u32);
        if raw.is_zero() {
            c.clone()
        } else {
            raw
        }
    };
    // compare squares: det^2 <= k^k * entry^(2k)
    let bound = BigUint::from(k as u64).pow(k as u32) * entry.pow(2 * k as u32);
    let det_sq = det.magnitude() * det.magnitude();
    assert!(
        det_sq <= bound,
        "evaluated determinant exceeds the Hadamard bound"
    );
}

/// Exact determinant of a square integer matrix via CRT over 62-bit primes.
pub(crate) fn int_det(rows: &[Vec<BigInt>]) -> BigInt {
    let k = rows.len();
    if k == 0 {
        return BigInt::one();
    }
    // Hadamard bound from row norms: det^2 <= prod_i sum_j a_ij^2
    let mut bound_sq = BigUint::one();
    for row in rows {
        let norm_sq: BigUint = row.iter().map(|e| e.magnitude() * e.magnitude()).sum();
        if norm_sq.is_zero() {
            return BigInt::zero();
        }
        bound_sq *= norm_sq;
    }
    let bound = bound_sq.sqrt() + 1u32;
    let two_bound = &bound << 1;

    // sparse representation; entries almost always fit in i128
    let sparse: Vec<Vec<(u32, BigInt)>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, e)| !e.is_zero())
                .map(|(j, e)| (j as u32, e.clone()))
                .collect()
        })
        .collect();

    let mut modulus = BigUint::one();
    let mut acc = BigUint::zero();
    let mut idx = 0;
    while modulus <= two_bound {
        let p = nth_prime(idx);
        idx += 1;
        let reduced: Vec<Vec<(u32, u64)>> = sparse
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|(j, e)| {
                        let r = residue(e, p);
                        (r != 0).then_some((*j, r))
                    })
                    .collect()
            })
            .collect();
        let det_p = sparse_det_mod_p(k, reduced, p);
        // CRT: acc' = acc (mod modulus), acc' = det_p (mod p)
        let m_mod_p = (&modulus % p).to_u64().unwrap();
        let acc_mod_p = (&acc % p).to_u64().unwrap();
        let t = mulmod(submod(det_p, acc_mod_p, p), invmod(m_mod_p % p, p), p);
        acc += &modulus * t;
        modulus *= p;
    }
    // balanced representative
    let det = if &acc << 1 > modulus {
        BigInt::from(acc) - BigInt::from(modulus)
    } else {
        BigInt::from(acc)
    };
    debug_assert!(*det.magnitude() <= bound);
    det
}

fn residue(e: &BigInt, p: u64) -> u64 {
    if let Some(v) = e.to_i128() {
        v.rem_euclid(p as i128) as u64
    } else {
        let r = (e % BigInt::from(p)).to_i64().unwrap();
        r.rem_euclid(p as i64) as u64
    }
}

static PRIMES: Mutex<Vec<u64>> = Mutex::new(Vec::new());

/// The idx-th prime below 2^62, descending; cached across calls.
fn nth_prime(idx: usize) -> u64 {
    let mut cache = PRIMES.lock().unwrap();
    while cache.len() <= idx {
        let mut candidate = cache.last().map_or((1u64 << 62) - 1, |&last| last - 2);
        while !is_prime_u64(candidate) {
            candidate -= 2;
        }
        cache.push(candidate);
    }
    cache[idx]
}

const DENSE_CUTOFF: usize = 32;

/// Determinant mod p by sparse elimination with a dense endgame.
///
/// Pivot columns are consumed in ascending order; candidate rows per column
/// are tracked lazily so the banded matrices coming from knot diagrams
/// eliminate with near-linear fill.
fn sparse_det_mod_p(k: usize, rows_in: Vec<Vec<(u32, u64)>>, p: u64) -> u64 {
    let mut rows: Vec<Option<Vec<(u32, u64)>>> = rows_in.into_iter().map(Some).collect();
    let mut col_cands: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut nnz_total = 0usize;
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row.as_ref().unwrap() {
            col_cands[*c as usize].push(r as u32);
            nnz_total += 1;
        }
    }
    let mut pivots: Vec<(u32, u32)> = Vec::with_capacity(k);
    let mut prod = 1u64;
    let mut alive = k;
    let mut col = 0usize;
    while alive > DENSE_CUTOFF && nnz_total * 4 < alive * alive {
        // candidates actually holding a nonzero entry in this column
        let mut cands: Vec<(usize, usize)> = Vec::new(); // (row, nnz)
        for &r in &col_cands[col] {
            let r = r as usize;
            if let Some(row) = &rows[r] {
                if row.binary_search_by_key(&(col as u32), |&(c, _)| c).is_ok() {
                    if cands.iter().all(|&(cr, _)| cr != r) {
                        cands.push((r, row.len()));
                    }
                }
            }
        }
        if cands.is_empty() {
            return 0;
        }
        let &(pr, _) = cands.iter().min_by_key(|&&(r, n)| (n, r)).unwrap();
        let pivot_row = rows[pr].take().unwrap();
        let pv = pivot_row[pivot_row
            .binary_search_by_key(&(col as u32), |&(c, _)| c)
            .unwrap()]
        .1;
        let pv_inv = invmod(pv, p);
        nnz_total -= pivot_row.len();
        for &(r, _) in &cands {
            if r == pr {
                continue;
            }
            let row = rows[r].take().unwrap();
            let pos = row
                .binary_search_by_key(&(col as u32), |&(c, _)| c)
                .unwrap();
            let factor = mulmod(row[pos].1, pv_inv, p);
            nnz_total -= row.len();
            let merged = row_subtract(&row, &pivot_row, factor, p, r as u32, &mut col_cands);
            nnz_total += merged.len();
            rows[r] = Some(merged);
        }
        pivots.push((pr as u32, col as u32));
        prod = mulmod(prod, pv, p);
        alive -= 1;
        col += 1;
    }
    if alive > 0 {
        // dense endgame over the remaining rows and columns
        let live_rows: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| row.as_ref().map(|_| r))
            .collect();
        let live_cols: Vec<usize> = (col..k).collect();
        debug_assert_eq!(live_rows.len(), alive);
        debug_assert_eq!(live_cols.len(), alive);
        let col_pos: Vec<Option<usize>> = {
            let mut v = vec![None; k];
            for (i, &c) in live_cols.iter().enumerate() {
                v[c] = Some(i);
            }
            v
        };
        let mut dense = vec![0u64; alive * alive];
        for (i, &r) in live_rows.iter().enumerate() {
            for &(c, val) in rows[r].as_ref().unwrap() {
                dense[i * alive + col_pos[c as usize].unwrap()] = val;
            }
        }
        let mut used = vec![false; alive];
        for j in 0..alive {
            let Some(pi) = (0..alive).find(|&i| !used[i] && dense[i * alive + j] != 0) else {
                return 0;
            };
            used[pi] = true;
            let pv = dense[pi * alive + j];
            let pv_inv = invmod(pv, p);
            prod = mulmod(prod, pv, p);
            pivots.push((live_rows[pi] as u32, live_cols[j] as u32));
            for i in 0..alive {
                if used[i] || dense[i * alive + j] == 0 {
                    continue;
                }
                let factor = mulmod(dense[i * alive + j], pv_inv, p);
                for jj in j..alive {
                    let sub = mulmod(factor, dense[pi * alive + jj], p);
                    dense[i * alive + jj] = submod(dense[i * alive + jj], sub, p);
                }
            }
        }
    }
    // sign of the row -> column bijection
    let mut perm = vec![usize::MAX; k];
    for &(r, c) in &pivots {
        perm[r as usize] = c as usize;
    }
    let mut seen = vec![false; k];
    let mut transpositions = 0usize;
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = perm[cur];
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions % 2 == 1 {
        prod = submod(0, prod, p);
    }
    prod
}

/// target - factor * pivot, dropping zeros and registering new columns.
fn row_subtract(
    target: &[(u32, u64)],
    pivot: &[(u32, u64)],
    factor: u64,
    p: u64,
    row_id: u32,
    col_cands: &mut [Vec<u32>],
) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        if j >= pivot.len() || (i < target.len() && target[i].0 < pivot[j].0) {
            out.push(target[i]);
            i += 1;
        } else if i >= target.len() || pivot[j].0 < target[i].0 {
            let v = submod(0, mulmod(factor, pivot[j].1, p), p);
            if v != 0 {
                out.push((pivot[j].0, v));
                col_cands[pivot[j].0 as usize].push(row_id);
            }
            j += 1;
        } else {
            let v = submod(target[i].1, mulmod(factor, pivot[j].1, p), p);
            if v != 0 {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64(coeffs)
    }

    fn bound(c: u64) -> BigUint {
        BigUint::from(c)
    }

    #[test]
    fn identity_matrix() {
        let id = vec![
            vec![p(&[1]), p(&[]), p(&[])],
            vec![p(&[]), p(&[1]), p(&[])],
            vec![p(&[]), p(&[]), p(&[1])],
        ];
        assert_eq!(poly_det(&id, 1, &bound(1)).unwrap(), IntPoly::one());
    }

    #[test]
    fn two_by_two_cofactor() {
        // [[t, 1], [1, t]] -> t^2 - 1
        let m = vec![vec![p(&[0, 1]), p(&[1])], vec![p(&[1]), p(&[0, 1])]];
        assert_eq!(poly_det(&m, 1, &bound(1)).unwrap(), p(&[-1, 0, 1]));
    }

    #[test]
    fn empty_matrix_determinant_is_one() {
        let m: Vec<Vec<IntPoly>> = Vec::new();
        assert_eq!(poly_det(&m, 1, &bound(1)).unwrap(), IntPoly::one());
    }

    #[test]
    fn non_square_rejected() {
        let m = vec![vec![p(&[1]), p(&[1])]];
        assert_eq!(poly_det(&m, 1, &bound(1)), Err(PolyError::NonSquare));
    }

    #[test]
    fn entry_bound_rejected() {
        let m = vec![vec![p(&[0, 0, 1])]];
        assert_eq!(poly_det(&m, 1, &bound(5)), Err(PolyError::EntryBound(0, 0)));
        let m = vec![vec![p(&[7])]];
        assert_eq!(poly_det(&m, 1, &bound(5)), Err(PolyError::EntryBound(0, 0)));
    }

    #[test]
    fn singular_integer_matrix() {
        let rows = vec![
            vec![BigInt::from(2), BigInt::from(4)],
            vec![BigInt::from(1), BigInt::from(2)],
        ];
        assert_eq!(int_det(&rows), BigInt::zero());
    }

    #[test]
    fn int_det_large_values() {
        // diag(10^30, 3) with an off-diagonal disturbance
        let big: BigInt = BigInt::from(10u64).pow(30);
        let rows = vec![
            vec![big.clone(), BigInt::from(1)],
            vec![BigInt::from(7), BigInt::from(3)],
        ];
        assert_eq!(int_det(&rows), &big * 3 - 7);
    }

    #[test]
    fn sign_from_permuted_pivots() {
        let rows = vec![
            vec![BigInt::zero(), BigInt::from(2)],
            vec![BigInt::from(3), BigInt::zero()],
        ];
        assert_eq!(int_det(&rows), BigInt::from(-6));
    }
}
