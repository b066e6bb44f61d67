//! Smith normal form and exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers; matrices are
//! small (bounded by the skeleton sizes of fixture triangulations), so the
//! classical pivoting algorithm is plenty.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        IntMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * &rhs[(l, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let delta = q * &self[(src, j)];
            self[(dst, j)] += delta;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let delta = q * &self[(i, src)];
            self[(i, dst)] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Debug for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// u * a * v = d with u, v unimodular and d diagonal, nonnegative, each
/// diagonal entry dividing the next.
pub struct Smith {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
    pub rank: usize,
}

pub fn smith_normal_form(a: &IntMat) -> Smith {
    let mut d = a.clone();
    let mut u = IntMat::identity(d.rows);
    let mut v = IntMat::identity(d.cols);
    let steps = d.rows.min(d.cols);
    let mut rank = 0;

    for t in 0..steps {
        'pivot: loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..d.rows {
                for j in t..d.cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| {
                        d[(i, j)].magnitude() < d[(bi, bj)].magnitude()
                    }) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v, rank);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..d.rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &d[(t, t)]);
                if !q.is_zero() {
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                }
                if !d[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..d.cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &d[(t, t)]);
                if !q.is_zero() {
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                }
                if !d[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // pivot must divide the whole trailing block
            for i in t + 1..d.rows {
                for j in t + 1..d.cols {
                    if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                        let one = BigInt::one();
                        d.add_row(t, i, &one);
                        u.add_row(t, i, &one);
                        continue 'pivot;
                    }
                }
            }
            break;
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        rank = t + 1;
    }
    finish(u, d, v, rank)
}

fn finish(u: IntMat, d: IntMat, v: IntMat, rank: usize) -> Smith {
    debug_assert!({
        let mut chain = true;
        for t in 1..rank {
            if !(&d[(t, t)] % &d[(t - 1, t - 1)]).is_zero() {
                chain = false;
            }
        }
        chain
    });
    Smith { u, d, v, rank }
}

/// Basis of the integer kernel lattice of `a` (complete and primitive).
pub fn kernel_basis(a: &IntMat) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(a);
    (s.rank..a.ncols())
        .map(|j| (0..a.ncols()).map(|i| s.v[(i, j)].clone()).collect())
        .collect()
}

pub fn rank(a: &IntMat) -> usize {
    smith_normal_form(a).rank
}

/// One integral solution of a x = b, if any exists.
pub fn solve(a: &IntMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.nrows(), b.len());
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.ncols()];
    for i in 0..a.nrows() {
        if i < s.rank {
            let (q, r) = ub[i].div_rem(&s.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_decomposition(a: &IntMat) {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        for i in 0..s.d.nrows() {
            for j in 0..s.d.ncols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        for t in 1..s.rank {
            assert!((&s.d[(t, t)] % &s.d[(t - 1, t - 1)]).is_zero());
        }
    }

    #[test]
    fn smith_of_known_matrix() {
        // invariant factors: gcd of entries 2, gcd of 2x2 minors 4, |det| 624
        let a = IntMat::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        check_decomposition(&a);
        let s = smith_normal_form(&a);
        assert_eq!(s.rank, 3);
        let diag: Vec<i64> = (0..3).map(|i| i64::try_from(&s.d[(i, i)]).unwrap()).collect();
        assert_eq!(diag, vec![2, 2, 156]);
    }

    #[test]
    fn smith_rectangular() {
        let a = IntMat::from_i64(&[&[1, 2, 3], &[4, 5, 6]]);
        check_decomposition(&a);
        assert_eq!(rank(&a), 2);
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let a = IntMat::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let basis = kernel_basis(&a);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_integral_system() {
        let a = IntMat::from_i64(&[&[2, 0], &[0, 3]]);
        let b = vec![BigInt::from(4), BigInt::from(9)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(solve(&a, &[BigInt::from(1), BigInt::from(1)]).is_none());
    }

    #[test]
    fn kernel_is_saturated() {
        // kernel of [2 1] is generated by (1, -2); a non-primitive generator
        // like (2, -4) would be wrong
        let a = IntMat::from_i64(&[&[2, 1]]);
        let basis = kernel_basis(&a);
        assert_eq!(basis.len(), 1);
        let g = num_integer::gcd(
            basis[0][0].magnitude().clone(),
            basis[0][1].magnitude().clone(),
        );
        assert!(g.is_one());
    }
}
