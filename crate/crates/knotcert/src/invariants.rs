//! Alexander polynomial and signature of a knot diagram.
//!
//! The Alexander polynomial comes from the abelianized Fox derivative matrix
//! of the Wirtinger presentation; the signature from a Goeritz matrix with
//! the Gordon-Litherland correction term, its matrix signature read off the
//! characteristic polynomial by Descartes' rule of signs.

use crate::diagram::{CheckerboardData, CrossingKind, DiagramError, KnotDiagram};
use crate::intpoly::{
    laurent_normalize_symmetric, poly_det, poly_gcd, IntPoly, LaurentPoly, PolyError,
};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvariantError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is singular")]
    Singular,
}

/// Goeritz matrix of the canonical checkerboard coloring, the type-II
/// correction term, and the full row-sum-zero matrix it came from.
pub struct GoeritzData {
    /// k x k Goeritz matrix (row/column 0 of the full matrix deleted)
    pub matrix: Vec<Vec<i64>>,
    /// correction: sum of eta over type II crossings
    pub mu: i64,
    /// (k+1) x (k+1) matrix with zero row sums
    pub full: Vec<Vec<i64>>,
}

impl GoeritzData {
    pub fn determinant(&self) -> BigInt {
        let rows: Vec<Vec<BigInt>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        crate::intpoly::int_det(&rows)
    }
}

/// Abelianized Fox derivative matrix: the relation g_m g_n g_m^{-1} g_p^{-1}
/// contributes 1-t, t, -1 in columns m, n, p (added, so coincident indices
/// accumulate).
pub fn fox_matrix(pres: &crate::diagram::WirtingerPresentation) -> Vec<Vec<IntPoly>> {
    let n = pres.generators;
    let mut rows = vec![vec![IntPoly::zero(); n]; n];
    for (i, rel) in pres.relations.iter().enumerate() {
        let row = &mut rows[i];
        row[rel.conjugator] = &row[rel.conjugator] + &IntPoly::from_i64(&[1, -1]);
        row[rel.input] = &row[rel.input] + &IntPoly::from_i64(&[0, 1]);
        row[rel.output] = &row[rel.output] + &IntPoly::from_i64(&[-1]);
    }
    rows
}

fn minor_without(fox: &[Vec<IntPoly>], skip_row: usize) -> Vec<Vec<IntPoly>> {
    fox.iter()
        .enumerate()
        .filter(|&(i, _)| i != skip_row)
        .map(|(_, row)| row[1..].to_vec())
        .collect()
}

/// Normalized Alexander polynomial of the diagram.
///
/// A single minor (column of g_1 and the first row deleted) is attempted
/// first; if its normalization to a symmetric polynomial with value 1 at
/// t = 1 fails, the full gcd over all row deletions is used instead.
pub fn alexander(d: &KnotDiagram) -> Result<LaurentPoly, InvariantError> {
    if d.is_small_unknot() {
        return Ok(LaurentPoly::one());
    }
    let pres = d.wirtinger()?;
    let fox = fox_matrix(&pres);
    let bound = BigUint::from(2u32);
    let single = poly_det(&minor_without(&fox, 0), 1, &bound)?;
    if !single.is_zero() {
        if let Ok(normalized) = laurent_normalize_symmetric(&LaurentPoly::from_poly(single)) {
            return Ok(normalized);
        }
    }
    alexander_minor_gcd(d)
}

/// Alexander polynomial as the gcd over all n minors obtained by deleting
/// the column of g_1 and each row in turn.
pub fn alexander_minor_gcd(d: &KnotDiagram) -> Result<LaurentPoly, InvariantError> {
    if d.is_small_unknot() {
        return Ok(LaurentPoly::one());
    }
    let pres = d.wirtinger()?;
    let fox = fox_matrix(&pres);
    let bound = BigUint::from(2u32);
    let dets: Vec<IntPoly> = (0..pres.generators)
        .map(|i| poly_det(&minor_without(&fox, i), 1, &bound))
        .collect::<Result<_, _>>()?;
    let gcd = poly_gcd(&dets)?;
    Ok(laurent_normalize_symmetric(&LaurentPoly::from_poly(gcd))?)
}

/// |Delta_K(-1)|, the knot determinant.
pub fn determinant(d: &KnotDiagram) -> Result<BigUint, InvariantError> {
    Ok(alexander(d)?.eval_neg_one().magnitude().clone())
}

/// Goeritz data for the canonical coloring.
pub fn goeritz(d: &KnotDiagram) -> Result<GoeritzData, InvariantError> {
    let board = d.checkerboard()?;
    Ok(goeritz_from_board(d, &board))
}

pub fn goeritz_from_board(d: &KnotDiagram, board: &CheckerboardData) -> GoeritzData {
    let white = board.white_count();
    let mut full = vec![vec![0i64; white]; white];
    for (i, pair) in board.white_quads.iter().enumerate() {
        let [wi, wj] = *pair;
        if wi != wj {
            full[wi][wj] -= board.eta[i] as i64;
            full[wj][wi] -= board.eta[i] as i64;
        }
    }
    for i in 0..white {
        full[i][i] = -(0..white).filter(|&j| j != i).map(|j| full[i][j]).sum::<i64>();
    }
    let matrix: Vec<Vec<i64>> = (1..white)
        .map(|i| (1..white).map(|j| full[i][j]).collect())
        .collect();
    let n = d.crossing_count() as i64;
    debug_assert!(matrix.iter().flatten().all(|&g| g.abs() <= n));
    let mu = board
        .eta
        .iter()
        .zip(&board.kind)
        .filter(|&(_, k)| *k == CrossingKind::TypeII)
        .map(|(&e, _)| e as i64)
        .sum();
    GoeritzData { matrix, mu, full }
}

/// Signature of a nonsingular symmetric integer matrix via Descartes' rule
/// of signs on its characteristic polynomial.
pub fn sign_symmetric(m: &[Vec<BigInt>]) -> Result<i64, InvariantError> {
    let k = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != k {
            return Err(InvariantError::Poly(PolyError::NonSquare));
        }
        for j in 0..k {
            if m[i][j] != m[j][i] {
                return Err(InvariantError::NotSymmetric);
            }
        }
    }
    if k == 0 {
        return Ok(0);
    }
    // charpoly(lambda) = det(lambda I - M)
    let max_entry = m
        .iter()
        .flatten()
        .map(|e| e.magnitude().clone())
        .max()
        .unwrap()
        .max(BigUint::one());
    let entries: Vec<Vec<IntPoly>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        IntPoly::new(vec![-&m[i][j], BigInt::one()])
                    } else {
                        IntPoly::constant(-&m[i][j])
                    }
                })
                .collect()
        })
        .collect();
    let charpoly = poly_det(&entries, 1, &max_entry)?;
    debug_assert_eq!(charpoly.degree(), Some(k));
    debug_assert!(charpoly.leading().unwrap().is_one());
    if charpoly.coeff(0).is_zero() {
        return Err(InvariantError::Singular);
    }
    // paper order: a_i multiplies lambda^(k-i)
    let seq: Vec<BigInt> = (0..=k).map(|i| charpoly.coeff(k - i)).collect();
    let pos = sign_changes(seq.iter());
    let alternated: Vec<BigInt> = seq
        .iter()
        .enumerate()
        .map(|(i, a)| if (k - i) % 2 == 1 { -a } else { a.clone() })
        .collect();
    let neg = sign_changes(alternated.iter());
    debug_assert_eq!(pos + neg, k, "all eigenvalues are real and nonzero");
    Ok(pos as i64 - neg as i64)
}

fn sign_changes<'a>(seq: impl Iterator<Item = &'a BigInt>) -> usize {
    let mut last: Option<bool> = None;
    let mut changes = 0;
    for v in seq {
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(prev) = last {
            if prev != s {
                changes += 1;
            }
        }
        last = Some(s);
    }
    changes
}

/// Knot signature sign(G) - mu; the right-handed trefoil maps to -2.
pub fn signature(d: &KnotDiagram) -> Result<i64, InvariantError> {
    if d.is_small_unknot() {
        return Ok(0);
    }
    let data = goeritz(d)?;
    signature_of_goeritz(&data)
}

/// Same, but from an explicit coloring (used to check that both colorings
/// agree).
pub fn signature_from_board(
    d: &KnotDiagram,
    board: &CheckerboardData,
) -> Result<i64, InvariantError> {
    if d.is_small_unknot() {
        return Ok(0);
    }
    signature_of_goeritz(&goeritz_from_board(d, board))
}

fn signature_of_goeritz(data: &GoeritzData) -> Result<i64, InvariantError> {
    let rows: Vec<Vec<BigInt>> = data
        .matrix
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    Ok(sign_symmetric(&rows)? - data.mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{braid_closure, torus_knot, BraidWord};

    fn trefoil_right() -> KnotDiagram {
        braid_closure(&BraidWord::new(2, vec![1, 1, 1])).unwrap()
    }

    fn figure_eight() -> KnotDiagram {
        braid_closure(&BraidWord::new(3, vec![1, -2, 1, -2])).unwrap()
    }

    fn lp(min_exp: i64, coeffs: &[i64]) -> LaurentPoly {
        LaurentPoly::new(min_exp, IntPoly::from_i64(coeffs))
    }

    #[test]
    fn alexander_unknot() {
        let d = KnotDiagram::parse("").unwrap();
        assert!(alexander(&d).unwrap().is_one());
        let kink = KnotDiagram::parse("X(1,1,2,2)").unwrap();
        assert!(alexander(&kink).unwrap().is_one());
    }

    #[test]
    fn alexander_trefoil() {
        let delta = alexander(&trefoil_right()).unwrap();
        assert_eq!(delta, lp(-1, &[1, -1, 1]));
    }

    #[test]
    fn alexander_figure_eight() {
        let delta = alexander(&figure_eight()).unwrap();
        assert_eq!(delta, lp(-1, &[-1, 3, -1]));
    }

    #[test]
    fn alexander_gcd_path_agrees() {
        for d in [trefoil_right(), figure_eight(), torus_knot(5, 2).unwrap()] {
            assert_eq!(alexander(&d).unwrap(), alexander_minor_gcd(&d).unwrap());
        }
    }

    #[test]
    fn alexander_mirror_invariant() {
        for d in [trefoil_right(), figure_eight()] {
            assert_eq!(alexander(&d).unwrap(), alexander(&d.mirror()).unwrap());
        }
    }

    #[test]
    fn goeritz_determinants() {
        assert_eq!(goeritz(&trefoil_right()).unwrap().determinant().magnitude(),
                   &BigUint::from(3u32));
        assert_eq!(goeritz(&figure_eight()).unwrap().determinant().magnitude(),
                   &BigUint::from(5u32));
    }

    #[test]
    fn goeritz_full_matrix_rows_sum_to_zero() {
        let data = goeritz(&figure_eight()).unwrap();
        for row in &data.full {
            assert_eq!(row.iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn sign_symmetric_basics() {
        let id3: Vec<Vec<BigInt>> = (0..3)
            .map(|i| (0..3).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        assert_eq!(sign_symmetric(&id3).unwrap(), 3);
        let diag = vec![
            vec![BigInt::from(1), BigInt::zero()],
            vec![BigInt::zero(), BigInt::from(-1)],
        ];
        assert_eq!(sign_symmetric(&diag).unwrap(), 0);
        let singular = vec![vec![BigInt::zero()]];
        assert_eq!(sign_symmetric(&singular), Err(InvariantError::Singular));
    }

    #[test]
    fn sign_symmetric_direct_sum_additivity() {
        let a = vec![
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(-3)],
        ];
        let sa = sign_symmetric(&a).unwrap();
        let neg: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        assert_eq!(sign_symmetric(&neg).unwrap(), -sa);
    }

    #[test]
    fn signature_pins() {
        assert_eq!(signature(&trefoil_right()).unwrap(), -2);
        assert_eq!(signature(&trefoil_right().mirror()).unwrap(), 2);
        assert_eq!(signature(&figure_eight()).unwrap(), 0);
        assert_eq!(signature(&KnotDiagram::parse("").unwrap()).unwrap(), 0);
    }

    #[test]
    fn signature_coloring_independent() {
        for d in [trefoil_right(), figure_eight(), torus_knot(5, 2).unwrap()] {
            let canonical = signature(&d).unwrap();
            let alt = signature_from_board(&d, &d.checkerboard_alternate().unwrap()).unwrap();
            assert_eq!(canonical, alt);
        }
    }

    #[test]
    fn degree_bound_half_crossings() {
        for d in [trefoil_right(), figure_eight(), torus_knot(4, 3).unwrap()] {
            let delta = alexander(&d).unwrap();
            assert!(2 * delta.max_exp() <= d.crossing_count() as i64);
        }
    }
}
