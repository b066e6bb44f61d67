//! Depth-first search for uncentered certificates over small primes.
//!
//! The search space is cut down by two facts. Global conjugation preserves
//! everything a certificate checks, so the image of g_1 may be fixed to one
//! representative per conjugacy class of SL2(F_p), enumerated by trace and,
//! for traces +-2, by the square class of the parabolic parameter. And all
//! Wirtinger generators are conjugate in the knot group (the diagram is
//! connected, and each relation conjugates one meridian onto the next), so
//! every other generator image must lie in the conjugacy class of the image
//! of g_1; the class is enumerated once and used as the candidate set.
//!
//! Primes ascend, classes ascend by trace, and the first solution in that
//! order is returned, so results are reproducible.

use super::{CertError, UncenteredCertificate};
use crate::arith::{invmod, is_prime_u64, is_square_mod, mulmod, submod};
use crate::diagram::{KnotDiagram, Relation, WirtingerPresentation};
use crate::invariants;
use crate::torus::identify_torus;
use num_bigint::BigUint;
use rayon::prelude::*;

/// 2x2 matrix over a machine-word prime field; row-major [a, b, c, d].
type Mat = [u64; 4];

const IDENT: Mat = [1, 0, 0, 1];

fn mat_mul(x: &Mat, y: &Mat, p: u64) -> Mat {
    [
        (mulmod(x[0], y[0], p) + mulmod(x[1], y[2], p)) % p,
        (mulmod(x[0], y[1], p) + mulmod(x[1], y[3], p)) % p,
        (mulmod(x[2], y[0], p) + mulmod(x[3], y[2], p)) % p,
        (mulmod(x[2], y[1], p) + mulmod(x[3], y[3], p)) % p,
    ]
}

/// Inverse by adjugate; valid for determinant 1.
fn mat_inv(x: &Mat, p: u64) -> Mat {
    [x[3], submod(0, x[1], p), submod(0, x[2], p), x[0]]
}

fn mat_det(x: &Mat, p: u64) -> u64 {
    submod(mulmod(x[0], x[3], p), mulmod(x[1], x[2], p), p)
}

fn commutes(x: &Mat, y: &Mat, p: u64) -> bool {
    mat_mul(x, y, p) == mat_mul(y, x, p)
}

fn is_central(x: &Mat, _p: u64) -> bool {
    x[1] == 0 && x[2] == 0 && x[0] == x[3]
}

/// One conjugacy class of SL2(F_p).
struct ConjClass {
    rep: Mat,
    /// central classes have candidate set {rep} and can never certify
    central: bool,
}

fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&x| !is_square_mod(x, p)).expect("p odd")
}

/// Conjugacy class representatives in canonical order: traces ascending,
/// with the central and two parabolic classes listed at traces 2 and p-2.
fn class_reps(p: u64) -> Vec<ConjClass> {
    let eps = least_nonresidue(p);
    let mut out = Vec::with_capacity(p as usize + 4);
    for trace in 0..p {
        if trace == 2 % p {
            out.push(ConjClass {
                rep: IDENT,
                central: true,
            });
            out.push(ConjClass {
                rep: [1, 1, 0, 1],
                central: false,
            });
            out.push(ConjClass {
                rep: [1, eps, 0, 1],
                central: false,
            });
        } else if trace == p - 2 {
            let neg = submod(0, 1, p);
            out.push(ConjClass {
                rep: [neg, 0, 0, neg],
                central: true,
            });
            out.push(ConjClass {
                rep: [neg, 1, 0, neg],
                central: false,
            });
            out.push(ConjClass {
                rep: [neg, eps, 0, neg],
                central: false,
            });
        } else {
            // companion matrix of t^2 - trace t + 1
            out.push(ConjClass {
                rep: [0, submod(0, 1, p), 1, trace],
                central: false,
            });
        }
    }
    out
}

/// Square class distinguishing the two parabolic classes of a given trace.
/// For trace 2 the invariant of I + u N (N nilpotent) is the square class
/// of u, read off as chi(-c) when c != 0 and chi(b) otherwise.
fn parabolic_square_class(m: &Mat, p: u64) -> bool {
    let trace = (m[0] + m[3]) % p;
    let (b, c) = if trace == 2 % p {
        (m[1], m[2])
    } else {
        (submod(0, m[1], p), submod(0, m[2], p))
    };
    if c != 0 {
        is_square_mod(submod(0, c, p), p)
    } else {
        is_square_mod(b, p)
    }
}

/// All members of the conjugacy class of `rep`, in a deterministic order.
fn class_members(class: &ConjClass, p: u64) -> Vec<Mat> {
    if class.central {
        return vec![class.rep];
    }
    let trace = (class.rep[0] + class.rep[3]) % p;
    let special = trace == 2 % p || trace == p - 2;
    let want_square = special.then(|| parabolic_square_class(&class.rep, p));
    let mut out = Vec::new();
    for a in 0..p {
        let d = submod(trace, a, p);
        let e = submod(mulmod(a, d, p), 1, p); // bc = ad - 1
        if e != 0 {
            for b in 1..p {
                let c = mulmod(e, invmod(b, p), p);
                push_member([a, b, c, d], want_square, p, &mut out);
            }
        } else {
            for b in 0..p {
                push_member([a, b, 0, d], want_square, p, &mut out);
            }
            for c in 1..p {
                push_member([a, 0, c, d], want_square, p, &mut out);
            }
        }
    }
    out
}

fn push_member(m: Mat, want_square: Option<bool>, p: u64, out: &mut Vec<Mat>) {
    if is_central(&m, p) {
        return;
    }
    if let Some(w) = want_square {
        if parabolic_square_class(&m, p) != w {
            return;
        }
    }
    debug_assert_eq!(mat_det(&m, p), 1);
    out.push(m);
}

/// The whole pipeline: identify the torus candidate, return the none
/// certificate when there is none, otherwise search for a representation
/// making mu^{rs} lambda non-central over some odd prime <= max_prime.
pub fn search_uncentered(
    d: &KnotDiagram,
    max_prime: u64,
) -> Result<Option<UncenteredCertificate>, CertError> {
    if max_prime < 3 {
        return Err(CertError::Structure(
            "prime limit must be at least 3".into(),
        ));
    }
    let delta = invariants::alexander(d)?;
    let sigma = invariants::signature(d)?;
    let Some(params) = identify_torus(&delta, sigma, d.crossing_count()) else {
        return Ok(Some(UncenteredCertificate::none_certificate()));
    };
    let pres = d.wirtinger()?;
    Ok(
        search_representation(&pres, params.product(), max_prime).map(|(p, mats)| {
            UncenteredCertificate {
                torus: Some(params),
                p: Some(BigUint::from(p)),
                matrices: Some(
                    mats.into_iter()
                        .map(|m| m.map(BigUint::from))
                        .collect(),
                ),
            }
        }),
    )
}

/// Searches odd primes 3..=max_prime, ascending, for matrices satisfying the
/// Wirtinger relations whose mu^{exponent} lambda image fails to commute
/// with some generator image. Within a prime, conjugacy classes are searched
/// in canonical order and may run in parallel; the first hit in class order
/// wins either way.
pub fn search_representation(
    pres: &WirtingerPresentation,
    peripheral_exponent: i64,
    max_prime: u64,
) -> Option<(u64, Vec<Mat>)> {
    let word = super::peripheral_word(pres, peripheral_exponent);
    for p in (3..=max_prime).filter(|&p| p % 2 == 1 && is_prime_u64(p)) {
        let classes = class_reps(p);
        let hit = classes.par_iter().enumerate().find_map_first(|(_, class)| {
            if class.central {
                // candidates would all be the same central matrix, which
                // gives an abelian image and can never pass step 3
                return None;
            }
            let candidates = class_members(class, p);
            let mut assigned: Vec<Option<Mat>> = vec![None; pres.generators];
            assigned[0] = Some(class.rep);
            dfs(
                &mut assigned,
                &pres.relations,
                &candidates,
                &word,
                p,
            )
        });
        if let Some(mats) = hit {
            return Some((p, mats));
        }
    }
    None
}

fn dfs(
    assigned: &mut Vec<Option<Mat>>,
    relations: &[Relation],
    candidates: &[Mat],
    word: &[(usize, i8)],
    p: u64,
) -> Option<Vec<Mat>> {
    // forced assignments from relations with one unknown
    let mut trail: Vec<usize> = Vec::new();
    let mut ok = true;
    'propagate: loop {
        for rel in relations {
            let (m, n, q) = (rel.conjugator, rel.input, rel.output);
            match (assigned[m], assigned[n], assigned[q]) {
                (Some(mm), Some(mn), Some(mq)) => {
                    if mat_mul(&mm, &mn, p) != mat_mul(&mq, &mm, p) {
                        ok = false;
                        break 'propagate;
                    }
                }
                (Some(mm), Some(mn), None) => {
                    let forced = mat_mul(&mat_mul(&mm, &mn, p), &mat_inv(&mm, p), p);
                    assigned[q] = Some(forced);
                    trail.push(q);
                    continue 'propagate;
                }
                (Some(mm), None, Some(mq)) => {
                    let forced = mat_mul(&mat_mul(&mat_inv(&mm, p), &mq, p), &mm, p);
                    assigned[n] = Some(forced);
                    trail.push(n);
                    continue 'propagate;
                }
                _ => {}
            }
        }
        break;
    }
    let result = if ok {
        match assigned.iter().position(|a| a.is_none()) {
            None => finish(assigned, relations, word, p),
            Some(branch) => {
                let mut found = None;
                for cand in candidates {
                    assigned[branch] = Some(*cand);
                    if let Some(sol) = dfs(assigned, relations, candidates, word, p) {
                        found = Some(sol);
                        break;
                    }
                }
                assigned[branch] = None;
                found
            }
        }
    } else {
        None
    };
    for idx in trail {
        assigned[idx] = None;
    }
    result
}

fn finish(
    assigned: &[Option<Mat>],
    relations: &[Relation],
    word: &[(usize, i8)],
    p: u64,
) -> Option<Vec<Mat>> {
    let mats: Vec<Mat> = assigned.iter().map(|a| a.unwrap()).collect();
    for rel in relations {
        let lhs = mat_mul(&mats[rel.conjugator], &mats[rel.input], p);
        let rhs = mat_mul(&mats[rel.output], &mats[rel.conjugator], p);
        if lhs != rhs {
            return None;
        }
    }
    let mut image = IDENT;
    for &(gen, sign) in word {
        let factor = if sign >= 0 {
            mats[gen]
        } else {
            mat_inv(&mats[gen], p)
        };
        image = mat_mul(&image, &factor, p);
    }
    if mats.iter().any(|m| !commutes(&image, m, p)) {
        Some(mats)
    } else {
        None
    }
}
