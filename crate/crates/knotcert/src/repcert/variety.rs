//! The polynomial system cutting out noncentral SL2 representations.
//!
//! For an n-crossing diagram and exponent m the system has 8n variables
//! (matrix entries a_i, b_i, c_i, d_i per generator, then Rabinowitsch
//! multipliers t_{i,j,k}) and 5n+1 polynomials: n determinant conditions,
//! 4 entry equations per Wirtinger relation, and one Rabinowitsch equation
//! asserting that the image of mu^m lambda fails to commute with some
//! generator image. Monomial degree stays below 5n+2 and coefficients below
//! 2^{5n+1}, but the number of monomials in the Rabinowitsch polynomial
//! grows exponentially with the length of mu^m lambda, so materializing
//! large systems is costly by nature.

use super::CertError;
use crate::arith::{mulmod, powmod};
use crate::diagram::KnotDiagram;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Monomial as a sorted, duplicate-free list of (variable, exponent).
pub type Monomial = Vec<(u32, u32)>;

/// Sparse multivariate integer polynomial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Vec::new(), BigInt::from(c));
        p
    }

    pub fn var(v: u32) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(vec![(v, 1)], BigInt::one());
        p
    }

    fn add_term(&mut self, mono: Monomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(merge_monomials(ma, mb), ca * cb);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn max_coeff(&self) -> BigUint {
        self.terms
            .values()
            .map(|c| c.magnitude().clone())
            .max()
            .unwrap_or_else(BigUint::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// Value modulo a machine prime under a full variable assignment.
    pub fn eval_mod(&self, assignment: &[u64], p: u64) -> u64 {
        let mut acc = 0u64;
        for (mono, coeff) in &self.terms {
            let mut term = {
                let r: BigInt = coeff % BigInt::from(p);
                let signed: i64 = i64::try_from(&r).unwrap();
                signed.rem_euclid(p as i64) as u64
            };
            for &(v, e) in mono {
                term = mulmod(term, powmod(assignment[v as usize], e as u64, p), p);
            }
            acc = (acc + term) % p;
        }
        acc
    }
}

fn merge_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

/// Symbolic 2x2 matrix of polynomials, row major.
type SymMat = [MultiPoly; 4];

fn sym_mul(x: &SymMat, y: &SymMat) -> SymMat {
    [
        x[0].mul(&y[0]).add(&x[1].mul(&y[2])),
        x[0].mul(&y[1]).add(&x[1].mul(&y[3])),
        x[2].mul(&y[0]).add(&x[3].mul(&y[2])),
        x[2].mul(&y[1]).add(&x[3].mul(&y[3])),
    ]
}

pub struct PolySystem {
    pub variables: usize,
    pub polynomials: Vec<MultiPoly>,
    generators: usize,
}

impl PolySystem {
    /// Names in export order: a_1, b_1, c_1, d_1, ..., then t_{i,j,k} with
    /// j, k running over matrix positions 1..2.
    pub fn variable_names(&self) -> Vec<String> {
        let n = self.generators;
        let mut names = Vec::with_capacity(8 * n);
        for i in 1..=n {
            for s in ["a", "b", "c", "d"] {
                names.push(format!("{}_{}", s, i));
            }
        }
        for i in 1..=n {
            for j in 1..=2 {
                for k in 1..=2 {
                    names.push(format!("t_{}_{}_{}", i, j, k));
                }
            }
        }
        names
    }

    pub fn max_degree(&self) -> u32 {
        self.polynomials.iter().map(|p| p.max_degree()).max().unwrap_or(0)
    }

    pub fn max_coeff(&self) -> BigUint {
        self.polynomials
            .iter()
            .map(|p| p.max_coeff())
            .max()
            .unwrap_or_else(BigUint::zero)
    }

    /// True when the assignment zeroes every polynomial mod p.
    pub fn satisfied_mod(&self, assignment: &[u64], p: u64) -> bool {
        assert_eq!(assignment.len(), self.variables);
        self.polynomials.iter().all(|f| f.eval_mod(assignment, p) == 0)
    }
}

#[derive(Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub monomial: Vec<[u32; 2]>,
}

#[derive(Serialize, Deserialize)]
pub struct PolySystemJson {
    pub variables: usize,
    pub names: Vec<String>,
    pub polynomials: Vec<Vec<TermJson>>,
}

impl From<&PolySystem> for PolySystemJson {
    fn from(sys: &PolySystem) -> Self {
        PolySystemJson {
            variables: sys.variables,
            names: sys.variable_names(),
            polynomials: sys
                .polynomials
                .iter()
                .map(|p| {
                    p.terms()
                        .map(|(m, c)| TermJson {
                            coeff: c.to_string(),
                            monomial: m.iter().map(|&(v, e)| [v, e]).collect(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Emits the Lemma-style polynomial system for the diagram and peripheral
/// exponent m (|m| < 3n): n determinant polynomials, 4n relation entries,
/// and the single Rabinowitsch equation, in that order.
pub fn emit_variety_system(d: &KnotDiagram, m: i64) -> Result<PolySystem, CertError> {
    let n = d.crossing_count();
    if n == 0 {
        return Err(CertError::Structure("diagram has no crossings".into()));
    }
    if m.unsigned_abs() >= 3 * n as u64 {
        return Err(CertError::ExponentOutOfRange);
    }
    let pres = d.wirtinger()?;
    debug_assert_eq!(pres.generators, n);
    let var_a = |i: usize| 4 * i as u32;
    let gen_mat = |i: usize| -> SymMat {
        [
            MultiPoly::var(var_a(i)),
            MultiPoly::var(var_a(i) + 1),
            MultiPoly::var(var_a(i) + 2),
            MultiPoly::var(var_a(i) + 3),
        ]
    };
    // inverse by adjugate: [[d, -b], [-c, a]]
    let gen_inv = |i: usize| -> SymMat {
        [
            MultiPoly::var(var_a(i) + 3),
            MultiPoly::zero().sub(&MultiPoly::var(var_a(i) + 1)),
            MultiPoly::zero().sub(&MultiPoly::var(var_a(i) + 2)),
            MultiPoly::var(var_a(i)),
        ]
    };

    let mut polynomials = Vec::with_capacity(5 * n + 1);
    for i in 0..n {
        let det = MultiPoly::var(var_a(i))
            .mul(&MultiPoly::var(var_a(i) + 3))
            .sub(&MultiPoly::var(var_a(i) + 1).mul(&MultiPoly::var(var_a(i) + 2)))
            .sub(&MultiPoly::constant(1));
        polynomials.push(det);
    }
    for rel in &pres.relations {
        let lhs = sym_mul(&gen_mat(rel.conjugator), &gen_mat(rel.input));
        let rhs = sym_mul(&gen_mat(rel.output), &gen_mat(rel.conjugator));
        for k in 0..4 {
            polynomials.push(lhs[k].sub(&rhs[k]));
        }
    }
    // A_m = (M_1^eps)^{|m|} * image of lambda
    let identity: SymMat = [
        MultiPoly::constant(1),
        MultiPoly::zero(),
        MultiPoly::zero(),
        MultiPoly::constant(1),
    ];
    let mut a_m = identity;
    let mu = if m >= 0 { gen_mat(0) } else { gen_inv(0) };
    for _ in 0..m.unsigned_abs() {
        a_m = sym_mul(&a_m, &mu);
    }
    for &(gen, sign) in &pres.longitude {
        let factor = if sign >= 0 { gen_mat(gen) } else { gen_inv(gen) };
        a_m = sym_mul(&a_m, &factor);
    }
    let mut rabinowitsch = MultiPoly::constant(-1);
    for i in 0..n {
        let fwd = sym_mul(&a_m, &gen_mat(i));
        let bwd = sym_mul(&gen_mat(i), &a_m);
        for jk in 0..4 {
            let t_var = 4 * n as u32 + 4 * i as u32 + jk as u32;
            rabinowitsch =
                rabinowitsch.add(&MultiPoly::var(t_var).mul(&fwd[jk].sub(&bwd[jk])));
        }
    }
    polynomials.push(rabinowitsch);
    debug_assert_eq!(polynomials.len(), 5 * n + 1);
    Ok(PolySystem {
        variables: 8 * n,
        polynomials,
        generators: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{braid_closure, torus_knot, BraidWord};
    use crate::repcert::search_representation;

    #[test]
    fn multipoly_arithmetic() {
        let x = MultiPoly::var(0);
        let y = MultiPoly::var(1);
        let f = x.mul(&y).add(&MultiPoly::constant(3)); // xy + 3
        assert_eq!(f.term_count(), 2);
        assert_eq!(f.max_degree(), 2);
        assert_eq!(f.eval_mod(&[2, 5], 7), 6); // 10 + 3 = 13 = 6 mod 7
        assert!(f.sub(&f).is_zero());
        let sq = f.mul(&f); // x^2y^2 + 6xy + 9
        assert_eq!(sq.term_count(), 3);
        assert_eq!(sq.max_degree(), 4);
    }

    #[test]
    fn trefoil_system_counts() {
        let d = torus_knot(3, 2).unwrap();
        let sys = emit_variety_system(&d, 6).unwrap();
        assert_eq!(sys.variables, 24);
        assert_eq!(sys.polynomials.len(), 16);
        assert_eq!(sys.variable_names().len(), 24);
        assert_eq!(sys.variable_names()[0], "a_1");
        assert_eq!(sys.variable_names()[12], "t_1_1_1");
        assert!(sys.max_degree() <= 5 * 3 + 2);
        let bound = BigUint::from(1u32) << (5 * 3 + 1);
        assert!(sys.max_coeff() <= bound);
    }

    #[test]
    fn exponent_range_enforced() {
        let d = torus_knot(3, 2).unwrap();
        assert!(matches!(
            emit_variety_system(&d, 9),
            Err(CertError::ExponentOutOfRange)
        ));
        assert!(emit_variety_system(&d, -8).is_ok());
        let empty = crate::diagram::KnotDiagram::parse("").unwrap();
        assert!(matches!(
            emit_variety_system(&empty, 0),
            Err(CertError::Structure(_))
        ));
    }

    /// A representation found by the searcher, extended with a linear-algebra
    /// solution for the Rabinowitsch multipliers, must zero the whole system
    /// mod p. This ties the symbolic product A_m to the concrete evaluation
    /// path end to end.
    #[test]
    fn found_representation_satisfies_system() {
        use crate::repcert::{eval_word, peripheral_word, ModMatrix};
        use num_traits::ToPrimitive;

        let d = braid_closure(&BraidWord::new(3, vec![1, -2, 1, -2])).unwrap();
        let pres = d.wirtinger().unwrap();
        let m = 6i64;
        let (p, mats) = search_representation(&pres, m, 100).unwrap();
        let sys = emit_variety_system(&d, m).unwrap();
        let n = d.crossing_count();
        let mut assignment = vec![0u64; 8 * n];
        for (i, mat) in mats.iter().enumerate() {
            assignment[4 * i..4 * i + 4].copy_from_slice(mat);
        }
        // image of mu^m lambda, then the commutators with each generator
        let big_p = BigUint::from(p);
        let mod_mats: Vec<ModMatrix> = mats
            .iter()
            .map(|mt| ModMatrix::new(mt.map(BigUint::from), &big_p))
            .collect();
        let a_m = eval_word(&mod_mats, &peripheral_word(&pres, m), &big_p).unwrap();
        // solve the single linear Rabinowitsch equation: set the multiplier
        // of one nonzero commutator entry to its inverse, the rest to zero
        let mut solved = false;
        'outer: for i in 0..n {
            let fwd = a_m.mul(&mod_mats[i], &big_p);
            let bwd = mod_mats[i].mul(&a_m, &big_p);
            for jk in 0..4 {
                let diff = ((&fwd.entries[jk] + &big_p) - &bwd.entries[jk]) % &big_p;
                if let Some(c) = diff.to_u64() {
                    if c != 0 {
                        assignment[4 * n + 4 * i + jk] = crate::arith::invmod(c, p);
                        solved = true;
                        break 'outer;
                    }
                }
            }
        }
        assert!(solved, "some commutator entry is nonzero");
        assert!(sys.satisfied_mod(&assignment, p));
    }

    #[test]
    fn json_export_shape() {
        let d = torus_knot(3, 2).unwrap();
        let sys = emit_variety_system(&d, 1).unwrap();
        let json = serde_json::to_string(&PolySystemJson::from(&sys)).unwrap();
        let back: PolySystemJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.variables, 24);
        assert_eq!(back.polynomials.len(), 16);
        // first polynomial is a_1 d_1 - b_1 c_1 - 1
        assert_eq!(back.polynomials[0].len(), 3);
    }
}
