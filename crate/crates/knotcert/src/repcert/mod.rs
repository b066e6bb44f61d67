//! Finite-field 2x2 representation certificates.
//!
//! An uncentered certificate witnesses that a diagram cannot represent a
//! torus knot: a pair (r,s) matching the diagram's Alexander polynomial and
//! signature (or nothing, when no pair matches), and in the former case a
//! representation of the knot group into SL2 over Z/p sending the peripheral
//! element mu^{rs} lambda to a non-central image. The modulus is carried as
//! an arbitrary-size integer and its primality is deliberately never checked:
//! a representation over Z/p certifies non-centrality for composite p just
//! as well.

mod search;
mod variety;

pub use search::{search_representation, search_uncentered};
pub use variety::{emit_variety_system, MultiPoly, PolySystem, PolySystemJson, TermJson};

use crate::diagram::{DiagramError, KnotDiagram, Relation, WirtingerPresentation};
use crate::invariants::{self, InvariantError};
use crate::torus::{identify_torus, TorusParams};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertError {
    #[error("malformed certificate: {0}")]
    Structure(String),
    #[error("expected {expected} matrices, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("generator index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("peripheral exponent m must satisfy |m| < 3n")]
    ExponentOutOfRange,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// 2x2 matrix over Z/p, entries reduced into [0, p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    pub entries: [BigUint; 4],
}

impl ModMatrix {
    pub fn identity(p: &BigUint) -> Self {
        let one = BigUint::one() % p;
        ModMatrix {
            entries: [one.clone(), BigUint::zero(), BigUint::zero(), one],
        }
    }

    pub fn new(entries: [BigUint; 4], p: &BigUint) -> Self {
        ModMatrix {
            entries: entries.map(|e| e % p),
        }
    }

    pub fn mul(&self, rhs: &ModMatrix, p: &BigUint) -> ModMatrix {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &rhs.entries;
        ModMatrix {
            entries: [
                (a * e + b * g) % p,
                (a * f + b * h) % p,
                (c * e + d * g) % p,
                (c * f + d * h) % p,
            ],
        }
    }

    pub fn det(&self, p: &BigUint) -> BigUint {
        let [a, b, c, d] = &self.entries;
        // a*d - b*c mod p without negatives
        ((a * d + p * p) - b * c) % p
    }

    /// Adjugate [[d, -b], [-c, a]]; inverse of a determinant-1 matrix.
    pub fn adjugate(&self, p: &BigUint) -> ModMatrix {
        let [a, b, c, d] = &self.entries;
        ModMatrix {
            entries: [d.clone(), (p - b) % p, (p - c) % p, a.clone()],
        }
    }

    pub fn commutes_with(&self, rhs: &ModMatrix, p: &BigUint) -> bool {
        self.mul(rhs, p) == rhs.mul(self, p)
    }
}

/// Image of a signed generator word under the matrices; inverses are taken
/// by the adjugate, which is valid because certificate matrices have
/// determinant 1.
pub fn eval_word(
    mats: &[ModMatrix],
    word: &[(usize, i8)],
    p: &BigUint,
) -> Result<ModMatrix, CertError> {
    let mut acc = ModMatrix::identity(p);
    for &(gen, sign) in word {
        let m = mats.get(gen).ok_or(CertError::IndexOutOfRange(gen))?;
        let factor = if sign >= 0 { m.clone() } else { m.adjugate(p) };
        acc = acc.mul(&factor, p);
    }
    Ok(acc)
}

/// det(M_i) = 1 for all i, and M_m M_n = M_p M_m for every relation.
pub fn check_relations(
    mats: &[ModMatrix],
    generators: usize,
    relations: &[Relation],
    p: &BigUint,
) -> Result<bool, CertError> {
    if mats.len() != generators {
        return Err(CertError::Arity {
            expected: generators,
            found: mats.len(),
        });
    }
    let one = BigUint::one() % p;
    for m in mats {
        if m.det(p) != one {
            return Ok(false);
        }
    }
    for rel in relations {
        for idx in [rel.conjugator, rel.input, rel.output] {
            if idx >= mats.len() {
                return Err(CertError::IndexOutOfRange(idx));
            }
        }
        let lhs = mats[rel.conjugator].mul(&mats[rel.input], p);
        let rhs = mats[rel.output].mul(&mats[rel.conjugator], p);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The word mu^{rs} lambda in the Wirtinger generators; length < 5n.
pub fn peripheral_word(pres: &WirtingerPresentation, rs: i64) -> Vec<(usize, i8)> {
    let sign = if rs >= 0 { 1 } else { -1 };
    let mut word = Vec::with_capacity(rs.unsigned_abs() as usize + pres.longitude.len());
    for _ in 0..rs.unsigned_abs() {
        word.push((0usize, sign));
    }
    word.extend_from_slice(&pres.longitude);
    word
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject { step: u8, reason: String },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }

    fn reject(step: u8, reason: impl Into<String>) -> Self {
        Verdict::Reject {
            step,
            reason: reason.into(),
        }
    }
}

/// An uncentered certificate; `p` and `matrices` are present exactly when
/// `torus` is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncenteredCertificate {
    pub torus: Option<TorusParams>,
    pub p: Option<BigUint>,
    pub matrices: Option<Vec<[BigUint; 4]>>,
}

impl UncenteredCertificate {
    pub fn none_certificate() -> Self {
        UncenteredCertificate {
            torus: None,
            p: None,
            matrices: None,
        }
    }

    fn validate(&self) -> Result<(), CertError> {
        match (&self.torus, &self.p, &self.matrices) {
            (None, None, None) => Ok(()),
            (Some(_), Some(p), Some(mats)) => {
                if p.is_zero() || (p % 2u32) != BigUint::one() || *p == BigUint::one() {
                    return Err(CertError::Structure(
                        "modulus must be an odd integer >= 3".into(),
                    ));
                }
                for m in mats {
                    if m.iter().any(|e| e >= p) {
                        return Err(CertError::Structure(
                            "matrix entries must be reduced mod p".into(),
                        ));
                    }
                }
                Ok(())
            }
            _ => Err(CertError::Structure(
                "torus pair, modulus, and matrices must be present together or absent together"
                    .into(),
            )),
        }
    }

    fn mod_matrices(&self, p: &BigUint) -> Vec<ModMatrix> {
        self.matrices
            .as_ref()
            .unwrap()
            .iter()
            .map(|e| ModMatrix::new(e.clone(), p))
            .collect()
    }
}

/// Verifies an uncentered certificate against a diagram.
///
/// Step 1 recomputes the torus identification and compares it with the
/// certificate's claim; a `none` claim that matches is accepted outright.
/// Step 2 checks determinants and the Wirtinger relations, step 3 that the
/// image of mu^{rs} lambda fails to commute with some generator image.
pub fn verify_uncentered(
    d: &KnotDiagram,
    cert: &UncenteredCertificate,
) -> Result<Verdict, CertError> {
    cert.validate()?;
    let delta = invariants::alexander(d)?;
    let sigma = invariants::signature(d)?;
    let expected = identify_torus(&delta, sigma, d.crossing_count());
    if expected != cert.torus {
        return Ok(Verdict::reject(
            1,
            format!(
                "torus identification mismatch: diagram gives {:?}, certificate claims {:?}",
                expected, cert.torus
            ),
        ));
    }
    let Some(params) = cert.torus else {
        return Ok(Verdict::Accept);
    };
    let p = cert.p.clone().unwrap();
    let pres = d.wirtinger()?;
    let mats = cert.mod_matrices(&p);
    if !check_relations(&mats, pres.generators, &pres.relations, &p)? {
        return Ok(Verdict::reject(
            2,
            "determinant or Wirtinger relation fails",
        ));
    }
    let word = peripheral_word(&pres, params.product());
    let image = eval_word(&mats, &word, &p)?;
    if mats.iter().any(|m| !image.commutes_with(m, &p)) {
        Ok(Verdict::Accept)
    } else {
        Ok(Verdict::reject(
            3,
            "image of mu^{rs} lambda commutes with every generator image",
        ))
    }
}

/// A finite presentation with relations as signed generator words.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: usize,
    pub relations: Vec<Vec<(usize, i8)>>,
}

impl Presentation {
    pub fn from_wirtinger(pres: &WirtingerPresentation) -> Self {
        let relations = pres
            .relations
            .iter()
            .map(|r| {
                vec![
                    (r.conjugator, 1i8),
                    (r.input, 1),
                    (r.conjugator, -1),
                    (r.output, -1),
                ]
            })
            .collect();
        Presentation {
            generators: pres.generators,
            relations,
        }
    }
}

/// Certificate that a finitely presented group has a nonabelian SL2(Z/p)
/// quotient: one matrix per generator.
#[derive(Clone, Debug)]
pub struct PresentationCertificate {
    pub p: BigUint,
    pub matrices: Vec<[BigUint; 4]>,
}

/// Verifies determinants, relations, and the existence of a noncommuting
/// pair of generator images (steps 4 and 5 of the satellite verification).
pub fn verify_nonabelian(
    pres: &Presentation,
    cert: &PresentationCertificate,
) -> Result<Verdict, CertError> {
    if cert.p.is_zero() || (&cert.p % 2u32) != BigUint::one() || cert.p == BigUint::one() {
        return Err(CertError::Structure(
            "modulus must be an odd integer >= 3".into(),
        ));
    }
    if cert.matrices.len() != pres.generators {
        return Err(CertError::Arity {
            expected: pres.generators,
            found: cert.matrices.len(),
        });
    }
    let p = &cert.p;
    let mats: Vec<ModMatrix> = cert
        .matrices
        .iter()
        .map(|e| ModMatrix::new(e.clone(), p))
        .collect();
    let one = BigUint::one() % p;
    if mats.iter().any(|m| m.det(p) != one) {
        return Ok(Verdict::reject(4, "a matrix has determinant != 1"));
    }
    let id = ModMatrix::identity(p);
    for (i, rel) in pres.relations.iter().enumerate() {
        if eval_word(&mats, rel, p)? != id {
            return Ok(Verdict::reject(4, format!("relation {} fails", i + 1)));
        }
    }
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            if !mats[i].commutes_with(&mats[j], p) {
                return Ok(Verdict::Accept);
            }
        }
    }
    Ok(Verdict::reject(5, "all generator images commute"))
}

// ---- wire formats ----

fn biguint_vec_to_json(m: &[BigUint; 4]) -> [String; 4] {
    [
        m[0].to_string(),
        m[1].to_string(),
        m[2].to_string(),
        m[3].to_string(),
    ]
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntOrString {
    Int(u64),
    Str(String),
}

fn parse_biguint(v: &IntOrString) -> Result<BigUint, String> {
    match v {
        IntOrString::Int(n) => Ok(BigUint::from(*n)),
        IntOrString::Str(s) => s.parse::<BigUint>().map_err(|e| e.to_string()),
    }
}

#[derive(Serialize)]
struct UncenteredJsonOut<'a> {
    torus: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrices: Option<Vec<[String; 4]>>,
    #[serde(skip)]
    _marker: std::marker::PhantomData<&'a ()>,
}

#[derive(Deserialize)]
struct UncenteredJsonIn {
    torus: Option<[i64; 2]>,
    #[serde(default)]
    p: Option<IntOrString>,
    #[serde(default)]
    matrices: Option<Vec<[IntOrString; 4]>>,
}

impl Serialize for UncenteredCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        UncenteredJsonOut {
            torus: self.torus.map(|t| [t.r, t.s]),
            p: self.p.as_ref().map(|p| p.to_string()),
            matrices: self
                .matrices
                .as_ref()
                .map(|ms| ms.iter().map(biguint_vec_to_json).collect()),
            _marker: std::marker::PhantomData,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UncenteredCertificate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = UncenteredJsonIn::deserialize(d)?;
        let torus = match raw.torus {
            None => None,
            Some([r, s]) => Some(TorusParams::new(r, s).map_err(D::Error::custom)?),
        };
        let p = raw
            .p
            .as_ref()
            .map(parse_biguint)
            .transpose()
            .map_err(D::Error::custom)?;
        let matrices = raw
            .matrices
            .map(|ms| {
                ms.iter()
                    .map(|m| {
                        Ok([
                            parse_biguint(&m[0])?,
                            parse_biguint(&m[1])?,
                            parse_biguint(&m[2])?,
                            parse_biguint(&m[3])?,
                        ])
                    })
                    .collect::<Result<Vec<_>, String>>()
            })
            .transpose()
            .map_err(D::Error::custom)?;
        Ok(UncenteredCertificate { torus, p, matrices })
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    generators: usize,
    /// relations as signed words in 1-based generators: [[gen, exp], ...]
    relations: Vec<Vec<[i64; 2]>>,
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PresentationJson {
            generators: self.generators,
            relations: self
                .relations
                .iter()
                .map(|rel| {
                    rel.iter()
                        .map(|&(g, e)| [g as i64 + 1, e as i64])
                        .collect()
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PresentationJson::deserialize(d)?;
        let mut relations = Vec::with_capacity(raw.relations.len());
        for rel in &raw.relations {
            let mut word = Vec::with_capacity(rel.len());
            for &[g, e] in rel {
                if g < 1 || g as usize > raw.generators {
                    return Err(D::Error::custom(format!("generator {} out of range", g)));
                }
                if e.unsigned_abs() > i8::MAX as u64 {
                    return Err(D::Error::custom("exponent out of range"));
                }
                // expand exponents into single letters
                let sign = if e >= 0 { 1i8 } else { -1 };
                for _ in 0..e.unsigned_abs() {
                    word.push((g as usize - 1, sign));
                }
            }
            relations.push(word);
        }
        Ok(Presentation {
            generators: raw.generators,
            relations,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationCertJson {
    p: IntOrString,
    matrices: Vec<[IntOrString; 4]>,
}

impl Serialize for PresentationCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            p: String,
            matrices: Vec<[String; 4]>,
        }
        Out {
            p: self.p.to_string(),
            matrices: self.matrices.iter().map(biguint_vec_to_json).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PresentationCertificate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PresentationCertJson::deserialize(d)?;
        let p = parse_biguint(&raw.p).map_err(D::Error::custom)?;
        let matrices = raw
            .matrices
            .iter()
            .map(|m| {
                Ok([
                    parse_biguint(&m[0])?,
                    parse_biguint(&m[1])?,
                    parse_biguint(&m[2])?,
                    parse_biguint(&m[3])?,
                ])
            })
            .collect::<Result<Vec<_>, String>>()
            .map_err(D::Error::custom)?;
        Ok(PresentationCertificate { p, matrices })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{braid_closure, torus_knot, BraidWord};

    fn u(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn p5() -> BigUint {
        u(5)
    }

    #[test]
    fn eval_word_identity_cases() {
        let p = p5();
        let m = ModMatrix::new([u(2), u(1), u(1), u(1)], &p); // det 1
        let mats = vec![m.clone()];
        assert_eq!(eval_word(&mats, &[], &p).unwrap(), ModMatrix::identity(&p));
        assert_eq!(
            eval_word(&mats, &[(0, 1), (0, -1)], &p).unwrap(),
            ModMatrix::identity(&p)
        );
        assert!(eval_word(&mats, &[(1, 1)], &p).is_err());
    }

    #[test]
    fn eval_word_matches_naive_products() {
        let p = u(97);
        let a = ModMatrix::new([u(3), u(1), u(5), u(2)], &p); // det 1
        let b = ModMatrix::new([u(2), u(3), u(3), u(5)], &p); // det 10-9 = 1
        let mats = vec![a.clone(), b.clone()];
        let word = [(0i64, 1i8), (1, 1), (0, -1), (1, 1)];
        let word: Vec<(usize, i8)> = word.iter().map(|&(g, e)| (g as usize, e)).collect();
        let naive = a
            .mul(&b, &p)
            .mul(&a.adjugate(&p), &p)
            .mul(&b, &p);
        assert_eq!(eval_word(&mats, &word, &p).unwrap(), naive);
    }

    #[test]
    fn constant_representation_satisfies_conjugation_relations() {
        let d = braid_closure(&BraidWord::new(2, vec![1, 1, 1])).unwrap();
        let pres = d.wirtinger().unwrap();
        let p = u(7);
        let m = ModMatrix::new([u(1), u(3), u(0), u(1)], &p);
        let mats = vec![m; 3];
        assert!(check_relations(&mats, 3, &pres.relations, &p).unwrap());
        let id_mats = vec![ModMatrix::identity(&p); 3];
        assert!(check_relations(&id_mats, 3, &pres.relations, &p).unwrap());
    }

    #[test]
    fn broken_relation_detected() {
        let d = braid_closure(&BraidWord::new(2, vec![1, 1, 1])).unwrap();
        let pres = d.wirtinger().unwrap();
        let p = u(7);
        let mats = vec![
            ModMatrix::new([u(1), u(3), u(0), u(1)], &p),
            ModMatrix::new([u(1), u(0), u(2), u(1)], &p),
            ModMatrix::new([u(1), u(3), u(0), u(1)], &p),
        ];
        assert!(!check_relations(&mats, 3, &pres.relations, &p).unwrap());
        // non-unit determinant also fails
        let bad = vec![ModMatrix::new([u(2), u(0), u(0), u(2)], &p); 3];
        assert!(!check_relations(&bad, 3, &pres.relations, &p).unwrap());
    }

    #[test]
    fn verify_none_certificate_on_figure_eight() {
        let d = braid_closure(&BraidWord::new(3, vec![1, -2, 1, -2])).unwrap();
        let verdict =
            verify_uncentered(&d, &UncenteredCertificate::none_certificate()).unwrap();
        assert!(verdict.is_accept());
    }

    #[test]
    fn verify_none_certificate_rejected_on_trefoil() {
        let d = torus_knot(3, 2).unwrap();
        let verdict =
            verify_uncentered(&d, &UncenteredCertificate::none_certificate()).unwrap();
        assert!(matches!(verdict, Verdict::Reject { step: 1, .. }));
    }

    #[test]
    fn verify_rejects_commuting_matrices_at_step_3() {
        // trefoil with its correct (r, s) but an abelian representation
        let d = torus_knot(3, 2).unwrap();
        let p = u(7);
        let m = [u(1), u(3), u(0), u(1)];
        let cert = UncenteredCertificate {
            torus: Some(TorusParams::new(3, 2).unwrap()),
            p: Some(p),
            matrices: Some(vec![m.clone(), m.clone(), m]),
        };
        let verdict = verify_uncentered(&d, &cert).unwrap();
        assert_eq!(
            verdict,
            Verdict::Reject {
                step: 3,
                reason: "image of mu^{rs} lambda commutes with every generator image".into()
            }
        );
    }

    #[test]
    fn malformed_certificates_are_structural_errors() {
        let d = torus_knot(3, 2).unwrap();
        let cert = UncenteredCertificate {
            torus: Some(TorusParams::new(3, 2).unwrap()),
            p: None,
            matrices: None,
        };
        assert!(matches!(
            verify_uncentered(&d, &cert),
            Err(CertError::Structure(_))
        ));
        let cert = UncenteredCertificate {
            torus: Some(TorusParams::new(3, 2).unwrap()),
            p: Some(u(4)),
            matrices: Some(vec![]),
        };
        assert!(matches!(
            verify_uncentered(&d, &cert),
            Err(CertError::Structure(_))
        ));
    }

    #[test]
    fn verify_nonabelian_paper_example() {
        // <y, t | t^2 y = y t^2> over F_5 with t diagonal, y rotation
        let pres = Presentation {
            generators: 2,
            relations: vec![vec![(1, 1), (1, 1), (0, 1), (1, -1), (1, -1), (0, -1)]],
        };
        let cert = PresentationCertificate {
            p: u(5),
            matrices: vec![
                [u(0), u(1), u(4), u(0)], // y
                [u(2), u(0), u(0), u(3)], // t
            ],
        };
        assert!(verify_nonabelian(&pres, &cert).unwrap().is_accept());
    }

    #[test]
    fn verify_nonabelian_rejects_abelian_and_broken() {
        // <x, y | xy = yx> with commuting images: abelian, step 5
        let pres = Presentation {
            generators: 2,
            relations: vec![vec![(0, 1), (1, 1), (0, -1), (1, -1)]],
        };
        let cert = PresentationCertificate {
            p: u(7),
            matrices: vec![
                [u(1), u(1), u(0), u(1)],
                [u(1), u(2), u(0), u(1)],
            ],
        };
        assert_eq!(
            verify_nonabelian(&pres, &cert).unwrap(),
            Verdict::reject(5, "all generator images commute")
        );
        // noncommuting images violating the relation: step 4
        let cert = PresentationCertificate {
            p: u(7),
            matrices: vec![
                [u(1), u(1), u(0), u(1)],
                [u(1), u(0), u(2), u(1)],
            ],
        };
        assert_eq!(
            verify_nonabelian(&pres, &cert).unwrap(),
            Verdict::reject(4, "relation 1 fails")
        );
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = UncenteredCertificate {
            torus: Some(TorusParams::new(-3, 2).unwrap()),
            p: Some(u(31)),
            matrices: Some(vec![[u(1), u(2), u(3), u(4)], [u(0), u(30), u(1), u(0)]]),
        };
        let s = serde_json::to_string(&cert).unwrap();
        let back: UncenteredCertificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cert);
        let none = UncenteredCertificate::none_certificate();
        let s = serde_json::to_string(&none).unwrap();
        assert_eq!(s, r#"{"torus":null}"#);
        let back: UncenteredCertificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, none);
    }

    #[test]
    fn presentation_json_expands_exponents() {
        let json = r#"{"generators": 2, "relations": [[[2,2],[1,1],[2,-2],[1,-1]]]}"#;
        let pres: Presentation = serde_json::from_str(json).unwrap();
        assert_eq!(
            pres.relations[0],
            vec![(1, 1), (1, 1), (0, 1), (1, -1), (1, -1), (0, -1)]
        );
    }
}
