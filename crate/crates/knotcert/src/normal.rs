//! Verification-side normal surface theory.
//!
//! A normal surface in a t-tetrahedron triangulation is encoded by 7t
//! nonnegative integers: per tetrahedron, four triangle counts (one per
//! vertex) then three quadrilateral counts for the pairings 01|23, 02|13,
//! 03|12. Validity means nonnegativity, the matching equations across every
//! glued face, and at most one quadrilateral type per tetrahedron.
//! Connectedness and orientability of the encoded surface are *not* checked
//! anywhere here; reports carry that caveat explicitly.

use crate::diagram::KnotDiagram;
use crate::invariants::{self, InvariantError};
use crate::triangulation::{
    edge_index, face_vertices, pairing_of, Skeleton, TriError, Triangulation, EDGE_VERTICES,
};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalError {
    #[error("coordinate vector has {found} entries, expected 7t = {expected}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    Tri(#[from] TriError),
    #[error("vector violates the normal surface conditions")]
    InvalidVector,
    #[error("triangulation boundary is not a two-triangle one-vertex torus")]
    BoundaryNotTorus,
    #[error("boundary arc counts disagree across the two boundary triangles")]
    BoundaryMismatch,
    #[error("boundary curve entries must be even in certificate context")]
    OddEntries,
    #[error("malformed vector file: {0}")]
    Syntax(String),
}

/// Vector in Z^{7t}; kept as signed integers so invalid input can be
/// reported rather than rejected at parse time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalVector {
    pub coords: Vec<BigInt>,
}

pub fn tri_index(tet: usize, vertex: usize) -> usize {
    7 * tet + vertex
}

pub fn quad_index(tet: usize, pairing: usize) -> usize {
    7 * tet + 4 + pairing
}

#[derive(Serialize, Deserialize)]
struct VectorJson {
    coords: Vec<String>,
}

impl NormalVector {
    pub fn zero(tets: usize) -> Self {
        NormalVector {
            coords: vec![BigInt::zero(); 7 * tets],
        }
    }

    /// The vertex-linking vector of one vertex class: a triangle at every
    /// corner in that class.
    pub fn vertex_link(tri: &Triangulation, sk: &Skeleton, class: usize) -> Self {
        let mut v = NormalVector::zero(tri.tets);
        for tet in 0..tri.tets {
            for corner in 0..4 {
                if sk.vertex_class[4 * tet + corner] == class {
                    v.coords[tri_index(tet, corner)] = BigInt::one();
                }
            }
        }
        v
    }

    pub fn from_json(text: &str) -> Result<Self, NormalError> {
        let raw: VectorJson =
            serde_json::from_str(text).map_err(|e| NormalError::Syntax(e.to_string()))?;
        let coords = raw
            .coords
            .iter()
            .map(|s| s.parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| NormalError::Syntax(e.to_string()))?;
        Ok(NormalVector { coords })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&VectorJson {
            coords: self.coords.iter().map(|c| c.to_string()).collect(),
        })
        .unwrap()
    }

    fn tri(&self, tet: usize, vertex: usize) -> &BigInt {
        &self.coords[tri_index(tet, vertex)]
    }

    fn quad(&self, tet: usize, pairing: usize) -> &BigInt {
        &self.coords[quad_index(tet, pairing)]
    }

    /// Arcs of one corner type on a face: arcs cutting off vertex x within
    /// face f come from the triangle at x and the quad pairing x with the
    /// vertex opposite the face.
    pub fn corner_arcs(&self, tet: usize, face: usize, x: usize) -> BigInt {
        self.tri(tet, x) + self.quad(tet, pairing_of(x, face))
    }

    /// Intersection count with one tetrahedron edge: both end triangles and
    /// the two quads separating the endpoints.
    pub fn edge_weight_local(&self, tet: usize, u: usize, v: usize) -> BigInt {
        let skip = pairing_of(u, v);
        let quads: BigInt = (0..3)
            .filter(|&q| q != skip)
            .map(|q| self.quad(tet, q))
            .sum();
        self.tri(tet, u) + self.tri(tet, v) + quads
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Negative {
        index: usize,
    },
    Matching {
        from: (usize, usize),
        to: (usize, usize),
        corner: usize,
        lhs: BigInt,
        rhs: BigInt,
    },
    QuadCondition {
        tet: usize,
    },
}

/// Outcome of validate_normal. `valid()` only asserts the linear and quad
/// conditions; the listed properties are never checked here.
#[derive(Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
    pub not_checked: [&'static str; 2],
}

impl ValidityReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks nonnegativity, the three matching equations per glued face, and
/// the one-quad-type-per-tetrahedron condition, reporting every violation.
pub fn validate_normal(
    tri: &Triangulation,
    v: &NormalVector,
) -> Result<ValidityReport, NormalError> {
    if v.coords.len() != 7 * tri.tets {
        return Err(NormalError::Dimension {
            expected: 7 * tri.tets,
            found: v.coords.len(),
        });
    }
    let mut violations = Vec::new();
    for (i, c) in v.coords.iter().enumerate() {
        if c.is_negative() {
            violations.push(Violation::Negative { index: i });
        }
    }
    let mut sorted = tri.gluings.clone();
    sorted.sort_by_key(|g| (g.from, g.to));
    for g in &sorted {
        let [t1, f1] = g.from;
        let [t2, f2] = g.to;
        let verts = face_vertices(f1);
        for (i, &x) in verts.iter().enumerate() {
            let y = g.perm[i];
            let lhs = v.corner_arcs(t1, f1, x);
            let rhs = v.corner_arcs(t2, f2, y);
            if lhs != rhs {
                violations.push(Violation::Matching {
                    from: (t1, f1),
                    to: (t2, f2),
                    corner: x,
                    lhs,
                    rhs,
                });
            }
        }
    }
    for tet in 0..tri.tets {
        let nonzero = (0..3).filter(|&q| !v.quad(tet, q).is_zero()).count();
        if nonzero > 1 {
            violations.push(Violation::QuadCondition { tet });
        }
    }
    Ok(ValidityReport {
        violations,
        not_checked: ["connectedness", "orientability"],
    })
}

/// L1 norm of the coordinate vector.
pub fn weight(v: &NormalVector) -> BigUint {
    v.coords.iter().map(|c| c.magnitude().clone()).sum()
}

/// Total intersection count with the 1-skeleton, summed over edge classes.
pub fn edge_weight(tri: &Triangulation, v: &NormalVector) -> Result<BigUint, NormalError> {
    let sk = tri.skeleton()?;
    let mut total = BigUint::zero();
    for &(tet, e) in &sk.edge_rep {
        let (u, w) = EDGE_VERTICES[e];
        total += v.edge_weight_local(tet, u, w).magnitude();
    }
    Ok(total)
}

/// Every coordinate at most 2^{7t-1} and L1 weight at most 7t 2^{7t}.
pub fn check_bounds(tri: &Triangulation, v: &NormalVector) -> bool {
    let t = tri.tets;
    let coord_bound = BigUint::one() << (7 * t - 1);
    if v.coords
        .iter()
        .any(|c| c.is_negative() || *c.magnitude() > coord_bound)
    {
        return false;
    }
    weight(v) <= BigUint::from(7 * t as u64) * (BigUint::one() << (7 * t))
}

/// Euler characteristic of the encoded surface by cell counting: vertices on
/// triangulation edges, arcs on faces (interior faces once), disks as
/// 2-cells.
pub fn euler_char(tri: &Triangulation, v: &NormalVector) -> Result<BigInt, NormalError> {
    let report = validate_normal(tri, v)?;
    if !report.valid() {
        return Err(NormalError::InvalidVector);
    }
    let sk = tri.skeleton()?;
    let mut vertices = BigInt::zero();
    for &(tet, e) in &sk.edge_rep {
        let (u, w) = EDGE_VERTICES[e];
        vertices += v.edge_weight_local(tet, u, w);
        #[cfg(debug_assertions)]
        {
            // all instances of the class agree for a valid vector
            let class = sk.edge_class[6 * tet + e].0;
            for t2 in 0..tri.tets {
                for e2 in 0..6 {
                    if sk.edge_class[6 * t2 + e2].0 == class {
                        let (u2, w2) = EDGE_VERTICES[e2];
                        debug_assert_eq!(
                            v.edge_weight_local(t2, u2, w2),
                            v.edge_weight_local(tet, EDGE_VERTICES[e].0, EDGE_VERTICES[e].1)
                        );
                    }
                }
            }
        }
        let _ = (u, w);
    }
    let mut edges = BigInt::zero();
    for &(tet, f) in &sk.face_rep {
        for &x in &face_vertices(f) {
            edges += v.corner_arcs(tet, f, x);
        }
    }
    let faces: BigInt = v.coords.iter().sum();
    let chi = &vertices - &edges + &faces;
    #[cfg(debug_assertions)]
    debug_assert_eq!(chi, per_disk_euler(tri, &sk, v), "cell count cross-check");
    Ok(chi)
}

/// Cross-check: distribute each cell's contribution over the disks meeting
/// it (1/degree per corner, 1/multiplicity per side, 1 per disk) and sum,
/// scaled by the coordinate counts. Exact rational arithmetic.
#[cfg(debug_assertions)]
fn per_disk_euler(tri: &Triangulation, sk: &Skeleton, v: &NormalVector) -> BigInt {
    use num_rational::BigRational;
    let mut edge_degree = vec![0u64; sk.edge_count];
    for tet in 0..tri.tets {
        for e in 0..6 {
            edge_degree[sk.edge_class[6 * tet + e].0] += 1;
        }
    }
    let face_mult = |tet: usize, f: usize| -> u64 {
        if sk.partner[4 * tet + f].is_some() {
            2
        } else {
            1
        }
    };
    let mut chi = BigRational::zero();
    let rat = |n: u64| BigRational::from_integer(BigInt::from(n));
    for tet in 0..tri.tets {
        for corner in 0..4 {
            let count = v.tri(tet, corner);
            if count.is_zero() {
                continue;
            }
            let mut local = BigRational::from_integer(BigInt::one());
            for other in 0..4 {
                if other == corner {
                    continue;
                }
                let e = sk.edge_class[6 * tet + edge_index(corner, other)].0;
                local += rat(1) / rat(edge_degree[e]);
                // side on the face omitting `other`... accounted below
            }
            for f in 0..4 {
                if f == corner {
                    continue;
                }
                local -= rat(1) / rat(face_mult(tet, f));
            }
            chi += BigRational::from_integer(count.clone()) * local;
        }
        for q in 0..3 {
            let count = v.quad(tet, q);
            if count.is_zero() {
                continue;
            }
            let mut local = BigRational::from_integer(BigInt::one());
            let (a, b) = EDGE_VERTICES[q]; // the pairing's first pair
            let (c, d) = EDGE_VERTICES[pairing_complement(q)];
            // corners on the four edges joining the two pairs
            for (u, w) in [(a, c), (a, d), (b, c), (b, d)] {
                let e = sk.edge_class[6 * tet + edge_index(u, w)].0;
                local += rat(1) / rat(edge_degree[e]);
            }
            for f in 0..4 {
                local -= rat(1) / rat(face_mult(tet, f));
            }
            chi += BigRational::from_integer(count.clone()) * local;
        }
    }
    assert!(chi.is_integer());
    chi.to_integer()
}

#[cfg(debug_assertions)]
fn pairing_complement(q: usize) -> usize {
    // 01|23 -> edge 23, 02|13 -> edge 13, 03|12 -> edge 12
    match q {
        0 => 5,
        1 => 4,
        _ => 3,
    }
}

/// Arc counts of the boundary curve on a two-triangle one-vertex torus
/// boundary, one count per boundary edge class pair; the two triangles'
/// counts must agree corner-by-corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCurve {
    pub counts: [BigInt; 3],
}

pub fn boundary_curve(
    tri: &Triangulation,
    v: &NormalVector,
) -> Result<Vec<BoundaryCurve>, NormalError> {
    let report = validate_normal(tri, v)?;
    if !report.valid() {
        return Err(NormalError::InvalidVector);
    }
    let sk = tri.skeleton()?;
    if sk.boundary_faces.len() != 2 {
        return Err(NormalError::BoundaryNotTorus);
    }
    let (bt1, bf1) = sk.boundary_faces[0];
    let (bt2, bf2) = sk.boundary_faces[1];
    // single boundary vertex class
    let mut classes = Vec::with_capacity(6);
    for &(t, f) in &[(bt1, bf1), (bt2, bf2)] {
        for x in face_vertices(f) {
            classes.push(sk.vertex_class[4 * t + x]);
        }
    }
    if classes.iter().any(|&c| c != classes[0]) {
        return Err(NormalError::BoundaryNotTorus);
    }
    // each face's three edges must fall in three distinct classes, shared
    // between the two faces
    let face_edges = |t: usize, f: usize| -> Vec<usize> {
        let vs = face_vertices(f);
        vec![
            sk.edge_class[6 * t + edge_index(vs[0], vs[1])].0,
            sk.edge_class[6 * t + edge_index(vs[0], vs[2])].0,
            sk.edge_class[6 * t + edge_index(vs[1], vs[2])].0,
        ]
    };
    let (e1, e2) = (face_edges(bt1, bf1), face_edges(bt2, bf2));
    let mut s1 = e1.clone();
    s1.sort_unstable();
    s1.dedup();
    let mut s2 = e2.clone();
    s2.sort_unstable();
    s2.dedup();
    if s1.len() != 3 || s1 != s2 {
        return Err(NormalError::BoundaryNotTorus);
    }
    // corner at vertex x crosses the two face edges at x; pair corners of
    // the two triangles by equal edge-class pairs
    let corner_data = |t: usize, f: usize| -> Vec<([usize; 2], BigInt)> {
        face_vertices(f)
            .into_iter()
            .map(|x| {
                let others: Vec<usize> =
                    face_vertices(f).into_iter().filter(|&y| y != x).collect();
                let mut pair = [
                    sk.edge_class[6 * t + edge_index(x, others[0])].0,
                    sk.edge_class[6 * t + edge_index(x, others[1])].0,
                ];
                pair.sort_unstable();
                (pair, v.corner_arcs(t, f, x))
            })
            .collect()
    };
    let (mut c1, mut c2) = (corner_data(bt1, bf1), corner_data(bt2, bf2));
    c1.sort_by(|a, b| a.0.cmp(&b.0));
    c2.sort_by(|a, b| a.0.cmp(&b.0));
    if c1.iter().map(|(p, _)| p).ne(c2.iter().map(|(p, _)| p)) {
        return Err(NormalError::BoundaryNotTorus);
    }
    for (a, b) in c1.iter().zip(&c2) {
        if a.1 != b.1 {
            return Err(NormalError::BoundaryMismatch);
        }
    }
    Ok(vec![BoundaryCurve {
        counts: [c1[0].1.clone(), c1[1].1.clone(), c1[2].1.clone()],
    }])
}

/// Parity criterion for a certificate boundary (2a, 2b, 2c): the halved
/// curve is homologically nontrivial iff a+b or a+c is odd.
pub fn boundary_nontrivial(curve: &BoundaryCurve) -> Result<bool, NormalError> {
    let two = BigInt::from(2);
    let mut halves = Vec::with_capacity(3);
    for c in &curve.counts {
        let (q, r) = num_integer::Integer::div_rem(c, &two);
        if !r.is_zero() {
            return Err(NormalError::OddEntries);
        }
        halves.push(q);
    }
    let odd = |x: &BigInt| (x % &two).magnitude().is_one();
    let ab = &halves[0] + &halves[1];
    let ac = &halves[0] + &halves[2];
    Ok(odd(&ab) || odd(&ac))
}

/// Step-1 gate of the torus certificate verification: the Alexander
/// polynomial must differ from 1. Knots with trivial Alexander polynomial
/// (untwisted doubles and their kin) pass through this gate undetected; it
/// is sound only as a pre-filter.
pub fn delta_nontrivial_gate(d: &KnotDiagram) -> Result<bool, InvariantError> {
    Ok(!invariants::alexander(d)?.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lone_tet() -> Triangulation {
        Triangulation {
            tets: 1,
            gluings: vec![],
        }
    }

    #[test]
    fn zero_vector_is_valid_and_weightless() {
        let tri = lone_tet();
        let v = NormalVector::zero(1);
        let report = validate_normal(&tri, &v).unwrap();
        assert!(report.valid());
        assert_eq!(report.not_checked, ["connectedness", "orientability"]);
        assert_eq!(weight(&v), BigUint::zero());
        assert!(check_bounds(&tri, &v));
        assert_eq!(euler_char(&tri, &v).unwrap(), BigInt::zero());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let tri = lone_tet();
        let v = NormalVector {
            coords: vec![BigInt::zero(); 3],
        };
        assert_eq!(
            validate_normal(&tri, &v),
            Err(NormalError::Dimension {
                expected: 7,
                found: 3
            })
        );
    }

    #[test]
    fn single_triangle_is_a_disk() {
        let tri = lone_tet();
        let mut v = NormalVector::zero(1);
        v.coords[tri_index(0, 0)] = BigInt::one();
        assert!(validate_normal(&tri, &v).unwrap().valid());
        assert_eq!(euler_char(&tri, &v).unwrap(), BigInt::one());
        assert_eq!(weight(&v), BigUint::one());
        assert_eq!(edge_weight(&tri, &v).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn quad_condition_violated_by_two_types() {
        let tri = lone_tet();
        let mut v = NormalVector::zero(1);
        v.coords[quad_index(0, 0)] = BigInt::one();
        v.coords[quad_index(0, 1)] = BigInt::one();
        let report = validate_normal(&tri, &v).unwrap();
        assert_eq!(report.violations, vec![Violation::QuadCondition { tet: 0 }]);
    }

    #[test]
    fn negative_entry_reported() {
        let tri = lone_tet();
        let mut v = NormalVector::zero(1);
        v.coords[0] = BigInt::from(-2);
        let report = validate_normal(&tri, &v).unwrap();
        assert_eq!(report.violations, vec![Violation::Negative { index: 0 }]);
    }

    #[test]
    fn coordinate_bound_boundary_case() {
        let tri = lone_tet();
        let mut v = NormalVector::zero(1);
        v.coords[0] = BigInt::from(1u64 << 6); // 2^{7t-1} with t = 1
        assert!(check_bounds(&tri, &v));
        v.coords[0] += 1;
        assert!(!check_bounds(&tri, &v));
    }

    #[test]
    fn quad_in_lone_tet_is_a_disk() {
        let tri = lone_tet();
        let mut v = NormalVector::zero(1);
        v.coords[quad_index(0, 1)] = BigInt::one();
        // 4 vertices, 4 sides, 1 face
        assert_eq!(euler_char(&tri, &v).unwrap(), BigInt::one());
    }

    #[test]
    fn parity_criterion() {
        let curve = |a: i64, b: i64, c: i64| BoundaryCurve {
            counts: [BigInt::from(a), BigInt::from(b), BigInt::from(c)],
        };
        assert_eq!(boundary_nontrivial(&curve(0, 0, 0)).unwrap(), false);
        assert_eq!(boundary_nontrivial(&curve(2, 0, 0)).unwrap(), true);
        assert_eq!(boundary_nontrivial(&curve(2, 2, 4)).unwrap(), true);
        assert_eq!(boundary_nontrivial(&curve(4, 2, 2)).unwrap(), true);
        assert_eq!(boundary_nontrivial(&curve(2, 2, 2)).unwrap(), false);
        assert_eq!(
            boundary_nontrivial(&curve(1, 2, 2)),
            Err(NormalError::OddEntries)
        );
    }

    #[test]
    fn delta_gate() {
        use crate::braid::{pretzel, torus_knot};
        let unknot = KnotDiagram::parse("").unwrap();
        assert!(!delta_nontrivial_gate(&unknot).unwrap());
        assert!(delta_nontrivial_gate(&torus_knot(3, 2).unwrap()).unwrap());
        // the knotted (-3,5,7)-pretzel has trivial Alexander polynomial, so
        // the gate reports false: the documented false-negative class
        let p357 = pretzel(-3, 5, 7).unwrap();
        assert_eq!(p357.crossing_count(), 15);
        assert!(!delta_nontrivial_gate(&p357).unwrap());
        // the sibling (3,5,7) diagram pins the construction: its knot
        // determinant is 3*5 + 5*7 + 7*3 = 71
        let p357_pos = pretzel(3, 5, 7).unwrap();
        assert_eq!(
            invariants::determinant(&p357_pos).unwrap(),
            BigUint::from(71u32)
        );
    }
}
