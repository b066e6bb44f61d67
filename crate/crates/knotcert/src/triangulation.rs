//! Generalized triangulations of compact 3-manifolds.
//!
//! A triangulation is a set of abstract tetrahedra with some pairs of faces
//! glued by affine maps. Faces are labeled by the opposite vertex; the
//! vertices of face f are {0,1,2,3} minus f in ascending order, and a gluing
//! permutation lists their images. Vertex, edge, and triangle classes of the
//! quotient space are computed by union-find, with edge identifications
//! carrying a relative orientation so that reversed self-identifications
//! (which do not occur in manifold triangulations) are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TriError {
    #[error("tetrahedron or face index out of range in gluing {0}")]
    BadIndex(usize),
    #[error("gluing {0} maps a face to itself")]
    SelfGluing(usize),
    #[error("gluing {0}: permutation image is not the target face's vertex set")]
    BadPermutation(usize),
    #[error("face ({0},{1}) occurs in more than one gluing")]
    DoubleGluing(usize, usize),
    #[error("an edge is identified with itself reversed; not a manifold triangulation")]
    ReversedEdge,
    #[error("malformed triangulation file: {0}")]
    Syntax(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub from: [usize; 2],
    pub to: [usize; 2],
    pub perm: [usize; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Triangulation {
    pub tets: usize,
    pub gluings: Vec<Gluing>,
}

/// Vertices of face f in ascending order.
pub fn face_vertices(f: usize) -> [usize; 3] {
    match f {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        _ => [0, 1, 2],
    }
}

/// Edge index 0..6 for a vertex pair, lexicographic: 01 02 03 12 13 23.
pub fn edge_index(u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        _ => 5,
    }
}

pub const EDGE_VERTICES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of the vertex pairing {a,b} | {rest}: 01|23 -> 0, 02|13 -> 1,
/// 03|12 -> 2. This is both a quadrilateral type and the key for which quad
/// produces which normal arcs.
pub fn pairing_of(a: usize, b: usize) -> usize {
    debug_assert_ne!(a, b);
    if a == 0 || b == 0 {
        edge_index(a, b)
    } else {
        // complement pair contains 0
        let (c, d) = match (a.min(b), a.max(b)) {
            (2, 3) => (0, 1),
            (1, 3) => (0, 2),
            _ => (0, 3),
        };
        edge_index(c, d)
    }
}

struct SignedUnionFind {
    parent: Vec<usize>,
    /// sign relative to parent
    sign: Vec<i8>,
}

impl SignedUnionFind {
    fn new(n: usize) -> Self {
        SignedUnionFind {
            parent: (0..n).collect(),
            sign: vec![1; n],
        }
    }

    /// (root, sign of x relative to root)
    fn find(&mut self, x: usize) -> (usize, i8) {
        if self.parent[x] == x {
            return (x, 1);
        }
        let (root, s) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.sign[x] *= s;
        (root, self.sign[x])
    }

    /// Unite with x = rel * y; false on an inconsistent (reversed) merge.
    fn unite(&mut self, x: usize, y: usize, rel: i8) -> bool {
        let (rx, sx) = self.find(x);
        let (ry, sy) = self.find(y);
        if rx == ry {
            return sx == rel * sy;
        }
        // rx = sx^-1 * x = sx * rel * y = sx * rel * sy * ry
        self.parent[rx] = ry;
        self.sign[rx] = sx * rel * sy;
        true
    }
}

/// Quotient cell structure of a triangulation.
pub struct Skeleton {
    pub vertex_class: Vec<usize>,
    pub vertex_count: usize,
    /// class and relative orientation of each (tet, edge 0..6)
    pub edge_class: Vec<(usize, i8)>,
    pub edge_count: usize,
    /// class of each (tet, face); None means the face is the class rep
    pub face_class: Vec<usize>,
    pub face_count: usize,
    /// representative (tet, face/edge/vertex) per class
    pub face_rep: Vec<(usize, usize)>,
    pub edge_rep: Vec<(usize, usize)>,
    pub boundary_faces: Vec<(usize, usize)>,
    /// per (tet, face): the gluing partner, if any
    pub partner: Vec<Option<(usize, usize, [usize; 4])>>,
}

impl Triangulation {
    pub fn from_json(text: &str) -> Result<Self, TriError> {
        let t: Triangulation =
            serde_json::from_str(text).map_err(|e| TriError::Syntax(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap()
    }

    pub fn validate(&self) -> Result<(), TriError> {
        let mut used = vec![false; 4 * self.tets];
        for (i, g) in self.gluings.iter().enumerate() {
            let [t1, f1] = g.from;
            let [t2, f2] = g.to;
            if t1 >= self.tets || t2 >= self.tets || f1 > 3 || f2 > 3 {
                return Err(TriError::BadIndex(i));
            }
            if (t1, f1) == (t2, f2) {
                return Err(TriError::SelfGluing(i));
            }
            let mut image = g.perm;
            image.sort_unstable();
            if image != face_vertices(f2) {
                return Err(TriError::BadPermutation(i));
            }
            for &(t, f) in &[(t1, f1), (t2, f2)] {
                if used[4 * t + f] {
                    return Err(TriError::DoubleGluing(t, f));
                }
                used[4 * t + f] = true;
            }
        }
        self.skeleton().map(|_| ())
    }

    /// Extended vertex map of a gluing: face vertices per the permutation,
    /// and the omitted vertex to the omitted vertex.
    fn vertex_map(g: &Gluing) -> [usize; 4] {
        let mut map = [usize::MAX; 4];
        let from = face_vertices(g.from[1]);
        for (i, &v) in from.iter().enumerate() {
            map[v] = g.perm[i];
        }
        map[g.from[1]] = g.to[1];
        map
    }

    pub fn skeleton(&self) -> Result<Skeleton, TriError> {
        let t = self.tets;
        let mut partner: Vec<Option<(usize, usize, [usize; 4])>> = vec![None; 4 * t];
        for g in &self.gluings {
            let map = Self::vertex_map(g);
            let mut inverse = [usize::MAX; 4];
            for (v, &w) in map.iter().enumerate() {
                inverse[w] = v;
            }
            partner[4 * g.from[0] + g.from[1]] = Some((g.to[0], g.to[1], map));
            partner[4 * g.to[0] + g.to[1]] = Some((g.from[0], g.from[1], inverse));
        }

        // vertices
        let mut vuf: Vec<usize> = (0..4 * t).collect();
        fn vfind(uf: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            let mut c = x;
            while uf[c] != r {
                let n = uf[c];
                uf[c] = r;
                c = n;
            }
            r
        }
        // edges, with sign
        let mut euf = SignedUnionFind::new(6 * t);
        for g in &self.gluings {
            let map = Self::vertex_map(g);
            let [t1, f1] = g.from;
            let [t2, _] = g.to;
            let verts = face_vertices(f1);
            for &v in &verts {
                let a = vfind(&mut vuf, 4 * t1 + v);
                let b = vfind(&mut vuf, 4 * t2 + map[v]);
                vuf[a] = b;
            }
            for i in 0..3 {
                for j in i + 1..3 {
                    let (u, v) = (verts[i], verts[j]); // u < v
                    let (iu, iv) = (map[u], map[v]);
                    let rel = if iu < iv { 1 } else { -1 };
                    let e1 = 6 * t1 + edge_index(u, v);
                    let e2 = 6 * t2 + edge_index(iu, iv);
                    if !euf.unite(e1, e2, rel) {
                        return Err(TriError::ReversedEdge);
                    }
                }
            }
        }
        // number classes
        let mut vertex_class = vec![0usize; 4 * t];
        let mut vmap = vec![usize::MAX; 4 * t];
        let mut vertex_count = 0;
        for x in 0..4 * t {
            let r = vfind(&mut vuf, x);
            if vmap[r] == usize::MAX {
                vmap[r] = vertex_count;
                vertex_count += 1;
            }
            vertex_class[x] = vmap[r];
        }
        let mut edge_class = vec![(0usize, 1i8); 6 * t];
        let mut emap = vec![usize::MAX; 6 * t];
        let mut edge_rep = Vec::new();
        let mut edge_count = 0;
        for x in 0..6 * t {
            let (r, s) = euf.find(x);
            if emap[r] == usize::MAX {
                emap[r] = edge_count;
                edge_count += 1;
                // normalize the representative to sign +1: use x itself
                edge_rep.push((x / 6, x % 6));
            }
            edge_class[x] = (emap[r], s);
        }
        // orient classes by their chosen representative, not the UF root
        for class in 0..edge_count {
            let (rt, re) = edge_rep[class];
            let (_, rep_sign) = euf.find(6 * rt + re);
            if rep_sign == -1 {
                for x in 0..6 * t {
                    if edge_class[x].0 == class {
                        edge_class[x].1 = -edge_class[x].1;
                    }
                }
            }
        }
        // faces
        let mut face_class = vec![usize::MAX; 4 * t];
        let mut face_rep = Vec::new();
        let mut boundary_faces = Vec::new();
        let mut face_count = 0;
        for tet in 0..t {
            for f in 0..4 {
                if face_class[4 * tet + f] != usize::MAX {
                    continue;
                }
                face_class[4 * tet + f] = face_count;
                face_rep.push((tet, f));
                if let Some((t2, f2, _)) = partner[4 * tet + f] {
                    face_class[4 * t2 + f2] = face_count;
                } else {
                    boundary_faces.push((tet, f));
                }
                face_count += 1;
            }
        }
        Ok(Skeleton {
            vertex_class,
            vertex_count,
            edge_class,
            edge_count,
            face_class,
            face_count,
            face_rep,
            edge_rep,
            boundary_faces,
            partner,
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.tets == 0 {
            return true;
        }
        let mut seen = vec![false; self.tets];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for g in &self.gluings {
                for (a, b) in [(g.from[0], g.to[0]), (g.to[0], g.from[0])] {
                    if a == t && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Orientability: tetrahedra admit signs with every gluing's extended
    /// vertex map odd between equal signs.
    pub fn is_orientable(&self) -> bool {
        let mut orient: Vec<i8> = vec![0; self.tets];
        for start in 0..self.tets {
            if orient[start] != 0 {
                continue;
            }
            orient[start] = 1;
            let mut stack = vec![start];
            while let Some(t) = stack.pop() {
                for g in &self.gluings {
                    let (a, b, map) = if g.from[0] == t {
                        (t, g.to[0], Self::vertex_map(g))
                    } else if g.to[0] == t {
                        let map = Self::vertex_map(g);
                        let mut inv = [0usize; 4];
                        for (v, &w) in map.iter().enumerate() {
                            inv[w] = v;
                        }
                        (t, g.from[0], inv)
                    } else {
                        continue;
                    };
                    let want = -perm4_sign(&map) * orient[a];
                    if orient[b] == 0 {
                        orient[b] = want;
                        stack.push(b);
                    } else if orient[b] != want {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn perm4_sign(map: &[usize; 4]) -> i8 {
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if map[i] > map[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two tetrahedra glued along one face by the identity-like map.
    fn two_tet_ball() -> Triangulation {
        Triangulation {
            tets: 2,
            gluings: vec![Gluing {
                from: [0, 0],
                to: [1, 0],
                perm: [1, 2, 3],
            }],
        }
    }

    #[test]
    fn lone_tetrahedron_skeleton() {
        let t = Triangulation {
            tets: 1,
            gluings: vec![],
        };
        t.validate().unwrap();
        let sk = t.skeleton().unwrap();
        assert_eq!(sk.vertex_count, 4);
        assert_eq!(sk.edge_count, 6);
        assert_eq!(sk.face_count, 4);
        assert_eq!(sk.boundary_faces.len(), 4);
        assert!(t.is_orientable());
    }

    #[test]
    fn two_tet_ball_skeleton() {
        let t = two_tet_ball();
        t.validate().unwrap();
        let sk = t.skeleton().unwrap();
        assert_eq!(sk.vertex_count, 5);
        assert_eq!(sk.edge_count, 9);
        assert_eq!(sk.face_count, 7);
        assert_eq!(sk.boundary_faces.len(), 6);
        assert!(t.is_connected());
        assert!(t.is_orientable());
    }

    #[test]
    fn validation_rejects_bad_gluings() {
        let bad = Triangulation {
            tets: 1,
            gluings: vec![Gluing {
                from: [0, 0],
                to: [0, 0],
                perm: [1, 2, 3],
            }],
        };
        assert_eq!(bad.validate(), Err(TriError::SelfGluing(0)));
        let bad = Triangulation {
            tets: 2,
            gluings: vec![Gluing {
                from: [0, 0],
                to: [1, 1],
                perm: [1, 2, 3],
            }],
        };
        assert_eq!(bad.validate(), Err(TriError::BadPermutation(0)));
        let bad = Triangulation {
            tets: 2,
            gluings: vec![
                Gluing {
                    from: [0, 0],
                    to: [1, 0],
                    perm: [1, 2, 3],
                },
                Gluing {
                    from: [1, 0],
                    to: [0, 1],
                    perm: [0, 2, 3],
                },
            ],
        };
        assert_eq!(bad.validate(), Err(TriError::DoubleGluing(1, 0)));
    }

    #[test]
    fn json_round_trip() {
        let t = two_tet_ball();
        let s = t.to_json();
        let back = Triangulation::from_json(&s).unwrap();
        assert_eq!(back.tets, 2);
        assert_eq!(back.gluings, t.gluings);
    }
}
