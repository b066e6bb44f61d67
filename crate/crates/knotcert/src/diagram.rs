//! Knot diagrams as oriented PD codes.
//!
//! A diagram with n crossings is a list of tuples X(a,b,c,d) of edge labels
//! 1..2n: `a` is the incoming under-strand edge and b, c, d follow
//! counterclockwise, so `c` is the outgoing under-strand. Edges are labeled
//! consecutively along the knot, which fixes the over-strand direction: the
//! over strand runs d -> b when b follows d along the knot, and b -> d
//! otherwise. A 1-crossing diagram is ambiguous (both hold); we read it as
//! d -> b.

use serde::Deserialize;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed PD syntax: {0}")]
    Syntax(String),
    #[error("edge label {0} appears {1} times, expected exactly 2")]
    LabelCount(usize, usize),
    #[error("edge labels must be 1..=2n, found {0}")]
    LabelRange(usize),
    #[error(
        "crossing {0}: labels are not consecutive along a single closed component \
         (multi-component links are not supported)"
    )]
    NotSequential(usize),
    #[error("crossing {0}: edge {1} is used twice as an incoming or twice as an outgoing edge")]
    BadIncidence(usize, usize),
    #[error("operation requires at least one crossing")]
    Empty,
    #[error("checkerboard coloring failed; underlying 4-valent graph is not checkerboardable")]
    NotCheckerboardable,
}

/// One crossing X(a,b,c,d): incoming under-strand first, counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing(pub [usize; 4]);

impl Crossing {
    pub fn a(&self) -> usize {
        self.0[0]
    }
    pub fn b(&self) -> usize {
        self.0[1]
    }
    pub fn c(&self) -> usize {
        self.0[2]
    }
    pub fn d(&self) -> usize {
        self.0[3]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotDiagram {
    crossings: Vec<Crossing>,
    /// +1 when the over strand runs d -> b, -1 when it runs b -> d.
    signs: Vec<i8>,
}

#[derive(Deserialize)]
struct PdJson {
    pd: Vec<[usize; 4]>,
}

impl KnotDiagram {
    /// Parses either bare PD text `X(a,b,c,d), ...` or a JSON document
    /// `{"pd": [[a,b,c,d], ...]}`. Empty input is the 0-crossing unknot.
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let trimmed = text.trim();
        if trimmed.starts_with('{') {
            let doc: PdJson = serde_json::from_str(trimmed)
                .map_err(|e| DiagramError::Syntax(e.to_string()))?;
            return KnotDiagram::from_tuples(doc.pd);
        }
        KnotDiagram::from_tuples(parse_pd_text(trimmed)?)
    }

    pub fn from_tuples(tuples: Vec<[usize; 4]>) -> Result<Self, DiagramError> {
        let n = tuples.len();
        let mut counts = vec![0usize; 2 * n + 1];
        for t in &tuples {
            for &e in t {
                if e == 0 || e > 2 * n {
                    return Err(DiagramError::LabelRange(e));
                }
                counts[e] += 1;
            }
        }
        for (e, &c) in counts.iter().enumerate().skip(1) {
            if c != 2 {
                return Err(DiagramError::LabelCount(e, c));
            }
        }
        let succ = |e: usize| e % (2 * n) + 1;
        let mut signs = Vec::with_capacity(n);
        let mut heads = vec![0usize; 2 * n + 1]; // count of incoming uses
        let mut tails = vec![0usize; 2 * n + 1];
        for (i, t) in tuples.iter().enumerate() {
            let [a, b, c, d] = *t;
            if c != succ(a) {
                return Err(DiagramError::NotSequential(i));
            }
            // over direction from the labeling; prefer d -> b if ambiguous
            let sign = if b == succ(d) {
                1
            } else if d == succ(b) {
                -1
            } else {
                return Err(DiagramError::NotSequential(i));
            };
            signs.push(sign);
            let (over_in, over_out) = if sign == 1 { (d, b) } else { (b, d) };
            for e in [a, over_in] {
                heads[e] += 1;
                if heads[e] > 1 {
                    return Err(DiagramError::BadIncidence(i, e));
                }
            }
            for e in [c, over_out] {
                tails[e] += 1;
                if tails[e] > 1 {
                    return Err(DiagramError::BadIncidence(i, e));
                }
            }
        }
        Ok(KnotDiagram {
            crossings: tuples.into_iter().map(Crossing).collect(),
            signs,
        })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Sign of crossing i: +1 where the over strand runs d -> b.
    pub fn sign(&self, i: usize) -> i8 {
        self.signs[i]
    }

    pub fn over_in(&self, i: usize) -> usize {
        let cr = &self.crossings[i];
        if self.signs[i] == 1 {
            cr.d()
        } else {
            cr.b()
        }
    }

    pub fn over_out(&self, i: usize) -> usize {
        let cr = &self.crossings[i];
        if self.signs[i] == 1 {
            cr.b()
        } else {
            cr.d()
        }
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    /// Diagrams with at most two crossings always represent the unknot.
    pub fn is_small_unknot(&self) -> bool {
        self.crossing_count() <= 2
    }

    /// The mirror diagram: same shadow, every crossing switched.
    pub fn mirror(&self) -> KnotDiagram {
        let tuples = self
            .crossings
            .iter()
            .map(|cr| [cr.a(), cr.d(), cr.c(), cr.b()])
            .collect();
        KnotDiagram::from_tuples(tuples).expect("mirror of a valid diagram is valid")
    }

    pub fn to_pd_text(&self) -> String {
        let mut out = String::new();
        for (i, cr) in self.crossings.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            write!(out, "X({},{},{},{})", cr.a(), cr.b(), cr.c(), cr.d()).unwrap();
        }
        out
    }

    /// Strand (over-arc) index of every edge. Strands are numbered by their
    /// smallest edge label, so the strand of edge 1 is strand 0.
    pub fn strands(&self) -> Strands {
        let n2 = self.edge_count();
        let mut uf: Vec<usize> = (0..n2).collect();
        fn find(uf: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            let mut c = x;
            while uf[c] != r {
                let next = uf[c];
                uf[c] = r;
                c = next;
            }
            r
        }
        for i in 0..self.crossing_count() {
            let a = find(&mut uf, self.over_in(i) - 1);
            let b = find(&mut uf, self.over_out(i) - 1);
            uf[a] = b;
        }
        let mut index = vec![usize::MAX; n2];
        let mut count = 0;
        let mut of_edge = vec![0usize; n2];
        for e in 0..n2 {
            let root = find(&mut uf, e);
            if index[root] == usize::MAX {
                index[root] = count;
                count += 1;
            }
            of_edge[e] = index[root];
        }
        debug_assert_eq!(count, self.crossing_count().max(n2.min(1)));
        Strands { count, of_edge }
    }

    /// Wirtinger presentation with meridian g_1 and the longitude word.
    ///
    /// Every relation is stored in the conjugation form
    /// g_m g_n g_m^{-1} = g_p: at a positive crossing the over strand
    /// conjugates the incoming under-strand onto the outgoing one, at a
    /// negative crossing the roles of incoming and outgoing swap.
    pub fn wirtinger(&self) -> Result<WirtingerPresentation, DiagramError> {
        let n = self.crossing_count();
        if n == 0 {
            return Err(DiagramError::Empty);
        }
        let strands = self.strands();
        let mut relations = Vec::with_capacity(n);
        for i in 0..n {
            let over = strands.of_edge[self.over_in(i) - 1];
            let inc = strands.of_edge[self.crossings[i].a() - 1];
            let out = strands.of_edge[self.crossings[i].c() - 1];
            let (m, nn, p) = if self.signs[i] == 1 {
                (over, inc, out)
            } else {
                (over, out, inc)
            };
            relations.push(Relation {
                conjugator: m,
                input: nn,
                output: p,
            });
        }
        let longitude = self.longitude_of(&strands);
        Ok(WirtingerPresentation {
            generators: strands.count,
            relations,
            longitude,
        })
    }

    /// The longitude word alone; see [`WirtingerPresentation::longitude`].
    pub fn longitude_word(&self) -> Result<Vec<(usize, i8)>, DiagramError> {
        Ok(self.wirtinger()?.longitude)
    }

    /// Traverse the knot from edge 1; each underpass contributes the
    /// over-strand generator with the crossing sign. New letters multiply on
    /// the left of the accumulated word (the loop picks up over-curtain
    /// passages against reading order), so the word lists the underpasses in
    /// reverse traversal order, closed with mu^{-writhe} to make it
    /// nullhomologous. With the word read this way, mu^{rs} lambda lands in
    /// the center for every torus-braid closure, which is what the
    /// certificate checks require.
    fn longitude_of(&self, strands: &Strands) -> Vec<(usize, i8)> {
        let n = self.crossing_count();
        let mut under_at = vec![usize::MAX; 2 * n + 1];
        for i in 0..n {
            under_at[self.crossings[i].a()] = i;
        }
        let mut word = Vec::with_capacity(2 * n);
        for e in (1..=2 * n).rev() {
            let i = under_at[e];
            if i != usize::MAX {
                word.push((strands.of_edge[self.over_in(i) - 1], self.signs[i]));
            }
        }
        let w = self.writhe();
        let sign = if w > 0 { -1 } else { 1 };
        for _ in 0..w.unsigned_abs() {
            word.push((0, sign));
        }
        word
    }

    /// Complementary regions of the underlying 4-valent plane graph.
    pub fn faces(&self) -> Result<Faces, DiagramError> {
        let n = self.crossing_count();
        if n == 0 {
            return Err(DiagramError::Empty);
        }
        // slots[i] = four (edge, arrives_here) pairs counterclockwise
        let mut slots = Vec::with_capacity(n);
        let mut arrive_slot = vec![(usize::MAX, usize::MAX); 2 * n + 1];
        let mut depart_slot = vec![(usize::MAX, usize::MAX); 2 * n + 1];
        for (i, cr) in self.crossings.iter().enumerate() {
            let over_in = self.over_in(i);
            let s = [
                (cr.a(), true),
                (cr.b(), cr.b() == over_in),
                (cr.c(), false),
                (cr.d(), cr.d() == over_in),
            ];
            for (k, &(e, arrives)) in s.iter().enumerate() {
                if arrives {
                    arrive_slot[e] = (i, k);
                } else {
                    depart_slot[e] = (i, k);
                }
            }
            slots.push(s);
        }
        // darts: 2e for forward (along orientation), 2e+1 for backward
        let dart_count = 4 * n;
        let next = |dart: usize| -> usize {
            let e = dart / 2 + 1;
            let (cr, s) = if dart % 2 == 0 {
                arrive_slot[e]
            } else {
                depart_slot[e]
            };
            let (e2, arrives) = slots[cr][(s + 1) % 4];
            if arrives {
                2 * (e2 - 1) + 1 // leaves backward along e2
            } else {
                2 * (e2 - 1)
            }
        };
        let mut face_of_dart = vec![usize::MAX; dart_count];
        let mut count = 0;
        for start in 0..dart_count {
            if face_of_dart[start] != usize::MAX {
                continue;
            }
            let mut d = start;
            while face_of_dart[d] == usize::MAX {
                face_of_dart[d] = count;
                d = next(d);
            }
            count += 1;
        }
        debug_assert_eq!(count, n + 2, "a knot shadow has n + 2 regions");
        // quadrant between slots k and k+1 = face of the dart arriving at slot k
        let mut quadrants = Vec::with_capacity(n);
        for (i, s) in slots.iter().enumerate() {
            let mut q = [0usize; 4];
            for (k, &(e, arrives)) in s.iter().enumerate() {
                let dart = if arrives { 2 * (e - 1) } else { 2 * (e - 1) + 1 };
                q[k] = face_of_dart[dart];
            }
            let _ = i;
            quadrants.push(q);
        }
        Ok(Faces {
            count,
            face_of_dart,
            quadrants,
        })
    }

    /// Checkerboard data for the canonical coloring (the one with fewer white
    /// regions; on a tie, the one where the lowest-numbered region is white).
    pub fn checkerboard(&self) -> Result<CheckerboardData, DiagramError> {
        self.checkerboard_inner(false)
    }

    /// The opposite coloring, used to check coloring independence downstream.
    pub fn checkerboard_alternate(&self) -> Result<CheckerboardData, DiagramError> {
        self.checkerboard_inner(true)
    }

    fn checkerboard_inner(&self, flip: bool) -> Result<CheckerboardData, DiagramError> {
        let n = self.crossing_count();
        let faces = self.faces()?;
        // 2-color the regions: the two sides of every edge differ
        let mut color = vec![u8::MAX; faces.count];
        color[faces.face_of_dart[0]] = 0;
        let mut changed = true;
        while changed {
            changed = false;
            for e in 0..2 * n {
                let l = faces.face_of_dart[2 * e];
                let r = faces.face_of_dart[2 * e + 1];
                match (color[l], color[r]) {
                    (u8::MAX, u8::MAX) => {}
                    (cl, u8::MAX) => {
                        color[r] = 1 - cl;
                        changed = true;
                    }
                    (u8::MAX, cr) => {
                        color[l] = 1 - cr;
                        changed = true;
                    }
                    (cl, cr) if cl == cr => return Err(DiagramError::NotCheckerboardable),
                    _ => {}
                }
            }
        }
        let zeros = color.iter().filter(|&&c| c == 0).count();
        let ones = faces.count - zeros;
        let mut white_color = match zeros.cmp(&ones) {
            std::cmp::Ordering::Less => 0,
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Equal => color[0], // region 0 white on ties
        };
        if flip {
            white_color = 1 - white_color;
        }
        let is_white: Vec<bool> = color.iter().map(|&c| c == white_color).collect();
        let white_faces: Vec<usize> = (0..faces.count).filter(|&f| is_white[f]).collect();
        let mut white_index = vec![usize::MAX; faces.count];
        for (i, &f) in white_faces.iter().enumerate() {
            white_index[f] = i;
        }
        let mut eta = Vec::with_capacity(n);
        let mut kind = Vec::with_capacity(n);
        let mut white_quads = Vec::with_capacity(n);
        for i in 0..n {
            let q = faces.quadrants[i];
            debug_assert_eq!(is_white[q[0]], is_white[q[2]]);
            debug_assert_eq!(is_white[q[1]], is_white[q[3]]);
            debug_assert_ne!(is_white[q[0]], is_white[q[1]]);
            eta.push(if is_white[q[1]] { -1 } else { 1 });
            // the two departing edges flank q1 at a positive crossing, q2 at
            // a negative one; shaded flanked quadrant means type II
            let flanked = if self.signs[i] == 1 { q[1] } else { q[2] };
            kind.push(if is_white[flanked] {
                CrossingKind::TypeI
            } else {
                CrossingKind::TypeII
            });
            let pair = if is_white[q[0]] {
                [white_index[q[0]], white_index[q[2]]]
            } else {
                [white_index[q[1]], white_index[q[3]]]
            };
            white_quads.push(pair);
        }
        Ok(CheckerboardData {
            region_count: faces.count,
            white_faces,
            eta,
            kind,
            white_quads,
        })
    }
}

fn parse_pd_text(text: &str) -> Result<Vec<[usize; 4]>, DiagramError> {
    let mut tuples = Vec::new();
    let mut rest = text;
    loop {
        rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        if rest.is_empty() {
            break;
        }
        if !rest.starts_with('X') {
            return Err(DiagramError::Syntax(format!(
                "expected 'X(' at: {:.12}...",
                rest
            )));
        }
        rest = rest[1..].trim_start();
        if !rest.starts_with('(') {
            return Err(DiagramError::Syntax("missing '(' after X".into()));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| DiagramError::Syntax("missing ')'".into()))?;
        let inner = &rest[1..close];
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(DiagramError::Syntax(format!(
                "tuple has {} entries, expected 4",
                parts.len()
            )));
        }
        let mut tuple = [0usize; 4];
        for (i, p) in parts.iter().enumerate() {
            tuple[i] = p
                .parse()
                .map_err(|_| DiagramError::Syntax(format!("bad integer '{}'", p)))?;
        }
        tuples.push(tuple);
        rest = &rest[close + 1..];
    }
    Ok(tuples)
}

pub struct Strands {
    pub count: usize,
    /// strand index of each edge, edges indexed from 0 (edge label - 1)
    pub of_edge: Vec<usize>,
}

/// One Wirtinger relation g_m g_n g_m^{-1} = g_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relation {
    pub conjugator: usize,
    pub input: usize,
    pub output: usize,
}

#[derive(Clone, Debug)]
pub struct WirtingerPresentation {
    pub generators: usize,
    pub relations: Vec<Relation>,
    /// Longitude as a signed generator word; the meridian is generator 0.
    pub longitude: Vec<(usize, i8)>,
}

impl WirtingerPresentation {
    pub fn longitude_exponent_sum(&self) -> i64 {
        self.longitude.iter().map(|&(_, s)| s as i64).sum()
    }
}

pub struct Faces {
    pub count: usize,
    /// dart 2e = left side of edge e+1, dart 2e+1 = right side
    pub face_of_dart: Vec<usize>,
    /// quadrants[i][k] = region between slots k and k+1 of crossing i
    pub quadrants: Vec<[usize; 4]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingKind {
    TypeI,
    TypeII,
}

/// Checkerboard coloring together with the Gordon-Litherland crossing data.
pub struct CheckerboardData {
    pub region_count: usize,
    /// face ids of the white regions X_0 ... X_k, ascending
    pub white_faces: Vec<usize>,
    /// per-crossing sign: +1 exactly when the quadrant counterclockwise of
    /// each over-strand end is shaded
    pub eta: Vec<i8>,
    pub kind: Vec<CrossingKind>,
    /// per-crossing indices (into white_faces) of its two white quadrants
    pub white_quads: Vec<[usize; 2]>,
}

impl CheckerboardData {
    pub fn white_count(&self) -> usize {
        self.white_faces.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Knot Atlas 3_1: the left-handed trefoil, writhe -3.
    pub const TREFOIL_LEFT: &str = "X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)";

    #[test]
    fn parse_empty_is_unknot() {
        let d = KnotDiagram::parse("").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert!(d.is_small_unknot());
    }

    #[test]
    fn parse_trefoil_text() {
        let d = KnotDiagram::parse(TREFOIL_LEFT).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.edge_count(), 6);
        assert_eq!(d.writhe(), -3);
        assert_eq!(d.signs, vec![-1, -1, -1]);
    }

    #[test]
    fn parse_json_form() {
        let d = KnotDiagram::parse(r#"{"pd": [[1,4,2,5],[3,6,4,1],[5,2,6,3]]}"#).unwrap();
        assert_eq!(d.crossing_count(), 3);
    }

    #[test]
    fn parse_rejects_triple_label() {
        let err = KnotDiagram::parse("X(1,2,2,1), X(2,3,3,4)").unwrap_err();
        assert!(matches!(err, DiagramError::LabelCount(2, _) | DiagramError::LabelRange(_)));
    }

    #[test]
    fn parse_rejects_hopf_link() {
        // standard 2-component Hopf link labeling breaks edge consecutivity
        let err = KnotDiagram::parse("X(2,4,1,3), X(4,2,3,1)").unwrap_err();
        assert!(matches!(err, DiagramError::NotSequential(_)));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(
            KnotDiagram::parse("Y(1,2,3,4)"),
            Err(DiagramError::Syntax(_))
        ));
        assert!(matches!(
            KnotDiagram::parse("X(1,2,3)"),
            Err(DiagramError::Syntax(_))
        ));
    }

    #[test]
    fn one_crossing_kink() {
        let d = KnotDiagram::parse("X(1,1,2,2)").unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.sign(0), 1); // ambiguous kink read as positive
        let w = d.wirtinger().unwrap();
        assert_eq!(w.generators, 1);
        assert_eq!(
            w.relations,
            vec![Relation {
                conjugator: 0,
                input: 0,
                output: 0
            }]
        );
        assert!(w.longitude.len() <= 2);
        assert_eq!(w.longitude_exponent_sum(), 0);
    }

    #[test]
    fn trefoil_wirtinger() {
        let d = KnotDiagram::parse(TREFOIL_LEFT).unwrap();
        let w = d.wirtinger().unwrap();
        assert_eq!(w.generators, 3);
        assert_eq!(w.relations.len(), 3);
        // every relation is a genuine conjugation between distinct strands
        for r in &w.relations {
            assert_ne!(r.input, r.output);
        }
        assert!(w.longitude.len() <= 6);
        assert_eq!(w.longitude_exponent_sum(), 0);
    }

    #[test]
    fn figure_eight_wirtinger() {
        let d = figure_eight();
        let w = d.wirtinger().unwrap();
        assert_eq!(w.generators, 4);
        assert_eq!(w.relations.len(), 4);
        assert!(w.longitude.len() <= 8);
        assert_eq!(w.longitude_exponent_sum(), 0);
    }

    /// Standard figure-eight PD code (writhe 0).
    pub fn figure_eight() -> KnotDiagram {
        KnotDiagram::parse("X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8)").unwrap()
    }

    #[test]
    fn region_counts() {
        for (text, n) in [
            ("X(1,1,2,2)", 1usize),
            (TREFOIL_LEFT, 3),
            ("X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8)", 4),
        ] {
            let d = KnotDiagram::parse(text).unwrap();
            let faces = d.faces().unwrap();
            assert_eq!(faces.count, n + 2, "diagram {}", text);
        }
    }

    #[test]
    fn checkerboard_trefoil() {
        let d = KnotDiagram::parse(TREFOIL_LEFT).unwrap();
        let board = d.checkerboard().unwrap();
        assert_eq!(board.region_count, 5);
        assert!(board.white_count() == 2 || board.white_count() == 3);
        // canonical coloring takes the smaller side
        assert_eq!(board.white_count(), 2);
        let alt = d.checkerboard_alternate().unwrap();
        assert_eq!(alt.white_count(), 3);
        // trefoil is alternating: all crossings get the same eta
        assert!(board.eta.iter().all(|&e| e == board.eta[0]));
    }

    #[test]
    fn mirror_negates_signs() {
        let d = KnotDiagram::parse(TREFOIL_LEFT).unwrap();
        let m = d.mirror();
        assert_eq!(m.writhe(), 3);
        assert_eq!(m.mirror(), d);
    }

    #[test]
    fn wirtinger_is_deterministic() {
        let d1 = KnotDiagram::parse(TREFOIL_LEFT).unwrap();
        let d2 = KnotDiagram::parse(TREFOIL_LEFT).unwrap();
        let (w1, w2) = (d1.wirtinger().unwrap(), d2.wirtinger().unwrap());
        assert_eq!(w1.relations, w2.relations);
        assert_eq!(w1.longitude, w2.longitude);
    }

    #[test]
    fn pd_text_round_trip() {
        let d = KnotDiagram::parse(TREFOIL_LEFT).unwrap();
        let text = d.to_pd_text();
        assert_eq!(KnotDiagram::parse(&text).unwrap(), d);
    }
}
