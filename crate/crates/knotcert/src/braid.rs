//! Diagram builders: braid closures, torus-knot braids, and pretzels.
//!
//! Builders assemble a crossing network with abstract edge ids, trace the
//! knot to orient every edge, then emit a PD code with edges relabeled
//! 1..2n along the traversal. The assembler only needs each crossing's
//! counterclockwise end order and which diagonal passes over, so the same
//! machinery serves braids (all strands descending) and pretzel tangles
//! (where closure arcs reverse some strand directions).

use crate::diagram::{DiagramError, KnotDiagram};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("braid generator index {0} out of range for {1} strands")]
    BadGenerator(i32, usize),
    #[error("closure has more than one component")]
    NotAKnot,
    #[error("torus parameters must be coprime with both winding numbers >= 2")]
    BadTorusParams,
    #[error("assembled diagram failed validation: {0}")]
    Invalid(#[from] DiagramError),
}

/// A word in the braid group: letter +i is sigma_i, -i its inverse (1-based).
#[derive(Clone, Debug)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Self {
        BraidWord { strands, letters }
    }
}

struct NetCrossing {
    /// abstract edge ids counterclockwise: [NW, SW, SE, NE] as drawn
    ccw: [usize; 4],
    /// true when the over strand joins ends 1 and 3 (SW-NE diagonal)
    over_odd: bool,
}

struct Network {
    crossings: Vec<NetCrossing>,
    parent: Vec<usize>,
}

impl Network {
    fn new() -> Self {
        Network {
            crossings: Vec::new(),
            parent: Vec::new(),
        }
    }

    fn stub(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }

    /// Orient the knot, relabel edges 1..2n along it, and emit the PD code.
    fn assemble(mut self) -> Result<KnotDiagram, BuildError> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok(KnotDiagram::from_tuples(Vec::new())?);
        }
        let total = self.parent.len();
        let mut incidences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); total];
        for (ci, cr) in self.crossings.iter().enumerate() {
            for (end, &e) in cr.ccw.iter().enumerate() {
                incidences[e].push((ci, end));
            }
        }
        // group incidences per edge class
        let mut class_inc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); total];
        let mut class_ids = Vec::new();
        for e in 0..total {
            let root = self.find(e);
            if !incidences[e].is_empty() {
                let was_empty = class_inc[root].is_empty();
                let inc = std::mem::take(&mut incidences[e]);
                class_inc[root].extend(inc);
                if was_empty {
                    class_ids.push(root);
                }
            }
        }
        class_ids.sort_unstable();
        for &c in &class_ids {
            class_inc[c].sort_unstable();
            if class_inc[c].len() != 2 {
                return Err(BuildError::NotAKnot);
            }
        }
        if class_ids.len() != 2 * n {
            return Err(BuildError::NotAKnot);
        }
        // end -> class lookup
        let mut class_at = vec![[0usize; 4]; n];
        for ci in 0..n {
            for end in 0..4 {
                let e = self.crossings[ci].ccw[end];
                class_at[ci][end] = self.find(e);
            }
        }
        // traverse from the smallest class, entering at its first incidence
        let mut label = vec![0usize; total];
        let mut head = vec![(usize::MAX, usize::MAX); total];
        let start = class_ids[0];
        let mut current = start;
        let mut head_inc = class_inc[start][0];
        let mut seen = 0usize;
        loop {
            seen += 1;
            label[current] = seen;
            head[current] = head_inc;
            let (ci, end) = head_inc;
            let exit_end = (end + 2) % 4;
            let next_class = class_at[ci][exit_end];
            // the next edge's head is its incidence other than (ci, exit_end)
            let inc = &class_inc[next_class];
            let next_head = if inc[0] == (ci, exit_end) { inc[1] } else { inc[0] };
            if next_class == start && next_head == class_inc[start][0] {
                break;
            }
            current = next_class;
            head_inc = next_head;
            if seen > 2 * n {
                return Err(BuildError::NotAKnot);
            }
        }
        if seen != 2 * n {
            return Err(BuildError::NotAKnot);
        }
        // emit tuples rotated so the incoming under-strand end is first
        let mut tuples = Vec::with_capacity(n);
        for (ci, cr) in self.crossings.iter().enumerate() {
            let under_ends = if cr.over_odd { [0usize, 2] } else { [1, 3] };
            let s = under_ends
                .into_iter()
                .find(|&e| head[class_at[ci][e]] == (ci, e))
                .expect("one under end is incoming");
            let t: Vec<usize> = (0..4).map(|k| label[class_at[ci][(s + k) % 4]]).collect();
            tuples.push([t[0], t[1], t[2], t[3]]);
        }
        Ok(KnotDiagram::from_tuples(tuples)?)
    }
}

/// Closure of a braid word. The closure must be a knot, not a link.
///
/// Positive sigma_i crossings are the ones whose closure of sigma_1^3 is the
/// braid-positive (right-handed) trefoil with writhe +3.
pub fn braid_closure(braid: &BraidWord) -> Result<KnotDiagram, BuildError> {
    let s = braid.strands;
    if braid.letters.is_empty() {
        return if s == 1 {
            Ok(KnotDiagram::from_tuples(Vec::new())?)
        } else {
            Err(BuildError::NotAKnot)
        };
    }
    let mut net = Network::new();
    let tops: Vec<usize> = (0..s).map(|_| net.stub()).collect();
    let mut current = tops.clone();
    for &letter in &braid.letters {
        let i = letter.unsigned_abs() as usize;
        if i == 0 || i >= s {
            return Err(BuildError::BadGenerator(letter, s));
        }
        let new_left = net.stub();
        let new_right = net.stub();
        net.crossings.push(NetCrossing {
            ccw: [current[i - 1], new_left, new_right, current[i]],
            over_odd: letter > 0,
        });
        current[i - 1] = new_left;
        current[i] = new_right;
    }
    for i in 0..s {
        net.merge(current[i], tops[i]);
    }
    net.assemble()
}

/// Standard diagram of the (r, s) torus knot: the closure of
/// (sigma_1 ... sigma_{s-1})^|r| on s strands, mirrored when r < 0.
///
/// Accepts parameters in either order; r and s must be coprime with both
/// absolute values at least 2 and distinct.
pub fn torus_knot(r: i64, s: i64) -> Result<KnotDiagram, BuildError> {
    let (wind_a, wind_b) = (r.unsigned_abs(), s.unsigned_abs());
    if wind_a < 2
        || wind_b < 2
        || wind_a == wind_b
        || num_integer::gcd(wind_a, wind_b) != 1
        || (r < 0 && s < 0)
    {
        return Err(BuildError::BadTorusParams);
    }
    let mirror = r < 0 || s < 0;
    // braid on the smaller winding number
    let (reps, strands) = if wind_a >= wind_b {
        (wind_a, wind_b as usize)
    } else {
        (wind_b, wind_a as usize)
    };
    let sign = if mirror { -1 } else { 1 };
    let mut letters = Vec::with_capacity(reps as usize * (strands - 1));
    for _ in 0..reps {
        for i in 1..strands {
            letters.push(sign * i as i32);
        }
    }
    braid_closure(&BraidWord::new(strands, letters))
}

/// Standard 3-pretzel diagram P(p, q, r): three vertical twist regions,
/// |p_i| crossings each, positive values giving one fixed handedness
/// (the mirror of P(p,q,r) is P(-p,-q,-r)).
pub fn pretzel(p: i64, q: i64, r: i64) -> Result<KnotDiagram, BuildError> {
    let mut net = Network::new();
    let mut tops = Vec::new();
    let mut bottoms = Vec::new();
    for &twists in &[p, q, r] {
        let left_top = net.stub();
        let right_top = net.stub();
        let (mut l, mut rr) = (left_top, right_top);
        for _ in 0..twists.unsigned_abs() {
            let new_left = net.stub();
            let new_right = net.stub();
            net.crossings.push(NetCrossing {
                ccw: [l, new_left, new_right, rr],
                over_odd: twists > 0,
            });
            l = new_left;
            rr = new_right;
        }
        tops.push((left_top, right_top));
        bottoms.push((l, rr));
    }
    // connect region i's right side to region i+1's left side, top and bottom,
    // and close around the outside
    for i in 0..2 {
        net.merge(tops[i].1, tops[i + 1].0);
        net.merge(bottoms[i].1, bottoms[i + 1].0);
    }
    net.merge(tops[0].0, tops[2].1);
    net.merge(bottoms[0].0, bottoms[2].1);
    net.assemble()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_from_braid() {
        let d = braid_closure(&BraidWord::new(2, vec![1, 1, 1])).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.writhe(), 3);
        let w = d.wirtinger().unwrap();
        assert_eq!(w.generators, 3);
        assert_eq!(w.longitude_exponent_sum(), 0);
    }

    #[test]
    fn figure_eight_from_braid() {
        let d = braid_closure(&BraidWord::new(3, vec![1, -2, 1, -2])).unwrap();
        assert_eq!(d.crossing_count(), 4);
        assert_eq!(d.writhe(), 0);
    }

    #[test]
    fn unknot_closures() {
        let d = braid_closure(&BraidWord::new(1, vec![])).unwrap();
        assert_eq!(d.crossing_count(), 0);
        let d = braid_closure(&BraidWord::new(2, vec![1])).unwrap();
        assert_eq!(d.crossing_count(), 1);
    }

    #[test]
    fn two_component_closure_rejected() {
        assert_eq!(
            braid_closure(&BraidWord::new(2, vec![1, 1])).unwrap_err(),
            BuildError::NotAKnot
        );
        assert_eq!(
            braid_closure(&BraidWord::new(2, vec![])).unwrap_err(),
            BuildError::NotAKnot
        );
    }

    #[test]
    fn torus_knot_crossing_counts() {
        for (r, s) in [(3i64, 2i64), (5, 2), (4, 3), (5, 3)] {
            let d = torus_knot(r, s).unwrap();
            assert_eq!(d.crossing_count() as i64, r * (s - 1), "T({},{})", r, s);
            assert_eq!(d.writhe(), r * (s - 1));
            let m = torus_knot(-r, s).unwrap();
            assert_eq!(m.writhe(), -r * (s - 1));
        }
        // parameter order does not matter
        assert_eq!(
            torus_knot(2, 5).unwrap().crossing_count(),
            torus_knot(5, 2).unwrap().crossing_count()
        );
    }

    #[test]
    fn torus_knot_rejects_bad_params() {
        assert!(torus_knot(4, 2).is_err());
        assert!(torus_knot(3, 3).is_err());
        assert!(torus_knot(1, 2).is_err());
        assert!(torus_knot(-2, -3).is_err());
    }

    #[test]
    fn pretzel_knots() {
        let d = pretzel(1, 1, 1).unwrap();
        assert_eq!(d.crossing_count(), 3); // a trefoil diagram
        let d = pretzel(3, 1, 1).unwrap();
        assert_eq!(d.crossing_count(), 5);
        let d = pretzel(-3, 5, 7).unwrap();
        assert_eq!(d.crossing_count(), 15);
    }

    #[test]
    fn pretzel_link_rejected() {
        // two even entries give a 2-component link
        assert_eq!(pretzel(2, 2, 1).unwrap_err(), BuildError::NotAKnot);
    }
}
