//! Chord diagrams: the circles of a smoothed diagram together with one chord
//! per crossing, marking where the smoothing happened.
//!
//! Each circle is a cyclic sequence of endpoint ids read in its traversal
//! direction. At an endpoint `p` the circle arrives through the strand end
//! `in_p` and leaves through `out_p`. A chord `(p, q)` stands for a crossing
//! whose A-smoothing joins `in_p`–`out_p` and `in_q`–`out_q`. Its twist flag
//! records the B-smoothing: `coherent` joins `out_p`–`in_q`, `out_q`–`in_p`;
//! `reversing` joins `in_p`–`in_q`, `out_p`–`out_q`.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Crossing, Diagram, Side, StrandEnd};
use crate::graphs::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChordError {
    #[error("invalid chord diagram: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Twist {
    Coherent,
    Reversing,
}

impl Twist {
    fn toggled(self, flip: bool) -> Twist {
        match (self, flip) {
            (t, false) => t,
            (Twist::Coherent, true) => Twist::Reversing,
            (Twist::Reversing, true) => Twist::Coherent,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chord {
    pub ends: [usize; 2],
    pub twist: Twist,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChordDiagram {
    circles: Vec<Vec<usize>>,
    chords: Vec<Chord>,
}

/// Where an endpoint sits: `(circle, position)`.
type Position = (usize, usize);

impl ChordDiagram {
    pub fn new(circles: Vec<Vec<usize>>, chords: Vec<Chord>) -> Result<Self, ChordError> {
        let cd = Self { circles, chords };
        cd.validate()?;
        Ok(cd)
    }

    fn validate(&self) -> Result<(), ChordError> {
        let mut on_circle = BTreeSet::new();
        for c in &self.circles {
            for &e in c {
                if !on_circle.insert(e) {
                    return Err(ChordError::Invalid(format!(
                        "endpoint {e} appears twice on the circles"
                    )));
                }
            }
        }
        let mut on_chord = BTreeSet::new();
        for ch in &self.chords {
            for e in ch.ends {
                if !on_chord.insert(e) {
                    return Err(ChordError::Invalid(format!(
                        "endpoint {e} belongs to two chords"
                    )));
                }
            }
        }
        if on_circle != on_chord {
            return Err(ChordError::Invalid(
                "circle endpoints and chord endpoints differ".into(),
            ));
        }
        Ok(())
    }

    /// One circle reading `word`, where each symbol occurs twice and names a
    /// coherent chord. Endpoint ids are positions in the word.
    pub fn from_word(word: &[usize]) -> Result<Self, ChordError> {
        let mut seen: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &sym) in word.iter().enumerate() {
            seen.entry(sym).or_default().push(i);
        }
        let mut chords = Vec::new();
        for (sym, pos) in seen {
            if pos.len() != 2 {
                return Err(ChordError::Invalid(format!(
                    "symbol {sym} occurs {} times",
                    pos.len()
                )));
            }
            chords.push(Chord {
                ends: [pos[0], pos[1]],
                twist: Twist::Coherent,
            });
        }
        Self::new(vec![(0..word.len()).collect()], chords)
    }

    pub fn circles(&self) -> &[Vec<usize>] {
        &self.circles
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    fn positions(&self) -> BTreeMap<usize, Position> {
        let mut pos = BTreeMap::new();
        for (ci, c) in self.circles.iter().enumerate() {
            for (i, &e) in c.iter().enumerate() {
                pos.insert(e, (ci, i));
            }
        }
        pos
    }

    /// True when chord `i` has both endpoints on one circle.
    pub fn is_same_circle(&self, i: usize) -> bool {
        let pos = self.positions();
        let [p, q] = self.chords[i].ends;
        pos[&p].0 == pos[&q].0
    }

    fn interleaved(pos: &BTreeMap<usize, Position>, x: &Chord, y: &Chord) -> bool {
        let (cx, x0, x1) = span(pos, x);
        let (cy, y0, y1) = span(pos, y);
        match (cx, cy) {
            (Some(a), Some(b)) if a == b => {
                let inside = |t: usize| x0 < t && t < x1;
                inside(y0) != inside(y1)
            }
            _ => false,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("chord diagram serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, ChordError> {
        let cd: ChordDiagram =
            serde_json::from_str(text).map_err(|e| ChordError::Invalid(e.to_string()))?;
        cd.validate()?;
        Ok(cd)
    }
}

/// `(circle if same-circle, lower position, upper position)` of a chord.
fn span(pos: &BTreeMap<usize, Position>, ch: &Chord) -> (Option<usize>, usize, usize) {
    let (c0, i0) = pos[&ch.ends[0]];
    let (c1, i1) = pos[&ch.ends[1]];
    if c0 != c1 {
        return (None, 0, 0);
    }
    (Some(c0), i0.min(i1), i0.max(i1))
}

/// The chord diagram of `s_A D`: circles traced through the A-smoothing,
/// one chord per crossing. Crossing `i` owns endpoints `2i` (its A-pair
/// holding the smaller slot) and `2i + 1`; chord `i` is crossing `i`.
pub fn a_state_chords(d: &Diagram) -> ChordDiagram {
    let c = d.crossing_count();
    let pair_of = |end: StrandEnd| -> (usize, StrandEnd) {
        let a = d.crossings()[end.crossing].pairing(Side::A);
        for (k, &(s, t)) in a.iter().enumerate() {
            if s == end.slot {
                return (2 * end.crossing + k, StrandEnd::new(end.crossing, t));
            }
            if t == end.slot {
                return (2 * end.crossing + k, StrandEnd::new(end.crossing, s));
            }
        }
        unreachable!("A-pairing covers every slot")
    };
    let mut visited = vec![false; 2 * c];
    // (in, out) strand ends of every endpoint in traversal order.
    let mut io: Vec<Option<(StrandEnd, StrandEnd)>> = vec![None; 2 * c];
    let mut circles = Vec::new();
    for start in 0..c {
        for slot in 0..4u8 {
            let first = StrandEnd::new(start, slot);
            let (ep, _) = pair_of(first);
            if visited[ep] {
                continue;
            }
            // Enter the endpoint through `first`.
            let mut circle = Vec::new();
            let mut at = first;
            loop {
                let (ep, out) = pair_of(at);
                if visited[ep] {
                    break;
                }
                visited[ep] = true;
                io[ep] = Some((at, out));
                circle.push(ep);
                at = d.arc_partner(out);
            }
            circles.push(circle);
        }
    }
    let chords = (0..c)
        .map(|i| {
            let (in_p, out_p) = io[2 * i].expect("visited");
            let (in_q, out_q) = io[2 * i + 1].expect("visited");
            let b = d.crossings()[i].pairing(Side::B);
            let has = |x: StrandEnd, y: StrandEnd| {
                b.iter()
                    .any(|&(s, t)| (s, t) == (x.slot, y.slot) || (t, s) == (x.slot, y.slot))
            };
            let twist = if has(out_p, in_q) && has(out_q, in_p) {
                Twist::Coherent
            } else {
                debug_assert!(has(in_p, in_q) && has(out_p, out_q));
                Twist::Reversing
            };
            Chord {
                ends: [2 * i, 2 * i + 1],
                twist,
            }
        })
        .collect();
    circles.extend(std::iter::repeat_with(Vec::new).take(d.free_circles()));
    ChordDiagram { circles, chords }
}

/// Rebuilds a diagram from a chord diagram by turning every chord back into
/// a crossing. Chord `j` becomes crossing `j` with slots
/// `[in_p, out_p, in_q, out_q]`.
pub fn to_diagram(cd: &ChordDiagram) -> Diagram {
    let mut slot_of: BTreeMap<usize, (usize, u8)> = BTreeMap::new();
    let mut crossings = Vec::with_capacity(cd.chords.len());
    for (j, ch) in cd.chords.iter().enumerate() {
        slot_of.insert(ch.ends[0], (j, 0));
        slot_of.insert(ch.ends[1], (j, 2));
        let b = match ch.twist {
            Twist::Coherent => [(1, 2), (3, 0)],
            Twist::Reversing => [(0, 2), (1, 3)],
        };
        crossings.push(Crossing::new([(0, 1), (2, 3)], b).expect("distinct pairings"));
    }
    let mut arcs = Vec::new();
    let mut free = 0;
    for circle in &cd.circles {
        if circle.is_empty() {
            free += 1;
            continue;
        }
        for (i, e) in circle.iter().enumerate() {
            let next = circle[(i + 1) % circle.len()];
            let (cj, base) = slot_of[e];
            let (nj, nbase) = slot_of[&next];
            arcs.push((StrandEnd::new(cj, base + 1), StrandEnd::new(nj, nbase)));
        }
    }
    Diagram::new(crossings, &arcs, free).expect("chord diagrams give valid diagrams")
}

/// Number of circles after switching every chord in `subset` (chord
/// indices) to its B-smoothing, computed by surgery on cyclic words.
pub fn resmooth_count(cd: &ChordDiagram, subset: &[usize]) -> usize {
    // Tokens carry a flag recording whether their circle direction has been
    // reversed relative to the original traversal.
    let mut circles: Vec<Vec<(usize, bool)>> = cd
        .circles
        .iter()
        .map(|c| c.iter().map(|&e| (e, false)).collect())
        .collect();
    let locate = |circles: &[Vec<(usize, bool)>], e: usize| -> (usize, usize, bool) {
        for (ci, c) in circles.iter().enumerate() {
            if let Some(i) = c.iter().position(|&(t, _)| t == e) {
                return (ci, i, c[i].1);
            }
        }
        panic!("endpoint {e} not found")
    };
    for &j in subset {
        let ch = &cd.chords[j];
        let (cp, ip, fp) = locate(&circles, ch.ends[0]);
        let (cq, iq, fq) = locate(&circles, ch.ends[1]);
        let twist = ch.twist.toggled(fp != fq);
        if cp == cq {
            let word = std::mem::take(&mut circles[cp]);
            let n = word.len();
            // word read from p: p alpha q beta
            let rot: Vec<_> = (0..n).map(|k| word[(ip + k) % n]).collect();
            let q_at = (iq + n - ip) % n;
            let alpha: Vec<_> = rot[1..q_at].to_vec();
            let beta: Vec<_> = rot[q_at + 1..].to_vec();
            match twist {
                Twist::Coherent => {
                    circles[cp] = alpha;
                    circles.push(beta);
                }
                Twist::Reversing => {
                    let mut merged = alpha;
                    merged.extend(beta.into_iter().rev().map(|(t, f)| (t, !f)));
                    circles[cp] = merged;
                }
            }
        } else {
            let take = |c: &Vec<(usize, bool)>, i: usize| -> Vec<(usize, bool)> {
                let n = c.len();
                (1..n).map(|k| c[(i + k) % n]).collect()
            };
            let alpha = take(&circles[cp], ip);
            let beta = take(&circles[cq], iq);
            let mut merged = alpha;
            match twist {
                Twist::Coherent => merged.extend(beta),
                Twist::Reversing => merged.extend(beta.into_iter().rev().map(|(t, f)| (t, !f))),
            }
            let (lo, hi) = (cp.min(cq), cp.max(cq));
            circles.remove(hi);
            circles[lo] = merged;
        }
    }
    circles.len()
}

/// Graph on the same-circle chords (in chord order), adjacent when their
/// endpoints alternate along the common circle. The second component maps
/// vertices to chord indices.
pub fn lando_graph_with_chords(cd: &ChordDiagram) -> (Graph, Vec<usize>) {
    let pos = cd.positions();
    let same: Vec<usize> = (0..cd.chords.len())
        .filter(|&i| span(&pos, &cd.chords[i]).0.is_some())
        .collect();
    let mut g = Graph::empty(same.len());
    for (u, &i) in same.iter().enumerate() {
        for (v, &j) in same.iter().enumerate().skip(u + 1) {
            if ChordDiagram::interleaved(&pos, &cd.chords[i], &cd.chords[j]) {
                g.add_edge(u, v);
            }
        }
    }
    (g, same)
}

/// The Lando graph: chords joining two different circles are deleted and the
/// rest are joined when they alternate.
pub fn lando_graph(cd: &ChordDiagram) -> Graph {
    lando_graph_with_chords(cd).0
}

/// Graph on all chords; same-circle chords are adjacent when they alternate
/// and chords touching two circles are never adjacent.
pub fn interlacement_graph(cd: &ChordDiagram) -> Graph {
    let pos = cd.positions();
    let n = cd.chords.len();
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if ChordDiagram::interleaved(&pos, &cd.chords[i], &cd.chords[j]) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Isomorphism of chord diagrams up to relabeling of endpoints and chords,
/// rotation of each circle, and reflection of a circle (which toggles the
/// twist of every chord with exactly one endpoint on it).
pub fn is_isomorphic(x: &ChordDiagram, y: &ChordDiagram) -> bool {
    if x.circles.len() != y.circles.len() || x.chords.len() != y.chords.len() {
        return false;
    }
    let mut lx: Vec<usize> = x.circles.iter().map(Vec::len).collect();
    let mut ly: Vec<usize> = y.circles.iter().map(Vec::len).collect();
    lx.sort();
    ly.sort();
    if lx != ly {
        return false;
    }
    let px = x.positions();
    let py = y.positions();
    let partner = |cd: &ChordDiagram| -> BTreeMap<usize, (usize, Twist)> {
        let mut m = BTreeMap::new();
        for ch in &cd.chords {
            m.insert(ch.ends[0], (ch.ends[1], ch.twist));
            m.insert(ch.ends[1], (ch.ends[0], ch.twist));
        }
        m
    };
    let (mx, my) = (partner(x), partner(y));
    let mut order: Vec<usize> = (0..x.circles.len()).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(x.circles[c].len()));
    let mut state = IsoSearch {
        x,
        y,
        px: &px,
        py: &py,
        mx: &mx,
        my: &my,
        order: &order,
        used: vec![false; y.circles.len()],
        circle_map: vec![None; x.circles.len()],
        endpoint_map: BTreeMap::new(),
    };
    state.extend(0)
}

struct IsoSearch<'a> {
    x: &'a ChordDiagram,
    y: &'a ChordDiagram,
    px: &'a BTreeMap<usize, Position>,
    py: &'a BTreeMap<usize, Position>,
    mx: &'a BTreeMap<usize, (usize, Twist)>,
    my: &'a BTreeMap<usize, (usize, Twist)>,
    order: &'a [usize],
    used: Vec<bool>,
    /// `(target circle, reflected)` per source circle.
    circle_map: Vec<Option<(usize, bool)>>,
    endpoint_map: BTreeMap<usize, usize>,
}

impl IsoSearch<'_> {
    fn consistent(&self, circle: usize) -> bool {
        let (_, refl_here) = self.circle_map[circle].expect("mapped");
        for &e in &self.x.circles[circle] {
            let (f, tw) = self.mx[&e];
            let Some(&fe) = self.endpoint_map.get(&f) else {
                continue;
            };
            let te = self.endpoint_map[&e];
            let (tf, ttw) = self.my[&te];
            if tf != fe {
                return false;
            }
            let other_circle = self.px[&f].0;
            let (_, refl_other) = self.circle_map[other_circle].expect("mapped");
            let same_source = other_circle == circle;
            let same_target = self.py[&te].0 == self.py[&tf].0;
            if same_source != same_target {
                return false;
            }
            let expected = if same_source {
                tw
            } else {
                tw.toggled(refl_here != refl_other)
            };
            if expected != ttw {
                return false;
            }
        }
        true
    }

    fn extend(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let src = self.order[k];
        let sc = &self.x.circles[src];
        let n = sc.len();
        for tgt in 0..self.y.circles.len() {
            if self.used[tgt] || self.y.circles[tgt].len() != n {
                continue;
            }
            let tc = &self.y.circles[tgt];
            let rotations = n.max(1);
            for refl in [false, true] {
                for r in 0..rotations {
                    for (i, &e) in sc.iter().enumerate() {
                        let j = if refl { (r + n - i) % n } else { (r + i) % n };
                        self.endpoint_map.insert(e, tc[j]);
                    }
                    self.used[tgt] = true;
                    self.circle_map[src] = Some((tgt, refl));
                    if self.consistent(src) && self.extend(k + 1) {
                        return true;
                    }
                    self.used[tgt] = false;
                    self.circle_map[src] = None;
                    for e in sc {
                        self.endpoint_map.remove(e);
                    }
                }
            }
        }
        false
    }
}

/// A random chord diagram with `chords` chords spread over `circles`
/// circles (some possibly empty). Same-circle chords are coherent and
/// cross-circle chords get a random twist.
pub fn random_chord_diagram<R: Rng>(rng: &mut R, chords: usize, circles: usize) -> ChordDiagram {
    let circles = circles.max(1);
    let mut endpoints: Vec<usize> = (0..2 * chords).collect();
    endpoints.shuffle(rng);
    let mut rings: Vec<Vec<usize>> = vec![Vec::new(); circles];
    for (k, &e) in endpoints.iter().enumerate() {
        let c = if k < circles {
            k
        } else {
            rng.gen_range(0..circles)
        };
        rings[c].push(e);
    }
    let pos: BTreeMap<usize, usize> = rings
        .iter()
        .enumerate()
        .flat_map(|(ci, r)| r.iter().map(move |&e| (e, ci)))
        .collect();
    let list = (0..chords)
        .map(|j| {
            let ends = [2 * j, 2 * j + 1];
            let twist = if pos[&ends[0]] == pos[&ends[1]] || rng.gen_bool(0.5) {
                Twist::Coherent
            } else {
                Twist::Reversing
            };
            Chord { ends, twist }
        })
        .collect();
    ChordDiagram::new(rings, list).expect("random construction is valid")
}
