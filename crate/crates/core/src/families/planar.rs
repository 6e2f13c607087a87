//! Diagrams with a planar embedding, stored as a rotation system.
//!
//! Darts are strand ends `4c + k`; the four slots of a crossing are listed
//! counterclockwise. `alpha` pairs the two ends of every edge and
//! `sigma(4c + k) = 4c + (k + 1) % 4` turns to the next slot. The orbits of
//! `sigma ∘ alpha` are the faces: leaving through dart `h`, the face on the
//! right of travel is the orbit of `h`. Corner `q` of a crossing is the
//! region between slots `q` and `q + 1`.

use rand::Rng;

use crate::diagram::{Crossing, Diagram};
use crate::union_find::UnionFind;

use super::FamilyError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarDiagram {
    crossings: Vec<Crossing>,
    alpha: Vec<usize>,
}

/// Crossing whose A-smoothing joins the ends of `(q, q+1)` and
/// `(q+2, q+3)`, so that A keeps corners `q` and `q + 2` intact.
pub fn preserving(q: u8) -> Crossing {
    let s = |k: u8| (q + k) % 4;
    Crossing::new([(s(0), s(1)), (s(2), s(3))], [(s(1), s(2)), (s(3), s(0))])
        .expect("distinct pairings")
}

/// True when the A-smoothing of `x` keeps corner `q` whole.
pub fn a_preserves(x: &Crossing, q: u8) -> bool {
    let (s, t) = (q % 4, (q + 1) % 4);
    x.pairing(crate::Side::A)
        .iter()
        .any(|&(a, b)| (a, b) == (s, t) || (b, a) == (s, t))
}

fn sigma(h: usize) -> usize {
    4 * (h / 4) + (h % 4 + 1) % 4
}

impl PlanarDiagram {
    pub fn new(crossings: Vec<Crossing>, alpha: Vec<usize>) -> Result<Self, FamilyError> {
        let p = Self { crossings, alpha };
        if p.alpha.len() != 4 * p.crossings.len()
            || p.alpha
                .iter()
                .enumerate()
                .any(|(h, &t)| t >= p.alpha.len() || t == h || p.alpha[t] != h)
        {
            return Err(FamilyError::Construction(
                "edge pairing is not an involution without fixed points".into(),
            ));
        }
        if !p.is_planar() {
            return Err(FamilyError::Construction(
                "rotation system is not planar".into(),
            ));
        }
        Ok(p)
    }

    /// Reads the slot order of `d` as a rotation system. Fails for
    /// crossing-free circles or when the rotation is not planar.
    pub fn from_diagram(d: &Diagram) -> Result<Self, FamilyError> {
        if d.free_circles() > 0 || d.crossing_count() == 0 {
            return Err(FamilyError::Construction(
                "planar diagrams need crossings and no free circles".into(),
            ));
        }
        let alpha = (0..4 * d.crossing_count())
            .map(|h| {
                let e = d.arc_partner(crate::diagram::StrandEnd::new(h / 4, (h % 4) as u8));
                4 * e.crossing + e.slot as usize
            })
            .collect();
        Self::new(d.crossings().to_vec(), alpha)
    }

    pub fn to_diagram(&self) -> Diagram {
        Diagram::from_partner(self.crossings.clone(), self.alpha.clone(), 0).expect("non-empty")
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossing(&self, i: usize) -> Crossing {
        self.crossings[i]
    }

    pub fn set_crossing(&mut self, i: usize, x: Crossing) {
        self.crossings[i] = x;
    }

    pub fn alpha(&self, h: usize) -> usize {
        self.alpha[h]
    }

    pub fn mirror(&self) -> Self {
        Self {
            crossings: self.crossings.iter().map(Crossing::mirrored).collect(),
            alpha: self.alpha.clone(),
        }
    }

    /// Face id on the right of every dart, and the number of faces.
    pub fn faces(&self) -> (Vec<usize>, usize) {
        let mut face = vec![usize::MAX; self.alpha.len()];
        let mut count = 0;
        for start in 0..self.alpha.len() {
            if face[start] != usize::MAX {
                continue;
            }
            let mut h = start;
            while face[h] == usize::MAX {
                face[h] = count;
                h = sigma(self.alpha[h]);
            }
            count += 1;
        }
        (face, count)
    }

    /// Face on the left of travel out of `h`.
    pub fn left_face(&self, faces: &[usize], h: usize) -> usize {
        faces[self.alpha[h]]
    }

    fn map_components(&self) -> usize {
        let mut uf = UnionFind::new(self.crossings.len());
        for (h, &t) in self.alpha.iter().enumerate() {
            uf.union(h / 4, t / 4);
        }
        uf.sets()
    }

    /// Euler's formula on every connected piece: `F = c + 2·pieces`.
    pub fn is_planar(&self) -> bool {
        self.faces().1 == self.crossings.len() + 2 * self.map_components()
    }

    fn push(&mut self, x: Crossing) -> usize {
        self.crossings.push(x);
        self.alpha.extend([usize::MAX; 4]);
        self.crossings.len() - 1
    }

    fn link(&mut self, x: usize, y: usize) {
        self.alpha[x] = y;
        self.alpha[y] = x;
    }

    /// Replaces crossing `x` by a chain of `n` crossings whose bigons sit
    /// in corners `q` and `q + 2`. If A cuts through corner `q` the chain's
    /// A-smoothing runs along it and B gains `n - 1` small circles;
    /// otherwise A gains them. Returns the chain, starting with `x`.
    pub fn twist(&mut self, x: usize, q: u8, n: usize) -> Vec<usize> {
        assert!(n >= 1, "a twist needs at least one crossing");
        let old = self.crossings[x];
        let merged = !a_preserves(&old, q);
        let ext: Vec<usize> = (0..4).map(|k| self.alpha[4 * x + k]).collect();
        let mut chain = vec![x];
        for _ in 1..n {
            chain.push(self.push(old));
        }
        // Local slots: 0 = NE, 1 = NW, 2 = SW, 3 = SE; the chain runs west to east.
        let local = if merged { preserving(0) } else { preserving(1) };
        for &c in &chain {
            self.crossings[c] = local;
        }
        let (first, last) = (chain[0], chain[n - 1]);
        let new_dart = |k: usize| -> usize {
            match (k + 4 - q as usize) % 4 {
                2 => 4 * first + 1,
                3 => 4 * first + 2,
                1 => 4 * last,
                _ => 4 * last + 3,
            }
        };
        let mut targets = Vec::with_capacity(4);
        for (k, &t) in ext.iter().enumerate() {
            let t = if t / 4 == x { new_dart(t % 4) } else { t };
            targets.push((new_dart(k), t));
        }
        for (a, b) in targets {
            self.link(a, b);
        }
        for w in chain.windows(2) {
            self.link(4 * w[0], 4 * w[1] + 1);
            self.link(4 * w[0] + 3, 4 * w[1] + 2);
        }
        chain
    }

    /// Pushes the edge leaving `d1` across the edge leaving `d2`; both must
    /// have the same face on their right. The new bigon is corner 2 of the
    /// first new crossing and corner 1 of the second. `merge` says, per new
    /// crossing, whether A cuts through the bigon.
    pub fn insert_clasp(
        &mut self,
        d1: usize,
        d2: usize,
        merge: [bool; 2],
    ) -> Result<(usize, usize), FamilyError> {
        let (faces, _) = self.faces();
        if faces[d1] != faces[d2] {
            return Err(FamilyError::Construction(
                "clasp edges do not share a face".into(),
            ));
        }
        if d1 == d2 || self.alpha[d1] == d2 {
            return Err(FamilyError::Construction(
                "clasp needs two distinct edges".into(),
            ));
        }
        let (t1, t2) = (self.alpha[d1], self.alpha[d2]);
        let pick = |m: bool, bigon: u8| {
            if m {
                preserving((bigon + 1) % 4)
            } else {
                preserving(bigon)
            }
        };
        let x = self.push(pick(merge[0], 2));
        let y = self.push(pick(merge[1], 1));
        self.link(d1, 4 * x);
        self.link(4 * x + 2, 4 * y + 2);
        self.link(4 * y, t1);
        self.link(d2, 4 * y + 3);
        self.link(4 * y + 1, 4 * x + 3);
        self.link(4 * x + 1, t2);
        Ok((x, y))
    }

    /// Band sum: the edge leaving `d1` here and the edge leaving `d2` in
    /// `other` are cut and reconnected crosswise.
    pub fn connected_sum(&self, d1: usize, other: &PlanarDiagram, d2: usize) -> PlanarDiagram {
        let shift = self.alpha.len();
        let mut out = self.clone();
        out.crossings.extend(other.crossings.iter().copied());
        out.alpha.extend(other.alpha.iter().map(|t| t + shift));
        let d2 = d2 + shift;
        let (t1, t2) = (out.alpha[d1], out.alpha[d2]);
        out.link(d1, t2);
        out.link(d2, t1);
        out
    }

    /// Adds a closed curve crossing the edges leaving the darts in `path`
    /// in order, entering each edge from its right side. Consecutive edges
    /// must share the face between them. Each new crossing's slots are
    /// `[edge tail, curve in, edge head, curve out]` and A keeps corner 0
    /// when the flag is true, corner 1 otherwise.
    pub fn add_circle(&mut self, path: &[(usize, bool)]) -> Result<Vec<usize>, FamilyError> {
        let (faces, _) = self.faces();
        let k = path.len();
        if k < 2 {
            return Err(FamilyError::Construction(
                "a circle crosses at least two edges".into(),
            ));
        }
        let mut edges: Vec<usize> = path.iter().map(|&(d, _)| d.min(self.alpha[d])).collect();
        edges.sort();
        edges.dedup();
        if edges.len() != k {
            return Err(FamilyError::Construction(
                "a circle edge is used twice".into(),
            ));
        }
        for i in 0..k {
            let (d, _) = path[i];
            let (next, _) = path[(i + 1) % k];
            if self.left_face(&faces, d) != faces[next] {
                return Err(FamilyError::Construction(
                    "consecutive circle edges share no face".into(),
                ));
            }
        }
        let heads: Vec<usize> = path.iter().map(|&(d, _)| self.alpha[d]).collect();
        let new: Vec<usize> = path
            .iter()
            .map(|&(_, keep0)| self.push(preserving(if keep0 { 0 } else { 1 })))
            .collect();
        for i in 0..k {
            let x = new[i];
            self.link(path[i].0, 4 * x);
            self.link(4 * x + 2, heads[i]);
            self.link(4 * x + 3, 4 * new[(i + 1) % k] + 1);
        }
        if !self.is_planar() {
            return Err(FamilyError::Construction(
                "circle placement is not planar".into(),
            ));
        }
        Ok(new)
    }

    /// One circle carrying the coherent chords of `word` (each symbol twice,
    /// read counterclockwise); chord `v` is drawn outside the circle when
    /// `outside[v]`. Crossing `v` is chord `v`.
    pub fn from_chord_word(word: &[usize], outside: &[bool]) -> Result<Self, FamilyError> {
        let n = outside.len();
        let mut ends = vec![Vec::new(); n];
        for (i, &s) in word.iter().enumerate() {
            if s >= n {
                return Err(FamilyError::Construction(format!("symbol {s} has no side")));
            }
            ends[s].push(i);
        }
        if ends.iter().any(|e| e.len() != 2) {
            return Err(FamilyError::Construction(
                "every chord needs two endpoints".into(),
            ));
        }
        // (in, out) darts at every word position.
        let mut io = vec![(0, 0); word.len()];
        for (v, e) in ends.iter().enumerate() {
            let (p, q) = (e[0], e[1]);
            let base = 4 * v;
            if outside[v] {
                io[p] = (base + 1, base);
                io[q] = (base + 3, base + 2);
            } else {
                io[p] = (base, base + 1);
                io[q] = (base + 2, base + 3);
            }
        }
        let mut alpha = vec![usize::MAX; 4 * n];
        for i in 0..word.len() {
            let out = io[i].1;
            let next = io[(i + 1) % word.len()].0;
            alpha[out] = next;
            alpha[next] = out;
        }
        Self::new(vec![preserving(0); n], alpha)
    }
}

/// Pretzel diagram: columns of `|e|` crossings between two rails, read left
/// to right and closed up cyclically. Positive columns are smoothed by A
/// into vertical strands and negative ones into horizontal turnbacks.
pub fn pretzel_planar(entries: &[i64]) -> Result<PlanarDiagram, FamilyError> {
    if entries.is_empty() {
        return Err(FamilyError::Parameters(
            "a pretzel needs at least one column".into(),
        ));
    }
    if entries.contains(&0) {
        return Err(FamilyError::Parameters(
            "pretzel entries must be nonzero".into(),
        ));
    }
    let mut crossings = Vec::new();
    let mut columns = Vec::new();
    for &e in entries {
        // Slots: 0 = NE, 1 = NW, 2 = SW, 3 = SE. Vertical smoothing keeps the
        // east and west corners, that is corners 1 and 3.
        let x = if e > 0 { preserving(1) } else { preserving(0) };
        let start = crossings.len();
        crossings.extend(std::iter::repeat_n(x, e.unsigned_abs() as usize));
        columns.push(start..crossings.len());
    }
    let mut alpha = vec![usize::MAX; 4 * crossings.len()];
    let mut link = |a: usize, b: usize| {
        alpha[a] = b;
        alpha[b] = a;
    };
    for col in &columns {
        for c in col.start..col.end - 1 {
            link(4 * c + 2, 4 * (c + 1) + 1);
            link(4 * c + 3, 4 * (c + 1));
        }
    }
    for (i, col) in columns.iter().enumerate() {
        let next = &columns[(i + 1) % columns.len()];
        let (top, bottom) = (col.start, col.end - 1);
        let (ntop, nbottom) = (next.start, next.end - 1);
        link(4 * top, 4 * ntop + 1);
        link(4 * bottom + 3, 4 * nbottom + 2);
    }
    PlanarDiagram::new(crossings, alpha)
}

/// A random planar diagram with exactly `crossings` crossings (at least
/// one): a small random pretzel grown by random twists and clasps, then
/// every crossing given a random A-pairing.
pub fn random_planar<R: Rng>(rng: &mut R, crossings: usize) -> PlanarDiagram {
    assert!(crossings >= 1, "a random planar diagram needs a crossing");
    let mut entries = Vec::new();
    let mut used = 0;
    while entries.is_empty() || (used < crossings.min(4) && rng.gen_bool(0.5)) {
        let e = rng.gen_range(1..=(crossings.min(4) - used).max(1)) as i64;
        used += e as usize;
        entries.push(if rng.gen_bool(0.5) { e } else { -e });
    }
    let mut p = pretzel_planar(&entries).expect("entries are nonzero");
    while p.crossing_count() < crossings {
        let room = crossings - p.crossing_count();
        let darts = 4 * p.crossing_count();
        if room >= 2 && rng.gen_bool(0.5) {
            let (faces, _) = p.faces();
            let d1 = rng.gen_range(0..darts);
            let partners: Vec<usize> = (0..darts)
                .filter(|&d| faces[d] == faces[d1] && d != d1 && d != p.alpha[d1])
                .collect();
            if let Some(&d2) = partners.get(rng.gen_range(0..partners.len().max(1))) {
                let merge = [rng.gen_bool(0.5), rng.gen_bool(0.5)];
                p.insert_clasp(d1, d2, merge).expect("darts share a face");
            }
        } else {
            let x = rng.gen_range(0..p.crossing_count());
            p.twist(x, rng.gen_range(0..4), 2);
        }
    }
    for x in 0..p.crossing_count() {
        p.crossings[x] = preserving(rng.gen_range(0..2));
    }
    p
}
