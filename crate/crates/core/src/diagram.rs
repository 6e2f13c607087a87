//! Embedding-free link diagrams and the exact state-sum engine.
//!
//! A crossing is stored only through its two smoothings: the pairing of its
//! four strand ends produced by the A-smoothing and the one produced by the
//! B-smoothing. Arcs of the diagram pair strand ends of (possibly different)
//! crossings. Over/under information and the planar embedding are never
//! needed for the bracket.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chords;
use crate::graphs;
use crate::laurent::{sign_pow, LaurentPoly};
use crate::union_find::UnionFind;

/// Largest crossing count enumerated by default (about 16M states).
pub const DEFAULT_LIMIT: usize = 24;

/// Hard ceiling on any configured enumeration limit.
pub const MAX_LIMIT: usize = 30;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error(
        "diagram has {crossings} crossings, above the enumeration limit of {limit}; \
         raise it with --limit or use `analyze` for the extreme coefficients"
    )]
    TooManyCrossings { crossings: usize, limit: usize },
    #[error("state enumeration for {what} exceeded its budget of {budget} states; raise --limit")]
    BudgetExceeded { what: &'static str, budget: u64 },
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("state has {got} labels but the diagram has {expected} crossings")]
    StateLength { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// One of the four strand ends at a crossing, written `[crossing, slot]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, u8)", into = "(usize, u8)")]
pub struct StrandEnd {
    pub crossing: usize,
    pub slot: u8,
}

impl StrandEnd {
    pub fn new(crossing: usize, slot: u8) -> Self {
        Self { crossing, slot }
    }

    fn node(self) -> usize {
        4 * self.crossing + self.slot as usize
    }

    fn from_node(node: usize) -> Self {
        Self::new(node / 4, (node % 4) as u8)
    }
}

impl From<(usize, u8)> for StrandEnd {
    fn from((crossing, slot): (usize, u8)) -> Self {
        Self { crossing, slot }
    }
}

impl From<StrandEnd> for (usize, u8) {
    fn from(e: StrandEnd) -> Self {
        (e.crossing, e.slot)
    }
}

/// A perfect matching on the slots `0..4` of one crossing.
pub type SlotPairing = [(u8, u8); 2];

fn normalize_pairing(p: SlotPairing) -> SlotPairing {
    let mut p = p.map(|(x, y)| if x <= y { (x, y) } else { (y, x) });
    p.sort();
    p
}

fn is_perfect_matching(p: &SlotPairing) -> bool {
    let mut seen = [false; 4];
    for &(x, y) in p {
        for s in [x, y] {
            if s > 3 || seen[s as usize] {
                return false;
            }
            seen[s as usize] = true;
        }
    }
    true
}

/// A crossing, determined for bracket purposes by its two smoothings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    a: SlotPairing,
    b: SlotPairing,
}

impl Crossing {
    pub fn new(a: SlotPairing, b: SlotPairing) -> Result<Self, DiagramError> {
        if !is_perfect_matching(&a) || !is_perfect_matching(&b) {
            return Err(DiagramError::Invalid(
                "crossing pairing is not a perfect matching of slots 0..4".into(),
            ));
        }
        let (a, b) = (normalize_pairing(a), normalize_pairing(b));
        if a == b {
            return Err(DiagramError::Invalid(
                "A- and B-pairings of a crossing coincide".into(),
            ));
        }
        Ok(Self { a, b })
    }

    /// Slots `(0,1),(2,3)` joined by A and `(1,2),(3,0)` joined by B, the
    /// convention used for PD codes.
    pub fn standard() -> Self {
        Self::new([(0, 1), (2, 3)], [(1, 2), (3, 0)]).expect("static pairings")
    }

    pub fn pairing(&self, side: Side) -> SlotPairing {
        match side {
            Side::A => self.a,
            Side::B => self.b,
        }
    }

    pub fn mirrored(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
        }
    }
}

/// A state: one label in `{A, B}` per crossing. Bit `i` of the mask form is
/// crossing `i`, with 0 meaning A.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    b_labels: Vec<bool>,
}

impl State {
    pub fn all(side: Side, len: usize) -> Self {
        Self {
            b_labels: vec![side == Side::B; len],
        }
    }

    pub fn from_mask(mask: u64, len: usize) -> Self {
        assert!(len <= 64, "mask states cover at most 64 crossings");
        Self {
            b_labels: (0..len).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    /// The state labelled B exactly on `crossings`.
    pub fn from_b_set(crossings: &[usize], len: usize) -> Self {
        let mut s = Self::all(Side::A, len);
        for &c in crossings {
            s.b_labels[c] = true;
        }
        s
    }

    pub fn to_mask(&self) -> Option<u64> {
        if self.b_labels.len() > 64 {
            return None;
        }
        Some(
            self.b_labels
                .iter()
                .enumerate()
                .fold(0, |m, (i, &b)| m | (b as u64) << i),
        )
    }

    pub fn len(&self) -> usize {
        self.b_labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b_labels.is_empty()
    }

    pub fn label(&self, crossing: usize) -> Side {
        if self.b_labels[crossing] {
            Side::B
        } else {
            Side::A
        }
    }

    pub fn set(&mut self, crossing: usize, side: Side) {
        self.b_labels[crossing] = side == Side::B;
    }

    pub fn flip(&mut self, crossing: usize) {
        self.b_labels[crossing] = !self.b_labels[crossing];
    }

    /// `b(s)`.
    pub fn b_count(&self) -> usize {
        self.b_labels.iter().filter(|&&b| b).count()
    }

    /// `a(s)`.
    pub fn a_count(&self) -> usize {
        self.len() - self.b_count()
    }

    pub fn count(&self, side: Side) -> usize {
        match side {
            Side::A => self.a_count(),
            Side::B => self.b_count(),
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.b_labels {
            write!(f, "{}", if b { 'B' } else { 'A' })?;
        }
        Ok(())
    }
}

/// An unoriented link diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    /// `partner[4c + slot]` is the strand end joined to `(c, slot)` by an arc.
    partner: Vec<usize>,
    free_circles: usize,
}

/// Summary of the two extreme states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremeStates {
    pub crossings: usize,
    pub a_circles: usize,
    pub b_circles: usize,
    /// `m = -c - 2|s_B| + 2`.
    pub min_degree: i64,
    /// `M = c + 2|s_A| - 2`.
    pub max_degree: i64,
}

/// Per-state data of a diagram enumerated by `low_excess_states`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipSet {
    /// Crossings labelled with the side opposite to the base state.
    pub flipped: Vec<usize>,
    pub circles: usize,
    /// `(|flipped| + |s_base| - circles) / 2`, zero on `Γ`, one on `Γ^1`.
    pub excess: usize,
}

impl Diagram {
    /// Builds and validates a diagram from crossings, arcs and a count of
    /// crossing-free circles.
    pub fn new(
        crossings: Vec<Crossing>,
        arcs: &[(StrandEnd, StrandEnd)],
        free_circles: usize,
    ) -> Result<Self, DiagramError> {
        let n = 4 * crossings.len();
        let mut partner = vec![usize::MAX; n];
        for &(x, y) in arcs {
            for e in [x, y] {
                if e.crossing >= crossings.len() || e.slot > 3 {
                    return Err(DiagramError::Invalid(format!(
                        "strand end {e:?} out of range"
                    )));
                }
            }
            let (x, y) = (x.node(), y.node());
            if x == y {
                return Err(DiagramError::Invalid(format!(
                    "arc pairs {:?} with itself",
                    StrandEnd::from_node(x)
                )));
            }
            if partner[x] != usize::MAX || partner[y] != usize::MAX {
                return Err(DiagramError::Invalid(
                    "a strand end lies on two arcs".into(),
                ));
            }
            partner[x] = y;
            partner[y] = x;
        }
        if let Some(free) = partner.iter().position(|&p| p == usize::MAX) {
            return Err(DiagramError::Invalid(format!(
                "strand end {:?} lies on no arc",
                StrandEnd::from_node(free)
            )));
        }
        Self::from_partner(crossings, partner, free_circles)
    }

    pub(crate) fn from_partner(
        crossings: Vec<Crossing>,
        partner: Vec<usize>,
        free_circles: usize,
    ) -> Result<Self, DiagramError> {
        if crossings.is_empty() && free_circles == 0 {
            return Err(DiagramError::Invalid("diagram has no components".into()));
        }
        debug_assert_eq!(partner.len(), 4 * crossings.len());
        Ok(Self {
            crossings,
            partner,
            free_circles,
        })
    }

    /// The crossing-free diagram of `n` disjoint circles.
    pub fn unlink(n: usize) -> Result<Self, DiagramError> {
        Self::from_partner(Vec::new(), Vec::new(), n)
    }

    /// Builds a diagram from a PD code. Each entry lists the four edge
    /// labels around a crossing in counterclockwise order; every label
    /// occurs exactly twice. Slots follow the entry order and each crossing
    /// uses [`Crossing::standard`].
    pub fn from_pd(code: &[[usize; 4]]) -> Result<Self, DiagramError> {
        let mut seen: BTreeMap<usize, Vec<StrandEnd>> = BTreeMap::new();
        for (c, entry) in code.iter().enumerate() {
            for (slot, &label) in entry.iter().enumerate() {
                seen.entry(label)
                    .or_default()
                    .push(StrandEnd::new(c, slot as u8));
            }
        }
        let mut arcs = Vec::new();
        for (label, ends) in seen {
            if ends.len() != 2 {
                return Err(DiagramError::Invalid(format!(
                    "PD label {label} occurs {} times",
                    ends.len()
                )));
            }
            arcs.push((ends[0], ends[1]));
        }
        Self::new(vec![Crossing::standard(); code.len()], &arcs, 0)
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn free_circles(&self) -> usize {
        self.free_circles
    }

    /// The end joined to `end` by an arc.
    pub fn arc_partner(&self, end: StrandEnd) -> StrandEnd {
        StrandEnd::from_node(self.partner[end.node()])
    }

    /// Every arc once, as `(smaller end, larger end)`.
    pub fn arcs(&self) -> Vec<(StrandEnd, StrandEnd)> {
        (0..self.partner.len())
            .filter(|&x| x < self.partner[x])
            .map(|x| {
                (
                    StrandEnd::from_node(x),
                    StrandEnd::from_node(self.partner[x]),
                )
            })
            .collect()
    }

    pub fn with_extra_free_circles(&self, extra: usize) -> Self {
        let mut d = self.clone();
        d.free_circles += extra;
        d
    }

    /// Arc index of every strand end.
    fn arc_index(&self) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.partner.len()];
        let mut next = 0;
        for x in 0..self.partner.len() {
            if idx[x] == usize::MAX {
                idx[x] = next;
                idx[self.partner[x]] = next;
                next += 1;
            }
        }
        idx
    }

    fn count_circles(
        &self,
        uf: &mut UnionFind,
        arc_of: &[usize],
        is_b: impl Fn(usize) -> bool,
    ) -> usize {
        uf.reset();
        for (i, x) in self.crossings.iter().enumerate() {
            let pairing = if is_b(i) { x.b } else { x.a };
            for (s, t) in pairing {
                uf.union(arc_of[4 * i + s as usize], arc_of[4 * i + t as usize]);
            }
        }
        uf.sets() + self.free_circles
    }

    /// `|sD|`: the number of circles after smoothing every crossing as `state`
    /// prescribes.
    pub fn components(&self, state: &State) -> Result<usize, DiagramError> {
        if state.len() != self.crossing_count() {
            return Err(DiagramError::StateLength {
                expected: self.crossing_count(),
                got: state.len(),
            });
        }
        let arc_of = self.arc_index();
        let mut uf = UnionFind::new(2 * self.crossing_count());
        Ok(self.count_circles(&mut uf, &arc_of, |i| state.b_labels[i]))
    }

    /// `|s_A|` or `|s_B|`.
    pub fn extreme_circles(&self, side: Side) -> usize {
        self.components(&State::all(side, self.crossing_count()))
            .expect("state length matches")
    }

    /// Number of link components, tracing strands straight through each
    /// crossing (the pairing that is neither smoothing).
    pub fn link_components(&self) -> usize {
        let arc_of = self.arc_index();
        let mut uf = UnionFind::new(2 * self.crossing_count());
        for (i, x) in self.crossings.iter().enumerate() {
            for (s, t) in through_pairing(x) {
                uf.union(arc_of[4 * i + s as usize], arc_of[4 * i + t as usize]);
            }
        }
        uf.sets() + self.free_circles
    }

    /// Histogram `h[b][k]` = number of states with `b(s) = b` and `|s| = k`.
    pub fn state_histogram(&self, limit: usize) -> Result<Vec<Vec<u64>>, DiagramError> {
        let c = self.crossing_count();
        if c > limit.min(MAX_LIMIT) {
            return Err(DiagramError::TooManyCrossings {
                crossings: c,
                limit: limit.min(MAX_LIMIT),
            });
        }
        let width = 2 * c + self.free_circles + 1;
        let total: u64 = 1 << c;
        let chunk: u64 = 1 << 12;
        let chunks = total.div_ceil(chunk);
        let arc_of = self.arc_index();
        let merged = (0..chunks)
            .into_par_iter()
            .fold(
                || (vec![0u64; (c + 1) * width], UnionFind::new(2 * c)),
                |(mut hist, mut uf), k| {
                    let hi = ((k + 1) * chunk).min(total);
                    for mask in k * chunk..hi {
                        let circles = self.count_circles(&mut uf, &arc_of, |i| mask >> i & 1 == 1);
                        hist[mask.count_ones() as usize * width + circles] += 1;
                    }
                    (hist, uf)
                },
            )
            .map(|(hist, _)| hist)
            .reduce(
                || vec![0u64; (c + 1) * width],
                |mut x, y| {
                    x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                    x
                },
            );
        Ok(merged.chunks(width).map(|row| row.to_vec()).collect())
    }

    /// `⟨D⟩ = Σ_s A^{a(s)-b(s)} (-A^{-2}-A^2)^{|s|-1}` with the default limit.
    pub fn bracket(&self) -> Result<LaurentPoly, DiagramError> {
        self.bracket_with_limit(DEFAULT_LIMIT)
    }

    pub fn bracket_with_limit(&self, limit: usize) -> Result<LaurentPoly, DiagramError> {
        let c = self.crossing_count() as i64;
        let hist = self.state_histogram(limit)?;
        let mut deltas: Vec<LaurentPoly> = Vec::new();
        let mut out = LaurentPoly::zero();
        for (b, row) in hist.iter().enumerate() {
            for (k, &count) in row.iter().enumerate() {
                if count == 0 {
                    continue;
                }
                while deltas.len() < k {
                    deltas.push(LaurentPoly::delta_pow(deltas.len() as u32));
                }
                let term = deltas[k - 1]
                    .shift(c - 2 * b as i64)
                    .scale(&BigInt::from(count));
                out += &term;
            }
        }
        Ok(out)
    }

    /// `m = -c - 2|s_B| + 2` and `M = c + 2|s_A| - 2`.
    pub fn extreme_states(&self) -> ExtremeStates {
        let c = self.crossing_count();
        let a_circles = self.extreme_circles(Side::A);
        let b_circles = self.extreme_circles(Side::B);
        ExtremeStates {
            crossings: c,
            a_circles,
            b_circles,
            min_degree: -(c as i64) - 2 * b_circles as i64 + 2,
            max_degree: c as i64 + 2 * a_circles as i64 - 2,
        }
    }

    /// `(m, M)`.
    pub fn extreme_degrees(&self) -> (i64, i64) {
        let e = self.extreme_states();
        (e.min_degree, e.max_degree)
    }

    /// Swaps the two smoothings at every crossing.
    pub fn mirror(&self) -> Self {
        Self {
            crossings: self.crossings.iter().map(Crossing::mirrored).collect(),
            partner: self.partner.clone(),
            free_circles: self.free_circles,
        }
    }

    /// All flip sets relative to the all-`base` state whose excess is at most
    /// `max_excess`. The family is closed under subsets, so a depth-first
    /// search over increasing crossing indices finds it without scanning
    /// every state. Fails once more than `budget` sets have been visited.
    pub fn low_excess_states(
        &self,
        base: Side,
        max_excess: usize,
        budget: u64,
    ) -> Result<Vec<FlipSet>, DiagramError> {
        let c = self.crossing_count();
        let arc_of = self.arc_index();
        let mut uf = UnionFind::new(2 * c);
        let mut flipped = vec![false; c];
        let base_circles =
            self.count_circles(&mut uf, &arc_of, |i| (base == Side::B) != flipped[i]);
        let mut out = vec![FlipSet {
            flipped: Vec::new(),
            circles: base_circles,
            excess: 0,
        }];
        let mut visited: u64 = 1;
        let mut stack: Vec<usize> = vec![0];
        while let Some(top) = stack.pop() {
            let set = out[top].flipped.clone();
            let start = set.last().map_or(0, |&l| l + 1);
            for &i in &set {
                flipped[i] = true;
            }
            for j in start..c {
                flipped[j] = true;
                let circles =
                    self.count_circles(&mut uf, &arc_of, |i| (base == Side::B) != flipped[i]);
                flipped[j] = false;
                visited += 1;
                if visited > budget {
                    return Err(DiagramError::BudgetExceeded {
                        what: "low-excess states",
                        budget,
                    });
                }
                let size = set.len() + 1;
                if size + base_circles < circles {
                    unreachable!("one flip changes the circle count by one");
                }
                let excess = (size + base_circles - circles) / 2;
                if excess <= max_excess {
                    let mut next = set.clone();
                    next.push(j);
                    out.push(FlipSet {
                        flipped: next,
                        circles,
                        excess,
                    });
                    stack.push(out.len() - 1);
                }
            }
            for &i in &set {
                flipped[i] = false;
            }
        }
        out.sort_by(|x, y| x.flipped.cmp(&y.flipped));
        Ok(out)
    }

    fn default_budget() -> u64 {
        1 << DEFAULT_LIMIT
    }

    /// `Γ_A = {s : |s| = |s_A| + b(s)}` or `Γ_B = {s : |s| = |s_B| + a(s)}`.
    pub fn gamma_states(&self, side: Side) -> Result<Vec<State>, DiagramError> {
        let c = self.crossing_count();
        Ok(self
            .low_excess_states(side, 0, Self::default_budget())?
            .into_iter()
            .map(|f| {
                let mut s = State::all(side, c);
                for i in f.flipped {
                    s.set(i, side.opposite());
                }
                s
            })
            .collect())
    }

    /// `(a_m, a_M)` via the state classes `Γ_B`, `Γ_A`.
    pub fn extreme_coeffs_by_states(&self) -> Result<(BigInt, BigInt), DiagramError> {
        let top = |d: &Diagram| -> Result<BigInt, DiagramError> {
            let sets = d.low_excess_states(Side::A, 0, Self::default_budget())?;
            let base = sets[0].circles as i64;
            let sum: i64 = sets.iter().map(|f| sign_pow(f.flipped.len() as i64)).sum();
            Ok(BigInt::from(sign_pow(base - 1) * sum))
        };
        Ok((top(&self.mirror())?, top(self)?))
    }

    /// `(a_m, a_M)` through the Lando graphs of `s_A D` and `s_B D`:
    /// `a_M = (-1)^{|s_A|-1} f(G_D)`. Works far beyond the enumeration limit.
    pub fn extreme_coeffs(&self) -> (BigInt, BigInt) {
        let top = |d: &Diagram| {
            let cd = chords::a_state_chords(d);
            let f = graphs::f_reduced(&chords::lando_graph(&cd));
            f * sign_pow(cd.circle_count() as i64 - 1)
        };
        (top(&self.mirror()), top(self))
    }

    /// `(a_{m+4}, a_{M-4})` from the classes `Γ` and `Γ^1`:
    /// `a_{M-4} = (-1)^{|s_A|-1} [ (|s_A|-1) Σ_Γ (-1)^b + Σ_Γ (-1)^b b + Σ_{Γ^1} (-1)^b ]`.
    pub fn second_coeffs(&self) -> Result<(BigInt, BigInt), DiagramError> {
        self.second_coeffs_with_budget(Self::default_budget())
    }

    pub fn second_coeffs_with_budget(&self, budget: u64) -> Result<(BigInt, BigInt), DiagramError> {
        let next = |d: &Diagram| -> Result<BigInt, DiagramError> {
            let sets = d.low_excess_states(Side::A, 1, budget)?;
            let base = sets[0].circles as i64;
            let (mut gamma, mut gamma_b, mut gamma1) = (0i64, 0i64, 0i64);
            for f in &sets {
                let b = f.flipped.len() as i64;
                match f.excess {
                    0 => {
                        gamma += sign_pow(b);
                        gamma_b += sign_pow(b) * b;
                    }
                    _ => gamma1 += sign_pow(b),
                }
            }
            Ok(BigInt::from(
                sign_pow(base - 1) * ((base - 1) * gamma + gamma_b + gamma1),
            ))
        };
        Ok((next(&self.mirror())?, next(self)?))
    }

    pub fn to_json(&self) -> DiagramJson {
        let crossings = self
            .crossings
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let lift =
                    |p: SlotPairing| p.map(|(s, t)| [StrandEnd::new(i, s), StrandEnd::new(i, t)]);
                CrossingJson {
                    a: lift(x.a),
                    b: lift(x.b),
                }
            })
            .collect();
        DiagramJson {
            crossings,
            arcs: self.arcs().into_iter().map(|(x, y)| [x, y]).collect(),
            free_circles: self.free_circles,
        }
    }

    pub fn from_json(js: &DiagramJson) -> Result<Self, DiagramError> {
        let mut crossings = Vec::with_capacity(js.crossings.len());
        for (i, x) in js.crossings.iter().enumerate() {
            let lower = |p: &[[StrandEnd; 2]; 2]| -> Result<SlotPairing, DiagramError> {
                let mut out = [(0, 0); 2];
                for (k, pair) in p.iter().enumerate() {
                    if pair.iter().any(|e| e.crossing != i) {
                        return Err(DiagramError::Invalid(format!(
                            "crossing {i} pairs strand ends of another crossing"
                        )));
                    }
                    out[k] = (pair[0].slot, pair[1].slot);
                }
                Ok(out)
            };
            crossings.push(Crossing::new(lower(&x.a)?, lower(&x.b)?)?);
        }
        let arcs: Vec<_> = js.arcs.iter().map(|[x, y]| (*x, *y)).collect();
        Self::new(crossings, &arcs, js.free_circles)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("diagram serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, DiagramError> {
        let js: DiagramJson =
            serde_json::from_str(text).map_err(|e| DiagramError::Invalid(e.to_string()))?;
        Self::from_json(&js)
    }
}

/// The pairing of a crossing's slots that is neither smoothing: the two
/// strands passing through it.
fn through_pairing(x: &Crossing) -> SlotPairing {
    let all = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    *all.iter()
        .find(|p| **p != x.a && **p != x.b)
        .expect("three matchings on four slots")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingJson {
    pub a: [[StrandEnd; 2]; 2],
    pub b: [[StrandEnd; 2]; 2],
}

/// Interchange format of diagrams.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub crossings: Vec<CrossingJson>,
    pub arcs: Vec<[StrandEnd; 2]>,
    #[serde(default)]
    pub free_circles: usize,
}

/// Diagrams used across the test suites.
pub mod samples {
    use super::*;

    /// The standard three-crossing trefoil with `|s_A| = 2`, `|s_B| = 3`.
    pub fn trefoil() -> Diagram {
        Diagram::from_pd(&[[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]).expect("valid PD code")
    }

    /// A single kink whose A-smoothing splits it into two circles.
    pub fn kink() -> Diagram {
        Diagram::from_pd(&[[1, 1, 2, 2]]).expect("valid PD code")
    }

    /// The standard figure-eight knot diagram.
    pub fn figure_eight() -> Diagram {
        Diagram::from_pd(&[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]])
            .expect("valid PD code")
    }

    pub fn unknot() -> Diagram {
        Diagram::unlink(1).expect("one circle")
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    /// Traces circles of a state directly by walking strand ends, as an
    /// oracle independent of the union-find count.
    fn walk_circles(d: &Diagram, s: &State) -> usize {
        let n = 4 * d.crossing_count();
        let mut seen = vec![false; n];
        let mut circles = d.free_circles();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            circles += 1;
            let mut x = start;
            loop {
                seen[x] = true;
                let y = d.partner[x];
                seen[y] = true;
                let c = y / 4;
                let slot = (y % 4) as u8;
                let p = d.crossings[c].pairing(s.label(c));
                let other = p.iter().find_map(|&(u, v)| {
                    if u == slot {
                        Some(v)
                    } else if v == slot {
                        Some(u)
                    } else {
                        None
                    }
                });
                x = 4 * c + other.unwrap() as usize;
                if x == start {
                    break;
                }
            }
        }
        circles
    }

    #[test]
    fn component_counts() {
        assert_eq!(unknot().components(&State::all(Side::A, 0)), Ok(1));
        let t = trefoil();
        assert_eq!(t.extreme_circles(Side::A), 2);
        assert_eq!(t.extreme_circles(Side::B), 3);
        for mask in 0..8 {
            let s = State::from_mask(mask, 3);
            assert_eq!(t.components(&s).unwrap(), walk_circles(&t, &s));
        }
    }

    #[test]
    fn brackets_of_small_diagrams() {
        assert_eq!(unknot().bracket().unwrap(), LaurentPoly::one());
        assert_eq!(kink().extreme_circles(Side::A), 2);
        assert_eq!(kink().bracket().unwrap(), poly(&[(3, -1)]));
        assert_eq!(
            trefoil().bracket().unwrap(),
            poly(&[(5, -1), (-3, -1), (-7, 1)])
        );
    }

    #[test]
    fn trefoil_bracket_matches_hand_enumeration() {
        // Eight states: |s| from the walk oracle, weights summed by hand.
        let t = trefoil();
        let mut expected = LaurentPoly::zero();
        for mask in 0..8u64 {
            let s = State::from_mask(mask, 3);
            let k = walk_circles(&t, &s) as u32;
            let ab = 3 - 2 * mask.count_ones() as i64;
            expected += &LaurentPoly::delta_pow(k - 1).shift(ab);
        }
        assert_eq!(t.bracket().unwrap(), expected);
    }

    #[test]
    fn figure_eight_is_amphichiral_up_to_inversion() {
        let f = figure_eight().bracket().unwrap();
        assert_eq!(f, poly(&[(8, 1), (4, -1), (0, 1), (-4, -1), (-8, 1)]));
        assert_eq!(f.invert_variable(), f);
    }

    #[test]
    fn extreme_degree_examples() {
        assert_eq!(trefoil().extreme_degrees(), (-7, 5));
        assert_eq!(unknot().extreme_degrees(), (0, 0));
        let m = trefoil().mirror();
        assert_eq!(m.extreme_degrees(), (-5, 7));
    }

    #[test]
    fn gamma_states_of_trefoil() {
        let t = trefoil();
        // Brute force filter of all 8 states by |s| = |s_A| + b(s).
        let brute: Vec<State> = (0..8)
            .map(|m| State::from_mask(m, 3))
            .filter(|s| t.components(s).unwrap() == 2 + s.b_count())
            .collect();
        let mut got = t.gamma_states(Side::A).unwrap();
        got.sort();
        let mut brute = brute;
        brute.sort();
        assert_eq!(got, brute);
        assert_eq!(got, vec![State::all(Side::A, 3)]);
        assert!(t
            .gamma_states(Side::B)
            .unwrap()
            .contains(&State::all(Side::B, 3)));
    }

    #[test]
    fn extreme_and_second_coefficients_of_trefoil() {
        let t = trefoil();
        let one = BigInt::from(1);
        assert_eq!(t.extreme_coeffs(), (one.clone(), -one.clone()));
        assert_eq!(t.extreme_coeffs_by_states().unwrap(), (one.clone(), -one));
        let br = t.bracket().unwrap();
        let (am4, a_m4) = t.second_coeffs().unwrap();
        assert_eq!(a_m4, br.coeff(1));
        assert_eq!(a_m4, BigInt::from(0));
        assert_eq!(am4, br.coeff(-3));
    }

    #[test]
    fn mirror_examples() {
        let t = trefoil();
        assert_eq!(t.mirror().mirror(), t);
        assert_eq!(
            t.mirror().bracket().unwrap(),
            poly(&[(-5, -1), (3, -1), (7, 1)])
        );
    }

    #[test]
    fn free_circle_multiplies_by_delta() {
        let t = trefoil();
        let two = t.with_extra_free_circles(1);
        assert_eq!(
            two.bracket().unwrap(),
            &t.bracket().unwrap() * &LaurentPoly::delta_pow(1)
        );
    }

    #[test]
    fn limit_is_enforced() {
        let t = trefoil();
        assert_eq!(
            t.bracket_with_limit(2),
            Err(DiagramError::TooManyCrossings {
                crossings: 3,
                limit: 2
            })
        );
    }

    #[test]
    fn link_components_of_samples() {
        assert_eq!(trefoil().link_components(), 1);
        assert_eq!(figure_eight().link_components(), 1);
        assert_eq!(unknot().with_extra_free_circles(1).link_components(), 2);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let t = trefoil();
        let text = t.to_json_string();
        let back = Diagram::from_json_str(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn validation_errors() {
        let x = Crossing::standard();
        let e = StrandEnd::new;
        assert!(Diagram::new(vec![x], &[(e(0, 0), e(0, 0)), (e(0, 1), e(0, 2))], 0).is_err());
        assert!(Diagram::new(vec![x], &[(e(0, 0), e(0, 1))], 0).is_err());
        assert!(Crossing::new([(0, 1), (2, 3)], [(1, 0), (3, 2)]).is_err());
        assert!(Diagram::unlink(0).is_err());
    }
}
