//! Simple graphs and the signed independent-set count
//! `f(G) = Σ_C (-1)^{|C|}` over independent vertex sets `C`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chords::{Chord, ChordDiagram, Twist};

/// Largest graph `f_naive` will enumerate.
pub const NAIVE_LIMIT: usize = 30;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error(
        "graph has {0} vertices; f_naive enumerates at most {NAIVE_LIMIT}, use f_reduced instead"
    )]
    TooLarge(usize),
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("{0} out of range")]
    OutOfRange(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::Invalid(format!(
                    "edge {u}-{v} leaves the vertex range 0..{n}"
                )));
            }
            if u == v {
                return Err(GraphError::Invalid(format!("loop at vertex {u}")));
            }
            if !g.add_edge(u, v) {
                return Err(GraphError::Invalid(format!("repeated edge {u}-{v}")));
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Adds `u`–`v`; returns false when the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v, "loops are not allowed");
        let fresh = self.adj[u].insert(v);
        self.adj[v].insert(u);
        fresh
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, ns) in self.adj.iter().enumerate() {
            out.extend(ns.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Subgraph induced on `keep`, relabelled in the given order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::empty(keep.len());
        for (i, &v) in keep.iter().enumerate() {
            for w in self.neighbors(v) {
                if let Some(&j) = index.get(&w) {
                    if i < j {
                        g.add_edge(i, j);
                    }
                }
            }
        }
        g
    }

    /// `G - S`, keeping the remaining vertices in order.
    pub fn remove(&self, drop: &[usize]) -> Graph {
        let drop: HashSet<usize> = drop.iter().copied().collect();
        let keep: Vec<usize> = (0..self.vertex_count())
            .filter(|v| !drop.contains(v))
            .collect();
        self.induced(&keep)
    }

    /// `G - N[v]`.
    pub fn remove_closed_neighborhood(&self, v: usize) -> Graph {
        let mut drop: Vec<usize> = self.neighbors(v).collect();
        drop.push(v);
        self.remove(&drop)
    }

    /// Disjoint union; vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count();
        let mut g = self.clone();
        g.adj.extend(
            other
                .adj
                .iter()
                .map(|ns| ns.iter().map(|v| v + shift).collect()),
        );
        g
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for w in self.neighbors(comp[i]) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// Side of every vertex in a proper 2-coloring, the smallest vertex of
    /// each component getting `false`.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.vertex_count()];
        for comp in self.components() {
            color[comp[0]] = Some(false);
            let mut stack = vec![comp[0]];
            while let Some(u) = stack.pop() {
                let cu = color[u].expect("colored before push");
                for w in self.neighbors(u) {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            stack.push(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(
            color
                .into_iter()
                .map(|c| c.expect("every vertex colored"))
                .collect(),
        )
    }

    /// Erdős–Rényi graph with edge probability `p`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, GraphError> {
        let js: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Invalid(e.to_string()))?;
        let edges: Vec<(usize, usize)> = js.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(js.vertices, &edges)
    }

    /// Parses the edge-list format, or JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        if text.trim_start().starts_with('{') {
            Self::from_json_str(text)
        } else {
            text.parse()
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        Self {
            vertices: g.vertex_count(),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

/// Edge-list text: an optional `vertices: n` header, then one `u v` pair per
/// line. `#` starts a comment.
impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut declared = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| GraphError::Parse { line: i + 1, msg };
            if let Some(rest) = line.strip_prefix("vertices:") {
                declared = Some(
                    rest.trim()
                        .parse::<usize>()
                        .map_err(|e| err(e.to_string()))?,
                );
                continue;
            }
            let nums: Vec<&str> = line.split_whitespace().collect();
            if nums.len() != 2 {
                return Err(err(format!("expected `u v`, found `{line}`")));
            }
            let u = nums[0].parse::<usize>().map_err(|e| err(e.to_string()))?;
            let v = nums[1].parse::<usize>().map_err(|e| err(e.to_string()))?;
            edges.push((u, v));
        }
        let needed = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let n = declared.unwrap_or(needed);
        Graph::from_edges(n, &edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.vertex_count())?;
        for (u, v) in self.edges() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedGraph {
    pub graph: Graph,
    pub root: usize,
}

impl RootedGraph {
    pub fn new(graph: Graph, root: usize) -> Result<Self, GraphError> {
        if root >= graph.vertex_count() {
            return Err(GraphError::OutOfRange(format!("root {root}")));
        }
        Ok(Self { graph, root })
    }

    pub fn with_root(&self, root: usize) -> Self {
        Self::new(self.graph.clone(), root).expect("root in range")
    }
}

/// Signed count of independent sets by direct enumeration.
pub fn f_naive(g: &Graph) -> Result<BigInt, GraphError> {
    let n = g.vertex_count();
    if n > NAIVE_LIMIT {
        return Err(GraphError::TooLarge(n));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, w| m | 1 << w))
        .collect();
    // Extends independent sets with vertices >= `next`, avoiding `blocked`.
    fn count(adj: &[u32], next: usize, blocked: u32) -> i64 {
        let mut total = 0;
        for v in next..adj.len() {
            if blocked >> v & 1 == 0 {
                total -= count(adj, v + 1, blocked | adj[v]);
            }
        }
        total + 1
    }
    Ok(BigInt::from(count(&adj, 0, 0)))
}

/// `f` through the reduction laws: duplicate elimination, multiplicativity
/// over components and the recursion `f(G) = f(G-v) - f(G-N[v])` on a
/// vertex of maximum degree.
pub fn f_reduced(g: &Graph) -> BigInt {
    let n = g.vertex_count();
    let words = n.div_ceil(64).max(1);
    let mut adj = vec![vec![0u64; words]; n];
    for (u, row) in adj.iter_mut().enumerate() {
        for v in g.neighbors(u) {
            row[v / 64] |= 1 << (v % 64);
        }
    }
    let mut all = vec![0u64; words];
    for v in 0..n {
        all[v / 64] |= 1 << (v % 64);
    }
    Reducer {
        adj,
        memo: HashMap::new(),
    }
    .f(all)
}

type Bits = Vec<u64>;

struct Reducer {
    adj: Vec<Bits>,
    memo: HashMap<Bits, BigInt>,
}

fn members(s: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &word) in s.iter().enumerate() {
        let mut x = word;
        while x != 0 {
            out.push(w * 64 + x.trailing_zeros() as usize);
            x &= x - 1;
        }
    }
    out
}

fn and(a: &[u64], b: &[u64]) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn without(a: &[u64], v: usize) -> Bits {
    let mut s = a.to_vec();
    s[v / 64] &= !(1 << (v % 64));
    s
}

fn popcount(a: &[u64]) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

impl Reducer {
    fn f(&mut self, s: Bits) -> BigInt {
        if s.iter().all(|&w| w == 0) {
            return BigInt::one();
        }
        if let Some(v) = self.memo.get(&s) {
            return v.clone();
        }
        let value = self.compute(&s);
        self.memo.insert(s, value.clone());
        value
    }

    fn compute(&mut self, s: &Bits) -> BigInt {
        let verts = members(s);
        let nbhd: Vec<Bits> = verts.iter().map(|&v| and(&self.adj[v], s)).collect();
        if nbhd.iter().any(|nb| nb.iter().all(|&w| w == 0)) {
            return BigInt::zero();
        }
        // Components.
        let first = self.component(s, verts[0]);
        if popcount(&first) < verts.len() {
            let rest: Bits = s.iter().zip(&first).map(|(x, y)| x & !y).collect();
            let a = self.f(first);
            if a.is_zero() {
                return a;
            }
            return a * self.f(rest);
        }
        // Duplicates: non-adjacent v, w with N(v) ⊆ N(w) give f(G) = f(G - w).
        for (i, &v) in verts.iter().enumerate() {
            for (j, &w) in verts.iter().enumerate() {
                if i != j
                    && !bit(&nbhd[i], w)
                    && subset(&nbhd[i], &nbhd[j])
                    && (nbhd[i] != nbhd[j] || v < w)
                {
                    return self.f(without(s, w));
                }
            }
        }
        let (k, &v) = verts
            .iter()
            .enumerate()
            .max_by_key(|&(k, &v)| (popcount(&nbhd[k]), std::cmp::Reverse(v)))
            .expect("non-empty");
        let minus_v = without(s, v);
        let minus_closed: Bits = minus_v.iter().zip(&nbhd[k]).map(|(x, y)| x & !y).collect();
        self.f(minus_v) - self.f(minus_closed)
    }

    fn component(&self, s: &[u64], start: usize) -> Bits {
        let mut comp = vec![0u64; s.len()];
        comp[start / 64] |= 1 << (start % 64);
        let mut frontier = comp.clone();
        loop {
            let mut next = vec![0u64; s.len()];
            for v in members(&frontier) {
                for (w, word) in next.iter_mut().enumerate() {
                    *word |= self.adj[v][w] & s[w] & !comp[w];
                }
            }
            if next.iter().all(|&w| w == 0) {
                return comp;
            }
            for (c, x) in comp.iter_mut().zip(&next) {
                *c |= x;
            }
            frontier = next;
        }
    }
}

fn bit(s: &[u64], v: usize) -> bool {
    s[v / 64] >> (v % 64) & 1 == 1
}

pub fn path(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::OutOfRange("path length 0".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::OutOfRange(format!("cycle length {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

/// `C_6` rooted at vertex 0.
pub fn hexagon() -> RootedGraph {
    RootedGraph {
        graph: cycle(6).expect("6 >= 3"),
        root: 0,
    }
}

/// Disjoint union plus the edge between the roots. Vertices of `g2` are
/// shifted by the size of `g1`.
pub fn star_join(g1: &RootedGraph, g2: &RootedGraph) -> Graph {
    let shift = g1.graph.vertex_count();
    let mut g = g1.graph.disjoint_union(&g2.graph);
    g.add_edge(g1.root, shift + g2.root);
    g
}

/// `(f(G), f(G - root))`.
pub fn brick_type(g: &RootedGraph) -> (BigInt, BigInt) {
    (f_reduced(&g.graph), f_reduced(&g.graph.remove(&[g.root])))
}

/// Joins a fresh hexagon by one of its vertices `w` to the root and moves
/// the root to a hexagon vertex adjacent to `w`: type `(n, k)` becomes
/// `(n + k, k)`.
pub fn attach_hexagon(g: &RootedGraph) -> RootedGraph {
    let shift = g.graph.vertex_count();
    RootedGraph {
        graph: star_join(g, &hexagon()),
        root: shift + 1,
    }
}

/// Star-join with a path of three vertices rooted at an end, which negates
/// `f`.
pub fn negate(g: &RootedGraph) -> Graph {
    star_join(
        g,
        &RootedGraph {
            graph: path(3).expect("3 >= 1"),
            root: 0,
        },
    )
}

/// `G_1 = H`, `G_{r+1} = attach_hexagon(G_r)`, with `f(G_r) = r + 1`.
pub fn family_g(r: usize) -> Result<RootedGraph, GraphError> {
    if r == 0 {
        return Err(GraphError::OutOfRange("r = 0".into()));
    }
    let mut g = hexagon();
    for _ in 1..r {
        g = attach_hexagon(&g);
    }
    Ok(g)
}

/// Offset within the freshly attached hexagon of the next root in the
/// Fibonacci chain: the attaching vertex itself. With this root
/// `f(G' - w) = f(G) f(L_5) = f(G)` and `f(G' - N[w]) = f(G - v) f(L_3)`, so
/// type `(n, k)` becomes `(n + k, n)`.
pub const FIBONACCI_ROOT: usize = 0;

/// Hexagon chain whose `f` values run through 2, 3, 5, 8, ...
pub fn family_f(r: usize) -> Result<RootedGraph, GraphError> {
    if r == 0 {
        return Err(GraphError::OutOfRange("r = 0".into()));
    }
    let mut g = hexagon();
    for _ in 1..r {
        let shift = g.graph.vertex_count();
        g = RootedGraph {
            graph: star_join(&g, &hexagon()),
            root: shift + FIBONACCI_ROOT,
        };
    }
    Ok(g)
}

/// A graph built from bricks around a central vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Building {
    pub graph: Graph,
    pub center: usize,
    /// Vertices subdividing the edges center–root; empty for simple buildings.
    pub intermediates: Vec<usize>,
    /// Images of the brick roots.
    pub roots: Vec<usize>,
}

impl Building {
    pub fn rooted_at(&self, v: usize) -> RootedGraph {
        RootedGraph {
            graph: self.graph.clone(),
            root: v,
        }
    }
}

fn building(bricks: &[RootedGraph], subdivide: bool) -> Result<Building, GraphError> {
    if bricks.is_empty() {
        return Err(GraphError::OutOfRange(
            "a building needs at least one brick".into(),
        ));
    }
    let mut graph = Graph::empty(1);
    let (mut roots, mut intermediates) = (Vec::new(), Vec::new());
    for b in bricks {
        let anchor = if subdivide {
            let m = graph.add_vertex();
            graph.add_edge(0, m);
            intermediates.push(m);
            m
        } else {
            0
        };
        let shift = graph.vertex_count();
        graph = graph.disjoint_union(&b.graph);
        graph.add_edge(anchor, shift + b.root);
        roots.push(shift + b.root);
    }
    Ok(Building {
        graph,
        center: 0,
        intermediates,
        roots,
    })
}

/// Central vertex joined to the root of every brick.
pub fn building_simple(bricks: &[RootedGraph]) -> Result<Building, GraphError> {
    building(bricks, false)
}

/// As [`building_simple`] with every center–root edge subdivided once.
pub fn building_complicated(bricks: &[RootedGraph]) -> Result<Building, GraphError> {
    building(bricks, true)
}

/// Predicted brick types of the buildings over bricks of types
/// `(n_i, m_i)`, one entry per rooted position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildingTypes {
    pub simple_center: (BigInt, BigInt),
    pub simple_roots: Vec<(BigInt, BigInt)>,
    pub complicated_center: (BigInt, BigInt),
    pub complicated_roots: Vec<(BigInt, BigInt)>,
    pub complicated_intermediates: Vec<(BigInt, BigInt)>,
}

pub fn building_types(types: &[(BigInt, BigInt)]) -> BuildingTypes {
    let n: Vec<&BigInt> = types.iter().map(|t| &t.0).collect();
    let m: Vec<&BigInt> = types.iter().map(|t| &t.1).collect();
    let diffs: Vec<BigInt> = types.iter().map(|(a, b)| a - b).collect();
    let prod_except = |v: &[&BigInt], j: usize| -> BigInt {
        v.iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, x)| (*x).clone())
            .product()
    };
    let pn: BigInt = n.iter().copied().product();
    let pm: BigInt = m.iter().copied().product();
    let pd: BigInt = diffs.iter().product();
    let d_refs: Vec<&BigInt> = diffs.iter().collect();
    let k = types.len();
    let s_first = &pn - &pm;
    let c_first = &pd - &pn;
    BuildingTypes {
        simple_center: (s_first.clone(), pn.clone()),
        simple_roots: (0..k)
            .map(|j| (s_first.clone(), m[j] * prod_except(&n, j) - &pm))
            .collect(),
        complicated_center: (c_first.clone(), pd.clone()),
        complicated_roots: (0..k)
            .map(|j| (c_first.clone(), -(m[j] * prod_except(&n, j))))
            .collect(),
        complicated_intermediates: (0..k)
            .map(|j| (c_first.clone(), n[j] * prod_except(&d_refs, j) - &pn))
            .collect(),
    }
}

/// Canonical adjacency code of a graph on at most 11 vertices: the
/// lexicographically largest upper-triangle bit string over vertex orders
/// compatible with an iterated degree refinement.
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.vertex_count();
    assert!(n <= 11, "canonical codes need at most 11 vertices");
    // Color refinement.
    let mut color: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    loop {
        let sig: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut ns: Vec<usize> = g.neighbors(v).map(|w| color[w]).collect();
                ns.sort();
                (color[v], ns)
            })
            .collect();
        let mut distinct: Vec<_> = sig.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sig
            .iter()
            .map(|s| distinct.binary_search(s).expect("present"))
            .collect();
        let classes = |c: &[usize]| c.iter().collect::<BTreeSet<_>>().len();
        if classes(&next) == classes(&color) {
            color = next;
            break;
        }
        color = next;
    }
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &c) in color.iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    let cells: Vec<Vec<usize>> = cells.into_values().collect();
    let mut best = 0u64;
    let mut order = Vec::with_capacity(n);
    permute_cells(g, &cells, 0, &mut vec![false; n], &mut order, &mut best);
    best
}

fn code_of(g: &Graph, order: &[usize]) -> u64 {
    let mut code = 0u64;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            code = code << 1 | g.has_edge(order[i], order[j]) as u64;
        }
    }
    code
}

fn permute_cells(
    g: &Graph,
    cells: &[Vec<usize>],
    cell: usize,
    used: &mut Vec<bool>,
    order: &mut Vec<usize>,
    best: &mut u64,
) {
    if cell == cells.len() {
        *best = (*best).max(code_of(g, order) | 1 << 63);
        return;
    }
    let len = order.len();
    let cell_done = cells[cell].iter().all(|&v| used[v]);
    if cell_done {
        permute_cells(g, cells, cell + 1, used, order, best);
        return;
    }
    for &v in &cells[cell] {
        if !used[v] {
            used[v] = true;
            order.push(v);
            permute_cells(g, cells, cell, used, order, best);
            order.truncate(len);
            used[v] = false;
        }
    }
}

/// Graph isomorphism by backtracking with degree pruning.
pub fn graphs_isomorphic(a: &Graph, b: &Graph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..n).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..n).map(|v| b.degree(v)).collect();
    da.sort();
    db.sort();
    if da != db {
        return false;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(a.degree(v)));
    fn extend(
        a: &Graph,
        b: &Graph,
        order: &[usize],
        k: usize,
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for t in 0..b.vertex_count() {
            if used[t] || b.degree(t) != a.degree(v) {
                continue;
            }
            let ok = order[..k]
                .iter()
                .all(|&u| a.has_edge(u, v) == b.has_edge(map[u].expect("mapped"), t));
            if ok {
                map[v] = Some(t);
                used[t] = true;
                if extend(a, b, order, k + 1, map, used) {
                    return true;
                }
                map[v] = None;
                used[t] = false;
            }
        }
        false
    }
    extend(a, b, &order, 0, &mut vec![None; n], &mut vec![false; n])
}

/// Largest graph size [`brick_search`] explores.
pub const BRICK_SEARCH_LIMIT: usize = 10;

/// Smallest rooted graph of brick type `(n, k)`, found by growing every
/// isomorphism class of graphs one vertex at a time. Among witnesses of
/// minimal size the first in generation order is returned.
pub fn brick_search(
    n: i64,
    k: i64,
    max_vertices: usize,
) -> Result<Option<RootedGraph>, GraphError> {
    if max_vertices > BRICK_SEARCH_LIMIT {
        return Err(GraphError::OutOfRange(format!(
            "max_vertices {max_vertices} > {BRICK_SEARCH_LIMIT}"
        )));
    }
    let (n, k) = (BigInt::from(n), BigInt::from(k));
    let mut level = vec![Graph::empty(0)];
    for size in 1..=max_vertices {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            let m = g.vertex_count();
            for mask in 0u32..1 << m {
                let mut h = g.clone();
                let v = h.add_vertex();
                for w in 0..m {
                    if mask >> w & 1 == 1 {
                        h.add_edge(v, w);
                    }
                }
                if seen.insert(canonical_code(&h)) {
                    next.push(h);
                }
            }
        }
        for g in &next {
            let fg = f_reduced(g);
            if fg != n {
                continue;
            }
            for root in 0..size {
                if f_reduced(&g.remove(&[root])) == k {
                    return Ok(Some(RootedGraph {
                        graph: g.clone(),
                        root,
                    }));
                }
            }
        }
        level = next;
    }
    Ok(None)
}

/// Largest graph [`realize_as_chord_diagram`] attempts.
pub const REALIZE_LIMIT: usize = 12;

/// A chord diagram on one circle whose interlacement graph is `g`, found by
/// inserting chords one at a time in breadth-first order and backtracking on
/// any wrong interleaving. Components are realized separately and written
/// one after another. `max_circles` only needs to be at least one.
pub fn realize_as_chord_diagram(
    g: &Graph,
    max_circles: usize,
) -> Result<Option<ChordDiagram>, GraphError> {
    if g.vertex_count() > REALIZE_LIMIT {
        return Err(GraphError::OutOfRange(format!(
            "{} vertices > {REALIZE_LIMIT}",
            g.vertex_count()
        )));
    }
    if max_circles == 0 {
        return Ok(None);
    }
    let mut word = Vec::new();
    for comp in g.components() {
        match realize_connected(g, &comp) {
            Some(w) => word.extend(w),
            None => return Ok(None),
        }
    }
    Ok(Some(word_to_chords(&word)))
}

/// One-circle chord diagram whose chord `v` has its two endpoints at the
/// occurrences of symbol `v` (symbols `0..n`); all chords coherent.
pub fn word_to_chords(word: &[usize]) -> ChordDiagram {
    let n = word.len() / 2;
    let mut ends = vec![Vec::new(); n];
    for (i, &s) in word.iter().enumerate() {
        ends[s].push(i);
    }
    let chords = ends
        .iter()
        .map(|e| Chord {
            ends: [e[0], e[1]],
            twist: Twist::Coherent,
        })
        .collect();
    ChordDiagram::new(vec![(0..word.len()).collect()], chords).expect("each symbol occurs twice")
}

fn realize_connected(g: &Graph, comp: &[usize]) -> Option<Vec<usize>> {
    // Breadth-first order keeps every inserted chord adjacent to an earlier one.
    let mut order = vec![comp[0]];
    let mut i = 0;
    while i < order.len() {
        for w in g.neighbors(order[i]) {
            if !order.contains(&w) {
                order.push(w);
            }
        }
        i += 1;
    }
    let mut word = Vec::with_capacity(2 * order.len());
    word.extend([order[0], order[0]]);
    if place(g, &order, 1, &mut word) {
        Some(word)
    } else {
        None
    }
}

fn place(g: &Graph, order: &[usize], k: usize, word: &mut Vec<usize>) -> bool {
    if k == order.len() {
        return true;
    }
    let v = order[k];
    let len = word.len();
    for i in 0..=len {
        for j in i..=len {
            // Endpoints go before positions i and j of the current word.
            let mut trial = Vec::with_capacity(len + 2);
            trial.extend_from_slice(&word[..i]);
            trial.push(v);
            trial.extend_from_slice(&word[i..j]);
            trial.push(v);
            trial.extend_from_slice(&word[j..]);
            let ok = order[..k].iter().all(|&u| {
                let inside = word[i..j].iter().filter(|&&s| s == u).count();
                (inside == 1) == g.has_edge(u, v)
            });
            if ok {
                let saved = std::mem::replace(word, trial);
                if place(g, order, k + 1, word) {
                    return true;
                }
                *word = saved;
            }
        }
    }
    false
}

/// For each prime `p <= bound`, a simple building of brick type `(p, _)`
/// assembled from the bricks in `pool` (name, brick) using at most
/// `max_bricks` bricks. Pool entries are reused freely.
pub fn prime_targets(
    pool: &[(String, RootedGraph)],
    max_bricks: usize,
    bound: i64,
) -> BTreeMap<i64, Vec<String>> {
    let types: Vec<(BigInt, BigInt)> = pool.iter().map(|(_, b)| brick_type(b)).collect();
    let mut found: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    let mut pick = Vec::new();
    fn walk(
        pool: &[(String, RootedGraph)],
        types: &[(BigInt, BigInt)],
        max: usize,
        start: usize,
        pick: &mut Vec<usize>,
        found: &mut BTreeMap<i64, Vec<String>>,
        bound: i64,
    ) {
        if !pick.is_empty() {
            let n: BigInt = pick.iter().map(|&i| types[i].0.clone()).product();
            let m: BigInt = pick.iter().map(|&i| types[i].1.clone()).product();
            if let Ok(v) = i64::try_from(n - m) {
                if (2..=bound).contains(&v) && is_prime(v) && !found.contains_key(&v) {
                    found.insert(v, pick.iter().map(|&i| pool[i].0.clone()).collect());
                }
            }
        }
        if pick.len() == max {
            return;
        }
        for i in start..pool.len() {
            pick.push(i);
            walk(pool, types, max, i, pick, found, bound);
            pick.pop();
        }
    }
    walk(pool, &types, max_bricks, 0, &mut pick, &mut found, bound);
    found
}

pub fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}
