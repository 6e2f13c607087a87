//! The verification harness behind `verify`: every row recomputes the
//! quantities a closed form predicts and prints expected against actual.
//!
//! Rows whose diagrams exceed the enumeration limit fall back to the
//! Lando-graph and state-class routes and are marked `partial`.

use std::collections::BTreeMap;
use std::fmt::{self, Display, Write as _};

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{CliError, Format, RunConfig};
use crate::diagram::{Diagram, State};
use crate::graphs::{self, RootedGraph, NAIVE_LIMIT};
use crate::laurent::sign_pow;
use crate::{chords, families, LaurentPoly, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Partial,
    Fail,
    Skip,
}

impl Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "pass",
            Status::Partial => "partial",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn holds(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub id: String,
    pub params: String,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Default)]
struct RowBuilder {
    checks: Vec<Check>,
    partial: bool,
    note: Option<String>,
}

impl RowBuilder {
    fn check(&mut self, name: &str, expected: impl Display, actual: impl Display) {
        self.checks.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }

    fn partial(&mut self, note: String) {
        self.partial = true;
        self.note = Some(note);
    }

    fn finish(self, id: &str, params: String) -> Row {
        let status = if self.checks.iter().any(|c| !c.holds()) {
            Status::Fail
        } else if self.partial {
            Status::Partial
        } else {
            Status::Pass
        };
        Row {
            id: id.into(),
            params,
            status,
            checks: self.checks,
            note: self.note,
        }
    }
}

fn skipped(id: &str, params: String, note: impl Into<String>) -> Row {
    Row {
        id: id.into(),
        params,
        status: Status::Skip,
        checks: Vec::new(),
        note: Some(note.into()),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

enum GridValues {
    Values(Vec<i64>),
    UpTo(i64),
}

fn canonical(name: &str) -> &str {
    match name {
        "alpha" | "α" => "a",
        "beta" | "β" => "b",
        other => other,
    }
}

fn parse_int(s: &str) -> Result<i64, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad grid value `{s}`")))
}

/// Grid arguments: `r=3`, `r=1,2,5`, `r=1..4` (inclusive), `k<=3`.
fn parse_grid(args: &[String]) -> Result<BTreeMap<String, GridValues>, CliError> {
    let mut out = BTreeMap::new();
    for arg in args {
        let (name, values) = if let Some((name, hi)) = arg.split_once("<=") {
            (name, GridValues::UpTo(parse_int(hi)?))
        } else if let Some((name, value)) = arg.split_once('=') {
            let values = if let Some((lo, hi)) = value.split_once("..") {
                let (lo, hi) = (parse_int(lo)?, parse_int(hi.trim_start_matches('='))?);
                GridValues::Values((lo..=hi).collect())
            } else {
                GridValues::Values(value.split(',').map(parse_int).collect::<Result<_, _>>()?)
            };
            (name, values)
        } else {
            return Err(CliError::Usage(format!(
                "grid entries look like `r=1..3` or `k<=3`, found `{arg}`"
            )));
        };
        out.insert(canonical(name.trim()).to_string(), values);
    }
    Ok(out)
}

struct Param {
    name: &'static str,
    min: i64,
    default: &'static [i64],
}

const fn p(name: &'static str, min: i64, default: &'static [i64]) -> Param {
    Param { name, min, default }
}

/// Cartesian product of the parameter values, or `fallback` when no grid
/// was given and the id has a preferred list of tuples.
fn resolve(
    grid: &BTreeMap<String, GridValues>,
    params: &[Param],
    fallback: &[&[i64]],
) -> Result<Vec<Vec<i64>>, CliError> {
    if let Some(name) = grid
        .keys()
        .find(|k| !params.iter().any(|p| p.name == k.as_str()))
    {
        let known: Vec<&str> = params.iter().map(|p| p.name).collect();
        return Err(CliError::Usage(format!(
            "unknown grid parameter `{name}`; expected one of {known:?}"
        )));
    }
    if grid.is_empty() && !fallback.is_empty() {
        return Ok(fallback.iter().map(|t| t.to_vec()).collect());
    }
    let mut rows = vec![Vec::new()];
    for p in params {
        let values: Vec<i64> = match grid.get(p.name) {
            Some(GridValues::Values(v)) => v.clone(),
            Some(GridValues::UpTo(hi)) => (p.min..=*hi).collect(),
            None => p.default.to_vec(),
        };
        rows = rows
            .into_iter()
            .flat_map(|r| values.iter().map(move |&v| [r.clone(), vec![v]].concat()))
            .collect();
    }
    Ok(rows)
}

fn label(params: &[Param], values: &[i64]) -> String {
    params
        .iter()
        .zip(values)
        .map(|(p, v)| format!("{}={v}", p.name))
        .collect::<Vec<_>>()
        .join(" ")
}

type Job = Box<dyn Fn() -> Row + Send + Sync>;

const IDS: [&str; 14] = [
    "thm1",
    "fibonacci",
    "lemma3",
    "example",
    "thm2",
    "thm3",
    "thm4",
    "thm5",
    "thm6",
    "pretzel",
    "engine",
    "chords",
    "roundtrip",
    "all",
];

/// Rows for `id` over the grid, evaluated in parallel and returned in grid
/// order.
pub fn verify_rows(id: &str, grid: &[String], config: &RunConfig) -> Result<Vec<Row>, CliError> {
    let grid = parse_grid(grid)?;
    let jobs = jobs(id, &grid, config)?;
    Ok(jobs.par_iter().map(|job| job()).collect())
}

fn jobs(
    id: &str,
    grid: &BTreeMap<String, GridValues>,
    config: &RunConfig,
) -> Result<Vec<Job>, CliError> {
    let limit = config.limit;
    let seed = config.seed;
    let mut jobs: Vec<Job> = Vec::new();
    match id {
        "thm1" => {
            const P: [Param; 1] = [p("r", 1, &[1, 2, 3, 4, 5, 6, 7, 8])];
            for v in resolve(grid, &P, &[])? {
                jobs.push(Box::new(move || thm1(v[0], label(&P, &v))));
            }
        }
        "fibonacci" => {
            const P: [Param; 1] = [p("r", 1, &[1, 2, 3, 4, 5, 6])];
            for v in resolve(grid, &P, &[])? {
                jobs.push(Box::new(move || fibonacci(v[0], label(&P, &v))));
            }
        }
        "lemma3" => {
            const P: [Param; 1] = [p("k", 1, &[1, 2, 3])];
            let pool = std::sync::Arc::new(brick_pool());
            for v in resolve(grid, &P, &[])? {
                let k = v[0];
                if !(1..=4).contains(&k) {
                    jobs.push(Box::new(move || {
                        skipped(
                            "lemma3",
                            format!("k={k}"),
                            "brick lists have 1 to 4 entries",
                        )
                    }));
                    continue;
                }
                for list in lists(pool.len(), k as usize) {
                    let pool = pool.clone();
                    jobs.push(Box::new(move || lemma3(&pool, &list)));
                }
            }
        }
        "example" => {
            resolve(grid, &[], &[])?;
            jobs.push(Box::new(example));
        }
        "thm2" => {
            const P: [Param; 1] = [p("r", 1, &[1, 2])];
            for v in resolve(grid, &P, &[])? {
                jobs.push(Box::new(move || thm2(v[0], limit, label(&P, &v))));
            }
        }
        "thm3" => {
            const P: [Param; 2] = [p("r", 1, &[1]), p("s", 1, &[1])];
            for v in resolve(grid, &P, &[])? {
                jobs.push(Box::new(move || thm3(v[0], v[1], limit, label(&P, &v))));
            }
        }
        "thm4" => {
            const P: [Param; 3] = [p("r", 1, &[1]), p("s", 1, &[1]), p("a", 3, &[3])];
            for v in resolve(grid, &P, &[])? {
                jobs.push(Box::new(move || {
                    thm4(v[0], v[1], v[2], limit, label(&P, &v))
                }));
            }
        }
        "thm5" | "thm6" => {
            const P: [Param; 4] = [
                p("r", 2, &[2]),
                p("s", 2, &[2]),
                p("a", 2, &[2]),
                p("b", 2, &[2]),
            ];
            let fallback: &[&[i64]] = if id == "thm5" {
                &[&[2, 2, 2, 2], &[2, 3, 2, 2], &[3, 2, 2, 3]]
            } else {
                &[&[2, 2, 2, 2], &[2, 2, 3, 2]]
            };
            for v in resolve(grid, &P, fallback)? {
                let name = label(&P, &v);
                if id == "thm5" {
                    jobs.push(Box::new(move || thm5(&v, limit, name.clone())));
                } else {
                    jobs.push(Box::new(move || thm6(&v, limit, name.clone())));
                }
            }
        }
        "pretzel" => {
            const P: [Param; 2] = [p("s", 2, &[2, 3, 4]), p("a", 2, &[2, 3])];
            for v in resolve(grid, &P, &[])? {
                let (s, a) = (v[0], v[1]);
                if !(2..=12).contains(&s) || a < 2 {
                    jobs.push(Box::new(move || {
                        skipped(
                            "pretzel",
                            format!("s={s} a={a}"),
                            "needs 2 <= s <= 12 and a >= 2",
                        )
                    }));
                    continue;
                }
                for mask in 0..1u32 << s {
                    let bs: Vec<i64> = (0..s)
                        .map(|i| if mask >> i & 1 == 1 { -3 } else { -2 })
                        .collect();
                    if bs.contains(&-2) {
                        jobs.push(Box::new(move || pretzel(a, &bs, limit)));
                    }
                }
            }
        }
        "engine" => {
            const P: [Param; 2] = [p("n", 1, &[100]), p("c", 1, &[14])];
            for v in resolve(grid, &P, &[])? {
                for i in 0..v[0].max(0) as u64 {
                    let cmax = v[1];
                    jobs.push(Box::new(move || engine(seed, i, cmax, limit)));
                }
            }
        }
        "chords" | "roundtrip" => {
            let (n, k): (&'static [i64], &'static [i64]) = if id == "chords" {
                (&[50], &[12])
            } else {
                (&[100], &[10])
            };
            let params = [p("n", 1, n), p("k", 0, k)];
            for v in resolve(grid, &params, &[])? {
                for i in 0..v[0].max(0) as u64 {
                    let kmax = v[1];
                    if id == "chords" {
                        jobs.push(Box::new(move || chord_oracle(seed, i, kmax)));
                    } else {
                        jobs.push(Box::new(move || roundtrip(seed, i, kmax)));
                    }
                }
            }
        }
        "all" => {
            resolve(grid, &[], &[])?;
            for sub in IDS.iter().filter(|&&s| s != "all") {
                jobs.extend(self::jobs(sub, &BTreeMap::new(), config)?);
            }
        }
        _ => {
            return Err(CliError::Usage(format!(
                "unknown verification `{id}`; expected one of {IDS:?}"
            )))
        }
    }
    Ok(jobs)
}

pub fn render(id: &str, rows: &[Row], format: Format) -> String {
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    let (pass, partial, fail, skip) = (
        count(Status::Pass),
        count(Status::Partial),
        count(Status::Fail),
        count(Status::Skip),
    );
    match format {
        Format::Text => {
            let mut out = String::new();
            for row in rows {
                let _ = write!(out, "{:<7} {} {}", row.status, row.id, row.params);
                for (i, c) in row.checks.iter().enumerate() {
                    let sep = if i == 0 { " |" } else { "" };
                    if c.holds() {
                        let _ = write!(out, "{sep} {}={}", c.name, c.actual);
                    } else {
                        let _ = write!(
                            out,
                            "{sep} {}={} (expected {})",
                            c.name, c.actual, c.expected
                        );
                    }
                }
                if let Some(note) = &row.note {
                    let _ = write!(out, " # {note}");
                }
                out.push('\n');
            }
            let _ = writeln!(
                out,
                "{id}: {} rows, {pass} pass, {partial} partial, {fail} fail, {skip} skip",
                rows.len()
            );
            out
        }
        Format::Json => {
            let v = json!({
                "id": id,
                "rows": rows,
                "summary": { "rows": rows.len(), "pass": pass, "partial": partial, "fail": fail, "skip": skip },
            });
            let mut s = serde_json::to_string_pretty(&v).expect("rows serialize");
            s.push('\n');
            s
        }
    }
}

macro_rules! try_row {
    ($e:expr, $id:expr, $params:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return skipped($id, $params, e.to_string()),
        }
    };
}

fn thm1(r: i64, params: String) -> Row {
    let g = try_row!(graphs::family_g(r.max(0) as usize), "thm1", params);
    let neg = graphs::negate(&g);
    let mut row = RowBuilder::default();
    row.check("f(G_r)", r + 1, graphs::f_reduced(&g.graph));
    row.check("f(-G_r)", -(r + 1), graphs::f_reduced(&neg));
    if neg.vertex_count() <= NAIVE_LIMIT {
        row.check(
            "naive f(G_r)",
            r + 1,
            graphs::f_naive(&g.graph).expect("small"),
        );
        row.check(
            "naive f(-G_r)",
            -(r + 1),
            graphs::f_naive(&neg).expect("small"),
        );
    } else {
        row.partial(format!(
            "{} vertices: reduced count only",
            neg.vertex_count()
        ));
    }
    row.finish("thm1", params)
}

fn fibonacci(r: i64, params: String) -> Row {
    let g = try_row!(graphs::family_f(r.max(0) as usize), "fibonacci", params);
    let (mut a, mut b) = (BigInt::from(1), BigInt::from(1));
    for _ in 0..r {
        (a, b) = (b.clone(), a + b);
    }
    let mut row = RowBuilder::default();
    row.check("f(F_r)", &b, graphs::f_reduced(&g.graph));
    if g.graph.vertex_count() <= NAIVE_LIMIT {
        row.check(
            "naive f(F_r)",
            &b,
            graphs::f_naive(&g.graph).expect("small"),
        );
    } else {
        row.partial(format!(
            "{} vertices: reduced count only",
            g.graph.vertex_count()
        ));
    }
    row.finish("fibonacci", params)
}

fn brick_pool() -> Vec<(&'static str, RootedGraph)> {
    let l3 = RootedGraph::new(graphs::path(3).expect("path"), 0).expect("root in range");
    let b53 = graphs::brick_search(5, 3, 8)
        .expect("bounded search")
        .expect("a (5,3) brick on at most 8 vertices");
    vec![("H", graphs::hexagon()), ("L3", l3), ("B53", b53)]
}

fn lists(pool: usize, k: usize) -> Vec<Vec<usize>> {
    (0..pool.pow(k as u32))
        .map(|code| {
            (0..k)
                .map(|i| code / pool.pow((k - 1 - i) as u32) % pool)
                .collect()
        })
        .collect()
}

fn pair((n, m): &(BigInt, BigInt)) -> String {
    format!("({n},{m})")
}

fn lemma3(pool: &[(&'static str, RootedGraph)], list: &[usize]) -> Row {
    let bricks: Vec<RootedGraph> = list.iter().map(|&i| pool[i].1.clone()).collect();
    let params = format!(
        "bricks={}",
        list.iter()
            .map(|&i| pool[i].0)
            .collect::<Vec<_>>()
            .join(",")
    );
    let types: Vec<(BigInt, BigInt)> = bricks.iter().map(graphs::brick_type).collect();
    let want = graphs::building_types(&types);
    let s = try_row!(graphs::building_simple(&bricks), "lemma3", params);
    let c = try_row!(graphs::building_complicated(&bricks), "lemma3", params);
    let mut row = RowBuilder::default();
    let naive = c.graph.vertex_count() <= NAIVE_LIMIT;
    if !naive {
        row.partial(format!(
            "{} vertices: reduced count only",
            c.graph.vertex_count()
        ));
    }
    let actual = |g: RootedGraph| {
        let rest = g.graph.remove(&[g.root]);
        if naive {
            (
                graphs::f_naive(&g.graph).expect("small"),
                graphs::f_naive(&rest).expect("small"),
            )
        } else {
            graphs::brick_type(&g)
        }
    };
    row.check(
        "(1) S^w",
        pair(&want.simple_center),
        pair(&actual(s.rooted_at(s.center))),
    );
    for (j, (&v, t)) in s.roots.iter().zip(&want.simple_roots).enumerate() {
        row.check(
            &format!("(2) S^v{}", j + 1),
            pair(t),
            pair(&actual(s.rooted_at(v))),
        );
    }
    row.check(
        "(3) C^w",
        pair(&want.complicated_center),
        pair(&actual(c.rooted_at(c.center))),
    );
    for (j, (&v, t)) in c.roots.iter().zip(&want.complicated_roots).enumerate() {
        row.check(
            &format!("(4) C^v{}", j + 1),
            pair(t),
            pair(&actual(c.rooted_at(v))),
        );
    }
    for (j, (&w, t)) in c
        .intermediates
        .iter()
        .zip(&want.complicated_intermediates)
        .enumerate()
    {
        row.check(
            &format!("(5) C^w{}", j + 1),
            pair(t),
            pair(&actual(c.rooted_at(w))),
        );
    }
    row.finish("lemma3", params)
}

fn example() -> Row {
    let pool = brick_pool();
    let (b53, h) = (pool[2].1.clone(), pool[0].1.clone());
    let params = "S(B53,B53,H)".to_string();
    let s = try_row!(
        graphs::building_simple(&[b53.clone(), b53, h]),
        "example",
        params
    );
    let mut row = RowBuilder::default();
    row.check("f", 41, graphs::f_naive(&s.graph).expect("small"));
    row.check("reduced f", 41, graphs::f_reduced(&s.graph));
    row.finish("example", params)
}

/// The full bracket when the diagram fits the limit; otherwise marks the
/// row partial.
fn bracket_or_partial(d: &Diagram, limit: usize, row: &mut RowBuilder) -> Option<LaurentPoly> {
    if d.crossing_count() <= limit {
        d.bracket_with_limit(limit).ok()
    } else {
        row.partial(format!(
            "{} crossings above --limit {limit}: extremes via Lando graphs",
            d.crossing_count()
        ));
        None
    }
}

/// Structure and extreme data shared by the D families.
struct Extremes {
    c: i64,
    sa: i64,
    sb: i64,
    m: i64,
    big_m: i64,
    a_m: i64,
    a_big_m: i64,
}

fn extreme_checks(d: &Diagram, want: &Extremes, limit: usize, row: &mut RowBuilder) {
    let st = d.extreme_states();
    let (a_m, a_big_m) = d.extreme_coeffs();
    row.check("c", want.c, st.crossings);
    row.check("|s_A|", want.sa, st.a_circles);
    row.check("|s_B|", want.sb, st.b_circles);
    row.check("m", want.m, st.min_degree);
    row.check("M", want.big_m, st.max_degree);
    row.check("a_m", want.a_m, &a_m);
    row.check("a_M", want.a_big_m, &a_big_m);
    row.check("components", 1, d.link_components());
    match bracket_or_partial(d, limit, row) {
        Some(b) => {
            row.check("bracket a_m", want.a_m, b.coeff(want.m));
            row.check("bracket a_M", want.a_big_m, b.coeff(want.big_m));
            row.check("span", want.big_m - want.m, b.span().unwrap_or_default());
        }
        // both extreme coefficients are nonzero, so the span is M - m
        None => row.check("span", want.big_m - want.m, st.max_degree - st.min_degree),
    }
}

fn thm2(r: i64, limit: usize, params: String) -> Row {
    let d = try_row!(families::d_family(r.max(0) as usize), "thm2", params);
    let mut row = RowBuilder::default();
    let want = Extremes {
        c: 12 * r,
        sa: 1,
        sb: 6 * r + 3,
        m: -24 * r - 4,
        big_m: 12 * r,
        a_m: 1,
        a_big_m: r + 1,
    };
    extreme_checks(&d, &want, limit, &mut row);
    let lando_b = chords::lando_graph(&chords::a_state_chords(&d.mirror()));
    row.check("B-side Lando vertices", 0, lando_b.vertex_count());
    row.finish("thm2", params)
}

fn thm3(r: i64, s: i64, limit: usize, params: String) -> Row {
    let d = try_row!(
        families::d_rs(r.max(0) as usize, s.max(0) as usize),
        "thm3",
        params
    );
    let mut row = RowBuilder::default();
    let want = Extremes {
        c: 12 * (r + s) + 2,
        sa: 6 * s + 3,
        sb: 6 * r + 3,
        m: -24 * r - 12 * s - 6,
        big_m: 12 * r + 24 * s + 6,
        a_m: s + 1,
        a_big_m: r + 1,
    };
    extreme_checks(&d, &want, limit, &mut row);
    row.finish("thm3", params)
}

fn thm4(r: i64, s: i64, a: i64, limit: usize, params: String) -> Row {
    let d = try_row!(
        families::d_rs_alpha(r.max(0) as usize, s.max(0) as usize, a.max(0) as usize),
        "thm4",
        params
    );
    let mut row = RowBuilder::default();
    let want = Extremes {
        c: 12 * (r + s) + 2 + a,
        sa: 6 * s + a + 2,
        sb: 6 * r + 4,
        m: -24 * r - 12 * s - a - 8,
        big_m: 12 * r + 24 * s + 3 * a + 4,
        a_m: -(s + 1),
        a_big_m: r + 1,
    };
    extreme_checks(&d, &want, limit, &mut row);
    row.finish("thm4", params)
}

/// Degrees and values of the second coefficients when the extreme ones
/// vanish: brute force when possible, the state classes otherwise.
fn second_checks(
    d: &Diagram,
    limit: usize,
    row: &mut RowBuilder,
    low: (i64, i64),
    high: (i64, i64),
    span: i64,
) {
    let st = d.extreme_states();
    let (a_m, a_big_m) = d.extreme_coeffs();
    row.check("a_m", 0, &a_m);
    row.check("a_M", 0, &a_big_m);
    match d.second_coeffs_with_budget(1 << limit.max(16)) {
        Ok((lo, hi)) => {
            row.check("a_m+4", low.0, lo);
            row.check("a_M-4", high.0, hi);
        }
        Err(e) => row.partial(e.to_string()),
    }
    match bracket_or_partial(d, limit, row) {
        Some(b) => {
            row.check("bottom degree", low.1, b.min_degree().unwrap_or_default());
            row.check("top degree", high.1, b.max_degree().unwrap_or_default());
            row.check("bottom coefficient", low.0, b.coeff(low.1));
            row.check("top coefficient", high.0, b.coeff(high.1));
            row.check("span", span, b.span().unwrap_or_default());
        }
        None => {
            row.check("bottom degree", low.1, st.min_degree + 4);
            row.check("top degree", high.1, st.max_degree - 4);
            row.check("span", span, st.max_degree - st.min_degree - 8);
        }
    }
}

fn lk_params(v: &[i64]) -> Option<[usize; 4]> {
    let u: Vec<usize> = v
        .iter()
        .map(|&x| usize::try_from(x).ok())
        .collect::<Option<_>>()?;
    u.try_into().ok()
}

fn thm5(v: &[i64], limit: usize, params: String) -> Row {
    let Some([r, s, a, b]) = lk_params(v) else {
        return skipped("thm5", params, "negative parameter");
    };
    let d = try_row!(families::l_family(r, s, a, b), "thm5", params);
    let (ri, si, ai, bi) = (v[0], v[1], v[2], v[3]);
    let mut row = RowBuilder::default();
    row.check("c", 2 * ri + 2 * si + ai + bi + 4, d.crossing_count());
    row.check("|s_A|", ri + si + ai, d.extreme_circles(Side::A));
    row.check("|s_B|", ri + si + bi, d.extreme_circles(Side::B));
    row.check(
        "components",
        ri + si + 2 - ai % 2 - bi % 2,
        d.link_components(),
    );
    let low = (
        sign_pow(ri + si + bi - 1) * ri,
        -4 * ri - 4 * si - ai - 3 * bi + 2,
    );
    let high = (
        sign_pow(ri + si + ai - 1) * si,
        4 * ri + 4 * si + 3 * ai + bi - 2,
    );
    second_checks(
        &d,
        limit,
        &mut row,
        low,
        high,
        8 * (ri + si) + 4 * (ai + bi) - 4,
    );
    row.finish("thm5", params)
}

fn thm6(v: &[i64], limit: usize, params: String) -> Row {
    let Some([r, s, a, b]) = lk_params(v) else {
        return skipped("thm6", params, "negative parameter");
    };
    let d = try_row!(families::k_family(r, s, a, b), "thm6", params);
    let (ri, si, ai, bi) = (v[0], v[1], v[2], v[3]);
    let mut row = RowBuilder::default();
    // c(K) = c(L') + 1 with c(L') = c(L) + r + s
    row.check("c", 3 * ri + 3 * si + ai + bi + 5, d.crossing_count());
    row.check("|s_A|", 2 * ri + si + ai, d.extreme_circles(Side::A));
    row.check("|s_B|", ri + 2 * si + bi + 1, d.extreme_circles(Side::B));
    row.check("components", 1, d.link_components());
    let low = (sign_pow(ri + bi) * ri, -5 * ri - 7 * si - ai - 3 * bi - 5);
    let high = (
        sign_pow(si + ai - 1) * si,
        7 * ri + 5 * si + 3 * ai + bi + 3,
    );
    second_checks(
        &d,
        limit,
        &mut row,
        low,
        high,
        12 * (ri + si) + 4 * (ai + bi) + 8,
    );
    row.finish("thm6", params)
}

fn pretzel(a: i64, bs: &[i64], limit: usize) -> Row {
    let entries: Vec<i64> = std::iter::once(a).chain(bs.iter().copied()).collect();
    let params = format!(
        "P({})",
        entries
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let d = try_row!(families::pretzel(&entries), "pretzel", params);
    let alpha = bs.iter().filter(|&&b| b == -2).count() as i64;
    let st = d.extreme_states();
    let mut row = RowBuilder::default();
    let (_, lando_top) = d.extreme_coeffs();
    let second = d.second_coeffs_with_budget(1 << limit.max(16));
    let (top, next) = match bracket_or_partial(&d, limit, &mut row) {
        Some(b) => {
            if let Ok((_, hi)) = &second {
                row.check("state-class a_M-4", b.coeff(st.max_degree - 4), hi);
            }
            (b.coeff(st.max_degree), b.coeff(st.max_degree - 4))
        }
        None => match second {
            Ok((_, hi)) => (lando_top.clone(), hi),
            Err(e) => return skipped("pretzel", params, e.to_string()),
        },
    };
    row.check("a_M", 0, &top);
    row.check("Lando a_M", 0, &lando_top);
    row.check("|a_M-4|", alpha, next.abs());
    row.check("a_M-4", sign_pow(st.a_circles as i64 - 1) * alpha, &next);
    row.finish("pretzel", params)
}

fn rng_for(seed: u64, i: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i))
}

fn engine(seed: u64, i: u64, cmax: i64, limit: usize) -> Row {
    let mut rng = rng_for(seed, i);
    let c = rng.gen_range(1..=cmax.max(1) as usize);
    let params = format!("i={i} c={c}");
    if c > limit {
        return skipped(
            "engine",
            params,
            format!("{c} crossings above --limit {limit}"),
        );
    }
    let d = families::random_planar(&mut rng, c).to_diagram();
    let b = try_row!(d.bracket_with_limit(limit), "engine", params);
    let st = d.extreme_states();
    let mut row = RowBuilder::default();
    row.check("degrees mod 4", "yes", yes(b.degrees_congruent(4)));
    let inside = b.min_degree().is_some_and(|lo| lo >= st.min_degree)
        && b.max_degree().is_some_and(|hi| hi <= st.max_degree);
    row.check("within [m,M]", "yes", yes(inside));
    let mirror = try_row!(d.mirror().bracket_with_limit(limit), "engine", params);
    row.check("mirror", "yes", yes(mirror == b.invert_variable()));
    let mut flips_ok = true;
    for _ in 0..8 {
        let s = State::from_mask(rng.gen_range(0..1u64 << c), c);
        let base = d.components(&s).expect("state fits");
        for x in 0..c {
            let mut t = s.clone();
            t.flip(x);
            flips_ok &= d.components(&t).expect("state fits").abs_diff(base) == 1;
        }
    }
    row.check("one-flip", "yes", yes(flips_ok));
    let (a_m, a_big_m) = d.extreme_coeffs();
    row.check("a_m", b.coeff(st.min_degree), a_m);
    row.check("a_M", b.coeff(st.max_degree), a_big_m);
    let (lo, hi) = try_row!(d.second_coeffs_with_budget(1 << limit), "engine", params);
    row.check("a_m+4", b.coeff(st.min_degree + 4), lo);
    row.check("a_M-4", b.coeff(st.max_degree - 4), hi);
    let f = graphs::f_naive(&chords::lando_graph(&chords::a_state_chords(&d)))
        .expect("at most c vertices");
    row.check(
        "a_M = (-1)^(|s_A|-1) f",
        b.coeff(st.max_degree),
        f * sign_pow(st.a_circles as i64 - 1),
    );
    row.finish("engine", params)
}

fn chord_oracle(seed: u64, i: u64, kmax: i64) -> Row {
    let mut rng = rng_for(seed, i);
    let k = rng.gen_range(0..=kmax.clamp(0, 16) as usize);
    let circles = rng.gen_range(1..=3);
    let cd = chords::random_chord_diagram(&mut rng, k, circles);
    let d = chords::to_diagram(&cd);
    let mismatches = (0..1u64 << k)
        .filter(|&mask| {
            let subset: Vec<usize> = (0..k).filter(|j| mask >> j & 1 == 1).collect();
            chords::resmooth_count(&cd, &subset)
                != d.components(&State::from_mask(mask, k))
                    .expect("state fits")
        })
        .count();
    let mut row = RowBuilder::default();
    row.check("mismatches", 0, mismatches);
    row.finish("chords", format!("i={i} k={k} circles={circles}"))
}

fn roundtrip(seed: u64, i: u64, kmax: i64) -> Row {
    let mut rng = rng_for(seed, i);
    let k = rng.gen_range(0..=kmax.max(0) as usize);
    let circles = rng.gen_range(1..=3);
    let cd = chords::random_chord_diagram(&mut rng, k, circles);
    let back = chords::a_state_chords(&chords::to_diagram(&cd));
    let mut row = RowBuilder::default();
    row.check("isomorphic", "yes", yes(chords::is_isomorphic(&back, &cd)));
    row.finish("roundtrip", format!("i={i} k={k} circles={circles}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(id: &str, grid: &[&str]) -> Vec<Row> {
        let grid: Vec<String> = grid.iter().map(|s| s.to_string()).collect();
        verify_rows(id, &grid, &RunConfig::default()).unwrap()
    }

    #[test]
    fn grid_syntax() {
        let g = parse_grid(&["r=1..3".into(), "k<=2".into(), "alpha=3,5".into()]).unwrap();
        assert!(matches!(&g["r"], GridValues::Values(v) if v == &vec![1, 2, 3]));
        assert!(matches!(&g["k"], GridValues::UpTo(2)));
        assert!(matches!(&g["a"], GridValues::Values(v) if v == &vec![3, 5]));
        assert!(parse_grid(&["r".into()]).is_err());
        assert!(verify_rows("thm2", &["q=1".into()], &RunConfig::default()).is_err());
        assert!(verify_rows("nope", &[], &RunConfig::default()).is_err());
    }

    #[test]
    fn thm2_rows_pass() {
        let r = rows("thm2", &["r=1..2"]);
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|r| r.status == Status::Pass));
        let r = verify_rows(
            "thm2",
            &["r=2".into()],
            &RunConfig {
                limit: 20,
                ..RunConfig::default()
            },
        )
        .unwrap();
        assert_eq!(r[0].status, Status::Partial);
    }

    #[test]
    fn lemma3_and_pretzel_rows_pass() {
        let r = rows("lemma3", &["k<=2"]);
        assert_eq!(r.len(), 3 + 9);
        assert!(r.iter().all(|r| r.status == Status::Pass));
        let r = rows("pretzel", &["s<=3"]);
        assert_eq!(r.len(), 2 * (3 + 7));
        assert!(
            r.iter().all(|r| r.status == Status::Pass),
            "{:?}",
            r.iter().find(|r| r.status != Status::Pass)
        );
    }

    #[test]
    fn out_of_range_rows_are_skipped() {
        let r = rows("thm4", &["a=4"]);
        assert_eq!(r[0].status, Status::Skip);
    }

    #[test]
    fn text_report_is_line_oriented() {
        let r = rows("thm1", &["r=1"]);
        let text = render("thm1", &r, Format::Text);
        assert_eq!(text, "pass    thm1 r=1 | f(G_r)=2 f(-G_r)=-2 naive f(G_r)=2 naive f(-G_r)=-2\nthm1: 1 rows, 1 pass, 0 partial, 0 fail, 0 skip\n");
    }
}
