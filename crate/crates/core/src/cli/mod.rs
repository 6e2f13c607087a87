//! Command-line front end: `bracket`, `analyze`, `graph-f`, `generate`,
//! `verify` and `realize`.
//!
//! Exit codes are 0 on success, 1 when a verification row fails (or a
//! realization is not found) and 2 on usage, input or parse errors.

mod verify;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use crate::chords::{self, ChordError};
use crate::diagram::{Diagram, DiagramError, DEFAULT_LIMIT, MAX_LIMIT};
use crate::families::{self, FamilyError};
use crate::graphs::{self, Graph, GraphError};
use crate::LaurentPoly;

pub use verify::{verify_rows, Check, Row, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Chord(#[from] ChordError),
}

#[derive(Parser, Debug)]
#[command(
    name = "kbracket",
    version,
    about = "Kauffman bracket state sums and extreme Jones coefficients"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// Largest crossing count whose states are enumerated one by one (at most 30).
    #[arg(long, global = true, default_value_t = DEFAULT_LIMIT, value_parser = parse_limit)]
    pub limit: usize,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, value_parser = parse_workers)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for the random corpora of `verify engine|chords|roundtrip`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            limit: DEFAULT_LIMIT,
            workers: None,
            format: Format::Text,
            seed: 0,
            output: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn parse_limit(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n > MAX_LIMIT {
        return Err(format!("the limit is at most {MAX_LIMIT}"));
    }
    Ok(n)
}

fn parse_workers(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("at least one worker is needed".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full bracket of a diagram file with its span and extreme state degrees.
    Bracket { file: PathBuf },
    /// Extreme states, Lando graphs and extreme coefficients of a diagram file.
    Analyze { file: PathBuf },
    /// `f(G)` of a graph given as an edge list or JSON.
    #[command(name = "graph-f")]
    GraphF { file: PathBuf },
    /// Writes a member of a graph or diagram family.
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
    /// Recomputes the closed forms over a parameter grid, e.g. `verify thm2 r=1..2`.
    Verify {
        id: String,
        #[arg(allow_hyphen_values = true)]
        grid: Vec<String>,
    },
    /// Searches a chord diagram whose interlacement graph is the given graph.
    Realize {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        circles: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Generate {
    /// G r | F r | hexagon | path n | cycle n | complete n
    Graph { family: String, params: Vec<usize> },
    /// D r | Drs r s | Drsa r s α | L r s α β | K r s α β | pretzel e.. | trefoil | figure-eight
    Diagram {
        family: String,
        #[arg(allow_negative_numbers = true)]
        params: Vec<i64>,
    },
}

/// Report text plus exit code.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.config.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::Usage(format!("cannot start {n} workers: {e}"))),
        },
        None => execute(&cli),
    };
    match result.and_then(|out| emit(&cli.config, &out.text).map(|_| out.code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(config: &RunConfig, text: &str) -> Result<(), CliError> {
    match &config.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_diagram(path: &Path) -> Result<Diagram, CliError> {
    Ok(Diagram::from_json_str(&read(path)?)?)
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    Ok(Graph::parse(&read(path)?)?)
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let config = &cli.config;
    match &cli.command {
        Command::Bracket { file } => cmd_bracket(&read_diagram(file)?, config).map(Outcome::ok),
        Command::Analyze { file } => cmd_analyze(&read_diagram(file)?, config).map(Outcome::ok),
        Command::GraphF { file } => cmd_graph_f(&read_graph(file)?, config),
        Command::Generate { what } => cmd_generate(what, config).map(Outcome::ok),
        Command::Verify { id, grid } => {
            let rows = verify_rows(id, grid, config)?;
            let code = i32::from(rows.iter().any(|r| r.status == Status::Fail));
            Ok(Outcome {
                text: verify::render(id, &rows, config.format),
                code,
            })
        }
        Command::Realize { file, circles } => cmd_realize(&read_graph(file)?, *circles),
    }
}

fn json_line(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn terms_json(p: &LaurentPoly) -> Value {
    Value::Array(
        p.to_pairs()
            .into_iter()
            .map(|(d, c)| json!([d, c.to_string()]))
            .collect(),
    )
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn cmd_bracket(d: &Diagram, config: &RunConfig) -> Result<String, CliError> {
    let b = d.bracket_with_limit(config.limit)?;
    let (lo, hi, span) = b
        .span_min_max()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let (m, big_m) = d.extreme_degrees();
    Ok(match config.format {
        Format::Text => format!(
            "{b}, span={span}, m={m}, M={big_m}\nattained: m={}, M={}\n",
            yes(lo == m),
            yes(hi == big_m)
        ),
        Format::Json => json_line(json!({
            "bracket": b.to_string(),
            "terms": terms_json(&b),
            "span": span,
            "min_degree": lo,
            "max_degree": hi,
            "m": m,
            "M": big_m,
            "m_attained": lo == m,
            "M_attained": hi == big_m,
        })),
    })
}

fn edge_list(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
    format!("{} vertices [{}]", g.vertex_count(), edges.join(" "))
}

fn signed(k: usize, f: &BigInt) -> BigInt {
    if k % 2 == 1 {
        f.clone()
    } else {
        -f
    }
}

pub fn cmd_analyze(d: &Diagram, config: &RunConfig) -> Result<String, CliError> {
    let st = d.extreme_states();
    let (a_m, a_big_m) = d.extreme_coeffs();
    let budget = 1u64 << config.limit;
    let second = d.second_coeffs_with_budget(budget).ok();
    let lando_a = chords::lando_graph(&chords::a_state_chords(d));
    let lando_b = chords::lando_graph(&chords::a_state_chords(&d.mirror()));
    let (f_a, f_b) = (graphs::f_reduced(&lando_a), graphs::f_reduced(&lando_b));
    // a_M = (-1)^{|s_A|-1} f(G_D), checked against the state classes when they fit the budget
    let by_states = d.extreme_coeffs_by_states().ok();
    let identity = by_states.as_ref().map(|(lo, hi)| {
        (
            *hi == signed(st.a_circles, &f_a),
            *lo == signed(st.b_circles, &f_b),
        )
    });
    let brute = (d.crossing_count() <= config.limit)
        .then(|| d.bracket_with_limit(config.limit))
        .transpose()?;
    let mut out = String::new();
    match config.format {
        Format::Text => {
            let opt = |v: Option<&BigInt>| v.map_or("unavailable".to_string(), |x| x.to_string());
            let _ = writeln!(out, "crossings: {}", st.crossings);
            let _ = writeln!(out, "|s_A|: {}", st.a_circles);
            let _ = writeln!(out, "|s_B|: {}", st.b_circles);
            let _ = writeln!(out, "m: {}", st.min_degree);
            let _ = writeln!(out, "M: {}", st.max_degree);
            let _ = writeln!(out, "a_m: {a_m}");
            let _ = writeln!(out, "a_M: {a_big_m}");
            let _ = writeln!(out, "a_m+4: {}", opt(second.as_ref().map(|s| &s.0)));
            let _ = writeln!(out, "a_M-4: {}", opt(second.as_ref().map(|s| &s.1)));
            let _ = writeln!(out, "lando A: {}", edge_list(&lando_a));
            let _ = writeln!(out, "f(lando A): {f_a}");
            let _ = writeln!(out, "lando B: {}", edge_list(&lando_b));
            let _ = writeln!(out, "f(lando B): {f_b}");
            match identity {
                Some((top, low)) => {
                    let word = |b: bool| if b { "holds" } else { "FAILS" };
                    let _ = writeln!(
                        out,
                        "identity a_M = (-1)^(|s_A|-1) f(lando A): {}",
                        word(top)
                    );
                    let _ = writeln!(
                        out,
                        "identity a_m = (-1)^(|s_B|-1) f(lando B): {}",
                        word(low)
                    );
                }
                None => {
                    let _ = writeln!(out, "identity: unchecked, state classes exceed the budget");
                }
            }
            if let Some(b) = &brute {
                let agree = b.coeff(st.max_degree) == a_big_m && b.coeff(st.min_degree) == a_m;
                let _ = writeln!(out, "full bracket agrees: {}", yes(agree));
            }
        }
        Format::Json => {
            let opt = |v: Option<&BigInt>| v.map_or(Value::Null, |x| Value::String(x.to_string()));
            let graph = |g: &Graph| json!({ "vertices": g.vertex_count(), "edges": g.edges() });
            out = json_line(json!({
                "crossings": st.crossings,
                "s_A": st.a_circles,
                "s_B": st.b_circles,
                "m": st.min_degree,
                "M": st.max_degree,
                "a_m": a_m.to_string(),
                "a_M": a_big_m.to_string(),
                "a_m+4": opt(second.as_ref().map(|s| &s.0)),
                "a_M-4": opt(second.as_ref().map(|s| &s.1)),
                "lando_A": graph(&lando_a),
                "f_lando_A": f_a.to_string(),
                "lando_B": graph(&lando_b),
                "f_lando_B": f_b.to_string(),
                "identity_top": identity.map(|i| i.0),
                "identity_bottom": identity.map(|i| i.1),
                "bracket": brute.as_ref().map(|b| b.to_string()),
            }));
        }
    }
    Ok(out)
}

fn cmd_graph_f(g: &Graph, config: &RunConfig) -> Result<Outcome, CliError> {
    let f = graphs::f_reduced(g);
    let naive = (g.vertex_count() <= 20)
        .then(|| graphs::f_naive(g))
        .transpose()?;
    let agree = naive.as_ref().is_none_or(|n| *n == f);
    let text = match config.format {
        Format::Text => match &naive {
            Some(n) if *n != f => format!("{f}\nnaive count disagrees: {n}\n"),
            _ => format!("{f}\n"),
        },
        Format::Json => json_line(json!({
            "f": f.to_string(),
            "vertices": g.vertex_count(),
            "naive": naive.map(|n| n.to_string()),
        })),
    };
    Ok(Outcome {
        text,
        code: if agree { 0 } else { 1 },
    })
}

fn want<const N: usize, T: Copy>(family: &str, params: &[T]) -> Result<[T; N], CliError> {
    params.try_into().map_err(|_| {
        CliError::Usage(format!(
            "family {family} takes {N} parameter(s), got {}",
            params.len()
        ))
    })
}

fn unsigned(family: &str, params: &[i64]) -> Result<Vec<usize>, CliError> {
    params
        .iter()
        .map(|&p| {
            usize::try_from(p).map_err(|_| {
                CliError::Usage(format!("family {family} takes non-negative parameters"))
            })
        })
        .collect()
}

pub fn generate_diagram(family: &str, params: &[i64]) -> Result<Diagram, CliError> {
    let u = || unsigned(family, params);
    Ok(match family {
        "D" => {
            let [r] = want(family, &u()?)?;
            families::d_family(r)?
        }
        "Drs" => {
            let [r, s] = want(family, &u()?)?;
            families::d_rs(r, s)?
        }
        "Drsa" => {
            let [r, s, a] = want(family, &u()?)?;
            families::d_rs_alpha(r, s, a)?
        }
        "L" => {
            let [r, s, a, b] = want(family, &u()?)?;
            families::l_family(r, s, a, b)?
        }
        "K" => {
            let [r, s, a, b] = want(family, &u()?)?;
            families::k_family(r, s, a, b)?
        }
        "pretzel" => families::pretzel(params)?,
        "trefoil" => crate::diagram::samples::trefoil(),
        "figure-eight" => crate::diagram::samples::figure_eight(),
        "unknot" => crate::diagram::samples::unknot(),
        _ => {
            return Err(CliError::Usage(format!(
                "unknown diagram family `{family}`"
            )))
        }
    })
}

pub fn generate_graph(family: &str, params: &[usize]) -> Result<(Graph, Option<usize>), CliError> {
    let rooted = |g: graphs::RootedGraph| (g.graph, Some(g.root));
    Ok(match family {
        "G" => rooted(graphs::family_g(want::<1, _>(family, params)?[0])?),
        "F" => rooted(graphs::family_f(want::<1, _>(family, params)?[0])?),
        "hexagon" => {
            want::<0, _>(family, params)?;
            rooted(graphs::hexagon())
        }
        "path" => (graphs::path(want::<1, _>(family, params)?[0])?, None),
        "cycle" => (graphs::cycle(want::<1, _>(family, params)?[0])?, None),
        "complete" => (Graph::complete(want::<1, _>(family, params)?[0]), None),
        _ => return Err(CliError::Usage(format!("unknown graph family `{family}`"))),
    })
}

fn cmd_generate(what: &Generate, config: &RunConfig) -> Result<String, CliError> {
    match what {
        Generate::Graph { family, params } => {
            let (g, root) = generate_graph(family, params)?;
            Ok(match config.format {
                Format::Text => {
                    let head = root.map(|r| format!("# root: {r}\n")).unwrap_or_default();
                    format!("{head}{g}")
                }
                Format::Json => {
                    let mut s = g.to_json_string();
                    s.push('\n');
                    s
                }
            })
        }
        Generate::Diagram { family, params } => {
            let mut s = generate_diagram(family, params)?.to_json_string();
            s.push('\n');
            Ok(s)
        }
    }
}

fn cmd_realize(g: &Graph, circles: usize) -> Result<Outcome, CliError> {
    match graphs::realize_as_chord_diagram(g, circles)? {
        Some(cd) => {
            let mut text = cd.to_json_string();
            text.push('\n');
            Ok(Outcome::ok(text))
        }
        None => Ok(Outcome {
            text: "no chord realization within the search bound\n".into(),
            code: 1,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn trefoil_bracket_line() {
        let out = cmd_bracket(&crate::diagram::samples::trefoil(), &cfg()).unwrap();
        assert_eq!(
            out.lines().next().unwrap(),
            "-1*A^5 + -1*A^-3 + 1*A^-7, span=12, m=-7, M=5"
        );
        let out = cmd_bracket(&crate::diagram::samples::unknot(), &cfg()).unwrap();
        assert!(out.starts_with("1, span=0"));
    }

    #[test]
    fn limit_error_names_the_flag() {
        let d = families::pretzel(&[25]).unwrap();
        let err = cmd_bracket(&d, &cfg()).unwrap_err().to_string();
        assert!(err.contains("--limit"), "{err}");
    }

    #[test]
    fn analyze_reports_the_identity() {
        let out = cmd_analyze(&crate::diagram::samples::trefoil(), &cfg()).unwrap();
        assert!(out.contains("a_M: -1\n"));
        assert!(out.contains("lando A: 0 vertices []\n"));
        assert!(out.contains("f(lando A): 1\n"));
        assert!(out.contains("identity a_M = (-1)^(|s_A|-1) f(lando A): holds"));
        let out = cmd_analyze(&families::pretzel(&[2, -2, -2]).unwrap(), &cfg()).unwrap();
        assert!(out.contains("a_M: 0\n") && out.contains("lando A: 2 vertices []\n"));
        let out = cmd_analyze(&families::d_family(1).unwrap(), &cfg()).unwrap();
        assert!(out.contains("a_M: 2\n") && out.contains("f(lando A): 2\n"));
    }

    #[test]
    fn generated_graphs_have_the_expected_f() {
        let (g, _) = generate_graph("G", &[3]).unwrap();
        assert_eq!(graphs::f_reduced(&g), BigInt::from(4));
        let (g, _) = generate_graph("F", &[5]).unwrap();
        assert_eq!(graphs::f_reduced(&g), BigInt::from(13));
        assert!(generate_graph("G", &[]).is_err() && generate_graph("Q", &[1]).is_err());
    }

    #[test]
    fn k_diagram_has_one_more_crossing_than_l_prime() {
        // c(L') = c(L) + r + s and c(K) = c(L') + 1
        let k = generate_diagram("K", &[2, 2, 2, 2]).unwrap();
        let l = generate_diagram("L", &[2, 2, 2, 2]).unwrap();
        assert_eq!(k.crossing_count(), l.crossing_count() + 2 + 2 + 1);
        assert_eq!(k.crossing_count(), 21);
        assert!(generate_diagram("K", &[2, 2, -2, 2]).is_err());
    }
}
