//! Diagram families with closed-form bracket data.

pub mod planar;

use num_bigint::BigInt;
use thiserror::Error;

use crate::chords::{self, ChordDiagram};
use crate::diagram::Diagram;
use crate::graphs::{self, Graph, GraphError};
use crate::Side;

pub use planar::{pretzel_planar, random_planar, PlanarDiagram};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("bad parameters: {0}")]
    Parameters(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Pretzel diagram `P(e_1, ..., e_n)`.
pub fn pretzel(entries: &[i64]) -> Result<Diagram, FamilyError> {
    Ok(pretzel_planar(entries)?.to_diagram())
}

/// Word of a one-circle chord diagram whose interlacement graph is `G_r`
/// with its vertex labels: the hexagon word, extended by splicing one
/// hexagon word per attachment.
pub fn family_g_word(r: usize) -> Result<Vec<usize>, FamilyError> {
    if r == 0 {
        return Err(FamilyError::Parameters("r must be positive".into()));
    }
    let mut word = HEXAGON_WORD.to_vec();
    let mut root = 0;
    for step in 1..r {
        let shift = 6 * step;
        let hex: Vec<usize> = HEXAGON_WORD.iter().map(|v| v + shift).collect();
        word = star_join_words(&word, root, &hex, shift);
        root = shift + 1;
    }
    Ok(word)
}

/// A one-circle realization of the hexagon `0-1-2-3-4-5-0`.
pub const HEXAGON_WORD: [usize; 12] = [0, 5, 1, 0, 2, 1, 3, 2, 4, 3, 5, 4];

/// Word realizing the star join of the graphs realized by `w1` and `w2`
/// along `v1`–`v2`: `w1` rotated to end in `v1`, `w2` rotated to start in
/// `v2`, concatenated, and the two junction letters swapped so that only
/// `v1` and `v2` start to alternate.
pub fn star_join_words(w1: &[usize], v1: usize, w2: &[usize], v2: usize) -> Vec<usize> {
    let i = w1.iter().position(|&s| s == v1).expect("v1 occurs in w1");
    let j = w2.iter().position(|&s| s == v2).expect("v2 occurs in w2");
    let mut out: Vec<usize> = w1[i + 1..].iter().chain(&w1[..=i]).copied().collect();
    let junction = out.len();
    out.extend(w2[j..].iter().chain(&w2[..j]));
    out.swap(junction - 1, junction);
    out
}

/// Planar diagram whose all-A state is one circle carrying the chords of a
/// realization of `g`, so its Lando graph is `g`.
pub fn diagram_from_graph(g: &Graph) -> Result<Diagram, FamilyError> {
    if g.vertex_count() == 0 {
        return Ok(Diagram::unlink(1).expect("one circle"));
    }
    let cd = graphs::realize_as_chord_diagram(g, 1)?.ok_or_else(|| {
        FamilyError::Construction("graph has no chord realization within the search bound".into())
    })?;
    match g.two_coloring() {
        Some(sides) => Ok(planar_from_chords(&cd, &sides)?.to_diagram()),
        None => Ok(chords::to_diagram(&cd)),
    }
}

fn planar_from_chords(cd: &ChordDiagram, sides: &[bool]) -> Result<PlanarDiagram, FamilyError> {
    let circle = &cd.circles()[0];
    let mut word = vec![0; circle.len()];
    for (v, ch) in cd.chords().iter().enumerate() {
        for e in ch.ends {
            let at = circle
                .iter()
                .position(|&x| x == e)
                .expect("endpoint on the circle");
            word[at] = v;
        }
    }
    PlanarDiagram::from_chord_word(&word, sides)
}

/// `D_r'`: the one-circle planar diagram of `G_r`.
pub fn d_prime(r: usize) -> Result<PlanarDiagram, FamilyError> {
    let word = family_g_word(r)?;
    let g = graphs::family_g(r)?.graph;
    let sides = g.two_coloring().expect("hexagon chains are bipartite");
    PlanarDiagram::from_chord_word(&word, &sides)
}

/// `D_r`: every crossing of `D_r'` doubled into a two-crossing twist that
/// the A-smoothing runs along. The A-state stays one circle whose chords
/// come in parallel pairs, so its Lando graph is a duplication of `G_r`;
/// each pair adds one small B-circle.
pub fn d_family_planar(r: usize) -> Result<PlanarDiagram, FamilyError> {
    if r == 0 {
        return Err(FamilyError::Parameters("r must be positive".into()));
    }
    let mut p = d_prime(r)?;
    for x in 0..p.crossing_count() {
        let q = (0..4u8)
            .find(|&q| !planar::a_preserves(&p.crossing(x), q))
            .expect("A cuts two corners");
        p.twist(x, q, 2);
    }
    Ok(p)
}

pub fn d_family(r: usize) -> Result<Diagram, FamilyError> {
    Ok(d_family_planar(r)?.to_diagram())
}

fn extreme_counts(p: &PlanarDiagram) -> (usize, usize, usize) {
    let d = p.to_diagram();
    (
        d.crossing_count(),
        d.extreme_circles(Side::A),
        d.extreme_circles(Side::B),
    )
}

/// `D_{rs}` with the two clasp crossings.
fn d_rs_parts(r: usize, s: usize) -> Result<(PlanarDiagram, (usize, usize)), FamilyError> {
    if r == 0 || s == 0 {
        return Err(FamilyError::Parameters("r and s must be positive".into()));
    }
    let left = d_family_planar(r)?;
    let right = d_family_planar(s)?.mirror();
    let sum = left.connected_sum(0, &right, 0);
    let want = (12 * (r + s) + 2, 6 * s + 3, 6 * r + 3);
    let split = 4 * left.crossing_count();
    let (faces, _) = sum.faces();
    for d1 in 0..split {
        for d2 in split..faces.len() {
            if faces[d1] != faces[d2] {
                continue;
            }
            let mut p = sum.clone();
            let Ok(clasp) = p.insert_clasp(d1, d2, [true, true]) else {
                continue;
            };
            if extreme_counts(&p) == want
                && p.to_diagram().link_components() == 1
                && p.to_diagram().extreme_coeffs() == (BigInt::from(s + 1), BigInt::from(r + 1))
            {
                return Ok((p, clasp));
            }
        }
    }
    Err(FamilyError::Construction(
        "no clasp keeps both extreme states".into(),
    ))
}

/// `D_{rs}`: `D_r` summed with the mirror of `D_s`, then clasped across a
/// common face by two crossings that the A-smoothing runs along. The clasp
/// must join edges on different A-circles and different B-circles, with no
/// chord between those circles, so that both extreme states keep their
/// circle counts and Lando graphs. The first pair of edges in dart order
/// passing these checks is used.
pub fn d_rs(r: usize, s: usize) -> Result<Diagram, FamilyError> {
    Ok(d_rs_parts(r, s)?.0.to_diagram())
}

/// `D_{rs}^α`: a crossing of `D_{rs}` becomes a two-crossing twist, and
/// one crossing of that twist becomes a twist of `α` crossings. Placements
/// are tried at the clasp first, then at the other crossings; the first one
/// that is a knot with `α - 1` more A-circles, one more B-circle and the
/// expected extreme coefficients is used.
pub fn d_rs_alpha(r: usize, s: usize, alpha: usize) -> Result<Diagram, FamilyError> {
    if alpha < 3 || alpha.is_multiple_of(2) {
        return Err(FamilyError::Parameters(
            "α must be odd and at least 3".into(),
        ));
    }
    let (base, (x, y)) = d_rs_parts(r, s)?;
    let want = (12 * (r + s) + 2 + alpha, 6 * s + alpha + 2, 6 * r + 4);
    let coeffs = (-BigInt::from(s + 1), BigInt::from(r + 1));
    let accept = |p: &PlanarDiagram| {
        extreme_counts(p) == want && {
            let d = p.to_diagram();
            d.link_components() == 1 && d.extreme_coeffs() == coeffs
        }
    };
    // The clasp is tried first, then every other crossing.
    let order = [x, y]
        .into_iter()
        .chain((0..base.crossing_count()).filter(|&c| c != x && c != y));
    for c in order {
        for q in 0..4u8 {
            for pick in 0..2 {
                for keep in 0..4u8 {
                    let mut p = base.clone();
                    let z = p.twist(c, q, 2)[pick];
                    p.twist(z, keep, alpha);
                    if accept(&p) {
                        return Ok(p.to_diagram());
                    }
                }
            }
        }
    }
    Err(FamilyError::Construction(
        "no twist placement matches the extreme states".into(),
    ))
}

fn check_lk(r: usize, s: usize, alpha: usize, beta: usize) -> Result<(), FamilyError> {
    if r < 2 || s < 2 || alpha < 2 || beta < 2 {
        return Err(FamilyError::Parameters(
            "r, s, α and β must be at least 2".into(),
        ));
    }
    Ok(())
}

/// First crossing of every pretzel column.
fn column_tops(entries: &[i64]) -> Vec<usize> {
    entries
        .iter()
        .scan(0, |at, e| {
            let top = *at;
            *at += e.unsigned_abs() as usize;
            Some(top)
        })
        .collect()
}

/// Adds a circle around the pretzel columns `i..=j`, crossing both rails
/// just outside them. `keep0` selects the A-pairing of the four new
/// crossings in path order.
fn encircle(
    p: &mut PlanarDiagram,
    entries: &[i64],
    i: usize,
    j: usize,
    keep0: [bool; 4],
) -> Result<Vec<usize>, FamilyError> {
    let n = entries.len();
    let tops = column_tops(entries);
    let bottom = |k: usize| tops[k] + entries[k].unsigned_abs() as usize - 1;
    let (prev, next) = ((i + n - 1) % n, (j + 1) % n);
    p.add_circle(&[
        (4 * tops[prev], keep0[0]),
        (4 * tops[next] + 1, keep0[1]),
        (4 * bottom(next) + 2, keep0[2]),
        (4 * bottom(prev) + 3, keep0[3]),
    ])
}

fn l_entries(r: usize, s: usize, alpha: usize, beta: usize) -> Vec<i64> {
    let mut e = vec![2];
    e.extend(std::iter::repeat_n(-2, s - 2));
    e.push(-(alpha as i64));
    e.extend(std::iter::repeat_n(2, r - 2));
    e.push(-2);
    e.push(beta as i64);
    e
}

/// `L(r, s; α, β)` together with the first crossing of each of its two
/// circles.
fn l_parts(
    r: usize,
    s: usize,
    alpha: usize,
    beta: usize,
) -> Result<(PlanarDiagram, [usize; 2]), FamilyError> {
    check_lk(r, s, alpha, beta)?;
    let e = l_entries(r, s, alpha, beta);
    let mut p = pretzel_planar(&e)?;
    let first = encircle(&mut p, &e, 0, s - 2, [true, false, true, false])?;
    let second = encircle(&mut p, &e, s, s + r - 2, [false, true, false, true])?;
    Ok((p, [first[0], second[0]]))
}

/// `L(r, s; α, β)`: the pretzel `P(2, -2^(s-2), -α, 2^(r-2), -2, β)` with
/// two extra circles. One surrounds the columns `2, -2^(s-2)`, the other
/// the columns `2^(r-2), -2`; each crosses the two rails on both sides of
/// its block. The A-state Lando graph is two parallel chords from the
/// first block and the B-state one comes from the second, so `a_M = a_m = 0`
/// while `a_(M-4)` counts `s` and `a_(m+4)` counts `r`.
pub fn l_family(r: usize, s: usize, alpha: usize, beta: usize) -> Result<Diagram, FamilyError> {
    Ok(l_parts(r, s, alpha, beta)?.0.to_diagram())
}

/// `K(r, s; α, β)`: `L(r, s; α, β)` with one crossing added at the top of
/// most columns and at each circle, each addition joining two components.
/// On the columns `2, -2^(s-2), -α` and the first circle the new crossing
/// adds a B-circle; on `2^(r-2)`, `β` and the second circle it adds an
/// A-circle; the column `-2` after the positive block is left alone. So
/// `c` grows by `r + s + 1`, `|s_A|` by `r` and `|s_B|` by `s + 1`, and the
/// Lando graphs of both extreme states keep their two parallel chords.
pub fn k_family(r: usize, s: usize, alpha: usize, beta: usize) -> Result<Diagram, FamilyError> {
    let (mut p, circles) = l_parts(r, s, alpha, beta)?;
    let tops = column_tops(&l_entries(r, s, alpha, beta));
    let mut sites: Vec<(usize, Side)> = tops[..s].iter().map(|&x| (x, Side::B)).collect();
    sites.extend(tops[s..s + r - 2].iter().map(|&x| (x, Side::A)));
    sites.push((tops[s + r - 1], Side::A));
    sites.push((circles[0], Side::B));
    sites.push((circles[1], Side::A));
    for (x, side) in sites {
        // twisting at a corner A keeps adds an A-circle
        let q = (0..4u8)
            .find(|&q| planar::a_preserves(&p.crossing(x), q) == (side == Side::A))
            .expect("A keeps two corners");
        p.twist(x, q, 2);
    }
    Ok(p.to_diagram())
}
