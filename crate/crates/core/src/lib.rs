//! Exact Kauffman bracket state sums and the graph theory of extreme
//! Jones polynomial coefficients.
//!
//! The crate is organised bottom-up:
//!
//! - [`laurent`]: integer Laurent polynomials in `A`.
//! - [`diagram`]: embedding-free link diagrams and the state-sum engine.
//! - [`chords`]: chord diagrams of smoothed diagrams, Lando and
//!   interlacement graphs, and a cyclic-word surgery oracle.
//! - [`graphs`]: simple graphs, the alternating independent-set count
//!   `f(G)`, bricks and buildings.
//! - [`families`]: generators for the graph and diagram families whose
//!   bracket data is known in closed form.
//! - [`cli`]: the command-line front end.

pub mod chords;
pub mod cli;
pub mod diagram;
pub mod families;
pub mod graphs;
pub mod laurent;
mod union_find;

pub use chords::{ChordDiagram, Twist};
pub use diagram::{Diagram, Side, State};
pub use graphs::{Graph, RootedGraph};
pub use laurent::LaurentPoly;
