//! Filtered Hilbert sequences of deformed graphical zonotopal algebras.
//!
//! A multigraph `G` with a linear vertex order gives commuting nilpotent flows
//! `X_v` in the edge algebra `K[phi_e]/(phi_e^2)`. For a power series
//! `f(u) = u + a_2 u^2 + ...` the elements `Y_v = f(X_v)` generate the same
//! algebra, but monomials of degree at most `k` in the `Y_v` span a filtration
//! whose successive quotient dimensions (the Hilbert sequence) depend on `f`.
//!
//! Module map: [`graph`] multigraphs and the graded oracle, [`family`] named
//! graphs, [`series`] truncated power series, [`algebra`] the edge algebra,
//! [`filtration`] the rank engine, [`presentation`] defining relations,
//! [`strata`] parameter sweeps and checks.

pub mod algebra;
pub mod error;
pub mod family;
pub mod filtration;
pub mod graph;
pub mod presentation;
pub mod scalar;
pub mod series;
pub mod strata;

pub use algebra::AlgebraElement;
pub use error::{Error, Result};
pub use family::generate_family;
pub use filtration::{hilbert_sequence, EngineConfig, FiltrationResult, Labeling, Mode, Strategy};
pub use graph::{EdgeId, HilbertSequence, Multigraph, VertexId};
pub use series::PolySeries;
