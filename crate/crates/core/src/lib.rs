//! Preferential attachment graphs driven by an edge-step function.
//!
//! At each step the graph either gains a vertex attached preferentially, or
//! an edge between two preferentially chosen vertices. The crate simulates the
//! process, couples it to a labelled random tree, measures diameters, cliques
//! and path counts, and evaluates the matching theoretical bounds.

pub mod coupling;
pub mod edgestep;
pub mod error;
pub mod graph;
pub mod harness;
pub mod observables;
pub mod oracle;
pub mod rng;
pub mod theory;

pub use coupling::{collapse, coupled_run, grow_tree, DoublyLabeledTree};
pub use edgestep::{make_family, EdgeStepFunction, Family};
pub use error::{Error, Result};
pub use graph::{MultiGraph, SimpleView, StepType, VertexId};
pub use observables::{observe, ObservableReport, ObserveConfig};
pub use rng::StreamKey;
