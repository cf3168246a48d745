//! Edge-count estimation with independent-set, degree and random-neighbor
//! queries.
//!
//! Every algorithm reads the graph through an [`OracleSession`], which counts
//! each query, so accuracy and query cost can be measured together.

pub mod driver;
pub mod enumeration;
pub mod error;
pub mod estimators;
pub mod graph;
pub mod guards;
pub mod lowerbound;
pub mod oracle;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, Vertex};
pub use oracle::{Answer, NeighborAnswer, OracleSession, QueryLedger};
