//! Polynomial invariants of graphs with numbered edges, and a Laplace-type
//! operator on the spaces these graphs span.
//!
//! * [`graph`]: directed and undirected multigraphs, ranking and enumeration.
//! * [`poly`]: exact sparse polynomials with rational coefficients.
//! * [`invariants`]: Bernardi, full chromatic, Potts and chromatic
//!   polynomials of a single graph.
//! * [`space`]: formal sums of graphs, the `B_i` and Laplace operators, and
//!   the universal sums.
//! * [`verify`]: exact checks of the operator identities.
//!
//! Every enumeration goes through [`Guards`], which refuse work above a
//! configurable size.

pub mod error;
pub mod graph;
pub mod guard;
pub mod invariants;
pub mod poly;
pub mod space;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{DirectedGraph, Graph, GraphSpace, UndirectedGraph, VertexSet};
pub use guard::Guards;
pub use poly::{MultiPoly, Rational, Var, VarSet};
pub use space::{DirectedVector, GraphVector, PottsRoute, UndirectedVector};
pub use verify::{Identity, IdentityReport, SignConvention, Status, Theorem2Reading, VerifyRun};
