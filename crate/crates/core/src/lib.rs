//! Feasibility analysis and simulation of precoding-based asymptotic
//! interference alignment on three-unicast acyclic networks.

pub mod algebra;
pub mod ana;
pub mod channel;
pub mod dag;
pub mod expr;
pub mod field;
mod flow;
pub mod generators;
pub mod matrix;
pub mod netfile;
pub mod poly;
pub mod scheme;

pub use algebra::{AlgebraError, McConfig, McVerdict};
pub use ana::{validate_ana, AnaError, AnaNetwork};
pub use channel::{KernelAssignment, SessionGains};
pub use dag::{
    CutQuery, CutValue, Dag, DagError, EdgeId, EdgeRelation, EdgeSet, GainSegments, NodeId,
};
pub use expr::GainProduct;
pub use field::{FieldError, Fp, PrimeField};
pub use generators::{GenError, GenKind, GenSpec};
pub use matrix::FqMatrix;
pub use netfile::{NetFileError, NetworkFile};
pub use poly::{PolyError, SparsePoly};
pub use scheme::{SchemeError, SchemeInstance};
