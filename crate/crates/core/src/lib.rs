//! Boolean circuits in negation normal form, their properties and queries,
//! a top-down compiler and sentential decision diagrams.

pub mod analysis;
pub mod cnf;
pub mod compile;
pub mod error;
pub mod lit;
pub mod nnf;
pub mod queries;
pub mod sdd;
pub mod vtree;
pub mod weights;

pub use analysis::{PropertyReport, DEFAULT_ORACLE_CAP};
pub use cnf::{parse_cnf, Clause, CnfFormula};
pub use compile::{compile, CompileOptions, Heuristic};
pub use error::{Error, Result};
pub use lit::{Assignment, Literal, Var, VarSet};
pub use nnf::{parse_nnf, NnfBuilder, NnfCircuit, NnfNode, NodeId};
pub use queries::TrustOptions;
pub use sdd::{parse_sdd, Obdd, SddId, SddManager};
pub use vtree::{parse_vtree, Vtree, VtreeId, VtreeNode};
pub use weights::{parse_weights, Weight, WeightMap};
