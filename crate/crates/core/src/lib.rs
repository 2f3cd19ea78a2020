//! Certified partial k-parallelisms of `V(n, q)`.
pub mod bounds;
pub mod certificate;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oracles;
pub mod search;
pub mod spread;

pub use bounds::{BoundRecord, BoundReport, FormulaId};
pub use certificate::{certify_bytes, CertificateViolation, Certified, ParallelismFile};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldTower, ScalarField, TowerDescriptor};
pub use linalg::{Matrix, Subspace, SubspaceKey};
pub use oracles::{OracleRecord, OracleReport, Relation};
pub use search::{GeneratingSetStats, SearchConfig, SearchMode, SearchOutcome};
pub use spread::{Ambient, PartialParallelism, Spread};

pub use num_bigint;
pub use num_rational;
