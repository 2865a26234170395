//! Shifted Yangians, their difference-operator representations, coproducts,
//! and the classical geometry of affine Grassmannian slices, all computed
//! with exact arithmetic.

pub mod cartan;
pub mod coprod;
pub mod error;
pub mod gklo;
pub mod harness;
pub mod report;
pub mod slice;
pub mod yangian;

pub use cartan::{CartanDatum, CorootConvention, Coweight, RootVec};
pub use coprod::{CoprodCtx, DeltaRep, PbwChoice, SymTensor};
pub use error::{Error, Result};
pub use gklo::{DiffOp, GkloConfig, GkloRep, OracleFamily, Orientation};
pub use report::{CheckRecord, Status};
pub use yangian::{GenKind, GenSym, NCElem, Relation, YangianCtx};
