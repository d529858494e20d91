//! Comparative index and cyclic sums of Lagrangian subspaces.
pub mod comparative;
pub mod cyclic;
pub mod discrete;
pub mod error;
pub mod io;
pub mod kashiwara;
pub mod lagrangian;
pub mod linalg;
pub mod report;
pub mod verify;

pub use comparative::{comparative_index, ComparativeIndexBreakdown};
pub use cyclic::{cyclic_sums, CyclicSumBundle, FrameChain, WronskianBlockMatrix};
pub use discrete::{
    principal_solution, propagate, ConjoinedTrajectory, FocalPointTally, SymplecticSystem,
};
pub use error::{Error, Result};
pub use io::InputDocument;
pub use kashiwara::kashiwara_index;
pub use lagrangian::{
    frame_to_symplectic, wronskian, AngleSearch, LagrangianFrame, RotationMatrix, SymplecticMatrix,
};
pub use linalg::{InertiaTriple, Mat, Tolerance};
pub use report::{CheckReport, IdentityCheck};
