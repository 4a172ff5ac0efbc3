pub mod clifford;
pub mod dense;
pub mod error;
pub mod gf2;
pub mod hierarchy;
pub mod pauli;
pub mod random;
pub mod weyl;

pub use dense::DenseUnitary;
pub use error::{Error, Result};
pub use pauli::{PhasedPauli, StabilizerGroup};
