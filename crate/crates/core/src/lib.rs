pub mod cartan;
pub mod drinfeld;
pub mod epsseq;
pub mod reduce;
pub mod replay;
pub mod error;
pub mod freealg;
pub mod isomap;
pub mod scalar;
pub mod text;
pub use error::{Error, Result};
pub use scalar::Scalar;
