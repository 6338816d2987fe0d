//! Finite fans, their epimorphisms and downward closed maximal chains,
//! amalgamation, finite-union semigroups and the associated Ramsey searches.

pub mod amalgam;
pub mod cert;
pub mod chains;
pub mod duality;
pub mod epi;
pub mod error;
pub mod fan;
pub mod fan_ramsey;
pub mod fink;
pub mod limits;
pub mod metrics;
pub mod ramsey;

pub use chains::ChainedFan;
pub use epi::{FanEpi, Mode};
pub use error::{Error, Result};
pub use fan::{Fan, Vertex, ROOT};
pub use limits::Limits;
