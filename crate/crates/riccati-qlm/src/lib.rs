pub mod numkernel;
pub mod potentials;
pub mod wkb;
pub mod qlm;
pub mod spectrum;
pub mod expansion;
pub mod curves;

pub use numkernel::{Complex, Jet, Real};
