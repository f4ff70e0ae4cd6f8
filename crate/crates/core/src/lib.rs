pub mod cli;
pub mod error;
pub mod norms;
pub mod potentials;
pub mod quad;
pub mod resolvent;
pub mod specfun;
