//! Power residue S-boxes over prime fields: exact-count Walsh and Kloosterman
//! spectra, orbit-reduced enumeration, and certification against closed-form
//! bounds.

pub mod bounds;
pub mod character;
pub mod error;
pub mod field;
pub mod sbox;
pub mod selftest;
pub mod spectra;
pub mod sweep;

pub use error::{Error, Result};
