//! Generalized Bell states, teleportation equations, Yang-Baxter gates and
//! Temperley-Lieb representations, each checked numerically.

pub mod bell;
pub mod braid;
pub mod circuit;
pub mod error;
pub mod linalg;
pub mod pauli;
pub mod random;
pub mod report;
pub mod suites;
pub mod teleport;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{CMatrix, Tolerance, C64};
pub use report::{Case, Expect, Report};
