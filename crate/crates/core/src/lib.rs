//! Exact cyclotomic-field toolkit for finite-group models of quantum behaviour.
//!
//! ```
//! use combq::groups::mz_splitter;
//! use combq::interferometer::{arm_state, Arm};
//! use combq::linalg::born;
//!
//! // the balanced splitter sends half the intensity to each arm
//! let s = mz_splitter(8).unwrap();
//! let out = s.apply(&arm_state(Arm::Upper)).unwrap();
//! let p = born(&arm_state(Arm::Lower), &out).unwrap();
//! assert_eq!(p.as_rational().unwrap().to_string(), "1/2");
//! ```

pub mod cli;
pub mod cyclotomic;
pub mod embedding;
pub mod error;
pub mod groups;
pub mod interferometer;
pub mod linalg;
pub mod transport;
pub mod walk;
pub mod zeno;

pub use cyclotomic::{Cyclotomic, Rational};
pub use error::{Error, ErrorKind, Result};
