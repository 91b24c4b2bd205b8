#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod cli;
pub mod cycles;
pub mod error;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod ring;

pub use error::{Error, Result};
pub use ring::{KElem, KRational, Ring};
