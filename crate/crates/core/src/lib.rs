pub mod error;
pub mod format;
pub mod gates;
pub mod linalg;
pub mod register;
pub mod circuit;
pub mod cli;
pub mod pulse;
