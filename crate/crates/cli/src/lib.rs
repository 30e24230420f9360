//! Library surface of the CLI: target resolution and the claims runner,
//! shared between the binary and the test suites.

pub mod claims;
pub mod targets;
