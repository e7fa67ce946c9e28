//! Library side of the `gkf` command line tool.

pub mod report;
pub mod verify;
pub mod workspace;
