//! Problem files, command dispatch and reports.
//!
//! A problem is a TOML document describing a field, a category, optional
//! algebras with coefficient modules, functor modules and a task block.
//! See `fixtures/` for complete examples.

mod build;
mod report;
mod spec;
mod tasks;

pub use build::Problem;
pub use report::{Check, Report, Status, Table};
pub use spec::*;
pub use tasks::{run, RunOptions, Task, TaskError, TaskRegistry};
