//! Command-line front end for `mouldlab`: an expression language over the
//! library's builders and operators, property checks, and the acceptance
//! report runner.

pub mod commands;
pub mod dsl;
