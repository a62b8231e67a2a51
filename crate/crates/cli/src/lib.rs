//! Configuration-driven front end for `fracbvp`: hypothesis checks,
//! existence certificates, Picard solves, identity suites and the worked example.

pub mod commands;
pub mod config;
pub mod identities;
pub mod output;

pub use commands::{cmd_check, cmd_example41, cmd_solve, CheckOutcome, Example41Report, SolveOutcome};
pub use config::RunConfig;
pub use identities::{cmd_identities, IdentityCheck, IdentityReport};
pub use output::{write_csv, ExitStatus, CSV_HEADER};
