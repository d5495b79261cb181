//! Session runner, REPL and demos on top of `hullforge-core`.

pub mod demo;
pub mod report;
pub mod session;

pub use report::{Format, Fragment, SessionReport, Status};
pub use session::{run_session, run_session_file, Session};
