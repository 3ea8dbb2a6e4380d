//! Command-line front end and file formats for the `ialg-core` engine.
//!
//! A *session* is a line-oriented text file declaring a poset, a field,
//! a presented algebra, optional modules and a working window, followed
//! by `run` lines naming the commands to execute:
//!
//! ```text
//! poset zlattice 2
//! field Q
//! algebra invariant
//! gen x (1,0)
//! gen y (0,1)
//! rel (1,1): x*y - y*x
//! window (0,0) (4,4)
//! run dims (0,0) (3,3)
//! run check strong
//! ```
//!
//! [`parse`] turns the text into a [`parse::SessionSpec`]; [`session`]
//! resolves the spec against the engine and executes the commands;
//! [`report`] is the resulting document, emitted as versioned JSON or
//! rendered as plain text.  [`corpus`] embeds a few ready-made sessions.
//!
//! Binary exit codes: 0 success, 1 usage or parse or command errors,
//! 2 a check refuted its property, 3 a check came back inconclusive,
//! 4 a resource limit was hit.  Limits take precedence over errors,
//! errors over refutation, refutation over inconclusive.

pub mod corpus;
pub mod parse;
pub mod report;
pub mod session;
