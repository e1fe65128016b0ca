//! Runs every code snippet in the guide (`book/`) as a doc test, so the
//! prose and the library can never drift apart silently.
//!
//! Each module below embeds one chapter verbatim. `cargo test -p altfpt-book --doc`
//! compiles and executes all fenced `rust` blocks in the book.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}

#[doc = include_str!("../../../book/src/crossing.md")]
pub mod crossing {}

#[doc = include_str!("../../../book/src/laws.md")]
pub mod laws {}

#[doc = include_str!("../../../book/src/samplers.md")]
pub mod samplers {}

#[doc = include_str!("../../../book/src/engine.md")]
pub mod engine {}

#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}

#[doc = include_str!("../../../book/src/estimation.md")]
pub mod estimation {}

#[doc = include_str!("../../../book/src/scenarios.md")]
pub mod scenarios {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
