//! Doc-test bridge for the guide: every fenced `rust` snippet in the book
//! chapters compiles and runs against the current crate API, so the book can
//! never drift from the code. Built only while collecting doc tests.

#[doc = include_str!("../../../book/src/overview.md")]
mod overview {}

#[doc = include_str!("../../../book/src/dataflow.md")]
mod dataflow {}

#[doc = include_str!("../../../book/src/prefix-doubling.md")]
mod prefix_doubling {}

#[doc = include_str!("../../../book/src/difference-covers.md")]
mod difference_covers {}

#[doc = include_str!("../../../book/src/verification-and-cli.md")]
mod verification_and_cli {}
