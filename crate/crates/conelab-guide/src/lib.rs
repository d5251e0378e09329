//! Doctest harness for the book.
//!
//! mdBook does not run the Rust blocks in `book/src` as tests, so each
//! chapter is included here as module documentation; `cargo test --doc`
//! then compiles and runs every fenced Rust block. One module per chapter
//! keeps failures attributable to their chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/posets.md")]
pub mod posets {}

#[doc = include_str!("../../../book/src/valuations.md")]
pub mod valuations {}

#[doc = include_str!("../../../book/src/cones.md")]
pub mod cones {}

#[doc = include_str!("../../../book/src/powercone.md")]
pub mod powercone {}

#[doc = include_str!("../../../book/src/pipeline.md")]
pub mod pipeline {}

#[doc = include_str!("../../../book/src/monad.md")]
pub mod monad {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
