//! Runs the code snippets of the guide in `book/` as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/nested_words.md")]
pub mod nested_words {}
#[doc = include_str!("../../../book/src/delays.md")]
pub mod delays {}
#[doc = include_str!("../../../book/src/machines.md")]
pub mod machines {}
#[doc = include_str!("../../../book/src/evaluation.md")]
pub mod evaluation {}
#[doc = include_str!("../../../book/src/streamability.md")]
pub mod streamability {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
