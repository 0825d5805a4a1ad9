//! The guide's chapters, attached to empty modules so that `cargo test`
//! compiles and runs every code block in the book against the current
//! library. One module per chapter keeps test failures traceable to their
//! source file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/substitutions.md")]
pub mod substitutions {}

#[doc = include_str!("../../../book/src/linear-algebra.md")]
pub mod linear_algebra {}

#[doc = include_str!("../../../book/src/factor-languages.md")]
pub mod factor_languages {}

#[doc = include_str!("../../../book/src/return-words.md")]
pub mod return_words {}

#[doc = include_str!("../../../book/src/pronilpotent-quotients.md")]
pub mod pronilpotent_quotients {}

#[doc = include_str!("../../../book/src/finite-quotients.md")]
pub mod finite_quotients {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
