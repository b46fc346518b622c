//! Doc-test shim: includes every book chapter as module documentation so
//! `cargo test --doc` compiles and runs the book's code snippets.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/matrices.md")]
pub mod matrices {}

#[doc = include_str!("../../../book/src/channels.md")]
pub mod channels {}

#[doc = include_str!("../../../book/src/circuits.md")]
pub mod circuits {}

#[doc = include_str!("../../../book/src/relaxation.md")]
pub mod relaxation {}

#[doc = include_str!("../../../book/src/sudden_death.md")]
pub mod sudden_death {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
