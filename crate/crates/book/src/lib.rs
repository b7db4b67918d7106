//! Guide snippets, compiled and run as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/ch1-primitives.md")]
pub mod chapter1 {}

#[doc = include_str!("../../../book/src/ch2-kernel.md")]
pub mod chapter2 {}

#[doc = include_str!("../../../book/src/ch3-evolve.md")]
pub mod chapter3 {}

#[doc = include_str!("../../../book/src/ch4-weighted.md")]
pub mod chapter4 {}

#[doc = include_str!("../../../book/src/ch5-uniqueness.md")]
pub mod chapter5 {}

#[doc = include_str!("../../../book/src/ch6-cli.md")]
pub mod chapter6 {}
