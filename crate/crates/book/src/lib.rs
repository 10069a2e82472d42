//! Compiles the code listings of the guide in `book/` as doc-tests, one module
//! per chapter so a failing listing points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/ising.md")]
pub mod ising {}
#[doc = include_str!("../../../book/src/algorithm.md")]
pub mod algorithm {}
#[doc = include_str!("../../../book/src/schedules.md")]
pub mod schedules {}
#[doc = include_str!("../../../book/src/generators.md")]
pub mod generators {}
#[doc = include_str!("../../../book/src/formats.md")]
pub mod formats {}
#[doc = include_str!("../../../book/src/benchmarking.md")]
pub mod benchmarking {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
