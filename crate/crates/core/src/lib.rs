//! Exact homological algebra over graded hypersurface rings `R = F_p[x,y,z,w]/(f)`.

#![allow(clippy::needless_range_loop)]

pub mod cache;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod field;
pub mod fpmod;
pub mod groebner;
pub mod hypersurface;
pub mod input;
pub mod matrix;
pub mod poly;
pub mod report;
pub mod resolve;
pub mod theorems;
pub mod theta;

pub use engine::Engine;
pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/rings.md")]
    mod rings {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/resolutions.md")]
    mod resolutions {}
    #[doc = include_str!("../../../book/src/theta.md")]
    mod theta {}
    #[doc = include_str!("../../../book/src/checkers.md")]
    mod checkers {}
    #[doc = include_str!("../../../book/src/input.md")]
    mod input {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/cache.md")]
    mod cache {}
}
