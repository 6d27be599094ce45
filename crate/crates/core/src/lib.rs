//! Finite fields, cyclotomic integers, weakly regular bent functions and the
//! two- and three-weight trace codes built from them.
//!
//! Everything here is exact: field elements are Zech-log indices and Walsh
//! values live in `Z[ζ_p]`. The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cyclotomic;
pub mod gf;
pub mod bent;
pub mod codes;
pub mod predict;
