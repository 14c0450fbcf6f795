//! Finite groups as dense Cayley tables, and the combinatorics built on them.
//!
//! The crate is `no_std` (it needs `alloc`). Enabling the `parallel` feature
//! pulls in `std` and rayon and parallelises the per-element profiles; the
//! results are identical either way.
//!
//! Module map:
//!
//! * [`field`]: prime-power fields GF(p^k).
//! * [`group`]: Cayley tables, conjugacy classes and the constructors for
//!   cyclic, symmetric, SL(2,q), PSL(2,q) and direct-product groups.
//! * [`repr`]: character tables from the class algebra, and the
//!   quasirandomness degree.
//! * [`measure`]: functions under the normalised counting measure,
//!   conditional expectations, and Chu's product inequality.
//! * [`bits`] and [`patterns`]: packed indicator sets and corner / triangle
//!   counting, plus the mixing discrepancy.
//! * [`syndetic`]: covering a group by right shifts of a set.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod bits;
pub mod error;
pub mod field;
pub mod group;
pub mod measure;
pub mod patterns;
pub mod repr;
pub mod syndetic;

mod eigen;

pub use bits::IndicatorSet;
pub use error::{Error, Result};
pub use field::PrimePowerField;
pub use group::{Family, GroupSpec, GroupTable, Product, ProductView};
pub use measure::{GroupFunction, Partition};
pub use repr::CharacterTable;
pub use syndetic::{CoverMode, CoverResult};
