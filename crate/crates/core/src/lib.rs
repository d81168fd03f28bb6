//! Exact computation of the unit index `e ∈ {1, 3}` between `Z[√N]` and the
//! maximal order of `Q(√N)` for square-free `N ≡ 5 (mod 8)`.
//!
//! The index is decided three ways that must agree: the parity of the
//! fundamental unit of the maximal order, the continued fractions of
//! `(√N ± 1)/4`, and principality of the ideals `[4, √N ± 1]`. The class
//! number ratio `h⁺(4N)/h⁺(N)` gives a fourth, independent reading.
//!
//! Everything is exact integer arithmetic.

pub mod cfrac;
pub mod classgroup;
pub mod error;
pub mod exactint;
pub mod families;
pub mod ideals;
pub mod units;

pub use cfrac::{expand, sqrt_cf, CfExpansion, CycleKey, IterCap, QuadIrr};
pub use error::{Error, Result};
pub use exactint::{quad_mul, quad_norm, quad_pow, QuadInt};
pub use families::{FamilyKind, FamilyRow};
pub use ideals::IdealA;
pub use units::UnitReport;
