//! Exact arithmetic for number fields at desk scale.
//!
//! The crate is organised bottom-up: big-integer linear algebra
//! ([`linalg`]), integer polynomials ([`poly`]), certified interval
//! arithmetic and root isolation ([`interval`], [`roots`]), number fields
//! ([`numfield`]), ideals of the ring of integers ([`ideal`]), unit groups
//! ([`units`]), the automorphism-group filtration of the associated
//! Oeljeklaus–Toma-type quotients ([`aut`]), ray unit groups and the
//! ray-class-number ratio ([`rayclass`]), and torsion-homology growth
//! against the Mahler measure ([`growth`]).
//!
//! All algebra is exact (arbitrary-precision integers and rationals);
//! numeric data only ever narrows candidates, which are then confirmed by
//! exact computation, or is reported as an explicit interval.

pub mod aut;
pub mod growth;
pub mod ideal;
pub mod interval;
pub mod linalg;
pub mod numfield;
pub mod poly;
pub mod rayclass;
pub mod roots;
pub mod units;

/// Arbitrary-precision integer used throughout.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational used throughout.
pub type Rat = num_rational::BigRational;

pub(crate) fn int(v: i64) -> Int {
    Int::from(v)
}

pub(crate) fn rat(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}
