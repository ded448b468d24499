//! Exact computation of Picard groups, unit groups, and monomial Cartier
//! divisors of toric schemes over idempotent semifields.
//!
//! A rational polyhedral [`fan::Fan`] determines affine chart monoids
//! ([`toricmonoid::AffineToricMonoid`]); the unit lattices of the charts of
//! pairwise and triple cone intersections form a Čech complex over the
//! maximal-cone cover ([`picard`]), which exact integer linear algebra
//! ([`intlin`]) turns into canonical finitely generated abelian groups.
//! [`tropoly`] carries the monoid-semiring side — tropical polynomials, the
//! single-term unit criterion, and reduction to the cancellative function
//! model — and [`divisor`] maps monomial Cartier divisors onto Picard
//! classes and back.

pub mod divisor;
pub mod fan;
pub mod feasibility;
pub mod intlin;
pub mod picard;
pub mod semifield;
pub mod toricmonoid;
pub mod tropoly;

mod error;
pub use error::Error;
