//! Idempotent semifield arithmetic: the coefficient domains of every
//! tropical polynomial in the crate.
//!
//! `TropRat` is max-plus over exact rationals with a bottom element ⊥
//! (the additive identity, "−∞"); `BoolSF` is the two-element Boolean
//! semifield. Addition is idempotent in both, which forces zero-sum
//! freeness: a ⊕ b = 0 only when a = b = 0.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::Error;

/// Operations every idempotent semifield instance provides. `zero` is the
/// additive identity and is absorbing for `mul`; every non-zero element is
/// multiplicatively invertible.
pub trait Semifield: Clone + Eq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiplicative inverse; domain error on the additive identity.
    fn inv(&self) -> Result<Self, Error>;
    fn is_zero(&self) -> bool;
}

/// Max-plus over exact rationals: ⊕ = max, ⊗ = +, with ⊥ = −∞ adjoined.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TropRat {
    Bottom,
    Finite(BigRational),
}

impl TropRat {
    pub fn finite(value: BigRational) -> Self {
        TropRat::Finite(value)
    }

    pub fn from_int(v: i64) -> Self {
        TropRat::Finite(BigRational::from(BigInt::from(v)))
    }

    pub fn value(&self) -> Option<&BigRational> {
        match self {
            TropRat::Bottom => None,
            TropRat::Finite(v) => Some(v),
        }
    }

    /// Canonical string form: "p/q" reduced with positive denominator, or
    /// "-inf" for ⊥.
    pub fn serialize(&self) -> String {
        match self {
            TropRat::Bottom => "-inf".to_string(),
            TropRat::Finite(v) => format!("{}/{}", v.numer(), v.denom()),
        }
    }

    /// Parses "p/q", a bare integer "p", or "-inf".
    pub fn parse(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s == "-inf" {
            return Ok(TropRat::Bottom);
        }
        let bad = |_| Error::Malformed(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).map_err(bad)?;
                let q = BigInt::from_str(q.trim()).map_err(bad)?;
                if q.is_zero() {
                    return Err(Error::Malformed(format!("zero denominator: {s:?}")));
                }
                Ok(TropRat::Finite(BigRational::new(p, q)))
            }
            None => {
                let p = BigInt::from_str(s).map_err(bad)?;
                Ok(TropRat::Finite(BigRational::from(p)))
            }
        }
    }
}

impl Semifield for TropRat {
    fn zero() -> Self {
        TropRat::Bottom
    }

    fn one() -> Self {
        TropRat::Finite(BigRational::zero())
    }

    fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (TropRat::Bottom, x) | (x, TropRat::Bottom) => x.clone(),
            (TropRat::Finite(a), TropRat::Finite(b)) => TropRat::Finite(a.max(b).clone()),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (TropRat::Bottom, _) | (_, TropRat::Bottom) => TropRat::Bottom,
            (TropRat::Finite(a), TropRat::Finite(b)) => TropRat::Finite(a + b),
        }
    }

    fn inv(&self) -> Result<Self, Error> {
        match self {
            TropRat::Bottom => Err(Error::Domain("inverse of the additive identity ⊥".into())),
            TropRat::Finite(a) => Ok(TropRat::Finite(-a)),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, TropRat::Bottom)
    }
}

impl fmt::Display for TropRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropRat::Bottom => write!(f, "-inf"),
            TropRat::Finite(v) => {
                if v.denom() == &BigInt::from(1) {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
        }
    }
}

/// The Boolean semifield {0, 1}: ⊕ = or, ⊗ = and; the unit group is {1}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BoolSF(pub bool);

impl Semifield for BoolSF {
    fn zero() -> Self {
        BoolSF(false)
    }

    fn one() -> Self {
        BoolSF(true)
    }

    fn add(&self, other: &Self) -> Self {
        BoolSF(self.0 || other.0)
    }

    fn mul(&self, other: &Self) -> Self {
        BoolSF(self.0 && other.0)
    }

    fn inv(&self) -> Result<Self, Error> {
        if self.0 {
            Ok(BoolSF(true))
        } else {
            Err(Error::Domain("inverse of the additive identity 0".into()))
        }
    }

    fn is_zero(&self) -> bool {
        !self.0
    }
}

impl fmt::Display for BoolSF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.0 { 1 } else { 0 })
    }
}
