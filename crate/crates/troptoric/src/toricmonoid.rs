//! Affine toric monoids S = σ^∨ ∩ M, presented by the rays of the cone σ.
//!
//! Membership, units, and localization are all answered through the ray
//! pairings ⟨u, r⟩, so every operation is exact integer arithmetic. The
//! monoid Spec — the prime ideals — corresponds to the faces of σ; a face
//! is recognized by a supporting-functional feasibility certificate, and
//! its prime is tested through the relative-interior functional Σ rays.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::feasibility::{feasible_point, Constraint, Rel};
use crate::intlin::{kernel_basis, IntMatrix};
use crate::Error;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ToricMonoid {
    rank: usize,
    rays: Vec<Vec<BigInt>>,
}

pub fn pairing(u: &[BigInt], ray: &[BigInt]) -> BigInt {
    assert_eq!(u.len(), ray.len(), "pairing of mismatched lengths");
    u.iter().zip(ray).map(|(a, b)| a * b).sum()
}

impl ToricMonoid {
    /// `rays` generate σ inside N = Z^rank; the monoid is σ^∨ ∩ Z^rank.
    /// No rays means σ = {0} and the monoid is all of Z^rank.
    pub fn new(rank: usize, rays: Vec<Vec<BigInt>>) -> Result<Self, Error> {
        for r in &rays {
            if r.len() != rank {
                return Err(Error::Dimension(format!(
                    "ray {r:?} in a rank-{rank} lattice"
                )));
            }
            if r.iter().all(Zero::is_zero) {
                return Err(Error::Domain("zero vector is not a ray".into()));
            }
        }
        Ok(ToricMonoid { rank, rays })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn contains(&self, u: &[BigInt]) -> bool {
        assert_eq!(u.len(), self.rank, "element of the wrong rank");
        self.rays.iter().all(|r| !pairing(u, r).is_negative())
    }

    /// u is invertible iff it pairs to zero with every ray.
    pub fn is_unit(&self, u: &[BigInt]) -> bool {
        assert_eq!(u.len(), self.rank, "element of the wrong rank");
        self.rays.iter().all(|r| pairing(u, r).is_zero())
    }

    /// Saturated basis of the unit group σ^⊥ ∩ M, as matrix columns.
    pub fn units_lattice(&self) -> IntMatrix {
        let a = IntMatrix::from_bigint_rows(self.rank, &self.rays);
        kernel_basis(&a)
    }

    /// Membership in the maximal ideal S ∖ S^×.
    pub fn maximal_ideal_contains(&self, u: &[BigInt]) -> bool {
        self.contains(u) && !self.is_unit(u)
    }

    /// The primes of the monoid, one per face of σ, ordered by face
    /// dimension proxy (ray count) then lexicographic ray index set. The
    /// empty face is the generic point (its ideal is empty); the full ray
    /// set gives the maximal ideal.
    pub fn spec_faces(&self) -> Vec<FacePrime> {
        let k = self.rays.len();
        let mut subsets: Vec<Vec<usize>> = (0..1u32 << k)
            .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect())
            .collect();
        subsets.sort_by_key(|s| (s.len(), s.clone()));
        subsets
            .into_iter()
            .filter(|s| self.is_face(s))
            .map(|ray_indices| {
                let mut functional = vec![BigInt::zero(); self.rank];
                for &i in &ray_indices {
                    for (f, c) in functional.iter_mut().zip(&self.rays[i]) {
                        *f += c;
                    }
                }
                FacePrime { ray_indices, functional }
            })
            .collect()
    }

    /// A subset T spans a face iff some functional vanishes on T and is
    /// strictly positive on the remaining rays.
    fn is_face(&self, subset: &[usize]) -> bool {
        let mut cs = Vec::with_capacity(self.rays.len());
        for (i, r) in self.rays.iter().enumerate() {
            let rel = if subset.contains(&i) { Rel::Eq } else { Rel::Gt };
            cs.push(Constraint::from_ints(rel, r, &BigInt::zero()));
        }
        feasible_point(self.rank, &cs)
            .expect("homogeneous system in ambient rank")
            .is_some()
    }

    /// Inverting the monomial u cuts σ down to its face orthogonal to u:
    /// the localization keeps exactly the rays u pairs to zero with.
    pub fn localize_at(&self, u: &[BigInt]) -> Result<ToricMonoid, Error> {
        if !self.contains(u) {
            return Err(Error::Domain(format!(
                "cannot localize at {u:?}: not an element of the monoid"
            )));
        }
        let rays = self
            .rays
            .iter()
            .filter(|r| pairing(u, r).is_zero())
            .cloned()
            .collect();
        Ok(ToricMonoid { rank: self.rank, rays })
    }

    /// Membership as weak rational inequalities, for feasibility callers.
    pub fn hrep_constraints(&self) -> Vec<Constraint> {
        self.rays
            .iter()
            .map(|r| Constraint::from_ints(Rel::Ge, r, &BigInt::zero()))
            .collect()
    }
}

/// A prime ideal of the monoid: the elements pairing strictly positively
/// with the relative interior of its face.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FacePrime {
    pub ray_indices: Vec<usize>,
    functional: Vec<BigInt>,
}

impl FacePrime {
    /// Relative-interior point of the face (sum of its ray generators);
    /// a monoid element lies in the prime iff it pairs positively with it.
    pub fn functional(&self) -> &[BigInt] {
        &self.functional
    }

    pub fn ideal_contains(&self, monoid: &ToricMonoid, u: &[BigInt]) -> bool {
        monoid.contains(u) && pairing(u, &self.functional).is_positive()
    }
}
