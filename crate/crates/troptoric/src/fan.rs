//! Rational polyhedral fans and the chart data they induce.
//!
//! Construction validates the cover hypothesis the Čech machinery rests
//! on: for every pair of maximal cones, the cone spanned by their shared
//! rays must be a face of both and must equal the actual intersection.
//! The face part is a supporting-functional feasibility certificate; the
//! equality part searches for a rational point inside σ_i ∩ σ_j that
//! escapes the shared-ray cone and reports it (as an integer witness)
//! when found. Fans violating the condition are rejected outright —
//! general convex-geometry intersections are out of scope on purpose.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::feasibility::{feasible_point, is_feasible, project_to_first, Constraint, Rel};
use crate::toricmonoid::ToricMonoid;
use crate::Error;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<BigInt>>,
    max_cones: Vec<Vec<usize>>,
}

/// A face common to one or more maximal cones, named by the rays spanning
/// it. The empty set is the zero cone (the torus chart).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ConeRef {
    pub ray_indices: Vec<usize>,
}

/// On-disk shape: {"rank": n, "rays": [[..],..], "max_cones": [[..],..]}.
#[derive(Clone, Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl FanFile {
    pub fn build(&self) -> Result<Fan, Error> {
        let rays = self
            .rays
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Fan::new(self.rank, rays, self.max_cones.clone())
    }
}

impl Fan {
    pub fn new(
        rank: usize,
        rays: Vec<Vec<BigInt>>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Self, Error> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(Error::InvalidFan(format!(
                    "ray {i} has {} coordinates, expected {rank}",
                    r.len()
                )));
            }
            if r.iter().all(Zero::is_zero) {
                return Err(Error::InvalidFan(format!("ray {i} is zero")));
            }
            let g = r.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !g.is_one() {
                return Err(Error::InvalidFan(format!(
                    "ray {i} = {r:?} is not primitive (coordinate gcd {g})"
                )));
            }
            if let Some(j) = rays[..i].iter().position(|s| s == r) {
                return Err(Error::InvalidFan(format!("rays {j} and {i} are equal")));
            }
        }

        let mut cones = Vec::with_capacity(max_cones.len());
        for (c, cone) in max_cones.iter().enumerate() {
            let mut ids = cone.clone();
            ids.sort_unstable();
            for w in ids.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::InvalidFan(format!(
                        "cone {c} repeats ray index {}",
                        w[0]
                    )));
                }
            }
            if let Some(&bad) = ids.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidFan(format!(
                    "cone {c} uses ray index {bad}, but there are only {} rays",
                    rays.len()
                )));
            }
            cones.push(ids);
        }
        for a in 0..cones.len() {
            for b in 0..cones.len() {
                if a != b && cones[a].iter().all(|i| cones[b].contains(i)) {
                    return Err(Error::InvalidFan(format!(
                        "cone {a} is contained in cone {b} (index sets)"
                    )));
                }
            }
        }

        let fan = Fan { rank, rays, max_cones: cones };
        for a in 0..fan.max_cones.len() {
            for b in a + 1..fan.max_cones.len() {
                fan.check_pair(a, b)?;
            }
        }
        Ok(fan)
    }

    pub fn from_json_str(s: &str) -> Result<Self, Error> {
        let file: FanFile =
            serde_json::from_str(s).map_err(|e| Error::Malformed(format!("fan file: {e}")))?;
        file.build()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    fn shared_rays(&self, ids: &[usize]) -> Vec<usize> {
        let mut shared: Vec<usize> = self.max_cones[ids[0]].clone();
        for &id in &ids[1..] {
            shared.retain(|i| self.max_cones[id].contains(i));
        }
        shared
    }

    /// The common face of a nonempty set of maximal cones, as its shared
    /// ray set. Every such chart is nonempty (the torus sits in all of
    /// them), so the Čech nerve is a full simplex.
    pub fn intersection_cone(&self, ids: &[usize]) -> Result<ConeRef, Error> {
        if ids.is_empty() {
            return Err(Error::Domain("intersection of no cones".into()));
        }
        for &id in ids {
            if id >= self.max_cones.len() {
                return Err(Error::Domain(format!(
                    "unknown cone id {id}: fan has {} maximal cones",
                    self.max_cones.len()
                )));
            }
        }
        Ok(ConeRef { ray_indices: self.shared_rays(ids) })
    }

    pub fn chart_monoid(&self, c: &ConeRef) -> ToricMonoid {
        let rays = c.ray_indices.iter().map(|&i| self.rays[i].clone()).collect();
        ToricMonoid::new(self.rank, rays).expect("cone rays were validated with the fan")
    }

    /// Supporting-functional certificate: some u vanishes on `face` and is
    /// strictly positive on the remaining rays of cone `c`.
    fn face_certificate(&self, c: usize, face: &[usize]) -> bool {
        let cs: Vec<Constraint> = self.max_cones[c]
            .iter()
            .map(|i| {
                let rel = if face.contains(i) { Rel::Eq } else { Rel::Gt };
                Constraint::from_ints(rel, &self.rays[*i], &BigInt::zero())
            })
            .collect();
        is_feasible(self.rank, &cs).expect("homogeneous system in fan rank")
    }

    /// Inequalities on x cutting out cone(rays indexed by `ids`), obtained
    /// by projecting the generator description {x = Σ λ r, λ ≥ 0}.
    fn cone_hrep(&self, ids: &[usize]) -> Vec<Constraint> {
        let n = self.rank;
        let k = ids.len();
        let mut cs = Vec::new();
        for coord in 0..n {
            let mut co = vec![BigRational::zero(); n + k];
            co[coord] = BigRational::one();
            for (s, &i) in ids.iter().enumerate() {
                co[n + s] = -BigRational::from(self.rays[i][coord].clone());
            }
            cs.push(Constraint::new(Rel::Eq, co, BigRational::zero()));
        }
        for s in 0..k {
            let mut co = vec![BigRational::zero(); n + k];
            co[n + s] = BigRational::one();
            cs.push(Constraint::new(Rel::Ge, co, BigRational::zero()));
        }
        project_to_first(n + k, n, &cs).expect("well-formed projection system")
    }

    /// Constraints (over x ⧺ λ) putting x in the cone spanned by `ids`,
    /// with λ starting at `offset` in a `total`-variable system.
    fn membership_block(
        &self,
        ids: &[usize],
        offset: usize,
        total: usize,
    ) -> Vec<Constraint> {
        let mut cs = Vec::new();
        for coord in 0..self.rank {
            let mut co = vec![BigRational::zero(); total];
            co[coord] = BigRational::one();
            for (s, &i) in ids.iter().enumerate() {
                co[offset + s] = -BigRational::from(self.rays[i][coord].clone());
            }
            cs.push(Constraint::new(Rel::Eq, co, BigRational::zero()));
        }
        for s in 0..ids.len() {
            let mut co = vec![BigRational::zero(); total];
            co[offset + s] = BigRational::one();
            cs.push(Constraint::new(Rel::Ge, co, BigRational::zero()));
        }
        cs
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<(), Error> {
        let shared = self.shared_rays(&[a, b]);
        for c in [a, b] {
            if !self.face_certificate(c, &shared) {
                return Err(Error::InvalidFan(format!(
                    "cones {a} and {b}: shared rays {shared:?} do not span a face of cone {c}"
                )));
            }
        }

        // σ_a ∩ σ_b ⊆ cone(shared): look for a point of the intersection
        // violating one of the shared cone's inequalities.
        let hrep = self.cone_hrep(&shared);
        let n = self.rank;
        let (ka, kb) = (self.max_cones[a].len(), self.max_cones[b].len());
        let total = n + ka + kb;
        let mut base = self.membership_block(&self.max_cones[a], n, total);
        base.extend(self.membership_block(&self.max_cones[b], n + ka, total));
        for h in &hrep {
            for viol in negations(h, total) {
                let mut sys = base.clone();
                sys.push(viol);
                if let Some(point) =
                    feasible_point(total, &sys).expect("well-formed violation query")
                {
                    let witness = integral_direction(&point[..n]);
                    return Err(Error::InvalidFan(format!(
                        "cones {a} and {b}: intersection is larger than the span \
                         of shared rays {shared:?}; witness point {witness:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Constraints whose disjunction is the negation of `h`, widened to a
/// `total`-variable system (h constrains the leading x block).
fn negations(h: &Constraint, total: usize) -> Vec<Constraint> {
    let widen = |sign: i32| {
        let mut co = vec![BigRational::zero(); total];
        for (j, c) in h.coeffs.iter().enumerate() {
            co[j] = if sign < 0 { -c } else { c.clone() };
        }
        let constant = if sign < 0 { -h.constant.clone() } else { h.constant.clone() };
        (co, constant)
    };
    match h.rel {
        // ¬(f ≥ 0) ⟺ −f > 0; ¬(f > 0) ⟺ −f ≥ 0; ¬(f = 0) ⟺ f > 0 ∨ −f > 0.
        Rel::Ge => {
            let (co, k) = widen(-1);
            vec![Constraint::new(Rel::Gt, co, k)]
        }
        Rel::Gt => {
            let (co, k) = widen(-1);
            vec![Constraint::new(Rel::Ge, co, k)]
        }
        Rel::Eq => {
            let (cp, kp) = widen(1);
            let (cn, kn) = widen(-1);
            vec![Constraint::new(Rel::Gt, cp, kp), Constraint::new(Rel::Gt, cn, kn)]
        }
    }
}

/// Clears denominators to the primitive integer vector along `point`.
fn integral_direction(point: &[BigRational]) -> Vec<BigInt> {
    let mut scale = BigInt::one();
    for p in point {
        scale = scale.lcm(p.denom());
    }
    let ints: Vec<BigInt> = point.iter().map(|p| (p * BigRational::from(scale.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.iter().map(|x| x / &g).collect()
    }
}
