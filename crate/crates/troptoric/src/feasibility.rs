//! Exact rational feasibility for small linear systems, by Fourier–Motzkin
//! elimination with witness reconstruction.
//!
//! Systems mix equalities, weak inequalities, and strict inequalities; all
//! arithmetic is over `BigRational`, so strict constraints are decided
//! exactly rather than by epsilon. Dimensions here are tiny (the ambient
//! lattice rank), so the quadratic blowup of elimination never bites.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rel {
    /// coeffs·x + constant = 0
    Eq,
    /// coeffs·x + constant ≥ 0
    Ge,
    /// coeffs·x + constant > 0
    Gt,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
    pub rel: Rel,
}

impl Constraint {
    pub fn new(rel: Rel, coeffs: Vec<BigRational>, constant: BigRational) -> Self {
        Constraint { coeffs, constant, rel }
    }

    pub fn from_ints(rel: Rel, coeffs: &[BigInt], constant: &BigInt) -> Self {
        Constraint {
            coeffs: coeffs.iter().map(|c| BigRational::from(c.clone())).collect(),
            constant: BigRational::from(constant.clone()),
            rel,
        }
    }

    pub fn satisfied_by(&self, point: &[BigRational]) -> bool {
        assert_eq!(point.len(), self.coeffs.len(), "point/constraint dimension mismatch");
        let mut v = self.constant.clone();
        for (c, x) in self.coeffs.iter().zip(point) {
            v += c * x;
        }
        match self.rel {
            Rel::Eq => v.is_zero(),
            Rel::Ge => !v.is_negative(),
            Rel::Gt => v.is_positive(),
        }
    }

    /// Value of coeffs·x + constant on the first `self.coeffs.len() - 1`
    /// coordinates of `point`, i.e. with the last variable dropped.
    fn partial_value(&self, point: &[BigRational]) -> BigRational {
        let mut v = self.constant.clone();
        for (c, x) in self.coeffs[..self.coeffs.len() - 1].iter().zip(point) {
            v += c * x;
        }
        v
    }
}

/// A rational point satisfying every constraint, or `None` if the system
/// is infeasible. Equalities are eliminated by substitution, inequalities
/// by Fourier–Motzkin combination (strict wins when a strict and a weak
/// bound combine); witnesses are rebuilt variable by variable on the way
/// back up.
pub fn feasible_point(
    n: usize,
    constraints: &[Constraint],
) -> Result<Option<Vec<BigRational>>, Error> {
    for c in constraints {
        if c.coeffs.len() != n {
            return Err(Error::Dimension(format!(
                "constraint has {} coefficients in a {n}-variable system",
                c.coeffs.len()
            )));
        }
    }
    Ok(eliminate(n, constraints.to_vec()))
}

pub fn is_feasible(n: usize, constraints: &[Constraint]) -> Result<bool, Error> {
    Ok(feasible_point(n, constraints)?.is_some())
}

/// Projects the system onto its first `keep` variables: the result is
/// satisfied by exactly the points that extend to a solution of the full
/// system. Used to turn a cone's generator description {x = Σ λᵢ rᵢ, λ ≥ 0}
/// into inequalities on x alone.
pub fn project_to_first(
    n: usize,
    keep: usize,
    constraints: &[Constraint],
) -> Result<Vec<Constraint>, Error> {
    assert!(keep <= n, "cannot keep more variables than exist");
    for c in constraints {
        if c.coeffs.len() != n {
            return Err(Error::Dimension(format!(
                "constraint has {} coefficients in a {n}-variable system",
                c.coeffs.len()
            )));
        }
    }
    let mut system = constraints.to_vec();
    for width in (keep + 1..=n).rev() {
        system = project_one(width, system);
    }
    Ok(system)
}

/// One elimination round: removes the last of `width` variables.
fn project_one(width: usize, constraints: Vec<Constraint>) -> Vec<Constraint> {
    let last = width - 1;
    let mut out: Vec<Constraint> = Vec::new();
    let mut push = |c: Constraint| {
        // Drop derived constraints that say nothing; keep an inconsistent
        // ground fact so infeasibility survives projection.
        if c.coeffs.iter().all(Zero::is_zero) && c.satisfied_by(&vec![BigRational::zero(); c.coeffs.len()]) {
            return;
        }
        let c = normalize(c);
        if !out.contains(&c) {
            out.push(c);
        }
    };

    if let Some(pos) = constraints
        .iter()
        .position(|c| c.rel == Rel::Eq && !c.coeffs[last].is_zero())
    {
        let eq = constraints[pos].clone();
        let pivot = eq.coeffs[last].clone();
        for (i, c) in constraints.iter().enumerate() {
            if i == pos {
                continue;
            }
            let factor = &c.coeffs[last] / &pivot;
            let coeffs = (0..last)
                .map(|j| &c.coeffs[j] - &factor * &eq.coeffs[j])
                .collect();
            let constant = &c.constant - &factor * &eq.constant;
            push(Constraint::new(c.rel, coeffs, constant));
        }
        return out;
    }

    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for c in &constraints {
        let a = &c.coeffs[last];
        if a.is_zero() {
            push(Constraint::new(c.rel, c.coeffs[..last].to_vec(), c.constant.clone()));
        } else if a.is_positive() {
            lower.push(c.clone());
        } else {
            upper.push(c.clone());
        }
    }
    for lo in &lower {
        for up in &upper {
            let a = lo.coeffs[last].clone();
            let b = up.coeffs[last].clone();
            let coeffs = (0..last)
                .map(|j| -&b * &lo.coeffs[j] + &a * &up.coeffs[j])
                .collect();
            let constant = -&b * &lo.constant + &a * &up.constant;
            let rel = if lo.rel == Rel::Gt || up.rel == Rel::Gt {
                Rel::Gt
            } else {
                Rel::Ge
            };
            push(Constraint::new(rel, coeffs, constant));
        }
    }
    out
}

/// Scale so the leading nonzero coefficient has absolute value 1; purely a
/// canonical form so duplicate derived constraints collapse.
fn normalize(c: Constraint) -> Constraint {
    let lead = c.coeffs.iter().find(|x| !x.is_zero()).cloned();
    match lead {
        None => c,
        Some(l) => {
            let s = l.abs();
            Constraint::new(
                c.rel,
                c.coeffs.iter().map(|x| x / &s).collect(),
                c.constant / &s,
            )
        }
    }
}

fn eliminate(n: usize, constraints: Vec<Constraint>) -> Option<Vec<BigRational>> {
    if n == 0 {
        let ok = constraints.iter().all(|c| c.satisfied_by(&[]));
        return ok.then(Vec::new);
    }
    let last = n - 1;

    // Substitution path: an equality pins the last variable to an affine
    // expression in the others.
    if let Some(pos) = constraints
        .iter()
        .position(|c| c.rel == Rel::Eq && !c.coeffs[last].is_zero())
    {
        let eq = constraints[pos].clone();
        let pivot = eq.coeffs[last].clone();
        let mut reduced = Vec::with_capacity(constraints.len() - 1);
        for (i, c) in constraints.iter().enumerate() {
            if i == pos {
                continue;
            }
            let factor = &c.coeffs[last] / &pivot;
            let coeffs = (0..last)
                .map(|j| &c.coeffs[j] - &factor * &eq.coeffs[j])
                .collect();
            let constant = &c.constant - &factor * &eq.constant;
            reduced.push(Constraint::new(c.rel, coeffs, constant));
        }
        let mut point = eliminate(last, reduced)?;
        let mut num = eq.constant.clone();
        for (c, x) in eq.coeffs[..last].iter().zip(&point) {
            num += c * x;
        }
        point.push(-num / pivot);
        return Some(point);
    }

    // Fourier–Motzkin on the inequalities mentioning the last variable.
    let mut lower = Vec::new(); // positive coefficient: last ≥ / > bound
    let mut upper = Vec::new(); // negative coefficient: last ≤ / < bound
    let mut reduced = Vec::new();
    for c in &constraints {
        let a = &c.coeffs[last];
        if a.is_zero() {
            reduced.push(Constraint::new(c.rel, c.coeffs[..last].to_vec(), c.constant.clone()));
        } else if a.is_positive() {
            lower.push(c.clone());
        } else {
            upper.push(c.clone());
        }
    }
    for lo in &lower {
        for up in &upper {
            let a = lo.coeffs[last].clone();
            let b = up.coeffs[last].clone(); // b < 0
            // (-b)·lo + a·up cancels the last variable; both multipliers
            // are positive so the inequality direction is preserved.
            let coeffs = (0..last)
                .map(|j| -&b * &lo.coeffs[j] + &a * &up.coeffs[j])
                .collect();
            let constant = -&b * &lo.constant + &a * &up.constant;
            let rel = if lo.rel == Rel::Gt || up.rel == Rel::Gt {
                Rel::Gt
            } else {
                Rel::Ge
            };
            reduced.push(Constraint::new(rel, coeffs, constant));
        }
    }

    let point = eliminate(last, reduced)?;

    // Reconstruct the last coordinate from the tightest surviving bounds.
    let bound = |c: &Constraint| -c.partial_value(&point) / &c.coeffs[last];
    let mut max_lower: Option<(BigRational, bool)> = None;
    for c in &lower {
        let v = bound(c);
        let strict = c.rel == Rel::Gt;
        max_lower = Some(match max_lower {
            None => (v, strict),
            Some((best, s)) => {
                if v > best {
                    (v, strict)
                } else if v == best {
                    (best, s || strict)
                } else {
                    (best, s)
                }
            }
        });
    }
    let mut min_upper: Option<(BigRational, bool)> = None;
    for c in &upper {
        let v = bound(c);
        let strict = c.rel == Rel::Gt;
        min_upper = Some(match min_upper {
            None => (v, strict),
            Some((best, s)) => {
                if v < best {
                    (v, strict)
                } else if v == best {
                    (best, s || strict)
                } else {
                    (best, s)
                }
            }
        });
    }
    let one = BigRational::one();
    let value = match (max_lower, min_upper) {
        (None, None) => BigRational::zero(),
        (Some((l, strict)), None) => {
            if strict {
                l + one
            } else {
                l
            }
        }
        (None, Some((u, strict))) => {
            if strict {
                u - one
            } else {
                u
            }
        }
        (Some((l, _)), Some((u, _))) => {
            if l < u {
                (l + u) / (BigRational::from(BigInt::from(2)))
            } else {
                // l == u: the combined pair constraint held at `point`, so
                // neither attaining bound is strict.
                l
            }
        }
    };
    let mut point = point;
    point.push(value);
    Some(point)
}
