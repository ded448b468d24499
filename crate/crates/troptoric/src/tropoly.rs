//! The monoid semiring K[M] on a chart: canonical forms, the length
//! function φ, the unit criterion, and reduction to the semiring of
//! tropical functions.
//!
//! A polynomial is a finite map monomial → nonzero coefficient with every
//! monomial a member of the chart monoid; keeping that form canonical is
//! what makes φ well defined (it is the minimal length of any expression
//! for the element). The formal semiring is the default carrier —
//! reduction to functions is a separate, explicitly-invoked quotient, and
//! the two differ: the formal model is not multiplicatively cancellative,
//! the reduced one is.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::feasibility::{is_feasible, Constraint, Rel};
use crate::intlin::solve_integer;
use crate::semifield::{Semifield, TropRat};
use crate::toricmonoid::ToricMonoid;
use crate::Error;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TropPoly<K: Semifield> {
    chart: ToricMonoid,
    // Lex order on exponent vectors; this is the serialization order.
    terms: BTreeMap<Vec<BigInt>, K>,
}

/// Witness that a polynomial is a unit: the single term a·x^m with a ≠ 0
/// and m invertible in the chart. The inverse is a^{-1}·x^{-m}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnitCertificate<K: Semifield> {
    pub coeff: K,
    pub exponent: Vec<BigInt>,
}

impl<K: Semifield> UnitCertificate<K> {
    pub fn inverse(&self) -> UnitCertificate<K> {
        UnitCertificate {
            coeff: self.coeff.inv().expect("certificate coefficient is nonzero"),
            exponent: self.exponent.iter().map(|x| -x).collect(),
        }
    }
}

impl<K: Semifield> TropPoly<K> {
    pub fn zero(chart: ToricMonoid) -> Self {
        TropPoly { chart, terms: BTreeMap::new() }
    }

    /// Canonicalizes: colliding monomials combine by ⊕, zero coefficients
    /// drop out, and every monomial must lie in the chart.
    pub fn new(
        chart: ToricMonoid,
        terms: impl IntoIterator<Item = (Vec<BigInt>, K)>,
    ) -> Result<Self, Error> {
        let mut map: BTreeMap<Vec<BigInt>, K> = BTreeMap::new();
        for (exp, coeff) in terms {
            if exp.len() != chart.rank() {
                return Err(Error::Dimension(format!(
                    "exponent {exp:?} in a rank-{} chart",
                    chart.rank()
                )));
            }
            if !chart.contains(&exp) {
                return Err(Error::ChartMismatch(format!(
                    "monomial {exp:?} is not in the chart monoid"
                )));
            }
            match map.remove(&exp) {
                None => {
                    map.insert(exp, coeff);
                }
                Some(old) => {
                    map.insert(exp, old.add(&coeff));
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(TropPoly { chart, terms: map })
    }

    pub fn monomial(chart: ToricMonoid, coeff: K, exp: Vec<BigInt>) -> Result<Self, Error> {
        Self::new(chart, [(exp, coeff)])
    }

    pub fn one(chart: ToricMonoid) -> Self {
        let exp = vec![BigInt::from(0); chart.rank()];
        Self::monomial(chart, K::one(), exp).expect("origin lies in every chart")
    }

    pub fn chart(&self) -> &ToricMonoid {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<BigInt>, &K)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Minimal expression length: 0 for the zero element, else the term
    /// count of the canonical form.
    pub fn phi(&self) -> usize {
        self.terms.len()
    }

    fn same_chart(&self, other: &Self) -> Result<(), Error> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch(
                "operands live on different charts".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.same_chart(other)?;
        let mut terms = self.terms.clone();
        for (exp, coeff) in &other.terms {
            match terms.remove(exp) {
                None => {
                    terms.insert(exp.clone(), coeff.clone());
                }
                Some(old) => {
                    terms.insert(exp.clone(), old.add(coeff));
                }
            }
        }
        let mut out = TropPoly { chart: self.chart.clone(), terms };
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Convolution product; colliding monomials combine by ⊕.
    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.same_chart(other)?;
        let mut terms: BTreeMap<Vec<BigInt>, K> = BTreeMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let exp: Vec<BigInt> = u.iter().zip(v).map(|(x, y)| x + y).collect();
                let prod = a.mul(b);
                match terms.remove(&exp) {
                    None => {
                        terms.insert(exp, prod);
                    }
                    Some(old) => {
                        terms.insert(exp, old.add(&prod));
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(TropPoly { chart: self.chart.clone(), terms })
    }

    /// K[M]^× ≅ K^× × M^×: a unit is a single term whose exponent is
    /// invertible in the chart (an integer combination of the units
    /// lattice), with any nonzero coefficient.
    pub fn is_unit(&self) -> Option<UnitCertificate<K>> {
        if self.terms.len() != 1 {
            return None;
        }
        let (exp, coeff) = self.terms.iter().next().expect("one term");
        let lattice = self.chart.units_lattice();
        let sol = solve_integer(&lattice, exp).expect("lattice lives in the chart rank");
        sol.is_some().then(|| UnitCertificate {
            coeff: coeff.clone(),
            exponent: exp.clone(),
        })
    }
}

impl TropPoly<TropRat> {
    /// Value of the polynomial as a max-plus function at a rational point
    /// of the dense torus.
    pub fn eval(&self, w: &[BigRational]) -> TropRat {
        assert_eq!(w.len(), self.chart.rank(), "evaluation point of wrong rank");
        let mut acc = TropRat::zero();
        for (u, c) in &self.terms {
            let mut lin = BigRational::from(BigInt::from(0));
            for (e, x) in u.iter().zip(w) {
                lin += BigRational::from(e.clone()) * x;
            }
            let term = c.mul(&TropRat::Finite(lin));
            acc = acc.add(&term);
        }
        acc
    }

    /// The canonical representative of the polynomial as a function: a
    /// term survives iff it strictly dominates every other term somewhere,
    /// decided by exact strict feasibility. Two polynomials define the
    /// same function exactly when their reductions are identical.
    pub fn reduce_to_function(&self) -> TropPoly<TropRat> {
        if self.terms.len() <= 1 {
            return self.clone();
        }
        let n = self.chart.rank();
        let entries: Vec<(&Vec<BigInt>, &TropRat)> = self.terms.iter().collect();
        let mut kept = BTreeMap::new();
        for (i, (u, c)) in entries.iter().enumerate() {
            let ci = c.value().expect("canonical form has no ⊥ coefficients");
            let mut cs = Vec::with_capacity(entries.len() - 1);
            for (j, (v, d)) in entries.iter().enumerate() {
                if i == j {
                    continue;
                }
                let dj = d.value().expect("canonical form has no ⊥ coefficients");
                let coeffs = u
                    .iter()
                    .zip(v.iter())
                    .map(|(a, b)| BigRational::from(a - b))
                    .collect();
                cs.push(Constraint::new(Rel::Gt, coeffs, ci - dj));
            }
            if is_feasible(n, &cs).expect("system in chart rank") {
                kept.insert((*u).clone(), (*c).clone());
            }
        }
        TropPoly { chart: self.chart.clone(), terms: kept }
    }
}

impl<K: Semifield> fmt::Display for TropPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "-inf");
        }
        let mut first = true;
        for (exp, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if exp.iter().all(|e| e == &BigInt::from(0)) {
                write!(f, "{coeff}")?;
            } else {
                let exps: Vec<String> = exp.iter().map(BigInt::to_string).collect();
                write!(f, "{coeff}*x^({})", exps.join(","))?;
            }
        }
        Ok(())
    }
}

/// One record of a polynomial file: {"coeff": "p/q" | "-inf", "exp": [..]}.
#[derive(Clone, Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub coeff: String,
    pub exp: Vec<i64>,
}

pub fn poly_from_records(
    chart: ToricMonoid,
    records: &[TermRecord],
) -> Result<TropPoly<TropRat>, Error> {
    let mut terms = Vec::with_capacity(records.len());
    for r in records {
        let coeff = TropRat::parse(&r.coeff)?;
        let exp = r.exp.iter().map(|&x| BigInt::from(x)).collect();
        terms.push((exp, coeff));
    }
    TropPoly::new(chart, terms)
}

pub fn poly_to_records(p: &TropPoly<TropRat>) -> Result<Vec<TermRecord>, Error> {
    p.terms()
        .map(|(exp, coeff)| {
            let exp = exp
                .iter()
                .map(|x| {
                    i64::try_from(x.clone())
                        .map_err(|_| Error::Domain(format!("exponent {x} overflows records")))
                })
                .collect::<Result<Vec<i64>, Error>>()?;
            Ok(TermRecord { coeff: coeff.serialize(), exp })
        })
        .collect()
}
