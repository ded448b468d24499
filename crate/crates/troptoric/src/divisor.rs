//! Monomial Cartier data: one unit coefficient and one exponent vector
//! per maximal cone, compatible across overlaps. The exponent part of
//! the transition data is a Čech 1-cocycle; its class is the divisor
//! class, and CaCl ≅ Pic is realized by `class_in_pic` one way and
//! `from_cocycle` the other.
//!
//! Coefficients are carried (they make the local data honest elements
//! f_i = a_i·x^{m_i}) but cancel from every transition ratio up to a
//! unit constant, so they never influence classes or principality.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::fan::{Fan, FanFile};
use crate::intlin::{solve_integer, IntMatrix};
use crate::picard::CechComplex;
use crate::semifield::{Semifield, TropRat};
use crate::tropoly::{TropPoly, UnitCertificate};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalDatum {
    pub coeff: TropRat,
    pub exponent: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub struct MonomialCartierDivisor {
    fan: Fan,
    local: Vec<LocalDatum>,
}

/// Free + torsion coordinates in the canonical generator basis of Pic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl DivisorClass {
    pub fn is_zero(&self) -> bool {
        let z = BigInt::from(0);
        self.free.iter().all(|x| x == &z) && self.torsion.iter().all(|x| x == &z)
    }
}

impl MonomialCartierDivisor {
    /// Structural checks only; overlap compatibility is `validate`.
    pub fn new(fan: Fan, local: Vec<LocalDatum>) -> Result<Self, Error> {
        if local.len() != fan.max_cones().len() {
            return Err(Error::InvalidDivisor(format!(
                "{} local data for {} maximal cones",
                local.len(),
                fan.max_cones().len()
            )));
        }
        for (i, d) in local.iter().enumerate() {
            if d.coeff.is_zero() {
                return Err(Error::InvalidDivisor(format!(
                    "coefficient on cone {i} is the zero element, not a unit"
                )));
            }
            if d.exponent.len() != fan.rank() {
                return Err(Error::Dimension(format!(
                    "exponent on cone {i} has length {}, expected {}",
                    d.exponent.len(),
                    fan.rank()
                )));
            }
        }
        Ok(MonomialCartierDivisor { fan, local })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn local(&self) -> &[LocalDatum] {
        &self.local
    }

    fn diff(&self, i: usize, j: usize) -> Vec<BigInt> {
        (0..self.fan.rank())
            .map(|c| &self.local[i].exponent[c] - &self.local[j].exponent[c])
            .collect()
    }

    /// Overlap compatibility: m_i − m_j must be a unit on chart (i,j).
    /// Reports the first violating pair with the obstructing vector.
    pub fn validate(&self, cx: &CechComplex) -> Result<(), Error> {
        for (p, &(i, j)) in cx.pairs().iter().enumerate() {
            let d = self.diff(i, j);
            if solve_integer(cx.basis_pair(p), &d)?.is_none() {
                return Err(Error::InvalidDivisor(format!(
                    "cones {i} and {j} are incompatible: m_{i} − m_{j} = {d:?} \
                     is not a unit on their overlap"
                )));
            }
        }
        Ok(())
    }

    /// Transition cocycle c_ij = m_i − m_j, one ambient vector per pair.
    pub fn cocycle(&self, cx: &CechComplex) -> Result<Vec<Vec<BigInt>>, Error> {
        self.validate(cx)?;
        Ok(cx.pairs().iter().map(|&(i, j)| self.diff(i, j)).collect())
    }

    pub fn class_in_pic(&self, cx: &CechComplex) -> Result<DivisorClass, Error> {
        let (free, torsion) = cx.class_of_cocycle(&self.cocycle(cx)?)?;
        Ok(DivisorClass { free, torsion })
    }

    /// Searches for a global monomial m with m_i − m a unit on every
    /// chart: stack the systems m + B_i·x_i = m_i over all cones into
    /// one integer solve. Returns the witness exponent when principal.
    pub fn is_principal(&self, cx: &CechComplex) -> Result<Option<Vec<BigInt>>, Error> {
        self.validate(cx)?;
        let n = self.fan.rank();
        let cones = self.local.len();
        let charts: Vec<IntMatrix> = (0..cones)
            .map(|i| {
                let c = self.fan.intersection_cone(&[i]).expect("max cone id");
                self.fan.chart_monoid(&c).units_lattice()
            })
            .collect();
        let unit_cols: usize = charts.iter().map(IntMatrix::cols).sum();
        let mut a = IntMatrix::zero(n * cones, n + unit_cols);
        let mut rhs = Vec::with_capacity(n * cones);
        let mut col = n;
        for (i, b) in charts.iter().enumerate() {
            for r in 0..n {
                a[(i * n + r, r)] = BigInt::from(1);
                for c in 0..b.cols() {
                    a[(i * n + r, col + c)] = b[(r, c)].clone();
                }
            }
            col += b.cols();
            rhs.extend(self.local[i].exponent.iter().cloned());
        }
        Ok(solve_integer(&a, &rhs)?.map(|sol| sol[..n].to_vec()))
    }

    /// Componentwise product: coefficients multiply, exponents add.
    pub fn add(&self, other: &MonomialCartierDivisor) -> Result<MonomialCartierDivisor, Error> {
        if self.fan != other.fan {
            return Err(Error::Domain(
                "divisor sum requires both divisors on the same fan".into(),
            ));
        }
        let local = self
            .local
            .iter()
            .zip(&other.local)
            .map(|(a, b)| LocalDatum {
                coeff: a.coeff.mul(&b.coeff),
                exponent: (0..self.fan.rank())
                    .map(|c| &a.exponent[c] + &b.exponent[c])
                    .collect(),
            })
            .collect();
        MonomialCartierDivisor::new(self.fan.clone(), local)
    }

    /// Transition ratio f_i·f_j⁻¹ as a monomial on the overlap chart;
    /// its unit certificate is the compatibility datum made effective.
    pub fn transition_unit(
        &self,
        cx: &CechComplex,
        i: usize,
        j: usize,
    ) -> Result<UnitCertificate<TropRat>, Error> {
        cx.pair_position(i.min(j), i.max(j))
            .ok_or_else(|| Error::Domain(format!("no pair ({i},{j}) in the cover")))?;
        let cone = self
            .fan
            .intersection_cone(&[i.min(j), i.max(j)])
            .expect("pair ids");
        let chart = self.fan.chart_monoid(&cone);
        let ratio_coeff = self.local[i].coeff.mul(&self.local[j].coeff.inv()?);
        let mono = TropPoly::monomial(chart, ratio_coeff, self.diff(i, j))?;
        mono.is_unit().ok_or_else(|| {
            Error::InvalidDivisor(format!(
                "transition of cones {i}, {j} is not a unit on their overlap"
            ))
        })
    }
}

/// Lift of a cocycle to monomial Cartier data: base cone 0 gets m_0 = 0
/// and every other cone m_i = −c_{0i}; the cocycle identity makes all
/// remaining transitions come out right. Coefficients are all one.
pub fn divisor_from_cocycle(
    cx: &CechComplex,
    ambient: &[Vec<BigInt>],
) -> Result<MonomialCartierDivisor, Error> {
    if ambient.len() != cx.pairs().len() {
        return Err(Error::Dimension(format!(
            "{} cocycle values for {} pairs",
            ambient.len(),
            cx.pairs().len()
        )));
    }
    cx.cochain_coords(ambient)?;
    cx.check_cocycle(ambient)?;
    let fan = cx.fan().clone();
    let n = fan.rank();
    let cones = fan.max_cones().len();
    let mut local = Vec::with_capacity(cones);
    local.push(LocalDatum {
        coeff: TropRat::one(),
        exponent: vec![BigInt::from(0); n],
    });
    for i in 1..cones {
        let p = cx.pair_position(0, i).expect("full-simplex nerve");
        local.push(LocalDatum {
            coeff: TropRat::one(),
            exponent: ambient[p].iter().map(|x| -x).collect(),
        });
    }
    let d = MonomialCartierDivisor::new(fan, local)?;
    assert_eq!(
        d.cocycle(cx).expect("lift is compatible by the cocycle identity"),
        ambient,
        "lift must reproduce the cocycle exactly"
    );
    Ok(d)
}

/// On-disk divisor data. The fan reference is optional; when present
/// (inline or a path resolved by the caller) it must match the fan the
/// divisor is interpreted on. Every maximal cone needs exactly one
/// record.
#[derive(Clone, Serialize, Deserialize, Debug)]
#[serde(untagged)]
pub enum FanRef {
    Path(String),
    Inline(FanFile),
}

#[derive(Clone, Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct LocalRecord {
    pub cone: usize,
    pub coeff: String,
    pub exp: Vec<i64>,
}

#[derive(Clone, Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct DivisorFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanRef>,
    pub local_data: Vec<LocalRecord>,
}

impl DivisorFile {
    pub fn from_json_str(s: &str) -> Result<Self, Error> {
        serde_json::from_str(s).map_err(|e| Error::Malformed(format!("divisor file: {e}")))
    }

    /// Interprets the records on `fan`. `resolve` loads a fan referenced
    /// by path; an inline fan is built directly. Either must equal `fan`.
    pub fn build(
        &self,
        fan: &Fan,
        resolve: &mut dyn FnMut(&str) -> Result<Fan, Error>,
    ) -> Result<MonomialCartierDivisor, Error> {
        if let Some(r) = &self.fan {
            let referenced = match r {
                FanRef::Path(p) => resolve(p)?,
                FanRef::Inline(f) => f.build()?,
            };
            if &referenced != fan {
                return Err(Error::InvalidDivisor(
                    "divisor file references a different fan".into(),
                ));
            }
        }
        let cones = fan.max_cones().len();
        let mut local: Vec<Option<LocalDatum>> = vec![None; cones];
        for rec in &self.local_data {
            if rec.cone >= cones {
                return Err(Error::InvalidDivisor(format!(
                    "record for cone {} but the fan has {} maximal cones",
                    rec.cone, cones
                )));
            }
            if local[rec.cone].is_some() {
                return Err(Error::InvalidDivisor(format!(
                    "two records for cone {}",
                    rec.cone
                )));
            }
            local[rec.cone] = Some(LocalDatum {
                coeff: TropRat::parse(&rec.coeff)?,
                exponent: rec.exp.iter().map(|&x| BigInt::from(x)).collect(),
            });
        }
        let local: Vec<LocalDatum> = local
            .into_iter()
            .enumerate()
            .map(|(i, d)| {
                d.ok_or_else(|| Error::InvalidDivisor(format!("no record for cone {i}")))
            })
            .collect::<Result<_, _>>()?;
        MonomialCartierDivisor::new(fan.clone(), local)
    }
}

/// Record form of a divisor, for serialization; exponents must fit i64.
pub fn to_file(d: &MonomialCartierDivisor) -> Result<DivisorFile, Error> {
    let local_data = d
        .local()
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let exp = l
                .exponent
                .iter()
                .map(|x| {
                    i64::try_from(x).map_err(|_| {
                        Error::Domain(format!("exponent {x} does not fit in the file format"))
                    })
                })
                .collect::<Result<Vec<i64>, Error>>()?;
            Ok(LocalRecord {
                cone: i,
                coeff: l.coeff.serialize(),
                exp,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(DivisorFile { fan: None, local_data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::tests::{fan, p1, p112, p1xp1, p2};
    use crate::picard::picard_group;
    use num_integer::Integer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn div(f: &Fan, exps: &[&[i64]]) -> MonomialCartierDivisor {
        let local = exps
            .iter()
            .map(|e| LocalDatum {
                coeff: TropRat::one(),
                exponent: e.iter().map(|&x| b(x)).collect(),
            })
            .collect();
        MonomialCartierDivisor::new(f.clone(), local).unwrap()
    }

    /// Classes agree after reducing torsion coordinates mod the orders.
    fn assert_class_sum(cx: &CechComplex, a: &DivisorClass, b_: &DivisorClass, s: &DivisorClass) {
        let orders = cx.h1().group().torsion().to_vec();
        for (x, (y, z)) in a.free.iter().zip(b_.free.iter().zip(&s.free)) {
            assert_eq!(&(x + y), z);
        }
        for (k, d) in orders.iter().enumerate() {
            assert_eq!((&a.torsion[k] + &b_.torsion[k]).mod_floor(d), s.torsion[k]);
        }
    }

    #[test]
    fn p1_degree_divisor_classes() {
        let f = p1();
        let cx = CechComplex::build(&f);
        let one = div(&f, &[&[0], &[1]]);
        let c = one.cocycle(&cx).unwrap();
        // c_01 = m_0 − m_1 = −1 · generator.
        assert_eq!(c, vec![vec![b(-1)]]);
        let base = one.class_in_pic(&cx).unwrap();
        assert_eq!(base.free[0].magnitude().to_string(), "1");
        for k in -4i64..=4 {
            let d = div(&f, &[&[0], &[k]]);
            let cls = d.class_in_pic(&cx).unwrap();
            assert_eq!(cls.free[0], b(k) * &base.free[0]);
            assert_eq!(d.is_principal(&cx).unwrap().is_some(), k == 0);
        }
    }

    #[test]
    fn product_fan_divisor_classes_form_a_lattice() {
        let f = p1xp1();
        let cx = CechComplex::build(&f);
        let o = |k: i64, l: i64| div(&f, &[&[0, 0], &[l, 0], &[l, k], &[0, k]]);
        let c10 = o(1, 0).class_in_pic(&cx).unwrap();
        let c01 = o(0, 1).class_in_pic(&cx).unwrap();
        let det = &c10.free[0] * &c01.free[1] - &c10.free[1] * &c01.free[0];
        assert_eq!(det.magnitude().to_string(), "1");
        for (k, l) in [(1, 1), (2, -3), (0, 4), (-2, -2)] {
            let cls = o(k, l).class_in_pic(&cx).unwrap();
            assert_eq!(cls.free[0], b(k) * &c10.free[0] + b(l) * &c01.free[0]);
            assert_eq!(cls.free[1], b(k) * &c10.free[1] + b(l) * &c01.free[1]);
            assert_eq!(o(k, l).is_principal(&cx).unwrap().is_some(), (k, l) == (0, 0));
        }
    }

    #[test]
    fn incompatible_data_is_rejected_with_pair_and_vector() {
        let f = p1xp1();
        let cx = CechComplex::build(&f);
        let d = div(&f, &[&[0, 0], &[1, 1], &[0, 0], &[0, 0]]);
        let err = d.validate(&cx).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("cones 0 and 1"), "{msg}");
        assert!(msg.contains("-1"), "{msg}");

        let ok = div(&f, &[&[0, 0], &[1, 0], &[1, 0], &[0, 0]]);
        assert!(ok.validate(&cx).is_ok());
    }

    #[test]
    fn structural_rejections() {
        let f = p1();
        assert!(matches!(
            MonomialCartierDivisor::new(
                f.clone(),
                vec![LocalDatum { coeff: TropRat::one(), exponent: vec![b(0)] }]
            ),
            Err(Error::InvalidDivisor(_))
        ));
        let zero_coeff = vec![
            LocalDatum { coeff: TropRat::Bottom, exponent: vec![b(0)] },
            LocalDatum { coeff: TropRat::one(), exponent: vec![b(0)] },
        ];
        assert!(matches!(
            MonomialCartierDivisor::new(f.clone(), zero_coeff),
            Err(Error::InvalidDivisor(_))
        ));
        let wrong_len = vec![
            LocalDatum { coeff: TropRat::one(), exponent: vec![b(0), b(1)] },
            LocalDatum { coeff: TropRat::one(), exponent: vec![b(0)] },
        ];
        assert!(matches!(
            MonomialCartierDivisor::new(f, wrong_len),
            Err(Error::Dimension(_))
        ));
    }

    /// Random valid divisor: a lifted random cocycle plus a constant
    /// monomial plus random per-chart units. Every valid divisor has
    /// this shape, so the generator covers the whole space.
    fn random_divisor(cx: &CechComplex, rng: &mut ChaCha8Rng) -> MonomialCartierDivisor {
        let f = cx.fan().clone();
        let n = f.rank();
        let kernel = crate::intlin::kernel_basis(cx.d1());
        let in_kernel = kernel.mul_vec(
            &(0..kernel.cols())
                .map(|_| b(rng.random_range(-2..=2)))
                .collect::<Vec<_>>(),
        );
        let ambient = cx.cochain_ambient(&in_kernel);
        let lifted = divisor_from_cocycle(cx, &ambient).unwrap();
        let shift: Vec<BigInt> = (0..n).map(|_| b(rng.random_range(-3..=3))).collect();
        let local = lifted
            .local()
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let c = f.intersection_cone(&[i]).expect("max cone");
                let units = f.chart_monoid(&c).units_lattice();
                let u = units.mul_vec(
                    &(0..units.cols())
                        .map(|_| b(rng.random_range(-2..=2)))
                        .collect::<Vec<_>>(),
                );
                LocalDatum {
                    coeff: TropRat::from_int(rng.random_range(-5..=5)),
                    exponent: (0..n).map(|c| &l.exponent[c] + &shift[c] + &u[c]).collect(),
                }
            })
            .collect();
        MonomialCartierDivisor::new(f, local).unwrap()
    }

    fn bundled_fans() -> Vec<Fan> {
        vec![
            p1(),
            p2(),
            p1xp1(),
            p112(),
            fan(2, &[&[1, 0], &[0, 1], &[-1, 2], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
                .unwrap(),
            fan(2, &[&[1, 0], &[-1, 0], &[0, 1]], &[&[0, 2], &[1, 2]]).unwrap(),
            fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap(),
        ]
    }

    #[test]
    fn cocycle_matches_pairwise_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xd1a0);
        for f in bundled_fans() {
            let cx = CechComplex::build(&f);
            for _ in 0..10 {
                let d = random_divisor(&cx, &mut rng);
                let c = d.cocycle(&cx).unwrap();
                for (p, &(i, j)) in cx.pairs().iter().enumerate() {
                    let expect: Vec<BigInt> = (0..f.rank())
                        .map(|k| &d.local()[i].exponent[k] - &d.local()[j].exponent[k])
                        .collect();
                    assert_eq!(c[p], expect);
                }
            }
        }
    }

    #[test]
    fn class_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xd1a1);
        for f in bundled_fans() {
            let cx = CechComplex::build(&f);
            for _ in 0..8 {
                let d = random_divisor(&cx, &mut rng);
                let e = random_divisor(&cx, &mut rng);
                let sum = d.add(&e).unwrap();
                assert_class_sum(
                    &cx,
                    &d.class_in_pic(&cx).unwrap(),
                    &e.class_in_pic(&cx).unwrap(),
                    &sum.class_in_pic(&cx).unwrap(),
                );
            }
        }
    }

    #[test]
    fn principality_is_the_zero_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xd1a2);
        for f in bundled_fans() {
            let cx = CechComplex::build(&f);
            for _ in 0..12 {
                let d = random_divisor(&cx, &mut rng);
                let cls = d.class_in_pic(&cx).unwrap();
                match d.is_principal(&cx).unwrap() {
                    Some(m) => {
                        assert!(cls.is_zero(), "witness but nonzero class");
                        // The witness really trivializes every chart.
                        for (i, l) in d.local().iter().enumerate() {
                            let c = f.intersection_cone(&[i]).unwrap();
                            let units = f.chart_monoid(&c).units_lattice();
                            let delta: Vec<BigInt> =
                                (0..f.rank()).map(|k| &l.exponent[k] - &m[k]).collect();
                            assert!(solve_integer(&units, &delta).unwrap().is_some());
                        }
                    }
                    None => assert!(!cls.is_zero(), "zero class but no witness"),
                }
            }
        }
    }

    #[test]
    fn lift_round_trips_random_cocycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xd1a3);
        for f in bundled_fans() {
            let cx = CechComplex::build(&f);
            let kernel = crate::intlin::kernel_basis(cx.d1());
            for _ in 0..10 {
                let coords = kernel.mul_vec(
                    &(0..kernel.cols())
                        .map(|_| b(rng.random_range(-4..=4)))
                        .collect::<Vec<_>>(),
                );
                let ambient = cx.cochain_ambient(&coords);
                let lifted = divisor_from_cocycle(&cx, &ambient).unwrap();
                assert_eq!(lifted.cocycle(&cx).unwrap(), ambient);
                for l in lifted.local() {
                    assert_eq!(l.coeff, TropRat::one());
                }
            }
        }
    }

    #[test]
    fn lift_hits_every_generator_class() {
        for f in bundled_fans() {
            let cx = CechComplex::build(&f);
            for (g, amb) in cx.generator_cocycles().iter().enumerate() {
                let lifted = divisor_from_cocycle(&cx, amb).unwrap();
                let cls = lifted.class_in_pic(&cx).unwrap();
                let coords: Vec<&BigInt> = cls.free.iter().chain(&cls.torsion).collect();
                for (i, x) in coords.iter().enumerate() {
                    assert_eq!(**x, if i == g { b(1) } else { b(0) });
                }
            }
        }
    }

    #[test]
    fn lift_rejects_non_cocycles() {
        let f = p2();
        let cx = CechComplex::build(&f);
        let v01 = cx.basis_pair(0).col(0);
        let zero = vec![b(0), b(0)];
        let err = divisor_from_cocycle(&cx, &[v01, zero.clone(), zero]).unwrap_err();
        assert!(matches!(err, Error::NotACocycle(_)));
    }

    #[test]
    fn transition_units_certify_compatibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xd1a4);
        for f in bundled_fans() {
            let cx = CechComplex::build(&f);
            for _ in 0..6 {
                let d = random_divisor(&cx, &mut rng);
                for &(i, j) in cx.pairs() {
                    let cert = d.transition_unit(&cx, i, j).unwrap();
                    assert_eq!(cert.exponent, d.diff(i, j));
                    let back = d.transition_unit(&cx, j, i).unwrap();
                    assert_eq!(back.coeff, cert.coeff.inv().unwrap());
                }
            }
        }
    }

    #[test]
    fn coefficients_never_affect_the_class() {
        let f = p1xp1();
        let cx = CechComplex::build(&f);
        let exps: &[&[i64]] = &[&[0, 0], &[2, 0], &[2, 3], &[0, 3]];
        let plain = div(&f, exps);
        let local = exps
            .iter()
            .enumerate()
            .map(|(i, e)| LocalDatum {
                coeff: TropRat::from_int(i as i64 - 7),
                exponent: e.iter().map(|&x| b(x)).collect(),
            })
            .collect();
        let decorated = MonomialCartierDivisor::new(f.clone(), local).unwrap();
        assert_eq!(
            plain.class_in_pic(&cx).unwrap(),
            decorated.class_in_pic(&cx).unwrap()
        );
    }

    #[test]
    fn divisor_file_round_trip_and_rejections() {
        let f = p1xp1();
        let cx = CechComplex::build(&f);
        let json = r#"{
            "fan": {"rank": 2,
                    "rays": [[1,0],[0,1],[-1,0],[0,-1]],
                    "max_cones": [[0,1],[1,2],[2,3],[3,0]]},
            "local_data": [
                {"cone": 0, "coeff": "0", "exp": [0, 0]},
                {"cone": 1, "coeff": "1/2", "exp": [1, 0]},
                {"cone": 2, "coeff": "-3", "exp": [1, 2]},
                {"cone": 3, "coeff": "0", "exp": [0, 2]}
            ]
        }"#;
        let file = DivisorFile::from_json_str(json).unwrap();
        let mut no_resolve = |_: &str| -> Result<Fan, Error> {
            panic!("inline fan should not need resolution")
        };
        let d = file.build(&f, &mut no_resolve).unwrap();
        assert!(d.validate(&cx).is_ok());
        assert_eq!(d.local()[1].exponent, vec![b(1), b(0)]);

        let back = to_file(&d);
        let reparsed = DivisorFile::from_json_str(
            &serde_json::to_string(&back.unwrap()).unwrap(),
        )
        .unwrap();
        let d2 = reparsed.build(&f, &mut no_resolve).unwrap();
        assert_eq!(d2.local(), d.local());

        // Wrong fan inline.
        let other = r#"{
            "fan": {"rank": 1, "rays": [[1],[-1]], "max_cones": [[0],[1]]},
            "local_data": [
                {"cone": 0, "coeff": "0", "exp": [0, 0]},
                {"cone": 1, "coeff": "0", "exp": [0, 0]},
                {"cone": 2, "coeff": "0", "exp": [0, 0]},
                {"cone": 3, "coeff": "0", "exp": [0, 0]}
            ]
        }"#;
        let file = DivisorFile::from_json_str(other).unwrap();
        assert!(matches!(
            file.build(&f, &mut no_resolve),
            Err(Error::InvalidDivisor(_))
        ));

        // Missing and duplicate cones.
        let missing = r#"{"local_data": [{"cone": 0, "coeff": "0", "exp": [0, 0]}]}"#;
        let file = DivisorFile::from_json_str(missing).unwrap();
        assert!(matches!(
            file.build(&f, &mut no_resolve),
            Err(Error::InvalidDivisor(_))
        ));
        let dup = r#"{"local_data": [
            {"cone": 0, "coeff": "0", "exp": [0, 0]},
            {"cone": 0, "coeff": "0", "exp": [0, 0]},
            {"cone": 1, "coeff": "0", "exp": [0, 0]},
            {"cone": 2, "coeff": "0", "exp": [0, 0]}
        ]}"#;
        let file = DivisorFile::from_json_str(dup).unwrap();
        assert!(matches!(
            file.build(&f, &mut no_resolve),
            Err(Error::InvalidDivisor(_))
        ));

        // Unparseable coefficient is malformed input.
        let bad = r#"{"local_data": [
            {"cone": 0, "coeff": "x", "exp": [0, 0]},
            {"cone": 1, "coeff": "0", "exp": [0, 0]},
            {"cone": 2, "coeff": "0", "exp": [0, 0]},
            {"cone": 3, "coeff": "0", "exp": [0, 0]}
        ]}"#;
        let file = DivisorFile::from_json_str(bad).unwrap();
        assert!(matches!(
            file.build(&f, &mut no_resolve),
            Err(Error::Malformed(_))
        ));

        // Path references go through the resolver.
        let by_path = r#"{"fan": "fans/p1xp1.json",
                          "local_data": [
                            {"cone": 0, "coeff": "0", "exp": [0, 0]},
                            {"cone": 1, "coeff": "0", "exp": [0, 0]},
                            {"cone": 2, "coeff": "0", "exp": [0, 0]},
                            {"cone": 3, "coeff": "0", "exp": [0, 0]}
                          ]}"#;
        let file = DivisorFile::from_json_str(by_path).unwrap();
        let mut resolve = |p: &str| -> Result<Fan, Error> {
            assert_eq!(p, "fans/p1xp1.json");
            Ok(p1xp1())
        };
        assert!(file.build(&f, &mut resolve).is_ok());
    }

    #[test]
    fn single_chart_divisors_are_always_principal() {
        let f = fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap();
        let cx = CechComplex::build(&f);
        assert!(picard_group(&f).is_trivial());
        for e in [[0, 0], [3, -1], [-2, 5]] {
            let d = div(&f, &[&e]);
            let m = d.is_principal(&cx).unwrap().expect("trivial Pic");
            assert_eq!(m, e.iter().map(|&x| b(x)).collect::<Vec<_>>().as_slice());
        }
    }
}
