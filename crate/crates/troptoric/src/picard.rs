//! The Čech engine: C⁰ → C¹ → C² of chart unit-group lattices over the
//! maximal-cone cover, with H¹ = Pic and H⁰ = global units.
//!
//! Charts are indexed by singletons, pairs, and triples of maximal cones
//! (the nerve is a full simplex — every intersection contains the torus).
//! Each chart contributes the units lattice of its intersection cone;
//! differentials alternate inclusion signs, d(c)_{i…k} = Σ (−1)^m with
//! the m-th index omitted. Inclusions are integral because the lattice
//! bases are saturated, so every block is produced by solve_integer.
//!
//! The non-finitely-generated constant factor K^× is never computed with:
//! the full-simplex nerve makes the constant part exact in degree one, so
//! H¹ of the lattice complex already is Pic. `augmented_picard_group`
//! certifies that splitting with a finitely generated stand-in.

use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::Serialize;

use crate::fan::{ConeRef, Fan};
use crate::intlin::{
    homology_presentation, kernel_basis, solve_integer, FinGenAbGroup, HomologyPresentation,
    IntMatrix,
};
use crate::Error;

#[derive(Clone, Debug)]
pub struct CechComplex {
    fan: Fan,
    pairs: Vec<(usize, usize)>,
    triples: Vec<(usize, usize, usize)>,
    basis_single: Vec<IntMatrix>,
    basis_pair: Vec<IntMatrix>,
    basis_triple: Vec<IntMatrix>,
    d0: IntMatrix,
    d1: IntMatrix,
    h1: OnceLock<HomologyPresentation>,
}

/// Column-offset table for a list of per-chart ranks.
fn offsets(ranks: &[usize]) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(ranks.len());
    let mut total = 0;
    for &r in ranks {
        offs.push(total);
        total += r;
    }
    (offs, total)
}

/// Coordinates of each column of `sub` in the basis `sup`; solvable
/// whenever span(sub) ⊆ span(sup) and `sup` is saturated.
fn inclusion_matrix(sup: &IntMatrix, sub: &IntMatrix) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = (0..sub.cols())
        .map(|j| {
            solve_integer(sup, &sub.col(j))
                .expect("ambient ranks agree")
                .expect("saturated superlattice contains the sublattice")
        })
        .collect();
    IntMatrix::from_cols(sup.cols(), &cols)
}

/// Builds the two differentials for any assignment of lattices to the
/// simplices of the nerve. Asserts d1·d0 = 0.
fn assemble(
    singles: &[IntMatrix],
    pairs: &[(usize, usize, &IntMatrix)],
    triples: &[(usize, usize, usize, &IntMatrix)],
) -> (IntMatrix, IntMatrix) {
    let (soffs, c0) = offsets(&singles.iter().map(IntMatrix::cols).collect::<Vec<_>>());
    let (poffs, c1) = offsets(&pairs.iter().map(|p| p.2.cols()).collect::<Vec<_>>());
    let (toffs, c2) = offsets(&triples.iter().map(|t| t.3.cols()).collect::<Vec<_>>());

    let mut d0 = IntMatrix::zero(c1, c0);
    for (p, &(i, j, lattice)) in pairs.iter().enumerate() {
        // (d0 f)_{ij} = f_j − f_i.
        for (s, sign) in [(i, -1), (j, 1)] {
            let inc = inclusion_matrix(lattice, &singles[s]);
            for r in 0..inc.rows() {
                for c in 0..inc.cols() {
                    d0[(poffs[p] + r, soffs[s] + c)] = BigInt::from(sign) * &inc[(r, c)];
                }
            }
        }
    }

    let mut d1 = IntMatrix::zero(c2, c1);
    let pair_pos = |i: usize, j: usize| {
        pairs
            .iter()
            .position(|&(a, b, _)| (a, b) == (i, j))
            .expect("full-simplex nerve contains every pair")
    };
    for (t, &(i, j, k, lattice)) in triples.iter().enumerate() {
        // (d1 c)_{ijk} = c_jk − c_ik + c_ij.
        for ((a, b), sign) in [((j, k), 1), ((i, k), -1), ((i, j), 1)] {
            let p = pair_pos(a, b);
            let inc = inclusion_matrix(lattice, pairs[p].2);
            for r in 0..inc.rows() {
                for c in 0..inc.cols() {
                    d1[(toffs[t] + r, poffs[p] + c)] =
                        BigInt::from(sign) * &inc[(r, c)] + &d1[(toffs[t] + r, poffs[p] + c)];
                }
            }
        }
    }

    assert!(d1.mul(&d0).is_zero(), "Čech differentials fail d1·d0 = 0");
    (d0, d1)
}

impl CechComplex {
    pub fn build(fan: &Fan) -> CechComplex {
        let m = fan.max_cones().len();
        let chart = |ids: &[usize]| {
            let c = fan.intersection_cone(ids).expect("ids enumerate max cones");
            fan.chart_monoid(&c).units_lattice()
        };

        let basis_single: Vec<IntMatrix> = (0..m).map(|i| chart(&[i])).collect();
        let mut pairs = Vec::new();
        let mut basis_pair = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                pairs.push((i, j));
                basis_pair.push(chart(&[i, j]));
            }
        }
        let mut triples = Vec::new();
        let mut basis_triple = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    triples.push((i, j, k));
                    basis_triple.push(chart(&[i, j, k]));
                }
            }
        }

        let pair_refs: Vec<(usize, usize, &IntMatrix)> = pairs
            .iter()
            .zip(&basis_pair)
            .map(|(&(i, j), b)| (i, j, b))
            .collect();
        let triple_refs: Vec<(usize, usize, usize, &IntMatrix)> = triples
            .iter()
            .zip(&basis_triple)
            .map(|(&(i, j, k), b)| (i, j, k, b))
            .collect();
        let (d0, d1) = assemble(&basis_single, &pair_refs, &triple_refs);

        CechComplex {
            fan: fan.clone(),
            pairs,
            triples,
            basis_single,
            basis_pair,
            basis_triple,
            d0,
            d1,
            h1: OnceLock::new(),
        }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn triples(&self) -> &[(usize, usize, usize)] {
        &self.triples
    }

    pub fn d0(&self) -> &IntMatrix {
        &self.d0
    }

    pub fn d1(&self) -> &IntMatrix {
        &self.d1
    }

    pub fn c0_rank(&self) -> usize {
        self.d0.cols()
    }

    pub fn c1_rank(&self) -> usize {
        self.d0.rows()
    }

    pub fn c2_rank(&self) -> usize {
        self.d1.rows()
    }

    pub fn basis_pair(&self, p: usize) -> &IntMatrix {
        &self.basis_pair[p]
    }

    pub fn pair_position(&self, i: usize, j: usize) -> Option<usize> {
        self.pairs.iter().position(|&(a, b)| (a, b) == (i, j))
    }

    pub fn h1(&self) -> &HomologyPresentation {
        self.h1.get_or_init(|| {
            homology_presentation(&self.d0, &self.d1).expect("assembled complex is a complex")
        })
    }

    /// Packs one ambient vector per pair into C¹ coordinates; fails with
    /// the offending pair when a value is not a unit on its overlap.
    pub fn cochain_coords(&self, ambient: &[Vec<BigInt>]) -> Result<Vec<BigInt>, Error> {
        assert_eq!(ambient.len(), self.pairs.len(), "one value per pair required");
        let mut coords = Vec::with_capacity(self.c1_rank());
        for (p, value) in ambient.iter().enumerate() {
            let (i, j) = self.pairs[p];
            if value.len() != self.fan.rank() {
                return Err(Error::Dimension(format!(
                    "cochain value on pair ({i},{j}) has length {}, expected {}",
                    value.len(),
                    self.fan.rank()
                )));
            }
            match solve_integer(&self.basis_pair[p], value).expect("ambient rank checked") {
                Some(c) => coords.extend(c),
                None => {
                    return Err(Error::NotACocycle(format!(
                        "value {value:?} on pair ({i},{j}) is not in the overlap's unit lattice"
                    )))
                }
            }
        }
        Ok(coords)
    }

    /// Unpacks C¹ coordinates to one ambient vector per pair.
    pub fn cochain_ambient(&self, coords: &[BigInt]) -> Vec<Vec<BigInt>> {
        assert_eq!(coords.len(), self.c1_rank(), "C¹ coordinate length");
        let mut out = Vec::with_capacity(self.pairs.len());
        let mut at = 0;
        for b in &self.basis_pair {
            let block = &coords[at..at + b.cols()];
            at += b.cols();
            out.push(b.mul_vec(block));
        }
        out
    }

    /// Checks the cocycle identity on every triple of the ambient data;
    /// reports the first violating triple.
    pub fn check_cocycle(&self, ambient: &[Vec<BigInt>]) -> Result<(), Error> {
        assert_eq!(ambient.len(), self.pairs.len(), "one value per pair required");
        for &(i, j, k) in &self.triples {
            let jk = &ambient[self.pair_position(j, k).expect("pair")];
            let ik = &ambient[self.pair_position(i, k).expect("pair")];
            let ij = &ambient[self.pair_position(i, j).expect("pair")];
            let sum: Vec<BigInt> = (0..self.fan.rank())
                .map(|c| &jk[c] - &ik[c] + &ij[c])
                .collect();
            if sum.iter().any(|x| x != &BigInt::from(0)) {
                return Err(Error::NotACocycle(format!(
                    "violated on triple ({i},{j},{k}): c_{j}{k} − c_{i}{k} + c_{i}{j} = {sum:?}"
                )));
            }
        }
        Ok(())
    }

    /// Class of a cocycle (one ambient value per pair) in the canonical
    /// generator basis of H¹: free coordinates, then torsion coordinates.
    pub fn class_of_cocycle(
        &self,
        ambient: &[Vec<BigInt>],
    ) -> Result<(Vec<BigInt>, Vec<BigInt>), Error> {
        let coords = self.cochain_coords(ambient)?;
        self.check_cocycle(ambient)?;
        let h1 = self.h1();
        let class = h1
            .class_coordinates(&coords)
            .expect("C¹ coordinate length matches")
            .expect("cocycle identity implies kernel membership");
        Ok(class)
    }

    /// Ambient per-pair form of each canonical H¹ generator (free ones
    /// first, then torsion).
    pub fn generator_cocycles(&self) -> Vec<Vec<Vec<BigInt>>> {
        self.h1()
            .generator_vectors()
            .iter()
            .map(|v| self.cochain_ambient(v))
            .collect()
    }
}

pub fn picard_group(fan: &Fan) -> FinGenAbGroup {
    CechComplex::build(fan).h1().group().clone()
}

/// Lattice part of H⁰ = ker d0 (the global monomial units); the constant
/// K^× factor rides along symbolically and is never part of the group.
pub fn global_units(fan: &Fan) -> FinGenAbGroup {
    let cx = CechComplex::build(fan);
    FinGenAbGroup::free(kernel_basis(&cx.d0).cols())
}

pub fn class_of_cocycle(
    fan: &Fan,
    ambient: &[Vec<BigInt>],
) -> Result<(Vec<BigInt>, Vec<BigInt>), Error> {
    CechComplex::build(fan).class_of_cocycle(ambient)
}

/// Rebuilds the complex with every chart group augmented by one shared Z
/// summand with identity inclusions — a finitely generated stand-in for
/// the constant K^× factor — and returns its H¹. The full-simplex nerve
/// makes the constant part exact in degree one, so this must equal
/// `picard_group`.
pub fn augmented_picard_group(fan: &Fan) -> FinGenAbGroup {
    let cx = CechComplex::build(fan);
    let pad = |m: &IntMatrix| {
        // Same lattice inside Z^{n+1}, plus the new axis as an extra
        // basis column: identity inclusions fall out of the same solver.
        let mut out = IntMatrix::zero(m.rows() + 1, m.cols() + 1);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(i, j)] = m[(i, j)].clone();
            }
        }
        out[(m.rows(), m.cols())] = BigInt::from(1);
        out
    };
    let singles: Vec<IntMatrix> = cx.basis_single.iter().map(&pad).collect();
    let pairs_b: Vec<IntMatrix> = cx.basis_pair.iter().map(&pad).collect();
    let triples_b: Vec<IntMatrix> = cx.basis_triple.iter().map(&pad).collect();
    let pair_refs: Vec<(usize, usize, &IntMatrix)> = cx
        .pairs
        .iter()
        .zip(&pairs_b)
        .map(|(&(i, j), b)| (i, j, b))
        .collect();
    let triple_refs: Vec<(usize, usize, usize, &IntMatrix)> = cx
        .triples
        .iter()
        .zip(&triples_b)
        .map(|(&(i, j, k), b)| (i, j, k, b))
        .collect();
    let (d0, d1) = assemble(&singles, &pair_refs, &triple_refs);
    homology_presentation(&d0, &d1)
        .expect("augmented complex is a complex")
        .group()
        .clone()
}

/// Stable serialization of the complex for external verification.
#[derive(Serialize, Debug)]
pub struct ComplexDump {
    pub rank: usize,
    pub max_cones: Vec<Vec<usize>>,
    pub singles: Vec<ChartDump>,
    pub pairs: Vec<ChartDump>,
    pub triples: Vec<ChartDump>,
    pub d0: MatrixDump,
    pub d1: MatrixDump,
}

#[derive(Serialize, Debug)]
pub struct ChartDump {
    /// Maximal cones whose intersection this chart is.
    pub cones: Vec<usize>,
    /// Ray indices spanning the intersection cone.
    pub rays: Vec<usize>,
    /// Units-lattice basis, one ambient column vector per generator.
    pub basis: Vec<Vec<i64>>,
}

#[derive(Serialize, Debug)]
pub struct MatrixDump {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<i64>>,
}

fn matrix_dump(m: &IntMatrix) -> Result<MatrixDump, Error> {
    Ok(MatrixDump { rows: m.rows(), cols: m.cols(), entries: m.to_i64_rows()? })
}

fn basis_columns(m: &IntMatrix) -> Result<Vec<Vec<i64>>, Error> {
    let rows = m.to_i64_rows()?;
    Ok((0..m.cols())
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect())
}

impl CechComplex {
    pub fn dump(&self) -> Result<ComplexDump, Error> {
        let chart_dump = |ids: &[usize], basis: &IntMatrix| -> Result<ChartDump, Error> {
            let c: ConeRef = self.fan.intersection_cone(ids).expect("chart ids");
            Ok(ChartDump {
                cones: ids.to_vec(),
                rays: c.ray_indices,
                basis: basis_columns(basis)?,
            })
        };
        let mut singles = Vec::new();
        for (i, b) in self.basis_single.iter().enumerate() {
            singles.push(chart_dump(&[i], b)?);
        }
        let mut pairs = Vec::new();
        for (&(i, j), b) in self.pairs.iter().zip(&self.basis_pair) {
            pairs.push(chart_dump(&[i, j], b)?);
        }
        let mut triples = Vec::new();
        for (&(i, j, k), b) in self.triples.iter().zip(&self.basis_triple) {
            triples.push(chart_dump(&[i, j, k], b)?);
        }
        Ok(ComplexDump {
            rank: self.fan.rank(),
            max_cones: self.fan.max_cones().to_vec(),
            singles,
            pairs,
            triples,
            d0: matrix_dump(&self.d0)?,
            d1: matrix_dump(&self.d1)?,
        })
    }
}
