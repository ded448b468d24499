//! Exact integer linear algebra: Smith normal form, kernels, integer linear
//! solving, cokernels, and homology of two-step complexes of free abelian
//! groups.
//!
//! All arithmetic is arbitrary-precision. The SNF is plain gcd elimination
//! with pivoting on the minimal absolute value (first occurrence wins), so
//! every decomposition — and every basis derived from one — is deterministic
//! for a given input matrix.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Dense arbitrary-precision integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from machine-integer rows; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged row in matrix literal");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    /// Build from rows given as ambient vectors; `cols` fixes the width
    /// even when there are no rows.
    pub fn from_bigint_rows(cols: usize, rows: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zero(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row length mismatch");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    /// Build from columns given as ambient vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zero(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// Entries as machine integers; errors if any entry overflows `i64`.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>, Error> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        i64::try_from(&self[(i, j)]).map_err(|_| {
                            Error::Domain(format!("matrix entry {} exceeds i64", self[(i, j)]))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    #[cfg(test)]
    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    /// row[dst] += f · row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let t = f * &self[(src, j)];
            self[(dst, j)] += t;
        }
    }

    /// col[dst] += f · col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let t = f * &self[(i, src)];
            self[(i, dst)] += t;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// U·A·V = D with U, V unimodular and D diagonal, non-negative, each entry
/// dividing the next.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

/// Smallest-|value| nonzero entry of d[t.., t..]; first occurrence wins.
fn pivot_position(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            if d[(i, j)].is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if d[(i, j)].abs() < d[(bi, bj)].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = pivot_position(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            // Clear the pivot column and row. Truncated division leaves
            // remainders strictly smaller than the pivot in absolute value,
            // so re-pivoting after a residue always makes progress.
            let mut residue = false;
            for i in t + 1..r {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = &d[(i, t)] / &d[(t, t)];
                if !q.is_zero() {
                    let f = -q;
                    d.add_row_multiple(i, t, &f);
                    u.add_row_multiple(i, t, &f);
                }
                if !d[(i, t)].is_zero() {
                    residue = true;
                }
            }
            for j in t + 1..c {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = &d[(t, j)] / &d[(t, t)];
                if !q.is_zero() {
                    let f = -q;
                    d.add_col_multiple(j, t, &f);
                    v.add_col_multiple(j, t, &f);
                }
                if !d[(t, j)].is_zero() {
                    residue = true;
                }
            }
            if residue {
                let (pi, pj) = pivot_position(&d, t).expect("residue entry is nonzero");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Pivot row and column clean. Fold in a row holding an entry the
            // pivot fails to divide; the next clearing pass then shrinks the
            // pivot, which enforces the divisibility chain on termination.
            let mut folded = false;
            'scan: for i in t + 1..r {
                for j in t + 1..c {
                    if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                        let one = BigInt::one();
                        d.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                        folded = true;
                        break 'scan;
                    }
                }
            }
            if !folded {
                break;
            }
        }
        t += 1;
    }
    for i in 0..r.min(c) {
        if d[(i, i)].is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }
    let rank = (0..r.min(c)).take_while(|&i| !d[(i, i)].is_zero()).count();
    SmithDecomposition { d, u, v, rank }
}

/// Saturated basis of {v : A·v = 0}, as matrix columns.
///
/// The basis is the trailing columns of the SNF right transform, hence a
/// direct summand of the ambient lattice; membership of any kernel vector is
/// an integer coordinate solve.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(a);
    let k = a.cols() - s.rank;
    let mut out = IntMatrix::zero(a.cols(), k);
    for jj in 0..k {
        for i in 0..a.cols() {
            out[(i, jj)] = s.v[(i, s.rank + jj)].clone();
        }
    }
    out
}

/// Some x with A·x = b, or None when no integer solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, Error> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "solve_integer: matrix has {} rows, vector has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        if i < s.rank {
            let (q, rem) = ubi.div_rem(&s.d[(i, i)]);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(s.v.mul_vec(&y)))
}

/// Finitely generated abelian group in canonical form Z^rank ⊕ ⊕ᵢ Z/dᵢ.
///
/// Torsion entries are ≥ 2 and form a divisibility chain; equality of values
/// is isomorphism of groups.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinGenAbGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FinGenAbGroup {
    /// Canonicalizes by dropping invariant factors equal to 1. Callers pass
    /// SNF diagonals, so the chain condition is asserted, not repaired.
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Self {
        let torsion: Vec<BigInt> = torsion.into_iter().filter(|d| !d.is_one()).collect();
        for d in &torsion {
            assert!(*d > BigInt::one(), "invariant factor must be ≥ 2, got {d}");
        }
        for w in torsion.windows(2) {
            assert!(
                (&w[1] % &w[0]).is_zero(),
                "invariant factors must form a divisibility chain"
            );
        }
        FinGenAbGroup { rank, torsion }
    }

    pub fn trivial() -> Self {
        Self::new(0, Vec::new())
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for FinGenAbGroup {
    /// "Z^r ⊕ Z/d₁ ⊕ …" with trivial parts omitted; "0" for the trivial group.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Z^rows / column-span(A), read off the SNF diagonal.
pub fn cokernel(a: &IntMatrix) -> FinGenAbGroup {
    let s = smith_normal_form(a);
    let torsion: Vec<BigInt> = (0..s.rank).map(|i| s.d[(i, i)].clone()).collect();
    FinGenAbGroup::new(a.rows() - s.rank, torsion)
}

/// ker(d1)/im(d0) for a complex C⁰ → C¹ → C², retaining enough structure to
/// give canonical coordinates to kernel classes.
#[derive(Clone, Debug)]
pub struct HomologyPresentation {
    kernel: IntMatrix,
    snf: SmithDecomposition,
    group: FinGenAbGroup,
    free_indices: Vec<usize>,
    torsion_indices: Vec<usize>,
}

pub fn homology(d0: &IntMatrix, d1: &IntMatrix) -> Result<FinGenAbGroup, Error> {
    Ok(homology_presentation(d0, d1)?.group().clone())
}

pub fn homology_presentation(
    d0: &IntMatrix,
    d1: &IntMatrix,
) -> Result<HomologyPresentation, Error> {
    if d1.cols() != d0.rows() {
        return Err(Error::Dimension(format!(
            "homology: d1 has {} columns but d0 has {} rows",
            d1.cols(),
            d0.rows()
        )));
    }
    let composite = d1.mul(d0);
    for i in 0..composite.rows() {
        for j in 0..composite.cols() {
            if !composite[(i, j)].is_zero() {
                return Err(Error::NotAComplex {
                    row: i,
                    col: j,
                    value: composite[(i, j)].to_string(),
                });
            }
        }
    }
    let kernel = kernel_basis(d1);
    let k = kernel.cols();
    let mut zmat = IntMatrix::zero(k, d0.cols());
    for j in 0..d0.cols() {
        let x = solve_integer(&kernel, &d0.col(j))?
            .expect("d0 column lies in ker(d1), which the saturated basis spans");
        for i in 0..k {
            zmat[(i, j)] = x[i].clone();
        }
    }
    let snf = smith_normal_form(&zmat);
    let mut free_indices = Vec::new();
    let mut torsion_indices = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..k {
        let di = if i < snf.rank {
            snf.d[(i, i)].clone()
        } else {
            BigInt::zero()
        };
        if di.is_zero() {
            free_indices.push(i);
        } else if !di.is_one() {
            torsion_indices.push(i);
            torsion.push(di);
        }
    }
    let group = FinGenAbGroup::new(free_indices.len(), torsion);
    Ok(HomologyPresentation {
        kernel,
        snf,
        group,
        free_indices,
        torsion_indices,
    })
}

impl HomologyPresentation {
    pub fn group(&self) -> &FinGenAbGroup {
        &self.group
    }

    /// Saturated basis of ker(d1) (columns, C¹ coordinates).
    pub fn kernel(&self) -> &IntMatrix {
        &self.kernel
    }

    /// Coordinates of the class of a C¹ vector: free parts in Z, torsion
    /// parts reduced into [0, dᵢ). None when the vector is not in ker(d1).
    pub fn class_coordinates(
        &self,
        v: &[BigInt],
    ) -> Result<Option<(Vec<BigInt>, Vec<BigInt>)>, Error> {
        let Some(x) = solve_integer(&self.kernel, v)? else {
            return Ok(None);
        };
        let y = self.snf.u.mul_vec(&x);
        let free = self.free_indices.iter().map(|&i| y[i].clone()).collect();
        let torsion = self
            .torsion_indices
            .iter()
            .map(|&i| y[i].mod_floor(&self.snf.d[(i, i)]))
            .collect();
        Ok(Some((free, torsion)))
    }

    /// One C¹ representative per canonical generator, free generators first,
    /// then torsion generators in invariant-factor order.
    pub fn generator_vectors(&self) -> Vec<Vec<BigInt>> {
        let k = self.kernel.cols();
        self.free_indices
            .iter()
            .chain(self.torsion_indices.iter())
            .map(|&i| {
                let mut e = vec![BigInt::zero(); k];
                e[i] = BigInt::one();
                let x = solve_integer(&self.snf.u, &e)
                    .expect("square system")
                    .expect("U is unimodular");
                self.kernel.mul_vec(&x)
            })
            .collect()
    }
}
