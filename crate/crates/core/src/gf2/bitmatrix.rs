use std::fmt;
use std::str::FromStr;

use super::bitvec::{BitVector, MAX_BITS};
use crate::error::{Error, Result};

/// A dense matrix over F2 with rows packed into `u128` words.
///
/// Vectors act on the left: `x * M` is the XOR of the rows of `M` selected
/// by the ones of `x`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    ncols: usize,
}

/// Result of a forward elimination that remembers which input rows were
/// combined into each reduced row.
struct Elimination {
    /// (reduced row, combination of input rows, pivot column); fully reduced.
    pivots: Vec<(BitVector, BitVector, usize)>,
    /// Combinations of input rows that reduce to zero.
    null_combos: Vec<BitVector>,
}

fn eliminate(rows: &[BitVector], ncols: usize) -> Elimination {
    let n = rows.len();
    assert!(n <= MAX_BITS, "elimination over more than {MAX_BITS} rows");
    let mut work: Vec<(BitVector, BitVector)> =
        rows.iter().enumerate().map(|(i, r)| (*r, BitVector::unit(n, i))).collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        let Some(found) = (next..n).find(|&i| work[i].0.get(col)) else {
            continue;
        };
        work.swap(next, found);
        let (prow, pcombo) = work[next];
        for (i, item) in work.iter_mut().enumerate() {
            if i != next && item.0.get(col) {
                item.0 ^= prow;
                item.1 ^= pcombo;
            }
        }
        pivots.push(col);
        next += 1;
    }
    let null_combos = work[next..].iter().map(|(_, c)| *c).collect();
    let pivots = work[..next].iter().zip(pivots).map(|(&(r, c), p)| (r, c, p)).collect();
    Elimination { pivots, null_combos }
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        assert!(ncols <= MAX_BITS);
        BitMatrix { rows: vec![BitVector::zeros(ncols); nrows], ncols }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix { rows: (0..n).map(|i| BitVector::unit(n, i)).collect(), ncols: n }
    }

    /// Builds a matrix from rows of equal length. `ncols` is needed to give
    /// an empty row list a width.
    pub fn from_rows(rows: Vec<BitVector>, ncols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::LengthMismatch { left: bad.len(), right: ncols });
        }
        Ok(BitMatrix { rows, ncols })
    }

    /// Convenience constructor from `0`/`1` strings.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed = rows.iter().map(|s| s.parse::<BitVector>()).collect::<Result<Vec<_>>>()?;
        let ncols = parsed.first().map_or(0, |r| r.len());
        BitMatrix::from_rows(parsed, ncols)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    #[inline]
    pub fn row(&self, i: usize) -> BitVector {
        self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut c = BitVector::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.ncols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones_iter() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.nrows(), "vector/matrix shape mismatch");
        let mut acc = BitVector::zeros(self.ncols);
        for i in x.ones_iter() {
            acc ^= self.rows[i];
        }
        acc
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.ncols, other.nrows(), "matrix product shape mismatch");
        BitMatrix { rows: self.rows.iter().map(|r| other.vec_mul(r)).collect(), ncols: other.ncols }
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!((self.nrows(), self.ncols), (other.nrows(), other.ncols));
        BitMatrix { rows: self.rows.iter().zip(&other.rows).map(|(a, b)| *a ^ *b).collect(), ncols: self.ncols }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.rows.iter().enumerate().all(|(i, r)| *r == BitVector::unit(self.ncols, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// Submatrix of `nr` rows and `nc` columns starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> BitMatrix {
        BitMatrix { rows: self.rows[r0..r0 + nr].iter().map(|r| r.slice(c0, nc)).collect(), ncols: nc }
    }

    /// Assembles `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &BitMatrix, b: &BitMatrix, c: &BitMatrix, d: &BitMatrix) -> BitMatrix {
        assert_eq!(a.nrows(), b.nrows());
        assert_eq!(c.nrows(), d.nrows());
        assert_eq!(a.ncols, c.ncols);
        assert_eq!(b.ncols, d.ncols);
        let top = a.rows.iter().zip(&b.rows).map(|(x, y)| BitVector::concat(x, y));
        let bottom = c.rows.iter().zip(&d.rows).map(|(x, y)| BitVector::concat(x, y));
        BitMatrix { rows: top.chain(bottom).collect(), ncols: a.ncols + b.ncols }
    }

    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.ncols, other.ncols);
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        BitMatrix { rows, ncols: self.ncols }
    }

    pub fn rank(&self) -> usize {
        eliminate(&self.rows, self.ncols).pivots.len()
    }

    /// Reduced row echelon form (zero rows dropped) and pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let e = eliminate(&self.rows, self.ncols);
        let pivots = e.pivots.iter().map(|p| p.2).collect();
        (BitMatrix { rows: e.pivots.into_iter().map(|p| p.0).collect(), ncols: self.ncols }, pivots)
    }

    /// Canonical basis of the row space: the nonzero rows of the RREF.
    pub fn row_space(&self) -> BitMatrix {
        self.rref().0
    }

    /// Basis (in RREF) of the left kernel `{x : x M = 0}`.
    pub fn left_kernel(&self) -> BitMatrix {
        let e = eliminate(&self.rows, self.ncols);
        BitMatrix { rows: e.null_combos, ncols: self.nrows() }.row_space()
    }

    /// Some `x` with `x M = y`, if one exists.
    pub fn solve_left(&self, y: &BitVector) -> Option<BitVector> {
        assert_eq!(y.len(), self.ncols);
        let e = eliminate(&self.rows, self.ncols);
        let mut rest = *y;
        let mut x = BitVector::zeros(self.nrows());
        for (row, combo, col) in &e.pivots {
            if rest.get(*col) {
                rest ^= *row;
                x ^= *combo;
            }
        }
        rest.is_zero().then_some(x)
    }

    /// Returns `(L, E, pivots)` with `L` invertible and `L * self = E`, where
    /// the first `pivots.len()` rows of `E` are the RREF pivot rows and the
    /// remaining rows are zero.
    pub fn echelon_transform(&self) -> (BitMatrix, BitMatrix, Vec<usize>) {
        let e = eliminate(&self.rows, self.ncols);
        let n = self.nrows();
        let mut l_rows: Vec<BitVector> = e.pivots.iter().map(|p| p.1).collect();
        let mut e_rows: Vec<BitVector> = e.pivots.iter().map(|p| p.0).collect();
        let pivots = e.pivots.iter().map(|p| p.2).collect();
        l_rows.extend(e.null_combos);
        e_rows.resize(n, BitVector::zeros(self.ncols));
        (BitMatrix { rows: l_rows, ncols: n }, BitMatrix { rows: e_rows, ncols: self.ncols }, pivots)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.nrows()
    }

    pub fn inverse(&self) -> Result<BitMatrix> {
        if !self.is_square() {
            return Err(Error::Shape(format!("{}x{} matrix has no inverse", self.nrows(), self.ncols)));
        }
        let n = self.nrows();
        let e = eliminate(&self.rows, n);
        if e.pivots.len() != n {
            return Err(Error::Singular);
        }
        // Fully reduced pivots of a full-rank square matrix are unit rows.
        let mut inv = BitMatrix::zeros(n, n);
        for (_, combo, col) in e.pivots {
            inv.rows[col] = combo;
        }
        Ok(inv)
    }

    /// Whether `v` lies in the row space.
    pub fn spans(&self, v: &BitVector) -> bool {
        self.solve_left(v).is_some()
    }

    /// All `2^rank` elements of the row space (`rank <= 20`).
    pub fn span_elements(&self) -> Vec<BitVector> {
        let basis = self.row_space();
        let k = basis.nrows();
        assert!(k <= 20, "refusing to enumerate a space of dimension {k}");
        (0u32..(1 << k))
            .map(|mask| {
                let mut acc = BitVector::zeros(self.ncols);
                for i in 0..k {
                    if (mask >> i) & 1 == 1 {
                        acc ^= basis.rows[i];
                    }
                }
                acc
            })
            .collect()
    }
}

impl fmt::Display for BitMatrix {
    /// One row per line, `0`/`1` characters, no separators.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix[{}x{}]", self.nrows(), self.ncols)?;
        for r in &self.rows {
            write!(f, " {r}")?;
        }
        Ok(())
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    /// Parses the text format; blank lines, `#` comments and an optional
    /// `m=<int>` header are skipped. Use [`parse_f2_text`] to read the header.
    fn from_str(s: &str) -> Result<Self> {
        parse_f2_text(s).map(|(m, _)| m)
    }
}

/// Parses the F2 text format, returning the matrix and the `m=` header if present.
pub fn parse_f2_text(s: &str) -> Result<(BitMatrix, Option<usize>)> {
    let mut header = None;
    let mut rows = Vec::new();
    for line in s.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(value) = line.strip_prefix("m=") {
            let m = value.trim().parse::<usize>().map_err(|e| Error::Parse(format!("bad header {line:?}: {e}")))?;
            header = Some(m);
            continue;
        }
        if !line.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::Parse(format!("bad matrix row {line:?}")));
        }
        rows.push(line.parse::<BitVector>()?);
    }
    let ncols = rows.first().map_or(0, |r| r.len());
    let matrix = BitMatrix::from_rows(rows, ncols)?;
    if let Some(m) = header {
        if matrix.nrows() != 2 * m || matrix.ncols() != 2 * m {
            return Err(Error::Parse(format!(
                "header m={m} does not match a {}x{} matrix",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
    }
    Ok((matrix, header))
}
