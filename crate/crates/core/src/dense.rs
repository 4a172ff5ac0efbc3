//! Dense `2^m x 2^m` complex matrices.
//!
//! Basis state `|v>` for `v in F2^m` sits at the integer whose most
//! significant bit is `v_1`, so qubit 1 is the leftmost tensor factor.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Hard ceiling on the number of qubits any dense routine will touch.
pub const MAX_DENSE_QUBITS: usize = 10;

/// Default tolerance for unitarity and approximate comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{i pi t / 4}`.
pub fn omega8(t: u8) -> Complex64 {
    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;
    match t % 8 {
        0 => c64(1.0, 0.0),
        1 => c64(H, H),
        2 => c64(0.0, 1.0),
        3 => c64(-H, H),
        4 => c64(-1.0, 0.0),
        5 => c64(-H, -H),
        6 => c64(0.0, -1.0),
        _ => c64(H, -H),
    }
}

/// Basis vector `v` of length `m` for a row/column index.
pub fn basis_vector(index: usize, m: usize) -> BitVector {
    let mut v = BitVector::zeros(m);
    for i in 0..m {
        if (index >> (m - 1 - i)) & 1 == 1 {
            v.set(i, true);
        }
    }
    v
}

/// Inverse of [`basis_vector`].
pub fn basis_index(v: &BitVector) -> usize {
    let m = v.len();
    v.ones_iter().fold(0, |acc, i| acc | (1 << (m - 1 - i)))
}

/// A square complex matrix on `m` qubits. Unitarity is checked on demand.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct DenseUnitary {
    m: usize,
    data: DMatrix<Complex64>,
}

/// Wire format `{"m": .., "re": [[..]], "im": [[..]]}`, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    m: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<MatrixJson> for DenseUnitary {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.m > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { m: j.m, max: MAX_DENSE_QUBITS });
        }
        let n = 1usize << j.m;
        let rows_ok = |v: &Vec<Vec<f64>>| v.len() == n && v.iter().all(|r| r.len() == n);
        if !rows_ok(&j.re) || !rows_ok(&j.im) {
            return Err(Error::Shape(format!("expected {n}x{n} re/im arrays for m = {}", j.m)));
        }
        Ok(DenseUnitary { m: j.m, data: DMatrix::from_fn(n, n, |r, c| c64(j.re[r][c], j.im[r][c])) })
    }
}

impl From<DenseUnitary> for MatrixJson {
    fn from(u: DenseUnitary) -> Self {
        let n = u.dim();
        MatrixJson {
            m: u.m,
            re: (0..n).map(|r| (0..n).map(|c| u.data[(r, c)].re).collect()).collect(),
            im: (0..n).map(|r| (0..n).map(|c| u.data[(r, c)].im).collect()).collect(),
        }
    }
}

impl DenseUnitary {
    /// Wraps a square matrix whose side is a power of two.
    pub fn from_matrix(data: DMatrix<Complex64>) -> Result<Self> {
        let (r, c) = data.shape();
        if r != c {
            return Err(Error::Shape(format!("{r}x{c} is not square")));
        }
        if !r.is_power_of_two() {
            return Err(Error::Shape(format!("dimension {r} is not a power of two")));
        }
        let m = r.trailing_zeros() as usize;
        if m > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { m, max: MAX_DENSE_QUBITS });
        }
        Ok(DenseUnitary { m, data })
    }

    /// Row-major entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("ragged rows".into()));
        }
        DenseUnitary::from_matrix(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(|&x| c64(x, 0.0)).collect()).collect();
        DenseUnitary::from_rows(&rows)
    }

    pub fn identity(m: usize) -> Self {
        let n = 1 << m;
        DenseUnitary { m, data: DMatrix::identity(n, n) }
    }

    pub fn zeros(m: usize) -> Self {
        let n = 1 << m;
        DenseUnitary { m, data: DMatrix::zeros(n, n) }
    }

    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        let n = entries.len();
        DenseUnitary::from_matrix(DMatrix::from_fn(n, n, |r, c| if r == c { entries[r] } else { c64(0.0, 0.0) }))
    }

    /// The permutation matrix sending `|v>` to `|pi(v)>`.
    pub fn permutation(m: usize, pi: impl Fn(usize) -> usize) -> Self {
        let mut u = DenseUnitary::zeros(m);
        for v in 0..u.dim() {
            u.data[(pi(v), v)] = c64(1.0, 0.0);
        }
        u
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[(row, col)] = value;
    }

    fn check_m(&self, other: &DenseUnitary) -> Result<()> {
        if self.m != other.m {
            return Err(Error::LengthMismatch { left: self.m, right: other.m });
        }
        Ok(())
    }

    /// Matrix product; panics on a qubit-count mismatch.
    pub fn mul(&self, other: &DenseUnitary) -> DenseUnitary {
        self.check_m(other).expect("qubit count mismatch");
        DenseUnitary { m: self.m, data: &self.data * &other.data }
    }

    pub fn try_mul(&self, other: &DenseUnitary) -> Result<DenseUnitary> {
        self.check_m(other)?;
        Ok(self.mul(other))
    }

    pub fn add(&self, other: &DenseUnitary) -> DenseUnitary {
        self.check_m(other).expect("qubit count mismatch");
        DenseUnitary { m: self.m, data: &self.data + &other.data }
    }

    pub fn scale(&self, s: Complex64) -> DenseUnitary {
        DenseUnitary { m: self.m, data: self.data.map(|x| x * s) }
    }

    pub fn adjoint(&self) -> DenseUnitary {
        DenseUnitary { m: self.m, data: self.data.adjoint() }
    }

    /// `U V U^dagger`.
    pub fn conjugate(&self, v: &DenseUnitary) -> DenseUnitary {
        self.mul(v).mul(&self.adjoint())
    }

    /// `self (x) other`, with `self` on the leading qubits.
    pub fn kron(&self, other: &DenseUnitary) -> DenseUnitary {
        DenseUnitary { m: self.m + other.m, data: self.data.kronecker(&other.data) }
    }

    pub fn tensor_power(&self, k: usize) -> DenseUnitary {
        (0..k).fold(DenseUnitary::identity(0), |acc, _| acc.kron(self))
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseUnitary) -> f64 {
        if self.m != other.m {
            return f64::INFINITY;
        }
        self.data.iter().zip(other.data.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &DenseUnitary, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Largest entry of `|U^dagger U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.data.adjoint() * &self.data;
        let n = self.dim();
        prod.iter()
            .enumerate()
            .map(|(k, x)| {
                let (r, c) = (k % n, k / n);
                (x - if r == c { c64(1.0, 0.0) } else { c64(0.0, 0.0) }).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn check_unitary(&self, tol: f64) -> Result<()> {
        let d = self.unitarity_defect();
        if d > tol {
            return Err(Error::NotUnitary(d));
        }
        Ok(())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.data.iter().zip(self.data.adjoint().iter()).all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Equality up to a global phase for unitaries: `|Tr(U^dagger V)| = N`.
    pub fn projective_eq(&self, other: &DenseUnitary, tol: f64) -> bool {
        if self.m != other.m {
            return false;
        }
        let overlap = (self.data.adjoint() * &other.data).trace().norm();
        (overlap - self.dim() as f64).abs() <= tol * self.dim() as f64
    }

    /// Embeds a `k`-qubit gate on the listed qubits (0-based, first listed is
    /// the most significant input of `gate`).
    pub fn embed(gate: &DenseUnitary, qubits: &[usize], m: usize) -> Result<DenseUnitary> {
        if qubits.len() != gate.m {
            return Err(Error::InvalidParameter(format!(
                "gate acts on {} qubits but {} positions were given",
                gate.m,
                qubits.len()
            )));
        }
        if m > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { m, max: MAX_DENSE_QUBITS });
        }
        for (i, &q) in qubits.iter().enumerate() {
            if q >= m || qubits[..i].contains(&q) {
                return Err(Error::InvalidParameter(format!("bad qubit position {}", q + 1)));
            }
        }
        let shifts: Vec<usize> = qubits.iter().map(|&q| m - 1 - q).collect();
        let mask: usize = shifts.iter().map(|s| 1 << s).sum();
        let local = |x: usize| shifts.iter().fold(0, |acc, &s| (acc << 1) | ((x >> s) & 1));
        let n = 1 << m;
        let mut out = DenseUnitary::zeros(m);
        for col in 0..n {
            let rest = col & !mask;
            let lc = local(col);
            for lr in 0..gate.dim() {
                let g = gate.data[(lr, lc)];
                if g == c64(0.0, 0.0) {
                    continue;
                }
                let row =
                    shifts.iter().enumerate().fold(rest, |acc, (i, &s)| acc | (((lr >> (gate.m - 1 - i)) & 1) << s));
                out.data[(row, col)] = g;
            }
        }
        Ok(out)
    }

    /// Upper-left (`upper`) or lower-right `2^{m-1}` block: the action on `v_1 = 0` or `v_1 = 1`.
    pub fn diagonal_block(&self, upper: bool) -> DenseUnitary {
        let h = self.dim() / 2;
        let off = if upper { 0 } else { h };
        DenseUnitary { m: self.m - 1, data: self.data.view((off, off), (h, h)).into_owned() }
    }

    /// Block diagonal `diag(a, b)`, the inverse of [`diagonal_block`](Self::diagonal_block).
    pub fn block_diag(a: &DenseUnitary, b: &DenseUnitary) -> Result<DenseUnitary> {
        a.check_m(b)?;
        let h = a.dim();
        let mut out = DenseUnitary::zeros(a.m + 1);
        out.data.view_mut((0, 0), (h, h)).copy_from(&a.data);
        out.data.view_mut((h, h), (h, h)).copy_from(&b.data);
        Ok(out)
    }
}

impl fmt::Debug for DenseUnitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseUnitary(m={})", self.m)?;
        for r in 0..self.dim() {
            let row: Vec<String> = (0..self.dim()).map(|c| format!("{:.4}", self.data[(r, c)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_and_shape_checks() {
        let u = DenseUnitary::diagonal(&[c64(1.0, 0.0), omega8(1)]).unwrap();
        let text = serde_json::to_string(&u).unwrap();
        assert!(text.starts_with(r#"{"m":1,"re":[[1.0,0.0],"#));
        let back: DenseUnitary = serde_json::from_str(&text).unwrap();
        assert_eq!(back, u);
        let ragged = r#"{"m":1,"re":[[1,0],[0]],"im":[[0,0],[0,0]]}"#;
        assert!(serde_json::from_str::<DenseUnitary>(ragged).is_err());
        let wrong_m = r#"{"m":2,"re":[[1,0],[0,1]],"im":[[0,0],[0,0]]}"#;
        assert!(serde_json::from_str::<DenseUnitary>(wrong_m).is_err());
    }

    #[test]
    fn basis_indexing_puts_first_qubit_high() {
        let v: BitVector = "100".parse().unwrap();
        assert_eq!(basis_index(&v), 4);
        assert_eq!(basis_vector(4, 3), v);
        for i in 0..16 {
            assert_eq!(basis_index(&basis_vector(i, 4)), i);
        }
    }

    #[test]
    fn omega8_is_cyclic() {
        for t in 0..8u8 {
            assert!((omega8(t) * omega8(1) - omega8(t + 1)).norm() < 1e-15);
        }
    }

    #[test]
    fn embed_matches_kron() {
        let x = DenseUnitary::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let i2 = DenseUnitary::identity(1);
        assert_eq!(DenseUnitary::embed(&x, &[0], 2).unwrap(), x.kron(&i2));
        assert_eq!(DenseUnitary::embed(&x, &[1], 2).unwrap(), i2.kron(&x));
        assert!(DenseUnitary::embed(&x, &[2], 2).is_err());
    }

    #[test]
    fn embed_reversed_two_qubit_gate() {
        // CNOT with control on qubit 2 and target on qubit 1
        let cnot = DenseUnitary::permutation(2, |v| if v & 2 != 0 { v ^ 1 } else { v });
        let flipped = DenseUnitary::embed(&cnot, &[1, 0], 2).unwrap();
        assert_eq!(flipped, DenseUnitary::permutation(2, |v| if v & 1 != 0 { v ^ 2 } else { v }));
    }

    #[test]
    fn json_shape_is_validated() {
        let bad = MatrixJson { m: 1, re: vec![vec![1.0]], im: vec![vec![0.0]] };
        assert!(DenseUnitary::try_from(bad).is_err());
        let u = DenseUnitary::identity(1);
        let back = DenseUnitary::try_from(MatrixJson::from(u.clone())).unwrap();
        assert_eq!(back, u);
    }

    #[test]
    fn projective_equality_ignores_phase() {
        let u = DenseUnitary::identity(2);
        assert!(u.projective_eq(&u.scale(omega8(3)), 1e-12));
        assert!(!u.projective_eq(&DenseUnitary::permutation(2, |v| v ^ 1), 1e-12));
    }

    #[test]
    fn non_power_of_two_rejected() {
        let m = DMatrix::<Complex64>::identity(3, 3);
        assert!(matches!(DenseUnitary::from_matrix(m), Err(Error::Shape(_))));
    }

    #[test]
    fn blocks_roundtrip() {
        let a = DenseUnitary::permutation(1, |v| v ^ 1);
        let b = DenseUnitary::identity(1).scale(omega8(2));
        let d = DenseUnitary::block_diag(&a, &b).unwrap();
        assert_eq!(d.diagonal_block(true), a);
        assert_eq!(d.diagonal_block(false), b);
    }
}
