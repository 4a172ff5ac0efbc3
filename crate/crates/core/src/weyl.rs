//! Expansion of operators in the Hermitian Pauli basis `E(c)`.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use crate::dense::{basis_index, basis_vector, c64, omega8, DenseUnitary, MAX_DENSE_QUBITS};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::PhasedPauli;

/// `M = sum_c alpha_c E(c)` with `alpha_c = Tr(E(c) M) / N`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylExpansion {
    m: usize,
    coefficients: BTreeMap<BitVector, Complex64>,
}

/// How a support set sits inside `F2^{2m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportShape {
    /// A subspace, given by an RREF basis.
    Group(BitMatrix),
    /// `offset + group` with `offset` the least element and outside `group`.
    Coset {
        offset: BitVector,
        group: BitMatrix,
    },
    Neither,
}

impl SupportShape {
    pub fn base_group(&self) -> Option<&BitMatrix> {
        match self {
            SupportShape::Group(g) | SupportShape::Coset { group: g, .. } => Some(g),
            SupportShape::Neither => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SupportShape::Group(_) => "group",
            SupportShape::Coset { .. } => "coset",
            SupportShape::Neither => "neither",
        }
    }
}

impl WeylExpansion {
    /// Terms with modulus at most `tol` are dropped.
    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (BitVector, Complex64)>, tol: f64) -> Result<Self> {
        let mut coefficients = BTreeMap::new();
        for (c, alpha) in terms {
            if c.len() != 2 * m {
                return Err(Error::LengthMismatch { left: 2 * m, right: c.len() });
            }
            *coefficients.entry(c).or_insert(c64(0.0, 0.0)) += alpha;
        }
        coefficients.retain(|_, a: &mut Complex64| a.norm() > tol);
        Ok(WeylExpansion { m, coefficients })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coefficients(&self) -> &BTreeMap<BitVector, Complex64> {
        &self.coefficients
    }

    pub fn coefficient(&self, c: &BitVector) -> Complex64 {
        self.coefficients.get(c).copied().unwrap_or(c64(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `sum |alpha_c|^2`, equal to `Tr(M^dagger M) / N`.
    pub fn norm_sq(&self) -> f64 {
        self.coefficients.values().map(Complex64::norm_sqr).sum()
    }

    pub fn support(&self) -> BTreeSet<BitVector> {
        self.coefficients.keys().copied().collect()
    }

    pub fn support_shape(&self) -> SupportShape {
        classify_points(&self.support(), 2 * self.m)
    }

    /// Support of `M D(x)`, i.e. `{x} + supp(M)`.
    pub fn translate_support(&self, x: &BitVector) -> Result<BTreeSet<BitVector>> {
        if x.len() != 2 * self.m {
            return Err(Error::LengthMismatch { left: 2 * self.m, right: x.len() });
        }
        Ok(self.coefficients.keys().map(|c| *c ^ *x).collect())
    }
}

/// Classifies a point set as a subspace, a proper coset, or neither.
pub fn classify_points(points: &BTreeSet<BitVector>, n: usize) -> SupportShape {
    let Some(&first) = points.iter().next() else {
        return SupportShape::Neither;
    };
    let shifted: Vec<BitVector> = points.iter().map(|p| *p ^ first).collect();
    let span = BitMatrix::from_rows(shifted, n).expect("uniform lengths").row_space();
    if span.nrows() >= 64 || 1usize << span.nrows() != points.len() {
        return SupportShape::Neither;
    }
    // |shifted| = 2^rank and shifted lies in the span, so they coincide
    if first.is_zero() {
        SupportShape::Group(span)
    } else {
        SupportShape::Coset { offset: first, group: span }
    }
}

/// `Tr(E(c) M) = i^{a.b} sum_v (-1)^{b.v} M[v, v + a]`, so each coefficient
/// costs `O(N)`.
pub fn expand(u: &DenseUnitary, tol: f64) -> Result<WeylExpansion> {
    let m = u.m();
    if m > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits { m, max: MAX_DENSE_QUBITS });
    }
    let n = u.dim();
    let mut coefficients = BTreeMap::new();
    for ai in 0..n {
        let a = basis_vector(ai, m);
        // sums over v split by the sign pattern (-1)^{b.v}, one column per v
        let diag: Vec<Complex64> = (0..n).map(|v| u.get(v, v ^ ai)).collect();
        for bi in 0..n {
            let b = basis_vector(bi, m);
            let mut acc = c64(0.0, 0.0);
            for (v, x) in diag.iter().enumerate() {
                if (v & bi).count_ones() % 2 == 1 {
                    acc -= x;
                } else {
                    acc += x;
                }
            }
            let alpha = acc * omega8(2 * (a.overlap(&b) % 4) as u8) / n as f64;
            if alpha.norm() > tol {
                coefficients.insert(BitVector::concat(&a, &b), alpha);
            }
        }
    }
    Ok(WeylExpansion { m, coefficients })
}

/// `sum_c alpha_c E(c)`.
pub fn synthesize(w: &WeylExpansion) -> Result<DenseUnitary> {
    if w.m > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits { m: w.m, max: MAX_DENSE_QUBITS });
    }
    let mut out = DenseUnitary::zeros(w.m);
    for (c, alpha) in &w.coefficients {
        let p = PhasedPauli::hermitian(c);
        let lead = omega8(2 * (p.a().overlap(&p.b()) % 4) as u8) * alpha;
        for col in 0..out.dim() {
            let v = basis_vector(col, w.m);
            let row = basis_index(&(v ^ p.a()));
            let term = if p.b().dot(&v) { -lead } else { lead };
            out.set(row, col, out.get(row, col) + term);
        }
    }
    Ok(out)
}
