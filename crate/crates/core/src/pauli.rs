//! The Heisenberg-Weyl group with exact phases, and stabilizer groups.
//!
//! `D(a,b) |v> = (-1)^{b.v} |v + a>` and `E(a,b) = i^{a.b} D(a,b)`, which is
//! Hermitian and squares to the identity. A [`PhasedPauli`] stores
//! `e^{i pi t / 4} E(a,b)` with `t` in `Z8`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::dense::{basis_index, basis_vector, c64, omega8, DenseUnitary};
use crate::error::{Error, Result};
use crate::gf2::{symplectic_inner, BitMatrix, BitVector};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhasedPauli {
    a: BitVector,
    b: BitVector,
    phase: u8,
}

impl PhasedPauli {
    pub fn new(a: BitVector, b: BitVector, phase: u8) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
        }
        Ok(PhasedPauli { a, b, phase: phase % 8 })
    }

    /// `e^{i pi t/4} E(c)` for a point `c = (a|b)`.
    pub fn from_point(c: &BitVector, phase: u8) -> Result<Self> {
        if c.len() % 2 != 0 {
            return Err(Error::OddLength(c.len()));
        }
        let (a, b) = c.halves();
        Ok(PhasedPauli { a, b, phase: phase % 8 })
    }

    /// `E(c)` with no extra phase.
    pub fn hermitian(c: &BitVector) -> Self {
        PhasedPauli::from_point(c, 0).expect("even-length point")
    }

    pub fn identity(m: usize) -> Self {
        PhasedPauli { a: BitVector::zeros(m), b: BitVector::zeros(m), phase: 0 }
    }

    /// `X` on qubit `q` (0-based).
    pub fn x(m: usize, q: usize) -> Self {
        PhasedPauli { a: BitVector::unit(m, q), b: BitVector::zeros(m), phase: 0 }
    }

    /// `Z` on qubit `q` (0-based).
    pub fn z(m: usize, q: usize) -> Self {
        PhasedPauli { a: BitVector::zeros(m), b: BitVector::unit(m, q), phase: 0 }
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> BitVector {
        self.a
    }

    pub fn b(&self) -> BitVector {
        self.b
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// The point `(a|b)` in `F2^{2m}`.
    pub fn point(&self) -> BitVector {
        BitVector::concat(&self.a, &self.b)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 4 == 0
    }

    /// `E(a,b)` without its phase.
    pub fn unsigned(&self) -> Self {
        PhasedPauli { phase: 0, ..*self }
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        PhasedPauli { phase: phase % 8, ..*self }
    }

    pub fn negate(&self) -> Self {
        self.with_phase(self.phase + 4)
    }

    pub fn mul(&self, other: &PhasedPauli) -> Result<PhasedPauli> {
        if self.m() != other.m() {
            return Err(Error::LengthMismatch { left: self.m(), right: other.m() });
        }
        let (a, b, c, d) = (self.a, self.b, other.a, other.b);
        let (x, z) = (a ^ c, b ^ d);
        // i^{ab} D(a,b) i^{cd} D(c,d) = i^{ab + cd + 2bc - xz} E(x,z)
        let exp = a.overlap(&b) + c.overlap(&d) + 2 * b.overlap(&c) + 4 - x.overlap(&z) % 4;
        let phase = (self.phase as u32 + other.phase as u32 + 2 * (exp % 4)) % 8;
        Ok(PhasedPauli { a: x, b: z, phase: phase as u8 })
    }

    /// `(w^t E)^{-1} = w^{-t} E` because `E^2 = I`.
    pub fn inverse(&self) -> PhasedPauli {
        self.with_phase(8 - self.phase)
    }

    pub fn commutes(&self, other: &PhasedPauli) -> Result<bool> {
        Ok(!symplectic_inner(&self.point(), &other.point())?)
    }

    pub fn scalar(&self) -> Complex64 {
        omega8(self.phase)
    }

    pub fn to_dense(&self) -> Result<DenseUnitary> {
        let m = self.m();
        if m > crate::dense::MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { m, max: crate::dense::MAX_DENSE_QUBITS });
        }
        let lead = omega8(self.phase + 2 * (self.a.overlap(&self.b) % 4) as u8);
        let mut u = DenseUnitary::zeros(m);
        for col in 0..1usize << m {
            let v = basis_vector(col, m);
            let row = basis_index(&(v ^ self.a));
            u.set(row, col, if self.b.dot(&v) { -lead } else { lead });
        }
        Ok(u)
    }

    /// Recovers `w^t E(c)` from a dense matrix, if it is one.
    pub fn from_dense(u: &DenseUnitary, tol: f64) -> Option<PhasedPauli> {
        let (c, coef) = match_pauli(u, tol)?;
        let t = (0..8u8).find(|&t| (omega8(t) - coef).norm() <= tol)?;
        PhasedPauli::from_point(&c, t).ok()
    }
}

/// Writes `u = coef * E(c)` when `u` is a scalar multiple of a Pauli.
pub fn match_pauli(u: &DenseUnitary, tol: f64) -> Option<(BitVector, Complex64)> {
    let m = u.m();
    let n = u.dim();
    let mut hits = (0..n).filter(|&r| u.get(r, 0).norm() > tol);
    let r0 = hits.next()?;
    if hits.next().is_some() {
        return None;
    }
    let a = basis_vector(r0, m);
    let base = u.get(r0, 0);
    let mut b = BitVector::zeros(m);
    for j in 0..m {
        let e = BitVector::unit(m, j);
        let ratio = u.get(basis_index(&(e ^ a)), basis_index(&e)) / base;
        b.set(j, ratio.re < 0.0);
    }
    let coef = base * omega8(8 - 2 * (a.overlap(&b) % 4) as u8);
    let c = BitVector::concat(&a, &b);
    let e = PhasedPauli::hermitian(&c).to_dense().ok()?.scale(coef);
    if e.approx_eq(u, tol) {
        Some((c, coef))
    } else {
        None
    }
}

const LETTERS: [char; 4] = ['I', 'X', 'Z', 'Y'];

impl fmt::Display for PhasedPauli {
    /// Letters per qubit from left to right, with a phase prefix among
    /// `""`, `"-"`, `"i"`, `"-i"`, or `"w^t"` for odd `t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase {
            0 => {}
            2 => f.write_str("i")?,
            4 => f.write_str("-")?,
            6 => f.write_str("-i")?,
            t => write!(f, "w^{t}")?,
        }
        for q in 0..self.m() {
            let k = usize::from(self.a.get(q)) + 2 * usize::from(self.b.get(q));
            write!(f, "{}", LETTERS[k])?;
        }
        Ok(())
    }
}

impl fmt::Debug for PhasedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PhasedPauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("w^") {
            let digits: String = r.chars().take_while(char::is_ascii_digit).collect();
            let t: u32 = digits.parse().map_err(|_| Error::Parse(format!("bad phase in {s:?}")))?;
            ((t % 8) as u8, &r[digits.len()..])
        } else if let Some(r) = s.strip_prefix("-i") {
            (6, r)
        } else if let Some(r) = s.strip_prefix("+i") {
            (2, r)
        } else if let Some(r) = s.strip_prefix('i') {
            (2, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (4, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else {
            (0, s)
        };
        let rest = rest.trim();
        if rest.is_empty() {
            return Err(Error::Parse(format!("no qubits in Pauli string {s:?}")));
        }
        let m = rest.chars().count();
        if m > 64 {
            return Err(Error::TooLong(2 * m));
        }
        let mut a = BitVector::zeros(m);
        let mut b = BitVector::zeros(m);
        for (q, ch) in rest.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => a.set(q, true),
                'Z' => b.set(q, true),
                'Y' => {
                    a.set(q, true);
                    b.set(q, true);
                }
                other => return Err(Error::Parse(format!("unexpected Pauli letter {other:?}"))),
            }
        }
        Ok(PhasedPauli { a, b, phase })
    }
}

/// A group generated by independent, commuting, Hermitian Paulis that does
/// not contain `-I`.
#[derive(Clone, PartialEq, Eq)]
pub struct StabilizerGroup {
    generators: Vec<PhasedPauli>,
    m: usize,
}

impl StabilizerGroup {
    pub fn new(m: usize, generators: Vec<PhasedPauli>) -> Result<Self> {
        for g in &generators {
            if g.m() != m {
                return Err(Error::LengthMismatch { left: m, right: g.m() });
            }
            if !g.is_hermitian() {
                return Err(Error::NotHermitian);
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if !generators[i].commutes(&generators[j])? {
                    return Err(Error::AnticommutingGenerators(i, j));
                }
            }
        }
        let points: Vec<BitVector> = generators.iter().map(PhasedPauli::point).collect();
        let mat = BitMatrix::from_rows(points, 2 * m)?;
        let deps = mat.left_kernel();
        if deps.nrows() > 0 {
            // a relation multiplies to +-I; -I is the worse failure
            for combo in deps.span_elements() {
                if combo.is_zero() {
                    continue;
                }
                let mut acc = PhasedPauli::identity(m);
                for i in combo.ones_iter() {
                    acc = acc.mul(&generators[i])?;
                }
                if acc.phase() == 4 {
                    return Err(Error::ContainsMinusIdentity);
                }
            }
            return Err(Error::DependentGenerators);
        }
        Ok(StabilizerGroup { generators, m })
    }

    /// Parses one Pauli string per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let gens: Vec<PhasedPauli> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<_>>()?;
        let m = gens.first().map(PhasedPauli::m).ok_or_else(|| Error::Parse("no generators".into()))?;
        StabilizerGroup::new(m, gens)
    }

    /// `Z_N = <Z_1, ..., Z_m>`.
    pub fn z_group(m: usize) -> Self {
        StabilizerGroup { generators: (0..m).map(|q| PhasedPauli::z(m, q)).collect(), m }
    }

    /// Unsigned `E(c)` for each row of an isotropic, independent point set.
    pub fn from_points(m: usize, points: &BitMatrix) -> Result<Self> {
        StabilizerGroup::new(m, points.rows().iter().map(PhasedPauli::hermitian).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PhasedPauli] {
        &self.generators
    }

    /// The `k x 2m` matrix `(A B)` of generator points.
    pub fn generator_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(self.generators.iter().map(PhasedPauli::point).collect(), 2 * self.m).unwrap()
    }

    /// All `2^k` elements of the group generated by `(-1)^{d_n} E_n`.
    pub fn elements(&self, d: &BitVector) -> Result<Vec<PhasedPauli>> {
        self.check_signs(d)?;
        let signed = self.signed(d);
        let k = self.k();
        let mut out = Vec::with_capacity(1 << k);
        for mask in 0u64..(1 << k) {
            let mut acc = PhasedPauli::identity(self.m);
            for (i, g) in signed.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc = acc.mul(g)?;
                }
            }
            out.push(acc);
        }
        out.sort_by_key(PhasedPauli::point);
        Ok(out)
    }

    /// Point set of the group, signs forgotten.
    pub fn points(&self) -> BTreeSet<BitVector> {
        self.generator_matrix().span_elements().into_iter().collect()
    }

    /// `prod_n (I + (-1)^{d_n} E_n) / 2`.
    pub fn projector(&self, d: &BitVector) -> Result<DenseUnitary> {
        self.check_signs(d)?;
        let id = DenseUnitary::identity(self.m);
        let mut acc = id.clone();
        for g in self.signed(d) {
            acc = acc.mul(&id.add(&g.to_dense()?).scale(c64(0.5, 0.0)));
        }
        Ok(acc)
    }

    pub fn is_mcs(&self) -> bool {
        self.k() == self.m
    }

    fn signed(&self, d: &BitVector) -> Vec<PhasedPauli> {
        self.generators.iter().enumerate().map(|(i, g)| if d.get(i) { g.negate() } else { *g }).collect()
    }

    fn check_signs(&self, d: &BitVector) -> Result<()> {
        if d.len() != self.k() {
            return Err(Error::LengthMismatch { left: d.len(), right: self.k() });
        }
        Ok(())
    }
}

impl fmt::Debug for StabilizerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(ToString::to_string).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

/// Largest `m` accepted by [`enumerate_mcs`].
pub const MCS_ENUMERATION_MAX: usize = 3;

/// Every maximal isotropic subspace of `F2^{2m}`, as unsigned stabilizer
/// groups generated by the RREF basis, in a deterministic order.
pub fn enumerate_mcs(m: usize) -> Result<Vec<StabilizerGroup>> {
    if m > MCS_ENUMERATION_MAX {
        return Err(Error::TooManyQubits { m, max: MCS_ENUMERATION_MAX });
    }
    let n = 2 * m;
    let mut layer: Vec<BitMatrix> = vec![BitMatrix::zeros(0, n)];
    for _ in 0..m {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for basis in &layer {
            let dual = crate::gf2::dual_space(basis, crate::gf2::InnerForm::Symplectic)?;
            for v in dual.span_elements() {
                if basis.spans(&v) {
                    continue;
                }
                let ext = basis.vstack(&BitMatrix::from_rows(vec![v], n)?).rref().0;
                if seen.insert(ext.clone()) {
                    next.push(ext);
                }
            }
        }
        next.sort_by(|x, y| x.rows().cmp(y.rows()));
        layer = next;
    }
    layer.iter().map(|b| StabilizerGroup::from_points(m, b)).collect()
}
