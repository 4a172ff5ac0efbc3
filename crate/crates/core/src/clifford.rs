//! Clifford unitaries and their symplectic images.
//!
//! `phi(G)` records `G E(e_i) G^dagger = (-1)^{s_i} E(e_i F)`, so row `i` of
//! `F` is the image of the `i`-th basis point. With matrices acting on row
//! vectors this makes `phi` an anti-homomorphism:
//! `phi(G1 G2).F = phi(G2).F * phi(G1).F`.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::dense::{basis_index, basis_vector, c64, omega8, DenseUnitary, MAX_DENSE_QUBITS};
use crate::error::{Error, Result};
use crate::gf2::bitvec::sinner;
use crate::gf2::{
    dual_space, f_d, f_omega, f_u, transvection_decompose, BitMatrix, BitVector, InnerForm, SymplecticMatrix,
};
use crate::pauli::PhasedPauli;
use crate::weyl::{expand, WeylExpansion};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn hadamard() -> DenseUnitary {
    DenseUnitary::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]).unwrap().scale(c64(FRAC_1_SQRT_2, 0.0))
}

pub fn phase_gate() -> DenseUnitary {
    DenseUnitary::diagonal(&[c64(1.0, 0.0), c64(0.0, 1.0)]).unwrap()
}

pub fn t_gate() -> DenseUnitary {
    DenseUnitary::diagonal(&[c64(1.0, 0.0), omega8(1)]).unwrap()
}

/// Control on qubit 1, target on qubit 2.
pub fn cnot() -> DenseUnitary {
    DenseUnitary::permutation(2, |v| if v & 2 != 0 { v ^ 1 } else { v })
}

pub fn cz() -> DenseUnitary {
    diagonal_phases(2, |v| if v == 3 { 4 } else { 0 })
}

pub fn swap() -> DenseUnitary {
    DenseUnitary::permutation(2, |v| ((v & 1) << 1) | (v >> 1))
}

/// Controlled-`S`, `diag(1, 1, 1, i)`.
pub fn cs() -> DenseUnitary {
    diagonal_phases(2, |v| if v == 3 { 2 } else { 0 })
}

pub fn ccz() -> DenseUnitary {
    diagonal_phases(3, |v| if v == 7 { 4 } else { 0 })
}

/// `diag(e^{i pi t(v) / 4})`.
pub fn diagonal_phases(m: usize, t: impl Fn(usize) -> u8) -> DenseUnitary {
    let entries: Vec<Complex64> = (0..1usize << m).map(|v| omega8(t(v))).collect();
    DenseUnitary::diagonal(&entries).unwrap()
}

/// Gate by lowercase name: `h s x y z cnot cz swap t cs ccz`.
pub fn named_gate(name: &str) -> Option<DenseUnitary> {
    let pauli = |s: &str| s.parse::<PhasedPauli>().ok()?.to_dense().ok();
    Some(match name {
        "h" => hadamard(),
        "s" => phase_gate(),
        "x" => pauli("X")?,
        "y" => pauli("Y")?,
        "z" => pauli("Z")?,
        "cnot" => cnot(),
        "cz" => cz(),
        "swap" => swap(),
        "t" => t_gate(),
        "cs" => cs(),
        "ccz" => ccz(),
        _ => return None,
    })
}

/// `G_D(P): |v> -> |vP>`.
pub fn gate_gd(p: &BitMatrix) -> Result<DenseUnitary> {
    if !p.is_square() {
        return Err(Error::Shape(format!("{}x{} is not square", p.nrows(), p.ncols())));
    }
    if !p.is_invertible() {
        return Err(Error::Singular);
    }
    let m = p.nrows();
    check_dense(m)?;
    Ok(DenseUnitary::permutation(m, |v| basis_index(&p.vec_mul(&basis_vector(v, m)))))
}

/// `v S v^t` evaluated over the integers, mod 4.
fn quadratic_mod4(s: &BitMatrix, v: &BitVector) -> u8 {
    let m = s.nrows();
    let mut acc = 0u32;
    for i in v.ones_iter() {
        if s.get(i, i) {
            acc += 1;
        }
        for j in v.ones_iter().filter(|&j| j > i && j < m) {
            if s.get(i, j) {
                acc += 2;
            }
        }
    }
    (acc % 4) as u8
}

/// `G_U(S) = diag(i^{v S v^t mod 4})`.
pub fn gate_gu(s: &BitMatrix) -> Result<DenseUnitary> {
    if !s.is_square() || !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let m = s.nrows();
    check_dense(m)?;
    Ok(diagonal_phases(m, |v| 2 * quadratic_mod4(s, &basis_vector(v, m))))
}

/// `H^{(x) r} (x) I`.
pub fn gate_gomega(r: usize, m: usize) -> Result<DenseUnitary> {
    if r > m {
        return Err(Error::InvalidParameter(format!("r = {r} exceeds m = {m}")));
    }
    check_dense(m)?;
    Ok(hadamard().tensor_power(r).kron(&DenseUnitary::identity(m - r)))
}

fn check_dense(m: usize) -> Result<()> {
    if m > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits { m, max: MAX_DENSE_QUBITS });
    }
    Ok(())
}

/// The symplectic image of a Clifford together with generator signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordTableau {
    f: SymplecticMatrix,
    signs: BitVector,
}

impl CliffordTableau {
    pub fn f(&self) -> &SymplecticMatrix {
        &self.f
    }

    /// Bit `i` set when `G E(e_i) G^dagger = -E(e_i F)`.
    pub fn signs(&self) -> BitVector {
        self.signs
    }

    pub fn m(&self) -> usize {
        self.f.m()
    }
}

/// Conjugates each basis Pauli; fails if any image is not a phased Pauli.
pub fn phi(g: &DenseUnitary, tol: f64) -> Result<CliffordTableau> {
    g.check_unitary(tol)?;
    let m = g.m();
    let mut rows = Vec::with_capacity(2 * m);
    let mut signs = BitVector::zeros(2 * m);
    for i in 0..2 * m {
        let e = PhasedPauli::hermitian(&BitVector::unit(2 * m, i));
        let image = PhasedPauli::from_dense(&g.conjugate(&e.to_dense()?), tol)
            .ok_or_else(|| Error::NotClifford { generator: e.to_string() })?;
        rows.push(image.point());
        signs.set(i, image.phase() == 4);
    }
    let f = SymplecticMatrix::new(BitMatrix::from_rows(rows, 2 * m)?)
        .map_err(|_| Error::Internal("conjugation table is not symplectic".into()))?;
    Ok(CliffordTableau { f, signs })
}

pub fn is_clifford(g: &DenseUnitary, tol: f64) -> bool {
    phi(g, tol).is_ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `G_v = (I +- i E(v)) / sqrt 2`; its symplectic image is `T_v`.
pub fn clifford_transvection(v: &BitVector, sign: Sign) -> Result<DenseUnitary> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let e = PhasedPauli::from_point(v, if sign == Sign::Plus { 2 } else { 6 })?.to_dense()?;
    Ok(DenseUnitary::identity(e.m()).add(&e).scale(c64(FRAC_1_SQRT_2, 0.0)))
}

/// A Clifford `G` with `phi(G).F = F`, defined up to a Pauli and a phase.
///
/// For `F = T_{v_1} ... T_{v_k}` this is `G_{v_k} ... G_{v_1}`, since `phi`
/// reverses products.
pub fn preimage(f: &SymplecticMatrix) -> Result<DenseUnitary> {
    check_dense(f.m())?;
    let mut g = DenseUnitary::identity(f.m());
    for v in transvection_decompose(f) {
        g = clifford_transvection(&v, Sign::Plus)?.mul(&g);
    }
    Ok(g)
}

fn check_product_rows(c0: &BitVector, rows: &BitMatrix) -> Result<()> {
    if c0.len() % 2 != 0 {
        return Err(Error::OddLength(c0.len()));
    }
    if rows.ncols() != c0.len() {
        return Err(Error::LengthMismatch { left: c0.len(), right: rows.ncols() });
    }
    if rows.rank() < rows.nrows() {
        return Err(Error::DependentRows);
    }
    Ok(())
}

/// Dense `E(c_0) prod_n (I + i E(c_n)) / sqrt 2`, factors in row order.
///
/// Dependent rows are accepted; this is the only route for them, since the
/// closed form needs independence.
pub fn transvection_product(c0: &BitVector, rows: &BitMatrix) -> Result<DenseUnitary> {
    if c0.len() % 2 != 0 {
        return Err(Error::OddLength(c0.len()));
    }
    if rows.ncols() != c0.len() {
        return Err(Error::LengthMismatch { left: c0.len(), right: rows.ncols() });
    }
    let mut g = PhasedPauli::hermitian(c0).to_dense()?;
    for c in rows.rows() {
        let e = PhasedPauli::from_point(c, 2)?.to_dense()?;
        g = g.mul(&DenseUnitary::identity(e.m()).add(&e).scale(c64(FRAC_1_SQRT_2, 0.0)));
    }
    Ok(g)
}

fn int_dot(x: &[u32], y: &[u32]) -> u32 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Closed-form expansion of [`transvection_product`].
///
/// The term for `d in F2^k` is
/// `i^{|d| + d C~ d^t + d A b_0^t - a_0 B^t d^t} E(dC + c_0) / 2^{k/2}`
/// where `C~_ij = a_j b_i - a_i b_j` for `i < j` and `0` otherwise, and
/// `E(x,y)` with integer arguments is `i^{x.y} D(x mod 2, y mod 2)`.
pub fn hermitian_product_coefficients(c0: &BitVector, rows: &BitMatrix, tol: f64) -> Result<WeylExpansion> {
    check_product_rows(c0, rows)?;
    let m = c0.len() / 2;
    let k = rows.nrows();
    let ints = |v: &BitVector| -> Vec<u32> { (0..v.len()).map(|i| u32::from(v.get(i))).collect() };
    let (a0, b0) = c0.halves();
    let (a0, b0) = (ints(&a0), ints(&b0));
    let halves: Vec<(Vec<u32>, Vec<u32>)> = rows
        .rows()
        .iter()
        .map(|c| {
            let (a, b) = c.halves();
            (ints(&a), ints(&b))
        })
        .collect();
    let mut tilde = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            tilde[i][j] = int_dot(&halves[j].0, &halves[i].1) as i64 - int_dot(&halves[i].0, &halves[j].1) as i64;
        }
    }
    let scale = (0.5f64).powf(k as f64 / 2.0);
    let mut terms = Vec::with_capacity(1 << k);
    for mask in 0u64..(1 << k) {
        let d: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        let mut e = d.len() as i64;
        for (x, &i) in d.iter().enumerate() {
            for &j in &d[x + 1..] {
                e += tilde[i][j];
            }
            e += int_dot(&halves[i].0, &b0) as i64 - int_dot(&a0, &halves[i].1) as i64;
        }
        let mut x = a0.clone();
        let mut y = b0.clone();
        for &i in &d {
            for q in 0..m {
                x[q] += halves[i].0[q];
                y[q] += halves[i].1[q];
            }
        }
        let xb: Vec<u32> = x.iter().map(|v| v % 2).collect();
        let yb: Vec<u32> = y.iter().map(|v| v % 2).collect();
        // E(x, y) = i^{x.y - xb.yb} E(xb, yb)
        e += int_dot(&x, &y) as i64 - int_dot(&xb, &yb) as i64;
        let point = BitVector::concat(
            &BitVector::from_bools(&xb.iter().map(|&v| v == 1).collect::<Vec<_>>()),
            &BitVector::from_bools(&yb.iter().map(|&v| v == 1).collect::<Vec<_>>()),
        );
        let t = (2 * e.rem_euclid(4)) as u8;
        terms.push((point, omega8(t) * scale));
    }
    WeylExpansion::from_terms(m, terms, tol)
}

/// Whether `E(c_0) prod (I + i E(c_n)) / sqrt 2` is Hermitian: `E(c_0)`
/// anticommutes with every `E(c_n)` and the `E(c_n)` pairwise commute.
/// With no factors the product is `E(c_0)` itself and the test is vacuous.
pub fn is_hermitian_product(c0: &BitVector, rows: &BitMatrix) -> Result<bool> {
    check_product_rows(c0, rows)?;
    let cs = rows.rows();
    let anti = cs.iter().all(|c| sinner(c0, c));
    let comm = cs.iter().enumerate().all(|(i, u)| cs[i + 1..].iter().all(|v| !sinner(u, v)));
    Ok(anti && comm)
}

/// One of the three standard Clifford families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardGate {
    Gd(BitMatrix),
    Gu(BitMatrix),
    Gomega { r: usize, m: usize },
}

impl StandardGate {
    pub fn m(&self) -> usize {
        match self {
            StandardGate::Gd(p) => p.nrows(),
            StandardGate::Gu(s) => s.nrows(),
            StandardGate::Gomega { m, .. } => *m,
        }
    }

    pub fn dense(&self) -> Result<DenseUnitary> {
        match self {
            StandardGate::Gd(p) => gate_gd(p),
            StandardGate::Gu(s) => gate_gu(s),
            StandardGate::Gomega { r, m } => gate_gomega(*r, *m),
        }
    }

    pub fn symplectic(&self) -> Result<SymplecticMatrix> {
        match self {
            StandardGate::Gd(p) => f_d(p),
            StandardGate::Gu(s) => f_u(s),
            StandardGate::Gomega { r, m } => f_omega(*r, *m),
        }
    }
}

/// `offset + rs(group)`; `offset` is the least element and zero for a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSupport {
    pub offset: BitVector,
    pub group: BitMatrix,
}

impl AffineSupport {
    fn new(offset: BitVector, group: BitMatrix) -> Self {
        let group = group.rref().0;
        let offset = coset_min(&offset, &group);
        AffineSupport { offset, group }
    }

    pub fn is_group(&self) -> bool {
        self.offset.is_zero()
    }

    pub fn points(&self) -> BTreeSet<BitVector> {
        self.group.span_elements().into_iter().map(|g| g ^ self.offset).collect()
    }
}

/// Least element of `v + rs(basis)` for an RREF basis: clear every pivot.
fn coset_min(v: &BitVector, basis: &BitMatrix) -> BitVector {
    basis.rows().iter().fold(*v, |acc, r| match r.leading_index() {
        Some(p) if acc.get(p) => acc ^ *r,
        _ => acc,
    })
}

fn embed_halves(rows: &BitMatrix, upper: bool, m: usize) -> Vec<BitVector> {
    let zero = BitVector::zeros(m);
    rows.rows().iter().map(|r| if upper { BitVector::concat(r, &zero) } else { BitVector::concat(&zero, r) }).collect()
}

/// Closed-form support of a standard Clifford.
///
/// `G_D(P)`: `rs(I + P^{-1}) x Fix(P)^perp`. `G_U(S)`: with `W = ker S` and
/// `chi(w) = w S w^t mod 4`, the points `{0} x (c + W^perp)` where
/// `w.c = chi(w)/2` on a basis of `W`. `G_Omega(r)`: `a_i + b_i = 1` on the
/// first `r` qubits and zero elsewhere.
pub fn support_standard(gate: &StandardGate) -> Result<AffineSupport> {
    let m = gate.m();
    let n = 2 * m;
    match gate {
        StandardGate::Gd(p) => {
            let id = BitMatrix::identity(m);
            let left = id.add(&p.inverse()?).row_space();
            let right = dual_space(&id.add(p).left_kernel(), InnerForm::Euclidean)?;
            let mut rows = embed_halves(&left, true, m);
            rows.extend(embed_halves(&right, false, m));
            Ok(AffineSupport::new(BitVector::zeros(n), BitMatrix::from_rows(rows, n)?))
        }
        StandardGate::Gu(s) => {
            if !s.is_symmetric() {
                return Err(Error::NotSymmetric);
            }
            let w = s.left_kernel();
            let rhs = BitVector::from_bools(&w.rows().iter().map(|wi| quadratic_mod4(s, wi) == 2).collect::<Vec<_>>());
            let c = w.transpose().solve_left(&rhs).ok_or_else(|| Error::Internal("no coset witness for G_U".into()))?;
            let perp = dual_space(&w, InnerForm::Euclidean)?;
            let group = BitMatrix::from_rows(embed_halves(&perp, false, m), n)?;
            Ok(AffineSupport::new(BitVector::concat(&BitVector::zeros(m), &c), group))
        }
        StandardGate::Gomega { r, .. } => {
            if *r > m {
                return Err(Error::InvalidParameter(format!("r = {r} exceeds m = {m}")));
            }
            let rows = (0..*r).map(|i| BitVector::unit(n, i) ^ BitVector::unit(n, m + i)).collect();
            let offset = (0..*r).fold(BitVector::zeros(n), |acc, i| acc ^ BitVector::unit(n, i));
            Ok(AffineSupport::new(offset, BitMatrix::from_rows(rows, n)?))
        }
    }
}

/// Support of `G_1 (x) ... (x) G_m` from the single-qubit supports: the
/// product set, with coordinates interleaved back into `(a | b)` order.
pub fn support_local(gates: &[DenseUnitary], tol: f64) -> Result<BTreeSet<BitVector>> {
    let m = gates.len();
    let mut factors = Vec::with_capacity(m);
    for g in gates {
        if g.m() != 1 {
            return Err(Error::Shape(format!("local factor acts on {} qubits", g.m())));
        }
        factors.push(expand(g, tol)?.support().into_iter().collect::<Vec<_>>());
    }
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; m];
    if factors.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        let mut c = BitVector::zeros(2 * m);
        for (q, f) in factors.iter().enumerate() {
            let s = f[idx[q]];
            c.set(q, s.get(0));
            c.set(m + q, s.get(1));
        }
        out.insert(c);
        let mut q = 0;
        while q < m {
            idx[q] += 1;
            if idx[q] < factors[q].len() {
                break;
            }
            idx[q] = 0;
            q += 1;
        }
        if q == m {
            return Ok(out);
        }
    }
}

/// `{c in Fix(F_G) : G E(c) G^dagger = E(c)}`, as an RREF basis.
pub fn commutant(g: &DenseUnitary, tol: f64) -> Result<BitMatrix> {
    let tableau = phi(g, tol)?;
    let fix = tableau.f().fix_space();
    let mut signs = Vec::with_capacity(fix.nrows());
    for c in fix.rows() {
        let e = PhasedPauli::hermitian(c);
        let image = PhasedPauli::from_dense(&g.conjugate(&e.to_dense()?), tol)
            .ok_or_else(|| Error::Internal("Clifford conjugate is not a Pauli".into()))?;
        if image.point() != *c {
            return Err(Error::Internal("fixed point moved under conjugation".into()));
        }
        signs.push(image.phase() == 4);
    }
    // the sign is a character on Fix(F_G); keep its kernel
    let pivot = signs.iter().position(|&s| s);
    let rows: Vec<BitVector> = fix
        .rows()
        .iter()
        .zip(&signs)
        .enumerate()
        .filter_map(|(i, (c, &s))| match (s, pivot) {
            (false, _) => Some(*c),
            (true, Some(j)) if i != j => Some(*c ^ fix.row(j)),
            _ => None,
        })
        .collect();
    Ok(BitMatrix::from_rows(rows, 2 * g.m())?.rref().0)
}

/// A Clifford `G` with `G s_j G^dagger = t_j` for Hermitian Paulis.
///
/// Both lists must be independent with matching pairwise commutation. The
/// symplectic part is a sweep of at most two transvections per pair that
/// leaves earlier targets in place; remaining signs are fixed by a Pauli.
pub fn clifford_map(sources: &[PhasedPauli], targets: &[PhasedPauli], tol: f64) -> Result<DenseUnitary> {
    if sources.len() != targets.len() {
        return Err(Error::LengthMismatch { left: sources.len(), right: targets.len() });
    }
    let Some(m) = sources.first().map(PhasedPauli::m) else {
        return Err(Error::Precondition("empty Pauli list".into()));
    };
    check_dense(m)?;
    let n = 2 * m;
    if sources.iter().chain(targets).any(|p| p.m() != m || !p.is_hermitian()) {
        return Err(Error::Precondition("Paulis must be Hermitian on a common register".into()));
    }
    let src: Vec<BitVector> = sources.iter().map(PhasedPauli::point).collect();
    let dst: Vec<BitVector> = targets.iter().map(PhasedPauli::point).collect();
    for pts in [&src, &dst] {
        if BitMatrix::from_rows(pts.to_vec(), n)?.rank() < pts.len() {
            return Err(Error::Precondition("Paulis must be independent".into()));
        }
    }
    for i in 0..src.len() {
        for j in i + 1..src.len() {
            if sinner(&src[i], &src[j]) != sinner(&dst[i], &dst[j]) {
                return Err(Error::Precondition(format!("commutation of {i} and {j} is not preserved")));
            }
        }
    }

    let mut applied: Vec<BitVector> = Vec::new();
    let image =
        |x: BitVector, vs: &[BitVector]| vs.iter().fold(x, |acc, v| if sinner(v, &acc) { acc ^ *v } else { acc });
    for j in 0..src.len() {
        let x = image(src[j], &applied);
        let c = dst[j];
        if x == c {
            continue;
        }
        if sinner(&x, &c) {
            applied.push(x ^ c);
        } else {
            // w with <w,x> = <w,c> = 1 and <w,c_i> = <c,c_i> for placed c_i
            let mut cols = vec![x.swap_halves(), c.swap_halves()];
            let mut rhs = vec![true, true];
            for i in 0..j {
                cols.push(dst[i].swap_halves());
                rhs.push(sinner(&c, &dst[i]));
            }
            let system = BitMatrix::from_rows(cols, n)?.transpose();
            let w = system
                .solve_left(&BitVector::from_bools(&rhs))
                .ok_or_else(|| Error::Internal("intermediate transvection system is inconsistent".into()))?;
            applied.push(x ^ w);
            applied.push(w ^ c);
        }
    }
    let f = crate::gf2::compose_transvections(&applied, m);
    let h = preimage(&f)?;

    let mut flips = Vec::with_capacity(src.len());
    for (s, t) in sources.iter().zip(targets) {
        let got = PhasedPauli::from_dense(&h.conjugate(&s.to_dense()?), tol)
            .ok_or_else(|| Error::Internal("Clifford conjugate is not a Pauli".into()))?;
        if got.point() != t.point() {
            return Err(Error::Internal("symplectic sweep missed a target".into()));
        }
        flips.push(got.phase() != t.phase());
    }
    let system = BitMatrix::from_rows(dst.iter().map(BitVector::swap_halves).collect(), n)?.transpose();
    let p = system
        .solve_left(&BitVector::from_bools(&flips))
        .ok_or_else(|| Error::Internal("sign correction is inconsistent".into()))?;
    Ok(PhasedPauli::hermitian(&p).to_dense()?.mul(&h))
}
