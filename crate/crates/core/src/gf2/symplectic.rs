//! The binary symplectic group `Sp(2m)`.
//!
//! Points of `F2^{2m}` are stored as `(a | b)` with `a` in coordinates
//! `0..m` and `b` in `m..2m`. The form is `<(a|b),(c|d)> = a.d + b.c` and a
//! matrix `F` is symplectic when `F Omega F^t = Omega`. Matrices act on row
//! vectors, `x -> x F`.

use std::fmt;

use super::bitmatrix::BitMatrix;
use super::bitvec::{sinner, BitVector};
use crate::error::{Error, Result};

/// A `2m x 2m` binary matrix preserving the symplectic form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymplecticMatrix {
    inner: BitMatrix,
    m: usize,
}

/// Which bilinear form a dual space is taken against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerForm {
    Symplectic,
    Euclidean,
}

impl SymplecticMatrix {
    /// Validates `F Omega F^t = Omega`.
    pub fn new(inner: BitMatrix) -> Result<Self> {
        if !inner.is_square() {
            return Err(Error::Shape(format!("{}x{} is not square", inner.nrows(), inner.ncols())));
        }
        let n = inner.nrows();
        if n % 2 != 0 {
            return Err(Error::OddLength(n));
        }
        let m = n / 2;
        for i in 0..n {
            for j in i..n {
                let expected = j == i + m;
                if sinner(&inner.row(i), &inner.row(j)) != expected {
                    return Err(Error::NotSymplectic);
                }
            }
        }
        Ok(SymplecticMatrix { inner, m })
    }

    pub(crate) fn new_unchecked(inner: BitMatrix) -> Self {
        let m = inner.nrows() / 2;
        debug_assert!(SymplecticMatrix::new(inner.clone()).is_ok());
        SymplecticMatrix { inner, m }
    }

    pub fn identity(m: usize) -> Self {
        SymplecticMatrix { inner: BitMatrix::identity(2 * m), m }
    }

    /// The form matrix `Omega = [[0, I], [I, 0]]` itself.
    pub fn omega(m: usize) -> Self {
        let rows = (0..2 * m).map(|i| BitVector::unit(2 * m, (i + m) % (2 * m))).collect();
        SymplecticMatrix { inner: BitMatrix::from_rows(rows, 2 * m).unwrap(), m }
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> BitMatrix {
        self.inner
    }

    /// Image `x F` of a row vector.
    pub fn apply(&self, x: &BitVector) -> BitVector {
        self.inner.vec_mul(x)
    }

    pub fn mul(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        assert_eq!(self.m, other.m, "symplectic dimension mismatch");
        SymplecticMatrix { inner: self.inner.mul(&other.inner), m: self.m }
    }

    /// `F^{-1} = Omega F^t Omega`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let t = self.inner.transpose();
        let rows = (0..2 * self.m).map(|i| t.row((i + self.m) % (2 * self.m)).swap_halves()).collect();
        SymplecticMatrix { inner: BitMatrix::from_rows(rows, 2 * self.m).unwrap(), m: self.m }
    }

    pub fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    pub fn is_involution(&self) -> bool {
        self.mul(self).is_identity()
    }

    /// Blocks `(A, B, C, D)` of `[[A, B], [C, D]]`.
    pub fn blocks(&self) -> (BitMatrix, BitMatrix, BitMatrix, BitMatrix) {
        let m = self.m;
        (
            self.inner.block(0, 0, m, m),
            self.inner.block(0, m, m, m),
            self.inner.block(m, 0, m, m),
            self.inner.block(m, m, m, m),
        )
    }

    fn residue_generator(&self) -> BitMatrix {
        self.inner.add(&BitMatrix::identity(2 * self.m))
    }

    /// Basis of `Fix(F) = ker(I + F)`.
    pub fn fix_space(&self) -> BitMatrix {
        self.residue_generator().left_kernel()
    }

    /// Basis of `Res(F) = rs(I + F)`.
    pub fn res_space(&self) -> BitMatrix {
        self.residue_generator().row_space()
    }

    /// Whether `<v, vF> = 0` for every `v`.
    ///
    /// Only defined for involutions. For `F^2 = I` the map `q(v) = <v, vF>`
    /// is additive: `q(u+w) = q(u) + q(w) + <u, wF> + <w, uF>` and
    /// `<w, uF> = <wF, uF^2> = <wF, u> = <u, wF>`, so the cross terms cancel
    /// and checking the standard basis is enough.
    pub fn is_hyperbolic(&self) -> Result<bool> {
        if !self.is_involution() {
            return Err(Error::NotInvolution);
        }
        Ok((0..2 * self.m).all(|i| !sinner(&BitVector::unit(2 * self.m, i), &self.inner.row(i))))
    }
}

impl fmt::Display for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m={}", self.m)?;
        write!(f, "{}", self.inner)
    }
}

impl fmt::Debug for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symplectic(m={}) {:?}", self.m, self.inner)
    }
}

/// `T_v = I + Omega v^t v`, acting as `x -> x + <v, x> v`. `T_0 = I`.
pub fn transvection(v: &BitVector) -> Result<SymplecticMatrix> {
    if v.len() % 2 != 0 {
        return Err(Error::OddLength(v.len()));
    }
    let n = v.len();
    let rows = (0..n)
        .map(|i| {
            let e = BitVector::unit(n, i);
            if sinner(v, &e) {
                e ^ *v
            } else {
                e
            }
        })
        .collect();
    Ok(SymplecticMatrix { inner: BitMatrix::from_rows(rows, n)?, m: n / 2 })
}

/// `F_D(P) = [[P, 0], [0, P^{-t}]]`.
pub fn f_d(p: &BitMatrix) -> Result<SymplecticMatrix> {
    let inv_t = p.inverse()?.transpose();
    let m = p.nrows();
    let zero = BitMatrix::zeros(m, m);
    Ok(SymplecticMatrix::new_unchecked(BitMatrix::from_blocks(p, &zero, &zero, &inv_t)))
}

/// `F_U(S) = [[I, S], [0, I]]`.
pub fn f_u(s: &BitMatrix) -> Result<SymplecticMatrix> {
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let m = s.nrows();
    let id = BitMatrix::identity(m);
    Ok(SymplecticMatrix::new_unchecked(BitMatrix::from_blocks(&id, s, &BitMatrix::zeros(m, m), &id)))
}

/// `I_{m|r}`: identity in the top-left `r x r` corner, zero elsewhere.
pub fn partial_identity(m: usize, r: usize) -> BitMatrix {
    let rows = (0..m).map(|i| if i < r { BitVector::unit(m, i) } else { BitVector::zeros(m) }).collect();
    BitMatrix::from_rows(rows, m).unwrap()
}

/// `F_Omega(r) = [[I_{m|-r}, I_{m|r}], [I_{m|r}, I_{m|-r}]]`, swapping the
/// `a` and `b` coordinates of the first `r` qubits.
pub fn f_omega(r: usize, m: usize) -> Result<SymplecticMatrix> {
    if r > m {
        return Err(Error::InvalidParameter(format!("r = {r} exceeds m = {m}")));
    }
    let upper = partial_identity(m, r);
    let lower = BitMatrix::identity(m).add(&upper);
    Ok(SymplecticMatrix::new_unchecked(BitMatrix::from_blocks(&lower, &upper, &upper, &lower)))
}

/// Basis of `{u : <u, v> = 0 for all v in rs(V)}` under the chosen form.
pub fn dual_space(v: &BitMatrix, form: InnerForm) -> Result<BitMatrix> {
    let rows: Vec<BitVector> = match form {
        InnerForm::Euclidean => v.rows().to_vec(),
        InnerForm::Symplectic => {
            if v.ncols() % 2 != 0 {
                return Err(Error::OddLength(v.ncols()));
            }
            v.rows().iter().map(BitVector::swap_halves).collect()
        }
    };
    let paired = BitMatrix::from_rows(rows, v.ncols())?;
    Ok(paired.transpose().left_kernel())
}

/// Ordered `v_1, ..., v_k` with `T_{v_1} T_{v_2} ... T_{v_k} = F`.
///
/// Involutions other than the identity use `dim Res(F)` independent vectors
/// from `Res(F)` when non-hyperbolic, and one extra dependent vector when
/// hyperbolic; these factors commute and are returned sorted. Any other
/// matrix goes through a sweep over symplectic basis pairs that uses at most
/// four transvections per pair.
pub fn transvection_decompose(f: &SymplecticMatrix) -> Vec<BitVector> {
    if f.is_identity() {
        return Vec::new();
    }
    if f.is_involution() {
        let mut vs = involution_factors(f);
        vs.sort();
        return vs;
    }
    sweep_factors(f)
}

fn involution_factors(f: &SymplecticMatrix) -> Vec<BitVector> {
    let n = 2 * f.m();
    let res = f.res_space();
    let r = res.nrows();
    // I + F = Omega V^t M V for a symmetric invertible r x r matrix M.
    let pairing = BitMatrix::from_rows(res.rows().iter().map(BitVector::swap_halves).collect(), n).unwrap().transpose();
    let residue = f.residue_generator();
    let mut gram = BitMatrix::zeros(r, r);
    for i in 0..r {
        let dual = pairing.solve_left(&BitVector::unit(r, i)).expect("Res(F) basis is independent");
        let image = residue.vec_mul(&dual);
        let coords = res.solve_left(&image).expect("image of I + F lies in Res(F)");
        for j in coords.ones_iter() {
            gram.set(i, j, true);
        }
    }
    debug_assert!(gram.is_symmetric());
    let alternating = (0..r).all(|i| !gram.get(i, i));
    let mut extra = None;
    if alternating {
        // M + e_1^t e_1 is invertible and non-alternating for alternating M
        gram.set(0, 0, true);
        extra = Some(res.row(0));
    }
    let w = orthonormal_basis(&gram);
    let w_prime = w.inverse().expect("orthonormal basis is invertible").transpose();
    let mut vs: Vec<BitVector> = w_prime.mul(&res).into_rows();
    vs.extend(extra);
    vs
}

/// Rows `W` with `W M W^t = I` for a symmetric, invertible, non-alternating `M`.
fn orthonormal_basis(gram: &BitMatrix) -> BitMatrix {
    let r = gram.nrows();
    let form = |x: &BitVector, y: &BitVector| gram.vec_mul(x).dot(y);
    let mut ortho: Vec<BitVector> = Vec::new();
    let mut pool: Vec<BitVector> = (0..r).map(|i| BitVector::unit(r, i)).collect();
    while !pool.is_empty() {
        if let Some(pos) = pool.iter().position(|u| form(u, u)) {
            let u = pool.swap_remove(pos);
            for w in pool.iter_mut() {
                if form(w, &u) {
                    *w ^= u;
                }
            }
            ortho.push(u);
        } else {
            // the form is alternating on the pool: pair up a hyperbolic plane
            // with an earlier orthonormal vector
            let y = pool.swap_remove(0);
            let zpos = pool.iter().position(|z| form(&y, z)).expect("form restricted to pool is nondegenerate");
            let z = pool.swap_remove(zpos);
            for w in pool.iter_mut() {
                let (wy, wz) = (form(w, &y), form(w, &z));
                if wz {
                    *w ^= y;
                }
                if wy {
                    *w ^= z;
                }
            }
            let x = ortho.pop().expect("non-alternating form has an anisotropic vector");
            ortho.push(x ^ y ^ z);
            ortho.push(x ^ y);
            ortho.push(x ^ z);
        }
    }
    BitMatrix::from_rows(ortho, r).unwrap()
}

fn sweep_factors(f: &SymplecticMatrix) -> Vec<BitVector> {
    let m = f.m();
    let n = 2 * m;
    let mut cur: Vec<BitVector> = f.matrix().rows().to_vec();
    let mut applied = Vec::new();
    let mut apply = |v: BitVector, cur: &mut Vec<BitVector>| {
        for row in cur.iter_mut() {
            if sinner(&v, row) {
                *row ^= v;
            }
        }
        applied.push(v);
    };
    for i in 0..m {
        let e = BitVector::unit(n, i);
        let fi = BitVector::unit(n, m + i);
        let x = cur[i];
        if x != e {
            if sinner(&x, &e) {
                apply(x ^ e, &mut cur);
            } else {
                let w = bridge(&x, i, m);
                apply(x ^ w, &mut cur);
                apply(w ^ e, &mut cur);
            }
        }
        let y = cur[m + i];
        if y != fi {
            if sinner(&y, &fi) {
                apply(y ^ fi, &mut cur);
            } else {
                let w = e ^ fi;
                apply(y ^ w, &mut cur);
                apply(e, &mut cur);
            }
        }
    }
    debug_assert!(cur.iter().enumerate().all(|(i, r)| *r == BitVector::unit(n, i)));
    // F T_1 ... T_k = I, so F = T_k ... T_1
    applied.reverse();
    applied
}

/// A vector `w` supported on qubits `>= i` with `<w, x> = <w, e_i> = 1`.
fn bridge(x: &BitVector, i: usize, m: usize) -> BitVector {
    let n = 2 * m;
    let mut w = BitVector::unit(n, m + i);
    if !x.get(i) {
        let j = (i + 1..m).find(|&j| x.get(j) || x.get(m + j)).expect("image is supported beyond the current pair");
        if x.get(j) {
            w ^= BitVector::unit(n, m + j);
        } else {
            w ^= BitVector::unit(n, j);
        }
    }
    debug_assert!(sinner(&w, x) && sinner(&w, &BitVector::unit(n, i)));
    w
}

/// Product `T_{v_1} ... T_{v_k}` of a transvection list.
pub fn compose_transvections(vs: &[BitVector], m: usize) -> SymplecticMatrix {
    let mut acc = SymplecticMatrix::identity(m);
    for v in vs {
        acc = acc.mul(&transvection(v).expect("even length"));
    }
    acc
}

/// `F = F_D(P1) F_U(S1) F_Omega(r) F_U(S2) F_D(P2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruhatDecomposition {
    pub p1: BitMatrix,
    pub s1: BitMatrix,
    pub r: usize,
    pub s2: BitMatrix,
    pub p2: BitMatrix,
}

impl BruhatDecomposition {
    pub fn recompose(&self) -> Result<SymplecticMatrix> {
        let m = self.p1.nrows();
        Ok(f_d(&self.p1)?.mul(&f_u(&self.s1)?).mul(&f_omega(self.r, m)?).mul(&f_u(&self.s2)?).mul(&f_d(&self.p2)?))
    }
}

/// Bruhat decomposition by elimination on the lower-left block `C`.
///
/// `P1` comes from row-reducing `C` with leading-one pivoting, `P2` from
/// moving the pivot columns to the front and normalising the trailing
/// diagonal block. The lower-right `(m-r) x (m-r)` block of `S2` is zero.
pub fn bruhat_decompose(f: &SymplecticMatrix) -> Result<BruhatDecomposition> {
    let m = f.m();
    let (_, _, c, _) = f.blocks();
    let (l, e, pivots) = c.echelon_transform();
    let r = pivots.len();
    // K: pivot rows of E, then unit rows for the non-pivot columns; E = I_{m|r} K
    let mut k_rows: Vec<BitVector> = e.rows()[..r].to_vec();
    k_rows.extend((0..m).filter(|j| !pivots.contains(j)).map(|j| BitVector::unit(m, j)));
    let k = BitMatrix::from_rows(k_rows, m)?;
    let right = k.inverse()?;
    let p1 = l.transpose();
    let g = f_d(&p1.inverse()?)?.mul(f).mul(&f_d(&right)?);

    let (_, _, _, d) = g.blocks();
    let d22 = d.block(r, r, m - r, m - r);
    let mut q = BitMatrix::identity(m);
    for i in 0..m - r {
        for j in 0..m - r {
            q.set(r + i, r + j, d22.get(j, i));
        }
    }
    let g = g.mul(&f_d(&q).map_err(|_| Error::Internal("trailing block of D is singular".into()))?);
    let p2 = right.mul(&q).inverse()?;

    let (_, _, c2, d2) = g.blocks();
    if c2 != partial_identity(m, r) {
        return Err(Error::Internal("lower-left block did not normalise".into()));
    }
    let mut s2 = BitMatrix::zeros(m, m);
    for i in 0..r {
        for j in 0..m {
            if d2.get(i, j) {
                s2.set(i, j, true);
                s2.set(j, i, true);
            }
        }
    }
    let rest = g.mul(&f_u(&s2)?).mul(&f_omega(r, m)?);
    let (a3, s1, c3, d3) = rest.blocks();
    if !a3.is_identity() || !c3.is_zero() || !d3.is_identity() || !s1.is_symmetric() {
        return Err(Error::Internal("Bruhat remainder is not of the form F_U(S)".into()));
    }
    Ok(BruhatDecomposition { p1, s1, r, s2, p2 })
}
