//! Levels of the Clifford hierarchy and third-level structure.
//!
//! Level 1 is the phased Paulis, level 2 the Cliffords, and `U` is in level
//! `k` when `U E U^dagger` is in level `k - 1` for every Pauli `E`.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::clifford::{clifford_map, phi};
use crate::dense::{basis_index, basis_vector, c64, DenseUnitary};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::{enumerate_mcs, match_pauli, PhasedPauli, StabilizerGroup, MCS_ENUMERATION_MAX};
use crate::weyl::expand;

/// Smallest level found, or `None` when `U` is above `k_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyVerdict {
    pub level: Option<usize>,
    pub k_max: usize,
    /// For a failure, a Pauli whose conjugate falls outside level `k_max - 1`.
    pub witness: Option<PhasedPauli>,
}

enum Membership {
    In,
    Out(Option<PhasedPauli>),
}

fn basis_paulis(m: usize) -> impl Iterator<Item = PhasedPauli> {
    (0..2 * m).map(move |i| PhasedPauli::hermitian(&BitVector::unit(2 * m, i)))
}

fn nonzero_paulis(m: usize) -> impl Iterator<Item = PhasedPauli> {
    BitVector::all(2 * m).skip(1).map(|c| PhasedPauli::hermitian(&c))
}

fn conj(u: &DenseUnitary, e: &PhasedPauli) -> Result<DenseUnitary> {
    Ok(u.conjugate(&e.to_dense()?))
}

/// Membership in level `k` for a unitary `u`.
///
/// Level 3 only needs the `2m` basis conjugates because Cliffords form a
/// group and `U E(c) U^dagger` is a product of basis conjugates up to phase.
/// Higher levels test every nonzero Pauli since level 3 is not a group.
fn membership(u: &DenseUnitary, k: usize, tol: f64) -> Result<Membership> {
    let m = u.m();
    match k {
        1 => Ok(if match_pauli(u, tol).is_some() { Membership::In } else { Membership::Out(None) }),
        2 => {
            for e in basis_paulis(m) {
                if match_pauli(&conj(u, &e)?, tol).is_none() {
                    return Ok(Membership::Out(Some(e)));
                }
            }
            Ok(Membership::In)
        }
        _ => {
            let probes: Vec<PhasedPauli> = if k == 3 { basis_paulis(m).collect() } else { nonzero_paulis(m).collect() };
            for e in probes {
                if let Membership::Out(_) = membership(&conj(u, &e)?, k - 1, tol)? {
                    return Ok(Membership::Out(Some(e)));
                }
            }
            Ok(Membership::In)
        }
    }
}

/// Smallest `k <= k_max` with `U` in level `k`.
///
/// Levels above 3 need every Pauli conjugate at each step; at `m >= 3` that
/// is refused with a cost estimate.
pub fn level_of(u: &DenseUnitary, k_max: usize, tol: f64) -> Result<HierarchyVerdict> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    u.check_unitary(tol)?;
    let m = u.m();
    if k_max > 3 && m >= 3 {
        let fan = (1u128 << (2 * m)) - 1;
        let estimate = fan.saturating_pow((k_max - 3) as u32).saturating_mul(2 * m as u128);
        return Err(Error::CostTooHigh { m, kmax: k_max, estimate });
    }
    let mut witness = None;
    for k in 1..=k_max {
        match membership(u, k, tol)? {
            Membership::In => return Ok(HierarchyVerdict { level: Some(k), k_max, witness: None }),
            Membership::Out(w) => witness = w,
        }
    }
    Ok(HierarchyVerdict { level: None, k_max, witness })
}

/// Intersection of `Fix(phi(C E(e_i) C^dagger))` over the basis Paulis.
pub fn fixed_pauli_space(c: &DenseUnitary, tol: f64) -> Result<BitMatrix> {
    let m = c.m();
    let mut space = BitMatrix::identity(2 * m);
    for e in basis_paulis(m) {
        let k = conj(c, &e)?;
        let f = phi(&k, tol).map_err(|err| match err {
            Error::NotClifford { .. } => Error::NotThirdLevel { generator: e.to_string() },
            other => other,
        })?;
        let residue = f.f().matrix().add(&BitMatrix::identity(2 * m));
        let combos = space.mul(&residue).left_kernel();
        space = combos.mul(&space).rref().0;
    }
    Ok(space)
}

/// Points `c` with `C E(c) C^dagger` a Pauli, as an RREF basis.
///
/// A point `p` of [`fixed_pauli_space`] only guarantees that
/// `C^dagger E(p) C` is a Pauli `E(c)`; the qualifying `c` are these
/// preimages, and `p -> c` is linear up to phase.
pub fn pauli_preimage_space(c: &DenseUnitary, tol: f64) -> Result<BitMatrix> {
    let m = c.m();
    let cd = c.adjoint();
    let mut rows = Vec::new();
    for p in fixed_pauli_space(c, tol)?.rows() {
        let (point, _) = match_pauli(&conj(&cd, &PhasedPauli::hermitian(p))?, tol)
            .ok_or_else(|| Error::Internal(format!("fixed point {p} does not pull back to a Pauli")))?;
        rows.push(point);
    }
    Ok(BitMatrix::from_rows(rows, 2 * m)?.rref().0)
}

/// The lexicographically least nonzero `c` with `C E(c) C^dagger` a Pauli.
pub fn find_fixed_pauli(c: &DenseUnitary, tol: f64) -> Result<BitVector> {
    let space = pauli_preimage_space(c, tol)?;
    // the RREF row with the last pivot is the least nonzero element
    let x =
        *space.rows().last().ok_or_else(|| Error::Internal("no nonzero point is fixed by every conjugate".into()))?;
    if match_pauli(&conj(c, &PhasedPauli::hermitian(&x))?, tol).is_none() {
        return Err(Error::Internal(format!("point {x} does not conjugate to a Pauli")));
    }
    Ok(x)
}

/// A Clifford `G` such that `G C` commutes with every generator of `S`.
pub fn pointwise_fixing_correction(c: &DenseUnitary, s: &StabilizerGroup, tol: f64) -> Result<DenseUnitary> {
    if s.k() == 0 {
        return Ok(DenseUnitary::identity(c.m()));
    }
    let mut images = Vec::with_capacity(s.k());
    for (i, g) in s.generators().iter().enumerate() {
        let image = PhasedPauli::from_dense(&conj(c, g)?, tol)
            .ok_or_else(|| Error::Precondition(format!("generator {i} ({g}) does not map to a Pauli")))?;
        images.push(image);
    }
    clifford_map(&images, s.generators(), tol)
}

/// `C = phase * D * E(a,0) * G_D(P)` with `D` diagonal and `D[0,0] = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiCliffordDecomposition {
    pub d: DenseUnitary,
    pub a: BitVector,
    pub p: BitMatrix,
    pub phase: Complex64,
}

impl SemiCliffordDecomposition {
    pub fn rebuild(&self) -> Result<DenseUnitary> {
        let m = self.a.len();
        let x = PhasedPauli::new(self.a, BitVector::zeros(m), 0)?.to_dense()?;
        Ok(self.d.mul(&x).mul(&crate::clifford::gate_gd(&self.p)?).scale(self.phase))
    }
}

/// Splits a monomial unitary into diagonal, shift and linear parts.
///
/// The nonzero pattern gives a permutation `pi`; `a = pi(0)`, row `i` of `P`
/// is `pi(e_i) + a`, and `pi(v) = vP + a` is checked on every state.
pub fn semi_clifford_decompose(c: &DenseUnitary, tol: f64) -> Result<SemiCliffordDecomposition> {
    let m = c.m();
    let n = c.dim();
    let mut pi = vec![0usize; n];
    let mut hit = vec![false; n];
    for (col, slot) in pi.iter_mut().enumerate() {
        let mut rows = (0..n).filter(|&r| c.get(r, col).norm() > tol);
        let row = rows.next().ok_or(Error::NotMonomial { column: col })?;
        if rows.next().is_some() || hit[row] {
            return Err(Error::NotMonomial { column: col });
        }
        hit[row] = true;
        *slot = row;
    }
    let a = basis_vector(pi[0], m);
    let rows = (0..m).map(|i| basis_vector(pi[basis_index(&BitVector::unit(m, i))], m) ^ a).collect();
    let p = BitMatrix::from_rows(rows, m)?;
    for (v, &target) in pi.iter().enumerate() {
        if p.vec_mul(&basis_vector(v, m)) ^ a != basis_vector(target, m) {
            return Err(Error::NotAffine { state: v });
        }
    }
    let mut diag: Vec<Complex64> = vec![c64(0.0, 0.0); n];
    for (v, &row) in pi.iter().enumerate() {
        diag[row] = c.get(row, v);
    }
    let phase = diag[0];
    let d = DenseUnitary::diagonal(&diag.iter().map(|x| x / phase).collect::<Vec<_>>())?;
    Ok(SemiCliffordDecomposition { d, a, p, phase })
}

/// Largest `m` accepted by [`is_semi_clifford`].
pub const SEMI_CLIFFORD_SEARCH_MAX: usize = 2;

/// Images of each generator under conjugation, if all are Paulis.
fn pauli_images(u: &DenseUnitary, s: &StabilizerGroup, tol: f64) -> Result<Option<Vec<PhasedPauli>>> {
    let mut out = Vec::with_capacity(s.k());
    for g in s.generators() {
        match PhasedPauli::from_dense(&conj(u, g)?, tol) {
            Some(p) => out.push(p),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// First MCS `S_1` (in enumeration order) with `U S_1 U^dagger` an MCS.
pub fn is_semi_clifford(u: &DenseUnitary, tol: f64) -> Result<Option<(StabilizerGroup, StabilizerGroup)>> {
    let m = u.m();
    if m > SEMI_CLIFFORD_SEARCH_MAX {
        return Err(Error::TooManyQubits { m, max: SEMI_CLIFFORD_SEARCH_MAX });
    }
    for s1 in enumerate_mcs(m)? {
        if let Some(images) = pauli_images(u, &s1, tol)? {
            let s2 = StabilizerGroup::new(m, images)?;
            return Ok(Some((s1, s2)));
        }
    }
    Ok(None)
}

/// How [`mcs_support`] found its answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McsMethod {
    /// Fixed Pauli, descent to the code space, recursion, lift.
    Inductive,
    /// Search over every MCS for one mapped to Paulis.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct McsSupport {
    pub g: DenseUnitary,
    pub mcs: StabilizerGroup,
    pub method: McsMethod,
    /// Candidate assemblies examined by the inductive search.
    pub attempts: usize,
}

fn supported_on(u: &DenseUnitary, gens: &[PhasedPauli], tol: f64) -> Result<bool> {
    let n = 2 * u.m();
    let points: BTreeSet<BitVector> =
        BitMatrix::from_rows(gens.iter().map(PhasedPauli::point).collect(), n)?.span_elements().into_iter().collect();
    Ok(expand(u, tol)?.support().is_subset(&points))
}

/// `I (x) g`: the same Pauli on qubits `2..=m`.
fn lift(g: &PhasedPauli) -> PhasedPauli {
    let z = BitVector::zeros(1);
    PhasedPauli::new(BitVector::concat(&z, &g.a()), BitVector::concat(&z, &g.b()), g.phase()).unwrap()
}

type Candidate = (DenseUnitary, Vec<PhasedPauli>);

/// Cliffords `G` with `G C` supported on `<gens>`, via the inductive route.
/// With `all` unset the search stops at the first success.
fn inductive_candidates(c: &DenseUnitary, tol: f64, all: bool, attempts: &mut usize) -> Result<Vec<Candidate>> {
    let m = c.m();
    if m == 0 {
        return Ok(vec![(DenseUnitary::identity(0), Vec::new())]);
    }
    let space = match pauli_preimage_space(c, tol) {
        Ok(s) => s,
        Err(Error::NotThirdLevel { .. }) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let z1 = PhasedPauli::z(m, 0);
    let mut out: Vec<Candidate> = Vec::new();
    let mut seen: BTreeSet<Vec<BitVector>> = BTreeSet::new();
    let mut points = space.span_elements();
    points.sort();
    for x in points.into_iter().filter(|x| !x.is_zero()) {
        let ex = PhasedPauli::hermitian(&x);
        let Some(image) = PhasedPauli::from_dense(&conj(c, &ex)?, tol) else {
            continue;
        };
        // H C commutes with E(x); B sends E(x) to Z_1
        let h = clifford_map(&[image], &[ex], tol)?;
        let b = clifford_map(&[ex], &[z1], tol)?;
        let c1 = b.mul(&h).mul(c).mul(&b.adjoint());
        let a0 = c1.diagonal_block(true);
        for (g0, gens0) in inductive_candidates(&a0, tol, true, attempts)? {
            *attempts += 1;
            let gens1: Vec<PhasedPauli> = std::iter::once(z1).chain(gens0.iter().map(lift)).collect();
            let mut g1 = DenseUnitary::identity(1).kron(&g0);
            if !supported_on(&g1.mul(&c1), &gens1, tol)? {
                // the lower block may disagree; fall back to fixing the
                // assembled group pointwise when it maps to Paulis
                let s1 = StabilizerGroup::new(m, gens1.clone())?;
                match pauli_images(&c1, &s1, tol)? {
                    Some(images) => g1 = clifford_map(&images, &gens1, tol)?,
                    None => continue,
                }
                if !supported_on(&g1.mul(&c1), &gens1, tol)? {
                    continue;
                }
            }
            let g = b.adjoint().mul(&g1).mul(&b).mul(&h);
            let bd = b.adjoint();
            let gens = gens1
                .iter()
                .map(|e| {
                    PhasedPauli::from_dense(&conj(&bd, e)?, tol)
                        .ok_or_else(|| Error::Internal("Clifford conjugate is not a Pauli".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            let key = BitMatrix::from_rows(gens.iter().map(PhasedPauli::point).collect(), 2 * m)?.rref().0.into_rows();
            if seen.insert(key) {
                out.push((g, gens));
                if !all {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// Largest `m` accepted by [`mcs_support`].
pub const MCS_SUPPORT_MAX: usize = MCS_ENUMERATION_MAX;

/// A Clifford `G` and an MCS `S` with `supp(G C)` inside `S`.
///
/// The inductive route backtracks over every fixed Pauli and every
/// sub-solution. If it finds nothing, every MCS is tried directly; failure of
/// both is reported as an internal error. The answer is always re-verified.
pub fn mcs_support(c: &DenseUnitary, tol: f64) -> Result<McsSupport> {
    let m = c.m();
    if m > MCS_SUPPORT_MAX {
        return Err(Error::TooManyQubits { m, max: MCS_SUPPORT_MAX });
    }
    c.check_unitary(tol)?;
    pauli_preimage_space(c, tol)?;
    let mut attempts = 0;
    let found = inductive_candidates(c, tol, false, &mut attempts)?;
    let (g, gens, method) = match found.into_iter().next() {
        Some((g, gens)) => (g, gens, McsMethod::Inductive),
        None => exhaustive_mcs(c, tol)?
            .map(|(g, gens)| (g, gens, McsMethod::Exhaustive))
            .ok_or_else(|| Error::Internal("no maximal commutative support found".into()))?,
    };
    let mcs = StabilizerGroup::new(m, gens)?;
    if !mcs.is_mcs() || !supported_on(&g.mul(c), mcs.generators(), tol)? || phi(&g, tol).is_err() {
        return Err(Error::Internal("maximal commutative support failed verification".into()));
    }
    Ok(McsSupport { g, mcs, method, attempts })
}

fn exhaustive_mcs(c: &DenseUnitary, tol: f64) -> Result<Option<Candidate>> {
    for s in enumerate_mcs(c.m())? {
        if let Some(images) = pauli_images(c, &s, tol)? {
            let g = clifford_map(&images, s.generators(), tol)?;
            return Ok(Some((g, s.generators().to_vec())));
        }
    }
    Ok(None)
}

/// `C` maps the span of `S` into the span of `S'`: every element of `S`
/// conjugates to an operator supported on the points of `S'`.
pub fn maps_span(c: &DenseUnitary, s: &StabilizerGroup, s_prime: &StabilizerGroup, tol: f64) -> Result<bool> {
    let target = s_prime.points();
    for e in s.elements(&BitVector::zeros(s.k()))? {
        if !expand(&conj(c, &e)?, tol)?.support().is_subset(&target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Witness that `C` is generalized semi-Clifford.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedSemiClifford {
    pub certified: bool,
    pub s: StabilizerGroup,
    pub s_prime: StabilizerGroup,
}

/// Uses [`mcs_support`]: `G C` fixes `S` pointwise, so `C` sends `S` to
/// `G^dagger S G`. The span inclusion is then checked element by element.
pub fn is_generalized_semi_clifford(c: &DenseUnitary, tol: f64) -> Result<GeneralizedSemiClifford> {
    let found = mcs_support(c, tol)?;
    let gd = found.g.adjoint();
    let images = found
        .mcs
        .generators()
        .iter()
        .map(|e| {
            PhasedPauli::from_dense(&conj(&gd, e)?, tol)
                .ok_or_else(|| Error::Internal("Clifford conjugate is not a Pauli".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let s_prime = StabilizerGroup::new(c.m(), images)?;
    let certified = maps_span(c, &found.mcs, &s_prime, tol)?;
    Ok(GeneralizedSemiClifford { certified, s: found.mcs, s_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{ccz, cnot, cs, gate_gd, hadamard, t_gate};
    use crate::random;

    const TOL: f64 = 1e-9;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn p(s: &str) -> PhasedPauli {
        s.parse().unwrap()
    }

    #[test]
    fn levels_of_basic_gates() {
        assert_eq!(level_of(&p("X").to_dense().unwrap(), 3, TOL).unwrap().level, Some(1));
        assert_eq!(level_of(&cnot(), 3, TOL).unwrap().level, Some(2));
        assert_eq!(level_of(&t_gate(), 3, TOL).unwrap().level, Some(3));
        assert_eq!(level_of(&ccz(), 3, TOL).unwrap().level, Some(3));
        let sqrt_t = DenseUnitary::diagonal(&[c64(1.0, 0.0), c64(0.0, std::f64::consts::PI / 8.0).exp()]).unwrap();
        let v = level_of(&sqrt_t, 3, TOL).unwrap();
        assert_eq!(v.level, None);
        assert!(v.witness.is_some());
        assert_eq!(level_of(&sqrt_t, 4, TOL).unwrap().level, Some(4));
    }

    #[test]
    fn level_guards() {
        let not_unitary = DenseUnitary::identity(1).scale(c64(2.0, 0.0));
        assert!(matches!(level_of(&not_unitary, 3, TOL), Err(Error::NotUnitary(_))));
        assert!(matches!(level_of(&ccz(), 4, TOL), Err(Error::CostTooHigh { .. })));
    }

    #[test]
    fn fixed_paulis() {
        assert_eq!(find_fixed_pauli(&t_gate(), TOL).unwrap(), bv("01"));
        assert_eq!(find_fixed_pauli(&ccz(), TOL).unwrap(), bv("000001"));
        assert_eq!(find_fixed_pauli(&cnot(), TOL).unwrap(), bv("0001"));
        let sqrt_t = DenseUnitary::diagonal(&[c64(1.0, 0.0), c64(0.0, std::f64::consts::PI / 8.0).exp()]).unwrap();
        assert!(matches!(find_fixed_pauli(&sqrt_t, TOL), Err(Error::NotThirdLevel { .. })));
    }

    #[test]
    fn correction_for_x_against_z() {
        let x = p("X").to_dense().unwrap();
        let s = StabilizerGroup::new(1, vec![p("Z")]).unwrap();
        let g = pointwise_fixing_correction(&x, &s, TOL).unwrap();
        let gc = g.mul(&x);
        assert!(gc.conjugate(&p("Z").to_dense().unwrap()).approx_eq(&p("Z").to_dense().unwrap(), 1e-12));
        let already = pointwise_fixing_correction(&t_gate(), &s, TOL).unwrap();
        assert!(already
            .mul(&t_gate())
            .conjugate(&p("Z").to_dense().unwrap())
            .approx_eq(&p("Z").to_dense().unwrap(), 1e-12));
        assert!(matches!(
            pointwise_fixing_correction(&hadamard().mul(&t_gate()).mul(&hadamard()).mul(&t_gate()), &s, TOL),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn decompose_t_times_x() {
        let tx = t_gate().mul(&p("X").to_dense().unwrap());
        let d = semi_clifford_decompose(&tx, TOL).unwrap();
        assert_eq!(d.a, bv("1"));
        assert!(d.p.is_identity());
        assert!(d.d.approx_eq(&t_gate(), 1e-12));
        assert!(d.rebuild().unwrap().approx_eq(&tx, 1e-12));
    }

    #[test]
    fn decompose_standard_cases() {
        let p2 = BitMatrix::from_strs(&["11", "10"]).unwrap();
        let d = semi_clifford_decompose(&gate_gd(&p2).unwrap(), TOL).unwrap();
        assert_eq!(d.p, p2);
        assert!(d.a.is_zero() && d.d.approx_eq(&DenseUnitary::identity(2), 1e-12));
        let t3 = t_gate().tensor_power(3);
        let d = semi_clifford_decompose(&t3, TOL).unwrap();
        assert!(d.p.is_identity() && d.a.is_zero() && d.d.approx_eq(&t3, 1e-12));
        assert!(matches!(semi_clifford_decompose(&hadamard(), TOL), Err(Error::NotMonomial { column: 0 })));
    }

    #[test]
    fn non_affine_permutation_rejected() {
        // a transposition of two nonzero states is not affine on three qubits
        let u = DenseUnitary::permutation(3, |v| match v {
            1 => 2,
            2 => 1,
            3 => 3,
            x => x,
        });
        let u = u.mul(&DenseUnitary::permutation(3, |v| match v {
            3 => 5,
            5 => 3,
            x => x,
        }));
        assert!(matches!(semi_clifford_decompose(&u, TOL), Err(Error::NotAffine { .. })));
    }

    #[test]
    fn semi_clifford_witnesses() {
        let (s1, s2) = is_semi_clifford(&t_gate(), TOL).unwrap().unwrap();
        assert_eq!(s1.points(), StabilizerGroup::z_group(1).points());
        assert_eq!(s2.points(), StabilizerGroup::z_group(1).points());
        assert!(is_semi_clifford(&cnot(), TOL).unwrap().is_some());
        assert!(is_semi_clifford(&ccz(), TOL).is_err());
        let mut rng = random::seeded(5);
        for _ in 0..5 {
            assert!(is_semi_clifford(&random::third_level(2, &mut rng), TOL).unwrap().is_some());
        }
    }

    #[test]
    fn diagonal_support_is_z_group() {
        let r = mcs_support(&ccz(), TOL).unwrap();
        assert_eq!(r.mcs.points(), StabilizerGroup::z_group(3).points());
    }

    #[test]
    fn mcs_support_on_composites() {
        let tcs = t_gate().kron(&DenseUnitary::identity(1)).mul(&cs());
        for u in [tcs, cnot(), t_gate()].iter() {
            let r = mcs_support(u, TOL).unwrap();
            assert!(r.mcs.is_mcs());
            let gsc = is_generalized_semi_clifford(u, TOL).unwrap();
            assert!(gsc.certified);
        }
    }

    #[test]
    fn cnot_fixes_z_span_without_support() {
        let z = StabilizerGroup::z_group(2);
        assert!(maps_span(&cnot(), &z, &z, TOL).unwrap());
        assert!(!expand(&cnot(), TOL).unwrap().support().is_subset(&z.points()));
    }

    #[test]
    fn random_corpus_small() {
        let mut rng = random::seeded(11);
        for m in 1..=3 {
            for _ in 0..4 {
                let u = random::third_level(m, &mut rng);
                let c = find_fixed_pauli(&u, TOL).unwrap();
                assert!(match_pauli(&conj(&u, &PhasedPauli::hermitian(&c)).unwrap(), TOL).is_some());
                let r = mcs_support(&u, TOL).unwrap();
                let pts = r.mcs.points();
                assert_eq!(pts.len(), 1 << m);
                assert!(expand(&r.g.mul(&u), TOL).unwrap().support().is_subset(&pts));
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn fixes_pointwise(u: &DenseUnitary, s: &StabilizerGroup) -> bool {
            s.generators().iter().all(|g| {
                let e = g.to_dense().unwrap();
                u.mul(&e).approx_eq(&e.mul(u), 1e-9)
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn correction_fixes_pointwise_iff_supported(seed in any::<u64>(), m in 1usize..=3) {
                let mut rng = random::seeded(seed);
                let u = random::third_level(m, &mut rng);
                let r = mcs_support(&u, TOL).unwrap();
                let gc = r.g.mul(&u);
                prop_assert!(fixes_pointwise(&gc, &r.mcs));
                prop_assert!(expand(&gc, TOL).unwrap().support().is_subset(&r.mcs.points()));
                // without the correction the two properties still agree
                let supported = expand(&u, TOL).unwrap().support().is_subset(&r.mcs.points());
                prop_assert_eq!(supported, fixes_pointwise(&u, &r.mcs));
            }

            #[test]
            fn monomial_roundtrip(seed in any::<u64>(), m in 1usize..=3) {
                let u = random::monomial(m, &mut random::seeded(seed));
                let d = semi_clifford_decompose(&u, TOL).unwrap();
                prop_assert!(d.rebuild().unwrap().approx_eq(&u, TOL));
            }

            #[test]
            fn levels_survive_clifford_factors(seed in any::<u64>(), m in 1usize..=2) {
                let mut rng = random::seeded(seed);
                let u = random::diagonal_third_level(m, &mut rng);
                let v = random::clifford(m, &mut rng).mul(&u).mul(&random::clifford(m, &mut rng));
                let level = |g: &DenseUnitary| level_of(g, 3, TOL).unwrap().level.map(|k| k.max(2));
                prop_assert_eq!(level(&u), level(&v));
            }
        }
    }
}
