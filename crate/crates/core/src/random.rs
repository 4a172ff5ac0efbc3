//! Seeded random instances for property suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clifford::{gate_gd, preimage};
use crate::dense::{basis_vector, omega8, DenseUnitary};
use crate::gf2::{compose_transvections, BitMatrix, BitVector, SymplecticMatrix};
use crate::pauli::PhasedPauli;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn bitvector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitVector {
    BitVector::from_bits(rng.gen::<u128>(), n)
}

/// A product of `4m + 2` random transvections.
pub fn symplectic<R: Rng + ?Sized>(m: usize, rng: &mut R) -> SymplecticMatrix {
    let vs: Vec<BitVector> = (0..4 * m + 2).map(|_| bitvector(2 * m, rng)).collect();
    compose_transvections(&vs, m)
}

pub fn invertible<R: Rng + ?Sized>(m: usize, rng: &mut R) -> BitMatrix {
    loop {
        let rows = (0..m).map(|_| bitvector(m, rng)).collect();
        let p = BitMatrix::from_rows(rows, m).unwrap();
        if p.is_invertible() {
            return p;
        }
    }
}

pub fn symmetric<R: Rng + ?Sized>(m: usize, rng: &mut R) -> BitMatrix {
    let mut s = BitMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let x = rng.gen::<bool>();
            s.set(i, j, x);
            s.set(j, i, x);
        }
    }
    s
}

/// `k <= n` independent rows of length `n`.
pub fn independent_rows<R: Rng + ?Sized>(k: usize, n: usize, rng: &mut R) -> BitMatrix {
    assert!(k <= n);
    let mut rows: Vec<BitVector> = Vec::with_capacity(k);
    while rows.len() < k {
        let v = bitvector(n, rng);
        let trial = BitMatrix::from_rows(rows.iter().copied().chain([v]).collect(), n).unwrap();
        if trial.rank() == rows.len() + 1 {
            rows.push(v);
        }
    }
    BitMatrix::from_rows(rows, n).unwrap()
}

pub fn pauli<R: Rng + ?Sized>(m: usize, rng: &mut R) -> PhasedPauli {
    PhasedPauli::from_point(&bitvector(2 * m, rng), rng.gen_range(0..8)).unwrap()
}

/// `E(p) * preimage(F)` for a random symplectic `F` and point `p`.
pub fn clifford<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DenseUnitary {
    let g = preimage(&symplectic(m, rng)).expect("dense size");
    PhasedPauli::hermitian(&bitvector(2 * m, rng)).to_dense().unwrap().mul(&g)
}

/// A random product of `T`, `S`, `CS`, `CZ` and `CCZ` factors: a diagonal
/// `diag(w^{t(v)})` where `t` has linear terms in `Z8`, quadratic terms in
/// `2 Z8` and cubic terms in `4 Z8`.
pub fn diagonal_third_level<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DenseUnitary {
    let linear: Vec<u8> = (0..m).map(|_| rng.gen_range(0..8)).collect();
    let mut quadratic = vec![vec![0u8; m]; m];
    let mut cubic = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            quadratic[i][j] = 2 * rng.gen_range(0..4);
            for k in j + 1..m {
                if rng.gen::<bool>() {
                    cubic.push((i, j, k));
                }
            }
        }
    }
    let entries: Vec<_> = (0..1usize << m)
        .map(|idx| {
            let v = basis_vector(idx, m);
            let mut t = 0u32;
            for i in v.ones_iter() {
                t += linear[i] as u32;
                for j in v.ones_iter().filter(|&j| j > i) {
                    t += quadratic[i][j] as u32;
                }
            }
            t += 4 * cubic.iter().filter(|&&(i, j, k)| v.get(i) && v.get(j) && v.get(k)).count() as u32;
            omega8((t % 8) as u8)
        })
        .collect();
    DenseUnitary::diagonal(&entries).unwrap()
}

/// `G1 D G2` with random Cliffords around a diagonal third-level gate.
pub fn third_level<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DenseUnitary {
    let g1 = clifford(m, rng);
    let d = diagonal_third_level(m, rng);
    let g2 = clifford(m, rng);
    g1.mul(&d).mul(&g2)
}

/// `D E(a,0) G_D(P)` with random diagonal `D`, shift `a` and `P`.
pub fn monomial<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DenseUnitary {
    let d = diagonal_third_level(m, rng);
    let a = bitvector(m, rng);
    let x = PhasedPauli::new(a, BitVector::zeros(m), 0).unwrap().to_dense().unwrap();
    d.mul(&x).mul(&gate_gd(&invertible(m, rng)).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::phi;

    #[test]
    fn seeded_streams_repeat() {
        let a = symplectic(3, &mut seeded(9));
        let b = symplectic(3, &mut seeded(9));
        assert_eq!(a, b);
    }

    #[test]
    fn random_cliffords_are_clifford() {
        let mut rng = seeded(1);
        for m in 1..=3 {
            assert!(phi(&clifford(m, &mut rng), 1e-9).is_ok());
        }
    }

    #[test]
    fn diagonal_is_unitary_and_not_always_clifford() {
        let mut rng = seeded(2);
        let any_non_clifford = (0..20).any(|_| phi(&diagonal_third_level(2, &mut rng), 1e-9).is_err());
        assert!(any_non_clifford);
    }
}
