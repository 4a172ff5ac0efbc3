//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed even when an
//! earlier criterion fails. Oracles are dense matrices built here from 2x2
//! blocks, or brute-force expansions, never the closed forms under test.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use weylab::clifford::{
    cnot, commutant, hadamard, hermitian_product_coefficients, is_clifford, is_hermitian_product, phi, support_local,
    support_standard, transvection_product, StandardGate,
};
use weylab::gf2::{
    bruhat_decompose, compose_transvections, f_d, transvection_decompose, BitMatrix, BitVector, SymplecticMatrix,
};
use weylab::hierarchy::{find_fixed_pauli, is_generalized_semi_clifford, mcs_support, semi_clifford_decompose};
use weylab::random::{self, SeededRng};
use weylab::weyl::{classify_points, expand, SupportShape};
use weylab::{DenseUnitary, Error, PhasedPauli};

const TOL: f64 = 1e-9;

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn bv(s: &str) -> BitVector {
    s.parse().unwrap()
}

// ---- independent dense oracle for Paulis ----

fn kron_all(blocks: &[[[Complex64; 2]; 2]]) -> DenseUnitary {
    let mut out = DenseUnitary::identity(0);
    for b in blocks {
        let g = DenseUnitary::from_rows(&[vec![b[0][0], b[0][1]], vec![b[1][0], b[1][1]]]).unwrap();
        out = out.kron(&g);
    }
    out
}

/// `w^t i^{a.b} X^a Z^b`, one 2x2 block per qubit, qubit 0 leftmost.
fn oracle_pauli(a: &BitVector, b: &BitVector, t: u8) -> DenseUnitary {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let blocks: Vec<[[Complex64; 2]; 2]> = (0..a.len())
        .map(|q| match (a.get(q), b.get(q)) {
            (false, false) => [[one, zero], [zero, one]],
            (true, false) => [[zero, one], [one, zero]],
            (false, true) => [[one, zero], [zero, -one]],
            // XZ
            (true, true) => [[zero, -one], [one, zero]],
        })
        .collect();
    let overlap = (0..a.len()).filter(|&q| a.get(q) && b.get(q)).count() as f64;
    let angle = std::f64::consts::FRAC_PI_4 * t as f64 + std::f64::consts::FRAC_PI_2 * overlap;
    kron_all(&blocks).scale(Complex64::from_polar(1.0, angle))
}

fn oracle_hermitian(point: &BitVector) -> DenseUnitary {
    let (a, b) = point.halves();
    oracle_pauli(&a, &b, 0)
}

fn support_of(u: &DenseUnitary) -> BTreeSet<BitVector> {
    expand(u, TOL).unwrap().support()
}

// ---- criteria ----

fn cnot_golden() -> Outcome {
    let w = expand(&cnot(), 1e-12).map_err(|e| e.to_string())?;
    let expected = [("0000", 0.5), ("0010", 0.5), ("0100", 0.5), ("0110", -0.5)];
    ensure!(w.len() == 4, "expansion has {} terms", w.len());
    for (s, x) in expected {
        ensure!((w.coefficient(&bv(s)) - c(x, 0.0)).norm() < 1e-12, "coefficient at {s}");
    }
    let f = phi(&cnot(), TOL).map_err(|e| e.to_string())?.f().clone();
    let fd = f_d(&BitMatrix::from_strs(&["11", "01"]).unwrap()).unwrap();
    ensure!(f == fd, "phi(CNOT) = {f}");
    let vs = transvection_decompose(&f);
    ensure!(vs.len() == 3, "{} transvections", vs.len());
    ensure!(compose_transvections(&vs, 2) == f, "transvections do not recompose");
    let supp: Vec<BitVector> = w.support().into_iter().collect();
    let supp_span = BitMatrix::from_rows(supp, 4).unwrap().rref().0;
    let comm = commutant(&cnot(), TOL).map_err(|e| e.to_string())?;
    ensure!(comm == supp_span, "commutant {comm:?} differs from the support");
    ensure!(comm.span_elements().len() == w.len(), "support is not a group");
    Ok("expansion, tableau, 3 transvections, commutant".into())
}

fn example_one() -> Outcome {
    let terms = [("010010", 0.5), ("011001", 0.5), ("001111", 0.5), ("101011", 0.5)];
    let mut w = DenseUnitary::zeros(3);
    for (p, x) in terms {
        w = w.add(&oracle_hermitian(&bv(p)).scale(c(x, 0.0)));
    }
    ensure!(w.is_unitary(TOL), "defect {}", w.unitarity_defect());
    match phi(&w, TOL) {
        Err(Error::NotClifford { .. }) => Ok("unitary, rejected as non-Clifford".into()),
        other => Err(format!("phi returned {other:?}")),
    }
}

fn gl2() -> Vec<BitMatrix> {
    (0u8..16)
        .map(|bits| {
            let s = format!("{:04b}", bits);
            BitMatrix::from_strs(&[&s[..2], &s[2..]]).unwrap()
        })
        .filter(BitMatrix::is_invertible)
        .collect()
}

fn sym2() -> Vec<BitMatrix> {
    (0u8..8)
        .map(|bits| {
            let s = format!("{:03b}", bits);
            let (a, b, d) = (&s[0..1], &s[1..2], &s[2..3]);
            BitMatrix::from_strs(&[&format!("{a}{b}"), &format!("{b}{d}")]).unwrap()
        })
        .collect()
}

fn standard_matches(gate: &StandardGate) -> std::result::Result<(), String> {
    let closed = support_standard(gate).map_err(|e| e.to_string())?.points();
    let brute = support_of(&gate.dense().map_err(|e| e.to_string())?);
    ensure!(closed == brute, "{gate:?}: closed form {} points, expansion {}", closed.len(), brute.len());
    Ok(())
}

fn standard_supports(rng: &mut SeededRng) -> Outcome {
    let mut n = 0;
    for p in gl2() {
        standard_matches(&StandardGate::Gd(p))?;
        n += 1;
    }
    for s in sym2() {
        standard_matches(&StandardGate::Gu(s))?;
        n += 1;
    }
    for r in 0..=2 {
        standard_matches(&StandardGate::Gomega { r, m: 2 })?;
        n += 1;
    }
    ensure!(n == 6 + 8 + 3, "exhaustive set has {n} members");
    for m in [3, 4] {
        for _ in 0..100 {
            standard_matches(&StandardGate::Gd(random::invertible(m, rng)))?;
            standard_matches(&StandardGate::Gu(random::symmetric(m, rng)))?;
            standard_matches(&StandardGate::Gomega { r: rng.gen_range(0..=m), m })?;
        }
    }
    Ok(format!("{n} exhaustive at m=2, 600 random at m=3,4"))
}

fn local_supports(rng: &mut SeededRng) -> Outcome {
    for i in 0..100 {
        let m = 1 + i % 4;
        let gates: Vec<DenseUnitary> = (0..m).map(|_| random::clifford(1, rng)).collect();
        let product = gates.iter().fold(DenseUnitary::identity(0), |acc, g| acc.kron(g));
        let closed = support_local(&gates, TOL).map_err(|e| e.to_string())?;
        ensure!(closed == support_of(&product), "instance {i} at m={m}");
    }
    Ok("100 local products".into())
}

/// Rows and a `c_0` making a Hermitian product: images of `Z_1..Z_k` and of
/// `X_1 + ... + X_k` under a random symplectic map.
fn hermitian_instance(m: usize, k: usize, rng: &mut SeededRng) -> (BitVector, BitMatrix) {
    let f = random::symplectic(m, rng);
    let rows = (0..k).map(|i| f.apply(&BitVector::unit(2 * m, m + i))).collect();
    let x = (0..k).fold(BitVector::zeros(2 * m), |acc, i| acc ^ BitVector::unit(2 * m, i));
    (f.apply(&x), BitMatrix::from_rows(rows, 2 * m).unwrap())
}

fn transvection_products(rng: &mut SeededRng) -> Outcome {
    let mut hermitian = 0;
    for i in 0..200 {
        let m = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=(2 * m).min(4));
        let (c0, rows) = if i % 2 == 0 {
            hermitian_instance(m, k.min(m), rng)
        } else {
            (random::bitvector(2 * m, rng), random::independent_rows(k, 2 * m, rng))
        };
        let dense = transvection_product(&c0, &rows).map_err(|e| e.to_string())?;
        let closed = hermitian_product_coefficients(&c0, &rows, 1e-12).map_err(|e| e.to_string())?;
        let brute = expand(&dense, 1e-12).unwrap();
        ensure!(closed.support() == brute.support(), "instance {i}: supports differ");
        for (p, a) in brute.coefficients() {
            ensure!((closed.coefficient(p) - a).norm() < TOL, "instance {i}: coefficient at {p}");
        }
        let predicted = is_hermitian_product(&c0, &rows).map_err(|e| e.to_string())?;
        ensure!(predicted == dense.is_hermitian(TOL), "instance {i}: Hermiticity predicate");
        if predicted {
            hermitian += 1;
            ensure!(dense.trace().norm() < TOL, "instance {i}: trace {}", dense.trace());
        }
    }
    ensure!(hermitian >= 100, "only {hermitian} Hermitian instances");
    Ok(format!("200 instances, {hermitian} Hermitian"))
}

fn support_inclusion(rng: &mut SeededRng) -> Outcome {
    let (mut groups, mut cosets) = (0, 0);
    for i in 0..200 {
        let m = 1 + i % 3;
        let g = random::clifford(m, rng);
        let comm = commutant(&g, TOL).map_err(|e| e.to_string())?;
        let supp = support_of(&g);
        for s in &supp {
            for b in comm.rows() {
                // symplectic form by hand
                let (sa, sb) = s.halves();
                let (ba, bb) = b.halves();
                ensure!(!(sa.dot(&bb) ^ sb.dot(&ba)), "instance {i}: {s} not orthogonal to {b}");
            }
        }
        let nonzero_trace = g.trace().norm() > TOL;
        match classify_points(&supp, 2 * m) {
            SupportShape::Group(_) => {
                groups += 1;
                ensure!(nonzero_trace, "instance {i}: group support with zero trace");
            }
            SupportShape::Coset { .. } => {
                cosets += 1;
                ensure!(!nonzero_trace, "instance {i}: coset support with nonzero trace");
            }
            SupportShape::Neither => return Err(format!("instance {i}: support is neither")),
        }
    }
    Ok(format!("200 Cliffords, {groups} group and {cosets} coset supports"))
}

fn recomposes(f: &SymplecticMatrix) -> std::result::Result<(), String> {
    let b = bruhat_decompose(f).map_err(|e| e.to_string())?;
    ensure!(b.recompose().map_err(|e| e.to_string())? == *f, "Bruhat recomposition of {f}");
    ensure!(compose_transvections(&transvection_decompose(f), f.m()) == *f, "transvections of {f}");
    Ok(())
}

fn bruhat(rng: &mut SeededRng) -> Outcome {
    let sp2: Vec<SymplecticMatrix> = gl2().into_iter().map(|p| SymplecticMatrix::new(p).unwrap()).collect();
    ensure!(sp2.len() == 6, "Sp(2) has {} elements", sp2.len());
    for f in &sp2 {
        recomposes(f)?;
    }
    for m in 2..=4 {
        for _ in 0..200 {
            recomposes(&random::symplectic(m, rng))?;
        }
    }
    Ok("6 + 600 elements".into())
}

fn pauli_pair(p: &PhasedPauli, q: &PhasedPauli) -> std::result::Result<(), String> {
    let prod = p.mul(q).map_err(|e| e.to_string())?;
    let lhs = oracle_pauli(&prod.a(), &prod.b(), prod.phase());
    let rhs = oracle_pauli(&p.a(), &p.b(), p.phase()).mul(&oracle_pauli(&q.a(), &q.b(), q.phase()));
    ensure!(lhs.approx_eq(&rhs, 1e-12), "{p} * {q} = {prod}");
    Ok(())
}

fn pauli_algebra(rng: &mut SeededRng) -> Outcome {
    let all: Vec<PhasedPauli> =
        BitVector::all(2).flat_map(|p| (0..8).map(move |t| PhasedPauli::from_point(&p, t).unwrap())).collect();
    for p in &all {
        for q in &all {
            pauli_pair(p, q)?;
        }
    }
    for i in 0..1000 {
        let m = 2 + i % 3;
        pauli_pair(&random::pauli(m, rng), &random::pauli(m, rng))?;
    }
    Ok(format!("{} exhaustive pairs, 1000 random", all.len() * all.len()))
}

fn monomial_roundtrip(rng: &mut SeededRng) -> Outcome {
    for i in 0..50 {
        let m = 1 + i % 3;
        let u = random::monomial(m, rng);
        let d = semi_clifford_decompose(&u, TOL).map_err(|e| format!("instance {i}: {e}"))?;
        ensure!(d.rebuild().unwrap().approx_eq(&u, TOL), "instance {i}: rebuild differs");
    }
    for i in 0..10 {
        let m = 1 + i % 3;
        let h = DenseUnitary::embed(&hadamard(), &[i % m], m).unwrap();
        let u = random::monomial(m, rng).mul(&h);
        match semi_clifford_decompose(&u, TOL) {
            Err(Error::NotMonomial { .. }) => {}
            other => return Err(format!("adversarial {i}: {other:?}")),
        }
    }
    Ok("50 rebuilt, 10 rejected".into())
}

fn third_level(rng: &mut SeededRng) -> Outcome {
    let mut exhaustive = 0;
    for m in 1..=3 {
        for i in 0..50 {
            let u = random::third_level(m, rng);
            let cpt = find_fixed_pauli(&u, TOL).map_err(|e| format!("m={m} #{i}: {e}"))?;
            let image = u.conjugate(&oracle_hermitian(&cpt));
            ensure!(support_of(&image).len() == 1, "m={m} #{i}: E({cpt}) does not conjugate to a Pauli");
            let r = mcs_support(&u, TOL).map_err(|e| format!("m={m} #{i}: {e}"))?;
            ensure!(is_clifford(&r.g, TOL), "m={m} #{i}: G is not Clifford");
            ensure!(r.mcs.is_mcs(), "m={m} #{i}: not maximal commutative");
            let pts = r.mcs.points();
            ensure!(pts.len() == 1 << m, "m={m} #{i}: {} points", pts.len());
            ensure!(support_of(&r.g.mul(&u)).is_subset(&pts), "m={m} #{i}: support escapes");
            if r.method == weylab::hierarchy::McsMethod::Exhaustive {
                exhaustive += 1;
            }
            let gsc = is_generalized_semi_clifford(&u, TOL).map_err(|e| format!("m={m} #{i}: {e}"))?;
            ensure!(gsc.certified, "m={m} #{i}: not certified");
        }
    }
    Ok(format!("150 instances, {exhaustive} via exhaustive fallback"))
}

fn counterexample() -> Outcome {
    let g = DenseUnitary::permutation(2, |v| [0, 2, 3, 1][v]);
    let expected = DenseUnitary::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
    ])
    .unwrap();
    ensure!(g.approx_eq(&expected, 0.0), "permutation layout");
    ensure!(is_clifford(&g, TOL), "not Clifford");
    let comm = commutant(&g, TOL).map_err(|e| e.to_string())?;
    ensure!(comm.nrows() == 0, "commutant has dimension {}", comm.nrows());
    // oracle: no nonzero Hermitian Pauli commutes with G
    for p in BitVector::all(4).skip(1) {
        let e = oracle_hermitian(&p);
        ensure!(!g.mul(&e).approx_eq(&e.mul(&g), TOL), "E({p}) commutes");
    }
    Ok("Clifford with trivial commutant".into())
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Duration, Box<dyn Fn(&mut SeededRng) -> Outcome>)> = vec![
        ("1 CNOT golden", Duration::from_secs(1), Box::new(|_| cnot_golden())),
        ("2 non-Clifford unitary", Duration::from_secs(1), Box::new(|_| example_one())),
        ("3 standard supports", Duration::from_secs(60), Box::new(standard_supports)),
        ("4 local supports", Duration::from_secs(30), Box::new(local_supports)),
        ("5 transvection products", Duration::from_secs(60), Box::new(transvection_products)),
        ("6 Clifford support inclusion", Duration::from_secs(60), Box::new(support_inclusion)),
        ("7 Bruhat and transvections", Duration::from_secs(10), Box::new(bruhat)),
        ("8 Pauli algebra", Duration::from_secs(10), Box::new(pauli_algebra)),
        ("9 semi-Clifford roundtrip", Duration::from_secs(30), Box::new(monomial_roundtrip)),
        ("10 fixed Pauli and MCS support", Duration::from_secs(120), Box::new(third_level)),
        ("11 trivial commutant", Duration::from_secs(1), Box::new(|_| counterexample())),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let mut rng = random::seeded(0x5eed + i as u64);
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| run(&mut rng))).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(note) if elapsed > *budget => Err(format!("{note}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(note) => println!("PASS criterion {name}: {note} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} ({elapsed:.2?})");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
