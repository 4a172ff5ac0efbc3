//! Seeded property suites behind `weylab verify`.

use std::collections::BTreeSet;

use clap::ValueEnum;
use rand::Rng;
use serde::Serialize;

use weylab::clifford::{
    commutant, hermitian_product_coefficients, is_clifford, is_hermitian_product, phi, support_local, support_standard,
    transvection_product, StandardGate,
};
use weylab::gf2::{bruhat_decompose, compose_transvections, transvection_decompose, BitVector};
use weylab::hierarchy::{find_fixed_pauli, level_of, mcs_support, semi_clifford_decompose};
use weylab::random::{self, SeededRng};
use weylab::weyl::{classify_points, expand, SupportShape};
use weylab::{DenseUnitary, PhasedPauli};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Phase-exact Pauli products against dense products.
    Pauli,
    /// Bruhat and transvection recomposition of random symplectic matrices.
    Bruhat,
    /// Clifford supports lie in the symplectic dual of the commutant.
    #[value(alias = "prop2")]
    SupportInclusion,
    /// Closed-form supports of the three standard gate families.
    #[value(alias = "prop3")]
    StandardSupports,
    /// Supports of tensor products of single-qubit Cliffords.
    #[value(alias = "prop4")]
    LocalSupports,
    /// Closed-form coefficients of transvection products.
    #[value(alias = "thm1")]
    TransvectionProducts,
    /// Monomial decomposition roundtrip.
    #[value(alias = "thm2")]
    Monomial,
    /// Fixed Pauli and maximal commutative support of third-level gates.
    #[value(alias = "thm3")]
    ThirdLevel,
    /// Levels are unchanged by Clifford multiplication.
    Levels,
}

impl Suite {
    /// Largest `m` the suite accepts, before the configured `m_max`.
    pub fn m_limit(self) -> usize {
        match self {
            Suite::ThirdLevel => 3,
            Suite::Levels => 2,
            Suite::Pauli | Suite::Bruhat => 64,
            _ => weylab::dense::MAX_DENSE_QUBITS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Tally for one named property.
struct Tally {
    name: &'static str,
    passed: usize,
    failed: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, passed: 0, failed: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, instance: usize, why: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(format!("instance {instance}: {}", why()));
            }
        }
    }

    fn check(self) -> Check {
        let total = self.passed + self.failed;
        let detail = match self.first_failure {
            None => format!("{}/{total} passed", self.passed),
            Some(f) => format!("{}/{total} passed; first failure at {f}", self.passed),
        };
        Check { name: self.name.to_string(), pass: self.failed == 0, detail }
    }
}

fn support(u: &DenseUnitary, tol: f64) -> BTreeSet<BitVector> {
    expand(u, tol).map(|w| w.support()).unwrap_or_default()
}

pub fn run(suite: Suite, m: usize, count: usize, seed: u64, tol: f64) -> Vec<Check> {
    let mut rng = random::seeded(seed);
    let rng = &mut rng;
    match suite {
        Suite::Pauli => pauli(m, count, rng),
        Suite::Bruhat => bruhat(m, count, rng),
        Suite::SupportInclusion => support_inclusion(m, count, tol, rng),
        Suite::StandardSupports => standard_supports(m, count, tol, rng),
        Suite::LocalSupports => local_supports(m, count, tol, rng),
        Suite::TransvectionProducts => transvection_products(m, count, tol, rng),
        Suite::Monomial => monomial_roundtrip(m, count, tol, rng),
        Suite::ThirdLevel => third_level(m, count, tol, rng),
        Suite::Levels => levels(m, count, tol, rng),
    }
}

fn pauli(m: usize, count: usize, rng: &mut SeededRng) -> Vec<Check> {
    let mut group = Tally::new("inverse");
    let mut dense = Tally::new("dense product");
    for i in 0..count {
        let (p, q) = (random::pauli(m, rng), random::pauli(m, rng));
        let id = p.mul(&p.inverse()).ok() == Some(PhasedPauli::identity(m));
        group.record(id, i, || format!("{p} times its inverse"));
        if m <= weylab::dense::MAX_DENSE_QUBITS {
            let ok = match (p.mul(&q), p.to_dense(), q.to_dense()) {
                (Ok(pq), Ok(dp), Ok(dq)) => pq.to_dense().is_ok_and(|d| d.approx_eq(&dp.mul(&dq), 1e-12)),
                _ => false,
            };
            dense.record(ok, i, || format!("{p} * {q}"));
        }
    }
    vec![group.check(), dense.check()]
}

fn bruhat(m: usize, count: usize, rng: &mut SeededRng) -> Vec<Check> {
    let mut b = Tally::new("bruhat recomposition");
    let mut t = Tally::new("transvection recomposition");
    for i in 0..count {
        let f = random::symplectic(m, rng);
        let ok = bruhat_decompose(&f).and_then(|d| d.recompose()).is_ok_and(|g| g == f);
        b.record(ok, i, || format!("{f}"));
        let ok = compose_transvections(&transvection_decompose(&f), m) == f;
        t.record(ok, i, || format!("{f}"));
    }
    vec![b.check(), t.check()]
}

fn support_inclusion(m: usize, count: usize, tol: f64, rng: &mut SeededRng) -> Vec<Check> {
    let mut inclusion = Tally::new("support in dual of commutant");
    let mut shape = Tally::new("group iff nonzero trace");
    for i in 0..count {
        let g = random::clifford(m, rng);
        let supp = support(&g, tol);
        let ok = commutant(&g, tol).is_ok_and(|comm| {
            supp.iter().all(|s| comm.rows().iter().all(|c| !weylab::gf2::symplectic_inner(s, c).unwrap_or(true)))
        });
        inclusion.record(ok, i, || "support point pairs with a commutant vector".into());
        let nonzero = g.trace().norm() > tol;
        let ok = match classify_points(&supp, 2 * m) {
            SupportShape::Group(_) => nonzero,
            SupportShape::Coset { .. } => !nonzero,
            SupportShape::Neither => false,
        };
        shape.record(ok, i, || format!("trace {}", g.trace()));
    }
    vec![inclusion.check(), shape.check()]
}

fn standard_supports(m: usize, count: usize, tol: f64, rng: &mut SeededRng) -> Vec<Check> {
    let mut d = Tally::new("G_D support");
    let mut u = Tally::new("G_U support");
    let mut o = Tally::new("G_Omega support");
    let matches = |gate: &StandardGate| -> bool {
        match (support_standard(gate), gate.dense()) {
            (Ok(s), Ok(g)) => s.points() == support(&g, tol),
            _ => false,
        }
    };
    for i in 0..count {
        let gd = StandardGate::Gd(random::invertible(m, rng));
        d.record(matches(&gd), i, || format!("{gd:?}"));
        let gu = StandardGate::Gu(random::symmetric(m, rng));
        u.record(matches(&gu), i, || format!("{gu:?}"));
        let go = StandardGate::Gomega { r: rng.gen_range(0..=m), m };
        o.record(matches(&go), i, || format!("{go:?}"));
    }
    vec![d.check(), u.check(), o.check()]
}

fn local_supports(m: usize, count: usize, tol: f64, rng: &mut SeededRng) -> Vec<Check> {
    let mut t = Tally::new("local product support");
    for i in 0..count {
        let gates: Vec<DenseUnitary> = (0..m).map(|_| random::clifford(1, rng)).collect();
        let product = gates.iter().fold(DenseUnitary::identity(0), |acc, g| acc.kron(g));
        let ok = support_local(&gates, tol).is_ok_and(|s| s == support(&product, tol));
        t.record(ok, i, || "product set differs".into());
    }
    vec![t.check()]
}

fn transvection_products(m: usize, count: usize, tol: f64, rng: &mut SeededRng) -> Vec<Check> {
    let mut coeffs = Tally::new("closed-form coefficients");
    let mut herm = Tally::new("Hermitian predicate");
    let mut trace = Tally::new("Hermitian products are traceless");
    for i in 0..count {
        let k = rng.gen_range(1..=(2 * m).min(4));
        let c0 = random::bitvector(2 * m, rng);
        let rows = random::independent_rows(k, 2 * m, rng);
        let (Ok(dense), Ok(closed), Ok(pred)) = (
            transvection_product(&c0, &rows),
            hermitian_product_coefficients(&c0, &rows, 1e-12),
            is_hermitian_product(&c0, &rows),
        ) else {
            coeffs.record(false, i, || "construction failed".into());
            continue;
        };
        let ok = expand(&dense, 1e-12).is_ok_and(|w| {
            w.support() == closed.support()
                && w.coefficients().iter().all(|(p, a)| (closed.coefficient(p) - a).norm() < tol)
        });
        coeffs.record(ok, i, || format!("c0 = {c0}"));
        herm.record(pred == dense.is_hermitian(tol), i, || format!("predicate says {pred}"));
        if pred {
            trace.record(dense.trace().norm() < tol, i, || format!("trace {}", dense.trace()));
        }
    }
    vec![coeffs.check(), herm.check(), trace.check()]
}

fn monomial_roundtrip(m: usize, count: usize, tol: f64, rng: &mut SeededRng) -> Vec<Check> {
    let mut t = Tally::new("monomial roundtrip");
    for i in 0..count {
        let u = random::monomial(m, rng);
        let ok = semi_clifford_decompose(&u, tol).and_then(|d| d.rebuild()).is_ok_and(|r| r.approx_eq(&u, tol));
        t.record(ok, i, || "rebuild differs".into());
    }
    vec![t.check()]
}

fn third_level(m: usize, count: usize, tol: f64, rng: &mut SeededRng) -> Vec<Check> {
    let mut fixed = Tally::new("fixed Pauli");
    let mut mcs = Tally::new("maximal commutative support");
    for i in 0..count {
        let u = random::third_level(m, rng);
        let ok = find_fixed_pauli(&u, tol).is_ok_and(|c| {
            let e = PhasedPauli::hermitian(&c).to_dense().expect("dense size");
            support(&u.conjugate(&e), tol).len() == 1
        });
        fixed.record(ok, i, || "no verified fixed Pauli".into());
        let result = mcs_support(&u, tol);
        let ok = result.as_ref().is_ok_and(|r| {
            let pts = r.mcs.points();
            is_clifford(&r.g, tol) && pts.len() == 1 << m && support(&r.g.mul(&u), tol).is_subset(&pts)
        });
        mcs.record(ok, i, || match result {
            Err(e) => e.to_string(),
            Ok(_) => "postcondition".into(),
        });
    }
    vec![fixed.check(), mcs.check()]
}

fn levels(m: usize, count: usize, tol: f64, rng: &mut SeededRng) -> Vec<Check> {
    let mut t = Tally::new("level invariant under Cliffords");
    for i in 0..count {
        let u = random::diagonal_third_level(m, rng);
        let wrapped = random::clifford(m, rng).mul(&u).mul(&random::clifford(m, rng));
        // a Pauli times Cliffords is only a Clifford, so levels below 2 are lifted
        let level = |g: &DenseUnitary| level_of(g, 3, tol).ok().and_then(|v| v.level).map(|k| k.max(2));
        let (before, after) = (level(&u), level(&wrapped));
        let expected = if phi(&u, tol).is_ok() { 2 } else { 3 };
        let ok = before == Some(expected) && after == Some(expected);
        t.record(ok, i, || format!("{before:?} vs {after:?}"));
    }
    vec![t.check()]
}
