mod config;
mod io;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use weylab::clifford::{commutant, gate_gd, gate_gomega, gate_gu, named_gate, phi};
use weylab::gf2::{bruhat_decompose, compose_transvections, transvection_decompose, BitMatrix};
use weylab::hierarchy::{
    find_fixed_pauli, is_generalized_semi_clifford, is_semi_clifford, level_of, mcs_support, semi_clifford_decompose,
    SEMI_CLIFFORD_SEARCH_MAX,
};
use weylab::weyl::{expand, synthesize};
use weylab::{DenseUnitary, PhasedPauli};

use config::{Overrides, Settings};
use io::{Failure, Outcome};
use suites::{Check, Suite};

#[derive(Parser, Debug)]
#[command(name = "weylab", version, about = "Pauli expansions, symplectic calculus and Clifford hierarchy tools")]
struct Cli {
    /// TOML file with `tolerance`, `m_max` and `seed`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Numerical tolerance.
    #[arg(long = "tol", global = true)]
    tolerance: Option<f64>,
    /// Largest number of qubits accepted on input.
    #[arg(long, global = true)]
    m_max: Option<usize>,
    /// Seed for randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct MatrixInput {
    /// Matrix JSON file, or `-` for standard input.
    #[arg(default_value = "-")]
    input: String,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a gate as matrix JSON; several specs are multiplied in order.
    ///
    /// Specs: h s t x y z cnot cz swap cs ccz id, optionally `name@q,..`
    /// with 0-based qubits (needs --m); `gd:P`, `gu:S` with `P`, `S` either
    /// comma-separated rows or an F2 text file; `gomega:R` (needs --m).
    Gate {
        #[arg(required = true)]
        specs: Vec<String>,
        /// Number of qubits for embedded or `gomega` specs.
        #[arg(long)]
        m: Option<usize>,
        /// Tensor power applied to the product.
        #[arg(long, default_value_t = 1)]
        tensor: usize,
    },
    /// Pauli expansion, one `PAULI re im` line per nonzero term.
    Expand {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Support points as `a|b`, one per line.
    Support {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Symplectic image and signs of a Clifford.
    Phi {
        #[command(flatten)]
        input: MatrixInput,
    },
    /// Bruhat decomposition of a symplectic matrix in F2 text.
    Bruhat {
        /// F2 text file, or `-` for standard input.
        #[arg(default_value = "-")]
        input: String,
    },
    /// Transvection factors of a symplectic matrix in F2 text.
    Transvections {
        /// F2 text file, or `-` for standard input.
        #[arg(default_value = "-")]
        input: String,
    },
    /// Smallest hierarchy level up to --kmax.
    Classify {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
    /// A Pauli conjugated to a Pauli by a third-level gate.
    FixPauli {
        #[command(flatten)]
        input: MatrixInput,
    },
    /// Clifford correction and maximal commutative support.
    McsSupport {
        #[command(flatten)]
        input: MatrixInput,
    },
    /// Monomial decomposition and semi-Clifford witnesses.
    Semiclifford {
        #[command(flatten)]
        input: MatrixInput,
    },
    /// Run a seeded property suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Number of random instances.
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    inputs: Value,
    result: Value,
    checks: Vec<Check>,
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.to_string(), pass, detail: detail.into() }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let flags = Overrides { tolerance: cli.tolerance, m_max: cli.m_max, seed: cli.seed };
    let settings = match Settings::load(cli.config.as_deref(), &flags, |k| std::env::var(k).ok()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command, &settings) {
        Ok((out, ok)) => {
            print!("{out}");
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Output text and whether every check passed.
fn run(command: Command, s: &Settings) -> Outcome<(String, bool)> {
    let tol = s.tolerance;
    let load =
        |input: &MatrixInput| -> Outcome<DenseUnitary> { io::parse_matrix(&io::read_input(&input.input)?, s.m_max) };
    let settings = json!({ "tolerance": tol, "m_max": s.m_max });
    let report = |command, inputs: Value, result, checks: Vec<Check>| -> Outcome<(String, bool)> {
        let ok = checks.iter().all(|c| c.pass);
        let r = Report { command, inputs, result, checks };
        Ok((serde_json::to_string_pretty(&r).expect("report serializes") + "\n", ok))
    };
    match command {
        Command::Gate { specs, m, tensor } => {
            let g = build_gate(&specs, m, tensor, s.m_max)?;
            Ok((io::matrix_json(&g) + "\n", true))
        }
        Command::Expand { input, format } => {
            let u = load(&input)?;
            let w = expand(&u, tol)?;
            match format {
                Format::Text => Ok((io::expansion_lines(&w), true)),
                Format::Json => {
                    let terms: Vec<Value> = w
                        .coefficients()
                        .iter()
                        .map(|(c, a)| json!({ "pauli": PhasedPauli::hermitian(c).to_string(), "point": io::point(c), "re": a.re, "im": a.im }))
                        .collect();
                    let back = synthesize(&w)?.approx_eq(&u, tol * u.dim() as f64);
                    let checks = vec![check("resynthesis", back, "sum of terms rebuilds the input")];
                    report(
                        "expand",
                        json!({ "input": input.input, "settings": settings }),
                        json!({ "m": u.m(), "terms": terms }),
                        checks,
                    )
                }
            }
        }
        Command::Support { input, format } => {
            let u = load(&input)?;
            let w = expand(&u, tol)?;
            match format {
                Format::Text => Ok((w.support().iter().map(|c| io::point(c) + "\n").collect(), true)),
                Format::Json => {
                    let shape = w.support_shape();
                    let mut result = json!({
                        "m": u.m(),
                        "points": w.support().iter().map(io::point).collect::<Vec<_>>(),
                        "shape": shape.label(),
                    });
                    if let Some(g) = shape.base_group() {
                        result["group"] = json!(io::rows(g));
                    }
                    if let weylab::weyl::SupportShape::Coset { offset, .. } = &shape {
                        result["offset"] = json!(io::point(offset));
                    }
                    report("support", json!({ "input": input.input, "settings": settings }), result, vec![])
                }
            }
        }
        Command::Phi { input } => {
            let u = load(&input)?;
            let t = phi(&u, tol)?;
            let f = t.f();
            let comm = commutant(&u, tol)?;
            let checks = vec![check(
                "symplectic",
                weylab::gf2::SymplecticMatrix::new(f.matrix().clone()).is_ok(),
                "F preserves the form",
            )];
            let result = json!({
                "m": t.m(),
                "matrix": io::rows(f.matrix()),
                "signs": t.signs().to_string(),
                "involution": f.is_involution(),
                "fix": io::rows(&f.fix_space()),
                "commutant": io::rows(&comm),
            });
            report("phi", json!({ "input": input.input, "settings": settings }), result, checks)
        }
        Command::Bruhat { input } => {
            let f = io::parse_symplectic(&io::read_input(&input)?, s.m_max)?;
            let b = bruhat_decompose(&f)?;
            let same = b.recompose()? == f;
            let result = json!({
                "m": f.m(),
                "p1": io::rows(&b.p1), "s1": io::rows(&b.s1), "r": b.r,
                "s2": io::rows(&b.s2), "p2": io::rows(&b.p2),
            });
            report(
                "bruhat",
                json!({ "input": input }),
                result,
                vec![check("recompose", same, "factors multiply back to the input")],
            )
        }
        Command::Transvections { input } => {
            let f = io::parse_symplectic(&io::read_input(&input)?, s.m_max)?;
            let vs = transvection_decompose(&f);
            let same = compose_transvections(&vs, f.m()) == f;
            let result =
                json!({ "m": f.m(), "count": vs.len(), "vectors": vs.iter().map(io::point).collect::<Vec<_>>() });
            report(
                "transvections",
                json!({ "input": input }),
                result,
                vec![check("recompose", same, "product of transvections equals the input")],
            )
        }
        Command::Classify { input, kmax } => {
            let u = load(&input)?;
            let v = level_of(&u, kmax, tol)?;
            let result = json!({
                "level": v.level,
                "k_max": v.k_max,
                "witness": v.witness.map(|w| w.to_string()),
            });
            report("classify", json!({ "input": input.input, "kmax": kmax, "settings": settings }), result, vec![])
        }
        Command::FixPauli { input } => {
            let u = load(&input)?;
            let c = find_fixed_pauli(&u, tol)?;
            let e = PhasedPauli::hermitian(&c);
            let image = PhasedPauli::from_dense(&u.conjugate(&e.to_dense()?), tol);
            let result = json!({
                "point": io::point(&c),
                "pauli": e.to_string(),
                "image": image.map(|p| p.to_string()),
            });
            let checks = vec![check("image is a Pauli", image.is_some(), "C E(c) C^dagger expands to one term")];
            report("fix-pauli", json!({ "input": input.input, "settings": settings }), result, checks)
        }
        Command::McsSupport { input } => {
            let u = load(&input)?;
            let r = mcs_support(&u, tol)?;
            let pts = r.mcs.points();
            let inside = expand(&r.g.mul(&u), tol)?.support().is_subset(&pts);
            let result = json!({
                "g": serde_json::to_value(&r.g).expect("matrix serializes"),
                "mcs": r.mcs.generators().iter().map(PhasedPauli::to_string).collect::<Vec<_>>(),
                "method": format!("{:?}", r.method).to_lowercase(),
                "attempts": r.attempts,
            });
            let checks = vec![
                check("maximal commutative", r.mcs.is_mcs(), format!("{} points", pts.len())),
                check("support inclusion", inside, "supp(G C) lies in the group"),
                check("G is Clifford", phi(&r.g, tol).is_ok(), ""),
            ];
            report("mcs-support", json!({ "input": input.input, "settings": settings }), result, checks)
        }
        Command::Semiclifford { input } => {
            let u = load(&input)?;
            u.check_unitary(tol)?;
            let mut checks = Vec::new();
            let decomposition = match semi_clifford_decompose(&u, tol) {
                Ok(d) => {
                    let diag: Vec<Value> =
                        (0..d.d.dim()).map(|i| json!([d.d.get(i, i).re, d.d.get(i, i).im])).collect();
                    checks.push(check("rebuild", d.rebuild()?.approx_eq(&u, tol), "D E(a,0) G_D(P) times the phase"));
                    json!({ "a": d.a.to_string(), "p": io::rows(&d.p), "phase": [d.phase.re, d.phase.im], "diagonal": diag })
                }
                Err(e) => json!({ "error": e.to_string() }),
            };
            let witness = if u.m() <= SEMI_CLIFFORD_SEARCH_MAX {
                match is_semi_clifford(&u, tol)? {
                    Some((s1, s2)) => json!({
                        "semi_clifford": true,
                        "s1": s1.generators().iter().map(PhasedPauli::to_string).collect::<Vec<_>>(),
                        "s2": s2.generators().iter().map(PhasedPauli::to_string).collect::<Vec<_>>(),
                    }),
                    None => json!({ "semi_clifford": false }),
                }
            } else {
                json!({ "semi_clifford": null, "reason": format!("search runs for m <= {SEMI_CLIFFORD_SEARCH_MAX}") })
            };
            let generalized = match is_generalized_semi_clifford(&u, tol) {
                Ok(g) => {
                    checks.push(check("generalized certificate", g.certified, "span of S maps into span of S'"));
                    json!({
                        "certified": g.certified,
                        "s": g.s.generators().iter().map(PhasedPauli::to_string).collect::<Vec<_>>(),
                        "s_prime": g.s_prime.generators().iter().map(PhasedPauli::to_string).collect::<Vec<_>>(),
                    })
                }
                Err(e) => json!({ "error": e.to_string() }),
            };
            let result = json!({ "decomposition": decomposition, "witness": witness, "generalized": generalized });
            report("semiclifford", json!({ "input": input.input, "settings": settings }), result, checks)
        }
        Command::Verify { suite, m, count } => {
            let limit = suite.m_limit().min(s.m_max);
            if m == 0 || m > limit {
                return Err(Failure::Usage(format!("--m {m} outside 1..={limit} for this suite")));
            }
            let checks = suites::run(suite, m, count, s.seed, tol);
            let passed = checks.iter().filter(|c| c.pass).count();
            let inputs = json!({ "suite": suite, "m": m, "count": count, "seed": s.seed, "settings": settings });
            let result = json!({ "checks_passed": passed, "checks_failed": checks.len() - passed });
            report("verify", inputs, result, checks)
        }
    }
}

/// Inline rows separated by commas, or else a path to an F2 text file.
fn parse_rows(arg: &str) -> Outcome<BitMatrix> {
    if !arg.is_empty() && arg.chars().all(|c| matches!(c, '0' | '1' | ',')) {
        let rows: Vec<&str> = arg.split(',').collect();
        return BitMatrix::from_strs(&rows).map_err(|e| Failure::Usage(format!("bad rows {arg:?}: {e}")));
    }
    let text = io::read_input(arg)?;
    weylab::gf2::parse_f2_text(&text).map(|(m, _)| m).map_err(|e| Failure::Usage(format!("{arg}: {e}")))
}

fn single_gate(spec: &str, m: Option<usize>) -> Outcome<DenseUnitary> {
    let usage = |msg: String| Failure::Usage(msg);
    if let Some(rows) = spec.strip_prefix("gd:") {
        return gate_gd(&parse_rows(rows)?).map_err(|e| usage(e.to_string()));
    }
    if let Some(rows) = spec.strip_prefix("gu:") {
        return gate_gu(&parse_rows(rows)?).map_err(|e| usage(e.to_string()));
    }
    if let Some(r) = spec.strip_prefix("gomega:") {
        let r: usize = r.parse().map_err(|_| usage(format!("bad rank in {spec:?}")))?;
        let m = m.ok_or_else(|| usage(format!("{spec:?} needs --m")))?;
        return gate_gomega(r, m).map_err(|e| usage(e.to_string()));
    }
    let (name, qubits) = match spec.split_once('@') {
        Some((n, q)) => {
            let qs = q
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| usage(format!("bad qubit list in {spec:?}"))))
                .collect::<Outcome<Vec<_>>>()?;
            (n, Some(qs))
        }
        None => (spec, None),
    };
    let gate = if name == "id" {
        DenseUnitary::identity(qubits.as_ref().map_or(1, Vec::len))
    } else {
        named_gate(name).ok_or_else(|| usage(format!("unknown gate {name:?}")))?
    };
    match qubits {
        None => Ok(gate),
        Some(qs) => {
            let m = m.ok_or_else(|| usage(format!("{spec:?} needs --m")))?;
            DenseUnitary::embed(&gate, &qs, m).map_err(|e| usage(e.to_string()))
        }
    }
}

fn build_gate(specs: &[String], m: Option<usize>, tensor: usize, m_max: usize) -> Outcome<DenseUnitary> {
    if tensor == 0 {
        return Err(Failure::Usage("--tensor must be at least 1".into()));
    }
    if let Some(m) = m.filter(|&m| m > m_max) {
        return Err(Failure::Usage(format!("--m {m} exceeds m_max = {m_max}")));
    }
    let mut product: Option<DenseUnitary> = None;
    for spec in specs {
        let g = single_gate(spec, m)?;
        if g.m() * tensor > m_max {
            return Err(Failure::Usage(format!("{spec:?} gives {} qubits, above m_max = {m_max}", g.m() * tensor)));
        }
        product = Some(match product {
            None => g,
            Some(p) => p.try_mul(&g).map_err(|e| Failure::Usage(format!("{spec:?}: {e}")))?,
        });
    }
    let g = product.expect("at least one spec");
    Ok(g.tensor_power(tensor))
}
