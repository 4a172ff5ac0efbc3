//! Input parsing and output formatting.

use std::io::Read;

use weylab::gf2::{parse_f2_text, BitMatrix, BitVector, SymplecticMatrix};
use weylab::weyl::WeylExpansion;
use weylab::{DenseUnitary, PhasedPauli};

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad invocation or unreadable input: exit 2.
    Usage(String),
    /// The input is valid but the computation refuses it: exit 1.
    Domain(String),
}

impl From<weylab::Error> for Failure {
    fn from(e: weylab::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

pub type Outcome<T> = Result<T, Failure>;

/// Reads a path, or standard input for `-`.
pub fn read_input(path: &str) -> Outcome<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("cannot read standard input: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))
    }
}

pub fn parse_matrix(text: &str, m_max: usize) -> Outcome<DenseUnitary> {
    let u: DenseUnitary = serde_json::from_str(text).map_err(|e| Failure::Usage(format!("bad matrix JSON: {e}")))?;
    if u.m() > m_max {
        return Err(Failure::Usage(format!("{} qubits exceeds m_max = {m_max}", u.m())));
    }
    Ok(u)
}

pub fn parse_symplectic(text: &str, m_max: usize) -> Outcome<SymplecticMatrix> {
    let (matrix, _) = parse_f2_text(text).map_err(|e| Failure::Usage(e.to_string()))?;
    if matrix.nrows() > 2 * m_max {
        return Err(Failure::Usage(format!("{} rows exceeds 2 m_max = {}", matrix.nrows(), 2 * m_max)));
    }
    SymplecticMatrix::new(matrix).map_err(|e| Failure::Usage(e.to_string()))
}

pub fn matrix_json(u: &DenseUnitary) -> String {
    serde_json::to_string(u).expect("matrix serializes")
}

pub fn rows(matrix: &BitMatrix) -> Vec<String> {
    matrix.rows().iter().map(BitVector::to_string).collect()
}

/// `a|b` for a point of `F2^{2m}`.
pub fn point(c: &BitVector) -> String {
    let (a, b) = c.halves();
    format!("{a}|{b}")
}

/// Rounded to 12 decimals and printed in shortest form, `-0` as `0`.
pub fn number(x: f64) -> String {
    let snapped = (x * 1e12).round() / 1e12;
    let snapped = if snapped == 0.0 { 0.0 } else { snapped };
    format!("{snapped}")
}

pub fn expansion_lines(w: &WeylExpansion) -> String {
    let mut out = String::new();
    for (c, alpha) in w.coefficients() {
        let label = PhasedPauli::hermitian(c).to_string();
        out.push_str(&format!("{label} {} {}\n", number(alpha.re), number(alpha.im)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_are_canonical() {
        assert_eq!(number(-0.0), "0");
        assert_eq!(number(0.5000000000000001), "0.5");
        assert_eq!(number(-1e-17), "0");
        assert_eq!(number(std::f64::consts::FRAC_1_SQRT_2), "0.707106781187");
    }

    #[test]
    fn matrix_limits() {
        let text = matrix_json(&DenseUnitary::identity(3));
        assert!(parse_matrix(&text, 3).is_ok());
        assert!(matches!(parse_matrix(&text, 2), Err(Failure::Usage(_))));
        assert!(matches!(parse_matrix("{\"m\":1}", 3), Err(Failure::Usage(_))));
    }

    #[test]
    fn symplectic_text() {
        assert!(parse_symplectic("m=1\n01\n10\n", 3).is_ok());
        assert!(matches!(parse_symplectic("11\n11\n", 3), Err(Failure::Usage(_))));
    }
}
