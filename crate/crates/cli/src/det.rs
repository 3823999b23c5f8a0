//! `det` subcommand: correlation matrix and its determinant.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use wiretap_core::chanmodel::main_factors;
use wiretap_core::CorrelationSpec;

use crate::error::{CliError, CliResult};

fn parse_list(field: &str, text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("{field}: '{}' is not a number", s.trim())))
        })
        .collect()
}

/// Coefficients from `--eta v1,v2,...`.
pub fn eta_from_list(text: &str) -> CliResult<Vec<f64>> {
    let eta = parse_list("eta", text)?;
    CorrelationSpec::new(eta.clone(), 0.0).map_err(|e| CliError::Config(format!("eta: {e}")))?;
    Ok(eta)
}

/// Coefficients recovered from `--matrix "r1;r2;r3"` with comma-separated rows.
pub fn eta_from_matrix(text: &str) -> CliResult<Vec<f64>> {
    let rows = text
        .split(';')
        .map(|r| parse_list("matrix", r))
        .collect::<CliResult<Vec<_>>>()?;
    let m = rows.len();
    if rows.iter().any(|r| r.len() != m) {
        return Err(CliError::Config("matrix: rows must all have as many entries as there are rows".into()));
    }
    let u = DMatrix::from_fn(m, m, |i, j| rows[i][j]);
    let spec = CorrelationSpec::from_correlation_matrix(&u, 0.0).map_err(|e| CliError::Config(format!("matrix: {e}")))?;
    Ok(spec.eta)
}

/// Human-readable report: `eta`, `U`, the product-form determinant and the
/// LU determinant.
pub fn report(eta: &[f64]) -> CliResult<String> {
    let f = main_factors(eta)?;
    let mut out = String::new();
    let list: Vec<String> = eta.iter().map(|e| format!("{e}")).collect();
    let _ = writeln!(out, "eta = [{}]", list.join(", "));
    out.push_str("U =\n");
    for i in 0..f.u.nrows() {
        let row: Vec<String> = (0..f.u.ncols()).map(|j| format!("{:>10.6}", f.u[(i, j)])).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
    let _ = writeln!(out, "det(U) = {:.10}", f.det_u);
    let _ = writeln!(out, "det(U) direct = {:.10}", f.det_direct());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_matrix_round_trip() {
        let eta = eta_from_matrix("1,0.765,-0.8075;0.765,1,-0.855;-0.8075,-0.855,1").unwrap();
        let text = report(&eta).unwrap();
        assert!(text.contains("det(U) = 0.0880"), "{text}");
    }

    #[test]
    fn bad_input() {
        assert!(eta_from_list("0.5,x").is_err());
        assert!(eta_from_list("0.5,1.0").is_err());
        assert!(eta_from_matrix("1,0.5;0.5,1,0").is_err());
        assert_eq!(eta_from_list(" 0.6, -0.7,0.8").unwrap(), vec![0.6, -0.7, 0.8]);
    }
}
