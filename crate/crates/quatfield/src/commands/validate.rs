use quatfield_core::classical::{validate_constraints_with_tol, CONSTRAINT_TOL};
use serde::Serialize;

use crate::cli::{Common, Outcome};
use crate::error::CliError;
use crate::formats::{emit, num, read_json, to_json, SpecDoc};

#[derive(Serialize)]
struct Report {
    convention: &'static str,
    tolerance: f64,
    pass: bool,
    mass_shell: [f64; 2],
    orthogonality: [f64; 2],
    on_shell: [f64; 4],
    effective_momenta: [[f64; 4]; 4],
    violations: Vec<&'static str>,
}

pub fn run(common: &Common) -> Result<Outcome, CliError> {
    let doc: SpecDoc = read_json(common.require_config()?)?;
    let spec = doc.to_spec()?;
    let tol = common.tol_or(CONSTRAINT_TOL)?;
    let report = validate_constraints_with_tol(&spec, tol).map_err(CliError::input)?;
    let violations: Vec<_> = report.violations().collect();
    let out = Report {
        convention: common.convention().as_str(),
        tolerance: report.tolerance,
        pass: report.pass,
        mass_shell: report.mass_shell,
        orthogonality: report.orthogonality,
        on_shell: report.on_shell,
        effective_momenta: report.effective_momenta.map(|p| p.to_array()),
        violations: violations.clone(),
    };
    emit(common.out(), &to_json(&out))?;
    let mut outcome = Outcome::default();
    for v in violations {
        outcome.failures.push(format!("{v} exceeds tolerance {}", num(report.tolerance)));
    }
    Ok(outcome)
}
