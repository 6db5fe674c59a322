use quatfield_core::field::{reconstruction_deviation, Variant};
use quatfield_core::fock::{build_fock, ModeTable, SpeciesSet};
use quatfield_core::FourVector;
use serde::Deserialize;

use crate::cli::{Common, Outcome};
use crate::error::CliError;
use crate::formats::{emit, num, read_json, Csv, SpecDoc};

const RECONSTRUCT_TOL: f64 = 1e-10;
const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Grid {
    origin: [f64; 4],
    step: [f64; 4],
    count: [usize; 4],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReconstructConfig {
    spec: SpecDoc,
    #[serde(default = "first_variant")]
    variant: u8,
    grid: Grid,
}

fn first_variant() -> u8 {
    1
}

impl Grid {
    fn points(&self) -> Result<Vec<FourVector>, CliError> {
        let total = self.count.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c));
        match total {
            Some(n) if n > 0 && n <= MAX_POINTS => {}
            _ => return Err(CliError::Input(format!("grid must hold between 1 and {MAX_POINTS} points"))),
        }
        if self.origin.iter().chain(&self.step).any(|v| !v.is_finite()) {
            return Err(CliError::Input("grid origin and step must be finite".into()));
        }
        let [ct, c1, c2, c3] = self.count;
        let coord = |axis: usize, i: usize| self.origin[axis] + i as f64 * self.step[axis];
        let mut pts = Vec::with_capacity(ct * c1 * c2 * c3);
        for it in 0..ct {
            for i1 in 0..c1 {
                for i2 in 0..c2 {
                    for i3 in 0..c3 {
                        pts.push(FourVector::new(coord(0, it), coord(1, i1), coord(2, i2), coord(3, i3)));
                    }
                }
            }
        }
        Ok(pts)
    }
}

pub fn run(common: &Common, variant_flag: Option<u8>) -> Result<Outcome, CliError> {
    let cfg: ReconstructConfig = read_json(common.require_config()?)?;
    let tol = common.tol_or(RECONSTRUCT_TOL)?;
    let number = variant_flag.unwrap_or(cfg.variant);
    let variant = Variant::from_number(number)
        .ok_or_else(|| CliError::Input(format!("variant must be 1-4, got {number}")))?;
    let spec = cfg.spec.to_spec()?;
    let points = cfg.grid.points()?;
    let table = ModeTable::four_component(&spec, SpeciesSet::Both).map_err(CliError::input)?;
    let fs = build_fock(table, 1).map_err(CliError::input)?;

    let mut csv = Csv::new(
        common.convention(),
        &["t", "x1", "x2", "x3", "classical_w", "classical_x", "classical_y", "classical_z",
          "quantum_w", "quantum_x", "quantum_y", "quantum_z", "deviation"],
    );
    let mut worst = (0.0f64, 0usize);
    for (i, x) in points.iter().enumerate() {
        let (classical, quantum, dev) = reconstruction_deviation(&fs, &spec, *x, variant).map_err(CliError::input)?;
        if dev > worst.0 || dev.is_nan() {
            worst = (dev, i);
        }
        let mut row: Vec<String> = x.to_array().iter().map(|&v| num(v)).collect();
        row.extend(classical.to_array().iter().map(|&v| num(v)));
        row.extend(quantum.to_array().iter().map(|&v| num(v)));
        row.push(num(dev));
        csv.row(row);
    }
    emit(common.out(), &csv.into_string())?;

    let mut outcome = Outcome::default();
    outcome.check(worst.0 <= tol, || {
        format!("variant {number}: deviation {:e} at grid point {} exceeds {tol:e}", worst.0, worst.1)
    });
    Ok(outcome)
}
