use quatfield_core::lattice::{run as run_lattice, LatticeState};
use serde::Deserialize;

use crate::cli::{Common, Outcome};
use crate::error::CliError;
use crate::formats::{emit, num, read_json, Csv, SpecDoc};

const DRIFT_TOL: f64 = 1e-6;
const CHARGE_TOL: f64 = 1e-8;
const REVERSIBILITY_TOL: f64 = 1e-10;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvolveConfig {
    spec: SpecDoc,
    n: usize,
    dx: f64,
    dt: f64,
    steps: usize,
    #[serde(default = "one")]
    sample_every: usize,
    #[serde(default)]
    reversibility: bool,
    charge_tol: Option<f64>,
}

fn one() -> usize {
    1
}

pub fn run(common: &Common) -> Result<Outcome, CliError> {
    let cfg: EvolveConfig = read_json(common.require_config()?)?;
    let drift_tol = common.tol_or(DRIFT_TOL)?;
    let charge_tol = cfg.charge_tol.unwrap_or(CHARGE_TOL);
    let conv = common.convention();
    let spec = cfg.spec.to_spec()?;
    if cfg.sample_every == 0 {
        return Err(CliError::Input("sample_every must be at least 1".into()));
    }
    let mut state = LatticeState::init_from_plane_wave(&spec, cfg.n, cfg.dx, cfg.dt).map_err(CliError::input)?;
    let initial = state.clone();
    let samples = run_lattice(&mut state, cfg.steps, cfg.sample_every, conv);

    let mut csv = Csv::new(
        conv,
        &["time", "energy", "charge1", "charge2", "charge3", "charge4", "energy_drift_rel"],
    );
    for s in &samples {
        let mut row = vec![num(s.time), num(s.energy)];
        row.extend(s.charges.iter().map(|&q| num(q)));
        row.push(num(s.energy_drift_rel));
        csv.row(row);
    }
    emit(common.out(), &csv.into_string())?;

    let mut outcome = Outcome::default();
    let max_drift = samples.iter().map(|s| s.energy_drift_rel.abs()).fold(0.0, f64::max);
    outcome.check(max_drift <= drift_tol, || format!("energy drift {max_drift:e} exceeds {drift_tol:e}"));
    let q0 = samples[0].charges;
    for (a, &q_start) in q0.iter().enumerate() {
        let bound = charge_tol * q_start.abs().max(1.0);
        let worst = samples.iter().map(|s| (s.charges[a] - q_start).abs()).fold(0.0, f64::max);
        outcome.check(worst <= bound, || format!("charge{} changed by {worst:e}, bound {bound:e}", a + 1));
    }
    if cfg.reversibility {
        state.reverse_momenta();
        state.advance(cfg.steps);
        state.reverse_momenta();
        let err = max_field_difference(&state, &initial);
        outcome.check(err <= REVERSIBILITY_TOL, || {
            format!("reversed run differs from initial state by {err:e}")
        });
    }
    Ok(outcome)
}

fn max_field_difference(a: &LatticeState, b: &LatticeState) -> f64 {
    (0..4)
        .flat_map(|c| {
            let fields = a.field(c).iter().zip(b.field(c)).map(|(x, y)| (x - y).norm());
            let momenta = a.momentum(c).iter().zip(b.momentum(c)).map(|(x, y)| (x - y).norm());
            fields.chain(momenta).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}
