use quatfield_core::fock::{build_fock, charge2, charge4, hamiltonian2, hamiltonian4, sector_weight, Scheme};
use serde::Deserialize;

use crate::cli::{Common, Outcome};
use crate::error::CliError;
use crate::formats::{emit, num, read_json, resolve_table, Csv, ModeTableDoc, SpecDoc, SpeciesChoice};

const SPECTRUM_TOL: f64 = 1e-12;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumConfig {
    modes: Option<ModeTableDoc>,
    spec: Option<SpecDoc>,
    #[serde(default)]
    species: SpeciesChoice,
    n_max: u32,
    /// Sector mixing angle of the two-component scheme.
    #[serde(default, rename = "Theta0")]
    theta0: f64,
}

pub fn run(common: &Common) -> Result<Outcome, CliError> {
    let cfg: SpectrumConfig = read_json(common.require_config()?)?;
    let tol = common.tol_or(SPECTRUM_TOL)?;
    let conv = common.convention();
    let table = resolve_table(cfg.modes.as_ref(), cfg.spec.as_ref(), cfg.species)?;
    let scheme = table.scheme();
    let fs = build_fock(table, cfg.n_max).map_err(CliError::input)?;
    let (h, q) = match scheme {
        Scheme::FourComponent => (hamiltonian4(&fs, conv), charge4(&fs, conv)),
        Scheme::TwoComponent => (hamiltonian2(&fs, cfg.theta0), charge2(&fs, cfg.theta0)),
    };
    let h = h.map_err(CliError::input)?;
    let q = q.map_err(CliError::input)?;

    // Per-quantum energy and charge of each mode.
    let weights: Vec<(f64, f64)> = fs
        .modes()
        .entries()
        .iter()
        .map(|e| {
            let w = match scheme {
                Scheme::FourComponent => conv.component_weight(),
                Scheme::TwoComponent => sector_weight(e.index, cfg.theta0),
            };
            (w * e.energy(), w * e.species.charge_sign())
        })
        .collect();

    let mut outcome = Outcome::default();
    outcome.check(h.is_diagonal(), || "H is not diagonal in the occupation basis".into());
    outcome.check(q.is_diagonal(), || "Q is not diagonal in the occupation basis".into());
    let hq = h.commutator(&q).max_abs();
    outcome.check(hq <= tol, || format!("[H, Q] has entry of size {hq:e}"));

    let h_diag = h.diagonal();
    let q_diag = q.diagonal();
    let mut csv = Csv::new(conv, &["basis", "occupations", "H", "Q"]);
    let mut worst = (0.0f64, 0usize);
    for i in 0..fs.dim() {
        let occ = fs.occupations(i);
        let (e, c) = occ.iter().zip(&weights).fold((0.0, 0.0), |(e, c), (&n, &(we, wq))| {
            (e + n as f64 * we, c + n as f64 * wq)
        });
        let dev = (h_diag[i].re - e).abs().max(h_diag[i].im.abs()).max((q_diag[i].re - c).abs()).max(q_diag[i].im.abs());
        if dev > worst.0 {
            worst = (dev, i);
        }
        let occ_text: Vec<String> = occ.iter().map(u32::to_string).collect();
        csv.row([i.to_string(), occ_text.join(" "), num(h_diag[i].re), num(q_diag[i].re)]);
    }
    outcome.check(worst.0 <= tol, || {
        format!("eigenvalue at basis {} deviates from the occupation sum by {:e}", worst.1, worst.0)
    });
    emit(common.out(), &csv.into_string())?;
    Ok(outcome)
}
