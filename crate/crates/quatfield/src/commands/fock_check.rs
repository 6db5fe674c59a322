use std::collections::BTreeSet;

use quatfield_core::field::{check_field_family, field_commutator, FieldFamily};
use quatfield_core::fock::{annihilation, build_fock, ccr_report, creation, FockSpace, ModeId, ModeTable};
use quatfield_core::FourVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cli::{Common, Outcome};
use crate::error::CliError;
use crate::formats::{emit, read_json, resolve_table, to_json, ModeTableDoc, SpecDoc, SpeciesChoice};

const CCR_TOL: f64 = 1e-12;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FockCheckConfig {
    modes: Option<ModeTableDoc>,
    spec: Option<SpecDoc>,
    #[serde(default)]
    species: SpeciesChoice,
    n_max: u32,
    #[serde(default = "two")]
    field_n_max: u32,
    #[serde(default = "two_points")]
    points: usize,
}

fn two() -> u32 {
    2
}

fn two_points() -> usize {
    2
}

#[derive(Serialize)]
struct LadderDoc {
    /// `ccr[i][j]`: `[a_i, a_j†]` equals `δ_ij·1` below the cutoff.
    ccr: Vec<Vec<bool>>,
    sub_cutoff_deviation: Vec<Vec<f64>>,
    /// Diagonal value of `[a_i, a_i†]` on the top occupation level.
    top_defect: Vec<f64>,
    annihilators_commute: bool,
    creators_commute: bool,
}

#[derive(Serialize)]
struct FieldDoc {
    family: &'static str,
    a: u8,
    b: u8,
    x: [f64; 4],
    y: [f64; 4],
    expected: [f64; 2],
    max_deviation: f64,
    pass: bool,
}

#[derive(Serialize)]
struct Report {
    convention: &'static str,
    seed: u64,
    n_max: u32,
    dim: usize,
    modes: ModeTableDoc,
    ladder: LadderDoc,
    fields: Vec<FieldDoc>,
    pass: bool,
}

fn ladder_checks(fs: &FockSpace, tol: f64, outcome: &mut Outcome) -> Result<LadderDoc, CliError> {
    let n = fs.mode_count();
    let mut ccr = vec![vec![false; n]; n];
    let mut dev = vec![vec![0.0; n]; n];
    let mut top_defect = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            let r = ccr_report(fs, ModeId(i), ModeId(j)).map_err(CliError::input)?;
            ccr[i][j] = r.holds(fs.n_max(), tol);
            dev[i][j] = if r.same_mode { r.sub_cutoff_deviation } else { r.outside_deviation_max };
            if i == j {
                top_defect[i] = r.top_defect.first().copied().unwrap_or(0.0);
            }
            outcome.check(ccr[i][j], || format!("[a_{i}, a_{j}†] fails the truncated relation"));
        }
    }
    let lowers: Vec<_> = (0..n).map(|i| annihilation(fs, ModeId(i))).collect::<Result<_, _>>().map_err(CliError::input)?;
    let raisers: Vec<_> = (0..n).map(|i| creation(fs, ModeId(i))).collect::<Result<_, _>>().map_err(CliError::input)?;
    let all_commute = |ops: &[quatfield_core::sparse::OperatorMatrix]| {
        (0..n).all(|i| (i + 1..n).all(|j| ops[i].commutator(&ops[j]).max_abs() == 0.0))
    };
    let annihilators_commute = all_commute(&lowers);
    let creators_commute = all_commute(&raisers);
    outcome.check(annihilators_commute, || "[a_i, a_j] is not exactly zero".into());
    outcome.check(creators_commute, || "[a_i†, a_j†] is not exactly zero".into());
    Ok(LadderDoc { ccr, sub_cutoff_deviation: dev, top_defect, annihilators_commute, creators_commute })
}

fn random_pair(rng: &mut ChaCha8Rng) -> (FourVector, FourVector) {
    let t = rng.gen_range(-1.0..1.0);
    let mut point = || FourVector::new(t, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    (point(), point())
}

fn field_checks(
    table: &ModeTable,
    field_n_max: u32,
    points: usize,
    seed: u64,
    tol: f64,
    outcome: &mut Outcome,
) -> Result<Vec<FieldDoc>, CliError> {
    let reflected = table.with_partners().and_then(|t| t.with_reflections()).map_err(CliError::input)?;
    let indices: BTreeSet<u8> = reflected.entries().iter().map(|e| e.index).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::new();
    for &a in &indices {
        for &b in &indices {
            let (sub, n_max) = if a == b { (vec![a], field_n_max) } else { (vec![a, b], 1) };
            let fs = build_fock(reflected.restrict(&sub).map_err(CliError::input)?, n_max).map_err(CliError::input)?;
            for k in 0..points {
                let (x, y) = if k == 0 {
                    let (x, _) = random_pair(&mut rng);
                    (x, x)
                } else {
                    random_pair(&mut rng)
                };
                for family in FieldFamily::ALL {
                    let doc = if a == b {
                        let c = check_field_family(&fs, family, a, b, x, y, tol).map_err(CliError::input)?;
                        FieldDoc {
                            family: family.label(),
                            a,
                            b,
                            x: x.to_array(),
                            y: y.to_array(),
                            expected: [c.expected.re, c.expected.im],
                            max_deviation: c.max_deviation,
                            pass: c.pass,
                        }
                    } else {
                        let dev = field_commutator(&fs, family, a, b, x, y).map_err(CliError::input)?.max_abs();
                        FieldDoc {
                            family: family.label(),
                            a,
                            b,
                            x: x.to_array(),
                            y: y.to_array(),
                            expected: [0.0, 0.0],
                            max_deviation: dev,
                            pass: dev <= tol,
                        }
                    };
                    outcome.check(doc.pass, || {
                        format!("{} for a={a} b={b} deviates by {:e}", doc.family, doc.max_deviation)
                    });
                    docs.push(doc);
                }
            }
        }
    }
    Ok(docs)
}

pub fn run(common: &Common) -> Result<Outcome, CliError> {
    let cfg: FockCheckConfig = read_json(common.require_config()?)?;
    let tol = common.tol_or(CCR_TOL)?;
    if cfg.points == 0 {
        return Err(CliError::Input("points must be at least 1".into()));
    }
    let table = resolve_table(cfg.modes.as_ref(), cfg.spec.as_ref(), cfg.species)?;
    let fs = build_fock(table.clone(), cfg.n_max).map_err(CliError::input)?;
    let mut outcome = Outcome::default();
    let ladder = ladder_checks(&fs, tol, &mut outcome)?;
    let fields = field_checks(&table, cfg.field_n_max, cfg.points, common.seed, tol, &mut outcome)?;
    let report = Report {
        convention: common.convention().as_str(),
        seed: common.seed,
        n_max: cfg.n_max,
        dim: fs.dim(),
        modes: ModeTableDoc::from_table(&table),
        ladder,
        fields,
        pass: outcome.pass(),
    };
    emit(common.out(), &to_json(&report))?;
    Ok(outcome)
}
