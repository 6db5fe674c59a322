//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line with its runtime.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use quatfield_core::classical::{
    component_residuals, effective_momenta, kg_residual, validate_constraints, CONSTRAINT_TOL,
};
use quatfield_core::field::{reconstruction_deviation, Variant};
use quatfield_core::fock::{
    build_fock, ccr_report, charge2, charge4, hamiltonian2, hamiltonian4, sector_weight, ModeId, ModeTable,
    SpeciesSet,
};
use quatfield_core::lattice::{run, LatticeState};
use quatfield_core::quaternion::associator;
use quatfield_core::symbolic::{
    expected_normal_form, ladder_associator_check, numeric_ladder_associator, verify_associator_chain, Rule,
};
use quatfield_core::{Convention, FourVector, PlaneWaveSpec, Quaternion, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// Runs a criterion, prints its line outside the test harness capture, and fails on error or overrun.
fn criterion(n: u32, title: &str, budget: Duration, body: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let verdict = match &result {
        Ok(()) if elapsed <= budget => "PASS".to_string(),
        Ok(()) => format!("FAIL (over budget {budget:?})"),
        Err(e) => format!("FAIL ({e})"),
    };
    let line = format!("acceptance {n}: {verdict} {title} [{:.3} s]\n", elapsed.as_secs_f64());
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    assert!(verdict == "PASS", "{}", line.trim_end());
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

#[test]
fn criterion_1_quaternion_algebra() {
    criterion(1, "quaternion algebra", Duration::from_secs(1), || {
        let (one, i, j, k) = (Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K);
        let neg = |q: Quaternion| q * -1.0;
        let table = [
            (i, i, neg(one)),
            (j, j, neg(one)),
            (k, k, neg(one)),
            (i, j, k),
            (j, k, i),
            (k, i, j),
            (j, i, neg(k)),
            (k, j, neg(i)),
            (i, k, neg(j)),
        ];
        for (a, b, c) in table {
            ensure(a * b == c, || format!("{a:?} * {b:?} != {c:?}"))?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut draw = || Quaternion::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        for _ in 0..1000 {
            let (a, b, c) = (draw(), draw(), draw());
            let assoc = associator(a, b, c).max_abs();
            ensure(assoc <= 1e-12, || format!("associator {assoc:e}"))?;
            let gap = ((a * b).norm() - a.norm() * b.norm()).abs();
            ensure(gap <= 1e-12, || format!("norm multiplicativity gap {gap:e}"))?;
        }
        Ok(())
    });
}

#[test]
fn criterion_2_constraint_suite() {
    criterion(2, "constraint suite", Duration::from_secs(1), || {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut with_time_theta = 0;
        for _ in 0..100 {
            let s = common::random_spec(&mut rng);
            if s.theta.t != 0.0 {
                with_time_theta += 1;
            }
            let report = validate_constraints(&s).map_err(|e| e.to_string())?;
            let scale = (s.m * s.m).max(1.0);
            ensure(report.pass, || format!("{report:?}"))?;
            ensure(report.max_residual() <= CONSTRAINT_TOL * scale, || format!("{report:?}"))?;
            for p in effective_momenta(&s).map_err(|e| e.to_string())? {
                let off = (p.square() - s.m * s.m).abs();
                ensure(off <= 1e-12 * scale, || format!("p·p − m² = {off:e}"))?;
            }
        }
        ensure(with_time_theta > 20, || format!("only {with_time_theta} draws with θ⁰ ≠ 0"))
    });
}

const STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

fn orders(r: [f64; 3]) -> [f64; 2] {
    [(r[0] / r[1]).log2(), (r[1] / r[2]).log2()]
}

#[test]
fn criterion_3_field_equation_residuals() {
    criterion(3, "field-equation residual convergence", Duration::from_secs(5), || {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 10 {
            let s = common::random_spec(&mut rng);
            let x = FourVector::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 0.3);
            let kg = STEPS.map(|h| kg_residual(&s, x, h).unwrap());
            let comps = STEPS.map(|h| component_residuals(&s, x, h).unwrap().as_array());
            // Skip draws where a residual is too small to resolve from rounding.
            if kg[2] < 1e-8 || comps[2].iter().any(|&r| r < 1e-8) {
                continue;
            }
            checked += 1;
            let mut series = vec![("kg", kg)];
            for (c, name) in ["field0", "field1", "current0", "current1"].into_iter().enumerate() {
                series.push((name, [comps[0][c], comps[1][c], comps[2][c]]));
            }
            for (name, r) in series {
                for o in orders(r) {
                    ensure((o - 2.0).abs() <= 0.2, || format!("{name} order {o} for {s:?}"))?;
                }
            }
        }

        // Orthogonality broken by 0.36 with the mass shell intact.
        let theta = FourVector::new(0.0, 0.6, 0.0, 0.0);
        let k = FourVector::new(1.72f64.sqrt(), -0.6, 0.0, 0.0);
        let broken = PlaneWaveSpec { m: 1.0, theta, theta0: 0.4, k0: k, k1: k, s0: Sign::Plus, s1: Sign::Plus };
        let report = validate_constraints(&broken).unwrap();
        ensure((report.orthogonality[0] - 0.36).abs() < 1e-12, || format!("{report:?}"))?;
        ensure(report.mass_shell[0] < 1e-12, || format!("{report:?}"))?;
        let x = FourVector::new(0.2, 0.5, 0.0, 0.0);
        let r = STEPS.map(|h| kg_residual(&broken, x, h).unwrap());
        let change = (r[1] - r[2]).abs();
        ensure(r[2] > 0.1, || format!("residual limit {} is not bounded away from zero", r[2]))?;
        ensure(change < 1e-3 * r[2], || format!("residual still moving: {r:?}"))
    });
}

#[test]
fn criterion_4_lattice_conservation() {
    criterion(4, "lattice conservation", Duration::from_secs(10), || {
        let n = 256;
        let dx = 4.0 * TAU / n as f64;
        let e = 1.25f64.sqrt();
        // θ along x1 with mode number 2 on the box; k at rest.
        let spec = PlaneWaveSpec {
            m: 1.0,
            theta: FourVector::new(0.0, 0.5, 0.0, 0.0),
            theta0: 0.3,
            k0: FourVector::new(e, 0.0, 0.0, 0.0),
            k1: FourVector::new(e, 0.0, 0.0, 0.0),
            s0: Sign::Plus,
            s1: Sign::Minus,
        };
        let mut state = LatticeState::init_from_plane_wave(&spec, n, dx, 0.5 * dx).map_err(|e| e.to_string())?;
        let start = state.clone();
        let samples = run(&mut state, 10_000, 100, Convention::Paper);
        let drift = samples.iter().map(|s| s.energy_drift_rel.abs()).fold(0.0, f64::max);
        ensure(drift <= 1e-6, || format!("energy drift {drift:e}"))?;
        let q0 = samples[0].charges;
        for s in &samples {
            for a in 0..4 {
                let d = (s.charges[a] - q0[a]).abs();
                ensure(d <= 1e-8 * q0[a].abs().max(1.0), || format!("charge{} drift {d:e}", a + 1))?;
            }
        }
        state.reverse_momenta();
        state.advance(10_000);
        state.reverse_momenta();
        let mut residual = 0.0f64;
        for a in 0..4 {
            for (x, y) in state.field(a).iter().zip(start.field(a)) {
                residual = residual.max((x - y).norm());
            }
            for (x, y) in state.momentum(a).iter().zip(start.momentum(a)) {
                residual = residual.max((x - y).norm());
            }
        }
        ensure(residual <= 1e-10, || format!("reversibility residual {residual:e}"))
    });
}

fn ccr_suite(table: ModeTable, n_max: u32, expected_dim: usize) -> Result<(), String> {
    let fs = build_fock(table, n_max).map_err(|e| e.to_string())?;
    ensure(fs.dim() == expected_dim, || format!("dim {} != {expected_dim}", fs.dim()))?;
    for i in 0..fs.mode_count() {
        for j in 0..fs.mode_count() {
            let r = ccr_report(&fs, ModeId(i), ModeId(j)).map_err(|e| e.to_string())?;
            if i == j {
                ensure(r.sub_cutoff_deviation <= 1e-12, || format!("[a{i}, a{i}†] off by {:e}", r.sub_cutoff_deviation))?;
                ensure(!r.top_defect.is_empty(), || "no top level found".into())?;
                for d in &r.top_defect {
                    ensure((d + n_max as f64).abs() <= 1e-12, || format!("top defect {d}"))?;
                }
            } else {
                ensure(r.exactly_zero, || format!("[a{i}, a{j}†] not exactly zero"))?;
            }
        }
    }
    Ok(())
}

fn reference_spec() -> PlaneWaveSpec {
    PlaneWaveSpec {
        m: 1.0,
        theta: FourVector::new(0.0, 0.3, 0.4, 0.0),
        theta0: 0.2,
        k0: FourVector::new(1.5f64.sqrt(), 0.4, -0.3, 0.0),
        k1: FourVector::new(2.06f64.sqrt(), 0.0, 0.0, 0.9),
        s0: Sign::Plus,
        s1: Sign::Plus,
    }
}

#[test]
fn criterion_5_ccr_suite() {
    criterion(5, "truncated CCR suite", Duration::from_secs(10), || {
        let s = reference_spec();
        ccr_suite(ModeTable::four_component(&s, SpeciesSet::ParticlesOnly).unwrap(), 3, 256)?;
        ccr_suite(ModeTable::four_component(&s, SpeciesSet::Both).unwrap(), 2, 6561)
    });
}

#[test]
fn criterion_6_spectra() {
    criterion(6, "energy and charge spectra", Duration::from_secs(5), || {
        let s = reference_spec();
        for conv in [Convention::Paper, Convention::Rescaled] {
            let fs = build_fock(ModeTable::four_component(&s, SpeciesSet::Both).unwrap(), 2).unwrap();
            let h = hamiltonian4(&fs, conv).unwrap();
            let q = charge4(&fs, conv).unwrap();
            let w = conv.component_weight();
            spectrum_matches(&fs, &h, &q, |e| (w * e.energy(), w * e.species.charge_sign()))?;
        }
        let k1 = FourVector::new(1.25f64.sqrt(), 0.5, 0.0, 0.0);
        let k2 = FourVector::new(2.0f64.sqrt(), 0.0, 0.0, -1.0);
        let table = ModeTable::two_component(1.0, k1, k2, SpeciesSet::Both).map_err(|e| e.to_string())?;
        let fs = build_fock(table, 2).unwrap();
        for theta0 in [0.0, FRAC_PI_4, FRAC_PI_2] {
            let (c, sn) = (theta0.cos(), theta0.sin());
            ensure(sector_weight(1, theta0) == c * c && sector_weight(2, theta0) == sn * sn, || {
                format!("sector weights at Θ₀ = {theta0}")
            })?;
            let h = hamiltonian2(&fs, theta0).unwrap();
            let q = charge2(&fs, theta0).unwrap();
            spectrum_matches(&fs, &h, &q, |e| {
                let w = if e.index == 1 { c * c } else { sn * sn };
                (w * e.energy(), w * e.species.charge_sign())
            })?;
        }
        Ok(())
    });
}

fn spectrum_matches(
    fs: &quatfield_core::fock::FockSpace,
    h: &quatfield_core::sparse::OperatorMatrix,
    q: &quatfield_core::sparse::OperatorMatrix,
    per_quantum: impl Fn(&quatfield_core::fock::ModeEntry) -> (f64, f64),
) -> Result<(), String> {
    ensure(h.is_diagonal() && q.is_diagonal(), || "H or Q not diagonal".into())?;
    ensure(h.commutator(q).max_abs() == 0.0, || "[H, Q] != 0".into())?;
    let weights: Vec<(f64, f64)> = fs.modes().entries().iter().map(per_quantum).collect();
    let (hd, qd) = (h.diagonal(), q.diagonal());
    for i in 0..fs.dim() {
        let (mut e, mut c) = (0.0, 0.0);
        for (n, (we, wq)) in fs.occupations(i).iter().zip(&weights) {
            e += *n as f64 * we;
            c += *n as f64 * wq;
        }
        let dev = (hd[i].re - e).abs().max((qd[i].re - c).abs()).max(hd[i].im.abs()).max(qd[i].im.abs());
        ensure(dev <= 1e-12, || format!("basis {i}: eigenvalue gap {dev:e}"))?;
    }
    Ok(())
}

#[test]
fn criterion_7_reconstruction() {
    criterion(7, "reconstruction from quantized components", Duration::from_secs(10), || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let s = common::random_spec(&mut rng);
            let fs = build_fock(ModeTable::four_component(&s, SpeciesSet::Both).unwrap(), 1).unwrap();
            for variant in Variant::ALL {
                let mut worst = 0.0f64;
                for it in 0..10 {
                    for i1 in 0..10 {
                        for i2 in 0..10 {
                            let x = FourVector::new(0.3 * it as f64, -1.5 + 0.3 * i1 as f64, -1.5 + 0.3 * i2 as f64, 0.7);
                            let (_, _, dev) = reconstruction_deviation(&fs, &s, x, variant).map_err(|e| e.to_string())?;
                            worst = worst.max(dev);
                        }
                    }
                }
                ensure(worst <= 1e-10, || format!("variant {} deviation {worst:e}", variant.number()))?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_8_non_associativity() {
    criterion(8, "associator chain and ladder checks", Duration::from_secs(1), || {
        let trace = verify_associator_chain().map_err(|e| e.to_string())?;
        ensure(trace.result == expected_normal_form(), || trace.final_form())?;
        ensure(trace.final_form() == "k δ^{ab} δ³(x−y)", || trace.final_form())?;
        let rules: Vec<Rule> = trace.steps.iter().map(|s| s.rule).collect();
        let full = [Rule::Axiom, Rule::Ccr, Rule::Linearity, Rule::ReverseAxiom, Rule::Alternating, Rule::UnitTable, Rule::Solve];
        ensure(rules == full, || format!("{rules:?}"))?;
        for pair in trace.steps.windows(2) {
            ensure(pair[0].after == pair[1].before, || "trace has a gap".into())?;
        }
        ensure(ladder_associator_check().map_err(|e| e.to_string())?.is_zero(), || "ladder associator".into())?;
        for n_max in 1..=4 {
            let entries = numeric_ladder_associator(n_max).map_err(|e| e.to_string())?;
            ensure(entries.iter().all(|q| *q == Quaternion::ZERO), || format!("numeric n_max {n_max}"))?;
        }
        Ok(())
    });
}

fn write_json(dir: &Path, name: &str, value: serde_json::Value) {
    fs::write(dir.join(name), serde_json::to_string_pretty(&value).unwrap()).unwrap();
}

#[test]
fn criterion_9_determinism() {
    criterion(9, "bit-identical repeated CLI runs", Duration::from_secs(30), || {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let d = dir.path();
        let s = reference_spec();
        let spec = json!({"m": s.m, "theta": s.theta.to_array(), "Theta0": s.theta0,
            "k0": s.k0.to_array(), "k1": s.k1.to_array(), "s0": 1, "s1": 1});
        let e = 1.25f64.sqrt();
        let line = json!({"m": 1.0, "theta": [0.0, 0.5, 0.0, 0.0], "Theta0": 0.3,
            "k0": [e, 0.0, 0.0, 0.0], "k1": [e, 0.0, 0.0, 0.0], "s0": 1, "s1": -1});
        let dx = 4.0 * TAU / 128.0;
        write_json(d, "spec.json", spec.clone());
        write_json(d, "evolve.json", json!({"spec": line, "n": 128, "dx": dx, "dt": 0.5 * dx, "steps": 500,
            "sample_every": 50, "reversibility": true}));
        write_json(d, "spectrum.json", json!({"spec": spec, "n_max": 1}));
        write_json(d, "reconstruct.json", json!({"spec": spec, "grid": {"origin": [0.0, -1.0, -1.0, 0.0],
            "step": [0.25, 0.25, 0.25, 0.25], "count": [4, 4, 4, 2]}}));
        write_json(d, "fock.json", json!({"spec": spec, "species": "particles", "n_max": 2, "points": 3}));
        let commands: [&[&str]; 6] = [
            &["validate", "--config", "spec.json"],
            &["evolve", "--config", "evolve.json"],
            &["spectrum", "--config", "spectrum.json"],
            &["reconstruct", "--config", "reconstruct.json", "--variant", "2"],
            &["associator"],
            &["fock-check", "--config", "fock.json"],
        ];
        for args in commands {
            let mut outputs = Vec::new();
            for round in 0..2 {
                let out = format!("out{round}");
                let o = Command::new(env!("CARGO_BIN_EXE_quatfield"))
                    .current_dir(d)
                    .args(args)
                    .args(["--seed", "11", "--out", &out])
                    .output()
                    .map_err(|e| e.to_string())?;
                ensure(o.status.success(), || format!("{args:?} exited with {:?}", o.status.code()))?;
                outputs.push((o.stdout, fs::read(d.join(&out)).map_err(|e| e.to_string())?));
            }
            ensure(outputs[0] == outputs[1], || format!("{args:?} differs between runs"))?;
        }
        Ok(())
    });
}
