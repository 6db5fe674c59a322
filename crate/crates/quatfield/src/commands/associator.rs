use quatfield_core::symbolic::{
    field_associator_chain, ladder_associator_chain, numeric_ladder_associator, verify_associator_chain, Generator,
    Index, LadderKind, ProofTrace, SymExpr, Unit,
};
use serde::Serialize;

use crate::cli::{Common, Outcome};
use crate::error::CliError;
use crate::formats::{emit, to_json};

const NUMERIC_N_MAX: u32 = 4;

#[derive(Serialize)]
struct StepDoc<'a> {
    rule: &'static str,
    before: &'a str,
    after: &'a str,
}

#[derive(Serialize)]
struct TraceDoc<'a> {
    convention: &'static str,
    lhs: &'a str,
    result: String,
    steps: Vec<StepDoc<'a>>,
}

fn trace_doc<'a>(trace: &'a ProofTrace, convention: &'static str) -> TraceDoc<'a> {
    TraceDoc {
        convention,
        lhs: &trace.lhs,
        result: trace.final_form(),
        steps: trace
            .steps
            .iter()
            .map(|s| StepDoc { rule: s.rule.label(), before: &s.before, after: &s.after })
            .collect(),
    }
}

fn ladder(kind: LadderKind, dagger: bool, comp: char) -> Generator {
    Generator::ladder(kind, dagger, Index::Sym(comp))
}

pub fn run(common: &Common) -> Result<Outcome, CliError> {
    // Matrices over the quaternions multiply associatively, so the default demands exact zeros.
    let tol = match common.tol {
        None => 0.0,
        Some(_) => common.tol_or(1.0)?,
    };
    let conv = common.convention();
    let mut outcome = Outcome::default();
    let mut text = format!("# convention={conv}\n");

    let main = match verify_associator_chain() {
        Ok(trace) => trace,
        Err(e) => {
            outcome.failures.push(e.to_string());
            eprintln!("{e}");
            return Ok(outcome);
        }
    };
    text.push_str(&main.render_text());

    text.push_str("\ncomponent cases\n");
    let j = SymExpr::unit(Unit::J);
    for (a, b) in [(1u8, 1u8), (1, 2), (3, 3), (2, 4)] {
        match field_associator_chain(Index::Num(a), Index::Num(b), &j) {
            Ok(t) => {
                let expect_nonzero = a == b;
                let ok = t.result.is_zero() != expect_nonzero;
                text.push_str(&format!("  a={a} b={b}: {}\n", t.final_form()));
                outcome.check(ok, || format!("component case a={a} b={b} gave {}", t.final_form()));
            }
            Err(e) => outcome.failures.push(format!("component case a={a} b={b}: {e}")),
        }
    }

    text.push_str("\nladder cases\n");
    let pairs = [
        (ladder(LadderKind::A, false, 'a'), ladder(LadderKind::A, true, 'b')),
        (ladder(LadderKind::B, false, 'a'), ladder(LadderKind::B, true, 'b')),
        (ladder(LadderKind::A, false, 'a'), ladder(LadderKind::B, true, 'b')),
        (ladder(LadderKind::B, false, 'a'), ladder(LadderKind::A, true, 'b')),
    ];
    for (x, y) in pairs {
        match ladder_associator_chain(x, y) {
            Ok(t) => {
                text.push_str(&format!("  {} = {}\n", t.lhs, t.final_form()));
                outcome.check(t.result.is_zero(), || format!("{} = {}, expected 0", t.lhs, t.final_form()));
            }
            Err(e) => outcome.failures.push(format!("ladder case ({x}, {y}, j): {e}")),
        }
    }

    text.push_str("\nnumeric (A, A†, J) with quaternion entries\n");
    for n_max in 1..=NUMERIC_N_MAX {
        let entries = numeric_ladder_associator(n_max).map_err(CliError::input)?;
        let worst = entries.iter().map(|q| q.max_abs()).fold(0.0, f64::max);
        text.push_str(&format!("  n_max={n_max}: max |entry| = {worst:e}\n"));
        outcome.check(worst <= tol, || format!("numeric associator at n_max={n_max} has entry {worst:e}"));
    }

    let json = to_json(&trace_doc(&main, conv.as_str()));
    match common.out() {
        Some(path) => {
            emit(None, &text)?;
            emit(Some(path), &json)?;
        }
        None => emit(None, &format!("{text}\n{json}"))?,
    }
    Ok(outcome)
}
