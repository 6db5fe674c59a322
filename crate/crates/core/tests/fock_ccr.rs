use proptest::prelude::*;
use quatfield_core::fock::{
    annihilation, build_fock, ccr_report, charge4, creation, hamiltonian4, make_state, ModeEntry, ModeId, ModeTable,
    Scheme, Species,
};
use quatfield_core::sparse::norm_sqr;
use quatfield_core::{Convention, FourVector};

fn on_shell(m: f64, p: [f64; 3]) -> FourVector {
    let e = (m * m + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    FourVector::from_parts(e, p)
}

fn table(m: f64, momenta: &[[f64; 3]]) -> ModeTable {
    let entries = momenta
        .iter()
        .enumerate()
        .map(|(i, p)| ModeEntry {
            index: (i % 4) as u8 + 1,
            species: if i % 2 == 0 { Species::Particle } else { Species::Antiparticle },
            momentum: on_shell(m, *p),
        })
        .collect();
    ModeTable::new(m, Scheme::FourComponent, entries).unwrap()
}

fn momenta() -> impl Strategy<Value = Vec<[f64; 3]>> {
    prop::collection::vec(prop::array::uniform3(-2.0..2.0f64), 1..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn truncated_ccr_holds(m in 0.3..3.0f64, ps in momenta(), n_max in 1u32..=3) {
        let fs = build_fock(table(m, &ps), n_max).unwrap();
        for i in 0..fs.mode_count() {
            for j in 0..fs.mode_count() {
                let r = ccr_report(&fs, ModeId(i), ModeId(j)).unwrap();
                prop_assert!(r.holds(n_max, 1e-12), "{i} {j} {r:?}");
            }
        }
    }

    #[test]
    fn ladder_shifts_occupation(ps in momenta(), n_max in 1u32..=3, pick in 0usize..4) {
        let fs = build_fock(table(1.0, &ps), n_max).unwrap();
        let mode = ModeId(pick % fs.mode_count());
        let a = annihilation(&fs, mode).unwrap();
        let ad = creation(&fs, mode).unwrap();
        prop_assert_eq!(ad.max_abs_diff(&a.adjoint()), 0.0);
        let one = make_state(&fs, &[(mode, 1)]).unwrap();
        let back = a.apply(&one);
        prop_assert!((norm_sqr(&back) - 1.0).abs() < 1e-15);
        prop_assert_eq!(back[fs.vacuum_index()].re, 1.0);
    }

    #[test]
    fn energy_and_charge_commute(ps in momenta(), n_max in 1u32..=2) {
        let fs = build_fock(table(1.0, &ps), n_max).unwrap();
        for conv in [Convention::Paper, Convention::Rescaled] {
            let h = hamiltonian4(&fs, conv).unwrap();
            let q = charge4(&fs, conv).unwrap();
            prop_assert!(h.is_diagonal() && q.is_diagonal());
            prop_assert!(h.commutator(&q).max_abs() == 0.0);
        }
    }
}

#[test]
fn basis_order_is_lexicographic() {
    let fs = build_fock(table(1.0, &[[0.0; 3], [0.5, 0.0, 0.0]]), 2).unwrap();
    assert_eq!(fs.dim(), 9);
    assert_eq!(fs.vacuum_index(), 0);
    assert_eq!(fs.occupations(1), vec![0, 1]);
    assert_eq!(fs.occupations(3), vec![1, 0]);
    assert_eq!(fs.index_of(&[2, 2]), Some(8));
}
