use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qpair::canonical::{apply_local, diagonalize_cross};
use qpair::classify::{is_separable, is_state, purity_rank, DEFAULT_TOL};
use qpair::expectations::table_of_five;
use qpair::invariants::{global_invariants, local_invariants, spectrum};
use qpair::random::{random_rotation, random_state, rng_from_seed};
use qpair::{mix, Reflection, TwoQubitState};

fn state(seed: u64, rank: Option<usize>) -> TwoQubitState {
    random_state(seed, rank).unwrap()
}

fn rank_strategy() -> impl Strategy<Value = Option<usize>> {
    prop_oneof![Just(None), (1usize..=4).prop_map(Some)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn density_matrix_round_trip(seed in any::<u64>(), rank in rank_strategy()) {
        let st = state(seed, rank);
        let back = TwoQubitState::from_density_matrix(&st.to_density_matrix());
        prop_assert!(back.max_abs_diff(&st) < 1e-14);
    }

    #[test]
    fn local_invariants_survive_rotations(seed in any::<u64>(), rot_seed in any::<u64>()) {
        let st = state(seed, None);
        let mut rng = rng_from_seed(rot_seed);
        let (a, b) = (random_rotation(&mut rng), random_rotation(&mut rng));
        let moved = apply_local(&st, &a, &b).unwrap();
        let (x, y) = (local_invariants(&st).as_array(), local_invariants(&moved).as_array());
        for k in 0..9 {
            prop_assert!((x[k] - y[k]).abs() <= 1e-10 * x[k].abs().max(1e-3), "{k}: {} vs {}", x[k], y[k]);
        }
    }

    #[test]
    fn reflections_are_involutions(seed in any::<u64>()) {
        let st = state(seed, None);
        for kind in [Reflection::Global, Reflection::Partial] {
            prop_assert_eq!(st.reflect(kind).reflect(kind), st);
        }
        // global reflection keeps the spectrum
        let a = st.to_density_matrix().eigenvalues();
        let b = st.reflect(Reflection::Global).to_density_matrix().eigenvalues();
        for k in 0..4 {
            prop_assert!((a[k] - b[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn quartic_spectrum_matches_eigensolve(seed in any::<u64>(), rank in rank_strategy()) {
        let st = state(seed, rank);
        let sp = spectrum(&st).unwrap();
        let direct = st.to_density_matrix().eigenvalues();
        let mut q = sp.eigenvalues;
        let mut d = direct;
        q.sort_by(f64::total_cmp);
        d.sort_by(f64::total_cmp);
        for k in 0..4 {
            prop_assert!((q[k] - d[k]).abs() <= 1e-9, "{q:?} vs {d:?}");
        }
    }

    #[test]
    fn canonical_form_reassembles(seed in any::<u64>()) {
        let st = state(seed, None);
        let f = diagonalize_cross(&st);
        prop_assert!((f.reassemble() - st.c()).amax() < 1e-12);
        prop_assert!(f.c[0] >= f.c[1] && f.c[1] >= f.c[2] && f.c[2] >= 0.0);
    }

    #[test]
    fn table_of_five_reproduces_parameters(seed in any::<u64>()) {
        let st = state(seed, None);
        prop_assert_eq!(table_of_five(&st).to_state(), st);
    }

    #[test]
    fn mixing_with_the_global_reflection(seed in any::<u64>(), y in -1.0f64..=1.0) {
        let st = state(seed, None);
        let m = mix(&[st, st.reflect(Reflection::Global)], &[(1.0 + y) / 2.0, (1.0 - y) / 2.0]).unwrap();
        prop_assert!((m.s() - st.s() * y).amax() < 1e-15);
        prop_assert!((m.t() - st.t() * y).amax() < 1e-15);
        prop_assert!((m.c() - st.c()).amax() < 1e-15);
    }

    #[test]
    fn mixtures_of_products_are_separable(seeds in proptest::collection::vec(any::<u64>(), 1..5)) {
        let states: Vec<_> = seeds.iter().map(|&s| state(s, Some(1))).map(|p| {
            let (s, t) = p.reduced_states();
            TwoQubitState::product(s, t).unwrap()
        }).collect();
        let w = vec![1.0 / states.len() as f64; states.len()];
        let m = mix(&states, &w).unwrap();
        prop_assert!(is_state(&m, DEFAULT_TOL).unwrap().decision);
        prop_assert!(is_separable(&m, DEFAULT_TOL).unwrap().decision);
    }
}

#[test]
fn global_invariants_of_pure_states() {
    for seed in 0..50 {
        let st = state(seed, Some(1));
        let g = global_invariants(&local_invariants(&st));
        assert_abs_diff_eq!(g.a2, 6.0, epsilon = 1e-10);
        assert_abs_diff_eq!(g.first(), 1.0, epsilon = 1e-10);
        assert!(purity_rank(&st, DEFAULT_TOL).unwrap().pure);
    }
}
