use nalgebra::DMatrix;
use proptest::prelude::*;
use spincouple_core::cg::{clebsch_gordan, clebsch_gordan_exact, coupled_values, projections};
use spincouple_core::entanglement::{schmidt, subsystem_entropy};
use spincouple_core::jc::{analytic_state, evolve_numeric, schrodinger_state, JcParams};
use spincouple_core::listing::{format_listings, parse_listings};
use spincouple_core::reference::ReferenceSet;
use spincouple_core::spatial::{build_total_state, GaussianPacket, GridSpec, Symmetry};
use spincouple_core::tensor::StateVector;
use spincouple_core::{HalfInt, C64};

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
}

fn unitary(entries: &[C64], n: usize) -> DMatrix<C64> {
    let mut m = DMatrix::from_row_slice(n, n, entries);
    for i in 0..n {
        m[(i, i)] += C64::new(2.0, 0.0);
    }
    m.qr().q()
}

fn apply_local(state: &StateVector, u: &DMatrix<C64>, v: &DMatrix<C64>) -> StateVector {
    let k = u.kronecker(v);
    let amps = DMatrix::from_column_slice(state.dim(), 1, state.amplitudes());
    let out = &k * amps;
    StateVector::new(state.dims().to_vec(), out.iter().copied().collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_invariant_under_local_unitaries(
        raw in complex_vec(9).prop_filter("nonzero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3),
        ua in complex_vec(9),
        ub in complex_vec(9),
    ) {
        let state = StateVector::normalized(vec![3, 3], raw).unwrap();
        let moved = apply_local(&state, &unitary(&ua, 3), &unitary(&ub, 3));
        let before = subsystem_entropy(&state, &[0]).unwrap();
        let after = subsystem_entropy(&moved, &[0]).unwrap();
        prop_assert!((before - after).abs() < 1e-9);
        let sb = schmidt(&state, &[0]).unwrap();
        let sa = schmidt(&moved, &[0]).unwrap();
        for (x, y) in sb.coefficients.iter().zip(&sa.coefficients) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn schmidt_reconstructs(raw in complex_vec(12).prop_filter("nonzero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)) {
        let state = StateVector::normalized(vec![2, 3, 2], raw).unwrap();
        let s = schmidt(&state, &[1]).unwrap();
        let back = s.reconstruct();
        let reordered = state.permute(&[1, 0, 2]).unwrap();
        for (a, b) in back.iter().zip(reordered.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        prop_assert!((s.coefficients.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cg_orthogonality(j1 in 0i32..=5, j2 in 0i32..=5) {
        let (j1, j2) = (HalfInt::from_doubled(j1), HalfInt::from_doubled(j2));
        let pairs: Vec<(HalfInt, HalfInt)> = coupled_values(j1, j2)
            .into_iter()
            .flat_map(|j| projections(j).into_iter().map(move |m| (j, m)))
            .collect();
        for &(ja, ma) in &pairs {
            for &(jb, mb) in &pairs {
                let mut sum = 0.0;
                for m1 in projections(j1) {
                    for m2 in projections(j2) {
                        sum += clebsch_gordan(j1, m1, j2, m2, ja, ma).unwrap() * clebsch_gordan(j1, m1, j2, m2, jb, mb).unwrap();
                    }
                }
                let expected = if (ja, ma) == (jb, mb) { 1.0 } else { 0.0 };
                prop_assert!((sum - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cg_exact_squares_are_rational(j1 in 0i32..=6, j2 in 0i32..=6, pick in 0usize..64) {
        let (j1, j2) = (HalfInt::from_doubled(j1), HalfInt::from_doubled(j2));
        let js = coupled_values(j1, j2);
        let j = js[pick % js.len()];
        let ms = projections(j);
        let m = ms[pick % ms.len()];
        let mut total = num_rational::Ratio::new(0i128, 1);
        for m1 in projections(j1) {
            let m2 = m - m1;
            if m2.abs() > j2 {
                continue;
            }
            let c = clebsch_gordan_exact(j1, m1, j2, m2, j, m).unwrap();
            let (n, d) = c.square();
            total += num_rational::Ratio::new(n, d);
        }
        prop_assert_eq!(total, num_rational::Ratio::new(1, 1));
    }

    #[test]
    fn printed_jc_form_has_exact_populations(
        omega in 0.0f64..1.5, omega0 in 0.0f64..3.0, g in 0.0f64..2.0, n in 0u32..=3, t in 0.0f64..50.0
    ) {
        let p = JcParams::new(omega, omega0, g, n).unwrap();
        let (a1, a2) = analytic_state(&p, t);
        let (s1, s2) = schrodinger_state(&p, t);
        prop_assert!((a1.norm_sqr() - s1.norm_sqr()).abs() < 1e-12);
        prop_assert!((a2.norm_sqr() - s2.norm_sqr()).abs() < 1e-12);
        prop_assert!((a1.norm_sqr() + a2.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn numeric_jc_conserves_norm(omega in 0.0f64..1.5, omega0 in 0.0f64..3.0, g in 0.0f64..2.0, n in 0u32..=3) {
        let p = JcParams::new(omega, omega0, g, n).unwrap();
        let times: Vec<f64> = (1..=20).map(|k| k as f64 * 0.25).collect();
        let traj = evolve_numeric(&p, &times).unwrap();
        prop_assert!(traj.norm_defect() < 1e-10);
        prop_assert!(traj.entropy.iter().all(|&s| (0.0..=core::f64::consts::LN_2 + 1e-12).contains(&s)));
    }

    #[test]
    fn total_states_have_definite_exchange(d in 0.05f64..20.0, sigma in 3.0f64..5.0, triplet_m in 0usize..3) {
        let grid = GridSpec::new(30.0, 64).unwrap();
        let a = GaussianPacket::new(grid, -0.5 * d, sigma).unwrap();
        let b = GaussianPacket::new(grid, 0.5 * d, sigma).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let triplets = [
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, s, s, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ];
        let spin = StateVector::new(vec![2, 2], triplets[triplet_m].iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap();
        let t = build_total_state(&a, &b, &spin, Symmetry::Antisymmetric).unwrap();
        prop_assert_eq!(t.symmetry, Symmetry::Antisymmetric);
        prop_assert!(t.swap_defect().unwrap() < 1e-10);
        prop_assert!((t.state.norm() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn bundled_listings_round_trip() {
    for set in ReferenceSet::ALL {
        let listings = set.listings().unwrap();
        let again = parse_listings(&format_listings(&listings)).unwrap();
        assert_eq!(listings, again, "{}", set.name());
    }
}
