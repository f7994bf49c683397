use gnum::analytic::{zeta, ZetaMethod, ZetaOptions};
use gnum::semigroup::{enumerate, n_count};
use gnum::summatory::{summatory, summatory_grid, GridSpec, Weight};
use gnum::{conv, exp_conv, inv_conv, log_conv, mellin, LogGridMeasure, MellinPoint, PrimeSystem};
use proptest::prelude::*;

fn prime_measure() -> impl Strategy<Value = LogGridMeasure> {
    (1usize..300, 0.01f64..0.5).prop_flat_map(|(len, h)| {
        prop::collection::vec(0.0f64..0.02, len).prop_map(move |mut m| {
            m.insert(0, 0.0);
            LogGridMeasure::new(h, m, false).unwrap()
        })
    })
}

fn primes() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1.05f64..30.0, 1..6).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        v
    })
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_then_log_is_identity(b in prime_measure()) {
        let back = log_conv(&exp_conv(&b).unwrap()).unwrap();
        prop_assert!(max_diff(back.masses(), b.masses()) < 1e-12);
    }

    #[test]
    fn inverse_is_two_sided(b in prime_measure()) {
        let dn = exp_conv(&b).unwrap();
        let dm = inv_conv(&dn).unwrap();
        let left = conv(&dm, &dn, Some(dn.len())).unwrap();
        let right = conv(&dn, &dm, Some(dn.len())).unwrap();
        prop_assert!((left.masses()[0] - 1.0).abs() < 1e-14);
        prop_assert!(max_diff(&left.masses()[1..], &vec![0.0; dn.len() - 1]) < 1e-12);
        prop_assert!(max_diff(left.masses(), right.masses()) < 1e-14);
    }

    #[test]
    fn mellin_turns_exp_into_exp(b in prime_measure(), sigma in 0.5f64..3.0, t in -5.0f64..5.0) {
        // only finitely many nodes, so the transforms are polynomials in e^{-sh}
        let s = MellinPoint::new(sigma, t);
        let dn = exp_conv(&b).unwrap();
        let full = conv(&dn, &dn, None).unwrap();
        let lhs = mellin(&full, s);
        let rhs = mellin(&dn, s) * mellin(&dn, s);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn count_is_nondecreasing(ps in primes(), x1 in 1.0f64..500.0, dx in 0.0f64..500.0) {
        let sys = PrimeSystem::discrete(&ps).unwrap();
        let a = n_count(&sys, x1, 0.01, 10.0).unwrap().value;
        let b = n_count(&sys, x1 + dx, 0.01, 10.0).unwrap().value;
        prop_assert!(a <= b);
        prop_assert!(a >= 1.0);
    }

    #[test]
    fn enumeration_is_sorted_and_counted(ps in primes(), x in 1.0f64..2000.0) {
        let sys = PrimeSystem::discrete(&ps).unwrap();
        let values: Vec<f64> = enumerate(&sys, x).unwrap().map(|g| g.unwrap().value).collect();
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(values.iter().all(|&v| v <= x));
        prop_assert_eq!(values.len() as f64, n_count(&sys, x, 0.01, 10.0).unwrap().value);
    }

    #[test]
    fn mobius_sum_is_exact_on_aligned_grids(ks in prop::collection::vec(1u32..40, 1..5), x in 2.0f64..3000.0) {
        // primes 2^{k/4} sit on nodes of h = ln2/4
        let mut ks = ks;
        ks.sort_unstable();
        let ps: Vec<f64> = ks.iter().map(|&k| 2f64.powf(k as f64 / 4.0)).collect();
        let sys = PrimeSystem::discrete(&ps).unwrap();
        let grid = GridSpec::new(std::f64::consts::LN_2 / 4.0, x.ln() + 1.0);
        // stay off atom boundaries so node rounding cannot move x across one
        let x = 2f64.powf(((x.log2() * 4.0).floor() + 0.5) / 4.0);
        let exact = summatory(&sys, Weight::Mobius, &[x], grid).unwrap().values[0];
        let on_grid = summatory_grid(&sys, Weight::Mobius, &[x], grid).unwrap().values[0];
        prop_assert!((exact - on_grid).abs() < 1e-9, "{} vs {}", exact, on_grid);
    }

    #[test]
    fn euler_product_matches_enumeration(ps in prop::collection::vec(2.0f64..20.0, 1..4)) {
        let mut ps = ps;
        ps.sort_by(f64::total_cmp);
        let sys = PrimeSystem::discrete(&ps).unwrap();
        let opts = ZetaOptions { method: ZetaMethod::Enumerate, cutoff: 1e7, ..ZetaOptions::default() };
        let z = zeta(&sys, MellinPoint::real(3.0), &opts).unwrap().value.re;
        let product: f64 = ps.iter().map(|p| 1.0 / (1.0 - p.powi(-3))).product();
        prop_assert!((z - product).abs() < 1e-6 * product);
    }
}
