//! Library-level agreement between the independent routes, over fresh seeds.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zgraded::berezinian::{gber, super_ber_oracle};
use zgraded::gmatrix::random::{random_decomposable, random_matrix};
use zgraded::koszul::{cohomology_ranks, derivation_action_class, group_action_class, KoszulContext};
use zgraded::verify::{koszul_configs, matrix_configs};
use zgraded::{Degree, MatrixF64};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn two_routes_to_ber(seed in any::<u64>(), which in 0usize..3) {
        let cfg = &koszul_configs()[which];
        let ctx = cfg.context();
        let t = random_decomposable(&cfg.alg, &cfg.ranks, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(group_action_class(&ctx, &t).unwrap(), gber(&t).unwrap());
    }

    #[test]
    fn action_class_is_trace_for_every_odd_pi(seed in any::<u64>(), which in 0usize..3) {
        let cfg = &matrix_configs()[which];
        let n = cfg.alg.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_matrix(&cfg.alg, Degree::zero(n), &cfg.ranks, &cfg.ranks, &mut rng);
        for mask in 0..1u32 << n {
            let pi = Degree::from_mask(n, mask);
            if pi.is_even() {
                continue;
            }
            let ctx = KoszulContext::new(&cfg.alg, cfg.ranks.clone(), pi).unwrap();
            prop_assert_eq!(derivation_action_class(&ctx, &s).unwrap(), s.graded_trace().unwrap());
        }
    }

    #[test]
    fn super_closed_form_agrees(seed in any::<u64>()) {
        let cfg = &matrix_configs()[0];
        let t = random_decomposable(&cfg.alg, &cfg.ranks, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(super_ber_oracle(&t).unwrap(), gber(&t).unwrap());
    }

    #[test]
    fn floating_point_tracks_exact(seed in any::<u64>(), which in 0usize..3) {
        let cfg = &koszul_configs()[which];
        let t = random_decomposable(&cfg.alg, &cfg.ranks, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let exact = gber(&t).unwrap();
        let falg = zgraded::AlgebraF64::new(cfg.alg.presentation().clone());
        let tf: MatrixF64 = t.map_scalars(&falg, zgraded::Scalar::to_f64);
        let approx = gber(&tf).unwrap();
        let back = exact.map_scalars(&falg, zgraded::Scalar::to_f64);
        prop_assert!(approx.approx_eq(&back), "{} vs {}", approx, back);
    }
}

#[test]
fn cohomology_is_independent_of_pi() {
    for cfg in koszul_configs() {
        let n = cfg.alg.n();
        let mut seen = None;
        for mask in (0..1u32 << n).filter(|m| m.count_ones() % 2 == 1) {
            let ctx = KoszulContext::new(&cfg.alg, cfg.ranks.clone(), Degree::from_mask(n, mask)).unwrap();
            let dims: Vec<_> = cohomology_ranks(&ctx, 2)
                .levels
                .iter()
                .map(|l| (l.dimension, l.rank))
                .collect();
            match &seen {
                None => seen = Some(dims),
                Some(prev) => assert_eq!(prev, &dims, "{}", cfg.name),
            }
        }
    }
}
