use covproc::bounds::{
    binary_entropy, bounds_report, holevo_information, lower_bound, lower_bound_from_dc,
    net_cardinality, one_design_channels, one_design_ensemble, upper_bound_net,
    verify_lower_bound_chain, BoundsReport, Ensemble,
};
use covproc::commutant::{adapted_basis, compress_map, project_to_commutant, AdaptedBasis, BlockStructure};
use covproc::group::{bar_tensor_rep, catalog_group, Representation};
use covproc::matrix::{
    c64, hermitian_part, identity, max_abs, partial_trace, DensityMatrix, Subsystem, Tolerance,
};
use covproc::processor::{
    build_compressed_processor, build_teleport_processor, purify_program, twirl_processor,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup(group: &str, u: &str, v: &str) -> (Representation, Representation, AdaptedBasis, BlockStructure) {
    let g = catalog_group(group).unwrap();
    let ur = g.irrep_rep(u).unwrap().clone();
    let vr = g.irrep_rep(v).unwrap().clone();
    let basis = adapted_basis(&ur, &vr, &g.irreps, Tolerance::default()).unwrap();
    let bs = basis.structure().clone();
    (ur, vr, basis, bs)
}

fn random_ensemble(d: usize, n: usize, seed: u64) -> Ensemble {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (1..=n).map(|k| ((seed as usize + k) % 7 + 1) as f64).collect();
    let total: f64 = raw.iter().sum();
    let items = raw
        .iter()
        .map(|w| (w / total, DensityMatrix::random(d, &mut rng)))
        .collect();
    Ensemble::new(items, 1e-12).unwrap()
}

#[test]
fn binary_entropy_values() {
    let quarter = 2.0 - 0.75 * 3f64.log2();
    assert!((binary_entropy(0.25).unwrap() - quarter).abs() < 1e-15);
    assert!((binary_entropy(0.75).unwrap() - quarter).abs() < 1e-15);
}

#[test]
fn a4_bound_values() {
    let (_, _, _, bs) = setup("a4", "theta", "theta");
    assert_eq!((bs.d_c(), bs.d_n()), (5, 7));
    assert_eq!(lower_bound(0.0, &bs).unwrap(), 5.0);
    assert!((lower_bound(0.5, &bs).unwrap() - 0.25).abs() < 1e-15);
    let h = 2.0 - 0.75 * 3f64.log2();
    let expected = 5f64.sqrt() / 2f64.powf(2.0 * h);
    assert!((lower_bound(0.25, &bs).unwrap() - expected).abs() < 1e-12);
    assert!((expected - 0.726184).abs() < 1e-6);
    assert_eq!(upper_bound_net(0.5, &bs).unwrap(), 78125.0);
    assert!(upper_bound_net(0.0, &bs).is_err());
}

#[test]
fn report_marks_missing_net_bound() {
    let (_, _, _, bs) = setup("a4", "theta", "theta");
    let r = bounds_report(0.0, &bs).unwrap();
    assert_eq!(r.upper_bound_net, None);
    assert_eq!(r.lower_bound_ceil, 5);
    assert_eq!(r.csv_row(), "0,5,7,5,n/a,5");
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["upper_bound_net"], "n/a");
    assert_eq!(json["exact_dp"], 5);

    let r = bounds_report(0.5, &bs).unwrap();
    assert_eq!(r.csv_row(), "0.5,5,7,0.25,78125,5");
    assert_eq!(BoundsReport::CSV_HEADER.split(',').count(), r.csv_row().split(',').count());
}

#[test]
fn lower_bound_never_exceeds_exact_dimension() {
    for (grp, u, v) in [("a4", "theta", "theta"), ("pauli2", "w", "w"), ("s3", "std", "std")] {
        let (_, _, _, bs) = setup(grp, u, v);
        for k in 0..100 {
            let r = bounds_report(k as f64 / 100.0, &bs).unwrap();
            assert!(r.lower_bound <= r.exact_dp as f64 + 1e-12);
            if let Some(up) = r.upper_bound_net {
                assert!(up >= r.exact_dp as f64);
            }
        }
    }
}

#[test]
fn one_design_ensemble_has_maximal_holevo_quantity() {
    let (u, v, basis, bs) = setup("a4", "theta", "theta");
    let members = one_design_channels(&bs, &basis).unwrap();
    assert_eq!(members.len(), 5);
    let w = bar_tensor_rep(&u, &v).unwrap();
    for (p, t) in &members {
        assert!((p - 0.2).abs() < 1e-15);
        let c = t.choi_matrix();
        assert!(max_abs(&(project_to_commutant(c, &w).unwrap() - c)) < 1e-10);
        assert!(covproc::channel::is_cptp_choi(c, 3, 3, 1e-9).unwrap().valid);
    }
    let e = one_design_ensemble(&bs, &basis).unwrap();
    let chi = holevo_information(&e, 1e-9).unwrap();
    assert!((chi - 5f64.log2()).abs() < 1e-9, "{chi}");

    let compressed = e.map(|rho| compress_map(rho.matrix(), &basis, &bs)).unwrap();
    let avg = compressed.average();
    assert!(max_abs(&(avg.matrix() - identity(5) * c64(0.2, 0.0))) < 1e-10);
    assert!((holevo_information(&compressed, 1e-9).unwrap() - 5f64.log2()).abs() < 1e-9);
}

#[test]
fn chain_is_tight_for_compressed_processor() {
    let (u, v, basis, bs) = setup("a4", "theta", "theta");
    let p = build_compressed_processor(&u, &v, &bs, &basis, Tolerance::default()).unwrap();
    let r = verify_lower_bound_chain(&p, &bs, &basis, 0.0).unwrap();
    let l5 = 5f64.log2();
    assert!((r.log2_dp - l5).abs() < 1e-12);
    assert!((r.chi_program - l5).abs() < 1e-8);
    assert!((r.chi_compressed_target - l5).abs() < 1e-8);
    assert!(r.min_slack >= -1e-8);
    assert_eq!(r.stages.len(), 4);
}

#[test]
fn chain_for_teleport_processor() {
    let (u, v, basis, bs) = setup("a4", "theta", "theta");
    let p = build_teleport_processor(&u, &v, Tolerance::default()).unwrap();
    let r = verify_lower_bound_chain(&p, &bs, &basis, 0.0).unwrap();
    assert!((r.log2_dp - 9f64.log2()).abs() < 1e-12);
    assert!((r.chi_program - 5f64.log2()).abs() < 1e-8);
    assert!(r.min_slack >= -1e-8);

    let r = verify_lower_bound_chain(&p, &bs, &basis, 0.1).unwrap();
    let expected = 0.2 * 5f64.log2() + 2.0 * binary_entropy(0.1).unwrap();
    assert!((r.continuity_slack - expected).abs() < 1e-12);
    assert!(verify_lower_bound_chain(&p, &bs, &basis, 1.0).is_err());
}

#[test]
fn chain_for_derived_processors() {
    let (u, v, basis, bs) = setup("pauli2", "w", "w");
    let p = build_compressed_processor(&u, &v, &bs, &basis, Tolerance::default()).unwrap();
    for q in [twirl_processor(&p, &u, &v).unwrap(), purify_program(&p)] {
        let r = verify_lower_bound_chain(&q, &bs, &basis, 0.0).unwrap();
        assert!(r.min_slack >= -1e-8);
        assert!((r.chi_compressed_target - 2.0).abs() < 1e-8);
    }
}

#[test]
fn chain_rejects_wrong_dimensions() {
    let (u, v, _, _) = setup("pauli2", "w", "w");
    let (_, _, basis, bs) = setup("a4", "theta", "theta");
    let p = build_teleport_processor(&u, &v, Tolerance::default()).unwrap();
    assert!(verify_lower_bound_chain(&p, &bs, &basis, 0.0).is_err());
}

#[test]
fn lower_bound_is_monotone_on_first_half() {
    let mut prev = f64::INFINITY;
    for k in 0..=500 {
        let x = lower_bound_from_dc(k as f64 / 1000.0, 5).unwrap();
        assert!(x <= prev + 1e-12);
        prev = x;
    }
}

#[test]
fn net_cardinality_matches_integer_power() {
    assert_eq!(net_cardinality(0.5, 7).unwrap(), 78125.0);
    assert_eq!(net_cardinality(2.0 / 3.0, 4).unwrap(), 256.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn holevo_is_nonnegative_and_bounded(seed in 0u64..1000, n in 1usize..6) {
        let e = random_ensemble(4, n, seed);
        let chi = holevo_information(&e, 1e-9).unwrap();
        prop_assert!(chi >= 0.0);
        prop_assert!(chi <= 2.0 + 1e-9);
    }

    #[test]
    fn data_processing_partial_trace(seed in 0u64..1000) {
        let e = random_ensemble(6, 4, seed);
        let chi = holevo_information(&e, 1e-9).unwrap();
        for keep in [Subsystem::First, Subsystem::Second] {
            let r = e.map(|rho| partial_trace(rho.matrix(), (2, 3), keep)).unwrap();
            prop_assert!(holevo_information(&r, 1e-9).unwrap() <= chi + 1e-9);
        }
    }

    #[test]
    fn data_processing_twirl_and_compression(seed in 0u64..1000) {
        let (u, v, basis, bs) = setup("a4", "theta", "theta");
        let w = bar_tensor_rep(&u, &v).unwrap();
        let e = random_ensemble(9, 4, seed);
        let chi = holevo_information(&e, 1e-9).unwrap();
        let tw = e.map(|rho| project_to_commutant(rho.matrix(), &w)).unwrap();
        let chi_tw = holevo_information(&tw, 1e-9).unwrap();
        prop_assert!(chi_tw <= chi + 1e-9);
        let cm = e.map(|rho| compress_map(rho.matrix(), &basis, &bs)).unwrap();
        prop_assert!(holevo_information(&cm, 1e-9).unwrap() <= chi_tw + 1e-9);
    }

    #[test]
    fn continuity_under_perturbation(seed in 0u64..1000, eps in 0.0f64..0.5) {
        let d = 3;
        let e = random_ensemble(d, 5, seed);
        let noise = random_ensemble(d, 5, seed + 7919);
        let items = e
            .items()
            .iter()
            .zip(noise.items())
            .map(|((p, rho), (_, tau))| {
                let m = rho.matrix() * c64(1.0 - eps, 0.0) + tau.matrix() * c64(eps, 0.0);
                (*p, DensityMatrix::new_unchecked(hermitian_part(&m)))
            })
            .collect();
        let f = Ensemble::new(items, 1e-12).unwrap();
        for ((_, a), (_, b)) in e.items().iter().zip(f.items()) {
            prop_assert!(a.trace_distance(b) <= eps + 1e-12);
        }
        let gap = holevo_information(&e, 1e-9).unwrap() - holevo_information(&f, 1e-9).unwrap();
        let slack = 2.0 * eps * (d as f64).log2() + 2.0 * binary_entropy(eps).unwrap();
        prop_assert!(gap.abs() <= slack + 1e-9, "gap {} slack {}", gap, slack);
    }

    #[test]
    fn lower_bound_is_continuous(eps in 0.0f64..0.99) {
        let a = lower_bound_from_dc(eps, 5).unwrap();
        let b = lower_bound_from_dc((eps + 1e-7).min(0.999_999), 5).unwrap();
        prop_assert!((a - b).abs() < 1e-2);
    }
}
