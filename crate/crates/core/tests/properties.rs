mod common;

use ltower_core::analysis::{level_norm, EllFit};
use ltower_core::io::TowerSpec;
use ltower_core::matrix_tree::{det_bareiss, det_multimodular, hadamard_bits};
use ltower_core::poly::{det_berkowitz, det_cofactor, resultant_multimodular};
use ltower_core::{
    classify_omega, cyclotomic, derived_graph, factor_kappa, iwasawa_fit_ell, padic_sqrt, resultant,
    spanning_tree_count, DeterminantConfig, Edge, FactorBudget, IntPoly, Multigraph, OmegaVerdict, Tower,
    VoltageAssignment,
};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn arb_intpoly(max_deg: usize, max_abs: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-max_abs..=max_abs, 1..=max_deg + 1).prop_map(|c| IntPoly::from_i64(&c))
}

/// Graph, ell and integer voltages, not necessarily meeting the standing hypotheses.
fn arb_assignment() -> impl Strategy<Value = VoltageAssignment> {
    (1usize..=3, prop::sample::select(vec![2u64, 3, 5]))
        .prop_flat_map(|(g, ell)| {
            let edges = prop::collection::vec((0..g, 0..g, -10i64..=10), 1..=5);
            (Just(g), Just(ell), edges)
        })
        .prop_map(|(g, ell, edges)| {
            let graph =
                Multigraph::with_vertex_count(g, edges.iter().map(|&(a, b, _)| Edge::new(a, b)).collect()).unwrap();
            let volts: Vec<i64> = edges.iter().map(|e| e.2).collect();
            VoltageAssignment::from_integers(graph, ell, 12, &volts).unwrap()
        })
}

fn arb_tower() -> impl Strategy<Value = Tower> {
    arb_assignment().prop_filter_map("standing hypotheses", |va| Tower::new(va).ok())
}

fn scaled(va: &VoltageAssignment, c: i64) -> VoltageAssignment {
    let volts: Vec<i64> = va.voltages().iter().map(|v| v.as_integer().unwrap() * c).collect();
    VoltageAssignment::from_integers(va.graph().clone(), va.ell(), va.precision(), &volts).unwrap()
}

fn rem_cyclic(p: &IntPoly, m: usize) -> IntPoly {
    let mut c = vec![BigInt::zero(); m + 1];
    c[0] = BigInt::from(-1);
    c[m] = BigInt::one();
    p.div_rem_monic(&IntPoly::new(c)).1
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn determinant_is_reciprocal_and_integerization_palindromic(t in arb_tower()) {
        let f = t.f();
        prop_assert_eq!(&f.invert_exponents(), f);
        let (u, b) = f.integerize().unwrap();
        prop_assert!(u.is_palindromic());
        prop_assert!(u.eval_i64(1).is_zero());
        prop_assert_eq!(2 * b as usize, u.degree().unwrap());
    }

    #[test]
    fn kappa_divides_next_level(t in arb_tower()) {
        let table = t.table(3, 1, &DeterminantConfig::default()).unwrap();
        for n in 0..3 {
            prop_assert!((&table.kappas[n + 1] % &table.kappas[n]).is_zero());
        }
    }

    #[test]
    fn galois_conjugate_norms_agree(t in arb_tower(), c in 1i64..20) {
        prop_assume!(!(c as u64).is_multiple_of(t.ell()));
        let g = t.f().compose_power(c as u64);
        for i in 1..=2 {
            prop_assert_eq!(level_norm(t.f(), i).unwrap(), level_norm(&g, i).unwrap());
        }
        let conj = Tower::new(scaled(t.voltage_assignment(), c)).unwrap();
        prop_assert_eq!(conj.f(), &g);
        let verdict = classify_omega(t.f()).unwrap().verdict;
        prop_assert_eq!(classify_omega(&g).unwrap().verdict, verdict);
    }

    #[test]
    fn normalization_preserves_counts(t in arb_tower()) {
        let va = t.voltage_assignment();
        let normalized = va.normalize(None).unwrap();
        let config = DeterminantConfig::default();
        for n in 1..=2 {
            let a = derived_graph(va, n).unwrap().spanning_tree_count(&config).unwrap();
            let b = derived_graph(&normalized, n).unwrap().spanning_tree_count(&config).unwrap();
            prop_assert_eq!(a, b);
        }
        prop_assert_eq!(
            classify_omega(t.f()).unwrap().verdict,
            classify_omega(Tower::new(normalized).unwrap().f()).unwrap().verdict
        );
    }

    #[test]
    fn connectivity_matches_subgroup_criterion(va in arb_assignment(), n in 1u32..=3) {
        prop_assume!(va.graph().is_connected());
        let cover = derived_graph(&va, n).unwrap();
        prop_assert_eq!(cover.is_connected(), va.cycle_voltages_generate(n).unwrap());
    }

    #[test]
    fn derived_cover_structure(va in arb_assignment(), n in 0u32..=2) {
        let cover = derived_graph(&va, n).unwrap();
        let d = va.ell().pow(n) as usize;
        let base = va.graph();
        prop_assert_eq!(cover.graph().vertex_count(), base.vertex_count() * d);
        prop_assert_eq!(cover.graph().edge_count(), base.edge_count() * d);
        prop_assert_eq!(cover.graph().euler_characteristic(), base.euler_characteristic() * d as i64);
        let val = cover.graph().valencies();
        let base_val = base.valencies();
        for (i, v) in val.iter().enumerate() {
            prop_assert_eq!(*v, base_val[cover.vertex_of(i).0]);
        }
        for (i, e) in cover.project().iter().enumerate() {
            prop_assert_eq!(*e, base.edges()[cover.edge_of(i).0]);
        }
    }

    #[test]
    fn reduce_level_is_a_ring_map(a in arb_tower(), b in arb_tower(), n in 1u32..=3) {
        prop_assume!(a.ell() == b.ell());
        let m = a.ell().pow(n) as usize;
        let prod = a.f().mul(b.f()).reduce_level(n).unwrap();
        let sep = &a.f().reduce_level(n).unwrap() * &b.f().reduce_level(n).unwrap();
        prop_assert_eq!(prod, rem_cyclic(&sep, m));
    }

    #[test]
    fn resultant_is_multiplicative(a in arb_intpoly(4, 9), b in arb_intpoly(4, 9), c in arb_intpoly(4, 9)) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let ab = &a * &b;
        let lhs = resultant(&ab, &c).unwrap();
        prop_assert_eq!(&lhs, &(resultant(&a, &c).unwrap() * resultant(&b, &c).unwrap()));
        prop_assert_eq!(&lhs, &resultant_multimodular(&ab, &c).unwrap());
    }

    #[test]
    fn cyclotomic_resultant_matches_norm(t in arb_tower(), i in 1u32..=3) {
        let phi = cyclotomic(t.ell().pow(i));
        let r = t.f().reduce_level(i).unwrap().div_rem_monic(&phi).1;
        prop_assert_eq!(resultant(&phi, &r).unwrap(), level_norm(t.f(), i).unwrap());
    }

    #[test]
    fn determinant_routes_agree(m in prop::collection::vec(prop::collection::vec(-20i64..=20, 5), 5), k in 1usize..=5) {
        let m: Vec<Vec<i64>> = m.iter().take(k).map(|r| r[..k].to_vec()).collect();
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let d = det_bareiss(&big);
        prop_assert_eq!(&det_cofactor(&big), &d);
        prop_assert_eq!(&det_berkowitz(&big), &d);
        prop_assert_eq!(&det_multimodular(&m, hadamard_bits(&m)), &d);
    }

    #[test]
    fn matrix_tree_matches_brute_force(g in 1usize..=5, edges in prop::collection::vec((0usize..5, 0usize..5), 0..=8)) {
        let graph = Multigraph::with_vertex_count(g, edges.iter().map(|&(a, b)| Edge::new(a % g, b % g)).collect()).unwrap();
        prop_assume!(graph.is_connected());
        prop_assert_eq!(spanning_tree_count(&graph).unwrap(), BigUint::from(common::brute_force_trees(&graph)));
    }

    #[test]
    fn omega_decomposition_reconstructs(t in arb_tower()) {
        let c = classify_omega(t.f()).unwrap();
        let d = c.decomposition.unwrap();
        prop_assert_eq!(d.reconstruct(), d.u.clone());
        prop_assert_eq!(c.verdict == OmegaVerdict::Bounded, d.non_cyclotomic_part.is_constant());
    }

    #[test]
    fn tower_spec_round_trips(va in arb_assignment()) {
        let spec = TowerSpec::from_assignment(&va);
        let again = TowerSpec::parse(&spec.to_json()).unwrap();
        prop_assert_eq!(&again, &spec);
        prop_assert_eq!(again.build().unwrap().reduced(12).unwrap(), va.reduced(12).unwrap());
    }

    #[test]
    fn padic_square_roots_square_back(x in 1i64..500, ell in prop::sample::select(vec![2u64, 3, 5, 7, 17])) {
        let d = x * x;
        prop_assume!(d % ell as i64 != 0);
        let branch = if ell == 2 { x.rem_euclid(8) as u64 } else { x.rem_euclid(ell as i64) as u64 };
        let r = padic_sqrt(d, ell, 8, Some(branch)).unwrap();
        let m = r.modulus() as i128;
        prop_assert_eq!((r.residue() as i128).pow(2) % m, (d as i128).rem_euclid(m));
    }

    #[test]
    fn ell_fit_recovers_synthetic_laws(ell in prop::sample::select(vec![2u64, 3, 5]), mu in 0i64..3, lambda in 0i64..6, nu in 0i64..8) {
        let vals: Vec<u32> = (0..6u32).map(|n| (mu * (ell as i64).pow(n) + lambda * n as i64 + nu) as u32).collect();
        let fit = iwasawa_fit_ell(ell, &vals).unwrap().unwrap();
        prop_assert_eq!(fit, EllFit { mu, lambda, nu, onset: 1 });
    }

    #[test]
    fn factorizations_multiply_back(n in 1u64..u64::MAX) {
        let big = BigUint::from(n);
        let fac = factor_kappa(&big, &FactorBudget::default());
        prop_assert!(fac.is_complete());
        let prod: BigUint = fac.factors.iter().map(|(p, e)| p.pow(*e)).product::<BigUint>() * &fac.cofactor;
        prop_assert_eq!(prod, big);
    }
}
