use num_rational::Ratio;
use pbd_core::bounds::{
    best_sigma_lower, bound_a, bound_b, bound_c, interval_source, max_valency_lower, scp_knkm_bounds, sigma_lower_dbe,
};
use pbd_core::classical::ClassicalError;
use pbd_core::constructions::{
    complement_path_partition, near_pencil, pbdc_equality, resolvable_cn_partition, scp_upper_prime, trivial_knkm,
    ConstructionError,
};
use pbd_core::graphs::bridge_to_design;
use pbd_core::{validate_partition, validate_pbd, CliquePartition, Design, Graph};
use proptest::prelude::*;

fn choose2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn bound_crossovers(n in 3usize..100_000, t in 0.0f64..1.0) {
        let tau = 2 + ((n - 3) as f64 * t) as usize;
        let (a, b, c) = (bound_a(n, tau).unwrap().exact, bound_b(n, tau).unwrap().exact, bound_c(n, tau).unwrap().exact);
        prop_assert_eq!(a >= b, tau * (tau - 1) < n);
        prop_assert_eq!(c >= b, 2 * tau + 1 >= n);
        let best = best_sigma_lower(n, tau).unwrap();
        prop_assert_eq!(best.source, interval_source(n, tau));
        prop_assert_eq!(best.exact, a.max(b).max(c));
        prop_assert!(best.exact >= sigma_lower_dbe(n).unwrap().exact);
    }

    #[test]
    fn knkm_lower_is_shifted_b(n in 2usize..100_000, t in 0.0f64..1.0) {
        let k = 2 + ((n - 2) as f64 * t) as usize;
        let shifted = bound_b(n, k).unwrap().exact - Ratio::from_integer(k as i128);
        prop_assert_eq!(shifted, scp_knkm_bounds(n, k).unwrap().lower.exact);
    }

    #[test]
    fn max_valency_is_least_root(n in 3usize..10_000_000) {
        let r = max_valency_lower(n).unwrap().ceil();
        prop_assert!(r * (r - 1) >= n as i128 - 1);
        prop_assert!((r - 1) * (r - 2) < n as i128 - 1);
    }

    /// Random subsets of the edges of a small graph, cliques chosen greedily:
    /// any valid partition conserves edges and sums valencies to sigma.
    #[test]
    fn partition_conservation(n in 2usize..14, seed in proptest::collection::vec(any::<bool>(), 91)) {
        let mut edges = Vec::new();
        let mut i = 0;
        for a in 0..n {
            for b in a + 1..n {
                if seed[i % seed.len()] {
                    edges.push((a, b));
                }
                i += 1;
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        // greedy: grow a clique from each uncovered edge
        let mut covered = std::collections::BTreeSet::new();
        let mut cliques = Vec::new();
        for &(a, b) in &edges {
            if covered.contains(&(a, b)) {
                continue;
            }
            let mut c = vec![a, b];
            for x in 0..n {
                if !c.contains(&x) && c.iter().all(|&y| g.has_edge(x, y) && !covered.contains(&(x.min(y), x.max(y)))) {
                    c.push(x);
                }
            }
            for (i, &x) in c.iter().enumerate() {
                for &y in &c[i + 1..] {
                    covered.insert((x.min(y), x.max(y)));
                }
            }
            cliques.push(c);
        }
        let p = CliquePartition::new(cliques);
        prop_assert!(validate_partition(&g, &p).ok);
        prop_assert_eq!(p.cliques().iter().map(|c| choose2(c.len())).sum::<usize>(), g.edge_count());
        prop_assert_eq!(p.valencies(n).iter().sum::<u64>(), p.sigma());
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bridged_constructions_are_pbds(n in 6usize..60, t in 0.0f64..1.0) {
        let m = 2 + ((n - 3) as f64 * t) as usize;
        let c = trivial_knkm(n, m).unwrap();
        let (_, p) = c.partition().unwrap();
        prop_assert!(validate_pbd(&bridge_to_design(n, m, p).unwrap()).ok);
        if m >= n.isqrt() {
            let c = scp_upper_prime(n, m).unwrap();
            let (_, p) = c.partition().unwrap();
            prop_assert!(validate_pbd(&bridge_to_design(n, m, p).unwrap()).ok);
        }
        if 2 * m < n && matches!(n / m, 2 | 3) {
            let c = match resolvable_cn_partition(n, m) {
                Ok(c) => c,
                // Kirkman systems above order 27 are only found for powers of 3
                Err(ConstructionError::Classical(ClassicalError::SearchExhausted { v, .. })) if n / m == 3 && v > 27 => {
                    return Ok(());
                }
                Err(e) => panic!("{e}"),
            };
            let (_, p) = c.partition().unwrap();
            prop_assert!(validate_pbd(&bridge_to_design(n, m, p).unwrap()).ok);
            prop_assert!(p.cliques().iter().all(|cl| cl.iter().filter(|&&x| x >= n - m).count() <= 1));
        }
    }

    #[test]
    fn design_valency_identity(n in 3usize..40, t in 0.0f64..1.0) {
        let k = n.div_ceil(2).max(2) + ((n - 1 - n.div_ceil(2).max(2)) as f64 * t) as usize;
        for d in [near_pencil(n).unwrap(), pbdc_equality(n, k).unwrap()] {
            let d: &Design = d.design().unwrap();
            prop_assert_eq!(d.valencies().iter().sum::<u64>(), d.sigma());
            prop_assert!(d.block_count() >= n);
        }
    }

    #[test]
    fn path_partitions_truncate(n in 11usize..300) {
        let c = complement_path_partition(n).unwrap();
        let (_, p) = c.partition().unwrap();
        let shorter = p.delete_points(n, &[n - 1]);
        prop_assert!(validate_partition(&Graph::complement_path(n - 1).unwrap(), &shorter).ok);
    }
}
