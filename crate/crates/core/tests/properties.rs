use num_bigint::BigInt;
use proptest::prelude::*;

use bellpoly_core::coords::{lift, project};
use bellpoly_core::format::{parse_inequalities, parse_table, write_inequalities, write_table, InequalityFile};
use bellpoly_core::polyhedra::{facets_from_vertices, membership};
use bellpoly_core::strategies::{enumerate_groupings, enumerate_lsr_vertices, stirling_second_kind};
use bellpoly_core::symmetry::{act_on_table, symmetry_group, Classifier};
use bellpoly_core::{CorrelationTable, LinearInequality, LocalSymmetry, Rational, Scenario, Space, VRep};

fn scenario() -> impl Strategy<Value = Scenario> {
    (1usize..=3, 1usize..=3).prop_map(|(ma, mb)| Scenario::binary(ma, mb).unwrap())
}

/// A normalized table with small positive integer weights per cell.
fn table(sc: Scenario) -> impl Strategy<Value = CorrelationTable> {
    prop::collection::vec(1u32..6, sc.len()).prop_map(move |w| {
        let mut entries = vec![Rational::from_integer(0.into()); sc.len()];
        for (i, j) in (0..sc.ma).flat_map(|i| (0..sc.mb).map(move |j| (i, j))) {
            let cells: Vec<usize> = (0..2).flat_map(|a| (0..2).map(move |b| sc.index(a, b, i, j))).collect();
            let total: u32 = cells.iter().map(|&k| w[k]).sum();
            for &k in &cells {
                entries[k] = Rational::new(w[k].into(), total.into());
            }
        }
        CorrelationTable::from_entries(sc, entries).unwrap()
    })
}

fn any_table() -> impl Strategy<Value = CorrelationTable> {
    scenario().prop_flat_map(table)
}

/// Local (hence no-signaling) table: mixture of local deterministic ones.
fn local_table(sc: Scenario) -> impl Strategy<Value = CorrelationTable> {
    let verts = enumerate_lsr_vertices(sc);
    let n = verts.len();
    prop::collection::vec((0..n, 1i64..10), 1..5).prop_map(move |picks| {
        let total: i64 = picks.iter().map(|(_, w)| w).sum();
        let weights: Vec<(Rational, &CorrelationTable)> = picks
            .iter()
            .map(|&(k, w)| (Rational::new(w.into(), total.into()), &verts[k]))
            .collect();
        CorrelationTable::weighted_sum(sc, weights.iter().map(|(w, t)| (w, *t))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stirling_recurrence(n in 1usize..=7, k in 1usize..=7) {
        let lhs = stirling_second_kind(n, k);
        let rhs = BigInt::from(k) * stirling_second_kind(n - 1, k) + stirling_second_kind(n - 1, k - 1);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn stirling_counts_groupings(n in 1usize..=7, k in 1usize..=7) {
        let listed = enumerate_groupings(n, k).iter().filter(|g| g.block_count() == k).count();
        prop_assert_eq!(stirling_second_kind(n, k), BigInt::from(listed));
    }

    #[test]
    fn bidir_projection_round_trips(t in any_table()) {
        let p = project(Space::Bidir, &t).unwrap();
        prop_assert_eq!(lift(&p).unwrap(), t);
    }

    #[test]
    fn fixed_projection_round_trips_on_local_tables(t in scenario().prop_flat_map(local_table)) {
        for space in [Space::FIXED, Space::Fixed(bellpoly_core::Direction::BobToAlice), Space::Bidir] {
            let p = project(space, &t).unwrap();
            prop_assert_eq!(p.coords.len(), space.dimension(&t.scenario()));
            prop_assert_eq!(lift(&p).unwrap(), t.clone());
        }
    }

    #[test]
    fn table_text_round_trips(t in any_table()) {
        prop_assert_eq!(parse_table(&write_table(&t)).unwrap(), t);
    }

    #[test]
    fn group_action_laws(
        t in table(Scenario::binary(3, 2).unwrap()),
        g in 0usize..384, h in 0usize..384,
    ) {
        let sc = Scenario::binary(3, 2).unwrap();
        let group = symmetry_group(&sc);
        let (g, h) = (&group[g], &group[h]);
        let act = |g: &LocalSymmetry, t: &CorrelationTable| act_on_table(g, t).unwrap();
        prop_assert_eq!(act(&g.compose(h), &t), act(g, &act(h, &t)));
        prop_assert_eq!(act(&g.inverse(), &act(g, &t)), t.clone());
        prop_assert_eq!(act(&LocalSymmetry::identity(&sc), &t), t);
        prop_assert_eq!(g.compose(&g.inverse()), LocalSymmetry::identity(&sc));
    }

    #[test]
    fn canonical_form_is_orbit_invariant(
        coeffs in prop::collection::vec(-3i64..=3, 15),
        bound in 0i64..4,
        g in 0usize..384,
    ) {
        let c = Classifier::new(Scenario::binary(3, 2).unwrap(), Space::FIXED).unwrap();
        let q = LinearInequality::from_i64(&coeffs, bound).unwrap();
        let gq = c.act(g, &q).unwrap();
        prop_assert_eq!(c.canonical(&gq).unwrap(), c.canonical(&q).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hull_agrees_with_membership(
        weights in prop::collection::vec(0i64..6, 16),
        stretch in 0i64..20,
    ) {
        let sc = Scenario::binary(2, 2).unwrap();
        let v = VRep::from_points(
            enumerate_lsr_vertices(sc).iter().map(|t| project(Space::Bidir, t).unwrap().coords).collect(),
        ).unwrap();
        let h = facets_from_vertices(&v).unwrap();
        let total: i64 = weights.iter().sum::<i64>().max(1);
        let centroid = |c: usize| v.points.iter().map(|p| p[c].clone()).sum::<Rational>() / Rational::from_integer(16.into());
        let lambda = Rational::new(stretch.into(), 10.into());
        let x: Vec<Rational> = (0..v.dimension)
            .map(|c| {
                let mix: Rational = v.points.iter().zip(&weights)
                    .map(|(p, &w)| &p[c] * Rational::new(w.into(), total.into()))
                    .sum();
                let mix = if weights.iter().all(|&w| w == 0) { v.points[0][c].clone() } else { mix };
                centroid(c) + &lambda * (mix - centroid(c))
            })
            .collect();
        let m = membership(&x, &v).unwrap();
        prop_assert_eq!(m.is_inside(), h.contains(&x).unwrap());
        prop_assert!(m.verify(&x, &v));
    }
}

#[test]
fn inequality_file_round_trips() {
    let sc = Scenario::binary(2, 2).unwrap();
    let v = VRep::from_points(
        enumerate_lsr_vertices(sc).iter().map(|t| project(Space::Bidir, t).unwrap().coords).collect(),
    )
    .unwrap();
    let f = InequalityFile::from_hrep(Space::Bidir, sc, facets_from_vertices(&v).unwrap());
    let text = write_inequalities(&f);
    assert_eq!(write_inequalities(&parse_inequalities(&text).unwrap()), text);
}
