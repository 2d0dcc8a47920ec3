use escapeflow::closed_form::{check_flux_stab, parent_forward_step, peel, peel_all, PeelState};
use escapeflow::forest::{
    build_msf, build_scaled_msf, layer_embed, orient_components, sample_weights, stats,
    verify_property_ii, Forest, RootPolicy, ShiftMode,
};
use escapeflow::init::descendant_init;
use escapeflow::lattice::{LatticeSpec, Topology};
use escapeflow::ResourceField;
use proptest::prelude::*;

/// Ancestors of `x` (itself first) by walking parent links.
fn ancestry(f: &Forest, x: usize) -> Vec<usize> {
    let mut out = vec![x];
    while let Some(p) = f.parent(*out.last().unwrap()) {
        out.push(p);
    }
    out
}

/// `(descendant count, height)` of every member from ancestor chains alone.
fn naive_stats(f: &Forest) -> Vec<(u64, u32)> {
    let n = f.spec().len();
    let mut desc = vec![0u64; n];
    let mut height = vec![0u32; n];
    for z in f.members() {
        for (depth, a) in ancestry(f, z).into_iter().enumerate() {
            desc[a] += 1;
            height[a] = height[a].max(depth as u32);
        }
    }
    desc.into_iter().zip(height).collect()
}

#[derive(Debug, Clone)]
enum Kind {
    Scaled { base: usize, policy: RootPolicy },
    Planar { side: usize },
    Layered,
}

fn arb_forest() -> impl Strategy<Value = (Kind, u64)> {
    let kind = prop_oneof![
        (
            2usize..=10,
            prop::sample::select(vec![
                RootPolicy::NearestBoundary,
                RootPolicy::LexicographicMin
            ])
        )
            .prop_map(|(base, policy)| Kind::Scaled { base, policy }),
        (2usize..=12).prop_map(|side| Kind::Planar { side }),
        Just(Kind::Layered),
    ];
    (kind, any::<u64>())
}

fn make(kind: &Kind, seed: u64) -> Forest {
    match *kind {
        Kind::Scaled { base, policy } => {
            let base = LatticeSpec::cube(2, base, Topology::BoxZero).unwrap();
            build_scaled_msf(&base, seed, policy, &ShiftMode::Random, Topology::BoxSink)
                .unwrap()
                .0
        }
        Kind::Planar { side } => {
            let spec = LatticeSpec::cube(2, side, Topology::BoxSink).unwrap();
            orient_components(
                &build_msf(&spec, &sample_weights(&spec, seed)).unwrap(),
                RootPolicy::NearestBoundary,
            )
        }
        Kind::Layered => {
            let spec = LatticeSpec::new(vec![5, 4, 3], Topology::BoxSink).unwrap();
            orient_components(
                &layer_embed(&spec, seed).unwrap(),
                RootPolicy::LexicographicMin,
            )
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn stats_match_ancestor_walks((kind, seed) in arb_forest()) {
        let f = make(&kind, seed);
        let st = stats(&f);
        let naive = naive_stats(&f);
        for x in f.members() {
            prop_assert_eq!((st.desc(x), st.height(x)), naive[x]);
            let child_sum: u64 = f.children(x).iter().map(|&y| st.desc(y)).sum();
            prop_assert_eq!(st.desc(x), 1 + child_sum);
        }
    }

    #[test]
    fn peeling_removes_by_height((kind, seed) in arb_forest()) {
        let f = make(&kind, seed);
        let st = stats(&f);
        let states = peel_all(&f);
        prop_assert!(states.last().unwrap().is_extinct());
        prop_assert_eq!(states.len() as u32, st.max_height() + 2);
        for (n, s) in states.iter().enumerate() {
            for x in f.members() {
                prop_assert_eq!(s.is_alive(x), st.height(x) >= n as u32);
            }
        }
        let last = states.last().unwrap();
        for x in f.members() {
            let r = last.removed_at(x).unwrap();
            prop_assert_eq!(r, st.height(x) + 1);
            prop_assert!(u64::from(r) <= 1 + st.desc(x));
        }
    }

    #[test]
    fn forwarding_counts_deep_descendants((kind, seed) in arb_forest()) {
        // C_n(x) is the number of descendants of x at depth >= n below it
        let f = make(&kind, seed);
        let mut field: ResourceField<u64> = descendant_init(&f, f.spec()).unwrap();
        let total = field.total().unwrap();
        let mut state = PeelState::new(&f);
        let mut depth_below = vec![Vec::new(); f.spec().len()];
        for z in f.members() {
            for (d, a) in ancestry(&f, z).into_iter().enumerate() {
                depth_below[a].push(d as u32);
            }
        }
        for n in 0u32.. {
            prop_assert!(check_flux_stab(&field, &f, &state).unwrap().holds);
            for (x, depths) in depth_below.iter().enumerate() {
                let want = depths.iter().filter(|&&d| d >= n).count() as u64;
                prop_assert_eq!(*field.get(x), want);
            }
            prop_assert_eq!(field.grand_total().unwrap(), total);
            if state.is_extinct() {
                prop_assert_eq!(*field.sink(), total);
                break;
            }
            field = parent_forward_step(&field, &f, &state).unwrap();
            state = peel(&state, &f);
        }
    }
}

#[test]
fn scaled_forests_have_property_ii_and_expected_size() {
    for seed in 0..30 {
        for base_side in [2usize, 3, 5, 8] {
            let base = LatticeSpec::cube(2, base_side, Topology::BoxZero).unwrap();
            let (f, w) = build_scaled_msf(
                &base,
                seed,
                RootPolicy::NearestBoundary,
                &ShiftMode::Random,
                Topology::BoxSink,
            )
            .unwrap();
            let n = base.len();
            assert_eq!(f.member_count(), 2 * n - 1);
            assert_eq!(f.roots().len(), 1);
            assert!(verify_property_ii(&f).holds, "seed {seed} side {base_side}");
            // images 2x+W of base vertices alternate with link midpoints
            let odd = |x: usize| {
                f.spec()
                    .vertex(x)
                    .0
                    .iter()
                    .zip(&w.0)
                    .filter(|(a, b)| (*a - *b).rem_euclid(2) == 1)
                    .count()
            };
            let images = f.members().filter(|&x| odd(x) == 0).count();
            assert_eq!(images, n);
            for (child, parent) in f.links() {
                assert_eq!(odd(child) + odd(parent), 1);
                if odd(parent) == 1 {
                    assert_eq!(f.children(parent), [child]);
                }
            }
        }
    }
}

#[test]
fn unscaled_spanning_trees_miss_lattice_edges() {
    // a spanning tree keeps every vertex, so each non-tree edge is a violation
    for seed in 0..20 {
        let spec = LatticeSpec::cube(2, 8, Topology::BoxSink).unwrap();
        let f = orient_components(
            &build_msf(&spec, &sample_weights(&spec, seed)).unwrap(),
            RootPolicy::NearestBoundary,
        );
        assert_eq!(
            verify_property_ii(&f).violations.len(),
            spec.edges().len() - (spec.len() - 1)
        );
    }
}
