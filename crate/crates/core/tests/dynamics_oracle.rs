mod common;

use std::collections::BTreeMap;

use escapeflow::dynamics::{self, Process, SinkLinks, StopRule, Target};
use escapeflow::lattice::{LatticeSpec, Topology, Vertex};
use escapeflow::ResourceField;
use proptest::prelude::*;

use common::CoordLattice;

fn arb_case() -> impl Strategy<Value = (Vec<usize>, Topology, Vec<u64>, u64)> {
    (
        prop::collection::vec(2usize..=5, 1..=3),
        prop::sample::select(vec![Topology::Torus, Topology::BoxZero]),
    )
        .prop_flat_map(|(sides, topo)| {
            let n: usize = sides.iter().product();
            // small value range so ties are common
            (
                Just(sides),
                Just(topo),
                prop::collection::vec(0u64..5, n),
                any::<u64>(),
            )
        })
}

fn as_map(spec: &LatticeSpec, values: &[u64]) -> BTreeMap<Vec<i64>, u64> {
    (0..spec.len())
        .map(|i| (spec.vertex(i).0, values[i]))
        .collect()
}

fn coord_lattice(spec: &LatticeSpec) -> CoordLattice {
    CoordLattice {
        sides: spec.sides().iter().map(|&l| l as i64).collect(),
        torus: spec.topology() == Topology::Torus,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn routing_matches_brute_force((sides, topo, values, seed) in arb_case()) {
        let spec = LatticeSpec::new(sides, topo).unwrap();
        let oracle = coord_lattice(&spec);
        let field = ResourceField::from_values(&spec, values.clone()).unwrap();
        let decision = Process::new(seed).route(&field).unwrap();
        let c = as_map(&spec, &values);
        let maxima = oracle.maximizers(&c);

        for i in 0..spec.len() {
            let x = spec.vertex(i);
            match maxima.get(&x.0) {
                None => prop_assert_eq!(decision.target(i), Target::Vertex(i)),
                Some(m) => {
                    let got: Vec<Vec<i64>> = decision.argmax(i).iter().map(|&j| spec.vertex(j).0).collect();
                    prop_assert_eq!(&got, m);
                    let Target::Vertex(t) = decision.target(i) else { panic!("sink without sink links") };
                    prop_assert!(m.contains(&spec.vertex(t).0));
                }
            }
        }
        let tied = maxima.values().filter(|m| m.len() > 1).count();
        prop_assert_eq!(decision.tie_count(), tied);

        // replaying the crate's tie choices through the oracle gives the same field
        let next = dynamics::step(&field, &decision).unwrap();
        let want = oracle.step(&c, |x, _| {
            let Target::Vertex(t) = decision.target(spec.index(&Vertex(x.to_vec())).unwrap()) else { unreachable!() };
            spec.vertex(t).0
        });
        prop_assert_eq!(as_map(&spec, next.values()), want);
    }

    #[test]
    fn sink_links_drain_positive_vertices(values in prop::collection::vec(0u64..4, 12), mask in prop::collection::vec(any::<bool>(), 12), seed: u64) {
        let spec = LatticeSpec::new(vec![3, 4], Topology::BoxSink).unwrap();
        let field = ResourceField::from_values(&spec, values.clone()).unwrap();
        let decision = Process::new(seed).with_sinks(SinkLinks::from_mask(mask.clone())).route(&field).unwrap();
        let next = dynamics::step(&field, &decision).unwrap();
        let drained: u64 = (0..12).filter(|&i| mask[i]).map(|i| values[i]).sum();
        for i in 0..12 {
            if mask[i] && values[i] > 0 {
                prop_assert_eq!(decision.target(i), Target::Sink);
            }
        }
        prop_assert_eq!(*next.sink(), drained);
        prop_assert_eq!(next.grand_total().unwrap(), field.grand_total().unwrap());
    }

    #[test]
    fn totals_are_conserved((sides, topo, values, seed) in arb_case()) {
        let spec = LatticeSpec::new(sides, topo).unwrap();
        let field = ResourceField::from_values(&spec, values).unwrap();
        let total = field.total().unwrap();
        let mut seen = 0;
        let trace = Process::new(seed).run(field, 30, StopRule::Budget, |f| {
            seen += 1;
            assert_eq!(f.total()?, total);
            Ok(())
        }).unwrap();
        prop_assert_eq!(trace.final_field.total().unwrap(), total);
        prop_assert!(seen >= 30);
    }

    #[test]
    fn fixed_configurations_do_not_move((sides, topo, values, seed) in arb_case()) {
        let spec = LatticeSpec::new(sides, topo).unwrap();
        let mut field = ResourceField::from_values(&spec, values).unwrap();
        let process = Process::new(seed);
        for _ in 0..40 {
            let d = process.route(&field).unwrap();
            let next = dynamics::step(&field, &d).unwrap();
            if d.is_fixed(&field) {
                prop_assert_eq!(next.values(), field.values());
                // and the positive vertices are pairwise non-adjacent
                let pos = field.positive_indices();
                for (a, &u) in pos.iter().enumerate() {
                    for &v in &pos[a + 1..] {
                        prop_assert!(!spec.are_adjacent(u, v));
                    }
                }
                break;
            }
            field = next;
        }
    }
}

#[test]
fn worked_example_on_a_path() {
    let spec = LatticeSpec::new(vec![3], Topology::BoxZero).unwrap();
    let oracle = coord_lattice(&spec);
    let mut c = as_map(&spec, &[1, 2, 3]);
    c = oracle.step(&c, |_, _| unreachable!("no ties"));
    assert_eq!(c.values().copied().collect::<Vec<_>>(), [0, 1, 5]);
    c = oracle.step(&c, |_, _| unreachable!("no ties"));
    assert_eq!(c.values().copied().collect::<Vec<_>>(), [0, 0, 6]);

    let trace = Process::new(0)
        .run(
            ResourceField::from_values(&spec, vec![1u64, 2, 3]).unwrap(),
            10,
            StopRule::Fixation,
            |_| Ok(()),
        )
        .unwrap();
    assert_eq!(trace.final_field.values(), [0, 0, 6]);
    assert_eq!(trace.outcome.step, 2);
}

#[test]
fn tie_choice_is_uniform_over_maximizers() {
    // the centre of a plus shape sits below four equal arms, a four-way tie
    let spec = LatticeSpec::cube(2, 3, Topology::BoxZero).unwrap();
    let values = vec![0u64, 2, 0, 2, 1, 2, 0, 2, 0];
    let field = ResourceField::from_values(&spec, values).unwrap();
    let centre = 4;
    let mut counts = BTreeMap::new();
    let runs = 8000;
    for seed in 0..runs {
        let d = Process::new(seed).route(&field).unwrap();
        assert_eq!(d.argmax(centre), [1, 3, 5, 7]);
        *counts.entry(d.target(centre)).or_insert(0u32) += 1;
    }
    assert_eq!(counts.len(), 4);
    let expected = runs as f64 / 4.0;
    let chi2: f64 = counts
        .values()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    // 3 degrees of freedom, p = 0.001
    assert!(chi2 < 16.27, "chi2 = {chi2}, counts {counts:?}");
}
