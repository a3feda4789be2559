//! Properties of the merge operators on states drawn from real diagrams.

mod common;

use proptest::prelude::*;
use rand::Rng;
use seqbound_core::model::DpModel;
use seqbound_core::prelude::*;

/// Checks the merge laws on three states of one layer.
fn merge_laws<M: DpModel>(m: &M, layer: usize, s: &M::State, t: &M::State, u: &M::State) -> Result<(), TestCaseError> {
    let st = m.merge(s, t);
    prop_assert_eq!(&st, &m.merge(t, s), "not commutative");
    prop_assert_eq!(&m.merge(s, s), s, "not idempotent");
    prop_assert_eq!(m.merge(&st, u), m.merge(s, &m.merge(t, u)), "not associative");

    let merged_controls = m.controls(&st, layer);
    for side in [s, t] {
        for x in m.controls(side, layer) {
            prop_assert!(merged_controls.contains(&x), "control {} lost by merging", x);
            let relaxed = m.immediate_cost(&st, x, layer).unwrap();
            let original = m.immediate_cost(side, x, layer).unwrap();
            prop_assert!(relaxed >= 0);
            prop_assert!(relaxed <= original, "cost of {} rose from {} to {}", x, original, relaxed);
            // The successor of the merged state relaxes the original successor.
            let next_relaxed = m.transition(&st, x, layer).unwrap();
            let next_original = m.transition(side, x, layer).unwrap();
            prop_assert_eq!(m.merge(&next_relaxed, &next_original), next_relaxed);
        }
    }
    Ok(())
}

fn check<M: DpModel>(m: &M, seed: u64) -> Result<(), TestCaseError> {
    let d = compile_relaxed(m, &BuildOptions::default()).unwrap();
    let mut rng = common::rng(seed);
    let layer = rng.gen_range(0..d.num_layers() - 1);
    let nodes = d.layer(layer);
    let mut pick = || d.state(rng.gen_range(nodes.clone())).clone();
    let (s, t, u) = (pick(), pick(), pick());
    merge_laws(m, layer, &s, &t, &u)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn merge_is_a_relaxing_semilattice(kind in 0..5usize, n in 2..=9usize, seed in any::<u64>()) {
        let kind = common::KINDS[kind];
        let (inst, dues) = common::random_instance(kind, n, seed);
        with_each_model!(inst, dues, |m| check(&m, seed))?;
    }

    #[test]
    fn immediate_costs_are_nonnegative(kind in 0..5usize, n in 1..=9usize, seed in any::<u64>()) {
        let kind = common::KINDS[kind];
        let (inst, dues) = common::random_instance(kind, n, seed);
        let ok = with_each_model!(inst, dues, |m| {
            let d = compile_relaxed(&m, &BuildOptions::default()).unwrap();
            d.arcs().iter().all(|a| a.cost >= 0)
        });
        prop_assert!(ok);
    }

    #[test]
    fn due_dates_grow_with_h(p in prop::collection::vec(0..100i64, 1..30), h in 0.0..1.0f64, dh in 0.0..1.0f64) {
        let n = p.len();
        let inst = JobInstance::common_due(p, vec![1; n], vec![1; n]);
        let h2 = (h + dh).min(1.0);
        prop_assert!(d_of_h(&inst, h).unwrap() <= d_of_h(&inst, h2).unwrap());
    }
}
