use facloc::analysis::{evaluate, PredictionMode};
use facloc::instances::{
    bound, coa_worst_instance, consistency_bound, robustness_bound, BoundMode,
};
use facloc::optimal::{geometric_median, weighted_gradient_norm, SolverConfig};
use facloc::{
    cm, cmp, euclidean_distance, gcm, lower_median, utilitarian_cost, Agent, Instance, Point,
};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| Point::new(x, y))
}

fn agents(max: usize) -> impl Strategy<Value = Vec<Agent>> {
    prop::collection::vec((point(), 1.0..10.0f64), 1..=max)
        .prop_map(|v| v.into_iter().map(|(p, w)| Agent::new(p, w).unwrap()).collect())
}

proptest! {
    #[test]
    fn distance_is_a_metric(a in point(), b in point(), c in point()) {
        prop_assert_eq!(euclidean_distance(a, b), euclidean_distance(b, a));
        prop_assert!(euclidean_distance(a, c) <= euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-12);
        prop_assert_eq!(euclidean_distance(a, a), 0.0);
    }

    #[test]
    fn cost_scales_with_uniform_weight(agents in agents(10), f in point(), lambda in 0.1..20.0f64) {
        let base = utilitarian_cost(f, &agents).unwrap();
        let scaled: Vec<Agent> = agents.iter().map(|a| a.reweighted(a.weight() * lambda).unwrap()).collect();
        let after = utilitarian_cost(f, &scaled).unwrap();
        prop_assert!((after.total_cost - lambda * base.total_cost).abs() <= 1e-12 * after.total_cost.max(1.0));
        let mean = base.per_agent.iter().sum::<f64>() / agents.len() as f64;
        prop_assert!((mean - base.total_cost).abs() <= 1e-12 * base.total_cost.max(1.0));
    }

    #[test]
    fn lower_median_is_an_order_insensitive_member(mut values in prop::collection::vec(-100.0..100.0f64, 1..30), seed in any::<u64>()) {
        let m = lower_median(&values).unwrap();
        prop_assert!(values.contains(&m));
        let below = values.iter().filter(|&&v| v < m).count();
        let at_most = values.iter().filter(|&&v| v <= m).count();
        prop_assert!(below <= (values.len() - 1) / 2 && (values.len() - 1) / 2 < at_most);
        let k = values.len();
        values.rotate_left((seed as usize) % k);
        values.reverse();
        prop_assert_eq!(lower_median(&values).unwrap(), m);
    }

    #[test]
    fn mechanisms_ignore_weights(agents in agents(12), prediction in point(), c in 0.0..0.99f64, scale in 0.1..10.0f64) {
        let reweighted: Vec<Agent> = agents.iter().enumerate()
            .map(|(i, a)| a.reweighted(a.weight() * scale + i as f64).unwrap())
            .collect();
        prop_assert_eq!(cm(&agents).unwrap(), cm(&reweighted).unwrap());
        prop_assert_eq!(cmp(&agents, prediction, c).unwrap(), cmp(&reweighted, prediction, c).unwrap());
    }

    #[test]
    fn zero_confidence_reduces_to_cm(agents in agents(12), prediction in point()) {
        prop_assert_eq!(cmp(&agents, prediction, 0.0).unwrap().facility, cm(&agents).unwrap().facility);
    }

    #[test]
    fn mechanisms_are_order_insensitive(mut agents in agents(12), phantoms in prop::collection::vec(point(), 0..5)) {
        let before = gcm(&agents, &phantoms).unwrap().facility;
        agents.reverse();
        let mut phantoms = phantoms;
        phantoms.reverse();
        prop_assert_eq!(gcm(&agents, &phantoms).unwrap().facility, before);
    }

    #[test]
    fn unanimity(p in point(), n in 1usize..10, c in 0.0..0.99f64) {
        let agents = vec![Agent::new(p, 2.0).unwrap(); n];
        prop_assert_eq!(cmp(&agents, p, c).unwrap().facility, p);
    }

    #[test]
    fn augmented_size_counts_phantoms(agents in agents(12), prediction in point(), c in 0.0..0.99f64) {
        let out = cmp(&agents, prediction, c).unwrap();
        prop_assert_eq!(out.augmented_size, agents.len() + out.phantom_count);
        prop_assert_eq!(out.phantom_count, (c * agents.len() as f64 + 1e-9).floor() as usize);
    }

    #[test]
    fn optimum_is_first_order_stationary_and_scale_invariant(agents in agents(10), lambda in 0.2..5.0f64) {
        let cfg = SolverConfig::default();
        let opt = geometric_median(&agents, &cfg).unwrap();
        prop_assert!(opt.converged);
        if !opt.anchored {
            prop_assert!(weighted_gradient_norm(&agents, opt.location) <= cfg.tolerance);
        }
        let scaled: Vec<Agent> = agents.iter().map(|a| a.reweighted(a.weight() * lambda).unwrap()).collect();
        let again = geometric_median(&scaled, &cfg).unwrap();
        prop_assert!(euclidean_distance(opt.location, again.location) <= 1e-8);
    }

    #[test]
    fn ratio_never_drops_below_one(agents in agents(10), prediction in point(), c in 0.0..0.99f64) {
        let inst = Instance::new(agents).unwrap();
        let r = evaluate(&inst, c, PredictionMode::Fixed(prediction)).unwrap();
        prop_assert!(r.ratio >= 1.0 - 1e-9);
    }
}

#[test]
fn bounds_reduce_to_unweighted_forms() {
    for k in 0..10 {
        let c = k as f64 / 10.0;
        let s = (2.0 + 2.0 * c * c).sqrt();
        for w in [0.5, 1.0, 7.0] {
            assert!((consistency_bound(c, w, w).unwrap() - s / (1.0 + c)).abs() < 1e-12);
            assert!((robustness_bound(c, w, w).unwrap() - s / (1.0 - c)).abs() < 1e-12);
        }
    }
}

#[test]
fn bounds_are_monotone_in_confidence() {
    for w_max in [1.0, 1.5, 2.0, 5.0, 10.0] {
        let mut prev = (f64::INFINITY, 0.0);
        for k in 0..100 {
            let c = k as f64 / 100.0;
            let cons = consistency_bound(c, 1.0, w_max).unwrap();
            let rob = robustness_bound(c, 1.0, w_max).unwrap();
            assert!(cons <= prev.0 && rob >= prev.1);
            assert!(rob >= cons);
            prev = (cons, rob);
        }
    }
}

#[test]
fn generated_coa_instances_are_sound() {
    for mode in [BoundMode::Consistency, BoundMode::Robustness] {
        for c in [0.0, 0.5] {
            for w_max in [1.0, 2.0, 5.0] {
                let coa = coa_worst_instance(8, c, 1.0, w_max, mode).unwrap();
                let inst = &coa.instance;
                let f = cmp(inst.agents(), inst.prediction().unwrap(), c).unwrap();
                assert_eq!(f.facility, Point::ORIGIN);
                let pred = match mode {
                    BoundMode::Consistency => PredictionMode::Accurate,
                    BoundMode::Robustness => PredictionMode::Fixed(Point::ORIGIN),
                };
                let r = evaluate(inst, c, pred).unwrap();
                assert_eq!(r.optimal, Point::new(0.0, 1.0));
                assert!((r.ratio - coa.expected_ratio).abs() < 1e-6);
                assert!((coa.expected_ratio - bound(c, 1.0, w_max, mode).unwrap()).abs() < 1e-15);
            }
        }
    }
}
