mod common;

use common::{alpha, pairs, train};
use proptest::prelude::*;
use spikequant::{
    cascade_oracle, lif_run, lif_transform, membrane_trace, prefix_sums, quantization_error,
    truncate_quantize, LeakRate, LifConfig, Neuron, ResetMode, SpikeTrain,
};

fn threshold() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.5), Just(1.0), Just(2.0), 0.05f64..5.0]
}

fn mode() -> impl Strategy<Value = ResetMode> {
    prop_oneof![
        Just(ResetMode::Zero),
        Just(ResetMode::Subtract),
        Just(ResetMode::Mod)
    ]
}

fn cfg(theta: f64, a: LeakRate, m: ResetMode) -> LifConfig {
    LifConfig::new(theta, a, m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn reset_to_mod_error_is_below_threshold(t in train(80, 20.0), a in alpha(), theta in threshold()) {
        let err = quantization_error(&t, &cfg(theta, a, ResetMode::Mod));
        prop_assert!(err < theta, "error {} >= threshold {}", err, theta);
    }

    #[test]
    fn reset_to_mod_matches_cascade(t in train(80, 20.0), a in alpha(), theta in threshold()) {
        let out = lif_transform(&t, &cfg(theta, a, ResetMode::Mod));
        let reference = cascade_oracle(&t, theta, a).unwrap();
        prop_assert_eq!(out.len(), reference.len());
        for (x, y) in out.iter().zip(&reference) {
            prop_assert_eq!(x.time, y.time);
            prop_assert!((x.amplitude - y.amplitude).abs() <= 1e-9);
        }
    }

    #[test]
    fn reset_to_mod_emits_nonzero_multiples(t in train(80, 20.0), a in alpha(), theta in threshold()) {
        for s in &lif_transform(&t, &cfg(theta, a, ResetMode::Mod)) {
            let k = (s.amplitude / theta).round();
            prop_assert!(k != 0.0);
            prop_assert!((s.amplitude / theta - k).abs() <= 1e-9);
        }
    }

    #[test]
    fn single_step_modes_emit_unit_amplitudes(t in train(80, 5.0), a in alpha(), theta in threshold()) {
        for m in [ResetMode::Zero, ResetMode::Subtract] {
            for s in &lif_transform(&t, &cfg(theta, a, m)) {
                prop_assert_eq!(s.amplitude.abs(), theta);
            }
        }
    }

    #[test]
    fn output_times_are_input_times(t in train(80, 5.0), a in alpha(), theta in threshold(), m in mode()) {
        let inputs: Vec<f64> = t.times().collect();
        for s in &lif_transform(&t, &cfg(theta, a, m)) {
            prop_assert!(inputs.contains(&s.time));
        }
    }

    #[test]
    fn residual_stays_below_threshold(t in train(80, 20.0), a in alpha(), theta in threshold()) {
        let mut neuron = Neuron::new(cfg(theta, a, ResetMode::Mod));
        for &s in &t {
            neuron.step(s);
            prop_assert!(neuron.state().potential.abs() < theta);
        }
    }

    #[test]
    fn error_prefix_sums_track_residual(t in train(80, 5.0), a in alpha(), theta in threshold()) {
        // the running pseudo-sum of eta - LIF(eta) is the post-event potential
        for m in [ResetMode::Subtract, ResetMode::Mod] {
            let c = cfg(theta, a, m);
            let err = t.difference(&lif_transform(&t, &c));
            let sums = prefix_sums(&err, a);
            let mut neuron = Neuron::new(c);
            for (s, sum) in t.iter().zip(sums) {
                neuron.step(*s);
                prop_assert!((neuron.state().potential - sum).abs() <= 1e-9 * (1.0 + sum.abs()));
            }
        }
    }

    #[test]
    fn multiples_are_fixed_points(
        ks in prop::collection::vec((0u32..100, (-6i32..6).prop_filter("nonzero", |k| *k != 0)), 0..40),
        a in alpha(),
        theta in prop_oneof![Just(0.5), Just(1.0), Just(2.0)],
    ) {
        let t = SpikeTrain::from_events(ks.iter().map(|&(ti, k)| (ti as f64, k as f64 * theta))).unwrap();
        let c = cfg(theta, a, ResetMode::Mod);
        prop_assert_eq!(&lif_transform(&t, &c), &t);
        prop_assert_eq!(&cascade_oracle(&t, theta, a).unwrap(), &t);
    }

    #[test]
    fn reset_to_mod_is_idempotent(t in train(80, 20.0), a in alpha(), theta in prop_oneof![Just(0.5), Just(1.0), Just(2.0)]) {
        let c = cfg(theta, a, ResetMode::Mod);
        let once = lif_transform(&t, &c);
        prop_assert_eq!(lif_transform(&once, &c), once);
    }

    #[test]
    fn memoryless_mod_truncates_each_spike(t in train(80, 20.0), theta in threshold()) {
        let out = lif_transform(&t, &cfg(theta, LeakRate::Infinite, ResetMode::Mod));
        let expected: Vec<(f64, f64)> = t
            .iter()
            .filter(|s| s.amplitude.abs() >= theta)
            .map(|s| (s.time, truncate_quantize(s.amplitude / theta).unwrap() as f64 * theta))
            .collect();
        prop_assert_eq!(pairs(&out).len(), expected.len());
        for ((t1, a1), (t2, a2)) in pairs(&out).into_iter().zip(expected) {
            prop_assert_eq!(t1, t2);
            prop_assert!((a1 - a2).abs() <= 1e-9 * theta);
        }
    }

    #[test]
    fn threshold_scaling_covariance(t in train(80, 20.0), a in alpha(), m in mode(), exp in -3i32..4) {
        // power-of-two factors keep every operation exact
        let c = 2f64.powi(exp);
        let base = lif_transform(&t, &cfg(1.0, a, m));
        let scaled = lif_transform(&t.scale(c).unwrap(), &cfg(c, a, m));
        prop_assert_eq!(scaled, base.scale(c).unwrap());
        let e1 = quantization_error(&t, &cfg(1.0, a, m));
        let e2 = quantization_error(&t.scale(c).unwrap(), &cfg(c, a, m));
        prop_assert_eq!(e2, c * e1);
    }

    #[test]
    fn subthreshold_inputs_keep_subtraction_bounded(
        amps in prop::collection::vec(-1.0f64..=1.0, 0..80),
        a in alpha(),
        theta in threshold(),
    ) {
        let t = SpikeTrain::from_events(amps.iter().enumerate().map(|(i, &x)| (i as f64, x * theta))).unwrap();
        let err = quantization_error(&t, &cfg(theta, a, ResetMode::Subtract));
        prop_assert!(err < theta);
    }

    #[test]
    fn trace_at_event_times_is_post_event_state(t in train(40, 5.0), a in alpha(), theta in threshold(), m in mode()) {
        let c = cfg(theta, a, m);
        let times: Vec<f64> = t.times().collect();
        let trace = membrane_trace(&t, &c, &times).unwrap();
        let mut neuron = Neuron::new(c);
        for (s, (tt, u)) in t.iter().zip(trace) {
            neuron.step(*s);
            prop_assert_eq!(tt, s.time);
            prop_assert_eq!(u, neuron.state().potential);
        }
        let (_, last) = lif_run(&t, &c);
        prop_assert_eq!(last.last_event_time, t.spikes().last().map(|s| s.time));
    }
}
