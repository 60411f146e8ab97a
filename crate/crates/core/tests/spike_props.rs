mod common;

use common::{events, pairs, train};
use proptest::prelude::*;
use spikequant::SpikeTrain;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn from_events_output_is_canonical(ev in events(60, 2.0)) {
        let t = SpikeTrain::from_events(ev).unwrap();
        prop_assert!(t.spikes().windows(2).all(|w| w[0].time < w[1].time));
        prop_assert!(t.amplitudes().all(|a| a != 0.0));
        let again = SpikeTrain::from_events(pairs(&t)).unwrap();
        prop_assert_eq!(again, t);
    }

    #[test]
    fn from_events_sums_per_time(ev in events(60, 2.0)) {
        let t = SpikeTrain::from_events(ev.clone()).unwrap();
        for s in &t {
            let expected: f64 = ev.iter().filter(|e| e.0 == s.time).map(|e| e.1).sum();
            prop_assert!((s.amplitude - expected).abs() <= 1e-12);
        }
    }

    #[test]
    fn superpose_is_linear(a in train(40, 2.0), b in train(40, 2.0), x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let lhs = SpikeTrain::superpose(&[a.clone(), b.clone()], &[x, y]).unwrap();
        let scaled = [a.scale(x).unwrap(), b.scale(y).unwrap()];
        let rhs = SpikeTrain::superpose(&scaled, &[1.0, 1.0]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn difference_then_add_back(a in train(40, 2.0), b in train(40, 2.0)) {
        let d = a.difference(&b).normalize();
        let back = SpikeTrain::superpose(&[d, b.clone()], &[1.0, 1.0]).unwrap();
        let scale = |t: f64| {
            let at = |tr: &SpikeTrain| tr.iter().find(|s| s.time == t).map_or(0.0, |s| s.amplitude.abs());
            at(&a).max(at(&b))
        };
        // cancellation can leave a rounding residue where `a` had no spike
        let back: Vec<_> = pairs(&back).into_iter().filter(|&(t, v)| v.abs() > 1e-12 * scale(t)).collect();
        prop_assert_eq!(back.len(), a.len());
        for ((t1, v1), s) in back.iter().zip(&a) {
            prop_assert_eq!(*t1, s.time);
            prop_assert!((v1 - s.amplitude).abs() <= 1e-12 * scale(s.time));
        }
    }

    #[test]
    fn difference_support_is_union(a in train(40, 2.0), b in train(40, 2.0)) {
        let d = a.difference(&b);
        let mut union: Vec<f64> = a.times().chain(b.times()).collect();
        union.sort_by(f64::total_cmp);
        union.dedup();
        prop_assert_eq!(d.times().collect::<Vec<_>>(), union);
    }
}
