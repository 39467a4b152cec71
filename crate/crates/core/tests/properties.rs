use std::sync::{Arc, OnceLock};

use divcheck::claims::{run_claim_with, ClaimId};
use divcheck::context::{Engine, Tables};
use divcheck::mertens_compare::mertens_gap;
use divcheck::rational::{frac, int, parse_rational, ratio, to_fraction_string};
use divcheck::remainders::{r1_bound, r2_bound, r2_minus_r1};
use divcheck::report::{read_csv, write_csv, RangeSpec, SampleMode};
use divcheck::sieve::SieveConfig;
use divcheck::{PrecisionPolicy, Status};
use proptest::prelude::*;

fn engine() -> &'static Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(|| {
        let t = Tables::new(SieveConfig::with_limit(200_000)).unwrap();
        Engine::new(PrecisionPolicy::default(), Arc::new(t))
    })
}

fn rational_in(lo: i64, hi: i64) -> impl Strategy<Value = divcheck::ExactRational> {
    (lo..hi, 0i64..100, 1i64..=100).prop_map(|(n, a, d)| int(n) + ratio(a % d, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fraction_rendering_parses_back(p in -1_000_000i64..1_000_000, q in 1i64..1_000_000) {
        let x = ratio(p, q);
        prop_assert_eq!(parse_rational(&to_fraction_string(&x)).unwrap(), x);
    }

    #[test]
    fn fractional_part_in_unit_interval(p in -1_000_000i64..1_000_000, q in 1i64..1000) {
        let f = frac(&ratio(p, q));
        prop_assert!(f >= int(0) && f < int(1));
    }

    #[test]
    fn remainder_bounds_at_random_points(x in rational_in(1, 200_000)) {
        for c in [r1_bound, r2_bound, r2_minus_r1] {
            let (_, st) = engine().decide(|ctx| c(ctx, &x)).unwrap();
            prop_assert_eq!(st, Status::Pass, "x = {}", to_fraction_string(&x));
        }
    }

    #[test]
    fn gap_is_negative_below_the_change(x in 2u64..18_350) {
        prop_assert!(mertens_gap(x, engine().tables().mobius()).unwrap() < int(0));
    }

    #[test]
    fn sample_points_stay_in_range(lo in 1i64..1000, span in 0i64..100_000, count in 1u64..40, seed in any::<u64>()) {
        for mode in [
            SampleMode::Geometric { count },
            SampleMode::RandomRational { count, max_denominator: 100, seed },
        ] {
            let r = RangeSpec::new(int(lo), int(lo + span), mode).unwrap();
            let pts = r.points().unwrap();
            prop_assert!(!pts.is_empty());
            prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(pts.iter().all(|p| *p >= r.x_min && *p <= r.x_max));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reports_are_deterministic_and_round_trip(lo in 1i64..5000, span in 1i64..5000, seed in any::<u64>()) {
        let range = RangeSpec::new(
            int(lo),
            int(lo + span),
            SampleMode::RandomRational { count: 20, max_denominator: 100, seed },
        )
        .unwrap();
        let a = run_claim_with(engine(), ClaimId::Lemma5, &range).unwrap();
        let b = run_claim_with(engine(), ClaimId::Lemma5, &range).unwrap();
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        write_csv(&a.records, &mut ca).unwrap();
        write_csv(&b.records, &mut cb).unwrap();
        prop_assert_eq!(&ca, &cb);
        prop_assert_eq!(a.exit_code(), 0);
        prop_assert_eq!(read_csv(ca.as_slice()).unwrap(), a.records);
    }
}
