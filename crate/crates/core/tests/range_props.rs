mod common;

use common::*;
use glassfd::error::Fail;
use glassfd::ranges::{Range, RangeConfig, RangeKind};
use proptest::prelude::*;

fn cfg(k: usize) -> RangeConfig {
    configs()[k]
}

fn build(k: usize, mask: u64) -> (Range, SetOracle) {
    let o = SetOracle::from_mask(mask);
    (range_of(&cfg(k), &o), o)
}

fn inter(a: &Range, b: &Range) -> Option<Range> {
    match a.intersect(b) {
        Ok(r) => Some(r),
        Err(Fail::Inconsistent) => None,
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn union_and_intersect_match_oracle(k in 0..3usize, a in 1..u64::MAX, b in 1..u64::MAX) {
        let ((ra, oa), (rb, ob)) = (build(k, a), build(k, b));
        same_set(&ra.union(&rb).unwrap(), &oa.union(&ob)).unwrap();
        same_result(inter(&ra, &rb).as_ref(), &oa.intersect(&ob)).unwrap();
    }

    #[test]
    fn intersect_algebra(k in 0..3usize, a in 1..u64::MAX, b in 1..u64::MAX, c in 1..u64::MAX) {
        let (ra, rb, rc) = (build(k, a).0, build(k, b).0, build(k, c).0);
        prop_assert_eq!(inter(&ra, &rb), inter(&rb, &ra));
        prop_assert_eq!(inter(&ra, &ra), Some(ra.clone()));
        let left = inter(&ra, &rb).and_then(|x| inter(&x, &rc));
        let right = inter(&rb, &rc).and_then(|x| inter(&ra, &x));
        prop_assert_eq!(left, right);
        prop_assert_eq!(inter(&ra, &ra.union(&rb).unwrap()), Some(ra.clone()));
    }

    #[test]
    fn union_algebra(k in 0..3usize, a in 1..u64::MAX, b in 1..u64::MAX, c in 1..u64::MAX) {
        let (ra, rb, rc) = (build(k, a).0, build(k, b).0, build(k, c).0);
        prop_assert_eq!(ra.union(&rb).unwrap(), rb.union(&ra).unwrap());
        prop_assert_eq!(
            ra.union(&rb).unwrap().union(&rc).unwrap(),
            ra.union(&rb.union(&rc).unwrap()).unwrap()
        );
    }

    #[test]
    fn complement_is_an_involution(k in 0..3usize, a in 1..u64::MAX) {
        let c = cfg(k);
        let (r, o) = build(k, a);
        let expected = if c.kind() == RangeKind::Open { o.complement() } else { o.complement_within(0, 63) };
        let comp = c.complement(&r);
        same_result(comp.as_ref(), &expected).unwrap();
        if let Some(comp) = comp {
            prop_assert_eq!(c.complement(&comp), Some(r));
        }
    }

    #[test]
    fn add_then_subtract_is_identity(k in 0..2usize, a in 1..u64::MAX, n in -300i64..300) {
        let (r, o) = build(k, a);
        let shifted = r.pointwise_add(n).unwrap();
        same_set(&shifted, &o.map(|v| v + n)).unwrap();
        prop_assert_eq!(shifted.pointwise_sub(n), Some(r));
    }

    #[test]
    fn mul_matches_oracle(k in 0..3usize, a in 1..u64::MAX, n in -5i64..=5) {
        let c = cfg(k);
        let (r, o) = build(k, a);
        let mut expected = o.map(|v| v * n);
        if let RangeKind::Bits(_) = c.kind() {
            expected = expected.clip(0, 63);
        }
        same_result(r.pointwise_mul(n).as_ref(), &expected).unwrap();
    }

    #[test]
    fn first_at_least_is_the_least_member_above(k in 0..3usize, a in 1..u64::MAX, v in -10i64..80) {
        let (r, o) = build(k, a);
        prop_assert_eq!(r.first_at_least(v), o.values.range(v..).next().copied());
    }

    #[test]
    fn remove_matches_oracle(k in 0..3usize, a in 1..u64::MAX, v in 0i64..64) {
        let (r, o) = build(k, a);
        same_result(r.remove(v).as_ref(), &o.remove(v)).unwrap();
    }

    #[test]
    fn text_form_round_trips(k in 0..3usize, a in 1..u64::MAX) {
        let c = cfg(k);
        let (r, _) = build(k, a);
        prop_assert_eq!(c.parse(&r.to_string()).unwrap(), r);
    }
}
