//! Property tests for the core invariants.

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hahnfactor::cli::dsl::parse_series_rank;
use hahnfactor::cli::gen::{axes, random_poly, random_series, random_structured_set};
use hahnfactor::cli::json::{export_string, import_json, Value};
use hahnfactor::exponents::{Exponent, GroupSpec};
use hahnfactor::grpalg::{divides, gcd, p_g, Units};
use hahnfactor::ordinal::Ordinal;
use hahnfactor::rat::{qf, Q};
use hahnfactor::supcomp::leq_cof;

fn exact_sign(a: i64, b: i64, d: i64) -> i32 {
    let (a2, b2d) = (BigInt::from(a) * a, BigInt::from(b) * b * d);
    match (a.signum(), b.signum()) {
        (0, s) | (s, 0) => s as i32,
        (x, y) if x == y => x as i32,
        (x, _) => {
            if a2 > b2d {
                x as i32
            } else if a2 < b2d {
                -x as i32
            } else {
                0
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn quadratic_sign_matches_integer_oracle(a in -10_000i64..10_000, b in -10_000i64..10_000, den in 1i64..50, d in prop::sample::select(vec![2u64, 3, 5, 6, 7])) {
        let e = Exponent::rat(qf(a, den)).add(&Exponent::term(d, qf(b, den)));
        prop_assert_eq!(e.signum(), exact_sign(a, b, d as i64));
    }

    #[test]
    fn pell_convergents_compare_exactly(n in 1u32..12) {
        let (mut x, mut y) = (BigInt::from(1), BigInt::from(0));
        for _ in 0..n {
            let nx = &x * 3 + &y * 4;
            let ny = &x * 2 + &y * 3;
            x = nx;
            y = ny;
        }
        let e = Exponent::rat(Q::new(x, y)).sub(&Exponent::term(2, qf(1, 1)));
        prop_assert_eq!(e.signum(), 1);
    }

    #[test]
    fn natural_operations_commute(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Ordinal::random(&mut rng, 3);
        let b = Ordinal::random(&mut rng, 3);
        prop_assert_eq!(a.nat_sum(&b), b.nat_sum(&a));
        prop_assert_eq!(a.nat_prod(&b), b.nat_prod(&a));
        prop_assert!(a.ord_add(&b) <= a.nat_sum(&b));
    }

    #[test]
    fn series_text_and_json_round_trip(seed in any::<u64>(), rank in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_series(&mut rng, rank, &[1, 2], &axes(rank, &[1, 2]), 2);
        let text = s.to_string();
        let back = parse_series_rank(&text, rank).unwrap();
        prop_assert_eq!(&back, &s);
        let v = Value::Series(s);
        prop_assert_eq!(import_json(&export_string(&v)).unwrap(), v);
    }

    #[test]
    fn cofinal_order_is_total(seed in any::<u64>(), rank in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = GroupSpec::real(rank);
        let a = random_structured_set(&mut rng, rank);
        let b = random_structured_set(&mut rng, rank);
        prop_assert!(leq_cof(&a, &b, &g) || leq_cof(&b, &a, &g));
    }

    #[test]
    fn gcd_divides_both(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&mut rng, 1, &[1], 3);
        let q = random_poly(&mut rng, 1, &[1], 3);
        let d = gcd(&p, &q, Units::Constants).unwrap();
        prop_assert!(divides(&d, &p, Units::Constants).unwrap());
        prop_assert!(divides(&d, &q, Units::Constants).unwrap());
    }

    #[test]
    fn content_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = GroupSpec::rationals(1);
        let p = random_poly(&mut rng, 1, &[1, 2], 3);
        let c = p_g(&p, &g).unwrap();
        prop_assert_eq!(p_g(&c, &g).unwrap(), c);
    }
}
