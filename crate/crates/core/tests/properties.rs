//! Property tests over generated inputs: parser round-trips and the series
//! laws that every downstream computation leans on.

use proptest::prelude::*;

use carlitz_core::*;

fn f3() -> Field {
    make_field(3, 1, 1).unwrap()
}

fn f9() -> Field {
    make_field(3, 1, 2).unwrap()
}

prop_compose! {
    fn arb_poly_f3()(coeffs in prop::collection::vec(0u64..3, 0..8)) -> Poly {
        let f = f3();
        Poly::from_coeffs(&f, coeffs.into_iter().map(|c| f.from_prime(c)).collect())
    }
}

prop_compose! {
    fn arb_series_f9()(
        val in -6i64..6,
        body in prop::collection::vec(0u64..9, 1..20),
        pad in 1i64..30,
    ) -> Laurent {
        let f = f9();
        let prec = val + body.len() as i64 + pad;
        let mut terms: Vec<(i64, FqElem)> = body
            .iter()
            .enumerate()
            .map(|(i, &c)| (val + i as i64, f.from_encoding(c)))
            .collect();
        // force a nonzero lead so valuations stay interesting
        if terms.iter().all(|(_, c)| c.is_zero()) {
            terms.push((val, f.one()));
        }
        Laurent::from_terms(&f, terms, prec)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_display_parse_round_trip(p in arb_poly_f3()) {
        let s = p.to_string();
        prop_assert_eq!(parse_poly(&f3(), &s).unwrap(), p);
    }

    #[test]
    fn ratfunc_display_parse_round_trip(n in arb_poly_f3(), d in arb_poly_f3()) {
        prop_assume!(!d.is_zero());
        let r = RatFunc::new(n, d).unwrap();
        let s = r.to_string();
        prop_assert_eq!(parse_ratfunc(&f3(), &s).unwrap(), r);
    }

    #[test]
    fn laurent_text_and_json_round_trip(s in arb_series_f9()) {
        let f = f9();
        let text = s.to_string();
        prop_assert_eq!(parse_laurent(&f, &text).unwrap(), s.clone());
        let v = laurent_to_json(&s);
        prop_assert_eq!(laurent_from_json(&f, &v).unwrap(), s);
    }

    #[test]
    fn series_inverse_is_right_inverse(s in arb_series_f9()) {
        prop_assume!(!s.is_zero_at_prec());
        let inv = s.invert().unwrap();
        let prod = s.mul(&inv);
        let w = prod.prec();
        prop_assert!(prod.agrees_with(&Laurent::one(&f9()).truncate(w), w).unwrap());
    }

    #[test]
    fn forward_twist_round_trips(s in arb_series_f9(), j in 0i64..3) {
        let fwd = s.twist(-j).unwrap();
        prop_assert_eq!(fwd.twist(j).unwrap(), s);
    }

    #[test]
    fn one_unit_recompose(s in arb_series_f9()) {
        prop_assume!(!s.is_zero_at_prec());
        let (lead, val, unit) = s.one_unit_decompose().unwrap();
        prop_assert!(!lead.is_zero());
        prop_assert!(unit.coeff(0).is_one());
        let back = Laurent::recombine(&lead, val, &unit);
        prop_assert!(back.agrees_with(&s, s.prec()).unwrap());
    }

    #[test]
    fn normalization_idempotent(n in arb_poly_f3(), d in arb_poly_f3()) {
        prop_assume!(!d.is_zero());
        let r = RatFunc::new(n, d).unwrap();
        let again = RatFunc::new(r.num().clone(), r.den().clone()).unwrap();
        prop_assert_eq!(r, again);
    }

    #[test]
    fn poly_mul_commutes_and_degrees_add(a in arb_poly_f3(), b in arb_poly_f3()) {
        let ab = a.mul(&b);
        prop_assert_eq!(ab.clone(), b.mul(&a));
        if let (Some(da), Some(db)) = (a.deg(), b.deg()) {
            prop_assert_eq!(ab.deg(), Some(da + db));
        } else {
            prop_assert!(ab.is_zero());
        }
    }

    #[test]
    fn divrem_reconstructs(a in arb_poly_f3(), b in arb_poly_f3()) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.divrem(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a);
        if let Some(dr) = r.deg() {
            prop_assert!(dr < b.deg().unwrap());
        }
    }
}
