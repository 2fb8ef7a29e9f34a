use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use oddtorsion::tate::{self, exponent_bound, KodairaType};
use oddtorsion::weierstrass::{transform, AdmissibleChange, WeierstrassModel};

fn curve() -> impl Strategy<Value = WeierstrassModel> {
    prop::array::uniform5(-30i64..=30)
        .prop_map(WeierstrassModel::from_i64)
        .prop_filter("nonsingular", |m| !m.is_singular())
}

fn integral_change() -> impl Strategy<Value = AdmissibleChange> {
    (
        prop::sample::select(vec![1i64, 2, 3, 5, 6]),
        -9i64..=9,
        -9i64..=9,
        -9i64..=9,
    )
        .prop_map(|(k, r, s, w)| {
            let shift = AdmissibleChange::from_i64(1, r, s, w).unwrap();
            // u = 1/k keeps the model integral.
            let scale = AdmissibleChange::scaling(BigRational::new(BigInt::one(), BigInt::from(k))).unwrap();
            shift.then(&scale)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1500))]

    #[test]
    fn local_data_is_model_independent(m in curve(), t in integral_change()) {
        let m2 = transform(&m, &t).unwrap();
        prop_assert!(m2.is_integral());
        for d in tate::all_local_data(&m).unwrap() {
            let d2 = tate::tate(&m2, &d.p).unwrap();
            prop_assert_eq!(&d.kodaira, &d2.kodaira);
            prop_assert_eq!(d.f_p, d2.f_p);
            prop_assert_eq!(d.split, d2.split);
            prop_assert_eq!(d.min_disc_valuation, d2.min_disc_valuation);
        }
        prop_assert_eq!(tate::global_conductor(&m).unwrap(), tate::global_conductor(&m2).unwrap());
    }

    #[test]
    fn exponents_and_ogg(m in curve()) {
        for d in tate::all_local_data(&m).unwrap() {
            prop_assert!(d.f_p <= exponent_bound(&d.p));
            match d.kodaira {
                KodairaType::I0 => prop_assert_eq!(d.f_p, 0),
                KodairaType::I(n) => {
                    prop_assert_eq!(d.f_p, 1);
                    prop_assert_eq!(n, d.min_disc_valuation);
                    prop_assert!(d.split.is_some());
                }
                _ => {
                    prop_assert!(d.f_p >= 2);
                    prop_assert!(d.split.is_none());
                }
            }
            // Ogg: v(minimal discriminant) = f + m - 1.
            prop_assert_eq!(d.min_disc_valuation, d.f_p + d.kodaira.components() - 1);
        }
    }

    #[test]
    fn minimal_model_is_minimal(m in curve(), t in integral_change()) {
        let m2 = transform(&m, &t).unwrap();
        for d in tate::all_local_data(&m).unwrap() {
            let (min, _) = tate::minimal_model_at(&m2, &d.p).unwrap();
            let v = oddtorsion::numtheory::vp_rational(&min.discriminant(), &d.p).unwrap();
            prop_assert_eq!(v, d.min_disc_valuation as i64);
            prop_assert!(min.is_integral_at(&d.p));
        }
    }
}
