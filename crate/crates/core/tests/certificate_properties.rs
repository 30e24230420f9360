//! Certificate invariants: projective rescaling of a factor never changes
//! the verification outcome, and constructed certificates stay valid under
//! serialization.

use proptest::prelude::*;

use nnrank::certificates::{cert_b, cert_m1, verify, Certificate};
use nnrank::constructions::{alpha, build_b, build_c, sqrt2};
use nnrank::field::{Rational, Scalar};

fn m1_target() -> nnrank::matrix::ExactMatrix {
    let a = Scalar::Quadratic(alpha());
    build_c(&a, &a, &a, &a, &Scalar::Quadratic(sqrt2())).unwrap()
}

fn rescale_factor(cert: &Certificate, index: usize, t: &Scalar) -> Certificate {
    let mut scaled = cert.clone();
    let inverse = Scalar::from_int(1).checked_div(t).unwrap();
    for entry in scaled.factors[index].u.iter_mut() {
        *entry = entry.checked_mul(t).unwrap();
    }
    for entry in scaled.factors[index].v.iter_mut() {
        *entry = entry.checked_mul(&inverse).unwrap();
    }
    scaled
}

proptest! {
    #[test]
    fn projective_rescaling_preserves_verification(
        index in 0usize..3,
        num in 1i64..60,
        den in 1i64..60,
    ) {
        let t = Scalar::Rational(Rational::new(num, den).unwrap());
        let cert = cert_m1();
        let target = m1_target();
        let base = verify(&cert, &target).unwrap();
        let scaled = rescale_factor(&cert, index, &t);
        let report = verify(&scaled, &target).unwrap();
        prop_assert_eq!(report.sum_matches, base.sum_matches);
        prop_assert_eq!(report.all_nonnegative, base.all_nonnegative);
        prop_assert!(report.is_valid());
    }

    #[test]
    fn b_certificates_verify_across_the_unit_interval(num in 0i64..=12, den in 12i64..=12) {
        // alpha = num/den sweeps [0, 1].
        let alpha = Scalar::Rational(Rational::new(num, den).unwrap());
        let cert = cert_b(&[alpha.clone(), alpha.clone()]).unwrap();
        let target = build_b(&[alpha.clone(), alpha]).unwrap();
        let report = verify(&cert, &target).unwrap();
        prop_assert!(report.is_valid());
        prop_assert_eq!(report.factor_count, 4);
    }
}

#[test]
fn serialized_certificates_still_verify() {
    let cert = cert_m1();
    let round_tripped = Certificate::from_json(&cert.to_json(true)).unwrap();
    let report = verify(&round_tripped, &m1_target()).unwrap();
    assert!(report.is_valid());
}
