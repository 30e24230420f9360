//! Randomized algebra suites for the scalar layer: field axioms on 10^4
//! samples, the exact sign test against a 50-digit decimal oracle, and
//! grammar round-trips.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nnrank::field::{FieldDescriptor, QuadraticNumber, Rational, Scalar, Sign};

const SUITE_SEED: u64 = 2121;
const CASES: usize = 10_000;

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = rng.random_range(-999i64..=999);
    let den = rng.random_range(1i64..=99);
    Rational::new(num, den).expect("positive denominator")
}

fn random_quadratic(rng: &mut ChaCha8Rng, d: u64) -> QuadraticNumber {
    QuadraticNumber::new(random_rational(rng), random_rational(rng), d)
        .expect("discriminant is squarefree")
}

const DISCRIMINANTS: [u64; 4] = [2, 3, 5, 7];

#[test]
fn field_axioms_hold_on_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    for case in 0..CASES {
        let d = DISCRIMINANTS[case % DISCRIMINANTS.len()];
        let x = random_quadratic(&mut rng, d);
        let y = random_quadratic(&mut rng, d);
        let z = random_quadratic(&mut rng, d);
        let one = QuadraticNumber::one(d).unwrap();
        let zero = QuadraticNumber::zero(d).unwrap();

        let add = |a: &QuadraticNumber, b: &QuadraticNumber| a.checked_add(b).unwrap();
        let mul = |a: &QuadraticNumber, b: &QuadraticNumber| a.checked_mul(b).unwrap();

        // Associativity and commutativity.
        assert_eq!(add(&add(&x, &y), &z), add(&x, &add(&y, &z)));
        assert_eq!(mul(&mul(&x, &y), &z), mul(&x, &mul(&y, &z)));
        assert_eq!(add(&x, &y), add(&y, &x));
        assert_eq!(mul(&x, &y), mul(&y, &x));

        // Distributivity.
        assert_eq!(mul(&x, &add(&y, &z)), add(&mul(&x, &y), &mul(&x, &z)));

        // Identities and inverses.
        assert_eq!(add(&x, &zero), x);
        assert_eq!(mul(&x, &one), x);
        assert_eq!(add(&x, &x.neg()), zero);
        if !x.is_zero() {
            let inverse = one.checked_div(&x).unwrap();
            assert_eq!(mul(&x, &inverse), one);
        }

        // Subtraction and division invert addition and multiplication.
        assert_eq!(add(&x, &y).checked_sub(&y).unwrap(), x);
        if !y.is_zero() {
            assert_eq!(mul(&x, &y).checked_div(&y).unwrap(), x);
        }
    }
}

/// Floor of `sqrt(d) * 10^50`, exact in big integers.
fn sqrt_scaled(d: u64) -> BigInt {
    let scale = BigUint::from(10u8).pow(100);
    BigInt::from((BigUint::from(d) * scale).sqrt())
}

#[test]
fn sign_agrees_with_50_digit_decimal_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED + 1);
    let pow50 = BigInt::from(BigUint::from(10u8).pow(50));
    let roots: Vec<BigInt> = DISCRIMINANTS.iter().map(|&d| sqrt_scaled(d)).collect();

    let mut checked = 0usize;
    for case in 0..CASES {
        let which = case % DISCRIMINANTS.len();
        let d = DISCRIMINANTS[which];
        let x = random_quadratic(&mut rng, d);

        // Evaluate a + b * (root / 10^50) as an exact rational: the oracle
        // approximation with absolute error below |b| * 10^-50.
        let (an, ad) = (x.rational_part().numer(), x.rational_part().denom());
        let (bn, bd) = (x.radical_part().numer(), x.radical_part().denom());
        // value ~ (an * bd * 10^50 + bn * ad * root) / (ad * bd * 10^50)
        let numerator = an * bd * &pow50 + bn * ad * &roots[which];
        let denominator = ad * bd * &pow50; // positive
        // Error radius in the same scaled units: |bn * ad|.
        let radius = (bn * ad).magnitude().clone();
        if numerator.magnitude() <= &radius {
            continue; // oracle cannot separate this sample from zero
        }
        let oracle = if numerator < BigInt::zero() {
            Sign::Negative
        } else {
            Sign::Positive
        };
        assert_eq!(x.sign(), oracle, "sample {x:?}");
        checked += 1;
        let _ = &denominator;
    }
    assert!(checked > CASES * 9 / 10, "only {checked} decidable samples");
}

#[test]
fn sign_is_multiplicative_and_faithful() {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED + 2);
    for case in 0..CASES {
        let d = DISCRIMINANTS[case % DISCRIMINANTS.len()];
        let x = random_quadratic(&mut rng, d);
        let y = random_quadratic(&mut rng, d);
        let product = x.checked_mul(&y).unwrap();
        assert_eq!(product.sign(), x.sign() * y.sign());
        assert_eq!(x.sign() == Sign::Zero, x.is_zero());
    }
}

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (any::<i32>(), 1i32..10_000)
        .prop_map(|(num, den)| Rational::new(num as i64, den as i64).unwrap())
}

fn scalar_strategy() -> impl Strategy<Value = (Scalar, FieldDescriptor)> {
    prop_oneof![
        rational_strategy().prop_map(|r| (Scalar::Rational(r), FieldDescriptor::Rationals)),
        (rational_strategy(), rational_strategy(), prop::sample::select(vec![2u64, 3, 5, 7]))
            .prop_map(|(a, b, d)| {
                (
                    Scalar::Quadratic(QuadraticNumber::new(a, b, d).unwrap()),
                    FieldDescriptor::Quadratic(d),
                )
            }),
    ]
}

proptest! {
    #[test]
    fn parse_inverts_format((scalar, field) in scalar_strategy()) {
        let text = scalar.to_string();
        let reparsed = Scalar::parse(&text, field).unwrap();
        prop_assert_eq!(reparsed, scalar);
    }

    #[test]
    fn format_is_stable((scalar, field) in scalar_strategy()) {
        let text = scalar.to_string();
        let again = Scalar::parse(&text, field).unwrap().to_string();
        prop_assert_eq!(again, text);
    }
}
