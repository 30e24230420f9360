//! The one-shot claims runner: every bracket and certificate the crate
//! stands behind, checked from scratch, one result row per claim.
//!
//! Claims are keyed by content-derived ids. Randomized suites draw from a
//! seeded generator so runs are reproducible; the seed is a CLI flag with a
//! pinned default.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use nnrank::bounds::{nnr_bracket, rectangle_cover_number, support};
use nnrank::certificates::{cert_a, cert_b, cert_m1, trivial_row_certificate, verify, CertificateError};
use nnrank::constructions::{
    alpha, build_a, build_b, build_c, build_v, check_block_decomposition, sqrt2,
    validate_a_structure,
};
use nnrank::field::{QuadraticNumber, Rational, Scalar};
use nnrank::matrix::{ExactMatrix, IndexSet};

/// Default seed for every randomized suite.
pub const DEFAULT_SEED: u64 = 2121;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClaimStatus {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIPPED")]
    Skipped,
}

/// One row of the claims table.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub description: String,
    pub status: ClaimStatus,
    pub details: String,
}

struct ClaimSpec {
    id: &'static str,
    description: &'static str,
    run: fn(u64) -> Result<String, String>,
}

const CLAIMS: &[ClaimSpec] = &[
    ClaimSpec {
        id: "a-literal-structure",
        description: "The bottom-right 16x16 submatrix of the 21x21 matrix A \
                      has the form diag(V,V,V,V), and every colored region of \
                      the literal matches its expected contents",
        run: claim_a_literal_structure,
    },
    ClaimSpec {
        id: "a-block-decomposition",
        description: "Subtracting M1 = C(a,a,a,a,sqrt 2) from the green 5x5 \
                      submatrix of A leaves a nonnegative matrix whose nonzero \
                      entries are exactly covered by the disjoint blocks \
                      A(5,6,7,8,9|4..9) = B(2-a,2-a), A(4,10..13|5,10..13) = \
                      A(3,14..17|4,14..17) = B(2-a), A(1,18..21|1,18..21) = \
                      B(2-sqrt 2), with a = 1+sqrt(1/2)",
        run: claim_a_block_decomposition,
    },
    ClaimSpec {
        id: "rankplus-V-equals-4",
        description: "Rank+ V = 4: rank(V) = 3, the rectangle covering number \
                      of support(V) is 4, and the trivial 4-row certificate \
                      matches from above",
        run: claim_v_equals_4,
    },
    ClaimSpec {
        id: "rankplus-C-geq-3",
        description: "Rank+ C >= 3 for all nonnegative parameters: the minor \
                      C(2,3,4|1,2,3) has determinant -1 independent of every \
                      parameter, sampled over random tuples including zeros",
        run: claim_c_geq_3,
    },
    ClaimSpec {
        id: "rankplus-C1-C2-geq-4",
        description: "Adjoining a nonzero column (0 0 0 0 x)^T or a nonzero \
                      row (0 0 0 y z) to C forces Rank+ >= 4: witness 4x4 \
                      minors evaluate to -x, -y, -z, sampled over random \
                      positive values",
        run: claim_c1_c2_geq_4,
    },
    ClaimSpec {
        id: "B-rank-dichotomy",
        description: "If the alpha parameters of B are not all equal then \
                      rank(B) = 5 (so Rank+ B >= 5); equal parameters in \
                      [0,1] give rank(B) = 4",
        run: claim_b_dichotomy,
    },
    ClaimSpec {
        id: "M1-characterization-point",
        description: "At a1 = a2 = b = c = 1+sqrt(1/2) and d = sqrt 2 the C \
                      family drops to rank 3, every row being a nonnegative \
                      combination of (0,1,0,0,a), (0,0,1,a,0), \
                      (sqrt 2,2,sqrt 2,0,0)",
        run: claim_m1_point,
    },
    ClaimSpec {
        id: "cert-B-first-row-combination",
        description: "For equal alpha in [0,1] the first row of B is a \
                      nonnegative combination of the other four rows with \
                      coefficients (alpha, 1-alpha, alpha, 1-alpha), giving a \
                      4-factor certificate; out-of-range or unequal \
                      parameters are rejected",
        run: claim_cert_b,
    },
    ClaimSpec {
        id: "rankplus-A-leq-19",
        description: "Rank+ A <= 19 over Q(sqrt 2): the built-in 19-factor \
                      certificate verifies exactly against the integer \
                      literal",
        run: claim_a_leq_19,
    },
    ClaimSpec {
        id: "C-characterization-sampling",
        description: "Sampling evidence that rank(C) <= 3 with a1 = a2 \
                      happens only at the sqrt-2 point: random rational \
                      tuples (a,a,b,c,d) all give rank(C) >= 4 (the converse \
                      direction is checked by sampling, not symbolically)",
        run: claim_c_sampling,
    },
    ClaimSpec {
        id: "rankplus-A-rational-geq-20",
        description: "Rank+(A, Q) >= 20: the statement quantifies over every \
                      rational 19-factor decomposition of A, so it is not \
                      reproducible as a finite computation here; its \
                      computational ingredients are the claims above",
        run: claim_a_rational_skipped,
    },
];

/// Runs all claims, or the single claim named by `filter`. Fails with the
/// list of known ids when the filter matches nothing.
pub fn run_claims(seed: u64, filter: Option<&str>) -> Result<Vec<ClaimResult>, String> {
    let selected: Vec<&ClaimSpec> = match filter {
        None => CLAIMS.iter().collect(),
        Some(id) => {
            let matched: Vec<&ClaimSpec> = CLAIMS.iter().filter(|c| c.id == id).collect();
            if matched.is_empty() {
                let known: Vec<&str> = CLAIMS.iter().map(|c| c.id).collect();
                return Err(format!(
                    "unknown claim id `{id}`; known ids: {}",
                    known.join(", ")
                ));
            }
            matched
        }
    };
    Ok(selected
        .into_iter()
        .map(|spec| {
            let (status, details) = match (spec.run)(seed) {
                Ok(details) => (ClaimStatus::Pass, details),
                Err(details) if details.starts_with("SKIPPED: ") => (
                    ClaimStatus::Skipped,
                    details.trim_start_matches("SKIPPED: ").to_string(),
                ),
                Err(details) => (ClaimStatus::Fail, details),
            };
            ClaimResult {
                id: spec.id.to_string(),
                description: spec.description.to_string(),
                status,
                details,
            }
        })
        .collect())
}

fn random_nonneg_rational(rng: &mut ChaCha8Rng) -> Scalar {
    let num = rng.random_range(0i64..=20);
    let den = rng.random_range(1i64..=10);
    Scalar::Rational(Rational::new(num, den).expect("positive denominator"))
}

fn random_positive_rational(rng: &mut ChaCha8Rng) -> Scalar {
    let num = rng.random_range(1i64..=20);
    let den = rng.random_range(1i64..=10);
    Scalar::Rational(Rational::new(num, den).expect("positive denominator"))
}

fn claim_a_literal_structure(_seed: u64) -> Result<String, String> {
    validate_a_structure(&build_a())?;
    Ok("diag(V,V,V,V) and all six colored regions verified".to_string())
}

fn claim_a_block_decomposition(_seed: u64) -> Result<String, String> {
    check_block_decomposition(&build_a())?;
    Ok("exact matrix identity over Q(sqrt 2): residue = sum of the four embedded blocks".to_string())
}

fn claim_v_equals_4(_seed: u64) -> Result<String, String> {
    let v = build_v();
    let rank = v.rank();
    if rank != 3 {
        return Err(format!("rank(V) = {rank}, expected 3"));
    }
    let rc = rectangle_cover_number(&support(&v)).map_err(|e| e.to_string())?;
    if rc != 4 {
        return Err(format!("rectangle cover of support(V) = {rc}, expected 4"));
    }
    let cert = trivial_row_certificate(&v).map_err(|e| e.to_string())?;
    let report = nnr_bracket(&v, Some(&cert)).map_err(|e| e.to_string())?;
    if report.bracket.lower != 4 || report.bracket.upper != Some(4) {
        return Err(format!("bracket {:?}, expected [4, 4]", report.bracket));
    }
    Ok("rank 3, cover 4, certificate 4: bracket [4, 4]".to_string())
}

fn c_witness_minor(c: &ExactMatrix) -> Result<Scalar, String> {
    c.submatrix(
        &IndexSet::new(vec![2, 3, 4]).expect("increasing"),
        &IndexSet::new(vec![1, 2, 3]).expect("increasing"),
    )
    .map_err(|e| e.to_string())?
    .det()
    .map_err(|e| e.to_string())
}

fn claim_c_geq_3(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC0);
    let zero = Scalar::from_int(0);
    let mut tuples: Vec<[Scalar; 5]> = vec![
        [zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone()],
        [zero.clone(), Scalar::from_int(1), zero.clone(), Scalar::from_int(2), zero.clone()],
        [Scalar::from_int(5), zero.clone(), Scalar::from_int(3), zero.clone(), Scalar::from_int(7)],
    ];
    while tuples.len() < 100 {
        tuples.push(std::array::from_fn(|_| random_nonneg_rational(&mut rng)));
    }
    for (i, [a1, a2, b, c, d]) in tuples.iter().enumerate() {
        let m = build_c(a1, a2, b, c, d).map_err(|e| e.to_string())?;
        let det = c_witness_minor(&m)?;
        if det != Scalar::from_int(-1) {
            return Err(format!("tuple {i}: witness minor det = {det}, expected -1"));
        }
        if m.rank() < 3 {
            return Err(format!("tuple {i}: rank(C) = {} < 3", m.rank()));
        }
    }
    Ok(format!("{} tuples (3 with boundary zeros): minor det -1, rank >= 3", tuples.len()))
}

fn claim_c1_c2_geq_4(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC1);
    for i in 0..100 {
        let params: [Scalar; 5] = std::array::from_fn(|_| random_nonneg_rational(&mut rng));
        let [a1, a2, b, c, d] = &params;
        let base = build_c(a1, a2, b, c, d).map_err(|e| e.to_string())?;
        let x = random_positive_rational(&mut rng);
        let y = random_positive_rational(&mut rng);
        let z = random_positive_rational(&mut rng);

        // C1: adjoin the column (0 0 0 0 x)^T.
        let mut rows: Vec<Vec<Scalar>> = (1..=5).map(|r| base.row(r).to_vec()).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            row.push(if r == 4 { x.clone() } else { Scalar::from_int(0) });
        }
        let c1 = ExactMatrix::from_rows(base.field(), rows).map_err(|e| e.to_string())?;
        let minor = c1
            .submatrix(
                &IndexSet::new(vec![2, 3, 4, 5]).expect("increasing"),
                &IndexSet::new(vec![1, 2, 3, 6]).expect("increasing"),
            )
            .map_err(|e| e.to_string())?
            .det()
            .map_err(|e| e.to_string())?;
        if minor != x.neg() {
            return Err(format!("sample {i}: C1 minor = {minor}, expected -x = -{x}"));
        }
        if c1.rank() < 4 {
            return Err(format!("sample {i}: rank(C1) = {} < 4", c1.rank()));
        }

        // C2: adjoin the row (0 0 0 y z).
        let mut rows: Vec<Vec<Scalar>> = (1..=5).map(|r| base.row(r).to_vec()).collect();
        rows.push(vec![
            Scalar::from_int(0),
            Scalar::from_int(0),
            Scalar::from_int(0),
            y.clone(),
            z.clone(),
        ]);
        let c2 = ExactMatrix::from_rows(base.field(), rows).map_err(|e| e.to_string())?;
        for (cols, expected, name) in [
            (vec![1, 2, 3, 5], z.neg(), "-z"),
            (vec![1, 2, 3, 4], y.neg(), "-y"),
        ] {
            let minor = c2
                .submatrix(
                    &IndexSet::new(vec![2, 3, 4, 6]).expect("increasing"),
                    &IndexSet::new(cols).expect("increasing"),
                )
                .map_err(|e| e.to_string())?
                .det()
                .map_err(|e| e.to_string())?;
            if minor != expected {
                return Err(format!("sample {i}: C2 minor = {minor}, expected {name}"));
            }
        }
        if c2.rank() < 4 {
            return Err(format!("sample {i}: rank(C2) = {} < 4", c2.rank()));
        }
    }
    Ok("100 samples: witness minors -x, -y, -z nonzero; rank(C1), rank(C2) >= 4".to_string())
}

fn claim_b_dichotomy(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xB0);
    for i in 0..100 {
        let a1 = random_nonneg_rational(&mut rng);
        let mut a2 = random_nonneg_rational(&mut rng);
        while a2 == a1 {
            a2 = random_nonneg_rational(&mut rng);
        }
        let b = build_b(&[a1, a2]).map_err(|e| e.to_string())?;
        if b.rank() != 5 {
            return Err(format!("unequal pair {i}: rank(B) = {}, expected 5", b.rank()));
        }
    }
    for i in 0..100 {
        let num = rng.random_range(0i64..=12);
        let alpha = Scalar::Rational(Rational::new(num, 12).expect("positive denominator"));
        let b = build_b(&[alpha.clone(), alpha]).map_err(|e| e.to_string())?;
        if b.rank() != 4 {
            return Err(format!("equal pair {i}: rank(B) = {}, expected 4", b.rank()));
        }
    }
    Ok("100 unequal pairs at rank 5, 100 equal parameters in [0,1] at rank 4".to_string())
}

fn claim_m1_point(_seed: u64) -> Result<String, String> {
    let a = Scalar::Quadratic(alpha());
    let target = build_c(&a, &a, &a, &a, &Scalar::Quadratic(sqrt2())).map_err(|e| e.to_string())?;
    let rank = target.rank();
    if rank != 3 {
        return Err(format!("rank(M1) = {rank}, expected 3"));
    }
    let report = verify(&cert_m1(), &target).map_err(|e| e.to_string())?;
    if !report.is_valid() || report.factor_count != 3 {
        return Err(format!("M1 certificate invalid: {report:?}"));
    }
    Ok("rank 3 over Q(sqrt 2); 3 nonnegative factors on the generating rows".to_string())
}

fn claim_cert_b(_seed: u64) -> Result<String, String> {
    let half = Scalar::Rational(Rational::new(1, 2).expect("positive denominator"));
    let two_minus_alpha = {
        let two = QuadraticNumber::from_rational(Rational::from_int(2), 2).expect("valid");
        Scalar::Quadratic(two.checked_sub(&alpha()).expect("same discriminant"))
    };
    let two_minus_sqrt2 = {
        let two = QuadraticNumber::from_rational(Rational::from_int(2), 2).expect("valid");
        Scalar::Quadratic(two.checked_sub(&sqrt2()).expect("same discriminant"))
    };
    let cases: Vec<Vec<Scalar>> = vec![
        vec![Scalar::from_int(0)],
        vec![Scalar::from_int(1), Scalar::from_int(1)],
        vec![half.clone(), half.clone(), half],
        vec![two_minus_alpha.clone(), two_minus_alpha],
        vec![two_minus_sqrt2],
    ];
    for alphas in &cases {
        let cert = cert_b(alphas).map_err(|e| e.to_string())?;
        let target = build_b(alphas).map_err(|e| e.to_string())?;
        let report = verify(&cert, &target).map_err(|e| e.to_string())?;
        if !report.is_valid() || report.factor_count != 4 {
            return Err(format!("B certificate failed for alphas {alphas:?}: {report:?}"));
        }
    }
    if !matches!(
        cert_b(&[Scalar::from_int(2)]),
        Err(CertificateError::AlphaOutOfRange(_))
    ) {
        return Err("alpha = 2 should be rejected".to_string());
    }
    if !matches!(
        cert_b(&[Scalar::from_int(0), Scalar::from_int(1)]),
        Err(CertificateError::UnequalAlphas)
    ) {
        return Err("unequal alphas should be rejected".to_string());
    }
    Ok(format!(
        "{} parameter choices verified with 4 factors; out-of-range and unequal inputs rejected",
        cases.len()
    ))
}

fn claim_a_leq_19(_seed: u64) -> Result<String, String> {
    let report = verify(&cert_a(), &build_a()).map_err(|e| e.to_string())?;
    if !report.is_valid() {
        return Err(format!("A certificate invalid: {report:?}"));
    }
    if report.factor_count != 19 {
        return Err(format!("factor count {}, expected 19", report.factor_count));
    }
    Ok("19 factors, sum exact, all entries nonnegative".to_string())
}

fn claim_c_sampling(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC5);
    for i in 0..200 {
        let a = random_nonneg_rational(&mut rng);
        let b = random_nonneg_rational(&mut rng);
        let c = random_nonneg_rational(&mut rng);
        let d = random_nonneg_rational(&mut rng);
        let m = build_c(&a, &a, &b, &c, &d).map_err(|e| e.to_string())?;
        let rank = m.rank();
        if rank < 4 {
            return Err(format!(
                "tuple {i} (a={a}, b={b}, c={c}, d={d}): rank(C) = {rank} < 4"
            ));
        }
    }
    let a = Scalar::Quadratic(alpha());
    let m1 = build_c(&a, &a, &a, &a, &Scalar::Quadratic(sqrt2())).map_err(|e| e.to_string())?;
    if m1.rank() != 3 {
        return Err(format!("rank at the sqrt-2 point = {}, expected 3", m1.rank()));
    }
    Ok("200 rational tuples at rank >= 4; the sqrt-2 point at rank 3".to_string())
}

fn claim_a_rational_skipped(_seed: u64) -> Result<String, String> {
    Err("SKIPPED: out of scope by design — the statement ranges over all rational \
         factorizations; see the lemma-level claims for its verified ingredients"
        .to_string())
}
