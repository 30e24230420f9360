//! Builders for the built-in matrix families.
//!
//! The star of the crate is the 21x21 integer matrix `A`, which decomposes —
//! after subtracting a 5x5 block `M1` from its top-left corner — into four
//! disjoint blocks from the `B` family. `A` is stored as a transcribed
//! literal and cross-validated against its block structure rather than
//! generated from the blocks: the literal is the ground truth, and the block
//! identity is the statement under test.

use thiserror::Error;

use crate::field::{FieldDescriptor, FieldError, QuadraticNumber, Rational, Scalar, Sign};
use crate::matrix::{ExactMatrix, IndexSet, MatrixError};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("parameter {name} = {value} is negative")]
    NegativeParameter { name: String, value: String },
    #[error("the B family needs at least one alpha parameter")]
    EmptyAlphas,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// `sqrt(2)` as an exact scalar in `Q(sqrt 2)`.
pub fn sqrt2() -> QuadraticNumber {
    QuadraticNumber::new(Rational::zero(), Rational::one(), 2).expect("2 is squarefree")
}

/// `alpha = 1 + sqrt(1/2) = 1 + (1/2) sqrt(2)`, the parameter at which the
/// `C` family drops to nonnegative rank 3.
pub fn alpha() -> QuadraticNumber {
    QuadraticNumber::new(
        Rational::one(),
        Rational::new(1, 2).expect("nonzero denominator"),
        2,
    )
    .expect("2 is squarefree")
}

fn require_nonnegative(name: &str, value: &Scalar) -> Result<(), ConstructionError> {
    if value.sign() == Sign::Negative {
        return Err(ConstructionError::NegativeParameter {
            name: name.to_string(),
            value: value.to_string(),
        });
    }
    Ok(())
}

fn family_field(params: &[&Scalar]) -> Result<FieldDescriptor, ConstructionError> {
    let mut field = FieldDescriptor::Rationals;
    for p in params {
        field = field.join(p.field())?;
    }
    Ok(field)
}

/// The 5 x (n+4) matrix `B(alpha_1, ..., alpha_n)`:
///
/// ```text
/// a1 .. an 1 1 1 1
/// 1  .. 1  1 1 0 0
/// 0  .. 0  0 1 1 0
/// 0  .. 0  0 0 1 1
/// 0  .. 0  1 0 0 1
/// ```
///
/// All parameters must be nonnegative.
pub fn build_b(alphas: &[Scalar]) -> Result<ExactMatrix, ConstructionError> {
    if alphas.is_empty() {
        return Err(ConstructionError::EmptyAlphas);
    }
    for (i, a) in alphas.iter().enumerate() {
        require_nonnegative(&format!("alpha_{}", i + 1), a)?;
    }
    let field = family_field(&alphas.iter().collect::<Vec<_>>())?;
    let n = alphas.len();
    let tail = |pattern: [i64; 4]| pattern.into_iter().map(Scalar::from_int);

    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(5);
    rows.push(alphas.iter().cloned().chain(tail([1, 1, 1, 1])).collect());
    rows.push(
        std::iter::repeat_with(|| Scalar::from_int(1))
            .take(n)
            .chain(tail([1, 1, 0, 0]))
            .collect(),
    );
    for pattern in [[0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]] {
        rows.push(
            std::iter::repeat_with(|| Scalar::from_int(0))
                .take(n)
                .chain(tail(pattern))
                .collect(),
        );
    }
    Ok(ExactMatrix::from_rows(field, rows)?)
}

/// The 5x5 matrix `C(a1, a2, b, c, d)`:
///
/// ```text
/// d 2 2 1  0
/// 1 2 1 0  1
/// 0 0 1 b  0
/// 0 1 0 0  c
/// 0 1 1 a1 a2
/// ```
pub fn build_c(
    a1: &Scalar,
    a2: &Scalar,
    b: &Scalar,
    c: &Scalar,
    d: &Scalar,
) -> Result<ExactMatrix, ConstructionError> {
    for (name, value) in [("a1", a1), ("a2", a2), ("b", b), ("c", c), ("d", d)] {
        require_nonnegative(name, value)?;
    }
    let field = family_field(&[a1, a2, b, c, d])?;
    let i = Scalar::from_int;
    let rows = vec![
        vec![d.clone(), i(2), i(2), i(1), i(0)],
        vec![i(1), i(2), i(1), i(0), i(1)],
        vec![i(0), i(0), i(1), b.clone(), i(0)],
        vec![i(0), i(1), i(0), i(0), c.clone()],
        vec![i(0), i(1), i(1), a1.clone(), a2.clone()],
    ];
    Ok(ExactMatrix::from_rows(field, rows)?)
}

/// `V`, the bottom-right 4x4 submatrix of any `B` instance: the 8-cell cycle
///
/// ```text
/// 1 1 0 0
/// 0 1 1 0
/// 0 0 1 1
/// 1 0 0 1
/// ```
pub fn build_v() -> ExactMatrix {
    let b = build_b(&[Scalar::from_int(1)]).expect("parameter 1 is nonnegative");
    b.submatrix(
        &IndexSet::range(2, 5).expect("valid range"),
        &IndexSet::range(2, 5).expect("valid range"),
    )
    .expect("B(1) is 5x5")
}

/// `M1 = C(alpha, alpha, alpha, alpha, sqrt 2)`.
pub fn m1() -> ExactMatrix {
    let a = Scalar::Quadratic(alpha());
    let d = Scalar::Quadratic(sqrt2());
    build_c(&a, &a, &a, &a, &d).expect("alpha and sqrt 2 are positive")
}

fn two_minus(x: QuadraticNumber) -> Scalar {
    let two = QuadraticNumber::from_rational(Rational::from_int(2), 2).expect("valid field");
    Scalar::Quadratic(two.checked_sub(&x).expect("same discriminant"))
}

/// `M2 = B(2 - alpha, 2 - alpha)`, a 5x6 block.
pub fn m2() -> ExactMatrix {
    build_b(&[two_minus(alpha()), two_minus(alpha())]).expect("2 - alpha > 0")
}

/// `M3 = B(2 - alpha)`, a 5x5 block.
pub fn m3() -> ExactMatrix {
    build_b(&[two_minus(alpha())]).expect("2 - alpha > 0")
}

/// `M4 = B(2 - sqrt 2)`, a 5x5 block.
pub fn m4() -> ExactMatrix {
    build_b(&[two_minus(sqrt2())]).expect("2 - sqrt 2 > 0")
}

/// The transcribed 21x21 integer literal `A`.
const A_LITERAL: [[i64; 21]; 21] = [
    [2, 2, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1],
    [1, 2, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0],
    [0, 1, 0, 0, 2, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 1, 2, 2, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1],
];

/// The green 5x5 corner of `A`, transcribed independently of [`A_LITERAL`]
/// so the structural validator cross-checks two transcriptions.
const GREEN_LITERAL: [[i64; 5]; 5] = [
    [2, 2, 2, 1, 0],
    [1, 2, 1, 0, 1],
    [0, 0, 1, 2, 0],
    [0, 1, 0, 0, 2],
    [0, 1, 1, 2, 2],
];

/// Builds the 21x21 matrix `A` over `Q` from the transcribed literal.
///
/// Debug builds additionally run [`validate_a_structure`] as a transcription
/// tripwire; release builds return the literal directly.
pub fn build_a() -> ExactMatrix {
    let rows: Vec<Vec<i64>> = A_LITERAL.iter().map(|r| r.to_vec()).collect();
    let a = ExactMatrix::from_int_rows(FieldDescriptor::Rationals, &rows)
        .expect("literal is rectangular");
    debug_assert!(
        validate_a_structure(&a).is_ok(),
        "transcribed literal fails its structural self-check"
    );
    a
}

/// Named colored regions of `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Green,
    Cyan,
    Red,
    Blue,
    Yellow,
    Magenta,
}

impl Region {
    pub const ALL: [Region; 6] = [
        Region::Green,
        Region::Cyan,
        Region::Red,
        Region::Blue,
        Region::Yellow,
        Region::Magenta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Region::Green => "green",
            Region::Cyan => "cyan",
            Region::Red => "red",
            Region::Blue => "blue",
            Region::Yellow => "yellow",
            Region::Magenta => "magenta",
        }
    }
}

/// The (row, col) cells of each colored region of `A`.
pub struct RegionMap;

impl RegionMap {
    pub fn cells(region: Region) -> Vec<(usize, usize)> {
        let block = |lo: usize| -> Vec<(usize, usize)> {
            let mut cells = Vec::with_capacity(16);
            for i in lo..lo + 4 {
                for j in lo..lo + 4 {
                    cells.push((i, j));
                }
            }
            cells
        };
        match region {
            Region::Green => {
                let mut cells = Vec::with_capacity(25);
                for i in 1..=5 {
                    for j in 1..=5 {
                        cells.push((i, j));
                    }
                }
                cells
            }
            Region::Cyan => vec![(5, 6), (5, 7), (5, 8), (5, 9), (6, 4), (6, 5)],
            Region::Red => block(6),
            Region::Blue => block(10),
            Region::Yellow => block(14),
            Region::Magenta => block(18),
        }
    }

    pub fn pairwise_disjoint() -> bool {
        let mut seen = std::collections::HashSet::new();
        for region in Region::ALL {
            for cell in Self::cells(region) {
                if !seen.insert(cell) {
                    return false;
                }
            }
        }
        true
    }
}

/// Row and column index sets of the green block of `A`.
pub fn green_block() -> (IndexSet, IndexSet) {
    (
        IndexSet::range(1, 5).expect("valid range"),
        IndexSet::range(1, 5).expect("valid range"),
    )
}

/// The four disjoint blocks that cover `A` after the `M1` subtraction,
/// paired with their expected contents `M2, M3, M3, M4`.
pub fn decomposition_blocks() -> [(IndexSet, IndexSet, ExactMatrix); 4] {
    let set = |v: Vec<usize>| IndexSet::new(v).expect("strictly increasing");
    [
        (set(vec![5, 6, 7, 8, 9]), set(vec![4, 5, 6, 7, 8, 9]), m2()),
        (set(vec![4, 10, 11, 12, 13]), set(vec![5, 10, 11, 12, 13]), m3()),
        (set(vec![3, 14, 15, 16, 17]), set(vec![4, 14, 15, 16, 17]), m3()),
        (set(vec![1, 18, 19, 20, 21]), set(vec![1, 18, 19, 20, 21]), m4()),
    ]
}

/// Structural self-check of a candidate `A` matrix: the bottom-right 16x16
/// submatrix must be `diag(V, V, V, V)` and every colored region must match
/// its expected contents.
pub fn validate_a_structure(a: &ExactMatrix) -> Result<(), String> {
    if a.rows() != 21 || a.cols() != 21 {
        return Err(format!("expected 21x21, got {}x{}", a.rows(), a.cols()));
    }
    if a.field() != FieldDescriptor::Rationals {
        return Err(format!("expected a matrix over Q, got {}", a.field()));
    }

    // diag(V, V, V, V) on rows/cols 6..=21, including zero off-diagonal blocks.
    let v = build_v();
    let tail = IndexSet::range(6, 21).expect("valid range");
    let bottom_right = a.submatrix(&tail, &tail).expect("within bounds");
    let mut diag = ExactMatrix::zero(FieldDescriptor::Rationals, 16, 16).expect("nonempty");
    for k in 0..4 {
        let band = IndexSet::range(4 * k + 1, 4 * k + 4).expect("valid range");
        let block = v.embed(&band, &band, (16, 16)).expect("within bounds");
        diag = diag.checked_add(&block).expect("same shape");
    }
    if bottom_right != diag {
        return Err("bottom-right 16x16 submatrix is not diag(V, V, V, V)".to_string());
    }

    if !RegionMap::pairwise_disjoint() {
        return Err("colored regions are not pairwise disjoint".to_string());
    }

    for region in Region::ALL {
        for (i, j) in RegionMap::cells(region) {
            let expected = match region {
                Region::Green => GREEN_LITERAL[i - 1][j - 1],
                Region::Cyan => 1,
                // V with 1-based offsets: red starts at 6, blue 10, ...
                Region::Red => v_cell(i - 6, j - 6),
                Region::Blue => v_cell(i - 10, j - 10),
                Region::Yellow => v_cell(i - 14, j - 14),
                Region::Magenta => v_cell(i - 18, j - 18),
            };
            if *a.entry(i, j) != Scalar::from_int(expected) {
                return Err(format!(
                    "{} cell ({i}, {j}) is {}, expected {expected}",
                    region.name(),
                    a.entry(i, j)
                ));
            }
        }
    }
    Ok(())
}

fn v_cell(i: usize, j: usize) -> i64 {
    const V: [[i64; 4]; 4] = [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]];
    V[i][j]
}

/// Checks the exact block decomposition of a candidate `A`:
/// subtracting `M1` from the green submatrix leaves a matrix whose nonzero
/// entries are exactly covered by the four disjoint `B`-family blocks.
pub fn check_block_decomposition(a: &ExactMatrix) -> Result<(), String> {
    let field = FieldDescriptor::Quadratic(2);
    let (green_rows, green_cols) = green_block();
    let m1_embedded = m1()
        .embed(&green_rows, &green_cols, (21, 21))
        .map_err(|e| e.to_string())?;
    let residue = a
        .promote(field)
        .and_then(|a| a.checked_sub(&m1_embedded))
        .map_err(|e| e.to_string())?;

    if !residue.is_nonnegative() {
        return Err("A minus the embedded M1 has a negative entry".to_string());
    }

    let blocks = decomposition_blocks();

    // The four position sets must overlap pairwise only where both blocks
    // are zero. (Their row sets are in fact disjoint, so intersections are
    // empty; this check keeps the validator honest about it.)
    for (i, (ri, ci, mi)) in blocks.iter().enumerate() {
        for (rj, cj, mj) in blocks.iter().skip(i + 1) {
            for &r in ri.indices() {
                if !rj.contains(r) {
                    continue;
                }
                for &c in ci.indices() {
                    if !cj.contains(c) {
                        continue;
                    }
                    let pi = (ri.indices().iter().position(|&x| x == r).unwrap(), ci.indices().iter().position(|&x| x == c).unwrap());
                    let pj = (rj.indices().iter().position(|&x| x == r).unwrap(), cj.indices().iter().position(|&x| x == c).unwrap());
                    let zi = mi.entry(pi.0 + 1, pi.1 + 1).is_zero();
                    let zj = mj.entry(pj.0 + 1, pj.1 + 1).is_zero();
                    if !zi || !zj {
                        return Err(format!("blocks overlap at nonzero cell ({r}, {c})"));
                    }
                }
            }
        }
    }

    // Each extracted submatrix equals its expected block...
    let mut covered = ExactMatrix::zero(field, 21, 21).map_err(|e| e.to_string())?;
    for (idx, (rows, cols, expected)) in blocks.iter().enumerate() {
        let extracted = residue.submatrix(rows, cols).map_err(|e| e.to_string())?;
        if extracted != *expected {
            return Err(format!(
                "block {} at ({:?} | {:?}) does not equal its expected B-family matrix",
                idx + 1,
                rows.indices(),
                cols.indices()
            ));
        }
        let embedded = expected
            .embed(rows, cols, (21, 21))
            .map_err(|e| e.to_string())?;
        covered = covered.checked_add(&embedded).map_err(|e| e.to_string())?;
    }

    // ...and the blocks cover every nonzero entry: the sum is the residue.
    if covered != residue {
        return Err("embedded blocks do not sum to A minus the embedded M1".to_string());
    }
    Ok(())
}
