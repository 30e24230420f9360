//! Dense exact matrices over a field descriptor.
//!
//! Matrices are immutable values: every operation returns a new matrix. All
//! entries are normalized to the matrix's field descriptor at construction,
//! so internal arithmetic never mixes fields. Public indices are 1-based.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldDescriptor, FieldError, Scalar};

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column")]
    EmptyShape,
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow { row: usize, got: usize, expected: usize },
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("index set must be strictly increasing and nonempty")]
    BadIndexSet,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("csv export requires rational entries, found `{0}`")]
    NonRationalCsv(String),
    #[error("not a permutation of 1..={0}")]
    BadPermutation(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("json: {0}")]
    Json(String),
}

/// A strictly increasing, nonempty list of 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self, MatrixError> {
        if indices.is_empty() || indices[0] == 0 {
            return Err(MatrixError::BadIndexSet);
        }
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(MatrixError::BadIndexSet);
        }
        Ok(IndexSet(indices))
    }

    /// The contiguous range `lo..=hi`.
    pub fn range(lo: usize, hi: usize) -> Result<Self, MatrixError> {
        if lo == 0 || hi < lo {
            return Err(MatrixError::BadIndexSet);
        }
        Ok(IndexSet((lo..=hi).collect()))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty sets
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn max(&self) -> usize {
        *self.0.last().expect("nonempty by construction")
    }

    fn check_bound(&self, bound: usize) -> Result<(), MatrixError> {
        if self.max() > bound {
            return Err(MatrixError::IndexOutOfRange {
                index: self.max(),
                bound,
            });
        }
        Ok(())
    }
}

/// Dense row-major matrix with exact entries sharing one field descriptor.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: FieldDescriptor,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn from_rows(
        field: FieldDescriptor,
        rows: Vec<Vec<Scalar>>,
    ) -> Result<Self, MatrixError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(MatrixError::EmptyShape);
        }
        let cols = rows[0].len();
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::RaggedRow {
                    row: i + 1,
                    got: row.len(),
                    expected: cols,
                });
            }
            for s in row {
                entries.push(s.promote(field).map_err(|_| {
                    MatrixError::Field(FieldError::FieldMismatch(s.to_string(), field))
                })?);
            }
        }
        Ok(ExactMatrix {
            rows: rows.len(),
            cols,
            field,
            entries,
        })
    }

    /// Convenience constructor for integer literals.
    pub fn from_int_rows(field: FieldDescriptor, rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        ExactMatrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&n| Scalar::from_int(n)).collect())
                .collect(),
        )
    }

    pub fn zero(field: FieldDescriptor, rows: usize, cols: usize) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyShape);
        }
        Ok(ExactMatrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        })
    }

    pub fn identity(field: FieldDescriptor, n: usize) -> Result<Self, MatrixError> {
        let mut m = ExactMatrix::zero(field, n, n)?;
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// Entry at 1-based position `(i, j)`. Panics when out of range.
    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        assert!(
            (1..=self.rows).contains(&i) && (1..=self.cols).contains(&j),
            "entry ({i}, {j}) out of range for {}x{} matrix",
            self.rows,
            self.cols
        );
        &self.entries[(i - 1) * self.cols + (j - 1)]
    }

    /// Row `i` (1-based) as a slice.
    pub fn row(&self, i: usize) -> &[Scalar] {
        assert!((1..=self.rows).contains(&i), "row {i} out of range");
        &self.entries[(i - 1) * self.cols..i * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        assert!((1..=self.cols).contains(&j), "col {j} out of range");
        (1..=self.rows).map(|i| self.entry(i, j).clone()).collect()
    }

    /// Rewrites every entry in the given field.
    pub fn promote(&self, field: FieldDescriptor) -> Result<ExactMatrix, MatrixError> {
        let entries = self
            .entries
            .iter()
            .map(|s| s.promote(field))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            field,
            entries,
        })
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 1..=self.cols {
            for i in 1..=self.rows {
                entries.push(self.entry(i, j).clone());
            }
        }
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            entries,
        }
    }

    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> Result<ExactMatrix, MatrixError> {
        rows.check_bound(self.rows)?;
        cols.check_bound(self.cols)?;
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows.indices() {
            for &j in cols.indices() {
                entries.push(self.entry(i, j).clone());
            }
        }
        Ok(ExactMatrix {
            rows: rows.len(),
            cols: cols.len(),
            field: self.field,
            entries,
        })
    }

    /// Places this matrix at positions `rows x cols` inside a zero matrix of
    /// shape `(shape_rows, shape_cols)`.
    pub fn embed(
        &self,
        rows: &IndexSet,
        cols: &IndexSet,
        shape: (usize, usize),
    ) -> Result<ExactMatrix, MatrixError> {
        if rows.len() != self.rows || cols.len() != self.cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "embedding a {}x{} matrix needs {}x{} index sets, got {}x{}",
                self.rows,
                self.cols,
                self.rows,
                self.cols,
                rows.len(),
                cols.len()
            )));
        }
        rows.check_bound(shape.0)?;
        cols.check_bound(shape.1)?;
        let mut out = ExactMatrix::zero(self.field, shape.0, shape.1)?;
        for (bi, &i) in rows.indices().iter().enumerate() {
            for (bj, &j) in cols.indices().iter().enumerate() {
                out.entries[(i - 1) * shape.1 + (j - 1)] =
                    self.entries[bi * self.cols + bj].clone();
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        rhs: &ExactMatrix,
        op: impl Fn(&Scalar, &Scalar) -> Result<Scalar, FieldError>,
    ) -> Result<ExactMatrix, MatrixError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let field = self.field.join(rhs.field)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| op(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            field,
            entries,
        })
    }

    /// Entrywise sum; fields join, so `Q` matrices combine with `Q(sqrt d)`.
    pub fn checked_add(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a.checked_add(b))
    }

    pub fn checked_sub(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a.checked_sub(b))
    }

    pub fn scale(&self, s: &Scalar) -> Result<ExactMatrix, MatrixError> {
        let field = self.field.join(s.field())?;
        let entries = self
            .entries
            .iter()
            .map(|e| e.checked_mul(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            field,
            entries,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|s| s.is_zero())
    }

    /// True when every entry has exact sign `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|s| s.sign().is_nonnegative())
    }

    /// Reorders rows and columns by 1-based permutations of the index ranges.
    pub fn permuted(&self, row_order: &[usize], col_order: &[usize]) -> Result<ExactMatrix, MatrixError> {
        let check = |order: &[usize], n: usize| -> Result<(), MatrixError> {
            let mut seen = vec![false; n];
            if order.len() != n {
                return Err(MatrixError::BadPermutation(n));
            }
            for &i in order {
                if i == 0 || i > n || seen[i - 1] {
                    return Err(MatrixError::BadPermutation(n));
                }
                seen[i - 1] = true;
            }
            Ok(())
        };
        check(row_order, self.rows)?;
        check(col_order, self.cols)?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for &i in row_order {
            for &j in col_order {
                entries.push(self.entry(i, j).clone());
            }
        }
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries,
        })
    }

    /// Exact rank by fraction-free Bareiss elimination with exact sign tests
    /// on pivots. Pivoting takes the first nonzero entry in each column.
    pub fn rank(&self) -> usize {
        let (pivots, _, _) = bareiss(self.clone());
        pivots
    }

    /// Exact determinant. Agrees with cofactor expansion.
    pub fn det(&self) -> Result<Scalar, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let (pivots, last_pivot, swaps) = bareiss(self.clone());
        if pivots < n {
            return Ok(self.field.zero());
        }
        // The final Bareiss pivot is the determinant up to row-swap parity.
        let det = last_pivot.expect("full-rank elimination leaves a pivot");
        Ok(if swaps % 2 == 1 { det.neg() } else { det })
    }

    /// Rank-one matrix `u v` with entries `u[i] * v[j]`.
    pub fn outer(u: &[Scalar], v: &[Scalar]) -> Result<ExactMatrix, MatrixError> {
        if u.is_empty() || v.is_empty() {
            return Err(MatrixError::EmptyShape);
        }
        let mut field = FieldDescriptor::Rationals;
        for s in u.iter().chain(v.iter()) {
            field = field.join(s.field())?;
        }
        let mut entries = Vec::with_capacity(u.len() * v.len());
        for a in u {
            for b in v {
                entries.push(a.checked_mul(b)?.promote(field)?);
            }
        }
        Ok(ExactMatrix {
            rows: u.len(),
            cols: v.len(),
            field,
            entries,
        })
    }
}

impl std::fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ExactMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 1..=self.rows {
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Bareiss fraction-free elimination on a working copy.
///
/// Returns (number of pivots, last pivot value, number of row swaps). Every
/// division in the update `(p*a - b*c)/prev` is exact, which keeps integer
/// matrices integer and reduced rationals small.
fn bareiss(mut m: ExactMatrix) -> (usize, Option<Scalar>, usize) {
    let one = m.field.one();
    let mut prev = one;
    let mut last_pivot = None;
    let mut swaps = 0usize;
    let mut pivot_row = 0usize; // 0-based row where the next pivot goes
    let (rows, cols) = (m.rows, m.cols);

    let at = |m: &ExactMatrix, i: usize, j: usize| m.entries[i * cols + j].clone();

    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(p) = (pivot_row..rows).find(|&i| !m.entries[i * cols + col].is_zero()) else {
            continue;
        };
        if p != pivot_row {
            for j in 0..cols {
                m.entries.swap(p * cols + j, pivot_row * cols + j);
            }
            swaps += 1;
        }
        let pivot = at(&m, pivot_row, col);
        for i in (pivot_row + 1)..rows {
            let factor = at(&m, i, col);
            for j in (col + 1)..cols {
                let num = pivot
                    .checked_mul(&at(&m, i, j))
                    .and_then(|t| {
                        factor
                            .checked_mul(&at(&m, pivot_row, j))
                            .and_then(|u| t.checked_sub(&u))
                    })
                    .expect("entries share the matrix field");
                m.entries[i * cols + j] = num
                    .checked_div(&prev)
                    .expect("previous pivot is nonzero");
            }
            m.entries[i * cols + col] = m.field.zero();
        }
        prev = pivot.clone();
        last_pivot = Some(pivot);
        pivot_row += 1;
    }
    (pivot_row, last_pivot, swaps)
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    field: String,
    entries: Vec<Vec<String>>,
}

impl ExactMatrix {
    /// Serializes to the matrix JSON document with canonical scalar strings.
    pub fn to_json(&self, pretty: bool) -> String {
        let doc = MatrixDoc {
            rows: self.rows,
            cols: self.cols,
            field: self.field.to_string(),
            entries: (1..=self.rows)
                .map(|i| self.row(i).iter().map(|s| s.to_string()).collect())
                .collect(),
        };
        if pretty {
            serde_json::to_string_pretty(&doc).expect("matrix doc serializes")
        } else {
            serde_json::to_string(&doc).expect("matrix doc serializes")
        }
    }

    pub fn from_json(text: &str) -> Result<ExactMatrix, MatrixError> {
        let doc: MatrixDoc =
            serde_json::from_str(text).map_err(|e| MatrixError::Json(e.to_string()))?;
        let field: FieldDescriptor = doc.field.parse()?;
        if doc.entries.len() != doc.rows {
            return Err(MatrixError::Json(format!(
                "declared {} rows but found {}",
                doc.rows,
                doc.entries.len()
            )));
        }
        let mut rows = Vec::with_capacity(doc.rows);
        for (i, row) in doc.entries.iter().enumerate() {
            if row.len() != doc.cols {
                return Err(MatrixError::Json(format!(
                    "row {} has {} entries, declared cols = {}",
                    i + 1,
                    row.len(),
                    doc.cols
                )));
            }
            let mut parsed = Vec::with_capacity(doc.cols);
            for text in row {
                parsed.push(Scalar::parse(text, field)?);
            }
            rows.push(parsed);
        }
        ExactMatrix::from_rows(field, rows)
    }

    /// CSV export: one line per row, comma-separated `p/q` entries.
    /// Rational matrices only.
    pub fn to_csv(&self) -> Result<String, MatrixError> {
        let mut out = String::new();
        for i in 1..=self.rows {
            let line: Vec<String> = self
                .row(i)
                .iter()
                .map(|s| {
                    s.to_rational()
                        .map(|r| r.to_string())
                        .map_err(|_| MatrixError::NonRationalCsv(s.to_string()))
                })
                .collect::<Result<_, _>>()?;
            out.push_str(&line.join(","));
            out.push('\n');
        }
        Ok(out)
    }
}
