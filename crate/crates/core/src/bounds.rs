//! Exact lower bounds on nonnegative rank and bracket assembly.
//!
//! Two lower bounds are computed: the conventional rank, and the rectangle
//! covering number (boolean rank) of the support pattern — every rank-one
//! nonnegative summand has rectangular support, so any cover size bounds the
//! factor count from below. A verified certificate supplies the upper bound.
//! The bracket never claims equality unless the two ends meet.

use serde::Serialize;
use thiserror::Error;

use crate::certificates::{verify, Certificate, CertificateError};
use crate::field::Sign;
use crate::matrix::{ExactMatrix, IndexSet, MatrixError};

/// Maximal-rectangle enumeration is exponential in the worst case; the
/// built-in matrices are at most 21x21.
pub const SIZE_GUARD: usize = 24;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error(
        "pattern is {rows}x{cols}; combinatorial bounds are limited to \
         {SIZE_GUARD}x{SIZE_GUARD} — use the numeric probe instead"
    )]
    TooLarge { rows: usize, cols: usize },
    #[error("certificate does not verify against the target: {0}")]
    InvalidCertificate(String),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Boolean mask of the nonzero entries of a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPattern {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl SupportPattern {
    pub fn new(rows: usize, cols: usize, bits: Vec<bool>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 || bits.len() != rows * cols {
            return Err(MatrixError::EmptyShape);
        }
        Ok(SupportPattern { rows, cols, bits })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// 1-based cell test.
    pub fn is_set(&self, i: usize, j: usize) -> bool {
        self.bits[(i - 1) * self.cols + (j - 1)]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn transpose(&self) -> SupportPattern {
        let mut bits = Vec::with_capacity(self.bits.len());
        for j in 1..=self.cols {
            for i in 1..=self.rows {
                bits.push(self.is_set(i, j));
            }
        }
        SupportPattern {
            rows: self.cols,
            cols: self.rows,
            bits,
        }
    }

    fn check_guard(&self) -> Result<(), BoundsError> {
        if self.rows > SIZE_GUARD || self.cols > SIZE_GUARD {
            return Err(BoundsError::TooLarge {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Column mask of row `i` (0-based internal helper).
    fn row_mask(&self, i: usize) -> u32 {
        let mut mask = 0u32;
        for j in 0..self.cols {
            if self.bits[i * self.cols + j] {
                mask |= 1 << j;
            }
        }
        mask
    }
}

/// Exact nonzero mask of a matrix, decided by exact signs.
pub fn support(m: &ExactMatrix) -> SupportPattern {
    let bits = (1..=m.rows())
        .flat_map(|i| (1..=m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| m.entry(i, j).sign() != Sign::Zero)
        .collect();
    SupportPattern::new(m.rows(), m.cols(), bits).expect("matrix shape is nonempty")
}

/// An all-ones combinatorial submatrix `rowset x colset` of a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rectangle {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Rectangle {
    pub fn row_set(&self) -> IndexSet {
        IndexSet::new(self.rows.clone()).expect("rows are strictly increasing")
    }

    pub fn col_set(&self) -> IndexSet {
        IndexSet::new(self.cols.clone()).expect("cols are strictly increasing")
    }
}

fn mask_to_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

/// All maximal all-ones rectangles of the pattern, each exactly once, in
/// lexicographic order by row set then column set.
///
/// A maximal rectangle is a closed pair: its column set is the intersection
/// of its rows' supports, and its row set is every row containing that
/// column set. The column sets of such pairs are exactly the nonempty
/// intersections of row supports, so we enumerate the intersection closure.
pub fn maximal_rectangles(pattern: &SupportPattern) -> Result<Vec<Rectangle>, BoundsError> {
    pattern.check_guard()?;
    let row_masks: Vec<u32> = (0..pattern.rows).map(|i| pattern.row_mask(i)).collect();

    let mut intents: std::collections::HashSet<u32> =
        row_masks.iter().copied().filter(|&m| m != 0).collect();
    let mut worklist: Vec<u32> = intents.iter().copied().collect();
    while let Some(current) = worklist.pop() {
        for &mask in &row_masks {
            let meet = current & mask;
            if meet != 0 && intents.insert(meet) {
                worklist.push(meet);
            }
        }
    }

    let mut rectangles = Vec::new();
    for &cols in &intents {
        let rows: Vec<usize> = (0..pattern.rows)
            .filter(|&i| row_masks[i] & cols == cols)
            .collect();
        let closed: u32 = rows
            .iter()
            .fold(u32::MAX, |acc, &i| acc & row_masks[i]);
        // Non-closed column sets reappear as their closure; skip them here.
        if closed != cols {
            continue;
        }
        rectangles.push(Rectangle {
            rows: rows.into_iter().map(|i| i + 1).collect(),
            cols: mask_to_indices(cols),
        });
    }
    rectangles.sort_by(|a, b| a.rows.cmp(&b.rows).then_with(|| a.cols.cmp(&b.cols)));
    Ok(rectangles)
}

/// A minimum rectangle cover: its size and one witness, deterministic for a
/// given pattern.
#[derive(Debug, Clone, Serialize)]
pub struct CoverResult {
    pub size: usize,
    pub witness: Vec<Rectangle>,
}

/// Minimum number of rectangles covering all set cells, by exact
/// branch-and-bound set cover over the maximal rectangles.
pub fn rectangle_cover(pattern: &SupportPattern) -> Result<CoverResult, BoundsError> {
    let rectangles = maximal_rectangles(pattern)?;

    // Index the set cells and precompute each rectangle's cell set.
    let mut cell_index = vec![usize::MAX; pattern.rows * pattern.cols];
    let mut cell_count = 0usize;
    for i in 1..=pattern.rows {
        for j in 1..=pattern.cols {
            if pattern.is_set(i, j) {
                cell_index[(i - 1) * pattern.cols + (j - 1)] = cell_count;
                cell_count += 1;
            }
        }
    }
    if cell_count == 0 {
        return Ok(CoverResult {
            size: 0,
            witness: vec![],
        });
    }

    let rect_cells: Vec<CellSet> = rectangles
        .iter()
        .map(|r| {
            let mut set = CellSet::empty(cell_count);
            for &i in &r.rows {
                for &j in &r.cols {
                    set.insert(cell_index[(i - 1) * pattern.cols + (j - 1)]);
                }
            }
            set
        })
        .collect();

    // Greedy incumbent: most new cells first, lexicographically smallest
    // rectangle among equal scores.
    let mut greedy: Vec<usize> = Vec::new();
    let mut covered = CellSet::empty(cell_count);
    while covered.len() < cell_count {
        let best = (0..rectangles.len())
            .max_by_key(|&r| (rect_cells[r].gain(&covered), std::cmp::Reverse(r)))
            .expect("maximal rectangles cover every set cell");
        covered.union_with(&rect_cells[best]);
        greedy.push(best);
    }

    let mut best_size = greedy.len();
    let mut best_cover = greedy;

    // Branch and bound: branch on the uncovered cell with the fewest
    // covering rectangles (ties to the smallest cell index); prune with
    // chosen + ceil(uncovered / max gain) >= best.
    let covering: Vec<Vec<usize>> = {
        let mut per_cell = vec![Vec::new(); cell_count];
        for (r, cells) in rect_cells.iter().enumerate() {
            for c in cells.iter() {
                per_cell[c].push(r);
            }
        }
        per_cell
    };

    struct Search<'a> {
        rect_cells: &'a [CellSet],
        covering: &'a [Vec<usize>],
        cell_count: usize,
        best_size: usize,
        best_cover: Vec<usize>,
    }

    impl Search<'_> {
        fn run(&mut self, covered: &CellSet, chosen: &mut Vec<usize>) {
            if covered.len() == self.cell_count {
                if chosen.len() < self.best_size {
                    self.best_size = chosen.len();
                    self.best_cover = chosen.clone();
                }
                return;
            }
            let uncovered = self.cell_count - covered.len();
            let max_gain = self
                .rect_cells
                .iter()
                .map(|cells| cells.gain(covered))
                .max()
                .unwrap_or(0);
            if max_gain == 0 {
                return;
            }
            let lower = chosen.len() + uncovered.div_ceil(max_gain);
            if lower >= self.best_size {
                return;
            }
            let branch_cell = (0..self.cell_count)
                .filter(|&c| !covered.contains(c))
                .min_by_key(|&c| (self.covering[c].len(), c))
                .expect("some cell is uncovered");
            for &r in &self.covering[branch_cell] {
                let mut next = covered.clone();
                next.union_with(&self.rect_cells[r]);
                chosen.push(r);
                self.run(&next, chosen);
                chosen.pop();
            }
        }
    }

    let mut search = Search {
        rect_cells: &rect_cells,
        covering: &covering,
        cell_count,
        best_size,
        best_cover: best_cover.clone(),
    };
    search.run(&CellSet::empty(cell_count), &mut Vec::new());
    best_size = search.best_size;
    best_cover = search.best_cover;

    best_cover.sort_unstable();
    Ok(CoverResult {
        size: best_size,
        witness: best_cover
            .into_iter()
            .map(|r| rectangles[r].clone())
            .collect(),
    })
}

/// Minimum rectangle cover size; see [`rectangle_cover`].
pub fn rectangle_cover_number(pattern: &SupportPattern) -> Result<usize, BoundsError> {
    Ok(rectangle_cover(pattern)?.size)
}

/// Fixed-capacity bitset over cell indices.
#[derive(Clone)]
struct CellSet {
    words: Vec<u64>,
    len: usize,
}

impl CellSet {
    fn empty(capacity: usize) -> Self {
        CellSet {
            words: vec![0; capacity.div_ceil(64)],
            len: 0,
        }
    }

    fn insert(&mut self, index: usize) {
        let (w, b) = (index / 64, index % 64);
        if self.words[w] & (1 << b) == 0 {
            self.words[w] |= 1 << b;
            self.len += 1;
        }
    }

    fn contains(&self, index: usize) -> bool {
        self.words[index / 64] & (1 << (index % 64)) != 0
    }

    fn len(&self) -> usize {
        self.len
    }

    fn union_with(&mut self, other: &CellSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    /// How many of `other`'s complement this set would newly cover.
    fn gain(&self, covered: &CellSet) -> usize {
        self.words
            .iter()
            .zip(&covered.words)
            .map(|(w, c)| (w & !c).count_ones() as usize)
            .sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.words.len() * 64).filter(|&i| self.contains(i))
    }
}

/// Bracket `[max of lower bounds, certificate upper bound]`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Bracket {
    pub lower: usize,
    pub upper: Option<usize>,
}

/// Lower bounds, optional certificate upper bound, and the resulting bracket.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub rank_lb: usize,
    pub rectangle_cover_lb: Option<usize>,
    pub certificate_ub: Option<usize>,
    pub bracket: Bracket,
}

/// Assembles a nonnegative-rank bracket for `target`.
///
/// The rank lower bound is always computed; the rectangle covering bound is
/// computed when the pattern is within the size guard. A certificate, when
/// supplied, must verify exactly — an invalid certificate is an error, never
/// a silently reported upper bound.
pub fn nnr_bracket(
    target: &ExactMatrix,
    cert: Option<&Certificate>,
) -> Result<BoundReport, BoundsError> {
    let rank_lb = target.rank();
    let rectangle_cover_lb = match rectangle_cover_number(&support(target)) {
        Ok(size) => Some(size),
        Err(BoundsError::TooLarge { .. }) => None,
        Err(e) => return Err(e),
    };

    let certificate_ub = match cert {
        None => None,
        Some(cert) => {
            let report = verify(cert, target)?;
            if !report.is_valid() {
                let reason = match &report.first_mismatch {
                    Some(mm) => format!(
                        "sum mismatch at ({}, {}): expected {}, got {}",
                        mm.row, mm.col, mm.expected, mm.got
                    ),
                    None => "a factor entry is negative".to_string(),
                };
                return Err(BoundsError::InvalidCertificate(reason));
            }
            Some(report.factor_count)
        }
    };

    Ok(BoundReport {
        rank_lb,
        rectangle_cover_lb,
        certificate_ub,
        bracket: Bracket {
            lower: rank_lb.max(rectangle_cover_lb.unwrap_or(0)),
            upper: certificate_ub,
        },
    })
}
