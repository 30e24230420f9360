//! Floating-point NMF probe: multiplicative updates with seeded restarts.
//!
//! This module gathers empirical upper-bound evidence only. It never feeds
//! results back into the exact modules, and no attempt is made to round
//! numeric factors to exact scalars.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Rational, Scalar};
use crate::matrix::ExactMatrix;

#[derive(Debug, Error)]
pub enum NmfError {
    #[error("input entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },
    #[error("invalid configuration: {0}")]
    BadConfig(String),
}

/// Dense row-major matrix of doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl FloatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "shape mismatch");
        FloatMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        FloatMatrix::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// 0-based access.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&x| x >= 0.0)
    }

    fn matmul(&self, rhs: &FloatMatrix) -> FloatMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = FloatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    fn transpose(&self) -> FloatMatrix {
        let mut out = FloatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }
}

/// Converts a correctly reduced big rational to the nearest double
/// (round half to even). Power-of-two scaling keeps the final step exact.
fn rational_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.is_negative();
    let n = num.abs().to_biguint().expect("absolute value");
    let d = den.to_biguint().expect("denominator is positive");

    // Shift so the integer quotient carries 55 significant bits: 53 for the
    // mantissa plus guard and round bits.
    let shift: i64 = 55 - (n.bits() as i64 - d.bits() as i64);
    let (mut q, rem) = if shift >= 0 {
        (&n << shift as u64).div_rem(&d)
    } else {
        n.div_rem(&(&d << (-shift) as u64))
    };

    let mut exp = -shift;
    let excess = q.bits() as i64 - 53;
    if excess > 0 {
        let dropped = &q & ((BigUint::from(1u8) << excess as u64) - 1u8);
        let halfway = BigUint::from(1u8) << (excess - 1) as u64;
        q >>= excess as u64;
        exp += excess;
        let round_up = match dropped.cmp(&halfway) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => !rem.is_zero() || q.is_odd(),
        };
        if round_up {
            q += 1u8;
        }
    }
    let mantissa = q.to_f64().expect("53-bit integers are exact doubles");
    let value = mantissa * 2f64.powi(exp as i32);
    if negative {
        -value
    } else {
        value
    }
}

fn scalar_to_f64(s: &Scalar) -> f64 {
    match s {
        Scalar::Rational(r) => rational_to_f64(r.numer(), r.denom()),
        Scalar::Quadratic(q) => {
            if q.is_rational() {
                let a = q.rational_part();
                return rational_to_f64(a.numer(), a.denom());
            }
            // Evaluate a + b*sqrt(d) as one exact rational enclosure, then
            // round once. sqrt(d) is bracketed by s/2^k <= sqrt(d) < (s+1)/2^k
            // with s = floor(sqrt(d * 4^k)); the enclosure is tightened until
            // its width is negligible against the value, so the final
            // conversion is within one ulp of the exact rounding.
            let d = BigUint::from(q.discriminant());
            let mut k: u64 = 70;
            loop {
                let s = (&d << (2 * k)).sqrt();
                let scale = Rational::new(
                    BigInt::from(1),
                    BigInt::from(BigUint::from(1u8) << k),
                )
                .expect("positive power of two");
                let lo_root = &Rational::new(BigInt::from(s.clone()), BigInt::from(1))
                    .expect("nonzero denominator")
                    * &scale;
                let hi_root = &Rational::new(BigInt::from(s + 1u8), BigInt::from(1))
                    .expect("nonzero denominator")
                    * &scale;
                let b = q.radical_part();
                let (lo_term, hi_term) = if b.sign() == crate::field::Sign::Negative {
                    (b * &hi_root, b * &lo_root)
                } else {
                    (b * &lo_root, b * &hi_root)
                };
                let lo = q.rational_part() + &lo_term;
                let hi = q.rational_part() + &hi_term;
                let width = &hi - &lo;
                let bound = {
                    let magnitude = if lo.sign() == crate::field::Sign::Negative {
                        hi.abs().max(lo.abs())
                    } else {
                        lo.abs()
                    };
                    &magnitude * &Rational::new(BigInt::from(1), BigInt::from(1u128 << 62))
                        .expect("nonzero denominator")
                };
                let same_side = lo.sign() == hi.sign();
                if same_side && (&width - &bound).sign() != crate::field::Sign::Positive {
                    let mid = lo;
                    return rational_to_f64(mid.numer(), mid.denom());
                }
                k *= 2;
            }
        }
    }
}

/// Evaluates every entry in double precision, within one ulp of the exact
/// value's double rounding.
pub fn to_float(m: &ExactMatrix) -> FloatMatrix {
    let data = (1..=m.rows())
        .flat_map(|i| (1..=m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| scalar_to_f64(m.entry(i, j)))
        .collect();
    FloatMatrix::new(m.rows(), m.cols(), data)
}

/// Configuration for the multiplicative-update probe.
#[derive(Debug, Clone)]
pub struct NmfConfig {
    /// Target inner dimension.
    pub k: usize,
    /// Iteration budget per restart.
    pub max_iters: usize,
    /// Number of seeded restarts.
    pub restarts: usize,
    /// Root seed; restart `r` draws from stream `r` of a ChaCha8 generator
    /// seeded with this value.
    pub seed: u64,
    /// Denominator guard added before every division.
    pub epsilon: f64,
    /// Stop a restart (and the sweep) once the relative residual reaches
    /// this value; `None` runs the full budget.
    pub target_residual: Option<f64>,
}

impl NmfConfig {
    pub fn new(k: usize, max_iters: usize, restarts: usize, seed: u64) -> Self {
        NmfConfig {
            k,
            max_iters,
            restarts,
            seed,
            epsilon: 1e-12,
            target_residual: None,
        }
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target_residual = Some(target);
        self
    }

    fn validate(&self) -> Result<(), NmfError> {
        if self.k == 0 {
            return Err(NmfError::BadConfig("k must be at least 1".to_string()));
        }
        if self.restarts == 0 {
            return Err(NmfError::BadConfig("restarts must be at least 1".to_string()));
        }
        if !(self.epsilon > 0.0) {
            return Err(NmfError::BadConfig("epsilon must be positive".to_string()));
        }
        Ok(())
    }
}

/// Residual trace of one restart; `history` samples every 100 iterations
/// plus the final value as `(iteration, relative residual)`.
#[derive(Debug, Clone)]
pub struct RestartRecord {
    pub index: usize,
    pub residual: f64,
    pub iterations: usize,
    pub history: Vec<(usize, f64)>,
}

/// Best factor pair over all executed restarts.
#[derive(Debug, Clone)]
pub struct NmfResult {
    pub w: FloatMatrix,
    pub h: FloatMatrix,
    pub residual: f64,
    pub iterations: usize,
    pub best_restart: usize,
    pub restarts: Vec<RestartRecord>,
}

fn relative_residual(m: &FloatMatrix, w: &FloatMatrix, h: &FloatMatrix, norm: f64) -> f64 {
    let wh = w.matmul(h);
    let mut sum = 0.0;
    for (a, b) in m.data.iter().zip(&wh.data) {
        let d = a - b;
        sum += d * d;
    }
    sum.sqrt() / norm
}

/// Multiplicative-update NMF with seeded restarts.
///
/// Updates are the classic pair
/// `H <- H .* (W'M) ./ (W'WH + eps)` and `W <- W .* (MH') ./ (WHH' + eps)`
/// from uniform(0,1] initializations. Within a restart the relative residual
/// is non-increasing up to epsilon effects. Restarts run sequentially; the
/// best residual wins, ties going to the earlier restart, and the sweep
/// stops early once `target_residual` is reached. Results are
/// bit-reproducible for a fixed seed.
pub fn run_nmf(m: &FloatMatrix, cfg: &NmfConfig) -> Result<NmfResult, NmfError> {
    cfg.validate()?;
    for i in 0..m.rows {
        for j in 0..m.cols {
            if m.get(i, j) < 0.0 {
                return Err(NmfError::NegativeEntry { row: i + 1, col: j + 1 });
            }
        }
    }

    let norm = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut best: Option<(usize, f64, FloatMatrix, FloatMatrix, usize)> = None;
    let mut records = Vec::with_capacity(cfg.restarts);

    for restart in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(restart as u64);
        let mut draw = || 1.0 - rng.random::<f64>(); // uniform (0, 1]
        let mut w = FloatMatrix::new(
            m.rows,
            cfg.k,
            (0..m.rows * cfg.k).map(|_| draw()).collect(),
        );
        let mut h = FloatMatrix::new(
            cfg.k,
            m.cols,
            (0..cfg.k * m.cols).map(|_| draw()).collect(),
        );

        let mut residual = relative_residual(m, &w, &h, norm);
        let mut history = vec![(0usize, residual)];
        let mut iterations = 0usize;

        for iter in 1..=cfg.max_iters {
            // H update.
            let wt = w.transpose();
            let wtm = wt.matmul(m);
            let wtwh = wt.matmul(&w).matmul(&h);
            for idx in 0..h.data.len() {
                h.data[idx] *= wtm.data[idx] / (wtwh.data[idx] + cfg.epsilon);
            }
            // W update.
            let ht = h.transpose();
            let mht = m.matmul(&ht);
            let whht = w.matmul(&h.matmul(&ht));
            for idx in 0..w.data.len() {
                w.data[idx] *= mht.data[idx] / (whht.data[idx] + cfg.epsilon);
            }

            residual = relative_residual(m, &w, &h, norm);
            iterations = iter;
            if iter % 100 == 0 {
                history.push((iter, residual));
            }
            if let Some(target) = cfg.target_residual {
                if residual <= target {
                    break;
                }
            }
        }
        if history.last().map(|&(it, _)| it) != Some(iterations) {
            history.push((iterations, residual));
        }

        records.push(RestartRecord {
            index: restart,
            residual,
            iterations,
            history,
        });

        let improved = match &best {
            None => true,
            Some((_, best_residual, _, _, _)) => residual < *best_residual,
        };
        if improved {
            best = Some((restart, residual, w, h, iterations));
        }
        if let Some(target) = cfg.target_residual {
            if best.as_ref().map(|(_, r, _, _, _)| *r <= target).unwrap_or(false) {
                break;
            }
        }
    }

    let (best_restart, residual, w, h, iterations) =
        best.expect("at least one restart executed");
    Ok(NmfResult {
        w,
        h,
        residual,
        iterations,
        best_restart,
        restarts: records,
    })
}
