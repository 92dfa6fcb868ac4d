//! Exact arithmetic and dense linear algebra over the prime field Z_d.
//!
//! Everything downstream — flow validity, the flow-finding rounds, the
//! brute-force oracles — reduces to small linear systems modulo a prime.
//! Elements are stored as canonical representatives in `0..d`. The solver
//! additionally reports how many scalar multiply-accumulate operations it
//! performed, so callers can measure solver cost empirically rather than
//! trusting an asymptotic claim.

use thiserror::Error;

/// Largest modulus accepted by default.
///
/// Simulation cost grows as d^n, so nothing here ever needs a large prime;
/// the limit mostly guards the trial-division primality check against
/// accidentally huge inputs. Use [`PrimeModulus::with_limit`] to raise it.
pub const DEFAULT_MODULUS_LIMIT: u64 = 97;

/// Errors from field construction and linear algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfpError {
    /// The requested modulus is not a prime number.
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    /// The requested modulus is prime but larger than the configured limit.
    #[error("modulus {d} exceeds the supported limit {limit}")]
    ModulusTooLarge { d: u64, limit: u64 },
    /// Two operands live over different moduli.
    #[error("mixed moduli: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    /// Attempted to invert zero.
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    /// Operand shapes are incompatible for the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Deterministic trial-division primality test (sufficient for small moduli).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut k = 3u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    /// Validates `d` as a prime no larger than [`DEFAULT_MODULUS_LIMIT`].
    pub fn new(d: u64) -> Result<Self, GfpError> {
        Self::with_limit(d, DEFAULT_MODULUS_LIMIT)
    }

    /// Validates `d` as a prime no larger than `limit`.
    pub fn with_limit(d: u64, limit: u64) -> Result<Self, GfpError> {
        if !is_prime(d) {
            return Err(GfpError::NonPrimeModulus(d));
        }
        if d > limit {
            return Err(GfpError::ModulusTooLarge { d, limit });
        }
        Ok(PrimeModulus(d))
    }

    /// The modulus value.
    pub fn get(self) -> u64 {
        self.0
    }

    /// Canonical representative of `v` in `0..d`.
    pub fn reduce(self, v: u64) -> u64 {
        v % self.0
    }

    /// `a + b (mod d)`.
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a % self.0 + b % self.0) % self.0
    }

    /// `a - b (mod d)`.
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a % self.0 + self.0 - b % self.0) % self.0
    }

    /// `a * b (mod d)` (128-bit intermediate, no overflow).
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 % self.0 as u128) * (b as u128 % self.0 as u128) % self.0 as u128) as u64
    }

    /// `-a (mod d)`.
    pub fn neg(self, a: u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }

    /// `a^e (mod d)` by square-and-multiply.
    pub fn pow(self, a: u64, mut e: u64) -> u64 {
        let mut base = a % self.0;
        let mut acc = 1u64 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(self, a: u64) -> Result<u64, GfpError> {
        if a % self.0 == 0 {
            return Err(GfpError::ZeroInverse);
        }
        Ok(self.pow(a, self.0 - 2))
    }
}

/// An element of Z_d, carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: PrimeModulus,
}

impl FieldElement {
    /// Builds an element, reducing `value` into `0..d`.
    pub fn new(value: u64, modulus: PrimeModulus) -> Self {
        FieldElement {
            value: modulus.reduce(value),
            modulus,
        }
    }

    /// Canonical representative in `0..d`.
    pub fn value(self) -> u64 {
        self.value
    }

    /// The modulus this element lives over.
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    fn same_field(self, other: FieldElement) -> Result<PrimeModulus, GfpError> {
        if self.modulus != other.modulus {
            return Err(GfpError::ModulusMismatch(
                self.modulus.get(),
                other.modulus.get(),
            ));
        }
        Ok(self.modulus)
    }

    /// Field addition.
    pub fn add(self, other: FieldElement) -> Result<FieldElement, GfpError> {
        let m = self.same_field(other)?;
        Ok(FieldElement::new(m.add(self.value, other.value), m))
    }

    /// Field subtraction.
    pub fn sub(self, other: FieldElement) -> Result<FieldElement, GfpError> {
        let m = self.same_field(other)?;
        Ok(FieldElement::new(m.sub(self.value, other.value), m))
    }

    /// Field multiplication.
    pub fn mul(self, other: FieldElement) -> Result<FieldElement, GfpError> {
        let m = self.same_field(other)?;
        Ok(FieldElement::new(m.mul(self.value, other.value), m))
    }

    /// Additive inverse.
    pub fn neg(self) -> FieldElement {
        FieldElement::new(self.modulus.neg(self.value), self.modulus)
    }

    /// `self^e`.
    pub fn pow(self, e: u64) -> FieldElement {
        FieldElement::new(self.modulus.pow(self.value, e), self.modulus)
    }
}

/// Multiplicative inverse; errors on zero.
pub fn field_inv(a: FieldElement) -> Result<FieldElement, GfpError> {
    Ok(FieldElement::new(
        a.modulus().inv(a.value())?,
        a.modulus(),
    ))
}

/// A dense matrix over Z_d, row-major, entries stored as canonical
/// representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
    modulus: PrimeModulus,
}

impl FieldMatrix {
    /// The all-zero `rows × cols` matrix.
    pub fn zeros(rows: usize, cols: usize, modulus: PrimeModulus) -> Self {
        FieldMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
            modulus,
        }
    }

    /// The `n × n` identity.
    pub fn identity(n: usize, modulus: PrimeModulus) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row slices; rejects ragged input. Entries are
    /// reduced mod d.
    pub fn from_rows(rows: &[Vec<u64>], modulus: PrimeModulus) -> Result<Self, GfpError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(GfpError::DimensionMismatch(format!(
                    "ragged rows: expected {c} columns, found {}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&v| modulus.reduce(v)));
        }
        Ok(FieldMatrix {
            rows: r,
            cols: c,
            data,
            modulus,
        })
    }

    /// Number of rows.
    pub fn row_count(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn col_count(&self) -> usize {
        self.cols
    }

    /// The modulus the entries live over.
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    /// Entry at `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    /// Sets entry `(r, c)` (reduced mod d).
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = self.modulus.reduce(v);
    }

    /// Row `r` as a slice.
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Column `c` as a vector.
    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// True if every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// The transpose.
    pub fn transpose(&self) -> FieldMatrix {
        let mut t = FieldMatrix::zeros(self.cols, self.rows, self.modulus);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    fn same_field(&self, other: &FieldMatrix) -> Result<PrimeModulus, GfpError> {
        if self.modulus != other.modulus {
            return Err(GfpError::ModulusMismatch(
                self.modulus.get(),
                other.modulus.get(),
            ));
        }
        Ok(self.modulus)
    }

    /// Entrywise sum.
    pub fn add(&self, other: &FieldMatrix) -> Result<FieldMatrix, GfpError> {
        let m = self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(GfpError::DimensionMismatch(format!(
                "add {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (o, &v) in out.data.iter_mut().zip(other.data.iter()) {
            *o = m.add(*o, v);
        }
        Ok(out)
    }

    /// Scalar multiple.
    pub fn scale(&self, s: u64) -> FieldMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = self.modulus.mul(*v, s);
        }
        out
    }

    /// Matrix product `self · other`.
    pub fn mat_mul(&self, other: &FieldMatrix) -> Result<FieldMatrix, GfpError> {
        let m = self.same_field(other)?;
        if self.cols != other.rows {
            return Err(GfpError::DimensionMismatch(format!(
                "multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = FieldMatrix::zeros(self.rows, other.cols, m);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = m.add(out.get(r, c), m.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self · v`.
    pub fn mat_vec(&self, v: &[u64]) -> Result<Vec<u64>, GfpError> {
        if self.cols != v.len() {
            return Err(GfpError::DimensionMismatch(format!(
                "multiply {}x{} by vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let m = self.modulus;
        let mut out = vec![0u64; self.rows];
        for r in 0..self.rows {
            let mut acc = 0u64;
            for c in 0..self.cols {
                acc = m.add(acc, m.mul(self.get(r, c), v[c]));
            }
            out[r] = acc;
        }
        Ok(out)
    }

    /// Submatrix selected by (possibly repeated, arbitrary-order) row and
    /// column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(rows.len(), cols.len(), self.modulus);
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                out.set(ri, ci, self.get(r, c));
            }
        }
        out
    }
}

/// Free-function form of [`FieldMatrix::mat_mul`].
pub fn mat_mul(a: &FieldMatrix, b: &FieldMatrix) -> Result<FieldMatrix, GfpError> {
    a.mat_mul(b)
}

/// Free-function form of [`FieldMatrix::mat_vec`].
pub fn mat_vec(a: &FieldMatrix, v: &[u64]) -> Result<Vec<u64>, GfpError> {
    a.mat_vec(v)
}

/// Result of solving `A·x = b` for one or many right-hand sides.
///
/// `solutions[j]` is `Some(x)` when column `j` of the right-hand side is
/// consistent (free variables set to zero, so the solution is the unique one
/// supported on pivot columns) and `None` when it is not. `row_ops` counts
/// scalar multiply-accumulate operations performed during elimination; it is
/// deterministic for a given input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    /// Per-column solutions (`None` = inconsistent system).
    pub solutions: Vec<Option<Vec<u64>>>,
    /// Rank of the coefficient matrix.
    pub rank: usize,
    /// Scalar multiply-accumulate operations performed.
    pub row_ops: u64,
}

/// Reduced row echelon form of `[A | B]` in place.
///
/// Returns the pivot columns (one per pivot row, all < `a_cols`) and the
/// operation count. Only columns `< a_cols` are eligible as pivots; the B
/// block is carried along.
fn rref(data: &mut [u64], rows: usize, total_cols: usize, a_cols: usize, m: PrimeModulus) -> (Vec<usize>, u64) {
    let mut pivots: Vec<usize> = Vec::new();
    let mut ops: u64 = 0;
    let mut pr = 0usize; // next pivot row
    for col in 0..a_cols {
        // Find a row at or below `pr` with a nonzero entry in this column.
        let Some(src) = (pr..rows).find(|&r| data[r * total_cols + col] != 0) else {
            continue;
        };
        if src != pr {
            for c in 0..total_cols {
                data.swap(pr * total_cols + c, src * total_cols + c);
            }
        }
        // Normalize the pivot row so the pivot entry becomes 1.
        let pivot = data[pr * total_cols + col];
        if pivot != 1 {
            let inv = m.inv(pivot).expect("pivot is nonzero");
            for c in col..total_cols {
                data[pr * total_cols + c] = m.mul(data[pr * total_cols + c], inv);
                ops += 1;
            }
        }
        // Eliminate the column everywhere else (full reduction).
        for r in 0..rows {
            if r == pr {
                continue;
            }
            let factor = data[r * total_cols + col];
            if factor == 0 {
                continue;
            }
            for c in col..total_cols {
                let sub = m.mul(factor, data[pr * total_cols + c]);
                data[r * total_cols + c] = m.sub(data[r * total_cols + c], sub);
                ops += 1;
            }
        }
        pivots.push(col);
        pr += 1;
        if pr == rows {
            break;
        }
    }
    (pivots, ops)
}

/// Solves `A·x = b` for every column `b` of `B` with a single elimination.
///
/// Free variables are set to zero, so each reported solution is supported on
/// the pivot columns only.
pub fn solve_all(a: &FieldMatrix, b: &FieldMatrix) -> Result<SolveReport, GfpError> {
    let m = a.same_field(b)?;
    if a.row_count() != b.row_count() {
        return Err(GfpError::DimensionMismatch(format!(
            "solve {}x{} against right-hand sides with {} rows",
            a.row_count(),
            a.col_count(),
            b.row_count()
        )));
    }
    let rows = a.row_count();
    let a_cols = a.col_count();
    let b_cols = b.col_count();
    let total = a_cols + b_cols;
    let mut work = vec![0u64; rows * total];
    for r in 0..rows {
        work[r * total..r * total + a_cols].copy_from_slice(a.row(r));
        for j in 0..b_cols {
            work[r * total + a_cols + j] = b.get(r, j);
        }
    }
    let (pivots, row_ops) = rref(&mut work, rows, total, a_cols, m);
    let rank = pivots.len();
    let mut solutions = Vec::with_capacity(b_cols);
    for j in 0..b_cols {
        // After full reduction, rows at index >= rank have an all-zero A
        // block; a nonzero entry in the B block there certifies inconsistency.
        let consistent = (rank..rows).all(|r| work[r * total + a_cols + j] == 0);
        if !consistent {
            solutions.push(None);
            continue;
        }
        let mut x = vec![0u64; a_cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = work[prow * total + a_cols + j];
        }
        solutions.push(Some(x));
    }
    Ok(SolveReport {
        solutions,
        rank,
        row_ops,
    })
}

/// Solves `A·x = b` for a single right-hand side; see [`solve_all`].
pub fn solve(a: &FieldMatrix, b: &[u64]) -> Result<SolveReport, GfpError> {
    if b.len() != a.row_count() {
        return Err(GfpError::DimensionMismatch(format!(
            "solve {}x{} against vector of length {}",
            a.row_count(),
            a.col_count(),
            b.len()
        )));
    }
    let mut bm = FieldMatrix::zeros(b.len(), 1, a.modulus());
    for (r, &v) in b.iter().enumerate() {
        bm.set(r, 0, v);
    }
    solve_all(a, &bm)
}

/// Rank of a matrix.
pub fn rank(a: &FieldMatrix) -> usize {
    let rows = a.row_count();
    let cols = a.col_count();
    let mut work = a.data.clone();
    let (pivots, _) = rref(&mut work, rows, cols, cols, a.modulus());
    pivots.len()
}
