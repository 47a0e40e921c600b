//! Exact linear algebra over the rationals.
//!
//! Everything downstream (span linearizations, coend quotients, naturality
//! solvers) reduces to the handful of primitives in this module: solving,
//! kernels, quotients with chosen sections, Kronecker products and direct
//! sums. All arithmetic is exact `BigRational`; there is no floating point
//! anywhere in the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Shorthand for an exact rational from an integer.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for an exact rational `p/q`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// A dense matrix of exact rationals, stored row-major.
///
/// Degenerate `0×n` and `n×0` matrices are legal and show up routinely
/// (zero functors, empty G-sets, trivial kernels).
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl std::fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RatMatrix({}x{})[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> BigRational,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RatMatrix { rows, cols, data }
    }

    /// Builds a matrix from integer rows; panics on ragged input.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| rat(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    if r == c {
                        self.at(r, c).is_one()
                    } else {
                        self.at(r, c).is_zero()
                    }
                })
            })
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigRational>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j).clone();
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) + other.at(r, c))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) - other.at(r, c))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) * s)
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = BigRational::zero();
                for c in 0..self.cols {
                    let a = self.at(r, c);
                    if !a.is_zero() && !v[c].is_zero() {
                        acc += a * &v[c];
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                other.at(r, c - self.cols).clone()
            }
        })
    }

    /// Kronecker product, row-major block convention: `self`'s indices outer,
    /// `other`'s inner, so `(A⊗B)(x⊗y) = (Ax)⊗(By)` under the flattening
    /// `(i,j) ↦ i·cols(B)+j`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |r, c| {
            let (ra, rb) = (r / other.rows, r % other.rows);
            let (ca, cb) = (c / other.cols, c % other.cols);
            self.at(ra, ca) * other.at(rb, cb)
        })
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.at(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m.set(self.rows + r, self.cols + c, other.at(r, c).clone());
            }
        }
        m
    }

    /// Writes `block` into `self` starting at `(r0, c0)`, adding entries.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &RatMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                let cur = self.at(r0 + r, c0 + c).clone();
                self.set(r0 + r, c0 + c, cur + block.at(r, c));
            }
        }
    }

    /// Row-reduces in place to reduced row echelon form with the
    /// deterministic leftmost-nonzero pivot rule; returns pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pr = 0;
        for pc in 0..self.cols {
            if pr == self.rows {
                break;
            }
            let Some(sel) = (pr..self.rows).find(|&r| !self.at(r, pc).is_zero()) else {
                continue;
            };
            if sel != pr {
                for c in 0..self.cols {
                    self.data.swap(sel * self.cols + c, pr * self.cols + c);
                }
            }
            let inv = self.at(pr, pc).clone().recip();
            for c in pc..self.cols {
                let v = self.at(pr, c) * &inv;
                self.set(pr, c, v);
            }
            for r in 0..self.rows {
                if r == pr || self.at(r, pc).is_zero() {
                    continue;
                }
                let factor = self.at(r, pc).clone();
                for c in pc..self.cols {
                    let v = self.at(r, c) - &factor * self.at(pr, c);
                    self.set(r, c, v);
                }
            }
            pivots.push(pc);
            pr += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

/// Solves `A·X = B` exactly. Returns the solution with all free variables
/// set to zero (leftmost-pivot rule), or `None` when the system is
/// inconsistent.
pub fn solve(a: &RatMatrix, b: &RatMatrix) -> Option<RatMatrix> {
    assert_eq!(
        a.rows(),
        b.rows(),
        "dimension mismatch: A and B must have equal row counts"
    );
    let (red, pivots) = a.hcat(b).rref();
    // A pivot in the B part witnesses inconsistency.
    if pivots.iter().any(|&p| p >= a.cols()) {
        return None;
    }
    let mut x = RatMatrix::zeros(a.cols(), b.cols());
    for (r, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(pc, j, red.at(r, a.cols() + j).clone());
        }
    }
    Some(x)
}

/// Returns a matrix whose columns form a basis of the null space of `A`.
///
/// The basis is the standard free-variable one under the leftmost-pivot
/// rule, so it is reproducible across runs.
pub fn kernel_basis(a: &RatMatrix) -> RatMatrix {
    let (red, pivots) = a.rref();
    let free: Vec<usize> = (0..a.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut out = RatMatrix::zeros(a.cols(), free.len());
    for (j, &fc) in free.iter().enumerate() {
        out.set(fc, j, BigRational::one());
        for (r, &pc) in pivots.iter().enumerate() {
            out.set(pc, j, -red.at(r, fc).clone());
        }
    }
    out
}

/// An ambient space with a chosen quotient: `projection` kills exactly the
/// column span of the relation matrix it was built from, and `section` is a
/// right inverse so coset representatives can be lifted canonically.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    pub ambient_dim: usize,
    pub projection: RatMatrix,
    pub section: RatMatrix,
}

impl QuotientSpace {
    pub fn quotient_dim(&self) -> usize {
        self.projection.rows()
    }
}

/// Quotients the ambient space (`relations.rows()` dimensional) by the
/// column span of `relations`.
///
/// The complement basis is chosen by running the pivot rule over
/// `[relations | I]`, so both `projection` and `section` are deterministic.
pub fn quotient_by(relations: &RatMatrix) -> QuotientSpace {
    let n = relations.rows();
    let (_, pivots) = relations.hcat(&RatMatrix::identity(n)).rref();
    let rel_rank = pivots.iter().filter(|&&p| p < relations.cols()).count();
    // Columns of the full-rank frame: independent relation columns first,
    // then the identity columns selected by the pivot rule.
    let frame_cols: Vec<Vec<BigRational>> = pivots
        .iter()
        .map(|&p| {
            if p < relations.cols() {
                relations.column(p)
            } else {
                let mut e = vec![BigRational::zero(); n];
                e[p - relations.cols()] = BigRational::one();
                e
            }
        })
        .collect();
    let frame = RatMatrix::from_columns(n, &frame_cols);
    debug_assert_eq!(frame.cols(), n);
    let inv = solve(&frame, &RatMatrix::identity(n)).expect("frame is invertible");
    let q = n - rel_rank;
    // Quotient coordinates are the complement rows of the frame inverse.
    let projection = RatMatrix::from_fn(q, n, |r, c| inv.at(rel_rank + r, c).clone());
    let section = RatMatrix::from_fn(n, q, |r, c| frame.at(r, rel_rank + c).clone());
    QuotientSpace {
        ambient_dim: n,
        projection,
        section,
    }
}
