//! Exact dense linear algebra over a small prime field GF(p).
//!
//! Everything downstream (zigzag barcodes, arc codes, limit/colimit ranks)
//! reduces to rank, echelon form and kernel computations on small dense
//! matrices, so this module keeps the representation simple: row-major
//! `u32` entries held in canonical form `[0, p)`. Pointwise dimensions in
//! this crate stay in the low hundreds; plain Gaussian elimination is both
//! fast enough and easy to audit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("modulus {0} is not a small prime")]
    BadModulus(u32),
    #[error("expected an invertible matrix")]
    Singular,
}

/// A prime modulus. All scalar arithmetic is mod `p` with canonical
/// representatives in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
}

impl FieldSpec {
    /// Accepts primes up to 2^16 so that products fit comfortably in u64.
    pub fn new(p: u32) -> Result<Self, LinalgError> {
        if !(2..=(1 << 16)).contains(&p) || !is_prime(p) {
            return Err(LinalgError::BadModulus(p));
        }
        Ok(FieldSpec { p })
    }

    /// The default field GF(2).
    pub const fn gf2() -> Self {
        FieldSpec { p: 2 }
    }

    pub const fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b { a - b } else { a + self.p - b }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 { 0 } else { self.p - a }
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    fn pow(&self, mut base: u32, mut e: u32) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over GF(p). Zero-row and zero-column matrices are
/// legal and show up constantly (maps in and out of zero spaces).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of row reduction: the reduced row-echelon form together with the
/// strictly increasing pivot column list.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Entries must already be canonical for `field`.
    pub fn entries_canonical(&self, field: FieldSpec) -> bool {
        self.data.iter().all(|&v| v < field.modulus())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn neg(&self, field: FieldSpec) -> Matrix {
        let mut m = self.clone();
        for v in &mut m.data {
            *v = field.neg(*v);
        }
        m
    }

    /// Exact product mod p.
    pub fn mat_mul(&self, rhs: &Matrix, field: FieldSpec) -> Result<Matrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let p = field.modulus() as u64;
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let idx = r * rhs.cols + c;
                    out.data[idx] = ((out.data[idx] as u64 + a * rhs.get(k, c) as u64) % p) as u32;
                }
            }
        }
        Ok(out)
    }

    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.rows != rhs.rows {
            return Err(LinalgError::Shape("hstack row mismatch".into()));
        }
        let mut out = Matrix::zeros(self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..rhs.cols {
                out.set(r, self.cols + c, rhs.get(r, c));
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, lower: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != lower.cols {
            return Err(LinalgError::Shape("vstack col mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&lower.data);
        Ok(Matrix {
            rows: self.rows + lower.rows,
            cols: self.cols,
            data,
        })
    }

    /// Reduced row-echelon form. Row space is preserved; pivot columns are
    /// strictly increasing and their entries are 1 with zeros elsewhere in
    /// their column.
    pub fn rref(&self, field: FieldSpec) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for pc in 0..m.cols {
            if pr >= m.rows {
                break;
            }
            let mut sel = None;
            for r in pr..m.rows {
                if m.get(r, pc) != 0 {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            if sel != pr {
                for c in 0..m.cols {
                    let a = m.get(sel, c);
                    let b = m.get(pr, c);
                    m.set(sel, c, b);
                    m.set(pr, c, a);
                }
            }
            let inv = field.inv(m.get(pr, pc));
            for c in pc..m.cols {
                let v = field.mul(m.get(pr, c), inv);
                m.set(pr, c, v);
            }
            for r in 0..m.rows {
                if r == pr {
                    continue;
                }
                let f = m.get(r, pc);
                if f == 0 {
                    continue;
                }
                for c in pc..m.cols {
                    let v = field.sub(m.get(r, c), field.mul(f, m.get(pr, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(pc);
            pr += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self, field: FieldSpec) -> usize {
        self.rref(field).pivots.len()
    }

    /// Columns form a basis of the null space; `m * kernel_basis(m) = 0` and
    /// the column count is `cols - rank`.
    pub fn kernel_basis(&self, field: FieldSpec) -> Matrix {
        let Rref { matrix: r, pivots } = self.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, field.neg(r.get(i, fc)));
            }
        }
        basis
    }

    pub fn inverse(&self, field: FieldSpec) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Shape("inverse of non-square".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n))?;
        let red = aug.rref(field);
        if red.pivots.len() != n || red.pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return Err(LinalgError::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.matrix.get(r, n + c));
            }
        }
        Ok(inv)
    }

    pub fn random(rows: usize, cols: usize, field: FieldSpec, rng: &mut impl Rng) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for v in &mut m.data {
            *v = rng.random_range(0..field.modulus());
        }
        m
    }
}

/// Square matrix of full rank, deterministic for a fixed seed.
pub fn random_invertible(dim: usize, field: FieldSpec, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_invertible_with(dim, field, &mut rng)
}

pub fn random_invertible_with(dim: usize, field: FieldSpec, rng: &mut impl Rng) -> Matrix {
    if dim == 0 {
        return Matrix::zeros(0, 0);
    }
    loop {
        let m = Matrix::random(dim, dim, field, rng);
        if m.rank(field) == dim {
            return m;
        }
    }
}

// ---------------------------------------------------------------------------
// Subspaces, represented by matrices whose columns form a basis.
//
// `col_basis` puts any spanning set into reduced column echelon form (zero
// columns dropped), which is canonical: two spans are equal iff the reduced
// bases are byte-equal.
// ---------------------------------------------------------------------------

pub fn col_basis(span: &Matrix, field: FieldSpec) -> Matrix {
    let red = span.transpose().rref(field);
    let rank = red.pivots.len();
    let mut out = Matrix::zeros(span.rows(), rank);
    for i in 0..rank {
        for r in 0..span.rows() {
            out.set(r, i, red.matrix.get(i, r));
        }
    }
    out
}

/// Image of a subspace under a linear map: span of `map * basis`.
pub fn image(map: &Matrix, basis: &Matrix, field: FieldSpec) -> Matrix {
    let prod = map.mat_mul(basis, field).expect("image: shape");
    col_basis(&prod, field)
}

/// Preimage of a subspace: all x with `map x` in the span of `basis`.
pub fn preimage(map: &Matrix, basis: &Matrix, field: FieldSpec) -> Matrix {
    let stacked = map.hstack(&basis.neg(field)).expect("preimage: shape");
    let ker = stacked.kernel_basis(field);
    let mut xpart = Matrix::zeros(map.cols(), ker.cols());
    for r in 0..map.cols() {
        for c in 0..ker.cols() {
            xpart.set(r, c, ker.get(r, c));
        }
    }
    col_basis(&xpart, field)
}

/// Intersection of two subspaces of the same ambient space.
pub fn intersect(a: &Matrix, b: &Matrix, field: FieldSpec) -> Matrix {
    debug_assert_eq!(a.rows(), b.rows());
    if a.cols() == 0 || b.cols() == 0 {
        return Matrix::zeros(a.rows(), 0);
    }
    let stacked = a.hstack(&b.neg(field)).expect("intersect: shape");
    let ker = stacked.kernel_basis(field);
    let mut coeff = Matrix::zeros(a.cols(), ker.cols());
    for r in 0..a.cols() {
        for c in 0..ker.cols() {
            coeff.set(r, c, ker.get(r, c));
        }
    }
    let span = a.mat_mul(&coeff, field).expect("intersect: shape");
    col_basis(&span, field)
}
