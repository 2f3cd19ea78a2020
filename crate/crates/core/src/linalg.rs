//! Dense linear algebra over `F_q`: matrices, canonical subspaces and the
//! `GL(n, q)` stream.
//!
//! Matrices act on column vectors: the image of a subspace under `M` is the
//! span of `M·u` over its basis rows `u`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::ScalarField;

/// Default cap on the number of group elements an exhaustive scan may visit.
pub const DEFAULT_GL_BUDGET: u128 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u8] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| self.get(r, c) == u8::from(r == c)))
    }

    pub fn check_entries(&self, f: &ScalarField) -> Result<()> {
        match self.data.iter().find(|&&x| x as usize >= f.order()) {
            Some(x) => Err(Error::DimensionMismatch(format!(
                "entry {x} is not a scalar of F_{}",
                f.order()
            ))),
            None => Ok(()),
        }
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

    pub fn mul(&self, other: &Matrix, f: &ScalarField) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(r, t);
                if a == 0 {
                    continue;
                }
                let m = f.mul_row(a);
                for c in 0..other.cols {
                    let cell = &mut out.data[r * other.cols + c];
                    *cell = f.add(*cell, m[other.get(t, c) as usize]);
                }
            }
        }
        Ok(out)
    }

    /// `out = M·v` for a column vector `v`.
    #[inline]
    pub fn apply_into(&self, v: &[u8], f: &ScalarField, out: &mut [u8]) {
        for (r, o) in out.iter_mut().enumerate().take(self.rows) {
            let row = self.row(r);
            let mut acc = 0u8;
            for (&a, &x) in row.iter().zip(v) {
                acc = f.add(acc, f.mul(a, x));
            }
            *o = acc;
        }
    }

    pub fn apply(&self, v: &[u8], f: &ScalarField) -> Vec<u8> {
        let mut out = vec![0; self.rows];
        self.apply_into(v, f, &mut out);
        out
    }

    pub fn rank(&self, f: &ScalarField) -> usize {
        let mut d = self.data.clone();
        rref_slice(&mut d, self.rows, self.cols, f)
    }

    pub fn is_invertible(&self, f: &ScalarField) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }

    pub fn inverse(&self, f: &ScalarField) -> Result<Matrix> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let w = 2 * n;
        let mut aug = vec![0u8; n * w];
        for r in 0..n {
            aug[r * w..r * w + n].copy_from_slice(self.row(r));
            aug[r * w + n + r] = 1;
        }
        // pivots are found among the left block only
        let rank = rref_slice_cols(&mut aug, n, w, n, f);
        if rank < n {
            return Err(Error::SingularMatrix);
        }
        let data = (0..n).flat_map(|r| aug[r * w + n..(r + 1) * w].to_vec()).collect();
        Ok(Matrix { rows: n, cols: n, data })
    }
}

/// Reduced row echelon form and rank.
pub fn rref(m: &Matrix, f: &ScalarField) -> (Matrix, usize) {
    let mut out = m.clone();
    let rank = rref_slice(&mut out.data, m.rows, m.cols, f);
    (out, rank)
}

pub(crate) fn rref_slice(data: &mut [u8], rows: usize, cols: usize, f: &ScalarField) -> usize {
    rref_slice_cols(data, rows, cols, cols, f)
}

/// Gauss–Jordan elimination with pivots restricted to the first `pivot_cols`
/// columns; nonzero rows end up on top.
fn rref_slice_cols(
    data: &mut [u8],
    rows: usize,
    cols: usize,
    pivot_cols: usize,
    f: &ScalarField,
) -> usize {
    let mut rank = 0;
    for col in 0..pivot_cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| data[r * cols + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for c in col..cols {
                data.swap(pivot * cols + c, rank * cols + c);
            }
        }
        let inv = f.inv_unchecked(data[rank * cols + col]);
        if inv != 1 {
            let m = f.mul_row(inv);
            for c in col..cols {
                let x = &mut data[rank * cols + c];
                *x = m[*x as usize];
            }
        }
        for r in 0..rows {
            let e = data[r * cols + col];
            if r == rank || e == 0 {
                continue;
            }
            let m = f.mul_row(e);
            for c in col..cols {
                let pv = data[rank * cols + c];
                let x = &mut data[r * cols + c];
                *x = f.sub(*x, m[pv as usize]);
            }
        }
        rank += 1;
    }
    rank
}

/// Canonical byte encoding of a subspace: its RREF entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceKey(Box<[u8]>);

impl SubspaceKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl std::borrow::Borrow<[u8]> for SubspaceKey {
    fn borrow(&self) -> &[u8] {
        &self.0
    }
}

impl std::fmt::Display for SubspaceKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in self.0.iter() {
            write!(f, "{b:x}")?;
        }
        Ok(())
    }
}

/// A subspace of `F_q^n`, held by its RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Row space of `m`.
    pub fn span(m: &Matrix, f: &ScalarField) -> Subspace {
        let (mut r, rank) = rref(m, f);
        r.data.truncate(rank * r.cols);
        r.rows = rank;
        Subspace { basis: r }
    }

    /// Accepts `rows` only if it is already a full-rank RREF basis.
    pub fn from_rref(rows: &Matrix, f: &ScalarField) -> Result<Subspace> {
        rows.check_entries(f).map_err(|e| Error::NotRref(e.to_string()))?;
        let mut last_pivot = None;
        for r in 0..rows.rows() {
            let Some(pc) = rows.row(r).iter().position(|&x| x != 0) else {
                return Err(Error::NotRref(format!("row {r} is zero")));
            };
            if rows.get(r, pc) != 1 {
                return Err(Error::NotRref(format!("row {r} has leading entry {}", rows.get(r, pc))));
            }
            if last_pivot.is_some_and(|lp| pc <= lp) {
                return Err(Error::NotRref(format!("row {r} pivot column {pc} is out of order")));
            }
            if let Some(other) = (0..rows.rows()).find(|&o| o != r && rows.get(o, pc) != 0) {
                return Err(Error::NotRref(format!(
                    "pivot column {pc} of row {r} is nonzero in row {other}"
                )));
            }
            last_pivot = Some(pc);
        }
        Ok(Subspace { basis: rows.clone() })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn key(&self) -> SubspaceKey {
        SubspaceKey(self.basis.data.clone().into_boxed_slice())
    }

    pub fn contains(&self, v: &[u8], f: &ScalarField) -> bool {
        let mut stacked = self.basis.data.clone();
        stacked.extend_from_slice(v);
        rref_slice(&mut stacked, self.dim() + 1, self.ambient_dim(), f) == self.dim()
    }

    /// `M(U)`; `m` must be invertible.
    pub fn image(&self, m: &Matrix, f: &ScalarField) -> Result<Subspace> {
        if m.cols != self.ambient_dim() || !m.is_invertible(f) {
            return Err(Error::SingularMatrix);
        }
        Ok(self.image_unchecked(m, f))
    }

    pub(crate) fn image_unchecked(&self, m: &Matrix, f: &ScalarField) -> Subspace {
        let mut buf = Vec::new();
        image_rref_into(m, &self.basis, f, &mut buf);
        Subspace { basis: Matrix { rows: self.dim(), cols: self.ambient_dim(), data: buf } }
    }

    /// Every vector of the subspace, as coordinate rows.
    pub fn vectors(&self, f: &ScalarField) -> Vec<Vec<u8>> {
        let q = f.order();
        let (k, n) = (self.dim(), self.ambient_dim());
        let mut out = Vec::with_capacity(q.pow(k as u32));
        for code in 0..q.pow(k as u32) {
            let mut v = vec![0u8; n];
            let mut c = code;
            for r in 0..k {
                let a = (c % q) as u8;
                c /= q;
                if a == 0 {
                    continue;
                }
                for (x, &b) in v.iter_mut().zip(self.basis.row(r)) {
                    *x = f.add(*x, f.mul(a, b));
                }
            }
            out.push(v);
        }
        out
    }
}

/// Writes the RREF of `M·basis` (rows transported as columns) into `buf`.
#[inline]
pub(crate) fn image_rref_into(m: &Matrix, basis: &Matrix, f: &ScalarField, buf: &mut Vec<u8>) {
    let (k, n) = (basis.rows, basis.cols);
    buf.clear();
    buf.resize(k * n, 0);
    for r in 0..k {
        m.apply_into(basis.row(r), f, &mut buf[r * n..(r + 1) * n]);
    }
    rref_slice(buf, k, n, f);
}

/// `M(U)` for invertible `M` (see [`Subspace::image`]).
pub fn apply_subspace(m: &Matrix, u: &Subspace, f: &ScalarField) -> Result<Subspace> {
    u.image(m, f)
}

/// `dim(U ∩ V) = dim U + dim V − rank [U; V]`.
pub fn intersection_dim(u: &Subspace, v: &Subspace, f: &ScalarField) -> Result<usize> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(Error::MixedAmbient(format!(
            "subspaces of F^{} and F^{}",
            u.ambient_dim(),
            v.ambient_dim()
        )));
    }
    let mut stacked = u.basis.data.clone();
    stacked.extend_from_slice(&v.basis.data);
    let rank = rref_slice(&mut stacked, u.dim() + v.dim(), u.ambient_dim(), f);
    Ok(u.dim() + v.dim() - rank)
}

/// `|GL(n, q)| = Π_{i<n} (q^n − q^i)`, or `None` on overflow.
pub fn gl_count(n: usize, q: u64) -> Option<u128> {
    let qn = (q as u128).checked_pow(n as u32)?;
    (0..n).try_fold(1u128, |acc, i| acc.checked_mul(qn - (q as u128).pow(i as u32)))
}

/// Integer code of a coordinate vector; numeric order is lexicographic order.
#[inline]
pub fn encode_vector(v: &[u8], q: usize) -> usize {
    v.iter().fold(0usize, |acc, &x| acc * q + x as usize)
}

#[inline]
pub fn decode_vector(mut code: usize, q: usize, out: &mut [u8]) {
    for x in out.iter_mut().rev() {
        *x = (code % q) as u8;
        code /= q;
    }
}

/// Deterministic enumeration of `GL(n, q)`.
///
/// Rows are chosen one at a time, each from the vectors outside the span of
/// the earlier rows, in increasing order of [`encode_vector`]. The last row
/// varies fastest, so element `idx` has mixed-radix digits
/// `c_i < q^n − q^i` with row 0 most significant. [`GlStream::range`]
/// restarts the stream at any index, which is how scans are split across
/// workers.
pub struct GlStream<'f> {
    f: &'f ScalarField,
    n: usize,
    space: usize,
    codes: Vec<usize>,
    /// `spans[i]` marks the span of rows `0..i`.
    spans: Vec<Vec<bool>>,
    current: Matrix,
    remaining: u128,
    fresh: bool,
    scratch: (Vec<u8>, Vec<u8>),
}

impl<'f> GlStream<'f> {
    pub fn new(n: usize, f: &'f ScalarField, budget: u128) -> Result<Self> {
        let total = Self::checked_total(n, f, budget)?;
        Self::range(n, f, 0, total, budget)
    }

    /// Elements with index in `start..end`.
    pub fn range(n: usize, f: &'f ScalarField, start: u128, end: u128, budget: u128) -> Result<Self> {
        let total = Self::checked_total(n, f, budget)?;
        let end = end.min(total);
        let q = f.order();
        let space = q.pow(n as u32);
        let mut s = GlStream {
            f,
            n,
            space,
            codes: vec![0; n],
            spans: vec![vec![false; space]; n],
            current: Matrix::zeros(n, n),
            remaining: end.saturating_sub(start),
            fresh: true,
            scratch: (vec![0; n], vec![0; n]),
        };
        if s.remaining == 0 {
            return Ok(s);
        }
        s.spans[0][0] = true;
        // unrank `start`
        let radices: Vec<u128> =
            (0..n).map(|i| space as u128 - (q as u128).pow(i as u32)).collect();
        let mut rest = start;
        let mut digits = vec![0u128; n];
        for i in (0..n).rev() {
            digits[i] = rest % radices[i];
            rest /= radices[i];
        }
        for (i, &digit) in digits.iter().enumerate() {
            let mut skip = digit;
            let mut code = 0;
            loop {
                if !s.spans[i][code] {
                    if skip == 0 {
                        break;
                    }
                    skip -= 1;
                }
                code += 1;
            }
            s.set_row(i, code);
        }
        Ok(s)
    }

    fn checked_total(n: usize, f: &ScalarField, budget: u128) -> Result<u128> {
        if n == 0 {
            return Err(Error::InvalidParameter("GL(0, q) is not enumerated".into()));
        }
        let total = gl_count(n, f.order() as u64).ok_or(Error::BudgetExceeded {
            count: u128::MAX,
            budget,
        })?;
        if total > budget {
            return Err(Error::BudgetExceeded { count: total, budget });
        }
        Ok(total)
    }

    fn set_row(&mut self, i: usize, code: usize) {
        self.codes[i] = code;
        decode_vector(code, self.f.order(), self.current.row_mut(i));
        if i + 1 < self.n {
            let q = self.f.order();
            let (lower, upper) = self.spans.split_at_mut(i + 1);
            let (src, dst) = (&lower[i], &mut upper[0]);
            dst.iter_mut().for_each(|x| *x = false);
            let (a, b) = &mut self.scratch;
            let row = self.current.row(i);
            for s in (0..self.space).filter(|&s| src[s]) {
                decode_vector(s, q, a);
                for c in 0..q as u8 {
                    for ((o, &x), &y) in b.iter_mut().zip(a.iter()).zip(row) {
                        *o = self.f.add(x, self.f.mul(c, y));
                    }
                    dst[encode_vector(b, q)] = true;
                }
            }
        }
    }

    fn next_free(&self, i: usize, from: usize) -> Option<usize> {
        (from..self.space).find(|&c| !self.spans[i][c])
    }

    /// Advances and returns the next element without allocating.
    pub fn next_matrix(&mut self) -> Option<&Matrix> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        if self.fresh {
            self.fresh = false;
            return Some(&self.current);
        }
        let mut level = self.n - 1;
        let code = loop {
            if let Some(c) = self.next_free(level, self.codes[level] + 1) {
                break c;
            }
            // by the remaining count the stream cannot run past the last element
            level -= 1;
        };
        self.set_row(level, code);
        for i in level + 1..self.n {
            let c = self.next_free(i, 0).expect("complement is nonempty");
            self.set_row(i, c);
        }
        Some(&self.current)
    }
}

impl Iterator for GlStream<'_> {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        self.next_matrix().cloned()
    }
}

/// All of `GL(n, q)` in stream order.
pub fn gl_iter(n: usize, f: &ScalarField, budget: u128) -> Result<GlStream<'_>> {
    GlStream::new(n, f, budget)
}

/// A random invertible matrix by row-by-row extension; every element of
/// `GL(n, q)` is reachable.
pub fn random_gl_with<R: Rng + ?Sized>(n: usize, f: &ScalarField, rng: &mut R) -> Matrix {
    let q = f.order();
    let mut m = Matrix::zeros(n, n);
    let mut echelon: Vec<u8> = Vec::with_capacity(n * n);
    let mut rank = 0;
    while rank < n {
        let v: Vec<u8> = (0..n).map(|_| rng.random_range(0..q) as u8).collect();
        echelon.extend_from_slice(&v);
        if rref_slice(&mut echelon, rank + 1, n, f) == rank + 1 {
            m.row_mut(rank).copy_from_slice(&v);
            rank += 1;
        } else {
            echelon.truncate(rank * n);
        }
    }
    m
}

pub fn random_gl(n: usize, f: &ScalarField, seed: u64) -> Matrix {
    random_gl_with(n, f, &mut ChaCha8Rng::seed_from_u64(seed))
}
