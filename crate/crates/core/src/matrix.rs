//! Dense matrices, echelon forms and subspaces over an exact field.

use std::fmt;

use num_bigint::BigInt;

use crate::scalar::{fmt_scalar, Scalar};
use crate::Error;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Build from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        if rows.iter().any(|v| v.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Integer entries, panicking on ragged input. Handy for fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| F::from_i64(v)).collect()).collect())
            .expect("ragged integer matrix")
    }

    pub fn diag(d: &[F]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<F> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, Error> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    out.data[i * o.cols + j].add_mul(a, b);
                }
            }
        }
        Ok(out)
    }

    /// Matrix product; panics on shape mismatch (internal use).
    pub fn dot(&self, o: &Self) -> Self {
        self.mul(o).expect("shape mismatch")
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    s.add_mul(a, b);
                }
                s
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul_ref(s)).collect() }
    }

    /// `self·o − o·self`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.dot(o).sub(&o.dot(self))
    }

    pub fn trace(&self) -> F {
        let mut s = F::zero();
        for i in 0..self.rows.min(self.cols) {
            s += self[(i, i)].clone();
        }
        s
    }

    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.dot(self);
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }

    /// Inverse, or `Err(Singular)`.
    pub fn inverse(&self) -> Result<Self, Error> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let (r, _) = rref(&aug);
        for i in 0..n {
            if r[(i, i)] != F::one() {
                return Err(Error::Singular);
            }
        }
        Ok(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    pub fn det(&self) -> F {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= piv.clone();
            let inv = piv.inv().unwrap();
            for r in c + 1..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = m[(r, c)].mul_ref(&inv);
                for j in c..n {
                    let v = m[(c, j)].clone();
                    m.data[r * n + j].sub_mul(&f, &v);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Stack `self` on top of `o`.
    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Matrix from the block layout `[[a, b], [c, d]]`.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let (r1, c1) = (a.rows, a.cols);
        Self::from_fn(r1 + c.rows, c1 + b.cols, |i, j| match (i < r1, j < c1) {
            (true, true) => a[(i, j)].clone(),
            (true, false) => b[(i, j - c1)].clone(),
            (false, true) => c[(i - r1, j)].clone(),
            (false, false) => d[(i - r1, j - c1)].clone(),
        })
    }

    /// Sub-block of rows `r0..r1`, columns `c0..c1`.
    pub fn slice(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Scalar> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(fmt_scalar).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Incremental row echelon builder. Rows are inserted one at a time and
/// reduced against the current pivots, so large redundant systems never get
/// materialized.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    cols: usize,
    /// (pivot column, row with 1 at the pivot)
    pivots: Vec<(usize, Vec<F>)>,
}

impl<F: Scalar> Echelon<F> {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn reduce(&self, row: &mut [F]) {
        for (p, r) in &self.pivots {
            if row[*p].is_zero() {
                continue;
            }
            let f = row[*p].clone();
            for (j, v) in r.iter().enumerate() {
                if !v.is_zero() {
                    row[j].sub_mul(&f, v);
                }
            }
        }
    }

    /// Insert a row; returns true if it increased the rank.
    pub fn insert(&mut self, mut row: Vec<F>) -> bool {
        assert_eq!(row.len(), self.cols);
        self.reduce(&mut row);
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[p].inv().unwrap();
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = x.mul_ref(&inv);
            }
        }
        // keep existing pivot rows reduced in the new pivot column
        for (_, r) in self.pivots.iter_mut() {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    r[j].sub_mul(&f, v);
                }
            }
        }
        self.pivots.push((p, row));
        true
    }

    /// Whether `row` lies in the row space.
    pub fn contains(&self, row: &[F]) -> bool {
        let mut r = row.to_vec();
        self.reduce(&mut r);
        r.iter().all(|x| x.is_zero())
    }

    /// Reduced row echelon rows sorted by pivot column.
    pub fn rref_rows(&self) -> Vec<Vec<F>> {
        let mut rows: Vec<_> = self.pivots.clone();
        rows.sort_by_key(|(p, _)| *p);
        rows.into_iter().map(|(_, r)| r).collect()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.pivots.iter().map(|(p, _)| *p).collect();
        p.sort_unstable();
        p
    }

    /// Null space of the row space viewed as a coefficient matrix.
    pub fn kernel(&self) -> Subspace<F> {
        let rows = self.rref_rows();
        let pivots = self.pivot_columns();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (r, &p) in rows.iter().zip(&pivots) {
                v[p] = -r[free].clone();
            }
            basis.push(v);
        }
        Subspace::span(self.cols, basis)
    }
}

/// Reduced row echelon form and rank.
pub fn rref<F: Scalar>(m: &Matrix<F>) -> (Matrix<F>, usize) {
    let mut e = Echelon::new(m.cols());
    for i in 0..m.rows() {
        e.insert(m.row_vec(i));
    }
    let mut rows = e.rref_rows();
    let rank = rows.len();
    while rows.len() < m.rows() {
        rows.push(vec![F::zero(); m.cols()]);
    }
    let out = if m.rows() == 0 { Matrix::zeros(0, m.cols()) } else { Matrix::from_rows(rows).unwrap() };
    (out, rank)
}

/// Null space `{v : m v = 0}`.
pub fn kernel<F: Scalar>(m: &Matrix<F>) -> Subspace<F> {
    let mut e = Echelon::new(m.cols());
    for i in 0..m.rows() {
        e.insert(m.row_vec(i));
    }
    e.kernel()
}

/// Solve `coeffs · x = rhs`. Returns a particular solution (if consistent) and
/// the kernel of `coeffs`.
pub fn solve_linear<F: Scalar>(
    coeffs: &Matrix<F>,
    rhs: &[F],
) -> Result<(Option<Vec<F>>, Subspace<F>), Error> {
    if rhs.len() != coeffs.rows() {
        return Err(Error::Dimension(format!(
            "rhs has length {}, system has {} rows",
            rhs.len(),
            coeffs.rows()
        )));
    }
    let n = coeffs.cols();
    let mut e = Echelon::new(n + 1);
    for i in 0..coeffs.rows() {
        let mut r = coeffs.row_vec(i);
        r.push(rhs[i].clone());
        e.insert(r);
    }
    let ker = kernel(coeffs);
    let rows = e.rref_rows();
    let pivots = e.pivot_columns();
    if pivots.contains(&n) {
        return Ok((None, ker));
    }
    let mut x = vec![F::zero(); n];
    for (r, &p) in rows.iter().zip(&pivots) {
        x[p] = r[n].clone();
    }
    Ok((Some(x), ker))
}

/// True iff `mⁿ = 0`.
pub fn is_nilpotent<F: Scalar>(m: &Matrix<F>) -> Result<bool, Error> {
    if !m.is_square() {
        return Err(Error::Dimension("nilpotency of a non-square matrix".into()));
    }
    // a nonzero tr(m^k) rules nilpotency out early; m^n decides
    let n = m.rows();
    let mut p = m.clone();
    for _ in 1..n {
        if p.is_zero() {
            return Ok(true);
        }
        if !p.trace().is_zero() {
            return Ok(false);
        }
        p = p.dot(m);
    }
    Ok(p.is_zero())
}

/// `tr(mᵏ)`; `k = 0` gives the size.
pub fn trace_power<F: Scalar>(m: &Matrix<F>, k: usize) -> Result<F, Error> {
    if !m.is_square() {
        return Err(Error::Dimension("trace of a non-square matrix".into()));
    }
    if k == 0 {
        return Ok(F::from_i64(m.rows() as i64));
    }
    Ok(m.pow(k).trace())
}

/// Linear subspace of Kⁿ, stored as its unique reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
}

impl<F: Scalar> Subspace<F> {
    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<F>>) -> Self {
        let mut e = Echelon::new(ambient);
        for v in vectors {
            e.insert(v);
        }
        Subspace { ambient, basis: e.rref_rows() }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(|i| unit(ambient, i)))
    }

    /// Span of the given coordinate axes.
    pub fn axes(ambient: usize, idx: &[usize]) -> Self {
        Self::span(ambient, idx.iter().map(|&i| unit(ambient, i)))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    fn echelon(&self) -> Echelon<F> {
        let mut e = Echelon::new(self.ambient);
        for v in &self.basis {
            e.insert(v.clone());
        }
        e
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.echelon().contains(v)
    }

    pub fn contains_space(&self, o: &Self) -> bool {
        let e = self.echelon();
        o.basis.iter().all(|v| e.contains(v))
    }

    pub fn sum(&self, o: &Self) -> Self {
        Self::span(self.ambient, self.basis.iter().chain(&o.basis).cloned())
    }

    /// Vectors `f` with `f·v = 0` for every `v` in the space.
    pub fn annihilator(&self) -> Self {
        let mut e = Echelon::new(self.ambient);
        for v in &self.basis {
            e.insert(v.clone());
        }
        e.kernel()
    }

    pub fn intersect(&self, o: &Self) -> Self {
        let a = self.annihilator();
        let b = o.annihilator();
        let mut e = Echelon::new(self.ambient);
        for v in a.basis.iter().chain(&b.basis) {
            e.insert(v.clone());
        }
        e.kernel()
    }

    /// Image of the space under `m` (column action).
    pub fn image(&self, m: &Matrix<F>) -> Self {
        Self::span(m.rows(), self.basis.iter().map(|v| m.apply(v)))
    }
}

/// Standard basis vector.
pub fn unit<F: Scalar>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

/// Column space of `m`.
pub fn column_space<F: Scalar>(m: &Matrix<F>) -> Subspace<F> {
    Subspace::span(m.rows(), (0..m.cols()).map(|j| m.col_vec(j)))
}

/// Rank of a family of rows. Rational rows are cleared of denominators and
/// go through a fraction-free integer elimination, on machine words while
/// the entries fit and on big integers after that; this is much faster than
/// rational elimination for the large, mostly redundant systems behind
/// derivation and centroid dimensions.
pub fn rank_of_rows<F: Scalar>(cols: usize, rows: &[Vec<F>]) -> usize {
    let big: Option<Vec<Vec<BigInt>>> = rows.iter().map(|r| integer_row(r)).collect();
    if let Some(big) = big {
        return integer_rank(cols, big);
    }
    let mut e = Echelon::new(cols);
    for r in rows {
        e.insert(r.clone());
    }
    e.rank()
}

/// Rank of integer rows.
pub(crate) fn integer_rank(cols: usize, rows: Vec<Vec<BigInt>>) -> usize {
    use num_traits::ToPrimitive;
    if let Some(r) = modular_rank(cols, &rows) {
        return r;
    }
    let small: Option<Vec<Vec<i128>>> =
        rows.iter().map(|r| r.iter().map(|v| v.to_i128().filter(|x| x.unsigned_abs() < 1 << 62)).collect()).collect();
    if let Some(r) = small.and_then(|s| int_rank(cols, s)) {
        return r;
    }
    big_rank(cols, rows)
}

/// Primes just below 2^62 used for multi-modular rank computation.
const PRIMES: [u64; 8] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387733,
    4611686018427387701,
    4611686018427387631,
    4611686018427387617,
    4611686018427387587,
];

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Reduced row echelon form mod `p`: pivot columns and, for each free column,
/// the kernel vector with a 1 there (as residues indexed by column).
fn kernel_mod(cols: usize, rows: &[Vec<BigInt>], p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let pb = BigInt::from(p);
    let mut red: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|v| v.mod_floor(&pb).to_u64().unwrap()).collect()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    for c in 0..cols {
        let next = pivots.len();
        if next == red.len() {
            break;
        }
        let Some(i) = (next..red.len()).find(|&i| red[i][c] != 0) else { continue };
        red.swap(i, next);
        let inv = inv_mod(red[next][c], p);
        for v in red[next].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let pr = red[next].clone();
        for (k, row) in red.iter_mut().enumerate() {
            if k == next || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, y) in row.iter_mut().zip(&pr) {
                if *y != 0 {
                    *x = (*x + p - mul_mod(f, *y, p)) % p;
                }
            }
        }
        pivots.push(c);
    }
    let kernel = (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = (p - red[row][f]) % p;
            }
            v
        })
        .collect();
    (pivots, kernel)
}

/// Rational `n/d` with `n ≡ d·a (mod m)` and `|n|, d` below `sqrt(m/2)`.
fn reconstruct(a: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    use num_traits::{Signed, Zero};
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::from(1));
    while r1 >= bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() >= bound {
        return None;
    }
    Some(if t1.is_negative() { (-r1, -t1) } else { (r1, t1) })
}

/// Rank over Q by multi-modular elimination, certified exactly: the rank
/// mod a prime is a lower bound, and kernel vectors lifted by CRT and
/// rational reconstruction that annihilate every row give the matching upper
/// bound. `None` when the lift does not succeed within the prime list.
fn modular_rank(cols: usize, rows: &[Vec<BigInt>]) -> Option<usize> {
    use num_integer::Integer;
    use num_traits::Zero;
    let (pivots, first) = kernel_mod(cols, rows, PRIMES[0]);
    let mut modulus = BigInt::from(PRIMES[0]);
    let mut residues: Vec<Vec<BigInt>> = first.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    for k in 1..=PRIMES.len() {
        let lifted: Option<Vec<Vec<BigInt>>> = residues
            .iter()
            .map(|v| {
                let parts: Vec<(BigInt, BigInt)> = v.iter().map(|a| reconstruct(a, &modulus)).collect::<Option<_>>()?;
                let l = parts.iter().fold(BigInt::from(1), |acc, (_, d)| acc.lcm(d));
                Some(parts.iter().map(|(n, d)| n * (&l / d)).collect())
            })
            .collect();
        if let Some(ws) = lifted {
            let exact = ws.iter().all(|w| {
                rows.iter().all(|r| {
                    let mut s = BigInt::zero();
                    for (a, b) in r.iter().zip(w) {
                        if !a.is_zero() && !b.is_zero() {
                            s += a * b;
                        }
                    }
                    s.is_zero()
                })
            });
            if exact {
                return Some(pivots.len());
            }
        }
        let Some(&p) = PRIMES.get(k) else { break };
        let (piv, kern) = kernel_mod(cols, rows, p);
        if piv != pivots {
            // unlucky prime for one of the two; let exact elimination decide
            return None;
        }
        // CRT: x ≡ r (mod modulus), x ≡ s (mod p)
        let pb = BigInt::from(p);
        let inv = BigInt::from(inv_mod((&modulus % &pb).try_into().unwrap(), p));
        for (v, s) in residues.iter_mut().zip(&kern) {
            for (r, &s) in v.iter_mut().zip(s) {
                let t = ((BigInt::from(s) - &*r) * &inv).mod_floor(&pb);
                *r += t * &modulus;
            }
        }
        modulus *= pb;
    }
    None
}

fn integer_row<F: Scalar>(row: &[F]) -> Option<Vec<BigInt>> {
    use num_integer::Integer;
    let qs: Vec<crate::Q> = row.iter().map(|x| x.to_q()).collect::<Option<_>>()?;
    let l = qs.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    Some(qs.iter().map(|c| c.numer() * (&l / c.denom())).collect())
}

fn big_rank(cols: usize, rows: Vec<Vec<BigInt>>) -> usize {
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};
    let content = |r: &mut [BigInt]| {
        let g = r.iter().fold(BigInt::zero(), |a, v| a.gcd(v));
        if !g.is_zero() && !g.is_one() {
            for v in r.iter_mut() {
                *v /= &g;
            }
        }
    };
    let mut pivots: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for mut r in rows {
        for (p, pr) in &pivots {
            if r[*p].is_zero() {
                continue;
            }
            let d = r[*p].gcd(&pr[*p]);
            let (mf, mg) = (&r[*p] / &d, &pr[*p] / &d);
            for j in 0..cols {
                let v = &r[j] * &mg - &pr[j] * &mf;
                r[j] = v;
            }
            content(&mut r);
        }
        if let Some(p) = r.iter().position(|v| !v.is_zero()) {
            if r[p].is_negative() {
                for v in r.iter_mut() {
                    *v = -v.clone();
                }
            }
            pivots.push((p, r));
        }
    }
    pivots.len()
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Rank of integer rows; `None` on overflow.
pub(crate) fn int_rank(cols: usize, rows: Vec<Vec<i128>>) -> Option<usize> {
    let mut pivots: Vec<(usize, Vec<i128>)> = Vec::new();
    for mut r in rows {
        for (p, pr) in &pivots {
            let f = r[*p];
            if f == 0 {
                continue;
            }
            let g = pr[*p];
            let d = gcd_i128(f, g);
            let (mf, mg) = (f / d, g / d);
            let mut big = false;
            for j in 0..cols {
                let v = r[j].checked_mul(mg)?.checked_sub(pr[j].checked_mul(mf)?)?;
                r[j] = v;
                big |= v.unsigned_abs() > 1 << 40;
            }
            // divide out the content only once entries grow
            if big {
                let acc = r.iter().fold(0, |a, &v| gcd_i128(a, v));
                if acc > 1 {
                    for v in r.iter_mut() {
                        *v /= acc;
                    }
                }
            }
        }
        if let Some(p) = r.iter().position(|&v| v != 0) {
            let acc = r.iter().fold(0, |a, &v| gcd_i128(a, v));
            if acc > 1 {
                for v in r.iter_mut() {
                    *v /= acc;
                }
            }
            pivots.push((p, r));
        }
    }
    Some(pivots.len())
}
