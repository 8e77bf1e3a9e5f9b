//! Lie algebras given by structure constants, and the structural computations
//! on them: series, center, derivations, centroid, decomposability,
//! nilradical and invariant fingerprints.

use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::matrix::{column_space, integer_rank, rank_of_rows, unit, Echelon, Matrix, Subspace};
use crate::poly::{Factorable, Poly};
use crate::scalar::{fmt_scalar, FieldKind, Scalar};
use crate::Error;

/// Finite-dimensional Lie algebra with `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieAlgebra<F> {
    n: usize,
    c: Vec<F>,
    label: String,
    names: Vec<String>,
}

impl<F: Scalar> LieAlgebra<F> {
    /// Abelian algebra of dimension `n`.
    pub fn abelian(n: usize, label: impl Into<String>) -> Self {
        LieAlgebra { n, c: vec![F::zero(); n * n * n], label: label.into(), names: default_names(n) }
    }

    /// Algebra from the nonzero brackets `[e_i, e_j] = Σ coef·e_k` (0-based,
    /// `i < j` not required); the opposite brackets are filled in.
    pub fn from_brackets(n: usize, label: impl Into<String>, brackets: &[(usize, usize, Vec<(usize, F)>)]) -> Self {
        let mut l = Self::abelian(n, label);
        for (i, j, terms) in brackets {
            for (k, v) in terms {
                let a = l.idx(*i, *j, *k);
                let b = l.idx(*j, *i, *k);
                l.c[a] += v.clone();
                l.c[b] -= v.clone();
            }
        }
        l
    }

    /// Algebra from a full tensor indexed `(i·n + j)·n + k`; rejects tensors
    /// that are not antisymmetric.
    pub fn from_tensor(n: usize, c: Vec<F>, label: impl Into<String>) -> Result<Self, Error> {
        if c.len() != n * n * n {
            return Err(Error::Dimension(format!("tensor has {} entries, expected {}", c.len(), n * n * n)));
        }
        let l = LieAlgebra { n, c, label: label.into(), names: default_names(n) };
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    if l.c(i, j, k).clone() + l.c(j, i, k).clone() != F::zero() {
                        return Err(Error::NotAntisymmetric(i + 1, j + 1));
                    }
                }
            }
        }
        Ok(l)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.n);
        self.names = names;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn field(&self) -> FieldKind {
        F::KIND
    }

    pub fn tensor(&self) -> &[F] {
        &self.c
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    /// Structure constant `c_{ij}^k`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &F {
        &self.c[self.idx(i, j, k)]
    }

    /// Coordinates of `[e_i, e_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[F] {
        let s = self.idx(i, j, 0);
        &self.c[s..s + self.n]
    }

    /// Bracket of coordinate vectors.
    pub fn bracket(&self, x: &[F], y: &[F]) -> Result<Vec<F>, Error> {
        if x.len() != self.n || y.len() != self.n {
            return Err(Error::Dimension(format!(
                "bracket of vectors of lengths {} and {} in dimension {}",
                x.len(),
                y.len(),
                self.n
            )));
        }
        Ok(self.br(x, y))
    }

    /// Bracket without length checks.
    pub fn br(&self, x: &[F], y: &[F]) -> Vec<F> {
        let n = self.n;
        let mut out = vec![F::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let w = x[i].mul_ref(&y[j]);
                for (k, c) in self.basis_bracket(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k].add_mul(&w, c);
                    }
                }
            }
        }
        out
    }

    /// Column-action matrix of `y ↦ [x, y]`.
    pub fn ad(&self, x: &[F]) -> Matrix<F> {
        let n = self.n;
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            let v = self.br(x, &unit(n, j));
            for (k, val) in v.into_iter().enumerate() {
                m[(k, j)] = val;
            }
        }
        m
    }

    /// `ad(e_i)`.
    pub fn ad_basis(&self, i: usize) -> Matrix<F> {
        Matrix::from_fn(self.n, self.n, |k, j| self.c(i, j, k).clone())
    }

    /// Basis triples `(i, j, k)`, 0-based with `i < j < k`, where the Jacobi
    /// identity fails.
    pub fn jacobi_check(&self) -> Vec<(usize, usize, usize)> {
        let n = self.n;
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if !self.jacobiator(i, j, k).iter().all(|x| x.is_zero()) {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]`.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<F> {
        let n = self.n;
        let mut out = vec![F::zero(); n];
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for (m, cm) in self.basis_bracket(b, c).iter().enumerate() {
                if cm.is_zero() {
                    continue;
                }
                for (r, cr) in self.basis_bracket(a, m).iter().enumerate() {
                    out[r].add_mul(cm, cr);
                }
            }
        }
        out
    }

    /// Human-readable basis triple, e.g. `(X, X1, X2)`.
    pub fn triple_name(&self, (i, j, k): (usize, usize, usize)) -> String {
        format!("({}, {}, {})", self.names[i], self.names[j], self.names[k])
    }

    /// `[U, V]` as a subspace.
    pub fn product(&self, u: &Subspace<F>, v: &Subspace<F>) -> Subspace<F> {
        let mut e = Echelon::new(self.n);
        for x in u.basis() {
            for y in v.basis() {
                e.insert(self.br(x, y));
            }
        }
        Subspace::span(self.n, e.rref_rows())
    }

    pub fn full(&self) -> Subspace<F> {
        Subspace::full(self.n)
    }

    pub fn derived_series(&self) -> SeriesChain<F> {
        let mut terms = vec![self.full()];
        loop {
            let last = terms.last().unwrap();
            if last.dim() == 0 {
                break;
            }
            let next = self.product(last, last);
            if &next == last {
                break;
            }
            terms.push(next);
        }
        SeriesChain { terms }
    }

    pub fn lower_central_series(&self) -> SeriesChain<F> {
        let full = self.full();
        let mut terms = vec![full.clone()];
        loop {
            let last = terms.last().unwrap();
            if last.dim() == 0 {
                break;
            }
            let next = self.product(&full, last);
            if &next == last {
                break;
            }
            terms.push(next);
        }
        SeriesChain { terms }
    }

    /// `Z_0 = 0`, `Z_{i+1} = {x : [x, L] ⊆ Z_i}`, until stable.
    pub fn upper_central_series(&self) -> SeriesChain<F> {
        let mut terms = vec![Subspace::zero(self.n)];
        loop {
            let last = terms.last().unwrap();
            let next = self.preimage_of_center_mod(last);
            if &next == last {
                break;
            }
            terms.push(next);
        }
        SeriesChain { terms }
    }

    fn preimage_of_center_mod(&self, z: &Subspace<F>) -> Subspace<F> {
        // x with [x, e_j] ∈ z for every j: project by the annihilator of z
        let ann = z.annihilator();
        let n = self.n;
        let mut e = Echelon::new(n);
        for j in 0..n {
            for f in ann.basis() {
                // f · [x, e_j] = Σ_i x_i Σ_k f_k c_{ij}^k
                let row: Vec<F> = (0..n)
                    .map(|i| {
                        let mut s = F::zero();
                        for (k, fk) in f.iter().enumerate() {
                            s.add_mul(fk, self.c(i, j, k));
                        }
                        s
                    })
                    .collect();
                e.insert(row);
            }
        }
        e.kernel()
    }

    /// `{x : [x, u] = 0 for all u ∈ U}`.
    pub fn centralizer(&self, u: &Subspace<F>) -> Subspace<F> {
        let n = self.n;
        let mut e = Echelon::new(n);
        for v in u.basis() {
            // [x, v] = -ad(v) x
            let m = self.ad(v);
            for r in 0..n {
                e.insert(m.row_vec(r));
            }
        }
        e.kernel()
    }

    pub fn center(&self) -> Subspace<F> {
        self.centralizer(&self.full())
    }

    pub fn is_ideal(&self, u: &Subspace<F>) -> bool {
        u.contains_space(&self.product(&self.full(), u))
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().dim() == 0
    }

    pub fn is_nilpotent_algebra(&self) -> bool {
        self.lower_central_series().last().dim() == 0
    }

    /// Gram matrix of the Killing form on the basis.
    pub fn killing_form(&self) -> Matrix<F> {
        // tr(ad e_i ad e_j) = Σ_{m,k} c(i,m,k) c(j,k,m)
        let n = self.n;
        let mut k = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut t = F::zero();
                for m in 0..n {
                    for l in 0..n {
                        let a = self.c(i, m, l);
                        if !a.is_zero() {
                            let b = self.c(j, l, m);
                            if !b.is_zero() {
                                t.add_mul(a, b);
                            }
                        }
                    }
                }
                k[(i, j)] = t.clone();
                k[(j, i)] = t;
            }
        }
        k
    }

    pub fn killing_rank(&self) -> usize {
        let k = self.killing_form();
        rank_of_rows(self.n, &k.to_rows())
    }

    /// Structure constants in the basis `e'_i = Σ_j P_ij e_j`.
    pub fn change_basis(&self, p: &Matrix<F>) -> Result<Self, Error> {
        let n = self.n;
        if p.rows() != n || p.cols() != n {
            return Err(Error::Dimension(format!("basis change must be {n}x{n}")));
        }
        let pinv = p.inverse()?;
        // t[i][b][m] = Σ_a P_ia c_ab^m
        let mut t = vec![F::zero(); n * n * n];
        for i in 0..n {
            for a in 0..n {
                let pia = &p[(i, a)];
                if pia.is_zero() {
                    continue;
                }
                for b in 0..n {
                    for m in 0..n {
                        let c = self.c(a, b, m);
                        if !c.is_zero() {
                            t[(i * n + b) * n + m].add_mul(pia, c);
                        }
                    }
                }
            }
        }
        // u[i][j][m] = Σ_b P_jb t[i][b][m]
        let mut u = vec![F::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for b in 0..n {
                    let pjb = &p[(j, b)];
                    if pjb.is_zero() {
                        continue;
                    }
                    for m in 0..n {
                        let tv = &t[(i * n + b) * n + m];
                        if !tv.is_zero() {
                            u[(i * n + j) * n + m].add_mul(pjb, tv);
                        }
                    }
                }
            }
        }
        // c'[i][j][k] = Σ_m u[i][j][m] (P⁻¹)_mk
        let mut c = vec![F::zero(); n * n * n];
        for ij in 0..n * n {
            for m in 0..n {
                let uv = &u[ij * n + m];
                if uv.is_zero() {
                    continue;
                }
                for k in 0..n {
                    c[ij * n + k].add_mul(uv, &pinv[(m, k)]);
                }
            }
        }
        Ok(LieAlgebra { n, c, label: self.label.clone(), names: self.names.clone() })
    }

    fn derivation_rows(&self) -> Vec<Vec<F>> {
        derivation_system(self.n, F::zero(), |i, j, k| self.c(i, j, k).clone())
    }

    /// Structure constants times a common denominator.
    fn integer_tensor(&self) -> Option<Vec<BigInt>> {
        use num_integer::Integer;
        let qs: Vec<crate::Q> = self.c.iter().map(|x| x.to_q()).collect::<Option<_>>()?;
        let l = qs.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
        Some(qs.iter().map(|c| c.numer() * (&l / c.denom())).collect())
    }

    /// Rank of a linear system built from the structure constants, by
    /// integer elimination when the constants are rational.
    fn system_rank(
        &self,
        build: IntSystem,
        exact: impl FnOnce() -> Vec<Vec<F>>,
    ) -> usize {
        let n = self.n;
        let Some(t) = self.integer_tensor() else {
            return rank_of_rows(n * n, &exact());
        };
        integer_rank(n * n, build(n, BigInt::from(0), &|i, j, k| t[(i * n + j) * n + k].clone()))
    }

    /// Basis of the derivation algebra (column-action matrices).
    pub fn derivation_space(&self) -> Vec<Matrix<F>> {
        let n = self.n;
        solution_matrices(n, &self.derivation_rows())
    }

    pub fn derivation_dim(&self) -> usize {
        self.n * self.n - self.system_rank(|n, z, c| derivation_system(n, z, c), || self.derivation_rows())
    }

    /// Whether the column-action matrix `d` satisfies the Leibniz rule.
    pub fn is_derivation(&self, d: &Matrix<F>) -> bool {
        let n = self.n;
        for a in 0..n {
            for b in a + 1..n {
                let lhs = d.apply(self.basis_bracket(a, b));
                let x = self.br(&d.col_vec(a), &unit(n, b));
                let y = self.br(&unit(n, a), &d.col_vec(b));
                if lhs.iter().zip(x.iter().zip(&y)).any(|(l, (p, q))| l.clone() != p.clone() + q.clone()) {
                    return false;
                }
            }
        }
        true
    }

    fn centroid_rows(&self) -> Vec<Vec<F>> {
        centroid_system(self.n, F::zero(), |i, j, k| self.c(i, j, k).clone())
    }

    /// Basis of the centroid (column-action matrices commuting with every
    /// `ad x`).
    pub fn centroid(&self) -> Vec<Matrix<F>> {
        solution_matrices(self.n, &self.centroid_rows())
    }

    pub fn centroid_dim(&self) -> usize {
        self.n * self.n - self.system_rank(|n, z, c| centroid_system(n, z, c), || self.centroid_rows())
    }

    /// Whether `phi` satisfies `φ[x,y] = [φx,y] = [x,φy]` on basis pairs.
    pub fn is_centroid_element(&self, phi: &Matrix<F>) -> bool {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let lhs = phi.apply(self.basis_bracket(a, b));
                if lhs != self.br(&phi.col_vec(a), &unit(n, b)) || lhs != self.br(&unit(n, a), &phi.col_vec(b)) {
                    return false;
                }
            }
        }
        true
    }

    /// Nilradical of a solvable algebra: the ideal of ad-nilpotent elements.
    ///
    /// It is `[L,L] + {v ∈ W : tr(ad(x)^{k-1} ad v) = 0}` for a complement `W`
    /// of `[L,L]` and any `x ∈ W` separating the weights; the conditions are
    /// imposed for enough points on the moment curve to include such an `x`.
    pub fn nilradical(&self) -> Subspace<F> {
        let n = self.n;
        let d = self.product(&self.full(), &self.full());
        let w: Vec<Vec<F>> = complement(&d);
        if w.is_empty() {
            return d;
        }
        let m = w.len();
        let hyperplanes = n + n * (n - 1) / 2;
        let points = hyperplanes * m.saturating_sub(1).max(1) + 1;
        let ads: Vec<Matrix<F>> = w.iter().map(|v| self.ad(v)).collect();
        let mut e = Echelon::new(m);
        for t in 0..points {
            let mut x = vec![F::zero(); n];
            let mut tp = F::one();
            let tv = F::from_i64(t as i64);
            for v in &w {
                for (xi, vi) in x.iter_mut().zip(v) {
                    xi.add_mul(&tp, vi);
                }
                tp = tp.mul_ref(&tv);
            }
            let adx = self.ad(&x);
            let mut pw = Matrix::identity(n);
            for _ in 0..n {
                let row: Vec<F> = ads.iter().map(|a| pw.dot(a).trace()).collect();
                e.insert(row);
                pw = pw.dot(&adx);
            }
            if e.rank() == m {
                break;
            }
        }
        let sol = e.kernel();
        let extra = sol.basis().iter().map(|coef| {
            let mut v = vec![F::zero(); n];
            for (c, wv) in coef.iter().zip(&w) {
                for (vi, wi) in v.iter_mut().zip(wv) {
                    vi.add_mul(c, wi);
                }
            }
            v
        });
        Subspace::span(n, d.basis().iter().cloned().chain(extra))
    }

    /// Dims of `N ⊇ [N,N] ⊇ [N,[N,N]] ⊇ …` for the nilradical `N`, stopping at
    /// the first repeat or at 0.
    pub fn nilradical_lower_central_dims(&self) -> Vec<usize> {
        let nil = self.nilradical();
        let mut dims = vec![nil.dim()];
        let mut cur = nil.clone();
        while cur.dim() > 0 {
            let next = self.product(&nil, &cur);
            if next.dim() == cur.dim() {
                break;
            }
            dims.push(next.dim());
            cur = next;
        }
        dims
    }

    pub fn fingerprint(&self) -> Fingerprint {
        Fingerprint {
            dim: self.n,
            derived: self.derived_series().dims(),
            lower_central: self.lower_central_series().dims(),
            center: self.center().dim(),
            centroid: self.centroid_dim(),
            killing_rank: self.killing_rank(),
            derivations: self.derivation_dim(),
        }
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.n, other.n);
        let n = a + b;
        let mut l = Self::abelian(n, format!("{}+{}", self.label, other.label));
        for i in 0..a {
            for j in 0..a {
                for k in 0..a {
                    let ix = l.idx(i, j, k);
                    l.c[ix] = self.c(i, j, k).clone();
                }
            }
        }
        for i in 0..b {
            for j in 0..b {
                for k in 0..b {
                    let ix = l.idx(a + i, a + j, a + k);
                    l.c[ix] = other.c(i, j, k).clone();
                }
            }
        }
        l
    }
}

impl<F: Factorable> LieAlgebra<F> {
    /// Decide decomposability through the centroid.
    ///
    /// Modulo its radical `J = {x : tr(xy) = 0 for all y}` the centroid `Γ`
    /// is semisimple; `Γ/J = K` means indecomposable. Otherwise an idempotent
    /// is built from a coprime splitting of the minimal polynomial of some
    /// element. When every tried element has a minimal polynomial that does
    /// not split over K, the verdict is indecomposable over K only.
    pub fn is_decomposable(&self) -> DecompositionVerdict<F> {
        let gamma = self.centroid();
        let r = gamma.len();
        let mut gram = Matrix::zeros(r, r);
        for a in 0..r {
            for b in a..r {
                let t = gamma[a].dot(&gamma[b]).trace();
                gram[(a, b)] = t.clone();
                gram[(b, a)] = t;
            }
        }
        if gram.rank() <= 1 {
            return DecompositionVerdict::Indecomposable;
        }
        let n = self.n;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut candidates: Vec<Matrix<F>> = gamma.clone();
        for _ in 0..24 {
            let mut x = Matrix::zeros(n, n);
            for g in &gamma {
                let c = F::from_i64(rng.gen_range(-3..=3));
                x = x.add(&g.scale(&c));
            }
            candidates.push(x);
        }
        let mut unsplit: Option<Poly<F>> = None;
        for x in candidates {
            let m = minimal_polynomial(&x);
            let sf = m.squarefree();
            if sf.degree().unwrap_or(0) < 2 {
                continue;
            }
            let Some(f) = F::split_factor(&sf) else {
                unsplit.get_or_insert(sf);
                continue;
            };
            let dm = m.degree().unwrap();
            let g = m.gcd(&f.pow(dm));
            let h = m.divrem(&g).0;
            if g.degree() == Some(0) || h.degree() == Some(0) {
                continue;
            }
            let (one, s, _) = g.ext_gcd(&h);
            debug_assert_eq!(one.degree(), Some(0));
            let e = s.mul(&g).eval_matrix(&x);
            let id = Matrix::identity(n);
            let first = column_space(&e);
            let second = column_space(&id.sub(&e));
            let (first, second) = if first.dim() <= second.dim() { (first, second) } else { (second, first) };
            if self.is_direct_decomposition(&first, &second) {
                return DecompositionVerdict::Decomposable { first, second };
            }
        }
        match unsplit {
            Some(factor) => DecompositionVerdict::IndecomposableOverKOnly { factor },
            None => DecompositionVerdict::Indecomposable,
        }
    }

    /// Whether `L = I ⊕ J` with `I`, `J` nonzero ideals and `[I, J] = 0`.
    pub fn is_direct_decomposition(&self, i: &Subspace<F>, j: &Subspace<F>) -> bool {
        i.dim() > 0
            && j.dim() > 0
            && i.dim() + j.dim() == self.n
            && i.intersect(j).dim() == 0
            && self.is_ideal(i)
            && self.is_ideal(j)
            && self.product(i, j).dim() == 0
    }
}

/// Basis of `{X : Σ row·vec(X) = 0}` reshaped into `n×n` matrices.
fn solution_matrices<F: Scalar>(n: usize, rows: &[Vec<F>]) -> Vec<Matrix<F>> {
    let mut e = Echelon::new(n * n);
    for r in rows {
        e.insert(r.clone());
    }
    e.kernel()
        .basis()
        .iter()
        .map(|v| Matrix::from_fn(n, n, |i, j| v[i * n + j].clone()))
        .collect()
}

/// Coordinate vectors completing `s` to a basis (non-pivot axes).
pub fn complement<F: Scalar>(s: &Subspace<F>) -> Vec<Vec<F>> {
    let n = s.ambient();
    let pivots: Vec<usize> =
        s.basis().iter().map(|v| v.iter().position(|x| !x.is_zero()).unwrap()).collect();
    (0..n).filter(|i| !pivots.contains(i)).map(|i| unit(n, i)).collect()
}

/// Minimal polynomial of a square matrix (monic).
pub fn minimal_polynomial<F: Scalar>(m: &Matrix<F>) -> Poly<F> {
    let n = m.rows();
    let flat = |a: &Matrix<F>| -> Vec<F> { a.to_rows().into_iter().flatten().collect() };
    let mut powers = vec![Matrix::identity(n)];
    loop {
        let k = powers.len();
        let next = powers[k - 1].dot(m);
        // solve Σ c_i m^i = m^k
        let coeffs = Matrix::from_fn(n * n, k, |r, c| flat(&powers[c])[r].clone());
        let rhs = flat(&next);
        let (sol, _) = crate::matrix::solve_linear(&coeffs, &rhs).unwrap();
        if let Some(c) = sol {
            let mut p: Vec<F> = c.into_iter().map(|x| -x).collect();
            p.push(F::one());
            return Poly::new(p);
        }
        powers.push(next);
    }
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

/// Decreasing chain of subspaces, starting at the full space. The last term
/// is either zero or equal to its own successor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesChain<F> {
    terms: Vec<Subspace<F>>,
}

impl<F: Scalar> SeriesChain<F> {
    pub fn terms(&self) -> &[Subspace<F>] {
        &self.terms
    }
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(|s| s.dim()).collect()
    }
    pub fn last(&self) -> &Subspace<F> {
        self.terms.last().unwrap()
    }
}

/// Outcome of the decomposability test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DecompositionVerdict<F> {
    /// Witness ideals with `L = first ⊕ second`, `first` the smaller one.
    Decomposable { first: Subspace<F>, second: Subspace<F> },
    Indecomposable,
    /// The centroid is larger than K modulo its radical but no splitting was
    /// found over K; `factor` is an unsplit minimal polynomial factor.
    IndecomposableOverKOnly { factor: Poly<F> },
}

impl<F: Scalar> DecompositionVerdict<F> {
    pub fn name(&self) -> &'static str {
        match self {
            DecompositionVerdict::Decomposable { .. } => "decomposable",
            DecompositionVerdict::Indecomposable => "indecomposable",
            DecompositionVerdict::IndecomposableOverKOnly { .. } => "indecomposable_over_K_only",
        }
    }
}

/// Basis-independent invariants.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub derived: Vec<usize>,
    pub lower_central: Vec<usize>,
    pub center: usize,
    pub centroid: usize,
    pub killing_rank: usize,
    pub derivations: usize,
}

impl Fingerprint {
    /// First differing field as `(name, left, right)`.
    pub fn first_difference(&self, o: &Fingerprint) -> Option<(&'static str, String, String)> {
        fn v<T: fmt::Debug>(x: &T) -> String {
            format!("{x:?}")
        }
        if self.dim != o.dim {
            return Some(("dimension", v(&self.dim), v(&o.dim)));
        }
        if self.derived != o.derived {
            return Some(("derived series dims", v(&self.derived), v(&o.derived)));
        }
        if self.lower_central != o.lower_central {
            return Some(("lower central series dims", v(&self.lower_central), v(&o.lower_central)));
        }
        if self.center != o.center {
            return Some(("center dim", v(&self.center), v(&o.center)));
        }
        if self.centroid != o.centroid {
            return Some(("centroid dim", v(&self.centroid), v(&o.centroid)));
        }
        if self.killing_rank != o.killing_rank {
            return Some(("Killing form rank", v(&self.killing_rank), v(&o.killing_rank)));
        }
        if self.derivations != o.derivations {
            return Some(("derivation algebra dim", v(&self.derivations), v(&o.derivations)));
        }
        None
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dimension: {}", self.dim)?;
        writeln!(f, "derived series dims: {:?}", self.derived)?;
        writeln!(f, "lower central series dims: {:?}", self.lower_central)?;
        writeln!(f, "center dim: {}", self.center)?;
        writeln!(f, "centroid dim: {}", self.centroid)?;
        writeln!(f, "Killing form rank: {}", self.killing_rank)?;
        write!(f, "derivation algebra dim: {}", self.derivations)
    }
}

impl<F: Scalar> fmt::Display for LieAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (dim {})", self.label, self.n)?;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let v = self.basis_bracket(i, j);
                if v.iter().all(|x| x.is_zero()) {
                    continue;
                }
                writeln!(f, "  [{}, {}] = {}", self.names[i], self.names[j], fmt_vector(v, &self.names))?;
            }
        }
        Ok(())
    }
}

/// Linear combination text such as `2*X1 - X3`.
pub fn fmt_vector<F: Scalar>(v: &[F], names: &[String]) -> String {
    let mut out = String::new();
    for (x, name) in v.iter().zip(names) {
        if x.is_zero() {
            continue;
        }
        let s = fmt_scalar(x);
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
            _ => (false, s),
        };
        let term = if body == "1" { name.clone() } else { format!("{body}*{name}") };
        if out.is_empty() {
            out = if neg { format!("-{term}") } else { term };
        } else {
            out += if neg { " - " } else { " + " };
            out += &term;
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Linear conditions on `D` (variable `(i, j)` at `i·n + j`, column action)
/// for `D[e_a, e_b] = [D e_a, e_b] + [e_a, D e_b]`.
/// Builds a linear system from structure constants given as integers.
type IntSystem = fn(usize, BigInt, &dyn Fn(usize, usize, usize) -> BigInt) -> Vec<Vec<BigInt>>;

fn derivation_system<T>(n: usize, zero: T, c: impl Fn(usize, usize, usize) -> T) -> Vec<Vec<T>>
where
    T: Clone + PartialEq + std::ops::AddAssign + std::ops::SubAssign,
{
    let mut rows = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for k in 0..n {
                let mut row = vec![zero.clone(); n * n];
                for m in 0..n {
                    let v = c(a, b, m);
                    if v != zero {
                        row[k * n + m] += v;
                    }
                }
                for i in 0..n {
                    let v = c(i, b, k);
                    if v != zero {
                        row[i * n + a] -= v;
                    }
                    let v = c(a, i, k);
                    if v != zero {
                        row[i * n + b] -= v;
                    }
                }
                if row.iter().any(|x| *x != zero) {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// Linear conditions for `φ[e_a, e_b] = [φ e_a, e_b]` over all ordered pairs.
fn centroid_system<T>(n: usize, zero: T, c: impl Fn(usize, usize, usize) -> T) -> Vec<Vec<T>>
where
    T: Clone + PartialEq + std::ops::AddAssign + std::ops::SubAssign,
{
    let mut rows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                let mut row = vec![zero.clone(); n * n];
                for m in 0..n {
                    let v = c(a, b, m);
                    if v != zero {
                        row[k * n + m] += v;
                    }
                }
                for i in 0..n {
                    let v = c(i, b, k);
                    if v != zero {
                        row[i * n + a] -= v;
                    }
                }
                if row.iter().any(|x| *x != zero) {
                    rows.push(row);
                }
            }
        }
    }
    rows
}
