//! Two-generator extensions of a 5-dimensional nilpotent algebra.
//!
//! Structure matrices act by rows: `[X, X_i] = Σ_j A_ij X_j`, so `A` is the
//! transpose of the column-action matrix of `ad X` on the nilradical. The
//! assembled basis is `(X1, …, X5, X, Y)`.

use serde::Serialize;

use crate::lie::{fmt_vector, LieAlgebra};
use crate::matrix::{is_nilpotent, trace_power, unit, Matrix};
use crate::poly::{real_root_exists, Poly};
use crate::scalar::{Scalar, Q};
use crate::Error;

/// Nilradical plus structure matrices `A`, `B` and `[X, Y] = Σ σ_j X_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtensionSpec<F> {
    pub nilradical: LieAlgebra<F>,
    pub a: Matrix<F>,
    pub b: Matrix<F>,
    pub sigma: Vec<F>,
}

/// Which field the nil-independence question is asked over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Semantics {
    /// Only real pencil parameters count.
    RealLike,
    /// Any complex pencil parameter counts.
    ComplexLike,
}

/// Change of the two outer generators:
/// `X' = T11 X + T12 Y + Σ s1j Xj`, `Y' = T21 X + T22 Y + Σ s2j Xj`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct XYChange<F> {
    pub t: Matrix<F>,
    pub s: Matrix<F>,
}

impl<F: Scalar> XYChange<F> {
    pub fn new(t: Matrix<F>, s: Matrix<F>) -> Self {
        XYChange { t, s }
    }

    /// Pure mixing of `X`, `Y` without shifts.
    pub fn mixing(t: Matrix<F>) -> Self {
        let k = 5;
        XYChange { t, s: Matrix::zeros(2, k) }
    }
}

/// Names of the assembled basis.
pub fn assembled_names() -> Vec<String> {
    ["X1", "X2", "X3", "X4", "X5", "X", "Y"].iter().map(|s| s.to_string()).collect()
}

/// `a_{X_i} = ad(X_i)ᵀ` on the nilradical, one per basis element.
pub fn inner_derivation_matrices<F: Scalar>(n: &LieAlgebra<F>) -> Vec<Matrix<F>> {
    (0..n.dim()).map(|i| n.ad_basis(i).transpose()).collect()
}

/// Whether `[X, X_i] = Σ_j D_ij X_j` is compatible with Jacobi on
/// `(X, X_i, X_j)`, i.e. `Dᵀ` is a derivation.
pub fn is_structure_derivation<F: Scalar>(n: &LieAlgebra<F>, d: &Matrix<F>) -> bool {
    d.rows() == n.dim() && d.cols() == n.dim() && n.is_derivation(&d.transpose())
}

/// Pairs `(i, j)` (0-based) where the Jacobi identity on `(X, X_i, X_j)`
/// fails for the row-convention matrix `d`.
pub fn structure_derivation_violations<F: Scalar>(n: &LieAlgebra<F>, d: &Matrix<F>) -> Vec<(usize, usize)> {
    let dt = d.transpose();
    let k = n.dim();
    let mut out = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            let lhs = dt.apply(n.basis_bracket(a, b));
            let x = n.br(&dt.col_vec(a), &unit(k, b));
            let y = n.br(&unit(k, a), &dt.col_vec(b));
            if lhs.iter().zip(x.iter().zip(&y)).any(|(l, (p, q))| l.clone() != p.clone() + q.clone()) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Result of a single named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

impl Check {
    fn pass(name: &str) -> Self {
        Check { name: name.into(), passed: true, detail: None }
    }
    fn fail(name: &str, detail: String) -> Self {
        Check { name: name.into(), passed: false, detail: Some(detail) }
    }
    fn from(name: &str, ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(name)
        } else {
            Self::fail(name, detail())
        }
    }
}

/// Outcome of [`check_compatibility`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub checks: Vec<Check>,
}

impl CompatibilityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// First failing check detail.
    pub fn first_failure(&self) -> Option<String> {
        self.checks.iter().find(|c| !c.passed).map(|c| {
            format!("{}: {}", c.name, c.detail.clone().unwrap_or_default())
        })
    }
}

impl<F: Scalar> ExtensionSpec<F> {
    pub fn new(nilradical: LieAlgebra<F>, a: Matrix<F>, b: Matrix<F>, sigma: Vec<F>) -> Result<Self, Error> {
        let k = nilradical.dim();
        for (m, name) in [(&a, "A"), (&b, "B")] {
            if m.rows() != k || m.cols() != k {
                return Err(Error::Dimension(format!("{name} must be {k}x{k}")));
            }
        }
        if sigma.len() != k {
            return Err(Error::Dimension(format!("sigma must have {k} entries")));
        }
        Ok(ExtensionSpec { nilradical, a, b, sigma })
    }

    fn k(&self) -> usize {
        self.nilradical.dim()
    }
}

/// Check derivation conditions for `A`, `B`, the commutator relation and
/// the Jacobi identities on `(X, Y, X_i)`.
///
/// With rows as structure matrices the commutator relation reads
/// `[A, B] = −Σ σ_i a_{X_i}`.
pub fn check_compatibility<F: Scalar>(spec: &ExtensionSpec<F>) -> CompatibilityReport {
    let n = &spec.nilradical;
    let names: Vec<String> = (1..=spec.k()).map(|i| format!("X{i}")).collect();
    let mut checks = Vec::new();
    for (m, label, gen) in [(&spec.a, "A is a derivation", "X"), (&spec.b, "B is a derivation", "Y")] {
        let bad = structure_derivation_violations(n, m);
        checks.push(Check::from(label, bad.is_empty(), || {
            let (i, j) = bad[0];
            format!("Jacobi fails on ({gen}, {}, {})", names[i], names[j])
        }));
    }
    let inner = inner_derivation_matrices(n);
    let mut rhs = Matrix::zeros(spec.k(), spec.k());
    for (s, ax) in spec.sigma.iter().zip(&inner) {
        rhs = rhs.sub(&ax.scale(s));
    }
    let comm = spec.a.commutator(&spec.b);
    checks.push(Check::from("[A,B] = -sum sigma_i a_Xi", comm == rhs, || {
        let (r, c) = (0..spec.k())
            .flat_map(|r| (0..spec.k()).map(move |c| (r, c)))
            .find(|&(r, c)| comm[(r, c)] != rhs[(r, c)])
            .unwrap();
        format!("entry ({}, {}) differs", r + 1, c + 1)
    }));
    // Jacobi (X, Y, X_i) on the assembled tensor, which does not need Jacobi elsewhere
    let l = raw_assemble(spec);
    let bad: Vec<usize> = (0..spec.k())
        .filter(|&i| !l.jacobiator(spec.k(), spec.k() + 1, i).iter().all(|x| x.is_zero()))
        .collect();
    checks.push(Check::from("Jacobi on (X, Y, Xi)", bad.is_empty(), || {
        format!("Jacobi fails on (X, Y, {})", names[bad[0]])
    }));
    CompatibilityReport { checks }
}

fn raw_assemble<F: Scalar>(spec: &ExtensionSpec<F>) -> LieAlgebra<F> {
    let k = spec.k();
    let (x, y) = (k, k + 1);
    let mut br: Vec<(usize, usize, Vec<(usize, F)>)> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let v = spec.nilradical.basis_bracket(i, j);
            br.push((i, j, v.iter().cloned().enumerate().filter(|(_, c)| !c.is_zero()).collect()));
        }
        br.push((x, i, (0..k).map(|j| (j, spec.a[(i, j)].clone())).filter(|(_, c)| !c.is_zero()).collect()));
        br.push((y, i, (0..k).map(|j| (j, spec.b[(i, j)].clone())).filter(|(_, c)| !c.is_zero()).collect()));
    }
    br.push((x, y, spec.sigma.iter().cloned().enumerate().filter(|(_, c)| !c.is_zero()).collect()));
    let label = format!("{} extension", spec.nilradical.label());
    let mut names: Vec<String> = (1..=k).map(|i| format!("X{i}")).collect();
    names.push("X".into());
    names.push("Y".into());
    LieAlgebra::from_brackets(k + 2, label, &br).with_names(names)
}

/// Assemble the algebra on `(X1..X5, X, Y)`; refuses incompatible data.
pub fn assemble<F: Scalar>(spec: &ExtensionSpec<F>) -> Result<LieAlgebra<F>, Error> {
    let report = check_compatibility(spec);
    if !report.passed() {
        return Err(Error::Incompatible(report.first_failure().unwrap()));
    }
    let l = raw_assemble(spec);
    if let Some(&t) = l.jacobi_check().first() {
        return Err(Error::Incompatible(format!("Jacobi fails on {}", l.triple_name(t))));
    }
    Ok(l)
}

/// Values of `t ↦ tr((tA + B)^k)` for `k = 1..n` as polynomials in `t`,
/// recovered by exact interpolation.
pub fn pencil_traces<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>) -> Vec<Poly<F>> {
    let n = a.rows();
    (1..=n)
        .map(|k| {
            let xs: Vec<F> = (0..=k as i64).map(F::from_i64).collect();
            let ys: Vec<F> = xs
                .iter()
                .map(|t| trace_power(&a.scale(t).add(b), k).unwrap())
                .collect();
            interpolate(&xs, &ys)
        })
        .collect()
}

/// Lagrange interpolation through distinct nodes.
pub fn interpolate<F: Scalar>(xs: &[F], ys: &[F]) -> Poly<F> {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = Poly::constant(F::one());
        let mut denom = F::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&Poly::linear_root(xj.clone()));
                denom *= xi.clone() - xj.clone();
            }
        }
        acc = acc.add(&basis.scale(&(yi.clone() / denom)));
    }
    acc
}

/// Whether no nonzero `(α, β)` makes `αA + βB` nilpotent.
///
/// `(1, 0)` is tested directly; the line `β = 1` is reduced to the gcd of the
/// trace polynomials. Under real semantics a common root only counts when it
/// is real, which for Gaussian data means a common rational-real root of
/// the real and imaginary parts.
pub fn nil_independent<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>, semantics: Semantics) -> bool {
    if is_nilpotent(a).unwrap() {
        return false;
    }
    let traces = pencil_traces(a, b);
    let mut g = Poly::zero();
    for p in &traces {
        g = g.gcd(p);
    }
    if g.is_zero() {
        // every trace vanishes identically: the whole line is nilpotent
        return false;
    }
    if g.degree() == Some(0) {
        return true;
    }
    match semantics {
        Semantics::ComplexLike => false,
        Semantics::RealLike => {
            let re = Poly::<Q>::new(g.coeffs().iter().map(|c| c.re()).collect());
            let im = Poly::<Q>::new(g.coeffs().iter().map(|c| c.im()).collect());
            let h = if im.is_zero() { re.monic() } else { re.gcd(&im) };
            if h.is_zero() || h.degree() == Some(0) {
                return true;
            }
            !real_root_exists(&h).unwrap()
        }
    }
}

/// Outcome of [`verify_nilradical`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilradicalReport {
    pub checks: Vec<Check>,
    /// Dimension of the nilradical computed directly in the assembled algebra.
    pub computed_dim: usize,
}

impl NilradicalReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Check that the given nilradical really is the nilradical of the assembled
/// algebra.
pub fn verify_nilradical<F: Scalar>(spec: &ExtensionSpec<F>, semantics: Semantics) -> Result<NilradicalReport, Error> {
    let l = assemble(spec)?;
    let k = spec.k();
    let mut checks = Vec::new();
    checks.push(Check::from("N is nilpotent", spec.nilradical.is_nilpotent_algebra(), || {
        "lower central series does not reach 0".into()
    }));
    let span = crate::matrix::Subspace::axes(k + 2, &(0..k).collect::<Vec<_>>());
    let derived = l.product(&l.full(), &l.full());
    checks.push(Check::from("brackets land in N", span.contains_space(&derived), || {
        "[L, L] is not contained in span(X1..X5)".into()
    }));
    checks.push(Check::from("A, B nil-independent", nil_independent(&spec.a, &spec.b, semantics), || {
        "a nonzero combination of A and B is nilpotent".into()
    }));
    let (x, y) = (unit::<F>(k + 2, k), unit::<F>(k + 2, k + 1));
    let combos: [(&str, i64, i64); 6] =
        [("X", 1, 0), ("Y", 0, 1), ("X+Y", 1, 1), ("X-Y", 1, -1), ("X+2Y", 1, 2), ("X-2Y", 1, -2)];
    let mut nilpotent_probes = Vec::new();
    for (name, p, q) in combos {
        let v: Vec<F> = x
            .iter()
            .zip(&y)
            .map(|(a, b)| a.mul_ref(&F::from_i64(p)) + b.mul_ref(&F::from_i64(q)))
            .collect();
        if is_nilpotent(&l.ad(&v)).unwrap() {
            nilpotent_probes.push(name);
        }
    }
    checks.push(Check::from("ad probes non-nilpotent", nilpotent_probes.is_empty(), || {
        format!("ad({}) is nilpotent", nilpotent_probes.join(", ad("))
    }));
    let computed_dim = l.nilradical().dim();
    checks.push(Check::from("nilradical dimension", computed_dim == k, || {
        format!("computed nilradical has dimension {computed_dim}")
    }));
    Ok(NilradicalReport { checks, computed_dim })
}

/// `2·dim N ≥ dim L + dim Z(L)`.
pub fn mubarakzyanov_check<F: Scalar>(l: &LieAlgebra<F>, nil_dim: usize) -> bool {
    2 * nil_dim >= l.dim() + l.center().dim()
}

/// A transformed spec together with the basis change that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transformed<F> {
    pub spec: ExtensionSpec<F>,
    /// Rows give the new basis in terms of the old assembled basis.
    pub basis_change: Matrix<F>,
}

impl<F: Scalar> Transformed<F> {
    /// Isomorphism from the old assembled algebra to the new one, as a
    /// column-action matrix (`(P⁻¹)ᵀ`).
    pub fn certificate(&self) -> Matrix<F> {
        certificate_for_basis_change(&self.basis_change).unwrap()
    }
}

/// The map `L → change_basis(L, P)` as a column-action matrix.
pub fn certificate_for_basis_change<F: Scalar>(p: &Matrix<F>) -> Result<Matrix<F>, Error> {
    Ok(p.inverse()?.transpose())
}

/// Re-read an extension spec from an assembled algebra written in a basis
/// whose first `k` vectors span the nilradical.
fn read_back<F: Scalar>(l: &LieAlgebra<F>, k: usize) -> Result<ExtensionSpec<F>, Error> {
    let (x, y) = (k, k + 1);
    let mut br = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let v = l.basis_bracket(i, j);
            if v[k..].iter().any(|c| !c.is_zero()) {
                return Err(Error::Incompatible("nilradical not preserved".into()));
            }
            br.push((i, j, v[..k].iter().cloned().enumerate().filter(|(_, c)| !c.is_zero()).collect()));
        }
    }
    let mut nil_names = l.names()[..k].to_vec();
    if nil_names.iter().any(|s| s.starts_with('X')) {
        nil_names = (1..=k).map(|i| format!("x{i}")).collect();
    }
    let nil = LieAlgebra::from_brackets(k, "N", &br).with_names(nil_names);
    let read = |g: usize| -> Result<Matrix<F>, Error> {
        let rows: Vec<Vec<F>> = (0..k)
            .map(|i| {
                let v = l.basis_bracket(g, i);
                if v[k..].iter().any(|c| !c.is_zero()) {
                    Err(Error::Incompatible("outer action leaves the nilradical".into()))
                } else {
                    Ok(v[..k].to_vec())
                }
            })
            .collect::<Result<_, _>>()?;
        Matrix::from_rows(rows)
    };
    let a = read(x)?;
    let b = read(y)?;
    let s = l.basis_bracket(x, y);
    if s[k..].iter().any(|c| !c.is_zero()) {
        return Err(Error::Incompatible("[X, Y] leaves the nilradical".into()));
    }
    ExtensionSpec::new(nil, a, b, s[..k].to_vec())
}

/// Transform by a full basis change `P` of the assembled algebra that keeps
/// the nilradical span.
pub fn apply_basis_change<F: Scalar>(spec: &ExtensionSpec<F>, p: &Matrix<F>) -> Result<Transformed<F>, Error> {
    let l = assemble(spec)?;
    let lp = l.change_basis(p)?;
    let mut out = read_back(&lp, spec.k())?;
    out.nilradical = out.nilradical.with_label(spec.nilradical.label()).with_names(spec.nilradical.names().to_vec());
    let report = check_compatibility(&out);
    if !report.passed() {
        return Err(Error::Incompatible(report.first_failure().unwrap()));
    }
    Ok(Transformed { spec: out, basis_change: p.clone() })
}

/// Conjugate by an automorphism `G` of the nilradical (new basis
/// `X'_i = Σ_j G_ij X_j`), giving `A' = G A G⁻¹`, `B' = G B G⁻¹`.
pub fn apply_nilradical_automorphism<F: Scalar>(spec: &ExtensionSpec<F>, g: &Matrix<F>) -> Result<Transformed<F>, Error> {
    let k = spec.k();
    let n = &spec.nilradical;
    let moved = n.change_basis(g)?;
    if moved.tensor() != n.tensor() {
        let names = n.names();
        for i in 0..k {
            for j in i + 1..k {
                if moved.basis_bracket(i, j) != n.basis_bracket(i, j) {
                    return Err(Error::NotAutomorphism(format!(
                        "[{}, {}] would become {} instead of {}",
                        names[i],
                        names[j],
                        fmt_vector(moved.basis_bracket(i, j), names),
                        fmt_vector(n.basis_bracket(i, j), names)
                    )));
                }
            }
        }
    }
    let p = Matrix::block(g, &Matrix::zeros(k, 2), &Matrix::zeros(2, k), &Matrix::identity(2));
    apply_basis_change(spec, &p)
}

/// Shift the outer generators by nilradical elements:
/// `X' = X + Σ α_i X_i`, `Y' = Y + Σ β_i X_i`, so `A' = A + Σ α_i a_{X_i}`.
pub fn apply_inner_modification<F: Scalar>(spec: &ExtensionSpec<F>, alpha: &[F], beta: &[F]) -> Result<Transformed<F>, Error> {
    let k = spec.k();
    if alpha.len() != k || beta.len() != k {
        return Err(Error::Dimension(format!("shift vectors must have {k} entries")));
    }
    let s = Matrix::from_rows(vec![alpha.to_vec(), beta.to_vec()])?;
    apply_xy_change(spec, &XYChange::new(Matrix::identity(2), s))
}

/// Mix and shift the outer generators.
pub fn apply_xy_change<F: Scalar>(spec: &ExtensionSpec<F>, chg: &XYChange<F>) -> Result<Transformed<F>, Error> {
    let k = spec.k();
    if chg.t.rows() != 2 || chg.t.cols() != 2 || chg.s.rows() != 2 || chg.s.cols() != k {
        return Err(Error::Dimension(format!("XY change needs a 2x2 mixing and a 2x{k} shift")));
    }
    if chg.t.det().is_zero() {
        return Err(Error::Singular);
    }
    let p = Matrix::block(&Matrix::identity(k), &Matrix::zeros(k, 2), &chg.s, &chg.t);
    apply_basis_change(spec, &p)
}
