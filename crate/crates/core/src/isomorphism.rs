//! Isomorphism certificates, invariant refutation and a bounded search.
//!
//! A certificate is a column-action matrix `G` with `G[x, y]₁ = [Gx, Gy]₂`.
//! Refutation only ever uses basis-independent invariants and confirmation
//! only ever uses a verified certificate, so the search itself may be
//! heuristic.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{self, CatalogEntry, Equivalence, ParamAssignment};
use crate::lie::LieAlgebra;
use crate::matrix::{Echelon, Matrix, Subspace};
use crate::poly::{Factorable, Poly};
use crate::scalar::{fmt_scalar, qf, Scalar};
use crate::Error;

/// Default number of search nodes.
pub const DEFAULT_BUDGET: usize = 100_000;

/// An invertible matrix claimed to map `source` onto `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCertificate<F> {
    pub g: Matrix<F>,
    pub source: String,
    pub target: String,
}

impl<F: Scalar> IsoCertificate<F> {
    /// Checks that `g` is square and invertible.
    pub fn new(g: Matrix<F>, source: impl Into<String>, target: impl Into<String>) -> Result<Self, Error> {
        if !g.is_square() {
            return Err(Error::Dimension(format!("certificate is {}x{}", g.rows(), g.cols())));
        }
        if g.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(IsoCertificate { g, source: source.into(), target: target.into() })
    }

    /// Text form, readable by [`CertificateTemplate::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!("certificate\nsource {}\ntarget {}\n", self.source, self.target);
        for r in 0..self.g.rows() {
            let row: Vec<String> = self.g.row(r).iter().map(fmt_scalar).collect();
            s.push_str(&format!("row {}\n", row.join(", ")));
        }
        s
    }
}

/// Certificate file contents; rows may reference parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateTemplate {
    pub source: String,
    pub target: String,
    pub rows: Vec<Vec<catalog::Expr>>,
}

impl CertificateTemplate {
    /// Parse the line format `certificate` / `source REF` / `target REF` /
    /// `row e1, e2, ...`.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
            .filter(|(_, l)| !l.is_empty());
        let perr = |line: usize, msg: &str| Error::Parse(catalog::ParseError { line, col: 1, msg: msg.into() });
        match lines.next() {
            Some((_, "certificate")) => {}
            Some((n, _)) => return Err(perr(n, "expected 'certificate'")),
            None => return Err(perr(1, "empty certificate")),
        }
        let mut source = None;
        let mut target = None;
        let mut rows = Vec::new();
        for (n, l) in lines {
            let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
            let rest = rest.trim();
            match key {
                "source" => source = Some(rest.to_string()),
                "target" => target = Some(rest.to_string()),
                "row" => {
                    let row = rest
                        .split(',')
                        .map(|e| {
                            catalog::parse_expr(e)
                                .map_err(|pe| Error::Parse(catalog::ParseError { line: n, col: pe.col, msg: pe.msg }))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    rows.push(row);
                }
                _ => return Err(perr(n, &format!("unknown key '{key}'"))),
            }
        }
        let source = source.ok_or_else(|| perr(1, "missing 'source'"))?;
        let target = target.ok_or_else(|| perr(1, "missing 'target'"))?;
        if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
            return Err(perr(1, "certificate rows must form a square matrix"));
        }
        Ok(CertificateTemplate { source, target, rows })
    }

    /// Evaluate the rows at `env`.
    pub fn matrix<F: Scalar>(&self, env: &ParamAssignment<F>) -> Result<Matrix<F>, Error> {
        let rows = self.rows.iter().map(|r| r.iter().map(|e| e.eval(env)).collect::<Result<Vec<_>, _>>()).collect::<Result<_, _>>()?;
        Matrix::from_rows(rows)
    }

    /// Instantiate at `env` with the given endpoint labels.
    pub fn instantiate<F: Scalar>(&self, env: &ParamAssignment<F>, source: &str, target: &str) -> Result<IsoCertificate<F>, Error> {
        IsoCertificate::new(self.matrix(env)?, source, target)
    }
}

/// Exact check of `G[x, y]₁ = [Gx, Gy]₂` on all basis pairs.
pub fn verify_certificate<F: Scalar>(l1: &LieAlgebra<F>, l2: &LieAlgebra<F>, g: &Matrix<F>) -> Result<bool, Error> {
    let n = l1.dim();
    if l2.dim() != n || g.rows() != n || g.cols() != n {
        return Err(Error::Dimension(format!(
            "algebras of dims {} and {} with a {}x{} certificate",
            n,
            l2.dim(),
            g.rows(),
            g.cols()
        )));
    }
    if g.det().is_zero() {
        return Err(Error::Singular);
    }
    Ok(first_violation(l1, l2, g).is_none())
}

/// First basis pair `(i, j)` (0-based) where `G` fails to intertwine.
pub fn first_violation<F: Scalar>(l1: &LieAlgebra<F>, l2: &LieAlgebra<F>, g: &Matrix<F>) -> Option<(usize, usize)> {
    let n = l1.dim();
    let cols: Vec<Vec<F>> = (0..n).map(|j| g.col_vec(j)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = g.apply(l1.basis_bracket(i, j));
            if lhs != l2.br(&cols[i], &cols[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Outcome of an isomorphism question.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict<F> {
    Isomorphic(IsoCertificate<F>),
    Refuted { invariant: String, left: String, right: String },
    Unknown { expanded: usize },
}

impl<F: Scalar> IsoVerdict<F> {
    pub fn name(&self) -> &'static str {
        match self {
            IsoVerdict::Isomorphic(_) => "isomorphic",
            IsoVerdict::Refuted { .. } => "refuted",
            IsoVerdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, IsoVerdict::Refuted { .. })
    }
}

impl<F: Scalar> fmt::Display for IsoVerdict<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoVerdict::Isomorphic(_) => write!(f, "isomorphic (certificate verified)"),
            IsoVerdict::Refuted { invariant, left, right } => write!(f, "refuted: {invariant} {left} vs {right}"),
            IsoVerdict::Unknown { expanded } => write!(f, "unknown (budget exhausted after {expanded} nodes)"),
        }
    }
}

/// Refute by the first differing fingerprint field.
pub fn refute_by_fingerprint<F: Scalar>(l1: &LieAlgebra<F>, l2: &LieAlgebra<F>) -> IsoVerdict<F> {
    match l1.fingerprint().first_difference(&l2.fingerprint()) {
        Some((name, left, right)) => IsoVerdict::Refuted { invariant: name.into(), left, right },
        None => IsoVerdict::Unknown { expanded: 0 },
    }
}

/// Characteristic subspaces, matched by position between two algebras.
fn characteristic_subspaces<F: Scalar>(l: &LieAlgebra<F>) -> Vec<(String, Subspace<F>)> {
    let mut out = vec![("nilradical".to_string(), l.nilradical())];
    for (i, t) in l.lower_central_series().terms().iter().enumerate().skip(1) {
        out.push((format!("lower central term {i}"), t.clone()));
    }
    for (i, t) in l.derived_series().terms().iter().enumerate().skip(1) {
        out.push((format!("derived term {i}"), t.clone()));
    }
    for (i, t) in l.upper_central_series().terms().iter().enumerate().skip(1) {
        out.push((format!("upper central term {i}"), t.clone()));
    }
    let derived = l.product(&l.full(), &l.full());
    out.push(("centralizer of derived algebra".into(), l.centralizer(&derived)));
    let nil = l.nilradical();
    out.push(("centralizer of nilradical".into(), l.centralizer(&nil)));
    let n2 = l.product(&nil, &nil);
    out.push(("[N, N]".into(), n2.clone()));
    out.push(("centralizer of [N, N]".into(), l.centralizer(&n2)));
    out
}

/// Basis rows with the flag `chain[0] ⊇ chain[1] ⊇ …` spanned by trailing
/// rows.
fn adapted_basis<F: Scalar>(n: usize, chain: &[Subspace<F>]) -> Matrix<F> {
    let mut rows: Vec<Vec<F>> = Vec::new();
    let mut ech = Echelon::new(n);
    // innermost first, then extend outwards
    let full = Subspace::full(n);
    for s in chain.iter().rev().chain(std::iter::once(&full)) {
        let mut layer = Vec::new();
        for v in s.basis() {
            if ech.insert(v.clone()) {
                layer.push(v.clone());
            }
        }
        layer.extend(rows);
        rows = layer;
    }
    Matrix::from_rows(rows).unwrap()
}

/// Quadratic polynomial in the search unknowns.
#[derive(Clone, Debug)]
struct QEq<F> {
    c: F,
    lin: Vec<(usize, F)>,
    quad: Vec<(usize, usize, F)>,
}

/// Probe points in the outer coordinates for trace comparisons.
const PROBES: [(i64, i64); 8] = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (1, 3)];

struct Search<F> {
    eqs: Vec<QEq<F>>,
    nvars: usize,
    /// (row, col) of each unknown in the adapted matrix.
    slots: Vec<(usize, usize)>,
    /// Unknowns of the outer block (rows and columns below `outer`).
    outer_vars: Vec<usize>,
    /// Branching priority of each unknown: depth below the diagonal, then
    /// level of the column.
    priority: Vec<(usize, usize, usize, usize)>,
    /// Coordinates of each level of the adapted flag.
    levels: Vec<Vec<usize>>,
    outer: usize,
    /// `tr(ad(p)^k)` in the source for every probe `p` and `k = 1..n`.
    source_traces: Vec<Vec<F>>,
    n: usize,
    l1: LieAlgebra<F>,
    l2: LieAlgebra<F>,
    expanded: usize,
    budget: usize,
    shuffle: bool,
    rng: ChaCha8Rng,
}

enum Propagated<F> {
    Conflict,
    /// Values, plus an unknown whose value is one of a few exact roots.
    Done(Vec<Option<F>>, Option<(usize, Vec<F>)>),
}

fn trace_powers<F: Scalar>(m: &Matrix<F>, upto: usize) -> Vec<F> {
    let mut out = Vec::with_capacity(upto);
    let mut p = m.clone();
    for k in 1..=upto {
        out.push(p.trace());
        if k < upto {
            p = p.dot(m);
        }
    }
    out
}

fn probe_vector<F: Scalar>(n: usize, outer: usize, (s, t): (i64, i64)) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[0] = F::from_i64(s);
    if outer > 1 {
        v[1] = F::from_i64(t);
    }
    v
}

impl<F: Factorable> Search<F> {
    fn reduced(&self, vals: &[Option<F>]) -> Vec<QEq<F>> {
        let mut out = Vec::with_capacity(self.eqs.len());
        for e in &self.eqs {
            let mut c = e.c.clone();
            let mut lin: BTreeMap<usize, F> = BTreeMap::new();
            for (k, v) in &e.lin {
                match &vals[*k] {
                    Some(x) => c += x.mul_ref(v),
                    None => *lin.entry(*k).or_insert_with(F::zero) += v.clone(),
                }
            }
            let mut quad = Vec::new();
            for (k, l, v) in &e.quad {
                match (&vals[*k], &vals[*l]) {
                    (Some(x), Some(y)) => c += x.mul_ref(y).mul_ref(v),
                    (Some(x), None) => *lin.entry(*l).or_insert_with(F::zero) += x.mul_ref(v),
                    (None, Some(y)) => *lin.entry(*k).or_insert_with(F::zero) += y.mul_ref(v),
                    (None, None) => quad.push((*k, *l, v.clone())),
                }
            }
            let lin: Vec<_> = lin.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            if lin.is_empty() && quad.is_empty() && c.is_zero() {
                continue;
            }
            out.push(QEq { c, lin, quad });
        }
        out
    }

    fn linear_echelon(&self, eqs: &[QEq<F>]) -> Echelon<F> {
        let mut ech = Echelon::new(self.nvars + 1);
        for e in eqs.iter().filter(|e| e.quad.is_empty()) {
            let mut row = vec![F::zero(); self.nvars + 1];
            for (k, v) in &e.lin {
                row[*k] = v.clone();
            }
            row[self.nvars] = e.c.clone();
            ech.insert(row);
        }
        ech
    }

    /// Quadratic equations with every linear pivot replaced by its
    /// expression in the remaining unknowns.
    fn eliminated(&self, eqs: &[QEq<F>], ech: &Echelon<F>) -> Vec<QEq<F>> {
        let nv = self.nvars;
        // pivot -> (constant, [(free, coef)])
        let mut subst: HashMap<usize, (F, Vec<(usize, F)>)> = HashMap::new();
        for row in ech.rref_rows() {
            let Some(p) = (0..nv).find(|&k| !row[k].is_zero()) else { continue };
            let rest = (p + 1..nv).filter(|&k| !row[k].is_zero()).map(|k| (k, -row[k].clone())).collect();
            subst.insert(p, (-row[nv].clone(), rest));
        }
        let expr = |k: usize| -> (F, Vec<(usize, F)>) { subst.get(&k).cloned().unwrap_or_else(|| (F::zero(), vec![(k, F::one())])) };
        let mut out = Vec::new();
        for e in eqs.iter().filter(|e| !e.quad.is_empty()) {
            let mut c = e.c.clone();
            let mut lin: BTreeMap<usize, F> = BTreeMap::new();
            let mut quad: BTreeMap<(usize, usize), F> = BTreeMap::new();
            for (k, v) in &e.lin {
                let (c0, terms) = expr(*k);
                c += c0.mul_ref(v);
                for (f, cf) in terms {
                    *lin.entry(f).or_insert_with(F::zero) += cf.mul_ref(v);
                }
            }
            for (k, l, v) in &e.quad {
                let (ck, tk) = expr(*k);
                let (cl, tl) = expr(*l);
                c += ck.mul_ref(&cl).mul_ref(v);
                for (f, cf) in &tk {
                    *lin.entry(*f).or_insert_with(F::zero) += cf.mul_ref(&cl).mul_ref(v);
                }
                for (f, cf) in &tl {
                    *lin.entry(*f).or_insert_with(F::zero) += cf.mul_ref(&ck).mul_ref(v);
                }
                for (f, cf) in &tk {
                    for (g, cg) in &tl {
                        *quad.entry(((*f).min(*g), (*f).max(*g))).or_insert_with(F::zero) += cf.mul_ref(cg).mul_ref(v);
                    }
                }
            }
            let quad: Vec<_> = quad.into_iter().filter(|(_, v)| !v.is_zero()).map(|((a, b), v)| (a, b, v)).collect();
            if quad.is_empty() {
                continue;
            }
            out.push(QEq { c, lin: lin.into_iter().filter(|(_, v)| !v.is_zero()).collect(), quad });
        }
        out
    }

    /// Exact roots of a univariate quadratic `q t² + l t + c`.
    fn quadratic_roots(q: &F, l: &F, c: &F) -> Option<Vec<F>> {
        let p = Poly::new(vec![c.clone(), l.clone(), q.clone()]).squarefree();
        match p.degree() {
            Some(1) => Some(vec![-p.coeff(0) / p.coeff(1)]),
            Some(2) => {
                let f = F::split_factor(&p)?;
                let r1 = -f.coeff(0) / f.coeff(1);
                let g = p.divrem(&f).0;
                let r2 = -g.coeff(0) / g.coeff(1);
                Some(vec![r1, r2])
            }
            _ => None,
        }
    }

    /// Fix every unknown forced by linear equations or by univariate
    /// equations with a single root.
    fn propagate(&self, mut vals: Vec<Option<F>>) -> Propagated<F> {
        loop {
            let eqs = self.reduced(&vals);
            let ech = self.linear_echelon(&eqs);
            let mut changed = false;
            for row in ech.rref_rows() {
                let nz: Vec<usize> = (0..self.nvars).filter(|&k| !row[k].is_zero()).collect();
                match nz.len() {
                    0 => return Propagated::Conflict,
                    1 => {
                        vals[nz[0]] = Some(-row[self.nvars].clone() / row[nz[0]].clone());
                        changed = true;
                    }
                    _ => {}
                }
            }
            if changed {
                continue;
            }
            let mut branch: Option<(usize, Vec<F>)> = None;
            for e in self.eliminated(&eqs, &ech) {
                let k = e.quad[0].0;
                let single = e.quad.iter().all(|&(a, b, _)| a == k && b == k) && e.lin.iter().all(|(a, _)| *a == k);
                if !single {
                    continue;
                }
                let l = e.lin.first().map_or(F::zero(), |(_, v)| v.clone());
                match Self::quadratic_roots(&e.quad[0].2, &l, &e.c) {
                    None => return Propagated::Conflict,
                    Some(r) if r.len() == 1 => {
                        vals[k] = Some(r[0].clone());
                        changed = true;
                        break;
                    }
                    Some(r) => {
                        if branch.is_none() {
                            branch = Some((k, r));
                        }
                    }
                }
            }
            if !changed {
                return Propagated::Done(vals, branch);
            }
        }
    }

    /// Unknown to branch on: the non-pivot unknown of least priority, so
    /// that the outer block, then the diagonal blocks, then deeper entries are
    /// fixed in turn and later equations become linear.
    fn choose(&self, vals: &[Option<F>]) -> Option<usize> {
        let eqs = self.reduced(vals);
        let pivots = self.linear_echelon(&eqs).pivot_columns();
        let free = (0..self.nvars).filter(|&k| vals[k].is_none() && !pivots.contains(&k)).min_by_key(|&k| self.priority[k]);
        free.or_else(|| (0..self.nvars).filter(|&k| vals[k].is_none()).min_by_key(|&k| self.priority[k]))
    }

    /// Some fully assigned diagonal block of the flag is singular.
    fn singular_block(&self, vals: &[Option<F>]) -> bool {
        let g = self.matrix(vals);
        self.levels.iter().any(|lv| {
            let assigned = lv.iter().all(|&r| lv.iter().all(|&c| self.slot_assigned(vals, r, c)));
            assigned && Matrix::from_fn(lv.len(), lv.len(), |i, j| g[(lv[i], lv[j])].clone()).det().is_zero()
        })
    }

    fn slot_assigned(&self, vals: &[Option<F>], r: usize, c: usize) -> bool {
        self.slots.iter().position(|&rc| rc == (r, c)).is_none_or(|k| vals[k].is_some())
    }

    fn candidates(&mut self, k: usize) -> Vec<F> {
        let (r, c) = self.slots[k];
        let base: &[(i64, i64)] = if r == c {
            &[(1, 1), (-1, 1), (2, 1), (1, 2), (-2, 1), (-1, 2), (3, 1), (1, 3)]
        } else {
            &[(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2)]
        };
        let mut out: Vec<F> = base.iter().map(|&(a, b)| F::from_q(qf(a, b))).collect();
        let extra = F::from_q(qf(self.rng.gen_range(-9..=9), self.rng.gen_range(1..=5)));
        if !out.contains(&extra) {
            out.push(extra);
        }
        if self.shuffle {
            out.shuffle(&mut self.rng);
        }
        out
    }

    fn matrix(&self, vals: &[Option<F>]) -> Matrix<F> {
        let mut g = Matrix::zeros(self.n, self.n);
        for (k, &(r, c)) in self.slots.iter().enumerate() {
            if let Some(v) = &vals[k] {
                g[(r, c)] = v.clone();
            }
        }
        g
    }

    /// Traces of powers only see the outer block, since the nilradical acts
    /// nilpotently in a common flag.
    fn outer_block_consistent(&self, vals: &[Option<F>]) -> bool {
        let g = self.matrix(vals);
        PROBES.iter().zip(&self.source_traces).all(|(&p, want)| {
            let v = probe_vector::<F>(self.n, self.outer, p);
            let mut img = g.apply(&v);
            for x in img.iter_mut().skip(self.outer) {
                *x = F::zero();
            }
            &trace_powers(&self.l2.ad(&img), self.n) == want
        })
    }

    fn dfs(&mut self, vals: Vec<Option<F>>, outer_checked: bool) -> Option<Matrix<F>> {
        if self.expanded >= self.budget {
            return None;
        }
        self.expanded += 1;
        let (vals, branch) = match self.propagate(vals) {
            Propagated::Conflict => return None,
            Propagated::Done(v, b) => (v, b),
        };
        let outer_done = self.outer_vars.iter().all(|&k| vals[k].is_some());
        if outer_done && !outer_checked && !self.outer_block_consistent(&vals) {
            return None;
        }
        if self.singular_block(&vals) {
            return None;
        }
        let (k, options) = match branch {
            Some(b) => b,
            other => match self.choose(&vals) {
                Some(k) => {
                    let c = self.candidates(k);
                    (k, c)
                }
                None => match other {
                    Some(b) => b,
                    None => {
                        if vals.iter().any(|v| v.is_none()) {
                            return None;
                        }
                        let g = self.matrix(&vals);
                        if !g.det().is_zero() && first_violation(&self.l1, &self.l2, &g).is_none() {
                            return Some(g);
                        }
                        return None;
                    }
                },
            },
        };
        for v in options {
            let mut next = vals.clone();
            next[k] = Some(v);
            if let Some(g) = self.dfs(next, outer_done) {
                return Some(g);
            }
            if self.expanded >= self.budget {
                return None;
            }
        }
        None
    }
}

/// Bounded search for an isomorphism `l1 → l2`.
///
/// Both algebras are moved to bases adapted to the chain
/// `L ⊇ N ⊇ C¹N ⊇ C²N ⊇ …` so that the unknown map is block triangular;
/// further characteristic subspaces become linear constraints and the traces
/// `tr(ad(u)^k)` constrain the block acting on `L/N`. Unknowns are fixed by
/// propagation (linear equations, univariate quadratics) and otherwise
/// branched over small rationals. `budget` bounds the expanded nodes.
pub fn search_isomorphism<F: Factorable>(l1: &LieAlgebra<F>, l2: &LieAlgebra<F>, budget: usize) -> IsoVerdict<F> {
    let refuted = refute_by_fingerprint(l1, l2);
    if refuted.is_refuted() {
        return refuted;
    }
    let n = l1.dim();
    let label = |l: &LieAlgebra<F>| l.label().to_string();
    if l1.tensor() == l2.tensor() {
        return IsoVerdict::Isomorphic(IsoCertificate::new(Matrix::identity(n), label(l1), label(l2)).unwrap());
    }
    let s1 = characteristic_subspaces(l1);
    let s2 = characteristic_subspaces(l2);
    if s1.len() != s2.len() {
        return IsoVerdict::Refuted {
            invariant: "characteristic series length".into(),
            left: s1.len().to_string(),
            right: s2.len().to_string(),
        };
    }
    for ((name, a), (_, b)) in s1.iter().zip(&s2) {
        if a.dim() != b.dim() {
            return IsoVerdict::Refuted { invariant: format!("{name} dim"), left: a.dim().to_string(), right: b.dim().to_string() };
        }
    }
    // nested chain L ⊇ N ⊇ C¹N ⊇ C²N ⊇ …; N acts trivially on its quotients
    let chain_of = |l: &LieAlgebra<F>| -> Vec<Subspace<F>> {
        let nil = l.nilradical();
        let mut c = vec![nil.clone()];
        loop {
            let next = l.product(&nil, c.last().unwrap());
            if next.dim() == 0 || next.dim() == c.last().unwrap().dim() {
                return c;
            }
            c.push(next);
        }
    };
    let (c1, c2) = (chain_of(l1), chain_of(l2));
    let (d1, d2): (Vec<usize>, Vec<usize>) = (c1.iter().map(|s| s.dim()).collect(), c2.iter().map(|s| s.dim()).collect());
    if d1 != d2 {
        return IsoVerdict::Refuted { invariant: "nilradical series dims".into(), left: format!("{d1:?}"), right: format!("{d2:?}") };
    }
    let q1 = adapted_basis(n, &c1);
    let q2 = adapted_basis(n, &c2);
    let (Ok(a1), Ok(a2)) = (l1.change_basis(&q1), l2.change_basis(&q2)) else {
        return IsoVerdict::Unknown { expanded: 0 };
    };
    // column j may only have support inside the smallest chain member
    // containing e_j
    let dims: Vec<usize> = c1.iter().map(|s| s.dim()).collect();
    let level = |idx: usize| -> usize { dims.iter().copied().filter(|&d| idx >= n - d).min().unwrap_or(n) };
    let outer = n - c1[0].dim();
    let mut slots = Vec::new();
    for c in 0..n {
        let d = level(c);
        for r in n - d..n {
            slots.push((r, c));
        }
    }
    let nvars = slots.len();
    let var: HashMap<(usize, usize), usize> = slots.iter().enumerate().map(|(k, &rc)| (rc, k)).collect();
    let outer_vars: Vec<usize> = (0..nvars).filter(|&k| slots[k].0 < outer && slots[k].1 < outer).collect();
    let lev = |idx: usize| dims.iter().filter(|&&d| idx >= n - d).count();
    let by_depth: Vec<_> = slots.iter().map(|&(r, c)| (lev(r) - lev(c), lev(c), c, r)).collect();
    let by_column: Vec<_> = slots.iter().map(|&(r, c)| (lev(c), lev(r) - lev(c), c, r)).collect();
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for idx in 0..n {
        match levels.last_mut() {
            Some(l) if lev(l[0]) == lev(idx) => l.push(idx),
            _ => levels.push(vec![idx]),
        }
    }
    let mut eqs = Vec::new();
    // other characteristic subspaces: ann(S2) · G v = 0 for v in S1
    let (ch1, ch2) = (characteristic_subspaces(&a1), characteristic_subspaces(&a2));
    for ((_, s), (_, t)) in ch1.iter().zip(&ch2) {
        let ann = t.annihilator();
        for v in s.basis() {
            for w in ann.basis() {
                let mut lin: BTreeMap<usize, F> = BTreeMap::new();
                for (c, vc) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (r, wr) in w.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                        if let Some(&k) = var.get(&(r, c)) {
                            *lin.entry(k).or_insert_with(F::zero) += wr.mul_ref(vc);
                        }
                    }
                }
                let lin: Vec<_> = lin.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                if !lin.is_empty() {
                    eqs.push(QEq { c: F::zero(), lin, quad: Vec::new() });
                }
            }
        }
    }
    // tr ad(u) and tr ad(u)² only depend on the outer part of u
    if outer > 0 {
        let lin_form: Vec<F> = (0..outer).map(|i| a2.ad_basis(i).trace()).collect();
        let quad_form: Vec<Vec<F>> =
            (0..outer).map(|i| (0..outer).map(|j| a2.ad_basis(i).dot(&a2.ad_basis(j)).trace()).collect()).collect();
        for &p in PROBES.iter().take(3) {
            let u = probe_vector::<F>(n, outer, p);
            let t1 = trace_powers(&a1.ad(&u), 2);
            // image outer coordinate r is Σ_c G[r,c] u_c
            let image: Vec<Vec<(usize, F)>> = (0..outer)
                .map(|r| (0..outer).filter(|&c| !u[c].is_zero()).map(|c| (var[&(r, c)], u[c].clone())).collect())
                .collect();
            let mut lin = BTreeMap::new();
            for r in 0..outer {
                for (k, coef) in &image[r] {
                    *lin.entry(*k).or_insert_with(F::zero) += coef.mul_ref(&lin_form[r]);
                }
            }
            eqs.push(QEq { c: -t1[0].clone(), lin: lin.into_iter().filter(|(_, v): &(usize, F)| !v.is_zero()).collect(), quad: vec![] });
            let mut quad: BTreeMap<(usize, usize), F> = BTreeMap::new();
            for r in 0..outer {
                for s in 0..outer {
                    for (k, ck) in &image[r] {
                        for (l, cl) in &image[s] {
                            let key = ((*k).min(*l), (*k).max(*l));
                            *quad.entry(key).or_insert_with(F::zero) += ck.mul_ref(cl).mul_ref(&quad_form[r][s]);
                        }
                    }
                }
            }
            let quad: Vec<_> = quad.into_iter().filter(|(_, v)| !v.is_zero()).map(|((a, b), v)| (a, b, v)).collect();
            eqs.push(QEq { c: -t1[1].clone(), lin: vec![], quad });
        }
    }
    // Σ_k c1(i,j,k) G[m,k] - Σ_{a,b} G[a,i] G[b,j] c2(a,b,m) = 0
    for i in 0..n {
        for j in i + 1..n {
            for m in 0..n {
                let mut lin = Vec::new();
                for k in 0..n {
                    let c = a1.c(i, j, k);
                    if let (false, Some(&v)) = (c.is_zero(), var.get(&(m, k))) {
                        lin.push((v, c.clone()));
                    }
                }
                let mut quad: BTreeMap<(usize, usize), F> = BTreeMap::new();
                for a in 0..n {
                    let Some(&ka) = var.get(&(a, i)) else { continue };
                    for b in 0..n {
                        let Some(&kb) = var.get(&(b, j)) else { continue };
                        let c = a2.c(a, b, m);
                        if c.is_zero() {
                            continue;
                        }
                        let key = (ka.min(kb), ka.max(kb));
                        *quad.entry(key).or_insert_with(F::zero) -= c.clone();
                    }
                }
                let quad: Vec<_> = quad.into_iter().filter(|(_, v)| !v.is_zero()).map(|((a, b), v)| (a, b, v)).collect();
                if !lin.is_empty() || !quad.is_empty() {
                    eqs.push(QEq { c: F::zero(), lin, quad });
                }
            }
        }
    }
    let source_traces = PROBES.iter().map(|&p| trace_powers(&a1.ad(&probe_vector::<F>(n, outer, p)), n)).collect();
    let mut search = Search {
        eqs,
        nvars,
        slots,
        outer_vars,
        priority: by_depth.clone(),
        levels,
        outer,
        source_traces,
        n,
        l1: a1,
        l2: a2,
        expanded: 0,
        budget: 0,
        shuffle: false,
        rng: ChaCha8Rng::seed_from_u64(0),
    };
    // restarts with alternating orderings and growing per-round caps
    let mut spent = 0;
    let mut found = None;
    let mut round = 0u32;
    let mut exhausted = 0;
    while spent < budget {
        let cap = (200usize << (round / 2)).min(budget - spent);
        search.priority = if round % 2 == 0 { by_depth.clone() } else { by_column.clone() };
        search.shuffle = round >= 2;
        search.expanded = 0;
        search.budget = cap;
        found = search.dfs(vec![None; nvars], outer == 0);
        spent += search.expanded;
        if found.is_some() {
            break;
        }
        // a tree exhausted under the cap only repeats with fresh extras
        exhausted = if search.expanded < cap { exhausted + 1 } else { 0 };
        if exhausted >= 4 {
            break;
        }
        round += 1;
    }
    search.expanded = spent;
    let Some(gp) = found else {
        return IsoVerdict::Unknown { expanded: spent };
    };
    // back to the original bases: G = C2⁻¹ G' C1 with Ci = (Qi⁻¹)ᵀ
    let g = q2.transpose().dot(&gp).dot(&q1.inverse().unwrap().transpose());
    match verify_certificate(l1, l2, &g) {
        Ok(true) => IsoVerdict::Isomorphic(IsoCertificate::new(g, label(l1), label(l2)).unwrap()),
        _ => IsoVerdict::Unknown { expanded: search.expanded },
    }
}

/// Outcome of one equivalence claim at one parameter point.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ClaimResult {
    pub claim: String,
    pub source: String,
    pub target: String,
    /// `certificate verified`, `certificate failed`, or a search verdict name.
    pub outcome: String,
    pub passed: bool,
}

/// Results for all declared equivalences of an entry.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct EquivalenceReport {
    pub entry: String,
    pub results: Vec<ClaimResult>,
}

impl EquivalenceReport {
    /// No certificate failed; unknown search verdicts do not count as failures.
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

fn claim_text(eq: &Equivalence) -> String {
    let t = |v: &[catalog::Expr]| format!("({})", v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "));
    format!("{} ~ {}", t(&eq.lhs), t(&eq.rhs))
}

/// Check every equivalence of `entry` at up to `samples` points.
///
/// Claims with a certificate file are verified exactly; the others are
/// searched with `budget`, and an unknown verdict is reported as such.
pub fn check_equivalence_claims<F: Factorable>(
    entry: &CatalogEntry,
    samples: usize,
    seed: u64,
    budget: usize,
    load_cert: &dyn Fn(&str) -> Option<String>,
) -> Result<EquivalenceReport, Error> {
    let mut results = Vec::new();
    for eq in &entry.equivs {
        let template = match &eq.cert {
            Some(file) => {
                let text = load_cert(file).ok_or_else(|| Error::Unknown(format!("certificate file {file}")))?;
                Some(CertificateTemplate::parse(&text)?)
            }
            None => None,
        };
        for (env, lhs, rhs) in catalog::sample_equivalence::<F>(entry, eq, samples, seed) {
            let l1 = crate::extension::assemble(&entry.instantiate_unchecked(&lhs)?)?.with_label(entry.point_label(&lhs));
            let l2 = crate::extension::assemble(&entry.instantiate_unchecked(&rhs)?)?.with_label(entry.point_label(&rhs));
            let (outcome, passed) = match &template {
                Some(t) => {
                    let ok = t.matrix(&env).and_then(|g| verify_certificate(&l1, &l2, &g)).unwrap_or(false);
                    (if ok { "certificate verified" } else { "certificate failed" }.to_string(), ok)
                }
                None => {
                    let v = search_isomorphism(&l1, &l2, budget);
                    (v.name().to_string(), !v.is_refuted())
                }
            };
            results.push(ClaimResult { claim: claim_text(eq), source: l1.label().into(), target: l2.label().into(), outcome, passed });
        }
    }
    Ok(EquivalenceReport { entry: entry.name.clone(), results })
}

/// Builtin certificate text by file name.
pub fn builtin_certificate(file: &str) -> Option<String> {
    catalog::BUILTIN_CERTS.iter().find(|(f, _)| *f == file).map(|(_, t)| t.to_string())
}
