//! Dense univariate polynomials, gcds, Sturm sequences and small-degree
//! factor splitting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{fmt_scalar, Scalar, Q, QI};
use crate::Error;

/// Polynomial with coefficients listed from the constant term upward.
/// Trailing zeros are always trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        Self::new(vec![F::zero(), F::one()])
    }

    /// `t − r`.
    pub fn linear_root(r: F) -> Self {
        Self::new(vec![-r, F::one()])
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| F::from_i64(v)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().unwrap();
        Self::new(self.coeffs.iter().map(|c| c.mul_ref(&inv)).collect())
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul_ref(s)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j].add_mul(a, b);
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::constant(F::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let inv = d.lead().inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul_ref(&inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j].sub_mul(&c, dc);
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd. The result is the zero polynomial exactly when both inputs
    /// are zero; degree 0 means coprime.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: `(g, s, t)` with `s·self + t·o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::constant(F::one()), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::constant(F::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().inv().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul_ref(&F::from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x) + c.clone();
        }
        acc
    }

    /// Evaluate at a square matrix (Horner).
    pub fn eval_matrix(&self, m: &crate::Matrix<F>) -> crate::Matrix<F> {
        let n = m.rows();
        let mut acc = crate::Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.dot(m).add(&crate::Matrix::identity(n).scale(c));
        }
        acc
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }
}

impl<F: Scalar> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = fmt_scalar(c);
            let cs = if cs.contains(['+', '/']) || cs[1..].contains('-') { format!("({cs})") } else { cs };
            terms.push(match i {
                0 => cs,
                1 if c.is_one() => "t".to_string(),
                1 => format!("{cs}*t"),
                _ if c.is_one() => format!("t^{i}"),
                _ => format!("{cs}*t^{i}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

fn sign_at_pos_inf(p: &Poly<Q>) -> i32 {
    sgn(&p.lead())
}

fn sign_at_neg_inf(p: &Poly<Q>) -> i32 {
    let s = sgn(&p.lead());
    if p.degree().unwrap_or(0) % 2 == 0 {
        s
    } else {
        -s
    }
}

fn sgn(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut v = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Sturm sequence `p, p', −rem(p, p'), …`.
pub fn sturm_sequence(p: &Poly<Q>) -> Vec<Poly<Q>> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.scale(&-Q::one()));
    }
    seq
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &Poly<Q>) -> Result<usize, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let seq = sturm_sequence(p);
    let lo = variations(seq.iter().map(sign_at_neg_inf));
    let hi = variations(seq.iter().map(sign_at_pos_inf));
    Ok(lo - hi)
}

/// True iff `p` has a real root (Sturm's theorem).
pub fn real_root_exists(p: &Poly<Q>) -> Result<bool, Error> {
    Ok(count_real_roots(p)? > 0)
}

/// Monic gcd of two polynomials; both zero is an error.
pub fn univariate_gcd<F: Scalar>(p: &Poly<F>, q: &Poly<F>) -> Result<Poly<F>, Error> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(p.gcd(q))
}

/// Largest integer we are willing to factor by trial division.
const TRIAL_LIMIT: u64 = 1 << 40;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Some(vec![BigInt::one()]);
    }
    let v = n.to_u64().filter(|&v| v <= TRIAL_LIMIT)?;
    let mut out = Vec::new();
    let r = v.sqrt();
    for d in 1..=r {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
    }
    Some(out)
}

/// Integer coefficient vector proportional to `p` (same roots).
fn integer_coeffs(p: &Poly<Q>) -> Vec<BigInt> {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs().iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect()
}

/// Distinct rational roots. `None` when coefficients are too large for the
/// divisor enumeration.
pub fn rational_roots(p: &Poly<Q>) -> Option<Vec<Q>> {
    if p.is_zero() {
        return Some(Vec::new());
    }
    let mut p = p.clone();
    let mut roots = Vec::new();
    // strip the factor t^k
    if p.coeff(0).is_zero() {
        roots.push(Q::zero());
        let k = p.coeffs().iter().position(|c| !c.is_zero()).unwrap();
        p = Poly::new(p.coeffs()[k..].to_vec());
    }
    if p.degree() == Some(0) {
        return Some(roots);
    }
    let z = integer_coeffs(&p);
    let nums = divisors(&z[0])?;
    let dens = divisors(z.last().unwrap())?;
    let mut cands: Vec<Q> = Vec::new();
    for n in &nums {
        for d in &dens {
            let r = Q::new(n.clone(), d.clone());
            for c in [r.clone(), -r] {
                if !cands.contains(&c) {
                    cands.push(c);
                }
            }
        }
    }
    for c in cands {
        if p.eval(&c).is_zero() {
            roots.push(c);
        }
    }
    roots.sort();
    Some(roots)
}

fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Splitting of a monic square-free quartic without rational roots into two
/// rational quadratics, via the resolvent cubic.
fn split_quartic(p: &Poly<Q>) -> Option<Poly<Q>> {
    let p = p.monic();
    let (a, b, c, d) = (p.coeff(3), p.coeff(2), p.coeff(1), p.coeff(0));
    // (t² + u t + v)(t² + w t + x) with u + w = a, v + x + u w = b,
    // u x + v w = c, v x = d. Enumerate rational v from the resolvent:
    // s = v + x satisfies s³ − b s² + (a c − 4 d) s − (a² d − 4 b d + c²) = 0.
    let cubic = Poly::new(vec![
        -(a.clone() * a.clone() * d.clone() - Q::from_integer(4.into()) * b.clone() * d.clone() + c.clone() * c.clone()),
        a.clone() * c.clone() - Q::from_integer(4.into()) * d.clone(),
        -b.clone(),
        Q::one(),
    ]);
    let two = Q::from_integer(2.into());
    for s in rational_roots(&cubic)? {
        // v, x roots of z² − s z + d
        let disc_vx = s.clone() * s.clone() - Q::from_integer(4.into()) * d.clone();
        // u, w roots of z² − a z + (b − s)
        let disc_uw = a.clone() * a.clone() - Q::from_integer(4.into()) * (b.clone() - s.clone());
        let (Some(r1), Some(r2)) = (rational_sqrt(&disc_vx), rational_sqrt(&disc_uw)) else {
            continue;
        };
        for sv in [r1.clone(), -r1.clone()] {
            for su in [r2.clone(), -r2.clone()] {
                let v = (s.clone() + sv.clone()) / two.clone();
                let u = (a.clone() + su.clone()) / two.clone();
                let f = Poly::new(vec![v, u, Q::one()]);
                if p.rem(&f).is_zero() {
                    return Some(f);
                }
            }
        }
    }
    None
}

/// Splitting of polynomials into coprime factors over the scalar field.
pub trait Factorable: Scalar {
    /// A monic nontrivial factor of a square-free `p`, or `None` when `p` is
    /// irreducible (or no splitting could be found).
    fn split_factor(p: &Poly<Self>) -> Option<Poly<Self>>;
}

impl Factorable for Q {
    fn split_factor(p: &Poly<Q>) -> Option<Poly<Q>> {
        let deg = p.degree()?;
        if deg <= 1 {
            return None;
        }
        if let Some(r) = rational_roots(p)?.into_iter().next() {
            return Some(Poly::linear_root(r));
        }
        if deg == 4 {
            return split_quartic(p);
        }
        None
    }
}

impl Factorable for QI {
    fn split_factor(p: &Poly<QI>) -> Option<Poly<QI>> {
        let deg = p.degree()?;
        if deg <= 1 {
            return None;
        }
        let real: Option<Vec<Q>> = p.coeffs().iter().map(|c| c.to_q()).collect();
        if let Some(rc) = real {
            let rp = Poly::new(rc);
            if let Some(r) = rational_roots(&rp)?.into_iter().next() {
                return Some(Poly::linear_root(QI::from_q(r)));
            }
            // quadratic factors t² + u t + v with negative discriminant split
            // over Q(i) when −disc is a rational square
            let mut quads = Vec::new();
            if deg == 2 {
                quads.push(rp.monic());
            } else if deg == 4 {
                if let Some(f) = split_quartic(&rp) {
                    quads.push(f.clone());
                    quads.push(rp.monic().divrem(&f).0);
                }
            }
            for f in quads {
                let (u, v) = (f.coeff(1), f.coeff(0));
                let disc = u.clone() * u.clone() - Q::from_integer(4.into()) * v;
                if let Some(s) = rational_sqrt(&-disc) {
                    let two = Q::from_integer(2.into());
                    let root = QI::new(-u / two.clone(), s / two);
                    return Some(Poly::linear_root(root));
                }
                if deg == 4 {
                    return Some(Poly::new(f.coeffs().iter().cloned().map(QI::from_q).collect()));
                }
            }
            return None;
        }
        // general Gaussian coefficients: rational roots of the norm polynomial
        let conj = Poly::new(p.coeffs().iter().map(|c| c.conj()).collect());
        let norm = p.mul(&conj);
        let nq: Option<Vec<Q>> = norm.coeffs().iter().map(|c| c.to_q()).collect();
        let nq = Poly::new(nq?);
        for r in rational_roots(&nq)? {
            let r = QI::from_q(r);
            if p.eval(&r).is_zero() {
                return Some(Poly::linear_root(r));
            }
        }
        None
    }
}
