//! Field scalars: exact rationals and Gaussian rationals.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number.
pub type Q = BigRational;

/// Which computable field a scalar type models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// ℚ, the stand-in for ℝ.
    Rational,
    /// ℚ(i), the stand-in for ℂ.
    Gaussian,
}

/// Exact field element. All arithmetic is exact and values are kept canonical,
/// so `==` is mathematical equality.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    const KIND: FieldKind;

    fn from_q(q: Q) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_q(Q::from_integer(BigInt::from(v)))
    }

    fn from_frac(n: i64, d: i64) -> Self {
        Self::from_q(Q::new(BigInt::from(n), BigInt::from(d)))
    }

    fn re(&self) -> Q;
    fn im(&self) -> Q;
    fn conj(&self) -> Self;

    /// `Some(q)` when the value lies in ℚ.
    fn to_q(&self) -> Option<Q> {
        if self.im().is_zero() {
            Some(self.re())
        } else {
            None
        }
    }

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    /// `self -= a * b` without cloning the operands.
    fn sub_mul(&mut self, a: &Self, b: &Self);

    /// `self += a * b` without cloning the operands.
    fn add_mul(&mut self, a: &Self, b: &Self);

    /// Product by reference.
    fn mul_ref(&self, other: &Self) -> Self;
}

impl Scalar for Q {
    const KIND: FieldKind = FieldKind::Rational;

    fn from_q(q: Q) -> Self {
        q
    }
    fn re(&self) -> Q {
        self.clone()
    }
    fn im(&self) -> Q {
        Q::zero()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self -= a * b;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self += a * b;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

/// Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QI {
    pub re: Q,
    pub im: Q,
}

impl QI {
    pub fn new(re: Q, im: Q) -> Self {
        QI { re, im }
    }

    pub fn i() -> Self {
        QI::new(Q::zero(), Q::one())
    }

    /// Field norm re² + im².
    pub fn norm(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Zero for QI {
    fn zero() -> Self {
        QI::new(Q::zero(), Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for QI {
    fn one() -> Self {
        QI::new(Q::one(), Q::zero())
    }
}

impl Add for QI {
    type Output = QI;
    fn add(self, o: QI) -> QI {
        QI::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for QI {
    type Output = QI;
    fn sub(self, o: QI) -> QI {
        QI::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for QI {
    type Output = QI;
    fn mul(self, o: QI) -> QI {
        self.mul_ref(&o)
    }
}

impl Div for QI {
    type Output = QI;
    fn div(self, o: QI) -> QI {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in Q(i)");
        let p = self.mul_ref(&o.conj());
        QI::new(p.re / &n, p.im / n)
    }
}

impl Neg for QI {
    type Output = QI;
    fn neg(self) -> QI {
        QI::new(-self.re, -self.im)
    }
}

impl AddAssign for QI {
    fn add_assign(&mut self, o: QI) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl SubAssign for QI {
    fn sub_assign(&mut self, o: QI) {
        self.re -= o.re;
        self.im -= o.im;
    }
}

impl MulAssign for QI {
    fn mul_assign(&mut self, o: QI) {
        *self = self.mul_ref(&o);
    }
}

impl Scalar for QI {
    const KIND: FieldKind = FieldKind::Gaussian;

    fn from_q(q: Q) -> Self {
        QI::new(q, Q::zero())
    }
    fn re(&self) -> Q {
        self.re.clone()
    }
    fn im(&self) -> Q {
        self.im.clone()
    }
    fn conj(&self) -> Self {
        QI::new(self.re.clone(), -self.im.clone())
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = a.mul_ref(b);
        self.re -= p.re;
        self.im -= p.im;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = a.mul_ref(b);
        self.re += p.re;
        self.im += p.im;
    }
    fn mul_ref(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return QI::new(&self.re * &o.re, Q::zero());
        }
        QI::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

/// Canonical text for a rational: `p` or `p/q`.
pub fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for QI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_q(&self.re));
        }
        let im = if self.im.is_one() {
            "i".to_string()
        } else if (-self.im.clone()).is_one() {
            "-i".to_string()
        } else {
            format!("{}*i", fmt_q(&self.im))
        };
        if self.re.is_zero() {
            write!(f, "{im}")
        } else if self.im.is_negative() {
            write!(f, "{}{}", fmt_q(&self.re), im)
        } else {
            write!(f, "{}+{}", fmt_q(&self.re), im)
        }
    }
}

/// Shorthand for an integer rational.
pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Shorthand for `n/d`.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Display helper that prints rationals canonically for any scalar type.
pub fn fmt_scalar<F: Scalar>(x: &F) -> String {
    match x.to_q() {
        Some(r) => fmt_q(&r),
        None => x.to_string(),
    }
}
