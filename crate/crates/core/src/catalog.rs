//! Text format for parametric families of extensions, the builtin
//! nilradicals and tables, instantiation and parameter sampling.
//!
//! ```text
//! # comment
//! algebra T3.L4 nilradical g52 field RC
//!   A = diag(1, 0, a, 1, 1 + a)
//!   B = diag(0, 1, b, 1, b)
//!   params a, b
//!   constraint (a, b) != (-1, 0)
//!   equiv (a, b) ~ (-a/b, 1/b) when b != 0 cert "t3_l4.cert"
//! ```
//!
//! Matrix expressions are `diag(...)` with scalar or `S(p, q)` entries,
//! followed by `± [scalar *] E(i, j)` terms (1-based). `XY = ...` gives
//! `[X, Y]` as a combination of `X1..X5`. A nilradical may carry a relabeling
//! `g53[5,3,4,1,2]`, meaning basis vector `i` of the entry is `x_{p_i}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::extension::ExtensionSpec;
use crate::lie::LieAlgebra;
use crate::matrix::Matrix;
use crate::scalar::{fmt_q, qf, Scalar, Q};
use crate::Error;

/// Syntax or semantic error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// Source position. Positions never take part in equality so that
/// re-parsed canonical text compares equal to the original entries.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}
impl Eq for Pos {}

/// Fields an entry exists over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum FieldScope {
    R,
    C,
    RC,
}

impl FieldScope {
    /// Whether an entry with this scope is part of the catalog over `field`
    /// (which is `R` or `C`).
    pub fn includes(self, field: FieldScope) -> bool {
        matches!((self, field), (FieldScope::RC, _) | (FieldScope::R, FieldScope::R) | (FieldScope::C, FieldScope::C))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FieldScope::R => "R",
            FieldScope::C => "C",
            FieldScope::RC => "RC",
        }
    }
}

/// Scalar expression over parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Param(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Parameter values.
pub type ParamAssignment<F> = BTreeMap<String, F>;

impl Expr {
    pub fn int(v: i64) -> Expr {
        Expr::Num(BigInt::from(v))
    }

    pub fn eval<F: Scalar>(&self, env: &ParamAssignment<F>) -> Result<F, Error> {
        Ok(match self {
            Expr::Num(n) => F::from_q(Q::from_integer(n.clone())),
            Expr::Param(p) => env.get(p).cloned().ok_or_else(|| Error::Eval(format!("parameter {p} has no value")))?,
            Expr::Neg(e) => -e.eval(env)?,
            Expr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            Expr::Div(a, b) => {
                let d = b.eval(env)?;
                if d.is_zero() {
                    return Err(Error::Eval(format!("division by zero in {self}")));
                }
                a.eval(env)? / d
            }
            Expr::Pow(a, k) => {
                let base = a.eval(env)?;
                let mut out = F::one();
                for _ in 0..*k {
                    out = out.mul_ref(&base);
                }
                out
            }
        })
    }

    fn params(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Param(p) => out.push(p.clone()),
            Expr::Neg(e) | Expr::Pow(e, _) => e.params(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.params(out);
                b.params(out);
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Param(_) => 5,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool) -> fmt::Result {
            if paren {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        let p = self.prec();
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Param(s) => write!(f, "{s}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                child(f, e, e.prec() < 3)
            }
            Expr::Pow(e, k) => {
                child(f, e, e.prec() < 5)?;
                write!(f, "^{k}")
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = match self {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    Expr::Mul(..) => "*",
                    _ => "/",
                };
                child(f, a, a.prec() < p)?;
                write!(f, "{op}")?;
                child(f, b, b.prec() <= p)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Ge,
    Gt,
    Le,
    Lt,
}

impl CmpOp {
    fn text(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
        }
    }
    fn is_order(self) -> bool {
        !matches!(self, CmpOp::Eq | CmpOp::Ne)
    }
}

/// Parameter predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pred {
    Cmp(Expr, CmpOp, Expr),
    /// Tuple (in)equality; only `=` and `!=`.
    Tuple(Vec<Expr>, CmpOp, Vec<Expr>),
    In(Expr, Vec<Expr>),
    And(Box<Pred>, Box<Pred>),
}

impl Pred {
    pub fn eval<F: Scalar>(&self, env: &ParamAssignment<F>) -> Result<bool, Error> {
        Ok(match self {
            Pred::Cmp(a, op, b) => {
                let (x, y) = (a.eval(env)?, b.eval(env)?);
                match op {
                    CmpOp::Eq => x == y,
                    CmpOp::Ne => x != y,
                    _ => {
                        let (Some(x), Some(y)) = (x.to_q(), y.to_q()) else {
                            return Err(Error::Eval(format!("order comparison of non-real values in {self}")));
                        };
                        match op {
                            CmpOp::Ge => x >= y,
                            CmpOp::Gt => x > y,
                            CmpOp::Le => x <= y,
                            _ => x < y,
                        }
                    }
                }
            }
            Pred::Tuple(a, op, b) => {
                let mut eq = true;
                for (x, y) in a.iter().zip(b) {
                    eq &= x.eval(env)? == y.eval(env)?;
                }
                if *op == CmpOp::Eq {
                    eq
                } else {
                    !eq
                }
            }
            Pred::In(e, set) => {
                let v = e.eval(env)?;
                let mut found = false;
                for s in set {
                    found |= s.eval(env)? == v;
                }
                found
            }
            Pred::And(a, b) => a.eval(env)? && b.eval(env)?,
        })
    }

    fn has_order(&self) -> bool {
        match self {
            Pred::Cmp(_, op, _) => op.is_order(),
            Pred::Tuple(..) | Pred::In(..) => false,
            Pred::And(a, b) => a.has_order() || b.has_order(),
        }
    }

    fn params(&self, out: &mut Vec<String>) {
        match self {
            Pred::Cmp(a, _, b) => {
                a.params(out);
                b.params(out);
            }
            Pred::Tuple(a, _, b) => a.iter().chain(b).for_each(|e| e.params(out)),
            Pred::In(e, s) => {
                e.params(out);
                s.iter().for_each(|x| x.params(out));
            }
            Pred::And(a, b) => {
                a.params(out);
                b.params(out);
            }
        }
    }

    /// Constants that bound a single parameter, as `(param, value)` pairs.
    fn boundary_points(&self, out: &mut Vec<(String, Expr)>) {
        match self {
            Pred::Cmp(Expr::Param(p), op, c) if *op != CmpOp::Eq => out.push((p.clone(), c.clone())),
            Pred::Tuple(a, CmpOp::Ne, b) => {
                for (x, y) in a.iter().zip(b) {
                    if let Expr::Param(p) = x {
                        out.push((p.clone(), y.clone()));
                    }
                }
            }
            Pred::And(a, b) => {
                a.boundary_points(out);
                b.boundary_points(out);
            }
            _ => {}
        }
    }
}

fn fmt_tuple(t: &[Expr]) -> String {
    format!("({})", t.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "))
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::Cmp(a, op, b) => write!(f, "{a} {} {b}", op.text()),
            Pred::Tuple(a, op, b) => write!(f, "{} {} {}", fmt_tuple(a), op.text(), fmt_tuple(b)),
            Pred::In(e, s) => {
                write!(f, "{e} in {{{}}}", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
            }
            Pred::And(a, b) => write!(f, "{a} and {b}"),
        }
    }
}

/// Diagonal slot: a scalar or a 2×2 block `S(p, q) = [[p, q], [-q, p]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagEntry {
    Scalar(Expr),
    S(Expr, Expr),
}

impl DiagEntry {
    fn slots(&self) -> usize {
        match self {
            DiagEntry::Scalar(_) => 1,
            DiagEntry::S(..) => 2,
        }
    }
}

/// `± coef * E(i, j)` with 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitTerm {
    pub negative: bool,
    pub coef: Option<Expr>,
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatExpr {
    pub diag: Vec<DiagEntry>,
    pub terms: Vec<UnitTerm>,
}

impl MatExpr {
    pub fn eval<F: Scalar>(&self, env: &ParamAssignment<F>) -> Result<Matrix<F>, Error> {
        let n: usize = self.diag.iter().map(|d| d.slots()).sum();
        let mut m = Matrix::zeros(n, n);
        let mut s = 0;
        for d in &self.diag {
            match d {
                DiagEntry::Scalar(e) => {
                    m[(s, s)] = e.eval(env)?;
                    s += 1;
                }
                DiagEntry::S(p, q) => {
                    let (p, q) = (p.eval(env)?, q.eval(env)?);
                    m[(s, s)] = p.clone();
                    m[(s + 1, s + 1)] = p;
                    m[(s, s + 1)] = q.clone();
                    m[(s + 1, s)] = -q;
                    s += 2;
                }
            }
        }
        for t in &self.terms {
            let c = match &t.coef {
                Some(e) => e.eval(env)?,
                None => F::one(),
            };
            let c = if t.negative { -c } else { c };
            m[(t.row - 1, t.col - 1)] += c;
        }
        Ok(m)
    }

    fn params(&self, out: &mut Vec<String>) {
        for d in &self.diag {
            match d {
                DiagEntry::Scalar(e) => e.params(out),
                DiagEntry::S(p, q) => {
                    p.params(out);
                    q.params(out);
                }
            }
        }
        for t in &self.terms {
            if let Some(c) = &t.coef {
                c.params(out);
            }
        }
    }
}

impl fmt::Display for MatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self
            .diag
            .iter()
            .map(|d| match d {
                DiagEntry::Scalar(e) => e.to_string(),
                DiagEntry::S(p, q) => format!("S({p}, {q})"),
            })
            .collect();
        write!(f, "diag({})", d.join(", "))?;
        for t in &self.terms {
            write!(f, " {} ", if t.negative { "-" } else { "+" })?;
            if let Some(c) = &t.coef {
                write!(f, "{}*", paren_factor(c))?;
            }
            write!(f, "E({}, {})", t.row, t.col)?;
        }
        Ok(())
    }
}

/// Coefficients in front of `*E(..)` / `*X..` are printed as a single factor.
fn paren_factor(e: &Expr) -> String {
    if e.prec() >= 2 {
        e.to_string()
    } else {
        format!("({e})")
    }
}

/// `± coef * X_k` terms, 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinTerm {
    pub negative: bool,
    pub coef: Option<Expr>,
    pub index: usize,
}

/// Reference to a builtin nilradical with an optional relabeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilRef {
    pub id: String,
    pub perm: Option<Vec<usize>>,
}

impl fmt::Display for NilRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        if let Some(p) = &self.perm {
            write!(f, "[{}]", p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))?;
        }
        Ok(())
    }
}

/// Constraint group, optionally restricted to one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub scope: Option<FieldScope>,
    pub preds: Vec<Pred>,
}

impl Constraint {
    fn applies(&self, field: FieldScope) -> bool {
        self.scope.is_none_or(|s| s == field)
    }
}

/// Claimed isomorphism between two members of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub lhs: Vec<Expr>,
    pub rhs: Vec<Expr>,
    pub guard: Option<Pred>,
    pub cert: Option<String>,
}

/// One parametric family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub nilradical: NilRef,
    pub field: FieldScope,
    pub a: MatExpr,
    pub b: MatExpr,
    pub xy: Option<Vec<LinTerm>>,
    pub params: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub equivs: Vec<Equivalence>,
    pub pos: Pos,
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra {} nilradical {} field {}", self.name, self.nilradical, self.field.as_str())?;
        writeln!(f, "  A = {}", self.a)?;
        writeln!(f, "  B = {}", self.b)?;
        if let Some(xy) = &self.xy {
            write!(f, "  XY = ")?;
            if xy.is_empty() {
                write!(f, "0")?;
            }
            for (i, t) in xy.iter().enumerate() {
                match (i, t.negative) {
                    (0, true) => write!(f, "-")?,
                    (0, false) => {}
                    (_, true) => write!(f, " - ")?,
                    (_, false) => write!(f, " + ")?,
                }
                if let Some(c) = &t.coef {
                    write!(f, "{}*", paren_factor(c))?;
                }
                write!(f, "X{}", t.index)?;
            }
            writeln!(f)?;
        }
        if !self.params.is_empty() {
            writeln!(f, "  params {}", self.params.join(", "))?;
        }
        for c in &self.constraints {
            let scope = c.scope.map(|s| format!("[{}] ", s.as_str())).unwrap_or_default();
            let preds: Vec<String> = c.preds.iter().map(|p| p.to_string()).collect();
            writeln!(f, "  constraint {scope}{}", preds.join("; "))?;
        }
        for e in &self.equivs {
            write!(f, "  equiv {} ~ {}", fmt_tuple(&e.lhs), fmt_tuple(&e.rhs))?;
            if let Some(g) = &e.guard {
                write!(f, " when {g}")?;
            }
            if let Some(c) = &e.cert {
                write!(f, " cert \"{c}\"")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Canonical text of a catalog.
pub fn print_catalog(entries: &[CatalogEntry]) -> String {
    entries.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n")
}

// ---------------------------------------------------------------- lexer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 19] =
    ["!=", ">=", "<=", "(", ")", ",", "+", "-", "*", "/", "^", "=", ">", "<", "~", ";", "{", "}", "["];

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (ln, col) = (li + 1, i + 1);
            let err = |msg: String| ParseError { line: ln, col, msg };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let s = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let v: String = chars[s..i].iter().collect();
                out.push(Token { tok: Tok::Int(v.parse().unwrap()), line: ln, col });
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let s = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || matches!(chars[i], '_' | '.')) {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[s..i].iter().collect()), line: ln, col });
                continue;
            }
            if c == '"' {
                let s = i + 1;
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(err("unterminated string".into()));
                }
                out.push(Token { tok: Tok::Str(chars[s..i].iter().collect()), line: ln, col });
                i += 1;
                continue;
            }
            if c == ']' {
                out.push(Token { tok: Tok::Sym("]"), line: ln, col });
                i += 1;
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push(Token { tok: Tok::Sym(s), line: ln, col });
                    i += s.len();
                }
                None => return Err(err(format!("unexpected character '{c}'"))),
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- parser

const KEYWORDS: [&str; 12] =
    ["algebra", "nilradical", "field", "params", "constraint", "equiv", "when", "cert", "diag", "in", "and", "XY"];

struct Parser {
    toks: Vec<Token>,
    i: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.i + k).map(|t| &t.tok)
    }

    fn pos(&self) -> (usize, usize) {
        self.toks.get(self.i).map_or(self.end, |t| (t.line, t.col))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.pos();
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Ident(s)) => format!("'{s}'"),
            Some(Tok::Int(n)) => format!("'{n}'"),
            Some(Tok::Str(s)) => format!("\"{s}\""),
            Some(Tok::Sym(s)) => format!("'{s}'"),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}', found {}", self.describe()))
        }
    }

    fn expect_kw(&mut self, s: &str) -> Result<(), ParseError> {
        if self.is_kw(s) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected '{s}', found {}", self.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}, found {}", self.describe())),
        }
    }

    fn int(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let v = n.to_string().parse().map_err(|_| ParseError {
                    line: self.pos().0,
                    col: self.pos().1,
                    msg: "integer too large".into(),
                })?;
                self.i += 1;
                Ok(v)
            }
            _ => self.err(format!("expected an integer, found {}", self.describe())),
        }
    }

    // scalar := term {(+|-) term}
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.term()?;
        loop {
            if self.eat_sym("+") {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat_sym("-") {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        loop {
            if self.eat_sym("*") {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat_sym("/") {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    /// Product that stops before `* E(` or `* Xk`, used for coefficients.
    fn coef_term(&mut self, stop: fn(&Tok, Option<&Tok>) -> bool) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        loop {
            if self.is_sym("*") && self.peek_at(1).is_some_and(|t| stop(t, self.peek_at(2))) {
                self.i += 1;
                return Ok(e);
            }
            if self.eat_sym("*") {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat_sym("/") {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return self.err(format!("expected '*' before the unit term, found {}", self.describe()));
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_sym("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat_sym("^") {
            let k = self.int()?;
            return Ok(Expr::Pow(Box::new(base), k as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.i += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) && s != "E" && s != "S" && !is_x_ref(&s) => {
                self.i += 1;
                Ok(Expr::Param(s))
            }
            Some(Tok::Sym("(")) => {
                self.i += 1;
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            _ => self.err(format!("expected a scalar, found {}", self.describe())),
        }
    }

    fn tuple(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect_sym("(")?;
        let mut v = vec![self.expr()?];
        while self.eat_sym(",") {
            v.push(self.expr()?);
        }
        self.expect_sym(")")?;
        Ok(v)
    }

    fn try_tuple(&mut self) -> Option<Vec<Expr>> {
        let save = self.i;
        match self.tuple() {
            Ok(t) if t.len() > 1 => Some(t),
            _ => {
                self.i = save;
                None
            }
        }
    }

    fn cmp_op(&mut self) -> Option<CmpOp> {
        let op = match self.peek() {
            Some(Tok::Sym("=")) => CmpOp::Eq,
            Some(Tok::Sym("!=")) => CmpOp::Ne,
            Some(Tok::Sym(">=")) => CmpOp::Ge,
            Some(Tok::Sym("<=")) => CmpOp::Le,
            Some(Tok::Sym(">")) => CmpOp::Gt,
            Some(Tok::Sym("<")) => CmpOp::Lt,
            _ => return None,
        };
        self.i += 1;
        Some(op)
    }

    fn pred_atom(&mut self) -> Result<Pred, ParseError> {
        if let Some(lhs) = self.try_tuple() {
            let Some(op) = self.cmp_op() else {
                return self.err(format!("expected '=' or '!=' after a tuple, found {}", self.describe()));
            };
            if op.is_order() {
                return self.err("tuples only support '=' and '!='");
            }
            let rhs = self.tuple()?;
            if rhs.len() != lhs.len() {
                return self.err("tuples of different lengths");
            }
            return Ok(Pred::Tuple(lhs, op, rhs));
        }
        let lhs = self.expr()?;
        if self.is_kw("in") {
            self.i += 1;
            self.expect_sym("{")?;
            let mut set = vec![self.expr()?];
            while self.eat_sym(",") {
                set.push(self.expr()?);
            }
            self.expect_sym("}")?;
            return Ok(Pred::In(lhs, set));
        }
        let Some(op) = self.cmp_op() else {
            return self.err(format!("expected a comparison, found {}", self.describe()));
        };
        Ok(Pred::Cmp(lhs, op, self.expr()?))
    }

    fn pred(&mut self) -> Result<Pred, ParseError> {
        let mut p = self.pred_atom()?;
        while self.is_kw("and") {
            self.i += 1;
            p = Pred::And(Box::new(p), Box::new(self.pred_atom()?));
        }
        Ok(p)
    }

    fn matexpr(&mut self) -> Result<MatExpr, ParseError> {
        self.expect_kw("diag")?;
        self.expect_sym("(")?;
        let mut diag = Vec::new();
        loop {
            if self.is_kw("S") && matches!(self.peek_at(1), Some(Tok::Sym("("))) {
                self.i += 2;
                let p = self.expr()?;
                self.expect_sym(",")?;
                let q = self.expr()?;
                self.expect_sym(")")?;
                diag.push(DiagEntry::S(p, q));
            } else {
                diag.push(DiagEntry::Scalar(self.expr()?));
            }
            if !self.eat_sym(",") {
                break;
            }
        }
        self.expect_sym(")")?;
        let mut terms = Vec::new();
        while self.is_sym("+") || self.is_sym("-") {
            let negative = self.is_sym("-");
            self.i += 1;
            let coef = if self.is_kw("E") && matches!(self.peek_at(1), Some(Tok::Sym("("))) {
                None
            } else {
                Some(self.coef_term(|t, next| {
                    matches!(t, Tok::Ident(s) if s == "E") && matches!(next, Some(Tok::Sym("(")))
                })?)
            };
            self.expect_kw("E")?;
            self.expect_sym("(")?;
            let row = self.int()?;
            self.expect_sym(",")?;
            let col = self.int()?;
            self.expect_sym(")")?;
            terms.push(UnitTerm { negative, coef, row, col });
        }
        Ok(MatExpr { diag, terms })
    }

    fn lincomb(&mut self) -> Result<Vec<LinTerm>, ParseError> {
        if matches!(self.peek(), Some(Tok::Int(n)) if n.is_zero()) {
            self.i += 1;
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut first = true;
        loop {
            let negative = if self.eat_sym("-") {
                true
            } else if self.eat_sym("+") || first {
                false
            } else {
                break;
            };
            first = false;
            let coef = match self.peek() {
                Some(Tok::Ident(s)) if is_x_ref(s) => None,
                _ => Some(self.coef_term(|t, _| matches!(t, Tok::Ident(s) if is_x_ref(s)))?),
            };
            let name = self.ident("a generator X1..X5")?;
            let Some(index) = x_index(&name) else {
                return self.err(format!("expected a generator X1..X5, found '{name}'"));
            };
            out.push(LinTerm { negative, coef, index });
        }
        Ok(out)
    }

    fn nilref(&mut self) -> Result<NilRef, ParseError> {
        let id = self.ident("a nilradical name")?;
        let perm = if self.eat_sym("[") {
            let mut p = vec![self.int()?];
            while self.eat_sym(",") {
                p.push(self.int()?);
            }
            self.expect_sym("]")?;
            Some(p)
        } else {
            None
        };
        Ok(NilRef { id, perm })
    }

    fn entry(&mut self) -> Result<CatalogEntry, ParseError> {
        let (line, col) = self.pos();
        self.expect_kw("algebra")?;
        let name = self.ident("an algebra name")?;
        self.expect_kw("nilradical")?;
        let nil_pos = self.pos();
        let nilradical = self.nilref()?;
        if builtin_nilradical::<Q>(&nilradical.id).is_none() {
            return Err(ParseError { line: nil_pos.0, col: nil_pos.1, msg: format!("unknown nilradical '{}'", nilradical.id) });
        }
        if let Some(p) = &nilradical.perm {
            let mut s = p.clone();
            s.sort_unstable();
            if s != (1..=5).collect::<Vec<_>>() {
                return Err(ParseError { line: nil_pos.0, col: nil_pos.1, msg: "relabeling must be a permutation of 1..5".into() });
            }
        }
        self.expect_kw("field")?;
        let field = match self.ident("R, C or RC")?.as_str() {
            "R" => FieldScope::R,
            "C" => FieldScope::C,
            "RC" => FieldScope::RC,
            other => {
                self.i -= 1;
                return self.err(format!("expected R, C or RC, found '{other}'"));
            }
        };
        let mut mats = Vec::new();
        for m in ["A", "B"] {
            self.expect_kw(m)?;
            self.expect_sym("=")?;
            let p = self.pos();
            let e = self.matexpr()?;
            let slots: usize = e.diag.iter().map(|d| d.slots()).sum();
            if slots != 5 {
                return Err(ParseError { line: p.0, col: p.1, msg: format!("diag has {slots} slots, expected 5") });
            }
            for t in &e.terms {
                if !(1..=5).contains(&t.row) || !(1..=5).contains(&t.col) {
                    return Err(ParseError { line: p.0, col: p.1, msg: format!("E({}, {}) out of range", t.row, t.col) });
                }
            }
            mats.push(e);
        }
        let b = mats.pop().unwrap();
        let a = mats.pop().unwrap();
        let mut xy = None;
        if self.is_kw("XY") {
            self.i += 1;
            self.expect_sym("=")?;
            let p = self.pos();
            let l = self.lincomb()?;
            if l.iter().any(|t| !(1..=5).contains(&t.index)) {
                return Err(ParseError { line: p.0, col: p.1, msg: "generator index out of range".into() });
            }
            xy = Some(l);
        }
        let mut params = Vec::new();
        if self.is_kw("params") {
            self.i += 1;
            loop {
                let p = self.ident("a parameter name")?;
                if KEYWORDS.contains(&p.as_str()) || p == "E" || p == "S" || is_x_ref(&p) {
                    self.i -= 1;
                    return self.err(format!("'{p}' cannot be a parameter name"));
                }
                params.push(p);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        let mut constraints = Vec::new();
        while self.is_kw("constraint") {
            self.i += 1;
            let mut scope = None;
            if self.eat_sym("[") {
                scope = Some(match self.ident("R or C")?.as_str() {
                    "R" => FieldScope::R,
                    "C" => FieldScope::C,
                    _ => {
                        self.i -= 1;
                        return self.err("constraint scope must be R or C");
                    }
                });
                self.expect_sym("]")?;
            }
            let p = self.pos();
            let mut preds = vec![self.pred()?];
            while self.eat_sym(";") {
                preds.push(self.pred()?);
            }
            let over_c = match scope {
                Some(s) => s == FieldScope::C,
                None => field != FieldScope::R,
            };
            if over_c && preds.iter().any(|q| q.has_order()) {
                return Err(ParseError { line: p.0, col: p.1, msg: "order predicates are not allowed over C".into() });
            }
            constraints.push(Constraint { scope, preds });
        }
        let mut equivs = Vec::new();
        while self.is_kw("equiv") {
            self.i += 1;
            let p = self.pos();
            let lhs = self.tuple()?;
            self.expect_sym("~")?;
            let rhs = self.tuple()?;
            if lhs.len() != params.len() || rhs.len() != params.len() {
                return Err(ParseError {
                    line: p.0,
                    col: p.1,
                    msg: format!("equivalence tuples must have {} components", params.len()),
                });
            }
            let guard = if self.is_kw("when") {
                self.i += 1;
                Some(self.pred()?)
            } else {
                None
            };
            let cert = if self.is_kw("cert") {
                self.i += 1;
                match self.peek().cloned() {
                    Some(Tok::Str(s)) => {
                        self.i += 1;
                        Some(s)
                    }
                    _ => return self.err("expected a quoted certificate file name"),
                }
            } else {
                None
            };
            equivs.push(Equivalence { lhs, rhs, guard, cert });
        }
        let entry = CatalogEntry {
            name,
            nilradical,
            field,
            a,
            b,
            xy,
            params,
            constraints,
            equivs,
            pos: Pos { line, col },
        };
        let mut used = Vec::new();
        entry.a.params(&mut used);
        entry.b.params(&mut used);
        for t in entry.xy.iter().flatten() {
            if let Some(c) = &t.coef {
                c.params(&mut used);
            }
        }
        for c in &entry.constraints {
            c.preds.iter().for_each(|p| p.params(&mut used));
        }
        for e in &entry.equivs {
            e.lhs.iter().chain(&e.rhs).for_each(|x| x.params(&mut used));
            if let Some(g) = &e.guard {
                g.params(&mut used);
            }
        }
        if let Some(u) = used.iter().find(|u| !entry.params.contains(u)) {
            return Err(ParseError { line, col, msg: format!("undeclared parameter '{u}' in {}", entry.name) });
        }
        Ok(entry)
    }
}

fn is_x_ref(s: &str) -> bool {
    x_index(s).is_some()
}

fn x_index(s: &str) -> Option<usize> {
    let d = s.strip_prefix('X')?;
    if d.is_empty() || !d.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    d.parse().ok()
}

/// Parse catalog text.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, ParseError> {
    let toks = lex(text)?;
    let end = (text.lines().count().max(1), text.lines().last().map_or(0, |l| l.chars().count()) + 1);
    let mut p = Parser { toks, i: 0, end };
    let mut out: Vec<CatalogEntry> = Vec::new();
    while p.peek().is_some() {
        let e = p.entry()?;
        if out.iter().any(|o| o.name == e.name) {
            return Err(ParseError { line: e.pos.line, col: e.pos.col, msg: format!("duplicate algebra name '{}'", e.name) });
        }
        out.push(e);
    }
    Ok(out)
}

// ---------------------------------------------------------------- builtins

/// Identifiers of the builtin nilradicals.
pub const NILRADICAL_IDS: [&str; 9] = ["g1_5", "g1g1g3", "g1g4", "g51", "g52", "g53", "g54", "g55", "g56"];

/// Conventional label of a builtin nilradical.
pub fn nilradical_label(id: &str) -> Option<&'static str> {
    Some(match id {
        "g1_5" => "(g1)^5",
        "g1g1g3" => "(g1)^2+g3",
        "g1g4" => "g1+g4",
        "g51" => "g5,1",
        "g52" => "g5,2",
        "g53" => "g5,3",
        "g54" => "g5,4",
        "g55" => "g5,5",
        "g56" => "g5,6",
        _ => return None,
    })
}

/// One of the nine 5-dimensional nilpotent algebras by identifier.
pub fn builtin_nilradical<F: Scalar>(id: &str) -> Option<LieAlgebra<F>> {
    let table: &[(usize, usize, usize)] = match id {
        "g1_5" => &[],
        "g1g1g3" => &[(1, 2, 3)],
        "g1g4" => &[(1, 2, 3), (1, 3, 4)],
        "g51" => &[(1, 2, 5), (3, 4, 5)],
        "g52" => &[(1, 2, 4), (1, 3, 5)],
        "g53" => &[(1, 2, 4), (1, 4, 5), (2, 3, 5)],
        "g54" => &[(1, 2, 3), (1, 3, 4), (2, 3, 5)],
        "g55" => &[(1, 2, 3), (1, 3, 4), (1, 4, 5)],
        "g56" => &[(1, 2, 3), (1, 3, 4), (1, 4, 5), (2, 3, 5)],
        _ => return None,
    };
    let br: Vec<_> = table.iter().map(|&(i, j, k)| (i - 1, j - 1, vec![(k - 1, F::one())])).collect();
    let names = (1..=5).map(|i| format!("x{i}")).collect();
    Some(LieAlgebra::from_brackets(5, nilradical_label(id)?, &br).with_names(names))
}

/// The nine builtin nilradicals in the conventional order.
pub fn builtin_nilradicals<F: Scalar>() -> Vec<LieAlgebra<F>> {
    NILRADICAL_IDS.iter().map(|id| builtin_nilradical(id).unwrap()).collect()
}

/// Resolve a nilradical reference, applying the relabeling.
pub fn resolve_nilradical<F: Scalar>(r: &NilRef) -> Result<LieAlgebra<F>, Error> {
    let n = builtin_nilradical::<F>(&r.id).ok_or_else(|| Error::Unknown(format!("nilradical {}", r.id)))?;
    match &r.perm {
        None => Ok(n),
        Some(p) => {
            let pm = Matrix::from_fn(5, 5, |i, j| if p[i] == j + 1 { F::one() } else { F::zero() });
            Ok(n.change_basis(&pm)?.with_label(r.to_string()))
        }
    }
}

/// Text of the builtin catalog.
pub const BUILTIN_CATALOG: &str = include_str!("../data/builtin.cat");

/// Builtin certificate templates by file name.
pub const BUILTIN_CERTS: [(&str, &str); 6] = [
    ("t3_l1.cert", include_str!("../data/certs/t3_l1.cert")),
    ("t3_l4.cert", include_str!("../data/certs/t3_l4.cert")),
    ("t3_l10.cert", include_str!("../data/certs/t3_l10.cert")),
    ("t3_r13.cert", include_str!("../data/certs/t3_r13.cert")),
    ("t3_r14.cert", include_str!("../data/certs/t3_r14.cert")),
    ("t3_r16.cert", include_str!("../data/certs/t3_r16.cert")),
];

/// Builtin classified families.
pub fn builtin_tables() -> Vec<CatalogEntry> {
    parse_catalog(BUILTIN_CATALOG).expect("builtin catalog parses")
}

/// Number of entries per nilradical identifier that exist over `field`.
pub fn counts_by_nilradical(entries: &[CatalogEntry], field: FieldScope) -> BTreeMap<String, usize> {
    let mut out: BTreeMap<String, usize> = NILRADICAL_IDS.iter().map(|id| (id.to_string(), 0)).collect();
    for e in entries.iter().filter(|e| e.field.includes(field)) {
        *out.entry(e.nilradical.id.clone()).or_default() += 1;
    }
    out
}

// ---------------------------------------------------------------- instances

impl CatalogEntry {
    /// Check parameters and entry constraints for `field` (`R` or `C`).
    pub fn check_assignment<F: Scalar>(&self, env: &ParamAssignment<F>, field: FieldScope) -> Result<(), Error> {
        if !self.field.includes(field) {
            return Err(Error::Constraint(format!("{} does not exist over {}", self.name, field.as_str())));
        }
        for p in &self.params {
            if !env.contains_key(p) {
                return Err(Error::Constraint(format!("parameter {p} of {} has no value", self.name)));
            }
        }
        for c in self.constraints.iter().filter(|c| c.applies(field)) {
            for p in &c.preds {
                if !p.eval(env)? {
                    return Err(Error::Constraint(format!("{p} fails at {}", fmt_assignment(env))));
                }
            }
        }
        Ok(())
    }

    /// Numeric extension data at a parameter point.
    pub fn instantiate<F: Scalar>(&self, env: &ParamAssignment<F>, field: FieldScope) -> Result<ExtensionSpec<F>, Error> {
        self.check_assignment(env, field)?;
        self.instantiate_unchecked(env)
    }

    /// Instantiate without checking constraints (equivalence claims range
    /// over the whole parameter space where the data is defined).
    pub fn instantiate_unchecked<F: Scalar>(&self, env: &ParamAssignment<F>) -> Result<ExtensionSpec<F>, Error> {
        let n = resolve_nilradical::<F>(&self.nilradical)?;
        let a = self.a.eval(env)?;
        let b = self.b.eval(env)?;
        let mut sigma = vec![F::zero(); 5];
        for t in self.xy.iter().flatten() {
            let c = match &t.coef {
                Some(e) => e.eval(env)?,
                None => F::one(),
            };
            sigma[t.index - 1] += if t.negative { -c } else { c };
        }
        ExtensionSpec::new(n, a, b, sigma)
    }

    /// Label such as `T3.L4@a=2,b=3`.
    pub fn point_label<F: Scalar>(&self, env: &ParamAssignment<F>) -> String {
        if self.params.is_empty() {
            self.name.clone()
        } else {
            format!("{}@{}", self.name, fmt_assignment_ordered(env, &self.params))
        }
    }
}

/// `a=2,b=-1/2` in map order.
pub fn fmt_assignment<F: Scalar>(env: &ParamAssignment<F>) -> String {
    env.iter().map(|(k, v)| format!("{k}={}", crate::scalar::fmt_scalar(v))).collect::<Vec<_>>().join(",")
}

fn fmt_assignment_ordered<F: Scalar>(env: &ParamAssignment<F>, order: &[String]) -> String {
    order
        .iter()
        .filter_map(|k| env.get(k).map(|v| format!("{k}={}", crate::scalar::fmt_scalar(v))))
        .collect::<Vec<_>>()
        .join(",")
}

/// Base sampling pool, in order.
pub fn sample_pool() -> Vec<Q> {
    vec![qf(0, 1), qf(1, 1), qf(-1, 1), qf(2, 1), qf(-2, 1), qf(1, 2), qf(-1, 2), qf(3, 1), qf(-3, 2)]
}

/// Sampled parameter points; `short` is set when fewer than requested exist.
#[derive(Clone, Debug, PartialEq)]
pub struct Samples<F> {
    pub points: Vec<ParamAssignment<F>>,
    pub short: bool,
}

/// Index tuples ordered by maximum entry, then lexicographically, so that
/// small pool prefixes are exhausted before larger values appear.
fn graded_tuples(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k {
        all = all.into_iter().flat_map(|t| (0..len).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    all.sort_by_key(|t| (t.iter().copied().max().unwrap_or(0), t.clone()));
    all
}

fn candidate_values(entry: &CatalogEntry, field: FieldScope, seed: u64) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut pool = sample_pool();
    if seed != 0 {
        pool.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let base = pool.len();
    let mut bounds = Vec::new();
    for c in entry.constraints.iter().filter(|c| c.applies(field)) {
        c.preds.iter().for_each(|p| p.boundary_points(&mut bounds));
    }
    let empty = ParamAssignment::<Q>::new();
    let lists: Vec<Vec<Q>> = entry
        .params
        .iter()
        .map(|p| {
            let mut vals = pool.clone();
            for (bp, c) in &bounds {
                if bp != p {
                    continue;
                }
                if let Ok(c) = c.eval::<Q>(&empty) {
                    for d in [qf(1, 3), qf(-1, 3)] {
                        let v = c.clone() + d;
                        if !vals.contains(&v) {
                            vals.push(v);
                        }
                    }
                }
            }
            vals
        })
        .collect();
    let bases = vec![base; entry.params.len()];
    (lists, bases)
}

/// Deterministic parameter points satisfying the entry constraints.
///
/// Points come from the pool `{0, 1, -1, 2, -2, 1/2, -1/2, 3, -3/2}` (shuffled
/// when `seed != 0`); multi-parameter tuples are ordered by largest pool index.
/// When constraints exclude values, one point adjacent to an excluded or
/// boundary value (offset by ±1/3) is included.
pub fn sample_params<F: Scalar>(entry: &CatalogEntry, field: FieldScope, count: usize, seed: u64) -> Samples<F> {
    sample_where(entry, field, count, seed, |env| entry.check_assignment(env, field).is_ok())
}

fn sample_where<F: Scalar>(
    entry: &CatalogEntry,
    field: FieldScope,
    count: usize,
    seed: u64,
    accept: impl Fn(&ParamAssignment<F>) -> bool,
) -> Samples<F> {
    let (lists, bases) = candidate_values(entry, field, seed);
    let len = lists.iter().map(|l| l.len()).max().unwrap_or(1);
    let mut main = Vec::new();
    let mut adjacent = Vec::new();
    for t in graded_tuples(entry.params.len(), len) {
        if t.iter().zip(&lists).any(|(&i, l)| i >= l.len()) {
            continue;
        }
        let env: ParamAssignment<F> =
            entry.params.iter().zip(t.iter().zip(&lists)).map(|(p, (&i, l))| (p.clone(), F::from_q(l[i].clone()))).collect();
        if !accept(&env) {
            continue;
        }
        let is_adjacent = t.iter().zip(&bases).any(|(&i, &b)| i >= b);
        if is_adjacent {
            if adjacent.is_empty() {
                adjacent.push(env);
            }
        } else if main.len() < count {
            main.push(env);
        }
        if main.len() >= count && !adjacent.is_empty() {
            break;
        }
    }
    let mut points = main;
    if count >= 2 && !adjacent.is_empty() {
        points.truncate(count - 1);
        points.extend(adjacent);
    }
    let short = points.len() < count;
    Samples { points, short }
}

/// Parameter points for checking an equivalence claim: the guard must hold
/// and both sides must evaluate; entry constraints are ignored.
pub fn sample_equivalence<F: Scalar>(
    entry: &CatalogEntry,
    eq: &Equivalence,
    count: usize,
    seed: u64,
) -> Vec<(ParamAssignment<F>, ParamAssignment<F>, ParamAssignment<F>)> {
    let side = |env: &ParamAssignment<F>, t: &[Expr]| -> Option<ParamAssignment<F>> {
        entry.params.iter().zip(t).map(|(p, e)| e.eval(env).ok().map(|v| (p.clone(), v))).collect()
    };
    let ok = |env: &ParamAssignment<F>| -> bool {
        let guard = eq.guard.as_ref().is_none_or(|g| g.eval(env).unwrap_or(false));
        guard
            && side(env, &eq.lhs).is_some_and(|s| entry.instantiate_unchecked(&s).is_ok())
            && side(env, &eq.rhs).is_some_and(|s| entry.instantiate_unchecked(&s).is_ok())
    };
    // sample over a scope with no constraints
    let free = CatalogEntry { constraints: Vec::new(), ..entry.clone() };
    let s = sample_where::<F>(&free, FieldScope::R, count, seed, ok);
    s.points
        .into_iter()
        .map(|env| {
            let l = side(&env, &eq.lhs).unwrap();
            let r = side(&env, &eq.rhs).unwrap();
            (env, l, r)
        })
        .collect()
}

/// Parse `a=2,b=-1/2` into an assignment.
pub fn parse_assignment<F: Scalar>(text: &str) -> Result<ParamAssignment<F>, Error> {
    let mut env = ParamAssignment::new();
    if text.trim().is_empty() {
        return Ok(env);
    }
    for part in text.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Eval(format!("expected name=value in '{part}'")))?;
        let toks = lex(v).map_err(Error::Parse)?;
        let mut p = Parser { toks, i: 0, end: (1, v.len() + 1) };
        let e = p.expr().map_err(Error::Parse)?;
        if p.peek().is_some() {
            return Err(Error::Eval(format!("trailing input in '{v}'")));
        }
        env.insert(k.trim().to_string(), e.eval(&ParamAssignment::<F>::new())?);
    }
    Ok(env)
}

/// Parse one scalar expression (used by certificate files).
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0, end: (1, text.len() + 1) };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err(format!("unexpected {}", p.describe()));
    }
    Ok(e)
}

/// Rational value of a constant expression, for display.
pub fn const_value(e: &Expr) -> Option<String> {
    e.eval::<Q>(&ParamAssignment::new()).ok().map(|v| fmt_q(&v))
}

#[allow(dead_code)]
fn _assert_traits() {
    fn s<T: Send + Sync>() {}
    s::<CatalogEntry>();
    let _ = (BigInt::one().is_positive(), Q::zero());
}
