//! Exact polynomials in the simple roots over ℚ.
//!
//! A [`Poly`] lives in `ℚ[α_1, …, α_r]` with the cohomological grading
//! `deg α_i = 2`. Terms are kept in a `BTreeMap` under graded lexicographic
//! order, so printing (highest term first) is deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;
use smallvec::SmallVec;

use crate::cartan::{CartanData, WeylElement};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u16; 4]>);

impl Monomial {
    pub fn one(rank: usize) -> Self {
        Monomial(SmallVec::from_elem(0, rank))
    }

    pub fn var(rank: usize, i: usize) -> Self {
        let mut m = Self::one(rank);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn quotient(&self, divisor: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect())
    }

    /// All exponent vectors of the given total degree in `rank` variables,
    /// in ascending graded-lex order.
    pub fn all_of_degree(rank: usize, degree: u32) -> Vec<Monomial> {
        fn rec(rank: usize, left: u32, prefix: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == rank {
                prefix.push(left as u16);
                out.push(Monomial::from_exponents(prefix));
                prefix.pop();
                return;
            }
            for e in 0..=left {
                prefix.push(e as u16);
                rec(rank, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if rank == 0 {
            if degree == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(rank, degree, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Cohomological degree of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    /// The zero polynomial.
    NegInfinity,
    Homogeneous(u32),
    Inhomogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    rank: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(rank: usize) -> Self {
        Poly { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, Rational::one())
    }

    pub fn constant(rank: usize, c: Rational) -> Self {
        Self::monomial(rank, Monomial::one(rank), c)
    }

    pub fn monomial(rank: usize, m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { rank, terms }
    }

    /// The simple root `α_i` (0-based index).
    pub fn var(rank: usize, i: usize) -> Self {
        Self::monomial(rank, Monomial::var(rank, i), Rational::one())
    }

    /// The linear form with root-coordinate vector `v`.
    pub fn linear(v: &[i64]) -> Self {
        let rank = v.len();
        let mut p = Poly::zero(rank);
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                p.terms.insert(Monomial::var(rank, i), int(c));
            }
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(rank: usize, terms: I) -> Self {
        let mut p = Poly::zero(rank);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.total_degree() == 0 && c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant term, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.total_degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn check_rank(&self, other: &Poly) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch { left: self.rank, right: other.rank })
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_rank(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_rank(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_rank(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.rank);
        }
        Poly {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.rank);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree(&self) -> Degree {
        let mut degrees = self.terms.keys().map(Monomial::total_degree);
        match degrees.next() {
            None => Degree::NegInfinity,
            Some(d) => {
                if degrees.all(|e| e == d) {
                    Degree::Homogeneous(2 * d)
                } else {
                    Degree::Inhomogeneous
                }
            }
        }
    }

    /// True when zero or homogeneous of cohomological degree `d`.
    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        self.terms.keys().all(|m| 2 * i64::from(m.total_degree()) == d)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Ring homomorphism sending `α_j` to `images[j]`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(p.rank), p.clone()]).collect();
        let out_rank = images.first().map_or(self.rank, |p| p.rank);
        let mut out = Poly::zero(out_rank);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(out_rank, c.clone());
            for (j, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let powers = &mut cache[j];
                while powers.len() <= usize::from(e) {
                    let next = &powers[powers.len() - 1] * &images[j];
                    powers.push(next);
                }
                t = &t * &powers[usize::from(e)];
            }
            out += &t;
        }
        out
    }

    /// Divides by the variable `α_i`; fails if some term is not divisible.
    pub fn div_by_var(&self, i: usize) -> Result<Poly> {
        let mut out = Poly::zero(self.rank);
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                return Err(Error::InexactDivision(format!("{self} is not divisible by a{}", i + 1)));
            }
            let mut q = m.clone();
            q.0[i] -= 1;
            out.terms.insert(q, c.clone());
        }
        Ok(out)
    }

    /// Exact division; fails with [`Error::InexactDivision`] on a nonzero remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        self.check_rank(divisor)?;
        let (lead_m, lead_c) = divisor
            .terms
            .iter()
            .next_back()
            .ok_or_else(|| Error::InexactDivision("division by zero".into()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.rank);
        while let Some((m, c)) = rem.terms.iter().next_back() {
            if !lead_m.divides(m) {
                return Err(Error::InexactDivision(format!("{self} by {divisor}")));
            }
            let qm = m.quotient(lead_m);
            let qc = c / lead_c;
            let step = Poly::monomial(self.rank, qm.clone(), qc.clone());
            rem -= &(&step * divisor);
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    // --- text and JSON forms -------------------------------------------------

    /// Parses the text grammar: `a1`…`ar`, rationals, `+ - * / ^` and parentheses.
    pub fn parse(text: &str, rank: usize) -> Result<Poly> {
        let mut p = Parser { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, rank };
        if p.chars.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let out = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!("unexpected `{}` in `{text}`", p.chars[p.pos])));
        }
        Ok(out)
    }

    /// `[[numerator, denominator, [e_1, …, e_r]], …]`, highest term first.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .rev()
                .map(|(m, c)| {
                    Value::Array(vec![
                        Value::String(c.numer().to_string()),
                        Value::String(c.denom().to_string()),
                        Value::Array(m.exponents().iter().map(|&e| Value::from(e)).collect()),
                    ])
                })
                .collect(),
        )
    }

    pub fn from_json(value: &Value, rank: usize) -> Result<Poly> {
        if let Value::String(s) = value {
            return Poly::parse(s, rank);
        }
        let items = value.as_array().ok_or_else(|| Error::Schema("polynomial must be a list of terms".into()))?;
        let mut p = Poly::zero(rank);
        for item in items {
            let parts = item.as_array().filter(|a| a.len() == 3).ok_or_else(|| {
                Error::Schema("term must be [numerator, denominator, exponents]".into())
            })?;
            let num = json_integer(&parts[0])?;
            let den = json_integer(&parts[1])?;
            if den.is_zero() {
                return Err(Error::Schema("zero denominator".into()));
            }
            let exps = parts[2].as_array().ok_or_else(|| Error::Schema("exponents must be a list".into()))?;
            if exps.len() != rank {
                return Err(Error::Schema(format!("expected {rank} exponents, got {}", exps.len())));
            }
            let exps: Vec<u16> = exps
                .iter()
                .map(|e| e.as_u64().and_then(|e| u16::try_from(e).ok()))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Schema("exponents must be small non-negative integers".into()))?;
            p.add_term(Monomial::from_exponents(&exps), BigRational::new(num, den));
        }
        Ok(p)
    }
}

fn json_integer(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Schema(format!("`{n}` is not an integer"))),
        Value::String(s) => s.parse().map_err(|_| Error::Schema(format!("`{s}` is not an integer"))),
        _ => Err(Error::Schema("expected an integer".into())),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if negative {
                write!(f, "-")?;
            } else if k > 0 {
                write!(f, "+")?;
            }
            let vars: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("a{}", i + 1) } else { format!("a{}^{e}", i + 1) })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    rank: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            if c == '*' {
                acc = &acc * &rhs;
            } else {
                let d = rhs
                    .as_constant()
                    .filter(|d| !d.is_zero())
                    .ok_or_else(|| Error::Parse("division only by nonzero constants".into()))?;
                acc = acc.scale(&d.recip());
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.number()?;
            let e = e.to_u32().filter(|&e| e <= 1000).ok_or_else(|| Error::Parse("bad exponent".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected a number at position {start}")));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| Error::Parse(format!("bad number `{s}`")))
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('a') => {
                self.pos += 1;
                let i = self.number()?;
                let i = i.to_usize().filter(|&i| i >= 1 && i <= self.rank).ok_or_else(|| {
                    Error::Parse(format!("variable a{i} out of range for rank {}", self.rank))
                })?;
                Ok(Poly::var(self.rank, i - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(Poly::constant(self.rank, BigRational::from_integer(n)))
            }
            Some(c) => Err(Error::Parse(format!("unexpected `{c}`"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

// --- arithmetic -------------------------------------------------------------

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        debug_assert_eq!(self.rank, rhs.rank);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        debug_assert_eq!(self.rank, rhs.rank);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.rank, rhs.rank);
        let mut out = Poly::zero(self.rank);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -self.clone()
    }
}

// --- Weyl action and Demazure operators ---------------------------------------

/// `w(f)`: substitutes every `α_j` by the root `w(α_j)`.
pub fn weyl_act(w: &WeylElement, f: &Poly) -> Result<Poly> {
    if w.rank() != f.rank() {
        return Err(Error::RankMismatch { left: w.rank(), right: f.rank() });
    }
    if w.is_identity() || f.is_zero() {
        return Ok(f.clone());
    }
    let r = f.rank();
    let images: Vec<Poly> = (0..r)
        .map(|j| Poly::linear(&(0..r).map(|i| w.matrix()[i][j]).collect::<Vec<_>>()))
        .collect();
    Ok(f.substitute(&images))
}

/// `s(f)` for the simple reflection `s`.
pub fn reflect(c: &CartanData, s: usize, f: &Poly) -> Result<Poly> {
    weyl_act(&c.reflection(s)?, f)
}

fn check_poly_rank(c: &CartanData, f: &Poly) -> Result<()> {
    if c.rank() == f.rank() {
        Ok(())
    } else {
        Err(Error::RankMismatch { left: c.rank(), right: f.rank() })
    }
}

/// The Demazure operator `∂_s(f) = (f - s(f)) / α_s`.
pub fn demazure(c: &CartanData, s: usize, f: &Poly) -> Result<Poly> {
    check_poly_rank(c, f)?;
    let diff = f - &reflect(c, s, f)?;
    diff.div_by_var(s)
}

/// `P_s(f) = (f + s(f)) / 2`.
pub fn average(c: &CartanData, s: usize, f: &Poly) -> Result<Poly> {
    check_poly_rank(c, f)?;
    Ok((f + &reflect(c, s, f)?).scale(&rat(1, 2)))
}

/// Splits `f = P_s(f) + ∂_s(f)·α_s/2` and returns `(P_s(f), ∂_s(f))`.
pub fn decompose(c: &CartanData, s: usize, f: &Poly) -> Result<(Poly, Poly)> {
    check_poly_rank(c, f)?;
    let sf = reflect(c, s, f)?;
    let avg = (f + &sf).scale(&rat(1, 2));
    let dem = (f - &sf).div_by_var(s)?;
    Ok((avg, dem))
}

pub fn is_invariant(c: &CartanData, s: usize, f: &Poly) -> Result<bool> {
    Ok(reflect(c, s, f)? == *f)
}

/// `x_s = α_s / 2`.
pub fn half_root(rank: usize, s: usize) -> Poly {
    Poly::var(rank, s).scale(&rat(1, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a2() -> CartanData {
        CartanData::from_type("A2").unwrap()
    }

    fn p(s: &str, r: usize) -> Poly {
        Poly::parse(s, r).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let a1 = Poly::var(2, 0);
        assert!((&a1 + &(-&a1)).is_zero());
        assert_eq!(&a1 * &Poly::var(2, 1), p("a1*a2", 2));
        assert_eq!(a1.scale(&rat(1, 2)), half_root(2, 0));
        assert!(a1.try_add(&Poly::var(3, 0)).is_err());
    }

    #[test]
    fn printing_is_graded_lex_descending() {
        assert_eq!(p("2*a2+a1", 2).to_string(), "a1+2*a2");
        assert_eq!(p("1/2*a1^2*a2 - 3*a2", 2).to_string(), "1/2*a1^2*a2-3*a2");
        assert_eq!(p("-1 + a1", 2).to_string(), "a1-1");
        assert_eq!(Poly::zero(2).to_string(), "0");
        assert_eq!(p("(a1+a2)^2", 2).to_string(), "a1^2+2*a1*a2+a2^2");
        assert_eq!(p("a1/2", 2), half_root(2, 0));
    }

    #[test]
    fn parse_errors() {
        assert!(Poly::parse("a3", 2).is_err());
        assert!(Poly::parse("a1 +", 2).is_err());
        assert!(Poly::parse("a1/a2", 2).is_err());
        assert!(Poly::parse("", 2).is_err());
        assert!(Poly::parse("(a1", 2).is_err());
    }

    #[test]
    fn json_form() {
        let f = p("1/2*a1^2*a2 - 3*a2", 2);
        let j = f.to_json();
        assert_eq!(Poly::from_json(&j, 2).unwrap(), f);
        let numeric = serde_json::json!([[1, 2, [2, 1]], [-3, 1, [0, 1]]]);
        assert_eq!(Poly::from_json(&numeric, 2).unwrap(), f);
        assert!(Poly::from_json(&serde_json::json!([[1, 0, [1, 0]]]), 2).is_err());
    }

    #[test]
    fn weyl_action_examples() {
        let c = a2();
        let s = c.reflection(0).unwrap();
        assert_eq!(weyl_act(&s, &Poly::var(2, 0)).unwrap(), -Poly::var(2, 0));
        assert_eq!(weyl_act(&s, &Poly::var(2, 1)).unwrap(), p("a1+a2", 2));
        let f = p("a1^2*a2-7", 2);
        assert_eq!(weyl_act(&WeylElement::identity(2), &f).unwrap(), f);
        assert!(weyl_act(&WeylElement::identity(3), &f).is_err());
    }

    #[test]
    fn demazure_examples() {
        let c = a2();
        assert_eq!(demazure(&c, 0, &Poly::var(2, 0)).unwrap(), Poly::constant(2, int(2)));
        assert!(demazure(&c, 0, &p("a1^2", 2)).unwrap().is_zero());
        // (α_sα_t + α_s(α_s+α_t)) / α_s = 2α_t + α_s
        assert_eq!(demazure(&c, 0, &p("a1*a2", 2)).unwrap(), p("2*a2+a1", 2));
        assert!(demazure(&c, 0, &Poly::var(3, 0)).is_err());
    }

    #[test]
    fn average_examples() {
        let c = a2();
        assert!(average(&c, 0, &Poly::var(2, 0)).unwrap().is_zero());
        let inv = p("a1^2", 2);
        assert_eq!(average(&c, 0, &inv).unwrap(), inv);
        assert_eq!(average(&c, 0, &p("a1*a2", 2)).unwrap(), p("-1/2*a1^2", 2));
    }

    #[test]
    fn decompose_examples() {
        let c = a2();
        let (pf, df) = decompose(&c, 0, &Poly::var(2, 0)).unwrap();
        assert!(pf.is_zero());
        assert_eq!(df, Poly::constant(2, int(2)));
        let (pf, df) = decompose(&c, 0, &Poly::one(2)).unwrap();
        assert_eq!((pf, df), (Poly::one(2), Poly::zero(2)));
        let f = p("a1*a2", 2);
        let (pf, df) = decompose(&c, 0, &f).unwrap();
        assert_eq!(pf, p("-1/2*a1^2", 2));
        assert_eq!(df, p("2*a2+a1", 2));
        assert_eq!(&pf + &(&df * &half_root(2, 0)), f);
    }

    #[test]
    fn invariance_and_degree() {
        let c = a2();
        assert!(!is_invariant(&c, 0, &Poly::var(2, 0)).unwrap());
        assert!(is_invariant(&c, 0, &p("a1^2", 2)).unwrap());
        assert_eq!(Poly::var(2, 0).degree(), Degree::Homogeneous(2));
        assert_eq!(p("a1*a2", 2).degree(), Degree::Homogeneous(4));
        assert_eq!(p("a1+1", 2).degree(), Degree::Inhomogeneous);
        assert_eq!(Poly::zero(2).degree(), Degree::NegInfinity);
    }

    #[test]
    fn exact_division() {
        let f = p("a1^2-a2^2", 2);
        assert_eq!(f.div_exact(&p("a1+a2", 2)).unwrap(), p("a1-a2", 2));
        assert!(f.div_exact(&p("a1+2*a2", 2)).is_err());
        assert!(f.div_exact(&Poly::zero(2)).is_err());
        assert!(p("a1+1", 2).div_by_var(0).is_err());
    }

    #[test]
    fn monomials_of_degree() {
        assert_eq!(Monomial::all_of_degree(2, 3).len(), 4);
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(1, 0).len(), 1);
    }

    fn arb_poly(rank: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u16..4, rank), -5i64..6, 1i64..4), 0..6).prop_map(
            move |terms| {
                Poly::from_terms(rank, terms.into_iter().map(|(e, n, d)| (Monomial::from_exponents(&e), rat(n, d))))
            },
        )
    }

    proptest! {
        #[test]
        fn decomposition_reassembles(f in arb_poly(2), which in 0usize..3, s in 0usize..2) {
            let c = CartanData::from_type(["A2", "B2", "G2"][which]).unwrap();
            let (pf, df) = decompose(&c, s, &f).unwrap();
            prop_assert_eq!(&pf + &(&df * &half_root(2, s)), f);
            prop_assert!(is_invariant(&c, s, &pf).unwrap());
            prop_assert!(is_invariant(&c, s, &df).unwrap());
        }

        #[test]
        fn demazure_squares_to_zero(f in arb_poly(3), s in 0usize..3) {
            let c = CartanData::from_type("B3").unwrap();
            let once = demazure(&c, s, &f).unwrap();
            prop_assert!(demazure(&c, s, &once).unwrap().is_zero());
        }

        #[test]
        fn weyl_action_composes(f in arb_poly(2), u in prop::collection::vec(0usize..2, 0..5), v in prop::collection::vec(0usize..2, 0..5)) {
            let c = CartanData::from_type("G2").unwrap();
            let w1 = c.weyl_from_word(&u).unwrap();
            let w2 = c.weyl_from_word(&v).unwrap();
            let lhs = weyl_act(&w1, &weyl_act(&w2, &f).unwrap()).unwrap();
            let rhs = weyl_act(&w1.compose(&w2).unwrap(), &f).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn text_form_round_trips(f in arb_poly(3)) {
            prop_assert_eq!(Poly::parse(&f.to_string(), 3).unwrap(), f);
        }
    }
}
