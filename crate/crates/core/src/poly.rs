//! Multivariate polynomials with exact rational coefficients in the variables
//! `x1..x{nvars}`.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic. No zero coefficient is ever stored, so two equal
//! polynomials always have identical term maps.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::error::{Error, ParseError, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};

/// Exponent vector of a monomial. Ordered by total degree, then
/// lexicographically with `x1 > x2 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exponents: Box<[u32]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            degree: 0,
            exponents: vec![0; nvars].into_boxed_slice(),
        }
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().sum();
        Monomial {
            degree,
            exponents: exponents.into_boxed_slice(),
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let exponents: Box<[u32]> = self
            .exponents
            .iter()
            .zip(other.exponents.iter())
            .map(|(a, b)| a + b)
            .collect();
        Monomial {
            degree: self.degree + other.degree,
            exponents,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, value: Rational) -> Self {
        Self::term(Monomial::one(nvars), value)
    }

    pub fn from_int(nvars: usize, value: i64) -> Self {
        Self::constant(nvars, int(value))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_int(nvars, 1)
    }

    /// Single term `coeff * monomial`.
    pub fn term(monomial: Monomial, coeff: Rational) -> Self {
        let nvars = monomial.nvars();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(monomial, coeff);
        }
        Poly { nvars, terms }
    }

    /// The coordinate function `x^{index+1}` (0-based index).
    pub fn var(nvars: usize, index: usize) -> Result<Self> {
        Self::var_pow(nvars, index, 1)
    }

    /// `(x^{index+1})^power` (0-based index).
    pub fn var_pow(nvars: usize, index: usize, power: u32) -> Result<Self> {
        if index >= nvars {
            return Err(Error::VariableOutOfRange { index, nvars });
        }
        let mut exps = vec![0; nvars];
        exps[index] = power;
        Ok(Self::term(Monomial::new(exps), Rational::one()))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn check_same(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::AmbientMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn arith(&self, other: &Poly, op: ArithOp) -> Result<Poly> {
        self.check_same(other)?;
        Ok(match op {
            ArithOp::Add => self.add_unchecked(other, false),
            ArithOp::Sub => self.add_unchecked(other, true),
            ArithOp::Mul => self.mul_unchecked(other),
        })
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.arith(other, ArithOp::Add)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.arith(other, ArithOp::Sub)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.arith(other, ArithOp::Mul)
    }

    fn add_unchecked(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = self.clone();
        out.accumulate(other, negate);
        out
    }

    fn accumulate(&mut self, other: &Poly, negate: bool) {
        for (mono, coeff) in &other.terms {
            let delta = if negate {
                -coeff.clone()
            } else {
                coeff.clone()
            };
            self.add_term(mono.clone(), delta);
        }
    }

    fn add_term(&mut self, mono: Monomial, coeff: Rational) {
        use std::collections::btree_map::Entry;
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> Poly {
        if factor.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to `x^{var+1}` (0-based `var`).
    pub fn partial(&self, var: usize) -> Result<Poly> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = Poly::zero(self.nvars);
        for (mono, coeff) in &self.terms {
            let e = mono.exponents[var];
            if e == 0 {
                continue;
            }
            let mut exps = mono.exponents.to_vec();
            exps[var] -= 1;
            out.add_term(Monomial::new(exps), coeff * int(e as i64));
        }
        Ok(out)
    }

    /// Exact substitution of a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::PointLength {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut total = Rational::zero();
        for (mono, coeff) in &self.terms {
            let mut value = coeff.clone();
            for (x, &e) in point.iter().zip(mono.exponents.iter()) {
                if e > 0 {
                    value *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += value;
        }
        Ok(total)
    }

    /// Value at the origin, i.e. the constant term.
    pub fn eval_origin(&self) -> Rational {
        self.constant_term()
    }

    /// Parses the text form produced by `Display` (terms joined by ` + `,
    /// each `c * x3^2 * x5^1`).
    pub fn parse(text: &str, nvars: usize) -> Result<Poly, ParseError> {
        let text = text.trim();
        let mut out = Poly::zero(nvars);
        if text == "0" || text.is_empty() {
            return Ok(out);
        }
        for raw in text.split(" + ") {
            let mut factors = raw.split('*').map(str::trim);
            let coeff_text = factors.next().ok_or_else(|| ParseError::Term(raw.into()))?;
            let coeff = parse_rational(coeff_text)?;
            let mut exps = vec![0u32; nvars];
            for factor in factors {
                let body = factor
                    .strip_prefix('x')
                    .ok_or_else(|| ParseError::Term(raw.into()))?;
                let (idx, pow) = match body.split_once('^') {
                    Some((i, p)) => (i, p),
                    None => (body, "1"),
                };
                let idx: usize = idx.parse().map_err(|_| ParseError::Term(raw.into()))?;
                let pow: u32 = pow.parse().map_err(|_| ParseError::Term(raw.into()))?;
                if idx == 0 || idx > nvars {
                    return Err(ParseError::Variable { index: idx, nvars });
                }
                exps[idx - 1] += pow;
            }
            out.add_term(Monomial::new(exps), coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (mono, coeff)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(&format_rational(coeff))?;
            for (i, &e) in mono.exponents.iter().enumerate() {
                if e > 0 {
                    write!(f, " * x{}^{}", i + 1, e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nvars, self)
    }
}

// Operator impls panic on an ambient mismatch; use `arith`/`checked_*` for
// untrusted inputs.

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial ambient mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial ambient mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial ambient mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "polynomial ambient mismatch");
        self.accumulate(rhs, false);
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "polynomial ambient mismatch");
        self.accumulate(rhs, true);
    }
}
