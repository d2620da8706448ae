//! Exact sparse polynomials with nonnegative integer coefficients.
//!
//! Exponents are machine words, coefficients arbitrary precision. Zero
//! coefficients are never stored; the empty map is the zero polynomial and
//! never arises as the image of a term.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Error;

/// Default cap on the number of stored terms a product may produce.
pub const DEFAULT_EXPANSION_CAP: usize = 2_000_000;

/// Sparse exponent-to-coefficient map. All stored coefficients are positive.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<u64, BigUint>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::monomial(0, BigUint::one())
    }

    /// The polynomial `x`.
    pub fn var() -> Poly {
        Poly::monomial(1, BigUint::one())
    }

    pub fn monomial(exp: u64, coeff: BigUint) -> Poly {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Poly { terms }
    }

    pub fn from_pairs<I: IntoIterator<Item = (u64, BigUint)>>(pairs: I) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in pairs {
            if !c.is_zero() {
                *p.terms.entry(e).or_insert_with(BigUint::zero) += c;
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: u64) -> BigUint {
        self.terms.get(&exp).cloned().unwrap_or_else(BigUint::zero)
    }

    /// Ascending iteration over `(exponent, coefficient)`.
    pub fn iter(&self) -> impl Iterator<Item = (&u64, &BigUint)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(*e).or_insert_with(BigUint::zero) += c;
        }
        Poly { terms }
    }

    /// Schoolbook convolution. Fails if the result would store more than
    /// `cap` terms; the caller should fall back to fingerprints in that case.
    pub fn mul(&self, other: &Poly, cap: usize) -> Result<Poly, Error> {
        if self.terms.len().saturating_mul(other.terms.len()) > cap {
            return Err(Error::ExpansionCapExceeded { cap });
        }
        let mut terms: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *terms.entry(ea + eb).or_insert_with(BigUint::zero) += ca * cb;
            }
            if terms.len() > cap {
                return Err(Error::ExpansionCapExceeded { cap });
            }
        }
        Ok(Poly { terms })
    }

    pub fn square(&self, cap: usize) -> Result<Poly, Error> {
        self.mul(self, cap)
    }

    pub fn cube(&self, cap: usize) -> Result<Poly, Error> {
        self.square(cap)?.mul(self, cap)
    }

    /// `(order, degree, lead, coeff_sum)` of a nonempty polynomial.
    pub fn profile(&self) -> Result<(u64, u64, BigUint, BigUint), Error> {
        let (min, _) = self.terms.iter().next().ok_or(Error::EmptyPolynomial)?;
        let (max, lead) = self.terms.iter().next_back().unwrap();
        let sum = self.terms.values().sum();
        Ok((*min, *max, lead.clone(), sum))
    }

    pub fn order(&self) -> Result<u64, Error> {
        Ok(self.profile()?.0)
    }

    pub fn degree(&self) -> Result<u64, Error> {
        Ok(self.profile()?.1)
    }

    pub fn lead(&self) -> Result<BigUint, Error> {
        Ok(self.profile()?.2)
    }

    pub fn coeff_sum(&self) -> BigUint {
        self.terms.values().sum()
    }

    /// Lexicographic comparison: decided by the coefficient at the greatest
    /// exponent where the two polynomials differ.
    pub fn lex_cmp(&self, other: &Poly) -> Ordering {
        let mut a = self.terms.iter().rev().peekable();
        let mut b = other.terms.iter().rev().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((ea, ca)), Some((eb, cb))) => match ea.cmp(eb) {
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Less => return Ordering::Less,
                    Ordering::Equal => match ca.cmp(cb) {
                        Ordering::Equal => {
                            a.next();
                            b.next();
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }

    /// Exact Horner evaluation over the sorted exponents.
    pub fn eval_at(&self, base: &BigUint) -> BigUint {
        let mut acc = BigUint::zero();
        let mut prev_exp: Option<u64> = None;
        for (e, c) in self.terms.iter().rev() {
            if let Some(pe) = prev_exp {
                acc *= base.pow((pe - e) as u32);
            }
            acc += c;
            prev_exp = Some(*e);
        }
        if let Some(pe) = prev_exp {
            acc *= base.pow(pe as u32);
        }
        acc
    }

    /// JSON form: `[[exponent, "coefficient"], ...]` descending by exponent.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .rev()
                .map(|(e, c)| serde_json::json!([e, c.to_string()]))
                .collect(),
        )
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{}*x^{}", c, e)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
