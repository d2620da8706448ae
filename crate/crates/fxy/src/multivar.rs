//! Multi-variable images and the reduction from many variables to one.
//!
//! Multivariate equality is decided by exact expansion only, at small scale;
//! the interesting content is the substitution argument that turns a
//! would-be multi-variable identity into a single-variable one.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::term::Term;

/// Sparse multivariate polynomial: exponent vector to positive coefficient.
/// Vector length is the ambient variable count, fixed per value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    num_vars: u32,
    terms: BTreeMap<Vec<u64>, BigUint>,
}

impl MPoly {
    pub fn zero(num_vars: u32) -> MPoly {
        MPoly { num_vars, terms: BTreeMap::new() }
    }

    /// The variable `x_index` (1-based).
    pub fn var(index: u32, num_vars: u32) -> MPoly {
        assert!(index >= 1 && index <= num_vars);
        let mut exps = vec![0u64; num_vars as usize];
        exps[(index - 1) as usize] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigUint::one());
        MPoly { num_vars, terms }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.num_vars, other.num_vars);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(e.clone()).or_insert_with(BigUint::zero) += c;
        }
        MPoly { num_vars: self.num_vars, terms }
    }

    pub fn mul(&self, other: &MPoly, cap: usize) -> Result<MPoly, Error> {
        assert_eq!(self.num_vars, other.num_vars);
        if self.terms.len().saturating_mul(other.terms.len()) > cap {
            return Err(Error::ExpansionCapExceeded { cap });
        }
        let mut terms: BTreeMap<Vec<u64>, BigUint> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(exps).or_insert_with(BigUint::zero) += ca * cb;
            }
            if terms.len() > cap {
                return Err(Error::ExpansionCapExceeded { cap });
            }
        }
        Ok(MPoly { num_vars: self.num_vars, terms })
    }

    pub fn square(&self, cap: usize) -> Result<MPoly, Error> {
        self.mul(self, cap)
    }

    pub fn cube(&self, cap: usize) -> Result<MPoly, Error> {
        self.square(cap)?.mul(self, cap)
    }

    /// Substitute every variable by the single variable `x`: exponent vectors
    /// collapse to their sums.
    pub fn collapse(&self) -> crate::poly::Poly {
        crate::poly::Poly::from_pairs(
            self.terms
                .iter()
                .map(|(e, c)| (e.iter().sum::<u64>(), c.clone())),
        )
    }

    /// Sorted `(exponents, coefficient)` pairs; a canonical grouping key.
    pub fn into_pairs(self) -> Vec<(Vec<u64>, BigUint)> {
        self.terms.into_iter().collect()
    }

    /// JSON form: `[[[e1,...,en], "coefficient"], ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| serde_json::json!([e, c.to_string()]))
                .collect(),
        )
    }
}

/// The evaluation map extended to `num_vars` variables.
pub fn mv_evaluate(t: &Term, num_vars: u32, cap: usize) -> Result<MPoly, Error> {
    match t {
        Term::Leaf(v) => Ok(MPoly::var(*v, num_vars)),
        Term::App(a, b) => {
            let pa = mv_evaluate(a, num_vars, cap)?.square(cap)?;
            let pb = mv_evaluate(b, num_vars, cap)?.cube(cap)?;
            Ok(pa.add(&pb))
        }
    }
}

/// Exact multivariate e-equivalence by expansion.
pub fn mv_e_equivalent(g: &Term, h: &Term, num_vars: u32, cap: usize) -> Result<bool, Error> {
    Ok(mv_evaluate(g, num_vars, cap)? == mv_evaluate(h, num_vars, cap)?)
}

/// Outcome of the substitution construction on a structure-sharing pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureWitness {
    /// The variable tuples coincide; no witness exists.
    SameStructureSameVars,
    /// Position `j` (1-based) is the first where the tuples differ; `var` is
    /// the differing variable of the first term. Replacing that variable by
    /// `f(x,x)` and every other by `x` yields the two collapsed terms, which
    /// are structurally distinct.
    Witness {
        position: usize,
        var: u32,
        collapsed: (Term, Term),
    },
}

/// Substitution construction: given two distinct terms with the same shape,
/// produce single-variable terms that would have to be equal if the originals
/// induced the same polynomial — and which differ structurally.
pub fn structure_witness(g: &Term, h: &Term) -> Result<StructureWitness, Error> {
    if g.collapse() != h.collapse() {
        return Err(Error::Invalid(
            "terms do not share a shape; collapse them first".into(),
        ));
    }
    let vg = g.variable_positions();
    let vh = h.variable_positions();
    let j = match vg.iter().zip(&vh).position(|(a, b)| a.0 != b.0) {
        Some(j) => j,
        None => return Ok(StructureWitness::SameStructureSameVars),
    };
    let var = vg[j].0;
    let fxx = Term::app(Term::x(), Term::x());
    let reduce = |t: &Term| -> Term {
        let mut out = t.substitute(var, &Term::Leaf(0));
        for v in 1..=t.max_var().max(h.max_var()) {
            if v != var {
                out = out.substitute(v, &Term::x());
            }
        }
        out.substitute(0, &fxx)
    };
    Ok(StructureWitness::Witness {
        position: j + 1,
        var,
        collapsed: (reduce(g), reduce(h)),
    })
}
