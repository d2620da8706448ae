//! Bounded solvers for the exponential Diophantine equations in powers of
//! 2 and 3 that govern supplementing subexpressions.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::Error;

/// Largest exponent bound accepted by [`solve_eq10`].
pub const MAX_EXP_LIMIT: u32 = 16;

/// A solution of `2^a 3^b + 2^c 3^d = 2^e 3^f + 2^g 3^h` in canonical form:
/// each side's exponent pairs ordered lexicographically, then the sides
/// ordered lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, serde::Serialize)]
pub struct Eq10Solution {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub e: u32,
    pub f: u32,
    pub g: u32,
    pub h: u32,
    pub trivial: bool,
}

impl Eq10Solution {
    /// The shared value of both sides.
    pub fn value(&self) -> BigUint {
        pow23(self.a, self.b) + pow23(self.c, self.d)
    }
}

pub fn pow23(a: u32, b: u32) -> BigUint {
    BigUint::from(2u32).pow(a) * BigUint::from(3u32).pow(b)
}

fn canonical(
    mut s1: ((u32, u32), (u32, u32)),
    mut s2: ((u32, u32), (u32, u32)),
) -> Eq10Solution {
    if s1.0 > s1.1 {
        s1 = (s1.1, s1.0);
    }
    if s2.0 > s2.1 {
        s2 = (s2.1, s2.0);
    }
    if s1 > s2 {
        std::mem::swap(&mut s1, &mut s2);
    }
    Eq10Solution {
        a: s1.0 .0,
        b: s1.0 .1,
        c: s1.1 .0,
        d: s1.1 .1,
        e: s2.0 .0,
        f: s2.0 .1,
        g: s2.1 .0,
        h: s2.1 .1,
        trivial: s1 == s2,
    }
}

/// All solutions with every exponent at most `max_exp`, canonicalized and
/// deduplicated, via a table of two-term sums keyed by value.
pub fn solve_eq10(max_exp: u32) -> Result<Vec<Eq10Solution>, Error> {
    if max_exp > MAX_EXP_LIMIT {
        return Err(Error::Invalid(format!(
            "exponent bound {} exceeds the limit {}",
            max_exp, MAX_EXP_LIMIT
        )));
    }
    let powers: Vec<((u32, u32), BigUint)> = (0..=max_exp)
        .flat_map(|a| (0..=max_exp).map(move |b| ((a, b), pow23(a, b))))
        .collect();
    let mut sums: HashMap<BigUint, Vec<((u32, u32), (u32, u32))>> = HashMap::new();
    for (i, (p, vp)) in powers.iter().enumerate() {
        for (q, vq) in &powers[i..] {
            sums.entry(vp + vq).or_default().push((*p, *q));
        }
    }
    let mut out = BTreeSet::new();
    for group in sums.values() {
        for (i, s1) in group.iter().enumerate() {
            for s2 in &group[i..] {
                out.insert(canonical(*s1, *s2));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// CSV rows `a,b,c,d,e,f,g,h,value,trivial` with a header line.
pub fn eq10_csv(solutions: &[Eq10Solution]) -> String {
    let mut s = String::from("a,b,c,d,e,f,g,h,value,trivial\n");
    for x in solutions {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            x.a,
            x.b,
            x.c,
            x.d,
            x.e,
            x.f,
            x.g,
            x.h,
            x.value(),
            x.trivial
        ));
    }
    s
}

/// A solution of `2^(m+k1) 3^(n+k2) - (2^(m+pi1) 3^(n+pi2) - 2^(i+pi2) 3^(j+pi1))
/// = 2^l1 3^l2`, with the configuration it was solved under.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, serde::Serialize)]
pub struct Eq9Solution {
    pub k1: u32,
    pub k2: u32,
    pub l1: u32,
    pub l2: u32,
    pub m: u32,
    pub n: u32,
    pub i: u32,
    pub j: u32,
    pub pi1: u8,
    pub pi2: u8,
}

/// All `(k1, k2, l1, l2)` with `k1 + k2 <= max_k`, excluding `(0,0)` and the
/// excluded case `(k1, k2) = (pi1, pi2)`.
pub fn solve_eq9(
    m: u32,
    n: u32,
    i: u32,
    j: u32,
    pi1: u8,
    pi2: u8,
    max_k: u32,
) -> Result<Vec<Eq9Solution>, Error> {
    if !((pi1, pi2) == (0, 1) || (pi1, pi2) == (1, 0)) {
        return Err(Error::Invalid(
            "the orientation flags must be 0,1 in some order".into(),
        ));
    }
    let lhs_big = pow23(m + pi1 as u32, n + pi2 as u32);
    let rhs_big = pow23(i + pi2 as u32, j + pi1 as u32);
    if lhs_big <= rhs_big {
        return Err(Error::Invalid(
            "the configuration has a nonpositive degree-gap".into(),
        ));
    }
    let dgap = lhs_big - rhs_big;
    let mut out = Vec::new();
    for k1 in 0..=max_k {
        for k2 in 0..=(max_k - k1) {
            if (k1, k2) == (0, 0) || (k1, k2) == (pi1 as u32, pi2 as u32) {
                continue;
            }
            let stage = pow23(m + k1, n + k2);
            if stage <= dgap {
                continue;
            }
            let rest = stage - &dgap;
            if let Some((l1, l2)) = factor_23_big(&rest) {
                out.push(Eq9Solution {
                    k1,
                    k2,
                    l1,
                    l2,
                    m,
                    n,
                    i,
                    j,
                    pi1,
                    pi2,
                });
            }
        }
    }
    Ok(out)
}

fn factor_23_big(v: &BigUint) -> Option<(u32, u32)> {
    use num_traits::Zero;
    let mut v = v.clone();
    let mut a = 0;
    let mut b = 0;
    while (&v % 2u32).is_zero() {
        v /= 2u32;
        a += 1;
    }
    while (&v % 3u32).is_zero() {
        v /= 3u32;
        b += 1;
    }
    if v.is_one() {
        Some((a, b))
    } else {
        None
    }
}

/// CSV rows `k1,k2,l1,l2,m,n,i,j,pi1,pi2` with a header line.
pub fn eq9_csv(solutions: &[Eq9Solution]) -> String {
    let mut s = String::from("k1,k2,l1,l2,m,n,i,j,pi1,pi2\n");
    for x in solutions {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            x.k1, x.k2, x.l1, x.l2, x.m, x.n, x.i, x.j, x.pi1, x.pi2
        ));
    }
    s
}
