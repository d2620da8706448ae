//! Binary expression trees over the single binary symbol `f`.
//!
//! A [`Term`] is either a variable leaf or an application `f(left, right)`.
//! Leaves carry 1-based variable indices; single-variable work always uses
//! index 1.

use std::fmt;

use crate::error::Error;

/// An expression formed by recursively applying `f` to variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// A variable occurrence, carrying its 1-based index.
    Leaf(u32),
    /// An application `f(left, right)`.
    App(Box<Term>, Box<Term>),
}

impl Term {
    /// `f(a, b)` as a value.
    pub fn app(a: Term, b: Term) -> Term {
        Term::App(Box::new(a), Box::new(b))
    }

    /// The single-variable leaf `x`.
    pub fn x() -> Term {
        Term::Leaf(1)
    }

    /// Number of variable occurrences (leaves).
    pub fn leaf_count(&self) -> usize {
        match self {
            Term::Leaf(_) => 1,
            Term::App(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    /// Largest variable index occurring in the term.
    pub fn max_var(&self) -> u32 {
        match self {
            Term::Leaf(v) => *v,
            Term::App(a, b) => a.max_var().max(b.max_var()),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Term::Leaf(_))
    }

    /// True for `f(x, x)` with any single pair of leaves.
    pub fn is_leaf_pair(&self) -> bool {
        matches!(self, Term::App(a, b) if a.is_leaf() && b.is_leaf())
    }

    /// The `(variable, depth)` tuple of every leaf in left-to-right order.
    /// The bare variable has depth 0; wrapping under one application adds 1.
    pub fn variable_positions(&self) -> Vec<(u32, u32)> {
        fn walk(t: &Term, depth: u32, out: &mut Vec<(u32, u32)>) {
            match t {
                Term::Leaf(v) => out.push((*v, depth)),
                Term::App(a, b) => {
                    walk(a, depth + 1, out);
                    walk(b, depth + 1, out);
                }
            }
        }
        let mut out = Vec::with_capacity(self.leaf_count());
        walk(self, 0, &mut out);
        out
    }

    /// Replace every occurrence of variable `target` by `replacement`.
    pub fn substitute(&self, target: u32, replacement: &Term) -> Term {
        match self {
            Term::Leaf(v) if *v == target => replacement.clone(),
            Term::Leaf(v) => Term::Leaf(*v),
            Term::App(a, b) => Term::app(
                a.substitute(target, replacement),
                b.substitute(target, replacement),
            ),
        }
    }

    /// Replace every variable by `x`, collapsing to the one-variable fragment.
    pub fn collapse(&self) -> Term {
        match self {
            Term::Leaf(_) => Term::Leaf(1),
            Term::App(a, b) => Term::app(a.collapse(), b.collapse()),
        }
    }

    /// Canonical text form. Terms whose leaves are all `x1` print the bare
    /// variable as `x`; anything mentioning a higher index prints `x1`, `x2`,
    /// ... so the round trip through [`parse`] is unambiguous.
    pub fn render(&self) -> String {
        let multi = self.max_var() > 1;
        let mut s = String::new();
        self.render_into(&mut s, multi);
        s
    }

    fn render_into(&self, out: &mut String, multi: bool) {
        match self {
            Term::Leaf(v) => {
                if multi {
                    out.push('x');
                    out.push_str(&v.to_string());
                } else {
                    out.push('x');
                }
            }
            Term::App(a, b) => {
                out.push_str("f(");
                a.render_into(out, multi);
                out.push(',');
                b.render_into(out, multi);
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parse the grammar `term := "x" | "x" digits | "f(" term "," term ")"`.
/// Whitespace is insignificant. Digit suffixes are 1-based variable indices
/// and must not exceed `num_vars`.
pub fn parse(text: &str, num_vars: u32) -> Result<Term, Error> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let term = parse_term(bytes, &mut pos, num_vars)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(Error::Syntax {
            pos,
            msg: "trailing input after term".into(),
        });
    }
    Ok(term)
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn expect(bytes: &[u8], pos: &mut usize, ch: u8) -> Result<(), Error> {
    skip_ws(bytes, pos);
    if *pos < bytes.len() && bytes[*pos] == ch {
        *pos += 1;
        Ok(())
    } else {
        Err(Error::Syntax {
            pos: *pos,
            msg: format!("expected '{}'", ch as char),
        })
    }
}

fn parse_term(bytes: &[u8], pos: &mut usize, num_vars: u32) -> Result<Term, Error> {
    skip_ws(bytes, pos);
    match bytes.get(*pos) {
        Some(b'f') => {
            *pos += 1;
            expect(bytes, pos, b'(')?;
            let a = parse_term(bytes, pos, num_vars)?;
            expect(bytes, pos, b',')?;
            let b = parse_term(bytes, pos, num_vars)?;
            expect(bytes, pos, b')')?;
            Ok(Term::app(a, b))
        }
        Some(b'x') => {
            let start = *pos;
            *pos += 1;
            let digit_start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let idx = if *pos == digit_start {
                1
            } else {
                let digits = std::str::from_utf8(&bytes[digit_start..*pos]).unwrap();
                digits.parse::<u32>().map_err(|_| Error::Syntax {
                    pos: digit_start,
                    msg: "variable index out of range".into(),
                })?
            };
            if idx == 0 || idx > num_vars {
                return Err(Error::VarOutOfRange { pos: start, index: idx, num_vars });
            }
            Ok(Term::Leaf(idx))
        }
        _ => Err(Error::Syntax {
            pos: *pos,
            msg: "expected 'x' or 'f('".into(),
        }),
    }
}

/// Catalan number C(n); the number of shapes with n + 1 leaves.
pub fn catalan(n: u64) -> u64 {
    // C(n+1) = C(n) * 2(2n+1) / (n+2)
    let mut c: u64 = 1;
    for i in 0..n {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// All tree shapes with exactly `leaves` leaves, in canonical order:
/// left subtree leaf count descending, then recursively. Leaves carry
/// variable index 1.
pub fn shapes(leaves: usize) -> Vec<Term> {
    assert!(leaves >= 1);
    if leaves == 1 {
        return vec![Term::Leaf(1)];
    }
    let mut out = Vec::new();
    for left in (1..leaves).rev() {
        let ls = shapes(left);
        let rs = shapes(leaves - left);
        for l in &ls {
            for r in &rs {
                out.push(Term::app(l.clone(), r.clone()));
            }
        }
    }
    out
}

/// Rebuild a shape with the given left-to-right variable assignment.
fn assign_vars(shape: &Term, assignment: &[u32], next: &mut usize) -> Term {
    match shape {
        Term::Leaf(_) => {
            let v = assignment[*next];
            *next += 1;
            Term::Leaf(v)
        }
        Term::App(a, b) => {
            let left = assign_vars(a, assignment, next);
            let right = assign_vars(b, assignment, next);
            Term::app(left, right)
        }
    }
}

/// All terms with exactly `leaves` leaves over `num_vars` variables, in
/// canonical order: shape order, then variable index tuples lexicographically
/// ascending (leftmost leaf most significant).
pub fn terms_with_leaves(leaves: usize, num_vars: u32) -> Vec<Term> {
    assert!(num_vars >= 1);
    let shapes = shapes(leaves);
    if num_vars == 1 {
        return shapes;
    }
    let mut out = Vec::new();
    let mut assignment = vec![1u32; leaves];
    for shape in &shapes {
        loop {
            let mut next = 0;
            out.push(assign_vars(shape, &assignment, &mut next));
            // increment the index tuple, rightmost leaf fastest
            let mut i = leaves;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if assignment[i] < num_vars {
                    assignment[i] += 1;
                    for a in assignment.iter_mut().skip(i + 1) {
                        *a = 1;
                    }
                    break;
                }
                if i == 0 {
                    for a in assignment.iter_mut() {
                        *a = 1;
                    }
                    break;
                }
            }
            if assignment.iter().all(|&a| a == 1) {
                break;
            }
        }
    }
    out
}

/// Every term with 1..=`max_leaves` leaves, ascending leaf count, each leaf
/// count in the canonical order of [`terms_with_leaves`].
pub fn enumerate_terms(max_leaves: usize, num_vars: u32) -> impl Iterator<Item = Term> {
    (1..=max_leaves).flat_map(move |l| terms_with_leaves(l, num_vars))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        parse(s, 9).unwrap()
    }

    #[test]
    fn parse_basic() {
        assert_eq!(parse("x", 1).unwrap(), Term::Leaf(1));
        assert_eq!(
            parse("f(x,f(x,x))", 1).unwrap(),
            Term::app(Term::x(), Term::app(Term::x(), Term::x()))
        );
        assert_eq!(
            parse("f(x1,f(x2,x1))", 2).unwrap(),
            Term::app(Term::Leaf(1), Term::app(Term::Leaf(2), Term::Leaf(1)))
        );
        assert_eq!(parse(" f( x , x ) ", 1).unwrap(), t("f(x,x)"));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse("f(x", 1), Err(Error::Syntax { .. })));
        assert!(matches!(parse("y", 1), Err(Error::Syntax { .. })));
        assert!(matches!(parse("f(x,x))", 1), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse("x3", 2),
            Err(Error::VarOutOfRange { index: 3, .. })
        ));
        assert!(matches!(parse("x0", 2), Err(Error::VarOutOfRange { .. })));
    }

    #[test]
    fn render_round_trip() {
        assert_eq!(Term::Leaf(1).render(), "x");
        assert_eq!(t("f(x,x)").render(), "f(x,x)");
        assert_eq!(parse("f(x1,x2)", 2).unwrap().render(), "f(x1,x2)");
        for term in enumerate_terms(8, 1) {
            assert_eq!(parse(&term.render(), 1).unwrap(), term);
        }
        for term in enumerate_terms(4, 3) {
            assert_eq!(parse(&term.render(), 3).unwrap(), term);
        }
    }

    #[test]
    fn positions() {
        assert_eq!(
            parse("f(x,f(y,x))", 1).unwrap_err().to_string().is_empty(),
            false
        );
        // f(x, f(x2, x)) over two variables mirrors f(x, f(y, x)).
        let g = parse("f(x1,f(x2,x1))", 2).unwrap();
        assert_eq!(g.variable_positions(), vec![(1, 1), (2, 2), (1, 2)]);
        assert_eq!(Term::x().variable_positions(), vec![(1, 0)]);
        assert_eq!(
            t("f(f(x,x),x)").variable_positions(),
            vec![(1, 2), (1, 2), (1, 1)]
        );
    }

    #[test]
    fn positions_match_leaf_count() {
        for term in enumerate_terms(6, 2) {
            assert_eq!(term.variable_positions().len(), term.leaf_count());
        }
    }

    #[test]
    fn depth_additivity() {
        for term in enumerate_terms(5, 1) {
            let wrapped = Term::app(Term::x(), term.clone());
            let inner: Vec<u32> = term.variable_positions().iter().map(|p| p.1).collect();
            let outer: Vec<u32> = wrapped
                .variable_positions()
                .iter()
                .skip(1)
                .map(|p| p.1)
                .collect();
            assert_eq!(
                outer,
                inner.iter().map(|d| d + 1).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn substitution() {
        let g = parse("f(x1,x2)", 2).unwrap();
        let fxx = t("f(x,x)");
        assert_eq!(g.substitute(2, &fxx), Term::app(Term::Leaf(1), fxx.clone()));
        // collapsing every variable
        let g2 = parse("f(x1,f(x2,x1))", 2).unwrap();
        assert_eq!(g2.collapse(), t("f(x,f(x,x))"));
        // no occurrence is a no-op
        assert_eq!(Term::Leaf(2).substitute(1, &fxx), Term::Leaf(2));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(
            enumerate_terms(2, 1).collect::<Vec<_>>(),
            vec![Term::x(), t("f(x,x)")]
        );
        assert_eq!(enumerate_terms(4, 1).count(), 9);
        assert_eq!(enumerate_terms(3, 2).count(), 22);
        // Catalan(L-1) * n^L per leaf count, against a direct recursive count.
        fn count_terms(l: usize, n: usize) -> usize {
            if l == 1 {
                return n;
            }
            (1..l).map(|k| count_terms(k, n) * count_terms(l - k, n)).sum()
        }
        for l in 1..=6 {
            for n in 1..=3u32 {
                let expect = catalan((l - 1) as u64) as usize * (n as usize).pow(l as u32);
                assert_eq!(terms_with_leaves(l, n).len(), expect, "l={} n={}", l, n);
                assert_eq!(count_terms(l, n as usize), expect);
            }
        }
    }

    #[test]
    fn enumeration_unique() {
        use std::collections::HashSet;
        let all: Vec<Term> = enumerate_terms(6, 2).collect();
        let set: HashSet<&Term> = all.iter().collect();
        assert_eq!(all.len(), set.len());
    }

    #[test]
    fn shape_order_is_left_count_descending() {
        let s3 = shapes(3);
        assert_eq!(s3[0], t("f(f(x,x),x)"));
        assert_eq!(s3[1], t("f(x,f(x,x))"));
    }

    #[test]
    fn catalan_values() {
        let expect = [1u64, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786];
        for (n, &c) in expect.iter().enumerate() {
            assert_eq!(catalan(n as u64), c);
        }
        assert_eq!((0..12).map(catalan).sum::<u64>(), 82500);
    }
}
