//! The evaluation map sending `x` to `x` and `f(A,B)` to `e(A)^2 + e(B)^3`,
//! plus the structural recursions that avoid expanding it: degree/order,
//! coefficient sums, faithful-base fingerprints, exact e-equivalence, and the
//! exhaustive identity search.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::Error;
use crate::poly::Poly;
use crate::term::{catalan, enumerate_terms, Term};

/// Default candidate budget for isolation checks.
pub const DEFAULT_ISOLATION_BUDGET: u64 = 1 << 20;

/// Exact polynomial image of a term, within the expansion cap.
pub fn evaluate_exact(t: &Term, cap: usize) -> Result<Poly, Error> {
    match t {
        Term::Leaf(_) => Ok(Poly::var()),
        Term::App(a, b) => {
            let pa = evaluate_exact(a, cap)?.square(cap)?;
            let pb = evaluate_exact(b, cap)?.cube(cap)?;
            Ok(pa.add(&pb))
        }
    }
}

/// `(degree, order)` of `e(t)` by structural recursion. Coefficients never
/// cancel, so `dege(f(A,B)) = max(2 dege A, 3 dege B)` and
/// `orde(f(A,B)) = min(2 orde A, 3 orde B)`.
pub fn dege_orde(t: &Term) -> (u64, u64) {
    match t {
        Term::Leaf(_) => (1, 1),
        Term::App(a, b) => {
            let (da, oa) = dege_orde(a);
            let (db, ob) = dege_orde(b);
            let d2 = da.checked_mul(2).expect("degree overflow");
            let d3 = db.checked_mul(3).expect("degree overflow");
            (d2.max(d3), (oa * 2).min(ob * 3))
        }
    }
}

pub fn dege(t: &Term) -> u64 {
    dege_orde(t).0
}

pub fn orde(t: &Term) -> u64 {
    dege_orde(t).1
}

/// Leading coefficient of `e(t)` without expansion. On a degree tie the two
/// sides' top terms add.
pub fn lead(t: &Term) -> BigUint {
    match t {
        Term::Leaf(_) => BigUint::one(),
        Term::App(a, b) => {
            let (da, _) = dege_orde(a);
            let (db, _) = dege_orde(b);
            let la = lead(a);
            let lb = lead(b);
            match (2 * da).cmp(&(3 * db)) {
                Ordering::Greater => &la * &la,
                Ordering::Less => &lb * &lb * &lb,
                Ordering::Equal => &la * &la + &lb * &lb * &lb,
            }
        }
    }
}

/// Sum of the coefficients of `e(t)`, i.e. `e(t)(1)`, by the recursion
/// `s(x) = 1`, `s(f(A,B)) = s(A)^2 + s(B)^3`.
pub fn coeff_sum_fast(t: &Term) -> BigUint {
    match t {
        Term::Leaf(_) => BigUint::one(),
        Term::App(a, b) => {
            let sa = coeff_sum_fast(a);
            let sb = coeff_sum_fast(b);
            &sa * &sa + &sb * &sb * &sb
        }
    }
}

/// `e(t)` evaluated at `base`, by the structural recursion — no expansion.
pub fn value_at_base(t: &Term, base: &BigUint) -> BigUint {
    match t {
        Term::Leaf(_) => base.clone(),
        Term::App(a, b) => {
            let va = value_at_base(a, base);
            let vb = value_at_base(b, base);
            &va * &va + &vb * &vb * &vb
        }
    }
}

/// `e(t)` evaluated at `point` modulo `modulus`. A cheap sound filter:
/// differing values prove differing polynomials.
pub fn value_mod(t: &Term, point: u64, modulus: u64) -> u64 {
    match t {
        Term::Leaf(_) => point % modulus,
        Term::App(a, b) => {
            let va = value_mod(a, point, modulus) as u128;
            let vb = value_mod(b, point, modulus) as u128;
            let m = modulus as u128;
            let sq = va * va % m;
            let cb = vb * vb % m * vb % m;
            ((sq + cb) % m) as u64
        }
    }
}

/// Fixed `(point, modulus)` pairs used as collision pre-filters.
pub const MOD_FILTERS: [(u64, u64); 3] = [
    (1_000_003, (1 << 61) - 1),
    (777_777_777_777, (1 << 61) - 1),
    (424_242_424_242, 0xffff_ffff_0000_0001),
];

/// An exact single-point encoding of `e(t)` at a base exceeding every
/// coefficient. Equality of values at a shared faithful base decides
/// e-equivalence, and value order matches the lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub base: BigUint,
    pub value: BigUint,
    pub dege: u64,
    pub orde: u64,
    pub coeff_sum: BigUint,
}

/// Fingerprint `t` at `base`. Fails unless `base > coeff_sum(t)`; the
/// coefficient sum bounds every coefficient, so a larger base makes the
/// base-digit encoding injective.
pub fn fingerprint(t: &Term, base: &BigUint) -> Result<Fingerprint, Error> {
    let coeff_sum = coeff_sum_fast(t);
    if *base <= coeff_sum {
        return Err(Error::UnfaithfulBase {
            base: base.to_string(),
            coeff_sum: coeff_sum.to_string(),
        });
    }
    let (dege, orde) = dege_orde(t);
    Ok(Fingerprint {
        base: base.clone(),
        value: value_at_base(t, base),
        dege,
        orde,
        coeff_sum,
    })
}

/// Exact e-equivalence decision without expansion: cheap invariants first,
/// then fingerprints at the shared faithful base `max(coeff sums) + 1`.
pub fn e_equivalent(a: &Term, b: &Term) -> bool {
    if a == b {
        return true;
    }
    if dege_orde(a) != dege_orde(b) {
        return false;
    }
    let sa = coeff_sum_fast(a);
    let sb = coeff_sum_fast(b);
    if sa != sb {
        return false;
    }
    let base = sa.max(sb) + BigUint::one();
    value_at_base(a, &base) == value_at_base(b, &base)
}

/// Lexicographic order of `e(a)` vs `e(b)` via faithful-base values.
pub fn lex_compare_terms(a: &Term, b: &Term) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let sa = coeff_sum_fast(a);
    let sb = coeff_sum_fast(b);
    let base = sa.max(sb) + BigUint::one();
    value_at_base(a, &base).cmp(&value_at_base(b, &base))
}

// ---------------------------------------------------------------------------
// Exact top-monomial slices
// ---------------------------------------------------------------------------

/// The `k` highest-exponent monomials of `e(t)` as `(exponent, coefficient)`
/// pairs, descending, computed exactly without full expansion.
///
/// The k largest exponents of a product are sums of the k largest exponents
/// of its factors, so the truncation is closed under the squaring and cubing
/// steps of the evaluation recursion.
pub fn top_monomials(t: &Term, k: usize) -> Vec<(u64, BigUint)> {
    assert!(k >= 1);
    top_rec(t, k)
}

fn top_rec(t: &Term, k: usize) -> Vec<(u64, BigUint)> {
    match t {
        Term::Leaf(_) => vec![(1, BigUint::one())],
        Term::App(a, b) => {
            let ta = top_rec(a, k);
            let tb = top_rec(b, k);
            let sq = top_mul(&ta, &ta, k);
            let cb = top_mul(&top_mul(&tb, &tb, k), &tb, k);
            top_add(&sq, &cb, k)
        }
    }
}

pub(crate) fn top_mul(
    p: &[(u64, BigUint)],
    q: &[(u64, BigUint)],
    k: usize,
) -> Vec<(u64, BigUint)> {
    let mut acc: BTreeMap<u64, BigUint> = BTreeMap::new();
    for (ea, ca) in p {
        for (eb, cb) in q {
            *acc.entry(ea + eb).or_default() += ca * cb;
        }
    }
    truncate_top(acc, k)
}

pub(crate) fn top_add(
    p: &[(u64, BigUint)],
    q: &[(u64, BigUint)],
    k: usize,
) -> Vec<(u64, BigUint)> {
    let mut acc: BTreeMap<u64, BigUint> = BTreeMap::new();
    for (e, c) in p.iter().chain(q.iter()) {
        *acc.entry(*e).or_default() += c;
    }
    // A truncated operand is only exact down to its own last exponent; keep
    // nothing below the higher of the two cutoffs once either side is full.
    let cut_p = if p.len() >= k { p.last().map(|x| x.0) } else { None };
    let cut_q = if q.len() >= k { q.last().map(|x| x.0) } else { None };
    if let Some(cut) = cut_p.into_iter().chain(cut_q).max() {
        acc.retain(|e, _| *e >= cut);
    }
    truncate_top(acc, k)
}

fn truncate_top(acc: BTreeMap<u64, BigUint>, k: usize) -> Vec<(u64, BigUint)> {
    acc.into_iter().rev().take(k).collect()
}

/// Compare two top-monomial slices lexicographically. Returns `None` when the
/// slices agree everywhere but at least one is truncated, so the order cannot
/// be decided from the slices alone.
pub fn top_lex_cmp(
    p: &[(u64, BigUint)],
    q: &[(u64, BigUint)],
    k: usize,
) -> Option<Ordering> {
    let mut i = 0;
    let mut j = 0;
    while i < p.len() && j < q.len() {
        let (ep, cp) = &p[i];
        let (eq, cq) = &q[j];
        match ep.cmp(eq) {
            Ordering::Greater => return Some(Ordering::Greater),
            Ordering::Less => return Some(Ordering::Less),
            Ordering::Equal => match cp.cmp(cq) {
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                ord => return Some(ord),
            },
        }
    }
    if i < p.len() {
        return Some(Ordering::Greater);
    }
    if j < q.len() {
        return Some(Ordering::Less);
    }
    if p.len() >= k || q.len() >= k {
        None
    } else {
        Some(Ordering::Equal)
    }
}

/// Lexicographic comparison that resolves most pairs from exact top slices
/// and falls back to faithful-base values only on deep agreement.
pub fn lex_compare_terms_fast(a: &Term, b: &Term, k: usize) -> Ordering {
    let ta = top_rec(a, k);
    let tb = top_rec(b, k);
    match top_lex_cmp(&ta, &tb, k) {
        Some(ord) => ord,
        None => lex_compare_terms(a, b),
    }
}

// ---------------------------------------------------------------------------
// Enumeration by exact degree
// ---------------------------------------------------------------------------

/// Memoized enumeration of every single-variable term whose image has a given
/// degree. Degrees are always 3-smooth; the candidate space for a degree is
/// tiny compared to enumerating all terms up to that leaf count.
pub struct DegreeTerms {
    memo: HashMap<u64, Rc<Vec<Term>>>,
    achievable: HashMap<u64, bool>,
    produced: u64,
    budget: u64,
}

impl DegreeTerms {
    pub fn new(budget: u64) -> DegreeTerms {
        DegreeTerms {
            memo: HashMap::new(),
            achievable: HashMap::new(),
            produced: 0,
            budget,
        }
    }

    /// Whether any term has image degree exactly `d`.
    pub fn achievable(&mut self, d: u64) -> bool {
        if d == 1 {
            return true;
        }
        if let Some(&a) = self.achievable.get(&d) {
            return a;
        }
        let a = (d % 2 == 0 && d >= 3 && self.achievable(d / 2))
            || (d % 3 == 0 && self.achievable(d / 3));
        self.achievable.insert(d, a);
        a
    }

    /// All achievable degrees up to and including `max`.
    pub fn achievable_up_to(&mut self, max: u64) -> Vec<u64> {
        (1..=max).filter(|&d| self.achievable(d)).collect()
    }

    /// All terms with image degree exactly `d`, deterministic order.
    pub fn terms(&mut self, d: u64) -> Result<Rc<Vec<Term>>, Error> {
        if let Some(v) = self.memo.get(&d) {
            return Ok(v.clone());
        }
        let mut out: Vec<Term> = Vec::new();
        if d == 1 {
            out.push(Term::x());
        } else {
            // left child carries the degree: 2 dege(A) = d, 3 dege(B) <= d
            if d % 2 == 0 && self.achievable(d / 2) {
                let lefts = self.terms(d / 2)?;
                let right_degs: Vec<u64> = self.achievable_up_to(d / 3);
                for db in right_degs {
                    let rights = self.terms(db)?;
                    for a in lefts.iter() {
                        for b in rights.iter() {
                            out.push(Term::app(a.clone(), b.clone()));
                        }
                    }
                }
            }
            // right child carries it strictly: 3 dege(B) = d, 2 dege(A) < d
            if d % 3 == 0 && self.achievable(d / 3) {
                let rights = self.terms(d / 3)?;
                let left_degs: Vec<u64> = self.achievable_up_to((d - 1) / 2);
                for da in left_degs {
                    let lefts = self.terms(da)?;
                    for a in lefts.iter() {
                        for b in rights.iter() {
                            out.push(Term::app(a.clone(), b.clone()));
                        }
                    }
                }
            }
        }
        self.produced += out.len() as u64;
        if self.produced > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        let rc = Rc::new(out);
        self.memo.insert(d, rc.clone());
        Ok(rc)
    }
}

// ---------------------------------------------------------------------------
// Isolation
// ---------------------------------------------------------------------------

/// Verdict of an isolation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsolationVerdict {
    Isolated,
    /// A distinct term with the same image.
    WitnessPair(Term),
    /// The candidate space exceeded the budget.
    Infeasible,
}

/// Decide whether `t` is the only term with its image, by exhausting every
/// term of the same image degree.
pub fn is_e_isolated(t: &Term, budget: u64) -> IsolationVerdict {
    let d = dege(t);
    let mut en = DegreeTerms::new(budget);
    let candidates = match en.terms(d) {
        Ok(c) => c,
        Err(_) => return IsolationVerdict::Infeasible,
    };
    for u in candidates.iter() {
        if u != t && e_equivalent(t, u) {
            return IsolationVerdict::WitnessPair(u.clone());
        }
    }
    IsolationVerdict::Isolated
}

// ---------------------------------------------------------------------------
// Identity search
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub max_leaves: usize,
    pub num_vars: u32,
    pub expansion_cap: usize,
    pub workers: usize,
    /// Hard ceiling on enumerated terms.
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_leaves: 8,
            num_vars: 1,
            expansion_cap: crate::poly::DEFAULT_EXPANSION_CAP,
            workers: 1,
            budget: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub max_leaves: usize,
    pub num_vars: u32,
    pub terms_enumerated: u64,
    /// `sum over L of Catalan(L-1) * n^L`; must equal `terms_enumerated`.
    pub expected_terms: u64,
    /// Confirmed pairs of distinct terms with equal images, canonical text.
    pub collisions: Vec<(String, String)>,
}

type GroupKey = (u64, u64, BigUint, [u64; 3]);

fn search_key(t: &Term) -> GroupKey {
    let (d, o) = dege_orde(t);
    let s = coeff_sum_fast(t);
    let mods = [
        value_mod(t, MOD_FILTERS[0].0, MOD_FILTERS[0].1),
        value_mod(t, MOD_FILTERS[1].0, MOD_FILTERS[1].1),
        value_mod(t, MOD_FILTERS[2].0, MOD_FILTERS[2].1),
    ];
    (d, o, s, mods)
}

/// Confirm a candidate pair exactly: full expansion when feasible, otherwise
/// agreement of faithful-base values at three consecutive faithful bases.
fn confirm_equal(a: &Term, b: &Term, cap: usize) -> bool {
    if let (Ok(pa), Ok(pb)) = (evaluate_exact(a, cap), evaluate_exact(b, cap)) {
        return pa == pb;
    }
    let base0 = coeff_sum_fast(a).max(coeff_sum_fast(b)) + BigUint::one();
    (0u32..3).all(|i| {
        let base = &base0 + BigUint::from(i);
        value_at_base(a, &base) == value_at_base(b, &base)
    })
}

/// Exhaustive identity search: every unordered pair of distinct terms with
/// equal images, over all terms with up to `max_leaves` leaves. An empty
/// collision list certifies that no nontrivial identity holds at this bound.
pub fn find_identities(opts: &SearchOptions) -> Result<SearchReport, Error> {
    let expected: u64 = (1..=opts.max_leaves)
        .map(|l| catalan((l - 1) as u64) * (opts.num_vars as u64).pow(l as u32))
        .sum();
    if expected > opts.budget {
        return Err(Error::BudgetExceeded { budget: opts.budget });
    }
    let terms: Vec<Term> = enumerate_terms(opts.max_leaves, opts.num_vars).collect();

    let collisions = if opts.num_vars == 1 {
        search_single_var(&terms, opts)
    } else {
        search_multi_var(&terms, opts)?
    };

    Ok(SearchReport {
        max_leaves: opts.max_leaves,
        num_vars: opts.num_vars,
        terms_enumerated: terms.len() as u64,
        expected_terms: expected,
        collisions,
    })
}

fn search_single_var(terms: &[Term], opts: &SearchOptions) -> Vec<(String, String)> {
    let workers = opts.workers.max(1);
    let keys: Vec<GroupKey> = if workers == 1 || terms.len() < 1024 {
        terms.iter().map(search_key).collect()
    } else {
        // contiguous chunks, results concatenated in order: the outcome is
        // identical for any worker count
        let chunk = terms.len().div_ceil(workers);
        std::thread::scope(|scope| {
            let handles: Vec<_> = terms
                .chunks(chunk)
                .map(|part| scope.spawn(move || part.iter().map(search_key).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("search worker panicked"))
                .collect()
        })
    };

    let mut groups: BTreeMap<&GroupKey, Vec<usize>> = BTreeMap::new();
    for (i, key) in keys.iter().enumerate() {
        groups.entry(key).or_default().push(i);
    }

    let mut collisions = Vec::new();
    for members in groups.values() {
        if members.len() < 2 {
            continue;
        }
        for (ii, &i) in members.iter().enumerate() {
            for &j in &members[ii + 1..] {
                if confirm_equal(&terms[i], &terms[j], opts.expansion_cap) {
                    collisions.push((terms[i].render(), terms[j].render()));
                }
            }
        }
    }
    collisions.sort();
    collisions
}

fn search_multi_var(terms: &[Term], opts: &SearchOptions) -> Result<Vec<(String, String)>, Error> {
    use crate::multivar::mv_evaluate;
    let mut groups: BTreeMap<Vec<(Vec<u64>, BigUint)>, Vec<usize>> = BTreeMap::new();
    for (i, t) in terms.iter().enumerate() {
        let key = mv_evaluate(t, opts.num_vars, opts.expansion_cap)?.into_pairs();
        groups.entry(key).or_default().push(i);
    }
    let mut collisions = Vec::new();
    for members in groups.values() {
        for (ii, &i) in members.iter().enumerate() {
            for &j in &members[ii + 1..] {
                collisions.push((terms[i].render(), terms[j].render()));
            }
        }
    }
    collisions.sort();
    Ok(collisions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::DEFAULT_EXPANSION_CAP as CAP;
    use crate::term::parse;
    use num_traits::ToPrimitive;

    fn t(s: &str) -> Term {
        parse(s, 1).unwrap()
    }

    fn p(pairs: &[(u64, u64)]) -> Poly {
        Poly::from_pairs(pairs.iter().map(|&(e, c)| (e, BigUint::from(c))))
    }

    #[test]
    fn evaluate_basic() {
        assert_eq!(evaluate_exact(&Term::x(), CAP).unwrap(), Poly::var());
        assert_eq!(
            evaluate_exact(&t("f(x,x)"), CAP).unwrap(),
            p(&[(2, 1), (3, 1)])
        );
        // x^2 + (x^2+x^3)^3
        assert_eq!(
            evaluate_exact(&t("f(x,f(x,x))"), CAP).unwrap(),
            p(&[(2, 1), (6, 1), (7, 3), (8, 3), (9, 1)])
        );
    }

    #[test]
    fn dege_orde_examples() {
        assert_eq!(dege_orde(&t("f(x,x)")), (3, 2));
        assert_eq!(dege_orde(&t("f(f(x,x),x)")), (6, 3));
        assert_eq!(dege_orde(&t("f(f(x,x),f(x,x))")), (9, 4));
    }

    #[test]
    fn coeff_sum_examples() {
        assert_eq!(coeff_sum_fast(&Term::x()).to_u64().unwrap(), 1);
        assert_eq!(coeff_sum_fast(&t("f(x,f(x,x))")).to_u64().unwrap(), 9);
        assert_eq!(coeff_sum_fast(&t("f(f(x,x),x)")).to_u64().unwrap(), 5);
    }

    #[test]
    fn lead_examples() {
        assert_eq!(lead(&t("f(x,x)")).to_u64().unwrap(), 1);
        assert_eq!(
            lead(&t("f(f(x,f(x,x)),f(f(x,x),x))")).to_u64().unwrap(),
            2
        );
        assert_eq!(
            lead(&t("f(x,f(f(x,f(x,x)),f(f(x,x),x)))")).to_u64().unwrap(),
            8
        );
    }

    #[test]
    fn fingerprint_examples() {
        let fxx = t("f(x,x)");
        let fp = fingerprint(&fxx, &BigUint::from(10u32)).unwrap();
        assert_eq!(fp.value.to_u64().unwrap(), 1100);
        assert_eq!((fp.dege, fp.orde), (3, 2));

        // structural value must match evaluating the expansion
        let u = t("f(x,f(x,x))");
        let base = BigUint::from(100u32);
        let fp = fingerprint(&u, &base).unwrap();
        assert_eq!(
            fp.value,
            evaluate_exact(&u, CAP).unwrap().eval_at(&base)
        );

        // unfaithful base refused
        assert!(matches!(
            fingerprint(&u, &BigUint::from(9u32)),
            Err(Error::UnfaithfulBase { .. })
        ));
    }

    #[test]
    fn structural_matches_expansion() {
        for term in enumerate_terms(8, 1) {
            let poly = evaluate_exact(&term, CAP).unwrap();
            let (o, d, l, s) = poly.profile().unwrap();
            assert_eq!(dege_orde(&term), (d, o), "{}", term);
            assert_eq!(lead(&term), l, "{}", term);
            assert_eq!(coeff_sum_fast(&term), s, "{}", term);
            let base = &s + BigUint::one();
            assert_eq!(value_at_base(&term, &base), poly.eval_at(&base), "{}", term);
        }
    }

    #[test]
    fn dege_bounds_leaf_count() {
        for term in enumerate_terms(10, 1) {
            assert!(dege(&term) >= term.leaf_count() as u64, "{}", term);
        }
    }

    #[test]
    fn equivalence_basics() {
        let a = t("f(x,f(x,x))");
        let b = t("f(f(x,x),x)");
        assert!(e_equivalent(&a, &a));
        assert!(!e_equivalent(&a, &b));
    }

    #[test]
    fn no_identity_up_to_8_leaves_by_expansion() {
        // oracle for the search path: exhaustive exact expansion
        let all: Vec<Term> = enumerate_terms(8, 1).collect();
        let mut images: HashMap<Vec<(u64, String)>, Term> = HashMap::new();
        for term in &all {
            let poly = evaluate_exact(term, CAP).unwrap();
            let key: Vec<(u64, String)> =
                poly.iter().map(|(e, c)| (*e, c.to_string())).collect();
            if let Some(prev) = images.insert(key, term.clone()) {
                panic!("unexpected identity: {} = {}", prev, term);
            }
        }
        // and the fast path agrees pairwise on a sample
        for a in all.iter().take(60) {
            for b in all.iter().take(60) {
                assert_eq!(
                    e_equivalent(a, b),
                    evaluate_exact(a, CAP).unwrap() == evaluate_exact(b, CAP).unwrap()
                );
            }
        }
    }

    #[test]
    fn lex_order_matches_definition() {
        let all: Vec<Term> = enumerate_terms(6, 1).collect();
        for a in &all {
            for b in &all {
                let expect = evaluate_exact(a, CAP)
                    .unwrap()
                    .lex_cmp(&evaluate_exact(b, CAP).unwrap());
                assert_eq!(lex_compare_terms(a, b), expect, "{} vs {}", a, b);
                assert_eq!(lex_compare_terms_fast(a, b, 6), expect, "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn top_monomials_exact() {
        for term in enumerate_terms(7, 1) {
            let poly = evaluate_exact(&term, CAP).unwrap();
            let mut full: Vec<(u64, BigUint)> =
                poly.iter().map(|(e, c)| (*e, c.clone())).collect();
            full.reverse();
            for k in [1usize, 2, 3, 5, 9] {
                let top = top_monomials(&term, k);
                let want: Vec<(u64, BigUint)> = full.iter().take(k).cloned().collect();
                assert_eq!(top, want, "{} k={}", term, k);
            }
        }
    }

    #[test]
    fn degree_enumeration() {
        let mut en = DegreeTerms::new(1 << 20);
        assert_eq!(en.terms(1).unwrap().len(), 1);
        assert!(!en.achievable(2));
        assert!(!en.achievable(4));
        assert_eq!(en.terms(3).unwrap().as_slice(), &[t("f(x,x)")]);
        assert_eq!(en.terms(9).unwrap().len(), 2);
        assert_eq!(en.terms(18).unwrap().len(), 9);
        // cross-check against full enumeration by leaf count
        for d in [3u64, 6, 9, 12, 18, 24, 27] {
            let by_deg = en.terms(d).unwrap();
            let brute: Vec<Term> = enumerate_terms(10, 1)
                .filter(|u| dege(u) == d && u.leaf_count() <= 10)
                .collect();
            for b in &brute {
                assert!(by_deg.contains(b), "missing {} at degree {}", b, d);
            }
            for u in by_deg.iter() {
                assert_eq!(dege(u), d);
            }
        }
        // every term of degree d has at most d leaves, so small-degree sets
        // found by leaf enumeration are complete
        let by_deg = en.terms(9).unwrap();
        let brute: Vec<Term> = enumerate_terms(9, 1).filter(|u| dege(u) == 9).collect();
        assert_eq!(by_deg.len(), brute.len());
    }

    #[test]
    fn degree_enumeration_budget() {
        let mut en = DegreeTerms::new(3);
        assert!(matches!(en.terms(18), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn isolation_examples() {
        assert_eq!(is_e_isolated(&Term::x(), 1 << 20), IsolationVerdict::Isolated);
        assert_eq!(is_e_isolated(&t("f(x,x)"), 1 << 20), IsolationVerdict::Isolated);
        assert_eq!(
            is_e_isolated(&t("f(x,f(x,x))"), 1 << 20),
            IsolationVerdict::Isolated
        );
        assert_eq!(is_e_isolated(&t("f(x,x)"), 1), IsolationVerdict::Infeasible);
    }

    #[test]
    fn search_small() {
        let report = find_identities(&SearchOptions {
            max_leaves: 4,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(report.terms_enumerated, 9);
        assert_eq!(report.expected_terms, 9);
        assert!(report.collisions.is_empty());

        let report = find_identities(&SearchOptions {
            max_leaves: 2,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(report.terms_enumerated, 2);
        assert!(report.collisions.is_empty());
    }

    #[test]
    fn search_deterministic_across_workers() {
        let base = find_identities(&SearchOptions {
            max_leaves: 7,
            workers: 1,
            ..Default::default()
        })
        .unwrap();
        let par = find_identities(&SearchOptions {
            max_leaves: 7,
            workers: 8,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(
            serde_json::to_string(&base).unwrap(),
            serde_json::to_string(&par).unwrap()
        );
    }

    #[test]
    fn search_budget() {
        let err = find_identities(&SearchOptions {
            max_leaves: 12,
            budget: 100,
            ..Default::default()
        });
        assert!(matches!(err, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn search_multivar_small() {
        let report = find_identities(&SearchOptions {
            max_leaves: 4,
            num_vars: 2,
            ..Default::default()
        })
        .unwrap();
        assert!(report.collisions.is_empty());
        assert_eq!(report.terms_enumerated, report.expected_terms);
    }
}
