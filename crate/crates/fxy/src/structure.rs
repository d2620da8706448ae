//! Structural apparatus: cores, developments, degree gaps, hereditary
//! disjointness, the lexicographically minimal constructions, e-isolation
//! relative to an ambient term, and the supplementing-subexpression search.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::eval::{
    dege, e_equivalent, lex_compare_terms_fast, DegreeTerms, DEFAULT_ISOLATION_BUDGET,
};
use crate::term::Term;

/// One step from a node to a child.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Dir {
    L,
    R,
}

/// Root-to-node move list addressing an occurrence.
pub type Path = Vec<Dir>;

pub fn render_path(path: &[Dir]) -> String {
    path.iter()
        .map(|d| match d {
            Dir::L => 'L',
            Dir::R => 'R',
        })
        .collect()
}

pub fn parse_path(s: &str) -> Result<Path, Error> {
    s.chars()
        .map(|c| match c {
            'L' => Ok(Dir::L),
            'R' => Ok(Dir::R),
            other => Err(Error::Invalid(format!(
                "path may contain only L and R, found {:?}",
                other
            ))),
        })
        .collect()
}

pub fn subterm_at<'a>(t: &'a Term, path: &[Dir]) -> Result<&'a Term, Error> {
    let mut cur = t;
    for (k, d) in path.iter().enumerate() {
        match (cur, d) {
            (Term::App(a, _), Dir::L) => cur = a,
            (Term::App(_, b), Dir::R) => cur = b,
            (Term::Leaf(_), _) => {
                return Err(Error::BadPath {
                    path: render_path(&path[..=k]),
                })
            }
        }
    }
    Ok(cur)
}

/// Exact factorization `d = 2^a * 3^b`, when one exists.
pub fn factor_23(d: u64) -> Option<(u32, u32)> {
    if d == 0 {
        return None;
    }
    let mut d = d;
    let mut a = 0;
    let mut b = 0;
    while d % 2 == 0 {
        d /= 2;
        a += 1;
    }
    while d % 3 == 0 {
        d /= 3;
        b += 1;
    }
    if d == 1 {
        Some((a, b))
    } else {
        None
    }
}

/// Paths of every core: an `f(x,x)` occurrence lying on a highest-degree
/// chain, meaning each ancestor step descends into a child whose doubled or
/// tripled degree is not exceeded by the sibling's.
pub fn cores(t: &Term) -> Result<Vec<Path>, Error> {
    fn walk(t: &Term, prefix: &mut Path, out: &mut Vec<Path>) {
        if t.is_leaf_pair() {
            out.push(prefix.clone());
            return;
        }
        if let Term::App(a, b) = t {
            let (da, db) = (dege(a), dege(b));
            if !a.is_leaf() && 2 * da >= 3 * db {
                prefix.push(Dir::L);
                walk(a, prefix, out);
                prefix.pop();
            }
            if !b.is_leaf() && 3 * db >= 2 * da {
                prefix.push(Dir::R);
                walk(b, prefix, out);
                prefix.pop();
            }
        }
    }
    if t.is_leaf() {
        return Err(Error::BareVariable);
    }
    let mut out = Vec::new();
    walk(t, &mut Vec::new(), &mut out);
    Ok(out)
}

/// A development: the stage terms from `f(x,x)` up to the developed term,
/// together with the path of the core it starts from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Development {
    pub stages: Vec<Term>,
    pub core_path: Path,
}

/// All developments. Each step wraps the previous stage as the child whose
/// doubled or tripled degree dominates its sibling's.
pub fn developments(t: &Term) -> Result<Vec<Development>, Error> {
    fn walk(t: &Term) -> Vec<Development> {
        if t.is_leaf_pair() {
            return vec![Development {
                stages: vec![t.clone()],
                core_path: Vec::new(),
            }];
        }
        let mut out = Vec::new();
        if let Term::App(a, b) = t {
            let (da, db) = (dege(a), dege(b));
            if !a.is_leaf() && 2 * da >= 3 * db {
                for mut d in walk(a) {
                    d.stages.push(t.clone());
                    d.core_path.insert(0, Dir::L);
                    out.push(d);
                }
            }
            if !b.is_leaf() && 3 * db >= 2 * da {
                for mut d in walk(b) {
                    d.stages.push(t.clone());
                    d.core_path.insert(0, Dir::R);
                    out.push(d);
                }
            }
        }
        out
    }
    if t.is_leaf() {
        return Err(Error::BareVariable);
    }
    Ok(walk(t))
}

/// Number of stages every development of `t` has: the exponent sum of its
/// degree `2^m * 3^n`.
pub fn total_stages(t: &Term) -> Result<usize, Error> {
    if t.is_leaf() {
        return Err(Error::BareVariable);
    }
    let (m, n) = factor_23(dege(t)).expect("term degrees factor over {2,3}");
    Ok((m + n) as usize)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StageOutcome {
    Term(Term),
    /// The developments disagree at the requested stage.
    Ambiguous,
}

/// The common stage-`n` term of all developments, if they agree there.
pub fn stage_term(t: &Term, n: usize) -> Result<StageOutcome, Error> {
    let total = total_stages(t)?;
    if n < 1 || n > total {
        return Err(Error::StageOutOfRange { stage: n, total });
    }
    let devs = developments(t)?;
    let first = devs[0].stages[n - 1].clone();
    if devs.iter().all(|d| d.stages[n - 1] == first) {
        Ok(StageOutcome::Term(first))
    } else {
        Ok(StageOutcome::Ambiguous)
    }
}

/// Degree-gap data for an addressed application whose core-side child
/// carries a core of the whole term.
///
/// With the core-side child of degree `2^m 3^n`, the sibling of degree
/// `2^i 3^j`, and the whole term of degree `2^p 3^q`, the gap is
/// `2^(m+pi1) 3^(n+pi2) - 2^(i+pi2) 3^(j+pi1)`, where `pi2 = 1` when the
/// core-side child sits on the right and `pi1 = 1` when it sits on the left.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub struct GapReport {
    pub dgap: u64,
    pub maxt_exponent: u64,
    pub pi1: u8,
    pub pi2: u8,
    pub m: u32,
    pub n: u32,
    pub i: u32,
    pub j: u32,
    pub p: u32,
    pub q: u32,
}

pub fn gap_report(t: &Term, sub_path: &[Dir]) -> Result<GapReport, Error> {
    let sub = subterm_at(t, sub_path)?;
    let (left, right) = match sub {
        Term::App(a, b) => (a.as_ref(), b.as_ref()),
        Term::Leaf(_) => {
            return Err(Error::BadPath {
                path: render_path(sub_path),
            })
        }
    };
    let (dl, dr) = (dege(left), dege(right));
    let (core_dir, dgap) = if 2 * dl > 3 * dr {
        (Dir::L, 2 * dl - 3 * dr)
    } else if 3 * dr > 2 * dl {
        (Dir::R, 3 * dr - 2 * dl)
    } else {
        return Err(Error::Invalid(
            "the sibling contributions are equal, so the degree-gap is zero".into(),
        ));
    };
    let mut core_side_path = sub_path.to_vec();
    core_side_path.push(core_dir);
    let has_core = cores(t)?
        .iter()
        .any(|c| c.starts_with(&core_side_path));
    if !has_core {
        return Err(Error::NoCoreAtPath {
            path: render_path(&core_side_path),
        });
    }
    let (core_child, other) = if core_dir == Dir::L {
        (left, right)
    } else {
        (right, left)
    };
    let (m, n) = factor_23(dege(core_child)).expect("term degrees factor over {2,3}");
    let (i, j) = factor_23(dege(other)).expect("term degrees factor over {2,3}");
    let (p, q) = factor_23(dege(t)).expect("term degrees factor over {2,3}");
    let (pi1, pi2) = if core_dir == Dir::L { (1, 0) } else { (0, 1) };
    Ok(GapReport {
        dgap,
        maxt_exponent: dege(t) - dgap,
        pi1,
        pi2,
        m,
        n,
        i,
        j,
        p,
        q,
    })
}

/// `dege(t)` minus the highest exponent that can receive a factor from the
/// occurrence at `path`. Descending along a dominant chain preserves the
/// gap; leaving the chain adds the local degree deficit.
pub fn maxt_gap(t: &Term, path: &[Dir]) -> Result<u64, Error> {
    fn go(t: &Term, path: &[Dir], full: &[Dir]) -> Result<u64, Error> {
        let Some((d, rest)) = path.split_first() else {
            return Ok(0);
        };
        let (a, b) = match t {
            Term::App(a, b) => (a.as_ref(), b.as_ref()),
            Term::Leaf(_) => {
                return Err(Error::BadPath {
                    path: render_path(full),
                })
            }
        };
        let (da, db) = (dege(a), dege(b));
        match d {
            Dir::L => {
                let g = go(a, rest, full)?;
                if 2 * da >= 3 * db {
                    Ok(g)
                } else {
                    Ok(3 * db - 2 * da + g)
                }
            }
            Dir::R => {
                let g = go(b, rest, full)?;
                if 3 * db >= 2 * da {
                    Ok(g)
                } else {
                    Ok(2 * da - 3 * db + g)
                }
            }
        }
    }
    go(t, path, path)
}

/// Highest exponent of the expansion that can receive a factor from the
/// occurrence at `path`.
pub fn maxt_exponent(t: &Term, path: &[Dir]) -> Result<u64, Error> {
    Ok(dege(t) - maxt_gap(t, path)?)
}

/// The four hereditarily disjoint shapes, with orders 1 through 4.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum HdCase {
    NotHd,
    Case1,
    Case2(Term),
    Case3(Term),
    Case4(Term),
}

impl HdCase {
    pub fn is_hd(&self) -> bool {
        !matches!(self, HdCase::NotHd)
    }
}

impl fmt::Display for HdCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HdCase::NotHd => f.write_str("NotHD"),
            HdCase::Case1 => f.write_str("Case1"),
            HdCase::Case2(u) => write!(f, "Case2({})", u),
            HdCase::Case3(u) => write!(f, "Case3({})", u),
            HdCase::Case4(u) => write!(f, "Case4({})", u),
        }
    }
}

/// Shape classification: `x`; `f(x,U)`; `f(U,x)` with `orde(U) >= 2`;
/// `f(f(x,x),U)` with `orde(U) >= 3`; `U` hereditarily disjoint throughout.
pub fn classify_hereditarily_disjoint(t: &Term) -> HdCase {
    use crate::eval::orde;
    if t.is_leaf() {
        return HdCase::Case1;
    }
    if let Term::App(a, b) = t {
        if a.is_leaf() && classify_hereditarily_disjoint(b).is_hd() {
            return HdCase::Case2(b.as_ref().clone());
        }
        if b.is_leaf() && orde(a) >= 2 && classify_hereditarily_disjoint(a).is_hd() {
            return HdCase::Case3(a.as_ref().clone());
        }
        if a.is_leaf_pair() && orde(b) >= 3 && classify_hereditarily_disjoint(b).is_hd() {
            return HdCase::Case4(b.as_ref().clone());
        }
    }
    HdCase::NotHd
}

/// Definitional check: disjoint at every stage of some development, where
/// `f(A,B)` is disjoint when `2 dege(A) < 3 orde(B)` or `3 dege(B) < 2 orde(A)`.
pub fn is_hereditarily_disjoint_def(t: &Term) -> bool {
    use crate::eval::orde;
    fn disjoint(a: &Term, b: &Term) -> bool {
        2 * dege(a) < 3 * orde(b) || 3 * dege(b) < 2 * orde(a)
    }
    fn ok(t: &Term) -> bool {
        let Term::App(a, b) = t else { return false };
        if !disjoint(a, b) {
            return false;
        }
        if t.is_leaf_pair() {
            return true;
        }
        let (da, db) = (dege(a), dege(b));
        (!a.is_leaf() && 2 * da >= 3 * db && ok(a))
            || (!b.is_leaf() && 3 * db >= 2 * da && ok(b))
    }
    t.is_leaf() || ok(t)
}

/// `B(0) = x`, `B(n+1) = f(x, B(n))`.
pub fn build_b(n: u32) -> Term {
    let mut t = Term::x();
    for _ in 0..n {
        t = Term::app(Term::x(), t);
    }
    t
}

/// `m` right-leaf wrappers around `n` left-leaf wrappers around `x`:
/// the lexicographically minimal term of degree `2^m * 3^n`.
pub fn build_lexmin(m: u32, n: u32) -> Term {
    let mut t = build_b(n);
    for _ in 0..m {
        t = Term::app(t, Term::x());
    }
    t
}

/// `Y_j(A) = f(A, B(j))`, composed innermost-first over strictly decreasing
/// indices: `apply_y_chain(seed, [d1, ..., dj])` is `Y_d1(...(Y_dj(seed)))`.
pub fn apply_y_chain(seed: &Term, indices: &[u32]) -> Result<Term, Error> {
    if indices.windows(2).any(|w| w[0] <= w[1]) || indices.iter().any(|&d| d < 1) {
        return Err(Error::Invalid(
            "indices must be strictly decreasing and at least 1".into(),
        ));
    }
    let mut t = seed.clone();
    for &d in indices.iter().rev() {
        t = Term::app(t, build_b(d));
    }
    Ok(t)
}

/// Verdict of the relative isolation check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WrtVerdict {
    Yes,
    /// A development of an e-equivalent term that misses `b` at its stage.
    CounterexampleDevelopment {
        term: Term,
        development: Development,
    },
    /// The candidate enumeration exceeded the budget.
    Infeasible,
}

/// Whether `b` is forced at its stage in every development of every term
/// e-equivalent to `a`. Candidates are enumerated by degree; `a`'s own
/// developments are checked first.
pub fn is_e_isolated_wrt(b: &Term, a: &Term, budget: u64) -> Result<WrtVerdict, Error> {
    let devs_a = developments(a)?;
    if !devs_a.iter().any(|d| d.stages.contains(b)) {
        return Err(Error::Invalid(format!(
            "{} is not a stage term of any development of {}",
            b, a
        )));
    }
    let (alpha, beta) = factor_23(dege(b)).expect("term degrees factor over {2,3}");
    let stage = (alpha + beta) as usize;
    for d in &devs_a {
        if d.stages[stage - 1] != *b {
            return Ok(WrtVerdict::CounterexampleDevelopment {
                term: a.clone(),
                development: d.clone(),
            });
        }
    }
    let mut enumerator = DegreeTerms::new(budget);
    let candidates = match enumerator.terms(dege(a)) {
        Ok(c) => c,
        Err(Error::BudgetExceeded { .. }) => return Ok(WrtVerdict::Infeasible),
        Err(e) => return Err(e),
    };
    for cand in candidates.iter() {
        if cand == a || !e_equivalent(cand, a) {
            continue;
        }
        for d in developments(cand)? {
            if d.stages[stage - 1] != *b {
                return Ok(WrtVerdict::CounterexampleDevelopment {
                    term: cand.clone(),
                    development: d,
                });
            }
        }
    }
    Ok(WrtVerdict::Yes)
}

/// Supplementing subexpressions: stages of `a_bar`'s developments above the
/// designated subterm whose degree-gap equals the one between the designated
/// sibling pair in `a`, excluding the same-orientation same-stage case.
pub fn find_supplementing(
    a: &Term,
    a_bar: &Term,
    e1_path: &[Dir],
    b0_path: &[Dir],
) -> Result<Vec<(u32, u32, Term)>, Error> {
    if e1_path.len() != b0_path.len()
        || e1_path.is_empty()
        || e1_path[..e1_path.len() - 1] != b0_path[..b0_path.len() - 1]
        || e1_path.last() == b0_path.last()
    {
        return Err(Error::Invalid(
            "the two paths must address sibling children of one application".into(),
        ));
    }
    if !e_equivalent(a, a_bar) {
        return Err(Error::Invalid(
            "the terms do not induce the same polynomial".into(),
        ));
    }
    let e1 = subterm_at(a, e1_path)?.clone();
    let b0 = subterm_at(a, b0_path)?.clone();
    if !cores(a)?.iter().all(|c| c.starts_with(b0_path)) {
        return Err(Error::Invalid(
            "the designated subterm must contain every core".into(),
        ));
    }
    match is_e_isolated_wrt(&b0, a, DEFAULT_ISOLATION_BUDGET)? {
        WrtVerdict::Yes => {}
        WrtVerdict::CounterexampleDevelopment { term, .. } => {
            return Err(Error::Invalid(format!(
                "the designated subterm is not forced at its stage: see {}",
                term
            )))
        }
        WrtVerdict::Infeasible => {
            return Err(Error::BudgetExceeded {
                budget: DEFAULT_ISOLATION_BUDGET,
            })
        }
    }
    let e1_gap = maxt_gap(a, e1_path)?;
    let parent = &e1_path[..e1_path.len() - 1];
    for k in 0..parent.len() {
        let mut sib = parent[..k].to_vec();
        sib.push(match parent[k] {
            Dir::L => Dir::R,
            Dir::R => Dir::L,
        });
        if maxt_gap(a, &sib)? < e1_gap {
            return Err(Error::Invalid(
                "a subexpression off the chain dominates the designated sibling".into(),
            ));
        }
    }
    let (pi1, pi2) = match *b0_path.last().unwrap() {
        Dir::L => (1u32, 0u32),
        Dir::R => (0, 1),
    };
    let (m, n) = factor_23(dege(&b0)).expect("term degrees factor over {2,3}");
    let dgap_e1 = if pi2 == 1 {
        3 * dege(&b0) - 2 * dege(&e1)
    } else {
        2 * dege(&b0) - 3 * dege(&e1)
    };
    if dgap_e1 == 0 {
        return Err(Error::Invalid(
            "the sibling contributions are equal, so the degree-gap is zero".into(),
        ));
    }
    let mut out: BTreeSet<(u32, u32, Term)> = BTreeSet::new();
    let base_stage = (m + n) as usize;
    for dev in developments(a_bar)? {
        let total = dev.stages.len();
        if dev.stages.get(base_stage - 1) != Some(&b0) {
            continue;
        }
        for s in (base_stage + 1)..=total {
            let stage = &dev.stages[s - 1];
            let prev = &dev.stages[s - 2];
            let (sm, sn) = factor_23(dege(stage)).expect("term degrees factor over {2,3}");
            if sm < m || sn < n {
                continue;
            }
            let (k1, k2) = (sm - m, sn - n);
            if (k1, k2) == (pi1, pi2) {
                continue;
            }
            let Term::App(l, r) = stage else { unreachable!() };
            let prev_dir = dev.core_path[total - s];
            let (c, dgap) = match prev_dir {
                Dir::L => {
                    debug_assert_eq!(l.as_ref(), prev);
                    (r.as_ref(), 2 * dege(prev) - 3 * dege(r))
                }
                Dir::R => {
                    debug_assert_eq!(r.as_ref(), prev);
                    (l.as_ref(), 3 * dege(prev) - 2 * dege(l))
                }
            };
            if dgap == dgap_e1 {
                out.insert((k1, k2, c.clone()));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Full structural report for one term.
pub fn analysis_report(t: &Term) -> serde_json::Value {
    use crate::eval::{lead, orde};
    let (core_paths, dev_count) = if t.is_leaf() {
        (Vec::new(), 0)
    } else {
        let c = cores(t).expect("non-leaf term has cores");
        let d = developments(t).expect("non-leaf term has developments").len();
        (c, d)
    };
    let lexmin = lexmin_status(t);
    serde_json::json!({
        "term": t.render(),
        "dege": dege(t),
        "orde": orde(t),
        "lead": lead(t).to_string(),
        "cores": core_paths.iter().map(|p| render_path(p)).collect::<Vec<_>>(),
        "developments": dev_count,
        "hereditarilyDisjoint": classify_hereditarily_disjoint(t).to_string(),
        "lexmin": lexmin,
    })
}

/// Whether `t` is lexicographically minimal in its degree class, when the
/// class is small enough to enumerate; `None` otherwise.
pub fn lexmin_status(t: &Term) -> Option<bool> {
    let mut enumerator = DegreeTerms::new(1 << 16);
    let candidates = enumerator.terms(dege(t)).ok()?;
    Some(
        candidates
            .iter()
            .filter(|u| *u != t)
            .all(|u| lex_compare_terms_fast(t, u, 32) == std::cmp::Ordering::Less),
    )
}
