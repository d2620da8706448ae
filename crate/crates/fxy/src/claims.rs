//! Registry of verifiable statements: each claim instantiates a lemma-level
//! hypothesis over exhaustively enumerated instances and checks the stated
//! conclusion, reporting a pass/fail certificate.
//!
//! Claims whose hypotheses quantify over e-equivalent pairs are reported
//! vacuously-aware: `nontrivial_instances` counts hypothesis instances beyond
//! the reflexive ones, since the bounded identity search finds none.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::Error;
use crate::eval::{
    coeff_sum_fast, dege, e_equivalent, lead, lex_compare_terms, lex_compare_terms_fast, orde,
    top_monomials, top_mul, value_at_base, DegreeTerms,
};
use crate::structure::{
    build_b, build_lexmin, classify_hereditarily_disjoint, cores, developments, factor_23,
    gap_report, is_hereditarily_disjoint_def, maxt_exponent, maxt_gap, render_path, subterm_at,
    Development, Dir, HdCase, Path,
};
use crate::term::{enumerate_terms, Term};

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Infeasible,
}

/// Certificate for one claim at one bound.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub bound: String,
    pub checked: u64,
    pub nontrivial_instances: u64,
    pub vacuous: bool,
    pub failures: Vec<String>,
    pub verdict: Verdict,
}

struct Check {
    id: &'static str,
    bound: String,
    checked: u64,
    nontrivial: u64,
    quantifies_equivalent_pairs: bool,
    failures: Vec<String>,
    infeasible: bool,
}

impl Check {
    fn new(id: &'static str, bound: &str) -> Check {
        Check {
            id,
            bound: bound.to_string(),
            checked: 0,
            nontrivial: 0,
            quantifies_equivalent_pairs: false,
            failures: Vec::new(),
            infeasible: false,
        }
    }

    fn over_equivalent_pairs(mut self) -> Check {
        self.quantifies_equivalent_pairs = true;
        self
    }

    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }

    fn finish(self) -> ClaimReport {
        let verdict = if self.infeasible {
            Verdict::Infeasible
        } else if self.failures.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        ClaimReport {
            claim_id: self.id.to_string(),
            bound: self.bound,
            checked: self.checked,
            nontrivial_instances: self.nontrivial,
            vacuous: self.quantifies_equivalent_pairs && self.nontrivial == 0,
            failures: self.failures,
            verdict,
        }
    }
}

/// All registered claim identifiers, in reporting order.
pub const CLAIM_IDS: [&str; 22] = [
    "appending-x-left",
    "appending-x-right",
    "appending-fxx-left",
    "non-monic-condition",
    "non-monic-multiple-cores",
    "hereditarily-disjoint-classification",
    "unique-development-unique-core",
    "preserved-gap",
    "maxt-left-chain",
    "maxt-right-chain",
    "maxt-mixed-chain",
    "bare-x-left-lex-min",
    "bare-x-right-lex-min",
    "isolated-left-appendage",
    "x-left-appendage-separation",
    "left-appendage-lex-min",
    "lexmin-construction",
    "lexmin-appendage",
    "e-equiv-condition",
    "determination-of-dege",
    "determination-of-dege-gen",
    "dgap-lower-bound",
];

pub fn verify_claim(id: &str) -> Result<ClaimReport, Error> {
    match id {
        "appending-x-left" => Ok(appending_claim("appending-x-left", AppendKind::XLeft)),
        "appending-x-right" => Ok(appending_claim("appending-x-right", AppendKind::XRight)),
        "appending-fxx-left" => Ok(appending_claim("appending-fxx-left", AppendKind::FxxLeft)),
        "non-monic-condition" => Ok(non_monic_condition(12)),
        "non-monic-multiple-cores" => Ok(non_monic_multiple_cores(10)),
        "hereditarily-disjoint-classification" => Ok(hd_classification(10)),
        "unique-development-unique-core" => Ok(unique_dev_unique_core(10)),
        "preserved-gap" => Ok(preserved_gap(8)),
        "maxt-left-chain" => Ok(maxt_chain("maxt-left-chain", ChainKind::Left)),
        "maxt-right-chain" => Ok(maxt_chain("maxt-right-chain", ChainKind::Right)),
        "maxt-mixed-chain" => Ok(maxt_mixed_chain()),
        "bare-x-left-lex-min" => Ok(bare_x_lex_min("bare-x-left-lex-min", Dir::R)),
        "bare-x-right-lex-min" => Ok(bare_x_lex_min("bare-x-right-lex-min", Dir::L)),
        "isolated-left-appendage" => Ok(isolated_left_appendage()),
        "x-left-appendage-separation" => Ok(x_left_appendage_separation()),
        "left-appendage-lex-min" => Ok(left_appendage_lex_min()),
        "lexmin-construction" => Ok(lexmin_construction(200)),
        "lexmin-appendage" => Ok(lexmin_appendage()),
        "e-equiv-condition" => Ok(e_equiv_condition()),
        "determination-of-dege" => Ok(determination_of_dege()),
        "determination-of-dege-gen" => Ok(determination_of_dege_gen()),
        "dgap-lower-bound" => Ok(dgap_lower_bound()),
        other => Err(Error::Invalid(format!("unknown claim id {:?}", other))),
    }
}

/// Verify every registered claim, in registry order.
pub fn verify_all() -> Vec<ClaimReport> {
    CLAIM_IDS
        .iter()
        .map(|id| verify_claim(id).expect("registered ids resolve"))
        .collect()
}

pub fn report_json(reports: &[ClaimReport]) -> serde_json::Value {
    serde_json::to_value(reports).expect("reports serialize")
}

// ---------------------------------------------------------------------------
// Shared machinery
// ---------------------------------------------------------------------------

const PAIR_DEGREE_BOUND: u64 = 54;

/// One degree class with a shared faithful base: value order is lex order and
/// value equality is e-equivalence.
struct ClassData {
    terms: Vec<Term>,
    values: Vec<BigUint>,
    groups: HashMap<BigUint, Vec<usize>>,
}

impl ClassData {
    fn new(memo: &mut DegreeTerms, d: u64) -> ClassData {
        let terms: Vec<Term> = memo.terms(d).expect("class within budget").to_vec();
        let base = terms
            .iter()
            .map(coeff_sum_fast)
            .max()
            .unwrap_or_default()
            + BigUint::one();
        let values: Vec<BigUint> = terms.iter().map(|t| value_at_base(t, &base)).collect();
        let mut groups: HashMap<BigUint, Vec<usize>> = HashMap::new();
        for (i, v) in values.iter().enumerate() {
            groups.entry(v.clone()).or_default().push(i);
        }
        ClassData {
            terms,
            values,
            groups,
        }
    }

    /// Indices of all terms e-equivalent to term `i`, including `i`.
    fn equivalents(&self, i: usize) -> &[usize] {
        &self.groups[&self.values[i]]
    }
}

/// Development stage decompositions of `t`: `(node path, direction of the
/// core-carrying child)` for every strict ancestor of every core.
fn stage_entries(t: &Term) -> Vec<(Path, Dir)> {
    let mut set: BTreeSet<(Path, Dir)> = BTreeSet::new();
    for c in cores(t).expect("non-leaf term") {
        for l in 0..c.len() {
            set.insert((c[..l].to_vec(), c[l]));
        }
    }
    set.into_iter().collect()
}

/// Whether every subexpression hanging off the chain above `node` has maxt
/// degree at most that of the occurrence at `occ` (gap at least `occ`'s).
fn ellipses_dominated(t: &Term, node: &[Dir], occ: &[Dir]) -> bool {
    let occ_gap = maxt_gap(t, occ).expect("valid path");
    for k in 0..node.len() {
        let mut sib = node[..k].to_vec();
        sib.push(match node[k] {
            Dir::L => Dir::R,
            Dir::R => Dir::L,
        });
        if maxt_gap(t, &sib).expect("valid path") < occ_gap {
            return false;
        }
    }
    true
}

/// Stage index of a term in any development: the exponent sum of its degree.
fn stage_index(t: &Term) -> usize {
    let (m, n) = factor_23(dege(t)).expect("term degrees factor over {2,3}");
    (m + n) as usize
}

/// `Some(m)` when `t` equals the right comb `B(m)`.
fn b_comb_index(t: &Term) -> Option<u32> {
    match t {
        Term::Leaf(_) => Some(0),
        Term::App(a, b) if a.is_leaf() => b_comb_index(b).map(|m| m + 1),
        _ => None,
    }
}

/// Whether `b` appears at its stage in every development of every term
/// e-equivalent to `class.terms[i]`.
fn forced_at_stage(
    class: &ClassData,
    devs: &mut Vec<Option<Vec<Development>>>,
    i: usize,
    b: &Term,
) -> bool {
    let idx = stage_index(b);
    for &j in class.equivalents(i) {
        let dj = devs[j]
            .get_or_insert_with(|| developments(&class.terms[j]).expect("non-leaf term"));
        if dj.iter().any(|d| d.stages[idx - 1] != *b) {
            return false;
        }
    }
    true
}

fn pair_degrees(memo: &mut DegreeTerms, max: u64) -> Vec<u64> {
    memo.achievable_up_to(max)
        .into_iter()
        .filter(|&d| d >= 3)
        .collect()
}

// ---------------------------------------------------------------------------
// Appending claims
// ---------------------------------------------------------------------------

enum AppendKind {
    XLeft,
    XRight,
    FxxLeft,
}

fn appending_claim(id: &'static str, kind: AppendKind) -> ClaimReport {
    let mut check = Check::new(id, "degrees <= 54").over_equivalent_pairs();
    let mut memo = DegreeTerms::new(1 << 20);
    for d in pair_degrees(&mut memo, PAIR_DEGREE_BOUND) {
        let class = ClassData::new(&mut memo, d);
        for (i, t) in class.terms.iter().enumerate() {
            let Term::App(ta, tb) = t else { unreachable!() };
            let shape_matches = match kind {
                AppendKind::XLeft => ta.is_leaf(),
                AppendKind::XRight => tb.is_leaf(),
                AppendKind::FxxLeft => ta.is_leaf_pair(),
            };
            if !shape_matches {
                continue;
            }
            for &j in class.equivalents(i) {
                let u = &class.terms[j];
                let Term::App(c1, c2) = u else { unreachable!() };
                check.checked += 1;
                if j != i {
                    check.nontrivial += 1;
                }
                let ok = match kind {
                    AppendKind::XLeft => c1.is_leaf() && e_equivalent(c2, tb),
                    AppendKind::XRight => c2.is_leaf() && e_equivalent(c1, ta),
                    AppendKind::FxxLeft => c1.is_leaf_pair() && e_equivalent(c2, tb),
                };
                if !ok {
                    check.fail(format!("{} is e-equivalent to {} with the wrong shape", u, t));
                }
            }
        }
    }
    check.finish()
}

// ---------------------------------------------------------------------------
// Structural claims over leaf-bounded enumerations
// ---------------------------------------------------------------------------

fn non_monic_condition(max_leaves: usize) -> ClaimReport {
    let mut check = Check::new("non-monic-condition", "terms with <= 12 leaves");
    for t in enumerate_terms(max_leaves, 1) {
        if lead(&t) < BigUint::from(2u32) {
            continue;
        }
        check.checked += 1;
        check.nontrivial += 1;
        match factor_23(dege(&t)) {
            Some((p, q)) if p >= 1 && q >= 2 => {}
            _ => check.fail(format!("{} is non-monic with degree {}", t, dege(&t))),
        }
    }
    check.finish()
}

fn non_monic_multiple_cores(max_leaves: usize) -> ClaimReport {
    let mut check = Check::new("non-monic-multiple-cores", "terms with <= 10 leaves");
    for t in enumerate_terms(max_leaves, 1) {
        if t.is_leaf() || lead(&t) < BigUint::from(2u32) {
            continue;
        }
        check.checked += 1;
        check.nontrivial += 1;
        if cores(&t).expect("non-leaf term").len() < 2 {
            check.fail(format!("{} is non-monic with a unique core", t));
        }
    }
    check.finish()
}

fn hd_classification(max_leaves: usize) -> ClaimReport {
    let mut check = Check::new(
        "hereditarily-disjoint-classification",
        "terms with <= 10 leaves",
    );
    for t in enumerate_terms(max_leaves, 1) {
        check.checked += 1;
        check.nontrivial += 1;
        let case = classify_hereditarily_disjoint(&t);
        if case.is_hd() != is_hereditarily_disjoint_def(&t) {
            check.fail(format!("{}: classification disagrees with the definition", t));
            continue;
        }
        let expected_orde = match &case {
            HdCase::NotHd => None,
            HdCase::Case1 => Some(1),
            HdCase::Case2(_) => Some(2),
            HdCase::Case3(_) => Some(3),
            HdCase::Case4(_) => Some(4),
        };
        if let Some(o) = expected_orde {
            if orde(&t) != o {
                check.fail(format!("{}: case {} but order {}", t, case, orde(&t)));
            }
        }
    }
    check.finish()
}

fn unique_dev_unique_core(max_leaves: usize) -> ClaimReport {
    let mut check = Check::new("unique-development-unique-core", "terms with <= 10 leaves");
    for t in enumerate_terms(max_leaves, 1) {
        if t.is_leaf() {
            continue;
        }
        check.checked += 1;
        check.nontrivial += 1;
        let devs = developments(&t).expect("non-leaf term").len();
        let cs = cores(&t).expect("non-leaf term").len();
        if (devs == 1) != (cs == 1) {
            check.fail(format!("{}: {} developments, {} cores", t, devs, cs));
        }
    }
    check.finish()
}

fn preserved_gap(max_leaves: usize) -> ClaimReport {
    let mut check = Check::new("preserved-gap", "terms with <= 8 leaves, symbolic");
    fn app_paths(t: &Term, prefix: &mut Path, out: &mut Vec<Path>) {
        if let Term::App(a, b) = t {
            out.push(prefix.clone());
            prefix.push(Dir::L);
            app_paths(a, prefix, out);
            prefix.pop();
            prefix.push(Dir::R);
            app_paths(b, prefix, out);
            prefix.pop();
        }
    }
    for t in enumerate_terms(max_leaves, 1) {
        let mut ps = Vec::new();
        app_paths(&t, &mut Vec::new(), &mut ps);
        for p in ps {
            let Ok(r) = gap_report(&t, &p) else { continue };
            check.checked += 1;
            check.nontrivial += 1;
            if dege(&t) - r.maxt_exponent != r.dgap {
                check.fail(format!("{} at {}: gap identity broken", t, render_path(&p)));
                continue;
            }
            // the non-core child realizes the exponent per the occurrence
            // recursion, an independent symbolic computation
            let mut sib = p.clone();
            sib.push(if r.pi1 == 1 { Dir::R } else { Dir::L });
            if maxt_exponent(&t, &sib).expect("valid path") != r.maxt_exponent {
                check.fail(format!(
                    "{} at {}: occurrence recursion disagrees with maxt exponent {}",
                    t,
                    render_path(&p),
                    r.maxt_exponent
                ));
            }
        }
    }
    check.finish()
}

// ---------------------------------------------------------------------------
// maxt ordering chains
// ---------------------------------------------------------------------------

enum ChainKind {
    Left,
    Right,
}

/// The three ambient embeddings that keep the chain on the core side.
fn ambients(sub: Term) -> Vec<(Term, Path)> {
    vec![
        (sub.clone(), vec![]),
        (Term::app(sub.clone(), Term::x()), vec![Dir::L]),
        (Term::app(Term::x(), sub), vec![Dir::R]),
    ]
}

fn maxt_chain(id: &'static str, kind: ChainKind) -> ClaimReport {
    let mut check = Check::new(id, "seeds with <= 4 leaves, chains of length <= 3");
    for seed in enumerate_terms(4, 1) {
        if seed.is_leaf() {
            continue;
        }
        for n in 1..=3u32 {
            let mut sub = seed.clone();
            for _ in 0..n {
                sub = match kind {
                    ChainKind::Left => Term::app(Term::x(), sub),
                    ChainKind::Right => Term::app(sub, Term::x()),
                };
            }
            for (a, prefix) in ambients(sub) {
                check.checked += 1;
                check.nontrivial += 1;
                // x_i sits i-1 wrappers above the seed; deeper occurrences
                // must have strictly larger maxt degree
                let mut degrees = Vec::new();
                for i in 1..=n {
                    let mut p = prefix.clone();
                    for _ in 0..(n - i) {
                        p.push(match kind {
                            ChainKind::Left => Dir::R,
                            ChainKind::Right => Dir::L,
                        });
                    }
                    p.push(match kind {
                        ChainKind::Left => Dir::L,
                        ChainKind::Right => Dir::R,
                    });
                    degrees.push(maxt_exponent(&a, &p).expect("valid path"));
                }
                if !degrees.windows(2).all(|w| w[0] > w[1]) {
                    check.fail(format!("{}: chain degrees {:?} not decreasing", a, degrees));
                }
            }
        }
    }
    check.finish()
}

fn maxt_mixed_chain() -> ClaimReport {
    let mut check = Check::new("maxt-mixed-chain", "inner terms with <= 4 leaves");
    for b in enumerate_terms(4, 1) {
        if b.is_leaf() {
            continue;
        }
        let sub = Term::app(Term::app(Term::x(), b.clone()), Term::x());
        for (a, prefix) in ambients(sub) {
            check.checked += 1;
            check.nontrivial += 1;
            let mut x1 = prefix.clone();
            x1.extend([Dir::L, Dir::L]);
            let mut x2 = prefix.clone();
            x2.push(Dir::R);
            let d1 = maxt_exponent(&a, &x1).expect("valid path");
            let d2 = maxt_exponent(&a, &x2).expect("valid path");
            if d1 <= d2 {
                check.fail(format!("{}: maxt {} vs {} not decreasing", a, d1, d2));
            }
        }
    }
    check.finish()
}

// ---------------------------------------------------------------------------
// Lexicographic separation claims
// ---------------------------------------------------------------------------

/// Per-class index of stage decompositions keyed by the core-carrying child.
struct StageIndex {
    /// stage = f(B, other): entries keyed by B
    left_prev: HashMap<Term, Vec<(usize, Term, Path)>>,
    /// stage = f(other, B): entries keyed by B
    right_prev: HashMap<Term, Vec<(usize, Term, Path)>>,
}

fn stage_index_of(class: &ClassData) -> StageIndex {
    let mut left_prev: HashMap<Term, Vec<(usize, Term, Path)>> = HashMap::new();
    let mut right_prev: HashMap<Term, Vec<(usize, Term, Path)>> = HashMap::new();
    for (i, t) in class.terms.iter().enumerate() {
        for (node, dir) in stage_entries(t) {
            let Term::App(l, r) = subterm_at(t, &node).expect("valid path") else {
                unreachable!()
            };
            match dir {
                Dir::L => left_prev
                    .entry(l.as_ref().clone())
                    .or_default()
                    .push((i, r.as_ref().clone(), node)),
                Dir::R => right_prev
                    .entry(r.as_ref().clone())
                    .or_default()
                    .push((i, l.as_ref().clone(), node)),
            }
        }
    }
    StageIndex {
        left_prev,
        right_prev,
    }
}

/// `core_side = R`: stages `f(x', B)` with `B` carrying the core are lex-below
/// any `f(U, B)` with `U != x` and any `f(B, V)` in the same degree class.
/// `core_side = L`: stages `f(B, x')` are lex-below any `f(B, U)`, `U != x`.
fn bare_x_lex_min(id: &'static str, core_side: Dir) -> ClaimReport {
    let mut check = Check::new(id, "degrees <= 54");
    let mut memo = DegreeTerms::new(1 << 20);
    for d in pair_degrees(&mut memo, PAIR_DEGREE_BOUND) {
        let class = ClassData::new(&mut memo, d);
        let index = stage_index_of(&class);
        let own = match core_side {
            Dir::R => &index.right_prev,
            Dir::L => &index.left_prev,
        };
        for (b, entries) in own {
            for (i, other, node) in entries {
                if !other.is_leaf() {
                    continue;
                }
                let mut xp = node.clone();
                xp.push(match core_side {
                    Dir::R => Dir::L,
                    Dir::L => Dir::R,
                });
                if !ellipses_dominated(&class.terms[*i], node, &xp) {
                    continue;
                }
                for (j, u, _) in entries {
                    if u.is_leaf() {
                        continue;
                    }
                    check.checked += 1;
                    check.nontrivial += 1;
                    if class.values[*i] >= class.values[*j] {
                        check.fail(format!(
                            "{} not lex-below {} at shared stage {}",
                            class.terms[*i], class.terms[*j], b
                        ));
                    }
                }
                if core_side == Dir::R {
                    if let Some(mirror) = index.left_prev.get(b) {
                        for (j, _, _) in mirror {
                            check.checked += 1;
                            check.nontrivial += 1;
                            if class.values[*i] >= class.values[*j] {
                                check.fail(format!(
                                    "{} not lex-below {} at flipped stage {}",
                                    class.terms[*i], class.terms[*j], b
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    check.finish()
}

fn isolated_left_appendage() -> ClaimReport {
    let mut check = Check::new("isolated-left-appendage", "degrees <= 54");
    let mut memo = DegreeTerms::new(1 << 20);
    for d in pair_degrees(&mut memo, PAIR_DEGREE_BOUND) {
        let class = ClassData::new(&mut memo, d);
        let mut devs: Vec<Option<Vec<Development>>> = vec![None; class.terms.len()];
        for i in 0..class.terms.len() {
            let t = class.terms[i].clone();
            for (node, dir) in stage_entries(&t) {
                if dir != Dir::R {
                    continue;
                }
                let Term::App(l, r) = subterm_at(&t, &node).expect("valid path") else {
                    unreachable!()
                };
                if !l.is_leaf() {
                    continue;
                }
                let mut xp = node.clone();
                xp.push(Dir::L);
                if !ellipses_dominated(&t, &node, &xp) {
                    continue;
                }
                let b = r.as_ref().clone();
                if !forced_at_stage(&class, &mut devs, i, &b) {
                    continue;
                }
                check.checked += 1;
                check.nontrivial += 1;
                let fxb = Term::app(Term::x(), b.clone());
                if !forced_at_stage(&class, &mut devs, i, &fxb) {
                    check.fail(format!("{}: {} not forced at its stage", t, fxb));
                }
            }
        }
    }
    check.finish()
}

fn x_left_appendage_separation() -> ClaimReport {
    let mut check = Check::new("x-left-appendage-separation", "degrees <= 54");
    let mut memo = DegreeTerms::new(1 << 20);
    for d in pair_degrees(&mut memo, PAIR_DEGREE_BOUND) {
        let class = ClassData::new(&mut memo, d);
        let mut devs: Vec<Option<Vec<Development>>> = vec![None; class.terms.len()];
        for i in 0..class.terms.len() {
            let t = class.terms[i].clone();
            for (node, dir) in stage_entries(&t) {
                if dir != Dir::R {
                    continue;
                }
                let Term::App(l, r) = subterm_at(&t, &node).expect("valid path") else {
                    unreachable!()
                };
                if !l.is_leaf() || b_comb_index(r).is_none() {
                    continue;
                }
                let mut xp = node.clone();
                xp.push(Dir::L);
                if !ellipses_dominated(&t, &node, &xp) {
                    continue;
                }
                check.checked += 1;
                check.nontrivial += 1;
                let fxb = Term::app(Term::x(), r.as_ref().clone());
                if !forced_at_stage(&class, &mut devs, i, &fxb) {
                    check.fail(format!("{}: {} not forced at its stage", t, fxb));
                }
            }
        }
    }
    check.finish()
}

fn left_appendage_lex_min() -> ClaimReport {
    let mut check = Check::new("left-appendage-lex-min", "degrees <= 54");
    let mut memo = DegreeTerms::new(1 << 20);
    for d in pair_degrees(&mut memo, PAIR_DEGREE_BOUND) {
        let class = ClassData::new(&mut memo, d);
        let mut devs: Vec<Option<Vec<Development>>> = vec![None; class.terms.len()];
        for i in 0..class.terms.len() {
            let t = class.terms[i].clone();
            for (node, dir) in stage_entries(&t) {
                if dir != Dir::R {
                    continue;
                }
                let Term::App(l, r) = subterm_at(&t, &node).expect("valid path") else {
                    unreachable!()
                };
                if !l.is_leaf() || b_comb_index(r).is_none() {
                    continue;
                }
                let mut xp = node.clone();
                xp.push(Dir::L);
                if !ellipses_dominated(&t, &node, &xp) {
                    continue;
                }
                let target = Term::app(Term::x(), r.as_ref().clone());
                let idx = stage_index(&target);
                let target_deg = dege(&target);
                for (j, u) in class.terms.iter().enumerate() {
                    let dj = devs[j]
                        .get_or_insert_with(|| developments(u).expect("non-leaf term"));
                    for dev in dj.iter() {
                        let c = &dev.stages[idx - 1];
                        if *c == target || dege(c) != target_deg {
                            continue;
                        }
                        check.checked += 1;
                        check.nontrivial += 1;
                        if class.values[i] >= class.values[j] {
                            check.fail(format!(
                                "{} not lex-below {} despite stage {} vs {}",
                                t, u, target, c
                            ));
                        }
                    }
                }
            }
        }
    }
    check.finish()
}

// ---------------------------------------------------------------------------
// Lexicographic minimality of the comb construction
// ---------------------------------------------------------------------------

/// Strict lex minimality of the constructed minimum in its degree class.
/// Classes above the materialization threshold are streamed as top-level
/// compositions of two small child classes, compared by exact top slices; only
/// candidates that tie on the slice are built and compared faithfully.
fn lexmin_construction(max_degree: u64) -> ClaimReport {
    let mut check = Check::new("lexmin-construction", "degrees <= 200");
    let mut memo = DegreeTerms::new(1 << 21);
    const K: usize = 24;
    for d in memo.achievable_up_to(max_degree) {
        let Some((m, n)) = factor_23(d) else { continue };
        if n == 0 {
            continue;
        }
        let target = build_lexmin(m, n);
        let target_slice = top_monomials(&target, K);
        // (left degree, right degree) class pairs covering the degree class:
        // 2dA = d with 3dB <= d, plus 3dB = d with 2dA < d strictly
        let mut pairs: Vec<(u64, u64)> = Vec::new();
        if d % 2 == 0 && memo.achievable(d / 2) {
            for db in memo.achievable_up_to(d / 3) {
                pairs.push((d / 2, db));
            }
        }
        if d % 3 == 0 && memo.achievable(d / 3) {
            for da in memo.achievable_up_to((d - 1) / 2) {
                pairs.push((da, d / 3));
            }
        }
        // precomputed squared / cubed top slices per child class
        let mut sq: HashMap<u64, Vec<Vec<(u64, BigUint)>>> = HashMap::new();
        let mut cb: HashMap<u64, Vec<Vec<(u64, BigUint)>>> = HashMap::new();
        for &(da, db) in &pairs {
            if !sq.contains_key(&da) {
                let slices = memo
                    .terms(da)
                    .expect("child class within budget")
                    .iter()
                    .map(|t| {
                        let s = top_monomials(t, K);
                        top_mul(&s, &s, K)
                    })
                    .collect();
                sq.insert(da, slices);
            }
            if !cb.contains_key(&db) {
                let slices = memo
                    .terms(db)
                    .expect("child class within budget")
                    .iter()
                    .map(|t| {
                        let s = top_monomials(t, K);
                        top_mul(&top_mul(&s, &s, K), &s, K)
                    })
                    .collect();
                cb.insert(db, slices);
            }
        }
        for (da, db) in pairs {
            let lefts = memo.terms(da).expect("within budget");
            let rights = memo.terms(db).expect("within budget");
            let sqs = &sq[&da];
            let cbs = &cb[&db];
            for (ai, a) in lefts.iter().enumerate() {
                for (bi, b) in rights.iter().enumerate() {
                    check.checked += 1;
                    check.nontrivial += 1;
                    if cmp_target_vs_sum(&target_slice, &sqs[ai], &cbs[bi], K)
                        == Some(Ordering::Less)
                    {
                        continue;
                    }
                    let cand = Term::app(a.clone(), b.clone());
                    if cand == target {
                        continue;
                    }
                    if lex_compare_terms_fast(&target, &cand, 64) != Ordering::Less {
                        check.fail(format!(
                            "{} is not strictly lex-below {} at degree {}",
                            target, cand, d
                        ));
                    }
                }
            }
        }
    }
    check.finish()
}

/// Compare `target` against the virtual top slice of `p + q` without
/// materializing the sum: a lazy descending merge of `p` and `q`, cut off and
/// truncated exactly as the slice algebra would. Allocates only when both
/// operands carry the same exponent.
fn cmp_target_vs_sum(
    target: &[(u64, BigUint)],
    p: &[(u64, BigUint)],
    q: &[(u64, BigUint)],
    k: usize,
) -> Option<Ordering> {
    let cut_p = if p.len() >= k { p.last().map(|x| x.0) } else { None };
    let cut_q = if q.len() >= k { q.last().map(|x| x.0) } else { None };
    let cut = cut_p.into_iter().chain(cut_q).max();
    let mut i = 0;
    let mut j = 0;
    let mut produced = 0usize;
    let mut ti = 0;
    #[allow(unused_assignments)]
    let mut sum_storage = BigUint::default();
    while produced < k {
        let pe = p.get(i).map(|x| x.0);
        let qe = q.get(j).map(|x| x.0);
        let e = match (pe, qe) {
            (None, None) => break,
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.max(b),
        };
        if let Some(c) = cut {
            if e < c {
                break;
            }
        }
        let coeff: &BigUint = match (pe == Some(e), qe == Some(e)) {
            (true, true) => {
                sum_storage = &p[i].1 + &q[j].1;
                i += 1;
                j += 1;
                &sum_storage
            }
            (true, false) => {
                i += 1;
                &p[i - 1].1
            }
            (false, true) => {
                j += 1;
                &q[j - 1].1
            }
            (false, false) => unreachable!(),
        };
        produced += 1;
        let Some((te, tc)) = target.get(ti) else {
            // target exhausted first: its trailing-monomial-free form is
            // lex-below the candidate
            return Some(Ordering::Less);
        };
        match te.cmp(&e) {
            Ordering::Equal => {}
            ord => return Some(ord),
        }
        match tc.cmp(coeff) {
            Ordering::Equal => {}
            ord => return Some(ord),
        }
        ti += 1;
    }
    if ti < target.len() {
        return Some(Ordering::Greater);
    }
    if target.len() >= k || produced >= k {
        None
    } else {
        Some(Ordering::Equal)
    }
}

// ---------------------------------------------------------------------------
// Appendage determination claims
// ---------------------------------------------------------------------------

fn lexmin_appendage() -> ClaimReport {
    let mut check = Check::new(
        "lexmin-appendage",
        "degrees 2^m 3^n <= 72 with m >= 2, inner terms enumerated",
    )
    .over_equivalent_pairs();
    let mut memo = DegreeTerms::new(1 << 20);
    for (m, n) in [(2u32, 1u32), (3, 1), (2, 2), (3, 2)] {
        let f_part = build_lexmin(m - 2, n);
        let ffx = Term::app(f_part.clone(), Term::x());
        let bound = 3 + 2 * dege(&f_part);
        let d = 2u64.pow(m) * 3u64.pow(n);
        let class = ClassData::new(&mut memo, d);
        let b_degs: Vec<u64> = memo
            .achievable_up_to(bound / 3)
            .into_iter()
            .collect();
        for bd in b_degs {
            for b in memo.terms(bd).expect("within budget").iter() {
                let t = Term::app(ffx.clone(), b.clone());
                if dege(&t) != d {
                    continue;
                }
                let i = class
                    .terms
                    .iter()
                    .position(|u| u == &t)
                    .expect("constructed term is in its class");
                for &j in class.equivalents(i) {
                    check.checked += 1;
                    if j != i {
                        check.nontrivial += 1;
                    }
                    let Term::App(a, bb) = &class.terms[j] else {
                        unreachable!()
                    };
                    if a.as_ref() != &ffx || !e_equivalent(bb, b) {
                        check.fail(format!(
                            "{} is e-equivalent to {} without the forced left child",
                            class.terms[j], t
                        ));
                    }
                }
            }
        }
    }
    check.finish()
}

fn e_equiv_condition() -> ClaimReport {
    let mut check = Check::new("e-equiv-condition", "degrees <= 54").over_equivalent_pairs();
    let mut memo = DegreeTerms::new(1 << 20);
    for d in pair_degrees(&mut memo, PAIR_DEGREE_BOUND) {
        let class = ClassData::new(&mut memo, d);
        for (i, t) in class.terms.iter().enumerate() {
            let Term::App(a, b) = t else { unreachable!() };
            if dege(a) > dege(b) {
                continue;
            }
            for &j in class.equivalents(i) {
                let Term::App(c, dd) = &class.terms[j] else {
                    unreachable!()
                };
                if e_equivalent(b, dd) {
                    continue;
                }
                check.checked += 1;
                check.nontrivial += 1;
                let ok = dege(c) > dege(a)
                    && lex_compare_terms(b, dd) == Ordering::Greater
                    && dege(c) > dege(dd);
                if !ok {
                    check.fail(format!(
                        "equivalent pair {} and {} violates the degree/lex conditions",
                        t, class.terms[j]
                    ));
                }
            }
        }
    }
    check.finish()
}

fn determination_of_dege() -> ClaimReport {
    let mut check = Check::new(
        "determination-of-dege",
        "combs B(m) with m <= 2, inner terms enumerated",
    )
    .over_equivalent_pairs();
    let mut memo = DegreeTerms::new(1 << 20);
    for m in 0..=2u32 {
        let bm = build_b(m);
        let inner_bound = 3u64.pow(m);
        let d = 3u64.pow(m + 2);
        let class = ClassData::new(&mut memo, d);
        let e_degs = memo.achievable_up_to(inner_bound);
        for ed in e_degs {
            for e_term in memo.terms(ed).expect("within budget").to_vec() {
                let feb = Term::app(e_term.clone(), bm.clone());
                let a_degs = memo.achievable_up_to(dege(&feb));
                for ad in a_degs {
                    for a_term in memo.terms(ad).expect("within budget").iter() {
                        let t = Term::app(a_term.clone(), feb.clone());
                        if dege(&t) != d {
                            continue;
                        }
                        let i = class
                            .terms
                            .iter()
                            .position(|u| u == &t)
                            .expect("constructed term is in its class");
                        for &j in class.equivalents(i) {
                            check.checked += 1;
                            if j != i {
                                check.nontrivial += 1;
                            }
                            let Term::App(_, dpart) = &class.terms[j] else {
                                unreachable!()
                            };
                            let ok = match dpart.as_ref() {
                                Term::App(f_part, bpart) if bpart.as_ref() == &bm => {
                                    dege(f_part) == dege(&e_term)
                                        && lex_compare_terms(&e_term, f_part)
                                            != Ordering::Less
                                }
                                _ => false,
                            };
                            if !ok {
                                check.fail(format!(
                                    "{} equivalent to {} without the determined branch",
                                    class.terms[j], t
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    check.finish()
}

fn determination_of_dege_gen() -> ClaimReport {
    let mut check = Check::new(
        "determination-of-dege-gen",
        "chains within B(3), inner terms enumerated",
    )
    .over_equivalent_pairs();
    let mut memo = DegreeTerms::new(1 << 20);
    let chains: [&[u32]; 3] = [&[1], &[2], &[2, 1]];
    for chain in chains {
        let d1 = chain[0];
        let dj = *chain.last().unwrap();
        let d = 3u64.pow(d1 + 2);
        let class = ClassData::new(&mut memo, d);
        let u_degs = memo.achievable_up_to(3u64.pow(dj));
        for ud in u_degs {
            for u_term in memo.terms(ud).expect("within budget").to_vec() {
                let branch = crate::structure::apply_y_chain(&u_term, chain)
                    .expect("strictly decreasing chain");
                let a_degs = memo.achievable_up_to(dege(&branch));
                for ad in a_degs {
                    for a_term in memo.terms(ad).expect("within budget").iter() {
                        let t = Term::app(a_term.clone(), branch.clone());
                        if dege(&t) != d {
                            continue;
                        }
                        let i = class
                            .terms
                            .iter()
                            .position(|w| w == &t)
                            .expect("constructed term is in its class");
                        for &j in class.equivalents(i) {
                            check.checked += 1;
                            if j != i {
                                check.nontrivial += 1;
                            }
                            let Term::App(_, dpart) = &class.terms[j] else {
                                unreachable!()
                            };
                            let ok = match peel_y_chain(dpart, chain) {
                                Some(v) => {
                                    dege(&v) == dege(&u_term)
                                        && lex_compare_terms(&u_term, &v) != Ordering::Less
                                }
                                None => false,
                            };
                            if !ok {
                                check.fail(format!(
                                    "{} equivalent to {} without the determined chain",
                                    class.terms[j], t
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    check.finish()
}

/// Invert `apply_y_chain`: strip `f(-, B(d_i))` layers outermost-first.
fn peel_y_chain(t: &Term, chain: &[u32]) -> Option<Term> {
    let mut cur = t;
    for &di in chain {
        match cur {
            Term::App(a, b) if **b == build_b(di) => cur = a,
            _ => return None,
        }
    }
    Some(cur.clone())
}

fn dgap_lower_bound() -> ClaimReport {
    let mut check = Check::new("dgap-lower-bound", "degrees <= 54").over_equivalent_pairs();
    let mut memo = DegreeTerms::new(1 << 20);
    for d in pair_degrees(&mut memo, PAIR_DEGREE_BOUND) {
        let class = ClassData::new(&mut memo, d);
        for (i, t) in class.terms.iter().enumerate() {
            for &j in class.equivalents(i) {
                if j == i {
                    continue;
                }
                // a nontrivial equivalent pair: compare the degree-gaps of
                // the first appendages above every shared isolated stage
                check.checked += 1;
                check.nontrivial += 1;
                let a_bar = &class.terms[j];
                for (node, dir) in stage_entries(t) {
                    let sub = subterm_at(t, &node).expect("valid path");
                    let Term::App(l, r) = sub else { unreachable!() };
                    let (b0, e1) = match dir {
                        Dir::L => (l.as_ref(), r.as_ref()),
                        Dir::R => (r.as_ref(), l.as_ref()),
                    };
                    if !cores(t).expect("non-leaf").iter().all(|c| {
                        let mut p = node.clone();
                        p.push(dir);
                        c.starts_with(&p)
                    }) {
                        continue;
                    }
                    let gap1 = match dir {
                        Dir::R => 3 * dege(b0) - 2 * dege(e1),
                        Dir::L => 2 * dege(b0) - 3 * dege(e1),
                    };
                    let idx = stage_index(sub);
                    for dev in developments(a_bar).expect("non-leaf") {
                        let stage = &dev.stages[idx - 1];
                        let prev = &dev.stages[idx - 2];
                        if prev != b0 {
                            continue;
                        }
                        let Term::App(sl, sr) = stage else { unreachable!() };
                        let gap2 = if sl.as_ref() == prev {
                            2 * dege(prev) - 3 * dege(sr)
                        } else {
                            3 * dege(prev) - 2 * dege(sl)
                        };
                        if gap2 < gap1 {
                            check.fail(format!(
                                "equivalent pair {} and {}: gap {} below {}",
                                t, a_bar, gap2, gap1
                            ));
                        }
                    }
                }
            }
        }
    }
    check.finish()
}
