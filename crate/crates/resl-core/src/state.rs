//! Maps between residuated lattices and their state classifications.
//!
//! A candidate state is a total table from the domain carrier into the
//! codomain carrier sending bot to bot and top to top. The two families of
//! defining conditions are kept separate (four for type I, five for type II)
//! so that their proved equivalences stay testable, and enumeration prunes
//! on single conditions while full classification decides membership.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{BinOp, ResiduatedLattice};
use crate::classify::classify;
use crate::report::SuiteReport;
use crate::riecan;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StateError {
    #[error("endpoint violation: s({at}) = {got}")]
    EndpointViolation { at: usize, got: usize },
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("not a morphism: {op} not preserved (witness {witness:?})")]
    NotAMorphism { op: String, witness: Vec<usize> },
    #[error("not strictly order-preserving (witness {witness:?})")]
    NotStrict { witness: Vec<usize> },
    #[error("budget exceeded: {candidates} raw candidates over budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u64 },
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
}

/// Candidate-count budget for enumerations, in raw (unpruned) candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(100_000_000)
    }
}

/// A total map between two carriers, stored as a table of codomain indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StateMap {
    pub table: Vec<usize>,
}

impl StateMap {
    pub fn new(table: Vec<usize>) -> Self {
        StateMap { table }
    }

    pub fn identity(a: &ResiduatedLattice) -> Self {
        StateMap { table: (0..a.n()).collect() }
    }

    #[inline]
    pub fn of(&self, x: usize) -> usize {
        self.table[x]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateClassification {
    pub type_i_conditions: [bool; 4],
    pub type_ii_conditions: [bool; 5],
    pub type_i: bool,
    pub type_ii: bool,
    pub type_iii: bool,
    pub order_preserving: bool,
    pub state_morphism: bool,
    pub faithful: bool,
    pub riecan: bool,
}

impl StateClassification {
    pub fn flag_names() -> &'static [&'static str] {
        &[
            "type_i",
            "type_ii",
            "type_iii",
            "order_preserving",
            "state_morphism",
            "faithful",
            "riecan",
        ]
    }

    pub fn flags(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("type_i", self.type_i),
            ("type_ii", self.type_ii),
            ("type_iii", self.type_iii),
            ("order_preserving", self.order_preserving),
            ("state_morphism", self.state_morphism),
            ("faithful", self.faithful),
            ("riecan", self.riecan),
        ]
    }
}

/// Conjunctive class filter for enumerations. The default matches every
/// endpoint-correct map.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassFilter {
    pub type_i: bool,
    pub type_ii: bool,
    pub order_preserving: bool,
    pub state_morphism: bool,
    pub riecan: bool,
    pub faithful: bool,
}

impl ClassFilter {
    pub fn type_i() -> Self {
        ClassFilter { type_i: true, ..Default::default() }
    }

    pub fn type_ii() -> Self {
        ClassFilter { type_ii: true, ..Default::default() }
    }

    pub fn type_iii() -> Self {
        ClassFilter { type_i: true, type_ii: true, ..Default::default() }
    }

    pub fn order_preserving_type_i() -> Self {
        ClassFilter { type_i: true, order_preserving: true, ..Default::default() }
    }

    pub fn riecan() -> Self {
        ClassFilter { riecan: true, ..Default::default() }
    }

    pub fn state_morphism() -> Self {
        ClassFilter { state_morphism: true, ..Default::default() }
    }

    pub fn matches(&self, c: &StateClassification) -> bool {
        (!self.type_i || c.type_i)
            && (!self.type_ii || c.type_ii)
            && (!self.order_preserving || c.order_preserving)
            && (!self.state_morphism || c.state_morphism)
            && (!self.riecan || c.riecan)
            && (!self.faithful || c.faithful)
    }

    /// Parse the command-line spelling of a filter.
    pub fn parse(token: &str) -> Option<ClassFilter> {
        Some(match token {
            "all" => ClassFilter::default(),
            "type1" => ClassFilter::type_i(),
            "type1-op" | "op-type1" => ClassFilter::order_preserving_type_i(),
            "type2" => ClassFilter::type_ii(),
            "type3" => ClassFilter::type_iii(),
            "riecan" => ClassFilter::riecan(),
            "morphism" | "state-morphism" => ClassFilter::state_morphism(),
            _ => return None,
        })
    }
}

pub(crate) fn endpoints_ok(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
) -> Result<(), StateError> {
    if s.table.len() != a.n() {
        return Err(StateError::PreconditionNotMet(format!(
            "state table has {} entries for a carrier of {}",
            s.table.len(),
            a.n()
        )));
    }
    if let Some(&bad) = s.table.iter().find(|&&v| v >= l.n()) {
        return Err(StateError::PreconditionNotMet(format!(
            "state value {bad} outside codomain carrier"
        )));
    }
    if s.of(a.bot()) != l.bot() {
        return Err(StateError::EndpointViolation { at: a.bot(), got: s.of(a.bot()) });
    }
    if s.of(a.top()) != l.top() {
        return Err(StateError::EndpointViolation { at: a.top(), got: s.of(a.top()) });
    }
    Ok(())
}

/// The four type I conditions, evaluated separately by exhaustive
/// quantification so their proved equivalence stays observable.
pub fn check_type_i_conditions(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
) -> Result<[bool; 4], StateError> {
    endpoints_ok(a, l, s)?;
    let n = a.n();
    let mut c = [true; 4];
    for x in 0..n {
        for y in 0..n {
            let (sx, sy) = (s.of(x), s.of(y));
            let s_join = s.of(a.join(x, y));
            let s_meet = s.of(a.meet(x, y));
            let s_imp = s.of(a.imp(x, y));
            c[0] &= s.of(a.bires(x, y)) == l.imp(s_join, s_meet);
            if a.leq(y, x) {
                c[1] &= s_imp == l.imp(sx, sy);
            }
            c[2] &= s_imp == l.imp(sx, s_meet);
            c[3] &= s_imp == l.imp(s_join, sy);
        }
    }
    Ok(c)
}

/// The five type II conditions.
pub fn check_type_ii_conditions(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
) -> Result<[bool; 5], StateError> {
    endpoints_ok(a, l, s)?;
    let n = a.n();
    let mut c = [true; 5];
    for x in 0..n {
        for y in 0..n {
            let (sx, sy) = (s.of(x), s.of(y));
            let s_join = s.of(a.join(x, y));
            let s_meet = s.of(a.meet(x, y));
            let s_imp_xy = s.of(a.imp(x, y));
            let s_imp_yx = s.of(a.imp(y, x));
            c[0] &= s_join == l.imp(s.of(a.bires(x, y)), s_meet);
            c[1] &= sx == l.imp(s_imp_xy, s_meet);
            if a.leq(y, x) {
                c[2] &= sx == l.imp(s_imp_xy, sy);
            }
            c[3] &= s_join == l.imp(s_imp_xy, sy);
            c[4] &= l.imp(s_imp_xy, sy) == l.imp(s_imp_yx, sx);
        }
    }
    Ok(c)
}

fn is_order_preserving(a: &ResiduatedLattice, l: &ResiduatedLattice, s: &StateMap) -> bool {
    let n = a.n();
    (0..n).all(|x| (0..n).all(|y| !a.leq(x, y) || l.leq(s.of(x), s.of(y))))
}

fn preserves(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
    op_a: fn(&ResiduatedLattice, usize, usize) -> usize,
    op_l: fn(&ResiduatedLattice, usize, usize) -> usize,
) -> bool {
    let n = a.n();
    (0..n).all(|x| (0..n).all(|y| s.of(op_a(a, x, y)) == op_l(l, s.of(x), s.of(y))))
}

/// Fill every classification flag of a candidate state.
pub fn classify_state(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
) -> Result<StateClassification, StateError> {
    let c1 = check_type_i_conditions(a, l, s)?;
    let c2 = check_type_ii_conditions(a, l, s)?;
    let type_i = c1.iter().all(|&b| b);
    let type_ii = c2.iter().all(|&b| b);
    let order_preserving = is_order_preserving(a, l, s);
    let alpha = preserves(a, l, s, ResiduatedLattice::join, ResiduatedLattice::join);
    let beta = preserves(a, l, s, ResiduatedLattice::meet, ResiduatedLattice::meet);
    let gamma = preserves(a, l, s, ResiduatedLattice::imp, ResiduatedLattice::imp);
    let faithful = (0..a.n()).all(|x| s.of(x) != l.top() || x == a.top());
    let riecan = riecan::is_generalized_riecan(a, l, s).holds;
    Ok(StateClassification {
        type_i_conditions: c1,
        type_ii_conditions: c2,
        type_i,
        type_ii,
        type_iii: type_i && type_ii,
        order_preserving,
        state_morphism: alpha && beta && gamma,
        faithful,
        riecan,
    })
}

/// Free (interior) elements in a linear extension of the order, so that
/// partial condition checks on already-assigned comparable pairs prune early.
fn free_elements(a: &ResiduatedLattice) -> Vec<usize> {
    let mut free: Vec<usize> = (0..a.n()).filter(|&x| x != a.bot() && x != a.top()).collect();
    let below = |x: usize| (0..a.n()).filter(|&y| a.leq(y, x)).count();
    free.sort_by_key(|&x| (below(x), x));
    free
}

fn raw_candidates(a: &ResiduatedLattice, l: &ResiduatedLattice) -> u128 {
    let free = a.n().saturating_sub(2) as u32;
    (l.n() as u128).saturating_pow(free)
}

/// Partial-assignment consistency used while enumerating. Each closure only
/// rejects assignments that every completion would also fail, so pruning is
/// conservative; full classification still runs at the leaves.
struct Pruner<'x> {
    a: &'x ResiduatedLattice,
    l: &'x ResiduatedLattice,
    filter: ClassFilter,
    oplus_a: Option<riecan::OplusStructure>,
    oplus_l: Option<riecan::OplusStructure>,
}

impl<'x> Pruner<'x> {
    fn new(a: &'x ResiduatedLattice, l: &'x ResiduatedLattice, filter: ClassFilter) -> Self {
        let want_riecan = filter.riecan;
        Pruner {
            a,
            l,
            filter,
            oplus_a: want_riecan.then(|| riecan::oplus_structure(a)),
            oplus_l: want_riecan.then(|| riecan::oplus_structure(l)),
        }
    }

    fn consistent(&self, table: &[Option<usize>]) -> bool {
        let (a, l) = (self.a, self.l);
        let n = a.n();
        let get = |x: usize| table[x];
        for x in 0..n {
            let Some(sx) = get(x) else { continue };
            for y in 0..n {
                let Some(sy) = get(y) else { continue };
                if self.filter.order_preserving && a.leq(x, y) && !l.leq(sx, sy) {
                    return false;
                }
                if self.filter.type_i && a.leq(y, x) {
                    if let Some(si) = get(a.imp(x, y)) {
                        if si != l.imp(sx, sy) {
                            return false;
                        }
                    }
                }
                if self.filter.type_ii && a.leq(y, x) {
                    if let Some(si) = get(a.imp(x, y)) {
                        if sx != l.imp(si, sy) {
                            return false;
                        }
                    }
                }
                if self.filter.state_morphism {
                    if let Some(sj) = get(a.join(x, y)) {
                        if sj != l.join(sx, sy) {
                            return false;
                        }
                    }
                    if let Some(sm) = get(a.meet(x, y)) {
                        if sm != l.meet(sx, sy) {
                            return false;
                        }
                    }
                    if let Some(si) = get(a.imp(x, y)) {
                        if si != l.imp(sx, sy) {
                            return false;
                        }
                    }
                }
                if let (Some(oa), Some(ol)) = (&self.oplus_a, &self.oplus_l) {
                    if oa.perp(x, y) {
                        if !ol.perp(sx, sy) {
                            return false;
                        }
                        if let Some(so) = get(oa.oplus(x, y)) {
                            if so != ol.oplus(sx, sy) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

fn dfs_collect(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    free: &[usize],
    depth: usize,
    table: &mut Vec<Option<usize>>,
    pruner: &Pruner<'_>,
    out: &mut Vec<(StateMap, StateClassification)>,
) {
    if depth == free.len() {
        let s = StateMap::new(table.iter().map(|v| v.unwrap()).collect());
        let cls = classify_state(a, l, &s).expect("endpoints fixed by construction");
        if pruner.filter.matches(&cls) {
            out.push((s, cls));
        }
        return;
    }
    let e = free[depth];
    for v in 0..l.n() {
        table[e] = Some(v);
        if pruner.consistent(table) {
            dfs_collect(a, l, free, depth + 1, table, pruner, out);
        }
    }
    table[e] = None;
}

/// Enumerate all states in the requested class together with their full
/// classifications, in lexicographic table order. The search is partitioned
/// on the first free element and partitions run in parallel; results merge
/// deterministically.
pub fn census(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    filter: ClassFilter,
    budget: Budget,
) -> Result<Vec<(StateMap, StateClassification)>, StateError> {
    let candidates = raw_candidates(a, l);
    if candidates > budget.0 as u128 {
        return Err(StateError::BudgetExceeded { candidates, budget: budget.0 });
    }
    let free = free_elements(a);
    let base = {
        let mut t: Vec<Option<usize>> = vec![None; a.n()];
        t[a.bot()] = Some(l.bot());
        t[a.top()] = Some(l.top());
        t
    };
    let mut rows: Vec<(StateMap, StateClassification)> = if free.is_empty() {
        let mut out = Vec::new();
        let pruner = Pruner::new(a, l, filter);
        let mut table = base;
        dfs_collect(a, l, &free, 0, &mut table, &pruner, &mut out);
        out
    } else {
        (0..l.n())
            .into_par_iter()
            .map(|v0| {
                let pruner = Pruner::new(a, l, filter);
                let mut table = base.clone();
                table[free[0]] = Some(v0);
                let mut out = Vec::new();
                if pruner.consistent(&table) {
                    dfs_collect(a, l, &free, 1, &mut table, &pruner, &mut out);
                }
                out
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };
    rows.sort_by(|(s1, _), (s2, _)| s1.table.cmp(&s2.table));
    Ok(rows)
}

/// Enumerate only the state tables of a class.
pub fn enumerate_states(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    filter: ClassFilter,
    budget: Budget,
) -> Result<Vec<StateMap>, StateError> {
    Ok(census(a, l, filter, budget)?.into_iter().map(|(s, _)| s).collect())
}

/// All endpoint-correct maps, unfiltered and unpruned.
pub fn enumerate_endpoint_maps(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    budget: Budget,
) -> Result<Vec<StateMap>, StateError> {
    let candidates = raw_candidates(a, l);
    if candidates > budget.0 as u128 {
        return Err(StateError::BudgetExceeded { candidates, budget: budget.0 });
    }
    let free = free_elements(a);
    let mut out = Vec::with_capacity(candidates as usize);
    let mut table = vec![0usize; a.n()];
    table[a.top()] = l.top();
    let mut idx = vec![0usize; free.len()];
    loop {
        for (k, &e) in free.iter().enumerate() {
            table[e] = idx[k];
        }
        out.push(StateMap::new(table.clone()));
        let mut k = free.len();
        loop {
            if k == 0 {
                out.sort_by(|s1, s2| s1.table.cmp(&s2.table));
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < l.n() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Arithmetic consequences of being a type I state. Sub-suites whose guards
/// (order preservation, divisibility, MV codomain or domain) do not hold are
/// reported as skipped with the missing flag named.
pub fn consequence_suite_type_i(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
) -> Result<SuiteReport, StateError> {
    let cls = classify_state(a, l, s)?;
    if !cls.type_i {
        return Err(StateError::PreconditionNotMet("type_i".into()));
    }
    let mut r = SuiteReport::new("type-i consequences");
    let n = a.n();

    let first1 = |p: &dyn Fn(usize) -> bool| (0..n).find(|&x| !p(x)).map(|x| vec![x]);
    let first2 = |p: &dyn Fn(usize, usize) -> bool| -> Option<Vec<usize>> {
        for x in 0..n {
            for y in 0..n {
                if !p(x, y) {
                    return Some(vec![x, y]);
                }
            }
        }
        None
    };

    r.check("neg_commutes", first1(&|x| s.of(a.neg(x)) == l.neg(s.of(x))));
    r.check(
        "join_meet_exchange",
        first2(&|x, y| {
            l.imp(s.of(a.join(x, y)), s.of(x)) == l.imp(s.of(y), s.of(a.meet(x, y)))
        }),
    );
    r.check(
        "double_imp_value",
        first2(&|x, y| {
            s.of(a.imp(a.imp(x, y), y)) == l.imp(s.of(a.imp(x, y)), s.of(y))
        }),
    );
    r.check(
        "double_imp_via_join",
        first2(&|x, y| {
            s.of(a.imp(a.imp(x, y), y))
                == l.imp(l.imp(s.of(a.join(x, y)), s.of(y)), s.of(y))
        }),
    );
    r.check(
        "join_meet_symmetry",
        first2(&|x, y| {
            l.imp(s.of(a.join(x, y)), l.meet(s.of(x), s.of(y)))
                == l.imp(l.join(s.of(x), s.of(y)), s.of(a.meet(x, y)))
        }),
    );
    r.check(
        "product_lower_bound",
        first2(&|x, y| {
            let prod = a.times(x, y);
            l.leq(l.times(s.of(x), s.of(a.imp(x, prod))), s.of(prod))
        }),
    );

    if cls.order_preserving {
        r.check(
            "op.product_superadditive",
            first2(&|x, y| l.leq(l.times(s.of(x), s.of(y)), s.of(a.times(x, y)))),
        );
        r.check(
            "op.monus_superadditive",
            first2(&|x, y| l.leq(l.monus(s.of(x), s.of(y)), s.of(a.monus(x, y)))),
        );
        r.check("op.imp_subadditive", first2(&|x, y| l.leq(s.of(a.imp(x, y)), l.imp(s.of(x), s.of(y)))));
        r.check(
            "op.imp_pair_below_bires",
            first2(&|x, y| {
                l.leq(
                    l.times(s.of(a.imp(x, y)), s.of(a.imp(y, x))),
                    l.bires(s.of(x), s.of(y)),
                )
            }),
        );
        r.check(
            "op.bires_contraction",
            first2(&|x, y| l.leq(s.of(a.bires(x, y)), l.bires(s.of(x), s.of(y)))),
        );
        r.check("op.bires_congruence", {
            let mut witness = None;
            'outer: for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        for w in 0..n {
                            let lhs = l.times(s.of(a.bires(x, z)), s.of(a.bires(y, w)));
                            let rhs =
                                l.bires(s.of(a.bires(x, y)), s.of(a.bires(z, w)));
                            if !l.leq(lhs, rhs) {
                                witness = Some(vec![x, y, z, w]);
                                break 'outer;
                            }
                        }
                    }
                }
            }
            witness
        });
    } else {
        for id in ["op.product_superadditive", "op.monus_superadditive", "op.imp_subadditive", "op.imp_pair_below_bires", "op.bires_contraction", "op.bires_congruence"] {
            r.skip(id, "order_preserving");
        }
    }

    let cls_a = classify(a);
    let cls_l = classify(l);
    if cls.order_preserving && cls_a.divisible && cls_l.divisible {
        r.check(
            "div.product_recovery",
            first2(&|x, y| {
                let prod = a.times(x, y);
                s.of(prod) == l.times(s.of(x), s.of(a.imp(x, prod)))
            }),
        );
        r.check(
            "div.meet_recovery",
            first2(&|x, y| s.of(a.meet(x, y)) == l.times(s.of(x), s.of(a.imp(x, y)))),
        );
    } else {
        let why = if !cls.order_preserving { "order_preserving" } else { "divisible" };
        r.skip("div.product_recovery", why);
        r.skip("div.meet_recovery", why);
    }

    if cls.order_preserving && cls_l.mv {
        r.check(
            "mv_cod.join_via_double_imp",
            first2(&|x, y| {
                let v = s.of(a.join(x, y));
                v == s.of(a.imp(a.imp(x, y), y)) && v == s.of(a.imp(a.imp(y, x), x))
            }),
        );
    } else {
        r.skip("mv_cod.join_via_double_imp", if !cls.order_preserving { "order_preserving" } else { "mv codomain" });
    }

    if cls.order_preserving && cls_a.mv {
        let oplus = |x: usize, y: usize| a.neg(a.times(a.neg(x), a.neg(y)));
        r.check("mv_dom.neg_commutes", first1(&|x| s.of(a.neg(x)) == l.neg(s.of(x))));
        r.check(
            "mv_dom.imp_residual",
            first2(&|x, y| {
                l.imp(s.of(a.imp(x, y)), l.imp(s.of(x), s.of(y))) == l.top()
            }),
        );
        r.check(
            "mv_dom.oplus_formula",
            first2(&|x, y| {
                s.of(oplus(x, y))
                    == l.imp(l.imp(s.of(x), s.of(a.times(x, y))), s.of(y))
            }),
        );
    } else {
        let why = if !cls.order_preserving { "order_preserving" } else { "mv domain" };
        for id in ["mv_dom.neg_commutes", "mv_dom.imp_residual", "mv_dom.oplus_formula"] {
            r.skip(id, why);
        }
    }

    Ok(r)
}

/// Arithmetic consequences of being a type II state, plus the symmetric
/// implication identity for type III states.
pub fn consequence_suite_type_ii(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
) -> Result<SuiteReport, StateError> {
    let cls = classify_state(a, l, s)?;
    if !cls.type_ii {
        return Err(StateError::PreconditionNotMet("type_ii".into()));
    }
    let mut r = SuiteReport::new("type-ii consequences");
    let n = a.n();
    let first1 = |p: &dyn Fn(usize) -> bool| (0..n).find(|&x| !p(x)).map(|x| vec![x]);
    let first2 = |p: &dyn Fn(usize, usize) -> bool| -> Option<Vec<usize>> {
        for x in 0..n {
            for y in 0..n {
                if !p(x, y) {
                    return Some(vec![x, y]);
                }
            }
        }
        None
    };

    r.check("order_preserving", first2(&|x, y| !a.leq(y, x) || l.leq(s.of(y), s.of(x))));
    r.check("neg_involution", first1(&|x| s.of(x) == l.neg(s.of(a.neg(x)))));
    r.check(
        "double_neg_fixed",
        first1(&|x| {
            let v = s.of(x);
            s.of(a.neg(a.neg(x))) == v && l.neg(l.neg(v)) == v
        }),
    );
    r.check(
        "imp_reconstruction",
        first2(&|x, y| {
            let i = a.imp(x, y);
            s.of(i) == l.imp(s.of(a.imp(i, y)), s.of(y))
        }),
    );
    r.check("neg_commutes", first1(&|x| s.of(a.neg(x)) == l.neg(s.of(x))));
    r.check(
        "product_de_morgan",
        first2(&|x, y| s.of(a.times(x, y)) == l.neg(s.of(a.imp(x, a.neg(y))))),
    );

    if cls.type_iii {
        r.check(
            "type_iii.symmetric_double_imp",
            first2(&|x, y| s.of(a.imp(a.imp(x, y), y)) == s.of(a.imp(a.imp(y, x), x))),
        );
    } else {
        r.skip("type_iii.symmetric_double_imp", "type_iii");
    }

    Ok(r)
}

/// Section state of a Heyting algebra: x maps to imp(base, x). The base must
/// negate to bot, otherwise the zero endpoint fails (in particular base = bot
/// is rejected).
pub fn heyting_section_state(
    a: &ResiduatedLattice,
    base: usize,
) -> Result<StateMap, StateError> {
    if !classify(a).heyting {
        return Err(StateError::PreconditionNotMet("heyting".into()));
    }
    if base >= a.n() {
        return Err(StateError::PreconditionNotMet("section base outside carrier".into()));
    }
    if a.neg(base) != a.bot() {
        return Err(StateError::PreconditionNotMet(
            "section base must have negation bot so the zero endpoint holds".into(),
        ));
    }
    let s = StateMap::new((0..a.n()).map(|x| a.imp(base, x)).collect());
    let cls = classify_state(a, a, &s)?;
    if !cls.type_i || !cls.order_preserving {
        return Err(StateError::InternalAssertion(
            "section state failed to classify as order-preserving type I".into(),
        ));
    }
    Ok(s)
}

/// State on a bounded chain with Goedel-style implication: follow `f` below
/// the threshold, constantly top from the threshold up. `f` lists images of
/// the elements strictly below the threshold in ascending order and must be
/// strictly order-preserving with f(bot) = bot.
pub fn chain_state(
    a: &ResiduatedLattice,
    threshold: usize,
    f: &[usize],
) -> Result<StateMap, StateError> {
    let cls = classify(a);
    if !cls.chain || !cls.heyting {
        return Err(StateError::PreconditionNotMet("chain Heyting algebra".into()));
    }
    if threshold == a.bot() || threshold >= a.n() {
        return Err(StateError::PreconditionNotMet("threshold must be a nonzero element".into()));
    }
    let mut below: Vec<usize> =
        (0..a.n()).filter(|&x| a.leq(x, threshold) && x != threshold).collect();
    below.sort_by(|&x, &y| if a.leq(x, y) { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater });
    if f.len() != below.len() {
        return Err(StateError::PreconditionNotMet(format!(
            "partial map covers {} elements, expected {}",
            f.len(),
            below.len()
        )));
    }
    if let Some(&bad) = f.iter().find(|&&v| v >= a.n()) {
        return Err(StateError::PreconditionNotMet(format!("image {bad} outside carrier")));
    }
    if f[0] != a.bot() {
        return Err(StateError::PreconditionNotMet("partial map must send bot to bot".into()));
    }
    for i in 0..f.len() {
        for j in (i + 1)..f.len() {
            if !(a.leq(f[i], f[j]) && f[i] != f[j]) {
                return Err(StateError::NotStrict { witness: vec![below[i], below[j]] });
            }
        }
    }
    let mut table = vec![a.top(); a.n()];
    for (k, &x) in below.iter().enumerate() {
        table[x] = f[k];
    }
    let s = StateMap::new(table);
    let c = classify_state(a, a, &s)?;
    if !c.type_i || !c.order_preserving {
        return Err(StateError::InternalAssertion(
            "chain state failed to classify as order-preserving type I".into(),
        ));
    }
    Ok(s)
}

/// Check that a table is a residuated lattice morphism (preserves both
/// bounds and all four binary operations).
pub fn check_morphism(
    a: &ResiduatedLattice,
    b: &ResiduatedLattice,
    f: &[usize],
) -> Result<(), StateError> {
    if f.len() != a.n() || f.iter().any(|&v| v >= b.n()) {
        return Err(StateError::PreconditionNotMet("morphism table malformed".into()));
    }
    if f[a.bot()] != b.bot() {
        return Err(StateError::NotAMorphism { op: "bot".into(), witness: vec![a.bot()] });
    }
    if f[a.top()] != b.top() {
        return Err(StateError::NotAMorphism { op: "top".into(), witness: vec![a.top()] });
    }
    let ops: [(&str, BinOp); 4] = [
        ("join", ResiduatedLattice::join),
        ("meet", ResiduatedLattice::meet),
        ("times", ResiduatedLattice::times),
        ("imp", ResiduatedLattice::imp),
    ];
    for (name, op) in ops {
        for x in 0..a.n() {
            for y in 0..a.n() {
                if f[op(a, x, y)] != op(b, f[x], f[y]) {
                    return Err(StateError::NotAMorphism {
                        op: name.into(),
                        witness: vec![x, y],
                    });
                }
            }
        }
    }
    Ok(())
}

/// Precompose a state with a residuated lattice morphism. Classification
/// flags that composition preserves (type I, order preservation, type II,
/// type III) are asserted on the composite.
pub fn compose_with_morphism(
    a: &ResiduatedLattice,
    b: &ResiduatedLattice,
    l: &ResiduatedLattice,
    f: &[usize],
    s: &StateMap,
) -> Result<StateMap, StateError> {
    check_morphism(a, b, f)?;
    let s_cls = classify_state(b, l, s)?;
    let composite = StateMap::new((0..a.n()).map(|x| s.of(f[x])).collect());
    let c_cls = classify_state(a, l, &composite)?;
    if s_cls.type_i && !c_cls.type_i {
        return Err(StateError::InternalAssertion("composition lost type I".into()));
    }
    if s_cls.type_i && s_cls.order_preserving && !(c_cls.type_i && c_cls.order_preserving) {
        return Err(StateError::InternalAssertion(
            "composition lost order-preserving type I".into(),
        ));
    }
    if s_cls.type_ii && !c_cls.type_ii {
        return Err(StateError::InternalAssertion("composition lost type II".into()));
    }
    Ok(composite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn r36_state(table: [usize; 6]) -> StateMap {
        StateMap::new(table.to_vec())
    }

    // frozen self-state tables on the six-element algebra,
    // elements ordered 0, a, b, c, d, 1
    pub fn r36_type_i_states() -> Vec<StateMap> {
        vec![
            r36_state([0, 1, 0, 5, 1, 5]),
            r36_state([0, 1, 2, 3, 4, 5]),
            r36_state([0, 5, 0, 5, 5, 5]),
            r36_state([0, 5, 2, 3, 3, 5]),
            r36_state([0, 5, 3, 2, 2, 5]),
            r36_state([0, 5, 5, 0, 0, 5]),
        ]
    }

    #[test]
    fn r36_census_matches_frozen_tables() {
        let a = samples::r36();
        let got = enumerate_states(&a, &a, ClassFilter::type_i(), Budget::default()).unwrap();
        assert_eq!(got, r36_type_i_states());
    }

    #[test]
    fn r36_order_preserving_census() {
        let a = samples::r36();
        let got =
            enumerate_states(&a, &a, ClassFilter::order_preserving_type_i(), Budget::default())
                .unwrap();
        assert_eq!(got, r36_type_i_states()[1..].to_vec());
    }

    #[test]
    fn r36_type_ii_census() {
        let a = samples::r36();
        let got = enumerate_states(&a, &a, ClassFilter::type_ii(), Budget::default()).unwrap();
        assert_eq!(got, r36_type_i_states()[2..].to_vec());
    }

    #[test]
    fn s1_is_type_i_but_not_order_preserving() {
        let a = samples::r36();
        let s1 = r36_state([0, 1, 0, 5, 1, 5]);
        let cls = classify_state(&a, &a, &s1).unwrap();
        assert!(cls.type_i);
        assert!(!cls.order_preserving);
        // witness: c <= a but s1(c) = 1 > s1(a) = a
        assert!(a.leq(3, 1) && !a.leq(s1.of(3), s1.of(1)));
        assert!(!cls.type_ii);
    }

    #[test]
    fn m1_is_not_type_i() {
        let a = samples::r36();
        let m1 = r36_state([0, 1, 0, 5, 5, 5]);
        let c = check_type_i_conditions(&a, &a, &m1).unwrap();
        assert!(c.iter().any(|&b| !b));
        let cls = classify_state(&a, &a, &m1).unwrap();
        assert!(!cls.type_i && !cls.type_ii && cls.riecan);
    }

    #[test]
    fn identity_is_type_ii_iff_mv() {
        for alg in samples::all_samples() {
            let id = StateMap::identity(&alg);
            let cls = classify_state(&alg, &alg, &id).unwrap();
            assert!(cls.type_i && cls.order_preserving && cls.faithful && cls.state_morphism);
            assert_eq!(cls.type_ii, crate::classify::classify(&alg).mv);
        }
    }

    #[test]
    fn s6_classification() {
        let a = samples::r36();
        let s6 = r36_state([0, 5, 5, 0, 0, 5]);
        let cls = classify_state(&a, &a, &s6).unwrap();
        assert!(cls.type_i && cls.type_ii && cls.order_preserving);
        assert!(!cls.faithful); // s6(a) = 1 with a != 1
    }

    #[test]
    fn endpoint_violation_detected() {
        let a = samples::boolean2();
        let bad = StateMap::new(vec![1, 1]);
        assert!(matches!(
            classify_state(&a, &a, &bad),
            Err(StateError::EndpointViolation { .. })
        ));
    }

    #[test]
    fn census_matches_unpruned_oracle() {
        // the pruned search must agree with plain brute force over every class
        let pairs = [
            (samples::r36(), samples::r36()),
            (samples::r36(), samples::boolean2()),
            (samples::chain_goedel(4), samples::chain_lukasiewicz(4)),
            (samples::diamond_boolean(), samples::chain_goedel(3)),
        ];
        let filters = [
            ClassFilter::type_i(),
            ClassFilter::type_ii(),
            ClassFilter::order_preserving_type_i(),
            ClassFilter::riecan(),
            ClassFilter::state_morphism(),
        ];
        for (a, l) in &pairs {
            let all = enumerate_endpoint_maps(a, l, Budget::default()).unwrap();
            for filter in filters {
                let expected: Vec<StateMap> = all
                    .iter()
                    .filter(|s| filter.matches(&classify_state(a, l, s).unwrap()))
                    .cloned()
                    .collect();
                let got = enumerate_states(a, l, filter, Budget::default()).unwrap();
                assert_eq!(got, expected, "filter {filter:?} disagrees with oracle");
            }
        }
    }

    #[test]
    fn condition_equivalences_on_sample_pairs() {
        // the four type I conditions agree pairwise, and so do the five
        // type II conditions, on every endpoint-correct map
        let pairs = [
            (samples::r36(), samples::r36()),
            (samples::chain_goedel(3), samples::chain_lukasiewicz(4)),
            (samples::diamond_boolean(), samples::diamond_boolean()),
        ];
        for (a, l) in &pairs {
            for s in enumerate_endpoint_maps(a, l, Budget::default()).unwrap() {
                let c1 = check_type_i_conditions(a, l, &s).unwrap();
                assert!(c1.iter().all(|&b| b == c1[0]), "type I conditions split on {s:?}");
                let c2 = check_type_ii_conditions(a, l, &s).unwrap();
                assert!(c2.iter().all(|&b| b == c2[0]), "type II conditions split on {s:?}");
            }
        }
    }

    #[test]
    fn every_type_ii_state_is_order_preserving() {
        let a = samples::r36();
        for (_, cls) in census(&a, &a, ClassFilter::type_ii(), Budget::default()).unwrap() {
            assert!(cls.order_preserving);
        }
    }

    #[test]
    fn every_state_morphism_is_order_preserving_type_i() {
        let pairs = [
            (samples::r36(), samples::r36()),
            (samples::r36(), samples::boolean2()),
            (samples::diamond_boolean(), samples::chain_goedel(3)),
        ];
        for (a, l) in &pairs {
            let rows =
                census(a, l, ClassFilter::state_morphism(), Budget::default()).unwrap();
            assert!(!rows.is_empty());
            for (_, cls) in rows {
                assert!(cls.type_i && cls.order_preserving);
            }
        }
    }

    #[test]
    fn condition_equivalences_hold_on_sampled_large_pairs() {
        // beyond the exhaustive size bound, spot-check random
        // endpoint-correct maps with a fixed seed
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20_240_817);
        let pairs = [
            (samples::chain_goedel(7), samples::chain_lukasiewicz(6)),
            (samples::chain_lukasiewicz(7), samples::r36()),
        ];
        for (a, l) in &pairs {
            assert!(a.n() * l.n() > 36);
            for _ in 0..500 {
                let mut table: Vec<usize> =
                    (0..a.n()).map(|_| rng.gen_range(0..l.n())).collect();
                table[a.bot()] = l.bot();
                table[a.top()] = l.top();
                let s = StateMap::new(table);
                let c1 = check_type_i_conditions(a, l, &s).unwrap();
                assert!(c1.iter().all(|&b| b == c1[0]), "type I split on {s:?}");
                let c2 = check_type_ii_conditions(a, l, &s).unwrap();
                assert!(c2.iter().all(|&b| b == c2[0]), "type II split on {s:?}");
            }
        }
    }

    #[test]
    fn mv_codomain_collapses_op_type_i_and_type_ii() {
        // with an MV codomain the two families coincide
        let doms = [samples::r36(), samples::chain_goedel(3), samples::diamond_boolean()];
        let cods = [samples::chain_lukasiewicz(4), samples::boolean2()];
        for a in &doms {
            for l in &cods {
                for s in enumerate_endpoint_maps(a, l, Budget::default()).unwrap() {
                    let cls = classify_state(a, l, &s).unwrap();
                    assert_eq!(cls.type_i && cls.order_preserving, cls.type_ii);
                }
            }
        }
    }

    #[test]
    fn budget_exceeded_reported() {
        let a = samples::r36();
        let err = enumerate_states(&a, &a, ClassFilter::type_i(), Budget(10)).unwrap_err();
        assert!(matches!(err, StateError::BudgetExceeded { candidates: 1296, .. }));
    }

    #[test]
    fn heyting_section_states() {
        let g3 = samples::chain_goedel(3);
        let s = heyting_section_state(&g3, 1).unwrap();
        assert_eq!(s.table, vec![0, 2, 2]);
        let id = heyting_section_state(&g3, g3.top()).unwrap();
        assert_eq!(id, StateMap::identity(&g3));
        assert!(matches!(
            heyting_section_state(&g3, g3.bot()),
            Err(StateError::PreconditionNotMet(_))
        ));
        // on the Boolean square an atom negates to the other atom, not bot
        let sq = samples::diamond_boolean();
        assert!(matches!(
            heyting_section_state(&sq, 1),
            Err(StateError::PreconditionNotMet(_))
        ));
    }

    #[test]
    fn chain_states() {
        let g4 = samples::chain_goedel(4);
        let s = chain_state(&g4, 2, &[0, 1]).unwrap();
        assert_eq!(s.table, vec![0, 1, 3, 3]);
        let id = chain_state(&g4, g4.top(), &[0, 1, 2]).unwrap();
        assert_eq!(id, StateMap::identity(&g4));
        assert!(matches!(
            chain_state(&g4, 2, &[0, 0]),
            Err(StateError::NotStrict { .. })
        ));
    }

    #[test]
    fn composition_preserves_classes() {
        let a = samples::r36();
        let s3 = r36_state([0, 5, 0, 5, 5, 5]);
        let composed = compose_with_morphism(&a, &a, &a, &StateMap::identity(&a).table, &s3)
            .unwrap();
        assert_eq!(composed, s3);

        // inclusion of the two-element subalgebra {0, 1}
        let b2 = samples::boolean2();
        let incl = vec![0, 5];
        let id = StateMap::identity(&a);
        let c = compose_with_morphism(&b2, &a, &a, &incl, &id).unwrap();
        assert_eq!(c.table, vec![0, 5]);

        // a table that breaks the product is rejected
        let bad = vec![0, 1]; // sends top of b2 to a
        assert!(matches!(
            compose_with_morphism(&b2, &a, &a, &bad, &id),
            Err(StateError::NotAMorphism { .. })
        ));
    }

    #[test]
    fn consequence_suites_on_r36() {
        let a = samples::r36();
        let s4 = r36_state([0, 5, 2, 3, 3, 5]);
        let rep = consequence_suite_type_i(&a, &a, &s4).unwrap();
        assert!(rep.passed(), "{rep}");
        let s5 = r36_state([0, 5, 3, 2, 2, 5]);
        let rep = consequence_suite_type_ii(&a, &a, &s5).unwrap();
        assert!(rep.passed(), "{rep}");
        // s1 is type I but not order-preserving: the order-guarded items skip
        let s1 = r36_state([0, 1, 0, 5, 1, 5]);
        let rep = consequence_suite_type_i(&a, &a, &s1).unwrap();
        assert!(matches!(
            rep.item("op.product_superadditive").unwrap().status,
            crate::report::ItemStatus::Skipped { .. }
        ));
        // s2 is not type II at all
        let s2 = StateMap::identity(&a);
        assert!(matches!(
            consequence_suite_type_ii(&a, &a, &s2),
            Err(StateError::PreconditionNotMet(_))
        ));
    }

    #[test]
    fn mv_domain_items_on_mv_chain() {
        let l4 = samples::chain_lukasiewicz(4);
        let id = StateMap::identity(&l4);
        let rep = consequence_suite_type_i(&l4, &l4, &id).unwrap();
        for item in ["mv_dom.neg_commutes", "mv_dom.imp_residual", "mv_dom.oplus_formula"] {
            assert!(matches!(
                rep.item(item).unwrap().status,
                crate::report::ItemStatus::Passed
            ));
        }
    }

    #[test]
    fn oplus_formula_characterizes_op_type_i_on_mv_domain() {
        // on an MV domain the three conditions are exactly order-preserving type I
        let a = samples::chain_lukasiewicz(4);
        for l in [samples::r36(), samples::chain_goedel(3)] {
            for s in enumerate_endpoint_maps(&a, &l, Budget::default()).unwrap() {
                let cls = classify_state(&a, &l, &s).unwrap();
                let oplus = |x: usize, y: usize| a.neg(a.times(a.neg(x), a.neg(y)));
                let ca = (0..a.n()).all(|x| s.of(a.neg(x)) == l.neg(s.of(x)));
                let cb = (0..a.n()).all(|x| {
                    (0..a.n()).all(|y| {
                        l.imp(s.of(a.imp(x, y)), l.imp(s.of(x), s.of(y))) == l.top()
                    })
                });
                let cc = (0..a.n()).all(|x| {
                    (0..a.n()).all(|y| {
                        s.of(oplus(x, y))
                            == l.imp(l.imp(s.of(x), s.of(a.times(x, y))), s.of(y))
                    })
                });
                assert_eq!(ca && cb && cc, cls.type_i && cls.order_preserving);
            }
        }
    }
}
