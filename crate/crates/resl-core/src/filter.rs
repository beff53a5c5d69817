//! Filters, kernels of states, congruences and quotient algebras.

use thiserror::Error;

use crate::algebra::{validate_lattice, AlgebraError, BinOp, RawAlgebra, ResiduatedLattice};
use crate::classify::classify;
use crate::report::SuiteReport;
use crate::state::{classify_state, StateClassification, StateError, StateMap};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FilterError {
    #[error("not a filter: {0}")]
    NotAFilter(String),
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Subset of a carrier, stored as a bitmask (carriers are tiny).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FilterSet {
    mask: u64,
    n: usize,
}

impl FilterSet {
    pub fn from_members(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = 0u64;
        for m in members {
            assert!(m < n);
            mask |= 1 << m;
        }
        FilterSet { mask, n }
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask >> x & 1 == 1
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.contains(x)).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Check the filter axioms: contains top, closed under times, upward
    /// closed. Returns the first violated axiom otherwise.
    pub fn check_filter(&self, a: &ResiduatedLattice) -> Result<(), FilterError> {
        if !self.contains(a.top()) {
            return Err(FilterError::NotAFilter("does not contain top".into()));
        }
        for x in self.members() {
            for y in self.members() {
                if !self.contains(a.times(x, y)) {
                    return Err(FilterError::NotAFilter(format!(
                        "not closed under times at ({x}, {y})"
                    )));
                }
            }
            for y in 0..a.n() {
                if a.leq(x, y) && !self.contains(y) {
                    return Err(FilterError::NotAFilter(format!(
                        "not upward closed at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_proper(&self, a: &ResiduatedLattice) -> bool {
        !self.contains(a.bot())
    }
}

/// Smallest filter containing a subset: close under products, then upward.
pub fn filter_generated(a: &ResiduatedLattice, seed: &[usize]) -> FilterSet {
    let n = a.n();
    let mut mask = 1u64 << a.top();
    for &s in seed {
        mask |= 1 << s;
    }
    loop {
        let mut next = mask;
        let members: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
        for &x in &members {
            for &y in &members {
                next |= 1 << a.times(x, y);
            }
            for y in 0..n {
                if a.leq(x, y) {
                    next |= 1 << y;
                }
            }
        }
        if next == mask {
            return FilterSet { mask, n };
        }
        mask = next;
    }
}

/// Kernel of a state: the preimage of top. Defined for order-preserving
/// type I states and for type II states, where it is always a proper filter;
/// that fact is asserted, not assumed.
pub fn kernel(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
) -> Result<FilterSet, FilterError> {
    let cls = classify_state(a, l, s)?;
    kernel_classified(a, l, s, &cls)
}

pub fn kernel_classified(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
    cls: &StateClassification,
) -> Result<FilterSet, FilterError> {
    if !((cls.type_i && cls.order_preserving) || cls.type_ii) {
        return Err(FilterError::PreconditionNotMet(
            "kernel needs an order-preserving type I state or a type II state".into(),
        ));
    }
    let ker =
        FilterSet::from_members(a.n(), (0..a.n()).filter(|&x| s.of(x) == l.top()));
    ker.check_filter(a)
        .map_err(|e| FilterError::InternalAssertion(format!("kernel is not a filter: {e}")))?;
    if !ker.is_proper(a) {
        return Err(FilterError::InternalAssertion("kernel contains bot".into()));
    }
    Ok(ker)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterProps {
    pub proper: bool,
    pub prime: bool,
    pub maximal: bool,
}

/// Properness, primeness and maximality flags. Maximality is decided twice:
/// by scanning generated superfilters and by the power criterion (for every
/// element outside the filter some power's negation falls in); the two
/// routes must agree.
pub fn filter_props(a: &ResiduatedLattice, f: &FilterSet) -> Result<FilterProps, FilterError> {
    f.check_filter(a)?;
    let proper = f.is_proper(a);
    let prime = proper
        && (0..a.n()).all(|x| {
            (0..a.n()).all(|y| !f.contains(a.join(x, y)) || f.contains(x) || f.contains(y))
        });
    let by_scan = proper
        && (0..a.n()).filter(|&x| !f.contains(x)).all(|x| {
            let mut seed = f.members();
            seed.push(x);
            !filter_generated(a, &seed).is_proper(a)
        });
    let by_powers = proper
        && (0..a.n()).filter(|&x| !f.contains(x)).all(|x| {
            let mut v = x;
            loop {
                if f.contains(a.neg(v)) {
                    break true;
                }
                let next = a.times(v, x);
                if next == v {
                    break false;
                }
                v = next;
            }
        });
    if by_scan != by_powers {
        return Err(FilterError::InternalAssertion(
            "maximality criteria disagree".into(),
        ));
    }
    Ok(FilterProps { proper, prime, maximal: by_scan })
}

/// Quotient of an algebra by the congruence of a proper filter.
#[derive(Debug, Clone)]
pub struct QuotientAlgebra {
    pub ops: ResiduatedLattice,
    /// congruence classes, each sorted, ordered by least member
    pub classes: Vec<Vec<usize>>,
    /// carrier element -> class index
    pub proj: Vec<usize>,
}

#[allow(clippy::needless_range_loop)]
pub fn quotient(a: &ResiduatedLattice, f: &FilterSet) -> Result<QuotientAlgebra, FilterError> {
    f.check_filter(a)?;
    if !f.is_proper(a) {
        return Err(FilterError::NotAFilter("filter is not proper".into()));
    }
    let n = a.n();
    let congruent = |x: usize, y: usize| f.contains(a.bires(x, y));
    let mut proj = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if proj[x] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut class = Vec::new();
        for y in x..n {
            if congruent(x, y) {
                proj[y] = id;
                class.push(y);
            }
        }
        classes.push(class);
    }
    let k = classes.len();
    let rep = |c: usize| classes[c][0];
    let table = |op: fn(&ResiduatedLattice, usize, usize) -> usize| -> Vec<Vec<usize>> {
        (0..k).map(|x| (0..k).map(|y| proj[op(a, rep(x), rep(y))]).collect()).collect()
    };
    let raw = RawAlgebra {
        n: k,
        bot: proj[a.bot()],
        top: proj[a.top()],
        leq: None,
        join: Some(table(ResiduatedLattice::join)),
        meet: Some(table(ResiduatedLattice::meet)),
        times: table(ResiduatedLattice::times),
        imp: table(ResiduatedLattice::imp),
        names: None,
    };
    let ops = validate_lattice(raw)?;
    // induced tables must not depend on the choice of representatives, and
    // the projection must be a morphism: recheck over all carrier pairs
    let ops_list: [(&str, BinOp); 4] = [
        ("join", ResiduatedLattice::join),
        ("meet", ResiduatedLattice::meet),
        ("times", ResiduatedLattice::times),
        ("imp", ResiduatedLattice::imp),
    ];
    for (name, op) in ops_list {
        for x in 0..n {
            for y in 0..n {
                if proj[op(a, x, y)] != op(&ops, proj[x], proj[y]) {
                    return Err(FilterError::InternalAssertion(format!(
                        "projection does not commute with {name} at ({x}, {y})"
                    )));
                }
            }
        }
    }
    // class of top must be exactly the filter
    if classes[proj[a.top()]] != f.members() {
        return Err(FilterError::InternalAssertion(
            "class of top differs from the filter".into(),
        ));
    }
    Ok(QuotientAlgebra { ops, classes, proj })
}

/// The state induced on the quotient by its own kernel, with the
/// well-definedness conditions checked on every congruent pair.
pub fn induced_state(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
) -> Result<(QuotientAlgebra, StateMap), FilterError> {
    let cls = classify_state(a, l, s)?;
    let ker = kernel_classified(a, l, s, &cls)?;
    let q = quotient(a, &ker)?;
    for class in &q.classes {
        for &x in class {
            for &y in class {
                let same = s.of(x) == s.of(y)
                    && s.of(x) == s.of(a.join(x, y))
                    && s.of(x) == s.of(a.meet(x, y));
                if !same {
                    return Err(FilterError::InternalAssertion(format!(
                        "state not constant on a congruence class at ({x}, {y})"
                    )));
                }
            }
        }
    }
    let bar = StateMap::new(q.classes.iter().map(|cl| s.of(cl[0])).collect());
    let bar_cls = classify_state(&q.ops, l, &bar)?;
    if (cls.type_i && cls.order_preserving) && !(bar_cls.type_i && bar_cls.order_preserving) {
        return Err(FilterError::InternalAssertion(
            "induced state lost order-preserving type I".into(),
        ));
    }
    if cls.type_ii && !bar_cls.type_ii {
        return Err(FilterError::InternalAssertion("induced state lost type II".into()));
    }
    Ok((q, bar))
}

/// Properties of the quotient by the kernel, each guarded as stated: the
/// four-way class characterization, involutivity and MV transfer.
pub fn quotient_theorem_suite(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
) -> Result<SuiteReport, FilterError> {
    let cls = classify_state(a, l, s)?;
    let mut r = SuiteReport::new("quotient theorems");
    if !((cls.type_i && cls.order_preserving) || cls.type_ii) {
        for id in ["class_characterization", "quotient_involutive", "quotient_mv_from_divisible", "quotient_mv_from_mtl", "quotient_involutive_type_iii", "class_constant"] {
            r.skip(id, "needs order-preserving type I or type II");
        }
        return Ok(r);
    }
    let ker = kernel_classified(a, l, s, &cls)?;
    let q = quotient(a, &ker)?;
    let cls_a = classify(a);
    let cls_l = classify(l);
    let n = a.n();

    // same class forces equal values on the pair and its join and meet
    let mut l43: Option<Vec<usize>> = None;
    'l43: for x in 0..n {
        for y in 0..n {
            if q.proj[x] == q.proj[y] {
                let v = s.of(x);
                if !(v == s.of(y) && v == s.of(a.join(x, y)) && v == s.of(a.meet(x, y))) {
                    l43 = Some(vec![x, y]);
                    break 'l43;
                }
            }
        }
    }
    r.check("class_constant", l43);

    if cls.type_i && cls.order_preserving {
        let mut w: Option<Vec<usize>> = None;
        'p44: for x in 0..n {
            for y in 0..n {
                let c1 = q.proj[x] == q.proj[y];
                let c2 = s.of(a.join(x, y)) == s.of(a.meet(x, y));
                let c3 = s.of(x) == s.of(y) && s.of(x) == s.of(a.join(x, y));
                let c4 = s.of(x) == s.of(y) && s.of(x) == s.of(a.meet(x, y));
                if !(c1 == c2 && c2 == c3 && c3 == c4) {
                    w = Some(vec![x, y]);
                    break 'p44;
                }
            }
        }
        r.check("class_characterization", w);
    } else {
        r.skip("class_characterization", "order-preserving type I");
    }

    let qcls = classify(&q.ops);
    if cls.type_i && cls.order_preserving && cls_l.involutive {
        r.check("quotient_involutive", if qcls.involutive { None } else { Some(vec![]) });
    } else {
        r.skip("quotient_involutive", "order-preserving type I with involutive codomain");
    }
    if cls.type_i && cls.order_preserving && cls_a.divisible && cls_l.involutive {
        r.check("quotient_mv_from_divisible", if qcls.mv { None } else { Some(vec![]) });
    } else {
        r.skip("quotient_mv_from_divisible", "divisible domain and involutive codomain");
    }
    if cls.type_i && cls.order_preserving && cls_a.mtl && cls_l.mv {
        r.check("quotient_mv_from_mtl", if qcls.mv { None } else { Some(vec![]) });
    } else {
        r.skip("quotient_mv_from_mtl", "MTL domain and MV codomain");
    }
    if cls.type_iii {
        r.check("quotient_involutive_type_iii", if qcls.involutive { None } else { Some(vec![]) });
    } else {
        r.skip("quotient_involutive_type_iii", "type III");
    }
    Ok(r)
}

/// State-morphism characterizations: lattice-operation preservation versus
/// implication preservation, chain quotients and kernel maximality.
pub fn state_morphism_suite(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
) -> Result<SuiteReport, FilterError> {
    let cls = classify_state(a, l, s)?;
    let mut r = SuiteReport::new("state-morphism theorems");
    let ids = [
        "join_pres_implies_imp_pres", "meet_pres_implies_imp_pres", "meet_pres_implies_join_pres", "join_pres_iff_imp_pres", "imp_pres_gives_neg_product", "imp_pres_implies_product_pres", "all_three_equivalent",
        "chain_quotient_forces_morphism", "mv_quotient_maximal_kernel_forces_morphism", "morphism_forces_chain_quotient", "morphism_iff_chain_quotient", "morphism_gives_prime_kernel", "morphism_iff_prime_kernel", "morphism_gives_maximal_kernel",
    ];
    if !(cls.type_i && cls.order_preserving) {
        for id in ids {
            r.skip(id, "needs an order-preserving type I state");
        }
        return Ok(r);
    }
    let n = a.n();
    let pres = |op: fn(&ResiduatedLattice, usize, usize) -> usize| -> bool {
        (0..n).all(|x| (0..n).all(|y| s.of(op(a, x, y)) == op(l, s.of(x), s.of(y))))
    };
    let alpha = pres(ResiduatedLattice::join);
    let beta = pres(ResiduatedLattice::meet);
    let gamma = pres(ResiduatedLattice::imp);
    let delta = pres(ResiduatedLattice::times);
    let sm = cls.state_morphism;
    let cls_a = classify(a);
    let cls_l = classify(l);
    let ker = kernel_classified(a, l, s, &cls)?;
    let q = quotient(a, &ker)?;
    let ker_props = filter_props(a, &ker)?;
    let q_chain = q.ops.is_chain();

    let imp_item = |holds: bool| if holds { None } else { Some(vec![]) };
    r.check("join_pres_implies_imp_pres", imp_item(!alpha || gamma));
    r.check("meet_pres_implies_imp_pres", imp_item(!beta || gamma));
    if cls_l.involutive {
        r.check("meet_pres_implies_join_pres", imp_item(!beta || alpha));
    } else {
        r.skip("meet_pres_implies_join_pres", "involutive codomain");
    }
    if cls_l.mv {
        r.check("join_pres_iff_imp_pres", imp_item(alpha == gamma));
    } else {
        r.skip("join_pres_iff_imp_pres", "MV codomain");
    }
    if gamma {
        let mut w = None;
        'outer: for x in 0..n {
            for y in 0..n {
                if l.neg(s.of(a.times(x, y))) != l.neg(l.times(s.of(x), s.of(y))) {
                    w = Some(vec![x, y]);
                    break 'outer;
                }
            }
        }
        r.check("imp_pres_gives_neg_product", w);
    } else {
        r.skip("imp_pres_gives_neg_product", "implication not preserved");
    }
    if cls_l.involutive {
        r.check("imp_pres_implies_product_pres", imp_item(!gamma || delta));
    } else {
        r.skip("imp_pres_implies_product_pres", "involutive codomain");
    }
    if cls_a.divisible && cls_l.mv {
        r.check("all_three_equivalent", imp_item(alpha == beta && beta == gamma));
    } else {
        r.skip("all_three_equivalent", "divisible domain and MV codomain");
    }
    if q_chain {
        r.check("chain_quotient_forces_morphism", imp_item(sm));
    } else {
        r.skip("chain_quotient_forces_morphism", "quotient is not a chain");
    }
    if classify(&q.ops).mv && ker_props.maximal {
        r.check("mv_quotient_maximal_kernel_forces_morphism", imp_item(sm));
    } else {
        r.skip("mv_quotient_maximal_kernel_forces_morphism", "quotient MV with maximal kernel");
    }
    if cls_l.chain {
        r.check("morphism_forces_chain_quotient", imp_item(!sm || q_chain));
        r.check("morphism_iff_chain_quotient", imp_item(sm == q_chain));
        r.check("morphism_gives_prime_kernel", imp_item(!sm || ker_props.prime));
        if cls_a.mtl {
            r.check("morphism_iff_prime_kernel", imp_item(sm == ker_props.prime));
        } else {
            r.skip("morphism_iff_prime_kernel", "MTL domain");
        }
    } else {
        for id in ["morphism_forces_chain_quotient", "morphism_iff_chain_quotient", "morphism_gives_prime_kernel", "morphism_iff_prime_kernel"] {
            r.skip(id, "codomain is not a chain");
        }
    }
    if cls_l.simple {
        r.check("morphism_gives_maximal_kernel", imp_item(!sm || ker_props.maximal));
    } else {
        r.skip("morphism_gives_maximal_kernel", "simple codomain");
    }
    Ok(r)
}
