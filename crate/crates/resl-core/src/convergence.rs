//! Similarity relations, eventually-stable sequences, and the completion of
//! an algebra along an order-preserving type I state.
//!
//! On a finite carrier an increasing sequence stabilizes at its supremum,
//! so similarity convergence reduces to eventual stability and every Cauchy
//! sequence is eventually confined to one kernel class. Sequences are
//! therefore represented as a finite prefix plus a constant tail, and the
//! completion is realized on the kernel quotient while the defining clauses
//! of the abstract construction are verified directly against it.

use thiserror::Error;

use crate::algebra::ResiduatedLattice;
use crate::classify::classify;
use crate::filter::{kernel_classified, quotient, FilterError, QuotientAlgebra};
use crate::report::SuiteReport;
use crate::state::{self, classify_state, StateError, StateMap};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConvError {
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("no morphism satisfies the factorization: {0}")]
    NoSuchMorphism(String),
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Filter(#[from] FilterError),
}

/// A lattice-valued similarity relation on a finite set: reflexive at top,
/// symmetric, and transitive under the codomain product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityTable {
    size: usize,
    table: Vec<usize>,
    /// top value forces identity of the arguments
    pub is_equality: bool,
}

impl SimilarityTable {
    pub fn new(
        l: &ResiduatedLattice,
        size: usize,
        table: Vec<usize>,
    ) -> Result<SimilarityTable, ConvError> {
        assert_eq!(table.len(), size * size);
        let at = |x: usize, y: usize| table[x * size + y];
        for x in 0..size {
            if at(x, x) != l.top() {
                return Err(ConvError::InternalAssertion(format!("not reflexive at {x}")));
            }
            for y in 0..size {
                if at(x, y) != at(y, x) {
                    return Err(ConvError::InternalAssertion(format!(
                        "not symmetric at ({x}, {y})"
                    )));
                }
                for z in 0..size {
                    if !l.leq(l.times(at(x, y), at(y, z)), at(x, z)) {
                        return Err(ConvError::InternalAssertion(format!(
                            "not transitive at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        let is_equality = (0..size).all(|x| (0..size).all(|y| at(x, y) != l.top() || x == y));
        Ok(SimilarityTable { size, table, is_equality })
    }

    #[inline]
    pub fn value(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y]
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// The biresiduum of an algebra as a similarity table on itself (always an
/// equality).
pub fn bires_similarity(l: &ResiduatedLattice) -> SimilarityTable {
    let n = l.n();
    let table = (0..n * n).map(|i| l.bires(i / n, i % n)).collect();
    SimilarityTable::new(l, n, table).expect("biresiduum satisfies the similarity axioms")
}

/// Similarity induced by an order-preserving type I state: the image of the
/// domain biresiduum. The equality flag must coincide with faithfulness.
pub fn similarity_of_state(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
) -> Result<SimilarityTable, ConvError> {
    let cls = classify_state(a, l, s)?;
    if !(cls.type_i && cls.order_preserving) {
        return Err(ConvError::PreconditionNotMet(
            "similarity needs an order-preserving type I state".into(),
        ));
    }
    let n = a.n();
    let table = (0..n * n).map(|i| s.of(a.bires(i / n, i % n))).collect();
    let sim = SimilarityTable::new(l, n, table)?;
    if sim.is_equality != cls.faithful {
        return Err(ConvError::InternalAssertion(
            "equality flag disagrees with faithfulness".into(),
        ));
    }
    Ok(sim)
}

/// A sequence that takes finitely many prescribed values and is constant
/// afterwards. Every convergent or Cauchy sequence over a finite carrier is
/// of this shape up to kernel class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventuallyStableSequence {
    pub prefix: Vec<usize>,
    pub tail: usize,
}

impl EventuallyStableSequence {
    pub fn constant(v: usize) -> Self {
        EventuallyStableSequence { prefix: Vec::new(), tail: v }
    }

    pub fn new(prefix: Vec<usize>, tail: usize) -> Self {
        EventuallyStableSequence { prefix, tail }
    }

    #[inline]
    pub fn at(&self, k: usize) -> usize {
        if k < self.prefix.len() {
            self.prefix[k]
        } else {
            self.tail
        }
    }

    pub fn map(&self, f: impl Fn(usize) -> usize) -> Self {
        EventuallyStableSequence {
            prefix: self.prefix.iter().map(|&x| f(x)).collect(),
            tail: f(self.tail),
        }
    }
}

/// Whether the sequence similarity-converges to `w` in the carrier of `l`:
/// some increasing sequence with supremum top must bound the biresiduum to
/// `w` from below, which over a finite carrier happens exactly when the
/// biresiduum is eventually top.
pub fn converges_to(l: &ResiduatedLattice, seq: &EventuallyStableSequence, w: usize) -> bool {
    l.bires(seq.tail, w) == l.top()
}

/// Limit of an eventually stable sequence; verifies uniqueness by scanning
/// every candidate limit.
pub fn seq_limit(l: &ResiduatedLattice, seq: &EventuallyStableSequence) -> usize {
    let limit = seq.tail;
    debug_assert!(converges_to(l, seq, limit));
    debug_assert!(
        (0..l.n()).all(|w| converges_to(l, seq, w) == (w == limit)),
        "limit not unique"
    );
    limit
}

/// Convergence with respect to a similarity table: the similarity to the
/// target must tend to top.
pub fn e_converges_to(
    l: &ResiduatedLattice,
    e: &SimilarityTable,
    seq: &EventuallyStableSequence,
    target: usize,
) -> bool {
    let values = seq.map(|x| e.value(x, target));
    seq_limit(l, &values) == l.top()
}

/// Cauchy with respect to a similarity table, via the iterated double limit
/// of pair similarities.
pub fn is_e_cauchy(
    l: &ResiduatedLattice,
    e: &SimilarityTable,
    seq: &EventuallyStableSequence,
) -> bool {
    let horizon = seq.prefix.len() + 1;
    // inner limit in m for each fixed n, then the limit of those in n
    let inner: Vec<usize> = (0..horizon)
        .map(|n| {
            let row = seq.map(|x| e.value(seq.at(n), x));
            seq_limit(l, &row)
        })
        .collect();
    let outer = EventuallyStableSequence::new(inner.clone(), inner[horizon - 1]);
    seq_limit(l, &outer) == l.top()
}

/// Direct-definition oracle: from some index on, all pair similarities
/// are exactly top.
pub fn is_e_cauchy_oracle(
    l: &ResiduatedLattice,
    e: &SimilarityTable,
    seq: &EventuallyStableSequence,
) -> bool {
    let horizon = seq.prefix.len() + 2;
    (0..=horizon).any(|k| {
        (k..horizon).all(|n| (k..horizon).all(|m| e.value(seq.at(n), seq.at(m)) == l.top()))
    })
}

/// Completion of an algebra along an order-preserving type I state,
/// realized on the kernel quotient, with the defining clauses of the
/// sequence construction verified directly.
#[derive(Debug, Clone)]
pub struct CompletionResult {
    pub completed: ResiduatedLattice,
    pub quotient: QuotientAlgebra,
    /// embedding of the base algebra (the class projection)
    pub embed: Vec<usize>,
    /// the lifted state on the completed algebra
    pub lifted: StateMap,
    pub rho_tilde: SimilarityTable,
    pub clauses: SuiteReport,
}

pub fn completion(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
) -> Result<CompletionResult, ConvError> {
    let cls = classify_state(a, l, s)?;
    if !(cls.type_i && cls.order_preserving) {
        return Err(ConvError::PreconditionNotMet(
            "completion needs an order-preserving type I state".into(),
        ));
    }
    let ker = kernel_classified(a, l, s, &cls)?;
    let q = quotient(a, &ker)?;
    let completed = q.ops.clone();
    let embed = q.proj.clone();
    let lifted = StateMap::new(q.classes.iter().map(|c| s.of(c[0])).collect());

    let mut clauses = SuiteReport::new("completion clauses");

    // carrier is a residuated lattice (revalidated through the quotient
    // constructor), involutive whenever the codomain is
    clauses.check("carrier_is_residuated_lattice", None);
    if classify(l).involutive {
        clauses.check(
            "involutive_transfer",
            if classify(&completed).involutive { None } else { Some(vec![]) },
        );
    } else {
        clauses.skip("involutive_transfer", "codomain not involutive");
    }

    // the lifted state is a faithful order-preserving type I state
    let lifted_cls = classify_state(&completed, l, &lifted)?;
    clauses.check(
        "lifted_state_faithful_op_type_i",
        if lifted_cls.type_i && lifted_cls.order_preserving && lifted_cls.faithful {
            None
        } else {
            Some(vec![])
        },
    );

    // the embedding is a morphism and factors the state through the lift
    let embed_ok = state::check_morphism(a, &completed, &embed).is_ok();
    let factors = (0..a.n()).all(|x| lifted.of(embed[x]) == s.of(x));
    clauses.check("embed_factorizes", if embed_ok && factors { None } else { Some(vec![]) });

    // injectivity of the embedding is exactly faithfulness of the state
    let injective = {
        let mut seen = vec![false; completed.n()];
        let mut inj = true;
        for x in 0..a.n() {
            if seen[embed[x]] {
                inj = false;
            }
            seen[embed[x]] = true;
        }
        inj
    };
    clauses.check(
        "injective_iff_faithful",
        if injective == cls.faithful { None } else { Some(vec![]) },
    );

    // the similarity computed from class representatives must be well
    // defined and agree with the similarity of the lifted state
    let k = completed.n();
    let mut rep_table = vec![l.bot(); k * k];
    let mut well_defined = true;
    for ci in 0..k {
        for cj in 0..k {
            let canon = s.of(a.bires(q.classes[ci][0], q.classes[cj][0]));
            for &x in &q.classes[ci] {
                for &y in &q.classes[cj] {
                    if s.of(a.bires(x, y)) != canon {
                        well_defined = false;
                    }
                }
            }
            rep_table[ci * k + cj] = canon;
        }
    }
    let rho_tilde = SimilarityTable::new(l, k, rep_table)?;
    let rho_of_lifted = similarity_of_state(&completed, l, &lifted)?;
    clauses.check(
        "similarity_transfers",
        if well_defined && rho_tilde == rho_of_lifted { None } else { Some(vec![]) },
    );

    // convergence carries over: a sequence converging in the base maps to a
    // sequence converging to the embedded target
    let rho = similarity_of_state(a, l, s)?;
    let mut conv_witness: Option<Vec<usize>> = None;
    'conv: for tail in 0..a.n() {
        for target in 0..a.n() {
            for p in 0..a.n() {
                let seq = EventuallyStableSequence::new(vec![p], tail);
                if e_converges_to(l, &rho, &seq, target) {
                    let mapped = seq.map(|x| embed[x]);
                    if !e_converges_to(l, &rho_tilde, &mapped, embed[target]) {
                        conv_witness = Some(vec![p, tail, target]);
                        break 'conv;
                    }
                }
            }
        }
    }
    clauses.check("convergence_preserved", conv_witness);

    Ok(CompletionResult { completed, quotient: q, embed, lifted, rho_tilde, clauses })
}

/// Result of checking the universal property of a completion against a
/// candidate cone.
#[derive(Debug, Clone)]
pub struct UniversalArrow {
    pub arrow: Vec<usize>,
    /// whether the factorizing morphism was the only one (decided by
    /// exhaustive scan; reported per instance, never assumed)
    pub unique: bool,
}

/// Given a faithful order-preserving type I state `m` on `c` and a morphism
/// `f` with `m . f = s`, produce the morphism out of the completion that
/// factors both, and scan all maps for uniqueness.
pub fn universal_property_check(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
    c: &ResiduatedLattice,
    m: &StateMap,
    f: &[usize],
) -> Result<UniversalArrow, ConvError> {
    let m_cls = classify_state(c, l, m)?;
    if !(m_cls.type_i && m_cls.order_preserving && m_cls.faithful) {
        return Err(ConvError::PreconditionNotMet(
            "target state must be a faithful order-preserving type I state".into(),
        ));
    }
    state::check_morphism(a, c, f)?;
    if (0..a.n()).any(|x| m.of(f[x]) != s.of(x)) {
        return Err(ConvError::PreconditionNotMet(
            "morphism does not factor the state through the target".into(),
        ));
    }
    let comp = completion(a, l, s)?;
    let k = comp.completed.n();
    // value on a class is the limit of f over representatives; constant
    // representatives make that the plain image, which must not depend on
    // the choice
    let mut arrow = vec![0usize; k];
    for (ci, class) in comp.quotient.classes.iter().enumerate() {
        let v = f[class[0]];
        if class.iter().any(|&x| f[x] != v) {
            return Err(ConvError::NoSuchMorphism(
                "image map not constant on a kernel class".into(),
            ));
        }
        arrow[ci] = v;
    }
    let satisfies = |g: &[usize]| -> bool {
        state::check_morphism(&comp.completed, c, g).is_ok()
            && (0..k).all(|x| m.of(g[x]) == comp.lifted.of(x))
            && (0..a.n()).all(|x| g[comp.embed[x]] == f[x])
    };
    if !satisfies(&arrow) {
        return Err(ConvError::NoSuchMorphism(
            "constructed arrow fails the factorization equations".into(),
        ));
    }
    // exhaustive scan over all maps out of the completion
    let mut count = 0usize;
    let mut g = vec![0usize; k];
    'scan: loop {
        if satisfies(&g) {
            count += 1;
        }
        let mut i = k;
        loop {
            if i == 0 {
                break 'scan;
            }
            i -= 1;
            g[i] += 1;
            if g[i] < c.n() {
                break;
            }
            g[i] = 0;
        }
    }
    Ok(UniversalArrow { arrow, unique: count == 1 })
}

/// Arithmetic of the similarity induced by an order-preserving type I
/// state: compatibility with negation and the binary operations, the bound
/// by the codomain biresiduum with equality on comparable pairs, and the
/// equality flag matching faithfulness.
pub fn similarity_suite(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
) -> Result<SuiteReport, ConvError> {
    let rho = similarity_of_state(a, l, s)?;
    let cls = classify_state(a, l, s)?;
    let mut r = SuiteReport::new("similarity arithmetic");
    let n = a.n();
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
    r.check(
        "neg_compatible",
        first2(&|x, y| l.leq(rho.value(x, y), rho.value(a.neg(x), a.neg(y)))),
    );
    r.check("op_congruence", {
        let ops: [fn(&ResiduatedLattice, usize, usize) -> usize; 5] = [
            ResiduatedLattice::join,
            ResiduatedLattice::meet,
            ResiduatedLattice::times,
            ResiduatedLattice::imp,
            ResiduatedLattice::bires,
        ];
        let mut witness = None;
        'outer: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        let lhs = l.times(rho.value(x, y), rho.value(z, w));
                        for (k, op) in ops.iter().enumerate() {
                            if !l.leq(lhs, rho.value(op(a, x, z), op(a, y, w))) {
                                witness = Some(vec![x, y, z, w, k]);
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        witness
    });
    r.check(
        "below_value_bires",
        first2(&|x, y| l.leq(rho.value(x, y), l.bires(s.of(x), s.of(y)))),
    );
    r.check(
        "comparable_exact",
        first2(&|x, y| {
            !(a.leq(x, y) || a.leq(y, x)) || rho.value(x, y) == l.bires(s.of(x), s.of(y))
        }),
    );
    r.check("bires_double_congruence", {
        let mut witness = None;
        'outer: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        let lhs = l.times(rho.value(x, z), rho.value(y, w));
                        let rhs = l.bires(rho.value(x, y), rho.value(z, w));
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
    // similarity axioms, re-stated as items (the constructor also asserts)
    r.check("reflexive", (0..n).find(|&x| rho.value(x, x) != l.top()).map(|x| vec![x]));
    r.check("symmetric", first2(&|x, y| rho.value(x, y) == rho.value(y, x)));
    r.check("transitive", {
        let mut witness = None;
        'outer: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !l.leq(l.times(rho.value(x, y), rho.value(y, z)), rho.value(x, z)) {
                        witness = Some(vec![x, y, z]);
                        break 'outer;
                    }
                }
            }
        }
        witness
    });
    r.check(
        "equality_iff_faithful",
        if rho.is_equality == cls.faithful { None } else { Some(vec![]) },
    );
    Ok(r)
}

/// Continuity of a state along monotone and similarity-convergent
/// eventually-stable sequences, with the guard structure of the continuity
/// statements. Finite carriers make each applicable item hold; the suite
/// regression-guards the sequence machinery.
pub fn continuity_suite(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
    max_prefix: usize,
) -> Result<SuiteReport, ConvError> {
    let cls = classify_state(a, l, s)?;
    let mut r = SuiteReport::new("continuity");
    let n = a.n();

    // every monotone eventually-stable sequence with prefix up to the bound
    let mut prefixes: Vec<Vec<usize>> = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_prefix {
        let mut next = Vec::new();
        for p in &frontier {
            for x in 0..n {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        prefixes.extend(next.iter().cloned());
        frontier = next;
    }
    let mut up_seqs: Vec<EventuallyStableSequence> = Vec::new();
    let mut down_seqs: Vec<EventuallyStableSequence> = Vec::new();
    for p in &prefixes {
        for tail in 0..n {
            let increasing = p.windows(2).all(|w| a.leq(w[0], w[1]))
                && p.last().is_none_or(|&x| a.leq(x, tail));
            let decreasing = p.windows(2).all(|w| a.leq(w[1], w[0]))
                && p.last().is_none_or(|&x| a.leq(tail, x));
            if increasing {
                up_seqs.push(EventuallyStableSequence::new(p.clone(), tail));
            }
            if decreasing {
                down_seqs.push(EventuallyStableSequence::new(p.clone(), tail));
            }
        }
    }

    // an increasing eventually-stable sequence has its tail as supremum;
    // up-continuity asks the image sequence to converge to the image
    let up_cont = up_seqs.iter().all(|seq| {
        let image = seq.map(|x| s.of(x));
        converges_to(l, &image, s.of(seq.tail))
    });
    r.check("up_continuous", if up_cont { None } else { Some(vec![]) });
    let down_cont = down_seqs.iter().all(|seq| {
        let image = seq.map(|x| s.of(x));
        converges_to(l, &image, s.of(seq.tail))
    });
    r.check("down_continuous", if down_cont { None } else { Some(vec![]) });

    if classify(l).involutive && cls.type_i {
        r.check(
            "down_implies_up.type_i",
            if !down_cont || up_cont { None } else { Some(vec![]) },
        );
    } else {
        r.skip("down_implies_up.type_i", "type I with involutive codomain");
    }
    if cls.type_ii {
        r.check(
            "down_implies_up.type_ii",
            if !down_cont || up_cont { None } else { Some(vec![]) },
        );
    } else {
        r.skip("down_implies_up.type_ii", "type II");
    }

    if cls.type_i && cls.order_preserving {
        let rho = similarity_of_state(a, l, s)?;
        let mut witness: Option<Vec<usize>> = None;
        'outer: for p in &prefixes {
            for tail in 0..n {
                let seq = EventuallyStableSequence::new(p.clone(), tail);
                for target in 0..n {
                    if e_converges_to(l, &rho, &seq, target) {
                        let image = seq.map(|x| s.of(x));
                        if !converges_to(l, &image, s.of(target)) {
                            witness = Some(vec![tail, target]);
                            break 'outer;
                        }
                    }
                }
            }
        }
        r.check("similarity_continuous", witness);
    } else {
        r.skip("similarity_continuous", "order-preserving type I");
    }

    // a finite bounded lattice is sigma-complete: every nonempty subset has
    // a supremum and an infimum
    let sigma = (1u32..(1u32 << n)).all(|mask| {
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let sup = a.join_all(members.iter().copied()).unwrap();
        let inf = a.meet_all(members.iter().copied()).unwrap();
        members.iter().all(|&x| a.leq(x, sup) && a.leq(inf, x))
    });
    r.check("sigma_complete", if sigma { None } else { Some(vec![]) });

    if cls.type_i && cls.order_preserving && cls.faithful {
        // with a faithful state over complete carriers, up-continuity at top
        let up_at_top = up_seqs.iter().filter(|seq| seq.tail == a.top()).all(|seq| {
            let image = seq.map(|x| s.of(x));
            converges_to(l, &image, l.top())
        });
        r.check("up_continuous_at_top", if up_at_top { None } else { Some(vec![]) });
    } else {
        r.skip("up_continuous_at_top", "faithful order-preserving type I");
    }

    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use crate::state::{enumerate_states, Budget, ClassFilter};

    fn st(table: [usize; 6]) -> StateMap {
        StateMap::new(table.to_vec())
    }

    #[test]
    fn bires_is_an_equality() {
        for l in samples::all_samples() {
            let sim = bires_similarity(&l);
            assert!(sim.is_equality);
        }
    }

    #[test]
    fn similarity_of_identity_is_bires() {
        let a = samples::r36();
        let sim = similarity_of_state(&a, &a, &StateMap::identity(&a)).unwrap();
        assert_eq!(sim, bires_similarity(&a));
        assert!(sim.is_equality);
    }

    #[test]
    fn similarity_of_s6_is_not_an_equality() {
        let a = samples::r36();
        let s6 = st([0, 5, 5, 0, 0, 5]);
        let sim = similarity_of_state(&a, &a, &s6).unwrap();
        // d(c, 0) = b and s6(b) = 1 although c != 0
        assert_eq!(sim.value(3, 0), 5);
        assert!(!sim.is_equality);
    }

    #[test]
    fn similarity_rejects_non_order_preserving_states() {
        let a = samples::r36();
        let s1 = st([0, 1, 0, 5, 1, 5]);
        assert!(matches!(
            similarity_of_state(&a, &a, &s1),
            Err(ConvError::PreconditionNotMet(_))
        ));
    }

    #[test]
    fn limits_of_eventually_stable_sequences() {
        let l = samples::r36();
        let constant = EventuallyStableSequence::constant(1);
        assert_eq!(seq_limit(&l, &constant), 1);
        let seq = EventuallyStableSequence::new(vec![0, 2], 1);
        assert_eq!(seq_limit(&l, &seq), 1);
        // two representations with the same tail share the limit
        let other = EventuallyStableSequence::new(vec![5, 5, 5], 1);
        assert_eq!(seq_limit(&l, &other), 1);
    }

    #[test]
    fn cauchy_checks_agree() {
        let a = samples::r36();
        let s6 = st([0, 5, 5, 0, 0, 5]);
        let rho = similarity_of_state(&a, &a, &s6).unwrap();
        let d = bires_similarity(&a);
        let ker = crate::filter::kernel(&a, &a, &s6).unwrap();
        for prefix in [vec![], vec![0], vec![0, 2], vec![5, 1, 3]] {
            for tail in 0..a.n() {
                let seq = EventuallyStableSequence::new(prefix.clone(), tail);
                for e in [&rho, &d] {
                    let fast = is_e_cauchy(&a, e, &seq);
                    let slow = is_e_cauchy_oracle(&a, e, &seq);
                    assert_eq!(fast, slow);
                    assert!(fast, "eventually stable sequences are Cauchy");
                }
                // for the state similarity, Cauchy must agree with the
                // kernel-class oracle: some suffix stays in one class
                let horizon = seq.prefix.len() + 2;
                let ker_oracle = (0..=horizon).any(|k| {
                    (k..horizon).all(|i| {
                        (k..horizon)
                            .all(|j| ker.contains(a.bires(seq.at(i), seq.at(j))))
                    })
                });
                assert_eq!(is_e_cauchy(&a, &rho, &seq), ker_oracle);
            }
        }
    }

    #[test]
    fn rho_convergence_is_kernel_class_membership() {
        let a = samples::r36();
        let s6 = st([0, 5, 5, 0, 0, 5]);
        let rho = similarity_of_state(&a, &a, &s6).unwrap();
        let ker = crate::filter::kernel(&a, &a, &s6).unwrap();
        for tail in 0..a.n() {
            for target in 0..a.n() {
                let seq = EventuallyStableSequence::new(vec![0], tail);
                let conv = e_converges_to(&a, &rho, &seq, target);
                let same_class = ker.contains(a.bires(tail, target));
                assert_eq!(conv, same_class);
            }
        }
    }

    #[test]
    fn completion_of_s6_is_two_element() {
        let a = samples::r36();
        let s6 = st([0, 5, 5, 0, 0, 5]);
        let comp = completion(&a, &a, &s6).unwrap();
        assert_eq!(comp.completed.n(), 2);
        assert!(comp.clauses.passed(), "{}", comp.clauses);
        // s6 is not faithful, so the embedding cannot be injective
        assert!(matches!(
            comp.clauses.item("injective_iff_faithful").unwrap().status,
            crate::report::ItemStatus::Passed
        ));
        assert_eq!(comp.embed, vec![0, 1, 1, 0, 0, 1]);
    }

    #[test]
    fn completion_of_identity_is_isomorphic_copy() {
        let a = samples::r36();
        let comp = completion(&a, &a, &StateMap::identity(&a)).unwrap();
        assert_eq!(comp.completed.n(), 6);
        assert!(comp.clauses.passed(), "{}", comp.clauses);
    }

    #[test]
    fn completion_of_s3_has_injective_lift() {
        let a = samples::r36();
        let s3 = st([0, 5, 0, 5, 5, 5]);
        let comp = completion(&a, &a, &s3).unwrap();
        assert_eq!(comp.completed.n(), 2);
        assert!(comp.clauses.passed(), "{}", comp.clauses);
        assert_ne!(comp.lifted.of(0), comp.lifted.of(1));
    }

    #[test]
    fn completion_clauses_over_enumerated_states() {
        for a in [samples::r36(), samples::chain_goedel(4), samples::diamond_boolean()] {
            for s in enumerate_states(
                &a,
                &a,
                ClassFilter::order_preserving_type_i(),
                Budget::default(),
            )
            .unwrap()
            {
                let comp = completion(&a, &a, &s).unwrap();
                assert!(comp.clauses.passed(), "state {s:?}:\n{}", comp.clauses);
            }
        }
    }

    #[test]
    fn universal_property_against_itself() {
        let a = samples::r36();
        let s6 = st([0, 5, 5, 0, 0, 5]);
        let comp = completion(&a, &a, &s6).unwrap();
        let arrow =
            universal_property_check(&a, &a, &s6, &comp.completed, &comp.lifted, &comp.embed)
                .unwrap();
        assert_eq!(arrow.arrow, vec![0, 1]);
        assert!(arrow.unique);
    }

    #[test]
    fn universal_property_through_projection() {
        // s3 factors through the two-element algebra: the kernel projection
        // composed with the bounds inclusion recovers it
        let a = samples::r36();
        let s3 = st([0, 5, 0, 5, 5, 5]);
        let b = samples::boolean2();
        let inclusion = StateMap::new(vec![0, 5]);
        let f: Vec<usize> = vec![0, 1, 0, 1, 1, 1];
        let arrow = universal_property_check(&a, &a, &s3, &b, &inclusion, &f).unwrap();
        assert!(arrow.unique);
        assert_eq!(arrow.arrow, vec![0, 1]);
    }

    #[test]
    fn universal_property_rejects_non_factoring_morphism() {
        let a = samples::r36();
        let s3 = st([0, 5, 0, 5, 5, 5]);
        let b = samples::boolean2();
        let inclusion = StateMap::new(vec![0, 5]);
        // the kernel projection of s6 does not factor s3
        let f: Vec<usize> = vec![0, 1, 1, 0, 0, 1];
        assert!(matches!(
            universal_property_check(&a, &a, &s3, &b, &inclusion, &f),
            Err(ConvError::PreconditionNotMet(_)) | Err(ConvError::State(_))
        ));
    }

    #[test]
    fn similarity_suite_on_enumerated_states() {
        for a in [samples::r36(), samples::chain_lukasiewicz(4)] {
            for s in enumerate_states(
                &a,
                &a,
                ClassFilter::order_preserving_type_i(),
                Budget::default(),
            )
            .unwrap()
            {
                let rep = similarity_suite(&a, &a, &s).unwrap();
                assert!(rep.passed(), "state {s:?}:\n{rep}");
            }
        }
    }

    #[test]
    fn continuity_suite_on_states() {
        let a = samples::r36();
        let s4 = st([0, 5, 2, 3, 3, 5]);
        let rep = continuity_suite(&a, &a, &s4, 3).unwrap();
        assert!(rep.passed(), "{rep}");

        let rep = continuity_suite(&a, &a, &StateMap::identity(&a), 2).unwrap();
        assert!(rep.passed(), "{rep}");

        // s1 is not order-preserving: the similarity item is skipped
        let s1 = st([0, 1, 0, 5, 1, 5]);
        let rep = continuity_suite(&a, &a, &s1, 2).unwrap();
        assert!(matches!(
            rep.item("similarity_continuous").unwrap().status,
            crate::report::ItemStatus::Skipped { .. }
        ));
    }
}
