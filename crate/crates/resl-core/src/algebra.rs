//! Finite residuated lattices: validation and derived operations.
//!
//! An algebra is a carrier `0..n` with an order table, lattice operations,
//! a commutative monoid `times` with the top element as identity, and an
//! implication `imp` tied to `times` by the law of residuation
//! `a <= imp(b, c)  iff  times(a, b) <= c`.
//!
//! Elements are plain indices. The order is a full boolean table rather
//! than a Hasse diagram, so every axiom check is a small nested loop and
//! every violation can name the lexicographically first witness tuple.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("table shape invalid: {0}")]
    Shape(String),
    #[error("bounds wrong: {0}")]
    BoundsWrong(String),
    #[error("not a lattice: {reason} (witness {witness:?})")]
    NotALattice { reason: String, witness: Vec<usize> },
    #[error("not a monoid: {reason} (witness {witness:?})")]
    NotAMonoid { reason: String, witness: Vec<usize> },
    #[error("residuation fails at a={a}, b={b}, c={c}")]
    ResiduationFails { a: usize, b: usize, c: usize },
}

/// Raw input tables before validation. Either `leq` or the `join`/`meet`
/// pair may be supplied; the validator derives the missing representation
/// and cross-checks both when all are given.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawAlgebra {
    pub n: usize,
    pub bot: usize,
    pub top: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<Vec<u8>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meet: Option<Vec<Vec<usize>>>,
    pub times: Vec<Vec<usize>>,
    pub imp: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

/// A binary operation read off a validated algebra.
pub type BinOp = fn(&ResiduatedLattice, usize, usize) -> usize;

/// A validated finite residuated lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResiduatedLattice {
    n: usize,
    bot: usize,
    top: usize,
    leq: Vec<bool>,
    join: Vec<usize>,
    meet: Vec<usize>,
    times: Vec<usize>,
    imp: Vec<usize>,
    names: Option<Vec<String>>,
}

impl ResiduatedLattice {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn bot(&self) -> usize {
        self.bot
    }

    #[inline]
    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b]
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b]
    }

    #[inline]
    pub fn times(&self, a: usize, b: usize) -> usize {
        self.times[a * self.n + b]
    }

    #[inline]
    pub fn imp(&self, a: usize, b: usize) -> usize {
        self.imp[a * self.n + b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.imp(a, self.bot)
    }

    /// Biresiduum: `meet(imp(a, b), imp(b, a))`. Equals top exactly when a = b.
    #[inline]
    pub fn bires(&self, a: usize, b: usize) -> usize {
        self.meet(self.imp(a, b), self.imp(b, a))
    }

    /// `a` minus `b`: `times(a, neg(b))`.
    #[inline]
    pub fn monus(&self, a: usize, b: usize) -> usize {
        self.times(a, self.neg(b))
    }

    /// k-th power under `times`; `pow(a, 0)` is top.
    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut acc = self.top;
        for _ in 0..k {
            acc = self.times(acc, a);
        }
        acc
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name_of(&self, a: usize) -> String {
        match &self.names {
            Some(names) => names[a].clone(),
            None => a.to_string(),
        }
    }

    /// Resolve an element given either its name or its decimal index.
    pub fn element_by_name(&self, token: &str) -> Option<usize> {
        if let Some(names) = &self.names {
            if let Some(i) = names.iter().position(|s| s == token) {
                return Some(i);
            }
        }
        token.parse::<usize>().ok().filter(|&i| i < self.n)
    }

    /// Supremum of a nonempty element set.
    pub fn join_all(&self, set: impl IntoIterator<Item = usize>) -> Option<usize> {
        let mut it = set.into_iter();
        let first = it.next()?;
        Some(it.fold(first, |acc, x| self.join(acc, x)))
    }

    /// Infimum of a nonempty element set.
    pub fn meet_all(&self, set: impl IntoIterator<Item = usize>) -> Option<usize> {
        let mut it = set.into_iter();
        let first = it.next()?;
        Some(it.fold(first, |acc, x| self.meet(acc, x)))
    }

    /// True when every pair of elements is comparable.
    pub fn is_chain(&self) -> bool {
        for a in 0..self.n {
            for b in 0..self.n {
                if !self.leq(a, b) && !self.leq(b, a) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_raw(&self) -> RawAlgebra {
        let grid = |t: &[usize]| -> Vec<Vec<usize>> {
            (0..self.n).map(|a| t[a * self.n..(a + 1) * self.n].to_vec()).collect()
        };
        RawAlgebra {
            n: self.n,
            bot: self.bot,
            top: self.top,
            leq: Some(
                (0..self.n)
                    .map(|a| (0..self.n).map(|b| u8::from(self.leq(a, b))).collect())
                    .collect(),
            ),
            join: Some(grid(&self.join)),
            meet: Some(grid(&self.meet)),
            times: grid(&self.times),
            imp: grid(&self.imp),
            names: self.names.clone(),
        }
    }

    /// Relabel the carrier through a permutation `perm` (`perm[old] = new`).
    /// The result is revalidated; a valid input always relabels to a valid
    /// algebra.
    pub fn relabel(&self, perm: &[usize]) -> Result<ResiduatedLattice, AlgebraError> {
        assert_eq!(perm.len(), self.n);
        let n = self.n;
        let mut leq = vec![0u8; 0];
        let mut times = vec![vec![0usize; n]; n];
        let mut imp = vec![vec![0usize; n]; n];
        let mut leq_rows = vec![vec![0u8; n]; n];
        for a in 0..n {
            for b in 0..n {
                leq_rows[perm[a]][perm[b]] = u8::from(self.leq(a, b));
                times[perm[a]][perm[b]] = perm[self.times(a, b)];
                imp[perm[a]][perm[b]] = perm[self.imp(a, b)];
            }
        }
        leq.clear();
        let names = self.names.as_ref().map(|ns| {
            let mut out = vec![String::new(); n];
            for a in 0..n {
                out[perm[a]] = ns[a].clone();
            }
            out
        });
        validate_lattice(RawAlgebra {
            n,
            bot: perm[self.bot],
            top: perm[self.top],
            leq: Some(leq_rows),
            join: None,
            meet: None,
            times,
            imp,
            names,
        })
    }
}

fn flatten(n: usize, what: &str, t: &[Vec<usize>]) -> Result<Vec<usize>, AlgebraError> {
    if t.len() != n || t.iter().any(|row| row.len() != n) {
        return Err(AlgebraError::Shape(format!("{what} table is not {n}x{n}")));
    }
    let flat: Vec<usize> = t.iter().flatten().copied().collect();
    if let Some(&bad) = flat.iter().find(|&&x| x >= n) {
        return Err(AlgebraError::Shape(format!("{what} entry {bad} out of range 0..{n}")));
    }
    Ok(flat)
}

/// Validate raw tables into a residuated lattice, or report the first
/// violated axiom with its lexicographically first witness tuple.
pub fn validate_lattice(raw: RawAlgebra) -> Result<ResiduatedLattice, AlgebraError> {
    let n = raw.n;
    if n < 2 {
        return Err(AlgebraError::BoundsWrong(
            "carrier must have at least two elements (bot != top)".into(),
        ));
    }
    if raw.bot >= n || raw.top >= n {
        return Err(AlgebraError::BoundsWrong("bot/top index out of range".into()));
    }
    if raw.bot == raw.top {
        return Err(AlgebraError::BoundsWrong("bot and top coincide".into()));
    }
    if let Some(names) = &raw.names {
        if names.len() != n {
            return Err(AlgebraError::Shape("names length differs from n".into()));
        }
    }

    let times = flatten(n, "times", &raw.times)?;
    let imp = flatten(n, "imp", &raw.imp)?;

    // Order table: given directly, or read off the join table via a<=b iff a v b = b.
    let leq: Vec<bool> = match (&raw.leq, &raw.join) {
        (Some(rows), _) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(AlgebraError::Shape(format!("leq table is not {n}x{n}")));
            }
            rows.iter().flatten().map(|&x| x != 0).collect()
        }
        (None, Some(join_rows)) => {
            let join = flatten(n, "join", join_rows)?;
            (0..n * n).map(|i| join[i] == i % n).collect()
        }
        (None, None) => {
            return Err(AlgebraError::Shape("need either leq or join/meet tables".into()));
        }
    };
    let le = |a: usize, b: usize| leq[a * n + b];

    // Partial order axioms.
    for a in 0..n {
        if !le(a, a) {
            return Err(AlgebraError::NotALattice {
                reason: "order not reflexive".into(),
                witness: vec![a],
            });
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && le(a, b) && le(b, a) {
                return Err(AlgebraError::NotALattice {
                    reason: "order not antisymmetric".into(),
                    witness: vec![a, b],
                });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if le(a, b) && le(b, c) && !le(a, c) {
                    return Err(AlgebraError::NotALattice {
                        reason: "order not transitive".into(),
                        witness: vec![a, b, c],
                    });
                }
            }
        }
    }

    for a in 0..n {
        if !le(raw.bot, a) {
            return Err(AlgebraError::BoundsWrong(format!("bot is not below element {a}")));
        }
        if !le(a, raw.top) {
            return Err(AlgebraError::BoundsWrong(format!("top is not above element {a}")));
        }
    }

    // Binary sups and infs must exist; build or cross-check the tables.
    let mut join = vec![0usize; n * n];
    let mut meet = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            let uppers: Vec<usize> = (0..n).filter(|&c| le(a, c) && le(b, c)).collect();
            let sup = uppers.iter().copied().find(|&j| uppers.iter().all(|&c| le(j, c)));
            let lowers: Vec<usize> = (0..n).filter(|&c| le(c, a) && le(c, b)).collect();
            let inf = lowers.iter().copied().find(|&m| lowers.iter().all(|&c| le(c, m)));
            match (sup, inf) {
                (Some(j), Some(m)) => {
                    join[a * n + b] = j;
                    meet[a * n + b] = m;
                }
                _ => {
                    return Err(AlgebraError::NotALattice {
                        reason: "pair lacks a least upper or greatest lower bound".into(),
                        witness: vec![a, b],
                    });
                }
            }
        }
    }
    if let Some(given) = &raw.join {
        let given = flatten(n, "join", given)?;
        if let Some(i) = (0..n * n).find(|&i| given[i] != join[i]) {
            return Err(AlgebraError::NotALattice {
                reason: "join table disagrees with the order".into(),
                witness: vec![i / n, i % n],
            });
        }
    }
    if let Some(given) = &raw.meet {
        let given = flatten(n, "meet", given)?;
        if let Some(i) = (0..n * n).find(|&i| given[i] != meet[i]) {
            return Err(AlgebraError::NotALattice {
                reason: "meet table disagrees with the order".into(),
                witness: vec![i / n, i % n],
            });
        }
    }

    // Commutative monoid with top as identity.
    let tm = |a: usize, b: usize| times[a * n + b];
    for a in 0..n {
        if tm(a, raw.top) != a || tm(raw.top, a) != a {
            return Err(AlgebraError::NotAMonoid {
                reason: "top is not an identity for times".into(),
                witness: vec![a],
            });
        }
    }
    for a in 0..n {
        for b in 0..n {
            if tm(a, b) != tm(b, a) {
                return Err(AlgebraError::NotAMonoid {
                    reason: "times not commutative".into(),
                    witness: vec![a, b],
                });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if tm(tm(a, b), c) != tm(a, tm(b, c)) {
                    return Err(AlgebraError::NotAMonoid {
                        reason: "times not associative".into(),
                        witness: vec![a, b, c],
                    });
                }
            }
        }
    }

    // Law of residuation.
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if le(a, imp[b * n + c]) != le(tm(a, b), c) {
                    return Err(AlgebraError::ResiduationFails { a, b, c });
                }
            }
        }
    }

    Ok(ResiduatedLattice {
        n,
        bot: raw.bot,
        top: raw.top,
        leq,
        join,
        meet,
        times,
        imp,
        names: raw.names,
    })
}

/// Computed view over an algebra: negation vector, biresiduum and monus
/// tables. Idempotent with respect to the underlying algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedOps {
    pub neg: Vec<usize>,
    pub bires: Vec<Vec<usize>>,
    pub monus: Vec<Vec<usize>>,
}

pub fn derived(a: &ResiduatedLattice) -> DerivedOps {
    let n = a.n();
    DerivedOps {
        neg: (0..n).map(|x| a.neg(x)).collect(),
        bires: (0..n).map(|x| (0..n).map(|y| a.bires(x, y)).collect()).collect(),
        monus: (0..n).map(|x| (0..n).map(|y| a.monus(x, y)).collect()).collect(),
    }
}
