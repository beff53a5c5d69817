//! Catalog of all small residuated lattices up to isomorphism, and the
//! exhaustive open-problem scans that run over it.
//!
//! Generation: enumerate bounded lattice orders on a fixed carrier (bot at
//! index 0, top at the last index), then search the compatible commutative
//! monoid tables whose residua exist, keeping one representative per
//! isomorphism class. The canonical form of an algebra is the minimum, over
//! all carrier permutations fixing bot and top, of the concatenated order,
//! product and implication tables.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{validate_lattice, RawAlgebra, ResiduatedLattice};
use crate::classify::{classify, ClassificationReport};
use crate::state::{census, classify_state, Budget, ClassFilter, StateError, StateMap};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("budget exceeded: {candidates} raw candidates over budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u64 },
    #[error("catalog io: {0}")]
    Io(String),
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
    #[error(transparent)]
    State(#[from] StateError),
}

pub type CanonicalForm = Vec<u8>;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: String,
    pub algebra: ResiduatedLattice,
    pub canonical: CanonicalForm,
    pub classification: ClassificationReport,
}

/// Largest order the canonical-form machinery is sized for.
pub const DEFAULT_MAX_ORDER: usize = 6;

fn permute_tables(a: &ResiduatedLattice, perm: &[usize]) -> (Vec<u8>, Vec<u8>, Vec<u8>) {
    let n = a.n();
    let mut leq = vec![0u8; n * n];
    let mut times = vec![0u8; n * n];
    let mut imp = vec![0u8; n * n];
    for x in 0..n {
        for y in 0..n {
            let (px, py) = (perm[x], perm[y]);
            leq[px * n + py] = u8::from(a.leq(x, y));
            times[px * n + py] = perm[a.times(x, y)] as u8;
            imp[px * n + py] = perm[a.imp(x, y)] as u8;
        }
    }
    (leq, times, imp)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Minimum relabeling of the concatenated tables over all permutations that
/// send bot to position 0 and top to the last position.
pub fn canonical_form(a: &ResiduatedLattice) -> CanonicalForm {
    let n = a.n();
    let middles: Vec<usize> = (0..n).filter(|&x| x != a.bot() && x != a.top()).collect();
    let mut best: Option<CanonicalForm> = None;
    for mid_perm in permutations(&middles) {
        let mut perm = vec![0usize; n];
        perm[a.bot()] = 0;
        perm[a.top()] = n - 1;
        for (slot, &element) in mid_perm.iter().enumerate() {
            perm[element] = slot + 1;
        }
        let (leq, times, imp) = permute_tables(a, &perm);
        let mut form = leq;
        form.extend(times);
        form.extend(imp);
        if best.as_ref().is_none_or(|b| form < *b) {
            best = Some(form);
        }
    }
    best.expect("carrier is nonempty")
}

/// Explicit isomorphism search (bot and top are forced onto each other).
pub fn find_isomorphism(a: &ResiduatedLattice, b: &ResiduatedLattice) -> Option<Vec<usize>> {
    if a.n() != b.n() {
        return None;
    }
    let n = a.n();
    let a_mid: Vec<usize> = (0..n).filter(|&x| x != a.bot() && x != a.top()).collect();
    let b_mid: Vec<usize> = (0..n).filter(|&x| x != b.bot() && x != b.top()).collect();
    for assignment in permutations(&b_mid) {
        let mut perm = vec![0usize; n];
        perm[a.bot()] = b.bot();
        perm[a.top()] = b.top();
        for (k, &src) in a_mid.iter().enumerate() {
            perm[src] = assignment[k];
        }
        let ok = (0..n).all(|x| {
            (0..n).all(|y| {
                a.leq(x, y) == b.leq(perm[x], perm[y])
                    && perm[a.times(x, y)] == b.times(perm[x], perm[y])
                    && perm[a.imp(x, y)] == b.imp(perm[x], perm[y])
            })
        });
        if ok {
            return Some(perm);
        }
    }
    None
}

/// All bounded lattice orders on `0..n` with bot 0 and top n-1, one
/// representative per isomorphism class, as row-major order tables.
fn bounded_lattice_orders(n: usize) -> Vec<Vec<bool>> {
    assert!(n >= 2);
    let mid: Vec<usize> = (1..n - 1).collect();
    let m = mid.len();
    let pair_count = m * m.saturating_sub(1) / 2;
    let mut reps: BTreeMap<Vec<u8>, Vec<bool>> = BTreeMap::new();
    let mid_perms = permutations(&mid);
    for code in 0..3usize.pow(pair_count as u32) {
        let mut leq = vec![false; n * n];
        for x in 0..n {
            leq[x * n + x] = true;
            leq[x] = true; // bot is below everything
            leq[x * n + (n - 1)] = true;
        }
        let mut c = code;
        let mut ok = true;
        for i in 0..m {
            for j in (i + 1)..m {
                let choice = c % 3;
                c /= 3;
                match choice {
                    0 => {}
                    1 => leq[mid[i] * n + mid[j]] = true,
                    _ => leq[mid[j] * n + mid[i]] = true,
                }
            }
        }
        // transitivity
        'trans: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if leq[x * n + y] && leq[y * n + z] && !leq[x * n + z] {
                        ok = false;
                        break 'trans;
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        // every pair needs a least upper bound and a greatest lower bound
        let le = |x: usize, y: usize| leq[x * n + y];
        let lattice = (0..n).all(|x| {
            (0..n).all(|y| {
                let uppers: Vec<usize> = (0..n).filter(|&c| le(x, c) && le(y, c)).collect();
                let lowers: Vec<usize> = (0..n).filter(|&c| le(c, x) && le(c, y)).collect();
                uppers.iter().any(|&j| uppers.iter().all(|&c| le(j, c)))
                    && lowers.iter().any(|&mm| lowers.iter().all(|&c| le(c, mm)))
            })
        });
        if !lattice {
            continue;
        }
        // canonical representative over middle permutations
        let mut best: Option<Vec<u8>> = None;
        for p in &mid_perms {
            let mut perm = vec![0usize; n];
            perm[n - 1] = n - 1;
            for (slot, &e) in p.iter().enumerate() {
                perm[e] = slot + 1;
            }
            let mut bytes = vec![0u8; n * n];
            for x in 0..n {
                for y in 0..n {
                    bytes[perm[x] * n + perm[y]] = u8::from(leq[x * n + y]);
                }
            }
            if best.as_ref().is_none_or(|b| bytes < *b) {
                best = Some(bytes);
            }
        }
        let key = best.unwrap();
        let canon_is_self = key
            .iter()
            .zip(leq.iter())
            .all(|(&b, &l)| (b == 1) == l);
        if canon_is_self {
            reps.entry(key).or_insert(leq);
        }
    }
    reps.into_values().collect()
}

type PartialProduct<'x> = &'x dyn Fn(&[Option<usize>], usize, usize) -> Option<usize>;

/// Multiplication-table search over one lattice order: commutative,
/// associative, monotone, top-identity tables below the meet whose residua
/// all exist. Calls `sink` with each validated algebra.
fn search_products(
    n: usize,
    leq: &[bool],
    sink: &mut dyn FnMut(ResiduatedLattice),
) {
    let le = |x: usize, y: usize| leq[x * n + y];
    let join_of = |x: usize, y: usize| -> usize {
        (0..n)
            .filter(|&c| le(x, c) && le(y, c))
            .find(|&j| (0..n).filter(|&c| le(x, c) && le(y, c)).all(|c| le(j, c)))
            .expect("lattice order")
    };
    let meet_of = |x: usize, y: usize| -> usize {
        (0..n)
            .filter(|&c| le(c, x) && le(c, y))
            .find(|&mm| (0..n).filter(|&c| le(c, x) && le(c, y)).all(|c| le(c, mm)))
            .expect("lattice order")
    };
    // free cells: unordered middle pairs
    let mid: Vec<usize> = (1..n - 1).collect();
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for (i, &x) in mid.iter().enumerate() {
        for &y in &mid[i..] {
            cells.push((x, y));
        }
    }
    let cell_index: BTreeMap<(usize, usize), usize> =
        cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut values: Vec<Option<usize>> = vec![None; cells.len()];

    // product of two elements under a partial assignment
    let product = |values: &[Option<usize>], x: usize, y: usize| -> Option<usize> {
        if x == n - 1 {
            return Some(y);
        }
        if y == n - 1 {
            return Some(x);
        }
        if x == 0 || y == 0 {
            return Some(0);
        }
        values[cell_index[&(x.min(y), x.max(y))]]
    };

    fn consistent(
        n: usize,
        le: &dyn Fn(usize, usize) -> bool,
        product: &dyn Fn(usize, usize) -> Option<usize>,
    ) -> bool {
        // monotonicity on every determined pair of products
        for x in 0..n {
            for y in 0..n {
                let Some(v) = product(x, y) else { continue };
                for x2 in 0..n {
                    for y2 in 0..n {
                        if le(x, x2) && le(y, y2) {
                            if let Some(v2) = product(x2, y2) {
                                if !le(v, v2) {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
        // associativity on every fully determined triple
        for x in 0..n {
            for y in 0..n {
                let Some(xy) = product(x, y) else { continue };
                for z in 0..n {
                    if let (Some(l), Some(yz)) = (product(xy, z), product(y, z)) {
                        if let Some(r) = product(x, yz) {
                            if l != r {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    #[allow(clippy::too_many_arguments, clippy::needless_range_loop)]
    fn dfs(
        n: usize,
        leq: &[bool],
        cells: &[(usize, usize)],
        depth: usize,
        values: &mut Vec<Option<usize>>,
        le: &dyn Fn(usize, usize) -> bool,
        meet_of: &dyn Fn(usize, usize) -> usize,
        join_of: &dyn Fn(usize, usize) -> usize,
        product: PartialProduct<'_>,
        sink: &mut dyn FnMut(ResiduatedLattice),
    ) {
        if depth == cells.len() {
            // residua must exist: the set of divisors below a target needs
            // a maximum
            let times = |x: usize, y: usize| product(values, x, y).unwrap();
            let mut imp = vec![vec![0usize; n]; n];
            for x in 0..n {
                for y in 0..n {
                    let divisors: Vec<usize> =
                        (0..n).filter(|&c| le(times(c, x), y)).collect();
                    let sup = divisors.iter().copied().fold(0, &join_of);
                    if !divisors.contains(&sup) || !le(times(sup, x), y) {
                        return;
                    }
                    imp[x][y] = sup;
                }
            }
            let raw = RawAlgebra {
                n,
                bot: 0,
                top: n - 1,
                leq: Some(
                    (0..n)
                        .map(|x| (0..n).map(|y| u8::from(leq[x * n + y])).collect())
                        .collect(),
                ),
                join: None,
                meet: None,
                times: (0..n).map(|x| (0..n).map(|y| times(x, y)).collect()).collect(),
                imp,
                names: None,
            };
            if let Ok(alg) = validate_lattice(raw) {
                sink(alg);
            }
            return;
        }
        let (x, y) = cells[depth];
        let cap = meet_of(x, y);
        for v in 0..n {
            if !le(v, cap) {
                continue;
            }
            values[depth] = Some(v);
            let prod = |a: usize, b: usize| product(values, a, b);
            if consistent(n, le, &prod) {
                dfs(n, leq, cells, depth + 1, values, le, meet_of, join_of, product, sink);
            }
        }
        values[depth] = None;
    }

    dfs(
        n,
        leq,
        &cells,
        0,
        &mut values,
        &le,
        &meet_of,
        &join_of,
        &product,
        sink,
    );
}

/// Enumerate all residuated lattices of one order up to isomorphism. A
/// canonical-form collision across distinct candidates is re-verified by an
/// explicit isomorphism search.
pub fn enumerate_lattices(order: usize, budget: Budget) -> Result<Vec<CatalogEntry>, CatalogError> {
    if order < 2 {
        return Ok(Vec::new());
    }
    let orders = bounded_lattice_orders(order);
    // raw candidates: order-compatible product tables (each free cell ranges
    // over the elements below the pair meet), summed across lattice orders
    let candidates: u128 = orders
        .iter()
        .map(|leq| {
            let le = |x: usize, y: usize| leq[x * order + y];
            let meet_of = |x: usize, y: usize| -> usize {
                (0..order)
                    .filter(|&c| le(c, x) && le(c, y))
                    .find(|&m| (0..order).filter(|&c| le(c, x) && le(c, y)).all(|c| le(c, m)))
                    .expect("lattice order")
            };
            let mut total: u128 = 1;
            for x in 1..order.saturating_sub(1) {
                for y in x..order - 1 {
                    let cap = meet_of(x, y);
                    let choices = (0..order).filter(|&v| le(v, cap)).count() as u128;
                    total = total.saturating_mul(choices);
                }
            }
            total
        })
        .sum();
    if candidates > budget.0 as u128 {
        return Err(CatalogError::BudgetExceeded { candidates, budget: budget.0 });
    }
    let per_order: Vec<Vec<ResiduatedLattice>> = orders
        .par_iter()
        .map(|leq| {
            let mut found = Vec::new();
            search_products(order, leq, &mut |alg| found.push(alg));
            found
        })
        .collect();
    let mut dedup: BTreeMap<CanonicalForm, ResiduatedLattice> = BTreeMap::new();
    for algs in per_order {
        for alg in algs {
            let canon = canonical_form(&alg);
            if let Some(existing) = dedup.get(&canon) {
                if find_isomorphism(existing, &alg).is_none() {
                    return Err(CatalogError::InternalAssertion(
                        "canonical collision between non-isomorphic algebras".into(),
                    ));
                }
            } else {
                dedup.insert(canon, alg);
            }
        }
    }
    Ok(dedup
        .into_iter()
        .enumerate()
        .map(|(i, (canonical, algebra))| CatalogEntry {
            id: format!("o{}_{:03}", order, i + 1),
            classification: classify(&algebra),
            canonical,
            algebra,
        })
        .collect())
}

/// Unpruned reference generator: every relation assignment, every raw
/// product table, validated from scratch. Slow by design; used to
/// cross-check the pruned generator at small orders.
#[allow(clippy::needless_range_loop)]
pub fn enumerate_lattices_naive(order: usize) -> Vec<CanonicalForm> {
    assert!((2..=4).contains(&order));
    let n = order;
    let mid: Vec<usize> = (1..n - 1).collect();
    let m = mid.len();
    let pair_count = m * m.saturating_sub(1) / 2;
    let mut forms: Vec<CanonicalForm> = Vec::new();
    for code in 0..3usize.pow(pair_count as u32) {
        let mut leq = vec![false; n * n];
        for x in 0..n {
            leq[x * n + x] = true;
            leq[x] = true; // bot is below everything
            leq[x * n + (n - 1)] = true;
        }
        let mut c = code;
        for i in 0..m {
            for j in (i + 1)..m {
                match c % 3 {
                    0 => {}
                    1 => leq[mid[i] * n + mid[j]] = true,
                    _ => leq[mid[j] * n + mid[i]] = true,
                }
                c /= 3;
            }
        }
        let le = |x: usize, y: usize| leq[x * n + y];
        // all product tables over the free middle cells
        let mut cells: Vec<(usize, usize)> = Vec::new();
        for (i, &x) in mid.iter().enumerate() {
            for &y in &mid[i..] {
                cells.push((x, y));
            }
        }
        let total = n.pow(cells.len() as u32);
        for assignment in 0..total {
            let mut vals = Vec::with_capacity(cells.len());
            let mut a = assignment;
            for _ in 0..cells.len() {
                vals.push(a % n);
                a /= n;
            }
            let times: Vec<Vec<usize>> = (0..n)
                .map(|x| {
                    (0..n)
                        .map(|y| {
                            if x == n - 1 {
                                y
                            } else if y == n - 1 {
                                x
                            } else if x == 0 || y == 0 {
                                0
                            } else {
                                let key = (x.min(y), x.max(y));
                                vals[cells.iter().position(|&c| c == key).unwrap()]
                            }
                        })
                        .collect()
                })
                .collect();
            // residua by direct maximum search
            let mut imp = vec![vec![0usize; n]; n];
            let mut residuated = true;
            'imp: for x in 0..n {
                for y in 0..n {
                    let divisors: Vec<usize> =
                        (0..n).filter(|&cc| le(times[cc][x], y)).collect();
                    match divisors
                        .iter()
                        .copied()
                        .find(|&j| divisors.iter().all(|&cc| le(cc, j)))
                    {
                        Some(j) => imp[x][y] = j,
                        None => {
                            residuated = false;
                            break 'imp;
                        }
                    }
                }
            }
            if !residuated {
                continue;
            }
            let raw = RawAlgebra {
                n,
                bot: 0,
                top: n - 1,
                leq: Some(
                    (0..n)
                        .map(|x| (0..n).map(|y| u8::from(leq[x * n + y])).collect())
                        .collect(),
                ),
                join: None,
                meet: None,
                times,
                imp,
                names: None,
            };
            if let Ok(alg) = validate_lattice(raw) {
                forms.push(canonical_form(&alg));
            }
        }
    }
    forms.sort();
    forms.dedup();
    forms
}

/// Catalog over all orders from 2 to `max_order`.
pub fn build_catalog(max_order: usize, budget: Budget) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut out = Vec::new();
    for order in 2..=max_order {
        out.extend(enumerate_lattices(order, budget)?);
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
struct IndexFile {
    entries: Vec<IndexEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct IndexEntry {
    id: String,
    order: usize,
    canonical: String,
    flags: ClassificationReport,
}

fn canonical_hex(form: &[u8]) -> String {
    form.iter().map(|b| format!("{b:x}")).collect()
}

pub fn save_catalog(dir: &Path, entries: &[CatalogEntry]) -> Result<(), CatalogError> {
    fs::create_dir_all(dir).map_err(|e| CatalogError::Io(e.to_string()))?;
    let index = IndexFile {
        entries: entries
            .iter()
            .map(|e| IndexEntry {
                id: e.id.clone(),
                order: e.algebra.n(),
                canonical: canonical_hex(&e.canonical),
                flags: e.classification,
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&index).expect("index serializes");
    fs::write(dir.join("index.json"), text).map_err(|e| CatalogError::Io(e.to_string()))?;
    for e in entries {
        let text =
            serde_json::to_string_pretty(&e.algebra.to_raw()).expect("algebra serializes");
        fs::write(dir.join(format!("{}.json", e.id)), text)
            .map_err(|e| CatalogError::Io(e.to_string()))?;
    }
    Ok(())
}

pub fn load_catalog(dir: &Path) -> Result<Vec<CatalogEntry>, CatalogError> {
    let text = fs::read_to_string(dir.join("index.json"))
        .map_err(|e| CatalogError::Io(e.to_string()))?;
    let index: IndexFile =
        serde_json::from_str(&text).map_err(|e| CatalogError::Io(e.to_string()))?;
    let mut out = Vec::new();
    for ie in index.entries {
        let text = fs::read_to_string(dir.join(format!("{}.json", ie.id)))
            .map_err(|e| CatalogError::Io(e.to_string()))?;
        let raw: RawAlgebra =
            serde_json::from_str(&text).map_err(|e| CatalogError::Io(e.to_string()))?;
        let algebra = validate_lattice(raw)
            .map_err(|e| CatalogError::InternalAssertion(format!("stored algebra invalid: {e}")))?;
        let canonical = canonical_form(&algebra);
        if canonical_hex(&canonical) != ie.canonical {
            return Err(CatalogError::InternalAssertion(format!(
                "canonical form of {} changed on disk",
                ie.id
            )));
        }
        out.push(CatalogEntry {
            id: ie.id,
            classification: classify(&algebra),
            canonical,
            algebra,
        });
    }
    Ok(out)
}

/// One counterexample (or refuted implication instance) found by a scan.
/// Every finding is re-verified through a fresh classification before it is
/// reported.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanFinding {
    pub problem: String,
    pub dom: String,
    pub cod: String,
    pub state: Vec<usize>,
    pub detail: String,
    pub witness: Vec<usize>,
}

/// Sentence every scan report carries.
pub const SCAN_EVIDENCE_NOTE: &str =
    "an empty finding list is evidence at this search scale, not a proof";

fn reverify(
    a: &ResiduatedLattice,
    l: &ResiduatedLattice,
    s: &StateMap,
    confirm: impl Fn(&crate::state::StateClassification) -> bool,
) -> bool {
    classify_state(a, l, s).map(|cls| confirm(&cls)).unwrap_or(false)
}

/// Search all catalog pairs for a type II state that is not type I.
pub fn scan_type_ii_subset_type_i(
    entries: &[CatalogEntry],
    budget: Budget,
) -> Result<Vec<ScanFinding>, CatalogError> {
    let pairs: Vec<(usize, usize)> = (0..entries.len())
        .flat_map(|i| (0..entries.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<Vec<ScanFinding>, CatalogError>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let a = &entries[i].algebra;
            let l = &entries[j].algebra;
            let mut findings = Vec::new();
            for (s, cls) in census(a, l, ClassFilter::type_ii(), budget)? {
                if !cls.type_i && reverify(a, l, &s, |c| c.type_ii && !c.type_i) {
                    findings.push(ScanFinding {
                        problem: "type2-subset-type1".into(),
                        dom: entries[i].id.clone(),
                        cod: entries[j].id.clone(),
                        state: s.table.clone(),
                        detail: "type II state that is not type I".into(),
                        witness: vec![],
                    });
                }
            }
            Ok(findings)
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// For every type III state, test whether the symmetric double-implication
/// value also equals the image of the join.
pub fn scan_type_iii_join_question(
    entries: &[CatalogEntry],
    budget: Budget,
) -> Result<Vec<ScanFinding>, CatalogError> {
    let pairs: Vec<(usize, usize)> = (0..entries.len())
        .flat_map(|i| (0..entries.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<Vec<ScanFinding>, CatalogError>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let a = &entries[i].algebra;
            let l = &entries[j].algebra;
            let mut findings = Vec::new();
            for (s, _) in census(a, l, ClassFilter::type_iii(), budget)? {
                let mut witness = None;
                'outer: for x in 0..a.n() {
                    for y in 0..a.n() {
                        if s.of(a.imp(a.imp(x, y), y)) != s.of(a.join(x, y)) {
                            witness = Some(vec![x, y]);
                            break 'outer;
                        }
                    }
                }
                if let Some(w) = witness {
                    if reverify(a, l, &s, |c| c.type_iii) {
                        findings.push(ScanFinding {
                            problem: "type3-join".into(),
                            dom: entries[i].id.clone(),
                            cod: entries[j].id.clone(),
                            state: s.table.clone(),
                            detail: "type III state whose double-implication value differs from the join image"
                                .into(),
                            witness: w,
                        });
                    }
                }
            }
            Ok(findings)
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Verify, per algebra, that every order-preserving type I self-state is
/// type II exactly when the algebra is MV. Violations in either direction
/// are findings.
pub fn scan_mv_self_state_criterion(
    entries: &[CatalogEntry],
    budget: Budget,
) -> Result<Vec<ScanFinding>, CatalogError> {
    let results: Vec<Result<Vec<ScanFinding>, CatalogError>> = entries
        .par_iter()
        .map(|entry| {
            let a = &entry.algebra;
            let rows = census(a, a, ClassFilter::order_preserving_type_i(), budget)?;
            let all_type_ii = rows.iter().all(|(_, c)| c.type_ii);
            let mut findings = Vec::new();
            if entry.classification.mv != all_type_ii {
                let offender = rows
                    .iter()
                    .find(|(_, c)| !c.type_ii)
                    .map(|(s, _)| s.table.clone())
                    .unwrap_or_default();
                findings.push(ScanFinding {
                    problem: "mv-self-states".into(),
                    dom: entry.id.clone(),
                    cod: entry.id.clone(),
                    state: offender,
                    detail: if entry.classification.mv {
                        "MV algebra with an order-preserving type I self-state that is not type II"
                    } else {
                        "non-MV algebra whose order-preserving type I self-states are all type II"
                    }
                    .into(),
                    witness: vec![],
                });
            }
            Ok(findings)
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Scan report as CSV, with the evidence note as a trailing comment line.
pub fn scan_csv(findings: &[ScanFinding]) -> String {
    let mut out = String::from("problem,dom,cod,state,detail,witness\n");
    for f in findings {
        let state: Vec<String> = f.state.iter().map(|v| v.to_string()).collect();
        let witness: Vec<String> = f.witness.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            f.problem,
            f.dom,
            f.cod,
            state.join(" "),
            f.detail.replace(',', ";"),
            witness.join(" "),
        ));
    }
    out.push_str(&format!("# note: {SCAN_EVIDENCE_NOTE}\n"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn order_two_catalog_is_single_boolean() {
        let entries = enumerate_lattices(2, Budget::default()).unwrap();
        assert_eq!(entries.len(), 1);
        assert!(entries[0].classification.mv);
        assert!(find_isomorphism(&entries[0].algebra, &samples::boolean2()).is_some());
    }

    #[test]
    fn small_orders_match_naive_generator() {
        for order in [2, 3, 4] {
            let pruned: Vec<CanonicalForm> = enumerate_lattices(order, Budget::default())
                .unwrap()
                .into_iter()
                .map(|e| e.canonical)
                .collect();
            let naive = enumerate_lattices_naive(order);
            assert_eq!(pruned, naive, "catalogs differ at order {order}");
        }
    }

    #[test]
    fn known_chains_appear_in_catalog() {
        let entries = enumerate_lattices(4, Budget::default()).unwrap();
        for alg in [samples::chain_goedel(4), samples::chain_lukasiewicz(4)] {
            let canon = canonical_form(&alg);
            assert!(entries.iter().any(|e| e.canonical == canon));
        }
        let diamond = canonical_form(&samples::diamond_boolean());
        assert!(entries.iter().any(|e| e.canonical == diamond));
    }

    #[test]
    fn dedup_is_sound_at_small_orders() {
        for order in [3, 4, 5] {
            let entries = enumerate_lattices(order, Budget::default()).unwrap();
            for i in 0..entries.len() {
                for j in (i + 1)..entries.len() {
                    assert!(
                        find_isomorphism(&entries[i].algebra, &entries[j].algebra).is_none(),
                        "entries {i} and {j} of order {order} are isomorphic"
                    );
                }
            }
        }
    }

    #[test]
    fn canonical_form_is_isomorphism_invariant() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for a in samples::all_samples() {
            let canon = canonical_form(&a);
            let mut perm: Vec<usize> = (0..a.n()).collect();
            perm.shuffle(&mut rng);
            let b = a.relabel(&perm).unwrap();
            assert_eq!(canon, canonical_form(&b));
        }
    }

    #[test]
    fn catalog_roundtrips_through_disk() {
        let entries = build_catalog(3, Budget::default()).unwrap();
        let dir = std::env::temp_dir().join("resl-catalog-test");
        let _ = std::fs::remove_dir_all(&dir);
        save_catalog(&dir, &entries).unwrap();
        let loaded = load_catalog(&dir).unwrap();
        assert_eq!(loaded.len(), entries.len());
        for (a, b) in entries.iter().zip(loaded.iter()) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.canonical, b.canonical);
        }
    }

    #[test]
    fn type_ii_subset_scan_on_small_catalog() {
        let entries = build_catalog(3, Budget::default()).unwrap();
        let findings = scan_type_ii_subset_type_i(&entries, Budget::default()).unwrap();
        assert!(findings.is_empty(), "unexpected findings: {findings:?}");
    }

    #[test]
    fn mv_criterion_scan_on_small_catalog() {
        let entries = build_catalog(4, Budget::default()).unwrap();
        let findings = scan_mv_self_state_criterion(&entries, Budget::default()).unwrap();
        assert!(findings.is_empty(), "unexpected findings: {findings:?}");
    }

    #[test]
    fn scan_csv_carries_evidence_note() {
        let csv = scan_csv(&[]);
        assert!(csv.contains(SCAN_EVIDENCE_NOTE));
        assert!(csv.starts_with("problem,dom,cod"));
    }
}
