//! Classification flags and the arithmetic identity suite.

use serde::{Deserialize, Serialize};

use crate::algebra::ResiduatedLattice;
use crate::report::SuiteReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub mtl: bool,
    pub bl: bool,
    pub mv: bool,
    pub heyting: bool,
    pub goedel: bool,
    pub product: bool,
    pub involutive: bool,
    pub divisible: bool,
    pub glivenko: bool,
    pub simple: bool,
    pub chain: bool,
}

impl ClassificationReport {
    pub fn flag_names() -> &'static [&'static str] {
        &[
            "mtl", "bl", "mv", "heyting", "goedel", "product", "involutive", "divisible",
            "glivenko", "simple", "chain",
        ]
    }

    pub fn flags(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("mtl", self.mtl),
            ("bl", self.bl),
            ("mv", self.mv),
            ("heyting", self.heyting),
            ("goedel", self.goedel),
            ("product", self.product),
            ("involutive", self.involutive),
            ("divisible", self.divisible),
            ("glivenko", self.glivenko),
            ("simple", self.simple),
            ("chain", self.chain),
        ]
    }
}

/// Decide every class flag by exhaustively checking its defining identity.
pub fn classify(a: &ResiduatedLattice) -> ClassificationReport {
    let n = a.n();
    let all_pairs = |p: &dyn Fn(usize, usize) -> bool| -> bool {
        (0..n).all(|x| (0..n).all(|y| p(x, y)))
    };

    let mtl = all_pairs(&|x, y| a.join(a.imp(x, y), a.imp(y, x)) == a.top());
    let divisible = all_pairs(&|x, y| a.meet(x, y) == a.times(x, a.imp(x, y)));
    let bl = mtl && divisible;
    let involutive = (0..n).all(|x| a.neg(a.neg(x)) == x);
    // the symmetric-implication characterization of MV-algebras
    let mv = all_pairs(&|x, y| a.imp(a.imp(x, y), y) == a.imp(a.imp(y, x), x));
    let heyting = all_pairs(&|x, y| a.times(x, y) == a.meet(x, y));
    let goedel = bl && heyting;
    let product = bl
        && (0..n).all(|x| a.meet(x, a.neg(x)) == a.bot())
        && (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    let lhs = a.times(
                        a.neg(a.neg(z)),
                        a.imp(a.times(x, z), a.times(y, z)),
                    );
                    a.imp(lhs, a.imp(x, y)) == a.top()
                })
            })
        });
    let glivenko = all_pairs(&|x, y| a.neg(a.neg(a.imp(x, y))) == a.imp(x, a.neg(a.neg(y))));
    // simple iff every non-top element has a power hitting bot; powers of an
    // element descend, so iterate until the value stabilizes
    let simple = (0..n).filter(|&x| x != a.top()).all(|x| {
        let mut v = x;
        loop {
            let next = a.times(v, x);
            if next == v {
                break v == a.bot();
            }
            v = next;
        }
    });
    let chain = a.is_chain();

    ClassificationReport {
        mtl,
        bl,
        mv,
        heyting,
        goedel,
        product,
        involutive,
        divisible,
        glivenko,
        simple,
        chain,
    }
}

/// Exhaustively assert the arithmetic identities every residuated lattice
/// satisfies, plus the MTL and MV suites when the corresponding flags hold.
/// A failure here indicates a defect in validation, so it is reported with a
/// witness rather than thrown.
pub fn identity_suite(a: &ResiduatedLattice) -> SuiteReport {
    let n = a.n();
    let mut r = SuiteReport::new("identities");
    let top = a.top();
    let bot = a.bot();

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
    let first3 = |p: &dyn Fn(usize, usize, usize) -> bool| -> Option<Vec<usize>> {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !p(x, y, z) {
                        return Some(vec![x, y, z]);
                    }
                }
            }
        }
        None
    };
    let first4 = |p: &dyn Fn(usize, usize, usize, usize) -> bool| -> Option<Vec<usize>> {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        if !p(x, y, z, w) {
                            return Some(vec![x, y, z, w]);
                        }
                    }
                }
            }
        }
        None
    };

    // basic implication arithmetic
    r.check("imp.to_top", (0..n).find(|&x| a.imp(x, top) != top).map(|x| vec![x]));
    r.check("imp.from_top", (0..n).find(|&x| a.imp(top, x) != x).map(|x| vec![x]));
    r.check("imp.order", first2(&|x, y| a.leq(x, y) == (a.imp(x, y) == top)));
    r.check(
        "imp.antitone_monotone",
        first3(&|x, y, z| {
            !a.leq(x, y) || (a.leq(a.imp(y, z), a.imp(x, z)) && a.leq(a.imp(z, x), a.imp(z, y)))
        }),
    );
    r.check(
        "imp.sandwich",
        first2(&|x, y| {
            a.leq(a.times(x, y), a.meet(x, y))
                && a.leq(a.meet(x, y), a.bires(x, y))
                && a.leq(a.bires(x, y), a.imp(x, y))
        }),
    );
    r.check("imp.weakening", first2(&|x, y| a.leq(y, a.imp(x, y))));
    r.check("imp.modus_ponens", first2(&|x, y| a.leq(a.times(x, a.imp(x, y)), y)));
    r.check(
        "times.monotone",
        first4(&|x, y, z, w| {
            !(a.leq(x, z) && a.leq(y, w)) || a.leq(a.times(x, y), a.times(z, w))
        }),
    );
    r.check(
        "imp.currying",
        first3(&|x, y, z| {
            let lhs = a.imp(x, a.imp(y, z));
            lhs == a.imp(a.times(x, y), z) && lhs == a.imp(y, a.imp(x, z))
        }),
    );
    r.check(
        "times.join_distributive",
        first3(&|x, y, z| a.times(a.join(x, y), z) == a.join(a.times(x, z), a.times(y, z))),
    );
    r.check(
        "imp.join_meet_laws",
        first3(&|x, y, z| {
            a.imp(a.join(x, y), z) == a.meet(a.imp(x, z), a.imp(y, z))
                && a.imp(z, a.meet(x, y)) == a.meet(a.imp(z, x), a.imp(z, y))
        }),
    );
    // family form of the join law over every nonempty carrier subset
    r.check("imp.join_family", {
        let mut witness = None;
        'outer: for mask in 1u32..(1u32 << n) {
            let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let sup = a.join_all(members.iter().copied()).unwrap();
            for c in 0..n {
                let folded = a.meet_all(members.iter().map(|&x| a.imp(x, c))).unwrap();
                if a.imp(sup, c) != folded {
                    witness = Some(vec![mask as usize, c]);
                    break 'outer;
                }
            }
        }
        witness
    });

    // biresiduum properties
    r.check("bires.separates", first2(&|x, y| (a.bires(x, y) == top) == (x == y)));
    r.check("bires.symmetric", first2(&|x, y| a.bires(x, y) == a.bires(y, x)));
    r.check(
        "bires.transitive",
        first3(&|x, y, z| a.leq(a.times(a.bires(x, y), a.bires(y, z)), a.bires(x, z))),
    );
    r.check(
        "bires.negation",
        first2(&|x, y| a.leq(a.bires(x, y), a.bires(a.neg(x), a.neg(y)))),
    );
    r.check("bires.congruence", {
        let mut witness = None;
        'outer: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        let lhs = a.times(a.bires(x, y), a.bires(z, w));
                        let ops: [fn(&ResiduatedLattice, usize, usize) -> usize; 5] = [
                            ResiduatedLattice::join,
                            ResiduatedLattice::meet,
                            ResiduatedLattice::times,
                            ResiduatedLattice::imp,
                            ResiduatedLattice::bires,
                        ];
                        for (k, op) in ops.iter().enumerate() {
                            if !a.leq(lhs, a.bires(op(a, x, z), op(a, y, w))) {
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

    // negation arithmetic
    r.check(
        "neg.bounds",
        if a.neg(bot) == top && a.neg(top) == bot { None } else { Some(vec![]) },
    );
    r.check("neg.orthogonal", first2(&|x, y| a.leq(x, a.neg(y)) == (a.times(x, y) == bot)));
    r.check_with_note(
        "neg.double_triple",
        first2(&|x, _| a.leq(x, a.neg(a.neg(x))) && a.neg(a.neg(a.neg(x))) == a.neg(x)),
        "triple negation asserted in the idempotent form ---a = -a; the stronger ---a = a holds only in involutive algebras",
    );
    r.check("neg.antitone", first2(&|x, y| !a.leq(x, y) || a.leq(a.neg(y), a.neg(x))));
    r.check(
        "neg.contraposition",
        first2(&|x, y| a.leq(a.imp(x, y), a.imp(a.neg(y), a.neg(x)))),
    );
    r.check(
        "neg.de_morgan_times",
        first2(&|x, y| {
            let lhs = a.neg(a.times(x, y));
            lhs == a.imp(x, a.neg(y)) && lhs == a.imp(y, a.neg(x))
        }),
    );

    let cls = classify(a);
    if cls.mtl {
        r.check(
            "mtl.join_formula",
            first2(&|x, y| {
                a.join(x, y) == a.meet(a.imp(a.imp(x, y), y), a.imp(a.imp(y, x), x))
            }),
        );
    } else {
        r.skip("mtl.join_formula", "algebra is not MTL");
    }

    if cls.mv {
        let oplus = |x: usize, y: usize| a.neg(a.times(a.neg(x), a.neg(y)));
        r.check("mv.excluded_middle", {
            (0..n).find(|&x| oplus(x, a.neg(x)) != top).map(|x| vec![x])
        });
        r.check(
            "mv.de_morgan_1",
            first2(&|x, y| a.neg(a.times(x, y)) == oplus(a.neg(x), a.neg(y))),
        );
        r.check(
            "mv.de_morgan_2",
            first2(&|x, y| a.neg(oplus(x, y)) == a.times(a.neg(x), a.neg(y))),
        );
        r.check(
            "mv.plus_meet_distributive",
            first3(&|x, y, z| oplus(x, a.meet(y, z)) == a.meet(oplus(x, y), oplus(x, z))),
        );
        r.check("mv.imp_join_family", {
            let mut witness = None;
            'outer: for mask in 1u32..(1u32 << n) {
                let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let sup = a.join_all(members.iter().copied()).unwrap();
                for c in 0..n {
                    let folded = a.join_all(members.iter().map(|&x| a.imp(c, x))).unwrap();
                    if a.imp(c, sup) != folded {
                        witness = Some(vec![mask as usize, c]);
                        break 'outer;
                    }
                }
            }
            witness
        });
        r.check("mv.imp_meet_family", {
            let mut witness = None;
            'outer: for mask in 1u32..(1u32 << n) {
                let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let inf = a.meet_all(members.iter().copied()).unwrap();
                for c in 0..n {
                    let folded = a.join_all(members.iter().map(|&x| a.imp(x, c))).unwrap();
                    if a.imp(inf, c) != folded {
                        witness = Some(vec![mask as usize, c]);
                        break 'outer;
                    }
                }
            }
            witness
        });
    } else {
        for id in [
            "mv.excluded_middle",
            "mv.de_morgan_1",
            "mv.de_morgan_2",
            "mv.plus_meet_distributive",
            "mv.imp_join_family",
            "mv.imp_meet_family",
        ] {
            r.skip(id, "algebra is not MV");
        }
    }

    r
}
