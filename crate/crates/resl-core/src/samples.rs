//! Ready-made small algebras used by tests, docs and the catalog anchors.

use crate::algebra::{validate_lattice, RawAlgebra, ResiduatedLattice};

/// The bundled six-element algebra (order 0 < d < c < a < 1, 0 < b < a).
pub const R36_JSON: &str = include_str!("../../../fixtures/r36.json");

pub fn r36() -> ResiduatedLattice {
    let raw: RawAlgebra = serde_json::from_str(R36_JSON).expect("bundled fixture parses");
    validate_lattice(raw).expect("bundled fixture validates")
}

fn chain_leq(n: usize) -> Vec<Vec<u8>> {
    (0..n).map(|a| (0..n).map(|b| u8::from(a <= b)).collect()).collect()
}

/// n-element chain with the Goedel operations (times = min).
pub fn chain_goedel(n: usize) -> ResiduatedLattice {
    assert!(n >= 2);
    let times = (0..n).map(|a| (0..n).map(|b| a.min(b)).collect()).collect();
    let imp = (0..n)
        .map(|a| (0..n).map(|b| if a <= b { n - 1 } else { b }).collect())
        .collect();
    validate_lattice(RawAlgebra {
        n,
        bot: 0,
        top: n - 1,
        leq: Some(chain_leq(n)),
        join: None,
        meet: None,
        times,
        imp,
        names: None,
    })
    .expect("Goedel chain validates")
}

/// n-element chain with the Lukasiewicz operations (element i plays i/(n-1)).
pub fn chain_lukasiewicz(n: usize) -> ResiduatedLattice {
    assert!(n >= 2);
    let m = n - 1;
    let times = (0..n)
        .map(|a| (0..n).map(|b| (a + b).saturating_sub(m)).collect())
        .collect();
    let imp = (0..n).map(|a| (0..n).map(|b| (m - a + b).min(m)).collect()).collect();
    validate_lattice(RawAlgebra {
        n,
        bot: 0,
        top: m,
        leq: Some(chain_leq(n)),
        join: None,
        meet: None,
        times,
        imp,
        names: None,
    })
    .expect("Lukasiewicz chain validates")
}

/// The two-element Boolean algebra.
pub fn boolean2() -> ResiduatedLattice {
    chain_goedel(2)
}

/// The four-element Boolean algebra 2x2 (0, two atoms, 1).
pub fn diamond_boolean() -> ResiduatedLattice {
    let leq = vec![
        vec![1, 1, 1, 1],
        vec![0, 1, 0, 1],
        vec![0, 0, 1, 1],
        vec![0, 0, 0, 1],
    ];
    let meet = |a: usize, b: usize| -> usize {
        // bitmask semantics: 0=00, 1=01, 2=10, 3=11
        a & b
    };
    let times: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| meet(a, b)).collect()).collect();
    let imp = (0..4).map(|a| (0..4).map(|b| (!a & 3) | b).collect()).collect();
    validate_lattice(RawAlgebra {
        n: 4,
        bot: 0,
        top: 3,
        leq: Some(leq),
        join: None,
        meet: None,
        times,
        imp,
        names: None,
    })
    .expect("Boolean square validates")
}

/// Every bundled sample, for loops in tests.
pub fn all_samples() -> Vec<ResiduatedLattice> {
    vec![
        boolean2(),
        chain_goedel(3),
        chain_goedel(4),
        chain_lukasiewicz(3),
        chain_lukasiewicz(4),
        diamond_boolean(),
        r36(),
    ]
}
