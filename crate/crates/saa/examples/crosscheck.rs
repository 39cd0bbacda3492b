//! One-off randomized cross-validation of the classifier (not part of the
//! test suite; kept as an example for manual deep runs).

use saa::algebra::{Algebra, Presentation};
use saa::canon::{classify, Classification};
use saa::gf::FieldSpec;
use saa::symlin::random_symplectic;

fn label_of(alg: &Algebra) -> String {
    match classify(alg).unwrap() {
        Classification::Canonical(c) => c.label.to_string(),
        Classification::Unsupported { center_dim, .. } => format!("unsupported({center_dim})"),
    }
}

fn main() {
    let mut checked = 0usize;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let field = FieldSpec::parse(&format!("gf({q})")).unwrap();
        for seed in 0..120u64 {
            let density = 0.15 + 0.1 * ((seed % 7) as f64);
            let pres = Presentation::random_nilpotent(&field, 5, 90_000 + seed, density).unwrap();
            let alg = Algebra::build(pres).unwrap();
            let base = label_of(&alg);
            for change in 0..4u64 {
                let m = random_symplectic(&field, 5, 7_000 + 31 * seed + change, 35).unwrap();
                let moved = alg.change_basis(&m).unwrap();
                let got = label_of(&moved);
                assert_eq!(base, got, "GF({q}) seed {seed} change {change}");
                checked += 1;
            }
        }
    }
    println!("stability: {checked} classifications agreed");

    // isomorphic <=> equal canonical labels, on random catalog-class pairs
    let field = FieldSpec::prime(3).unwrap();
    let mut pairs = 0usize;
    for seed in 0..60u64 {
        let a = Algebra::build(
            Presentation::random_nilpotent(&field, 5, 60_000 + seed, 0.35).unwrap(),
        )
        .unwrap();
        let b = Algebra::build(
            Presentation::random_nilpotent(&field, 5, 61_000 + seed, 0.35).unwrap(),
        )
        .unwrap();
        let (la, lb) = (label_of(&a), label_of(&b));
        if la.starts_with("unsupported") || lb.starts_with("unsupported") {
            continue;
        }
        let verdict = saa::canon::isomorphic(&a, &b).unwrap();
        let expect = if la == lb {
            saa::canon::IsoVerdict::Isomorphic
        } else {
            saa::canon::IsoVerdict::NotIsomorphic
        };
        assert_eq!(verdict, expect, "seed {seed}: {la} vs {lb}");
        pairs += 1;
    }
    println!("isomorphism: {pairs} pairs consistent");
}
